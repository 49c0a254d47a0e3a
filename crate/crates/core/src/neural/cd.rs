//! Batch normalization and channel de-differentiation for the first layer of a
//! block that fuses coordinate-derived and feature-derived inputs.

use super::matrix::Matrix;
use crate::error::{Error, Result};

pub const DEFAULT_EPS: f64 = 1e-5;
pub const DEFAULT_MOMENTUM: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMode {
    Training,
    Inference,
}

/// Per-channel batch normalization with running statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct BatchNormState {
    pub gamma: Vec<f64>,
    pub beta: Vec<f64>,
    pub running_mean: Vec<f64>,
    pub running_var: Vec<f64>,
    pub eps: f64,
    pub momentum: f64,
    pub mode: NormMode,
}

impl BatchNormState {
    /// gamma = 1, beta = 0, running mean 0, running variance 1, training mode.
    pub fn new(channels: usize) -> Self {
        Self {
            gamma: vec![1.0; channels],
            beta: vec![0.0; channels],
            running_mean: vec![0.0; channels],
            running_var: vec![1.0; channels],
            eps: DEFAULT_EPS,
            momentum: DEFAULT_MOMENTUM,
            mode: NormMode::Training,
        }
    }

    pub fn inference(mut self) -> Self {
        self.mode = NormMode::Inference;
        self
    }

    pub fn channels(&self) -> usize {
        self.gamma.len()
    }

    /// Normalizes each column. Training mode uses the batch statistics (biased
    /// variance) and updates the running estimates with the unbiased variance.
    pub fn forward(&mut self, x: &Matrix) -> Result<Matrix> {
        let c = self.channels();
        if x.cols() != c {
            return Err(Error::Config(format!(
                "batch norm over {c} channels given {} columns",
                x.cols()
            )));
        }
        let (mean, var) = match self.mode {
            NormMode::Training => {
                let n = x.rows();
                if n < 2 {
                    return Err(Error::InvalidInput(
                        "training-mode batch norm needs at least 2 rows".into(),
                    ));
                }
                let (mean, var) = column_stats(x);
                let unbias = n as f64 / (n as f64 - 1.0);
                for ch in 0..c {
                    self.running_mean[ch] =
                        (1.0 - self.momentum) * self.running_mean[ch] + self.momentum * mean[ch];
                    self.running_var[ch] = (1.0 - self.momentum) * self.running_var[ch]
                        + self.momentum * var[ch] * unbias;
                }
                (mean, var)
            }
            NormMode::Inference => (self.running_mean.clone(), self.running_var.clone()),
        };
        let mut out = x.clone();
        for r in 0..out.rows() {
            for (ch, v) in out.row_mut(r).iter_mut().enumerate() {
                let z = (*v - mean[ch]) / (var[ch] + self.eps).sqrt();
                *v = self.gamma[ch] * z + self.beta[ch];
            }
        }
        Ok(out)
    }
}

/// Per-column mean and biased variance, summed in row order.
pub fn column_stats(x: &Matrix) -> (Vec<f64>, Vec<f64>) {
    let n = x.rows() as f64;
    let mut mean = vec![0.0; x.cols()];
    for row in x.iter_rows() {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut var = vec![0.0; x.cols()];
    for row in x.iter_rows() {
        for ((s, v), m) in var.iter_mut().zip(row).zip(&mean) {
            *s += (v - m) * (v - m);
        }
    }
    var.iter_mut().for_each(|s| *s /= n);
    (mean, var)
}

/// Where normalization sits relative to the split linear map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CdVariant {
    /// relu(BN(Wx x + Wf f)) with one shared norm (`bn_x` is used).
    None,
    /// relu(Wx BN_x(x) + Wf BN_f(f)).
    Pre,
    /// relu(BN_x(Wx x) + BN_f(Wf f)).
    #[default]
    Post,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CdOutput {
    pub output: Matrix,
    pub pre_activation: Matrix,
    /// The two summands that make up `pre_activation` (before the shared norm
    /// for [`CdVariant::None`]).
    pub branches: (Matrix, Matrix),
}

/// Full linear map on `[x, f]` expressed as the sum of its two column blocks.
pub fn split_linear(x: &Matrix, f: &Matrix, wx: &Matrix, wf: &Matrix) -> Result<Matrix> {
    x.matmul_transposed(wx)?.add(&f.matmul_transposed(wf)?)
}

pub fn cd_forward(
    x: &Matrix,
    f: &Matrix,
    wx: &Matrix,
    wf: &Matrix,
    bn_x: &mut BatchNormState,
    bn_f: &mut BatchNormState,
    variant: CdVariant,
) -> Result<CdOutput> {
    if x.rows() != f.rows() {
        return Err(Error::Config(format!(
            "{} coordinate rows vs {} feature rows",
            x.rows(),
            f.rows()
        )));
    }
    if wx.rows() != wf.rows() {
        return Err(Error::Config(
            "coordinate and feature weight blocks disagree on output width".into(),
        ));
    }
    let (pre_activation, branches) = match variant {
        CdVariant::None => {
            let bx = x.matmul_transposed(wx)?;
            let bf = f.matmul_transposed(wf)?;
            let pre = bn_x.forward(&bx.add(&bf)?)?;
            (pre, (bx, bf))
        }
        CdVariant::Pre => {
            let bx = bn_x.forward(x)?.matmul_transposed(wx)?;
            let bf = bn_f.forward(f)?.matmul_transposed(wf)?;
            (bx.add(&bf)?, (bx, bf))
        }
        CdVariant::Post => {
            let bx = bn_x.forward(&x.matmul_transposed(wx)?)?;
            let bf = bn_f.forward(&f.matmul_transposed(wf)?)?;
            (bx.add(&bf)?, (bx, bf))
        }
    };
    Ok(CdOutput {
        output: pre_activation.map(|v| v.max(0.0)),
        pre_activation,
        branches,
    })
}
