use super::matrix::{dot, Matrix};
use crate::error::{Error, Result};
use crate::geometry::RngStream;

/// A dense layer `y = W x + b`, optionally followed by a rectifier.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer {
    weight: Matrix,
    bias: Option<Vec<f64>>,
    rectify: bool,
    grad_weight: Matrix,
    grad_bias: Option<Vec<f64>>,
}

impl DenseLayer {
    /// `weight` is laid out (out x in).
    pub fn new(weight: Matrix, bias: Option<Vec<f64>>, rectify: bool) -> Result<Self> {
        if let Some(b) = &bias {
            if b.len() != weight.rows() {
                return Err(Error::Config(format!(
                    "bias has {} entries for {} outputs",
                    b.len(),
                    weight.rows()
                )));
            }
        }
        Ok(Self {
            grad_weight: Matrix::zeros(weight.rows(), weight.cols()),
            grad_bias: bias.as_ref().map(|b| vec![0.0; b.len()]),
            weight,
            bias,
            rectify,
        })
    }

    pub fn in_width(&self) -> usize {
        self.weight.cols()
    }

    pub fn out_width(&self) -> usize {
        self.weight.rows()
    }

    pub fn weight(&self) -> &Matrix {
        &self.weight
    }

    pub fn weight_mut(&mut self) -> &mut Matrix {
        &mut self.weight
    }

    pub fn bias(&self) -> Option<&[f64]> {
        self.bias.as_deref()
    }

    pub fn bias_mut(&mut self) -> Option<&mut [f64]> {
        self.bias.as_deref_mut()
    }

    pub fn has_bias(&self) -> bool {
        self.bias.is_some()
    }

    pub fn rectify(&self) -> bool {
        self.rectify
    }

    pub fn grad_weight(&self) -> &Matrix {
        &self.grad_weight
    }

    pub fn grad_bias(&self) -> Option<&[f64]> {
        self.grad_bias.as_deref()
    }

    pub fn param_count(&self) -> usize {
        self.weight.rows() * self.weight.cols() + self.bias.as_ref().map_or(0, Vec::len)
    }

    fn affine(&self, input: &Matrix) -> Result<Matrix> {
        let mut out = input.matmul_transposed(&self.weight)?;
        if let Some(b) = &self.bias {
            for r in 0..out.rows() {
                for (v, bv) in out.row_mut(r).iter_mut().zip(b) {
                    *v += bv;
                }
            }
        }
        Ok(out)
    }
}

/// Which layers carry a learnable bias.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BiasPolicy {
    #[default]
    All,
    FirstOnly,
    None,
}

#[derive(Debug, Clone, PartialEq)]
struct ForwardCache {
    // input to each layer; inputs[0] is the batch given to forward
    inputs: Vec<Matrix>,
    pre_activations: Vec<Matrix>,
}

/// Weights, biases and gradient buffers of a small multilayer perceptron.
///
/// Every layer but the last is followed by a rectifier.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpParams {
    layers: Vec<DenseLayer>,
    cache: Option<ForwardCache>,
}

impl MlpParams {
    /// Random initialization, uniform in [-1/sqrt(in), 1/sqrt(in)] per layer.
    pub fn new(widths: &[usize], bias: BiasPolicy, stream: &mut RngStream) -> Result<Self> {
        if widths.len() < 2 || widths.contains(&0) {
            return Err(Error::Config(format!(
                "an MLP needs at least two positive widths, got {widths:?}"
            )));
        }
        let last = widths.len() - 2;
        let layers = widths
            .windows(2)
            .enumerate()
            .map(|(l, w)| {
                let (fan_in, fan_out) = (w[0], w[1]);
                let bound = 1.0 / (fan_in as f64).sqrt();
                let weight: Vec<f64> = (0..fan_in * fan_out)
                    .map(|_| stream.uniform(-bound, bound))
                    .collect();
                let with_bias = match bias {
                    BiasPolicy::All => true,
                    BiasPolicy::FirstOnly => l == 0,
                    BiasPolicy::None => false,
                };
                let b = with_bias.then(|| {
                    (0..fan_out)
                        .map(|_| stream.uniform(-bound, bound))
                        .collect()
                });
                DenseLayer::new(Matrix::from_vec(fan_out, fan_in, weight)?, b, l != last)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            layers,
            cache: None,
        })
    }

    pub fn from_layers(layers: Vec<DenseLayer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Config("an MLP needs at least one layer".into()));
        }
        for (l, pair) in layers.windows(2).enumerate() {
            if pair[0].out_width() != pair[1].in_width() {
                return Err(Error::Config(format!(
                    "layer {l} emits {} channels but layer {} expects {}",
                    pair[0].out_width(),
                    l + 1,
                    pair[1].in_width()
                )));
            }
        }
        Ok(Self {
            layers,
            cache: None,
        })
    }

    pub fn layers(&self) -> &[DenseLayer] {
        &self.layers
    }

    /// Mutable layer access. Invalidates any cached forward pass.
    pub fn layers_mut(&mut self) -> &mut [DenseLayer] {
        self.cache = None;
        &mut self.layers
    }

    pub fn in_width(&self) -> usize {
        self.layers[0].in_width()
    }

    pub fn out_width(&self) -> usize {
        self.layers[self.layers.len() - 1].out_width()
    }

    pub fn widths(&self) -> Vec<usize> {
        std::iter::once(self.in_width())
            .chain(self.layers.iter().map(DenseLayer::out_width))
            .collect()
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(DenseLayer::param_count).sum()
    }

    /// Forward pass without touching the cache.
    pub fn infer(&self, rows: &Matrix) -> Result<Matrix> {
        self.check_input(rows)?;
        let mut x = rows.clone();
        for layer in &self.layers {
            let pre = layer.affine(&x)?;
            x = if layer.rectify { pre.map(relu) } else { pre };
        }
        Ok(x)
    }

    /// Single-row forward pass into a caller-provided buffer pair, used on hot paths.
    pub(crate) fn infer_row(&self, input: &[f64], scratch: &mut (Vec<f64>, Vec<f64>)) -> Vec<f64> {
        let (cur, next) = scratch;
        cur.clear();
        cur.extend_from_slice(input);
        for layer in &self.layers {
            next.clear();
            for o in 0..layer.out_width() {
                let mut v = dot(cur, layer.weight.row(o));
                if let Some(b) = &layer.bias {
                    v += b[o];
                }
                next.push(if layer.rectify { relu(v) } else { v });
            }
            std::mem::swap(cur, next);
        }
        cur.clone()
    }

    /// Forward pass that caches the intermediates needed by [`MlpParams::backward`].
    pub fn forward(&mut self, rows: &Matrix) -> Result<Matrix> {
        self.check_input(rows)?;
        let mut inputs = Vec::with_capacity(self.layers.len());
        let mut pre_activations = Vec::with_capacity(self.layers.len());
        let mut x = rows.clone();
        for layer in &self.layers {
            let pre = layer.affine(&x)?;
            let next = if layer.rectify { pre.map(relu) } else { pre.clone() };
            inputs.push(std::mem::replace(&mut x, next));
            pre_activations.push(pre);
        }
        self.cache = Some(ForwardCache {
            inputs,
            pre_activations,
        });
        Ok(x)
    }

    /// Reverse-mode pass for the rows of the last [`MlpParams::forward`] call.
    ///
    /// Accumulates into the gradient buffers and returns d(loss)/d(input).
    /// The rectifier's derivative at exactly 0 is taken as 0.
    pub fn backward(&mut self, rows: &Matrix, upstream: &Matrix) -> Result<Matrix> {
        let cache = self
            .cache
            .as_ref()
            .ok_or_else(|| Error::InvalidState("backward called without a forward pass".into()))?;
        if cache.inputs[0] != *rows {
            return Err(Error::InvalidState(
                "backward rows differ from the cached forward batch".into(),
            ));
        }
        if upstream.rows() != rows.rows() || upstream.cols() != self.out_width() {
            return Err(Error::Config(format!(
                "upstream gradient is {}x{}, expected {}x{}",
                upstream.rows(),
                upstream.cols(),
                rows.rows(),
                self.out_width()
            )));
        }
        let mut grad = upstream.clone();
        for (l, layer) in self.layers.iter_mut().enumerate().rev() {
            let input = &cache.inputs[l];
            if layer.rectify {
                let pre = &cache.pre_activations[l];
                for (g, &p) in grad.as_mut_slice().iter_mut().zip(pre.as_slice()) {
                    if p <= 0.0 {
                        *g = 0.0;
                    }
                }
            }
            let in_w = layer.in_width();
            for r in 0..grad.rows() {
                let g = grad.row(r);
                let x = input.row(r);
                for (o, &go) in g.iter().enumerate() {
                    if go == 0.0 {
                        continue;
                    }
                    for (w, xi) in layer.grad_weight.row_mut(o).iter_mut().zip(x) {
                        *w += go * xi;
                    }
                }
                if let Some(gb) = layer.grad_bias.as_mut() {
                    for (b, gv) in gb.iter_mut().zip(g) {
                        *b += gv;
                    }
                }
            }
            let mut down = Matrix::zeros(grad.rows(), in_w);
            for r in 0..grad.rows() {
                let g = grad.row(r);
                let d = down.row_mut(r);
                for (o, &go) in g.iter().enumerate() {
                    for (di, wi) in d.iter_mut().zip(layer.weight.row(o)) {
                        *di += go * wi;
                    }
                }
            }
            grad = down;
        }
        Ok(grad)
    }

    pub fn zero_grad(&mut self) {
        for layer in &mut self.layers {
            layer.grad_weight.as_mut_slice().fill(0.0);
            if let Some(gb) = layer.grad_bias.as_mut() {
                gb.fill(0.0);
            }
        }
    }

    /// Plain SGD with L2 decay: `p -= lr * (grad + weight_decay * p)`, then zeroes the gradients.
    pub fn sgd_step(&mut self, lr: f64, weight_decay: f64) -> Result<()> {
        if !(lr.is_finite() && lr > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "learning rate must be positive, got {lr}"
            )));
        }
        if !weight_decay.is_finite() {
            return Err(Error::InvalidArgument("weight decay must be finite".into()));
        }
        for layer in &mut self.layers {
            for (p, g) in layer
                .weight
                .as_mut_slice()
                .iter_mut()
                .zip(layer.grad_weight.as_slice())
            {
                *p -= lr * (g + weight_decay * *p);
            }
            if let (Some(b), Some(gb)) = (layer.bias.as_mut(), layer.grad_bias.as_ref()) {
                for (p, g) in b.iter_mut().zip(gb) {
                    *p -= lr * (g + weight_decay * *p);
                }
            }
        }
        self.zero_grad();
        self.cache = None;
        Ok(())
    }

    /// All parameters, layer by layer: weights row-major, then bias.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for layer in &self.layers {
            out.extend_from_slice(layer.weight.as_slice());
            if let Some(b) = &layer.bias {
                out.extend_from_slice(b);
            }
        }
        out
    }

    /// Overwrites parameters from the [`MlpParams::to_flat`] layout.
    pub fn load_flat(&mut self, values: &[f64]) -> Result<()> {
        if values.len() != self.param_count() {
            return Err(Error::Config(format!(
                "{} values for {} parameters",
                values.len(),
                self.param_count()
            )));
        }
        let mut rest = values;
        for layer in &mut self.layers {
            let (w, tail) = rest.split_at(layer.weight.as_slice().len());
            layer.weight.as_mut_slice().copy_from_slice(w);
            rest = tail;
            if let Some(b) = layer.bias.as_mut() {
                let (bv, tail) = rest.split_at(b.len());
                b.copy_from_slice(bv);
                rest = tail;
            }
        }
        self.cache = None;
        Ok(())
    }

    /// Gradient buffers in the same layout as [`MlpParams::to_flat`].
    pub fn grads_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for layer in &self.layers {
            out.extend_from_slice(layer.grad_weight.as_slice());
            if let Some(b) = &layer.grad_bias {
                out.extend_from_slice(b);
            }
        }
        out
    }

    fn check_input(&self, rows: &Matrix) -> Result<()> {
        if rows.cols() != self.in_width() {
            return Err(Error::Config(format!(
                "input has {} channels, first layer expects {}",
                rows.cols(),
                self.in_width()
            )));
        }
        Ok(())
    }
}

#[inline]
fn relu(v: f64) -> f64 {
    if v > 0.0 {
        v
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    #[test]
    fn identity_layer_passthrough() {
        let layer = DenseLayer::new(identity(3), Some(vec![0.0; 3]), false).unwrap();
        let mut mlp = MlpParams::from_layers(vec![layer]).unwrap();
        let x = Matrix::from_rows(&[vec![1.0, -2.0, 3.0]]).unwrap();
        assert_eq!(mlp.forward(&x).unwrap(), x);
        let up = Matrix::from_rows(&[vec![0.5, 0.25, -1.0]]).unwrap();
        assert_eq!(mlp.backward(&x, &up).unwrap(), up);
    }

    #[test]
    fn single_row_difference() {
        let w = Matrix::from_vec(1, 2, vec![1.0, -1.0]).unwrap();
        let mlp = MlpParams::from_layers(vec![DenseLayer::new(w, Some(vec![0.0]), false).unwrap()])
            .unwrap();
        let x = Matrix::from_rows(&[vec![2.0, 3.0]]).unwrap();
        assert_eq!(mlp.infer(&x).unwrap().as_slice(), &[-1.0]);
    }

    #[test]
    fn width_mismatch_is_config_error() {
        let mlp = MlpParams::new(&[3, 4, 2], BiasPolicy::All, &mut RngStream::new(1)).unwrap();
        let x = Matrix::zeros(2, 5);
        assert!(matches!(mlp.infer(&x), Err(Error::Config(_))));
        let bad = MlpParams::from_layers(vec![
            DenseLayer::new(Matrix::zeros(4, 3), None, true).unwrap(),
            DenseLayer::new(Matrix::zeros(2, 5), None, false).unwrap(),
        ]);
        assert!(matches!(bad, Err(Error::Config(_))));
    }

    #[test]
    fn dead_rectifier_blocks_gradient() {
        let l1 = DenseLayer::new(identity(2), None, true).unwrap();
        let l2 = DenseLayer::new(identity(2), None, false).unwrap();
        let mut mlp = MlpParams::from_layers(vec![l1, l2]).unwrap();
        let x = Matrix::from_rows(&[vec![-1.0, -0.5], vec![0.0, -3.0]]).unwrap();
        mlp.forward(&x).unwrap();
        let g = mlp.backward(&x, &Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap());
        assert!(g.unwrap().as_slice().iter().all(|&v| v == 0.0));
        assert!(mlp.layers()[0].grad_weight().as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn stale_cache_rejected() {
        let mut mlp = MlpParams::new(&[2, 3, 1], BiasPolicy::All, &mut RngStream::new(4)).unwrap();
        let x = Matrix::from_rows(&[vec![0.1, 0.2]]).unwrap();
        let up = Matrix::from_rows(&[vec![1.0]]).unwrap();
        assert!(matches!(mlp.backward(&x, &up), Err(Error::InvalidState(_))));
        mlp.forward(&x).unwrap();
        let other = Matrix::from_rows(&[vec![0.3, 0.2]]).unwrap();
        assert!(matches!(mlp.backward(&other, &up), Err(Error::InvalidState(_))));
        mlp.backward(&x, &up).unwrap();
        mlp.sgd_step(0.1, 0.0).unwrap();
        assert!(matches!(mlp.backward(&x, &up), Err(Error::InvalidState(_))));
    }

    #[test]
    fn sgd_examples() {
        let w = Matrix::from_vec(1, 1, vec![1.0]).unwrap();
        let mut mlp = MlpParams::from_layers(vec![DenseLayer::new(w, None, false).unwrap()]).unwrap();
        mlp.sgd_step(0.1, 0.0).unwrap();
        assert_eq!(mlp.to_flat(), vec![1.0]);
        mlp.layers[0].grad_weight.set(0, 0, 2.0);
        mlp.sgd_step(0.1, 0.0).unwrap();
        assert!((mlp.to_flat()[0] - 0.8).abs() < 1e-15);
        assert_eq!(mlp.grads_flat(), vec![0.0]);
        assert!(matches!(mlp.sgd_step(0.0, 0.0), Err(Error::InvalidArgument(_))));
        assert!(mlp.sgd_step(-1.0, 0.0).is_err());
    }

    #[test]
    fn param_count_and_flat_roundtrip() {
        let mut rng = RngStream::new(3);
        let mut mlp = MlpParams::new(&[10, 16, 16, 10], BiasPolicy::All, &mut rng).unwrap();
        assert_eq!(mlp.param_count(), 618);
        let flat = mlp.to_flat();
        assert_eq!(flat.len(), 618);
        let mut other = MlpParams::new(&[10, 16, 16, 10], BiasPolicy::All, &mut rng).unwrap();
        assert_ne!(other.to_flat(), flat);
        other.load_flat(&flat).unwrap();
        assert_eq!(other.to_flat(), flat);
        assert!(mlp.load_flat(&flat[1..]).is_err());
        let first_only = MlpParams::new(&[10, 16, 16, 10], BiasPolicy::FirstOnly, &mut rng).unwrap();
        assert_eq!(first_only.param_count(), 618 - 16 - 10);
    }

    #[test]
    fn infer_row_matches_batch() {
        let mlp = MlpParams::new(&[4, 6, 3], BiasPolicy::All, &mut RngStream::new(2)).unwrap();
        let x = Matrix::from_rows(&[vec![0.3, -0.7, 1.2, 0.05]]).unwrap();
        let mut scratch = Default::default();
        let row = mlp.infer_row(x.row(0), &mut scratch);
        assert_eq!(row.as_slice(), mlp.infer(&x).unwrap().row(0));
    }
}
