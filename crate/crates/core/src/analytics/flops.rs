//! Floating-point operation and parameter accounting.
//!
//! Only additions and multiplications are counted. Square roots, reciprocal
//! square roots, divisions by a constant and transcendental functions (acos,
//! atan2) each count as one multiplication. Neighbor search, sampling,
//! gathering, re-centering of neighbors and sign masks are index work and
//! count as zero.

use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use crate::error::Result;
use crate::umbrella::{Aggregation, InputLayout, Transform, UmbrellaConfig};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OpCost {
    pub multiplies: u64,
    pub additions: u64,
    pub parameters: u64,
    pub label: String,
}

impl OpCost {
    pub fn new(label: impl Into<String>, multiplies: u64, additions: u64) -> Self {
        Self {
            multiplies,
            additions,
            parameters: 0,
            label: label.into(),
        }
    }

    pub fn flops(&self) -> u64 {
        self.multiplies + self.additions
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// One `key=value` line.
    pub fn to_key_value(&self) -> String {
        format!(
            "label={} multiplies={} additions={} flops={} parameters={}",
            self.label,
            self.multiplies,
            self.additions,
            self.flops(),
            self.parameters
        )
    }

    pub const CSV_HEADER: &'static str = "label,multiplies,additions,flops,parameters";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.label,
            self.multiplies,
            self.additions,
            self.flops(),
            self.parameters
        )
    }
}

impl fmt::Display for OpCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_key_value())
    }
}

/// Sequential composition: counts add, the left label is kept.
impl Add for OpCost {
    type Output = OpCost;

    fn add(mut self, rhs: OpCost) -> OpCost {
        self += rhs;
        self
    }
}

impl AddAssign for OpCost {
    fn add_assign(&mut self, rhs: OpCost) {
        self.multiplies += rhs.multiplies;
        self.additions += rhs.additions;
        self.parameters += rhs.parameters;
    }
}

/// Repeats a cost `n` times (parameters are shared, not repeated).
impl Mul<u64> for OpCost {
    type Output = OpCost;

    fn mul(self, n: u64) -> OpCost {
        OpCost {
            multiplies: self.multiplies * n,
            additions: self.additions * n,
            parameters: self.parameters,
            label: self.label,
        }
    }
}

/// Dense layer over `n_rows` rows.
pub fn flops_linear(n_rows: u64, in_w: u64, out_w: u64, bias: bool) -> OpCost {
    let bias_adds = if bias { n_rows * out_w } else { 0 };
    OpCost {
        multiplies: n_rows * in_w * out_w,
        additions: n_rows * in_w.saturating_sub(1) * out_w + bias_adds,
        parameters: in_w * out_w + if bias { out_w } else { 0 },
        label: format!("linear {in_w}->{out_w}"),
    }
}

/// Per-triangle unit costs.
pub mod unit {
    use super::OpCost;

    /// e1 x e2: two products and one difference per component.
    pub fn cross() -> OpCost {
        OpCost::new("cross", 6, 3)
    }

    /// Three squares, two additions, one reciprocal square root.
    pub fn normalize() -> OpCost {
        OpCost::new("normalize", 4, 2)
    }

    /// (e_j + e_j+1) scaled by 1/2 (or 1/3).
    pub fn centroid() -> OpCost {
        OpCost::new("centroid", 3, 3)
    }

    /// Shift of the relative centroid into scene coordinates.
    pub fn absolute_offset() -> OpCost {
        OpCost::new("absolute offset", 0, 3)
    }

    /// n . c followed by the 1/sqrt(3) scaling.
    pub fn position() -> OpCost {
        OpCost::new("position", 4, 2)
    }

    /// rho: squares, sum, sqrt. theta: ratio, acos, /pi. phi: atan2, /2pi, +0.5.
    pub fn spherical() -> OpCost {
        OpCost::new("spherical", 4 + 3 + 2, 2 + 1)
    }
}

/// Itemized cost of one umbrella pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostBreakdown {
    pub stages: Vec<OpCost>,
}

impl CostBreakdown {
    pub fn total(&self) -> OpCost {
        self.stages
            .iter()
            .cloned()
            .fold(OpCost::default().with_label("total"), |acc, s| acc + s)
    }

    pub fn stage(&self, label: &str) -> Option<&OpCost> {
        self.stages.iter().find(|s| s.label == label)
    }

    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        for s in self.stages.iter().chain(std::iter::once(&self.total())) {
            out.push_str(&s.to_key_value());
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(OpCost::CSV_HEADER);
        out.push('\n');
        for s in self.stages.iter().chain(std::iter::once(&self.total())) {
            out.push_str(&s.to_csv_row());
            out.push('\n');
        }
        out
    }
}

/// Costs an umbrella pass over `n_points` points.
///
/// Stages: `surface` (fan geometry), `transform` (the per-triangle map) and
/// `aggregation` (pooling over K triangles).
pub fn flops_repsurf(cfg: &UmbrellaConfig, n_points: u64) -> Result<CostBreakdown> {
    cfg.validate()?;
    let k = cfg.k as u64;
    let triangles = n_points * k;
    let layout = cfg.layout;

    let mut per_triangle = unit::cross() + unit::normalize();
    let needs_centroid = !matches!(layout, InputLayout::N);
    if needs_centroid {
        per_triangle += unit::centroid();
    }
    if matches!(layout, InputLayout::NP | InputLayout::NPC | InputLayout::NPCP) {
        if cfg.frame == crate::triangular::PositionFrame::Absolute {
            per_triangle += unit::absolute_offset();
        }
        per_triangle += unit::position();
    }
    if layout == InputLayout::NPCP {
        per_triangle += unit::spherical();
    }
    let surface = (per_triangle * triangles).with_label("surface");

    let transform = match &cfg.transform {
        Transform::Identity => OpCost::default(),
        Transform::Mlp(m) => m
            .layers()
            .iter()
            .map(|l| {
                flops_linear(
                    triangles,
                    l.in_width() as u64,
                    l.out_width() as u64,
                    l.has_bias(),
                )
            })
            .fold(OpCost::default(), |acc, c| acc + c),
    }
    .with_label("transform");

    let width = cfg.out_width() as u64;
    let aggregation = match cfg.aggregation {
        Aggregation::Sum => OpCost::new("aggregation", 0, n_points * (k - 1) * width),
        Aggregation::Mean => OpCost::new("aggregation", n_points * width, n_points * (k - 1) * width),
        // comparisons are not float arithmetic
        Aggregation::Max => OpCost::new("aggregation", 0, 0),
    };

    Ok(CostBreakdown {
        stages: vec![surface, transform, aggregation],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn linear_examples() {
        let c = flops_linear(1, 1, 1, false);
        assert_eq!((c.multiplies, c.additions, c.parameters), (1, 0, 1));
        let c = flops_linear(1, 10, 16, true);
        assert_eq!((c.multiplies, c.additions, c.parameters), (160, 160, 176));
    }

    #[test]
    fn composition_is_additive() {
        let a = flops_linear(3, 4, 5, true);
        let b = flops_linear(3, 5, 2, false);
        let ab = a.clone() + b.clone();
        assert_eq!(ab.multiplies, a.multiplies + b.multiplies);
        assert_eq!(ab.additions, a.additions + b.additions);
        assert_eq!(ab.parameters, a.parameters + b.parameters);
    }

    #[test]
    fn rejects_k_below_two() {
        let cfg = UmbrellaConfig {
            k: 0,
            ..Default::default()
        };
        assert!(matches!(flops_repsurf(&cfg, 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn report_formats() {
        let c = flops_linear(1, 10, 16, true).with_label("l1");
        assert_eq!(
            c.to_key_value(),
            "label=l1 multiplies=160 additions=160 flops=320 parameters=176"
        );
        assert_eq!(c.to_csv_row(), "l1,160,160,320,176");
    }
}
