//! Umbrella surface descriptor.
//!
//! Each point's K nearest neighbors are sorted counterclockwise on the
//! xy-plane and joined pairwise with wraparound into a fan of K triangles.
//! Normals come from consecutive cross products, so they agree locally; the
//! whole fan is then flipped so its first triangle has a positive x component.
//! Per-triangle rows are mapped by a transform and pooled over the fan.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{knn_indexed, sort_counterclockwise, PointCloud, RngStream, Vec3};
use crate::neural::{Matrix, MlpParams};
use crate::polar::spherical_aux;
use crate::triangular::{orientation_sign, surface_position, unit_cross, CentroidMode, PositionFrame};

pub const DEFAULT_K: usize = 8;

/// Channels fed to the transform for each triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputLayout {
    /// normal
    N,
    /// normal, position
    NP,
    /// centroid, normal
    NC,
    /// centroid, normal, position
    NPC,
    /// centroid, spherical auxiliary, normal, position
    #[default]
    NPCP,
}

impl InputLayout {
    pub fn channels(self) -> usize {
        match self {
            InputLayout::N => 3,
            InputLayout::NP => 4,
            InputLayout::NC => 6,
            InputLayout::NPC => 7,
            InputLayout::NPCP => 10,
        }
    }

    fn has_centroid(self) -> bool {
        matches!(self, InputLayout::NC | InputLayout::NPC | InputLayout::NPCP)
    }

    fn has_position(self) -> bool {
        matches!(self, InputLayout::NP | InputLayout::NPC | InputLayout::NPCP)
    }
}

impl FromStr for InputLayout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(' ', "").as_str() {
            "n" => Ok(InputLayout::N),
            "n+p" => Ok(InputLayout::NP),
            "n+c" => Ok(InputLayout::NC),
            "n+p+c" => Ok(InputLayout::NPC),
            "n+p+cp" => Ok(InputLayout::NPCP),
            other => Err(Error::InvalidArgument(format!("unknown layout '{other}'"))),
        }
    }
}

impl fmt::Display for InputLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputLayout::N => "n",
            InputLayout::NP => "n+p",
            InputLayout::NC => "n+c",
            InputLayout::NPC => "n+p+c",
            InputLayout::NPCP => "n+p+cp",
        })
    }
}

/// Pooling over the K triangles of a fan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Aggregation {
    #[default]
    Sum,
    Max,
    Mean,
}

impl FromStr for Aggregation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sum" => Ok(Aggregation::Sum),
            "max" => Ok(Aggregation::Max),
            "mean" => Ok(Aggregation::Mean),
            other => Err(Error::InvalidArgument(format!("unknown aggregation '{other}'"))),
        }
    }
}

impl fmt::Display for Aggregation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aggregation::Sum => "sum",
            Aggregation::Max => "max",
            Aggregation::Mean => "mean",
        })
    }
}

impl Aggregation {
    /// Pools the rows of `rows` column-wise.
    pub fn apply(self, rows: &Matrix) -> Vec<f64> {
        let mut out = match self {
            Aggregation::Max => vec![f64::NEG_INFINITY; rows.cols()],
            _ => vec![0.0; rows.cols()],
        };
        for row in rows.iter_rows() {
            for (o, &v) in out.iter_mut().zip(row) {
                match self {
                    Aggregation::Max => *o = o.max(v),
                    _ => *o += v,
                }
            }
        }
        if self == Aggregation::Mean && rows.rows() > 0 {
            let k = rows.rows() as f64;
            out.iter_mut().for_each(|o| *o /= k);
        }
        out
    }
}

/// Per-triangle map applied before pooling.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Transform {
    #[default]
    Identity,
    Mlp(MlpParams),
}

impl Transform {
    pub fn out_width(&self, layout: InputLayout) -> usize {
        match self {
            Transform::Identity => layout.channels(),
            Transform::Mlp(m) => m.out_width(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UmbrellaConfig {
    pub k: usize,
    pub layout: InputLayout,
    pub aggregation: Aggregation,
    pub transform: Transform,
    /// Flip each fan's normals with probability 0.5 (one draw per point).
    pub augment: bool,
    pub frame: PositionFrame,
    pub centroid_mode: CentroidMode,
}

impl Default for UmbrellaConfig {
    fn default() -> Self {
        Self {
            k: DEFAULT_K,
            layout: InputLayout::default(),
            aggregation: Aggregation::default(),
            transform: Transform::Identity,
            augment: false,
            frame: PositionFrame::Absolute,
            centroid_mode: CentroidMode::EdgeMean,
        }
    }
}

impl UmbrellaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::InvalidArgument(format!(
                "umbrella surfaces need k >= 2, got {}",
                self.k
            )));
        }
        if let Transform::Mlp(m) = &self.transform {
            if m.in_width() != self.layout.channels() {
                return Err(Error::Config(format!(
                    "layout {} has {} channels but the transform expects {}",
                    self.layout,
                    self.layout.channels(),
                    m.in_width()
                )));
            }
        }
        Ok(())
    }

    pub fn out_width(&self) -> usize {
        self.transform.out_width(self.layout)
    }
}

/// One triangle of a fan. `centroid` is relative to the fan's center point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanTriangle {
    pub centroid: Vec3,
    pub normal: Vec3,
    pub position: f64,
    /// (rho, theta, phi) of the relative centroid.
    pub polar: [f64; 3],
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UmbrellaSurface {
    pub point: Vec3,
    pub triangles: Vec<FanTriangle>,
    /// True when augmentation inverted this fan.
    pub inverted: bool,
}

impl UmbrellaSurface {
    /// Input rows for the transform, one per triangle.
    pub fn rows(&self, layout: InputLayout) -> Matrix {
        let width = layout.channels();
        let mut m = Matrix::zeros(self.triangles.len(), width);
        for (r, t) in self.triangles.iter().enumerate() {
            write_row(t, layout, m.row_mut(r));
        }
        m
    }
}

fn write_row(t: &FanTriangle, layout: InputLayout, out: &mut [f64]) {
    let mut i = 0;
    let mut push = |v: f64| {
        out[i] = v;
        i += 1;
    };
    if layout.has_centroid() {
        t.centroid.iter().for_each(|&v| push(v));
        if layout == InputLayout::NPCP {
            t.polar.iter().for_each(|&v| push(v));
        }
    }
    t.normal.iter().for_each(|&v| push(v));
    if layout.has_position() {
        push(t.position);
    }
}

#[derive(Debug, Clone)]
pub struct UmbrellaFeature {
    /// The point the fan is built around.
    pub centroid: Vec3,
    pub feature: Vec<f64>,
}

impl UmbrellaFeature {
    /// centroid (3) followed by the pooled feature.
    pub fn to_row(&self) -> Vec<f64> {
        let mut row = Vec::with_capacity(3 + self.feature.len());
        row.extend(self.centroid.iter());
        row.extend_from_slice(&self.feature);
        row
    }
}

/// Builds the fan around `point` from its neighbors, in any order.
///
/// `invert` applies the augmentation flip after orientation.
pub fn umbrella_at(
    point: &Vec3,
    neighbors: &[Vec3],
    frame: PositionFrame,
    centroid_mode: CentroidMode,
    invert: bool,
) -> Result<UmbrellaSurface> {
    let k = neighbors.len();
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "an umbrella needs at least 2 neighbors, got {k}"
        )));
    }
    let order = sort_counterclockwise(point, neighbors);
    let edges: Vec<Vec3> = order.iter().map(|&j| neighbors[j] - point).collect();
    let divisor = match centroid_mode {
        CentroidMode::EdgeMean => 2.0,
        CentroidMode::TriangleCentroid => 3.0,
    };
    let mut triangles = Vec::with_capacity(k);
    for j in 0..k {
        let (a, b) = (&edges[j], &edges[(j + 1) % k]);
        let centroid = (a + b) / divisor;
        let (normal, degenerate) = match unit_cross(a, b) {
            Some(n) => (n, false),
            None => (Vec3::zeros(), true),
        };
        let s = spherical_aux(&centroid)?;
        triangles.push(FanTriangle {
            centroid,
            normal,
            position: 0.0,
            polar: [s.rho, s.theta, s.phi],
            degenerate,
        });
    }
    // one sign for the whole fan, taken from the first triangle
    let mut sign = orientation_sign(&triangles[0].normal);
    if invert {
        sign = -sign;
    }
    for t in &mut triangles {
        if !t.degenerate {
            t.normal *= sign;
        }
        let reference = match frame {
            PositionFrame::Absolute => point + t.centroid,
            PositionFrame::RelativeLiteral => t.centroid,
        };
        t.position = surface_position(&t.normal, &reference);
    }
    Ok(UmbrellaSurface {
        point: *point,
        triangles,
        inverted: invert,
    })
}

/// Fans for every point of the cloud, in input order.
pub fn build_umbrella(
    cloud: &PointCloud,
    cfg: &UmbrellaConfig,
    stream: &mut RngStream,
) -> Result<Vec<UmbrellaSurface>> {
    cfg.validate()?;
    if cfg.k >= cloud.len() {
        return Err(Error::InvalidArgument(format!(
            "k={} needs more than {} points",
            cfg.k,
            cloud.len()
        )));
    }
    let neighbors = knn_indexed(cloud, cfg.k)?;
    // draws happen in input order, one per point
    let flips: Vec<bool> = (0..cloud.len())
        .map(|_| cfg.augment && stream.bernoulli(0.5))
        .collect();
    let mut scratch = Vec::with_capacity(cfg.k);
    cloud
        .points()
        .iter()
        .zip(neighbors.iter())
        .zip(flips)
        .map(|((p, row), flip)| {
            scratch.clear();
            scratch.extend(row.iter().map(|&j| cloud.point(j)));
            umbrella_at(p, &scratch, cfg.frame, cfg.centroid_mode, flip)
        })
        .collect()
}

/// Applies the transform to every triangle row of one fan and pools the result.
pub fn featurize_surface(surface: &UmbrellaSurface, cfg: &UmbrellaConfig) -> Result<Vec<f64>> {
    let rows = surface.rows(cfg.layout);
    let mapped = match &cfg.transform {
        Transform::Identity => rows,
        Transform::Mlp(m) => m.infer(&rows)?,
    };
    Ok(cfg.aggregation.apply(&mapped))
}

/// Umbrella features for every point: fan construction, transform, pooling.
pub fn umbrella_repsurf(
    cloud: &PointCloud,
    cfg: &UmbrellaConfig,
    stream: &mut RngStream,
) -> Result<Vec<UmbrellaFeature>> {
    let surfaces = build_umbrella(cloud, cfg, stream)?;
    let width = cfg.layout.channels();
    let mut input = vec![0.0; width];
    let mut scratch = (Vec::new(), Vec::new());
    let mut out = Vec::with_capacity(surfaces.len());
    for s in &surfaces {
        let feature = match &cfg.transform {
            Transform::Identity => featurize_surface(s, cfg)?,
            Transform::Mlp(m) => {
                let mut mapped = Matrix::zeros(s.triangles.len(), m.out_width());
                for (r, t) in s.triangles.iter().enumerate() {
                    write_row(t, cfg.layout, &mut input);
                    let y = m.infer_row(&input, &mut scratch);
                    mapped.row_mut(r).copy_from_slice(&y);
                }
                cfg.aggregation.apply(&mapped)
            }
        };
        out.push(UmbrellaFeature {
            centroid: s.point,
            feature,
        });
    }
    Ok(out)
}

/// Umbrella features with k = 2: two opposing triangles on the two nearest
/// neighbors, a learnable stand-in for the triangular descriptor.
pub fn degenerate_to_triangular(
    cloud: &PointCloud,
    base: &UmbrellaConfig,
    stream: &mut RngStream,
) -> Result<Vec<UmbrellaFeature>> {
    if cloud.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "need at least 3 points, got {}",
            cloud.len()
        )));
    }
    let cfg = UmbrellaConfig {
        k: 2,
        ..base.clone()
    };
    umbrella_repsurf(cloud, &cfg, stream)
}
