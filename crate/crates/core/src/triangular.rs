//! Triangular surface descriptor: one triangle per point, spanned by the point
//! and its two nearest neighbors.

use crate::error::{Error, Result};
use crate::geometry::{knn_indexed, PointCloud, RngStream, Vec3};

/// Cross products shorter than this are treated as collinear or coincident.
pub const DEGENERATE_CROSS_NORM: f64 = 1e-12;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// How the triangle centroid is formed from the two edge vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CentroidMode {
    /// point + (e1 + e2) / 2: mean of the edge vectors.
    #[default]
    EdgeMean,
    /// point + (e1 + e2) / 3: the triangle's vertex centroid.
    TriangleCentroid,
}

/// Which centroid the surface position is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PositionFrame {
    /// n . c with c in scene coordinates: signed offset of the tangent plane from the origin.
    #[default]
    Absolute,
    /// n . (c - point). Always zero up to rounding, since the normal is
    /// orthogonal to both edges.
    RelativeLiteral,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangularFeature {
    pub centroid: Vec3,
    pub normal: Vec3,
    pub position: f64,
    pub degenerate: bool,
}

impl TriangularFeature {
    pub const CHANNELS: usize = 7;

    /// centroid (3), normal (3), position (1).
    pub fn to_row(&self) -> [f64; 7] {
        [
            self.centroid.x,
            self.centroid.y,
            self.centroid.z,
            self.normal.x,
            self.normal.y,
            self.normal.z,
            self.position,
        ]
    }
}

/// Unit normal of the triangle spanned by two edges, or `None` when degenerate.
pub(crate) fn unit_cross(e1: &Vec3, e2: &Vec3) -> Option<Vec3> {
    let c = e1.cross(e2);
    let len = c.norm();
    if len < DEGENERATE_CROSS_NORM || !len.is_finite() {
        None
    } else {
        Some(c / len)
    }
}

/// `-1` unless the first component is strictly positive.
pub(crate) fn orientation_sign(normal: &Vec3) -> f64 {
    if normal.x > 0.0 {
        1.0
    } else {
        -1.0
    }
}

pub(crate) fn surface_position(normal: &Vec3, centroid: &Vec3) -> f64 {
    normal.dot(centroid) / SQRT_3
}

#[derive(Debug, Clone, Copy, Default)]
pub struct TriangularOptions {
    pub mode: CentroidMode,
    pub frame: PositionFrame,
    /// Flip every normal of the cloud with probability 0.5 (one draw per cloud).
    pub augment: bool,
}

/// Computes one triangular feature per point, in input order.
///
/// Normals are oriented so their first component is positive (a first
/// component of exactly zero flips). With `augment`, one Bernoulli(0.5) draw
/// decides whether the whole cloud's normals are inverted.
pub fn triangular_repsurf(
    cloud: &PointCloud,
    opts: TriangularOptions,
    stream: &mut RngStream,
) -> Result<Vec<TriangularFeature>> {
    if cloud.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "triangular features need at least 3 points, got {}",
            cloud.len()
        )));
    }
    let neighbors = knn_indexed(cloud, 2)?;
    let inverse = if opts.augment && stream.bernoulli(0.5) {
        -1.0
    } else {
        1.0
    };
    let divisor = match opts.mode {
        CentroidMode::EdgeMean => 2.0,
        CentroidMode::TriangleCentroid => 3.0,
    };
    let features = cloud
        .points()
        .iter()
        .zip(neighbors.iter())
        .map(|(p, row)| {
            let e1 = cloud.point(row[0]) - p;
            let e2 = cloud.point(row[1]) - p;
            let rel_centroid = (e1 + e2) / divisor;
            let centroid = p + rel_centroid;
            match unit_cross(&e1, &e2) {
                Some(n) => {
                    let normal = n * orientation_sign(&n) * inverse;
                    let position = match opts.frame {
                        PositionFrame::Absolute => surface_position(&normal, &centroid),
                        PositionFrame::RelativeLiteral => surface_position(&normal, &rel_centroid),
                    };
                    TriangularFeature {
                        centroid,
                        normal,
                        position,
                        degenerate: false,
                    }
                }
                None => TriangularFeature {
                    centroid,
                    normal: Vec3::zeros(),
                    position: 0.0,
                    degenerate: true,
                },
            }
        })
        .collect();
    Ok(features)
}

/// Unsigned umbrella curvature: sum over neighbors of |unit(neighbor - point) . normal|.
pub fn umbrella_curvature(point: &Vec3, neighbors: &[Vec3], normal: &Vec3) -> Result<f64> {
    let mut total = 0.0;
    for (j, q) in neighbors.iter().enumerate() {
        let d = q - point;
        let len = d.norm();
        if len == 0.0 {
            return Err(Error::InvalidInput(format!(
                "neighbor {j} coincides with the query point"
            )));
        }
        total += (d / len).dot(normal).abs();
    }
    Ok(total)
}
