//! Seeded synthetic shapes with region labels, for checks that need known geometry.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{PointCloud, RngStream, Vec3};

/// Distance from a cube edge (in the [-1, 1] frame) that counts as the edge band.
pub const EDGE_BAND: f64 = 0.05;

/// Height of the step between the two halves of `plane_with_step`.
pub const STEP_HEIGHT: f64 = 0.5;

/// Slope of the tilted planes: z = 0.3 x + 0.2 y (+ step).
pub const PLANE_SLOPE: (f64, f64) = (0.3, 0.2);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeKind {
    Cube,
    Sphere,
    PlaneWithStep,
    HexagonFan,
}

impl FromStr for ShapeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "cube" => Ok(ShapeKind::Cube),
            "sphere" => Ok(ShapeKind::Sphere),
            "plane_with_step" => Ok(ShapeKind::PlaneWithStep),
            "hexagon_fan" => Ok(ShapeKind::HexagonFan),
            other => Err(Error::InvalidArgument(format!("unknown shape '{other}'"))),
        }
    }
}

/// Region tags for labeled shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Region {
    /// Cube face: `axis * 2 + (positive side as u8)`.
    Face(u8),
    /// Within [`EDGE_BAND`] of a cube edge.
    Edge,
    /// x < 0 half of the stepped plane.
    Lower,
    /// x >= 0 half, raised by [`STEP_HEIGHT`].
    Upper,
}

impl Region {
    /// Numeric code used when labels are written as an attribute column.
    pub fn code(self) -> f64 {
        match self {
            Region::Face(f) => f as f64,
            Region::Edge => 6.0,
            Region::Lower => 10.0,
            Region::Upper => 11.0,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Face(i) => {
                let axis = ["x", "y", "z"][(*i / 2) as usize];
                let side = if i % 2 == 1 { "+" } else { "-" };
                write!(f, "face{side}{axis}")
            }
            Region::Edge => f.write_str("edge"),
            Region::Lower => f.write_str("lower"),
            Region::Upper => f.write_str("upper"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SynthShape {
    pub cloud: PointCloud,
    pub labels: Option<Vec<Region>>,
}

impl SynthShape {
    /// The cloud with region codes attached as a single attribute column.
    pub fn labeled_cloud(&self) -> Result<PointCloud> {
        match &self.labels {
            Some(l) => self
                .cloud
                .clone()
                .with_attrs(l.iter().map(|r| vec![r.code()]).collect()),
            None => Ok(self.cloud.clone()),
        }
    }
}

/// Region of a point on (or near) the [-1, 1] cube surface.
pub fn cube_region(p: &Vec3) -> Region {
    let a = p.abs();
    let near_edge = a.iter().filter(|&&c| c >= 1.0 - EDGE_BAND).count() >= 2;
    if near_edge {
        return Region::Edge;
    }
    let axis = a.imax();
    Region::Face(axis as u8 * 2 + u8::from(p[axis] > 0.0))
}

fn jitter(p: Vec3, noise: f64, stream: &mut RngStream) -> Vec3 {
    if noise == 0.0 {
        return p;
    }
    p + Vec3::new(
        stream.normal(0.0, noise),
        stream.normal(0.0, noise),
        stream.normal(0.0, noise),
    )
}

/// Samples `n` points of the requested shape. Deterministic given the stream.
///
/// * cube: uniform on the surface of [-1, 1]^3, labeled by face or edge band.
/// * sphere: uniform on the unit sphere.
/// * plane_with_step: two tilted half-planes over [-1, 1]^2, the x >= 0 half
///   raised by [`STEP_HEIGHT`].
/// * hexagon_fan: the `n` hexagonal-lattice sites nearest the origin, z = 0,
///   scaled into the unit disk. The first seven points are the center and
///   its six ring neighbors.
pub fn synth_shape(
    kind: ShapeKind,
    n: usize,
    noise: f64,
    stream: &mut RngStream,
) -> Result<SynthShape> {
    if n < 8 {
        return Err(Error::InvalidArgument(format!(
            "synthetic shapes need n >= 8, got {n}"
        )));
    }
    if !(noise.is_finite() && noise >= 0.0) {
        return Err(Error::InvalidArgument(format!("noise must be >= 0, got {noise}")));
    }
    match kind {
        ShapeKind::Sphere => {
            let pts = (0..n)
                .map(|_| loop {
                    let v = Vec3::new(
                        stream.normal(0.0, 1.0),
                        stream.normal(0.0, 1.0),
                        stream.normal(0.0, 1.0),
                    );
                    let len = v.norm();
                    if len > 1e-9 {
                        break v / len;
                    }
                })
                .collect::<Vec<_>>();
            let pts = pts.into_iter().map(|p| jitter(p, noise, stream)).collect();
            Ok(SynthShape {
                cloud: PointCloud::new(pts)?,
                labels: None,
            })
        }
        ShapeKind::Cube => {
            let mut pts = Vec::with_capacity(n);
            for _ in 0..n {
                let face = stream.index(6);
                let (axis, sign) = (face / 2, if face % 2 == 1 { 1.0 } else { -1.0 });
                let u = stream.uniform(-1.0, 1.0);
                let v = stream.uniform(-1.0, 1.0);
                let mut p = Vec3::zeros();
                p[axis] = sign;
                p[(axis + 1) % 3] = u;
                p[(axis + 2) % 3] = v;
                pts.push(p);
            }
            let labels = pts.iter().map(cube_region).collect();
            let pts = pts.into_iter().map(|p| jitter(p, noise, stream)).collect();
            Ok(SynthShape {
                cloud: PointCloud::new(pts)?,
                labels: Some(labels),
            })
        }
        ShapeKind::PlaneWithStep => {
            let (sx, sy) = PLANE_SLOPE;
            let mut pts = Vec::with_capacity(n);
            let mut labels = Vec::with_capacity(n);
            for _ in 0..n {
                let x = stream.uniform(-1.0, 1.0);
                let y = stream.uniform(-1.0, 1.0);
                let (region, lift) = if x < 0.0 {
                    (Region::Lower, 0.0)
                } else {
                    (Region::Upper, STEP_HEIGHT)
                };
                pts.push(Vec3::new(x, y, sx * x + sy * y + lift));
                labels.push(region);
            }
            let pts = pts.into_iter().map(|p| jitter(p, noise, stream)).collect();
            Ok(SynthShape {
                cloud: PointCloud::new(pts)?,
                labels: Some(labels),
            })
        }
        ShapeKind::HexagonFan => {
            let pts = hexagonal_patch(n)
                .into_iter()
                .map(|p| jitter(p, noise, stream))
                .collect();
            Ok(SynthShape {
                cloud: PointCloud::new(pts)?,
                labels: None,
            })
        }
    }
}

fn hexagonal_patch(n: usize) -> Vec<Vec3> {
    // enough rings to hold n sites: a hexagon of radius r has 3r(r+1)+1 sites
    let mut rings = 1i64;
    while (3 * rings * (rings + 1) + 1) < n as i64 * 2 {
        rings += 1;
    }
    let half_sqrt3 = 3f64.sqrt() / 2.0;
    let mut sites: Vec<(i64, i64, Vec3)> = Vec::new();
    for q in -rings..=rings {
        for r in -rings..=rings {
            let p = Vec3::new(q as f64 + 0.5 * r as f64, half_sqrt3 * r as f64, 0.0);
            sites.push((q, r, p));
        }
    }
    sites.sort_by(|a, b| {
        let (da, db) = (a.2.norm_squared(), b.2.norm_squared());
        // lattice distances are exact multiples of 1/4 up to rounding
        let (ka, kb) = ((da * 4.0).round() as i64, (db * 4.0).round() as i64);
        ka.cmp(&kb)
            .then_with(|| crate::geometry::azimuth(&a.2).total_cmp(&crate::geometry::azimuth(&b.2)))
            .then((a.0, a.1).cmp(&(b.0, b.1)))
    });
    sites.truncate(n);
    let radius = sites.iter().map(|s| s.2.norm()).fold(0.0, f64::max);
    sites.into_iter().map(|s| s.2 / radius).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_points_on_unit_sphere() {
        let s = synth_shape(ShapeKind::Sphere, 1000, 0.0, &mut RngStream::new(1)).unwrap();
        assert_eq!(s.cloud.len(), 1000);
        assert!(s.cloud.points().iter().all(|p| (p.norm() - 1.0).abs() < 1e-6));
    }

    #[test]
    fn cube_has_all_regions() {
        let s = synth_shape(ShapeKind::Cube, 6000, 0.0, &mut RngStream::new(2)).unwrap();
        let labels = s.labels.unwrap();
        for f in 0..6 {
            assert!(labels.contains(&Region::Face(f)), "face {f}");
        }
        assert!(labels.contains(&Region::Edge));
        assert!(s.cloud.points().iter().all(|p| (p.amax() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn deterministic_given_seed() {
        let a = synth_shape(ShapeKind::PlaneWithStep, 100, 0.01, &mut RngStream::new(3)).unwrap();
        let b = synth_shape(ShapeKind::PlaneWithStep, 100, 0.01, &mut RngStream::new(3)).unwrap();
        assert_eq!(a.cloud, b.cloud);
        assert_eq!(a.labels, b.labels);
    }

    #[test]
    fn hexagon_fan_starts_with_center_and_ring() {
        let s = synth_shape(ShapeKind::HexagonFan, 19, 0.0, &mut RngStream::new(0)).unwrap();
        let pts = s.cloud.points();
        assert_eq!(pts[0], Vec3::zeros());
        let r = pts[1].norm();
        for p in &pts[1..7] {
            assert!((p.norm() - r).abs() < 1e-12);
        }
        assert!(pts.iter().all(|p| p.z == 0.0 && p.norm() <= 1.0 + 1e-12));
    }

    #[test]
    fn small_n_rejected() {
        assert!(synth_shape(ShapeKind::Cube, 7, 0.0, &mut RngStream::new(0)).is_err());
    }

    #[test]
    fn cube_region_rules() {
        assert_eq!(cube_region(&Vec3::new(1.0, 0.0, 0.0)), Region::Face(1));
        assert_eq!(cube_region(&Vec3::new(0.2, -1.0, 0.3)), Region::Face(2));
        assert_eq!(cube_region(&Vec3::new(0.97, 1.0, 0.3)), Region::Edge);
        assert_eq!(Region::Face(5).to_string(), "face+z");
    }
}
