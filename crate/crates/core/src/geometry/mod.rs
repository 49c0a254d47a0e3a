//! Point-cloud container and the neighborhood machinery every descriptor is built on.

mod knn;
mod ordering;
mod rng;
mod sampling;

pub use knn::{knn_bruteforce, knn_indexed, KdTree, NeighborIndex};
pub use ordering::{azimuth, sort_counterclockwise};
pub use rng::RngStream;
pub use sampling::{ball_query, farthest_point_sampling, grid_sampling};

use crate::error::{Error, Result};

pub type Vec3 = nalgebra::Vector3<f64>;

/// An ordered set of 3-D points with optional per-point attribute vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<Vec3>,
    attrs: Option<Vec<Vec<f64>>>,
}

impl PointCloud {
    /// Builds a cloud, rejecting empty input and non-finite coordinates.
    pub fn new(points: Vec<Vec3>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("point cloud is empty".into()));
        }
        if let Some(i) = points.iter().position(|p| !p.iter().all(|c| c.is_finite())) {
            return Err(Error::InvalidInput(format!(
                "point {i} has a non-finite coordinate"
            )));
        }
        Ok(Self {
            points,
            attrs: None,
        })
    }

    pub fn from_slice(points: &[[f64; 3]]) -> Result<Self> {
        Self::new(points.iter().map(|p| Vec3::new(p[0], p[1], p[2])).collect())
    }

    /// Attaches one attribute vector per point. All vectors must share a width.
    pub fn with_attrs(mut self, attrs: Vec<Vec<f64>>) -> Result<Self> {
        if attrs.len() != self.points.len() {
            return Err(Error::InvalidInput(format!(
                "{} attribute rows for {} points",
                attrs.len(),
                self.points.len()
            )));
        }
        if let Some(first) = attrs.first() {
            let width = first.len();
            if attrs.iter().any(|a| a.len() != width) {
                return Err(Error::InvalidInput("ragged attribute rows".into()));
            }
        }
        self.attrs = Some(attrs);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec3] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Vec3 {
        self.points[i]
    }

    pub fn attrs(&self) -> Option<&[Vec<f64>]> {
        self.attrs.as_deref()
    }

    pub fn attr_width(&self) -> usize {
        self.attrs
            .as_ref()
            .and_then(|a| a.first())
            .map_or(0, |a| a.len())
    }

    /// Picks the given rows, carrying attributes along.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let points = indices.iter().map(|&i| self.points[i]).collect();
        let cloud = Self::new(points)?;
        match &self.attrs {
            Some(a) => cloud.with_attrs(indices.iter().map(|&i| a[i].clone()).collect()),
            None => Ok(cloud),
        }
    }

    /// Applies `f` to every point, keeping attributes.
    pub fn map_points(&self, f: impl Fn(&Vec3) -> Vec3) -> Result<Self> {
        let cloud = Self::new(self.points.iter().map(f).collect())?;
        match &self.attrs {
            Some(a) => cloud.with_attrs(a.clone()),
            None => Ok(cloud),
        }
    }
}

/// Centers the cloud on its bounding-box center and scales it uniformly so the
/// largest absolute coordinate is 1. A cloud with zero extent collapses to the origin.
pub fn normalize_unit_cube(cloud: &PointCloud) -> Result<PointCloud> {
    let pts = cloud.points();
    let mut lo = pts[0];
    let mut hi = pts[0];
    for p in pts {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    let center = (lo + hi) * 0.5;
    let scale = pts
        .iter()
        .map(|p| (p - center).amax())
        .fold(0.0_f64, f64::max);
    if scale == 0.0 {
        return cloud.map_points(|_| Vec3::zeros());
    }
    cloud.map_points(|p| (p - center) / scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(matches!(PointCloud::new(vec![]), Err(Error::InvalidInput(_))));
        assert!(matches!(
            PointCloud::from_slice(&[[0.0, f64::NAN, 0.0]]),
            Err(Error::InvalidInput(_))
        ));
        assert!(PointCloud::from_slice(&[[0.0, f64::INFINITY, 0.0]]).is_err());
    }

    #[test]
    fn normalize_two_points() {
        let c = PointCloud::from_slice(&[[0.0, 0.0, 0.0], [2.0, 0.0, 0.0]]).unwrap();
        let n = normalize_unit_cube(&c).unwrap();
        assert_eq!(n.point(0), Vec3::new(-1.0, 0.0, 0.0));
        assert_eq!(n.point(1), Vec3::new(1.0, 0.0, 0.0));
    }

    #[test]
    fn normalize_single_point_goes_to_origin() {
        let c = PointCloud::from_slice(&[[5.0, 5.0, 5.0]]).unwrap();
        assert_eq!(normalize_unit_cube(&c).unwrap().point(0), Vec3::zeros());
    }

    #[test]
    fn normalize_preserves_distance_ratios() {
        let mut rng = RngStream::new(7);
        let pts: Vec<Vec3> = (0..100)
            .map(|_| {
                Vec3::new(
                    rng.uniform(-3.0, 5.0),
                    rng.uniform(10.0, 11.0),
                    rng.uniform(-0.2, 0.1),
                )
            })
            .collect();
        let c = PointCloud::new(pts).unwrap();
        let n = normalize_unit_cube(&c).unwrap();
        let max_abs = n.points().iter().map(|p| p.amax()).fold(0.0, f64::max);
        assert!((max_abs - 1.0).abs() < 1e-12);
        assert!(n.points().iter().all(|p| p.amax() <= 1.0));
        let ref_before = (c.point(0) - c.point(1)).norm();
        let ref_after = (n.point(0) - n.point(1)).norm();
        for i in 0..100 {
            for j in (i + 1)..100 {
                let before = (c.point(i) - c.point(j)).norm() / ref_before;
                let after = (n.point(i) - n.point(j)).norm() / ref_after;
                assert!((before - after).abs() <= 1e-5 * before.max(1e-12));
            }
        }
    }

    #[test]
    fn select_keeps_attrs() {
        let c = PointCloud::from_slice(&[[0.0; 3], [1.0, 0.0, 0.0], [2.0, 0.0, 0.0]])
            .unwrap()
            .with_attrs(vec![vec![0.5], vec![1.5], vec![2.5]])
            .unwrap();
        let s = c.select(&[2, 0]).unwrap();
        assert_eq!(s.point(0).x, 2.0);
        assert_eq!(s.attrs().unwrap(), &[vec![2.5], vec![0.5]]);
    }
}
