use std::collections::BTreeMap;

use nalgebra::{Rotation3, Unit};

use crate::error::Result;
use crate::geometry::{grid_sampling, RngStream, Vec3};
use crate::synth::{cube_region, synth_shape, Region, ShapeKind};
use crate::triangular::{triangular_repsurf, TriangularOptions};

/// Normal statistics of one labeled region.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionSummary<L> {
    pub label: L,
    pub count: usize,
    pub mean_normal: Vec3,
    /// 1 - |mean of unit normals|: 0 for a flat region, 1 for balanced opposites.
    pub dispersion: f64,
}

/// Groups normals by label and measures how much they spread.
///
/// Zero normals (degenerate triangles) are skipped; a region left with no
/// normals is dropped with a warning.
pub fn curvature_report<L: Ord + Clone + std::fmt::Debug>(
    normals: &[Vec3],
    labels: &[L],
) -> Vec<RegionSummary<L>> {
    let mut groups: BTreeMap<L, (Vec3, usize)> = BTreeMap::new();
    for (n, l) in normals.iter().zip(labels) {
        let entry = groups.entry(l.clone()).or_insert((Vec3::zeros(), 0));
        let len = n.norm();
        if len > 0.0 {
            entry.0 += n / len;
            entry.1 += 1;
        }
    }
    groups
        .into_iter()
        .filter_map(|(label, (sum, count))| {
            if count == 0 {
                log::warn!("region {label:?} has no usable normals, skipped");
                return None;
            }
            let mean = sum / count as f64;
            Some(RegionSummary {
                label,
                count,
                mean_normal: mean,
                dispersion: (1.0 - mean.norm()).max(0.0),
            })
        })
        .collect()
}

/// Fixed oblique rotation applied to synthetic shapes before featurizing.
///
/// Normal orientation keeps the x component positive, which is ambiguous for
/// surfaces whose normal has x = 0 exactly. Tilting moves every cube face
/// normal off that plane.
pub fn oblique_tilt() -> Rotation3<f64> {
    Rotation3::from_axis_angle(&Unit::new_normalize(Vec3::new(1.0, 2.0, 3.0)), 0.7)
}

/// Face-versus-edge normal dispersion on a synthetic cube.
///
/// Samples `n` surface points, optionally grid-samples them with side `cell`,
/// labels every point by face or edge band, tilts the cube with
/// [`oblique_tilt`] and summarizes triangular normals per region.
pub fn cube_sensitivity(
    n: usize,
    cell: Option<f64>,
    seed: u64,
) -> Result<Vec<RegionSummary<Region>>> {
    let mut stream = RngStream::new(seed);
    let shape = synth_shape(ShapeKind::Cube, n, 0.0, &mut stream)?;
    let cloud = match cell {
        Some(c) => grid_sampling(&shape.cloud, c)?,
        None => shape.cloud,
    };
    let labels: Vec<Region> = cloud.points().iter().map(cube_region).collect();
    let tilt = oblique_tilt();
    let tilted = cloud.map_points(|p| tilt * p)?;
    let features = triangular_repsurf(&tilted, TriangularOptions::default(), &mut stream)?;
    let normals: Vec<Vec3> = features.iter().map(|f| f.normal).collect();
    Ok(curvature_report(&normals, &labels))
}
