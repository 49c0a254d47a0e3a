use std::collections::BTreeMap;

use super::knn::dist2;
use super::{NeighborIndex, PointCloud, Vec3};
use crate::error::{Error, Result};

/// Greedy max-min downsampling starting from `start`. Ties go to the smaller index.
pub fn farthest_point_sampling(cloud: &PointCloud, m: usize, start: usize) -> Result<Vec<usize>> {
    let n = cloud.len();
    if m == 0 || m > n {
        return Err(Error::InvalidArgument(format!(
            "sample count must be in [1, {n}], got {m}"
        )));
    }
    if start >= n {
        return Err(Error::InvalidArgument(format!(
            "start index {start} out of range for {n} points"
        )));
    }
    let pts = cloud.points();
    let mut selected = Vec::with_capacity(m);
    let mut min_d2 = vec![f64::INFINITY; n];
    let mut taken = vec![false; n];
    let mut current = start;
    for _ in 0..m {
        selected.push(current);
        taken[current] = true;
        let anchor = pts[current];
        let mut best = None::<(f64, usize)>;
        for (i, p) in pts.iter().enumerate() {
            if taken[i] {
                continue;
            }
            let d = dist2(&anchor, p);
            if d < min_d2[i] {
                min_d2[i] = d;
            }
            // strict > keeps the first (smallest) index on ties
            if best.is_none_or(|(bd, _)| min_d2[i] > bd) {
                best = Some((min_d2[i], i));
            }
        }
        match best {
            Some((_, i)) => current = i,
            None => break,
        }
    }
    Ok(selected)
}

/// One representative per occupied voxel of side `cell`: the mean of the voxel's
/// points (and attributes). Output follows ascending (ix, iy, iz) voxel order.
pub fn grid_sampling(cloud: &PointCloud, cell: f64) -> Result<PointCloud> {
    if !(cell.is_finite() && cell > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "cell size must be positive and finite, got {cell}"
        )));
    }
    let mut voxels: BTreeMap<(i64, i64, i64), Vec<usize>> = BTreeMap::new();
    for (i, p) in cloud.points().iter().enumerate() {
        let key = (
            (p.x / cell).floor() as i64,
            (p.y / cell).floor() as i64,
            (p.z / cell).floor() as i64,
        );
        voxels.entry(key).or_default().push(i);
    }
    let mut points = Vec::with_capacity(voxels.len());
    let mut attrs = cloud.attrs().map(|_| Vec::with_capacity(voxels.len()));
    let width = cloud.attr_width();
    for members in voxels.values() {
        let count = members.len() as f64;
        let sum = members
            .iter()
            .fold(Vec3::zeros(), |acc, &i| acc + cloud.point(i));
        points.push(sum / count);
        if let (Some(out), Some(src)) = (attrs.as_mut(), cloud.attrs()) {
            let mut mean = vec![0.0; width];
            for &i in members {
                for (m, v) in mean.iter_mut().zip(&src[i]) {
                    *m += v;
                }
            }
            mean.iter_mut().for_each(|m| *m /= count);
            out.push(mean);
        }
    }
    let sampled = PointCloud::new(points)?;
    match attrs {
        Some(a) => sampled.with_attrs(a),
        None => Ok(sampled),
    }
}

/// Up to `max_k` cloud indices within `radius` of each center, nearest first.
///
/// Short rows are padded by repeating the first hit; a center with no hit
/// gets its nearest point repeated.
pub fn ball_query(
    cloud: &PointCloud,
    centers: &PointCloud,
    radius: f64,
    max_k: usize,
) -> Result<NeighborIndex> {
    if cloud.is_empty() {
        return Err(Error::InvalidInput("ball query on an empty cloud".into()));
    }
    if radius.is_nan() || radius <= 0.0 || max_k == 0 {
        return Err(Error::InvalidArgument(format!(
            "ball query needs radius > 0 and max_k >= 1, got radius={radius}, max_k={max_k}"
        )));
    }
    let r2 = radius * radius;
    let mut out = Vec::with_capacity(centers.len() * max_k);
    let mut scratch: Vec<(f64, usize)> = Vec::new();
    for c in centers.points() {
        scratch.clear();
        scratch.extend(
            cloud
                .points()
                .iter()
                .enumerate()
                .map(|(j, p)| (dist2(c, p), j)),
        );
        scratch.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let hits: Vec<usize> = scratch
            .iter()
            .take_while(|(d, _)| *d <= r2)
            .take(max_k)
            .map(|&(_, j)| j)
            .collect();
        let pad = hits.first().copied().unwrap_or(scratch[0].1);
        let filled = hits.len();
        out.extend(hits);
        out.extend(std::iter::repeat_n(pad, max_k - filled));
    }
    Ok(NeighborIndex::from_flat(max_k, out))
}
