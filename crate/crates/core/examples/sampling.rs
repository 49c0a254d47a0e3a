//! Farthest point sampling, voxel grid downsampling and ball query grouping.

use repsurf::geometry::{ball_query, farthest_point_sampling, grid_sampling};
use repsurf::synth::{synth_shape, ShapeKind};
use repsurf::RngStream;

fn main() -> repsurf::Result<()> {
    let cloud = synth_shape(ShapeKind::Cube, 4096, 0.0, &mut RngStream::new(2))?.cloud;

    let centers = farthest_point_sampling(&cloud, 64, 0)?;
    println!("fps kept {} points, first five {:?}", centers.len(), &centers[..5]);

    let voxels = grid_sampling(&cloud, 0.25)?;
    println!("grid of side 0.25 keeps {} voxel means", voxels.len());

    let groups = ball_query(&cloud, &cloud.select(&centers)?, 0.3, 16)?;
    println!("group of center {}: {:?}", centers[0], groups.row(0));
    Ok(())
}
