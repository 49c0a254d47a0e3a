//! k-nearest neighbors through the kd-tree, checked against a direct scan.

use repsurf::geometry::{knn_bruteforce, knn_indexed, KdTree};
use repsurf::synth::{synth_shape, ShapeKind};
use repsurf::{RngStream, Vec3};

fn main() -> repsurf::Result<()> {
    let cloud = synth_shape(ShapeKind::Sphere, 2000, 0.01, &mut RngStream::new(1))?.cloud;

    let indexed = knn_indexed(&cloud, 16)?;
    let brute = knn_bruteforce(&cloud, 16)?;
    assert_eq!(indexed, brute);
    println!("point 0 neighbors: {:?}", indexed.row(0));

    // arbitrary queries against the same tree
    let tree = KdTree::build(cloud.points());
    let north = tree.nearest(&Vec3::new(0.0, 0.0, 1.0), 4, None);
    println!("closest to the north pole: {north:?}");
    Ok(())
}
