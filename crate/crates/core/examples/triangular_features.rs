//! Seven-channel triangular descriptor on a tilted plane.

use repsurf::synth::{synth_shape, ShapeKind};
use repsurf::triangular::{triangular_repsurf, PositionFrame, TriangularOptions};
use repsurf::RngStream;

fn main() -> repsurf::Result<()> {
    let mut stream = RngStream::new(3);
    let shape = synth_shape(ShapeKind::PlaneWithStep, 1000, 0.0, &mut stream)?;

    let features = triangular_repsurf(&shape.cloud, TriangularOptions::default(), &mut stream)?;
    for f in features.iter().take(3) {
        println!("{:?}", f.to_row());
    }

    // positions taken from the relative centroid collapse to zero
    let rel = TriangularOptions {
        frame: PositionFrame::RelativeLiteral,
        ..Default::default()
    };
    let worst = triangular_repsurf(&shape.cloud, rel, &mut stream)?
        .iter()
        .map(|f| f.position.abs())
        .fold(0.0, f64::max);
    println!("largest relative-frame position: {worst:.2e}");
    Ok(())
}
