//! Umbrella descriptor: counterclockwise fans, a small MLP and sum pooling.

use repsurf::neural::{BiasPolicy, MlpParams};
use repsurf::synth::{synth_shape, ShapeKind};
use repsurf::umbrella::{build_umbrella, umbrella_repsurf, Transform, UmbrellaConfig};
use repsurf::RngStream;

fn main() -> repsurf::Result<()> {
    let mut stream = RngStream::new(4);
    let cloud = synth_shape(ShapeKind::Sphere, 1024, 0.0, &mut stream)?.cloud;

    let fans = build_umbrella(&cloud, &UmbrellaConfig::default(), &mut stream)?;
    let fan = &fans[0];
    println!("fan of point {:?}", fan.point);
    for t in &fan.triangles {
        println!("  normal {:?} position {:.4}", t.normal, t.position);
    }

    let cfg = UmbrellaConfig {
        transform: Transform::Mlp(MlpParams::new(&[10, 16, 16, 10], BiasPolicy::All, &mut stream)?),
        ..Default::default()
    };
    let features = umbrella_repsurf(&cloud, &cfg, &mut stream)?;
    println!("{} rows of {} channels", features.len(), features[0].to_row().len());
    Ok(())
}
