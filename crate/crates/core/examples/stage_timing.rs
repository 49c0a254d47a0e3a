//! Single-threaded wall-clock timing of the descriptor stages.

use repsurf::analytics::time_stage;
use repsurf::synth::{synth_shape, ShapeKind};
use repsurf::triangular::triangular_repsurf;
use repsurf::umbrella::{umbrella_repsurf, UmbrellaConfig};
use repsurf::RngStream;

fn main() -> repsurf::Result<()> {
    let mut stream = RngStream::new(9);
    for n in [1024, 2048] {
        let cloud = synth_shape(ShapeKind::Sphere, n, 0.0, &mut stream)?.cloud;
        let tri = time_stage("triangular", || triangular_repsurf(&cloud, Default::default(), &mut stream).map(|_| ()), 16, 5, 1)?;
        let cfg = UmbrellaConfig::default();
        let umb = time_stage("umbrella", || umbrella_repsurf(&cloud, &cfg, &mut stream).map(|_| ()), 16, 5, 1)?;
        println!("n={n}");
        println!("  {}", tri.to_key_value());
        println!("  {}", umb.to_key_value());
    }
    Ok(())
}
