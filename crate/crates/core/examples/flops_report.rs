//! Operation and parameter counts of an umbrella pass.

use repsurf::analytics::flops_repsurf;
use repsurf::neural::{BiasPolicy, MlpParams};
use repsurf::umbrella::{InputLayout, Transform, UmbrellaConfig};
use repsurf::RngStream;

fn main() -> repsurf::Result<()> {
    let identity = UmbrellaConfig {
        layout: InputLayout::N,
        ..Default::default()
    };
    print!("{}", flops_repsurf(&identity, 1)?.to_key_value());

    let mlp = MlpParams::new(&[10, 16, 16, 10], BiasPolicy::All, &mut RngStream::new(7))?;
    let cfg = UmbrellaConfig {
        transform: Transform::Mlp(mlp),
        ..Default::default()
    };
    print!("{}", flops_repsurf(&cfg, 1024)?.to_csv());
    Ok(())
}
