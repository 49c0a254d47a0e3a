//! Manual backpropagation checked against central finite differences.

use repsurf::neural::{BiasPolicy, Matrix, MlpParams};
use repsurf::RngStream;

fn loss(mlp: &MlpParams, x: &Matrix) -> repsurf::Result<f64> {
    Ok(mlp.infer(x)?.as_slice().iter().map(|v| 0.5 * v * v).sum())
}

fn main() -> repsurf::Result<()> {
    let mut rng = RngStream::new(5);
    let mut mlp = MlpParams::new(&[10, 16, 16, 10], BiasPolicy::All, &mut rng)?;
    let x = Matrix::from_vec(8, 10, (0..80).map(|_| rng.uniform(-1.0, 1.0)).collect())?;

    // d(0.5 y^2)/dy = y
    let y = mlp.forward(&x)?;
    mlp.backward(&x, &y)?;
    let analytic = mlp.grads_flat();

    let params = mlp.to_flat();
    let h = 1e-5;
    let mut worst: f64 = 0.0;
    let mut probe = mlp.clone();
    for (i, g) in analytic.iter().enumerate() {
        let mut p = params.clone();
        p[i] += h;
        probe.load_flat(&p)?;
        let up = loss(&probe, &x)?;
        p[i] -= 2.0 * h;
        probe.load_flat(&p)?;
        let down = loss(&probe, &x)?;
        let numeric = (up - down) / (2.0 * h);
        worst = worst.max((g - numeric).abs() / g.abs().max(numeric.abs()).max(1e-6));
    }
    println!("{} parameters, max relative error {worst:.2e}", params.len());

    mlp.sgd_step(0.05, 1e-4)?;
    println!("loss after one step: {:.6}", loss(&mlp, &x)?);
    Ok(())
}
