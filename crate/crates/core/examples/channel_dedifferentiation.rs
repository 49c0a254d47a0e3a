//! Split linear maps with separate normalization of coordinate and feature branches.

use repsurf::neural::{cd_forward, column_stats, split_linear, BatchNormState, CdVariant, Matrix};
use repsurf::RngStream;

fn random(rows: usize, cols: usize, scale: f64, rng: &mut RngStream) -> Matrix {
    Matrix::from_vec(rows, cols, (0..rows * cols).map(|_| rng.uniform(-scale, scale)).collect())
        .unwrap()
}

fn main() -> repsurf::Result<()> {
    let mut rng = RngStream::new(6);
    // coordinates are small, features are large
    let x = random(64, 3, 0.1, &mut rng);
    let f = random(64, 10, 50.0, &mut rng);
    let wx = random(8, 3, 1.0, &mut rng);
    let wf = random(8, 10, 1.0, &mut rng);

    let joint = x.hconcat(&f)?.matmul_transposed(&wx.hconcat(&wf)?)?;
    let split = split_linear(&x, &f, &wx, &wf)?;
    let gap = joint.as_slice().iter().zip(split.as_slice()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!("split product gap {gap:.2e}");

    for variant in [CdVariant::None, CdVariant::Pre, CdVariant::Post] {
        let (mut bx, mut bf) = (BatchNormState::new(3), BatchNormState::new(10));
        if variant == CdVariant::Post {
            bx = BatchNormState::new(8);
            bf = BatchNormState::new(8);
        } else if variant == CdVariant::None {
            bx = BatchNormState::new(8);
        }
        let out = cd_forward(&x, &f, &wx, &wf, &mut bx, &mut bf, variant)?;
        let (_, vx) = column_stats(&out.branches.0);
        let (_, vf) = column_stats(&out.branches.1);
        println!("{variant:?}: branch variance {:.3} vs {:.3}", vx[0], vf[0]);
    }
    Ok(())
}
