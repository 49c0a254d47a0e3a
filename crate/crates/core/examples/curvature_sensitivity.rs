//! Normal dispersion on cube faces versus cube edges.

use repsurf::analytics::cube_sensitivity;

fn main() -> repsurf::Result<()> {
    for cell in [None, Some(0.02)] {
        println!("grid cell {cell:?}");
        for r in cube_sensitivity(6000, cell, 8)? {
            println!("  {:>6} n={:<5} dispersion={:.5}", r.label.to_string(), r.count, r.dispersion);
        }
    }
    Ok(())
}
