//! Spherical and cylindrical auxiliary coordinates.

use repsurf::polar::{cylindrical_aux, spherical_aux, with_polar};
use repsurf::Vec3;

fn main() -> repsurf::Result<()> {
    for v in [Vec3::zeros(), Vec3::z(), Vec3::x(), Vec3::new(3.0, 4.0, 0.0)] {
        let s = spherical_aux(&v)?;
        let c = cylindrical_aux(&v)?;
        println!("{v:?}: sphere {s:?}, cylinder {c:?}");
        println!("  round trip {:?}", s.to_cartesian());
    }
    println!("with polar: {:?}", with_polar(&Vec3::new(0.0, 0.0, 1.0))?);
    Ok(())
}
