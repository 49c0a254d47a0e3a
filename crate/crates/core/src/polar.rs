//! Spherical and cylindrical polar auxiliary coordinates.
//!
//! Angles are normalized to [0, 1]: inclination by pi, azimuth by 2pi with a
//! +0.5 shift. Every output is finite for every finite input; the inclination
//! at the origin is pinned to 0.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// (rho, theta, phi) with theta and phi normalized to [0, 1]. rho is unbounded above.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalAux {
    pub rho: f64,
    pub theta: f64,
    pub phi: f64,
}

/// (rho, phi, z), each clamped or scaled into [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylindricalAux {
    pub rho: f64,
    pub phi: f64,
    pub z: f64,
}

fn check_finite(v: &Vec3) -> Result<()> {
    if v.iter().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("non-finite vector {v:?}")))
    }
}

fn normalized_azimuth(x: f64, y: f64) -> f64 {
    y.atan2(x) / TAU + 0.5
}

pub fn spherical_aux(v: &Vec3) -> Result<SphericalAux> {
    check_finite(v)?;
    let rho = v.norm().max(0.0);
    let theta = if rho == 0.0 {
        0.0
    } else {
        // the ratio can leave [-1, 1] by an ulp
        (v.z / rho).clamp(-1.0, 1.0).acos() / PI
    };
    Ok(SphericalAux {
        rho,
        theta,
        phi: normalized_azimuth(v.x, v.y),
    })
}

/// Intended for ball-query offsets of radius <= 1; larger radii and heights saturate.
pub fn cylindrical_aux(v: &Vec3) -> Result<CylindricalAux> {
    check_finite(v)?;
    let rho = v.x.hypot(v.y).clamp(0.0, 1.0);
    let z = (v.z.clamp(-1.0, 1.0) + 1.0) / 2.0;
    Ok(CylindricalAux {
        rho,
        phi: normalized_azimuth(v.x, v.y),
        z,
    })
}

/// Cartesian offset followed by its spherical auxiliary: (x, y, z, rho, theta, phi).
pub fn with_polar(v: &Vec3) -> Result<[f64; 6]> {
    let s = spherical_aux(v)?;
    Ok([v.x, v.y, v.z, s.rho, s.theta, s.phi])
}

/// Cartesian offset followed by its cylindrical auxiliary: (x, y, z, rho, phi, z').
pub fn with_cylindrical(v: &Vec3) -> Result<[f64; 6]> {
    let c = cylindrical_aux(v)?;
    Ok([v.x, v.y, v.z, c.rho, c.phi, c.z])
}

impl SphericalAux {
    /// Inverse map back to Cartesian coordinates.
    pub fn to_cartesian(&self) -> Vec3 {
        let theta = self.theta * PI;
        let phi = (self.phi - 0.5) * TAU;
        Vec3::new(
            self.rho * theta.sin() * phi.cos(),
            self.rho * theta.sin() * phi.sin(),
            self.rho * theta.cos(),
        )
    }
}
