use std::cmp::Ordering;
use std::f64::consts::TAU;

use super::Vec3;

/// Azimuth of `offset` on the xy-plane, in [0, 2pi). The vertical direction
/// (dx = dy = 0) gets azimuth 0.
pub fn azimuth(offset: &Vec3) -> f64 {
    let phi = offset.y.atan2(offset.x);
    if phi >= 0.0 {
        phi
    } else {
        let wrapped = phi + TAU;
        // tiny negative angles round up to exactly 2pi
        if wrapped >= TAU {
            f64::from_bits(TAU.to_bits() - 1)
        } else {
            wrapped
        }
    }
}

fn inclination(offset: &Vec3, rho: f64) -> f64 {
    if rho == 0.0 {
        0.0
    } else {
        (offset.z / rho).clamp(-1.0, 1.0).acos()
    }
}

/// Orders `neighbors` counterclockwise around `center`, starting from the +x axis.
///
/// Returns a permutation: `order[j]` is the original position of the j-th
/// neighbor in sorted order. Equal azimuths fall back to inclination, then
/// distance, then original position.
pub fn sort_counterclockwise(center: &Vec3, neighbors: &[Vec3]) -> Vec<usize> {
    let keys: Vec<(f64, f64, f64)> = neighbors
        .iter()
        .map(|p| {
            let d = p - center;
            let rho = d.norm();
            (azimuth(&d), inclination(&d, rho), rho)
        })
        .collect();
    let mut order: Vec<usize> = (0..neighbors.len()).collect();
    order.sort_by(|&a, &b| {
        let (ka, kb) = (keys[a], keys[b]);
        cmp_f64(ka.0, kb.0)
            .then(cmp_f64(ka.1, kb.1))
            .then(cmp_f64(ka.2, kb.2))
            .then(a.cmp(&b))
    });
    order
}

// -0.0 and 0.0 compare equal here, unlike total_cmp
fn cmp_f64(a: f64, b: f64) -> Ordering {
    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at_deg(deg: f64) -> Vec3 {
        let r = deg.to_radians();
        Vec3::new(r.cos(), r.sin(), 0.0)
    }

    #[test]
    fn sorts_by_azimuth() {
        let n = [at_deg(10.0), at_deg(200.0), at_deg(90.0)];
        assert_eq!(sort_counterclockwise(&Vec3::zeros(), &n), vec![0, 2, 1]);
    }

    #[test]
    fn negative_angles_wrap() {
        let n = [at_deg(-90.0), at_deg(45.0)];
        assert_eq!(sort_counterclockwise(&Vec3::zeros(), &n), vec![1, 0]);
        assert!((azimuth(&at_deg(-90.0)) - 1.5 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn recenters_on_center() {
        let c = Vec3::new(5.0, 5.0, 5.0);
        let n = [c + at_deg(300.0), c + at_deg(30.0), c + at_deg(150.0)];
        assert_eq!(sort_counterclockwise(&c, &n), vec![1, 2, 0]);
    }

    #[test]
    fn vertical_ties_use_inclination_then_distance() {
        let n = [
            Vec3::new(0.0, 0.0, -1.0), // azimuth 0, theta pi
            Vec3::new(0.0, 0.0, 2.0),  // azimuth 0, theta 0, far
            Vec3::new(0.0, 0.0, 1.0),  // azimuth 0, theta 0, near
            Vec3::new(1.0, 0.0, 0.0),  // azimuth 0, theta pi/2
        ];
        assert_eq!(sort_counterclockwise(&Vec3::zeros(), &n), vec![2, 1, 3, 0]);
    }

    #[test]
    fn tiny_negative_azimuth_stays_below_tau() {
        let a = azimuth(&Vec3::new(1.0, -1e-300, 0.0));
        assert!(a < TAU && a > TAU - 1e-3);
    }
}
