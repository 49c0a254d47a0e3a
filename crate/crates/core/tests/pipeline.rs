use repsurf::analytics::time_stage;
use repsurf::polar::with_polar;
use repsurf::synth::{synth_shape, Region, ShapeKind};
use repsurf::triangular::{triangular_repsurf, TriangularOptions};
use repsurf::umbrella::{umbrella_repsurf, UmbrellaConfig};
use repsurf::{RngStream, Vec3};

#[test]
fn stepped_plane_normals_constant_per_region() {
    let mut rng = RngStream::new(21);
    let shape = synth_shape(ShapeKind::PlaneWithStep, 2000, 0.0, &mut rng).unwrap();
    let labels = shape.labels.as_ref().unwrap();
    let feats = triangular_repsurf(&shape.cloud, TriangularOptions::default(), &mut rng).unwrap();
    for region in [Region::Lower, Region::Upper] {
        let normals: Vec<Vec3> = feats
            .iter()
            .zip(labels)
            .filter(|(f, l)| **l == region && !f.degenerate)
            .map(|(f, _)| f.normal)
            .collect();
        assert!(normals.len() > 500);
        for n in &normals {
            assert!((n - normals[0]).amax() <= 1e-5, "{region}: {n:?} vs {:?}", normals[0]);
        }
    }
}

#[test]
fn random_unit_vectors_have_bounded_polar_fields() {
    let sphere = synth_shape(ShapeKind::Sphere, 10_000, 0.0, &mut RngStream::new(22)).unwrap();
    for p in sphere.cloud.points() {
        let v = with_polar(p).unwrap();
        assert!((v[3] - 1.0).abs() <= 1e-6);
        assert!(v[4..].iter().all(|f| (0.0..=1.0).contains(f)));
    }
}

#[test]
fn umbrella_time_grows_with_cloud_size() {
    let mut rng = RngStream::new(23);
    let cfg = UmbrellaConfig::default();
    let mut medians = Vec::new();
    for n in [1024, 2048] {
        let cloud = synth_shape(ShapeKind::Sphere, n, 0.0, &mut rng).unwrap().cloud;
        let r = time_stage("umbrella", || umbrella_repsurf(&cloud, &cfg, &mut rng).map(|_| ()), 4, 5, 1)
            .unwrap();
        assert_eq!(r.threads, 1);
        medians.push(r.median_ms);
    }
    let ratio = medians[1] / medians[0];
    // twice the points should cost about twice the time
    assert!((1.0..=4.0).contains(&ratio), "ratio {ratio:.2}");
}
