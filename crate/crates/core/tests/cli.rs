use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use repsurf::analytics::flops_repsurf;
use repsurf::io::{read_rsrf, write_xyz};
use repsurf::synth::{synth_shape, ShapeKind};
use repsurf::umbrella::{InputLayout, UmbrellaConfig};
use repsurf::RngStream;

fn repsurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_repsurf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn sphere(dir: &Path, n: usize) -> PathBuf {
    let path = dir.join("sphere.xyz");
    let shape = synth_shape(ShapeKind::Sphere, n, 0.0, &mut RngStream::new(11)).unwrap();
    write_xyz(&path, &shape.cloud).unwrap();
    path
}

#[test]
fn umbrella_output_shape() {
    let dir = tempfile::tempdir().unwrap();
    let input = sphere(dir.path(), 1024);
    let out = dir.path().join("u.rsrf");
    let o = repsurf(&["umbrella", "--k", "8", "--layout", "n+p+cp", "--agg", "sum", "--input", s(&input), "--output", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let m = read_rsrf(&out).unwrap();
    assert_eq!((m.rows(), m.channels()), (1024, 3 + 10));
}

#[test]
fn umbrella_with_mlp_and_saved_weights() {
    let dir = tempfile::tempdir().unwrap();
    let input = sphere(dir.path(), 200);
    let (a, b, w) = (dir.path().join("a.rsrf"), dir.path().join("b.rsrf"), dir.path().join("w.rsrf"));
    let o = repsurf(&["umbrella", "--mlp", "10,16,16,10", "--seed", "4", "--save-weights", s(&w), "--input", s(&input), "--output", s(&a)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let weights = read_rsrf(&w).unwrap();
    assert_eq!((weights.rows(), weights.channels()), (1, 618));
    // a different seed, but the same loaded weights
    let o = repsurf(&["umbrella", "--mlp", "10,16,16,10", "--seed", "9", "--weights", s(&w), "--input", s(&input), "--output", s(&b)]);
    assert!(o.status.success());
    let (ma, mb) = (read_rsrf(&a).unwrap(), read_rsrf(&b).unwrap());
    assert_eq!(ma.channels(), 13);
    for (x, y) in ma.data().iter().zip(mb.data()) {
        assert!((x - y).abs() <= 1e-5 * x.abs().max(1.0));
    }
}

#[test]
fn relative_frame_positions_vanish() {
    let dir = tempfile::tempdir().unwrap();
    let input = sphere(dir.path(), 500);
    let out = dir.path().join("t.rsrf");
    let o = repsurf(&["triangular", "--frame", "rel", "--input", s(&input), "--output", s(&out)]);
    assert!(o.status.success());
    let m = read_rsrf(&out).unwrap();
    assert_eq!(m.channels(), 7);
    assert!(m.iter_rows().all(|r| r[6].abs() <= 1e-6));
}

#[test]
fn post_and_pre_sampling() {
    let dir = tempfile::tempdir().unwrap();
    let input = sphere(dir.path(), 400);
    for extra in [&[][..], &["--pre"][..]] {
        let out = dir.path().join("p.rsrf");
        let mut args = vec!["triangular", "--fps", "100", "--input", s(&input), "--output", s(&out)];
        args.extend_from_slice(extra);
        assert!(repsurf(&args).status.success());
        assert_eq!(read_rsrf(&out).unwrap().rows(), 100);
    }
    let o = repsurf(&["triangular", "--pre", "--input", s(&input), "--output", "x.rsrf"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_flops_reports_exact_cost() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("cost.txt");
    let o = repsurf(&["bench", "--what", "flops", "--layout", "n", "--n", "1", "--output", s(&out)]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let cfg = UmbrellaConfig { layout: InputLayout::N, ..Default::default() };
    let expected = flops_repsurf(&cfg, 1).unwrap().to_key_value();
    assert_eq!(std::fs::read_to_string(&out).unwrap(), expected);
    assert_eq!(String::from_utf8_lossy(&o.stderr), expected);

    let csv = dir.path().join("cost.csv");
    assert!(repsurf(&["bench", "--output", s(&csv)]).status.success());
    assert!(std::fs::read_to_string(&csv).unwrap().starts_with("label,"));
}

#[test]
fn bench_time_reports_each_stage() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("time.txt");
    let o = repsurf(&["bench", "--what", "time", "--n", "256", "--batch", "2", "--reps", "3", "--output", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    for stage in ["knn", "triangular", "umbrella"] {
        assert!(text.contains(&format!("label={stage} ")), "{text}");
    }
    assert!(text.contains("threads=1"));
}

#[test]
fn curvature_and_synth() {
    let dir = tempfile::tempdir().unwrap();
    let cloud = dir.path().join("cube.xyz");
    assert!(repsurf(&["synth", "--shape", "cube", "--n", "500", "--output", s(&cloud)]).status.success());
    let text = std::fs::read_to_string(&cloud).unwrap();
    assert_eq!(text.lines().count(), 500);
    assert!(text.lines().all(|l| l.split_whitespace().count() == 4));

    let report = dir.path().join("curv.csv");
    let o = repsurf(&["curvature", "--shape", "cube", "--n", "3000", "--output", s(&report)]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(&report).unwrap();
    assert!(csv.starts_with("region,count,dispersion"));
    assert!(csv.contains("\nedge,"));
    assert_eq!(repsurf(&["curvature", "--shape", "sphere"]).status.code(), Some(2));
}

#[test]
fn polar_writes_six_channels() {
    let dir = tempfile::tempdir().unwrap();
    let input = sphere(dir.path(), 50);
    for system in ["sphere", "cylinder"] {
        let out = dir.path().join(format!("{system}.rsrf"));
        assert!(repsurf(&["polar", "--system", system, "--input", s(&input), "--output", s(&out)]).status.success());
        let m = read_rsrf(&out).unwrap();
        assert_eq!((m.rows(), m.channels()), (50, 6));
        assert!(m.iter_rows().all(|r| r[3..].iter().all(|v| v.is_finite())));
    }
}

#[test]
fn sampling_commands() {
    let dir = tempfile::tempdir().unwrap();
    let input = sphere(dir.path(), 300);
    let out = dir.path().join("s.xyz");
    assert!(repsurf(&["sample", "--method", "fps", "--n", "40", "--input", s(&input), "--output", s(&out)]).status.success());
    assert_eq!(std::fs::read_to_string(&out).unwrap().lines().count(), 40);
    assert!(repsurf(&["sample", "--method", "grid", "--cell", "0.5", "--input", s(&input), "--output", s(&out)]).status.success());
    assert_eq!(repsurf(&["sample", "--method", "grid", "--input", s(&input), "--output", s(&out)]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = repsurf(&["umbrella", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    assert!(o.stdout.is_empty());

    let input = sphere(dir.path(), 20);
    let bad_ext = dir.path().join("out.ply");
    assert_eq!(repsurf(&["triangular", "--input", s(&input), "--output", s(&bad_ext)]).status.code(), Some(2));
    // k larger than the cloud
    let out = dir.path().join("o.rsrf");
    assert_eq!(repsurf(&["umbrella", "--k", "40", "--input", s(&input), "--output", s(&out)]).status.code(), Some(2));
    // MLP input width disagrees with the layout
    assert_eq!(repsurf(&["umbrella", "--mlp", "7,4", "--input", s(&input), "--output", s(&out)]).status.code(), Some(2));

    let garbage = dir.path().join("bad.xyz");
    std::fs::write(&garbage, "1 2 3\n4 five 6\n").unwrap();
    let o = repsurf(&["triangular", "--input", s(&garbage), "--output", s(&out)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let magic = dir.path().join("bad.rsrf");
    std::fs::write(&magic, b"RSRX\x01\0\0\0").unwrap();
    assert_eq!(repsurf(&["polar", "--input", s(&magic), "--output", s(&out)]).status.code(), Some(3));

    let nan = dir.path().join("nan.xyz");
    std::fs::write(&nan, "1 2 3\n4 NaN 6\n7 8 9\n").unwrap();
    assert_eq!(repsurf(&["polar", "--input", s(&nan), "--output", s(&out)]).status.code(), Some(4));

    let missing = dir.path().join("missing.xyz");
    assert_eq!(repsurf(&["polar", "--input", s(&missing), "--output", s(&out)]).status.code(), Some(3));

    assert_eq!(repsurf(&["--help"]).status.code(), Some(0));
}

#[test]
fn in_process_run_matches_binary_codes() {
    assert_eq!(repsurf::cli::run(["repsurf", "polar"]), 2);
    assert_eq!(repsurf::cli::run(["repsurf", "nope"]), 2);
}
