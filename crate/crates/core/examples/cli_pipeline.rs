//! The command-line pipeline driven in-process: synth, sample, featurize.

fn main() {
    let dir = std::env::temp_dir().join("repsurf_cli_example");
    std::fs::create_dir_all(&dir).unwrap();
    let path = |name: &str| dir.join(name).to_string_lossy().into_owned();
    let (cloud, sampled, feats) = (path("cloud.xyz"), path("sampled.rsrf"), path("umbrella.rsrf"));

    let steps: [&[&str]; 3] = [
        &["repsurf", "synth", "--shape", "sphere", "--n", "2048", "--seed", "1", "--output", &cloud],
        &["repsurf", "sample", "--method", "fps", "--n", "512", "--input", &cloud, "--output", &sampled],
        &["repsurf", "umbrella", "--mlp", "10,16,16,10", "--input", &sampled, "--output", &feats],
    ];
    for argv in steps {
        let code = repsurf::cli::run(argv.iter().copied());
        println!("{} -> exit {code}", argv[1]);
    }
    let m = repsurf::io::read_rsrf(&feats).unwrap();
    println!("features: {} x {}", m.rows(), m.channels());
}
