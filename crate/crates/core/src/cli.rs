//! Command-line front end: `repsurf <subcommand> [flags]`.
//!
//! Data goes to files only; diagnostics and reports go to stderr.
//! Exit codes: 0 ok, 2 usage, 3 format or I/O, 4 numeric validation.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analytics::{cube_sensitivity, curvature_report, flops_repsurf, time_stage, RegionSummary};
use crate::error::{Error, Result};
use crate::geometry::{
    farthest_point_sampling, grid_sampling, knn_indexed, normalize_unit_cube, PointCloud, RngStream,
};
use crate::io::{read_cloud, read_rsrf, write_cloud, write_matrix, write_rsrf, RsrfMatrix};
use crate::neural::{BiasPolicy, MlpParams};
use crate::polar::{with_cylindrical, with_polar};
use crate::synth::{synth_shape, Region, ShapeKind};
use crate::triangular::{triangular_repsurf, CentroidMode, PositionFrame, TriangularOptions};
use crate::umbrella::{umbrella_repsurf, Aggregation, InputLayout, Transform, UmbrellaConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FORMAT: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "repsurf", version, about = "Surface descriptors for point clouds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct IoArgs {
    /// Input cloud (.xyz or .rsrf)
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output file (.xyz or .rsrf)
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SampleMethod {
    Fps,
    Grid,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FrameArg {
    Abs,
    Rel,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CentroidArg {
    EdgeMean,
    Triangle,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolarSystem {
    Sphere,
    Cylinder,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BenchWhat {
    Flops,
    Time,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BiasArg {
    All,
    First,
    None,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ShapeArg {
    Cube,
    Sphere,
    PlaneWithStep,
    HexagonFan,
}

impl From<ShapeArg> for ShapeKind {
    fn from(s: ShapeArg) -> Self {
        match s {
            ShapeArg::Cube => ShapeKind::Cube,
            ShapeArg::Sphere => ShapeKind::Sphere,
            ShapeArg::PlaneWithStep => ShapeKind::PlaneWithStep,
            ShapeArg::HexagonFan => ShapeKind::HexagonFan,
        }
    }
}

/// Shared flags of the featurizing commands.
#[derive(Debug, Args)]
struct PipelineArgs {
    /// Downsample to this many points with farthest point sampling
    #[arg(long)]
    fps: Option<usize>,
    /// Featurize the full cloud first, then keep the sampled rows
    #[arg(long, requires = "fps")]
    pre: bool,
    /// Rescale the input into [-1, 1] before anything else
    #[arg(long)]
    normalize: bool,
    #[arg(long)]
    augment: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct UmbrellaArgs {
    #[arg(long, default_value_t = crate::umbrella::DEFAULT_K)]
    k: usize,
    #[arg(long, default_value = "n+p+cp")]
    layout: String,
    #[arg(long, default_value = "sum")]
    agg: String,
    /// Comma-separated MLP widths, e.g. "10,16,16,10"; identity when omitted
    #[arg(long)]
    mlp: Option<String>,
    #[arg(long, value_enum, default_value_t = BiasArg::All)]
    bias: BiasArg,
    /// Load MLP parameters from an RSRF file (1 row, one channel per parameter)
    #[arg(long, requires = "mlp")]
    weights: Option<PathBuf>,
    /// Save the MLP parameters used to an RSRF file
    #[arg(long, requires = "mlp")]
    save_weights: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FrameArg::Abs)]
    frame: FrameArg,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Downsample a cloud
    Sample {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, value_enum)]
        method: SampleMethod,
        /// Number of points to keep (fps)
        #[arg(long)]
        n: Option<usize>,
        /// Voxel side (grid)
        #[arg(long)]
        cell: Option<f64>,
        #[arg(long, default_value_t = 0)]
        start: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Triangular descriptor: 7 channels per point
    Triangular {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[arg(long, value_enum, default_value_t = FrameArg::Abs)]
        frame: FrameArg,
        #[arg(long, value_enum, default_value_t = CentroidArg::EdgeMean)]
        centroid: CentroidArg,
    },
    /// Umbrella descriptor: 3 + C channels per point
    Umbrella {
        #[command(flatten)]
        io: IoArgs,
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[command(flatten)]
        umbrella: UmbrellaArgs,
    },
    /// Cartesian coordinates followed by polar auxiliary coordinates
    Polar {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, value_enum, default_value_t = PolarSystem::Sphere)]
        system: PolarSystem,
    },
    /// FLOPs/parameter count or wall-clock timing of the umbrella pass
    Bench {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, value_enum, default_value_t = BenchWhat::Flops)]
        what: BenchWhat,
        #[arg(long, default_value_t = 16)]
        batch: usize,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value_t = 1)]
        warmup: usize,
        /// Points per cloud when no input is given
        #[arg(long, default_value_t = 1024)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        umbrella: UmbrellaArgs,
    },
    /// Per-region normal dispersion on a synthetic shape
    Curvature {
        #[arg(long, value_enum, default_value_t = ShapeArg::Cube)]
        shape: ShapeArg,
        #[arg(long, default_value_t = 6000)]
        n: usize,
        /// Grid-sample the shape with this voxel side first
        #[arg(long)]
        cell: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write a synthetic shape (labels as a 4th column where defined)
    Synth {
        #[arg(long, value_enum)]
        shape: ShapeArg,
        #[arg(long, default_value_t = 1024)]
        n: usize,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Maps a library error to the process exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_) | Error::Config(_) => EXIT_USAGE,
        Error::Format { .. } | Error::Io(_) => EXIT_FORMAT,
        Error::InvalidInput(_) | Error::Validation(_) | Error::InvalidState(_) => EXIT_NUMERIC,
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            eprint!("{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn required<'a>(p: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path> {
    p.as_deref()
        .ok_or_else(|| Error::InvalidArgument(format!("--{flag} is required")))
}

fn load_input(io: &IoArgs, normalize: bool) -> Result<PointCloud> {
    let cloud = read_cloud(required(&io.input, "input")?)?;
    if normalize {
        normalize_unit_cube(&cloud)
    } else {
        Ok(cloud)
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Sample {
            io,
            method,
            n,
            cell,
            start,
            seed: _,
        } => {
            let output = required(&io.output, "output")?;
            let cloud = load_input(&io, false)?;
            let sampled = match method {
                SampleMethod::Fps => {
                    let m = n.ok_or_else(|| Error::InvalidArgument("--n is required for fps".into()))?;
                    cloud.select(&farthest_point_sampling(&cloud, m, start)?)?
                }
                SampleMethod::Grid => {
                    let c = cell
                        .ok_or_else(|| Error::InvalidArgument("--cell is required for grid".into()))?;
                    grid_sampling(&cloud, c)?
                }
            };
            log::info!("sampled {} of {} points", sampled.len(), cloud.len());
            write_cloud(output, &sampled)
        }
        Command::Triangular {
            io,
            pipeline,
            frame,
            centroid,
        } => {
            let output = required(&io.output, "output")?;
            let cloud = load_input(&io, pipeline.normalize)?;
            let opts = TriangularOptions {
                mode: match centroid {
                    CentroidArg::EdgeMean => CentroidMode::EdgeMean,
                    CentroidArg::Triangle => CentroidMode::TriangleCentroid,
                },
                frame: frame.into(),
                augment: pipeline.augment,
            };
            let mut stream = RngStream::new(pipeline.seed);
            let rows = run_pipeline(&cloud, &pipeline, |c| {
                Ok(triangular_repsurf(c, opts, &mut stream)?
                    .iter()
                    .map(|f| f.to_row().to_vec())
                    .collect())
            })?;
            write_matrix(output, 7, &rows)
        }
        Command::Umbrella {
            io,
            pipeline,
            umbrella,
        } => {
            let output = required(&io.output, "output")?;
            let cloud = load_input(&io, pipeline.normalize)?;
            let mut stream = RngStream::new(pipeline.seed);
            let cfg = umbrella_config(&umbrella, pipeline.augment, &mut stream)?;
            let width = 3 + cfg.out_width();
            let rows = run_pipeline(&cloud, &pipeline, |c| {
                Ok(umbrella_repsurf(c, &cfg, &mut stream)?
                    .iter()
                    .map(|f| f.to_row())
                    .collect())
            })?;
            write_matrix(output, width, &rows)
        }
        Command::Polar { io, system } => {
            let output = required(&io.output, "output")?;
            let cloud = load_input(&io, false)?;
            let rows = cloud
                .points()
                .iter()
                .map(|p| {
                    Ok(match system {
                        PolarSystem::Sphere => with_polar(p)?,
                        PolarSystem::Cylinder => with_cylindrical(p)?,
                    }
                    .to_vec())
                })
                .collect::<Result<Vec<_>>>()?;
            write_matrix(output, 6, &rows)
        }
        Command::Bench {
            io,
            what,
            batch,
            reps,
            warmup,
            n,
            seed,
            umbrella,
        } => {
            let mut stream = RngStream::new(seed);
            let cfg = umbrella_config(&umbrella, false, &mut stream)?;
            let report = match what {
                BenchWhat::Flops => {
                    let points = match &io.input {
                        Some(p) => read_cloud(p)?.len(),
                        None => n,
                    };
                    let cost = flops_repsurf(&cfg, points as u64)?;
                    if is_csv(io.output.as_deref()) {
                        cost.to_csv()
                    } else {
                        cost.to_key_value()
                    }
                }
                BenchWhat::Time => {
                    let cloud = match &io.input {
                        Some(p) => read_cloud(p)?,
                        None => synth_shape(ShapeKind::Sphere, n, 0.0, &mut stream)?.cloud,
                    };
                    let mut aug = RngStream::new(seed);
                    let stages = [
                        time_stage("knn", || knn_indexed(&cloud, cfg.k).map(|_| ()), batch, reps, warmup)?,
                        time_stage(
                            "triangular",
                            || triangular_repsurf(&cloud, Default::default(), &mut aug).map(|_| ()),
                            batch,
                            reps,
                            warmup,
                        )?,
                        time_stage(
                            "umbrella",
                            || umbrella_repsurf(&cloud, &cfg, &mut aug).map(|_| ()),
                            batch,
                            reps,
                            warmup,
                        )?,
                    ];
                    if is_csv(io.output.as_deref()) {
                        let mut s = format!("{}\n", crate::analytics::TimingReport::CSV_HEADER);
                        for r in &stages {
                            s.push_str(&r.to_csv_row());
                            s.push('\n');
                        }
                        s
                    } else {
                        stages.iter().map(|r| r.to_key_value() + "\n").collect()
                    }
                }
            };
            emit_report(&report, io.output.as_deref())
        }
        Command::Curvature {
            shape,
            n,
            cell,
            seed,
            output,
        } => {
            let summary = match shape {
                ShapeArg::Cube => cube_sensitivity(n, cell, seed)?,
                ShapeArg::PlaneWithStep => {
                    let s = synth_shape(ShapeKind::PlaneWithStep, n, 0.0, &mut RngStream::new(seed))?;
                    let f = triangular_repsurf(&s.cloud, Default::default(), &mut RngStream::new(seed))?;
                    let normals: Vec<_> = f.iter().map(|t| t.normal).collect();
                    curvature_report(&normals, s.labels.as_deref().unwrap_or_default())
                }
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "shape {other:?} has no region labels"
                    )))
                }
            };
            let report = format_regions(&summary, is_csv(output.as_deref()));
            emit_report(&report, output.as_deref())
        }
        Command::Synth {
            shape,
            n,
            noise,
            seed,
            output,
        } => {
            let output = required(&output, "output")?;
            let s = synth_shape(shape.into(), n, noise, &mut RngStream::new(seed))?;
            write_cloud(output, &s.labeled_cloud()?)
        }
    }
}

impl From<FrameArg> for PositionFrame {
    fn from(f: FrameArg) -> Self {
        match f {
            FrameArg::Abs => PositionFrame::Absolute,
            FrameArg::Rel => PositionFrame::RelativeLiteral,
        }
    }
}

/// Post-computed by default: sample, then featurize the sampled cloud.
/// With `--pre`, featurize everything and keep the sampled rows.
fn run_pipeline(
    cloud: &PointCloud,
    pipeline: &PipelineArgs,
    mut featurize: impl FnMut(&PointCloud) -> Result<Vec<Vec<f64>>>,
) -> Result<Vec<Vec<f64>>> {
    let Some(m) = pipeline.fps else {
        return featurize(cloud);
    };
    let picked = farthest_point_sampling(cloud, m, 0)?;
    if pipeline.pre {
        let all = featurize(cloud)?;
        Ok(picked.iter().map(|&i| all[i].clone()).collect())
    } else {
        featurize(&cloud.select(&picked)?)
    }
}

fn umbrella_config(args: &UmbrellaArgs, augment: bool, stream: &mut RngStream) -> Result<UmbrellaConfig> {
    let layout: InputLayout = args.layout.parse()?;
    let aggregation: Aggregation = args.agg.parse()?;
    let transform = match &args.mlp {
        None => Transform::Identity,
        Some(list) => {
            let widths = list
                .split(',')
                .map(|w| {
                    w.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidArgument(format!("bad MLP width '{w}'")))
                })
                .collect::<Result<Vec<_>>>()?;
            let bias = match args.bias {
                BiasArg::All => BiasPolicy::All,
                BiasArg::First => BiasPolicy::FirstOnly,
                BiasArg::None => BiasPolicy::None,
            };
            let mut mlp = MlpParams::new(&widths, bias, stream)?;
            if let Some(path) = &args.weights {
                let m = read_rsrf(path)?;
                let flat: Vec<f64> = m.data().iter().map(|&v| v as f64).collect();
                mlp.load_flat(&flat)?;
            }
            if let Some(path) = &args.save_weights {
                let flat: Vec<f32> = mlp.to_flat().iter().map(|&v| v as f32).collect();
                let channels = u32::try_from(flat.len())
                    .map_err(|_| Error::InvalidArgument("too many parameters".into()))?;
                write_rsrf(path, &RsrfMatrix::new(1, channels, flat)?)?;
            }
            Transform::Mlp(mlp)
        }
    };
    let cfg = UmbrellaConfig {
        k: args.k,
        layout,
        aggregation,
        transform,
        augment,
        frame: args.frame.into(),
        centroid_mode: CentroidMode::EdgeMean,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn is_csv(path: Option<&Path>) -> bool {
    path.and_then(|p| p.extension())
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn emit_report(report: &str, output: Option<&Path>) -> Result<()> {
    eprint!("{report}");
    if let Some(path) = output {
        fs::write(path, report)?;
    }
    Ok(())
}

fn format_regions(summary: &[RegionSummary<Region>], csv: bool) -> String {
    let mut out = String::new();
    if csv {
        out.push_str("region,count,dispersion,mean_x,mean_y,mean_z\n");
    }
    for r in summary {
        let m = r.mean_normal;
        if csv {
            out.push_str(&format!(
                "{},{},{:.9},{:.9},{:.9},{:.9}\n",
                r.label, r.count, r.dispersion, m.x, m.y, m.z
            ));
        } else {
            out.push_str(&format!(
                "region={} count={} dispersion={:.9} mean_normal={:.9},{:.9},{:.9}\n",
                r.label, r.count, r.dispersion, m.x, m.y, m.z
            ));
        }
    }
    out
}
