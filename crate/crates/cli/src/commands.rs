use std::fmt::Write as _;
use std::path::Path;

use flood_core::datagen::{self, CircleMode, Void};
use flood_core::filtration::{Backend, FloodConfig, Sampler};
use flood_core::metrics::bottleneck_distance;
use flood_core::oracles::cech_filtration;
use flood_core::persistence::{persistence_diagram, PersistenceDiagram, ReductionOptions};
use flood_core::pipeline::{flood_persistence_with, FloodRun, LandmarkSpec, StageTimings};
use flood_core::PointCloud;

use crate::args::*;
use crate::io::{self, CloudFormat};
use crate::CliError;

pub fn generate(shape: Shape, p: &ShapeParams) -> Result<(PointCloud, Option<Vec<Void>>), CliError> {
    Ok(match shape {
        Shape::Circle => {
            let mode = match p.mode {
                AngleMode::Uniform => CircleMode::UniformAngle,
                AngleMode::Random => CircleMode::Random,
            };
            (datagen::gen_circle(p.n, mode, p.seed)?, None)
        }
        Shape::Swisscheese => {
            let (x, v) = datagen::gen_swisscheese(p.n, p.holes, p.side, (p.rmin, p.rmax), p.seed)?;
            (x, Some(v))
        }
        Shape::Torus => (datagen::gen_torus(p.n, p.major, p.minor, p.seed)?, None),
        Shape::Cube => (datagen::gen_uniform_cube(p.n, p.dim, p.seed)?, None),
    })
}

/// Path of the swiss-cheese void sidecar next to `out`.
pub fn voids_path(out: &Path) -> std::path::PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".voids.json");
    s.into()
}

/// Writes the cloud (and void sidecar) and returns the summary line.
pub fn cmd_gen(args: &GenArgs) -> Result<String, CliError> {
    let (x, voids) = generate(args.shape, &args.params)?;
    let format = match args.format {
        FormatArg::Auto => CloudFormat::from_path(&args.out),
        FormatArg::Binary => CloudFormat::Binary,
        FormatArg::Text => CloudFormat::Text,
    };
    io::write_cloud(&args.out, &x, format)?;
    if let Some(v) = voids {
        let text = serde_json::to_string_pretty(&io::voids_to_json(&v)).expect("voids serialize");
        io::write_bytes(&voids_path(&args.out), text.as_bytes())?;
    }
    Ok(format!(
        "n={} d={} checksum={:016x}",
        x.len(),
        x.dim(),
        datagen::checksum(&x)
    ))
}

pub fn flood_config(p: &FloodParams) -> FloodConfig {
    FloodConfig {
        grid_resolution: p.grid,
        batch_size: p.batch,
        sampler: match p.sampler {
            SamplerArg::Grid => Sampler::Grid,
            SamplerArg::Random => Sampler::UniformRandom {
                count: p.samples,
                seed: p.sample_seed,
            },
        },
        backend: match p.backend {
            BackendArg::Masked => Backend::MaskedBatch,
            BackendArg::Kdtree => Backend::KdTree,
        },
        strict: p.strict,
        sort_axis: p.sort_axis,
        delaunay_seed: p.delaunay_seed,
    }
}

pub fn landmark_spec(p: &FloodParams) -> Result<LandmarkSpec, CliError> {
    Ok(match &p.landmark_file {
        Some(path) => LandmarkSpec::External(io::read_cloud(path)?),
        None => LandmarkSpec::Fps {
            count: p.landmarks,
            start: p.fps_start,
        },
    })
}

pub fn run_flood(x: &PointCloud, p: &FloodParams, include_zero: bool) -> Result<FloodRun, CliError> {
    let spec = landmark_spec(p)?;
    let opts = ReductionOptions {
        include_zero_persistence: include_zero,
        ..ReductionOptions::default()
    };
    Ok(flood_persistence_with(x, &spec, &flood_config(p), opts)?)
}

pub fn breakdown_log(t: &StageTimings) -> String {
    let mut s = String::new();
    for (name, secs, pct) in t.rows() {
        let _ = writeln!(s, "{name:<18} {secs:>10.4} s {pct:>6.2} %");
    }
    let _ = write!(s, "{:<18} {:>10.4} s", "Total", t.total());
    s
}

/// Returns the diagram JSON when no output path is given.
pub fn cmd_flood(args: &FloodArgs, log: &mut dyn FnMut(&str)) -> Result<Option<String>, CliError> {
    let x = io::read_cloud(&args.input)?;
    let run = run_flood(&x, &args.params, args.include_zero)?;
    log(&format!(
        "landmarks={} simplices={} grid_bound={:.6e}",
        run.triangulation.vertices().len(),
        run.complex.len(),
        run.grid_bound
    ));
    log(&breakdown_log(&run.timings));
    emit_diagram(&run.diagram, args.out.as_deref())
}

fn emit_diagram(d: &PersistenceDiagram, out: Option<&Path>) -> Result<Option<String>, CliError> {
    match out {
        Some(path) => {
            io::write_diagram(path, d)?;
            Ok(None)
        }
        None => Ok(Some(serde_json::to_string_pretty(&io::diagram_to_json(d)).expect("diagram serializes"))),
    }
}

pub fn cmd_cech(args: &CechArgs) -> Result<Option<String>, CliError> {
    let x = io::read_cloud(&args.input)?;
    let fc = cech_filtration(&x, args.max_dim)?;
    let d = persistence_diagram(&fc)?;
    emit_diagram(&d, args.out.as_deref())
}

pub fn cmd_bottleneck(args: &BottleneckArgs) -> Result<f64, CliError> {
    let a = io::read_diagram(&args.a)?;
    let b = io::read_diagram(&args.b)?;
    Ok(bottleneck_distance(&a, &b, args.dim))
}

/// Mean stage timings over `repeats` runs on a freshly generated cloud.
pub fn bench(shape: Shape, points: usize, seed: u64, params: &FloodParams, repeats: usize) -> Result<StageTimings, CliError> {
    if repeats == 0 {
        return Err(CliError::Usage("--repeats must be at least 1".into()));
    }
    let shape_params = ShapeParams {
        n: points,
        seed,
        mode: AngleMode::Uniform,
        holes: 10,
        side: 5.0,
        rmin: 0.1,
        rmax: 0.5,
        major: 2.0,
        minor: 0.5,
        dim: 3,
    };
    let (x, _) = generate(shape, &shape_params)?;
    let mut sum = StageTimings::default();
    for _ in 0..repeats {
        sum.add(&run_flood(&x, params, false)?.timings);
    }
    let r = repeats as f64;
    Ok(StageTimings {
        landmarks: sum.landmarks / r,
        delaunay: sum.delaunay / r,
        masking: sum.masking / r,
        filtration: sum.filtration / r,
        persistence: sum.persistence / r,
        other: sum.other / r,
    })
}

pub fn bench_csv(t: &StageTimings) -> String {
    let mut s = String::from("stage,seconds,percent\n");
    for (name, secs, pct) in t.rows() {
        let _ = writeln!(s, "{name},{secs:.6},{pct:.3}");
    }
    s
}

pub fn cmd_bench(args: &BenchArgs) -> Result<Option<String>, CliError> {
    let t = bench(args.shape, args.points, args.seed, &args.params, args.repeats)?;
    let csv = bench_csv(&t);
    match &args.out {
        Some(path) => {
            io::write_bytes(path, csv.as_bytes())?;
            Ok(None)
        }
        None => Ok(Some(csv)),
    }
}

/// Runs a parsed command, writing results to stdout and logs to stderr.
pub fn dispatch(cli: &Cli) -> Result<(), CliError> {
    let mut log = |s: &str| eprintln!("{s}");
    let printed = match &cli.command {
        Command::Gen(a) => Some(cmd_gen(a)?),
        Command::Flood(a) => cmd_flood(a, &mut log)?,
        Command::Cech(a) => cmd_cech(a)?,
        Command::Bottleneck(a) => Some(cmd_bottleneck(a)?.to_string()),
        Command::Bench(a) => cmd_bench(a)?,
    };
    if let Some(s) = printed {
        println!("{}", s.trim_end());
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(|| dispatch(cli)),
        None => dispatch(cli),
    }
}
