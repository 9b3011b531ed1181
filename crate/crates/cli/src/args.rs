use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "flood", version, about = "Persistent homology of point clouds via the Flood complex")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "FLOOD_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a synthetic point cloud.
    Gen(GenArgs),
    /// Flood persistence diagram of a point cloud.
    Flood(FloodArgs),
    /// Čech persistence diagram of a small point cloud.
    Cech(CechArgs),
    /// Bottleneck distance between two diagram files.
    Bottleneck(BottleneckArgs),
    /// Per-stage runtime breakdown on a generated cloud, as CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Shape {
    Circle,
    Swisscheese,
    Torus,
    Cube,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AngleMode {
    Uniform,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Masked,
    Kdtree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SamplerArg {
    Grid,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    /// Pick from the file extension.
    Auto,
    Binary,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct ShapeParams {
    /// Number of points.
    #[arg(long, short = 'n', default_value_t = 4096)]
    pub n: usize,
    #[arg(long, default_value_t = 0, env = "FLOOD_SEED")]
    pub seed: u64,
    /// Angle placement for circles.
    #[arg(long, value_enum, default_value_t = AngleMode::Uniform)]
    pub mode: AngleMode,
    /// Number of voids for the swiss cheese.
    #[arg(long, default_value_t = 10)]
    pub holes: usize,
    /// Side length of the swiss-cheese box.
    #[arg(long = "box", default_value_t = 5.0)]
    pub side: f64,
    #[arg(long, default_value_t = 0.1)]
    pub rmin: f64,
    #[arg(long, default_value_t = 0.5)]
    pub rmax: f64,
    /// Torus radii.
    #[arg(long, default_value_t = 2.0)]
    pub major: f64,
    #[arg(long, default_value_t = 0.5)]
    pub minor: f64,
    /// Ambient dimension of the cube sample.
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub shape: Shape,
    #[command(flatten)]
    pub params: ShapeParams,
    #[arg(long, short)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    pub format: FormatArg,
}

#[derive(Args, Debug, Clone)]
pub struct FloodParams {
    /// Number of FPS landmarks.
    #[arg(long = "landmarks", short = 'k', default_value_t = 2000, env = "FLOOD_LANDMARKS")]
    pub landmarks: usize,
    /// Use this point cloud as landmarks instead of FPS.
    #[arg(long)]
    pub landmark_file: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub fps_start: usize,
    /// Grid resolution m (grid points per edge minus one).
    #[arg(long = "grid", short = 'm', default_value_t = 20, env = "FLOOD_GRID")]
    pub grid: usize,
    #[arg(long = "batch", default_value_t = 256, env = "FLOOD_BATCH")]
    pub batch: usize,
    #[arg(long, value_enum, default_value_t = BackendArg::Masked, env = "FLOOD_BACKEND")]
    pub backend: BackendArg,
    /// Disable early exit in the distance search.
    #[arg(long)]
    pub strict: bool,
    #[arg(long, value_enum, default_value_t = SamplerArg::Grid)]
    pub sampler: SamplerArg,
    /// Random points per simplex for `--sampler random`.
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub sample_seed: u64,
    /// Presort axis for masking (default: widest).
    #[arg(long)]
    pub sort_axis: Option<usize>,
    /// Seed for the Delaunay insertion order and jitter.
    #[arg(long, default_value_t = flood_core::delaunay::DEFAULT_SEED)]
    pub delaunay_seed: u64,
}

#[derive(Args, Debug)]
pub struct FloodArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[command(flatten)]
    pub params: FloodParams,
    /// Keep bars with zero persistence.
    #[arg(long)]
    pub include_zero: bool,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CechArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub max_dim: usize,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BottleneckArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub dim: usize,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = Shape::Swisscheese)]
    pub shape: Shape,
    #[arg(long = "points", default_value_t = 100_000)]
    pub points: usize,
    #[command(flatten)]
    pub params: FloodParams,
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}
