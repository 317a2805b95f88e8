use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::refine::RefineSolver;

#[derive(Debug, Parser)]
#[command(
    name = "ecir",
    version,
    about = "Continuous polynomial intensity reconstruction from a blurry frame and events"
)]
pub struct Cli {
    /// Worker threads for per-pixel work (0 = all cores).
    #[arg(long, global = true, env = "ECIR_THREADS")]
    pub threads: Option<usize>,

    /// TOML manifest supplying paths and configuration defaults.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize events and a blurry frame from a sharp video directory.
    Simulate(SimulateArgs),
    /// Fit per-pixel polynomials to a sharp video using event keypoints.
    Fit(FitArgs),
    /// Render latent frames from a polynomial field.
    Render(RenderArgs),
    /// Double-integral baseline reconstruction.
    Edi(EdiArgs),
    /// Residual-flow refinement of a frame sequence.
    Refine(RefineArgs),
    /// MSE / PSNR / SSIM of predicted frames against ground truth.
    Eval(EvalArgs),
    /// Bin events into a signed temporal histogram.
    Voxelize(VoxelizeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    F32,
    Pgm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Tridiag,
    Gd,
}

impl From<SolverArg> for RefineSolver {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Tridiag => RefineSolver::Tridiagonal,
            SolverArg::Gd => RefineSolver::GradientDescent,
        }
    }
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Directory of sharp frames spanning the exposure.
    #[arg(long)]
    pub video: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub c_plus: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c_minus: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Exposure length in milliseconds, centred on t = 0 [default: 120].
    #[arg(long)]
    pub exposure_ms: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub blurry: Option<PathBuf>,
    #[arg(long)]
    pub events: Option<PathBuf>,
    /// Sharp frames used as least-squares targets.
    #[arg(long)]
    pub gt_video: Option<PathBuf>,
    /// Keypoints per pixel [default: 10].
    #[arg(long)]
    pub n: Option<usize>,
    /// Output polynomial-field file.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long)]
    pub polys: PathBuf,
    /// Comma-separated timestamps in seconds.
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        conflicts_with = "count"
    )]
    pub timestamps: Option<Vec<f64>>,
    /// Number of evenly spaced frames over the exposure [default: 14].
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "f32")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct EdiArgs {
    #[arg(long)]
    pub blurry: Option<PathBuf>,
    #[arg(long)]
    pub events: Option<PathBuf>,
    /// Contrast threshold [default: 0.2].
    #[arg(long)]
    pub c: Option<f64>,
    /// Number of evenly spaced frames [default: 14].
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "f32")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct RefineArgs {
    /// Directory of initial frames (evenly spaced unless it has timestamps.txt).
    #[arg(long)]
    pub frames: PathBuf,
    #[arg(long)]
    pub events: Option<PathBuf>,
    /// Anchor weight [default: 1].
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Gradient-descent iterations [default: 50].
    #[arg(long)]
    pub imax: Option<usize>,
    /// [default: tridiag]
    #[arg(long, value_enum)]
    pub solver: Option<SolverArg>,
    /// Threshold for the event-derived residuals [default: 0.2].
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "f32")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub pred: PathBuf,
    #[arg(long)]
    pub gt: Option<PathBuf>,
    /// Key=value report path; a CSV is written next to it.
    #[arg(long)]
    pub report: PathBuf,
}

#[derive(Debug, Args)]
pub struct VoxelizeArgs {
    #[arg(long)]
    pub events: Option<PathBuf>,
    /// Temporal bins [default: 40].
    #[arg(long)]
    pub bins: Option<usize>,
    /// Output `.f32` file with one plane per bin.
    #[arg(long)]
    pub out: PathBuf,
}
