//! Command-line front end. [`run`] executes a parsed [`Cli`]; the `ecir`
//! binary only parses arguments and reports errors.

mod args;
mod report;

use std::fs;
use std::path::{Path, PathBuf};

pub use args::{
    Cli, Command, EdiArgs, EvalArgs, FitArgs, OutputFormat, RefineArgs, RenderArgs, SimulateArgs,
    SolverArg, VoxelizeArgs,
};
pub use report::{parse_key_value, EvalReport, FrameScore};

use crate::error::{Error, Result};
use crate::fitting::{edi_reconstruct_frames, fit_polys, DEFAULT_EDI_THRESHOLD};
use crate::io::frames::FrameFormat;
use crate::io::manifest::{resolve, Manifest};
use crate::io::video::{read_timestamps, write_timestamps};
use crate::io::{
    read_events, read_frame, read_frame_dir, read_polys, read_video, write_events, write_frame,
    write_frame_dir, write_planes, write_polys, StreamGeometry,
};
use crate::refine::{
    refine, surrogate_residuals, RefineProblem, RefineSolver, DEFAULT_LAMBDA,
    DEFAULT_MAX_ITERATIONS,
};
use crate::repr::{select_keypoints_per_pixel, BlurryFrame, EventStream, ExposureInterval, Frame};
use crate::sim::{simulate_events, synthesize_blur, voxelize, ThresholdConfig, DEFAULT_BINS};

pub const DEFAULT_EXPOSURE_MS: f64 = 120.0;
pub const DEFAULT_KEYPOINTS: usize = 10;
pub const DEFAULT_FRAME_COUNT: usize = 14;

pub const EVENTS_FILE: &str = "events.txt";
pub const BLURRY_FILE: &str = "blurry.f32";
pub const BLURRY_PREVIEW_FILE: &str = "blurry.pgm";

/// Runs one command inside a thread pool sized by `--threads`.
pub fn run(cli: Cli) -> Result<String> {
    let manifest = cli.manifest.as_deref().map(Manifest::load).transpose()?;
    let manifest = manifest.unwrap_or_default();
    let threads = resolve(cli.threads, manifest.config.threads, 0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::invalid_argument(format!("cannot start {threads} threads: {e}")))?;
    pool.install(|| match &cli.command {
        Command::Simulate(a) => simulate(a, &manifest),
        Command::Fit(a) => fit(a, &manifest),
        Command::Render(a) => render(a),
        Command::Edi(a) => edi(a, &manifest),
        Command::Refine(a) => refine_cmd(a, &manifest),
        Command::Eval(a) => eval(a, &manifest),
        Command::Voxelize(a) => voxelize_cmd(a, &manifest),
    })
}

fn required(flag: &Option<PathBuf>, manifest: &Option<PathBuf>, name: &str) -> Result<PathBuf> {
    flag.clone()
        .or_else(|| manifest.clone())
        .ok_or_else(|| Error::invalid_argument(format!("--{name} is required (flag or manifest)")))
}

fn format_of(f: OutputFormat) -> FrameFormat {
    match f {
        OutputFormat::F32 => FrameFormat::F32,
        OutputFormat::Pgm => FrameFormat::Pgm,
    }
}

/// Reads events, taking geometry from the file header or, failing that,
/// from the manifest interval and the given sensor size.
fn load_events(
    path: &Path,
    manifest: &Manifest,
    dims: Option<(usize, usize)>,
) -> Result<EventStream> {
    match read_events(path, None) {
        Err(Error::Format { .. }) => {
            let interval = manifest.interval()?.ok_or_else(|| Error::Format {
                path: path.to_path_buf(),
                message: "no geometry header and no manifest interval".into(),
            })?;
            let (width, height) = dims.ok_or_else(|| Error::Format {
                path: path.to_path_buf(),
                message: "no geometry header and no sensor size".into(),
            })?;
            read_events(
                path,
                Some(StreamGeometry {
                    width,
                    height,
                    interval,
                }),
            )
        }
        other => other,
    }
}

fn load_blurry_and_events(
    blurry: &Option<PathBuf>,
    events: &Option<PathBuf>,
    manifest: &Manifest,
) -> Result<(BlurryFrame, EventStream)> {
    let frame = read_frame(&required(blurry, &manifest.blurry, "blurry")?)?;
    let stream = load_events(
        &required(events, &manifest.events, "events")?,
        manifest,
        Some((frame.width(), frame.height())),
    )?;
    if stream.width() != frame.width() || stream.height() != frame.height() {
        return Err(Error::shape(
            format!("{}x{} events", frame.width(), frame.height()),
            format!("{}x{}", stream.width(), stream.height()),
        ));
    }
    Ok((BlurryFrame::new(frame, stream.interval()), stream))
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn simulate(a: &SimulateArgs, m: &Manifest) -> Result<String> {
    let video_dir = required(&a.video, &m.gt_video, "video")?;
    let interval = match (a.exposure_ms, m.interval()?) {
        (Some(ms), _) => ExposureInterval::centered(ms / 1000.0)?,
        (None, Some(iv)) => iv,
        (None, None) => ExposureInterval::centered(
            resolve(None, m.config.exposure_ms, DEFAULT_EXPOSURE_MS) / 1000.0,
        )?,
    };
    let defaults = ThresholdConfig::default();
    let cfg = ThresholdConfig {
        c_plus: resolve(a.c_plus, m.config.c_plus, defaults.c_plus),
        c_minus: resolve(a.c_minus, m.config.c_minus, defaults.c_minus),
        sigma: resolve(a.sigma, m.config.sigma, defaults.sigma),
        seed: resolve(a.seed, m.config.seed, defaults.seed),
    };
    let video = read_video(&video_dir, interval)?;
    let events = simulate_events(&video, &cfg)?;
    let blurry = synthesize_blur(&video);

    create_dir(&a.out)?;
    write_events(&a.out.join(EVENTS_FILE), &events)?;
    write_frame(&a.out.join(BLURRY_FILE), &blurry.frame)?;
    write_frame(&a.out.join(BLURRY_PREVIEW_FILE), &blurry.frame)?;
    Ok(format!(
        "simulated {} events from {} frames ({}x{}) over [{}, {}] s",
        events.len(),
        video.len(),
        video.width(),
        video.height(),
        interval.start(),
        interval.end()
    ))
}

fn fit(a: &FitArgs, m: &Manifest) -> Result<String> {
    let (blurry, events) = load_blurry_and_events(&a.blurry, &a.events, m)?;
    let n = resolve(a.n, m.config.n, DEFAULT_KEYPOINTS);
    let video = read_video(
        &required(&a.gt_video, &m.gt_video, "gt-video")?,
        blurry.interval,
    )?;
    if video.width() != blurry.width() || video.height() != blurry.height() {
        return Err(Error::shape(
            format!("{}x{} video", blurry.width(), blurry.height()),
            format!("{}x{}", video.width(), video.height()),
        ));
    }
    let keypoints = select_keypoints_per_pixel(&events, n)?;
    let result = fit_polys(&video, &keypoints, &blurry)?;
    write_polys(&a.out, &result.field)?;
    let worst = result.rms_residual.iter().copied().fold(0.0, f64::max);
    Ok(format!(
        "fitted {} pixels with n={n}; {} needed ridge regularization; worst RMS residual {worst:.3e}",
        result.field.polys().len(),
        result.regularized_count()
    ))
}

fn write_sequence(
    dir: &Path,
    frames: &[Frame],
    timestamps: &[f64],
    format: OutputFormat,
) -> Result<()> {
    let clamped: Vec<Frame> = frames.iter().map(Frame::clamped).collect();
    write_frame_dir(dir, &clamped, format_of(format))?;
    write_timestamps(dir, timestamps)
}

fn render(a: &RenderArgs) -> Result<String> {
    let field = read_polys(&a.polys)?;
    let timestamps = match &a.timestamps {
        Some(ts) => ts.clone(),
        None => field
            .interval()
            .uniform_timestamps(a.count.unwrap_or(DEFAULT_FRAME_COUNT)),
    };
    if timestamps.is_empty() {
        return Err(Error::invalid_argument("no timestamps to render"));
    }
    let frames = field.render_frames(&timestamps)?;
    write_sequence(&a.out, &frames, &timestamps, a.format)?;
    Ok(format!("rendered {} frames", frames.len()))
}

fn edi(a: &EdiArgs, m: &Manifest) -> Result<String> {
    let (blurry, events) = load_blurry_and_events(&a.blurry, &a.events, m)?;
    let c = resolve(a.c, m.config.c, DEFAULT_EDI_THRESHOLD);
    let count = resolve(a.count, m.config.count, DEFAULT_FRAME_COUNT);
    let timestamps = blurry.interval.uniform_timestamps(count);
    let frames = edi_reconstruct_frames(&blurry, &events, c, &timestamps)?;
    write_sequence(&a.out, &frames, &timestamps, a.format)?;
    Ok(format!(
        "reconstructed {} EDI frames with c={c}",
        frames.len()
    ))
}

fn parse_solver(name: &str) -> Result<RefineSolver> {
    match name {
        "tridiag" => Ok(RefineSolver::Tridiagonal),
        "gd" => Ok(RefineSolver::GradientDescent),
        other => Err(Error::invalid_argument(format!(
            "unknown solver `{other}` (expected tridiag or gd)"
        ))),
    }
}

fn refine_cmd(a: &RefineArgs, m: &Manifest) -> Result<String> {
    let initial = read_frame_dir(&a.frames)?;
    let dims = initial.first().map(|f| (f.width(), f.height()));
    let events = load_events(&required(&a.events, &m.events, "events")?, m, dims)?;
    let timestamps = match read_timestamps(&a.frames)? {
        Some(ts) => ts,
        None => events.interval().uniform_timestamps(initial.len()),
    };
    let lambda = resolve(a.lambda, m.config.lambda, DEFAULT_LAMBDA);
    let imax = resolve(a.imax, m.config.imax, DEFAULT_MAX_ITERATIONS);
    let c = resolve(a.c, m.config.c, DEFAULT_EDI_THRESHOLD);
    let solver = match (a.solver, &m.config.solver) {
        (Some(s), _) => s.into(),
        (None, Some(name)) => parse_solver(name)?,
        (None, None) => RefineSolver::default(),
    };
    let residuals = surrogate_residuals(&initial, &events, c, &timestamps)?;
    let problem = RefineProblem::new(initial, residuals, lambda)?.with_max_iterations(imax);
    let frames = refine(&problem, solver)?;
    write_sequence(&a.out, &frames, &timestamps, a.format)?;
    Ok(format!(
        "refined {} frames with {solver:?}, lambda={lambda}",
        frames.len()
    ))
}

fn eval(a: &EvalArgs, m: &Manifest) -> Result<String> {
    let pred = read_frame_dir(&a.pred)?;
    let gt = read_frame_dir(&required(&a.gt, &m.gt_video, "gt")?)?;
    let report = EvalReport::compute(&pred, &gt)?;
    if let Some(parent) = a.report.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(parent)?;
    }
    fs::write(&a.report, report.to_key_value()).map_err(|e| Error::io(&a.report, e))?;
    let csv = a.report.with_extension("csv");
    fs::write(&csv, report.to_csv()).map_err(|e| Error::io(&csv, e))?;
    Ok(format!(
        "mean MSE {:.6e}, PSNR {:.3} dB over {} frames",
        report.mean_mse(),
        report.mean_psnr(),
        report.frames.len()
    ))
}

fn voxelize_cmd(a: &VoxelizeArgs, m: &Manifest) -> Result<String> {
    let events = load_events(&required(&a.events, &m.events, "events")?, m, None)?;
    let bins = resolve(a.bins, m.config.bins, DEFAULT_BINS);
    let hist = voxelize(&events, bins)?;
    write_planes(&a.out, &hist.planes())?;
    Ok(format!("binned {} events into {bins} bins", events.len()))
}
