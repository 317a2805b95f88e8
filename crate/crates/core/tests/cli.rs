mod common;

use common::{exposure, poly_video, random_poly_scene};
use ecir::cli::parse_key_value;
use ecir::io::{read_events, read_frame, read_planes, write_video, FrameFormat};
use ecir::repr::Frame;
use ecir::sim::SharpVideo;
use std::path::Path;
use std::process::{Command, Output};

fn ecir(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecir"))
        .args(args)
        .env_remove("ECIR_THREADS")
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = ecir(args);
    assert!(
        out.status.success(),
        "ecir {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// A 12x9 polynomial scene: 116-frame video, plus 14 ground-truth frames
/// at the uniform render timestamps.
fn poly_fixture(root: &Path) {
    let iv = exposure();
    let polys = random_poly_scene(12, 9, 10, iv, 404);
    write_video(
        &root.join("video"),
        &poly_video(&polys, 12, 9, 116, iv),
        FrameFormat::F32,
    )
    .unwrap();
    write_video(
        &root.join("gt"),
        &poly_video(&polys, 12, 9, 14, iv),
        FrameFormat::F32,
    )
    .unwrap();
}

fn pipeline(root: &Path, threads: &str) {
    let r = |name: &str| root.join(name);
    ok(&[
        "--threads",
        threads,
        "simulate",
        "--video",
        p(&r("video")),
        "--out",
        p(&r("sim")),
        "--c-plus",
        "0.05",
        "--c-minus",
        "-0.05",
    ]);
    ok(&[
        "--threads",
        threads,
        "fit",
        "--blurry",
        p(&r("sim/blurry.f32")),
        "--events",
        p(&r("sim/events.txt")),
        "--gt-video",
        p(&r("video")),
        "--out",
        p(&r("field.polys")),
    ]);
    ok(&[
        "--threads",
        threads,
        "render",
        "--polys",
        p(&r("field.polys")),
        "--count",
        "14",
        "--out",
        p(&r("render")),
    ]);
    ok(&[
        "--threads",
        threads,
        "eval",
        "--pred",
        p(&r("render")),
        "--gt",
        p(&r("gt")),
        "--report",
        p(&r("report.txt")),
    ]);
}

#[test]
fn polynomial_scene_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    poly_fixture(root);
    pipeline(root, "2");
    let report = std::fs::read_to_string(root.join("report.txt")).unwrap();
    let kv = parse_key_value(&report);
    let psnr: f64 = kv["mean_psnr"].parse().unwrap();
    assert!(psnr > 50.0, "{report}");
    assert_eq!(kv["frames"], "14");
    assert!(root.join("report.csv").exists());

    // Byte-stable: rerun eval and compare.
    let again = root.join("again.txt");
    ok(&[
        "eval",
        "--pred",
        p(&root.join("render")),
        "--gt",
        p(&root.join("gt")),
        "--report",
        p(&again),
    ]);
    assert_eq!(
        std::fs::read(root.join("report.txt")).unwrap(),
        std::fs::read(&again).unwrap()
    );
}

#[test]
fn thread_count_does_not_change_outputs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    poly_fixture(a.path());
    poly_fixture(b.path());
    pipeline(a.path(), "1");
    pipeline(b.path(), "4");
    for f in [
        "sim/events.txt",
        "sim/blurry.f32",
        "field.polys",
        "render/frame_0007.f32",
        "report.txt",
    ] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
    // The environment variable is an alternative to --threads.
    let out = Command::new(env!("CARGO_BIN_EXE_ecir"))
        .args([
            "voxelize",
            "--events",
            p(&a.path().join("sim/events.txt")),
            "--out",
            p(&a.path().join("vox.f32")),
        ])
        .env("ECIR_THREADS", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn constant_video_gives_no_events() {
    let dir = tempfile::tempdir().unwrap();
    let frame = Frame::from_fn(6, 4, |x, y| 0.1 + 0.05 * (x * y) as f64);
    let video = SharpVideo::uniform(vec![frame.clone(); 5], exposure()).unwrap();
    write_video(&dir.path().join("v"), &video, FrameFormat::F32).unwrap();
    ok(&[
        "simulate",
        "--video",
        p(&dir.path().join("v")),
        "--out",
        p(&dir.path().join("o")),
    ]);
    let events = read_events(&dir.path().join("o/events.txt"), None).unwrap();
    assert!(events.is_empty());
    let blurry = read_frame(&dir.path().join("o/blurry.f32")).unwrap();
    let stored = read_frame(&dir.path().join("v/frame_0000.f32")).unwrap();
    assert_eq!(blurry, stored);
}

#[test]
fn malformed_input_reports_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("events.txt");
    std::fs::write(
        &bad,
        "# ecir-events width=4 height=4 t_start=-0.06 t_end=0.06\n0.0 1 1 +1\n0.01 9 1 1\n",
    )
    .unwrap();
    let out = ecir(&[
        "voxelize",
        "--events",
        p(&bad),
        "--out",
        p(&dir.path().join("v.f32")),
    ]);
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1, "{stderr}");
    assert!(stderr.starts_with("ecir: error:"));

    let missing = ecir(&[
        "render",
        "--polys",
        p(&dir.path().join("none.polys")),
        "--out",
        p(dir.path()),
    ]);
    assert!(!missing.status.success());
    assert_eq!(
        String::from_utf8(missing.stderr).unwrap().lines().count(),
        1
    );
}

#[test]
fn refine_solvers_agree() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    poly_fixture(root);
    ok(&[
        "simulate",
        "--video",
        p(&root.join("video")),
        "--out",
        p(&root.join("sim")),
    ]);
    ok(&[
        "edi",
        "--blurry",
        p(&root.join("sim/blurry.f32")),
        "--events",
        p(&root.join("sim/events.txt")),
        "--count",
        "14",
        "--out",
        p(&root.join("edi")),
    ]);
    let mut mses = Vec::new();
    for solver in ["tridiag", "gd"] {
        let out = root.join(format!("ref_{solver}"));
        ok(&[
            "refine",
            "--frames",
            p(&root.join("edi")),
            "--events",
            p(&root.join("sim/events.txt")),
            "--solver",
            solver,
            "--out",
            p(&out),
        ]);
        let report = root.join(format!("{solver}.txt"));
        ok(&[
            "eval",
            "--pred",
            p(&out),
            "--gt",
            p(&root.join("gt")),
            "--report",
            p(&report),
        ]);
        let kv = parse_key_value(&std::fs::read_to_string(&report).unwrap());
        mses.push(kv["mean_mse"].parse::<f64>().unwrap());
    }
    assert!((mses[0] - mses[1]).abs() < 1e-6, "{mses:?}");
}

#[test]
fn flag_beats_manifest_beats_default() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    let iv = exposure();
    let polys = random_poly_scene(5, 5, 6, iv, 9);
    write_video(
        &root.join("video"),
        &poly_video(&polys, 5, 5, 40, iv),
        FrameFormat::F32,
    )
    .unwrap();
    ok(&[
        "simulate",
        "--video",
        p(&root.join("video")),
        "--out",
        p(&root.join("sim")),
        "--c-plus",
        "0.02",
        "--c-minus",
        "-0.02",
    ]);
    let events = root.join("sim/events.txt");
    let with_bins = root.join("with_bins.toml");
    std::fs::write(
        &with_bins,
        "events = \"sim/events.txt\"\n[config]\nbins = 7\n",
    )
    .unwrap();
    let without = root.join("plain.toml");
    std::fs::write(&without, "events = \"sim/events.txt\"\n").unwrap();

    let ev = p(&events);
    let m1 = p(&with_bins);
    let m0 = p(&without);
    // (global args, --bins flag, expected bin count)
    let cases: [(&[&str], Option<&str>, usize); 6] = [
        (&[], None, 40),
        (&[], Some("3"), 3),
        (&["--manifest", m0], None, 40),
        (&["--manifest", m0], Some("3"), 3),
        (&["--manifest", m1], None, 7),
        (&["--manifest", m1], Some("3"), 3),
    ];
    for (i, (global, bins, want)) in cases.iter().enumerate() {
        let out = root.join(format!("vox{i}.f32"));
        let mut args: Vec<&str> = global.to_vec();
        args.extend(["voxelize", "--events", ev, "--out", p(&out)]);
        if let Some(b) = bins {
            args.extend(["--bins", b]);
        }
        ok(&args);
        assert_eq!(read_planes(&out).unwrap().len(), *want, "case {i}");
    }
    // The manifest also supplies the events path.
    let out = root.join("from_manifest.f32");
    ok(&["--manifest", m1, "voxelize", "--out", p(&out)]);
    assert_eq!(read_planes(&out).unwrap().len(), 7);

    // Thresholds follow the same order: a larger c_plus in the manifest
    // means fewer events unless the flag overrides it.
    let cfg = root.join("coarse.toml");
    std::fs::write(&cfg, "[config]\nc_plus = 0.2\nc_minus = -0.2\n").unwrap();
    let count = |args: &[&str], out: &str| {
        let o = root.join(out);
        let mut full: Vec<&str> = args.to_vec();
        full.extend(["--out", p(&o)]);
        ok(&full);
        read_events(&o.join("events.txt"), None).unwrap().len()
    };
    let video_dir = root.join("video");
    let video = p(&video_dir);
    let coarse = count(&["--manifest", p(&cfg), "simulate", "--video", video], "s1");
    let fine = count(
        &[
            "--manifest",
            p(&cfg),
            "simulate",
            "--video",
            video,
            "--c-plus",
            "0.02",
            "--c-minus",
            "-0.02",
        ],
        "s2",
    );
    let default = count(&["simulate", "--video", video], "s3");
    let flagged = count(
        &[
            "simulate",
            "--video",
            video,
            "--c-plus",
            "0.02",
            "--c-minus",
            "-0.02",
        ],
        "s4",
    );
    assert_eq!(coarse, default);
    assert_eq!(fine, flagged);
    assert!(fine > coarse);
}

#[test]
fn voxelize_conserves_signed_counts() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    let iv = exposure();
    let polys = random_poly_scene(7, 6, 8, iv, 12);
    write_video(
        &root.join("video"),
        &poly_video(&polys, 7, 6, 60, iv),
        FrameFormat::F32,
    )
    .unwrap();
    ok(&[
        "simulate",
        "--video",
        p(&root.join("video")),
        "--out",
        p(&root.join("sim")),
        "--c-plus",
        "0.03",
        "--c-minus",
        "-0.03",
    ]);
    ok(&[
        "voxelize",
        "--events",
        p(&root.join("sim/events.txt")),
        "--out",
        p(&root.join("vox.f32")),
    ]);
    let planes = read_planes(&root.join("vox.f32")).unwrap();
    assert_eq!(planes.len(), 40);
    let events = read_events(&root.join("sim/events.txt"), None).unwrap();
    assert!(!events.is_empty());
    let mut want = vec![0.0; 42];
    for e in events.events() {
        want[e.y as usize * 7 + e.x as usize] += f64::from(e.p.sign());
    }
    for (i, w) in want.iter().enumerate() {
        let got: f64 = planes.iter().map(|f| f.values()[i]).sum();
        assert_eq!(got, *w);
    }
}

#[test]
fn render_accepts_explicit_timestamps_and_pgm() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    poly_fixture(root);
    ok(&[
        "simulate",
        "--video",
        p(&root.join("video")),
        "--out",
        p(&root.join("sim")),
    ]);
    ok(&[
        "fit",
        "--blurry",
        p(&root.join("sim/blurry.f32")),
        "--events",
        p(&root.join("sim/events.txt")),
        "--gt-video",
        p(&root.join("video")),
        "--n",
        "6",
        "--out",
        p(&root.join("f.polys")),
    ]);
    ok(&[
        "render",
        "--polys",
        p(&root.join("f.polys")),
        "--timestamps",
        "-0.05,0,0.05",
        "--format",
        "pgm",
        "--out",
        p(&root.join("r")),
    ]);
    for k in 0..3 {
        assert!(root.join(format!("r/frame_{k:04}.pgm")).exists());
    }
}
