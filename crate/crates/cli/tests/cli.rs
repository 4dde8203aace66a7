//! End-to-end tests of the `splatkit` binary: every subcommand, the full
//! rig -> render -> augment -> metrics pipeline, and the exit-code contract
//! (1 usage, 2 format, 3 integrity, 4 io).

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn splatkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_splatkit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn assert_code(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        stdout(out),
        stderr(out)
    );
}

/// Writes a small degree-1 splat scene in the trained-splat PLY layout.
fn write_synthetic_ply(path: &Path, count: usize, seed: u64) {
    let mut header = String::from("ply\nformat binary_little_endian 1.0\n");
    header.push_str(&format!("element vertex {count}\n"));
    let mut props: Vec<String> = ["x", "y", "z", "f_dc_0", "f_dc_1", "f_dc_2"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for i in 0..9 {
        props.push(format!("f_rest_{i}"));
    }
    props.extend(
        [
            "opacity", "scale_0", "scale_1", "scale_2", "rot_0", "rot_1", "rot_2", "rot_3",
        ]
        .iter()
        .map(|s| s.to_string()),
    );
    for p in &props {
        header.push_str(&format!("property float {p}\n"));
    }
    header.push_str("end_header\n");

    let mut bytes = header.into_bytes();
    let mut state = seed;
    let mut next = || {
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        (z ^ (z >> 31)) as f64 / u64::MAX as f64
    };
    for _ in 0..count {
        let mut row: Vec<f32> = Vec::with_capacity(props.len());
        for _ in 0..3 {
            row.push((next() * 1.6 - 0.8) as f32); // position
        }
        for _ in 0..3 {
            row.push((next() * 2.0 - 1.0) as f32); // f_dc
        }
        for _ in 0..9 {
            row.push((next() * 0.2 - 0.1) as f32); // f_rest
        }
        row.push((next() * 4.0 - 1.0) as f32); // opacity logit
        for _ in 0..3 {
            row.push((next() * 2.0 - 4.0) as f32); // log scale, small splats
        }
        row.push((next() + 0.2) as f32); // rot, normalized at load
        for _ in 0..3 {
            row.push((next() - 0.5) as f32);
        }
        for v in row {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
    }
    fs::write(path, bytes).unwrap();
}

fn write_rig_spec(path: &Path) {
    fs::write(
        path,
        "center = 0,0,0\nradius = 2.5\nring = 10,4\nring = 35,4\nwidth = 64\nheight = 48\nfx = 60\nprefix = novel\n",
    )
    .unwrap();
}

#[test]
fn usaf_prints_chart_resolution() {
    let out = splatkit(&["usaf", "--group", "-1", "--element", "4"]);
    assert_code(&out, 0);
    assert_eq!(stdout(&out).trim(), "0.7071");

    let out = splatkit(&["usaf", "--group", "-1", "--element", "2"]);
    assert_eq!(stdout(&out).trim(), "0.5612");

    let out = splatkit(&["usaf", "--group", "-2", "--element", "6"]);
    assert_eq!(stdout(&out).trim(), "0.4454");
}

#[test]
fn usage_errors_exit_one() {
    assert_code(&splatkit(&["usaf", "--group", "0", "--element", "7"]), 1);
    assert_code(&splatkit(&["no-such-command"]), 1);
    assert_code(&splatkit(&["render", "--bogus-flag"]), 1);
    assert_code(&splatkit(&["--help"]), 0);
}

#[test]
fn format_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cameras.txt"), "1 RADIAL 10 10 5 5 5 0.1\n").unwrap();
    fs::write(dir.path().join("images.txt"), "").unwrap();
    let out = splatkit(&[
        "offset-rig",
        "--model",
        dir.path().to_str().unwrap(),
        "--offset",
        "1.0",
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_code(&out, 2);
    assert!(stderr(&out).contains("RADIAL"));
}

#[test]
fn integrity_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("cameras.txt"),
        "1 PINHOLE 64 48 60 60 32 24\n",
    )
    .unwrap();
    // Record references camera 9, which does not exist.
    fs::write(dir.path().join("images.txt"), "1 1 0 0 0 0 0 0 9 a.png\n\n").unwrap();
    let out = splatkit(&[
        "offset-rig",
        "--model",
        dir.path().to_str().unwrap(),
        "--offset",
        "1.0",
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_code(&out, 3);
}

#[test]
fn io_errors_exit_four() {
    let out = splatkit(&[
        "rig",
        "--spec",
        "/nonexistent/rig.txt",
        "--out",
        "/tmp/unused-rig-out",
    ]);
    assert_code(&out, 4);
}

#[test]
fn rig_render_augment_metrics_pipeline() {
    let work = tempfile::tempdir().unwrap();
    let work = work.path();

    // Rig poses.
    let spec = work.join("rig.txt");
    write_rig_spec(&spec);
    let rig_dir = work.join("rig_model");
    let out = splatkit(&[
        "rig",
        "--spec",
        spec.to_str().unwrap(),
        "--out",
        rig_dir.to_str().unwrap(),
    ]);
    assert_code(&out, 0);
    assert!(rig_dir.join("cameras.txt").is_file());
    assert!(rig_dir.join("images.txt").is_file());

    // Rig output is idempotent byte-for-byte.
    let first = fs::read(rig_dir.join("images.txt")).unwrap();
    assert_code(
        &splatkit(&[
            "rig",
            "--spec",
            spec.to_str().unwrap(),
            "--out",
            rig_dir.to_str().unwrap(),
        ]),
        0,
    );
    assert_eq!(fs::read(rig_dir.join("images.txt")).unwrap(), first);

    // Render the rig from a synthetic scene.
    let ply = work.join("scene.ply");
    write_synthetic_ply(&ply, 120, 7);
    let render_dir = work.join("novel");
    let out = splatkit(&[
        "render",
        "--splat",
        ply.to_str().unwrap(),
        "--model",
        rig_dir.to_str().unwrap(),
        "--out",
        render_dir.to_str().unwrap(),
        "--background",
        "0.1,0.1,0.1",
    ]);
    assert_code(&out, 0);
    let rendered: Vec<_> = fs::read_dir(&render_dir).unwrap().collect();
    assert_eq!(rendered.len(), 8);

    // Novel model directory: model files + images side by side.
    fs::copy(rig_dir.join("cameras.txt"), render_dir.join("cameras.txt")).unwrap();
    fs::copy(rig_dir.join("images.txt"), render_dir.join("images.txt")).unwrap();

    // Ground model: reuse the same renders under different names.
    let ground_dir = work.join("ground");
    fs::create_dir(&ground_dir).unwrap();
    fs::write(
        ground_dir.join("cameras.txt"),
        "1 PINHOLE 64 48 60 60 32 24\n",
    )
    .unwrap();
    let mut images_txt = String::new();
    for i in 0..3 {
        let name = format!("ground_{i}.png");
        fs::copy(
            render_dir.join(format!("novel_0_{i:04}.png")),
            ground_dir.join(&name),
        )
        .unwrap();
        images_txt.push_str(&format!("{} 1 0 0 0 0 0 {} 1 {name}\n\n", i + 1, i + 3));
    }
    fs::write(ground_dir.join("images.txt"), images_txt).unwrap();

    // Augment.
    let merged_dir = work.join("augmented");
    let out = splatkit(&[
        "augment",
        "--ground",
        ground_dir.to_str().unwrap(),
        "--novel",
        render_dir.to_str().unwrap(),
        "--out",
        merged_dir.to_str().unwrap(),
    ]);
    assert_code(&out, 0);
    assert!(stdout(&out).contains("3 ground + 8 novel = 11 images"));
    assert_eq!(fs::read_dir(merged_dir.join("images")).unwrap().count(), 11);

    // Metrics of the rendered directory against itself.
    let csv = work.join("report.csv");
    let out = splatkit(&[
        "metrics",
        "--ref",
        render_dir.to_str().unwrap(),
        "--test",
        render_dir.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_code(&out, 0);
    let text = stdout(&out);
    assert!(text.contains("mean"), "{text}");
    assert!(text.contains("inf"), "{text}");
    let csv_text = fs::read_to_string(&csv).unwrap();
    assert!(csv_text.starts_with("name,ssim,psnr_db,lpips\n"));
    assert!(csv_text.contains("mean,1.000000,inf,\n"));
}

#[test]
fn offset_rig_quadruples_poses() {
    let work = tempfile::tempdir().unwrap();
    let work = work.path();
    let spec = work.join("rig.txt");
    write_rig_spec(&spec);
    let rig_dir = work.join("model");
    assert_code(
        &splatkit(&[
            "rig",
            "--spec",
            spec.to_str().unwrap(),
            "--out",
            rig_dir.to_str().unwrap(),
        ]),
        0,
    );
    let out_dir = work.join("offset");
    let out = splatkit(&[
        "offset-rig",
        "--model",
        rig_dir.to_str().unwrap(),
        "--offset",
        "0.5",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_code(&out, 0);
    assert!(stdout(&out).contains("wrote 32 offset poses"));
    let images = fs::read_to_string(out_dir.join("images.txt")).unwrap();
    let data_lines = images
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .count();
    assert_eq!(data_lines, 32);
}

#[test]
fn strip_points_empties_second_lines() {
    let work = tempfile::tempdir().unwrap();
    let input = work.path().join("images.txt");
    fs::write(
        &input,
        "1 1 0 0 0 0 0 0 1 a.png\n10.5 20.5 7 1.5 2.5 -1\n2 1 0 0 0 0 0 5 1 b.png\n3 4 9\n",
    )
    .unwrap();
    let output = work.path().join("stripped.txt");
    let out = splatkit(&[
        "strip-points",
        "--in",
        input.to_str().unwrap(),
        "--out",
        output.to_str().unwrap(),
    ]);
    assert_code(&out, 0);
    let text = fs::read_to_string(&output).unwrap();
    let data_lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data_lines.len(), 4);
    assert!(data_lines[1].is_empty());
    assert!(data_lines[3].is_empty());
    assert!(data_lines[0].contains("a.png"));
}

#[test]
fn convert_pose_roundtrip_preserves_model() {
    let work = tempfile::tempdir().unwrap();
    let work = work.path();
    let spec = work.join("rig.txt");
    write_rig_spec(&spec);
    let rig_dir = work.join("model");
    assert_code(
        &splatkit(&[
            "rig",
            "--spec",
            spec.to_str().unwrap(),
            "--out",
            rig_dir.to_str().unwrap(),
        ]),
        0,
    );
    let graphics_dir = work.join("graphics");
    assert_code(
        &splatkit(&[
            "convert-pose",
            "--in",
            rig_dir.to_str().unwrap(),
            "--from",
            "vision",
            "--to",
            "graphics",
            "--out",
            graphics_dir.to_str().unwrap(),
        ]),
        0,
    );
    // Converted poses differ from the originals.
    assert_ne!(
        fs::read_to_string(rig_dir.join("images.txt")).unwrap(),
        fs::read_to_string(graphics_dir.join("images.txt")).unwrap()
    );
    let back_dir = work.join("vision");
    assert_code(
        &splatkit(&[
            "convert-pose",
            "--in",
            graphics_dir.to_str().unwrap(),
            "--from",
            "graphics",
            "--to",
            "vision",
            "--out",
            back_dir.to_str().unwrap(),
        ]),
        0,
    );
    // Round trip restores the stored rotations up to quaternion sign; the
    // text must parse back to poses matching the originals.
    let a = fs::read_to_string(rig_dir.join("images.txt")).unwrap();
    let b = fs::read_to_string(back_dir.join("images.txt")).unwrap();
    for (la, lb) in a.lines().zip(b.lines()) {
        if la.starts_with('#') || la.is_empty() {
            continue;
        }
        let ta: Vec<&str> = la.split_whitespace().collect();
        let tb: Vec<&str> = lb.split_whitespace().collect();
        assert_eq!(ta.len(), tb.len());
        assert_eq!(ta[0], tb[0]);
        assert_eq!(ta[9], tb[9]);
        let qa: Vec<f64> = ta[1..8].iter().map(|v| v.parse().unwrap()).collect();
        let qb: Vec<f64> = tb[1..8].iter().map(|v| v.parse().unwrap()).collect();
        // Quaternion components may flip sign together.
        let sign = if (qa[0] - qb[0]).abs() <= 1e-9 {
            1.0
        } else {
            -1.0
        };
        for i in 0..4 {
            assert!((qa[i] - sign * qb[i]).abs() <= 1e-9, "{la} vs {lb}");
        }
        for i in 4..7 {
            assert!((qa[i] - qb[i]).abs() <= 1e-9, "{la} vs {lb}");
        }
    }
}

#[test]
fn render_rejects_malformed_ply_with_exit_two() {
    let work = tempfile::tempdir().unwrap();
    let ply = work.path().join("bad.ply");
    fs::write(&ply, b"ply\nformat ascii 1.0\nend_header\n").unwrap();
    let model = work.path().join("model");
    fs::create_dir(&model).unwrap();
    fs::write(model.join("cameras.txt"), "1 PINHOLE 64 48 60 60 32 24\n").unwrap();
    fs::write(model.join("images.txt"), "1 1 0 0 0 0 0 5 1 a.png\n\n").unwrap();
    let out = splatkit(&[
        "render",
        "--splat",
        ply.to_str().unwrap(),
        "--model",
        model.to_str().unwrap(),
        "--out",
        work.path().join("out").to_str().unwrap(),
    ]);
    assert_code(&out, 2);
}
