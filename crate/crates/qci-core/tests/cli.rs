//! End-to-end checks of the `qci` binary: subcommands, exit codes, file
//! outputs, and byte-determinism of the data tables.

use std::path::{Path, PathBuf};
use std::process::Command;

fn qci() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qci"))
}

fn scratch(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qci-cli-{}-{tag}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn repo_config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

#[test]
fn verify_torus_diag_passes_and_is_deterministic() {
    let dir = scratch("verify");
    let out1 = dir.join("a");
    let out2 = dir.join("b");
    for out in [&out1, &out2] {
        let status = qci()
            .args([
                "verify",
                repo_config("torus_diag.toml").to_str().unwrap(),
                "--threads",
                "2",
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success(), "verify exited {status:?}");
    }
    let csv1 = std::fs::read(out1.join("torus_diag.csv")).unwrap();
    let csv2 = std::fs::read(out2.join("torus_diag.csv")).unwrap();
    assert_eq!(csv1, csv2, "data tables must be byte-identical");
    let report = std::fs::read_to_string(out1.join("torus_diag.report")).unwrap();
    assert!(report.contains("pass: true"), "{report}");
    assert!(out1.join("run.log").exists());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn spectrum_subcommand_writes_25_rows() {
    let dir = scratch("spectrum");
    let status = qci()
        .args([
            "spectrum",
            repo_config("sphere_spectrum.toml").to_str().unwrap(),
            "--out",
            dir.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let table = std::fs::read_to_string(dir.join("spectrum.csv")).unwrap();
    let rows = table
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("lam_1") && !l.is_empty())
        .count();
    assert_eq!(rows, 25);
    assert!(dir.join("spectrum.rad").exists());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn geometry_subcommand_flags_one_critical_meridian() {
    let dir = scratch("geometry");
    let status = qci()
        .args([
            "geometry",
            repo_config("bump_geometry.toml").to_str().unwrap(),
            "--out",
            dir.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let table = std::fs::read_to_string(dir.join("rank_scan.csv")).unwrap();
    let mut meridians: Vec<f64> = table
        .lines()
        .skip(1)
        .filter_map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            // critical_meridian flag set, coarse cell.
            if cols.get(6) == Some(&"1") && cols.get(7) == Some(&"0") {
                cols[0].parse::<f64>().ok()
            } else {
                None
            }
        })
        .collect();
    // Adjacent flagged cells bracket one meridian; cluster within a few
    // cell widths.
    meridians.sort_by(|a, b| a.partial_cmp(b).unwrap());
    meridians.dedup_by(|a, b| (*a - *b).abs() < 0.1);
    assert_eq!(meridians.len(), 1, "meridians at {meridians:?}");
    assert!((meridians[0] - std::f64::consts::FRAC_PI_2).abs() < 0.1);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn invalid_direction_is_a_config_error() {
    let dir = scratch("badcfg");
    let cfg = dir.join("bad.toml");
    let text = std::fs::read_to_string(repo_config("torus_diag.toml"))
        .unwrap()
        .replace("c = [0.6, 0.8]", "c = [1.0, 0.0]");
    std::fs::write(&cfg, text).unwrap();
    let output = qci()
        .args(["verify", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("nonzero"), "{stderr}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn unknown_key_is_a_parse_error_with_location() {
    let dir = scratch("unknown");
    let cfg = dir.join("bad.toml");
    let text = std::fs::read_to_string(repo_config("torus_diag.toml"))
        .unwrap()
        .replace("[output]", "surprise = 1\n[output]");
    std::fs::write(&cfg, text).unwrap();
    let output = qci()
        .args(["verify", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("surprise"), "{stderr}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn unknown_subcommand_exits_one() {
    let output = qci().args(["frobnicate"]).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn report_merges_summaries() {
    let dir = scratch("report");
    // Produce two small reports first.
    for (cfg, id) in [
        ("torus_diag.toml", "torus_diag"),
        ("torus_integrated.toml", "torus_integrated"),
    ] {
        let mut text = std::fs::read_to_string(repo_config(cfg)).unwrap();
        // Shrink the sweep so this stays quick.
        text = text.replace(
            "lambdas = [25.0, 50.0, 100.0, 200.0, 400.0]",
            "lambdas = [25.0, 50.0, 100.0, 200.0]",
        );
        let cfg_path = dir.join(cfg);
        std::fs::write(&cfg_path, text).unwrap();
        let status = qci()
            .args([
                "verify",
                cfg_path.to_str().unwrap(),
                "--out",
                dir.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success(), "{id}");
    }
    let output = qci()
        .args([
            "report",
            dir.join("torus_diag.report").to_str().unwrap(),
            dir.join("torus_integrated.report").to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(output.status.success());
    let stdout = String::from_utf8_lossy(&output.stdout);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 3, "{stdout}");
    assert!(lines[1].starts_with("torus_diag,pointwise_diag,torus2,"));
    assert!(lines[2].starts_with("torus_integrated,integrated,torus2,"));
    std::fs::remove_dir_all(&dir).ok();
}
