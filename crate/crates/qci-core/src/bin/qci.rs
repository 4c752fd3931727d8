//! Configuration-driven experiment runner.
//!
//! ```text
//! qci spectrum <config.toml>   build and export a joint spectrum
//! qci geometry <config.toml>   rank-scan the moment map, export the grid
//! qci verify   <config.toml>   run the configured verification sweep
//! qci report   <report files>  merge report documents into a summary table
//! ```
//!
//! Options: `--threads N` (or env `QCI_THREADS`), `--out DIR` (overrides the
//! config's output directory). Exit codes: 0 pass, 1 error, 2 threshold fail.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use qci_core::config::ExperimentConfig;
use qci_core::geometry::{scan_regions, ScanAxis, ScanGrid};
use qci_core::models::ModelKind;
use qci_core::report::{merge_summaries, render_report_csv, render_report_text};
use qci_core::spectrum::{
    build_sor_spectrum_with, enumerate_torus, write_radial_blob, write_spectrum_table,
    SampleFilter, SorOptions,
};
use qci_core::weyl::verify;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("qci: error: {e}");
            ExitCode::from(1)
        }
    }
}

struct Cli {
    threads: Option<usize>,
    out_override: Option<PathBuf>,
    positional: Vec<String>,
}

fn parse_cli(args: Vec<String>) -> Result<Cli, String> {
    let mut cli = Cli {
        threads: None,
        out_override: None,
        positional: Vec::new(),
    };
    let mut it = args.into_iter();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--threads" => {
                let v = it.next().ok_or("--threads needs a value")?;
                cli.threads = Some(v.parse().map_err(|_| format!("bad --threads '{v}'"))?);
            }
            "--out" => {
                let v = it.next().ok_or("--out needs a value")?;
                cli.out_override = Some(PathBuf::from(v));
            }
            "--help" | "-h" => {
                cli.positional.insert(0, "help".into());
            }
            other => cli.positional.push(other.to_string()),
        }
    }
    Ok(cli)
}

fn run(args: Vec<String>) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let cli = parse_cli(args).map_err(std::io::Error::other)?;
    let threads = cli.threads.or_else(|| {
        std::env::var("QCI_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .ok();
    }

    let Some(cmd) = cli.positional.first() else {
        eprintln!("{USAGE}");
        return Ok(ExitCode::from(1));
    };
    match cmd.as_str() {
        "help" => {
            println!("{USAGE}");
            Ok(ExitCode::SUCCESS)
        }
        "spectrum" => cmd_spectrum(&cli),
        "geometry" => cmd_geometry(&cli),
        "verify" => cmd_verify(&cli),
        "report" => cmd_report(&cli),
        other => {
            eprintln!("qci: unknown subcommand '{other}'\n{USAGE}");
            Ok(ExitCode::from(1))
        }
    }
}

const USAGE: &str = "usage: qci <spectrum|geometry|verify|report> <config|reports...> [--threads N] [--out DIR]";

fn load_config(cli: &Cli) -> Result<(ExperimentConfig, PathBuf), Box<dyn std::error::Error>> {
    let path = cli
        .positional
        .get(1)
        .ok_or_else(|| std::io::Error::other("missing config path"))?;
    let cfg = ExperimentConfig::from_path(Path::new(path))?;
    let out_dir = cli
        .out_override
        .clone()
        .unwrap_or_else(|| cfg.output.directory.clone());
    std::fs::create_dir_all(&out_dir)?;
    Ok((cfg, out_dir))
}

fn cmd_spectrum(cli: &Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let (cfg, out_dir) = load_config(cli)?;
    let system = cfg.build_system()?;
    let lam_max = *cfg.experiment.lambdas.last().unwrap();
    let spec = match &system.kind {
        ModelKind::FlatTorus { n } => enumerate_torus(
            *n,
            &qci_core::geometry::SpectralRegion::ball(*n, lam_max),
        )?,
        ModelKind::SurfaceOfRevolution { profile } => build_sor_spectrum_with(
            profile,
            lam_max,
            &SorOptions {
                grid_size: cfg.system.grid_size,
                richardson: cfg.experiment.richardson,
                sample_filter: SampleFilter::All,
                stored_points_cap: cfg.experiment.sample_cap,
            },
        )?,
    };
    let table = write_spectrum_table(&spec)?;
    std::fs::write(out_dir.join("spectrum.csv"), &table)?;
    std::fs::write(out_dir.join("spectrum.rad"), write_radial_blob(&spec))?;
    let mut log = format!(
        "spectrum: {} pairs, lam_max {:.6e}\n",
        spec.pairs.len(),
        spec.lam_max
    );
    for (mult, groups) in spec.multiplicity_histogram() {
        let _ = writeln!(log, "multiplicity {mult}: {groups} groups");
    }
    std::fs::write(out_dir.join("run.log"), &log)?;
    println!(
        "wrote {} rows to {}",
        spec.pairs.len(),
        out_dir.join("spectrum.csv").display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_geometry(cli: &Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let (cfg, out_dir) = load_config(cli)?;
    let system = cfg.build_system()?;
    let grid = match &system.kind {
        ModelKind::FlatTorus { .. } => ScanGrid {
            spatial: vec![],
            angle: ScanAxis::new(0.0, 2.0 * std::f64::consts::PI, 256),
        },
        ModelKind::SurfaceOfRevolution { profile } => ScanGrid {
            spatial: vec![ScanAxis::new(
                profile.length * 0.02,
                profile.length * 0.98,
                96,
            )],
            angle: ScanAxis::new(0.0, 2.0 * std::f64::consts::PI, 96),
        },
    };
    let report = scan_regions(&system, &grid);
    let mut table = String::from("coord_0,coord_1,rank,min_singular,sigma_zero,pole,critical_meridian,refined\n");
    for c in &report.cells {
        let c0 = c.coords.first().copied().unwrap_or(0.0);
        let c1 = c.coords.get(1).copied().unwrap_or(0.0);
        let _ = writeln!(
            table,
            "{:.9e},{:.9e},{},{:.6e},{},{},{},{}",
            c0,
            c1,
            c.fiber_rank,
            c.min_singular,
            c.flag_sigma_zero as u8,
            c.flag_pole as u8,
            c.flag_critical_meridian as u8,
            c.refined as u8
        );
    }
    std::fs::write(out_dir.join("rank_scan.csv"), &table)?;
    let degenerate = report.degenerate_cells().count();
    let critical: usize = report
        .cells
        .iter()
        .filter(|c| c.flag_critical_meridian && !c.refined)
        .count();
    let log = format!(
        "rank scan: {} cells, {} degenerate, {} on critical meridians\n",
        report.cells.len(),
        degenerate,
        critical
    );
    std::fs::write(out_dir.join("run.log"), &log)?;
    println!("wrote rank scan to {}", out_dir.join("rank_scan.csv").display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(cli: &Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let (cfg, out_dir) = load_config(cli)?;
    let report = verify(&cfg)?;
    let stem = report.experiment_id.clone();
    std::fs::write(
        out_dir.join(format!("{stem}.report")),
        render_report_text(&report),
    )?;
    std::fs::write(
        out_dir.join(format!("{stem}.csv")),
        render_report_csv(&report),
    )?;
    let log = format!(
        "verify {}: target {}, {} sweep values, pass = {}\n",
        stem,
        report.target.as_str(),
        report.lambdas.len(),
        report.pass
    );
    std::fs::write(out_dir.join("run.log"), &log)?;
    match &report.fit {
        Some(f) => println!(
            "{stem}: fitted exponent {:.4} (±{:.4}), target ≤ {:.2}+{:.2} → {}",
            f.beta,
            f.beta_half_width,
            report.target_exponent,
            report.slack,
            if report.pass { "PASS" } else { "FAIL" }
        ),
        None => println!("{stem}: no exponent fit → {}", if report.pass { "PASS" } else { "FAIL" }),
    }
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn cmd_report(cli: &Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let paths: Vec<&String> = cli.positional.iter().skip(1).collect();
    if paths.is_empty() {
        eprintln!("qci report: no report files given");
        return Ok(ExitCode::from(1));
    }
    let table = merge_summaries(&paths)?;
    print!("{table}");
    if let Some(dir) = &cli.out_override {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("summary.csv"), &table)?;
    }
    Ok(ExitCode::SUCCESS)
}
