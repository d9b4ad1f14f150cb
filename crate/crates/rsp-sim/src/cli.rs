//! Command implementations behind the `rsp-sim` binary.
//!
//! Exit codes form a stable contract: 0 success, 1 runtime/data error,
//! 2 configuration error, 3 infeasible timing budget.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::error::Error;
use crate::feedforward::{
    db_to_transmission, loss_budget, timing_report, Plane,
};
use crate::montecarlo::{sweep_bloch, SweepResult, SweepSpec};
use crate::polar::{DensityMatrix, PureState2};
use crate::tomography::{estimate_probs, ls_reconstruct, read_count_records, TomographySetting};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

/// Options for the `sweep` subcommand. Flags override the config file.
#[derive(Debug, Clone, Default)]
pub struct SweepArgs {
    pub config: Option<PathBuf>,
    pub json_config: bool,
    /// Required: all randomness flows from this seed.
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub plane: Option<Plane>,
    pub feedforward: Option<bool>,
    pub infinite_statistics: bool,
}

fn load_config(path: &Option<PathBuf>, json: bool) -> Result<ExperimentConfig, i32> {
    match path {
        None => Ok(ExperimentConfig::default()),
        Some(p) => ExperimentConfig::load(p, json).map_err(|e| {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }),
    }
}

/// Atomic file write: temp file in the same directory, then rename.
fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}

/// Runs one (plane, feed-forward) sweep and writes the CSV/JSON file pair.
pub fn cmd_sweep(args: &SweepArgs) -> i32 {
    let config = match load_config(&args.config, args.json_config) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let Some(seed) = args.seed else {
        eprintln!("error: --seed is required (reproducibility by default)");
        return EXIT_CONFIG;
    };

    let spec = SweepSpec {
        plane: args.plane.unwrap_or(config.sweep.plane),
        n_points: config.sweep.n_points,
        source: config.source,
        feedforward: args.feedforward.unwrap_or(config.sweep.feedforward),
        counts_per_setting: config.sweep.counts_per_setting,
        angle_jitter_sigma_deg: config.sweep.angle_jitter_sigma_deg,
        n_trials: config.sweep.n_trials,
        seed,
        infinite_statistics: args.infinite_statistics,
    };
    if let Err(e) = spec.validate() {
        eprintln!("error: {e}");
        return EXIT_CONFIG;
    }

    let result = match sweep_bloch(&spec) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_RUNTIME;
        }
    };

    let out_dir = args.out.clone().unwrap_or(config.output_dir);
    match write_sweep_files(&out_dir, &result) {
        Ok((csv, json)) => {
            println!(
                "{} plane, feed-forward {}: mean fidelity {:.6} over {} points",
                plane_name(result.plane),
                if result.feedforward { "on" } else { "off" },
                result.mean_fidelity(),
                result.points.len()
            );
            println!("wrote {} and {}", csv.display(), json.display());
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_RUNTIME
        }
    }
}

fn plane_name(plane: Plane) -> &'static str {
    match plane {
        Plane::Meridian => "meridian",
        Plane::Equatorial => "equatorial",
    }
}

/// Writes `sweep_<plane>_ff-<on|off>.csv` and its JSON sidecar.
pub fn write_sweep_files(
    out_dir: &Path,
    result: &SweepResult,
) -> std::io::Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(out_dir)?;
    let stem = format!(
        "sweep_{}_ff-{}",
        plane_name(result.plane),
        if result.feedforward { "on" } else { "off" }
    );
    let csv_path = out_dir.join(format!("{stem}.csv"));
    let json_path = out_dir.join(format!("{stem}.json"));
    write_atomic(&csv_path, &result.to_csv())?;
    let json = serde_json::to_string_pretty(result).expect("sweep result serializes");
    write_atomic(&json_path, &json)?;
    Ok((csv_path, json_path))
}

/// Options for the `tomo` subcommand.
#[derive(Debug, Clone)]
pub struct TomoArgs {
    pub counts: PathBuf,
    /// 2 for single-qubit files, 4 for coincidence files.
    pub dim: usize,
    pub out: Option<PathBuf>,
    /// Optional named target for a fidelity report:
    /// singlet | h | v | d | a | r | l.
    pub target: Option<String>,
}

#[derive(Serialize)]
struct TomoReport {
    rho: DensityMatrix,
    residual: f64,
    iterations: u32,
    converged: bool,
    condition_number: f64,
    purity: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fidelity: Option<f64>,
}

/// Reconstructs a density matrix from a count file.
pub fn cmd_tomo(args: &TomoArgs) -> i32 {
    match run_tomo(args) {
        Ok(report) => {
            let json = serde_json::to_string_pretty(&report).expect("report serializes");
            match &args.out {
                Some(path) => {
                    if let Err(e) = write_atomic(path, &json) {
                        eprintln!("error: {e}");
                        return EXIT_RUNTIME;
                    }
                    println!(
                        "reconstructed dim-{} state: purity {:.6}{}",
                        report.rho.dim(),
                        report.purity,
                        report
                            .fidelity
                            .map(|f| format!(", fidelity {f:.6}"))
                            .unwrap_or_default()
                    );
                    println!("wrote {}", path.display());
                }
                None => println!("{json}"),
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_RUNTIME
        }
    }
}

fn run_tomo(args: &TomoArgs) -> crate::Result<TomoReport> {
    let records = read_count_records(&args.counts)?;
    let settings: Vec<TomographySetting> = records.iter().map(|r| r.setting).collect();
    let mut freqs = Vec::new();
    for record in &records {
        freqs.extend(estimate_probs(record)?);
    }
    let result = ls_reconstruct(&settings, &freqs, args.dim)?;

    let (target, fidelity) = match &args.target {
        None => (None, None),
        Some(name) => {
            let fid = target_fidelity(&result.rho, name)?;
            (Some(name.clone()), Some(fid))
        }
    };
    Ok(TomoReport {
        purity: result.rho.purity(),
        rho: result.rho,
        residual: result.residual,
        iterations: result.iterations,
        converged: result.converged,
        condition_number: result.condition_number,
        target,
        fidelity,
    })
}

fn target_fidelity(rho: &DensityMatrix, name: &str) -> crate::Result<f64> {
    use crate::Complex64 as C64;
    match name.to_ascii_lowercase().as_str() {
        "singlet" => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            rho.fidelity_pure_amplitudes(&[
                C64::new(0.0, 0.0),
                C64::new(s, 0.0),
                C64::new(-s, 0.0),
                C64::new(0.0, 0.0),
            ])
        }
        "h" => rho.fidelity_pure(&PureState2::h()),
        "v" => rho.fidelity_pure(&PureState2::v()),
        "d" => rho.fidelity_pure(&PureState2::d()),
        "a" => rho.fidelity_pure(&PureState2::a()),
        "r" => rho.fidelity_pure(&PureState2::equatorial(std::f64::consts::FRAC_PI_2)),
        "l" => rho.fidelity_pure(&PureState2::equatorial(-std::f64::consts::FRAC_PI_2)),
        other => Err(Error::CountFile(format!(
            "unknown target state {other:?} (expected singlet, h, v, d, a, r or l)"
        ))),
    }
}

/// Options for the `timing` subcommand.
#[derive(Debug, Clone, Default)]
pub struct TimingArgs {
    pub config: Option<PathBuf>,
    pub json_config: bool,
    /// Emit the report as JSON instead of the text table.
    pub emit_json: bool,
}

#[derive(Serialize)]
struct TimingOutput {
    timing: crate::feedforward::TimingReport,
    total_loss_db: f64,
    transmission: f64,
}

/// Prints the feasibility table; exit 0 when feasible, 3 otherwise.
pub fn cmd_timing(args: &TimingArgs) -> i32 {
    let config = match load_config(&args.config, args.json_config) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let report = timing_report(&config.timing, &config.switch);
    let total_db = loss_budget(&config.losses);
    if args.emit_json {
        let out = TimingOutput {
            timing: report,
            total_loss_db: total_db,
            transmission: db_to_transmission(total_db),
        };
        println!("{}", serde_json::to_string_pretty(&out).expect("serializes"));
    } else {
        println!("{report}");
        println!();
        for part in &config.losses {
            println!("{:<28}{:>12.2} dB", part.name, part.loss_db);
        }
        println!(
            "{:<28}{:>12.2} dB  (transmission {:.3})",
            "total loss",
            total_db,
            db_to_transmission(total_db)
        );
        if !report.gate_covers_arrival {
            eprintln!("warning: the photon arrives after the gate has closed");
        }
    }
    if report.feasible {
        EXIT_OK
    } else {
        EXIT_INFEASIBLE
    }
}
