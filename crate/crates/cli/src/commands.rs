//! Subcommand drivers. Each writes its outputs into a directory and returns
//! the paths it wrote.

use std::path::{Path, PathBuf};

use qir_core::experiment::{
    calibrate_null, compare_quantum_classical, null_trial_count, run_trials, simulate_trial, sweep_eta_intensity,
    DetectionPolicy, TrialConfig,
};
use qir_core::seed::Domain;

use crate::config::{RunConfig, SourceKind};
use crate::output::{compare_table, series_table, sweep_table, trials_table};
use crate::plot::plot_csv;
use crate::CliError;

pub const SERIES_FILE: &str = "correlation_series.csv";
pub const TRIALS_FILE: &str = "trial_results.csv";
pub const MANIFEST_FILE: &str = "run_manifest.txt";
pub const SWEEP_FILE: &str = "sweep.csv";
pub const COMPARE_FILE: &str = "compare.csv";

/// Runs `f` on a pool of `threads` workers; 0 lets rayon choose.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(CliError::from_runtime)?;
    Ok(pool.install(f))
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", dir.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn runtime(e: qir_core::Error) -> CliError {
    CliError::from_runtime(e)
}

fn empirical_policy(trial: &TrialConfig, cfg: &RunConfig) -> Result<DetectionPolicy, CliError> {
    let null = calibrate_null(trial, null_trial_count(trial.n_trials)).map_err(runtime)?;
    Ok(DetectionPolicy::EmpiricalNull { null, false_alarm_rate: cfg.false_alarm_rate })
}

/// Full Monte Carlo run: trial table, trial-0 correlation series and the
/// resolved configuration.
pub fn simulate(cfg: &RunConfig, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let trial = cfg.to_trial_config()?;
    ensure_dir(out)?;
    let policy = empirical_policy(&trial, cfg)?;
    let results = run_trials(&trial, &policy).map_err(runtime)?;
    let first = simulate_trial(&trial, Domain::Target, 0).map_err(runtime)?;

    let paths = [out.join(SERIES_FILE), out.join(TRIALS_FILE), out.join(MANIFEST_FILE)];
    series_table(&first.series).write(&paths[0])?;
    trials_table(&results).write(&paths[1])?;
    write_text(&paths[2], &cfg.to_manifest())?;
    Ok(paths.to_vec())
}

/// Detection probability over a reflectivity by reference-intensity grid.
pub fn sweep(cfg: &RunConfig, etas: &[f64], intensities: &[f64], out: &Path) -> Result<Vec<PathBuf>, CliError> {
    if etas.is_empty() || intensities.is_empty() {
        return Err(CliError::Config("sweep needs at least one eta and one intensity".into()));
    }
    if let Some(bad) = etas.iter().find(|e| !(e.is_finite() && **e >= 0.0 && **e <= 1.0)) {
        return Err(CliError::Config(format!("eta must lie in [0, 1], got {bad}")));
    }
    if let Some(bad) = intensities.iter().find(|i| !(i.is_finite() && **i > 0.0)) {
        return Err(CliError::Config(format!("intensity must be positive, got {bad}")));
    }
    let trial = cfg.to_trial_config()?;
    ensure_dir(out)?;
    let table = sweep_eta_intensity(&trial, etas, intensities, cfg.false_alarm_rate).map_err(runtime)?;
    let paths = [out.join(SWEEP_FILE), out.join(MANIFEST_FILE)];
    sweep_table(&table).write(&paths[0])?;
    write_text(&paths[1], &cfg.to_manifest())?;
    Ok(paths.to_vec())
}

/// Squeezed-source and classical pipelines at matched settings.
pub fn compare(quantum: &RunConfig, classical: &RunConfig, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    if quantum.source_kind != SourceKind::Tmsv {
        return Err(CliError::Config("the quantum config must use source.kind = tmsv".into()));
    }
    if classical.source_kind != SourceKind::Classical {
        return Err(CliError::Config("the classical config must use source.kind = classical".into()));
    }
    let q = quantum.to_trial_config()?;
    let c = classical.to_trial_config()?;
    let report = compare_quantum_classical(&q, &c, quantum.false_alarm_rate).map_err(CliError::from_config)?;
    ensure_dir(out)?;
    let path = out.join(COMPARE_FILE);
    compare_table(&report).write(&path)?;
    Ok(vec![path])
}

pub fn plot(csv: &Path, svg: &Path) -> Result<(), CliError> {
    let text =
        std::fs::read_to_string(csv).map_err(|e| CliError::Config(format!("cannot read {}: {e}", csv.display())))?;
    let rendered = plot_csv(&text)?;
    write_text(svg, &rendered)
}
