//! Monte Carlo harness: trials, null calibration, detection probability,
//! reflectivity/intensity sweeps and the quantum-versus-classical comparison.
//!
//! Trials are independent work units run on the ambient rayon pool; results
//! are collected in trial order and every random stream is derived from
//! `(master_seed, domain, trial_index, stream)`, so the output does not depend
//! on scheduling or worker count.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::analytic::{predicted_classical_peak, predicted_quantum_peak, SqueezeConvention};
use crate::channel::{prepare_received_components, ChannelParams, ChannelSeeds};
use crate::correlator::{
    correlate_pair, decide_detection, decide_detection_y_rule, estimate_range, CorrelationSeries, CorrelatorConfig,
    NullCalibration, RangeEstimate, MIN_NULL_TRIALS,
};
use crate::error::{invalid, Error, Result};
use crate::field_source::{
    sample_entangled_records, sample_phase_noise_record, sample_vacuum_record, tmsv_covariance, ClassicalSourceParams,
    QuadratureRecord, SimGrid, SqueezedSourceParams,
};
use crate::homodyne::{
    classical_idler_homodyne, classical_probe_homodyne_pair, idler_homodyne, probe_homodyne_pair, HomodyneConfig,
};
use crate::seed::{Domain, TrialSeeds};

/// Two-sided 95% normal quantile used for Wilson intervals.
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceConfig {
    /// Two-mode squeezed entangled pair.
    Tmsv(SqueezedSourceParams),
    /// Classical beams sharing a common phase-noise record.
    Classical(ClassicalSourceParams),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialConfig {
    pub grid: SimGrid,
    pub source: SourceConfig,
    pub channel: ChannelParams,
    pub homodyne: HomodyneConfig,
    pub correlator: CorrelatorConfig,
    pub master_seed: u64,
    pub n_trials: usize,
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        match &self.source {
            SourceConfig::Tmsv(p) => p.validate()?,
            SourceConfig::Classical(p) => p.validate()?,
        }
        self.channel.validate(&self.grid)?;
        self.homodyne.validate()?;
        if self.correlator.max_lag < self.channel.delay_bins {
            return Err(invalid(format!(
                "max_lag {} does not reach the delay of {} bins",
                self.correlator.max_lag, self.channel.delay_bins
            )));
        }
        if self.correlator.max_lag > self.grid.n_bins() / 10 {
            return Err(invalid(format!(
                "max_lag {} exceeds n_bins/10 = {}",
                self.correlator.max_lag,
                self.grid.n_bins() / 10
            )));
        }
        if self.n_trials == 0 {
            return Err(invalid("n_trials must be at least 1"));
        }
        Ok(())
    }

    /// Same settings with no target in the scene.
    pub fn null_variant(&self) -> Self {
        let mut cfg = *self;
        cfg.channel.eta = 0.0;
        cfg.channel.target_present = false;
        cfg
    }

    pub fn with_eta(&self, eta: f64) -> Self {
        let mut cfg = *self;
        cfg.channel.eta = eta;
        cfg
    }

    pub fn with_lo_intensity(&self, lo_intensity: f64) -> Self {
        let mut cfg = *self;
        cfg.homodyne.lo_intensity = lo_intensity;
        cfg
    }

    fn delay_lag(&self) -> i64 {
        self.channel.delay_bins as i64
    }
}

/// Number of null-calibration trials used alongside `n_trials` target trials.
pub fn null_trial_count(n_trials: usize) -> usize {
    n_trials.max(MIN_NULL_TRIALS)
}

/// Correlation products of a single simulated trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutput {
    pub series: CorrelationSeries,
    pub range: RangeEstimate,
    /// Debiased statistic at the true delay, times `dt²`.
    pub delay_density: f64,
}

/// Runs source → channel → homodynes → correlator for one trial.
pub fn simulate_trial(config: &TrialConfig, domain: Domain, trial_index: u64) -> Result<TrialOutput> {
    config.validate()?;
    let grid = config.grid;
    let seeds = TrialSeeds::derive(config.master_seed, domain, trial_index);
    let channel_seeds = ChannelSeeds { env: seeds.env, vac: seeds.vac };
    let hd = &config.homodyne;
    let phi = config.channel.phi_b - hd.phi2;

    let (theta_d, (theta_b1, theta_b2)) = match &config.source {
        SourceConfig::Tmsv(src) => {
            let cov = tmsv_covariance(src)?;
            let (probe, idler) = sample_entangled_records(&cov, grid, seeds.source)?;
            let rc = prepare_received_components(&probe, &config.channel, grid, channel_seeds)?;
            let lo1 = sample_vacuum_record(grid, seeds.lo1);
            let lo2 = sample_vacuum_record(grid, seeds.lo2);
            let lo3 = sample_vacuum_record(grid, seeds.lo3);
            let theta_d = idler_homodyne(&idler, &lo3, hd.lo_intensity, src.flux_d, hd.phi1)?;
            let pair = probe_homodyne_pair(&rc, &lo1, &lo2, hd.lo_intensity, src.flux_b, phi, hd.phi2)?;
            (theta_d, pair)
        }
        SourceConfig::Classical(src) => {
            let delta = sample_phase_noise_record(src, grid, seeds.source)?;
            let probe = QuadratureRecord { grid, x: delta.delta.clone(), y: vec![0.0; grid.n_bins()] };
            let rc = prepare_received_components(&probe, &config.channel, grid, channel_seeds)?;
            let theta_d = classical_idler_homodyne(&delta, src, hd.lo_intensity);
            let pair = classical_probe_homodyne_pair(&rc, src, hd.lo_intensity, phi, hd.phi2)?;
            (theta_d, pair)
        }
    };

    let series = correlate_pair(&theta_d, &theta_b1, &theta_b2, &config.correlator)?;
    let range = estimate_range(&series, &grid)?;
    let k = series.index_of_lag(config.delay_lag()).ok_or_else(|| invalid("delay lag is not covered by the scan"))?;
    let delay_density = series.debiased(k) * grid.dt() * grid.dt();
    Ok(TrialOutput { series, range, delay_density })
}

/// How a trial's statistic is turned into a decision.
#[derive(Debug, Clone, PartialEq)]
pub enum DetectionPolicy {
    /// Threshold at the `1 − false_alarm_rate` quantile of target-free peaks.
    EmpiricalNull { null: NullCalibration, false_alarm_rate: f64 },
    /// Compare the peak density against a fixed Y-quadrature baseline.
    YQuadrature { baseline_density: f64 },
}

impl DetectionPolicy {
    fn decide(&self, series: &CorrelationSeries, grid: &SimGrid) -> Result<bool> {
        match self {
            Self::EmpiricalNull { null, false_alarm_rate } => {
                Ok(decide_detection(series, null, *false_alarm_rate)?.detected)
            }
            Self::YQuadrature { baseline_density } => {
                Ok(decide_detection_y_rule(series, grid, *baseline_density).detected)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub trial_index: u64,
    pub detected: bool,
    pub range: RangeEstimate,
    /// Peak statistic times `dt²`.
    pub peak_density: f64,
    /// Debiased statistic at the true delay, times `dt²`.
    pub delay_density: f64,
    pub runtime: Duration,
}

impl TrialResult {
    /// Equality ignoring wall-clock runtime.
    pub fn same_outcome(&self, other: &Self) -> bool {
        self.trial_index == other.trial_index
            && self.detected == other.detected
            && self.range == other.range
            && self.peak_density == other.peak_density
            && self.delay_density == other.delay_density
    }
}

pub fn run_trial(config: &TrialConfig, trial_index: u64, policy: &DetectionPolicy) -> Result<TrialResult> {
    let start = Instant::now();
    let out = simulate_trial(config, Domain::Target, trial_index)?;
    let detected = policy.decide(&out.series, &config.grid)?;
    let dt2 = config.grid.dt() * config.grid.dt();
    Ok(TrialResult {
        trial_index,
        detected,
        peak_density: out.range.peak * dt2,
        range: out.range,
        delay_density: out.delay_density,
        runtime: start.elapsed(),
    })
}

/// Runs trials `0..config.n_trials` in parallel, returned in index order.
pub fn run_trials(config: &TrialConfig, policy: &DetectionPolicy) -> Result<Vec<TrialResult>> {
    config.validate()?;
    (0..config.n_trials as u64).into_par_iter().map(|i| run_trial(config, i, policy)).collect()
}

/// Distribution of the peak statistic over target-free trials that share
/// every other setting with `config`.
pub fn calibrate_null(config: &TrialConfig, n_null_trials: usize) -> Result<NullCalibration> {
    if n_null_trials < MIN_NULL_TRIALS {
        return Err(Error::InsufficientCalibration { got: n_null_trials, need: MIN_NULL_TRIALS });
    }
    let null_cfg = config.null_variant();
    null_cfg.validate()?;
    let peaks = (0..n_null_trials as u64)
        .into_par_iter()
        .map(|i| simulate_trial(&null_cfg, Domain::Null, i).map(|o| o.series.max_statistic()))
        .collect::<Result<Vec<_>>>()?;
    NullCalibration::new(peaks)
}

/// Binomial proportion with a 95% Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionEstimate {
    pub p_detect: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub detections: usize,
    pub trials: usize,
}

pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

impl DetectionEstimate {
    pub fn from_results(results: &[TrialResult]) -> Self {
        let detections = results.iter().filter(|r| r.detected).count();
        let trials = results.len();
        let (ci_low, ci_high) = wilson_interval(detections, trials);
        Self {
            p_detect: if trials > 0 { detections as f64 / trials as f64 } else { 0.0 },
            ci_low,
            ci_high,
            detections,
            trials,
        }
    }
}

pub fn estimate_detection_probability(
    config: &TrialConfig,
    null: &NullCalibration,
    false_alarm_rate: f64,
) -> Result<DetectionEstimate> {
    let policy = DetectionPolicy::EmpiricalNull { null: null.clone(), false_alarm_rate };
    let results = run_trials(config, &policy)?;
    Ok(DetectionEstimate::from_results(&results))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCell {
    pub eta: f64,
    pub lo_intensity: f64,
    pub estimate: DetectionEstimate,
    /// First reflectivity of its column at which `p_detect` reaches 0.5.
    pub crossing: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    /// Row-major over intensities, then ascending reflectivity.
    pub cells: Vec<SweepCell>,
    /// Per intensity, the reflectivity where `p_detect` crosses 0.5,
    /// interpolated linearly in `ln η`.
    pub crossings: Vec<(f64, Option<f64>)>,
}

fn crossing_eta(column: &[SweepCell]) -> (Option<usize>, Option<f64>) {
    for k in 0..column.len() {
        let p = column[k].estimate.p_detect;
        if p >= 0.5 {
            if k == 0 {
                return (Some(0), Some(column[0].eta));
            }
            let (e0, p0) = (column[k - 1].eta, column[k - 1].estimate.p_detect);
            let e1 = column[k].eta;
            let eta = if e0 > 0.0 && p > p0 {
                let frac = (0.5 - p0) / (p - p0);
                (e0.ln() + frac * (e1.ln() - e0.ln())).exp()
            } else {
                e1
            };
            return (Some(k), Some(eta));
        }
    }
    (None, None)
}

/// Detection probability over an `η × I` grid. One null calibration is run
/// per intensity and shared by that column.
pub fn sweep_eta_intensity(
    config: &TrialConfig,
    eta_grid: &[f64],
    intensity_grid: &[f64],
    false_alarm_rate: f64,
) -> Result<SweepTable> {
    if eta_grid.is_empty() || intensity_grid.is_empty() {
        return Err(invalid("sweep grids must be non-empty"));
    }
    let mut etas = eta_grid.to_vec();
    etas.sort_by(f64::total_cmp);
    let mut cells = Vec::with_capacity(etas.len() * intensity_grid.len());
    let mut crossings = Vec::with_capacity(intensity_grid.len());
    for &lo in intensity_grid {
        let column_cfg = config.with_lo_intensity(lo);
        let null = calibrate_null(&column_cfg, null_trial_count(config.n_trials))?;
        let mut column = Vec::with_capacity(etas.len());
        for &eta in &etas {
            let mut cfg = column_cfg.with_eta(eta);
            cfg.channel.target_present = true;
            let estimate = estimate_detection_probability(&cfg, &null, false_alarm_rate)?;
            column.push(SweepCell { eta, lo_intensity: lo, estimate, crossing: false });
        }
        let (idx, eta_star) = crossing_eta(&column);
        if let Some(k) = idx {
            column[k].crossing = true;
        }
        crossings.push((lo, eta_star));
        cells.extend(column);
    }
    Ok(SweepTable { cells, crossings })
}

/// Power-law fit of crossing reflectivity against reference intensity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingFit {
    /// Least-squares slope of `ln η*` against `ln I`.
    pub slope: f64,
    /// `K` in `η* = K/I²`, geometric mean of `η*·I²`.
    pub k: f64,
}

pub fn fit_crossing_law(crossings: &[(f64, f64)]) -> Result<CrossingFit> {
    if crossings.len() < 2 {
        return Err(invalid("need at least two crossings to fit"));
    }
    let pts: Vec<(f64, f64)> = crossings.iter().map(|(i, e)| (i.ln(), e.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(invalid("crossings must span more than one intensity"));
    }
    let k = (pts.iter().map(|(x, y)| y + 2.0 * x).sum::<f64>() / n).exp();
    Ok(CrossingFit { slope: sxy / sxx, k })
}

/// Monte Carlo and analytic summary of one pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineSummary {
    /// Mean debiased statistic density at the true delay.
    pub peak_density_mc: f64,
    pub peak_density_se: f64,
    pub peak_density_pred: f64,
    pub mean_snr: f64,
    pub detection: DetectionEstimate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonReport {
    pub quantum: PipelineSummary,
    pub classical: PipelineSummary,
    pub mc_ratio: f64,
    pub predicted_ratio: f64,
}

fn summarize(config: &TrialConfig, false_alarm_rate: f64, predicted: f64) -> Result<PipelineSummary> {
    let null = calibrate_null(config, null_trial_count(config.n_trials))?;
    let policy = DetectionPolicy::EmpiricalNull { null, false_alarm_rate };
    let results = run_trials(config, &policy)?;
    let n = results.len() as f64;
    let mean = results.iter().map(|r| r.delay_density).sum::<f64>() / n;
    let var = if results.len() > 1 {
        results.iter().map(|r| (r.delay_density - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok(PipelineSummary {
        peak_density_mc: mean,
        peak_density_se: (var / n).sqrt(),
        peak_density_pred: predicted,
        mean_snr: results.iter().map(|r| r.range.snr).sum::<f64>() / n,
        detection: DetectionEstimate::from_results(&results),
    })
}

/// Runs both pipelines at matched grid, reflectivity and reference intensity.
pub fn compare_quantum_classical(
    config_q: &TrialConfig,
    config_c: &TrialConfig,
    false_alarm_rate: f64,
) -> Result<ComparisonReport> {
    if config_q.grid != config_c.grid {
        return Err(Error::GridMismatch);
    }
    if config_q.channel.effective_eta() != config_c.channel.effective_eta()
        || config_q.homodyne.lo_intensity != config_c.homodyne.lo_intensity
    {
        return Err(invalid("quantum and classical runs must share eta and reference intensity"));
    }
    let (SourceConfig::Tmsv(q), SourceConfig::Classical(c)) = (&config_q.source, &config_c.source) else {
        return Err(invalid("expected a squeezed source and a classical source"));
    };
    let eta = config_q.channel.effective_eta();
    let lo = config_q.homodyne.lo_intensity;
    let q_pred = predicted_quantum_peak(eta, lo, q.r, SqueezeConvention::Sinh2R)?;
    let c_pred = predicted_classical_peak(eta, lo, c.flux_b, c.flux_d, c.d_strength);
    let quantum = summarize(config_q, false_alarm_rate, q_pred)?;
    let classical = summarize(config_c, false_alarm_rate, c_pred)?;
    Ok(ComparisonReport {
        quantum,
        classical,
        mc_ratio: quantum.peak_density_mc / classical.peak_density_mc,
        predicted_ratio: q_pred / c_pred,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlator::ScanMethod;
    use std::f64::consts::FRAC_PI_2;

    fn config() -> TrialConfig {
        TrialConfig {
            grid: SimGrid::new(1.0, 20_000).unwrap(),
            source: SourceConfig::Tmsv(SqueezedSourceParams { r: 1.0, flux_b: 1.0, flux_d: 1.0 }),
            channel: ChannelParams { eta: 0.05, delay_bins: 40, phi_b: 0.3, env_occupancy: 2.0, target_present: true },
            homodyne: HomodyneConfig { lo_intensity: 100.0, phi1: FRAC_PI_2, phi2: 0.0 },
            correlator: CorrelatorConfig::causal(60),
            master_seed: 5,
            n_trials: 20,
        }
    }

    #[test]
    fn validation() {
        let mut c = config();
        c.correlator.max_lag = 30;
        assert!(c.validate().is_err());
        let mut c = config();
        c.n_trials = 0;
        assert!(c.validate().is_err());
        let mut c = config();
        c.correlator.max_lag = 2001;
        c.channel.delay_bins = 10;
        assert!(c.validate().is_err());
        assert!(config().validate().is_ok());
    }

    #[test]
    fn trial_is_deterministic() {
        let cfg = config();
        let policy = DetectionPolicy::YQuadrature { baseline_density: 1.0 };
        let a = run_trial(&cfg, 3, &policy).unwrap();
        let b = run_trial(&cfg, 3, &policy).unwrap();
        assert!(a.same_outcome(&b));
        let c = run_trial(&cfg, 4, &policy).unwrap();
        assert!(!a.same_outcome(&c));
    }

    #[test]
    fn strong_target_is_ranged() {
        let out = simulate_trial(&config(), Domain::Target, 0).unwrap();
        assert_eq!(out.range.lag_hat, 40);
        assert!(out.range.snr > 5.0);
    }

    #[test]
    fn trial_order_does_not_matter() {
        let cfg = config();
        let policy = DetectionPolicy::YQuadrature { baseline_density: 1.0 };
        let forward = run_trials(&cfg, &policy).unwrap();
        let mut backward: Vec<TrialResult> =
            (0..cfg.n_trials as u64).rev().map(|i| run_trial(&cfg, i, &policy).unwrap()).collect();
        backward.reverse();
        for (a, b) in forward.iter().zip(&backward) {
            assert!(a.same_outcome(b));
        }
    }

    #[test]
    fn fft_scan_gives_same_trial() {
        let cfg = config();
        let mut fft = cfg;
        fft.correlator.method = ScanMethod::Fft;
        let a = simulate_trial(&cfg, Domain::Target, 1).unwrap();
        let b = simulate_trial(&fft, Domain::Target, 1).unwrap();
        assert_eq!(a.range.lag_hat, b.range.lag_hat);
        assert!((a.range.peak - b.range.peak).abs() <= 1e-9 * a.range.peak);
    }

    #[test]
    fn calibration_properties() {
        let cfg = config();
        assert!(matches!(calibrate_null(&cfg, 50), Err(Error::InsufficientCalibration { .. })));
        let a = calibrate_null(&cfg, 100).unwrap();
        assert!(a.quantile(0.95) > a.quantile(0.5));
        assert!(a.peaks().iter().all(|p| *p >= 0.0));
        assert_eq!(a, calibrate_null(&cfg, 100).unwrap());
    }

    #[test]
    fn detection_probability_bounds_and_monotonicity() {
        let mut cfg = config();
        cfg.n_trials = 40;
        let null = calibrate_null(&cfg, 100).unwrap();
        let mut prev = 0.0;
        for eta in [1e-4, 3e-3, 3e-2] {
            let est = estimate_detection_probability(&cfg.with_eta(eta), &null, 0.05).unwrap();
            assert!((0.0..=1.0).contains(&est.p_detect));
            assert!(est.ci_low <= est.p_detect && est.p_detect <= est.ci_high);
            assert!(est.p_detect >= prev - 0.15);
            prev = est.p_detect;
        }
        assert_eq!(prev, 1.0);
    }

    #[test]
    fn wilson_interval_reference() {
        // 10 of 100: Wilson 95% interval (0.05522, 0.17436)
        let (lo, hi) = wilson_interval(10, 100);
        assert!((lo - 0.055_229).abs() < 1e-5, "{lo}");
        assert!((hi - 0.174_366).abs() < 1e-5, "{hi}");
        let (lo, hi) = wilson_interval(0, 20);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.2);
    }

    #[test]
    fn crossing_interpolation() {
        let cell = |eta, p| SweepCell {
            eta,
            lo_intensity: 1.0,
            estimate: DetectionEstimate { p_detect: p, ci_low: p, ci_high: p, detections: 0, trials: 1 },
            crossing: false,
        };
        let col = [cell(1e-4, 0.0), cell(1e-3, 0.25), cell(1e-2, 0.75), cell(1e-1, 1.0)];
        let (k, eta) = crossing_eta(&col);
        assert_eq!(k, Some(2));
        assert!((eta.unwrap() - 10f64.powf(-2.5)).abs() < 1e-12);
        assert_eq!(crossing_eta(&col[..2]), (None, None));
    }

    #[test]
    fn crossing_fit_recovers_power_law() {
        let pts: Vec<(f64, f64)> = [1e2, 1e3, 1e4].iter().map(|i| (*i, 3.0 / (i * i))).collect();
        let fit = fit_crossing_law(&pts).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-12);
        assert!((fit.k - 3.0).abs() < 1e-9);
        assert!(fit_crossing_law(&pts[..1]).is_err());
    }

    #[test]
    fn sweep_marks_crossings() {
        let mut cfg = config();
        cfg.n_trials = 10;
        assert!(sweep_eta_intensity(&cfg, &[], &[100.0], 0.05).is_err());
        let table = sweep_eta_intensity(&cfg, &[0.05, 0.0], &[100.0], 0.05).unwrap();
        assert_eq!(table.cells.len(), 2);
        assert_eq!(table.cells[0].eta, 0.0);
        assert!(table.cells[1].crossing);
        assert_eq!(table.crossings, vec![(100.0, Some(0.05))]);
    }

    #[test]
    fn comparison_rejects_mismatch() {
        let q = config();
        let mut c = config();
        c.source = SourceConfig::Classical(ClassicalSourceParams::default());
        let mut other = c;
        other.grid = SimGrid::new(2.0, 20_000).unwrap();
        assert_eq!(compare_quantum_classical(&q, &other, 0.05), Err(Error::GridMismatch));
        assert!(compare_quantum_classical(&c, &q, 0.05).is_err());
        let mut lo = c;
        lo.homodyne.lo_intensity = 7.0;
        assert!(compare_quantum_classical(&q, &lo, 0.05).is_err());
    }
}
