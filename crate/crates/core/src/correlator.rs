//! Lag-resolved cross-correlation, the phase-free detection statistic,
//! range estimation and detection decisions.

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{invalid, Error, Result};
use crate::field_source::SimGrid;
use crate::homodyne::FluctuationRecord;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Smallest null-calibration sample accepted by [`decide_detection`].
pub const MIN_NULL_TRIALS: usize = 100;

/// Bins on either side of the peak left out of the noise floor.
pub const PEAK_GUARD_BINS: i64 = 2;

/// Which lags to scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LagPolicy {
    /// `0..=max_lag` (causal returns only).
    #[default]
    Causal,
    /// `-max_lag..=max_lag`.
    TwoSided,
}

/// How the lag scan is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScanMethod {
    /// Direct O(n·L) sums; the reference.
    #[default]
    Direct,
    /// FFT-based O(n log n) correlation.
    Fft,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorrelatorConfig {
    pub max_lag: usize,
    pub lag_policy: LagPolicy,
    pub method: ScanMethod,
}

impl CorrelatorConfig {
    pub fn causal(max_lag: usize) -> Self {
        Self { max_lag, lag_policy: LagPolicy::Causal, method: ScanMethod::Direct }
    }

    fn lags(&self) -> Vec<i64> {
        let hi = self.max_lag as i64;
        let lo = match self.lag_policy {
            LagPolicy::Causal => 0,
            LagPolicy::TwoSided => -hi,
        };
        (lo..=hi).collect()
    }
}

/// Estimates of `⟨a(t)·b(t + lag)⟩` over a range of lags.
#[derive(Debug, Clone, PartialEq)]
pub struct LagScan {
    pub lags: Vec<i64>,
    pub estimate: Vec<f64>,
    /// Standard error of each estimate: sample SD of the products over √overlap.
    pub se: Vec<f64>,
    pub n_overlap: Vec<usize>,
}

/// Sums of `p` and `p²` for `p[t] = a[t]·b[t]`.
fn product_sums(a: &[f64], b: &[f64]) -> (f64, f64) {
    const LANES: usize = 4;
    let mut s = [0.0; LANES];
    let mut q = [0.0; LANES];
    let chunks = a.len() / LANES;
    for k in 0..chunks {
        for l in 0..LANES {
            let p = a[k * LANES + l] * b[k * LANES + l];
            s[l] += p;
            q[l] += p * p;
        }
    }
    let mut sum = (s[0] + s[1]) + (s[2] + s[3]);
    let mut sumsq = (q[0] + q[1]) + (q[2] + q[3]);
    for i in chunks * LANES..a.len() {
        let p = a[i] * b[i];
        sum += p;
        sumsq += p * p;
    }
    (sum, sumsq)
}

fn mean_and_se(sum: f64, sumsq: f64, m: usize) -> (f64, f64) {
    let mf = m as f64;
    let mean = sum / mf;
    let var = if m > 1 { ((sumsq - mf * mean * mean) / (mf - 1.0)).max(0.0) } else { 0.0 };
    (mean, (var / mf).sqrt())
}

fn check_scan(a: &FluctuationRecord, b: &FluctuationRecord, cfg: &CorrelatorConfig) -> Result<()> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    let n = a.grid.n_bins();
    if cfg.max_lag > n / 10 {
        return Err(invalid(format!("max_lag {} exceeds n_bins/10 = {} (overlap too short)", cfg.max_lag, n / 10)));
    }
    Ok(())
}

/// Causal lag scan with the direct estimator,
/// `ĉ(ℓ) = (1/(n−ℓ))·Σ_t a[t]·b[t+ℓ]` for `ℓ ∈ [0, max_lag]`.
pub fn cross_correlate(a: &FluctuationRecord, b: &FluctuationRecord, max_lag: usize) -> Result<LagScan> {
    cross_correlate_with(a, b, &CorrelatorConfig::causal(max_lag))
}

pub fn cross_correlate_with(a: &FluctuationRecord, b: &FluctuationRecord, cfg: &CorrelatorConfig) -> Result<LagScan> {
    check_scan(a, b, cfg)?;
    let lags = cfg.lags();
    let sums = match cfg.method {
        ScanMethod::Direct => direct_sums(&a.theta, &b.theta, &lags),
        ScanMethod::Fft => fft_sums(&a.theta, &b.theta, &lags),
    };
    let n = a.grid.n_bins();
    let n_overlap: Vec<usize> = lags.iter().map(|l| n - l.unsigned_abs() as usize).collect();
    let (estimate, se) = sums.iter().zip(&n_overlap).map(|(&(s, q), &m)| mean_and_se(s, q, m)).unzip();
    Ok(LagScan { lags, estimate, se, n_overlap })
}

fn direct_sums(a: &[f64], b: &[f64], lags: &[i64]) -> Vec<(f64, f64)> {
    let n = a.len();
    lags.par_iter()
        .map(|&lag| {
            let k = lag.unsigned_abs() as usize;
            if lag >= 0 {
                product_sums(&a[..n - k], &b[k..])
            } else {
                product_sums(&a[k..], &b[..n - k])
            }
        })
        .collect()
}

/// Circular correlation `r[ℓ] = Σ_t u[t]·v[t+ℓ]` of zero-padded inputs.
fn fft_correlate(planner: &mut FftPlanner<f64>, u: &[f64], v: &[f64], size: usize) -> Vec<f64> {
    let fwd = planner.plan_fft_forward(size);
    let inv = planner.plan_fft_inverse(size);
    let load = |x: &[f64]| {
        let mut buf = vec![Complex64::new(0.0, 0.0); size];
        for (dst, &src) in buf.iter_mut().zip(x) {
            dst.re = src;
        }
        buf
    };
    let mut fu = load(u);
    let mut fv = load(v);
    fwd.process(&mut fu);
    fwd.process(&mut fv);
    for (x, y) in fu.iter_mut().zip(&fv) {
        *x = x.conj() * y;
    }
    inv.process(&mut fu);
    let norm = 1.0 / size as f64;
    fu.iter().map(|c| c.re * norm).collect()
}

fn fft_sums(a: &[f64], b: &[f64], lags: &[i64]) -> Vec<(f64, f64)> {
    let size = (2 * a.len()).next_power_of_two();
    let mut planner = FftPlanner::new();
    let sq = |x: &[f64]| x.iter().map(|v| v * v).collect::<Vec<_>>();
    let r = fft_correlate(&mut planner, a, b, size);
    let r2 = fft_correlate(&mut planner, &sq(a), &sq(b), size);
    lags.iter()
        .map(|&lag| {
            let idx = lag.rem_euclid(size as i64) as usize;
            (r[idx], r2[idx])
        })
        .collect()
}

/// Squared correlation sum `s = c1² + c2²`, which is independent of the
/// unknown propagation phase.
pub fn detection_statistic(c1: &[f64], c2: &[f64]) -> Result<Vec<f64>> {
    if c1.len() != c2.len() {
        return Err(invalid(format!("length mismatch: {} vs {}", c1.len(), c2.len())));
    }
    Ok(c1.iter().zip(c2).map(|(a, b)| a * a + b * b).collect())
}

/// Both probe correlations and the detection statistic against lag.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSeries {
    pub lags: Vec<i64>,
    pub c1: Vec<f64>,
    pub c2: Vec<f64>,
    pub s: Vec<f64>,
    pub se1: Vec<f64>,
    pub se2: Vec<f64>,
    pub n_overlap: Vec<usize>,
}

impl CorrelationSeries {
    pub fn from_scans(first: LagScan, second: LagScan) -> Result<Self> {
        if first.lags != second.lags {
            return Err(invalid("lag scans cover different lags"));
        }
        let s = detection_statistic(&first.estimate, &second.estimate)?;
        Ok(Self {
            lags: first.lags,
            c1: first.estimate,
            c2: second.estimate,
            s,
            se1: first.se,
            se2: second.se,
            n_overlap: first.n_overlap,
        })
    }

    pub fn len(&self) -> usize {
        self.lags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lags.is_empty()
    }

    pub fn index_of_lag(&self, lag: i64) -> Option<usize> {
        self.lags.iter().position(|&l| l == lag)
    }

    /// `s` with the variance of the squared estimators removed,
    /// `c1² + c2² − se1² − se2²`.
    pub fn debiased(&self, k: usize) -> f64 {
        self.s[k] - self.se1[k].powi(2) - self.se2[k].powi(2)
    }

    /// Largest statistic value over all lags.
    pub fn max_statistic(&self) -> f64 {
        self.s.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Correlates the idler record against both probe records.
pub fn correlate_pair(
    theta_d: &FluctuationRecord,
    theta_b1: &FluctuationRecord,
    theta_b2: &FluctuationRecord,
    cfg: &CorrelatorConfig,
) -> Result<CorrelationSeries> {
    let first = cross_correlate_with(theta_d, theta_b1, cfg)?;
    let second = cross_correlate_with(theta_d, theta_b2, cfg)?;
    CorrelationSeries::from_scans(first, second)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeEstimate {
    pub lag_hat: i64,
    /// One-way target distance, `lag_hat·dt·c/2`.
    pub distance: f64,
    pub peak: f64,
    pub floor_mean: f64,
    pub floor_sd: f64,
    /// `(peak − floor_mean)/floor_sd`, zero when the floor has no spread.
    pub snr: f64,
    /// Set when the statistic is flat and no lag stands out.
    pub no_peak: bool,
}

fn argmax(s: &[f64]) -> usize {
    let mut best = 0;
    for (k, v) in s.iter().enumerate() {
        if *v > s[best] {
            best = k;
        }
    }
    best
}

fn off_peak(series: &CorrelationSeries, peak_lag: i64) -> Vec<f64> {
    series
        .lags
        .iter()
        .zip(&series.s)
        .filter(|(l, _)| (**l - peak_lag).abs() > PEAK_GUARD_BINS)
        .map(|(_, s)| *s)
        .collect()
}

fn mean_sd(v: &[f64]) -> (f64, f64) {
    if v.is_empty() {
        return (0.0, 0.0);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let sd = if v.len() > 1 { (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt() } else { 0.0 };
    (mean, sd)
}

/// Mean and SD of the statistic away from its peak (peak ± 2 bins excluded).
pub fn noise_floor(series: &CorrelationSeries) -> Result<(f64, f64)> {
    if series.is_empty() {
        return Err(invalid("empty correlation series"));
    }
    let peak_lag = series.lags[argmax(&series.s)];
    let rest = off_peak(series, peak_lag);
    if rest.len() < 10 {
        return Err(invalid(format!("noise floor needs at least 10 off-peak lags, got {}", rest.len())));
    }
    Ok(mean_sd(&rest))
}

pub fn estimate_range(series: &CorrelationSeries, grid: &SimGrid) -> Result<RangeEstimate> {
    if series.is_empty() {
        return Err(invalid("empty correlation series"));
    }
    let first = series.s[0];
    let no_peak = series.s.iter().all(|v| *v == first);
    let k = if no_peak { 0 } else { argmax(&series.s) };
    let lag_hat = series.lags[k];
    let peak = series.s[k];
    let (floor_mean, floor_sd) = mean_sd(&off_peak(series, lag_hat));
    let snr = if floor_sd > 0.0 { (peak - floor_mean) / floor_sd } else { 0.0 };
    Ok(RangeEstimate {
        lag_hat,
        distance: lag_hat as f64 * grid.dt() * SPEED_OF_LIGHT / 2.0,
        peak,
        floor_mean,
        floor_sd,
        snr,
        no_peak,
    })
}

/// Empirical distribution of the peak statistic with no target present.
#[derive(Debug, Clone, PartialEq)]
pub struct NullCalibration {
    sorted_peaks: Vec<f64>,
}

impl NullCalibration {
    pub fn new(mut peaks: Vec<f64>) -> Result<Self> {
        if peaks.len() < MIN_NULL_TRIALS {
            return Err(Error::InsufficientCalibration { got: peaks.len(), need: MIN_NULL_TRIALS });
        }
        if peaks.iter().any(|p| !p.is_finite()) {
            return Err(invalid("null peaks must be finite"));
        }
        peaks.sort_by(f64::total_cmp);
        Ok(Self { sorted_peaks: peaks })
    }

    pub fn peaks(&self) -> &[f64] {
        &self.sorted_peaks
    }

    /// Linearly interpolated sample quantile (Hyndman–Fan type 7).
    pub fn quantile(&self, q: f64) -> f64 {
        let v = &self.sorted_peaks;
        let h = (v.len() - 1) as f64 * q.clamp(0.0, 1.0);
        let lo = h.floor() as usize;
        let hi = h.ceil() as usize;
        v[lo] + (h - lo as f64) * (v[hi] - v[lo])
    }

    /// Threshold whose exceedance probability under the null is `false_alarm_rate`.
    pub fn threshold(&self, false_alarm_rate: f64) -> Result<f64> {
        if !(false_alarm_rate > 0.0 && false_alarm_rate < 1.0) {
            return Err(invalid(format!("false alarm rate must lie in (0, 1), got {false_alarm_rate}")));
        }
        Ok(self.quantile(1.0 - false_alarm_rate))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detection {
    pub detected: bool,
    pub threshold: f64,
}

/// Detect when the largest statistic exceeds the null quantile at
/// `1 − false_alarm_rate`.
pub fn decide_detection(
    series: &CorrelationSeries,
    null: &NullCalibration,
    false_alarm_rate: f64,
) -> Result<Detection> {
    let threshold = null.threshold(false_alarm_rate)?;
    Ok(Detection { detected: series.max_statistic() > threshold, threshold })
}

/// Alternative rule: detect when the peak correlation density reaches the
/// Y-quadrature baseline `⟨Y_D Y_B⟩² + ⟨Y_D X_B⟩²` (spectral units).
pub fn decide_detection_y_rule(series: &CorrelationSeries, grid: &SimGrid, baseline_density: f64) -> Detection {
    let threshold = baseline_density / (grid.dt() * grid.dt());
    Detection { detected: series.max_statistic() >= threshold, threshold }
}
