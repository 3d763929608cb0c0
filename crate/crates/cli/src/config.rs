//! Plain-text `key = value` run configuration.
//!
//! One assignment per line, `#` starts a comment, blank lines are ignored.
//! Unknown keys and duplicate keys are errors; missing keys take the defaults
//! listed in [`RunConfig::default`]. [`RunConfig::to_manifest`] writes every
//! key back out, so a manifest is itself a complete config.

use std::f64::consts::FRAC_PI_2;

use qir_core::channel::ChannelParams;
use qir_core::correlator::{CorrelatorConfig, LagPolicy, ScanMethod};
use qir_core::experiment::{SourceConfig, TrialConfig};
use qir_core::field_source::{ClassicalSourceParams, SimGrid, SqueezedSourceParams};
use qir_core::homodyne::HomodyneConfig;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    Tmsv,
    Classical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dt_s: f64,
    pub n_bins: usize,
    pub source_kind: SourceKind,
    pub r: f64,
    pub flux_b: f64,
    pub flux_d: f64,
    pub d_strength: f64,
    pub eta: f64,
    pub delay_bins: usize,
    pub phi_b_rad: f64,
    pub env_occupancy: f64,
    pub target_present: bool,
    pub lo_intensity: f64,
    pub phi1_rad: f64,
    pub phi2_rad: f64,
    pub max_lag: usize,
    pub two_sided: bool,
    pub scan_method: ScanMethod,
    pub false_alarm_rate: f64,
    pub n_trials: usize,
    pub master_seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dt_s: 1e-9,
            n_bins: 100_000,
            source_kind: SourceKind::Tmsv,
            r: 1.0,
            flux_b: 1.0,
            flux_d: 1.0,
            d_strength: 0.1,
            eta: 0.01,
            delay_bins: 150,
            phi_b_rad: 0.0,
            env_occupancy: 10.0,
            target_present: true,
            lo_intensity: 1000.0,
            phi1_rad: FRAC_PI_2,
            phi2_rad: 0.0,
            max_lag: 200,
            two_sided: false,
            scan_method: ScanMethod::Direct,
            false_alarm_rate: 0.05,
            n_trials: 100,
            master_seed: 1,
        }
    }
}

/// Recognized keys, in manifest order.
pub const KEYS: &[&str] = &[
    "grid.dt_s",
    "grid.n_bins",
    "source.kind",
    "source.r",
    "source.flux_b",
    "source.flux_d",
    "source.d_strength",
    "channel.eta",
    "channel.delay_bins",
    "channel.phi_b_rad",
    "channel.env_occupancy",
    "channel.target_present",
    "homodyne.lo_intensity",
    "homodyne.phi1_rad",
    "homodyne.phi2_rad",
    "correlator.max_lag",
    "correlator.two_sided",
    "correlator.method",
    "detect.false_alarm_rate",
    "experiment.n_trials",
    "experiment.master_seed",
];

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.parse().map_err(|_| CliError::Config(format!("{key}: cannot parse {value:?}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(CliError::Config(format!("{key}: expected true or false, got {value:?}"))),
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        let mut seen = std::collections::HashSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(CliError::Config(format!("line {}: duplicate key {key}", lineno + 1)));
            }
            cfg.set(key, value)?;
        }
        cfg.to_trial_config()?;
        if !(cfg.false_alarm_rate > 0.0 && cfg.false_alarm_rate < 1.0) {
            return Err(CliError::Config(format!(
                "detect.false_alarm_rate must lie in (0, 1), got {}",
                cfg.false_alarm_rate
            )));
        }
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<(), CliError> {
        match key {
            "grid.dt_s" => self.dt_s = parse_num(key, v)?,
            "grid.n_bins" => self.n_bins = parse_num(key, v)?,
            "source.kind" => {
                self.source_kind = match v {
                    "tmsv" => SourceKind::Tmsv,
                    "classical" => SourceKind::Classical,
                    _ => return Err(CliError::Config(format!("{key}: expected tmsv or classical, got {v:?}"))),
                }
            }
            "source.r" => self.r = parse_num(key, v)?,
            "source.flux_b" => self.flux_b = parse_num(key, v)?,
            "source.flux_d" => self.flux_d = parse_num(key, v)?,
            "source.d_strength" => self.d_strength = parse_num(key, v)?,
            "channel.eta" => self.eta = parse_num(key, v)?,
            "channel.delay_bins" => self.delay_bins = parse_num(key, v)?,
            "channel.phi_b_rad" => self.phi_b_rad = parse_num(key, v)?,
            "channel.env_occupancy" => self.env_occupancy = parse_num(key, v)?,
            "channel.target_present" => self.target_present = parse_bool(key, v)?,
            "homodyne.lo_intensity" => self.lo_intensity = parse_num(key, v)?,
            "homodyne.phi1_rad" => self.phi1_rad = parse_num(key, v)?,
            "homodyne.phi2_rad" => self.phi2_rad = parse_num(key, v)?,
            "correlator.max_lag" => self.max_lag = parse_num(key, v)?,
            "correlator.two_sided" => self.two_sided = parse_bool(key, v)?,
            "correlator.method" => {
                self.scan_method = match v {
                    "direct" => ScanMethod::Direct,
                    "fft" => ScanMethod::Fft,
                    _ => return Err(CliError::Config(format!("{key}: expected direct or fft, got {v:?}"))),
                }
            }
            "detect.false_alarm_rate" => self.false_alarm_rate = parse_num(key, v)?,
            "experiment.n_trials" => self.n_trials = parse_num(key, v)?,
            "experiment.master_seed" => self.master_seed = parse_num(key, v)?,
            _ => return Err(CliError::Config(format!("unknown key {key}"))),
        }
        Ok(())
    }

    pub fn to_trial_config(&self) -> Result<TrialConfig, CliError> {
        let grid = SimGrid::new(self.dt_s, self.n_bins).map_err(CliError::from_config)?;
        let source = match self.source_kind {
            SourceKind::Tmsv => {
                SourceConfig::Tmsv(SqueezedSourceParams { r: self.r, flux_b: self.flux_b, flux_d: self.flux_d })
            }
            SourceKind::Classical => SourceConfig::Classical(ClassicalSourceParams {
                d_strength: self.d_strength,
                flux_b: self.flux_b,
                flux_d: self.flux_d,
            }),
        };
        let cfg = TrialConfig {
            grid,
            source,
            channel: ChannelParams {
                eta: self.eta,
                delay_bins: self.delay_bins,
                phi_b: self.phi_b_rad,
                env_occupancy: self.env_occupancy,
                target_present: self.target_present,
            },
            homodyne: HomodyneConfig { lo_intensity: self.lo_intensity, phi1: self.phi1_rad, phi2: self.phi2_rad },
            correlator: CorrelatorConfig {
                max_lag: self.max_lag,
                lag_policy: if self.two_sided { LagPolicy::TwoSided } else { LagPolicy::Causal },
                method: self.scan_method,
            },
            master_seed: self.master_seed,
            n_trials: self.n_trials,
        };
        cfg.validate().map_err(CliError::from_config)?;
        Ok(cfg)
    }

    /// Every key with its resolved value, one per line.
    pub fn to_manifest(&self) -> String {
        let kind = match self.source_kind {
            SourceKind::Tmsv => "tmsv",
            SourceKind::Classical => "classical",
        };
        let method = match self.scan_method {
            ScanMethod::Direct => "direct",
            ScanMethod::Fft => "fft",
        };
        let values = [
            fmt_f64(self.dt_s),
            self.n_bins.to_string(),
            kind.to_string(),
            fmt_f64(self.r),
            fmt_f64(self.flux_b),
            fmt_f64(self.flux_d),
            fmt_f64(self.d_strength),
            fmt_f64(self.eta),
            self.delay_bins.to_string(),
            fmt_f64(self.phi_b_rad),
            fmt_f64(self.env_occupancy),
            self.target_present.to_string(),
            fmt_f64(self.lo_intensity),
            fmt_f64(self.phi1_rad),
            fmt_f64(self.phi2_rad),
            self.max_lag.to_string(),
            self.two_sided.to_string(),
            method.to_string(),
            fmt_f64(self.false_alarm_rate),
            self.n_trials.to_string(),
            self.master_seed.to_string(),
        ];
        let mut out = String::from("# resolved run configuration\n");
        for (k, v) in KEYS.iter().zip(values) {
            out.push_str(&format!("{k} = {v}\n"));
        }
        out
    }
}
