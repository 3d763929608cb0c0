//! Target interaction: round-trip delay, reflectivity and receiver noise.

use crate::error::{invalid, Error, Result};
use crate::field_source::{sample_thermal_record, sample_vacuum_record, QuadratureRecord, SimGrid};

/// Propagation and target parameters for one trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    /// Target reflectivity in `[0, 1]`.
    pub eta: f64,
    /// Round-trip delay in whole bins.
    pub delay_bins: usize,
    /// Phase acquired by the probe along its path, radians.
    pub phi_b: f64,
    /// Mean photon number of the thermal environment.
    pub env_occupancy: f64,
    pub target_present: bool,
}

impl ChannelParams {
    pub fn validate(&self, grid: &SimGrid) -> Result<()> {
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(invalid(format!("eta must lie in [0, 1], got {}", self.eta)));
        }
        if self.delay_bins >= grid.n_bins() {
            return Err(invalid(format!(
                "delay of {} bins does not fit in a record of {} bins",
                self.delay_bins,
                grid.n_bins()
            )));
        }
        if !self.phi_b.is_finite() {
            return Err(invalid("phi_b must be finite"));
        }
        if !(self.env_occupancy.is_finite() && self.env_occupancy >= 0.0) {
            return Err(invalid(format!("environment occupancy must be >= 0, got {}", self.env_occupancy)));
        }
        Ok(())
    }

    /// Reflectivity actually applied: zero when no target is present.
    pub fn effective_eta(&self) -> f64 {
        if self.target_present {
            self.eta
        } else {
            0.0
        }
    }
}

/// Seeds of the receiver-side noise streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelSeeds {
    pub env: u64,
    pub vac: u64,
}

/// Everything the probe homodynes see, aligned on the receiver clock.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedComponents {
    /// Probe fluctuations shifted by the round-trip delay, zero before arrival.
    pub probe_delayed: QuadratureRecord,
    pub env: QuadratureRecord,
    pub vac: QuadratureRecord,
    pub effective_eta: f64,
    pub phi_b: f64,
}

/// `out[n] = samples[n - delay]` for `n >= delay`, zero before.
pub fn delay_samples(samples: &[f64], delay: usize) -> Vec<f64> {
    let n = samples.len();
    let mut out = vec![0.0; n];
    if delay < n {
        out[delay..].copy_from_slice(&samples[..n - delay]);
    }
    out
}

pub fn prepare_received_components(
    probe: &QuadratureRecord,
    params: &ChannelParams,
    grid: SimGrid,
    seeds: ChannelSeeds,
) -> Result<ReceivedComponents> {
    if probe.grid != grid {
        return Err(Error::GridMismatch);
    }
    params.validate(&grid)?;
    let probe_delayed = QuadratureRecord {
        grid,
        x: delay_samples(&probe.x, params.delay_bins),
        y: delay_samples(&probe.y, params.delay_bins),
    };
    Ok(ReceivedComponents {
        probe_delayed,
        env: sample_thermal_record(params.env_occupancy, grid, seeds.env)?,
        vac: sample_vacuum_record(grid, seeds.vac),
        effective_eta: params.effective_eta(),
        phi_b: params.phi_b,
    })
}
