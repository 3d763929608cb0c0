//! Balanced homodyne readout in the linearized-fluctuation picture.
//!
//! Each detector output is the fluctuating part of the photocurrent
//! difference; the constant term from the mean fields is dropped (see
//! [`crate::analytic::idler_dc_offset`]). All reference fields are coherent
//! and contribute vacuum-level fluctuations of their own.

use crate::channel::ReceivedComponents;
use crate::error::{invalid, Error, Result};
use crate::field_source::{ClassicalSourceParams, PhaseNoiseRecord, QuadratureRecord, SimGrid};

/// Shared homodyne settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomodyneConfig {
    /// Reference intensity I in photons/s, common to all three references.
    pub lo_intensity: f64,
    /// Idler reference phase φ₁, radians.
    pub phi1: f64,
    /// Phase φ₂ of the two phase-locked probe references, radians.
    pub phi2: f64,
}

impl Default for HomodyneConfig {
    fn default() -> Self {
        Self { lo_intensity: 1e3, phi1: std::f64::consts::FRAC_PI_2, phi2: 0.0 }
    }
}

impl HomodyneConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lo_intensity.is_finite() && self.lo_intensity > 0.0) {
            return Err(invalid(format!("reference intensity must be positive, got {}", self.lo_intensity)));
        }
        if !(self.phi1.is_finite() && self.phi2.is_finite()) {
            return Err(invalid("homodyne phases must be finite"));
        }
        Ok(())
    }
}

/// Photocurrent-fluctuation time series of one homodyne.
#[derive(Debug, Clone, PartialEq)]
pub struct FluctuationRecord {
    pub grid: SimGrid,
    pub theta: Vec<f64>,
}

fn same_grid(grid: SimGrid, records: &[&QuadratureRecord]) -> Result<()> {
    if records.iter().all(|r| r.grid == grid) {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

/// Idler homodyne output
/// `θ_D = cos φ₁·(√I·Y_D − √I_D·Y_D1) + sin φ₁·(√I·X_D + √I_D·X_D1)`.
pub fn idler_homodyne(
    idler: &QuadratureRecord,
    lo_fluct: &QuadratureRecord,
    lo_intensity: f64,
    flux_d: f64,
    phi1: f64,
) -> Result<FluctuationRecord> {
    same_grid(idler.grid, &[lo_fluct])?;
    let si = lo_intensity.sqrt();
    let sd = flux_d.sqrt();
    let (s1, c1) = phi1.sin_cos();
    let theta = (0..idler.grid.n_bins())
        .map(|t| c1 * (si * idler.y[t] - sd * lo_fluct.y[t]) + s1 * (si * idler.x[t] + sd * lo_fluct.x[t]))
        .collect();
    Ok(FluctuationRecord { grid: idler.grid, theta })
}

/// Receiver-noise contributions `(θ_B1, θ_B2)` of one bin: the environment
/// and vacuum beat terms expanded into rotated quadratures.
#[inline]
fn receiver_noise(rc: &ReceivedComponents, t: usize, env_amp: f64, vac_amp: f64, phi2: (f64, f64)) -> (f64, f64) {
    let (s2, c2) = phi2;
    let (xe, ye) = (rc.env.x[t], rc.env.y[t]);
    let (xv, yv) = (rc.vac.x[t], rc.vac.y[t]);
    let n1 = env_amp * (c2 * xe + s2 * ye) + vac_amp * (c2 * yv - s2 * xv);
    let n2 = env_amp * (c2 * ye - s2 * xe) + vac_amp * (c2 * xv + s2 * yv);
    (n1, n2)
}

fn check_eta(eta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&eta) {
        Ok(())
    } else {
        Err(invalid(format!("effective eta must lie in [0, 1], got {eta}")))
    }
}

/// The two probe homodynes, with `φ = φ_B − φ₂`:
///
/// ```text
/// θ_B1 = √(η/2)·{−sin φ·(√I·Y_B − √I_B·Y_B1) + cos φ·(√I·X_B + √I_B·X_B1)}
///        + √((1−η)I/2)·(cos φ₂·X_E + sin φ₂·Y_E) + √(I/2)·(cos φ₂·Y_V − sin φ₂·X_V)
/// θ_B2 = √(η/2)·{ cos φ·(√I·Y_B − √I_B·Y_B2) + sin φ·(√I·X_B + √I_B·X_B2)}
///        + √((1−η)I/2)·(cos φ₂·Y_E − sin φ₂·X_E) + √(I/2)·(cos φ₂·X_V + sin φ₂·Y_V)
/// ```
pub fn probe_homodyne_pair(
    rc: &ReceivedComponents,
    lo1_fluct: &QuadratureRecord,
    lo2_fluct: &QuadratureRecord,
    lo_intensity: f64,
    flux_b: f64,
    phi: f64,
    phi2: f64,
) -> Result<(FluctuationRecord, FluctuationRecord)> {
    let grid = rc.probe_delayed.grid;
    same_grid(grid, &[&rc.env, &rc.vac, lo1_fluct, lo2_fluct])?;
    let eta = rc.effective_eta;
    check_eta(eta)?;

    let sig_amp = (eta / 2.0).sqrt();
    let env_amp = ((1.0 - eta) * lo_intensity / 2.0).sqrt();
    let vac_amp = (lo_intensity / 2.0).sqrt();
    let si = lo_intensity.sqrt();
    let sb = flux_b.sqrt();
    let (s, c) = phi.sin_cos();
    let rot2 = phi2.sin_cos();
    let b = &rc.probe_delayed;

    let n = grid.n_bins();
    let mut theta1 = Vec::with_capacity(n);
    let mut theta2 = Vec::with_capacity(n);
    for t in 0..n {
        let (n1, n2) = receiver_noise(rc, t, env_amp, vac_amp, rot2);
        let y1 = si * b.y[t] - sb * lo1_fluct.y[t];
        let x1 = si * b.x[t] + sb * lo1_fluct.x[t];
        let y2 = si * b.y[t] - sb * lo2_fluct.y[t];
        let x2 = si * b.x[t] + sb * lo2_fluct.x[t];
        theta1.push(sig_amp * (-s * y1 + c * x1) + n1);
        theta2.push(sig_amp * (c * y2 + s * x2) + n2);
    }
    Ok((FluctuationRecord { grid, theta: theta1 }, FluctuationRecord { grid, theta: theta2 }))
}

/// Classical idler homodyne, small-angle form `θ̃_D = √(I·Ĩ_D)·δ̃(t)`.
pub fn classical_idler_homodyne(
    delta: &PhaseNoiseRecord,
    params: &ClassicalSourceParams,
    lo_intensity: f64,
) -> FluctuationRecord {
    let gain = (lo_intensity * params.flux_d).sqrt();
    FluctuationRecord { grid: delta.grid, theta: delta.delta.iter().map(|d| gain * d).collect() }
}

/// Classical probe homodynes. `rc.probe_delayed.x` carries the delayed
/// phase-noise record δ̃(t₁); `rc.probe_delayed.y` is ignored.
///
/// `θ̃_B1 = −√(η/2)·sin φ·√(I·Ĩ_B)·δ̃ + noise`, `θ̃_B2 = √(η/2)·cos φ·√(I·Ĩ_B)·δ̃ + noise`,
/// with the same receiver-noise terms as [`probe_homodyne_pair`].
pub fn classical_probe_homodyne_pair(
    rc: &ReceivedComponents,
    params: &ClassicalSourceParams,
    lo_intensity: f64,
    phi: f64,
    phi2: f64,
) -> Result<(FluctuationRecord, FluctuationRecord)> {
    let grid = rc.probe_delayed.grid;
    same_grid(grid, &[&rc.env, &rc.vac])?;
    let eta = rc.effective_eta;
    check_eta(eta)?;

    let gain = (eta / 2.0).sqrt() * (lo_intensity * params.flux_b).sqrt();
    let env_amp = ((1.0 - eta) * lo_intensity / 2.0).sqrt();
    let vac_amp = (lo_intensity / 2.0).sqrt();
    let (s, c) = phi.sin_cos();
    let rot2 = phi2.sin_cos();
    let delta = &rc.probe_delayed.x;

    let n = grid.n_bins();
    let mut theta1 = Vec::with_capacity(n);
    let mut theta2 = Vec::with_capacity(n);
    for (t, d) in delta.iter().enumerate() {
        let (n1, n2) = receiver_noise(rc, t, env_amp, vac_amp, rot2);
        theta1.push(-s * gain * d + n1);
        theta2.push(c * gain * d + n2);
    }
    Ok((FluctuationRecord { grid, theta: theta1 }, FluctuationRecord { grid, theta: theta2 }))
}
