//! Gaussian quadrature-fluctuation sources.
//!
//! Fields are represented by real Wigner samples of their quadrature
//! fluctuations `X = δ† + δ` and `Y = i(δ† − δ)`. For Gaussian states the
//! symmetrized quantum correlators equal the classical moments of these
//! samples, so every downstream correlation is a plain sample average.
//!
//! White noise with spectral strength `V` is discretized on a [`SimGrid`] as
//! independent per-bin samples of variance `V / dt`, which keeps estimated
//! correlation densities independent of the bin width.

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Error, Result};
use crate::seed::rng_from_seed;

/// Time discretization shared by all records of a trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimGrid {
    dt: f64,
    n_bins: usize,
}

impl SimGrid {
    pub fn new(dt: f64, n_bins: usize) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(invalid(format!("dt must be positive, got {dt}")));
        }
        if n_bins < 2 {
            return Err(invalid(format!("n_bins must be at least 2, got {n_bins}")));
        }
        Ok(Self { dt, n_bins })
    }

    /// Time per bin in seconds.
    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_bins(&self) -> usize {
        self.n_bins
    }

    /// Record duration in seconds.
    pub fn duration(&self) -> f64 {
        self.dt * self.n_bins as f64
    }
}

/// Index of `X_B` in a [`SourceCovariance`].
pub const XB: usize = 0;
/// Index of `Y_B` in a [`SourceCovariance`].
pub const YB: usize = 1;
/// Index of `X_D` in a [`SourceCovariance`].
pub const XD: usize = 2;
/// Index of `Y_D` in a [`SourceCovariance`].
pub const YD: usize = 3;

/// Idler/probe cross-correlation strengths `C_ab = ⟨A_D B_B⟩`, in spectral
/// units (per-bin covariance times `dt`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCorrelations {
    /// ⟨X_D X_B⟩
    pub xx: f64,
    /// ⟨X_D Y_B⟩
    pub xy: f64,
    /// ⟨Y_D X_B⟩
    pub yx: f64,
    /// ⟨Y_D Y_B⟩
    pub yy: f64,
}

/// Symmetric 4×4 covariance over `(X_B, Y_B, X_D, Y_D)` in spectral units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceCovariance {
    m: [[f64; 4]; 4],
}

impl SourceCovariance {
    /// Validates symmetry and positive semidefiniteness.
    pub fn new(m: [[f64; 4]; 4]) -> Result<Self> {
        let scale = m.iter().flatten().fold(1.0_f64, |acc, v| acc.max(v.abs()));
        for (i, row) in m.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(invalid("covariance entries must be finite"));
                }
                if (v - m[j][i]).abs() > 1e-12 * scale {
                    return Err(invalid(format!("covariance is not symmetric at ({i}, {j})")));
                }
            }
        }
        let cov = Self { m };
        let min_eig = cov.eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        if min_eig < -1e-12 * scale {
            return Err(Error::NotPositiveSemidefinite(min_eig));
        }
        Ok(cov)
    }

    pub fn zeros() -> Self {
        Self { m: [[0.0; 4]; 4] }
    }

    pub fn matrix(&self) -> &[[f64; 4]; 4] {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    pub fn cross(&self) -> CrossCorrelations {
        CrossCorrelations { xx: self.m[XD][XB], xy: self.m[XD][YB], yx: self.m[YD][XB], yy: self.m[YD][YB] }
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        let e = SymmetricEigen::new(self.as_matrix()).eigenvalues;
        [e[0], e[1], e[2], e[3]]
    }

    fn as_matrix(&self) -> Matrix4<f64> {
        Matrix4::from_fn(|i, j| self.m[i][j])
    }

    /// Symmetric square root `S` with `S·S = m`, negative round-off
    /// eigenvalues clamped to zero.
    fn sqrt_factor(&self) -> Result<Matrix4<f64>> {
        let eig = SymmetricEigen::new(self.as_matrix());
        let scale = eig.eigenvalues.amax().max(1.0);
        let mut root = Vector4::zeros();
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda < -1e-12 * scale {
                return Err(Error::NotPositiveSemidefinite(lambda));
            }
            root[k] = lambda.max(0.0).sqrt();
        }
        Ok(eig.eigenvectors * Matrix4::from_diagonal(&root) * eig.eigenvectors.transpose())
    }
}

/// Two-mode squeezed source parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedSourceParams {
    /// Squeeze parameter r.
    pub r: f64,
    /// Mean probe flux I_B in photons/s.
    pub flux_b: f64,
    /// Mean idler flux I_D in photons/s.
    pub flux_d: f64,
}

impl SqueezedSourceParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.r.is_finite() && self.r >= 0.0) {
            return Err(invalid(format!("squeeze parameter must be >= 0, got {}", self.r)));
        }
        check_flux("flux_b", self.flux_b)?;
        check_flux("flux_d", self.flux_d)
    }
}

/// Classical common-phase-noise source parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalSourceParams {
    /// Phase-noise correlation strength, `⟨δ(t)δ(t')⟩ = d_strength·δ(t − t')`.
    pub d_strength: f64,
    /// Classical probe intensity in Hz.
    pub flux_b: f64,
    /// Classical idler intensity in Hz.
    pub flux_d: f64,
}

impl Default for ClassicalSourceParams {
    fn default() -> Self {
        Self { d_strength: 0.1, flux_b: 1.0, flux_d: 1.0 }
    }
}

impl ClassicalSourceParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.d_strength >= 0.0 && self.d_strength < 1.0) {
            return Err(invalid(format!("phase-noise strength must lie in [0, 1), got {}", self.d_strength)));
        }
        check_flux("flux_b", self.flux_b)?;
        check_flux("flux_d", self.flux_d)
    }
}

fn check_flux(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be >= 0, got {v}")))
    }
}

/// Sampled `(X, Y)` fluctuation time series of one optical mode.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRecord {
    pub grid: SimGrid,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl QuadratureRecord {
    pub fn new(grid: SimGrid, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != grid.n_bins() || y.len() != grid.n_bins() {
            return Err(invalid(format!(
                "record length ({}, {}) does not match n_bins {}",
                x.len(),
                y.len(),
                grid.n_bins()
            )));
        }
        if x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(invalid("record entries must be finite"));
        }
        Ok(Self { grid, x, y })
    }

    pub fn zeros(grid: SimGrid) -> Self {
        Self { grid, x: vec![0.0; grid.n_bins()], y: vec![0.0; grid.n_bins()] }
    }
}

/// Shared classical phase-noise record δ̃(t).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseNoiseRecord {
    pub grid: SimGrid,
    pub delta: Vec<f64>,
}

impl PhaseNoiseRecord {
    /// Fraction of samples outside the small-angle regime `|δ̃| < 1`.
    pub fn small_angle_violation(&self) -> f64 {
        let n = self.delta.iter().filter(|d| d.abs() >= 1.0).count();
        n as f64 / self.delta.len() as f64
    }
}

/// Two-mode squeezed vacuum covariance in the `X = δ + δ†`, `Y = i(δ† − δ)`
/// convention: `cosh 2r` on the diagonal, `⟨X_B X_D⟩ = sinh 2r`,
/// `⟨Y_B Y_D⟩ = −sinh 2r`.
pub fn tmsv_covariance(params: &SqueezedSourceParams) -> Result<SourceCovariance> {
    params.validate()?;
    let c = (2.0 * params.r).cosh();
    let s = (2.0 * params.r).sinh();
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = c;
    }
    m[XB][XD] = s;
    m[XD][XB] = s;
    m[YB][YD] = -s;
    m[YD][YB] = -s;
    Ok(SourceCovariance { m })
}

/// Draws independent per-bin 4-vectors with covariance `m / dt` and splits
/// them into the probe (B) and idler (D) records.
pub fn sample_entangled_records(
    cov: &SourceCovariance,
    grid: SimGrid,
    seed: u64,
) -> Result<(QuadratureRecord, QuadratureRecord)> {
    let factor = cov.sqrt_factor()? / grid.dt().sqrt();
    let n = grid.n_bins();
    let mut rng = rng_from_seed(seed);
    let mut b = QuadratureRecord::zeros(grid);
    let mut d = QuadratureRecord::zeros(grid);
    for t in 0..n {
        let z = Vector4::from_fn(|_, _| StandardNormal.sample(&mut rng));
        let v = factor * z;
        b.x[t] = v[XB];
        b.y[t] = v[YB];
        d.x[t] = v[XD];
        d.y[t] = v[YD];
    }
    Ok((b, d))
}

/// Phase-insensitive thermal field with mean occupancy `occupancy`; each
/// quadrature has per-bin variance `(2·N + 1) / dt`.
pub fn sample_thermal_record(occupancy: f64, grid: SimGrid, seed: u64) -> Result<QuadratureRecord> {
    if !(occupancy.is_finite() && occupancy >= 0.0) {
        return Err(invalid(format!("occupancy must be >= 0, got {occupancy}")));
    }
    let sd = ((2.0 * occupancy + 1.0) / grid.dt()).sqrt();
    let mut rng = rng_from_seed(seed);
    let n = grid.n_bins();
    let mut rec = QuadratureRecord::zeros(grid);
    for t in 0..n {
        let gx: f64 = StandardNormal.sample(&mut rng);
        let gy: f64 = StandardNormal.sample(&mut rng);
        rec.x[t] = sd * gx;
        rec.y[t] = sd * gy;
    }
    Ok(rec)
}

/// Vacuum fluctuations, per-bin variance `1 / dt` in both quadratures.
pub fn sample_vacuum_record(grid: SimGrid, seed: u64) -> QuadratureRecord {
    sample_thermal_record(0.0, grid, seed).expect("zero occupancy is valid")
}

/// Common phase noise with per-bin variance `d_strength / dt`. The same
/// record drives both classical beams.
pub fn sample_phase_noise_record(params: &ClassicalSourceParams, grid: SimGrid, seed: u64) -> Result<PhaseNoiseRecord> {
    params.validate()?;
    let sd = (params.d_strength / grid.dt()).sqrt();
    let mut rng = rng_from_seed(seed);
    let delta = (0..grid.n_bins())
        .map(|_| {
            let g: f64 = StandardNormal.sample(&mut rng);
            sd * g
        })
        .collect();
    Ok(PhaseNoiseRecord { grid, delta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid(n: usize) -> SimGrid {
        SimGrid::new(1.0, n).unwrap()
    }

    fn tmsv(r: f64) -> SourceCovariance {
        tmsv_covariance(&SqueezedSourceParams { r, flux_b: 1.0, flux_d: 1.0 }).unwrap()
    }

    /// Sample mean of `a·b` and its standard error.
    fn mean_se(a: &[f64], b: &[f64]) -> (f64, f64) {
        let n = a.len() as f64;
        let prods: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
        let mean = prods.iter().sum::<f64>() / n;
        let var = prods.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    }

    #[test]
    fn grid_validation() {
        assert!(SimGrid::new(0.0, 10).is_err());
        assert!(SimGrid::new(-1.0, 10).is_err());
        assert!(SimGrid::new(f64::NAN, 10).is_err());
        assert!(SimGrid::new(1.0, 1).is_err());
        assert!(SimGrid::new(1e-9, 2).is_ok());
    }

    #[test]
    fn vacuum_limit_is_identity() {
        let m = tmsv(0.0);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(m.get(i, j), if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn tmsv_entries_at_r_one() {
        let m = tmsv(1.0);
        // cosh 2 and sinh 2
        assert_relative_eq!(m.get(XB, XB), 3.762_195_691_083_631, max_relative = 1e-14);
        assert_relative_eq!(m.get(XB, XD), 3.626_860_407_847_019, max_relative = 1e-14);
        assert_relative_eq!(m.get(YB, YD), -3.626_860_407_847_019, max_relative = 1e-14);
        assert_eq!(m.get(XB, YD), 0.0);
        assert_eq!(m.get(YB, XD), 0.0);
        assert_eq!(m.get(XB, YB), 0.0);
    }

    #[test]
    fn tmsv_is_symmetric_psd() {
        for r in [0.0, 0.1, 0.5, 1.0, 2.0, 3.0] {
            let m = tmsv(r);
            for i in 0..4 {
                for j in 0..4 {
                    assert_eq!(m.get(i, j), m.get(j, i));
                }
            }
            // eigenvalues e^{±2r}
            let min = m.eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
            assert!(min > 0.0);
            assert_relative_eq!(min, (-2.0 * r).exp(), max_relative = 1e-6);
        }
    }

    #[test]
    fn negative_squeezing_rejected() {
        let p = SqueezedSourceParams { r: -0.1, flux_b: 1.0, flux_d: 1.0 };
        assert!(matches!(tmsv_covariance(&p), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn non_psd_rejected() {
        let mut m = [[0.0; 4]; 4];
        m[0][0] = 1.0;
        m[0][1] = 2.0;
        m[1][0] = 2.0;
        m[1][1] = 1.0;
        assert!(matches!(SourceCovariance::new(m), Err(Error::NotPositiveSemidefinite(_))));
        m[1][0] = 1.5;
        assert!(matches!(SourceCovariance::new(m), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn zero_covariance_gives_zero_records() {
        let (b, d) = sample_entangled_records(&SourceCovariance::zeros(), grid(1000), 1).unwrap();
        assert!(b.x.iter().chain(&b.y).chain(&d.x).chain(&d.y).all(|v| *v == 0.0));
    }

    #[test]
    fn entangled_cross_moment_matches_sinh() {
        let n = 1_000_000;
        let (b, d) = sample_entangled_records(&tmsv(0.5), grid(n), 11).unwrap();
        let (mean, se) = mean_se(&b.x, &d.x);
        assert!((mean - 1.0_f64.sinh()).abs() < 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn sampling_is_deterministic() {
        let g = grid(500);
        let a = sample_entangled_records(&tmsv(0.7), g, 99).unwrap();
        let b = sample_entangled_records(&tmsv(0.7), g, 99).unwrap();
        assert_eq!(a, b);
        let c = sample_entangled_records(&tmsv(0.7), g, 100).unwrap();
        assert_ne!(a, c);
        assert_eq!(sample_vacuum_record(g, 5), sample_vacuum_record(g, 5));
        let p = ClassicalSourceParams::default();
        assert_eq!(sample_phase_noise_record(&p, g, 3).unwrap(), sample_phase_noise_record(&p, g, 3).unwrap());
    }

    #[test]
    fn per_bin_variance_scales_with_inverse_dt() {
        let g = SimGrid::new(0.25, 200_000).unwrap();
        let v = sample_vacuum_record(g, 8);
        let (var, se) = mean_se(&v.x, &v.x);
        assert!((var - 4.0).abs() < 3.0 * se);
    }

    #[test]
    fn thermal_variance_and_independence() {
        let n = 1_000_000;
        let g = grid(n);
        let e = sample_thermal_record(10.0, g, 21).unwrap();
        let (var, se) = mean_se(&e.x, &e.x);
        assert!((var - 21.0).abs() < 3.0 * se, "var {var} se {se}");
        let (b, _) = sample_entangled_records(&tmsv(0.5), g, 22).unwrap();
        let (c, se) = mean_se(&e.x, &b.x);
        assert!(c.abs() < 3.0 * se);
        assert!(sample_thermal_record(-1.0, g, 1).is_err());
    }

    #[test]
    fn vacuum_moments() {
        let n = 1_000_000;
        let v = sample_vacuum_record(grid(n), 4);
        let (var, se) = mean_se(&v.x, &v.x);
        assert!((var - 1.0).abs() < 3.0 * se);
        let (c, se) = mean_se(&v.x, &v.y);
        assert!(c.abs() < 3.0 * se);
    }

    #[test]
    fn phase_noise_moments() {
        let g = grid(1_000_000);
        let zero = ClassicalSourceParams { d_strength: 0.0, ..Default::default() };
        assert!(sample_phase_noise_record(&zero, g, 1).unwrap().delta.iter().all(|d| *d == 0.0));

        let p = ClassicalSourceParams { d_strength: 0.01, ..Default::default() };
        let rec = sample_phase_noise_record(&p, g, 2).unwrap();
        let (var, se) = mean_se(&rec.delta, &rec.delta);
        assert!((var - 0.01).abs() < 3.0 * se);
        // |δ| >= 1 is a 10-sigma event at this strength.
        assert_eq!(rec.small_angle_violation(), 0.0);

        let bad = ClassicalSourceParams { d_strength: 1.0, ..Default::default() };
        assert!(sample_phase_noise_record(&bad, g, 1).is_err());
    }
}
