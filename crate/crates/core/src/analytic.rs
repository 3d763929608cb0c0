//! Closed-form predictions of the detection statistic.
//!
//! All predictions are correlation densities squared: the simulator's
//! per-bin statistic `s` at the true lag converges to `prediction / dt²`.

use crate::error::{invalid, Result};
use crate::field_source::{CrossCorrelations, SourceCovariance};

/// Predicted peak of the statistic for a general idler phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatisticPrediction {
    pub value: f64,
    /// Cross-correlation strengths the prediction was built from.
    pub correlations: CrossCorrelations,
    /// Weighted groups: `(C_yy² + C_yx²)·cos²φ₁`, `(C_xy² + C_xx²)·sin²φ₁`,
    /// `(C_yy·C_xy + C_yx·C_xx)·sin 2φ₁`. `value = (η/2)·I²·Σ terms`.
    pub terms: [f64; 3],
}

/// Peak-amplitude convention for the squeezed source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqueezeConvention {
    /// Amplitude `sinh r`, as quoted for the two-mode squeezed coherent state.
    SinhR,
    /// Amplitude `sinh 2r`, consistent with [`crate::field_source::tmsv_covariance`].
    Sinh2R,
}

/// General-φ₁ statistic
/// `(η/2)·I²·{(C_yy² + C_yx²)cos²φ₁ + (C_xy² + C_xx²)sin²φ₁ + (C_yy·C_xy + C_yx·C_xx)sin 2φ₁}`.
///
/// The probe phase `phi` cancels; it is accepted so callers can pass the
/// full configuration.
pub fn predicted_statistic_general(
    eta: f64,
    lo_intensity: f64,
    cov: &SourceCovariance,
    _phi: f64,
    phi1: f64,
) -> StatisticPrediction {
    let c = cov.cross();
    let (s1, c1) = phi1.sin_cos();
    let terms = [
        (c.yy * c.yy + c.yx * c.yx) * c1 * c1,
        (c.xy * c.xy + c.xx * c.xx) * s1 * s1,
        (c.yy * c.xy + c.yx * c.xx) * (2.0 * phi1).sin(),
    ];
    let value = eta / 2.0 * lo_intensity * lo_intensity * (terms[0] + terms[1] + terms[2]);
    StatisticPrediction { value, correlations: c, terms }
}

/// Per-homodyne correlation densities `(⟨θ_D θ_B1⟩, ⟨θ_D θ_B2⟩)` at the true
/// lag for probe phase `phi` and idler phase `phi1`.
pub fn predicted_pair_correlations(
    eta: f64,
    lo_intensity: f64,
    cov: &SourceCovariance,
    phi: f64,
    phi1: f64,
) -> (f64, f64) {
    let c = cov.cross();
    let amp = (eta * lo_intensity * lo_intensity / 2.0).sqrt();
    let (s, co) = phi.sin_cos();
    let (s1, c1) = phi1.sin_cos();
    let first = amp * (-s * c1 * c.yy + co * c1 * c.yx - s * s1 * c.xy + s1 * co * c.xx);
    let second = amp * (co * c1 * c.yy + s * c1 * c.yx + s1 * co * c.xy + s1 * s * c.xx);
    (first, second)
}

/// Statistic read with the idler X quadrature (`φ₁ = π/2`):
/// `(η/2)·I²·(C_xy² + C_xx²)`.
pub fn predicted_statistic_x(eta: f64, lo_intensity: f64, cov: &SourceCovariance) -> f64 {
    let c = cov.cross();
    eta / 2.0 * lo_intensity * lo_intensity * (c.xy * c.xy + c.xx * c.xx)
}

/// Statistic read with the idler Y quadrature (`φ₁ = 0`):
/// `(η/2)·I²·(C_yy² + C_yx²)`.
pub fn predicted_statistic_y(eta: f64, lo_intensity: f64, cov: &SourceCovariance) -> f64 {
    let c = cov.cross();
    eta / 2.0 * lo_intensity * lo_intensity * (c.yy * c.yy + c.yx * c.yx)
}

/// Baseline `C_yy² + C_yx²` used by the Y-quadrature detection rule.
pub fn y_rule_baseline(cov: &SourceCovariance) -> f64 {
    let c = cov.cross();
    c.yy * c.yy + c.yx * c.yx
}

pub fn predicted_quantum_peak(eta: f64, lo_intensity: f64, r: f64, convention: SqueezeConvention) -> Result<f64> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(invalid(format!("squeeze parameter must be >= 0, got {r}")));
    }
    let amp = match convention {
        SqueezeConvention::SinhR => r.sinh(),
        SqueezeConvention::Sinh2R => (2.0 * r).sinh(),
    };
    Ok(eta / 2.0 * lo_intensity * lo_intensity * amp * amp)
}

/// Classical common-phase-noise peak `(η/2)·I²·Ĩ_D·Ĩ_B·𝔇²`.
pub fn predicted_classical_peak(eta: f64, lo_intensity: f64, flux_b: f64, flux_d: f64, d_strength: f64) -> f64 {
    eta / 2.0 * lo_intensity * lo_intensity * flux_d * flux_b * d_strength * d_strength
}

/// Smallest reflectivity the reference intensity can lift above the
/// detection heuristic, `2/I²`.
pub fn min_detectable_eta(lo_intensity: f64) -> Result<f64> {
    if !(lo_intensity.is_finite() && lo_intensity > 0.0) {
        return Err(invalid(format!("reference intensity must be positive, got {lo_intensity}")));
    }
    Ok(2.0 / (lo_intensity * lo_intensity))
}

/// Constant offset `2·√(I_D·I)·sin φ₁` of the idler photocurrent difference.
pub fn idler_dc_offset(lo_intensity: f64, flux_d: f64, phi1: f64) -> f64 {
    2.0 * (flux_d * lo_intensity).sqrt() * phi1.sin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field_source::{tmsv_covariance, SqueezedSourceParams};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn tmsv(r: f64) -> SourceCovariance {
        tmsv_covariance(&SqueezedSourceParams { r, flux_b: 1.0, flux_d: 1.0 }).unwrap()
    }

    /// Covariance with all four idler/probe cross terms populated.
    fn generic_cov() -> SourceCovariance {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 3.0;
        }
        let set = |m: &mut [[f64; 4]; 4], i: usize, j: usize, v: f64| {
            m[i][j] = v;
            m[j][i] = v;
        };
        set(&mut m, 2, 0, 0.9);
        set(&mut m, 2, 1, -0.4);
        set(&mut m, 3, 0, 0.3);
        set(&mut m, 3, 1, 0.7);
        SourceCovariance::new(m).unwrap()
    }

    #[test]
    fn reductions_at_quadrature_phases() {
        let cov = generic_cov();
        let x = predicted_statistic_general(0.02, 300.0, &cov, 0.4, FRAC_PI_2).value;
        assert_relative_eq!(x, predicted_statistic_x(0.02, 300.0, &cov), max_relative = 1e-12);
        let y = predicted_statistic_general(0.02, 300.0, &cov, 0.0, 0.0).value;
        assert_relative_eq!(y, predicted_statistic_y(0.02, 300.0, &cov), max_relative = 1e-12);
        assert_eq!(predicted_statistic_general(0.0, 300.0, &cov, 0.1, 0.7).value, 0.0);
    }

    #[test]
    fn value_is_sum_of_terms() {
        let p = predicted_statistic_general(0.3, 12.0, &generic_cov(), 0.0, 0.9);
        assert_eq!(p.value, 0.3 / 2.0 * 144.0 * (p.terms[0] + p.terms[1] + p.terms[2]));
        assert!(p.value >= 0.0);
    }

    #[test]
    fn tmsv_statistic_is_idler_phase_independent() {
        let cov = tmsv(0.8);
        let x = predicted_statistic_x(0.01, 1e3, &cov);
        let y = predicted_statistic_y(0.01, 1e3, &cov);
        assert_relative_eq!(x, y, max_relative = 1e-14);
        for phi1 in [0.0, 0.3, 1.0, 2.0] {
            let v = predicted_statistic_general(0.01, 1e3, &cov, 0.0, phi1).value;
            assert_relative_eq!(v, x, max_relative = 1e-12);
        }
    }

    #[test]
    fn quantum_peak_values() {
        assert_eq!(predicted_quantum_peak(0.01, 1e3, 0.0, SqueezeConvention::SinhR).unwrap(), 0.0);
        assert_eq!(predicted_quantum_peak(0.01, 1e3, 0.0, SqueezeConvention::Sinh2R).unwrap(), 0.0);
        // 5000·sinh²(1) and 5000·sinh²(2)
        let single = predicted_quantum_peak(0.01, 1e3, 1.0, SqueezeConvention::SinhR).unwrap();
        assert_relative_eq!(single, 6_905.489_227_709_079, max_relative = 1e-10);
        let standard = predicted_quantum_peak(0.01, 1e3, 1.0, SqueezeConvention::Sinh2R).unwrap();
        assert_relative_eq!(standard, 65_770.582_090_041_2, max_relative = 1e-10);
        assert_relative_eq!(standard, predicted_statistic_x(0.01, 1e3, &tmsv(1.0)), max_relative = 1e-12);
        assert!(predicted_quantum_peak(0.01, 1e3, -1.0, SqueezeConvention::SinhR).is_err());
    }

    #[test]
    fn classical_peak_and_ratio() {
        assert_relative_eq!(predicted_classical_peak(0.01, 1e3, 1.0, 1.0, 0.1), 50.0, max_relative = 1e-12);
        assert_eq!(predicted_classical_peak(0.01, 1e3, 1.0, 1.0, 0.0), 0.0);
        let q = predicted_quantum_peak(0.01, 1e3, 1.0, SqueezeConvention::SinhR).unwrap();
        let c = predicted_classical_peak(0.01, 1e3, 1.0, 1.0, 0.1);
        assert_relative_eq!(q / c, 138.109_784_554_181_6, max_relative = 1e-10);
    }

    #[test]
    fn detectability_bound() {
        assert_relative_eq!(min_detectable_eta(1e3).unwrap(), 2e-6, max_relative = 1e-15);
        assert_relative_eq!(min_detectable_eta(2f64.sqrt()).unwrap(), 1.0, max_relative = 1e-15);
        assert!(min_detectable_eta(0.0).is_err());
        let mut prev = f64::INFINITY;
        for i in [0.5, 1.0, 10.0, 1e2, 1e5] {
            let e = min_detectable_eta(i).unwrap();
            assert!(e < prev);
            prev = e;
        }
    }

    #[test]
    fn dc_offset() {
        assert_relative_eq!(idler_dc_offset(100.0, 4.0, FRAC_PI_2), 40.0);
        assert_eq!(idler_dc_offset(100.0, 4.0, 0.0), 0.0);
    }

    proptest! {
        #[test]
        fn general_statistic_matches_pair_route(
            eta in 0.0f64..1.0,
            lo in 1.0f64..1e4,
            phi in -6.3f64..6.3,
            phi1 in -6.3f64..6.3,
        ) {
            let cov = generic_cov();
            let (a, b) = predicted_pair_correlations(eta, lo, &cov, phi, phi1);
            let general = predicted_statistic_general(eta, lo, &cov, phi, phi1).value;
            prop_assert!((a * a + b * b - general).abs() <= 1e-12 * general.abs().max(1e-300) + 1e-9);
            prop_assert!(general >= -1e-9);
            let doubled = predicted_statistic_general(eta, 2.0 * lo, &cov, phi, phi1).value;
            prop_assert!((doubled - 4.0 * general).abs() <= 1e-12 * doubled.abs() + 1e-9);
        }
    }
}
