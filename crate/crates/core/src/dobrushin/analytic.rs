//! Closed-form reference curve for the dephasing channel with Hamiltonian σ₃,
//! used as the test oracle. Two independent evaluation paths are provided:
//! the piecewise formula, and a direct construction of optimal Bloch-vector
//! pairs pushed through the channel.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::operator::{trace_norm, HermitianOperator};

use super::channel::dephasing_channel;

fn validate(a: f64, e: f64, delta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&a) {
        return Err(CoreError::ParameterRange(format!("a = {a} outside [0, 1]")));
    }
    if !(-1.0 < e && e <= 0.0) {
        return Err(CoreError::ParameterRange(format!(
            "E = {e} outside (-1, 0]"
        )));
    }
    if !(0.0..=2.0).contains(&delta) {
        return Err(CoreError::ParameterRange(format!(
            "delta = {delta} outside [0, 2]"
        )));
    }
    Ok(())
}

/// Piecewise closed form of the dephasing Dobrushin curve (H = σ₃, energy
/// bound E ≤ 0). Breakpoints at 1−|E|, √(2(1−|E|)) and 2√(1−E²), with the
/// plateau value 2a√(1−E²) beyond the last.
pub fn analytic_dephasing_curve(a: f64, e: f64, delta: f64) -> Result<f64> {
    validate(a, e, delta)?;
    let ea = e.abs();
    let d1 = 1.0 - ea;
    let d2 = (2.0 * (1.0 - ea)).sqrt();
    let d3 = 2.0 * (1.0 - e * e).sqrt();
    let v = if delta <= d1 {
        delta
    } else if delta <= d2 {
        (a * a * (delta * delta - d1 * d1) + d1 * d1).sqrt()
    } else if delta <= d3 {
        let beta = 2.0 * (delta / 2.0).acos() + ea.acos();
        let horizontal = a * ((1.0 - e * e).sqrt() + beta.sin());
        let vertical = ea + beta.cos();
        (vertical * vertical + horizontal * horizontal).sqrt()
    } else {
        2.0 * a * (1.0 - e * e).sqrt()
    };
    Ok(v)
}

/// Independent evaluation path: constructs the optimal pair of Bloch vectors
/// for each regime, applies the dephasing channel to the corresponding
/// states, and measures the output trace distance.
pub fn analytic_dephasing_curve_states(a: f64, e: f64, delta: f64) -> Result<f64> {
    validate(a, e, delta)?;
    let (w0, w1) = optimal_bloch_pair(e, delta);
    let phi = dephasing_channel(a)?;
    let rho0 = bloch_state(&w0);
    let rho1 = bloch_state(&w1);
    trace_norm(&(&phi.apply(&rho0) - &phi.apply(&rho1)))
}

/// The dephasing Dobrushin curve itself: the running maximum of
/// [`analytic_dephasing_curve`] over distances up to δ.
///
/// The piecewise form describes optimal pairs at each exact input distance;
/// the curve F_E(δ) constrains the distance by an inequality, so it is the
/// monotone envelope of those values. For a = 0.5, E = −0.5 the two agree;
/// for smaller a the piecewise form dips on part of the third regime and the
/// envelope plateaus at its maximum. Evaluated on a fixed grid of step 1e-4,
/// so values carry a discretization error below 1e-4.
pub fn dephasing_curve_reference(a: f64, e: f64, delta: f64) -> Result<f64> {
    validate(a, e, delta)?;
    let step = 1e-4;
    let mut best = analytic_dephasing_curve(a, e, delta)?;
    let mut d = 0.0;
    while d < delta {
        best = best.max(analytic_dephasing_curve(a, e, d)?);
        d += step;
    }
    Ok(best)
}

/// Optimal input Bloch vectors (w₀, w₁) for the dephasing curve at (E, δ);
/// both satisfy the energy constraint w₃ ≤ E and are at trace distance
/// min(δ, 2√(1−E²)).
pub fn optimal_bloch_pair(e: f64, delta: f64) -> ([f64; 3], [f64; 3]) {
    let ea = e.abs();
    let d1 = 1.0 - ea;
    let d2 = (2.0 * (1.0 - ea)).sqrt();
    let d3 = 2.0 * (1.0 - e * e).sqrt();
    if delta <= d1 {
        // Both on the σ₃ axis near the ground state.
        ([0.0, 0.0, -1.0], [0.0, 0.0, -1.0 + delta])
    } else if delta <= d2 {
        // One pure ground state, one on the energy plane w₃ = E.
        let x = (delta * delta - d1 * d1).max(0.0).sqrt();
        ([0.0, 0.0, -1.0], [x, 0.0, -ea])
    } else if delta <= d3 {
        // Both pure: one on the energy plane, the other at chord distance δ.
        let phi_ang = ea.asin();
        let theta = (delta / 2.0).asin();
        let alpha = 2.0 * theta + phi_ang - std::f64::consts::FRAC_PI_2;
        (
            [-alpha.sin(), 0.0, -alpha.cos()],
            [phi_ang.cos(), 0.0, -phi_ang.sin()],
        )
    } else {
        // No pairs in G_E are farther apart than d3.
        let x = (1.0 - e * e).sqrt();
        ([-x, 0.0, e], [x, 0.0, e])
    }
}

fn bloch_state(w: &[f64; 3]) -> HermitianOperator {
    let z = Complex64::new;
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[
            z(1.0 + w[2], 0.0),
            z(w[0], -w[1]),
            z(w[0], w[1]),
            z(1.0 - w[2], 0.0),
        ],
    )
    .scale(0.5);
    HermitianOperator::symmetrize(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn reference_values() {
        // a = 0.5, E = −0.5: regime I, the g_E branch at its right end, and
        // the plateau.
        assert_abs_diff_eq!(
            analytic_dephasing_curve(0.5, -0.5, 0.25).unwrap(),
            0.25,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            analytic_dephasing_curve(0.5, -0.5, 1.0).unwrap(),
            0.4375f64.sqrt(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            analytic_dephasing_curve(0.5, -0.5, 1.9).unwrap(),
            0.75f64.sqrt(),
            epsilon = 1e-9
        );
    }

    #[test]
    fn both_paths_agree() {
        for &a in &[0.3, 0.5, 0.8, 1.0] {
            for &e in &[-0.2, -0.5, -0.75] {
                for i in 0..=200 {
                    let delta = 2.0 * i as f64 / 200.0;
                    let f = analytic_dephasing_curve(a, e, delta).unwrap();
                    let s = analytic_dephasing_curve_states(a, e, delta).unwrap();
                    assert!(
                        (f - s).abs() <= 1e-9,
                        "a={a} e={e} delta={delta}: formula {f} vs states {s}"
                    );
                }
            }
        }
    }

    #[test]
    fn constructed_pairs_are_admissible() {
        for &e in &[-0.2f64, -0.5, -0.75] {
            for i in 1..=100 {
                let delta = 2.0 * i as f64 / 100.0;
                let (w0, w1) = optimal_bloch_pair(e, delta);
                for w in [&w0, &w1] {
                    let norm: f64 = w.iter().map(|x| x * x).sum::<f64>();
                    assert!(norm <= 1.0 + 1e-12, "outside the Bloch ball: {w:?}");
                    assert!(w[2] <= e + 1e-12, "energy violated: {w:?} vs E={e}");
                }
                let dist: f64 = (0..3)
                    .map(|k| (w0[k] - w1[k]).powi(2))
                    .sum::<f64>()
                    .sqrt();
                let expected = delta.min(2.0 * (1.0 - e * e).sqrt());
                assert_abs_diff_eq!(dist, expected, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn identity_channel_curve_is_linear_up_to_saturation() {
        // a = 1: every branch collapses to δ until the saturation point.
        for i in 0..=100 {
            let delta = 2.0 * i as f64 / 100.0;
            let e = -0.3f64;
            let d3 = 2.0 * (1.0 - e * e).sqrt();
            let v = analytic_dephasing_curve(1.0, e, delta).unwrap();
            let expect = delta.min(d3);
            assert_abs_diff_eq!(v, expect, epsilon = 1e-9);
        }
        // E = 0, a = 1, δ = 1 → 1.
        assert_abs_diff_eq!(
            analytic_dephasing_curve(1.0, 0.0, 1.0).unwrap(),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn envelope_equals_formula_for_half_dephasing() {
        // At a = 0.5, E = −0.5 the piecewise form is already nondecreasing,
        // so the curve coincides with it.
        for i in 0..=100 {
            let delta = 2.0 * i as f64 / 100.0;
            let f = analytic_dephasing_curve(0.5, -0.5, delta).unwrap();
            let c = dephasing_curve_reference(0.5, -0.5, delta).unwrap();
            assert!((f - c).abs() <= 1e-6, "delta {delta}: {f} vs {c}");
        }
    }

    #[test]
    fn envelope_dominates_formula_and_is_monotone() {
        for &a in &[0.2, 0.3, 0.7] {
            let mut prev = 0.0;
            for i in 0..=100 {
                let delta = 2.0 * i as f64 / 100.0;
                let f = analytic_dephasing_curve(a, -0.5, delta).unwrap();
                let c = dephasing_curve_reference(a, -0.5, delta).unwrap();
                assert!(c >= f - 1e-12);
                // Monotone up to the fixed-grid discretization.
                assert!(c >= prev - 1e-4);
                prev = c;
            }
        }
    }

    #[test]
    fn monotone_in_delta_and_energy() {
        let mut prev = 0.0;
        for i in 0..=100 {
            let delta = 2.0 * i as f64 / 100.0;
            let v = analytic_dephasing_curve(0.5, -0.5, delta).unwrap();
            assert!(v >= prev - 1e-12);
            prev = v;
        }
        // Larger E (weaker constraint) gives a larger curve.
        for i in 0..=50 {
            let delta = 2.0 * i as f64 / 50.0;
            let lo = analytic_dephasing_curve(0.5, -0.7, delta).unwrap();
            let hi = analytic_dephasing_curve(0.5, -0.3, delta).unwrap();
            assert!(hi >= lo - 1e-12);
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(analytic_dephasing_curve(0.5, 0.5, 1.0).is_err());
        assert!(analytic_dephasing_curve(0.5, -1.0, 1.0).is_err());
        assert!(analytic_dephasing_curve(1.5, -0.5, 1.0).is_err());
        assert!(analytic_dephasing_curve(0.5, -0.5, 2.5).is_err());
    }
}
