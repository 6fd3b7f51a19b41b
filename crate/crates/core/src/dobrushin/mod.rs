//! Energy-constrained Dobrushin curves of quantum channels: channel
//! representations, compilation to bilinear programs, curve sweeps, and the
//! closed-form dephasing reference curve.

mod analytic;
mod channel;
mod curve;
mod instance;

pub use analytic::{
    analytic_dephasing_curve, analytic_dephasing_curve_states, dephasing_curve_reference,
    optimal_bloch_pair,
};
pub use channel::{dephasing_channel, rotated_dephasing, QuantumChannel};
pub use curve::{
    cascade_bounds, contraction_coefficient, contraction_coefficient_with_epsilon,
    dobrushin_curve, evaluate_point, CurveConfig, CurvePoint,
};
pub use instance::{BuiltInstance, DobrushinInstance, DobrushinMode};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::HermitianOperator;
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;
    use num_complex::Complex64;

    fn sigma3() -> HermitianOperator {
        let z = Complex64::new;
        HermitianOperator::try_new(DMatrix::from_row_slice(
            2,
            2,
            &[z(1., 0.), z(0., 0.), z(0., 0.), z(-1., 0.)],
        ))
        .unwrap()
    }

    /// One full certified solve against the closed form: the Fig. 3b-style
    /// configuration at δ = 2 has the plateau value 2a√(1−E²).
    #[test]
    fn qubit_point_matches_closed_form_at_saturation() {
        let channel = dephasing_channel(0.5).unwrap();
        let cfg = CurveConfig {
            symmetry_constraint: true,
            epsilon: 1e-3,
            ..CurveConfig::default()
        };
        let point = evaluate_point(&channel, &sigma3(), -0.5, 2.0, &cfg);
        assert!(point.is_certified(), "point failed: {:?}", point.error);
        assert!(point.half_width <= cfg.epsilon);
        let expect = analytic_dephasing_curve(0.5, -0.5, 2.0).unwrap();
        assert_abs_diff_eq!(point.value, expect, epsilon = 2e-3 + 1e-4);
    }

    #[test]
    fn contraction_coefficients_of_reference_channels() {
        // Identity channel: η = 1. The reported value comes from the
        // certified witness; the unconstrained instance carries the full
        // unitary symmetry, so the certificate target is kept coarse here.
        let id = dephasing_channel(1.0).unwrap();
        assert_abs_diff_eq!(
            contraction_coefficient_with_epsilon(&id, 0.1).unwrap(),
            1.0,
            epsilon = 1e-3
        );

        // Full dephasing (a = 0): σ₃ eigenstates stay distinguishable, η = 1.
        let full = dephasing_channel(0.0).unwrap();
        assert_abs_diff_eq!(
            contraction_coefficient(&full).unwrap(),
            1.0,
            epsilon = 1e-3
        );

        // Fully depolarizing channel ρ ↦ tr(ρ) I/2 (Kraus {σ_μ/2}): η = 0.
        let z = Complex64::new;
        let paulis = [
            DMatrix::from_row_slice(2, 2, &[z(1., 0.), z(0., 0.), z(0., 0.), z(1., 0.)]),
            DMatrix::from_row_slice(2, 2, &[z(0., 0.), z(1., 0.), z(1., 0.), z(0., 0.)]),
            DMatrix::from_row_slice(2, 2, &[z(0., 0.), z(0., -1.), z(0., 1.), z(0., 0.)]),
            DMatrix::from_row_slice(2, 2, &[z(1., 0.), z(0., 0.), z(0., 0.), z(-1., 0.)]),
        ];
        let kraus = paulis.iter().map(|p| p.scale(0.5)).collect();
        let depol = QuantumChannel::from_kraus(kraus).unwrap();
        let eta = contraction_coefficient(&depol).unwrap();
        assert!(eta <= 2e-3, "depolarizing channel has eta = {eta}");
    }
}
