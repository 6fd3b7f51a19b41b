//! Convex-envelope lower bounds: the explicit envelope of σ·x·y over a box,
//! and the SDP computing the envelope minimum over Γ(S) ∩ Ω.

use nalgebra::DVector;

use crate::error::{CoreError, Result};
use crate::operator::HermitianOperator;
use crate::sdp::{
    solve_sdp, BlockKind, Relation, ScalarConstraint, SdpBlock, SdpObjective, SdpProblem,
    SdpSettings, SdpStatus,
};

use super::gamma::GammaMap;
use super::problem::BilinearProblem;
use super::rect::Hyperrectangle;

/// Interval width below which a box row collapses to an equality.
const DEGENERATE_WIDTH: f64 = 1e-12;
/// Absolute inflation applied to box rows in the relaxation SDP. Children
/// created by branching at a witness can intersect Γ(S) in a face of measure
/// zero; the inflation keeps a strictly feasible point available. Envelopes
/// over the larger box still underestimate f, so lower bounds stay sound.
const BOX_INFLATE: f64 = 1e-7;
/// Residual level at which a stalled interior-point solve is still usable as
/// a node bound (with the dual slack below).
const REDUCED_ACCURACY_TOL: f64 = 1e-6;
/// Multiplier mapping the dual residual into a lower-bound slack.
const DUAL_SLACK_FACTOR: f64 = 1e3;
/// Largest constraint violation tolerated for a node witness.
const WITNESS_ACCEPT_TOL: f64 = 1e-6;

/// The two affine pieces of the envelope of x·y over [ℓ,L]×[m,M], scaled by σ:
/// h⁰ = σ(m x + ℓ y − ℓ m) and h¹ = σ(M x + L y − L M).
pub fn envelope_pieces(
    sigma: f64,
    x: f64,
    y: f64,
    (lo_x, hi_x): (f64, f64),
    (lo_y, hi_y): (f64, f64),
) -> (f64, f64) {
    let h0 = sigma * (lo_y * x + lo_x * y - lo_x * lo_y);
    let h1 = sigma * (hi_y * x + hi_x * y - hi_x * hi_y);
    (h0, h1)
}

/// The convex envelope of σ·x·y over the box: max{h⁰, h¹}.
pub fn envelope_term(
    sigma: f64,
    x: f64,
    y: f64,
    bx: (f64, f64),
    by: (f64, f64),
) -> f64 {
    let (h0, h1) = envelope_pieces(sigma, x, y, bx, by);
    h0.max(h1)
}

/// Vex_Ω f evaluated pointwise from the explicit formula.
pub fn envelope_value(gm: &GammaMap, rect: &Hyperrectangle, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let mut v = gm.linear_x_coeffs().dot(x) + gm.linear_y_coeffs().dot(y);
    for j in 0..rect.active {
        v += envelope_term(gm.sigma(j), x[j], y[j], rect.x_bounds[j], rect.y_bounds[j]);
    }
    v
}

/// Status of a processed node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeStatus {
    Bounded,
    Infeasible,
}

/// Feasible witness of a node: the relaxation argmin mapped through Γ.
#[derive(Debug, Clone)]
pub struct NodeWitness {
    pub x_ops: Vec<HermitianOperator>,
    pub y_ops: Vec<HermitianOperator>,
    pub x_vec: DVector<f64>,
    pub y_vec: DVector<f64>,
}

/// A hyperrectangle with its certified bounds and witness.
#[derive(Debug, Clone)]
pub struct Node {
    pub rect: Hyperrectangle,
    /// Certified lower bound α̲(Ω); +∞ for infeasible nodes.
    pub lower: f64,
    /// Feasible objective value ᾱ(Ω) = f(witness); +∞ when no witness exists.
    pub upper: f64,
    pub witness: Option<NodeWitness>,
    pub status: NodeStatus,
}

/// Solves the envelope relaxation over Γ(S) ∩ Ω.
///
/// Returns the node with `lower` = relaxation optimum (dual value, a certified
/// bound), `upper` = f(witness) for the relaxation argmin, or an Infeasible
/// node when the relaxation is empty.
pub fn envelope_bounds(
    problem: &BilinearProblem,
    gm: &GammaMap,
    rect: Hyperrectangle,
    settings: &SdpSettings,
) -> Result<Node> {
    rect.validate()?;
    let k = rect.active;
    let nblocks = problem.layout.len();

    let mut sdp = envelope_base(problem, gm);
    append_box_rows(&mut sdp, gm, &rect);
    append_epigraph_rows(&mut sdp, gm, &rect, nblocks);

    let sol = solve_sdp(&sdp, settings).map_err(|e| e.in_context("envelope relaxation"))?;
    let _ = k;
    if sol.status == SdpStatus::PrimalInfeasible {
        return Ok(Node {
            rect,
            lower: f64::INFINITY,
            upper: f64::INFINITY,
            witness: None,
            status: NodeStatus::Infeasible,
        });
    }
    if !matches!(
        sol.status,
        SdpStatus::Optimal | SdpStatus::NumericalTrouble | SdpStatus::IterationLimit
    ) {
        return Err(CoreError::Numerical(format!(
            "envelope relaxation ended with status {:?} after {} iterations",
            sol.status, sol.iterations
        )));
    }

    // The returned point is a witness only if it satisfies S within
    // tolerance (checked directly on the reconstructed operators).
    let (x_ops, y_ops) = problem.split_solution_blocks(&sol.block_values);
    let violation = problem.feasibility_violation(&x_ops, &y_ops)?;
    let witness = if violation <= WITNESS_ACCEPT_TOL {
        let (x_vec, y_vec) = gm.vector_rep(&x_ops, &y_ops);
        Some(NodeWitness {
            x_ops,
            y_ops,
            x_vec,
            y_vec,
        })
    } else {
        None
    };
    let upper = witness
        .as_ref()
        .map(|w| gm.f_value(&w.x_vec, &w.y_vec))
        .unwrap_or(f64::INFINITY);

    // The dual objective is a valid bound whenever the dual residual is
    // small: for any feasible y, cᵀy ≥ dobj − ⟨r_d, y⟩. Widen by a
    // conservative multiple of the residual; exact solves carry none.
    let lower = if sol.status == SdpStatus::Optimal {
        sol.dual_objective
    } else if sol.residuals.dual <= REDUCED_ACCURACY_TOL {
        sol.dual_objective - DUAL_SLACK_FACTOR * sol.residuals.dual * (1.0 + sol.dual_objective.abs())
    } else {
        f64::NEG_INFINITY
    };
    if lower == f64::NEG_INFINITY && witness.is_none() {
        return Err(CoreError::Numerical(format!(
            "envelope relaxation unusable: status {:?}, primal {:.2e}, dual {:.2e}, \
             witness violation {violation:.2e}",
            sol.status, sol.residuals.primal, sol.residuals.dual
        )));
    }
    Ok(Node {
        rect,
        lower: lower.min(upper),
        upper,
        witness,
        status: NodeStatus::Bounded,
    })
}

/// Blocks, S constraints, and the linear objective (Σ r_j + Σ a_j x_j +
/// Σ b_k y_k) shared by every node of a run.
pub(crate) fn envelope_base(problem: &BilinearProblem, gm: &GammaMap) -> SdpProblem {
    let k = gm.rank();
    let mut sdp = problem.base_sdp_problem();
    let nblocks = sdp.blocks.len();
    for j in 0..k {
        sdp.blocks.push(SdpBlock {
            id: format!("r_{j}"),
            kind: BlockKind::Scalar,
        });
    }

    // Σ_j a_j x_j = tr(A_blockdiag X) and likewise for the y side.
    let mut operator_coeffs = Vec::new();
    for (pos, (idx, _)) in problem
        .layout
        .side_blocks(super::problem::Side::X)
        .iter()
        .enumerate()
    {
        let a_blocks = problem
            .layout
            .extract(super::problem::Side::X, &problem.linear_x);
        operator_coeffs.push((*idx, a_blocks[pos].clone()));
    }
    for (pos, (idx, _)) in problem
        .layout
        .side_blocks(super::problem::Side::Y)
        .iter()
        .enumerate()
    {
        let b_blocks = problem
            .layout
            .extract(super::problem::Side::Y, &problem.linear_y);
        operator_coeffs.push((*idx, b_blocks[pos].clone()));
    }
    sdp.objective = SdpObjective {
        operator_coeffs,
        scalar_coeffs: (0..k).map(|j| (nblocks + j, 1.0)).collect(),
        constant: 0.0,
    };
    sdp
}

/// Box rows ℓ_j ≤ x_j ≤ L_j and m_k ≤ y_k ≤ M_k for finite bounds.
pub(crate) fn append_box_rows(sdp: &mut SdpProblem, gm: &GammaMap, rect: &Hyperrectangle) {
    let mut push = |functional: &[(usize, HermitianOperator)], (lo, hi): (f64, f64), name: String| {
        if !lo.is_finite() && !hi.is_finite() {
            return;
        }
        let terms = functional.to_vec();
        if hi - lo <= DEGENERATE_WIDTH * lo.abs().max(1.0) {
            sdp.scalar_constraints.push(ScalarConstraint {
                operator_terms: terms,
                scalar_terms: vec![],
                relation: Relation::Eq,
                rhs: 0.5 * (lo + hi),
                label: format!("box {name} (degenerate)"),
            });
            return;
        }
        if lo.is_finite() {
            sdp.scalar_constraints.push(ScalarConstraint {
                operator_terms: terms.clone(),
                scalar_terms: vec![],
                relation: Relation::Ge,
                rhs: lo - BOX_INFLATE * lo.abs().max(1.0),
                label: format!("box {name} lower"),
            });
        }
        if hi.is_finite() {
            sdp.scalar_constraints.push(ScalarConstraint {
                operator_terms: terms,
                scalar_terms: vec![],
                relation: Relation::Le,
                rhs: hi + BOX_INFLATE * hi.abs().max(1.0),
                label: format!("box {name} upper"),
            });
        }
    };
    for (j, b) in rect.x_bounds.iter().enumerate() {
        push(gm.x_coordinate_functional(j), *b, format!("x_{j}"));
    }
    for (k_idx, b) in rect.y_bounds.iter().enumerate() {
        push(gm.y_coordinate_functional(k_idx), *b, format!("y_{k_idx}"));
    }
}

/// Epigraph rows tr(X G_jᵇ) + tr(Y H_jᵇ) − r_j ≤ s_jᵇ for the K envelope
/// terms, with G, H, s built from the rotated basis functionals.
pub(crate) fn append_epigraph_rows(
    sdp: &mut SdpProblem,
    gm: &GammaMap,
    rect: &Hyperrectangle,
    scalar_offset: usize,
) {
    for j in 0..rect.active {
        let sigma = gm.sigma(j);
        let (lo_x, hi_x) = rect.x_bounds[j];
        let (lo_y, hi_y) = rect.y_bounds[j];
        for (b, (l_hat, m_hat)) in [(0usize, (lo_x, lo_y)), (1, (hi_x, hi_y))] {
            // h_jᵇ(x_j, y_j) = σ_j (m̂ x_j + ℓ̂ y_j − ℓ̂ m̂) ≤ r_j.
            let mut operator_terms: Vec<(usize, HermitianOperator)> = Vec::new();
            for (idx, op) in gm.x_coordinate_functional(j) {
                operator_terms.push((*idx, op.scale(sigma * m_hat)));
            }
            for (idx, op) in gm.y_coordinate_functional(j) {
                operator_terms.push((*idx, op.scale(sigma * l_hat)));
            }
            sdp.scalar_constraints.push(ScalarConstraint {
                operator_terms,
                scalar_terms: vec![(scalar_offset + j, -1.0)],
                relation: Relation::Le,
                rhs: sigma * l_hat * m_hat,
                label: format!("epigraph h_{j}^{b}"),
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_underestimates_and_agrees_on_boundary() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
        for _ in 0..2000 {
            let lo_x = rng.gen_range(-2.0..1.0);
            let hi_x = lo_x + rng.gen_range(0.0..2.0);
            let lo_y = rng.gen_range(-2.0..1.0);
            let hi_y = lo_y + rng.gen_range(0.0..2.0);
            let sigma = rng.gen_range(0.0..3.0);
            let x = rng.gen_range(lo_x..=hi_x);
            let y = rng.gen_range(lo_y..=hi_y);
            let vex = envelope_term(sigma, x, y, (lo_x, hi_x), (lo_y, hi_y));
            assert!(vex <= sigma * x * y + 1e-12);

            // Boundary agreement: pin one coordinate to an endpoint.
            for (bx, by) in [
                (lo_x, y),
                (hi_x, y),
                (x, lo_y),
                (x, hi_y),
            ] {
                let v = envelope_term(sigma, bx, by, (lo_x, hi_x), (lo_y, hi_y));
                assert!((v - sigma * bx * by).abs() <= 1e-12 * (1.0 + sigma * bx.abs() * by.abs()));
            }
        }
    }
}
