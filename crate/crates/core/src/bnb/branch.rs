//! Four-way branching of a hyperrectangle at the witness point of its node.

use nalgebra::DVector;

use crate::error::{CoreError, Result};

use super::envelope::envelope_pieces;
use super::gamma::GammaMap;
use super::rect::Hyperrectangle;

/// Relative tolerance deciding that a witness coordinate sits on a rectangle
/// edge, in which case the split moves to the midpoint to forbid zero-volume
/// children.
const EDGE_REL_TOL: f64 = 1e-12;
/// Slack allowed when checking that the witness lies inside the rectangle
/// (witnesses are feasible only up to the SDP tolerance).
const WITNESS_TOL: f64 = 1e-6;

/// Splits `rect` into four children at the witness (v, w).
///
/// The branching pair I maximizes the envelope gap
/// σ_j v_j w_j − max{h_j⁰, h_j¹} over the active coordinates, ties to the
/// smallest index. Children are returned in the fixed order
/// [ℓ,v]×[m,w], [v,L]×[m,w], [v,L]×[w,M], [ℓ,v]×[w,M].
pub fn branch_hyperrectangle(
    rect: &Hyperrectangle,
    v: &DVector<f64>,
    w: &DVector<f64>,
    gm: &GammaMap,
) -> Result<[Hyperrectangle; 4]> {
    if !rect.contains(v, w, WITNESS_TOL) {
        return Err(CoreError::Validation(
            "internal invariant violation: witness lies outside its rectangle".into(),
        ));
    }
    if rect.active == 0 {
        return Err(CoreError::Validation(
            "cannot branch a rectangle without envelope-active coordinates".into(),
        ));
    }

    let mut best_index = 0usize;
    let mut best_gap = f64::NEG_INFINITY;
    for j in 0..rect.active {
        let sigma = gm.sigma(j);
        let (h0, h1) = envelope_pieces(sigma, v[j], w[j], rect.x_bounds[j], rect.y_bounds[j]);
        let gap = sigma * v[j] * w[j] - h0.max(h1);
        if gap > best_gap {
            best_gap = gap;
            best_index = j;
        }
    }
    // The caller only branches nodes with positive envelope gap; if all
    // per-coordinate gaps vanish numerically, fall back to the widest pair.
    if best_gap <= 0.0 {
        let mut widest = f64::NEG_INFINITY;
        for j in 0..rect.active {
            let area = (rect.x_bounds[j].1 - rect.x_bounds[j].0)
                * (rect.y_bounds[j].1 - rect.y_bounds[j].0);
            if area > widest {
                widest = area;
                best_index = j;
            }
        }
    }
    let i = best_index;

    let split_point = |value: f64, (lo, hi): (f64, f64)| -> f64 {
        let width = hi - lo;
        let clamped = value.clamp(lo, hi);
        let edge = EDGE_REL_TOL * width.abs().max(1.0);
        if clamped - lo <= edge || hi - clamped <= edge {
            0.5 * (lo + hi)
        } else {
            clamped
        }
    };
    let split_x = split_point(v[i], rect.x_bounds[i]);
    let split_y = split_point(w[i], rect.y_bounds[i]);
    let (lo_x, hi_x) = rect.x_bounds[i];
    let (lo_y, hi_y) = rect.y_bounds[i];

    let quadrants = [
        ((lo_x, split_x), (lo_y, split_y)),
        ((split_x, hi_x), (lo_y, split_y)),
        ((split_x, hi_x), (split_y, hi_y)),
        ((lo_x, split_x), (split_y, hi_y)),
    ];
    Ok(quadrants.map(|(bx, by)| {
        let mut child = rect.clone();
        child.x_bounds[i] = bx;
        child.y_bounds[i] = by;
        child
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bnb::problem::{assemble_coupling, BilinearProblem, Layout, Side, VariableBlock};
    use crate::operator::{hermitian_basis, HermitianOperator};

    fn diag_coupling_problem() -> BilinearProblem {
        let layout = Layout::new(vec![
            VariableBlock {
                id: "X".into(),
                side: Side::X,
                dim: 1,
            },
            VariableBlock {
                id: "Y".into(),
                side: Side::Y,
                dim: 1,
            },
        ])
        .unwrap();
        let basis = hermitian_basis(1).unwrap();
        let coupling = assemble_coupling(
            &layout,
            &[(0, 0, basis.element(0).tensor(basis.element(0)))],
        )
        .unwrap();
        BilinearProblem::new(
            layout,
            coupling,
            HermitianOperator::zeros(1),
            HermitianOperator::zeros(1),
            vec![],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn splits_into_expected_quadrants() {
        let problem = diag_coupling_problem();
        let gm = GammaMap::new(&problem).unwrap();
        let rect = Hyperrectangle {
            x_bounds: vec![(0.0, 1.0)],
            y_bounds: vec![(0.0, 1.0)],
            active: 1,
        };
        let v = DVector::from_vec(vec![0.25]);
        let w = DVector::from_vec(vec![0.75]);
        let children = branch_hyperrectangle(&rect, &v, &w, &gm).unwrap();
        assert_eq!(children[0].x_bounds[0], (0.0, 0.25));
        assert_eq!(children[0].y_bounds[0], (0.0, 0.75));
        assert_eq!(children[1].x_bounds[0], (0.25, 1.0));
        assert_eq!(children[1].y_bounds[0], (0.0, 0.75));
        assert_eq!(children[2].x_bounds[0], (0.25, 1.0));
        assert_eq!(children[2].y_bounds[0], (0.75, 1.0));
        assert_eq!(children[3].x_bounds[0], (0.0, 0.25));
        assert_eq!(children[3].y_bounds[0], (0.75, 1.0));

        // Volumes sum to the parent volume.
        let total: f64 = children.iter().map(|c| c.active_volume()).sum();
        assert!((total - rect.active_volume()).abs() < 1e-12);
    }

    #[test]
    fn edge_witness_splits_at_midpoint() {
        let problem = diag_coupling_problem();
        let gm = GammaMap::new(&problem).unwrap();
        let rect = Hyperrectangle {
            x_bounds: vec![(-1.0, 1.0)],
            y_bounds: vec![(-1.0, 1.0)],
            active: 1,
        };
        let v = DVector::from_vec(vec![-1.0]);
        let w = DVector::from_vec(vec![1.0]);
        let children = branch_hyperrectangle(&rect, &v, &w, &gm).unwrap();
        for child in &children {
            assert!(child.active_volume() > 0.1);
        }
    }

    #[test]
    fn witness_outside_rect_rejected() {
        let problem = diag_coupling_problem();
        let gm = GammaMap::new(&problem).unwrap();
        let rect = Hyperrectangle {
            x_bounds: vec![(0.0, 1.0)],
            y_bounds: vec![(0.0, 1.0)],
            active: 1,
        };
        let v = DVector::from_vec(vec![2.0]);
        let w = DVector::from_vec(vec![0.5]);
        assert!(branch_hyperrectangle(&rect, &v, &w, &gm).is_err());
    }
}
