//! Hyperrectangles bounding the vectorized feasible set, and the SDP-based
//! minimal bounding rectangle.

use nalgebra::DVector;

use crate::error::{CoreError, Result};
use crate::sdp::{solve_sdp, SdpObjective, SdpSettings, SdpStatus};

use super::gamma::GammaMap;
use super::problem::BilinearProblem;

/// Margin added to computed coordinate bounds so points feasible within the
/// SDP tolerance stay inside the rectangle.
const BOUND_MARGIN: f64 = 1e-8;

/// Per-coordinate bounds (ℓ_j, L_j) for the x side and (m_k, M_k) for the y
/// side. Coordinates beyond the computed range carry infinite bounds and
/// impose no rows. Only the first `active` pairs carry envelope terms and are
/// branchable.
#[derive(Debug, Clone)]
pub struct Hyperrectangle {
    pub x_bounds: Vec<(f64, f64)>,
    pub y_bounds: Vec<(f64, f64)>,
    pub active: usize,
}

impl Hyperrectangle {
    pub fn validate(&self) -> Result<()> {
        let ok = self
            .x_bounds
            .iter()
            .chain(&self.y_bounds)
            .all(|(lo, hi)| lo <= hi);
        if !ok {
            return Err(CoreError::Validation(
                "hyperrectangle has a crossed interval".into(),
            ));
        }
        let active_finite = (0..self.active).all(|j| {
            self.x_bounds[j].0.is_finite()
                && self.x_bounds[j].1.is_finite()
                && self.y_bounds[j].0.is_finite()
                && self.y_bounds[j].1.is_finite()
        });
        if !active_finite {
            return Err(CoreError::Validation(
                "envelope-active coordinates must carry finite bounds".into(),
            ));
        }
        Ok(())
    }

    /// True when (x, y) lies inside within `tol` on every finite bound.
    pub fn contains(&self, x: &DVector<f64>, y: &DVector<f64>, tol: f64) -> bool {
        let inside = |v: f64, (lo, hi): (f64, f64)| v >= lo - tol && v <= hi + tol;
        self.x_bounds
            .iter()
            .enumerate()
            .all(|(j, b)| inside(x[j], *b))
            && self
                .y_bounds
                .iter()
                .enumerate()
                .all(|(k, b)| inside(y[k], *b))
    }

    /// Product of active-pair interval widths (the branchable volume).
    pub fn active_volume(&self) -> f64 {
        let mut v = 1.0;
        for j in 0..self.active {
            v *= self.x_bounds[j].1 - self.x_bounds[j].0;
            v *= self.y_bounds[j].1 - self.y_bounds[j].0;
        }
        v
    }
}

/// Computes the minimal-volume bounding rectangle of Γ(S) by solving one SDP
/// per finite coordinate bound.
///
/// With `full_box_rows` false (the default), bounds are computed only for the
/// K envelope-active coordinate pairs; the objective is linear in the
/// remaining coordinates, so the envelope is exact in them and bounds are
/// unnecessary. Setting the flag restores bounds on all coordinates.
pub fn bounding_rectangle(
    problem: &BilinearProblem,
    gm: &GammaMap,
    full_box_rows: bool,
    settings: &SdpSettings,
) -> Result<Hyperrectangle> {
    let k = gm.rank();
    let nx_bounded = if full_box_rows { gm.n_x() } else { k };
    let ny_bounded = if full_box_rows { gm.n_y() } else { k };

    let base = problem.base_sdp_problem();
    let mut extremize = |functional: &[(usize, crate::operator::HermitianOperator)],
                         coord: &str|
     -> Result<(f64, f64)> {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for minimize in [true, false] {
            let sign = if minimize { 1.0 } else { -1.0 };
            let mut sdp = base.clone();
            sdp.objective = SdpObjective {
                operator_coeffs: functional
                    .iter()
                    .map(|(idx, op)| (*idx, op.scale(sign)))
                    .collect(),
                scalar_coeffs: vec![],
                constant: 0.0,
            };
            let sol = solve_sdp(&sdp, settings)
                .map_err(|e| e.in_context(format!("bounding rectangle, coordinate {coord}")))?;
            match sol.status {
                SdpStatus::Optimal => {
                    if minimize {
                        lo = sol.objective;
                    } else {
                        hi = -sol.objective;
                    }
                }
                SdpStatus::DualInfeasibleOrUnbounded => {
                    return Err(CoreError::Unbounded(format!(
                        "coordinate {coord} of Γ(S) is unbounded; the method requires a compact feasible region"
                    )));
                }
                SdpStatus::PrimalInfeasible => {
                    return Err(CoreError::Infeasible(
                        "the constraint set S is empty".into(),
                    ));
                }
                other => {
                    return Err(CoreError::Numerical(format!(
                        "bounding rectangle solve for coordinate {coord} ended with {other:?}"
                    )));
                }
            }
        }
        Ok((lo - BOUND_MARGIN, hi + BOUND_MARGIN))
    };

    let mut x_bounds = vec![(f64::NEG_INFINITY, f64::INFINITY); gm.n_x()];
    let mut y_bounds = vec![(f64::NEG_INFINITY, f64::INFINITY); gm.n_y()];
    for j in 0..nx_bounded {
        x_bounds[j] = extremize(gm.x_coordinate_functional(j), &format!("x_{j}"))?;
    }
    for k_idx in 0..ny_bounded {
        y_bounds[k_idx] = extremize(gm.y_coordinate_functional(k_idx), &format!("y_{k_idx}"))?;
    }

    let rect = Hyperrectangle {
        x_bounds,
        y_bounds,
        active: k,
    };
    rect.validate()?;
    Ok(rect)
}
