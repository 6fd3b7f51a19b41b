//! The alternating-SDP heuristic: fix one side, solve the linear SDP in the
//! other, and alternate. Yields feasible points (upper bounds on the global
//! minimum) without optimality guarantees.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bnb::{BilinearProblem, Side};
use crate::error::{CoreError, Result};
use crate::operator::HermitianOperator;
use crate::sdp::{
    solve_sdp, Relation, ScalarConstraint, SdpObjective, SdpProblem, SdpSettings, SdpStatus,
};

/// Why a seesaw run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeesawStop {
    /// Value improvement fell below the stall tolerance.
    ValueStalled,
    /// The iteration cap was reached.
    IterationLimit,
}

/// Result of a seesaw run.
#[derive(Debug, Clone)]
pub struct SeesawResult {
    pub x_ops: Vec<HermitianOperator>,
    pub y_ops: Vec<HermitianOperator>,
    /// F at the final pair.
    pub value: f64,
    /// F after every completed half-step, nonincreasing.
    pub value_trace: Vec<f64>,
    pub stop: SeesawStop,
}

/// Options for [`seesaw`].
#[derive(Debug, Clone)]
pub struct SeesawOptions {
    /// Starting pair; when absent, a feasibility solve picks one.
    pub start: Option<(Vec<HermitianOperator>, Vec<HermitianOperator>)>,
    /// Stop when a full iteration improves the value by less than this.
    pub stall_tol: f64,
    /// Cap on full alternation iterations.
    pub max_iters: usize,
    pub sdp_settings: SdpSettings,
}

impl Default for SeesawOptions {
    fn default() -> Self {
        Self {
            start: None,
            stall_tol: 1e-7,
            max_iters: 100,
            sdp_settings: SdpSettings::default(),
        }
    }
}

/// Runs the alternating minimization from a feasible starting pair.
pub fn seesaw(problem: &BilinearProblem, options: &SeesawOptions) -> Result<SeesawResult> {
    let (mut x_ops, mut y_ops) = match &options.start {
        Some((x, y)) => {
            let violation = problem.feasibility_violation(x, y)?;
            if violation > 1e-6 {
                return Err(CoreError::InvalidInput(format!(
                    "seesaw start violates the constraints by {violation:.3e}"
                )));
            }
            (x.clone(), y.clone())
        }
        None => problem.feasible_point(&options.sdp_settings)?,
    };

    let mut value = problem.objective_value(&x_ops, &y_ops)?;
    let mut value_trace = Vec::new();
    let mut stop = SeesawStop::IterationLimit;

    for iter in 0..options.max_iters {
        let before = value;

        // Fix X, solve the SDP in Y (S plus the rows X = X₀).
        let y_sol = solve_fixed_side(problem, Side::X, &x_ops, &options.sdp_settings)
            .map_err(|e| e.in_context(format!("seesaw iteration {iter}, Y step")))?;
        y_ops = y_sol;
        value = problem.objective_value(&x_ops, &y_ops)?;
        value_trace.push(value);

        // Fix Y, solve in X.
        let x_sol = solve_fixed_side(problem, Side::Y, &y_ops, &options.sdp_settings)
            .map_err(|e| e.in_context(format!("seesaw iteration {iter}, X step")))?;
        x_ops = x_sol;
        value = problem.objective_value(&x_ops, &y_ops)?;
        value_trace.push(value);

        if before - value < options.stall_tol {
            stop = SeesawStop::ValueStalled;
            break;
        }
    }

    Ok(SeesawResult {
        x_ops,
        y_ops,
        value,
        value_trace,
        stop,
    })
}

/// Seesaw with randomized restarts: the first run starts from the plain
/// feasibility solve; later runs perturb it by minimizing random linear
/// objectives over S. Returns the best result.
pub fn seesaw_with_restarts(
    problem: &BilinearProblem,
    options: &SeesawOptions,
    restarts: usize,
    seed: u64,
) -> Result<SeesawResult> {
    let mut best = seesaw(problem, options)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..restarts {
        let starts =
            crate::bnb::sample_feasible_pairs(problem, 1, &mut rng, &options.sdp_settings)?;
        let mut opts = options.clone();
        opts.start = Some(starts.into_iter().next().expect("one sample"));
        let run = seesaw(problem, &opts)?;
        if run.value < best.value {
            best = run;
        }
    }
    Ok(best)
}

/// Solves the SDP over the free side with the other side pinned by equality
/// rows, and returns the free side's new operators.
fn solve_fixed_side(
    problem: &BilinearProblem,
    fixed: Side,
    fixed_ops: &[HermitianOperator],
    settings: &SdpSettings,
) -> Result<Vec<HermitianOperator>> {
    let mut sdp: SdpProblem = problem.base_sdp_problem();

    // Effective linear objective on the free side: the bilinear coupling
    // contracted against the fixed side, plus the free side's linear term.
    let free = match fixed {
        Side::X => Side::Y,
        Side::Y => Side::X,
    };
    let contracted = match fixed {
        Side::X => problem.contract_x(fixed_ops)?,
        Side::Y => problem.contract_y(fixed_ops)?,
    };
    let linear = match free {
        Side::X => &problem.linear_x,
        Side::Y => &problem.linear_y,
    };
    let effective = &contracted + linear;
    let coeff_blocks = problem.layout.extract(free, &effective);
    sdp.objective = SdpObjective {
        operator_coeffs: problem
            .layout
            .side_blocks(free)
            .iter()
            .zip(coeff_blocks)
            .map(|((idx, _), op)| (*idx, op))
            .collect(),
        scalar_coeffs: vec![],
        constant: 0.0,
    };

    // Pin the fixed side: tr(V η_j) = tr(V₀ η_j) for every basis element.
    for (pos, (idx, block)) in problem.layout.side_blocks(fixed).iter().enumerate() {
        let basis = crate::operator::hermitian_basis(block.dim)?;
        for j in 0..basis.len() {
            sdp.scalar_constraints.push(ScalarConstraint {
                operator_terms: vec![(*idx, basis.element(j).clone())],
                scalar_terms: vec![],
                relation: Relation::Eq,
                rhs: basis.element(j).hs_inner(&fixed_ops[pos]),
                label: format!("pin block '{}' coord {j}", block.id),
            });
        }
    }

    let sol = solve_sdp(&sdp, settings)?;
    if sol.status != SdpStatus::Optimal {
        return Err(CoreError::Numerical(format!(
            "fixed-side subproblem ended with status {:?}",
            sol.status
        )));
    }
    let (x_ops, y_ops) = problem.split_solution_blocks(&sol.block_values);
    Ok(match free {
        Side::X => x_ops,
        Side::Y => y_ops,
    })
}
