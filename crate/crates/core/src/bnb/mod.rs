//! Branch-and-bound global solver for jointly constrained semidefinite
//! bilinear programs: Γ vectorization, bounding rectangle, envelope
//! lower-bound SDPs, four-way branching, and the partition loop with
//! ε-certified termination.

mod branch;
mod envelope;
mod gamma;
mod problem;
mod rect;
mod solve;

pub use branch::branch_hyperrectangle;
pub use envelope::{
    envelope_bounds, envelope_pieces, envelope_term, envelope_value, Node, NodeStatus, NodeWitness,
};
pub use gamma::{GammaMap, SideBasis};
pub use problem::{assemble_coupling, BilinearProblem, Layout, Side, VariableBlock};
pub use rect::{bounding_rectangle, Hyperrectangle};
pub use solve::{solve_bilinear, BnbOptions, BnbStatus, GlobalResult, TraceRow};

use crate::error::Result;
use crate::operator::HermitianOperator;
use crate::sdp::{solve_sdp, SdpObjective, SdpSettings, SdpStatus};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

/// Samples feasible pairs of S by minimizing random linear objectives over
/// the constraint set (one SDP per sample).
pub fn sample_feasible_pairs(
    problem: &BilinearProblem,
    count: usize,
    rng: &mut impl Rng,
    settings: &SdpSettings,
) -> Result<Vec<(Vec<HermitianOperator>, Vec<HermitianOperator>)>> {
    let base = problem.base_sdp_problem();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut sdp = base.clone();
        sdp.objective = SdpObjective {
            operator_coeffs: problem
                .layout
                .blocks()
                .iter()
                .enumerate()
                .map(|(idx, b)| {
                    let m = DMatrix::from_fn(b.dim, b.dim, |_, _| {
                        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    });
                    (idx, HermitianOperator::symmetrize(m))
                })
                .collect(),
            scalar_coeffs: vec![],
            constant: 0.0,
        };
        let sol = solve_sdp(&sdp, settings)?;
        if sol.status != SdpStatus::Optimal {
            return Err(crate::error::CoreError::Numerical(format!(
                "feasible-pair sampling solve ended with {:?}",
                sol.status
            )));
        }
        out.push(problem.split_solution_blocks(&sol.block_values));
    }
    Ok(out)
}
