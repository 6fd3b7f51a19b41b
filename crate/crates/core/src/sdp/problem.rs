//! User-facing SDP problem description: linear objective over Hermitian and
//! scalar blocks, scalar affine constraints, and affine positive-semidefinite
//! constraints.

use crate::error::{CoreError, Result};
use crate::operator::HermitianOperator;

/// Kind of a variable block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockKind {
    /// A free Hermitian d×d matrix variable.
    Hermitian(usize),
    /// A free real scalar variable.
    Scalar,
}

/// A named variable block.
#[derive(Debug, Clone)]
pub struct SdpBlock {
    pub id: String,
    pub kind: BlockKind,
}

/// Relation of a scalar affine constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

/// Scalar constraint Σ_b tr(C_b V_b) + Σ_s c_s v_s  ⟨relation⟩  rhs.
#[derive(Debug, Clone)]
pub struct ScalarConstraint {
    /// (Hermitian block index, coefficient operator C_b) pairs.
    pub operator_terms: Vec<(usize, HermitianOperator)>,
    /// (scalar block index, coefficient) pairs.
    pub scalar_terms: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
    /// Free-form label used in diagnostics.
    pub label: String,
}

/// Affine PSD constraint Σ_b γ_b V_b + K ⪰ 0.
///
/// Hermitian blocks must match the constraint dimension; a scalar block
/// contributes γ·v·I.
#[derive(Debug, Clone)]
pub struct PsdConstraint {
    pub terms: Vec<(usize, f64)>,
    pub constant: HermitianOperator,
    pub label: String,
}

/// Linear objective: Σ_b tr(C_b V_b) + Σ_s c_s v_s + constant.
#[derive(Debug, Clone, Default)]
pub struct SdpObjective {
    pub operator_coeffs: Vec<(usize, HermitianOperator)>,
    pub scalar_coeffs: Vec<(usize, f64)>,
    pub constant: f64,
}

/// A minimization problem over Hermitian and scalar blocks.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub blocks: Vec<SdpBlock>,
    pub objective: SdpObjective,
    pub scalar_constraints: Vec<ScalarConstraint>,
    pub psd_constraints: Vec<PsdConstraint>,
}

impl SdpProblem {
    /// A problem over the given blocks with zero objective and no constraints.
    pub fn new(blocks: Vec<SdpBlock>) -> Self {
        Self {
            blocks,
            objective: SdpObjective::default(),
            scalar_constraints: Vec::new(),
            psd_constraints: Vec::new(),
        }
    }

    pub fn block_dim(&self, idx: usize) -> Option<usize> {
        match self.blocks.get(idx)?.kind {
            BlockKind::Hermitian(d) => Some(d),
            BlockKind::Scalar => None,
        }
    }

    /// Structural validation: block references resolve and dimensions match.
    pub fn validate(&self) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(CoreError::Validation("problem has no blocks".into()));
        }
        let check_herm = |idx: usize, op: &HermitianOperator, what: &str| -> Result<()> {
            match self.blocks.get(idx) {
                Some(SdpBlock {
                    kind: BlockKind::Hermitian(d),
                    id,
                }) => {
                    if op.dim() != *d {
                        Err(CoreError::Validation(format!(
                            "{what}: coefficient for block '{id}' is {}x{}, block is {d}x{d}",
                            op.dim(),
                            op.dim()
                        )))
                    } else {
                        Ok(())
                    }
                }
                Some(SdpBlock { id, .. }) => Err(CoreError::Validation(format!(
                    "{what}: operator coefficient given for scalar block '{id}'"
                ))),
                None => Err(CoreError::Validation(format!(
                    "{what}: block index {idx} out of range"
                ))),
            }
        };
        let check_scalar = |idx: usize, what: &str| -> Result<()> {
            match self.blocks.get(idx) {
                Some(SdpBlock {
                    kind: BlockKind::Scalar,
                    ..
                }) => Ok(()),
                Some(SdpBlock { id, .. }) => Err(CoreError::Validation(format!(
                    "{what}: scalar coefficient given for matrix block '{id}'"
                ))),
                None => Err(CoreError::Validation(format!(
                    "{what}: block index {idx} out of range"
                ))),
            }
        };

        for (idx, op) in &self.objective.operator_coeffs {
            check_herm(*idx, op, "objective")?;
        }
        for (idx, _) in &self.objective.scalar_coeffs {
            check_scalar(*idx, "objective")?;
        }
        for sc in &self.scalar_constraints {
            if !sc.rhs.is_finite() {
                return Err(CoreError::Validation(format!(
                    "scalar constraint '{}': non-finite rhs",
                    sc.label
                )));
            }
            for (idx, op) in &sc.operator_terms {
                check_herm(*idx, op, &format!("scalar constraint '{}'", sc.label))?;
            }
            for (idx, _) in &sc.scalar_terms {
                check_scalar(*idx, &format!("scalar constraint '{}'", sc.label))?;
            }
        }
        for pc in &self.psd_constraints {
            let dim = pc.constant.dim();
            for (idx, _) in &pc.terms {
                match self.blocks.get(*idx) {
                    Some(SdpBlock {
                        kind: BlockKind::Hermitian(d),
                        id,
                    }) => {
                        if *d != dim {
                            return Err(CoreError::Validation(format!(
                                "psd constraint '{}': block '{id}' is {d}x{d}, constraint is {dim}x{dim}",
                                pc.label
                            )));
                        }
                    }
                    Some(SdpBlock {
                        kind: BlockKind::Scalar,
                        ..
                    }) => {}
                    None => {
                        return Err(CoreError::Validation(format!(
                            "psd constraint '{}': block index {idx} out of range",
                            pc.label
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Solver tolerances and iteration cap.
#[derive(Debug, Clone)]
pub struct SdpSettings {
    /// Relative duality-gap tolerance.
    pub gap_tol: f64,
    /// Feasibility tolerance (primal and dual residuals, PSD slack).
    pub feas_tol: f64,
    /// Interior-point iteration cap.
    pub max_iters: usize,
}

impl Default for SdpSettings {
    fn default() -> Self {
        Self {
            gap_tol: 1e-8,
            feas_tol: 1e-8,
            max_iters: 200,
        }
    }
}

/// Termination status of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    /// Converged: gap and residual tolerances met, PSD expressions feasible.
    Optimal,
    /// A dual improving ray certifies primal infeasibility.
    PrimalInfeasible,
    /// A primal improving ray certifies dual infeasibility (the problem is
    /// unbounded below if feasible).
    DualInfeasibleOrUnbounded,
    /// The iteration stalled or the KKT system degenerated.
    NumericalTrouble,
    /// The iteration cap was reached first.
    IterationLimit,
}

/// Value of one block in a solution.
#[derive(Debug, Clone)]
pub enum BlockValue {
    Hermitian(HermitianOperator),
    Scalar(f64),
}

impl BlockValue {
    pub fn as_hermitian(&self) -> Option<&HermitianOperator> {
        match self {
            BlockValue::Hermitian(h) => Some(h),
            BlockValue::Scalar(_) => None,
        }
    }

    pub fn as_scalar(&self) -> Option<f64> {
        match self {
            BlockValue::Scalar(v) => Some(*v),
            BlockValue::Hermitian(_) => None,
        }
    }
}

/// Residual summary of a solve.
#[derive(Debug, Clone, Copy, Default)]
pub struct SdpResiduals {
    /// Primal feasibility residual (equality rows and cone slack mismatch).
    pub primal: f64,
    /// Dual feasibility residual.
    pub dual: f64,
    /// Relative duality gap.
    pub rel_gap: f64,
}

/// Certificate data attached to infeasibility statuses.
#[derive(Debug, Clone, Copy)]
pub struct RayCertificate {
    /// Residual norm of the normalized improving ray.
    pub ray_residual: f64,
    /// Strictly positive margin of the normalized ray objective.
    pub ray_margin: f64,
}

/// Outcome of a solve.
#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: SdpStatus,
    /// Primal values per block, in block order (best iterate on failure).
    pub block_values: Vec<BlockValue>,
    /// Primal objective value (includes the objective constant).
    pub objective: f64,
    /// Dual objective value (includes the objective constant).
    pub dual_objective: f64,
    pub residuals: SdpResiduals,
    pub iterations: usize,
    /// Present when status is an infeasibility certificate.
    pub certificate: Option<RayCertificate>,
}

impl SdpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SdpStatus::Optimal
    }
}
