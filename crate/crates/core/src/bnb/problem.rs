//! The jointly constrained semidefinite bilinear program:
//! minimize tr((X ⊗ Y) Q) + tr(A X) + tr(B Y) over Hermitian block pairs in a
//! convex set cut out by scalar and semidefinite constraints.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::operator::HermitianOperator;
use crate::sdp::{
    BlockKind, PsdConstraint, ScalarConstraint, SdpBlock, SdpObjective, SdpProblem, SdpSettings,
    SdpStatus,
};

/// Which side of the bilinear coupling a variable block belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    X,
    Y,
}

/// One variable block of the layout.
#[derive(Debug, Clone)]
pub struct VariableBlock {
    pub id: String,
    pub side: Side,
    pub dim: usize,
}

/// Ordered variable blocks; the X-side composite acts on ℂᵖ (p = sum of
/// X-side dimensions) and the Y-side composite on ℂ^q.
#[derive(Debug, Clone)]
pub struct Layout {
    blocks: Vec<VariableBlock>,
}

impl Layout {
    pub fn new(blocks: Vec<VariableBlock>) -> Result<Self> {
        if blocks.iter().any(|b| b.dim == 0) {
            return Err(CoreError::InvalidDimension(
                "layout blocks must have dimension >= 1".into(),
            ));
        }
        let layout = Self { blocks };
        if layout.side_blocks(Side::X).is_empty() || layout.side_blocks(Side::Y).is_empty() {
            return Err(CoreError::Validation(
                "layout needs at least one block on each side".into(),
            ));
        }
        Ok(layout)
    }

    pub fn blocks(&self) -> &[VariableBlock] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// (layout index, block) pairs of one side, in layout order.
    pub fn side_blocks(&self, side: Side) -> Vec<(usize, &VariableBlock)> {
        self.blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| b.side == side)
            .collect()
    }

    /// Composite dimension of a side (direct sum of block dimensions).
    pub fn side_dim(&self, side: Side) -> usize {
        self.side_blocks(side).iter().map(|(_, b)| b.dim).sum()
    }

    /// Offset of each side block inside the composite space, in side order.
    pub fn side_offsets(&self, side: Side) -> Vec<usize> {
        let mut offsets = Vec::new();
        let mut acc = 0;
        for (_, b) in self.side_blocks(side) {
            offsets.push(acc);
            acc += b.dim;
        }
        offsets
    }

    /// Assembles per-block operators into the block-diagonal composite.
    pub fn compose(&self, side: Side, ops: &[HermitianOperator]) -> Result<HermitianOperator> {
        let blocks = self.side_blocks(side);
        if ops.len() != blocks.len() {
            return Err(CoreError::InvalidInput(format!(
                "expected {} operators for this side, got {}",
                blocks.len(),
                ops.len()
            )));
        }
        let dim = self.side_dim(side);
        let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
        let mut off = 0;
        for ((_, block), op) in blocks.iter().zip(ops) {
            if op.dim() != block.dim {
                return Err(CoreError::InvalidInput(format!(
                    "block '{}' expects dimension {}, got {}",
                    block.id,
                    block.dim,
                    op.dim()
                )));
            }
            mat.view_mut((off, off), (block.dim, block.dim))
                .copy_from(op.matrix());
            off += block.dim;
        }
        Ok(HermitianOperator::symmetrize(mat))
    }

    /// Extracts the diagonal block components of an operator on a side's
    /// composite space.
    pub fn extract(&self, side: Side, op: &HermitianOperator) -> Vec<HermitianOperator> {
        let mut out = Vec::new();
        let mut off = 0;
        for (_, block) in self.side_blocks(side) {
            let sub = op.matrix().view((off, off), (block.dim, block.dim));
            out.push(HermitianOperator::symmetrize(sub.into_owned()));
            off += block.dim;
        }
        out
    }
}

/// A jointly constrained semidefinite bilinear minimization problem.
///
/// `coupling` (Q) acts on ℂᵖ ⊗ ℂ^q; only its components on the block-diagonal
/// subspaces induced by the layout pair with block-diagonal variables, so any
/// off-block support is inert. Constraints index layout blocks in order.
#[derive(Debug, Clone)]
pub struct BilinearProblem {
    pub layout: Layout,
    pub coupling: HermitianOperator,
    pub linear_x: HermitianOperator,
    pub linear_y: HermitianOperator,
    pub scalar_constraints: Vec<ScalarConstraint>,
    pub psd_constraints: Vec<PsdConstraint>,
}

impl BilinearProblem {
    pub fn new(
        layout: Layout,
        coupling: HermitianOperator,
        linear_x: HermitianOperator,
        linear_y: HermitianOperator,
        scalar_constraints: Vec<ScalarConstraint>,
        psd_constraints: Vec<PsdConstraint>,
    ) -> Result<Self> {
        let p = layout.side_dim(Side::X);
        let q = layout.side_dim(Side::Y);
        if coupling.dim() != p * q {
            return Err(CoreError::Validation(format!(
                "coupling operator has dimension {}, layout requires {}",
                coupling.dim(),
                p * q
            )));
        }
        if linear_x.dim() != p || linear_y.dim() != q {
            return Err(CoreError::Validation(format!(
                "linear terms have dimensions {}/{}, layout requires {p}/{q}",
                linear_x.dim(),
                linear_y.dim()
            )));
        }
        let problem = Self {
            layout,
            coupling,
            linear_x,
            linear_y,
            scalar_constraints,
            psd_constraints,
        };
        // Validate constraints against the block layout.
        problem.base_sdp_problem().validate()?;
        Ok(problem)
    }

    pub fn p(&self) -> usize {
        self.layout.side_dim(Side::X)
    }

    pub fn q(&self) -> usize {
        self.layout.side_dim(Side::Y)
    }

    /// The constraint set S as an SDP problem over the layout blocks, with
    /// zero objective. Callers add objectives and further rows.
    pub fn base_sdp_problem(&self) -> SdpProblem {
        let blocks = self
            .layout
            .blocks()
            .iter()
            .map(|b| SdpBlock {
                id: b.id.clone(),
                kind: BlockKind::Hermitian(b.dim),
            })
            .collect();
        SdpProblem {
            blocks,
            objective: SdpObjective::default(),
            scalar_constraints: self.scalar_constraints.clone(),
            psd_constraints: self.psd_constraints.clone(),
        }
    }

    /// F(X, Y) = tr((X ⊗ Y) Q) + tr(A X) + tr(B Y) for per-block operators.
    pub fn objective_value(
        &self,
        x_ops: &[HermitianOperator],
        y_ops: &[HermitianOperator],
    ) -> Result<f64> {
        let x = self.layout.compose(Side::X, x_ops)?;
        let y = self.layout.compose(Side::Y, y_ops)?;
        let coupling_term = self.coupling.hs_inner(&x.tensor(&y));
        Ok(coupling_term + self.linear_x.hs_inner(&x) + self.linear_y.hs_inner(&y))
    }

    /// Partial contraction over the X factor: the operator N on ℂ^q with
    /// tr(Y N) = tr((X ⊗ Y) Q) for all Y.
    pub fn contract_x(&self, x_ops: &[HermitianOperator]) -> Result<HermitianOperator> {
        let x = self.layout.compose(Side::X, x_ops)?;
        let (p, q) = (self.p(), self.q());
        let qm = self.coupling.matrix();
        let xm = x.matrix();
        let mut n = DMatrix::<Complex64>::zeros(q, q);
        for s_out in 0..q {
            for s_in in 0..q {
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..p {
                    for rp in 0..p {
                        acc += xm[(r, rp)] * qm[(rp * q + s_out, r * q + s_in)];
                    }
                }
                n[(s_out, s_in)] = acc;
            }
        }
        Ok(HermitianOperator::symmetrize(n))
    }

    /// Partial contraction over the Y factor: the operator M on ℂᵖ with
    /// tr(X M) = tr((X ⊗ Y) Q) for all X.
    pub fn contract_y(&self, y_ops: &[HermitianOperator]) -> Result<HermitianOperator> {
        let y = self.layout.compose(Side::Y, y_ops)?;
        Ok(self.contract_y_full(&y))
    }

    pub(crate) fn contract_y_full(&self, y: &HermitianOperator) -> HermitianOperator {
        let (p, q) = (self.p(), self.q());
        let qm = self.coupling.matrix();
        let ym = y.matrix();
        let mut m = DMatrix::<Complex64>::zeros(p, p);
        for r_out in 0..p {
            for r_in in 0..p {
                let mut acc = Complex64::new(0.0, 0.0);
                for s in 0..q {
                    for sp in 0..q {
                        acc += ym[(s, sp)] * qm[(r_out * q + sp, r_in * q + s)];
                    }
                }
                m[(r_out, r_in)] = acc;
            }
        }
        HermitianOperator::symmetrize(m)
    }

    /// Largest constraint violation of a candidate pair: positive scalar-row
    /// slacks and negative PSD eigenvalues.
    pub fn feasibility_violation(
        &self,
        x_ops: &[HermitianOperator],
        y_ops: &[HermitianOperator],
    ) -> Result<f64> {
        let values = self.collect_block_values(x_ops, y_ops)?;
        let mut worst = 0.0f64;
        for sc in &self.scalar_constraints {
            let lhs: f64 = sc
                .operator_terms
                .iter()
                .map(|(idx, c)| c.hs_inner(&values[*idx]))
                .sum();
            let v = match sc.relation {
                crate::sdp::Relation::Eq => (lhs - sc.rhs).abs(),
                crate::sdp::Relation::Le => (lhs - sc.rhs).max(0.0),
                crate::sdp::Relation::Ge => (sc.rhs - lhs).max(0.0),
            };
            worst = worst.max(v);
        }
        for pc in &self.psd_constraints {
            let mut expr = pc.constant.clone();
            for (idx, gamma) in &pc.terms {
                expr = &expr + &values[*idx].scale(*gamma);
            }
            worst = worst.max(-expr.min_eigenvalue()?.min(0.0));
        }
        Ok(worst)
    }

    fn collect_block_values(
        &self,
        x_ops: &[HermitianOperator],
        y_ops: &[HermitianOperator],
    ) -> Result<Vec<HermitianOperator>> {
        let x_idx: Vec<usize> = self
            .layout
            .side_blocks(Side::X)
            .iter()
            .map(|(i, _)| *i)
            .collect();
        let y_idx: Vec<usize> = self
            .layout
            .side_blocks(Side::Y)
            .iter()
            .map(|(i, _)| *i)
            .collect();
        if x_ops.len() != x_idx.len() || y_ops.len() != y_idx.len() {
            return Err(CoreError::InvalidInput(
                "block value count does not match layout".into(),
            ));
        }
        let mut values = vec![HermitianOperator::zeros(1); self.layout.len()];
        for (pos, idx) in x_idx.iter().enumerate() {
            values[*idx] = x_ops[pos].clone();
        }
        for (pos, idx) in y_idx.iter().enumerate() {
            values[*idx] = y_ops[pos].clone();
        }
        Ok(values)
    }

    /// Splits the first `layout.len()` SDP block values into side operators.
    pub fn split_solution_blocks(
        &self,
        values: &[crate::sdp::BlockValue],
    ) -> (Vec<HermitianOperator>, Vec<HermitianOperator>) {
        let mut x_ops = Vec::new();
        let mut y_ops = Vec::new();
        for (i, block) in self.layout.blocks().iter().enumerate() {
            let op = values[i]
                .as_hermitian()
                .expect("layout blocks are Hermitian")
                .clone();
            match block.side {
                Side::X => x_ops.push(op),
                Side::Y => y_ops.push(op),
            }
        }
        (x_ops, y_ops)
    }

    /// Solves the feasibility problem over S; errors if S is empty.
    pub fn feasible_point(
        &self,
        settings: &SdpSettings,
    ) -> Result<(Vec<HermitianOperator>, Vec<HermitianOperator>)> {
        let base = self.base_sdp_problem();
        let sol = crate::sdp::solve_sdp(&base, settings)?;
        match sol.status {
            SdpStatus::Optimal => Ok(self.split_solution_blocks(&sol.block_values)),
            SdpStatus::PrimalInfeasible => Err(CoreError::Infeasible(
                "the constraint set S is empty".into(),
            )),
            other => Err(CoreError::Numerical(format!(
                "feasibility solve ended with status {other:?}"
            ))),
        }
    }
}

/// Assembles a composite coupling operator from per-(X-block, Y-block)
/// couplings. Each entry maps a coupling on ℂ^{d_x · d_y} into the composite
/// ℂᵖ ⊗ ℂ^q at the corresponding block positions.
pub fn assemble_coupling(
    layout: &Layout,
    pairs: &[(usize, usize, HermitianOperator)],
) -> Result<HermitianOperator> {
    let p = layout.side_dim(Side::X);
    let q = layout.side_dim(Side::Y);
    let x_blocks = layout.side_blocks(Side::X);
    let y_blocks = layout.side_blocks(Side::Y);
    let x_offsets = layout.side_offsets(Side::X);
    let y_offsets = layout.side_offsets(Side::Y);

    let mut mat = DMatrix::<Complex64>::zeros(p * q, p * q);
    for (xb, yb, op) in pairs {
        let (xi, xblock) = x_blocks
            .get(*xb)
            .ok_or_else(|| CoreError::Validation(format!("x-side block {xb} out of range")))?;
        let (yi, yblock) = y_blocks
            .get(*yb)
            .ok_or_else(|| CoreError::Validation(format!("y-side block {yb} out of range")))?;
        let _ = (xi, yi);
        let (dx, dy) = (xblock.dim, yblock.dim);
        if op.dim() != dx * dy {
            return Err(CoreError::Validation(format!(
                "coupling for blocks ({xb},{yb}) has dimension {}, expected {}",
                op.dim(),
                dx * dy
            )));
        }
        let (xo, yo) = (x_offsets[*xb], y_offsets[*yb]);
        for a in 0..dx {
            for b in 0..dy {
                for ap in 0..dx {
                    for bp in 0..dy {
                        let row = (xo + a) * q + (yo + b);
                        let col = (xo + ap) * q + (yo + bp);
                        mat[(row, col)] += op.matrix()[(a * dy + b, ap * dy + bp)];
                    }
                }
            }
        }
    }
    Ok(HermitianOperator::symmetrize(mat))
}
