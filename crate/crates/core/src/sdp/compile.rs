//! Translation of an [`SdpProblem`] into the solver's conic standard form.
//!
//! Every Hermitian block is coordinatized in the generalized Gell-Mann basis
//! (d² real coordinates). Affine PSD constraints become cone blocks
//! `K + Σ_i y_i B_i ⪰ 0`; their slack matrices are the solver's lifted slack
//! blocks. Scalar inequalities become 1×1 cones, equalities become linear
//! rows. Complex Hermitian constraint data is embedded into real symmetric
//! 2d×2d matrices `[[Re, -Im], [Im, Re]]`; real data stays d×d.

use nalgebra::{DMatrix, DVector};

use crate::error::{CoreError, Result};
use crate::operator::{hermitian_basis, HermitianBasis, HermitianOperator};

use super::problem::{BlockKind, Relation, SdpProblem};

/// One cone block of the standard form: `constant + Σ y_i coeffs_i ⪰ 0`.
#[derive(Debug, Clone)]
pub struct ConeBlock {
    /// Real symmetric dimension of the cone.
    pub dim: usize,
    pub constant: DMatrix<f64>,
    /// Sparse coefficient list, sorted by coordinate index.
    pub coeffs: Vec<(usize, DMatrix<f64>)>,
    pub label: String,
}

/// Coordinate layout of one user block inside the y vector.
#[derive(Debug, Clone)]
pub enum VarBlock {
    Hermitian {
        offset: usize,
        basis: HermitianBasis,
    },
    Scalar {
        offset: usize,
    },
}

/// Internal conic form: minimize cᵀy + constant subject to `eq · y = eq_rhs`
/// and every cone block PSD.
#[derive(Debug, Clone)]
pub struct ConicProgram {
    pub n: usize,
    pub c: DVector<f64>,
    pub obj_constant: f64,
    pub eq: DMatrix<f64>,
    pub eq_rhs: DVector<f64>,
    pub cones: Vec<ConeBlock>,
    pub var_map: Vec<VarBlock>,
}

impl ConicProgram {
    /// Reconstructs user block values from a coordinate vector.
    pub fn block_values_from(&self, y: &DVector<f64>) -> Vec<super::problem::BlockValue> {
        self.var_map
            .iter()
            .map(|vb| match vb {
                VarBlock::Hermitian { offset, basis } => {
                    let coeffs =
                        DVector::from_iterator(basis.len(), (0..basis.len()).map(|j| y[offset + j]));
                    super::problem::BlockValue::Hermitian(basis.from_coefficients(&coeffs))
                }
                VarBlock::Scalar { offset } => super::problem::BlockValue::Scalar(y[*offset]),
            })
            .collect()
    }
}

/// Real symmetric embedding [[Re, -Im], [Im, Re]] of a complex Hermitian
/// matrix; PSD iff the original is, with doubled eigenvalue multiplicities.
fn embed(h: &HermitianOperator) -> DMatrix<f64> {
    let d = h.dim();
    let mut out = DMatrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            let z = h.matrix()[(i, j)];
            out[(i, j)] = z.re;
            out[(i + d, j + d)] = z.re;
            out[(i, j + d)] = -z.im;
            out[(i + d, j)] = z.im;
        }
    }
    out
}

fn is_real(h: &HermitianOperator) -> bool {
    h.matrix().iter().all(|z| z.im == 0.0)
}

fn real_part(h: &HermitianOperator) -> DMatrix<f64> {
    h.matrix().map(|z| z.re)
}

/// Compiles the user problem into conic standard form.
pub fn compile_standard_form(problem: &SdpProblem) -> Result<ConicProgram> {
    problem.validate()?;

    // Coordinate layout.
    let mut var_map = Vec::with_capacity(problem.blocks.len());
    let mut n = 0usize;
    for block in &problem.blocks {
        match block.kind {
            BlockKind::Hermitian(d) => {
                let basis = hermitian_basis(d)?;
                var_map.push(VarBlock::Hermitian { offset: n, basis });
                n += d * d;
            }
            BlockKind::Scalar => {
                var_map.push(VarBlock::Scalar { offset: n });
                n += 1;
            }
        }
    }

    // Linear functional of one (block, operator/scalar) term in y coordinates.
    let herm_row = |block: usize, op: &HermitianOperator, row: &mut DVector<f64>| {
        if let VarBlock::Hermitian { offset, basis } = &var_map[block] {
            for j in 0..basis.len() {
                row[offset + j] += basis.element(j).hs_inner(op);
            }
        }
    };

    let mut c = DVector::zeros(n);
    for (idx, op) in &problem.objective.operator_coeffs {
        herm_row(*idx, op, &mut c);
    }
    for (idx, coef) in &problem.objective.scalar_coeffs {
        if let VarBlock::Scalar { offset } = &var_map[*idx] {
            c[*offset] += coef;
        }
    }

    let mut eq_rows: Vec<DVector<f64>> = Vec::new();
    let mut eq_rhs: Vec<f64> = Vec::new();
    let mut cones: Vec<ConeBlock> = Vec::new();

    for sc in &problem.scalar_constraints {
        let mut row = DVector::zeros(n);
        for (idx, op) in &sc.operator_terms {
            herm_row(*idx, op, &mut row);
        }
        for (idx, coef) in &sc.scalar_terms {
            if let VarBlock::Scalar { offset } = &var_map[*idx] {
                row[*offset] += coef;
            }
        }
        match sc.relation {
            Relation::Eq => {
                eq_rows.push(row);
                eq_rhs.push(sc.rhs);
            }
            Relation::Le | Relation::Ge => {
                // Le: rhs - row·y >= 0.  Ge: row·y - rhs >= 0.
                let sign = if sc.relation == Relation::Le { -1.0 } else { 1.0 };
                let coeffs: Vec<(usize, DMatrix<f64>)> = row
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0.0)
                    .map(|(i, v)| (i, DMatrix::from_element(1, 1, sign * v)))
                    .collect();
                cones.push(ConeBlock {
                    dim: 1,
                    constant: DMatrix::from_element(1, 1, -sign * sc.rhs),
                    coeffs,
                    label: sc.label.clone(),
                });
            }
        }
    }

    for pc in &problem.psd_constraints {
        let dim = pc.constant.dim();
        // Gather complex coefficient matrices per touched coordinate.
        let mut touched: Vec<(usize, HermitianOperator)> = Vec::new();
        for (idx, gamma) in &pc.terms {
            match &var_map[*idx] {
                VarBlock::Hermitian { offset, basis } => {
                    for j in 0..basis.len() {
                        touched.push((offset + j, basis.element(j).scale(*gamma)));
                    }
                }
                VarBlock::Scalar { offset } => {
                    touched.push((*offset, HermitianOperator::identity(dim).scale(*gamma)));
                }
            }
        }
        touched.sort_by_key(|(i, _)| *i);
        // Merge duplicate coordinates (a block may appear in several terms).
        let mut merged: Vec<(usize, HermitianOperator)> = Vec::new();
        for (i, op) in touched {
            match merged.last_mut() {
                Some((j, acc)) if *j == i => *acc = &*acc + &op,
                _ => merged.push((i, op)),
            }
        }

        let complex = !is_real(&pc.constant) || merged.iter().any(|(_, op)| !is_real(op));
        let (constant, coeffs, cone_dim) = if complex {
            (
                embed(&pc.constant),
                merged
                    .iter()
                    .map(|(i, op)| (*i, embed(op)))
                    .collect::<Vec<_>>(),
                2 * dim,
            )
        } else {
            (
                real_part(&pc.constant),
                merged
                    .iter()
                    .map(|(i, op)| (*i, real_part(op)))
                    .collect::<Vec<_>>(),
                dim,
            )
        };
        cones.push(ConeBlock {
            dim: cone_dim,
            constant,
            coeffs,
            label: pc.label.clone(),
        });
    }

    // Coordinates untouched by any cone or equality row make the KKT system
    // singular; pin the irrelevant ones and reject the unbounded ones.
    let mut touched = vec![false; n];
    for cone in &cones {
        for (i, _) in &cone.coeffs {
            touched[*i] = true;
        }
    }
    for row in &eq_rows {
        for (i, v) in row.iter().enumerate() {
            if *v != 0.0 {
                touched[i] = true;
            }
        }
    }
    for i in 0..n {
        if !touched[i] {
            if c[i] != 0.0 {
                return Err(CoreError::Unbounded(format!(
                    "coordinate {i} has a nonzero objective coefficient but appears in no constraint"
                )));
            }
            let mut row = DVector::zeros(n);
            row[i] = 1.0;
            eq_rows.push(row);
            eq_rhs.push(0.0);
        }
    }

    // The interior-point machinery needs at least one cone.
    if cones.is_empty() {
        cones.push(ConeBlock {
            dim: 1,
            constant: DMatrix::from_element(1, 1, 1.0),
            coeffs: Vec::new(),
            label: "(slack)".into(),
        });
    }

    let p = eq_rows.len();
    let mut eq = DMatrix::zeros(p, n);
    for (r, row) in eq_rows.iter().enumerate() {
        eq.set_row(r, &row.transpose());
    }

    Ok(ConicProgram {
        n,
        c,
        obj_constant: problem.objective.constant,
        eq,
        eq_rhs: DVector::from_vec(eq_rhs),
        cones,
        var_map,
    })
}
