//! Full singular value decomposition in the convention U = S·Δ·T.

use nalgebra::{DMatrix, DVector};

use crate::error::{CoreError, Result};

/// Relative threshold under which singular values are treated as zero when
/// counting the rank K. Envelope terms with σ_j ≈ 0 contribute nothing, so
/// branching on them would be wasted work.
pub const SVD_RANK_REL_TOL: f64 = 1e-9;

/// Full SVD of a real matrix, U = S·Δ·T with S, T square orthogonal.
///
/// T stores the factor directly (T = Vᵀ of the usual U = S·Δ·Vᵀ convention),
/// so index formulas like y_k = Σ_ℓ T_{k,ℓ} tr(Y ξ_ℓ) apply verbatim.
#[derive(Debug, Clone)]
pub struct RealSvd {
    /// Orthogonal left factor, nrows×nrows.
    pub left: DMatrix<f64>,
    /// Singular values, nonincreasing, length min(nrows, ncols).
    pub sigma: DVector<f64>,
    /// Orthogonal right factor, ncols×ncols (not transposed).
    pub right: DMatrix<f64>,
    /// Count of singular values above `SVD_RANK_REL_TOL * sigma[0]`.
    pub rank: usize,
}

impl RealSvd {
    /// Reconstructs S·Δ·T.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let p = self.left.nrows();
        let q = self.right.ncols();
        let mut delta = DMatrix::zeros(p, q);
        for (j, s) in self.sigma.iter().enumerate() {
            delta[(j, j)] = *s;
        }
        &self.left * delta * &self.right
    }
}

/// Computes the full SVD of `m` with deterministic descending singular-value
/// order.
pub fn real_svd(m: &DMatrix<f64>) -> Result<RealSvd> {
    if m.iter().any(|x| !x.is_finite()) {
        return Err(CoreError::InvalidInput(
            "svd input contains non-finite entries".into(),
        ));
    }
    let p = m.nrows();
    let q = m.ncols();
    let r = p.min(q);
    let svd = m.clone().svd(true, true);
    let u_thin = svd.u.expect("svd with u requested");
    let vt_thin = svd.v_t.expect("svd with v_t requested");

    // Sort singular values descending, permuting factors accordingly.
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sigma = DVector::from_iterator(r, order.iter().map(|&i| svd.singular_values[i]));
    let mut u_cols: Vec<DVector<f64>> = order
        .iter()
        .map(|&i| u_thin.column(i).into_owned())
        .collect();
    let mut v_cols: Vec<DVector<f64>> = order
        .iter()
        .map(|&i| vt_thin.row(i).transpose())
        .collect();

    // Canonical signs: the largest-magnitude entry of each left vector is
    // positive (paired flips preserve the product).
    for (uc, vc) in u_cols.iter_mut().zip(v_cols.iter_mut()) {
        let mut pivot = 0.0f64;
        for &x in uc.iter() {
            if x.abs() > pivot.abs() {
                pivot = x;
            }
        }
        if pivot < 0.0 {
            *uc *= -1.0;
            *vc *= -1.0;
        }
    }

    complete_orthonormal(&mut u_cols, p);
    complete_orthonormal(&mut v_cols, q);

    let left = DMatrix::from_columns(&u_cols);
    let v = DMatrix::from_columns(&v_cols);
    let right = v.transpose();

    let rank = if r == 0 || sigma[0] <= 0.0 {
        0
    } else {
        sigma
            .iter()
            .take_while(|&&s| s > SVD_RANK_REL_TOL * sigma[0])
            .count()
    };

    Ok(RealSvd {
        left,
        sigma,
        right,
        rank,
    })
}

/// Extends a set of orthonormal columns to a full orthonormal basis of ℝⁿ by
/// Gram-Schmidt over the standard basis (deterministic).
fn complete_orthonormal(cols: &mut Vec<DVector<f64>>, n: usize) {
    // Thin factors from degenerate inputs may carry non-unit columns; fix up.
    for c in cols.iter_mut() {
        let norm = c.norm();
        if norm > 1e-12 {
            *c /= norm;
        }
    }
    let mut e = 0;
    while cols.len() < n {
        assert!(e < n, "orthonormal completion exhausted the standard basis");
        let mut v = DVector::zeros(n);
        v[e] = 1.0;
        e += 1;
        // Two rounds of Gram-Schmidt for numerical orthogonality.
        for _ in 0..2 {
            for c in cols.iter() {
                let proj = c.dot(&v);
                v -= c * proj;
            }
        }
        let norm = v.norm();
        if norm > 1e-8 {
            cols.push(v / norm);
        }
    }
}
