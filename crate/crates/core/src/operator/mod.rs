//! Hermitian/complex linear algebra: operator bases, inner products, tensor
//! products, eigen- and singular-value decompositions, trace norm.
//!
//! All values are immutable after construction and safe to share across
//! threads.

mod basis;
mod svd;

pub use basis::{hermitian_basis, HermitianBasis};
pub use svd::{real_svd, RealSvd};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// Hermiticity tolerance applied when ingesting matrices from external data.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Iteration cap handed to the symmetric eigensolver.
const EIG_MAX_ITER: usize = 10_000;

/// A d×d complex self-adjoint matrix; the atom of all problem data.
///
/// The wrapped matrix is exactly Hermitian: constructors symmetrize after
/// validating the input against a tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    mat: DMatrix<Complex64>,
}

impl HermitianOperator {
    /// Validates hermiticity within [`HERMITICITY_TOL`] and wraps the matrix.
    pub fn try_new(mat: DMatrix<Complex64>) -> Result<Self> {
        Self::try_new_with_tol(mat, HERMITICITY_TOL)
    }

    /// Validates hermiticity within `tol`, then symmetrizes so the stored
    /// matrix satisfies the invariant exactly.
    pub fn try_new_with_tol(mat: DMatrix<Complex64>, tol: f64) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(CoreError::InvalidInput(format!(
                "expected square matrix, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(CoreError::InvalidInput(
                "matrix contains non-finite entries".into(),
            ));
        }
        let mut deviation = 0.0f64;
        for i in 0..mat.nrows() {
            for j in 0..=i {
                let d = (mat[(i, j)] - mat[(j, i)].conj()).norm();
                deviation = deviation.max(d);
            }
        }
        if deviation > tol {
            return Err(CoreError::HermitianViolation {
                context: "matrix construction".into(),
                deviation,
            });
        }
        Ok(Self::symmetrize(mat))
    }

    /// Wraps a matrix assumed Hermitian by construction, symmetrizing to make
    /// the invariant exact. Intended for internally built data.
    pub(crate) fn symmetrize(mat: DMatrix<Complex64>) -> Self {
        let adj = mat.adjoint();
        let mat = (mat + adj).scale(0.5);
        Self { mat }
    }

    /// The zero operator on ℂᵈ.
    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: DMatrix::zeros(dim, dim),
        }
    }

    /// The identity operator on ℂᵈ.
    pub fn identity(dim: usize) -> Self {
        Self {
            mat: DMatrix::identity(dim, dim),
        }
    }

    /// Builds from a real symmetric matrix.
    pub fn from_real(mat: &DMatrix<f64>) -> Result<Self> {
        Self::try_new(mat.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).sum()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            mat: self.mat.scale(factor),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Hilbert-Schmidt inner product tr(AB); real for Hermitian arguments.
    pub fn hs_inner(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        let mut acc = 0.0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                // tr(AB) = Σ_ij A_ij B_ji; B_ji = conj(B_ij).
                let term = self.mat[(i, j)] * other.mat[(j, i)];
                acc += term.re;
            }
        }
        acc
    }

    /// Tensor product A ⊗ B, Hermitian again.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            mat: self.mat.kronecker(&other.mat),
        }
    }

    /// Eigenvalues sorted in increasing order.
    pub fn eigenvalues(&self) -> Result<DVector<f64>> {
        let eig = nalgebra::SymmetricEigen::try_new(self.mat.clone(), f64::EPSILON, EIG_MAX_ITER)
            .ok_or_else(|| {
                CoreError::Numerical(format!(
                    "hermitian eigensolver failed to converge (dim {}, max |entry| {:.3e})",
                    self.dim(),
                    self.max_abs_entry()
                ))
            })?;
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.total_cmp(b));
        Ok(DVector::from_vec(vals))
    }

    /// Full spectral decomposition; eigenpairs sorted by increasing eigenvalue.
    pub fn eigen(&self) -> Result<(DVector<f64>, DMatrix<Complex64>)> {
        let eig = nalgebra::SymmetricEigen::try_new(self.mat.clone(), f64::EPSILON, EIG_MAX_ITER)
            .ok_or_else(|| {
                CoreError::Numerical(format!(
                    "hermitian eigensolver failed to converge (dim {})",
                    self.dim()
                ))
            })?;
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let vals = DVector::from_iterator(self.dim(), order.iter().map(|&i| eig.eigenvalues[i]));
        let mut vecs = DMatrix::zeros(self.dim(), self.dim());
        for (col, &i) in order.iter().enumerate() {
            vecs.set_column(col, &eig.eigenvectors.column(i));
        }
        Ok((vals, vecs))
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?[0])
    }
}

impl std::ops::Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator {
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl std::ops::Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: &HermitianOperator) -> HermitianOperator {
        HermitianOperator {
            mat: &self.mat - &rhs.mat,
        }
    }
}

/// Trace norm ‖H‖₁ = Σ |λ_i|, via the symmetric eigensolver.
pub fn trace_norm(h: &HermitianOperator) -> Result<f64> {
    Ok(h.eigenvalues()?.iter().map(|v| v.abs()).sum())
}

/// The flip operator 𝔽 = Σ_{ij} |ij⟩⟨ji| on ℂᵈ ⊗ ℂᵈ.
///
/// Satisfies tr(𝔽(A ⊗ B)) = tr(AB).
pub fn flip_operator(dim: usize) -> Result<HermitianOperator> {
    if dim == 0 {
        return Err(CoreError::InvalidDimension(
            "flip operator requires d >= 1".into(),
        ));
    }
    let n = dim * dim;
    let mut mat = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..dim {
        for j in 0..dim {
            mat[(i * dim + j, j * dim + i)] = Complex64::new(1.0, 0.0);
        }
    }
    Ok(HermitianOperator { mat })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pauli(k: usize) -> HermitianOperator {
        let z = |re: f64, im: f64| Complex64::new(re, im);
        let m = match k {
            1 => DMatrix::from_row_slice(2, 2, &[z(0., 0.), z(1., 0.), z(1., 0.), z(0., 0.)]),
            2 => DMatrix::from_row_slice(2, 2, &[z(0., 0.), z(0., -1.), z(0., 1.), z(0., 0.)]),
            3 => DMatrix::from_row_slice(2, 2, &[z(1., 0.), z(0., 0.), z(0., 0.), z(-1., 0.)]),
            _ => DMatrix::identity(2, 2),
        };
        HermitianOperator::try_new(m).unwrap()
    }

    #[test]
    fn complex_hermitian_eigenvalues() {
        let vals = pauli(2).eigenvalues().unwrap();
        assert_abs_diff_eq!(vals[0], -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(vals[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn trace_norm_pauli_z() {
        assert_abs_diff_eq!(trace_norm(&pauli(3)).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn trace_norm_diagonal() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -2.0]);
        let h = HermitianOperator::from_real(&m).unwrap();
        assert_abs_diff_eq!(trace_norm(&h).unwrap(), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn non_hermitian_rejected() {
        let z = |re: f64, im: f64| Complex64::new(re, im);
        let m = DMatrix::from_row_slice(2, 2, &[z(0., 0.), z(1., 0.), z(0.5, 0.), z(0., 0.)]);
        assert!(matches!(
            HermitianOperator::try_new(m),
            Err(CoreError::HermitianViolation { .. })
        ));
    }

    #[test]
    fn flip_d1_and_d2() {
        let f1 = flip_operator(1).unwrap();
        assert_eq!(f1.dim(), 1);
        assert_abs_diff_eq!(f1.matrix()[(0, 0)].re, 1.0);

        let f2 = flip_operator(2).unwrap();
        for (r, c) in [(0usize, 0usize), (1, 2), (2, 1), (3, 3)] {
            assert_abs_diff_eq!(f2.matrix()[(r, c)].re, 1.0);
        }
        assert_abs_diff_eq!(f2.matrix().map(|z| z.re).sum(), 4.0);
    }

    #[test]
    fn flip_trace_identity() {
        // tr(F (A ⊗ B)) = tr(AB) for random Hermitian A, B on C^3.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut random_herm = |d: usize| {
            let m = DMatrix::from_fn(d, d, |_, _| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            HermitianOperator::symmetrize(m)
        };
        for _ in 0..5 {
            let a = random_herm(3);
            let b = random_herm(3);
            let f = flip_operator(3).unwrap();
            let lhs = f.hs_inner(&a.tensor(&b));
            let rhs = (a.matrix() * b.matrix()).trace().re;
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
        }
    }

    #[test]
    fn bloch_distance_equals_trace_distance() {
        // ‖ρ0 - ρ1‖₁ = ‖w0 - w1‖₂ for qubit states with Bloch vectors w.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let mut w = [[0.0f64; 3]; 2];
            for v in w.iter_mut() {
                loop {
                    for x in v.iter_mut() {
                        *x = rng.gen_range(-1.0..1.0);
                    }
                    if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
                        break;
                    }
                }
            }
            let state = |v: &[f64; 3]| {
                let mut m = HermitianOperator::identity(2).matrix().clone();
                for (k, &coef) in v.iter().enumerate() {
                    m += pauli(k + 1).matrix().scale(coef);
                }
                HermitianOperator::symmetrize(m.scale(0.5))
            };
            let d = &state(&w[0]) - &state(&w[1]);
            let euclid: f64 = (0..3)
                .map(|k| (w[0][k] - w[1][k]).powi(2))
                .sum::<f64>()
                .sqrt();
            assert_abs_diff_eq!(trace_norm(&d).unwrap(), euclid, epsilon = 1e-10);
        }
    }
}
