//! Orthonormal operator bases of the real vector space of self-adjoint
//! operators (generalized Gell-Mann construction).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::HermitianOperator;
use crate::error::{CoreError, Result};

/// An orthonormal basis of the d²-dimensional real space of Hermitian d×d
/// matrices, under the Hilbert-Schmidt inner product.
#[derive(Debug, Clone)]
pub struct HermitianBasis {
    dim: usize,
    elements: Vec<HermitianOperator>,
}

impl HermitianBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of elements, d².
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, j: usize) -> &HermitianOperator {
        &self.elements[j]
    }

    pub fn elements(&self) -> &[HermitianOperator] {
        &self.elements
    }

    /// Expansion coefficients ĥ_j = tr(H η_j).
    pub fn coefficients(&self, h: &HermitianOperator) -> DVector<f64> {
        DVector::from_iterator(self.len(), self.elements.iter().map(|e| e.hs_inner(h)))
    }

    /// Reconstructs Σ_j v_j η_j.
    pub fn from_coefficients(&self, v: &DVector<f64>) -> HermitianOperator {
        let mut mat = DMatrix::<Complex64>::zeros(self.dim, self.dim);
        for (j, e) in self.elements.iter().enumerate() {
            mat += e.matrix().scale(v[j]);
        }
        HermitianOperator::symmetrize(mat)
    }
}

/// The normalized generalized Gell-Mann basis of Hermitian d×d matrices.
///
/// Ordering is deterministic: I/√d first, then symmetric (E_ij + E_ji)/√2 and
/// antisymmetric (-iE_ij + iE_ji)/√2 generators for i < j in lexicographic
/// order, then the diagonal traceless generators. For d = 2 this yields
/// {I/√2, σ₁/√2, σ₂/√2, σ₃/√2}.
pub fn hermitian_basis(dim: usize) -> Result<HermitianBasis> {
    if dim == 0 {
        return Err(CoreError::InvalidDimension(
            "hermitian basis requires d >= 1".into(),
        ));
    }
    let z = Complex64::new;
    let mut elements = Vec::with_capacity(dim * dim);

    let identity = DMatrix::<Complex64>::identity(dim, dim).scale(1.0 / (dim as f64).sqrt());
    elements.push(HermitianOperator { mat: identity });

    let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
    for i in 0..dim {
        for j in (i + 1)..dim {
            let mut sym = DMatrix::<Complex64>::zeros(dim, dim);
            sym[(i, j)] = z(inv_sqrt2, 0.0);
            sym[(j, i)] = z(inv_sqrt2, 0.0);
            elements.push(HermitianOperator { mat: sym });

            let mut asym = DMatrix::<Complex64>::zeros(dim, dim);
            asym[(i, j)] = z(0.0, -inv_sqrt2);
            asym[(j, i)] = z(0.0, inv_sqrt2);
            elements.push(HermitianOperator { mat: asym });
        }
    }

    for l in 1..dim {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut diag = DMatrix::<Complex64>::zeros(dim, dim);
        for k in 0..l {
            diag[(k, k)] = z(norm, 0.0);
        }
        diag[(l, l)] = z(-(l as f64) * norm, 0.0);
        elements.push(HermitianOperator { mat: diag });
    }

    debug_assert_eq!(elements.len(), dim * dim);
    Ok(HermitianBasis { dim, elements })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn d1_basis() {
        let b = hermitian_basis(1).unwrap();
        assert_eq!(b.len(), 1);
        assert_abs_diff_eq!(b.element(0).matrix()[(0, 0)].re, 1.0);
    }

    #[test]
    fn d2_is_scaled_paulis() {
        let b = hermitian_basis(2).unwrap();
        assert_eq!(b.len(), 4);
        let s = 1.0 / 2.0f64.sqrt();
        // I/√2
        assert_abs_diff_eq!(b.element(0).matrix()[(0, 0)].re, s, epsilon = 1e-15);
        // σ₁/√2
        assert_abs_diff_eq!(b.element(1).matrix()[(0, 1)].re, s, epsilon = 1e-15);
        // σ₂/√2
        assert_abs_diff_eq!(b.element(2).matrix()[(0, 1)].im, -s, epsilon = 1e-15);
        assert_abs_diff_eq!(b.element(2).matrix()[(1, 0)].im, s, epsilon = 1e-15);
        // σ₃/√2
        assert_abs_diff_eq!(b.element(3).matrix()[(1, 1)].re, -s, epsilon = 1e-15);
    }

    #[test]
    fn gram_matrix_is_identity_up_to_d6() {
        for d in 1..=6 {
            let b = hermitian_basis(d).unwrap();
            for i in 0..b.len() {
                for j in 0..b.len() {
                    let g = b.element(i).hs_inner(b.element(j));
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (g - expect).abs() <= 1e-12,
                        "d={d} gram[{i}][{j}] = {g}"
                    );
                }
            }
        }
    }

    #[test]
    fn zero_dim_rejected() {
        assert!(hermitian_basis(0).is_err());
    }

    proptest! {
        #[test]
        fn expansion_roundtrip(d in 1usize..=5, seed in 0u64..1000) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = nalgebra::DMatrix::from_fn(d, d, |_, _| {
                num_complex::Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
            });
            let h = HermitianOperator::symmetrize(m);
            let b = hermitian_basis(d).unwrap();
            let back = b.from_coefficients(&b.coefficients(&h));
            let diff = &h - &back;
            prop_assert!(diff.max_abs_entry() <= 1e-10);
        }
    }
}
