//! The Γ vectorization: an SVD-aligned linear isometry taking operator pairs
//! to coefficient vectors so the bilinear coupling becomes Σ_j σ_j x_j y_j.

use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::operator::{hermitian_basis, real_svd, HermitianBasis, HermitianOperator, RealSvd};

use super::problem::{BilinearProblem, Side};

/// Block-structured orthonormal basis of one side's variable subspace
/// (the block-diagonal Hermitian operators).
#[derive(Debug, Clone)]
pub struct SideBasis {
    /// (layout index, per-block Gell-Mann basis, coordinate offset).
    blocks: Vec<(usize, HermitianBasis, usize)>,
    n: usize,
}

impl SideBasis {
    fn new(problem: &BilinearProblem, side: Side) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut n = 0;
        for (idx, block) in problem.layout.side_blocks(side) {
            let basis = hermitian_basis(block.dim)?;
            let len = basis.len();
            blocks.push((idx, basis, n));
            n += len;
        }
        Ok(Self { blocks, n })
    }

    /// Coordinate dimension Σ d².
    pub fn n(&self) -> usize {
        self.n
    }

    /// Unrotated coefficients (tr of the operator against each basis element),
    /// for per-block operators given in side order.
    pub fn coefficients(&self, ops: &[HermitianOperator]) -> DVector<f64> {
        let mut out = DVector::zeros(self.n);
        for (pos, (_, basis, offset)) in self.blocks.iter().enumerate() {
            let c = basis.coefficients(&ops[pos]);
            for j in 0..basis.len() {
                out[offset + j] = c[j];
            }
        }
        out
    }

    /// Reconstructs per-block operators from unrotated coefficients.
    pub fn from_coefficients(&self, v: &DVector<f64>) -> Vec<HermitianOperator> {
        self.blocks
            .iter()
            .map(|(_, basis, offset)| {
                let c = DVector::from_iterator(basis.len(), (0..basis.len()).map(|j| v[offset + j]));
                basis.from_coefficients(&c)
            })
            .collect()
    }

    /// The linear functional V ↦ Σ_k coeffs_k tr(V η_k) decomposed into
    /// (layout index, coefficient operator) terms, one per block.
    pub fn functional(&self, coeffs: &DVector<f64>) -> Vec<(usize, HermitianOperator)> {
        self.blocks
            .iter()
            .map(|(idx, basis, offset)| {
                let c =
                    DVector::from_iterator(basis.len(), (0..basis.len()).map(|j| coeffs[offset + j]));
                (*idx, basis.from_coefficients(&c))
            })
            .collect()
    }

    /// Materializes basis element `j` as a composite block-diagonal operator.
    fn composite_element(&self, problem: &BilinearProblem, side: Side, j: usize) -> HermitianOperator {
        let mut v = DVector::zeros(self.n);
        v[j] = 1.0;
        let ops = self.from_coefficients(&v);
        problem
            .layout
            .compose(side, &ops)
            .expect("basis element conforms to layout")
    }
}

/// Precomputed Γ data: side bases, the coefficient matrix U, its SVD, and the
/// rotated linear coefficient vectors.
#[derive(Debug, Clone)]
pub struct GammaMap {
    x_basis: SideBasis,
    y_basis: SideBasis,
    u: DMatrix<f64>,
    svd: RealSvd,
    a: DVector<f64>,
    b: DVector<f64>,
    /// Rotated basis functionals η̃_j = Σ_k S_{k,j} η_k as per-block terms.
    x_rotated: Vec<Vec<(usize, HermitianOperator)>>,
    /// Rotated basis functionals ξ̃_k = Σ_ℓ T_{k,ℓ} ξ_ℓ as per-block terms.
    y_rotated: Vec<Vec<(usize, HermitianOperator)>>,
}

impl GammaMap {
    pub fn new(problem: &BilinearProblem) -> Result<Self> {
        let x_basis = SideBasis::new(problem, Side::X)?;
        let y_basis = SideBasis::new(problem, Side::Y)?;
        let (n_x, n_y) = (x_basis.n(), y_basis.n());

        // U_{j,k} = tr(Q (η_j ⊗ ξ_k)) via partial contraction per ξ_k.
        let mut u = DMatrix::zeros(n_x, n_y);
        let x_elements: Vec<HermitianOperator> = (0..n_x)
            .map(|j| x_basis.composite_element(problem, Side::X, j))
            .collect();
        for k in 0..n_y {
            let xi = y_basis.composite_element(problem, Side::Y, k);
            let contracted = problem.contract_y_full(&xi);
            for (j, eta) in x_elements.iter().enumerate() {
                u[(j, k)] = eta.hs_inner(&contracted);
            }
        }

        let svd = real_svd(&u)?;

        let a_hat = x_basis.coefficients(&problem.layout.extract(Side::X, &problem.linear_x));
        let b_hat = y_basis.coefficients(&problem.layout.extract(Side::Y, &problem.linear_y));
        let a = svd.left.transpose() * &a_hat;
        let b = &svd.right * &b_hat;

        let x_rotated = (0..n_x)
            .map(|j| x_basis.functional(&svd.left.column(j).into_owned()))
            .collect();
        let y_rotated = (0..n_y)
            .map(|k| y_basis.functional(&svd.right.row(k).transpose()))
            .collect();

        Ok(Self {
            x_basis,
            y_basis,
            u,
            svd,
            a,
            b,
            x_rotated,
            y_rotated,
        })
    }

    pub fn n_x(&self) -> usize {
        self.x_basis.n()
    }

    pub fn n_y(&self) -> usize {
        self.y_basis.n()
    }

    /// Number of envelope-active coordinate pairs (rank K of U).
    pub fn rank(&self) -> usize {
        self.svd.rank
    }

    pub fn sigma(&self, j: usize) -> f64 {
        self.svd.sigma[j]
    }

    pub fn coefficient_matrix(&self) -> &DMatrix<f64> {
        &self.u
    }

    pub fn svd(&self) -> &RealSvd {
        &self.svd
    }

    pub fn linear_x_coeffs(&self) -> &DVector<f64> {
        &self.a
    }

    pub fn linear_y_coeffs(&self) -> &DVector<f64> {
        &self.b
    }

    /// Γ(X, Y): x_j = Σ_k S_{k,j} tr(X η_k), y_k = Σ_ℓ T_{k,ℓ} tr(Y ξ_ℓ).
    pub fn vector_rep(
        &self,
        x_ops: &[HermitianOperator],
        y_ops: &[HermitianOperator],
    ) -> (DVector<f64>, DVector<f64>) {
        let x_hat = self.x_basis.coefficients(x_ops);
        let y_hat = self.y_basis.coefficients(y_ops);
        (
            self.svd.left.transpose() * x_hat,
            &self.svd.right * y_hat,
        )
    }

    /// Γ⁻¹(x, y): reconstructs the operator pair from rotated coordinates.
    pub fn operators(
        &self,
        x: &DVector<f64>,
        y: &DVector<f64>,
    ) -> (Vec<HermitianOperator>, Vec<HermitianOperator>) {
        let x_hat = &self.svd.left * x;
        let y_hat = self.svd.right.transpose() * y;
        (
            self.x_basis.from_coefficients(&x_hat),
            self.y_basis.from_coefficients(&y_hat),
        )
    }

    /// f(x, y) = Σ_{j≤K} σ_j x_j y_j + Σ_j a_j x_j + Σ_k b_k y_k.
    pub fn f_value(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        let mut v = self.a.dot(x) + self.b.dot(y);
        for j in 0..self.rank() {
            v += self.svd.sigma[j] * x[j] * y[j];
        }
        v
    }

    /// The functional X ↦ x_j as (layout index, coefficient operator) terms.
    pub fn x_coordinate_functional(&self, j: usize) -> &[(usize, HermitianOperator)] {
        &self.x_rotated[j]
    }

    /// The functional Y ↦ y_k as (layout index, coefficient operator) terms.
    pub fn y_coordinate_functional(&self, k: usize) -> &[(usize, HermitianOperator)] {
        &self.y_rotated[k]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bnb::problem::{assemble_coupling, Layout, VariableBlock};
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};

    fn random_herm(rng: &mut impl Rng, d: usize) -> HermitianOperator {
        let m = DMatrix::from_fn(d, d, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        HermitianOperator::symmetrize(m)
    }

    fn two_block_problem(seed: u64) -> BilinearProblem {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let layout = Layout::new(vec![
            VariableBlock {
                id: "X".into(),
                side: Side::X,
                dim: 2,
            },
            VariableBlock {
                id: "R".into(),
                side: Side::Y,
                dim: 2,
            },
            VariableBlock {
                id: "S".into(),
                side: Side::Y,
                dim: 2,
            },
        ])
        .unwrap();
        let coupling = assemble_coupling(
            &layout,
            &[
                (0, 0, random_herm(&mut rng, 4)),
                (0, 1, random_herm(&mut rng, 4)),
            ],
        )
        .unwrap();
        BilinearProblem::new(
            layout,
            coupling,
            random_herm(&mut rng, 2),
            random_herm(&mut rng, 4),
            vec![],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn f_matches_objective_on_random_pairs() {
        let problem = two_block_problem(21);
        let gm = GammaMap::new(&problem).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(22);
        for _ in 0..50 {
            let x_ops = vec![random_herm(&mut rng, 2)];
            let y_ops = vec![random_herm(&mut rng, 2), random_herm(&mut rng, 2)];
            let (x, y) = gm.vector_rep(&x_ops, &y_ops);
            let f = gm.f_value(&x, &y);
            let big_f = problem.objective_value(&x_ops, &y_ops).unwrap();
            assert_abs_diff_eq!(f, big_f, epsilon = 1e-9);
        }
    }

    #[test]
    fn vectorization_roundtrip() {
        let problem = two_block_problem(31);
        let gm = GammaMap::new(&problem).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(32);
        for _ in 0..20 {
            let x_ops = vec![random_herm(&mut rng, 2)];
            let y_ops = vec![random_herm(&mut rng, 2), random_herm(&mut rng, 2)];
            let (x, y) = gm.vector_rep(&x_ops, &y_ops);
            let (x_back, y_back) = gm.operators(&x, &y);
            for (a, b) in x_ops.iter().zip(&x_back) {
                assert!((a - b).max_abs_entry() < 1e-10);
            }
            for (a, b) in y_ops.iter().zip(&y_back) {
                assert!((a - b).max_abs_entry() < 1e-10);
            }
            // Γ is an isometry per side.
            let xnorm: f64 = x_ops.iter().map(|o| o.frobenius_norm().powi(2)).sum();
            assert_abs_diff_eq!(x.norm_squared(), xnorm, epsilon = 1e-9);
        }
    }

    #[test]
    fn reconstructed_operators_hermitian() {
        let problem = two_block_problem(41);
        let gm = GammaMap::new(&problem).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let x = DVector::from_fn(gm.n_x(), |_, _| rng.gen_range(-1.0..1.0));
        let y = DVector::from_fn(gm.n_y(), |_, _| rng.gen_range(-1.0..1.0));
        let (x_ops, y_ops) = gm.operators(&x, &y);
        // Hermitian by construction: real combinations of Hermitian elements.
        for op in x_ops.iter().chain(&y_ops) {
            let adj = HermitianOperator::try_new(op.matrix().adjoint()).unwrap();
            assert!((op - &adj).max_abs_entry() < 1e-12);
        }
        // Zero maps to zero.
        let (x0, y0) = gm.operators(&DVector::zeros(gm.n_x()), &DVector::zeros(gm.n_y()));
        assert!(x0.iter().all(|o| o.max_abs_entry() == 0.0));
        assert!(y0.iter().all(|o| o.max_abs_entry() == 0.0));
    }

    #[test]
    fn identity_rotation_when_u_is_diagonal() {
        // Q = Σ_j c_j η_j ⊗ ξ_j with descending positive c makes U diagonal,
        // so S = T = I and x_j = tr(X η_j).
        let layout = Layout::new(vec![
            VariableBlock {
                id: "X".into(),
                side: Side::X,
                dim: 2,
            },
            VariableBlock {
                id: "Y".into(),
                side: Side::Y,
                dim: 2,
            },
        ])
        .unwrap();
        let basis = hermitian_basis(2).unwrap();
        let mut coupling = HermitianOperator::zeros(4);
        for (j, c) in [4.0, 3.0, 2.0, 1.0].iter().enumerate() {
            coupling = &coupling + &basis.element(j).tensor(basis.element(j)).scale(*c);
        }
        let problem = BilinearProblem::new(
            layout,
            coupling,
            HermitianOperator::zeros(2),
            HermitianOperator::zeros(2),
            vec![],
            vec![],
        )
        .unwrap();
        let gm = GammaMap::new(&problem).unwrap();
        assert_eq!(gm.rank(), 4);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(52);
        let h = random_herm(&mut rng, 2);
        let (x, _) = gm.vector_rep(&[h.clone()], &[HermitianOperator::zeros(2)]);
        for j in 0..4 {
            assert_abs_diff_eq!(x[j], basis.element(j).hs_inner(&h), epsilon = 1e-9);
        }
    }
}
