//! Quantum channels (CPTP maps) in Kraus form, with cached Choi matrix and
//! adjoint application.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::operator::HermitianOperator;

/// Tolerance on trace preservation and adjoint identities.
const CPTP_TOL: f64 = 1e-10;
/// Choi eigenvalues below this are truncated when extracting Kraus operators.
const CHOI_RANK_TOL: f64 = 1e-10;

/// A completely positive trace-preserving map on d×d matrices, held as a
/// Kraus operator list.
#[derive(Debug, Clone)]
pub struct QuantumChannel {
    dim: usize,
    kraus: Vec<DMatrix<Complex64>>,
    choi: HermitianOperator,
}

impl QuantumChannel {
    /// Builds a channel from Kraus operators, validating trace preservation
    /// (Σ KᵢᵀKᵢ = I within 1e-10); complete positivity then holds by
    /// construction of the Choi matrix.
    pub fn from_kraus(kraus: Vec<DMatrix<Complex64>>) -> Result<Self> {
        let dim = match kraus.first() {
            Some(k) if k.nrows() == k.ncols() && k.nrows() > 0 => k.nrows(),
            Some(k) => {
                return Err(CoreError::InvalidInput(format!(
                    "Kraus operators must be square, got {}x{}",
                    k.nrows(),
                    k.ncols()
                )))
            }
            None => {
                return Err(CoreError::InvalidInput(
                    "a channel needs at least one Kraus operator".into(),
                ))
            }
        };
        if kraus.iter().any(|k| k.nrows() != dim || k.ncols() != dim) {
            return Err(CoreError::InvalidInput(
                "Kraus operators have mixed dimensions".into(),
            ));
        }
        let mut completeness = DMatrix::<Complex64>::zeros(dim, dim);
        for k in &kraus {
            completeness += k.adjoint() * k;
        }
        let dev = (&completeness - DMatrix::<Complex64>::identity(dim, dim))
            .iter()
            .map(|z| z.norm())
            .fold(0.0f64, f64::max);
        if dev > CPTP_TOL {
            return Err(CoreError::Validation(format!(
                "Kraus operators are not trace preserving: completeness deviation {dev:.3e}"
            )));
        }
        let choi = choi_from_kraus(&kraus, dim);
        Ok(Self { dim, kraus, choi })
    }

    /// Builds a channel from its Choi matrix J = Σ_ij E_ij ⊗ Φ(E_ij) via
    /// eigendecomposition, truncating ranks below 1e-10.
    pub fn from_choi(choi: &HermitianOperator) -> Result<Self> {
        let dd = choi.dim();
        let dim = (dd as f64).sqrt().round() as usize;
        if dim * dim != dd {
            return Err(CoreError::InvalidInput(format!(
                "Choi matrix dimension {dd} is not a perfect square"
            )));
        }
        let (vals, vecs) = choi.eigen()?;
        let mut kraus = Vec::new();
        for (idx, &lam) in vals.iter().enumerate() {
            if lam < -CHOI_RANK_TOL {
                return Err(CoreError::Validation(format!(
                    "Choi matrix has negative eigenvalue {lam:.3e}; the map is not completely positive"
                )));
            }
            if lam <= CHOI_RANK_TOL {
                continue;
            }
            let v = vecs.column(idx);
            let mut k = DMatrix::<Complex64>::zeros(dim, dim);
            for i in 0..dim {
                for out in 0..dim {
                    k[(out, i)] = v[i * dim + out] * lam.sqrt();
                }
            }
            kraus.push(k);
        }
        Self::from_kraus(kraus)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[DMatrix<Complex64>] {
        &self.kraus
    }

    /// The Choi matrix Σ_ij E_ij ⊗ Φ(E_ij); PSD with Tr_out J = I.
    pub fn choi(&self) -> &HermitianOperator {
        &self.choi
    }

    /// Φ(ρ) = Σ K ρ Kᵀ.
    pub fn apply(&self, rho: &HermitianOperator) -> HermitianOperator {
        let mut out = DMatrix::<Complex64>::zeros(self.dim, self.dim);
        for k in &self.kraus {
            out += k * rho.matrix() * k.adjoint();
        }
        HermitianOperator::symmetrize(out)
    }

    /// The adjoint channel Φ*(A) = Σ Kᵀ A K, defined by
    /// tr(A Φ(B)) = tr(Φ*(A) B).
    pub fn apply_adjoint(&self, a: &HermitianOperator) -> HermitianOperator {
        let mut out = DMatrix::<Complex64>::zeros(self.dim, self.dim);
        for k in &self.kraus {
            out += k.adjoint() * a.matrix() * k;
        }
        HermitianOperator::symmetrize(out)
    }

    /// (I ⊗ Φ*)(M) for M on ℂᵈ ⊗ ℂᵈ.
    pub fn apply_adjoint_second_factor(&self, m: &HermitianOperator) -> Result<HermitianOperator> {
        let d = self.dim;
        if m.dim() != d * d {
            return Err(CoreError::InvalidInput(format!(
                "expected an operator on the d⊗d space ({}), got dimension {}",
                d * d,
                m.dim()
            )));
        }
        let mut out = DMatrix::<Complex64>::zeros(d * d, d * d);
        for k in &self.kraus {
            let lifted = DMatrix::<Complex64>::identity(d, d).kronecker(&k.adjoint());
            out += &lifted * m.matrix() * lifted.adjoint();
        }
        Ok(HermitianOperator::symmetrize(out))
    }
}

fn choi_from_kraus(kraus: &[DMatrix<Complex64>], dim: usize) -> HermitianOperator {
    // J = Σ_a (I ⊗ K_a) |Ω⟩⟨Ω| (I ⊗ K_a)ᵀ with |Ω⟩ = Σ_i |ii⟩.
    let mut j = DMatrix::<Complex64>::zeros(dim * dim, dim * dim);
    for k in kraus {
        // (I ⊗ K)|Ω⟩ has components v[(i, out)] = K[out, i].
        let mut v = DMatrix::<Complex64>::zeros(dim * dim, 1);
        for i in 0..dim {
            for out in 0..dim {
                v[(i * dim + out, 0)] = k[(out, i)];
            }
        }
        j += &v * v.adjoint();
    }
    HermitianOperator::symmetrize(j)
}

fn pauli(k: usize) -> DMatrix<Complex64> {
    let z = Complex64::new;
    match k {
        1 => DMatrix::from_row_slice(2, 2, &[z(0., 0.), z(1., 0.), z(1., 0.), z(0., 0.)]),
        2 => DMatrix::from_row_slice(2, 2, &[z(0., 0.), z(0., -1.), z(0., 1.), z(0., 0.)]),
        3 => DMatrix::from_row_slice(2, 2, &[z(1., 0.), z(0., 0.), z(0., 0.), z(-1., 0.)]),
        _ => DMatrix::identity(2, 2),
    }
}

/// The qubit dephasing channel: fixes the I and σ₃ Bloch components and
/// scales σ₁, σ₂ by `a`. Kraus operators √((1+a)/2)·I and √((1−a)/2)·σ₃.
pub fn dephasing_channel(a: f64) -> Result<QuantumChannel> {
    if !(0.0..=1.0).contains(&a) {
        return Err(CoreError::ParameterRange(format!(
            "dephasing parameter a = {a} outside [0, 1]"
        )));
    }
    let k0 = pauli(0).scale(((1.0 + a) / 2.0).sqrt());
    let k1 = pauli(3).scale(((1.0 - a) / 2.0).sqrt());
    QuantumChannel::from_kraus(vec![k0, k1])
}

/// The dephasing channel conjugated by exp(iθ₁σ₁/2): principal axes rotated
/// around the σ₁ axis.
pub fn rotated_dephasing(a: f64, theta1: f64) -> Result<QuantumChannel> {
    if !(0.0..=2.0 * std::f64::consts::PI + 1e-12).contains(&theta1) {
        return Err(CoreError::ParameterRange(format!(
            "rotation angle theta1 = {theta1} outside [0, 2π]"
        )));
    }
    let base = dephasing_channel(a)?;
    let half = theta1 / 2.0;
    // exp(iθσ₁/2) = cos(θ/2) I + i sin(θ/2) σ₁.
    let u = pauli(0).scale(half.cos()) + pauli(1) * Complex64::new(0.0, half.sin());
    let kraus = base
        .kraus()
        .iter()
        .map(|k| u.adjoint() * k * &u)
        .collect();
    QuantumChannel::from_kraus(kraus)
}
