//! Shared wire representation for complex matrices.
//!
//! All file formats serialize matrices as nested arrays of `[re, im]` pairs,
//! row-major.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::operator::HermitianOperator;

/// Row-major nested array of `[re, im]` pairs.
pub type RawComplexMatrix = Vec<Vec<[f64; 2]>>;

/// Converts the raw nested-array form into a dense complex matrix.
pub fn complex_from_raw(raw: &RawComplexMatrix) -> Result<DMatrix<Complex64>> {
    let rows = raw.len();
    if rows == 0 {
        return Err(CoreError::InvalidInput("empty matrix".into()));
    }
    let cols = raw[0].len();
    if raw.iter().any(|r| r.len() != cols) {
        return Err(CoreError::InvalidInput("ragged matrix rows".into()));
    }
    let mat = DMatrix::from_fn(rows, cols, |i, j| {
        Complex64::new(raw[i][j][0], raw[i][j][1])
    });
    if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(CoreError::InvalidInput(
            "matrix contains non-finite entries".into(),
        ));
    }
    Ok(mat)
}

/// Converts a dense complex matrix into the raw nested-array form.
pub fn complex_to_raw(mat: &DMatrix<Complex64>) -> RawComplexMatrix {
    (0..mat.nrows())
        .map(|i| (0..mat.ncols()).map(|j| [mat[(i, j)].re, mat[(i, j)].im]).collect())
        .collect()
}

/// Parses a Hermitian operator from the raw form, validating hermiticity
/// within `tol`.
pub fn hermitian_from_raw(raw: &RawComplexMatrix, tol: f64) -> Result<HermitianOperator> {
    HermitianOperator::try_new_with_tol(complex_from_raw(raw)?, tol)
}

/// Serializes a Hermitian operator into the raw form.
pub fn hermitian_to_raw(h: &HermitianOperator) -> RawComplexMatrix {
    complex_to_raw(h.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let raw: RawComplexMatrix = vec![
            vec![[1.0, 0.0], [0.5, -0.25]],
            vec![[0.5, 0.25], [-2.0, 0.0]],
        ];
        let h = hermitian_from_raw(&raw, 1e-12).unwrap();
        assert_eq!(hermitian_to_raw(&h), raw);
    }

    #[test]
    fn ragged_rejected() {
        let raw: RawComplexMatrix = vec![vec![[1.0, 0.0]], vec![[0.0, 0.0], [1.0, 0.0]]];
        assert!(complex_from_raw(&raw).is_err());
    }
}
