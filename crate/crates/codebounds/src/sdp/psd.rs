//! Positive-semidefiniteness checks for dense symmetric matrices.

use nalgebra::DMatrix;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PsdError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
}

/// Smallest eigenvalue of a symmetric matrix (`0` for empty matrices).
pub fn min_eigenvalue(m: &DMatrix<f64>) -> Result<f64, PsdError> {
    if m.nrows() != m.ncols() {
        return Err(PsdError::NotSymmetric);
    }
    let scale = m.amax().max(1.0);
    for r in 0..m.nrows() {
        for c in 0..r {
            if (m[(r, c)] - m[(c, r)]).abs() > 1e-10 * scale {
                return Err(PsdError::NotSymmetric);
            }
        }
    }
    if m.nrows() == 0 {
        return Ok(0.0);
    }
    let sym = nalgebra::SymmetricEigen::new(m.clone());
    Ok(sym.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
}

/// True iff every eigenvalue is at least `-tol`.
pub fn check_psd(m: &DMatrix<f64>, tol: f64) -> Result<bool, PsdError> {
    Ok(min_eigenvalue(m)? >= -tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_zero_are_psd() {
        assert!(check_psd(&DMatrix::identity(4, 4), 1e-12).unwrap());
        assert!(check_psd(&DMatrix::zeros(3, 3), 1e-12).unwrap());
        assert!(check_psd(&DMatrix::zeros(0, 0), 1e-12).unwrap());
    }

    #[test]
    fn indefinite_detected() {
        // eigenvalues 3 and -1
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(!check_psd(&m, 1e-8).unwrap());
        assert!((min_eigenvalue(&m).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn asymmetric_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert_eq!(check_psd(&m, 1e-8), Err(PsdError::NotSymmetric));
    }
}
