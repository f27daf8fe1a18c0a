//! Dense eigen and singular value decompositions backed by `faer`.

use faer::{Mat, Side};
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::C64;

/// Eigenvalues in nondecreasing order with orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Eigen<T> {
    pub values: DVector<f64>,
    pub vectors: DMatrix<T>,
}

fn to_faer<T: Copy>(m: &DMatrix<T>) -> Mat<T> {
    Mat::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
}

fn from_faer<T: Copy + nalgebra::Scalar>(m: faer::MatRef<'_, T>) -> DMatrix<T> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
}

pub fn symmetric_eigen(m: &DMatrix<f64>) -> Result<Eigen<f64>> {
    let evd = to_faer(m)
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("symmetric eigensolver failed: {e:?}")))?;
    let values = DVector::from_iterator(m.nrows(), evd.S().column_vector().iter().copied());
    Ok(Eigen { values, vectors: from_faer(evd.U()) })
}

pub fn hermitian_eigen(m: &DMatrix<C64>) -> Result<Eigen<C64>> {
    let evd = to_faer(m)
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("hermitian eigensolver failed: {e:?}")))?;
    let values = DVector::from_iterator(m.nrows(), evd.S().column_vector().iter().map(|z| z.re));
    Ok(Eigen { values, vectors: from_faer(evd.U()) })
}

/// `m = u diag(s) v^T` with singular values in nonincreasing order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DMatrix<f64>,
    pub s: DVector<f64>,
    pub v: DMatrix<f64>,
}

pub fn svd(m: &DMatrix<f64>) -> Result<Svd> {
    let d = to_faer(m)
        .svd()
        .map_err(|e| Error::Numerical(format!("singular value decomposition failed: {e:?}")))?;
    let k = m.nrows().min(m.ncols());
    let s = DVector::from_iterator(k, d.S().column_vector().iter().copied().take(k));
    Ok(Svd { u: from_faer(d.U()), s, v: from_faer(d.V()) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstructs_symmetric_matrix() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 3.0]);
        let e = symmetric_eigen(&m).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[2] - 3.0).abs() < 1e-14);
        let back = &e.vectors * DMatrix::from_diagonal(&e.values) * e.vectors.transpose();
        assert!((back - m).abs().max() < 1e-14);
    }

    #[test]
    fn svd_reconstructs() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 2.0, -1.0, 0.0]);
        let d = svd(&m).unwrap();
        assert_eq!(d.s.as_slice(), &[2.0, 1.0]);
        let back = &d.u * DMatrix::from_diagonal(&d.s) * d.v.transpose();
        assert!((back - m).abs().max() < 1e-14);
    }
}
