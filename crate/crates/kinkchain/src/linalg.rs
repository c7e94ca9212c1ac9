//! Thin bridge between `ndarray` containers and `faer` decompositions.

use faer::Side;
use ndarray::{Array1, Array2, ArrayView2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

fn to_faer_f64(a: ArrayView2<'_, f64>) -> faer::Mat<f64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

fn to_faer_c64(a: ArrayView2<'_, C64>) -> faer::Mat<C64> {
    faer::Mat::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

/// Eigendecomposition of a real symmetric matrix. Returns eigenvalues in
/// ascending order and the matrix whose columns are the eigenvectors.
pub fn eigh(a: ArrayView2<'_, f64>) -> Result<(Array1<f64>, Array2<f64>)> {
    let m = to_faer_f64(a);
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("symmetric eigensolver failed: {e:?}")))?;
    let n = a.nrows();
    let s = evd.S().column_vector();
    let vals = Array1::from_iter((0..n).map(|i| s[i]));
    let u = evd.U();
    let vecs = Array2::from_shape_fn((n, n), |(i, j)| u[(i, j)]);
    Ok((vals, vecs))
}

/// Eigendecomposition of a complex Hermitian matrix.
pub fn eigh_c(a: ArrayView2<'_, C64>) -> Result<(Array1<f64>, Array2<C64>)> {
    let m = to_faer_c64(a);
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numerical(format!("hermitian eigensolver failed: {e:?}")))?;
    let n = a.nrows();
    let s = evd.S().column_vector();
    let vals = Array1::from_iter((0..n).map(|i| s[i].re));
    let u = evd.U();
    let vecs = Array2::from_shape_fn((n, n), |(i, j)| u[(i, j)]);
    Ok((vals, vecs))
}

/// Thin SVD of a complex matrix: returns (u, s, vh) with a = u diag(s) vh,
/// singular values in descending order, u of shape (m, k), vh of shape
/// (k, n) with k = min(m, n).
pub fn svd_c(a: ArrayView2<'_, C64>) -> Result<(Array2<C64>, Array1<f64>, Array2<C64>)> {
    let m = to_faer_c64(a);
    let svd = m
        .thin_svd()
        .map_err(|e| Error::Numerical(format!("SVD failed: {e:?}")))?;
    let k = a.nrows().min(a.ncols());
    let sv = svd.S().column_vector();
    let s = Array1::from_iter((0..k).map(|i| sv[i].re));
    let fu = svd.U();
    let fv = svd.V();
    let u = Array2::from_shape_fn((a.nrows(), k), |(i, j)| fu[(i, j)]);
    let vh = Array2::from_shape_fn((k, a.ncols()), |(i, j)| fv[(j, i)].conj());
    Ok((u, s, vh))
}
