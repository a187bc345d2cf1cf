//! Small dense linear-algebra helpers on top of nalgebra's SVD.
//!
//! Ranks are always decided from singular values relative to the largest one,
//! with a tiny absolute floor so that an exactly-zero map has rank 0.

use nalgebra::{DMatrix, DVector};

/// Linear maps between coordinate spaces of Lie algebras.
pub type LinearMap = DMatrix<f64>;

/// Singular values below this are treated as zero even for a zero matrix.
pub const ABSOLUTE_FLOOR: f64 = 1e-13;

/// Singular values of `a`, sorted descending.
pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Threshold below which a singular value counts as zero.
pub fn rank_threshold(sigma: &[f64], rel_tol: f64) -> f64 {
    let max = sigma.first().copied().unwrap_or(0.0);
    (rel_tol * max).max(ABSOLUTE_FLOOR)
}

pub fn numerical_rank(a: &DMatrix<f64>, rel_tol: f64) -> usize {
    let s = singular_values(a);
    let thr = rank_threshold(&s, rel_tol);
    s.iter().filter(|&&x| x > thr).count()
}

/// Square matrix with the same row space as `a`, padded with zero rows, so
/// that the SVD returns a full set of right singular vectors.
fn padded(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.ncols();
    if a.nrows() >= n {
        return a.clone();
    }
    let mut p = DMatrix::zeros(n, n);
    p.view_mut((0, 0), (a.nrows(), n)).copy_from(a);
    p
}

/// Orthonormal basis (as columns) of the numerical kernel of `a`.
pub fn kernel(a: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let n = a.ncols();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    if a.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    let svd = padded(a).svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    let mut sorted = sigma.clone();
    sorted.sort_by(|x, y| y.total_cmp(x));
    let thr = rank_threshold(&sorted, rel_tol);
    let cols: Vec<DVector<f64>> = sigma
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= thr)
        .map(|(i, _)| v_t.row(i).transpose())
        .collect();
    columns(n, &cols)
}

/// Orthonormal basis (as columns) of the column space of `a`.
pub fn image(a: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let m = a.nrows();
    if m == 0 || a.ncols() == 0 {
        return DMatrix::zeros(m, 0);
    }
    let t = a.transpose();
    let svd = padded(&t).svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    let mut sorted = sigma.clone();
    sorted.sort_by(|x, y| y.total_cmp(x));
    let thr = rank_threshold(&sorted, rel_tol);
    let cols: Vec<DVector<f64>> = sigma
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > thr)
        .map(|(i, _)| v_t.row(i).transpose())
        .collect();
    columns(m, &cols)
}

pub fn columns(nrows: usize, cols: &[DVector<f64>]) -> DMatrix<f64> {
    if cols.is_empty() {
        DMatrix::zeros(nrows, 0)
    } else {
        DMatrix::from_columns(cols)
    }
}

/// Moore–Penrose pseudo-inverse with a relative cutoff.
pub fn pseudo_inverse(a: &DMatrix<f64>, rel_tol: f64) -> DMatrix<f64> {
    let s = singular_values(a);
    let thr = rank_threshold(&s, rel_tol);
    a.clone()
        .svd(true, true)
        .pseudo_inverse(thr)
        .expect("both singular vector sets computed")
}

/// Cross-product matrix: `cross_matrix(v) * w == v × w`.
pub fn cross_matrix(v: &[f64]) -> DMatrix<f64> {
    DMatrix::from_row_slice(3, 3, &[0.0, -v[2], v[1], v[2], 0.0, -v[0], -v[1], v[0], 0.0])
}

/// Block-diagonal assembly.
pub fn block_diag(blocks: &[DMatrix<f64>]) -> DMatrix<f64> {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = DMatrix::zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), (b.nrows(), b.ncols())).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_wide_matrix_is_complete() {
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 0.0, 0.0]);
        let k = kernel(&a, 1e-10);
        assert_eq!(k.ncols(), 2);
        assert!((&a * &k).norm() < 1e-14);
        assert!((k.transpose() * &k - DMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let a = DMatrix::<f64>::zeros(3, 12);
        assert_eq!(numerical_rank(&a, 1e-8), 0);
        assert_eq!(kernel(&a, 1e-8).ncols(), 12);
        assert_eq!(image(&a, 1e-8).ncols(), 0);
    }

    #[test]
    fn image_spans_columns() {
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 0.0, 0.0, 1.0, 2.0]);
        let im = image(&a, 1e-10);
        assert_eq!(im.ncols(), 1);
        let proj = &im * im.transpose();
        assert!((&proj * &a - &a).norm() < 1e-12);
    }
}
