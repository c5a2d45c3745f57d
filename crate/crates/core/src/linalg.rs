//! Dense numerical helpers: SVD-based rank, null spaces, Kronecker and
//! block-diagonal products.

use nalgebra::DMatrix;

pub type Matrix = DMatrix<f64>;

/// Threshold below which a singular value counts as zero.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum RankTolerance {
    /// `max(rows, cols) · ε · σ_max`.
    #[default]
    Default,
    /// Fixed absolute threshold.
    Absolute(f64),
}

impl RankTolerance {
    pub fn threshold(self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        match self {
            RankTolerance::Default => rows.max(cols) as f64 * f64::EPSILON * sigma_max,
            RankTolerance::Absolute(t) => t,
        }
    }
}

/// Singular values in descending order. Empty for matrices with a zero dimension.
pub fn singular_values(m: &Matrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn rank(m: &Matrix, tol: RankTolerance) -> usize {
    let s = singular_values(m);
    let Some(&smax) = s.first() else { return 0 };
    let t = tol.threshold(m.nrows(), m.ncols(), smax);
    s.iter().filter(|&&x| x > t).count()
}

/// Rank of a matrix computed as a product of factors whose spectral norms
/// multiply to `scale`. The default threshold uses `scale` in place of the
/// product's own `σ_max`, so a product that is zero in exact arithmetic
/// but carries rounding dust gets rank 0.
pub fn rank_of_product(m: &Matrix, scale: f64, tol: RankTolerance) -> usize {
    let s = singular_values(m);
    if s.is_empty() {
        return 0;
    }
    let t = tol.threshold(m.nrows(), m.ncols(), scale.max(s[0]));
    s.iter().filter(|&&x| x > t).count()
}

/// Largest singular value (0 for empty matrices).
pub fn spectral_norm(m: &Matrix) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Right singular vectors sorted by ascending singular value, paired with
/// their singular values (zero for directions beyond the row count).
fn right_singular_pairs(m: &Matrix) -> Vec<(f64, Vec<f64>)> {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return Vec::new();
    }
    // Pad with zero rows so the decomposition returns a full set of right
    // singular vectors.
    let padded = if rows < cols {
        let mut p = Matrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let mut pairs: Vec<(f64, Vec<f64>)> = svd
        .singular_values
        .iter()
        .enumerate()
        .map(|(k, &s)| (s, vt.row(k).iter().copied().collect()))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

/// Orthonormal basis (as columns) of the numerical null space of `m`.
pub fn null_space(m: &Matrix, tol: RankTolerance) -> Matrix {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return Matrix::zeros(0, 0);
    }
    if rows == 0 {
        return Matrix::identity(cols, cols);
    }
    let pairs = right_singular_pairs(m);
    let smax = pairs.last().map(|p| p.0).unwrap_or(0.0);
    let t = tol.threshold(rows, cols, smax);
    let basis: Vec<&Vec<f64>> = pairs.iter().filter(|p| p.0 <= t).map(|p| &p.1).collect();
    let mut out = Matrix::zeros(cols, basis.len());
    for (j, v) in basis.iter().enumerate() {
        for (i, &x) in v.iter().enumerate() {
            out[(i, j)] = x;
        }
    }
    out
}

/// The `k` right singular vectors of `m` with the smallest singular values,
/// as orthonormal columns, together with the largest singular value among
/// them and the smallest among the rest.
pub fn smallest_right_singular(m: &Matrix, k: usize) -> (Matrix, f64, f64) {
    let cols = m.ncols();
    let pairs = right_singular_pairs(m);
    let mut out = Matrix::zeros(cols, k);
    for (j, (_, v)) in pairs.iter().take(k).enumerate() {
        for (i, &x) in v.iter().enumerate() {
            out[(i, j)] = x;
        }
    }
    let inside = if k == 0 { 0.0 } else { pairs[k - 1].0 };
    let outside = pairs.get(k).map(|p| p.0).unwrap_or(f64::INFINITY);
    (out, inside, outside)
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    a.kronecker(b)
}

pub fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), a.ncols()), b.shape()).copy_from(b);
    out
}

pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// True when the square matrix `m` has full numerical rank.
pub fn is_invertible(m: &Matrix, tol: RankTolerance) -> bool {
    m.is_square() && rank(m, tol) == m.nrows()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_simple_matrices() {
        let m = Matrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 1.0, 0.0, 1.0]);
        assert_eq!(rank(&m, RankTolerance::Default), 2);
        assert_eq!(rank(&Matrix::zeros(3, 2), RankTolerance::Default), 0);
        assert_eq!(rank(&Matrix::zeros(0, 4), RankTolerance::Default), 0);
        assert_eq!(rank(&Matrix::identity(4, 4), RankTolerance::Default), 4);
    }

    #[test]
    fn product_dust_has_rank_zero() {
        let dust = Matrix::from_row_slice(2, 2, &[1e-17, 0.0, 0.0, 3e-17]);
        assert_eq!(rank(&dust, RankTolerance::Default), 2);
        assert_eq!(rank_of_product(&dust, 1.0, RankTolerance::Default), 0);
        assert_eq!(rank_of_product(&Matrix::identity(2, 2), 1.0, RankTolerance::Default), 2);
    }

    #[test]
    fn absolute_tolerance_override() {
        let m = Matrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1e-6]);
        assert_eq!(rank(&m, RankTolerance::Default), 2);
        assert_eq!(rank(&m, RankTolerance::Absolute(1e-3)), 1);
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let m = Matrix::from_row_slice(1, 3, &[1.0, 1.0, 1.0]);
        let n = null_space(&m, RankTolerance::Default);
        assert_eq!(n.shape(), (3, 2));
        assert!((&m * &n).norm() < 1e-12);
        assert!((n.transpose() * &n - Matrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn null_space_edge_shapes() {
        assert_eq!(null_space(&Matrix::zeros(0, 3), RankTolerance::Default).shape(), (3, 3));
        assert_eq!(null_space(&Matrix::zeros(2, 0), RankTolerance::Default).shape(), (0, 0));
        assert_eq!(null_space(&Matrix::identity(3, 3), RankTolerance::Default).ncols(), 0);
    }

    #[test]
    fn block_diag_layout() {
        let a = Matrix::from_row_slice(1, 2, &[1.0, 2.0]);
        let b = Matrix::from_row_slice(2, 1, &[3.0, 4.0]);
        let d = block_diag(&a, &b);
        assert_eq!(d.shape(), (3, 3));
        assert_eq!(d[(0, 1)], 2.0);
        assert_eq!(d[(2, 2)], 4.0);
        assert_eq!(d[(0, 2)], 0.0);
    }
}
