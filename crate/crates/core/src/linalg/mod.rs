//! Dense linear algebra on complex matrices.
//!
//! Everything is implemented directly on [`Matrix`]: one-sided Jacobi SVD, a cyclic
//! Jacobi eigensolver for Hermitian matrices, spectral matrix functions and the
//! seeded instance generators used by tests and the CLI.

mod eig;
mod matrix;
mod random;
mod svd;

pub use eig::{hermitian_function, matrix_exp_unitary, sym_eig};
pub use matrix::{inner, next_pow2, vec_norm, Matrix, C64, ONE, ZERO};
pub use random::{
    inverse_sqrt, random_diagonally_dominant, random_gaussian, random_orthogonal,
    random_orthonormal, random_spd, random_symmetric, seeded_rng, with_spectrum,
};
pub use svd::{
    condition_number, jacobi_svd, operator_norm, singular_values, varah_bound, varah_check,
    SvdResult, VarahBound, VarahStatus,
};

/// Orthonormalises the columns of `a` (modified Gram–Schmidt, two passes).
pub fn gram_schmidt_columns(a: &Matrix) -> Matrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(a.cols());
    for j in 0..a.cols() {
        let mut v = a.column(j);
        for _ in 0..2 {
            for u in &cols {
                let proj = inner(u, &v);
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= proj * y;
                }
            }
        }
        let nrm = vec_norm(&v);
        assert!(nrm > 1e-12, "gram-schmidt on rank-deficient columns");
        cols.push(v.into_iter().map(|z| z / nrm).collect());
    }
    Matrix::from_columns(&cols)
}

/// Extends orthonormal columns to an `n × n` unitary by sweeping the standard basis.
///
/// The first columns of the result are exactly `partial`.
pub fn orthonormal_completion(partial: Option<&Matrix>, n: usize) -> Matrix {
    let mut cols: Vec<Vec<C64>> = match partial {
        Some(p) => (0..p.cols()).map(|j| p.column(j)).collect(),
        None => Vec::new(),
    };
    let mut e = 0;
    while cols.len() < n {
        assert!(e < n, "completion ran out of basis vectors");
        let mut v = vec![ZERO; n];
        v[e] = ONE;
        e += 1;
        for _ in 0..2 {
            for u in &cols {
                let proj = inner(u, &v);
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= proj * y;
                }
            }
        }
        let nrm = vec_norm(&v);
        // Residuals below 1/(2√n) would lose digits; a better basis vector always exists.
        if nrm > 0.5 / (n as f64).sqrt() {
            cols.push(v.into_iter().map(|z| z / nrm).collect());
        }
    }
    Matrix::from_columns(&cols)
}
