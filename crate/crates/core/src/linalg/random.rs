use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::{Matrix, C64};
use super::{gram_schmidt_columns, hermitian_function};
use crate::error::{invalid, Result};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Real matrix with independent standard normal entries.
pub fn random_gaussian(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut rng = seeded_rng(seed);
    Matrix::from_fn(rows, cols, |_, _| C64::new(rng.sample(StandardNormal), 0.0))
}

pub fn random_symmetric(n: usize, seed: u64) -> Matrix {
    random_gaussian(n, n, seed).hermitian_part()
}

/// `n × k` real matrix with orthonormal columns spanning a Haar-random subspace.
pub fn random_orthonormal(n: usize, k: usize, seed: u64) -> Result<Matrix> {
    if k == 0 || k > n {
        return Err(invalid(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    let g = random_gaussian(n, k, seed);
    Ok(gram_schmidt_columns(&g))
}

pub fn random_orthogonal(n: usize, seed: u64) -> Matrix {
    random_orthonormal(n, n, seed).expect("square case is valid")
}

/// SPD matrix with eigenvalues log-uniform in `[1/kappa, 1]`, both ends included.
pub fn random_spd(n: usize, kappa: f64, seed: u64) -> Result<Matrix> {
    if n == 0 {
        return Err(invalid("spd dimension must be positive"));
    }
    if !(kappa > 1.0) || !kappa.is_finite() {
        return Err(invalid(format!("kappa must be finite and > 1, got {kappa}")));
    }
    let mut rng = seeded_rng(seed);
    let q = random_orthogonal(n, rng.random());
    let lo = -kappa.ln();
    let mut eig: Vec<f64> = (0..n).map(|_| (lo * rng.random::<f64>()).exp()).collect();
    if n >= 2 {
        eig[0] = 1.0;
        eig[1] = 1.0 / kappa;
    }
    let d = Matrix::diag_real(&eig);
    let m = q.matmul(&d).matmul(&q.transpose());
    // Exact symmetry and real entries.
    let sym = m.hermitian_part();
    Ok(Matrix::from_fn(n, n, |i, j| C64::new(sym[(i, j)].re, 0.0)))
}

/// Square matrix with strictly dominant diagonal by rows; signs and margins are random.
pub fn random_diagonally_dominant(n: usize, seed: u64) -> Matrix {
    let mut rng = seeded_rng(seed);
    let mut a = random_gaussian(n, n, rng.random());
    for i in 0..n {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| a[(i, j)].norm()).sum();
        let margin = 0.01 + rng.random::<f64>();
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        a[(i, i)] = C64::new(sign * (off + margin), 0.0);
    }
    a
}

/// Symmetric positive semidefinite matrix with prescribed spectrum.
pub fn with_spectrum(eigs: &[f64], seed: u64) -> Matrix {
    let q = random_orthogonal(eigs.len(), seed);
    q.matmul(&Matrix::diag_real(eigs)).matmul(&q.transpose()).hermitian_part()
}

/// `M^{-1/2}` for SPD `m`.
pub fn inverse_sqrt(m: &Matrix) -> Result<Matrix> {
    hermitian_function(m, |x| C64::new(x.max(f64::MIN_POSITIVE).powf(-0.5), 0.0))
}
