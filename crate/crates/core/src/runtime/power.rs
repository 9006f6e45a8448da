use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};
use crate::linalg::{inner, seeded_rng, vec_norm, Matrix, C64};

const PILOT_ITERS: usize = 60;
const MAX_ITERS: usize = 100_000;

fn random_unit(n: usize, seed: u64) -> Vec<C64> {
    let mut rng = seeded_rng(seed);
    let v: Vec<C64> = (0..n).map(|_| C64::new(rng.sample(StandardNormal), 0.0)).collect();
    let nrm = vec_norm(&v);
    v.into_iter().map(|z| z / nrm).collect()
}

/// Power iteration on `b`; returns the Rayleigh quotient and the final unit vector.
fn power_iterate(b: &Matrix, iters: usize, mut v: Vec<C64>) -> (f64, Vec<C64>) {
    for _ in 0..iters {
        let w = b.mat_vec(&v);
        let nrm = vec_norm(&w);
        if nrm == 0.0 {
            return (0.0, v);
        }
        v = w.into_iter().map(|z| z / nrm).collect();
    }
    (inner(&v, &b.mat_vec(&v)).re, v)
}

fn check_input(a: &Matrix) -> Result<()> {
    if !a.is_square() || a.hermitian_defect() > 1e-10 {
        return Err(invalid("power method needs a symmetric matrix"));
    }
    Ok(())
}

/// `λ_min(a)` for symmetric PSD `a` with `‖a‖₂ ≤ 1`, by power iteration on `I − a`.
pub fn power_method_min_eig(a: &Matrix, iters: usize, seed: u64) -> Result<f64> {
    if iters == 0 {
        return Err(invalid("power method needs at least one iteration"));
    }
    check_input(a)?;
    let b = Matrix::identity(a.rows()).sub(a);
    if b.max_abs() == 0.0 {
        return Ok(1.0);
    }
    let (mu, _) = power_iterate(&b, iters, random_unit(a.rows(), seed));
    Ok(1.0 - mu)
}

/// Iteration count `⌈10·ln(max(dim, e²))/gap⌉` with the relative gap of `I − a` taken from
/// short pilot runs on the top two eigenvalues; capped at 100 000.
pub fn default_power_iterations(a: &Matrix, seed: u64) -> Result<usize> {
    check_input(a)?;
    let n = a.rows();
    if n == 1 {
        return Ok(1);
    }
    let b = Matrix::identity(n).sub(a);
    let (mu1, v1) = power_iterate(&b, PILOT_ITERS, random_unit(n, seed));
    if mu1 <= 0.0 {
        return Ok(1);
    }
    let deflated = Matrix::from_fn(n, n, |i, j| b[(i, j)] - v1[i] * v1[j].conj() * mu1);
    let (mu2, _) = power_iterate(&deflated, PILOT_ITERS, random_unit(n, seed.wrapping_add(1)));
    let gap = ((mu1 - mu2.abs()) / mu1).max(1e-12);
    let log_dim = (n as f64).ln().max(2.0);
    Ok(((10.0 * log_dim / gap).ceil() as usize).clamp(1, MAX_ITERS))
}
