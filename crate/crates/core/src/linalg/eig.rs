use super::matrix::{Matrix, C64};
use crate::error::{invalid, Result};

const MAX_SWEEPS: usize = 100;

fn symmetry_tolerance(a: &Matrix) -> f64 {
    1e-10 * a.max_abs().max(1.0)
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Returns eigenvalues ascending and the matching orthonormal eigenvectors as columns.
pub fn sym_eig(a: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    if !a.is_square() {
        return Err(invalid(format!("eigensolver needs a square matrix, got {:?}", a.shape())));
    }
    if !a.is_finite() {
        return Err(invalid("eigensolver input has non-finite entries"));
    }
    let defect = a.hermitian_defect();
    if defect > symmetry_tolerance(a) {
        return Err(invalid(format!("matrix is not symmetric (defect {defect:.3e})")));
    }
    let n = a.rows();
    let mut h = a.hermitian_part();
    let mut v = Matrix::identity(n);
    let scale = h.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| h[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = h[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let app = h[(p, p)].re;
                let aqq = h[(q, q)].re;
                if r <= 1e-18 * (app.abs() + aqq.abs()) {
                    h[(p, q)] = C64::new(0.0, 0.0);
                    h[(q, p)] = C64::new(0.0, 0.0);
                    continue;
                }
                // Φ = diag(1, e^{-iφ}) makes the pair real; then a real Jacobi rotation.
                let phase = (apq / r).conj();
                let theta = (aqq - app) / (2.0 * r);
                let t = if theta == 0.0 {
                    1.0
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let x = h[(k, p)];
                    let y = h[(k, q)] * phase;
                    h[(k, p)] = x * c - y * s;
                    h[(k, q)] = x * s + y * c;
                }
                for k in 0..n {
                    let x = h[(p, k)];
                    let y = h[(q, k)] * phase.conj();
                    h[(p, k)] = x * c - y * s;
                    h[(q, k)] = x * s + y * c;
                }
                h[(p, q)] = C64::new(0.0, 0.0);
                h[(q, p)] = C64::new(0.0, 0.0);
                h[(p, p)] = C64::new(h[(p, p)].re, 0.0);
                h[(q, q)] = C64::new(h[(q, q)].re, 0.0);
                for k in 0..n {
                    let x = v[(k, p)];
                    let y = v[(k, q)] * phase;
                    v[(k, p)] = x * c - y * s;
                    v[(k, q)] = x * s + y * c;
                }
            }
        }
    }

    let diag: Vec<f64> = (0..n).map(|i| h[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let vals = order.iter().map(|&i| diag[i]).collect();
    let vecs = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok((vals, vecs))
}

/// `V f(Λ) V†` for Hermitian `a`.
pub fn hermitian_function(a: &Matrix, f: impl Fn(f64) -> C64) -> Result<Matrix> {
    let (vals, vecs) = sym_eig(a)?;
    let n = a.rows();
    let fv: Vec<C64> = vals.iter().map(|&x| f(x)).collect();
    let mut scaled = vecs.clone();
    for j in 0..n {
        for i in 0..n {
            scaled[(i, j)] *= fv[j];
        }
    }
    Ok(scaled.matmul(&vecs.adjoint()))
}

/// `exp(−i·h·t)` through the spectral decomposition of `h`.
pub fn matrix_exp_unitary(h: &Matrix, t: f64) -> Result<Matrix> {
    hermitian_function(h, |x| C64::new(0.0, -x * t).exp())
}
