use super::matrix::{inner, vec_norm, Matrix, C64, ZERO};
use super::orthonormal_completion;
use crate::error::{invalid, Result};

const MAX_SWEEPS: usize = 80;

/// `A = left · diag(singulars) · right†`.
#[derive(Clone, Debug)]
pub struct SvdResult {
    pub left: Matrix,
    pub singulars: Vec<f64>,
    pub right: Matrix,
}

impl SvdResult {
    pub fn reconstruct(&self) -> Matrix {
        let mut us = self.left.clone();
        for j in 0..us.cols() {
            for i in 0..us.rows() {
                us[(i, j)] *= self.singulars[j];
            }
        }
        us.matmul(&self.right.adjoint())
    }
}

/// One-sided cyclic Jacobi SVD of a tall (`rows ≥ cols`) matrix.
///
/// Column pairs are made orthogonal by a phase alignment followed by a real plane rotation.
/// Sweeps run in fixed `(p, q)` order until no pair needs rotating.
pub fn jacobi_svd(a: &Matrix) -> Result<SvdResult> {
    if !a.is_finite() {
        return Err(invalid("svd input has non-finite entries"));
    }
    let (m, n) = a.shape();
    if m < n {
        return Err(invalid(format!("svd needs rows >= cols, got {m}x{n}")));
    }
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { C64::new(1.0, 0.0) } else { ZERO }).collect())
        .collect();
    let fro2 = a.frobenius_norm().powi(2);
    // Absolute floor from the frobenius criterion; the relative test drives convergence.
    let floor = 1e-14 * 1e-14 * fro2;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = cols[p].iter().map(|z| z.norm_sqr()).sum::<f64>();
                let beta = cols[q].iter().map(|z| z.norm_sqr()).sum::<f64>();
                let gamma = inner(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g <= floor || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut cols, p, q, phase, c, s);
                rotate_pair(&mut v, p, q, phase, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = cols.iter().map(|c| vec_norm(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let singulars: Vec<f64> = order.iter().map(|&i| norms[i]).collect();
    let smax = singulars.first().copied().unwrap_or(0.0);

    let mut left_cols = Vec::new();
    for &i in &order {
        if norms[i] > 1e-300 && norms[i] > 1e-15 * smax {
            left_cols.push(cols[i].iter().map(|z| z / norms[i]).collect::<Vec<_>>());
        } else {
            break;
        }
    }
    let rank = left_cols.len();
    let left = if rank == n {
        Matrix::from_columns(&left_cols)
    } else {
        let partial = if rank == 0 { None } else { Some(Matrix::from_columns(&left_cols)) };
        let full = orthonormal_completion(partial.as_ref(), m);
        full.submatrix(0, 0, m, n)
    };
    let right = Matrix::from_columns(&order.iter().map(|&i| v[i].clone()).collect::<Vec<_>>());
    Ok(SvdResult { left, singulars, right })
}

fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, phase: C64, c: f64, s: f64) {
    let (lo, hi) = cols.split_at_mut(q);
    let (cp, cq) = (&mut lo[p], &mut hi[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let a = *x;
        let b = *y * phase;
        *x = a * c - b * s;
        *y = a * s + b * c;
    }
}

/// Singular values of any shape, descending.
pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    if a.rows() >= a.cols() {
        Ok(jacobi_svd(a)?.singulars)
    } else {
        Ok(jacobi_svd(&a.adjoint())?.singulars)
    }
}

/// Spectral norm `‖A‖₂`.
pub fn operator_norm(a: &Matrix) -> Result<f64> {
    Ok(singular_values(a)?.first().copied().unwrap_or(0.0))
}

/// `σ_max / σ_min`, or `+∞` when `σ_min < 1e-14 σ_max`.
pub fn condition_number(a: &Matrix) -> Result<f64> {
    let s = singular_values(a)?;
    let smax = s[0];
    if smax == 0.0 {
        return Err(invalid("condition number of the zero matrix"));
    }
    let smin = *s.last().expect("non-empty");
    if smin < 1e-14 * smax {
        Ok(f64::INFINITY)
    } else {
        Ok(smax / smin)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VarahBound {
    pub alpha: f64,
    pub dominant: bool,
}

/// Row diagonal-dominance margin `α = min_k(|a_kk| − Σ_{j≠k} |a_kj|)`.
pub fn varah_bound(a: &Matrix) -> Result<VarahBound> {
    if !a.is_square() {
        return Err(invalid(format!("varah bound needs a square matrix, got {:?}", a.shape())));
    }
    let n = a.rows();
    let alpha = (0..n)
        .map(|k| {
            let off: f64 = (0..n).filter(|&j| j != k).map(|j| a[(k, j)].norm()).sum();
            a[(k, k)].norm() - off
        })
        .fold(f64::INFINITY, f64::min);
    Ok(VarahBound { alpha, dominant: alpha > 0.0 })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarahStatus {
    /// `σ_min > α` strictly.
    Holds,
    /// `σ_min = α` to round-off; the bound is attained.
    Boundary,
    Violated,
    NotDominant,
}

/// Compares `σ_min(a)` with the dominance margin.
pub fn varah_check(a: &Matrix) -> Result<(VarahBound, f64, VarahStatus)> {
    let bound = varah_bound(a)?;
    let smin = *singular_values(a)?.last().expect("non-empty");
    let status = if !bound.dominant {
        VarahStatus::NotDominant
    } else if (smin - bound.alpha).abs() <= 1e-12 * bound.alpha.max(1.0) {
        VarahStatus::Boundary
    } else if smin > bound.alpha {
        VarahStatus::Holds
    } else {
        VarahStatus::Violated
    };
    Ok((bound, smin, status))
}
