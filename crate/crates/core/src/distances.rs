//! Exact classical distances; the reference values every estimator is checked against.

use crate::error::{invalid, Error, Result};
use crate::linalg::{inverse_sqrt, jacobi_svd, sym_eig, Matrix};

const ORTHONORMAL_TOL: f64 = 1e-10;
const CLAMP_LIMIT: f64 = 1e-9;

/// Principal angles between two column spaces, `cos θ_i = σ_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrincipalAngles {
    /// Ascending, in `[0, π/2]`.
    pub thetas: Vec<f64>,
    /// Descending, in `[0, 1]`.
    pub sigmas: Vec<f64>,
}

pub fn check_orthonormal_pair(m: &Matrix, n: &Matrix) -> Result<()> {
    if m.shape() != n.shape() {
        return Err(invalid(format!("shape mismatch {:?} vs {:?}", m.shape(), n.shape())));
    }
    if m.rows() < m.cols() {
        return Err(invalid(format!("need n >= k, got {:?}", m.shape())));
    }
    for (name, a) in [("M", m), ("N", n)] {
        let d = a.orthonormality_defect();
        if d > ORTHONORMAL_TOL {
            return Err(invalid(format!("{name} does not have orthonormal columns (defect {d:.3e})")));
        }
    }
    Ok(())
}

pub fn principal_angles(m: &Matrix, n: &Matrix) -> Result<PrincipalAngles> {
    check_orthonormal_pair(m, n)?;
    let svd = jacobi_svd(&m.adjoint().matmul(n))?;
    let mut sigmas = Vec::with_capacity(svd.singulars.len());
    for &s in &svd.singulars {
        if s > 1.0 + CLAMP_LIMIT {
            return Err(Error::Invariant(format!("singular value {s} exceeds 1")));
        }
        sigmas.push(s.clamp(0.0, 1.0));
    }
    let thetas = sigmas.iter().map(|s| s.acos()).collect();
    Ok(PrincipalAngles { thetas, sigmas })
}

pub fn grassmann_distance(m: &Matrix, n: &Matrix) -> Result<f64> {
    let pa = principal_angles(m, n)?;
    Ok(pa.thetas.iter().map(|t| t * t).sum::<f64>().sqrt())
}

/// Largest principal angle.
pub fn asimov_distance(m: &Matrix, n: &Matrix) -> Result<f64> {
    let pa = principal_angles(m, n)?;
    Ok(*pa.thetas.last().expect("k >= 1"))
}

pub fn projection_distance(m: &Matrix, n: &Matrix) -> Result<f64> {
    Ok(asimov_distance(m, n)?.sin())
}

/// `sqrt(k − Σσ_i²)`.
pub fn chordal_distance(m: &Matrix, n: &Matrix) -> Result<f64> {
    let pa = principal_angles(m, n)?;
    let k = pa.sigmas.len() as f64;
    Ok((k - pa.sigmas.iter().map(|s| s * s).sum::<f64>()).max(0.0).sqrt())
}

/// Smallest eigenvalue, or an error when `a` is not symmetric positive definite.
pub fn check_spd(a: &Matrix, name: &str) -> Result<Vec<f64>> {
    if !a.is_square() {
        return Err(invalid(format!("{name} must be square, got {:?}", a.shape())));
    }
    if a.hermitian_defect() > 1e-12 * a.max_abs().max(1.0) {
        return Err(invalid(format!("{name} is not symmetric")));
    }
    let (vals, _) = sym_eig(a)?;
    if vals[0] <= 0.0 {
        return Err(invalid(format!("{name} is not positive definite (min eigenvalue {})", vals[0])));
    }
    Ok(vals)
}

/// Eigenvalues of `M⁻¹N`, ascending, via the similar matrix `M^{-1/2} N M^{-1/2}`.
pub fn ellipsoid_spectrum(m: &Matrix, n: &Matrix) -> Result<Vec<f64>> {
    if m.shape() != n.shape() {
        return Err(invalid(format!("shape mismatch {:?} vs {:?}", m.shape(), n.shape())));
    }
    check_spd(m, "M")?;
    check_spd(n, "N")?;
    let r = inverse_sqrt(m)?;
    let s = r.matmul(n).matmul(&r).hermitian_part();
    Ok(sym_eig(&s)?.0)
}

pub fn ellipsoid_distance(m: &Matrix, n: &Matrix) -> Result<f64> {
    let lam = ellipsoid_spectrum(m, n)?;
    Ok(lam.iter().map(|l| l.ln().powi(2)).sum::<f64>().sqrt())
}
