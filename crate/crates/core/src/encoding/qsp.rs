//! Polynomial and exponential transforms of block encodings by qubitization.
//!
//! With `Π` the projector onto the zero-ancilla subspace and `R = 2Π − I`, the walk
//! `W = R U† R U` satisfies `Π W^m Π = T_{2m}(A/α)` and `Π U W^m Π = T_{2m+1}(A/α)`
//! whenever the block is Hermitian.

use super::{jacobi_anger_coefficients, BlockEncoding};
use crate::error::{invalid, Error, Result};
use crate::linalg::{matrix_exp_unitary, operator_norm, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EvolutionMode {
    /// Spectral exponential of the encoded matrix.
    Exact,
    /// Truncated Chebyshev–Bessel series over qubitized iterates.
    JacobiAnger,
}

fn check_hermitian_block(be: &BlockEncoding) -> Result<()> {
    let defect = be.block().hermitian_defect();
    if defect > 1e-9 {
        return Err(invalid(format!("encoded block is not symmetric (defect {defect:.3e})")));
    }
    Ok(())
}

/// Negates the rows outside the zero-ancilla subspace: left multiplication by `2Π − I`.
fn reflect(x: &mut Matrix, system_dim: usize) {
    for i in system_dim..x.rows() {
        for j in 0..x.cols() {
            x[(i, j)] = -x[(i, j)];
        }
    }
}

/// Encoding of `T_d(A/α)` with `α' = 1`, from `d` alternating applications of `U` and `U†`.
pub fn chebyshev_block(be: &BlockEncoding, d: i64) -> Result<BlockEncoding> {
    if d < 0 {
        return Err(invalid(format!("polynomial degree must be >= 0, got {d}")));
    }
    check_hermitian_block(be)?;
    let s = be.system_dim();
    let u = be.unitary();
    let u_dag = u.adjoint();
    let mut acc = Matrix::identity(be.total_dim());
    for _ in 0..d / 2 {
        let mut step = u.matmul(&acc);
        reflect(&mut step, s);
        let mut step = u_dag.matmul(&step);
        reflect(&mut step, s);
        acc = step;
    }
    if d % 2 == 1 {
        acc = u.matmul(&acc);
    }
    Ok(BlockEncoding::from_parts(acc, 1.0, s))
}

/// Blocks `T_0(A/α) … T_d(A/α)` from the walk applied to the `Π` columns only.
pub fn chebyshev_iterates(be: &BlockEncoding, d: usize) -> Result<Vec<Matrix>> {
    check_hermitian_block(be)?;
    let s = be.system_dim();
    let u = be.unitary();
    let u_dag = u.adjoint();
    let mut cols = Matrix::identity(be.total_dim()).submatrix(0, 0, be.total_dim(), s);
    let mut out = Vec::with_capacity(d + 1);
    out.push(cols.submatrix(0, 0, s, s));
    while out.len() <= d {
        let mut applied = u.matmul(&cols);
        out.push(applied.submatrix(0, 0, s, s));
        if out.len() > d {
            break;
        }
        reflect(&mut applied, s);
        let mut next = u_dag.matmul(&applied);
        reflect(&mut next, s);
        out.push(next.submatrix(0, 0, s, s));
        cols = next;
    }
    Ok(out)
}

/// `exp(−i·A·t)` for the encoded `A = α·block`, as a system-register operator.
///
/// The series mode chooses its degree from the Bessel remainder bound and is then checked
/// against the exact exponential; a miss is reported as an invariant failure.
pub fn evolution_operator(
    be: &BlockEncoding,
    t: f64,
    eps: f64,
    mode: EvolutionMode,
) -> Result<Matrix> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!("eps must lie in (0, 1), got {eps}")));
    }
    if !t.is_finite() {
        return Err(invalid("evolution time must be finite"));
    }
    check_hermitian_block(be)?;
    let h = be.encoded().hermitian_part();
    let exact = matrix_exp_unitary(&h, t)?;
    if mode == EvolutionMode::Exact {
        return Ok(exact);
    }
    let coeffs = jacobi_anger_coefficients(be.alpha() * t, eps);
    let blocks = chebyshev_iterates(be, coeffs.len() - 1)?;
    let s = be.system_dim();
    let mut sum = Matrix::zeros(s, s);
    for (c, tm) in coeffs.iter().zip(&blocks) {
        sum = sum.add(&tm.scale(*c));
    }
    let err = operator_norm(&sum.sub(&exact))?;
    if err > eps {
        return Err(Error::Invariant(format!(
            "series evolution misses eps = {eps:e} (error {err:e}, degree {})",
            coeffs.len() - 1
        )));
    }
    Ok(sum)
}
