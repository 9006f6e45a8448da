//! Block encodings: unitaries whose top-left block is `A/α`.
//!
//! Register layout convention: ancilla registers are the leading tensor factors and the
//! system register is last, so the encoded block occupies the first `system_dim` rows and
//! columns of the unitary.

mod bessel;
mod qsp;

pub use bessel::{bessel_j_sequence, jacobi_anger_coefficients};
pub use qsp::{chebyshev_block, chebyshev_iterates, evolution_operator, EvolutionMode};

use crate::distances::check_orthonormal_pair;
use crate::error::{invalid, Error, Result};
use crate::linalg::{
    hermitian_function, next_pow2, operator_norm, orthonormal_completion, sym_eig, Matrix, C64,
};

pub const UNITARY_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct BlockEncoding {
    unitary: Matrix,
    alpha: f64,
    system_dim: usize,
}

impl BlockEncoding {
    /// Validates shape, subnormalisation and unitarity.
    pub fn new(unitary: Matrix, alpha: f64, system_dim: usize) -> Result<Self> {
        if !unitary.is_square() {
            return Err(invalid("block encoding unitary must be square"));
        }
        if system_dim == 0 || unitary.rows() % system_dim != 0 {
            return Err(invalid(format!(
                "system dimension {system_dim} does not divide {}",
                unitary.rows()
            )));
        }
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(invalid(format!("alpha must be positive and finite, got {alpha}")));
        }
        let defect = unitary.orthonormality_defect();
        if defect > UNITARY_TOL {
            return Err(invalid(format!("matrix is not unitary (defect {defect:.3e})")));
        }
        Ok(BlockEncoding { unitary, alpha, system_dim })
    }

    /// For constructions that are unitary by design; `verify` checks after the fact.
    pub(crate) fn from_parts(unitary: Matrix, alpha: f64, system_dim: usize) -> Self {
        debug_assert!(unitary.is_square() && unitary.rows() % system_dim == 0);
        BlockEncoding { unitary, alpha, system_dim }
    }

    pub fn unitary(&self) -> &Matrix {
        &self.unitary
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn total_dim(&self) -> usize {
        self.unitary.rows()
    }

    pub fn ancilla_dim(&self) -> usize {
        self.total_dim() / self.system_dim
    }

    /// `A/α`.
    pub fn block(&self) -> Matrix {
        extract_block(self)
    }

    /// `A = α · block`.
    pub fn encoded(&self) -> Matrix {
        self.block().scale_real(self.alpha)
    }

    /// Checks unitarity and `‖block‖₂ ≤ 1` to `tol`.
    pub fn verify(&self, tol: f64) -> Result<()> {
        let defect = self.unitary.orthonormality_defect();
        if defect > tol {
            return Err(Error::Invariant(format!("encoding not unitary (defect {defect:.3e})")));
        }
        let norm = operator_norm(&self.block())?;
        if norm > 1.0 + tol {
            return Err(Error::Invariant(format!("block norm {norm} exceeds 1")));
        }
        Ok(())
    }

    /// Reinterprets the register split so the system is the first `dim` basis states.
    pub(crate) fn with_system_dim(mut self, dim: usize) -> Self {
        assert!(dim > 0 && self.total_dim() % dim == 0);
        self.system_dim = dim;
        self
    }
}

/// The `system_dim × system_dim` top-left block `A/α`.
pub fn extract_block(be: &BlockEncoding) -> Matrix {
    let s = be.system_dim;
    be.unitary.submatrix(0, 0, s, s)
}

/// `[[0, M], [M†, 0]]`, zero-padded to the next power of two.
pub fn hermitian_embed(m: &Matrix) -> Matrix {
    let (n, k) = m.shape();
    let d = next_pow2(n + k);
    let mut out = Matrix::zeros(d, d);
    for i in 0..n {
        for j in 0..k {
            out[(i, n + j)] = m[(i, j)];
            out[(n + j, i)] = m[(i, j)].conj();
        }
    }
    out
}

/// Unitary `2n × 2n` whose top-left block is the contraction `a`.
///
/// The first columns are `[a; (I − a†a)^{1/2}]`; the rest is an orthonormal completion.
pub fn unitary_dilation(a: &Matrix) -> Result<Matrix> {
    let n = a.rows();
    let defect = Matrix::identity(n).sub(&a.adjoint().matmul(a)).hermitian_part();
    let root = hermitian_function(&defect, |x| C64::new(x.max(0.0).sqrt(), 0.0))?;
    let mut first = Matrix::zeros(2 * n, n);
    for i in 0..n {
        for j in 0..n {
            first[(i, j)] = a[(i, j)];
            first[(n + i, j)] = root[(i, j)];
        }
    }
    Ok(orthonormal_completion(Some(&first), 2 * n))
}

fn hermitian_tol(m: &Matrix) -> f64 {
    1e-10 * m.max_abs().max(1.0)
}

/// Largest number of nonzero entries in any row.
pub fn row_sparsity(m: &Matrix) -> usize {
    (0..m.rows())
        .map(|i| m.row(i).iter().filter(|z| z.norm() > 0.0).count())
        .max()
        .unwrap_or(0)
}

/// Encodes a Hermitian `m` with `α = max(s, ‖m‖₂(1 + 1e-9))`, `s` the row sparsity.
pub fn column_application_unitary(m: &Matrix) -> Result<BlockEncoding> {
    if !m.is_square() {
        return Err(invalid(format!("matrix application needs a square matrix, got {:?}", m.shape())));
    }
    if !m.is_finite() {
        return Err(invalid("matrix has non-finite entries"));
    }
    if m.hermitian_defect() > hermitian_tol(m) {
        return Err(invalid("matrix application needs a symmetric matrix; embed it first"));
    }
    let s = row_sparsity(m) as f64;
    let norm = operator_norm(m)?;
    let mut alpha = s.max(norm * (1.0 + 1e-9));
    if alpha == 0.0 {
        alpha = 1.0;
    }
    let u = unitary_dilation(&m.scale_real(1.0 / alpha))?;
    Ok(BlockEncoding::from_parts(u, alpha, m.rows()))
}

/// Mixed-radix digits of `idx` for registers `dims` (first register most significant).
fn digits(mut idx: usize, dims: &[usize], out: &mut [usize]) {
    for r in (0..dims.len()).rev() {
        out[r] = idx % dims[r];
        idx /= dims[r];
    }
}

fn undigits(d: &[usize], dims: &[usize]) -> usize {
    d.iter().zip(dims).fold(0, |acc, (&x, &n)| acc * n + x)
}

/// Lifts `u`, acting on the registers `targets` (in that order), to the full register list.
pub fn embed_on(u: &Matrix, dims: &[usize], targets: &[usize]) -> Matrix {
    let total: usize = dims.iter().product();
    let tdims: Vec<usize> = targets.iter().map(|&t| dims[t]).collect();
    let tdim: usize = tdims.iter().product();
    assert_eq!(u.rows(), tdim, "operator does not match target registers");
    let mut out = Matrix::zeros(total, total);
    let mut d = vec![0; dims.len()];
    let mut td = vec![0; targets.len()];
    for col in 0..total {
        digits(col, dims, &mut d);
        let local_in = undigits(&targets.iter().map(|&t| d[t]).collect::<Vec<_>>(), &tdims);
        for local_out in 0..tdim {
            let z = u[(local_out, local_in)];
            if z.re == 0.0 && z.im == 0.0 {
                continue;
            }
            digits(local_out, &tdims, &mut td);
            let mut dd = d.clone();
            for (slot, &t) in targets.iter().enumerate() {
                dd[t] = td[slot];
            }
            out[(undigits(&dd, dims), col)] = z;
        }
    }
    out
}

/// Applies a basis permutation `|b⟩ → |map(b)⟩` on the left of `x`.
fn apply_permutation(x: &Matrix, map: impl Fn(usize) -> usize) -> Matrix {
    let n = x.rows();
    let mut inv = vec![0; n];
    for b in 0..n {
        inv[map(b)] = b;
    }
    x.permute_rows(&inv)
}

/// Product encoding of `a.block · b.block` on registers `anc_a ⊗ anc_b ⊗ system`.
pub fn compose(a: &BlockEncoding, b: &BlockEncoding) -> Result<BlockEncoding> {
    if a.system_dim != b.system_dim {
        return Err(invalid("composed encodings must share the system dimension"));
    }
    let dims = [a.ancilla_dim(), b.ancilla_dim(), a.system_dim];
    let ua = embed_on(&a.unitary, &dims, &[0, 2]);
    let ub = embed_on(&b.unitary, &dims, &[1, 2]);
    Ok(BlockEncoding::from_parts(ua.matmul(&ub), a.alpha * b.alpha, a.system_dim))
}

/// Conjugates by a cyclic shift of the system register: new block `(i, j)` is old `(i+offset, j+offset)`.
pub fn shift_system(be: &BlockEncoding, offset: usize) -> BlockEncoding {
    let s = be.system_dim;
    let map = |b: usize| (b / s) * s + (b % s + s - offset % s) % s;
    let left = apply_permutation(&be.unitary, map);
    // Right multiplication by S† permutes columns the same way.
    let right = apply_permutation(&left.transpose(), map).transpose();
    BlockEncoding::from_parts(right, be.alpha, s)
}

/// Encodes `B†B` from an encoding of `B` with two flag qubits.
///
/// `U₁` applies `B`'s unitary, sets the last flag, and flips the other flag when the
/// ancilla is not all-zero; `U₂ = CNOT · U₁`. Good branches agree on the flags and garbage
/// branches do not, so `U₂†U₁` has block `B†B/α²`.
pub fn gram_of(e: &BlockEncoding) -> BlockEncoding {
    let t = e.total_dim();
    let s = e.system_dim;
    let lifted = Matrix::identity(4).kron(&e.unitary);
    // Flag index f = 2·f1 + f2, f2 the last flag.
    let flags = move |b: usize| {
        let (f, x) = (b / t, b % t);
        let (mut f1, f2) = (f / 2, (f % 2) ^ 1);
        if x >= s && f2 == 1 {
            f1 ^= 1;
        }
        (2 * f1 + f2) * t + x
    };
    let cnot = move |b: usize| {
        let (f, x) = (b / t, b % t);
        let (f1, f2) = (f / 2, f % 2);
        (2 * f1 + (f2 ^ f1)) * t + x
    };
    let u1 = apply_permutation(&lifted, flags);
    let u2 = apply_permutation(&u1, cnot);
    let u = u2.adjoint().matmul(&u1);
    BlockEncoding::from_parts(u, e.alpha * e.alpha, s)
}

/// Encoding of `K = (MᵀN)ᵀ MᵀN` for orthonormal-column `M`, `N`.
///
/// `k` is padded to a power of two with zero columns; the padded part of `K` is zero.
pub fn gram_block_encoding(m: &Matrix, n: &Matrix) -> Result<BlockEncoding> {
    check_orthonormal_pair(m, n)?;
    let (rows, k) = m.shape();
    let k_pad = next_pow2(k);
    let um = column_application_unitary(&hermitian_embed(&m.pad_to(rows, k_pad)))?;
    let un = column_application_unitary(&hermitian_embed(&n.pad_to(rows, k_pad)))?;
    // Block of the product is M̃Ñ/(s_M s_N); its MᵀN corner starts at row `rows`.
    let product = compose(&um, &un)?;
    let corner = shift_system(&product, rows).with_system_dim(k_pad);
    Ok(gram_of(&corner))
}

fn check_spectrum(m: &Matrix, kappa: f64) -> Result<()> {
    if !m.is_square() || m.hermitian_defect() > hermitian_tol(m) {
        return Err(invalid("expected a symmetric matrix"));
    }
    if !(kappa >= 1.0) || !kappa.is_finite() {
        return Err(invalid(format!("kappa must be finite and >= 1, got {kappa}")));
    }
    let (vals, _) = sym_eig(m)?;
    let lo = (1.0 / kappa) * (1.0 - 1e-9);
    let hi = 1.0 + 1e-9;
    if let Some(bad) = vals.iter().find(|&&l| l < lo || l > hi) {
        return Err(Error::Precondition(format!(
            "eigenvalue {bad} outside [1/kappa, 1] for kappa = {kappa}"
        )));
    }
    Ok(())
}

/// Encodes `M⁻¹` with `α = κ`; ancilla `|0⟩` flags the successful branch.
pub fn inverse_block_encoding(m: &Matrix, kappa: f64) -> Result<BlockEncoding> {
    check_spectrum(m, kappa)?;
    let scaled = hermitian_function(&m.hermitian_part(), |x| C64::new((1.0 / (kappa * x)).min(1.0), 0.0))?;
    Ok(BlockEncoding::from_parts(unitary_dilation(&scaled)?, kappa, m.rows()))
}

/// Encodes `M^{-1/2}` with `α = √κ`.
pub fn inverse_sqrt_block_encoding(m: &Matrix, kappa: f64) -> Result<BlockEncoding> {
    check_spectrum(m, kappa)?;
    let scaled =
        hermitian_function(&m.hermitian_part(), |x| C64::new((kappa * x).powf(-0.5).min(1.0), 0.0))?;
    Ok(BlockEncoding::from_parts(unitary_dilation(&scaled)?, kappa.sqrt(), m.rows()))
}

/// Encoding of `P = M⁻¹N` built from the flag sequence: apply `U_N`, flip the flag on a
/// clean `N` ancilla, run the inverse controlled on the flag, flip the flag back.
pub fn ellipsoid_product_encoding(
    inverse: &BlockEncoding,
    apply_n: &BlockEncoding,
) -> Result<BlockEncoding> {
    let s = apply_n.system_dim;
    if inverse.system_dim != s {
        return Err(invalid("inverse and matrix encodings act on different systems"));
    }
    // Registers: flag ⊗ ancN ⊗ ancInv ⊗ system.
    let dims = [2, apply_n.ancilla_dim(), inverse.ancilla_dim(), s];
    let inner = dims[2] * s;
    let block_n = dims[1] * inner;
    let ln = embed_on(&apply_n.unitary, &dims, &[1, 3]);
    let flip = move |b: usize| {
        let anc_n = (b % block_n) / inner;
        match (anc_n, b < block_n) {
            (0, true) => b + block_n,
            (0, false) => b - block_n,
            _ => b,
        }
    };
    let step = apply_permutation(&ln, flip);
    let inv_lift = embed_on(&inverse.unitary, &dims, &[2, 3]);
    // Controlled on flag = 1: the lower half of the register space.
    let mut controlled = Matrix::identity(2 * block_n);
    for r in block_n..2 * block_n {
        for c in block_n..2 * block_n {
            controlled[(r, c)] = inv_lift[(r, c)];
        }
    }
    let step = controlled.matmul(&step);
    let u = apply_permutation(&step, flip);
    Ok(BlockEncoding::from_parts(u, inverse.alpha * apply_n.alpha, s))
}

/// Encodes `PᵀP`, `P = M⁻¹N`, with `α = (κ_M s_N)²`.
pub fn ellipsoid_gram_encoding(m: &Matrix, n: &Matrix, kappa_m: f64) -> Result<BlockEncoding> {
    if m.shape() != n.shape() {
        return Err(invalid(format!("shape mismatch {:?} vs {:?}", m.shape(), n.shape())));
    }
    if !n.is_square() || n.hermitian_defect() > hermitian_tol(n) {
        return Err(invalid("N must be symmetric"));
    }
    let inv = inverse_block_encoding(m, kappa_m)?;
    let un = column_application_unitary(n)?;
    Ok(gram_of(&ellipsoid_product_encoding(&inv, &un)?))
}

/// Encodes the symmetric `S = M^{-1/2} N M^{-1/2}`, similar to `M⁻¹N`, with `α = κ s_N`.
pub fn ellipsoid_similarity_encoding(
    m: &Matrix,
    n: &Matrix,
    kappa_m: f64,
) -> Result<BlockEncoding> {
    if m.shape() != n.shape() {
        return Err(invalid(format!("shape mismatch {:?} vs {:?}", m.shape(), n.shape())));
    }
    let half = inverse_sqrt_block_encoding(m, kappa_m)?;
    let un = column_application_unitary(n)?;
    compose(&compose(&half, &un)?, &half)
}
