//! Binary-tree amplitude store and the memory-model block encodings built on it.
//!
//! Each row of the stored matrix owns a complete binary tree whose leaves hold squared
//! entries (with the signed entry kept alongside) and whose internal nodes hold the sum of
//! their children. The root of row `i` is `‖A_i‖²`.
//!
//! Registers are `|row⟩ ⊗ |column⟩`, both of dimension `d`, the next power of two above the
//! larger matrix dimension. `U_M` loads a row: `|i⟩|0⟩ → |i⟩ ⊗ Σ_j A_ij/‖A_i‖ |j⟩`, and
//! `U_N` loads the norms: `|0⟩|j⟩ → Σ_i ‖A_i‖/‖A‖_F |i⟩ ⊗ |j⟩`.

use crate::encoding::{
    compose, ellipsoid_product_encoding, gram_of, unitary_dilation, BlockEncoding,
};
use crate::error::{invalid, Error, Result};
use crate::linalg::{hermitian_function, next_pow2, orthonormal_completion, sym_eig, Matrix, C64};

#[derive(Clone, Debug)]
pub struct MemoryTree {
    rows: usize,
    cols: usize,
    dim: usize,
    /// Per row, heap-ordered nodes: index 1 is the root, leaves start at `dim`.
    nodes: Vec<Vec<f64>>,
    /// Signed leaf values, per row.
    leaves: Vec<Vec<f64>>,
    row_norms: Vec<f64>,
    frobenius: f64,
}

/// Builds the static tree. Entries must be real and finite.
pub fn build_tree(a: &Matrix) -> Result<MemoryTree> {
    if !a.is_finite() {
        return Err(invalid("tree input has non-finite entries"));
    }
    if !a.is_real() {
        return Err(invalid("tree input must be real"));
    }
    let (rows, cols) = a.shape();
    let dim = next_pow2(rows.max(cols));
    let mut nodes = Vec::with_capacity(rows);
    let mut leaves = Vec::with_capacity(rows);
    for i in 0..rows {
        let mut leaf = vec![0.0; dim];
        for (j, l) in leaf.iter_mut().enumerate().take(cols) {
            *l = a[(i, j)].re;
        }
        let mut heap = vec![0.0; 2 * dim];
        for j in 0..dim {
            heap[dim + j] = leaf[j] * leaf[j];
        }
        for p in (1..dim).rev() {
            heap[p] = heap[2 * p] + heap[2 * p + 1];
        }
        nodes.push(heap);
        leaves.push(leaf);
    }
    let row_norms: Vec<f64> = nodes.iter().map(|h| h[1].sqrt()).collect();
    let frobenius = nodes.iter().map(|h| h[1]).sum::<f64>().sqrt();
    Ok(MemoryTree { rows, cols, dim, nodes, leaves, row_norms, frobenius })
}

impl MemoryTree {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Register dimension of both the row and the column register.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row_norms(&self) -> &[f64] {
        &self.row_norms
    }

    pub fn frobenius(&self) -> f64 {
        self.frobenius
    }

    pub fn is_degenerate(&self) -> bool {
        self.frobenius == 0.0
    }

    /// Rows whose norm is zero; their loaders are arbitrary unit vectors.
    pub fn zero_rows(&self) -> Vec<usize> {
        (0..self.rows).filter(|&i| self.row_norms[i] == 0.0).collect()
    }

    /// Heap-ordered node values of row `i`.
    pub fn row_nodes(&self, i: usize) -> &[f64] {
        &self.nodes[i]
    }

    /// The stored matrix, read back from the signed leaves.
    pub fn reconstruct(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| C64::new(self.leaves[i][j], 0.0))
    }

    /// Row `i` amplitudes `A_ij/‖A_i‖`, read by descending the tree.
    pub fn row_amplitudes(&self, i: usize) -> Vec<f64> {
        let heap = &self.nodes[i];
        (0..self.dim)
            .map(|j| {
                let mut p = self.dim + j;
                // Product of child/parent ratios along the path equals leaf/root.
                let mut ratio = 1.0;
                while p > 1 {
                    let parent = heap[p / 2];
                    ratio *= if parent > 0.0 { heap[p] / parent } else { 0.0 };
                    p /= 2;
                }
                self.leaves[i][j].signum() * ratio.sqrt()
            })
            .collect()
    }

    fn check_nonzero(&self) -> Result<()> {
        if self.is_degenerate() {
            return Err(Error::Degenerate("stored matrix is zero".into()));
        }
        Ok(())
    }
}

/// `U_M` on `|row⟩ ⊗ |column⟩`.
pub fn row_prep_unitary(tree: &MemoryTree) -> Result<Matrix> {
    tree.check_nonzero()?;
    let d = tree.dim;
    let mut u = Matrix::zeros(d * d, d * d);
    for i in 0..d {
        let local = if i < tree.rows && tree.row_norms[i] > 0.0 {
            let amp = tree.row_amplitudes(i);
            let first = Matrix::from_fn(d, 1, |j, _| C64::new(amp[j], 0.0));
            orthonormal_completion(Some(&first), d)
        } else {
            Matrix::identity(d)
        };
        for a in 0..d {
            for b in 0..d {
                u[(i * d + a, i * d + b)] = local[(a, b)];
            }
        }
    }
    Ok(u)
}

/// `U_N` on `|row⟩ ⊗ |column⟩`.
pub fn norm_prep_unitary(tree: &MemoryTree) -> Result<Matrix> {
    tree.check_nonzero()?;
    let d = tree.dim;
    let first = Matrix::from_fn(d, 1, |i, _| {
        let v = if i < tree.rows { tree.row_norms[i] / tree.frobenius } else { 0.0 };
        C64::new(v, 0.0)
    });
    let v = orthonormal_completion(Some(&first), d);
    Ok(v.kron(&Matrix::identity(d)))
}

fn swap_registers(d: usize) -> Matrix {
    Matrix::from_fn(d * d, d * d, |r, c| {
        if r == (c % d) * d + c / d {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// `U_N† U_M` exactly as written; its `⟨0,j|·|k,0⟩` element is `A_kj/‖A‖_F` for a row tree.
pub fn loader_product(tree: &MemoryTree) -> Result<Matrix> {
    Ok(norm_prep_unitary(tree)?.adjoint().matmul(&row_prep_unitary(tree)?))
}

/// `⟨0,j| U_N† U_M |k,0⟩`.
pub fn loader_element(product: &Matrix, d: usize, j: usize, k: usize) -> C64 {
    product[(j, k * d)]
}

/// Block encoding of the stored (zero-padded, `d × d`) matrix with `α = ‖A‖_F`.
///
/// Built as `SWAP · U_M† · U_N`, whose `(0,i),(0,j)` element is `A_ij/‖A‖_F`.
pub fn memory_block_encoding(tree: &MemoryTree) -> Result<BlockEncoding> {
    let d = tree.dim;
    let um = row_prep_unitary(tree)?;
    let un = norm_prep_unitary(tree)?;
    let u = swap_registers(d).matmul(&um.adjoint().matmul(&un));
    Ok(BlockEncoding::from_parts(u, tree.frobenius, d))
}

/// Encoding of `MᵀN` with `α = ‖M‖_F ‖N‖_F`, on `flag ⊗ ancilla ⊗ system`.
///
/// `N` is applied first; the flag is set and then cleared when the ancilla is clean, so
/// the flag marks the garbage branch; then `M`'s encoding is undone.
pub fn memory_product_encoding(tree_m: &MemoryTree, tree_n: &MemoryTree) -> Result<BlockEncoding> {
    if (tree_m.rows, tree_m.cols) != (tree_n.rows, tree_n.cols) {
        return Err(invalid("memory trees have different shapes"));
    }
    let em = memory_block_encoding(tree_m)?;
    let en = memory_block_encoding(tree_n)?;
    let d = tree_m.dim;
    let half = d * d;
    let lifted_n = Matrix::identity(2).kron(en.unitary());
    // X on the flag, then flip back when the ancilla register is |0⟩.
    let flag = |b: usize| {
        let (f, x) = (b / half, b % half);
        let f = f ^ 1;
        let f = if x < d { f ^ 1 } else { f };
        f * half + x
    };
    let mut inv = vec![0; 2 * half];
    for b in 0..2 * half {
        inv[flag(b)] = b;
    }
    let pn = lifted_n.permute_rows(&inv);
    let u = Matrix::identity(2).kron(&em.unitary().adjoint()).matmul(&pn);
    Ok(BlockEncoding::from_parts(u, tree_m.frobenius * tree_n.frobenius, d))
}

/// Encoding of `(MᵀN)ᵀMᵀN` with `α = (‖M‖_F ‖N‖_F)²`.
pub fn memory_gram_encoding(tree_m: &MemoryTree, tree_n: &MemoryTree) -> Result<BlockEncoding> {
    Ok(gram_of(&memory_product_encoding(tree_m, tree_n)?))
}

fn stored_spd(tree: &MemoryTree, kappa: f64) -> Result<Matrix> {
    let m = tree.reconstruct();
    if !m.is_square() || m.hermitian_defect() > 1e-12 {
        return Err(invalid("stored matrix must be square and symmetric"));
    }
    if !(kappa >= 1.0) || !kappa.is_finite() {
        return Err(invalid(format!("kappa must be finite and >= 1, got {kappa}")));
    }
    let (vals, _) = sym_eig(&m)?;
    let lo = (1.0 / kappa) * (1.0 - 1e-9);
    if let Some(bad) = vals.iter().find(|&&l| l < lo || l > 1.0 + 1e-9) {
        return Err(Error::Precondition(format!(
            "eigenvalue {bad} outside [1/kappa, 1] for kappa = {kappa}"
        )));
    }
    Ok(m)
}

/// `C·M⁻¹·state` with `C = 1/κ`, and the success amplitude `‖C·M⁻¹·state‖`.
pub fn memory_inverse_apply(
    tree_m: &MemoryTree,
    kappa_m: f64,
    state: &[C64],
) -> Result<(Vec<C64>, f64)> {
    let m = stored_spd(tree_m, kappa_m)?;
    if state.len() != m.rows() {
        return Err(invalid(format!("state length {} does not match {}", state.len(), m.rows())));
    }
    let scaled_inv = hermitian_function(&m, |x| C64::new(1.0 / (kappa_m * x), 0.0))?;
    let out = scaled_inv.mat_vec(state);
    let amp = crate::linalg::vec_norm(&out);
    Ok((out, amp))
}

/// Encoding of `M⁻¹` (`α = κ`) whose block columns come from [`memory_inverse_apply`].
pub fn memory_inverse_encoding(tree_m: &MemoryTree, kappa_m: f64) -> Result<BlockEncoding> {
    let n = tree_m.rows;
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![C64::new(0.0, 0.0); n];
        e[j] = C64::new(1.0, 0.0);
        cols.push(memory_inverse_apply(tree_m, kappa_m, &e)?.0);
    }
    let block = Matrix::from_columns(&cols).hermitian_part();
    Ok(BlockEncoding::from_parts(unitary_dilation(&block)?, kappa_m, n))
}

/// Encoding of `M^{-1/2}` (`α = √κ`) for the stored SPD matrix.
pub fn memory_inverse_sqrt_encoding(tree_m: &MemoryTree, kappa_m: f64) -> Result<BlockEncoding> {
    let m = stored_spd(tree_m, kappa_m)?;
    let block = hermitian_function(&m, |x| C64::new((kappa_m * x).powf(-0.5).min(1.0), 0.0))?;
    Ok(BlockEncoding::from_parts(unitary_dilation(&block)?, kappa_m.sqrt(), m.rows()))
}

/// Pads an SPD matrix to `d × d` with an identity block, keeping its spectrum in `[1/κ, 1]`.
pub fn pad_spd_identity(m: &Matrix, d: usize) -> Matrix {
    let mut out = m.pad_to(d, d);
    for i in m.rows()..d {
        out[(i, i)] = C64::new(1.0, 0.0);
    }
    out
}

/// Memory-model encoding of `M^{-1/2} N M^{-1/2}` (`α = κ‖N‖_F`), padded to the tree dimension.
pub fn memory_ellipsoid_similarity(m: &Matrix, n: &Matrix, kappa_m: f64) -> Result<BlockEncoding> {
    let tree_n = build_tree(n)?;
    let d = tree_n.dim;
    let tree_m = build_tree(&pad_spd_identity(m, d))?;
    let half = memory_inverse_sqrt_encoding(&tree_m, kappa_m)?;
    let en = memory_block_encoding(&tree_n)?;
    compose(&compose(&half, &en)?, &half)
}

/// Memory-model encoding of `PᵀP`, `P = M⁻¹N`, padded to the tree dimension.
pub fn memory_ellipsoid_gram(m: &Matrix, n: &Matrix, kappa_m: f64) -> Result<BlockEncoding> {
    let tree_n = build_tree(n)?;
    let d = tree_n.dim;
    let tree_m = build_tree(&pad_spd_identity(m, d))?;
    let inv = memory_inverse_encoding(&tree_m, kappa_m)?;
    let en = memory_block_encoding(&tree_n)?;
    Ok(gram_of(&ellipsoid_product_encoding(&inv, &en)?))
}
