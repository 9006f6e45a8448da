use crate::error::{invalid, Error, Result};
use crate::linalg::{inner, Matrix, C64, ONE, ZERO};

/// Mixed state over named registers, kept in factored form `ρ = Σ_r w_r |ψ_r⟩⟨ψ_r|`.
///
/// Register order is significant: the first register is the most significant index.
/// The factored form is Hermitian and positive by construction; only the trace can drift.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityState {
    registers: Vec<(String, usize)>,
    components: Vec<(f64, Vec<C64>)>,
}

impl DensityState {
    pub fn from_components(
        registers: Vec<(String, usize)>,
        components: Vec<(f64, Vec<C64>)>,
    ) -> Result<Self> {
        let dim: usize = registers.iter().map(|r| r.1).product();
        if registers.is_empty() || dim == 0 {
            return Err(invalid("state needs at least one non-empty register"));
        }
        if components.is_empty() {
            return Err(invalid("state needs at least one component"));
        }
        for (w, v) in &components {
            if v.len() != dim {
                return Err(invalid(format!("component length {} does not match {dim}", v.len())));
            }
            if !(*w >= 0.0) {
                return Err(invalid(format!("component weight {w} is negative")));
            }
        }
        let state = DensityState { registers, components };
        let tr = state.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(invalid(format!("state trace {tr} differs from 1")));
        }
        Ok(state)
    }

    pub(crate) fn from_parts(registers: Vec<(String, usize)>, components: Vec<(f64, Vec<C64>)>) -> Self {
        DensityState { registers, components }
    }

    pub fn registers(&self) -> &[(String, usize)] {
        &self.registers
    }

    pub fn components(&self) -> &[(f64, Vec<C64>)] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.registers.iter().map(|r| r.1).product()
    }

    pub fn register_position(&self, name: &str) -> Option<usize> {
        self.registers.iter().position(|r| r.0 == name)
    }

    /// `(dimension, stride)` of a register inside the flat index.
    pub fn register_layout(&self, name: &str) -> Result<(usize, usize)> {
        let pos = self
            .register_position(name)
            .ok_or_else(|| invalid(format!("state has no register named {name:?}")))?;
        let stride: usize = self.registers[pos + 1..].iter().map(|r| r.1).product();
        Ok((self.registers[pos].1, stride))
    }

    pub fn trace(&self) -> f64 {
        self.components.iter().map(|(w, v)| w * v.iter().map(|z| z.norm_sqr()).sum::<f64>()).sum()
    }

    pub fn purity(&self) -> f64 {
        let mut p = 0.0;
        for (wa, a) in &self.components {
            for (wb, b) in &self.components {
                p += wa * wb * inner(a, b).norm_sqr();
            }
        }
        p
    }

    /// Rescales weights to unit trace.
    pub fn renormalized(mut self) -> Result<Self> {
        let tr = self.trace();
        if !(tr > 0.0) {
            return Err(Error::Invariant("state has zero trace".into()));
        }
        for c in &mut self.components {
            c.0 /= tr;
        }
        Ok(self)
    }

    /// Dense `ρ`; only sensible for small registers.
    pub fn to_dense(&self) -> Matrix {
        let n = self.dim();
        let mut rho = Matrix::zeros(n, n);
        for (w, v) in &self.components {
            for i in 0..n {
                if v[i] == ZERO {
                    continue;
                }
                for j in 0..n {
                    rho[(i, j)] += v[i] * v[j].conj() * *w;
                }
            }
        }
        rho
    }

    /// Outcome probabilities of measuring one register.
    pub fn marginal(&self, name: &str) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.register_layout(name)?.0];
        for c in 0..self.components.len() {
            for (o, p) in out.iter_mut().zip(self.component_marginal(c, name)?) {
                *o += p;
            }
        }
        Ok(out)
    }

    /// Weighted outcome probabilities of one register for a single component.
    pub fn component_marginal(&self, c: usize, name: &str) -> Result<Vec<f64>> {
        let (d, stride) = self.register_layout(name)?;
        let (w, v) = &self.components[c];
        let mut out = vec![0.0; d];
        for (idx, z) in v.iter().enumerate() {
            out[(idx / stride) % d] += w * z.norm_sqr();
        }
        Ok(out)
    }

    /// Checks unit trace; Hermiticity and positivity hold by construction.
    pub fn check_invariants(&self, tol: f64) -> Result<()> {
        let tr = self.trace();
        if (tr - 1.0).abs() > tol {
            return Err(Error::Invariant(format!("state trace {tr} differs from 1")));
        }
        Ok(())
    }
}

/// `I/k` on a single `system` register; `k` must be a power of two.
pub fn uniform_mixed_state(k: usize) -> Result<DensityState> {
    if k == 0 || !k.is_power_of_two() {
        return Err(invalid(format!("mixed-state dimension must be a power of two, got {k}")));
    }
    uniform_mixed_on(k, k)
}

/// `(1/k) Σ_{i<k} |i⟩⟨i|` on a `system` register of dimension `dim ≥ k`.
pub fn uniform_mixed_on(dim: usize, k: usize) -> Result<DensityState> {
    if k == 0 || k > dim {
        return Err(invalid(format!("need 1 <= k <= dim, got k={k}, dim={dim}")));
    }
    let w = 1.0 / k as f64;
    let comps = (0..k)
        .map(|i| {
            let mut v = vec![ZERO; dim];
            v[i] = ONE;
            (w, v)
        })
        .collect();
    DensityState::from_components(vec![("system".into(), dim)], comps)
}

/// `(1/k) Σ |v_i⟩⟨v_i|` for orthonormal `v_i`; equals [`uniform_mixed_on`] when they span
/// the first `k` basis states.
pub fn uniform_mixture_of(dim: usize, vectors: Vec<Vec<C64>>) -> Result<DensityState> {
    let w = 1.0 / vectors.len().max(1) as f64;
    DensityState::from_components(
        vec![("system".into(), dim)],
        vectors.into_iter().map(|v| (w, v)).collect(),
    )
}
