use std::f64::consts::PI;

use rustfft::FftPlanner;

use super::state::DensityState;
use crate::error::{invalid, Error, Result};
use crate::linalg::{Matrix, C64, ZERO};

pub const DEFAULT_UNITARY_TOL: f64 = 1e-8;
pub const MAX_BITS: u32 = 20;

/// Phase estimation with the default unitarity tolerance.
pub fn qpe(
    evolution: &dyn Fn(f64) -> Result<Matrix>,
    state: &DensityState,
    bits: u32,
) -> Result<DensityState> {
    qpe_with_tolerance(evolution, state, bits, DEFAULT_UNITARY_TOL)
}

/// Prepends a `2^bits` phase register, applies the controlled ladder `Σ_τ |τ⟩⟨τ| ⊗ U^τ`
/// built from `evolution(2^b)`, then the inverse Fourier transform on the phase register.
///
/// For `U|u⟩ = e^{−2πiφ}|u⟩` the phase register peaks at `j ≈ φ·2^bits`.
pub fn qpe_with_tolerance(
    evolution: &dyn Fn(f64) -> Result<Matrix>,
    state: &DensityState,
    bits: u32,
    unitary_tol: f64,
) -> Result<DensityState> {
    if bits == 0 || bits > MAX_BITS {
        return Err(invalid(format!("phase bits must lie in [1, {MAX_BITS}], got {bits}")));
    }
    let t = 1usize << bits;
    let dim = state.dim();
    let mut powers = Vec::with_capacity(bits as usize);
    for b in 0..bits {
        let u = evolution((1u64 << b) as f64)?;
        if u.shape() != (dim, dim) {
            return Err(invalid(format!(
                "evolution has shape {:?}, state dimension is {dim}",
                u.shape()
            )));
        }
        let defect = u.orthonormality_defect();
        if defect > unitary_tol {
            return Err(Error::Precondition(format!(
                "evolution(2^{b}) is not unitary (defect {defect:.3e})"
            )));
        }
        powers.push(u);
    }

    let mut planner = FftPlanner::<f64>::new();
    let ifft = planner.plan_fft_inverse(t);
    let norm = 1.0 / t as f64;
    let mut registers = vec![("phase".to_string(), t)];
    registers.extend(state.registers().iter().cloned());

    let mut components = Vec::with_capacity(state.components().len());
    for (w, psi) in state.components() {
        // ladder[τ] = U^τ ψ, filled by doubling: ladder[τ + 2^b] = U^{2^b} ladder[τ].
        let mut ladder: Vec<Vec<C64>> = Vec::with_capacity(t);
        ladder.push(psi.clone());
        for (b, u) in powers.iter().enumerate() {
            for tau in 0..(1usize << b) {
                let next = u.mat_vec(&ladder[tau]);
                ladder.push(next);
            }
        }
        // Batched transforms: one contiguous length-T sequence per system index.
        let mut buffer = vec![ZERO; t * dim];
        for (tau, v) in ladder.iter().enumerate() {
            for (s, &z) in v.iter().enumerate() {
                buffer[s * t + tau] = z;
            }
        }
        ifft.process(&mut buffer);
        let mut out = vec![ZERO; t * dim];
        for s in 0..dim {
            for j in 0..t {
                // 1/√T from the uniform phase register, 1/√T from the unitary transform.
                out[j * dim + s] = buffer[s * t + j] * norm;
            }
        }
        components.push((*w, out));
    }
    Ok(DensityState::from_parts(registers, components))
}

/// Probability that phase estimation of `e^{−2πiφ}` with `2^bits` outcomes returns `j`:
/// `|sin(Tπδ) / (T sin(πδ))|²` with `δ = φ − j/T`.
pub fn fejer_probability(phi: f64, bits: u32, j: usize) -> f64 {
    let t = (1u64 << bits) as f64;
    let delta = phi - j as f64 / t;
    let s = (PI * delta).sin();
    if s.abs() < 1e-15 {
        return 1.0;
    }
    let r = (t * PI * delta).sin() / (t * s);
    r * r
}

/// Maps phase-register outcomes to eigenvalues of the encoded matrix.
///
/// Eigenvalues in `[lo, hi]` are shifted by `lo` and scaled into phases in `[0, 1/2]` by
/// `φ = (λ − lo)/(2W)`, where the window `W = (1 − lo)·2^r` is the smallest such width
/// covering `hi`. With this choice `λ = 1` sits exactly on a grid point once
/// `bits > r`. Outcomes `j/T ≥ 3/4` read as negative phases, i.e. leakage below `lo`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseGrid {
    pub bits: u32,
    pub lo: f64,
    pub hi: f64,
    pub width: f64,
}

impl PhaseGrid {
    pub fn new(bits: u32, lo: f64, hi: f64) -> Result<Self> {
        if !(lo < 1.0 && hi >= 1.0 && lo >= 0.0) || !hi.is_finite() {
            return Err(invalid(format!("phase window [{lo}, {hi}] must satisfy 0 <= lo < 1 <= hi")));
        }
        let mut width = 1.0 - lo;
        while lo + width < hi {
            width *= 2.0;
        }
        Ok(PhaseGrid { bits, lo, hi, width })
    }

    pub fn outcomes(&self) -> usize {
        1usize << self.bits
    }

    /// Evolution time whose eigenphases are `2π·φ(λ)` after removing the `lo` offset.
    pub fn base_time(&self) -> f64 {
        PI / self.width
    }

    pub fn phase_of(&self, lambda: f64) -> f64 {
        (lambda - self.lo) / (2.0 * self.width)
    }

    /// Unclamped eigenvalue read from outcome `j`.
    pub fn raw_value(&self, j: usize) -> f64 {
        let f = j as f64 / self.outcomes() as f64;
        let signed = if f < 0.75 { f } else { f - 1.0 };
        self.lo + 2.0 * self.width * signed
    }

    /// Eigenvalue for outcome `j`, clamped into `[lo, hi]`, and whether clamping happened.
    pub fn value(&self, j: usize) -> (f64, bool) {
        let raw = self.raw_value(j);
        if raw < self.lo {
            (self.lo, true)
        } else if raw > self.hi {
            (self.hi, true)
        } else {
            (raw, false)
        }
    }

    /// Whether `λ` falls exactly (to `tol` in units of bins) on an outcome.
    pub fn is_exact(&self, lambda: f64, tol: f64) -> bool {
        let x = self.phase_of(lambda) * self.outcomes() as f64;
        (x - x.round()).abs() <= tol
    }
}
