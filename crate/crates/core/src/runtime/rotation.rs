use std::f64::consts::FRAC_PI_2;

use super::qpe::PhaseGrid;
use super::state::DensityState;
use crate::error::{invalid, Result};
use crate::linalg::ZERO;

/// `arccos(√λ)/(π/2)`.
pub fn arccos_amplitude(lambda: f64) -> f64 {
    lambda.clamp(0.0, 1.0).sqrt().acos() / FRAC_PI_2
}

/// `ln(λ)/log_scale`.
pub fn log_amplitude(lambda: f64, log_scale: f64) -> f64 {
    lambda.ln() / log_scale
}

/// `√λ`.
pub fn sqrt_amplitude(lambda: f64) -> f64 {
    lambda.max(0.0).sqrt()
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RotationReport {
    /// Probability mass on branches whose eigenvalue or amplitude had to be clamped.
    pub clamped_mass: f64,
}

/// Appends a qubit `ancilla` prepared per phase branch `j` as
/// `a_j|0⟩ + √(1 − a_j²)|1⟩`, with `a_j = amplitude(λ̃_j)` clamped into `[−1, 1]`.
pub fn rotate_with(
    state: &DensityState,
    grid: &PhaseGrid,
    amplitude: &dyn Fn(f64) -> f64,
) -> Result<(DensityState, RotationReport)> {
    let (dim, stride) = state.register_layout("phase")?;
    if dim != grid.outcomes() {
        return Err(invalid(format!(
            "phase register has {dim} outcomes, grid has {}",
            grid.outcomes()
        )));
    }
    if state.register_position("ancilla").is_some() {
        return Err(invalid("state already carries an ancilla register"));
    }
    let mut table = Vec::with_capacity(dim);
    for j in 0..dim {
        let (lambda, clamped) = grid.value(j);
        let a = amplitude(lambda);
        let out_of_range = clamped || !(a.abs() <= 1.0);
        let a = if a.is_nan() { 0.0 } else { a.clamp(-1.0, 1.0) };
        table.push((a, (1.0 - a * a).max(0.0).sqrt(), out_of_range));
    }
    let mut registers = state.registers().to_vec();
    registers.push(("ancilla".into(), 2));
    let mut components = Vec::with_capacity(state.components().len());
    let mut report = RotationReport::default();
    for (w, v) in state.components() {
        let mut out = vec![ZERO; 2 * v.len()];
        for (idx, &z) in v.iter().enumerate() {
            let (a, b, bad) = table[(idx / stride) % dim];
            out[2 * idx] = z * a;
            out[2 * idx + 1] = z * b;
            if bad {
                report.clamped_mass += w * z.norm_sqr();
            }
        }
        components.push((*w, out));
    }
    Ok((DensityState::from_parts(registers, components), report))
}

pub fn rotate_arccos(state: &DensityState, grid: &PhaseGrid) -> Result<(DensityState, RotationReport)> {
    rotate_with(state, grid, &arccos_amplitude)
}

pub fn rotate_log(
    state: &DensityState,
    grid: &PhaseGrid,
    log_scale: f64,
) -> Result<(DensityState, RotationReport)> {
    if !(log_scale > 0.0) {
        return Err(invalid(format!("log scale must be positive, got {log_scale}")));
    }
    rotate_with(state, grid, &|l| log_amplitude(l, log_scale))
}

pub fn rotate_sqrt(state: &DensityState, grid: &PhaseGrid) -> Result<(DensityState, RotationReport)> {
    rotate_with(state, grid, &sqrt_amplitude)
}
