use rand::distr::{Bernoulli, Distribution};

use super::state::DensityState;
use crate::error::{invalid, Error, Result};
use crate::linalg::seeded_rng;

/// Outcome counts of repeated ancilla measurements.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShotRecord {
    pub shots: u64,
    pub zeros: u64,
    pub p_hat: f64,
    pub seed: u64,
}

/// Exact probability of reading `|0⟩` on the `ancilla` register.
pub fn ancilla_zero_probability(state: &DensityState) -> Result<f64> {
    Ok(state.marginal("ancilla")?[0])
}

/// Independent Bernoulli draws with success probability `p`, seeded.
pub fn sample_bernoulli(p: f64, shots: u64, seed: u64) -> Result<ShotRecord> {
    if shots == 0 {
        return Err(invalid("shots must be >= 1"));
    }
    if !(-1e-12..=1.0 + 1e-12).contains(&p) {
        return Err(Error::Invariant(format!("probability {p} outside [0, 1]")));
    }
    let dist = Bernoulli::new(p.clamp(0.0, 1.0)).map_err(|e| Error::Invariant(e.to_string()))?;
    let mut rng = seeded_rng(seed);
    let zeros = (0..shots).filter(|_| dist.sample(&mut rng)).count() as u64;
    Ok(ShotRecord { shots, zeros, p_hat: zeros as f64 / shots as f64, seed })
}

/// Measures the ancilla `shots` times; deterministic per seed.
pub fn sample_ancilla(state: &DensityState, shots: u64, seed: u64) -> Result<ShotRecord> {
    sample_bernoulli(ancilla_zero_probability(state)?, shots, seed)
}
