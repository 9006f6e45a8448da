use std::fmt::Write as _;

use rayon::prelude::*;

use super::config::RunConfig;
use super::engine::{prepare, Method};
use super::report::PipelineReport;
use crate::error::{invalid, Result};

/// One `(bits, shots)` cell of an error sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub bits: u32,
    pub shots: u64,
    pub classical: f64,
    pub quantum_estimate: f64,
    pub exact_estimate: f64,
    pub abs_error: f64,
    pub ideal_p0: Option<f64>,
    pub exact_p0: Option<f64>,
    /// `|p̃₀ − p₀|`: phase-estimation error in the probability.
    pub p0_error: Option<f64>,
    pub sampled_p0: Option<f64>,
    /// `|p̂ − p̃₀|`: sampling error.
    pub sampling_error: Option<f64>,
    pub epsilon_p: Option<f64>,
    pub bound_factor: Option<f64>,
    pub leaked_mass: f64,
}

impl From<&PipelineReport> for SweepRow {
    fn from(r: &PipelineReport) -> Self {
        let diff = |a: Option<f64>, b: Option<f64>| a.zip(b).map(|(a, b)| (a - b).abs());
        SweepRow {
            bits: r.bits,
            shots: r.shots,
            classical: r.classical_value,
            quantum_estimate: r.quantum_estimate,
            exact_estimate: r.exact_estimate,
            abs_error: r.absolute_error(),
            ideal_p0: r.ideal_p0,
            exact_p0: r.exact_p0,
            p0_error: diff(r.exact_p0, r.ideal_p0),
            sampled_p0: r.sampled_p0,
            sampling_error: diff(r.sampled_p0, r.exact_p0),
            epsilon_p: r.epsilon_p,
            bound_factor: r.bound_factor,
            leaked_mass: r.leaked_mass,
        }
    }
}

/// Runs the pipeline once per `bits` value (in parallel) and samples each stage once per
/// `shots` value with the configured seed. Rows are ordered by `bits`, then `shots`, as given.
pub fn error_sweep(cfg: &RunConfig, bits: &[u32], shots: &[u64]) -> Result<Vec<SweepRow>> {
    if bits.is_empty() || shots.is_empty() {
        return Err(invalid("sweep needs at least one bits value and one shots value"));
    }
    for &b in bits {
        for &s in shots {
            RunConfig { bits: b, shots: s, ..cfg.clone() }.validate()?;
        }
    }
    let prepared = prepare(cfg)?;
    let stages = match prepared.method {
        Method::Spectral { .. } => bits
            .par_iter()
            .map(|&b| prepared.stage(b, cfg.evolution, cfg.eps_h).map(Some))
            .collect::<Result<Vec<_>>>()?,
        Method::Power => vec![None; bits.len()],
    };
    let mut rows = Vec::with_capacity(bits.len() * shots.len());
    for (&b, stage) in bits.iter().zip(&stages) {
        let cell_cfg = RunConfig { bits: b, ..cfg.clone() };
        for &s in shots {
            rows.push(SweepRow::from(&prepared.report(&cell_cfg, stage.as_ref(), s)?));
        }
    }
    Ok(rows)
}

pub const SWEEP_HEADER: &str = "bits,shots,classical,quantum_estimate,exact_estimate,abs_error,\
ideal_p0,exact_p0,p0_error,sampled_p0,sampling_error,epsilon_p,bound_factor,leaked_mass";

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let f = |x: f64| format!("{x:?}");
    let o = |x: Option<f64>| x.map(f).unwrap_or_default();
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.bits,
            r.shots,
            f(r.classical),
            f(r.quantum_estimate),
            f(r.exact_estimate),
            f(r.abs_error),
            o(r.ideal_p0),
            o(r.exact_p0),
            o(r.p0_error),
            o(r.sampled_p0),
            o(r.sampling_error),
            o(r.epsilon_p),
            o(r.bound_factor),
            f(r.leaked_mass)
        );
    }
    out
}

/// Trend diagnostics over the phase-estimation error of a bits sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepTrends {
    /// `max/median` of `|p̃₀ − p₀|/ε_p` over cells with `ε_p > 0`.
    pub ratio_spread: Option<f64>,
    pub ratio_bounded: bool,
    /// `|p̃₀ − p₀|` never grows by more than 2× between consecutive bits values.
    pub non_increasing: bool,
    /// Consecutive `(bits, bits')` pairs that broke the 2× band.
    pub violations: Vec<(u32, u32)>,
}

/// Absolute floor below which probability errors count as round-off.
const ERROR_FLOOR: f64 = 1e-12;

pub fn trend_checks(rows: &[SweepRow]) -> SweepTrends {
    let mut cells: Vec<&SweepRow> = Vec::new();
    for r in rows {
        if !cells.iter().any(|c| c.bits == r.bits) {
            cells.push(r);
        }
    }
    cells.sort_by_key(|c| c.bits);

    let mut ratios: Vec<f64> = cells
        .iter()
        .filter_map(|c| match (c.p0_error, c.epsilon_p) {
            (Some(e), Some(eps)) if eps > ERROR_FLOOR => Some(e / eps),
            _ => None,
        })
        .collect();
    ratios.sort_by(f64::total_cmp);
    let ratio_spread = if ratios.is_empty() {
        None
    } else {
        let mid = ratios.len() / 2;
        let median =
            if ratios.len() % 2 == 1 { ratios[mid] } else { 0.5 * (ratios[mid - 1] + ratios[mid]) };
        let max = ratios[ratios.len() - 1];
        Some(if median > 0.0 { max / median } else if max > 0.0 { f64::INFINITY } else { 1.0 })
    };

    let mut violations = Vec::new();
    for w in cells.windows(2) {
        if let (Some(a), Some(b)) = (w[0].p0_error, w[1].p0_error) {
            if b > 2.0 * a + ERROR_FLOOR {
                violations.push((w[0].bits, w[1].bits));
            }
        }
    }
    SweepTrends {
        ratio_spread,
        ratio_bounded: ratio_spread.map_or(true, |r| r <= 4.0),
        non_increasing: violations.is_empty(),
        violations,
    }
}
