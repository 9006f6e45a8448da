use std::fmt::Write as _;
use std::time::Duration;

use super::config::{DistanceKind, EllipsoidRoute, EvolutionMode, InputModel};

/// One eigenvalue of the encoded operator and what phase estimation made of it.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenRow {
    pub lambda: f64,
    /// Rotation amplitude at the true eigenvalue.
    pub amplitude: f64,
    /// Root-mean-square amplitude over this eigenvector's phase-bin distribution, signed.
    pub effective_amplitude: f64,
    /// Eigenvalue at the most likely phase bin.
    pub bin_value: f64,
    pub bin_mass: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Timings {
    pub prepare: Duration,
    pub estimate: Duration,
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub distance: DistanceKind,
    pub model: InputModel,
    pub evolution: EvolutionMode,
    pub route: Option<EllipsoidRoute>,
    pub bits: u32,
    pub shots: u64,
    pub seed: u64,
    /// Ambient dimension of the inputs.
    pub n: usize,
    /// Number of eigenvalues carried by the mixed input state.
    pub k: usize,
    pub alpha_total: f64,
    pub kappa: Option<f64>,
    pub log_scale: Option<f64>,
    pub phase_window: Option<(f64, f64)>,
    pub classical_value: f64,
    /// Estimate from the sampled probability.
    pub quantum_estimate: f64,
    /// Estimate from the exact post-QPE probability (infinite shots).
    pub exact_estimate: f64,
    /// Probability with perfect phase estimation.
    pub ideal_p0: Option<f64>,
    pub exact_p0: Option<f64>,
    pub sampled_p0: Option<f64>,
    pub zeros: Option<u64>,
    pub epsilon_p: Option<f64>,
    /// `√(mean (ã_i + a_i)²)`, the constant with `|p̃₀ − p₀| ≤ D·ε_p`.
    pub bound_factor: Option<f64>,
    pub leaked_mass: f64,
    pub exact_phase: bool,
    pub degenerate: bool,
    pub lambda_min: Option<f64>,
    pub power_iterations: Option<usize>,
    pub eigen: Vec<EigenRow>,
    /// Not part of [`PipelineReport::render`].
    pub timings: Timings,
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt<T: std::fmt::Debug>(x: Option<T>) -> String {
    x.map_or_else(|| "none".to_string(), |v| format!("{v:?}"))
}

impl PipelineReport {
    pub fn absolute_error(&self) -> f64 {
        (self.quantum_estimate - self.classical_value).abs()
    }

    /// Key/value document with a fixed field order, followed by the eigenvalue table.
    /// Identical inputs render to identical bytes.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("distance", self.distance.to_string());
        kv("model", self.model.to_string());
        kv("evolution", self.evolution.to_string());
        kv("route", self.route.map_or_else(|| "none".into(), |r| r.to_string()));
        kv("bits", self.bits.to_string());
        kv("shots", self.shots.to_string());
        kv("seed", self.seed.to_string());
        kv("n", self.n.to_string());
        kv("k", self.k.to_string());
        kv("alpha_total", num(self.alpha_total));
        kv("kappa", opt(self.kappa));
        kv("log_scale", opt(self.log_scale));
        kv(
            "phase_window",
            self.phase_window.map_or_else(|| "none".into(), |(lo, hi)| format!("{} {}", num(lo), num(hi))),
        );
        kv("classical_value", num(self.classical_value));
        kv("quantum_estimate", num(self.quantum_estimate));
        kv("exact_estimate", num(self.exact_estimate));
        kv("absolute_error", num(self.absolute_error()));
        kv("ideal_p0", opt(self.ideal_p0));
        kv("exact_p0", opt(self.exact_p0));
        kv("sampled_p0", opt(self.sampled_p0));
        kv("zeros", opt(self.zeros));
        kv("epsilon_p", opt(self.epsilon_p));
        kv("bound_factor", opt(self.bound_factor));
        kv("leaked_mass", num(self.leaked_mass));
        kv("exact_phase", self.exact_phase.to_string());
        kv("degenerate", self.degenerate.to_string());
        kv("lambda_min", opt(self.lambda_min));
        kv("power_iterations", opt(self.power_iterations));
        kv(
            "sampling",
            if self.sampled_p0.is_some() {
                "frequency counting, standard error sqrt(p(1-p)/shots)".into()
            } else {
                "none".into()
            },
        );
        s.push_str("\n[eigenvalues]\nindex,lambda,amplitude,effective_amplitude,bin_value,bin_mass\n");
        for (i, r) in self.eigen.iter().enumerate() {
            let _ = writeln!(
                s,
                "{i},{},{},{},{},{}",
                num(r.lambda),
                num(r.amplitude),
                num(r.effective_amplitude),
                num(r.bin_value),
                num(r.bin_mass)
            );
        }
        s
    }

    pub fn render_timings(&self) -> String {
        format!(
            "prepare_seconds = {:.6}\nestimate_seconds = {:.6}\n",
            self.timings.prepare.as_secs_f64(),
            self.timings.estimate.as_secs_f64()
        )
    }
}
