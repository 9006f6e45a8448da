//! Shared machinery: input preparation, the phase-estimation stage and report assembly.

use std::f64::consts::FRAC_PI_2;
use std::time::{Duration, Instant};

use super::config::{DistanceKind, EllipsoidRoute, EvolutionMode, InputModel, RunConfig};
use super::report::{EigenRow, PipelineReport, Timings};
use crate::distances::{
    asimov_distance, check_orthonormal_pair, check_spd, chordal_distance, ellipsoid_distance,
    grassmann_distance, projection_distance,
};
use crate::encoding::{
    ellipsoid_gram_encoding, ellipsoid_similarity_encoding, evolution_operator, gram_block_encoding,
    BlockEncoding,
};
use crate::error::{invalid, Error, Result};
use crate::linalg::{matrix_exp_unitary, sym_eig, Matrix, C64, ZERO};
use crate::memory::{build_tree, memory_ellipsoid_gram, memory_ellipsoid_similarity, memory_gram_encoding};
use crate::runtime::{
    ancilla_zero_probability, arccos_amplitude, default_power_iterations, log_amplitude,
    power_method_min_eig, qpe_with_tolerance, rotate_with, sample_bernoulli, sqrt_amplitude,
    uniform_mixture_of, PhaseGrid, DEFAULT_UNITARY_TOL,
};

/// Smallest per-step accuracy requested from the series evolution.
const SERIES_EPS_FLOOR: f64 = 1e-12;
/// Below this, condition-number bounds are raised so the phase window stays non-trivial.
const MIN_KAPPA: f64 = 2.0;
/// Distances at or below this are flagged; `acos` near 1 amplifies round-off to ~1e-8.
const DEGENERATE_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Amplitude {
    Arccos,
    Sqrt,
    Log(f64),
    /// Half logarithm, for eigenvalues of `PᵀP` standing in for those of `P`.
    HalfLog(f64),
}

impl Amplitude {
    fn eval(self, lambda: f64) -> f64 {
        match self {
            Amplitude::Arccos => arccos_amplitude(lambda),
            Amplitude::Sqrt => sqrt_amplitude(lambda),
            Amplitude::Log(s) => log_amplitude(lambda, s),
            Amplitude::HalfLog(s) => 0.5 * log_amplitude(lambda, s),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Method {
    Spectral { lo: f64, hi: f64, amplitude: Amplitude },
    Power,
}

/// Inputs validated and encoded once; stages and samples can then be drawn repeatedly.
pub(crate) struct Prepared {
    pub distance: DistanceKind,
    pub model: InputModel,
    pub route: Option<EllipsoidRoute>,
    pub n: usize,
    pub k: usize,
    pub kappa: Option<f64>,
    pub log_scale: Option<f64>,
    pub classical: f64,
    pub encoding: BlockEncoding,
    pub method: Method,
    pub prepare_time: Duration,
}

/// Outcome of phase estimation plus rotation at one register size.
#[derive(Clone, Debug)]
pub(crate) struct Stage {
    pub bits: u32,
    pub grid: PhaseGrid,
    pub rows: Vec<EigenRow>,
    pub ideal_p0: f64,
    pub exact_p0: f64,
    pub epsilon_p: f64,
    pub bound_factor: f64,
    pub leaked_mass: f64,
    pub exact_phase: bool,
    pub elapsed: Duration,
}

pub(crate) fn prepare(cfg: &RunConfig) -> Result<Prepared> {
    cfg.validate()?;
    let start = Instant::now();
    let (m, n) = cfg.load_inputs()?;
    let mut p = match cfg.distance {
        DistanceKind::Ellipsoid => prepare_ellipsoid(cfg, &m, &n)?,
        _ => prepare_subspace(cfg, &m, &n)?,
    };
    p.prepare_time = start.elapsed();
    Ok(p)
}

fn prepare_subspace(cfg: &RunConfig, m: &Matrix, n: &Matrix) -> Result<Prepared> {
    check_orthonormal_pair(m, n)?;
    let classical = match cfg.distance {
        DistanceKind::Grassmann => grassmann_distance(m, n)?,
        DistanceKind::Asimov => asimov_distance(m, n)?,
        DistanceKind::Projection => projection_distance(m, n)?,
        DistanceKind::Chordal => chordal_distance(m, n)?,
        DistanceKind::Ellipsoid => unreachable!("handled by prepare_ellipsoid"),
    };
    let encoding = match cfg.model {
        InputModel::Blackbox => gram_block_encoding(m, n)?,
        InputModel::Memory => memory_gram_encoding(&build_tree(m)?, &build_tree(n)?)?,
    };
    let method = match cfg.distance {
        DistanceKind::Grassmann => Method::Spectral { lo: 0.0, hi: 1.0, amplitude: Amplitude::Arccos },
        DistanceKind::Chordal => Method::Spectral { lo: 0.0, hi: 1.0, amplitude: Amplitude::Sqrt },
        _ => Method::Power,
    };
    Ok(Prepared {
        distance: cfg.distance,
        model: cfg.model,
        route: None,
        n: m.rows(),
        k: m.cols(),
        kappa: None,
        log_scale: None,
        classical,
        encoding,
        method,
        prepare_time: Duration::ZERO,
    })
}

fn prepare_ellipsoid(cfg: &RunConfig, m: &Matrix, n: &Matrix) -> Result<Prepared> {
    if m.shape() != n.shape() {
        return Err(invalid(format!("shape mismatch {:?} vs {:?}", m.shape(), n.shape())));
    }
    let spec_m = check_spd(m, "M")?;
    let spec_n = check_spd(n, "N")?;
    let derived = (1.0 / spec_m[0]).max(1.0 / spec_n[0]);
    let kappa = cfg.declared_kappa().unwrap_or(derived).max(MIN_KAPPA);
    for (name, spec) in [("M", &spec_m), ("N", &spec_n)] {
        let (lo, hi) = (spec[0], spec[spec.len() - 1]);
        if lo < (1.0 / kappa) * (1.0 - 1e-9) || hi > 1.0 + 1e-9 {
            return Err(Error::Precondition(format!(
                "spectrum of {name} spans [{lo}, {hi}], outside [1/kappa, 1] with kappa = {kappa}"
            )));
        }
    }
    let classical = ellipsoid_distance(m, n)?;
    let log_scale = kappa.ln() + 1.0;
    let route = cfg.ellipsoid_route;
    let (encoding, method) = match route {
        EllipsoidRoute::Similarity => {
            let e = match cfg.model {
                InputModel::Blackbox => ellipsoid_similarity_encoding(m, n, kappa)?,
                InputModel::Memory => memory_ellipsoid_similarity(m, n, kappa)?,
            };
            (e, Method::Spectral { lo: 1.0 / kappa, hi: kappa, amplitude: Amplitude::Log(log_scale) })
        }
        EllipsoidRoute::Quotient => {
            let e = match cfg.model {
                InputModel::Blackbox => ellipsoid_gram_encoding(m, n, kappa)?,
                InputModel::Memory => memory_ellipsoid_gram(m, n, kappa)?,
            };
            let k2 = kappa * kappa;
            (e, Method::Spectral { lo: 1.0 / k2, hi: k2, amplitude: Amplitude::HalfLog(log_scale) })
        }
    };
    Ok(Prepared {
        distance: DistanceKind::Ellipsoid,
        model: cfg.model,
        route: Some(route),
        n: m.rows(),
        k: m.rows(),
        kappa: Some(kappa),
        log_scale: Some(log_scale),
        classical,
        encoding,
        method,
        prepare_time: Duration::ZERO,
    })
}

fn clamp_amplitude(a: f64) -> (f64, bool) {
    if a.is_nan() {
        (0.0, true)
    } else {
        (a.clamp(-1.0, 1.0), a.abs() > 1.0)
    }
}

impl Prepared {
    /// Encoded Hermitian operator (physical units) on the full system register.
    fn operator(&self) -> Matrix {
        self.encoding.encoded().hermitian_part()
    }

    /// Leading `k × k` block, after checking it is decoupled from the padding.
    fn active_block(&self, h: &Matrix) -> Result<Matrix> {
        let (s, k) = (h.rows(), self.k);
        if s > k {
            let coupling = h.submatrix(k, 0, s - k, k).max_abs();
            if coupling > 1e-8 * h.max_abs().max(1.0) {
                return Err(Error::Invariant(format!(
                    "encoded operator couples active and padded indices ({coupling:.3e})"
                )));
            }
        }
        Ok(h.submatrix(0, 0, k, k))
    }

    pub fn estimate_from(&self, p: f64) -> f64 {
        let p = p.max(0.0);
        match self.distance {
            DistanceKind::Grassmann => FRAC_PI_2 * (self.k as f64 * p).sqrt(),
            DistanceKind::Chordal => (self.k as f64 * (1.0 - p)).max(0.0).sqrt(),
            DistanceKind::Ellipsoid => (self.n as f64 * p).sqrt() * self.log_scale.unwrap_or(1.0),
            DistanceKind::Asimov => p.clamp(0.0, 1.0).sqrt().acos(),
            DistanceKind::Projection => (1.0 - p.clamp(0.0, 1.0)).sqrt(),
        }
    }

    /// Phase estimation of `(1/k)·Σ|u_i⟩⟨u_i|` over the active eigenvectors, then the
    /// amplitude rotation.
    pub fn stage(&self, bits: u32, mode: EvolutionMode, eps_h: f64) -> Result<Stage> {
        let Method::Spectral { lo, hi, amplitude } = self.method else {
            return Err(invalid(format!("{} does not use phase estimation", self.distance)));
        };
        let start = Instant::now();
        let grid = PhaseGrid::new(bits, lo, hi)?;
        let h = self.operator();
        let (lambdas, vecs) = sym_eig(&self.active_block(&h)?)?;
        let s = h.rows();
        let k = self.k;
        let components = (0..k)
            .map(|i| {
                let mut v = vecs.column(i);
                v.resize(s, ZERO);
                v
            })
            .collect();
        let state = uniform_mixture_of(s, components)?;

        // Removing the window offset puts every in-range eigenphase in [0, π].
        let t0 = grid.base_time();
        let offset = |t: f64| C64::from_polar(1.0, lo * t0 * t);
        let phased = match mode {
            EvolutionMode::Exact => {
                let evolution = |t: f64| Ok(matrix_exp_unitary(&h, t0 * t)?.scale(offset(t)));
                qpe_with_tolerance(&evolution, &state, bits, DEFAULT_UNITARY_TOL)?
            }
            EvolutionMode::JacobiAnger => {
                let steps = grid.outcomes() as f64;
                let eps = (eps_h / steps).max(SERIES_EPS_FLOOR);
                let first = evolution_operator(&self.encoding, t0, eps, mode)?.scale(offset(1.0));
                let mut powers = vec![first];
                for _ in 1..bits {
                    let last = powers.last().expect("non-empty");
                    powers.push(last.matmul(last));
                }
                let evolution = |t: f64| {
                    let b = t.log2().round() as usize;
                    powers
                        .get(b)
                        .cloned()
                        .ok_or_else(|| Error::Invariant(format!("no cached evolution for t = {t}")))
                };
                qpe_with_tolerance(&evolution, &state, bits, (4.0 * eps_h).max(DEFAULT_UNITARY_TOL))?
            }
        }
        .renormalized()?;

        let table: Vec<f64> = (0..grid.outcomes())
            .map(|j| clamp_amplitude(amplitude.eval(grid.value(j).0)).0)
            .collect();
        let (rotated, rot) = rotate_with(&phased, &grid, &|l| amplitude.eval(l))?;
        let exact_p0 = ancilla_zero_probability(&rotated)?;

        let mut rows = Vec::with_capacity(k);
        let (mut ideal, mut err2, mut sum2, mut mean_eff2) = (0.0, 0.0, 0.0, 0.0);
        let mut exact_phase = true;
        for (i, &lambda) in lambdas.iter().enumerate() {
            let dist = phased.component_marginal(i, "phase")?;
            let total: f64 = dist.iter().sum();
            let a = clamp_amplitude(amplitude.eval(lambda.clamp(lo, hi))).0;
            let eff2: f64 = dist.iter().zip(&table).map(|(p, t)| p * t * t).sum::<f64>() / total;
            let eff = if a < 0.0 { -eff2.sqrt() } else { eff2.sqrt() };
            let (peak, mass) = dist
                .iter()
                .enumerate()
                .fold((0, f64::MIN), |best, (j, &p)| if p > best.1 { (j, p) } else { best });
            rows.push(EigenRow {
                lambda,
                amplitude: a,
                effective_amplitude: eff,
                bin_value: grid.value(peak).0,
                bin_mass: mass / total,
            });
            ideal += a * a;
            mean_eff2 += eff2;
            err2 += (eff - a).powi(2);
            sum2 += (eff + a).powi(2);
            exact_phase &= grid.is_exact(lambda, 1e-9);
        }
        let kf = k as f64;
        if (mean_eff2 / kf - exact_p0).abs() > 1e-6 {
            return Err(Error::Invariant(format!(
                "per-eigenvalue bookkeeping {} disagrees with simulated p0 {exact_p0}",
                mean_eff2 / kf
            )));
        }
        Ok(Stage {
            bits,
            grid,
            rows,
            ideal_p0: ideal / kf,
            exact_p0,
            epsilon_p: (err2 / kf).sqrt(),
            bound_factor: (sum2 / kf).sqrt(),
            leaked_mass: rot.clamped_mass,
            exact_phase,
            elapsed: start.elapsed(),
        })
    }

    /// Samples the stage (or runs the power method) and assembles the report.
    pub fn report(&self, cfg: &RunConfig, stage: Option<&Stage>, shots: u64) -> Result<PipelineReport> {
        let start = Instant::now();
        let mut r = PipelineReport {
            distance: self.distance,
            model: self.model,
            evolution: cfg.evolution,
            route: self.route,
            bits: cfg.bits,
            shots,
            seed: cfg.seed,
            n: self.n,
            k: self.k,
            alpha_total: self.encoding.alpha(),
            kappa: self.kappa,
            log_scale: self.log_scale,
            phase_window: None,
            classical_value: self.classical,
            quantum_estimate: 0.0,
            exact_estimate: 0.0,
            ideal_p0: None,
            exact_p0: None,
            sampled_p0: None,
            zeros: None,
            epsilon_p: None,
            bound_factor: None,
            leaked_mass: 0.0,
            exact_phase: false,
            degenerate: self.classical <= DEGENERATE_TOL,
            lambda_min: None,
            power_iterations: None,
            eigen: Vec::new(),
            timings: Timings { prepare: self.prepare_time, estimate: Duration::ZERO },
        };
        match (self.method, stage) {
            (Method::Spectral { .. }, Some(st)) => {
                let record = sample_bernoulli(st.exact_p0, shots, cfg.seed)?;
                r.bits = st.bits;
                r.phase_window = Some((st.grid.lo, st.grid.hi));
                r.quantum_estimate = self.estimate_from(record.p_hat);
                r.exact_estimate = self.estimate_from(st.exact_p0);
                r.ideal_p0 = Some(st.ideal_p0);
                r.exact_p0 = Some(st.exact_p0);
                r.sampled_p0 = Some(record.p_hat);
                r.zeros = Some(record.zeros);
                r.epsilon_p = Some(st.epsilon_p);
                r.bound_factor = Some(st.bound_factor);
                r.leaked_mass = st.leaked_mass;
                r.exact_phase = st.exact_phase;
                r.eigen = st.rows.clone();
                r.timings.estimate = st.elapsed;
            }
            (Method::Power, _) => {
                let block = self.active_block(&self.operator())?;
                let iters = default_power_iterations(&block, cfg.seed)?;
                let lambda = power_method_min_eig(&block, iters, cfg.seed)?.clamp(0.0, 1.0);
                r.quantum_estimate = self.estimate_from(lambda);
                r.exact_estimate = r.quantum_estimate;
                r.lambda_min = Some(lambda);
                r.power_iterations = Some(iters);
            }
            (Method::Spectral { .. }, None) => {
                return Err(Error::Invariant("phase-estimation report without a stage".into()));
            }
        }
        r.timings.estimate += start.elapsed();
        Ok(r)
    }

    pub fn run(&self, cfg: &RunConfig) -> Result<PipelineReport> {
        let stage = match self.method {
            Method::Spectral { .. } => Some(self.stage(cfg.bits, cfg.evolution, cfg.eps_h)?),
            Method::Power => None,
        };
        self.report(cfg, stage.as_ref(), cfg.shots)
    }
}
