//! End-to-end estimators: encode the inputs, run phase estimation and the amplitude
//! rotation on the mixed eigenvector state, sample the ancilla, and report the distance.

mod config;
mod engine;
mod io;
mod report;
mod sweep;

pub use config::{DistanceKind, EllipsoidRoute, EvolutionMode, InputModel, InputSource, RunConfig};
pub use io::{format_matrix, parse_matrix, read_matrix, write_matrix};
pub use report::{EigenRow, PipelineReport, Timings};
pub use sweep::{error_sweep, sweep_csv, trend_checks, SweepRow, SweepTrends, SWEEP_HEADER};

use crate::error::{invalid, Result};

fn run_checked(cfg: &RunConfig, allowed: &[DistanceKind]) -> Result<PipelineReport> {
    if !allowed.contains(&cfg.distance) {
        return Err(invalid(format!("this driver does not handle {} distance", cfg.distance)));
    }
    engine::prepare(cfg)?.run(cfg)
}

/// Grassmann distance `(π/2)·√(k·p₀)` from the arccos rotation.
pub fn run_grassmann(cfg: &RunConfig) -> Result<PipelineReport> {
    run_checked(cfg, &[DistanceKind::Grassmann])
}

/// Ellipsoid distance `√(n·p)·log_scale` from the logarithmic rotation.
pub fn run_ellipsoid(cfg: &RunConfig) -> Result<PipelineReport> {
    run_checked(cfg, &[DistanceKind::Ellipsoid])
}

/// Asimov and projection distances through the power method on the encoded Gram block,
/// chordal distance `√(k(1 − p))` through the square-root rotation.
pub fn run_extension(cfg: &RunConfig) -> Result<PipelineReport> {
    run_checked(cfg, &[DistanceKind::Asimov, DistanceKind::Projection, DistanceKind::Chordal])
}

pub fn run(cfg: &RunConfig) -> Result<PipelineReport> {
    engine::prepare(cfg)?.run(cfg)
}
