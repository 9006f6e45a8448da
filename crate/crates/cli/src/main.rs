use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qsubspace::linalg::{random_orthonormal, random_spd};
use qsubspace::pipeline::{error_sweep, format_matrix, run, sweep_csv, trend_checks};
use qsubspace::{
    DistanceKind, EllipsoidRoute, Error, EvolutionMode, InputModel, InputSource, Result, RunConfig,
};

/// Estimate Grassmann, ellipsoid and related distances with simulated quantum pipelines.
#[derive(Parser, Debug)]
#[command(name = "qsubspace", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one pipeline and print its report
    Run(RunArgs),
    /// Run a pipeline over several precisions and shot counts, emitting CSV
    Sweep(SweepArgs),
    /// Write a random input matrix in the text format read by --m-path/--n-path
    Gen(GenArgs),
}

#[derive(Args, Debug)]
struct PipelineArgs {
    /// grassmann, ellipsoid, asimov, projection or chordal
    #[arg(long)]
    distance: DistanceKind,

    /// blackbox or memory
    #[arg(long, default_value = "blackbox")]
    model: InputModel,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// exact or jacobi_anger
    #[arg(long, default_value = "exact")]
    evolution: EvolutionMode,

    /// Target error of the series evolution
    #[arg(long, default_value_t = 1e-6)]
    eps_h: f64,

    /// First input matrix
    #[arg(long, requires = "n_path", conflicts_with = "dim")]
    m_path: Option<PathBuf>,

    /// Second input matrix
    #[arg(long, requires = "m_path")]
    n_path: Option<PathBuf>,

    /// Generate inputs of this dimension instead of reading files
    #[arg(long, required_unless_present = "m_path")]
    dim: Option<usize>,

    /// Subspace dimension of generated inputs
    #[arg(long, default_value_t = 1)]
    rank: usize,

    /// Seed for generated inputs; the second matrix uses seed + 1
    #[arg(long, default_value_t = 0)]
    gen_seed: u64,

    /// Spectral bound: SPD inputs have eigenvalues in [1/kappa, 1]
    #[arg(long)]
    kappa: Option<f64>,

    /// similarity or quotient
    #[arg(long, default_value = "similarity")]
    route: EllipsoidRoute,

    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,

    /// Print stage timings to stderr
    #[arg(long)]
    timings: bool,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    common: PipelineArgs,

    /// Phase register size
    #[arg(long, default_value_t = 10)]
    bits: u32,

    #[arg(long, default_value_t = 1_000_000)]
    shots: u64,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    common: PipelineArgs,

    /// Comma-separated phase register sizes
    #[arg(long, value_delimiter = ',', default_value = "4,6,8,10")]
    bits: Vec<u32>,

    /// Comma-separated shot counts
    #[arg(long, value_delimiter = ',', default_value = "1000000")]
    shots: Vec<u64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MatrixKind {
    Orthonormal,
    Spd,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    n: usize,

    /// Columns of an orthonormal matrix; ignored for spd
    #[arg(long, default_value_t = 1)]
    k: usize,

    #[arg(long, default_value_t = 10.0)]
    kappa: f64,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, value_enum)]
    kind: MatrixKind,

    #[arg(long)]
    out: Option<PathBuf>,
}

impl PipelineArgs {
    fn config(&self, bits: u32, shots: u64) -> RunConfig {
        let source = match (&self.m_path, &self.n_path, self.dim) {
            (Some(m), Some(n), _) => InputSource::Files { m_path: m.clone(), n_path: n.clone() },
            (_, _, Some(n)) => InputSource::Generated {
                n,
                k: self.rank,
                kappa: self.kappa.unwrap_or(10.0),
                seed: self.gen_seed,
            },
            _ => unreachable!("clap requires files or --dim"),
        };
        RunConfig {
            model: self.model,
            bits,
            shots,
            seed: self.seed,
            evolution: self.evolution,
            eps_h: self.eps_h,
            kappa: self.kappa,
            ellipsoid_route: self.route,
            ..RunConfig::new(self.distance, source)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let report = run(&args.common.config(args.bits, args.shots))?;
            if args.common.timings {
                eprint!("{}", report.render_timings());
            }
            emit(args.common.out.as_deref(), &report.render())
        }
        Command::Sweep(args) => {
            let cfg = args.common.config(args.bits.first().copied().unwrap_or(1), 1);
            let rows = error_sweep(&cfg, &args.bits, &args.shots)?;
            let trends = trend_checks(&rows);
            eprintln!(
                "trend: ratio_spread={:?} ratio_bounded={} non_increasing={}",
                trends.ratio_spread, trends.ratio_bounded, trends.non_increasing
            );
            for v in &trends.violations {
                eprintln!("trend violation: p0 error grew from bits {} to bits {}", v.0, v.1);
            }
            emit(args.common.out.as_deref(), &sweep_csv(&rows))
        }
        Command::Gen(args) => {
            let m = match args.kind {
                MatrixKind::Orthonormal => random_orthonormal(args.n, args.k, args.seed)?,
                MatrixKind::Spd => random_spd(args.n, args.kappa, args.seed)?,
            };
            emit(args.out.as_deref(), &format_matrix(&m)?)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
