use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

pub use crate::encoding::EvolutionMode;
use crate::error::{invalid, Error, Result};
use crate::linalg::{random_orthonormal, random_spd, Matrix};
use crate::runtime::MAX_BITS;

use super::io::read_matrix;

macro_rules! named_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(&self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($text => Ok($name::$variant),)+
                    other => Err(invalid(format!(
                        "unknown {} {other:?}", stringify!($name)
                    ))),
                }
            }
        }
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DistanceKind {
    Grassmann,
    Ellipsoid,
    Asimov,
    Projection,
    Chordal,
}

named_enum!(DistanceKind {
    Grassmann => "grassmann",
    Ellipsoid => "ellipsoid",
    Asimov => "asimov",
    Projection => "projection",
    Chordal => "chordal",
});

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InputModel {
    /// Sparse-access oracles realised as exact matrix-application unitaries.
    Blackbox,
    /// Binary-tree amplitude store.
    Memory,
}

named_enum!(InputModel { Blackbox => "blackbox", Memory => "memory" });

/// How the ellipsoid pipeline turns `M⁻¹N` into a Hermitian encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EllipsoidRoute {
    /// Phase estimation on `M^{-1/2} N M^{-1/2}`, which shares the eigenvalues of `M⁻¹N`.
    Similarity,
    /// Phase estimation on `PᵀP` with halved logarithms; reads singular values of `P`.
    Quotient,
}

named_enum!(EllipsoidRoute { Similarity => "similarity", Quotient => "quotient" });

impl FromStr for EvolutionMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(EvolutionMode::Exact),
            "jacobi_anger" | "jacobi-anger" => Ok(EvolutionMode::JacobiAnger),
            other => Err(invalid(format!("unknown evolution mode {other:?}"))),
        }
    }
}

impl fmt::Display for EvolutionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvolutionMode::Exact => "exact",
            EvolutionMode::JacobiAnger => "jacobi_anger",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InputSource {
    Files { m_path: PathBuf, n_path: PathBuf },
    Matrices { m: Matrix, n: Matrix },
    /// Orthonormal `n × k` pairs, or SPD `n × n` pairs with spectrum in `[1/kappa, 1]`.
    /// `M` uses `seed` and `N` uses `seed + 1`.
    Generated { n: usize, k: usize, kappa: f64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub distance: DistanceKind,
    pub model: InputModel,
    pub bits: u32,
    pub shots: u64,
    pub seed: u64,
    pub evolution: EvolutionMode,
    pub eps_h: f64,
    pub source: InputSource,
    /// Spectral bound for ellipsoid inputs; derived from the data when absent.
    pub kappa: Option<f64>,
    pub ellipsoid_route: EllipsoidRoute,
}

impl RunConfig {
    pub fn new(distance: DistanceKind, source: InputSource) -> Self {
        RunConfig {
            distance,
            model: InputModel::Blackbox,
            bits: 10,
            shots: 1_000_000,
            seed: 0,
            evolution: EvolutionMode::Exact,
            eps_h: 1e-6,
            source,
            kappa: None,
            ellipsoid_route: EllipsoidRoute::Similarity,
        }
    }

    pub fn with_matrices(distance: DistanceKind, m: Matrix, n: Matrix) -> Self {
        RunConfig::new(distance, InputSource::Matrices { m, n })
    }

    pub fn validate(&self) -> Result<()> {
        if self.bits < 1 || self.bits > 16 {
            return Err(invalid(format!("bits must lie in [1, 16], got {}", self.bits)));
        }
        debug_assert!(16 <= MAX_BITS);
        if self.shots < 1 {
            return Err(invalid("shots must be >= 1"));
        }
        if !(self.eps_h > 0.0 && self.eps_h < 1.0) {
            return Err(invalid(format!("eps_h must lie in (0, 1), got {}", self.eps_h)));
        }
        if let Some(k) = self.kappa {
            if !(k >= 1.0) || !k.is_finite() {
                return Err(invalid(format!("kappa must be finite and >= 1, got {k}")));
            }
        }
        if let InputSource::Generated { n, k, kappa, .. } = &self.source {
            if *n == 0 || *k == 0 || k > n {
                return Err(invalid(format!("generator needs 1 <= k <= n, got n={n}, k={k}")));
            }
            if self.distance == DistanceKind::Ellipsoid && !(*kappa > 1.0) {
                return Err(invalid(format!("generator kappa must be > 1, got {kappa}")));
            }
        }
        Ok(())
    }

    /// The `(M, N)` pair this configuration describes.
    pub fn load_inputs(&self) -> Result<(Matrix, Matrix)> {
        match &self.source {
            InputSource::Files { m_path, n_path } => Ok((read_matrix(m_path)?, read_matrix(n_path)?)),
            InputSource::Matrices { m, n } => Ok((m.clone(), n.clone())),
            InputSource::Generated { n, k, kappa, seed } => {
                if self.distance == DistanceKind::Ellipsoid {
                    Ok((random_spd(*n, *kappa, *seed)?, random_spd(*n, *kappa, seed + 1)?))
                } else {
                    Ok((random_orthonormal(*n, *k, *seed)?, random_orthonormal(*n, *k, seed + 1)?))
                }
            }
        }
    }

    /// The generator's `kappa` when inputs are generated, else the explicit setting.
    pub fn declared_kappa(&self) -> Option<f64> {
        match (&self.source, self.kappa) {
            (_, Some(k)) => Some(k),
            (InputSource::Generated { kappa, .. }, None) => Some(*kappa),
            _ => None,
        }
    }
}
