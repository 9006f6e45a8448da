//! Simulation of quantum subspace-distance algorithms at desk scale.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: dense complex matrices, Jacobi SVD and eigensolvers, instance generators.
//! * [`distances`]: exact classical distances between subspaces and SPD matrices.
//! * [`encoding`]: block encodings, qubitized Chebyshev iterates, Hamiltonian evolution.
//! * [`memory`]: binary-tree amplitude store and its block encodings.
//! * [`runtime`]: register machine for phase estimation, rotations and sampling.
//! * [`pipeline`]: end-to-end estimators, reports, sweeps and file I/O.

pub mod distances;
pub mod encoding;
pub mod error;
pub mod linalg;
pub mod memory;
pub mod pipeline;
pub mod runtime;

pub use encoding::BlockEncoding;
pub use error::{Error, Result};
pub use linalg::{Matrix, SvdResult, C64};
pub use memory::MemoryTree;
pub use pipeline::{
    DistanceKind, EllipsoidRoute, EvolutionMode, InputModel, InputSource, PipelineReport,
    RunConfig,
};
pub use runtime::{DensityState, ShotRecord};
