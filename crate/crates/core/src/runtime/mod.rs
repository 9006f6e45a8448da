//! Register machine for phase estimation over factored density states.

mod power;
mod qpe;
mod rotation;
mod sampling;
mod state;

pub use power::{default_power_iterations, power_method_min_eig};
pub use qpe::{fejer_probability, qpe, qpe_with_tolerance, PhaseGrid, DEFAULT_UNITARY_TOL, MAX_BITS};
pub use rotation::{
    arccos_amplitude, log_amplitude, rotate_arccos, rotate_log, rotate_sqrt, rotate_with,
    sqrt_amplitude, RotationReport,
};
pub use sampling::{ancilla_zero_probability, sample_ancilla, sample_bernoulli, ShotRecord};
pub use state::{uniform_mixed_on, uniform_mixed_state, uniform_mixture_of, DensityState};
