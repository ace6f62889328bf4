//! Scalar kernel-level checks on hyperbolic space: heat and resolvent kernels,
//! Schur's test, ball volumes, finite propagation speed and the one-variable
//! lemmas behind the functional calculus.

use thiserror::Error;

pub mod appendix;
pub mod heat;
pub mod schur;
pub mod volume;
pub mod wave;

pub use heat::{h3_heat, heat_mass, impo_check, resolvent_kernel, resolvent_mass, HeatEval, ResolventParams};
pub use volume::{log_ball_volume, VolumeProfile};
pub use wave::{wave_cone_check, WaveSetup, WaveState};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
}
