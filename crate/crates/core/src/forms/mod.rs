//! Exterior calculus for template forms on the upper half-space model of `H^{N+1}`.

pub mod basis;
pub mod coefficient;
pub mod harmonic;
pub mod norm;
pub mod template;
pub mod weyl;

use thiserror::Error;

pub use basis::BasisForm;
pub use coefficient::CoefficientTerm;
pub use harmonic::{middle_harmonic, HarmonicResiduals};
pub use norm::{lp_norm, LpNorm, QuadratureGrid};
pub use template::{covariant_derivative, FormTerm, Split, TemplateForm};
pub use weyl::{weyl_form, weyl_quotient, WeylQuotient};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormError {
    #[error("multi-index {0:?} is not strictly increasing within [1, N]")]
    InvalidMultiIndex(Vec<u32>),
    #[error("ambient dimension must be positive")]
    ZeroDimension,
    #[error("degree {k} exceeds N+1 for N={n}")]
    DegreeTooLarge { n: u32, k: u32 },
    #[error("terms of degree {found} in a form of degree {expected}")]
    MixedDegree { expected: u32, found: u32 },
    #[error("coefficient built for N={found}, form has N={expected}")]
    AmbientMismatch { expected: u32, found: u32 },
    #[error("unsupported coefficient shape: {0}")]
    Unsupported(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
