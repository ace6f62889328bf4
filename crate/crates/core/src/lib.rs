//! Numerical toolkit for the L^p spectral theory of the Hodge Laplacian on
//! hyperbolic space `H^{N+1}`.

pub mod acceptance;
pub mod forms;
pub mod hyp;
pub mod jet;
pub mod kernels;
pub mod middle;
pub mod profile;
pub mod quad;
pub mod radial;
pub mod regions;
pub mod report;
