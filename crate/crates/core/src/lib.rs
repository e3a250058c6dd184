//! Variational computation of ground states for the rotating-wave equation
//!
//! ```text
//! -Δu + α² ∂θ² u + m u = |u|^{p-2} u
//! ```
//!
//! on the unit disk, on annuli and on rotationally symmetric Riemannian
//! models, together with the degenerate half-space Sobolev quotient that
//! governs the case α = 1.
//!
//! The crate is `no_std` and only needs `alloc`. Everything that touches the
//! file system or the command line lives in the companion `rotwave` crate.
//!
//! Module map:
//!
//! * [`exponents`] and [`problem`]: closed-form exponents and validated
//!   problem descriptions.
//! * [`discretize`]: staggered radial grids, angular Fourier modes and the
//!   mode/physical transforms.
//! * [`forms`]: per-mode quadratic forms, the Rayleigh quotient, its gradient
//!   and separable polar test functions in general dimension.
//! * [`solver`]: λ₁, radial and full ground states, symmetry classification,
//!   the annulus second-variation test and the rescaling check.
//! * [`halfspace`]: the anisotropic quotient on {x₁ > 0}.
//! * [`sweeps`]: parameter sweeps and log-log slope fits.
#![no_std]
// `!(x > 0.0)` is the idiom used throughout to reject NaN along with bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod discretize;
pub mod error;
pub mod exponents;
pub mod forms;
pub mod halfspace;
pub mod problem;
pub mod profile;
pub mod quadrature;
pub mod solver;
pub mod sweeps;
pub mod tridiag;

pub use error::{Error, Result};
pub use exponents::{
    annulus_kappa, annulus_nonradial_p_threshold, critical_exponent_2s, sobolev_exponent,
    SobolevExponent,
};
pub use problem::{DomainSpec, ProblemParams, ProblemSpec};
pub use profile::RiemannianProfile;
