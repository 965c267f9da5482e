//! Deformed oscillator toolkit: a cyclic-grading extension of the boson
//! algebra realized two ways, with the generalized Hermite family it
//! generates and numerical verification of the identities tying the
//! pieces together.
//!
//! The deformation is a length-`lambda` profile `nu` of complex weights
//! attached to a cyclic grading. It bends the integers into `[n] = n +
//! nu_hat(n mod lambda)` and everything downstream follows that bend: the
//! factorial, the exponential, the Hermite recurrence, the ladder
//! matrices.
//!
//! - [`params`]: profiles, derived constants, validity flags, sampling.
//! - [`ops`]: band operators on polynomials; the degree-lowering operator
//!   `Y` with `Y z^n = [n] z^{n-1}` and the grading operator `S`.
//! - [`hermite`]: the deformed Hermite family by three independent
//!   routes, with ladder, inversion and generating-function checks.
//! - [`analytic`]: the deformed exponential and its hypergeometric
//!   resummation, the weighted inner product, the reproducing kernel,
//!   the oscillator spectrum.
//! - [`functionals`]: moment functionals and the `(lambda - 1)`-fold
//!   orthogonality of the family.
//! - [`fock`]: number-basis matrices and residual checks of the algebra.
//! - [`blocks`]: block form of the vector recurrences and spectral
//!   checks on truncations.
//! - [`report`]: named residual reports shared by the verification
//!   entry points.

pub mod analytic;
pub mod blocks;
mod dd;
mod eig;
pub mod error;
pub mod fock;
pub mod functionals;
pub mod hermite;
pub mod ops;
pub mod params;
pub mod poly;
pub mod report;

pub use error::Error;
pub use params::AlgebraParams;
pub use poly::DensePoly;
pub use report::Report;

pub type Result<T> = std::result::Result<T, Error>;
