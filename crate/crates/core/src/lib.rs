//! Numerical toolkit for the index ₂F₂ hypergeometric transform attached to
//! the relativistic pseudoharmonic oscillator.
//!
//! The crate is layered bottom-up:
//!
//! - [`gamma`]: complex log-gamma, Pochhammer symbols, generalized degree.
//! - [`hyper`]: generalized hypergeometric series and continuous dual Hahn
//!   polynomials.
//! - [`bessel`]: modified Bessel functions `I_ν` (series) and `K_ν`
//!   (MacDonald integral).
//! - [`quadrature`]: deterministic composite Gauss–Legendre rules for the
//!   half line and for the complex plane in polar coordinates.
//! - [`bergman`]: the weighted Bergman space `𝔉_γ(ℂ)`, its orthonormal
//!   basis and reproducing kernel.
//! - [`oscillator`]: spectrum and orthonormal eigenfunctions on `L²(ℝ₊)`.
//! - [`transform`]: coherent states and the transform `F_γ`.
//! - [`verify`]: named verification suites producing [`report::VerificationReport`]s.

pub mod bergman;
pub mod bessel;
mod error;
pub mod gamma;
pub mod hyper;
pub mod oscillator;
pub mod quadrature;
pub mod report;
pub mod sum;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
