//! Numerics for Wigner-Dunkl quantum mechanics on the weighted line
//! L²(ℝ, |x|^{2ν} dx).
//!
//! The crate is organised around the objects of the theory:
//!
//! * [`specfun`] — Dunkl numbers and factorials, the deformed exponential
//!   (Dunkl kernel) E_ν in all argument regimes, Bessel functions of real
//!   order, and the Dunkl derivative as a numerical operator.
//! * [`transform`] — the Dunkl transform and its inverse by weighted
//!   quadrature, with parity-aware reduction to half-line integrals.
//! * [`dynamics`] — real-time evolution: plane waves, Gaussian packets,
//!   closed-form free and harmonic-oscillator propagators with complex-mass
//!   regularization.
//! * [`trotter`] — time-sliced path integrals as weighted transfer-matrix
//!   compositions, including the diagnostic for the naive short-time kernel.
//! * [`stochastic`] — Euclidean evolution: Dunkl heat kernel, Bessel
//!   transition densities, exact Bessel-process sampling and Feynman-Kac
//!   Monte Carlo with index-change reweighting.
//!
//! All operations are pure functions of their inputs; nothing in the crate
//! holds shared mutable state, so values may be used freely across threads.

pub mod dd;
pub mod error;
pub mod specfun;
pub mod transform;
pub mod dynamics;
pub mod trotter;
pub mod stochastic;

pub use error::{DunklError, Result};
pub use specfun::DunklParam;

/// Complex scalar used for kernels, propagators and amplitudes.
pub type ComplexScalar = num_complex::Complex64;
