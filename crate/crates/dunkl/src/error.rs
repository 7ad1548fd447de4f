use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, Error)]
pub enum DunklError {
    /// A constructor argument violates its stated constraint.
    #[error("invalid parameter {name}: {value} (must satisfy {constraint})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// An evaluation would overflow f64 instead of returning ∞.
    #[error("overflow in {context} at argument {argument}")]
    Overflow {
        context: &'static str,
        argument: f64,
    },

    /// Dunkl derivative requested at the reflection fixed point.
    #[error("Dunkl derivative is singular at x = 0 unless the odd part of f vanishes linearly")]
    SingularAtOrigin,

    /// Harmonic propagator requested at a focal time where sin(ωt) ≈ 0.
    #[error("caustic: |sin(omega t)| = {sin_abs:.3e} below guard threshold")]
    Caustic { sin_abs: f64 },

    /// Quadrature tail estimate exceeded the configured tolerance.
    #[error("quadrature truncation tail {estimate:.3e} exceeds tolerance {tolerance:.3e}")]
    QuadratureTail { estimate: f64, tolerance: f64 },

    /// Kernels built on different grids cannot be composed.
    #[error("transfer kernels live on different grids ({left} vs {right} nodes)")]
    GridMismatch { left: usize, right: usize },

    /// Monte Carlo preconditions violated (sample count, potential symmetry).
    #[error("monte carlo: {0}")]
    MonteCarlo(String),

    /// A result came out non-finite where the contract forbids it.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
}

pub type Result<T> = std::result::Result<T, DunklError>;
