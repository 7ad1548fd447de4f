//! The Dunkl derivative D_x f = f′(x) + (ν/x)(f(x) − f(−x)) as a numerical
//! operator. The reflection is applied by evaluating f at −x; the reflection
//! operator itself is never materialised.

use super::DunklParam;
use crate::error::{DunklError, Result};

/// Central-difference step: balances truncation and roundoff for f64.
#[inline]
pub(crate) fn fd_step(x: f64) -> f64 {
    (1e-8 * x.abs()).max(1e-6)
}

/// D_x f at x ≠ 0 for a callable f.
///
/// The derivative part uses central differences of step `fd_step(x)`; for
/// monomials xⁿ the result reproduces [n]_ν x^{n−1} to finite-difference
/// accuracy.
pub fn dunkl_derivative(f: impl Fn(f64) -> f64, x: f64, p: &DunklParam) -> Result<f64> {
    if x == 0.0 {
        return Err(DunklError::SingularAtOrigin);
    }
    let h = fd_step(x);
    let fprime = (f(x + h) - f(x - h)) / (2.0 * h);
    Ok(fprime + p.nu / x * (f(x) - f(-x)))
}

/// D_x f at the origin for smooth f whose odd part vanishes linearly:
/// the limit is (1 + 2ν) f′(0).
pub fn dunkl_derivative_at_origin(f: impl Fn(f64) -> f64, p: &DunklParam) -> f64 {
    let h = fd_step(0.0);
    let fprime = (f(h) - f(-h)) / (2.0 * h);
    (1.0 + 2.0 * p.nu) * fprime
}
