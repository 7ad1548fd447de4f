//! Dunkl combinatorics, special functions and the Dunkl derivative.

mod bessel;
mod derivative;
pub mod gamma;
mod kernel;

pub use bessel::{bessel_first_kind, bessel_modified_first_kind, bessel_modified_scaled};
pub(crate) use bessel::i_ratio_scaled;
pub use derivative::{dunkl_derivative, dunkl_derivative_at_origin};
pub use kernel::{
    dunkl_factorial_closed_form, dunkl_kernel, dunkl_kernel_bessel_form, dunkl_kernel_imag,
    dunkl_kernel_real, dunkl_kernel_scaled_real, dunkl_kernel_series_ext, evaluation_regime,
    kernel_leading_asymptotic, EvaluationRegime, KernelThresholds, THRESHOLDS,
};
pub(crate) use kernel::kernel_complex_scaled;

use crate::error::{DunklError, Result};
use gamma::gamma;

/// Deformation parameter ν > −1/2 with its derived constant
/// c_ν = 2^{ν+1/2} Γ(ν+1/2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DunklParam {
    pub nu: f64,
    pub c_nu: f64,
}

impl DunklParam {
    pub fn new(nu: f64) -> Result<Self> {
        if !(nu > -0.5) || !nu.is_finite() {
            return Err(DunklError::InvalidParameter {
                name: "nu",
                value: nu,
                constraint: "nu > -1/2",
            });
        }
        let c_nu = 2f64.powf(nu + 0.5) * gamma(nu + 0.5);
        Ok(DunklParam { nu, c_nu })
    }

    /// c_ν through the Legendre-duplication route,
    /// √(2π) Γ(2ν+1) / (2^ν Γ(ν+1)); must agree with `c_nu` to 1e−12.
    pub fn c_nu_duplication(&self) -> f64 {
        (2.0 * std::f64::consts::PI).sqrt() * gamma(2.0 * self.nu + 1.0)
            / (2f64.powf(self.nu) * gamma(self.nu + 1.0))
    }

    /// Γ(ν+1/2) 2^{ν−1/2} = c_ν / 2, the prefactor of the kernel identity.
    #[inline]
    pub(crate) fn kernel_prefactor(&self) -> f64 {
        0.5 * self.c_nu
    }

    /// [n]_ν as a method (used in series recurrences).
    #[inline]
    pub fn dunkl_number_of(&self, n: u32) -> f64 {
        if n % 2 == 0 {
            n as f64
        } else {
            n as f64 + 2.0 * self.nu
        }
    }
}

/// Dunkl number [n]_ν = n + ν(1 − (−1)ⁿ): even n unchanged, odd n shifted
/// by 2ν.
pub fn dunkl_number(n: u32, p: &DunklParam) -> f64 {
    p.dunkl_number_of(n)
}

/// Dunkl factorial [n]_ν! = [1]_ν [2]_ν ⋯ [n]_ν with [0]_ν! = 1.
pub fn dunkl_factorial(n: u32, p: &DunklParam) -> Result<f64> {
    let mut acc = 1.0f64;
    for k in 1..=n {
        acc *= p.dunkl_number_of(k);
        if !acc.is_finite() {
            return Err(DunklError::Overflow {
                context: "dunkl_factorial",
                argument: n as f64,
            });
        }
    }
    Ok(acc)
}

/// Ordinary factorial in f64 (small arguments only).
pub(crate) fn factorial(m: u32) -> f64 {
    let mut acc = 1.0;
    for k in 2..=m {
        acc *= k as f64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn param_requires_nu_above_minus_half() {
        assert!(DunklParam::new(-0.5).is_err());
        assert!(DunklParam::new(-0.7).is_err());
        assert!(DunklParam::new(f64::NAN).is_err());
        assert!(DunklParam::new(-0.49).is_ok());
    }

    #[test]
    fn c_nu_routes_agree() {
        for &nu in &[-0.45, -0.3, 0.0, 0.25, 0.5, 0.8, 1.0, 1.5, 2.0, 3.3] {
            let p = DunklParam::new(nu).unwrap();
            assert_relative_eq!(p.c_nu, p.c_nu_duplication(), max_relative = 1e-12);
        }
        // nu = 0 gives the Fourier constant
        let p0 = DunklParam::new(0.0).unwrap();
        assert_relative_eq!(
            p0.c_nu,
            (2.0 * std::f64::consts::PI).sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn dunkl_number_examples() {
        let p07 = DunklParam::new(0.7).unwrap();
        assert_eq!(dunkl_number(4, &p07), 4.0);
        assert_relative_eq!(dunkl_number(1, &p07), 2.4, max_relative = 1e-15);
        let p0 = DunklParam::new(0.0).unwrap();
        assert_eq!(dunkl_number(3, &p0), 3.0);
    }

    #[test]
    fn dunkl_number_parity_sweep() {
        for &nu in &[-0.4, 0.0, 0.5, 2.0] {
            let p = DunklParam::new(nu).unwrap();
            for m in 0..=25u32 {
                assert_eq!(dunkl_number(2 * m, &p), 2.0 * m as f64);
                assert_eq!(dunkl_number(2 * m + 1, &p), (2 * m + 1) as f64 + 2.0 * nu);
            }
        }
    }

    #[test]
    fn factorial_examples() {
        let p05 = DunklParam::new(0.5).unwrap();
        assert_eq!(dunkl_factorial(0, &p05).unwrap(), 1.0);
        assert_relative_eq!(dunkl_factorial(2, &p05).unwrap(), 4.0, max_relative = 1e-15);
        let p0 = DunklParam::new(0.0).unwrap();
        assert_relative_eq!(dunkl_factorial(4, &p0).unwrap(), 24.0, max_relative = 1e-15);
    }

    #[test]
    fn factorial_matches_closed_forms() {
        for &nu in &[-0.3, 0.0, 0.5, 1.2, 2.0] {
            let p = DunklParam::new(nu).unwrap();
            for n in 0..=30u32 {
                let product = dunkl_factorial(n, &p).unwrap();
                let closed = dunkl_factorial_closed_form(n, &p);
                assert_relative_eq!(product, closed, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn factorial_overflow_reported() {
        let p = DunklParam::new(0.5).unwrap();
        assert!(dunkl_factorial(200, &p).is_err());
    }
}
