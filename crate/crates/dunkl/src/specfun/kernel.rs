//! The Dunkl kernel E_ν — the deformed exponential.
//!
//! Everything rests on the entire-function identity
//!
//!   E_ν(z) = Γ(ν+1/2) 2^{ν−1/2} [ ĩ_{ν−1/2}(z) + z · ĩ_{ν+1/2}(z) ],
//!
//! where ĩ_α(z) = I_α(z)/z^α is even and entire. The even term is the
//! reflection-symmetric part of E_ν and the odd term carries sgn structure,
//! so negative and complex arguments need no separate code path.

use num_complex::Complex64;

use super::bessel::{entire_i_ratio_scaled, i_ratio, i_ratio_scaled};
use super::gamma::pochhammer;
use super::DunklParam;
use crate::dd::{Dd, DdComplex};
use crate::error::{DunklError, Result};
use crate::ComplexScalar;

/// Regime switch points for |z|. Series loses digits by cancellation beyond
/// the first threshold; beyond the second the exponential-type expansion is
/// cheaper than the Bessel route and fully converged.
#[derive(Clone, Copy, Debug)]
pub struct KernelThresholds {
    pub series_max: f64,
    pub bessel_max: f64,
}

pub const THRESHOLDS: KernelThresholds = KernelThresholds {
    series_max: 12.0,
    bessel_max: 60.0,
};

/// Which evaluation path a given argument takes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvaluationRegime {
    /// Power series Σ zⁿ/[n]_ν! — small |z|, any axis.
    Series,
    /// Modified-Bessel form on the real axis, moderate |z|.
    BesselReal,
    /// Bessel-J form on the imaginary axis, |z| beyond the series range.
    BesselImag,
    /// Exponential-type expansion on the real axis, large |z|.
    Asymptotic,
}

/// Regime selection is a pure function of |z| and the axis.
pub fn evaluation_regime(z: ComplexScalar) -> EvaluationRegime {
    let r = z.norm();
    if r <= THRESHOLDS.series_max {
        EvaluationRegime::Series
    } else if z.im == 0.0 {
        if r <= THRESHOLDS.bessel_max {
            EvaluationRegime::BesselReal
        } else {
            EvaluationRegime::Asymptotic
        }
    } else {
        EvaluationRegime::BesselImag
    }
}

/// E_ν(z) for z restricted to the real or imaginary axis.
///
/// Real arguments beyond the f64 exponential range are reported as overflow;
/// use [`dunkl_kernel_scaled_real`] there.
pub fn dunkl_kernel(z: ComplexScalar, p: &DunklParam) -> Result<ComplexScalar> {
    if z.re != 0.0 && z.im != 0.0 {
        return Err(DunklError::InvalidParameter {
            name: "z",
            value: z.norm(),
            constraint: "purely real or purely imaginary argument",
        });
    }
    if z.im == 0.0 {
        dunkl_kernel_real(z.re, p).map(|v| Complex64::new(v, 0.0))
    } else {
        Ok(dunkl_kernel_imag(z.im, p))
    }
}

/// E_ν(x) for real x.
pub fn dunkl_kernel_real(x: f64, p: &DunklParam) -> Result<f64> {
    if p.nu == 0.0 {
        return if x > 709.0 {
            Err(DunklError::Overflow {
                context: "E_0(x) = exp(x)",
                argument: x,
            })
        } else {
            Ok(x.exp())
        };
    }
    let ax = x.abs();
    if ax <= THRESHOLDS.series_max {
        Ok(kernel_series_f64(Complex64::new(x, 0.0), p).re)
    } else if ax <= THRESHOLDS.bessel_max {
        let even = p.kernel_prefactor() * i_ratio(p.nu - 0.5, ax);
        let odd = p.kernel_prefactor() * x * i_ratio(p.nu + 0.5, ax);
        Ok(even + odd)
    } else {
        let scaled = kernel_asymptotic_scaled_real(x, p);
        let v = scaled * ax.exp();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(DunklError::Overflow {
                context: "E_nu(x), large real argument",
                argument: x,
            })
        }
    }
}

/// E_ν(i x) for real x. Never overflows (oscillatory decay on this axis).
pub fn dunkl_kernel_imag(x: f64, p: &DunklParam) -> ComplexScalar {
    if p.nu == 0.0 {
        return Complex64::new(x.cos(), x.sin());
    }
    kernel_complex(Complex64::new(0.0, x), p)
}

/// e^{−|x|} E_ν(x): the stable building block for heat kernels.
pub fn dunkl_kernel_scaled_real(x: f64, p: &DunklParam) -> f64 {
    if p.nu == 0.0 {
        // exp(x) e^{-|x|}
        return if x >= 0.0 { 1.0 } else { (2.0 * x).exp() };
    }
    let ax = x.abs();
    if ax <= THRESHOLDS.series_max {
        kernel_series_f64(Complex64::new(x, 0.0), p).re * (-ax).exp()
    } else if ax <= THRESHOLDS.bessel_max {
        p.kernel_prefactor() * (i_ratio_scaled(p.nu - 0.5, ax) + x * i_ratio_scaled(p.nu + 0.5, ax))
    } else {
        kernel_asymptotic_scaled_real(x, p)
    }
}

/// E_ν(z) for general complex z (internal: regularized propagators).
pub(crate) fn kernel_complex(z: Complex64, p: &DunklParam) -> Complex64 {
    kernel_complex_scaled(z, p) * Complex64::new(z.re.abs(), 0.0).exp()
}

/// e^{−|Re z|} E_ν(z) for general complex z; bounded by a power of |z|.
pub(crate) fn kernel_complex_scaled(z: Complex64, p: &DunklParam) -> Complex64 {
    if p.nu == 0.0 {
        // exp(z) e^{-|Re z|}
        return Complex64::new(z.re - z.re.abs(), z.im).exp();
    }
    if z.norm() <= THRESHOLDS.series_max {
        return kernel_series_f64(z, p) * (-z.re.abs()).exp();
    }
    let even = entire_i_ratio_scaled(p.nu - 0.5, z);
    let odd = entire_i_ratio_scaled(p.nu + 0.5, z);
    p.kernel_prefactor() * (even + z * odd)
}

/// Plain f64 power series Σ zⁿ/[n]_ν!, adequate for |z| ≤ series_max.
fn kernel_series_f64(z: Complex64, p: &DunklParam) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let zn = z.norm();
    for n in 0..600u32 {
        term = term * z / p.dunkl_number_of(n + 1);
        sum += term;
        if (n as f64) > zn && term.norm_sqr() <= f64::EPSILON * f64::EPSILON * sum.norm_sqr().max(1e-300)
        {
            break;
        }
    }
    sum
}

/// Bessel-backed evaluation of E_ν for axis-restricted arguments at any
/// |z| — the dual route to the power series:
/// E_ν(z) = Γ(ν+1/2) 2^{ν−1/2} [ĩ_{ν−1/2}(z) + z·ĩ_{ν+1/2}(z)].
pub fn dunkl_kernel_bessel_form(z: ComplexScalar, p: &DunklParam) -> Result<ComplexScalar> {
    if z.re != 0.0 && z.im != 0.0 {
        return Err(DunklError::InvalidParameter {
            name: "z",
            value: z.norm(),
            constraint: "purely real or purely imaginary argument",
        });
    }
    if p.nu == 0.0 {
        // Half-integer orders combine analytically: ĩ_{−1/2} ± ĩ_{1/2} are
        // cosh and sinh ratios, so the form reduces to e^z. Evaluating the
        // subtraction in floating point instead would lose e^{2|z|} digits
        // on the negative real axis.
        return Ok(z.exp());
    }
    let even = entire_i_ratio_scaled(p.nu - 0.5, z);
    let odd = entire_i_ratio_scaled(p.nu + 0.5, z);
    let v = p.kernel_prefactor() * (even + z * odd) * Complex64::new(z.re.abs(), 0.0).exp();
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(DunklError::Overflow {
            context: "E_nu Bessel form",
            argument: z.norm(),
        })
    }
}

/// Extended-precision reference series for E_ν (double-double carry).
///
/// Keeps ~31 digits, so the alternating-series cancellation of up to e^{30}
/// is harmless. This is the series route of the dual-representation check and
/// is deliberately independent of the Bessel-backed production path.
pub fn dunkl_kernel_series_ext(z: ComplexScalar, p: &DunklParam) -> ComplexScalar {
    let zd = DdComplex::new(z.re, z.im);
    let mut term = DdComplex::ONE;
    let mut sum = term;
    let zn = z.norm();
    for n in 0..1200u32 {
        let dn = if (n + 1) % 2 == 0 {
            Dd::from_f64((n + 1) as f64)
        } else {
            Dd::from_sum((n + 1) as f64, 2.0 * p.nu)
        };
        term = term.mul(zd).div_dd(dn);
        sum = sum.add(term);
        if (n as f64) > zn && term.abs_est() <= 1e-34 * sum.abs_est().max(1e-300) {
            break;
        }
    }
    sum.to_complex()
}

/// e^{−|x|} E_ν(x) by the confluent-hypergeometric expansion, |x| > bessel_max.
///
/// E_ν(x)  = c_ν/√(2π) · e^{x} x^{−ν}   Σ_k (ν)_k (−ν)_k  / (k! (2x)^k)
/// E_ν(−x) = ν c_ν/(2√(2π)) · e^{x} x^{−ν−1} Σ_k (ν+1)_k (1−ν)_k / (k! (2x)^k)
///
/// summed to the smallest term (far below 1e−12 for |x| ≥ 60, ν ≤ 4).
fn kernel_asymptotic_scaled_real(x: f64, p: &DunklParam) -> f64 {
    let ax = x.abs();
    let nu = p.nu;
    let sqrt2pi = (2.0 * std::f64::consts::PI).sqrt();
    if x > 0.0 {
        let s = asymptotic_sum(nu, -nu, ax);
        p.c_nu / sqrt2pi * ax.powf(-nu) * s
    } else {
        let s = asymptotic_sum(nu + 1.0, 1.0 - nu, ax);
        nu * p.c_nu / (2.0 * sqrt2pi) * ax.powf(-nu - 1.0) * s
    }
}

fn asymptotic_sum(a: f64, b: f64, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut prev = f64::INFINITY;
    for k in 0..40u32 {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((kf + 1.0) * 2.0 * x);
        if term.abs() >= prev {
            break;
        }
        sum += term;
        prev = term.abs();
        if term.abs() <= f64::EPSILON * sum.abs() {
            break;
        }
    }
    sum
}

/// Leading-order large-x forms (two terms), exposed for regime validation.
pub fn kernel_leading_asymptotic(x: f64, p: &DunklParam) -> f64 {
    let ax = x.abs();
    let nu = p.nu;
    let sqrt2pi = (2.0 * std::f64::consts::PI).sqrt();
    if x > 0.0 {
        p.c_nu / sqrt2pi * ax.exp() * ax.powf(-nu) * (1.0 - nu * nu / (2.0 * ax))
    } else {
        nu * p.c_nu / (2.0 * sqrt2pi)
            * ax.exp()
            * ax.powf(-nu - 1.0)
            * (1.0 - (nu * nu - 1.0) / (2.0 * ax))
    }
}

/// Closed-form check value: [n]_ν! = 2^{2m} m! (ν+1/2)_m for n = 2m and
/// 2^{2m+1} m! (ν+1/2)(ν+3/2)_m for n = 2m+1.
pub fn dunkl_factorial_closed_form(n: u32, p: &DunklParam) -> f64 {
    let m = n / 2;
    let mf = m as f64;
    if n % 2 == 0 {
        4f64.powf(mf) * crate::specfun::factorial(m) * pochhammer(p.nu + 0.5, m)
    } else {
        2.0 * 4f64.powf(mf)
            * crate::specfun::factorial(m)
            * (p.nu + 0.5)
            * pochhammer(p.nu + 1.5, m)
    }
}
