//! Gamma function on the real line (Lanczos approximation, g = 7, n = 9).
//!
//! Implemented in-repo so that accuracy is testable and portable; every
//! argument the crate needs is positive and moderate (the reflection branch
//! is kept for completeness).

use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for real x not a non-positive integer.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: Γ(x) Γ(1−x) = π / sin(πx).
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let z = x - 1.0;
        let mut acc = LANCZOS_COEFFS[0];
        for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
            acc += c / (z + i as f64);
        }
        let t = z + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
    }
}

/// Rising factorial (z)_m = z (z+1) ⋯ (z+m−1), exact product form.
pub fn pochhammer(z: f64, m: u32) -> f64 {
    let mut acc = 1.0;
    for j in 0..m {
        acc *= z + j as f64;
    }
    acc
}
