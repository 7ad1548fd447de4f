//! Gauss quadrature rules on [−1, 1] for the weight (1+u)^B, B > −1.
//!
//! B = 0 is Gauss-Legendre; B = 2ν absorbs the measure singularity |x|^{2ν}
//! on a panel touching the origin, so integrands stay smooth and the rule
//! spectral for every admissible deformation.
//!
//! Nodes are found by the interlacing ladder: the roots of the degree-k
//! orthonormal polynomial separate those of degree k+1, so each level is a
//! set of guaranteed sign-change brackets for bisection. No eigen-solver
//! needed. Weights are Christoffel numbers, w_i = 1/Σ_j π_j(u_i)².

use crate::error::{DunklError, Result};

#[derive(Clone, Debug)]
pub struct GaussRule {
    /// Nodes in (−1, 1), strictly increasing.
    pub nodes: Vec<f64>,
    /// Positive weights including the (1+u)^B weight mass.
    pub weights: Vec<f64>,
}

struct JacobiRecurrence {
    b: f64,
    mu0: f64,
}

impl JacobiRecurrence {
    fn new(b: f64) -> Self {
        // ∫_{-1}^{1} (1+u)^B du = 2^{B+1}/(B+1)
        JacobiRecurrence {
            b,
            mu0: 2f64.powf(b + 1.0) / (b + 1.0),
        }
    }

    /// Monic three-term coefficients (a_k, sqrt(b_k)) for weight (1+u)^B.
    fn alpha(&self, k: usize) -> f64 {
        let b = self.b;
        if k == 0 {
            b / (b + 2.0)
        } else {
            let kk = k as f64;
            let s = 2.0 * kk + b;
            (b * b) / (s * (s + 2.0))
        }
    }

    fn beta(&self, k: usize) -> f64 {
        let b = self.b;
        let kk = k as f64;
        let v = if k == 1 {
            4.0 * (1.0 + b) / ((2.0 + b) * (2.0 + b) * (3.0 + b))
        } else {
            let s = 2.0 * kk + b;
            4.0 * kk * kk * (kk + b) * (kk + b) / (s * s * (s + 1.0) * (s - 1.0))
        };
        v.sqrt()
    }

    /// Orthonormal values π_0(u), …, π_n(u).
    fn eval_all(&self, n: usize, u: f64, out: &mut Vec<f64>) {
        out.clear();
        out.push(1.0 / self.mu0.sqrt());
        if n == 0 {
            return;
        }
        let mut prev = 0.0;
        let mut curr = out[0];
        for k in 0..n {
            let bk = if k == 0 { 0.0 } else { self.beta(k) };
            let bk1 = self.beta(k + 1);
            let next = ((u - self.alpha(k)) * curr - bk * prev) / bk1;
            out.push(next);
            prev = curr;
            curr = next;
        }
    }

    fn eval_top(&self, n: usize, u: f64, scratch: &mut Vec<f64>) -> f64 {
        self.eval_all(n, u, scratch);
        scratch[n]
    }
}

impl GaussRule {
    /// n-point rule for the weight (1+u)^B on [−1, 1].
    pub fn jacobi(n: usize, b: f64) -> Result<GaussRule> {
        if n == 0 {
            return Err(DunklError::InvalidParameter {
                name: "n",
                value: 0.0,
                constraint: "n >= 1",
            });
        }
        if !(b > -1.0) {
            return Err(DunklError::InvalidParameter {
                name: "b",
                value: b,
                constraint: "weight exponent > -1",
            });
        }
        let rec = JacobiRecurrence::new(b);
        let mut scratch = Vec::with_capacity(n + 1);

        // Interlacing ladder from degree 1 up to n.
        let mut roots = vec![rec.alpha(0)];
        for level in 2..=n {
            let mut next = Vec::with_capacity(level);
            let mut lo = -1.0;
            for i in 0..level {
                let hi = if i < roots.len() { roots[i] } else { 1.0 };
                next.push(bisect_root(|u| rec.eval_top(level, u, &mut scratch), lo, hi));
                lo = hi;
            }
            roots = next;
        }

        let mut weights = Vec::with_capacity(n);
        for &u in &roots {
            rec.eval_all(n - 1, u, &mut scratch);
            let s: f64 = scratch.iter().map(|p| p * p).sum();
            weights.push(1.0 / s);
        }
        Ok(GaussRule {
            nodes: roots,
            weights,
        })
    }

    /// Plain Gauss-Legendre (B = 0).
    pub fn legendre(n: usize) -> Result<GaussRule> {
        GaussRule::jacobi(n, 0.0)
    }
}

fn bisect_root(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    let fhi = f(hi);
    debug_assert!(flo == 0.0 || fhi == 0.0 || (flo > 0.0) != (fhi > 0.0));
    if flo == 0.0 {
        return lo;
    }
    if fhi == 0.0 {
        return hi;
    }
    for _ in 0..90 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
