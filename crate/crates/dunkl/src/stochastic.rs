//! Euclidean evolution: the Dunkl heat kernel, Bessel transition densities,
//! exact Bessel-process sampling and Feynman-Kac Monte Carlo.
//!
//! The jump process generated by the Dunkl Laplacian is never simulated
//! directly. Its kernel splits into a reflection-even and a reflection-odd
//! sector, each carried by a continuous Bessel process on the half-line:
//!
//!   d^{(ν)}_τ(x,y) = b^{(ν−1/2)}_τ(|x|,|y|) + xy · b^{(ν+1/2)}_τ(|x|,|y|),
//!
//! so a weighted pairing ⟨f, e^{τ(L−V)}δ_y⟩ becomes two half-line path
//! expectations: the even part of f rides the reflecting (ν−1/2) process and
//! the odd part, divided by the endpoint, rides the absorbing (ν+1/2) one
//! with the xy weight.
//!
//! One-step transitions are sampled exactly: the squared process is a
//! noncentral chi-square with dimension 2α+2 and noncentrality z²/dt,
//! realized as χ²_{δ+2J} with Poisson-mixed J. No Euler-Maruyama bias, so
//! distributional tests probe the transition law itself.
//!
//! Monte Carlo runs are reproducible: each path owns a counter-derived
//! ChaCha12 stream selected by its path index, and the reduction runs in
//! fixed path order, so results are bit-identical for any worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Gamma, Poisson};

use crate::error::{DunklError, Result};
use crate::specfun::{dunkl_kernel_scaled_real, i_ratio_scaled, DunklParam};
use crate::transform::{PanelLayout, WeightedGrid};

/// Boundary behaviour of the Bessel process at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BesselBoundary {
    ReflectingNeumann,
    AbsorbingDirichlet,
}

/// Bessel-process index α > −1 ("dimension" d = 2α+2) plus boundary type.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselIndex {
    pub alpha: f64,
    pub boundary: BesselBoundary,
}

impl BesselIndex {
    pub fn new(alpha: f64, boundary: BesselBoundary) -> Result<BesselIndex> {
        if !(alpha > -1.0) {
            return Err(DunklError::InvalidParameter {
                name: "alpha",
                value: alpha,
                constraint: "alpha > -1",
            });
        }
        Ok(BesselIndex { alpha, boundary })
    }

    /// Even (reflection-symmetric) sector of the Dunkl process.
    pub fn dunkl_even(p: &DunklParam) -> BesselIndex {
        BesselIndex {
            alpha: p.nu - 0.5,
            boundary: BesselBoundary::ReflectingNeumann,
        }
    }

    /// Odd sector of the Dunkl process; its density vanishes at the origin.
    pub fn dunkl_odd(p: &DunklParam) -> BesselIndex {
        BesselIndex {
            alpha: p.nu + 0.5,
            boundary: BesselBoundary::AbsorbingDirichlet,
        }
    }

    #[inline]
    pub fn dimension(&self) -> f64 {
        2.0 * self.alpha + 2.0
    }
}

/// A sampled trajectory (diagnostics and CLI emission).
#[derive(Clone, Debug)]
pub struct BesselPath {
    pub index: BesselIndex,
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
    pub rng_seed: u64,
}

/// Monte Carlo estimate with its sampling error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MCEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau > 0.0) {
        return Err(DunklError::InvalidParameter {
            name: "tau",
            value: tau,
            constraint: "tau > 0",
        });
    }
    Ok(())
}

/// Dunkl heat kernel d^{(ν)}_τ(x,y) = e^{−(x²+y²)/2τ} E_ν(xy/τ) / (c_ν τ^{ν+1/2}),
/// strictly positive, computed in the overflow-free scaled form.
pub fn dunkl_heat_kernel(x: f64, y: f64, tau: f64, p: &DunklParam) -> Result<f64> {
    check_tau(tau)?;
    let u = x * y / tau;
    let gap = (x.abs() - y.abs()) / tau.sqrt();
    let v = (-(0.5) * gap * gap).exp() * dunkl_kernel_scaled_real(u, p)
        / (p.c_nu * tau.powf(p.nu + 0.5));
    if !v.is_finite() {
        return Err(DunklError::NonFinite("dunkl heat kernel"));
    }
    Ok(v)
}

/// Euclidean harmonic-oscillator kernel (ħ = m = 1):
/// (1/c_ν)(ω/sinh ωτ)^{ν+1/2} e^{−(ω/2)(x²+y²)coth ωτ} E_ν(ωxy/sinh ωτ).
pub fn dunkl_ho_heat_kernel(x: f64, y: f64, tau: f64, omega: f64, p: &DunklParam) -> Result<f64> {
    check_tau(tau)?;
    if !(omega > 0.0) {
        return Err(DunklError::InvalidParameter {
            name: "omega",
            value: omega,
            constraint: "omega > 0",
        });
    }
    let sh = (omega * tau).sinh();
    let ch = (omega * tau).cosh();
    let u = omega * x * y / sh;
    // exponent |u| − (ω/2)(x²+y²)coth ≤ 0
    let expo = u.abs() - 0.5 * omega * (x * x + y * y) * ch / sh;
    let v = (omega / sh).powf(p.nu + 0.5) / p.c_nu * expo.exp() * dunkl_kernel_scaled_real(u, p);
    if !v.is_finite() {
        return Err(DunklError::NonFinite("harmonic heat kernel"));
    }
    Ok(v)
}

/// Which normalization convention of the Bessel transition density.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityForm {
    /// b^{(α)}_τ(x,y), symmetric in (x,y); weighted by the speed measure.
    Symmetric,
    /// b̃ = 2x^{2α+1} b — a probability density in x against plain dx.
    Asymmetric,
}

/// Bessel transition density on the half-line; x = 0 or y = 0 taken by the
/// series limit of I_α.
pub fn bessel_density(x: f64, y: f64, tau: f64, idx: BesselIndex, form: DensityForm) -> Result<f64> {
    check_tau(tau)?;
    if x < 0.0 || y < 0.0 {
        return Err(DunklError::InvalidParameter {
            name: "x,y",
            value: x.min(y),
            constraint: "x, y >= 0",
        });
    }
    let alpha = idx.alpha;
    let w = x * y / tau;
    let gap = x - y;
    // b = τ^{-(α+1)}/2 · ĩ_α(w) e^{-(x²+y²)/2τ}   with ĩ_α = I_α(w)/w^α
    let sym = 0.5 * tau.powf(-(alpha + 1.0))
        * i_ratio_scaled(alpha, w)
        * (-gap * gap / (2.0 * tau)).exp();
    let v = match form {
        DensityForm::Symmetric => sym,
        DensityForm::Asymmetric => 2.0 * x.powf(2.0 * alpha + 1.0) * sym,
    };
    if !v.is_finite() {
        return Err(DunklError::NonFinite("bessel density"));
    }
    Ok(v)
}

/// Relative residual of the sector decomposition
/// d^{(ν)}_τ(x,y) − b^{(ν−1/2)}(|x|,|y|) − xy·b^{(ν+1/2)}(|x|,|y|).
pub fn density_decomposition_check(x: f64, y: f64, tau: f64, p: &DunklParam) -> Result<f64> {
    let d = dunkl_heat_kernel(x, y, tau, p)?;
    let even = bessel_density(x.abs(), y.abs(), tau, BesselIndex::dunkl_even(p), DensityForm::Symmetric)?;
    let odd = bessel_density(x.abs(), y.abs(), tau, BesselIndex::dunkl_odd(p), DensityForm::Symmetric)?;
    Ok(((d - even - x * y * odd) / d).abs())
}

/// Exact one-step transition: Z² / dt is noncentral chi-square with
/// dimension 2α+2 and noncentrality current²/dt.
pub fn sample_bessel_step(
    current: f64,
    dt: f64,
    idx: BesselIndex,
    rng: &mut ChaCha12Rng,
) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(DunklError::InvalidParameter {
            name: "dt",
            value: dt,
            constraint: "dt > 0",
        });
    }
    if current < 0.0 {
        return Err(DunklError::InvalidParameter {
            name: "current",
            value: current,
            constraint: "current >= 0",
        });
    }
    let delta = idx.dimension();
    let lambda_half = current * current / (2.0 * dt);
    let j = if lambda_half > 0.0 {
        Poisson::new(lambda_half)
            .map_err(|_| DunklError::MonteCarlo("invalid Poisson rate".into()))?
            .sample(rng)
    } else {
        0.0
    };
    let shape = 0.5 * delta + j;
    let w = Gamma::new(shape, 2.0)
        .map_err(|_| DunklError::MonteCarlo("invalid Gamma shape".into()))?
        .sample(rng);
    Ok((dt * w).sqrt())
}

/// Sample a whole skeleton path of n_steps over [0, τ].
pub fn sample_bessel_path(
    start: f64,
    tau: f64,
    n_steps: u32,
    idx: BesselIndex,
    seed: u64,
    stream: u64,
) -> Result<BesselPath> {
    check_tau(tau)?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let dt = tau / n_steps as f64;
    let mut times = Vec::with_capacity(n_steps as usize + 1);
    let mut positions = Vec::with_capacity(n_steps as usize + 1);
    times.push(0.0);
    positions.push(start);
    let mut z = start;
    for k in 1..=n_steps {
        z = sample_bessel_step(z, dt, idx, &mut rng)?;
        times.push(dt * k as f64);
        positions.push(z);
    }
    Ok(BesselPath {
        index: idx,
        times,
        positions,
        rng_seed: seed,
    })
}

/// Controls for a path-expectation run.
#[derive(Clone, Copy, Debug)]
pub struct McRun {
    pub n_paths: u64,
    pub n_steps: u32,
    pub seed: u64,
    pub workers: usize,
    /// Positions below this enter 1/z²-type potentials clamped; 0 disables.
    pub clamp_z: f64,
}

impl McRun {
    pub fn new(n_paths: u64, n_steps: u32, seed: u64) -> McRun {
        McRun {
            n_paths,
            n_steps,
            seed,
            workers: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            clamp_z: 0.0,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> McRun {
        self.workers = workers.max(1);
        self
    }

    pub fn with_clamp(mut self, clamp_z: f64) -> McRun {
        self.clamp_z = clamp_z;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_paths < 100 {
            return Err(DunklError::MonteCarlo(format!(
                "n_paths = {} too small (minimum 100)",
                self.n_paths
            )));
        }
        if self.n_steps == 0 {
            return Err(DunklError::MonteCarlo("n_steps must be positive".into()));
        }
        Ok(())
    }
}

/// Single-sector Bessel Feynman-Kac expectation
/// E_y[ terminal(Z_τ) · exp(−∫₀^τ V(Z_s) ds) ], trapezoid V-integral on the
/// skeleton. Returns the estimate and the fraction of paths that ever
/// entered the clamp region.
pub fn bessel_fk_mc(
    v: &(dyn Fn(f64) -> f64 + Sync),
    y: f64,
    tau: f64,
    idx: BesselIndex,
    terminal: &(dyn Fn(f64) -> f64 + Sync),
    run: &McRun,
) -> Result<(MCEstimate, f64)> {
    check_tau(tau)?;
    run.validate()?;
    let dt = tau / run.n_steps as f64;
    let clamp = run.clamp_z;
    let vv = |z: f64| v(z.max(clamp));
    let eval_path = move |stream: u64| -> Result<(f64, bool)> {
        let mut rng = ChaCha12Rng::seed_from_u64(run.seed);
        rng.set_stream(stream);
        let mut z = y.abs();
        let mut clamped = z < clamp;
        let mut action = 0.0;
        let mut v_prev = vv(z);
        for _ in 0..run.n_steps {
            z = sample_bessel_step(z, dt, idx, &mut rng)?;
            if z < clamp {
                clamped = true;
            }
            let v_here = vv(z);
            action += 0.5 * dt * (v_prev + v_here);
            v_prev = v_here;
        }
        Ok((terminal(z) * (-action).exp(), clamped))
    };
    let (est, clamp_rate) = reduce_paths(run, &eval_path)?;
    Ok((est, clamp_rate))
}

/// Weighted pairing ⟨f, e^{τ(L−V)} δ_y⟩ = ∫ dx |x|^{2ν} f(x) ⟨x|e^{τ(L−V)}|y⟩
/// by the two-sector Bessel reduction. V must be symmetric and bounded
/// below; f needs Gaussian-type decay.
pub fn feynman_kac_mc(
    v: &(dyn Fn(f64) -> f64 + Sync),
    y: f64,
    tau: f64,
    p: &DunklParam,
    f: &(dyn Fn(f64) -> f64 + Sync),
    run: &McRun,
) -> Result<MCEstimate> {
    check_tau(tau)?;
    run.validate()?;
    for &probe in &[0.37, 1.1, 2.6] {
        if (v(probe) - v(-probe)).abs() > 1e-12 * (1.0 + v(probe).abs()) {
            return Err(DunklError::MonteCarlo(
                "potential must be symmetric: V(x) = V(-x)".into(),
            ));
        }
    }
    let even_idx = BesselIndex::dunkl_even(p);
    let odd_idx = BesselIndex::dunkl_odd(p);
    let dt = tau / run.n_steps as f64;
    let eval_path = move |stream: u64| -> Result<(f64, bool)> {
        let mut rng = ChaCha12Rng::seed_from_u64(run.seed);
        rng.set_stream(stream);
        let start = y.abs();
        // even sector: reflecting process, terminal (f(z)+f(-z))/2
        let mut z = start;
        let mut action = 0.0;
        let mut v_prev = v(z);
        for _ in 0..run.n_steps {
            z = sample_bessel_step(z, dt, even_idx, &mut rng)?;
            let v_here = v(z);
            action += 0.5 * dt * (v_prev + v_here);
            v_prev = v_here;
        }
        let even_term = 0.5 * (f(z) + f(-z)) * (-action).exp();
        // odd sector: absorbing process, terminal y·(f(z)−f(-z))/(2z)
        let mut z = start;
        let mut action = 0.0;
        let mut v_prev = v(z);
        for _ in 0..run.n_steps {
            z = sample_bessel_step(z, dt, odd_idx, &mut rng)?;
            let v_here = v(z);
            action += 0.5 * dt * (v_prev + v_here);
            v_prev = v_here;
        }
        let odd_term = if z > 0.0 {
            y * 0.5 * (f(z) - f(-z)) / z * (-action).exp()
        } else {
            0.0
        };
        Ok((even_term + odd_term, false))
    };
    let (est, _) = reduce_paths(run, &eval_path)?;
    Ok(est)
}

/// Report of the index-change identity check.
#[derive(Clone, Debug)]
pub struct RadonNikodymReport {
    /// Direct β-process expectation E^{(β)}_y[φ(Z_τ) e^{−∫V}].
    pub direct: MCEstimate,
    /// y^{α−β} E^{(α)}_y[φ(Z_τ) Z_τ^{β−α} e^{−∫V} e^{−(β²−α²)∫ds/2z²}].
    pub reweighted: MCEstimate,
    /// Fraction of α-side paths that entered the clamp region.
    pub clamp_rate: f64,
    /// |direct − reweighted| in units of the combined standard error.
    pub discrepancy_sigmas: f64,
}

/// Statistical check of the index-change identity between Bessel processes
/// of index α and β: the α-process expectation with the extra 1/z² potential
/// and endpoint factor reproduces the β-process expectation. φ is the
/// Gaussian-decay terminal test function; V is an optional common potential.
pub fn radon_nikodym_check(
    alpha: f64,
    beta: f64,
    y: f64,
    tau: f64,
    v: &(dyn Fn(f64) -> f64 + Sync),
    phi: &(dyn Fn(f64) -> f64 + Sync),
    run: &McRun,
) -> Result<RadonNikodymReport> {
    let idx_a = BesselIndex::new(alpha, BesselBoundary::ReflectingNeumann)?;
    let idx_b = BesselIndex::new(beta, BesselBoundary::AbsorbingDirichlet)?;
    if !(y > 0.0) {
        return Err(DunklError::InvalidParameter {
            name: "y",
            value: y,
            constraint: "y > 0",
        });
    }
    let run_a = if run.clamp_z > 0.0 { *run } else { run.with_clamp(1e-6) };
    let clamp = run_a.clamp_z;

    let (direct, _) = bessel_fk_mc(v, y, tau, idx_b, phi, run)?;

    let extra = 0.5 * (beta * beta - alpha * alpha);
    let v_rn = move |z: f64| v(z) + extra / (z.max(clamp) * z.max(clamp));
    let pow = beta - alpha;
    let term = move |z: f64| phi(z) * z.powf(pow);
    let (rw_raw, clamp_rate) = bessel_fk_mc(&v_rn, y, tau, idx_a, &term, &run_a)?;
    let scale = y.powf(alpha - beta);
    let reweighted = MCEstimate {
        mean: scale * rw_raw.mean,
        std_error: scale.abs() * rw_raw.std_error,
        ..rw_raw
    };
    let sigma = (direct.std_error.powi(2) + reweighted.std_error.powi(2)).sqrt();
    Ok(RadonNikodymReport {
        discrepancy_sigmas: (direct.mean - reweighted.mean).abs() / sigma.max(1e-300),
        direct,
        reweighted,
        clamp_rate,
    })
}

/// Closed-form radial harmonic-oscillator kernel for the Bessel process:
/// ⟨x|e^{τ(L_B^{(α)} − ω²z²/2)}|y⟩ against the speed measure.
pub fn bessel_ho_kernel(x: f64, y: f64, tau: f64, omega: f64, alpha: f64) -> Result<f64> {
    check_tau(tau)?;
    let sh = (omega * tau).sinh();
    let ch = (omega * tau).cosh();
    let w = omega * x * y / sh;
    let expo = w - 0.5 * omega * (x * x + y * y) * ch / sh;
    Ok(0.5 * (omega / sh).powf(alpha + 1.0) * i_ratio_scaled(alpha, w) * expo.exp())
}

/// Fixed-order reduction over path streams, parallelised by contiguous
/// chunks; results do not depend on the worker count.
fn reduce_paths(
    run: &McRun,
    eval_path: &(dyn Fn(u64) -> Result<(f64, bool)> + Sync),
) -> Result<(MCEstimate, f64)> {
    let n = run.n_paths as usize;
    let mut values = vec![0.0f64; n];
    let mut clamped = vec![false; n];
    let workers = run.workers.max(1).min(n);
    let chunk = n.div_ceil(workers);

    let result: Result<()> = std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for (w, (vals, clams)) in values
            .chunks_mut(chunk)
            .zip(clamped.chunks_mut(chunk))
            .enumerate()
        {
            let start = w * chunk;
            handles.push(scope.spawn(move || -> Result<()> {
                for (i, (val, cl)) in vals.iter_mut().zip(clams.iter_mut()).enumerate() {
                    // stream ids start at 1: stream 0 is reserved for scratch
                    let (v, c) = eval_path((start + i) as u64 + 1)?;
                    *val = v;
                    *cl = c;
                }
                Ok(())
            }));
        }
        for h in handles {
            h.join().expect("worker panicked")?;
        }
        Ok(())
    });
    result?;

    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (nf - 1.0);
    let clamp_rate = clamped.iter().filter(|&&c| c).count() as f64 / nf;
    Ok((
        MCEstimate {
            mean,
            std_error: (var / nf).sqrt(),
            n_samples: run.n_paths,
            seed: run.seed,
        },
        clamp_rate,
    ))
}

/// Quadrature of ∫ dx |x|^{2ν} f(x) kernel(x) over the weighted line —
/// the closed-form side of the Monte Carlo comparisons.
pub fn weighted_pairing(
    f: &dyn Fn(f64) -> f64,
    kernel: &dyn Fn(f64) -> Result<f64>,
    p: &DunklParam,
    x_max: f64,
) -> Result<f64> {
    let grid = WeightedGrid::full_line(p.nu, x_max, PanelLayout::default())?;
    let mut acc = 0.0;
    for (&x, &w) in grid.nodes.iter().zip(&grid.weights) {
        acc += w * f(x) * kernel(x)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{free_propagator_complex_time, MassTime};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn p(nu: f64) -> DunklParam {
        DunklParam::new(nu).unwrap()
    }

    #[test]
    fn heat_kernel_nu0_is_wiener() {
        let pr = p(0.0);
        let v = dunkl_heat_kernel(1.0, 0.0, 1.0, &pr).unwrap();
        assert_relative_eq!(v, (2.0 * PI).sqrt().recip() * (-0.5f64).exp(), max_relative = 1e-13);
        for &(x, y, tau) in &[(0.3, -1.2, 0.5), (2.0, 1.0, 2.0)] {
            let v = dunkl_heat_kernel(x, y, tau, &pr).unwrap();
            let wiener = (2.0 * PI * tau).sqrt().recip() * (-(x - y) * (x - y) / (2.0 * tau)).exp();
            assert_relative_eq!(v, wiener, max_relative = 1e-12);
        }
    }

    #[test]
    fn heat_kernel_positive_and_guarded() {
        // Positivity holds for ν ≥ 0. For −1/2 < ν < 0 the kernel E_ν is
        // genuinely negative at large negative arguments (its asymptotic
        // coefficient is ν c_ν), so the transition density loses positivity
        // there; the integral identities below still hold.
        for &nu in &[0.0, 0.5, 1.5] {
            let pr = p(nu);
            for &x in &[-3.0, -0.4, 0.0, 1.7] {
                for &y in &[-2.1, 0.9] {
                    for &tau in &[0.1, 1.0, 4.0] {
                        let v = dunkl_heat_kernel(x, y, tau, &pr).unwrap();
                        assert!(v > 0.0, "nu={nu} x={x} y={y} tau={tau}: {v}");
                    }
                }
            }
        }
        // the sign flip at negative deformation, for the record
        assert!(dunkl_heat_kernel(1.7, -2.1, 1.0, &p(-0.3)).unwrap() < 0.0);
        assert!(dunkl_heat_kernel(1.0, 1.0, 0.0, &p(0.5)).is_err());
        assert!(dunkl_heat_kernel(1.0, 1.0, -1.0, &p(0.5)).is_err());
    }

    #[test]
    fn heat_kernel_normalization() {
        // ∫ dx |x|^{2ν} d_τ(x, y) = 1
        let pr = p(0.7);
        let (y, tau): (f64, f64) = (0.4, 0.9);
        let x_max = y.abs() + (2.0 * tau * 38.0f64).sqrt();
        let grid = WeightedGrid::full_line(pr.nu, x_max, PanelLayout::default()).unwrap();
        let total = grid.integrate(|x| dunkl_heat_kernel(x, y, tau, &pr).unwrap());
        assert_relative_eq!(total, 1.0, max_relative = 1e-8);
    }

    #[test]
    fn heat_kernel_convolution() {
        // ∫ dz |z|^{2ν} d_{τ2}(x,z) d_{τ1}(z,y) = d_{τ1+τ2}(x,y)
        let pr = p(0.5);
        let (x, y, tau1, tau2): (f64, f64, f64, f64) = (0.8, -0.6, 0.3, 0.6);
        let z_max = x.abs().max(y.abs()) + (2.0 * tau1.max(tau2) * 40.0f64).sqrt();
        let grid = WeightedGrid::full_line(pr.nu, z_max, PanelLayout::default()).unwrap();
        let conv = grid.integrate(|z| {
            dunkl_heat_kernel(x, z, tau2, &pr).unwrap() * dunkl_heat_kernel(z, y, tau1, &pr).unwrap()
        });
        let direct = dunkl_heat_kernel(x, y, tau1 + tau2, &pr).unwrap();
        assert_relative_eq!(conv, direct, max_relative = 1e-8);
    }

    #[test]
    fn heat_kernel_smeared_initial_condition_weighted_convention() {
        // ⟨φ, d_τ(·,y)⟩_ν → φ(y) as τ ↓ 0, monotonically over two values;
        // the unweighted pairing converges to φ(y)/|y|^{2ν} instead.
        let pr = p(0.6);
        let y: f64 = 0.9;
        let phi = |x: f64| (-(x - 0.7) * (x - 0.7)).exp();
        let smeared = |tau: f64, weighted: bool| {
            let x_max = y.abs() + (2.0 * tau * 40.0f64).sqrt() + 1.0;
            let grid = WeightedGrid::full_line(pr.nu, x_max, PanelLayout::default()).unwrap();
            grid.integrate(|x| {
                let k = dunkl_heat_kernel(x, y, tau, &pr).unwrap();
                let meas = if weighted { 1.0 } else { x.abs().powf(-2.0 * pr.nu) };
                k * phi(x) * meas
            })
        };
        let e1 = (smeared(0.02, true) - phi(y)).abs();
        let e2 = (smeared(0.005, true) - phi(y)).abs();
        assert!(e2 < e1, "weighted pairing not improving: {e1:.3e} → {e2:.3e}");
        assert!(e2 < 0.02 * phi(y));
        // unweighted pairing tends to the reweighted point value
        let u = smeared(0.005, false);
        let expect = phi(y) / y.abs().powf(2.0 * pr.nu);
        assert_relative_eq!(u, expect, max_relative = 0.05);
        assert!((u - phi(y)).abs() > 0.1 * phi(y));
    }

    #[test]
    fn wick_rotation_consistency() {
        // d_τ(x,y) = K_ν(x,y; t = −iτ) at ħ = m = 1.
        let mt = MassTime::natural();
        for &nu in &[0.0, 0.5, 1.5] {
            let pr = p(nu);
            for &(x, y, tau) in &[(0.7, 0.3, 0.5), (-1.1, 0.6, 1.3), (0.0, 0.8, 0.7)] {
                let heat = dunkl_heat_kernel(x, y, tau, &pr).unwrap();
                let wick = free_propagator_complex_time(
                    x,
                    y,
                    num_complex::Complex64::new(0.0, -tau),
                    &pr,
                    &mt,
                )
                .unwrap();
                assert_relative_eq!(wick.re, heat, max_relative = 1e-10);
                assert!(wick.im.abs() <= 1e-12 * heat);
            }
        }
    }

    #[test]
    fn bessel_density_half_integer_closed_form() {
        // α = −1/2: reflected Gaussian on the half line.
        let idx = BesselIndex::new(-0.5, BesselBoundary::ReflectingNeumann).unwrap();
        for &(x, y, tau) in &[(0.5, 1.2, 0.4), (2.0, 0.1, 1.1)] {
            let b = bessel_density(x, y, tau, idx, DensityForm::Symmetric).unwrap();
            let g = |d: f64| (-d * d / (2.0 * tau)).exp();
            let closed = (g(x - y) + g(x + y)) / (2.0 * (2.0 * PI * tau).sqrt());
            assert_relative_eq!(b, closed, max_relative = 1e-12);
        }
    }

    #[test]
    fn bessel_density_asymmetric_ratio_and_convolution() {
        let idx = BesselIndex::new(0.5, BesselBoundary::ReflectingNeumann).unwrap();
        let (x, y, tau) = (0.9, 1.4, 0.4);
        let sym = bessel_density(x, y, tau, idx, DensityForm::Symmetric).unwrap();
        let asym = bessel_density(x, y, tau, idx, DensityForm::Asymmetric).unwrap();
        assert_relative_eq!(asym / sym, 2.0 * x.powf(2.0 * idx.alpha + 1.0), max_relative = 1e-14);
        // convolution with the speed measure
        let z_max = x.max(y) + (2.0 * 0.4 * 40.0f64).sqrt();
        let grid = WeightedGrid::half_line_speed(idx.alpha, z_max, PanelLayout::default()).unwrap();
        let conv = grid.integrate(|z| {
            bessel_density(x, z, tau, idx, DensityForm::Symmetric).unwrap()
                * bessel_density(z, y, tau, idx, DensityForm::Symmetric).unwrap()
        });
        let direct = bessel_density(x, y, 2.0 * tau, idx, DensityForm::Symmetric).unwrap();
        assert_relative_eq!(conv, direct, max_relative = 1e-8);
        // normalization of the asymmetric form
        let total = grid.integrate(|z| {
            bessel_density(z, y, tau, idx, DensityForm::Asymmetric).unwrap()
                / (2.0 * z.powf(2.0 * idx.alpha + 1.0))
        });
        assert_relative_eq!(total, 1.0, max_relative = 1e-9);
        assert!(bessel_density(1.0, 1.0, 0.4, idx, DensityForm::Symmetric).is_ok());
        assert!(BesselIndex::new(-1.0, BesselBoundary::ReflectingNeumann).is_err());
    }

    #[test]
    fn decomposition_identity() {
        let pr = p(0.7);
        let r = density_decomposition_check(0.8, -0.5, 0.6, &pr).unwrap();
        assert!(r <= 1e-10, "residual {r:.3e}");
        // mixed signs, origin, and the undeformed limit
        for &nu in &[-0.3, 0.5, 1.5] {
            let pr = p(nu);
            for &(x, y, tau) in &[
                (0.8, -0.5, 0.6),
                (-1.3, -0.9, 0.4),
                (0.0, 1.1, 0.8),
                (2.0, 2.0, 1.5),
            ] {
                let r = density_decomposition_check(x, y, tau, &pr).unwrap();
                assert!(r <= 1e-10, "nu={nu} x={x} y={y} tau={tau}: {r:.3e}");
            }
        }
        let pr0 = p(0.0);
        let d = dunkl_heat_kernel(0.8, -0.5, 0.6, &pr0).unwrap();
        let wiener = (2.0 * PI * 0.6).sqrt().recip() * (-(1.3f64 * 1.3) / 1.2).exp();
        assert_relative_eq!(d, wiener, max_relative = 1e-12);
    }

    #[test]
    fn step_sampler_moments() {
        // E[Z²] after one step from y is y² + (2α+2) dt, exactly.
        let idx = BesselIndex::new(0.5, BesselBoundary::ReflectingNeumann).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let (y, dt) = (1.0, 0.5);
        let n = 200_000;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..n {
            let z = sample_bessel_step(y, dt, idx, &mut rng).unwrap();
            sum += z * z;
            sumsq += z.powi(4);
        }
        let mean = sum / n as f64;
        let se = ((sumsq / n as f64 - mean * mean) / n as f64).sqrt();
        let expect = y * y + idx.dimension() * dt;
        assert!(
            (mean - expect).abs() < 4.0 * se,
            "mean {mean} expect {expect} se {se}"
        );
        // from the origin: E[Z²] = (2α+2) dt
        let mut sum0 = 0.0;
        for _ in 0..n {
            let z = sample_bessel_step(0.0, dt, idx, &mut rng).unwrap();
            sum0 += z * z;
        }
        let mean0 = sum0 / n as f64;
        assert!((mean0 - idx.dimension() * dt).abs() < 0.02 * idx.dimension() * dt);
    }

    #[test]
    fn step_sampler_concentrates_as_dt_shrinks() {
        let idx = BesselIndex::new(0.8, BesselBoundary::ReflectingNeumann).unwrap();
        let mut spread_prev = f64::INFINITY;
        for &dt in &[0.5, 0.05, 0.005] {
            let mut rng = ChaCha12Rng::seed_from_u64(3);
            let y = 1.3;
            let n = 20_000;
            let var = (0..n)
                .map(|_| {
                    let z = sample_bessel_step(y, dt, idx, &mut rng).unwrap();
                    (z - y) * (z - y)
                })
                .sum::<f64>()
                / n as f64;
            assert!(var < spread_prev / 5.0, "dt={dt}: var {var}");
            spread_prev = var;
        }
    }

    #[test]
    fn step_sampler_law_chi_square_gof() {
        // Histogram of one-step samples against the asymmetric density.
        let idx = BesselIndex::new(0.5, BesselBoundary::ReflectingNeumann).unwrap();
        let (y, dt) = (1.0, 0.5);
        let n = 1_000_000u64;
        let z_max = 5.0;
        let n_bins = 60;
        let mut counts = vec![0u64; n_bins + 1];
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        for _ in 0..n {
            let z = sample_bessel_step(y, dt, idx, &mut rng).unwrap();
            let b = ((z / z_max) * n_bins as f64) as usize;
            counts[b.min(n_bins)] += 1;
        }
        // expected bin masses from the density b̃(z|y) dz by panel quadrature
        let rule = crate::transform::GaussRule::legendre(24).unwrap();
        let mut chi2 = 0.0;
        let mut dof = 0usize;
        let mut tail_expect = n as f64;
        for b in 0..n_bins {
            let (lo, hi) = (z_max * b as f64 / n_bins as f64, z_max * (b + 1) as f64 / n_bins as f64);
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            let mass: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&u, &w)| {
                    w * half
                        * bessel_density(mid + half * u, y, dt, idx, DensityForm::Asymmetric)
                            .unwrap()
                })
                .sum();
            let expect = mass * n as f64;
            tail_expect -= expect;
            if expect > 10.0 {
                let diff = counts[b] as f64 - expect;
                chi2 += diff * diff / expect;
                dof += 1;
            }
        }
        if tail_expect > 10.0 {
            let diff = counts[n_bins] as f64 - tail_expect;
            chi2 += diff * diff / tail_expect;
            dof += 1;
        }
        let dist = statrs::distribution::ChiSquared::new((dof - 1) as f64).unwrap();
        let p_value = 1.0 - statrs::distribution::ContinuousCDF::cdf(&dist, chi2);
        assert!(
            p_value > 0.001,
            "chi2 {chi2:.1} dof {dof} p {p_value:.5}"
        );
    }

    #[test]
    fn fk_mc_free_case_matches_heat_kernel_pairing() {
        let pr = p(0.5);
        let (y, tau) = (0.4, 0.8);
        let f = |x: f64| (-x * x / 2.0).exp() * (1.0 + 0.4 * x);
        let run = McRun::new(40_000, 64, 11).with_workers(1);
        let est = feynman_kac_mc(&|_| 0.0, y, tau, &pr, &f, &run).unwrap();
        let quad = weighted_pairing(
            &f,
            &|x| dunkl_heat_kernel(x, y, tau, &pr),
            &pr,
            (2.0 * tau * 40.0f64).sqrt() + y.abs() + 2.0,
        )
        .unwrap();
        assert!(
            (est.mean - quad).abs() <= 3.0 * est.std_error,
            "mc {} ± {} vs quad {}",
            est.mean,
            est.std_error,
            quad
        );
    }

    #[test]
    fn fk_mc_harmonic_matches_closed_kernel() {
        let pr = p(0.5);
        let (y, tau, omega) = (0.4, 0.8, 1.0);
        let f = |x: f64| (-x * x / 2.0).exp();
        let run = McRun::new(40_000, 64, 5).with_workers(1);
        let est = feynman_kac_mc(&move |x| 0.5 * omega * omega * x * x, y, tau, &pr, &f, &run)
            .unwrap();
        let quad = weighted_pairing(
            &f,
            &|x| dunkl_ho_heat_kernel(x, y, tau, omega, &pr),
            &pr,
            8.0,
        )
        .unwrap();
        assert!(
            (est.mean - quad).abs() <= 3.0 * est.std_error,
            "mc {} ± {} vs quad {}",
            est.mean,
            est.std_error,
            quad
        );
    }

    #[test]
    fn fk_mc_nu0_reduces_to_brownian_mehler() {
        let pr = p(0.0);
        let (y, tau, omega) = (0.3, 0.6, 1.0);
        let f = |x: f64| (-(x - 0.2) * (x - 0.2)).exp();
        let run = McRun::new(40_000, 64, 19).with_workers(1);
        let est = feynman_kac_mc(&move |x| 0.5 * omega * omega * x * x, y, tau, &pr, &f, &run)
            .unwrap();
        // Mehler heat kernel
        let mehler = |x: f64| -> Result<f64> {
            let sh = (omega * tau).sinh();
            let ch = (omega * tau).cosh();
            Ok((omega / (2.0 * PI * sh)).sqrt()
                * (-(omega / 2.0) * ((x * x + y * y) * ch - 2.0 * x * y) / sh).exp())
        };
        let quad = weighted_pairing(&f, &mehler, &pr, 8.0).unwrap();
        assert!(
            (est.mean - quad).abs() <= 3.0 * est.std_error,
            "mc {} ± {} vs quad {}",
            est.mean,
            est.std_error,
            quad
        );
    }

    #[test]
    fn fk_mc_guards() {
        let pr = p(0.5);
        let run = McRun::new(50, 16, 1);
        assert!(feynman_kac_mc(&|_| 0.0, 0.3, 0.5, &pr, &|x| x, &run).is_err());
        let run = McRun::new(1000, 16, 1);
        assert!(feynman_kac_mc(&|x| x, 0.3, 0.5, &pr, &|x| x, &run).is_err()); // asymmetric V
    }

    #[test]
    fn fk_mc_reproducible_across_worker_counts() {
        let pr = p(0.7);
        let f = |x: f64| (-x * x).exp();
        let base = McRun::new(2_000, 16, 33);
        let a = feynman_kac_mc(&|_| 0.0, 0.5, 0.4, &pr, &f, &base.with_workers(1)).unwrap();
        let b = feynman_kac_mc(&|_| 0.0, 0.5, 0.4, &pr, &f, &base.with_workers(4)).unwrap();
        let c = feynman_kac_mc(&|_| 0.0, 0.5, 0.4, &pr, &f, &base.with_workers(3)).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.mean.to_bits(), c.mean.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    }

    #[test]
    fn radon_nikodym_equal_indices_trivial() {
        let run = McRun::new(2_000, 24, 9).with_workers(2);
        let phi = |z: f64| (-z * z / 2.0).exp();
        let rep = radon_nikodym_check(0.5, 0.5, 1.0, 0.7, &|_| 0.0, &phi, &run).unwrap();
        assert_eq!(rep.direct.mean.to_bits(), rep.reweighted.mean.to_bits());
        assert_eq!(rep.clamp_rate, 0.0);
    }

    #[test]
    fn radon_nikodym_dunkl_sectors() {
        // (α, β) = (ν−1/2, ν+1/2) at ν = 1, V = 0.
        let run = McRun::new(30_000, 48, 21).with_workers(1);
        let phi = |z: f64| (-z * z / 2.0).exp();
        let rep = radon_nikodym_check(0.5, 1.5, 1.0, 0.8, &|_| 0.0, &phi, &run).unwrap();
        assert!(
            rep.discrepancy_sigmas <= 3.0,
            "sectors differ by {:.2}σ ({} vs {})",
            rep.discrepancy_sigmas,
            rep.direct.mean,
            rep.reweighted.mean
        );
        assert!(rep.clamp_rate < 0.01);
    }

    #[test]
    fn radon_nikodym_vs_radial_ho_closed_form() {
        // reweighted MC against the closed-form radial oscillator kernel
        let (alpha, beta) = (0.5, 1.5);
        let (y, tau, omega) = (1.0, 0.6, 1.0);
        let run = McRun::new(30_000, 48, 27).with_workers(1);
        let phi = |z: f64| (-z * z / 2.0).exp();
        let rep = radon_nikodym_check(
            alpha,
            beta,
            y,
            tau,
            &move |z| 0.5 * omega * omega * z * z,
            &phi,
            &run,
        )
        .unwrap();
        // direct side from the β-kernel by speed-measure quadrature
        let grid = WeightedGrid::half_line_speed(beta, 7.0, PanelLayout::default()).unwrap();
        let quad = grid.integrate(|x| phi(x) * bessel_ho_kernel(x, y, tau, omega, beta).unwrap());
        assert!(
            (rep.direct.mean - quad).abs() <= 3.0 * rep.direct.std_error,
            "direct {} ± {} vs quad {}",
            rep.direct.mean,
            rep.direct.std_error,
            quad
        );
        assert!(
            (rep.reweighted.mean - quad).abs() <= 3.0 * rep.reweighted.std_error,
            "reweighted {} ± {} vs quad {}",
            rep.reweighted.mean,
            rep.reweighted.std_error,
            quad
        );
    }

    #[test]
    fn sampled_path_shape() {
        let idx = BesselIndex::new(0.5, BesselBoundary::ReflectingNeumann).unwrap();
        let path = sample_bessel_path(1.0, 0.8, 32, idx, 5, 1).unwrap();
        assert_eq!(path.positions.len(), 33);
        assert_eq!(path.positions[0], 1.0);
        assert!(path.positions.iter().all(|&z| z >= 0.0));
        assert!(path.times.windows(2).all(|w| w[1] > w[0]));
        // deterministic for fixed (seed, stream)
        let again = sample_bessel_path(1.0, 0.8, 32, idx, 5, 1).unwrap();
        assert_eq!(path.positions, again.positions);
    }
}
