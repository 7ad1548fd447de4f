//! Subcommand implementations.

use std::path::Path;

use num_complex::Complex64;

use dunkl::dynamics::{
    evolve_gaussian, free_propagator, free_propagator_spectral, ho_propagator, packet_observables,
    packet_observables_by_quadrature, MassTime,
};
use dunkl::specfun::{
    dunkl_derivative, dunkl_kernel, dunkl_kernel_bessel_form, dunkl_kernel_imag,
    dunkl_kernel_real, dunkl_kernel_series_ext, evaluation_regime,
};
use dunkl::stochastic::{
    density_decomposition_check, dunkl_heat_kernel, dunkl_ho_heat_kernel, feynman_kac_mc,
    radon_nikodym_check, weighted_pairing, McRun,
};
use dunkl::transform::{
    dunkl_transform, inverse_dunkl_transform, GridDomain, PanelLayout, Parity, SampledFunction,
    TransformOptions, WeightedGrid,
};
use dunkl::trotter::{ho_convergence_table, Scheme};
use dunkl::{ComplexScalar, DunklParam};

use crate::config::{FileConfig, Resolver};
use crate::output::{fmt_f64, parse_csv, write_csv, write_json, Meta};
use crate::{
    CheckArgs, CliError, EvolveArgs, HeatArgs, KernelArgs, McArgs, PropagateArgs, TransformArgs,
    TrotterArgs,
};

fn param(nu: f64) -> Result<DunklParam, CliError> {
    Ok(DunklParam::new(nu)?)
}

// --- kernel -------------------------------------------------------------------

pub fn kernel(args: KernelArgs, file: FileConfig, out: Option<&Path>) -> Result<(), CliError> {
    file.validate_keys(&["nu", "axis", "x_min", "x_max", "points"])?;
    let mut r = Resolver::new(file);
    let nu = r.f64("nu", args.nu, 0.5)?;
    let axis = r.string("axis", args.axis, "real");
    let x_min = r.f64("x_min", args.x_min, -10.0)?;
    let x_max = r.f64("x_max", args.x_max, 10.0)?;
    let points = r.usize("points", args.points, 101)?;
    let p = param(nu)?;
    if points < 2 || x_max <= x_min {
        return Err(CliError::Config("need points >= 2 and x_max > x_min".into()));
    }
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let x = x_min + (x_max - x_min) * i as f64 / (points - 1) as f64;
        let z = match axis.as_str() {
            "real" => ComplexScalar::new(x, 0.0),
            "imag" => ComplexScalar::new(0.0, x),
            other => return Err(CliError::Config(format!("axis must be real|imag, got {other}"))),
        };
        let v = dunkl_kernel(z, &p)?;
        rows.push(vec![
            fmt_f64(x),
            fmt_f64(v.re),
            fmt_f64(v.im),
            format!("{:?}", evaluation_regime(z)),
        ]);
    }
    let meta = Meta::new("kernel", r.resolved);
    write_csv(out, &meta, &["x", "re", "im", "regime"], &rows)
}

// --- transform ----------------------------------------------------------------

pub fn transform(args: TransformArgs, file: FileConfig, out: Option<&Path>) -> Result<(), CliError> {
    file.validate_keys(&[
        "nu", "function", "alpha", "input", "inverse", "k_max", "k_points",
    ])?;
    let mut r = Resolver::new(file);
    let nu = r.f64("nu", args.nu, 0.5)?;
    let alpha = r.f64("alpha", args.alpha, 1.0)?;
    let k_max = r.f64("k_max", args.k_max, 5.0)?;
    let k_points = r.usize("k_points", args.k_points, 51)?;
    let function = r.string("function", args.function, "gaussian");
    r.note("inverse", args.inverse);
    let p = param(nu)?;
    if !(alpha > 0.0) {
        return Err(CliError::Config("alpha must be positive".into()));
    }
    let k_nodes: Vec<f64> = (0..k_points)
        .map(|i| -k_max + 2.0 * k_max * i as f64 / (k_points - 1).max(1) as f64)
        .collect();

    let values = if let Some(input) = &args.input {
        r.note("input", input.display());
        let text = std::fs::read_to_string(input).map_err(CliError::Io)?;
        let (_, samples) = parse_csv(&text)?;
        if samples.iter().any(|row| row.len() < 3) {
            return Err(CliError::Config("input CSV needs columns node, re, im".into()));
        }
        let sf = sampled_from_rows(&samples, nu)?;
        let direction = if args.inverse { 1.0 } else { -1.0 };
        sampled_transform(&sf, &p, &k_nodes, direction)
    } else {
        let opts = TransformOptions::for_gaussian_decay(alpha.min(1.0 / alpha));
        let f_even = move |x: f64| Complex64::new((-alpha * x * x / 2.0).exp(), 0.0);
        let f_odd = move |x: f64| Complex64::new(x * (-alpha * x * x / 2.0).exp(), 0.0);
        let run = |g: &dyn Fn(f64) -> Complex64| -> Result<Vec<Complex64>, CliError> {
            Ok(if args.inverse {
                inverse_dunkl_transform(g, &p, &k_nodes, &opts)?
            } else {
                dunkl_transform(g, &p, &k_nodes, &opts)?
            })
        };
        match function.as_str() {
            "gaussian" => run(&f_even)?,
            "x-gaussian" => run(&f_odd)?,
            other => {
                return Err(CliError::Config(format!(
                    "function must be gaussian|x-gaussian, got {other}"
                )))
            }
        }
    };
    let rows: Vec<Vec<String>> = k_nodes
        .iter()
        .zip(&values)
        .map(|(&k, v)| vec![fmt_f64(k), fmt_f64(v.re), fmt_f64(v.im)])
        .collect();
    let meta = Meta::new("transform", r.resolved);
    write_csv(out, &meta, &["node", "re", "im"], &rows)
}

/// Sampled function on arbitrary symmetric nodes: trapezoid weights times
/// the measure |x|^{2ν} (documented lower-accuracy path for external data).
fn sampled_from_rows(rows: &[Vec<f64>], nu: f64) -> Result<SampledFunction, CliError> {
    let mut nodes: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    if nodes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Config("input nodes must be strictly increasing".into()));
    }
    let values: Vec<Complex64> = rows.iter().map(|r| Complex64::new(r[1], r[2])).collect();
    let n = nodes.len();
    if n < 3 {
        return Err(CliError::Config("need at least 3 samples".into()));
    }
    let mut weights = vec![0.0f64; n];
    for i in 0..n {
        let left = if i == 0 { nodes[0] } else { nodes[i - 1] };
        let right = if i == n - 1 { nodes[n - 1] } else { nodes[i + 1] };
        weights[i] = 0.5 * (right - left) * nodes[i].abs().powf(2.0 * nu);
    }
    nodes.shrink_to_fit();
    Ok(SampledFunction {
        grid: WeightedGrid {
            nodes,
            weights,
            domain: GridDomain::FullLine,
            nu_or_alpha: nu,
        },
        values,
        parity_hint: Parity::None,
    })
}

fn sampled_transform(
    sf: &SampledFunction,
    p: &DunklParam,
    out_nodes: &[f64],
    sign: f64,
) -> Vec<Complex64> {
    out_nodes
        .iter()
        .map(|&k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for ((&x, &w), &v) in sf.grid.nodes.iter().zip(&sf.grid.weights).zip(&sf.values) {
                acc += v * dunkl_kernel_imag(sign * k * x, p) * w;
            }
            acc / p.c_nu
        })
        .collect()
}

// --- evolve -------------------------------------------------------------------

pub fn evolve(args: EvolveArgs, file: FileConfig, out: Option<&Path>) -> Result<(), CliError> {
    file.validate_keys(&["nu", "beta", "t", "x_max", "points"])?;
    let mut r = Resolver::new(file);
    let nu = r.f64("nu", args.nu, 0.5)?;
    let beta = r.f64("beta", args.beta, 1.0)?;
    let t = r.f64("t", args.t, 1.0)?;
    let x_max = r.f64("x_max", args.x_max, 8.0)?;
    let points = r.usize("points", args.points, 201)?;
    let p = param(nu)?;
    let mt = MassTime::natural();
    let ps = evolve_gaussian(beta, t, &p, &mt)?;
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let x = -x_max + 2.0 * x_max * i as f64 / (points - 1).max(1) as f64;
        rows.push(vec![fmt_f64(x), fmt_f64(t), fmt_f64(ps.density(x))]);
    }
    let meta = Meta::new("evolve", r.resolved);
    write_csv(out, &meta, &["x", "t", "density"], &rows)
}

// --- propagate ----------------------------------------------------------------

pub fn propagate(args: PropagateArgs, file: FileConfig, out: Option<&Path>) -> Result<(), CliError> {
    file.validate_keys(&["nu", "t", "y", "omega", "eps_m", "x_max", "points"])?;
    let mut r = Resolver::new(file);
    let nu = r.f64("nu", args.nu, 0.5)?;
    let t = r.f64("t", args.t, 1.0)?;
    let y = r.f64("y", args.y, 0.0)?;
    let eps_m = r.f64("eps_m", args.eps_m, 0.0)?;
    let x_max = r.f64("x_max", args.x_max, 5.0)?;
    let points = r.usize("points", args.points, 101)?;
    let p = param(nu)?;
    let mt = MassTime::natural().with_regularizer(eps_m);
    let omega = args.omega;
    if let Some(w) = omega {
        r.note("omega", w);
    }
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let x = -x_max + 2.0 * x_max * i as f64 / (points - 1).max(1) as f64;
        let v = match omega {
            Some(w) => ho_propagator(x, y, t, w, &p, &mt)?,
            None => free_propagator(x, y, t, &p, &mt)?,
        };
        rows.push(vec![
            fmt_f64(x),
            fmt_f64(y),
            fmt_f64(t),
            fmt_f64(v.re),
            fmt_f64(v.im),
        ]);
    }
    let meta = Meta::new("propagate", r.resolved);
    write_csv(out, &meta, &["x", "y", "t", "re", "im"], &rows)
}

// --- trotter ------------------------------------------------------------------

pub fn trotter(args: TrotterArgs, file: FileConfig, out: Option<&Path>) -> Result<(), CliError> {
    file.validate_keys(&[
        "nu", "omega", "t", "schedule", "scheme", "eps_m", "grid_l", "panel_width",
        "nodes_per_panel", "window",
    ])?;
    let mut r = Resolver::new(file);
    let nu = r.f64("nu", args.nu, 0.5)?;
    let omega = r.f64("omega", args.omega, 1.0)?;
    let t = r.f64("t", args.t, 1.0)?;
    let schedule_s = r.string("schedule", args.schedule, "8,16,32,64");
    let scheme_s = r.string("scheme", args.scheme, "exact");
    let eps_m = r.f64("eps_m", args.eps_m, 0.3)?;
    let grid_l = r.f64("grid_l", args.grid_l, 5.5)?;
    let panel_width = r.f64("panel_width", args.panel_width, 0.69)?;
    let nodes_per_panel = r.usize("nodes_per_panel", args.nodes_per_panel, 24)?;
    let window = r.f64("window", args.window, 1.2)?;

    let schedule: Vec<u32> = schedule_s
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::Config(format!("bad slice count `{s}` in schedule")))
        })
        .collect::<Result<_, _>>()?;
    let scheme = match scheme_s.as_str() {
        "exact" => Scheme::ExactDunkl,
        "naive" => Scheme::NaiveAsymptotic,
        other => return Err(CliError::Config(format!("scheme must be exact|naive, got {other}"))),
    };
    let p = param(nu)?;
    let mt = MassTime::natural().with_regularizer(eps_m);
    let grid = WeightedGrid::full_line(
        p.nu,
        grid_l,
        PanelLayout {
            first_panel: panel_width,
            panel_width,
            nodes_per_panel,
            max_oscillation: 0.0,
        },
    )?;
    let rows_data = ho_convergence_table(omega, t, &schedule, window, &grid, &p, &mt, scheme)?;
    let rows: Vec<Vec<String>> = rows_data
        .iter()
        .map(|row| {
            vec![
                row.n_slices.to_string(),
                row.grid_len.to_string(),
                fmt_f64(row.max_rel_error),
            ]
        })
        .collect();
    let meta = Meta::new("trotter", r.resolved);
    write_csv(out, &meta, &["n_slices", "grid_size", "max_rel_error"], &rows)
}

// --- heat ---------------------------------------------------------------------

pub fn heat(args: HeatArgs, file: FileConfig, out: Option<&Path>) -> Result<(), CliError> {
    file.validate_keys(&["nu", "tau", "y", "omega", "x_max", "points", "decomposition"])?;
    let mut r = Resolver::new(file);
    let nu = r.f64("nu", args.nu, 0.5)?;
    let tau = r.f64("tau", args.tau, 1.0)?;
    let y = r.f64("y", args.y, 0.0)?;
    let x_max = r.f64("x_max", args.x_max, 5.0)?;
    let points = r.usize("points", args.points, 101)?;
    r.note("decomposition", args.decomposition);
    let p = param(nu)?;
    let omega = args.omega;
    if let Some(w) = omega {
        r.note("omega", w);
    }
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let x = -x_max + 2.0 * x_max * i as f64 / (points - 1).max(1) as f64;
        let v = match omega {
            Some(w) => dunkl_ho_heat_kernel(x, y, tau, w, &p)?,
            None => dunkl_heat_kernel(x, y, tau, &p)?,
        };
        let mut row = vec![fmt_f64(x), fmt_f64(y), fmt_f64(tau), fmt_f64(v)];
        if args.decomposition {
            row.push(fmt_f64(density_decomposition_check(x, y, tau, &p)?));
        }
        rows.push(row);
    }
    let header: &[&str] = if args.decomposition {
        &["x", "y", "tau", "value", "decomposition_residual"]
    } else {
        &["x", "y", "tau", "value"]
    };
    let meta = Meta::new("heat", r.resolved);
    write_csv(out, &meta, header, &rows)
}

// --- mc -----------------------------------------------------------------------

pub fn mc(args: McArgs, file: FileConfig, out: Option<&Path>) -> Result<(), CliError> {
    file.validate_keys(&[
        "mode", "potential", "omega", "nu", "tau", "y", "paths", "steps_per_unit_tau", "seed",
        "workers", "test_beta", "alpha", "beta_index",
    ])?;
    let mut r = Resolver::new(file);
    let mode = r.string("mode", args.mode, "fk");
    let potential = r.string("potential", args.potential, "ho");
    let omega = r.f64("omega", args.omega, 1.0)?;
    let nu = r.f64("nu", args.nu, 0.5)?;
    let tau = r.f64("tau", args.tau, 0.8)?;
    let y = r.f64("y", args.y, 0.4)?;
    let paths = r.u64("paths", args.paths, 100_000)?;
    let steps_per = r.u64("steps_per_unit_tau", args.steps_per_unit_tau, 64)?;
    let seed = r.u64("seed", args.seed, 42)?;
    let default_workers = std::thread::available_parallelism().map(|n| n.get() as u64).unwrap_or(1);
    let workers = r.u64("workers", args.workers, default_workers)? as usize;
    let test_beta = r.f64("test_beta", args.test_beta, 1.0)?;
    let n_steps = ((steps_per as f64) * tau).ceil().max(1.0) as u32;
    r.note("n_steps", n_steps);

    let run = McRun::new(paths, n_steps, seed).with_workers(workers);
    let phi = move |x: f64| (-test_beta * x * x / 2.0).exp();

    let data = match mode.as_str() {
        "fk" => {
            let p = param(nu)?;
            let v: Box<dyn Fn(f64) -> f64 + Sync> = match potential.as_str() {
                "zero" => Box::new(|_| 0.0),
                "ho" => Box::new(move |x| 0.5 * omega * omega * x * x),
                other => {
                    return Err(CliError::Config(format!(
                        "potential must be zero|ho, got {other}"
                    )))
                }
            };
            let est = feynman_kac_mc(&*v, y, tau, &p, &phi, &run)?;
            let reference = match potential.as_str() {
                "ho" => Some(weighted_pairing(
                    &phi,
                    &|x| dunkl_ho_heat_kernel(x, y, tau, omega, &p),
                    &p,
                    (2.0 * tau * 40.0f64).sqrt() + y.abs() + 3.0,
                )?),
                "zero" => Some(weighted_pairing(
                    &phi,
                    &|x| dunkl_heat_kernel(x, y, tau, &p),
                    &p,
                    (2.0 * tau * 40.0f64).sqrt() + y.abs() + 3.0,
                )?),
                _ => None,
            };
            serde_json::json!({
                "estimate": est.mean,
                "std_error": est.std_error,
                "n_paths": est.n_samples,
                "n_steps": n_steps,
                "seed": est.seed,
                "clamp_rate": 0.0,
                "workers": workers,
                "closed_form_pairing": reference,
            })
        }
        "index-change" => {
            let alpha = r.f64("alpha", args.alpha, nu - 0.5)?;
            let beta_index = r.f64("beta_index", args.beta_index, nu + 0.5)?;
            let v: Box<dyn Fn(f64) -> f64 + Sync> = match potential.as_str() {
                "zero" => Box::new(|_| 0.0),
                "ho" => Box::new(move |x| 0.5 * omega * omega * x * x),
                other => {
                    return Err(CliError::Config(format!(
                        "potential must be zero|ho, got {other}"
                    )))
                }
            };
            let rep = radon_nikodym_check(alpha, beta_index, y.abs().max(1e-6), tau, &*v, &phi, &run)?;
            serde_json::json!({
                "estimate": rep.reweighted.mean,
                "std_error": rep.reweighted.std_error,
                "direct_estimate": rep.direct.mean,
                "direct_std_error": rep.direct.std_error,
                "discrepancy_sigmas": rep.discrepancy_sigmas,
                "n_paths": rep.direct.n_samples,
                "n_steps": n_steps,
                "seed": rep.direct.seed,
                "clamp_rate": rep.clamp_rate,
                "workers": workers,
            })
        }
        other => return Err(CliError::Config(format!("mode must be fk|index-change, got {other}"))),
    };
    let meta = Meta::new("mc", r.resolved);
    write_json(out, &meta, data)
}

// --- check --------------------------------------------------------------------

struct Check {
    id: &'static str,
    residual: f64,
    tolerance: f64,
}

impl Check {
    fn pass(&self) -> bool {
        self.residual <= self.tolerance
    }
}

pub fn check(args: CheckArgs, file: FileConfig, out: Option<&Path>) -> Result<(), CliError> {
    file.validate_keys(&["suite"])?;
    let mut r = Resolver::new(file);
    let suite = r.string("suite", args.suite, "all");
    let mut checks: Vec<Check> = Vec::new();
    match suite.as_str() {
        "kernels" => checks_kernels(&mut checks)?,
        "transforms" => checks_transforms(&mut checks)?,
        "dynamics" => checks_dynamics(&mut checks)?,
        "densities" => checks_densities(&mut checks)?,
        "all" => {
            checks_kernels(&mut checks)?;
            checks_transforms(&mut checks)?;
            checks_dynamics(&mut checks)?;
            checks_densities(&mut checks)?;
        }
        other => {
            return Err(CliError::Config(format!(
                "suite must be kernels|transforms|dynamics|densities|all, got {other}"
            )))
        }
    }
    let rows: Vec<Vec<String>> = checks
        .iter()
        .map(|c| {
            vec![
                c.id.to_string(),
                if c.pass() { "PASS".into() } else { "FAIL".into() },
                fmt_f64(c.residual),
                fmt_f64(c.tolerance),
            ]
        })
        .collect();
    for row in &rows {
        println!("{:44} {:4}  residual {:<12} tol {}", row[0], row[1], row[2], row[3]);
    }
    if out.is_some() {
        let meta = Meta::new("check", r.resolved);
        write_csv(out, &meta, &["check", "status", "residual", "tolerance"], &rows)?;
    }
    let failed = checks.iter().filter(|c| !c.pass()).count();
    if failed > 0 {
        return Err(CliError::ChecksFailed(failed));
    }
    Ok(())
}

fn checks_kernels(checks: &mut Vec<Check>) -> Result<(), CliError> {
    // c_ν route consistency
    let mut worst = 0.0f64;
    for &nu in &[-0.3, 0.0, 0.5, 1.5, 2.0] {
        let p = param(nu)?;
        worst = worst.max((p.c_nu - p.c_nu_duplication()).abs() / p.c_nu);
    }
    checks.push(Check { id: "normalization-constant-two-routes", residual: worst, tolerance: 1e-12 });

    // series vs Bessel representation
    let mut worst = 0.0f64;
    for &nu in &[-0.3, 0.0, 0.5, 1.5] {
        let p = param(nu)?;
        let mut x = 0.5;
        while x <= 20.0 {
            for z in [
                ComplexScalar::new(x, 0.0),
                ComplexScalar::new(-x, 0.0),
                ComplexScalar::new(0.0, x),
            ] {
                let s = dunkl_kernel_series_ext(z, &p);
                let b = dunkl_kernel_bessel_form(z, &p)?;
                worst = worst.max((s - b).norm() / s.norm());
            }
            x += 0.5;
        }
    }
    checks.push(Check { id: "kernel-series-vs-bessel-representation", residual: worst, tolerance: 1e-9 });

    // undeformed limit
    let p0 = param(0.0)?;
    let mut worst = 0.0f64;
    for z in [
        ComplexScalar::new(-5.0, 0.0),
        ComplexScalar::new(1.0, 0.0),
        ComplexScalar::new(0.0, 3.0),
    ] {
        let e = z.exp();
        worst = worst.max((dunkl_kernel(z, &p0)? - e).norm() / e.norm());
    }
    checks.push(Check { id: "kernel-undeformed-exponential", residual: worst, tolerance: 1e-12 });

    // eigenfunction property of the Dunkl derivative
    let p = param(0.5)?;
    let a = 1.5;
    let mut worst = 0.0f64;
    for &x in &[0.4, 0.7, -1.3] {
        let d = dunkl_derivative(|t| dunkl_kernel_real(a * t, &p).unwrap(), x, &p)?;
        let expect = a * dunkl_kernel_real(a * x, &p)?;
        worst = worst.max((d - expect).abs() / expect.abs());
    }
    checks.push(Check { id: "kernel-eigenfunction-of-dunkl-derivative", residual: worst, tolerance: 1e-7 });
    Ok(())
}

fn checks_transforms(checks: &mut Vec<Check>) -> Result<(), CliError> {
    let ks = [0.0, 0.5, 1.3, 2.4];
    let mut worst = 0.0f64;
    for &nu in &[-0.3, 0.0, 0.5, 1.5] {
        let p = param(nu)?;
        for &a in &[0.5f64, 1.0, 2.0] {
            let opts = TransformOptions::for_gaussian_decay(a.min(1.0 / a));
            let fwd = dunkl_transform(
                move |x| Complex64::new((-a * x * x / 2.0).exp(), 0.0),
                &p,
                &ks,
                &opts,
            )?;
            for (&k, v) in ks.iter().zip(&fwd) {
                let expect = (-k * k / (2.0 * a)).exp() / a.powf(nu + 0.5);
                worst = worst.max((v.re - expect).abs().max(v.im.abs()));
            }
        }
    }
    checks.push(Check { id: "gaussian-transform-pair-forward", residual: worst, tolerance: 1e-8 });

    let p = param(0.5)?;
    let beta = 2.0;
    let xs = [0.0, 0.4, 1.0, 2.0];
    let opts = TransformOptions::for_gaussian_decay(1.0 / beta);
    let inv = inverse_dunkl_transform(
        move |k| Complex64::new((-k * k / (2.0 * beta)).exp(), 0.0),
        &p,
        &xs,
        &opts,
    )?;
    let mut worst = 0.0f64;
    for (&x, v) in xs.iter().zip(&inv) {
        let expect = beta.powf(p.nu + 0.5) * (-beta * x * x / 2.0).exp();
        worst = worst.max((v.re - expect).abs());
    }
    checks.push(Check { id: "gaussian-transform-pair-inverse", residual: worst, tolerance: 1e-8 });
    Ok(())
}

fn checks_dynamics(checks: &mut Vec<Check>) -> Result<(), CliError> {
    // undeformed free propagator closed form
    let p0 = param(0.0)?;
    let mt0 = MassTime::natural();
    let v = free_propagator(1.0, 0.0, 1.0, &p0, &mt0)?;
    let expect = Complex64::new(0.0, 0.5).exp()
        * Complex64::new(0.0, -std::f64::consts::FRAC_PI_4).exp()
        / (2.0 * std::f64::consts::PI).sqrt();
    checks.push(Check {
        id: "free-propagator-undeformed-closed-form",
        residual: (v - expect).norm() / expect.norm(),
        tolerance: 1e-12,
    });

    // spectral route with the regularizer
    let mt = MassTime::natural().with_regularizer(0.05);
    let p = param(0.5)?;
    let spectral = free_propagator_spectral(0.7, 0.2, 0.5, &p, &mt)?;
    let closed = free_propagator(0.7, 0.2, 0.5, &p, &mt)?;
    checks.push(Check {
        id: "free-propagator-spectral-route",
        residual: (spectral - closed).norm() / closed.norm(),
        tolerance: 1e-6,
    });

    // packet moments by quadrature
    let ps = evolve_gaussian(2.0, 3.0, &p, &mt0)?;
    let obs = packet_observables(&ps, &mt0);
    let quad = packet_observables_by_quadrature(&ps, &mt0)?;
    checks.push(Check {
        id: "packet-width-moments",
        residual: ((quad.dx2 - obs.dx2) / obs.dx2).abs(),
        tolerance: 1e-6,
    });

    // Euclidean continuation of the oscillator
    let tau = 0.7;
    let w = dunkl::dynamics::ho_propagator_complex_time(
        0.5,
        -0.3,
        Complex64::new(0.0, -tau),
        1.0,
        &p,
        &mt0,
    )?;
    let euclid = dunkl_ho_heat_kernel(0.5, -0.3, tau, 1.0, &p)?;
    checks.push(Check {
        id: "oscillator-euclidean-continuation",
        residual: (w.re - euclid).abs() / euclid.abs() + w.im.abs() / euclid.abs(),
        tolerance: 1e-10,
    });
    Ok(())
}

fn checks_densities(checks: &mut Vec<Check>) -> Result<(), CliError> {
    // heat-kernel normalization
    let mut worst = 0.0f64;
    for &nu in &[-0.3, 0.0, 0.7, 1.5] {
        let p = param(nu)?;
        let (y, tau) = (0.4, 0.9);
        let x_max = y + (2.0 * tau * 38.0f64).sqrt();
        let grid = WeightedGrid::full_line(p.nu, x_max, PanelLayout::default())?;
        let total = grid.integrate(|x| dunkl_heat_kernel(x, y, tau, &p).unwrap());
        worst = worst.max((total - 1.0).abs());
    }
    checks.push(Check { id: "heat-kernel-normalization", residual: worst, tolerance: 1e-8 });

    // heat-kernel convolution
    let p = param(0.5)?;
    let (x, y, tau1, tau2) = (0.8, -0.6, 0.3, 0.6);
    let z_max = 1.0 + (2.0f64 * 0.6 * 40.0).sqrt();
    let grid = WeightedGrid::full_line(p.nu, z_max, PanelLayout::default())?;
    let conv = grid.integrate(|z| {
        dunkl_heat_kernel(x, z, tau2, &p).unwrap() * dunkl_heat_kernel(z, y, tau1, &p).unwrap()
    });
    let direct = dunkl_heat_kernel(x, y, tau1 + tau2, &p)?;
    checks.push(Check {
        id: "heat-kernel-convolution",
        residual: (conv - direct).abs() / direct,
        tolerance: 1e-8,
    });

    // sector decomposition
    let mut worst = 0.0f64;
    for &nu in &[-0.3, 0.0, 0.7, 1.5] {
        let p = param(nu)?;
        for &(x, y, tau) in &[(0.8f64, -0.5f64, 0.6f64), (-1.3, -0.9, 0.4), (0.0, 1.1, 0.8)] {
            worst = worst.max(density_decomposition_check(x, y, tau, &p)?);
        }
    }
    checks.push(Check { id: "density-sector-decomposition", residual: worst, tolerance: 1e-10 });

    // Bessel density convolution over the speed measure
    let idx = dunkl::stochastic::BesselIndex::new(0.5, dunkl::stochastic::BesselBoundary::ReflectingNeumann)?;
    let (bx, by, btau) = (0.9, 1.4, 0.4);
    let sgrid = WeightedGrid::half_line_speed(idx.alpha, 8.0, PanelLayout::default())?;
    let conv = sgrid.integrate(|z| {
        dunkl::stochastic::bessel_density(bx, z, btau, idx, dunkl::stochastic::DensityForm::Symmetric).unwrap()
            * dunkl::stochastic::bessel_density(z, by, btau, idx, dunkl::stochastic::DensityForm::Symmetric)
                .unwrap()
    });
    let direct =
        dunkl::stochastic::bessel_density(bx, by, 2.0 * btau, idx, dunkl::stochastic::DensityForm::Symmetric)?;
    checks.push(Check {
        id: "bessel-density-convolution",
        residual: (conv - direct).abs() / direct,
        tolerance: 1e-8,
    });

    // undeformed reduction to the Wiener density
    let p0 = param(0.0)?;
    let d = dunkl_heat_kernel(1.0, 0.0, 1.0, &p0)?;
    let wiener = (2.0 * std::f64::consts::PI).sqrt().recip() * (-0.5f64).exp();
    checks.push(Check {
        id: "heat-kernel-undeformed-wiener",
        residual: (d - wiener).abs() / wiener,
        tolerance: 1e-12,
    });
    Ok(())
}
