//! End-to-end tests of the binary: artifact formats, determinism, config
//! handling and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn dunkl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dunkl"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// Strip the timestamp line/field so deterministic outputs compare equal.
fn strip_timestamp(text: &str) -> String {
    text.lines()
        .filter(|l| !l.contains("generated_unix"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn kernel_csv_has_metadata_and_parses() {
    let out = dunkl(&["kernel", "--nu", "0.7", "--x-min", "-2", "--x-max", "2", "--points", "9"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("# schema_version = 1"));
    assert!(text.contains("# command = kernel"));
    assert!(text.contains("# config.nu = 0.7"));
    let data_rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('x'))
        .collect();
    assert_eq!(data_rows.len(), 9);
    // E_nu(0) = 1 row present
    assert!(data_rows.iter().any(|r| r.starts_with("0.0,1.0,0.0")));
}

#[test]
fn outputs_are_deterministic_modulo_timestamp() {
    let args = [
        "evolve", "--nu", "0.5", "--beta", "1", "--t", "2", "--points", "33",
    ];
    let a = strip_timestamp(&stdout(&dunkl(&args)));
    let b = strip_timestamp(&stdout(&dunkl(&args)));
    assert_eq!(a, b);

    let args = [
        "mc", "--potential", "ho", "--omega", "1", "--nu", "0.5", "--tau", "0.4", "--paths",
        "500", "--seed", "7", "--workers", "2",
    ];
    let a = strip_timestamp(&stdout(&dunkl(&args)));
    let b = strip_timestamp(&stdout(&dunkl(&args)));
    assert_eq!(a, b);
}

#[test]
fn emitted_csv_reparses_to_identical_values() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("packet.csv");
    let out = dunkl(&[
        "evolve", "--nu", "0.5", "--beta", "1", "--t", "2", "--points", "17", "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    // parse numeric rows and re-format: values must round-trip exactly
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('x'))
        .map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 17);
    for (line, row) in text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('x'))
        .zip(&rows)
    {
        let rebuilt: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        assert_eq!(line, rebuilt.join(","));
    }
}

#[test]
fn transform_consumes_its_own_csv() {
    // evolve a packet, feed the density samples back through transform
    let dir = tempfile::tempdir().unwrap();
    let sample_path = dir.path().join("samples.csv");
    // build an input: gaussian samples at uniform nodes
    let mut text = String::from("node,re,im\n");
    let n = 201;
    for i in 0..n {
        let x = -8.0 + 16.0 * i as f64 / (n - 1) as f64;
        text.push_str(&format!("{x:?},{:?},0.0\n", (-x * x / 2.0f64).exp()));
    }
    std::fs::write(&sample_path, &text).unwrap();
    let out = dunkl(&[
        "transform", "--nu", "0.5", "--input", sample_path.to_str().unwrap(), "--k-max", "2",
        "--k-points", "5",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    // D[e^{-x²/2}](k) = e^{-k²/2} at ν=1/2; trapezoid input gives ~1e-3
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("node"))
        .map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap()).collect())
        .collect();
    for row in rows {
        let expect = (-row[0] * row[0] / 2.0).exp();
        assert!((row[1] - expect).abs() < 5e-3, "{} vs {}", row[1], expect);
    }
}

#[test]
fn evolve_density_matches_dispersion_formula() {
    // |Ψ(x,t)|² at ν=0.5, β=1, t=2: width parameter β/(1+β²t²) = 1/5,
    // so the x=0 value is (1/5)^{ν+1/2}/Γ(ν+1/2) = 0.2.
    let out = dunkl(&["evolve", "--nu", "0.5", "--beta", "1", "--t", "2", "--points", "5", "--x-max", "2"]);
    assert!(out.status.success());
    let rows: Vec<Vec<f64>> = stdout(&out)
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('x'))
        .map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap()).collect())
        .collect();
    let center = rows.iter().find(|r| r[0] == 0.0).unwrap();
    assert!((center[2] - 0.2).abs() < 1e-12);
    // and a generic point against the closed form
    let b_eff = 0.2f64;
    for r in &rows {
        let expect = b_eff * (-b_eff * r[0] * r[0]).exp();
        assert!((r[2] - expect).abs() < 1e-12);
    }
}

#[test]
fn mc_estimate_consistent_with_embedded_pairing() {
    let out = dunkl(&[
        "mc", "--potential", "ho", "--omega", "1", "--nu", "0.5", "--tau", "0.8", "--paths",
        "4000", "--seed", "42", "--workers", "2",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let est = v["data"]["estimate"].as_f64().unwrap();
    let se = v["data"]["std_error"].as_f64().unwrap();
    let closed = v["data"]["closed_form_pairing"].as_f64().unwrap();
    assert!((est - closed).abs() <= 3.0 * se, "{est} ± {se} vs {closed}");
}

#[test]
fn config_file_used_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "nu = 0.7\nbeta = 2\nt = 1\npoints = 5\n").unwrap();
    let out = dunkl(&["evolve", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("# config.nu = 0.7"));
    assert!(text.contains("# config.beta = 2"));
    // flag wins over file
    let out = dunkl(&["evolve", "--config", cfg.to_str().unwrap(), "--beta", "3"]);
    assert!(stdout(&out).contains("# config.beta = 3"));
}

#[test]
fn unknown_config_key_rejected_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    std::fs::write(&cfg, "nu = 0.7\nmystery_knob = 12\n").unwrap();
    let out = dunkl(&["evolve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mystery_knob"));
}

#[test]
fn domain_error_exits_3() {
    // nu below the admissible range
    let out = dunkl(&["kernel", "--nu", "-0.9"]);
    assert_eq!(out.status.code(), Some(3));
    // caustic time for the oscillator propagator
    let out = dunkl(&[
        "propagate", "--nu", "0.5", "--omega", "1", "--t",
        "3.14159265358979312", "--points", "3",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn io_error_exits_4() {
    let out = dunkl(&[
        "evolve", "--points", "3", "--output", "/nonexistent-dir/xyz/out.csv",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn check_densities_suite_passes() {
    let out = dunkl(&["check", "--suite", "densities"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("heat-kernel-normalization"));
    assert!(text.contains("density-sector-decomposition"));
    assert!(text.contains("bessel-density-convolution"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn mc_json_schema() {
    let out = dunkl(&[
        "mc", "--mode", "index-change", "--potential", "zero", "--nu", "1.0", "--tau", "0.5",
        "--y", "1.0", "--paths", "500", "--seed", "3", "--workers", "1",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    for key in [
        "estimate", "std_error", "n_paths", "n_steps", "seed", "clamp_rate",
    ] {
        assert!(v["data"].get(key).is_some(), "missing data.{key}");
    }
    assert_eq!(v["meta"]["schema_version"], 1);
    assert!(v["meta"]["config"]["workers"].is_string());
}

#[test]
fn propagate_table_columns() {
    let out = dunkl(&[
        "propagate", "--nu", "0.5", "--t", "1", "--y", "0.5", "--eps-m", "0.05", "--points", "7",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "x,y,t,re,im"));
    let _ = Path::new("");
}
