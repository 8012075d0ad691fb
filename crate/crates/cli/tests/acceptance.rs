use serde_json::Value;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

fn massive(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_massive"))
        .args(args)
        .output()
        .expect("spawn massive")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Printed outside the test harness capture so the per-criterion lines always show.
fn announce(line: &str) {
    let mut e = std::io::stderr().lock();
    let _ = writeln!(e, "{line}");
}

#[test]
fn primary_criteria() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = massive(&["verify", "all", "--report", path.to_str().unwrap()]);
    let report = read_json(&path);
    let checks = report["checks"].as_array().unwrap();
    let mut failed = Vec::new();
    announce("");
    for criterion in 1..=12u64 {
        let hits: Vec<&Value> = checks.iter().filter(|c| c["criterion"] == criterion).collect();
        assert_eq!(hits.len(), 1, "criterion {criterion} must map to exactly one check");
        let c = hits[0];
        let pass = c["pass"].as_bool().unwrap();
        announce(&format!(
            "criterion {criterion:>2} {:<4} {:<32} residual {:.3e} tol {:.1e}",
            if pass { "pass" } else { "FAIL" },
            c["id"].as_str().unwrap(),
            c["residual"].as_f64().unwrap_or(f64::NAN),
            c["tolerance"].as_f64().unwrap_or(f64::NAN),
        ));
        if !pass {
            failed.push(c["id"].as_str().unwrap().to_string());
        }
    }
    assert!(failed.is_empty(), "failing checks: {failed:?}\n{}", stdout(&out));
    assert_eq!(code(&out), 0);
    assert_eq!(report["summary"]["pass"], true);
    assert_eq!(report["summary"]["total"], 12);
    // the whole suite stays inside its five-minute budget
    assert!(report["summary"]["wall_ms"].as_f64().unwrap() < 300_000.0);
}

#[test]
fn report_schema() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = massive(&["verify", "invariance", "--report", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let r = read_json(&path);
    let ids: Vec<&str> = r["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["modular_elliptic_invariance", "kronecker_limit_and_reflection", "thread_determinism"]);
    for c in r["checks"].as_array().unwrap() {
        for key in ["id", "criterion", "suite", "inputs", "measurements", "residual", "tolerance", "pass", "wall_ms"] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
        assert!(c["wall_ms"].as_f64().unwrap() < 30_000.0);
    }
    for key in ["suite", "total", "passed", "failed", "pass", "wall_ms"] {
        assert!(r["summary"].get(key).is_some(), "missing summary.{key}");
    }
}

#[test]
fn sign_flip_in_jacobi_coefficients_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = massive(&["verify", "pde", "--inject-fault", "jacobi-sign", "--report", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL [ 5] pde_residuals"), "{}", stdout(&out));
    let r = read_json(&path);
    assert_eq!(r["summary"]["failed"], serde_json::json!(["pde_residuals"]));
    // the Casimir check belongs to the pde suite and is unaffected by the triple
    let cas = r["checks"].as_array().unwrap().iter().find(|c| c["id"] == "casimir_annihilation").unwrap();
    assert_eq!(cas["pass"], true);
}

const E1_POINT: [&str; 8] = ["--tau", "0.2+1.1i", "--alpha", "0.3", "--beta", "0.7", "--mu", "0.5"];

fn eval_json(args: &[&str]) -> Value {
    let out = massive(args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(stdout(&out).trim()).unwrap()
}

#[test]
fn eval_json_contract() {
    let mut args = vec!["eval", "e1_massive"];
    args.extend(E1_POINT);
    args.extend(["--tol", "1e-10", "--format", "json"]);
    let v = eval_json(&args);
    let obj = v.as_object().unwrap();
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["err_bound", "radius", "terms", "value_im", "value_re", "wall_ms"]);
    assert!(v["radius"].is_u64() && v["terms"].is_u64());
    assert!(v["err_bound"].as_f64().unwrap() <= 1e-10);

    let mut args = vec!["eval", "es_massive", "--s", "1.0"];
    args.extend(E1_POINT);
    args.extend(["--tol", "1e-10"]);
    let w = eval_json(&args);
    for key in ["value_re", "value_im", "err_bound", "radius", "terms"] {
        assert_eq!(v[key], w[key], "{key}");
    }
}

#[test]
fn eval_csv_uses_point_decimals() {
    let mut args = vec!["eval", "e1_massive", "--format", "csv"];
    args.extend(E1_POINT);
    let out = massive(&args);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("value_re,value_im,err_bound,radius,terms,wall_ms"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 6);
    assert!(row[0].parse::<f64>().is_ok() && row[0].contains('.'));
}

#[test]
fn coth_identity_residual() {
    let v = eval_json(&["eval", "coth_identity", "--m", "0.7"]);
    assert!(v["value_re"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&massive(&["eval", "no_such_function", "--x", "1"])), 2);
    assert_eq!(code(&massive(&["eval", "f_open", "--m", "0.3"])), 2);
    assert_eq!(code(&massive(&["eval", "f_open", "--m", "0.3", "--t", "2", "--q", "1"])), 2);
    assert_eq!(code(&massive(&["verify", "nonsense"])), 2);
    let mut args = vec!["eval", "e1_massive"];
    args.extend(&E1_POINT[..6]);
    args.extend(["--mu", "0"]);
    let out = massive(&args);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("mu"));
    assert_eq!(code(&massive(&["verify", "graph", "--report", "/nonexistent/dir/r.json"])), 4);
}

fn sweep_rows(args: &[&str]) -> Vec<[f64; 4]> {
    let out = massive(args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(rdr.headers().unwrap(), vec!["parameter", "value_re", "value_im", "err_bound"]);
    rdr.deserialize().map(|r| r.unwrap()).collect()
}

#[test]
fn empty_sweep_is_header_only() {
    let mut args = vec!["sweep", "e1_massive", "--param", "mu", "--from", "0.1", "--to", "1", "--steps", "0"];
    args.extend(&E1_POINT[..6]);
    let out = massive(&args);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "parameter,value_re,value_im,err_bound\n");
}

#[test]
fn mass_sweep_follows_the_power_series() {
    let base = ["--tau", "0.15+1.2i", "--alpha", "0.3", "--beta", "0.4"];
    let mut args = vec!["sweep", "e1_massive", "--param", "mu", "--from", "1e-3", "--to", "5e-2", "--steps", "8", "--geometric"];
    args.extend(base);
    let rows = sweep_rows(&args);
    assert_eq!(rows.len(), 8);
    assert!(rows.windows(2).all(|w| w[1][0] > w[0][0]));
    let rising = rows.windows(2).all(|w| w[1][1] > w[0][1]);
    let falling = rows.windows(2).all(|w| w[1][1] < w[0][1]);
    assert!(rising || falling, "{rows:?}");

    // shifted lattice: rows against the truncated power series, whose next term bounds the error
    let mut args = vec!["sweep", "e1_massive_twisted", "--param", "mu", "--from", "1e-3", "--to", "5e-2", "--steps", "5", "--geometric"];
    args.extend(["--w-alpha", "0.2", "--w-beta", "0.1", "--tol", "1e-13"]);
    args.extend(base);
    for [mu, re, im, bound] in sweep_rows(&args) {
        let mu_s = mu.to_string();
        let mut pargs = vec!["eval", "power_series", "--w-alpha", "0.2", "--w-beta", "0.1", "--n", "10", "--mu", &mu_s, "--tol", "1e-13"];
        pargs.extend(base);
        let p = eval_json(&pargs);
        let d = ((re - p["value_re"].as_f64().unwrap()).powi(2) + (im - p["value_im"].as_f64().unwrap()).powi(2)).sqrt();
        // either side may dominate: the series truncation or the certified lattice tail
        assert!(d <= 2.0 * p["err_bound"].as_f64().unwrap() + bound, "mu = {mu}: {d}");
    }
}

#[test]
fn open_string_sweep_inverts() {
    let m = 0.3;
    let rows = sweep_rows(&["sweep", "f_open", "--param", "t", "--from", "0.5", "--to", "2", "--steps", "5", "--geometric", "--m", "0.3", "--tol", "1e-14"]);
    assert_eq!(rows.len(), 5);
    for [t, v, _, _] in &rows {
        let (mt, inv) = ((m * t).to_string(), (1.0 / t).to_string());
        let w = eval_json(&["eval", "f_open", "--m", &mt, "--t", &inv, "--tol", "1e-14"]);
        assert!((v - w["value_re"].as_f64().unwrap()).abs() < 1e-9 * v, "t = {t}");
    }
}

#[test]
fn sweep_writes_file_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let mut args = vec!["sweep", "modular_graph_11", "--param", "mu", "--from", "0.2", "--to", "2", "--steps", "4", "--tau", "i", "--out"];
    args.push(path.to_str().unwrap());
    assert_eq!(code(&massive(&args)), 0);
    let first = std::fs::read_to_string(&path).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_massive"))
        .args(&args)
        .env("MASSIVE_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), first);
    assert_eq!(first.lines().count(), 5);
}
