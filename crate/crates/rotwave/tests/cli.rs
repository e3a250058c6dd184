use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn rotwave(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotwave")).current_dir(dir).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json_file(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn help_and_version() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&rotwave(dir.path(), &["--help"])), 0);
    assert_eq!(code(&rotwave(dir.path(), &["--version"])), 0);
    assert_eq!(code(&rotwave(dir.path(), &["frobnicate"])), 1);
}

#[test]
fn solve_writes_report_and_tables() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "solve", "--domain", "disk", "--alpha", "0.5", "--m", "0", "--p", "4", "--n", "256", "--K", "32",
    ];
    let out = rotwave(dir.path(), &args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["classification"], "radial");
    assert!(v["report"]["c_value"].as_f64().unwrap() > 0.0);

    let out = rotwave(
        dir.path(),
        &["solve", "--p", "4", "--alpha", "0.9", "--m", "10", "--n", "48", "--K", "4", "--json", "r.json", "--csv", "u.csv", "--modes-csv", "k.csv"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let u = std::fs::read_to_string(dir.path().join("u.csv")).unwrap();
    assert!(u.starts_with("r,theta,value\n"));
    assert_eq!(u.lines().count(), 1 + 48 * 4 * 9);
    let k = std::fs::read_to_string(dir.path().join("k.csv")).unwrap();
    assert!(k.starts_with("k,r,a_k,b_k\n"));
    assert_eq!(k.lines().count(), 1 + 48 * 5);
    assert_eq!(json_file(&dir.path().join("r.json"))["report"]["n"], 48);
}

#[test]
fn solve_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["solve", "--p", "3", "--alpha", "0.7", "--m", "5", "--n", "64", "--K", "8"];
    let a = rotwave(dir.path(), &args);
    let b = rotwave(dir.path(), &args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn solve_errors_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = rotwave(dir.path(), &["solve", "--alpha", "0.5", "--m", "0"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("Usage"), "{}", stderr(&out));

    let out = rotwave(dir.path(), &["solve", "--domain", "disk", "--m", "-10", "--p", "4", "--n", "64", "--K", "4"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("mass below spectral bound"));

    let out = rotwave(dir.path(), &["solve", "--domain", "torus", "--p", "4"]);
    assert_eq!(code(&out), 1);
    let out = rotwave(dir.path(), &["solve", "--domain", "annulus", "--p", "4"]);
    assert_eq!(code(&out), 1);
    let out = rotwave(dir.path(), &["solve", "--p", "1.5"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn validation_failure_leaves_no_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = rotwave(dir.path(), &["solve", "--p", "4", "--csv", "u.csv", "--json", "missing/r.json"]);
    assert_eq!(code(&out), 1);
    assert!(!dir.path().join("u.csv").exists());

    let out = rotwave(dir.path(), &["sweep", "concentration", "--p", "12", "--lambdas", "0.4:0.1"]);
    assert_eq!(code(&out), 1);
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn concentration_sweep_fits_slope() {
    let dir = tempfile::tempdir().unwrap();
    let out = rotwave(dir.path(), &["sweep", "concentration", "--p", "12", "--lambdas", "0.4:0.1:5"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("sweep_concentration.csv")).unwrap();
    assert!(csv.starts_with("lambda,value\n"));
    assert_eq!(csv.lines().count(), 6);
    let fit = json_file(&dir.path().join("sweep_concentration.json"));
    for key in ["slope", "intercept", "max_residual", "predicted"] {
        assert!(fit[key].is_number(), "{key}");
    }
    let slope = fit["slope"].as_f64().unwrap();
    assert!((slope - 1.0 / 6.0).abs() < 0.1 / 6.0);
    assert_eq!(fit["rows"], 4);

    let out = rotwave(dir.path(), &["sweep", "concentration", "--p", "12", "--fit-all", "--json", "all.json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(json_file(&dir.path().join("all.json"))["rows"], 5);
}

#[test]
fn supercritical_and_riemannian_sweeps() {
    let dir = tempfile::tempdir().unwrap();
    let out = rotwave(dir.path(), &["sweep", "supercritical", "--alpha", "1.5", "--ks", "4,8,16"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("sweep_supercritical.csv")).unwrap();
    assert!(csv.starts_with("k,value,d_k,d_ratio,epsilon\n"));
    assert_eq!(csv.lines().count(), 4);

    let out = rotwave(dir.path(), &["sweep", "supercritical", "--alpha", "0.5"]);
    assert_eq!(code(&out), 1);

    let out = rotwave(
        dir.path(),
        &["sweep", "riemannian", "--p", "8", "--csv", "h.csv", "--json", "h.json", "--jobs", "2"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let fit = json_file(&dir.path().join("h.json"));
    assert!((fit["predicted"].as_f64().unwrap() - 0.25).abs() < 1e-12);
}

#[test]
fn solver_sweeps_run_in_parallel() {
    let dir = tempfile::tempdir().unwrap();
    let out = rotwave(
        dir.path(),
        &["sweep", "alpha", "--p", "4", "--alphas", "0:1:3", "--n", "48", "--K", "4", "--jobs", "3"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v = json_file(&dir.path().join("sweep_alpha.json"));
    assert_eq!(v["monotone"], true);
    let csv = std::fs::read_to_string(dir.path().join("sweep_alpha.csv")).unwrap();
    assert!(csv.starts_with("alpha,value,radial_c,gap,nonradial_energy,nonradial\n"));

    let out = rotwave(dir.path(), &["sweep", "m", "--p", "4", "--ms", "-1,5,20", "--n", "48", "--K", "4"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = rotwave(dir.path(), &["sweep", "alpha", "--p", "4", "--alphas", "0.5,0.2"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn check_command_policies() {
    let dir = tempfile::tempdir().unwrap();
    let out = rotwave(dir.path(), &["check", "--only", "lambda1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[PASS] 01 lambda1"));
    assert_eq!(text.lines().filter(|l| l.starts_with('[')).count(), 1);

    let out = rotwave(dir.path(), &["check", "--n", "16"]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("SKIPPED-UNDERRESOLVED"));
    assert!(!text.contains("[FAIL]"));

    assert_eq!(code(&rotwave(dir.path(), &["check", "--only", "nonsense"])), 1);
}

#[test]
fn halfspace_commands() {
    let dir = tempfile::tempdir().unwrap();
    let out = rotwave(
        dir.path(),
        &["halfspace", "minimize", "--s", "1", "--L", "2", "--M", "2", "--nx", "24", "--ny", "24", "--csv", "hs.csv"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["report"]["value"].as_f64().unwrap() > 0.0);
    assert_eq!(v["report"]["p"], 10.0);
    let csv = std::fs::read_to_string(dir.path().join("hs.csv")).unwrap();
    assert!(csv.starts_with("x1,x2,value\n"));
    assert_eq!(csv.lines().count(), 1 + 24 * 24);

    let out = rotwave(dir.path(), &["halfspace", "threshold", "--m", "-5.68", "--nx", "48", "--ny", "48"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["satisfied"], true);

    let out = rotwave(dir.path(), &["halfspace", "threshold", "--m", "-6"]);
    assert_eq!(code(&out), 2);

    let out = rotwave(dir.path(), &["halfspace", "scale-check", "--s", "2", "--p", "auto"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["p"], 6.0);
    assert!(v["max_residual"].as_f64().unwrap() < 1e-10);

    let out = rotwave(dir.path(), &["halfspace", "scale-check", "--s", "1", "--p", "4", "--kappa", "2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["max_residual"].as_f64().unwrap() < 1e-10);
    let kf = v["kappa_factor"].as_f64().unwrap();
    assert!((kf - v["kappa_predicted"].as_f64().unwrap()).abs() < 1e-8);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.toml"), "p = \"4\"\nalpha = 0.3\nn = 48\nK = 4\nm = 50\n").unwrap();
    let out = rotwave(dir.path(), &["--config", "run.toml", "solve", "--m", "2"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["problem"]["params"]["m"], 2.0);
    assert_eq!(v["problem"]["params"]["alpha"], 0.3);
    assert_eq!(v["report"]["k_max"], 4);

    std::fs::write(dir.path().join("bad.toml"), "alpah = 0.3\n").unwrap();
    assert_eq!(code(&rotwave(dir.path(), &["--config", "bad.toml", "solve", "--p", "4"])), 1);
    assert_eq!(code(&rotwave(dir.path(), &["--config", "absent.toml", "solve", "--p", "4"])), 1);
}
