use std::process::{Command, Output};

fn rslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rslab")).args(args).env_remove("RS_LAB_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_cauchy_passes() {
    let o = rslab(&["verify", "cauchy"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("schur.oracle"));
}

#[test]
fn injected_fault_is_reported_with_reproducer() {
    let o = rslab(&["verify", "doublesum", "--N", "200", "--fault-at", "37"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("n = 37"), "{err}");
    assert!(err.contains("--seed 20240917"), "{err}");
}

#[test]
fn verify_writes_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("aux.jsonl");
    let o = rslab(&["verify", "aux", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["seed"], 20_240_917);
        assert_eq!(v["passed"], true);
    }
    assert!(text.lines().count() > 100);
}

#[test]
fn dump_coeffs_has_one_row_per_index() {
    let o = rslab(&["dump", "coeffs", "--N", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,value");
    assert_eq!(lines.len(), 101);
    assert!(lines[1].starts_with("1,1"));
}

#[test]
fn dump_coeffs_reads_representation_files() {
    let dir = tempfile::tempdir().unwrap();
    let pi = dir.path().join("pi.rep");
    let o = rslab(&["dump", "coeffs", "--N", "20", "--out", pi.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    // a CSV table is not a representation file
    let bad = rslab(&["dump", "coeffs", "--pi-file", pi.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(3));
}

#[test]
fn gauss_grid_covers_every_character_and_shift() {
    let o = rslab(&["dump", "gauss", "--q", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 4 * 12);
    let abs2: Vec<f64> =
        text.lines().map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["abs2"].as_f64().unwrap()).collect();
    // |tau|^2 <= phi(12)^2, attained by the trivial character at beta = 0
    assert!(abs2.iter().all(|&a| a <= 16.0 + 1e-9));
    assert!(abs2.iter().any(|&a| (a - 16.0).abs() < 1e-9));
    // the primitive character mod 12 has |tau|^2 = 12 at beta = 1/12
    assert!(abs2.iter().any(|&a| (a - 12.0).abs() < 1e-9));
}

#[test]
fn twist_emits_requested_length() {
    let o = rslab(&["twist", "--beta", "1/3", "--N", "30"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 30);
}

#[test]
fn reduce_anchor_matrix() {
    let o = rslab(&["reduce", "--matrix", "0,-1;1,0", "--ctx", "5,6,7"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["gamma1"], "5");
    assert_eq!(v["alpha"], "42/5");
    assert_eq!(v["verified"], true);
}

#[test]
fn funceq_reports_small_residuals() {
    let o = rslab(&["funceq", "--q", "4", "--chi-index", "1", "--shifts", "0.5,-1,2", "--u1", "-0.25"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["max_residual"].as_f64().unwrap() < 1e-8);
    assert_eq!(v["synthetic"]["conductor"], 64);
}

#[test]
fn bad_input_exits_with_three() {
    for args in [
        &["verify", "nope"][..],
        &["--N", "0", "dump", "coeffs"],
        &["--mode", "fuzzy", "verify", "cauchy"],
        &["reduce", "--matrix", "1,2;3", "--ctx", "5,6,7"],
        &["funceq", "--q", "4", "--chi-index", "0"],
        &["funceq", "--q", "5", "--chi-index", "9"],
        &["gauss", "--q", "5", "--beta", "x"],
        &["--unknown-flag"],
    ] {
        assert_eq!(rslab(args).status.code(), Some(3), "{args:?}");
    }
    assert_eq!(rslab(&["--help"]).status.code(), Some(0));
}

#[test]
fn seed_layers_env_under_flag() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_rslab"));
        c.env_remove("RS_LAB_SEED");
        if let Some(s) = env {
            c.env("RS_LAB_SEED", s);
        }
        stdout(&c.args(["dump", "coeffs", "--N", "30"]).args(extra).output().unwrap())
    };
    let default = run(None, &[]);
    let env = run(Some("7"), &[]);
    assert_ne!(default, env);
    assert_eq!(env, run(None, &["--seed", "7"]));
    assert_eq!(default, run(Some("7"), &["--seed", "20240917"]));
    assert_eq!(default, run(None, &[]));
}

#[test]
fn config_file_is_applied() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# small float run\nmode = float\nN = 12\nseed = 7\n").unwrap();
    let o = rslab(&["--config", cfg.to_str().unwrap(), "dump", "coeffs"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 13);
    let flagged = rslab(&["--config", cfg.to_str().unwrap(), "--N", "5", "dump", "coeffs"]);
    assert_eq!(stdout(&flagged).lines().count(), 6);
    std::fs::write(&cfg, "colour = red\n").unwrap();
    assert_eq!(rslab(&["--config", cfg.to_str().unwrap(), "verify", "cauchy"]).status.code(), Some(3));
}
