use std::process::{Command, Output};

fn qpt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qpt-overlap")).args(args).env_remove("QPT_OVERLAP_WORKERS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["xy-overlap", "--no-such-flag"][..],
        &["xy-overlap", "--n-sites", "4"],
        &["xy-overlap", "--gamma", "abc"],
        &["xy-overlap", "--omega", "1"],
        &["xy-grid", "--format", "json"],
        &["reproduce", "fig9"],
        &["frobnicate"],
    ] {
        let o = qpt(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
    let o = qpt(&["xy-overlap", "--n-sites", "4"]);
    assert!(stderr(&o).contains("n_sites must be odd"));
}

#[test]
fn compute_errors_exit_one() {
    // too few points for an asymptotic fit
    let o = qpt(&["xy-asymptotic", "--n-sites", "1001", "--points", "3"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stderr(&o).contains("fit"));
    // a critical mode at λ = cos(2π/9)
    let lambda = format!("{}", (std::f64::consts::TAU / 9.0).cos());
    let o = qpt(&["loschmidt", "--gamma", "0", "--lambda", &lambda, "--n-sites", "9"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn three_site_overlap() {
    let o = qpt(&["xy-overlap", "--gamma", "1", "--lambda", "0", "--n-sites", "3", "--delta-lambda", "0.1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("gamma,lambda,n_sites,delta_gamma,delta_lambda,log_overlap,overlap,degenerate"));
    let overlap: f64 = lines.next().unwrap().split(',').nth(6).unwrap().parse().unwrap();
    assert!((overlap - 0.99916).abs() < 1e-5);

    let o = qpt(&["xy-overlap", "--n-sites", "3", "--lambda", "0", "--delta-lambda", "0.1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["overlap"].as_f64().unwrap() - overlap).abs() < 1e-15);
}

#[test]
fn scaling_report_is_json() {
    let o = qpt(&["xy-scaling", "--lambda", "1", "--gamma", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!((v["exponent"].as_f64().unwrap() - 2.0).abs() < 0.05);
    for key in ["amplitude", "window", "r_squared", "n_points", "runtime_seconds"] {
        assert!(!v[key].is_null(), "missing {key}");
    }
    assert_eq!(v["n_points"], 5);
}

#[test]
fn grid_output_is_identical_for_any_worker_count() {
    let base = ["xy-grid", "--n-sites", "1001", "--gamma-points", "9", "--lambda-points", "9", "--delta", "1e-6"];
    let run = |extra: &[&str], env: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_qpt-overlap"));
        c.args(base).args(extra).env_remove("QPT_OVERLAP_WORKERS");
        if let Some(n) = env {
            c.env("QPT_OVERLAP_WORKERS", n);
        }
        let o = c.output().unwrap();
        assert!(o.status.success());
        o.stdout
    };
    let reference = run(&["--workers", "1"], None);
    assert_eq!(run(&["--workers", "4"], None), reference);
    assert_eq!(run(&[], Some("8")), reference);
    assert_eq!(run(&[], None), reference);

    let text = String::from_utf8(reference).unwrap();
    assert!(!text.contains('\r'));
    assert_eq!(text.lines().count(), 82);
    // every value carries 17 significant digits
    let value = text.lines().nth(1).unwrap().split(',').nth(2).unwrap();
    assert_eq!(value.split('e').next().unwrap().replace(['.', '-'], "").len(), 17);
}

#[test]
fn reproduce_fig2a_at_reduced_scale() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig2a.csv");
    let o = qpt(&[
        "reproduce",
        "fig2a",
        "--n-sites",
        "100000",
        "--delta",
        "1e-6",
        "--scale",
        "0.1",
        "--gamma-points",
        "13",
        "--lambda-points",
        "13",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let (g, l, v): (f64, f64, f64) = (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap());
        if v < best.0 {
            best = (v, g, l);
        }
    }
    let (_, gamma, lambda) = best;
    assert!((lambda.abs() - 1.0).abs() <= 0.25 + 1e-12 || gamma.abs() <= 0.25 + 1e-12, "{best:?}");
}

#[test]
fn recipes_run_at_small_scale() {
    for (recipe, lines) in [("scaling", 5), ("asymptotic", 2), ("dicke-exponent", 1)] {
        let o = qpt(&["reproduce", recipe, "--scale", "0.01"]);
        assert!(o.status.success(), "{recipe}: {}", stderr(&o));
        let out = stdout(&o);
        assert_eq!(out.lines().count(), lines, "{recipe}");
        for line in out.lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert!(v["exponent"].is_f64());
        }
    }
    let o = qpt(&["reproduce", "fig1", "--lambda-points", "11"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("lambda,dicke_overlap,error\n"));
    assert_eq!(out.lines().count(), 12);
    for recipe in ["fig2b", "fig2c"] {
        let o = qpt(&["reproduce", recipe, "--scale", "0.001", "--gamma-points", "5", "--lambda-points", "5"]);
        assert!(o.status.success(), "{recipe}");
        assert_eq!(stdout(&o).lines().count(), 26);
    }
}

#[test]
fn verify_passes() {
    let o = qpt(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 7);
    assert!(out.lines().all(|l| l.starts_with("ok")));
}

#[test]
fn config_file_feeds_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "n_sites = 3\nlambda = 0.0\ndelta_lambda = 0.1\nomega = 2.0\n").unwrap();
    let o = qpt(&["xy-overlap", "--config", cfg.to_str().unwrap(), "--gamma", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("1.0000000000000000e0,0.0000000000000000e0,3,"));

    std::fs::write(&cfg, "n_sites = 4\n").unwrap();
    let o = qpt(&["xy-overlap", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("n_sites must be odd"));
}

#[test]
fn dicke_commands() {
    let o = qpt(&["dicke-exponent"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!((v["exponent"].as_f64().unwrap() - 0.125).abs() < 0.01);
    assert_eq!(v["n_points"], 9);

    let o = qpt(&["dicke-overlap", "--lambda-points", "5", "--variant", "literature", "--omega", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 6);
    assert!(out.lines().skip(1).all(|l| l.ends_with(',')), "{out}");
}
