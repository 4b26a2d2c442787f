use std::f64::consts::FRAC_1_SQRT_2;
use std::process::{Command, Output};

use biqo_core::{global_fidelity_closed, maximize, quantumness_q, MaximizeTarget, MeasureReport};
use serde_json::Value;

fn biqo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biqo"))
        .args(args)
        .env_remove("BIQO_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("single json document")
}

#[test]
fn quantify_text_at_45_degrees() {
    let o = biqo(&["quantify", "--overlap", "0.70711"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("0.201752"), "{s}");
    assert!(s.contains("0.066987"));
    assert!(s.contains("0.146448"));
}

#[test]
fn quantify_json_is_library_pass_through() {
    let o = biqo(&["quantify", "--overlap", "0.3", "--format", "json"]);
    let v = json(&o);
    let r = MeasureReport::at(0.3).unwrap();
    let want = serde_json::to_value(&r).unwrap();
    assert_eq!(v, want);
}

#[test]
fn quantify_endpoint_and_theta() {
    let v = json(&biqo(&["quantify", "--overlap", "0", "--format", "json"]));
    assert_eq!(v["p_e"], 0.0);
    assert_eq!(v["q"], 0.0);
    assert_eq!(v["f_g"], 1.0);
    assert_eq!(v["f_l"], 1.0);
    let v = json(&biqo(&[
        "quantify",
        "--theta-degrees",
        "45",
        "--format",
        "json",
    ]));
    assert!((v["x"].as_f64().unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["quantify", "--overlap", "1.5"][..],
        &["quantify"],
        &["quantify", "--overlap", "0.5", "--theta-degrees", "60"],
        &["curve", "--measure", "nope", "--steps", "4"],
        &["curve", "--measure", "q", "--steps", "1"],
        &["curve", "--measure", "tradeoff", "--steps", "4"],
        &["verify", "--target", "nope", "--overlap", "0.5"],
        &["maximize", "--measure", "c1"],
        &["simulate", "--rounds", "0", "--eve", "off"],
        &["bogus"],
    ] {
        let o = biqo(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn bad_seed_env_is_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_biqo"))
        .args(["simulate", "--eve", "off", "--rounds", "10"])
        .env("BIQO_SEED", "minus one")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn curve_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.csv");
    let o = biqo(&[
        "curve",
        "--measure",
        "q",
        "--steps",
        "100",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.ends_with('\n') && !text.contains('\r'));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,q"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 101);
    let peak = rows.iter().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
    assert!((peak.0 - 0.71).abs() < 0.015);
    // 12 significant digits
    assert!((rows[50].1 - quantumness_q(0.5)).abs() < 1e-12);
}

#[test]
fn curve_three_rows() {
    let o = biqo(&["curve", "--measure", "fg", "--steps", "2"]);
    let s = stdout(&o);
    let xs: Vec<&str> = s
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(xs, ["0", "0.5", "1"]);
    assert!(s.lines().all(|l| l.split(',').count() == 2));
    let fg: f64 = s
        .lines()
        .nth(2)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((fg - global_fidelity_closed(0.5)).abs() < 1e-12);
}

#[test]
fn tradeoff_curve_endpoints() {
    let o = biqo(&[
        "curve",
        "--measure",
        "tradeoff",
        "--overlap",
        "0.70711",
        "--steps",
        "50",
    ]);
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert_eq!(lines[0], "p,d");
    assert_eq!(lines.len(), 52);
    let d0: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!((d0 - 0.066987).abs() < 1e-5);
    assert_eq!(lines[51], "0.5,0");
}

#[test]
fn curve_json_rows() {
    let v = json(&biqo(&[
        "curve",
        "--measure",
        "pe",
        "--steps",
        "4",
        "--format",
        "json",
    ]));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[4]["x"], 1.0);
    assert_eq!(rows[4]["pe"], 0.5);
}

#[test]
fn unwritable_path_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("q.csv");
    let o = biqo(&[
        "curve",
        "--measure",
        "q",
        "--steps",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn maximize_matches_library() {
    let o = biqo(&["maximize", "--measure", "q", "--format", "json"]);
    let v = json(&o);
    let r = maximize(MaximizeTarget::Q, 1e-8).unwrap();
    assert_eq!(v["argmax"].as_f64().unwrap(), r.search.argmax);
    assert!((v["argmax"].as_f64().unwrap() - FRAC_1_SQRT_2).abs() < 1e-3);
    assert!((v["value"].as_f64().unwrap() - 0.2017).abs() < 1e-4);
    for (m, want) in [("fg-deficit", 0.57735), ("fl-deficit", 0.5)] {
        let v = json(&biqo(&["maximize", "--measure", m, "--format", "json"]));
        assert!((v["argmax"].as_f64().unwrap() - want).abs() < 2e-3, "{m}");
    }
}

#[test]
fn verify_capacity_passes() {
    let o = biqo(&["verify", "--target", "c1", "--overlap", "0.6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS"));
    let v = json(&biqo(&[
        "verify",
        "--target",
        "cinf",
        "--overlap",
        "0.6",
        "--format",
        "json",
    ]));
    assert_eq!(v["pass"], true);
}

#[test]
fn verify_tradeoff_at_max_info() {
    let o = biqo(&[
        "verify",
        "--target",
        "tradeoff",
        "--overlap",
        "0.70711",
        "--at-max-info",
        "--restarts",
        "4",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!((v["oracle"].as_f64().unwrap() - 0.0670).abs() < 2e-3);
}

#[test]
fn verify_clone_global() {
    let o = biqo(&[
        "verify",
        "--target",
        "clone-global",
        "--overlap",
        "0.57735",
        "--restarts",
        "8",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn starved_verify_fails_with_exit_1() {
    // a single restart from this seed lands in a spurious optimum
    let o = biqo(&[
        "verify",
        "--target",
        "clone-local",
        "--overlap",
        "0.57735",
        "--restarts",
        "1",
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn simulate_without_eve() {
    let v = json(&biqo(&[
        "simulate", "--eve", "off", "--rounds", "5000", "--format", "json",
    ]));
    assert_eq!(v["disturbance_rate"], 0.0);
    assert_eq!(v["eve_present"], false);
}

#[test]
fn simulate_with_eve_is_deterministic() {
    let args = [
        "simulate",
        "--overlap",
        "0.70711",
        "--rounds",
        "100000",
        "--eve",
        "on",
        "--seed",
        "7",
        "--format",
        "json",
    ];
    let a = biqo(&args);
    let b = biqo(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    let se_e = (0.1464f64 * (1.0 - 0.1464) / 1e5).sqrt();
    let se_d = (0.0670f64 * (1.0 - 0.0670) / 1e5).sqrt();
    assert!((v["eve_error_rate"].as_f64().unwrap() - 0.1464).abs() <= 3.0 * se_e);
    assert!((v["disturbance_rate"].as_f64().unwrap() - 0.0670).abs() <= 3.0 * se_d);
}

#[test]
fn seed_from_environment() {
    let run = |seed: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_biqo"));
        c.args([
            "simulate",
            "--overlap",
            "0.5",
            "--rounds",
            "2000",
            "--restarts",
            "1",
        ]);
        if let Some(f) = flag {
            c.args(["--seed", f]);
        }
        match seed {
            Some(s) => c.env("BIQO_SEED", s),
            None => c.env_remove("BIQO_SEED"),
        };
        c.output().unwrap().stdout
    };
    assert_eq!(run(Some("11"), None), run(None, Some("11")));
    assert_eq!(run(Some("3"), Some("11")), run(None, Some("11")));
}
