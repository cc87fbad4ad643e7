//! End-to-end tests of the `mimo-lab` binary: argument handling, exit
//! codes, output formats, scenario files, and frozen reference outputs.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mimo-lab"))
        .args(args)
        .env_remove("MIMO_LAB_SEED")
        .output()
        .expect("binary should spawn")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

#[test]
fn analytic_output_matches_golden() {
    let out = run(&["analytic", "--preset", "table2", "--case", "4"]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let expected = include_str!("golden/analytic_table2_case04.csv");
    assert_eq!(stdout_of(&out), expected);
}

#[test]
fn applicability_reports_frozen_margin() {
    let out = run(&["check-applicability", "--preset", "table1", "--case", "11", "--M", "400"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.starts_with("case_id,M,metric,value,stderr\n"));
    assert!(text.contains("table1.case11,400,applicability_margin,0.6625,\n"), "{text}");
    assert!(text.contains("table1.case11,400,applicable,0,\n"), "{text}");
}

#[test]
fn scaling_emits_verdict_json() {
    let out = run(&["scaling", "--rrho", "0.5", "--format", "json"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["command"], "scaling");
    assert_eq!(doc["saving_exponent"], 0.5);
    assert_eq!(doc["non_decreasing"], true);
    assert_eq!(doc["deterministic"], true);
    assert_eq!(doc["exponents"]["power_decay"], 0.5);
}

#[test]
fn verify_moments_quick_run_summarizes() {
    let out = run(&["verify-moments", "--M", "24", "--K", "3", "--trials", "300"]);
    assert!(out.status.success());
    let err = stderr_of(&out);
    assert!(err.contains("moments:"), "stderr: {err}");
    assert!(err.contains("within |z| <="), "stderr: {err}");
    let text = stdout_of(&out);
    // Every report contributes value, analytic, and z rows.
    assert!(text.contains(",mean_signal,"), "{text}");
    assert!(text.contains(",mean_signal_analytic,"), "{text}");
    assert!(text.contains(",mean_signal_z,"), "{text}");
}

#[test]
fn scenario_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("demo.toml");
    std::fs::write(
        &path,
        r#"
[case.demo]
precoder = "mrt"
cells = 3
corr = 0.6
cross_gain = 0.3
m_grid = [50, 100]
lp = 1
et_coeff = 10.0
et_exp = 0.0
rho_coeff = 10.0
rho_exp = 0.0
k_coeff = 2.0
k_exp = 0.0
k_floor = true
"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();

    let out = run(&["analytic", "--scenario", p]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("demo,50,effective_sinr,"), "{text}");
    assert!(text.contains("demo,100,effective_sinr,"), "{text}");

    // Grid override narrows the sweep to the requested points.
    let out = run(&["analytic", "--scenario", p, "--case", "demo", "--m-grid", "60"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("demo,60,effective_sinr,"), "{text}");
    assert!(!text.contains("demo,50,"), "{text}");
}

#[test]
fn malformed_scenario_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.toml");
    std::fs::write(&path, "[case.broken]\nprecoder = \"warp\"\n").unwrap();
    let out = run(&["analytic", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr_of(&out));
    assert!(stderr_of(&out).contains("error:"));
}

#[test]
fn missing_scenario_file_is_an_io_error() {
    let out = run(&["analytic", "--scenario", "/nonexistent/nowhere.toml"]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr_of(&out));
    assert!(stderr_of(&out).contains("error:"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = run(&["analytic", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_of(&out).to_lowercase().contains("usage"), "stderr: {}", stderr_of(&out));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = run(&["teleport"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_cleanly() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_of(&out).contains("Usage"));
}

#[test]
fn missing_case_selection_is_a_usage_error() {
    let out = run(&["analytic"]);
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr_of(&out));
}

#[test]
fn simulate_reports_measured_and_analytic_sinr() {
    let out = run(&[
        "simulate", "--preset", "table1", "--case", "6", "--m-grid", "100", "--trials", "100",
        "--seed", "9",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    let sim_row = text
        .lines()
        .find(|l| l.contains(",effective_sinr_sim,"))
        .expect("simulated SINR row");
    let value: f64 = sim_row.split(',').nth(3).unwrap().parse().unwrap();
    assert!(value.is_finite() && value > 0.0);
    // Simulated rows carry a standard error; analytic rows do not.
    assert!(!sim_row.ends_with(','), "{sim_row}");
    let analytic_row = text
        .lines()
        .find(|l| l.contains(",effective_sinr_analytic,"))
        .expect("analytic SINR row");
    assert!(analytic_row.ends_with(','), "{analytic_row}");
}

#[test]
fn seed_controls_reproducibility() {
    let args = [
        "simulate", "--preset", "table1", "--case", "6", "--m-grid", "100", "--trials", "100",
        "--seed", "11",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(stdout_of(&a), stdout_of(&b), "same seed must reproduce bitwise");

    let mut other: Vec<&str> = args.to_vec();
    other[10] = "12";
    let c = run(&other);
    assert_ne!(stdout_of(&a), stdout_of(&c), "different seed must differ");

    // The seed can come from the environment as well.
    let d = Command::new(env!("CARGO_BIN_EXE_mimo-lab"))
        .args(&args[..args.len() - 2])
        .env("MIMO_LAB_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(stdout_of(&a), String::from_utf8(d.stdout).unwrap());
}

#[test]
fn reproduce_writes_complete_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("data");
    let out = run(&[
        "reproduce", "--preset", "table2", "--out", out_dir.to_str().unwrap(), "--trials", "100",
        "--seed", "5", "--svg",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    for ext in ["csv", "json", "svg"] {
        let path = out_dir.join(format!("table2.{ext}"));
        assert!(path.exists(), "missing {}", path.display());
        assert!(std::fs::metadata(&path).unwrap().len() > 0);
    }
    let announced = stderr_of(&out);
    assert!(announced.contains("wrote"), "stderr: {announced}");

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("table2.json")).unwrap())
            .unwrap();
    assert_eq!(json["preset"], "table2");
    assert_eq!(json["trials"], 100);
    assert!(!json["sweeps"].as_array().unwrap().is_empty());

    let csv = std::fs::read_to_string(out_dir.join("table2.csv")).unwrap();
    assert!(csv.starts_with("case_id,M,metric,value,stderr\n"));
    assert!(csv.contains("table2.case04,"), "{}", &csv[..csv.len().min(400)]);
}

#[test]
fn output_file_option_writes_to_disk() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let out = run(&[
        "analytic", "--preset", "table2", "--case", "4", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, include_str!("golden/analytic_table2_case04.csv"));
}

#[test]
fn fit_reports_frozen_verdict_shape() {
    let out = run(&[
        "fit", "--preset", "table1", "--case", "2", "--trials", "150", "--seed", "3",
        "--format", "json",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    let obj = doc.as_object().unwrap();
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        ["applicability", "case_id", "deterministic", "r_s_fitted", "r_s_theoretical"]
    );
    assert_eq!(doc["case_id"], "table1.case02");
    assert_eq!(doc["r_s_theoretical"], 0.0);
    assert!(doc["r_s_fitted"].as_f64().unwrap().is_finite());
}

#[test]
fn json_format_lists_sweeps() {
    let out = run(&[
        "simulate", "--preset", "table1", "--case", "6", "--m-grid", "100", "--trials", "100",
        "--seed", "2", "--format", "json",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).unwrap();
    assert_eq!(doc["command"], "simulate");
    assert_eq!(doc["trials"], 100);
    let sweep = &doc["sweeps"][0];
    assert_eq!(sweep["case_id"], "table1.case06");
    let point = &sweep["rows"][0]["point"];
    assert!(point["effective_sinr_sim"].as_f64().unwrap() > 0.0);
}

/// The golden file itself must stay in sync with the checked-in reference
/// values used across the test suite.
#[test]
fn golden_contains_reference_pins() {
    let golden = include_str!("golden/analytic_table2_case04.csv");
    assert!(golden.contains("table2.case04,100,effective_sinr,1.4393321498824545,\n"));
    assert!(golden.contains("table2.case04,100,rate_lower_bound,1.286486215027259,\n"));
    assert!(golden.contains("table2.case04,100,sum_rate_lower_bound,18.010807010381626,\n"));
    assert!(golden.contains("table2.case04,600,effective_sinr,2.0375128759494245,\n"));
}
