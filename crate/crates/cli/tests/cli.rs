//! End-to-end checks of the command engine: fixture parsing, exit-code
//! mapping, report determinism, and the values the shipped fixtures
//! produce.

use entrospace_cli::{exit_code, render_human, render_json, run_str, Command, Options};

fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).expect("fixture file")
}

fn run(cmd: Command, name: &str) -> (entrospace_cli::Report, i32) {
    let outcome = run_str(cmd, &fixture(name), &Options::default());
    let code = exit_code(&outcome);
    (outcome.expect("command runs"), code)
}

#[test]
fn full_shift_entropy_is_exact_log3() {
    let (report, code) = run(Command::Entropy, "full-shift-3.json");
    assert_eq!(code, 0);
    let rel = report.analyses.iter().find(|a| a.name == "entropy-relative").unwrap();
    assert_eq!(rel.outcome, "pass");
    let value = rel.data["exact"]["value"].as_f64().unwrap();
    assert!((value - 3f64.ln()).abs() < 1e-12);
    assert_eq!(rel.data["exact"]["reason"], "closed-form");
}

#[test]
fn golden_mean_reports_bound_with_expected_prefix() {
    let (report, code) = run(Command::Entropy, "golden-mean.json");
    assert_eq!(code, 0);
    let rel = report.analyses.iter().find(|a| a.name == "entropy-relative").unwrap();
    assert!(rel.data["exact"].is_null());
    let a_seq = rel.data["a_seq"].as_array().unwrap();
    assert_eq!(a_seq.len(), 32);
    assert!((a_seq[0].as_f64().unwrap() - 2f64.ln()).abs() < 1e-9);
    assert!((a_seq[1].as_f64().unwrap() - 3f64.ln()).abs() < 1e-9);
    assert!((a_seq[2].as_f64().unwrap() - 5f64.ln()).abs() < 1e-9);
    let inf = rel.data["running_inf"].as_f64().unwrap();
    assert!((inf - 0.481212).abs() < 0.01);
}

#[test]
fn forward_shift_stabilizes_to_zero() {
    let (report, code) = run(Command::Entropy, "forward-full-4.json");
    assert_eq!(code, 0);
    let rel = report.analyses.iter().find(|a| a.name == "entropy-relative").unwrap();
    assert_eq!(rel.data["exact"]["reason"], "stabilized");
    assert_eq!(rel.data["exact"]["value"].as_f64().unwrap(), 0.0);
    // Window [0,3] has length 4; stabilization within length + 2.
    assert!(rel.data["stabilized_at"].as_u64().unwrap() <= 6);
}

#[test]
fn check_passes_valid_and_fails_mutated_fixtures() {
    let (_, code) = run(Command::Check, "diamond.json");
    assert_eq!(code, 0);

    let (report, code) = run(Command::Check, "diamond-broken-meet.json");
    assert_eq!(code, 3);
    let failed = report
        .analyses
        .iter()
        .find(|a| a.name.contains("meet refines both factors"))
        .unwrap();
    assert_eq!(failed.outcome, "fail");
    assert!(failed.witness.is_some());

    let (report, code) = run(Command::Check, "diamond-broken-norm.json");
    assert_eq!(code, 3);
    let failed = report
        .analyses
        .iter()
        .find(|a| a.name.contains("antitone"))
        .unwrap();
    assert_eq!(failed.outcome, "fail");
    assert!(failed.witness.is_some());
}

#[test]
fn schema_errors_exit_with_code_2() {
    let outcome = run_str(Command::Check, "{\"schema\": 1}", &Options::default());
    assert_eq!(exit_code(&outcome), 2);
    let outcome = run_str(
        Command::Check,
        "{\"schema\": 7, \"system\": {\"kind\": \"bernoulli\"}}",
        &Options::default(),
    );
    assert_eq!(exit_code(&outcome), 2);
    let outcome = run_str(Command::Check, "not json", &Options::default());
    assert_eq!(exit_code(&outcome), 2);
}

#[test]
fn budget_exhaustion_exits_with_code_4() {
    let opts = Options { budget: Some(3), ..Default::default() };
    let outcome = run_str(Command::Entropy, &fixture("golden-mean.json"), &opts);
    assert_eq!(exit_code(&outcome), 4);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for name in ["full-shift-3.json", "product-shifts.json", "bernoulli-z5.json"] {
        let text = fixture(name);
        let r1 = run_str(Command::Laws, &text, &Options::default()).unwrap();
        let r2 = run_str(Command::Laws, &text, &Options::default()).unwrap();
        assert_eq!(render_json(&r1), render_json(&r2), "{name}");
        assert_eq!(render_human(&r1), render_human(&r2), "{name}");
    }
}

#[test]
fn product_laws_pass() {
    let (report, code) = run(Command::Laws, "product-shifts.json");
    assert_eq!(code, 0, "{report:?}");
    let additivity = report
        .analyses
        .iter()
        .find(|a| a.name.contains("product additivity"))
        .unwrap();
    assert_eq!(additivity.outcome, "pass");
}

#[test]
fn bernoulli_expansivity_certificate() {
    let (report, code) = run(Command::Expansivity, "bernoulli-z5.json");
    assert_eq!(code, 0);
    let gen = report.analyses.iter().find(|a| a.name == "positive-generator").unwrap();
    assert_eq!(gen.outcome, "pass");
    assert_eq!(gen.cases, 3usize.pow(7));
    let ent = report.analyses.iter().find(|a| a.name == "generator-entropy").unwrap();
    assert!((ent.data["value"].as_f64().unwrap() - 5f64.ln()).abs() < 1e-12);
}

#[test]
fn seed_rotates_samples_without_changing_verdicts() {
    let text = fixture("golden-mean.json");
    let base = run_str(Command::Check, &text, &Options::default()).unwrap();
    let seeded =
        run_str(Command::Check, &text, &Options { seed: Some(5), ..Default::default() })
            .unwrap();
    assert_eq!(base.failures, seeded.failures);
}
