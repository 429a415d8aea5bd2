use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use fdia_cli::{cmd_check, cmd_compare, cmd_run, cmd_synthesize, RunSpec};
use fdia_core::attacks::{
    default_initial_posture, parse_attack_pair, preset_scenario, printed_scenario, write_attack_pair,
    AngleUnit, AttackPair, ScenarioKind,
};
use fdia_core::simulator::SimLog;
use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn capture(f: impl FnOnce(&mut Vec<u8>, &mut Vec<u8>) -> i32) -> Output {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = f(&mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn run(dir: &Path, scenario: &str, extra: &[&str]) -> Output {
    let spec = RunSpec {
        scenario: Some(scenario.into()),
        out: dir.to_path_buf(),
        overrides: extra.iter().map(|s| s.to_string()).collect(),
        duration: Some(5.0),
        ..Default::default()
    };
    capture(|o, e| cmd_run(&spec, o, e))
}

fn metric(dir: &Path, name: &str, key: &str) -> f64 {
    let text = fs::read_to_string(dir.join(format!("{name}.metrics.txt"))).unwrap();
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("{key} missing"))
        .parse()
        .unwrap()
}

#[test]
fn run_writes_log_and_metrics() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), "nominal", &[]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let log = SimLog::load_csv(&dir.path().join("nominal.csv")).unwrap();
    assert_eq!(log.len(), 501);
    let header = fs::read_to_string(dir.path().join("nominal.csv")).unwrap();
    let first = header.lines().next().unwrap();
    assert_eq!(first.split(',').count(), 4 * 6 + 27);
    assert_eq!(first, SimLog::header(6).join(","));
    assert_eq!(metric(dir.path(), "nominal", "final_beta_hat"), 1.0);
}

#[test]
fn reflection_metrics_match_nominal_observed_error() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run(dir.path(), "nominal", &[]).code, 0);
    assert_eq!(run(dir.path(), "scenario2", &[]).code, 0);
    let nominal = metric(dir.path(), "nominal", "mean_observed_error_m");
    let attacked = metric(dir.path(), "reflection", "mean_observed_error_m");
    assert!((nominal - attacked).abs() <= 1e-9);
    assert!(metric(dir.path(), "reflection", "mean_actual_error_m") > attacked);
}

#[test]
fn run_rejects_bad_input() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), "mirror", &[]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("unknown scenario"), "{}", out.stderr);
    assert_eq!(run(dir.path(), "nominal", &["gain=3"]).code, 2);
    assert_eq!(run(dir.path(), "nominal", &["kp=-1"]).code, 2);
    assert_eq!(run(dir.path(), "nominal", &["dt=0"]).code, 2);
}

#[test]
fn run_reports_write_failure() {
    let dir = TempDir::new().unwrap();
    let blocker = dir.path().join("not-a-dir");
    fs::write(&blocker, "x").unwrap();
    let out = run(&blocker, "nominal", &[]);
    assert_eq!(out.code, 3, "{}", out.stderr);
}

#[test]
fn run_from_config_file() {
    let dir = TempDir::new().unwrap();
    let spec = RunSpec {
        config: Some(data("wide_face.toml")),
        out: dir.path().to_path_buf(),
        duration: Some(2.0),
        ..Default::default()
    };
    let out = capture(|o, e| cmd_run(&spec, o, e));
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(dir.path().join("wide_face.csv").exists());
    assert_eq!(metric(dir.path(), "wide_face", "duration_s"), 2.0);
}

#[test]
fn compare_flags_equivalence() {
    let dir = TempDir::new().unwrap();
    for s in ["nominal", "scaling", "reflection", "shear", "detectable"] {
        assert_eq!(run(dir.path(), s, &[]).code, 0);
    }
    let p = |s: &str| dir.path().join(format!("{s}.csv"));
    let coordinated = [p("nominal"), p("scaling"), p("reflection"), p("shear")];
    let out = capture(|o, e| cmd_compare(&coordinated, o, e));
    assert_eq!(out.code, 0, "{}", out.stderr);
    let verdicts: Vec<&str> = out.stdout.lines().filter(|l| l.contains(" vs ")).collect();
    assert_eq!(verdicts.len(), 6);
    assert!(verdicts.iter().all(|l| l.ends_with("yes")), "{}", out.stdout);

    let out = capture(|o, e| cmd_compare(&[p("nominal"), p("detectable")], o, e));
    assert_eq!(out.code, 0);
    assert!(out.stdout.lines().any(|l| l.contains(" vs ") && l.ends_with("no")), "{}", out.stdout);

    assert_eq!(capture(|o, e| cmd_compare(&[p("nominal")], o, e)).code, 2);
}

#[test]
fn compare_rejects_grid_mismatch() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run(dir.path(), "nominal", &[]).code, 0);
    assert_eq!(run(dir.path(), "shear", &["dt=0.02"]).code, 0);
    let paths = [dir.path().join("nominal.csv"), dir.path().join("shear.csv")];
    let out = capture(|o, e| cmd_compare(&paths, o, e));
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("grid"), "{}", out.stderr);
}

#[test]
fn check_classifies_attack_files() {
    let out = capture(|o, e| cmd_check(&data("reflection.attack"), None, None, o, e));
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    assert!(out.stdout.contains("undetectable"));

    let out = capture(|o, e| cmd_check(&data("detectable.attack"), None, None, o, e));
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("7.500000e-1"), "{}", out.stdout);
    assert!(out.stdout.contains("30.000000 deg"), "{}", out.stdout);

    let dir = TempDir::new().unwrap();
    let identity = dir.path().join("identity.attack");
    fs::write(&identity, write_attack_pair(&AttackPair::identity(6), AngleUnit::Degrees)).unwrap();
    let out = capture(|o, e| cmd_check(&identity, None, None, o, e));
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.matches("= 0.000000e0").count(), 3, "{}", out.stdout);
}

#[test]
fn check_uses_given_posture() {
    // The listed reflection offset only fixes the default posture.
    let q0 = [5.0, -10.0, 10.0, 0.0, 0.0, 0.0];
    let out = capture(|o, e| cmd_check(&data("reflection.attack"), Some(&q0), None, o, e));
    assert_eq!(out.code, 1);
    let out = capture(|o, e| cmd_check(&data("reflection.attack"), Some(&q0[..3]), None, o, e));
    assert_eq!(out.code, 2);
}

#[test]
fn synthesize_reproduces_presets() {
    let dir = TempDir::new().unwrap();
    let sx = dir.path().join("minus_identity.sx");
    let rows: Vec<String> = (0..6)
        .map(|i| (0..6).map(|j| if i == j { "-1" } else { "0" }).collect::<Vec<_>>().join(" "))
        .collect();
    fs::write(&sx, rows.join("\n")).unwrap();
    let dest = dir.path().join("out.attack");
    let out = capture(|o, e| cmd_synthesize(&sx, None, Some(&dest), AngleUnit::Radians, o, e));
    assert_eq!(out.code, 0, "{}", out.stderr);
    let pair = parse_attack_pair(&fs::read_to_string(&dest).unwrap(), "out").unwrap();
    let expected = preset_scenario(ScenarioKind::Reflection, &default_initial_posture()).unwrap();
    assert_eq!(pair.observable.matrix(), expected.observable.matrix());
    assert_eq!(pair.command.matrix(), expected.command.matrix());
    assert!((pair.observable.offset() - expected.observable.offset()).abs().max() <= 1e-15);
    let printed = printed_scenario(ScenarioKind::Reflection);
    assert!((pair.observable.offset() - printed.observable.offset()).abs().max() <= 1e-12);
    assert_eq!(capture(|o, e| cmd_check(&dest, None, None, o, e)).code, 0);

    let id = dir.path().join("identity.sx");
    let rows: Vec<String> = (0..6)
        .map(|i| (0..6).map(|j| if i == j { "1" } else { "0" }).collect::<Vec<_>>().join(" "))
        .collect();
    fs::write(&id, rows.join("\n")).unwrap();
    let out = capture(|o, e| cmd_synthesize(&id, None, None, AngleUnit::Degrees, o, e));
    assert_eq!(out.code, 0);
    let pair = parse_attack_pair(&out.stdout, "stdout").unwrap();
    assert_eq!(pair.observable, AttackPair::identity(6).observable);
    assert_eq!(pair.command, AttackPair::identity(6).command);
}

#[test]
fn synthesize_output_always_passes_check() {
    let dir = TempDir::new().unwrap();
    let dest = dir.path().join("shear.attack");
    let q0 = [12.0, -30.0, 45.0, 5.0, -20.0, 60.0];
    let out = capture(|o, e| cmd_synthesize(&data("shear.sx"), Some(&q0), Some(&dest), AngleUnit::Degrees, o, e));
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(capture(|o, e| cmd_check(&dest, Some(&q0), None, o, e)).code, 0);
}

#[test]
fn synthesize_refuses_singular_matrix() {
    let dir = TempDir::new().unwrap();
    let sx = dir.path().join("singular.sx");
    fs::write(&sx, "1 2 0\n2 4 0\n0 0 1\n").unwrap();
    let out = capture(|o, e| cmd_synthesize(&sx, Some(&[0.0, 0.0, 0.0]), None, AngleUnit::Degrees, o, e));
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("Condition 1"), "{}", out.stderr);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_fdia");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["check", data("reflection.attack").to_str().unwrap()]), Some(0));
    assert_eq!(status(&["check", data("detectable.attack").to_str().unwrap()]), Some(1));
    assert_eq!(
        status(&["check", data("reflection.attack").to_str().unwrap(), "--q0", "-5,-10,10,0,0,0"]),
        Some(1)
    );
    let dir = TempDir::new().unwrap();
    let d = dir.path().to_str().unwrap();
    assert_eq!(status(&["run", "--scenario", "bogus", "--out", d]), Some(2));
    assert_eq!(status(&["run", "--scenario", "shear", "--out", d, "--duration", "0.5", "--set", "kp=6"]), Some(0));
    assert!(dir.path().join("shear.csv").exists());
}
