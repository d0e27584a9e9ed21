//! End-to-end runs of the torsolve binary on small configurations.

use std::path::Path;
use std::process::{Command, Output};

fn torsolve(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torsolve"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn small_rect_config(extra_schedule: &str) -> String {
    format!(
        r#"
[geometry]
shape = "rectangle"
b = 5.0
h = 10.0
n_elements = 64
m_target = 72

[material]
mode = "homogeneous"
e = 210600.0
nu = 0.3
sigma_y = 24.0
alpha = 0.0

[solver]
c = 0.1

{extra_schedule}

[output]
dir = "out"
"#
    )
}

#[test]
fn solve_in_the_elastic_range_writes_exact_columns() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("run.toml"), small_rect_config("")).unwrap();
    let out = torsolve(
        &["solve", "--config", "run.toml", "--theta-ratio", "0.5"],
        tmp.path(),
    );
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let fields = std::fs::read_to_string(tmp.path().join("out/fields.csv")).unwrap();
    assert!(fields.starts_with(
        "x,y,phi,w,gamma_xz,gamma_yz,tau_xz,tau_yz,sigma_eq,eps_eq,E_eff,plastic\n"
    ));
    assert!(!fields.contains('\r'));
    let summary = std::fs::read_to_string(tmp.path().join("out/summary.csv")).unwrap();
    let mut lines = summary.lines();
    assert_eq!(
        lines.next().unwrap(),
        "theta,theta_ratio,Mt,Mt_ratio,plastic_fraction,newton_iters,residual_norm"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[4], "0", "plastic fraction should be zero, got {summary}");
    assert_eq!(row[5], "1", "elastic solve converges immediately");
    let ratio: f64 = row[3].parse().unwrap();
    assert!((ratio - 0.5).abs() < 1e-6, "Mt tracks theta in the elastic range");
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("run.toml"), small_rect_config("")).unwrap();
    let run = |dir: &str| {
        let out = torsolve(
            &[
                "solve",
                "--config",
                "run.toml",
                "--theta-ratio",
                "1.6",
                "--out",
                dir,
            ],
            tmp.path(),
        );
        assert!(out.status.success());
        (
            std::fs::read(tmp.path().join(dir).join("fields.csv")).unwrap(),
            std::fs::read(tmp.path().join(dir).join("summary.csv")).unwrap(),
        )
    };
    let (f1, s1) = run("a");
    let (f2, s2) = run("b");
    assert_eq!(f1, f2);
    assert_eq!(s1, s2);
}

#[test]
fn bad_config_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("run.toml"), "[geometry]\nshape = \"pentagon\"\n").unwrap();
    let out = torsolve(&["solve", "--config", "run.toml", "--theta-ratio", "1.0"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let missing = torsolve(&["solve", "--config", "nope.toml", "--theta-ratio", "1.0"], tmp.path());
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn truncated_sweep_exits_4_with_partial_curve() {
    let tmp = tempfile::tempdir().unwrap();
    // max_iter 1 cannot converge the plastic step
    let config = r#"
[geometry]
shape = "rectangle"
b = 5.0
h = 10.0
n_elements = 64
m_target = 72

[material]
mode = "homogeneous"
e = 210600.0
nu = 0.3
sigma_y = 24.0
alpha = 0.0

[solver]
c = 0.1
max_iter = 1

[schedule]
ratios = [0.5, 2.5]

[output]
dir = "out"
"#;
    std::fs::write(tmp.path().join("run.toml"), config).unwrap();
    let out = torsolve(&["sweep", "--config", "run.toml"], tmp.path());
    assert_eq!(out.status.code(), Some(4), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let curve = std::fs::read_to_string(tmp.path().join("out/curve.csv")).unwrap();
    assert_eq!(curve.lines().count(), 2, "header plus the one converged step");
}

#[test]
fn sweep_writes_per_step_fields() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(
        tmp.path().join("run.toml"),
        small_rect_config("[schedule]\nratios = [0.5, 0.8]"),
    )
    .unwrap();
    let out = torsolve(&["sweep", "--config", "run.toml"], tmp.path());
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(tmp.path().join("out/fields_at_steps/step_001.csv").exists());
    assert!(tmp.path().join("out/fields_at_steps/step_002.csv").exists());
    let curve = std::fs::read_to_string(tmp.path().join("out/curve.csv")).unwrap();
    assert!(curve.starts_with("theta,theta_ratio,Mt,Mt_ratio,plastic_fraction\n"));
}

#[test]
fn elastic_convergence_cells_agree() {
    let tmp = tempfile::tempdir().unwrap();
    let config = r#"
[geometry]
shape = "rectangle"
b = 5.0
h = 10.0
n_elements = 64
m_target = 72

[material]
mode = "homogeneous"
e = 210600.0
nu = 0.3
sigma_y = 1e9

[solver]
c = 0.1

[convergence]
grid = [[64, 72], [64, 110]]
theta_ratio = 0.9

[output]
dir = "out"
"#;
    std::fs::write(tmp.path().join("run.toml"), config).unwrap();
    let out = torsolve(&["convergence", "--config", "run.toml"], tmp.path());
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(tmp.path().join("out/convergence.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "N,M,theta_ratio,Mt_ratio");
    let ratios: Vec<f64> = lines
        .map(|l| l.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert_eq!(ratios.len(), 2);
    // in the elastic regime the moment ratio is insensitive to M
    assert!((ratios[0] - ratios[1]).abs() / ratios[0].abs() < 1e-3);
}

#[test]
fn reference_prints_the_closed_form_moments() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("run.toml"), small_rect_config("")).unwrap();
    let out = torsolve(&["reference", "--config", "run.toml"], tmp.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let m_el: f64 = text
        .lines()
        .find(|l| l.starts_with("M_el,"))
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    let m_pl: f64 = text
        .lines()
        .find(|l| l.starts_with("M_pl,"))
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((m_el - 852.2).abs() / 852.2 < 1e-3);
    assert!((m_pl - 1443.4).abs() / 1443.4 < 1e-3);
}
