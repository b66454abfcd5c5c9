//! CLI acceptance: byte-identical outputs across repeated runs (the
//! determinism criterion) plus exit-code and format contracts.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

fn acopt(args: &[&str], out_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_acopt"))
        .args(args)
        .arg("--out")
        .arg(out_dir)
        .output()
        .expect("binary runs")
}

fn read_all(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    for entry in std::fs::read_dir(dir).expect("output dir exists") {
        let path = entry.expect("dir entry").path();
        if path.is_file() {
            files.insert(
                path.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&path).expect("readable"),
            );
        }
    }
    files
}

/// Criterion 12: figure1, figure2 and montecarlo emit byte-identical files across two
/// runs with identical flags and seed, with parallel trial execution in play.
#[test]
fn criterion_12_outputs_are_byte_identical_across_runs() {
    let specs: [(&str, Vec<&str>); 3] = [
        ("figure1", vec!["--iters", "120", "--nodes", "1200", "figure1"]),
        (
            "figure2",
            vec!["--iters", "150", "--nodes", "1500", "figure2", "--kappas", "4,100"],
        ),
        (
            "montecarlo",
            vec![
                "--iters", "15", "--seed", "3", "montecarlo", "--d", "60", "--n", "120",
                "--trials", "12",
            ],
        ),
    ];
    for (name, args) in specs {
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let out_a = acopt(&args, dir_a.path());
        assert!(out_a.status.success(), "{name} run A failed: {out_a:?}");
        let out_b = acopt(&args, dir_b.path());
        assert!(out_b.status.success(), "{name} run B failed: {out_b:?}");
        let files_a = read_all(dir_a.path());
        let files_b = read_all(dir_b.path());
        assert!(!files_a.is_empty(), "{name} produced no files");
        assert_eq!(files_a, files_b, "{name} outputs differ between runs");
        println!("ACCEPTANCE 12 cli-determinism[{name}]: PASS ({} files identical)", files_a.len());
    }
}

#[test]
fn coeffs_csv_has_documented_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = acopt(&["--iters", "10", "coeffs"], dir.path());
    assert!(out.status.success());
    let text =
        std::fs::read_to_string(dir.path().join("coeffs_mp_sigma1_r0.5.csv")).unwrap();
    assert!(!text.contains('\r'), "LF endings only");
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next().unwrap(), "t,a_t,b_t,momentum,step");
    let first = lines.next().unwrap();
    let fields: Vec<&str> = first.split(',').collect();
    assert_eq!(fields[0], "1");
    assert!(fields[1].is_empty(), "a_t empty at t=1");
    assert!(fields[3].is_empty(), "momentum empty at t=1");
    assert!(fields[2].starts_with("-6.666666666666"), "b1 = -2/3, got {}", fields[2]);
    // 17 significant digits: mantissa d.16-digits + exponent
    assert!(fields[2].contains('e'));
    let mantissa = fields[2].trim_start_matches('-').split('e').next().unwrap();
    assert_eq!(mantissa.len(), 18, "d.dddddddddddddddd, got {mantissa}");
}

#[test]
fn figure1_rows_converge_to_pm_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = acopt(&["figure1"], dir.path());
    assert!(out.status.success(), "{out:?}");
    for name in ["figure1_mp_sigma1_r0.5.csv", "figure1_uniform_1_2.csv"] {
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        let rows: Vec<Vec<&str>> = text
            .lines()
            .filter(|l| !l.starts_with('#'))
            .skip(1)
            .map(|l| l.split(',').collect())
            .collect();
        assert!(rows.iter().all(|r| r.len() == 6), "{name}: ragged rows");
        let last = rows.last().unwrap();
        assert_eq!(last[1], "300");
        let momentum_opt: f64 = last[2].parse().unwrap();
        let momentum_pm: f64 = last[4].parse().unwrap();
        assert!(
            (momentum_opt - momentum_pm).abs() < 1e-2,
            "{name}: gap {} at t=300",
            momentum_opt - momentum_pm
        );
    }
}

#[test]
fn rates_csv_has_summary_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = acopt(&["--iters", "120", "rates", "--dist", "uniform"], dir.path());
    assert!(out.status.success());
    let text =
        std::fs::read_to_string(dir.path().join("rates_uniform_1_2_optimal.csv")).unwrap();
    let summary = text
        .lines()
        .find(|l| l.starts_with("# fitted_rate="))
        .expect("summary line present");
    assert!(summary.contains("pm_rate="));
    assert!(text.lines().any(|l| l.starts_with("t,r_theory,r_integral,method")));
}

#[test]
fn run_emits_error_series() {
    let dir = tempfile::tempdir().unwrap();
    let out = acopt(
        &["--iters", "30", "run", "--method", "polyak", "--d", "40", "--n", "80"],
        dir.path(),
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("run_mp_sigma1_r0.5_polyak.csv")).unwrap();
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 1 + 31); // header + t = 0..=30
}

#[test]
fn file_distribution_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let eigs_path = dir.path().join("spectrum.txt");
    std::fs::write(&eigs_path, "1.0\n1.5\n2.0\n2.5\n3.0\n").unwrap();
    let out = acopt(
        &["--iters", "3", "coeffs", "--dist", "file", "--eigs", eigs_path.to_str().unwrap()],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let text = std::fs::read_to_string(dir.path().join("coeffs_file_spectrum.csv")).unwrap();
    assert!(text.lines().any(|l| l.starts_with("3,")));
}

#[test]
fn file_distribution_keeps_multiplicity_in_problems() {
    let dir = tempfile::tempdir().unwrap();
    let eigs_path = dir.path().join("spectrum.txt");
    // repeated eigenvalues: the sampled problem must stay 4-dimensional
    std::fs::write(&eigs_path, "1.0\n1.0\n2.0\n4.0\n").unwrap();
    let out = acopt(
        &[
            "--iters", "5", "run", "--method", "polyak", "--dist", "file", "--eigs",
            eigs_path.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert!(out.status.success(), "{out:?}");
    let text =
        std::fs::read_to_string(dir.path().join("run_file_spectrum_polyak.csv")).unwrap();
    assert!(text.lines().next().unwrap().contains("d=4"), "{text}");
}

#[test]
fn degenerate_interval_exits_with_bad_args() {
    let dir = tempfile::tempdir().unwrap();
    let out = acopt(&["figure2", "--kappas", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mp_closed_requires_mp_distribution() {
    let dir = tempfile::tempdir().unwrap();
    let out = acopt(
        &["run", "--method", "mp-closed", "--dist", "uniform"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn divergence_exits_with_numeric_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = acopt(
        &[
            "--iters", "400", "run", "--method", "gd", "--step", "5.0", "--dist", "uniform",
            "--lmax", "4", "--d", "10", "--n", "20",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn fast_validation_passes_with_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = acopt(&["validate", "--fast"], dir.path());
    assert_eq!(out.status.code(), Some(0), "stdout: {}", String::from_utf8_lossy(&out.stdout));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.lines().filter(|l| l.starts_with("PASS ")).count() >= 10);
}

#[test]
fn perturbed_alpha_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    let out = acopt(
        &["validate", "--fast", "--perturb-alpha", "0.01"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("FAIL schedule-recurrence-consistency"));
}
