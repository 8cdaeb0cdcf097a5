//! Functional tests for the `diskdil` binary: table contents against closed
//! forms, config/flag precedence, validation messages, and exit codes.

use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use diskdil::ingest::render_sample_csv;
use diskdil::mapping::Mapping;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_diskdil"))
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

/// Splits a CSV record, honouring double-quoted cells.
fn split_csv(line: &str) -> Vec<String> {
    let mut cells = Vec::new();
    let mut cell = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '"' if quoted && chars.peek() == Some(&'"') => {
                cell.push('"');
                chars.next();
            }
            '"' => quoted = !quoted,
            ',' if !quoted => cells.push(std::mem::take(&mut cell)),
            _ => cell.push(c),
        }
    }
    cells.push(cell);
    cells
}

fn data_rows(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()));
    text.lines().skip(1).map(split_csv).collect()
}

#[test]
fn profile_identity_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .args(["profile", "--map", "identity", "--r-count", "5", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr_of(&output));

    let rows = data_rows(&dir.path().join("profile.csv"));
    assert_eq!(rows.len(), 5);
    for cells in &rows {
        assert_eq!(cells[0], "identity");
        let p: f64 = cells[1].parse().unwrap();
        let r: f64 = cells[2].parse().unwrap();
        let length: f64 = cells[3].parse().unwrap();
        let s_green: f64 = cells[4].parse().unwrap();
        let delta: f64 = cells[7].parse().unwrap();
        assert_eq!(p, 2.0);
        assert!((delta - 2.0 * PI * r).abs() < 1e-10, "delta_2({r}) = {delta}");
        assert!((length - 2.0 * PI * r).abs() < 1e-10);
        assert!((s_green - PI * r * r).abs() < 1e-10);
        assert_eq!(cells[9], "0", "no nodes should be masked");
    }
    assert!(dir.path().join("profile.json").is_file());
}

#[test]
fn profile_radial_power_areas_match_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .args(["profile", "--map", "radial-power", "--alpha", "2", "--r-count", "6"])
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr_of(&output));

    for cells in data_rows(&dir.path().join("profile.csv")) {
        let r: f64 = cells[2].parse().unwrap();
        let s_green: f64 = cells[4].parse().unwrap();
        let s_jacobian: f64 = cells[5].parse().unwrap();
        let s_prime: f64 = cells[6].parse().unwrap();
        let expected = PI * r.powi(4);
        assert!((s_green - expected).abs() < 1e-8, "S({r}) = {s_green}");
        assert!((s_jacobian - expected).abs() < 1e-8);
        assert!((s_prime - 4.0 * PI * r.powi(3)).abs() < 1e-7);
    }
}

#[test]
fn validation_error_names_the_field_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never");
    let output = bin()
        .args(["check", "--r-min", "0", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = stderr_of(&output);
    assert!(stderr.contains("grid.r_min"), "stderr: {stderr}");
    assert!(!out.exists(), "output directory created despite invalid config");
}

#[test]
fn unknown_check_name_is_rejected() {
    let output = bin()
        .args(["check", "--checks", "lemma9"])
        .output()
        .unwrap();
    assert!(!output.status.success());
    assert!(stderr_of(&output).contains("lemma9"));
}

#[test]
fn checks_flag_restricts_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .args(["check", "--map", "identity", "--checks", "lemma1", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr_of(&output));

    let rows = data_rows(&dir.path().join("checks.csv"));
    assert!(!rows.is_empty());
    for cells in &rows {
        assert_eq!(cells[1], "lemma1");
        assert_eq!(cells[9], "true");
    }
}

#[test]
fn schwarz_radial_power_functional_is_unity() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .args(["schwarz", "--map", "radial-power", "--alpha", "2", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr_of(&output));

    let rows = data_rows(&dir.path().join("schwarz.csv"));
    assert_eq!(rows.len(), 48);
    for cells in &rows {
        let functional: f64 = cells[3].parse().unwrap();
        assert!((functional - 1.0).abs() < 1e-9, "functional = {functional}");
    }
    assert!(stdout_of(&output).contains("proxy liminf"));
}

#[test]
fn ingest_verify_accepts_a_clean_grid() {
    let dir = tempfile::tempdir().unwrap();
    let radii: Vec<f64> = (1..=24).map(|k| k as f64 / 24.0).collect();
    let csv = render_sample_csv(&Mapping::identity(), &radii, 64).unwrap();
    let path = dir.path().join("clean.csv");
    std::fs::write(&path, csv).unwrap();

    let output = bin().arg("ingest-verify").arg(&path).output().unwrap();
    assert!(output.status.success(), "{}", stdout_of(&output));
    let stdout = stdout_of(&output);
    assert!(stdout.contains("24 radii x 64 angles"), "{stdout}");
    assert!(stdout.contains("regularity: pass"), "{stdout}");
}

#[test]
fn ingest_verify_flags_an_orientation_reversing_grid() {
    let dir = tempfile::tempdir().unwrap();
    // f(z) = conj(z): every finite-difference Jacobian is -1.
    let mut csv = String::from("r,theta,re,im\n");
    for k in 1..=16 {
        let r = k as f64 / 16.0;
        for j in 0..32 {
            let theta = std::f64::consts::TAU * j as f64 / 32.0;
            csv.push_str(&format!(
                "{r:.16e},{theta:.16e},{:.16e},{:.16e}\n",
                r * theta.cos(),
                -r * theta.sin()
            ));
        }
    }
    let path = dir.path().join("reversed.csv");
    std::fs::write(&path, csv).unwrap();

    let output = bin().arg("ingest-verify").arg(&path).output().unwrap();
    assert_eq!(output.status.code(), Some(1));
    let stdout = stdout_of(&output);
    assert!(stdout.contains("regularity: fail"), "{stdout}");
    assert!(stdout.contains("violation: J ="), "{stdout}");
}

#[test]
fn out_dir_env_var_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .args(["profile", "--map", "identity", "--r-count", "3"])
        .env("DISKDIL_OUT", dir.path())
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr_of(&output));
    assert!(dir.path().join("profile.csv").is_file());
}

#[test]
fn config_file_is_read_and_flags_override_it() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        r#"
p = [3.0]

[map]
family = "identity"

[grid]
r_min = 0.1
r_max = 0.9
count = 7

[output]
formats = ["csv"]
"#,
    )
    .unwrap();

    let from_file = dir.path().join("from_file");
    let output = bin()
        .args(["profile", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&from_file)
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr_of(&output));
    let rows = data_rows(&from_file.join("profile.csv"));
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|cells| cells[1].parse::<f64>().unwrap() == 3.0));
    assert!(
        !from_file.join("profile.json").exists(),
        "json written despite formats = [\"csv\"]"
    );

    let overridden = dir.path().join("overridden");
    let output = bin()
        .args(["profile", "--config"])
        .arg(&cfg)
        .args(["--p", "2", "--r-count", "4", "--out"])
        .arg(&overridden)
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", stderr_of(&output));
    let rows = data_rows(&overridden.join("profile.csv"));
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|cells| cells[1].parse::<f64>().unwrap() == 2.0));
}

#[test]
fn selftest_passes() {
    let output = bin().arg("selftest").output().unwrap();
    assert!(output.status.success(), "{}", stdout_of(&output));
    let stdout = stdout_of(&output);
    assert!(stdout.contains("selftest suite:"), "{stdout}");
    assert!(stdout.ends_with("[pass]\n") || stdout.contains("[pass]"), "{stdout}");
}
