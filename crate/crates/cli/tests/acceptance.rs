//! End-to-end acceptance gate for the command-line surface.
//!
//! Plain binary (no test harness) so exactly one pass/fail line is printed,
//! matching the numerical acceptance gate in the core crate.

use std::f64::consts::TAU;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_diskdil"))
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()))
}

/// Splits one CSV record, honouring double-quoted cells (labels may contain
/// commas).
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

fn run_checked(mut cmd: Command) -> Output {
    let output = cmd.output().expect("spawn diskdil");
    assert!(
        output.status.success(),
        "expected success, got {:?}\nstdout:\n{}\nstderr:\n{}",
        output.status.code(),
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
    output
}

/// A sampled identity grid with one angularly displaced node, which turns
/// the finite-difference Jacobian negative in a small neighbourhood.
fn poisoned_identity_csv() -> String {
    let radii: Vec<f64> = (0..24).map(|k| 0.05 + 0.95 * k as f64 / 23.0).collect();
    let nt = 64usize;
    let mut csv = String::from("r,theta,re,im\n");
    for (i, &r) in radii.iter().enumerate() {
        for j in 0..nt {
            let theta = TAU * j as f64 / nt as f64;
            let phase = if i == 12 && j == 20 {
                theta - 2.2 * TAU / nt as f64
            } else {
                theta
            };
            let (im, re) = phase.sin_cos();
            csv.push_str(&format!(
                "{r:.16e},{theta:.16e},{:.16e},{:.16e}\n",
                r * re,
                r * im
            ));
        }
    }
    csv
}

/// 8. `check` exits 0 on the full built-in sweep, outputs are byte-identical
///    across repeated runs, and a regularity-violating sampled map produces
///    a nonzero exit with a located violation row.
fn cli_contract() {
    let dir = tempfile::tempdir().unwrap();
    let run1 = dir.path().join("run1");
    let run2 = dir.path().join("run2");

    let full_suite = |out: &Path| {
        let mut cmd = bin();
        cmd.args(["check", "--p", "2,2.5,3,5", "--plots", "--out"]).arg(out);
        run_checked(cmd)
    };
    let output = full_suite(&run1);
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("result: pass"), "stdout:\n{stdout}");
    assert!(run1.join("checks.csv").is_file());
    assert!(run1.join("checks.json").is_file());
    assert!(run1.join("margins.svg").is_file());

    let csv = String::from_utf8(read(&run1.join("checks.csv"))).unwrap();
    let rows = csv.lines().count();
    assert!(rows > 2000, "only {rows} rows in checks.csv");
    for line in csv.lines().skip(1) {
        let cells = split_csv(line);
        let (pass, gating) = (&cells[9], &cells[10]);
        assert!(
            pass == "true" || gating == "false",
            "gating failure in output: {line}"
        );
    }

    full_suite(&run2);
    for name in ["checks.csv", "checks.json", "margins.svg"] {
        assert_eq!(
            read(&run1.join(name)),
            read(&run2.join(name)),
            "{name} differs between identical runs"
        );
    }

    let poison = dir.path().join("poison.csv");
    std::fs::write(&poison, poisoned_identity_csv()).unwrap();
    let run3 = dir.path().join("run3");
    let output = bin()
        .args(["check", "--map", "sampled", "--sample"])
        .arg(&poison)
        .arg("--out")
        .arg(&run3)
        .output()
        .expect("spawn diskdil");
    assert_eq!(
        output.status.code(),
        Some(1),
        "stdout:\n{}\nstderr:\n{}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
    let csv = String::from_utf8(read(&run3.join("checks.csv"))).unwrap();
    let violation = csv
        .lines()
        .find(|line| split_csv(line).get(1).map(String::as_str) == Some("regularity"))
        .unwrap_or_else(|| panic!("no regularity row in:\n{csv}"));
    let cells = split_csv(violation);
    let r: f64 = cells[3].parse().unwrap();
    let bad_radius = 0.05 + 0.95 * 12.0 / 23.0;
    assert!(
        (r - bad_radius).abs() < 0.1,
        "violation located at r = {r}, expected near {bad_radius}"
    );
    assert!(violation.contains("non-positive Jacobian"), "{violation}");
}

fn main() {
    let outcome = catch_unwind(AssertUnwindSafe(cli_contract));
    match outcome {
        Ok(()) => println!("acceptance criterion 8 (cli contract): pass"),
        Err(panic) => {
            let message = panic
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| panic.downcast_ref::<&str>().copied())
                .unwrap_or("unknown panic");
            println!("acceptance criterion 8 (cli contract): FAIL");
            eprintln!("  -> {message}");
            std::process::exit(1);
        }
    }
}
