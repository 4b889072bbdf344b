use std::path::Path;
use std::process::{Command, Output};

fn cpbs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cpbs"))
        .args(args)
        .output()
        .expect("spawn cpbs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

fn assert_one_line_error(o: &Output, kind: &str, code: i32) {
    assert_eq!(o.status.code(), Some(code), "stderr: {}", stderr(o));
    let err = stderr(o);
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    assert!(err.starts_with(&format!("error[{kind}]: ")), "{err}");
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(2)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn spectrum_reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = cpbs(&["spectrum", "--out", d.path().to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    for f in ["spectrum.json", "eigenstates.csv", "projections.csv"] {
        assert_eq!(read(&a.path().join(f)), read(&b.path().join(f)), "{f}");
    }
}

#[test]
fn table_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let o = cpbs(&["spectrum", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let got = read(&dir.path().join("eigenstates.csv"));
    let want = read(&Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/eigenstates.csv"));
    assert_eq!(got.lines().nth(1), want.lines().nth(1));
    let (g, w) = (rows(&got), rows(&want));
    assert_eq!(g.len(), 16);
    assert_eq!(g.len(), w.len());
    for (rg, rw) in g.iter().zip(&w) {
        assert_eq!(rg[0], rw[0]);
        assert_eq!(rg[2], rw[2]);
        for (x, y) in rg.iter().zip(rw).skip(3).chain(std::iter::once((&rg[1], &rw[1]))) {
            let (x, y): (f64, f64) = (x.parse().unwrap(), y.parse().unwrap());
            assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
    }
}

#[test]
fn sweep_reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut names = Vec::new();
    for d in [&a, &b] {
        let o = cpbs(&[
            "dephasing-sweep",
            "--out",
            d.path().to_str().unwrap(),
            "--set",
            "grid.count=101",
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        names = String::from_utf8(o.stdout).unwrap().lines().map(String::from).collect();
    }
    assert_eq!(names.len(), 3);
    for f in ["dephasing_0.01GHz.csv", "dephasing_0.1GHz.csv", "dephasing_1GHz.csv"] {
        let text = read(&a.path().join(f));
        assert_eq!(text, read(&b.path().join(f)), "{f}");
        assert!(text.starts_with("# cpbs "));
        assert_eq!(
            text.lines().nth(1).unwrap(),
            "theta_over_pi,t_hbar_per_jp,t_ns,p_01,p_10,concurrence,covariance"
        );
        assert_eq!(rows(&text).len(), 101);
    }
}

#[test]
fn provenance_records_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let o = cpbs(&[
        "spectrum",
        "--out",
        dir.path().to_str().unwrap(),
        "--set",
        "model.cotunneling=0.004",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let first = read(&dir.path().join("eigenstates.csv"))
        .lines()
        .next()
        .unwrap()
        .to_string();
    assert!(first.contains("\"cotunneling\":0.004"), "{first}");
}

#[test]
fn unknown_key_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "[model]\ngama = 0.1\n").unwrap();
    let o = cpbs(&[
        "spectrum",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_one_line_error(&o, "config", 2);
    assert!(stderr(&o).contains("gama"));
}

#[test]
fn malformed_toml_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "[model]\ndelta = = 1\n").unwrap();
    let o = cpbs(&["spectrum", "--config", cfg.to_str().unwrap()]);
    assert_one_line_error(&o, "config", 2);
    assert!(stderr(&o).contains(":2:"), "{}", stderr(&o));
}

#[test]
fn unknown_section_is_rejected() {
    let o = cpbs(&["spectrum", "--set", "plot.dpi=300"]);
    assert_one_line_error(&o, "config", 2);
}

#[test]
fn degenerate_exchange_is_a_parameter_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = cpbs(&[
        "spectrum",
        "--out",
        dir.path().to_str().unwrap(),
        "--set",
        "model.coulomb_intra=1",
        "--set",
        "model.coulomb_inter=1",
    ]);
    assert_one_line_error(&o, "parameters", 3);
}

#[test]
fn negative_rate_is_rejected() {
    let o = cpbs(&["evolve", "--set", "drain.gamma1=-1e-4"]);
    assert!(matches!(o.status.code(), Some(2) | Some(3)), "{}", stderr(&o));
    assert_eq!(stderr(&o).trim_end().lines().count(), 1);
}

#[test]
fn missing_config_file_is_a_config_error() {
    let o = cpbs(&["spectrum", "--config", "/nonexistent/cpbs.toml"]);
    assert_one_line_error(&o, "config", 2);
}

#[test]
fn unwritable_output_is_an_output_error() {
    let o = cpbs(&["spectrum", "--out", "/proc/cpbs-out"]);
    assert_one_line_error(&o, "output", 4);
}

#[test]
fn unknown_scenario_is_a_usage_error() {
    let o = cpbs(&["plot"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error[usage]: "));
}

#[test]
fn help_exits_zero() {
    let o = cpbs(&["--help"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("dephasing-sweep"));
}

#[test]
fn shipped_config_is_the_benchmark() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/benchmark.toml");
    let parsed = cpbs_core::cli::Settings::parse(&read(&path), &[]).unwrap();
    assert_eq!(parsed, cpbs_core::cli::Settings::default());
}
