use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_idxf");

fn idxf(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("IDXF_MAX_THREADS").output().expect("spawn idxf")
}

fn ok(args: &[&str]) -> String {
    let o = idxf(args);
    assert_eq!(o.status.code(), Some(0), "idxf {args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

/// Data rows of a CSV table as numbers, skipping metadata and the header.
fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

fn meta<'a>(csv: &'a str, key: &str) -> Option<&'a str> {
    csv.lines().find_map(|l| l.strip_prefix(&format!("# {key}: ")))
}

#[test]
fn verify_all_passes_and_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = idxf(&["verify", "--suite", "all", "--gamma", "2", "--tol", "1e-8", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(doc["pass"], true);
    assert_eq!(doc["gamma"], 2.0);
    assert_eq!(doc["errata"]["omega0"], "1/(2*gamma*(gamma-1))");
    let checks = doc["checks"].as_array().unwrap();
    assert!(checks.len() >= 20);
    for c in checks {
        assert_eq!(c["pass"], true, "{}", c["check"]);
        assert!(c["max_abs_error"].as_f64().unwrap() <= c["tolerance"].as_f64().unwrap());
    }
    assert!(checks.iter().any(|c| c["check"] == "erratum-printed-coherent-state-normalization"));
}

#[test]
fn verify_domain_rules() {
    assert_eq!(idxf(&["verify", "--suite", "transform", "--gamma", "1"]).status.code(), Some(2));
    assert_eq!(idxf(&["verify", "--suite", "all", "--gamma", "1"]).status.code(), Some(2));
    let json = ok(&["verify", "--suite", "bergman", "--gamma", "0.5"]);
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["pass"], true);
}

#[test]
fn transform_of_ground_state_is_one() {
    let csv = ok(&["transform", "--coeffs", "1", "--grid", "1+i;2;-1.5i;0.5-1.2i"]);
    assert_eq!(meta(&csv, "path"), Some("coefficients"));
    assert_eq!(meta(&csv, "convention"), Some("conjugate-linear"));
    let r = rows(&csv);
    assert_eq!(r.len(), 4);
    for row in r {
        assert!((row[2] - 1.0).abs() < 1e-14 && row[3].abs() < 1e-14, "{row:?}");
    }
}

#[test]
fn transform_of_first_eigenstate_at_two() {
    let r = rows(&ok(&["transform", "--coeffs", "0,1", "--grid", "2", "--gamma", "2"]));
    assert_eq!(r[0][..2], [2.0, 0.0]);
    assert!((r[0][2] - 1.0).abs() < 1e-14 && r[0][3].abs() < 1e-14);
}

#[test]
fn linear_flag_conjugates_on_the_real_axis() {
    let grid = "2;0.5;3";
    let default = rows(&ok(&["transform", "--coeffs", "0, i", "--grid", grid]));
    let linear = rows(&ok(&["transform", "--coeffs", "0, i", "--grid", grid, "--linear"]));
    for (d, l) in default.iter().zip(&linear) {
        assert!(d[3].abs() > 0.1);
        assert_eq!((l[2], l[3]), (d[2], -d[3]));
    }
}

#[test]
fn linear_flag_off_the_real_axis() {
    let default = rows(&ok(&["transform", "--coeffs", "0, i", "--grid", "-1.5i"]));
    let linear = rows(&ok(&["transform", "--coeffs", "0, i", "--grid", "1.5i", "--linear"]));
    assert!((linear[0][2] - default[0][2]).abs() < 1e-14);
    assert!((linear[0][3] + default[0][3]).abs() < 1e-14);
}

#[test]
fn sampled_input_matches_coefficients() {
    let table = ok(&["eval", "--what", "eigenfunction", "--n", "1", "--x", "0:40:1601"]);
    let mut text = String::from("# envelope: scale=1.32 rate=1.2 degree=3\n");
    for r in rows(&table) {
        text.push_str(&format!("{:e}, {:e}, {:e}\n", r[1], r[2], r[3]));
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("phi1.txt");
    std::fs::write(&path, text).unwrap();
    let csv = ok(&["transform", "--input", path.to_str().unwrap(), "--grid", "1+i;2;-0.5i"]);
    assert_eq!(meta(&csv, "path"), Some("quadrature"));
    let expected = [(0.5, 0.5), (1.0, 0.0), (0.0, -0.25)];
    for (row, (re, im)) in rows(&csv).iter().zip(expected) {
        assert!((row[2] - re).abs() < 1e-6 && (row[3] - im).abs() < 1e-6, "{row:?}");
    }
}

#[test]
fn sampled_input_with_uncovered_tail_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("short.txt");
    std::fs::write(&path, "# envelope: scale=1 rate=0.1 degree=0\n0.5, 0.5, 0\n1, 0.4, 0\n").unwrap();
    let o = idxf(&["transform", "--input", path.to_str().unwrap(), "--grid", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn kernel_diagonal_at_unit_circle() {
    let r = rows(&ok(&["eval", "--what", "kernel-diagonal", "--gamma", "1", "--grid", "|z|=1"]));
    // Γ(2)·I_1(2)
    assert!((r[0][2] - 1.590_636_854_637_329).abs() < 1e-13);
}

#[test]
fn energy_levels() {
    let csv = ok(&["eval", "--what", "energy", "--n", "0..3"]);
    assert_eq!(meta(&csv, "units"), Some("hbar*omega"));
    let e: Vec<f64> = rows(&csv).iter().map(|r| r[1]).collect();
    assert_eq!(e, [4.0, 6.0, 8.0, 10.0]);
}

#[test]
fn eigenfunction_vanishes_at_origin() {
    let r = rows(&ok(&["eval", "--what", "eigenfunction", "--n", "0", "--x", "0"]));
    assert_eq!((r[0][2], r[0][3]), (0.0, 0.0));
}

#[test]
fn kernel_table_covers_all_pairs() {
    let r = rows(&ok(&["eval", "--what", "kernel", "--grid", "1;i;-1"]));
    assert_eq!(r.len(), 9);
    // K(z, w) = conj(K(w, z))
    assert_eq!(r[1][4], r[3][4]);
    assert_eq!(r[1][5], -r[3][5]);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"what": "energy", "n": "0..1", "gamma": 3}"#).unwrap();
    let csv = ok(&["eval", "--config", cfg.to_str().unwrap(), "--gamma", "1.5"]);
    assert_eq!(meta(&csv, "gamma"), Some("1.5"));
    let e: Vec<f64> = rows(&csv).iter().map(|r| r[1]).collect();
    assert_eq!(e, [3.0, 5.0]);
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(idxf(&["--help"]).status.code(), Some(0));
    assert_eq!(idxf(&["--version"]).status.code(), Some(0));
    assert_eq!(idxf(&[]).status.code(), Some(2));
    assert_eq!(idxf(&["eval", "--what", "bogus"]).status.code(), Some(2));
}
