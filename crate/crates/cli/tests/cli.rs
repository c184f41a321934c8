use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tractability")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_column(text: &str, name: &str) -> Vec<String> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn eigs_min_kernel_csv() {
    let out = run(&["eigs", "--family", "sobolev-min", "--count", "2", "--format", "csv"]);
    assert!(out.status.success());
    let lambdas: Vec<f64> = csv_column(&stdout(&out), "lambda").iter().map(|s| s.parse().unwrap()).collect();
    assert!((lambdas[0] - 1.35103388).abs() < 1e-8);
    assert!((lambdas[1] - 0.08521617).abs() < 1e-8);
}

#[test]
fn eigs_tied_korobov_and_cosh() {
    let out = run(&["eigs", "--family", "korobov", "--alpha", "1", "--beta", "1", "--count", "3"]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let values: Vec<f64> = rows.as_array().unwrap().iter().map(|r| r["lambda"].as_f64().unwrap()).collect();
    assert_eq!(values, [1.0, 1.0, 1.0]);

    let out = run(&["eigs", "--family", "sobolev-cosh", "--count", "2", "--format", "csv"]);
    let lambdas = csv_column(&stdout(&out), "lambda");
    assert_eq!(lambdas[0].parse::<f64>().unwrap(), 1.0);
    assert!((lambdas[1].parse::<f64>().unwrap() - 0.091999668).abs() < 1e-9);
}

#[test]
fn density_outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let emit = |name: &str| {
        let path = dir.path().join(name);
        let out = run(&["density", "--samples", "101", "--format", "csv", "--out", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        (std::fs::read(&path).unwrap(), std::fs::read(path.with_extension("svg")).unwrap())
    };
    let (csv_a, svg_a) = emit("a.csv");
    let (csv_b, svg_b) = emit("b.csv");
    assert_eq!(csv_a, csv_b);
    assert_eq!(svg_a, svg_b);
    let text = String::from_utf8(csv_a).unwrap();
    assert!(!text.contains('\r'));
    let g: Vec<f64> = csv_column(&text, "g").iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(g.len(), 101);
    assert!(g.windows(2).all(|w| w[1] > w[0]));
    assert!(String::from_utf8(svg_a).unwrap().contains("<polyline"));
}

#[test]
fn density_json_reports_normalization() {
    let out = run(&["density", "--samples", "11"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((report["l2_norm_sq"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(report["monotonicity"], "increasing");
}

#[test]
fn csv_numbers_round_trip() {
    let csv = stdout(&run(&["eigs", "--count", "6", "--format", "csv"]));
    let json: serde_json::Value = serde_json::from_slice(&run(&["eigs", "--count", "6"]).stdout).unwrap();
    for (text, row) in csv_column(&csv, "lambda").iter().zip(json.as_array().unwrap()) {
        assert_eq!(text.parse::<f64>().unwrap().to_bits(), row["lambda"].as_f64().unwrap().to_bits());
    }
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "family = korobov\nalpha = 1\nbeta = 0.5\ncount = 5\nformat = csv\n").unwrap();
    let out = run(&["eigs", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(csv_column(&stdout(&out), "lambda").len(), 5);
    let out = run(&["eigs", "--config", cfg.to_str().unwrap(), "--count", "2", "--beta", "0.25"]);
    let lambdas = csv_column(&stdout(&out), "lambda");
    assert_eq!(lambdas.len(), 2);
    assert_eq!(lambdas[1].parse::<f64>().unwrap(), 0.25);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["eigs", "--family", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["eigs", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["eigs", "--family", "korobov", "--alpha", "0.4", "--beta", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["density", "--family", "sobolev-cosh"]).status.code(), Some(2));
    assert_eq!(run(&["complexity", "--eps", "1e-9"]).status.code(), Some(3));
    assert_eq!(run(&["classify", "--format", "svg"]).status.code(), Some(2));
}

#[test]
fn complexity_and_classify() {
    let out = run(&["complexity", "--family", "korobov", "--alpha", "1", "--beta", "0.5", "--eps", "0.6", "--d", "1,2"]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows[0]["result"]["count"], 3);
    let out = run(&["classify", "--family", "sobolev-min"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["classification_all"], "qpt-not-pt");
    assert_eq!(report["classification_std"], "curse");
    assert_eq!(report["qpt_exponent"], 1.0);
}

#[test]
fn reproduce_subset_and_negative_control() {
    let out = run(&["reproduce", "--only", "1,3,4,13"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for row in rows.as_array().unwrap() {
        for key in ["criterion_id", "description", "expected", "computed", "tolerance", "pass"] {
            assert!(row.get(key).is_some(), "missing {key}");
        }
        assert_eq!(row["pass"], true);
    }
    let out = run(&["reproduce", "--only", "1,3", "--perturb", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(4));
    let pass = csv_column(&stdout(&out), "pass");
    assert_eq!(pass, ["true", "false"]);
}

#[test]
fn verify_is_seeded_and_accepts_problem_files() {
    let args = ["verify-thm1", "--seed", "5", "--instances", "3", "--m", "4", "--k", "2", "--trials", "20"];
    let a = run(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, run(&args).stdout);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    // Two points, identity Gram matrices, S = diag(1, 0.5) as a 2x2 operator.
    std::fs::write(&path, "2 2\n1 0\n0 1\n1 0\n0 0.5\n1 0\n0 1\n").unwrap();
    let out = run(&["verify-thm1", "--problem", path.to_str().unwrap(), "--n", "1", "--format", "csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let errors = csv_column(&stdout(&out), "error_operator");
    assert_eq!(errors[0].parse::<f64>().unwrap(), 0.5);
    assert!(Path::new(&path).exists());
}
