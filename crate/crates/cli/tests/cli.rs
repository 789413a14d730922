use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ising-edge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_column(text: &str, name: &str) -> Vec<String> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    lines
        .map(|l| l.split(',').nth(i).unwrap().to_owned())
        .collect()
}

const ZC: &str = "0.41421356237309515";

#[test]
fn eval_at_critical_point() {
    let o = run(&["eval", "--z1", ZC, "--z2", ZC, "--m", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("m,deviation,bulk_form1,bulk_form2,total,est_error,warning\n"));
    let total: f64 = csv_column(&text, "total")[0].parse().unwrap();
    assert!(
        (total - (std::f64::consts::FRAC_1_SQRT_2 - 0.0016)).abs() < 1e-4,
        "{total}"
    );
    assert_eq!(csv_column(&text, "warning")[0], "false");
}

#[test]
fn physical_inputs_match_reduced() {
    let tc = 2.0 / (1.0 + 2f64.sqrt()).ln();
    let t = format!("{}", tc / 0.9);
    let a = run(&[
        "eval",
        "--e1",
        "1",
        "--e2",
        "1",
        "--temperature",
        &t,
        "--m",
        "5",
    ]);
    assert_eq!(a.status.code(), Some(0));
    let z1 = format!("{}", (0.9 / tc).tanh());
    let b = run(&["eval", "--z1", &z1, "--z2", &z1, "--m", "5"]);
    let da: f64 = csv_column(&stdout(&a), "deviation")[0].parse().unwrap();
    let db: f64 = csv_column(&stdout(&b), "deviation")[0].parse().unwrap();
    assert!((da - db).abs() < 1e-14);
}

#[test]
fn scan_m_ratio_approaches_one() {
    let o = run(&[
        "scan-m",
        "--z1",
        "0.5",
        "--z2",
        "0.5",
        "--m-start",
        "20",
        "--m-stop",
        "40",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let gaps: Vec<f64> = csv_column(&text, "ratio")
        .iter()
        .map(|r| (r.parse::<f64>().unwrap() - 1.0).abs())
        .collect();
    assert_eq!(gaps.len(), 21);
    assert!(gaps.windows(2).all(|w| w[1] < w[0]));
    assert!(csv_column(&text, "formula")
        .iter()
        .all(|f| f == "low_t_free"));
}

#[test]
fn scan_t_crosses_criticality() {
    let o = run(&[
        "scan-t", "--ratio", "0.5", "--start", "0.8", "--stop", "1.2", "--count", "5", "--m", "5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let a2: Vec<f64> = csv_column(&stdout(&o), "alpha2")
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    assert!(a2[0] < 1.0 && a2[4] > 1.0);
    assert!((a2[2] - 1.0).abs() < 1e-12);
}

#[test]
fn scaling_and_crossover_tables() {
    let o = run(&["scaling", "--start", "0.5", "--stop", "2", "--count", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("m,gap,free,fixed\n"));
    assert_eq!(text.lines().count(), 5);
    let o = run(&["scaling", "--above", "--count", "3"]);
    assert!(stdout(&o).starts_with("m_bar,"));
    let o = run(&["crossover", "--start", "0", "--stop", "1", "--count", "3"]);
    let f = csv_column(&stdout(&o), "f");
    assert_eq!(f[0], "1");
}

#[test]
fn figure1_shape_and_determinism() {
    let a = run(&["figure1"]);
    let b = run(&["figure1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(text.lines().count(), 1 + 501 + 1);
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("zero,0.61005"), "{last}");
}

#[test]
fn json_output_has_meta_and_rows() {
    let o = run(&["figure1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["meta"]["command"], "figure1");
    assert!(v["meta"]["version"].is_string());
    assert_eq!(v["rows"].as_array().unwrap().len(), 502);
    assert_eq!(v["rows"][0]["f"], 1.0);
}

#[test]
fn writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    let o = run(&["crossover", "--count", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert!(text.starts_with("zeta_c_sq,f,minus_f_over_2pi,deviation\n"));
}

#[test]
fn oracle_compare_converges() {
    let o = run(&[
        "oracle-compare",
        "--z1",
        "0.5",
        "--z2",
        "0.5",
        "--n-cols",
        "6,8,10",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let d: Vec<f64> = csv_column(&stdout(&o), "abs_diff")
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
    assert!(d[0] > d[1] && d[1] > d[2]);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["eval", "--z1", "0.5"]).status.code(), Some(1));
    assert_eq!(
        run(&["eval", "--z1", "1.5", "--z2", "0.5"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["eval", "-z", "1"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let args = [
        "eval",
        "--z1",
        "0.5",
        "--z2",
        "0.5",
        "--m",
        "30",
        "--abs-tol",
        "1e-300",
        "--rel-tol",
        "1e-300",
    ];
    let lax = run(&args);
    assert_eq!(lax.status.code(), Some(0));
    assert_eq!(csv_column(&stdout(&lax), "warning")[0], "true");
    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(run(&strict).status.code(), Some(2));
}

#[test]
fn validate_passes() {
    let o = run(&["validate"]);
    let text = stdout(&o);
    assert_eq!(
        text.lines().filter(|l| l.starts_with("[PASS]")).count(),
        14,
        "{text}"
    );
    assert_eq!(o.status.code(), Some(0));
}
