use serde_json::{json, Value};
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const COARSE: [&str; 8] = ["--grid-step", "0.05", "--horizon", "20", "--freq-max", "50", "--freq-count", "401"];

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wiener-bezout"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write_spec(dir: &Path, name: &str, spec: &Value) -> String {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string_pretty(spec).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

fn worked() -> Value {
    json!({
        "m": 1, "p": 2,
        "D": [[[1, 0], [0, 0]]],
        "kernel": {"terms": [{"coeff": [[[0, 0], [1, 0]]], "rate": [1, 0]}]}
    })
}

fn square() -> Value {
    json!({
        "m": 1, "p": 1,
        "D": [[[1, 0]]],
        "kernel": {"terms": [{"coeff": [[[0.5, 0]]], "rate": [1, 0]}]}
    })
}

fn solve_into(spec: &str, dir: &Path) {
    let mut args = vec!["solve", spec, "--output", dir.to_str().unwrap()];
    args.extend(COARSE);
    let out = run(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

fn parse_pair(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn check_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(tmp.path(), "g0.json", &worked());
    let mut args = vec!["check", spec.as_str()];
    args.extend(COARSE);
    let out = run(&args);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["lambda_min"].as_f64().unwrap() - 1.0).abs() < 1e-3);
    assert_eq!(v["route_A"], true);
    assert_eq!(v["route_B"], true);

    let mut bad = worked();
    bad["D"] = json!([[[0, 0], [0, 0]]]);
    let spec = write_spec(tmp.path(), "d0.json", &bad);
    let report = tmp.path().join("check.json");
    let mut args = vec!["check", spec.as_str(), "--output", report.to_str().unwrap()];
    args.extend(COARSE);
    assert_eq!(code(&run(&args)), 1);
    let v: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["route_A"], false);
    assert_eq!(v["route_B"], false);

    let broken = tmp.path().join("broken.json");
    fs::write(&broken, "{\"m\": 1,").unwrap();
    assert_eq!(code(&run(&["check", broken.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["check", tmp.path().join("absent.json").to_str().unwrap()])), 2);
    let mut wide = worked();
    wide["m"] = json!(3);
    let spec = write_spec(tmp.path(), "wide.json", &wide);
    assert_eq!(code(&run(&["check", spec.as_str()])), 2);
    assert_eq!(code(&run(&["check", "--grid-step", "-1", spec.as_str()])), 2);
}

#[test]
fn solve_verify_eval_worked_family() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(tmp.path(), "g0.json", &worked());
    let dir = tmp.path().join("bundle");
    solve_into(&spec, &dir);

    let traces = fs::read_to_string(dir.join("traces.csv")).unwrap();
    let mut lines = traces.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    let row: Vec<f64> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect::<Vec<f64>>())
        .find(|r| r[0] == 0.0)
        .expect("omega = 0 sample");
    let r = std::f64::consts::FRAC_1_SQRT_2;
    assert!((row[col("re_Theta_1_1")] + r).abs() < 1e-3);
    assert!((row[col("re_Theta_2_1")] - r).abs() < 1e-3);
    assert!(row[col("im_Theta_1_1")].abs() < 1e-3);

    let out = run(&["verify", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    let csv = fs::read_to_string(dir.join("report.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("check,residual,tolerance,pass"));
    assert_eq!(csv.lines().count(), 8);

    let out = run(&["eval", dir.to_str().unwrap(), "--omega", "0"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let expect = [[1.0, 1.0], [0.0, std::f64::consts::SQRT_2]];
    for (i, row) in expect.iter().enumerate() {
        for (j, want) in row.iter().enumerate() {
            let (re, im) = parse_pair(&v["Y_inv"][i][j]);
            assert!((re - want).abs() < 1e-3 && im.abs() < 1e-3, "Y_inv[{i}][{j}] = {re}");
        }
    }

    let out = run(&["eval", dir.to_str().unwrap(), "--omega", "1e9"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let near = |key: &str, i: usize, j: usize, want: f64| {
        let (re, im) = parse_pair(&v[key][i][j]);
        assert!((re - want).abs() < 1e-6 && im.abs() < 1e-6, "{key}[{i}][{j}] = ({re}, {im})");
    };
    near("G", 0, 0, 1.0);
    near("G", 0, 1, 0.0);
    near("Y", 0, 0, 1.0);
    near("Y", 0, 1, 0.0);
    near("Y", 1, 1, 1.0);
    near("Y_inv", 1, 1, 1.0);
    near("Xi", 0, 0, 1.0);
    near("Xi", 1, 0, 0.0);
    near("Theta", 0, 0, 0.0);
    near("Theta", 1, 0, 1.0);

    assert_eq!(code(&run(&["eval", dir.to_str().unwrap(), "--s", "-1,0"])), 2);
    assert_eq!(code(&run(&["eval", dir.to_str().unwrap(), "--s", "1"])), 2);
    assert_eq!(code(&run(&["eval", dir.to_str().unwrap()])), 2);
    let out = run(&["eval", dir.to_str().unwrap(), "--s", "2,1"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn hand_edited_e_fails_verification() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(tmp.path(), "g0.json", &worked());
    let dir = tmp.path().join("bundle");
    solve_into(&spec, &dir);
    let path = dir.join("solution.json");
    let mut sol: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    sol["pointers"]["e"] = json!([[[0.0, 0.0]], [[1.2, 0.0]]]);
    fs::write(&path, serde_json::to_string(&sol).unwrap()).unwrap();
    assert_eq!(code(&run(&["verify", dir.to_str().unwrap()])), 1);
    let report: Value = serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], false);
    let failed: Vec<&str> = report["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["pass"] == false)
        .map(|e| e["check"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"inner"), "{failed:?}");
    assert!(failed.contains(&"tolokonnikov"), "{failed:?}");
}

#[test]
fn missing_or_corrupt_bundle_is_input_error() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["verify", tmp.path().to_str().unwrap()])), 2);
    fs::write(tmp.path().join("solution.json"), "[]").unwrap();
    assert_eq!(code(&run(&["verify", tmp.path().to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["eval", tmp.path().to_str().unwrap(), "--omega", "0"])), 2);
}

#[test]
fn zero_kernel_and_square_case() {
    let tmp = tempfile::tempdir().unwrap();
    let mut zero = worked();
    zero["kernel"] = json!({"terms": []});
    let spec = write_spec(tmp.path(), "zero.json", &zero);
    let dir = tmp.path().join("zero");
    solve_into(&spec, &dir);
    let y = fs::read_to_string(dir.join("y.csv")).unwrap();
    let mut rows = 0;
    for line in y.lines().skip(1) {
        for x in line.split(',').skip(1) {
            assert_eq!(x.parse::<f64>().unwrap(), 0.0);
        }
        rows += 1;
    }
    assert!(rows > 0);

    let spec = write_spec(tmp.path(), "square.json", &square());
    let dir = tmp.path().join("square");
    solve_into(&spec, &dir);
    let traces = fs::read_to_string(dir.join("traces.csv")).unwrap();
    assert!(!traces.lines().next().unwrap().contains("Theta"));
    let sol: Value = serde_json::from_str(&fs::read_to_string(dir.join("solution.json")).unwrap()).unwrap();
    assert!(sol["note"].as_str().unwrap().contains("square"));
    let out = run(&["verify", dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    let anti = report["entries"].as_array().unwrap().iter().find(|e| e["check"] == "anticausality").unwrap();
    assert_eq!(anti["pass"], true);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(tmp.path(), "g0.json", &worked());
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    solve_into(&spec, &a);
    let mut args = vec!["solve", spec.as_str(), "--output", b.to_str().unwrap()];
    args.extend(COARSE);
    let out = bin().args(&args).env("WIENER_BEZOUT_THREADS", "1").output().unwrap();
    assert_eq!(code(&out), 0);
    for dir in [&a, &b] {
        assert_eq!(code(&run(&["verify", dir.to_str().unwrap(), "--tol", "1e-3"])), 0);
    }
    for name in ["solution.json", "y.csv", "traces.csv", "report.json", "report.csv"] {
        let (x, y) = (fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap());
        assert!(x == y, "{name} differs between runs");
    }
}

#[test]
fn thread_variable_is_validated() {
    let out = bin().args(["demo"]).env("WIENER_BEZOUT_THREADS", "abc").output().unwrap();
    assert_eq!(code(&out), 2);
    let out = bin().args(["demo"]).env("WIENER_BEZOUT_THREADS", "0").output().unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn demo_emits_a_loadable_problem() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("demo");
    assert_eq!(code(&run(&["demo", "--output", dir.to_str().unwrap()])), 0);
    let expected: Value = serde_json::from_str(&fs::read_to_string(dir.join("expected.json")).unwrap()).unwrap();
    let (re, _) = parse_pair(&expected["theta_at_0"][0][0]);
    assert!((re + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    let problem = dir.join("problem.json");
    let mut args = vec!["check", problem.to_str().unwrap()];
    args.extend(COARSE);
    assert_eq!(code(&run(&args)), 0);

    let out = run(&["demo", "--b", "2", "--c", "3"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["expected"]["a"].as_f64().unwrap() - 13f64.sqrt()).abs() < 1e-12);
    assert_eq!(v["problem"]["p"], 2);
    assert_eq!(code(&run(&["demo", "--b", "-1"])), 2);
}

#[test]
fn full_verification_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = write_spec(tmp.path(), "g0.json", &worked());
    let dir = tmp.path().join("bundle");
    let out = run(&["solve", &spec, "--output", dir.to_str().unwrap(), "--grid-step", "0.02", "--horizon", "20"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["verify", dir.to_str().unwrap(), "--full"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    let checks: Vec<&str> = report["entries"].as_array().unwrap().iter().map(|e| e["check"].as_str().unwrap()).collect();
    assert_eq!(
        checks,
        [
            "bezout",
            "gy_equals_d",
            "inner",
            "tolokonnikov",
            "winding",
            "kernel_identity",
            "anticausality",
            "pythagoras",
            "decomposition",
            "kappa_bounds",
            "hankel_rank",
            "schur_route"
        ]
    );
}
