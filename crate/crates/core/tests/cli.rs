//! End-to-end checks of the `siftshadow` binary: exit codes, config files,
//! `compare`, CSV headers, and JSON schemas.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use siftshadow::experiments::read_report;

const BIN: &str = env!("CARGO_BIN_EXE_siftshadow");

fn siftshadow(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env("SIFTSHADOW_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn schema(name: &str) -> Value {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn assert_valid(schema_name: &str, instance: &Value) {
    let v = jsonschema::validator_for(&schema(schema_name)).expect("schema compiles");
    let errors: Vec<String> = v.iter_errors(instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema_name}: {errors:?}");
}

/// One invocation per command, with the schema its `result` must satisfy.
const CASES: &[(&str, &[&str])] = &[
    ("sift", &["sift", "--values", "1,-1,1,1", "--H", "1", "--gamma", "0.5", "--gamma-prime", "0.25"]),
    ("sift", &["sift", "--map", "pl_tent(3,1.5)", "--x", "0.2718", "--horizon", "200"]),
    ("shadow", &["shadow", "--tau", "10", "--noise", "1e-12", "--horizon", "200"]),
    ("shadow", &["close", "--x", "0.1428", "--tau", "3"]),
    ("repellers", &["repellers", "--seed", "3", "--max-repellers", "4"]),
    (
        "verify-abnormal",
        &["verify-abnormal", "--map", "bm_cocycle(2,2)", "--word", "01", "--gamma-prime", "0.1", "--gamma-double-prime", "0.5"],
    ),
    ("expansion-fit", &["expansion-fit", "--map", "pl_tent(3,1.5)", "--sample", "repellers"]),
    ("kingman", &["kingman", "--map", "bm_cocycle(2,2)"]),
    ("kingman", &["kingman"]),
];

#[test]
fn every_command_output_matches_its_schema() {
    for (name, args) in CASES {
        let out = siftshadow(args);
        assert_eq!(code(&out), 0, "{args:?}: {}", stderr(&out));
        let report: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_valid("report", &report);
        assert_valid(name, &report["result"]);
    }
}

#[test]
fn reports_read_back_through_the_library() {
    let dir = tempfile::tempdir().unwrap();
    for (i, (_, args)) in CASES.iter().enumerate() {
        let path = dir.path().join(format!("r{i}.json"));
        let mut full: Vec<&str> = args.to_vec();
        let p = path.to_str().unwrap();
        full.extend(["-o", p]);
        let out = siftshadow(&full);
        assert_eq!(code(&out), 0, "{args:?}: {}", stderr(&out));
        let report = read_report(&path).unwrap_or_else(|e| panic!("{args:?}: {e}"));
        assert_eq!(report.library_version, env!("CARGO_PKG_VERSION"));
        assert_eq!(code(&siftshadow(&["compare", p, p])), 0);
    }
}

#[test]
fn sift_example_prints_its_indices() {
    let args = ["sift", "--values", "1,-1,1,1", "--H", "1", "--gamma", "0.5", "--gamma-prime", "0.25"];
    let out = siftshadow(&args);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["result"]["sift"]["indices"], serde_json::json!([1, 4]));
    let mut csv_args = args.to_vec();
    csv_args.extend(["--format", "csv"]);
    assert_eq!(stdout(&siftshadow(&csv_args)), "index\n1\n4\n");
}

#[test]
fn csv_headers_are_stable() {
    let cases: &[(&[&str], &str)] = &[
        (&["shadow", "--tau", "10", "--noise", "1e-12"], "period,point,shadow_distance,suffix_min_average"),
        (&["close", "--x", "0.1428", "--tau", "3"], "period,point,shadow_distance,suffix_min_average"),
        (&["repellers", "--max-repellers", "2"], "period,point,indicator,shadow_distance,hausdorff"),
        (
            &["verify-abnormal", "--map", "bm_cocycle(2,2)", "--word", "01", "--gamma-prime", "0.1", "--gamma-double-prime", "0.5"],
            "period,mean,min_suffix,mean_below,suffixes_above",
        ),
        (&["expansion-fit"], "c,lambda,k_max,samples,expanding"),
        (&["kingman"], "level,horizon,value"),
    ];
    for (args, header) in cases {
        let mut full = args.to_vec();
        full.extend(["--format", "csv"]);
        let out = siftshadow(&full);
        assert_eq!(code(&out), 0, "{args:?}: {}", stderr(&out));
        let text = stdout(&out);
        let mut rows = csv::Reader::from_reader(text.as_bytes());
        assert_eq!(rows.headers().unwrap().iter().collect::<Vec<_>>().join(","), *header);
        let width = header.split(',').count();
        let mut n = 0;
        for r in rows.records() {
            assert_eq!(r.unwrap().len(), width);
            n += 1;
        }
        assert!(n > 0, "{args:?} wrote no rows");
    }
}

#[test]
fn invalid_parameters_exit_with_two() {
    let bad: &[&[&str]] = &[
        &["sift", "--values", "1,1", "--H", "1", "--gammas", "0.5,0.6,0.4"],
        &["sift", "--values", "1,1", "--gamma", "0.5"],
        &["sift", "--map", "nope(1)", "--x", "0.3"],
        &["repellers", "--epsilon=-1"],
        &["expansion-fit", "--sample", "everywhere"],
    ];
    for args in bad {
        let out = siftshadow(args);
        assert_eq!(code(&out), 2, "{args:?}: {}", stderr(&out));
        assert!(stderr(&out).starts_with("error:"), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn solver_failures_exit_with_three() {
    let out = siftshadow(&["repellers", "--map", "neutral_fixed(1)"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    // noise of 1e-5 leaves gaps wider than the planned delta
    let out = siftshadow(&["shadow", "--tau", "25", "--noise", "1e-5"]);
    assert_eq!(code(&out), 3, "{}", stderr(&out));
}

#[test]
fn config_file_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let dup = write(dir.path(), "dup.cfg", "command = sift\nvalues = 1,1\nvalues = 2\n");
    let out = siftshadow(&["run", "--config", dup.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    let junk = write(dir.path(), "junk.cfg", "# comment\ncommand = sift\nbogus line\n");
    let out = siftshadow(&["run", "--config", junk.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    let missing = dir.path().join("absent.cfg");
    assert_eq!(code(&siftshadow(&["run", "--config", missing.to_str().unwrap()])), 2);
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "r.cfg", "command = repellers\nseed = 7\nmax_repellers = 3\n");
    let cfg = cfg.to_str().unwrap();
    let from_run: Value = serde_json::from_slice(&siftshadow(&["run", "--config", cfg, "--seed", "8"]).stdout).unwrap();
    let from_sub: Value = serde_json::from_slice(&siftshadow(&["repellers", "--config", cfg, "--seed", "8"]).stdout).unwrap();
    let direct: Value =
        serde_json::from_slice(&siftshadow(&["repellers", "--seed", "8", "--max-repellers", "3"]).stdout).unwrap();
    assert_eq!(from_run["config"]["seed"], 8);
    assert_eq!(from_run["config"]["max_repellers"], 3);
    assert_eq!(from_run, from_sub);
    assert_eq!(from_run, direct);
}

#[test]
fn compare_reports_differences() {
    let dir = tempfile::tempdir().unwrap();
    let path = |n: &str| dir.path().join(n).to_str().unwrap().to_owned();
    let (a, b, k) = (path("a.json"), path("b.json"), path("k.json"));
    assert_eq!(code(&siftshadow(&["repellers", "--seed", "7", "--max-repellers", "3", "-o", &a])), 0);
    assert_eq!(code(&siftshadow(&["repellers", "--seed", "8", "--max-repellers", "3", "-o", &b])), 0);
    assert_eq!(code(&siftshadow(&["kingman", "-o", &k])), 0);

    assert_eq!(code(&siftshadow(&["compare", &a, &a])), 0);

    let out = siftshadow(&["compare", &a, &b]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("config.seed"), "{text}");
    assert!(text.contains("periods") || text.contains("period"), "{text}");

    // mismatched commands are a schema problem, not a difference
    assert_eq!(code(&siftshadow(&["compare", &a, &k])), 2);
    assert_eq!(code(&siftshadow(&["compare", &a, &path("absent.json")])), 2);
}

#[test]
fn compare_tolerates_tiny_perturbations() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let out = siftshadow(&["kingman", "--map", "bm_cocycle(2,2)", "-o", a.to_str().unwrap()]);
    assert_eq!(code(&out), 0);

    let mut report: Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    let levels = report["result"]["levels"].as_array_mut().expect("levels array");
    let first = levels[0]["value"].as_f64().unwrap();
    levels[0]["value"] = serde_json::json!(first + 1e-12);
    let b = write(dir.path(), "b.json", &serde_json::to_string(&report).unwrap());
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());

    assert_eq!(code(&siftshadow(&["compare", a, b])), 0);
    assert_eq!(code(&siftshadow(&["compare", a, b, "--tol", "1e-14"])), 1);
    let field = siftshadow(&["compare", a, b, "--tol", "1e-14", "--field-tol", "result.levels[0].value=1e-9"]);
    assert_eq!(code(&field), 0, "{}", stdout(&field));
}

#[test]
fn output_file_equals_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("deep/nested/out.json");
    let args = ["expansion-fit", "--map", "pl_tent(3,1.5)"];
    let mut with_file = args.to_vec();
    with_file.extend(["-o", p.to_str().unwrap()]);
    assert_eq!(code(&siftshadow(&with_file)), 0);
    assert_eq!(std::fs::read(&p).unwrap(), siftshadow(&args).stdout);
}
