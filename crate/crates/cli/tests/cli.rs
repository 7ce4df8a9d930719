use std::io::Write;
use std::process::{Command, Output};

fn orlicz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orlicz")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

const SMALL: [&str; 6] = ["--umin", "0.5", "--umax", "2", "--n", "3"];

#[test]
fn ominus_power_pair_at_one() {
    let mut args = vec!["ominus", "--phi", "pow(2)", "--phi1", "pow(3)", "--format", "json"];
    args.extend(SMALL);
    let o = orlicz(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    let row = v["rows"].as_array().unwrap().iter().find(|r| r["u"] == 1.0).unwrap();
    let value = row["value"].as_f64().unwrap();
    assert!((value - 4.0 / 27.0).abs() < 1e-12, "{value}");
    let s = row["argmax"].as_f64().unwrap();
    assert!((s - 2.0 / 3.0).abs() < 1e-6, "{s}");
    assert_eq!(v["b"], "inf");
}

#[test]
fn identity_pair_is_an_indicator() {
    let o = orlicz(&["ominus", "--phi", "id", "--phi1", "id", "--umin", "0.25", "--umax", "4", "--n", "5", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("u,value,argmax"));
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let u: f64 = f[0].parse().unwrap();
        if u <= 1.0 {
            assert_eq!(f[1].parse::<f64>().unwrap(), 0.0, "{line}");
        } else {
            assert_eq!(f[1], "inf", "{line}");
        }
    }
}

#[test]
fn malformed_expression_points_at_the_error() {
    let o = orlicz(&["ominus", "--phi", "pow(2", "--phi1", "pow(3)"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("pow(2\n     ^"), "{err}");
}

#[test]
fn resolve_classifies() {
    let o = orlicz(&["resolve", "--preset", "l3-l2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("General"), "{text}");
    assert!(text.contains("u^6.00"), "{text}");

    let o = orlicz(&["resolve", "--preset", "trivial", "--format", "json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["classification"], "Trivial");
    assert_eq!(v["triviality"], "TrivialZero");
}

#[test]
fn factorize_verdicts() {
    let v = json(&orlicz(&["factorize", "--preset", "l3-l2", "--format", "json"]));
    assert_eq!(v["verdict"], true);
    assert!(v["C_over_c"].as_f64().unwrap() <= 1.05);

    let v = json(&orlicz(&["factorize", "--phi", "pow(2)", "--phi1", "pow(3)", "--phi2", "pow(4)", "--format", "json"]));
    assert_eq!(v["verdict"], false);

    let o = orlicz(&["factorize", "--preset", "trivial", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdict"], false);
    let diag = v["diagnostics"].as_array().unwrap();
    assert!(diag.iter().any(|d| d.as_str().unwrap().contains("trivial")), "{diag:?}");

    let text = stdout(&orlicz(&["factorize", "--preset", "l3-l2", "--mode", "large"]));
    assert!(text.contains("u0"), "{text}");
}

#[test]
fn factorize_splits_a_table() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "kind finite\n0 0.25 4.0\n1 0.25 0.5\n2 0.5 0.0").unwrap();
    let o = orlicz(&["factorize", "--preset", "l3-l2", "--z", f.path().to_str().unwrap(), "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["product_exact"], true, "{v}");
}

#[test]
fn default_verify_passes() {
    let o = orlicz(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn injected_fault_names_the_property() {
    let o = orlicz(&["verify", "--suite", "truncation", "--inject-fault"]);
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    assert!(err.contains("failing properties") && err.contains("truncation"), "{err}");
}

#[test]
fn runs_are_reproducible() {
    let a = orlicz(&["verify", "--suite", "holder", "--trials", "300", "--seed", "7", "--format", "json"]);
    let b = orlicz(&["verify", "--suite", "holder", "--trials", "300", "--seed", "7", "--format", "json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    json(&a);

    let args = ["ominus", "--preset", "l1-exp", "--n", "257", "--format", "csv"];
    assert_eq!(orlicz(&args).stdout, orlicz(&args).stdout);
}

#[test]
fn norm_reads_tables() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "# cell_id measure value\n0 0.5 2.0\n1 0.5 0.0").unwrap();
    let o = orlicz(&["norm", "--phi", "pow(2)", "--table", f.path().to_str().unwrap(), "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let n = json(&o)["norm"].as_f64().unwrap();
    assert!((n - 2.0f64 * 0.5f64.sqrt()).abs() < 1e-9, "{n}");

    let v = json(&orlicz(&["norm", "--phi", "pow(2)", "--measure", "0.25", "--format", "json"]));
    assert!((v["norm"].as_f64().unwrap() - 0.5).abs() < 1e-9);

    writeln!(f, "7 0.5 1.0").unwrap();
    let o = orlicz(&["norm", "--phi", "pow(2)", "--table", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
}

#[test]
fn parse_prints_canonical_form() {
    let o = orlicz(&["parse", "cut( pow(2,  0.5), 1,inf )", "--format", "json"]);
    assert!(o.status.success());
    let row = &json(&o)["rows"][0];
    assert_eq!(row["expr"], "cut(pow(2, 0.5), 1, inf)");
    assert_eq!(row["b"], 1.0);

    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "dilate(expm1(), 2)").unwrap();
    let o = orlicz(&["parse", "--file", f.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("dilate(expm1(), 2)"));
}

#[test]
fn bad_arguments_exit_with_two() {
    assert_eq!(orlicz(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(orlicz(&["factorize", "--preset", "l3-l2", "--space", "bogus:3"]).status.code(), Some(2));
    assert_eq!(orlicz(&["ominus", "--preset", "no-such-preset"]).status.code(), Some(2));
}
