use std::io::Write;
use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout)
            .unwrap_or_else(|e| panic!("bad JSON ({e}): {}", self.stdout))
    }
}

fn data(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name);
    root.to_string_lossy().into_owned()
}

fn ellgen(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_ellgen"))
        .args(args)
        .output()
        .expect("spawn ellgen");
    Run {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().unwrap_or(-1),
    }
}

fn temp_json(body: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    f.write_all(body.as_bytes()).unwrap();
    f
}

#[test]
fn sine_taylor_is_odd() {
    let r = ellgen(&["sine", "--taylor", "9"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let doc = r.json();
    let t = &doc["results"]["taylor"];
    assert_eq!(t["even_coefficients_zero"], true);
    let c = t["series"]["coefficients"].as_array().unwrap();
    assert_eq!(c.len(), 10);
    assert!((c[1][0].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((c[3][0].as_f64().unwrap() - 3.4375929086492247).abs() < 1e-8);
}

#[test]
fn sine_vanishes_at_origin() {
    let r = ellgen(&["sine", "--eval", "0,0"]);
    assert_eq!(r.code, 0);
    let v = &r.json()["results"]["eval"][0]["value"];
    assert_eq!(v[0].as_f64().unwrap(), 0.0);
    assert_eq!(v[1].as_f64().unwrap(), 0.0);
}

#[test]
fn sine_period_checks_pass_on_skew_lattice() {
    let r = ellgen(&["--lattice", &data("skew.json"), "sine", "--check-periods"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.json()["input_digest"]["lattice"].as_str().unwrap().len() == 64);
}

#[test]
fn sine_pole_exits_3() {
    let r = ellgen(&["sine", "--eval", "0.5,0"]);
    assert_eq!(r.code, 3);
    let doc = r.json();
    assert_eq!(doc["error"]["kind"], "pole");
    assert_eq!(doc["error"]["exit_code"], 3);
}

#[test]
fn spin_examples_are_rigid() {
    for file in ["s2.json", "s2xs2.json"] {
        let r = ellgen(&["--input", &data(file), "genus", "--rigidity"]);
        assert_eq!(r.code, 0, "{file}: {}", r.stderr);
        assert_eq!(r.json()["results"]["constant"], true, "{file}");
    }
}

#[test]
fn cp2_is_not_rigid() {
    let r = ellgen(&["--input", &data("cp2.json"), "genus", "--rigidity"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.json()["results"]["constant"], false);
}

#[test]
fn excluded_grid_exits_4() {
    let r = ellgen(&[
        "--input",
        &data("s2.json"),
        "genus",
        "--at",
        "0",
        "--at",
        "0.5",
    ]);
    assert_eq!(r.code, 4, "{}", r.stdout);
    assert_eq!(r.json()["error"]["kind"], "grid_exhausted");
}

#[test]
fn bundled_transfer_examples_pass() {
    let r = ellgen(&["transfer"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let doc = r.json();
    assert_eq!(doc["results"]["passed"], true);
    let certs = doc["results"]["certificates"].as_array().unwrap();
    assert_eq!(certs.len(), 3);
    assert!(certs.iter().any(|c| c["certificate"]["order"] == 2));
}

#[test]
fn transfer_sigma_echo() {
    let r = ellgen(&[
        "--input",
        &data("transfer-m5-3.json"),
        "transfer",
        "--order",
        "4",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let c = &r.json()["results"]["certificates"][0];
    assert_eq!(c["sigma_direct"], 0);
    assert_eq!(c["sigma_three_sum"], 0);
    assert_eq!(c["certificate"]["passed"], true);
}

#[test]
fn irrational_alpha_exits_5() {
    let r = ellgen(&[
        "--input",
        &data("transfer-m5-3.json"),
        "transfer",
        "--alpha",
        "0.2718281828459045,0.1",
    ]);
    assert_eq!(r.code, 5, "{}", r.stdout);
    assert_eq!(r.json()["error"]["kind"], "not_torsion");
}

#[test]
fn sheaf_small_cases() {
    for (n, support) in [(1, 1), (2, 4), (3, 9)] {
        let r = ellgen(&["sheaf", "--s2n", &n.to_string()]);
        assert_eq!(r.code, 0);
        let res = &r.json()["results"];
        assert_eq!(res["support_count"], support);
        assert_eq!(res["determinantal_exponents"], serde_json::json!([0, 1]));
        assert_eq!(res["decomposition"]["abel_sum_vanishes"], true);
    }
}

#[test]
fn input_errors_exit_2() {
    let r = ellgen(&["sheaf", "--s2n", "0"]);
    assert_eq!(r.code, 2);

    let r = ellgen(&["genus", "--rigidity"]);
    assert_eq!(r.code, 2, "missing manifold");

    let r = ellgen(&["--input", "/nonexistent/file.json", "genus"]);
    assert_eq!(r.code, 2);

    let r = ellgen(&["frobnicate"]);
    assert_eq!(r.code, 2);
}

#[test]
fn malformed_json_reports_position() {
    let f = temp_json("{\n  \"options\": {\n    \"truncation\": 8,\n  }\n}\n");
    let r = ellgen(&["--input", f.path().to_str().unwrap(), "sine"]);
    assert_eq!(r.code, 2);
    let doc = r.json();
    assert_eq!(doc["error"]["kind"], "input");
    assert_eq!(doc["error"]["line"], 4);
    assert_eq!(doc["error"]["column"], 3);
    assert!(r.stderr.contains("line 4, column 3"));
}

#[test]
fn unknown_fields_are_rejected() {
    let f = temp_json(r#"{"options": {"trunc": 8}}"#);
    let r = ellgen(&["--input", f.path().to_str().unwrap(), "sine"]);
    assert_eq!(r.code, 2);
}

#[test]
fn text_format_goes_to_stdout() {
    let r = ellgen(&["--format", "text", "transfer"]);
    assert_eq!(r.code, 0);
    assert_eq!(
        r.stdout.lines().filter(|l| l.ends_with("passed")).count(),
        3
    );
}

#[test]
fn output_is_deterministic() {
    let cases: [&[&str]; 3] = [
        &["--input", &data("cp2.json"), "genus", "--rigidity"],
        &["sine", "--check-periods", "--seed", "7"],
        &["symfun", "--trials", "20", "--seed", "3"],
    ];
    for args in cases {
        let a = ellgen(args);
        let b = ellgen(args);
        assert_eq!(a.code, 0);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
