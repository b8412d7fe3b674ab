use serde_json::Value;
use std::process::Command;

fn run(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_contact-index"))
        .args(args)
        .output()
        .expect("binary runs");
    let text = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&text).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), v, text)
}

#[test]
fn trace_table_suite_passes() {
    let (code, v, _) = run(&["verify", "--suite", "trace-table"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 12);
    assert_eq!(checks[6]["expected"], "-7/120");
}

#[test]
fn resolvent_trace_routes_agree() {
    let (code, v, _) = run(&["trace", "--symbol", "resolvent(Q, 0.5)"]);
    assert_eq!(code, 0);
    let routes = v["result"]["routes"].as_array().unwrap();
    assert_eq!(routes.len(), 3);
    let want = std::f64::consts::FRAC_PI_2;
    for r in routes {
        assert!((r["value"][0].as_f64().unwrap() - want).abs() < 1e-6);
    }
}

#[test]
fn reports_are_byte_stable() {
    let args = ["verify", "--suite", "vacuum", "--seed", "9"];
    let (_, _, a) = run(&args);
    let (_, _, b) = run(&args);
    assert_eq!(a, b);
    let (_, _, c) = run(&["index", "--example", "automorphism", "--grid", "12"]);
    let (_, _, d) = run(&["index", "--example", "automorphism", "--grid", "12"]);
    assert_eq!(c, d);
}

#[test]
fn automorphism_index_vanishes() {
    let (code, v, _) = run(&["index", "--example", "automorphism", "--grid", "12"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["nearest_integer"], 0);
}

#[test]
fn config_file_is_validated() {
    let dir = std::env::temp_dir().join(format!("ci-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"schema": 1, "grdi": 4}"#).unwrap();
    let (code, v, _) = run(&["trace", "--config", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "Config");

    let wrong = dir.join("wrong.json");
    std::fs::write(&wrong, r#"{"schema": 1, "command": "index"}"#).unwrap();
    let (code, _, _) = run(&["trace", "--config", wrong.to_str().unwrap()]);
    assert_eq!(code, 2);

    let good = dir.join("good.json");
    std::fs::write(&good, r#"{"schema": 1, "command": "trace", "symbol": "resolvent(Q, 1/3)"}"#).unwrap();
    let out = dir.join("report.json");
    let (code, v, text) = run(&["trace", "--config", good.to_str().unwrap(), "--json", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(std::fs::read_to_string(&out).unwrap(), text);
}

#[test]
fn bad_input_exit_codes() {
    assert_eq!(run(&["trace", "--symbol", "Q +"]).0, 2);
    assert_eq!(run(&["index"]).0, 2);
    assert_eq!(run(&["index", "--example", "bott-toeplitz", "--n", "2"]).0, 2);
    assert_eq!(run(&["index", "--example", "bott-toeplitz", "--grid", "4"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
    // a grade of the wrong parity is a mathematical error, not a config error
    let (code, v, _) = run(&["trace", "--symbol", "resolvent(Q, 0.5)", "--grade", "-1"]);
    assert_eq!(code, 1, "{v}");
    assert_eq!(v["error"]["kind"], "NotInAlgebraA");
}
