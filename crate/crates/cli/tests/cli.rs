use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frac-hardy"))
        .args(args)
        .env_remove("FRAC_HARDY_REL_TOL")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON output")
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

fn load_schema(name: &str) -> Value {
    let text = std::fs::read_to_string(schema_dir().join(name)).expect("schema file");
    serde_json::from_str(&text).expect("schema JSON")
}

fn type_ok(ty: &str, v: &Value) -> bool {
    match ty {
        "number" => v.is_number(),
        "integer" => v.is_u64() || v.is_i64(),
        "string" => v.is_string(),
        "null" => v.is_null(),
        "object" => v.is_object(),
        "array" => v.is_array(),
        "boolean" => v.is_boolean(),
        _ => false,
    }
}

/// Checks the subset of JSON Schema used by the shipped schemas.
fn validate(schema: &Value, v: &Value, path: &str) {
    if let Some(r) = schema.get("$ref").and_then(Value::as_str) {
        return validate(&load_schema(r), v, path);
    }
    if let Some(ty) = schema.get("type") {
        let ok = match ty {
            Value::String(t) => type_ok(t, v),
            Value::Array(ts) => ts.iter().any(|t| type_ok(t.as_str().unwrap(), v)),
            _ => panic!("bad type in schema"),
        };
        assert!(ok, "{path}: {v} does not match type {ty}");
    }
    if let Some(Value::Array(options)) = schema.get("enum") {
        assert!(options.contains(v), "{path}: {v} not in {options:?}");
    }
    if let Some(min) = schema.get("minimum").and_then(Value::as_f64) {
        assert!(v.as_f64().unwrap() >= min, "{path}: below minimum");
    }
    if let Value::Object(map) = v {
        if let Some(Value::Array(req)) = schema.get("required") {
            for k in req {
                assert!(map.contains_key(k.as_str().unwrap()), "{path}: missing {k}");
            }
        }
        let props = schema.get("properties").and_then(Value::as_object);
        for (k, x) in map {
            match props.and_then(|p| p.get(k)) {
                Some(sub) => validate(sub, x, &format!("{path}.{k}")),
                None => match schema.get("additionalProperties") {
                    Some(Value::Bool(false)) => panic!("{path}: unexpected key {k}"),
                    Some(sub @ Value::Object(_)) => validate(sub, x, &format!("{path}.{k}")),
                    _ => {}
                },
            }
        }
    }
    if let (Value::Array(items), Some(sub)) = (v, schema.get("items")) {
        for (i, x) in items.iter().enumerate() {
            validate(sub, x, &format!("{path}[{i}]"));
        }
    }
}

#[test]
fn constants_output() {
    let o = run(&["constants", "--N", "3", "--p", "2", "--s", "0.5", "--beta", "0"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    validate(&load_schema("constants.schema.json"), &v, "$");
    assert_eq!(v["gamma0"], 1.0);
    let again = run(&["constants", "--N", "3", "--p", "2", "--s", "0.5", "--beta", "0"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn invalid_parameters_exit_2() {
    assert_eq!(code(&run(&["constants", "--N", "3", "--p", "2", "--s", "2"])), 2);
    assert_eq!(code(&run(&["constants", "--beta", "1.5"])), 2);
    assert_eq!(code(&run(&["verify", "no-such-check"])), 2);
    assert_eq!(code(&run(&["curve", "--gamma-min", "1", "--gamma-max", "0.5"])), 2);
    assert_eq!(code(&run(&["certify", "--q", "0.5"])), 2);
}

fn rows(o: &Output) -> Vec<Vec<f64>> {
    let text = String::from_utf8(o.stdout.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("gamma,lambda,lambda_prime"));
    lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

#[test]
fn curve_shape() {
    let o = run(&["curve", "--steps", "40"]);
    assert_eq!(code(&o), 0);
    let r = rows(&o);
    assert_eq!(r.len(), 41);
    assert_eq!(r[0][1], 0.0);
    let argmax = (0..r.len()).max_by(|&a, &b| r[a][1].total_cmp(&r[b][1])).unwrap();
    // γ₀ = 1 on [0, 2]
    assert!((r[argmax][0] - 1.0).abs() <= 2.0 / 40.0);
    assert_eq!(rows(&run(&["curve", "--steps", "1"])).len(), 2);
    let past = rows(&run(&["curve", "--gamma-min", "1", "--gamma-max", "2.8", "--steps", "4"]));
    assert!(past[3][1] < 0.0 && past[4][1] < 0.0);
}

#[test]
fn exponents_collapse_at_peak() {
    let c = json(&run(&["constants"]));
    let peak = c["lambda_gamma0"].as_f64().unwrap();
    let o = run(&["exponents", "--lambda", &peak.to_string(), "--q", "1.5"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    validate(&load_schema("exponents.schema.json"), &v, "$");
    assert!((v["gamma1"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["gamma1"], v["gamma2"]);
    assert!((v["q_plus"].as_f64().unwrap() - 2.0).abs() < 1e-10);
    let tiny = json(&run(&["exponents", "--lambda", "1e-3"]));
    assert!(tiny["q_plus"].as_f64().unwrap() > 100.0);
    assert_eq!(tiny["p_star_s"], v["p_star_s"]);
    assert_eq!(code(&run(&["exponents", "--lambda", &(1.01 * peak).to_string()])), 2);
}

#[test]
fn verify_reports() {
    let o = run(&["verify", "elementary", "--trials", "10000"]);
    assert_eq!(code(&o), 0);
    validate(&load_schema("report.schema.json"), &json(&o), "$");
    let o = run(&["verify", "hardy", "--trials", "50", "--seed", "7"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    validate(&load_schema("report.schema.json"), &v, "$");
    assert_eq!(v["trials"], 50);
    assert_eq!(v["seed"], 7);
}

#[test]
fn certify_regimes() {
    let sub = run(&["certify", "--q", "4"]);
    assert_eq!(code(&sub), 0);
    let v = json(&sub);
    validate(&load_schema("certificate.schema.json"), &v, "$");
    assert_eq!(v["regime"], "subcritical");
    let q_plus = v["q_plus"].as_f64().unwrap();
    let sup = run(&["certify", "--q", &(q_plus + 0.5).to_string()]);
    assert_eq!(code(&sup), 0);
    assert_eq!(json(&sup)["regime"], "supercritical");
    let crit = run(&["certify", "--q", &q_plus.to_string()]);
    assert_eq!(code(&crit), 3);
    assert!(String::from_utf8_lossy(&crit.stderr).contains("critical"));
}

#[test]
fn tolerance_from_environment() {
    let a = Command::new(env!("CARGO_BIN_EXE_frac-hardy"))
        .args(["constants"])
        .env("FRAC_HARDY_REL_TOL", "-1")
        .output()
        .unwrap();
    assert_eq!(code(&a), 2);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("frac-hardy-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("constants.json");
    let o = run(&["constants", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, run(&["constants"]).stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
