//! Every command's JSON report must validate against the published schema,
//! and every rational inside it must follow the `{exact, decimal}`
//! convention with the decimal string reproducible by exact long division.

use std::process::Command;

use fuzzy_potts::rational::{decimal_string, exact_string, parse_rational};
use serde_json::Value;

fn schema() -> Value {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../schemas/report.schema.json"
    );
    let text = std::fs::read_to_string(path).expect("schema file exists");
    serde_json::from_str(&text).expect("schema file is JSON")
}

fn report_for(args: &[&str]) -> Value {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fuzzy-potts"));
    cmd.args(args);
    for name in [
        "FUZZY_POTTS_MAX_EDGES",
        "FUZZY_POTTS_MAX_PA_VERTICES",
        "FUZZY_POTTS_MAX_JOINT_BITS",
    ] {
        cmd.env_remove(name);
    }
    let output = cmd.output().expect("binary runs");
    let stderr = String::from_utf8_lossy(&output.stderr).into_owned();
    assert_eq!(
        output.status.code(),
        Some(0),
        "{args:?} failed: {stderr}"
    );
    serde_json::from_str(&String::from_utf8(output.stdout).unwrap())
        .expect("stdout is one JSON document")
}

/// Interpret the subset of JSON Schema the published schema uses:
/// `type`, `const`, `enum`, `required`, `properties`, and
/// `additionalProperties: false`. Annotations are ignored.
fn validate(schema: &Value, instance: &Value, path: &str, errors: &mut Vec<String>) {
    if let Some(expected) = schema.get("type").and_then(Value::as_str) {
        let actual = match instance {
            Value::Null => "null",
            Value::Bool(_) => "boolean",
            Value::Number(_) => "number",
            Value::String(_) => "string",
            Value::Array(_) => "array",
            Value::Object(_) => "object",
        };
        let ok = actual == expected || (expected == "integer" && actual == "number");
        if !ok {
            errors.push(format!("{path}: expected type {expected}, got {actual}"));
            return;
        }
    }
    if let Some(constant) = schema.get("const") {
        if instance != constant {
            errors.push(format!("{path}: expected const {constant}, got {instance}"));
        }
    }
    if let Some(choices) = schema.get("enum").and_then(Value::as_array) {
        if !choices.contains(instance) {
            errors.push(format!("{path}: {instance} is not one of the enum values"));
        }
    }
    let properties = schema.get("properties").and_then(Value::as_object);
    if let Value::Object(map) = instance {
        if let Some(required) = schema.get("required").and_then(Value::as_array) {
            for key in required {
                let key = key.as_str().expect("required entries are strings");
                if !map.contains_key(key) {
                    errors.push(format!("{path}: missing required key `{key}`"));
                }
            }
        }
        if schema.get("additionalProperties") == Some(&Value::Bool(false)) {
            for key in map.keys() {
                if properties.map_or(true, |p| !p.contains_key(key)) {
                    errors.push(format!("{path}: unexpected key `{key}`"));
                }
            }
        }
        if let Some(properties) = properties {
            for (key, subschema) in properties {
                if let Some(value) = map.get(key) {
                    validate(subschema, value, &format!("{path}.{key}"), errors);
                }
            }
        }
    }
}

/// Walk the whole report: any object carrying an `exact` key must be a
/// rational of the published form, and its decimal rendering must be the
/// 12-significant-digit long division of its exact value.
fn check_rationals(rational_schema: &Value, value: &Value, path: &str, errors: &mut Vec<String>) {
    match value {
        Value::Object(map) => {
            if map.contains_key("exact") {
                validate(rational_schema, value, path, errors);
                let (Some(exact), Some(decimal)) = (
                    map.get("exact").and_then(Value::as_str),
                    map.get("decimal").and_then(Value::as_str),
                ) else {
                    errors.push(format!("{path}: exact/decimal must be strings"));
                    return;
                };
                match parse_rational(exact) {
                    Ok(parsed) => {
                        let canonical = exact_string(&parsed);
                        if exact != canonical {
                            errors.push(format!(
                                "{path}: exact `{exact}` is not canonical (expected `{canonical}`)"
                            ));
                        }
                        let expected = decimal_string(&parsed, 12);
                        if decimal != expected {
                            errors.push(format!(
                                "{path}: decimal {decimal} != {expected} for exact {exact}"
                            ));
                        }
                    }
                    Err(err) => {
                        errors.push(format!("{path}: exact `{exact}` does not parse: {err}"))
                    }
                }
            } else {
                for (key, child) in map {
                    check_rationals(rational_schema, child, &format!("{path}.{key}"), errors);
                }
            }
        }
        Value::Array(items) => {
            for (index, child) in items.iter().enumerate() {
                check_rationals(rational_schema, child, &format!("{path}[{index}]"), errors);
            }
        }
        _ => {}
    }
}

#[test]
fn every_command_emits_a_schema_valid_report() {
    let schema = schema();
    let rational_schema = &schema["definitions"]["rational"];
    let invocations: &[(&str, &[&str])] = &[
        ("measure", &["measure", "--family", "k2", "--q", "2", "--alpha", "1/2"]),
        ("check-plc", &["check-plc", "--family", "triangle", "--p", "1/2", "--q", "1/2"]),
        (
            "check-pa",
            &[
                "check-pa",
                "--family",
                "figure1",
                "--m",
                "1",
                "--measure",
                "uniform-forest",
                "--alpha",
                "1/2",
            ],
        ),
        (
            "check-lemma2",
            &["check-lemma2", "--family", "figure1", "--m", "1", "--q", "2", "--alpha", "1/2"],
        ),
        (
            "couple",
            &[
                "couple", "--family", "triangle", "--q", "2", "--x", "0", "--e", "0",
                "--samples", "50", "--seed", "3",
            ],
        ),
        ("figure1", &["figure1", "--m", "3", "--alpha", "1/3"]),
        ("probe-q", &["probe-q", "--qs", "1/2", "--ps", "1/2", "--alphas", "1/2"]),
        ("boundary", &["boundary", "--qs", "2", "--alphas", "1/2"]),
        ("es-check", &["es-check", "--states", "2"]),
        ("corpus", &["corpus"]),
    ];

    let mut errors = Vec::new();
    for (name, args) in invocations {
        let report = report_for(args);
        assert_eq!(
            report["command"].as_str(),
            Some(*name),
            "envelope names the command"
        );
        validate(&schema, &report, name, &mut errors);
        check_rationals(rational_schema, &report, name, &mut errors);
    }
    assert!(errors.is_empty(), "schema violations:\n{}", errors.join("\n"));
}

#[test]
fn the_validator_itself_rejects_malformed_reports() {
    let schema = schema();
    let rational_schema = &schema["definitions"]["rational"];

    let mut errors = Vec::new();
    let missing: Value = serde_json::json!({"schema": "fuzzy-potts-report/1"});
    validate(&schema, &missing, "missing", &mut errors);
    assert!(errors.iter().any(|e| e.contains("required key `command`")));

    errors.clear();
    let stranger: Value = serde_json::json!({
        "schema": "fuzzy-potts-report/1",
        "command": "measure",
        "params": {},
        "result": {},
        "extra": 1
    });
    validate(&schema, &stranger, "stranger", &mut errors);
    assert!(errors.iter().any(|e| e.contains("unexpected key `extra`")));

    errors.clear();
    let wrong_decimal: Value = serde_json::json!({"exact": "1/3", "decimal": "0.25"});
    check_rationals(rational_schema, &wrong_decimal, "wrong", &mut errors);
    assert!(errors.iter().any(|e| e.contains("!=")));

    errors.clear();
    let unreduced: Value = serde_json::json!({"exact": "2/6", "decimal": "0.333333333333"});
    check_rationals(rational_schema, &unreduced, "unreduced", &mut errors);
    assert!(
        errors.iter().any(|e| e.contains("not canonical")),
        "unreduced fractions are rejected: {errors:?}"
    );

    errors.clear();
    let float: Value = serde_json::json!({"exact": "0.5", "decimal": "0.5"});
    check_rationals(rational_schema, &float, "float", &mut errors);
    assert!(
        errors.iter().any(|e| e.contains("does not parse")),
        "floating-point exact strings are rejected: {errors:?}"
    );
}
