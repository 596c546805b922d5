use serde_json::Value;
use spcert_web::{analyze_json, balance_profile_json, recovery_curve_json};

const HADAMARD: &str = r#"{"source":"hadamard","m":4}"#;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn analyze_hadamard() {
    let v = parse(&analyze_json(HADAMARD).unwrap());
    assert!((v["gamma"].as_f64().unwrap() - 3.0).abs() < 1e-8);
    assert_eq!(v["k1"], 1);
    assert_eq!(v["M"].as_f64(), Some(0.5));
    assert_eq!(v["k2"], 1);
    assert_eq!(v["is_dictionary"], true);
    assert_eq!(v["per_face_values"].as_array().unwrap().len(), 8);
}

#[test]
fn analyze_explicit_matrix() {
    let v = parse(
        &analyze_json(r#"{"source":"matrix","rows":2,"cols":3,"data":[1,0,0,0,1,0]}"#).unwrap(),
    );
    assert!((v["gamma"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert_eq!(v["per_face_values"][0], Value::Null);
    assert_eq!(v["M"], Value::Null);
    assert_eq!(v["is_dictionary"], false);
}

#[test]
fn recovery_curve_is_monotone_at_the_start() {
    let v = parse(&recovery_curve_json(HADAMARD, 20, 1).unwrap());
    let pts = v.as_array().unwrap();
    assert_eq!(pts.len(), 4);
    assert_eq!(pts[0]["success_rate"].as_f64(), Some(1.0));
    assert_eq!(pts[0]["trials"], 20);
}

#[test]
fn balance_profile_of_hadamard() {
    let v = parse(&balance_profile_json(HADAMARD, 3).unwrap());
    assert_eq!(v["k_star"], 1);
    assert_eq!(v["failure_found"], true);
    let levels = v["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 2);
    assert!((levels[0]["max_mu"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-9);
    assert_eq!(levels[1]["supports"], 28);
}

#[test]
fn bad_specs_are_reported() {
    assert!(analyze_json("{").unwrap_err().contains("bad matrix spec"));
    assert!(analyze_json(r#"{"source":"hadamard","m":3}"#).is_err());
    assert!(
        analyze_json(r#"{"source":"gaussian","m":4,"n":40,"seed":1}"#)
            .unwrap_err()
            .contains("columns")
    );
    assert!(recovery_curve_json(HADAMARD, 0, 1).is_err());
}
