use serde_json::Value;
use toepkern_web::{maximality, minimal_kernel, outer_modulus};

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn minimal_kernel_of_one_z() {
    let v = parse(minimal_kernel("[1, z]", 32));
    assert_eq!(v["kind"], "Symbol");
    assert_eq!(v["dim"], 1);
    assert!(v["residuals"][0].as_f64().unwrap() < 1e-6);
    assert_eq!(v["singular_values"].as_array().unwrap().len(), 64);
}

#[test]
fn outer_of_two_minus_z() {
    let v = parse(outer_modulus("2 - z"));
    assert!(v["modulus_error"].as_f64().unwrap() < 1e-6);
    assert_eq!(v["winding_number"], 0);
    assert_eq!(v["modulus"].as_array().unwrap().len(), 1024);
}

#[test]
fn maximality_verdicts() {
    assert_eq!(parse(maximality("diag(zbar, zbar)", 16))["status"], "NoMax_DimAtZero");
    assert_eq!(parse(maximality("[[1, -1], [0, 0]]", 16))["status"], "NoMax_ShiftInvariant");
    let v = parse(maximality("zbar^3", 16));
    assert_eq!(v["status"], "HasMax");
    assert_eq!(v["witness"], true);
}

#[test]
fn errors_come_back_as_json() {
    let v = parse(outer_modulus("z +"));
    assert_eq!(v["error"], "ParseError");
    assert_eq!(parse(maximality("zbar", 4096))["error"], "TruncationTooSmall");
}
