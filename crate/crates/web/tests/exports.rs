use multifocal_web::{check_tensor, estimate_round_trip, motion_tensors};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).expect("exports return JSON")
}

#[test]
fn exports_are_deterministic_in_the_seed() {
    assert_eq!(motion_tensors(11, "rational"), motion_tensors(11, "rational"));
    assert_ne!(motion_tensors(11, "rational"), motion_tensors(12, "rational"));
    assert_eq!(estimate_round_trip("trifocal", 4, 0.0), estimate_round_trip("trifocal", 4, 0.0));
}

#[test]
fn page_flow_generate_then_check() {
    let generated = parse(&motion_tensors(2, "float"));
    for key in ["essential", "trifocal"] {
        let report = parse(&check_tensor(&generated[key].to_string(), "float", 1e-9));
        assert_eq!(report["pass"], true, "{key}");
        assert_eq!(report["normalized"], true);
    }
}

#[test]
fn quadrifocal_recovery() {
    let v = parse(&estimate_round_trip("quadrifocal", 6, 0.0));
    assert!(v["align_error"].as_f64().unwrap() <= 1e-6);
    assert_eq!(v["correspondences"], 80);
}
