//! Browser bindings. Every export takes plain values and returns a JSON string;
//! failures come back as `{"error": "..."}` rather than as exceptions.

use multifocal::constraints::{check_all, check_bifocal};
use multifocal::estimation::{add_noise, align_scale, estimate, random_scene, FrameGroup, SceneSpec};
use multifocal::euclidean::{essential, trifocal_euclidean, EuclideanMotion, MotionSampler};
use multifocal::focal::{apply_section, multifocal, FocalTensor, FrameTuple, Section};
use multifocal::invariants::InvariantName;
use multifocal::scalar::FLOAT_TOLERANCE;
use multifocal::{Mode, Rational, Scalar};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

type Outcome = Result<Value, String>;

fn respond(outcome: Outcome) -> String {
    match outcome {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn motion_demo<S: Scalar>(seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = EuclideanMotion::<S>::random(MotionSampler::for_mode(S::MODE), &mut rng).map_err(err)?;
    let b = EuclideanMotion::<S>::random(MotionSampler::for_mode(S::MODE), &mut rng).map_err(err)?;
    let e = essential(&a);
    let e_tensor = FocalTensor::from_data(4, vec![1, 1], e.as_slice().to_vec()).map_err(err)?;
    let i2 = InvariantName::Bifocal.build().map_err(err)?;
    let general = multifocal(&i2, &apply_section(&[a.embed()], Section::Chain).map_err(err)?).map_err(err)?;
    let trifocal = trifocal_euclidean(&a, &b);
    Ok(json!({
        "mode": S::MODE.as_str(),
        "motions": [a.to_json(), b.to_json()],
        "essential": e_tensor.to_json(),
        "general_construction_agrees": general.proportionality(&e_tensor).is_some(),
        "bifocal_report": check_bifocal(&e_tensor, FLOAT_TOLERANCE).map_err(err)?.to_json(),
        "trifocal": trifocal.to_json(),
        "trifocal_report": check_all(&trifocal, FLOAT_TOLERANCE).map_err(err)?.to_json(),
    }))
}

fn parse_mode(mode: &str) -> Result<Mode, String> {
    mode.parse().map_err(err)
}

/// Random Euclidean motions with their essential matrix and trifocal tensor, both checked.
#[wasm_bindgen]
pub fn motion_tensors(seed: u64, mode: &str) -> String {
    respond(parse_mode(mode).and_then(|m| match m {
        Mode::Float => motion_demo::<f64>(seed),
        Mode::Rational => motion_demo::<Rational>(seed),
    }))
}

fn check_text<S: Scalar>(text: &str, tolerance: f64) -> Outcome {
    let v: Value = serde_json::from_str(text).map_err(|e| format!("malformed JSON: {e}"))?;
    let t = FocalTensor::<S>::from_json(v.get("tensor").unwrap_or(&v)).map_err(err)?;
    let report = match t.signature() {
        [2, 1, 2] => check_all(&t, tolerance),
        [1, 1] => check_bifocal(&t, tolerance),
        other => return Err(format!("no constraint families for signature {other:?}")),
    };
    Ok(report.map_err(err)?.to_json())
}

/// Constraint report for a pasted bifocal or trifocal tensor.
#[wasm_bindgen]
pub fn check_tensor(text: &str, mode: &str, tolerance: f64) -> String {
    respond(parse_mode(mode).and_then(|m| match m {
        Mode::Float => check_text::<f64>(text, tolerance),
        Mode::Rational => check_text::<Rational>(text, tolerance),
    }))
}

fn round_trip(invariant: &str, seed: u64, noise: f64) -> Outcome {
    let inv = invariant.parse::<InvariantName>().map_err(err)?.build().map_err(err)?;
    let spec = SceneSpec {
        n_frames: inv.arity(),
        n_points: 120,
        n_lines: 0,
        seed,
        group: FrameGroup::Euclidean,
    };
    let scene = random_scene::<f64>(&spec).map_err(err)?;
    let truth = multifocal(&inv, &FrameTuple::new(scene.frames.clone()).map_err(err)?).map_err(err)?;
    let n = if noise > 0.0 { truth.len() + 20 } else { truth.len() - 1 };
    let mut corrs = scene.correspondences(&inv, n, seed ^ 0x9e37).map_err(err)?;
    if noise > 0.0 {
        add_noise(&mut corrs, noise, seed).map_err(err)?;
    }
    let est = estimate(&inv, &corrs).map_err(err)?;
    Ok(json!({
        "invariant": inv.name(),
        "correspondences": n,
        "noise": noise,
        "align_error": align_scale(&est, &truth).map_err(err)?,
        "estimate": est.to_json(),
    }))
}

/// Synthetic scene, linear recovery from correspondences, and the alignment error.
#[wasm_bindgen]
pub fn estimate_round_trip(invariant: &str, seed: u64, noise: f64) -> String {
    respond(round_trip(invariant, seed, noise))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn motion_tensors_agree_and_pass() {
        for mode in ["float", "rational"] {
            let v = parse(&motion_tensors(3, mode));
            assert_eq!(v["general_construction_agrees"], true, "{mode}");
            assert_eq!(v["bifocal_report"]["pass"], true);
            assert_eq!(v["trifocal_report"]["pass"], true);
        }
        assert!(parse(&motion_tensors(3, "complex"))["error"].is_string());
    }

    #[test]
    fn check_round_trips_generated_tensors() {
        let v = parse(&motion_tensors(1, "rational"));
        let report = parse(&check_tensor(&v["trifocal"].to_string(), "rational", FLOAT_TOLERANCE));
        assert_eq!(report["pass"], true);
        let generic = json!({ "dim": 4, "signature": [1, 1], "data": [[1, 2, 3], [4, 5, 6], [7, 8, 10]] });
        assert_eq!(parse(&check_tensor(&generic.to_string(), "float", FLOAT_TOLERANCE))["pass"], false);
        assert!(parse(&check_tensor("{", "float", FLOAT_TOLERANCE))["error"].is_string());
    }

    #[test]
    fn estimation_recovers_the_tensor() {
        for inv in ["bifocal", "trifocal"] {
            let v = parse(&estimate_round_trip(inv, 5, 0.0));
            assert!(v["align_error"].as_f64().unwrap() <= 1e-6, "{inv}");
        }
        let noisy = parse(&estimate_round_trip("bifocal", 5, 1e-3));
        assert!(noisy["align_error"].as_f64().unwrap() > 0.0);
        assert!(parse(&estimate_round_trip("pentafocal", 5, 0.0))["error"].is_string());
    }
}
