//! Loads an algebra from JSON and runs the Lie-side sweeps on its adjoint
//! representation.

use hkr_verifier::lie::{LieAlgebra, Representation};
use hkr_verifier::verify::{verify_lie, ReportStream};

const AFFINE: &str = r#"{
  "dim": 2,
  "labels": ["x", "y"],
  "brackets": [{"i": 0, "j": 1, "coeffs": ["0", "1"]}]
}"#;

fn main() {
    let alg = LieAlgebra::from_json(AFFINE).expect("valid algebra");
    let reps = vec![("adjoint".to_string(), Representation::adjoint(&alg))];
    let stream = ReportStream::new(verify_lie("affine", &alg, &reps, 3));
    print!("{}", stream.to_text_lines());
    println!("{}", stream.summary());

    let broken = r#"{"dim": 3, "labels": ["a", "b", "c"], "brackets": [
        {"i": 0, "j": 1, "coeffs": ["1", "0", "0"]},
        {"i": 1, "j": 2, "coeffs": ["0", "1", "0"]}]}"#;
    match LieAlgebra::from_json(broken) {
        Ok(_) => println!("unexpectedly valid"),
        Err(e) => println!("rejected: {e}"),
    }
}
