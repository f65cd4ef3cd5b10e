//! Invariants of `S(g)` and their images under `s_to_hom`.

use hkr_verifier::catalog;
use hkr_verifier::pbw::{invariants_s, s_to_hom};

fn main() {
    for name in ["sl2", "gl2", "heisenberg3"] {
        let alg = catalog::algebra(name).expect("catalog algebra");
        for d in 1..=3 {
            let inv = invariants_s(&alg, d);
            println!("{name} degree {d}: {} invariant(s)", inv.len());
            for s in &inv {
                println!("  {}", s.display(&alg));
            }
        }
    }

    let sl2 = catalog::sl2();
    let casimir = &invariants_s(&sl2, 2)[0];
    for rep in ["standard", "sym2", "sym3", "adjoint"] {
        let r = catalog::representation(&sl2, rep).expect("catalog rep");
        let image = s_to_hom(&r, casimir);
        match image.as_scalar() {
            Some(c) => println!("casimir on {rep}: scalar {c}"),
            None => println!("casimir on {rep}:\n{image}"),
        }
    }
}
