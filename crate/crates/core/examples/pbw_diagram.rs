//! Both paths around the PBW square for `e*f*h` in `Sym^2` of `sl2`.

use hkr_verifier::catalog;
use hkr_verifier::pbw::{check_lie_diagram, SymElement, SymMonomial};

fn main() {
    let sl2 = catalog::sl2();
    let rep = catalog::representation(&sl2, "sym2").expect("catalog rep");
    let s = SymElement::monomial(SymMonomial::new(vec![0, 1, 2]));
    let report = check_lie_diagram(&rep, &s);
    println!("element: {}", s.display(&sl2));
    println!("theta(symmetrize(s)):\n{}", report.via_enveloping);
    println!("s_to_hom(s):\n{}", report.via_exp_lambda);
    println!("agree: {}", report.agrees());
}
