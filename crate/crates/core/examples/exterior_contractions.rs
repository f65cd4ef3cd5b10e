//! Wedge products and both contractions in the bi-exterior model.

use hkr_verifier::hodge::{contract_omega_on_t, contract_t_on_omega, FormClass, PolyClass};
use hkr_verifier::linalg::int;

fn main() {
    let n = 2;
    let b0b1 = FormClass::basis(n, &[], &[0, 1], int(1));
    let d0 = PolyClass::basis(n, &[], &[0], int(1));
    let d1 = PolyClass::basis(n, &[], &[1], int(1));
    println!("b0* _| b0^b1 = {}", contract_t_on_omega(&d0, &b0b1).unwrap());
    println!("b1* _| b0^b1 = {}", contract_t_on_omega(&d1, &b0b1).unwrap());

    let c1 = FormClass::basis(n, &[0], &[0], int(1))
        .add(&FormClass::basis(n, &[1], &[1], int(1)))
        .unwrap();
    println!("exp(c1) = {}", c1.exp().unwrap());

    let alpha = PolyClass::basis(n, &[1], &[0], int(1));
    println!("alpha _| c1 = {}", contract_t_on_omega(&alpha, &c1).unwrap());
    println!("c1 _| alpha = {}", contract_omega_on_t(&c1, &alpha).unwrap());
    println!("as JSON: {}", alpha.to_json());
}
