//! The `(1,1)` case: `D(alpha) - alpha = (c1/4) _| alpha` and the two
//! vanishing loci, for a Todd datum generated by `c1`.

use hkr_verifier::hodge::{FormClass, HodgeModel, PolyClass};
use hkr_verifier::linalg::int;

fn main() {
    let n = 2;
    let c1 = FormClass::basis(n, &[0], &[0], int(1))
        .add(&FormClass::basis(n, &[1], &[0], int(2)))
        .unwrap();
    let model = HodgeModel::from_chern_classes(n, std::slice::from_ref(&c1)).unwrap();
    println!("Td       = {}", model.todd());
    println!("Td^(1/2) = {}", model.sqrt_todd());
    for alpha in PolyClass::basis_of_bidegree(n, 1, 1) {
        let r = model.special_case_check(&alpha).unwrap();
        println!(
            "alpha = {alpha}: D(alpha) - alpha = {}, shift ok {}, h2 ok {}, kills c1 {}",
            r.duflo_shift,
            r.shift_holds(),
            r.h2_holds(),
            r.kills_c1
        );
    }
    let loci = model.special_case_loci().unwrap();
    println!("locus dimension {}, loci coincide: {}", loci.locus_c1.len(), loci.coincide);
}
