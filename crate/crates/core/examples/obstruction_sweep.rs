//! Kernel sweep of `alpha -> alpha _| exp(c1)` for seeded classes, with the
//! Todd datum 1 and with a random Todd datum for comparison.

use hkr_verifier::hodge::{HodgeModel, Implication};
use hkr_verifier::sampling;

fn main() {
    let n = 3;
    let trivial = HodgeModel::trivial(n).unwrap();
    for case in 0..5 {
        let c1 = sampling::first_chern(n, &mut sampling::case_rng(1, 0, case));
        let sweep = trivial.implication_sweep(&c1).unwrap();
        println!(
            "c1 = {c1}\n  kernel dimension {}, failures: {}",
            sweep.kernel_dim,
            sweep.failure.is_some()
        );
    }

    let mut rng = sampling::case_rng(1, 1, 0);
    let model = sampling::todd_model(n, &mut rng).unwrap();
    let c1 = sampling::first_chern(n, &mut rng);
    let (mut held, mut failed) = (0, 0);
    for alpha in model.hypothesis_kernel(&c1).unwrap() {
        match model.implication_check(&alpha, &c1).unwrap().implication() {
            Implication::Holds => held += 1,
            Implication::Violated => failed += 1,
            Implication::Vacuous => {}
        }
    }
    println!("random Todd datum {}: held {held}, failed {failed}", model.todd());
}
