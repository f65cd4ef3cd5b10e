//! `Lambda` recovers the action, and `phi` agrees with `theta` on words.

use hkr_verifier::catalog;
use hkr_verifier::pbw::{adjunction_check, all_words, phi, theta, TensorElement};

fn main() {
    let h = catalog::heisenberg3();
    let rep = catalog::representation(&h, "standard").expect("catalog rep");
    println!("adjunction holds: {}", adjunction_check(&rep).holds());
    let mut agree = 0;
    let words = all_words(h.dim(), 3);
    for w in &words {
        let t = TensorElement::word(w.clone());
        if phi(&rep, &t) == theta(&rep, &t) {
            agree += 1;
        }
    }
    println!("phi = theta on {agree}/{} words of length 3", words.len());
}
