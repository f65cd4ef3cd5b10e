//! Seeded generators for Hodge-model inputs.
//!
//! Every case draws from its own `ChaCha8Rng` stream derived from
//! `(seed, suite tag, case index)`, so a single case can be replayed without
//! running the ones before it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hodge::{FormClass, HodgeError, HodgeModel, PolyClass};
use crate::linalg::{ratio, Rational};

pub fn case_rng(seed: u64, tag: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(tag);
    rng.set_word_pos(u128::from(case) << 32);
    rng
}

/// Numerator in `-3..=3`, denominator in `1..=3`.
pub fn small_rational(rng: &mut impl Rng) -> Rational {
    ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3))
}

fn nonzero_rational(rng: &mut impl Rng) -> Rational {
    loop {
        let r = small_rational(rng);
        if r != ratio(0, 1) {
            return r;
        }
    }
}

/// Each basis blade of bidegree `(p, q)` is present with probability `density`.
pub fn form_of_bidegree(n: usize, p: usize, q: usize, density: f64, rng: &mut impl Rng) -> FormClass {
    let mut out = FormClass::zero(n);
    for b in FormClass::basis_of_bidegree(n, p, q) {
        if rng.gen_bool(density) {
            out = out.add(&b.scale(&nonzero_rational(rng))).expect("same model");
        }
    }
    out
}

pub fn poly_of_bidegree(n: usize, p: usize, q: usize, density: f64, rng: &mut impl Rng) -> PolyClass {
    let mut out = PolyClass::zero(n);
    for b in PolyClass::basis_of_bidegree(n, p, q) {
        if rng.gen_bool(density) {
            out = out.add(&b.scale(&nonzero_rational(rng))).expect("same model");
        }
    }
    out
}

/// A polyvector with every bidegree possibly present.
pub fn any_poly(n: usize, density: f64, rng: &mut impl Rng) -> PolyClass {
    let mut out = PolyClass::zero(n);
    for b in PolyClass::full_basis(n) {
        if rng.gen_bool(density) {
            out = out.add(&b.scale(&nonzero_rational(rng))).expect("same model");
        }
    }
    out
}

pub fn any_form(n: usize, density: f64, rng: &mut impl Rng) -> FormClass {
    let mut out = FormClass::zero(n);
    for b in FormClass::full_basis(n) {
        if rng.gen_bool(density) {
            out = out.add(&b.scale(&nonzero_rational(rng))).expect("same model");
        }
    }
    out
}

/// A `(1,1)` class. Half of the draws are sums of `r <= n` decomposable terms
/// `(sum u_i a_i)(sum w_j b_j)`, so degenerate classes show up often.
pub fn first_chern(n: usize, rng: &mut impl Rng) -> FormClass {
    if rng.gen_bool(0.5) {
        let density = [0.25, 0.5, 0.9][rng.gen_range(0..3)];
        return form_of_bidegree(n, 1, 1, density, rng);
    }
    let rank = rng.gen_range(0..=n);
    let mut out = FormClass::zero(n);
    for _ in 0..rank {
        let u: Vec<Rational> = (0..n).map(|_| small_rational(rng)).collect();
        let w: Vec<Rational> = (0..n).map(|_| small_rational(rng)).collect();
        for (i, ui) in u.iter().enumerate() {
            for (j, wj) in w.iter().enumerate() {
                let t = FormClass::basis(n, &[i], &[j], ui * wj);
                out = out.add(&t).expect("same model");
            }
        }
    }
    out
}

/// Chern classes `c_1..c_n` with `c_k` of bidegree `(k, k)`.
pub fn chern_classes(n: usize, rng: &mut impl Rng) -> Vec<FormClass> {
    (1..=n).map(|k| form_of_bidegree(n, k, k, 0.5, rng)).collect()
}

/// Model whose Todd datum is the Todd polynomial in random Chern classes.
pub fn todd_model(n: usize, rng: &mut impl Rng) -> Result<HodgeModel, HodgeError> {
    HodgeModel::from_chern_classes(n, &chern_classes(n, rng))
}
