//! The bitmask exterior algebra against a word-based oracle that sorts
//! generator lists by adjacent swaps and applies interior products one
//! generator at a time.

use std::collections::BTreeMap;

use proptest::prelude::*;

use hkr_verifier::hodge::{
    contract_exp_atiyah, contract_omega_on_t, contract_t_on_omega, FormClass, HodgeModel, PolyClass,
};
use hkr_verifier::linalg::{int, ratio, Rational};
use hkr_verifier::sampling;

/// Generators: `a_i` is `i`, the second kind (`b_j` or `b*_j`) is `n + j`.
type Mono = Vec<usize>;
type Elem = BTreeMap<Mono, Rational>;

fn add(e: &mut Elem, m: Mono, c: Rational) {
    let entry = e.entry(m.clone()).or_insert_with(|| int(0));
    *entry += c;
    if *entry == int(0) {
        e.remove(&m);
    }
}

/// Bubble sort, returning the sign, or `None` on a repeated generator.
fn normalize(mut word: Vec<usize>) -> Option<(i64, Mono)> {
    let mut sign = 1;
    for i in 0..word.len() {
        for j in 0..word.len() - 1 - i {
            if word[j] > word[j + 1] {
                word.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if word.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, word))
}

fn mul(x: &Elem, y: &Elem) -> Elem {
    let mut out = Elem::new();
    for (m1, c1) in x {
        for (m2, c2) in y {
            let word: Vec<usize> = m1.iter().chain(m2).copied().collect();
            if let Some((s, m)) = normalize(word) {
                add(&mut out, m, int(s) * c1 * c2);
            }
        }
    }
    out
}

/// Odd derivation removing generator `g` with value `value`.
fn interior(g: usize, value: &Rational, x: &Elem) -> Elem {
    let mut out = Elem::new();
    for (m, c) in x {
        if let Some(t) = m.iter().position(|&h| h == g) {
            let mut rest = m.clone();
            rest.remove(t);
            let sign = if t % 2 == 0 { 1 } else { -1 };
            add(&mut out, rest, int(sign) * value * c);
        }
    }
    out
}

fn from_form(f: &FormClass) -> Elem {
    to_elem(f.n(), f.terms())
}

fn from_poly(p: &PolyClass) -> Elem {
    to_elem(p.n(), p.terms())
}

fn to_elem<'a>(n: usize, terms: impl Iterator<Item = ((u32, u32), &'a Rational)>) -> Elem {
    let mut out = Elem::new();
    for ((a, b), c) in terms {
        let mut m: Mono = (0..n).filter(|i| a >> i & 1 == 1).collect();
        m.extend((0..n).filter(|j| b >> j & 1 == 1).map(|j| n + j));
        add(&mut out, m, c.clone());
    }
    out
}

/// `alpha _| v` with `b*_j` acting by `i_j(b_j) = 1`, innermost factor first.
fn oracle_t_on_omega(n: usize, alpha: &Elem, v: &Elem) -> Elem {
    contract(n, alpha, v, int(1))
}

/// `u _| alpha` with the transposed pairing `i'_l(b*_l) = -1`.
fn oracle_omega_on_t(n: usize, u: &Elem, alpha: &Elem) -> Elem {
    contract(n, u, alpha, int(-1))
}

fn contract(n: usize, op: &Elem, target: &Elem, pairing: Rational) -> Elem {
    let mut out = Elem::new();
    for (m, c) in op {
        let a_part: Mono = m.iter().copied().filter(|&g| g < n).collect();
        let dual: Vec<usize> = m.iter().copied().filter(|&g| g >= n).collect();
        let mut acc = target.clone();
        for &g in dual.iter().rev() {
            acc = interior(g, &pairing, &acc);
        }
        let mut left = Elem::new();
        left.insert(a_part, c.clone());
        for (mm, cc) in mul(&left, &acc) {
            add(&mut out, mm, cc);
        }
    }
    out
}

fn arb_form(n: usize) -> impl Strategy<Value = FormClass> {
    any::<u64>().prop_map(move |seed| {
        let mut rng = sampling::case_rng(seed, 0, 0);
        sampling::any_form(n, 0.3, &mut rng)
    })
}

fn arb_poly(n: usize) -> impl Strategy<Value = PolyClass> {
    any::<u64>().prop_map(move |seed| {
        let mut rng = sampling::case_rng(seed, 1, 0);
        sampling::any_poly(n, 0.3, &mut rng)
    })
}

#[test]
fn wedge_matches_oracle_on_basis() {
    let n = 2;
    for u in FormClass::full_basis(n) {
        for v in FormClass::full_basis(n) {
            assert_eq!(from_form(&u.wedge(&v).unwrap()), mul(&from_form(&u), &from_form(&v)), "{u} ^ {v}");
        }
    }
}

#[test]
fn t_on_omega_matches_oracle_on_basis() {
    let n = 2;
    for a in PolyClass::full_basis(n) {
        for v in FormClass::full_basis(n) {
            let got = from_form(&contract_t_on_omega(&a, &v).unwrap());
            assert_eq!(got, oracle_t_on_omega(n, &from_poly(&a), &from_form(&v)), "{a} _| {v}");
        }
    }
}

#[test]
fn omega_on_t_matches_oracle_on_basis() {
    let n = 2;
    for u in FormClass::full_basis(n) {
        for a in PolyClass::full_basis(n) {
            let got = from_poly(&contract_omega_on_t(&u, &a).unwrap());
            assert_eq!(got, oracle_omega_on_t(n, &from_form(&u), &from_poly(&a)), "{u} _| {a}");
        }
    }
}

#[test]
fn golden_contraction_signs() {
    // (1 (x) b*_0) _| (b_0 ^ b_1) = b_1
    let r = contract_t_on_omega(
        &PolyClass::basis(2, &[], &[0], int(1)),
        &FormClass::basis(2, &[], &[0, 1], int(1)),
    )
    .unwrap();
    assert_eq!(r, FormClass::basis(2, &[], &[1], int(1)));
    // (1 (x) b*_1) _| (b_0 ^ b_1) = -b_0
    let r = contract_t_on_omega(
        &PolyClass::basis(2, &[], &[1], int(1)),
        &FormClass::basis(2, &[], &[0, 1], int(1)),
    )
    .unwrap();
    assert_eq!(r, FormClass::basis(2, &[], &[0], int(-1)));
    // exp(a0 b0 + a1 b1) has top part -a0 a1 b0 b1
    let c1 = FormClass::basis(2, &[0], &[0], int(1))
        .add(&FormClass::basis(2, &[1], &[1], int(1)))
        .unwrap();
    assert_eq!(c1.exp().unwrap().coeff(&[0, 1], &[0, 1]), int(-1));
}

#[test]
fn exp_atiyah_closed_form_matches_full_contraction() {
    for n in 1..=3 {
        for case in 0..30u64 {
            let mut rng = sampling::case_rng(5, 5, case);
            let c1 = sampling::first_chern(n, &mut rng);
            let e = c1.exp().unwrap();
            for alpha in PolyClass::full_basis(n) {
                let closed = contract_exp_atiyah(&alpha, &c1).unwrap();
                let full = contract_t_on_omega(&alpha, &e).unwrap().a_part();
                assert_eq!(closed, full, "n={n} c1={c1} alpha={alpha}");
            }
        }
    }
}

#[test]
fn todd_square_root_in_the_model() {
    for case in 0..20u64 {
        let mut rng = sampling::case_rng(3, 3, case);
        let model = sampling::todd_model(3, &mut rng).unwrap();
        let s = model.sqrt_todd();
        assert_eq!(&s.wedge(s).unwrap(), model.todd());
        assert_eq!(s.wedge(model.inv_sqrt_todd()).unwrap(), FormClass::one(3));
    }
}

#[test]
fn todd_from_chern_classes_low_degree() {
    let c1 = FormClass::basis(2, &[0], &[1], int(1));
    let c2 = FormClass::basis(2, &[0, 1], &[0, 1], int(1));
    let model = HodgeModel::from_chern_classes(2, &[c1.clone(), c2.clone()]).unwrap();
    // Td = 1 + c1/2 + (c1^2 + c2)/12 and c1^2 = 0 here
    let expected = FormClass::one(2)
        .add(&c1.scale(&ratio(1, 2)))
        .unwrap()
        .add(&c2.scale(&ratio(1, 12)))
        .unwrap();
    assert_eq!(model.todd(), &expected);
    assert_eq!(model.first_chern(), c1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn contractions_match_oracle(a in arb_poly(3), v in arb_form(3)) {
        let got = from_form(&contract_t_on_omega(&a, &v).unwrap());
        prop_assert_eq!(got, oracle_t_on_omega(3, &from_poly(&a), &from_form(&v)));
        let got = from_poly(&contract_omega_on_t(&v, &a).unwrap());
        prop_assert_eq!(got, oracle_omega_on_t(3, &from_form(&v), &from_poly(&a)));
    }

    #[test]
    fn module_laws(a in arb_poly(3), b in arb_poly(3), u in arb_form(3), w in arb_form(3)) {
        let lhs = contract_t_on_omega(&a.wedge(&b).unwrap(), &u).unwrap();
        let rhs = contract_t_on_omega(&a, &contract_t_on_omega(&b, &u).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let lhs = contract_omega_on_t(&u.wedge(&w).unwrap(), &a).unwrap();
        let rhs = contract_omega_on_t(&u, &contract_omega_on_t(&w, &a).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn wedge_is_associative(u in arb_form(3), v in arb_form(3), w in arb_form(3)) {
        let l = u.wedge(&v).unwrap().wedge(&w).unwrap();
        let r = u.wedge(&v.wedge(&w).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn duflo_inverse_round_trip(seed in any::<u64>()) {
        let mut rng = sampling::case_rng(seed, 2, 0);
        let model = sampling::todd_model(3, &mut rng).unwrap();
        let a = sampling::any_poly(3, 0.3, &mut rng);
        prop_assert_eq!(model.duflo_inverse(&model.duflo(&a).unwrap()).unwrap(), a.clone());
        prop_assert_eq!(model.duflo(&model.duflo_inverse(&a).unwrap()).unwrap(), a);
    }

    #[test]
    fn implication_with_trivial_todd(seed in any::<u64>(), n in 1usize..=3) {
        let c1 = sampling::first_chern(n, &mut sampling::case_rng(seed, 4, 0));
        let sweep = HodgeModel::trivial(n).unwrap().implication_sweep(&c1).unwrap();
        prop_assert!(sweep.failure.is_none());
    }

    #[test]
    fn literal_round_trip(v in arb_form(3), a in arb_poly(3)) {
        prop_assert_eq!(FormClass::from_json(3, &v.to_json().to_string()).unwrap(), v);
        prop_assert_eq!(PolyClass::from_json(3, &a.to_json().to_string()).unwrap(), a);
    }
}
