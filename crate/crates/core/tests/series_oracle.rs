//! Characteristic-class series against root-level oracles: the Todd class
//! evaluated at elementary symmetric functions of random rational roots must
//! equal the product of `x / (1 - e^-x)` over the roots, computed here from
//! Bernoulli numbers.

use proptest::prelude::*;
use rand::Rng;

use hkr_verifier::linalg::{int, ratio, Rational};
use hkr_verifier::sampling;
use hkr_verifier::series::{self, GradedSeries, Var};

fn binomial(n: usize, k: usize) -> Rational {
    let mut r = int(1);
    for i in 0..k {
        r = r * int((n - i) as i64) / int((i + 1) as i64);
    }
    r
}

fn factorial(n: usize) -> Rational {
    (1..=n).fold(int(1), |acc, i| acc * int(i as i64))
}

/// `B_0 .. B_m` with `B_1 = -1/2`.
fn bernoulli(m: usize) -> Vec<Rational> {
    let mut b = vec![int(1)];
    for k in 1..=m {
        let s = (0..k).fold(int(0), |acc, j| acc + binomial(k + 1, j) * &b[j]);
        b.push(-s / int((k + 1) as i64));
    }
    b
}

/// Coefficients of `x / (1 - e^-x) = sum (-1)^k B_k x^k / k!`.
fn todd_line(m: usize) -> Vec<Rational> {
    bernoulli(m)
        .into_iter()
        .enumerate()
        .map(|(k, b)| if k % 2 == 0 { b } else { -b } / factorial(k))
        .collect()
}

/// Weight-`w` parts of `prod_i f(t x_i)`, `w <= m`.
fn product_over_roots(f: &[Rational], roots: &[Rational], m: usize) -> Vec<Rational> {
    let mut acc = vec![int(0); m + 1];
    acc[0] = int(1);
    for x in roots {
        let g: Vec<Rational> = (0..=m).map(|k| &f[k] * pow(x, k)).collect();
        let mut next = vec![int(0); m + 1];
        for i in 0..=m {
            for j in 0..=(m - i) {
                next[i + j] += &acc[i] * &g[j];
            }
        }
        acc = next;
    }
    acc
}

fn pow(x: &Rational, k: usize) -> Rational {
    (0..k).fold(int(1), |acc, _| acc * x)
}

fn elementary(roots: &[Rational], m: usize) -> Vec<Rational> {
    let mut e = vec![int(0); m + 1];
    e[0] = int(1);
    for x in roots {
        for k in (1..=m).rev() {
            let prev = e[k - 1].clone();
            e[k] += prev * x;
        }
    }
    e
}

/// Weight-`w` part of a series with `c_i` set to `c[i]`.
fn evaluate(s: &GradedSeries, c: &[Rational], w: usize) -> Rational {
    s.terms()
        .filter(|(m, _)| m.weight() == w)
        .map(|(m, coeff)| {
            m.vars()
                .iter()
                .fold(coeff.clone(), |acc, v| acc * c.get(v.index as usize).cloned().unwrap_or_else(|| int(0)))
        })
        .fold(int(0), |a, b| a + b)
}

fn random_roots(seed: u64, r: usize) -> Vec<Rational> {
    let mut rng = sampling::case_rng(seed, 99, 0);
    (0..r).map(|_| ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4))).collect()
}

#[test]
fn bernoulli_numbers() {
    let b = bernoulli(6);
    assert_eq!(b[1], ratio(-1, 2));
    assert_eq!(b[2], ratio(1, 6));
    assert_eq!(b[4], ratio(-1, 30));
    assert_eq!(b[6], ratio(1, 42));
    assert_eq!(todd_line(2), vec![int(1), ratio(1, 2), ratio(1, 12)]);
}

#[test]
fn todd_matches_chern_root_oracle() {
    let m = 6;
    let td = series::todd(m);
    let q = todd_line(m);
    for (seed, r) in [(1, 3), (2, 4), (3, 6), (4, 7)] {
        let roots = random_roots(seed, r);
        let c = elementary(&roots, m);
        let oracle = product_over_roots(&q, &roots, m);
        for w in 0..=m {
            assert_eq!(evaluate(&td, &c, w), oracle[w], "weight {w} with {r} roots");
        }
    }
}

#[test]
fn chern_character_matches_root_oracle() {
    let m = 6;
    for (seed, r) in [(5, 1), (6, 3), (7, 5)] {
        let ch = series::chern_character(r, m);
        let roots = random_roots(seed, r);
        let c = elementary(&roots, m);
        for w in 0..=m {
            let oracle = roots.iter().fold(int(0), |acc, x| acc + pow(x, w)) / factorial(w);
            assert_eq!(evaluate(&ch, &c, w), oracle, "weight {w}, rank {r}");
        }
    }
}

#[test]
fn low_weight_todd_polynomials() {
    let td = series::todd(4);
    let c = Var::chern;
    assert_eq!(td.weight_part(3), GradedSeries::var(4, c(1)).mul(&GradedSeries::var(4, c(2))).scale(&ratio(1, 24)));
    let c1 = GradedSeries::var(4, c(1));
    let c2 = GradedSeries::var(4, c(2));
    let td4 = c1
        .pow(4)
        .scale(&int(-1))
        .add(&c1.pow(2).mul(&c2).scale(&int(4)))
        .add(&c2.pow(2).scale(&int(3)))
        .add(&c1.mul(&GradedSeries::var(4, c(3))))
        .sub(&GradedSeries::var(4, c(4)))
        .scale(&ratio(1, 720));
    assert_eq!(td.weight_part(4), td4);
    let sq = series::sqrt_todd(2);
    assert_eq!(sq.to_string(), "1 + 1/4*c1 + 1/96*c1^2 + 1/24*c2");
}

/// Whitney check for a sum of two line bundles: `c1 -> x + y`, `c2 -> x y`,
/// higher classes to zero, against the product of the two line-bundle classes.
#[test]
fn todd_is_multiplicative_on_line_bundle_sums() {
    let m = 6;
    let x = GradedSeries::var(m, Var::root(1));
    let y = GradedSeries::var(m, Var::root(2));
    let td = series::todd(m);
    let sum = td.substitute(m, |v| match v.index {
        1 => x.add(&y),
        2 => x.mul(&y),
        _ => GradedSeries::zero(m),
    });
    let line = |r: &GradedSeries| {
        td.substitute(m, |v| if v.index == 1 { r.clone() } else { GradedSeries::zero(m) })
    };
    assert_eq!(sum, line(&x).mul(&line(&y)));
    let ch = series::chern_character(2, m).substitute(m, |v| match v.index {
        1 => x.add(&y),
        2 => x.mul(&y),
        _ => GradedSeries::zero(m),
    });
    assert_eq!(ch, x.exp().unwrap().add(&y.exp().unwrap()));
}

#[test]
fn mukai_vector_weight_one() {
    assert_eq!(series::mukai_vector(1, 1).to_string(), "1 + 1/4*c1 + c1(F)");
    assert_eq!(series::chern_character(1, 0).to_string(), "1");
}

fn arb_unit_series() -> impl Strategy<Value = GradedSeries> {
    (any::<u64>(), 1usize..=5).prop_map(|(seed, w)| {
        let mut rng = sampling::case_rng(seed, 8, 0);
        let mut s = GradedSeries::one(w);
        for i in 1..=w as u8 {
            for j in 0..=(w as u8 - i) {
                if rng.gen_bool(0.5) {
                    let mut t = GradedSeries::var(w, Var::chern(i)).scale(&sampling::small_rational(&mut rng));
                    if j > 0 {
                        t = t.mul(&GradedSeries::var(w, Var::chern(j.max(1))));
                    }
                    s = s.add(&t);
                }
            }
        }
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sqrt_and_inverse_round_trip(s in arb_unit_series()) {
        let r = s.sqrt().unwrap();
        prop_assert_eq!(r.mul(&r), s.clone());
        prop_assert_eq!(s.inv().unwrap().mul(&s), GradedSeries::one(s.max_weight()));
    }

    #[test]
    fn exp_is_a_homomorphism(a in arb_unit_series(), b in arb_unit_series()) {
        let w = a.max_weight().min(b.max_weight());
        let a = a.truncate(w).sub(&GradedSeries::one(w));
        let b = b.truncate(w).sub(&GradedSeries::one(w));
        let lhs = a.add(&b).exp().unwrap();
        let rhs = a.exp().unwrap().mul(&b.exp().unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
