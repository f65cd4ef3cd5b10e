//! Truncated graded power series in Chern variables.
//!
//! A variable `c_i` has weight `i`; a series keeps every monomial of weight
//! at most its truncation weight. The Todd class and the Chern character are
//! built from the single-variable generating functions through power sums
//! `p_k` of the Chern roots, which Newton's identities express in the
//! elementary classes `c_i`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::linalg::{format_rational, int, Rational};

/// Default truncation weight.
pub const DEFAULT_WEIGHT: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("constant term must be 1, found {0}")]
    NonUnitConstant(String),
    #[error("constant term must be 0, found {0}")]
    NonzeroConstant(String),
}

/// Which symbol family a variable belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// Chern classes of the variety, printed `c1, c2, ..`.
    Variety,
    /// Chern classes of a bundle, printed `c1(F), c2(F), ..`.
    Bundle,
    /// Chern roots (weight one each), printed `x1, x2, ..`.
    Root,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub family: Family,
    pub index: u8,
}

impl Var {
    pub fn chern(index: u8) -> Self {
        Var {
            family: Family::Variety,
            index,
        }
    }

    pub fn bundle(index: u8) -> Self {
        Var {
            family: Family::Bundle,
            index,
        }
    }

    pub fn root(index: u8) -> Self {
        Var {
            family: Family::Root,
            index,
        }
    }

    pub fn weight(&self) -> usize {
        match self.family {
            Family::Root => 1,
            _ => self.index as usize,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Variety => write!(f, "c{}", self.index),
            Family::Bundle => write!(f, "c{}(F)", self.index),
            Family::Root => write!(f, "x{}", self.index),
        }
    }
}

/// A monomial in Chern variables, stored as a sorted list of factors.
///
/// Ordered by weight first, then lexicographically, which is the print order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ChernMonomial(Vec<Var>);

impl ChernMonomial {
    pub fn new(mut vars: Vec<Var>) -> Self {
        vars.sort_unstable();
        ChernMonomial(vars)
    }

    pub fn one() -> Self {
        ChernMonomial(Vec::new())
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(Var::weight).sum()
    }

    pub fn vars(&self) -> &[Var] {
        &self.0
    }

    fn times(&self, other: &Self) -> Self {
        ChernMonomial::new(self.0.iter().chain(&other.0).copied().collect())
    }
}

impl Ord for ChernMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ChernMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ChernMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts = self.0.iter().dedup_with_count().map(|(count, v)| {
            if count == 1 {
                v.to_string()
            } else {
                format!("{v}^{count}")
            }
        });
        write!(f, "{}", parts.format("*"))
    }
}

/// Truncated series: every stored monomial has weight `<= max_weight`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSeries {
    max_weight: usize,
    terms: BTreeMap<ChernMonomial, Rational>,
}

impl GradedSeries {
    pub fn zero(max_weight: usize) -> Self {
        GradedSeries {
            max_weight,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(max_weight: usize, c: Rational) -> Self {
        let mut s = Self::zero(max_weight);
        s.add_term(ChernMonomial::one(), c);
        s
    }

    pub fn one(max_weight: usize) -> Self {
        Self::constant(max_weight, Rational::one())
    }

    pub fn var(max_weight: usize, v: Var) -> Self {
        let mut s = Self::zero(max_weight);
        s.add_term(ChernMonomial(vec![v]), Rational::one());
        s
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    pub fn add_term(&mut self, m: ChernMonomial, c: Rational) {
        if c.is_zero() || m.weight() > self.max_weight {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ChernMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the monomial with the given factors.
    pub fn coeff(&self, vars: &[Var]) -> Rational {
        self.terms
            .get(&ChernMonomial::new(vars.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&[])
    }

    /// The homogeneous weight-`w` part.
    pub fn weight_part(&self, w: usize) -> GradedSeries {
        GradedSeries {
            max_weight: self.max_weight,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight() == w)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn truncate(&self, max_weight: usize) -> GradedSeries {
        let mut out = Self::zero(max_weight);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.truncate(self.max_weight.min(other.max_weight));
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.max_weight);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    /// Truncated product; the result keeps the smaller truncation weight.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.max_weight.min(other.max_weight));
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if a.weight() + b.weight() <= out.max_weight {
                    out.add_term(a.times(b), x * y);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(self.max_weight), |acc, _| acc.mul(self))
    }

    fn split_by_weight(&self) -> Vec<GradedSeries> {
        (0..=self.max_weight).map(|w| self.weight_part(w)).collect()
    }

    fn assemble(&self, pieces: Vec<GradedSeries>) -> GradedSeries {
        pieces
            .into_iter()
            .fold(Self::zero(self.max_weight), |acc, p| acc.add(&p))
    }

    /// Unique square root with constant term 1, solved weight by weight:
    /// `s_w = (a_w - sum_{0<i<w} s_i s_{w-i}) / 2`.
    pub fn sqrt(&self) -> Result<Self, SeriesError> {
        self.require_unit()?;
        let a = self.split_by_weight();
        let mut s: Vec<GradedSeries> = vec![Self::one(self.max_weight)];
        for w in 1..=self.max_weight {
            let mut rest = a[w].clone();
            for i in 1..w {
                rest = rest.sub(&s[i].mul(&s[w - i]));
            }
            s.push(rest.scale(&Rational::new(1.into(), 2.into())));
        }
        Ok(self.assemble(s))
    }

    /// Multiplicative inverse, `u_w = -sum_{i=1..w} a_i u_{w-i}`.
    pub fn inv(&self) -> Result<Self, SeriesError> {
        self.require_unit()?;
        let a = self.split_by_weight();
        let mut u: Vec<GradedSeries> = vec![Self::one(self.max_weight)];
        for w in 1..=self.max_weight {
            let mut acc = Self::zero(self.max_weight);
            for i in 1..=w {
                acc = acc.sub(&a[i].mul(&u[w - i]));
            }
            u.push(acc);
        }
        Ok(self.assemble(u))
    }

    /// `sum_k self^k / k!` for a series without constant term.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        let c = self.constant_term();
        if !c.is_zero() {
            return Err(SeriesError::NonzeroConstant(format_rational(&c)));
        }
        let mut out = Self::one(self.max_weight);
        let mut power = Self::one(self.max_weight);
        for k in 1..=self.max_weight {
            power = power.mul(self).scale(&Rational::new(1.into(), (k as i64).into()));
            out = out.add(&power);
        }
        Ok(out)
    }

    fn require_unit(&self) -> Result<(), SeriesError> {
        let c = self.constant_term();
        if !c.is_one() {
            return Err(SeriesError::NonUnitConstant(format_rational(&c)));
        }
        Ok(())
    }

    /// Replaces every variable by a series (weights should match).
    pub fn substitute(&self, max_weight: usize, f: impl Fn(Var) -> GradedSeries) -> GradedSeries {
        let mut out = Self::zero(max_weight);
        for (m, c) in &self.terms {
            let term = m
                .vars()
                .iter()
                .fold(Self::one(max_weight), |acc, &v| acc.mul(&f(v).truncate(max_weight)));
            out = out.add(&term.scale(c));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                json!({
                    "monomial": m.to_string(),
                    "weight": m.weight(),
                    "coeff": format_rational(c),
                })
            })
            .collect();
        json!({ "max_weight": self.max_weight, "terms": terms })
    }
}

/// Canonical text form, e.g. `1 + 1/2*c1 + 1/12*c1^2 + 1/12*c2`.
impl fmt::Display for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            let body = match (m.0.is_empty(), mag.is_one()) {
                (true, _) => format_rational(&mag),
                (false, true) => m.to_string(),
                (false, false) => format!("{}*{}", format_rational(&mag), m),
            };
            match (k, c.is_negative()) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

// Single-variable series, coefficient k at index k.

fn uni_mul(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn uni_inv(a: &[Rational], len: usize) -> Vec<Rational> {
    let mut u = vec![Rational::zero(); len];
    u[0] = a[0].recip();
    for w in 1..len {
        let mut acc = Rational::zero();
        for i in 1..=w.min(a.len() - 1) {
            acc += &a[i] * &u[w - i];
        }
        u[w] = -acc * &u[0];
    }
    u
}

/// `log(a)` for `a` with constant term 1.
fn uni_log(a: &[Rational], len: usize) -> Vec<Rational> {
    let mut x = a.to_vec();
    x.resize(len, Rational::zero());
    x[0] = Rational::zero();
    let mut out = vec![Rational::zero(); len];
    let mut power = vec![Rational::zero(); len];
    power[0] = Rational::one();
    for m in 1..len {
        power = uni_mul(&power, &x, len);
        let sign = if m % 2 == 1 { 1 } else { -1 };
        let c = Rational::new(sign.into(), (m as i64).into());
        for (o, p) in out.iter_mut().zip(&power) {
            *o += p * &c;
        }
    }
    out
}

fn factorial(n: usize) -> Rational {
    Rational::from_integer((1..=n as u64).product::<u64>().into())
}

/// Coefficients of `log(t / (1 - e^{-t}))` up to `t^len-1`.
fn todd_log_coefficients(len: usize) -> Vec<Rational> {
    // (1 - e^{-t}) / t = sum_k (-1)^k t^k / (k+1)!
    let denom: Vec<Rational> = (0..len)
        .map(|k| {
            let s = if k % 2 == 0 { int(1) } else { int(-1) };
            s / factorial(k + 1)
        })
        .collect();
    uni_log(&uni_inv(&denom, len), len)
}

/// Power sums `p_1..p_n` of the roots of a bundle with elementary classes
/// `c_i` in `family`, where `c_i = 0` for `i > rank`.
pub fn power_sums(family: Family, rank: usize, max_weight: usize) -> Vec<GradedSeries> {
    let e = |i: usize| {
        if i <= rank {
            GradedSeries::var(
                max_weight,
                Var {
                    family,
                    index: i as u8,
                },
            )
        } else {
            GradedSeries::zero(max_weight)
        }
    };
    let mut p: Vec<GradedSeries> = vec![GradedSeries::constant(max_weight, int(rank as i64))];
    for k in 1..=max_weight {
        let mut pk = GradedSeries::zero(max_weight);
        for i in 1..k {
            let term = e(i).mul(&p[k - i]);
            pk = if i % 2 == 1 { pk.add(&term) } else { pk.sub(&term) };
        }
        let last = e(k).scale(&int(k as i64));
        pk = if k % 2 == 1 { pk.add(&last) } else { pk.sub(&last) };
        p.push(pk);
    }
    p
}

/// Universal Todd class in the variety's Chern classes.
pub fn todd(max_weight: usize) -> GradedSeries {
    todd_in(Family::Variety, max_weight)
}

pub fn todd_in(family: Family, max_weight: usize) -> GradedSeries {
    let a = todd_log_coefficients(max_weight + 1);
    let p = power_sums(family, max_weight, max_weight);
    let log = (1..=max_weight).fold(GradedSeries::zero(max_weight), |acc, k| {
        acc.add(&p[k].scale(&a[k]))
    });
    log.exp().expect("log has no constant term")
}

/// `todd(N)^(1/2)`.
pub fn sqrt_todd(max_weight: usize) -> GradedSeries {
    todd(max_weight).sqrt().expect("todd has constant term 1")
}

/// Chern character of a rank-`rank` bundle in the variables `c_i`.
pub fn chern_character(rank: usize, max_weight: usize) -> GradedSeries {
    chern_character_in(Family::Variety, rank, max_weight)
}

pub fn chern_character_in(family: Family, rank: usize, max_weight: usize) -> GradedSeries {
    let p = power_sums(family, rank, max_weight);
    p.iter()
        .enumerate()
        .fold(GradedSeries::zero(max_weight), |acc, (k, pk)| {
            acc.add(&pk.scale(&factorial(k).recip()))
        })
}

/// `ch(F) * Td(X)^(1/2)`, with bundle classes `c_i(F)` kept apart from the
/// variety's `c_i`.
pub fn mukai_vector(rank: usize, max_weight: usize) -> GradedSeries {
    chern_character_in(Family::Bundle, rank, max_weight).mul(&sqrt_todd(max_weight))
}
