//! Bi-exterior model of polyvector fields and forms.
//!
//! Two rank-`n` spaces are fixed: `A` (cohomological directions, generators
//! `a_0..a_{n-1}`) and `B` (form directions `b_0..b_{n-1}`, with dual
//! generators `b*_j`).
//!
//! * [`FormClass`] lives in `/\A (x) /\B`; the component `(p, q)` models
//!   `H^p(/\^q Omega)`.
//! * [`PolyClass`] lives in `/\A (x) /\B*`; `(p, q)` models `H^p(/\^q T)`.
//! * [`ExtClass`] lives in `/\A` and models `Ext^*(L, L)` for a line bundle.
//!
//! A basis term `a_I (x) b_J` is the product `a_I ^ b_J` in the exterior
//! algebra on `A + B` (all generators odd, `A`-factors written first), so
//! products carry the Koszul sign of the total degree.
//!
//! Sign conventions for the contractions:
//!
//! * `b*_j` acts on forms as the odd derivation `i_j` with `i_j(b_l) = delta_jl`
//!   and `i_j(a_k) = 0`. A polyvector `a_I b*_J` acts as
//!   `v -> a_I ^ i_{j1} ... i_{jm}(v)` for `J = {j1 < .. < jm}`.
//! * `b_l` acts on polyvectors through the Koszul transpose of that pairing,
//!   `i'_l(b*_j) = -delta_lj`, and a form `a_K b_L` acts as
//!   `alpha -> a_K ^ i'_{l1} ... i'_{lm}(alpha)`.
//!
//! Both actions are algebra homomorphisms, so `(u ^ w) _| alpha = u _| (w _| alpha)`
//! and likewise for polyvectors on forms. With the transposed pairing the two
//! contractions of a `(1,1)` polyvector against a `(1,1)` form land on the same
//! element of `/\^2 A`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::linalg::{format_rational, int, parse_rational, Matrix, Rational};
use crate::series::{GradedSeries, Var};

/// Largest supported model dimension.
pub const MAX_DIM: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HodgeError {
    #[error("model mismatch: dimension {left} vs {right}")]
    ModelMismatch { left: usize, right: usize },
    #[error("expected a class of pure bidegree {expected:?}, found components {found:?}")]
    WrongBidegree {
        expected: (usize, usize),
        found: Vec<(usize, usize)>,
    },
    #[error("constant term must be 0, found {0}")]
    NonzeroConstant(String),
    #[error("invalid Todd datum: {0}")]
    InvalidTodd(String),
    #[error("invalid class literal: {0}")]
    InvalidLiteral(String),
    #[error("model dimension {0} out of range 0..={MAX_DIM}")]
    Dimension(usize),
}

mod blade {
    /// Sign of concatenating two sorted blades into sorted order, `0` on overlap.
    pub fn merge_sign(left: u32, right: u32) -> i32 {
        if left & right != 0 {
            return 0;
        }
        let mut swaps = 0;
        let mut r = right;
        while r != 0 {
            let bit = r.trailing_zeros();
            swaps += (left >> bit).count_ones();
            r &= r - 1;
        }
        if swaps % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn parity(k: u32) -> i32 {
        if k.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// `i_{j1} .. i_{jm}(b_L)` for `J = {j1 < .. < jm}`: each `i_j` is an odd
    /// derivation, so `i_jm` acts first. `None` unless `J` is inside `L`.
    pub fn interior(j: u32, l: u32) -> Option<(i32, u32)> {
        if j & !l != 0 {
            return None;
        }
        let mut sign = 1;
        let mut rest = l;
        let mut todo = j;
        while todo != 0 {
            let bit = 31 - todo.leading_zeros();
            sign *= parity((rest & ((1u32 << bit) - 1)).count_ones());
            rest &= !(1u32 << bit);
            todo &= !(1u32 << bit);
        }
        Some((sign, rest))
    }

    pub fn indices(mask: u32) -> Vec<usize> {
        (0..32).filter(|i| mask >> i & 1 == 1).collect()
    }

    pub fn from_indices(idx: &[usize]) -> u32 {
        idx.iter().fold(0, |m, &i| m | (1 << i))
    }

    /// All masks over `n` bits with exactly `k` set.
    pub fn of_degree(n: usize, k: usize) -> Vec<u32> {
        (0u32..(1 << n)).filter(|m| m.count_ones() as usize == k).collect()
    }
}

pub use blade::merge_sign;

type Key = (u32, u32);

/// Shared storage for both bi-graded kinds of class.
#[derive(Clone, PartialEq, Eq, Hash)]
struct BiTerms {
    n: usize,
    terms: BTreeMap<Key, Rational>,
}

impl BiTerms {
    fn zero(n: usize) -> Self {
        BiTerms {
            n,
            terms: BTreeMap::new(),
        }
    }

    fn add_term(&mut self, key: Key, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn bidegrees(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self.terms.keys().map(|&k| bidegree(k)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn component(&self, p: usize, q: usize) -> Self {
        BiTerms {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(&k, _)| bidegree(k) == (p, q))
                .map(|(&k, c)| (k, c.clone()))
                .collect(),
        }
    }

    fn check_same(&self, other: &Self) -> Result<(), HodgeError> {
        if self.n != other.n {
            return Err(HodgeError::ModelMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    fn add(&self, other: &Self) -> Result<Self, HodgeError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.add_term(k, c.clone());
        }
        Ok(out)
    }

    fn scale(&self, c: &Rational) -> Self {
        let mut out = BiTerms::zero(self.n);
        for (&k, v) in &self.terms {
            out.add_term(k, v * c);
        }
        out
    }

    /// Product in the exterior algebra on `A + X`, `A`-factors first.
    fn wedge(&self, other: &Self) -> Result<Self, HodgeError> {
        self.check_same(other)?;
        let mut out = BiTerms::zero(self.n);
        for (&(ai, bj), x) in &self.terms {
            for (&(ak, bl), y) in &other.terms {
                let s = blade::merge_sign(ai, ak)
                    * blade::merge_sign(bj, bl)
                    * blade::parity(bj.count_ones() * ak.count_ones());
                if s != 0 {
                    out.add_term((ai | ak, bj | bl), int(s as i64) * x * y);
                }
            }
        }
        Ok(out)
    }

    fn to_json(&self, second: &str) -> Value {
        let mut groups: BTreeMap<(usize, usize), Vec<Value>> = BTreeMap::new();
        for (&k, c) in &self.terms {
            groups.entry(bidegree(k)).or_default().push(serde_json::json!({
                "a": blade::indices(k.0),
                second: blade::indices(k.1),
                "coeff": format_rational(c),
            }));
        }
        Value::Array(
            groups
                .into_iter()
                .map(|((p, q), terms)| serde_json::json!({"bidegree": [p, q], "terms": terms}))
                .collect(),
        )
    }

    fn from_literal(n: usize, literal: &[ComponentLiteral]) -> Result<Self, HodgeError> {
        check_dim(n)?;
        let bad = |msg: String| HodgeError::InvalidLiteral(msg);
        let mut out = BiTerms::zero(n);
        for comp in literal {
            let [p, q] = comp.bidegree;
            for t in &comp.terms {
                for (name, idx, expect) in [("a", &t.a, p), ("b", &t.b, q)] {
                    if idx.len() != expect {
                        return Err(bad(format!(
                            "{name}-indices {idx:?} do not match bidegree ({p}, {q})"
                        )));
                    }
                    if idx.windows(2).any(|w| w[0] >= w[1]) {
                        return Err(bad(format!("{name}-indices {idx:?} not strictly increasing")));
                    }
                    if idx.iter().any(|&i| i >= n) {
                        return Err(bad(format!("{name}-indices {idx:?} out of range for n = {n}")));
                    }
                }
                let c = parse_rational(&t.coeff).map_err(|e| bad(e.to_string()))?;
                out.add_term((blade::from_indices(&t.a), blade::from_indices(&t.b)), c);
            }
        }
        Ok(out)
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, dual: bool) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Key> = self.terms.keys().collect();
        keys.sort_by_key(|&&k| (bidegree(k), k));
        for (n, k) in keys.into_iter().enumerate() {
            let mut factors: Vec<String> = blade::indices(k.0).iter().map(|i| format!("a{i}")).collect();
            let star = if dual { "*" } else { "" };
            factors.extend(blade::indices(k.1).iter().map(|i| format!("b{i}{star}")));
            let c = &self.terms[k];
            let magnitude = c.abs();
            let sign = match (n, c.is_negative()) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let body = match (factors.is_empty(), magnitude.is_one()) {
                (true, _) => format_rational(&magnitude),
                (false, true) => factors.join("^"),
                (false, false) => format!("{}*{}", format_rational(&magnitude), factors.join("^")),
            };
            write!(f, "{sign}{body}")?;
        }
        Ok(())
    }
}

fn bidegree(k: Key) -> (usize, usize) {
    (k.0.count_ones() as usize, k.1.count_ones() as usize)
}

fn check_dim(n: usize) -> Result<(), HodgeError> {
    if n > MAX_DIM {
        return Err(HodgeError::Dimension(n));
    }
    Ok(())
}

/// JSON literal for one bidegree component.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentLiteral {
    pub bidegree: [usize; 2],
    pub terms: Vec<TermLiteral>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermLiteral {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub coeff: String,
}

macro_rules! bigraded_class {
    ($name:ident, $dual:expr) => {
        impl $name {
            pub fn zero(n: usize) -> Self {
                $name(BiTerms::zero(n))
            }

            pub fn one(n: usize) -> Self {
                Self::scalar(n, Rational::one())
            }

            pub fn scalar(n: usize, c: Rational) -> Self {
                let mut t = BiTerms::zero(n);
                t.add_term((0, 0), c);
                $name(t)
            }

            /// `c * a_{a[0]} ^ .. ^ b_{b[0]} ^ ..`; indices are sorted and must not repeat.
            pub fn basis(n: usize, a: &[usize], b: &[usize], c: Rational) -> Self {
                let (mut a, mut b) = (a.to_vec(), b.to_vec());
                a.sort_unstable();
                b.sort_unstable();
                assert!(a.iter().chain(&b).all(|&i| i < n), "index out of range");
                assert!(
                    a.windows(2).all(|w| w[0] < w[1]) && b.windows(2).all(|w| w[0] < w[1]),
                    "repeated index"
                );
                let mut t = BiTerms::zero(n);
                t.add_term((blade::from_indices(&a), blade::from_indices(&b)), c);
                $name(t)
            }

            pub(crate) fn from_key(n: usize, key: (u32, u32), c: Rational) -> Self {
                let mut t = BiTerms::zero(n);
                t.add_term(key, c);
                $name(t)
            }

            /// Model dimension.
            pub fn n(&self) -> usize {
                self.0.n
            }

            pub fn is_zero(&self) -> bool {
                self.0.terms.is_empty()
            }

            pub fn len(&self) -> usize {
                self.0.terms.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.terms.is_empty()
            }

            /// Terms as `((a-mask, b-mask), coefficient)`.
            pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &Rational)> {
                self.0.terms.iter().map(|(&k, c)| (k, c))
            }

            pub fn coeff(&self, a: &[usize], b: &[usize]) -> Rational {
                self.0
                    .terms
                    .get(&(blade::from_indices(a), blade::from_indices(b)))
                    .cloned()
                    .unwrap_or_else(Rational::zero)
            }

            /// Sorted list of bidegrees with a nonzero component.
            pub fn bidegrees(&self) -> Vec<(usize, usize)> {
                self.0.bidegrees()
            }

            pub fn component(&self, p: usize, q: usize) -> Self {
                $name(self.0.component(p, q))
            }

            pub fn is_pure(&self, p: usize, q: usize) -> bool {
                self.bidegrees().iter().all(|&d| d == (p, q))
            }

            pub fn require_pure(&self, p: usize, q: usize) -> Result<(), HodgeError> {
                if self.is_pure(p, q) {
                    Ok(())
                } else {
                    Err(HodgeError::WrongBidegree {
                        expected: (p, q),
                        found: self.bidegrees(),
                    })
                }
            }

            pub fn add(&self, other: &Self) -> Result<Self, HodgeError> {
                Ok($name(self.0.add(&other.0)?))
            }

            pub fn sub(&self, other: &Self) -> Result<Self, HodgeError> {
                Ok($name(self.0.add(&other.0.scale(&int(-1)))?))
            }

            pub fn scale(&self, c: &Rational) -> Self {
                $name(self.0.scale(c))
            }

            /// Graded-commutative product with the Koszul sign of total degree.
            pub fn wedge(&self, other: &Self) -> Result<Self, HodgeError> {
                Ok($name(self.0.wedge(&other.0)?))
            }

            /// Re-ingestible literal: a list of `{bidegree, terms: [{a, b, coeff}]}`.
            pub fn to_json(&self) -> Value {
                self.0.to_json("b")
            }

            pub fn from_literal(n: usize, literal: &[ComponentLiteral]) -> Result<Self, HodgeError> {
                Ok($name(BiTerms::from_literal(n, literal)?))
            }

            pub fn from_json(n: usize, text: &str) -> Result<Self, HodgeError> {
                let literal: Vec<ComponentLiteral> = serde_json::from_str(text)
                    .map_err(|e| HodgeError::InvalidLiteral(e.to_string()))?;
                Self::from_literal(n, &literal)
            }

            /// Every basis element of bidegree `(p, q)`.
            pub fn basis_of_bidegree(n: usize, p: usize, q: usize) -> Vec<Self> {
                let mut out = Vec::new();
                for a in blade::of_degree(n, p) {
                    for b in blade::of_degree(n, q) {
                        out.push(Self::from_key(n, (a, b), Rational::one()));
                    }
                }
                out
            }

            /// Every basis element, all bidegrees.
            pub fn full_basis(n: usize) -> Vec<Self> {
                let mut out = Vec::new();
                for a in 0u32..(1 << n) {
                    for b in 0u32..(1 << n) {
                        out.push(Self::from_key(n, (a, b), Rational::one()));
                    }
                }
                out
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_with(f, $dual)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}(n={}; {})", stringify!($name), self.0.n, self)
            }
        }
    };
}

/// Element of `/\A (x) /\B`, modeling `sum_{p,q} H^p(/\^q Omega)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FormClass(BiTerms);

/// Element of `/\A (x) /\B*`, modeling `sum_{p,q} H^p(/\^q T)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyClass(BiTerms);

bigraded_class!(FormClass, false);
bigraded_class!(PolyClass, true);

impl FormClass {
    /// `sum_k self^k / k!`; requires a zero constant term.
    pub fn exp(&self) -> Result<FormClass, HodgeError> {
        let c = self.coeff(&[], &[]);
        if !c.is_zero() {
            return Err(HodgeError::NonzeroConstant(format_rational(&c)));
        }
        let mut out = FormClass::one(self.n());
        let mut power = FormClass::one(self.n());
        for k in 1..=(2 * self.n()) {
            power = power.wedge(self)?.scale(&Rational::new(1.into(), (k as i64).into()));
            if power.is_zero() {
                break;
            }
            out = out.add(&power)?;
        }
        Ok(out)
    }

    /// The `B`-degree-zero part, read as an element of `/\A`.
    pub fn a_part(&self) -> ExtClass {
        let mut out = ExtClass::zero(self.n());
        for ((a, b), c) in self.terms() {
            if b == 0 {
                out.add_term(a, c.clone());
            }
        }
        out
    }

    /// Evaluates a Chern series, substituting a class for each variable.
    pub fn from_series(
        n: usize,
        series: &GradedSeries,
        subst: impl Fn(Var) -> FormClass,
    ) -> Result<FormClass, HodgeError> {
        let mut out = FormClass::zero(n);
        for (m, c) in series.terms() {
            let mut term = FormClass::scalar(n, c.clone());
            for &v in m.vars() {
                term = term.wedge(&subst(v))?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Square root of a class with constant term 1 built from `(p, p)` pieces,
    /// solved degree by degree: `s_d = (t_d - sum_{0<i<d} s_i s_{d-i}) / 2`.
    pub fn sqrt_unipotent(&self) -> Result<FormClass, HodgeError> {
        let t = self.diagonal_pieces()?;
        let n = self.n();
        let mut s = vec![FormClass::one(n)];
        for d in 1..=n {
            let mut rest = t[d].clone();
            for i in 1..d {
                rest = rest.sub(&s[i].wedge(&s[d - i])?)?;
            }
            s.push(rest.scale(&Rational::new(1.into(), 2.into())));
        }
        s.into_iter().try_fold(FormClass::zero(n), |acc, p| acc.add(&p))
    }

    /// Inverse of a class with constant term 1 built from `(p, p)` pieces.
    pub fn inverse_unipotent(&self) -> Result<FormClass, HodgeError> {
        let t = self.diagonal_pieces()?;
        let n = self.n();
        let mut u = vec![FormClass::one(n)];
        for d in 1..=n {
            let mut acc = FormClass::zero(n);
            for i in 1..=d {
                acc = acc.sub(&t[i].wedge(&u[d - i])?)?;
            }
            u.push(acc);
        }
        u.into_iter().try_fold(FormClass::zero(n), |acc, p| acc.add(&p))
    }

    fn diagonal_pieces(&self) -> Result<Vec<FormClass>, HodgeError> {
        if !self.coeff(&[], &[]).is_one() {
            return Err(HodgeError::InvalidTodd(format!(
                "constant term is {}, expected 1",
                format_rational(&self.coeff(&[], &[]))
            )));
        }
        if let Some(&(p, q)) = self.bidegrees().iter().find(|(p, q)| p != q) {
            return Err(HodgeError::InvalidTodd(format!(
                "component of bidegree ({p}, {q}) is off the diagonal"
            )));
        }
        Ok((0..=self.n()).map(|d| self.component(d, d)).collect())
    }
}

/// Element of `/\A`, modeling `Ext^*(L, L)`; graded by `A`-degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtClass {
    n: usize,
    terms: BTreeMap<u32, Rational>,
}

impl ExtClass {
    pub fn zero(n: usize) -> Self {
        ExtClass {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, mask: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(mask).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: &[usize]) -> Rational {
        self.terms
            .get(&blade::from_indices(a))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn degree_part(&self, d: usize) -> ExtClass {
        ExtClass {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.count_ones() as usize == d)
                .map(|(&m, c)| (m, c.clone()))
                .collect(),
        }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|m| m.count_ones() as usize).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Coordinates on the `2^n` basis blades of `/\A`, indexed by mask.
    pub fn coordinates(&self) -> Vec<Rational> {
        (0u32..(1 << self.n))
            .map(|m| self.terms.get(&m).cloned().unwrap_or_else(Rational::zero))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(&m, c)| serde_json::json!({"a": blade::indices(m), "coeff": format_rational(c)}))
            .collect();
        Value::Array(terms)
    }
}

impl fmt::Debug for ExtClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&m, c)| format!("{}*{:?}", format_rational(c), blade::indices(m)))
            .collect();
        write!(f, "ExtClass(n={}; {})", self.n, parts.join(" + "))
    }
}

/// Polyvector acting on a form: `a_I b*_J _| v = a_I ^ i_J(v)`.
///
/// A `(p, q)` polyvector sends a `(p', q')` form to bidegree `(p + p', q' - q)`.
pub fn contract_t_on_omega(alpha: &PolyClass, v: &FormClass) -> Result<FormClass, HodgeError> {
    alpha.0.check_same(&v.0)?;
    let n = alpha.n();
    let mut out = BiTerms::zero(n);
    for ((ai, bj), x) in alpha.terms() {
        for ((ak, bl), y) in v.terms() {
            let Some((s1, rest)) = blade::interior(bj, bl) else {
                continue;
            };
            let s2 = blade::merge_sign(ai, ak);
            if s2 == 0 {
                continue;
            }
            // i_J moves past a_K
            let s3 = blade::parity(bj.count_ones() * ak.count_ones());
            out.add_term((ai | ak, rest), int((s1 * s2 * s3) as i64) * x * y);
        }
    }
    Ok(FormClass(out))
}

/// Form acting on a polyvector: `a_K b_L _| alpha = a_K ^ i'_L(alpha)` with
/// the transposed pairing `i'_l(b*_j) = -delta_lj`.
pub fn contract_omega_on_t(u: &FormClass, alpha: &PolyClass) -> Result<PolyClass, HodgeError> {
    u.0.check_same(&alpha.0)?;
    let n = u.n();
    let mut out = BiTerms::zero(n);
    for ((ak, bl), x) in u.terms() {
        for ((ai, bj), y) in alpha.terms() {
            let Some((s1, rest)) = blade::interior(bl, bj) else {
                continue;
            };
            let s2 = blade::merge_sign(ak, ai);
            if s2 == 0 {
                continue;
            }
            let m = bl.count_ones();
            // one transposition sign per pairing, plus i'_L moving past a_I
            let s3 = blade::parity(m) * blade::parity(m * ai.count_ones());
            out.add_term((ak | ai, rest), int((s1 * s2 * s3) as i64) * x * y);
        }
    }
    Ok(PolyClass(out))
}

/// Full contraction of `alpha` against `exp(at)`.
///
/// The `(p, k)` part of `alpha` pairs its `/\^k B*` factor with the `/\^k B`
/// factor of `at^k / k!`, and the `A`-factors are wedged; the result lies in
/// `/\^{p+k} A`. Computed with the closed-form pairing sign
/// `<b*_J, b_J> = (-1)^{k(k-1)/2}`, independently of
/// [`contract_t_on_omega`].
pub fn contract_exp_atiyah(alpha: &PolyClass, at: &FormClass) -> Result<ExtClass, HodgeError> {
    alpha.0.check_same(&at.0)?;
    at.require_pure(1, 1)?;
    let n = alpha.n();
    // powers[k] = at^k / k!
    let mut powers = vec![FormClass::one(n)];
    for k in 1..=n {
        let next = powers[k - 1]
            .wedge(at)?
            .scale(&Rational::new(1.into(), (k as i64).into()));
        powers.push(next);
    }
    let mut out = ExtClass::zero(n);
    for ((ai, bj), x) in alpha.terms() {
        let k = bj.count_ones();
        for ((ak, bl), y) in powers[k as usize].terms() {
            if bl != bj {
                continue;
            }
            let s = blade::merge_sign(ai, ak)
                * blade::parity(k * (k.saturating_sub(1)) / 2)
                * blade::parity(k * ak.count_ones());
            if s != 0 {
                out.add_term(ai | ak, int(s as i64) * x * y);
            }
        }
    }
    Ok(out)
}

/// The Atiyah class of line-bundle data is its first Chern class.
pub fn atiyah_line(model: &HodgeModel, c1: &FormClass) -> Result<FormClass, HodgeError> {
    model.check(c1)?;
    c1.require_pure(1, 1)?;
    Ok(c1.clone())
}

/// The two spaces together with a Todd datum.
#[derive(Clone, PartialEq, Eq)]
pub struct HodgeModel {
    n: usize,
    todd: FormClass,
    sqrt_todd: FormClass,
    inv_sqrt_todd: FormClass,
}

impl fmt::Debug for HodgeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HodgeModel(n={}, todd={})", self.n, self.todd)
    }
}

impl HodgeModel {
    /// `todd` must have constant term 1 and only `(p, p)` components.
    pub fn new(n: usize, todd: FormClass) -> Result<Self, HodgeError> {
        check_dim(n)?;
        if todd.n() != n {
            return Err(HodgeError::ModelMismatch {
                left: n,
                right: todd.n(),
            });
        }
        let sqrt_todd = todd.sqrt_unipotent()?;
        let inv_sqrt_todd = sqrt_todd.inverse_unipotent()?;
        Ok(HodgeModel {
            n,
            todd,
            sqrt_todd,
            inv_sqrt_todd,
        })
    }

    /// Todd datum 1: the Duflo operator is the identity.
    pub fn trivial(n: usize) -> Result<Self, HodgeError> {
        Self::new(n, FormClass::one(n))
    }

    /// Todd datum from Chern data: `chern[i]` is `c_{i+1}`, of bidegree
    /// `(i+1, i+1)`; missing classes are zero.
    pub fn from_chern_classes(n: usize, chern: &[FormClass]) -> Result<Self, HodgeError> {
        for (i, c) in chern.iter().enumerate() {
            if c.n() != n {
                return Err(HodgeError::ModelMismatch { left: n, right: c.n() });
            }
            c.require_pure(i + 1, i + 1)?;
        }
        let series = crate::series::todd(n);
        let todd = FormClass::from_series(n, &series, |v| {
            chern
                .get(v.index as usize - 1)
                .cloned()
                .unwrap_or_else(|| FormClass::zero(n))
        })?;
        Self::new(n, todd)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn todd(&self) -> &FormClass {
        &self.todd
    }

    pub fn sqrt_todd(&self) -> &FormClass {
        &self.sqrt_todd
    }

    pub fn inv_sqrt_todd(&self) -> &FormClass {
        &self.inv_sqrt_todd
    }

    /// Twice the `(1,1)` part of the Todd datum.
    pub fn first_chern(&self) -> FormClass {
        self.todd.component(1, 1).scale(&int(2))
    }

    fn check(&self, v: &FormClass) -> Result<(), HodgeError> {
        if v.n() != self.n {
            return Err(HodgeError::ModelMismatch {
                left: self.n,
                right: v.n(),
            });
        }
        Ok(())
    }

    fn check_poly(&self, alpha: &PolyClass) -> Result<(), HodgeError> {
        if alpha.n() != self.n {
            return Err(HodgeError::ModelMismatch {
                left: self.n,
                right: alpha.n(),
            });
        }
        Ok(())
    }

    /// `D(alpha) = Td^(1/2) _| alpha`.
    pub fn duflo(&self, alpha: &PolyClass) -> Result<PolyClass, HodgeError> {
        self.check_poly(alpha)?;
        contract_omega_on_t(&self.sqrt_todd, alpha)
    }

    /// `D^-1(alpha) = Td^(-1/2) _| alpha`.
    pub fn duflo_inverse(&self, alpha: &PolyClass) -> Result<PolyClass, HodgeError> {
        self.check_poly(alpha)?;
        contract_omega_on_t(&self.inv_sqrt_todd, alpha)
    }

    /// `exp(c1) ^ Td^(1/2)`: the Mukai vector of line-bundle data, with the
    /// HKR map taken as the identity.
    pub fn mukai_line(&self, c1: &FormClass) -> Result<FormClass, HodgeError> {
        let at = atiyah_line(self, c1)?;
        at.exp()?.wedge(&self.sqrt_todd)
    }

    /// Evaluates `h = alpha _| exp(at)` and `m = D(alpha) _| v(L)`.
    pub fn implication_check(&self, alpha: &PolyClass, c1: &FormClass) -> Result<ImplicationReport, HodgeError> {
        let at = atiyah_line(self, c1)?;
        let obstruction = contract_exp_atiyah(alpha, &at)?;
        let image = contract_t_on_omega(&self.duflo(alpha)?, &self.mukai_line(c1)?)?;
        Ok(ImplicationReport { obstruction, image })
    }

    /// Basis of `{alpha : alpha _| exp(at) = 0}` over the whole polyvector space.
    pub fn hypothesis_kernel(&self, c1: &FormClass) -> Result<Vec<PolyClass>, HodgeError> {
        let at = atiyah_line(self, c1)?;
        let basis = PolyClass::full_basis(self.n);
        let columns = basis
            .iter()
            .map(|b| contract_exp_atiyah(b, &at).map(|e| e.coordinates()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(kernel_in_basis(&basis, &columns))
    }

    /// Checks of the `H^1(T)` case for a `(1,1)` polyvector, with `c1` read off
    /// the Todd datum as twice its `(1,1)` part.
    pub fn special_case_check(&self, alpha: &PolyClass) -> Result<SpecialCaseReport, HodgeError> {
        self.check_poly(alpha)?;
        alpha.require_pure(1, 1)?;
        let c1 = self.first_chern();
        let quarter = Rational::new(1.into(), 4.into());
        let half = Rational::new(1.into(), 2.into());

        let duflo = self.duflo(alpha)?;
        let duflo_shift = duflo.sub(alpha)?;
        let expected_shift = contract_omega_on_t(&c1.scale(&quarter), alpha)?;

        let pairing = contract_t_on_omega(&duflo, &self.sqrt_todd)?;
        let h2_component = pairing.component(2, 0);
        let expected_h2 = contract_t_on_omega(alpha, &c1.scale(&half))?;

        let kills_c1 = contract_t_on_omega(alpha, &c1)?.is_zero();
        let kills_mukai = pairing.is_zero();
        Ok(SpecialCaseReport {
            c1,
            duflo_shift,
            expected_shift,
            h2_component,
            expected_h2,
            kills_c1,
            kills_mukai,
        })
    }

    /// Both vanishing loci over the whole `(1,1)` polyvector space.
    pub fn special_case_loci(&self) -> Result<LociReport, HodgeError> {
        let n = self.n;
        let c1 = self.first_chern();
        let basis = PolyClass::basis_of_bidegree(n, 1, 1);
        let against_c1 = basis
            .iter()
            .map(|b| contract_t_on_omega(b, &c1).map(|f| form_coordinates(&f)))
            .collect::<Result<Vec<_>, _>>()?;
        let against_mukai = basis
            .iter()
            .map(|b| {
                let d = self.duflo(b)?;
                contract_t_on_omega(&d, &self.sqrt_todd).map(|f| form_coordinates(&f))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let locus_c1 = kernel_in_basis(&basis, &against_c1);
        let locus_mukai = kernel_in_basis(&basis, &against_mukai);
        let coincide = span_equal(&basis, &locus_c1, &locus_mukai);
        Ok(LociReport {
            locus_c1,
            locus_mukai,
            coincide,
        })
    }

    /// Images `D(b) _| v(L)` of every polyvector basis element, in
    /// [`PolyClass::full_basis`] order.
    pub fn image_table(&self, c1: &FormClass) -> Result<Vec<FormClass>, HodgeError> {
        let v = self.mukai_line(c1)?;
        PolyClass::full_basis(self.n)
            .iter()
            .map(|b| contract_t_on_omega(&self.duflo(b)?, &v))
            .collect()
    }

    /// Checks `D(alpha) _| v(L) = 0` on a basis of the hypothesis kernel.
    pub fn implication_sweep(&self, c1: &FormClass) -> Result<ImplicationSweep, HodgeError> {
        let kernel = self.hypothesis_kernel(c1)?;
        let images = self.image_table(c1)?;
        let basis_keys: Vec<Key> = PolyClass::full_basis(self.n)
            .iter()
            .map(|b| b.terms().next().expect("nonzero").0)
            .collect();
        let index: BTreeMap<Key, usize> = basis_keys.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let mut failure = None;
        for alpha in &kernel {
            let mut image = FormClass::zero(self.n);
            for (key, c) in alpha.terms() {
                image = image.add(&images[index[&key]].scale(c))?;
            }
            if !image.is_zero() {
                failure = Some((alpha.clone(), image));
                break;
            }
        }
        Ok(ImplicationSweep {
            kernel_dim: kernel.len(),
            failure,
        })
    }
}

#[derive(Debug, Clone)]
pub struct ImplicationSweep {
    pub kernel_dim: usize,
    /// First kernel element with a nonzero image, and that image.
    pub failure: Option<(PolyClass, FormClass)>,
}

#[derive(Debug, Clone)]
pub struct LociReport {
    /// `{alpha in (1,1) : alpha _| c1 = 0}`.
    pub locus_c1: Vec<PolyClass>,
    /// `{alpha in (1,1) : D(alpha) _| Td^(1/2) = 0}`.
    pub locus_mukai: Vec<PolyClass>,
    pub coincide: bool,
}

/// Coordinates of a form on the full `4^n` basis, in [`FormClass::full_basis`] order.
fn form_coordinates(f: &FormClass) -> Vec<Rational> {
    let n = f.n();
    let mut out = vec![Rational::zero(); 1 << (2 * n)];
    for ((a, b), c) in f.terms() {
        out[((a as usize) << n) | b as usize] = c.clone();
    }
    out
}

fn poly_coordinates(basis: &[PolyClass], alpha: &PolyClass) -> Vec<Rational> {
    basis
        .iter()
        .map(|b| {
            let (key, _) = b.terms().next().expect("basis elements are nonzero");
            alpha.0.terms.get(&key).cloned().unwrap_or_else(Rational::zero)
        })
        .collect()
}

/// Kernel of the linear map whose value on `basis[j]` has coordinates `columns[j]`.
fn kernel_in_basis(basis: &[PolyClass], columns: &[Vec<Rational>]) -> Vec<PolyClass> {
    let rows = columns.first().map_or(0, Vec::len);
    let mut m = Matrix::zeros(rows, basis.len());
    for (j, col) in columns.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            m[(i, j)] = v.clone();
        }
    }
    let n = basis.first().map_or(0, PolyClass::n);
    m.kernel()
        .into_iter()
        .map(|v| {
            let mut t = BiTerms::zero(n);
            for (b, c) in basis.iter().zip(v) {
                for (key, one) in b.terms() {
                    t.add_term(key, one * &c);
                }
            }
            PolyClass(t)
        })
        .collect()
}

fn span_equal(basis: &[PolyClass], left: &[PolyClass], right: &[PolyClass]) -> bool {
    let to_matrix = |vs: &[PolyClass]| {
        Matrix::from_rows(vs.iter().map(|v| poly_coordinates(basis, v)).collect())
            .expect("equal lengths")
    };
    if left.len() != right.len() {
        return false;
    }
    if left.is_empty() {
        return true;
    }
    to_matrix(left).row_space_basis() == to_matrix(right).row_space_basis()
}

#[derive(Debug, Clone)]
pub struct ImplicationReport {
    /// `alpha _| exp(at)` in `/\A`.
    pub obstruction: ExtClass,
    /// `D(alpha) _| v(L)`.
    pub image: FormClass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Implication {
    /// The obstruction is nonzero; nothing to check.
    Vacuous,
    Holds,
    Violated,
}

impl ImplicationReport {
    pub fn implication(&self) -> Implication {
        match (self.obstruction.is_zero(), self.image.is_zero()) {
            (false, _) => Implication::Vacuous,
            (true, true) => Implication::Holds,
            (true, false) => Implication::Violated,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpecialCaseReport {
    pub c1: FormClass,
    /// `D(alpha) - alpha`.
    pub duflo_shift: PolyClass,
    /// `(c1/4) _| alpha`.
    pub expected_shift: PolyClass,
    /// `/\^2 A` component of `D(alpha) _| Td^(1/2)`.
    pub h2_component: FormClass,
    /// `alpha _| (c1/2)`.
    pub expected_h2: FormClass,
    /// `alpha _| c1 = 0`.
    pub kills_c1: bool,
    /// `D(alpha) _| Td^(1/2) = 0`.
    pub kills_mukai: bool,
}

impl SpecialCaseReport {
    pub fn shift_holds(&self) -> bool {
        self.duflo_shift == self.expected_shift
    }

    pub fn h2_holds(&self) -> bool {
        self.h2_component == self.expected_h2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ratio;

    fn form(n: usize, a: &[usize], b: &[usize]) -> FormClass {
        FormClass::basis(n, a, b, int(1))
    }

    fn poly(n: usize, a: &[usize], b: &[usize]) -> PolyClass {
        PolyClass::basis(n, a, b, int(1))
    }

    #[test]
    fn interior_signs() {
        // i_1(b0 b1) = -b0, i_0(b0 b1) = b1
        assert_eq!(blade::interior(0b10, 0b11), Some((-1, 0b01)));
        assert_eq!(blade::interior(0b01, 0b11), Some((1, 0b10)));
        // i_0 i_1 (b0 b1) = i_0(-b0) = -1
        assert_eq!(blade::interior(0b11, 0b11), Some((-1, 0)));
        assert_eq!(blade::interior(0b100, 0b11), None);
    }

    #[test]
    fn unit_acts_trivially() {
        let v = form(2, &[0], &[0, 1]).add(&form(2, &[], &[1]).scale(&ratio(2, 3))).unwrap();
        assert_eq!(FormClass::one(2).wedge(&v).unwrap(), v);
        assert_eq!(contract_t_on_omega(&PolyClass::one(2), &v).unwrap(), v);
        let a = poly(2, &[1], &[0]);
        assert_eq!(contract_omega_on_t(&FormClass::one(2), &a).unwrap(), a);
    }

    #[test]
    fn degree_one_generators_anticommute() {
        let a1 = form(2, &[0], &[]);
        let a2 = form(2, &[1], &[]);
        let x = a1.wedge(&a2).unwrap();
        let y = a2.wedge(&a1).unwrap();
        assert_eq!(x, y.scale(&int(-1)));
        assert_eq!(x.coeff(&[0, 1], &[]), int(1));
    }

    #[test]
    fn rank_one_products_pick_up_the_middle_swap() {
        // (a0 b0) ^ (a1 b1) = a0 b0 a1 b1 = -a0 a1 b0 b1
        let p = form(2, &[0], &[0]).wedge(&form(2, &[1], &[1])).unwrap();
        assert_eq!(p, form(2, &[0, 1], &[0, 1]).scale(&int(-1)));
    }

    #[test]
    fn polyvector_on_form_left_interior() {
        let r = contract_t_on_omega(&poly(2, &[], &[0]), &form(2, &[], &[0, 1])).unwrap();
        assert_eq!(r, form(2, &[], &[1]));
        // q > q' gives zero
        let r = contract_t_on_omega(&poly(2, &[], &[0, 1]), &form(2, &[], &[0])).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn form_on_polyvector_uses_transposed_pairing() {
        let r = contract_omega_on_t(&form(2, &[], &[0]), &poly(2, &[], &[0, 1])).unwrap();
        assert_eq!(r, poly(2, &[], &[1]).scale(&int(-1)));
    }

    #[test]
    fn contractions_agree_on_one_one_pairs() {
        let n = 3;
        for a in PolyClass::basis_of_bidegree(n, 1, 1) {
            for c in FormClass::basis_of_bidegree(n, 1, 1) {
                let x = contract_t_on_omega(&a, &c).unwrap();
                let y = contract_omega_on_t(&c, &a).unwrap();
                let xs: Vec<_> = x.terms().map(|(k, c)| (k, c.clone())).collect();
                let ys: Vec<_> = y.terms().map(|(k, c)| (k, c.clone())).collect();
                assert_eq!(xs, ys);
            }
        }
    }

    #[test]
    fn exp_examples() {
        assert_eq!(FormClass::zero(2).exp().unwrap(), FormClass::one(2));
        let v = form(2, &[0], &[1]);
        assert_eq!(v.exp().unwrap(), FormClass::one(2).add(&v).unwrap());
        let c1 = form(2, &[0], &[0]).add(&form(2, &[1], &[1])).unwrap();
        let e = c1.exp().unwrap();
        assert_eq!(e.component(2, 2), form(2, &[0, 1], &[0, 1]).scale(&int(-1)));
        assert!(matches!(FormClass::one(2).exp(), Err(HodgeError::NonzeroConstant(_))));
    }

    #[test]
    fn exp_atiyah_examples() {
        let n = 2;
        // q = 0: only the constant term of exp(at) contributes
        let alpha = poly(n, &[1], &[]);
        let at = form(n, &[0], &[0]);
        let h = contract_exp_atiyah(&alpha, &at).unwrap();
        assert_eq!(h.coeff(&[1]), int(1));
        assert_eq!(h.degrees(), vec![1]);

        // a0 b*0 against a1 b0: a0 ^ i_0(a1 b0) = -a0 a1
        let h = contract_exp_atiyah(&poly(n, &[0], &[0]), &form(n, &[1], &[0])).unwrap();
        assert_eq!(h.coeff(&[0, 1]), int(-1));

        // (0,2) against a rank-one class: at^2 = 0
        let h = contract_exp_atiyah(&poly(n, &[], &[0, 1]), &at).unwrap();
        assert!(h.is_zero());

        let err = contract_exp_atiyah(&alpha, &form(n, &[0], &[])).unwrap_err();
        assert!(matches!(err, HodgeError::WrongBidegree { .. }));
    }

    #[test]
    fn atiyah_line_examples() {
        let m = HodgeModel::trivial(2).unwrap();
        assert!(atiyah_line(&m, &FormClass::zero(2)).unwrap().is_zero());
        let c = form(2, &[0], &[0]);
        assert_eq!(atiyah_line(&m, &c).unwrap(), c);
        assert!(atiyah_line(&m, &form(2, &[0, 1], &[0])).is_err());
        assert!(matches!(
            atiyah_line(&m, &form(3, &[0], &[0])),
            Err(HodgeError::ModelMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn trivial_todd_gives_identity_duflo() {
        let m = HodgeModel::trivial(2).unwrap();
        let a = poly(2, &[0], &[1]).add(&poly(2, &[], &[0, 1])).unwrap();
        assert_eq!(m.duflo(&a).unwrap(), a);
        assert_eq!(m.duflo_inverse(&a).unwrap(), a);
    }

    #[test]
    fn todd_datum_validation() {
        assert!(HodgeModel::new(2, FormClass::scalar(2, int(2))).is_err());
        let off = FormClass::one(2).add(&form(2, &[0], &[])).unwrap();
        assert!(matches!(HodgeModel::new(2, off), Err(HodgeError::InvalidTodd(_))));
        assert!(matches!(HodgeModel::trivial(17), Err(HodgeError::Dimension(17))));
    }

    #[test]
    fn mukai_line_examples() {
        let m = HodgeModel::trivial(2).unwrap();
        assert_eq!(m.mukai_line(&FormClass::zero(2)).unwrap(), FormClass::one(2));
        let c = form(2, &[1], &[0]);
        assert_eq!(m.mukai_line(&c).unwrap(), FormClass::one(2).add(&c).unwrap());
    }

    #[test]
    fn json_literal_round_trip_and_validation() {
        let v = form(3, &[0, 2], &[1]).scale(&ratio(-1, 2)).add(&FormClass::one(3)).unwrap();
        let text = v.to_json().to_string();
        assert_eq!(FormClass::from_json(3, &text).unwrap(), v);

        let unsorted = r#"[{"bidegree":[2,0],"terms":[{"a":[1,0],"b":[],"coeff":"1"}]}]"#;
        assert!(matches!(FormClass::from_json(2, unsorted), Err(HodgeError::InvalidLiteral(_))));
        let wrong = r#"[{"bidegree":[1,1],"terms":[{"a":[0],"b":[],"coeff":"1"}]}]"#;
        assert!(FormClass::from_json(2, wrong).is_err());
        let range = r#"[{"bidegree":[1,0],"terms":[{"a":[5],"b":[],"coeff":"1"}]}]"#;
        assert!(PolyClass::from_json(2, range).is_err());
    }

    #[test]
    fn model_mismatch_is_reported() {
        let err = contract_t_on_omega(&PolyClass::one(2), &FormClass::one(3)).unwrap_err();
        assert_eq!(err, HodgeError::ModelMismatch { left: 2, right: 3 });
        assert!(FormClass::one(2).wedge(&FormClass::one(1)).is_err());
    }
}
