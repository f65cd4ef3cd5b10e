//! Tensor and symmetric algebras over a Lie algebra, and the two routes from
//! `S(g)` to `End(V)`.
//!
//! * `theta`: a word `x_{i1} ... x_{ik}` acts as `rho(x_{i1}) ... rho(x_{ik})`,
//!   i.e. through the enveloping algebra.
//! * `phi`: the action rewritten as `Lambda: V -> V (x) g*`, iterated `k`
//!   times and contracted against the word.
//!
//! The symmetrization map sends a commutative monomial to the average of its
//! orderings. `s_to_hom` is `phi` after symmetrization, which is how the
//! degree-`n` part of `S(g)` meets the `Lambda^n / n!` term of `exp(Lambda)`.
//! The enveloping algebra itself is never built.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::lie::{LieAlgebra, Representation};
use crate::linalg::{format_rational, int, Matrix, Rational};

/// A word in the basis of `g`, read left to right.
pub type Word = Vec<usize>;

/// Element of the tensor algebra `T(g)`: a linear combination of words.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct TensorElement {
    terms: BTreeMap<Word, Rational>,
}

impl TensorElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn word(w: impl Into<Word>) -> Self {
        Self::term(w, Rational::one())
    }

    pub fn term(w: impl Into<Word>, c: Rational) -> Self {
        let mut t = Self::zero();
        t.add_term(w.into(), c);
        t
    }

    pub fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &[usize]) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    /// Concatenation product in `T(g)`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.iter().chain(v).copied().collect(), a * b);
            }
        }
        out
    }

    /// `true` if swapping any two letters of every word leaves the element fixed.
    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(w, c)| {
            (0..w.len()).tuple_combinations().all(|(i, j)| {
                let mut s = w.clone();
                s.swap(i, j);
                self.coeff(&s) == *c
            })
        })
    }
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("{}*{:?}", format_rational(c), w))
            .collect();
        write!(f, "T[{}]", parts.join(" + "))
    }
}

/// A commutative monomial, stored as a sorted multiset of basis indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymMonomial(Vec<usize>);

impl SymMonomial {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        SymMonomial(indices)
    }

    pub fn one() -> Self {
        SymMonomial(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// All monomials of degree `d` in `dim` variables, in lexicographic order.
    pub fn all_of_degree(dim: usize, d: usize) -> Vec<SymMonomial> {
        if d == 0 {
            return vec![SymMonomial::one()];
        }
        (0..dim)
            .combinations_with_replacement(d)
            .map(SymMonomial)
            .collect()
    }

    /// Average over all `n!` orderings of the letters.
    ///
    /// Every permutation is enumerated; repeated letters merge afterwards.
    pub fn symmetrize(&self) -> TensorElement {
        let n = self.degree();
        let weight = Rational::new(1.into(), factorial(n).into());
        let mut out = TensorElement::zero();
        if n == 0 {
            out.add_term(Vec::new(), Rational::one());
            return out;
        }
        for perm in (0..n).permutations(n) {
            let w = perm.iter().map(|&p| self.0[p]).collect();
            out.add_term(w, weight.clone());
        }
        out
    }

    pub fn display(&self, alg: &LieAlgebra) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0.iter().map(|&i| alg.label(i)).join("*")
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Element of `S(g)`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct SymElement {
    terms: BTreeMap<SymMonomial, Rational>,
}

impl SymElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: SymMonomial) -> Self {
        Self::term(m, Rational::one())
    }

    pub fn term(m: SymMonomial, c: Rational) -> Self {
        let mut s = Self::zero();
        s.add_term(m, c);
        s
    }

    pub fn add_term(&mut self, m: SymMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SymMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &SymMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    /// The symmetrization map, extended linearly.
    pub fn symmetrize(&self) -> TensorElement {
        let mut out = TensorElement::zero();
        for (m, c) in &self.terms {
            for (w, v) in m.symmetrize().terms {
                out.add_term(w, v * c);
            }
        }
        out
    }

    pub fn display(&self, alg: &LieAlgebra) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let sign = match (n, c.is_negative()) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let magnitude = c.abs();
            out.push_str(sign);
            if m.degree() == 0 {
                out.push_str(&format_rational(&magnitude));
            } else if magnitude.is_one() {
                out.push_str(&m.display(alg));
            } else {
                out.push_str(&format!("{}*{}", format_rational(&magnitude), m.display(alg)));
            }
        }
        out
    }

    /// Re-ingestible literal: `{"terms": [{"monomial": [..], "coeff": "p/q"}]}`.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| json!({"monomial": m.0, "coeff": format_rational(c)}))
            .collect();
        json!({ "terms": terms })
    }
}

impl fmt::Debug for SymElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| format!("{}*{:?}", format_rational(c), m.0))
            .collect();
        write!(f, "S[{}]", parts.join(" + "))
    }
}

/// Action of `x_i` on `S(g)` extended as a derivation of `ad(x_i)`.
pub fn derivation(alg: &LieAlgebra, i: usize, s: &SymElement) -> SymElement {
    let mut out = SymElement::zero();
    for (m, c) in s.terms() {
        for (pos, &letter) in m.indices().iter().enumerate() {
            for (k, coeff) in alg.bracket(i, letter).iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let mut idx = m.indices().to_vec();
                idx[pos] = k;
                out.add_term(SymMonomial::new(idx), c * coeff);
            }
        }
    }
    out
}

/// Basis of the degree-`degree` invariants `S^d(g)^g`, as the common kernel
/// of the derivations of `ad(x_i)` stacked into one matrix.
pub fn invariants_s(alg: &LieAlgebra, degree: usize) -> Vec<SymElement> {
    let basis = SymMonomial::all_of_degree(alg.dim(), degree);
    let index: BTreeMap<&SymMonomial, usize> = basis.iter().enumerate().map(|(k, m)| (m, k)).collect();
    let blocks: Vec<Matrix> = (0..alg.dim())
        .map(|i| {
            let mut d = Matrix::zeros(basis.len(), basis.len());
            for (col, m) in basis.iter().enumerate() {
                let image = derivation(alg, i, &SymElement::monomial(m.clone()));
                for (mm, c) in image.terms() {
                    d[(index[mm], col)] = c.clone();
                }
            }
            d
        })
        .collect();
    let stacked = Matrix::vstack(&blocks).expect("common column count");
    let kernel = if blocks.is_empty() {
        Matrix::zeros(0, basis.len()).kernel()
    } else {
        stacked.kernel()
    };
    let out: Vec<SymElement> = kernel
        .into_iter()
        .map(|v| {
            let mut s = SymElement::zero();
            for (m, c) in basis.iter().zip(v) {
                s.add_term(m.clone(), c);
            }
            s
        })
        .collect();
    for s in &out {
        for i in 0..alg.dim() {
            assert!(
                derivation(alg, i, s).is_zero(),
                "kernel vector {s:?} is not invariant under {}",
                alg.label(i)
            );
        }
    }
    out
}

/// The path through the enveloping algebra: `(i1, .., ik) -> rho(x_i1) ... rho(x_ik)`.
pub fn theta(rep: &Representation, t: &TensorElement) -> Matrix {
    let n = rep.dim();
    let mut out = Matrix::zeros(n, n);
    for (w, c) in t.terms() {
        let mut m = Matrix::identity(n);
        for &i in w {
            m = m.mul(rep.matrix(i)).expect("square matrices");
        }
        out.add_scaled(c, &m).expect("equal shapes");
    }
    out
}

/// The action reshaped as `Lambda: V -> V (x) g*`, stored as `[out][in][slot]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaMap {
    dim_v: usize,
    dim_g: usize,
    entries: Vec<Rational>,
}

impl LambdaMap {
    pub fn new(rep: &Representation) -> Self {
        let (dim_v, dim_g) = (rep.dim(), rep.algebra().dim());
        let mut entries = vec![Rational::zero(); dim_v * dim_v * dim_g];
        for g in 0..dim_g {
            let m = rep.matrix(g);
            for o in 0..dim_v {
                for i in 0..dim_v {
                    entries[(o * dim_v + i) * dim_g + g] = m[(o, i)].clone();
                }
            }
        }
        LambdaMap {
            dim_v,
            dim_g,
            entries,
        }
    }

    pub fn get(&self, out: usize, input: usize, slot: usize) -> &Rational {
        &self.entries[(out * self.dim_v + input) * self.dim_g + slot]
    }

    /// Pairs the `g*` slot with `x` (given in coordinates).
    pub fn contract(&self, x: &[Rational]) -> Matrix {
        let mut m = Matrix::zeros(self.dim_v, self.dim_v);
        for o in 0..self.dim_v {
            for i in 0..self.dim_v {
                let mut acc = Rational::zero();
                for (g, xg) in x.iter().enumerate() {
                    if !xg.is_zero() {
                        acc += self.get(o, i, g) * xg;
                    }
                }
                m[(o, i)] = acc;
            }
        }
        m
    }
}

/// The iterates `Lambda^(k): V -> V (x) (g*)^(k)` for `k <= max_degree`.
///
/// Slots are recorded in application order: slot 0 belongs to the `Lambda`
/// applied first. When contracting with a word, slot `m` pairs with the
/// letter at position `k - 1 - m`, so the first-applied factor meets the last
/// letter. With that pairing `phi` agrees with `theta` word by word.
#[derive(Debug, Clone)]
pub struct LambdaPowers {
    lambda: LambdaMap,
    /// `powers[k]` is indexed by `[out][in][slot multi-index]`, slot 0 most significant.
    powers: Vec<Vec<Rational>>,
}

impl LambdaPowers {
    pub fn new(rep: &Representation, max_degree: usize) -> Self {
        let lambda = LambdaMap::new(rep);
        let (v, g) = (lambda.dim_v, lambda.dim_g);
        let mut identity = vec![Rational::zero(); v * v];
        for i in 0..v {
            identity[i * v + i] = Rational::one();
        }
        let mut powers = vec![identity];
        for k in 1..=max_degree {
            let prev = &powers[k - 1];
            let prev_slots = g.pow(k as u32 - 1);
            let slots = prev_slots * g;
            let mut next = vec![Rational::zero(); v * v * slots];
            // next[o][i][(s, j)] = sum_mid Lambda[o][mid][j] * prev[mid][i][s]
            for o in 0..v {
                for mid in 0..v {
                    for j in 0..g {
                        let l = lambda.get(o, mid, j);
                        if l.is_zero() {
                            continue;
                        }
                        for i in 0..v {
                            for s in 0..prev_slots {
                                let p = &prev[(mid * v + i) * prev_slots + s];
                                if !p.is_zero() {
                                    next[(o * v + i) * slots + s * g + j] += l * p;
                                }
                            }
                        }
                    }
                }
            }
            powers.push(next);
        }
        LambdaPowers { lambda, powers }
    }

    pub fn lambda(&self) -> &LambdaMap {
        &self.lambda
    }

    pub fn max_degree(&self) -> usize {
        self.powers.len() - 1
    }

    /// Contraction of `Lambda^(k)` with one word of length `k`.
    pub fn contract_word(&self, w: &[usize]) -> Matrix {
        let k = w.len();
        assert!(k <= self.max_degree(), "word longer than the precomputed degree");
        let (v, g) = (self.lambda.dim_v, self.lambda.dim_g);
        let slots = g.pow(k as u32);
        // slot m (application order) pairs with w[k-1-m]; slot 0 is most significant
        let offset = (0..k).fold(0, |acc, m| acc * g + w[k - 1 - m]);
        let power = &self.powers[k];
        let mut out = Matrix::zeros(v, v);
        for o in 0..v {
            for i in 0..v {
                out[(o, i)] = power[(o * v + i) * slots + offset].clone();
            }
        }
        out
    }

    pub fn contract(&self, t: &TensorElement) -> Matrix {
        let v = self.lambda.dim_v;
        let mut out = Matrix::zeros(v, v);
        for (w, c) in t.terms() {
            out.add_scaled(c, &self.contract_word(w)).expect("equal shapes");
        }
        out
    }
}

/// Iterated-`Lambda` route for a tensor element.
pub fn phi(rep: &Representation, t: &TensorElement) -> Matrix {
    LambdaPowers::new(rep, t.max_degree()).contract(t)
}

/// `S(g) -> End(V)` through `exp(Lambda)`, realized as `phi` after symmetrization.
pub fn s_to_hom(rep: &Representation, s: &SymElement) -> Matrix {
    let t = s.symmetrize();
    LambdaPowers::new(rep, t.max_degree()).contract(&t)
}

#[derive(Debug, Clone)]
pub struct LieDiagramReport {
    /// `theta(symmetrize(s))`.
    pub via_enveloping: Matrix,
    /// `s_to_hom(s)`.
    pub via_exp_lambda: Matrix,
    pub difference: Matrix,
    /// For invariant `s`: whether the image commutes with every `rho(x_i)`.
    pub central: Option<bool>,
}

impl LieDiagramReport {
    pub fn agrees(&self) -> bool {
        self.difference.is_zero()
    }
}

/// Evaluates both sides of the diagram on `s`.
pub fn check_lie_diagram(rep: &Representation, s: &SymElement) -> LieDiagramReport {
    check_lie_diagram_with(rep, s, None)
}

/// As [`check_lie_diagram`], reusing precomputed `Lambda` iterates when given.
pub fn check_lie_diagram_with(
    rep: &Representation,
    s: &SymElement,
    powers: Option<&LambdaPowers>,
) -> LieDiagramReport {
    let t = s.symmetrize();
    let via_enveloping = theta(rep, &t);
    let via_exp_lambda = match powers {
        Some(p) if p.max_degree() >= t.max_degree() => p.contract(&t),
        _ => s_to_hom(rep, s),
    };
    let difference = via_enveloping.sub(&via_exp_lambda).expect("equal shapes");
    let alg = rep.algebra();
    let invariant = (0..alg.dim()).all(|i| derivation(alg, i, s).is_zero());
    let central = invariant.then(|| {
        rep.matrices()
            .iter()
            .all(|m| via_exp_lambda.commutator(m).expect("square").is_zero())
    });
    LieDiagramReport {
        via_enveloping,
        via_exp_lambda,
        difference,
        central,
    }
}

#[derive(Debug, Clone)]
pub struct AdjunctionReport {
    /// `(Lambda contracted with x_i, rho(x_i))` per basis element.
    pub pairs: Vec<(Matrix, Matrix)>,
}

impl AdjunctionReport {
    pub fn holds(&self) -> bool {
        self.pairs.iter().all(|(a, b)| a == b)
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.pairs.iter().position(|(a, b)| a != b)
    }
}

/// Contracting the `g*` slot of `Lambda` with `x_i` gives back `rho(x_i)`.
pub fn adjunction_check(rep: &Representation) -> AdjunctionReport {
    let lambda = LambdaMap::new(rep);
    let alg = rep.algebra();
    let pairs = (0..alg.dim())
        .map(|i| (lambda.contract(&alg.basis_vec(i)), rep.matrix(i).clone()))
        .collect();
    AdjunctionReport { pairs }
}

/// All words of length `k` over `dim` letters, lexicographic.
pub fn all_words(dim: usize, k: usize) -> Vec<Word> {
    let mut words = vec![Vec::new()];
    for _ in 0..k {
        words = words
            .into_iter()
            .flat_map(|w| {
                (0..dim).map(move |i| {
                    let mut w = w.clone();
                    w.push(i);
                    w
                })
            })
            .collect();
    }
    words
}

/// `theta(x_i x_j - x_j x_i) = theta([x_i, x_j])` for every pair.
pub fn enveloping_relation_holds(rep: &Representation) -> bool {
    let alg = rep.algebra();
    (0..alg.dim()).cartesian_product(0..alg.dim()).all(|(i, j)| {
        let lhs = TensorElement::word(vec![i, j]).add(&TensorElement::term(vec![j, i], int(-1)));
        let mut rhs = TensorElement::zero();
        for (k, c) in alg.bracket(i, j).iter().enumerate() {
            rhs.add_term(vec![k], c.clone());
        }
        theta(rep, &lhs) == theta(rep, &rhs)
    })
}
