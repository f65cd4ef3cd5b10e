//! Finite-dimensional Lie algebras given by structure constants, and their
//! matrix representations.
//!
//! Both types validate their axioms on construction, so every value that
//! exists downstream is a genuine Lie algebra / representation.

use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{format_rational, parse_rational, Matrix, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LieError {
    #[error("structure constants must be indexed {dim}x{dim}x{dim}")]
    ConstantsShape { dim: usize },
    #[error("{dim} labels expected, got {found}")]
    Labels { dim: usize, found: usize },
    #[error(
        "antisymmetry violated: coefficient of {k} in [{i},{j}] is {ij} but in [{j},{i}] is {ji}"
    )]
    AntisymmetryViolation {
        i: String,
        j: String,
        k: String,
        ij: String,
        ji: String,
    },
    #[error("Jacobi identity fails on the triple ({i}, {j}, {k})")]
    JacobiViolation { i: String, j: String, k: String },
    #[error("representation needs {expected} matrices, got {found}")]
    MatrixCount { expected: usize, found: usize },
    #[error("action matrix for {label} is {rows}x{cols}, expected {dim}x{dim}")]
    MatrixShape {
        label: String,
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("bracket mismatch on ({i}, {j}): rho([{i},{j}]) = {expected:?} but [rho({i}), rho({j})] = {found:?}")]
    BracketMismatch {
        i: String,
        j: String,
        expected: Vec<Vec<String>>,
        found: Vec<Vec<String>>,
    },
    #[error("invalid algebra definition: {0}")]
    Json(String),
    #[error("bracket index {index} out of range for dimension {dim}")]
    BracketIndex { index: usize, dim: usize },
}

/// A Lie algebra with basis `x_0..x_{dim-1}` and `[x_i, x_j] = sum_k c[i][j][k] x_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    labels: Vec<String>,
    constants: Vec<Vec<Vec<Rational>>>,
}

impl LieAlgebra {
    /// Validates antisymmetry and the Jacobi identity on every basis triple.
    pub fn new(labels: Vec<String>, constants: Vec<Vec<Vec<Rational>>>) -> Result<Self, LieError> {
        let dim = constants.len();
        if labels.len() != dim {
            return Err(LieError::Labels {
                dim,
                found: labels.len(),
            });
        }
        let well_shaped = constants
            .iter()
            .all(|row| row.len() == dim && row.iter().all(|v| v.len() == dim));
        if !well_shaped {
            return Err(LieError::ConstantsShape { dim });
        }
        let alg = LieAlgebra { labels, constants };
        alg.check_antisymmetry()?;
        alg.check_jacobi()?;
        Ok(alg)
    }

    /// The `dim`-dimensional algebra with zero bracket.
    pub fn abelian(dim: usize) -> Self {
        let labels = (0..dim).map(|i| format!("x{i}")).collect();
        let constants = vec![vec![vec![Rational::zero(); dim]; dim]; dim];
        LieAlgebra { labels, constants }
    }

    pub fn dim(&self) -> usize {
        self.constants.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Coefficients of `[x_i, x_j]`.
    pub fn bracket(&self, i: usize, j: usize) -> &[Rational] {
        &self.constants[i][j]
    }

    /// Bracket of two elements in coordinates.
    pub fn bracket_vec(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let n = self.dim();
        let mut out = vec![Rational::zero(); n];
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() {
                    continue;
                }
                let c = &u[i] * &v[j];
                for (o, s) in out.iter_mut().zip(&self.constants[i][j]) {
                    if !s.is_zero() {
                        *o += &c * s;
                    }
                }
            }
        }
        out
    }

    pub fn basis_vec(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        v[i] = Rational::from_integer(1.into());
        v
    }

    fn check_antisymmetry(&self) -> Result<(), LieError> {
        let n = self.dim();
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let ij = &self.constants[i][j][k];
                    let ji = &self.constants[j][i][k];
                    if *ij != -ji.clone() {
                        return Err(LieError::AntisymmetryViolation {
                            i: self.labels[i].clone(),
                            j: self.labels[j].clone(),
                            k: self.labels[k].clone(),
                            ij: format_rational(ij),
                            ji: format_rational(ji),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn check_jacobi(&self) -> Result<(), LieError> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (xi, xj, xk) = (self.basis_vec(i), self.basis_vec(j), self.basis_vec(k));
                    let a = self.bracket_vec(&xi, &self.bracket_vec(&xj, &xk));
                    let b = self.bracket_vec(&xj, &self.bracket_vec(&xk, &xi));
                    let c = self.bracket_vec(&xk, &self.bracket_vec(&xi, &xj));
                    let ok = a
                        .iter()
                        .zip(&b)
                        .zip(&c)
                        .all(|((a, b), c)| (a + b + c).is_zero());
                    if !ok {
                        return Err(LieError::JacobiViolation {
                            i: self.labels[i].clone(),
                            j: self.labels[j].clone(),
                            k: self.labels[k].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Parses the JSON definition format.
    ///
    /// ```json
    /// { "dim": 3, "labels": ["x","y","z"],
    ///   "brackets": [{"i": 0, "j": 1, "coeffs": ["0","0","1"]}] }
    /// ```
    ///
    /// Omitted brackets are zero. When only one of `[i,j]` and `[j,i]` is
    /// listed, the other is taken as its negative.
    pub fn from_json(text: &str) -> Result<Self, LieError> {
        let def: AlgebraDefinition =
            serde_json::from_str(text).map_err(|e| LieError::Json(e.to_string()))?;
        def.build()
    }

    pub fn from_json_file(path: &Path) -> Result<Self, LieError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LieError::Json(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_definition(&self) -> AlgebraDefinition {
        let n = self.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if self.constants[i][j].iter().any(|c| !c.is_zero()) {
                    brackets.push(BracketEntry {
                        i,
                        j,
                        coeffs: self.constants[i][j].iter().map(format_rational).collect(),
                    });
                }
            }
        }
        AlgebraDefinition {
            dim: n,
            labels: Some(self.labels.clone()),
            brackets,
        }
    }
}

/// On-disk form of a Lie algebra.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDefinition {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<String>,
}

impl AlgebraDefinition {
    pub fn build(&self) -> Result<LieAlgebra, LieError> {
        let n = self.dim;
        let labels = match &self.labels {
            Some(l) => l.clone(),
            None => (0..n).map(|i| format!("x{i}")).collect(),
        };
        let mut constants: Vec<Vec<Option<Vec<Rational>>>> = vec![vec![None; n]; n];
        for b in &self.brackets {
            for index in [b.i, b.j] {
                if index >= n {
                    return Err(LieError::BracketIndex { index, dim: n });
                }
            }
            if b.coeffs.len() != n {
                return Err(LieError::Json(format!(
                    "bracket [{}, {}] has {} coefficients, expected {n}",
                    b.i,
                    b.j,
                    b.coeffs.len()
                )));
            }
            let coeffs = b
                .coeffs
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| LieError::Json(e.to_string()))?;
            constants[b.i][b.j] = Some(coeffs);
        }
        let mut full = vec![vec![vec![Rational::zero(); n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                full[i][j] = match (&constants[i][j], &constants[j][i]) {
                    (Some(c), _) => c.clone(),
                    (None, Some(c)) => c.iter().map(|x| -x.clone()).collect(),
                    (None, None) => vec![Rational::zero(); n],
                };
            }
        }
        LieAlgebra::new(labels, full)
    }
}

/// A representation `rho: g -> gl(V)` given by one matrix per basis element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    algebra: LieAlgebra,
    dim: usize,
    matrices: Vec<Matrix>,
}

impl Representation {
    /// Checks `rho([x_i, x_j]) = [rho(x_i), rho(x_j)]` on all basis pairs.
    pub fn new(algebra: LieAlgebra, matrices: Vec<Matrix>) -> Result<Self, LieError> {
        if matrices.len() != algebra.dim() {
            return Err(LieError::MatrixCount {
                expected: algebra.dim(),
                found: matrices.len(),
            });
        }
        let dim = matrices.first().map_or(0, Matrix::rows);
        for (i, m) in matrices.iter().enumerate() {
            if m.shape() != (dim, dim) {
                return Err(LieError::MatrixShape {
                    label: algebra.label(i).to_string(),
                    rows: m.rows(),
                    cols: m.cols(),
                    dim,
                });
            }
        }
        let rep = Representation {
            algebra,
            dim,
            matrices,
        };
        rep.check_brackets()?;
        Ok(rep)
    }

    /// The zero action on a `dim`-dimensional space.
    pub fn zero(algebra: &LieAlgebra, dim: usize) -> Self {
        Representation {
            algebra: algebra.clone(),
            dim,
            matrices: vec![Matrix::zeros(dim, dim); algebra.dim()],
        }
    }

    /// Adjoint action, `ad(x_i)[k][j] = c[i][j][k]`.
    ///
    /// Passing validation here is equivalent to the Jacobi identity.
    pub fn adjoint(algebra: &LieAlgebra) -> Self {
        let n = algebra.dim();
        let matrices = (0..n)
            .map(|i| {
                let mut m = Matrix::zeros(n, n);
                for j in 0..n {
                    for (k, c) in algebra.bracket(i, j).iter().enumerate() {
                        m[(k, j)] = c.clone();
                    }
                }
                m
            })
            .collect();
        Representation::new(algebra.clone(), matrices)
            .expect("adjoint action of a validated algebra is a representation")
    }

    fn check_brackets(&self) -> Result<(), LieError> {
        let n = self.algebra.dim();
        for i in 0..n {
            for j in (i + 1)..n {
                let expected = self.action_of(self.algebra.bracket(i, j));
                let found = self.matrices[i]
                    .commutator(&self.matrices[j])
                    .expect("square matrices of equal size");
                if expected != found {
                    return Err(LieError::BracketMismatch {
                        i: self.algebra.label(i).to_string(),
                        j: self.algebra.label(j).to_string(),
                        expected: expected.to_strings(),
                        found: found.to_strings(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    /// Dimension of the representation space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, i: usize) -> &Matrix {
        &self.matrices[i]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    /// `rho(x)` for `x` given in coordinates.
    pub fn action_of(&self, x: &[Rational]) -> Matrix {
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (c, m) in x.iter().zip(&self.matrices) {
            out.add_scaled(c, m).expect("equal shapes");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::int;

    #[test]
    fn abelian_is_valid() {
        let a = LieAlgebra::abelian(2);
        let same = LieAlgebra::new(a.labels().to_vec(), a.constants.clone()).unwrap();
        assert_eq!(same.dim(), 2);
    }

    #[test]
    fn sl2_validates() {
        let sl2 = catalog::sl2();
        assert_eq!(sl2.bracket(2, 0), &[int(2), int(0), int(0)]);
        assert_eq!(sl2.bracket(0, 1), &[int(0), int(0), int(1)]);
    }

    #[test]
    fn non_antisymmetric_constants_are_rejected() {
        // [x,y] = x and [y,x] = x
        let mut c = vec![vec![vec![int(0); 2]; 2]; 2];
        c[0][1][0] = int(1);
        c[1][0][0] = int(1);
        let err = LieAlgebra::new(vec!["x".into(), "y".into()], c).unwrap_err();
        assert!(matches!(err, LieError::AntisymmetryViolation { .. }), "{err}");
    }

    #[test]
    fn jacobi_violation_names_the_triple() {
        let json = r#"{"dim":3,"labels":["a","b","c"],"brackets":[
            {"i":0,"j":1,"coeffs":["1","0","0"]},
            {"i":1,"j":2,"coeffs":["0","1","0"]}]}"#;
        let err = LieAlgebra::from_json(json).unwrap_err();
        match err {
            LieError::JacobiViolation { i, j, k } => {
                let mut t = [i, j, k];
                t.sort();
                assert_eq!(t, ["a", "b", "c"]);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn json_mirrors_one_sided_brackets() {
        let json = r#"{"dim":3,"labels":["x","y","z"],"brackets":[{"i":0,"j":1,"coeffs":["0","0","1"]}]}"#;
        let h = LieAlgebra::from_json(json).unwrap();
        assert_eq!(h, catalog::heisenberg3());
        let round = h.to_definition().build().unwrap();
        assert_eq!(round, h);
    }

    #[test]
    fn json_rejects_bad_input() {
        assert!(matches!(LieAlgebra::from_json("{"), Err(LieError::Json(_))));
        let bad_index = r#"{"dim":2,"brackets":[{"i":0,"j":5,"coeffs":["0","0"]}]}"#;
        assert!(matches!(
            LieAlgebra::from_json(bad_index),
            Err(LieError::BracketIndex { index: 5, dim: 2 })
        ));
        let bad_len = r#"{"dim":2,"brackets":[{"i":0,"j":1,"coeffs":["0"]}]}"#;
        assert!(matches!(LieAlgebra::from_json(bad_len), Err(LieError::Json(_))));
    }

    #[test]
    fn standard_sl2_rep_validates() {
        let e = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        let f = Matrix::from_i64(&[&[0, 0], &[1, 0]]);
        let h = Matrix::from_i64(&[&[1, 0], &[0, -1]]);
        Representation::new(catalog::sl2(), vec![e, f, h]).unwrap();
    }

    #[test]
    fn swapped_sl2_rep_reports_bracket_mismatch() {
        let e = Matrix::from_i64(&[&[0, 1], &[0, 0]]);
        let f = Matrix::from_i64(&[&[0, 0], &[1, 0]]);
        let h = Matrix::from_i64(&[&[1, 0], &[0, -1]]);
        let err = Representation::new(catalog::sl2(), vec![f, e, h]).unwrap_err();
        match err {
            LieError::BracketMismatch { i, j, expected, found } => {
                assert_eq!((i.as_str(), j.as_str()), ("e", "f"));
                assert_ne!(expected, found);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn zero_matrices_for_abelian() {
        let a = LieAlgebra::abelian(3);
        Representation::new(a.clone(), vec![Matrix::zeros(2, 2); 3]).unwrap();
        let err = Representation::new(a, vec![Matrix::zeros(2, 2); 2]).unwrap_err();
        assert!(matches!(err, LieError::MatrixCount { expected: 3, found: 2 }));
    }

    #[test]
    fn adjoint_examples() {
        let ad = Representation::adjoint(&LieAlgebra::abelian(4));
        assert!(ad.matrices().iter().all(Matrix::is_zero));

        let ad = Representation::adjoint(&catalog::sl2());
        let h = ad.matrix(2);
        assert_eq!(*h, Matrix::from_i64(&[&[2, 0, 0], &[0, -2, 0], &[0, 0, 0]]));

        let ad = Representation::adjoint(&catalog::heisenberg3());
        assert!(ad.matrix(2).is_zero());
    }
}
