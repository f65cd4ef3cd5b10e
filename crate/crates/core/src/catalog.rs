//! Built-in algebras and representations used by the sweeps.
//!
//! Algebras: `abelian<n>`, `heisenberg3`, `sl2`, `gl2`. Every algebra has the
//! `zero` and `adjoint` representations; the named ones below are extra.

use thiserror::Error;

use crate::lie::{LieAlgebra, LieError, Representation};
use crate::linalg::{int, ratio, Matrix, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown algebra {0:?} (expected abelian<n>, heisenberg3, sl2 or gl2)")]
    UnknownAlgebra(String),
    #[error("unknown representation {rep:?} for {algebra}; available: {available}")]
    UnknownRepresentation {
        algebra: String,
        rep: String,
        available: String,
    },
    #[error(transparent)]
    Lie(#[from] LieError),
}

pub const ALGEBRAS: [&str; 4] = ["abelian2", "heisenberg3", "sl2", "gl2"];

fn labelled(labels: &[&str], brackets: &[(usize, usize, &[i64])]) -> LieAlgebra {
    let n = labels.len();
    let mut c = vec![vec![vec![int(0); n]; n]; n];
    for &(i, j, coeffs) in brackets {
        for (k, &v) in coeffs.iter().enumerate() {
            c[i][j][k] = int(v);
            c[j][i][k] = int(-v);
        }
    }
    LieAlgebra::new(labels.iter().map(|s| s.to_string()).collect(), c)
        .expect("catalog algebras are valid")
}

/// `sl2` on the basis `(e, f, h)`.
pub fn sl2() -> LieAlgebra {
    labelled(
        &["e", "f", "h"],
        &[(0, 1, &[0, 0, 1]), (2, 0, &[2, 0, 0]), (2, 1, &[0, -2, 0])],
    )
}

/// `gl2` on the basis `(e, f, h, z)` with `z` the identity matrix.
pub fn gl2() -> LieAlgebra {
    labelled(
        &["e", "f", "h", "z"],
        &[(0, 1, &[0, 0, 1, 0]), (2, 0, &[2, 0, 0, 0]), (2, 1, &[0, -2, 0, 0])],
    )
}

/// Heisenberg algebra `[x, y] = z`.
pub fn heisenberg3() -> LieAlgebra {
    labelled(&["x", "y", "z"], &[(0, 1, &[0, 0, 1])])
}

pub fn algebra(name: &str) -> Result<LieAlgebra, CatalogError> {
    match name {
        "sl2" => Ok(sl2()),
        "gl2" => Ok(gl2()),
        "heisenberg3" => Ok(heisenberg3()),
        _ => {
            let n = name
                .strip_prefix("abelian")
                .map(|rest| rest.trim_start_matches('(').trim_end_matches(')'))
                .and_then(|rest| rest.parse::<usize>().ok())
                .filter(|&n| n > 0);
            match n {
                Some(n) => Ok(LieAlgebra::abelian(n)),
                None => Err(CatalogError::UnknownAlgebra(name.to_string())),
            }
        }
    }
}

/// Names of the representations [`representation`] knows for `algebra`.
pub fn representation_names(algebra: &LieAlgebra) -> Vec<&'static str> {
    let mut names = vec!["zero", "adjoint"];
    if *algebra == sl2() {
        names.extend(["standard", "sym2", "sym3", "sym4"]);
    } else if *algebra == gl2() {
        names.extend(["standard", "det", "sym2", "sym3", "sym4"]);
    } else if *algebra == heisenberg3() {
        names.push("standard");
    } else if *algebra == LieAlgebra::abelian(2) {
        names.extend(["diagonal", "jordan"]);
    }
    names
}

pub fn representation(algebra: &LieAlgebra, name: &str) -> Result<Representation, CatalogError> {
    let unknown = || CatalogError::UnknownRepresentation {
        algebra: algebra.labels().join(","),
        rep: name.to_string(),
        available: representation_names(algebra).join(", "),
    };
    if !representation_names(algebra).contains(&name) {
        return Err(unknown());
    }
    let matrices = match name {
        "zero" => return Ok(Representation::zero(algebra, 1)),
        "adjoint" => return Ok(Representation::adjoint(algebra)),
        "standard" if *algebra == heisenberg3() => {
            vec![
                Matrix::from_i64(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 0]]),
                Matrix::from_i64(&[&[0, 0, 0], &[0, 0, 1], &[0, 0, 0]]),
                Matrix::from_i64(&[&[0, 0, 1], &[0, 0, 0], &[0, 0, 0]]),
            ]
        }
        "standard" => symmetric_power(algebra, 1),
        "sym2" => symmetric_power(algebra, 2),
        "sym3" => symmetric_power(algebra, 3),
        "sym4" => symmetric_power(algebra, 4),
        "det" => {
            let z = Matrix::identity(1).scale(&int(2));
            vec![Matrix::zeros(1, 1), Matrix::zeros(1, 1), Matrix::zeros(1, 1), z]
        }
        "diagonal" => vec![diag(&[int(1), int(2), int(3)]), diag(&[int(0), int(-1), ratio(1, 2)])],
        "jordan" => {
            let n = Matrix::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
            let n2 = n.mul(&n).expect("square");
            vec![n.clone(), n.add(&n2.scale(&int(3))).expect("square")]
        }
        _ => return Err(unknown()),
    };
    Ok(Representation::new(algebra.clone(), matrices)?)
}

/// Every catalog representation of `algebra` with dimension at most `max_dim`.
pub fn representations(algebra: &LieAlgebra, max_dim: usize) -> Vec<(&'static str, Representation)> {
    representation_names(algebra)
        .into_iter()
        .filter_map(|name| representation(algebra, name).ok().map(|r| (name, r)))
        .filter(|(_, r)| r.dim() <= max_dim)
        .collect()
}

fn diag(entries: &[Rational]) -> Matrix {
    let mut m = Matrix::zeros(entries.len(), entries.len());
    for (i, e) in entries.iter().enumerate() {
        m[(i, i)] = e.clone();
    }
    m
}

/// `Sym^k` of the standard representation of `sl2` (or `gl2`), acting on
/// `X^(k-i) Y^i`: `e = X d/dY`, `f = Y d/dX`, `h = X d/dX - Y d/dY`,
/// `z = X d/dX + Y d/dY`.
fn symmetric_power(algebra: &LieAlgebra, k: usize) -> Vec<Matrix> {
    let d = k + 1;
    let mut e = Matrix::zeros(d, d);
    let mut f = Matrix::zeros(d, d);
    let mut h = Matrix::zeros(d, d);
    for i in 0..d {
        if i > 0 {
            e[(i - 1, i)] = int(i as i64);
        }
        if i < k {
            f[(i + 1, i)] = int((k - i) as i64);
        }
        h[(i, i)] = int(k as i64 - 2 * i as i64);
    }
    let mut out = vec![e, f, h];
    if algebra.dim() == 4 {
        out.push(Matrix::identity(d).scale(&int(k as i64)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_catalog_representations_validate() {
        for name in ALGEBRAS {
            let alg = algebra(name).unwrap();
            for rep in representation_names(&alg) {
                let r = representation(&alg, rep).unwrap_or_else(|e| panic!("{name}/{rep}: {e}"));
                assert!(r.dim() <= 5, "{name}/{rep}");
            }
        }
    }

    #[test]
    fn standard_sl2_matches_textbook_matrices() {
        let r = representation(&sl2(), "standard").unwrap();
        assert_eq!(*r.matrix(0), Matrix::from_i64(&[&[0, 1], &[0, 0]]));
        assert_eq!(*r.matrix(1), Matrix::from_i64(&[&[0, 0], &[1, 0]]));
        assert_eq!(*r.matrix(2), Matrix::from_i64(&[&[1, 0], &[0, -1]]));
    }

    #[test]
    fn algebra_names() {
        assert_eq!(algebra("abelian(3)").unwrap().dim(), 3);
        assert_eq!(algebra("abelian2").unwrap().dim(), 2);
        assert!(matches!(algebra("so3"), Err(CatalogError::UnknownAlgebra(_))));
        assert!(algebra("abelian0").is_err());
        assert!(representation(&sl2(), "det").is_err());
    }
}
