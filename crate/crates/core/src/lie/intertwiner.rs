use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{determinant, kernel, Matrix};
use crate::scalar::Scalar;

/// Solutions of `T · rep1[i] = rep2[i] · T` for all `i`.
#[derive(Clone, Debug)]
pub struct Intertwiners<T> {
    /// Basis of the solution space, each `dim2 x dim1`.
    pub solutions: Vec<Matrix<T>>,
    /// An invertible solution, when one was found.
    pub invertible: Option<Matrix<T>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntertwinerSummary {
    pub solution_dim: usize,
    pub invertible: bool,
}

impl<T: Scalar> Intertwiners<T> {
    pub fn equivalent(&self) -> bool {
        self.invertible.is_some()
    }

    pub fn summary(&self) -> IntertwinerSummary {
        IntertwinerSummary {
            solution_dim: self.solutions.len(),
            invertible: self.equivalent(),
        }
    }
}

/// Solve the intertwiner equation between two matrix representations given
/// on the same abstract basis.
///
/// Only `T = 0` solving is reported as an empty solution list; that is the
/// "inequivalent" outcome, not an error.
pub fn intertwiner_solve<T: Scalar>(
    rep1: &[Matrix<T>],
    rep2: &[Matrix<T>],
) -> Result<Intertwiners<T>> {
    if rep1.len() != rep2.len() || rep1.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "representations of different lengths {} and {}",
            rep1.len(),
            rep2.len()
        )));
    }
    let n1 = rep1[0].rows();
    let n2 = rep2[0].rows();
    if rep1.iter().any(|m| !m.is_square() || m.rows() != n1)
        || rep2.iter().any(|m| !m.is_square() || m.rows() != n2)
    {
        return Err(Error::DimensionMismatch(
            "representation matrices differ in size".into(),
        ));
    }
    // unknown T is n2 x n1, flattened row-major: t[p * n1 + q]
    let unknowns = n1 * n2;
    let mut rows: Vec<Vec<T>> = Vec::new();
    for (r1, r2) in rep1.iter().zip(rep2) {
        for p in 0..n2 {
            for q in 0..n1 {
                let mut row = vec![T::zero(); unknowns];
                for r in 0..n1 {
                    // (T R1)_{pq}
                    row[p * n1 + r] = row[p * n1 + r].clone() + r1[(r, q)].clone();
                }
                for r in 0..n2 {
                    // -(R2 T)_{pq}
                    row[r * n1 + q] = row[r * n1 + q].clone() - r2[(p, r)].clone();
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let solutions: Vec<Matrix<T>> = if rows.is_empty() {
        (0..unknowns)
            .map(|i| Matrix::unit(n2, n1, i / n1, i % n1))
            .collect()
    } else {
        let sys = Matrix::from_rows(&rows)?;
        kernel(&sys)
            .into_iter()
            .map(|v| Matrix::from_flat(n2, n1, &v))
            .collect::<Result<_>>()?
    };
    let invertible = if n1 == n2 {
        find_invertible(&solutions)?
    } else {
        None
    };
    Ok(Intertwiners {
        solutions,
        invertible,
    })
}

fn find_invertible<T: Scalar>(solutions: &[Matrix<T>]) -> Result<Option<Matrix<T>>> {
    if solutions.is_empty() {
        return Ok(None);
    }
    for s in solutions {
        if !determinant(s)?.is_negligible() {
            return Ok(Some(s.clone()));
        }
    }
    // a generic combination is invertible whenever any element of the span is
    for seed in 1..6i64 {
        let mut acc = Matrix::zeros(solutions[0].rows(), solutions[0].cols());
        let mut c = T::one();
        for s in solutions {
            acc = acc.add(&s.scale(&c))?;
            c = c * T::from_i64(seed + 1);
        }
        if !determinant(&acc)?.is_negligible() {
            return Ok(Some(acc));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn sl3_real() -> Vec<Matrix<Rational>> {
        let mut out = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    out.push(Matrix::unit(3, 3, i, j));
                }
            }
        }
        out.push(Matrix::from_i64(3, 3, &[1, 0, 0, 0, -1, 0, 0, 0, 0]).unwrap());
        out.push(Matrix::from_i64(3, 3, &[0, 0, 0, 0, 1, 0, 0, 0, -1]).unwrap());
        out
    }

    #[test]
    fn identity_intertwines_a_rep_with_itself() {
        let rep = sl3_real();
        let sol = intertwiner_solve(&rep, &rep).unwrap();
        assert_eq!(sol.solutions.len(), 1);
        let t = &sol.solutions[0];
        // a multiple of the identity
        assert!(t
            .sub(&Matrix::identity(3).scale(&t[(0, 0)]))
            .unwrap()
            .is_zero());
        assert!(sol.equivalent());
    }

    #[test]
    fn standard_and_dual_are_inequivalent() {
        let rep = sl3_real();
        let dual: Vec<_> = rep
            .iter()
            .map(|m| m.transpose().scale(&-Rational::from_i64(1)))
            .collect();
        let sol = intertwiner_solve(&rep, &dual).unwrap();
        assert!(sol.solutions.is_empty());
        assert!(!sol.equivalent());
    }

    #[test]
    fn mismatched_lengths_error() {
        let rep = sl3_real();
        assert!(intertwiner_solve(&rep[..2], &rep[..3]).is_err());
    }
}
