//! Dense linear algebra over any [`Scalar`]; exact when instantiated with rationals.

pub mod echelon;
mod matrix;
mod subspace;

pub use matrix::{bracket, trace_form, Matrix};
pub use subspace::Subspace;

use crate::scalar::Scalar;

/// General solution of `A x = b`.
#[derive(Clone, Debug, PartialEq)]
pub enum SolutionSet<T> {
    Inconsistent,
    Affine {
        particular: Vec<T>,
        kernel: Vec<Vec<T>>,
    },
}

impl<T> SolutionSet<T> {
    pub fn is_consistent(&self) -> bool {
        matches!(self, SolutionSet::Affine { .. })
    }
}

/// Basis of the null space of `a`, one vector per free column.
pub fn kernel<T: Scalar>(a: &Matrix<T>) -> Vec<Vec<T>> {
    let n = a.cols();
    let mut rows: Vec<Vec<T>> = (0..a.rows()).map(|i| a.row(i).to_vec()).collect();
    let pivots = T::row_reduce(&mut rows, n);
    null_vectors(&rows, &pivots, n)
}

fn null_vectors<T: Scalar>(rref: &[Vec<T>], pivots: &[usize], n: usize) -> Vec<Vec<T>> {
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![T::zero(); n];
            v[f] = T::one();
            for (row, &p) in rref.iter().zip(pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

pub fn rank<T: Scalar>(a: &Matrix<T>) -> usize {
    a.cols() - kernel(a).len()
}

/// Solve `A x = b`, returning a particular solution and a kernel basis,
/// or [`SolutionSet::Inconsistent`].
pub fn solve_linear<T: Scalar>(a: &Matrix<T>, b: &[T]) -> crate::Result<SolutionSet<T>> {
    if b.len() != a.rows() {
        return Err(crate::Error::DimensionMismatch(format!(
            "{} equations, right-hand side of length {}",
            a.rows(),
            b.len()
        )));
    }
    let n = a.cols();
    let mut rows: Vec<Vec<T>> = (0..a.rows())
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let pivots = T::row_reduce(&mut rows, n + 1);
    if pivots.last() == Some(&n) {
        return Ok(SolutionSet::Inconsistent);
    }
    let mut particular = vec![T::zero(); n];
    for (row, &p) in rows.iter().zip(&pivots) {
        particular[p] = row[n].clone();
    }
    let trimmed: Vec<Vec<T>> = rows.iter().map(|r| r[..n].to_vec()).collect();
    Ok(SolutionSet::Affine {
        particular,
        kernel: null_vectors(&trimmed, &pivots, n),
    })
}

/// Determinant by elimination; intended for small matrices.
pub fn determinant<T: Scalar>(a: &Matrix<T>) -> crate::Result<T> {
    if !a.is_square() {
        return Err(crate::Error::DimensionMismatch(
            "determinant of a non-square matrix".into(),
        ));
    }
    let n = a.rows();
    let mut m: Vec<Vec<T>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut det = T::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_negligible()) else {
            return Ok(T::zero());
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det = det * pv.clone();
        for r in col + 1..n {
            let f = m[r][col].clone() / pv.clone();
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                m[r][c] = m[r][c].clone() - f.clone() * m[col][c].clone();
            }
        }
    }
    Ok(det)
}

/// Inverse by Gauss-Jordan on `[A | I]`.
pub fn inverse<T: Scalar>(a: &Matrix<T>) -> crate::Result<Matrix<T>> {
    if !a.is_square() {
        return Err(crate::Error::DimensionMismatch(
            "inverse of a non-square matrix".into(),
        ));
    }
    let n = a.rows();
    let mut rows: Vec<Vec<T>> = (0..n)
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    let pivots = T::row_reduce(&mut rows, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(crate::Error::Certification("matrix is singular".into()));
    }
    Ok(Matrix::from_fn(n, n, |i, j| rows[i][n + j].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(x: i64) -> Rational {
        Rational::from_i64(x)
    }

    #[test]
    fn identity_system_has_unique_solution() {
        let a = Matrix::<Rational>::identity(3);
        let b = vec![q(4), q(-1), Rational::from_ratio(2, 7)];
        match solve_linear(&a, &b).unwrap() {
            SolutionSet::Affine { particular, kernel } => {
                assert_eq!(particular, b);
                assert!(kernel.is_empty());
            }
            SolutionSet::Inconsistent => panic!("identity system is consistent"),
        }
    }

    #[test]
    fn zero_system_kernel_is_ambient() {
        let a = Matrix::<Rational>::zeros(2, 4);
        match solve_linear(&a, &[q(0), q(0)]).unwrap() {
            SolutionSet::Affine { particular, kernel } => {
                assert!(particular.iter().all(|x| *x == q(0)));
                assert_eq!(kernel.len(), 4);
            }
            SolutionSet::Inconsistent => panic!(),
        }
        assert_eq!(
            solve_linear(&a, &[q(1), q(0)]).unwrap(),
            SolutionSet::Inconsistent
        );
    }

    #[test]
    fn determinant_and_inverse() {
        let a = Matrix::<Rational>::from_i64(3, 3, &[2, 1, 0, 1, 3, 1, 0, 1, 4]).unwrap();
        assert_eq!(determinant(&a).unwrap(), q(18));
        let inv = inverse(&a).unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(3));
        let singular = Matrix::<Rational>::from_i64(2, 2, &[1, 2, 2, 4]).unwrap();
        assert!(inverse(&singular).is_err());
    }
}
