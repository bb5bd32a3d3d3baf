use crate::error::{Error, Result};
use crate::linalg::{kernel, Matrix};
use crate::scalar::Scalar;

/// A linear subspace of `T^n`, stored as its reduced row-echelon basis.
///
/// The echelon form is canonical: equal subspaces compare equal.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<T> {
    ambient_dim: usize,
    basis: Vec<Vec<T>>,
    pivots: Vec<usize>,
}

impl<T: Scalar> Subspace<T> {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| {
                (0..ambient_dim)
                    .map(|j| if i == j { T::one() } else { T::zero() })
                    .collect()
            })
            .collect();
        Self {
            ambient_dim,
            basis,
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn span(ambient_dim: usize, vectors: &[Vec<T>]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::AmbientMismatch {
                left: ambient_dim,
                right: v.len(),
            });
        }
        let mut rows = vectors.to_vec();
        let pivots = T::row_reduce(&mut rows, ambient_dim);
        Ok(Self {
            ambient_dim,
            basis: rows,
            pivots,
        })
    }

    /// Span of matrices flattened row-major.
    pub fn span_matrices(mats: &[Matrix<T>]) -> Result<Self> {
        let n = mats
            .first()
            .map(|m| m.rows() * m.cols())
            .ok_or_else(|| Error::InvalidParameter("empty matrix list".into()))?;
        let flat: Vec<Vec<T>> = mats.iter().map(Matrix::flatten).collect();
        Self::span(n, &flat)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<T>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::AmbientMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        Ok(())
    }

    /// Coordinates of `v` in the echelon basis, or `None` when `v` is not in the span.
    pub fn coordinates(&self, v: &[T]) -> Result<Option<Vec<T>>> {
        if v.len() != self.ambient_dim {
            return Err(Error::AmbientMismatch {
                left: self.ambient_dim,
                right: v.len(),
            });
        }
        // in RREF the coordinate on basis row r is the entry of v at that row's pivot
        let coords: Vec<T> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let residual = self.residual(v, &coords);
        Ok(residual.iter().all(Scalar::is_negligible).then_some(coords))
    }

    fn residual(&self, v: &[T], coords: &[T]) -> Vec<T> {
        let mut r = v.to_vec();
        for (row, c) in self.basis.iter().zip(coords) {
            if c.is_zero() {
                continue;
            }
            for (x, b) in r.iter_mut().zip(row) {
                *x = x.clone() - c.clone() * b.clone();
            }
        }
        r
    }

    pub fn contains(&self, v: &[T]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    pub fn contains_subspace(&self, other: &Self) -> Result<bool> {
        self.check_ambient(other)?;
        for v in &other.basis {
            if !self.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let all: Vec<Vec<T>> = self.basis.iter().chain(&other.basis).cloned().collect();
        Self::span(self.ambient_dim, &all)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let k1 = self.dim();
        let k2 = other.dim();
        if k1 == 0 || k2 == 0 {
            return Ok(Self::zero(self.ambient_dim));
        }
        // kernel of [B1^T | -B2^T] gives coefficient pairs with c.B1 = d.B2
        let n = self.ambient_dim;
        let sys = Matrix::from_fn(n, k1 + k2, |i, j| {
            if j < k1 {
                self.basis[j][i].clone()
            } else {
                -other.basis[j - k1][i].clone()
            }
        });
        let vecs: Vec<Vec<T>> = kernel(&sys)
            .into_iter()
            .map(|c| {
                let mut v = vec![T::zero(); n];
                for (cj, row) in c.iter().take(k1).zip(&self.basis) {
                    for (x, b) in v.iter_mut().zip(row) {
                        *x = x.clone() + cj.clone() * b.clone();
                    }
                }
                v
            })
            .collect();
        Self::span(n, &vecs)
    }

    /// Orthogonal complement with respect to the symmetric bilinear form with Gram matrix `form`.
    pub fn ortho_complement(&self, form: &Matrix<T>) -> Result<Self> {
        let n = self.ambient_dim;
        if form.rows() != n || form.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "form is {}x{}, ambient dimension {n}",
                form.rows(),
                form.cols()
            )));
        }
        if kernel(form).len() != 0 {
            return Err(Error::DegenerateForm);
        }
        if self.dim() == 0 {
            return Ok(Self::full(n));
        }
        let b = Matrix::from_rows(&self.basis)?;
        let constraints = b.mul(form)?;
        Self::span(n, &kernel(&constraints))
    }

    /// Complement with respect to a form given as a function of two vectors,
    /// evaluated on the standard basis of the ambient space.
    pub fn ortho_complement_by(&self, form: impl Fn(&[T], &[T]) -> T) -> Result<Self> {
        let n = self.ambient_dim;
        let e = |i: usize| -> Vec<T> {
            (0..n)
                .map(|j| if i == j { T::one() } else { T::zero() })
                .collect()
        };
        let units: Vec<Vec<T>> = (0..n).map(e).collect();
        let gram = Matrix::from_fn(n, n, |i, j| form(&units[i], &units[j]));
        self.ortho_complement(&gram)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| Rational::from_i64(x)).collect()
    }

    #[test]
    fn axes_in_three_space() {
        let x = Subspace::span(3, &[v(&[1, 0, 0])]).unwrap();
        let y = Subspace::span(3, &[v(&[0, 2, 0])]).unwrap();
        let xy = Subspace::span(3, &[v(&[1, 0, 0]), v(&[0, 1, 0])]).unwrap();
        assert_eq!(x.sum(&y).unwrap(), xy);
        assert_eq!(x.intersect(&y).unwrap().dim(), 0);
        assert_eq!(x.intersect(&x).unwrap(), x);
    }

    #[test]
    fn canonical_under_rescaling_and_shuffle() {
        let a = Subspace::span(4, &[v(&[1, 2, 0, 3]), v(&[0, 1, 1, 1])]).unwrap();
        let b = Subspace::span(4, &[v(&[0, -3, -3, -3]), v(&[2, 5, 1, 7])]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn complement_and_errors() {
        let x = Subspace::span(3, &[v(&[1, 1, 0])]).unwrap();
        let eye = Matrix::<Rational>::identity(3);
        let c = x.ortho_complement(&eye).unwrap();
        assert_eq!(c.dim(), 2);
        assert!(c.contains(&v(&[1, -1, 0])).unwrap());
        assert!(c.contains(&v(&[0, 0, 5])).unwrap());
        let degenerate = Matrix::<Rational>::from_i64(3, 3, &[1, 0, 0, 0, 1, 0, 0, 0, 0]).unwrap();
        assert_eq!(x.ortho_complement(&degenerate), Err(Error::DegenerateForm));
        let other = Subspace::<Rational>::zero(4);
        assert!(x.sum(&other).is_err());
        assert!(x.intersect(&other).is_err());
    }
}
