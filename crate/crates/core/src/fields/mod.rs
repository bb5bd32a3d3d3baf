//! Pointwise finite-difference calculus on analytically evaluable fields.
//!
//! Fields are closures; nothing is stored on grids. Every derivative is a
//! central stencil at the query point, and a query whose stencil would leave
//! the declared domain is rejected.

mod calculus;
mod curvature;
mod domain;

use std::sync::Arc;

pub use calculus::{
    directional, embed_block_form, exterior_d, fd_partial, gradient, hodge_on_block,
    hodge_restricted, Block, SplitSpec,
};
pub use curvature::{
    christoffel, curvature_operator, ricci, riemann, scalar_curvature, Christoffel, Riemann,
};
pub use domain::{sample_points, Domain, Exclusion};

use crate::error::{Error, Result};
use crate::forms::Form;
use crate::linalg::Matrix;
use crate::scalar::{Real, Scalar};

/// Values a field may take: anything closed under real linear combinations.
pub trait FieldValue<R: Real>: Clone + Send + Sync + 'static {
    fn lin_comb(terms: &[(R, &Self)]) -> Self;
    fn max_abs(&self) -> f64;
}

impl<R: Real> FieldValue<R> for R {
    fn lin_comb(terms: &[(R, &Self)]) -> Self {
        terms.iter().fold(R::zero(), |acc, (c, v)| acc + *c * **v)
    }

    fn max_abs(&self) -> f64 {
        Scalar::to_f64(self).abs()
    }
}

impl<R: Real> FieldValue<R> for Vec<R> {
    fn lin_comb(terms: &[(R, &Self)]) -> Self {
        let mut out = vec![R::zero(); terms[0].1.len()];
        for (c, v) in terms {
            for (o, x) in out.iter_mut().zip(v.iter()) {
                *o = *o + *c * *x;
            }
        }
        out
    }

    fn max_abs(&self) -> f64 {
        self.iter()
            .map(|x| Scalar::to_f64(x).abs())
            .fold(0.0, f64::max)
    }
}

impl<R: Real> FieldValue<R> for Matrix<R> {
    fn lin_comb(terms: &[(R, &Self)]) -> Self {
        let first = terms[0].1;
        let mut out = Matrix::zeros(first.rows(), first.cols());
        for (c, m) in terms {
            out = out.add(&m.scale(c)).expect("same shape");
        }
        out
    }

    fn max_abs(&self) -> f64 {
        Matrix::max_abs(self)
    }
}

impl<R: Real> FieldValue<R> for Form<R> {
    fn lin_comb(terms: &[(R, &Self)]) -> Self {
        let first = terms[0].1;
        let mut acc = Form::zero(first.dim(), first.degree());
        for (c, f) in terms {
            acc = acc.add(&f.scale(c)).expect("same shape");
        }
        acc
    }

    fn max_abs(&self) -> f64 {
        Form::max_abs(self)
    }
}

/// A deterministic map from points of `R^n` to values of type `V`.
pub struct FieldFn<R, V> {
    dim: usize,
    domain: Domain,
    eval: Arc<dyn Fn(&[R]) -> V + Send + Sync>,
}

impl<R, V> Clone for FieldFn<R, V> {
    fn clone(&self) -> Self {
        Self {
            dim: self.dim,
            domain: self.domain.clone(),
            eval: Arc::clone(&self.eval),
        }
    }
}

impl<R, V> std::fmt::Debug for FieldFn<R, V> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FieldFn")
            .field("dim", &self.dim)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl<R: Real, V: Send + Sync + 'static> FieldFn<R, V> {
    pub fn new(domain: Domain, f: impl Fn(&[R]) -> V + Send + Sync + 'static) -> Self {
        Self {
            dim: domain.dim(),
            domain,
            eval: Arc::new(f),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    /// Evaluate without a domain check.
    pub fn at(&self, p: &[R]) -> V {
        (self.eval)(p)
    }

    /// Evaluate, rejecting points inside an excluded set.
    pub fn eval(&self, p: &[R]) -> Result<V> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} for a field on R^{}",
                p.len(),
                self.dim
            )));
        }
        self.domain.require(p, 0.0)?;
        Ok(self.at(p))
    }

    pub fn map<W: Send + Sync + 'static>(
        &self,
        f: impl Fn(&[R], V) -> W + Send + Sync + 'static,
    ) -> FieldFn<R, W> {
        let inner = Arc::clone(&self.eval);
        FieldFn {
            dim: self.dim,
            domain: self.domain.clone(),
            eval: Arc::new(move |p| f(p, inner(p))),
        }
    }

    pub fn with_domain(&self, domain: Domain) -> Self {
        Self {
            dim: self.dim,
            domain,
            eval: Arc::clone(&self.eval),
        }
    }
}

/// Step size, stencil order and optional Richardson extrapolation.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct StencilConfig {
    pub h: f64,
    pub order: u8,
    pub richardson: bool,
}

impl StencilConfig {
    pub fn new(h: f64, order: u8, richardson: bool) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "step {h} must be positive"
            )));
        }
        if order != 2 && order != 4 {
            return Err(Error::InvalidParameter(format!(
                "stencil order {order} not in {{2, 4}}"
            )));
        }
        Ok(Self {
            h,
            order,
            richardson,
        })
    }

    pub fn first_derivative() -> Self {
        Self {
            h: 1e-3,
            order: 2,
            richardson: false,
        }
    }

    pub fn curvature() -> Self {
        Self {
            h: 1e-2,
            order: 4,
            richardson: false,
        }
    }

    pub fn with_h(self, h: f64) -> Self {
        Self { h, ..self }
    }

    /// Farthest offset of a stencil point from its centre, in units of the direction length.
    pub fn reach(&self) -> f64 {
        self.h * f64::from(self.order / 2)
    }

    /// Truncation scale `h^order`, or `h^(order+2)` with extrapolation.
    pub fn truncation(&self) -> f64 {
        let p = i32::from(self.order) + if self.richardson { 2 } else { 0 };
        self.h.powi(p)
    }
}

impl Default for StencilConfig {
    fn default() -> Self {
        Self::first_derivative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(StencilConfig::new(0.0, 2, false).is_err());
        assert!(StencilConfig::new(1e-3, 3, false).is_err());
        let c = StencilConfig::new(1e-2, 4, false).unwrap();
        assert_eq!(c.reach(), 2e-2);
    }

    #[test]
    fn lin_comb_of_matrices() {
        let a = Matrix::<f64>::identity(2);
        let b = Matrix::<f64>::from_i64(2, 2, &[0, 1, 1, 0]).unwrap();
        let c = Matrix::lin_comb(&[(2.0, &a), (-1.0, &b)]);
        assert_eq!(c.as_slice(), &[2.0, -1.0, -1.0, 2.0]);
    }
}
