//! Scalar abstractions.
//!
//! Exact certification runs over [`Rational`](crate::Rational); numerical field
//! calculus runs over any [`Real`]. Both satisfy [`Scalar`], so the linear
//! algebra, the Lie-algebra embeddings and the octonion tables are written once.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, Num, Signed, ToPrimitive, Zero};

use crate::linalg::echelon;

/// A field element usable by the matrix and subspace engine.
pub trait Scalar:
    Clone + PartialEq + Debug + Num + Neg<Output = Self> + Send + Sync + 'static
{
    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn to_f64(&self) -> f64;

    /// Whether elimination should treat this entry as zero.
    fn is_negligible(&self) -> bool;

    /// True for exact arithmetic, where residuals must vanish identically.
    fn is_exact() -> bool;

    /// Reduce `rows` (each of length `ncols`) to reduced row-echelon form in place,
    /// dropping zero rows. Returns the pivot columns.
    fn row_reduce(rows: &mut Vec<Vec<Self>>, ncols: usize) -> Vec<usize> {
        echelon::gauss_jordan(rows, ncols)
    }

    /// Exact square root when one exists in the scalar domain.
    fn checked_sqrt(&self) -> Option<Self>;
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn is_exact() -> bool {
        true
    }

    fn row_reduce(rows: &mut Vec<Vec<Self>>, ncols: usize) -> Vec<usize> {
        echelon::fraction_free_rref(rows, ncols)
    }

    fn checked_sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &n * &n == *self.numer() && &d * &d == *self.denom() {
            Some(BigRational::new(n, d))
        } else {
            None
        }
    }
}

macro_rules! float_scalar {
    ($t:ty, $eps:expr) => {
        impl Scalar for $t {
            fn from_i64(v: i64) -> Self {
                v as $t
            }

            fn to_f64(&self) -> f64 {
                *self as f64
            }

            fn is_negligible(&self) -> bool {
                self.abs() <= $eps
            }

            fn is_exact() -> bool {
                false
            }

            fn checked_sqrt(&self) -> Option<Self> {
                (*self >= 0.0).then(|| self.sqrt())
            }
        }
    };
}

float_scalar!(f64, 1e-11);
float_scalar!(f32, 1e-5);

/// Floating-point scalar used by the field calculus and the constructions.
pub trait Real:
    Scalar + Float + FloatConst + FromPrimitive + Sum + Display + Default + Copy
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Lift an `f64` literal into `R`.
#[inline]
pub fn lit<R: Real>(x: f64) -> R {
    R::from_f64(x).expect("literal representable")
}
