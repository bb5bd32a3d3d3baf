//! Explicit matrices for `sl(3) ⊂ so(6) ⊂ so(7)`, the six-dimensional
//! complement `m ↪ so(7)`, the map `h: m → so(6)` and the lift into `so(n+1)`.
//!
//! Index convention on R^7 is `(0..3 | 3 | 4..7)`: the positive block, the
//! unit direction in slot 3, then the negative block. On R^6 the blocks are
//! `0..3` and `3..6`.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Slot of the unit direction in R^7.
pub const UNIT_SLOT: usize = 3;
pub const PLUS_SLOTS: [usize; 3] = [0, 1, 2];
pub const MINUS_SLOTS: [usize; 3] = [4, 5, 6];

/// Permutation carrying the lift's index order (R^6 then the extra slot) to R^7.
pub const LIFT_TO_R7: [usize; 7] = [0, 1, 2, 4, 5, 6, 3];

/// `hat3(x) y = x × y`.
pub fn hat3<T: Scalar>(x: &[T; 3]) -> Matrix<T> {
    let z = T::zero();
    Matrix::new(
        3,
        3,
        vec![
            z.clone(),
            -x[2].clone(),
            x[1].clone(),
            x[2].clone(),
            z.clone(),
            -x[0].clone(),
            -x[1].clone(),
            x[0].clone(),
            z,
        ],
    )
    .expect("3x3")
}

pub fn cross3<T: Scalar>(x: &[T; 3], y: &[T; 3]) -> [T; 3] {
    [
        x[1].clone() * y[2].clone() - x[2].clone() * y[1].clone(),
        x[2].clone() * y[0].clone() - x[0].clone() * y[2].clone(),
        x[0].clone() * y[1].clone() - x[1].clone() * y[0].clone(),
    ]
}

pub fn unit3<T: Scalar>(i: usize) -> [T; 3] {
    std::array::from_fn(|j| if i == j { T::one() } else { T::zero() })
}

/// Parameters `(x, y)` of the `sl(3)` element `[[x̂, -y], [y, x̂]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sl3Param<T> {
    pub x: [T; 3],
    pub y: Matrix<T>,
}

impl<T: Scalar> Sl3Param<T> {
    pub fn new(x: [T; 3], y: Matrix<T>) -> Result<Self> {
        if y.rows() != 3 || y.cols() != 3 {
            return Err(Error::InvalidParameter("y must be 3x3".into()));
        }
        if !y.is_symmetric() {
            return Err(Error::InvalidParameter("y must be symmetric".into()));
        }
        if !y.trace().is_negligible() {
            return Err(Error::InvalidParameter("y must be trace-free".into()));
        }
        Ok(Self { x, y })
    }

    pub fn zero() -> Self {
        Self {
            x: [T::zero(), T::zero(), T::zero()],
            y: Matrix::zeros(3, 3),
        }
    }

    /// The standard eight: `x = e1, e2, e3`, then `y = diag(1,-1,0)`,
    /// `diag(0,1,-1)` and the three off-diagonal symmetric units.
    pub fn basis() -> Vec<Self> {
        let mut out: Vec<Self> = (0..3)
            .map(|i| Self {
                x: unit3(i),
                y: Matrix::zeros(3, 3),
            })
            .collect();
        let diag = |a: i64, b: i64, c: i64| Matrix::from_i64(3, 3, &[a, 0, 0, 0, b, 0, 0, 0, c]);
        out.push(Self::new(unit3(0).map(|_: T| T::zero()), diag(1, -1, 0).unwrap()).unwrap());
        out.push(Self::new(unit3(0).map(|_: T| T::zero()), diag(0, 1, -1).unwrap()).unwrap());
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let mut y = Matrix::zeros(3, 3);
            y[(i, j)] = T::one();
            y[(j, i)] = T::one();
            out.push(Self::new([T::zero(), T::zero(), T::zero()], y).unwrap());
        }
        out
    }
}

/// `[[x̂, -y], [y, x̂]]` in `so(6)`.
pub fn sl3_embed<T: Scalar>(p: &Sl3Param<T>) -> Matrix<T> {
    let xh = hat3(&p.x);
    let mut m = Matrix::zeros(6, 6);
    m.set_block(0, 0, &xh);
    m.set_block(3, 3, &xh);
    m.set_block(0, 3, &p.y.scale(&-T::one()));
    m.set_block(3, 0, &p.y);
    m
}

/// Embed `so(6)` in `so(7)` with slot 3 zero.
pub fn so6_to_so7<T: Scalar>(m: &Matrix<T>) -> Result<Matrix<T>> {
    if m.rows() != 6 || m.cols() != 6 {
        return Err(Error::DimensionMismatch(
            "so6_to_so7 expects a 6x6 matrix".into(),
        ));
    }
    Ok(m.insert_zero_slot(UNIT_SLOT))
}

/// A point `(a, b)` of `m ≅ C^6`, with `a` on the positive block and `b` on the negative one.
#[derive(Clone, Debug, PartialEq)]
pub struct MVector<T> {
    pub a: [T; 3],
    pub b: [T; 3],
}

impl<T: Scalar> MVector<T> {
    pub fn new(a: [T; 3], b: [T; 3]) -> Self {
        Self { a, b }
    }

    pub fn from_slice(v: &[T]) -> Result<Self> {
        if v.len() != 6 {
            return Err(Error::DimensionMismatch("MVector needs six entries".into()));
        }
        Ok(Self {
            a: std::array::from_fn(|i| v[i].clone()),
            b: std::array::from_fn(|i| v[3 + i].clone()),
        })
    }

    pub fn to_vec(&self) -> Vec<T> {
        self.a.iter().chain(&self.b).cloned().collect()
    }

    pub fn basis() -> Vec<Self> {
        (0..6)
            .map(|i| {
                let mut v = vec![T::zero(); 6];
                v[i] = T::one();
                Self::from_slice(&v).unwrap()
            })
            .collect()
    }
}

/// `{a}¹ + {b}²` in `so(7)`.
pub fn m_embed<T: Scalar>(v: &MVector<T>) -> Matrix<T> {
    let two = T::from_i64(2);
    let mut m = Matrix::zeros(7, 7);
    let ah = hat3(&v.a);
    let bh = hat3(&v.b);
    // {a}^1
    for i in 0..3 {
        m[(i, UNIT_SLOT)] = two.clone() * v.a[i].clone();
        m[(UNIT_SLOT, i)] = -two.clone() * v.a[i].clone();
    }
    m.set_block(0, 4, &ah);
    m.set_block(4, 0, &ah);
    // {b}^2
    for i in 0..3 {
        m[(UNIT_SLOT, 4 + i)] = -two.clone() * v.b[i].clone();
        m[(4 + i, UNIT_SLOT)] = two.clone() * v.b[i].clone();
    }
    m.set_block(0, 0, &bh);
    m.set_block(4, 4, &bh.scale(&-T::one()));
    m
}

/// `h(a, b) = ½ [[b̂, â], [â, -b̂]]`.
pub fn h_map<T: Scalar>(v: &MVector<T>) -> Matrix<T> {
    let half = T::from_ratio(1, 2);
    let ah = hat3(&v.a).scale(&half);
    let bh = hat3(&v.b).scale(&half);
    let mut m = Matrix::zeros(6, 6);
    m.set_block(0, 0, &bh);
    m.set_block(0, 3, &ah);
    m.set_block(3, 0, &ah);
    m.set_block(3, 3, &bh.scale(&-T::one()));
    m
}

/// `[[A + h(x), x], [-xᵀ, 0]]` in `so(n+1)`, the new slot last.
pub fn lift_gtilde<T: Scalar>(
    a: &Matrix<T>,
    x: &[T],
    h: impl Fn(&[T]) -> Result<Matrix<T>>,
) -> Result<Matrix<T>> {
    let n = a.rows();
    if !a.is_square() || x.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "lift of a {}x{} element with a vector of length {}",
            a.rows(),
            a.cols(),
            x.len()
        )));
    }
    let hx = h(x)?;
    let top = a.add(&hx)?;
    let mut out = Matrix::zeros(n + 1, n + 1);
    out.set_block(0, 0, &top);
    for i in 0..n {
        out[(i, n)] = x[i].clone();
        out[(n, i)] = -x[i].clone();
    }
    Ok(out)
}

/// The lift for the `g2` instance, reordered into the R^7 slot convention.
pub fn lift_g2<T: Scalar>(a: &Matrix<T>, x: &MVector<T>) -> Result<Matrix<T>> {
    lift_gtilde(a, &x.to_vec(), |v| Ok(h_map(&MVector::from_slice(v)?)))?.permute(&LIFT_TO_R7)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(x: i64) -> Rational {
        Rational::from_i64(x)
    }

    #[test]
    fn hat3_is_the_cross_product() {
        let e1 = unit3::<Rational>(0);
        let e2 = unit3::<Rational>(1);
        let r = hat3(&e1).mul_vec(&e2).unwrap();
        assert_eq!(r, unit3::<Rational>(2).to_vec());
        let x = [q(3), q(-2), Rational::from_ratio(1, 5)];
        assert!(hat3(&x).mul_vec(&x).unwrap().iter().all(|v| *v == q(0)));
    }

    #[test]
    fn sl3_param_validation() {
        let bad = Matrix::<Rational>::from_i64(3, 3, &[1, 0, 0, 0, 1, 0, 0, 0, 1]).unwrap();
        assert!(Sl3Param::new([q(0), q(0), q(0)], bad).is_err());
        let asym = Matrix::<Rational>::from_i64(3, 3, &[0, 1, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        assert!(Sl3Param::new([q(0), q(0), q(0)], asym).is_err());
        assert!(sl3_embed(&Sl3Param::<Rational>::zero()).is_zero());
    }

    #[test]
    fn sl3_embed_of_rotation_is_block_diagonal() {
        let p = Sl3Param::new(unit3(0), Matrix::zeros(3, 3)).unwrap();
        let m = sl3_embed::<Rational>(&p);
        let h = hat3(&unit3::<Rational>(0));
        assert_eq!(m.block(0, 0, 3, 3), h);
        assert_eq!(m.block(3, 3, 3, 3), h);
        assert!(m.block(0, 3, 3, 3).is_zero());
        assert!(m.block(3, 0, 3, 3).is_zero());
    }

    #[test]
    fn m_embed_displayed_entries() {
        let m = m_embed(&MVector::<Rational>::new(unit3(0), [q(0), q(0), q(0)]));
        assert_eq!(m[(0, 3)], q(2));
        assert_eq!(m[(3, 0)], q(-2));
        let h = hat3(&unit3::<Rational>(0));
        assert_eq!(m.block(0, 4, 3, 3), h);
        assert_eq!(m.block(4, 0, 3, 3), h);
        assert!(m.is_skew());
        assert!(m_embed(&MVector::<Rational>::new(
            [q(0), q(0), q(0)],
            [q(0), q(0), q(0)]
        ))
        .is_zero());
    }

    #[test]
    fn lift_edge_cases() {
        let zero6 = Matrix::<Rational>::zeros(6, 6);
        let z = MVector::from_slice(&[q(0), q(0), q(0), q(0), q(0), q(0)]).unwrap();
        assert!(lift_g2(&zero6, &z).unwrap().is_zero());
        let a = sl3_embed(&Sl3Param::basis()[4]);
        let lifted = lift_gtilde(&a, &z.to_vec(), |v| Ok(h_map(&MVector::from_slice(v)?))).unwrap();
        assert_eq!(lifted.block(0, 0, 6, 6), a);
        assert!(lifted.row(6).iter().all(|v| *v == q(0)));
        assert!(lift_gtilde(&a, &[q(1)], |_| Ok(Matrix::zeros(6, 6))).is_err());
    }
}
