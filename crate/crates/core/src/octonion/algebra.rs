use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{determinant, Matrix};
use crate::scalar::Scalar;

use super::cross::CrossProduct7;
use super::threeform::ThreeForm;

/// An element `(a, x)` of `R ⊕ R^7` stored as eight coordinates, real part first.
pub type Octonion<T> = [T; 8];

/// `(a,x)(b,y) = (ab - ⟨x,y⟩, ay + bx + x × y)`, tabulated on basis pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct OctonionTable<T> {
    /// `table[a][b]` is the product of basis elements `a` and `b`.
    pub table: Vec<Vec<Octonion<T>>>,
}

fn unit<T: Scalar>(i: usize) -> Octonion<T> {
    std::array::from_fn(|k| if k == i { T::one() } else { T::zero() })
}

impl<T: Scalar> OctonionTable<T> {
    pub fn from_cross(c: &CrossProduct7<T>) -> Self {
        let mut table = vec![vec![unit::<T>(0); 8]; 8];
        for (a, row) in table.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                *cell = match (a, b) {
                    (0, _) => unit(b),
                    (_, 0) => unit(a),
                    _ => {
                        let x = c.basis_product(a - 1, b - 1);
                        let mut out: Octonion<T> = std::array::from_fn(|_| T::zero());
                        if a == b {
                            out[0] = -T::one();
                        }
                        for k in 0..7 {
                            out[k + 1] = x[k].clone();
                        }
                        out
                    }
                };
            }
        }
        Self { table }
    }

    pub fn mul(&self, p: &Octonion<T>, q: &Octonion<T>) -> Octonion<T> {
        let mut out: Octonion<T> = std::array::from_fn(|_| T::zero());
        for a in 0..8 {
            if p[a].is_zero() {
                continue;
            }
            for b in 0..8 {
                if q[b].is_zero() {
                    continue;
                }
                let s = p[a].clone() * q[b].clone();
                for (o, t) in out.iter_mut().zip(&self.table[a][b]) {
                    if !t.is_zero() {
                        *o = o.clone() + s.clone() * t.clone();
                    }
                }
            }
        }
        out
    }

    /// `(pq)r - p(qr)`.
    pub fn associator(&self, p: &Octonion<T>, q: &Octonion<T>, r: &Octonion<T>) -> Octonion<T> {
        let a = self.mul(&self.mul(p, q), r);
        let b = self.mul(p, &self.mul(q, r));
        std::array::from_fn(|i| a[i].clone() - b[i].clone())
    }

    /// Matrix of left multiplication by `p`.
    pub fn left_matrix(&self, p: &Octonion<T>) -> Matrix<T> {
        let cols: Vec<Octonion<T>> = (0..8).map(|b| self.mul(p, &unit(b))).collect();
        Matrix::from_fn(8, 8, |i, j| cols[j][i].clone())
    }

    pub fn certify_unit(&self) -> Result<()> {
        let one = unit::<T>(0);
        for b in 0..8 {
            let e = unit::<T>(b);
            if self.mul(&one, &e) != e || self.mul(&e, &one) != e {
                return Err(Error::Certification(format!("1 is not a unit for e{b}")));
            }
        }
        for i in 1..8 {
            let e = unit::<T>(i);
            let mut minus_one = unit::<T>(0);
            minus_one[0] = -T::one();
            if self.mul(&e, &e) != minus_one {
                return Err(Error::Certification(format!("e{i}² ≠ -1")));
            }
        }
        Ok(())
    }

    /// The associator changes sign under each transposition, on every basis triple.
    pub fn certify_alternative(&self) -> Result<()> {
        for a in 0..8 {
            for b in 0..8 {
                for c in 0..8 {
                    let (ea, eb, ec) = (unit::<T>(a), unit::<T>(b), unit::<T>(c));
                    let abc = self.associator(&ea, &eb, &ec);
                    let bac = self.associator(&eb, &ea, &ec);
                    let acb = self.associator(&ea, &ec, &eb);
                    let bad = (0..8).any(|k| {
                        !(abc[k].clone() + bac[k].clone()).is_negligible()
                            || !(abc[k].clone() + acb[k].clone()).is_negligible()
                    });
                    if bad {
                        return Err(Error::Certification(format!(
                            "associator not alternating on (e{a}, e{b}, e{c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `|pq|² = |p|²|q|²` on `count` seeded random pairs with small rational entries.
    pub fn certify_norm_multiplicative(&self, seed: u64, count: usize) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || -> Octonion<T> {
            std::array::from_fn(|_| T::from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=6)))
        };
        for n in 0..count {
            let p = draw();
            let q = draw();
            let pq = self.mul(&p, &q);
            let lhs = norm_sq(&pq);
            let rhs = norm_sq(&p) * norm_sq(&q);
            if !(lhs - rhs).is_negligible() {
                return Err(Error::Certification(format!(
                    "norm not multiplicative on pair {n}: {p:?}, {q:?}"
                )));
            }
        }
        Ok(())
    }

    pub fn certify(&self, seed: u64) -> Result<()> {
        self.certify_unit()?;
        self.certify_alternative()?;
        self.certify_norm_multiplicative(seed, 100)
    }
}

pub fn norm_sq<T: Scalar>(p: &[T]) -> T {
    p.iter()
        .fold(T::zero(), |acc, x| acc + x.clone() * x.clone())
}

/// `φ(x,y,z)² / det Gram(x,y,z)`, which lies in `[0, 1]` and equals 1 exactly on
/// associative 3-planes. Independent of the chosen basis of the plane.
pub fn calibration_ratio<T: Scalar>(phi: &ThreeForm<T>, plane: [&[T]; 3]) -> Result<T> {
    let gram = Matrix::from_fn(3, 3, |i, j| {
        plane[i]
            .iter()
            .zip(plane[j])
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    });
    let det = determinant(&gram)?;
    if det.is_negligible() {
        return Err(Error::InvalidParameter(
            "plane vectors are dependent".into(),
        ));
    }
    let v = phi.eval(plane[0], plane[1], plane[2])?;
    Ok(v.clone() * v / det)
}

/// Whether the 3-plane spanned by `plane` is associative.
pub fn associative_test<T: Scalar>(phi: &ThreeForm<T>, plane: [&[T]; 3]) -> Result<bool> {
    let r = calibration_ratio(phi, plane)?;
    Ok(if T::is_exact() {
        r == T::one()
    } else {
        (r.to_f64() - 1.0).abs() <= 1e-12
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::g2_basis;
    use crate::octonion::invariant_threeform;
    use crate::Rational;

    fn setup() -> (ThreeForm<Rational>, OctonionTable<Rational>) {
        let phi = invariant_threeform(&g2_basis::<Rational>().unwrap()).unwrap();
        let table = OctonionTable::from_cross(&CrossProduct7::from_phi(&phi));
        (phi, table)
    }

    #[test]
    fn table_certifies() {
        let (_, t) = setup();
        t.certify(42).unwrap();
    }

    #[test]
    fn unit_left_multiplication() {
        let (_, t) = setup();
        let q: Octonion<Rational> = std::array::from_fn(|i| Rational::from_ratio(i as i64 - 3, 2));
        assert_eq!(t.mul(&unit(0), &q), q);
    }

    #[test]
    fn not_associative() {
        let (_, t) = setup();
        let a = t.associator(&unit(1), &unit(2), &unit(4));
        assert!(a.iter().any(|x| *x != Rational::from_i64(0)));
    }

    #[test]
    fn coordinate_planes() {
        let (phi, _) = setup();
        let e = |i: usize| {
            (0..7)
                .map(|k| Rational::from_i64((k == i) as i64))
                .collect::<Vec<_>>()
        };
        assert!(associative_test(&phi, [&e(0), &e(1), &e(2)]).unwrap());
        assert!(!associative_test(&phi, [&e(4), &e(5), &e(6)]).unwrap());
        assert!(associative_test(&phi, [&e(0), &e(3), &e(4)]).unwrap());
        assert!(calibration_ratio(&phi, [&e(0), &e(0), &e(1)]).is_err());
    }
}
