//! Two copies of `so(7)` inside `so(8)`: the stabilizer of the real octonion
//! axis and the span of `½[γ_i, γ_j]` for octonionic left multiplications.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{bracket, Matrix, Subspace};
use crate::octonion::OctonionTable;
use crate::scalar::Scalar;

use super::g2::G2Basis;

/// Left multiplication by the imaginary units, certified against the Clifford relations.
pub fn gamma_matrices<T: Scalar>(table: &OctonionTable<T>) -> Result<Vec<Matrix<T>>> {
    let gammas: Vec<Matrix<T>> = (1..8)
        .map(|i| {
            let e: [T; 8] = std::array::from_fn(|k| if k == i { T::one() } else { T::zero() });
            table.left_matrix(&e)
        })
        .collect();
    let id = Matrix::<T>::identity(8);
    for (i, gi) in gammas.iter().enumerate() {
        for (j, gj) in gammas.iter().enumerate() {
            let anti = gi.mul(gj)?.add(&gj.mul(gi)?)?;
            let expected = if i == j {
                id.scale(&T::from_i64(-2))
            } else {
                Matrix::zeros(8, 8)
            };
            if anti
                .sub(&expected)?
                .as_slice()
                .iter()
                .any(|x| !x.is_negligible())
            {
                return Err(Error::Certification(format!(
                    "γ{}γ{} + γ{}γ{} violates the Clifford relation",
                    i + 1,
                    j + 1,
                    j + 1,
                    i + 1
                )));
            }
        }
    }
    Ok(gammas)
}

/// `½[γ_i, γ_j]` for `i < j`.
pub fn spin7_basis<T: Scalar>(table: &OctonionTable<T>) -> Result<Vec<Matrix<T>>> {
    let g = gamma_matrices(table)?;
    let half = T::from_ratio(1, 2);
    let mut out = Vec::with_capacity(21);
    for i in 0..7 {
        for j in (i + 1)..7 {
            out.push(bracket(&g[i], &g[j])?.scale(&half));
        }
    }
    Ok(out)
}

/// `E_ab - E_ba` for `1 ≤ a < b ≤ 7`: the rotations fixing slot 0.
pub fn so7_canonical_basis<T: Scalar>() -> Vec<Matrix<T>> {
    let mut out = Vec::with_capacity(21);
    for a in 1..8 {
        for b in (a + 1)..8 {
            let mut m = Matrix::zeros(8, 8);
            m[(a, b)] = T::one();
            m[(b, a)] = -T::one();
            out.push(m);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct So8Report {
    pub clifford_certified: bool,
    pub spin7_dim: usize,
    pub so7_dim: usize,
    pub sum_dim: usize,
    pub intersection_dim: usize,
    /// The intersection, with slot 0 deleted, equals the span of the explicit `g2`.
    pub intersection_is_g2: bool,
}

pub fn so8_intersection_report<T: Scalar>(
    table: &OctonionTable<T>,
    g2: &G2Basis<T>,
) -> Result<So8Report> {
    let spin = Subspace::span_matrices(&spin7_basis(table)?)?;
    let so7 = Subspace::span_matrices(&so7_canonical_basis::<T>())?;
    let sum = spin.sum(&so7)?;
    let int = spin.intersect(&so7)?;
    let restricted: Vec<Matrix<T>> = int
        .basis()
        .iter()
        .map(|v| Ok(Matrix::from_flat(8, 8, v)?.delete_slot(0)))
        .collect::<Result<_>>()?;
    let intersection_is_g2 =
        !restricted.is_empty() && Subspace::span_matrices(&restricted)? == g2.span()?;
    Ok(So8Report {
        clifford_certified: true,
        spin7_dim: spin.dim(),
        so7_dim: so7.dim(),
        sum_dim: sum.dim(),
        intersection_dim: int.dim(),
        intersection_is_g2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::g2_basis;
    use crate::octonion::model_octonions;
    use crate::Rational;

    #[test]
    fn gammas_square_to_minus_one() {
        let t = model_octonions::<Rational>().unwrap();
        for g in gamma_matrices(&t).unwrap() {
            assert_eq!(
                g.mul(&g).unwrap(),
                Matrix::identity(8).scale(&Rational::from_i64(-1))
            );
        }
    }

    #[test]
    fn corrupted_table_is_rejected() {
        let mut t = model_octonions::<Rational>().unwrap();
        t.table[1][2][4] = Rational::from_i64(1);
        assert!(gamma_matrices(&t).is_err());
    }

    #[test]
    fn intersection_report() {
        let t = model_octonions::<Rational>().unwrap();
        let r = so8_intersection_report(&t, &g2_basis().unwrap()).unwrap();
        assert_eq!(
            (r.spin7_dim, r.so7_dim, r.sum_dim, r.intersection_dim),
            (21, 21, 28, 14)
        );
        assert!(r.intersection_is_g2);
    }
}
