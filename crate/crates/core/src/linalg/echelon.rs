//! Row reduction engines.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;

/// Gauss-Jordan elimination with partial pivoting on magnitude.
pub fn gauss_jordan<T: Scalar>(rows: &mut Vec<Vec<T>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let best = (rank..rows.len())
            .filter(|&r| !rows[r][col].is_negligible())
            .max_by(|&a, &b| {
                rows[a][col]
                    .to_f64()
                    .abs()
                    .total_cmp(&rows[b][col].to_f64().abs())
            });
        let Some(p) = best else {
            for row in rows.iter_mut().skip(rank) {
                row[col] = T::zero();
            }
            continue;
        };
        rows.swap(rank, p);
        let inv = T::one() / rows[rank][col].clone();
        for c in col..ncols {
            rows[rank][c] = rows[rank][c].clone() * inv.clone();
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for c in col..ncols {
                let v = row[c].clone() - f.clone() * pivot_row[c].clone();
                row[c] = if v.is_negligible() { T::zero() } else { v };
            }
            row[col] = T::zero();
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    pivots
}

fn integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut out: Vec<BigInt> = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    remove_content(&mut out);
    out
}

fn remove_content(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Fraction-free forward elimination over the integers (rows are cleared of
/// denominators and kept primitive), followed by a rational back-substitution
/// on the surviving pivot rows.
pub fn fraction_free_rref(rows: &mut Vec<Vec<BigRational>>, ncols: usize) -> Vec<usize> {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| integer_row(r))
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == m.len() {
            break;
        }
        // smallest nonzero pivot keeps the integers short
        let Some(p) = (rank..m.len())
            .filter(|&r| !m[r][col].is_zero())
            .min_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()))
        else {
            continue;
        };
        m.swap(rank, p);
        let (head, tail) = m.split_at_mut(rank + 1);
        let prow = &head[rank];
        let pv = &prow[col];
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let g = pv.gcd(&row[col]);
            let a = pv / &g;
            let b = &row[col] / &g;
            for c in col..ncols {
                row[c] = &a * &row[c] - &b * &prow[c];
            }
            remove_content(row);
        }
        pivots.push(col);
        rank += 1;
        // zero rows can accumulate at the bottom
        m.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    m.truncate(rank);

    let mut out: Vec<Vec<BigRational>> = m
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    for (r, &pc) in pivots.iter().enumerate().rev() {
        let inv = out[r][pc].recip();
        for c in pc..ncols {
            out[r][c] = &out[r][c] * &inv;
        }
        let pivot_row = out[r].clone();
        for row in out.iter_mut().take(r) {
            if row[pc].is_zero() {
                continue;
            }
            let f = row[pc].clone();
            for c in pc..ncols {
                row[c] = &row[c] - &f * &pivot_row[c];
            }
        }
    }
    *rows = out;
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_i64(n)
    }

    #[test]
    fn fraction_free_matches_gauss_jordan() {
        let base = vec![
            vec![q(2), q(4), q(-2), q(6)],
            vec![q(1), BigRational::from_ratio(1, 3), q(0), q(5)],
            vec![q(3), BigRational::from_ratio(13, 3), q(-2), q(11)],
        ];
        let mut a = base.clone();
        let mut b = base;
        let pa = fraction_free_rref(&mut a, 4);
        let pb = gauss_jordan(&mut b, 4);
        assert_eq!(pa, pb);
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn all_zero_rows_vanish() {
        let mut rows = vec![vec![q(0), q(0)], vec![q(0), q(0)]];
        assert!(fraction_free_rref(&mut rows, 2).is_empty());
        assert!(rows.is_empty());
    }
}
