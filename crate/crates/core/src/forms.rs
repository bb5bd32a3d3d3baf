//! Alternating multilinear forms on `T^n` with components on increasing index tuples.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Increasing `k`-tuples of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::with_capacity(binomial(n, k));
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Lexicographic rank of an increasing tuple.
pub fn combination_rank(n: usize, sorted: &[usize]) -> usize {
    let k = sorted.len();
    let mut rank = 0;
    let mut next = 0;
    for (i, &c) in sorted.iter().enumerate() {
        for j in next..c {
            rank += binomial(n - 1 - j, k - 1 - i);
        }
        next = c + 1;
    }
    rank
}

/// Sort `idx`, returning the permutation sign, or `None` on a repeated index.
pub fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, i32)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// Sign of the permutation taking `0..n` to `perm`.
pub fn permutation_sign(perm: &[usize]) -> i32 {
    sort_with_sign(perm).map_or(0, |(_, s)| s)
}

fn small_det<T: Scalar>(m: &[Vec<T>]) -> T {
    match m.len() {
        0 => T::one(),
        1 => m[0][0].clone(),
        2 => m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone(),
        _ => {
            // cofactor expansion along the first row
            let mut acc = T::zero();
            for j in 0..m.len() {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<T>> = m[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][j].clone() * small_det(&minor);
                acc = if j % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

/// An alternating `k`-form on an `n`-dimensional space.
#[derive(Clone, Debug, PartialEq)]
pub struct Form<T> {
    n: usize,
    k: usize,
    comps: Vec<T>,
}

impl<T: Scalar> Form<T> {
    pub fn zero(n: usize, k: usize) -> Self {
        Self {
            n,
            k,
            comps: vec![T::zero(); binomial(n, k)],
        }
    }

    pub fn from_components(n: usize, k: usize, comps: Vec<T>) -> Result<Self> {
        if comps.len() != binomial(n, k) {
            return Err(Error::DimensionMismatch(format!(
                "{} components for a {k}-form in dimension {n}",
                comps.len()
            )));
        }
        Ok(Self { n, k, comps })
    }

    /// The basis form `dx^{i_1} ∧ … ∧ dx^{i_k}` (indices in any order).
    pub fn basis_form(n: usize, idx: &[usize]) -> Self {
        let mut f = Self::zero(n, idx.len());
        if let Some((s, sign)) = sort_with_sign(idx) {
            let r = combination_rank(n, &s);
            f.comps[r] = T::from_i64(sign as i64);
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn components(&self) -> &[T] {
        &self.comps
    }

    pub fn into_components(self) -> Vec<T> {
        self.comps
    }

    /// Component on an arbitrary index tuple, sign included.
    pub fn get(&self, idx: &[usize]) -> T {
        match sort_with_sign(idx) {
            None => T::zero(),
            Some((s, sign)) => {
                let v = self.comps[combination_rank(self.n, &s)].clone();
                if sign < 0 {
                    -v
                } else {
                    v
                }
            }
        }
    }

    pub fn set_sorted(&mut self, sorted: &[usize], v: T) {
        let r = combination_rank(self.n, sorted);
        self.comps[r] = v;
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::DimensionMismatch("forms of different shape".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self {
            n: self.n,
            k: self.k,
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, s: &T) -> Self {
        Self {
            n: self.n,
            k: self.k,
            comps: self.comps.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Form<U> {
        Form {
            n: self.n,
            k: self.k,
            comps: self.comps.iter().map(f).collect(),
        }
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch("wedge across dimensions".into()));
        }
        let k = self.k + other.k;
        let mut out = Self::zero(self.n, k);
        if k > self.n {
            return Ok(out);
        }
        let ca = combinations(self.n, self.k);
        let cb = combinations(self.n, other.k);
        for (a, va) in ca.iter().zip(&self.comps) {
            if va.is_zero() {
                continue;
            }
            for (b, vb) in cb.iter().zip(&other.comps) {
                if vb.is_zero() {
                    continue;
                }
                let joined: Vec<usize> = a.iter().chain(b).copied().collect();
                if let Some((s, sign)) = sort_with_sign(&joined) {
                    let r = combination_rank(self.n, &s);
                    let term = va.clone() * vb.clone();
                    out.comps[r] = if sign > 0 {
                        out.comps[r].clone() + term
                    } else {
                        out.comps[r].clone() - term
                    };
                }
            }
        }
        Ok(out)
    }

    /// `ω(v_1, …, v_k)`.
    pub fn eval(&self, vectors: &[&[T]]) -> Result<T> {
        if vectors.len() != self.k || vectors.iter().any(|v| v.len() != self.n) {
            return Err(Error::DimensionMismatch(
                "form evaluated on wrong arguments".into(),
            ));
        }
        let mut acc = T::zero();
        for (idx, w) in combinations(self.n, self.k).iter().zip(&self.comps) {
            if w.is_zero() {
                continue;
            }
            let m: Vec<Vec<T>> = idx
                .iter()
                .map(|&i| vectors.iter().map(|v| v[i].clone()).collect())
                .collect();
            acc = acc + w.clone() * small_det(&m);
        }
        Ok(acc)
    }

    /// Substitute `dx^a = Σ_i m[(a, i)] dy^i`; `m` is `n x n_new`.
    pub fn pullback(&self, m: &Matrix<T>) -> Result<Self> {
        if m.rows() != self.n {
            return Err(Error::DimensionMismatch("pullback matrix rows".into()));
        }
        let nn = m.cols();
        let mut out = Self::zero(nn, self.k);
        let src = combinations(self.n, self.k);
        for (jdx, slot) in combinations(nn, self.k).iter().zip(out.comps.iter_mut()) {
            let mut acc = T::zero();
            for (idx, w) in src.iter().zip(&self.comps) {
                if w.is_zero() {
                    continue;
                }
                let minor: Vec<Vec<T>> = idx
                    .iter()
                    .map(|&a| jdx.iter().map(|&j| m[(a, j)].clone()).collect())
                    .collect();
                acc = acc + w.clone() * small_det(&minor);
            }
            *slot = acc;
        }
        Ok(out)
    }

    /// Natural action of `a ∈ gl(n)`: `(a·ω)(v…) = -Σ ω(…, a v_i, …)`.
    pub fn act(&self, a: &Matrix<T>) -> Result<Self> {
        if a.rows() != self.n || !a.is_square() {
            return Err(Error::DimensionMismatch("action matrix size".into()));
        }
        let mut out = Self::zero(self.n, self.k);
        for (idx, slot) in combinations(self.n, self.k)
            .iter()
            .zip(out.comps.iter_mut())
        {
            let mut acc = T::zero();
            for pos in 0..self.k {
                for l in 0..self.n {
                    let c = &a[(l, idx[pos])];
                    if c.is_zero() {
                        continue;
                    }
                    let mut j = idx.clone();
                    j[pos] = l;
                    acc = acc - c.clone() * self.get(&j);
                }
            }
            *slot = acc;
        }
        Ok(out)
    }

    /// Hodge star for the standard Euclidean metric, orientation `e_0 ∧ … ∧ e_{n-1}`.
    pub fn hodge_euclid(&self) -> Self {
        let mut out = Self::zero(self.n, self.n - self.k);
        for (idx, w) in combinations(self.n, self.k).iter().zip(&self.comps) {
            let comp: Vec<usize> = (0..self.n).filter(|i| !idx.contains(i)).collect();
            let perm: Vec<usize> = idx.iter().chain(&comp).copied().collect();
            let s = permutation_sign(&perm);
            let r = combination_rank(self.n, &comp);
            out.comps[r] = if s > 0 { w.clone() } else { -w.clone() };
        }
        out
    }

    /// `Σ_I ω_I²`, the Euclidean norm squared.
    pub fn norm_sq(&self) -> T {
        self.comps
            .iter()
            .fold(T::zero(), |acc, c| acc + c.clone() * c.clone())
    }

    pub fn max_abs(&self) -> f64 {
        self.comps
            .iter()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max)
    }

    /// Restriction to the coordinate subspace `slots`, in the given order.
    pub fn restrict(&self, slots: &[usize]) -> Self {
        let mut out = Self::zero(slots.len(), self.k);
        for (idx, slot) in combinations(slots.len(), self.k)
            .iter()
            .zip(out.comps.iter_mut())
        {
            let j: Vec<usize> = idx.iter().map(|&i| slots[i]).collect();
            *slot = self.get(&j);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn ranks_match_enumeration() {
        for n in 1..8 {
            for k in 0..=n {
                for (r, c) in combinations(n, k).iter().enumerate() {
                    assert_eq!(combination_rank(n, c), r);
                }
            }
        }
    }

    #[test]
    fn wedge_and_hodge_in_three_dimensions() {
        let dx: Form<Rational> = Form::basis_form(3, &[0]);
        let dy = Form::basis_form(3, &[1]);
        let dxy = dx.wedge(&dy).unwrap();
        assert_eq!(dxy, Form::basis_form(3, &[0, 1]));
        assert_eq!(dy.wedge(&dx).unwrap(), dxy.scale(&Rational::from_i64(-1)));
        assert_eq!(dx.hodge_euclid(), Form::basis_form(3, &[1, 2]));
        assert_eq!(dy.hodge_euclid(), Form::basis_form(3, &[2, 0]));
        assert_eq!(dxy.hodge_euclid(), Form::basis_form(3, &[2]));
    }

    #[test]
    fn repeated_indices_vanish() {
        let f: Form<Rational> = Form::basis_form(4, &[1, 1]);
        assert!(f.components().iter().all(|c| *c == Rational::from_i64(0)));
        assert_eq!(sort_with_sign(&[2, 0, 1]), Some((vec![0, 1, 2], 1)));
        assert_eq!(sort_with_sign(&[1, 0, 2]), Some((vec![0, 1, 2], -1)));
    }
}
