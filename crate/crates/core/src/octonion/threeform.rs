use crate::error::{Error, Result};
use crate::forms::{combinations, Form};
use crate::lie::G2Basis;
use crate::linalg::{kernel, Matrix, Subspace};
use crate::scalar::Scalar;

/// A 3-form on R^7.
#[derive(Clone, Debug, PartialEq)]
pub struct ThreeForm<T>(Form<T>);

impl<T: Scalar> ThreeForm<T> {
    pub fn from_form(f: Form<T>) -> Result<Self> {
        if f.dim() != 7 || f.degree() != 3 {
            return Err(Error::DimensionMismatch(
                "a 3-form on R^7 is required".into(),
            ));
        }
        Ok(Self(f))
    }

    pub fn form(&self) -> &Form<T> {
        &self.0
    }

    /// `φ_{ijk}` with sign for any index order.
    pub fn component(&self, i: usize, j: usize, k: usize) -> T {
        self.0.get(&[i, j, k])
    }

    pub fn eval(&self, x: &[T], y: &[T], z: &[T]) -> Result<T> {
        self.0.eval(&[x, y, z])
    }

    pub fn norm_sq(&self) -> T {
        self.0.norm_sq()
    }

    /// Nonzero components on increasing triples.
    pub fn support(&self) -> Vec<([usize; 3], T)> {
        combinations(7, 3)
            .into_iter()
            .zip(self.0.components())
            .filter(|(_, c)| !c.is_zero())
            .map(|(t, c)| ([t[0], t[1], t[2]], c.clone()))
            .collect()
    }

    /// Scale to `‖φ‖² = 7` with the first nonzero component positive.
    pub fn normalize(&self) -> Result<Self> {
        let first = self
            .0
            .components()
            .iter()
            .find(|c| !c.is_negligible())
            .ok_or_else(|| Error::Certification("zero 3-form cannot be normalized".into()))?;
        let sign = if first.to_f64() < 0.0 {
            -T::one()
        } else {
            T::one()
        };
        let factor = (T::from_i64(7) / self.0.norm_sq())
            .checked_sqrt()
            .ok_or_else(|| Error::Certification("normalizing factor is irrational".into()))?;
        Ok(Self(self.0.scale(&(factor * sign))))
    }

    /// `*φ` for the Euclidean metric and orientation `e_1 ∧ … ∧ e_7`.
    pub fn star(&self) -> Form<T> {
        self.0.hodge_euclid()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> ThreeForm<U> {
        ThreeForm(self.0.map(f))
    }

    pub fn to_f64(&self) -> ThreeForm<f64> {
        self.map(T::to_f64)
    }
}

/// Columns are the action of `a` on the 35 basis 3-forms.
fn action_matrix<T: Scalar>(a: &Matrix<T>) -> Result<Matrix<T>> {
    let combos = combinations(7, 3);
    let mut cols = Vec::with_capacity(combos.len());
    for c in &combos {
        cols.push(Form::<T>::basis_form(7, c).act(a)?.into_components());
    }
    Ok(Matrix::from_fn(combos.len(), combos.len(), |i, j| {
        cols[j][i].clone()
    }))
}

/// The unique (up to scale) 3-form annihilated by every element of `basis`.
pub fn invariant_threeform<T: Scalar>(basis: &G2Basis<T>) -> Result<ThreeForm<T>> {
    let mut rows: Vec<Vec<T>> = Vec::new();
    for a in &basis.elements {
        let m = action_matrix(a)?;
        rows.extend((0..m.rows()).map(|i| m.row(i).to_vec()));
    }
    let ker = kernel(&Matrix::from_rows(&rows)?);
    if ker.len() != 1 {
        return Err(Error::Certification(format!(
            "invariant 3-forms span dimension {}, expected 1",
            ker.len()
        )));
    }
    ThreeForm::from_form(Form::from_components(
        7,
        3,
        ker.into_iter().next().unwrap(),
    )?)?
    .normalize()
}

/// The 21 standard generators `E_ij - E_ji`, `i < j`.
pub fn so_basis<T: Scalar>(n: usize) -> Vec<Matrix<T>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut m = Matrix::zeros(n, n);
            m[(i, j)] = T::one();
            m[(j, i)] = -T::one();
            out.push(m);
        }
    }
    out
}

/// `{A ∈ so(7) : A·φ = 0}` as a subspace of flattened 7x7 matrices.
pub fn stabilizer<T: Scalar>(phi: &ThreeForm<T>) -> Result<Subspace<T>> {
    let gens = so_basis::<T>(7);
    let images: Vec<Vec<T>> = gens
        .iter()
        .map(|g| Ok(phi.form().act(g)?.into_components()))
        .collect::<Result<_>>()?;
    let sys = Matrix::from_fn(35, gens.len(), |i, j| images[j][i].clone());
    let mats: Vec<Matrix<T>> = kernel(&sys)
        .into_iter()
        .map(|c| {
            gens.iter()
                .zip(&c)
                .fold(Matrix::zeros(7, 7), |acc, (g, k)| {
                    acc.add(&g.scale(k)).unwrap()
                })
        })
        .collect();
    if mats.is_empty() {
        return Ok(Subspace::zero(49));
    }
    Subspace::span_matrices(&mats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::g2_basis;
    use crate::Rational;

    #[test]
    fn invariant_form_support() {
        let phi = invariant_threeform(&g2_basis::<Rational>().unwrap()).unwrap();
        assert_eq!(phi.norm_sq(), Rational::from_i64(7));
        let support: Vec<([usize; 3], i64)> = phi
            .support()
            .into_iter()
            .map(|(t, c)| (t, c.to_integer().try_into().unwrap()))
            .collect();
        assert_eq!(
            support,
            vec![
                ([0, 1, 2], 1),
                ([0, 3, 4], -1),
                ([0, 5, 6], -1),
                ([1, 3, 5], -1),
                ([1, 4, 6], 1),
                ([2, 3, 6], -1),
                ([2, 4, 5], -1),
            ]
        );
    }

    #[test]
    fn normalization_fixes_sign() {
        let phi = invariant_threeform(&g2_basis::<Rational>().unwrap()).unwrap();
        let flipped = ThreeForm::from_form(phi.form().scale(&Rational::from_i64(-3))).unwrap();
        assert_eq!(flipped.normalize().unwrap(), phi);
    }

    #[test]
    fn stabilizer_of_zero_form_is_everything() {
        let zero = ThreeForm::from_form(Form::<Rational>::zero(7, 3)).unwrap();
        assert_eq!(stabilizer(&zero).unwrap().dim(), 21);
    }
}
