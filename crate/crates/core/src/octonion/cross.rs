use crate::error::{Error, Result};
use crate::lie::{intertwiner_solve, G2Basis};
use crate::linalg::{bracket, inverse, solve_linear, Matrix, SolutionSet, Subspace};
use crate::scalar::Scalar;

use super::threeform::{so_basis, ThreeForm};

/// Bilinear product on R^7 given by `(x × y)_k = Σ c[i][j][k] x_i y_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossProduct7<T> {
    pub constants: Vec<Vec<Vec<T>>>,
}

impl<T: Scalar> CrossProduct7<T> {
    /// The product dual to `φ`: `⟨x × y, z⟩ = φ(x, y, z)`.
    pub fn from_phi(phi: &ThreeForm<T>) -> Self {
        let constants = (0..7)
            .map(|i| {
                (0..7)
                    .map(|j| (0..7).map(|k| phi.component(i, j, k)).collect())
                    .collect()
            })
            .collect();
        Self { constants }
    }

    pub fn apply(&self, x: &[T], y: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); 7];
        for i in 0..7 {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..7 {
                if y[j].is_zero() {
                    continue;
                }
                let xy = x[i].clone() * y[j].clone();
                for (k, o) in out.iter_mut().enumerate() {
                    let c = &self.constants[i][j][k];
                    if !c.is_zero() {
                        *o = o.clone() + c.clone() * xy.clone();
                    }
                }
            }
        }
        out
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &[T] {
        &self.constants[i][j]
    }

    pub fn is_antisymmetric(&self) -> bool {
        (0..7).all(|i| {
            (0..7).all(|j| {
                (0..7).all(|k| self.constants[i][j][k] == -self.constants[j][i][k].clone())
            })
        })
    }

    /// Polarized form of `x × (x × y) = -|x|² y + ⟨x, y⟩ x` on all basis triples.
    /// Together with antisymmetry this is equivalent to the norm identity
    /// `|x × y|² = |x|²|y|² - ⟨x, y⟩²` and to `⟨x × y, x⟩ = 0`.
    pub fn double_cross_defect(&self) -> f64 {
        let e = |i: usize| -> Vec<T> {
            (0..7)
                .map(|k| if k == i { T::one() } else { T::zero() })
                .collect()
        };
        let delta = |a: usize, b: usize| if a == b { T::one() } else { T::zero() };
        let mut worst = 0.0f64;
        for i in 0..7 {
            for j in 0..7 {
                for l in 0..7 {
                    let a = self.apply(&e(i), &self.apply(&e(j), &e(l)));
                    let b = self.apply(&e(j), &self.apply(&e(i), &e(l)));
                    for k in 0..7 {
                        let rhs = -T::from_i64(2) * delta(i, j) * delta(l, k)
                            + delta(i, l) * delta(j, k)
                            + delta(j, l) * delta(i, k);
                        let d = a[k].clone() + b[k].clone() - rhs;
                        worst = worst.max(d.to_f64().abs());
                    }
                }
            }
        }
        worst
    }

    pub fn certify(&self) -> Result<()> {
        if !self.is_antisymmetric() {
            return Err(Error::Certification(
                "cross product is not antisymmetric".into(),
            ));
        }
        let d = self.double_cross_defect();
        if d > if T::is_exact() { 0.0 } else { 1e-12 } {
            return Err(Error::Certification(format!(
                "double cross identity fails by {d}"
            )));
        }
        Ok(())
    }

    /// The unique `λ` with `self = λ · other`, if any.
    pub fn proportionality(&self, other: &Self) -> Option<T> {
        let mut lambda: Option<T> = None;
        for i in 0..7 {
            for j in 0..7 {
                for k in 0..7 {
                    let a = &self.constants[i][j][k];
                    let b = &other.constants[i][j][k];
                    match (&lambda, b.is_negligible()) {
                        (_, true) if !a.is_negligible() => return None,
                        (_, true) => {}
                        (None, false) => lambda = Some(a.clone() / b.clone()),
                        (Some(l), false) => {
                            if !(a.clone() - l.clone() * b.clone()).is_negligible() {
                                return None;
                            }
                        }
                    }
                }
            }
        }
        lambda.filter(|l| !l.is_negligible())
    }
}

/// The product obtained from the reductive decomposition `so(7) = g2 ⊕ g2^⊥`
/// and the certificate relating it to the φ-dual cross product.
#[derive(Clone, Debug)]
pub struct TorsionCross<T> {
    pub product: CrossProduct7<T>,
    /// `product = lambda · (φ-cross)`.
    pub lambda: T,
    pub complement_dim: usize,
    /// `R^7 → g2^⊥` in the chosen complement basis.
    pub identification: Matrix<T>,
    pub intertwiner_dim: usize,
}

fn so7_coords<T: Scalar>(m: &Matrix<T>) -> Vec<T> {
    let mut v = Vec::with_capacity(21);
    for i in 0..7 {
        for j in (i + 1)..7 {
            v.push(m[(i, j)].clone());
        }
    }
    v
}

fn from_so7_coords<T: Scalar>(c: &[T]) -> Matrix<T> {
    so_basis::<T>(7)
        .iter()
        .zip(c)
        .fold(Matrix::zeros(7, 7), |acc, (g, k)| {
            acc.add(&g.scale(k)).expect("7x7")
        })
}

/// Pull back the complement-projected bracket along an equivariant `R^7 ≅ g2^⊥`.
pub fn torsion_cross<T: Scalar>(basis: &G2Basis<T>, phi: &ThreeForm<T>) -> Result<TorsionCross<T>> {
    let g2_coords: Vec<Vec<T>> = basis.elements.iter().map(so7_coords).collect();
    let g2 = Subspace::span(21, &g2_coords)?;
    // trace form on so(7) coordinates: tr(E_a E_b) = -2 δ_ab
    let gram = Matrix::identity(21).scale(&T::from_i64(-2));
    let perp = g2.ortho_complement(&gram)?;
    let comp: Vec<Matrix<T>> = perp.basis().iter().map(|v| from_so7_coords(v)).collect();
    let complement_dim = comp.len();
    if complement_dim != 7 {
        return Err(Error::Certification(format!(
            "complement has dimension {complement_dim}"
        )));
    }

    let mut adjoint = Vec::with_capacity(basis.elements.len());
    for x in &basis.elements {
        let mut cols = Vec::with_capacity(7);
        for c in &comp {
            let b = so7_coords(&bracket(x, c)?);
            cols.push(perp.coordinates(&b)?.ok_or_else(|| {
                Error::Certification("complement is not invariant under g2".into())
            })?);
        }
        adjoint.push(Matrix::from_fn(7, 7, |i, j| cols[j][i].clone()));
    }
    let sol = intertwiner_solve(&basis.elements, &adjoint)?;
    let t = sol
        .invertible
        .clone()
        .ok_or_else(|| Error::Certification("no invertible equivariant identification".into()))?;
    let t_inv = inverse(&t)?;

    // projection onto the complement along g2, via the joint basis
    let joint: Vec<&Vec<T>> = g2.basis().iter().chain(perp.basis()).collect();
    let joint_mat = Matrix::from_fn(21, 21, |i, j| joint[j][i].clone());
    let to_complement = |v: &[T]| -> Result<Vec<T>> {
        match solve_linear(&joint_mat, v)? {
            SolutionSet::Affine { particular, .. } => Ok(particular[g2.dim()..].to_vec()),
            SolutionSet::Inconsistent => {
                Err(Error::Certification("joint basis is not spanning".into()))
            }
        }
    };
    let image = |v: &[T]| -> Result<Matrix<T>> {
        let c = t.mul_vec(v)?;
        Ok(comp
            .iter()
            .zip(&c)
            .fold(Matrix::zeros(7, 7), |acc, (m, k)| {
                acc.add(&m.scale(k)).expect("7x7")
            }))
    };
    let e = |i: usize| -> Vec<T> {
        (0..7)
            .map(|k| if k == i { T::one() } else { T::zero() })
            .collect()
    };
    let mut constants = vec![vec![vec![T::zero(); 7]; 7]; 7];
    for i in 0..7 {
        for j in 0..7 {
            let b = bracket(&image(&e(i))?, &image(&e(j))?)?;
            let proj = to_complement(&so7_coords(&b))?;
            constants[i][j] = t_inv.mul_vec(&proj)?;
        }
    }
    let product = CrossProduct7 { constants };
    let reference = CrossProduct7::from_phi(phi);
    let lambda = product.proportionality(&reference).ok_or_else(|| {
        Error::Certification("torsion product is not proportional to the φ cross product".into())
    })?;
    Ok(TorsionCross {
        product,
        lambda,
        complement_dim,
        identification: t,
        intertwiner_dim: sol.solutions.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::g2_basis;
    use crate::octonion::invariant_threeform;
    use crate::Rational;

    fn q(x: i64) -> Rational {
        Rational::from_i64(x)
    }

    #[test]
    fn phi_cross_is_a_cross_product() {
        let phi = invariant_threeform(&g2_basis::<Rational>().unwrap()).unwrap();
        let c = CrossProduct7::from_phi(&phi);
        c.certify().unwrap();
        // e1 × e2 = e3 and the unit slot rotates the positive block onto the negative one
        let e = |i: usize| (0..7).map(|k| q((k == i) as i64)).collect::<Vec<_>>();
        assert_eq!(c.apply(&e(0), &e(1)), e(2));
        for i in 0..3 {
            assert_eq!(c.apply(&e(3), &e(i)), e(4 + i));
        }
    }

    #[test]
    fn torsion_product_is_proportional() {
        let b = g2_basis::<Rational>().unwrap();
        let phi = invariant_threeform(&b).unwrap();
        let tc = torsion_cross(&b, &phi).unwrap();
        assert_eq!(tc.complement_dim, 7);
        assert!(tc.product.is_antisymmetric());
        assert_ne!(tc.lambda, q(0));
    }

    #[test]
    fn proportionality_rejects_mismatch() {
        let phi = invariant_threeform(&g2_basis::<Rational>().unwrap()).unwrap();
        let c = CrossProduct7::from_phi(&phi);
        let mut d = c.clone();
        d.constants[0][1][2] = q(5);
        assert!(d.proportionality(&c).is_none());
        assert_eq!(c.proportionality(&c), Some(q(1)));
    }
}
