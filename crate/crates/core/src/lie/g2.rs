//! The fourteen-dimensional `g2 = sl(3) ⊕ m` inside `so(7)` and its certificates.

use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{bracket, solve_linear, trace_form, Matrix, SolutionSet, Subspace};
use crate::scalar::Scalar;

use super::embeddings::{
    h_map, lift_g2, m_embed, sl3_embed, so6_to_so7, MVector, Sl3Param, LIFT_TO_R7,
};

/// Coordinates of `target` in the (not necessarily echelon) list `basis`.
pub fn coordinates_in<T: Scalar>(
    basis: &[Matrix<T>],
    target: &Matrix<T>,
) -> Result<Option<Vec<T>>> {
    let n = target.rows() * target.cols();
    let a = Matrix::from_fn(n, basis.len(), |i, j| basis[j].as_slice()[i].clone());
    match solve_linear(&a, target.as_slice())? {
        SolutionSet::Inconsistent => Ok(None),
        SolutionSet::Affine { particular, kernel } => {
            if !kernel.is_empty() {
                return Err(Error::Certification("basis is linearly dependent".into()));
            }
            Ok(Some(particular))
        }
    }
}

/// Structure constants `[X_i, X_j] = Σ_k c[i][j][k] X_k` for a bracket-closed basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosureCertificate<T> {
    pub structure_constants: Vec<Vec<Vec<T>>>,
}

impl<T: Scalar> ClosureCertificate<T> {
    /// Expand every pairwise bracket; fails on the first bracket outside the span.
    pub fn compute(elements: &[Matrix<T>]) -> Result<Self> {
        let k = elements.len();
        let mut c = vec![vec![vec![T::zero(); k]; k]; k];
        for i in 0..k {
            for j in (i + 1)..k {
                let b = bracket(&elements[i], &elements[j])?;
                let coords = coordinates_in(elements, &b)?.ok_or_else(|| {
                    Error::Certification(format!("bracket of elements {i} and {j} leaves the span"))
                })?;
                for (m, v) in coords.into_iter().enumerate() {
                    c[j][i][m] = -v.clone();
                    c[i][j][m] = v;
                }
            }
        }
        Ok(Self {
            structure_constants: c,
        })
    }

    /// Largest |entry| of `Σ c_ij^k X_k - [X_i, X_j]` over all pairs.
    pub fn residual(&self, elements: &[Matrix<T>]) -> Result<f64> {
        let mut worst = 0.0f64;
        for (i, xi) in elements.iter().enumerate() {
            for (j, xj) in elements.iter().enumerate() {
                let mut acc = bracket(xi, xj)?.scale(&-T::one());
                for (m, xm) in elements.iter().enumerate() {
                    acc = acc.add(&xm.scale(&self.structure_constants[i][j][m]))?;
                }
                worst = worst.max(acc.max_abs());
            }
        }
        Ok(worst)
    }
}

/// Basis of `g2 ⊂ so(7)`: eight `sl(3)` elements followed by six `m` elements.
#[derive(Clone, Debug)]
pub struct G2Basis<T> {
    pub elements: Vec<Matrix<T>>,
    pub h_block: Range<usize>,
    pub m_block: Range<usize>,
    pub closure: ClosureCertificate<T>,
}

impl<T: Scalar> G2Basis<T> {
    pub fn h_elements(&self) -> &[Matrix<T>] {
        &self.elements[self.h_block.clone()]
    }

    pub fn m_elements(&self) -> &[Matrix<T>] {
        &self.elements[self.m_block.clone()]
    }

    pub fn span(&self) -> Result<Subspace<T>> {
        Subspace::span_matrices(&self.elements)
    }

    pub fn to_f64(&self) -> G2Basis<f64> {
        G2Basis {
            elements: self.elements.iter().map(Matrix::to_f64).collect(),
            h_block: self.h_block.clone(),
            m_block: self.m_block.clone(),
            closure: ClosureCertificate {
                structure_constants: self
                    .closure
                    .structure_constants
                    .iter()
                    .map(|a| {
                        a.iter()
                            .map(|b| b.iter().map(T::to_f64).collect())
                            .collect()
                    })
                    .collect(),
            },
        }
    }

    /// `[h-block, m-block] ⊆ m-block`, read off the structure constants.
    pub fn is_reductive(&self) -> bool {
        let c = &self.closure.structure_constants;
        self.h_block.clone().all(|i| {
            self.m_block
                .clone()
                .all(|j| self.h_block.clone().all(|k| c[i][j][k].is_zero()))
        })
    }

    /// A pair of `m` elements whose bracket has a nonzero `sl(3)` component,
    /// witnessing that the decomposition is not symmetric.
    pub fn non_symmetric_witness(&self) -> Option<(usize, usize)> {
        let c = &self.closure.structure_constants;
        for i in self.m_block.clone() {
            for j in self.m_block.clone() {
                if self.h_block.clone().any(|k| !c[i][j][k].is_zero()) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// Build the basis and certify bracket closure.
pub fn g2_basis<T: Scalar>() -> Result<G2Basis<T>> {
    let mut elements = Vec::with_capacity(14);
    for p in Sl3Param::<T>::basis() {
        elements.push(so6_to_so7(&sl3_embed(&p))?);
    }
    for v in MVector::<T>::basis() {
        elements.push(m_embed(&v));
    }
    if let Some(i) = elements.iter().position(|m| !m.is_skew()) {
        return Err(Error::Certification(format!(
            "basis element {i} is not skew"
        )));
    }
    let dim = Subspace::span_matrices(&elements)?.dim();
    if dim != 14 {
        return Err(Error::Certification(format!(
            "span has dimension {dim}, expected 14"
        )));
    }
    let closure = ClosureCertificate::compute(&elements)?;
    Ok(G2Basis {
        elements,
        h_block: 0..8,
        m_block: 8..14,
        closure,
    })
}

/// `h ⊕ m` as subspaces of flattened `so(n)`.
#[derive(Clone, Debug)]
pub struct ReductivePair<T> {
    pub n: usize,
    pub h_sub: Subspace<T>,
    pub m_sub: Subspace<T>,
}

impl<T: Scalar> ReductivePair<T> {
    pub fn new(h: &[Matrix<T>], m: &[Matrix<T>]) -> Result<Self> {
        let n = h
            .first()
            .or(m.first())
            .map(Matrix::rows)
            .ok_or_else(|| Error::InvalidParameter("empty pair".into()))?;
        Ok(Self {
            n,
            h_sub: Subspace::span_matrices(h)?,
            m_sub: Subspace::span_matrices(m)?,
        })
    }

    fn as_matrices(&self, s: &Subspace<T>) -> Vec<Matrix<T>> {
        s.basis()
            .iter()
            .map(|v| Matrix::from_flat(self.n, self.n, v).expect("square"))
            .collect()
    }

    /// `h ∩ m = 0` and `[h, m] ⊆ m`.
    pub fn certify(&self) -> Result<bool> {
        if self.h_sub.intersect(&self.m_sub)?.dim() != 0 {
            return Ok(false);
        }
        for a in self.as_matrices(&self.h_sub) {
            for x in self.as_matrices(&self.m_sub) {
                if !self.m_sub.contains(bracket(&a, &x)?.as_slice())? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Exact certification summary for the explicit embeddings.
#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingCertificate {
    pub span_dim: usize,
    pub closure_residual: f64,
    pub reductive: bool,
    pub symmetric_witness: Option<(usize, usize)>,
    pub orthogonality_residual: f64,
    pub h_equivariance_residual: f64,
    pub adjoint_matches_canonical: bool,
    /// `so(6)`-part of `m_embed(e_i)` divided by `h_map(e_i)`, one per basis vector.
    pub m_embed_over_h_map: Vec<String>,
    /// `m_embed(v) = P lift(0, s v) Pᵀ` holds with this `s`, one per basis vector.
    pub lift_scale: Vec<String>,
    pub lift_complement_certified: bool,
    pub trace_form_to_killing: String,
}

fn ratio<T: Scalar>(num: &Matrix<T>, den: &Matrix<T>) -> Option<T> {
    let (idx, d) = den
        .as_slice()
        .iter()
        .enumerate()
        .find(|(_, d)| !d.is_zero())?;
    let r = num.as_slice()[idx].clone() / d.clone();
    (num.sub(&den.scale(&r)).ok()?.is_zero()).then_some(r)
}

/// Run every exact certification attached to the explicit matrices.
pub fn certify_embeddings<T: Scalar + std::fmt::Display>(
    basis: &G2Basis<T>,
) -> Result<EmbeddingCertificate> {
    let span = basis.span()?;
    let closure_residual = basis.closure.residual(&basis.elements)?;

    let mut orth = 0.0f64;
    for a in basis.h_elements() {
        for x in basis.m_elements() {
            orth = orth.max(trace_form(a, x)?.to_f64().abs());
        }
    }

    let sl3_6: Vec<Matrix<T>> = Sl3Param::<T>::basis().iter().map(sl3_embed).collect();
    let mvecs = MVector::<T>::basis();
    let mut equiv = 0.0f64;
    let mut adjoint_ok = true;
    for a in &sl3_6 {
        let a7 = so6_to_so7(a)?;
        for x in &mvecs {
            let ax = MVector::from_slice(&a.mul_vec(&x.to_vec())?)?;
            let lhs = bracket(a, &h_map(x))?;
            equiv = equiv.max(lhs.sub(&h_map(&ax))?.max_abs());
            adjoint_ok &= bracket(&a7, &m_embed(x))? == m_embed(&ax);
        }
    }

    let mut m_over_h = Vec::new();
    let mut lift_scale = Vec::new();
    let zero6 = Matrix::<T>::zeros(6, 6);
    for x in &mvecs {
        let so6_part = m_embed(x).delete_slot(super::embeddings::UNIT_SLOT);
        let r = ratio(&so6_part, &h_map(x))
            .ok_or_else(|| Error::Certification("m_embed and h_map are not proportional".into()))?;
        m_over_h.push(r.to_string());
        let unit_lift = lift_g2(&zero6, x)?;
        let s = ratio(&m_embed(x), &unit_lift).ok_or_else(|| {
            Error::Certification("m_embed is not a multiple of the permuted lift".into())
        })?;
        lift_scale.push(s.to_string());
    }

    // image of the lift over the m-basis complements sl(3) inside g2
    let lifts: Vec<Matrix<T>> = mvecs
        .iter()
        .map(|x| lift_g2(&zero6, x))
        .collect::<Result<_>>()?;
    let lift_span = Subspace::span_matrices(&lifts)?;
    let h_span = Subspace::span_matrices(basis.h_elements())?;
    let lift_complement_certified = lift_span.dim() == 6
        && lift_span.intersect(&h_span)?.dim() == 0
        && lift_span.sum(&h_span)? == span;

    debug_assert_eq!(LIFT_TO_R7.len(), 7);
    Ok(EmbeddingCertificate {
        span_dim: span.dim(),
        closure_residual,
        reductive: basis.is_reductive(),
        symmetric_witness: basis.non_symmetric_witness(),
        orthogonality_residual: orth,
        h_equivariance_residual: equiv,
        adjoint_matches_canonical: adjoint_ok,
        m_embed_over_h_map: m_over_h,
        lift_scale,
        lift_complement_certified,
        // Killing form of so(n) is (n - 2) tr(AB); for so(7) the factor is 5
        trace_form_to_killing: "5".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn basis_is_fourteen_dimensional_and_closed() {
        let b = g2_basis::<Rational>().unwrap();
        assert_eq!(b.span().unwrap().dim(), 14);
        assert_eq!(b.closure.residual(&b.elements).unwrap(), 0.0);
        assert!(b.is_reductive());
        assert!(b.non_symmetric_witness().is_some());
    }

    #[test]
    fn reductive_pair_certifies() {
        let b = g2_basis::<Rational>().unwrap();
        let pair = ReductivePair::new(b.h_elements(), b.m_elements()).unwrap();
        assert!(pair.certify().unwrap());
        // swapping roles breaks reductivity: [m, sl3] ⊄ sl3
        let swapped = ReductivePair::new(b.m_elements(), b.h_elements()).unwrap();
        assert!(!swapped.certify().unwrap());
    }

    #[test]
    fn float_basis_agrees() {
        let b = g2_basis::<f64>().unwrap();
        assert_eq!(b.span().unwrap().dim(), 14);
        assert!(b.closure.residual(&b.elements).unwrap() < 1e-12);
    }
}
