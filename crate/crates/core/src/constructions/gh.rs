use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{exterior_d, gradient, hodge_on_block, riemann, FieldFn, StencilConfig};
use crate::forms::Form;
use crate::linalg::Matrix;

/// A positive function `V` and a 1-form `A` on an open subset of `R^3`.
#[derive(Clone, Debug)]
pub struct GhData {
    pub v: FieldFn<f64, f64>,
    pub potential: FieldFn<f64, Form<f64>>,
}

/// `V |dx|² + V⁻¹ (dt + A)²` in coordinates `(x_1, x_2, x_3, t)`.
pub fn gh_build(data: &GhData) -> Result<FieldFn<f64, Matrix<f64>>> {
    if data.v.dim() != 3 || data.potential.dim() != 3 {
        return Err(Error::DimensionMismatch(
            "Gibbons-Hawking data lives on R^3".into(),
        ));
    }
    let v = data.v.clone();
    let a = data.potential.clone();
    let domain = v.domain().lift(&[0, 1, 2], 4, &[(3, (-1.0, 1.0))]);
    Ok(FieldFn::new(domain, move |q: &[f64]| {
        let x = &q[..3];
        let vv = v.at(x);
        let pot = a.at(x);
        let comps: Vec<f64> = (0..3).map(|i| pot.get(&[i])).chain([1.0]).collect();
        Matrix::from_fn(4, 4, |i, j| {
            let flat = if i == j && i < 3 { vv } else { 0.0 };
            flat + comps[i] * comps[j] / vv
        })
    }))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct GhResidual {
    /// `sup |dA - *dV|`.
    pub monopole: f64,
    /// `sup |Riem|` over coordinate components.
    pub riemann: f64,
    /// `sup |Ric|`.
    pub ricci: f64,
}

/// Monopole equation on `R^3` and curvature of the built metric over `points`
/// (points of `R^3`; the circle coordinate is set to zero).
pub fn gh_residual(
    data: &GhData,
    points: &[Vec<f64>],
    first: &StencilConfig,
    curvature: &StencilConfig,
) -> Result<GhResidual> {
    let metric = gh_build(data)?;
    let each: Vec<GhResidual> = points
        .par_iter()
        .map(|p| {
            let vv = data.v.eval(p)?;
            if !(vv > 0.0) {
                return Err(Error::BadValue(format!("V = {vv} must be positive")));
            }
            let dv = Form::from_components(3, 1, gradient(&data.v, p, first)?)?;
            let star = hodge_on_block(&dv, &Matrix::identity(3), 1)?;
            let da = exterior_d(&data.potential, p, first)?;
            let mut q = p.clone();
            q.push(0.0);
            let r = riemann(&metric, &q, curvature)?;
            Ok(GhResidual {
                monopole: da.sub(&star)?.max_abs(),
                riemann: r.max_abs(),
                ricci: r.ricci().max_abs(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(each.iter().fold(GhResidual::default(), |a, b| GhResidual {
        monopole: a.monopole.max(b.monopole),
        riemann: a.riemann.max(b.riemann),
        ricci: a.ricci.max(b.ricci),
    }))
}
