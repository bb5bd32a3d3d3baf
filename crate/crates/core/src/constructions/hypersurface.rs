use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{fd_partial, FieldFn, StencilConfig};
use crate::linalg::{determinant, inverse, Matrix};
use crate::octonion::{model_phi, CrossProduct7};
use crate::Rational;

use super::{cholesky, column, dot, vec_max_abs};

/// A parametrised hypersurface `R^6 ⊃ U → R^7`.
#[derive(Clone, Debug)]
pub struct Immersion {
    pub name: String,
    pub map: FieldFn<f64, Vec<f64>>,
}

fn cross() -> &'static CrossProduct7<f64> {
    static CROSS: OnceLock<CrossProduct7<f64>> = OnceLock::new();
    CROSS.get_or_init(|| {
        CrossProduct7::from_phi(&model_phi::<Rational>().expect("model 3-form").to_f64())
    })
}

/// Suprema over the sample of the hypersurface residuals, all measured in an
/// orthonormal tangent frame.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct HypersurfaceReport {
    /// `|(∇_X J)X|`, polarised.
    pub nearly_kahler: f64,
    /// `|∇J|`.
    pub kahler: f64,
    /// Trace-free part of the second fundamental form.
    pub umbilic: f64,
    /// Second fundamental form.
    pub geodesic: f64,
}

fn tangents(map: &FieldFn<f64, Vec<f64>>, p: &[f64], cfg: &StencilConfig) -> Result<Matrix<f64>> {
    let cols: Vec<Vec<f64>> = (0..6)
        .map(|i| fd_partial(map, p, i, cfg))
        .collect::<Result<_>>()?;
    Ok(Matrix::from_fn(7, 6, |k, i| cols[i][k]))
}

/// Unit normal `*(t_1 ∧ … ∧ t_6)`, normalised.
fn normal_of(t: &Matrix<f64>) -> Result<Vec<f64>> {
    let mut n = Vec::with_capacity(7);
    for k in 0..7 {
        let minor = Matrix::from_fn(6, 6, |r, c| t[(if r < k { r } else { r + 1 }, c)]);
        let s = if k % 2 == 0 { 1.0 } else { -1.0 };
        n.push(s * determinant(&minor)?);
    }
    let len = dot(&n, &n).sqrt();
    if !(len > 0.0) {
        return Err(Error::BadValue("degenerate immersion".into()));
    }
    Ok(n.into_iter().map(|x| x / len).collect())
}

fn tangential(v: &[f64], n: &[f64]) -> Vec<f64> {
    let c = dot(v, n);
    v.iter().zip(n).map(|(a, b)| a - c * b).collect()
}

fn at_point(imm: &Immersion, p: &[f64], cfg: &StencilConfig) -> Result<HypersurfaceReport> {
    let map = imm.map.clone();
    let inner = *cfg;
    let tangent_field = FieldFn::new(map.domain().clone(), move |q: &[f64]| {
        tangents(&map, q, &inner)
            .map(|m| m.flatten())
            .unwrap_or_else(|_| vec![f64::NAN; 42])
    });
    let t = Matrix::from_flat(7, 6, &tangent_field.eval(p)?)?;
    let n = normal_of(&t)?;
    // J t_j along the surface
    let jt_field = tangent_field.map(|_, flat| {
        let t = Matrix::from_flat(7, 6, &flat).expect("7x6");
        let n = normal_of(&t).unwrap_or_else(|_| vec![f64::NAN; 7]);
        (0..6)
            .flat_map(|j| cross().apply(&n, &column(&t, j)))
            .collect::<Vec<f64>>()
    });
    let mut k = vec![vec![Vec::new(); 6]; 6];
    let mut second = Matrix::zeros(6, 6);
    for i in 0..6 {
        let d_t = fd_partial(&tangent_field, p, i, cfg)?;
        let d_jt = fd_partial(&jt_field, p, i, cfg)?;
        for j in 0..6 {
            let dtj: Vec<f64> = (0..7).map(|r| d_t[r * 6 + j]).collect();
            second[(i, j)] = dot(&dtj, &n);
            let lhs = tangential(&d_jt[j * 7..(j + 1) * 7], &n);
            let rhs = cross().apply(&n, &tangential(&dtj, &n));
            k[i][j] = super::sub(&lhs, &rhs);
        }
    }
    let gram = t.transpose().mul(&t)?;
    let chol = cholesky(&gram)
        .ok_or_else(|| Error::SingularMetric("induced metric is not positive".into()))?;
    let c = inverse(&chol)?.transpose();
    let in_frame = |a: usize, b: usize| -> Vec<f64> {
        let mut acc = vec![0.0; 7];
        for i in 0..6 {
            for j in 0..6 {
                let w = c[(i, a)] * c[(j, b)];
                for r in 0..7 {
                    acc[r] += w * k[i][j][r];
                }
            }
        }
        acc
    };
    let kf: Vec<Vec<Vec<f64>>> = (0..6)
        .map(|a| (0..6).map(|b| in_frame(a, b)).collect())
        .collect();
    let mut out = HypersurfaceReport::default();
    for a in 0..6 {
        for b in 0..6 {
            let sym: Vec<f64> = kf[a][b].iter().zip(&kf[b][a]).map(|(x, y)| x + y).collect();
            out.nearly_kahler = out.nearly_kahler.max(dot(&sym, &sym).sqrt());
            out.kahler = out.kahler.max(dot(&kf[a][b], &kf[a][b]).sqrt());
        }
    }
    let sff = c.transpose().mul(&second)?.mul(&c)?;
    let mean = sff.trace() / 6.0;
    let trace_free = sff.sub(&Matrix::identity(6).scale(&mean))?;
    out.umbilic = trace_free.max_abs();
    out.geodesic = sff.max_abs();
    debug_assert!(vec_max_abs(&n) <= 1.0 + 1e-12);
    Ok(out)
}

/// Nearly-Kähler, Kähler, umbilic and totally geodesic residuals for the almost
/// complex structure `J X = n × X` induced on the hypersurface.
pub fn hypersurface_checks(
    imm: &Immersion,
    points: &[Vec<f64>],
    cfg: &StencilConfig,
) -> Result<HypersurfaceReport> {
    if imm.map.dim() != 6 {
        return Err(Error::DimensionMismatch(
            "hypersurfaces are parametrised by R^6".into(),
        ));
    }
    let each: Vec<HypersurfaceReport> = points
        .par_iter()
        .map(|p| at_point(imm, p, cfg))
        .collect::<Result<_>>()?;
    Ok(each
        .iter()
        .fold(HypersurfaceReport::default(), |a, b| HypersurfaceReport {
            nearly_kahler: a.nearly_kahler.max(b.nearly_kahler),
            kahler: a.kahler.max(b.kahler),
            umbilic: a.umbilic.max(b.umbilic),
            geodesic: a.geodesic.max(b.geodesic),
        }))
}
