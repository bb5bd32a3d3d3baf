use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{
    christoffel, directional, exterior_d, gradient, FieldFn, SplitSpec, StencilConfig,
};
use crate::forms::Form;
use crate::lie::{cross3, h_map, hat3, sl3_embed, MVector, Sl3Param};
use crate::linalg::{inverse, Matrix};

use super::{column, split_off, three, vec_max_abs};

/// The connection on the base.
#[derive(Clone, Debug)]
pub enum Connection {
    LeviCivita,
    /// `forms[c]` is `∇_{E_c}` in the frame: `∇_{E_c} E_b = Σ_a forms[c][(a, b)] E_a`.
    FrameForm(FieldFn<f64, Vec<Matrix<f64>>>),
}

/// Data on a 6-manifold `N = T⁺ ⊕ T⁻` describing the quotient of a metric with a
/// Killing field. Vectors and endomorphisms are in the frame, which is declared
/// orthonormal; its first three members span `T⁺`.
#[derive(Clone, Debug)]
pub struct KillingData {
    /// Columns are the frame vectors in coordinates.
    pub frame: FieldFn<f64, Matrix<f64>>,
    pub u: FieldFn<f64, f64>,
    pub potential: FieldFn<f64, Form<f64>>,
    /// Frame components of `b ∈ T⁺`.
    pub b: FieldFn<f64, Vec<f64>>,
    /// The symmetric trace-free map `B : T⁺ → T⁻`.
    pub big_b: FieldFn<f64, Matrix<f64>>,
    pub split: SplitSpec,
    pub connection: Connection,
}

impl KillingData {
    /// The split must name blocks `plus` and `minus` holding frame slots `0..3` and `3..6`.
    pub fn validate(&self) -> Result<()> {
        if self.frame.dim() != 6 || self.split.dim() != 6 {
            return Err(Error::DimensionMismatch(
                "Killing data lives on a 6-manifold".into(),
            ));
        }
        let plus = self.split.block("plus")?;
        let minus = self.split.block("minus")?;
        if plus.slots != [0, 1, 2] || minus.slots != [3, 4, 5] {
            return Err(Error::InvalidParameter(
                "frame must be adapted to plus = 0..3, minus = 3..6".into(),
            ));
        }
        Ok(())
    }

    pub fn metric(&self) -> FieldFn<f64, Matrix<f64>> {
        self.frame.map(|_, f| {
            let inv = inverse(&f).unwrap_or_else(|_| Matrix::from_fn(6, 6, |_, _| f64::NAN));
            inv.transpose().mul(&inv).expect("square")
        })
    }
}

struct PointData {
    frame: Matrix<f64>,
    frame_inv: Matrix<f64>,
    u: f64,
    /// `grad u` in the frame.
    grad: Vec<f64>,
    b: [f64; 3],
    big_b: Matrix<f64>,
}

fn point_data(data: &KillingData, p: &[f64], cfg: &StencilConfig) -> Result<PointData> {
    data.validate()?;
    let frame = data.frame.eval(p)?;
    let frame_inv = inverse(&frame)?;
    let du = gradient(&data.u, p, cfg)?;
    let grad = frame.transpose().mul_vec(&du)?;
    let u = data.u.eval(p)?;
    if !(u > 0.0) {
        return Err(Error::BadValue(format!("u = {u} must be positive")));
    }
    let b = data.b.eval(p)?;
    if b.len() != 3 {
        return Err(Error::DimensionMismatch(
            "b has three frame components".into(),
        ));
    }
    Ok(PointData {
        frame,
        frame_inv,
        u,
        grad,
        b: three(&b),
        big_b: data.big_b.eval(p)?,
    })
}

fn gamma_blockwise(d: &PointData) -> Matrix<f64> {
    let s = 0.5 / d.u;
    let gp = three(&d.grad[..3]);
    let gm = three(&d.grad[3..]);
    let mut out = Matrix::zeros(6, 6);
    for j in 0..3 {
        let e = crate::lie::embeddings::unit3::<f64>(j);
        let bx = cross3(&d.b, &e);
        let gmx = cross3(&gm, &e);
        let gpx = cross3(&gp, &e);
        let bigb: Vec<f64> = (0..3).map(|i| d.big_b[(i, j)]).collect();
        for i in 0..3 {
            // column for X₊ = e_j
            out[(i, j)] = bx[i] - s * gmx[i];
            out[(3 + i, j)] = bigb[i] - s * gpx[i];
            // column for X₋ = e_j
            out[(i, 3 + j)] = -bigb[i] - s * gpx[i];
            out[(3 + i, 3 + j)] = bx[i] + s * gmx[i];
        }
    }
    out
}

fn gamma_unexpanded(d: &PointData) -> Result<Matrix<f64>> {
    let big = sl3_embed(&Sl3Param::new(d.b, d.big_b.clone())?);
    let h = h_map(&MVector::from_slice(&d.grad)?);
    big.sub(&h.scale(&(1.0 / d.u)))
}

/// `γ` at `p` from the blockwise formulas, as a matrix acting on frame components.
pub fn gamma_at(data: &KillingData, p: &[f64], cfg: &StencilConfig) -> Result<Matrix<f64>> {
    Ok(gamma_blockwise(&point_data(data, p, cfg)?))
}

/// `γ = 𝓑 - u⁻¹ h(grad u)` at `p`, assembled from the embeddings.
pub fn gamma_unexpanded_at(
    data: &KillingData,
    p: &[f64],
    cfg: &StencilConfig,
) -> Result<Matrix<f64>> {
    gamma_unexpanded(&point_data(data, p, cfg)?)
}

/// Largest entry of the difference between the two assemblies of `γ`.
pub fn gamma_pair_at(data: &KillingData, p: &[f64], cfg: &StencilConfig) -> Result<f64> {
    let d = point_data(data, p, cfg)?;
    Ok(gamma_blockwise(&d).sub(&gamma_unexpanded(&d)?)?.max_abs())
}

/// `γ` as an endomorphism field; points where it cannot be evaluated give `NaN` entries.
pub fn gamma_field(data: &KillingData, cfg: StencilConfig) -> FieldFn<f64, Matrix<f64>> {
    let data = data.clone();
    FieldFn::new(data.frame.domain().clone(), move |p: &[f64]| {
        gamma_at(&data, p, &cfg).unwrap_or_else(|_| Matrix::from_fn(6, 6, |_, _| f64::NAN))
    })
}

/// Levi-Civita connection matrices of the frame metric, one per frame direction.
fn levi_civita_forms(
    data: &KillingData,
    d: &PointData,
    frame_derivs: &[Matrix<f64>],
    p: &[f64],
    cfg: &StencilConfig,
) -> Result<Vec<Matrix<f64>>> {
    let gam = christoffel(&data.metric(), p, cfg)?;
    (0..6)
        .map(|c| {
            let ec = column(&d.frame, c);
            let mut cov = Matrix::zeros(6, 6);
            for bb in 0..6 {
                let eb = column(&d.frame, bb);
                for k in 0..6 {
                    let mut v = frame_derivs[c][(k, bb)];
                    for i in 0..6 {
                        for j in 0..6 {
                            v += gam.get(k, i, j) * ec[i] * eb[j];
                        }
                    }
                    cov[(k, bb)] = v;
                }
            }
            d.frame_inv.mul(&cov)
        })
        .collect()
}

fn frame_derivatives(
    data: &KillingData,
    d: &PointData,
    p: &[f64],
    cfg: &StencilConfig,
) -> Result<Vec<Matrix<f64>>> {
    (0..6)
        .map(|c| directional(&data.frame, p, &column(&d.frame, c), cfg))
        .collect()
}

fn connection_forms(
    data: &KillingData,
    d: &PointData,
    derivs: &[Matrix<f64>],
    p: &[f64],
    cfg: &StencilConfig,
) -> Result<Vec<Matrix<f64>>> {
    match &data.connection {
        Connection::LeviCivita => levi_civita_forms(data, d, derivs, p, cfg),
        Connection::FrameForm(f) => {
            let forms = f.eval(p)?;
            if forms.len() != 6 || forms.iter().any(|m| m.rows() != 6 || !m.is_square()) {
                return Err(Error::DimensionMismatch(
                    "six 6x6 connection matrices".into(),
                ));
            }
            Ok(forms)
        }
    }
}

/// Residuals of the conditions relating the base data to a Killing quotient.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct KillingResiduals {
    /// `T(X,Y) + h(γX)Y - h(γY)X`.
    pub torsion: f64,
    /// `dA(X,Y) - 2u⁻¹⟨γX,Y⟩`.
    pub curvature: f64,
    /// `∇ + h∘γ` minus the Levi-Civita connection.
    pub levi_civita: f64,
    /// Distance of the connection matrices from `sl(3)`.
    pub sl3: f64,
}

impl KillingResiduals {
    pub fn max(&self) -> f64 {
        self.torsion
            .max(self.curvature)
            .max(self.levi_civita)
            .max(self.sl3)
    }

    fn merge(self, o: Self) -> Self {
        Self {
            torsion: self.torsion.max(o.torsion),
            curvature: self.curvature.max(o.curvature),
            levi_civita: self.levi_civita.max(o.levi_civita),
            sl3: self.sl3.max(o.sl3),
        }
    }
}

fn killing_at(
    data: &KillingData,
    p: &[f64],
    cfg: &StencilConfig,
    sl3: &[Matrix<f64>],
) -> Result<KillingResiduals> {
    let d = point_data(data, p, cfg)?;
    let derivs = frame_derivatives(data, &d, p, cfg)?;
    let omega = connection_forms(data, &d, &derivs, p, cfg)?;
    let lc = levi_civita_forms(data, &d, &derivs, p, cfg)?;
    let gamma = gamma_blockwise(&d);
    let da = exterior_d(&data.potential, p, cfg)?;
    let hg: Vec<Matrix<f64>> = (0..6)
        .map(|c| Ok(h_map(&MVector::from_slice(&column(&gamma, c))?)))
        .collect::<Result<_>>()?;
    let mut out = KillingResiduals::default();
    for c in 0..6 {
        for e in (c + 1)..6 {
            let bracket: Vec<f64> = (0..6)
                .map(|k| derivs[c][(k, e)] - derivs[e][(k, c)])
                .collect();
            let bracket = d.frame_inv.mul_vec(&bracket)?;
            let res: Vec<f64> = (0..6)
                .map(|a| {
                    omega[c][(a, e)] - omega[e][(a, c)] - bracket[a] + hg[c][(a, e)] - hg[e][(a, c)]
                })
                .collect();
            out.torsion = out.torsion.max(vec_max_abs(&res));
            let lhs = da.eval(&[&column(&d.frame, c), &column(&d.frame, e)])?;
            out.curvature = out.curvature.max((lhs - 2.0 / d.u * gamma[(e, c)]).abs());
        }
        let modified = omega[c].add(&hg[c])?;
        out.levi_civita = out.levi_civita.max(modified.sub(&lc[c])?.max_abs());
        out.levi_civita = out
            .levi_civita
            .max(modified.add(&modified.transpose())?.max_abs());
        out.sl3 = out.sl3.max(split_off(sl3, &omega[c])?.0);
    }
    Ok(out)
}

/// Sup over `points` of each Killing-quotient residual.
pub fn killing_conditions_check(
    data: &KillingData,
    points: &[Vec<f64>],
    cfg: &StencilConfig,
) -> Result<KillingResiduals> {
    use rayon::prelude::*;
    let sl3: Vec<Matrix<f64>> = Sl3Param::<f64>::basis().iter().map(sl3_embed).collect();
    let each: Vec<KillingResiduals> = points
        .par_iter()
        .map(|p| killing_at(data, p, cfg, &sl3))
        .collect::<Result<_>>()?;
    Ok(each
        .into_iter()
        .fold(KillingResiduals::default(), KillingResiduals::merge))
}

fn levi_civita_symbol(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// `(w, e_a, e_b) ↦ det(w, e_a, e_b)` on `R^3`.
fn det_with(w: &[f64; 3], a: usize, b: usize) -> f64 {
    (0..3).map(|c| levi_civita_symbol(c, a, b) * w[c]).sum()
}

/// Residuals of the curvature equations in three equivalent forms at one point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct DaConditions {
    /// Blockwise equations in `b`, `B` and `grad u`: `(++, --, +-)`.
    pub blockwise: [f64; 3],
    /// The `++` and `--` equations in terms of `α = ⟨2b - u⁻¹ grad₋u, ·⟩`.
    pub alpha_form: [f64; 2],
    /// The `--` equation written with `(d - α)(u⁻²)` and the rescaled star.
    pub monopole_form: f64,
    /// Difference between the right-hand sides of the last two `--` equations.
    pub pair_discrepancy: f64,
}

/// Evaluate [`DaConditions`] at `p`. The monopole form differentiates `u⁻²` directly,
/// the others use `du`.
pub fn da_conditions_check(
    data: &KillingData,
    p: &[f64],
    cfg: &StencilConfig,
) -> Result<DaConditions> {
    let d = point_data(data, p, cfg)?;
    let da = exterior_d(&data.potential, p, cfg)?;
    let dae = |i: usize, j: usize| da.eval(&[&column(&d.frame, i), &column(&d.frame, j)]);
    let u = d.u;
    let gp = three(&d.grad[..3]);
    let gm = three(&d.grad[3..]);
    let alpha: [f64; 3] = std::array::from_fn(|c| 2.0 * d.b[c] - gm[c] / u);
    let inv_sq = data.u.map(|_, x| x.powi(-2));
    let d_inv_sq: Vec<f64> = (3..6)
        .map(|c| directional(&inv_sq, p, &column(&d.frame, c), cfg))
        .collect::<Result<_>>()?;
    let beta: [f64; 3] = std::array::from_fn(|c| d_inv_sq[c] - alpha[c] / (u * u));

    let w_plus: [f64; 3] = std::array::from_fn(|c| d.b[c] - 0.5 * gm[c] / u);
    let w_minus: [f64; 3] = std::array::from_fn(|c| d.b[c] + 0.5 * gm[c] / u);
    let shifted: [f64; 3] = std::array::from_fn(|c| alpha[c] + 2.0 * gm[c] / u);

    let mut out = DaConditions::default();
    for a in 0..3 {
        for b in 0..3 {
            let pm = dae(a, 3 + b)? - 2.0 / u * (d.big_b[(b, a)] - 0.5 / u * det_with(&gp, a, b));
            out.blockwise[2] = out.blockwise[2].max(pm.abs());
            if b <= a {
                continue;
            }
            let pp = dae(a, b)?;
            let mm = dae(3 + a, 3 + b)?;
            out.blockwise[0] = out.blockwise[0].max((pp - 2.0 / u * det_with(&w_plus, a, b)).abs());
            out.blockwise[1] =
                out.blockwise[1].max((mm - 2.0 / u * det_with(&w_minus, a, b)).abs());
            out.alpha_form[0] = out.alpha_form[0].max((pp - det_with(&alpha, a, b) / u).abs());
            let rhs_alpha = det_with(&shifted, a, b) / u;
            let rhs_monopole = -u * det_with(&beta, a, b);
            out.alpha_form[1] = out.alpha_form[1].max((mm - rhs_alpha).abs());
            out.monopole_form = out.monopole_form.max((mm - rhs_monopole).abs());
            out.pair_discrepancy = out.pair_discrepancy.max((rhs_alpha - rhs_monopole).abs());
        }
    }
    Ok(out)
}

/// The two right-hand sides of the `--` equation compared by
/// [`DaConditions::pair_discrepancy`], over the pairs `a < b`.
pub fn da_pair(data: &KillingData, p: &[f64], cfg: &StencilConfig) -> Result<(Vec<f64>, Vec<f64>)> {
    let d = point_data(data, p, cfg)?;
    let u = d.u;
    let gm = three(&d.grad[3..]);
    let alpha: [f64; 3] = std::array::from_fn(|c| 2.0 * d.b[c] - gm[c] / u);
    let inv_sq = data.u.map(|_, x| x.powi(-2));
    let d_inv_sq: Vec<f64> = (3..6)
        .map(|c| directional(&inv_sq, p, &column(&d.frame, c), cfg))
        .collect::<Result<_>>()?;
    let beta: [f64; 3] = std::array::from_fn(|c| d_inv_sq[c] - alpha[c] / (u * u));
    let shifted: [f64; 3] = std::array::from_fn(|c| alpha[c] + 2.0 * gm[c] / u);
    let mut with_alpha = Vec::new();
    let mut with_monopole = Vec::new();
    for a in 0..3 {
        for b in (a + 1)..3 {
            with_alpha.push(det_with(&shifted, a, b) / u);
            with_monopole.push(-u * det_with(&beta, a, b));
        }
    }
    Ok((with_alpha, with_monopole))
}

/// `[x]` acting as the matrix of `X ↦ x × X`, exposed for connection forms built from vectors.
pub(crate) fn cross_matrix(x: &[f64]) -> Matrix<f64> {
    hat3(&three(x))
}
