use std::collections::BTreeMap;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::convergence::{study, Order, EXACT_FLOOR};
use crate::error::{Error, Result};
use crate::fields::{
    embed_block_form, exterior_d, fd_partial, gradient, hodge_on_block, hodge_restricted, riemann,
    FieldFn, SplitSpec, StencilConfig,
};
use crate::forms::Form;
use crate::lie::g2_basis;
use crate::linalg::{inverse, Matrix};
use crate::octonion::model_phi;
use crate::Rational;

use super::{cholesky, split_off, vec_max_abs};

/// Monopole data on a 6-manifold: a positive function `v`, a connection potential
/// `A` and the split into the leaf block (first) and its complement (second).
#[derive(Clone, Debug)]
pub struct MonopoleData {
    pub v: FieldFn<f64, f64>,
    pub potential: FieldFn<f64, Form<f64>>,
    /// The 1-form `α` in orthonormal components of the second block; zero when absent.
    pub alpha: Option<FieldFn<f64, Vec<f64>>>,
    /// The vector `w` with `a X = ¼ w × X` for the base connection, when known.
    pub connection_vector: Option<FieldFn<f64, Vec<f64>>>,
    pub split: SplitSpec,
}

impl MonopoleData {
    fn blocks(&self) -> Result<([usize; 3], [usize; 3], [i8; 2])> {
        let b = self.split.blocks();
        if self.split.dim() != 6 || b.len() != 2 || b[0].slots.len() != 3 || b[1].slots.len() != 3 {
            return Err(Error::InvalidParameter(
                "monopole split must be two 3-dimensional blocks of R^6".into(),
            ));
        }
        let s = |i: usize| [b[i].slots[0], b[i].slots[1], b[i].slots[2]];
        Ok((s(0), s(1), [b[0].orientation, b[1].orientation]))
    }

    fn alpha_at(&self, p: &[f64]) -> Vec<f64> {
        self.alpha
            .as_ref()
            .map_or_else(|| vec![0.0; 3], |a| a.at(p))
    }
}

/// Where a built object came from.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Provenance {
    pub builder: String,
    pub inputs: BTreeMap<String, String>,
    pub anchor: String,
    pub warnings: Vec<String>,
}

/// A metric on a 7-manifold with its orthonormal coframe and the induced
/// 3-form `φ` and 4-form `*φ`. Coframe slots follow the model: three leaf
/// directions, the circle direction, then the three complementary directions.
#[derive(Clone, Debug)]
pub struct G2MetricBundle {
    /// Row `a` is the coframe 1-form `θ^a` in coordinates.
    pub coframe: FieldFn<f64, Matrix<f64>>,
    pub metric: FieldFn<f64, Matrix<f64>>,
    pub phi: FieldFn<f64, Form<f64>>,
    pub star_phi: FieldFn<f64, Form<f64>>,
    pub provenance: Provenance,
}

fn model_forms() -> &'static (Form<f64>, Form<f64>) {
    static FORMS: OnceLock<(Form<f64>, Form<f64>)> = OnceLock::new();
    FORMS.get_or_init(|| {
        let phi = model_phi::<Rational>().expect("model 3-form").to_f64();
        (phi.form().clone(), phi.star())
    })
}

fn g2_f64() -> &'static [Matrix<f64>] {
    static BASIS: OnceLock<Vec<Matrix<f64>>> = OnceLock::new();
    BASIS.get_or_init(|| g2_basis::<Rational>().expect("g2 basis").to_f64().elements)
}

impl G2MetricBundle {
    pub fn from_coframe(
        coframe: FieldFn<f64, Matrix<f64>>,
        provenance: Provenance,
    ) -> Result<Self> {
        if coframe.dim() != 7 {
            return Err(Error::DimensionMismatch(
                "a G2 structure needs seven dimensions".into(),
            ));
        }
        let (phi0, star0) = model_forms().clone();
        let metric = coframe.map(|_, t| t.transpose().mul(&t).expect("square"));
        let phi = coframe.map(move |_, t| phi0.pullback(&t).expect("7x7 coframe"));
        let star_phi = coframe.map(move |_, t| star0.pullback(&t).expect("7x7 coframe"));
        Ok(Self {
            coframe,
            metric,
            phi,
            star_phi,
            provenance,
        })
    }

    /// `max |θ⁻ᵀ g θ⁻¹ - I|` at `p`.
    pub fn coframe_orthonormality(&self, p: &[f64]) -> Result<f64> {
        let t = self.coframe.eval(p)?;
        let inv = inverse(&t)?;
        let g = self.metric.eval(p)?;
        Ok(inv
            .transpose()
            .mul(&g)?
            .mul(&inv)?
            .sub(&Matrix::identity(7))?
            .max_abs())
    }
}

fn sub_block(m: &Matrix<f64>, slots: &[usize; 3]) -> Matrix<f64> {
    Matrix::from_fn(3, 3, |i, j| m[(slots[i], slots[j])])
}

/// Base slot `s` sits at bundle coordinate `map[s]`; the circle coordinate is 3.
fn slot_map(leaf: &[usize; 3], complement: &[usize; 3]) -> Vec<usize> {
    let mut map = vec![0; 6];
    for i in 0..3 {
        map[leaf[i]] = i;
        map[complement[i]] = 4 + i;
    }
    map
}

fn base_point(q: &[f64], map: &[usize]) -> Vec<f64> {
    map.iter().map(|&j| q[j]).collect()
}

/// Coframe `(e_leaf | v^{-1/2}(dt + σ_A A) | √v e_complement)` where `e` are Cholesky
/// coframes of the blocks of `k`. `σ_leaf` and `σ_comp` reverse the orientation of their
/// block by negating its last covector.
fn coframe_field(
    k: &FieldFn<f64, Matrix<f64>>,
    mono: &MonopoleData,
    signs: Signs,
) -> Result<FieldFn<f64, Matrix<f64>>> {
    let (leaf, comp, _) = mono.blocks()?;
    let map = slot_map(&leaf, &comp);
    let domain = mono.v.domain().lift(&map, 7, &[(3, (-1.0, 1.0))]);
    let (k, v, pot) = (k.clone(), mono.v.clone(), mono.potential.clone());
    Ok(FieldFn::new(domain, move |q: &[f64]| {
        let x = base_point(q, &map);
        let kk = k.at(&x);
        let vv = v.at(&x);
        let a = pot.at(&x);
        let mut t = Matrix::from_fn(7, 7, |_, _| f64::NAN);
        let (Some(lv), Some(lh)) = (
            cholesky(&sub_block(&kk, &leaf)),
            cholesky(&sub_block(&kk, &comp)),
        ) else {
            return t;
        };
        if !(vv > 0.0) {
            return t;
        }
        t = Matrix::zeros(7, 7);
        let root = vv.sqrt();
        for r in 0..3 {
            let (sl, sc) = if r == 2 {
                (signs.leaf, signs.complement)
            } else {
                (1.0, 1.0)
            };
            for c in 0..3 {
                t[(r, c)] = sl * lv[(c, r)];
                t[(4 + r, 4 + c)] = sc * root * lh[(c, r)];
            }
        }
        t[(3, 3)] = 1.0 / root;
        for s in 0..6 {
            t[(3, map[s])] += signs.potential * a.get(&[s]) / root;
        }
        t
    }))
}

/// Orientation of the leaf block, sign of the potential, orientation of the complement.
#[derive(Clone, Copy, Debug)]
struct Signs {
    leaf: f64,
    potential: f64,
    complement: f64,
}

const PINNED: Signs = Signs {
    leaf: 1.0,
    potential: 1.0,
    complement: 1.0,
};

fn cross_block(
    k: &FieldFn<f64, Matrix<f64>>,
    leaf: &[usize; 3],
    comp: &[usize; 3],
    points: &[Vec<f64>],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for p in points {
        let kk = k.eval(p)?;
        for &i in leaf {
            for &j in comp {
                worst = worst.max(kk[(i, j)].abs());
            }
        }
    }
    Ok(worst)
}

/// Tolerance for the precondition checks run by the builders, well above the
/// truncation error of the default first-derivative stencil near the exclusions.
const PRE_TOLERANCE: f64 = 1e-3;

fn require_positive(v: &FieldFn<f64, f64>, points: &[Vec<f64>]) -> Result<()> {
    for p in points {
        let x = v.eval(p)?;
        if !(x > 0.0) {
            return Err(Error::BadValue(format!("v = {x} must be positive")));
        }
    }
    Ok(())
}

fn build(
    k: &FieldFn<f64, Matrix<f64>>,
    mono: &MonopoleData,
    signs: Signs,
    provenance: Provenance,
) -> Result<G2MetricBundle> {
    if k.dim() != 6 || mono.v.dim() != 6 || mono.potential.dim() != 6 {
        return Err(Error::DimensionMismatch(
            "monopole data and base metric live on R^6".into(),
        ));
    }
    G2MetricBundle::from_coframe(coframe_field(k, mono, signs)?, provenance)
}

/// `k_leaf + v k_complement + v⁻¹ (dt + A)²` with its 3-form, from monopole data
/// satisfying `dA = -*dv` on the complement. The checks run at `check_points`
/// (base points); failures are recorded as warnings on the provenance.
pub fn g2_build_thm1(
    k: &FieldFn<f64, Matrix<f64>>,
    mono: &MonopoleData,
    check_points: &[Vec<f64>],
    anchor: &str,
) -> Result<G2MetricBundle> {
    let (leaf, comp, _) = mono.blocks()?;
    require_positive(&mono.v, check_points)?;
    let mut prov = Provenance {
        builder: "g2_build_thm1".into(),
        anchor: anchor.into(),
        ..Provenance::default()
    };
    if !check_points.is_empty() {
        let cross = cross_block(k, &leaf, &comp, check_points)?;
        if cross > PRE_TOLERANCE {
            prov.warnings
                .push(format!("base metric mixes the blocks: {cross:.3e}"));
        }
        let r = monopole_residual(mono, k, check_points, &StencilConfig::first_derivative())?;
        for (name, val) in [
            ("monopole", r.equation),
            ("basic v", r.basic_v),
            ("basic A", r.basic_potential),
        ] {
            if val > PRE_TOLERANCE {
                prov.warnings.push(format!("{name} residual {val:.3e}"));
            }
        }
    }
    build(k, mono, PINNED, prov)
}

/// The same metric from weak monopole data: `α` enters the equations and, when the
/// base connection is supplied, must match it.
pub fn g2_build_thm2(
    k: &FieldFn<f64, Matrix<f64>>,
    mono: &MonopoleData,
    check_points: &[Vec<f64>],
    anchor: &str,
) -> Result<G2MetricBundle> {
    let (leaf, comp, _) = mono.blocks()?;
    require_positive(&mono.v, check_points)?;
    let mut prov = Provenance {
        builder: "g2_build_thm2".into(),
        anchor: anchor.into(),
        ..Provenance::default()
    };
    if !check_points.is_empty() {
        let cross = cross_block(k, &leaf, &comp, check_points)?;
        if cross > PRE_TOLERANCE {
            prov.warnings
                .push(format!("base metric mixes the blocks: {cross:.3e}"));
        }
        let r = weak_monopole_residual(mono, k, check_points, &StencilConfig::first_derivative())?;
        for (name, val) in [
            ("leaf-leaf", r.plus_plus),
            ("mixed", r.plus_minus),
            ("complement", r.minus_minus),
            ("basic v", r.basic_v),
        ] {
            if val > PRE_TOLERANCE {
                prov.warnings.push(format!("{name} residual {val:.3e}"));
            }
        }
        if let Some(m) = r.connection_mismatch {
            if m > PRE_TOLERANCE {
                prov.warnings.push(format!(
                    "alpha disagrees with the base connection by {m:.3e}"
                ));
            }
        }
    }
    build(k, mono, PINNED, prov)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct MonopoleResidual {
    /// `sup |dA + *dv|`, the star taken on the complement block.
    pub equation: f64,
    /// `sup |∂v|` along the leaf block.
    pub basic_v: f64,
    /// `sup` of the leaf components of `A` and of their leaf derivatives of `A`.
    pub basic_potential: f64,
}

fn basic_residuals(
    mono: &MonopoleData,
    leaf: &[usize; 3],
    p: &[f64],
    cfg: &StencilConfig,
) -> Result<(f64, f64)> {
    let a = mono.potential.eval(p)?;
    let mut basic_v = 0.0f64;
    let mut basic_a = leaf.iter().map(|&s| a.get(&[s]).abs()).fold(0.0, f64::max);
    for &s in leaf {
        basic_v = basic_v.max(fd_partial(&mono.v, p, s, cfg)?.abs());
        basic_a = basic_a.max(fd_partial(&mono.potential, p, s, cfg)?.max_abs());
    }
    Ok((basic_v, basic_a))
}

pub fn monopole_residual(
    mono: &MonopoleData,
    k: &FieldFn<f64, Matrix<f64>>,
    points: &[Vec<f64>],
    cfg: &StencilConfig,
) -> Result<MonopoleResidual> {
    let (leaf, comp, _) = mono.blocks()?;
    let comp_name = mono.split.blocks()[1].name.clone();
    let each: Vec<MonopoleResidual> = points
        .par_iter()
        .map(|p| {
            let da = exterior_d(&mono.potential, p, cfg)?;
            let dv = Form::from_components(6, 1, gradient(&mono.v, p, cfg)?)?;
            let star = hodge_restricted(&dv, &mono.split, &k.eval(p)?, &comp_name)?;
            let (basic_v, basic_potential) = basic_residuals(mono, &leaf, p, cfg)?;
            Ok(MonopoleResidual {
                equation: da.add(&embed_block_form(&star, &comp, 6))?.max_abs(),
                basic_v,
                basic_potential,
            })
        })
        .collect::<Result<_>>()?;
    Ok(each
        .iter()
        .fold(MonopoleResidual::default(), |a, b| MonopoleResidual {
            equation: a.equation.max(b.equation),
            basic_v: a.basic_v.max(b.basic_v),
            basic_potential: a.basic_potential.max(b.basic_potential),
        }))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct WeakMonopoleResidual {
    /// `(dA)₊₊ - √v *₊α`.
    pub plus_plus: f64,
    /// `(dA)₊₋`.
    pub plus_minus: f64,
    /// `(dA)₋₋ + *₋(dv - v α)`.
    pub minus_minus: f64,
    pub basic_v: f64,
    /// `sup |w - α|` when the base connection vector `w` is known.
    pub connection_mismatch: Option<f64>,
}

pub fn weak_monopole_residual(
    mono: &MonopoleData,
    k: &FieldFn<f64, Matrix<f64>>,
    points: &[Vec<f64>],
    cfg: &StencilConfig,
) -> Result<WeakMonopoleResidual> {
    let (leaf, comp, orient) = mono.blocks()?;
    let each: Vec<WeakMonopoleResidual> = points
        .par_iter()
        .map(|p| {
            let kk = k.eval(p)?;
            let (kl, kc) = (sub_block(&kk, &leaf), sub_block(&kk, &comp));
            let (ll, lc) = cholesky(&kl)
                .zip(cholesky(&kc))
                .ok_or_else(|| Error::SingularMetric("base metric block is not positive".into()))?;
            let alpha = mono.alpha_at(p);
            let v = mono.v.eval(p)?;
            let dv = gradient(&mono.v, p, cfg)?;
            let da = exterior_d(&mono.potential, p, cfg)?;
            let alpha_leaf = Form::from_components(3, 1, ll.mul_vec(&alpha)?)?;
            let alpha_comp = lc.mul_vec(&alpha)?;
            let rhs_pp = hodge_on_block(&alpha_leaf, &kl, orient[0])?.scale(&v.sqrt());
            let shifted: Vec<f64> = (0..3).map(|i| dv[comp[i]] - v * alpha_comp[i]).collect();
            let rhs_mm = hodge_on_block(&Form::from_components(3, 1, shifted)?, &kc, orient[1])?;
            let mut plus_minus = 0.0f64;
            for &i in &leaf {
                for &j in &comp {
                    plus_minus = plus_minus.max(da.get(&[i, j]).abs());
                }
            }
            let mut basic_v = 0.0f64;
            for &s in &leaf {
                basic_v = basic_v.max(fd_partial(&mono.v, p, s, cfg)?.abs());
            }
            let mismatch = match &mono.connection_vector {
                Some(w) => Some(vec_max_abs(&super::sub(&w.eval(p)?, &alpha))),
                None => None,
            };
            Ok(WeakMonopoleResidual {
                plus_plus: da.restrict(&leaf).sub(&rhs_pp)?.max_abs(),
                plus_minus,
                minus_minus: da.restrict(&comp).add(&rhs_mm)?.max_abs(),
                basic_v,
                connection_mismatch: mismatch,
            })
        })
        .collect::<Result<_>>()?;
    Ok(each.iter().fold(WeakMonopoleResidual::default(), |a, b| {
        WeakMonopoleResidual {
            plus_plus: a.plus_plus.max(b.plus_plus),
            plus_minus: a.plus_minus.max(b.plus_minus),
            minus_minus: a.minus_minus.max(b.minus_minus),
            basic_v: a.basic_v.max(b.basic_v),
            connection_mismatch: match (a.connection_mismatch, b.connection_mismatch) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            },
        }
    }))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct TorsionResidual {
    pub d_phi: f64,
    pub d_star_phi: f64,
}

impl TorsionResidual {
    pub fn max(&self) -> f64 {
        self.d_phi.max(self.d_star_phi)
    }
}

/// `sup |dφ|` and `sup |d*φ|` over bundle points.
pub fn torsionfree_residual(
    bundle: &G2MetricBundle,
    points: &[Vec<f64>],
    cfg: &StencilConfig,
) -> Result<TorsionResidual> {
    let each: Vec<TorsionResidual> = points
        .par_iter()
        .map(|q| {
            Ok(TorsionResidual {
                d_phi: exterior_d(&bundle.phi, q, cfg)?.max_abs(),
                d_star_phi: exterior_d(&bundle.star_phi, q, cfg)?.max_abs(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(each
        .iter()
        .fold(TorsionResidual::default(), |a, b| TorsionResidual {
            d_phi: a.d_phi.max(b.d_phi),
            d_star_phi: a.d_star_phi.max(b.d_star_phi),
        }))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct HolonomyResidual {
    /// Largest fraction of the curvature operators lying off `g2`.
    pub off_g2: f64,
    pub ricci: f64,
    /// Frobenius norm of the frame curvature at each point.
    pub curvature_norms: Vec<f64>,
}

/// Curvature of the bundle metric expressed in the coframe and split against `g2`.
pub fn holonomy_residual(
    bundle: &G2MetricBundle,
    points: &[Vec<f64>],
    cfg: &StencilConfig,
) -> Result<HolonomyResidual> {
    let g2 = g2_f64();
    let each: Vec<(f64, f64, f64)> = points
        .par_iter()
        .map(|q| {
            let frame = inverse(&bundle.coframe.eval(q)?)?;
            let r = riemann(&bundle.metric, q, cfg)?.in_frame(&frame)?;
            let (mut off, mut total) = (0.0, 0.0);
            for a in 0..7 {
                for b in (a + 1)..7 {
                    let op = Matrix::from_fn(7, 7, |d, c| r.get(d, c, a, b));
                    let (o, t) = split_off(g2, &op)?;
                    off += o * o;
                    total += t * t;
                }
            }
            let frac = if total.sqrt() < 1e-10 {
                0.0
            } else {
                (off / total).sqrt()
            };
            Ok((frac, r.ricci().max_abs(), (2.0 * total).sqrt()))
        })
        .collect::<Result<_>>()?;
    Ok(HolonomyResidual {
        off_g2: each.iter().map(|e| e.0).fold(0.0, f64::max),
        ricci: each.iter().map(|e| e.1).fold(0.0, f64::max),
        curvature_norms: each.iter().map(|e| e.2).collect(),
    })
}

/// One sign choice `(leaf orientation, potential sign, complement orientation)` and
/// what it produces.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignAuditRow {
    pub signs: [i8; 3],
    /// The flat example gives the model 3-form exactly.
    pub reproduces_model: bool,
    pub residuals: Vec<f64>,
    pub order: Order,
    /// `sup |dφ|` on the curved example falls at least at rate 1.8.
    pub converges: bool,
}

impl SignAuditRow {
    pub fn passes(&self) -> bool {
        self.reproduces_model && self.converges
    }
}

/// Try all eight sign choices on a flat and a curved example.
pub fn sign_audit(
    flat: (&FieldFn<f64, Matrix<f64>>, &MonopoleData),
    curved: (&FieldFn<f64, Matrix<f64>>, &MonopoleData),
    points: &[Vec<f64>],
    hs: &[f64],
) -> Result<Vec<SignAuditRow>> {
    let (phi0, _) = model_forms();
    let mut rows = Vec::new();
    for code in 0..8u8 {
        let signs: [i8; 3] = std::array::from_fn(|i| if code >> (2 - i) & 1 == 1 { -1 } else { 1 });
        let s = Signs {
            leaf: f64::from(signs[0]),
            potential: f64::from(signs[1]),
            complement: f64::from(signs[2]),
        };
        let flat_bundle = build(flat.0, flat.1, s, Provenance::default())?;
        let reproduces_model = points
            .iter()
            .map(|q| flat_bundle.phi.eval(q).map(|f| f == *phi0))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .all(|b| b);
        let bundle = build(curved.0, curved.1, s, Provenance::default())?;
        let (residuals, order) = study(hs, EXACT_FLOOR, |h| {
            let cfg = StencilConfig::first_derivative().with_h(h);
            Ok(torsionfree_residual(&bundle, points, &cfg)?.d_phi)
        })?;
        rows.push(SignAuditRow {
            signs,
            reproduces_model,
            converges: order.at_least(1.8),
            residuals,
            order,
        });
    }
    Ok(rows)
}
