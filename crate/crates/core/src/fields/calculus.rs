use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{combinations, permutation_sign, sort_with_sign, Form};
use crate::linalg::{determinant, inverse, Matrix};
use crate::scalar::{lit, Real, Scalar};

use super::{FieldFn, FieldValue, StencilConfig};

/// `(offset, weight)` pairs of the central first-derivative stencil, in units of `h`,
/// listed in `±` pairs so constant fields difference to exactly zero.
fn weights(order: u8) -> &'static [(f64, f64)] {
    match order {
        2 => &[(1.0, 0.5), (-1.0, -0.5)],
        _ => &[
            (2.0, -1.0 / 12.0),
            (-2.0, 1.0 / 12.0),
            (1.0, 8.0 / 12.0),
            (-1.0, -8.0 / 12.0),
        ],
    }
}

/// Derivative of `eval` at `p` along `v`, with the stencil of `cfg`.
/// `eval` is trusted to handle its own domain; callers check the reach.
pub(crate) fn central<R: Real, V: FieldValue<R>>(
    eval: &impl Fn(&[R]) -> Result<V>,
    p: &[R],
    v: &[R],
    cfg: &StencilConfig,
) -> Result<V> {
    let once = |h: f64| -> Result<V> {
        let mut vals = Vec::with_capacity(4);
        for &(off, w) in weights(cfg.order) {
            let s: R = lit(off * h);
            let q: Vec<R> = p.iter().zip(v).map(|(a, b)| *a + s * *b).collect();
            vals.push((lit::<R>(w / h), eval(&q)?));
        }
        let terms: Vec<(R, &V)> = vals.iter().map(|(w, x)| (*w, x)).collect();
        Ok(V::lin_comb(&terms))
    };
    let coarse = once(cfg.h)?;
    if !cfg.richardson {
        return Ok(coarse);
    }
    let fine = once(cfg.h / 2.0)?;
    let k = 2f64.powi(i32::from(cfg.order));
    Ok(V::lin_comb(&[
        (lit(k / (k - 1.0)), &fine),
        (lit(-1.0 / (k - 1.0)), &coarse),
    ]))
}

fn unit<R: Real>(n: usize, i: usize) -> Vec<R> {
    (0..n)
        .map(|k| if k == i { R::one() } else { R::zero() })
        .collect()
}

/// `∂f/∂x_dir` at `p`.
pub fn fd_partial<R: Real, V: FieldValue<R>>(
    f: &FieldFn<R, V>,
    p: &[R],
    dir: usize,
    cfg: &StencilConfig,
) -> Result<V> {
    if dir >= f.dim() {
        return Err(Error::DimensionMismatch(format!(
            "direction {dir} in R^{}",
            f.dim()
        )));
    }
    directional(f, p, &unit(f.dim(), dir), cfg)
}

/// `D_v f` at `p`.
pub fn directional<R: Real, V: FieldValue<R>>(
    f: &FieldFn<R, V>,
    p: &[R],
    v: &[R],
    cfg: &StencilConfig,
) -> Result<V> {
    if p.len() != f.dim() || v.len() != f.dim() {
        return Err(Error::DimensionMismatch("point or direction length".into()));
    }
    let len = v
        .iter()
        .map(|x| Scalar::to_f64(x).powi(2))
        .sum::<f64>()
        .sqrt();
    f.domain().require(p, cfg.reach() * len)?;
    central(&|q: &[R]| Ok(f.at(q)), p, v, cfg)
}

pub fn gradient<R: Real>(f: &FieldFn<R, R>, p: &[R], cfg: &StencilConfig) -> Result<Vec<R>> {
    (0..f.dim()).map(|i| fd_partial(f, p, i, cfg)).collect()
}

/// `(dω)_{i_0…i_k} = Σ_a (-1)^a ∂_{i_a} ω_{i_0…î_a…i_k}`.
pub fn exterior_d<R: Real>(
    omega: &FieldFn<R, Form<R>>,
    p: &[R],
    cfg: &StencilConfig,
) -> Result<Form<R>> {
    let n = omega.dim();
    let partials: Vec<Form<R>> = (0..n)
        .map(|i| fd_partial(omega, p, i, cfg))
        .collect::<Result<_>>()?;
    let k = partials[0].degree();
    if partials[0].dim() != n {
        return Err(Error::DimensionMismatch(
            "form dimension differs from the base".into(),
        ));
    }
    let mut out = Form::zero(n, k + 1);
    for idx in combinations(n, k + 1) {
        let mut acc = R::zero();
        for a in 0..=k {
            let rest: Vec<usize> = idx
                .iter()
                .enumerate()
                .filter(|&(b, _)| b != a)
                .map(|(_, &i)| i)
                .collect();
            let term = partials[idx[a]].get(&rest);
            acc = if a % 2 == 0 { acc + term } else { acc - term };
        }
        out.set_sorted(&idx, acc);
    }
    Ok(out)
}

/// A named group of coordinate slots with an orientation sign.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Block {
    pub name: String,
    pub slots: Vec<usize>,
    pub orientation: i8,
}

/// A partition of `0..n` into named, oriented blocks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplitSpec {
    n: usize,
    blocks: Vec<Block>,
}

impl SplitSpec {
    pub fn new(n: usize, blocks: Vec<Block>) -> Result<Self> {
        let mut seen = vec![false; n];
        for b in &blocks {
            if b.orientation != 1 && b.orientation != -1 {
                return Err(Error::InvalidParameter(format!(
                    "orientation of {} must be ±1",
                    b.name
                )));
            }
            for &s in &b.slots {
                if s >= n || seen[s] {
                    return Err(Error::InvalidParameter(format!(
                        "slot {s} of block {} is out of range or repeated",
                        b.name
                    )));
                }
                seen[s] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidParameter(
                "blocks do not cover every slot".into(),
            ));
        }
        Ok(Self { n, blocks })
    }

    /// Two oriented blocks `(0..a | a..a+b)`.
    pub fn pair(first: &str, a: usize, second: &str, b: usize) -> Self {
        Self::new(
            a + b,
            vec![
                Block {
                    name: first.into(),
                    slots: (0..a).collect(),
                    orientation: 1,
                },
                Block {
                    name: second.into(),
                    slots: (a..a + b).collect(),
                    orientation: 1,
                },
            ],
        )
        .expect("consecutive blocks")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, name: &str) -> Result<&Block> {
        self.blocks
            .iter()
            .find(|b| b.name == name)
            .ok_or_else(|| Error::InvalidParameter(format!("no block named {name}")))
    }

    pub fn with_orientation(mut self, name: &str, orientation: i8) -> Result<Self> {
        let b = self
            .blocks
            .iter_mut()
            .find(|b| b.name == name)
            .ok_or_else(|| Error::InvalidParameter(format!("no block named {name}")))?;
        b.orientation = orientation;
        Self::new(self.n, self.blocks)
    }
}

/// Hodge star of a form on an `m`-dimensional block with metric `g` (`m x m`).
pub fn hodge_on_block<R: Real>(alpha: &Form<R>, g: &Matrix<R>, orientation: i8) -> Result<Form<R>> {
    let m = alpha.dim();
    if g.rows() != m || !g.is_square() {
        return Err(Error::DimensionMismatch("block metric size".into()));
    }
    let det = determinant(g)?;
    if !(Scalar::to_f64(&det) > 0.0) {
        return Err(Error::SingularMetric(format!(
            "block metric determinant {det}"
        )));
    }
    let ginv = inverse(g)?;
    let vol = det.sqrt() * lit::<R>(f64::from(orientation));
    let k = alpha.degree();
    let combos = combinations(m, k);
    let mut out = Form::zero(m, m - k);
    for i_set in &combos {
        // raised component α^I through the induced metric on Λ^k
        let mut raised = R::zero();
        for (j_set, a) in combos.iter().zip(alpha.components()) {
            if *a == R::zero() {
                continue;
            }
            let minor = Matrix::from_fn(k, k, |r, c| ginv[(i_set[r], j_set[c])]);
            raised = raised + determinant(&minor)? * *a;
        }
        let comp: Vec<usize> = (0..m).filter(|x| !i_set.contains(x)).collect();
        let perm: Vec<usize> = i_set.iter().chain(&comp).copied().collect();
        let s: R = lit(f64::from(permutation_sign(&perm)));
        out.set_sorted(&comp, s * vol * raised);
    }
    Ok(out)
}

/// Hodge star inside one block of `split`, with the block metric read from `g`.
/// The result is a form on the block's own coordinates, in slot order.
pub fn hodge_restricted<R: Real>(
    omega: &Form<R>,
    split: &SplitSpec,
    g: &Matrix<R>,
    block: &str,
) -> Result<Form<R>> {
    let b = split.block(block)?;
    if omega.dim() != split.dim() || g.rows() != split.dim() {
        return Err(Error::DimensionMismatch(
            "form, metric and split disagree".into(),
        ));
    }
    let gb = Matrix::from_fn(b.slots.len(), b.slots.len(), |i, j| {
        g[(b.slots[i], b.slots[j])]
    });
    hodge_on_block(&omega.restrict(&b.slots), &gb, b.orientation)
}

/// Place a form living on `slots` into `R^n`.
pub fn embed_block_form<R: Real>(f: &Form<R>, slots: &[usize], n: usize) -> Form<R> {
    let mut out = Form::zero(n, f.degree());
    for (idx, c) in combinations(f.dim(), f.degree()).iter().zip(f.components()) {
        let j: Vec<usize> = idx.iter().map(|&i| slots[i]).collect();
        let (sorted, sign) = sort_with_sign(&j).expect("distinct slots");
        out.set_sorted(&sorted, if sign > 0 { *c } else { -*c });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Domain;

    fn cfg(h: f64, order: u8) -> StencilConfig {
        StencilConfig::new(h, order, false).unwrap()
    }

    #[test]
    fn quadratic_is_exact() {
        let f = FieldFn::new(Domain::whole(3), |p: &[f64]| p[0] * p[0]);
        let d = fd_partial(&f, &[3.0, 1.0, 2.0], 0, &cfg(1e-2, 2)).unwrap();
        assert!((d - 6.0).abs() < 1e-10);
        let c = FieldFn::new(Domain::whole(3), |_: &[f64]| 4.5);
        assert_eq!(
            fd_partial(&c, &[0.1, 0.2, 0.3], 2, &cfg(1e-3, 4)).unwrap(),
            0.0
        );
    }

    #[test]
    fn sine_derivative() {
        let f = FieldFn::new(Domain::whole(2), |p: &[f64]| p[1].sin());
        let d = fd_partial(&f, &[0.0, 0.5], 1, &cfg(1e-3, 2)).unwrap();
        assert!((d - 0.5f64.cos()).abs() < 1e-6);
        let r = fd_partial(
            &f,
            &[0.0, 0.5],
            1,
            &StencilConfig::new(1e-2, 2, true).unwrap(),
        )
        .unwrap();
        assert!((r - 0.5f64.cos()).abs() < 1e-8);
    }

    #[test]
    fn d_of_linear_one_form() {
        // d(x0 dx1) = dx0 ∧ dx1
        let w = FieldFn::new(Domain::whole(3), |p: &[f64]| {
            let mut f = Form::zero(3, 1);
            f.set_sorted(&[1], p[0]);
            f
        });
        let dw = exterior_d(&w, &[0.3, -0.2, 0.7], &cfg(1e-3, 2)).unwrap();
        let expected = Form::<f64>::basis_form(3, &[0, 1]);
        assert!(dw.sub(&expected).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn stencil_leaving_domain_is_rejected() {
        let d = Domain::whole(3).exclude(crate::fields::Exclusion::Point {
            slots: vec![0, 1, 2],
            center: vec![0.0; 3],
        });
        let f = FieldFn::new(d, |p: &[f64]| 1.0 / p[0]);
        assert!(fd_partial(&f, &[1e-4, 0.0, 0.0], 0, &cfg(1e-3, 2)).is_err());
    }

    #[test]
    fn euclidean_block_star() {
        let split = SplitSpec::pair("plus", 3, "minus", 3);
        let g = Matrix::<f64>::identity(6);
        let dx = Form::<f64>::basis_form(6, &[3]);
        let s = hodge_restricted(&dx, &split, &g, "minus").unwrap();
        assert_eq!(s, Form::basis_form(3, &[1, 2]));
        let ss = hodge_on_block(&s, &Matrix::identity(3), 1).unwrap();
        assert_eq!(ss, Form::basis_form(3, &[0]));
        let flipped = split.with_orientation("minus", -1).unwrap();
        let s2 = hodge_restricted(&dx, &flipped, &g, "minus").unwrap();
        assert_eq!(s2, Form::basis_form(3, &[1, 2]).scale(&-1.0));
    }

    #[test]
    fn split_validation() {
        let bad = SplitSpec::new(
            3,
            vec![Block {
                name: "a".into(),
                slots: vec![0, 1],
                orientation: 1,
            }],
        );
        assert!(bad.is_err());
        let singular = Matrix::<f64>::zeros(3, 3);
        assert!(hodge_on_block(&Form::basis_form(3, &[0]), &singular, 1).is_err());
    }
}
