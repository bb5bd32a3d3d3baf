use crate::error::{Error, Result};
use crate::linalg::{inverse, Matrix};
use crate::scalar::{lit, Real, Scalar};

use super::calculus::central;
use super::{FieldFn, StencilConfig};

/// `Γ^k_{ij}` stored as `data[(k * n + i) * n + j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Christoffel<R> {
    pub n: usize,
    pub data: Vec<R>,
}

impl<R: Real> Christoffel<R> {
    pub fn get(&self, k: usize, i: usize, j: usize) -> R {
        self.data[(k * self.n + i) * self.n + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|x| Scalar::to_f64(x).abs())
            .fold(0.0, f64::max)
    }
}

/// `R^l_{kij}` with `R(∂_i, ∂_j) ∂_k = R^l_{kij} ∂_l`.
#[derive(Clone, Debug, PartialEq)]
pub struct Riemann<R> {
    pub n: usize,
    pub data: Vec<R>,
}

impl<R: Real> Riemann<R> {
    fn idx(&self, l: usize, k: usize, i: usize, j: usize) -> usize {
        ((l * self.n + k) * self.n + i) * self.n + j
    }

    pub fn get(&self, l: usize, k: usize, i: usize, j: usize) -> R {
        self.data[self.idx(l, k, i, j)]
    }

    /// `Ric_{kj} = R^i_{kij}`.
    pub fn ricci(&self) -> Matrix<R> {
        Matrix::from_fn(self.n, self.n, |k, j| {
            (0..self.n).fold(R::zero(), |acc, i| acc + self.get(i, k, i, j))
        })
    }

    /// The endomorphism `R(X, Y)`.
    pub fn operator(&self, x: &[R], y: &[R]) -> Matrix<R> {
        Matrix::from_fn(self.n, self.n, |l, k| {
            let mut acc = R::zero();
            for i in 0..self.n {
                for j in 0..self.n {
                    acc = acc + self.get(l, k, i, j) * x[i] * y[j];
                }
            }
            acc
        })
    }

    /// Components expressed in the frame `e_a = Σ_i frame[(i, a)] ∂_i`.
    pub fn in_frame(&self, frame: &Matrix<R>) -> Result<Self> {
        let n = self.n;
        let inv = inverse(frame)?;
        // R^d_{cab} = inv[d][l] R^l_{kij} f[k][c] f[i][a] f[j][b], contracted one index at a time
        let mut cur = self.data.clone();
        let contract = |src: &[R], slot: usize, m: &Matrix<R>, upper: bool| -> Vec<R> {
            let mut out = vec![R::zero(); src.len()];
            let stride = n.pow(3 - slot as u32);
            for (pos, o) in out.iter_mut().enumerate() {
                let new = (pos / stride) % n;
                let base = pos - new * stride;
                let mut acc = R::zero();
                for old in 0..n {
                    let c = if upper { m[(new, old)] } else { m[(old, new)] };
                    acc = acc + c * src[base + old * stride];
                }
                *o = acc;
            }
            out
        };
        cur = contract(&cur, 0, &inv, true);
        for slot in 1..4 {
            cur = contract(&cur, slot, frame, false);
        }
        Ok(Self { n, data: cur })
    }

    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|x| Scalar::to_f64(x).abs())
            .fold(0.0, f64::max)
    }

    /// Largest `|R^l_{kij} + R^l_{ijk} + R^l_{jki}|`.
    pub fn bianchi_defect(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for l in 0..n {
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        let s = self.get(l, k, i, j) + self.get(l, i, j, k) + self.get(l, j, k, i);
                        worst = worst.max(Scalar::to_f64(&s).abs());
                    }
                }
            }
        }
        worst
    }
}

fn metric_inverse<R: Real>(g: &Matrix<R>) -> Result<Matrix<R>> {
    if g.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(Error::SingularMetric("non-finite metric entry".into()));
    }
    inverse(g).map_err(|_| Error::SingularMetric("metric is not invertible".into()))
}

fn christoffel_unchecked<R: Real>(
    g: &FieldFn<R, Matrix<R>>,
    p: &[R],
    cfg: &StencilConfig,
) -> Result<Christoffel<R>> {
    let n = g.dim();
    let ginv = metric_inverse(&g.at(p))?;
    let dg: Vec<Matrix<R>> = (0..n)
        .map(|l| {
            let e: Vec<R> = (0..n)
                .map(|k| if k == l { R::one() } else { R::zero() })
                .collect();
            central(&|q: &[R]| Ok(g.at(q)), p, &e, cfg)
        })
        .collect::<Result<_>>()?;
    let half: R = lit(0.5);
    let mut data = vec![R::zero(); n * n * n];
    for k in 0..n {
        for i in 0..n {
            for j in i..n {
                let mut acc = R::zero();
                for l in 0..n {
                    let c = ginv[(k, l)];
                    if c == R::zero() {
                        continue;
                    }
                    acc = acc + c * (dg[i][(l, j)] + dg[j][(l, i)] - dg[l][(i, j)]);
                }
                data[(k * n + i) * n + j] = half * acc;
                data[(k * n + j) * n + i] = half * acc;
            }
        }
    }
    Ok(Christoffel { n, data })
}

/// Christoffel symbols of the metric field at `p`.
pub fn christoffel<R: Real>(
    g: &FieldFn<R, Matrix<R>>,
    p: &[R],
    cfg: &StencilConfig,
) -> Result<Christoffel<R>> {
    g.domain().require(p, cfg.reach())?;
    christoffel_unchecked(g, p, cfg)
}

/// Riemann tensor by differentiating Christoffel symbols evaluated at shifted points.
pub fn riemann<R: Real>(
    g: &FieldFn<R, Matrix<R>>,
    p: &[R],
    cfg: &StencilConfig,
) -> Result<Riemann<R>> {
    let n = g.dim();
    g.domain()
        .require(p, 2.0 * cfg.reach() * std::f64::consts::SQRT_2)?;
    let gam = christoffel_unchecked(g, p, cfg)?;
    let dgam: Vec<Vec<R>> = (0..n)
        .map(|i| {
            let e: Vec<R> = (0..n)
                .map(|k| if k == i { R::one() } else { R::zero() })
                .collect();
            central(
                &|q: &[R]| Ok(christoffel_unchecked(g, q, cfg)?.data),
                p,
                &e,
                cfg,
            )
        })
        .collect::<Result<_>>()?;
    let d = |i: usize, l: usize, j: usize, k: usize| dgam[i][(l * n + j) * n + k];
    let mut data = vec![R::zero(); n.pow(4)];
    for l in 0..n {
        for k in 0..n {
            for i in 0..n {
                for j in (i + 1)..n {
                    let mut v = d(i, l, j, k) - d(j, l, i, k);
                    for m in 0..n {
                        v = v + gam.get(l, i, m) * gam.get(m, j, k)
                            - gam.get(l, j, m) * gam.get(m, i, k);
                    }
                    data[((l * n + k) * n + i) * n + j] = v;
                    data[((l * n + k) * n + j) * n + i] = -v;
                }
            }
        }
    }
    Ok(Riemann { n, data })
}

pub fn ricci<R: Real>(
    g: &FieldFn<R, Matrix<R>>,
    p: &[R],
    cfg: &StencilConfig,
) -> Result<Matrix<R>> {
    Ok(riemann(g, p, cfg)?.ricci())
}

pub fn scalar_curvature<R: Real>(
    g: &FieldFn<R, Matrix<R>>,
    p: &[R],
    cfg: &StencilConfig,
) -> Result<R> {
    let ginv = metric_inverse(&g.at(p))?;
    let ric = ricci(g, p, cfg)?;
    Ok((0..g.dim())
        .flat_map(|a| (0..g.dim()).map(move |b| (a, b)))
        .fold(R::zero(), |acc, (a, b)| acc + ginv[(a, b)] * ric[(a, b)]))
}

/// `R(X, Y)` as an endomorphism of the tangent space at `p`.
pub fn curvature_operator<R: Real>(
    g: &FieldFn<R, Matrix<R>>,
    p: &[R],
    x: &[R],
    y: &[R],
    cfg: &StencilConfig,
) -> Result<Matrix<R>> {
    Ok(riemann(g, p, cfg)?.operator(x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::Domain;

    fn round_sphere() -> FieldFn<f64, Matrix<f64>> {
        FieldFn::new(Domain::whole(2), |p: &[f64]| {
            let c = 4.0 / (1.0 + p[0] * p[0] + p[1] * p[1]).powi(2);
            Matrix::identity(2).scale(&c)
        })
    }

    #[test]
    fn flat_metric_has_no_curvature() {
        let g = FieldFn::new(Domain::whole(3), |_: &[f64]| Matrix::identity(3));
        let cfg = StencilConfig::curvature();
        assert_eq!(
            christoffel(&g, &[0.1, 0.2, 0.3], &cfg).unwrap().max_abs(),
            0.0
        );
        assert_eq!(riemann(&g, &[0.1, 0.2, 0.3], &cfg).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn sphere_scalar_curvature_is_two() {
        let cfg = StencilConfig::new(1e-3, 2, false).unwrap();
        for p in [[0.3, -0.2], [0.0, 0.0], [1.1, 0.4]] {
            let s = scalar_curvature(&round_sphere(), &p, &cfg).unwrap();
            assert!((s - 2.0).abs() < 1e-4, "{s}");
        }
    }

    #[test]
    fn operator_is_skew_and_bianchi_holds() {
        let cfg = StencilConfig::curvature();
        let g = round_sphere();
        let p = [0.2, 0.5];
        let r = riemann(&g, &p, &cfg).unwrap();
        assert!(r.bianchi_defect() < 1e-8, "{}", r.bianchi_defect());
        let op = r.operator(&[1.0, 0.0], &[0.0, 1.0]);
        let lowered = g.at(&p).mul(&op).unwrap();
        assert!(
            lowered.add(&lowered.transpose()).unwrap().max_abs() < 1e-6,
            "{}",
            lowered
        );
    }

    #[test]
    fn singular_metric_errors() {
        let g = FieldFn::new(Domain::whole(2), |_: &[f64]| Matrix::zeros(2, 2));
        assert!(christoffel(&g, &[0.0, 0.0], &StencilConfig::default()).is_err());
    }
}
