use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fields::{exterior_d, fd_partial, gradient, FieldFn, StencilConfig};
use crate::forms::Form;
use crate::linalg::{inverse, Matrix};

use super::{column, dot, vec_max_abs};

/// A connection on `TM` extended to `TM ⊕ R𝟙` by `γ`, `h` and the circle data `(u, A)`.
/// Vectors are in the frame, which is declared orthonormal.
#[derive(Clone)]
pub struct RhoData {
    pub frame: FieldFn<f64, Matrix<f64>>,
    /// `∇_{E_c}` in the frame, one matrix per frame direction.
    pub connection: FieldFn<f64, Vec<Matrix<f64>>>,
    /// `∇_𝟙` acting on `TM`.
    pub unit_connection: FieldFn<f64, Matrix<f64>>,
    /// `γ` restricted to `TM`, as a matrix on frame components.
    pub gamma: FieldFn<f64, Matrix<f64>>,
    /// `γ(𝟙)`.
    pub gamma_unit: FieldFn<f64, Vec<f64>>,
    pub h: Arc<dyn Fn(&[f64]) -> Result<Matrix<f64>> + Send + Sync>,
    pub u: FieldFn<f64, f64>,
    pub potential: FieldFn<f64, Form<f64>>,
}

impl std::fmt::Debug for RhoData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RhoData")
            .field("dim", &self.frame.dim())
            .finish_non_exhaustive()
    }
}

struct Frames {
    n: usize,
    frame: Matrix<f64>,
    omega: Vec<Matrix<f64>>,
    unit_conn: Matrix<f64>,
    gamma: Matrix<f64>,
    gamma_unit: Vec<f64>,
    h_gamma: Vec<Matrix<f64>>,
    h_unit: Matrix<f64>,
    u: f64,
}

fn frames(data: &RhoData, p: &[f64]) -> Result<Frames> {
    let n = data.frame.dim();
    let frame = data.frame.eval(p)?;
    let gamma = data.gamma.eval(p)?;
    let gamma_unit = data.gamma_unit.eval(p)?;
    let h_gamma = (0..n)
        .map(|c| (data.h)(&column(&gamma, c)))
        .collect::<Result<Vec<_>>>()?;
    let h_unit = (data.h)(&gamma_unit)?;
    let u = data.u.eval(p)?;
    if !(u > 0.0) {
        return Err(Error::BadValue(format!("u = {u} must be positive")));
    }
    Ok(Frames {
        n,
        frame,
        omega: data.connection.eval(p)?,
        unit_conn: data.unit_connection.eval(p)?,
        gamma,
        gamma_unit,
        h_gamma,
        h_unit,
        u,
    })
}

/// `∇̃_{ℰ_a} ℰ_b` in the extended frame `ℰ = (E_1, …, E_n, 𝟙)`, column `b` of entry `a`.
fn extended_connection(f: &Frames) -> Vec<Matrix<f64>> {
    let n = f.n;
    (0..=n)
        .map(|a| {
            let mut w = Matrix::zeros(n + 1, n + 1);
            for b in 0..=n {
                let col: Vec<f64> = match (a < n, b < n) {
                    (true, true) => {
                        let mut v: Vec<f64> = (0..n)
                            .map(|k| f.omega[a][(k, b)] + f.h_gamma[a][(k, b)])
                            .collect();
                        v.push(-f.gamma[(b, a)]);
                        v
                    }
                    (true, false) => {
                        let mut v = column(&f.gamma, a);
                        v.push(0.0);
                        v
                    }
                    (false, true) => {
                        let mut v: Vec<f64> = (0..n)
                            .map(|k| f.unit_conn[(k, b)] + f.h_unit[(k, b)])
                            .collect();
                        v.push(-f.gamma_unit[b]);
                        v
                    }
                    (false, false) => {
                        let mut v = f.gamma_unit.clone();
                        v.push(0.0);
                        v
                    }
                };
                for (k, x) in col.into_iter().enumerate() {
                    w[(k, b)] = x;
                }
            }
            w
        })
        .collect()
}

/// Torsion of the extended connection computed two ways at `p`: directly from
/// brackets of invariant vector fields on `M × R`, and from the closed formula in
/// terms of the torsion of `∇`, `γ`, `dA` and `du`. Returns the largest component
/// of their difference over all pairs of extended frame vectors.
pub fn rho_torsion_check(data: &RhoData, p: &[f64], cfg: &StencilConfig) -> Result<f64> {
    let direct = direct_torsion(data, p, cfg)?;
    let formula = formula_torsion(data, p, cfg)?;
    Ok(direct
        .iter()
        .zip(&formula)
        .map(|(x, y)| vec_max_abs(&super::sub(x, y)))
        .fold(0.0, f64::max))
}

/// Both sides of [`rho_torsion_check`], each flattened over the pairs `a < b`.
pub fn rho_torsion_pair(
    data: &RhoData,
    p: &[f64],
    cfg: &StencilConfig,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let direct = direct_torsion(data, p, cfg)?.concat();
    let formula = formula_torsion(data, p, cfg)?.concat();
    Ok((direct, formula))
}

/// Torsion components `T̃(ℰ_a, ℰ_b)` for `a < b`, in the extended frame.
fn direct_torsion(data: &RhoData, p: &[f64], cfg: &StencilConfig) -> Result<Vec<Vec<f64>>> {
    let n = data.frame.dim();
    let f = frames(data, p)?;
    let w = extended_connection(&f);
    // invariant vector fields on M × R, the circle coordinate last
    let lifted = {
        let frame = data.frame.clone();
        let pot = data.potential.clone();
        let u = data.u.clone();
        let ids: Vec<usize> = (0..n).collect();
        let domain = frame.domain().lift(&ids, n + 1, &[(n, (-1.0, 1.0))]);
        FieldFn::new(domain, move |q: &[f64]| {
            let x = &q[..n];
            let e = frame.at(x);
            let a = pot.at(x);
            let mut m = Matrix::zeros(n + 1, n + 1);
            for c in 0..n {
                let ec = column(&e, c);
                for k in 0..n {
                    m[(k, c)] = ec[k];
                }
                m[(n, c)] = -a.eval(&[&ec]).unwrap_or(f64::NAN);
            }
            m[(n, n)] = 1.0 / u.at(x);
            m
        })
    };
    let mut q = p.to_vec();
    q.push(0.0);
    let big = lifted.eval(&q)?;
    let big_inv = inverse(&big)?;
    let derivs: Vec<Matrix<f64>> = (0..=n)
        .map(|a| crate::fields::directional(&lifted, &q, &column(&big, a), cfg))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for a in 0..=n {
        for b in (a + 1)..=n {
            let bracket: Vec<f64> = (0..=n)
                .map(|k| derivs[a][(k, b)] - derivs[b][(k, a)])
                .collect();
            let bracket = big_inv.mul_vec(&bracket)?;
            out.push(
                (0..=n)
                    .map(|k| w[a][(k, b)] - w[b][(k, a)] - bracket[k])
                    .collect(),
            );
        }
    }
    Ok(out)
}

/// The same components from the closed formula, with coordinate derivatives only.
fn formula_torsion(data: &RhoData, p: &[f64], cfg: &StencilConfig) -> Result<Vec<Vec<f64>>> {
    let n = data.frame.dim();
    let f = frames(data, p)?;
    let frame_inv = inverse(&f.frame)?;
    let partials: Vec<Matrix<f64>> = (0..n)
        .map(|i| fd_partial(&data.frame, p, i, cfg))
        .collect::<Result<_>>()?;
    let da = exterior_d(&data.potential, p, cfg)?;
    let du = gradient(&data.u, p, cfg)?;
    let mut out = Vec::new();
    for a in 0..=n {
        for b in (a + 1)..=n {
            let v: Vec<f64> = if b < n {
                let mut bracket = vec![0.0; n];
                for (k, slot) in bracket.iter_mut().enumerate() {
                    for i in 0..n {
                        *slot += f.frame[(i, a)] * partials[i][(k, b)]
                            - f.frame[(i, b)] * partials[i][(k, a)];
                    }
                }
                let bracket = frame_inv.mul_vec(&bracket)?;
                let mut v: Vec<f64> = (0..n)
                    .map(|k| {
                        let torsion = f.omega[a][(k, b)] - f.omega[b][(k, a)] - bracket[k];
                        torsion + f.h_gamma[a][(k, b)] - f.h_gamma[b][(k, a)]
                    })
                    .collect();
                let omega = da.eval(&[&column(&f.frame, a), &column(&f.frame, b)])?;
                v.push(f.u * omega - f.gamma[(b, a)] + f.gamma[(a, b)]);
                v
            } else {
                let ea = column(&f.frame, a);
                let mut v: Vec<f64> = (0..n)
                    .map(|k| f.gamma[(k, a)] - f.unit_conn[(k, a)] - f.h_unit[(k, a)])
                    .collect();
                v.push(dot(&du, &ea) / f.u + f.gamma_unit[a]);
                v
            };
            out.push(v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::random_rho_data;
    use crate::fields::Domain;

    #[test]
    fn trivial_data_has_no_torsion_either_way() {
        let dom = Domain::boxed(vec![(-1.0, 1.0); 6]);
        let zero_vec = FieldFn::new(dom.clone(), |_: &[f64]| vec![0.0; 6]);
        let zero_mat = FieldFn::new(dom.clone(), |_: &[f64]| Matrix::zeros(6, 6));
        let data = RhoData {
            frame: FieldFn::new(dom.clone(), |_: &[f64]| Matrix::identity(6)),
            connection: FieldFn::new(dom.clone(), |_: &[f64]| vec![Matrix::zeros(6, 6); 6]),
            unit_connection: zero_mat.clone(),
            gamma: zero_mat,
            gamma_unit: zero_vec,
            h: Arc::new(|v: &[f64]| Ok(crate::lie::h_map(&crate::lie::MVector::from_slice(v)?))),
            u: FieldFn::new(dom.clone(), |_: &[f64]| 1.0),
            potential: FieldFn::new(dom, |_: &[f64]| Form::zero(6, 1)),
        };
        let p = [0.1, 0.2, -0.3, 0.4, 0.0, 0.5];
        let cfg = StencilConfig::first_derivative();
        assert_eq!(rho_torsion_check(&data, &p, &cfg).unwrap(), 0.0);
        let direct = direct_torsion(&data, &p, &cfg).unwrap();
        assert!(direct.iter().all(|v| vec_max_abs(v) == 0.0));
    }

    #[test]
    fn random_data_agrees_to_second_order() {
        let data = random_rho_data(3);
        let p = [0.1, -0.2, 0.3, 0.05, -0.15, 0.2];
        let coarse =
            rho_torsion_check(&data, &p, &StencilConfig::first_derivative().with_h(2e-3)).unwrap();
        let fine = rho_torsion_check(&data, &p, &StencilConfig::first_derivative()).unwrap();
        assert!(fine < 1e-6, "{fine}");
        let order = (coarse / fine).log2();
        assert!(order > 1.9, "{order} from {coarse} and {fine}");
    }
}
