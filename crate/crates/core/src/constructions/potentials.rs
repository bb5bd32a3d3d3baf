use crate::fields::{Domain, FieldFn};
use crate::forms::Form;

/// Euclidean length of the coordinates in `slots`.
pub fn radial(p: &[f64], slots: [usize; 3]) -> f64 {
    slots.iter().map(|&s| p[s] * p[s]).sum::<f64>().sqrt()
}

/// `c + m / r` on the coordinates `slots`.
pub fn inverse_distance(domain: Domain, c: f64, m: f64, slots: [usize; 3]) -> FieldFn<f64, f64> {
    FieldFn::new(domain, move |p: &[f64]| c + m / radial(p, slots))
}

/// `m (x dy - y dx) / (r (r + z))` on the coordinates `slots`, singular along
/// `{x = y = 0, z ≤ 0}`. Its differential is `-m * d(1/r)` under the Euclidean star.
pub fn dirac_potential(domain: Domain, m: f64, slots: [usize; 3]) -> FieldFn<f64, Form<f64>> {
    let n = domain.dim();
    FieldFn::new(domain, move |p: &[f64]| {
        let [x, y, z] = slots.map(|s| p[s]);
        let r = (x * x + y * y + z * z).sqrt();
        let c = m / (r * (r + z));
        let mut out = Form::zero(n, 1);
        out.set_sorted(&[slots[0]], -c * y);
        out.set_sorted(&[slots[1]], c * x);
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{exterior_d, gradient, hodge_on_block, Exclusion, StencilConfig};
    use crate::linalg::Matrix;

    #[test]
    fn dirac_potential_solves_the_monopole_equation() {
        let dom = Domain::whole(3).exclude(Exclusion::DiracString { slots: [0, 1, 2] });
        let a = dirac_potential(dom.clone(), 0.5, [0, 1, 2]);
        let v = inverse_distance(dom, 1.0, 0.5, [0, 1, 2]);
        let cfg = StencilConfig::new(1e-3, 4, false).unwrap();
        for p in [[0.3, -0.4, 0.5], [0.7, 0.2, -0.3], [-0.5, 0.6, 0.1]] {
            let da = exterior_d(&a, &p, &cfg).unwrap();
            let dv = Form::from_components(3, 1, gradient(&v, &p, &cfg).unwrap()).unwrap();
            let star = hodge_on_block(&dv, &Matrix::identity(3), 1).unwrap();
            assert!(da.add(&star).unwrap().max_abs() < 1e-9);
        }
    }
}
