use proptest::prelude::*;

use g2kit::fields::{exterior_d, hodge_on_block, riemann, Domain, FieldFn, StencilConfig};
use g2kit::forms::Form;
use g2kit::lie::{
    cross3, hat3, intertwiner_solve, m_embed, sl3_embed, so6_to_so7, MVector, Sl3Param,
};
use g2kit::linalg::{bracket, inverse, Matrix, Subspace};
use g2kit::octonion::{calibration_ratio, model_phi, CrossProduct7};
use g2kit::{ExactMatrix, Rational, Scalar};

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| Rational::from_ratio(p, q))
}

fn rationals(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), n)
}

fn square(n: usize) -> impl Strategy<Value = ExactMatrix> {
    rationals(n * n).prop_map(move |v| Matrix::new(n, n, v).unwrap())
}

fn skew(n: usize) -> impl Strategy<Value = ExactMatrix> {
    square(n).prop_map(|m| m.sub(&m.transpose()).unwrap())
}

fn three(v: &[Rational]) -> [Rational; 3] {
    [v[0].clone(), v[1].clone(), v[2].clone()]
}

fn sl3() -> impl Strategy<Value = Sl3Param<Rational>> {
    (rationals(3), square(3)).prop_map(|(x, y)| {
        let y = y.add(&y.transpose()).unwrap();
        let shift = y.trace() / Rational::from_i64(3);
        let y = y.sub(&Matrix::identity(3).scale(&shift)).unwrap();
        Sl3Param::new(three(&x), y).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bracket_is_antisymmetric(a in square(4), b in square(4)) {
        let ab = bracket(&a, &b).unwrap();
        let ba = bracket(&b, &a).unwrap();
        prop_assert!(ab.add(&ba).unwrap().is_zero());
    }

    #[test]
    fn jacobi_identity(a in skew(4), b in skew(4), c in skew(4)) {
        let t = |x: &ExactMatrix, y: &ExactMatrix, z: &ExactMatrix| {
            bracket(x, &bracket(y, z).unwrap()).unwrap()
        };
        let sum = t(&a, &b, &c).add(&t(&b, &c, &a)).unwrap().add(&t(&c, &a, &b)).unwrap();
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn grassmann_dimension_formula(u in prop::collection::vec(rationals(5), 0..4), w in prop::collection::vec(rationals(5), 0..4)) {
        let s1 = Subspace::span(5, &u).unwrap();
        let s2 = Subspace::span(5, &w).unwrap();
        let sum = s1.sum(&s2).unwrap();
        let int = s1.intersect(&s2).unwrap();
        prop_assert_eq!(s1.dim() + s2.dim(), sum.dim() + int.dim());
    }

    #[test]
    fn span_is_canonical(vs in prop::collection::vec(rationals(5), 1..5), scales in rationals(5), seed in any::<u64>()) {
        let base = Subspace::span(5, &vs).unwrap();
        let mut shuffled: Vec<Vec<Rational>> = vs
            .iter()
            .zip(&scales)
            .map(|(v, s)| {
                let s = if *s == Rational::from_i64(0) { Rational::from_i64(7) } else { s.clone() };
                v.iter().map(|x| x.clone() * s.clone()).collect()
            })
            .collect();
        let k = shuffled.len();
        shuffled.rotate_left((seed as usize) % k);
        prop_assert_eq!(Subspace::span(5, &shuffled).unwrap(), base);
    }

    #[test]
    fn hat_map_intertwines_cross_and_bracket(x in rationals(3), y in rationals(3)) {
        let (x, y) = (three(&x), three(&y));
        let lhs = bracket(&hat3(&x), &hat3(&y)).unwrap();
        prop_assert_eq!(lhs, hat3(&cross3(&x, &y)));
    }

    #[test]
    fn m_embed_is_equivariant(p in sl3(), v in rationals(6)) {
        let a6 = sl3_embed(&p);
        let a7 = so6_to_so7(&a6).unwrap();
        let x = MVector::from_slice(&v).unwrap();
        let ax = MVector::from_slice(&a6.mul_vec(&v).unwrap()).unwrap();
        prop_assert_eq!(bracket(&a7, &m_embed(&x)).unwrap(), m_embed(&ax));
    }

    #[test]
    fn conjugate_representations_are_equivalent(p in square(3)) {
        prop_assume!(g2kit::linalg::determinant(&p).unwrap() != Rational::from_i64(0));
        let pinv = inverse(&p).unwrap();
        let rep: Vec<ExactMatrix> = Sl3Param::<Rational>::basis().iter().map(sl3_embed).map(|m| m.block(0, 0, 3, 3)).collect();
        let conj: Vec<ExactMatrix> = rep.iter().map(|m| p.mul(m).unwrap().mul(&pinv).unwrap()).collect();
        let sol = intertwiner_solve(&rep, &conj).unwrap();
        prop_assert!(sol.equivalent());
        prop_assert!((1..=2).contains(&sol.solutions.len()));
    }

    #[test]
    fn double_cross_identity(x in rationals(7), y in rationals(7)) {
        let c = CrossProduct7::from_phi(&model_phi::<Rational>().unwrap());
        let lhs = c.apply(&x, &c.apply(&x, &y));
        let dot = |a: &[Rational], b: &[Rational]| a.iter().zip(b).fold(Rational::from_i64(0), |s, (p, q)| s + p.clone() * q.clone());
        let (xx, xy) = (dot(&x, &x), dot(&x, &y));
        for i in 0..7 {
            prop_assert_eq!(lhs[i].clone(), -xx.clone() * y[i].clone() + xy.clone() * x[i].clone());
        }
    }

    #[test]
    fn calibration_bound(x in rationals(7), y in rationals(7), z in rationals(7)) {
        let phi = model_phi::<Rational>().unwrap();
        if let Ok(r) = calibration_ratio(&phi, [&x, &y, &z]) {
            prop_assert!(r >= Rational::from_i64(0) && r <= Rational::from_i64(1));
        }
    }

    #[test]
    fn exterior_derivative_is_linear(c in prop::collection::vec(-1.0f64..1.0, 8), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let dom = Domain::boxed(vec![(-1.0, 1.0); 4]);
        let (c1, c2) = (c.clone(), c.clone());
        let f = FieldFn::new(dom.clone(), move |p: &[f64]| {
            Form::from_components(4, 1, (0..4).map(|i| (c1[i] * p[(i + 1) % 4]).sin() + c1[i + 4] * p[i] * p[i]).collect()).unwrap()
        });
        let g = FieldFn::new(dom.clone(), move |p: &[f64]| {
            Form::from_components(4, 1, (0..4).map(|i| (c2[i + 4] * p[(i + 2) % 4]).exp()).collect()).unwrap()
        });
        let (fa, gb) = (f.clone(), g.clone());
        let combo = FieldFn::new(dom, move |p: &[f64]| fa.at(p).scale(&a).add(&gb.at(p).scale(&b)).unwrap());
        let cfg = StencilConfig::first_derivative();
        let p = [0.1, -0.2, 0.3, 0.05];
        let lhs = exterior_d(&combo, &p, &cfg).unwrap();
        let rhs = exterior_d(&f, &p, &cfg).unwrap().scale(&a).add(&exterior_d(&g, &p, &cfg).unwrap().scale(&b)).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-9);
    }

    #[test]
    fn d_squared_vanishes(c in prop::collection::vec(-1.0f64..1.0, 8)) {
        let dom = Domain::boxed(vec![(-1.0, 1.0); 4]);
        let f = FieldFn::new(dom.clone(), move |p: &[f64]| {
            Form::from_components(4, 1, (0..4).map(|i| (c[i] * p[(i + 1) % 4] + c[i + 4] * p[i]).sin()).collect()).unwrap()
        });
        let cfg = StencilConfig::first_derivative();
        let inner = f.clone();
        let df = FieldFn::new(dom, move |p: &[f64]| exterior_d(&inner, p, &cfg).unwrap());
        let ddf = exterior_d(&df, &[0.2, 0.1, -0.3, 0.0], &cfg).unwrap();
        prop_assert!(ddf.max_abs() < 1e-7, "{}", ddf.max_abs());
    }

    #[test]
    fn hodge_star_is_an_isometry(entries in prop::collection::vec(-0.5f64..0.5, 9), comps in prop::collection::vec(-1.0f64..1.0, 3), degree in 1usize..3) {
        let a = Matrix::new(3, 3, entries).unwrap();
        let g = a.mul(&a.transpose()).unwrap().add(&Matrix::identity(3)).unwrap();
        let alpha = Form::from_components(3, degree, comps).unwrap();
        let star = hodge_on_block(&alpha, &g, 1).unwrap();
        // metric norm: components in an orthonormal coframe C, g = Cᵀ C
        let chol = {
            let mut l = Matrix::<f64>::zeros(3, 3);
            for i in 0..3 {
                for j in 0..=i {
                    let s: f64 = (0..j).map(|k| l[(i, k)] * l[(j, k)]).sum();
                    l[(i, j)] = if i == j { (g[(i, i)] - s).sqrt() } else { (g[(i, j)] - s) / l[(j, j)] };
                }
            }
            l
        };
        let to_frame = inverse(&chol.transpose()).unwrap();
        let norm = |f: &Form<f64>| f.pullback(&to_frame).unwrap().norm_sq();
        prop_assert!((norm(&alpha) - norm(&star)).abs() < 1e-10 * (1.0 + norm(&alpha)));
    }

    #[test]
    fn riemann_satisfies_bianchi(c in prop::collection::vec(-0.3f64..0.3, 6)) {
        let g = FieldFn::new(Domain::boxed(vec![(-1.0, 1.0); 3]), move |p: &[f64]| {
            Matrix::from_fn(3, 3, |i, j| {
                let diag = if i == j { (c[i] * p[(i + 1) % 3]).exp() } else { 0.0 };
                diag + 0.1 * c[3 + (i + j) % 3] * p[i] * p[j]
            })
        });
        let r = riemann(&g, &[0.1, 0.2, -0.1], &StencilConfig::curvature()).unwrap();
        prop_assert!(r.bianchi_defect() < 1e-6, "{}", r.bianchi_defect());
    }
}
