use g2kit::constructions::*;
use g2kit::convergence::{fit_order, EXACT_FLOOR};
use g2kit::fields::{sample_points, Domain, FieldFn, StencilConfig};
use g2kit::forms::Form;
use g2kit::linalg::Matrix;
use g2kit::octonion::model_phi;
use g2kit::Rational;

fn base_points(n: usize, seed: u64) -> Vec<Vec<f64>> {
    sample_points(&product_base_domain(), n, seed, 0.5).unwrap()
}

#[test]
fn killing_quotient_of_taub_nut_satisfies_every_condition() {
    let (_, data) = killing_gallery();
    let pts = base_points(12, 1);
    let cfg = StencilConfig::first_derivative();
    let r = killing_conditions_check(&data, &pts, &cfg).unwrap();
    assert!(r.max() < 1e-4, "{r:?}");
    assert_eq!(r.sl3, 0.0);
    let coarse = killing_conditions_check(&data, &pts, &cfg.with_h(2e-3)).unwrap();
    assert!(
        fit_order(&[2e-3, 1e-3], &[coarse.curvature, r.curvature], EXACT_FLOOR)
            .unwrap()
            .at_least(1.8)
    );
}

#[test]
fn perturbed_potential_breaks_the_curvature_condition() {
    let (_, data) = perturbed_killing();
    let r = killing_conditions_check(
        &data,
        &base_points(12, 2),
        &StencilConfig::first_derivative(),
    )
    .unwrap();
    assert!(r.curvature >= 0.05, "{r:?}");
}

#[test]
fn curvature_equations_hold_in_all_three_forms() {
    let (_, data) = killing_gallery();
    let cfg = StencilConfig::first_derivative();
    for p in base_points(8, 3) {
        let c = da_conditions_check(&data, &p, &cfg).unwrap();
        for r in c
            .blockwise
            .iter()
            .chain(&c.alpha_form)
            .chain([&c.monopole_form, &c.pair_discrepancy])
        {
            assert!(*r < 1e-5, "{c:?}");
        }
        assert_eq!(gamma_pair_at(&data, &p, &cfg).unwrap(), 0.0);
    }
}

#[test]
fn constant_u_without_alpha_forces_closed_potential() {
    let (_, mut data) = killing_gallery();
    let dom = data.u.domain().clone();
    data.u = FieldFn::new(dom.clone(), |_: &[f64]| 1.0);
    data.b = FieldFn::new(dom.clone(), |_: &[f64]| vec![0.0; 3]);
    data.frame = FieldFn::new(dom.clone(), |_: &[f64]| Matrix::identity(6));
    data.potential = FieldFn::new(dom, |p: &[f64]| {
        Form::from_components(6, 1, vec![p[1], 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap()
    });
    let c = da_conditions_check(
        &data,
        &base_points(1, 4)[0],
        &StencilConfig::first_derivative(),
    )
    .unwrap();
    assert!((c.blockwise[0] - 1.0).abs() < 1e-9, "{c:?}");
    assert!(c.blockwise[1] < 1e-12 && c.monopole_form < 1e-12);
}

#[test]
fn flat_bundle_recovers_the_model_form() {
    let (_, b) = flat_bundle().unwrap();
    let phi = model_phi::<Rational>().unwrap().to_f64();
    let pts = sample_points(b.coframe.domain(), 10, 5, 0.0).unwrap();
    for q in &pts {
        assert_eq!(b.phi.eval(q).unwrap(), *phi.form());
        assert_eq!(b.star_phi.eval(q).unwrap(), phi.star());
        assert!(b.coframe_orthonormality(q).unwrap() < 1e-15);
    }
    let t = torsionfree_residual(&b, &pts, &StencilConfig::first_derivative()).unwrap();
    assert!(t.max() <= 1e-10);
    let h = holonomy_residual(&b, &pts[..2], &StencilConfig::curvature()).unwrap();
    assert_eq!(h.off_g2, 0.0);
}

#[test]
fn weak_builder_with_zero_alpha_matches_the_first() {
    let checks = base_points(5, 6);
    let (_, strong) = taub_nut_bundle(&checks).unwrap();
    let (_, weak) = taub_nut_weak(&checks).unwrap();
    assert!(
        strong.provenance.warnings.is_empty(),
        "{:?}",
        strong.provenance.warnings
    );
    assert!(
        weak.provenance.warnings.is_empty(),
        "{:?}",
        weak.provenance.warnings
    );
    for q in sample_points(strong.coframe.domain(), 20, 7, 0.5).unwrap() {
        let a = strong.phi.eval(&q).unwrap();
        let b = weak.phi.eval(&q).unwrap();
        assert!(a.sub(&b).unwrap().max_abs() <= 1e-12);
        assert!(strong.coframe_orthonormality(&q).unwrap() < 1e-10);
    }
}

#[test]
fn weak_residuals_reduce_to_the_monopole_equation() {
    let (k, mut mono) = taub_nut_monopole();
    mono.split = g2kit::fields::SplitSpec::pair("plus", 3, "minus", 3);
    let pts = base_points(10, 8);
    let cfg = StencilConfig::first_derivative();
    let weak = weak_monopole_residual(&mono, &k, &pts, &cfg).unwrap();
    let strong = monopole_residual(&mono, &k, &pts, &cfg).unwrap();
    assert!(weak.minus_minus < 1e-4 && weak.plus_plus == 0.0 && weak.plus_minus == 0.0);
    assert!((weak.minus_minus - strong.equation).abs() < 1e-12);
    assert_eq!(weak.connection_mismatch, None);
}

#[test]
fn non_basic_v_is_detected() {
    let (k, mut mono) = taub_nut_monopole();
    let dom = mono.v.domain().clone();
    let base = mono.v.clone();
    mono.v = FieldFn::new(dom, move |p: &[f64]| base.at(p) + 0.2 * p[0]);
    let r = monopole_residual(
        &mono,
        &k,
        &base_points(10, 9),
        &StencilConfig::first_derivative(),
    )
    .unwrap();
    assert!(r.basic_v >= 0.1, "{r:?}");
    assert!(r.basic_potential == 0.0);
}

#[test]
fn nonpositive_v_is_rejected() {
    let (k, mut mono) = flat_monopole();
    let dom = mono.v.domain().clone();
    mono.v = FieldFn::new(dom, |_: &[f64]| -1.0);
    assert!(g2_build_thm1(&k, &mono, &[vec![0.0; 6]], "").is_err());
    let (_, mut gh) = gh_taub_nut();
    gh.v = FieldFn::new(gh.v.domain().clone(), |_: &[f64]| 0.0);
    let cfg = StencilConfig::first_derivative();
    assert!(gh_residual(&gh, &[vec![1.0, 0.5, 0.5]], &cfg, &cfg).is_err());
}

#[test]
fn exactly_one_sign_choice_is_pinned() {
    let (fk, fm) = flat_monopole();
    let (tk, tm) = taub_nut_monopole();
    let (_, tn) = taub_nut_bundle(&[]).unwrap();
    let pts = sample_points(tn.coframe.domain(), 5, 10, 0.5).unwrap();
    let rows = sign_audit((&fk, &fm), (&tk, &tm), &pts, &[2e-3, 1e-3, 5e-4]).unwrap();
    let passing: Vec<[i8; 3]> = rows
        .iter()
        .filter(|r| r.passes())
        .map(|r| r.signs)
        .collect();
    assert_eq!(passing, vec![[1, 1, 1]]);
    for r in &rows {
        // closure is blind to the leaf orientation but ties the potential to the complement
        assert_eq!(r.converges, r.signs[1] == r.signs[2], "{r:?}");
        assert_eq!(
            r.reproduces_model,
            r.signs[0] == 1 && r.signs[2] == 1,
            "{r:?}"
        );
    }
}

#[test]
fn flat_gibbons_hawking_data_has_no_curvature() {
    let dom = Domain::boxed(vec![(-1.0, 1.0); 3]);
    let data = GhData {
        v: FieldFn::new(dom.clone(), |_: &[f64]| 1.0),
        potential: FieldFn::new(dom, |_: &[f64]| Form::zero(3, 1)),
    };
    let cfg = StencilConfig::curvature();
    let r = gh_residual(&data, &[vec![0.1, 0.2, 0.3]], &cfg, &cfg).unwrap();
    assert_eq!(r, GhResidual::default());
}

#[test]
fn hyperplane_is_geodesic_and_kahler() {
    let (_, imm) = hyperplane();
    let pts = sample_points(imm.map.domain(), 10, 11, 0.0).unwrap();
    let r = hypersurface_checks(&imm, &pts, &StencilConfig::first_derivative()).unwrap();
    assert!(r.kahler <= 1e-8 && r.geodesic <= 1e-8, "{r:?}");
}

#[test]
fn random_rho_data_matches_on_many_points() {
    let data = random_rho_data(11);
    let pts = sample_points(&Domain::boxed(vec![(-0.4, 0.4); 6]), 10, 12, 0.0).unwrap();
    for p in pts {
        assert!(rho_torsion_check(&data, &p, &StencilConfig::first_derivative()).unwrap() < 1e-5);
    }
}
