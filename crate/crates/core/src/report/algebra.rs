use crate::error::{Error, Result};
use crate::lie::g2::coordinates_in;
use crate::lie::{
    certify_embeddings, g2_basis, intertwiner_solve, m_embed, sl3_embed, so6_to_so7,
    so8_intersection_report, MVector, Sl3Param,
};
use crate::linalg::{bracket, Matrix};
use crate::octonion::{
    associative_test, invariant_threeform, model_octonions, stabilizer, star_checks, torsion_cross,
    CrossProduct7, OctonionTable,
};
use crate::{Rational, Scalar};

use super::{check, exact_from_display, exact_value, CheckDef, Draft, RunConfig};

pub(super) const ALGEBRA: [CheckDef; 8] = [
    check(
        "algebra.g2-span",
        "the explicit basis spans a 14-dimensional subalgebra",
        g2_span,
    ),
    check(
        "algebra.reductive",
        "sl(3) ⊕ m is reductive and not symmetric",
        reductive,
    ),
    check(
        "algebra.trace-orthogonal",
        "m is trace-orthogonal to sl(3)",
        orthogonal,
    ),
    check(
        "algebra.equivariance",
        "h_map and m_embed are sl(3)-equivariant",
        equivariance,
    ),
    check(
        "algebra.intertwiner",
        "the adjoint action on m is equivalent to the canonical action",
        intertwiner,
    ),
    check(
        "algebra.embedding-scales",
        "m_embed / h_map and the lift scale are constant",
        scales,
    ),
    check(
        "algebra.clifford",
        "left multiplications by imaginary units satisfy the Clifford relations",
        clifford,
    ),
    check(
        "algebra.so8-intersection",
        "spin(7) ∩ so(7) inside so(8) is g2",
        so8,
    ),
];

pub(super) const OCTONION: [CheckDef; 6] = [
    check(
        "octonion.invariant-form",
        "the invariant 3-form is unique, normalised, and has g2 as stabilizer",
        invariant_form,
    ),
    check(
        "octonion.hodge-star",
        "|*φ|² = 7 and φ ∧ *φ = 7 vol",
        hodge_star,
    ),
    check(
        "octonion.cross-product",
        "the φ-dual cross product satisfies the double-cross identity",
        cross_product,
    ),
    check(
        "octonion.torsion-cross",
        "the reductive-complement bracket is a multiple of the cross product",
        torsion_product,
    ),
    check(
        "octonion.algebra",
        "the induced product is unital, alternative and normed",
        algebra_table,
    ),
    check(
        "octonion.associative-planes",
        "coordinate associative and non-associative 3-planes",
        planes,
    ),
];

fn flag(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

fn g2_span(_: &RunConfig) -> Result<Draft> {
    let basis = g2_basis::<Rational>()?;
    let dim = basis.span()?.dim();
    Ok(Draft::new(0.0)
        .param("span_dim", dim)
        .param("h_block", basis.h_block.clone())
        .param("m_block", basis.m_block.clone())
        .residual("dimension_defect", (dim as f64 - 14.0).abs())
        .residual("closure", basis.closure.residual(&basis.elements)?))
}

fn reductive(_: &RunConfig) -> Result<Draft> {
    let cert = certify_embeddings(&g2_basis::<Rational>()?)?;
    Ok(Draft::new(0.0)
        .param("non_symmetric_witness", cert.symmetric_witness)
        .residual("not_reductive", flag(cert.reductive))
        .residual("symmetric", flag(cert.symmetric_witness.is_some())))
}

fn orthogonal(_: &RunConfig) -> Result<Draft> {
    let cert = certify_embeddings(&g2_basis::<Rational>()?)?;
    Ok(Draft::new(0.0)
        .param(
            "trace_form_to_killing",
            exact_from_display(&cert.trace_form_to_killing),
        )
        .residual("trace_pairing", cert.orthogonality_residual))
}

fn equivariance(_: &RunConfig) -> Result<Draft> {
    let cert = certify_embeddings(&g2_basis::<Rational>()?)?;
    Ok(Draft::new(0.0)
        .residual("h_map", cert.h_equivariance_residual)
        .residual("m_embed", flag(cert.adjoint_matches_canonical)))
}

/// Adjoint action of the sl(3) basis on m in the basis `m_embed(e_i)`, against
/// the canonical action on `R^6`.
fn intertwiner(_: &RunConfig) -> Result<Draft> {
    let m_basis: Vec<Matrix<Rational>> = MVector::<Rational>::basis().iter().map(m_embed).collect();
    let mut adjoint = Vec::new();
    let mut canonical = Vec::new();
    for p in Sl3Param::<Rational>::basis() {
        let a6 = sl3_embed(&p);
        let a7 = so6_to_so7(&a6)?;
        let mut cols = Vec::with_capacity(6);
        for x in &m_basis {
            let c = coordinates_in(&m_basis, &bracket(&a7, x)?)?
                .ok_or_else(|| Error::Certification("m is not ad(sl(3))-invariant".into()))?;
            cols.push(c);
        }
        adjoint.push(Matrix::from_fn(6, 6, |i, j| cols[j][i].clone()));
        canonical.push(a6);
    }
    let sol = intertwiner_solve(&adjoint, &canonical)?;
    let summary = sol.summary();
    let mut d = Draft::new(0.0)
        .param("solution_dim", summary.solution_dim)
        .residual("no_invertible_solution", flag(summary.invertible));
    if let Some(t) = &sol.invertible {
        let entries: Vec<Vec<_>> = (0..t.rows())
            .map(|i| (0..t.cols()).map(|j| exact_value(&t[(i, j)])).collect())
            .collect();
        d = d.param("intertwiner", entries);
    }
    Ok(d)
}

fn scales(_: &RunConfig) -> Result<Draft> {
    let cert = certify_embeddings(&g2_basis::<Rational>()?)?;
    let distinct = |v: &[String]| {
        let mut s = v.to_vec();
        s.sort();
        s.dedup();
        s.len()
    };
    let ratio_spread = distinct(&cert.m_embed_over_h_map) as f64 - 1.0;
    let lift_spread = distinct(&cert.lift_scale) as f64 - 1.0;
    Ok(Draft::new(0.0)
        .param(
            "m_embed_over_h_map",
            cert.m_embed_over_h_map
                .iter()
                .map(|s| exact_from_display(s))
                .collect::<Vec<_>>(),
        )
        .param(
            "lift_scale",
            cert.lift_scale
                .iter()
                .map(|s| exact_from_display(s))
                .collect::<Vec<_>>(),
        )
        .residual("ratio_spread", ratio_spread)
        .residual("lift_spread", lift_spread)
        .residual("lift_not_complement", flag(cert.lift_complement_certified)))
}

fn clifford(_: &RunConfig) -> Result<Draft> {
    let table = model_octonions::<Rational>()?;
    let e = |i: usize| -> [Rational; 8] {
        std::array::from_fn(|k| Rational::from_i64((k == i) as i64))
    };
    let gammas: Vec<Matrix<Rational>> = (1..8).map(|i| table.left_matrix(&e(i))).collect();
    let mut worst = 0.0f64;
    for (i, gi) in gammas.iter().enumerate() {
        for (j, gj) in gammas.iter().enumerate() {
            let mut anti = gi.mul(gj)?.add(&gj.mul(gi)?)?;
            if i == j {
                anti = anti.add(&Matrix::identity(8).scale(&Rational::from_i64(2)))?;
            }
            worst = worst.max(anti.max_abs());
        }
    }
    Ok(Draft::new(0.0)
        .param("generators", gammas.len())
        .residual("anticommutator", worst))
}

fn so8(_: &RunConfig) -> Result<Draft> {
    let table = model_octonions::<Rational>()?;
    let r = so8_intersection_report(&table, &g2_basis::<Rational>()?)?;
    let dims = [r.spin7_dim, r.so7_dim, r.sum_dim, r.intersection_dim];
    let defect = dims
        .iter()
        .zip([21usize, 21, 28, 14])
        .map(|(a, b)| (*a as f64 - b as f64).abs())
        .sum();
    Ok(Draft::new(0.0)
        .param("report", &r)
        .residual("dimension_defect", defect)
        .residual("not_g2", flag(r.intersection_is_g2 && r.clifford_certified)))
}

fn invariant_form(_: &RunConfig) -> Result<Draft> {
    let basis = g2_basis::<Rational>()?;
    let phi = invariant_threeform(&basis)?;
    let support: Vec<_> = phi
        .support()
        .into_iter()
        .map(|(idx, c)| (idx, exact_value(&c)))
        .collect();
    let stab = stabilizer(&phi)? == basis.span()?;
    Ok(Draft::new(0.0)
        .param("support", support)
        .param("norm_sq", exact_value(&phi.norm_sq()))
        .residual(
            "norm_defect",
            (phi.norm_sq() - Rational::from_i64(7)).to_f64().abs(),
        )
        .residual("stabilizer_not_g2", flag(stab)))
}

fn hodge_star(_: &RunConfig) -> Result<Draft> {
    let phi = crate::octonion::model_phi::<Rational>()?;
    let (norm, wedge) = star_checks(&phi)?;
    let seven = Rational::from_i64(7);
    Ok(Draft::new(0.0)
        .param("star_norm_sq", exact_value(&norm))
        .param("wedge_over_vol", exact_value(&wedge))
        .residual("star_norm", (norm - seven.clone()).to_f64().abs())
        .residual("wedge", (wedge - seven).to_f64().abs()))
}

fn cross_product(_: &RunConfig) -> Result<Draft> {
    let cross = CrossProduct7::from_phi(&crate::octonion::model_phi::<Rational>()?);
    Ok(Draft::new(0.0)
        .residual("antisymmetry", flag(cross.is_antisymmetric()))
        .residual("double_cross", cross.double_cross_defect())
        .residual("certificate", flag(cross.certify().is_ok())))
}

fn torsion_product(_: &RunConfig) -> Result<Draft> {
    let basis = g2_basis::<Rational>()?;
    let phi = invariant_threeform(&basis)?;
    let t = torsion_cross(&basis, &phi)?;
    Ok(Draft::new(0.0)
        .param("lambda", exact_value(&t.lambda))
        .param("complement_dim", t.complement_dim)
        .param("intertwiner_dim", t.intertwiner_dim)
        .residual("complement_defect", (t.complement_dim as f64 - 7.0).abs())
        .residual("lambda_zero", flag(!t.lambda.is_negligible())))
}

fn algebra_table(cfg: &RunConfig) -> Result<Draft> {
    let table: OctonionTable<Rational> = model_octonions()?;
    let outcome = table.certify(cfg.seed);
    let mut d = Draft::new(0.0).residual("certificate", flag(outcome.is_ok()));
    if let Err(e) = outcome {
        d = d.param("failure", e.to_string());
    }
    Ok(d)
}

fn planes(_: &RunConfig) -> Result<Draft> {
    let phi = crate::octonion::model_phi::<Rational>()?;
    let e = |i: usize| -> Vec<Rational> {
        (0..7)
            .map(|k| Rational::from_i64((k == i) as i64))
            .collect()
    };
    let assoc = associative_test(&phi, [&e(0), &e(1), &e(2)])?;
    let non = associative_test(&phi, [&e(4), &e(5), &e(6)])?;
    Ok(Draft::new(0.0)
        .param("associative", "e1 e2 e3")
        .param("non_associative", "e5 e6 e7")
        .residual("e123_not_associative", flag(assoc))
        .residual("e567_associative", flag(!non)))
}
