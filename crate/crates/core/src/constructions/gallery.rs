//! Named examples, positive and negative, used by the test suites.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::fields::{Domain, Exclusion, FieldFn, SplitSpec};
use crate::forms::Form;
use crate::lie::{h_map, MVector};
use crate::linalg::Matrix;

use super::bundle::{g2_build_thm1, g2_build_thm2, G2MetricBundle, MonopoleData, Provenance};
use super::gh::GhData;
use super::hypersurface::Immersion;
use super::killing::{cross_matrix, Connection, KillingData};
use super::potentials::{dirac_potential, inverse_distance, radial};
use super::rho::RhoData;
use crate::error::Result;

/// Description of a gallery example as it appears in reports.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GalleryEntry {
    pub name: String,
    pub builder: String,
    pub inputs: BTreeMap<String, String>,
    pub anchor: String,
}

impl GalleryEntry {
    pub fn new(name: &str, builder: &str, inputs: &[(&str, &str)], anchor: &str) -> Self {
        Self {
            name: name.into(),
            builder: builder.into(),
            inputs: inputs
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
            anchor: anchor.into(),
        }
    }
}

const MINUS: [usize; 3] = [3, 4, 5];

/// `R^3 × R^3` sampling box with the origin and the Dirac string of the second
/// factor removed.
pub fn product_base_domain() -> Domain {
    Domain::boxed(vec![
        (-1.0, 1.0),
        (-1.0, 1.0),
        (-1.0, 1.0),
        (-1.5, 1.5),
        (-1.5, 1.5),
        (-1.0, 1.5),
    ])
    .exclude(Exclusion::Point {
        slots: MINUS.to_vec(),
        center: vec![0.0; 3],
    })
    .exclude(Exclusion::DiracString { slots: MINUS })
}

fn gh_domain() -> Domain {
    Domain::boxed(vec![(-1.5, 1.5), (-1.5, 1.5), (-1.0, 1.5)])
        .exclude(Exclusion::Point {
            slots: vec![0, 1, 2],
            center: vec![0.0; 3],
        })
        .exclude(Exclusion::DiracString { slots: [0, 1, 2] })
}

fn identity_metric(domain: &Domain) -> FieldFn<f64, Matrix<f64>> {
    FieldFn::new(domain.clone(), |_: &[f64]| Matrix::identity(6))
}

fn leaf_split() -> SplitSpec {
    SplitSpec::pair("V", 3, "H", 3)
}

/// `v = 1`, `A = 0` on flat `R^6`.
pub fn flat_monopole() -> (FieldFn<f64, Matrix<f64>>, MonopoleData) {
    let domain = Domain::boxed(vec![(-1.0, 1.0); 6]);
    let mono = MonopoleData {
        v: FieldFn::new(domain.clone(), |_: &[f64]| 1.0),
        potential: FieldFn::new(domain.clone(), |_: &[f64]| Form::zero(6, 1)),
        alpha: None,
        connection_vector: None,
        split: leaf_split(),
    };
    (identity_metric(&domain), mono)
}

/// `v = 1 + 1/(2r)` and the matching Dirac potential on the second factor.
pub fn taub_nut_monopole() -> (FieldFn<f64, Matrix<f64>>, MonopoleData) {
    let domain = product_base_domain();
    let mono = MonopoleData {
        v: inverse_distance(domain.clone(), 1.0, 0.5, MINUS),
        potential: dirac_potential(domain.clone(), 0.5, MINUS),
        alpha: None,
        connection_vector: None,
        split: leaf_split(),
    };
    (identity_metric(&domain), mono)
}

pub fn flat_bundle() -> Result<(GalleryEntry, G2MetricBundle)> {
    let (k, mono) = flat_monopole();
    let entry = GalleryEntry::new(
        "flat",
        "g2_build_thm1",
        &[("k", "euclidean R^6"), ("v", "1"), ("A", "0")],
        "trivial circle bundle over flat monopole data recovers the model 3-form",
    );
    let mut b = g2_build_thm1(&k, &mono, &[], &entry.anchor)?;
    b.provenance.inputs = entry.inputs.clone();
    Ok((entry, b))
}

pub fn taub_nut_bundle(check_points: &[Vec<f64>]) -> Result<(GalleryEntry, G2MetricBundle)> {
    let (k, mono) = taub_nut_monopole();
    let entry = GalleryEntry::new(
        "taub-nut",
        "g2_build_thm1",
        &[
            ("k", "euclidean R^3 x R^3"),
            ("v", "1 + 1/(2r)"),
            ("A", "Dirac potential, charge 1/2"),
        ],
        "R^3 times Taub-NUT from a Dirac monopole on the second factor",
    );
    let mut b = g2_build_thm1(&k, &mono, check_points, &entry.anchor)?;
    b.provenance.inputs = entry.inputs.clone();
    Ok((entry, b))
}

/// Taub-NUT data with the potential scaled by `1 + eps`, which breaks the monopole equation.
pub fn broken_monopole(
    eps: f64,
    check_points: &[Vec<f64>],
) -> Result<(GalleryEntry, G2MetricBundle)> {
    let (k, mut mono) = taub_nut_monopole();
    mono.potential = dirac_potential(product_base_domain(), 0.5 * (1.0 + eps), MINUS);
    let eps_s = format!("{eps}");
    let entry = GalleryEntry::new(
        "broken-monopole",
        "g2_build_thm1",
        &[
            ("k", "euclidean R^3 x R^3"),
            ("v", "1 + 1/(2r)"),
            ("A", "Dirac potential scaled by 1 + eps"),
            ("eps", &eps_s),
        ],
        "monopole equation violated: the 3-form cannot be closed",
    );
    let mut b = g2_build_thm1(&k, &mono, check_points, &entry.anchor)?;
    b.provenance.inputs = entry.inputs.clone();
    Ok((entry, b))
}

/// Weak monopole data consistent with `α = (0.1, 0, 0)` over a flat base whose
/// connection has `α = 0`.
pub fn alpha_mismatch(check_points: &[Vec<f64>]) -> Result<(GalleryEntry, G2MetricBundle)> {
    let domain = Domain::boxed(vec![(-1.0, 1.0); 6]);
    let c = 0.1;
    let mono = MonopoleData {
        v: FieldFn::new(domain.clone(), |_: &[f64]| 1.0),
        potential: FieldFn::new(domain.clone(), move |p: &[f64]| {
            let mut a = Form::zero(6, 1);
            a.set_sorted(&[2], c * p[1]);
            a.set_sorted(&[5], c * p[4]);
            a
        }),
        alpha: Some(FieldFn::new(domain.clone(), move |_: &[f64]| {
            vec![c, 0.0, 0.0]
        })),
        connection_vector: Some(FieldFn::new(domain.clone(), |_: &[f64]| vec![0.0; 3])),
        split: SplitSpec::pair("plus", 3, "minus", 3),
    };
    let entry = GalleryEntry::new(
        "alpha-mismatch",
        "g2_build_thm2",
        &[
            ("k", "euclidean R^6"),
            ("v", "1"),
            ("alpha", "(0.1, 0, 0)"),
            ("base connection", "flat"),
        ],
        "weak monopole equations hold for an alpha the base connection does not carry",
    );
    let mut b = g2_build_thm2(
        &identity_metric(&domain),
        &mono,
        check_points,
        &entry.anchor,
    )?;
    b.provenance.inputs = entry.inputs.clone();
    Ok((entry, b))
}

/// Taub-NUT data fed through the weak builder with `α = 0` and a flat base connection.
pub fn taub_nut_weak(check_points: &[Vec<f64>]) -> Result<(GalleryEntry, G2MetricBundle)> {
    let (k, mut mono) = taub_nut_monopole();
    let domain = product_base_domain();
    mono.split = SplitSpec::pair("plus", 3, "minus", 3);
    mono.alpha = Some(FieldFn::new(domain.clone(), |_: &[f64]| vec![0.0; 3]));
    mono.connection_vector = Some(FieldFn::new(domain, |_: &[f64]| vec![0.0; 3]));
    let entry = GalleryEntry::new(
        "taub-nut-weak",
        "g2_build_thm2",
        &[
            ("k", "euclidean R^3 x R^3"),
            ("v", "1 + 1/(2r)"),
            ("A", "Dirac potential, charge 1/2"),
            ("alpha", "0"),
        ],
        "weak monopole with vanishing alpha over a product base",
    );
    let mut b = g2_build_thm2(&k, &mono, check_points, &entry.anchor)?;
    b.provenance.inputs = entry.inputs.clone();
    Ok((entry, b))
}

/// A diagonal metric `Σ e^{f_i} dx_i²` on `R^7` with random quadratic `f_i`,
/// with the coframe `e^{f_i/2} dx_i`.
pub fn random_warped_bundle(seed: u64) -> Result<(GalleryEntry, G2MetricBundle)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<(Vec<f64>, Vec<f64>)> = (0..7)
        .map(|_| {
            let lin: Vec<f64> = (0..7).map(|_| rng.gen_range(-0.3..0.3)).collect();
            let quad: Vec<f64> = (0..7).map(|_| rng.gen_range(-0.3..0.3)).collect();
            (lin, quad)
        })
        .collect();
    let domain = Domain::boxed(vec![(-1.0, 1.0); 7]);
    let coframe = FieldFn::new(domain, move |p: &[f64]| {
        Matrix::from_fn(7, 7, |i, j| {
            if i != j {
                return 0.0;
            }
            let (lin, quad) = &coeffs[i];
            let f: f64 = p.iter().zip(lin).map(|(x, c)| c * x).sum::<f64>()
                + p.iter().zip(quad).map(|(x, c)| c * x * x).sum::<f64>();
            (0.5 * f).exp()
        })
    });
    let seed_s = seed.to_string();
    let entry = GalleryEntry::new(
        "random-warped",
        "from_coframe",
        &[
            ("metric", "diagonal, random quadratic exponents"),
            ("seed", &seed_s),
        ],
        "generic metric whose curvature is not confined to g2",
    );
    let prov = Provenance {
        builder: entry.builder.clone(),
        inputs: entry.inputs.clone(),
        anchor: entry.anchor.clone(),
        warnings: Vec::new(),
    };
    Ok((entry, G2MetricBundle::from_coframe(coframe, prov)?))
}

fn gh_entry(name: &str, v_desc: &str, a_desc: &str, anchor: &str) -> GalleryEntry {
    GalleryEntry::new(name, "gh_build", &[("V", v_desc), ("A", a_desc)], anchor)
}

/// `V = 1/(2r)`: flat `R^4`.
pub fn gh_flat_space() -> (GalleryEntry, GhData) {
    let d = gh_domain();
    (
        gh_entry(
            "gh-flat",
            "1/(2r)",
            "minus the Dirac potential, charge 1/2",
            "a single centre without constant term is flat",
        ),
        GhData {
            v: inverse_distance(d.clone(), 0.0, 0.5, [0, 1, 2]),
            potential: dirac_potential(d, -0.5, [0, 1, 2]),
        },
    )
}

/// `V = 1 + 1/(2r)`: Taub-NUT.
pub fn gh_taub_nut() -> (GalleryEntry, GhData) {
    let d = gh_domain();
    (
        gh_entry(
            "gh-taub-nut",
            "1 + 1/(2r)",
            "minus the Dirac potential, charge 1/2",
            "Taub-NUT is Ricci-flat",
        ),
        GhData {
            v: inverse_distance(d.clone(), 1.0, 0.5, [0, 1, 2]),
            potential: dirac_potential(d, -0.5, [0, 1, 2]),
        },
    )
}

/// `V = 1 + r²`, which is not harmonic, with `A = 0`.
pub fn gh_growth_control() -> (GalleryEntry, GhData) {
    let d = gh_domain();
    (
        gh_entry(
            "gh-growth",
            "1 + r^2",
            "0",
            "a non-harmonic potential gives Ricci curvature",
        ),
        GhData {
            v: FieldFn::new(d.clone(), |p: &[f64]| 1.0 + radial(p, [0, 1, 2]).powi(2)),
            potential: FieldFn::new(d, |_: &[f64]| Form::zero(3, 1)),
        },
    )
}

fn killing_from(potential_extra: f64) -> KillingData {
    let domain = product_base_domain();
    let v = inverse_distance(domain.clone(), 1.0, 0.5, MINUS);
    let u = v.map(|_, x| x.powf(-0.5));
    // d(v^{-1/2}) = -½ v^{-3/2} dv with dv = -m x / r³ on the second factor
    let grad_u = {
        let v = v.clone();
        move |p: &[f64]| -> [f64; 3] {
            let r = radial(p, MINUS);
            let vv = v.at(p);
            std::array::from_fn(|i| -0.5 * vv.powf(-1.5) * (-0.5 * p[MINUS[i]] / r.powi(3)))
        }
    };
    let frame = {
        let u = u.clone();
        FieldFn::new(domain.clone(), move |p: &[f64]| {
            let uu = u.at(p);
            Matrix::from_fn(6, 6, |i, j| match (i == j, i < 3) {
                (true, true) => 1.0,
                (true, false) => uu,
                _ => 0.0,
            })
        })
    };
    let b = {
        let g = grad_u.clone();
        FieldFn::new(domain.clone(), move |p: &[f64]| {
            g(p).map(|x| 0.5 * x).to_vec()
        })
    };
    let connection = {
        let u = u.clone();
        FieldFn::new(domain.clone(), move |p: &[f64]| {
            let uu = u.at(p);
            // frame components of grad u on the second block: u ∂u
            let gm: Vec<f64> = grad_u(p).iter().map(|x| uu * x).collect();
            (0..6)
                .map(|c| {
                    let mut x = [0.0; 3];
                    if c >= 3 {
                        x[c - 3] = 1.0;
                    }
                    let w = crate::lie::cross3(&[gm[0], gm[1], gm[2]], &x).map(|t| -0.5 * t / uu);
                    let blk = cross_matrix(&w);
                    let mut m = Matrix::zeros(6, 6);
                    m.set_block(0, 0, &blk);
                    m.set_block(3, 3, &blk);
                    m
                })
                .collect::<Vec<_>>()
        })
    };
    let base = dirac_potential(domain.clone(), 0.5, MINUS);
    let potential = base.map(move |p, mut a| {
        let cur = a.get(&[5]);
        a.set_sorted(&[5], cur + potential_extra * p[4]);
        a
    });
    KillingData {
        frame,
        u,
        potential,
        b,
        big_b: FieldFn::new(domain, |_: &[f64]| Matrix::zeros(3, 3)),
        split: SplitSpec::pair("plus", 3, "minus", 3),
        connection: Connection::FrameForm(connection),
    }
}

/// Base data of `R^3 ×` Taub-NUT viewed as a quotient by the circle: `u = v^{-1/2}`,
/// `b = ½u⁻¹ grad₋u`, `B = 0`.
pub fn killing_gallery() -> (GalleryEntry, KillingData) {
    (
        GalleryEntry::new(
            "killing-taub-nut",
            "killing_data",
            &[
                ("v", "1 + 1/(2r)"),
                ("u", "v^(-1/2)"),
                ("b", "grad u / (2u)"),
                ("B", "0"),
            ],
            "quotient data of R^3 times Taub-NUT by its circle action",
        ),
        killing_from(0.0),
    )
}

/// The same data with `0.1 x_5 dx_6` added to the potential.
pub fn perturbed_killing() -> (GalleryEntry, KillingData) {
    (
        GalleryEntry::new(
            "killing-perturbed",
            "killing_data",
            &[("v", "1 + 1/(2r)"), ("A", "Dirac potential + 0.1 x5 dx6")],
            "potential no longer matches the quotient data",
        ),
        killing_from(0.1),
    )
}

fn random_poly(rng: &mut ChaCha8Rng, scale: f64) -> [f64; 13] {
    std::array::from_fn(|_| rng.gen_range(-scale..scale))
}

/// `c_0 + Σ c_i x_i + Σ c_{6+i} x_i x_{i+1 mod 6}`.
fn eval_poly(c: &[f64; 13], p: &[f64]) -> f64 {
    let mut s = c[0];
    for i in 0..6 {
        s += c[1 + i] * p[i] + c[7 + i] * p[i] * p[(i + 1) % 6];
    }
    s
}

/// Random polynomial frame, connection, `γ`, `u` and `A` on a box in `R^6`.
pub fn random_rho_data(seed: u64) -> RhoData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let domain = Domain::boxed(vec![(-0.5, 0.5); 6]);
    let mut polys = |count: usize, scale: f64| -> Vec<[f64; 13]> {
        (0..count).map(|_| random_poly(&mut rng, scale)).collect()
    };
    let frame_c = polys(36, 0.2);
    let conn_c = polys(6 * 15, 0.5);
    let unit_c = polys(36, 0.5);
    let gamma_c = polys(36, 0.5);
    let gunit_c = polys(6, 0.5);
    let u_c = polys(1, 0.2);
    let a_c = polys(6, 0.5);
    let mat =
        move |c: &[[f64; 13]], p: &[f64]| Matrix::from_fn(6, 6, |i, j| eval_poly(&c[i * 6 + j], p));
    let dom = || domain.clone();
    RhoData {
        frame: FieldFn::new(dom(), move |p: &[f64]| {
            Matrix::identity(6).add(&mat(&frame_c, p)).expect("6x6")
        }),
        connection: FieldFn::new(dom(), move |p: &[f64]| {
            (0..6)
                .map(|c| {
                    let mut m = Matrix::zeros(6, 6);
                    let mut k = 0;
                    for i in 0..6 {
                        for j in (i + 1)..6 {
                            let x = eval_poly(&conn_c[c * 15 + k], p);
                            m[(i, j)] = x;
                            m[(j, i)] = -x;
                            k += 1;
                        }
                    }
                    m
                })
                .collect()
        }),
        unit_connection: FieldFn::new(dom(), move |p: &[f64]| mat(&unit_c, p)),
        gamma: FieldFn::new(dom(), move |p: &[f64]| mat(&gamma_c, p)),
        gamma_unit: FieldFn::new(dom(), move |p: &[f64]| {
            gunit_c.iter().map(|c| eval_poly(c, p)).collect()
        }),
        h: Arc::new(|v: &[f64]| Ok(h_map(&MVector::from_slice(v)?))),
        u: FieldFn::new(dom(), move |p: &[f64]| 1.0 + eval_poly(&u_c[0], p)),
        potential: FieldFn::new(dom(), move |p: &[f64]| {
            Form::from_components(6, 1, a_c.iter().map(|c| eval_poly(c, p)).collect())
                .expect("1-form")
        }),
    }
}

fn immersion(
    name: &str,
    domain: Domain,
    f: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
) -> Immersion {
    Immersion {
        name: name.into(),
        map: FieldFn::new(domain, f),
    }
}

/// `(x_1, x_2, x_3, 0, x_4, x_5, x_6)`.
pub fn hyperplane() -> (GalleryEntry, Immersion) {
    (
        GalleryEntry::new(
            "hyperplane",
            "immersion",
            &[("map", "(x1,x2,x3,0,x4,x5,x6)")],
            "a hyperplane is Kähler and totally geodesic",
        ),
        immersion(
            "hyperplane",
            Domain::boxed(vec![(-1.0, 1.0); 6]),
            |p: &[f64]| vec![p[0], p[1], p[2], 0.0, p[3], p[4], p[5]],
        ),
    )
}

/// Upper hemisphere `(x, √(1 - |x|²))` of the unit sphere.
pub fn round_sphere() -> (GalleryEntry, Immersion) {
    let domain = Domain::boxed(vec![(-0.5, 0.5); 6]).exclude(Exclusion::OutsideBall {
        slots: (0..6).collect(),
        radius: 1.0,
    });
    (
        GalleryEntry::new(
            "round-sphere",
            "immersion",
            &[("map", "(x, sqrt(1 - |x|^2))")],
            "the round 6-sphere is nearly Kähler, not Kähler",
        ),
        immersion("round-sphere", domain, |p: &[f64]| {
            let r2: f64 = p.iter().map(|x| x * x).sum();
            p.iter().copied().chain([(1.0 - r2).sqrt()]).collect()
        }),
    )
}

/// `(x, 2√(1 - |x|²))`, to be sampled with `0.4 ≤ |x| ≤ 0.8`.
pub fn squashed_ellipsoid() -> (GalleryEntry, Immersion) {
    let domain = Domain::boxed(vec![(-0.8, 0.8); 6])
        .exclude(Exclusion::OutsideBall {
            slots: (0..6).collect(),
            radius: 1.0,
        })
        .exclude(Exclusion::Point {
            slots: (0..6).collect(),
            center: vec![0.0; 6],
        });
    (
        GalleryEntry::new(
            "squashed-ellipsoid",
            "immersion",
            &[
                ("map", "(x, 2 sqrt(1 - |x|^2))"),
                ("sample", "0.4 <= |x| <= 0.8"),
            ],
            "an ellipsoid is neither nearly Kähler nor umbilic",
        ),
        immersion("squashed-ellipsoid", domain, |p: &[f64]| {
            let r2: f64 = p.iter().map(|x| x * x).sum();
            p.iter().copied().chain([2.0 * (1.0 - r2).sqrt()]).collect()
        }),
    )
}
