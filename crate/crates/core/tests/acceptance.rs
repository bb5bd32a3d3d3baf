//! One test per acceptance criterion. Each prints a single PASS/FAIL line
//! (visible with `--nocapture`) before asserting.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use g2kit::constructions::{hypersurface_checks, round_sphere};
use g2kit::convergence::Order;
use g2kit::fields::StencilConfig;
use g2kit::report::{
    run_suite, s6_reference_points, to_json_lines, CheckReport, RunConfig, Status, S6_KAHLER_DELTA,
    S6_REFERENCE_COUNT, S6_REFERENCE_SEED,
};
use serde_json::Value;

struct Criterion {
    number: u8,
    title: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(number: u8, title: &'static str) -> Self {
        Self {
            number,
            title,
            failures: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn finish(self) {
        let verdict = if self.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!("criterion {}: {verdict}  {}", self.number, self.title);
        for f in &self.failures {
            println!("    {f}");
        }
        assert!(
            self.failures.is_empty(),
            "criterion {} failed: {:?}",
            self.number,
            self.failures
        );
    }
}

fn suite(name: &str, samples: usize) -> (BTreeMap<String, CheckReport>, i32, Duration) {
    let start = Instant::now();
    let (reports, code) = run_suite(
        name,
        RunConfig {
            seed: 42,
            samples,
            h: None,
        },
    )
    .unwrap();
    let elapsed = start.elapsed();
    (
        reports
            .into_iter()
            .map(|r| (r.check_id.clone(), r))
            .collect(),
        code,
        elapsed,
    )
}

fn passes(c: &mut Criterion, reports: &BTreeMap<String, CheckReport>, id: &str, tolerance: f64) {
    let Some(r) = reports.get(id) else {
        c.require(false, format!("{id} missing"));
        return;
    };
    c.require(
        r.status == Status::Pass,
        format!("{id}: status {} residuals {:?}", r.status, r.residuals),
    );
    c.require(
        r.tolerance == tolerance,
        format!("{id}: tolerance {} instead of {tolerance}", r.tolerance),
    );
    c.require(
        r.residuals.values().all(|v| v.abs() <= tolerance),
        format!("{id}: residuals {:?}", r.residuals),
    );
}

fn control(c: &mut Criterion, reports: &BTreeMap<String, CheckReport>, id: &str, floor: f64) {
    let Some(r) = reports.get(id) else {
        c.require(false, format!("{id} missing"));
        return;
    };
    c.require(
        r.expected == Status::Fail && r.status == Status::Fail,
        format!("{id}: status {}", r.status),
    );
    c.require(
        r.tolerance == floor,
        format!("{id}: floor {} instead of {floor}", r.tolerance),
    );
    c.require(
        r.residuals.values().all(|v| *v >= floor),
        format!("{id}: residuals {:?} below {floor}", r.residuals),
    );
}

fn order_in(
    c: &mut Criterion,
    reports: &BTreeMap<String, CheckReport>,
    id: &str,
    lo: f64,
    hi: f64,
) {
    let Some(r) = reports.get(id) else {
        c.require(false, format!("{id} missing"));
        return;
    };
    let ok = match r.order_estimate {
        Some(Order::Slope(s)) => s >= lo && s <= hi,
        Some(o) => o.is_exact() && hi.is_infinite(),
        None => false,
    };
    c.require(
        ok,
        format!("{id}: order {:?} outside [{lo}, {hi}]", r.order_estimate),
    );
}

fn within(c: &mut Criterion, elapsed: Duration, limit_s: u64) {
    c.require(
        elapsed <= Duration::from_secs(limit_s),
        format!("took {elapsed:?}, limit {limit_s} s"),
    );
}

#[test]
fn criterion_1_exact_algebra() {
    let mut c = Criterion::new(1, "exact algebra: g2 span, closure, reductivity, orthogonality, equivariance, intertwiner, scales");
    let (r, _, elapsed) = suite("algebra", 1);
    for id in [
        "algebra.g2-span",
        "algebra.reductive",
        "algebra.trace-orthogonal",
        "algebra.equivariance",
        "algebra.intertwiner",
        "algebra.embedding-scales",
    ] {
        passes(&mut c, &r, id, 0.0);
    }
    if let Some(span) = r.get("algebra.g2-span") {
        c.require(span.params["span_dim"] == 14, "span dimension is not 14");
    }
    if let Some(inter) = r.get("algebra.intertwiner") {
        c.require(
            inter.params.contains_key("intertwiner"),
            "no invertible intertwiner emitted",
        );
    }
    if let Some(scales) = r.get("algebra.embedding-scales") {
        let ratios = scales.params["m_embed_over_h_map"]
            .as_array()
            .cloned()
            .unwrap_or_default();
        c.require(
            ratios.len() == 6,
            format!("{} scale factors emitted", ratios.len()),
        );
        c.require(
            ratios.windows(2).all(|w| w[0] == w[1]),
            "scale factors differ across the basis",
        );
        c.require(
            ratios.first().is_some_and(|v| v["num"] != "0"),
            "scale factor is zero",
        );
    }
    within(&mut c, elapsed, 5);
    c.finish();
}

#[test]
fn criterion_2_so8() {
    let mut c = Criterion::new(
        2,
        "so(8): Clifford relations, sum 28, intersection 14 equal to g2",
    );
    let (r, _, elapsed) = suite("algebra", 1);
    passes(&mut c, &r, "algebra.clifford", 0.0);
    passes(&mut c, &r, "algebra.so8-intersection", 0.0);
    if let Some(so8) = r.get("algebra.so8-intersection") {
        let rep = &so8.params["report"];
        c.require(
            rep["sum_dim"] == 28 && rep["intersection_dim"] == 14,
            format!("dimensions {rep}"),
        );
        c.require(
            rep["intersection_is_g2"] == true,
            "intersection differs from g2",
        );
    }
    within(&mut c, elapsed, 5);
    c.finish();
}

#[test]
fn criterion_3_octonions() {
    let mut c = Criterion::new(
        3,
        "octonions: unique invariant form, stabilizer, torsion product, normed alternative table",
    );
    let (r, code, elapsed) = suite("octonion", 1);
    c.require(code == 0, format!("exit code {code}"));
    for id in [
        "octonion.invariant-form",
        "octonion.torsion-cross",
        "octonion.algebra",
        "octonion.cross-product",
    ] {
        passes(&mut c, &r, id, 0.0);
    }
    if let Some(t) = r.get("octonion.torsion-cross") {
        c.require(
            t.params["lambda"]["num"] != "0",
            "torsion product constant is zero",
        );
    }
    within(&mut c, elapsed, 10);
    c.finish();
}

#[test]
fn criterion_4_gibbons_hawking() {
    let mut c = Criterion::new(4, "Gibbons-Hawking: flat and Taub-NUT converge quadratically, growth control is not Ricci-flat");
    let (r, code, elapsed) = suite("gh", 100);
    c.require(code == 0, format!("exit code {code}"));
    order_in(&mut c, &r, "gh.flat-riemann", 1.8, 2.2);
    order_in(&mut c, &r, "gh.taub-nut-ricci", 1.8, 2.2);
    passes(&mut c, &r, "gh.taub-nut-riemann-floor", 0.0);
    if let Some(f) = r.get("gh.taub-nut-riemann-floor") {
        c.require(
            f.params["min_riemann"].as_f64().is_some_and(|m| m >= 0.01),
            "Riemann norm below 0.01",
        );
    }
    control(&mut c, &r, "gh.growth-ricci", 0.01);
    if let Some(g) = r.get("gh.growth-ricci") {
        c.require(
            g.params["h"] == 5e-3,
            "growth control not evaluated at h = 5e-3",
        );
    }
    within(&mut c, elapsed, 60);
    c.finish();
}

#[test]
fn criterion_5_g2_constructions() {
    let mut c = Criterion::new(5, "G2 constructions: flat exact, R^3 x Taub-NUT converges, broken monopole does not, builders agree");
    let start = Instant::now();
    let (strong, code1, _) = suite("g2-thm1", 100);
    let (weak, code2, _) = suite("g2-thm2", 100);
    let (controls, code3, _) = suite("negative-controls", 100);
    let elapsed = start.elapsed();
    c.require(
        code1 == 0 && code2 == 0 && code3 == 0,
        format!("exit codes {code1} {code2} {code3}"),
    );
    passes(&mut c, &strong, "g2.flat", 1e-10);
    for id in [
        "g2.taub-nut-dphi",
        "g2.taub-nut-dstarphi",
        "g2.taub-nut-ricci",
        "g2.taub-nut-holonomy",
    ] {
        order_in(&mut c, &strong, id, 1.8, f64::INFINITY);
    }
    control(&mut c, &controls, "control.broken-monopole", 0.01);
    order_in(
        &mut c,
        &controls,
        "control.broken-monopole-order",
        -0.2,
        0.2,
    );
    passes(&mut c, &weak, "g2w.matches-strong", 1e-12);
    within(&mut c, elapsed, 120);
    c.finish();
}

#[test]
fn criterion_6_hypersurfaces() {
    let mut c = Criterion::new(
        6,
        "hypersurfaces: hyperplane Kähler, S^6 nearly Kähler but not Kähler, ellipsoid fails both",
    );
    let fixture: Value = serde_json::from_str(include_str!("fixtures/s6_kahler_oracle.json"))
        .expect("fixture parses");
    c.require(
        fixture["delta"].as_f64() == Some(S6_KAHLER_DELTA),
        "δ differs from the fixture",
    );
    c.require(
        fixture["reference_seed"] == S6_REFERENCE_SEED,
        "reference seed differs from the fixture",
    );
    c.require(
        fixture["reference_count"] == S6_REFERENCE_COUNT,
        "reference count differs from the fixture",
    );
    // the oracle run that fixed δ is reproducible
    let (_, sphere) = round_sphere();
    let oracle = StencilConfig::new(1e-4, 2, true).unwrap();
    let sup = hypersurface_checks(&sphere, &s6_reference_points().unwrap(), &oracle)
        .unwrap()
        .kahler;
    let recorded = fixture["oracle_kahler_sup"].as_f64().unwrap_or(f64::NAN);
    c.require(
        (sup - recorded).abs() <= 1e-9,
        format!("oracle gives {sup}, fixture {recorded}"),
    );
    c.require(
        S6_KAHLER_DELTA == (0.9 * recorded * 100.0).floor() / 100.0,
        "δ does not follow its rule",
    );

    let (r, code, elapsed) = suite("hypersurface", 200);
    c.require(code == 0, format!("exit code {code}"));
    passes(&mut c, &r, "hyp.hyperplane", 1e-8);
    passes(&mut c, &r, "hyp.sphere", 1e-5);
    control(&mut c, &r, "hyp.ellipsoid", 0.01);
    if let Some(e) = r.get("hyp.ellipsoid") {
        for key in ["umbilic", "nearly_kahler"] {
            c.require(
                e.params[key].as_f64().is_some_and(|v| v >= 0.01),
                format!("ellipsoid {key} below 0.01"),
            );
        }
    }
    within(&mut c, elapsed, 30);
    c.finish();
}

#[test]
fn criterion_7_oracle_pairs() {
    let mut c = Criterion::new(
        7,
        "oracle pairs agree within 10x truncation at 200 samples with order >= 1.9",
    );
    let (r, code, elapsed) = suite("oracles", 200);
    c.require(code == 0, format!("exit code {code}"));
    passes(&mut c, &r, "oracle.rho-torsion", 0.0);
    passes(&mut c, &r, "oracle.curvature-pair", 0.0);
    passes(&mut c, &r, "oracle.gamma", 1e-10);
    for id in [
        "oracle.rho-torsion",
        "oracle.curvature-pair",
        "oracle.gamma",
    ] {
        order_in(&mut c, &r, id, 1.9, f64::INFINITY);
    }
    within(&mut c, elapsed, 30);
    c.finish();
}

#[test]
fn criterion_8_determinism() {
    let mut c = Criterion::new(8, "two runs with seed 42 give byte-identical JSON Lines");
    let run = || {
        let (reports, _) = run_suite("all", RunConfig::default()).unwrap();
        to_json_lines(&reports).unwrap()
    };
    let first = run();
    let second = run();
    c.require(!first.is_empty(), "empty output");
    c.require(first == second, "outputs differ");
    c.require(
        first.lines().count() == first.lines().filter(|l| l.contains("\"seed\":42")).count(),
        "seed not recorded",
    );
    c.finish();
}
