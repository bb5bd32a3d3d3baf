//! Check reports, suite manifests and the suite runner behind the command line.

mod algebra;
mod geometry;

pub use geometry::{s6_reference_points, S6_KAHLER_DELTA, S6_REFERENCE_COUNT, S6_REFERENCE_SEED};

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::convergence::{study, Order, EXACT_FLOOR};
use crate::error::{Error, Result};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Warn,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Warn => "warn",
        })
    }
}

/// Outcome of one check. `status` is `pass` iff every residual is at most
/// `tolerance` and the order estimate, when banded, lies in its band. Controls
/// declare `expected = fail`.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check_id: String,
    pub params: BTreeMap<String, Value>,
    pub status: Status,
    pub expected: Status,
    pub residuals: BTreeMap<String, f64>,
    pub order_estimate: Option<Order>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order_band: Option<(f64, f64)>,
    pub tolerance: f64,
    pub seed: u64,
    /// Wall time; left out of the JSON so reports stay byte-stable.
    #[serde(skip)]
    pub runtime_ms: u128,
    #[serde(skip)]
    pub samples: Vec<Vec<f64>>,
}

impl CheckReport {
    pub fn as_expected(&self) -> bool {
        match self.expected {
            Status::Fail => self.status == Status::Fail,
            _ => self.status != Status::Fail,
        }
    }
}

/// A check under construction.
#[derive(Clone, Debug, Default)]
pub(crate) struct Draft {
    params: BTreeMap<String, Value>,
    residuals: BTreeMap<String, f64>,
    order: Option<Order>,
    band: Option<(f64, f64)>,
    tolerance: f64,
    expect_fail: bool,
    warnings: Vec<String>,
    samples: Vec<Vec<f64>>,
}

impl Draft {
    pub fn new(tolerance: f64) -> Self {
        Self {
            tolerance,
            ..Self::default()
        }
    }

    pub fn control(mut self) -> Self {
        self.expect_fail = true;
        self
    }

    pub fn param(mut self, key: &str, v: impl Serialize) -> Self {
        self.params
            .insert(key.into(), serde_json::to_value(v).unwrap_or(Value::Null));
        self
    }

    pub fn residual(mut self, key: &str, v: f64) -> Self {
        self.residuals.insert(key.into(), v);
        self
    }

    pub fn order(mut self, order: Order, band: (f64, f64)) -> Self {
        self.order = Some(order);
        self.band = Some(band);
        self
    }

    pub fn warn(mut self, msg: impl Into<String>) -> Self {
        self.warnings.push(msg.into());
        self
    }

    pub fn samples(mut self, s: Vec<Vec<f64>>) -> Self {
        self.samples = s;
        self
    }

    /// Residuals of a convergence study, recorded per step, with the fitted order.
    pub fn study(mut self, hs: &[f64], values: &[f64], order: Order, band: (f64, f64)) -> Self {
        let by_h: BTreeMap<String, f64> = hs
            .iter()
            .zip(values)
            .map(|(h, v)| (format!("{h:e}"), *v))
            .collect();
        self.params.insert(
            "residual_by_h".into(),
            serde_json::to_value(by_h).unwrap_or(Value::Null),
        );
        self.order(order, band)
    }

    fn finish(self, id: &str, seed: u64, elapsed: u128) -> CheckReport {
        let within = self.residuals.values().all(|r| r.abs() <= self.tolerance);
        let in_band = match (self.order, self.band) {
            (Some(Order::Slope(s)), Some((lo, hi))) => s >= lo && s <= hi,
            (Some(o), Some((_, hi))) if o.is_exact() => hi.is_infinite(),
            _ => true,
        };
        let status = if !(within && in_band) {
            Status::Fail
        } else if self.warnings.is_empty() {
            Status::Pass
        } else {
            Status::Warn
        };
        let mut params = self.params;
        if !self.warnings.is_empty() {
            params.insert(
                "warnings".into(),
                serde_json::to_value(&self.warnings).unwrap_or(Value::Null),
            );
        }
        CheckReport {
            check_id: id.into(),
            params,
            status,
            expected: if self.expect_fail {
                Status::Fail
            } else {
                Status::Pass
            },
            residuals: self.residuals,
            order_estimate: self.order,
            order_band: self
                .band
                .map(|(lo, hi)| (lo, if hi.is_infinite() { f64::MAX } else { hi })),
            tolerance: self.tolerance,
            seed,
            runtime_ms: elapsed,
            samples: self.samples,
        }
    }
}

/// Exact rational as `{"num": "...", "den": "..."}`.
pub fn exact_value(r: &Rational) -> Value {
    serde_json::json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

/// Parse the display form `p` or `p/q` of a rational into [`exact_value`] form.
pub(crate) fn exact_from_display(s: &str) -> Value {
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    serde_json::json!({ "num": num, "den": den })
}

/// Settings shared by every check of a run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: usize,
    /// Overrides the first-derivative step and the ladder `2h, h, h/2` built on it.
    /// Curvature ladders are fixed.
    pub h: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            samples: 200,
            h: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidParameter(
                "at least one sample is required".into(),
            ));
        }
        if let Some(h) = self.h {
            if !(h > 0.0 && h < 0.1) {
                return Err(Error::InvalidParameter(format!(
                    "step {h} outside (0, 0.1)"
                )));
            }
        }
        Ok(())
    }

    /// `h` for first-derivative checks.
    pub(crate) fn first_h(&self) -> f64 {
        self.h.unwrap_or(1e-3)
    }

    /// `2h, h, h/2` around the first-derivative step.
    pub(crate) fn ladder(&self) -> [f64; 3] {
        let h = self.first_h();
        [2.0 * h, h, 0.5 * h]
    }
}

type CheckFn = fn(&RunConfig) -> Result<Draft>;

/// A registered check.
#[derive(Clone, Copy)]
pub struct CheckDef {
    pub id: &'static str,
    pub description: &'static str,
    run: CheckFn,
}

impl std::fmt::Debug for CheckDef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CheckDef").field("id", &self.id).finish()
    }
}

pub(crate) const fn check(id: &'static str, description: &'static str, run: CheckFn) -> CheckDef {
    CheckDef {
        id,
        description,
        run,
    }
}

/// A named, ordered list of checks and the settings they run with.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteManifest {
    pub name: String,
    pub checks: Vec<String>,
    pub config: RunConfig,
    #[serde(skip)]
    defs: Vec<CheckDef>,
}

pub const SUITES: [&str; 9] = [
    "algebra",
    "octonion",
    "gh",
    "g2-thm1",
    "g2-thm2",
    "hypersurface",
    "oracles",
    "negative-controls",
    "all",
];

fn suite_defs(name: &str) -> Option<Vec<CheckDef>> {
    Some(match name {
        "algebra" => algebra::ALGEBRA.to_vec(),
        "octonion" => algebra::OCTONION.to_vec(),
        "gh" => geometry::GH.to_vec(),
        "g2-thm1" => geometry::G2_THM1.to_vec(),
        "g2-thm2" => geometry::G2_THM2.to_vec(),
        "hypersurface" => geometry::HYPERSURFACE.to_vec(),
        "oracles" => geometry::ORACLES.to_vec(),
        "negative-controls" => geometry::CONTROLS.to_vec(),
        "all" => SUITES[..SUITES.len() - 1]
            .iter()
            .flat_map(|s| suite_defs(s).unwrap_or_default())
            .collect(),
        _ => return None,
    })
}

impl SuiteManifest {
    pub fn new(name: &str, config: RunConfig) -> Result<Self> {
        config.validate()?;
        let defs = suite_defs(name).ok_or_else(|| Error::UnknownSuite(name.into()))?;
        let mut seen = std::collections::BTreeSet::new();
        for d in &defs {
            if !seen.insert(d.id) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate check id {}",
                    d.id
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            checks: defs.iter().map(|d| d.id.to_string()).collect(),
            config,
            defs,
        })
    }

    pub fn descriptions(&self) -> Vec<(&'static str, &'static str)> {
        self.defs.iter().map(|d| (d.id, d.description)).collect()
    }

    /// Run every check in manifest order. A check that errors is reported as a failure.
    pub fn run(&self) -> Vec<CheckReport> {
        self.defs
            .iter()
            .map(|d| {
                let start = Instant::now();
                let draft = (d.run)(&self.config).unwrap_or_else(|e| {
                    Draft::new(0.0)
                        .param("error", e.to_string())
                        .residual("error", f64::INFINITY)
                });
                draft.finish(d.id, self.config.seed, start.elapsed().as_millis())
            })
            .collect()
    }
}

/// Exit status for a finished suite: 0 when every check came out as expected, else 1.
pub fn exit_code(reports: &[CheckReport]) -> i32 {
    if reports.iter().all(CheckReport::as_expected) {
        0
    } else {
        1
    }
}

/// Run a registered suite. Unknown names are an error (exit status 2 at the command line).
pub fn run_suite(name: &str, config: RunConfig) -> Result<(Vec<CheckReport>, i32)> {
    let manifest = SuiteManifest::new(name, config)?;
    let reports = manifest.run();
    let code = exit_code(&reports);
    Ok((reports, code))
}

/// Least-squares order of `residual` over `hs` (at least three steps).
pub fn convergence_study(
    hs: &[f64],
    residual: impl Fn(f64) -> Result<f64>,
) -> Result<(Vec<f64>, Order)> {
    if hs.len() < 3 {
        return Err(Error::InvalidParameter(
            "a convergence study needs at least three steps".into(),
        ));
    }
    study(hs, EXACT_FLOOR, residual)
}

/// One JSON line per report.
pub fn to_json_lines(reports: &[CheckReport]) -> Result<String> {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r).map_err(|e| Error::BadValue(e.to_string()))?);
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_residuals_and_band() {
        let r = Draft::new(1e-3).residual("a", 1e-4).finish("x", 1, 0);
        assert_eq!(r.status, Status::Pass);
        let r = Draft::new(1e-3).residual("a", 1e-2).finish("x", 1, 0);
        assert_eq!(r.status, Status::Fail);
        let r = Draft::new(1.0)
            .order(Order::Slope(1.5), (1.8, 2.2))
            .finish("x", 1, 0);
        assert_eq!(r.status, Status::Fail);
        let r = Draft::new(1.0)
            .order(Order::EXACT, (1.8, f64::INFINITY))
            .finish("x", 1, 0);
        assert_eq!(r.status, Status::Pass);
        let r = Draft::new(0.01)
            .control()
            .residual("a", 0.5)
            .finish("x", 1, 0);
        assert!(r.as_expected() && r.status == Status::Fail);
        let r = Draft::new(1.0).warn("w").finish("x", 1, 0);
        assert_eq!(r.status, Status::Warn);
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(
            run_suite("nope", RunConfig::default()),
            Err(Error::UnknownSuite(_))
        ));
        assert!(SuiteManifest::new("all", RunConfig::default()).is_ok());
    }

    #[test]
    fn exact_values_serialise_as_fractions() {
        let r = Rational::new((-3).into(), 4.into());
        assert_eq!(exact_value(&r).to_string(), r#"{"den":"4","num":"-3"}"#);
        assert_eq!(exact_from_display("-3/4"), exact_value(&r));
        assert_eq!(exact_from_display("5")["den"], "1");
    }

    #[test]
    fn short_ladders_are_rejected() {
        assert!(convergence_study(&[0.1, 0.05], |h| Ok(h * h)).is_err());
        let (_, o) = convergence_study(&[0.1, 0.05, 0.025], |h| Ok(h * h)).unwrap();
        assert!((o.slope().unwrap() - 2.0).abs() < 1e-12);
    }
}
