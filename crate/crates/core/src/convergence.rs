//! Empirical convergence orders from residuals at several step sizes.

use serde::Serialize;

use crate::error::{Error, Result};

/// Residuals at or below this are treated as exact zeros.
pub const EXACT_FLOOR: f64 = 1e-13;

/// Observed order of a residual under refinement of the step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Order {
    /// Every residual is at the floor: the quantity involves no truncation error.
    Exact(ExactMarker),
    Slope(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExactMarker {
    Exact,
}

impl Order {
    pub const EXACT: Order = Order::Exact(ExactMarker::Exact);

    pub fn is_exact(&self) -> bool {
        matches!(self, Order::Exact(_))
    }

    /// `true` for exact results and slopes of at least `min`.
    pub fn at_least(&self, min: f64) -> bool {
        match self {
            Order::Exact(_) => true,
            Order::Slope(s) => *s >= min,
        }
    }

    pub fn slope(&self) -> Option<f64> {
        match self {
            Order::Exact(_) => None,
            Order::Slope(s) => Some(*s),
        }
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Order::Exact(_) => write!(f, "exact"),
            Order::Slope(s) => write!(f, "{s:.3}"),
        }
    }
}

/// Least-squares slope of `log residual` against `log h`.
pub fn fit_order(hs: &[f64], residuals: &[f64], floor: f64) -> Result<Order> {
    if hs.len() != residuals.len() || hs.len() < 2 {
        return Err(Error::InvalidParameter(
            "need at least two (h, residual) pairs".into(),
        ));
    }
    if hs.iter().any(|h| !(*h > 0.0)) || residuals.iter().any(|r| !r.is_finite()) {
        return Err(Error::BadValue(
            "steps must be positive and residuals finite".into(),
        ));
    }
    if residuals.iter().all(|r| r.abs() <= floor) {
        return Ok(Order::EXACT);
    }
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = residuals
        .iter()
        .map(|r| r.abs().max(f64::MIN_POSITIVE).ln())
        .collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(Order::Slope(sxy / sxx))
}

/// Evaluate `residual` at each step and fit the order.
pub fn study(
    hs: &[f64],
    floor: f64,
    residual: impl Fn(f64) -> Result<f64>,
) -> Result<(Vec<f64>, Order)> {
    let values: Vec<f64> = hs.iter().map(|&h| residual(h)).collect::<Result<_>>()?;
    let order = fit_order(hs, &values, floor)?;
    Ok((values, order))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_power_laws() {
        let hs = [0.1, 0.05, 0.025];
        let r: Vec<f64> = hs.iter().map(|h: &f64| 3.0 * h.powi(2)).collect();
        let o = fit_order(&hs, &r, EXACT_FLOOR).unwrap();
        assert!((o.slope().unwrap() - 2.0).abs() < 1e-12);
        assert!(fit_order(&hs, &[0.0, 1e-16, 0.0], EXACT_FLOOR)
            .unwrap()
            .is_exact());
        assert_eq!(serde_json::to_string(&Order::EXACT).unwrap(), "\"exact\"");
        assert!(fit_order(&[0.1], &[1.0], EXACT_FLOOR).is_err());
    }
}
