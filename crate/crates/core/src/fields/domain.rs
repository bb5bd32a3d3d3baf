use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// A set removed from the smooth domain of a field.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Exclusion {
    /// A single point in the coordinates `slots`.
    Point { slots: Vec<usize>, center: Vec<f64> },
    /// `{x = y = 0, z ≤ 0}` in the coordinates `slots`.
    DiracString { slots: [usize; 3] },
    /// Everything outside the open ball of `radius` about the origin of `slots`.
    OutsideBall { slots: Vec<usize>, radius: f64 },
}

impl Exclusion {
    pub fn distance(&self, p: &[f64]) -> f64 {
        match self {
            Exclusion::Point { slots, center } => slots
                .iter()
                .zip(center)
                .map(|(&s, c)| (p[s] - c).powi(2))
                .sum::<f64>()
                .sqrt(),
            Exclusion::DiracString { slots } => {
                let [x, y, z] = slots.map(|s| p[s]);
                let rho = x.hypot(y);
                if z <= 0.0 {
                    rho
                } else {
                    (rho * rho + z * z).sqrt()
                }
            }
            Exclusion::OutsideBall { slots, radius } => {
                radius - slots.iter().map(|&s| p[s] * p[s]).sum::<f64>().sqrt()
            }
        }
    }
}

/// Smooth domain `R^n` minus exclusions, with an optional sampling box.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Domain {
    dim: usize,
    bounds: Option<Vec<(f64, f64)>>,
    exclusions: Vec<Exclusion>,
}

impl Domain {
    pub fn whole(dim: usize) -> Self {
        Self {
            dim,
            bounds: None,
            exclusions: Vec::new(),
        }
    }

    pub fn boxed(bounds: Vec<(f64, f64)>) -> Self {
        Self {
            dim: bounds.len(),
            bounds: Some(bounds),
            exclusions: Vec::new(),
        }
    }

    pub fn exclude(mut self, e: Exclusion) -> Self {
        self.exclusions.push(e);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Re-express in a larger coordinate system where old slot `i` becomes
    /// `slot_map[i]`; new slots get the sampling bounds in `extra`.
    pub fn lift(&self, slot_map: &[usize], new_dim: usize, extra: &[(usize, (f64, f64))]) -> Self {
        let remap = |s: &usize| slot_map[*s];
        let exclusions = self
            .exclusions
            .iter()
            .map(|e| match e {
                Exclusion::Point { slots, center } => Exclusion::Point {
                    slots: slots.iter().map(remap).collect(),
                    center: center.clone(),
                },
                Exclusion::DiracString { slots } => Exclusion::DiracString {
                    slots: slots.map(|s| slot_map[s]),
                },
                Exclusion::OutsideBall { slots, radius } => Exclusion::OutsideBall {
                    slots: slots.iter().map(remap).collect(),
                    radius: *radius,
                },
            })
            .collect();
        let bounds = self.bounds.as_ref().map(|b| {
            let mut nb = vec![(0.0, 0.0); new_dim];
            for (i, r) in b.iter().enumerate() {
                nb[slot_map[i]] = *r;
            }
            for &(s, r) in extra {
                nb[s] = r;
            }
            nb
        });
        Self {
            dim: new_dim,
            bounds,
            exclusions,
        }
    }

    pub fn bounds(&self) -> Option<&[(f64, f64)]> {
        self.bounds.as_deref()
    }

    pub fn exclusions(&self) -> &[Exclusion] {
        &self.exclusions
    }

    /// Distance from `p` to the nearest excluded set (infinite when there is none).
    pub fn clearance(&self, p: &[f64]) -> f64 {
        self.exclusions
            .iter()
            .map(|e| e.distance(p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Error unless every point within `reach` of `p` is smooth.
    pub fn require<R: Real>(&self, p: &[R], reach: f64) -> Result<()> {
        let q: Vec<f64> = p.iter().map(crate::scalar::Scalar::to_f64).collect();
        if q.iter().any(|x| !x.is_finite()) {
            return Err(Error::BadValue("non-finite coordinate".into()));
        }
        let clearance = self.clearance(&q);
        if clearance <= reach {
            return Err(Error::OutsideDomain {
                point: q,
                clearance,
                reach,
            });
        }
        Ok(())
    }
}

/// `count` seeded uniform points in the sampling box with clearance at least `min_clearance`.
pub fn sample_points(
    domain: &Domain,
    count: usize,
    seed: u64,
    min_clearance: f64,
) -> Result<Vec<Vec<f64>>> {
    let bounds = domain
        .bounds()
        .ok_or_else(|| Error::InvalidParameter("sampling requires a bounded box".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        if attempts > 1000 * count.max(1) {
            return Err(Error::InvalidParameter(
                "sampling box is almost entirely excluded".into(),
            ));
        }
        let p: Vec<f64> = bounds
            .iter()
            .map(|&(lo, hi)| rng.gen_range(lo..hi))
            .collect();
        if domain.clearance(&p) >= min_clearance {
            out.push(p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirac_string_distance() {
        let e = Exclusion::DiracString { slots: [0, 1, 2] };
        assert_eq!(e.distance(&[3.0, 4.0, -1.0]), 5.0);
        assert_eq!(e.distance(&[0.0, 3.0, 4.0]), 5.0);
    }

    #[test]
    fn sampler_is_seeded_and_respects_clearance() {
        let d = Domain::boxed(vec![(-1.0, 1.0); 3]).exclude(Exclusion::Point {
            slots: vec![0, 1, 2],
            center: vec![0.0; 3],
        });
        let a = sample_points(&d, 50, 7, 0.3).unwrap();
        let b = sample_points(&d, 50, 7, 0.3).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|p| d.clearance(p) >= 0.3));
        assert!(d.require(&[0.0f64, 0.0, 0.1], 0.2).is_err());
    }
}
