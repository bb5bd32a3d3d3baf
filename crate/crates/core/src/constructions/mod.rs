//! Builders and verification routines for the geometric constructions:
//! Killing reductions, Gibbons–Hawking metrics, G2 metrics on circle bundles
//! over monopole data, and hypersurfaces of R^7.
//!
//! Everything here is numerical and works over `f64`.

mod bundle;
mod gallery;
mod gh;
mod hypersurface;
mod killing;
mod potentials;
mod rho;

pub use bundle::{
    g2_build_thm1, g2_build_thm2, holonomy_residual, monopole_residual, sign_audit,
    torsionfree_residual, weak_monopole_residual, G2MetricBundle, HolonomyResidual, MonopoleData,
    MonopoleResidual, Provenance, SignAuditRow, TorsionResidual, WeakMonopoleResidual,
};
pub use gallery::{
    alpha_mismatch, broken_monopole, flat_bundle, flat_monopole, gh_flat_space, gh_growth_control,
    gh_taub_nut, hyperplane, killing_gallery, perturbed_killing, product_base_domain,
    random_rho_data, random_warped_bundle, round_sphere, squashed_ellipsoid, taub_nut_bundle,
    taub_nut_monopole, taub_nut_weak, GalleryEntry,
};
pub use gh::{gh_build, gh_residual, GhData, GhResidual};
pub use hypersurface::{hypersurface_checks, HypersurfaceReport, Immersion};
pub use killing::{
    da_conditions_check, da_pair, gamma_at, gamma_field, gamma_pair_at, gamma_unexpanded_at,
    killing_conditions_check, Connection, DaConditions, KillingData, KillingResiduals,
};
pub use potentials::{dirac_potential, inverse_distance, radial};
pub use rho::{rho_torsion_check, rho_torsion_pair, RhoData};

use rayon::prelude::*;

use crate::error::Result;
use crate::linalg::Matrix;

/// Largest value of `f` over `points`, evaluated in parallel; also returns the per-point values
/// in input order.
pub fn sup_over(
    points: &[Vec<f64>],
    f: impl Fn(&[f64]) -> Result<f64> + Sync,
) -> Result<(f64, Vec<f64>)> {
    let values: Vec<f64> = points.par_iter().map(|p| f(p)).collect::<Result<_>>()?;
    let sup = values.iter().copied().fold(0.0, f64::max);
    Ok((sup, values))
}

pub(crate) fn vec_max_abs(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

pub(crate) fn column(m: &Matrix<f64>, j: usize) -> Vec<f64> {
    (0..m.rows()).map(|i| m[(i, j)]).collect()
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

pub(crate) fn sub(x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

pub(crate) fn three(v: &[f64]) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

/// Lower-triangular `L` with `L Lᵀ = m`, or `None` if `m` is not positive definite.
pub(crate) fn cholesky(m: &Matrix<f64>) -> Option<Matrix<f64>> {
    let n = m.rows();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let d = m[(j, j)] - (0..j).map(|k| l[(j, k)] * l[(j, k)]).sum::<f64>();
        if !(d > 0.0) {
            return None;
        }
        l[(j, j)] = d.sqrt();
        for i in (j + 1)..n {
            let s = m[(i, j)] - (0..j).map(|k| l[(i, k)] * l[(j, k)]).sum::<f64>();
            l[(i, j)] = s / l[(j, j)];
        }
    }
    Some(l)
}

/// Orthogonal projection of `m` off the span of `basis`, with respect to the Frobenius
/// product. Returns `(|off-part|, |m|)`.
pub(crate) fn split_off(basis: &[Matrix<f64>], m: &Matrix<f64>) -> Result<(f64, f64)> {
    let k = basis.len();
    let gram = Matrix::from_fn(k, k, |i, j| dot(basis[i].as_slice(), basis[j].as_slice()));
    let rhs: Vec<f64> = basis
        .iter()
        .map(|b| dot(b.as_slice(), m.as_slice()))
        .collect();
    let coeffs = crate::linalg::inverse(&gram)?.mul_vec(&rhs)?;
    let mut off = m.clone();
    for (c, b) in coeffs.iter().zip(basis) {
        off = off.sub(&b.scale(c))?;
    }
    let norm = |x: &Matrix<f64>| dot(x.as_slice(), x.as_slice()).sqrt();
    Ok((norm(&off), norm(m)))
}
