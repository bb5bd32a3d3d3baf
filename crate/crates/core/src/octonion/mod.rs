//! The invariant 3-form, the 7-dimensional cross product built two ways, the
//! octonion algebra and associative 3-planes.

mod algebra;
mod cross;
mod threeform;

pub use algebra::{associative_test, calibration_ratio, norm_sq, Octonion, OctonionTable};
pub use cross::{torsion_cross, CrossProduct7, TorsionCross};
pub use threeform::{invariant_threeform, so_basis, stabilizer, ThreeForm};

use crate::error::Result;
use crate::forms::Form;
use crate::lie::g2_basis;
use crate::scalar::Scalar;

/// The normalized invariant 3-form of the explicit `g2`.
pub fn model_phi<T: Scalar>() -> Result<ThreeForm<T>> {
    invariant_threeform(&g2_basis::<T>()?)
}

/// The octonion table induced by [`model_phi`].
pub fn model_octonions<T: Scalar>() -> Result<OctonionTable<T>> {
    Ok(OctonionTable::from_cross(&CrossProduct7::from_phi(
        &model_phi()?,
    )))
}

/// `(‖*φ‖², φ ∧ *φ / vol)`.
pub fn star_checks<T: Scalar>(phi: &ThreeForm<T>) -> Result<(T, T)> {
    let star = phi.star();
    let top = phi.form().wedge(&star)?;
    let vol = Form::<T>::basis_form(7, &[0, 1, 2, 3, 4, 5, 6]);
    let ratio = top.components()[0].clone() / vol.components()[0].clone();
    Ok((star.norm_sq(), ratio))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn star_phi_norms() {
        let phi = model_phi::<Rational>().unwrap();
        let (n, w) = star_checks(&phi).unwrap();
        assert_eq!(n, Rational::from_i64(7));
        assert_eq!(w, Rational::from_i64(7));
    }

    #[test]
    fn stabilizer_round_trip() {
        let b = g2_basis::<Rational>().unwrap();
        let phi = invariant_threeform(&b).unwrap();
        assert_eq!(stabilizer(&phi).unwrap(), b.span().unwrap());
    }
}
