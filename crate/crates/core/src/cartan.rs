//! Hermitian triple product and the quaternionic Cartan angular invariant.
//!
//! Under a change of lifts `p_i ↦ p_i λ_i` the ordered product
//! `<p1,p2><p2,p3><p3,p1>` is not conjugated as a whole: the scalars land
//! between the factors. The reversed product `<p3,p1><p2,p3><p1,p2>` becomes
//! `|λ2|²|λ3|² conj(λ1) τ λ1`, a positive multiple of a similarity, so its
//! angle to the real axis depends only on the three points. The invariant is
//! computed from that ordering; [`triple_product`] keeps the forward one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hform::{herm, PointType, ProjectivePoint};
use crate::quat::Quaternion;
use crate::scalar::Scalar;

/// Three boundary points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
#[serde(bound = "S: Scalar")]
pub struct BoundaryTriple<S>(pub [ProjectivePoint<S>; 3]);

impl<S: Scalar> BoundaryTriple<S> {
    /// Checks that every point is null.
    pub fn new(points: [ProjectivePoint<S>; 3], tol: f64) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if p.point_type(tol) != PointType::Null {
                return Err(Error::NotInModel(format!("point {} is not null", i + 1)));
            }
        }
        Ok(Self(points))
    }

    pub fn points(&self) -> &[ProjectivePoint<S>; 3] {
        &self.0
    }

    fn pairings(&self) -> [Quaternion<S>; 3] {
        let [p1, p2, p3] = &self.0;
        let (a, b, c) = (p1.rep(), p2.rep(), p3.rep());
        [herm(a, b), herm(b, c), herm(c, a)]
    }

    /// `|<p_i, p_j>| / (‖p_i‖ ‖p_j‖)` for the three pairs, in the order of
    /// [`Self::pairings`].
    fn normalized_pairings(&self) -> [f64; 3] {
        let norms = self.0.clone().map(|p| p.rep().norm());
        let [h12, h23, h31] = self.pairings();
        [
            h12.norm() / (norms[0] * norms[1]),
            h23.norm() / (norms[1] * norms[2]),
            h31.norm() / (norms[2] * norms[0]),
        ]
    }
}

/// `<p1,p2><p2,p3><p3,p1>` for the stored representatives.
pub fn triple_product<S: Scalar>(t: &BoundaryTriple<S>) -> Quaternion<S> {
    let [h12, h23, h31] = t.pairings();
    &(&h12 * &h23) * &h31
}

/// `<p3,p1><p2,p3><p1,p2>`; its similarity class does not depend on lifts.
pub fn triple_product_invariant<S: Scalar>(t: &BoundaryTriple<S>) -> Quaternion<S> {
    let [h12, h23, h31] = t.pairings();
    &(&h31 * &h23) * &h12
}

/// Two points coincide: distinct null points pair nontrivially, so this is
/// `|<p_i, p_j>| <= tol · ‖p_i‖ ‖p_j‖` for some pair (exactly zero on the
/// exact backend).
pub fn is_degenerate<S: Scalar>(t: &BoundaryTriple<S>, tol: f64) -> bool {
    if S::EXACT {
        t.pairings().iter().any(num_traits::Zero::is_zero)
    } else {
        t.normalized_pairings().iter().any(|&r| r <= tol)
    }
}

/// Angle in `[0, π/2]` between the line `R·1 ⊂ H` and the triple product,
/// `arccos(|Re τ| / |τ|)`.
pub fn cartan_invariant<S: Scalar>(t: &BoundaryTriple<S>, tol: f64) -> Result<f64> {
    if is_degenerate(t, tol) {
        return Err(Error::Degenerate("two points of the triple coincide".into()));
    }
    let tau = triple_product_invariant(t).to_f64();
    // atan2 keeps full precision near both ends of the range
    Ok(tau.im().norm().atan2(tau.w.abs()))
}

/// Exact test for angle π/2: `Re τ = 0` (boundary of a quaternionic line).
pub fn is_hline_triple(t: &BoundaryTriple<crate::scalar::Rational>) -> bool {
    let tau = triple_product_invariant(t);
    !num_traits::Zero::is_zero(&tau) && tau.is_pure_imaginary(0.0)
}

/// Exact test for angle 0: `Im τ = 0` (same R-circle).
pub fn is_rcircle_triple(t: &BoundaryTriple<crate::scalar::Rational>) -> bool {
    let tau = triple_product_invariant(t);
    !num_traits::Zero::is_zero(&tau) && tau.is_real(0.0)
}
