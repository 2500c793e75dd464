//! The right quaternionic vector space `H^{2,1}` with the Hermitian form
//! `<p, q> = q* J p`, `J` the anti-diagonal matrix with ones on the
//! anti-diagonal.
//!
//! Scalars act on the right. With this convention
//! `<p λ, q μ> = conj(μ) <p, q> λ`, so the order of factors in every pairing
//! below matters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quaternion;
use crate::scalar::Scalar;

/// Column vector `(p1, p2, p3)ᵗ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
#[serde(bound = "S: Scalar")]
pub struct VectorH21<S>(pub [Quaternion<S>; 3]);

impl<S: Scalar> VectorH21<S> {
    pub fn new(p1: Quaternion<S>, p2: Quaternion<S>, p3: Quaternion<S>) -> Self {
        Self([p1, p2, p3])
    }

    pub fn basis(index: usize) -> Self {
        let mut v = [Quaternion::zero(), Quaternion::zero(), Quaternion::zero()];
        v[index] = Quaternion::one();
        Self(v)
    }

    /// The point ∞.
    pub fn e1() -> Self {
        Self::basis(0)
    }

    pub fn e2() -> Self {
        Self::basis(1)
    }

    /// The point 0.
    pub fn e3() -> Self {
        Self::basis(2)
    }

    pub fn coords(&self) -> &[Quaternion<S>; 3] {
        &self.0
    }

    /// `p · λ`, componentwise right multiplication.
    pub fn right_scale(&self, lambda: &Quaternion<S>) -> Self {
        Self(self.0.clone().map(|c| &c * lambda))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self([
            &self.0[0] + &other.0[0],
            &self.0[1] + &other.0[1],
            &self.0[2] + &other.0[2],
        ])
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self([
            &self.0[0] - &other.0[0],
            &self.0[1] - &other.0[1],
            &self.0[2] - &other.0[2],
        ])
    }

    /// Euclidean `Σ |p_i|²`.
    pub fn norm_sqr(&self) -> S {
        self.0.iter().fold(S::zero(), |acc, c| acc + c.norm_sqr())
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().to_f64().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(num_traits::Zero::is_zero)
    }

    pub fn to_f64(&self) -> VectorH21<f64> {
        VectorH21(self.0.clone().map(|c| c.to_f64()))
    }
}

/// `<p, q> = conj(q1) p3 + conj(q2) p2 + conj(q3) p1`.
pub fn herm<S: Scalar>(p: &VectorH21<S>, q: &VectorH21<S>) -> Quaternion<S> {
    let [p1, p2, p3] = &p.0;
    let [q1, q2, q3] = &q.0;
    &(&(&q1.conj() * p3) + &(&q2.conj() * p2)) + &(&q3.conj() * p1)
}

/// Real number `<p, p>`.
pub fn herm_norm<S: Scalar>(p: &VectorH21<S>) -> S {
    herm(p, p).w
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointType {
    Negative,
    Null,
    Positive,
}

/// Sign of `<p, p>`. On the float backend `|<p,p>| <= tol·‖p‖²` counts as
/// null, which keeps the classification independent of the representative.
pub fn point_type<S: Scalar>(p: &VectorH21<S>, tol: f64) -> PointType {
    let h = herm_norm(p);
    let null = if S::EXACT {
        num_traits::Zero::is_zero(&h)
    } else {
        h.to_f64().abs() <= tol * p.norm_sqr().to_f64()
    };
    if null {
        PointType::Null
    } else if h < S::zero() {
        PointType::Negative
    } else {
        PointType::Positive
    }
}

/// Index of the last coordinate that is nonzero (exact) or larger than
/// `tol·‖p‖` (float).
pub(crate) fn last_significant<S: Scalar>(p: &VectorH21<S>, tol: f64) -> Option<usize> {
    let scale = p.norm();
    (0..3).rev().find(|&i| {
        let c = &p.0[i];
        if S::EXACT {
            !num_traits::Zero::is_zero(c)
        } else {
            c.norm() > tol * scale
        }
    })
}

/// A point of `P H^{2,1}`: the class `{p λ : λ ≠ 0}` of a nonzero vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
#[serde(bound = "S: Scalar")]
pub struct ProjectivePoint<S> {
    rep: VectorH21<S>,
}

impl<S: Scalar> ProjectivePoint<S> {
    pub fn new(rep: VectorH21<S>) -> Result<Self> {
        if rep.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(Self { rep })
    }

    pub fn infinity() -> Self {
        Self { rep: VectorH21::e1() }
    }

    pub fn origin() -> Self {
        Self { rep: VectorH21::e3() }
    }

    pub fn rep(&self) -> &VectorH21<S> {
        &self.rep
    }

    pub fn into_rep(self) -> VectorH21<S> {
        self.rep
    }

    /// Same class, representative scaled on the right.
    pub fn rescaled(&self, lambda: &Quaternion<S>) -> Result<Self> {
        Self::new(self.rep.right_scale(lambda))
    }

    /// Representative whose last significant coordinate is 1.
    pub fn canonical(&self, tol: f64) -> VectorH21<S> {
        match last_significant(&self.rep, tol) {
            Some(i) => match self.rep.0[i].checked_inverse(0.0) {
                Ok(inv) => self.rep.right_scale(&inv),
                Err(_) => self.rep.clone(),
            },
            None => self.rep.clone(),
        }
    }

    pub fn point_type(&self, tol: f64) -> PointType {
        point_type(&self.rep, tol)
    }

    pub fn to_f64(&self) -> ProjectivePoint<f64> {
        ProjectivePoint { rep: self.rep.to_f64() }
    }
}

impl ProjectivePoint<f64> {
    /// Chordal distance: the sine of the angle between the quaternionic
    /// lines, computed as `|q - p c| / |q|` with `p c` the Euclidean
    /// projection of `q` onto `p H`. Invariant under right scaling of either
    /// argument.
    pub fn distance(&self, other: &Self) -> f64 {
        let (p, q) = (&self.rep, &other.rep);
        let mut dot = Quaternion::zero();
        for t in 0..3 {
            dot = &dot + &(&p.0[t].conj() * &q.0[t]);
        }
        let coeff = dot.scale(&(1.0 / p.norm_sqr()));
        let residual = q.sub(&p.right_scale(&coeff));
        (residual.norm() / q.norm()).min(1.0)
    }
}
