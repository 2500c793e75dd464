//! Siegel domain in horospherical coordinates.
//!
//! A finite point is `(ζ, v, u) ∈ H × Im(H) × R≥0` and maps to
//! `ψ(ζ, v, u) = (-|ζ|² - u + v, √2 ζ, 1)ᵗ`; the extra point ∞ maps to `e1`.
//! Interior points have `u > 0`, boundary points `u = 0`. Float only.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hform::{herm, last_significant, PointType, ProjectivePoint, VectorH21};
use crate::isom::Sp21Matrix;
use crate::quat::Quaternion;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum Horospherical {
    Infinity,
    Finite {
        zeta: Quaternion<f64>,
        v: Quaternion<f64>,
        u: f64,
    },
}

impl Horospherical {
    pub fn new(zeta: Quaternion<f64>, v: Quaternion<f64>, u: f64) -> Result<Self> {
        if v.w != 0.0 {
            return Err(Error::InvalidParams(format!(
                "v must be pure imaginary, got real part {}",
                v.w
            )));
        }
        if u.is_nan() || u < 0.0 {
            return Err(Error::InvalidParams(format!("u must be non-negative, got {u}")));
        }
        Ok(Self::Finite { zeta, v, u })
    }

    /// `(0, 0, 0)`.
    pub fn origin() -> Self {
        Self::Finite {
            zeta: Quaternion::zero(),
            v: Quaternion::zero(),
            u: 0.0,
        }
    }

    pub fn is_boundary(&self) -> bool {
        match self {
            Self::Infinity => true,
            Self::Finite { u, .. } => *u == 0.0,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FiniteRepr {
    zeta: Quaternion<f64>,
    v: Quaternion<f64>,
    u: f64,
}

impl Serialize for Horospherical {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Infinity => serializer.serialize_str("inf"),
            Self::Finite { zeta, v, u } => FiniteRepr {
                zeta: zeta.clone(),
                v: v.clone(),
                u: *u,
            }
            .serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for Horospherical {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Tag(String),
            Finite(FiniteRepr),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Tag(s) if s == "inf" => Ok(Self::Infinity),
            Repr::Tag(s) => Err(serde::de::Error::custom(format!("expected \"inf\", got {s:?}"))),
            Repr::Finite(f) => Self::new(f.zeta, f.v, f.u).map_err(serde::de::Error::custom),
        }
    }
}

pub fn psi(h: &Horospherical) -> ProjectivePoint<f64> {
    match h {
        Horospherical::Infinity => ProjectivePoint::infinity(),
        Horospherical::Finite { zeta, v, u } => {
            let first = &Quaternion::real(-zeta.norm_sqr() - u) + v;
            let second = zeta.scale(&std::f64::consts::SQRT_2);
            ProjectivePoint::new(VectorH21::new(first, second, Quaternion::one())).expect("third coordinate is 1")
        }
    }
}

/// Inverse of [`psi`] on negative and null points.
pub fn psi_inv(p: &ProjectivePoint<f64>, tol: f64) -> Result<Horospherical> {
    if p.point_type(tol) == PointType::Positive {
        return Err(Error::NotInModel("positive point".into()));
    }
    let c = p.canonical(tol);
    match last_significant(p.rep(), tol) {
        Some(2) => {}
        Some(0) => return Ok(Horospherical::Infinity),
        _ => {
            return Err(Error::NotInModel(
                "third coordinate vanishes but the point is not ∞".into(),
            ))
        }
    }
    let zeta = c.0[1].scale(&std::f64::consts::FRAC_1_SQRT_2);
    let v = c.0[0].im();
    let u = (-c.0[0].w - zeta.norm_sqr()).max(0.0);
    Ok(Horospherical::Finite { zeta, v, u })
}

/// On the standard quaternionic line with polar vector `e2`, i.e.
/// `<p, e2> = 0`: the second coordinate vanishes.
pub fn in_standard_hline<S: Scalar>(p: &ProjectivePoint<S>, tol: f64) -> bool {
    let r = p.rep();
    let pairing = herm(r, &VectorH21::e2());
    if S::EXACT {
        num_traits::Zero::is_zero(&pairing)
    } else {
        pairing.norm() <= tol * r.norm()
    }
}

/// All coordinates real after right-normalizing the last nonzero one to 1,
/// i.e. the point lies in the closure of the standard real plane `H²_R`.
pub fn in_standard_real_plane<S: Scalar>(p: &ProjectivePoint<S>, tol: f64) -> bool {
    let c = p.canonical(tol);
    let scale = if S::EXACT { 0.0 } else { tol * c.norm() };
    c.0.iter().all(|x| x.is_real(scale))
}

/// Totally geodesic subspaces used by the detector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeodesicSubspace {
    /// `{p : <p, polar> = 0}` with `<polar, polar> > 0`.
    QuaternionicLine { polar: VectorH21<f64> },
    /// The image `frame(H²_R)`.
    RealPlane { frame: Sp21Matrix<f64> },
}

impl GeodesicSubspace {
    pub fn quaternionic_line(polar: VectorH21<f64>, tol: f64) -> Result<Self> {
        if crate::hform::point_type(&polar, tol) != PointType::Positive {
            return Err(Error::InvalidParams("polar vector must be positive".into()));
        }
        Ok(Self::QuaternionicLine { polar })
    }

    pub fn contains(&self, p: &ProjectivePoint<f64>, tol: f64) -> bool {
        match self {
            Self::QuaternionicLine { polar } => herm(p.rep(), polar).norm() <= tol * p.rep().norm() * polar.norm(),
            Self::RealPlane { frame } => {
                let back = frame.inverse_formula().apply(p);
                in_standard_real_plane(&back, tol)
            }
        }
    }
}
