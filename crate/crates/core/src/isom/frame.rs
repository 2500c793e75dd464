use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Sp21Matrix;
use crate::error::{Error, Result};
use crate::hform::{herm, herm_norm, PointType, ProjectivePoint, VectorH21};
use crate::quat::Quaternion;

const MAX_RETRIES: usize = 3;

/// `Q ∈ Sp(2,1)` with `Q(p) = ∞` and `Q(q) = 0` for distinct null points.
///
/// Builds `M` with columns `(p', e, q')` and `M* J M = J`, then returns
/// `M⁻¹`. Since `(M* J M)_{rc} = <col_c, col_r>`, the columns must satisfy
/// `<p', q'> = <q', p'> = 1`, `<e, e> = 1` and `e ⟂ p', q'`; every other
/// pairing vanishes because `p'`, `q'` are null. Scalars go on the right.
pub fn frame_from_boundary_pair(
    p: &ProjectivePoint<f64>,
    q: &ProjectivePoint<f64>,
    tol: f64,
) -> Result<Sp21Matrix<f64>> {
    for (name, x) in [("p", p), ("q", q)] {
        if x.point_type(tol) != PointType::Null {
            return Err(Error::InvalidParams(format!("{name} is not a null point")));
        }
    }
    let p1 = p.canonical(tol);
    let q0 = q.canonical(tol);
    let pairing = herm(&q0, &p1);
    if pairing.norm() <= tol * p1.norm() * q0.norm() {
        return Err(Error::Degenerate("<q, p> vanishes; points are not distinct".into()));
    }
    // <q0 λ, p1> = <q0, p1> λ = 1
    let q1 = q0.right_scale(&pairing.checked_inverse(0.0)?);
    // p1 t, q1 / t keeps <q1, p1> = 1; equal norms keep the conjugated
    // corner entries c and g on the same scale
    let t = (q1.norm() / p1.norm()).sqrt();
    let p1 = p1.right_scale(&Quaternion::real(t));
    let q1 = q1.right_scale(&Quaternion::real(1.0 / t));

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut candidates = vec![VectorH21::e2()];
    for _ in 0..MAX_RETRIES {
        candidates.push(VectorH21::new(
            Quaternion::random_gaussian(&mut rng),
            Quaternion::random_gaussian(&mut rng),
            Quaternion::random_gaussian(&mut rng),
        ));
    }
    for x in candidates {
        // e0 = x − p1 α − q1 β with α = <x, q1>, β = <x, p1>
        let alpha = herm(&x, &q1);
        let beta = herm(&x, &p1);
        let e0 = x.sub(&p1.right_scale(&alpha)).sub(&q1.right_scale(&beta));
        let s = herm_norm(&e0);
        if s <= tol * e0.norm_sqr() || s <= f64::MIN_POSITIVE {
            continue;
        }
        let e = e0.right_scale(&Quaternion::real(1.0 / s.sqrt()));
        let m = Sp21Matrix::from_columns([&p1, &e, &q1]);
        return Ok(m.inverse_formula());
    }
    Err(Error::Degenerate(format!(
        "could not complete the frame after {MAX_RETRIES} retries"
    )))
}
