use crate::quat::Quaternion;
use crate::scalar::Scalar;

/// Imaginary parts of `tr(A⁴) = (λ⁴ + λ⁻⁴) μ⁴ + ν⁴` for `A = diag(λμ, ν, μ/λ)`
/// once `tr A` and `tr A²` are real and `Im μ ≠ 0`, which forces
/// `ν = (λ⁴+1)/(λ(λ²+1)) μ₁ − (λ + 1/λ)(μ₂ i + μ₃ j + μ₄ k)`.
///
/// In closed form the `i` part is
/// `8(λ⁴+λ²+1)/λ² · [((λ²−1)/(λ²+1))² μ₁² + μ₂² + μ₃² + μ₄²] · μ₁μ₂`,
/// and the `j`, `k` parts replace `μ₂` by `μ₃`, `μ₄` in the trailing factor.
/// Since the bracket is positive for `λ > 1` and `μ ≠ 0`, all three vanish
/// only when `μ₁ = 0` or `μ` is real.
///
/// `μ` need not be a unit quaternion; this is the algebraic identity only.
pub fn tr_power_closed_form<S: Scalar>(lambda: &S, mu: &Quaternion<S>) -> [S; 3] {
    let l2 = lambda.clone() * lambda.clone();
    let l4 = l2.clone() * l2.clone();
    let one = S::one();
    let ratio = (l2.clone() - one.clone()) / (l2.clone() + one.clone());
    let bracket = ratio.clone() * ratio * mu.w.clone() * mu.w.clone()
        + mu.x.clone() * mu.x.clone()
        + mu.y.clone() * mu.y.clone()
        + mu.z.clone() * mu.z.clone();
    let lead = S::from_i64(8) * (l4 + l2.clone() + one) / l2;
    let common = lead * bracket * mu.w.clone();
    [
        common.clone() * mu.x.clone(),
        common.clone() * mu.y.clone(),
        common * mu.z.clone(),
    ]
}
