//! `Sp(2,1)`: 3×3 quaternionic matrices with `A* J A = J`.

mod closed_form;
mod dynamics;
mod frame;

pub use closed_form::tr_power_closed_form;
pub use dynamics::{fixed_points_dynamical, FixedPointOptions, FixedPoints};
pub use frame::frame_from_boundary_pair;

use std::ops::Mul;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hform::{ProjectivePoint, VectorH21};
use crate::quat::Quaternion;
use crate::scalar::Scalar;

/// Row-major 3×3 quaternionic matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
#[serde(bound = "S: Scalar")]
pub struct Sp21Matrix<S>(pub [[Quaternion<S>; 3]; 3]);

/// Residual of one of the eighteen entry identities implied by
/// `A A⁻¹ = A⁻¹ A = I` with `A⁻¹` from [`Sp21Matrix::inverse_formula`].
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityResidual<S> {
    pub label: &'static str,
    pub value: S,
}

/// Entry names `a b c / d e f / g h l`, bar meaning conjugate.
pub const IDENTITY_LABELS: [&str; 18] = [
    "a·l̄ + b·h̄ + c·ḡ = 1",
    "a·f̄ + b·ē + c·d̄ = 0",
    "a·c̄ + |b|² + c·ā = 0",
    "d·l̄ + e·h̄ + f·ḡ = 0",
    "d·f̄ + |e|² + f·d̄ = 1",
    "d·c̄ + e·b̄ + f·ā = 0",
    "g·l̄ + |h|² + l·ḡ = 0",
    "g·f̄ + h·ē + l·d̄ = 0",
    "g·c̄ + h·b̄ + l·ā = 1",
    "l̄·a + f̄·d + c̄·g = 1",
    "l̄·b + f̄·e + c̄·h = 0",
    "l̄·c + |f|² + c̄·l = 0",
    "h̄·a + ē·d + b̄·g = 0",
    "h̄·b + |e|² + b̄·h = 1",
    "h̄·c + ē·f + b̄·l = 0",
    "ḡ·a + |d|² + ā·g = 0",
    "ḡ·b + d̄·e + ā·h = 0",
    "ḡ·c + d̄·f + ā·l = 1",
];

/// Parameters of the standard loxodromic `diag(λμ, ν, μ/λ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LoxodromicParams<S> {
    pub lambda: S,
    pub mu: Quaternion<S>,
    pub nu: Quaternion<S>,
}

impl<S: Scalar> Sp21Matrix<S> {
    pub fn from_rows(rows: [[Quaternion<S>; 3]; 3]) -> Self {
        Self(rows)
    }

    pub fn zero() -> Self {
        Self(std::array::from_fn(|_| std::array::from_fn(|_| Quaternion::zero())))
    }

    pub fn identity() -> Self {
        Self::diag([Quaternion::one(), Quaternion::one(), Quaternion::one()])
    }

    pub fn diag(d: [Quaternion<S>; 3]) -> Self {
        let mut m = Self::zero();
        for (i, q) in d.into_iter().enumerate() {
            m.0[i][i] = q;
        }
        m
    }

    /// The Gram matrix of the form.
    pub fn j() -> Self {
        let mut m = Self::zero();
        m.0[0][2] = Quaternion::one();
        m.0[1][1] = Quaternion::one();
        m.0[2][0] = Quaternion::one();
        m
    }

    /// Matrix with the given vectors as columns.
    pub fn from_columns(cols: [&VectorH21<S>; 3]) -> Self {
        Self(std::array::from_fn(|r| std::array::from_fn(|c| cols[c].0[r].clone())))
    }

    pub fn entry(&self, row: usize, col: usize) -> &Quaternion<S> {
        &self.0[row][col]
    }

    pub fn column(&self, col: usize) -> VectorH21<S> {
        VectorH21(std::array::from_fn(|r| self.0[r][col].clone()))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self(std::array::from_fn(|r| std::array::from_fn(|c| self.0[c][r].conj())))
    }

    pub fn mul_vec(&self, v: &VectorH21<S>) -> VectorH21<S> {
        VectorH21(std::array::from_fn(|r| {
            (0..3).fold(Quaternion::zero(), |acc, t| &acc + &(&self.0[r][t] * &v.0[t]))
        }))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(std::array::from_fn(|r| {
            std::array::from_fn(|c| &self.0[r][c] - &other.0[r][c])
        }))
    }

    /// Largest absolute component over all entries.
    pub fn max_abs(&self) -> S {
        self.0
            .iter()
            .flatten()
            .map(Quaternion::max_abs)
            .fold(S::zero(), |m, x| if x > m { x } else { m })
    }

    /// Largest absolute imaginary component over all entries.
    pub fn max_imag(&self) -> S {
        self.0
            .iter()
            .flatten()
            .map(Quaternion::imag_max_abs)
            .fold(S::zero(), |m, x| if x > m { x } else { m })
    }

    /// `‖A* J A − J‖_max`; zero exactly for members on the exact backend.
    pub fn membership_residual(&self) -> S {
        let g = &(&self.adjoint() * &Self::j()) * self;
        g.sub(&Self::j()).max_abs()
    }

    /// `A⁻¹` for `A ∈ Sp(2,1)`, read off from `A⁻¹ = J A* J`:
    /// `[[l̄, f̄, c̄], [h̄, ē, b̄], [ḡ, d̄, ā]]`.
    pub fn inverse_formula(&self) -> Self {
        let m = &self.0;
        Self([
            [m[2][2].conj(), m[1][2].conj(), m[0][2].conj()],
            [m[2][1].conj(), m[1][1].conj(), m[0][1].conj()],
            [m[2][0].conj(), m[1][0].conj(), m[0][0].conj()],
        ])
    }

    /// The eighteen identities in display order: the nine entries of
    /// `A A⁻¹ = I` row by row, then the nine of `A⁻¹ A = I`. Each residual is
    /// the largest absolute component of `lhs − rhs`.
    pub fn identities_residuals(&self) -> Vec<IdentityResidual<S>> {
        let inv = self.inverse_formula();
        let left = self * &inv;
        let right = &inv * self;
        let id = Self::identity();
        let left = left.sub(&id);
        let right = right.sub(&id);
        left.0
            .iter()
            .flatten()
            .chain(right.0.iter().flatten())
            .zip(IDENTITY_LABELS)
            .map(|(q, label)| IdentityResidual {
                label,
                value: q.max_abs(),
            })
            .collect()
    }

    pub fn trace(&self) -> Quaternion<S> {
        &(&self.0[0][0] + &self.0[1][1]) + &self.0[2][2]
    }

    pub fn is_real_trace(&self, tol: f64) -> bool {
        self.trace().is_real(tol)
    }

    /// `[A] : xH ↦ (Ax)H`. The representative is the raw product; use
    /// [`ProjectivePoint::canonical`] for a normalized one.
    pub fn apply(&self, p: &ProjectivePoint<S>) -> ProjectivePoint<S> {
        ProjectivePoint::new(self.mul_vec(p.rep())).expect("invertible matrix maps nonzero vectors to nonzero vectors")
    }

    /// `diag(λμ, ν, μ/λ)`.
    pub fn loxodromic_standard(params: &LoxodromicParams<S>, tol: f64) -> Result<Self> {
        let LoxodromicParams { lambda, mu, nu } = params;
        if *lambda <= S::one() {
            return Err(Error::InvalidParams(format!("λ must exceed 1, got {lambda:?}")));
        }
        for (name, q) in [("μ", mu), ("ν", nu)] {
            if !(q.norm_sqr() - S::one()).within(tol) {
                return Err(Error::InvalidParams(format!(
                    "{name} must be a unit quaternion, got {q:?}"
                )));
            }
        }
        let inv_lambda = S::one() / lambda.clone();
        Ok(Self::diag([mu.scale(lambda), nu.clone(), mu.scale(&inv_lambda)]))
    }

    /// `Q A Q⁻¹` with `Q⁻¹` from the explicit inverse formula.
    pub fn conjugate(&self, q: &Self) -> Self {
        &(q * self) * &q.inverse_formula()
    }

    pub fn to_f64(&self) -> Sp21Matrix<f64> {
        Sp21Matrix(std::array::from_fn(|r| std::array::from_fn(|c| self.0[r][c].to_f64())))
    }
}

impl Sp21Matrix<f64> {
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.sub(other).max_abs() <= tol
    }

    /// Frobenius-type norm, `sqrt(Σ |a_ij|²)`.
    pub fn norm(&self) -> f64 {
        self.0.iter().flatten().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.clone().map(|row| row.map(|q| q.scale(&s))))
    }

    /// Real entries lifted to quaternions.
    pub fn from_real(m: [[f64; 3]; 3]) -> Self {
        Self(m.map(|row| row.map(Quaternion::real)))
    }
}

impl<S: Scalar> Mul for &Sp21Matrix<S> {
    type Output = Sp21Matrix<S>;

    fn mul(self, rhs: Self) -> Sp21Matrix<S> {
        Sp21Matrix(std::array::from_fn(|r| {
            std::array::from_fn(|c| {
                (0..3)
                    .filter(|&t| !S::EXACT || !(self.0[r][t].is_zero() || rhs.0[t][c].is_zero()))
                    .map(|t| &self.0[r][t] * &rhs.0[t][c])
                    .reduce(|acc, x| &acc + &x)
                    .unwrap_or_else(Quaternion::zero)
            })
        }))
    }
}

impl<S: Scalar> Mul for Sp21Matrix<S> {
    type Output = Sp21Matrix<S>;

    fn mul(self, rhs: Self) -> Sp21Matrix<S> {
        &self * &rhs
    }
}
