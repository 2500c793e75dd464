//! Hamilton quaternions over a [`Scalar`] backend.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar, ScalarRepr};

/// `w + x i + y j + z k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Quaternion<S> {
    pub w: S,
    pub x: S,
    pub y: S,
    pub z: S,
}

impl<S: Scalar> Quaternion<S> {
    pub fn new(w: S, x: S, y: S, z: S) -> Self {
        Self { w, x, y, z }
    }

    pub fn real(w: S) -> Self {
        Self::new(w, S::zero(), S::zero(), S::zero())
    }

    pub fn zero() -> Self {
        Self::real(S::zero())
    }

    pub fn one() -> Self {
        Self::real(S::one())
    }

    pub fn i() -> Self {
        Self::new(S::zero(), S::one(), S::zero(), S::zero())
    }

    pub fn j() -> Self {
        Self::new(S::zero(), S::zero(), S::one(), S::zero())
    }

    pub fn k() -> Self {
        Self::new(S::zero(), S::zero(), S::zero(), S::one())
    }

    pub fn from_ints(w: i64, x: i64, y: i64, z: i64) -> Self {
        Self::new(S::from_i64(w), S::from_i64(x), S::from_i64(y), S::from_i64(z))
    }

    pub fn components(&self) -> [&S; 4] {
        [&self.w, &self.x, &self.y, &self.z]
    }

    pub fn conj(&self) -> Self {
        Self::new(self.w.clone(), -self.x.clone(), -self.y.clone(), -self.z.clone())
    }

    /// Real part as a quaternion.
    pub fn re(&self) -> Self {
        Self::real(self.w.clone())
    }

    /// Imaginary part `x i + y j + z k`.
    pub fn im(&self) -> Self {
        Self::new(S::zero(), self.x.clone(), self.y.clone(), self.z.clone())
    }

    pub fn norm_sqr(&self) -> S {
        self.w.clone() * self.w.clone()
            + self.x.clone() * self.x.clone()
            + self.y.clone() * self.y.clone()
            + self.z.clone() * self.z.clone()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().to_f64().sqrt()
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> S {
        let mut m = self.w.abs_val();
        for c in [&self.x, &self.y, &self.z] {
            let a = c.abs_val();
            if a > m {
                m = a;
            }
        }
        m
    }

    pub fn imag_max_abs(&self) -> S {
        self.im().max_abs()
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::new(
            self.w.clone() * s.clone(),
            self.x.clone() * s.clone(),
            self.y.clone() * s.clone(),
            self.z.clone() * s.clone(),
        )
    }

    /// `q⁻¹ = conj(q) / |q|²`. The float backend rejects `|q| <= tol`; the
    /// exact backend rejects only `q = 0`.
    pub fn checked_inverse(&self, tol: f64) -> Result<Self> {
        let n = self.norm_sqr();
        if n.is_zero() || (!S::EXACT && self.norm() <= tol) {
            return Err(Error::ZeroDivisor);
        }
        let inv = S::one() / n;
        Ok(self.conj().scale(&inv))
    }

    pub fn is_zero_within(&self, tol: f64) -> bool {
        self.components().iter().all(|c| c.within(tol))
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.x.within(tol) && self.y.within(tol) && self.z.within(tol)
    }

    pub fn is_pure_imaginary(&self, tol: f64) -> bool {
        self.w.within(tol)
    }

    pub fn to_f64(&self) -> Quaternion<f64> {
        Quaternion::new(self.w.to_f64(), self.x.to_f64(), self.y.to_f64(), self.z.to_f64())
    }
}

impl Quaternion<f64> {
    /// Componentwise comparison with an absolute tolerance.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self - other).max_abs() <= tol
    }

    /// Standard normal components.
    pub fn random_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        )
    }

    /// Uniform on the unit sphere `Sp(1)`.
    pub fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let q = Self::random_gaussian(rng);
            let n = q.norm();
            if n > 1e-6 {
                return q.scale(&(1.0 / n));
            }
        }
    }

    /// Uniform direction in `Im(H)` scaled by a standard normal length.
    pub fn random_pure_imaginary<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut q = Self::random_gaussian(rng);
        q.w = 0.0;
        q
    }
}

impl Quaternion<Rational> {
    pub fn from_ratios(parts: [(i64, i64); 4]) -> Self {
        let [w, x, y, z] = parts.map(|(n, d)| Rational::from_ratio(n, d));
        Self::new(w, x, y, z)
    }
}

impl<S: Scalar> Default for Quaternion<S> {
    fn default() -> Self {
        Self::zero()
    }
}

/// `(sign, output component)` of `e_i e_j` for basis `1, i, j, k`.
const HAMILTON_TABLE: [[(bool, usize); 4]; 4] = [
    [(true, 0), (true, 1), (true, 2), (true, 3)],
    [(true, 1), (false, 0), (true, 3), (false, 2)],
    [(true, 2), (false, 3), (false, 0), (true, 1)],
    [(true, 3), (true, 2), (false, 1), (false, 0)],
];

/// Product that skips zero components; rational entries are often sparse and
/// each skipped term saves a gcd normalization.
fn hamilton_sparse<S: Scalar>(a: &Quaternion<S>, b: &Quaternion<S>) -> Quaternion<S> {
    let (ac, bc) = (a.components(), b.components());
    let mut out: [Option<S>; 4] = [None, None, None, None];
    for (i, x) in ac.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in bc.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let (positive, k) = HAMILTON_TABLE[i][j];
            let term = (*x).clone() * (*y).clone();
            out[k] = Some(match (out[k].take(), positive) {
                (None, true) => term,
                (None, false) => -term,
                (Some(acc), true) => acc + term,
                (Some(acc), false) => acc - term,
            });
        }
    }
    let [w, x, y, z] = out.map(|c| c.unwrap_or_else(S::zero));
    Quaternion::new(w, x, y, z)
}

fn hamilton<S: Scalar>(a: &Quaternion<S>, b: &Quaternion<S>) -> Quaternion<S> {
    if S::EXACT {
        return hamilton_sparse(a, b);
    }
    let (a0, a1, a2, a3) = (a.w.clone(), a.x.clone(), a.y.clone(), a.z.clone());
    let (b0, b1, b2, b3) = (b.w.clone(), b.x.clone(), b.y.clone(), b.z.clone());
    Quaternion::new(
        a0.clone() * b0.clone() - a1.clone() * b1.clone() - a2.clone() * b2.clone() - a3.clone() * b3.clone(),
        a0.clone() * b1.clone() + a1.clone() * b0.clone() + a2.clone() * b3.clone() - a3.clone() * b2.clone(),
        a0.clone() * b2.clone() - a1.clone() * b3.clone() + a2.clone() * b0.clone() + a3.clone() * b1.clone(),
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )
}

impl<S: Scalar> Mul for &Quaternion<S> {
    type Output = Quaternion<S>;

    fn mul(self, rhs: Self) -> Quaternion<S> {
        hamilton(self, rhs)
    }
}

impl<S: Scalar> Add for &Quaternion<S> {
    type Output = Quaternion<S>;

    fn add(self, rhs: Self) -> Quaternion<S> {
        Quaternion::new(
            self.w.clone() + rhs.w.clone(),
            self.x.clone() + rhs.x.clone(),
            self.y.clone() + rhs.y.clone(),
            self.z.clone() + rhs.z.clone(),
        )
    }
}

impl<S: Scalar> Sub for &Quaternion<S> {
    type Output = Quaternion<S>;

    fn sub(self, rhs: Self) -> Quaternion<S> {
        Quaternion::new(
            self.w.clone() - rhs.w.clone(),
            self.x.clone() - rhs.x.clone(),
            self.y.clone() - rhs.y.clone(),
            self.z.clone() - rhs.z.clone(),
        )
    }
}

impl<S: Scalar> Neg for &Quaternion<S> {
    type Output = Quaternion<S>;

    fn neg(self) -> Quaternion<S> {
        Quaternion::new(-self.w.clone(), -self.x.clone(), -self.y.clone(), -self.z.clone())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<S: Scalar> $tr for Quaternion<S> {
            type Output = Quaternion<S>;

            fn $m(self, rhs: Self) -> Quaternion<S> {
                (&self).$m(&rhs)
            }
        }

        impl<S: Scalar> $tr<&Quaternion<S>> for Quaternion<S> {
            type Output = Quaternion<S>;

            fn $m(self, rhs: &Quaternion<S>) -> Quaternion<S> {
                (&self).$m(rhs)
            }
        }

        impl<S: Scalar> $tr<Quaternion<S>> for &Quaternion<S> {
            type Output = Quaternion<S>;

            fn $m(self, rhs: Quaternion<S>) -> Quaternion<S> {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Mul, mul);
forward_owned!(Add, add);
forward_owned!(Sub, sub);

impl<S: Scalar> Neg for Quaternion<S> {
    type Output = Quaternion<S>;

    fn neg(self) -> Quaternion<S> {
        -&self
    }
}

impl<S: Scalar> Zero for Quaternion<S> {
    fn zero() -> Self {
        Quaternion::zero()
    }

    fn is_zero(&self) -> bool {
        self.components().iter().all(|c| c.is_zero())
    }
}

impl<S: Scalar> One for Quaternion<S> {
    fn one() -> Self {
        Quaternion::one()
    }
}

impl<S: Scalar + fmt::Display> fmt::Display for Quaternion<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.w, self.x, self.y, self.z)
    }
}

impl<S: Scalar> Serialize for Quaternion<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        [self.w.encode(), self.x.encode(), self.y.encode(), self.z.encode()].serialize(serializer)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for Quaternion<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let parts = <[ScalarRepr; 4]>::deserialize(deserializer)?;
        let mut it = parts.iter().map(|p| S::decode(p).map_err(D::Error::custom));
        Ok(Quaternion::new(
            it.next().unwrap()?,
            it.next().unwrap()?,
            it.next().unwrap()?,
            it.next().unwrap()?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Quaternion<Rational>;

    fn units() -> [Q; 4] {
        [Q::one(), Q::i(), Q::j(), Q::k()]
    }

    #[test]
    fn hamilton_table() {
        // row * column; entries as (sign, index into 1,i,j,k)
        let table = [
            [(1, 0), (1, 1), (1, 2), (1, 3)],
            [(1, 1), (-1, 0), (1, 3), (-1, 2)],
            [(1, 2), (-1, 3), (-1, 0), (1, 1)],
            [(1, 3), (1, 2), (-1, 1), (-1, 0)],
        ];
        let u = units();
        for (r, row) in table.iter().enumerate() {
            for (c, &(sign, idx)) in row.iter().enumerate() {
                let expected = if sign > 0 { u[idx].clone() } else { -u[idx].clone() };
                assert_eq!(&u[r] * &u[c], expected, "unit {r} * unit {c}");
            }
        }
        let ijk = &(&Q::i() * &Q::j()) * &Q::k();
        assert_eq!(ijk, -Q::one());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(Q::i() * Q::j(), Q::k());
        assert_eq!(Q::j() * Q::i(), -Q::k());
        let a = Q::from_ints(1, 1, 0, 0);
        let b = Q::from_ints(1, -1, 0, 0);
        assert_eq!(a * b, Q::from_ints(2, 0, 0, 0));
    }

    #[test]
    fn conj_examples() {
        assert_eq!(Q::from_ints(1, 2, 3, 4).conj(), Q::from_ints(1, -2, -3, -4));
        let ij = Q::i() * Q::j();
        assert_eq!(ij.conj(), -Q::k());
        assert_eq!(ij.conj(), (-Q::j()) * (-Q::i()));
        assert_eq!(Q::from_ints(5, 0, 0, 0).conj(), Q::from_ints(5, 0, 0, 0));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Q::i().checked_inverse(0.0).unwrap(), -Q::i());
        assert_eq!(
            Q::from_ints(2, 0, 0, 0).checked_inverse(0.0).unwrap(),
            Q::real(Rational::from_ratio(1, 2))
        );
        let q = Q::from_ints(1, 1, 1, 1);
        let inv = q.checked_inverse(0.0).unwrap();
        assert_eq!(inv, Q::from_ratios([(1, 4), (-1, 4), (-1, 4), (-1, 4)]));
        assert_eq!(&q * &inv, Q::one());
        assert_eq!(&inv * &q, Q::one());
        assert_eq!(Q::zero().checked_inverse(0.0), Err(Error::ZeroDivisor));
        assert_eq!(
            Quaternion::<f64>::new(1e-15, 0.0, 0.0, 0.0).checked_inverse(1e-12),
            Err(Error::ZeroDivisor)
        );
    }

    #[test]
    fn predicates() {
        assert!(Q::from_ints(3, 0, 0, 0).is_real(0.0));
        assert!(Q::from_ints(0, 2, -1, 0).is_pure_imaginary(0.0));
        assert!(!Q::from_ints(1, 2, -1, 0).is_pure_imaginary(0.0));
        let almost = Quaternion::<f64>::new(1.0, 1e-16, 0.0, 0.0);
        assert!(almost.is_real(1e-12));
        let almost_exact = Q::from_ratios([(1, 1), (1, 1_000_000_000_000_000), (0, 1), (0, 1)]);
        assert!(!almost_exact.is_real(1e-12));
    }

    #[test]
    fn json_encoding() {
        let q = Q::from_ratios([(1, 2), (-3, 1), (0, 1), (7, 5)]);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, r#"["1/2","-3/1","0/1","7/5"]"#);
        let back: Q = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
        let f: Quaternion<f64> = serde_json::from_str("[1, 0.5, \"1/4\", -2]").unwrap();
        assert_eq!(f, Quaternion::new(1.0, 0.5, 0.25, -2.0));
        assert_eq!(serde_json::to_string(&f).unwrap(), "[1.0,0.5,0.25,-2.0]");
        assert!(serde_json::from_str::<Q>("[1, 2, 3]").is_err());
    }
}
