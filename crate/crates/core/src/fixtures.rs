//! Seeded test groups for the detector: real pairs, pairs preserving the
//! standard quaternionic line, generic pairs that fail the trace audit, and
//! single diagonal loxodromics.

use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix3;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuchsian::{trace_audit, GroupPresentation, TraceAudit};
use crate::hform::{herm, ProjectivePoint};
use crate::isom::{fixed_points_dynamical, frame_from_boundary_pair, FixedPointOptions, Sp21Matrix};
use crate::model::{psi, Horospherical};
use crate::quat::Quaternion;
use crate::scalar::{Rational, RESIDUAL_TOL};

const MAX_ATTEMPTS: usize = 200;
/// Minimum chordal separation between fixed points of the two generators.
const MIN_SEPARATION: f64 = 1e-2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixtureKind {
    So21Pair,
    HlinePair,
    GenericPair,
    SingleDiagonal,
}

impl FixtureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::So21Pair => "so21-pair",
            Self::HlinePair => "hline-pair",
            Self::GenericPair => "generic-pair",
            Self::SingleDiagonal => "single-diagonal",
        }
    }
}

impl fmt::Display for FixtureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FixtureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Self::So21Pair, Self::HlinePair, Self::GenericPair, Self::SingleDiagonal]
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown fixture kind {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FixtureSpec {
    pub kind: FixtureKind,
    pub seed: u64,
    /// Range for the dilation factor `λ > 1` of each generator.
    pub lambda_range: (f64, f64),
    /// Length of the trace audit run on real-trace fixtures before they are
    /// returned; 0 skips it.
    pub word_length: usize,
    /// Apply a trace-preserving conjugation (real pairs) or a quaternionic
    /// rotation (line pairs).
    pub conjugate: bool,
    /// Rotation parts of `diag(λμ, ν, μ/λ)` for `single-diagonal`.
    pub mu: Quaternion<f64>,
    pub nu: Quaternion<f64>,
}

impl Default for FixtureSpec {
    fn default() -> Self {
        Self {
            kind: FixtureKind::So21Pair,
            seed: 0,
            lambda_range: (1.5, 4.0),
            word_length: 6,
            conjugate: true,
            mu: Quaternion::one(),
            nu: Quaternion::one(),
        }
    }
}

impl FixtureSpec {
    pub fn new(kind: FixtureKind, seed: u64) -> Self {
        Self {
            kind,
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.lambda_range;
        if !(lo > 1.0 && hi >= lo && hi.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "λ range must satisfy 1 < min ≤ max, got ({lo}, {hi})"
            )));
        }
        for (name, q) in [("mu", &self.mu), ("nu", &self.nu)] {
            if (q.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidParams(format!("{name} must be a unit quaternion")));
            }
        }
        Ok(())
    }
}

/// A generated presentation; line pairs are exact, everything else float.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Fixture {
    Exact(GroupPresentation<Rational>),
    Float(GroupPresentation<f64>),
}

impl Fixture {
    pub fn to_f64(&self) -> GroupPresentation<f64> {
        match self {
            Self::Exact(g) => g.to_f64(),
            Self::Float(g) => g.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentations serialize")
    }
}

/// Deterministic in `spec`.
pub fn generate(spec: &FixtureSpec) -> Result<Fixture> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.kind {
        FixtureKind::So21Pair => so21_pair(spec, &mut rng).map(Fixture::Float),
        FixtureKind::HlinePair => hline_pair(spec, &mut rng).map(Fixture::Exact),
        FixtureKind::GenericPair => generic_pair(spec, &mut rng).map(Fixture::Float),
        FixtureKind::SingleDiagonal => single_diagonal(spec, &mut rng).map(Fixture::Float),
    }
}

fn sample_lambda(spec: &FixtureSpec, rng: &mut ChaCha8Rng) -> f64 {
    let (lo, hi) = spec.lambda_range;
    if hi > lo {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}

fn separated(a: &Sp21Matrix<f64>, b: &Sp21Matrix<f64>) -> bool {
    let opts = FixedPointOptions::default();
    let (fa, fb) = (fixed_points_dynamical(a, &opts), fixed_points_dynamical(b, &opts));
    match (fa.pair(), fb.pair()) {
        (Some((a1, a2)), Some((b1, b2))) => [a1.distance(b1), a1.distance(b2), a2.distance(b1), a2.distance(b2)]
            .iter()
            .all(|&d| d > MIN_SEPARATION),
        _ => false,
    }
}

fn audited<S: crate::scalar::Scalar>(g: GroupPresentation<S>, spec: &FixtureSpec) -> Result<GroupPresentation<S>> {
    if spec.word_length == 0 {
        return Ok(g);
    }
    match trace_audit(&g, spec.word_length, 1e-9) {
        TraceAudit::Pass { .. } => Ok(g),
        TraceAudit::Fail { witness, .. } => Err(Error::Degenerate(format!(
            "{} fixture failed its own trace audit at {witness}",
            spec.kind
        ))),
    }
}

/// Real `X` with `Xᵀ J + J X = 0`.
fn so21_generator(x: f64, y: f64, z: f64) -> Matrix3<f64> {
    Matrix3::new(x, y, 0.0, z, 0.0, -y, 0.0, -z, -x)
}

fn real_matrix(m: &Matrix3<f64>) -> Sp21Matrix<f64> {
    Sp21Matrix::from_real(std::array::from_fn(|r| std::array::from_fn(|c| m[(r, c)])))
}

/// `exp(X)` for a random generator `X` whose eigenvalues are `0, ±ln λ`.
fn random_so21_loxodromic(lambda: f64, rng: &mut ChaCha8Rng) -> Sp21Matrix<f64> {
    loop {
        let [x, y, z]: [f64; 3] = std::array::from_fn(|_| rng.sample(rand_distr::StandardNormal));
        // eigenvalues of X are 0 and ±s with s² = x² + 2yz
        let s2 = x * x + 2.0 * y * z;
        if s2 < 0.05 {
            continue;
        }
        let k = lambda.ln() / s2.sqrt();
        return real_matrix(&so21_generator(k * x, k * y, k * z).exp());
    }
}

fn so21_pair(spec: &FixtureSpec, rng: &mut ChaCha8Rng) -> Result<GroupPresentation<f64>> {
    for _ in 0..MAX_ATTEMPTS {
        let a = random_so21_loxodromic(sample_lambda(spec, rng), rng);
        let b = random_so21_loxodromic(sample_lambda(spec, rng), rng);
        if !separated(&a, &b) {
            continue;
        }
        let mut gens = vec![a, b];
        if spec.conjugate {
            let c = trace_preserving_conjugator(rng);
            gens = gens.iter().map(|g| g.conjugate(&c)).collect();
        }
        return audited(GroupPresentation::new(gens, None, RESIDUAL_TOL)?, spec);
    }
    Err(Error::Degenerate(
        "could not sample two real loxodromics with disjoint axes".into(),
    ))
}

/// `diag(q,q,q) · R · diag(κ, 1, 1/κ)` with `R` real in `SO(2,1)` and `q` a
/// unit quaternion.
fn trace_preserving_conjugator(rng: &mut ChaCha8Rng) -> Sp21Matrix<f64> {
    let [x, y, z]: [f64; 3] = std::array::from_fn(|_| 0.5 * rng.sample::<f64, _>(rand_distr::StandardNormal));
    let r = real_matrix(&so21_generator(x, y, z).exp());
    let kappa = rng.random_range(0.5..2.0);
    let dilation = Sp21Matrix::from_real([[kappa, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0 / kappa]]);
    let q = Quaternion::random_unit(rng);
    let rotation = Sp21Matrix::diag([q.clone(), q.clone(), q]);
    &(&rotation * &r) * &dilation
}

fn small_rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64, nonzero: bool) -> Rational {
    loop {
        let n = rng.random_range(-max_num..=max_num);
        if nonzero && n == 0 {
            continue;
        }
        return Rational::new(n.into(), rng.random_range(1..=max_den).into());
    }
}

/// Rational `λ > 1` near a uniform sample of the range, denominator ≤ 4.
fn rational_lambda(spec: &FixtureSpec, rng: &mut ChaCha8Rng) -> Rational {
    let x = sample_lambda(spec, rng);
    let den = rng.random_range(1..=4i64);
    let num = ((x * den as f64).round() as i64).max(den + 1);
    Rational::new(num.into(), den.into())
}

/// `[[a, 0, c·u], [0, ±1, 0], [g·u, 0, l]]` with `u = i`, `a + l = λ + 1/λ`
/// and `g = (1 − a l)/c`, which makes `<·,·>` invariant exactly.
fn hline_element(spec: &FixtureSpec, rng: &mut ChaCha8Rng) -> Sp21Matrix<Rational> {
    let lambda = rational_lambda(spec, rng);
    let trace = &lambda + lambda.recip();
    let a = small_rational(rng, 6, 3, false);
    let l = &trace - &a;
    let c = small_rational(rng, 4, 3, true);
    let g = (Rational::one() - &a * &l) / &c;
    let middle = if rng.random_bool(0.5) {
        Rational::one()
    } else {
        -Rational::one()
    };
    type Q = Quaternion<Rational>;
    let imag = |s: Rational| Q::new(Rational::zero(), s, Rational::zero(), Rational::zero());
    Sp21Matrix::from_rows([
        [Q::real(a), Q::zero(), imag(c)],
        [Q::zero(), Q::real(middle), Q::zero()],
        [imag(g), Q::zero(), Q::real(l)],
    ])
}

/// Entrywise `x ↦ q x q⁻¹`. This is an automorphism of `H` commuting with
/// conjugation, so membership holds exactly for any nonzero rational `q`.
fn rotate_exact(m: &Sp21Matrix<Rational>, q: &Quaternion<Rational>) -> Sp21Matrix<Rational> {
    let inv = q.checked_inverse(0.0).expect("nonzero rotation");
    Sp21Matrix(std::array::from_fn(|r| {
        std::array::from_fn(|c| &(q * &m.0[r][c]) * &inv)
    }))
}

fn hline_pair(spec: &FixtureSpec, rng: &mut ChaCha8Rng) -> Result<GroupPresentation<Rational>> {
    for _ in 0..MAX_ATTEMPTS {
        let a = hline_element(spec, rng);
        let b = hline_element(spec, rng);
        if !separated(&a.to_f64(), &b.to_f64()) {
            continue;
        }
        let mut gens = vec![a, b];
        if spec.conjugate {
            let q = loop {
                let q = Quaternion::from_ints(
                    rng.random_range(-2..=2),
                    rng.random_range(-2..=2),
                    rng.random_range(-2..=2),
                    rng.random_range(-2..=2),
                );
                if !q.is_real(0.0) {
                    break q;
                }
            };
            gens = gens.iter().map(|g| rotate_exact(g, &q)).collect();
        }
        return audited(GroupPresentation::new(gens, None, 0.0)?, spec);
    }
    Err(Error::Degenerate(
        "could not sample two line-preserving loxodromics with disjoint fixed points".into(),
    ))
}

fn random_boundary_point(rng: &mut ChaCha8Rng) -> ProjectivePoint<f64> {
    psi(&Horospherical::Finite {
        zeta: Quaternion::random_gaussian(rng),
        v: Quaternion::random_pure_imaginary(rng),
        u: 0.0,
    })
}

/// Lower bound on `|<p, q>| / (‖p‖ ‖q‖)` for the fixed points of a generic
/// element; nearby fixed points give a badly conditioned frame.
const MIN_FIXED_POINT_SEPARATION: f64 = 0.1;

/// `M diag(λμ, ν, μ/λ) M⁻¹` for a frame `M` of a random boundary pair and
/// random unit `μ`, `ν`.
fn generic_element(spec: &FixtureSpec, rng: &mut ChaCha8Rng) -> Result<Sp21Matrix<f64>> {
    let lambda = sample_lambda(spec, rng);
    let mu = Quaternion::random_unit(rng);
    let nu = Quaternion::random_unit(rng);
    let d = Sp21Matrix::diag([mu.scale(&lambda), nu, mu.scale(&(1.0 / lambda))]);
    let (p, q) = loop {
        let (p, q) = (random_boundary_point(rng), random_boundary_point(rng));
        let separation = herm(p.rep(), q.rep()).norm() / (p.rep().norm() * q.rep().norm());
        if separation >= MIN_FIXED_POINT_SEPARATION {
            break (p, q);
        }
    };
    let frame = frame_from_boundary_pair(&p, &q, 1e-9)?;
    Ok(d.conjugate(&frame.inverse_formula()))
}

fn generic_pair(spec: &FixtureSpec, rng: &mut ChaCha8Rng) -> Result<GroupPresentation<f64>> {
    let gens = vec![generic_element(spec, rng)?, generic_element(spec, rng)?];
    GroupPresentation::new(gens, None, RESIDUAL_TOL)
}

fn single_diagonal(spec: &FixtureSpec, rng: &mut ChaCha8Rng) -> Result<GroupPresentation<f64>> {
    let lambda = sample_lambda(spec, rng);
    let d = Sp21Matrix::diag([spec.mu.scale(&lambda), spec.nu.clone(), spec.mu.scale(&(1.0 / lambda))]);
    GroupPresentation::new(vec![d], None, RESIDUAL_TOL)
}
