//! Attracting and repelling boundary points by iterating the projective
//! action.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Sp21Matrix;
use crate::hform::{PointType, ProjectivePoint};
use crate::model::{psi, Horospherical};
use crate::quat::Quaternion;

/// Minimum `|κ| − 1` for the multiplier `A p = p κ` at the attracting point.
/// Parabolic iterates creep towards their fixed point and can pass the
/// distance tests; their multiplier has modulus 1.
const MIN_DILATION_GAP: f64 = 1e-6;
const REFINED_STEP: f64 = 1e-15;
const EXTRA_ROUNDS: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct FixedPointOptions {
    /// Number of squaring rounds; round `k` applies `A^(2^k)`.
    pub max_iters: usize,
    /// Convergence and distinctness threshold on the chordal distance.
    pub tol: f64,
    pub seed: u64,
    /// Number of random null starting points.
    pub starts: usize,
}

impl Default for FixedPointOptions {
    fn default() -> Self {
        Self {
            max_iters: 64,
            tol: 1e-9,
            seed: 0,
            starts: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FixedPoints {
    Loxodromic {
        attracting: ProjectivePoint<f64>,
        repelling: ProjectivePoint<f64>,
    },
    Other {
        reason: String,
    },
}

impl FixedPoints {
    pub fn pair(&self) -> Option<(&ProjectivePoint<f64>, &ProjectivePoint<f64>)> {
        match self {
            Self::Loxodromic { attracting, repelling } => Some((attracting, repelling)),
            Self::Other { .. } => None,
        }
    }
}

fn random_null_point(rng: &mut ChaCha8Rng) -> ProjectivePoint<f64> {
    let zeta = Quaternion::random_gaussian(rng);
    let v = Quaternion::random_pure_imaginary(rng);
    psi(&Horospherical::Finite { zeta, v, u: 0.0 })
}

fn normalized(p: ProjectivePoint<f64>) -> ProjectivePoint<f64> {
    let n = p.rep().norm();
    p.rescaled(&Quaternion::real(1.0 / n)).unwrap_or(p)
}

/// Limit of `A^(2^k) s` over the starting points, if it exists and is the
/// same for all of them.
fn attractor(
    a: &Sp21Matrix<f64>,
    starts: &[ProjectivePoint<f64>],
    opts: &FixedPointOptions,
) -> Result<ProjectivePoint<f64>, String> {
    let mut power = a.scaled(1.0 / a.norm());
    let mut current: Vec<_> = starts.iter().map(|s| normalized(power.apply(s))).collect();
    let mut converged = None;
    for round in 0..opts.max_iters {
        power = &power * &power;
        let n = power.norm();
        if !n.is_finite() || n == 0.0 {
            return Err(format!("power iteration degenerated at round {round}"));
        }
        power = power.scaled(1.0 / n);
        let next: Vec<_> = starts.iter().map(|s| normalized(power.apply(s))).collect();
        let step = current
            .iter()
            .zip(&next)
            .map(|(x, y)| x.distance(y))
            .fold(0.0, f64::max);
        current = next;
        if step < opts.tol {
            converged = converged.or(Some(round));
        }
        // a few rounds past convergence take the limit to full precision
        let polished = step <= REFINED_STEP || converged.is_some_and(|r| round >= r + EXTRA_ROUNDS);
        if converged.is_some() && polished {
            let first = &current[0];
            if current.iter().all(|x| first.distance(x) < opts.tol) {
                return Ok(first.clone());
            }
            return Err("starting points converge to different limits".into());
        }
    }
    Err(format!("no convergence after {} squaring rounds", opts.max_iters))
}

/// `|κ|` for `A p ≈ p κ`, read off the largest coordinate of `p`.
fn multiplier(a: &Sp21Matrix<f64>, p: &ProjectivePoint<f64>) -> f64 {
    let v = p.rep();
    let (i, _) = v.0.iter().enumerate().fold(
        (0, 0.0),
        |best, (i, q)| if q.norm() > best.1 { (i, q.norm()) } else { best },
    );
    a.mul_vec(v).0[i].norm() / v.0[i].norm()
}

/// Classifies `A` as loxodromic when forward and backward iterates from
/// several random null points converge to two distinct null fixed points.
///
/// Deterministic in `opts.seed`.
pub fn fixed_points_dynamical(a: &Sp21Matrix<f64>, opts: &FixedPointOptions) -> FixedPoints {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let starts: Vec<_> = (0..opts.starts.max(1)).map(|_| random_null_point(&mut rng)).collect();
    let other = |reason: String| FixedPoints::Other { reason };

    let attracting = match attractor(a, &starts, opts) {
        Ok(p) => p,
        Err(e) => return other(format!("forward: {e}")),
    };
    let repelling = match attractor(&a.inverse_formula(), &starts, opts) {
        Ok(p) => p,
        Err(e) => return other(format!("backward: {e}")),
    };
    if attracting.distance(&repelling) <= opts.tol {
        return other("forward and backward limits coincide".into());
    }
    for (name, p) in [("attracting", &attracting), ("repelling", &repelling)] {
        if p.point_type(opts.tol) != PointType::Null {
            return other(format!("{name} limit is not a null point"));
        }
        let moved = a.apply(p).distance(p);
        if moved > opts.tol {
            return other(format!("{name} limit is not fixed (moved {moved:e})"));
        }
    }
    let kappa = multiplier(a, &attracting);
    if kappa - 1.0 <= MIN_DILATION_GAP {
        return other(format!("attracting multiplier {kappa} does not dilate"));
    }
    let canon = |p: &ProjectivePoint<f64>| {
        ProjectivePoint::new(p.canonical(opts.tol)).expect("canonical form of a nonzero vector")
    };
    FixedPoints::Loxodromic {
        attracting: canon(&attracting),
        repelling: canon(&repelling),
    }
}
