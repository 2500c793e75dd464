//! Real-trace groups in `Sp(2,1)`: word enumeration, the trace audit, a
//! non-elementarity witness and the detector that finds the preserved
//! quaternionic line or the conjugacy into `SO(2,1)`.

mod detect;
mod words;

pub use detect::{fuchsian_detect, DetectOptions, Diagnostics, FuchsianVerdict};
pub use words::{reduced_word_count, Letter, Word, WordIter};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hform::{herm, herm_norm, VectorH21};
use crate::isom::{fixed_points_dynamical, FixedPointOptions, FixedPoints, Sp21Matrix};
use crate::quat::Quaternion;
use crate::scalar::Scalar;

/// Finitely many generators of a subgroup of `Sp(2,1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "S: Scalar")]
pub struct GroupPresentation<S> {
    generators: Vec<Sp21Matrix<S>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    labels: Vec<String>,
}

impl<S: Scalar> GroupPresentation<S> {
    /// Rejects generators whose membership residual exceeds
    /// `tol·max(1, ‖A‖²_max)` (exact backend: any nonzero residual).
    pub fn new(generators: Vec<Sp21Matrix<S>>, labels: Option<Vec<String>>, tol: f64) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidParams(
                "a presentation needs at least one generator".into(),
            ));
        }
        if generators.len() > 26 {
            return Err(Error::InvalidParams("at most 26 generators are supported".into()));
        }
        let labels = labels.unwrap_or_default();
        if !labels.is_empty() && labels.len() != generators.len() {
            return Err(Error::InvalidParams(format!(
                "{} labels for {} generators",
                labels.len(),
                generators.len()
            )));
        }
        for (i, g) in generators.iter().enumerate() {
            if !is_member(g, tol) {
                return Err(Error::InvalidParams(format!(
                    "generator {} is not in Sp(2,1): residual {:e}",
                    i,
                    g.membership_residual().to_f64()
                )));
            }
        }
        Ok(Self { generators, labels })
    }

    /// Re-runs the membership check, e.g. after deserialization.
    pub fn validate(self, tol: f64) -> Result<Self> {
        let labels = if self.labels.is_empty() {
            None
        } else {
            Some(self.labels)
        };
        Self::new(self.generators, labels, tol)
    }

    pub fn generators(&self) -> &[Sp21Matrix<S>] {
        &self.generators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.generators.len())
            .flat_map(|gen| [Letter { gen, inverse: false }, Letter { gen, inverse: true }])
            .collect()
    }

    /// Generator or its inverse via the explicit inverse formula.
    pub fn letter_matrix(&self, l: Letter) -> Sp21Matrix<S> {
        let g = &self.generators[l.gen];
        if l.inverse {
            g.inverse_formula()
        } else {
            g.clone()
        }
    }

    pub fn enumerate_words(&self, max_len: usize) -> WordIter<'_, S> {
        WordIter::new(self, max_len)
    }

    /// Conjugates every generator by `q`.
    pub fn conjugated(&self, q: &Sp21Matrix<S>) -> Self {
        Self {
            generators: self.generators.iter().map(|g| g.conjugate(q)).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn to_f64(&self) -> GroupPresentation<f64> {
        GroupPresentation {
            generators: self.generators.iter().map(Sp21Matrix::to_f64).collect(),
            labels: self.labels.clone(),
        }
    }
}

pub(crate) fn is_member<S: Scalar>(g: &Sp21Matrix<S>, tol: f64) -> bool {
    let res = g.membership_residual();
    if S::EXACT {
        num_traits::Zero::is_zero(&res)
    } else {
        let scale = g.max_abs().to_f64().max(1.0);
        res.to_f64() <= tol * scale * scale
    }
}

/// Real entries within `tol` and `A* J A = J` within `tol`.
pub fn is_so21<S: Scalar>(m: &Sp21Matrix<S>, tol: f64) -> bool {
    m.max_imag().within(tol) && m.membership_residual().within(tol)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
#[serde(bound = "S: Scalar")]
pub enum TraceAudit<S> {
    Pass { words_checked: usize },
    Fail { witness: Word, trace: Quaternion<S> },
}

/// Checks `tr(w) ∈ R` for every reduced word up to length `max_len`; the
/// witness is the first failure in shortest-then-lexicographic order.
///
/// On the float backend the threshold is `tol·max(1, ‖w‖_max)`; the exact
/// backend ignores `tol`.
pub fn trace_audit<S: Scalar>(g: &GroupPresentation<S>, max_len: usize, tol: f64) -> TraceAudit<S> {
    let mut checked = 0;
    for (word, m) in g.enumerate_words(max_len) {
        checked += 1;
        let tr = m.trace();
        if !tr.is_real(tol * m.max_abs().to_f64().max(1.0)) {
            return TraceAudit::Fail {
                witness: word,
                trace: tr,
            };
        }
    }
    TraceAudit::Pass { words_checked: checked }
}

/// A loxodromic word with its boundary fixed points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoxodromicWord {
    pub word: Word,
    pub matrix: Sp21Matrix<f64>,
    pub fixed: FixedPoints,
}

impl LoxodromicWord {
    fn disjoint_from(&self, other: &LoxodromicWord, tol: f64) -> bool {
        match (self.fixed.pair(), other.fixed.pair()) {
            (Some((a1, r1)), Some((a2, r2))) => [a1.distance(a2), a1.distance(r2), r1.distance(a2), r1.distance(r2)]
                .iter()
                .all(|&d| d > tol),
            _ => false,
        }
    }
}

/// Loxodromic words in enumeration order.
pub(crate) fn loxodromic_words<'a>(
    g: &'a GroupPresentation<f64>,
    max_len: usize,
    opts: &'a FixedPointOptions,
) -> impl Iterator<Item = LoxodromicWord> + 'a {
    g.enumerate_words(max_len).filter_map(move |(word, matrix)| {
        let fixed = fixed_points_dynamical(&matrix, opts);
        fixed.pair()?;
        Some(LoxodromicWord { word, matrix, fixed })
    })
}

/// Two loxodromic words whose fixed-point pairs are disjoint (all four
/// cross-distances above `opts.tol`). Scans words shortest first and returns
/// the first such pair found.
pub fn nonelementary_witness(
    g: &GroupPresentation<f64>,
    max_len: usize,
    opts: &FixedPointOptions,
) -> Option<(LoxodromicWord, LoxodromicWord)> {
    let mut seen: Vec<LoxodromicWord> = Vec::new();
    for cand in loxodromic_words(g, max_len, opts) {
        if let Some(first) = seen.iter().find(|s| s.disjoint_from(&cand, opts.tol)) {
            return Some((first.clone(), cand));
        }
        seen.push(cand);
    }
    None
}

/// A vector with `<p, polar> = 0`, obtained by projecting `x`.
pub fn project_onto_line(x: &VectorH21<f64>, polar: &VectorH21<f64>) -> VectorH21<f64> {
    // <x − P c, P> = <x, P> − <P, P> c
    let c = herm(x, polar).scale(&(1.0 / herm_norm(polar)));
    x.sub(&polar.right_scale(&c))
}

/// Largest `|<w p, P>| / (‖w p‖ ‖P‖)` over enumerated words `w` and sample
/// points `p` of the line with polar vector `P`.
pub fn line_preservation_residual(
    g: &GroupPresentation<f64>,
    polar: &VectorH21<f64>,
    max_len: usize,
    samples: usize,
    seed: u64,
) -> f64 {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<_> = (0..samples)
        .map(|_| {
            let x = VectorH21::new(
                Quaternion::random_gaussian(&mut rng),
                Quaternion::random_gaussian(&mut rng),
                Quaternion::random_gaussian(&mut rng),
            );
            project_onto_line(&x, polar)
        })
        .collect();
    let pn = polar.norm();
    let mut worst: f64 = 0.0;
    for (_, m) in g.enumerate_words(max_len) {
        for p in &points {
            let wp = m.mul_vec(p);
            worst = worst.max(herm(&wp, polar).norm() / (wp.norm() * pn));
        }
    }
    worst
}

/// Largest imaginary component over `C w C⁻¹` for enumerated words `w`.
pub fn real_conjugation_residual(g: &GroupPresentation<f64>, conjugator: &Sp21Matrix<f64>, max_len: usize) -> f64 {
    let conj = g.conjugated(conjugator);
    conj.enumerate_words(max_len)
        .map(|(_, m)| m.max_imag())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn case_one() -> Sp21Matrix<Rational> {
        type Q = Quaternion<Rational>;
        Sp21Matrix::from_rows([
            [Q::from_ints(2, 0, 0, 0), Q::zero(), Q::i()],
            [Q::zero(), Q::one(), Q::zero()],
            [-Q::i(), Q::zero(), Q::one()],
        ])
    }

    fn diag2() -> Sp21Matrix<Rational> {
        type Q = Quaternion<Rational>;
        Sp21Matrix::diag([
            Q::from_ints(2, 0, 0, 0),
            Q::one(),
            Q::from_ratios([(1, 2), (0, 1), (0, 1), (0, 1)]),
        ])
    }

    #[test]
    fn rejects_non_members() {
        let mut bad = diag2();
        bad.0[2][2] = Quaternion::from_ratios([(1, 3), (0, 1), (0, 1), (0, 1)]);
        assert!(GroupPresentation::new(vec![bad], None, 0.0).is_err());
        assert!(GroupPresentation::<Rational>::new(vec![], None, 0.0).is_err());
        assert!(GroupPresentation::new(vec![diag2()], Some(vec!["x".into(), "y".into()]), 0.0).is_err());
    }

    #[test]
    fn audit_passes_on_case_one_group() {
        let g = GroupPresentation::new(vec![diag2(), case_one()], None, 0.0).unwrap();
        assert_eq!(trace_audit(&g, 6, 0.0), TraceAudit::Pass { words_checked: 1456 });
    }

    #[test]
    fn audit_finds_witness() {
        type Q = Quaternion<Rational>;
        let m = Sp21Matrix::diag([
            Q::from_ints(0, 2, 0, 0),
            Q::one(),
            Q::from_ratios([(0, 1), (1, 2), (0, 1), (0, 1)]),
        ]);
        let g = GroupPresentation::new(vec![m], None, 0.0).unwrap();
        match trace_audit(&g, 1, 0.0) {
            TraceAudit::Fail { witness, trace } => {
                assert_eq!(witness.to_string(), "a");
                assert_eq!(trace, Q::from_ratios([(1, 1), (5, 2), (0, 1), (0, 1)]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn witness_search() {
        let opts = FixedPointOptions::default();
        let single = GroupPresentation::new(vec![diag2()], None, 0.0).unwrap().to_f64();
        assert!(nonelementary_witness(&single, 4, &opts).is_none());
        let pair = GroupPresentation::new(vec![diag2(), case_one()], None, 0.0)
            .unwrap()
            .to_f64();
        let (a, b) = nonelementary_witness(&pair, 2, &opts).expect("pair");
        assert_eq!(a.word.to_string(), "a");
        assert_eq!(b.word.to_string(), "b");
    }

    #[test]
    fn so21_predicate() {
        assert!(is_so21(&diag2(), 0.0));
        assert!(!is_so21(&case_one(), 0.0));
        let mut not_member = diag2().to_f64();
        not_member.0[2][2] = Quaternion::real(1.0 / 3.0);
        assert!(!is_so21(&not_member, 1e-9));
    }

    #[test]
    fn line_projection() {
        let polar = VectorH21::new(
            Quaternion::new(0.1, 0.2, 0.0, 0.0),
            Quaternion::one(),
            Quaternion::zero(),
        );
        let x = VectorH21::new(Quaternion::j(), Quaternion::k(), Quaternion::new(1.0, 2.0, 3.0, 4.0));
        let p = project_onto_line(&x, &polar);
        assert!(herm(&p, &polar).norm() < 1e-14);
    }
}
