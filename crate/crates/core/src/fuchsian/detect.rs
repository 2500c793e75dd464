use serde::{Deserialize, Serialize};

use super::{
    loxodromic_words, nonelementary_witness, trace_audit, GroupPresentation, LoxodromicWord, TraceAudit, Word,
};
use crate::cartan::{cartan_invariant, BoundaryTriple};
use crate::hform::{ProjectivePoint, VectorH21};
use crate::isom::{frame_from_boundary_pair, FixedPointOptions, Sp21Matrix};
use crate::quat::Quaternion;
use crate::scalar::Scalar;

const ENTRY_NAMES: [[&str; 3]; 3] = [["a", "b", "c"], ["d", "e", "f"], ["g", "h", "l"]];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetectOptions {
    pub max_word_len: usize,
    pub tol: f64,
    /// Seed for the dynamical fixed-point search.
    pub seed: u64,
    /// How many further loxodromic words may replace a degenerate second
    /// element before giving up.
    pub max_reselections: usize,
}

impl Default for DetectOptions {
    fn default() -> Self {
        Self {
            max_word_len: 6,
            tol: 1e-9,
            seed: 0,
            max_reselections: 8,
        }
    }
}

impl DetectOptions {
    fn fixed_point_options(&self) -> FixedPointOptions {
        FixedPointOptions {
            tol: self.tol,
            seed: self.seed,
            ..FixedPointOptions::default()
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub words_audited: usize,
    /// The normalizing loxodromic, sent to `diag(λμ, ν, μ/λ)`.
    pub first_loxodromic: Option<Word>,
    pub second_loxodromic: Option<Word>,
    /// Sign of the real middle entry `ν` after normalization.
    pub middle_sign: Option<i8>,
    /// Cartan angle of `(0, ∞, B'(0))` in normalized coordinates.
    pub cartan_angle: Option<f64>,
    pub reselections: usize,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[serde(bound = "S: Scalar")]
pub enum FuchsianVerdict<S> {
    /// Every generator preserves the line `{p : <p, polar> = 0}` (input
    /// coordinates); `conjugator` sends it to the line with polar `e2`.
    QuaternionicLine {
        polar: VectorH21<f64>,
        conjugator: Sp21Matrix<f64>,
        diagnostics: Diagnostics,
    },
    /// `conjugator · g · conjugator⁻¹` is real for every generator.
    RealFuchsian {
        conjugator: Sp21Matrix<f64>,
        diagnostics: Diagnostics,
    },
    NotRealTrace {
        witness_word: Word,
        trace: Quaternion<S>,
    },
    Inconclusive {
        diagnostics: Diagnostics,
    },
}

impl<S> FuchsianVerdict<S> {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::QuaternionicLine { .. } => "quaternionic_line",
            Self::RealFuchsian { .. } => "real_fuchsian",
            Self::NotRealTrace { .. } => "not_real_trace",
            Self::Inconclusive { .. } => "inconclusive",
        }
    }

    pub fn diagnostics(&self) -> Option<&Diagnostics> {
        match self {
            Self::QuaternionicLine { diagnostics, .. }
            | Self::RealFuchsian { diagnostics, .. }
            | Self::Inconclusive { diagnostics } => Some(diagnostics),
            Self::NotRealTrace { .. } => None,
        }
    }
}

/// Outcome of examining one candidate second loxodromic.
#[allow(clippy::large_enum_variant)]
enum Step {
    Done(FuchsianVerdict<f64>),
    Reselect(String),
}

fn rel_scale(m: &Sp21Matrix<f64>) -> f64 {
    m.max_abs().max(1.0)
}

/// Decides whether the group preserves a quaternionic line or is conjugate
/// into `SO(2,1)`:
///
/// 1. audit traces of all words up to `max_word_len` in input coordinates;
/// 2. find two loxodromics with disjoint fixed points;
/// 3. send the fixed points of the shortest loxodromic `A` to `∞` and `0`;
/// 4. read the corner entries `c`, `g` of the second loxodromic `B` and
///    verify the matching block shape on every generator.
///
/// A second loxodromic with `|c|`, `|g|` or (in the real case) `|f|` below
/// tolerance is replaced by the next one disjoint from `A`.
pub fn fuchsian_detect<S: Scalar>(g: &GroupPresentation<S>, opts: &DetectOptions) -> FuchsianVerdict<S> {
    let words_audited = match trace_audit(g, opts.max_word_len, opts.tol) {
        TraceAudit::Pass { words_checked } => words_checked,
        TraceAudit::Fail { witness, trace } => {
            return FuchsianVerdict::NotRealTrace {
                witness_word: witness,
                trace,
            }
        }
    };
    let mut diag = Diagnostics {
        words_audited,
        ..Diagnostics::default()
    };
    let gf = g.to_f64();
    match detect_float(&gf, opts, &mut diag) {
        FuchsianVerdict::QuaternionicLine { polar, conjugator, .. } => FuchsianVerdict::QuaternionicLine {
            polar,
            conjugator,
            diagnostics: diag,
        },
        FuchsianVerdict::RealFuchsian { conjugator, .. } => FuchsianVerdict::RealFuchsian {
            conjugator,
            diagnostics: diag,
        },
        _ => FuchsianVerdict::Inconclusive { diagnostics: diag },
    }
}

fn inconclusive(diag: &mut Diagnostics, note: String) -> FuchsianVerdict<f64> {
    diag.notes.push(note);
    FuchsianVerdict::Inconclusive {
        diagnostics: Diagnostics::default(),
    }
}

fn detect_float(g: &GroupPresentation<f64>, opts: &DetectOptions, diag: &mut Diagnostics) -> FuchsianVerdict<f64> {
    let fp = opts.fixed_point_options();
    if nonelementary_witness(g, opts.max_word_len, &fp).is_none() {
        return inconclusive(
            diag,
            format!(
                "no two loxodromics with disjoint fixed points up to length {}: elementary or L too small",
                opts.max_word_len
            ),
        );
    }

    let mut lox = loxodromic_words(g, opts.max_word_len, &fp);
    let first = lox.next().expect("a witness pair exists");
    diag.first_loxodromic = Some(first.word.clone());
    let (att, rep) = first.fixed.pair().expect("loxodromic");
    let q1 = match frame_from_boundary_pair(att, rep, opts.tol) {
        Ok(q) => q,
        Err(e) => return inconclusive(diag, format!("normalizing frame for {}: {e}", first.word)),
    };

    let a0 = first.matrix.conjugate(&q1);
    let tol_a = opts.tol * rel_scale(&a0);
    for (r, names) in ENTRY_NAMES.iter().enumerate() {
        for (c, name) in names.iter().enumerate() {
            let x = a0.entry(r, c);
            let bad = if r == c {
                x.im().norm() > tol_a
            } else {
                x.norm() > tol_a
            };
            if bad {
                return inconclusive(
                    diag,
                    format!("normalized {} is not real diagonal: entry {name} = {x}", first.word),
                );
            }
        }
    }
    diag.middle_sign = Some(if a0.entry(1, 1).w < 0.0 { -1 } else { 1 });

    let conjugated = g.conjugated(&q1);
    for cand in lox.filter(|b| first.disjoint_from(b, opts.tol)) {
        match examine_second(g, &conjugated, &q1, &cand, opts, diag) {
            Step::Done(v) => return v,
            Step::Reselect(why) => {
                diag.notes.push(format!("skipped {}: {why}", cand.word));
                if diag.reselections == opts.max_reselections {
                    return inconclusive(diag, "reselection limit reached".into());
                }
                diag.reselections += 1;
            }
        }
    }
    inconclusive(
        diag,
        format!("no usable second loxodromic up to length {}", opts.max_word_len),
    )
}

fn examine_second(
    input: &GroupPresentation<f64>,
    conjugated: &GroupPresentation<f64>,
    q1: &Sp21Matrix<f64>,
    cand: &LoxodromicWord,
    opts: &DetectOptions,
    diag: &mut Diagnostics,
) -> Step {
    let b = cand.matrix.conjugate(q1);
    let scale = rel_scale(&b);
    let (c, gq, f) = (b.entry(0, 2), b.entry(2, 0), b.entry(1, 2));
    if c.norm() <= opts.tol * scale || gq.norm() <= opts.tol * scale {
        return Step::Reselect(format!(
            "corner entries vanish (|c| = {:e}, |g| = {:e})",
            c.norm(),
            gq.norm()
        ));
    }
    let pure = |x: &Quaternion<f64>| x.w.abs() <= opts.tol * x.norm();
    let real = |x: &Quaternion<f64>| x.im().norm() <= opts.tol * x.norm();

    let case_one = pure(c) && pure(gq);
    let case_two = real(c) && real(gq);
    if case_two && f.norm() <= opts.tol * scale {
        return Step::Reselect("f vanishes".into());
    }
    diag.second_loxodromic = Some(cand.word.clone());
    diag.cartan_angle = ProjectivePoint::new(b.column(2))
        .ok()
        .and_then(|p| BoundaryTriple::new([ProjectivePoint::origin(), ProjectivePoint::infinity(), p], opts.tol).ok())
        .and_then(|t| cartan_invariant(&t, opts.tol).ok());

    if case_one {
        for (k, m) in conjugated.generators().iter().enumerate() {
            let tol = opts.tol * rel_scale(m);
            for (r, col) in [(0, 1), (1, 0), (1, 2), (2, 1)] {
                if m.entry(r, col).norm() > tol {
                    return Step::Done(inconclusive(
                        diag,
                        format!(
                            "generator {k}: entry {} = {} breaks the line block shape",
                            ENTRY_NAMES[r][col],
                            m.entry(r, col)
                        ),
                    ));
                }
            }
            for (i, names) in ENTRY_NAMES.iter().enumerate() {
                if m.entry(i, i).im().norm() > tol {
                    return Step::Done(inconclusive(
                        diag,
                        format!(
                            "generator {k}: diagonal entry {} = {} is not real",
                            names[i],
                            m.entry(i, i)
                        ),
                    ));
                }
            }
        }
        let polar = q1.inverse_formula().mul_vec(&VectorH21::e2());
        return Step::Done(FuchsianVerdict::QuaternionicLine {
            polar,
            conjugator: q1.clone(),
            diagnostics: Diagnostics::default(),
        });
    }

    if case_two {
        let phase = f.conj().scale(&(1.0 / f.norm()));
        let d = Sp21Matrix::diag([Quaternion::one(), phase, Quaternion::one()]);
        let conjugator = &d * q1;
        for (k, m) in input.conjugated(&conjugator).generators().iter().enumerate() {
            let tol = opts.tol * rel_scale(m);
            for (r, names) in ENTRY_NAMES.iter().enumerate() {
                for (col, name) in names.iter().enumerate() {
                    let x = m.entry(r, col);
                    if x.im().norm() > tol {
                        return Step::Done(inconclusive(
                            diag,
                            format!("generator {k}: entry {name} = {x} is not real after normalization"),
                        ));
                    }
                }
            }
        }
        return Step::Done(FuchsianVerdict::RealFuchsian {
            conjugator,
            diagnostics: Diagnostics::default(),
        });
    }

    Step::Done(inconclusive(
        diag,
        format!(
            "{}: corner entries c = {c}, g = {gq} are neither both real nor both pure imaginary",
            cand.word
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchsian::{line_preservation_residual, real_conjugation_residual};
    use crate::scalar::Rational;

    type Q = Quaternion<Rational>;

    fn diag2() -> Sp21Matrix<Rational> {
        Sp21Matrix::diag([
            Q::from_ints(2, 0, 0, 0),
            Q::one(),
            Q::from_ratios([(1, 2), (0, 1), (0, 1), (0, 1)]),
        ])
    }

    fn case_one() -> Sp21Matrix<Rational> {
        Sp21Matrix::from_rows([
            [Q::from_ints(2, 0, 0, 0), Q::zero(), Q::i()],
            [Q::zero(), Q::one(), Q::zero()],
            [-Q::i(), Q::zero(), Q::one()],
        ])
    }

    #[test]
    fn case_one_example() {
        let g = GroupPresentation::new(vec![diag2(), case_one()], None, 0.0).unwrap();
        let v = fuchsian_detect(&g, &DetectOptions::default());
        let FuchsianVerdict::QuaternionicLine { polar, diagnostics, .. } = &v else {
            panic!("{v:?}");
        };
        // polar is a real multiple of e2 up to a unit on the right
        assert!(polar.0[0].norm() < 1e-12 && polar.0[2].norm() < 1e-12);
        assert!(polar.0[1].norm() > 0.5);
        assert_eq!(diagnostics.middle_sign, Some(1));
        assert!((diagnostics.cartan_angle.unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-6);
        assert!(line_preservation_residual(&g.to_f64(), polar, 6, 20, 1) < 1e-8);
    }

    #[test]
    fn real_pair() {
        // real Heisenberg translation t; t J t moves both 0 and ∞
        let t = Sp21Matrix::from_real([[1.0, -1.0, -0.5], [0.0, 1.0, 1.0], [0.0, 0.0, 1.0]]);
        let a = Sp21Matrix::from_real([[2.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.5]]);
        let b = a.conjugate(&(&(&t * &Sp21Matrix::j()) * &t));
        let g = GroupPresentation::new(vec![a, b], None, 1e-12).unwrap();
        let v = fuchsian_detect(&g, &DetectOptions::default());
        let FuchsianVerdict::RealFuchsian {
            conjugator,
            diagnostics,
        } = &v
        else {
            panic!("{v:?}");
        };
        assert!(real_conjugation_residual(&g, conjugator, 4) < 1e-8);
        assert!(diagnostics.cartan_angle.unwrap() < 1e-6);
    }

    #[test]
    fn non_real_trace() {
        let m = Sp21Matrix::diag([
            Q::from_ints(0, 2, 0, 0),
            Q::one(),
            Q::from_ratios([(0, 1), (1, 2), (0, 1), (0, 1)]),
        ]);
        let g = GroupPresentation::new(vec![m, diag2()], None, 0.0).unwrap();
        let v = fuchsian_detect(&g, &DetectOptions::default());
        match v {
            FuchsianVerdict::NotRealTrace { witness_word, .. } => assert_eq!(witness_word.to_string(), "a"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn elementary_is_inconclusive() {
        let g = GroupPresentation::new(vec![diag2()], None, 0.0).unwrap();
        let v = fuchsian_detect(
            &g,
            &DetectOptions {
                max_word_len: 3,
                ..Default::default()
            },
        );
        let FuchsianVerdict::Inconclusive { diagnostics } = &v else {
            panic!("{v:?}");
        };
        assert!(diagnostics.notes[0].contains("elementary"));
        assert_eq!(v.kind(), "inconclusive");
    }

    #[test]
    fn deterministic_json() {
        let g = GroupPresentation::new(vec![diag2(), case_one()], None, 0.0).unwrap();
        let o = DetectOptions {
            seed: 7,
            ..Default::default()
        };
        let a = serde_json::to_string(&fuchsian_detect(&g, &o)).unwrap();
        let b = serde_json::to_string(&fuchsian_detect(&g, &o)).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("{\"kind\":\"quaternionic_line\""));
    }
}
