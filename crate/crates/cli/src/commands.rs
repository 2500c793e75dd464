use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use qfuchs_core::cartan::{cartan_invariant, is_degenerate, triple_product, BoundaryTriple};
use qfuchs_core::fixtures::{generate, FixtureSpec};
use qfuchs_core::fuchsian::{
    fuchsian_detect, line_preservation_residual, real_conjugation_residual, DetectOptions, FuchsianVerdict,
    GroupPresentation,
};
use qfuchs_core::hform::{PointType, ProjectivePoint, VectorH21};
use qfuchs_core::isom::{frame_from_boundary_pair, Sp21Matrix};
use qfuchs_core::report::{CheckRecord, Report};
use qfuchs_core::{Error, Quaternion, Rational, Scalar};

use crate::input::{Backend, Input};
use crate::{CliError, GenArgs, GlobalOpts, Outcome};

/// Window around 0 and π/2 in which a Cartan angle is flagged.
const CARTAN_FLAG_WINDOW: f64 = 1e-6;
/// Sample points per word for the line preservation check.
const LINE_SAMPLES: usize = 100;

fn scalar_value<S: Scalar>(x: &S) -> Value {
    serde_json::to_value(x.encode()).expect("scalars serialize")
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("core types serialize")
}

/// `residual ≤ tol·scale²` on the float backend, `residual = 0` on the exact
/// one.
fn residual_check<S: Scalar>(name: String, residual: &S, scale: f64, tol: f64) -> CheckRecord {
    if S::EXACT {
        CheckRecord {
            name,
            value: scalar_value(residual),
            threshold: Some(0.0),
            pass: residual.is_zero(),
        }
    } else {
        CheckRecord::at_most(name, residual.to_f64(), tol * scale * scale)
    }
}

fn echo(command: &str, file: &Path, extra: &str, backend: Backend, g: &GlobalOpts) -> String {
    format!(
        "{command} {}{extra} --tol {:e} --backend {}",
        file.display(),
        g.tol,
        backend.name()
    )
}

fn exit_for(report: &Report) -> u8 {
    if report.passed() {
        0
    } else {
        2
    }
}

pub fn validate(file: &Path, g: &GlobalOpts) -> Result<Outcome, CliError> {
    let input = Input::read(file)?;
    let backend = g.backend.resolve(&input);
    let mut report = Report::new(echo("validate", file, "", backend, g), &input.raw);
    match backend {
        Backend::Exact => validate_with::<Rational>(&input, g, &mut report)?,
        _ => validate_with::<f64>(&input, g, &mut report)?,
    }
    let code = exit_for(&report);
    Ok(Outcome::Report(report, code))
}

fn validate_with<S: Scalar>(input: &Input, g: &GlobalOpts, report: &mut Report) -> Result<(), CliError> {
    let (matrices, labels): (Vec<Sp21Matrix<S>>, Vec<String>) = if input.value.is_array() {
        (vec![input.parse::<Sp21Matrix<S>>()?], Vec::new())
    } else {
        let p: GroupPresentation<S> = input.parse()?;
        (p.generators().to_vec(), p.labels().to_vec())
    };
    for (k, m) in matrices.iter().enumerate() {
        let label = labels.get(k).cloned().unwrap_or_else(|| format!("matrix {k}"));
        let scale = m.max_abs().to_f64().max(1.0);
        report.push(residual_check(
            format!("{label}: membership residual"),
            &m.membership_residual(),
            scale,
            g.tol,
        ));
        for id in m.identities_residuals() {
            report.push(residual_check(
                format!("{label}: identity {}", id.label),
                &id.value,
                scale,
                g.tol,
            ));
        }
        let tr = m.trace();
        report.push(CheckRecord::flag(format!("{label}: trace"), to_value(&tr), true));
        let real = tr.is_real(g.tol * scale);
        report.push(CheckRecord::flag(format!("{label}: trace is real"), real, true));
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(bound = "S: Scalar")]
struct PointsFile<S> {
    points: [VectorH21<S>; 3],
}

pub fn cartan(file: &Path, g: &GlobalOpts) -> Result<Outcome, CliError> {
    let input = Input::read(file)?;
    let backend = g.backend.resolve(&input);
    let mut report = Report::new(echo("cartan", file, "", backend, g), &input.raw);
    match backend {
        Backend::Exact => cartan_with::<Rational>(&input, g, &mut report)?,
        _ => cartan_with::<f64>(&input, g, &mut report)?,
    }
    let code = exit_for(&report);
    Ok(Outcome::Report(report, code))
}

fn cartan_with<S: Scalar>(input: &Input, g: &GlobalOpts, report: &mut Report) -> Result<(), CliError> {
    let vectors: [VectorH21<S>; 3] = if input.value.is_array() {
        input.parse()?
    } else {
        input.parse::<PointsFile<S>>()?.points
    };
    let mut points = Vec::with_capacity(3);
    for (k, v) in vectors.into_iter().enumerate() {
        let p = ProjectivePoint::new(v).map_err(|e| CliError::Input(format!("point {}: {e}", k + 1)))?;
        let kind = p.point_type(g.tol);
        report.push(CheckRecord::flag(
            format!("point {} is null", k + 1),
            format!("{kind:?}").to_lowercase(),
            kind == PointType::Null,
        ));
        points.push(p);
    }
    if !report.passed() {
        return Ok(());
    }
    let points: [ProjectivePoint<S>; 3] = points.try_into().expect("three points");
    let triple = BoundaryTriple::new(points, g.tol).expect("null points checked above");
    report.push(CheckRecord::flag(
        "triple product",
        to_value(&triple_product(&triple)),
        true,
    ));
    if is_degenerate(&triple, g.tol) {
        report.push(CheckRecord::flag(
            "nondegenerate",
            "degenerate: two points coincide",
            false,
        ));
        return Ok(());
    }
    report.push(CheckRecord::flag("nondegenerate", true, true));
    let angle = cartan_invariant(&triple, g.tol).expect("nondegenerate triple");
    report.push(CheckRecord::flag("cartan angle", angle, true));
    let class = if (angle - FRAC_PI_2).abs() <= CARTAN_FLAG_WINDOW {
        "H-line"
    } else if angle <= CARTAN_FLAG_WINDOW {
        "R-circle"
    } else {
        "generic"
    };
    report.push(CheckRecord::flag("classification", class, true));
    Ok(())
}

pub fn detect(file: &Path, max_word_len: usize, seed: u64, g: &GlobalOpts) -> Result<Outcome, CliError> {
    if max_word_len == 0 {
        return Err(CliError::Usage("--max-word-len must be at least 1".into()));
    }
    let input = Input::read(file)?;
    let backend = g.backend.resolve(&input);
    let extra = format!(" --max-word-len {max_word_len} --seed {seed}");
    let mut report = Report::new(echo("detect", file, &extra, backend, g), &input.raw);
    let opts = DetectOptions {
        max_word_len,
        tol: g.tol,
        seed,
        ..DetectOptions::default()
    };
    let code = match backend {
        Backend::Exact => detect_with::<Rational>(&input, &opts, &mut report)?,
        _ => detect_with::<f64>(&input, &opts, &mut report)?,
    };
    Ok(Outcome::Report(report, code))
}

fn detect_with<S: Scalar>(input: &Input, opts: &DetectOptions, report: &mut Report) -> Result<u8, CliError> {
    let presentation = input
        .parse::<GroupPresentation<S>>()?
        .validate(opts.tol)
        .map_err(|e| CliError::Input(e.to_string()))?;
    report.push(CheckRecord::flag(
        "generators in Sp(2,1)",
        presentation.generators().len(),
        true,
    ));
    let verdict = fuchsian_detect(&presentation, opts);
    let words_threshold = 10.0 * opts.tol;
    let code = match &verdict {
        FuchsianVerdict::QuaternionicLine { polar, .. } => {
            let r = line_preservation_residual(
                &presentation.to_f64(),
                polar,
                opts.max_word_len,
                LINE_SAMPLES,
                opts.seed,
            );
            report.push(CheckRecord::at_most("line preservation over words", r, words_threshold));
            0
        }
        FuchsianVerdict::RealFuchsian { conjugator, .. } => {
            let r = real_conjugation_residual(&presentation.to_f64(), conjugator, opts.max_word_len);
            report.push(CheckRecord::at_most(
                "max imaginary entry over conjugated words",
                r,
                words_threshold,
            ));
            0
        }
        FuchsianVerdict::NotRealTrace { .. } => 3,
        FuchsianVerdict::Inconclusive { .. } => 4,
    };
    report.verdict = Some(to_value(&verdict));
    Ok(code)
}

fn parse_quaternion(flag: &str, s: &str) -> Result<Quaternion<f64>, CliError> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Usage(format!("--{flag} {s:?}: {e}")))?;
    match parts[..] {
        [w, x, y, z] => Ok(Quaternion::new(w, x, y, z)),
        _ => Err(CliError::Usage(format!(
            "--{flag} expects four comma-separated components, got {s:?}"
        ))),
    }
}

pub fn gen(args: &GenArgs) -> Result<Outcome, CliError> {
    let mut spec = FixtureSpec {
        kind: args.kind,
        seed: args.seed,
        lambda_range: (args.lambda_min, args.lambda_max),
        word_length: args.word_length,
        conjugate: !args.no_conjugate,
        ..FixtureSpec::default()
    };
    if let Some(mu) = &args.mu {
        spec.mu = parse_quaternion("mu", mu)?;
    }
    if let Some(nu) = &args.nu {
        spec.nu = parse_quaternion("nu", nu)?;
    }
    let fixture = generate(&spec).map_err(|e| match e {
        Error::InvalidParams(m) => CliError::Usage(m),
        other => CliError::Input(other.to_string()),
    })?;
    let json = fixture.to_json() + "\n";
    match &args.out {
        Some(path) => {
            fs::write(path, json).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Ok(Outcome::Text(String::new()))
        }
        None => Ok(Outcome::Text(json)),
    }
}

#[derive(Deserialize)]
struct NormalizeFile {
    p: VectorH21<f64>,
    q: VectorH21<f64>,
    #[serde(default)]
    generators: Vec<Sp21Matrix<f64>>,
}

pub fn normalize(file: &Path, g: &GlobalOpts) -> Result<Outcome, CliError> {
    let input = Input::read(file)?;
    let mut report = Report::new(echo("normalize", file, "", Backend::Float, g), &input.raw);
    let spec: NormalizeFile = input.parse()?;
    let p = ProjectivePoint::new(spec.p).map_err(|e| CliError::Input(format!("p: {e}")))?;
    let q = ProjectivePoint::new(spec.q).map_err(|e| CliError::Input(format!("q: {e}")))?;
    let frame = match frame_from_boundary_pair(&p, &q, g.tol) {
        Ok(f) => f,
        Err(e) => {
            report.push(CheckRecord::flag("frame", e.to_string(), false));
            return Ok(Outcome::Report(report, 2));
        }
    };
    let scale = frame.max_abs().max(1.0);
    report.push(residual_check(
        "conjugator membership residual".into(),
        &frame.membership_residual(),
        scale,
        g.tol,
    ));
    report.push(CheckRecord::at_most(
        "p sent to infinity",
        frame.apply(&p).distance(&ProjectivePoint::infinity()),
        g.tol,
    ));
    report.push(CheckRecord::at_most(
        "q sent to origin",
        frame.apply(&q).distance(&ProjectivePoint::origin()),
        g.tol,
    ));
    let conjugated: Vec<_> = spec.generators.iter().map(|m| m.conjugate(&frame)).collect();
    report.output = Some(json!({ "conjugator": frame, "generators": conjugated }));
    let code = exit_for(&report);
    Ok(Outcome::Report(report, code))
}
