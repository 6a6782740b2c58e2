use num_complex::Complex64;
use serde::Serialize;

use dtpassive::db::{
    db_check, db_mconvex_combine, db_product_check, example_isometries, DbCheckOptions, DbStatus,
    DbVerdict,
};
use dtpassive::inclusion::{
    certify, certify_weighted, search_geometric_weight, simulate, InclusionCertificate, Schedule,
    WeightSearch,
};
use dtpassive::linalg::{eigenvalues, spectral_norm, ComplexMatrix, Verdict};
use dtpassive::mconvex::{frobenius_counterexample, mconvex_combine, validate_isometry};
use dtpassive::realization::{
    certificate_search, example_family, kyp_check_balanced, kyp_check_with_tol,
    normalize_certificate, repartition, series_product, CertificateSearch, ExampleFamily,
    SearchOptions,
};
use dtpassive::stein::{maximality_witness, norm_membership, stein_gap_with_tol};
use dtpassive::{Error, HermitianMatrix, RealizationArray};

use crate::io::{self, emit, to_json, CliError, CliResult};
use crate::{Cli, Command, Common, Format, Outcome};

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let c = &cli.common;
    if c.format == Format::Csv
        && !matches!(cli.command, Command::Simulate { .. } | Command::DbCheck { .. })
    {
        return Err(CliError::Usage(
            "--format csv is only available for simulate and db-check".into(),
        ));
    }
    if let Some(tol) = c.tol {
        if !(tol >= 0.0 && tol.is_finite()) {
            return Err(CliError::Usage(format!("--tol {tol} must be finite and non-negative")));
        }
    }
    match &cli.command {
        Command::SteinCheck { set, matrix } => {
            let spec = io::load_stein_set(set)?;
            let a = io::load_matrix(matrix)?;
            stein_check(c, &spec, &a)
        }
        Command::SteinWitness { matrix } => {
            let w = maximality_witness(&io::load_matrix(matrix)?)?;
            emit(c.out.as_deref(), &to_json(&w))?;
            Ok(Outcome::Pass)
        }
        Command::Mconvex { tuple, blocks } => {
            let t = io::load_tuple(tuple)?;
            let blocks = io::load_matrices(blocks)?;
            let result = mconvex_combine(&t, &blocks)?;
            let out = McvxOutput {
                defect: validate_isometry(&t).defect,
                result,
            };
            emit(c.out.as_deref(), &to_json(&out))?;
            Ok(Outcome::Pass)
        }
        Command::KypCheck {
            realization,
            certificate,
        } => {
            let r = io::load_realization(realization)?;
            let cert = match certificate {
                Some(path) => kyp_check_with_tol(&r, &io::load_certificate(path)?, c.tol)?,
                None => kyp_check_with_tol(&r, &HermitianMatrix::identity(r.n()), c.tol)?,
            };
            emit(c.out.as_deref(), &to_json(&cert))?;
            Ok(verdict_outcome(cert.verdict))
        }
        Command::CertifyRiccati {
            realization,
            max_iter,
        } => {
            let r = io::load_realization(realization)?;
            let found = search(&r, c, *max_iter)?;
            emit(c.out.as_deref(), &to_json(&found))?;
            Ok(match found {
                CertificateSearch::Found { .. } => Outcome::Pass,
                CertificateSearch::NotFound { .. } => Outcome::Inconclusive,
            })
        }
        Command::Balance {
            realization,
            certificate,
        } => {
            let r = io::load_realization(realization)?;
            let p = match certificate {
                Some(path) => io::load_certificate(path)?,
                None => match search(&r, c, SearchOptions::default().max_iter)? {
                    CertificateSearch::Found { certificate, .. } => certificate.p,
                    CertificateSearch::NotFound { reason, .. } => {
                        eprintln!("dtpassive: no certificate found: {reason}");
                        return Ok(Outcome::Inconclusive);
                    }
                },
            };
            match normalize_certificate(&r, &p) {
                Ok(balanced) => {
                    emit(c.out.as_deref(), &to_json(&balanced))?;
                    Ok(Outcome::Pass)
                }
                // A singular certificate (unobservable modes) admits no
                // change of coordinates.
                Err(Error::NotPositiveDefinite { lambda_min }) if certificate.is_none() => {
                    eprintln!(
                        "dtpassive: certificate is singular (lambda_min = {lambda_min:.3e}); cannot balance"
                    );
                    Ok(Outcome::Inconclusive)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::DbCheck { realization } => {
            let r = io::load_realization(realization)?;
            let v = db_check(&r, &db_options(c)?)?;
            let text = match c.format {
                Format::Json => to_json(&v),
                Format::Csv => verdict_csv(&v),
            };
            emit(c.out.as_deref(), &text)?;
            Ok(db_outcome(v.verdict))
        }
        Command::DbCombine {
            tuple,
            realizations,
        } => {
            let t = io::load_tuple(tuple)?;
            let rs = io::load_realizations(realizations)?;
            let combined = db_mconvex_combine(&t, &rs, &db_options(c)?)?;
            emit(c.out.as_deref(), &to_json(&combined))?;
            Ok(db_outcome(combined.db.verdict))
        }
        Command::SeriesProduct { left, right, check } => {
            let ra = io::load_realization(left)?;
            let rb = io::load_realization(right)?;
            let product = series_product(&ra, &rb)?;
            if *check {
                let db = db_product_check(&ra, &rb, &db_options(c)?)?;
                let outcome = db_outcome(db.verdict);
                let out = ProductOutput {
                    realization: product,
                    db,
                };
                emit(c.out.as_deref(), &to_json(&out))?;
                Ok(outcome)
            } else {
                emit(c.out.as_deref(), &to_json(&product))?;
                Ok(Outcome::Pass)
            }
        }
        Command::Simulate {
            set,
            x0,
            steps,
            schedule,
        } => {
            let m = io::load_matrix_set(set)?;
            let schedule = parse_schedule(schedule, c.seed)?;
            let tr = simulate(&m, &x0.0, *steps, &schedule)?;
            let text = match c.format {
                Format::Json => to_json(&tr),
                Format::Csv => tr.to_csv(),
            };
            emit(c.out.as_deref(), &text)?;
            Ok(Outcome::Pass)
        }
        Command::CertifyInclusion {
            set,
            alpha,
            weight,
            search_weight,
        } => {
            let m = io::load_matrix_set(set)?;
            let (certificate, weight) = if let Some(path) = weight {
                (certify_weighted(&m, *alpha, &io::load_hermitian(path)?)?, None)
            } else if *search_weight {
                let found = search_geometric_weight(&m)?;
                (certify_weighted(&m, *alpha, &found.h)?, Some(found))
            } else {
                (certify(&m, *alpha)?, None)
            };
            let outcome = verdict_outcome(certificate.verdict);
            emit(
                c.out.as_deref(),
                &to_json(&InclusionOutput {
                    certificate,
                    weight,
                }),
            )?;
            Ok(outcome)
        }
        Command::DemoExamples { theta, a } => demo(c, *theta, *a),
    }
}

fn verdict_outcome(v: Verdict) -> Outcome {
    match v {
        Verdict::Yes => Outcome::Pass,
        Verdict::No => Outcome::Fail,
        Verdict::Marginal => Outcome::Inconclusive,
    }
}

fn db_outcome(v: DbStatus) -> Outcome {
    match v {
        DbStatus::Certified | DbStatus::SampledPass => Outcome::Pass,
        DbStatus::Fail => Outcome::Fail,
        DbStatus::Inconclusive => Outcome::Inconclusive,
    }
}

fn db_options(c: &Common) -> CliResult<DbCheckOptions> {
    let mut opts = DbCheckOptions::default();
    if let Some(s) = c.samples {
        opts.samples = s;
    }
    if let Some(r) = &c.radii {
        opts.radii = r.0.clone();
    }
    if let Some(t) = c.tol {
        opts.tol = t;
    }
    if opts.samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    if opts.radii.iter().any(|&r| r <= 1.0) {
        return Err(CliError::Usage("--radii must all exceed 1".into()));
    }
    Ok(opts)
}

/// Certificate search; an unstable `A` is reported as an unsuccessful search.
fn search(r: &RealizationArray, c: &Common, max_iter: usize) -> CliResult<CertificateSearch> {
    let mut opts = SearchOptions {
        max_iter,
        ..SearchOptions::default()
    };
    if let Some(t) = c.tol {
        opts.tol = t;
    }
    match certificate_search(r, opts) {
        Ok(found) => Ok(found),
        Err(e @ Error::UnstableA { .. }) => Ok(CertificateSearch::NotFound {
            iterations: 0,
            reason: e.to_string(),
        }),
        Err(e) => Err(e.into()),
    }
}

fn parse_schedule(s: &str, seed: Option<u64>) -> CliResult<Schedule> {
    match s {
        "random" => Ok(Schedule::UniformRandom {
            seed: seed.unwrap_or(0),
        }),
        "greedy" => Ok(Schedule::AdversarialGreedy),
        _ => {
            let Some(list) = s.strip_prefix("fixed:") else {
                return Err(CliError::Usage(format!(
                    "unknown schedule {s:?}; expected fixed:<i,j,...>, random or greedy"
                )));
            };
            let indices = list
                .split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Usage(format!("schedule {s:?}: {e}")))?;
            Ok(Schedule::Fixed { indices })
        }
    }
}

fn stein_check(
    c: &Common,
    spec: &dtpassive::stein::SteinSetSpec,
    a: &ComplexMatrix,
) -> CliResult<Outcome> {
    let gap = stein_gap_with_tol(spec, a, c.tol)?;
    let norm = if spec.positive_definite_h() {
        Some(norm_membership(spec, a)?)
    } else {
        None
    };
    let out = SteinCheckOutput {
        member: gap.member,
        gap_lambda_min: gap.lambda_min,
        tolerance: gap.tolerance,
        weighted_norm: norm.map(|n| n.weighted_norm),
        norm_verdict: norm.map(|n| n.verdict),
    };
    emit(c.out.as_deref(), &to_json(&out))?;
    Ok(verdict_outcome(gap.member))
}

fn verdict_csv(v: &DbVerdict) -> String {
    format!(
        "verdict,sampled_sup,worst_re,worst_im,spectral_radius\n{},{:e},{:e},{:e},{:e}\n",
        v.verdict, v.sampled_sup, v.worst_z.re, v.worst_z.im, v.spectral_radius
    )
}

#[derive(Serialize)]
struct SteinCheckOutput {
    member: Verdict,
    gap_lambda_min: f64,
    tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    weighted_norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    norm_verdict: Option<Verdict>,
}

#[derive(Serialize)]
struct McvxOutput {
    defect: f64,
    result: ComplexMatrix,
}

#[derive(Serialize)]
struct ProductOutput {
    realization: RealizationArray,
    db: DbVerdict,
}

#[derive(Serialize)]
struct InclusionOutput {
    certificate: InclusionCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight: Option<WeightSearch>,
}

#[derive(Serialize)]
struct Check {
    name: String,
    passed: bool,
    detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

#[derive(Serialize)]
struct ComplexValue {
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct DemoOutput {
    theta: f64,
    a: f64,
    realizations: ExampleFamily,
    f5_poles: Vec<ComplexValue>,
    frobenius_counterexample: dtpassive::mconvex::FrobeniusCounterexample,
    isometry_defects: Vec<f64>,
    checks: Vec<Check>,
}

fn scalar(r: &RealizationArray, z: Complex64) -> CliResult<Complex64> {
    Ok(r.evaluate(z)?.get(0, 0))
}

fn demo_points() -> Vec<Complex64> {
    (0..20)
        .map(|k| Complex64::from_polar(1.1 + 0.2 * k as f64, 0.25 + 0.9 * k as f64))
        .collect()
}

/// Largest `|F(z) - f(z)|` over the demo points.
fn max_gap(r: &RealizationArray, f: impl Fn(Complex64) -> Complex64) -> CliResult<f64> {
    let mut worst: f64 = 0.0;
    for z in demo_points() {
        worst = worst.max((scalar(r, z)? - f(z)).norm());
    }
    Ok(worst)
}

const GOLDEN_TOL: f64 = 1e-12;
const VALUE_TOL: f64 = 1e-10;

fn demo(c: &Common, theta: f64, a: f64) -> CliResult<Outcome> {
    let fam = example_family(theta, a)?;
    let mut checks = Vec::new();

    for (k, r) in [(1, &fam.f1), (2, &fam.f2), (3, &fam.f3), (4, &fam.f4)] {
        let gap = max_gap(r, |z| fam.closed_form(k, z).expect("k <= 4"))?;
        checks.push(Check::new(
            &format!("f{k} matches its closed form"),
            gap <= VALUE_TOL,
            format!("max gap {gap:.3e}"),
        ));
    }
    let product = series_product(&fam.f1, &fam.f2)?;
    let gap = max_gap(&product, |z| fam.closed_form(4, z).expect("f4"))?;
    checks.push(Check::new(
        "f1 * f2 equals f4",
        gap <= VALUE_TOL,
        format!("max gap {gap:.3e}"),
    ));
    let gap = max_gap(&fam.f4_hat, |z| fam.closed_form(4, z).expect("f4"))?;
    checks.push(Check::new(
        "conjugated f4 array realizes f4",
        gap <= VALUE_TOL,
        format!("max gap {gap:.3e}"),
    ));
    for (name, r) in [("f1", &fam.f1), ("f2", &fam.f2), ("f3", &fam.f3)] {
        let cert = kyp_check_balanced(r);
        checks.push(Check::new(
            &format!("{name} is balanced"),
            cert.verdict.is_yes(),
            format!("lambda_min(I - R*R) = {:.6e}", cert.lambda_min),
        ));
    }
    let f6 = repartition(&fam.f4, 1, 2)?;
    let mut worst: f64 = 0.0;
    for z in demo_points().into_iter().take(10) {
        let f = f6.evaluate(z)?;
        let compressed = f.get(1, 1);
        let want = -(theta / a) * fam.closed_form(1, z).expect("f1");
        worst = worst.max((compressed - want).norm());
    }
    checks.push(Check::new(
        "repartitioned f4, port 2, equals -(theta/a) f1",
        worst <= VALUE_TOL,
        format!("max gap {worst:.3e}"),
    ));
    let opts = db_options(c)?;
    for (name, r) in fam.named() {
        let v = db_check(r, &opts)?;
        checks.push(Check::new(
            &format!("{name} is DB"),
            v.verdict.passed(),
            format!("{} (sampled sup {:.6})", v.verdict, v.sampled_sup),
        ));
    }

    let mut poles = eigenvalues(fam.f5.a())?;
    poles.sort_by(|x, y| x.im.total_cmp(&y.im));
    if theta == 0.5 && a == 3.0 {
        golden_checks(&fam, &poles, &mut checks)?;
    }

    let frob = frobenius_counterexample();
    checks.push(Check::new(
        "Frobenius ball is not matrix-convex",
        frob.a_norm_sq == 25.0 && frob.a_hat_norm_sq == 32.0,
        format!(
            "||A||_F^2 = {}, ||A_hat||_F^2 = {}",
            frob.a_norm_sq, frob.a_hat_norm_sq
        ),
    ));
    let isometry_defects: Vec<f64> = example_isometries()
        .iter()
        .map(|t| validate_isometry(t).defect)
        .collect();
    checks.push(Check::new(
        "example isometries are exact",
        isometry_defects.iter().all(|&d| d <= GOLDEN_TOL),
        format!("defects {isometry_defects:?}"),
    ));

    for ch in checks.iter().filter(|ch| !ch.passed) {
        eprintln!("dtpassive: check failed: {}: {}", ch.name, ch.detail);
    }
    let outcome = if checks.iter().all(|ch| ch.passed) {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    let out = DemoOutput {
        theta,
        a,
        f5_poles: poles
            .iter()
            .map(|z| ComplexValue { re: z.re, im: z.im })
            .collect(),
        realizations: fam,
        frobenius_counterexample: frob,
        isometry_defects,
        checks,
    };
    emit(c.out.as_deref(), &to_json(&out))?;
    Ok(outcome)
}

/// Reference values for `theta = 1/2`, `a = 3`.
fn golden_checks(fam: &ExampleFamily, poles: &[Complex64], checks: &mut Vec<Check>) -> CliResult<()> {
    let r3 = ComplexMatrix::from_real_rows(&[[0.0, 2.0 / 3.0], [2.0 / 3.0, 0.0]])?;
    let gap = fam.f3.to_matrix().max_abs_diff(&r3);
    checks.push(Check::new(
        "R_f3 = (2/3)[[0,1],[1,0]]",
        gap <= GOLDEN_TOL,
        format!("max entry gap {gap:.3e}"),
    ));

    let want = [Complex64::new(0.0, -2.0 / 9.0), Complex64::new(0.0, 2.0 / 9.0)];
    let gap = if poles.len() == 2 {
        (poles[0] - want[0]).norm().max((poles[1] - want[1]).norm())
    } else {
        f64::INFINITY
    };
    checks.push(Check::new(
        "f5 poles are +-(2/9)i",
        gap <= GOLDEN_TOL,
        format!(
            "poles {}",
            poles
                .iter()
                .map(|z| format!("{:.15}{:+.15}i", z.re, z.im))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    ));

    let f5 = |z: Complex64| (Complex64::new(16.0 / 9.0, 0.0) - z * z) / (36.0 * (z * z + 4.0 / 81.0));
    let gap = max_gap(&fam.f5, f5)?;
    checks.push(Check::new(
        "f5 = ((4/3)^2 - z^2) / (36 (z^2 + (2/9)^2))",
        gap <= VALUE_TOL,
        format!("max gap {gap:.3e}"),
    ));

    let shown = ComplexMatrix::from_real_rows(&[
        [0.0, -8.0, -10.0],
        [8.0, 0.0, 14.0],
        [14.0, 10.0, 1.0],
    ])?
    .scale(1.0 / 36.0);
    let built = fam.f5.to_matrix();
    let gap = built.max_abs_diff(&shown);
    let scaled: Vec<Vec<f64>> = built
        .scale(36.0)
        .real_rows()
        .into_iter()
        .map(|row| row.into_iter().map(|x| (x * 1e9).round() / 1e9).collect())
        .collect();
    let sup_gap = spectral_norm(&(&built - &shown));
    checks.push(Check::new(
        "R_f5 = (1/36)[[0,-8,-10],[8,0,14],[14,10,1]]",
        gap <= GOLDEN_TOL,
        format!(
            "constructed 36*R_f5 = {scaled:?}; max entry gap {gap:.3e}, spectral gap {sup_gap:.3e}"
        ),
    ));
    Ok(())
}
