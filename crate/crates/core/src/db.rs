//! Membership in the class of discrete-time bounded (DB) rational functions,
//! `||F(z)||_2 <= 1` for all `|z| > 1`, tested by KYP certificates and by
//! sampling circles outside the unit disk.
//!
//! Sampling is one-sided: it can refute membership but never prove it. The
//! verdict therefore distinguishes `Certified` (a KYP certificate exists)
//! from `SampledPass`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix, Verdict};
use crate::mconvex::{validate_isometry, IsometryTuple};
use crate::realization::{
    certificate_search, evaluate, kyp_check_balanced, series_product, CertificateSearch,
    RealizationArray, SearchOptions,
};

/// Allowed excess of `||F(z)||_2` over 1 before a sample counts as a violation.
pub const DB_TOL: f64 = 1e-8;

/// Poles farther than this beyond the unit circle are probed directly.
pub const UNSTABLE_POLE_MARGIN: f64 = 1e-9;

const DEFAULT_RADII: [f64; 5] = [1.0 + 1e-6, 1.01, 1.1, 2.0, 10.0];
const PROBE_OFFSETS: [f64; 2] = [1e-4, 1e-7];
const PROBE_ANGLES: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DbCheckOptions {
    /// Angles per radius.
    pub samples: usize,
    pub radii: Vec<f64>,
    pub tol: f64,
    pub search: SearchOptions,
}

impl Default for DbCheckOptions {
    fn default() -> Self {
        Self {
            samples: 720,
            radii: DEFAULT_RADII.to_vec(),
            tol: DB_TOL,
            search: SearchOptions::default(),
        }
    }
}

impl DbCheckOptions {
    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::InvalidInput("at least one sample angle is needed".into()));
        }
        if self.radii.is_empty() || self.radii.iter().any(|&r| !(r > 1.0 && r.is_finite())) {
            return Err(Error::InvalidInput(format!(
                "sampling radii must be finite and greater than 1, got {:?}",
                self.radii
            )));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::InvalidInput(format!("tolerance {} is negative", self.tol)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DbStatus {
    Certified,
    SampledPass,
    Fail,
    Inconclusive,
}

impl std::fmt::Display for DbStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DbStatus::Certified => "certified",
            DbStatus::SampledPass => "sampled-pass",
            DbStatus::Fail => "fail",
            DbStatus::Inconclusive => "inconclusive",
        })
    }
}

impl DbStatus {
    pub fn passed(self) -> bool {
        matches!(self, DbStatus::Certified | DbStatus::SampledPass)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DbVerdict {
    pub verdict: DbStatus,
    /// Largest `||F(z)||_2` over all evaluated samples.
    pub sampled_sup: f64,
    /// Sample attaining `sampled_sup`; a violation witness when the verdict is `Fail`.
    #[serde(with = "crate::linalg::complex_json")]
    pub worst_z: Complex64,
    /// KYP certificate `P`, if one was found.
    pub certificate: Option<HermitianMatrix>,
    pub spectral_radius: f64,
    pub samples_evaluated: usize,
}

/// Sample points: `samples` equally spaced angles on every radius, in radius-major
/// order.
pub fn boundary_samples(samples: usize, radii: &[f64]) -> Vec<Complex64> {
    radii
        .iter()
        .flat_map(|&r| (0..samples).map(move |k| Complex64::from_polar(r, TAU * k as f64 / samples as f64)))
        .collect()
}

/// Small rings around poles outside the closed unit disk. An uncancelled pole
/// makes `||F||` blow up there; a cancelled one leaves it bounded.
fn pole_probes(poles: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::new();
    for &p in poles.iter().filter(|p| p.norm() > 1.0 + UNSTABLE_POLE_MARGIN) {
        for delta in PROBE_OFFSETS {
            let rho = delta * (1.0 + p.norm());
            for k in 0..PROBE_ANGLES {
                let z = p + Complex64::from_polar(rho, TAU * (k as f64 + 0.5) / PROBE_ANGLES as f64);
                if z.norm() > 1.0 {
                    out.push(z);
                }
            }
        }
    }
    out
}

struct SampleSup {
    sup: f64,
    worst: Complex64,
    evaluated: usize,
}

fn sample_sup(r: &RealizationArray, points: &[Complex64]) -> Result<SampleSup> {
    let tf = r.transfer_function()?;
    // (norm, index); larger norm wins, ties go to the lower index so the
    // reduction is independent of the thread schedule.
    let better = |x: (f64, usize), y: (f64, usize)| {
        if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
            y
        } else {
            x
        }
    };
    let (best, evaluated) = points
        .par_iter()
        .enumerate()
        .filter_map(|(i, &z)| {
            tf.norm_at(z)
                .ok()
                .map(|v| (if v.is_nan() { f64::INFINITY } else { v }, i))
        })
        .fold(
            || ((f64::NEG_INFINITY, usize::MAX), 0usize),
            |(acc, n), s| (better(acc, s), n + 1),
        )
        .reduce(
            || ((f64::NEG_INFINITY, usize::MAX), 0usize),
            |(a, n), (b, m)| (better(a, b), n + m),
        );
    Ok(if evaluated == 0 {
        SampleSup {
            sup: 0.0,
            worst: Complex64::new(0.0, 0.0),
            evaluated,
        }
    } else {
        SampleSup {
            sup: best.0,
            worst: points[best.1],
            evaluated,
        }
    })
}

fn find_certificate(r: &RealizationArray, search: SearchOptions) -> Result<Option<HermitianMatrix>> {
    match certificate_search(r, search) {
        Ok(CertificateSearch::Found { certificate, .. }) => Ok(Some(certificate.p)),
        Ok(CertificateSearch::NotFound { .. }) => Ok(None),
        // The Riccati iteration needs a stable A, but a contractive array is
        // a certificate (P = I) regardless.
        Err(Error::UnstableA { .. }) => {
            let balanced = kyp_check_balanced(r);
            Ok(balanced.verdict.is_yes().then_some(balanced.p))
        }
        Err(e) => Err(e),
    }
}

/// Certificate search plus sampling on circles `|z| = r`, `r` in
/// `opts.radii`, and near any pole outside the closed unit disk.
///
/// * `Fail`: some sample exceeds `1 + tol`;
/// * `Certified`: otherwise, if a KYP certificate was found;
/// * `SampledPass`: otherwise, if `A` is strictly stable;
/// * `Inconclusive`: no certificate and poles on or outside the unit circle.
pub fn db_check(r: &RealizationArray, opts: &DbCheckOptions) -> Result<DbVerdict> {
    opts.validate()?;
    let poles = r.poles()?;
    let rho = poles.iter().map(|p| p.norm()).fold(0.0, f64::max);
    let certificate = find_certificate(r, opts.search)?;
    let mut points = boundary_samples(opts.samples, &opts.radii);
    points.extend(pole_probes(&poles));
    let sampled = sample_sup(r, &points)?;
    let verdict = if sampled.sup > 1.0 + opts.tol {
        DbStatus::Fail
    } else if certificate.is_some() {
        DbStatus::Certified
    } else if rho < 1.0 - UNSTABLE_POLE_MARGIN {
        DbStatus::SampledPass
    } else {
        DbStatus::Inconclusive
    };
    Ok(DbVerdict {
        verdict,
        sampled_sup: sampled.sup,
        worst_z: sampled.worst,
        certificate,
        spectral_radius: rho,
        samples_evaluated: sampled.evaluated,
    })
}

/// [`db_check`] of the cascade product, after both factors pass it.
pub fn db_product_check(
    ra: &RealizationArray,
    rb: &RealizationArray,
    opts: &DbCheckOptions,
) -> Result<DbVerdict> {
    for (name, r) in [("first", ra), ("second", rb)] {
        let v = db_check(r, opts)?;
        if !v.verdict.passed() {
            return Err(Error::PreconditionFailed(format!(
                "{name} factor is not DB (verdict {}, sampled sup {:.6e})",
                v.verdict, v.sampled_sup
            )));
        }
    }
    db_check(&series_product(ra, rb)?, opts)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DbCombination {
    pub realization: RealizationArray,
    pub db: DbVerdict,
    /// Largest entrywise gap between the realization and the direct
    /// combination of the evaluated inputs at the check points.
    pub max_mismatch: f64,
}

fn check_points() -> Vec<Complex64> {
    [1.3, 2.5]
        .iter()
        .flat_map(|&r| (0..8).map(move |k| Complex64::from_polar(r, 0.3 + k as f64 * TAU / 8.0)))
        .collect()
}

/// `G(z) = sum_j v_j* F_j(z) v_j` for an isometry tuple over the function
/// dimensions (`v_j` is `m_j x m`), realized as
/// `A = diag(A_j)`, `B = col(B_j v_j)`, `C = row(v_j* C_j)`,
/// `D = sum_j v_j* D_j v_j`, then run through [`db_check`].
pub fn db_mconvex_combine(
    t: &IsometryTuple,
    rs: &[RealizationArray],
    opts: &DbCheckOptions,
) -> Result<DbCombination> {
    let g = mconvex_realization(t, rs)?;
    let mut worst: f64 = 0.0;
    for z in check_points() {
        let Ok(direct) = evaluate(&g, z) else { continue };
        let mut acc = ComplexMatrix::zeros(t.n(), t.n());
        let mut skip = false;
        for (v, r) in t.blocks().iter().zip(rs) {
            match evaluate(r, z) {
                Ok(f) => acc = &acc + &(&(&v.adjoint() * &f) * v),
                Err(Error::NearPole { .. }) => skip = true,
                Err(e) => return Err(e),
            }
        }
        if skip {
            continue;
        }
        let gap = direct.max_abs_diff(&acc);
        if gap > 1e-10 * (1.0 + acc.max_abs()) {
            return Err(Error::Verification(format!(
                "combined realization differs from the combined values by {gap:.3e} at z = {z}"
            )));
        }
        worst = worst.max(gap);
    }
    let db = db_check(&g, opts)?;
    Ok(DbCombination {
        realization: g,
        db,
        max_mismatch: worst,
    })
}

/// State-space realization of `sum_j v_j* F_j(z) v_j`.
pub fn mconvex_realization(t: &IsometryTuple, rs: &[RealizationArray]) -> Result<RealizationArray> {
    if rs.len() != t.blocks().len() {
        return Err(Error::Shape(format!(
            "{} realizations for a tuple of length {}",
            rs.len(),
            t.blocks().len()
        )));
    }
    for (j, (v, r)) in t.blocks().iter().zip(rs).enumerate() {
        if v.rows() != r.m() {
            return Err(Error::Shape(format!(
                "realization {j} is {0}x{0}-valued, block {j} has {1} rows",
                r.m(),
                v.rows()
            )));
        }
    }
    let check = validate_isometry(t);
    if !check.valid {
        return Err(Error::InvalidIsometry {
            defect: check.defect,
        });
    }
    let a_blocks: Vec<&ComplexMatrix> = rs.iter().map(|r| r.a()).collect();
    let a = ComplexMatrix::block_diag(&a_blocks);
    let b_parts: Vec<ComplexMatrix> = t.blocks().iter().zip(rs).map(|(v, r)| r.b() * v).collect();
    let c_parts: Vec<ComplexMatrix> = t
        .blocks()
        .iter()
        .zip(rs)
        .map(|(v, r)| &v.adjoint() * r.c())
        .collect();
    let b = ComplexMatrix::vstack(&b_parts.iter().collect::<Vec<_>>())?;
    let c = ComplexMatrix::hstack(&c_parts.iter().collect::<Vec<_>>())?;
    let mut d = ComplexMatrix::zeros(t.n(), t.n());
    for (v, r) in t.blocks().iter().zip(rs) {
        d = &d + &(&(&v.adjoint() * r.d()) * v);
    }
    RealizationArray::new(a, b, c, d)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealnessReport {
    pub max_imag: f64,
    pub evaluated: usize,
    pub skipped_poles: usize,
    pub verdict: Verdict,
}

/// Largest imaginary part of `F(x)` over real sample points `x` that are not
/// poles; yes iff it is at most `1e-10`.
pub fn realness_check(r: &RealizationArray, xs: &[f64]) -> Result<RealnessReport> {
    let tf = r.transfer_function()?;
    let mut max_imag: f64 = 0.0;
    let (mut evaluated, mut skipped_poles) = (0, 0);
    for &x in xs {
        match tf.eval(Complex64::new(x, 0.0)) {
            Ok(f) => {
                evaluated += 1;
                max_imag = max_imag.max(f.max_abs_imag());
            }
            Err(Error::NearPole { .. }) => skipped_poles += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(RealnessReport {
        max_imag,
        evaluated,
        skipped_poles,
        verdict: if max_imag <= 1e-10 { Verdict::Yes } else { Verdict::No },
    })
}

/// The three isometries combining a scalar, a 2x2 and a 3x3 function into a
/// scalar, a 2x2 and a 3x3 function, each with block heights `(1, 2, 3)`.
pub fn example_isometries() -> [IsometryTuple; 3] {
    let g1 = ComplexMatrix::from_real_rows(&[
        [6.0 / 7.0],
        [0.0],
        [2.0 / 7.0],
        [0.0],
        [3.0 / 7.0],
        [0.0],
    ]);
    let g2 = ComplexMatrix::from_real_rows(&[
        [0.0, 2.0 / 7.0],
        [-2.0 / 3.0, 3.0 / 7.0],
        [0.0, 0.0],
        [2.0 / 3.0, 0.0],
        [1.0 / 3.0, 6.0 / 7.0],
        [0.0, 0.0],
    ]);
    let g3 = ComplexMatrix::from_real_rows(&[
        [0.0, 3.0 / 7.0, -2.0 / 3.0],
        [0.0, 6.0 / 7.0, 1.0 / 3.0],
        [3.0 / 5.0, 0.0, 0.0],
        [0.0, 2.0 / 7.0, 0.0],
        [4.0 / 5.0, 0.0, 0.0],
        [0.0, 0.0, 2.0 / 3.0],
    ]);
    let heights = [1, 2, 3];
    let split = |m: Result<ComplexMatrix>| {
        IsometryTuple::from_stacked(&m.expect("finite literal"), &heights).expect("6 rows")
    };
    [split(g1), split(g2), split(g3)]
}
