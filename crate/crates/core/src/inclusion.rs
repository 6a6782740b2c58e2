//! Difference inclusions `x(j+1) in M x(j)`: every step applies an
//! arbitrary member of a finite set `M`. Exponential convergence
//! `||x(j)|| <= alpha^j ||x(0)||` is certified when all members lie in a
//! common scaled closed Stein set.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigendecomposition, hermitian_sqrt, spectral_norm, ComplexMatrix, HermitianMatrix,
    Verdict,
};
use crate::stein::{stein_gap, weighted_norm, SteinSetSpec};

/// Absolute slack on member norms, `||A|| <= alpha + CERTIFY_TOL`.
pub const CERTIFY_TOL: f64 = 1e-10;

/// Non-empty finite set of real `n x n` matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixSetJson", into = "MatrixSetJson")]
pub struct MatrixSet {
    n: usize,
    members: Vec<ComplexMatrix>,
    real: Vec<DMatrix<f64>>,
}

/// Wire format: `{"n": n, "members": [<matrix>, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixSetJson {
    pub n: usize,
    pub members: Vec<ComplexMatrix>,
}

impl MatrixSet {
    pub fn new(n: usize, members: Vec<ComplexMatrix>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidInput("matrix set is empty".into()));
        }
        let mut real = Vec::with_capacity(members.len());
        for (j, m) in members.iter().enumerate() {
            if m.shape() != (n, n) {
                return Err(Error::Shape(format!(
                    "member {j} is {}x{}, expected {n}x{n}",
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_real() {
                return Err(Error::InvalidInput(format!(
                    "member {j} has non-zero imaginary parts"
                )));
            }
            real.push(m.as_dmatrix().map(|z| z.re));
        }
        Ok(Self { n, members, real })
    }

    pub fn from_real(n: usize, members: &[DMatrix<f64>]) -> Result<Self> {
        let members = members
            .iter()
            .map(|m| {
                let entries: Vec<f64> = m.transpose().iter().copied().collect();
                ComplexMatrix::from_real(m.nrows(), m.ncols(), &entries)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, members)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[ComplexMatrix] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

impl TryFrom<MatrixSetJson> for MatrixSet {
    type Error = Error;
    fn try_from(j: MatrixSetJson) -> Result<Self> {
        MatrixSet::new(j.n, j.members)
    }
}

impl From<MatrixSet> for MatrixSetJson {
    fn from(s: MatrixSet) -> Self {
        MatrixSetJson {
            n: s.n,
            members: s.members,
        }
    }
}

/// How the member applied at each step is chosen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Schedule {
    /// Member indices, repeated cyclically.
    Fixed { indices: Vec<usize> },
    /// Independent uniform choices from a seeded generator.
    UniformRandom { seed: u64 },
    /// One-step lookahead: the member maximizing `||A x||_2`, lowest index
    /// on ties.
    AdversarialGreedy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// `x(0), ..., x(J)`.
    pub states: Vec<Vec<f64>>,
    /// Member index applied at steps `0, ..., J-1`.
    pub schedule: Vec<usize>,
    /// `||x(j)||_2`.
    pub norms: Vec<f64>,
}

impl Trajectory {
    /// `j,norm,member` rows; the member column is empty for the final state.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,norm,member\n");
        for (j, norm) in self.norms.iter().enumerate() {
            match self.schedule.get(j) {
                Some(k) => out.push_str(&format!("{j},{norm:e},{k}\n")),
                None => out.push_str(&format!("{j},{norm:e},\n")),
            }
        }
        out
    }
}

/// Runs `steps` steps of `x(j+1) = A(j) x(j)` from `x0`.
pub fn simulate(set: &MatrixSet, x0: &[f64], steps: usize, schedule: &Schedule) -> Result<Trajectory> {
    if x0.len() != set.n {
        return Err(Error::Shape(format!(
            "initial state has dimension {}, set has order {}",
            x0.len(),
            set.n
        )));
    }
    if let Schedule::Fixed { indices } = schedule {
        if indices.is_empty() && steps > 0 {
            return Err(Error::InvalidInput("fixed schedule is empty".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&k| k >= set.len()) {
            return Err(Error::InvalidInput(format!(
                "schedule index {bad} out of range for {} members",
                set.len()
            )));
        }
    }
    let mut rng = match schedule {
        Schedule::UniformRandom { seed } => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };
    let mut x = DVector::from_column_slice(x0);
    let mut states = vec![x0.to_vec()];
    let mut norms = vec![x.norm()];
    let mut picks = Vec::with_capacity(steps);
    for j in 0..steps {
        let (k, next) = match schedule {
            Schedule::Fixed { indices } => {
                let k = indices[j % indices.len()];
                (k, &set.real[k] * &x)
            }
            Schedule::UniformRandom { .. } => {
                let k = rng.as_mut().expect("seeded").gen_range(0..set.len());
                (k, &set.real[k] * &x)
            }
            Schedule::AdversarialGreedy => {
                let mut best: Option<(usize, DVector<f64>, f64)> = None;
                for (k, m) in set.real.iter().enumerate() {
                    let y = m * &x;
                    let ny = y.norm();
                    if best.as_ref().is_none_or(|b| ny > b.2) {
                        best = Some((k, y, ny));
                    }
                }
                let (k, y, _) = best.expect("non-empty set");
                (k, y)
            }
        };
        x = next;
        picks.push(k);
        norms.push(x.norm());
        states.push(x.iter().copied().collect());
    }
    Ok(Trajectory {
        states,
        schedule: picks,
        norms,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MemberReport {
    pub index: usize,
    /// `||A||_2`, or the weighted norm `||H^{1/2} A H^{-1/2}||_2`.
    pub norm: f64,
    /// Smallest eigenvalue of the gap `H - A* H A / alpha^2`.
    pub gap_lambda_min: f64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InclusionCertificate {
    pub verdict: Verdict,
    pub alpha: f64,
    /// `cond(H^{1/2})`; 1 for the unweighted test.
    pub beta: f64,
    pub members: Vec<MemberReport>,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::ParameterOutOfRange(format!(
            "alpha = {alpha} must lie in (0, 1]"
        )));
    }
    Ok(())
}

fn certify_with(set: &MatrixSet, spec: &SteinSetSpec) -> Result<Vec<MemberReport>> {
    let alpha = spec.alpha();
    set.members
        .iter()
        .enumerate()
        .map(|(index, a)| {
            let norm = weighted_norm(spec.h(), a)?;
            let gap = stein_gap(spec, a)?;
            Ok(MemberReport {
                index,
                norm,
                gap_lambda_min: gap.lambda_min,
                verdict: if norm <= alpha + CERTIFY_TOL {
                    Verdict::Yes
                } else {
                    Verdict::No
                },
            })
        })
        .collect()
}

fn overall(members: &[MemberReport]) -> Verdict {
    if members.iter().all(|m| m.verdict.is_yes()) {
        Verdict::Yes
    } else {
        Verdict::No
    }
}

/// Yes iff every member has `||A||_2 <= alpha + 1e-10`, in which case
/// `||x(j)||_2 <= alpha^j ||x(0)||_2` along every schedule. A no says
/// nothing about divergence.
pub fn certify(set: &MatrixSet, alpha: f64) -> Result<InclusionCertificate> {
    check_alpha(alpha)?;
    let spec = SteinSetSpec::identity(set.n, alpha, true)?;
    let members: Vec<MemberReport> = certify_with(set, &spec)?
        .into_iter()
        .zip(&set.members)
        .map(|(mut rep, a)| {
            rep.norm = spectral_norm(a);
            rep.verdict = if rep.norm <= alpha + CERTIFY_TOL {
                Verdict::Yes
            } else {
                Verdict::No
            };
            rep
        })
        .collect();
    Ok(InclusionCertificate {
        verdict: overall(&members),
        alpha,
        beta: 1.0,
        members,
    })
}

/// Yes iff every member lies in the closed Stein set `(1/alpha) S_H`, i.e.
/// `||H^{1/2} A H^{-1/2}||_2 <= alpha + 1e-10`. Then `||H^{1/2} x(j)||_2`
/// contracts by `alpha` per step and `||x(j)||_2 <= beta alpha^j ||x(0)||_2`
/// with `beta = cond(H^{1/2})`.
pub fn certify_weighted(set: &MatrixSet, alpha: f64, h: &HermitianMatrix) -> Result<InclusionCertificate> {
    check_alpha(alpha)?;
    if h.order() != set.n {
        return Err(Error::Shape(format!(
            "H has order {}, set has order {}",
            h.order(),
            set.n
        )));
    }
    let spec = SteinSetSpec::new(h.clone(), alpha, true)?;
    if !spec.positive_definite_h() {
        return Err(Error::HNotPositiveDefinite {
            lambda_min: h.lambda_min(),
        });
    }
    let members = certify_with(set, &spec)?;
    Ok(InclusionCertificate {
        verdict: overall(&members),
        alpha,
        beta: sqrt_condition(h),
        members,
    })
}

/// `sqrt(lambda_max / lambda_min)` of a positive definite `H`.
fn sqrt_condition(h: &HermitianMatrix) -> f64 {
    let eig = hermitian_eigendecomposition(h);
    match (eig.values.first(), eig.values.last()) {
        (Some(lo), Some(hi)) => (hi / lo).sqrt(),
        _ => 1.0,
    }
}

/// `||H^{1/2} x||_2`.
pub fn weighted_state_norm(h: &HermitianMatrix, x: &[f64]) -> Result<f64> {
    if x.len() != h.order() {
        return Err(Error::Shape(format!(
            "state has dimension {}, H has order {}",
            x.len(),
            h.order()
        )));
    }
    let root = hermitian_sqrt(h, None)?;
    let v = ComplexMatrix::from_real(x.len(), 1, x)?;
    Ok(spectral_norm(&(root.matrix() * &v)))
}

/// Result of [`search_geometric_weight`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightSearch {
    /// `diag(1, t, t^2, ...)` at the best `t` found.
    pub h: HermitianMatrix,
    pub t: f64,
    /// Largest weighted member norm at that `t`.
    pub max_weighted_norm: f64,
}

fn geometric_weight(n: usize, t: f64) -> HermitianMatrix {
    let d: Vec<f64> = (0..n).map(|k| t.powi(k as i32)).collect();
    HermitianMatrix::from_real_diagonal(&d)
}

/// Minimizes the largest weighted member norm over the one-parameter family
/// `H = diag(1, t, ..., t^{n-1})`, by golden-section search in `log10 t` on
/// `[-6, 6]`. The family is a heuristic; a poor result refutes nothing.
pub fn search_geometric_weight(set: &MatrixSet) -> Result<WeightSearch> {
    let cost = |log_t: f64| -> Result<f64> {
        let h = geometric_weight(set.n, 10f64.powf(log_t));
        set.members
            .iter()
            .map(|a| weighted_norm(&h, a))
            .try_fold(0.0f64, |acc, v| Ok(acc.max(v?)))
    };
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (-6.0f64, 6.0f64);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (cost(x1)?, cost(x2)?);
    for _ in 0..80 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = cost(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = cost(x2)?;
        }
    }
    let log_t = (lo + hi) / 2.0;
    let t = 10f64.powf(log_t);
    Ok(WeightSearch {
        h: geometric_weight(set.n, t),
        t,
        max_weighted_norm: cost(log_t)?,
    })
}
