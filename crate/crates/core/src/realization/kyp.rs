//! KYP certificates: `P` with `diag(P, I) - R* diag(P, I) R >= 0`.

use serde::{Deserialize, Serialize};

use super::RealizationArray;
use crate::error::{Error, Result};
use crate::linalg::{
    frobenius_norm, hermitian_inverse_sqrt, hermitian_sqrt, psd_test, spectral_norm, spectral_radius,
    ComplexMatrix, Definiteness, HermitianMatrix, Verdict,
};

/// Margin below 1 required of `spectral_radius(A)` by iterative routines.
pub const STABILITY_MARGIN: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KypCertificate {
    pub p: HermitianMatrix,
    /// `diag(P, I_m) - R* diag(P, I_m) R`.
    pub residual: HermitianMatrix,
    pub lambda_min: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

fn residual(r: &RealizationArray, p: &HermitianMatrix) -> HermitianMatrix {
    let w = HermitianMatrix::symmetrize(&ComplexMatrix::block_diag(&[
        p.matrix(),
        &ComplexMatrix::identity(r.m()),
    ]));
    w.sub(&w.congruence(&r.to_matrix()))
}

fn certify(r: &RealizationArray, p: &HermitianMatrix, tol: Option<f64>) -> KypCertificate {
    let residual = residual(r, p);
    let test = psd_test(&residual, Definiteness::Semi, tol);
    KypCertificate {
        p: p.clone(),
        residual,
        lambda_min: test.lambda_min,
        tolerance: test.tolerance,
        verdict: test.verdict,
    }
}

fn check_order(r: &RealizationArray, p: &HermitianMatrix) -> Result<()> {
    if p.order() != r.n() {
        return Err(Error::Shape(format!(
            "certificate has order {}, state order is {}",
            p.order(),
            r.n()
        )));
    }
    Ok(())
}

/// Semidefinite test of the KYP residual with the default tolerance
/// `1e-10 * (1 + ||residual||_2)`. `P` must be positive definite.
pub fn kyp_check(r: &RealizationArray, p: &HermitianMatrix) -> Result<KypCertificate> {
    kyp_check_with_tol(r, p, None)
}

pub fn kyp_check_with_tol(
    r: &RealizationArray,
    p: &HermitianMatrix,
    tol: Option<f64>,
) -> Result<KypCertificate> {
    check_order(r, p)?;
    let lambda_min = p.lambda_min();
    if !(lambda_min > 0.0) {
        return Err(Error::NotPositiveDefinite { lambda_min });
    }
    Ok(certify(r, p, tol))
}

/// [`kyp_check`] with `P = I_n`, i.e. `I - R* R >= 0`.
pub fn kyp_check_balanced(r: &RealizationArray) -> KypCertificate {
    certify(r, &HermitianMatrix::identity(r.n()), None)
}

/// Change of coordinates `T = P^{1/2}`:
/// `R' = (T A T^{-1}, T B, C T^{-1}, D)`, which is balanced.
pub fn normalize_certificate(r: &RealizationArray, p: &HermitianMatrix) -> Result<RealizationArray> {
    let cert = kyp_check(r, p)?;
    if !cert.verdict.is_yes() {
        return Err(Error::PreconditionFailed(format!(
            "P is not a KYP certificate (residual lambda_min = {:.3e})",
            cert.lambda_min
        )));
    }
    let t = hermitian_sqrt(p, None)?.into_matrix();
    let t_inv = hermitian_inverse_sqrt(p)?.into_matrix();
    let out = RealizationArray::new(
        &(&t * r.a()) * &t_inv,
        &t * r.b(),
        r.c() * &t_inv,
        r.d().clone(),
    )?;
    let balanced = kyp_check_balanced(&out);
    if !balanced.verdict.is_yes() {
        return Err(Error::Verification(format!(
            "normalized realization is not balanced (lambda_min = {:.3e})",
            balanced.lambda_min
        )));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub max_iter: usize,
    /// Stopping rule: `||P_{k+1} - P_k||_2 <= tol * (1 + ||P_{k+1}||_2)`.
    pub tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            max_iter: 20_000,
            tol: 1e-13,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMethod {
    /// Limit of the bounded-real Riccati iteration.
    Riccati,
    /// The realization is already balanced.
    Identity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum CertificateSearch {
    Found {
        certificate: KypCertificate,
        method: SearchMethod,
        iterations: usize,
    },
    /// Inconclusive: absence of a certificate refutes nothing.
    NotFound { iterations: usize, reason: String },
}

impl CertificateSearch {
    pub fn certificate(&self) -> Option<&KypCertificate> {
        match self {
            CertificateSearch::Found { certificate, .. } => Some(certificate),
            CertificateSearch::NotFound { .. } => None,
        }
    }
}

fn require_stable(a: &ComplexMatrix) -> Result<()> {
    let spectral_radius = spectral_radius(a)?;
    if spectral_radius >= 1.0 - STABILITY_MARGIN {
        return Err(Error::UnstableA { spectral_radius });
    }
    Ok(())
}

/// Bounded-real Riccati iteration from `P_0 = 0`:
///
/// ```text
/// P+ = A*PA + C*C + (A*PB + C*D)(I - D*D - B*PB)^{-1}(B*PA + D*C)
/// ```
///
/// The limit, when the pivot `I - D*D - B*PB` stays positive definite, makes
/// the KYP residual a rank-deficient PSD matrix. It is validated by the
/// semidefinite residual test; `P` itself may be singular when the
/// realization is not observable. If the iteration fails, `P = I` is tried.
pub fn certificate_search(r: &RealizationArray, opts: SearchOptions) -> Result<CertificateSearch> {
    require_stable(r.a())?;
    let (a, b, c, d) = (r.a(), r.b(), r.c(), r.d());
    let a_adj = a.adjoint();
    let b_adj = b.adjoint();
    let c_adj_c = &c.adjoint() * c;
    let c_adj_d = &c.adjoint() * d;
    let id_minus_dd = &ComplexMatrix::identity(r.m()) - &(&d.adjoint() * d);

    let root_n = (r.n().max(1) as f64).sqrt();
    let mut p = ComplexMatrix::zeros(r.n(), r.n());
    let mut iterations = 0;
    let mut failure = None;
    let mut converged = false;
    while iterations < opts.max_iter {
        iterations += 1;
        let pb = &p * b;
        let pivot = HermitianMatrix::symmetrize(&(&id_minus_dd - &(&b_adj * &pb)));
        if psd_test(&pivot, Definiteness::Strict, None).verdict != Verdict::Yes {
            failure = Some(format!(
                "Riccati pivot lost positivity at iteration {iterations} (lambda_min = {:.3e})",
                pivot.lambda_min()
            ));
            break;
        }
        let g = &(&a_adj * &pb) + &c_adj_d;
        let Some(x) = pivot.matrix().solve(&g.adjoint()) else {
            failure = Some(format!("singular Riccati pivot at iteration {iterations}"));
            break;
        };
        let next = &(&(&(&a_adj * &p) * a) + &c_adj_c) + &(&g * &x);
        let next = HermitianMatrix::symmetrize(&next).into_matrix();
        let delta = &next - &p;
        let size_f = frobenius_norm(&next);
        let step_f = frobenius_norm(&delta);
        p = next;
        if !size_f.is_finite() || size_f > 1e14 {
            failure = Some(format!("Riccati iterates diverge (||P||_F = {size_f:.3e})"));
            break;
        }
        // Frobenius screen, necessary for the spectral-norm rule below.
        if step_f <= root_n * opts.tol * (1.0 + size_f)
            && spectral_norm(&delta) <= opts.tol * (1.0 + spectral_norm(&p))
        {
            converged = true;
            break;
        }
    }
    if converged {
        let cert = certify(r, &HermitianMatrix::symmetrize(&p), None);
        if cert.verdict.is_yes() {
            return Ok(CertificateSearch::Found {
                certificate: cert,
                method: SearchMethod::Riccati,
                iterations,
            });
        }
        failure = Some(format!(
            "Riccati limit fails the KYP test (lambda_min = {:.3e})",
            cert.lambda_min
        ));
    }
    let balanced = kyp_check_balanced(r);
    if balanced.verdict.is_yes() {
        return Ok(CertificateSearch::Found {
            certificate: balanced,
            method: SearchMethod::Identity,
            iterations,
        });
    }
    Ok(CertificateSearch::NotFound {
        iterations,
        reason: failure
            .unwrap_or_else(|| format!("no convergence within {} iterations", opts.max_iter)),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gramians {
    /// `X = A X A* + B B*`.
    pub controllability: HermitianMatrix,
    /// `Y = A* Y A + C* C`.
    pub observability: HermitianMatrix,
    pub controllability_residual: f64,
    pub observability_residual: f64,
}

const DOUBLING_MAX_STEPS: usize = 64;

/// Solves `X = A X A* + Q` by doubling: `Q+ = Q + A_k Q A_k*`, `A_{k+1} = A_k^2`.
fn stein_doubling(a: &ComplexMatrix, q: &ComplexMatrix) -> Result<(HermitianMatrix, f64)> {
    let mut x = q.clone();
    let mut ak = a.clone();
    let mut done = false;
    for _ in 0..DOUBLING_MAX_STEPS {
        let inc = &(&ak * &x) * &ak.adjoint();
        x = &x + &inc;
        ak = &ak * &ak;
        if spectral_norm(&inc) <= 1e-12 * (1.0 + spectral_norm(&x)) {
            done = true;
            break;
        }
    }
    if !done {
        return Err(Error::Numerical("Stein doubling did not converge".into()));
    }
    let x = HermitianMatrix::symmetrize(&x);
    let res = &(x.matrix() - &(&(a * x.matrix()) * &a.adjoint())) - q;
    let res = spectral_norm(&res);
    if res > 1e-9 * (1.0 + spectral_norm(x.matrix())) {
        return Err(Error::Verification(format!(
            "Stein equation residual {res:.3e}"
        )));
    }
    Ok((x, res))
}

pub fn gramians(r: &RealizationArray) -> Result<Gramians> {
    require_stable(r.a())?;
    let (x, xr) = stein_doubling(r.a(), &(r.b() * &r.b().adjoint()))?;
    let (y, yr) = stein_doubling(&r.a().adjoint(), &(&r.c().adjoint() * r.c()))?;
    Ok(Gramians {
        controllability: x,
        observability: y,
        controllability_residual: xr,
        observability_residual: yr,
    })
}

#[cfg(test)]
/// Largest `|F(z) - G(z)|` entry over the given points; points near a pole
/// of either function are skipped.
pub(crate) fn max_transfer_mismatch(
    f: &RealizationArray,
    g: &RealizationArray,
    points: &[num_complex::Complex64],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &z in points {
        match (super::evaluate(f, z), super::evaluate(g, z)) {
            (Ok(x), Ok(y)) => worst = worst.max(x.max_abs_diff(&y)),
            (Err(Error::NearPole { .. }), _) | (_, Err(Error::NearPole { .. })) => {}
            (Err(e), _) | (_, Err(e)) => return Err(e),
        }
    }
    Ok(worst)
}
