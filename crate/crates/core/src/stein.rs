//! Scaled Stein sets.
//!
//! For Hermitian `H` and `alpha > 0` the open set `(1/alpha) S_H` contains
//! every square `A` with `H - A* H A / alpha^2` positive definite; the closed
//! set asks for positive semidefinite. For `H` positive definite membership
//! is equivalent to `||H^{1/2} A H^{-1/2}||_2 < alpha` (`<=` when closed).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_inverse_sqrt, hermitian_sqrt, psd_test, spectral_norm, spectral_radius,
    ComplexMatrix, Definiteness, HermitianMatrix, Verdict,
};

/// Relative band used when comparing a weighted norm against `alpha`.
pub const NORM_BAND: f64 = 1e-10;

/// Tolerance for the self-checks of the constructive proofs.
pub const IDENTITY_TOL: f64 = 1e-10;

/// `(1/alpha) S_H` (open) or its closure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SteinSetJson", into = "SteinSetJson")]
pub struct SteinSetSpec {
    h: HermitianMatrix,
    alpha: f64,
    closed: bool,
    positive_definite_h: bool,
}

/// Wire format: `{"H": <matrix>, "alpha": a, "closed": bool}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SteinSetJson {
    #[serde(rename = "H")]
    pub h: HermitianMatrix,
    pub alpha: f64,
    pub closed: bool,
}

impl SteinSetSpec {
    pub fn new(h: HermitianMatrix, alpha: f64, closed: bool) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::ParameterOutOfRange(format!(
                "alpha must be positive and finite, got {alpha}"
            )));
        }
        let positive_definite_h =
            h.order() == 0 || psd_test(&h, Definiteness::Strict, None).verdict == Verdict::Yes;
        Ok(Self {
            h,
            alpha,
            closed,
            positive_definite_h,
        })
    }

    /// `(1/alpha) S_{I_n}` or its closure.
    pub fn identity(n: usize, alpha: f64, closed: bool) -> Result<Self> {
        Self::new(HermitianMatrix::identity(n), alpha, closed)
    }

    pub fn h(&self) -> &HermitianMatrix {
        &self.h
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn closed(&self) -> bool {
        self.closed
    }

    pub fn order(&self) -> usize {
        self.h.order()
    }

    pub fn positive_definite_h(&self) -> bool {
        self.positive_definite_h
    }

    /// Same `H` and openness, different scale.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.h.clone(), alpha, self.closed)
    }

    fn definiteness(&self) -> Definiteness {
        if self.closed {
            Definiteness::Semi
        } else {
            Definiteness::Strict
        }
    }
}

impl TryFrom<SteinSetJson> for SteinSetSpec {
    type Error = Error;
    fn try_from(j: SteinSetJson) -> Result<Self> {
        SteinSetSpec::new(j.h, j.alpha, j.closed)
    }
}

impl From<SteinSetSpec> for SteinSetJson {
    fn from(s: SteinSetSpec) -> Self {
        SteinSetJson {
            h: s.h,
            alpha: s.alpha,
            closed: s.closed,
        }
    }
}

/// Gap `H - A* H A / alpha^2` together with the membership decision.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteinGapReport {
    pub gap: HermitianMatrix,
    pub lambda_min: f64,
    pub tolerance: f64,
    pub member: Verdict,
}

fn check_square(spec: &SteinSetSpec, a: &ComplexMatrix) -> Result<()> {
    if a.shape() != (spec.order(), spec.order()) {
        return Err(Error::Shape(format!(
            "expected a {n}x{n} matrix, got {}x{}",
            a.rows(),
            a.cols(),
            n = spec.order()
        )));
    }
    Ok(())
}

fn gap_matrix(h: &HermitianMatrix, a: &ComplexMatrix, alpha: f64) -> HermitianMatrix {
    h.sub(&h.congruence(a).scale(1.0 / (alpha * alpha)))
}

pub fn stein_gap(spec: &SteinSetSpec, a: &ComplexMatrix) -> Result<SteinGapReport> {
    stein_gap_with_tol(spec, a, None)
}

/// [`stein_gap`] with an explicit PSD tolerance.
pub fn stein_gap_with_tol(
    spec: &SteinSetSpec,
    a: &ComplexMatrix,
    tol: Option<f64>,
) -> Result<SteinGapReport> {
    check_square(spec, a)?;
    let gap = gap_matrix(&spec.h, a, spec.alpha);
    let test = psd_test(&gap, spec.definiteness(), tol);
    Ok(SteinGapReport {
        gap,
        lambda_min: test.lambda_min,
        tolerance: test.tolerance,
        member: test.verdict,
    })
}

/// Membership decided through the weighted norm `||H^{1/2} A H^{-1/2}||_2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormMembership {
    pub weighted_norm: f64,
    pub verdict: Verdict,
}

/// Requires `H` positive definite. Norms within `NORM_BAND * alpha` of
/// `alpha` are reported as marginal for the open set.
pub fn norm_membership(spec: &SteinSetSpec, a: &ComplexMatrix) -> Result<NormMembership> {
    check_square(spec, a)?;
    if !spec.positive_definite_h {
        return Err(Error::HNotPositiveDefinite {
            lambda_min: spec.h.lambda_min(),
        });
    }
    let weighted_norm = weighted_norm(&spec.h, a)?;
    let band = NORM_BAND * spec.alpha;
    let verdict = if spec.closed {
        if weighted_norm <= spec.alpha + band {
            Verdict::Yes
        } else {
            Verdict::No
        }
    } else if weighted_norm < spec.alpha - band {
        Verdict::Yes
    } else if weighted_norm <= spec.alpha + band {
        Verdict::Marginal
    } else {
        Verdict::No
    };
    Ok(NormMembership {
        weighted_norm,
        verdict,
    })
}

/// `||H^{1/2} A H^{-1/2}||_2` for positive definite `H`.
pub fn weighted_norm(h: &HermitianMatrix, a: &ComplexMatrix) -> Result<f64> {
    let root = hermitian_sqrt(h, None)?;
    let inv_root = hermitian_inverse_sqrt(h)?;
    Ok(spectral_norm(&(&(root.matrix() * a) * inv_root.matrix())))
}

/// Product `AB` of members of `(1/alpha) S_H` and `(1/beta) S_H`, its gap at
/// scale `alpha * beta`, and the gap rebuilt from the factors' gaps as
/// `B* Q_a B / beta^2 + Q_b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductClosure {
    pub product: ComplexMatrix,
    pub report: SteinGapReport,
    pub constructive_residual: HermitianMatrix,
    pub residual_mismatch: f64,
}

pub fn product_closure_check(
    h: &HermitianMatrix,
    closed: bool,
    a: &ComplexMatrix,
    alpha: f64,
    b: &ComplexMatrix,
    beta: f64,
) -> Result<ProductClosure> {
    let spec_a = SteinSetSpec::new(h.clone(), alpha, closed)?;
    let spec_b = spec_a.with_alpha(beta)?;
    let gap_a = stein_gap(&spec_a, a)?;
    if gap_a.member != Verdict::Yes {
        return Err(Error::PreconditionFailed(format!(
            "A is not a member at scale {alpha} (lambda_min {:.3e})",
            gap_a.lambda_min
        )));
    }
    let gap_b = stein_gap(&spec_b, b)?;
    if gap_b.member != Verdict::Yes {
        return Err(Error::PreconditionFailed(format!(
            "B is not a member at scale {beta} (lambda_min {:.3e})",
            gap_b.lambda_min
        )));
    }

    let product = a * b;
    let spec_ab = spec_a.with_alpha(alpha * beta)?;
    let report = stein_gap(&spec_ab, &product)?;
    let constructive_residual = gap_a
        .gap
        .congruence(b)
        .scale(1.0 / (beta * beta))
        .add(&gap_b.gap);
    let residual_mismatch = report.gap.matrix().max_abs_diff(constructive_residual.matrix());

    let scale = 1.0
        + spectral_norm(h.matrix())
        + spectral_norm(h.congruence(&product).matrix()) / (alpha * beta).powi(2);
    if residual_mismatch > IDENTITY_TOL * scale {
        return Err(Error::Verification(format!(
            "constructive residual differs from the product gap by {residual_mismatch:.3e}"
        )));
    }
    Ok(ProductClosure {
        product,
        report,
        constructive_residual,
        residual_mismatch,
    })
}

/// Partner `A = B* / (1 + 2 eps)` for a matrix `B` with `||B||_2 = 1 + eps`.
/// `A` lies in the open unit ball while `AB` is PSD with spectral radius
/// `(1 + eps)^2 / (1 + 2 eps) > 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaximalityWitness {
    pub a: ComplexMatrix,
    pub epsilon: f64,
    pub a_norm: f64,
    pub product: ComplexMatrix,
    pub product_norm: f64,
    pub product_radius: f64,
}

impl MaximalityWitness {
    /// `(1 + eps) / (1 + 2 eps)`.
    pub fn expected_a_norm(&self) -> f64 {
        (1.0 + self.epsilon) / (1.0 + 2.0 * self.epsilon)
    }

    /// `(1 + eps)^2 / (1 + 2 eps) = 1 + eps^2 / (1 + 2 eps)`.
    pub fn expected_product_norm(&self) -> f64 {
        1.0 + self.epsilon * self.epsilon / (1.0 + 2.0 * self.epsilon)
    }
}

pub fn maximality_witness(b: &ComplexMatrix) -> Result<MaximalityWitness> {
    if !b.is_square() {
        return Err(Error::Shape(format!(
            "witness needs a square matrix, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    let norm = spectral_norm(b);
    if norm <= 1.0 {
        return Err(Error::NotOutside { norm });
    }
    let epsilon = norm - 1.0;
    let a = b.adjoint().scale(1.0 / (1.0 + 2.0 * epsilon));
    let product = &a * b;
    let witness = MaximalityWitness {
        a_norm: spectral_norm(&a),
        product_norm: spectral_norm(&product),
        product_radius: spectral_radius(&product)?,
        a,
        epsilon,
        product,
    };

    let close = |got: f64, want: f64| (got - want).abs() <= IDENTITY_TOL * (1.0 + want);
    if !close(witness.a_norm, witness.expected_a_norm()) {
        return Err(Error::Verification(format!(
            "||A||_2 = {} but expected {}",
            witness.a_norm,
            witness.expected_a_norm()
        )));
    }
    let expected = witness.expected_product_norm();
    if !close(witness.product_norm, expected) || !close(witness.product_radius, expected) {
        return Err(Error::Verification(format!(
            "||AB||_2 = {}, rho(AB) = {}, expected {expected}",
            witness.product_norm, witness.product_radius
        )));
    }
    let ab = HermitianMatrix::new(witness.product.clone())?;
    if psd_test(&ab, Definiteness::Semi, None).verdict != Verdict::Yes {
        return Err(Error::Verification("AB is not PSD".into()));
    }
    Ok(witness)
}

/// Spectral radius of a member of the closed set; checks it does not exceed
/// `alpha` (beyond `1e-9 * (1 + alpha)`).
pub fn spectral_radius_bound_check(spec: &SteinSetSpec, a: &ComplexMatrix) -> Result<f64> {
    check_square(spec, a)?;
    if !spec.positive_definite_h {
        return Err(Error::HNotPositiveDefinite {
            lambda_min: spec.h.lambda_min(),
        });
    }
    let closed = SteinSetSpec::new(spec.h.clone(), spec.alpha, true)?;
    let report = stein_gap(&closed, a)?;
    if report.member != Verdict::Yes {
        return Err(Error::PreconditionFailed(format!(
            "matrix is not in the closed Stein set (lambda_min {:.3e})",
            report.lambda_min
        )));
    }
    let radius = spectral_radius(a)?;
    if radius > spec.alpha + 1e-9 * (1.0 + spec.alpha) {
        return Err(Error::Verification(format!(
            "spectral radius {radius} exceeds alpha = {}",
            spec.alpha
        )));
    }
    Ok(radius)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[[f64; 2]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn zero_is_member() {
        let spec = SteinSetSpec::identity(2, 1.0, false).unwrap();
        let r = stein_gap(&spec, &ComplexMatrix::zeros(2, 2)).unwrap();
        assert_eq!(r.member, Verdict::Yes);
        assert!(r.gap.matrix().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn boundary_member_of_closed_only() {
        let a = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        let open = SteinSetSpec::identity(2, 1.0, false).unwrap();
        let closed = SteinSetSpec::identity(2, 1.0, true).unwrap();
        let r = stein_gap(&open, &a).unwrap();
        assert_eq!(r.lambda_min, 0.0);
        assert_eq!(r.member, Verdict::Marginal);
        assert_eq!(stein_gap(&closed, &a).unwrap().member, Verdict::Yes);
    }

    #[test]
    fn norm_membership_examples() {
        let spec = SteinSetSpec::identity(2, 1.0, false).unwrap();
        let half = m(&[[0.3, 0.4], [0.0, 0.0]]);
        assert_eq!(norm_membership(&spec, &half).unwrap().verdict, Verdict::Yes);
        let nil = m(&[[0.0, 2.0], [0.0, 0.0]]);
        let r = norm_membership(&spec, &nil).unwrap();
        assert_eq!(r.verdict, Verdict::No);
        assert!((r.weighted_norm - 2.0).abs() < 1e-14);
    }

    #[test]
    fn norm_membership_needs_definite_h() {
        let spec =
            SteinSetSpec::new(HermitianMatrix::from_real_diagonal(&[1.0, -1.0]), 1.0, false)
                .unwrap();
        assert!(!spec.positive_definite_h());
        assert!(matches!(
            norm_membership(&spec, &ComplexMatrix::zeros(2, 2)),
            Err(Error::HNotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn shape_errors() {
        let spec = SteinSetSpec::identity(2, 1.0, true).unwrap();
        assert!(matches!(
            stein_gap(&spec, &ComplexMatrix::zeros(3, 3)),
            Err(Error::Shape(_))
        ));
        assert!(SteinSetSpec::identity(2, 0.0, true).is_err());
        assert!(SteinSetSpec::identity(2, -1.0, true).is_err());
    }

    #[test]
    fn zero_product() {
        let h = HermitianMatrix::identity(2);
        let z = ComplexMatrix::zeros(2, 2);
        let pc = product_closure_check(&h, false, &z, 1.0, &z, 1.0).unwrap();
        assert_eq!(pc.report.member, Verdict::Yes);
        assert_eq!(pc.residual_mismatch, 0.0);
    }

    #[test]
    fn product_requires_members() {
        let h = HermitianMatrix::identity(2);
        let big = ComplexMatrix::identity(2).scale(2.0);
        let z = ComplexMatrix::zeros(2, 2);
        assert!(matches!(
            product_closure_check(&h, false, &big, 1.0, &z, 1.0),
            Err(Error::PreconditionFailed(_))
        ));
        assert!(matches!(
            product_closure_check(&h, false, &z, 1.0, &big, 1.0),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn witness_for_two_identity() {
        let b = ComplexMatrix::identity(2).scale(2.0);
        let w = maximality_witness(&b).unwrap();
        assert!((w.epsilon - 1.0).abs() < 1e-15);
        assert!(w.a.max_abs_diff(&ComplexMatrix::identity(2).scale(2.0 / 3.0)) < 1e-15);
        assert!(w.product.max_abs_diff(&ComplexMatrix::identity(2).scale(4.0 / 3.0)) < 1e-15);
        assert!((w.product_norm - 4.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn witness_for_rank_one() {
        // B = 1.5 * u v*, eps = 0.5: ||AB|| = 2.25 / 2
        let b = m(&[[0.0, 0.0], [0.9, 1.2]]);
        let w = maximality_witness(&b).unwrap();
        assert!((w.epsilon - 0.5).abs() < 1e-14);
        assert!((w.product_norm - 1.125).abs() < 1e-13);
        assert!((w.product_radius - 1.125).abs() < 1e-13);
    }

    #[test]
    fn witness_rejects_inside() {
        let b = ComplexMatrix::identity(3).scale(0.99);
        assert!(matches!(
            maximality_witness(&b),
            Err(Error::NotOutside { .. })
        ));
        assert!(matches!(
            maximality_witness(&ComplexMatrix::identity(2)),
            Err(Error::NotOutside { .. })
        ));
    }

    #[test]
    fn radius_bound_scaled_identity() {
        let alpha = 0.7;
        let spec = SteinSetSpec::identity(3, alpha, true).unwrap();
        let a = ComplexMatrix::identity(3).scale(0.9 * alpha);
        let r = spectral_radius_bound_check(&spec, &a).unwrap();
        assert!((r - 0.9 * alpha).abs() < 1e-14);
        let outside = ComplexMatrix::identity(3).scale(1.1 * alpha);
        assert!(matches!(
            spectral_radius_bound_check(&spec, &outside),
            Err(Error::PreconditionFailed(_))
        ));
    }

    #[test]
    fn radius_bound_non_normal_weighted() {
        // Not a contraction in the 2-norm, but a member for H = diag(4, 1).
        let h = HermitianMatrix::from_real_diagonal(&[4.0, 1.0]);
        let spec = SteinSetSpec::new(h, 1.0, true).unwrap();
        let a = m(&[[0.5, 0.0], [0.9, 0.5]]);
        assert!(spectral_norm(&a) > 1.0);
        let r = spectral_radius_bound_check(&spec, &a).unwrap();
        assert!(r <= 1.0);
        assert!((r - 0.5).abs() < 1e-7);
    }

    #[test]
    fn json_roundtrip() {
        let spec = SteinSetSpec::new(HermitianMatrix::from_real_diagonal(&[2.0, 1.0]), 0.5, true)
            .unwrap();
        let s = serde_json::to_string(&spec).unwrap();
        assert!(s.contains("\"H\"") && s.contains("\"alpha\":0.5") && s.contains("\"closed\":true"));
        let back: SteinSetSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, spec);
    }
}
