//! Dense complex linear algebra.
//!
//! [`ComplexMatrix`] is the carrier for every matrix in the crate. It wraps a
//! `nalgebra::DMatrix<Complex64>` and guarantees finite entries from the
//! moment it is constructed. [`HermitianMatrix`] adds a Hermitian invariant
//! and is the input type for the eigenvalue based decisions (`is_psd`,
//! `hermitian_sqrt`, ...).
//!
//! Tolerance defaults scale with `1 + ||M||_2` so that decisions keep their
//! meaning across magnitudes.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used when checking that a matrix is Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Relative tolerance used by PSD decisions.
pub const PSD_TOL: f64 = 1e-10;

const SCHUR_MAX_ITER: usize = 10_000;

/// Dense complex matrix with finite entries.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct ComplexMatrix {
    inner: DMatrix<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Self::from_dmatrix(DMatrix::from_row_slice(rows, cols, &entries))
    }

    /// Builds a real matrix from row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    /// Builds a real matrix from an array of rows.
    ///
    /// ```
    /// # use dtpassive::linalg::ComplexMatrix;
    /// let a = ComplexMatrix::from_real_rows(&[[0.0, 2.0], [0.0, 0.0]]).unwrap();
    /// assert_eq!(a.shape(), (2, 2));
    /// ```
    pub fn from_real_rows<const C: usize>(rows: &[[f64; C]]) -> Result<Self> {
        let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::from_real(rows.len(), C, &flat)
    }

    /// Validating conversion from a nalgebra matrix.
    pub fn from_dmatrix(inner: DMatrix<Complex64>) -> Result<Self> {
        if let Some((idx, _)) = inner
            .iter()
            .enumerate()
            .find(|(_, z)| !(z.re.is_finite() && z.im.is_finite()))
        {
            let (r, c) = (idx % inner.nrows(), idx / inner.nrows());
            return Err(Error::InvalidInput(format!("non-finite entry at ({r}, {c})")));
        }
        Ok(Self { inner })
    }

    // Results of arithmetic on finite desk-scale matrices stay finite.
    pub(crate) fn wrap(inner: DMatrix<Complex64>) -> Self {
        debug_assert!(inner.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        Self { inner }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::wrap(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self::wrap(DMatrix::identity(n, n))
    }

    /// Diagonal matrix with real diagonal `d`. Panics on non-finite input.
    pub fn from_real_diagonal(d: &[f64]) -> Self {
        assert!(d.iter().all(|x| x.is_finite()), "non-finite diagonal entry");
        let n = d.len();
        Self::wrap(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(d[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    /// 1x1 matrix.
    pub fn scalar(z: Complex64) -> Result<Self> {
        Self::new(1, 1, vec![z])
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.inner.shape()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.inner
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::wrap(self.inner.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self::wrap(self.inner.transpose())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::wrap(&self.inner * Complex64::new(s, 0.0))
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        Self::wrap(&self.inner * s)
    }

    /// Copy of the `nrows x ncols` block starting at `(row, col)`.
    pub fn block(&self, row: usize, col: usize, nrows: usize, ncols: usize) -> Self {
        Self::wrap(self.inner.view((row, col), (nrows, ncols)).into_owned())
    }

    /// Block-diagonal matrix `diag(blocks[0], blocks[1], ...)`.
    pub fn block_diag(blocks: &[&ComplexMatrix]) -> Self {
        let rows = blocks.iter().map(|b| b.rows()).sum();
        let cols = blocks.iter().map(|b| b.cols()).sum();
        let mut out = DMatrix::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.view_mut((r, c), b.shape()).copy_from(&b.inner);
            r += b.rows();
            c += b.cols();
        }
        Self::wrap(out)
    }

    /// Horizontal concatenation; all blocks must share the row count.
    pub fn hstack(blocks: &[&ComplexMatrix]) -> Result<Self> {
        let rows = blocks.first().map_or(0, |b| b.rows());
        if blocks.iter().any(|b| b.rows() != rows) {
            return Err(Error::Shape("hstack blocks differ in row count".into()));
        }
        let cols = blocks.iter().map(|b| b.cols()).sum();
        let mut out = DMatrix::zeros(rows, cols);
        let mut c = 0;
        for b in blocks {
            out.view_mut((0, c), b.shape()).copy_from(&b.inner);
            c += b.cols();
        }
        Ok(Self::wrap(out))
    }

    /// Vertical concatenation; all blocks must share the column count.
    pub fn vstack(blocks: &[&ComplexMatrix]) -> Result<Self> {
        let cols = blocks.first().map_or(0, |b| b.cols());
        if blocks.iter().any(|b| b.cols() != cols) {
            return Err(Error::Shape("vstack blocks differ in column count".into()));
        }
        let rows = blocks.iter().map(|b| b.rows()).sum();
        let mut out = DMatrix::zeros(rows, cols);
        let mut r = 0;
        for b in blocks {
            out.view_mut((r, 0), b.shape()).copy_from(&b.inner);
            r += b.rows();
        }
        Ok(Self::wrap(out))
    }

    /// Largest entrywise modulus of `self - other`. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff shape mismatch");
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.inner.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// True when every entry has an exactly zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.inner.iter().all(|z| z.im == 0.0)
    }

    /// Real parts in row-major order.
    pub fn real_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.inner[(i, j)].re).collect())
            .collect()
    }

    /// Solves `self * X = rhs` by LU; `None` when singular.
    pub fn solve(&self, rhs: &ComplexMatrix) -> Option<ComplexMatrix> {
        assert!(self.is_square(), "solve requires a square matrix");
        if self.rows() == 0 {
            return Some(ComplexMatrix::zeros(0, rhs.cols()));
        }
        let x = self.inner.clone().lu().solve(&rhs.inner)?;
        ComplexMatrix::from_dmatrix(x).ok()
    }

    /// Rank with relative singular-value threshold `rtol`.
    pub fn rank(&self, rtol: f64) -> usize {
        let s = svd(self).singular_values;
        let cutoff = rtol * s.first().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
        s.iter().filter(|&&x| x > cutoff).count()
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix {}x{} ", self.rows(), self.cols())?;
        f.debug_list()
            .entries((0..self.rows()).map(|i| {
                (0..self.cols())
                    .map(|j| self.inner[(i, j)])
                    .collect::<Vec<_>>()
            }))
            .finish()
    }
}

impl<'a> Mul<&'a ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::wrap(&self.inner * &rhs.inner)
    }
}

impl<'a> Add<&'a ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::wrap(&self.inner + &rhs.inner)
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::wrap(&self.inner - &rhs.inner)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix::wrap(-&self.inner)
    }
}

/// Wire format: `{"rows": r, "cols": c, "re": [[...]], "im": [[...]]}`.
/// `im` may be omitted and is then all zeros.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub im: Option<Vec<Vec<f64>>>,
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        let check = |part: &[Vec<f64>], name: &str| -> Result<()> {
            // A 0 x c matrix may be written with no rows at all.
            if part.len() != j.rows {
                return Err(Error::InvalidInput(format!(
                    "\"{name}\" has {} rows, expected {}",
                    part.len(),
                    j.rows
                )));
            }
            if let Some(bad) = part.iter().position(|row| row.len() != j.cols) {
                return Err(Error::InvalidInput(format!(
                    "\"{name}\" row {bad} has {} entries, expected {}",
                    part[bad].len(),
                    j.cols
                )));
            }
            Ok(())
        };
        check(&j.re, "re")?;
        if let Some(im) = &j.im {
            check(im, "im")?;
        }
        let mut entries = Vec::with_capacity(j.rows * j.cols);
        for i in 0..j.rows {
            for k in 0..j.cols {
                let im = j.im.as_ref().map_or(0.0, |im| im[i][k]);
                entries.push(Complex64::new(j.re[i][k], im));
            }
        }
        ComplexMatrix::new(j.rows, j.cols, entries)
    }
}

impl From<ComplexMatrix> for MatrixJson {
    fn from(m: ComplexMatrix) -> Self {
        let re = m.real_rows();
        let im = (!m.is_real()).then(|| {
            (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| m.get(i, j).im).collect())
                .collect()
        });
        MatrixJson {
            rows: m.rows(),
            cols: m.cols(),
            re,
            im,
        }
    }
}

/// Hermitian matrix. The stored matrix is exactly Hermitian: inputs within
/// tolerance are symmetrized as `(M + M*) / 2` at construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct HermitianMatrix {
    inner: ComplexMatrix,
}

impl HermitianMatrix {
    /// Accepts `m` when `max |M - M*| <= 1e-12 * max(1, ||M||_2)`.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let tol = HERMITIAN_TOL * spectral_norm(&m).max(1.0);
        Self::with_tolerance(m, tol)
    }

    pub fn with_tolerance(m: ComplexMatrix, tolerance: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Shape(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let deviation = m.max_abs_diff(&m.adjoint());
        if deviation > tolerance {
            return Err(Error::NotHermitian {
                deviation,
                tolerance,
            });
        }
        Ok(Self::symmetrize(&m))
    }

    /// `(M + M*) / 2` without any tolerance check.
    pub fn symmetrize(m: &ComplexMatrix) -> Self {
        let h = (m + &m.adjoint()).scale(0.5);
        Self { inner: h }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: ComplexMatrix::identity(n),
        }
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        Self {
            inner: ComplexMatrix::from_real_diagonal(d),
        }
    }

    pub fn order(&self) -> usize {
        self.inner.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.inner
    }

    /// Smallest eigenvalue; `+inf` for the empty matrix.
    pub fn lambda_min(&self) -> f64 {
        hermitian_eigendecomposition(self)
            .values
            .first()
            .copied()
            .unwrap_or(f64::INFINITY)
    }

    /// Congruence `X* H X`, Hermitian again.
    pub fn congruence(&self, x: &ComplexMatrix) -> HermitianMatrix {
        HermitianMatrix::symmetrize(&(&(&x.adjoint() * &self.inner) * x))
    }

    pub fn add(&self, other: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix::symmetrize(&(&self.inner + &other.inner))
    }

    pub fn sub(&self, other: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix::symmetrize(&(&self.inner - &other.inner))
    }

    pub fn scale(&self, s: f64) -> HermitianMatrix {
        Self {
            inner: self.inner.scale(s),
        }
    }
}

impl TryFrom<ComplexMatrix> for HermitianMatrix {
    type Error = Error;
    fn try_from(m: ComplexMatrix) -> Result<Self> {
        HermitianMatrix::new(m)
    }
}

impl From<HermitianMatrix> for ComplexMatrix {
    fn from(h: HermitianMatrix) -> Self {
        h.inner
    }
}

/// Largest singular value.
pub fn spectral_norm(m: &ComplexMatrix) -> f64 {
    if m.rows() == 0 || m.cols() == 0 {
        return 0.0;
    }
    m.inner
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    m.inner.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigen-decomposition `H = V diag(values) V*` with ascending values.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

pub fn hermitian_eigendecomposition(h: &HermitianMatrix) -> HermitianEigen {
    let n = h.order();
    if n == 0 {
        return HermitianEigen {
            values: Vec::new(),
            vectors: ComplexMatrix::zeros(0, 0),
        };
    }
    let eig = h.inner.inner.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    HermitianEigen {
        values,
        vectors: ComplexMatrix::wrap(vectors),
    }
}

/// Thin SVD `M = U diag(sigma) V*`, with `U: r x k`, `V: c x k`,
/// `k = min(r, c)` and `sigma` descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let s: Vec<f64> = self.singular_values.clone();
        let sigma = ComplexMatrix::from_real_diagonal(&s);
        &(&self.u * &sigma) * &self.v.adjoint()
    }
}

pub fn svd(m: &ComplexMatrix) -> Svd {
    let (r, c) = m.shape();
    let k = r.min(c);
    if k == 0 {
        return Svd {
            u: ComplexMatrix::zeros(r, 0),
            singular_values: Vec::new(),
            v: ComplexMatrix::zeros(c, 0),
        };
    }
    let dec = m.inner.clone().svd(true, true);
    let (u, v_t) = (
        dec.u.expect("requested U"),
        dec.v_t.expect("requested V^T"),
    );
    // Stable sort: equal singular values keep their column order.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| dec.singular_values[b].total_cmp(&dec.singular_values[a]));
    let singular_values = order.iter().map(|&j| dec.singular_values[j]).collect();
    let u = DMatrix::from_fn(r, k, |i, j| u[(i, order[j])]);
    let v = DMatrix::from_fn(c, k, |i, j| v_t[(order[j], i)].conj());
    Svd {
        u: ComplexMatrix::wrap(u),
        singular_values,
        v: ComplexMatrix::wrap(v),
    }
}

/// Outcome of a tolerance-aware decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Marginal,
}

impl Verdict {
    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Marginal => "marginal",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Definiteness {
    /// Positive definite.
    Strict,
    /// Positive semidefinite.
    Semi,
}

/// Detailed result of [`psd_test`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsdTest {
    pub lambda_min: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

pub fn default_psd_tol(h: &HermitianMatrix) -> f64 {
    PSD_TOL * (1.0 + spectral_norm(&h.inner))
}

/// Classifies `lambda_min(H)` against `tol`:
///
/// * strict: yes if `lambda_min > tol`, marginal if `|lambda_min| <= tol`;
/// * semi: yes if `lambda_min >= -tol`;
///
/// and no otherwise. The default tolerance is `1e-10 * (1 + ||H||_2)`.
pub fn psd_test(h: &HermitianMatrix, mode: Definiteness, tol: Option<f64>) -> PsdTest {
    let tolerance = tol.unwrap_or_else(|| default_psd_tol(h));
    let lambda_min = h.lambda_min();
    let verdict = match mode {
        Definiteness::Strict if lambda_min > tolerance => Verdict::Yes,
        Definiteness::Strict if lambda_min.abs() <= tolerance => Verdict::Marginal,
        Definiteness::Semi if lambda_min >= -tolerance => Verdict::Yes,
        _ => Verdict::No,
    };
    PsdTest {
        lambda_min,
        tolerance,
        verdict,
    }
}

pub fn is_psd(h: &HermitianMatrix, mode: Definiteness, tol: Option<f64>) -> Verdict {
    psd_test(h, mode, tol).verdict
}

/// Eigenvalues of a general square matrix via the complex Schur form.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "eigenvalues need a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if a.rows() == 0 {
        return Ok(Vec::new());
    }
    let schur = Schur::try_new(a.inner.clone(), f64::EPSILON, SCHUR_MAX_ITER)
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let ev = schur
        .eigenvalues()
        .ok_or_else(|| Error::Numerical("Schur form is not triangular".into()))?;
    Ok(ev.iter().copied().collect())
}

pub fn spectral_radius(a: &ComplexMatrix) -> Result<f64> {
    Ok(eigenvalues(a)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// `V diag(f(lambda)) V*`.
fn hermitian_map(h: &HermitianMatrix, f: impl Fn(f64) -> f64) -> HermitianMatrix {
    let eig = hermitian_eigendecomposition(h);
    let fd: Vec<f64> = eig.values.iter().map(|&l| f(l)).collect();
    let d = ComplexMatrix::from_real_diagonal(&fd);
    HermitianMatrix::symmetrize(&(&(&eig.vectors * &d) * &eig.vectors.adjoint()))
}

/// PSD square root. Eigenvalues in `[-tol, 0)` are clamped to zero.
pub fn hermitian_sqrt(h: &HermitianMatrix, tol: Option<f64>) -> Result<HermitianMatrix> {
    let tolerance = tol.unwrap_or_else(|| default_psd_tol(h));
    let lambda_min = h.lambda_min();
    if lambda_min < -tolerance {
        return Err(Error::NotPsd {
            lambda_min,
            tolerance,
        });
    }
    Ok(hermitian_map(h, |l| l.max(0.0).sqrt()))
}

/// `H^{-1/2}` for positive definite `H`.
pub fn hermitian_inverse_sqrt(h: &HermitianMatrix) -> Result<HermitianMatrix> {
    let lambda_min = h.lambda_min();
    if !(lambda_min > 0.0) && h.order() > 0 {
        return Err(Error::NotPositiveDefinite { lambda_min });
    }
    Ok(hermitian_map(h, |l| 1.0 / l.sqrt()))
}

/// Serde adapter writing a complex scalar as `{"re": .., "im": ..}`.
pub mod complex_json {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct ReIm {
        re: f64,
        #[serde(default)]
        im: f64,
    }

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        ReIm { re: z.re, im: z.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Complex64, D::Error> {
        let v = ReIm::deserialize(d)?;
        Ok(Complex64::new(v.re, v.im))
    }
}
