//! State-space realization arrays
//!
//! ```text
//!          | A  B |
//!    R_F = |------|        F(z) = C (z I_n - A)^{-1} B + D
//!          | C  D |
//! ```
//!
//! A [`RealizationArray`] is at the same time a system (the block view) and an
//! `(n+m) x (n+m)` matrix (the flattened view); the two are interconvertible
//! without loss. Constant functions are realized with `n = 0`.

mod generators;
mod kyp;

pub use generators::{
    example_family, planar_rotation, reflect_realization, rotation_realization, ExampleFamily,
};
pub use kyp::{
    certificate_search, gramians, kyp_check, kyp_check_balanced, kyp_check_with_tol,
    normalize_certificate, CertificateSearch, Gramians, KypCertificate, SearchMethod,
    SearchOptions,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, spectral_norm, ComplexMatrix};

/// Relative exclusion radius around poles: `|z - pole| <= POLE_EXCLUSION * (1 + |z|)`
/// is rejected.
pub const POLE_EXCLUSION: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RealizationJson", into = "RealizationJson")]
pub struct RealizationArray {
    n: usize,
    m: usize,
    a: ComplexMatrix,
    b: ComplexMatrix,
    c: ComplexMatrix,
    d: ComplexMatrix,
}

impl RealizationArray {
    pub fn new(a: ComplexMatrix, b: ComplexMatrix, c: ComplexMatrix, d: ComplexMatrix) -> Result<Self> {
        let n = a.rows();
        let m = d.rows();
        let ok = a.shape() == (n, n)
            && b.shape() == (n, m)
            && c.shape() == (m, n)
            && d.shape() == (m, m)
            && m > 0;
        if !ok {
            return Err(Error::Shape(format!(
                "inconsistent blocks: A {:?}, B {:?}, C {:?}, D {:?}",
                a.shape(),
                b.shape(),
                c.shape(),
                d.shape()
            )));
        }
        Ok(Self { n, m, a, b, c, d })
    }

    /// Zero-degree realization of `F(z) = D`.
    pub fn constant(d: ComplexMatrix) -> Result<Self> {
        let m = d.rows();
        Self::new(
            ComplexMatrix::zeros(0, 0),
            ComplexMatrix::zeros(0, m),
            ComplexMatrix::zeros(m, 0),
            d,
        )
    }

    /// Splits an `(n+m) x (n+m)` matrix into blocks.
    pub fn from_matrix(r: &ComplexMatrix, n: usize, m: usize) -> Result<Self> {
        if r.shape() != (n + m, n + m) {
            return Err(Error::Shape(format!(
                "array is {}x{}, partition ({n}, {m}) needs {k}x{k}",
                r.rows(),
                r.cols(),
                k = n + m
            )));
        }
        Self::new(
            r.block(0, 0, n, n),
            r.block(0, n, n, m),
            r.block(n, 0, m, n),
            r.block(n, n, m, m),
        )
    }

    /// Flattened `(n+m) x (n+m)` matrix face.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let top = ComplexMatrix::hstack(&[&self.a, &self.b]).expect("n rows");
        let bottom = ComplexMatrix::hstack(&[&self.c, &self.d]).expect("m rows");
        ComplexMatrix::vstack(&[&top, &bottom]).expect("n+m columns")
    }

    /// State order.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Input/output size.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn b(&self) -> &ComplexMatrix {
        &self.b
    }

    pub fn c(&self) -> &ComplexMatrix {
        &self.c
    }

    pub fn d(&self) -> &ComplexMatrix {
        &self.d
    }

    pub fn is_real(&self) -> bool {
        self.a.is_real() && self.b.is_real() && self.c.is_real() && self.d.is_real()
    }

    /// Eigenvalues of `A`.
    pub fn poles(&self) -> Result<Vec<Complex64>> {
        eigenvalues(&self.a)
    }

    /// Evaluator with the poles computed once.
    pub fn transfer_function(&self) -> Result<TransferFunction<'_>> {
        Ok(TransferFunction {
            realization: self,
            poles: self.poles()?,
        })
    }

    pub fn evaluate(&self, z: Complex64) -> Result<ComplexMatrix> {
        evaluate(self, z)
    }
}

/// Wire format. Either the block form
/// `{"n", "m", "A", "B", "C", "D"}` (A, B, C may be omitted when `n = 0`)
/// or the flattened form `{"n", "m", "R"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RealizationJson {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub a: Option<ComplexMatrix>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<ComplexMatrix>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub c: Option<ComplexMatrix>,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub d: Option<ComplexMatrix>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub r: Option<ComplexMatrix>,
}

impl TryFrom<RealizationJson> for RealizationArray {
    type Error = Error;

    fn try_from(j: RealizationJson) -> Result<Self> {
        let out = match (j.r, j.d) {
            (Some(r), None) if j.a.is_none() && j.b.is_none() && j.c.is_none() => {
                RealizationArray::from_matrix(&r, j.n, j.m)?
            }
            (None, Some(d)) => {
                let (n, m) = (j.n, j.m);
                let missing = |name: &str| {
                    Error::InvalidInput(format!("block \"{name}\" is required when n > 0"))
                };
                let a = match j.a {
                    Some(a) => a,
                    None if n == 0 => ComplexMatrix::zeros(0, 0),
                    None => return Err(missing("A")),
                };
                let b = match j.b {
                    Some(b) => b,
                    None if n == 0 => ComplexMatrix::zeros(0, m),
                    None => return Err(missing("B")),
                };
                let c = match j.c {
                    Some(c) => c,
                    None if n == 0 => ComplexMatrix::zeros(m, 0),
                    None => return Err(missing("C")),
                };
                RealizationArray::new(a, b, c, d)?
            }
            _ => {
                return Err(Error::InvalidInput(
                    "realization needs either blocks A, B, C, D or a flattened \"R\"".into(),
                ))
            }
        };
        if (out.n, out.m) != (j.n, j.m) {
            return Err(Error::Shape(format!(
                "declared (n, m) = ({}, {}) but blocks give ({}, {})",
                j.n, j.m, out.n, out.m
            )));
        }
        Ok(out)
    }
}

impl From<RealizationArray> for RealizationJson {
    fn from(r: RealizationArray) -> Self {
        RealizationJson {
            n: r.n,
            m: r.m,
            a: Some(r.a),
            b: Some(r.b),
            c: Some(r.c),
            d: Some(r.d),
            r: None,
        }
    }
}

/// Transfer function of a realization with cached poles.
#[derive(Clone, Debug)]
pub struct TransferFunction<'a> {
    realization: &'a RealizationArray,
    poles: Vec<Complex64>,
}

impl TransferFunction<'_> {
    pub fn poles(&self) -> &[Complex64] {
        &self.poles
    }

    /// `D + C (zI - A)^{-1} B`, by a linear solve.
    pub fn eval(&self, z: Complex64) -> Result<ComplexMatrix> {
        let r = self.realization;
        if r.n == 0 {
            return Ok(r.d.clone());
        }
        let radius = POLE_EXCLUSION * (1.0 + z.norm());
        let nearest = self
            .poles
            .iter()
            .copied()
            .min_by(|p, q| (z - p).norm().total_cmp(&(z - q).norm()));
        if let Some(pole) = nearest.filter(|p| (z - p).norm() <= radius) {
            return Err(Error::NearPole { z, pole });
        }
        let shifted = &ComplexMatrix::identity(r.n).scale_complex(z) - &r.a;
        let x = shifted.solve(&r.b).ok_or(Error::NearPole {
            z,
            pole: nearest.unwrap_or(z),
        })?;
        Ok(&r.d + &(&r.c * &x))
    }

    /// `||F(z)||_2`.
    pub fn norm_at(&self, z: Complex64) -> Result<f64> {
        let f = self.eval(z)?;
        Ok(match f.shape() {
            (1, 1) => f.get(0, 0).norm(),
            (2, 2) => norm_2x2(&f),
            _ => spectral_norm(&f),
        })
    }
}

/// Largest singular value from `s^2 = (f + sqrt(f^2 - 4 |det|^2)) / 2`,
/// `f = ||F||_F^2`.
fn norm_2x2(f: &ComplexMatrix) -> f64 {
    let (a, b, c, d) = (f.get(0, 0), f.get(0, 1), f.get(1, 0), f.get(1, 1));
    let fro = a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + d.norm_sqr();
    let det = (a * d - b * c).norm();
    let disc = ((fro - 2.0 * det) * (fro + 2.0 * det)).max(0.0);
    ((fro + disc.sqrt()) / 2.0).sqrt()
}

/// `F(z) = D + C (zI - A)^{-1} B`. Fails with `NearPole` when `z` is within
/// `1e-12 * (1 + |z|)` of an eigenvalue of `A`.
pub fn evaluate(r: &RealizationArray, z: Complex64) -> Result<ComplexMatrix> {
    r.transfer_function()?.eval(z)
}

/// Cascade realization of `F_a(z) F_b(z)`:
/// `A = [[A_a, B_a C_b], [0, A_b]]`, `B = [B_a D_b; B_b]`,
/// `C = [C_a, D_a C_b]`, `D = D_a D_b`.
pub fn series_product(ra: &RealizationArray, rb: &RealizationArray) -> Result<RealizationArray> {
    if ra.m != rb.m {
        return Err(Error::Shape(format!(
            "cannot multiply {0}x{0}- and {1}x{1}-valued functions",
            ra.m, rb.m
        )));
    }
    let zero = ComplexMatrix::zeros(rb.n, ra.n);
    let top = ComplexMatrix::hstack(&[&ra.a, &(&ra.b * &rb.c)])?;
    let bottom = ComplexMatrix::hstack(&[&zero, &rb.a])?;
    let a = ComplexMatrix::vstack(&[&top, &bottom])?;
    let b = ComplexMatrix::vstack(&[&(&ra.b * &rb.d), &rb.b])?;
    let c = ComplexMatrix::hstack(&[&ra.c, &(&ra.d * &rb.c)])?;
    let d = &ra.d * &rb.d;
    RealizationArray::new(a, b, c, d)
}

/// Block-diagonal structured isometry `v_j = diag(v_{j,n}, v_{j,m})` with
/// `sum_j v_j* v_j = I_{n+m}`.
///
/// Block `j` maps the combined state/port spaces (`n`, `m`) into the spaces
/// of the `j`-th realization, so `v_{j,n}` is `n_j x n` and `v_{j,m}` is
/// `m_j x m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockDiagIsometryTuple {
    n: usize,
    m: usize,
    blocks: Vec<BlockPair>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockPair {
    pub state: ComplexMatrix,
    pub port: ComplexMatrix,
}

impl BlockDiagIsometryTuple {
    pub fn new(n: usize, m: usize, blocks: Vec<BlockPair>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Shape("isometry tuple has no blocks".into()));
        }
        for (j, p) in blocks.iter().enumerate() {
            if p.state.cols() != n || p.port.cols() != m {
                return Err(Error::Shape(format!(
                    "block {j}: state part {:?}, port part {:?}, expected _ x {n} and _ x {m}",
                    p.state.shape(),
                    p.port.shape()
                )));
            }
        }
        Ok(Self { n, m, blocks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn blocks(&self) -> &[BlockPair] {
        &self.blocks
    }

    /// `diag(v_{j,n}, v_{j,m})`.
    pub fn block_matrix(&self, j: usize) -> ComplexMatrix {
        let p = &self.blocks[j];
        ComplexMatrix::block_diag(&[&p.state, &p.port])
    }

    /// `||sum_j v_j* v_j - I_{n+m}||_2`.
    pub fn defect(&self) -> f64 {
        let k = self.n + self.m;
        let mut gram = ComplexMatrix::zeros(k, k);
        for j in 0..self.blocks.len() {
            let v = self.block_matrix(j);
            gram = &gram + &(&v.adjoint() * &v);
        }
        spectral_norm(&(&gram - &ComplexMatrix::identity(k)))
    }
}

/// `sum_j v_j* R_j v_j` on the matrix face, returned on the array face with
/// partition `(n, m)`.
pub fn combine_realizations(
    t: &BlockDiagIsometryTuple,
    rs: &[RealizationArray],
) -> Result<RealizationArray> {
    if rs.len() != t.blocks.len() {
        return Err(Error::Shape(format!(
            "{} realizations for a tuple of length {}",
            rs.len(),
            t.blocks.len()
        )));
    }
    for (j, (p, r)) in t.blocks.iter().zip(rs).enumerate() {
        if p.state.rows() != r.n || p.port.rows() != r.m {
            return Err(Error::Shape(format!(
                "realization {j} has partition ({}, {}), block expects ({}, {})",
                r.n,
                r.m,
                p.state.rows(),
                p.port.rows()
            )));
        }
    }
    let defect = t.defect();
    if defect > crate::mconvex::ISOMETRY_TOL {
        return Err(Error::InvalidIsometry { defect });
    }
    let k = t.n + t.m;
    let mut acc = ComplexMatrix::zeros(k, k);
    for (j, r) in rs.iter().enumerate() {
        let v = t.block_matrix(j);
        acc = &acc + &(&(&v.adjoint() * &r.to_matrix()) * &v);
    }
    RealizationArray::from_matrix(&acc, t.n, t.m)
}

/// Same `(n+m) x (n+m)` matrix, new state/port split.
pub fn repartition(r: &RealizationArray, new_n: usize, new_m: usize) -> Result<RealizationArray> {
    if new_n + new_m != r.n + r.m {
        return Err(Error::Shape(format!(
            "({new_n}, {new_m}) does not partition an array of order {}",
            r.n + r.m
        )));
    }
    RealizationArray::from_matrix(&r.to_matrix(), new_n, new_m)
}
