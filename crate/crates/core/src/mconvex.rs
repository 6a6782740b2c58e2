//! Matrix-convex combinations `sum_j v_j* A_j v_j` over isometry tuples
//! `sum_j v_j* v_j = I_n`, and the Frobenius-ball counterexample.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{frobenius_norm, spectral_norm, ComplexMatrix};

/// Absolute defect allowed in `sum_j v_j* v_j = I_n`.
pub const ISOMETRY_TOL: f64 = 1e-10;

/// Blocks `v_j` of shape `eta_j x n`. Block heights may differ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IsometryTupleJson", into = "IsometryTupleJson")]
pub struct IsometryTuple {
    n: usize,
    blocks: Vec<ComplexMatrix>,
}

/// Wire format: `{"n": n, "blocks": [<matrix>, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IsometryTupleJson {
    pub n: usize,
    pub blocks: Vec<ComplexMatrix>,
}

impl IsometryTuple {
    /// Checks shapes only; see [`validate_isometry`] for the isometry defect.
    pub fn new(n: usize, blocks: Vec<ComplexMatrix>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Shape("isometry tuple has no blocks".into()));
        }
        for (j, b) in blocks.iter().enumerate() {
            if b.cols() != n || b.rows() == 0 {
                return Err(Error::Shape(format!(
                    "block {j} is {}x{}, expected eta x {n} with eta >= 1",
                    b.rows(),
                    b.cols()
                )));
            }
        }
        Ok(Self { n, blocks })
    }

    /// Splits the rows of a stacked isometry `U` (`sum eta_j x n`) into
    /// blocks of the given heights.
    pub fn from_stacked(u: &ComplexMatrix, heights: &[usize]) -> Result<Self> {
        if heights.iter().sum::<usize>() != u.rows() {
            return Err(Error::Shape(format!(
                "block heights sum to {}, matrix has {} rows",
                heights.iter().sum::<usize>(),
                u.rows()
            )));
        }
        let mut row = 0;
        let blocks = heights
            .iter()
            .map(|&h| {
                let b = u.block(row, 0, h, u.cols());
                row += h;
                b
            })
            .collect();
        Self::new(u.cols(), blocks)
    }

    /// `v_j = sqrt(t_j) I_n`: ordinary convex combination weights.
    pub fn convex_weights(n: usize, weights: &[f64]) -> Result<Self> {
        if weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::InvalidInput("convex weights must be non-negative".into()));
        }
        Self::new(
            n,
            weights
                .iter()
                .map(|&w| ComplexMatrix::identity(n).scale(w.sqrt()))
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    /// Block heights `eta_j`.
    pub fn heights(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.rows()).collect()
    }

    /// Blocks stacked vertically into one `(sum eta_j) x n` isometry.
    pub fn stacked(&self) -> ComplexMatrix {
        let refs: Vec<&ComplexMatrix> = self.blocks.iter().collect();
        ComplexMatrix::vstack(&refs).expect("blocks share the column count")
    }
}

impl TryFrom<IsometryTupleJson> for IsometryTuple {
    type Error = Error;
    fn try_from(j: IsometryTupleJson) -> Result<Self> {
        IsometryTuple::new(j.n, j.blocks)
    }
}

impl From<IsometryTuple> for IsometryTupleJson {
    fn from(t: IsometryTuple) -> Self {
        IsometryTupleJson {
            n: t.n,
            blocks: t.blocks,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsometryCheck {
    pub defect: f64,
    pub valid: bool,
}

/// `defect = ||sum_j v_j* v_j - I_n||_2`; valid iff `defect <= 1e-10`.
pub fn validate_isometry(t: &IsometryTuple) -> IsometryCheck {
    let mut gram = ComplexMatrix::zeros(t.n, t.n);
    for b in &t.blocks {
        gram = &gram + &(&b.adjoint() * b);
    }
    let defect = spectral_norm(&(&gram - &ComplexMatrix::identity(t.n)));
    IsometryCheck {
        defect,
        valid: defect <= ISOMETRY_TOL,
    }
}

/// `sum_j v_j* A_j v_j`, accumulated in input order.
pub fn mconvex_combine(t: &IsometryTuple, blocks: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    if blocks.len() != t.blocks.len() {
        return Err(Error::Shape(format!(
            "{} blocks given for a tuple of length {}",
            blocks.len(),
            t.blocks.len()
        )));
    }
    for (j, (v, a)) in t.blocks.iter().zip(blocks).enumerate() {
        if a.shape() != (v.rows(), v.rows()) {
            return Err(Error::Shape(format!(
                "block {j} is {}x{}, expected {eta}x{eta}",
                a.rows(),
                a.cols(),
                eta = v.rows()
            )));
        }
    }
    let check = validate_isometry(t);
    if !check.valid {
        return Err(Error::InvalidIsometry {
            defect: check.defect,
        });
    }
    Ok(combine_unchecked(t, blocks))
}

pub(crate) fn combine_unchecked(t: &IsometryTuple, blocks: &[ComplexMatrix]) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(t.n, t.n);
    for (v, a) in t.blocks.iter().zip(blocks) {
        acc = &acc + &(&(&v.adjoint() * a) * v);
    }
    acc
}

/// The ball `{A : ||A||_F <= 5}` is convex and unitarily invariant but not
/// matrix-convex: `A = diag(4, 3)` is on its boundary while compressing
/// `diag(A, A)` by the 4x2 isometry `upsilon` gives `4 I_2`, of Frobenius
/// norm `4 sqrt(2) > 5`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrobeniusCounterexample {
    pub a: ComplexMatrix,
    pub upsilon: ComplexMatrix,
    pub a_hat: ComplexMatrix,
    pub a_norm: f64,
    pub a_hat_norm: f64,
    /// Squared norms; exact since the entries are small integers.
    pub a_norm_sq: f64,
    pub a_hat_norm_sq: f64,
}

pub fn frobenius_counterexample() -> FrobeniusCounterexample {
    let a = ComplexMatrix::from_real_diagonal(&[4.0, 3.0]);
    let upsilon = ComplexMatrix::from_real_rows(&[
        [1.0, 0.0],
        [0.0, 0.0],
        [0.0, 1.0],
        [0.0, 0.0],
    ])
    .expect("finite literal");
    let tuple = IsometryTuple::from_stacked(&upsilon, &[2, 2]).expect("4 rows");
    let a_hat = mconvex_combine(&tuple, &[a.clone(), a.clone()]).expect("exact isometry");
    let sq = |m: &ComplexMatrix| -> f64 {
        m.as_dmatrix().iter().map(|z| z.norm_sqr()).sum()
    };
    let out = FrobeniusCounterexample {
        a_norm: frobenius_norm(&a),
        a_hat_norm: frobenius_norm(&a_hat),
        a_norm_sq: sq(&a),
        a_hat_norm_sq: sq(&a_hat),
        a,
        upsilon,
        a_hat,
    };
    assert!(
        out.a_hat_norm_sq > out.a_norm_sq,
        "4 sqrt(2) > 5 must hold exactly"
    );
    out
}

/// `U A U*` for an isometry `U` (`n x k`, `U* U = I_k`) and `A` of order `k`.
/// The result has the spectral norm of `A` and rank at most `k`.
pub fn dilate_by_isometry(u: &ComplexMatrix, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let k = u.cols();
    if a.shape() != (k, k) {
        return Err(Error::Shape(format!(
            "A is {}x{}, expected {k}x{k}",
            a.rows(),
            a.cols()
        )));
    }
    let defect = spectral_norm(&(&(&u.adjoint() * u) - &ComplexMatrix::identity(k)));
    if defect > ISOMETRY_TOL {
        return Err(Error::NotIsometry { defect });
    }
    Ok(&(u * a) * &u.adjoint())
}
