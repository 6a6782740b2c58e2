//! Seeded random generators shared by the integration tests.
#![allow(dead_code)]

use dtpassive::linalg::{spectral_norm, spectral_radius, ComplexMatrix, HermitianMatrix};
use dtpassive::mconvex::IsometryTuple;
use dtpassive::realization::{BlockDiagIsometryTuple, BlockPair};
use dtpassive::{Complex64, RealizationArray};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; the generator's own float output is uniform on [0, 1).
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn real_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let entries: Vec<f64> = (0..rows * cols).map(|_| gaussian(rng)).collect();
    ComplexMatrix::from_real(rows, cols, &entries).unwrap()
}

pub fn complex_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let entries: Vec<Complex64> = (0..rows * cols)
        .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
        .collect();
    ComplexMatrix::new(rows, cols, entries).unwrap()
}

/// Real or complex with equal probability.
pub fn any_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    if rng.gen_bool(0.5) {
        real_matrix(rng, rows, cols)
    } else {
        complex_matrix(rng, rows, cols)
    }
}

/// `M M* + c I` with `c` in `[0.05, 1]`.
pub fn hermitian_pd(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix {
    let m = any_matrix(rng, n, n);
    let shift = rng.gen_range(0.05..1.0);
    let h = &(&m * &m.adjoint()) + &ComplexMatrix::identity(n).scale(shift);
    HermitianMatrix::symmetrize(&h)
}

/// Hermitian with eigenvalues of both signs (n >= 2).
pub fn hermitian_indefinite(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix {
    let u = unitary(rng, n);
    let mut d: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..2.0)).collect();
    d[0] = -d[0];
    let lam = ComplexMatrix::from_real_diagonal(&d);
    HermitianMatrix::symmetrize(&(&(&u * &lam) * &u.adjoint()))
}

/// Haar-like unitary from the QR factor of a complex Gaussian matrix.
pub fn unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    isometry(rng, n, n)
}

/// `rows x cols` matrix with orthonormal columns (`rows >= cols`).
pub fn isometry(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(rows >= cols);
    let g = complex_matrix(rng, rows, cols).into_dmatrix();
    let q: DMatrix<Complex64> = g.qr().q();
    ComplexMatrix::from_dmatrix(q.columns(0, cols).into_owned()).unwrap()
}

/// Real isometry.
pub fn real_isometry(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let g = real_matrix(rng, rows, cols).into_dmatrix();
    let q: DMatrix<Complex64> = g.qr().q();
    ComplexMatrix::from_dmatrix(q.columns(0, cols).into_owned()).unwrap()
}

/// Scales `m` to spectral norm `target`.
pub fn with_norm(m: &ComplexMatrix, target: f64) -> ComplexMatrix {
    let s = spectral_norm(m);
    if s == 0.0 {
        m.clone()
    } else {
        m.scale(target / s)
    }
}

/// Scales `m` to spectral radius `target`.
pub fn with_radius(m: &ComplexMatrix, target: f64) -> ComplexMatrix {
    let r = spectral_radius(m).unwrap();
    if r == 0.0 {
        m.clone()
    } else {
        m.scale(target / r)
    }
}

/// Random isometry tuple over dimension `n` with the given block heights
/// (`sum heights >= n`).
pub fn isometry_tuple(rng: &mut ChaCha8Rng, n: usize, heights: &[usize]) -> IsometryTuple {
    let total: usize = heights.iter().sum();
    let u = if rng.gen_bool(0.5) {
        isometry(rng, total, n)
    } else {
        real_isometry(rng, total, n)
    };
    IsometryTuple::from_stacked(&u, heights).unwrap()
}

/// Realization whose array is a strict contraction with norm in `[0.3, 0.98]`:
/// balanced by construction.
pub fn balanced_realization(rng: &mut ChaCha8Rng, n: usize, m: usize, real: bool) -> RealizationArray {
    let raw = if real {
        real_matrix(rng, n + m, n + m)
    } else {
        complex_matrix(rng, n + m, n + m)
    };
    let target = rng.gen_range(0.3..0.98);
    RealizationArray::from_matrix(&with_norm(&raw, target), n, m).unwrap()
}

/// A balanced realization in random coordinates `x -> T x` with `cond(T)`
/// moderate. `T* T` certifies it, `I` usually does not.
pub fn transformed_db_realization(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: usize,
) -> (RealizationArray, HermitianMatrix) {
    let real = rng.gen_bool(0.5);
    let r = balanced_realization(rng, n, m, real);
    let t = &ComplexMatrix::identity(n) + &with_norm(&any_matrix(rng, n, n), rng.gen_range(0.0..0.8));
    let t_inv = t.solve(&ComplexMatrix::identity(n)).unwrap();
    let out = RealizationArray::new(
        &(&t_inv * r.a()) * &t,
        &t_inv * r.b(),
        r.c() * &t,
        r.d().clone(),
    )
    .unwrap();
    let p = HermitianMatrix::symmetrize(&(&t.adjoint() * &t));
    (out, p)
}

/// Stable realization with independently scaled blocks; may or may not be DB.
pub fn stable_realization(rng: &mut ChaCha8Rng, n: usize, m: usize) -> RealizationArray {
    let a = with_radius(&any_matrix(rng, n, n), rng.gen_range(0.1..0.9));
    let gain = rng.gen_range(0.05..0.8);
    let b = any_matrix(rng, n, m).scale(gain);
    let c = any_matrix(rng, m, n).scale(gain);
    let d = with_norm(&any_matrix(rng, m, m), rng.gen_range(0.0..0.9));
    RealizationArray::new(a, b, c, d).unwrap()
}

/// Block-diagonal isometry tuple mapping `(n, m)` into the given
/// `(n_j, m_j)` pairs. Needs `sum n_j >= n` and `sum m_j >= m`.
pub fn block_diag_tuple(
    rng: &mut ChaCha8Rng,
    n: usize,
    m: usize,
    parts: &[(usize, usize)],
) -> BlockDiagIsometryTuple {
    let hn: Vec<usize> = parts.iter().map(|p| p.0).collect();
    let hm: Vec<usize> = parts.iter().map(|p| p.1).collect();
    let un = isometry(rng, hn.iter().sum(), n);
    let um = isometry(rng, hm.iter().sum(), m);
    let (mut rn, mut rm) = (0, 0);
    let blocks = parts
        .iter()
        .map(|&(nj, mj)| {
            let pair = BlockPair {
                state: un.block(rn, 0, nj, n),
                port: um.block(rm, 0, mj, m),
            };
            rn += nj;
            rm += mj;
            pair
        })
        .collect();
    BlockDiagIsometryTuple::new(n, m, blocks).unwrap()
}

/// Points with modulus in `[lo, hi]` and uniform argument.
pub fn points_outside(rng: &mut ChaCha8Rng, count: usize, lo: f64, hi: f64) -> Vec<Complex64> {
    (0..count)
        .map(|_| {
            Complex64::from_polar(
                rng.gen_range(lo..hi),
                rng.gen_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect()
}
