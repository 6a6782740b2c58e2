//! Explicit realization arrays: rotations, reflections, Givens factors, and
//! a one-parameter family of scalar bounded functions built from two
//! degree-one generators by products and matrix-convex averaging.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::RealizationArray;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

fn array_1_1(rows: [[f64; 2]; 2]) -> RealizationArray {
    let m = ComplexMatrix::from_real_rows(&rows).expect("finite entries");
    RealizationArray::from_matrix(&m, 1, 1).expect("2x2 array")
}

/// `[[cos t, -sin t], [sin t, cos t]]` as an `(n, m) = (1, 1)` realization of
/// `(z cos t - 1) / (z - cos t)`. Para-unitary.
pub fn rotation_realization(theta: f64) -> RealizationArray {
    let (s, c) = theta.sin_cos();
    array_1_1([[c, -s], [s, c]])
}

/// `diag(-1, 1) * rotation(t) = [[-cos t, sin t], [sin t, cos t]]`, realizing
/// `(z cos t + 1) / (z + cos t)`. Symmetric orthogonal with determinant -1.
pub fn reflect_realization(theta: f64) -> RealizationArray {
    let (s, c) = theta.sin_cos();
    array_1_1([[-c, s], [s, c]])
}

/// Givens rotation of order `order` acting in the `(p, q)` coordinate plane,
/// 1-based with `1 <= p < q <= order`:
/// `G[p][p] = G[q][q] = cos t`, `G[p][q] = -sin t`, `G[q][p] = sin t`.
pub fn planar_rotation(order: usize, p: usize, q: usize, theta: f64) -> Result<ComplexMatrix> {
    if !(1 <= p && p < q && q <= order) {
        return Err(Error::Index { p, q, order });
    }
    let (s, c) = theta.sin_cos();
    let (i, j) = (p - 1, q - 1);
    let mut g = ComplexMatrix::identity(order).into_dmatrix();
    g[(i, i)] = Complex64::new(c, 0.0);
    g[(j, j)] = Complex64::new(c, 0.0);
    g[(i, j)] = Complex64::new(-s, 0.0);
    g[(j, i)] = Complex64::new(s, 0.0);
    Ok(ComplexMatrix::from_dmatrix(g).expect("finite entries"))
}

/// Realizations generated from `f_1(z) = theta (a + z) / (a z + 1)`:
///
/// * `f_2(z) = theta (a - z) / (a z - 1)`, same array up to signs;
/// * `f_3 = (R_{f_1} + R_{f_2}) / 2`, realizing `(theta / a^2)(a^2 - 1) / z`;
/// * `f_4 = f_1 f_2 = theta^2 (a^2 - z^2) / (a^2 z^2 - 1)`, degree two;
/// * `f_5`, the average of `R_{f_4}` and its conjugate by a signed
///   permutation of the state coordinates.
///
/// With `s = sqrt(theta (a^2 - 1))`:
///
/// ```text
/// R_{f_1} = (1/a) [[-1, s], [s, theta]]
/// R_{f_4} = (1/a) [[-1, (theta/a)(1 - a^2), (theta/a) s],
///                  [ 0, 1,                  s          ],
///                  [-s, (theta/a) s,        -theta^2/a ]]
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExampleFamily {
    pub theta: f64,
    pub a: f64,
    pub f1: RealizationArray,
    pub f2: RealizationArray,
    pub f3: RealizationArray,
    pub f4: RealizationArray,
    /// `Pi* R_{f_4} Pi`, another minimal realization of `f_4`.
    pub f4_hat: RealizationArray,
    pub f5: RealizationArray,
}

/// `Pi = [[0, 1, 0], [-1, 0, 0], [0, 0, 1]]`: swaps the two state
/// coordinates with a sign and leaves the port alone.
pub fn state_swap_permutation() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
        .expect("finite literal")
}

pub fn example_family(theta: f64, a: f64) -> Result<ExampleFamily> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::ParameterOutOfRange(format!(
            "theta = {theta} must lie in (0, 1)"
        )));
    }
    if !(a > 1.0 && a.is_finite()) {
        return Err(Error::ParameterOutOfRange(format!(
            "a = {a} must be finite and greater than 1"
        )));
    }
    let s = (theta * (a * a - 1.0)).sqrt();
    let r1 = ComplexMatrix::from_real_rows(&[[-1.0, s], [s, theta]])
        .expect("finite")
        .scale(1.0 / a);
    let flip_out = ComplexMatrix::from_real_diagonal(&[1.0, -1.0]);
    let flip_in = ComplexMatrix::from_real_diagonal(&[-1.0, 1.0]);
    let r2 = &(&flip_out * &r1) * &flip_in;
    let r3 = (&r1 + &r2).scale(0.5);
    let t = theta / a;
    let r4 = ComplexMatrix::from_real_rows(&[
        [-1.0, t * (1.0 - a * a), t * s],
        [0.0, 1.0, s],
        [-s, t * s, -theta * theta / a],
    ])
    .expect("finite")
    .scale(1.0 / a);
    let pi = state_swap_permutation();
    let r4_hat = &(&pi.adjoint() * &r4) * &pi;
    let r5 = (&r4 + &r4_hat).scale(0.5);
    let split = |m: &ComplexMatrix, n| RealizationArray::from_matrix(m, n, 1).expect("square array");
    Ok(ExampleFamily {
        theta,
        a,
        f1: split(&r1, 1),
        f2: split(&r2, 1),
        f3: split(&r3, 1),
        f4: split(&r4, 2),
        f4_hat: split(&r4_hat, 2),
        f5: split(&r5, 2),
    })
}

impl ExampleFamily {
    /// Closed forms of `f_1 .. f_4` at `z`; `None` for other indices.
    pub fn closed_form(&self, k: usize, z: Complex64) -> Option<Complex64> {
        let (th, a) = (self.theta, self.a);
        match k {
            1 => Some(th * (a + z) / (a * z + 1.0)),
            2 => Some(th * (a - z) / (a * z - 1.0)),
            3 => Some(th / (a * a) * (a * a - 1.0) / z),
            4 => Some(th * th * (a * a - z * z) / (a * a * z * z - 1.0)),
            _ => None,
        }
    }

    /// `(name, realization)` pairs in order.
    pub fn named(&self) -> [(&'static str, &RealizationArray); 6] {
        [
            ("f1", &self.f1),
            ("f2", &self.f2),
            ("f3", &self.f3),
            ("f4", &self.f4),
            ("f4_hat", &self.f4_hat),
            ("f5", &self.f5),
        ]
    }
}
