//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test -p dtpassive --test acceptance`.

mod common;

use std::time::Instant;

use common::*;
use dtpassive::db::{db_check, db_mconvex_combine, example_isometries, DbCheckOptions};
use dtpassive::inclusion::{certify, simulate, MatrixSet, Schedule};
use dtpassive::linalg::{
    eigenvalues, hermitian_inverse_sqrt, hermitian_sqrt, spectral_norm, spectral_radius,
    ComplexMatrix, HermitianMatrix, Verdict,
};
use dtpassive::mconvex::{frobenius_counterexample, validate_isometry};
use dtpassive::realization::{
    certificate_search, combine_realizations, example_family, kyp_check_balanced,
    planar_rotation, repartition, rotation_realization, series_product, SearchOptions,
};
use dtpassive::stein::{
    maximality_witness, norm_membership, product_closure_check, stein_gap, SteinSetSpec,
};
use dtpassive::{Complex64, RealizationArray};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Smallest eigenvalue of `(M + M*) / 2` straight from nalgebra.
fn oracle_lambda_min(m: &ComplexMatrix) -> f64 {
    let d = m.as_dmatrix();
    let sym: DMatrix<Complex64> = (d + d.adjoint()).scale(0.5);
    sym.symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

fn gap(h: &ComplexMatrix, a: &ComplexMatrix, alpha: f64) -> ComplexMatrix {
    h - &(&(&a.adjoint() * h) * a).scale(1.0 / (alpha * alpha))
}

fn criterion_1() -> Outcome {
    let fc = frobenius_counterexample();
    let want_hat = ComplexMatrix::from_real_diagonal(&[4.0, 4.0]);
    ensure(fc.a_hat.max_abs_diff(&want_hat) == 0.0, || {
        format!("A_hat = {:?}, expected 4 I_2", fc.a_hat.real_rows())
    })?;
    ensure(fc.a_norm_sq == 25.0 && fc.a_norm == 5.0, || {
        format!("||A||_F^2 = {}, ||A||_F = {}", fc.a_norm_sq, fc.a_norm)
    })?;
    ensure(fc.a_hat_norm_sq == 32.0, || format!("||A_hat||_F^2 = {}", fc.a_hat_norm_sq))?;
    ensure(
        (fc.a_hat_norm - 4.0 * 2f64.sqrt()).abs() <= 1e-15,
        || format!("||A_hat||_F = {}", fc.a_hat_norm),
    )?;
    ensure(fc.a_hat_norm_sq > fc.a_norm_sq, || "32 > 25 failed".into())?;
    Ok(format!(
        "||diag(4,3)||_F = 5, A_hat = 4 I_2, ||A_hat||_F = {:.15} > 5",
        fc.a_hat_norm
    ))
}

/// Member of `(1/alpha) S_J` with `J = diag(-I_k, I_{n-k})`, moved to
/// `H = T* J T` by `A = T^{-1} A_J T`.
struct IndefiniteFrame {
    h: HermitianMatrix,
    t: ComplexMatrix,
    t_inv: ComplexMatrix,
    k: usize,
}

impl IndefiniteFrame {
    fn random(rng: &mut ChaCha8Rng, n: usize) -> Self {
        let k = rng.gen_range(1..n);
        let t = &ComplexMatrix::identity(n)
            + &with_norm(&any_matrix(rng, n, n), rng.gen_range(0.0..0.5));
        let t_inv = t.solve(&ComplexMatrix::identity(n)).unwrap();
        let mut d = vec![1.0; n];
        d[..k].iter_mut().for_each(|x| *x = -1.0);
        let j = ComplexMatrix::from_real_diagonal(&d);
        let h = HermitianMatrix::symmetrize(&(&(&t.adjoint() * &j) * &t));
        Self { h, t, t_inv, k }
    }

    fn member(&self, rng: &mut ChaCha8Rng, alpha: f64) -> ComplexMatrix {
        let n = self.t.rows();
        let k = self.k;
        let s: Vec<f64> = (0..k).map(|_| rng.gen_range(1.1..2.0)).collect();
        let expanding =
            &(&unitary(rng, k) * &ComplexMatrix::from_real_diagonal(&s)) * &unitary(rng, k);
        let contracting = with_norm(&any_matrix(rng, n - k, n - k), rng.gen_range(0.05..0.95));
        let aj = ComplexMatrix::block_diag(&[&expanding, &contracting]).scale(alpha);
        &(&self.t_inv * &aj) * &self.t
    }
}

fn pd_member(rng: &mut ChaCha8Rng, h: &HermitianMatrix, scale: f64) -> ComplexMatrix {
    let n = h.order();
    let root = hermitian_sqrt(h, None).unwrap();
    let inv_root = hermitian_inverse_sqrt(h).unwrap();
    let k = with_norm(&any_matrix(rng, n, n), scale);
    &(inv_root.matrix() * &k) * root.matrix()
}

fn criterion_2() -> Outcome {
    let mut rng = rng(2);
    let mut worst_mismatch: f64 = 0.0;
    let mut min_gap = f64::INFINITY;
    let mut indefinite = 0;
    for trial in 0..1000 {
        let alpha = rng.gen_range(0.3..=2.0);
        let beta = rng.gen_range(0.3..=2.0);
        let use_indefinite = trial % 2 == 1;
        let n = if use_indefinite { rng.gen_range(2..=8) } else { rng.gen_range(1..=8) };
        let (h, a, b) = if use_indefinite {
            indefinite += 1;
            let frame = IndefiniteFrame::random(&mut rng, n);
            let a = frame.member(&mut rng, alpha);
            let b = frame.member(&mut rng, beta);
            (frame.h, a, b)
        } else {
            let h = hermitian_pd(&mut rng, n);
            let (sa, sb) = (rng.gen_range(0.05..0.95), rng.gen_range(0.05..0.95));
            let a = pd_member(&mut rng, &h, alpha * sa);
            let b = pd_member(&mut rng, &h, beta * sb);
            (h, a, b)
        };
        let spec_a = SteinSetSpec::new(h.clone(), alpha, false).unwrap();
        let spec_b = SteinSetSpec::new(h.clone(), beta, false).unwrap();
        ensure(stein_gap(&spec_a, &a).unwrap().member == Verdict::Yes, || {
            format!("trial {trial}: generated A is not a member")
        })?;
        ensure(stein_gap(&spec_b, &b).unwrap().member == Verdict::Yes, || {
            format!("trial {trial}: generated B is not a member")
        })?;

        let pc = product_closure_check(&h, false, &a, alpha, &b, beta)
            .map_err(|e| format!("trial {trial} (n = {n}): {e}"))?;
        ensure(pc.report.member == Verdict::Yes, || {
            format!("trial {trial}: AB not a member, lambda_min {}", pc.report.lambda_min)
        })?;

        let hm = h.matrix();
        let ab = &a * &b;
        let direct = gap(hm, &ab, alpha * beta);
        let rebuilt = &(&(&b.adjoint() * &gap(hm, &a, alpha)) * &b).scale(1.0 / (beta * beta))
            + &gap(hm, &b, beta);
        let mismatch = direct.max_abs_diff(&rebuilt);
        ensure(mismatch <= 1e-10, || {
            format!("trial {trial}: constructive residual off by {mismatch:e}")
        })?;
        ensure(pc.constructive_residual.matrix().max_abs_diff(&direct) <= 1e-10, || {
            format!("trial {trial}: library residual differs from direct gap")
        })?;
        let lam = oracle_lambda_min(&direct);
        ensure(lam > 0.0, || format!("trial {trial}: oracle lambda_min(gap) = {lam:e}"))?;
        worst_mismatch = worst_mismatch.max(mismatch);
        min_gap = min_gap.min(lam);
    }
    Ok(format!(
        "1000 trials ({indefinite} indefinite H), 0 failures, max residual mismatch {worst_mismatch:.2e}, min product gap eigenvalue {min_gap:.2e}"
    ))
}

fn criterion_3() -> Outcome {
    let mut rng = rng(3);
    let (mut agreed, mut marginal, mut generated) = (0, 0, 0);
    while agreed < 500 {
        generated += 1;
        let n = rng.gen_range(1..=6);
        let h = hermitian_pd(&mut rng, n);
        let alpha = rng.gen_range(0.3..=2.0);
        let closed = rng.gen_bool(0.5);
        let c: f64 = rng.gen_range(0.5..1.5);
        let a = pd_member(&mut rng, &h, c * alpha);
        let spec = SteinSetSpec::new(h, alpha, closed).unwrap();
        let by_gap = stein_gap(&spec, &a).unwrap().member;
        let by_norm = norm_membership(&spec, &a).unwrap().verdict;
        if by_gap == Verdict::Marginal || by_norm == Verdict::Marginal {
            marginal += 1;
            continue;
        }
        ensure(by_gap == by_norm, || {
            format!("triple {generated}: gap says {by_gap:?}, norm says {by_norm:?} (c = {c})")
        })?;
        let truth = if c < 1.0 { Verdict::Yes } else { Verdict::No };
        ensure(by_gap == truth, || {
            format!("triple {generated}: verdict {by_gap:?} but weighted norm is {c} alpha")
        })?;
        agreed += 1;
    }
    Ok(format!("500 triples agree ({marginal} marginal skipped)"))
}

fn criterion_4() -> Outcome {
    let mut rng = rng(4);
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let n = rng.gen_range(1..=6);
        let eps = 1.0 - rng.gen_range(0.0..1.0);
        let top = 1.0 + eps;
        let mut s: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..top)).collect();
        s[0] = top;
        let b = &(&unitary(&mut rng, n) * &ComplexMatrix::from_real_diagonal(&s))
            * &unitary(&mut rng, n);
        let w = maximality_witness(&b).map_err(|e| format!("trial {trial}: {e}"))?;
        let want_a = (1.0 + eps) / (1.0 + 2.0 * eps);
        let want_ab = (1.0 + eps).powi(2) / (1.0 + 2.0 * eps);
        let a_norm = spectral_norm(&w.a);
        let ab = &w.a * &b;
        let ab_norm = spectral_norm(&ab);
        let ab_rho = spectral_radius(&ab).unwrap();
        let err = (a_norm - want_a)
            .abs()
            .max((ab_norm - want_ab).abs())
            .max((ab_rho - want_ab).abs());
        ensure(err <= 1e-9, || {
            format!("trial {trial} (eps = {eps}): ||A|| = {a_norm}, ||AB|| = {ab_norm}, rho = {ab_rho}")
        })?;
        ensure(a_norm < 1.0 && ab_rho > 1.0, || format!("trial {trial}: not a witness"))?;
        worst = worst.max(err);
    }
    Ok(format!("100 witnesses, max deviation {worst:.2e}"))
}

fn criterion_5() -> Outcome {
    let tuples = example_isometries();
    let mut defects = Vec::new();
    for (j, t) in tuples.iter().enumerate() {
        let check = validate_isometry(t);
        ensure(check.defect <= 1e-12, || {
            format!("G{} defect {:e}", j + 1, check.defect)
        })?;
        defects.push(check.defect);
    }
    let mut rng = rng(5);
    let opts = DbCheckOptions::default();
    let mut runs = 0;
    for (j, t) in tuples.iter().enumerate() {
        for trial in 0..10 {
            let rs: Vec<RealizationArray> = t
                .heights()
                .iter()
                .map(|&m| {
                    let n = rng.gen_range(1..=3);
                    let real = rng.gen_bool(0.5);
                    let r = balanced_realization(&mut rng, n, m, real);
                    assert!(kyp_check_balanced(&r).verdict.is_yes());
                    r
                })
                .collect();
            let out = db_mconvex_combine(t, &rs, &opts)
                .map_err(|e| format!("G{} trial {trial}: {e}", j + 1))?;
            ensure(out.db.verdict.passed(), || {
                format!(
                    "G{} trial {trial}: {} with sup {}",
                    j + 1,
                    out.db.verdict,
                    out.db.sampled_sup
                )
            })?;
            runs += 1;
        }
    }
    Ok(format!(
        "defects {:.1e}/{:.1e}/{:.1e}; {runs} combinations of certified blocks pass db_check",
        defects[0], defects[1], defects[2]
    ))
}

fn criterion_6() -> Outcome {
    let fam = example_family(0.5, 3.0).map_err(|e| e.to_string())?;
    let mut failures = Vec::new();
    let mut passes = Vec::new();

    let want_f3 = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap().scale(2.0 / 3.0);
    let d3 = fam.f3.to_matrix().max_abs_diff(&want_f3);
    if d3 <= 1e-12 {
        passes.push(format!("R_f3 ok ({d3:.1e})"));
    } else {
        failures.push(format!("R_f3 off by {d3:e}"));
    }

    let want_f5 = ComplexMatrix::from_real_rows(&[
        [0.0, -8.0, -10.0],
        [8.0, 0.0, 14.0],
        [14.0, 10.0, 1.0],
    ])
    .unwrap()
    .scale(1.0 / 36.0);
    let d5 = fam.f5.to_matrix().max_abs_diff(&want_f5);
    if d5 <= 1e-12 {
        passes.push("R_f5 matches the displayed array".into());
    } else {
        let built: Vec<Vec<f64>> = fam
            .f5
            .to_matrix()
            .scale(36.0)
            .real_rows()
            .into_iter()
            .map(|r| r.into_iter().map(|x| (x * 1e9).round() / 1e9).collect())
            .collect();
        failures.push(format!(
            "R_f5 entrywise gap {d5:.3} (36 R_f5 built = {built:?}, displayed last row [14, 10, 1])"
        ));
    }

    let mut eig = eigenvalues(fam.f5.a()).map_err(|e| e.to_string())?;
    eig.sort_by(|x, y| x.im.total_cmp(&y.im));
    let want = [Complex64::new(0.0, -2.0 / 9.0), Complex64::new(0.0, 2.0 / 9.0)];
    let de = eig.iter().zip(&want).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    if eig.len() == 2 && de <= 1e-12 {
        passes.push(format!("poles +-2i/9 ({de:.1e})"));
    } else {
        failures.push(format!("poles {eig:?}"));
    }

    let prod = series_product(&fam.f1, &fam.f2).map_err(|e| e.to_string())?;
    let (th, a) = (0.5, 3.0);
    let f4 = |z: Complex64| th * th * (a * a - z * z) / (a * a * z * z - 1.0);
    let mut df: f64 = 0.0;
    for k in 0..20 {
        let z = Complex64::from_polar(1.05 + 0.2 * k as f64, 0.37 + 1.1 * k as f64);
        let got = prod.evaluate(z).map_err(|e| e.to_string())?.get(0, 0);
        df = df.max((got - f4(z)).norm());
    }
    if df <= 1e-10 {
        passes.push(format!("f1 f2 = f4 at 20 points ({df:.1e})"));
    } else {
        failures.push(format!("f1 f2 vs f4 off by {df:e}"));
    }

    for (name, r) in [("f1", &fam.f1), ("f2", &fam.f2), ("f3", &fam.f3)] {
        let cert = kyp_check_balanced(r);
        if !cert.verdict.is_yes() {
            failures.push(format!("{name} not balanced (lambda_min {:e})", cert.lambda_min));
        }
    }
    if failures.len() < 5 {
        passes.push("f1, f2, f3 balanced".into());
    }

    if failures.is_empty() {
        Ok(passes.join("; "))
    } else {
        Err(format!("{} | passed: {}", failures.join("; "), passes.join("; ")))
    }
}

fn criterion_7() -> Outcome {
    let mut rng = rng(7);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let t1 = rng.gen_range(-10.0..10.0);
        let t2 = rng.gen_range(-10.0..10.0);
        let r1 = rotation_realization(t1);
        let cert = kyp_check_balanced(&r1);
        let m1 = r1.to_matrix();
        let defect = (&ComplexMatrix::identity(2) - &(&m1.adjoint() * &m1)).max_abs();
        ensure(defect <= 1e-12 && cert.residual.matrix().max_abs() <= 1e-12, || {
            format!("I - R*R = {defect:e} at theta {t1}")
        })?;
        let prod = &m1 * &rotation_realization(t2).to_matrix();
        let d = prod.max_abs_diff(&rotation_realization(t1 + t2).to_matrix());
        ensure(d <= 1e-12, || format!("rotation({t1}) rotation({t2}) off by {d:e}"))?;
        worst = worst.max(defect).max(d);
    }

    for _ in 0..50 {
        let (t1, t2, t3) = (rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        let g = &(&planar_rotation(3, 1, 2, t1).unwrap() * &planar_rotation(3, 1, 3, t2).unwrap())
            * &planar_rotation(3, 2, 3, t3).unwrap();
        let orth = (&ComplexMatrix::identity(3) - &(&g.adjoint() * &g)).max_abs();
        ensure(orth <= 1e-12 && g.is_real(), || format!("planar product defect {orth:e}"))?;
        for (n, m) in [(2, 1), (1, 2)] {
            let r = RealizationArray::from_matrix(&g, n, m).unwrap();
            let cert = kyp_check_balanced(&r);
            let res = cert.residual.matrix().max_abs();
            ensure(cert.verdict.is_yes() && res <= 1e-12, || {
                format!("planar product ({n},{m}) residual {res:e}")
            })?;
            worst = worst.max(res);
        }
    }

    let step = rotation_realization(2f64.sqrt()).to_matrix();
    let mut power = ComplexMatrix::identity(2);
    let mut angles = Vec::with_capacity(1000);
    for _ in 0..1000 {
        power = &power * &step;
        angles.push(power.get(1, 0).re.atan2(power.get(0, 0).re));
    }
    angles.sort_by(f64::total_cmp);
    let mut distinct = 1;
    let mut last = angles[0];
    for &x in &angles[1..] {
        if x - last > 1e-6 {
            distinct += 1;
            last = x;
        }
    }
    if angles[angles.len() - 1] - angles[0] > std::f64::consts::TAU - 1e-6 {
        distinct -= 1;
    }
    ensure(distinct >= 100, || format!("only {distinct} distinct angles"))?;
    Ok(format!(
        "max defect {worst:.1e}; planar products balanced; {distinct} distinct angles in 1000 powers"
    ))
}

fn criterion_8() -> Outcome {
    let mut rng = rng(8);
    let opts = DbCheckOptions::default();
    let mut min_residual = f64::INFINITY;
    for trial in 0..500 {
        let k = rng.gen_range(1..=3);
        let n: usize = rng.gen_range(1..=5);
        let m: usize = rng.gen_range(1..=3);
        let mut parts: Vec<(usize, usize)> =
            (0..k).map(|_| (rng.gen_range(1..=5), rng.gen_range(1..=3))).collect();
        let sn: usize = parts.iter().map(|p| p.0).sum();
        let sm: usize = parts.iter().map(|p| p.1).sum();
        parts[k - 1].0 += n.saturating_sub(sn);
        parts[k - 1].1 += m.saturating_sub(sm);
        let tuple = block_diag_tuple(&mut rng, n, m, &parts);
        let rs: Vec<RealizationArray> = parts
            .iter()
            .map(|&(nj, mj)| {
                let real = rng.gen_bool(0.5);
                balanced_realization(&mut rng, nj, mj, real)
            })
            .collect();
        for r in &rs {
            ensure(kyp_check_balanced(r).verdict.is_yes(), || {
                format!("trial {trial}: input not balanced")
            })?;
        }
        let out = combine_realizations(&tuple, &rs).map_err(|e| format!("trial {trial}: {e}"))?;
        let cert = kyp_check_balanced(&out);
        ensure(cert.verdict.is_yes(), || {
            format!("trial {trial}: combination not balanced, lambda_min {:e}", cert.lambda_min)
        })?;
        let db = db_check(&out, &opts).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(db.verdict.passed(), || {
            format!("trial {trial}: db_check {} with sup {}", db.verdict, db.sampled_sup)
        })?;
        min_residual = min_residual.min(cert.lambda_min);
    }
    Ok(format!(
        "500 combinations balanced and DB (min residual eigenvalue {min_residual:.2e})"
    ))
}

fn criterion_9() -> Outcome {
    let (th, a) = (0.5, 3.0);
    let fam = example_family(th, a).map_err(|e| e.to_string())?;
    let r = repartition(&fam.f4, 1, 2).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for k in 0..10 {
        let z = Complex64::from_polar(1.2 + 0.4 * k as f64, -2.9 + 0.61 * k as f64);
        let got = r.evaluate(z).map_err(|e| e.to_string())?.get(1, 1);
        let want = -(th * th / (a * a)) * (z + a) / (z + 1.0 / a);
        worst = worst.max((got - want).norm());
    }
    ensure(worst <= 1e-10, || format!("max deviation {worst:e}"))?;
    Ok(format!("compression equals -(theta/a) f1 at 10 points ({worst:.1e})"))
}

fn criterion_10() -> Outcome {
    let mut rng = rng(10);
    let mut worst_excess = f64::NEG_INFINITY;
    for set_index in 0..50 {
        let alpha = [0.5, 0.9, 1.0][set_index % 3];
        let n = rng.gen_range(2..=5);
        let k = rng.gen_range(2..=4);
        let members: Vec<ComplexMatrix> = (0..k)
            .map(|j| {
                let u = if j == 0 { 1.0 } else { rng.gen_range(0.3..1.0) };
                with_norm(&real_matrix(&mut rng, n, n), alpha * u)
            })
            .collect();
        let set = MatrixSet::new(n, members).map_err(|e| e.to_string())?;
        let cert = certify(&set, alpha).map_err(|e| e.to_string())?;
        ensure(cert.verdict.is_yes(), || format!("set {set_index} not certified"))?;
        for s in 0..100u64 {
            let x0: Vec<f64> = (0..n).map(|_| gaussian(&mut rng)).collect();
            let x0_norm = x0.iter().map(|x| x * x).sum::<f64>().sqrt();
            let schedule = Schedule::UniformRandom {
                seed: 1000 * set_index as u64 + s,
            };
            let traj = simulate(&set, &x0, 100, &schedule).map_err(|e| e.to_string())?;
            for (j, &norm) in traj.norms.iter().enumerate() {
                let bound = alpha.powi(j as i32) * x0_norm;
                ensure(norm <= bound + 1e-9, || {
                    format!("set {set_index} schedule {s}: ||x({j})|| = {norm} > {bound}")
                })?;
                worst_excess = worst_excess.max(norm - bound);
            }
        }
    }
    let a = ComplexMatrix::from_real_rows(&[[0.0, 2.0], [0.0, 0.0]]).unwrap();
    let rho = spectral_radius(&(&a * &a.transpose())).map_err(|e| e.to_string())?;
    ensure(rho == 4.0, || format!("rho(AB) = {rho:e}"))?;
    Ok(format!(
        "5000 trajectories within alpha^j ||x0|| (max excess {worst_excess:.1e}); rho(AB) = {rho}"
    ))
}

fn criterion_11() -> Outcome {
    let mut rng = rng(11);
    let opts = DbCheckOptions::default();
    let (mut found, mut tried) = (0, 0);
    let mut worst: f64 = 0.0;
    while found < 200 {
        tried += 1;
        ensure(tried <= 5000, || format!("only {found} certificates in 5000 candidates"))?;
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(1..=3);
        let r = if tried % 2 == 0 {
            transformed_db_realization(&mut rng, n, m).0
        } else {
            stable_realization(&mut rng, n, m)
        };
        let search = certificate_search(&r, SearchOptions::default()).map_err(|e| e.to_string())?;
        if search.certificate().is_none() {
            continue;
        }
        found += 1;
        let db = db_check(&r, &opts).map_err(|e| e.to_string())?;
        ensure(db.sampled_sup <= 1.0 + 1e-8, || {
            format!("certified realization samples to {} at {}", db.sampled_sup, db.worst_z)
        })?;
        worst = worst.max(db.sampled_sup);
    }
    Ok(format!(
        "200 certified realizations ({tried} candidates), max sampled norm {worst:.6}"
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("Frobenius ball is not matrix-convex", criterion_1),
        ("Stein product closure", criterion_2),
        ("gap and weighted-norm membership agree", criterion_3),
        ("maximality witness", criterion_4),
        ("example isometries and DB combinations", criterion_5),
        ("golden example family", criterion_6),
        ("para-unitary generators", criterion_7),
        ("block-diagonal combination of balanced realizations", criterion_8),
        ("repartition compression", criterion_9),
        ("difference-inclusion soundness", criterion_10),
        ("KYP certificate implies bounded boundary samples", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2} {name} [{secs:.2}s]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name} [{secs:.2}s]: {detail}", i + 1)
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
