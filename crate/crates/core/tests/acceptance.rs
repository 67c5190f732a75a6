//! Acceptance suite: one pass/fail line per criterion, run sequentially so the
//! timings are not shared with other tests.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use automorphe::arith::{weil_bound, KloostermanRow};
use automorphe::halfplane::load_fixture;
use automorphe::heckewords::{expand_pow_symbolic, hecke_power, HeckePowerTable};
use automorphe::lab::{
    exp_binomial_budget, exp_bm_consistency, exp_eisenstein_eigen, exp_ramanujan, exp_scan_envelope, exp_theta_s11,
    DEFAULT_EPS, DEFAULT_NORM_DEGREE,
};
use automorphe::planedist::{mellin_slice, transfer_check, window_apply, GaussPoly, GaussTerm, Poly2, SpectralWindow};
use automorphe::quad::integrate;
use num_bigint::BigUint;
use num_complex::Complex64 as C;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn test_input() -> GaussPoly<f64> {
    GaussPoly::real_gaussian(1.3, 0.4, 0.8).unwrap()
}

fn random_poly(rng: &mut ChaCha8Rng, terms: usize) -> GaussPoly<f64> {
    let ts = (0..terms)
        .map(|_| {
            let q = [
                C::new(rng.gen_range(0.6..2.0), rng.gen_range(-0.3..0.3)),
                C::new(rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3)),
                C::new(rng.gen_range(0.6..2.0), rng.gen_range(-0.3..0.3)),
            ];
            let coef = C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let u = C::new(rng.gen_range(-0.4..0.4), rng.gen_range(-0.1..0.1));
            let v = C::new(rng.gen_range(-0.4..0.4), rng.gen_range(-0.1..0.1));
            GaussTerm::new(coef, rng.gen_range(0..3), rng.gen_range(0..3), q, u, v).unwrap()
        })
        .collect();
    GaussPoly::from_terms(ts).unwrap()
}

fn pascal(n: usize) -> Vec<Vec<BigUint>> {
    let mut rows = vec![vec![BigUint::one()]];
    for i in 1..=n {
        let mut row = vec![BigUint::one(); i + 1];
        for j in 1..i {
            row[j] = &rows[i - 1][j - 1] + &rows[i - 1][j];
        }
        rows.push(row);
    }
    rows
}

fn c1_hecke_tables() -> Outcome {
    let tri = pascal(64);
    for k in 0..=64u32 {
        let t = hecke_power(k);
        for l in 0..=k as usize {
            if t.row_sum(l) != tri[k as usize][l] {
                return Err(format!("row sum differs at k={k} l={l}"));
            }
            for r in 0..=l {
                if !t.get(l, r).is_zero() && 2 * l as i64 - k as i64 - r as i64 > 0 {
                    return Err(format!("support violated at k={k} l={l} r={r}"));
                }
            }
        }
    }
    Ok("k <= 64: row sums = binomial(k, l), support 2l - k - r <= 0".into())
}

fn c2_symbolic() -> Outcome {
    for k in 0..=10 {
        let s = expand_pow_symbolic(k, 2).map_err(err)?;
        let t = HeckePowerTable::from_operator_sum(k, &s).map_err(err)?;
        if t != hecke_power(k) {
            return Err(format!("tables differ at k={k}"));
        }
    }
    Ok("k <= 10 symbolic expansion equals the recursion".into())
}

/// Brute-force inverses and direct exponentials.
fn kloosterman_naive(k: i64, m: i64, inv: &[i64]) -> f64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for n0 in 0..m {
        if n0.gcd(&m) != 1 {
            continue;
        }
        let t = -std::f64::consts::TAU * (inv[n0 as usize] + k * n0).rem_euclid(m) as f64 / m as f64;
        re += t.cos();
        im += t.sin();
    }
    assert!(im.abs() < 1e-8);
    re
}

fn c3_kloosterman() -> Outcome {
    let mut worst = 0.0f64;
    for m in 1..=1000i64 {
        let mut inv = vec![0i64; m as usize];
        for a in 0..m {
            if let Some(b) = (0..m).find(|b| (a * b) % m == 1 % m) {
                inv[a as usize] = b;
            }
        }
        let row = KloostermanRow::<f64>::new(m).map_err(err)?;
        for k in -20..=20 {
            let d = (row.sum(k).map_err(err)? - kloosterman_naive(k, m, &inv)).abs();
            worst = worst.max(d);
        }
    }
    if worst >= 1e-9 {
        return Err(format!("max difference {worst:.3e}"));
    }
    let mut weil_ratio = 0.0f64;
    for m in 1..=2000i64 {
        let row = KloostermanRow::<f64>::new(m).map_err(err)?;
        for k in -20..=20 {
            weil_ratio = weil_ratio.max(row.sum(k).map_err(err)?.abs() / weil_bound(k, m));
        }
    }
    check(
        weil_ratio <= 1.0 + 1e-9,
        format!("max difference {worst:.2e} (m <= 1000), max |S| / Weil {weil_ratio:.4} (m <= 2000)"),
    )
}

fn c4_theta() -> Outcome {
    let rep = exp_theta_s11().map_err(err)?;
    let worst = rep.rows.iter().map(|r| r.ratio * r.bound).fold(0.0, f64::max);
    check(rep.passed() && rep.rows.len() == 20, format!("20 points, max error {worst:.2e}"))
}

fn c5_transfer() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let h = random_poly(&mut rng, 2);
        for z in [C::new(0.0, 1.0), C::new(0.5, 1.0), C::new(0.0, 2.0)] {
            worst = worst.max(transfer_check(&h, z).map_err(err)?);
        }
    }
    check(worst < 1e-6, format!("10 inputs x 3 points, max residual {worst:.2e}"))
}

fn c6_eisenstein() -> Outcome {
    let rep = exp_eisenstein_eigen(&[2, 3, 5], &[0.0, 2.0, 10.0]).map_err(err)?;
    let worst = rep.rows.iter().map(|r| r.ratio * r.bound).fold(0.0, f64::max);
    check(rep.passed(), format!("{} rows, max eigenvalue error {worst:.2e}", rep.rows.len()))
}

fn c7_mellin() -> Outcome {
    let inputs = [
        GaussPoly::<f64>::standard(),
        test_input(),
        GaussPoly::<f64>::real_gaussian(0.9, -0.2, 1.1)
            .unwrap()
            .mul_poly(&Poly2::affine(C::new(1.0, 0.0), C::new(0.5, 0.0), C::new(0.0, -0.3))),
    ];
    let pts = [(1.0, 1.0), (0.5, -0.2), (-0.7, 0.3), (1.2, -0.9), (0.2, 0.6)];
    let mut worst = 0.0f64;
    for h in &inputs {
        for &(x, xi) in &pts {
            let f = |lam: f64| mellin_slice(h, lam, x, xi).unwrap();
            let mut acc = C::new(0.0, 0.0);
            for j in -30..30 {
                acc += integrate(f, 2.0 * j as f64, 2.0 * (j + 1) as f64, 1e-12, 1e-10).map_err(err)?.value;
            }
            worst = worst.max((acc - h.eval(x, xi)).norm());
        }
    }
    check(worst < 1e-6, format!("3 inputs x 5 points, max error {worst:.2e}"))
}

fn c8_bm() -> Outcome {
    let rep = exp_bm_consistency(&[1, 2, 3], &test_input(), 400, 12).map_err(err)?;
    let worst = rep.rows.iter().map(|r| r.ratio * r.bound).fold(0.0, f64::max);
    check(rep.passed(), format!("m = 1, 2, 3, max difference {worst:.2e}"))
}

fn c9_envelope(norm: &mut f64) -> Outcome {
    let rep = exp_scan_envelope(2, 6, DEFAULT_EPS, &test_input(), (10.0, 20.0)).map_err(err)?;
    *norm = rep.metadata["fitted_norm"].as_f64().unwrap_or(f64::NAN);
    let change = rep.metadata["max_ratio_change"].as_f64().unwrap_or(f64::INFINITY);
    check(
        rep.passed(),
        format!("{} rows, max ratio {:.4}, max change under doubling {change:.4}", rep.rows.len(), *norm),
    )
}

fn c10_budget(norm: f64) -> Outcome {
    let norm = if norm.is_finite() { norm } else { 1.0 };
    let rep = exp_binomial_budget(2, 16, DEFAULT_EPS, norm, DEFAULT_NORM_DEGREE).map_err(err)?;
    check(rep.passed(), format!("N <= 16, sum alpha = 2^(2N) exactly, budget at norm {norm:.4}"))
}

fn c11_window() -> Outcome {
    let h = test_input();
    let w = SpectralWindow::new(2.0, 2, 0.25).map_err(err)?;
    let grid = window_apply(&w, &h, 1.5, 4).map_err(err)?;
    // slices multiplied by the window, then resummed in lambda
    let reach = (37.0 / (std::f64::consts::PI * w.width())).sqrt();
    let (lo, hi) = (w.lambda_center - reach, w.lambda_center + reach);
    let pieces = 16;
    let mut worst = 0.0f64;
    for (&(x, xi), &got) in grid.points.iter().zip(&grid.values) {
        let f = |lam: f64| mellin_slice(&h, lam, x, xi).unwrap() * w.factor(lam);
        let mut want = C::new(0.0, 0.0);
        for j in 0..pieces {
            let a = lo + (hi - lo) * j as f64 / pieces as f64;
            let b = lo + (hi - lo) * (j + 1) as f64 / pieces as f64;
            want += integrate(f, a, b, 1e-12, 1e-11).map_err(err)?.value;
        }
        worst = worst.max((got - want).norm());
    }
    check(worst < 1e-6, format!("{} grid points, max error {worst:.2e}", grid.points.len()))
}

fn c12_ramanujan() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut names: Vec<_> = std::fs::read_dir(&dir)
        .map_err(err)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    names.sort();
    let mut lines = Vec::new();
    let mut ok = !names.is_empty();
    for path in names {
        let t = Instant::now();
        let e = load_fixture(&path).map_err(err)?;
        let rep = exp_ramanujan(&e).map_err(err)?;
        let dt = t.elapsed();
        let violations = rep.metadata["ramanujan_violations"].clone();
        ok &= rep.passed() && dt < Duration::from_secs(5);
        lines.push(format!(
            "{}: {} primes, max residual/precision {:.2e}, |b_p| > 2 at {violations}",
            path.file_name().unwrap().to_string_lossy(),
            rep.rows.len(),
            rep.max_ratio()
        ));
    }
    check(ok, lines.join("; "))
}

fn main() {
    let mut norm = f64::NAN;
    let mut failed = 0;
    let mut run = |id: u32, limit: f64, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let out = f();
        let secs = t.elapsed().as_secs_f64();
        let (ok, detail) = match out {
            Ok(d) => (secs < limit, d),
            Err(d) => (false, d),
        };
        let slow = if secs < limit { String::new() } else { format!(" over the {limit} s limit") };
        println!("criterion {id:>2}: {} [{secs:.2} s{slow}] {detail}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failed += 1;
        }
    };
    run(1, 2.0, &mut c1_hecke_tables);
    run(2, 30.0, &mut c2_symbolic);
    run(3, 60.0, &mut c3_kloosterman);
    run(4, 5.0, &mut c4_theta);
    run(5, 10.0, &mut c5_transfer);
    run(6, 20.0, &mut c6_eisenstein);
    run(7, 20.0, &mut c7_mellin);
    run(8, 60.0, &mut c8_bm);
    run(9, 300.0, &mut || c9_envelope(&mut norm));
    run(10, 2.0, &mut || c10_budget(norm));
    run(11, 30.0, &mut c11_window);
    run(12, 60.0, &mut c12_ramanujan);
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 12 criteria passed");
}
