//! Functions on the upper half-plane: Eisenstein series, Maass expansions,
//! Hecke operators, Selberg-Poincare series, spectral coefficients and
//! L-functions.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex;
use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{divisor_sigma, is_prime, primes_up_to, CharacterSpec, Truncated, UnimodularRep};
use crate::quad::integrate;
use crate::real::{e2pi, rpow};
use crate::specfun::{b_delta, bessel_k, bessel_k_imag, bessel_k_imag_first, gamma_c, zeta_c, zeta_star, QuadratureSpec};

type C = Complex<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HalfPlaneError {
    #[error("{0}")]
    Domain(String),
    #[error("pole at {0}")]
    Pole(String),
    #[error("coefficient range: {0}")]
    Range(String),
    #[error("outside the region of convergence: {0}")]
    Convergence(String),
    #[error("fixture schema: {0}")]
    Schema(String),
    #[error("fixture normalization: {0}")]
    Normalization(String),
    #[error("io: {0}")]
    Io(String),
    #[error(transparent)]
    Spec(#[from] crate::specfun::SpecError),
    #[error(transparent)]
    Arith(#[from] crate::arith::ArithError),
    #[error(transparent)]
    Quad(#[from] crate::quad::QuadError),
}

pub type Result<T> = std::result::Result<T, HalfPlaneError>;

/// A point `z` with `Im z > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint(C);

impl HalfPlanePoint {
    pub fn new(z: C) -> Result<Self> {
        if !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
            return Err(HalfPlaneError::Domain(format!("Im z must be positive, got {z}")));
        }
        Ok(HalfPlanePoint(z))
    }

    pub fn z(&self) -> C {
        self.0
    }
}

fn check_z(z: C) -> Result<()> {
    HalfPlanePoint::new(z).map(|_| ())
}

/// Default truncation order at height `y`.
pub fn default_order(y: f64) -> usize {
    40usize.max((10.0 / (std::f64::consts::TAU * y)).ceil() as usize)
}

/// Fourier-Bessel expansion `y^{1/2} sum_{0<|k|<=K} b_k K_{i lambda/2}(2 pi |k| y) e(k x)`
/// with `b_{-k} = (-1)^delta b_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaassExpansion {
    pub lambda: f64,
    pub parity: u8,
    pub coeffs: BTreeMap<u64, C>,
    pub k_max: usize,
    pub hecke_normalized: bool,
    /// Declared precision of the coefficients, when they come from a fixture.
    pub precision: Option<f64>,
}

impl MaassExpansion {
    pub fn new(lambda: f64, parity: u8, coeffs: BTreeMap<u64, C>, k_max: usize, hecke_normalized: bool) -> Result<Self> {
        if parity > 1 {
            return Err(HalfPlaneError::Domain(format!("parity must be 0 or 1, got {parity}")));
        }
        if k_max < 1 {
            return Err(HalfPlaneError::Domain("truncation order must be >= 1".into()));
        }
        if coeffs.contains_key(&0) {
            return Err(HalfPlaneError::Domain("coefficients are indexed from k = 1".into()));
        }
        if hecke_normalized {
            let b1 = coeffs.get(&1).copied().unwrap_or_default();
            if (b1 - 1.0).norm() > 1e-12 {
                return Err(HalfPlaneError::Normalization(format!("b_1 = {b1}, expected 1")));
            }
        }
        Ok(MaassExpansion { lambda, parity, coeffs, k_max, hecke_normalized, precision: None })
    }

    /// `b_k = k^{-i lambda/2} sigma_{i lambda}(k)` for `k <= k_max`, computed by a divisor sieve.
    pub fn eisenstein_model(lambda: f64, k_max: usize) -> Result<Self> {
        let nu = C::new(0.0, lambda);
        let mut sig = vec![C::new(0.0, 0.0); k_max + 1];
        for d in 1..=k_max {
            let w = rpow(d as f64, nu);
            for k in (d..=k_max).step_by(d) {
                sig[k] += w;
            }
        }
        let coeffs = (1..=k_max).map(|k| (k as u64, sig[k] * rpow(k as f64, -nu * 0.5))).collect();
        Self::new(lambda, 0, coeffs, k_max, true)
    }

    pub fn get(&self, k: u64) -> Option<C> {
        self.coeffs.get(&k).copied()
    }

    fn need(&self, k: u64) -> Result<C> {
        self.get(k).ok_or_else(|| HalfPlaneError::Range(format!("b_{k} is not available")))
    }

    fn sign(&self) -> f64 {
        if self.parity == 1 {
            -1.0
        } else {
            1.0
        }
    }
}

/// Fixture file layout.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Fixture {
    pub lambda: f64,
    pub parity: u8,
    pub precision: f64,
    pub coeffs: BTreeMap<String, [f64; 2]>,
}

impl Fixture {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| HalfPlaneError::Schema(e.to_string()))
    }

    /// Validated expansion; `b_1` must equal 1 within the declared precision.
    pub fn into_expansion(self) -> Result<MaassExpansion> {
        if self.parity > 1 {
            return Err(HalfPlaneError::Schema(format!("parity must be 0 or 1, got {}", self.parity)));
        }
        if !(self.precision > 0.0) {
            return Err(HalfPlaneError::Schema("precision must be positive".into()));
        }
        let mut coeffs = BTreeMap::new();
        for (k, [a, b]) in &self.coeffs {
            let k: u64 = k.trim().parse().map_err(|_| HalfPlaneError::Schema(format!("bad coefficient index {k:?}")))?;
            if k == 0 {
                return Err(HalfPlaneError::Schema("coefficient index 0".into()));
            }
            coeffs.insert(k, C::new(*a, *b));
        }
        let b1 = coeffs.get(&1).copied().ok_or_else(|| HalfPlaneError::Normalization("b_1 is missing".into()))?;
        if (b1 - 1.0).norm() > self.precision {
            return Err(HalfPlaneError::Normalization(format!(
                "b_1 = {b1} differs from 1 by more than the declared precision {}",
                self.precision
            )));
        }
        // the expansion is truncated at the first missing index
        let mut k_max = 0usize;
        while coeffs.contains_key(&(k_max as u64 + 1)) {
            k_max += 1;
        }
        Ok(MaassExpansion {
            lambda: self.lambda,
            parity: self.parity,
            coeffs,
            k_max,
            hecke_normalized: true,
            precision: Some(self.precision),
        })
    }
}

pub fn load_fixture(path: &Path) -> Result<MaassExpansion> {
    let text = std::fs::read_to_string(path).map_err(|e| HalfPlaneError::Io(format!("{}: {e}", path.display())))?;
    Fixture::from_json(&text)?.into_expansion()
}

/// `E_nu(z) = zeta*(1-nu) y^{(1-nu)/2} + zeta*(1+nu) y^{(1+nu)/2}
///  + 2 y^{1/2} sum_{0<|k|<=K} |k|^{-nu/2} sigma_nu(|k|) K_{nu/2}(2 pi |k| y) e(k x)`.
///
/// At `nu = 0` the two constant terms are replaced by their limit
/// `y^{1/2} (ln y + gamma - ln 4 pi)`.
pub fn eval_eisenstein(nu: C, z: C, k_max: usize) -> Result<Truncated<f64>> {
    check_z(z)?;
    for p in [-1.0, 1.0] {
        if (nu - p).norm() < 1e-14 {
            return Err(HalfPlaneError::Pole(format!("Eisenstein series at nu = {p}")));
        }
    }
    let (x, y) = (z.re, z.im);
    let one = C::new(1.0, 0.0);
    let constant = if nu.norm() < 1e-9 {
        const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
        C::new(y.sqrt() * (y.ln() + EULER_GAMMA - (4.0 * std::f64::consts::PI).ln()), 0.0)
    } else {
        zeta_star(one - nu)? * rpow(y, (one - nu) * 0.5) + zeta_star(one + nu)? * rpow(y, (one + nu) * 0.5)
    };
    let spec = QuadratureSpec::default();
    let terms = (1..=k_max as i64)
        .into_par_iter()
        .map(|k| -> Result<C> {
            let kf = k as f64;
            let kb = bessel_k(nu * 0.5, std::f64::consts::TAU * kf * y, &spec)?;
            let c = rpow(kf, -nu * 0.5) * divisor_sigma(nu, k)? * kb;
            // k and -k together
            Ok(c * (e2pi(kf * x) + e2pi(-kf * x)))
        })
        .collect::<Result<Vec<_>>>()?;
    let sum: C = terms.into_iter().sum();
    let value = constant + sum * (2.0 * y.sqrt());
    // first omitted term, with K_mu(x) <= sqrt(pi/2x) e^{-x} e^{mu^2/2x} and sigma(k) <= 2 k^{|Re nu| + 1/2}
    let k1 = (k_max + 1) as f64;
    let a = nu.re.abs();
    let arg = std::f64::consts::TAU * k1 * y;
    let kb = (std::f64::consts::PI / (2.0 * arg)).sqrt() * (-arg).exp() * (0.25 * a * a / (2.0 * arg)).exp();
    let first = 4.0 * y.sqrt() * 2.0 * k1.powf(1.5 * a + 0.5) * kb;
    let tail_bound = first / (1.0 - (-std::f64::consts::TAU * y).exp());
    Ok(Truncated { value, tail_bound })
}

/// `y^{1/2} sum_{0<|k|<=K} b_k K_{i lambda/2}(2 pi |k| y) e(k x)`.
pub fn eval_maass(e: &MaassExpansion, z: C) -> Result<C> {
    check_z(z)?;
    let (x, y) = (z.re, z.im);
    let spec = QuadratureSpec::default();
    let sgn = e.sign();
    let terms = (1..=e.k_max as u64)
        .into_par_iter()
        .map(|k| -> Result<C> {
            let b = e.need(k)?;
            let kf = k as f64;
            let kb = bessel_k_imag(e.lambda, std::f64::consts::TAU * kf * y, &spec)?;
            Ok(b * kb * (e2pi(kf * x) + e2pi(-kf * x) * sgn))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(terms.into_iter().sum::<C>() * y.sqrt())
}

/// `(T_p f)(z) = p^{-1/2} [f(p z) + sum_{b < p} f((z + b)/p)]`.
pub fn hecke_classical<F>(p: u64, f: F, z: C) -> Result<C>
where
    F: Fn(C) -> Result<C>,
{
    check_z(z)?;
    if !is_prime(p) {
        return Err(HalfPlaneError::Domain(format!("{p} is not prime")));
    }
    let pf = p as f64;
    let mut acc = f(z * pf)?;
    for b in 0..p {
        acc += f((z + b as f64) / pf)?;
    }
    Ok(acc / pf.sqrt())
}

/// `(T_{-1} f)(z) = f(-conj z)`.
pub fn hecke_minus_one<F>(f: F, z: C) -> Result<C>
where
    F: Fn(C) -> Result<C>,
{
    check_z(z)?;
    f(-z.conj())
}

/// Coefficient form of `T_p`: `b'_k = b_{k/p} + b_{p k}`, for `k <= K / p`.
pub fn hecke_coeff(p: u64, e: &MaassExpansion) -> Result<MaassExpansion> {
    if !is_prime(p) {
        return Err(HalfPlaneError::Domain(format!("{p} is not prime")));
    }
    let k_out = e.k_max / p as usize;
    if k_out < 1 {
        return Err(HalfPlaneError::Range(format!("need b_p but K = {}", e.k_max)));
    }
    let mut coeffs = BTreeMap::new();
    for k in 1..=k_out as u64 {
        let mut v = e.need(p * k)?;
        if k % p == 0 {
            v += e.need(k / p)?;
        }
        coeffs.insert(k, v);
    }
    Ok(MaassExpansion {
        lambda: e.lambda,
        parity: e.parity,
        coeffs,
        k_max: k_out,
        hecke_normalized: false,
        precision: e.precision,
    })
}

/// `(4 pi)^j Gamma(j + 1/2) / Gamma(1/2) * (1/2) sum (Im g^{-1} z)^{j + 1/2} e(g^{-1} z)`
/// over `g` in `Gamma / Gamma_inf`, keeping the orbit points with
/// `Im g^{-1} z >= 1 / radius^2`. The cut is a union of orbit points, so the
/// truncated sum is itself invariant under `Gamma`.
pub fn poincare_selberg(j: u32, z: C, radius: f64) -> Result<Truncated<f64>> {
    check_z(z)?;
    if j < 1 {
        return Err(HalfPlaneError::Domain("j must be >= 1".into()));
    }
    if !(radius >= 1.0) {
        return Err(HalfPlaneError::Domain("radius must be >= 1".into()));
    }
    let (x, y) = (z.re, z.im);
    let s = j as f64 + 0.5;
    let bound = radius * radius * y;
    let m_max = (bound / (y * y)).sqrt().floor() as i64;
    let rows = (-m_max..=m_max)
        .into_par_iter()
        .map(|m| -> Result<C> {
            let mf = m as f64;
            let rem = bound - mf * mf * y * y;
            if rem < 0.0 {
                return Ok(C::new(0.0, 0.0));
            }
            let w = rem.sqrt();
            let lo = (mf * x - w).ceil() as i64;
            let hi = (mf * x + w).floor() as i64;
            let mut acc = C::new(0.0, 0.0);
            for n in lo..=hi {
                if n.gcd(&m) != 1 {
                    continue;
                }
                let r = UnimodularRep::complete(n, m)?;
                let den = C::new(r.n as f64, 0.0) - z * mf;
                let gz = (z * r.m1 as f64 - r.n1 as f64) / den;
                acc += rpow(gz.im, C::new(s, 0.0)) * e2pi(gz.re) * (-std::f64::consts::TAU * gz.im).exp();
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let sum: C = rows.into_iter().sum();
    let pref = (4.0 * std::f64::consts::PI).powi(j as i32) * (gamma_c(C::new(s, 0.0))? / gamma_c(C::new(0.5, 0.0))?).re;
    // about 6 / (pi t) orbit points have Im >= t
    let eps = 1.0 / (radius * radius);
    let tail_bound = 0.5 * pref * 2.0 * 6.0 / std::f64::consts::PI * eps.powf(s - 1.0) / (s - 1.0);
    Ok(Truncated { value: sum * (0.5 * pref), tail_bound })
}

/// `2 Gamma(1/2) / Gamma(j + 1/2) (4 pi)^{-j} Gamma(j + i lambda/2) Gamma(j - i lambda/2) / zeta*(i lambda)`.
pub fn spec_coeff_eis(j: u32, lambda: f64) -> Result<C> {
    if lambda == 0.0 {
        return Err(HalfPlaneError::Pole("lambda = 0".into()));
    }
    let jf = j as f64;
    let g = gamma_c(C::new(0.5, 0.0))? / gamma_c(C::new(jf + 0.5, 0.0))?;
    let pair = gamma_c(C::new(jf, 0.5 * lambda))? * gamma_c(C::new(jf, -0.5 * lambda))?;
    Ok(g * 2.0 * (4.0 * std::f64::consts::PI).powi(-(j as i32)) * pair / zeta_star(C::new(0.0, lambda))?)
}

/// `(4 pi)^{-j} Gamma(1/2) / Gamma(j + 1/2) Gamma(j - i lambda/2) Gamma(j + i lambda/2)`.
pub fn spec_coeff_cusp(j: u32, lambda: f64) -> Result<C> {
    let jf = j as f64;
    let g = gamma_c(C::new(0.5, 0.0))? / gamma_c(C::new(jf + 0.5, 0.0))?;
    let pair = gamma_c(C::new(jf, -0.5 * lambda))? * gamma_c(C::new(jf, 0.5 * lambda))?;
    Ok(g * (4.0 * std::f64::consts::PI).powi(-(j as i32)) * pair)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LMode {
    Dirichlet,
    Euler,
}

fn check_region(s: C) -> Result<()> {
    if !(s.re > 1.5) {
        return Err(HalfPlaneError::Convergence(format!("truncated L-series need Re s > 3/2, got {s}")));
    }
    Ok(())
}

/// `L(s) = sum b_k k^{-s}` or `prod_p (1 - b_p p^{-s} + p^{-2s})^{-1}`, truncated at `K`.
pub fn l_func(e: &MaassExpansion, s: C, mode: LMode) -> Result<C> {
    check_region(s)?;
    match mode {
        LMode::Dirichlet => {
            let mut acc = C::new(0.0, 0.0);
            for k in 1..=e.k_max as u64 {
                acc += e.need(k)? * rpow(k as f64, -s);
            }
            Ok(acc)
        }
        LMode::Euler => {
            let mut acc = C::new(1.0, 0.0);
            for p in primes_up_to(e.k_max as u64) {
                let ps = rpow(p as f64, -s);
                acc /= C::new(1.0, 0.0) - e.need(p)? * ps + ps * ps;
            }
            Ok(acc)
        }
    }
}

/// Gamma factor `pi^{-s} Gamma((s+delta)/2 + i lambda/4) Gamma((s+delta)/2 - i lambda/4)`.
fn gamma_factor(lambda: f64, delta: u8, s: C) -> Result<C> {
    let a = (s + delta as f64) * 0.5;
    let il = C::new(0.0, 0.25 * lambda);
    Ok(rpow(std::f64::consts::PI, -s) * gamma_c(a + il)? * gamma_c(a - il)?)
}

/// `Lambda(s) = pi^{-s} Gamma((s+delta)/2 + i lambda/4) Gamma((s+delta)/2 - i lambda/4) L(s)`.
pub fn lambda_completed(e: &MaassExpansion, s: C) -> Result<C> {
    Ok(gamma_factor(e.lambda, e.parity, s)? * l_func(e, s, LMode::Dirichlet)?)
}

/// `L^natural(s) = (1/2) B_delta((2 - i lambda)/2 - s) psi_1(s + i lambda/2) psi_2(s - i lambda/2)`
/// with `psi_1`, `psi_2` the Euler products of `chi` and `chi^{-1}` over the stored primes.
pub fn lnat(ch: &CharacterSpec<f64>, lambda: f64, s: C) -> Result<C> {
    let theta_max = ch
        .theta
        .iter()
        .map(|(&p, th)| th.norm().max(1.0 / th.norm()).ln() / (p as f64).ln())
        .fold(0.0f64, f64::max);
    if !(s.re - theta_max > 1.5) {
        return Err(HalfPlaneError::Convergence(format!("Euler products need Re s > 3/2 + {theta_max}, got {s}")));
    }
    let il = C::new(0.0, 0.5 * lambda);
    let mut psi1 = C::new(1.0, 0.0);
    let mut psi2 = C::new(1.0, 0.0);
    for &p in ch.theta.keys() {
        let chi = ch.chi(p as i64)?;
        psi1 /= C::new(1.0, 0.0) - chi * rpow(p as f64, -(s + il));
        psi2 /= C::new(1.0, 0.0) - chi.inv() * rpow(p as f64, -(s - il));
    }
    let arg = C::new(1.0, -0.5 * lambda) - s;
    Ok(b_delta(ch.parity, arg)? * psi1 * psi2 * 0.5)
}

/// `phi(y)` whose Mellin transform gives the completed L-function:
/// `f(iy)` for even expansions and `(2 i pi)^{-1} d_x f(iy)` for odd ones.
fn mellin_kernel(e: &MaassExpansion, y: f64) -> Result<f64> {
    let spec = QuadratureSpec::default();
    let mut acc = 0.0;
    for k in 1..=e.k_max as u64 {
        let kf = k as f64;
        let kb = bessel_k_imag_first(e.lambda, std::f64::consts::TAU * kf * y, &spec)?;
        acc += (e.need(k)?.re) * kb * kf.powi(e.parity as i32);
    }
    Ok(2.0 * y.sqrt() * acc)
}

/// `|Lambda(s) - (-1)^delta Lambda(1-s)|`: the left side from the Dirichlet
/// series, the right side from the Mellin integral split at `y = 1`, which
/// assumes modularity. Small only for genuine eigenform data.
pub fn func_eq_residual(e: &MaassExpansion, s: C) -> Result<f64> {
    let left = lambda_completed(e, s)?;
    let d = e.parity as f64;
    let sign = if e.parity == 1 { -1.0 } else { 1.0 };
    let t = C::new(1.0, 0.0) - s;
    // M(t) = int_1^inf phi(y) [y^{t+delta-1/2} + (-1)^delta y^{1/2-t+delta}] dy/y, Lambda = 2 pi^delta M
    let g = |y: f64| {
        let phi = mellin_kernel(e, y).unwrap_or(f64::NAN);
        (rpow(y, t + d - 0.5) + rpow(y, -t + d + 0.5) * sign) * (phi / y)
    };
    let mut m = C::new(0.0, 0.0);
    let mut a = 1.0;
    while a < 12.0 {
        m += integrate(g, a, a + 1.0, 1e-13, 1e-10)?.value;
        a += 1.0;
    }
    let right = m * (2.0 * std::f64::consts::PI.powf(d)) * sign;
    Ok((left - right).norm())
}

/// `zeta(s + i lambda/2) zeta(s - i lambda/2)`.
pub fn eisenstein_l(lambda: f64, s: C) -> Result<C> {
    let il = C::new(0.0, 0.5 * lambda);
    Ok(zeta_c(s + il)? * zeta_c(s - il)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eisenstein_at_zero_is_the_limit() {
        let z = C::new(0.2, 0.9);
        let at0 = eval_eisenstein(C::new(0.0, 0.0), z, 30).unwrap().value;
        let e = 1e-3;
        let a = eval_eisenstein(C::new(e, 0.0), z, 30).unwrap().value;
        let b = eval_eisenstein(C::new(-e, 0.0), z, 30).unwrap().value;
        // even in nu, so the average is O(e^2) from the value at 0
        assert!((at0 - (a + b) * 0.5).norm() < 1e-5, "{at0} {a} {b}");
    }

    #[test]
    fn fixture_validation() {
        let ok = r#"{"lambda": 6.93, "parity": 0, "precision": 1e-3, "coeffs": {"1": [1, 0]}}"#;
        let e = Fixture::from_json(ok).unwrap().into_expansion().unwrap();
        assert_eq!(e.k_max, 1);
        let bad = r#"{"lambda": 6.93, "parity": 0, "precision": 1e-3, "coeffs": {"1": [1.1, 0]}}"#;
        assert!(matches!(Fixture::from_json(bad).unwrap().into_expansion(), Err(HalfPlaneError::Normalization(_))));
        let missing = r#"{"lambda": 6.93, "parity": 0, "precision": 1e-3}"#;
        assert!(matches!(Fixture::from_json(missing), Err(HalfPlaneError::Schema(_))));
    }

    #[test]
    fn hecke_on_constant() {
        let v = hecke_classical(3, |_| Ok(C::new(1.0, 0.0)), C::new(0.1, 1.0)).unwrap();
        assert!((v.re - 4.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn single_coefficient_expansion() {
        let mut c = BTreeMap::new();
        c.insert(1, C::new(1.0, 0.0));
        let e = MaassExpansion::new(4.0, 0, c, 1, true).unwrap();
        let y = 0.8;
        let v = eval_maass(&e, C::new(0.0, y)).unwrap();
        let k = bessel_k_imag(4.0, std::f64::consts::TAU * y, &QuadratureSpec::default()).unwrap();
        assert!((v.re - 2.0 * y.sqrt() * k).abs() < 1e-14 && v.im.abs() < 1e-14);
    }

    #[test]
    fn l_region() {
        let e = MaassExpansion::eisenstein_model(2.0, 10).unwrap();
        assert!(matches!(l_func(&e, C::new(1.2, 0.0), LMode::Dirichlet), Err(HalfPlaneError::Convergence(_))));
        let mut c = BTreeMap::new();
        c.insert(1, C::new(1.0, 0.0));
        for k in 2..=20 {
            c.insert(k, C::new(0.0, 0.0));
        }
        let e = MaassExpansion::new(2.0, 0, c, 20, true).unwrap();
        assert_eq!(l_func(&e, C::new(3.0, 0.0), LMode::Dirichlet).unwrap(), C::new(1.0, 0.0));
    }
}
