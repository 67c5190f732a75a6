//! One-dimensional adaptive quadrature for smooth complex integrands.
//!
//! Globally adaptive Gauss-Kronrod (7/15) with interval bisection, plus a
//! helper for integrals over a half-line whose integrand decays fast.

use num_complex::Complex;
use thiserror::Error;

use crate::real::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("quadrature did not converge: estimated error {estimate:e} above tolerance {tol:e}")]
    NoConvergence { estimate: f64, tol: f64 },
    #[error("integrand returned a non-finite value at {at}")]
    NonFinite { at: f64 },
}

/// Value and error estimate of an integral.
#[derive(Debug, Clone, Copy)]
pub struct Estimate<T: Real> {
    pub value: Complex<T>,
    pub error: T,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Single 15-point Kronrod rule with embedded 7-point Gauss error estimate.
pub fn gk15<T, F>(f: &F, a: T, b: T) -> Estimate<T>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    let half = (b - a) * T::c(0.5);
    let mid = (a + b) * T::c(0.5);
    let fc = f(mid);
    let mut kron = fc * T::c(WGK[7]);
    let mut gauss = fc * T::c(WG[3]);
    for j in 0..7 {
        let dx = half * T::c(XGK[j]);
        let s = f(mid - dx) + f(mid + dx);
        kron = kron + s * T::c(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + s * T::c(WG[j / 2]);
        }
    }
    let value = kron * half;
    let error = ((kron - gauss) * half).norm();
    Estimate { value, error }
}

/// Globally adaptive integration of `f` over `[a, b]`.
///
/// Stops when the summed error estimate is below `max(abs_tol, rel_tol*|I|)`.
pub fn integrate<T, F>(f: F, a: T, b: T, abs_tol: T, rel_tol: T) -> Result<Estimate<T>, QuadError>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    const MAX_INTERVALS: usize = 4000;
    if a == b {
        return Ok(Estimate { value: Complex::new(T::zero(), T::zero()), error: T::zero() });
    }
    let first = gk15(&f, a, b);
    let mut parts: Vec<(T, T, Estimate<T>)> = vec![(a, b, first)];
    loop {
        let mut total = Complex::new(T::zero(), T::zero());
        let mut err = T::zero();
        let mut worst = 0;
        for (i, p) in parts.iter().enumerate() {
            total = total + p.2.value;
            err = err + p.2.error;
            if p.2.error > parts[worst].2.error {
                worst = i;
            }
        }
        if !total.re.is_finite() || !total.im.is_finite() {
            return Err(QuadError::NonFinite { at: parts[worst].0.f64() });
        }
        let tol = abs_tol.max(rel_tol * total.norm());
        // Roundoff floor relative to the magnitude actually summed.
        let floor = T::c(50.0) * T::eps() * total.norm();
        if err <= tol || err <= floor {
            return Ok(Estimate { value: total, error: err });
        }
        if parts.len() >= MAX_INTERVALS {
            return Err(QuadError::NoConvergence { estimate: err.f64(), tol: tol.f64() });
        }
        let (lo, hi, _) = parts.swap_remove(worst);
        let mid = (lo + hi) * T::c(0.5);
        if mid <= lo || mid >= hi {
            return Err(QuadError::NoConvergence { estimate: err.f64(), tol: tol.f64() });
        }
        let l = gk15(&f, lo, mid);
        let r = gk15(&f, mid, hi);
        parts.push((lo, mid, l));
        parts.push((mid, hi, r));
    }
}

/// Integral over `[a, inf)` for integrands with at least exponential decay.
///
/// Integrates over blocks of doubling length until three consecutive blocks
/// contribute less than the tolerance.
pub fn integrate_to_inf<T, F>(f: F, a: T, scale: T, abs_tol: T, rel_tol: T) -> Result<Estimate<T>, QuadError>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    let mut total = Complex::new(T::zero(), T::zero());
    let mut err = T::zero();
    let mut lo = a;
    let mut len = scale;
    let mut quiet = 0;
    for _ in 0..60 {
        let hi = lo + len;
        let part = integrate(&f, lo, hi, abs_tol * T::c(0.1), rel_tol)?;
        total = total + part.value;
        err = err + part.error;
        let tol = abs_tol.max(rel_tol * total.norm());
        if part.value.norm() <= tol * T::c(1e-3) {
            quiet += 1;
            if quiet >= 3 {
                return Ok(Estimate { value: total, error: err });
            }
        } else {
            quiet = 0;
        }
        lo = hi;
        len = len * T::c(2.0);
    }
    Err(QuadError::NoConvergence { estimate: f64::INFINITY, tol: abs_tol.f64() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let e = integrate(|x: f64| Complex::new(x.powi(5) - 3.0 * x * x, 0.0), -1.0, 2.0, 1e-14, 1e-14).unwrap();
        let exact = (64.0 - 1.0) / 6.0 - (8.0 + 1.0);
        assert!((e.value.re - exact).abs() < 1e-12);
    }

    #[test]
    fn gaussian_half_line() {
        let e = integrate_to_inf(|x: f64| Complex::new((-x * x).exp(), 0.0), 0.0, 1.0, 1e-14, 1e-13).unwrap();
        assert!((e.value.re - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn log_endpoint_singularity() {
        // int_0^1 ln x dx = -1
        let e = integrate(|x: f64| Complex::new(x.ln(), 0.0), 0.0, 1.0, 1e-12, 1e-12).unwrap();
        assert!((e.value.re + 1.0).abs() < 1e-10);
    }
}
