//! The Theta transform `z -> <S, exp(-pi |x - z xi|^2 / Im z)>`.

use num_complex::Complex;

use super::{GaussPoly, PhiBlock, PlaneError, Result};
use crate::real::{cx, e2pi, re, rpow, Real};
use crate::specfun::{bessel_k, bessel_k_imag, gamma_c, QuadratureSpec};

fn check_z<T: Real>(z: Complex<T>) -> Result<()> {
    if !(z.im > T::zero()) {
        return Err(PlaneError::Domain(format!("Im z must be positive, got {}", z.im.f64())));
    }
    Ok(())
}

/// `Theta h (z)` as an exact Gaussian integral.
pub fn theta<T: Real>(h: &GaussPoly<T>, z: Complex<T>) -> Result<Complex<T>> {
    let k = GaussPoly::theta_kernel(z)?;
    Ok(h.mul(&k).integral())
}

/// `Theta s_1^1 (z)`, where `s_1^1 = e(x) delta(xi - 1)`, from its pairing integral.
pub fn theta_s11<T: Real>(z: Complex<T>) -> Result<Complex<T>> {
    let k = GaussPoly::theta_kernel(z)?;
    Ok(k.line_integral(T::zero(), T::one(), T::one(), T::zero(), T::one()))
}

/// `Theta Phi_delta[nu, c] (z)`.
///
/// For `c != 0` this is `2 |c|^{-nu/2} y^{1/2} K_{nu/2}(2 pi |c| y) e(c x)`;
/// for `c = 0` it needs `Re nu < 0` and equals `y^{1/2} (pi y)^{nu/2} Gamma(-nu/2)`.
/// Odd blocks pair to zero against the even kernel.
pub fn theta_phi<T: Real>(block: &PhiBlock<T>, z: Complex<T>, spec: &QuadratureSpec<T>) -> Result<Complex<T>> {
    check_z(z)?;
    if block.delta == 1 {
        return Ok(re(T::zero()));
    }
    let (x, y) = (z.re, z.im);
    let half = T::c(0.5);
    let c = T::int(*block.c.numer()) / T::int(*block.c.denom());
    if c == T::zero() {
        if !(block.nu.re < T::zero()) {
            return Err(PlaneError::Domain("Theta of Phi with c = 0 needs Re nu < 0".into()));
        }
        return Ok(rpow(T::PI() * y, block.nu * half) * gamma_c(-block.nu * half)? * y.sqrt());
    }
    let ca = c.abs();
    let arg = T::TAU() * ca * y;
    let k = if block.nu.re == T::zero() {
        re(bessel_k_imag(block.nu.im, arg, spec)?)
    } else {
        bessel_k(block.nu * half, arg, spec)?
    };
    Ok(rpow(ca, -block.nu * half) * k * (y.sqrt() * T::c(2.0)) * e2pi(c * x))
}

/// Fourth-order central second derivative.
fn d2(f: &dyn Fn(f64) -> Complex<f64>, t: f64, h: f64) -> Complex<f64> {
    (-f(t + 2.0 * h) + f(t + h) * 16.0 - f(t) * 30.0 + f(t - h) * 16.0 - f(t - 2.0 * h)) / (12.0 * h * h)
}

/// `|Theta(pi^2 E^2 h)(z) - (Delta - 1/4) Theta h (z)|` with a finite-difference Laplacian.
pub fn transfer_check(h: &GaussPoly<f64>, z: Complex<f64>) -> Result<f64> {
    check_z(z)?;
    let lhs = theta(&h.pi2_e2(), z)?;
    let step = 1e-2 * z.im.min(1.0);
    let th = |w: Complex<f64>| theta(h, w).unwrap_or(Complex::new(f64::NAN, f64::NAN));
    let fx = |t: f64| th(cx(t, z.im));
    let fy = |t: f64| th(cx(z.re, t));
    let lap = -(d2(&fx, z.re, step) + d2(&fy, z.im, step)) * (z.im * z.im);
    let r = (lhs - (lap - th(z) * 0.25)).norm();
    if !r.is_finite() {
        return Err(PlaneError::NoConvergence("non-finite Theta value near z".into()));
    }
    Ok(r)
}

/// The radial form of the transfer identity at `(x, xi) = (1, 0)`:
/// `|-(rho d/drho + 1/2)^2 f(rho) - (Delta - 1/4) f(1 / Im z)|` at `rho = 1 / y`.
pub fn transfer_check_radial(f: &dyn Fn(f64) -> f64, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(PlaneError::Domain("y must be positive".into()));
    }
    let rho = 1.0 / y;
    let g = |t: f64| Complex::new(f(t), 0.0);
    let hr = 1e-2 * rho.min(1.0);
    let d1 = (g(rho - 2.0 * hr) - g(rho - hr) * 8.0 + g(rho + hr) * 8.0 - g(rho + 2.0 * hr)) / (12.0 * hr);
    let lhs = -(d2(&g, rho, hr) * rho * rho + d1 * (2.0 * rho) + g(rho) * 0.25);
    // F(x, y) = f(1/y) is independent of x
    let fy = |t: f64| g(1.0 / t);
    let hy = 1e-2 * y.min(1.0);
    let lap = -d2(&fy, y, hy) * (y * y);
    Ok((lhs - (lap - g(rho) * 0.25)).norm())
}
