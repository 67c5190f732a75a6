//! Test functions on the plane and the pairings built on them.
//!
//! [`GaussPoly`] is the exact representation: every operator with a closed
//! form (Euler operators, dilations, shears, shear averages, the symplectic
//! Fourier transform, Gaussian integrals) acts on it symbolically. Numeric
//! objects (Mellin slices, spectral windows, truncated automorphic pairings)
//! are built on top.

mod dist;
mod gauss;
mod pairing;
mod theta;
mod window;

use num_complex::Complex;
use num_rational::Rational64;
use thiserror::Error;

use crate::real::{cx, rpow, Real};

pub use dist::{pair_eis_dist, pair_hecke_dist, partial_fourier_inv, power_pairing, TAIL_DEGREE};
pub use gauss::{gauss_1d, moment_poly, GaussPoly, GaussTerm, Parity, Poly2};
pub use pairing::{
    coprime_sum, i_nm, pair_b, pair_b1, pair_b_scaled, pair_b_scaled_any, pair_bm_direct, pair_bm_kloosterman, pair_elementary,
    EulerImage, KloostermanParts, Pairing, ALPHA, BETA,
};
pub use theta::{theta, theta_phi, theta_s11, transfer_check, transfer_check_radial};
pub use window::{bihom_eval, mellin_slice, window_apply, window_point, GridFunction};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlaneError {
    #[error("quadratic form: {0}")]
    NotPositive(String),
    #[error("{0}")]
    Domain(String),
    #[error("not in the image of the Euler operator: {0}")]
    NotInImage(String),
    #[error("pole at {0}")]
    Pole(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error(transparent)]
    Spec(#[from] crate::specfun::SpecError),
    #[error(transparent)]
    Arith(#[from] crate::arith::ArithError),
    #[error(transparent)]
    Quad(#[from] crate::quad::QuadError),
}

pub type Result<T> = std::result::Result<T, PlaneError>;

/// `Phi_delta[nu, c](x, xi) = |xi|_delta^{-1-nu} e(c x / xi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiBlock<T: Real> {
    pub delta: u8,
    pub nu: Complex<T>,
    pub c: Rational64,
}

impl<T: Real> PhiBlock<T> {
    pub fn new(delta: u8, nu: Complex<T>, c: Rational64) -> Result<Self> {
        if delta > 1 {
            return Err(PlaneError::Domain(format!("parity must be 0 or 1, got {delta}")));
        }
        Ok(PhiBlock { delta, nu, c })
    }

    pub fn eval(&self, x: T, xi: T) -> Result<Complex<T>> {
        if xi == T::zero() {
            return Err(PlaneError::Domain("Phi block is singular on xi = 0".into()));
        }
        let c = T::int(*self.c.numer()) / T::int(*self.c.denom());
        let mag = rpow(xi.abs(), -self.nu - T::one());
        let sign = if self.delta == 1 && xi < T::zero() { -T::one() } else { T::one() };
        Ok(mag * sign * crate::real::e2pi(c * x / xi))
    }

    /// Multiplier of the shear average `p^{-r} sum_b tau[b p^{l-r}]`, the mean
    /// of `e(c b p^{l-r})`: `1` when `c p^{l-r}` is an integer, `0` when only
    /// `c p^l` is.
    pub fn sigma_avg(&self, r: u32, l: i64, p: u64) -> Complex<T> {
        let pi = p as i64;
        let e = l - r as i64;
        let mut v = self.c;
        if e >= 0 {
            v *= Rational64::from_integer(pi.pow(e as u32));
        } else {
            v /= Rational64::from_integer(pi.pow((-e) as u32));
        }
        if v.is_integer() {
            return cx(T::one(), T::zero());
        }
        let n = pi.pow(r);
        if (v * Rational64::from_integer(n)).is_integer() {
            return cx(T::zero(), T::zero());
        }
        let mut acc = cx(T::zero(), T::zero());
        for b in 0..n {
            let frac = (v * Rational64::from_integer(b)).fract();
            acc = acc + crate::real::root_of_unity::<T>(*frac.numer(), *frac.denom());
        }
        acc / T::int(n)
    }
}

/// Gaussian spectral window `exp(-pi N beta (lambda - lambda_center)^2)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SpectralWindow {
    pub lambda_center: f64,
    pub n: u32,
    pub beta: f64,
}

impl SpectralWindow {
    pub fn new(lambda_center: f64, n: u32, beta: f64) -> Result<Self> {
        if n < 1 || !(beta > 0.0) || !lambda_center.is_finite() {
            return Err(PlaneError::Domain(format!("window needs N >= 1 and beta > 0 (N={n}, beta={beta})")));
        }
        Ok(SpectralWindow { lambda_center, n, beta })
    }

    pub fn width(&self) -> f64 {
        self.n as f64 * self.beta
    }

    /// The multiplier on the `lambda`-slice.
    pub fn factor(&self, lambda: f64) -> f64 {
        let d = lambda - self.lambda_center;
        (-std::f64::consts::PI * self.width() * d * d).exp()
    }

    /// `Psi(t) = (N beta)^{-1/2} exp(-pi t^2 / N beta) e(lambda_center t)`.
    pub fn psi(&self, t: f64) -> Complex<f64> {
        let w = self.width();
        let amp = (-std::f64::consts::PI * t * t / w).exp() / w.sqrt();
        Complex::from_polar(amp, std::f64::consts::TAU * self.lambda_center * t)
    }
}
