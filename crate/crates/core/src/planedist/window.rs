//! Mellin slices along rays, spectral windows in the Euler operator, and the
//! bihomogeneous functions.

use num_complex::Complex;
use rayon::prelude::*;

use super::{GaussPoly, PlaneError, Result, SpectralWindow};
use crate::quad::integrate;
use crate::real::rpow;

type C = Complex<f64>;

const S0: f64 = -20.0;

/// Smallest eigenvalue of `Re Q` over the terms, which sets the decay along rays.
fn min_decay(h: &GaussPoly<f64>) -> f64 {
    h.terms()
        .iter()
        .map(|t| {
            let (a, b, c) = (t.q[0].re, t.q[1].re, t.q[2].re);
            let m = 0.5 * (a + c);
            let d = (0.25 * (a - c) * (a - c) + b * b).sqrt();
            m - d
        })
        .fold(f64::INFINITY, f64::min)
}

/// `h_{i lambda}(x, xi) = (1/2 pi) int_0^inf theta^{i lambda} h(theta x, theta xi) dtheta`.
///
/// Integrated in `s = ln theta` on `[-20, S1]`; below `-20` the integrand is
/// replaced by its limit `h(0,0) e^{(1 + i lambda) s}`.
pub fn mellin_slice(h: &GaussPoly<f64>, lambda: f64, x: f64, xi: f64) -> Result<C> {
    let r2 = x * x + xi * xi;
    if r2 == 0.0 {
        return Err(PlaneError::Domain("Mellin slice is undefined at the origin".into()));
    }
    if h.is_zero() {
        return Ok(C::new(0.0, 0.0));
    }
    let e = C::new(1.0, lambda);
    // exp(-k theta^2 r^2) < 1e-30 beyond theta_max
    let theta_max = (70.0 / (min_decay(h) * r2)).sqrt();
    let s1 = theta_max.ln().max(S0 + 1.0);
    let f = |s: f64| {
        let t = s.exp();
        h.eval(t * x, t * xi) * (e * s).exp()
    };
    let mut acc = h.eval(0.0, 0.0) * (e * S0).exp() / e;
    let steps = ((s1 - S0) / 0.5).ceil() as usize;
    let step = (s1 - S0) / steps as f64;
    for j in 0..steps {
        let a = S0 + j as f64 * step;
        acc += integrate(f, a, a + step, 1e-15, 1e-11)?.value;
    }
    Ok(acc / std::f64::consts::TAU)
}

/// `int Psi_N(t) F(e^{2 pi t} x, e^{2 pi t} xi) e^{2 pi t} dt` for a point evaluator `F`.
pub fn window_point<F>(w: &SpectralWindow, f: &F, x: f64, xi: f64) -> Result<C>
where
    F: Fn(f64, f64) -> Result<C> + Sync,
{
    let width = w.width();
    // Gaussian weight below 1e-16 outside |t| <= reach
    let reach = (width * 37.0 / std::f64::consts::PI).sqrt();
    let steps = (2.0 * reach / 0.25).ceil() as usize;
    let step = 2.0 * reach / steps as f64;
    let err = std::sync::Mutex::new(None);
    let g = |t: f64| {
        let s = (std::f64::consts::TAU * t).exp();
        match f(s * x, s * xi) {
            Ok(v) => w.psi(t) * v * s,
            Err(e) => {
                err.lock().unwrap().get_or_insert(e);
                C::new(0.0, 0.0)
            }
        }
    };
    let mut acc = C::new(0.0, 0.0);
    for j in 0..steps {
        let a = -reach + j as f64 * step;
        acc += integrate(g, a, a + step, 1e-13, 1e-10)?.value;
    }
    if let Some(e) = err.into_inner().unwrap() {
        return Err(e);
    }
    Ok(acc)
}

/// Samples of a function on `[-L, L]^2`, optionally with the bands
/// `|x| < eps0`, `|xi| < eps0` removed.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GridFunction {
    pub half_width: f64,
    pub n: usize,
    pub eps0: f64,
    /// Order of the finite-difference stencils used on the samples.
    pub fd_order: usize,
    pub points: Vec<(f64, f64)>,
    pub values: Vec<C>,
}

impl GridFunction {
    /// `n x n` uniform grid, dropping points inside the axis bands.
    pub fn sample<F>(half_width: f64, n: usize, eps0: f64, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> Result<C> + Sync,
    {
        if n < 2 || !(half_width > 0.0) || eps0 < 0.0 {
            return Err(PlaneError::Domain("grid needs n >= 2, L > 0, eps0 >= 0".into()));
        }
        let h = 2.0 * half_width / (n - 1) as f64;
        let mut points = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let (x, xi) = (-half_width + i as f64 * h, -half_width + j as f64 * h);
                if eps0 > 0.0 && (x.abs() < eps0 || xi.abs() < eps0) {
                    continue;
                }
                points.push((x, xi));
            }
        }
        let values = points.par_iter().map(|&(x, xi)| f(x, xi)).collect::<Result<Vec<_>>>()?;
        Ok(GridFunction { half_width, n, eps0, fd_order: 4, points, values })
    }

    /// The canonical member `exp(-(x^2 + x^{-2} + xi^2 + xi^{-2}))` of the
    /// class vanishing to infinite order on the axes.
    pub fn canonical_s_times(half_width: f64, n: usize, eps0: f64) -> Result<Self> {
        Self::sample(half_width, n, eps0.max(1e-3), |x, xi| {
            Ok(C::new((-(x * x + 1.0 / (x * x) + xi * xi + 1.0 / (xi * xi))).exp(), 0.0))
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// The windowed function `Phi_N(-2 i pi E) h` sampled on a grid.
pub fn window_apply(w: &SpectralWindow, h: &GaussPoly<f64>, half_width: f64, n: usize) -> Result<GridFunction> {
    let f = |x: f64, xi: f64| Ok(h.eval(x, xi));
    GridFunction::sample(half_width, n, 0.0, |x, xi| window_point(w, &f, x, xi))
}

/// `|x|_delta^{(rho + nu - 2)/2} |xi|_delta^{(-rho + nu)/2}`, where
/// `|x|_delta^s = |x|^s sign(x)^delta`.
pub fn bihom_eval(rho: C, nu: C, delta: u8, x: f64, xi: f64) -> Result<C> {
    if x == 0.0 || xi == 0.0 {
        return Err(PlaneError::Domain("bihomogeneous functions are singular on the axes".into()));
    }
    if delta > 1 {
        return Err(PlaneError::Domain(format!("parity must be 0 or 1, got {delta}")));
    }
    let a = rpow(x.abs(), (rho + nu - 2.0) * 0.5);
    let b = rpow(xi.abs(), (-rho + nu) * 0.5);
    let sign = if delta == 1 && (x < 0.0) != (xi < 0.0) { -1.0 } else { 1.0 };
    Ok(a * b * sign)
}
