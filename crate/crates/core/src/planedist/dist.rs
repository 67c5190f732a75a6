//! Pairings of test functions with the homogeneous Hecke and Eisenstein
//! distributions, through the partial inverse Fourier transform `F_1^{-1}`.

use num_complex::Complex;
use rayon::prelude::*;

use super::gauss::{moment_poly, GaussTerm, Poly2};
use super::{GaussPoly, PlaneError, Result};
use crate::arith::{divisor_sigma, phi_coeff, CharacterSpec};
use crate::quad::integrate;
use crate::real::{cx, re, rpow, Real};
use crate::specfun::zeta_c;

type C = Complex<f64>;

/// `(F_1^{-1} h)(y, t) = int h(x, t) e(x y) dx`, again a Gaussian polynomial in `(y, t)`.
pub fn partial_fourier_inv<T: Real>(h: &GaussPoly<T>) -> Result<GaussPoly<T>> {
    let ti = cx(T::zero(), T::TAU());
    let pi = re(T::PI());
    let mut out = Vec::new();
    for s in h.terms() {
        let [q11, q12, q22] = s.q;
        let two_q = q11 * T::c(2.0);
        // x-mean (B / 2 q11) with B = 2 i pi (u + y) - 2 q12 t
        let mux = Poly2::affine(ti * s.u / two_q, ti / two_q, -q12 * T::c(2.0) / two_q);
        let muy = Poly2::default();
        let mom = moment_poly(s.a, 0, &mux, &muy, [two_q.inv(), re(T::zero()), re(T::zero())]);
        let pref = s.coef * (pi / q11).sqrt() * (-pi * pi * s.u * s.u / q11).exp();
        let q = [pi * pi / q11, pi * cx(T::zero(), T::one()) * q12 / q11, q22 - q12 * q12 / q11];
        let u = pi * cx(T::zero(), T::one()) * s.u / q11;
        let v = s.v - s.u * q12 / q11;
        for (&(a, b), &c) in &mom.0 {
            out.push(GaussTerm::new(pref * c, a, b + s.b, q, u, v)?);
        }
    }
    GaussPoly::from_terms(out)
}

/// One-variable Gaussian polynomial `sum c t^b exp(-q t^2 + 2 i pi v t)`.
#[derive(Debug, Clone)]
struct Gauss1 {
    terms: Vec<(C, u32, C, C)>,
}

impl Gauss1 {
    /// `h(0, t)` for a function of `(y, t)`.
    fn slice_second(h: &GaussPoly<f64>) -> Self {
        Gauss1 { terms: h.terms().iter().filter(|s| s.a == 0).map(|s| (s.coef, s.b, s.q[2], s.v)).collect() }
    }

    /// `h(t, 0)`.
    fn slice_first(h: &GaussPoly<f64>) -> Self {
        Gauss1 { terms: h.terms().iter().filter(|s| s.b == 0).map(|s| (s.coef, s.a, s.q[0], s.u)).collect() }
    }

    fn eval(&self, t: f64) -> C {
        self.terms
            .iter()
            .map(|&(c, b, q, v)| c * t.powi(b as i32) * (-q * t * t + cx(0.0, std::f64::consts::TAU) * v * t).exp())
            .sum()
    }

    /// Taylor coefficients at 0 up to degree `n`.
    fn taylor(&self, n: usize) -> Vec<C> {
        let mut out = vec![C::new(0.0, 0.0); n + 1];
        for &(c, b, q, v) in &self.terms {
            // exp(w) with w = -q t^2 + beta t: e'_ = w' e
            let beta = cx(0.0, std::f64::consts::TAU) * v;
            let mut e = vec![C::new(0.0, 0.0); n + 1];
            e[0] = C::new(1.0, 0.0);
            for k in 0..n {
                // (k+1) e_{k+1} = beta e_k - 2 q e_{k-1}
                let mut acc = beta * e[k];
                if k >= 1 {
                    acc -= q * 2.0 * e[k - 1];
                }
                e[k + 1] = acc / (k as f64 + 1.0);
            }
            for j in 0..=n {
                if j + b as usize <= n {
                    out[j + b as usize] += c * e[j];
                }
            }
        }
        out
    }
}

const T0: f64 = 0.25;

/// Finite part of `int |t|^mu g(t) dt`, defined for `mu != -1, -3, -5, ...`.
///
/// The Taylor terms of `g` at the origin whose integral diverges are removed
/// on `|t| < 1` and added back as `2 g_j / (mu + j + 1)` (odd `j` cancel).
fn finite_part(mu: C, g: &Gauss1) -> Result<C> {
    let need = if mu.re > -1.0 { 0 } else { (-mu.re - 1.0).floor() as usize + 1 };
    for j in (0..need).step_by(2) {
        if (mu + j as f64 + 1.0).norm() < 1e-12 {
            return Err(PlaneError::Pole(format!("|t|^mu with mu = {mu}")));
        }
    }
    let order = need + 60;
    let tay = g.taylor(order);
    let even = |t: f64| g.eval(t) + g.eval(-t);
    let sub = |t: f64| {
        let mut p = C::new(0.0, 0.0);
        for j in (0..need).step_by(2) {
            p += tay[j] * 2.0 * t.powi(j as i32);
        }
        p
    };
    // |t| < T0: remaining Taylor terms integrated exactly
    let mut acc = C::new(0.0, 0.0);
    for j in (need..=order).filter(|j| j % 2 == 0) {
        let e = mu + j as f64 + 1.0;
        acc += tay[j] * 2.0 * rpow(T0, e) / e;
    }
    // T0 <= t <= 1 and t >= 1, in s = ln t
    let w = |s: f64| {
        let t = s.exp();
        (even(t) - sub(t)) * rpow(t, mu + 1.0)
    };
    acc += integrate(w, T0.ln(), 0.0, 1e-14, 1e-12)?.value;
    let w2 = |s: f64| {
        let t = s.exp();
        even(t) * rpow(t, mu + 1.0)
    };
    let mut a = 0.0;
    while a < 5.0 {
        acc += integrate(w2, a, a + 0.5, 1e-15, 1e-12)?.value;
        a += 0.5;
    }
    // divergent Taylor terms over |t| < 1, continued analytically
    for j in (0..need).step_by(2) {
        acc += tay[j] * 2.0 / (mu + j as f64 + 1.0);
    }
    Ok(acc)
}

/// Finite part of `int |t|^mu h(0, t) dt` for `h` given as a function of `(y, t)`.
pub fn power_pairing(mu: C, h: &GaussPoly<f64>) -> Result<C> {
    finite_part(mu, &Gauss1::slice_second(h))
}

/// `int |t|^mu G(k/t, t) dt` for `k != 0`, in `t = +-e^s`.
fn hyperbola_integral(mu: C, g: &GaussPoly<f64>, k: f64) -> Result<C> {
    let w = |s: f64| {
        let t = s.exp();
        (g.eval(k / t, t) + g.eval(-k / t, -t)) * rpow(t, mu + 1.0)
    };
    let centre = 0.5 * k.abs().ln();
    let mut acc = C::new(0.0, 0.0);
    let mut a = centre - 6.0;
    while a < centre + 6.0 {
        acc += integrate(w, a, a + 0.5, 1e-16, 1e-12)?.value;
        a += 0.5;
    }
    Ok(acc)
}

/// `<E_nu, h>` truncated to `0 < |k| <= k_max`.
pub fn pair_eis_dist(nu: C, h: &GaussPoly<f64>, k_max: i64) -> Result<C> {
    for p in [-1.0, 0.0, 1.0] {
        if (nu - p).norm() < 1e-12 {
            return Err(PlaneError::Pole(format!("Eisenstein distribution at nu = {p}")));
        }
    }
    let g = partial_fourier_inv(h)?;
    let one = C::new(1.0, 0.0);
    let mut acc = zeta_c(-nu)? * finite_part(-nu - one, &Gauss1::slice_second(&g))?;
    acc += zeta_c(one - nu)? * finite_part(-nu, &Gauss1::slice_first(h))?;
    let ks: Vec<i64> = (1..=k_max).collect();
    let parts: Vec<C> = ks
        .par_iter()
        .map(|&k| -> Result<C> {
            let s = divisor_sigma(nu, k)?;
            let kf = k as f64;
            Ok(s * (hyperbola_integral(-nu - one, &g, kf)? + hyperbola_integral(-nu - one, &g, -kf)?))
        })
        .collect::<Result<_>>()?;
    Ok(acc + parts.into_iter().sum::<C>())
}

/// Degree of the majorant `|G(k/t, t)| <= C (k^2/t^2 + t^2)^{-A}` used for tails.
pub const TAIL_DEGREE: f64 = 4.0;

/// `(1/4) sum_{0 < |k| <= k_max} phi(k) int |t|^{-1-i lambda} (F_1^{-1} h)(k/t, t) dt`,
/// with a bound on the omitted `|k| > k_max`.
pub fn pair_hecke_dist(ch: &CharacterSpec<f64>, h: &GaussPoly<f64>, k_max: i64) -> Result<(C, f64)> {
    let g = partial_fourier_inv(h)?;
    let mu = C::new(-1.0, -ch.lambda);
    let ks: Vec<i64> = (1..=k_max).flat_map(|k| [k, -k]).collect();
    let parts: Vec<C> = ks
        .par_iter()
        .map(|&k| -> Result<C> { Ok(phi_coeff(ch, k)? * hyperbola_integral(mu, &g, k as f64)?) })
        .collect::<Result<_>>()?;
    let value = parts.into_iter().sum::<C>() * 0.25;

    // majorant constant sampled along the hyperbolas already used
    let a = TAIL_DEGREE;
    let mut c_fit = 0.0f64;
    for k in 1..=k_max.max(1) {
        let kf = k as f64;
        for i in -60..=60 {
            let t = (0.5 * kf.ln() + i as f64 * 0.1).exp();
            let r = (kf * kf / (t * t) + t * t).powf(a);
            for sgn in [1.0, -1.0] {
                c_fit = c_fit.max(g.eval(sgn * kf / t, sgn * t).norm() * r);
            }
        }
    }
    // int (k^2/t^2 + t^2)^{-A} dt = k^{1/2 - A} c_a
    let c_a = 2.0 * integrate(|u: f64| C::new(u.powf(2.0 * a) / (1.0 + u.powi(4)).powf(a), 0.0), 0.0, 50.0, 1e-14, 1e-12)?.value.re;
    // |phi(k)| <= 2 d(k) k^vartheta <= 4 k^{1/2 + vartheta}
    let vartheta = ch
        .theta
        .iter()
        .map(|(&p, th)| (th.norm().max(1.0 / th.norm())).ln() / (p as f64).ln())
        .fold(0.0f64, f64::max);
    let expo = a - 1.0 - vartheta;
    let tail = if expo > 1.0 {
        let kf = k_max.max(1) as f64;
        0.25 * 2.0 * c_fit * c_a * 4.0 * kf.powf(1.0 - expo) / (expo - 1.0)
    } else {
        f64::INFINITY
    };
    Ok((value, tail))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> GaussPoly<f64> {
        let q = [C::new(1.2, 0.1), C::new(0.3, 0.0), C::new(0.9, -0.2)];
        GaussPoly::from_terms(vec![
            GaussTerm::new(C::new(1.0, 0.2), 2, 1, q, C::new(0.1, 0.0), C::new(-0.2, 0.0)).unwrap(),
            GaussTerm::new(C::new(0.5, 0.0), 0, 0, q, C::new(0.0, 0.0), C::new(0.0, 0.0)).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn partial_fourier_matches_quadrature() {
        let h = sample();
        let g = partial_fourier_inv(&h).unwrap();
        for &(y, t) in &[(0.3, -0.4), (-1.1, 0.8)] {
            let f = |x: f64| h.eval(x, t) * crate::real::e2pi(x * y);
            let want = integrate(f, -12.0, 12.0, 1e-15, 1e-13).unwrap().value;
            assert!((g.eval(y, t) - want).norm() < 1e-11);
        }
    }

    #[test]
    fn finite_part_convergent_case() {
        // int |t|^{-1/2} exp(-pi t^2) dt = pi^{-1/4} Gamma(1/4)
        let g = Gauss1 { terms: vec![(C::new(1.0, 0.0), 0, C::new(std::f64::consts::PI, 0.0), C::new(0.0, 0.0))] };
        let got = finite_part(C::new(-0.5, 0.0), &g).unwrap();
        let want = std::f64::consts::PI.powf(-0.25) * 3.625_609_908_221_908;
        assert!((got.re - want).abs() < 1e-10, "{got}");
    }

    #[test]
    fn finite_part_continues_gamma() {
        // finite part of int |t|^mu exp(-pi t^2) = pi^{-(mu+1)/2} Gamma((mu+1)/2) for mu = -1.6
        let g = Gauss1 { terms: vec![(C::new(1.0, 0.0), 0, C::new(std::f64::consts::PI, 0.0), C::new(0.0, 0.0))] };
        let mu = C::new(-1.6, 0.7);
        let got = finite_part(mu, &g).unwrap();
        let s = (mu + 1.0) * 0.5;
        let want = rpow(std::f64::consts::PI, -s) * crate::specfun::gamma_c(s).unwrap();
        assert!((got - want).norm() < 1e-9, "{got} {want}");
        assert!(finite_part(C::new(-1.0, 0.0), &g).is_err());
    }

    #[test]
    fn hecke_pairing_is_homogeneous() {
        let ch = CharacterSpec::trivial(0, 3.0, 50);
        let h = sample();
        let (a, _) = pair_hecke_dist(&ch, &h, 12).unwrap();
        let t = 1.3;
        let (b, _) = pair_hecke_dist(&ch, &h.dilate(t).unwrap(), 12).unwrap();
        let want = a * rpow(t, C::new(0.0, ch.lambda));
        assert!((b - want).norm() < 1e-8 * a.norm().max(1.0), "{b} {want}");
    }
}
