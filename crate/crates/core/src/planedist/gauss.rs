//! Gaussian polynomials `sum c x^a xi^b exp(-Q(x,xi) + 2 i pi (u x + v xi))` and
//! the operators that act on them in closed form.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Zero;

use super::{PlaneError, Result};
use crate::real::{cx, re, Real};

/// Parity under `(x, xi) -> (-x, -xi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Parity {
    Even,
    Odd,
    None,
}

/// One term `coef * x^a * xi^b * exp(-Q(x,xi) + 2 i pi (u x + v xi))` with
/// `Q(x,xi) = q[0] x^2 + 2 q[1] x xi + q[2] xi^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussTerm<T: Real> {
    pub coef: Complex<T>,
    pub a: u32,
    pub b: u32,
    pub q: [Complex<T>; 3],
    pub u: Complex<T>,
    pub v: Complex<T>,
}

fn same_gaussian<T: Real>(s: &GaussTerm<T>, t: &GaussTerm<T>) -> bool {
    s.q == t.q && s.u == t.u && s.v == t.v
}

impl<T: Real> GaussTerm<T> {
    pub fn new(coef: Complex<T>, a: u32, b: u32, q: [Complex<T>; 3], u: Complex<T>, v: Complex<T>) -> Result<Self> {
        let t = GaussTerm { coef, a, b, q, u, v };
        t.check()?;
        Ok(t)
    }

    fn check(&self) -> Result<()> {
        let [p, r, s] = [self.q[0].re, self.q[1].re, self.q[2].re];
        if !(p > T::zero() && p * s - r * r > T::zero()) {
            return Err(PlaneError::NotPositive(format!(
                "real part of Q = [{}, {}, {}] is not positive definite",
                p.f64(),
                r.f64(),
                s.f64()
            )));
        }
        Ok(())
    }

    pub fn eval(&self, x: T, xi: T) -> Complex<T> {
        let (xc, xic) = (re(x), re(xi));
        let quad = self.q[0] * x * x + self.q[1] * x * xi * T::c(2.0) + self.q[2] * xi * xi;
        let lin = (self.u * xc + self.v * xic) * cx(T::zero(), T::TAU());
        self.coef * x.powi(self.a as i32) * xi.powi(self.b as i32) * (lin - quad).exp()
    }

    fn with_monomial(&self, coef: Complex<T>, a: u32, b: u32) -> Self {
        GaussTerm { coef, a, b, ..*self }
    }

    fn parity(&self) -> Parity {
        if !self.u.is_zero() || !self.v.is_zero() {
            Parity::None
        } else if (self.a + self.b) % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Finite sum of [`GaussTerm`]s.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussPoly<T: Real> {
    terms: Vec<GaussTerm<T>>,
}

impl<T: Real> Default for GaussPoly<T> {
    fn default() -> Self {
        GaussPoly { terms: Vec::new() }
    }
}

impl<T: Real> GaussPoly<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Sum of validated terms; like terms are merged and zeros dropped.
    pub fn from_terms(terms: Vec<GaussTerm<T>>) -> Result<Self> {
        for t in &terms {
            t.check()?;
        }
        Ok(Self::collect(terms))
    }

    fn collect(terms: Vec<GaussTerm<T>>) -> Self {
        let mut out: Vec<GaussTerm<T>> = Vec::with_capacity(terms.len());
        for t in terms {
            if let Some(s) = out.iter_mut().find(|s| s.a == t.a && s.b == t.b && same_gaussian(s, &t)) {
                s.coef = s.coef + t.coef;
            } else {
                out.push(t);
            }
        }
        out.retain(|t| !t.coef.is_zero());
        GaussPoly { terms: out }
    }

    /// `exp(-pi (x^2 + xi^2))`.
    pub fn standard() -> Self {
        let pi = re(T::PI());
        Self::gaussian([pi, re(T::zero()), pi])
    }

    /// `exp(-Q)` for a valid form.
    pub fn gaussian(q: [Complex<T>; 3]) -> Self {
        Self::from_terms(vec![GaussTerm { coef: re(T::one()), a: 0, b: 0, q, u: re(T::zero()), v: re(T::zero()) }])
            .expect("gaussian() needs a positive definite form")
    }

    /// `exp(-pi (a x^2 + 2 b x xi + c xi^2))` with real coefficients.
    pub fn real_gaussian(a: T, b: T, c: T) -> Result<Self> {
        let pi = T::PI();
        Self::from_terms(vec![GaussTerm {
            coef: re(T::one()),
            a: 0,
            b: 0,
            q: [re(pi * a), re(pi * b), re(pi * c)],
            u: re(T::zero()),
            v: re(T::zero()),
        }])
    }

    /// The kernel `exp(-pi |x - z xi|^2 / Im z)` of the Theta transform.
    pub fn theta_kernel(z: Complex<T>) -> Result<Self> {
        if !(z.im > T::zero()) {
            return Err(PlaneError::Domain(format!("Im z must be positive, got {}", z.im.f64())));
        }
        let k = T::PI() / z.im;
        Ok(Self::gaussian([re(k), re(-k * z.re), re(k * z.norm_sqr())]))
    }

    pub fn terms(&self) -> &[GaussTerm<T>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: T, xi: T) -> Complex<T> {
        self.terms.iter().fold(re(T::zero()), |acc, t| acc + t.eval(x, xi))
    }

    pub fn parity(&self) -> Parity {
        let mut it = self.terms.iter().map(|t| t.parity());
        let Some(first) = it.next() else { return Parity::Even };
        if it.all(|p| p == first) {
            first
        } else {
            Parity::None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut t = self.terms.clone();
        t.extend(other.terms.iter().copied());
        Self::collect(t)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self::collect(self.terms.iter().map(|t| GaussTerm { coef: t.coef * c, ..*t }).collect())
    }

    /// Multiply by the polynomial `sum p[(a,b)] x^a xi^b`.
    pub fn mul_poly(&self, p: &Poly2<T>) -> Self {
        let mut out = Vec::new();
        for t in &self.terms {
            for (&(a, b), &c) in &p.0 {
                out.push(t.with_monomial(t.coef * c, t.a + a, t.b + b));
            }
        }
        Self::collect(out)
    }

    /// Pointwise complex conjugate.
    pub fn conj(&self) -> Self {
        Self::collect(
            self.terms
                .iter()
                .map(|t| GaussTerm {
                    coef: t.coef.conj(),
                    q: [t.q[0].conj(), t.q[1].conj(), t.q[2].conj()],
                    u: -t.u.conj(),
                    v: -t.v.conj(),
                    ..*t
                })
                .collect(),
        )
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        for s in &self.terms {
            for t in &other.terms {
                out.push(GaussTerm {
                    coef: s.coef * t.coef,
                    a: s.a + t.a,
                    b: s.b + t.b,
                    q: [s.q[0] + t.q[0], s.q[1] + t.q[1], s.q[2] + t.q[2]],
                    u: s.u + t.u,
                    v: s.v + t.v,
                });
            }
        }
        Self::collect(out)
    }

    /// `x d/dx + xi d/dxi + 1`.
    pub fn euler(&self) -> Self {
        let two = T::c(2.0);
        let ti = cx(T::zero(), T::TAU());
        let mut out = Vec::new();
        for t in &self.terms {
            let (a, b) = (t.a, t.b);
            out.push(t.with_monomial(t.coef * T::int((a + b + 1) as i64), a, b));
            out.push(t.with_monomial(-t.coef * t.q[0] * two, a + 2, b));
            out.push(t.with_monomial(-t.coef * t.q[1] * T::c(4.0), a + 1, b + 1));
            out.push(t.with_monomial(-t.coef * t.q[2] * two, a, b + 2));
            out.push(t.with_monomial(t.coef * t.u * ti, a + 1, b));
            out.push(t.with_monomial(t.coef * t.v * ti, a, b + 1));
        }
        Self::collect(out)
    }

    /// `x d/dx - xi d/dxi`.
    pub fn euler_natural(&self) -> Self {
        let two = T::c(2.0);
        let ti = cx(T::zero(), T::TAU());
        let mut out = Vec::new();
        for t in &self.terms {
            let (a, b) = (t.a, t.b);
            out.push(t.with_monomial(t.coef * (T::int(a as i64) - T::int(b as i64)), a, b));
            out.push(t.with_monomial(-t.coef * t.q[0] * two, a + 2, b));
            out.push(t.with_monomial(t.coef * t.q[2] * two, a, b + 2));
            out.push(t.with_monomial(t.coef * t.u * ti, a + 1, b));
            out.push(t.with_monomial(-t.coef * t.v * ti, a, b + 1));
        }
        Self::collect(out)
    }

    /// `pi^2 E^2 = -(1/4) (2 i pi E)^2`.
    pub fn pi2_e2(&self) -> Self {
        self.euler().euler().scale(re(T::c(-0.25)))
    }

    /// Partial derivative in `xi`.
    pub fn d_xi(&self) -> Self {
        let two = T::c(2.0);
        let ti = cx(T::zero(), T::TAU());
        let mut out = Vec::new();
        for t in &self.terms {
            let (a, b) = (t.a, t.b);
            if b > 0 {
                out.push(t.with_monomial(t.coef * T::int(b as i64), a, b - 1));
            }
            out.push(t.with_monomial(-t.coef * t.q[1] * two, a + 1, b));
            out.push(t.with_monomial(-t.coef * t.q[2] * two, a, b + 1));
            out.push(t.with_monomial(t.coef * t.v * ti, a, b));
        }
        Self::collect(out)
    }

    /// Partial derivative in `x`.
    pub fn d_x(&self) -> Self {
        let two = T::c(2.0);
        let ti = cx(T::zero(), T::TAU());
        let mut out = Vec::new();
        for t in &self.terms {
            let (a, b) = (t.a, t.b);
            if a > 0 {
                out.push(t.with_monomial(t.coef * T::int(a as i64), a - 1, b));
            }
            out.push(t.with_monomial(-t.coef * t.q[0] * two, a + 1, b));
            out.push(t.with_monomial(-t.coef * t.q[1] * two, a, b + 1));
            out.push(t.with_monomial(t.coef * t.u * ti, a, b));
        }
        Self::collect(out)
    }

    /// `(t^{2 i pi E} h)(x, xi) = t h(t x, t xi)`.
    pub fn dilate(&self, t: T) -> Result<Self> {
        if !(t > T::zero()) {
            return Err(PlaneError::Domain("dilation parameter must be positive".into()));
        }
        let t2 = t * t;
        Ok(Self::collect(
            self.terms
                .iter()
                .map(|s| GaussTerm {
                    coef: s.coef * t.powi((1 + s.a + s.b) as i32),
                    q: [s.q[0] * t2, s.q[1] * t2, s.q[2] * t2],
                    u: s.u * t,
                    v: s.v * t,
                    ..*s
                })
                .collect(),
        ))
    }

    /// `(t^{2 i pi E^natural} h)(x, xi) = h(t x, xi / t)`.
    pub fn dilate_natural(&self, t: T) -> Result<Self> {
        if !(t > T::zero()) {
            return Err(PlaneError::Domain("dilation parameter must be positive".into()));
        }
        let t2 = t * t;
        Ok(Self::collect(
            self.terms
                .iter()
                .map(|s| GaussTerm {
                    coef: s.coef * t.powi(s.a as i32 - s.b as i32),
                    q: [s.q[0] * t2, s.q[1], s.q[2] / t2],
                    u: s.u * t,
                    v: s.v / t,
                    ..*s
                })
                .collect(),
        ))
    }

    /// `(tau[gamma] h)(x, xi) = h(x + gamma xi, xi)`.
    pub fn shear(&self, gamma: T) -> Self {
        let mut out = Vec::new();
        for s in &self.terms {
            let q = [s.q[0], s.q[1] + s.q[0] * gamma, s.q[2] + s.q[1] * gamma * T::c(2.0) + s.q[0] * gamma * gamma];
            let v = s.v + s.u * gamma;
            // (x + gamma xi)^a = sum_j C(a,j) x^j (gamma xi)^(a-j)
            let mut binom = T::one();
            for j in (0..=s.a).rev() {
                let k = s.a - j;
                out.push(GaussTerm { coef: s.coef * binom * gamma.powi(k as i32), a: j, b: s.b + k, q, u: s.u, v });
                binom = binom * T::int(j as i64) / T::int(k as i64 + 1);
            }
        }
        Self::collect(out)
    }

    /// `p^{-r} sum_{b < p^r} tau[b p^{l-r}] h`.
    pub fn sigma_avg(&self, r: u32, l: i64, p: u64) -> Self {
        let count = p.pow(r);
        let step = T::int(p as i64).powi((l - r as i64) as i32);
        let mut acc = Vec::new();
        let w = re(T::one() / T::int(count as i64));
        for b in 0..count {
            acc.extend(self.shear(T::int(b as i64) * step).scale(w).terms);
        }
        Self::collect(acc)
    }

    /// `int int h(y, eta) exp(2 i pi (x eta - y xi)) dy deta` in closed form.
    pub fn symp_fourier(&self) -> Self {
        let ti = cx(T::zero(), T::TAU());
        let mut out = Vec::new();
        for s in &self.terms {
            let m = Mat2::from_q(&s.q);
            let mi = m.inv();
            // J(x, xi) = J0 + L (x, xi) with L = 2 i pi [[0, -1], [1, 0]]
            let j0 = [s.u * ti, s.v * ti];
            let l = [[re(T::zero()), -ti], [ti, re(T::zero())]];
            // L^T M^{-1} L and L^T M^{-1} J0
            let mil = mi.mul_raw(&l);
            let lt = [[l[0][0], l[1][0]], [l[0][1], l[1][1]]];
            let ltmil = mat_mul(&lt, &mil);
            let mij0 = mi.apply(j0);
            let ltmij0 = [lt[0][0] * mij0[0] + lt[0][1] * mij0[1], lt[1][0] * mij0[0] + lt[1][1] * mij0[1]];
            let quarter = T::c(0.25);
            let q_out = [-ltmil[0][0] * quarter, -(ltmil[0][1] + ltmil[1][0]) * quarter * T::c(0.5), -ltmil[1][1] * quarter];
            let u_out = ltmij0[0] * T::c(0.5) / ti;
            let v_out = ltmij0[1] * T::c(0.5) / ti;
            let c0 = (j0[0] * mij0[0] + j0[1] * mij0[1]) * quarter;
            let pref = m.gauss_prefactor() * c0.exp() * s.coef;
            // mean = (1/2) M^{-1} (J0 + L w), affine in w = (x, xi)
            let half = T::c(0.5);
            let mux = Poly2::affine(mij0[0] * half, mil[0][0] * half, mil[0][1] * half);
            let muxi = Poly2::affine(mij0[1] * half, mil[1][0] * half, mil[1][1] * half);
            let cov = [mi.0[0][0] * half, mi.0[0][1] * half, mi.0[1][1] * half];
            let mom = moment_poly(s.a, s.b, &mux, &muxi, cov);
            for (&(a, b), &c) in &mom.0 {
                out.push(GaussTerm { coef: pref * c, a, b, q: q_out, u: u_out, v: v_out });
            }
        }
        Self::collect(out)
    }

    /// Bilinear integral `int int h(x, xi) dx dxi`.
    pub fn integral(&self) -> Complex<T> {
        let ti = cx(T::zero(), T::TAU());
        let mut acc = re(T::zero());
        for s in &self.terms {
            let m = Mat2::from_q(&s.q);
            let mi = m.inv();
            let j = [s.u * ti, s.v * ti];
            let mij = mi.apply(j);
            let half = T::c(0.5);
            let expo = (j[0] * mij[0] + j[1] * mij[1]) * T::c(0.25);
            let mux = Poly2::constant(mij[0] * half);
            let muxi = Poly2::constant(mij[1] * half);
            let cov = [mi.0[0][0] * half, mi.0[0][1] * half, mi.0[1][1] * half];
            let mom = moment_poly(s.a, s.b, &mux, &muxi, cov);
            acc = acc + s.coef * m.gauss_prefactor() * expo.exp() * mom.constant_term();
        }
        acc
    }

    /// `int int |h|^2`.
    pub fn l2_norm_sq(&self) -> T {
        self.mul(&self.conj()).integral().re
    }

    /// `int h(x0 + dx t, xi0 + dxi t) e(freq t) dt` in closed form.
    pub fn line_integral(&self, x0: T, dx: T, xi0: T, dxi: T, freq: T) -> Complex<T> {
        let ti = cx(T::zero(), T::TAU());
        let two = T::c(2.0);
        let mut acc = re(T::zero());
        for s in &self.terms {
            let big_a = s.q[0] * dx * dx + s.q[1] * dx * dxi * two + s.q[2] * dxi * dxi;
            let bq = s.q[0] * dx * x0 + s.q[1] * (dx * xi0 + dxi * x0) + s.q[2] * dxi * xi0;
            let cq = s.q[0] * x0 * x0 + s.q[1] * x0 * xi0 * two + s.q[2] * xi0 * xi0;
            let big_b = -bq * two + (s.u * dx + s.v * dxi + re(freq)) * ti;
            let c0 = -cq + (s.u * x0 + s.v * xi0) * ti;
            // polynomial in s = t - mu, centred at the Gaussian mean to avoid cancellation
            let mu = big_b / (big_a * two);
            let px = binomial_poly(re(x0) + mu * dx, re(dx), s.a);
            let pxi = binomial_poly(re(xi0) + mu * dxi, re(dxi), s.b);
            let poly = poly_mul(&px, &pxi);
            acc = acc + s.coef * gauss_1d_centred(&poly, big_a, big_b, c0);
        }
        acc
    }
}

/// `int P(t) exp(-A t^2 + B t + C) dt` for `Re A > 0`.
pub fn gauss_1d<T: Real>(poly: &[Complex<T>], a: Complex<T>, b: Complex<T>, c: Complex<T>) -> Complex<T> {
    let mu = b / (a * T::c(2.0));
    let var = (a * T::c(2.0)).inv();
    let mut m_prev = re(T::zero());
    let mut m_cur = re(T::one());
    let mut acc = re(T::zero());
    for (k, &p) in poly.iter().enumerate() {
        acc = acc + p * m_cur;
        let next = mu * m_cur + var * m_prev * T::int(k as i64);
        m_prev = m_cur;
        m_cur = next;
    }
    let pref = (re(T::PI()) / a).sqrt();
    pref * (c + b * b / (a * T::c(4.0))).exp() * acc
}

/// As [`gauss_1d`] with `P` given in powers of `t - B / 2A`.
fn gauss_1d_centred<T: Real>(poly: &[Complex<T>], a: Complex<T>, b: Complex<T>, c: Complex<T>) -> Complex<T> {
    let var = (a * T::c(2.0)).inv();
    let mut m = re(T::one());
    let mut acc = re(T::zero());
    for (k, &p) in poly.iter().enumerate().step_by(2) {
        acc = acc + p * m;
        m = m * var * T::int(k as i64 + 1);
    }
    let pref = (re(T::PI()) / a).sqrt();
    pref * (c + b * b / (a * T::c(4.0))).exp() * acc
}

fn binomial_poly<T: Real>(c0: Complex<T>, c1: Complex<T>, n: u32) -> Vec<Complex<T>> {
    let mut p = vec![re(T::one())];
    for _ in 0..n {
        let mut q = vec![re(T::zero()); p.len() + 1];
        for (i, &v) in p.iter().enumerate() {
            q[i] = q[i] + v * c0;
            q[i + 1] = q[i + 1] + v * c1;
        }
        p = q;
    }
    p
}

fn poly_mul<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut out = vec![re(T::zero()); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = out[i + j] + x * y;
        }
    }
    out
}

/// Polynomial in `(x, xi)` with complex coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly2<T: Real>(pub BTreeMap<(u32, u32), Complex<T>>);

impl<T: Real> Poly2<T> {
    pub fn constant(c: Complex<T>) -> Self {
        let mut m = BTreeMap::new();
        m.insert((0, 0), c);
        Poly2(m)
    }

    pub fn monomial(c: Complex<T>, a: u32, b: u32) -> Self {
        let mut m = BTreeMap::new();
        m.insert((a, b), c);
        Poly2(m)
    }

    /// `c0 + cx x + cxi xi`.
    pub fn affine(c0: Complex<T>, cx_: Complex<T>, cxi: Complex<T>) -> Self {
        let mut m = BTreeMap::new();
        m.insert((0, 0), c0);
        m.insert((1, 0), cx_);
        m.insert((0, 1), cxi);
        Poly2(m)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut m = self.0.clone();
        for (&k, &v) in &o.0 {
            let e = m.entry(k).or_insert_with(|| re(T::zero()));
            *e = *e + v;
        }
        Poly2(m)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Poly2(self.0.iter().map(|(&k, &v)| (k, v * c)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut m: BTreeMap<(u32, u32), Complex<T>> = BTreeMap::new();
        for (&(a, b), &c) in &self.0 {
            for (&(a2, b2), &c2) in &o.0 {
                let e = m.entry((a + a2, b + b2)).or_insert_with(|| re(T::zero()));
                *e = *e + c * c2;
            }
        }
        Poly2(m)
    }

    pub fn constant_term(&self) -> Complex<T> {
        self.0.get(&(0, 0)).copied().unwrap_or_else(|| re(T::zero()))
    }
}

/// `E[X^a Y^b]` for a complex Gaussian with the given means and covariance
/// `[Sxx, Sxy, Syy]`, as a polynomial in whatever the means depend on.
pub fn moment_poly<T: Real>(a: u32, b: u32, mux: &Poly2<T>, muy: &Poly2<T>, cov: [Complex<T>; 3]) -> Poly2<T> {
    // table[i][j] = E[X^i Y^j]; raise j first along i = 0, then i
    let (a, b) = (a as usize, b as usize);
    let mut table: Vec<Vec<Poly2<T>>> = vec![vec![Poly2::default(); b + 1]; a + 1];
    table[0][0] = Poly2::constant(re(T::one()));
    for j in 0..b {
        let mut next = muy.mul(&table[0][j]);
        if j > 0 {
            next = next.add(&table[0][j - 1].scale(cov[2] * T::int(j as i64)));
        }
        table[0][j + 1] = next;
    }
    for i in 0..a {
        for j in 0..=b {
            let mut next = mux.mul(&table[i][j]);
            if i > 0 {
                next = next.add(&table[i - 1][j].scale(cov[0] * T::int(i as i64)));
            }
            if j > 0 {
                next = next.add(&table[i][j - 1].scale(cov[1] * T::int(j as i64)));
            }
            table[i + 1][j] = next;
        }
    }
    std::mem::take(&mut table[a][b])
}

/// Symmetric complex 2x2 matrix.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Mat2<T: Real>(pub [[Complex<T>; 2]; 2]);

impl<T: Real> Mat2<T> {
    pub fn from_q(q: &[Complex<T>; 3]) -> Self {
        Mat2([[q[0], q[1]], [q[1], q[2]]])
    }

    pub fn det(&self) -> Complex<T> {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn inv(&self) -> Self {
        let d = self.det();
        Mat2([[self.0[1][1] / d, -self.0[0][1] / d], [-self.0[1][0] / d, self.0[0][0] / d]])
    }

    pub fn apply(&self, v: [Complex<T>; 2]) -> [Complex<T>; 2] {
        [self.0[0][0] * v[0] + self.0[0][1] * v[1], self.0[1][0] * v[0] + self.0[1][1] * v[1]]
    }

    pub fn mul_raw(&self, o: &[[Complex<T>; 2]; 2]) -> [[Complex<T>; 2]; 2] {
        mat_mul(&self.0, o)
    }

    /// `int int exp(-w^T M w) d^2 w = pi / sqrt(det M)`, with the branch
    /// fixed by integrating one variable at a time.
    pub fn gauss_prefactor(&self) -> Complex<T> {
        let m11 = self.0[0][0];
        let schur = self.det() / m11;
        re(T::PI()) / (m11.sqrt() * schur.sqrt())
    }
}

fn mat_mul<T: Real>(a: &[[Complex<T>; 2]; 2], b: &[[Complex<T>; 2]; 2]) -> [[Complex<T>; 2]; 2] {
    let mut out = [[re(T::zero()); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}
