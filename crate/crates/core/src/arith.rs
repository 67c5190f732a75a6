//! Modular arithmetic, Kloosterman sums, divisor sums, coprime pairs with
//! their unimodular completion, and the Hecke coefficients `phi(k)`.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_integer::Integer;
use thiserror::Error;

use crate::real::{cx, re, root_of_unity, rpow, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArithError {
    #[error("{a} is not invertible modulo {m}")]
    NotInvertible { a: i64, m: i64 },
    #[error("no theta_p stored for prime {0}")]
    MissingPrime(u64),
    #[error("{0}")]
    Domain(String),
    #[error("Kloosterman sum S(1,{k};{m}) has imaginary part {im:e}")]
    ImaginaryResidue { k: i64, m: i64, im: f64 },
}

pub type Result<T> = std::result::Result<T, ArithError>;

/// Character data `chi(p) = p^{i lambda/2} theta_p`, `chi(-1) = (-1)^delta`.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacterSpec<T: Real> {
    pub parity: u8,
    pub lambda: T,
    pub theta: BTreeMap<u64, Complex<T>>,
}

impl<T: Real> CharacterSpec<T> {
    pub fn new(parity: u8, lambda: T, theta: BTreeMap<u64, Complex<T>>) -> Result<Self> {
        if parity > 1 {
            return Err(ArithError::Domain(format!("parity must be 0 or 1, got {parity}")));
        }
        if let Some((p, _)) = theta.iter().find(|(_, t)| t.norm() == T::zero()) {
            return Err(ArithError::Domain(format!("theta_{p} is zero")));
        }
        Ok(CharacterSpec { parity, lambda, theta })
    }

    /// `theta_p = 1` for every prime up to `bound`.
    pub fn trivial(parity: u8, lambda: T, bound: u64) -> Self {
        let theta = primes_up_to(bound).into_iter().map(|p| (p, re(T::one()))).collect();
        CharacterSpec { parity, lambda, theta }
    }

    /// `chi(k)` for a nonzero integer.
    pub fn chi(&self, k: i64) -> Result<Complex<T>> {
        if k == 0 {
            return Err(ArithError::Domain("chi(0) is undefined".into()));
        }
        let mut v = re(T::one());
        if k < 0 && self.parity == 1 {
            v = -v;
        }
        let half_lam = self.lambda * T::c(0.5);
        for (p, e) in factorize(k.unsigned_abs()) {
            let th = *self.theta.get(&p).ok_or(ArithError::MissingPrime(p))?;
            let cp = rpow(T::int(p as i64), cx(T::zero(), half_lam)) * th;
            v = v * cp.powi(e as i32);
        }
        Ok(v)
    }
}

/// First column `(n, m)` of a matrix in `SL(2,Z)` together with a completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnimodularRep {
    pub n: i64,
    pub m: i64,
    pub n1: i64,
    pub m1: i64,
}

impl UnimodularRep {
    /// Canonical completion: `m1` is the least non-negative residue of `n^{-1} mod |m|`.
    pub fn complete(n: i64, m: i64) -> Result<Self> {
        if n.gcd(&m) != 1 {
            return Err(ArithError::Domain(format!("({n}, {m}) is not a coprime pair")));
        }
        if m == 0 {
            // n = +-1
            return Ok(UnimodularRep { n, m, n1: 0, m1: n });
        }
        let am = m.abs();
        let m1 = if am == 1 { 0 } else { mod_inv(n, am)? };
        let n1 = (n * m1 - 1) / m;
        Ok(UnimodularRep { n, m, n1, m1 })
    }

    pub fn det(&self) -> i128 {
        self.n as i128 * self.m1 as i128 - self.m as i128 * self.n1 as i128
    }

    pub fn negate(&self) -> Self {
        UnimodularRep { n: -self.n, m: -self.m, n1: -self.n1, m1: -self.m1 }
    }
}

/// Inverse of `a` modulo `m >= 2`, in `[1, m-1]`.
pub fn mod_inv(a: i64, m: i64) -> Result<i64> {
    if m < 1 {
        return Err(ArithError::Domain(format!("modulus must be positive, got {m}")));
    }
    let r = a.rem_euclid(m);
    let eg = r.extended_gcd(&m);
    if eg.gcd != 1 {
        return Err(ArithError::NotInvertible { a, m });
    }
    Ok(eg.x.rem_euclid(m))
}

/// Prime factorization by trial division.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).first().map(|&(p, e)| p == n && e == 1).unwrap_or(false)
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let b = bound as usize;
    let mut sieve = vec![true; b + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= b {
        if sieve[i] {
            let mut j = i * i;
            while j <= b {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..=b).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}

/// Positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let cur = ds.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            ds.extend(cur.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

/// Number of positive divisors.
pub fn divisor_count(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

/// `sigma_nu(n) = sum_{d | |n|} d^nu`.
pub fn divisor_sigma<T: Real>(nu: Complex<T>, n: i64) -> Result<Complex<T>> {
    if n == 0 {
        return Err(ArithError::Domain("divisor_sigma of 0".into()));
    }
    let mut s = re(T::zero());
    for d in divisors(n.unsigned_abs()) {
        s = s + rpow(T::int(d as i64), nu);
    }
    Ok(s)
}

/// Kloosterman sum `S(1,k;m) = sum_{n0 unit mod m} e(-(n0^{-1} + k n0)/m)`.
///
/// The sum is real; an imaginary part above `1e-9` (or the rounding level of
/// `T`) is reported as an error.
pub fn kloosterman<T: Real>(k: i64, m: i64) -> Result<T> {
    Ok(KloostermanRow::new(m)?.sum(k)?)
}

/// Precomputed units, inverses and roots of unity for one modulus.
#[derive(Debug, Clone)]
pub struct KloostermanRow<T: Real> {
    m: i64,
    units: Vec<(i64, i64)>,
    roots: Vec<Complex<T>>,
}

impl<T: Real> KloostermanRow<T> {
    pub fn new(m: i64) -> Result<Self> {
        if m < 1 {
            return Err(ArithError::Domain(format!("Kloosterman modulus must be >= 1, got {m}")));
        }
        let units = (0..m).filter(|a| a.gcd(&m) == 1).map(|a| (a, mod_inv(a, m).unwrap_or(0))).collect();
        let roots = (0..m).map(|j| root_of_unity::<T>(-j, m)).collect();
        Ok(KloostermanRow { m, units, roots })
    }

    /// Complex value, without the reality check.
    pub fn sum_complex(&self, k: i64) -> Complex<T> {
        let kk = k.rem_euclid(self.m);
        let mut s = re(T::zero());
        for &(a, inv) in &self.units {
            let j = ((inv as i128 + kk as i128 * a as i128) % self.m as i128) as usize;
            s = s + self.roots[j];
        }
        s
    }

    pub fn sum(&self, k: i64) -> Result<T> {
        let s = self.sum_complex(k);
        let tol = T::c(1e-9).max(T::eps() * T::int(self.m) * T::c(16.0));
        if s.im.abs() > tol {
            return Err(ArithError::ImaginaryResidue { k, m: self.m, im: s.im.f64() });
        }
        Ok(s.re)
    }
}

/// Weil majorant `d(m) gcd(k,m)^{1/2} m^{1/2}`.
pub fn weil_bound(k: i64, m: i64) -> f64 {
    let g = k.gcd(&m).max(1) as f64;
    divisor_count(m.unsigned_abs()) as f64 * g.sqrt() * (m as f64).sqrt()
}

/// `phi(k) = sum_{mn = k} chi(m/n) |n|^{i lambda}` over signed factorizations.
pub fn phi_coeff<T: Real>(ch: &CharacterSpec<T>, k: i64) -> Result<Complex<T>> {
    if k == 0 {
        return Err(ArithError::Domain("phi(0) is undefined".into()));
    }
    let ilam = cx(T::zero(), ch.lambda);
    let mut s = re(T::zero());
    for d in divisors(k.unsigned_abs()) {
        let d = d as i64;
        for sign in [1i64, -1] {
            let m = sign * d;
            let n = k / m;
            // chi(m/n) = chi(m)/chi(n), chi multiplicative on nonzero integers
            let c = ch.chi(m)? / ch.chi(n)?;
            s = s + c * rpow(T::int(n.abs()), ilam);
        }
    }
    Ok(s)
}

/// Unimodular completions of all coprime `(n,m)` with `|n|, |m| <= radius`.
pub fn coprime_reps(radius: i64) -> Vec<UnimodularRep> {
    coprime_reps_box(radius, radius)
}

/// Coprime pairs with `|n| <= rn`, `|m| <= rm`, each completed canonically.
pub fn coprime_reps_box(rn: i64, rm: i64) -> Vec<UnimodularRep> {
    let mut out = Vec::new();
    for m in -rm..=rm {
        for n in -rn..=rn {
            if n.gcd(&m) == 1 {
                if let Ok(r) = UnimodularRep::complete(n, m) {
                    out.push(r);
                }
            }
        }
    }
    out
}

/// Truncated series with a rigorous bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncated<T: Real> {
    pub value: Complex<T>,
    pub tail_bound: T,
}

/// `L_s(1,k)` truncated: `sum_{m <= m_max} S(1,k;m) m^{-2s}`.
///
/// The tail bound uses the Weil majorant and `sum_{m <= x} d(m) <= x (ln x + 1)`.
pub fn kloosterman_zeta<T: Real>(s: Complex<T>, k: i64, m_max: i64) -> Result<Truncated<T>> {
    if !(s.re > T::c(0.75)) {
        return Err(ArithError::Domain(format!("Kloosterman zeta needs Re s > 3/4, got {}", s.re)));
    }
    if m_max < 1 || k == 0 {
        return Err(ArithError::Domain("need m_max >= 1 and k != 0".into()));
    }
    let mut v = re(T::zero());
    for m in 1..=m_max {
        let sk: T = kloosterman(k, m)?;
        v = v + rpow(T::int(m), -s * T::c(2.0)) * sk;
    }
    let a = 2.0 * s.re.f64() - 0.5;
    let big_m = m_max as f64;
    let tail = (k.unsigned_abs() as f64).sqrt()
        * a
        * big_m.powf(1.0 - a)
        * ((big_m.ln() + 1.0) / (a - 1.0) + 1.0 / ((a - 1.0) * (a - 1.0)));
    Ok(Truncated { value: v, tail_bound: T::c(tail) })
}
