//! Exact word algebra over `R`, `sigma_r`, `sigma_r^(l)` and `tau[gamma]` for a
//! fixed prime, modulo agreement on `Inv(1)`.
//!
//! Words are written as in operator notation: the rightmost generator acts
//! first. `Inv(p^j)` is tracked by the integer `j`; the input of a word is
//! always `Inv(1)` (`j = 0`). A generator sends `Inv(p^j)` to
//!
//! * `R^l`: `Inv(p^(j-l))`;
//! * `sigma_r^(m)` (defined when `m >= j`): `Inv(p^min(j, m-r))`;
//! * `tau[gamma]`: `Inv(p^j)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::Write;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::planedist::PhiBlock;
use crate::real::{cx, rpow, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WordError {
    #[error("word {0} is irreducible but not in normal shape")]
    Irreducible(String),
    #[error("symbolic expansion limited to k <= {max}, got {k}")]
    SizeLimit { k: u32, max: u32 },
    #[error("Phi-block action needs l >= N, got l = {l}, N = {n}")]
    Regime { l: i64, n: i64 },
    #[error("{0}")]
    Domain(String),
    #[error("csv export failed: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, WordError>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    RPow(i64),
    Sigma(u32),
    SigmaUpper { r: u32, l: i64 },
    Tau(BigRational),
}

pub type Word = Vec<Generator>;

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::RPow(j) => write!(f, "R^{j}"),
            Generator::Sigma(r) => write!(f, "s{r}"),
            Generator::SigmaUpper { r, l } => write!(f, "s{r}^({l})"),
            Generator::Tau(g) => write!(f, "tau[{g}]"),
        }
    }
}

pub fn word_to_string(w: &[Generator]) -> String {
    if w.is_empty() {
        return "I".into();
    }
    w.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(" ")
}

/// Input domain (the `j` of `Inv(p^j)`) seen by each generator, or `None`
/// once some generator to the right is ill-defined.
pub fn input_domains(w: &[Generator]) -> Vec<Option<i64>> {
    let mut out = vec![None; w.len()];
    let mut j = Some(0i64);
    for i in (0..w.len()).rev() {
        out[i] = j;
        j = j.and_then(|j| match &w[i] {
            Generator::RPow(l) => Some(j - l),
            Generator::Sigma(r) => (j <= 0).then(|| j.min(-(*r as i64))),
            Generator::SigmaUpper { r, l } => (*l >= j).then(|| j.min(l - *r as i64)),
            Generator::Tau(_) => Some(j),
        });
    }
    out
}

/// Whether every generator of the word is well defined on its input.
pub fn is_well_defined(w: &[Generator]) -> bool {
    let d = input_domains(w);
    match (w.first(), d.first()) {
        (None, _) => true,
        (Some(g), Some(Some(j))) => match g {
            Generator::Sigma(_) => *j <= 0,
            Generator::SigmaUpper { l, .. } => *l >= *j,
            _ => true,
        },
        _ => false,
    }
}

/// Normal shape: `[R^j] [tau] [sigma_r | sigma_r^(l)]`, each optional.
pub fn is_normal_shape(w: &[Generator]) -> bool {
    let mut stage = 0;
    for g in w {
        let s = match g {
            Generator::RPow(j) if *j != 0 => 1,
            Generator::Tau(t) if !t.is_zero() => 2,
            Generator::Sigma(r) if *r > 0 => 3,
            Generator::SigmaUpper { r, l } if *r > 0 && *l != 0 => 3,
            _ => return false,
        };
        if s <= stage {
            return false;
        }
        stage = s;
    }
    true
}

fn p_pow(p: u64, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(p));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base, (-e) as usize).recip()
    }
}

fn splice(w: &[Generator], at: usize, len: usize, with: Vec<Generator>) -> Word {
    let mut out = Vec::with_capacity(w.len() - len + with.len());
    out.extend_from_slice(&w[..at]);
    out.extend(with);
    out.extend_from_slice(&w[at + len..]);
    out
}

fn push_nonzero(v: &mut Vec<Generator>, g: Generator) {
    match &g {
        Generator::RPow(0) | Generator::Sigma(0) | Generator::SigmaUpper { r: 0, .. } => {}
        Generator::Tau(t) if t.is_zero() => {}
        _ => v.push(g),
    }
}

/// The word algebra for one prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordAlgebra {
    pub p: u64,
}

impl WordAlgebra {
    pub fn new(p: u64) -> Result<Self> {
        if !crate::arith::is_prime(p) {
            return Err(WordError::Domain(format!("{p} is not prime")));
        }
        Ok(WordAlgebra { p })
    }

    /// The rewrite available at position `i`, if any, as `(window length, replacement)`.
    fn rewrite_at(&self, w: &[Generator], dom: &[Option<i64>], i: usize) -> Option<(usize, Vec<Generator>)> {
        use Generator::*;
        let g = &w[i];
        // identities
        match g {
            RPow(0) | Sigma(0) | SigmaUpper { r: 0, .. } => return Some((1, vec![])),
            SigmaUpper { r, l: 0 } => return Some((1, vec![Sigma(*r)])),
            Tau(t) if t.is_zero() => return Some((1, vec![])),
            Tau(t) => {
                // tau[gamma] acts trivially on Inv(p^j) when gamma is in p^j Z
                if let Some(j) = dom[i] {
                    if (t / p_pow(self.p, j)).is_integer() {
                        return Some((1, vec![]));
                    }
                }
            }
            _ => {}
        }
        let h = w.get(i + 1)?;
        let j_in = dom[i + 1];
        match (g, h) {
            (RPow(a), RPow(b)) => return Some((2, vec![RPow(a + b)])),
            (Tau(a), Tau(b)) => return Some((2, vec![Tau(a + b)])),
            (Tau(a), RPow(l)) => return Some((2, vec![RPow(*l), Tau(a * p_pow(self.p, *l))])),
            (Sigma(_) | SigmaUpper { .. }, Tau(t)) => return Some((2, vec![Tau(t.clone()), g.clone()])),
            (Sigma(s), RPow(l)) if *l > 0 && j_in.map_or(false, |j| j <= 0) => {
                let t = (*s as i64).min(*l);
                let mut v = Vec::new();
                push_nonzero(&mut v, RPow(t));
                push_nonzero(&mut v, Sigma(*s - t as u32));
                push_nonzero(&mut v, RPow(l - t));
                return Some((2, v));
            }
            (SigmaUpper { r, l: m }, RPow(k)) if *m > 0 && -*k >= *m => {
                let mut v = vec![RPow(-*m), Sigma(*r)];
                push_nonzero(&mut v, RPow(*k + *m));
                return Some((2, v));
            }
            (Sigma(r), Sigma(s)) if j_in.map_or(false, |j| j <= 0) => {
                return Some((2, vec![Sigma(*r.max(s))]));
            }
            _ => {}
        }
        if let (Sigma(r), RPow(k), Some(Sigma(s))) = (g, h, w.get(i + 2)) {
            let k = -*k;
            if *r >= 1 && k >= 1 && *s as i64 >= k && dom[i + 2].map_or(false, |j| j <= 0) {
                let top = (*r as i64 + k).max(*s as i64) as u32;
                return Some((3, vec![RPow(-k), Sigma(top)]));
            }
        }
        None
    }

    /// Every word reachable by one rewrite.
    pub fn one_step(&self, w: &[Generator]) -> Vec<Word> {
        let dom = input_domains(w);
        (0..w.len())
            .filter_map(|i| self.rewrite_at(w, &dom, i).map(|(len, rep)| splice(w, i, len, rep)))
            .collect()
    }

    /// Leftmost-first rewriting to an irreducible word.
    pub fn reduce(&self, w: &[Generator]) -> Word {
        let mut cur: Word = w.to_vec();
        loop {
            let dom = input_domains(&cur);
            let step = (0..cur.len()).find_map(|i| self.rewrite_at(&cur, &dom, i).map(|(len, rep)| (i, len, rep)));
            match step {
                Some((i, len, rep)) => cur = splice(&cur, i, len, rep),
                None => return cur,
            }
        }
    }

    /// Normal form of a word, or an irreducibility report.
    pub fn normal_form_word(&self, w: &[Generator]) -> Result<Word> {
        let r = self.reduce(w);
        if is_normal_shape(&r) {
            Ok(r)
        } else {
            Err(WordError::Irreducible(word_to_string(&r)))
        }
    }

    /// All irreducible words reachable under every rewriting order.
    pub fn terminal_forms(&self, w: &[Generator], memo: &mut HashMap<Word, BTreeSet<Word>>) -> BTreeSet<Word> {
        if let Some(s) = memo.get(w) {
            return s.clone();
        }
        let next = self.one_step(w);
        let out = if next.is_empty() {
            std::iter::once(w.to_vec()).collect()
        } else {
            let mut acc = BTreeSet::new();
            for n in next {
                acc.extend(self.terminal_forms(&n, memo));
            }
            acc
        };
        memo.insert(w.to_vec(), out.clone());
        out
    }

    pub fn normal_form(&self, s: &OperatorSum) -> Result<OperatorSum> {
        let mut out = OperatorSum::zero();
        for (w, c) in &s.terms {
            out.add_term(self.normal_form_word(w)?, c.clone());
        }
        Ok(out)
    }

    /// `T = R + R^{-1} sigma_1`.
    pub fn hecke_t(&self) -> OperatorSum {
        let mut t = OperatorSum::zero();
        t.add_term(vec![Generator::RPow(1)], BigRational::one());
        t.add_term(vec![Generator::RPow(-1), Generator::Sigma(1)], BigRational::one());
        t
    }
}

/// Finite linear combination of words with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OperatorSum {
    pub terms: BTreeMap<Word, BigRational>,
}

impl OperatorSum {
    pub fn zero() -> Self {
        OperatorSum { terms: BTreeMap::new() }
    }

    pub fn identity() -> Self {
        let mut s = Self::zero();
        s.add_term(Vec::new(), BigRational::one());
        s
    }

    pub fn add_term(&mut self, w: Word, c: BigRational) {
        let e = self.terms.entry(w.clone()).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    /// Product `self * other` by word concatenation, without rewriting.
    pub fn mul(&self, other: &OperatorSum) -> OperatorSum {
        let mut out = OperatorSum::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut w = a.clone();
                w.extend(b.iter().cloned());
                out.add_term(w, ca * cb);
            }
        }
        out
    }

    pub fn coeff(&self, w: &[Generator]) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for OperatorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("{c}*{}", word_to_string(w))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Largest `k` for the fully expanded symbolic product.
pub const SYMBOLIC_MAX_K: u32 = 12;

/// `(R + R^{-1} sigma_1)^k` multiplied out into `2^k` words, each normal-formed.
pub fn expand_pow_symbolic(k: u32, p: u64) -> Result<OperatorSum> {
    if k > SYMBOLIC_MAX_K {
        return Err(WordError::SizeLimit { k, max: SYMBOLIC_MAX_K });
    }
    let alg = WordAlgebra::new(p)?;
    let t = alg.hecke_t();
    let mut raw = OperatorSum::identity();
    for _ in 0..k {
        raw = raw.mul(&t);
    }
    alg.normal_form(&raw)
}

/// Coefficients `alpha_{k,l}^{(r)}` of `T^k = sum_l R^{k-2l} sum_r alpha sigma_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckePowerTable {
    pub k: u32,
    /// `alpha[l][r]`, `0 <= r <= l <= k`.
    pub alpha: Vec<Vec<BigUint>>,
}

impl HeckePowerTable {
    pub fn get(&self, l: usize, r: usize) -> BigUint {
        self.alpha.get(l).and_then(|row| row.get(r)).cloned().unwrap_or_default()
    }

    pub fn row_sum(&self, l: usize) -> BigUint {
        self.alpha[l].iter().sum()
    }

    pub fn total(&self) -> BigUint {
        (0..=self.k as usize).map(|l| self.row_sum(l)).sum()
    }

    /// Read the table off a normal-formed operator sum.
    pub fn from_operator_sum(k: u32, s: &OperatorSum) -> Result<Self> {
        let mut alpha: Vec<Vec<BigUint>> = (0..=k as usize).map(|l| vec![BigUint::zero(); l + 1]).collect();
        for (w, c) in &s.terms {
            let (j, r) = match w.as_slice() {
                [] => (0, 0),
                [Generator::RPow(j)] => (*j, 0),
                [Generator::Sigma(r)] => (0, *r as i64),
                [Generator::RPow(j), Generator::Sigma(r)] => (*j, *r as i64),
                _ => return Err(WordError::Domain(format!("unexpected word {}", word_to_string(w)))),
            };
            let twice_l = k as i64 - j;
            if twice_l < 0 || twice_l % 2 != 0 || twice_l / 2 > k as i64 || r > twice_l / 2 {
                return Err(WordError::Domain(format!("word {} outside table shape", word_to_string(w))));
            }
            if !c.is_integer() || c.is_negative() {
                return Err(WordError::Domain(format!("coefficient {c} is not a non-negative integer")));
            }
            let v = c.to_integer().to_biguint().unwrap_or_default();
            alpha[(twice_l / 2) as usize][r as usize] = v;
        }
        Ok(HeckePowerTable { k, alpha })
    }

    /// CSV rows `k,l,r,alpha`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["k", "l", "r", "alpha"]).map_err(|e| WordError::Io(e.to_string()))?;
        for (l, row) in self.alpha.iter().enumerate() {
            for (r, a) in row.iter().enumerate() {
                wtr.write_record([self.k.to_string(), l.to_string(), r.to_string(), a.to_string()])
                    .map_err(|e| WordError::Io(e.to_string()))?;
            }
        }
        wtr.flush().map_err(|e| WordError::Io(e.to_string()))
    }
}

/// Table for `T^k` from the recursion obtained by right multiplication by `T`.
pub fn hecke_power(k: u32) -> HeckePowerTable {
    let mut alpha: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for kk in 0..k as usize {
        let get = |a: &Vec<Vec<BigUint>>, l: isize, r: isize| -> BigUint {
            if l < 0 || r < 0 || l as usize >= a.len() || r as usize >= a[l as usize].len() {
                BigUint::zero()
            } else {
                a[l as usize][r as usize].clone()
            }
        };
        let mut next = Vec::with_capacity(kk + 2);
        for l in 0..=(kk + 1) as isize {
            let mut row = Vec::with_capacity(l as usize + 1);
            for r in 0..=l {
                let v = if r == 0 {
                    get(&alpha, l, 0) + get(&alpha, l, 1)
                } else {
                    get(&alpha, l, r + 1) + get(&alpha, l - 1, r - 1)
                };
                row.push(v);
            }
            next.push(row);
        }
        alpha = next;
    }
    HeckePowerTable { k, alpha }
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `sigma_r^(2l-2N) R^(2N-2l)` applied to `Phi_delta[nu, c]`, for `l >= N`.
///
/// Returns the scalar `q^{-nu}` (with `q = p^{l-N}`) and the new block, or
/// `None` when `p^r` does not divide `c`.
pub fn apply_to_phi<T: Real>(
    l: i64,
    n: i64,
    r: u32,
    block: &PhiBlock<T>,
    p: u64,
) -> Result<Option<(Complex<T>, PhiBlock<T>)>> {
    if l < n {
        return Err(WordError::Regime { l, n });
    }
    if !block.c.is_integer() {
        return Err(WordError::Domain(format!("Phi-block parameter {} is not an integer", block.c)));
    }
    let c = *block.c.numer();
    let pr = (p as i64).checked_pow(r).ok_or_else(|| WordError::Domain("p^r overflows".into()))?;
    if c % pr != 0 {
        return Ok(None);
    }
    let e = (2 * (l - n)) as u32;
    let den = (p as i64).checked_pow(e).ok_or_else(|| WordError::Domain("p^(2l-2N) overflows".into()))?;
    let scale = rpow(T::int(p as i64), -block.nu * T::int(l - n));
    let out = PhiBlock { delta: block.delta, nu: block.nu, c: Rational64::new(c, den) };
    Ok(Some((scale, out)))
}

/// Pointwise evaluation of a word acting on a function of `(x, xi)`.
///
/// Averages use the representatives `b = 0..p^r-1`.
pub fn eval_word<T, F>(w: &[Generator], p: u64, f: &F, x: T, xi: T) -> Complex<T>
where
    T: Real,
    F: Fn(T, T) -> Complex<T>,
{
    let Some((g, rest)) = w.split_first() else {
        return f(x, xi);
    };
    let pt = T::int(p as i64);
    match g {
        Generator::RPow(l) => {
            let s = pt.powf(T::int(*l) * T::c(0.5));
            eval_word(rest, p, f, s * x, xi / s) / s
        }
        Generator::Sigma(r) => sigma_eval(rest, p, f, x, xi, *r, 0),
        Generator::SigmaUpper { r, l } => sigma_eval(rest, p, f, x, xi, *r, *l),
        Generator::Tau(g) => {
            let gf = T::c(g.to_f64().unwrap_or(f64::NAN));
            eval_word(rest, p, f, x + gf * xi, xi)
        }
    }
}

fn sigma_eval<T, F>(rest: &[Generator], p: u64, f: &F, x: T, xi: T, r: u32, l: i64) -> Complex<T>
where
    T: Real,
    F: Fn(T, T) -> Complex<T>,
{
    let count = p.pow(r);
    let step = T::int(p as i64).powi((l - r as i64) as i32);
    let mut acc = cx(T::zero(), T::zero());
    for b in 0..count {
        acc = acc + eval_word(rest, p, f, x + T::int(b as i64) * step * xi, xi);
    }
    acc / T::int(count as i64)
}
