//! Experiment drivers producing [`ScanReport`]s.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{Read, Write};

use num_bigint::BigUint;
use num_complex::Complex;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::halfplane::{eval_eisenstein, hecke_classical, hecke_coeff, HalfPlaneError, MaassExpansion};
use crate::heckewords::{binomial, hecke_power};
use crate::planedist::{
    mellin_slice, pair_b_scaled_any, pair_bm_direct, pair_bm_kloosterman, theta_s11, window_point, EulerImage,
    GaussPoly, PlaneError, SpectralWindow,
};
use crate::arith::is_prime;

type C = Complex<f64>;

pub const SCHEMA_VERSION: u32 = 1;
/// Default exponent in the envelope `q^{1 - eps}`.
pub const DEFAULT_EPS: f64 = 0.1;
/// Default degree of the test norm in the window trade-off.
pub const DEFAULT_NORM_DEGREE: u32 = 4;

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error(transparent)]
    HalfPlane(#[from] HalfPlaneError),
    #[error("{0}")]
    Domain(String),
    #[error("report format: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, LabError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub label: String,
    pub params: BTreeMap<String, f64>,
    pub value: C,
    /// Bound the value is compared against; 0 when the row carries no assertion.
    pub bound: f64,
    /// `|value| / bound`, or the row's own error measure over its tolerance.
    pub ratio: f64,
    pub pass: Option<bool>,
    pub note: String,
}

impl ReportRow {
    pub fn new(label: &str, params: &[(&str, f64)], value: C) -> Self {
        ReportRow {
            label: label.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            value,
            bound: 0.0,
            ratio: 0.0,
            pass: None,
            note: String::new(),
        }
    }

    /// Assert `err <= tol`; the ratio is `err / tol`.
    pub fn within(mut self, err: f64, tol: f64) -> Self {
        self.bound = tol;
        self.ratio = err / tol;
        self.pass = Some(err <= tol);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub schema_version: u32,
    pub experiment: String,
    pub rows: Vec<ReportRow>,
    pub metadata: BTreeMap<String, Value>,
}

impl ScanReport {
    pub fn new(experiment: &str) -> Self {
        ScanReport {
            schema_version: SCHEMA_VERSION,
            experiment: experiment.to_string(),
            rows: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn meta(&mut self, key: &str, v: Value) {
        self.metadata.insert(key.to_string(), v);
    }

    /// True when no asserted row failed.
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass != Some(false))
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.pass == Some(false)).count()
    }

    pub fn max_ratio(&self) -> f64 {
        self.rows.iter().filter(|r| r.pass.is_some()).map(|r| r.ratio).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| LabError::Format(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| LabError::Format(e.to_string()))
    }

    fn param_names(&self) -> Vec<String> {
        let set: BTreeSet<&String> = self.rows.iter().flat_map(|r| r.params.keys()).collect();
        set.into_iter().cloned().collect()
    }

    /// One row per parameter tuple: `label, <params>, value_re, value_im, bound, ratio, pass, note`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let names = self.param_names();
        let mut wtr = csv::Writer::from_writer(out);
        let mut header = vec!["label".to_string()];
        header.extend(names.iter().cloned());
        header.extend(["value_re", "value_im", "bound", "ratio", "pass", "note"].map(String::from));
        wtr.write_record(&header).map_err(|e| LabError::Format(e.to_string()))?;
        for r in &self.rows {
            let mut rec = vec![r.label.clone()];
            for n in &names {
                rec.push(r.params.get(n).map(|v| v.to_string()).unwrap_or_default());
            }
            rec.push(r.value.re.to_string());
            rec.push(r.value.im.to_string());
            rec.push(r.bound.to_string());
            rec.push(r.ratio.to_string());
            rec.push(r.pass.map(|b| b.to_string()).unwrap_or_default());
            rec.push(r.note.clone());
            wtr.write_record(&rec).map_err(|e| LabError::Format(e.to_string()))?;
        }
        wtr.flush().map_err(|e| LabError::Format(e.to_string()))
    }

    /// Rows back from [`ScanReport::write_csv`] output.
    pub fn read_csv_rows<R: Read>(input: R) -> Result<Vec<ReportRow>> {
        let fmt = |e: &dyn std::fmt::Display| LabError::Format(e.to_string());
        let mut rdr = csv::Reader::from_reader(input);
        let header: Vec<String> = rdr.headers().map_err(|e| fmt(&e))?.iter().map(String::from).collect();
        let n = header.len();
        if n < 7 || header[0] != "label" {
            return Err(LabError::Format("unexpected CSV header".into()));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| fmt(&e));
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| fmt(&e))?;
            let mut params = BTreeMap::new();
            for (i, name) in header.iter().enumerate().take(n - 6).skip(1) {
                if !rec[i].is_empty() {
                    params.insert(name.clone(), num(&rec[i])?);
                }
            }
            let pass = match &rec[n - 2] {
                "" => None,
                s => Some(s.parse::<bool>().map_err(|e| fmt(&e))?),
            };
            rows.push(ReportRow {
                label: rec[0].to_string(),
                params,
                value: C::new(num(&rec[n - 6])?, num(&rec[n - 5])?),
                bound: num(&rec[n - 4])?,
                ratio: num(&rec[n - 3])?,
                pass,
                note: rec[n - 1].to_string(),
            });
        }
        Ok(rows)
    }
}

/// `Theta s_1^1` from its pairing integral against `(Im z)^{1/2} e(z)` at 20 points.
pub fn exp_theta_s11() -> Result<ScanReport> {
    let mut rep = ScanReport::new("theta_s11");
    let tol = 1e-8;
    for &x in &[0.0, 0.25, -0.4, 0.6, 1.3] {
        for &y in &[0.6, 1.0, 2.0, 3.5] {
            let z = C::new(x, y);
            let got = theta_s11(z)?;
            let want = crate::real::e2pi(x) * (y.sqrt() * (-std::f64::consts::TAU * y).exp());
            rep.rows.push(ReportRow::new("point", &[("x", x), ("y", y)], got).within((got - want).norm(), tol));
        }
    }
    rep.meta("tolerance", json!(tol));
    Ok(rep)
}

/// Hecke action on Eisenstein data, pointwise and on coefficients; the
/// expected eigenvalue is `p^{i lambda/2} + p^{-i lambda/2}`.
pub fn exp_eisenstein_eigen(primes: &[u64], lambdas: &[f64]) -> Result<ScanReport> {
    let mut rep = ScanReport::new("eisenstein_eigen");
    let tol = 1e-6;
    let k_model = 300usize;
    let points = [C::new(0.15, 0.9), C::new(-0.3, 1.4), C::new(0.45, 1.05)];
    for &p in primes {
        if !is_prime(p) {
            return Err(LabError::Domain(format!("{p} is not prime")));
        }
        for &lam in lambdas {
            let eig = 2.0 * (0.5 * lam * (p as f64).ln()).cos();
            let nu = C::new(0.0, lam);
            let f = |w: C| Ok(eval_eisenstein(nu, w, 60)?.value);
            let mut est = C::new(0.0, 0.0);
            let mut resid = 0.0f64;
            for (i, &z) in points.iter().enumerate() {
                let t = hecke_classical(p, f, z)?;
                let e = f(z)?;
                if i == 0 {
                    est = t / e;
                }
                resid = resid.max((t - e * eig).norm());
            }
            let err = (est - eig).norm().max(resid);
            rep.rows.push(
                ReportRow::new("pointwise", &[("p", p as f64), ("lambda", lam), ("eigenvalue", eig)], est).within(err, tol),
            );
            let model = MaassExpansion::eisenstein_model(lam, k_model)?;
            let t = hecke_coeff(p, &model)?;
            let mut err = 0.0f64;
            for k in 1..=t.k_max as u64 {
                let (a, b) = (t.get(k).unwrap_or_default(), model.get(k).unwrap_or_default());
                err = err.max((a - b * eig).norm());
            }
            let est = t.get(1).unwrap_or_default();
            rep.rows.push(
                ReportRow::new("coefficient", &[("p", p as f64), ("lambda", lam), ("eigenvalue", eig)], est)
                    .within(err, tol),
            );
        }
    }
    rep.meta("tolerance", json!(tol));
    rep.meta("points", json!(points.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>()));
    rep.meta("model_order", json!(k_model));
    Ok(rep)
}

/// `<q^{-2 i pi E^natural} sigma_r B^1, h>` with `q = p^{-d}`, `d = N - l`.
///
/// Moving the dilation across gives `<B^1, q^{2 i pi E^natural} sigma_{2d+r} h>`;
/// the shears `b / p^{2d+r}` repeat with period `q^2` on `B^1`, so `p^r` of them suffice.
/// `radius` is in units of the row spacing `1/q` of the scaled lattice.
pub fn envelope_pairing(p: u64, d: u32, r: u32, f: &GaussPoly<f64>, radius: f64) -> Result<C> {
    let q = (p as f64).powi(-(d as i32));
    let radius = radius / q;
    let big = (p as f64).powi((2 * d + r) as i32);
    let count = p.pow(r);
    let mut acc = C::new(0.0, 0.0);
    for b in 0..count {
        acc += pair_b_scaled_any(q, b as f64 / big, f, radius)?.value;
    }
    Ok(acc / count as f64)
}

/// Envelope ratios `|<q^{-2 i pi E^natural} sigma_r B^1, h>| / q^{1 - eps}` for
/// every `n <= n_max`, `l <= n`, `r <= l`, at two truncation radii (see
/// [`envelope_pairing`] for their units).
pub fn exp_scan_envelope(p: u64, n_max: u32, eps: f64, f: &GaussPoly<f64>, radii: (f64, f64)) -> Result<ScanReport> {
    if !is_prime(p) || n_max < 1 || !(eps > 0.0 && eps < 1.0) {
        return Err(LabError::Domain("scan needs p prime, N >= 1 and 0 < eps < 1".into()));
    }
    let mut rep = ScanReport::new("scan_envelope");
    // the value depends only on (d, r)
    let mut cache: HashMap<(u32, u32), (C, C)> = HashMap::new();
    let mut fitted = (0.0f64, 0.0f64);
    let mut worst_change = 1.0f64;
    for n in 1..=n_max {
        for l in 0..=n {
            let d = n - l;
            let q = (p as f64).powi(-(d as i32));
            let env = q.powf(1.0 - eps);
            for r in 0..=l {
                let (v1, v2) = match cache.get(&(d, r)) {
                    Some(v) => *v,
                    None => {
                        let v = (envelope_pairing(p, d, r, f, radii.0)?, envelope_pairing(p, d, r, f, radii.1)?);
                        cache.insert((d, r), v);
                        v
                    }
                };
                let (r1, r2) = (v1.norm() / env, v2.norm() / env);
                fitted = (fitted.0.max(r1), fitted.1.max(r2));
                let change = if r1 > 0.0 && r2 > 0.0 { (r2 / r1).max(r1 / r2) } else { f64::INFINITY };
                worst_change = worst_change.max(change);
                let mut row = ReportRow::new(
                    "envelope",
                    &[("N", n as f64), ("l", l as f64), ("r", r as f64), ("q", q), ("ratio_small_radius", r1)],
                    v2,
                );
                row.bound = env;
                row.ratio = r2;
                row.pass = Some(r2.is_finite() && change < 2.0);
                rep.rows.push(row);
            }
        }
    }
    rep.meta("p", json!(p));
    rep.meta("eps", json!(eps));
    rep.meta("radii", json!([radii.0, radii.1]));
    rep.meta("fitted_norm", json!(fitted.1));
    rep.meta("fitted_norm_small_radius", json!(fitted.0));
    rep.meta("max_ratio_change", json!(worst_change));
    Ok(rep)
}

/// `beta` with `exp(pi (A + 1)^2 N beta) = p^{N eps / 2}`.
pub fn window_beta(p: u64, eps: f64, degree: u32) -> f64 {
    let a1 = degree as f64 + 1.0;
    eps * (p as f64).ln() / (2.0 * std::f64::consts::PI * a1 * a1)
}

/// The budget `sum_{l, r} alpha_{2N, l}^{(r)} p^{N eps} norm` assembled from the
/// Hecke power tables for `N <= n_max`, against `2^{2N} p^{N eps} norm`.
pub fn exp_binomial_budget(p: u64, n_max: u32, eps: f64, norm: f64, degree: u32) -> Result<ScanReport> {
    if !is_prime(p) || n_max < 1 {
        return Err(LabError::Domain("budget needs p prime and N >= 1".into()));
    }
    let mut rep = ScanReport::new("binomial_budget");
    let mut prev: Option<f64> = None;
    for n in 1..=n_max {
        let k = 2 * n;
        let table = hecke_power(k);
        let rows_ok = (0..=k as usize).all(|l| table.row_sum(l) == binomial(k as u64, l as u64));
        let total = table.total();
        let expect = BigUint::one() << (2 * n as usize);
        let exact = rows_ok && total == expect;
        let per_term = (p as f64).powf(n as f64 * eps) * norm;
        let budget = total.to_f64().unwrap_or(f64::INFINITY) * per_term;
        let closed = 4f64.powi(n as i32) * per_term;
        let rel = ((budget - closed) / closed).abs();
        let mut row = ReportRow::new(
            "budget",
            &[("N", n as f64), ("total", total.to_f64().unwrap_or(f64::NAN)), ("per_term", per_term)],
            C::new(budget, 0.0),
        )
        .within(rel, 1e-12);
        row.pass = Some(exact && rel <= 1e-12);
        if let Some(b) = prev {
            row.params.insert("growth".into(), budget / b);
        }
        if !exact {
            row.note = "alpha totals differ from 2^{2N}".into();
        }
        prev = Some(budget);
        rep.rows.push(row);
    }
    rep.meta("p", json!(p));
    rep.meta("eps", json!(eps));
    rep.meta("norm", json!(norm));
    rep.meta("norm_degree", json!(degree));
    rep.meta("window_beta", json!(window_beta(p, eps, degree)));
    Ok(rep)
}

/// `<B_m, h>` with `h = 2 i pi E f`, summed directly and through the
/// Kloosterman expansion, per `m`.
pub fn exp_bm_consistency(ms: &[i64], f: &GaussPoly<f64>, radius: i64, k_max: i64) -> Result<ScanReport> {
    let mut rep = ScanReport::new("bm_consistency");
    let img = EulerImage::new(f.euler())?;
    let tol = 1e-4;
    for &m in ms {
        let direct = pair_bm_direct(m, &img, radius)?;
        let kl = pair_bm_kloosterman(m, &img, k_max)?;
        let mut row = ReportRow::new("m", &[("m", m as f64), ("kloosterman_re", kl.total.re), ("kloosterman_im", kl.total.im)], direct)
            .within((direct - kl.total).norm(), tol);
        row.params.insert("zero_mode_re".into(), kl.zero_mode.re);
        row.params.insert("zero_mode_im".into(), kl.zero_mode.im);
        rep.rows.push(row);
    }
    rep.meta("radius", json!(radius));
    rep.meta("k_max", json!(k_max));
    rep.meta("tolerance", json!(tol));
    Ok(rep)
}

/// Window weights over fixture eigenvalues: `Phi_N(-2 i pi E)` is applied
/// numerically to the `lambda_s`-slice of a Gaussian and compared with
/// `exp(-pi N beta (lambda_s - lambda_r)^2)`, centred at the first fixture.
pub fn exp_window_localization(fixtures: &[MaassExpansion], p: u64, n: u32, beta: f64) -> Result<ScanReport> {
    let first = fixtures.first().ok_or_else(|| LabError::Domain("no fixtures".into()))?;
    let w = SpectralWindow::new(first.lambda, n, beta)?;
    let h = GaussPoly::<f64>::standard();
    let (x, xi) = (0.6, -0.4);
    let mut rep = ScanReport::new("window_localization");
    for (i, e) in fixtures.iter().enumerate() {
        let lam = e.lambda;
        let slice = mellin_slice(&h, lam, x, xi)?;
        let f = |a: f64, b: f64| mellin_slice(&h, lam, a, b);
        let out = window_point(&w, &f, x, xi)?;
        let measured = (out / slice).norm();
        let gauss = w.factor(lam);
        let bp = e.get(p).unwrap_or_default();
        let weight = bp.powu(2 * n) * measured;
        let mut row = ReportRow::new(
            "fixture",
            &[("index", i as f64), ("lambda", lam), ("window_factor", measured), ("gaussian_factor", gauss)],
            weight,
        )
        .within((measured / gauss - 1.0).abs(), 0.05);
        if e.get(p).is_none() {
            row.note = format!("b_{p} missing; weight uses 0");
        }
        rep.rows.push(row);
    }
    rep.meta("lambda_center", json!(first.lambda));
    rep.meta("N", json!(n));
    rep.meta("beta", json!(beta));
    rep.meta("p", json!(p));
    Ok(rep)
}

/// Hecke recursion `b_p b_{p^k} = b_{p^{k+1}} + b_{p^{k-1}}` per prime of a
/// fixture, and whether `|b_p| <= 2` within the declared precision.
pub fn exp_ramanujan(e: &MaassExpansion) -> Result<ScanReport> {
    let prec = e.precision.unwrap_or(1e-12);
    let mut rep = ScanReport::new("ramanujan");
    let k_max = e.k_max as u64;
    let mut violations = Vec::new();
    for p in crate::arith::primes_up_to(k_max) {
        let bp = match e.get(p) {
            Some(v) => v,
            None => continue,
        };
        let mut resid = 0.0f64;
        let mut steps = 0;
        let (mut lo, mut mid) = (1u64, p);
        while let Some(hi) = mid.checked_mul(p).filter(|&h| h <= k_max) {
            let r = bp * e.get(mid).unwrap_or_default() - e.get(hi).unwrap_or_default() - e.get(lo).unwrap_or_default();
            resid = resid.max(r.norm());
            steps += 1;
            lo = mid;
            mid = hi;
        }
        let mut row = ReportRow::new("prime", &[("p", p as f64), ("abs_bp", bp.norm()), ("steps", steps as f64)], bp);
        row.bound = prec;
        row.ratio = resid / prec;
        row.pass = Some(resid < prec);
        if bp.norm() > 2.0 + prec {
            row.note = format!("Ramanujan bound violated at p = {p}");
            violations.push(p);
        }
        rep.rows.push(row);
    }
    rep.meta("lambda", json!(e.lambda));
    rep.meta("parity", json!(e.parity));
    rep.meta("precision", json!(prec));
    rep.meta("k_max", json!(e.k_max));
    rep.meta("ramanujan_violations", json!(violations));
    Ok(rep)
}
