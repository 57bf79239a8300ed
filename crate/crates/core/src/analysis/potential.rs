//! Potentials, thresholds, stage counts, and concentration-bound constants
//! for the BL round analysis.
//!
//! All logarithms are base 2. Quantities that overflow `f64` at moderate
//! dimension (`v_i`, `T_j`, `q_j`, `k(H)`, `p(H)`) are carried in log₂ form;
//! `v` and `T` are also given directly and saturate to `+inf`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::degree::degree_profile;
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Additive constant of the `f` recurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// `f(i) = (i-1) Σ_{j<i} f(j) + 7`.
    KelsenOriginal,
    /// `f(i) = (i-1) Σ_{j<i} f(j) + d²`.
    ModifiedD2,
}

impl Variant {
    pub fn constant(self, d: usize) -> u128 {
        match self {
            Variant::KelsenOriginal => 7,
            Variant::ModifiedD2 => (d * d) as u128,
        }
    }
}

/// `f(2..=d)` and `F(1..=d)` with `F(1) = 0`, `F(i) = Σ_{j=2}^{i} f(j)`,
/// equivalently `F(i) = i·F(i-1) + c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Recurrence {
    pub f: BTreeMap<usize, u128>,
    #[serde(rename = "F")]
    pub big_f: BTreeMap<usize, u128>,
}

pub fn recurrence(d: usize, variant: Variant) -> Result<Recurrence> {
    let c = variant.constant(d);
    let overflow = || Error::InvalidConfig(format!("recurrence overflows at d = {d}"));
    let mut f = BTreeMap::new();
    let mut big_f = BTreeMap::new();
    big_f.insert(1, 0u128);
    let mut prefix: u128 = 0;
    for i in 2..=d {
        let fi = ((i - 1) as u128).checked_mul(prefix).and_then(|x| x.checked_add(c)).ok_or_else(overflow)?;
        prefix = prefix.checked_add(fi).ok_or_else(overflow)?;
        f.insert(i, fi);
        big_f.insert(i, prefix);
    }
    Ok(Recurrence { f, big_f })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PotentialReport {
    pub variant: Variant,
    pub d: usize,
    pub n: usize,
    pub log_n: f64,
    pub f: BTreeMap<usize, u128>,
    #[serde(rename = "F")]
    pub big_f: BTreeMap<usize, u128>,
    pub v: BTreeMap<usize, f64>,
    pub v_log2: BTreeMap<usize, f64>,
    #[serde(rename = "T")]
    pub t: BTreeMap<usize, f64>,
    #[serde(rename = "T_log2")]
    pub t_log2: BTreeMap<usize, f64>,
    pub q_log2: BTreeMap<usize, f64>,
    pub lambda_n: f64,
}

/// `v_d = Δ_d`, `v_i = max(Δ_i, (log n)^{f(i)} v_{i+1})`,
/// `T_j = v_2 / (log n)^{F(j-1)}`,
/// `q_j = 2^{d(d+1)} · log log n · (log n)^{F(j-1)(j-1)+2}`,
/// `λ(n) = 2 log log n / log n`.
pub fn potential_report(h: &Hypergraph, variant: Variant) -> Result<PotentialReport> {
    let n = h.num_vertices();
    if n < 3 {
        return Err(Error::Precondition(format!("potentials need n >= 3, got {n}")));
    }
    let prof = degree_profile(h)?;
    let d = prof.dim;
    if d < 2 {
        return Err(Error::Precondition(format!("potentials need dimension >= 2, got {d}")));
    }
    let rec = recurrence(d, variant)?;
    let log_n = (n as f64).log2();
    let loglog = log_n.log2();

    let mut v = BTreeMap::new();
    let mut v_log2 = BTreeMap::new();
    v.insert(d, prof.delta_i[&d]);
    v_log2.insert(d, prof.delta_i[&d].log2());
    for i in (2..d).rev() {
        let fi = rec.f[&i] as f64;
        let delta = prof.delta_i[&i];
        let scaled = log_n.powf(fi) * v[&(i + 1)];
        v.insert(i, if delta >= scaled { delta } else { scaled });
        let scaled_log = fi * loglog + v_log2[&(i + 1)];
        v_log2.insert(i, delta.log2().max(scaled_log));
    }

    let mut t = BTreeMap::new();
    let mut t_log2 = BTreeMap::new();
    let mut q_log2 = BTreeMap::new();
    let v2 = v[&2];
    let v2_log = v_log2[&2];
    for j in 2..=d {
        let fj1 = rec.big_f[&(j - 1)] as f64;
        let denom = log_n.powf(fj1);
        t.insert(j, if denom.is_finite() { v2 / denom } else { (v2_log - fj1 * loglog).exp2() });
        t_log2.insert(j, v2_log - fj1 * loglog);
        let exponent = fj1 * (j - 1) as f64 + 2.0;
        q_log2.insert(j, (d * (d + 1)) as f64 + loglog.log2() + exponent * loglog);
    }

    Ok(PotentialReport {
        variant,
        d,
        n,
        log_n,
        f: rec.f,
        big_f: rec.big_f,
        v,
        v_log2,
        t,
        t_log2,
        q_log2,
        lambda_n: 2.0 * loglog / log_n,
    })
}

/// One row of the `F` sufficiency table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FCheckRow {
    pub variant: Variant,
    pub d: usize,
    /// `F(j) >= j·F(j-1) + 5` for every `2 <= j <= d`.
    pub inequality_holds: bool,
    pub first_failure: Option<usize>,
    /// Largest `2^{k-j+1} + j·F(j-1) - F(k-1) + 2` over `2 <= j < k <= d`.
    pub max_exponent: Option<i128>,
    /// Whether that maximum is attained at some `k = j + 1`.
    pub adjacent_is_max: bool,
}

pub fn f_check(d: usize, variant: Variant) -> Result<FCheckRow> {
    let rec = recurrence(d, variant)?;
    let big_f = |i: usize| rec.big_f[&i] as i128;
    let first_failure = (2..=d).find(|&j| big_f(j) < j as i128 * big_f(j - 1) + 5);
    let mut max_exponent: Option<i128> = None;
    let mut adjacent_max: Option<i128> = None;
    for j in 2..d {
        for k in (j + 1)..=d {
            let e = (1i128 << (k - j + 1)) + j as i128 * big_f(j - 1) - big_f(k - 1) + 2;
            max_exponent = Some(max_exponent.map_or(e, |m| m.max(e)));
            if k == j + 1 {
                adjacent_max = Some(adjacent_max.map_or(e, |m| m.max(e)));
            }
        }
    }
    Ok(FCheckRow {
        variant,
        d,
        inequality_holds: first_failure.is_none(),
        first_failure,
        max_exponent,
        adjacent_is_max: max_exponent == adjacent_max,
    })
}

/// Both variants for every `d` in `dims`.
pub fn f_check_table(dims: std::ops::RangeInclusive<usize>) -> Result<Vec<FCheckRow>> {
    let mut rows = Vec::new();
    for d in dims {
        for variant in [Variant::ModifiedD2, Variant::KelsenOriginal] {
            rows.push(f_check(d, variant)?);
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundConstants {
    pub n: usize,
    pub d: usize,
    pub m: usize,
    pub delta_param: f64,
    /// `log₂ k(H)`, `k(H) = (log n + 2)^{2^d - 1} · δ^{2^{d-1}}`.
    pub k_h_log2: f64,
    /// `log₂ p(H)`, `p(H) = (2^d ⌈log n⌉ m)^{d-1} · log n · (4e/(δ-1))^{(δ-1)/4}`.
    pub p_h_log2: f64,
    /// `a_t = 8^t · √(t!)` for `1 <= t <= d`.
    pub kimvu_a: BTreeMap<usize, f64>,
    /// `log₂ (log n)^{2^{d+1}}`, the tail factor at `δ = log² n`.
    pub corollary_factor_log2: f64,
}

impl BoundConstants {
    /// Whether the tail bound says anything (`p(H) < 1`).
    pub fn is_informative(&self) -> bool {
        self.p_h_log2 < 0.0
    }
}

pub fn default_delta(n: usize) -> f64 {
    let lg = (n as f64).log2();
    lg * lg
}

pub fn kelsen_k_log2(n: usize, d: usize, delta: f64) -> f64 {
    let lg = (n as f64).log2();
    let e1 = 2f64.powi(d as i32) - 1.0;
    let e2 = 2f64.powi(d as i32 - 1);
    e1 * (lg + 2.0).log2() + e2 * delta.log2()
}

pub fn kelsen_p_log2(n: usize, d: usize, m: usize, delta: f64) -> f64 {
    let lg = (n as f64).log2();
    let prefix = if d <= 1 {
        0.0
    } else {
        (d - 1) as f64 * (d as f64 + lg.ceil().log2() + (m as f64).log2())
    };
    let x = delta - 1.0;
    let tail = (x / 4.0) * (4.0 * std::f64::consts::E / x).log2();
    prefix + lg.log2() + tail
}

pub fn kimvu_a(t: usize) -> f64 {
    let fact: f64 = (1..=t).map(|i| i as f64).product();
    8f64.powi(t as i32) * fact.sqrt()
}

/// `(1 + a_{k-j} λ^{k-j}) · Δ_{|x|+k}^j`.
pub fn kimvu_threshold(k_minus_j: usize, lambda: f64, delta_xk: f64, j: usize) -> f64 {
    (1.0 + kimvu_a(k_minus_j) * lambda.powi(k_minus_j as i32)) * delta_xk.powi(j as i32)
}

/// `2e² e^{-λ} n^{k-j-1}`.
pub fn kimvu_tail_bound(lambda: f64, n: usize, k_minus_j: usize) -> f64 {
    let e = std::f64::consts::E;
    2.0 * e * e * (-lambda).exp() * (n as f64).powi(k_minus_j as i32 - 1)
}

/// Constants of the weighted-polynomial tail bound for `h` (its vertex
/// count, dimension, and edge count). `delta` defaults to `log² n`.
pub fn kelsen_constants(h: &Hypergraph, delta: Option<f64>) -> Result<BoundConstants> {
    let n = h.num_vertices();
    let d = h.dimension();
    if n < 3 {
        return Err(Error::Precondition(format!("bound needs n >= 3, got {n}")));
    }
    if d == 0 {
        return Err(Error::NoEdges);
    }
    let delta = delta.unwrap_or_else(|| default_delta(n));
    if !(delta > 1.0 && delta.is_finite()) {
        return Err(Error::InvalidConfig(format!("delta {delta} must exceed 1")));
    }
    let m = h.num_edges();
    let lg = (n as f64).log2();
    Ok(BoundConstants {
        n,
        d,
        m,
        delta_param: delta,
        k_h_log2: kelsen_k_log2(n, d, delta),
        p_h_log2: kelsen_p_log2(n, d, m, delta),
        kimvu_a: (1..=d).map(|t| (t, kimvu_a(t))).collect(),
        corollary_factor_log2: 2f64.powi(d as i32 + 1) * lg.log2(),
    })
}

/// Chernoff lower tail: `Pr[X_1 + … + X_n <= pn - a] <= exp(-a²/(2pn))`.
pub fn chernoff_lower_tail(p: f64, n: usize, a: f64) -> f64 {
    (-(a * a) / (2.0 * p * n as f64)).exp()
}
