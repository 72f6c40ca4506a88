use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::Serialize;

use crate::cf::ConvergentTable;
use crate::error::{Error, Result};
use crate::rational::big_ln;

const LN2: f64 = std::f64::consts::LN_2;

/// Largest `m` accepted by [`luczak_count`].
pub const LUCZAK_MAX_M: u64 = 1 << 40;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LuczakCount {
    pub m: u64,
    pub k: u32,
    pub count: u128,
    /// `m (2 + ln m)^{k-1}`
    pub bound: f64,
}

/// `S(m, k)`: sequences of length `1..=k` of positive integers with product `<= m`.
pub fn luczak_count(m: u64, k: u32) -> Result<LuczakCount> {
    if m == 0 || k == 0 {
        return Err(Error::Domain("S(m, k) needs m >= 1 and k >= 1".into()));
    }
    if m > LUCZAK_MAX_M {
        return Err(Error::Resource(format!("m = {m} exceeds the counting limit {LUCZAK_MAX_M}")));
    }
    let mut memo = HashMap::new();
    let mut count: u128 = 0;
    for len in 1..=k {
        count = count
            .checked_add(exact_len(m, len, &mut memo)?)
            .ok_or_else(|| Error::Resource("S(m, k) overflows 128 bits".into()))?;
    }
    let bound = m as f64 * (2.0 + (m as f64).ln()).powi(k as i32 - 1);
    Ok(LuczakCount { m, k, count, bound })
}

// Sequences of exactly `len` terms with product <= m:
// T(m, len) = Σ_a T(⌊m/a⌋, len-1), grouped over equal quotients.
fn exact_len(m: u64, len: u32, memo: &mut HashMap<(u64, u32), u128>) -> Result<u128> {
    if len == 0 {
        return Ok(1);
    }
    if len == 1 {
        return Ok(m as u128);
    }
    if m == 1 {
        return Ok(1);
    }
    if let Some(&v) = memo.get(&(m, len)) {
        return Ok(v);
    }
    let mut total: u128 = 0;
    let mut a = 1u64;
    while a <= m {
        let q = m / a;
        let last = m / q;
        let sub = exact_len(q, len - 1, memo)?;
        total = (sub * (last - a + 1) as u128)
            .checked_add(total)
            .ok_or_else(|| Error::Resource("S(m, k) overflows 128 bits".into()))?;
        a = last + 1;
    }
    memo.insert((m, len), total);
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    /// Exact `S(2^i, k)`.
    Exact,
    /// `2^i (2 + i ln 2)^{½ log_d(3 i log_c 2)}`.
    Bound,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverWeights {
    pub exponent: f64,
    /// `(i, term, count mode)` for the dyadic blocks `q ∈ [2^{i-1}, 2^i]`.
    pub i_terms: Vec<(u64, f64, CountMode)>,
    pub i_partial: f64,
    /// `(q, 2q (2 q^{-2(1+d²)})^e)`
    pub j_terms: Vec<(u64, f64)>,
    pub j_partial: f64,
}

impl CoverWeights {
    pub fn last_i_term(&self) -> f64 {
        self.i_terms.last().map_or(0.0, |t| t.1)
    }

    pub fn last_j_term(&self) -> f64 {
        self.j_terms.last().map_or(0.0, |t| t.1)
    }
}

/// Partial sums of the two series bounding `Λ_e` of the covers, over
/// block indices `i` and denominators `q` in `m_low..=m_high`.
///
/// Blocks with `2^i <= exact_count_limit` use the exact count `S(2^i, k)` in
/// place of its upper bound.
pub fn cover_weight_ebc(
    m_low: u64,
    m_high: u64,
    d: f64,
    c: f64,
    exponent: f64,
    exact_count_limit: u64,
) -> Result<CoverWeights> {
    if !(d > 1.0 && c > 1.0) {
        return Err(Error::Domain("need d > 1 and c > 1".into()));
    }
    if !(exponent > 1.0 / (1.0 + d * d)) {
        return Err(Error::Domain(format!(
            "exponent {exponent} must exceed 1/(1+d²) = {}; the series diverges otherwise",
            1.0 / (1.0 + d * d)
        )));
    }
    if m_low == 0 || m_low > m_high {
        return Err(Error::Domain("need 1 <= m_low <= m_high".into()));
    }
    let e = exponent;
    let mut i_terms = Vec::new();
    let mut i_partial = 0.0;
    for i in m_low..=m_high {
        let fi = i as f64;
        let kexp = 0.5 * (3.0 * fi * LN2 / c.ln()).ln() / d.ln();
        let ln_weight = (1.0 - (fi - 1.0) * (1.0 + d * d)) * e * LN2;
        let (ln_count, mode) = if i < 64 && (1u64 << i) <= exact_count_limit {
            let k = (kexp.floor().max(0.0) as u32).max(1);
            let s = luczak_count(1u64 << i, k)?;
            ((s.count as f64).ln(), CountMode::Exact)
        } else {
            (fi * LN2 + kexp * (2.0 + fi * LN2).ln(), CountMode::Bound)
        };
        let term = (ln_count + ln_weight).exp();
        i_partial += term;
        i_terms.push((i, term, mode));
    }
    let mut j_terms = Vec::new();
    let mut j_partial = 0.0;
    for q in m_low..=m_high {
        let fq = q as f64;
        let term = (LN2 + fq.ln() + e * (LN2 - 2.0 * (1.0 + d * d) * fq.ln())).exp();
        j_partial += term;
        j_terms.push((q, term));
    }
    Ok(CoverWeights { exponent, i_terms, i_partial, j_terms, j_partial })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MkBranch {
    /// Every `m_j` counted exactly.
    Exact,
    /// Some `m_j` replaced by `2 c^{b^{2j}}`.
    Surrogate,
}

#[derive(Clone, Debug, Serialize)]
pub struct NestedRatio {
    pub b: f64,
    pub c: f64,
    pub k: u32,
    /// Closed-form ratio after inserting the bounds on `m_j` and `ε_k`.
    pub ratio: f64,
    /// `ln(m_1⋯m_{k-1}) / -ln(m_k ε_k)` with counted `m_j`.
    pub direct: f64,
    pub branch: MkBranch,
    pub limit: f64,
}

/// `R_k` for the nested construction with `c^{b^{2j}} <= a_{2j} <= 3c^{b^{2j}}`.
///
/// Everything is divided by `b^{2k}` before combining, so large `k` stays finite.
pub fn nested_ek_ratio(b: f64, c: f64, k: u32) -> Result<NestedRatio> {
    if !(b > 1.0 && c > 1.0) {
        return Err(Error::Domain("need b > 1 and c > 1".into()));
    }
    if k == 0 {
        return Err(Error::Domain("k must be >= 1".into()));
    }
    let (b2, lc, fk) = (b * b, c.ln(), k as f64);
    let inv = b.powf(-2.0 * fk); // b^{-2k}
    let num = fk * LN2 * inv + (1.0 - b2 * inv) * lc;
    let den = (b2 + 1.0 - 2.0 * b2 * inv) * lc + (b2 - 1.0) * (3f64.ln() + 6.0 * fk * LN2) * inv;
    let ratio = num / den;

    // ln m_j / b^{2k}, exact when c^{b^{2j}} is small enough to count.
    let mut branch = MkBranch::Exact;
    let mut ln_m_scaled = |j: u32| {
        let big = b.powf(2.0 * j as f64) * lc; // ln c^{b^{2j}}
        if big < 50.0 * LN2 {
            let x = big.exp();
            let count = (3.0 * x).floor() - x.ceil() + 1.0;
            count.ln() * inv
        } else {
            branch = MkBranch::Surrogate;
            LN2 * inv + b.powf(2.0 * (j as f64 - fk)) * lc
        }
    };
    let numer: f64 = (1..k).map(&mut ln_m_scaled).sum();
    let ln_mk = ln_m_scaled(k);
    // -ln ε_k <= ln 3 + 6k ln 2 + 2b²(b^{2k}-1)/(b²-1) ln c
    let neg_ln_eps = (3f64.ln() + 6.0 * fk * LN2) * inv + 2.0 * b2 * (1.0 - inv) / (b2 - 1.0) * lc;
    let direct = numer / (neg_ln_eps - ln_mk);
    Ok(NestedRatio { b, c, k, ratio, direct, branch, limit: 1.0 / (1.0 + b2) })
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthCheck {
    /// Position `n + 1` whose quotient was inserted.
    pub n_plus_one: usize,
    pub ln_q_next: f64,
    pub ln_bound: f64,
    pub holds: bool,
}

/// Builds `[0; 1, a_2, 1, a_4, ...]` with `a_{2j} = c^{b^{2j}}` at the inserted
/// positions (1 elsewhere) and checks `q_{2n+2} > max(q_{2n}^{d²}, c^{d^{2n+2}})`
/// at each inserted position `n + 1 >= 2`, with `d = (1 + b)/2`.
pub fn superexp_growth_check(b: u32, c: u32, inserted: &[usize], depth: usize) -> Result<Vec<GrowthCheck>> {
    if b < 2 || c < 2 {
        return Err(Error::Domain("need integers b, c >= 2".into()));
    }
    let mut exps = Vec::with_capacity(depth);
    for j in 1..=depth {
        let e = (b as u64).checked_pow(2 * j as u32).filter(|&e| e <= 1 << 20).ok_or_else(|| {
            Error::Resource(format!("c^(b^{}) is too large to build", 2 * j))
        })?;
        exps.push(e);
    }
    let mut t = ConvergentTable::new(0);
    let d = (1.0 + b as f64) / 2.0;
    let mut out = Vec::new();
    for j in 1..=depth {
        let a = if inserted.contains(&j) {
            Pow::pow(BigUint::from(c), exps[j - 1])
        } else {
            BigUint::one()
        };
        t.push_u64(1);
        t.push(&a);
        if j >= 2 && inserted.contains(&j) {
            let q_prev = big_ln(t.q(2 * j - 2).magnitude());
            let q_next = big_ln(t.q(2 * j).magnitude());
            let bound = (d * d * q_prev).max(d.powi(2 * j as i32) * (c as f64).ln());
            out.push(GrowthCheck { n_plus_one: j, ln_q_next: q_next, ln_bound: bound, holds: q_next > bound });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(m: u64, k: u32) -> u128 {
        fn go(m: u64, left: u32) -> u128 {
            if left == 0 {
                return 0;
            }
            (1..=m).map(|a| 1 + go(m / a, left - 1)).sum()
        }
        go(m, k)
    }

    #[test]
    fn luczak_examples() {
        let s = luczak_count(4, 2).unwrap();
        assert_eq!(s.count, 12);
        assert!((s.bound - 4.0 * (2.0 + 4f64.ln())).abs() < 1e-12);
        assert_eq!(luczak_count(1, 5).unwrap().count, 5);
        assert_eq!(luczak_count(37, 1).unwrap().count, 37);
        for m in 1..=30 {
            for k in 1..=4 {
                assert_eq!(luczak_count(m, k).unwrap().count, brute(m, k), "S({m},{k})");
            }
        }
        assert!(matches!(luczak_count(u64::MAX, 3), Err(Error::Resource(_))));
    }

    #[test]
    fn cover_series() {
        let w = cover_weight_ebc(1, 200, 2.0, 2.0, 0.25, 1 << 12).unwrap();
        let tail: Vec<f64> = w.j_terms.iter().skip(1).map(|t| t.1).collect();
        assert!(tail.windows(2).all(|p| p[1] < p[0]));
        let q: f64 = 100.0;
        let expect = 2f64.powf(1.25) * q.powf(1.0 - 2.5);
        assert!((w.j_terms[99].1 - expect).abs() < 1e-12 * expect);
        assert!(matches!(cover_weight_ebc(1, 10, 2.0, 2.0, 0.2, 0), Err(Error::Domain(_))));
        let more = cover_weight_ebc(1, 300, 2.0, 2.0, 0.25, 1 << 12).unwrap();
        assert!(more.j_partial >= w.j_partial && more.i_partial >= w.i_partial);
    }

    #[test]
    fn nested_ratio_values() {
        let r = nested_ek_ratio(2.0, 2.0, 8).unwrap();
        let l2 = LN2;
        let expect = 65540.0 * l2 / (327816.0 * l2 + 3.0 * 3f64.ln());
        assert!((r.ratio - expect).abs() < 1e-12);
        assert!((r.ratio - 0.2).abs() <= 0.001);
        let big = nested_ek_ratio(1.5, 3.0, 2000).unwrap();
        assert!((big.ratio - 1.0 / 3.25).abs() < 1e-6);
        assert_eq!(big.branch, MkBranch::Surrogate);
    }

    #[test]
    fn superexp_growth_instances() {
        let checks = superexp_growth_check(2, 2, &[1, 2, 3, 4], 4).unwrap();
        assert_eq!(checks.len(), 3);
        assert!(checks.iter().all(|c| c.holds), "{checks:?}");
    }
}
