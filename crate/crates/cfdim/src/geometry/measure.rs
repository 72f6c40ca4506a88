use std::collections::BTreeMap;

use super::{enumerate_dn, fundamental_interval, AdmissibleWord, Schedule};
use crate::error::{Error, Result};
use crate::pressure::{solve_s, CompensatedSum, PressureProblem, PressureSolution};

/// `μ(J(w))` with the block exponents it consumed.
#[derive(Clone, Debug)]
pub struct MeasureNode {
    pub word: AdmissibleWord,
    pub mu: f64,
    pub ln_mu: f64,
    pub error_bound: f64,
    /// `(m_j, s_{m_j,B}(α))` for every block with `m_j >= 1`.
    pub exponents_used: Vec<(usize, f64)>,
}

/// Solves `s_{m,B}(α)` for every gap length `m >= 1` the schedule needs.
pub fn s_table_for<F>(s: &Schedule, tol: f64, mut solve: F) -> Result<BTreeMap<usize, f64>>
where
    F: FnMut(&PressureProblem, f64) -> Result<PressureSolution>,
{
    let mut table = BTreeMap::new();
    for &m in s.gaps() {
        if m >= 1 && !table.contains_key(&m) {
            let p = PressureProblem::new(
                crate::pressure::Alphabet::Bound(s.alpha()),
                s.base().clone(),
                m,
            )?;
            table.insert(m, solve(&p, tol)?.s_value);
        }
    }
    Ok(table)
}

/// Convenience: [`s_table_for`] with the plain solver.
pub fn default_s_table(s: &Schedule, tol: f64) -> Result<BTreeMap<usize, f64>> {
    s_table_for(s, tol, |p, t| solve_s(p, t))
}

fn q2m(block: &[u64]) -> f64 {
    // q_{2m}(1, b_1, ..., 1, b_m)
    let (mut q_even, mut q_odd) = (1u128, 0u128);
    for &b in block {
        let o = q_even + q_odd;
        q_even = b as u128 * o + q_even;
        q_odd = o;
    }
    q_even as f64
}

struct Ctx<'a> {
    s: &'a Schedule,
    table: &'a BTreeMap<usize, f64>,
    ln_b: f64,
    used: Vec<(usize, f64)>,
}

impl Ctx<'_> {
    fn exponent(&mut self, m: usize) -> Result<f64> {
        let v = *self.table.get(&m).ok_or_else(|| {
            Error::Config(format!("exponent s_{{{m},B}}(α) missing from the s-table"))
        })?;
        if !self.used.iter().any(|(k, _)| *k == m) {
            self.used.push((m, v));
        }
        Ok(v)
    }

    /// `ln (B^{2m} q_{2m}(block)^2)^{-s_m}`; 0 for an empty block.
    fn ln_block(&mut self, block: &[u64], full_len: usize) -> Result<f64> {
        if full_len == 0 {
            return Ok(0.0);
        }
        let e = self.exponent(full_len)?;
        Ok(-e * (2.0 * full_len as f64 * self.ln_b + 2.0 * q2m(block).ln()))
    }
}

/// `μ(J(w))` by the closed forms at scheduled and pre-scheduled depths and by
/// summing the free tail in between.
pub fn measure_mu(
    s: &Schedule,
    w: &AdmissibleWord,
    table: &BTreeMap<usize, f64>,
    budget: u64,
) -> Result<MeasureNode> {
    let sigma = w.sigma();
    let n = sigma.len();
    let idx = s.indices();
    let mut ctx = Ctx { s, table, ln_b: s.base().ln(), used: Vec::new() };

    // Scheduled indices reached by w.
    let k = idx.iter().take_while(|&&i| i <= n).count();
    let mut ln_mu = 0.0;
    let mut ops = 0usize;
    let mut prev = 0;
    for j in 0..k {
        let nj = idx[j];
        let m = s.gaps()[j];
        ln_mu += ctx.ln_block(&sigma[prev..nj - 1], m)? - (s.floor_power(j) as f64).ln();
        prev = nj;
        ops += m + 2;
    }
    let nk = idx[k - 1];
    if n == nk {
        if k == 1 {
            // μ(J(σ_2)) = 1/[B²], kept exact rather than round-tripped through ln.
            let mu = 1.0 / s.floor_power(0) as f64;
            return Ok(MeasureNode { word: w.clone(), mu, ln_mu, error_bound: 0.0, exponents_used: ctx.used });
        }
        return Ok(node(w, ln_mu, ops, 0, ctx.used));
    }
    let Some(&next) = idx.get(k) else {
        return Err(Error::Config(format!(
            "schedule {:?} does not extend beyond depth {n}; μ is undefined there",
            idx
        )));
    };
    let m = next - nk - 1;
    let head = &sigma[nk..n];
    if n == next - 1 {
        ln_mu += ctx.ln_block(head, m)?;
        return Ok(node(w, ln_mu, ops + m, 0, ctx.used));
    }

    // Free tail σ_{2(n+1)}, ..., σ_{2(n_{k+1}-1)}.
    let tail = m - head.len();
    let alpha = ctx.s.alpha();
    let count = alpha.checked_pow(tail as u32).filter(|&c| c <= budget).ok_or_else(|| {
        Error::Resource(format!("free tail of {alpha}^{tail} words exceeds the budget of {budget}"))
    })?;
    let e = ctx.exponent(m)?;
    let scale = -e * 2.0 * m as f64 * ctx.ln_b;
    let mut block = head.to_vec();
    let mut acc = CompensatedSum::default();
    tail_sum(&mut block, tail, alpha, e, &mut acc);
    let ln_tail = scale + acc.value().ln();
    ln_mu += ln_tail;
    Ok(node(w, ln_mu, ops + m, count as usize, ctx.used))
}

fn tail_sum(block: &mut Vec<u64>, remaining: usize, alpha: u64, e: f64, acc: &mut CompensatedSum) {
    if remaining == 0 {
        acc.add(q2m(block).powf(-2.0 * e));
        return;
    }
    for a in 1..=alpha {
        block.push(a);
        tail_sum(block, remaining - 1, alpha, e, acc);
        block.pop();
    }
}

fn node(w: &AdmissibleWord, ln_mu: f64, ops: usize, terms: usize, used: Vec<(usize, f64)>) -> MeasureNode {
    let mu = ln_mu.exp();
    let error_bound = mu * 8.0 * (ops + terms + 1) as f64 * f64::EPSILON;
    MeasureNode { word: w.clone(), mu, ln_mu, error_bound, exponents_used: used }
}

#[derive(Clone, Debug)]
pub struct ChildSumReport {
    /// Level-1 total; each of the `[B^2]` words has mass exactly `1/[B^2]`.
    pub level1_total: f64,
    pub level1_words: u64,
    pub nodes_checked: usize,
    pub max_relative_error: f64,
}

/// Compares every node up to `depth - 1` with the sum of its children.
pub fn child_sum_check(
    s: &Schedule,
    table: &BTreeMap<usize, f64>,
    depth: usize,
    budget: u64,
) -> Result<ChildSumReport> {
    let mut level1 = CompensatedSum::default();
    let mut level1_words = 0;
    for w in enumerate_dn(s, 1, budget)? {
        level1.add(measure_mu(s, &w, table, budget)?.mu);
        level1_words += 1;
    }
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for n in 1..depth {
        let (lo, hi) = s.range(n + 1);
        for w in enumerate_dn(s, n, budget)? {
            let parent = measure_mu(s, &w, table, budget)?.mu;
            let mut acc = CompensatedSum::default();
            for c in lo..=hi {
                let mut sig = w.sigma().to_vec();
                sig.push(c);
                let child = s.word(sig)?;
                acc.add(measure_mu(s, &child, table, budget)?.mu);
            }
            worst = worst.max((acc.value() - parent).abs() / parent);
            checked += 1;
        }
    }
    Ok(ChildSumReport {
        level1_total: level1.value(),
        level1_words,
        nodes_checked: checked,
        max_relative_error: worst,
    })
}

/// `ε`, `t = s_B(α) - 2ε`, `k_0`, and `c_I = ∏_{j<=k_0} B^{2(n_1+...+n_j)} α^{n_j}`.
#[derive(Clone, Debug)]
pub struct EstimationParams {
    pub epsilon: f64,
    pub t: f64,
    pub k0: usize,
    pub ln_c_i: f64,
}

impl EstimationParams {
    pub fn new(s: &Schedule, s_b_alpha: f64, epsilon: f64, k0: usize) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 0.25) {
            return Err(Error::Domain(format!("ε must lie in (0, 1/4), got {epsilon}")));
        }
        let t = s_b_alpha - 2.0 * epsilon;
        if !(t > 0.0) {
            return Err(Error::Domain(format!("t = s_B(α) - 2ε = {t} must be positive")));
        }
        if k0 == 0 || k0 > s.indices().len() {
            return Err(Error::Domain(format!("k_0 = {k0} must be in 1..={}", s.indices().len())));
        }
        let ln_b = s.base().ln();
        let ln_a = (s.alpha() as f64).ln();
        let mut partial = 0usize;
        let mut ln_c_i = 0.0;
        for &nj in &s.indices()[..k0] {
            partial += nj;
            ln_c_i += 2.0 * partial as f64 * ln_b + nj as f64 * ln_a;
        }
        Ok(EstimationParams { epsilon, t, k0, ln_c_i })
    }

    pub fn c_i(&self) -> f64 {
        self.ln_c_i.exp()
    }
}

#[derive(Clone, Debug)]
pub struct HolderReport {
    pub nodes: usize,
    /// Words where `ln(μ/c_I)/ln|J| < t - ε`, with the ratio found.
    pub violations: Vec<(AdmissibleWord, f64)>,
    /// Smallest `ln(μ/c_I)/ln|J| - (t - ε)` seen.
    pub min_margin: f64,
}

/// Checks `μ(J) <= c_I |J|^{t-ε}` on every word of depth `1..=depth`.
pub fn holder_scan(
    s: &Schedule,
    table: &BTreeMap<usize, f64>,
    params: &EstimationParams,
    depth: usize,
    budget: u64,
) -> Result<HolderReport> {
    let target = params.t - params.epsilon;
    let mut report = HolderReport { nodes: 0, violations: Vec::new(), min_margin: f64::INFINITY };
    for n in 1..=depth {
        for w in enumerate_dn(s, n, budget)? {
            let mu = measure_mu(s, &w, table, budget)?;
            let ln_j = fundamental_interval(s, &w).length.ln();
            let ratio = (mu.ln_mu - params.ln_c_i) / ln_j;
            report.nodes += 1;
            report.min_margin = report.min_margin.min(ratio - target);
            if ratio < target {
                report.violations.push((w, ratio));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(indices: Vec<usize>, b: f64, alpha: u64) -> (Schedule, BTreeMap<usize, f64>) {
        let s = Schedule::from_f64(indices, b, alpha).unwrap();
        let t = default_s_table(&s, 1e-13).unwrap();
        (s, t)
    }

    #[test]
    fn level_one_masses() {
        let (s, t) = setup(vec![1, 3], 2.0, 3);
        for w in enumerate_dn(&s, 1, 100).unwrap() {
            assert!((measure_mu(&s, &w, &t, 1000).unwrap().mu - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn children_sum_to_parent() {
        let (s, t) = setup(vec![1, 3], 2.0, 3);
        let r = child_sum_check(&s, &t, 3, 1 << 20).unwrap();
        assert!((r.level1_total - 1.0).abs() < 1e-15);
        assert!(r.max_relative_error < 1e-12, "{}", r.max_relative_error);
        let (s, t) = setup(vec![1, 4], 3.0, 2);
        let r = child_sum_check(&s, &t, 3, 1 << 20).unwrap();
        assert!(r.max_relative_error < 1e-12, "{}", r.max_relative_error);
    }

    #[test]
    fn schedule_must_cover_depth() {
        let (s, t) = setup(vec![1, 3], 2.0, 2);
        let w = s.word(vec![5, 1, 65, 1]).unwrap();
        assert!(matches!(measure_mu(&s, &w, &t, 1000), Err(Error::Config(_))));
        let empty = BTreeMap::new();
        let w = s.word(vec![5, 1]).unwrap();
        assert!(matches!(measure_mu(&s, &w, &empty, 1000), Err(Error::Config(_))));
    }

    #[test]
    fn estimation_params_domain() {
        let s = Schedule::from_f64(vec![1, 3], 2.0, 3).unwrap();
        assert!(EstimationParams::new(&s, 0.3, 0.3, 1).is_err());
        assert!(EstimationParams::new(&s, 0.05, 0.05, 1).is_err());
        let p = EstimationParams::new(&s, 0.3, 0.05, 2).unwrap();
        // B^{2·1} α^1 · B^{2·4} α^3 = 4·3 · 256·27
        assert!((p.c_i() - 4.0 * 3.0 * 256.0 * 27.0).abs() < 1e-6);
    }
}
