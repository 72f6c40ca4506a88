//! The acceptance battery behind `cfdim verify-suite`.
//!
//! Each check compares the library against an independent oracle (direct
//! evaluation, brute force, or a closed form) and reports pass/fail with a
//! short detail line. Random inputs come from a fixed ChaCha seed.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cf::{compare, cylinder, expand, CfExpansion, ConvergentTable};
use crate::decompose::{decompose, Decomposer, Op, Status};
use crate::dimension::{classify_phi, CaseTag, ClassifyOptions, DimensionValue, PhiFamily, PhiSpec};
use crate::geometry::{
    child_sum_check, default_s_table, enumerate_dn, fundamental_interval, gaps, holder_scan, luczak_count,
    measure_mu, nested_ek_ratio, EstimationParams, GapCase, Schedule,
};
use crate::pressure::{
    extrapolate_sb, pressure_sum, pressure_sum_exact, solve_s, Dyadic, PressureProblem, SummationMode,
};
use crate::rational::Rational;

pub const ALL: [u32; 11] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11];

const SEED: u64 = 0x5eed_cf01;

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionReport {
    /// `[PASS] AC-3 pressure solver: ... (12 ms)`
    pub fn line(&self) -> String {
        format!(
            "[{}] AC-{} {}: {} ({} ms)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_millis()
        )
    }

    pub fn to_json(&self) -> Value {
        json!({ "id": self.id, "title": self.title, "passed": self.passed, "detail": self.detail })
    }
}

pub fn run_suite(ids: &[u32]) -> Vec<CriterionReport> {
    ids.iter().map(|&id| run_criterion(id)).collect()
}

pub fn run_criterion(id: u32) -> CriterionReport {
    let (title, f): (&'static str, fn() -> (bool, String)) = match id {
        1 => ("special decompositions", special_decompositions),
        2 => ("greedy feasibility", greedy_feasibility),
        3 => ("pressure solver", pressure_solver),
        4 => ("monotonicity and subadditivity", monotonicity_grid),
        5 => ("large-B trend", large_b_trend),
        6 => ("geometry exactness", geometry_exactness),
        7 => ("measure", measure_checks),
        8 => ("Luczak count", luczak_checks),
        9 => ("nested-ratio convergence", nested_ratio_checks),
        10 => ("classifier cases", classifier_cases),
        11 => ("expansion oracles", expansion_oracles),
        _ => ("unknown", || (false, "no such criterion".into())),
    };
    let t = Instant::now();
    let (passed, detail) = f();
    CriterionReport { id, title, passed, detail, elapsed: t.elapsed() }
}

/// Accumulates failures, keeping the first few messages.
#[derive(Default)]
struct Failures {
    count: usize,
    first: Vec<String>,
}

impl Failures {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        if !ok {
            self.count += 1;
            if self.first.len() < 3 {
                self.first.push(msg());
            }
        }
    }

    fn finish(self, summary: String) -> (bool, String) {
        if self.count == 0 {
            (true, summary)
        } else {
            (false, format!("{} failures; {}; {summary}", self.count, self.first.join("; ")))
        }
    }
}

fn q(s: &str) -> Rational {
    s.parse().expect("literal")
}

pub fn special_decompositions() -> (bool, String) {
    let cases = [
        (Op::Sum, "3/2", "[0;1,1]", "[0;1]"),
        (Op::Sum, "2", "[0;1]", "[0;1]"),
        (Op::Product, "1/2", "[0;1,1]", "[0;1]"),
        (Op::Product, "1", "[0;1]", "[0;1]"),
    ];
    let mut f = Failures::default();
    let mut slowest = Duration::ZERO;
    for (op, x, a, b) in cases {
        let x = q(x);
        let mut best = Duration::MAX;
        let mut result = None;
        for _ in 0..5 {
            let t = Instant::now();
            let r = decompose(op, &x, 32);
            best = best.min(t.elapsed());
            result = Some(r);
        }
        slowest = slowest.max(best);
        match result.unwrap() {
            Err(e) => f.check(false, || format!("{x}: {e}")),
            Ok(r) => {
                let (ea, eb) = (r.first.to_expansion(), r.second.to_expansion());
                f.check(r.status == Status::TerminatedExactly, || format!("{x}: status {:?}", r.status));
                f.check(ea.to_string() == a && eb.to_string() == b, || format!("{x}: got {ea} and {eb}"));
                let combined = match op {
                    Op::Sum => ea.evaluate() + eb.evaluate(),
                    Op::Product => ea.evaluate() * eb.evaluate(),
                };
                f.check(combined == x && r.width().is_zero(), || format!("{x}: residual {}", &combined - &x));
                f.check(best < Duration::from_millis(1), || format!("{x}: {best:?}"));
            }
        }
    }
    f.finish(format!("4 identities exact, slowest {slowest:?}"))
}

fn random_input(rng: &mut ChaCha8Rng, op: Op) -> Rational {
    let den: i64 = rng.gen_range(2..=1_000_000);
    let num: i64 = rng.gen_range((den + 1) / 2..den);
    let int: i64 = match op {
        Op::Sum => rng.gen_range(1..=50),
        Op::Product => rng.gen_range(0..=50),
    };
    Rational::frac(int * den + num, den)
}

pub fn greedy_feasibility() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut f = Failures::default();
    let (mut exact, mut steps) = (0, 0usize);
    for op in [Op::Sum, Op::Product] {
        for _ in 0..500 {
            let x = random_input(&mut rng, op);
            let mut d = match Decomposer::new(op, &x) {
                Ok(d) => d,
                Err(e) => {
                    f.check(false, || format!("{x}: {e}"));
                    continue;
                }
            };
            let mut width = d.bracket().1.clone() - d.bracket().0.clone();
            while d.status().is_none() && d.steps() < 32 {
                let Some(step) = d.next() else { break };
                steps += 1;
                let (lo, hi) = &step.bracket;
                f.check(lo <= &x && (&x < hi || (lo == hi && lo == &x)), || format!("{x}: bracket [{lo}, {hi})"));
                let w = hi - lo;
                f.check(w <= width, || format!("{x}: width grew at step {}", step.k));
                width = w;
            }
            if let Some(e) = d.take_error() {
                f.check(false, || format!("{} {x}: {e}", op.name()));
                continue;
            }
            let r = d.result();
            exact += usize::from(r.status == Status::TerminatedExactly);
            for seq in [&r.first, &r.second] {
                let e = seq.to_expansion();
                let odd_ok = e.quotients().iter().step_by(2).all(|a| a.is_one());
                f.check(odd_ok, || format!("{x}: odd-order quotient != 1 in {e}"));
            }
        }
    }
    f.finish(format!("1000 inputs, {steps} selections, {exact} terminated exactly, no infeasibility"))
}

/// Bisection on `16^{-ρ} + 36^{-ρ} = 1` from the closed two-term form.
pub fn two_term_oracle() -> f64 {
    let g = |r: f64| (-r * 16f64.ln()).exp() + (-r * 36f64.ln()).exp() - 1.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn pressure_solver() -> (bool, String) {
    let mut f = Failures::default();
    let p = PressureProblem::bounded(2, 2.0, 1).unwrap();
    let s = solve_s(&p, 1e-13).unwrap();
    let oracle = two_term_oracle();
    f.check((s.s_value - oracle).abs() <= 1e-9, || format!("s = {} vs oracle {oracle}", s.s_value));

    // The exact enclosure at dyadics just either side of s must straddle 1.
    let below = Dyadic::new(((s.s_value - 1e-9) * 2f64.powi(40)).floor() as u64, 40);
    let above = Dyadic::new(((s.s_value + 1e-9) * 2f64.powi(40)).ceil() as u64, 40);
    let pe = p.clone().with_mode(SummationMode::ExactRational);
    let lo = pressure_sum_exact(&pe, below, 128).unwrap();
    let hi = pressure_sum_exact(&pe, above, 128).unwrap();
    f.check(lo.lo > Rational::one() && hi.hi < Rational::one(), || "exact enclosures do not straddle 1".into());

    let mut solves = 0;
    let mut worst: f64 = 0.0;
    for &b in &[1.5, 2.0, 4.0, 10.0] {
        for alpha in 1..=4 {
            for n in 1..=3 {
                let p = PressureProblem::bounded(alpha, b, n).unwrap();
                let s = solve_s(&p, 1e-10).unwrap();
                let r = (pressure_sum(&p, s.s_value).unwrap().value - 1.0).abs();
                worst = worst.max(r);
                solves += 1;
                f.check(r <= 1e-9, || format!("|f(s)-1| = {r:e} at B={b} α={alpha} n={n}"));
                if alpha == 1 {
                    f.check(s.s_value == 0.0, || format!("α=1 gave {}", s.s_value));
                }
            }
        }
    }
    f.finish(format!(
        "s = {:.15} (oracle {:.15}), {solves} solves, max |f(s)-1| = {worst:.1e}",
        s.s_value, oracle
    ))
}

pub fn monotonicity_grid() -> (bool, String) {
    let bases = [1.5, 2.0, 4.0, 10.0];
    let tol = 1e-12;
    let slack = 4.0 * tol;
    let mut s = [[[0.0f64; 5]; 5]; 4];
    for (bi, &b) in bases.iter().enumerate() {
        for a in 1..=4u64 {
            for n in 1..=4 {
                let p = PressureProblem::bounded(a, b, n).unwrap();
                s[bi][a as usize][n] = solve_s(&p, tol).unwrap().s_value;
            }
        }
    }
    let mut f = Failures::default();
    let mut checks = 0;
    for bi in 0..4 {
        for a in 1..=4 {
            for n in 1..=4 {
                let v = s[bi][a][n];
                if a > 1 {
                    checks += 1;
                    f.check(s[bi][a - 1][n] <= v + slack, || format!("α-monotonicity B={} α={a} n={n}", bases[bi]));
                }
                if bi > 0 {
                    checks += 1;
                    f.check(v <= s[bi - 1][a][n] + slack, || format!("B-monotonicity B={} α={a} n={n}", bases[bi]));
                }
                if 2 * n <= 4 {
                    checks += 1;
                    f.check(s[bi][a][2 * n] <= v + slack, || format!("s_2n <= s_n B={} α={a} n={n}", bases[bi]));
                }
                for k in 1..=4 - n.min(4) {
                    if n + k <= 4 {
                        checks += 1;
                        f.check(s[bi][a][n + k] <= v.max(s[bi][a][k]) + slack, || {
                            format!("s_(n+k) <= max B={} α={a} n={n} k={k}", bases[bi])
                        });
                    }
                }
            }
        }
    }
    for &b in &bases {
        for a in 1..=4u64 {
            for n in 1..=3 {
                for k in 1..=4 - n {
                    for rho in [0.3, 0.6, 0.9] {
                        let fv = |d: usize| pressure_sum(&PressureProblem::bounded(a, b, d).unwrap(), rho).unwrap().value;
                        let (fn_, fk, fnk) = (fv(n), fv(k), fv(n + k));
                        let prod = fn_ * fk;
                        checks += 1;
                        f.check(fnk <= prod * (1.0 + 1e-12) && fnk >= 0.25 * prod * (1.0 - 1e-12), || {
                            format!("f bounds B={b} α={a} n={n} k={k} ρ={rho}")
                        });
                    }
                }
            }
        }
    }
    f.finish(format!("{checks} relations checked"))
}

/// `(B, s_{3,B}(20))` for `B ∈ {10, 10², 10³}`.
pub fn large_b_values() -> Vec<(f64, f64)> {
    [10.0, 100.0, 1000.0]
        .iter()
        .map(|&b| (b, solve_s(&PressureProblem::bounded(20, b, 3).unwrap(), 1e-10).unwrap().s_value))
        .collect()
}

pub fn large_b_trend() -> (bool, String) {
    let v = large_b_values();
    let d: Vec<f64> = v.iter().map(|(_, s)| (s - 0.5).abs()).collect();
    let decreasing = d.windows(2).all(|w| w[1] < w[0]);
    let close = d[2] <= 0.1;
    let detail = v.iter().map(|(b, s)| format!("s({b})={s:.4}")).collect::<Vec<_>>().join(", ");
    let why = if decreasing && close {
        String::new()
    } else {
        // f_{n,B}(ρ) <= α^n B^{-2nρ} since every q_{2n} >= 1.
        let cap = 20f64.ln() / (2.0 * 1000f64.ln());
        format!("; s_(n,B)(α) <= ln α/(2 ln B) = {cap:.3} at α=20, B=10³, so |s - ½| >= {:.3} for every n", 0.5 - cap)
    };
    (decreasing && close, format!("{detail}{why}"))
}

pub fn geometry_exactness() -> (bool, String) {
    let mut f = Failures::default();
    let (mut words, mut sides, mut substitutes) = (0, 0, 0);
    for b in [2i64, 3] {
        for alpha in [2u64, 3] {
            for idx in [vec![1, 3], vec![1, 4]] {
                let s = Schedule::new(idx.clone(), Rational::integer(b), alpha).unwrap();
                for n in 1..=3 {
                    for w in enumerate_dn(&s, n, 1 << 20).unwrap() {
                        words += 1;
                        let j = fundamental_interval(&s, &w);
                        // Oracle: hull of the admissible child cylinders.
                        let (lo, hi) = s.range(n + 1);
                        let mut ends = Vec::new();
                        for c in [lo, hi] {
                            let mut word = w.interleaved();
                            word.extend([1, c]);
                            let cyl = cylinder(&word).unwrap();
                            ends.push(cyl.left);
                            ends.push(cyl.right);
                        }
                        let hull_lo = ends.iter().min().unwrap().clone();
                        let hull_hi = ends.iter().max().unwrap().clone();
                        f.check(j.left == hull_lo && j.right == hull_hi, || format!("J{w} endpoints"));
                        f.check(&hull_hi - &hull_lo == j.length, || format!("J{w} length"));

                        let g = gaps(&s, &w);
                        let sigma = w.sigma().to_vec();
                        let sibling = |delta: i64| {
                            let mut sg = sigma.clone();
                            *sg.last_mut().unwrap() = (*sg.last().unwrap() as i64 + delta) as u64;
                            fundamental_interval(&s, &s.word(sg).unwrap())
                        };
                        if let Some(gl) = &g.g_left {
                            sides += 1;
                            let nb = sibling(-1);
                            f.check(*gl == &j.left - &nb.right, || format!("g_left{w}"));
                        }
                        if let Some(gr) = &g.g_right {
                            sides += 1;
                            let nb = sibling(1);
                            f.check(*gr == &nb.left - &j.right, || format!("g_right{w}"));
                        }
                        let parent = w.interleaved()[..2 * n - 2].to_vec();
                        if let Some(ls) = &g.left_substitute {
                            substitutes += 1;
                            let mut a = parent.clone();
                            a.extend([1, 1]);
                            let want = value(&a) - value(&parent);
                            f.check(*ls == want, || format!("left substitute{w}"));
                        }
                        if let Some(rs) = &g.right_substitute {
                            substitutes += 1;
                            let mut plus = parent.clone();
                            *plus.last_mut().unwrap() += 1;
                            plus.extend([1, 1]);
                            let mut one = parent.clone();
                            one.push(1);
                            f.check(*rs == value(&plus) - value(&one), || format!("right substitute{w}"));
                        }
                        if let Some(gm) = &g.g_min {
                            let bound = match g.case {
                                GapCase::Free => Rational::frac(2, alpha as i64) * &j.length,
                                GapCase::PreScheduled => Rational::integer(2) * &j.length,
                            };
                            f.check(*gm >= bound, || format!("gap inequality{w} ({:?})", g.case));
                        }
                    }
                }
            }
        }
    }
    f.finish(format!("{words} words, {sides} sibling gaps, {substitutes} substitutes, all exact"))
}

fn value(word: &[u64]) -> Rational {
    ConvergentTable::from_word(0, word).last_value()
}

pub fn measure_checks() -> (bool, String) {
    let mut f = Failures::default();
    let mut worst: f64 = 0.0;
    let mut nodes = 0;
    for (idx, b, alpha) in [(vec![1, 3], 2.0, 3), (vec![1, 4], 2.0, 2), (vec![1, 3], 3.0, 2)] {
        let s = Schedule::from_f64(idx, b, alpha).unwrap();
        let table = default_s_table(&s, 1e-13).unwrap();
        let k = s.floor_power(0);
        let level1: Vec<_> = enumerate_dn(&s, 1, 1 << 20).unwrap().collect();
        f.check(level1.len() as u64 == k, || "level-1 word count".into());
        for w in &level1 {
            let mu = measure_mu(&s, w, &table, 1 << 20).unwrap().mu;
            f.check(mu == 1.0 / k as f64, || format!("μ{w} = {mu}"));
        }
        let r = child_sum_check(&s, &table, 3, 1 << 20).unwrap();
        f.check(r.level1_total == 1.0, || format!("level-1 total {}", r.level1_total));
        f.check(r.max_relative_error <= 1e-12, || format!("child sums off by {:e}", r.max_relative_error));
        worst = worst.max(r.max_relative_error);
        nodes += r.nodes_checked;
    }
    let s = Schedule::from_f64(vec![1, 3], 2.0, 3).unwrap();
    let table = default_s_table(&s, 1e-13).unwrap();
    let sb = extrapolate_sb(2.0, 3, &[1, 2, 3], 1e-10).unwrap().estimate;
    let params = EstimationParams::new(&s, sb, 0.05, 2).unwrap();
    let h = holder_scan(&s, &table, &params, 3, 1 << 20).unwrap();
    f.check(h.violations.is_empty(), || format!("{} Hölder violations", h.violations.len()));
    f.finish(format!(
        "level-1 mass 1 (K·(1/K)), {nodes} parents, max child-sum error {worst:.1e}, Hölder margin {:.3} on {} nodes",
        h.min_margin, h.nodes
    ))
}

fn brute_luczak(m: u64, k: u32) -> u128 {
    if k == 0 {
        return 0;
    }
    (1..=m).map(|a| 1 + brute_luczak(m / a, k - 1)).sum()
}

pub fn luczak_checks() -> (bool, String) {
    let mut f = Failures::default();
    for m in 1..=200u64 {
        for k in 1..=5u32 {
            let s = luczak_count(m, k).unwrap();
            f.check(s.count as f64 <= s.bound, || format!("S({m},{k}) = {} > {}", s.count, s.bound));
            if m <= 60 || k <= 3 {
                f.check(s.count == brute_luczak(m, k), || format!("S({m},{k}) vs brute force"));
            }
        }
    }
    let s = luczak_count(4, 2).unwrap();
    f.check(s.count == 12, || format!("S(4,2) = {}", s.count));
    f.finish(format!("S(m,k) <= m(2+log m)^(k-1) for m <= 200, k <= 5; S(4,2) = {}", s.count))
}

pub fn nested_ratio_checks() -> (bool, String) {
    let mut f = Failures::default();
    let r8 = nested_ek_ratio(2.0, 2.0, 8).unwrap();
    f.check((r8.ratio - 0.2).abs() <= 1e-3, || format!("R_8 = {}", r8.ratio));
    for b in [1.5, 2.0, 3.0] {
        for c in [1.5, 2.0, 3.0] {
            let d: Vec<f64> = (3..=8).map(|k| (nested_ek_ratio(b, c, k).unwrap().ratio - 1.0 / (1.0 + b * b)).abs()).collect();
            f.check(d.windows(2).all(|w| w[1] < w[0]), || format!("(b,c)=({b},{c}): {d:?}"));
        }
    }
    f.finish(format!("R_8(2,2) = {:.6}; |R_k - 1/(1+b²)| decreasing for k=3..8 on 9 pairs", r8.ratio))
}

pub fn classifier_cases() -> (bool, String) {
    let opts = ClassifyOptions { alpha: 6, depths: vec![1, 2, 3], tol: 1e-8, ..Default::default() };
    let mut f = Failures::default();
    let mut hit = Vec::new();
    let cases: Vec<(PhiFamily, CaseTag)> = vec![
        (PhiFamily::Power(2.0), CaseTag::BEq1),
        (PhiFamily::Exponential(3.0), CaseTag::BFinite),
        (PhiFamily::SuperExponential(2.0), CaseTag::BInfBEq1),
        (PhiFamily::DoubleExponential { b0: 2.0, c0: 5.0 }, CaseTag::BInfBFinite),
        (PhiFamily::IteratedExponential(2.0), CaseTag::BInfBInf),
    ];
    for (fam, want) in cases {
        let label = format!("{fam:?}");
        match classify_phi(&PhiSpec::new(fam), &opts) {
            Err(e) => f.check(false, || format!("{label}: {e}")),
            Ok(c) => {
                f.check(c.case == want && !c.heuristic, || format!("{label}: case {:?}", c.case));
                let ok = match (&c.dimension, want) {
                    (DimensionValue::Interval { lower_surrogate }, CaseTag::BEq1) => {
                        lower_surrogate.as_ref().is_some_and(|e| (0.0..=1.0).contains(&e.estimate))
                    }
                    (DimensionValue::SB(e), CaseTag::BFinite) => e.base == 3.0 && (0.0..=1.0).contains(&e.estimate),
                    (DimensionValue::Value(v), CaseTag::BInfBEq1) => *v == 0.5,
                    (DimensionValue::Value(v), CaseTag::BInfBFinite) => *v == 0.2,
                    (DimensionValue::Value(v), CaseTag::BInfBInf) => *v == 0.0,
                    _ => false,
                };
                f.check(ok, || format!("{label}: dimension {:?}", c.dimension));
                hit.push(c.case.name());
            }
        }
    }
    f.finish(format!("cases hit: {}", hit.join(", ")))
}

/// Canonical expansions `[a0; a_1..a_L]`, `L <= len`, quotients in `1..=max`.
pub fn canonical_words(a0: i64, len: usize, max: u64) -> Vec<CfExpansion> {
    let mut out = vec![CfExpansion::from_u64s(a0, &[])];
    let mut layer: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &layer {
            for a in 1..=max {
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().filter(|w| *w.last().unwrap() >= 2).map(|w| CfExpansion::from_u64s(a0, w)));
        layer = next;
    }
    out
}

pub fn expansion_oracles() -> (bool, String) {
    let mut f = Failures::default();
    let words = canonical_words(0, 6, 4);
    let values: Vec<Rational> = words.iter().map(|w| w.evaluate()).collect();
    // Oracle order: ranks of the exact values.
    let mut order: Vec<usize> = (0..words.len()).collect();
    order.sort_by(|&i, &j| values[i].cmp(&values[j]));
    let mut rank = vec![0usize; words.len()];
    for (pos, &i) in order.iter().enumerate() {
        rank[i] = if pos > 0 && values[i] == values[order[pos - 1]] { rank[order[pos - 1]] } else { pos };
    }
    let mut pairs = 0u64;
    for i in 0..words.len() {
        for j in 0..words.len() {
            pairs += 1;
            let got = compare(&words[i], &words[j]);
            let want = rank[i].cmp(&rank[j]);
            f.check(got == want, || format!("compare {} vs {}: {got:?}", words[i], words[j]));
        }
    }
    for (w, v) in words.iter().zip(&values) {
        let e = expand(v, 64);
        f.check(&e == w, || format!("expand(evaluate({w})) = {e}"));
    }
    let mut rationals = 0;
    for den in 1..=120i64 {
        for num in -den..=3 * den {
            let x = Rational::frac(num, den);
            if x.denom() != &den.into() {
                continue;
            }
            rationals += 1;
            let e = expand(&x, 64);
            f.check(e.is_canonical() && e.evaluate() == x, || format!("evaluate(expand({x})) = {}", e.evaluate()));
        }
    }
    // The canonical fold keeps values.
    let folded = CfExpansion::new(0, vec![BigUint::from(1u32), BigUint::from(1u32)]).unwrap().canonicalize();
    f.check(folded.to_string() == "[0;2]", || format!("canonicalize([0;1,1]) = {folded}"));
    f.check(
        compare(&CfExpansion::from_u64s(0, &[2]), &CfExpansion::from_u64s(0, &[2, 7])) == Ordering::Greater,
        || "prefix rule".into(),
    );
    f.finish(format!("{} canonical words, {pairs} ordered pairs, {rationals} rationals", words.len()))
}
