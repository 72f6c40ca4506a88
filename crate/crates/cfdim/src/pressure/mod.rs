//! Pressure sums `f_{n,B}(ρ) = Σ (B^{2n} q_{2n}²)^{-ρ}` over even-quotient words
//! and their unit crossings `s_{n,B}`.
//!
//! `q_{2n}` is the denominator of `[0; 1, a_2, 1, a_4, ..., 1, a_{2n}]`.

mod exact;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

pub use exact::{pressure_sum_exact, Dyadic, Enclosure};

/// Default cap on the number of enumerated words.
pub const DEFAULT_LEAF_BUDGET: u64 = 1 << 26;

/// Bisection keeps going past `tol` until `|f(s) - 1|` is this small.
pub const RESIDUAL_TARGET: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Alphabet {
    /// `{1, ..., α}`
    Bound(u64),
    /// Explicit finite set, sorted and deduplicated.
    Set(Vec<u64>),
}

impl Alphabet {
    pub fn set(mut symbols: Vec<u64>) -> Result<Self> {
        symbols.sort_unstable();
        symbols.dedup();
        if symbols.is_empty() || symbols[0] == 0 {
            return Err(Error::Domain("alphabet must be a non-empty set of positive integers".into()));
        }
        Ok(Alphabet::Set(symbols))
    }

    pub fn symbols(&self) -> Vec<u64> {
        match self {
            Alphabet::Bound(a) => (1..=*a).collect(),
            Alphabet::Set(s) => s.clone(),
        }
    }

    pub fn len(&self) -> u64 {
        match self {
            Alphabet::Bound(a) => *a,
            Alphabet::Set(s) => s.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Serialize for Alphabet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::Bound(a) => write!(f, "1..{a}"),
            Alphabet::Set(s) => {
                let parts: Vec<String> = s.iter().map(u64::to_string).collect();
                write!(f, "{{{}}}", parts.join(";"))
            }
        }
    }
}

/// Parses `7`, `1..7`, or `{1;3;5}` (commas also accepted inside braces).
impl FromStr for Alphabet {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad alphabet {s:?}"));
        if let Some(body) = s.strip_prefix('{').and_then(|b| b.strip_suffix('}')) {
            let syms = body
                .split([';', ','])
                .map(|t| t.trim().parse::<u64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            return Alphabet::set(syms);
        }
        let bound = s.strip_prefix("1..").unwrap_or(s);
        let a: u64 = bound.parse().map_err(|_| bad())?;
        if a == 0 {
            return Err(Error::Domain("alphabet bound must be >= 1".into()));
        }
        Ok(Alphabet::Bound(a))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SummationMode {
    CompensatedFloat,
    ExactRational,
}

impl SummationMode {
    pub fn name(self) -> &'static str {
        match self {
            SummationMode::CompensatedFloat => "compensated_float",
            SummationMode::ExactRational => "exact_rational",
        }
    }
}

impl FromStr for SummationMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "compensated_float" | "float" => Ok(SummationMode::CompensatedFloat),
            "exact_rational" | "exact" => Ok(SummationMode::ExactRational),
            _ => Err(Error::Parse(format!("unknown summation mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PressureProblem {
    pub alphabet: Alphabet,
    /// `B > 1`, kept exact so the rational mode can use it.
    pub base: Rational,
    pub depth: usize,
    pub mode: SummationMode,
    pub leaf_budget: u64,
}

impl PressureProblem {
    pub fn new(alphabet: Alphabet, base: Rational, depth: usize) -> Result<Self> {
        if alphabet.is_empty() {
            return Err(Error::Domain("alphabet must be non-empty".into()));
        }
        if base <= 1 {
            return Err(Error::Domain(format!("B must exceed 1, got {base}")));
        }
        if depth == 0 {
            return Err(Error::Domain("depth n must be >= 1".into()));
        }
        Ok(PressureProblem {
            alphabet,
            base,
            depth,
            mode: SummationMode::CompensatedFloat,
            leaf_budget: DEFAULT_LEAF_BUDGET,
        })
    }

    /// `{1..alpha}` with a float base (converted exactly).
    pub fn bounded(alpha: u64, base: f64, depth: usize) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::Domain("alphabet bound must be >= 1".into()));
        }
        Self::new(Alphabet::Bound(alpha), Rational::from_f64(base)?, depth)
    }

    pub fn with_mode(mut self, mode: SummationMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.leaf_budget = budget;
        self
    }

    pub fn base_f64(&self) -> f64 {
        self.base.to_f64()
    }

    /// `|A|^n`, or a resource error if above the budget.
    pub fn leaves(&self) -> Result<u64> {
        let n = self.alphabet.len();
        let over = || {
            Error::Resource(format!(
                "{}^{} words exceed the enumeration cap of {}",
                n, self.depth, self.leaf_budget
            ))
        };
        let count = n.checked_pow(u32::try_from(self.depth).map_err(|_| over())?).ok_or_else(over)?;
        if count > self.leaf_budget {
            return Err(over());
        }
        Ok(count)
    }
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PressureSum {
    pub value: f64,
    /// Bound on the float summation error (`leaves · 4 · ulp` scale).
    pub error_bound: f64,
    pub leaves: u64,
}

/// `f_{n,B}(ρ)` by depth-first enumeration, partitioned by first symbol.
///
/// Partitions reduce sequentially and are combined in symbol order, so the
/// result does not depend on the number of worker threads.
pub fn pressure_sum(p: &PressureProblem, rho: f64) -> Result<PressureSum> {
    if !(rho >= 0.0) {
        return Err(Error::Domain(format!("rho must be >= 0, got {rho}")));
    }
    let leaves = p.leaves()?;
    let symbols = p.alphabet.symbols();
    let scale = (-(2.0 * p.depth as f64) * rho * p.base.ln()).exp();
    let expo = -2.0 * rho;
    let parts: Vec<CompensatedSum> = symbols
        .par_iter()
        .map(|&a| {
            let mut acc = CompensatedSum::default();
            // state after a_2: (q_2, q_1) = (a + 1, 1)
            dfs(&symbols, p.depth - 1, a as u128 + 1, 1, expo, &mut acc);
            acc
        })
        .collect();
    let mut total = CompensatedSum::default();
    for part in &parts {
        total.add(part.value());
    }
    let value = scale * total.value();
    Ok(PressureSum { value, error_bound: leaves as f64 * 4.0 * f64::EPSILON * value, leaves })
}

fn dfs(symbols: &[u64], remaining: usize, q_even: u128, q_odd: u128, expo: f64, acc: &mut CompensatedSum) {
    if remaining == 0 {
        acc.add((q_even as f64).powf(expo));
        return;
    }
    let q_next_odd = q_even + q_odd;
    for &a in symbols {
        let q_next_even = a as u128 * q_next_odd + q_even;
        dfs(symbols, remaining - 1, q_next_even, q_next_odd, expo, acc);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PressureSolution {
    pub s_value: f64,
    pub residual: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
    pub tolerance: f64,
    pub leaves: u64,
    pub mode: SummationMode,
}

/// `s_{n,B}(A) = inf{ρ >= 0 : f_{n,B}(ρ) <= 1}` by bisection on `[0, 1]`.
pub fn solve_s(p: &PressureProblem, tol: f64) -> Result<PressureSolution> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let leaves = p.leaves()?;
    if p.alphabet.len() == 1 {
        // f(0) = 1 already.
        return Ok(PressureSolution {
            s_value: 0.0,
            residual: 0.0,
            iterations: 0,
            bracket: (0.0, 0.0),
            tolerance: tol,
            leaves,
            mode: p.mode,
        });
    }
    match p.mode {
        SummationMode::CompensatedFloat => solve_float(p, tol, leaves),
        SummationMode::ExactRational => exact::solve_exact(p, tol, leaves),
    }
}

fn solve_float(p: &PressureProblem, tol: f64, leaves: u64) -> Result<PressureSolution> {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut iterations = 0;
    let (s, residual) = loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            let r = (pressure_sum(p, mid)?.value - 1.0).abs();
            break (mid, r);
        }
        let v = pressure_sum(p, mid)?.value;
        iterations += 1;
        if hi - lo <= tol && (v - 1.0).abs() <= RESIDUAL_TARGET {
            break (mid, (v - 1.0).abs());
        }
        // Ties go to the lower side: f(mid) <= 1 moves the upper end.
        if v > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    };
    Ok(PressureSolution {
        s_value: s,
        residual,
        iterations,
        bracket: (lo, hi),
        tolerance: tol,
        leaves,
        mode: SummationMode::CompensatedFloat,
    })
}

/// `s_{n,B}(α)` along a depth schedule, with the limit estimate.
#[derive(Clone, Debug, Serialize)]
pub struct Extrapolation {
    pub base: f64,
    pub alpha: u64,
    pub per_depth: Vec<(usize, PressureSolution)>,
    /// Minimum over the schedule (every `s_{n,B}` bounds the limit from above).
    pub estimate: f64,
    /// Spread across the two deepest entries.
    pub spread: f64,
    /// `s_{rn} <= s_n` for every pair `(n, rn)` in the schedule, up to bracket widths.
    pub multiple_checks: Vec<(usize, usize, bool)>,
    /// `s_{n+k} <= max(s_n, s_k)` for every triple in the schedule.
    pub additive_checks: Vec<(usize, usize, bool)>,
}

impl Extrapolation {
    pub fn trend_holds(&self) -> bool {
        self.multiple_checks.iter().chain(&self.additive_checks).all(|c| c.2)
    }
}

pub fn extrapolate_sb(base: f64, alpha: u64, schedule: &[usize], tol: f64) -> Result<Extrapolation> {
    extrapolate_sb_with(base, alpha, schedule, tol, DEFAULT_LEAF_BUDGET, |p, tol| solve_s(p, tol))
}

/// As [`extrapolate_sb`], with a custom budget and solver (e.g. a cached one).
pub fn extrapolate_sb_with<F>(
    base: f64,
    alpha: u64,
    schedule: &[usize],
    tol: f64,
    budget: u64,
    mut solve: F,
) -> Result<Extrapolation>
where
    F: FnMut(&PressureProblem, f64) -> Result<PressureSolution>,
{
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("depth schedule must be non-empty and strictly increasing".into()));
    }
    // Fail before doing any work if the deepest entry is out of budget.
    for &n in schedule {
        PressureProblem::bounded(alpha, base, n)?.with_budget(budget).leaves()?;
    }
    let mut per_depth = Vec::with_capacity(schedule.len());
    for &n in schedule {
        let p = PressureProblem::bounded(alpha, base, n)?.with_budget(budget);
        per_depth.push((n, solve(&p, tol)?));
    }
    let get = |n: usize| per_depth.iter().find(|(m, _)| *m == n).map(|(_, s)| s);
    let slack = |a: &PressureSolution, b: &PressureSolution| {
        (a.bracket.1 - a.bracket.0) + (b.bracket.1 - b.bracket.0) + 1e-12
    };
    let mut multiple_checks = Vec::new();
    let mut additive_checks = Vec::new();
    for &n in schedule {
        for &m in schedule {
            if m > n && m % n == 0 {
                let (a, b) = (get(n).unwrap(), get(m).unwrap());
                multiple_checks.push((n, m, b.s_value <= a.s_value + slack(a, b)));
            }
            if m >= n {
                if let Some(c) = get(n + m) {
                    let (a, b) = (get(n).unwrap(), get(m).unwrap());
                    let bound = a.s_value.max(b.s_value);
                    additive_checks.push((n, m, c.s_value <= bound + slack(a, c) + slack(b, c)));
                }
            }
        }
    }
    let estimate = per_depth.iter().map(|(_, s)| s.s_value).fold(f64::INFINITY, f64::min);
    let spread = match per_depth.len() {
        1 => 0.0,
        k => (per_depth[k - 1].1.s_value - per_depth[k - 2].1.s_value).abs(),
    };
    Ok(Extrapolation { base, alpha, per_depth, estimate, spread, multiple_checks, additive_checks })
}

#[derive(Clone, Debug, Serialize)]
pub struct SbCurve {
    pub alpha: u64,
    pub depth: usize,
    pub points: Vec<(f64, f64)>,
    pub differences: Vec<f64>,
    pub monotone: bool,
}

/// `s_{n,B}(α)` across a grid of bases.
pub fn sb_curve(grid: &[f64], alpha: u64, depth: usize, tol: f64) -> Result<SbCurve> {
    let mut points = Vec::with_capacity(grid.len());
    for &b in grid {
        let p = PressureProblem::bounded(alpha, b, depth)?;
        points.push((b, solve_s(&p, tol)?.s_value));
    }
    let differences: Vec<f64> = points.windows(2).map(|w| w[1].1 - w[0].1).collect();
    let monotone = points
        .windows(2)
        .all(|w| w[1].0 < w[0].0 || w[1].1 <= w[0].1 + 2.0 * tol);
    Ok(SbCurve { alpha, depth, points, differences, monotone })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn problem(syms: Vec<u64>, b: i64, n: usize) -> PressureProblem {
        PressureProblem::new(Alphabet::set(syms).unwrap(), Rational::integer(b), n).unwrap()
    }

    #[test]
    fn sum_examples() {
        let v = pressure_sum(&problem(vec![1], 2, 1), 1.0).unwrap().value;
        assert!((v - 1.0 / 16.0).abs() < 1e-15);
        let v = pressure_sum(&problem(vec![1, 2], 2, 1), 1.0).unwrap().value;
        assert!((v - 13.0 / 144.0).abs() < 1e-15);
        let v = pressure_sum(&problem(vec![1, 2, 5], 3, 3), 0.0).unwrap().value;
        assert_eq!(v, 27.0);
    }

    #[test]
    fn solve_examples() {
        let s = solve_s(&problem(vec![1], 2, 3), 1e-9).unwrap();
        assert_eq!(s.s_value, 0.0);
        let s2 = solve_s(&PressureProblem::bounded(2, 2.0, 1).unwrap(), 1e-12).unwrap();
        assert!((s2.s_value - 0.219347110911945).abs() < 1e-9, "{}", s2.s_value);
        assert!(s2.residual <= 1e-9);
        let s4 = solve_s(&PressureProblem::bounded(2, 4.0, 1).unwrap(), 1e-12).unwrap();
        assert!(s4.s_value < s2.s_value);
    }

    #[test]
    fn budget_is_enforced() {
        let p = PressureProblem::bounded(10, 2.0, 4).unwrap().with_budget(999);
        assert!(matches!(pressure_sum(&p, 0.5), Err(Error::Resource(_))));
        assert!(matches!(extrapolate_sb(2.0, 100, &[1, 5], 1e-6), Err(Error::Resource(_))));
    }

    #[test]
    fn alphabet_text() {
        assert_eq!("1..5".parse::<Alphabet>().unwrap(), Alphabet::Bound(5));
        assert_eq!("5".parse::<Alphabet>().unwrap(), Alphabet::Bound(5));
        let a: Alphabet = "{3;1;3}".parse().unwrap();
        assert_eq!(a.to_string(), "{1;3}");
        assert!("{0}".parse::<Alphabet>().is_err());
    }

    #[test]
    fn extrapolation_relations() {
        let e = extrapolate_sb(2.0, 3, &[1, 2, 3, 4], 1e-10).unwrap();
        assert!(e.trend_holds(), "{:?}", e);
        assert_eq!(e.estimate, e.per_depth[3].1.s_value.min(e.per_depth[2].1.s_value));
        let e1 = extrapolate_sb(2.0, 1, &[1, 2], 1e-10).unwrap();
        assert_eq!((e1.estimate, e1.spread), (0.0, 0.0));
    }

    #[test]
    fn curve_is_monotone() {
        let c = sb_curve(&[2.0, 4.0, 8.0], 2, 2, 1e-10).unwrap();
        assert!(c.points[0].1 > c.points[1].1 && c.points[1].1 > c.points[2].1);
        let c = sb_curve(&[3.0, 3.0], 2, 2, 1e-10).unwrap();
        assert_eq!(c.points[0].1, c.points[1].1);
        let c = sb_curve(&[1.1, 1.1 + 1e-6], 2, 2, 1e-10).unwrap();
        assert!(c.differences[0].abs() < 1e-3);
    }
}
