//! Dimension values: `dim F(B) = s_B` through the pressure solver,
//! `dim E(b,c) = 1/(1+b²)` with nested-ratio evidence, and the five-case
//! classifier for a growth function `φ`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{nested_ek_ratio, NestedRatio};
use crate::pressure::{extrapolate_sb_with, solve_s, Extrapolation, PressureProblem, PressureSolution, DEFAULT_LEAF_BUDGET};

/// `s_B` estimate from a truncated alphabet and a depth schedule.
#[derive(Clone, Debug, Serialize)]
pub struct DimensionEstimate {
    pub base: f64,
    pub alpha: u64,
    pub estimate: f64,
    pub uncertainty: f64,
    /// `estimate ∈ [1/2 - uncertainty, 1]`, the band `s_B` decreases into.
    pub in_band: bool,
    pub extrapolation: Extrapolation,
}

pub fn dim_f(base: f64, alpha: u64, schedule: &[usize], tol: f64) -> Result<DimensionEstimate> {
    dim_f_with(base, alpha, schedule, tol, DEFAULT_LEAF_BUDGET, |p, t| solve_s(p, t))
}

pub fn dim_f_with<F>(
    base: f64,
    alpha: u64,
    schedule: &[usize],
    tol: f64,
    budget: u64,
    solve: F,
) -> Result<DimensionEstimate>
where
    F: FnMut(&PressureProblem, f64) -> Result<PressureSolution>,
{
    if !(base > 1.0) {
        return Err(Error::Domain(format!("B must exceed 1, got {base}")));
    }
    let ex = extrapolate_sb_with(base, alpha, schedule, tol, budget, solve)?;
    let in_band = ex.estimate >= 0.5 - ex.spread && ex.estimate <= 1.0;
    Ok(DimensionEstimate {
        base,
        alpha,
        estimate: ex.estimate,
        uncertainty: ex.spread,
        in_band,
        extrapolation: ex,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EbcDimension {
    pub b: f64,
    pub c: f64,
    /// `1/(1+b²)`
    pub value: f64,
    pub evidence: Vec<NestedRatio>,
    /// `|R_{k_max} - value| > 0.01`
    pub flagged: bool,
}

pub fn dim_ebc(b: f64, c: f64, k_max: u32) -> Result<EbcDimension> {
    if k_max == 0 {
        return Err(Error::Domain("k_max must be >= 1".into()));
    }
    let evidence = (1..=k_max).map(|k| nested_ek_ratio(b, c, k)).collect::<Result<Vec<_>>>()?;
    let value = 1.0 / (1.0 + b * b);
    let flagged = (evidence.last().unwrap().ratio - value).abs() > 0.01;
    Ok(EbcDimension { b, c, value, evidence, flagged })
}

/// `ln φ(n)` for `n >= 1`.
pub type LogPhi = Arc<dyn Fn(u64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum PhiFamily {
    /// `φ(n) = n^p`
    Power(f64),
    /// `φ(n) = B_0^{2n}`
    Exponential(f64),
    /// `φ(n) = c_0^{b_0^{2n}}`
    DoubleExponential { b0: f64, c0: f64 },
    /// `φ(n) = e^{n^p}`, `p > 1`
    SuperExponential(f64),
    /// `φ(n) = e^{e^{n^p}}`, `p > 1`
    IteratedExponential(f64),
    /// Sampled `φ(1), φ(2), ...`.
    Table(Vec<f64>),
    /// Sampled through `ln φ(n)`, which may be `+inf` when `φ` is astronomically large.
    Expression { label: String, log_phi: LogPhi },
}

impl fmt::Debug for PhiFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiFamily::Power(p) => write!(f, "power({p})"),
            PhiFamily::Exponential(b) => write!(f, "exponential({b})"),
            PhiFamily::DoubleExponential { b0, c0 } => write!(f, "double_exponential({b0}, {c0})"),
            PhiFamily::SuperExponential(p) => write!(f, "super_exponential({p})"),
            PhiFamily::IteratedExponential(p) => write!(f, "iterated_exponential({p})"),
            PhiFamily::Table(v) => write!(f, "table({} samples)", v.len()),
            PhiFamily::Expression { label, .. } => write!(f, "expression({label})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PhiSpec {
    pub family: PhiFamily,
    /// Samples used by the heuristic estimate (tables use their own length).
    pub horizon: usize,
}

impl PhiSpec {
    pub fn new(family: PhiFamily) -> Self {
        PhiSpec { family, horizon: 64 }
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn expression(label: &str, log_phi: impl Fn(u64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(PhiFamily::Expression { label: label.into(), log_phi: Arc::new(log_phi) })
    }
}

/// Value in `(0, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extended {
    Finite(f64),
    Infinite,
}

impl Extended {
    fn to_json(self) -> Value {
        match self {
            Extended::Finite(v) => json!(v),
            Extended::Infinite => json!("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    #[serde(rename = "B_eq_1")]
    BEq1,
    #[serde(rename = "B_finite")]
    BFinite,
    #[serde(rename = "B_inf_b_eq_1")]
    BInfBEq1,
    #[serde(rename = "B_inf_b_finite")]
    BInfBFinite,
    #[serde(rename = "B_inf_b_inf")]
    BInfBInf,
}

impl CaseTag {
    pub fn name(self) -> &'static str {
        match self {
            CaseTag::BEq1 => "B_eq_1",
            CaseTag::BFinite => "B_finite",
            CaseTag::BInfBEq1 => "B_inf_b_eq_1",
            CaseTag::BInfBFinite => "B_inf_b_finite",
            CaseTag::BInfBInf => "B_inf_b_inf",
        }
    }
}

#[derive(Clone, Debug)]
pub enum DimensionValue {
    Value(f64),
    SB(DimensionEstimate),
    /// `[s_1, dim I_even]`; the upper end is not computed.
    Interval { lower_surrogate: Option<DimensionEstimate> },
}

#[derive(Clone, Debug, Serialize)]
pub struct Summability {
    pub partial_sum: f64,
    pub last_term: f64,
}

#[derive(Clone, Debug)]
pub struct GrowthClass {
    pub case: CaseTag,
    pub big_b: Extended,
    pub small_b: Option<Extended>,
    pub dimension: DimensionValue,
    pub heuristic: bool,
    /// `Σ_{n<=N} 1/φ(n)` for sampled specs (reported, not enforced).
    pub summability: Option<Summability>,
}

impl GrowthClass {
    pub fn to_json(&self) -> Value {
        let dimension = match &self.dimension {
            DimensionValue::Value(v) => json!({ "kind": "value", "value": v }),
            DimensionValue::SB(e) => json!({
                "kind": "s_B",
                "B": e.base,
                "estimate": e.estimate,
                "uncertainty": e.uncertainty,
                "alpha": e.alpha,
                "depths": e.extrapolation.per_depth.iter().map(|(n, _)| *n).collect::<Vec<_>>(),
            }),
            DimensionValue::Interval { lower_surrogate } => json!({
                "kind": "interval",
                "lower": lower_surrogate.as_ref().map(|e| e.estimate),
                "lower_label": "s_{1+} estimate (pressure at B = 1 + 1e-4)",
                "upper": Value::Null,
                "upper_label": "dim_H I_even: upper endpoint not computed (no closed form known)",
            }),
        };
        json!({
            "case": self.case.name(),
            "B": self.big_b.to_json(),
            "b": self.small_b.map_or(Value::Null, Extended::to_json),
            "dimension": dimension,
            "heuristic": self.heuristic,
            "summability": self.summability.as_ref().map(|s| json!({
                "partial_sum": s.partial_sum,
                "last_term": s.last_term,
            })),
        })
    }
}

/// Settings for the numeric `s_B` parts of a classification.
#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub alpha: u64,
    pub depths: Vec<usize>,
    pub tol: f64,
    pub budget: u64,
    /// Run the `B = 1 + 1e-4` surrogate for the lower end of the `B = 1` bracket.
    pub surrogate: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions { alpha: 10, depths: vec![1, 2, 3], tol: 1e-6, budget: DEFAULT_LEAF_BUDGET, surrogate: true }
    }
}

pub const SURROGATE_BASE: f64 = 1.0 + 1e-4;

/// Minimum sample count for the heuristic liminf estimates.
pub const MIN_HORIZON: usize = 16;

pub fn classify_phi(spec: &PhiSpec, opts: &ClassifyOptions) -> Result<GrowthClass> {
    classify_phi_with(spec, opts, |p, t| solve_s(p, t))
}

pub fn classify_phi_with<F>(spec: &PhiSpec, opts: &ClassifyOptions, solve: F) -> Result<GrowthClass>
where
    F: FnMut(&PressureProblem, f64) -> Result<PressureSolution>,
{
    let (big_b, small_b, heuristic, summability) = match &spec.family {
        PhiFamily::Power(p) => {
            if !(*p > 0.0) {
                return Err(Error::Domain(format!("power family needs p > 0, got {p}")));
            }
            (Extended::Finite(1.0), None, false, None)
        }
        PhiFamily::Exponential(b0) => {
            if !(*b0 >= 1.0) {
                return Err(Error::Domain(format!("exponential family needs B_0 >= 1, got {b0}")));
            }
            (Extended::Finite(*b0), None, false, None)
        }
        PhiFamily::DoubleExponential { b0, c0 } => {
            if !(*b0 > 1.0 && *c0 > 1.0) {
                return Err(Error::Domain("double exponential family needs b_0 > 1 and c_0 > 1".into()));
            }
            (Extended::Infinite, Some(Extended::Finite(*b0)), false, None)
        }
        PhiFamily::SuperExponential(p) => {
            if !(*p > 1.0) {
                return Err(Error::Domain(format!("super-exponential family needs p > 1, got {p}")));
            }
            (Extended::Infinite, Some(Extended::Finite(1.0)), false, None)
        }
        PhiFamily::IteratedExponential(p) => {
            if !(*p > 1.0) {
                return Err(Error::Domain(format!("iterated exponential family needs p > 1, got {p}")));
            }
            (Extended::Infinite, Some(Extended::Infinite), false, None)
        }
        PhiFamily::Table(values) => {
            if values.iter().any(|v| !(*v > 0.0)) {
                return Err(Error::Domain("φ must be positive on its horizon".into()));
            }
            let logs: Vec<f64> = values.iter().map(|v| v.ln()).collect();
            let (bb, sb) = estimate_growth(&logs)?;
            (bb, sb, true, Some(summability(&logs)))
        }
        PhiFamily::Expression { log_phi, .. } => {
            let logs: Vec<f64> = (1..=spec.horizon as u64).map(|n| log_phi(n)).collect();
            if logs.iter().any(|v| v.is_nan()) {
                return Err(Error::Domain("ln φ(n) evaluated to NaN".into()));
            }
            let (bb, sb) = estimate_growth(&logs)?;
            (bb, sb, true, Some(summability(&logs)))
        }
    };

    let (case, dimension) = match (big_b, small_b) {
        (Extended::Finite(b), _) if b <= 1.0 => {
            let lower_surrogate = if opts.surrogate {
                Some(dim_f_with(SURROGATE_BASE, opts.alpha, &opts.depths, opts.tol, opts.budget, solve)?)
            } else {
                None
            };
            (CaseTag::BEq1, DimensionValue::Interval { lower_surrogate })
        }
        (Extended::Finite(b), _) => (
            CaseTag::BFinite,
            DimensionValue::SB(dim_f_with(b, opts.alpha, &opts.depths, opts.tol, opts.budget, solve)?),
        ),
        (Extended::Infinite, Some(Extended::Finite(b))) if b <= 1.0 => {
            (CaseTag::BInfBEq1, DimensionValue::Value(0.5))
        }
        (Extended::Infinite, Some(Extended::Finite(b))) => {
            (CaseTag::BInfBFinite, DimensionValue::Value(1.0 / (1.0 + b * b)))
        }
        (Extended::Infinite, _) => (CaseTag::BInfBInf, DimensionValue::Value(0.0)),
    };
    Ok(GrowthClass { case, big_b, small_b, dimension, heuristic, summability })
}

/// Tail-half growth ratio of a sampled sequence.
fn growth_ratio(v: &[f64]) -> f64 {
    let n = v.len();
    let (half, last) = (v[n / 2 - 1], v[n - 1]);
    if half > 0.0 {
        last / half
    } else if last > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// Minimum of `v[n-1] / 2n` over the last half of the samples.
fn tail_min_rate(v: &[f64]) -> f64 {
    let n = v.len();
    (n / 2..=n).map(|i| v[i - 1] / (2.0 * i as f64)).fold(f64::INFINITY, f64::min)
}

/// Whether `v[n-1] / 2n` is still climbing without slowing down: over
/// successive doublings a convergent rate such as `c - k/n` gains half as much
/// each time, while `ln n`-type growth gains a fixed amount.
fn rate_unbounded(v: &[f64]) -> bool {
    let n = v.len();
    let rate = |i: usize| v[i - 1] / (2.0 * i as f64);
    let (d1, d2) = (rate(n / 2) - rate(n / 4), rate(n) - rate(n / 2));
    d1 > 1e-9 * rate(n).abs() && d2 > 0.75 * d1
}

/// Estimates `B = liminf ln φ(n)/2n` (exponentiated) and, when `B = ∞`,
/// `b = liminf ln ln φ(n)/2n`.
///
/// Doubling the index multiplies a linearly growing `ln φ` by about 2; a ratio
/// below 1.5 is read as sublinear (`B = 1`), above 3 as superlinear (`B = ∞`),
/// and in between `B` is taken from tail minima unless the rate itself keeps
/// growing. The same test on `ln ln φ`
/// separates `b = 1`, finite `b`, and `b = ∞`.
fn estimate_growth(logs: &[f64]) -> Result<(Extended, Option<Extended>)> {
    if logs.len() < MIN_HORIZON {
        return Err(Error::Config(format!(
            "heuristic growth estimate needs at least {MIN_HORIZON} samples, got {}",
            logs.len()
        )));
    }
    let r = growth_ratio(logs);
    if r < 1.5 {
        return Ok((Extended::Finite(1.0), None));
    }
    if r <= 3.0 && r.is_finite() && !rate_unbounded(logs) {
        let rate = tail_min_rate(logs);
        return Ok((Extended::Finite(rate.exp().max(1.0)), None));
    }
    let loglogs: Vec<f64> = logs.iter().map(|l| if *l > 0.0 { l.ln() } else { f64::NEG_INFINITY }).collect();
    let r2 = growth_ratio(&loglogs);
    let b = if r2 < 1.5 {
        Extended::Finite(1.0)
    } else if r2 <= 3.0 && r2.is_finite() && !rate_unbounded(&loglogs) {
        Extended::Finite(tail_min_rate(&loglogs).exp().max(1.0))
    } else {
        Extended::Infinite
    };
    Ok((Extended::Infinite, Some(b)))
}

fn summability(logs: &[f64]) -> Summability {
    let terms: Vec<f64> = logs.iter().map(|l| (-l).exp()).collect();
    Summability { partial_sum: terms.iter().sum(), last_term: *terms.last().unwrap_or(&0.0) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> ClassifyOptions {
        ClassifyOptions { alpha: 4, depths: vec![1, 2], tol: 1e-6, ..Default::default() }
    }

    #[test]
    fn parametric_cases() {
        let c = classify_phi(&PhiSpec::new(PhiFamily::Exponential(3.0)), &quick()).unwrap();
        assert_eq!(c.case, CaseTag::BFinite);
        let DimensionValue::SB(e) = &c.dimension else { panic!() };
        assert_eq!(e.base, 3.0);

        let c = classify_phi(&PhiSpec::new(PhiFamily::DoubleExponential { b0: 2.0, c0: 5.0 }), &quick()).unwrap();
        assert_eq!(c.case, CaseTag::BInfBFinite);
        assert!(matches!(c.dimension, DimensionValue::Value(v) if (v - 0.2).abs() < 1e-15));

        for p in [0.1, 1.0, 7.5] {
            let c = classify_phi(&PhiSpec::new(PhiFamily::Power(p)), &quick()).unwrap();
            assert_eq!(c.case, CaseTag::BEq1);
        }
        let c = classify_phi(&PhiSpec::new(PhiFamily::SuperExponential(2.0)), &quick()).unwrap();
        assert!(matches!(c.dimension, DimensionValue::Value(v) if v == 0.5));
        let c = classify_phi(&PhiSpec::new(PhiFamily::IteratedExponential(2.0)), &quick()).unwrap();
        assert!(matches!(c.dimension, DimensionValue::Value(v) if v == 0.0));
    }

    fn ln_factorial(n: u64) -> f64 {
        (1..=n).map(|k| (k as f64).ln()).sum()
    }

    #[test]
    fn heuristic_cases() {
        let o = quick();
        let c = classify_phi(&PhiSpec::expression("e^{n^2}", |n| (n * n) as f64), &o).unwrap();
        assert_eq!((c.case, c.heuristic), (CaseTag::BInfBEq1, true));
        let c = classify_phi(&PhiSpec::expression("n^3", |n| 3.0 * (n as f64).ln()), &o).unwrap();
        assert_eq!(c.case, CaseTag::BEq1);
        let c = classify_phi(&PhiSpec::expression("2^{2n}", |n| 2.0 * n as f64 * 2f64.ln()), &o).unwrap();
        assert_eq!(c.case, CaseTag::BFinite);
        assert!(matches!(c.big_b, Extended::Finite(b) if (b - 2.0).abs() < 1e-9));
        let c = classify_phi(
            &PhiSpec::expression("3^{2^{2n}}", |n| 4f64.powi(n as i32) * 3f64.ln()),
            &o,
        )
        .unwrap();
        assert_eq!(c.case, CaseTag::BInfBFinite);
        let c = classify_phi(&PhiSpec::expression("e^{e^{n^2}}", |n| ((n * n) as f64).exp()), &o).unwrap();
        assert_eq!(c.case, CaseTag::BInfBInf);
        let c = classify_phi(&PhiSpec::expression("n! 4^n", |n| ln_factorial(n) + n as f64 * 4f64.ln()), &o).unwrap();
        assert_eq!(c.case, CaseTag::BInfBEq1);
        let c = classify_phi(&PhiSpec::expression("n^2 3^n", |n| 2.0 * (n as f64).ln() + n as f64 * 3f64.ln()).with_horizon(512), &o).unwrap();
        assert!(matches!(c.big_b, Extended::Finite(b) if (b - 3f64.sqrt()).abs() < 0.05));
        let short = PhiSpec::expression("n", |n| (n as f64).ln()).with_horizon(8);
        assert!(matches!(classify_phi(&short, &o), Err(Error::Config(_))));
    }

    #[test]
    fn ebc_evidence() {
        let d = dim_ebc(2.0, 2.0, 8).unwrap();
        assert_eq!(d.value, 0.2);
        assert!(!d.flagged);
        assert!((d.evidence[7].ratio - 0.2).abs() <= 0.001);
        assert_eq!(dim_ebc(3.0, 2.0, 4).unwrap().value, 0.1);
    }

    #[test]
    fn dim_f_monotone_in_b() {
        let a = dim_f(2.0, 3, &[1, 2, 3], 1e-8).unwrap();
        let b = dim_f(4.0, 3, &[1, 2, 3], 1e-8).unwrap();
        assert!(a.estimate >= b.estimate);
        assert_eq!(dim_f(2.0, 1, &[1, 2], 1e-8).unwrap().estimate, 0.0);
    }
}
