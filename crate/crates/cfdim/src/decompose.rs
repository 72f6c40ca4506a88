//! Greedy sum and product decompositions into two continued fractions whose
//! odd-order partial quotients are all 1.
//!
//! Both constructions alternate between the two components. Each step picks
//! the unique even quotient `c` with `[..,1,c] <= target < [..,1,c,1]`; if the
//! left inequality is an equality the construction stops exactly.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::cf::{CfExpansion, ConvergentTable};
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const DEFAULT_K_MAX: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Op {
    Sum,
    Product,
}

impl Op {
    pub fn name(self) -> &'static str {
        match self {
            Op::Sum => "sum",
            Op::Product => "product",
        }
    }

    fn combine(self, a: &Rational, b: &Rational) -> Rational {
        match self {
            Op::Sum => a + b,
            Op::Product => a * b,
        }
    }

    /// Solves `a ⊕ b = x` for `a`.
    fn residual(self, x: &Rational, b: &Rational) -> Rational {
        match self {
            Op::Sum => x - b,
            Op::Product => x / b,
        }
    }
}

impl std::str::FromStr for Op {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" => Ok(Op::Sum),
            "product" => Ok(Op::Product),
            _ => Err(Error::Parse(format!("unknown op {s:?} (sum|product)"))),
        }
    }
}

/// `[a0; 1, e_1, 1, e_2, ..., 1, e_k]`, optionally followed by one more `1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenRestrictedSeq {
    pub integer_part: BigInt,
    pub even_quotients: Vec<BigUint>,
    pub trailing_one: bool,
}

impl EvenRestrictedSeq {
    pub fn new(integer_part: impl Into<BigInt>, even_quotients: Vec<BigUint>, trailing_one: bool) -> Self {
        EvenRestrictedSeq { integer_part: integer_part.into(), even_quotients, trailing_one }
    }

    pub fn to_expansion(&self) -> CfExpansion {
        let mut qs = Vec::with_capacity(2 * self.even_quotients.len() + 1);
        for e in &self.even_quotients {
            qs.push(BigUint::one());
            qs.push(e.clone());
        }
        if self.trailing_one {
            qs.push(BigUint::one());
        }
        CfExpansion::new(self.integer_part.clone(), qs).expect("quotients >= 1")
    }

    pub fn value(&self) -> Rational {
        self.to_expansion().evaluate()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "a0": int_json(&self.integer_part),
            "even": self.even_quotients.iter().map(uint_json).collect::<Vec<_>>(),
            "trailing_one": self.trailing_one,
            "cf": self.to_expansion().to_string(),
        })
    }
}

impl fmt::Display for EvenRestrictedSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_expansion(), f)
    }
}

fn int_json(n: &BigInt) -> Value {
    n.to_i64().map(Value::from).unwrap_or_else(|| Value::String(n.to_string()))
}

fn uint_json(n: &BigUint) -> Value {
    n.to_u64().map(Value::from).unwrap_or_else(|| Value::String(n.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    TerminatedExactly,
    Truncated,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::TerminatedExactly => "terminated_exactly",
            Status::Truncated => "truncated",
        }
    }
}

#[derive(Clone, Debug)]
pub struct DecompositionResult {
    pub op: Op,
    pub x: Rational,
    pub first: EvenRestrictedSeq,
    pub second: EvenRestrictedSeq,
    pub status: Status,
    /// Index `k` of the last step that selected a quotient (0 for closed forms).
    pub steps: usize,
    /// `low <= x < high` when truncated; `(x, x)` when exact.
    pub bracket: (Rational, Rational),
}

impl DecompositionResult {
    pub fn width(&self) -> Rational {
        &self.bracket.1 - &self.bracket.0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "x": self.x.to_string(),
            "op": self.op.name(),
            "status": self.status.name(),
            "first": self.first.to_json(),
            "second": self.second.to_json(),
            "bracket": [self.bracket.0.to_string(), self.bracket.1.to_string()],
            "bracket_f64": [self.bracket.0.to_f64(), self.bracket.1.to_f64()],
            "steps": self.steps,
        })
    }
}

/// Which component a step extended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    First,
    Second,
}

/// One greedy selection, as streamed by [`Decomposer`].
#[derive(Clone, Debug)]
pub struct Step {
    pub k: usize,
    pub component: Component,
    pub quotient: BigUint,
    pub exact: bool,
    /// Bracket of this step alone, in the caller's coordinates.
    pub step_bracket: (Rational, Rational),
    /// Running intersection of all step brackets so far.
    pub bracket: (Rational, Rational),
}

/// Picks the unique `c >= 1` with `[prefix, c] <= target < [prefix, c, 1]`.
///
/// `prefix` must end at the odd index `2k - 1` (with quotient 1). The map
/// `c -> (c p' + p'') / (c q' + q'')` is increasing, so `c` is the floor of its
/// inverse at `target`, checked against both neighbours.
pub fn select_even_quotient(target: &Rational, prefix: &ConvergentTable, k: usize) -> Result<Selection> {
    let n = prefix.last_index();
    if n != 2 * k - 1 {
        return Err(Error::Domain(format!("prefix ends at index {n}, expected {}", 2 * k - 1)));
    }
    let (p1, q1) = (prefix.p(n).clone(), prefix.q(n).clone());
    let (p2, q2) = prefix.pq_prev(n);
    let at = |c: &BigInt| Rational::new(c * &p1 + &p2, c * &q1 + &q2).unwrap();

    let lower = at(&BigInt::one());
    let sup = Rational::new(p1.clone(), q1.clone()).unwrap();
    if *target < lower {
        return Err(Error::Infeasible { step: k, side: "below" });
    }
    if *target >= sup {
        return Err(Error::Infeasible { step: k, side: "at or above" });
    }

    // c* = (t q'' - p'') / (p' - t q'); the denominator is positive below sup.
    let tq = |q: &BigInt| target * &Rational::integer(q.clone());
    let num = tq(&q2) - Rational::integer(p2.clone());
    let den = Rational::integer(p1.clone()) - tq(&q1);
    let mut c = (num / den).floor().max(BigInt::one());
    if at(&c) > *target {
        c -= 1;
    } else if at(&(&c + 1)) <= *target {
        c += 1;
    }
    let exact = at(&c) == *target;
    Ok(Selection { c: c.to_biguint().expect("c >= 1"), exact })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selection {
    pub c: BigUint,
    pub exact: bool,
}

/// One component under construction: its even quotients and the convergents of
/// `[a0; 1, e_1, ..., 1, e_j, 1]` (always ending at an odd index).
#[derive(Clone)]
struct Side {
    a0: BigInt,
    evens: Vec<BigUint>,
    prefix: ConvergentTable,
}

impl Side {
    fn new(a0: BigInt) -> Self {
        let mut prefix = ConvergentTable::new(a0.clone());
        prefix.push_u64(1);
        Side { a0, evens: Vec::new(), prefix }
    }

    fn prefix_value(&self) -> Rational {
        self.prefix.last_value()
    }

    /// Appends `c, 1`; returns (`[.., c]`, `[.., c, 1]`).
    fn extend(&mut self, c: &BigUint) -> (Rational, Rational) {
        self.evens.push(c.clone());
        self.prefix.push(c);
        let low = self.prefix.last_value();
        self.prefix.push_u64(1);
        (low, self.prefix.last_value())
    }

    fn seq(&self, trailing_one: bool) -> EvenRestrictedSeq {
        EvenRestrictedSeq::new(self.a0.clone(), self.evens.clone(), trailing_one)
    }
}

/// Streaming form of the constructions: each `next()` performs one selection.
pub struct Decomposer {
    op: Op,
    x: Rational,
    shift: Rational,
    y: Rational,
    a: Side,
    b: Side,
    k: usize,
    next_is_first: bool,
    bracket: (Rational, Rational),
    done: Option<Status>,
    error: Option<Error>,
}

impl Decomposer {
    /// Sets up the construction for `x`. Inputs handled by a closed form
    /// (integers) are rejected here; use [`sum_decompose`]/[`product_decompose`].
    pub fn new(op: Op, x: &Rational) -> Result<Self> {
        check_domain(op, x)?;
        if x.is_integer() {
            return Err(Error::Domain("integer inputs use the closed form".into()));
        }
        let (shift, a0, bracket) = match op {
            Op::Sum => {
                // x - m in [3/2, 2)
                let m = x.floor() - 1;
                let m_r = Rational::integer(m);
                let lo = &m_r + Rational::frac(3, 2);
                let hi = &m_r + Rational::integer(2);
                (m_r, BigInt::zero(), (lo, hi))
            }
            Op::Product => {
                let a0 = x.floor();
                let lo = Rational::integer(a0.clone()) + Rational::frac(1, 2);
                let hi = Rational::integer(&a0 + 1);
                (Rational::zero(), a0, (lo, hi))
            }
        };
        Ok(Decomposer {
            op,
            x: x.clone(),
            y: x - &shift,
            shift,
            a: Side::new(a0),
            b: Side::new(BigInt::zero()),
            k: 0,
            next_is_first: true,
            bracket,
            done: None,
            error: None,
        })
    }

    pub fn status(&self) -> Option<Status> {
        self.done
    }

    pub fn steps(&self) -> usize {
        self.k
    }

    pub fn bracket(&self) -> &(Rational, Rational) {
        &self.bracket
    }

    /// Error that ended the stream, if any.
    pub fn take_error(&mut self) -> Option<Error> {
        self.error.take()
    }

    fn step(&mut self) -> Result<Step> {
        let op = self.op;
        let (component, other_value, side) = if self.next_is_first {
            self.k += 1;
            (Component::First, self.b.prefix_value(), &mut self.a)
        } else {
            // The first component's `[.., a_2k, 1]` is its current prefix.
            (Component::Second, self.a.prefix_value(), &mut self.b)
        };
        let target = op.residual(&self.y, &other_value);
        let sel = select_even_quotient(&target, &side.prefix, self.k)?;
        let (low, high) = side.extend(&sel.c);
        let shift = &self.shift;
        let step_bracket =
            (op.combine(&low, &other_value) + shift, op.combine(&high, &other_value) + shift);
        if step_bracket.0 > self.bracket.0 {
            self.bracket.0 = step_bracket.0.clone();
        }
        if step_bracket.1 < self.bracket.1 {
            self.bracket.1 = step_bracket.1.clone();
        }
        if sel.exact {
            self.done = Some(Status::TerminatedExactly);
            self.bracket = (self.x.clone(), self.x.clone());
        }
        self.next_is_first = !self.next_is_first;
        Ok(Step {
            k: self.k,
            component,
            quotient: sel.c,
            exact: sel.exact,
            step_bracket,
            bracket: self.bracket.clone(),
        })
    }

    /// Assembles the result from the current state.
    pub fn result(&self) -> DecompositionResult {
        let status = self.done.unwrap_or(Status::Truncated);
        // After an exact first-component step the second component is still
        // `[..,1]`; after an exact second-component step the first is `[..,1]`.
        let (ta, tb) = match status {
            Status::Truncated => (false, false),
            Status::TerminatedExactly if !self.next_is_first => (false, true),
            Status::TerminatedExactly => (true, false),
        };
        let mut first = self.a.seq(ta);
        if self.op == Op::Sum {
            first.integer_part = self.shift.floor();
        }
        let mut second = self.b.seq(tb);
        if status == Status::Truncated && self.a.evens.len() > self.b.evens.len() {
            // Stopped between the two halves of step k: the second component
            // is represented by its prefix `[..,1]`.
            second.trailing_one = true;
        }
        DecompositionResult {
            op: self.op,
            x: self.x.clone(),
            first,
            second,
            status,
            steps: self.k,
            bracket: self.bracket.clone(),
        }
    }
}

impl Iterator for Decomposer {
    type Item = Step;

    fn next(&mut self) -> Option<Step> {
        if self.done.is_some() || self.error.is_some() {
            return None;
        }
        match self.step() {
            Ok(s) => Some(s),
            Err(e) => {
                self.error = Some(e);
                None
            }
        }
    }
}

fn check_domain(op: Op, x: &Rational) -> Result<()> {
    let f = x.fract();
    if !f.is_zero() && f < Rational::frac(1, 2) {
        return Err(Error::Domain(format!("{x} is not in Z + [1/2, 1]")));
    }
    if op == Op::Product && !x.is_positive() {
        return Err(Error::Domain(format!("product decomposition needs x > 0, got {x}")));
    }
    Ok(())
}

fn closed_form(op: Op, x: &Rational) -> DecompositionResult {
    // sum: x = [x-2; 1] + [0; 1]; product: x = [x-1; 1] * [0; 1]
    let a0 = match op {
        Op::Sum => x.floor() - 2,
        Op::Product => x.floor() - 1,
    };
    DecompositionResult {
        op,
        x: x.clone(),
        first: EvenRestrictedSeq::new(a0, vec![], true),
        second: EvenRestrictedSeq::new(0, vec![], true),
        status: Status::TerminatedExactly,
        steps: 0,
        bracket: (x.clone(), x.clone()),
    }
}

fn run(op: Op, x: &Rational, k_max: usize) -> Result<DecompositionResult> {
    check_domain(op, x)?;
    if x.is_integer() {
        return Ok(closed_form(op, x));
    }
    let mut d = Decomposer::new(op, x)?;
    loop {
        if d.status().is_some() {
            break;
        }
        // Stop once k_max full steps are complete.
        if d.steps() >= k_max && d.next_is_first {
            break;
        }
        if d.next().is_none() {
            if let Some(e) = d.take_error() {
                return Err(match e {
                    Error::Infeasible { step, side } => Error::Invariant(format!(
                        "greedy selection infeasible at step {step} (target {side} the feasible interval) for x = {x}"
                    )),
                    e => e,
                });
            }
        }
    }
    Ok(d.result())
}

/// `x = first + second` with both components in the odd-quotients-one class.
pub fn sum_decompose(x: &Rational, k_max: usize) -> Result<DecompositionResult> {
    run(Op::Sum, x, k_max)
}

/// `x = first * second`, `x > 0`.
pub fn product_decompose(x: &Rational, k_max: usize) -> Result<DecompositionResult> {
    run(Op::Product, x, k_max)
}

pub fn decompose(op: Op, x: &Rational, k_max: usize) -> Result<DecompositionResult> {
    run(op, x, k_max)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyFailure {
    pub step: usize,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub steps_checked: usize,
    pub residual_width: Rational,
    pub failure: Option<VerifyFailure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Replays the step inequalities of `r` against `x` from scratch.
pub fn verify_decomposition(r: &DecompositionResult, x: &Rational, op: Op) -> VerifyReport {
    let mut report = VerifyReport { steps_checked: 0, residual_width: r.width(), failure: None };
    let fail = |step: usize, reason: String| Some(VerifyFailure { step, reason });
    if let Err(e) = check_domain(op, x) {
        report.failure = fail(0, e.to_string());
        return report;
    }
    let exact = r.status == Status::TerminatedExactly;

    if x.is_integer() {
        let ok = exact && op.combine(&r.first.value(), &r.second.value()) == *x;
        if !ok {
            report.failure = fail(0, "closed form does not reproduce x".into());
        }
        return report;
    }

    let (shift, a0) = match op {
        Op::Sum => (Rational::integer(x.floor() - 1), BigInt::zero()),
        Op::Product => (Rational::zero(), x.floor()),
    };
    if r.first.integer_part != shift.floor() + &a0 || !r.second.integer_part.is_zero() {
        report.failure = fail(0, "integer parts inconsistent with x".into());
        return report;
    }
    let y = x - &shift;
    let (ea, eb) = (&r.first.even_quotients, &r.second.even_quotients);
    let mut a = Side::new(a0);
    let mut b = Side::new(BigInt::zero());

    for k in 1..=ea.len() {
        // First component at step k.
        if b.evens.len() != k - 1 {
            report.failure = fail(k, "second component is missing quotients".into());
            return report;
        }
        let bv = b.prefix_value();
        let (low, high) = a.extend(&ea[k - 1]);
        let lo = op.combine(&low, &bv);
        let hi = op.combine(&high, &bv);
        let last_a = exact && k == ea.len() && !r.first.trailing_one;
        let ok = if last_a { lo == y } else { lo <= y && y < hi };
        if !ok {
            report.failure = fail(k, format!("first-component bracket [{lo}, {hi}) misses {y}"));
            return report;
        }
        report.steps_checked = k;
        if last_a {
            break;
        }
        // Second component at step k.
        let Some(d) = eb.get(k - 1) else { break };
        let (low, high) = b.extend(d);
        let lo = op.combine(&low, &high_of(&a));
        let hi = op.combine(&high, &high_of(&a));
        let last_b = exact && k == eb.len() && !r.second.trailing_one;
        let ok = if last_b { lo == y } else { lo <= y && y < hi };
        if !ok {
            report.failure = fail(k, format!("second-component bracket [{lo}, {hi}) misses {y}"));
            return report;
        }
    }

    if exact {
        let got = op.combine(&r.first.value(), &r.second.value());
        if got != *x {
            report.failure = fail(report.steps_checked, format!("reconstruction gives {got}, not {x}"));
        }
    } else if !(r.bracket.0 <= *x && *x < r.bracket.1) {
        report.failure = fail(report.steps_checked, "reported bracket does not contain x".into());
    }
    report
}

fn high_of(s: &Side) -> Rational {
    s.prefix_value()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn pair(r: &DecompositionResult) -> (String, String) {
        (r.first.to_string(), r.second.to_string())
    }

    #[test]
    fn selection_examples() {
        let prefix = ConvergentTable::from_word(0, &[1]);
        let s = select_even_quotient(&q("3/4"), &prefix, 1).unwrap();
        assert_eq!((s.c, s.exact), (BigUint::from(3u32), true));
        let s = select_even_quotient(&q("3/5"), &prefix, 1).unwrap();
        assert_eq!((s.c, s.exact), (BigUint::from(1u32), false));
        let s = select_even_quotient(&q("14/15"), &prefix, 1).unwrap();
        assert_eq!((s.c, s.exact), (BigUint::from(14u32), true));
        assert!(matches!(
            select_even_quotient(&q("1/3"), &prefix, 1),
            Err(Error::Infeasible { side: "below", .. })
        ));
        assert!(matches!(
            select_even_quotient(&q("1"), &prefix, 1),
            Err(Error::Infeasible { side: "at or above", .. })
        ));
    }

    #[test]
    fn sum_examples() {
        let r = sum_decompose(&q("3/2"), 32).unwrap();
        assert_eq!(pair(&r), ("[0;1,1]".into(), "[0;1]".into()));
        assert_eq!(r.status, Status::TerminatedExactly);
        let r = sum_decompose(&q("2"), 32).unwrap();
        assert_eq!(pair(&r), ("[0;1]".into(), "[0;1]".into()));
        let r = sum_decompose(&q("8/5"), 32).unwrap();
        assert_eq!(pair(&r), ("[0;1,1,1]".into(), "[0;1,14]".into()));
        let r = sum_decompose(&q("7/2"), 32).unwrap();
        assert_eq!(pair(&r), ("[2;1,1]".into(), "[0;1]".into()));
        assert!(matches!(sum_decompose(&q("1/3"), 32), Err(Error::Domain(_))));
    }

    #[test]
    fn product_examples() {
        let r = product_decompose(&q("1/2"), 32).unwrap();
        assert_eq!(pair(&r), ("[0;1,1]".into(), "[0;1]".into()));
        let r = product_decompose(&q("1"), 32).unwrap();
        assert_eq!(pair(&r), ("[0;1]".into(), "[0;1]".into()));
        let r = product_decompose(&q("5/2"), 32).unwrap();
        assert_eq!(pair(&r), ("[2;1,1]".into(), "[0;1]".into()));
        let r = product_decompose(&q("13/5"), 32).unwrap();
        assert_eq!(pair(&r), ("[2;1,1,1]".into(), "[0;1,39]".into()));
        assert!(matches!(product_decompose(&q("-1/2"), 32), Err(Error::Domain(_))));
    }

    #[test]
    fn verify_and_tamper() {
        for x in ["3/2", "8/5", "2"] {
            let r = sum_decompose(&q(x), 10).unwrap();
            let rep = verify_decomposition(&r, &q(x), Op::Sum);
            assert!(rep.passed(), "{x}: {:?}", rep.failure);
            assert!(rep.residual_width.is_zero());
        }
        let mut r = sum_decompose(&q("8/5"), 10).unwrap();
        r.second.even_quotients[0] += 1u32;
        let rep = verify_decomposition(&r, &q("8/5"), Op::Sum);
        assert_eq!(rep.failure.map(|f| f.step), Some(1));
    }

    #[test]
    fn truncation_keeps_bracket() {
        // 1000003/600000 needs many steps
        let x = q("1234567/654321");
        let r = sum_decompose(&x, 1).unwrap();
        if r.status == Status::Truncated {
            assert!(r.bracket.0 <= x && x < r.bracket.1);
            assert!(verify_decomposition(&r, &x, Op::Sum).passed());
        }
    }
}
