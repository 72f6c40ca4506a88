//! Continued fractions: expansion, convergents, evaluation, comparison, cylinders.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// `[a0; a1, a2, ...]` with every `a_i >= 1` for `i >= 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CfExpansion {
    integer_part: BigInt,
    quotients: Vec<BigUint>,
    truncated: bool,
}

impl CfExpansion {
    pub fn new(integer_part: impl Into<BigInt>, quotients: Vec<BigUint>) -> Result<Self> {
        if quotients.iter().any(Zero::is_zero) {
            return Err(Error::Domain("partial quotients must be >= 1".into()));
        }
        Ok(CfExpansion { integer_part: integer_part.into(), quotients, truncated: false })
    }

    /// Convenience for small literal words.
    pub fn from_u64s(a0: i64, quotients: &[u64]) -> Self {
        Self::new(a0, quotients.iter().map(|&a| BigUint::from(a)).collect())
            .expect("quotients >= 1")
    }

    pub fn integer_part(&self) -> &BigInt {
        &self.integer_part
    }

    pub fn quotients(&self) -> &[BigUint] {
        &self.quotients
    }

    /// True when `expand` stopped at its term cap before the expansion ended.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// Last quotient (if any) is at least 2.
    pub fn is_canonical(&self) -> bool {
        self.quotients.last().is_none_or(|a| !a.is_one())
    }

    pub fn canonicalize(&self) -> CfExpansion {
        let mut a0 = self.integer_part.clone();
        let mut qs = self.quotients.clone();
        if qs.last().is_some_and(One::is_one) {
            qs.pop();
            match qs.last_mut() {
                Some(prev) => *prev += 1u32,
                None => a0 += 1,
            }
        }
        CfExpansion { integer_part: a0, quotients: qs, truncated: self.truncated }
    }

    pub fn evaluate(&self) -> Rational {
        let mut acc: Option<Rational> = None;
        for a in self.quotients.iter().rev() {
            let a = Rational::integer(BigInt::from(a.clone()));
            acc = Some(match acc {
                None => a,
                Some(t) => a + t.recip().expect("tail is positive"),
            });
        }
        let a0 = Rational::integer(self.integer_part.clone());
        match acc {
            None => a0,
            Some(t) => a0 + t.recip().expect("tail is positive"),
        }
    }

    pub fn convergents(&self, upto: usize) -> Result<ConvergentTable> {
        if upto > self.quotients.len() {
            return Err(Error::Range(format!(
                "upto={upto} exceeds expansion length {}",
                self.quotients.len()
            )));
        }
        let mut t = ConvergentTable::new(self.integer_part.clone());
        for a in &self.quotients[..upto] {
            t.push(a);
        }
        Ok(t)
    }

    pub fn compare(&self, other: &CfExpansion) -> Ordering {
        compare(self, other)
    }
}

impl fmt::Display for CfExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{};", self.integer_part)?;
        for (i, a) in self.quotients.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for CfExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for CfExpansion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a continued fraction: {s:?}"));
        let body = s.trim().strip_prefix('[').and_then(|b| b.strip_suffix(']')).ok_or_else(bad)?;
        let (a0, rest) = body.split_once(';').unwrap_or((body, ""));
        let a0: BigInt = a0.trim().parse().map_err(|_| bad())?;
        let quotients = rest
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<BigUint>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        CfExpansion::new(a0, quotients)
    }
}

/// Gauss-map expansion of `x`, capped at `max_terms` quotients.
pub fn expand(x: &Rational, max_terms: usize) -> CfExpansion {
    let mut it = PartialQuotients::new(x);
    let integer_part = it.integer_part().clone();
    let quotients: Vec<BigUint> = it.by_ref().take(max_terms).collect();
    let truncated = !it.is_exhausted();
    CfExpansion { integer_part, quotients, truncated }
}

/// Pull interface over the partial quotients of a rational.
pub struct PartialQuotients {
    a0: BigInt,
    // Remaining value is num/den in (0, 1), or exhausted when num == 0.
    num: BigInt,
    den: BigInt,
}

impl PartialQuotients {
    pub fn new(x: &Rational) -> Self {
        let a0 = x.floor();
        let rem = x.fract();
        PartialQuotients { a0, num: rem.numer().clone(), den: rem.denom().clone() }
    }

    pub fn integer_part(&self) -> &BigInt {
        &self.a0
    }

    pub fn is_exhausted(&self) -> bool {
        self.num.is_zero()
    }
}

impl Iterator for PartialQuotients {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        if self.num.is_zero() {
            return None;
        }
        // T(x) = 1/x mod 1 on x = num/den.
        let (a, r) = num_integer::Integer::div_rem(&self.den, &self.num);
        self.den = std::mem::replace(&mut self.num, r);
        Some(a.to_biguint().expect("positive quotient"))
    }
}

pub fn evaluate(cf: &CfExpansion) -> Rational {
    cf.evaluate()
}

pub fn canonicalize(cf: &CfExpansion) -> CfExpansion {
    cf.canonicalize()
}

/// First-disagreement parity rule.
///
/// At the first index `n` where the quotients differ, the smaller number has the
/// smaller quotient when `n` is even and the larger one when `n` is odd. A proper
/// prefix ending at index `n` is the smaller number exactly when `n` is even.
pub fn compare(a: &CfExpansion, b: &CfExpansion) -> Ordering {
    let a = a.canonicalize();
    let b = b.canonicalize();
    match a.integer_part.cmp(&b.integer_part) {
        Ordering::Equal => {}
        o => return o,
    }
    for (i, (x, y)) in a.quotients.iter().zip(&b.quotients).enumerate() {
        let n = i + 1;
        match x.cmp(y) {
            Ordering::Equal => continue,
            o if n % 2 == 0 => return o,
            o => return o.reverse(),
        }
    }
    let (la, lb) = (a.quotients.len(), b.quotients.len());
    match la.cmp(&lb) {
        Ordering::Equal => Ordering::Equal,
        Ordering::Less => {
            if la % 2 == 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        }
        Ordering::Greater => {
            if lb % 2 == 0 {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        }
    }
}

/// One `(k, p_k, q_k)` row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentRow {
    pub index: usize,
    pub p: BigInt,
    pub q: BigInt,
}

/// Convergents `p_k/q_k` for `k = 0..=n`, seeded with `p_{-1}=1, q_{-1}=0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergentTable {
    rows: Vec<ConvergentRow>,
}

impl ConvergentTable {
    pub fn new(a0: impl Into<BigInt>) -> Self {
        let a0 = a0.into();
        ConvergentTable { rows: vec![ConvergentRow { index: 0, p: a0, q: BigInt::one() }] }
    }

    pub fn from_word(a0: impl Into<BigInt>, word: &[u64]) -> Self {
        let mut t = Self::new(a0);
        for &a in word {
            t.push_u64(a);
        }
        t
    }

    pub fn push(&mut self, a: &BigUint) {
        let a = BigInt::from(a.clone());
        self.push_int(&a);
    }

    pub fn push_u64(&mut self, a: u64) {
        self.push_int(&BigInt::from(a));
    }

    fn push_int(&mut self, a: &BigInt) {
        let (p1, q1) = self.pq(self.last_index());
        let (p2, q2) = self.pq_prev(self.last_index());
        let index = self.last_index() + 1;
        self.rows.push(ConvergentRow { index, p: a * &p1 + p2, q: a * &q1 + q2 });
    }

    pub fn rows(&self) -> &[ConvergentRow] {
        &self.rows
    }

    pub fn last_index(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn last(&self) -> &ConvergentRow {
        self.rows.last().unwrap()
    }

    pub fn p(&self, k: usize) -> &BigInt {
        &self.rows[k].p
    }

    pub fn q(&self, k: usize) -> &BigInt {
        &self.rows[k].q
    }

    fn pq(&self, k: usize) -> (BigInt, BigInt) {
        (self.rows[k].p.clone(), self.rows[k].q.clone())
    }

    /// `(p_{k-1}, q_{k-1})`, with the `k = 0` seeds `(1, 0)`.
    pub fn pq_prev(&self, k: usize) -> (BigInt, BigInt) {
        if k == 0 {
            (BigInt::one(), BigInt::zero())
        } else {
            self.pq(k - 1)
        }
    }

    pub fn value(&self, k: usize) -> Rational {
        Rational::new(self.rows[k].p.clone(), self.rows[k].q.clone()).unwrap()
    }

    pub fn last_value(&self) -> Rational {
        self.value(self.last_index())
    }

    /// `p_k q_{k-1} - p_{k-1} q_k = (-1)^{k-1}` on every row.
    pub fn determinant_holds(&self) -> bool {
        self.rows.iter().all(|r| {
            let (pp, qp) = self.pq_prev(r.index);
            let det = &r.p * qp - pp * &r.q;
            let want = if r.index % 2 == 1 { BigInt::one() } else { -BigInt::one() };
            det == want
        })
    }
}

/// The set of points whose expansion in `[0,1)` starts with `word`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cylinder {
    pub word: Vec<u64>,
    pub left: Rational,
    pub right: Rational,
    pub left_closed: bool,
    pub right_closed: bool,
    pub length: Rational,
}

/// `I(a_1..a_n)`: endpoints `p_n/q_n` and `(p_n+p_{n-1})/(q_n+q_{n-1})`.
///
/// For even `n` the left endpoint `p_n/q_n` is included; for odd `n` it is the
/// right endpoint and is included there.
pub fn cylinder(word: &[u64]) -> Result<Cylinder> {
    if word.is_empty() || word.contains(&0) {
        return Err(Error::Domain("cylinder word must be non-empty with quotients >= 1".into()));
    }
    let t = ConvergentTable::from_word(0, word);
    let n = t.last_index();
    let (pn, qn) = t.pq(n);
    let (pm, qm) = t.pq_prev(n);
    let a = Rational::new(pn, qn.clone()).unwrap();
    let b = Rational::new(t.p(n) + pm, &qn + &qm).unwrap();
    let length = Rational::new(1, &qn * (&qn + &qm)).unwrap();
    let even = n % 2 == 0;
    let (left, right) = if even { (a, b) } else { (b, a) };
    Ok(Cylinder {
        word: word.to_vec(),
        left,
        right,
        left_closed: even,
        right_closed: !even,
        length,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(s: &str) -> CfExpansion {
        s.parse().unwrap()
    }

    #[test]
    fn expand_examples() {
        assert_eq!(expand(&Rational::frac(1, 2), 10).to_string(), "[0;2]");
        assert_eq!(expand(&Rational::frac(2, 3), 10).to_string(), "[0;1,2]");
        assert_eq!(expand(&Rational::integer(7), 10).to_string(), "[7;]");
        let e = expand(&Rational::frac(13, 8), 2);
        assert!(e.is_truncated());
        assert_eq!(e.quotients().len(), 2);
        assert_eq!(expand(&Rational::frac(-1, 3), 5).to_string(), "[-1;1,2]");
    }

    #[test]
    fn convergent_examples() {
        let t = cf("[0;1,2]").convergents(2).unwrap();
        let r: Vec<_> = t.rows()[1..].iter().map(|r| (r.index, r.p.clone(), r.q.clone())).collect();
        assert_eq!(r, vec![(1, 1.into(), 1.into()), (2, 2.into(), 3.into())]);
        assert_eq!(cf("[0;1]").convergents(1).unwrap().last_value(), Rational::one());
        assert_eq!(cf("[5;]").convergents(0).unwrap().last_value(), Rational::integer(5));
        assert!(matches!(cf("[0;1]").convergents(2), Err(Error::Range(_))));
        assert!(t.determinant_holds());
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(cf("[0;1,1]").evaluate(), Rational::frac(1, 2));
        assert_eq!(cf("[0;1,1,1]").evaluate(), Rational::frac(2, 3));
        assert_eq!(cf("[0;1,14]").evaluate(), Rational::frac(14, 15));
    }

    #[test]
    fn compare_examples() {
        assert_eq!(compare(&cf("[0;1,2]"), &cf("[0;1,3]")), Ordering::Less);
        assert_eq!(compare(&cf("[0;2]"), &cf("[0;2,7]")), Ordering::Greater);
        assert_eq!(compare(&cf("[0;3,4]"), &cf("[0;3,4]")), Ordering::Equal);
        assert_eq!(compare(&cf("[0;1]"), &cf("[1;]")), Ordering::Equal);
    }

    #[test]
    fn canonicalize_examples() {
        assert_eq!(cf("[0;1,1]").canonicalize().to_string(), "[0;2]");
        assert_eq!(cf("[0;2]").canonicalize().to_string(), "[0;2]");
        assert_eq!(cf("[3;4,1]").canonicalize().to_string(), "[3;5]");
        assert!(!cf("[0;1]").is_canonical());
    }

    #[test]
    fn cylinder_examples() {
        let c = cylinder(&[1]).unwrap();
        assert_eq!((c.left.clone(), c.right.clone()), (Rational::frac(1, 2), Rational::one()));
        assert!(c.right_closed && !c.left_closed);
        assert_eq!(c.length, Rational::frac(1, 2));

        let c = cylinder(&[1, 1]).unwrap();
        assert_eq!((c.left.clone(), c.right.clone()), (Rational::frac(1, 2), Rational::frac(2, 3)));
        assert!(c.left_closed);
        assert_eq!(c.length, Rational::frac(1, 6));

        let c = cylinder(&[2]).unwrap();
        assert_eq!((c.left.clone(), c.right.clone()), (Rational::frac(1, 3), Rational::frac(1, 2)));
        assert_eq!(c.length, Rational::frac(1, 6));
    }

    #[test]
    fn text_round_trip() {
        for s in ["[0;1,2]", "[-3;]", "[2;1,1,1]"] {
            assert_eq!(cf(s).to_string(), s);
        }
        assert!("0;1".parse::<CfExpansion>().is_err());
        assert!("[0;0]".parse::<CfExpansion>().is_err());
    }
}
