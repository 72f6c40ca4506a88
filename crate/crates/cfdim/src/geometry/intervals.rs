use num_bigint::BigInt;

use super::{cf_value, enumerate_dn, AdmissibleWord, Schedule};
use crate::cf::{cylinder, ConvergentTable};
use crate::error::Result;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalKind {
    Basic,
    Fundamental,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalInterval {
    pub word: AdmissibleWord,
    pub left: Rational,
    pub right: Rational,
    /// Closed form for fundamental intervals, `1/(q_n(q_n+q_{n-1}))` for basic ones.
    pub length: Rational,
    pub kind: IntervalKind,
}

/// Denominators of the interleaved word extended by one `1`:
/// `(q_{2n-3}, q_{2n-2}, q_{2n-1}, q_{2n}, q_{2n+1})` as big integers.
struct Qs {
    q: Vec<BigInt>,
}

impl Qs {
    fn new(w: &AdmissibleWord) -> Self {
        let mut word = w.interleaved();
        word.push(1);
        let t = ConvergentTable::from_word(0, &word);
        // q[i] = q_{i-1}, so index -1 is available.
        let mut q = vec![BigInt::from(0)];
        q.extend(t.rows().iter().map(|r| r.q.clone()));
        Qs { q }
    }

    fn at(&self, i: isize) -> &BigInt {
        &self.q[(i + 1) as usize]
    }
}

fn frac(num: impl Into<BigInt>, den: BigInt) -> Rational {
    Rational::new(num.into(), den).expect("positive denominator")
}

/// `J(w)`: closure of the union of the admissible child cylinders.
pub fn fundamental_interval(s: &Schedule, w: &AdmissibleWord) -> FundamentalInterval {
    let n = w.depth();
    let (lo, hi) = s.range(n + 1);
    let mut base = w.interleaved();
    base.push(1);
    let mut lw = base.clone();
    lw.push(lo);
    let mut rw = base;
    rw.push(hi + 1);
    let qs = Qs::new(w);
    let n2 = 2 * n as isize;
    let (q2n, q2n1) = (qs.at(n2), qs.at(n2 + 1));
    // closed-form length: children a in 1..=α when n + 1 is free, [B^{2n_k}]+1..=2[B^{2n_k}] when scheduled
    let length = match s.scheduled(n + 1) {
        Some(k) => {
            let kk = BigInt::from(s.floor_power(k));
            frac(
                kk.clone(),
                ((&kk + 1) * q2n1 + q2n) * ((2 * &kk + 1) * q2n1 + q2n),
            )
        }
        None => {
            let a = BigInt::from(s.alpha());
            frac(a.clone(), (q2n1 + q2n) * ((&a + 1) * q2n1 + q2n))
        }
    };
    FundamentalInterval {
        word: w.clone(),
        left: cf_value(&lw),
        right: cf_value(&rw),
        length,
        kind: IntervalKind::Fundamental,
    }
}

/// The cylinder `I(1, σ_2, ..., 1, σ_{2n})`.
pub fn basic_interval(w: &AdmissibleWord) -> FundamentalInterval {
    let c = cylinder(&w.interleaved()).expect("non-empty word");
    FundamentalInterval { word: w.clone(), left: c.left, right: c.right, length: c.length, kind: IntervalKind::Basic }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapCase {
    /// Position `n + 1` is free.
    Free,
    /// Position `n + 1` is scheduled (`n = n_k - 1`).
    PreScheduled,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub case: GapCase,
    /// Distance to the sibling `J` with `σ_{2n} - 1`; absent at the range minimum.
    pub g_left: Option<Rational>,
    /// Distance to the sibling `J` with `σ_{2n} + 1`; absent at the range maximum.
    pub g_right: Option<Rational>,
    /// Lower bound used on an absent left side: `[w', 1, 1] - [w']`.
    pub left_substitute: Option<Rational>,
    /// Lower bound used on an absent right side: `[w'^+, 1, 1] - [w', 1]`.
    pub right_substitute: Option<Rational>,
    /// Minimum over the sides that carry a value (closed form or substitute).
    pub g_min: Option<Rational>,
}

/// Closed-form sibling gaps from the denominators `q_{2n-1}, q_{2n}, q_{2n+1}`.
///
/// `k` is `Some([B^{2n_k}])` when position `n + 1` is scheduled, otherwise the
/// free-position formulas with `alpha` are used.
pub fn gap_closed_forms(
    q2nm1: &BigInt,
    q2n: &BigInt,
    q2n1: &BigInt,
    alpha: u64,
    k: Option<u64>,
) -> (Rational, Rational) {
    match k {
        None => {
            let a = BigInt::from(alpha);
            let num: BigInt = &a + 4;
            let gl = frac(num.clone(), (2 * q2n + q2nm1) * ((&a + 2) * q2n - q2nm1));
            let gr = frac(num, (2 * q2n + 3 * q2nm1) * ((&a + 1) * q2n1 + q2n));
            (gl, gr)
        }
        Some(k) => {
            let k = BigInt::from(k);
            let num: BigInt = 2 * &k * &k + 5 * &k + 4;
            let gl = frac(num.clone(), ((&k + 2) * q2n + (&k + 1) * q2nm1) * ((2 * &k + 2) * q2n - q2nm1));
            let gr = frac(num, ((&k + 2) * q2n + (2 * &k + 3) * q2nm1) * ((2 * &k + 1) * q2n1 + q2n));
            (gl, gr)
        }
    }
}

/// Gaps between `J(w)` and its neighbours at the same order.
pub fn gaps(s: &Schedule, w: &AdmissibleWord) -> GapReport {
    let n = w.depth();
    let sigma = *w.sigma().last().unwrap();
    let (lo, hi) = s.range(n);
    let qs = Qs::new(w);
    let n2 = 2 * n as isize;
    let next_k = s.scheduled(n + 1).map(|k| s.floor_power(k));
    let (gl, gr) = gap_closed_forms(qs.at(n2 - 1), qs.at(n2), qs.at(n2 + 1), s.alpha(), next_k);
    let case = if next_k.is_some() { GapCase::PreScheduled } else { GapCase::Free };

    let g_left = (sigma > lo).then_some(gl);
    let g_right = (sigma < hi).then_some(gr);
    // Boundary words compare against the neighbouring parent; no parent at n = 1.
    let left_substitute = (g_left.is_none() && n >= 2).then(|| {
        let (a, b) = (qs.at(n2 - 1), qs.at(n2 - 2));
        frac(1, (a + b) * b)
    });
    let right_substitute = (g_right.is_none() && n >= 2).then(|| {
        let (a, b, c) = (qs.at(n2 - 1), qs.at(n2 - 2), qs.at(n2 - 3));
        frac(1, a * (2 * b + 3 * c))
    });
    let g_min = [&g_left, &g_right, &left_substitute, &right_substitute]
        .into_iter()
        .flatten()
        .min()
        .cloned();
    GapReport { case, g_left, g_right, left_substitute, right_substitute, g_min }
}

/// True neighbour distances at one order, from sorted exact endpoints.
#[derive(Clone, Debug)]
pub struct LevelGap {
    pub interval: FundamentalInterval,
    pub left: Option<Rational>,
    pub right: Option<Rational>,
}

pub fn level_gaps(s: &Schedule, n: usize, budget: u64) -> Result<Vec<LevelGap>> {
    let mut ivs: Vec<FundamentalInterval> =
        enumerate_dn(s, n, budget)?.map(|w| fundamental_interval(s, &w)).collect();
    ivs.sort_by(|a, b| a.left.cmp(&b.left));
    let mut out = Vec::with_capacity(ivs.len());
    for i in 0..ivs.len() {
        let left = (i > 0).then(|| &ivs[i].left - &ivs[i - 1].right);
        let right = (i + 1 < ivs.len()).then(|| &ivs[i + 1].left - &ivs[i].right);
        out.push(LevelGap { interval: ivs[i].clone(), left, right });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_length_example() {
        // next position free, α = 3, word [0;1,5,1]: 3/442
        let s = Schedule::from_f64(vec![1, 3], 2.0, 3).unwrap();
        let w = s.word(vec![5]).unwrap();
        let j = fundamental_interval(&s, &w);
        assert_eq!(j.length, Rational::frac(3, 442));
        assert_eq!(&j.right - &j.left, j.length);
    }

    #[test]
    fn pre_scheduled_length() {
        let s = Schedule::from_f64(vec![1, 2], 2.0, 3).unwrap();
        for w in enumerate_dn(&s, 1, 100).unwrap() {
            let j = fundamental_interval(&s, &w);
            assert_eq!(&j.right - &j.left, j.length);
        }
    }

    #[test]
    fn basic_is_cylinder() {
        let s = Schedule::from_f64(vec![1], 2.0, 3).unwrap();
        let w = s.word(vec![6, 2]).unwrap();
        let b = basic_interval(&w);
        assert_eq!(b.length, cylinder(&[1, 6, 1, 2]).unwrap().length);
        let j = fundamental_interval(&s, &w);
        assert!(b.left <= j.left && j.right <= b.right);
    }

    #[test]
    fn right_gap_example() {
        // α = 3, σ_2 = 1 at a free position: q_1 = 1, q_2 = 2, q_3 = 3
        let (_, gr) = gap_closed_forms(&1.into(), &2.into(), &3.into(), 3, None);
        assert_eq!(gr, Rational::frac(1, 14));
        let direct = cf_value(&[1, 2, 1, 1]) - cf_value(&[1, 1, 1, 4]);
        assert_eq!(direct, gr);
    }

    #[test]
    fn substitutes_match_endpoint_differences() {
        let s = Schedule::from_f64(vec![1, 3], 2.0, 3).unwrap();
        let w = s.word(vec![6, 1]).unwrap();
        let g = gaps(&s, &w);
        assert!(g.g_left.is_none());
        let pre = [1, 6];
        assert_eq!(g.left_substitute.unwrap(), cf_value(&[1, 6, 1, 1]) - cf_value(&pre));
        let w = s.word(vec![6, 3]).unwrap();
        let g = gaps(&s, &w);
        assert!(g.g_right.is_none());
        assert_eq!(g.right_substitute.unwrap(), cf_value(&[1, 7, 1, 1]) - cf_value(&[1, 6, 1]));
    }
}
