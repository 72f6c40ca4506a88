//! Admissible words `D_n`, fundamental intervals and gaps, the measure `μ`,
//! and the cover/ratio computations used for super-exponential growth.
//!
//! A word `(σ_2, ..., σ_{2n})` stands for the continued fraction
//! `[0; 1, σ_2, 1, σ_4, ..., 1, σ_{2n}]`. Position `j` (1-based) holds `σ_{2j}`.

mod cover;
mod intervals;
mod measure;

use std::fmt;

use num_traits::ToPrimitive;

use crate::cf::ConvergentTable;
use crate::error::{Error, Result};
use crate::rational::Rational;

pub use cover::{
    cover_weight_ebc, luczak_count, nested_ek_ratio, superexp_growth_check, CoverWeights, CountMode,
    GrowthCheck, LuczakCount, MkBranch, NestedRatio,
};
pub use intervals::{
    basic_interval, fundamental_interval, gap_closed_forms, gaps, level_gaps, FundamentalInterval, GapCase,
    GapReport, IntervalKind, LevelGap,
};
pub use measure::{
    child_sum_check, default_s_table, holder_scan, measure_mu, s_table_for, ChildSumReport, EstimationParams, HolderReport,
    MeasureNode,
};

/// Default cap on enumerated words.
pub const DEFAULT_WORD_BUDGET: u64 = 1 << 22;

/// Sparse scheduled indices `1 = n_1 < n_2 < ...` with their bounds.
///
/// At a scheduled position `n_k`, `σ` ranges over `[B^{2n_k}]+1 ..= 2[B^{2n_k}]`;
/// every other position ranges over `1..=α`.
#[derive(Clone, Debug)]
pub struct Schedule {
    indices: Vec<usize>,
    gaps: Vec<usize>,
    floors: Vec<u64>,
    base: Rational,
    alpha: u64,
}

impl Schedule {
    pub fn new(indices: Vec<usize>, base: Rational, alpha: u64) -> Result<Self> {
        if indices.first() != Some(&1) {
            return Err(Error::Domain("schedule must start with n_1 = 1".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Domain("schedule indices must be strictly increasing".into()));
        }
        if base <= 1 {
            return Err(Error::Domain(format!("B must exceed 1, got {base}")));
        }
        if alpha < 2 {
            return Err(Error::Domain("schedules need α >= 2".into()));
        }
        let mut gaps = vec![0];
        gaps.extend(indices.windows(2).map(|w| w[1] - w[0] - 1));
        let floors = indices
            .iter()
            .map(|&n| {
                base.pow(2 * n as i32).floor().to_u64().ok_or_else(|| {
                    Error::Resource(format!("[B^{}] does not fit in 64 bits", 2 * n))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Schedule { indices, gaps, floors, base, alpha })
    }

    pub fn from_f64(indices: Vec<usize>, base: f64, alpha: u64) -> Result<Self> {
        Self::new(indices, Rational::from_f64(base)?, alpha)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// `m_k = n_k - n_{k-1} - 1`, with `m_1 = 0`.
    pub fn gaps(&self) -> &[usize] {
        &self.gaps
    }

    pub fn base(&self) -> &Rational {
        &self.base
    }

    pub fn alpha(&self) -> u64 {
        self.alpha
    }

    /// `m_k` recomputed from the indices agrees with the stored gaps.
    pub fn gaps_consistent(&self) -> bool {
        self.gaps[0] == 0
            && self.indices.windows(2).zip(&self.gaps[1..]).all(|(w, &m)| m == w[1] - w[0] - 1)
    }

    /// 0-based `k` with `n_{k+1} = pos`.
    pub fn scheduled(&self, pos: usize) -> Option<usize> {
        self.indices.binary_search(&pos).ok()
    }

    /// `[B^{2n_k}]` for the `k`th (0-based) scheduled index.
    pub fn floor_power(&self, k: usize) -> u64 {
        self.floors[k]
    }

    /// Inclusive range of `σ` at position `pos`.
    pub fn range(&self, pos: usize) -> (u64, u64) {
        match self.scheduled(pos) {
            Some(k) => (self.floors[k] + 1, 2 * self.floors[k]),
            None => (1, self.alpha),
        }
    }

    /// `|D_n|`, or `None` on overflow.
    pub fn count_dn(&self, n: usize) -> Option<u64> {
        (1..=n).try_fold(1u64, |acc, pos| {
            let (lo, hi) = self.range(pos);
            acc.checked_mul(hi - lo + 1)
        })
    }

    pub fn word(&self, sigma: Vec<u64>) -> Result<AdmissibleWord> {
        if sigma.is_empty() {
            return Err(Error::Domain("admissible words have length >= 1".into()));
        }
        for (i, &s) in sigma.iter().enumerate() {
            let (lo, hi) = self.range(i + 1);
            if s < lo || s > hi {
                return Err(Error::Domain(format!(
                    "σ_{} = {s} outside admissible range {lo}..={hi}",
                    2 * (i + 1)
                )));
            }
        }
        Ok(AdmissibleWord { sigma })
    }
}

/// Member of `D_n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmissibleWord {
    sigma: Vec<u64>,
}

impl AdmissibleWord {
    pub fn sigma(&self) -> &[u64] {
        &self.sigma
    }

    pub fn depth(&self) -> usize {
        self.sigma.len()
    }

    /// `(1, σ_2, 1, σ_4, ..., 1, σ_{2n})`.
    pub fn interleaved(&self) -> Vec<u64> {
        interleave(&self.sigma)
    }
}

impl fmt::Display for AdmissibleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sigma.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl fmt::Debug for AdmissibleWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn interleave(sigma: &[u64]) -> Vec<u64> {
    sigma.iter().flat_map(|&s| [1, s]).collect()
}

pub(crate) fn cf_value(word: &[u64]) -> Rational {
    ConvergentTable::from_word(0, word).last_value()
}

/// Lexicographic stream over `D_n`.
pub struct DnIter<'a> {
    schedule: &'a Schedule,
    current: Option<Vec<u64>>,
}

impl Iterator for DnIter<'_> {
    type Item = AdmissibleWord;

    fn next(&mut self) -> Option<AdmissibleWord> {
        let cur = self.current.take()?;
        let mut nxt = cur.clone();
        let mut i = nxt.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            let (lo, hi) = self.schedule.range(i + 1);
            if nxt[i] < hi {
                nxt[i] += 1;
                self.current = Some(nxt);
                break;
            }
            nxt[i] = lo;
        }
        Some(AdmissibleWord { sigma: cur })
    }
}

pub fn enumerate_dn(s: &Schedule, n: usize, budget: u64) -> Result<DnIter<'_>> {
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    match s.count_dn(n) {
        Some(c) if c <= budget => {}
        _ => return Err(Error::Resource(format!("|D_{n}| exceeds the word budget of {budget}"))),
    }
    let start = (1..=n).map(|pos| s.range(pos).0).collect();
    Ok(DnIter { schedule: s, current: Some(start) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dn_counts() {
        let s = Schedule::from_f64(vec![1], 2.0, 3).unwrap();
        let w1: Vec<_> = enumerate_dn(&s, 1, 100).unwrap().map(|w| w.sigma()[0]).collect();
        assert_eq!(w1, vec![5, 6, 7, 8]);
        assert_eq!(enumerate_dn(&s, 2, 100).unwrap().count(), 12);
        let s = Schedule::from_f64(vec![1, 3], 2.0, 2).unwrap();
        assert_eq!(enumerate_dn(&s, 3, 10_000).unwrap().count() as u64, s.count_dn(3).unwrap());
        assert_eq!(s.count_dn(3), Some(4 * 2 * 64));
        assert!(matches!(enumerate_dn(&s, 3, 10), Err(Error::Resource(_))));
    }

    #[test]
    fn schedule_validation() {
        assert!(Schedule::from_f64(vec![1, 3], 2.0, 1).is_err());
        assert!(Schedule::from_f64(vec![2, 3], 2.0, 2).is_err());
        assert!(Schedule::from_f64(vec![1, 1], 2.0, 2).is_err());
        let s = Schedule::from_f64(vec![1, 3, 4, 8], 2.0, 2).unwrap();
        assert_eq!(s.gaps(), &[0, 1, 0, 3]);
        assert!(s.gaps_consistent());
        assert!(s.word(vec![4]).is_err());
        assert!(s.word(vec![5, 3]).is_err());
        assert!(s.word(vec![5, 2]).is_ok());
    }
}
