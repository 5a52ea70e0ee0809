//! Weight intervals and gap checks.

use std::fmt;

use num_rational::Ratio;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::enumerate::{enumerate, exhaustive_feasible, merge_counts, CollectVisitor, HistogramVisitor};
use super::search::{budgeted_search, Hit, SearchConfig};
use super::{canonical_histogram_to_counts, SearchMode};
use crate::budget::Budget;
use crate::codes::{Code, Codeword};
use crate::error::{Error, Result};

/// Codewords collected per exhaustive gap check before giving up on
/// materializing them.
const COLLECT_LIMIT: usize = 1 << 20;

/// An interval of weights with explicit open/closed ends and exact rational
/// endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightInterval {
    pub lo: Ratio<u64>,
    pub lo_open: bool,
    pub hi: Ratio<u64>,
    pub hi_open: bool,
}

impl WeightInterval {
    pub fn new(lo: Ratio<u64>, lo_open: bool, hi: Ratio<u64>, hi_open: bool) -> Result<WeightInterval> {
        if lo > hi {
            return Err(Error::MalformedInterval(format!("lower end {lo} above upper end {hi}")));
        }
        Ok(WeightInterval { lo, lo_open, hi, hi_open })
    }

    /// ]lo, hi[
    pub fn open(lo: u64, hi: u64) -> Result<WeightInterval> {
        Self::new(Ratio::from_integer(lo), true, Ratio::from_integer(hi), true)
    }

    /// [lo, hi]
    pub fn closed(lo: u64, hi: u64) -> Result<WeightInterval> {
        Self::new(Ratio::from_integer(lo), false, Ratio::from_integer(hi), false)
    }

    /// Smallest and largest integer in the interval, `None` if it has none.
    pub fn integer_range(&self) -> Option<(u64, u64)> {
        let lo = if self.lo_open { self.lo.floor().to_integer() + 1 } else { self.lo.ceil().to_integer() };
        let hi = if self.hi_open { self.hi.ceil().to_integer().checked_sub(1)? } else { self.hi.floor().to_integer() };
        (lo <= hi).then_some((lo, hi))
    }

    pub fn contains(&self, w: u64) -> bool {
        self.integer_range().is_some_and(|(a, b)| a <= w && w <= b)
    }
}

impl fmt::Display for WeightInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_open { ']' } else { '[' };
        let r = if self.hi_open { '[' } else { ']' };
        write!(f, "{l}{},{}{r}", self.lo, self.hi)
    }
}

impl Serialize for WeightInterval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("WeightInterval", 6)?;
        st.serialize_field("text", &self.to_string())?;
        st.serialize_field("lo", &self.lo.to_string())?;
        st.serialize_field("lo_open", &self.lo_open)?;
        st.serialize_field("hi", &self.hi.to_string())?;
        st.serialize_field("hi_open", &self.hi_open)?;
        st.serialize_field("integer_range", &self.integer_range())?;
        st.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapVerdict {
    Empty,
    WitnessFound,
}

/// A codeword in sparse form with its independent rechecks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub weight: usize,
    /// `index:value` pairs.
    pub sparse: String,
    /// Membership in the searched code, rechecked by reduction.
    pub in_code: bool,
    /// Weight recounted from the entries.
    pub weight_rechecked: bool,
    #[serde(skip)]
    pub codeword: Codeword,
}

impl Witness {
    pub fn new(code: &Code, c: Codeword, claimed_weight: usize) -> Witness {
        let recount = c.entries().iter().filter(|&&x| x != 0).count();
        Witness {
            weight: c.weight(),
            sparse: c.sparse(),
            in_code: code.contains(&c),
            weight_rechecked: recount == claimed_weight,
            codeword: c,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapReport {
    pub interval: WeightInterval,
    /// "all codewords" or the exempted subcode.
    pub restriction: String,
    pub verdict: GapVerdict,
    pub mode: SearchMode,
    pub witness: Option<Witness>,
    /// Codewords in the interval that were skipped because the exclusion
    /// contains them (exhaustive mode counts all scalar multiples).
    pub excluded_in_interval: u64,
    pub steps: u64,
    pub samples_run: u64,
    /// Exhaustive: exact weight distribution. Budgeted: visit counts.
    pub weights: Vec<(usize, u64)>,
}

impl GapReport {
    pub fn is_empty(&self) -> bool {
        self.verdict == GapVerdict::Empty
    }
}

fn nonzero_pairs(counts: &[u64]) -> Vec<(usize, u64)> {
    counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(w, &c)| (w, c)).collect()
}

/// Searches `code` for codewords with weight in `interval` that are not in
/// `exclusion`. Exhaustive when p^dim fits `budget.steps`, budgeted
/// otherwise (sparse combinations of `blocks`, then information sets).
pub fn gap_check(
    code: &Code,
    interval: &WeightInterval,
    exclusion: Option<(&str, &Code)>,
    blocks: Option<&[Vec<usize>]>,
    budget: &Budget,
    seed: u64,
) -> Result<GapReport> {
    let restriction = match exclusion {
        Some((name, _)) => format!("outside {name}"),
        None => "all codewords".to_string(),
    };
    let Some((lo, hi)) = interval.integer_range() else {
        return Ok(GapReport {
            interval: interval.clone(),
            restriction,
            verdict: GapVerdict::Empty,
            mode: SearchMode::Vacuous,
            witness: None,
            excluded_in_interval: 0,
            steps: 0,
            samples_run: 0,
            weights: Vec::new(),
        });
    };
    let in_range = move |w: usize| (lo as usize..=hi as usize).contains(&w);
    let p = code.p();
    let excluded = |c: &Codeword| exclusion.is_some_and(|(_, d)| d.contains(c));

    if exhaustive_feasible(code, budget) {
        let parts = enumerate(code, budget, || CollectVisitor {
            hist: HistogramVisitor::default(),
            wanted: in_range,
            limit: COLLECT_LIMIT,
            words: Vec::new(),
            truncated: false,
        })?;
        if parts.iter().any(|v| v.truncated) {
            return Err(Error::BudgetExceeded {
                what: "codewords materialized in gap interval",
                needed: COLLECT_LIMIT as u128 + 1,
                cap: COLLECT_LIMIT as u128,
            });
        }
        let steps: u64 = parts.iter().map(|v| v.hist.counts.iter().sum::<u64>()).sum();
        let mut witness = None;
        let mut skipped = 0u64;
        let mut canon = Vec::new();
        for part in parts {
            canon.push(part.hist.counts);
            for (w, e) in part.words {
                let c = Codeword::from_entries(p, e);
                if excluded(&c) {
                    skipped += p as u64 - 1;
                } else if witness.is_none() {
                    witness = Some(Witness::new(code, c, w));
                }
            }
        }
        let counts = canonical_histogram_to_counts(&merge_counts(canon), p);
        return Ok(GapReport {
            interval: interval.clone(),
            restriction,
            verdict: if witness.is_some() { GapVerdict::WitnessFound } else { GapVerdict::Empty },
            mode: SearchMode::Exhaustive,
            witness,
            excluded_in_interval: skipped,
            steps,
            samples_run: 0,
            weights: counts.iter().map(|(&w, &c)| (w, c as u64)).collect(),
        });
    }

    let cfg = SearchConfig {
        steps: budget.steps,
        samples: budget.samples,
        sparse_rows: budget.sparse_rows,
        info_weight: budget.info_weight,
        seed,
    };
    let skipped = std::sync::atomic::AtomicU64::new(0);
    let accept = |e: &[u8]| {
        let c = Codeword::from_entries(p, e.to_vec());
        if excluded(&c) {
            skipped.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            false
        } else {
            true
        }
    };
    let hit = Hit { lo: lo as usize, hi: hi as usize, accept: &accept };
    let out = budgeted_search(code, blocks, &cfg, &hit);
    let witness = out
        .hits
        .first()
        .map(|(w, e)| Witness::new(code, Codeword::from_entries(p, e.clone()), *w));
    Ok(GapReport {
        interval: interval.clone(),
        restriction,
        verdict: if witness.is_some() { GapVerdict::WitnessFound } else { GapVerdict::Empty },
        mode: SearchMode::Budgeted,
        witness,
        excluded_in_interval: skipped.into_inner(),
        steps: out.steps,
        samples_run: out.samples_run,
        weights: nonzero_pairs(&out.visits),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_ranges() {
        assert_eq!(WeightInterval::open(4, 6).unwrap().integer_range(), Some((5, 5)));
        assert_eq!(WeightInterval::open(4, 5).unwrap().integer_range(), None);
        assert_eq!(WeightInterval::closed(5, 5).unwrap().integer_range(), Some((5, 5)));
        assert!(WeightInterval::closed(4, 3).unwrap_err().to_string().contains("above"));
        let r = WeightInterval::new(Ratio::from_integer(12), true, Ratio::new(150, 7), true).unwrap();
        assert_eq!(r.integer_range(), Some((13, 21)));
        assert_eq!(r.to_string(), "]12,150/7[");
        let r = WeightInterval::new(Ratio::new(1, 2), false, Ratio::new(7, 2), false).unwrap();
        assert_eq!(r.integer_range(), Some((1, 3)));
        assert!(WeightInterval::open(0, 0).unwrap().integer_range().is_none());
    }
}
