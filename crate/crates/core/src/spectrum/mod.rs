//! Weight enumeration, minimum-weight search and weight-gap verification.

mod enumerate;
mod gap;
mod packed;
mod search;
pub mod theorems;

use std::collections::BTreeMap;

use serde::Serialize;

pub use enumerate::{enumerate, exhaustive_feasible, CollectVisitor, HistogramVisitor, Visitor};
pub use gap::{gap_check, GapReport, GapVerdict, WeightInterval, Witness};
pub use search::{budgeted_search, info_set_search, sparse_search, Hit, SearchConfig, SearchOutcome};

use crate::budget::Budget;
use crate::codes::{rref_fp_ordered, Code, Codeword};
use crate::error::{Error, Result};
use enumerate::merge_counts;
use search::{low_weight_message_count, visit_low_weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Every codeword was visited; an empty verdict is a proof for the
    /// instance.
    Exhaustive,
    /// Partial search; an empty verdict only means no counterexample found.
    Budgeted,
    /// The interval holds no integers, nothing to search.
    Vacuous,
}

/// Exact number of codewords of each weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightDistribution {
    pub p: u8,
    pub dim: usize,
    pub length: usize,
    pub counts: BTreeMap<usize, u128>,
}

impl WeightDistribution {
    pub fn total(&self) -> u128 {
        self.counts.values().sum()
    }

    pub fn count(&self, w: usize) -> u128 {
        self.counts.get(&w).copied().unwrap_or(0)
    }

    /// Smallest nonzero weight, `None` for the zero code.
    pub fn min_weight(&self) -> Option<usize> {
        self.counts.keys().copied().find(|&w| w > 0)
    }
}

/// Counts over canonical representatives -> counts over all codewords.
pub(crate) fn canonical_histogram_to_counts(canon: &[u64], p: u8) -> BTreeMap<usize, u128> {
    let mut counts = BTreeMap::new();
    counts.insert(0, 1u128);
    for (w, &c) in canon.iter().enumerate() {
        if c > 0 && w > 0 {
            counts.insert(w, c as u128 * (p as u128 - 1));
        }
    }
    counts
}

/// Exact weight distribution by exhaustive Gray-order enumeration.
pub fn full_spectrum(code: &Code, budget: &Budget) -> Result<WeightDistribution> {
    let parts = enumerate(code, budget, HistogramVisitor::default)?;
    let canon = merge_counts(parts.into_iter().map(|v| v.counts));
    Ok(WeightDistribution {
        p: code.p(),
        dim: code.dim(),
        length: code.length(),
        counts: canonical_histogram_to_counts(&canon, code.p()),
    })
}

/// All codewords whose weight passes `wanted` (one per scalar class, first
/// nonzero entry 1), in enumeration order.
pub fn collect_canonical<P>(code: &Code, budget: &Budget, wanted: P, limit: usize) -> Result<Vec<Codeword>>
where
    P: Fn(usize) -> bool + Send + Clone + Sync,
{
    let parts = enumerate(code, budget, || CollectVisitor {
        hist: HistogramVisitor::default(),
        wanted: wanted.clone(),
        limit,
        words: Vec::new(),
        truncated: false,
    })?;
    if parts.iter().any(|v| v.truncated) {
        return Err(Error::BudgetExceeded { what: "collected codewords", needed: limit as u128 + 1, cap: limit as u128 });
    }
    Ok(parts
        .into_iter()
        .flat_map(|v| v.words)
        .map(|(_, e)| Codeword::from_entries(code.p(), e))
        .collect())
}

/// Every nonzero scalar multiple of each word.
pub fn expand_scalar_multiples(code: &Code, words: &[Codeword]) -> Vec<Codeword> {
    let a = code.alphabet();
    words
        .iter()
        .flat_map(|c| (1..code.p()).map(move |f| c.scale(a, f)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinWeight {
    pub weight: usize,
    pub witness: Witness,
    /// True when every lighter codeword has provably been ruled out.
    pub exact: bool,
    /// Proven lower bound on the minimum weight.
    pub lower_bound: usize,
    pub mode: SearchMode,
    pub steps: u64,
    pub disjoint_information_sets: usize,
}

/// Greedy family of pairwise disjoint information sets, as systematic
/// generators.
fn disjoint_information_sets(code: &Code) -> Vec<Vec<Vec<u8>>> {
    let mut used = vec![false; code.length()];
    let mut out = Vec::new();
    loop {
        let mut order: Vec<usize> = (0..code.length()).filter(|&i| !used[i]).collect();
        let fresh = order.len();
        order.extend((0..code.length()).filter(|&i| used[i]));
        let mut rows = code.generator().to_vec();
        let pivots = rref_fp_ordered(code.alphabet(), &mut rows, &order);
        if pivots.iter().any(|&c| used[c]) || fresh < code.dim() {
            break;
        }
        for &c in &pivots {
            used[c] = true;
        }
        out.push(rows);
    }
    out
}

/// Minimum weight: exhaustive when p^dim fits the budget, otherwise
/// enumeration of low-weight messages over disjoint information sets with
/// the matching lower bound `m (w + 1)`.
pub fn min_weight(code: &Code, budget: &Budget) -> Result<MinWeight> {
    if code.dim() == 0 {
        return Err(Error::InvalidParameter("zero-dimensional code has no minimum weight".into()));
    }
    if exhaustive_feasible(code, budget) {
        let dist = full_spectrum(code, budget)?;
        let w = dist.min_weight().expect("nonzero code");
        let parts = enumerate(code, budget, || CollectVisitor {
            hist: HistogramVisitor::default(),
            wanted: move |x| x == w,
            limit: 1,
            words: Vec::new(),
            truncated: false,
        })?;
        let (cw, e) = parts.into_iter().flat_map(|v| v.words).next().expect("a word of minimum weight");
        let c = Codeword::from_entries(code.p(), e);
        return Ok(MinWeight {
            weight: w,
            witness: Witness::new(code, c, cw),
            exact: true,
            lower_bound: w,
            mode: SearchMode::Exhaustive,
            steps: dist.total() as u64 / (code.p() as u64 - 1).max(1),
            disjoint_information_sets: 0,
        });
    }

    let sets = disjoint_information_sets(code);
    let m = sets.len();
    let alpha = code.alphabet();
    let mut best: Option<(usize, Codeword)> = None;
    let mut steps = 0u64;
    let mut lower = 1usize;
    let mut exact = false;
    for w in 1..=code.dim() {
        let level = low_weight_message_count(code.dim(), code.p(), w) * m as u64;
        if steps + level > budget.steps {
            break;
        }
        for rows in &sets {
            visit_low_weight(alpha, rows, code.length(), w, |wt, e| {
                if best.as_ref().is_none_or(|(b, _)| wt < *b) {
                    best = Some((wt, Codeword::from_entries(code.p(), e())));
                }
            });
        }
        steps += level;
        lower = lower.max(m * (w + 1));
        if best.as_ref().is_some_and(|(b, _)| *b <= lower) {
            exact = true;
            break;
        }
    }
    let (wt, c) = best.ok_or(Error::BudgetExceeded { what: "minimum-weight search", needed: 0, cap: budget.steps as u128 })?;
    Ok(MinWeight {
        weight: wt,
        witness: Witness::new(code, c, wt),
        exact,
        lower_bound: if exact { wt } else { lower.min(wt) },
        mode: SearchMode::Budgeted,
        steps,
        disjoint_information_sets: m,
    })
}
