//! Budgeted low-weight search: sparse combinations of incidence rows, then
//! random information sets with low-weight messages. Every trajectory is a
//! function of the seed alone, and per-sample results are merged in sample
//! order, so the outcome does not depend on the worker count.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::packed::accumulator;
use crate::codes::{rref_fp_ordered, Alphabet, Code};
use crate::geometry::combinations;

const HIT_LIMIT: usize = 16;

/// Which visited codewords to keep: weight in `lo..=hi` and accepted by
/// `accept` (only evaluated for weights in range).
pub struct Hit<'a> {
    pub lo: usize,
    pub hi: usize,
    pub accept: &'a (dyn Fn(&[u8]) -> bool + Sync),
}

impl Hit<'_> {
    pub fn none() -> Hit<'static> {
        Hit { lo: 1, hi: 0, accept: &|_| false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub steps: u64,
    pub samples: u64,
    pub sparse_rows: usize,
    pub info_weight: usize,
    pub seed: u64,
}

/// What a search saw. `visits` counts visits per weight; the same codeword
/// may be visited more than once.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub steps: u64,
    pub sparse_steps: u64,
    pub info_set_steps: u64,
    pub samples_run: u64,
    pub visits: Vec<u64>,
    /// Lowest nonzero weight seen, with the first codeword attaining it.
    #[serde(skip)]
    pub best: Option<(usize, Vec<u8>)>,
    /// First codewords accepted by the hit predicate, in search order.
    #[serde(skip)]
    pub hits: Vec<(usize, Vec<u8>)>,
}

impl SearchOutcome {
    fn record(&mut self, weight: usize, entries: &dyn Fn() -> Vec<u8>, hit: &Hit<'_>) {
        if self.visits.len() <= weight {
            self.visits.resize(weight + 1, 0);
        }
        self.visits[weight] += 1;
        if weight > 0 && self.best.as_ref().is_none_or(|(w, _)| weight < *w) {
            self.best = Some((weight, entries()));
        }
        if self.hits.len() < HIT_LIMIT && (hit.lo..=hit.hi).contains(&weight) {
            let e = entries();
            if (hit.accept)(&e) {
                self.hits.push((weight, e));
            }
        }
    }

    fn absorb(&mut self, other: SearchOutcome) {
        self.steps += other.steps;
        self.info_set_steps += other.info_set_steps;
        self.sparse_steps += other.sparse_steps;
        self.samples_run += other.samples_run;
        if self.visits.len() < other.visits.len() {
            self.visits.resize(other.visits.len(), 0);
        }
        for (a, b) in self.visits.iter_mut().zip(other.visits) {
            *a += b;
        }
        if let Some((w, e)) = other.best {
            if self.best.as_ref().is_none_or(|(bw, _)| w < *bw) {
                self.best = Some((w, e));
            }
        }
        for h in other.hits {
            if self.hits.len() < HIT_LIMIT {
                self.hits.push(h);
            }
        }
    }
}

/// Combinations of exactly 1..=max_rows blocks with first coefficient 1,
/// depth first, until `cap` steps.
pub fn sparse_search(
    alpha: &Alphabet,
    len: usize,
    blocks: &[Vec<usize>],
    max_rows: usize,
    cap: u64,
    hit: &Hit<'_>,
) -> SearchOutcome {
    struct State<'a> {
        alpha: &'a Alphabet,
        blocks: &'a [Vec<usize>],
        cur: Vec<u8>,
        weight: usize,
        cap: u64,
        out: SearchOutcome,
    }

    impl State<'_> {
        fn apply(&mut self, b: usize, f: u8) {
            for &i in &self.blocks[b] {
                let old = self.cur[i];
                let new = self.alpha.add(old, f);
                self.weight = self.weight + (new != 0) as usize - (old != 0) as usize;
                self.cur[i] = new;
            }
        }

        /// false once the step cap is hit
        fn dfs(&mut self, start: usize, depth: usize, t: usize, hit: &Hit<'_>) -> bool {
            let p = self.alpha.p();
            for b in start..self.blocks.len() {
                let coefs = if depth == 0 { 1..2 } else { 1..p };
                for f in coefs {
                    self.apply(b, f);
                    let keep_going = if depth + 1 == t {
                        let cur = &self.cur;
                        self.out.record(self.weight, &|| cur.clone(), hit);
                        self.out.steps += 1;
                        self.out.steps < self.cap
                    } else {
                        self.dfs(b + 1, depth + 1, t, hit)
                    };
                    self.apply(b, self.alpha.neg(f));
                    if !keep_going {
                        return false;
                    }
                }
            }
            true
        }
    }

    let mut st = State { alpha, blocks, cur: vec![0; len], weight: 0, cap, out: SearchOutcome::default() };
    if cap > 0 {
        for t in 1..=max_rows.min(blocks.len()) {
            if !st.dfs(0, 0, t, hit) {
                break;
            }
        }
    }
    st.out.sparse_steps = st.out.steps;
    st.out
}

/// Canonical messages of weight 1..=max_weight over `dim` coordinates.
pub(crate) fn low_weight_message_count(dim: usize, p: u8, max_weight: usize) -> u64 {
    (1..=max_weight.min(dim))
        .map(|w| binom(dim as u64, w as u64).saturating_mul((p as u64 - 1).saturating_pow(w as u32 - 1)))
        .fold(0u64, |a, b| a.saturating_add(b))
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Visits every canonical message of weight 1..=max_weight (first nonzero
/// coefficient 1) over the given rows.
pub(crate) fn visit_low_weight(
    alpha: &Alphabet,
    rows: &[Vec<u8>],
    len: usize,
    max_weight: usize,
    mut visit: impl FnMut(usize, &dyn Fn() -> Vec<u8>),
) {
    let p = alpha.p();
    let mut acc = accumulator(alpha, rows, len);
    for w in 1..=max_weight.min(rows.len()) {
        for support in combinations(rows.len(), w) {
            let mut coefs = vec![1u8; w];
            loop {
                let pairs: Vec<(usize, u8)> = support.iter().copied().zip(coefs.iter().copied()).collect();
                acc.load(&pairs);
                visit(acc.weight(), &|| acc.entries());
                // odometer over coefficients 1..p of positions 1..w
                let mut j = w;
                let mut done = true;
                while j > 1 {
                    j -= 1;
                    coefs[j] += 1;
                    if coefs[j] < p {
                        done = false;
                        break;
                    }
                    coefs[j] = 1;
                }
                if done {
                    break;
                }
            }
        }
    }
}

/// Systematic generator with respect to a seeded random column order.
pub(crate) fn random_information_set(code: &Code, seed: u64, sample: u64) -> Vec<Vec<u8>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample + 1);
    let mut order: Vec<usize> = (0..code.length()).collect();
    order.shuffle(&mut rng);
    let mut rows = code.generator().to_vec();
    rref_fp_ordered(code.alphabet(), &mut rows, &order);
    rows
}

/// Information-set phase: samples run in parallel; merged in sample order.
pub fn info_set_search(code: &Code, cfg: &SearchConfig, cap: u64, hit: &Hit<'_>) -> SearchOutcome {
    let per_sample = low_weight_message_count(code.dim(), code.p(), cfg.info_weight).max(1);
    let samples = cfg.samples.min(cap / per_sample);
    let alpha = code.alphabet();
    let parts: Vec<SearchOutcome> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let rows = random_information_set(code, cfg.seed, s);
            let mut out = SearchOutcome { samples_run: 1, ..Default::default() };
            visit_low_weight(alpha, &rows, code.length(), cfg.info_weight, |w, e| {
                out.record(w, e, hit);
                out.steps += 1;
            });
            out.info_set_steps = out.steps;
            out
        })
        .collect();
    let mut total = SearchOutcome::default();
    for part in parts {
        total.absorb(part);
    }
    total
}

/// Sparse phase (when incidence rows are given) with at most half the step
/// budget, then the information-set phase with the rest.
pub fn budgeted_search(
    code: &Code,
    blocks: Option<&[Vec<usize>]>,
    cfg: &SearchConfig,
    hit: &Hit<'_>,
) -> SearchOutcome {
    let mut out = SearchOutcome::default();
    if let Some(blocks) = blocks {
        let cap = if cfg.samples > 0 { cfg.steps / 2 } else { cfg.steps };
        out = sparse_search(code.alphabet(), code.length(), blocks, cfg.sparse_rows, cap, hit);
    }
    let rest = cfg.steps.saturating_sub(out.steps);
    if cfg.samples > 0 && code.dim() > 0 {
        out.absorb(info_set_search(code, cfg, rest, hit));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn message_counts() {
        // 29 + C(29,2)*6
        assert_eq!(low_weight_message_count(29, 7, 2), 29 + 406 * 6);
        assert_eq!(low_weight_message_count(3, 2, 5), 7);
    }

    #[test]
    fn low_weight_visits_are_distinct_and_counted() {
        let alpha = Alphabet::new(5).unwrap();
        let rows: Vec<Vec<u8>> = (0..4).map(|i| (0..4).map(|j| (i == j) as u8).collect()).collect();
        let mut seen = std::collections::HashSet::new();
        visit_low_weight(&alpha, &rows, 4, 2, |w, e| {
            let v = e();
            assert_eq!(v.iter().filter(|&&x| x != 0).count(), w);
            assert!(seen.insert(v));
        });
        assert_eq!(seen.len() as u64, low_weight_message_count(4, 5, 2));
    }

    #[test]
    fn sparse_phase_respects_cap() {
        let alpha = Alphabet::new(3).unwrap();
        let blocks = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]];
        let all = sparse_search(&alpha, 4, &blocks, 3, u64::MAX, &Hit::none());
        // 4 + C(4,2)*2 + C(4,3)*4
        assert_eq!(all.steps, 4 + 12 + 16);
        let capped = sparse_search(&alpha, 4, &blocks, 3, 10, &Hit::none());
        assert_eq!(capped.steps, 10);
        assert_eq!(capped.visits.iter().sum::<u64>(), 10);
    }
}
