//! Exhaustive codeword enumeration in mixed-radix Gray order.
//!
//! Only messages whose first nonzero coordinate is 1 are visited. With an
//! RREF generator those are exactly the codewords whose first nonzero entry
//! is 1, one per scalar class, so every nonzero codeword is represented by
//! exactly one visit. The message space is cut into blocks (leading position
//! plus a directly encoded prefix); each block is walked in reflected Gray
//! order so every step is a single generator-row add or subtract.

use rayon::prelude::*;

use super::packed::{accumulator, Accumulator};
use crate::budget::Budget;
use crate::codes::Code;
use crate::error::{Error, Result};

/// Free coordinates fixed per block; gives at most p^SPLIT blocks per lead.
const SPLIT: usize = 6;

/// Receives every canonical nonzero codeword of a block, in order.
pub trait Visitor: Send {
    /// `entries` materializes the codeword on demand.
    fn visit(&mut self, weight: usize, entries: &dyn Fn() -> Vec<u8>);
}

#[derive(Clone, Debug)]
struct Block {
    lead: usize,
    prefix: Vec<u8>,
}

/// Whether p^dim fits the exhaustive budget.
pub fn exhaustive_feasible(code: &Code, budget: &Budget) -> bool {
    message_space(code).is_some_and(|m| m <= budget.steps as u128)
}

fn message_space(code: &Code) -> Option<u128> {
    (code.p() as u128).checked_pow(code.dim() as u32)
}

fn blocks(code: &Code) -> Vec<Block> {
    let p = code.p() as u32;
    let dim = code.dim();
    let mut out = Vec::new();
    for lead in 0..dim {
        let free = dim - lead - 1;
        let s = free.min(SPLIT);
        let mut prefix = vec![0u32; s];
        loop {
            out.push(Block { lead, prefix: prefix.iter().map(|&x| x as u8).collect() });
            if !crate::geometry::advance(&mut prefix, p) {
                break;
            }
        }
    }
    out
}

/// Reflected mixed-radix Gray walk over `m` digits of radix `p`. Calls
/// `step(j, sign)` for each move; visits p^m states including the start.
pub(crate) fn gray_walk(m: usize, p: u8, mut step: impl FnMut(usize, i8)) {
    let mut digit = vec![0u8; m];
    let mut dir = vec![1i8; m];
    loop {
        let mut j = 0;
        while j < m {
            let next = digit[j] as i16 + dir[j] as i16;
            if (0..p as i16).contains(&next) {
                digit[j] = next as u8;
                break;
            }
            dir[j] = -dir[j];
            j += 1;
        }
        if j == m {
            return;
        }
        step(j, dir[j]);
    }
}

fn run_block<V: Visitor>(code: &Code, block: &Block, visitor: &mut V) {
    let dim = code.dim();
    let s = block.prefix.len();
    // prefix occupies the highest message coordinates
    let gray_start = block.lead + 1;
    let gray_len = dim - gray_start - s;
    let mut coefs: Vec<(usize, u8)> = vec![(block.lead, 1)];
    for (i, &c) in block.prefix.iter().enumerate() {
        coefs.push((dim - s + i, c));
    }
    let mut acc: Box<dyn Accumulator> = accumulator(code.alphabet(), code.generator(), code.length());
    acc.load(&coefs);
    let visit = |acc: &dyn Accumulator, visitor: &mut V| {
        visitor.visit(acc.weight(), &|| acc.entries());
    };
    visit(acc.as_ref(), visitor);
    gray_walk(gray_len, code.p(), |j, sign| {
        acc.step(gray_start + j, sign);
        visit(acc.as_ref(), visitor);
    });
}

/// Runs one visitor per block (in parallel) and returns them in block order.
pub fn enumerate<V, F>(code: &Code, budget: &Budget, make: F) -> Result<Vec<V>>
where
    V: Visitor,
    F: Fn() -> V + Sync,
{
    let space = message_space(code).unwrap_or(u128::MAX);
    if space > budget.steps as u128 {
        return Err(Error::BudgetExceeded { what: "exhaustive enumeration", needed: space, cap: budget.steps as u128 });
    }
    let blocks = blocks(code);
    Ok(blocks
        .par_iter()
        .map(|b| {
            let mut v = make();
            run_block(code, b, &mut v);
            v
        })
        .collect())
}

/// Weight histogram over canonical representatives.
#[derive(Default)]
pub struct HistogramVisitor {
    pub counts: Vec<u64>,
}

impl Visitor for HistogramVisitor {
    #[inline]
    fn visit(&mut self, weight: usize, _entries: &dyn Fn() -> Vec<u8>) {
        if self.counts.len() <= weight {
            self.counts.resize(weight + 1, 0);
        }
        self.counts[weight] += 1;
    }
}

/// Histogram plus materialized codewords whose weight passes a filter.
pub struct CollectVisitor<P: Fn(usize) -> bool + Send> {
    pub hist: HistogramVisitor,
    pub wanted: P,
    pub limit: usize,
    pub words: Vec<(usize, Vec<u8>)>,
    pub truncated: bool,
}

impl<P: Fn(usize) -> bool + Send> Visitor for CollectVisitor<P> {
    fn visit(&mut self, weight: usize, entries: &dyn Fn() -> Vec<u8>) {
        self.hist.visit(weight, entries);
        if (self.wanted)(weight) {
            if self.words.len() < self.limit {
                self.words.push((weight, entries()));
            } else {
                self.truncated = true;
            }
        }
    }
}

pub(crate) fn merge_counts(parts: impl IntoIterator<Item = Vec<u64>>) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::new();
    for part in parts {
        if out.len() < part.len() {
            out.resize(part.len(), 0);
        }
        for (o, c) in out.iter_mut().zip(part) {
            *o += c;
        }
    }
    out
}
