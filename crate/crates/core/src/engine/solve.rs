//! Exact minimum residual by memoized search over remaining-arc sets.

use std::collections::HashMap;

use serde::Serialize;

use super::{Strategy, Web};
use crate::digraph::ArcPair;
use crate::error::{check_cap, Result};

pub const DEFAULT_ARC_CAP: usize = 24;
/// Masks are `u64`.
const HARD_ARC_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub grog: usize,
    pub max_predations: usize,
    pub states_explored: usize,
    pub witness: Strategy,
}

/// Arc endpoints as zero-based vertex slots, plus the live populations.
pub(super) struct Packed {
    pub tails: Vec<usize>,
    pub heads: Vec<usize>,
    pub pop: Vec<usize>,
}

impl Packed {
    pub fn new(web: &Web) -> Self {
        let arcs = web.digraph().arcs();
        Packed {
            tails: arcs.iter().map(|&(t, _)| t.index() - 1).collect(),
            heads: arcs.iter().map(|&(_, h)| h.index() - 1).collect(),
            pop: (1..=web.n()).collect(),
        }
    }

    pub fn full_mask(&self) -> u64 {
        match self.tails.len() {
            64 => u64::MAX,
            m => (1u64 << m) - 1,
        }
    }

    #[inline]
    pub fn is_legal(&self, k: usize) -> bool {
        self.pop[self.tails[k]] >= 1 && self.pop[self.heads[k]] >= 1
    }

    #[inline]
    pub fn take(&mut self, k: usize) {
        self.pop[self.tails[k]] -= 1;
        self.pop[self.heads[k]] -= 1;
    }

    #[inline]
    pub fn give_back(&mut self, k: usize) {
        self.pop[self.tails[k]] += 1;
        self.pop[self.heads[k]] += 1;
    }

    pub fn legal_in(&self, remaining: u64) -> impl Iterator<Item = usize> + '_ {
        BitIter(remaining).filter(move |&k| self.is_legal(k))
    }
}

pub(super) struct BitIter(pub u64);

impl Iterator for BitIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let k = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(k)
    }
}

struct Search {
    packed: Packed,
    /// remaining-arc mask -> most further predations
    memo: HashMap<u64, u32>,
}

impl Search {
    fn best(&mut self, remaining: u64) -> u32 {
        if let Some(&b) = self.memo.get(&remaining) {
            return b;
        }
        let legal: Vec<usize> = self.packed.legal_in(remaining).collect();
        // Arcs that are illegal now stay illegal, so the legal count bounds
        // what is still achievable.
        let bound = legal.len() as u32;
        let mut best = 0;
        for k in legal {
            self.packed.take(k);
            let b = 1 + self.best(remaining & !(1u64 << k));
            self.packed.give_back(k);
            if b > best {
                best = b;
                if best == bound {
                    break;
                }
            }
        }
        self.memo.insert(remaining, best);
        best
    }
}

/// Minimum residual over every strategy on `web`.
///
/// The witness is the lexicographically smallest sequence of single
/// `(predator, prey)` predations reaching the optimum, with consecutive
/// predations by one predator grouped into a batch.
pub fn solve_exact(web: &Web, cap: usize) -> Result<SolveResult> {
    check_cap("arc count", web.arc_count(), cap.min(HARD_ARC_CAP))?;
    let mut search = Search {
        packed: Packed::new(web),
        memo: HashMap::new(),
    };
    let full = search.packed.full_mask();
    let max_predations = search.best(full);

    let arcs = web.digraph().arcs();
    let mut witness: Vec<ArcPair> = Vec::new();
    let mut remaining = full;
    let mut left = max_predations;
    while left > 0 {
        let legal: Vec<usize> = search.packed.legal_in(remaining).collect();
        let mut chosen = None;
        for k in legal {
            search.packed.take(k);
            let next = remaining & !(1u64 << k);
            if 1 + search.best(next) == left {
                chosen = Some((k, next));
                break;
            }
            search.packed.give_back(k);
        }
        let (k, next) = chosen.expect("an optimal move exists while predations remain");
        witness.push(arcs[k]);
        remaining = next;
        left -= 1;
    }

    let max_predations = max_predations as usize;
    Ok(SolveResult {
        grog: web.total_population() - 2 * max_predations,
        max_predations,
        states_explored: search.memo.len(),
        witness: Strategy::from_arcs(&witness),
    })
}
