//! Greedy strategies: whenever a vertex is chosen it predates along as many
//! legal out-arcs as it can, `min(pop, legal out-arcs)`.
//!
//! A vertex that has predated greedily either has population 0 or has no
//! legal out-arc left, and neither condition can be undone, so it never
//! predates again. A greedy strategy written as an ordered string of
//! predator arcs therefore splits uniquely into its batches, and the number
//! of strings produced by one run is the product of `l!` over its batches.

use std::collections::HashMap;

use serde::Serialize;

use super::solve::{BitIter, Packed};
use super::Web;
use crate::error::{check_cap, Result};

/// How a greedy step picks its prey when the predator cannot take them all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GreedyMode {
    /// Branch over every maximal prey subset.
    #[default]
    AllMaximalSubsets,
    /// Take the lowest-indexed prey.
    SmallestPreyFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GreedySummary {
    /// Distinct greedy strategies as ordered strings of predator arcs.
    pub strategies: u128,
    /// Distinct sequences of `(predator, prey set)` greedy steps.
    pub runs: u128,
    pub min_residual: usize,
    pub max_residual: usize,
}

struct Enumerator {
    packed: Packed,
    mode: GreedyMode,
    total: usize,
    memo: HashMap<u64, GreedySummary>,
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// Calls `f` with every `size`-subset of `items`, in lexicographic order.
fn for_each_subset(items: &[usize], size: usize, f: &mut impl FnMut(&[usize])) {
    fn go(
        items: &[usize],
        size: usize,
        start: usize,
        acc: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]),
    ) {
        if acc.len() == size {
            f(acc);
            return;
        }
        let need = size - acc.len();
        for i in start..=items.len() - need {
            acc.push(items[i]);
            go(items, size, i + 1, acc, f);
            acc.pop();
        }
    }
    go(items, size, 0, &mut Vec::with_capacity(size), f);
}

impl Enumerator {
    fn visit(&mut self, remaining: u64) -> GreedySummary {
        if let Some(s) = self.memo.get(&remaining) {
            return *s;
        }
        let n = self.packed.pop.len();
        let mut options: Vec<(usize, Vec<usize>)> = Vec::new();
        for v in 0..n {
            let pop = self.packed.pop[v];
            if pop == 0 {
                continue;
            }
            // arcs are sorted by (tail, head), so these come by increasing head
            let legal: Vec<usize> = BitIter(remaining)
                .filter(|&k| self.packed.tails[k] == v && self.packed.is_legal(k))
                .collect();
            if !legal.is_empty() {
                options.push((pop.min(legal.len()), legal));
            }
        }

        let summary = if options.is_empty() {
            let used = (self.packed.full_mask() & !remaining).count_ones() as usize;
            let r = self.total - 2 * used;
            GreedySummary {
                strategies: 1,
                runs: 1,
                min_residual: r,
                max_residual: r,
            }
        } else {
            let mut acc = GreedySummary {
                strategies: 0,
                runs: 0,
                min_residual: usize::MAX,
                max_residual: 0,
            };
            for (size, legal) in options {
                let orderings = factorial(size);
                let mut subsets: Vec<Vec<usize>> = Vec::new();
                match self.mode {
                    GreedyMode::AllMaximalSubsets => {
                        for_each_subset(&legal, size, &mut |s| subsets.push(s.to_vec()))
                    }
                    GreedyMode::SmallestPreyFirst => subsets.push(legal[..size].to_vec()),
                }
                for subset in subsets {
                    let mut next = remaining;
                    for &k in &subset {
                        self.packed.take(k);
                        next &= !(1u64 << k);
                    }
                    let child = self.visit(next);
                    for &k in &subset {
                        self.packed.give_back(k);
                    }
                    acc.strategies = acc
                        .strategies
                        .saturating_add(orderings.saturating_mul(child.strategies));
                    acc.runs = acc.runs.saturating_add(child.runs);
                    acc.min_residual = acc.min_residual.min(child.min_residual);
                    acc.max_residual = acc.max_residual.max(child.max_residual);
                }
            }
            acc
        };
        self.memo.insert(remaining, summary);
        summary
    }
}

pub fn enumerate_greedy(web: &Web, cap: usize) -> Result<GreedySummary> {
    enumerate_greedy_with(web, cap, GreedyMode::AllMaximalSubsets)
}

pub fn enumerate_greedy_with(web: &Web, cap: usize, mode: GreedyMode) -> Result<GreedySummary> {
    check_cap("arc count", web.arc_count(), cap.min(64))?;
    let mut e = Enumerator {
        packed: Packed::new(web),
        mode,
        total: web.total_population(),
        memo: HashMap::new(),
    };
    let full = e.packed.full_mask();
    Ok(e.visit(full))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::DEFAULT_ARC_CAP;

    fn summary(n: usize, arcs: &[(usize, usize)]) -> GreedySummary {
        let web = Web::from_arcs(n, arcs.iter().copied()).unwrap();
        enumerate_greedy(&web, DEFAULT_ARC_CAP).unwrap()
    }

    #[test]
    fn directed_path_has_two_greedy_strategies() {
        let s = summary(3, &[(1, 2), (2, 3)]);
        assert_eq!((s.strategies, s.min_residual), (2, 2));
        assert_eq!(s.runs, 2);
    }

    #[test]
    fn label_one_in_the_middle() {
        let s = summary(3, &[(3, 1), (1, 2)]);
        assert_eq!((s.strategies, s.min_residual), (2, 4));
    }

    #[test]
    fn single_arc() {
        let s = summary(2, &[(1, 2)]);
        assert_eq!((s.strategies, s.min_residual), (1, 1));
    }

    #[test]
    fn one_batch_counts_both_arc_orders() {
        // v2 takes both prey in one greedy step
        let s = summary(3, &[(2, 1), (2, 3)]);
        assert_eq!((s.strategies, s.runs, s.min_residual), (2, 1, 2));
    }

    #[test]
    fn subset_branching_depends_on_mode() {
        // v1 has population 1 and two prey
        let web = Web::from_arcs(3, [(1, 2), (1, 3)]).unwrap();
        let all = enumerate_greedy_with(&web, 24, GreedyMode::AllMaximalSubsets).unwrap();
        let first = enumerate_greedy_with(&web, 24, GreedyMode::SmallestPreyFirst).unwrap();
        assert_eq!(all.strategies, 2);
        assert_eq!(first.strategies, 1);
        assert_eq!(all.min_residual, 4);
        assert_eq!(first.min_residual, 4);
    }

    #[test]
    fn subsets_are_enumerated_lexicographically() {
        let mut seen = Vec::new();
        for_each_subset(&[4, 5, 6, 7], 2, &mut |s| seen.push(s.to_vec()));
        assert_eq!(
            seen,
            vec![
                vec![4, 5],
                vec![4, 6],
                vec![4, 7],
                vec![5, 6],
                vec![5, 7],
                vec![6, 7]
            ]
        );
    }
}
