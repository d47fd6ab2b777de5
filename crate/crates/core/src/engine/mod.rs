//! The Grog predator-prey process on a labelled web.
//!
//! Vertex `v_i` starts with population `i`. A step picks a predator and some
//! of its remaining out-arcs; each chosen arc is consumed and costs both the
//! predator and that prey one unit. A predator with population `p` may use at
//! most `p` arcs, and an exhausted prey cannot be taken. The process exits
//! when no remaining arc joins two vertices of positive population.
//!
//! Because every consumed arc costs exactly one unit at each endpoint, the
//! state after any run is determined by the set of consumed arcs alone:
//! `pop(v) = label(v) - (consumed arcs incident to v)`.

mod greedy;
mod solve;

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize, Serializer};

use crate::digraph::{ArcPair, Digraph, DigraphFile, VertexId};
use crate::error::{Error, IllegalBatch, Result};

pub use greedy::{enumerate_greedy, enumerate_greedy_with, GreedyMode, GreedySummary};
pub use solve::{solve_exact, SolveResult, DEFAULT_ARC_CAP};

/// A digraph read as a predator-prey web; `v_i` starts with population `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Web {
    digraph: Digraph,
}

impl Web {
    pub fn new(digraph: Digraph) -> Self {
        Web { digraph }
    }

    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Ok(Web::new(Digraph::new(n, arcs)?))
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    pub fn n(&self) -> usize {
        self.digraph.n()
    }

    pub fn arc_count(&self) -> usize {
        self.digraph.arc_count()
    }

    pub fn population(&self, v: VertexId) -> usize {
        v.index()
    }

    /// `1 + 2 + ... + n`.
    pub fn total_population(&self) -> usize {
        let n = self.n();
        n * (n + 1) / 2
    }

    pub fn start(&self) -> GrogState {
        new_state(self)
    }

    /// Vertices with no in-arcs (pure predators).
    pub fn exclusive_predators(&self) -> Vec<VertexId> {
        self.digraph
            .vertices()
            .filter(|&v| self.digraph.in_degree(v) == 0 && self.digraph.out_degree(v) > 0)
            .collect()
    }

    /// Vertices with no out-arcs (pure prey).
    pub fn exclusive_prey(&self) -> Vec<VertexId> {
        self.digraph
            .vertices()
            .filter(|&v| self.digraph.out_degree(v) == 0 && self.digraph.in_degree(v) > 0)
            .collect()
    }
}

/// Remaining arcs and current populations during a run.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrogState {
    remaining: BTreeSet<ArcPair>,
    pop: Vec<usize>,
}

pub fn new_state(web: &Web) -> GrogState {
    GrogState {
        remaining: web.digraph.arcs().iter().copied().collect(),
        pop: (1..=web.n()).collect(),
    }
}

impl GrogState {
    pub fn remaining(&self) -> &BTreeSet<ArcPair> {
        &self.remaining
    }

    pub fn population(&self, v: VertexId) -> usize {
        self.pop[v.index() - 1]
    }

    /// Populations of `v_1 ..= v_n`.
    pub fn populations(&self) -> &[usize] {
        &self.pop
    }

    pub fn residual(&self) -> usize {
        self.pop.iter().sum()
    }

    fn has_vertex(&self, v: VertexId) -> bool {
        v.index() >= 1 && v.index() <= self.pop.len()
    }

    /// Remaining arcs whose tail and head both have positive population,
    /// in `(tail, head)` order.
    pub fn legal_predations(&self) -> Vec<ArcPair> {
        self.remaining
            .iter()
            .copied()
            .filter(|&(u, v)| self.population(u) >= 1 && self.population(v) >= 1)
            .collect()
    }

    pub fn is_terminal(&self) -> bool {
        !self
            .remaining
            .iter()
            .any(|&(u, v)| self.population(u) >= 1 && self.population(v) >= 1)
    }

    /// Legal out-arcs of `v` in the current state, by increasing head.
    pub fn legal_prey_of(&self, v: VertexId) -> Vec<VertexId> {
        if !self.has_vertex(v) || self.population(v) == 0 {
            return Vec::new();
        }
        self.remaining
            .range((v, VertexId::new(0))..=(v, VertexId::new(usize::MAX)))
            .map(|&(_, h)| h)
            .filter(|&h| self.population(h) >= 1)
            .collect()
    }

    pub fn apply_batch(&self, batch: &PredationBatch) -> Result<GrogState, IllegalBatch> {
        let mut next = self.clone();
        next.apply_batch_in_place(batch)?;
        Ok(next)
    }

    fn apply_batch_in_place(&mut self, batch: &PredationBatch) -> Result<(), IllegalBatch> {
        self.check_batch(batch)?;
        let p = batch.predator;
        for &prey in &batch.prey {
            self.remaining.remove(&(p, prey));
            self.pop[prey.index() - 1] -= 1;
        }
        self.pop[p.index() - 1] -= batch.prey.len();
        Ok(())
    }

    fn check_batch(&self, batch: &PredationBatch) -> Result<(), IllegalBatch> {
        let p = batch.predator;
        if !self.has_vertex(p) {
            return Err(IllegalBatch::UnknownVertex(p));
        }
        if batch.prey.is_empty() {
            return Err(IllegalBatch::EmptyPrey(p));
        }
        let mut seen = BTreeSet::new();
        for &prey in &batch.prey {
            if !self.has_vertex(prey) {
                return Err(IllegalBatch::UnknownVertex(prey));
            }
            if !seen.insert(prey) {
                return Err(IllegalBatch::RepeatedPrey(p, prey));
            }
            if !self.remaining.contains(&(p, prey)) {
                return Err(IllegalBatch::ArcNotRemaining(p, prey));
            }
        }
        let needed = batch.prey.len();
        if self.population(p) < needed {
            return Err(IllegalBatch::PredatorExhausted {
                predator: p,
                population: self.population(p),
                needed,
            });
        }
        if let Some(&prey) = batch.prey.iter().find(|&&q| self.population(q) == 0) {
            return Err(IllegalBatch::PreyExhausted(prey));
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct StateFile {
    remaining: Vec<[usize; 2]>,
    population: Vec<usize>,
}

impl Serialize for GrogState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateFile {
            remaining: self
                .remaining
                .iter()
                .map(|&(u, v)| [u.index(), v.index()])
                .collect(),
            population: self.pop.clone(),
        }
        .serialize(s)
    }
}

/// One step: `predator` takes every vertex in `prey` along its out-arcs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PredationBatch {
    pub predator: VertexId,
    pub prey: Vec<VertexId>,
}

impl PredationBatch {
    pub fn new(predator: usize, prey: impl IntoIterator<Item = usize>) -> Self {
        PredationBatch {
            predator: VertexId::new(predator),
            prey: prey.into_iter().map(VertexId::new).collect(),
        }
    }

    pub fn single(predator: VertexId, prey: VertexId) -> Self {
        PredationBatch {
            predator,
            prey: vec![prey],
        }
    }

    pub fn arcs(&self) -> impl Iterator<Item = ArcPair> + '_ {
        self.prey.iter().map(move |&q| (self.predator, q))
    }
}

/// An ordered sequence of predation batches.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Strategy(pub Vec<PredationBatch>);

impl Strategy {
    pub fn new(batches: Vec<PredationBatch>) -> Self {
        Strategy(batches)
    }

    /// Groups consecutive arcs with the same tail into one batch.
    pub fn from_arcs(arcs: &[ArcPair]) -> Self {
        let mut out: Vec<PredationBatch> = Vec::new();
        for &(u, v) in arcs {
            match out.last_mut() {
                Some(b) if b.predator == u && !b.prey.contains(&v) => b.prey.push(v),
                _ => out.push(PredationBatch::single(u, v)),
            }
        }
        Strategy(out)
    }

    /// Splits every batch into single-arc steps.
    pub fn to_singles(&self) -> Strategy {
        Strategy(
            self.arcs()
                .map(|(u, v)| PredationBatch::single(u, v))
                .collect(),
        )
    }

    pub fn batches(&self) -> &[PredationBatch] {
        &self.0
    }

    pub fn arcs(&self) -> impl Iterator<Item = ArcPair> + '_ {
        self.0.iter().flat_map(PredationBatch::arcs)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub final_state: GrogState,
    pub residual: usize,
    pub predation_count: usize,
    /// Consumed arcs, sorted.
    pub used_arcs: Vec<ArcPair>,
}

impl RunResult {
    pub fn is_terminal(&self) -> bool {
        self.final_state.is_terminal()
    }
}

#[derive(Serialize)]
struct RunFile<'a> {
    residual: usize,
    predation_count: usize,
    used_arcs: Vec<[usize; 2]>,
    terminal: bool,
    final_state: &'a GrogState,
}

impl Serialize for RunResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RunFile {
            residual: self.residual,
            predation_count: self.predation_count,
            used_arcs: self
                .used_arcs
                .iter()
                .map(|&(u, v)| [u.index(), v.index()])
                .collect(),
            terminal: self.is_terminal(),
            final_state: &self.final_state,
        }
        .serialize(s)
    }
}

/// Replays `strategy` on `web`. With `require_exit` the final state must be
/// terminal.
pub fn run_strategy(web: &Web, strategy: &Strategy, require_exit: bool) -> Result<RunResult> {
    let mut state = web.start();
    for (step, batch) in strategy.batches().iter().enumerate() {
        state
            .apply_batch_in_place(batch)
            .map_err(|reason| Error::IllegalStep { step, reason })?;
    }
    if require_exit && !state.is_terminal() {
        return Err(Error::NotTerminal {
            legal: state.legal_predations().len(),
        });
    }
    let used_arcs: Vec<ArcPair> = web
        .digraph()
        .arcs()
        .iter()
        .copied()
        .filter(|a| !state.remaining.contains(a))
        .collect();
    Ok(RunResult {
        residual: state.residual(),
        predation_count: used_arcs.len(),
        used_arcs,
        final_state: state,
    })
}

/// Plays uniformly random legal batches until the web exits: a random
/// predator with a legal out-arc, a random batch size, a random prey subset.
pub fn random_maximal_strategy<R: Rng + ?Sized>(web: &Web, rng: &mut R) -> Strategy {
    let mut state = web.start();
    let mut batches = Vec::new();
    loop {
        let predators: Vec<(VertexId, Vec<VertexId>)> = web
            .digraph()
            .vertices()
            .map(|v| (v, state.legal_prey_of(v)))
            .filter(|(_, prey)| !prey.is_empty())
            .collect();
        let Some((p, prey)) = predators.choose(rng) else {
            break;
        };
        let max = prey.len().min(state.population(*p));
        let size = rng.gen_range(1..=max);
        let mut chosen: Vec<VertexId> = prey.choose_multiple(rng, size).copied().collect();
        chosen.sort_unstable();
        let batch = PredationBatch {
            predator: *p,
            prey: chosen,
        };
        state
            .apply_batch_in_place(&batch)
            .expect("batch drawn from legal prey");
        batches.push(batch);
    }
    Strategy(batches)
}

impl From<&Web> for DigraphFile {
    fn from(w: &Web) -> Self {
        w.digraph.clone().into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn path_web() -> Web {
        Web::from_arcs(3, [(1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn initial_state() {
        let s = path_web().start();
        assert_eq!(s.populations(), &[1, 2, 3]);
        assert_eq!(s.remaining().len(), 2);
        let s = Web::from_arcs(2, [(1, 2)]).unwrap().start();
        assert_eq!(s.populations(), &[1, 2]);
        assert_eq!(s.remaining().len(), 1);
        let lone = Web::new(Digraph::empty(1));
        assert!(lone.start().is_terminal());
        assert_eq!(lone.start().residual(), 1);
    }

    #[test]
    fn legal_predations_respect_both_populations() {
        let web = path_web();
        let s = web.start();
        assert_eq!(s.legal_predations().len(), 2);

        // v1 spent: (1,2) no longer legal for the predator side
        let s1 = s.apply_batch(&PredationBatch::new(1, [2])).unwrap();
        assert_eq!(s1.populations(), &[0, 1, 3]);
        assert!(s1.legal_predations().iter().all(|&(u, _)| u.index() != 1));

        // prey exhausted
        let web = Web::from_arcs(3, [(1, 2), (3, 1)]).unwrap();
        let s = web
            .start()
            .apply_batch(&PredationBatch::new(1, [2]))
            .unwrap();
        assert_eq!(s.population(VertexId::new(1)), 0);
        assert!(s.legal_predations().is_empty());
        assert!(s.is_terminal());
    }

    #[test]
    fn batch_arithmetic() {
        let web = Web::from_arcs(3, [(2, 1), (2, 3)]).unwrap();
        let s = web
            .start()
            .apply_batch(&PredationBatch::new(2, [1, 3]))
            .unwrap();
        assert_eq!(s.populations(), &[0, 0, 2]);
        assert_eq!(s.residual(), 2);
    }

    #[test]
    fn illegal_batches_name_the_problem() {
        let web = path_web();
        let s = web.start();
        assert_eq!(
            s.apply_batch(&PredationBatch::new(1, [])),
            Err(IllegalBatch::EmptyPrey(VertexId::new(1)))
        );
        assert_eq!(
            s.apply_batch(&PredationBatch::new(2, [1])),
            Err(IllegalBatch::ArcNotRemaining(
                VertexId::new(2),
                VertexId::new(1)
            ))
        );
        assert_eq!(
            s.apply_batch(&PredationBatch::new(1, [4])),
            Err(IllegalBatch::UnknownVertex(VertexId::new(4)))
        );
        let web = Web::from_arcs(3, [(1, 2), (1, 3)]).unwrap();
        assert_eq!(
            web.start().apply_batch(&PredationBatch::new(1, [2, 3])),
            Err(IllegalBatch::PredatorExhausted {
                predator: VertexId::new(1),
                population: 1,
                needed: 2
            })
        );
        assert!(matches!(
            web.start().apply_batch(&PredationBatch::new(1, [2, 2])),
            Err(IllegalBatch::RepeatedPrey(..))
        ));

        // v1 drained by v2, then v3 tries to take it
        let web = Web::from_arcs(3, [(2, 1), (3, 1)]).unwrap();
        let s = web
            .start()
            .apply_batch(&PredationBatch::new(2, [1]))
            .unwrap();
        assert_eq!(
            s.apply_batch(&PredationBatch::new(3, [1])),
            Err(IllegalBatch::PreyExhausted(VertexId::new(1)))
        );
    }

    #[test]
    fn run_strategy_examples() {
        let web = path_web();
        let s = Strategy::new(vec![
            PredationBatch::new(2, [3]),
            PredationBatch::new(1, [2]),
        ]);
        let r = run_strategy(&web, &s, true).unwrap();
        assert_eq!(r.residual, 2);
        assert_eq!(r.predation_count, 2);

        let r = run_strategy(&web, &Strategy::default(), false).unwrap();
        assert_eq!(r.residual, 6);
        assert_eq!(r.predation_count, 0);
        assert!(matches!(
            run_strategy(&web, &Strategy::default(), true),
            Err(Error::NotTerminal { legal: 2 })
        ));

        let web = Web::from_arcs(3, [(1, 2), (1, 3)]).unwrap();
        let r = run_strategy(
            &web,
            &Strategy::new(vec![PredationBatch::new(1, [2])]),
            true,
        )
        .unwrap();
        assert_eq!(r.residual, 4);
    }

    #[test]
    fn run_strategy_reports_failing_step() {
        let web = path_web();
        let s = Strategy::new(vec![
            PredationBatch::new(1, [2]),
            PredationBatch::new(1, [2]),
        ]);
        assert!(matches!(
            run_strategy(&web, &s, false),
            Err(Error::IllegalStep { step: 1, .. })
        ));
    }

    #[test]
    fn random_strategies_end_terminal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let web = Web::from_arcs(4, [(1, 2), (3, 2), (3, 4), (4, 1), (1, 3)]).unwrap();
        for _ in 0..50 {
            let s = random_maximal_strategy(&web, &mut rng);
            let r = run_strategy(&web, &s, true).unwrap();
            assert_eq!(r.residual + 2 * r.predation_count, web.total_population());
        }
    }

    #[test]
    fn strategy_json_shape() {
        let s = Strategy::new(vec![PredationBatch::new(2, [1, 3])]);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"[{"predator":2,"prey":[1,3]}]"#);
        let back: Strategy = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn from_arcs_groups_runs_of_one_predator() {
        let v = VertexId::new;
        let s = Strategy::from_arcs(&[(v(1), v(2)), (v(1), v(3)), (v(2), v(3))]);
        assert_eq!(
            s,
            Strategy::new(vec![
                PredationBatch::new(1, [2, 3]),
                PredationBatch::new(2, [3])
            ])
        );
        assert_eq!(s.to_singles().len(), 3);
    }
}
