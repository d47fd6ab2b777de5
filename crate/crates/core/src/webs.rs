//! Predator-prey webs of a base graph: every indexing crossed with every
//! orientation, optionally identified up to automorphisms of the base.
//!
//! Two (indexing, orientation) pairs are related by an automorphism of the
//! base graph exactly when they produce the same digraph on the labels, so
//! deduplication keys on the labelled arc set.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::digraph::{
    indexings_with_cap, orient_edges, Digraph, DigraphFile, Indexing, Indexings, UGraph, VertexId,
};
use crate::engine::{solve_exact, SolveResult, Web, DEFAULT_ARC_CAP};
use crate::error::{check_cap, Error, GraphError, Result};

pub const MAX_WEB_ORDER: usize = 8;
pub const MAX_WEB_EDGES: usize = 12;

const SOLVE_CHUNK: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumeratedWeb {
    pub indexing: Indexing,
    /// Orientation of the base graph, on structural positions.
    pub orientation: Digraph,
    /// The same orientation with positions renamed to labels.
    pub web: Web,
}

#[derive(Serialize)]
struct EnumeratedWebFile {
    indexing: Vec<usize>,
    web: DigraphFile,
}

impl Serialize for EnumeratedWeb {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EnumeratedWebFile {
            indexing: self.indexing.labels().iter().map(|v| v.index()).collect(),
            web: (&self.web).into(),
        }
        .serialize(s)
    }
}

fn check_base(g: &UGraph) -> Result<()> {
    check_cap("vertex count", g.n(), MAX_WEB_ORDER)?;
    check_cap("edge count", g.edge_count(), MAX_WEB_EDGES)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/// Webs in stream order: indexings lexicographically, and for each indexing
/// the orientations in binary counting order. With `dedup`, only the first
/// web of each automorphism class is emitted, which is the class member with
/// the lexicographically least label sequence.
pub fn enumerate_webs(g: &UGraph, dedup: bool) -> Result<WebStream> {
    check_base(g)?;
    let mut indexings = indexings_with_cap(g.n(), MAX_WEB_ORDER)?;
    let current = indexings.next();
    Ok(WebStream {
        base: g.clone(),
        indexings,
        current,
        mask: 0,
        masks: 1u64 << g.edge_count(),
        seen: dedup.then(HashSet::new),
    })
}

pub struct WebStream {
    base: UGraph,
    indexings: Indexings,
    current: Option<Indexing>,
    mask: u64,
    masks: u64,
    seen: Option<HashSet<u64>>,
}

/// Labelled arc set as a bitmask over ordered label pairs (`n <= 8`).
fn arc_key(d: &Digraph) -> u64 {
    d.arcs().iter().fold(0u64, |k, &(u, v)| {
        k | 1u64 << ((u.index() - 1) * 8 + (v.index() - 1))
    })
}

impl Iterator for WebStream {
    type Item = EnumeratedWeb;

    fn next(&mut self) -> Option<EnumeratedWeb> {
        loop {
            let indexing = self.current.as_ref()?;
            if self.mask >= self.masks {
                self.current = self.indexings.next();
                self.mask = 0;
                continue;
            }
            let orientation = orient_edges(self.base.n(), self.base.edges(), self.mask);
            self.mask += 1;
            let labelled = indexing.relabel(&orientation);
            if let Some(seen) = &mut self.seen {
                if !seen.insert(arc_key(&labelled)) {
                    continue;
                }
            }
            return Some(EnumeratedWeb {
                indexing: indexing.clone(),
                orientation,
                web: Web::new(labelled),
            });
        }
    }
}

/// `n! * 2^eps / 2`.
pub fn web_count_formula(n: usize, eps: usize) -> Result<u64> {
    let fact = (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k));
    let pow = u32::try_from(eps).ok().and_then(|e| 1u64.checked_shl(e));
    let product = fact
        .zip(pow)
        .and_then(|(f, p)| f.checked_mul(p))
        .ok_or(Error::Overflow("n! * 2^eps"))?;
    if product % 2 != 0 {
        return Err(Error::Domain(format!(
            "n! * 2^eps / 2 is not an integer for n = {n}, eps = {eps}"
        )));
    }
    Ok(product / 2)
}

/// Automorphisms of `g`, found by testing every permutation. Each is given as
/// an indexing mapping position `p` to its image.
pub fn automorphisms(g: &UGraph) -> Result<Vec<Indexing>> {
    let perms = indexings_with_cap(g.n(), MAX_WEB_ORDER)?;
    Ok(perms.filter(|p| p.relabel_ugraph(g) == *g).collect())
}

/// `n! * 2^eps / |Aut(g)|`, the number of distinct labelled webs.
pub fn class_count(g: &UGraph) -> Result<u64> {
    let aut = automorphisms(g)?.len() as u64;
    let all = web_count_formula(g.n(), g.edge_count())?
        .checked_mul(2)
        .ok_or(Error::Overflow("n! * 2^eps"))?;
    Ok(all / aut)
}

/// Solves every web in stream order. Solving runs in parallel a chunk at a
/// time; `visit` sees the results in stream order.
pub fn for_each_solved(
    g: &UGraph,
    dedup: bool,
    mut visit: impl FnMut(EnumeratedWeb, SolveResult),
) -> Result<()> {
    let mut stream = enumerate_webs(g, dedup)?;
    loop {
        let chunk: Vec<EnumeratedWeb> = stream.by_ref().take(SOLVE_CHUNK).collect();
        if chunk.is_empty() {
            return Ok(());
        }
        let solved: Vec<SolveResult> = chunk
            .par_iter()
            .map(|w| solve_exact(&w.web, DEFAULT_ARC_CAP))
            .collect::<Result<_>>()?;
        for (w, s) in chunk.into_iter().zip(solved) {
            visit(w, s);
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphGrog {
    pub grog: usize,
    /// First optimal web in stream order.
    pub witness: EnumeratedWeb,
    pub solve: SolveResult,
    /// Webs examined (deduplicated).
    pub webs: usize,
}

/// Minimum grog number over all indexings and orientations of `g`.
pub fn grog_number(g: &UGraph) -> Result<GraphGrog> {
    let mut best: Option<(EnumeratedWeb, SolveResult)> = None;
    let mut webs = 0;
    for_each_solved(g, true, |w, s| {
        webs += 1;
        if best.as_ref().is_none_or(|(_, b)| s.grog < b.grog) {
            best = Some((w, s));
        }
    })?;
    let (witness, solve) = best.ok_or_else(|| Error::Invariant("no webs".into()))?;
    Ok(GraphGrog {
        grog: solve.grog,
        witness,
        solve,
        webs,
    })
}

/// Histogram of exact grog numbers over the deduplicated webs of `g`.
pub fn residual_distribution(g: &UGraph) -> Result<BTreeMap<usize, u64>> {
    let mut hist = BTreeMap::new();
    for_each_solved(g, true, |_, s| *hist.entry(s.grog).or_insert(0) += 1)?;
    Ok(hist)
}

pub fn path_graph(n: usize) -> Result<UGraph> {
    if n < 2 {
        return Err(GraphError::TooFewVertices { n, min: 2 }.into());
    }
    Ok(UGraph::new(n, (1..n).map(|i| (i, i + 1)))?)
}

pub fn cycle_graph(n: usize) -> Result<UGraph> {
    if n < 3 {
        return Err(GraphError::TooFewVertices { n, min: 3 }.into());
    }
    Ok(UGraph::new(n, (1..n).map(|i| (i, i + 1)).chain([(1, n)]))?)
}

/// `K_{1,n-1}` with centre `1`.
pub fn star_graph(n: usize) -> Result<UGraph> {
    if n < 2 {
        return Err(GraphError::TooFewVertices { n, min: 2 }.into());
    }
    Ok(UGraph::new(n, (2..=n).map(|i| (1, i)))?)
}

pub fn complete_graph(n: usize) -> Result<UGraph> {
    if n < 1 {
        return Err(GraphError::TooFewVertices { n, min: 1 }.into());
    }
    Ok(UGraph::new(
        n,
        (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))),
    )?)
}

/// A uniformly random spanning tree-ish connected graph on `n` vertices with
/// between `n - 1` and `max_edges` edges.
pub fn random_connected_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, max_edges: usize) -> UGraph {
    assert!(n >= 1);
    let mut edges: Vec<(usize, usize)> = (2..=n).map(|v| (rng.gen_range(1..v), v)).collect();
    let mut rest: Vec<(usize, usize)> = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .filter(|&(i, j)| !edges.contains(&(i, j)))
        .collect();
    rest.shuffle(rng);
    let lo = n - 1;
    let hi = max_edges.max(lo).min(lo + rest.len());
    let m = rng.gen_range(lo..=hi);
    edges.extend(rest.into_iter().take(m - lo));
    UGraph::new(n, edges).expect("distinct pairs")
}

/// A random orientation of a random connected graph; the graph's vertex ids
/// are the labels.
pub fn random_web<R: Rng + ?Sized>(rng: &mut R, n: usize, max_edges: usize) -> Web {
    let g = random_connected_graph(rng, n, max_edges);
    let mask: u64 = rng.gen();
    Web::new(orient_edges(n, g.edges(), mask))
}

/// Base-graph positions in a labelled web, inverted from an indexing.
pub fn position_of(indexing: &Indexing, label: VertexId) -> VertexId {
    let p = indexing
        .labels()
        .iter()
        .position(|&l| l == label)
        .expect("indexing is a bijection");
    VertexId::new(p + 1)
}
