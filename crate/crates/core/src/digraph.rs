//! Labelled simple graphs on vertices `1..=n`.
//!
//! [`Digraph`] rejects self-loops, repeated arcs and anti-parallel pairs, so
//! every value is an orientation of some simple [`UGraph`]. Arcs and edges are
//! kept sorted, which fixes the order of every enumeration built on top.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_cap, GraphError, Result};

/// Orientation streams refuse base graphs with more edges than this.
pub const DEFAULT_ORIENTATION_EDGE_CAP: usize = 20;
/// Indexing streams refuse orders larger than this.
pub const DEFAULT_INDEXING_CAP: usize = 8;

/// A 1-based vertex label `v_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(usize);

impl VertexId {
    pub const fn new(index: usize) -> Self {
        VertexId(index)
    }

    pub const fn index(self) -> usize {
        self.0
    }

    /// Zero-based slot for per-vertex tables.
    pub(crate) const fn slot(self) -> usize {
        self.0 - 1
    }
}

impl From<usize> for VertexId {
    fn from(index: usize) -> Self {
        VertexId(index)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

pub type ArcPair = (VertexId, VertexId);

fn check_vertex(v: usize, n: usize) -> Result<(), GraphError> {
    if v == 0 || v > n {
        Err(GraphError::VertexOutOfRange { vertex: v, n })
    } else {
        Ok(())
    }
}

/// A simple directed graph with no 2-cycles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DigraphFile", into = "DigraphFile")]
pub struct Digraph {
    n: usize,
    arcs: Vec<ArcPair>,
}

impl Digraph {
    pub fn new<I>(n: usize, arcs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut out: Vec<ArcPair> = Vec::new();
        for (u, v) in arcs {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            out.push((VertexId(u), VertexId(v)));
        }
        out.sort_unstable();
        for w in out.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateArc(w[0].0 .0, w[0].1 .0));
            }
        }
        for &(u, v) in &out {
            if u < v && out.binary_search(&(v, u)).is_ok() {
                return Err(GraphError::AntiParallel(u.0, v.0));
            }
        }
        Ok(Digraph { n, arcs: out })
    }

    pub fn empty(n: usize) -> Self {
        Digraph {
            n,
            arcs: Vec::new(),
        }
    }

    /// Builds from arcs already known to be valid and sorted.
    pub(crate) fn from_sorted_unchecked(n: usize, arcs: Vec<ArcPair>) -> Self {
        debug_assert!(arcs.windows(2).all(|w| w[0] < w[1]));
        Digraph { n, arcs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (1..=self.n).map(VertexId)
    }

    /// Arcs sorted by `(tail, head)`.
    pub fn arcs(&self) -> &[ArcPair] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arc_pairs(&self) -> Vec<(usize, usize)> {
        self.arcs.iter().map(|&(u, v)| (u.0, v.0)).collect()
    }

    /// Position of `(tail, head)` in [`Digraph::arcs`].
    pub fn arc_index(&self, tail: VertexId, head: VertexId) -> Option<usize> {
        self.arcs.binary_search(&(tail, head)).ok()
    }

    pub fn contains_arc(&self, tail: VertexId, head: VertexId) -> bool {
        self.arc_index(tail, head).is_some()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.0 >= 1 && v.0 <= self.n
    }

    pub fn out_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        let start = self.arcs.partition_point(|&(t, _)| t < v);
        self.arcs[start..]
            .iter()
            .take_while(move |&&(t, _)| t == v)
            .map(|&(_, h)| h)
    }

    pub fn in_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.arcs
            .iter()
            .filter(move |&&(_, h)| h == v)
            .map(|&(t, _)| t)
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_neighbors(v).count()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_neighbors(v).count()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.arcs.iter().filter(|&&(t, h)| t == v || h == v).count()
    }

    /// Forgets arc directions.
    pub fn underlying(&self) -> UGraph {
        let mut edges: Vec<ArcPair> = self
            .arcs
            .iter()
            .map(|&(u, v)| if u < v { (u, v) } else { (v, u) })
            .collect();
        edges.sort_unstable();
        UGraph { n: self.n, edges }
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph {\n");
        for v in self.vertices() {
            s.push_str(&format!("  {};\n", v.0));
        }
        for &(u, v) in &self.arcs {
            s.push_str(&format!("  {} -> {};\n", u.0, v.0));
        }
        s.push_str("}\n");
        s
    }
}

/// On-disk shape of a digraph: `{"n": .., "arcs": [[tail, head], ..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DigraphFile {
    pub n: usize,
    pub arcs: Vec<[usize; 2]>,
}

impl TryFrom<DigraphFile> for Digraph {
    type Error = GraphError;

    fn try_from(f: DigraphFile) -> Result<Self, GraphError> {
        Digraph::new(f.n, f.arcs.into_iter().map(|[u, v]| (u, v)))
    }
}

impl From<Digraph> for DigraphFile {
    fn from(d: Digraph) -> Self {
        DigraphFile {
            n: d.n,
            arcs: d.arcs.iter().map(|&(u, v)| [u.0, v.0]).collect(),
        }
    }
}

/// A simple undirected graph. Edges are stored as `(low, high)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "UGraphFile", into = "UGraphFile")]
pub struct UGraph {
    n: usize,
    edges: Vec<ArcPair>,
}

impl UGraph {
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut out = Vec::new();
        for (u, v) in edges {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            out.push((VertexId(a), VertexId(b)));
        }
        out.sort_unstable();
        for w in out.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(w[0].0 .0, w[0].1 .0));
            }
        }
        Ok(UGraph { n, edges: out })
    }

    pub fn empty(n: usize) -> Self {
        UGraph {
            n,
            edges: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (1..=self.n).map(VertexId)
    }

    pub fn edges(&self) -> &[ArcPair] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|&(u, v)| (u.0, v.0)).collect()
    }

    pub fn contains_edge(&self, u: VertexId, v: VertexId) -> bool {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&key).is_ok()
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).count()
    }

    /// Vertices with no incident edge, ascending.
    pub fn isolated_vertices(&self) -> Vec<VertexId> {
        let mut touched = vec![false; self.n];
        for &(u, v) in &self.edges {
            touched[u.slot()] = true;
            touched[v.slot()] = true;
        }
        self.vertices().filter(|v| !touched[v.slot()]).collect()
    }

    /// Subgraph induced by `keep`, on the same labelled vertex set.
    pub fn induced(&self, keep: impl Fn(VertexId) -> bool) -> UGraph {
        UGraph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .copied()
                .filter(|&(u, v)| keep(u) && keep(v))
                .collect(),
        }
    }

    pub(crate) fn remove_edge(&mut self, u: VertexId, v: VertexId) -> bool {
        let key = if u < v { (u, v) } else { (v, u) };
        match self.edges.binary_search(&key) {
            Ok(i) => {
                self.edges.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    pub fn is_connected(&self) -> bool {
        is_connected(self)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph {\n");
        for v in self.vertices() {
            s.push_str(&format!("  {};\n", v.0));
        }
        for &(u, v) in &self.edges {
            s.push_str(&format!("  {} -- {};\n", u.0, v.0));
        }
        s.push_str("}\n");
        s
    }
}

/// On-disk shape of an undirected graph: `{"n": .., "edges": [[u, v], ..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UGraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl TryFrom<UGraphFile> for UGraph {
    type Error = GraphError;

    fn try_from(f: UGraphFile) -> Result<Self, GraphError> {
        UGraph::new(f.n, f.edges.into_iter().map(|[u, v]| (u, v)))
    }
}

impl From<UGraph> for UGraphFile {
    fn from(g: UGraph) -> Self {
        UGraphFile {
            n: g.n,
            edges: g.edges.iter().map(|&(u, v)| [u.0, v.0]).collect(),
        }
    }
}

pub fn is_connected(g: &UGraph) -> bool {
    if g.n == 0 {
        return false;
    }
    let mut adj = vec![Vec::new(); g.n];
    for &(u, v) in &g.edges {
        adj[u.slot()].push(v.slot());
        adj[v.slot()].push(u.slot());
    }
    let mut seen = vec![false; g.n];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                reached += 1;
                queue.push_back(y);
            }
        }
    }
    reached == g.n
}

/// Every orientation of `g`, `2^ε` of them.
///
/// Orientation `k` directs the `i`-th sorted edge `{u, v}` (`u < v`) as
/// `u -> v` when bit `i` of `k` is clear and `v -> u` when it is set, and `k`
/// counts up from zero.
pub fn orientations(g: &UGraph) -> Result<Orientations> {
    orientations_with_cap(g, DEFAULT_ORIENTATION_EDGE_CAP)
}

pub fn orientations_with_cap(g: &UGraph, cap: usize) -> Result<Orientations> {
    check_cap("edge count", g.edge_count(), cap.min(63))?;
    Ok(Orientations {
        n: g.n,
        edges: g.edges.clone(),
        next: 0,
        total: 1u64 << g.edge_count(),
    })
}

pub struct Orientations {
    n: usize,
    edges: Vec<ArcPair>,
    next: u64,
    total: u64,
}

impl Orientations {
    /// The orientation with direction bits `mask`.
    pub fn orient(&self, mask: u64) -> Digraph {
        orient_edges(self.n, &self.edges, mask)
    }
}

pub(crate) fn orient_edges(n: usize, edges: &[ArcPair], mask: u64) -> Digraph {
    let mut arcs: Vec<ArcPair> = edges
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| if mask >> i & 1 == 0 { (u, v) } else { (v, u) })
        .collect();
    arcs.sort_unstable();
    Digraph::from_sorted_unchecked(n, arcs)
}

impl Iterator for Orientations {
    type Item = Digraph;

    fn next(&mut self) -> Option<Digraph> {
        if self.next >= self.total {
            return None;
        }
        let d = self.orient(self.next);
        self.next += 1;
        Some(d)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for Orientations {}

/// An assignment of labels `1..=n` to the structural positions `1..=n` of a
/// base graph: position `p` receives label `labels[p - 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Indexing(Vec<VertexId>);

impl Indexing {
    pub fn identity(n: usize) -> Self {
        Indexing((1..=n).map(VertexId).collect())
    }

    pub fn from_labels(labels: Vec<usize>) -> Result<Self, GraphError> {
        let n = labels.len();
        let mut seen = vec![false; n];
        for &l in &labels {
            check_vertex(l, n)?;
            if seen[l - 1] {
                return Err(GraphError::RepeatedLabel(l));
            }
            seen[l - 1] = true;
        }
        Ok(Indexing(labels.into_iter().map(VertexId).collect()))
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn labels(&self) -> &[VertexId] {
        &self.0
    }

    pub fn label_of(&self, position: VertexId) -> VertexId {
        self.0[position.slot()]
    }

    /// Renames every vertex of `d` by its label.
    pub fn relabel(&self, d: &Digraph) -> Digraph {
        let mut arcs: Vec<ArcPair> = d
            .arcs
            .iter()
            .map(|&(u, v)| (self.label_of(u), self.label_of(v)))
            .collect();
        arcs.sort_unstable();
        Digraph::from_sorted_unchecked(d.n, arcs)
    }

    pub fn relabel_ugraph(&self, g: &UGraph) -> UGraph {
        let mut edges: Vec<ArcPair> = g
            .edges
            .iter()
            .map(|&(u, v)| {
                let (a, b) = (self.label_of(u), self.label_of(v));
                if a < b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        edges.sort_unstable();
        UGraph { n: g.n, edges }
    }
}

/// All `n!` indexings in lexicographic order of their label sequence.
pub fn indexings(n: usize) -> Result<Indexings> {
    indexings_with_cap(n, DEFAULT_INDEXING_CAP)
}

pub fn indexings_with_cap(n: usize, cap: usize) -> Result<Indexings> {
    if n == 0 {
        return Err(GraphError::TooFewVertices { n, min: 1 }.into());
    }
    check_cap("vertex count", n, cap.min(20))?;
    Ok(Indexings {
        current: Some((1..=n).collect()),
    })
}

pub struct Indexings {
    current: Option<Vec<usize>>,
}

impl Iterator for Indexings {
    type Item = Indexing;

    fn next(&mut self) -> Option<Indexing> {
        let cur = self.current.take()?;
        let out = Indexing(cur.iter().copied().map(VertexId).collect());
        let mut nxt = cur;
        if next_permutation(&mut nxt) {
            self.current = Some(nxt);
        }
        Some(out)
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let Some(i) = (0..p.len() - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..p.len()).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> UGraph {
        UGraph::new(3, [(1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn make_digraph_accepts_valid_and_rejects_bad_arcs() {
        let d = Digraph::new(3, [(2, 3), (1, 2)]).unwrap();
        assert_eq!(d.arc_pairs(), vec![(1, 2), (2, 3)]);
        assert_eq!(Digraph::new(3, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            Digraph::new(3, [(1, 2), (2, 1)]),
            Err(GraphError::AntiParallel(1, 2))
        );
        assert_eq!(
            Digraph::new(3, [(1, 2), (1, 2)]),
            Err(GraphError::DuplicateArc(1, 2))
        );
        assert_eq!(
            Digraph::new(3, [(1, 4)]),
            Err(GraphError::VertexOutOfRange { vertex: 4, n: 3 })
        );
        assert!(matches!(
            Digraph::new(3, [(0, 1)]),
            Err(GraphError::VertexOutOfRange { vertex: 0, .. })
        ));
    }

    #[test]
    fn underlying_keeps_one_edge_per_arc() {
        let d = Digraph::new(3, [(1, 2), (3, 2)]).unwrap();
        assert_eq!(d.underlying().edge_pairs(), vec![(1, 2), (2, 3)]);
        assert_eq!(Digraph::empty(4).underlying().edge_count(), 0);
    }

    #[test]
    fn ugraph_rejects_duplicates_in_either_direction() {
        assert_eq!(
            UGraph::new(3, [(1, 2), (2, 1)]),
            Err(GraphError::DuplicateEdge(1, 2))
        );
    }

    #[test]
    fn orientation_counts() {
        assert_eq!(orientations(&path3()).unwrap().count(), 4);
        assert_eq!(orientations(&UGraph::empty(1)).unwrap().count(), 1);
        let tri = UGraph::new(3, [(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(orientations(&tri).unwrap().count(), 8);
    }

    #[test]
    fn orientation_order_is_binary_counting() {
        let all: Vec<_> = orientations(&path3())
            .unwrap()
            .map(|d| d.arc_pairs())
            .collect();
        assert_eq!(
            all,
            vec![
                vec![(1, 2), (2, 3)],
                vec![(2, 1), (2, 3)],
                vec![(1, 2), (3, 2)],
                vec![(2, 1), (3, 2)],
            ]
        );
    }

    #[test]
    fn orientation_cap_is_an_error() {
        let edges: Vec<_> = (1..=21).map(|i| (i, i + 1)).collect();
        let g = UGraph::new(22, edges).unwrap();
        assert!(matches!(
            orientations(&g),
            Err(crate::Error::CapExceeded {
                value: 21,
                cap: 20,
                ..
            })
        ));
    }

    #[test]
    fn indexing_counts_and_order() {
        assert_eq!(indexings(1).unwrap().count(), 1);
        assert_eq!(indexings(4).unwrap().count(), 24);
        let three: Vec<Vec<usize>> = indexings(3)
            .unwrap()
            .map(|ix| ix.labels().iter().map(|v| v.index()).collect())
            .collect();
        assert_eq!(
            three,
            vec![
                vec![1, 2, 3],
                vec![1, 3, 2],
                vec![2, 1, 3],
                vec![2, 3, 1],
                vec![3, 1, 2],
                vec![3, 2, 1]
            ]
        );
        assert!(indexings(9).is_err());
        assert!(indexings(0).is_err());
    }

    #[test]
    fn connectivity() {
        assert!(path3().is_connected());
        assert!(!UGraph::empty(2).is_connected());
        assert!(UGraph::new(3, [(1, 2), (2, 3), (1, 3)])
            .unwrap()
            .is_connected());
        assert!(UGraph::empty(1).is_connected());
    }

    #[test]
    fn relabel_maps_positions_to_labels() {
        let ix = Indexing::from_labels(vec![2, 1, 3]).unwrap();
        let d = Digraph::new(3, [(1, 2), (2, 3)]).unwrap();
        assert_eq!(ix.relabel(&d).arc_pairs(), vec![(1, 3), (2, 1)]);
        assert!(Indexing::from_labels(vec![1, 1, 2]).is_err());
    }

    #[test]
    fn json_shapes() {
        let d = Digraph::new(3, [(1, 2), (2, 3)]).unwrap();
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"{"n":3,"arcs":[[1,2],[2,3]]}"#
        );
        let back: Digraph = serde_json::from_str(r#"{"n": 3, "arcs": [[2, 3], [1, 2]]}"#).unwrap();
        assert_eq!(back, d);
        assert!(serde_json::from_str::<Digraph>(r#"{"n":2,"arcs":[[1,2],[2,1]]}"#).is_err());
        let g = path3();
        assert_eq!(
            serde_json::to_string(&g).unwrap(),
            r#"{"n":3,"edges":[[1,2],[2,3]]}"#
        );
    }

    #[test]
    fn dot_output() {
        let d = Digraph::new(2, [(1, 2)]).unwrap();
        assert_eq!(d.to_dot(), "digraph {\n  1;\n  2;\n  1 -> 2;\n}\n");
        assert_eq!(
            d.underlying().to_dot(),
            "graph {\n  1;\n  2;\n  1 -- 2;\n}\n"
        );
    }
}
