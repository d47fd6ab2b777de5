//! Competition graphs: two vertices are adjacent when they share a prey.

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::digraph::{ArcPair, Digraph, UGraph, UGraphFile, VertexId};
use crate::error::{Error, Result};
use crate::jaco::build_jaco;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompetitionGraph {
    graph: UGraph,
    isolated: Vec<VertexId>,
}

impl CompetitionGraph {
    fn from_graph(graph: UGraph) -> Self {
        let isolated = graph.isolated_vertices();
        CompetitionGraph { graph, isolated }
    }

    pub fn graph(&self) -> &UGraph {
        &self.graph
    }

    pub fn isolated(&self) -> &[VertexId] {
        &self.isolated
    }

    pub fn isolated_indices(&self) -> Vec<usize> {
        self.isolated.iter().map(|v| v.index()).collect()
    }

    pub fn to_dot(&self) -> String {
        self.graph.to_dot()
    }
}

#[derive(Serialize)]
struct CompetitionFile {
    #[serde(flatten)]
    graph: UGraphFile,
    isolated: Vec<usize>,
}

impl Serialize for CompetitionGraph {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CompetitionFile {
            graph: self.graph.clone().into(),
            isolated: self.isolated_indices(),
        }
        .serialize(s)
    }
}

pub fn competition_graph(d: &Digraph) -> CompetitionGraph {
    let mut preds: Vec<Vec<VertexId>> = vec![Vec::new(); d.n()];
    for &(t, h) in d.arcs() {
        preds[h.index() - 1].push(t);
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for ins in &preds {
        for (k, &a) in ins.iter().enumerate() {
            for &b in &ins[k + 1..] {
                edges.push((a.index(), b.index()));
            }
        }
    }
    let mut norm: Vec<(usize, usize)> = edges
        .into_iter()
        .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
        .collect();
    norm.sort_unstable();
    norm.dedup();
    let graph = UGraph::new(d.n(), norm).expect("pairs of distinct in-neighbours");
    CompetitionGraph::from_graph(graph)
}

/// `C(J_n(1))` assembled from the closed form: the subgraph of the underlying
/// graph induced by `v_3 ..= v_{n-1}`, minus each edge `{v_i, v_{m_i}}` with
/// `m_i = i + d^+(v_i)` for `3 <= i <= n-2`, plus `v_1, v_2, v_n` as isolated
/// vertices. A removal whose `m_i` falls outside the induced set does nothing.
pub fn jaco_competition_closed_form(n: usize) -> Result<CompetitionGraph> {
    if n < 5 {
        return Err(Error::Domain(format!("closed form covers n >= 5, got {n}")));
    }
    let jaco = build_jaco(n)?;
    let mut g = jaco
        .digraph()
        .underlying()
        .induced(|v| (3..n).contains(&v.index()));
    for i in 3..=n - 2 {
        let v = VertexId::new(i);
        let m = i + jaco.out_degree(v);
        if m < n {
            g.remove_edge(v, VertexId::new(m));
        }
    }
    Ok(CompetitionGraph::from_graph(g))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedFormCheck {
    pub n: usize,
    pub equal: bool,
    /// Edges the direct computation has but the closed form lacks.
    pub missing: Vec<[usize; 2]>,
    /// Edges the closed form has but the direct computation lacks.
    pub extra: Vec<[usize; 2]>,
}

fn edge_diff(a: &[ArcPair], b: &[ArcPair]) -> Vec<[usize; 2]> {
    a.iter()
        .filter(|e| b.binary_search(e).is_err())
        .map(|&(u, v)| [u.index(), v.index()])
        .collect()
}

pub fn compare_closed_form(n: usize) -> Result<ClosedFormCheck> {
    let closed = jaco_competition_closed_form(n)?;
    let direct = competition_graph(build_jaco(n)?.digraph());
    let missing = edge_diff(direct.graph.edges(), closed.graph.edges());
    let extra = edge_diff(closed.graph.edges(), direct.graph.edges());
    Ok(ClosedFormCheck {
        n,
        equal: missing.is_empty() && extra.is_empty() && closed.isolated == direct.isolated,
        missing,
        extra,
    })
}

/// Compares the closed form with the direct definition for `5 ..= n_max`.
pub fn check_closed_form_range(n_max: usize) -> Result<Vec<ClosedFormCheck>> {
    if n_max < 5 {
        return Err(Error::Domain(format!(
            "closed-form check needs n_max >= 5, got {n_max}"
        )));
    }
    (5..=n_max)
        .into_par_iter()
        .map(compare_closed_form)
        .collect()
}
