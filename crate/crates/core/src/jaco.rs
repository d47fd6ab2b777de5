//! Finite Jaco graphs `J_n(1)`.
//!
//! In the unbounded construction `v_i -> v_j` (`i < j`) exactly when
//! `2i - d^-(v_i) >= j`. Since `d^-(v_i)` only counts arcs from lower
//! vertices, it is final once every `v_k`, `k < i`, has been placed, and the
//! out-neighbourhood of `v_i` is the contiguous run `v_{i+1} ..= v_{2i - d^-(v_i)}`.
//! `J_n(1)` keeps the arcs whose head is at most `n`.

use serde::Serialize;

use crate::digraph::{ArcPair, Digraph, DigraphFile, VertexId};
use crate::error::{check_cap, Error, GraphError, Result};

pub const DEFAULT_JACO_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacoGraph {
    digraph: Digraph,
    in_deg: Vec<usize>,
    out_deg: Vec<usize>,
    /// `d^-` of `v_{n+1}` in the unbounded construction.
    next_in_deg: usize,
    jaconian: Option<VertexId>,
}

/// In-degrees `d^-(v_1) ..= d^-(v_m)` of the unbounded construction.
fn unbounded_in_degrees(m: usize) -> Vec<usize> {
    // diff[j] accumulates +1 at the start and -1 past the end of every
    // out-run that covers j.
    let mut diff = vec![0isize; m + 2];
    let mut in_deg = vec![0usize; m + 1];
    let mut running = 0isize;
    for i in 1..=m {
        running += diff[i];
        in_deg[i] = running as usize;
        let reach = (2 * i).saturating_sub(in_deg[i]).min(m);
        if reach > i {
            diff[i + 1] += 1;
            diff[reach + 1] -= 1;
        }
    }
    in_deg.remove(0);
    in_deg
}

pub fn build_jaco(n: usize) -> Result<JacoGraph> {
    build_jaco_with_cap(n, DEFAULT_JACO_CAP)
}

pub fn build_jaco_with_cap(n: usize, cap: usize) -> Result<JacoGraph> {
    if n == 0 {
        return Err(GraphError::TooFewVertices { n, min: 1 }.into());
    }
    check_cap("Jaco order", n, cap)?;
    let unbounded = unbounded_in_degrees(n + 1);
    let mut arcs: Vec<ArcPair> = Vec::new();
    let mut out_deg = vec![0usize; n];
    for i in 1..=n {
        let reach = (2 * i).saturating_sub(unbounded[i - 1]).min(n);
        for j in i + 1..=reach {
            arcs.push((VertexId::new(i), VertexId::new(j)));
        }
        out_deg[i - 1] = reach.saturating_sub(i);
    }
    let in_deg = unbounded[..n].to_vec();
    let mut g = JacoGraph {
        digraph: Digraph::from_sorted_unchecked(n, arcs),
        in_deg,
        out_deg,
        next_in_deg: unbounded[n],
        jaconian: None,
    };
    if n >= 2 {
        g.jaconian = Some(g.locate_jaconian()?);
    }
    Ok(g)
}

impl JacoGraph {
    pub fn n(&self) -> usize {
        self.digraph.n()
    }

    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    pub fn into_digraph(self) -> Digraph {
        self.digraph
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.in_deg[v.index() - 1]
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_deg[v.index() - 1]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.in_degree(v) + self.out_degree(v)
    }

    /// `None` only for `n = 1`.
    pub fn jaconian(&self) -> Option<VertexId> {
        self.jaconian
    }

    /// Smallest-index vertex of maximum degree.
    pub fn max_degree_vertex(&self) -> VertexId {
        let mut best = VertexId::new(1);
        for v in self.digraph.vertices() {
            if self.degree(v) > self.degree(best) {
                best = v;
            }
        }
        best
    }

    fn locate_jaconian(&self) -> Result<VertexId> {
        let n = self.n();
        let i = n - self.next_in_deg;
        let v = VertexId::new(i);
        let reach = i + self.out_degree(v);
        if !(reach == n || reach + 1 == n) {
            return Err(Error::Invariant(format!(
                "J_{n}(1): jaconian v{i} has i + d+ = {reach}, expected {} or {n}",
                n - 1
            )));
        }
        if 2 * i < n {
            return Err(Error::Invariant(format!(
                "J_{n}(1): jaconian v{i} has 2i - n < 0"
            )));
        }
        Ok(v)
    }
}

/// The vertex `v_i` such that `v_{i+1} ..= v_n` are exactly the in-neighbours
/// of `v_{n+1}` in `J_{n+1}(1)`.
pub fn jaconian_vertex(n: usize) -> Result<VertexId> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "jaconian vertex needs n >= 2, got {n}"
        )));
    }
    build_jaco(n)?
        .jaconian
        .ok_or_else(|| Error::Invariant("missing jaconian vertex".into()))
}

#[derive(Serialize)]
struct JacoFile {
    #[serde(flatten)]
    graph: DigraphFile,
    jaconian: Option<usize>,
}

impl Serialize for JacoGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        JacoFile {
            graph: self.digraph.clone().into(),
            jaconian: self.jaconian.map(VertexId::index),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Applies the arc rule literally: for each head `j` in increasing order,
    /// scan every lower `i` against its in-degree so far.
    fn literal_arcs(n: usize) -> Vec<(usize, usize)> {
        let mut in_deg = vec![0usize; n + 1];
        let mut arcs = Vec::new();
        for j in 2..=n {
            for i in 1..j {
                if 2 * i >= j + in_deg[i] {
                    arcs.push((i, j));
                }
            }
            in_deg[j] = arcs.iter().filter(|&&(_, h)| h == j).count();
        }
        arcs.sort();
        arcs
    }

    #[test]
    fn small_jaco_graphs() {
        assert_eq!(build_jaco(1).unwrap().digraph().arc_count(), 0);
        assert_eq!(build_jaco(2).unwrap().digraph().arc_pairs(), vec![(1, 2)]);
        assert_eq!(
            build_jaco(5).unwrap().digraph().arc_pairs(),
            vec![(1, 2), (2, 3), (3, 4), (3, 5), (4, 5)]
        );
        assert_eq!(
            build_jaco(6).unwrap().digraph().arc_pairs(),
            vec![(1, 2), (2, 3), (3, 4), (3, 5), (4, 5), (4, 6), (5, 6)]
        );
    }

    #[test]
    fn matches_literal_rule() {
        for n in 1..=60 {
            assert_eq!(
                build_jaco(n).unwrap().digraph().arc_pairs(),
                literal_arcs(n),
                "n={n}"
            );
        }
    }

    #[test]
    fn jaconian_examples() {
        assert_eq!(jaconian_vertex(2).unwrap().index(), 1);
        assert_eq!(jaconian_vertex(4).unwrap().index(), 2);
        assert_eq!(jaconian_vertex(5).unwrap().index(), 3);
        assert!(jaconian_vertex(1).is_err());
    }

    #[test]
    fn jaconian_agrees_with_in_neighbourhood_of_next_vertex() {
        for n in 2..=80 {
            let next = literal_arcs(n + 1);
            let max_free = (1..=n)
                .filter(|&i| !next.contains(&(i, n + 1)))
                .max()
                .unwrap();
            assert_eq!(jaconian_vertex(n).unwrap().index(), max_free, "n={n}");
        }
    }

    #[test]
    fn degree_bound_and_nesting() {
        let mut prev = build_jaco(1).unwrap();
        for n in 2..=300 {
            let g = build_jaco(n).unwrap();
            for v in g.digraph().vertices() {
                assert!(g.degree(v) <= v.index());
                assert_eq!(g.degree(v), g.digraph().degree(v));
            }
            let restricted: Vec<_> = g
                .digraph()
                .arc_pairs()
                .into_iter()
                .filter(|&(_, h)| h < n)
                .collect();
            assert_eq!(restricted, prev.digraph().arc_pairs());
            // arcs added going n-1 -> n are exactly v_{i+1..n-1} -> v_n
            let i = prev.jaconian().map_or(0, VertexId::index);
            let added: Vec<_> = g
                .digraph()
                .arc_pairs()
                .into_iter()
                .filter(|&(_, h)| h == n)
                .collect();
            if n >= 3 {
                assert_eq!(added, (i + 1..n).map(|t| (t, n)).collect::<Vec<_>>());
            }
            prev = g;
        }
    }

    #[test]
    fn cap_and_domain() {
        assert!(build_jaco(0).is_err());
        assert!(matches!(
            build_jaco_with_cap(11, 10),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn json_includes_jaconian() {
        let s = serde_json::to_string(&build_jaco(5).unwrap()).unwrap();
        assert_eq!(
            s,
            r#"{"n":5,"arcs":[[1,2],[2,3],[3,4],[3,5],[4,5]],"jaconian":3}"#
        );
    }
}
