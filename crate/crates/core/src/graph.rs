//! Simple undirected graphs with bitset adjacency.

use std::collections::VecDeque;
use std::fmt::Write;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::perm::Perm;

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<FixedBitSet>,
    nbrs: Vec<Vec<u32>>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.order())
            .field("edges", &self.edge_count())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![FixedBitSet::with_capacity(n); n],
            nbrs: vec![Vec::new(); n],
        }
    }

    /// Loops are rejected; repeated edges are merged.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![FixedBitSet::with_capacity(n); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParams {
                    family: "graph".into(),
                    reason: format!("edge ({u},{v}) out of range"),
                });
            }
            if u == v {
                return Err(Error::InvalidParams {
                    family: "graph".into(),
                    reason: format!("loop at {u}"),
                });
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(Self::from_rows(adj))
    }

    /// Rows must be symmetric and loop-free.
    pub(crate) fn from_rows(adj: Vec<FixedBitSet>) -> Self {
        let nbrs = adj
            .iter()
            .map(|r| r.ones().map(|x| x as u32).collect())
            .collect();
        let g = Graph { adj, nbrs };
        debug_assert!(g.is_symmetric());
        g
    }

    fn is_symmetric(&self) -> bool {
        (0..self.order()).all(|u| {
            !self.adj[u].contains(u) && self.adj[u].ones().all(|v| self.adj[v].contains(u))
        })
    }

    pub fn cycle(n: usize) -> Self {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.nbrs.iter().map(|v| v.len()).sum::<usize>() / 2
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &[u32] {
        &self.nbrs[u]
    }

    pub fn row(&self, u: usize) -> &FixedBitSet {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.nbrs[u].len()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.order() {
            for &v in &self.nbrs[u] {
                if (u as u32) < v {
                    out.push((u, v as usize));
                }
            }
        }
        out
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.nbrs[u] {
                    let v = v as usize;
                    if comp[v] == usize::MAX {
                        comp[v] = id;
                        members.push(v);
                        queue.push_back(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.order() <= 1 || self.components().len() == 1
    }

    /// Subgraph induced on `vertices`, renumbered in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut pos = vec![usize::MAX; self.order()];
        for (i, &v) in vertices.iter().enumerate() {
            pos[v] = i;
        }
        let m = vertices.len();
        let mut adj = vec![FixedBitSet::with_capacity(m); m];
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.nbrs[v] {
                let j = pos[w as usize];
                if j != usize::MAX {
                    adj[i].insert(j);
                }
            }
        }
        Graph::from_rows(adj)
    }

    pub fn is_automorphism(&self, p: &Perm) -> bool {
        p.degree() == self.order()
            && (0..self.order()).all(|u| {
                let pu = p.apply(u);
                self.degree(pu) == self.degree(u)
                    && self.nbrs[u]
                        .iter()
                        .all(|&v| self.has_edge(pu, p.apply(v as usize)))
            })
    }

    /// Whether `p` maps `self` onto `other` edge for edge.
    pub fn is_isomorphism_to(&self, other: &Graph, p: &Perm) -> bool {
        p.degree() == self.order()
            && self.order() == other.order()
            && self.edge_count() == other.edge_count()
            && self
                .edges()
                .iter()
                .all(|&(u, v)| other.has_edge(p.apply(u), p.apply(v)))
    }

    pub fn complement(&self) -> Graph {
        let n = self.order();
        let adj = (0..n)
            .map(|u| {
                let mut row = self.adj[u].clone();
                row.toggle_range(..);
                row.set(u, false);
                row
            })
            .collect();
        Graph::from_rows(adj)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for u in 0..self.order() {
            let _ = writeln!(s, "  {u};");
        }
        for (u, v) in self.edges() {
            let _ = writeln!(s, "  {u} -- {v};");
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_basics() {
        let c = Graph::cycle(8);
        assert_eq!(c.edge_count(), 8);
        assert!(c.is_connected());
        assert!((0..8).all(|u| c.degree(u) == 2));
        let rot = Perm::from_images((0..8).map(|i| (i + 1) % 8).collect()).unwrap();
        assert!(c.is_automorphism(&rot));
        let swap = Perm::from_cycles(8, &[&[0, 1]]).unwrap();
        assert!(!c.is_automorphism(&swap));
    }

    #[test]
    fn components_and_induced() {
        let g = Graph::from_edges(5, [(0, 1), (3, 4)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 1], vec![2], vec![3, 4]]);
        assert!(!g.is_connected());
        let h = g.induced(&[3, 4]);
        assert_eq!(h.edges(), vec![(0, 1)]);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::from_edges(3, [(0, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
    }

    #[test]
    fn complement_of_path() {
        let p = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(p.complement().edges(), vec![(0, 2)]);
    }
}
