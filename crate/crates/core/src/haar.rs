//! Haar graphs: vertex `x` is `(x, -1)` and vertex `n + x` is `(x, +1)`;
//! `(g, -1) ~ (h, +1)` exactly when `h g^-1` lies in the connection set.

use std::fmt::Write;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde_json::json;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::group::{Elem, FiniteGroup, Subgroup};
use crate::perm::Perm;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ConnectionSet {
    order: usize,
    members: FixedBitSet,
}

impl std::fmt::Debug for ConnectionSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.members.ones()).finish()
    }
}

impl ConnectionSet {
    pub fn new(g: &FiniteGroup, elems: impl IntoIterator<Item = Elem>) -> Result<Self> {
        let mut members = FixedBitSet::with_capacity(g.order());
        for e in elems {
            g.check_elem(e)?;
            members.insert(e);
        }
        Ok(ConnectionSet {
            order: g.order(),
            members,
        })
    }

    pub fn empty(g: &FiniteGroup) -> Self {
        ConnectionSet {
            order: g.order(),
            members: FixedBitSet::with_capacity(g.order()),
        }
    }

    pub fn full(g: &FiniteGroup) -> Self {
        let mut members = FixedBitSet::with_capacity(g.order());
        members.insert_range(..);
        ConnectionSet {
            order: g.order(),
            members,
        }
    }

    /// Bit `i` of `mask` selects element `i`. Requires order at most 64.
    pub fn from_mask(g: &FiniteGroup, mask: u64) -> Self {
        assert!(g.order() <= 64);
        let mut members = FixedBitSet::with_capacity(g.order());
        members.extend((0..g.order()).filter(|&i| mask >> i & 1 == 1));
        ConnectionSet {
            order: g.order(),
            members,
        }
    }

    pub fn to_mask(&self) -> Option<u64> {
        (self.order <= 64).then(|| self.members.ones().fold(0u64, |m, i| m | 1 << i))
    }

    pub fn group_order(&self) -> usize {
        self.order
    }

    pub fn contains(&self, x: Elem) -> bool {
        x < self.order && self.members.contains(x)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn elements(&self) -> Vec<Elem> {
        self.members.ones().collect()
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn insert(&mut self, x: Elem) {
        self.members.insert(x);
    }

    pub fn union(&self, other: &ConnectionSet) -> ConnectionSet {
        let mut members = self.members.clone();
        members.union_with(&other.members);
        ConnectionSet {
            order: self.order,
            members,
        }
    }

    /// `R \ S`.
    pub fn complement(&self) -> ConnectionSet {
        let mut members = self.members.clone();
        members.toggle_range(..);
        ConnectionSet {
            order: self.order,
            members,
        }
    }

    /// `4 <= |S| <= (|R| - 6) / 2`.
    pub fn in_window(&self) -> bool {
        in_window(self.len(), self.order)
    }

    /// `g S h`.
    pub fn translate(&self, grp: &FiniteGroup, g: Elem, h: Elem) -> ConnectionSet {
        let mut members = FixedBitSet::with_capacity(self.order);
        members.extend(self.members.ones().map(|s| grp.mul(grp.mul(g, s), h)));
        ConnectionSet {
            order: self.order,
            members,
        }
    }

    /// Image under a map into `target`: an automorphism, or the embedding
    /// of a subgroup.
    pub fn map(&self, target: &FiniteGroup, image: &[Elem]) -> ConnectionSet {
        let mut members = FixedBitSet::with_capacity(target.order());
        for s in self.members.ones() {
            members.insert(image[s]);
        }
        ConnectionSet {
            order: target.order(),
            members,
        }
    }
}

/// `4 <= size <= (order - 6) / 2`, compared without division.
pub fn in_window(size: usize, order: usize) -> bool {
    size >= 4 && 2 * size + 6 <= order
}

#[derive(Clone)]
pub struct HaarGraph {
    group: Arc<FiniteGroup>,
    conn: ConnectionSet,
    graph: Graph,
}

impl std::fmt::Debug for HaarGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HaarGraph")
            .field("group", &self.group.name())
            .field("S", &self.conn)
            .finish()
    }
}

/// The plain graph of `Haar(g, s)`, without the group attached.
pub fn haar_graph(g: &FiniteGroup, s: &ConnectionSet) -> Graph {
    let n = g.order();
    let mut adj = vec![FixedBitSet::with_capacity(2 * n); 2 * n];
    for x in 0..n {
        for a in s.members.ones() {
            let y = g.mul(a, x);
            adj[x].insert(n + y);
            adj[n + y].insert(x);
        }
    }
    Graph::from_rows(adj)
}

pub fn build_haar(g: &FiniteGroup, s: &ConnectionSet) -> Result<HaarGraph> {
    HaarGraph::new(Arc::new(g.clone()), s.clone())
}

impl HaarGraph {
    pub fn new(group: Arc<FiniteGroup>, conn: ConnectionSet) -> Result<Self> {
        if conn.order != group.order() {
            return Err(Error::MismatchedGroup {
                expected: group.order(),
                found: conn.order,
            });
        }
        let graph = haar_graph(&group, &conn);
        Ok(HaarGraph { group, conn, graph })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn conn(&self) -> &ConnectionSet {
        &self.conn
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Number of group elements; the graph has twice as many vertices.
    pub fn n(&self) -> usize {
        self.group.order()
    }

    pub fn vertex(&self, x: Elem, eps: i8) -> usize {
        if eps < 0 {
            x
        } else {
            self.n() + x
        }
    }

    /// `(element, side)` for a vertex.
    pub fn label(&self, v: usize) -> (Elem, i8) {
        let n = self.n();
        if v < n {
            (v, -1)
        } else {
            (v - n, 1)
        }
    }

    pub fn is_connected(&self) -> bool {
        self.graph.is_connected()
    }

    pub fn to_dot(&self) -> String {
        let n = self.n();
        let mut s = String::from("graph Haar {\n");
        for (side, offset) in [("-1", 0), ("+1", n)] {
            s.push_str("  { rank = same;");
            for x in 0..n {
                let _ = write!(s, " {};", offset + x);
            }
            s.push_str(" }\n");
            for x in 0..n {
                let _ = writeln!(
                    s,
                    "  {} [label=\"({},{})\"];",
                    offset + x,
                    self.group.label(x),
                    side
                );
            }
        }
        for (u, v) in self.graph.edges() {
            let _ = writeln!(s, "  {u} -- {v};");
        }
        s.push_str("}\n");
        s
    }

    /// `{"n": n, "S": [...], "edges": [[u, v], ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<[usize; 2]> = self
            .graph
            .edges()
            .into_iter()
            .map(|(u, v)| [u, v])
            .collect();
        json!({ "n": self.n(), "S": self.conn.elements(), "edges": edges })
    }
}

/// Whether `S^-1 S` generates `g`; equivalently, whether `Haar(g, S)` is
/// connected. The empty set gives `false`.
pub fn is_connected_connection(g: &FiniteGroup, s: &ConnectionSet) -> bool {
    if s.is_empty() {
        return false;
    }
    let elems = s.elements();
    let mut quotients = FixedBitSet::with_capacity(g.order());
    for &a in &elems {
        let ai = g.inv(a);
        for &b in &elems {
            quotients.insert(g.mul(ai, b));
        }
    }
    g.closure(quotients.ones()).order() == g.order()
}

/// `R \ S`; the Haar graph on it is the bipartite complement.
pub fn bipartite_complement(g: &FiniteGroup, s: &ConnectionSet) -> ConnectionSet {
    debug_assert_eq!(g.order(), s.order);
    s.complement()
}

/// `(x, e) -> (xg, e)`.
pub fn rho(g: &FiniteGroup, a: Elem) -> Perm {
    let n = g.order();
    let mut images = vec![0u32; 2 * n];
    for x in 0..n {
        let y = g.mul(x, a) as u32;
        images[x] = y;
        images[n + x] = n as u32 + y;
    }
    Perm::from_images_unchecked(images)
}

/// `(x, e) -> (x^-1, -e)`.
pub fn iota(g: &FiniteGroup) -> Perm {
    let n = g.order();
    let mut images = vec![0u32; 2 * n];
    for x in 0..n {
        let y = g.inv(x) as u32;
        images[x] = n as u32 + y;
        images[n + x] = y;
    }
    Perm::from_images_unchecked(images)
}

/// The subgraph induced on `Nr x {-1, 1}`.
#[derive(Debug, Clone)]
pub struct CosetSubgraph {
    /// `N` as a standalone group.
    pub haar: HaarGraph,
    /// Element `i` of the standalone group is `embedding[i]` in the parent.
    pub embedding: Vec<Elem>,
    /// Vertex `v` of `haar` is vertex `vertices[v]` of the parent graph.
    pub vertices: Vec<usize>,
}

/// Induced subgraph on `Nr x {-1, 1}`. Vertex `(n r, e)` is relabelled
/// `(n, e)`, which makes it exactly `Haar(N, S ∩ N)` for every `r`.
pub fn induced_coset_subgraph(h: &HaarGraph, sub: &Subgroup, r: Elem) -> Result<CosetSubgraph> {
    let g = h.group();
    g.check_elem(r)?;
    let (ng, embedding) = g.subgroup_as_group(sub, format!("N<{}>", g.name()))?;
    let m = ng.order();
    let mut local = FixedBitSet::with_capacity(m);
    local.extend((0..m).filter(|&i| h.conn.contains(embedding[i])));
    let conn = ConnectionSet {
        order: m,
        members: local,
    };
    let haar = HaarGraph::new(Arc::new(ng), conn)?;
    let n = g.order();
    let mut vertices = Vec::with_capacity(2 * m);
    vertices.extend(embedding.iter().map(|&x| g.mul(x, r)));
    vertices.extend(embedding.iter().map(|&x| n + g.mul(x, r)));
    let induced = h.graph.induced(&vertices);
    if induced != haar.graph {
        return Err(Error::InvalidSubgroup(
            "induced coset subgraph does not match Haar(N, S ∩ N)".into(),
        ));
    }
    Ok(CosetSubgraph {
        haar,
        embedding,
        vertices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn grp(s: &str) -> FiniteGroup {
        GroupSpec::parse(s).unwrap().build().unwrap()
    }

    fn cyclic_set(g: &FiniteGroup, s: Elem) -> ConnectionSet {
        ConnectionSet::new(g, [0, 1, 2, 3, 4, 5, 6, 8].map(|i| g.pow(s, i))).unwrap()
    }

    #[test]
    fn extreme_sets() {
        let g = grp("C5");
        let full = build_haar(&g, &ConnectionSet::full(&g)).unwrap();
        assert_eq!(full.graph().edge_count(), 25);
        let empty = build_haar(&g, &ConnectionSet::empty(&g)).unwrap();
        assert_eq!(empty.graph().edge_count(), 0);
        assert_eq!(empty.graph().order(), 10);
    }

    #[test]
    fn c4_pair_is_eight_cycle() {
        let g = grp("C4");
        let h = build_haar(&g, &ConnectionSet::new(&g, [0, 1]).unwrap()).unwrap();
        let gr = h.graph();
        assert_eq!(gr.edge_count(), 8);
        assert!(gr.is_connected());
        assert!((0..8).all(|v| gr.degree(v) == 2));
    }

    #[test]
    fn edge_rule() {
        let g = grp("D12");
        let s = ConnectionSet::new(&g, [1, 7, 9]).unwrap();
        let h = build_haar(&g, &s).unwrap();
        let n = g.order();
        for a in 0..n {
            for b in 0..n {
                let expect = s.contains(g.mul(b, g.inv(a)));
                assert_eq!(h.graph().has_edge(a, n + b), expect);
                assert!(!h.graph().has_edge(a, b) && !h.graph().has_edge(n + a, n + b));
            }
        }
        assert_eq!(h.graph().edge_count(), n * s.len());
    }

    #[test]
    fn mismatched_group() {
        let s = ConnectionSet::new(&grp("C5"), [1]).unwrap();
        assert!(matches!(
            build_haar(&grp("C6"), &s),
            Err(Error::MismatchedGroup { .. })
        ));
    }

    #[test]
    fn connection_examples() {
        let c6 = grp("C6");
        assert!(!is_connected_connection(
            &c6,
            &ConnectionSet::new(&c6, [0]).unwrap()
        ));
        let c12 = grp("C12");
        assert!(is_connected_connection(&c12, &cyclic_set(&c12, 1)));
        let d6 = grp("D6");
        assert!(!is_connected_connection(
            &d6,
            &ConnectionSet::new(&d6, [0, 3]).unwrap()
        ));
        assert!(!is_connected_connection(&c6, &ConnectionSet::empty(&c6)));
    }

    #[test]
    fn complement_sizes() {
        let c12 = grp("C12");
        assert_eq!(bipartite_complement(&c12, &cyclic_set(&c12, 1)).len(), 4);
        assert_eq!(
            bipartite_complement(&c12, &ConnectionSet::empty(&c12)).len(),
            12
        );
        assert!(bipartite_complement(&c12, &ConnectionSet::full(&c12)).is_empty());
    }

    #[test]
    fn rho_and_iota() {
        let d24 = grp("D24");
        assert!(rho(&d24, 0).is_identity());
        let mut seed = 7usize;
        for _ in 0..100 {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let (a, b) = ((seed >> 33) % 24, (seed >> 13) % 24);
            assert_eq!(rho(&d24, a).then(&rho(&d24, b)), rho(&d24, d24.mul(a, b)));
        }
        let c12 = grp("C12");
        let h = build_haar(&c12, &cyclic_set(&c12, 1)).unwrap();
        assert!(h.graph().is_automorphism(&iota(&c12)));
        for a in c12.elements() {
            assert!(h.graph().is_automorphism(&rho(&c12, a)));
        }
    }

    #[test]
    fn coset_subgraphs() {
        let g = grp("C6");
        let h = build_haar(&g, &ConnectionSet::new(&g, [0, 1, 3]).unwrap()).unwrap();
        let whole = induced_coset_subgraph(&h, &g.whole(), 0).unwrap();
        assert_eq!(whole.haar.graph(), h.graph());
        let triv = induced_coset_subgraph(&h, &g.trivial(), 4).unwrap();
        assert_eq!(triv.haar.graph().order(), 2);
        assert_eq!(triv.haar.graph().edge_count(), 1);
        let h2 = build_haar(&g, &ConnectionSet::new(&g, [1]).unwrap()).unwrap();
        let triv = induced_coset_subgraph(&h2, &g.trivial(), 0).unwrap();
        assert_eq!(triv.haar.graph().edge_count(), 0);
        let sub = g.closure([2]);
        for r in g.elements() {
            let c = induced_coset_subgraph(&h, &sub, r).unwrap();
            assert_eq!(c.haar.conn().len(), 1);
        }
    }

    #[test]
    fn json_dump_shape() {
        let g = grp("C3");
        let h = build_haar(&g, &ConnectionSet::new(&g, [0]).unwrap()).unwrap();
        let j = h.to_json();
        assert_eq!(j["n"], 3);
        assert_eq!(j["edges"].as_array().unwrap().len(), 3);
        assert!(h.to_dot().contains("rank = same"));
    }
}
