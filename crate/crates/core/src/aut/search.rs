//! Individualisation–refinement search for the automorphism group of a
//! vertex-coloured graph.

use log::debug;

use super::partition::{cell_starts, OrderedPartition, Refiner, Trace};
use super::{PermGroupDescriptor, SearchConfig};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::perm::{Perm, StabChain, UnionFind};

/// One node on the first path of the search tree.
struct PathNode {
    part: OrderedPartition,
    trace: Vec<u64>,
    /// Start of the target cell; `None` at the leaf.
    target: Option<usize>,
}

/// Search statistics, for diagnostics.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub leaves: u64,
    pub bad_leaves: u64,
}

struct Search<'a> {
    g: &'a Graph,
    path: Vec<PathNode>,
    refiner: Refiner,
    budget: u64,
    stats: SearchStats,
}

impl<'a> Search<'a> {
    fn tick(&mut self) -> Result<()> {
        self.stats.nodes += 1;
        if self.stats.nodes > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        Ok(())
    }

    /// Child of `part` obtained by individualising `v`, checked against the
    /// first path at `depth`.
    fn child(
        &mut self,
        part: &OrderedPartition,
        v: usize,
        depth: usize,
    ) -> Result<Option<OrderedPartition>> {
        self.tick()?;
        let mut c = part.clone();
        let s = c.individualize(v);
        let expected = &self.path[depth];
        if !self
            .refiner
            .refine(self.g, &mut c, &[s], Trace::Compare(&expected.trace))
        {
            return Ok(None);
        }
        if c.num_cells() != expected.part.num_cells() || c.target_cell() != expected.target {
            return Ok(None);
        }
        Ok(Some(c))
    }

    /// Looks for a leaf below `part` (at `depth`) equivalent to the first leaf.
    fn explore(&mut self, part: OrderedPartition, depth: usize) -> Result<Option<Perm>> {
        if part.is_discrete() {
            self.stats.leaves += 1;
            let first = self.path.last().unwrap().part.elems();
            let mut images = vec![0u32; first.len()];
            for (i, &v) in first.iter().enumerate() {
                images[v as usize] = part.elems()[i];
            }
            let p = Perm::from_images_unchecked(images);
            if self.g.is_automorphism(&p) {
                return Ok(Some(p));
            }
            self.stats.bad_leaves += 1;
            return Ok(None);
        }
        let t = part
            .target_cell()
            .expect("non-discrete partition has a target");
        let cell: Vec<usize> = part.elems()[part.cell_range(t)]
            .iter()
            .map(|&v| v as usize)
            .collect();
        for v in cell {
            if let Some(c) = self.child(&part, v, depth + 1)? {
                if let Some(p) = self.explore(c, depth + 1)? {
                    return Ok(Some(p));
                }
            }
        }
        Ok(None)
    }
}

/// The group of automorphisms of `g` that map every cell of `initial` to
/// itself, with exact order.
pub fn automorphism_group(
    g: &Graph,
    initial: &OrderedPartition,
    cfg: &SearchConfig,
) -> Result<PermGroupDescriptor> {
    automorphism_group_with_stats(g, initial, cfg).map(|(d, _)| d)
}

pub fn automorphism_group_with_stats(
    g: &Graph,
    initial: &OrderedPartition,
    cfg: &SearchConfig,
) -> Result<(PermGroupDescriptor, SearchStats)> {
    let n = g.order();
    if initial.len() != n {
        return Err(Error::InvalidParams {
            family: "partition".into(),
            reason: format!(
                "partition of {} points for a graph on {n} vertices",
                initial.len()
            ),
        });
    }
    if n > super::MAX_VERTICES {
        return Err(Error::CapExceeded(format!(
            "graph on {n} vertices exceeds {}",
            super::MAX_VERTICES
        )));
    }
    let mut refiner = Refiner::new(n);

    // First path: always individualise the first vertex of the target cell.
    let mut path = Vec::new();
    let mut part = initial.clone();
    let mut trace = Vec::new();
    let starts = cell_starts(&part);
    refiner.refine(g, &mut part, &starts, Trace::Record(&mut trace));
    let mut base = Vec::new();
    loop {
        let target = part.target_cell();
        path.push(PathNode {
            part: part.clone(),
            trace: std::mem::take(&mut trace),
            target,
        });
        let Some(t) = target else { break };
        let b = part.elems()[t] as usize;
        base.push(b);
        let s = part.individualize(b);
        refiner.refine(g, &mut part, &[s], Trace::Record(&mut trace));
    }

    let mut search = Search {
        g,
        path,
        refiner,
        budget: cfg.node_budget,
        stats: SearchStats::default(),
    };
    search.stats.nodes = base.len() as u64 + 1;
    let mut gens: Vec<Perm> = Vec::new();
    // Level of each generator: the number of leading base points it fixes.
    let mut levels: Vec<usize> = Vec::new();
    for k in (0..base.len()).rev() {
        let node_part = search.path[k].part.clone();
        let t = search.path[k].target.unwrap();
        let cell: Vec<usize> = node_part.elems()[node_part.cell_range(t)]
            .iter()
            .map(|&v| v as usize)
            .collect();
        let mut uf = UnionFind::new(n);
        let merge = |uf: &mut UnionFind, p: &Perm| {
            for x in 0..n {
                uf.union(x, p.apply(x));
            }
        };
        for (p, &l) in gens.iter().zip(&levels) {
            if l >= k {
                merge(&mut uf, p);
            }
        }
        let mut failed: Vec<usize> = Vec::new();
        for &w in &cell {
            if w == base[k] || uf.find(w) == uf.find(base[k]) {
                continue;
            }
            let rw = uf.find(w);
            if failed.iter().any(|&f| uf.find(f) == rw) {
                continue;
            }
            let found = match search.child(&node_part, w, k + 1)? {
                Some(c) => search.explore(c, k + 1)?,
                None => None,
            };
            match found {
                Some(p) => {
                    debug_assert!(base[..k].iter().all(|&b| p.fixes(b)));
                    merge(&mut uf, &p);
                    gens.push(p);
                    levels.push(k);
                }
                None => failed.push(w),
            }
        }
    }
    debug!(
        "automorphism search: {} vertices, {} nodes, {} leaves, {} generators",
        n,
        search.stats.nodes,
        search.stats.leaves,
        gens.len()
    );
    let chain = StabChain::from_sgs(n, &base, &gens);
    Ok((
        PermGroupDescriptor::from_parts(n, gens, base, chain),
        search.stats,
    ))
}

/// Exhaustive automorphism count by plain backtracking over vertex images,
/// without refinement. Only for small graphs; used as a test oracle.
pub fn naive_automorphism_count(g: &Graph, colors: &[usize]) -> u64 {
    let n = g.order();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(g: &Graph, colors: &[usize], v: usize, image: &mut [usize], used: &mut [bool]) -> u64 {
        let n = g.order();
        if v == n {
            return 1;
        }
        let mut total = 0;
        for w in 0..n {
            if used[w] || colors[w] != colors[v] || g.degree(w) != g.degree(v) {
                continue;
            }
            if (0..v).all(|u| g.has_edge(u, v) == g.has_edge(image[u], w)) {
                image[v] = w;
                used[w] = true;
                total += go(g, colors, v + 1, image, used);
                used[w] = false;
            }
        }
        total
    }
    go(g, colors, 0, &mut image, &mut used)
}
