//! Regular subgroups of permutation groups, and the Cayley test for Haar
//! graphs built on them.

use std::collections::HashMap;

use super::{automorphism_group, OrderedPartition, PermGroupDescriptor, SearchConfig};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::group::Elem;
use crate::haar::{haar_graph, rho, HaarGraph};
use crate::perm::{Perm, StabChain};

/// Outcome of [`cayley_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CayleyVerdict {
    /// `generators` generate a regular subgroup of the automorphisms.
    Cayley { generators: Vec<Perm> },
    /// The automorphism group is not vertex-transitive.
    NotVertexTransitive,
    /// Exhaustive search found no regular subgroup.
    NoRegularSubgroup,
}

impl CayleyVerdict {
    pub fn is_cayley(&self) -> bool {
        matches!(self, CayleyVerdict::Cayley { .. })
    }
}

struct RegularSearch<'a> {
    m: usize,
    /// Chain with base starting at 0.
    chain: &'a StabChain,
    stab: StabChain,
    budget: u64,
    nodes: u64,
}

/// Partial subgroup: elements indexed by the image of point 0.
#[derive(Clone)]
struct Closure {
    slots: Vec<Option<Perm>>,
    gens: Vec<Perm>,
    size: usize,
}

impl Closure {
    fn new(m: usize) -> Self {
        let mut slots = vec![None; m];
        slots[0] = Some(Perm::identity(m));
        Closure {
            slots,
            gens: Vec::new(),
            size: 1,
        }
    }

    /// `<self, g>`, provided it still acts semiregularly.
    fn extend(&self, g: &Perm) -> Option<Closure> {
        let mut next = self.clone();
        next.gens.push(g.clone());
        let mut queue: Vec<Perm> = self.slots.iter().flatten().cloned().collect();
        let mut i = 0;
        while i < queue.len() {
            let a = queue[i].clone();
            i += 1;
            for s in &next.gens {
                let p = a.then(s);
                let w = p.apply(0);
                match &next.slots[w] {
                    Some(q) if *q == p => continue,
                    Some(_) => return None,
                    None => {
                        if p.fixed_points() > 0 {
                            return None;
                        }
                        next.slots[w] = Some(p.clone());
                        next.size += 1;
                        queue.push(p);
                    }
                }
            }
        }
        Some(next)
    }
}

impl RegularSearch<'_> {
    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        Ok(())
    }

    fn dfs(&mut self, c: &Closure) -> Result<Option<Closure>> {
        if c.size == self.m {
            return Ok(Some(c.clone()));
        }
        let w = c
            .slots
            .iter()
            .position(|s| s.is_none())
            .expect("closure not full");
        let u = self
            .chain
            .transversal(0, w)
            .expect("transitive group")
            .clone();
        // A new element may not map any point into its orbit under the
        // closure: composed with the closure element doing the same, it
        // would fix that point.
        let mut orbit = vec![usize::MAX; self.m];
        for x in 0..self.m {
            if orbit[x] == usize::MAX {
                for p in c.slots.iter().flatten() {
                    orbit[p.apply(x)] = x;
                }
            }
        }
        let mut found = None;
        self.candidates(0, Perm::identity(self.m), &u, c, &orbit, &mut found)?;
        Ok(found)
    }

    /// Walks the stabiliser of 0 level by level; `q` is the partial product
    /// and candidates are `q` followed by `u`.
    fn candidates(
        &mut self,
        level: usize,
        q: Perm,
        u: &Perm,
        c: &Closure,
        orbit: &[usize],
        found: &mut Option<Closure>,
    ) -> Result<()> {
        if found.is_some() {
            return Ok(());
        }
        self.tick()?;
        if level == self.stab.depth() {
            let g = q.then(u);
            if (0..self.m).any(|x| orbit[g.apply(x)] == orbit[x]) {
                return Ok(());
            }
            if let Some(next) = c.extend(&g) {
                *found = self.dfs(&next)?;
            }
            return Ok(());
        }
        let b = self.stab.base()[level];
        let level_orbit = self.stab.orbit(level).to_vec();
        for x in level_orbit {
            let t = self.stab.transversal(level, x).unwrap();
            let q2 = t.then(&q);
            if orbit[u.apply(q2.apply(b))] == orbit[b] {
                continue;
            }
            self.candidates(level + 1, q2, u, c, orbit, found)?;
            if found.is_some() {
                break;
            }
        }
        Ok(())
    }
}

/// A subgroup of `p` acting regularly on all points, given by generators,
/// or `None` when none exists. The search is exhaustive; running out of
/// budget is an error, never a negative answer.
pub fn find_regular_subgroup(
    p: &PermGroupDescriptor,
    cfg: &SearchConfig,
) -> Result<Option<Vec<Perm>>> {
    let m = p.degree();
    if m <= 1 {
        return Ok(Some(Vec::new()));
    }
    if !p.is_transitive() {
        return Ok(None);
    }
    let chain = p.chain().rebase(&[0]);
    let stab = chain.stabilizer_chain(1);
    let mut search = RegularSearch {
        m,
        chain: &chain,
        stab,
        budget: cfg.node_budget,
        nodes: 0,
    };
    let found = search.dfs(&Closure::new(m))?;
    Ok(found.map(|c| c.gens))
}

/// `(0, n, 1, n+1, ..., n-1, 2n-1)`: regular on `2n` points and an
/// automorphism of both the empty graph and `K_{n,n}`.
fn alternating_cycle(n: usize) -> Perm {
    let mut images = vec![0; 2 * n];
    for x in 0..n {
        images[x] = n + x;
        images[n + x] = (x + 1) % n;
    }
    Perm::from_images(images).expect("valid cycle")
}

enum Outcome {
    Regular(Vec<Perm>),
    NotTransitive,
    NoRegular,
}

/// Regular generators when `x` is a complete bipartite graph.
fn complete_bipartite_cycle(x: &Graph) -> Option<Perm> {
    let m = x.order();
    if m < 2 || m % 2 == 1 {
        return None;
    }
    let k = m / 2;
    let b: Vec<usize> = x.neighbors(0).iter().map(|&v| v as usize).collect();
    let a: Vec<usize> = (0..m).filter(|v| !x.has_edge(0, *v)).collect();
    if a.len() != k
        || b.len() != k
        || x.edge_count() != k * k
        || a.iter().any(|&v| x.degree(v) != k)
    {
        return None;
    }
    if a.iter().any(|&u| b.iter().any(|&v| !x.has_edge(u, v))) {
        return None;
    }
    let mut images = vec![0; m];
    for i in 0..k {
        images[a[i]] = b[i];
        images[b[i]] = a[(i + 1) % k];
    }
    Perm::from_images(images).ok()
}

/// Classes of vertices with equal neighbourhoods, ordered by first member.
fn twin_classes(x: &Graph) -> Vec<Vec<usize>> {
    let mut by_row: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in 0..x.order() {
        let id = *by_row.entry(x.neighbors(v).to_vec()).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[id].push(v);
    }
    classes
}

/// Cayley decision for a connected graph. Twin classes of equal size `t`
/// make the graph a lexicographic product `Y[tK_1]`; a regular group of `Y`
/// times `C_t` is then regular on the whole graph. The converse can fail, so
/// a negative answer on `Y` falls through to the direct search.
fn decide(x: &Graph, cfg: &SearchConfig) -> Result<Outcome> {
    if x.order() <= 1 {
        return Ok(Outcome::Regular(Vec::new()));
    }
    if let Some(c) = complete_bipartite_cycle(x) {
        return Ok(Outcome::Regular(vec![c]));
    }
    let classes = twin_classes(x);
    if classes.len() < x.order() {
        let t = classes[0].len();
        if classes.iter().any(|c| c.len() != t) {
            return Ok(Outcome::NotTransitive);
        }
        let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
        let y = x.induced(&reps);
        match decide(&y, cfg)? {
            Outcome::Regular(gens) => return Ok(Outcome::Regular(lift_twins(&classes, &gens))),
            Outcome::NotTransitive => return Ok(Outcome::NotTransitive),
            Outcome::NoRegular => {}
        }
    }
    let a = automorphism_group(x, &OrderedPartition::unit(x.order()), cfg)?;
    if !a.is_transitive() {
        return Ok(Outcome::NotTransitive);
    }
    Ok(match find_regular_subgroup(&a, cfg)? {
        Some(gens) => Outcome::Regular(gens),
        None => Outcome::NoRegular,
    })
}

/// `gens` act on the classes; adds the cyclic shift inside every class.
fn lift_twins(classes: &[Vec<usize>], gens: &[Perm]) -> Vec<Perm> {
    let m: usize = classes.iter().map(Vec::len).sum();
    let t = classes[0].len();
    let mut out: Vec<Perm> = gens
        .iter()
        .map(|k| {
            let mut images = vec![0; m];
            for (i, c) in classes.iter().enumerate() {
                for (j, &v) in c.iter().enumerate() {
                    images[v] = classes[k.apply(i)][j];
                }
            }
            Perm::from_images(images).expect("class bijection")
        })
        .collect();
    let mut images = vec![0; m];
    for c in classes {
        for (j, &v) in c.iter().enumerate() {
            images[v] = c[(j + 1) % t];
        }
    }
    out.push(Perm::from_images(images).expect("class shift"));
    out
}

/// Lifts a regular group of the component of vertex 0 to the whole Haar
/// graph `host`: the translation by the first element of each component
/// identifies it with the component of 0, and a cyclic shift permutes the
/// components.
fn lift_components(h: &HaarGraph, comps: &[Vec<usize>], gens: &[Perm]) -> Vec<Perm> {
    let g = h.group();
    let n = h.n();
    let m = 2 * n;
    let t = comps.len();
    let c0 = &comps[0];
    let mut pos0 = vec![usize::MAX; m];
    for (j, &v) in c0.iter().enumerate() {
        pos0[v] = j;
    }
    let mut comp_of = vec![0; m];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    // The smallest vertex of each component lies in the -1 part.
    let shift: Vec<Elem> = comps.iter().map(|c| c[0]).collect();
    let to_c0: Vec<Perm> = shift.iter().map(|&a| rho(g, g.inv(a))).collect();
    let from_c0: Vec<Perm> = shift.iter().map(|&a| rho(g, a)).collect();
    let lift = |k: &Perm, s: usize| {
        let images = (0..m)
            .map(|v| {
                let i = comp_of[v];
                let j = pos0[to_c0[i].apply(v)];
                from_c0[(i + s) % t].apply(c0[k.apply(j)])
            })
            .collect();
        Perm::from_images(images).expect("component lift")
    };
    let mut out: Vec<Perm> = gens.iter().map(|k| lift(k, 0)).collect();
    if t > 1 {
        out.push(lift(&Perm::identity(c0.len()), 1));
    }
    out
}

/// Whether `Haar(R, S)` is a Cayley graph. Components are translates of
/// each other, so the component of vertex 0 decides; when the graph is
/// connected and its bipartite complement is not, the complement decides
/// instead, since a regular group of a connected bipartite graph preserves
/// the bipartition and hence the non-edges across it. Positive verdicts
/// carry generators on all `2n` vertices, checked before returning.
pub fn cayley_check(h: &HaarGraph, cfg: &SearchConfig) -> Result<CayleyVerdict> {
    let n = h.n();
    let s = h.conn().len();
    if s == 0 || s == n {
        return Ok(CayleyVerdict::Cayley {
            generators: vec![alternating_cycle(n)],
        });
    }
    let own = h.graph();
    let mut comps = own.components();
    let mut host = own.clone();
    if comps.len() == 1 {
        let other = haar_graph(h.group(), &h.conn().complement());
        let other_comps = other.components();
        if other_comps.len() > 1 {
            comps = other_comps;
            host = other;
        }
    }
    let x = host.induced(&comps[0]);
    Ok(match decide(&x, cfg)? {
        Outcome::Regular(gens) => {
            let generators = lift_components(h, &comps, &gens);
            if !verify_regular(own, &generators) {
                return Err(Error::Unknown(
                    "lifted regular group failed verification".into(),
                ));
            }
            CayleyVerdict::Cayley { generators }
        }
        Outcome::NotTransitive => CayleyVerdict::NotVertexTransitive,
        Outcome::NoRegular => CayleyVerdict::NoRegularSubgroup,
    })
}

/// Whether `gens` generate a group acting regularly on `0..m` that preserves
/// every edge of `graph`.
pub fn verify_regular(graph: &Graph, gens: &[Perm]) -> bool {
    let m = graph.order();
    if gens
        .iter()
        .any(|p| p.degree() != m || !graph.is_automorphism(p))
    {
        return false;
    }
    if m == 0 {
        return true;
    }
    let mut c = Closure::new(m);
    for g in gens {
        if g.is_identity() {
            continue;
        }
        match c.extend(g) {
            Some(next) => c = next,
            None => return false,
        }
    }
    c.size == m
}
