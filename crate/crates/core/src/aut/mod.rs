//! Automorphism groups of graphs and Haar graphs.

mod partition;
mod regular;
mod search;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub use partition::{is_equitable, refine, OrderedPartition};
pub use regular::{cayley_check, find_regular_subgroup, verify_regular, CayleyVerdict};
pub use search::{automorphism_group_with_stats, naive_automorphism_count, SearchStats};

use crate::error::{Error, Reason, Result};
use crate::graph::Graph;
use crate::group::{Elem, FiniteGroup, GroupHom};
use crate::haar::{build_haar, ConnectionSet, HaarGraph};
use crate::perm::{orbits, Perm, StabChain};

/// Largest graph the engine accepts.
pub const MAX_VERTICES: usize = 8192;

/// Default node budget of a single search.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Search-tree nodes (refinement calls) allowed before giving up.
    pub node_budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: DEFAULT_BUDGET,
        }
    }
}

impl SearchConfig {
    pub fn with_budget(node_budget: u64) -> Self {
        SearchConfig { node_budget }
    }

    /// Default config, with the budget taken from `HAAR_BUDGET` when set.
    pub fn from_env() -> Self {
        let node_budget = std::env::var("HAAR_BUDGET")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or(DEFAULT_BUDGET);
        SearchConfig { node_budget }
    }
}

/// A permutation group given by generators, with a stabiliser chain.
#[derive(Debug, Clone)]
pub struct PermGroupDescriptor {
    degree: usize,
    generators: Vec<Perm>,
    base: Vec<usize>,
    order: BigUint,
    chain: StabChain,
}

impl PermGroupDescriptor {
    pub(crate) fn from_parts(
        degree: usize,
        generators: Vec<Perm>,
        base: Vec<usize>,
        chain: StabChain,
    ) -> Self {
        let order = chain.order();
        PermGroupDescriptor {
            degree,
            generators,
            base,
            order,
            chain,
        }
    }

    /// The group generated by `gens`, via deterministic Schreier–Sims.
    pub fn from_generators(degree: usize, gens: Vec<Perm>) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(Error::InvalidPermutation(format!(
                "degree {} in a group of degree {degree}",
                g.degree()
            )));
        }
        let chain = StabChain::schreier_sims(degree, &gens, &[]);
        Ok(Self::from_chain(chain, gens))
    }

    fn from_chain(chain: StabChain, generators: Vec<Perm>) -> Self {
        PermGroupDescriptor {
            degree: chain.degree(),
            base: chain.base(),
            order: chain.order(),
            generators,
            chain,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    /// The order, when it fits.
    pub fn order_u64(&self) -> Option<u64> {
        self.order.to_u64()
    }

    pub fn chain(&self) -> &StabChain {
        &self.chain
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.chain.contains(p)
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        orbits(self.degree, &self.generators)
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbits().len() == 1
    }

    /// Whether every non-identity generator-closure element moves every
    /// point; checked through point stabilisers of orbit representatives.
    pub fn is_semiregular(&self) -> bool {
        self.orbits()
            .iter()
            .all(|o| self.point_stabilizer(o[0]).order == BigUint::from(1u8))
    }

    /// Exact stabiliser of `v`, by base change.
    pub fn point_stabilizer(&self, v: usize) -> PermGroupDescriptor {
        let chain = self.chain.point_stabilizer(v);
        let gens = chain.strong_generators();
        Self::from_chain(chain, gens)
    }

    /// Checks that products of random generator pairs sift through the chain.
    pub fn spot_check_closure(&self, samples: usize, seed: u64) -> bool {
        use rand::Rng;
        if self.generators.is_empty() {
            return true;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples).all(|_| {
            let a = &self.generators[rng.gen_range(0..self.generators.len())];
            let b = &self.generators[rng.gen_range(0..self.generators.len())];
            self.contains(&a.then(b))
        })
    }

    /// Every element. Intended for small groups only.
    pub fn elements(&self) -> Vec<Perm> {
        self.chain.elements()
    }
}

/// Colour-preserving automorphism group of `g`, where the colours are the
/// cells of `initial`.
pub fn automorphism_group(
    g: &Graph,
    initial: &OrderedPartition,
    cfg: &SearchConfig,
) -> Result<PermGroupDescriptor> {
    search::automorphism_group(g, initial, cfg)
}

/// `Aut(Haar(R, S))`.
pub fn aut(h: &HaarGraph, cfg: &SearchConfig) -> Result<PermGroupDescriptor> {
    automorphism_group(h.graph(), &OrderedPartition::unit(2 * h.n()), cfg)
}

/// Automorphisms mapping each part to itself.
pub fn aut0(h: &HaarGraph, cfg: &SearchConfig) -> Result<PermGroupDescriptor> {
    automorphism_group(h.graph(), &OrderedPartition::bipartition(h.n()), cfg)
}

pub fn point_stabilizer(p: &PermGroupDescriptor, v: usize) -> Result<PermGroupDescriptor> {
    if v >= p.degree() {
        return Err(Error::BadElement {
            element: v,
            order: p.degree(),
        });
    }
    Ok(p.point_stabilizer(v))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HgrCheck {
    pub is_hgr: bool,
    #[serde(with = "crate::bignum")]
    pub aut_order: BigUint,
    #[serde(with = "crate::bignum")]
    pub aut0_order: BigUint,
}

impl HgrCheck {
    /// Whether the part-preserving automorphisms are exactly the translations.
    pub fn is_rigid(&self, group_order: usize) -> bool {
        self.aut0_order == BigUint::from(group_order)
    }
}

pub fn is_hgr(g: &FiniteGroup, s: &ConnectionSet, cfg: &SearchConfig) -> Result<HgrCheck> {
    check_haar(&build_haar(g, s)?, cfg)
}

pub fn check_haar(h: &HaarGraph, cfg: &SearchConfig) -> Result<HgrCheck> {
    let a0 = aut0(h, cfg)?;
    let a = aut(h, cfg)?;
    let n = BigUint::from(h.n());
    debug_assert!(a0.order() % &n == BigUint::from(0u8));
    Ok(HgrCheck {
        is_hgr: a.order() == &n,
        aut_order: a.order().clone(),
        aut0_order: a0.order().clone(),
    })
}

/// For a rigid connected Haar graph and a part-swapping automorphism `phi`
/// with `(1,-1) -> (1,1)`, recovers the group automorphism `f` and element
/// `x` with `(r,-1) -> (f(r),1)` and `(r,1) -> (f^-1(r) x,-1)`, checking both
/// identities on every vertex.
pub fn induced_group_automorphism(
    h: &HaarGraph,
    phi: &Perm,
    cfg: &SearchConfig,
) -> Result<(GroupHom, Elem)> {
    const OP: &str = "induced_group_automorphism";
    let g = h.group();
    let n = h.n();
    if phi.degree() != 2 * n {
        return Err(Error::InvalidPermutation(format!(
            "degree {} for a graph on {} vertices",
            phi.degree(),
            2 * n
        )));
    }
    if !h.is_connected() {
        return Err(Error::pre(OP, Reason::Disconnected));
    }
    if !h.graph().is_automorphism(phi) {
        return Err(Error::pre(OP, Reason::NotAnAutomorphism));
    }
    let e = g.identity();
    if phi.apply(h.vertex(e, -1)) != h.vertex(e, 1) {
        return Err(Error::pre(OP, Reason::NotPartSwap));
    }
    if aut0(h, cfg)?.order() != &BigUint::from(n) {
        return Err(Error::pre(OP, Reason::NotRigid));
    }
    let mut image = vec![0; n];
    for (r, slot) in image.iter_mut().enumerate() {
        let (y, side) = h.label(phi.apply(h.vertex(r, -1)));
        if side != 1 {
            return Err(Error::pre(OP, Reason::NotPartSwap));
        }
        *slot = y;
    }
    let f = GroupHom {
        source_order: n,
        target_order: n,
        image,
    };
    if !f.is_bijective() || !f.is_homomorphism(g, g) {
        return Err(Error::pre(
            OP,
            Reason::Other("induced map is not a group automorphism".into()),
        ));
    }
    let finv = f.inverse().expect("bijective");
    let (x, _) = h.label(phi.apply(h.vertex(e, 1)));
    for r in g.elements() {
        if phi.apply(h.vertex(r, 1)) != h.vertex(g.mul(finv.apply(r), x), -1) {
            return Err(Error::pre(
                OP,
                Reason::Other(format!("identity fails on ({}, 1)", g.label(r))),
            ));
        }
    }
    Ok((f, x))
}
