//! Two-layer posets from Haar graphs, their automorphisms and ideal counts.

use std::fmt::Write;

use fixedbitset::FixedBitSet;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::aut::{automorphism_group, OrderedPartition, SearchConfig};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::group::FiniteGroup;
use crate::haar::{build_haar, ConnectionSet, HaarGraph};

/// Largest top layer accepted by [`count_ideals`].
pub const MAX_TOP_LAYER: usize = 24;

/// Largest group accepted by [`lattice_bound_check`].
pub const MAX_LATTICE_ORDER: usize = 16;

/// Top subsets enumerated from a lookup table inside each parallel block.
const LOW_BITS: usize = 12;

/// A finite partial order; `down[b]` holds every `a <= b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    down: Vec<FixedBitSet>,
}

impl Poset {
    /// The reflexive-transitive closure of `strict`; fails on cycles.
    pub fn from_strict(
        size: usize,
        strict: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut down: Vec<FixedBitSet> = (0..size)
            .map(|b| {
                let mut s = FixedBitSet::with_capacity(size);
                s.insert(b);
                s
            })
            .collect();
        for (a, b) in strict {
            if a >= size || b >= size {
                return Err(Error::Refused(format!(
                    "relation ({a}, {b}) outside {size} elements"
                )));
            }
            down[b].insert(a);
        }
        // Warshall on down-sets.
        for k in 0..size {
            let below_k = down[k].clone();
            for d in down.iter_mut() {
                if d.contains(k) {
                    d.union_with(&below_k);
                }
            }
        }
        for a in 0..size {
            for b in down[a].ones() {
                if b != a && down[b].contains(a) {
                    return Err(Error::Refused(format!(
                        "elements {a} and {b} lie below each other"
                    )));
                }
            }
        }
        Ok(Poset { down })
    }

    pub fn size(&self) -> usize {
        self.down.len()
    }

    /// `a <= b`.
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.down[b].contains(a)
    }

    pub fn down_set(&self, b: usize) -> &FixedBitSet {
        &self.down[b]
    }

    /// Strict relations `(a, b)` with `a < b`, sorted.
    pub fn strict_relations(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = (0..self.size())
            .flat_map(|b| {
                self.down[b]
                    .ones()
                    .filter(move |&a| a != b)
                    .map(move |a| (a, b))
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Pairs `(a, b)` with `a <= b`, the reflexive ones included.
    pub fn relation_count(&self) -> usize {
        self.down.iter().map(|d| d.count_ones(..)).sum()
    }

    /// Checks reflexivity, antisymmetry and transitivity directly.
    pub fn is_partial_order(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| self.le(a, a))
            && (0..n).all(|a| (0..n).all(|b| a == b || !(self.le(a, b) && self.le(b, a))))
            && (0..n).all(|b| {
                self.down[b]
                    .ones()
                    .all(|a| self.down[a].is_subset(&self.down[b]))
            })
    }

    /// Elements in the longest chain.
    pub fn height(&self) -> usize {
        let n = self.size();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&b| self.down[b].count_ones(..));
        let mut h = vec![0usize; n];
        for &b in &order {
            h[b] = 1 + self.down[b]
                .ones()
                .filter(|&a| a != b)
                .map(|a| h[a])
                .max()
                .unwrap_or(0);
        }
        h.into_iter().max().unwrap_or(0)
    }

    /// Elements with something strictly below them.
    pub fn top_layer(&self) -> Vec<usize> {
        (0..self.size())
            .filter(|&b| self.down[b].count_ones(..) > 1)
            .collect()
    }

    /// Elements with nothing strictly below them.
    pub fn bottom_layer(&self) -> Vec<usize> {
        (0..self.size())
            .filter(|&b| self.down[b].count_ones(..) == 1)
            .collect()
    }

    /// Comparability graph.
    pub fn comparability_graph(&self) -> Graph {
        Graph::from_edges(self.size(), self.strict_relations()).expect("relations are in range")
    }

    /// Whether a set is closed downwards.
    pub fn is_ideal(&self, set: &FixedBitSet) -> bool {
        set.ones().all(|b| self.down[b].is_subset(set))
    }

    /// `{"elements": m, "strict": [[a, b], ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let strict: Vec<[usize; 2]> = self
            .strict_relations()
            .into_iter()
            .map(|(a, b)| [a, b])
            .collect();
        json!({ "elements": self.size(), "strict": strict })
    }

    /// Hasse diagram, edges pointing upwards.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph Hasse {\n  rankdir = BT;\n");
        for v in 0..self.size() {
            let _ = writeln!(s, "  {v};");
        }
        for (a, b) in self.strict_relations() {
            let covered = self.down[b]
                .ones()
                .any(|c| c != a && c != b && self.le(a, c));
            if !covered {
                let _ = writeln!(s, "  {a} -> {b};");
            }
        }
        s.push_str("}\n");
        s
    }
}

/// `(a, -1) <= (b, 1)` exactly when the two are adjacent.
pub fn haar_to_poset(h: &HaarGraph) -> Poset {
    let n = h.n();
    let strict = h
        .graph()
        .edges()
        .into_iter()
        .map(|(u, v)| if u < n { (u, v) } else { (v, u) });
    Poset::from_strict(2 * n, strict).expect("a bipartite orientation is acyclic")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PosetReport {
    #[serde(with = "crate::bignum")]
    pub aut_order: BigUint,
    pub semiregular: bool,
    pub orbit_count: usize,
}

/// Automorphisms of a two-layer poset, computed on the comparability graph
/// with the layers as colours. This is exact once the layers cannot be
/// exchanged: every element is comparable to something and all top
/// elements have the same number of elements below.
pub fn poset_representation_report(p: &Poset, cfg: &SearchConfig) -> Result<PosetReport> {
    if p.height() > 2 {
        return Err(Error::Refused(format!(
            "poset has height {}, expected at most 2",
            p.height()
        )));
    }
    let tops = p.top_layer();
    let bottoms = p.bottom_layer();
    if tops.is_empty() {
        return Err(Error::Refused(
            "antichain: the layers cannot be told apart".into(),
        ));
    }
    let g = p.comparability_graph();
    if let Some(v) = (0..p.size()).find(|&v| g.degree(v) == 0) {
        return Err(Error::Refused(format!(
            "element {v} is comparable to nothing, so its layer is ambiguous"
        )));
    }
    let deg = g.degree(tops[0]);
    if tops.iter().any(|&t| g.degree(t) != deg) {
        return Err(Error::Refused(
            "top elements have different numbers of elements below".into(),
        ));
    }
    let part = OrderedPartition::from_cells(p.size(), vec![bottoms, tops])?;
    let a = automorphism_group(&g, &part, cfg)?;
    Ok(PosetReport {
        aut_order: a.order().clone(),
        semiregular: a.is_semiregular(),
        orbit_count: a.orbits().len(),
    })
}

fn pow2(k: usize) -> BigUint {
    BigUint::one() << k
}

/// Number of down-closed subsets of a poset of height at most 2: the sum
/// over sets `X` of top elements of `2^(free bottoms)`, where the bottoms
/// below `X` are forced in.
pub fn count_ideals(p: &Poset) -> Result<BigUint> {
    if p.height() > 2 {
        return Err(Error::Refused(format!(
            "poset has height {}, expected at most 2",
            p.height()
        )));
    }
    let tops = p.top_layer();
    let bottoms = p.bottom_layer();
    if tops.len() > MAX_TOP_LAYER {
        return Err(Error::CapExceeded(format!(
            "top layer of {} exceeds {MAX_TOP_LAYER}",
            tops.len()
        )));
    }
    let mut pos = vec![usize::MAX; p.size()];
    for (i, &b) in bottoms.iter().enumerate() {
        pos[b] = i;
    }
    let words = bottoms.len().div_ceil(64).max(1);
    let below: Vec<Vec<u64>> = tops
        .iter()
        .map(|&t| {
            let mut w = vec![0u64; words];
            for a in p.down_set(t).ones().filter(|&a| a != t) {
                w[pos[a] / 64] |= 1 << (pos[a] % 64);
            }
            w
        })
        .collect();
    let union = |mask: usize, offset: usize, width: usize| {
        let mut w = vec![0u64; words];
        for i in (0..width).filter(|i| mask >> i & 1 == 1) {
            for (x, y) in w.iter_mut().zip(&below[offset + i]) {
                *x |= y;
            }
        }
        w
    };
    let low = tops.len().min(LOW_BITS);
    let high = tops.len() - low;
    let low_unions: Vec<Vec<u64>> = (0..1usize << low).map(|m| union(m, 0, low)).collect();
    // histogram[k]: top subsets forcing exactly k bottoms in.
    let histogram = (0..1usize << high)
        .into_par_iter()
        .map(|hm| {
            let hu = union(hm, low, high);
            let mut hist = vec![0u64; bottoms.len() + 1];
            for lu in &low_unions {
                let forced: u32 = lu.iter().zip(&hu).map(|(a, b)| (a | b).count_ones()).sum();
                hist[forced as usize] += 1;
            }
            hist
        })
        .reduce(
            || vec![0u64; bottoms.len() + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(histogram
        .iter()
        .enumerate()
        .fold(BigUint::zero(), |acc, (k, &c)| {
            acc + BigUint::from(c) * pow2(bottoms.len() - k)
        }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeBound {
    /// Ideals of the poset of `Haar(G, R - S)`.
    #[serde(with = "crate::bignum")]
    pub ideal_count: BigUint,
    /// `floor(2^(3|G|/2))`.
    #[serde(with = "crate::bignum")]
    pub bound: BigUint,
    /// `ideal_count <= 2^(3|G|/2)`, compared exactly; vacuously true when
    /// degenerate.
    pub within: bool,
    /// `R - S` is empty, so the poset is an antichain and the bound is not
    /// claimed.
    pub degenerate: bool,
    pub window: bool,
    /// Every top element has at least `|G|/2 + 3` elements below. Checked
    /// only inside the window.
    pub premise_holds: Option<bool>,
    /// `ideal_count <= 2 + (2^|G| - 1) + (2^|G| - 1) 2^(|G|/2 - 3)`, checked
    /// when the premise holds.
    pub refined_bound_holds: Option<bool>,
}

/// Counts ideals of the two-layer poset on the complement `T = R - S` and
/// compares with `2^(3|G|/2)`.
pub fn lattice_bound_check(g: &FiniteGroup, s: &ConnectionSet) -> Result<LatticeBound> {
    let n = g.order();
    if n > MAX_LATTICE_ORDER {
        return Err(Error::CapExceeded(format!(
            "lattice check is limited to order {MAX_LATTICE_ORDER}, got {n}"
        )));
    }
    let t = s.complement();
    let p = haar_to_poset(&build_haar(g, &t)?);
    let ideal_count = count_ideals(&p)?;
    let cube = pow2(3 * n);
    let bound = cube.sqrt();
    let degenerate = t.is_empty();
    let within = degenerate || &ideal_count * &ideal_count <= cube;
    let window = s.in_window();
    let premise_holds = window.then(|| {
        p.top_layer()
            .iter()
            .all(|&b| 2 * (p.down_set(b).count_ones(..) - 1) >= n + 6)
    });
    let refined_bound_holds = (premise_holds == Some(true)).then(|| {
        // |L| - 2^n - 1 <= (2^n - 1) 2^((n-6)/2), squared to stay exact.
        let base = pow2(n) + BigUint::one();
        if ideal_count <= base {
            return true;
        }
        let excess = &ideal_count - &base;
        let m = pow2(n) - BigUint::one();
        &excess * &excess <= &m * &m * pow2(n - 6)
    });
    Ok(LatticeBound {
        ideal_count,
        bound,
        within,
        degenerate,
        window,
        premise_holds,
        refined_bound_holds,
    })
}
