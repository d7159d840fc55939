//! Orbits of connection sets under translations and group automorphisms.
//!
//! `Haar(R, S)`, `Haar(R, gSh)` and `Haar(R, S^a)` are isomorphic by maps
//! preserving both parts, so one representative per orbit is enough for any
//! question about `Aut` or `Aut0` orders.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{automorphism_generators, FiniteGroup};
use crate::haar::ConnectionSet;
use crate::perm::Perm;

/// Largest order accepted by the exhaustive enumeration (`2^20` subsets).
pub const MAX_EXHAUSTIVE_ORDER: usize = 20;

/// Automorphism lists longer than this are refused.
const AUT_CAP: usize = 200_000;

/// Orbit representative (the smallest mask in the orbit) and orbit size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConnectionClass {
    pub mask: u64,
    pub size: u64,
}

impl ConnectionClass {
    pub fn connection_set(&self, g: &FiniteGroup) -> ConnectionSet {
        ConnectionSet::from_mask(g, self.mask)
    }
}

/// A permutation of `0..n` acting on bit masks through byte lookup tables.
struct MaskMap {
    tables: Vec<[u64; 256]>,
}

impl MaskMap {
    fn new(images: &[usize]) -> Self {
        let chunks = images.len().div_ceil(8);
        let tables = (0..chunks)
            .map(|c| {
                let mut t = [0u64; 256];
                for (byte, slot) in t.iter_mut().enumerate() {
                    for bit in 0..8 {
                        let x = 8 * c + bit;
                        if byte >> bit & 1 == 1 && x < images.len() {
                            *slot |= 1 << images[x];
                        }
                    }
                }
                t
            })
            .collect();
        MaskMap { tables }
    }

    #[inline]
    fn apply(&self, mask: u64) -> u64 {
        self.tables
            .iter()
            .enumerate()
            .fold(0, |acc, (c, t)| acc | t[(mask >> (8 * c) & 0xff) as usize])
    }
}

/// Element permutations generating the equivalence: left and right
/// translations by a generating set, and generators of `Aut(g)`.
pub fn equivalence_generators(g: &FiniteGroup) -> Result<Vec<Perm>> {
    let gens = g.small_generating_set(&g.whole());
    let mut out = Vec::new();
    for &a in &gens {
        out.push(Perm::from_images(
            g.elements().map(|x| g.mul(a, x)).collect(),
        )?);
        out.push(Perm::from_images(
            g.elements().map(|x| g.mul(x, a)).collect(),
        )?);
    }
    let (auts, _) = automorphism_generators(g, AUT_CAP)?;
    out.extend(auts);
    out.retain(|p| !p.is_identity());
    out.dedup();
    Ok(out)
}

/// One representative per orbit of subsets, sorted by mask; orbit sizes sum
/// to `2^|g|`.
pub fn enumerate_connection_classes(g: &FiniteGroup) -> Result<Vec<ConnectionClass>> {
    let n = g.order();
    if n > MAX_EXHAUSTIVE_ORDER {
        return Err(Error::CapExceeded(format!(
            "exhaustive enumeration is limited to order {MAX_EXHAUSTIVE_ORDER}, got {n}"
        )));
    }
    let maps: Vec<MaskMap> = equivalence_generators(g)?
        .iter()
        .map(|p| {
            let images: Vec<usize> = (0..n).map(|x| p.apply(x)).collect();
            MaskMap::new(&images)
        })
        .collect();
    let total = 1usize << n;
    let mut seen = FixedBitSet::with_capacity(total);
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for start in 0..total {
        if seen.contains(start) {
            continue;
        }
        seen.insert(start);
        stack.push(start as u64);
        let mut size = 0;
        while let Some(m) = stack.pop() {
            size += 1;
            for f in &maps {
                let y = f.apply(m) as usize;
                if !seen.contains(y) {
                    seen.insert(y);
                    stack.push(y as u64);
                }
            }
        }
        out.push(ConnectionClass {
            mask: start as u64,
            size,
        });
    }
    Ok(out)
}

/// Image of a subset under `x -> a x b`.
pub fn translate_mask(g: &FiniteGroup, mask: u64, a: usize, b: usize) -> u64 {
    (0..g.order())
        .filter(|&x| mask >> x & 1 == 1)
        .fold(0, |acc, x| acc | 1 << g.mul(g.mul(a, x), b))
}
