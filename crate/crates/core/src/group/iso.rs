use std::collections::BTreeMap;

use super::{Elem, FiniteGroup, GroupHom};
use crate::error::{Error, Result};
use crate::perm::{Perm, StabChain};

/// Isomorphism invariants compared before any search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fingerprint {
    pub order: usize,
    /// Number of elements of each order.
    pub order_profile: BTreeMap<usize, usize>,
    pub center: usize,
    pub derived: usize,
    pub classes: usize,
}

impl Fingerprint {
    pub fn of(g: &FiniteGroup) -> Self {
        let mut order_profile = BTreeMap::new();
        for x in g.elements() {
            *order_profile.entry(g.element_order(x)).or_insert(0) += 1;
        }
        Fingerprint {
            order: g.order(),
            order_profile,
            center: g.center().order(),
            derived: g.derived().order(),
            classes: g.conjugacy_classes().len(),
        }
    }
}

/// Generators of `g` in the order the backtracking assigns them, each with
/// the element order it needs its image to have.
fn search_generators(g: &FiniteGroup) -> Vec<Elem> {
    g.small_generating_set(&g.whole())
}

/// Extends `gens[i] -> images[i]` to a map on `<gens>`. Fails on any
/// inconsistency; the result is then a homomorphism on that subgroup.
fn extend(g: &FiniteGroup, h: &FiniteGroup, gens: &[Elem], images: &[Elem]) -> Option<Vec<Elem>> {
    let mut map = vec![usize::MAX; g.order()];
    map[0] = 0;
    let mut queue = vec![0];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        for (k, &s) in gens.iter().enumerate() {
            let y = g.mul(x, s);
            let img = h.mul(map[x], images[k]);
            if map[y] == usize::MAX {
                map[y] = img;
                queue.push(y);
            } else if map[y] != img {
                return None;
            }
        }
        i += 1;
    }
    // Injectivity on the generated subgroup.
    let mut seen = vec![false; h.order()];
    for &x in &queue {
        if std::mem::replace(&mut seen[map[x]], true) {
            return None;
        }
    }
    Some(map)
}

fn search(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gens: &[Elem],
    candidates: &[Vec<Elem>],
    images: &mut Vec<Elem>,
    visit: &mut dyn FnMut(Vec<Elem>) -> bool,
) -> bool {
    let k = images.len();
    if k == gens.len() {
        let map = extend(g, h, gens, images).expect("checked at the previous level");
        return visit(map);
    }
    for &c in &candidates[k] {
        images.push(c);
        if extend(g, h, &gens[..=k], images).is_some()
            && search(g, h, gens, candidates, images, visit)
        {
            images.pop();
            return true;
        }
        images.pop();
    }
    false
}

fn candidates(g: &FiniteGroup, h: &FiniteGroup, gens: &[Elem]) -> Vec<Vec<Elem>> {
    let class_size = |grp: &FiniteGroup, x: Elem| {
        let mut seen = vec![false; grp.order()];
        grp.elements()
            .filter(|&y| !std::mem::replace(&mut seen[grp.conj(x, y)], true))
            .count()
    };
    gens.iter()
        .map(|&s| {
            let (o, c) = (g.element_order(s), class_size(g, s));
            h.elements()
                .filter(|&y| h.element_order(y) == o && class_size(h, y) == c)
                .collect()
        })
        .collect()
}

/// An isomorphism `g -> h`, if one exists.
pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Option<GroupHom> {
    if g.order() != h.order() || Fingerprint::of(g) != Fingerprint::of(h) {
        return None;
    }
    let gens = search_generators(g);
    let cands = candidates(g, h, &gens);
    let mut found = None;
    let mut images = Vec::new();
    search(g, h, &gens, &cands, &mut images, &mut |map| {
        found = Some(map);
        true
    });
    found.map(|image| GroupHom {
        source_order: g.order(),
        target_order: h.order(),
        image,
    })
}

pub fn is_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> bool {
    find_isomorphism(g, h).is_some()
}

/// Every automorphism of `g`. Fails past `cap` automorphisms.
pub fn automorphisms(g: &FiniteGroup, cap: usize) -> Result<Vec<GroupHom>> {
    let gens = search_generators(g);
    let cands = candidates(g, g, &gens);
    let mut out = Vec::new();
    let mut overflow = false;
    let mut images = Vec::new();
    search(g, g, &gens, &cands, &mut images, &mut |map| {
        if out.len() >= cap {
            overflow = true;
            return true;
        }
        out.push(GroupHom {
            source_order: g.order(),
            target_order: g.order(),
            image: map,
        });
        false
    });
    if overflow {
        return Err(Error::CapExceeded(format!("more than {cap} automorphisms")));
    }
    Ok(out)
}

/// A generating set of `Aut(g)` as permutations of the elements, with the
/// group order. Enumerates automorphisms, so it is meant for small groups.
pub fn automorphism_generators(g: &FiniteGroup, cap: usize) -> Result<(Vec<Perm>, u128)> {
    let all = automorphisms(g, cap)?;
    let n = g.order();
    let mut gens: Vec<Perm> = Vec::new();
    let mut chain = StabChain::trivial(n);
    for a in &all {
        let p = Perm::from_images_unchecked(a.image.iter().map(|&x| x as u32).collect());
        if !chain.contains(&p) {
            gens.push(p);
            chain = StabChain::schreier_sims(n, &gens, &[]);
            if chain.order_u128() == Some(all.len() as u128) {
                break;
            }
        }
    }
    Ok((gens, all.len() as u128))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupSpec;

    fn build(s: &str) -> FiniteGroup {
        GroupSpec::parse(s).unwrap().build().unwrap()
    }

    #[test]
    fn negative_examples() {
        assert!(!is_isomorphic(&build("C4"), &build("C2^2")));
        assert!(!is_isomorphic(&build("D8"), &build("Q8")));
    }

    #[test]
    fn dicyclic_twelve_two_ways() {
        let pres = build("Dic12");
        let semi = GroupSpec::Semidirect { m: 3, k: 4, e: 2 }.build().unwrap();
        let iso = find_isomorphism(&pres, &semi).unwrap();
        assert!(iso.is_homomorphism(&pres, &semi));
        assert!(iso.is_bijective());
        assert!(!is_isomorphic(&pres, &build("D12")));
        assert!(!is_isomorphic(&pres, &build("Alt4")));
    }

    #[test]
    fn dihedral_six_is_sym3() {
        assert!(is_isomorphic(&build("D6"), &build("Sym3")));
        assert!(is_isomorphic(&build("C6"), &build("C3xC2")));
    }

    #[test]
    fn automorphism_counts() {
        // |Aut(C12)| = 4, |Aut(D8)| = 8, |Aut(Q8)| = 24, |Aut(C2^3)| = 168, |Aut(Alt4)| = 24.
        for (name, n) in [
            ("C12", 4),
            ("D8", 8),
            ("Q8", 24),
            ("C2^3", 168),
            ("Alt4", 24),
        ] {
            let g = build(name);
            let auts = automorphisms(&g, 100_000).unwrap();
            assert_eq!(auts.len(), n, "{name}");
            assert!(auts
                .iter()
                .all(|a| a.is_homomorphism(&g, &g) && a.is_bijective()));
            let (gens, order) = automorphism_generators(&g, 100_000).unwrap();
            assert_eq!(order, n as u128);
            assert_eq!(
                StabChain::schreier_sims(g.order(), &gens, &[]).order_u128(),
                Some(n as u128)
            );
        }
    }

    #[test]
    fn automorphism_cap() {
        assert!(automorphisms(&build("C2^4"), 100).is_err());
    }
}
