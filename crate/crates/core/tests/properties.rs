//! Randomised and exhaustive invariants across the public API.

mod common;

use std::sync::OnceLock;

use haar_core::aut::check_haar;
use haar_core::classify::{
    class_outcomes, classify_group, enumerate_connection_classes, translate_mask, witness_set,
    ClassifyOptions,
};
use haar_core::construct::{
    construct_hgr, cyclic_connection, lift_cyclic_quotient, verify_certificate, ConstructOptions,
    HgrCertificate, Method, Variant,
};
use haar_core::group::catalog::{catalog, lookup};
use haar_core::group::{automorphisms, is_isomorphic};
use haar_core::haar::{bipartite_complement, is_connected_connection, rho};
use haar_core::{
    aut, aut0, build_haar, haar_to_poset, point_stabilizer, poset_representation_report,
    ConnectionSet, FiniteGroup, Perm, SearchConfig,
};
use num_bigint::BigUint;
use proptest::prelude::*;

fn cfg() -> SearchConfig {
    SearchConfig::default()
}

fn big(n: usize) -> BigUint {
    BigUint::from(n)
}

fn small_groups() -> &'static [FiniteGroup] {
    static GROUPS: OnceLock<Vec<FiniteGroup>> = OnceLock::new();
    GROUPS.get_or_init(|| {
        catalog()
            .iter()
            .filter(|e| e.order <= 16)
            .map(|e| e.build().unwrap())
            .collect()
    })
}

fn groups_up_to(max: usize) -> impl Iterator<Item = &'static FiniteGroup> {
    small_groups().iter().filter(move |g| g.order() <= max)
}

/// A catalog group of order at most `max` and a subset of it.
fn group_and_set(max: usize) -> impl Strategy<Value = (&'static FiniteGroup, ConnectionSet)> {
    let count = groups_up_to(max).count();
    (0..count, any::<u64>()).prop_map(move |(i, bits)| {
        let g = groups_up_to(max).nth(i).unwrap();
        let mask = bits & ((1u64 << g.order()) - 1);
        (g, ConnectionSet::from_mask(g, mask))
    })
}

/// `(x, -1) -> (h^-1 x, -1)` and `(y, 1) -> (g y, 1)`, which carries
/// `Haar(S)` onto `Haar(gSh)`.
fn translation_iso(grp: &FiniteGroup, g: usize, h: usize) -> Perm {
    let n = grp.order();
    let hi = grp.inv(h);
    let images = (0..n)
        .map(|x| grp.mul(hi, x))
        .chain((0..n).map(|y| n + grp.mul(g, y)))
        .collect();
    Perm::from_images(images).unwrap()
}

/// Vertex of `(x, eps)`.
fn vertex(n: usize, x: usize, eps: i8) -> usize {
    if eps < 0 {
        x
    } else {
        n + x
    }
}

// Group layer.

#[test]
fn catalog_groups_are_valid() {
    for e in catalog().iter().filter(|e| e.order <= 64) {
        let g = e.build().unwrap();
        g.validate().unwrap();
        assert_eq!(g.order(), e.order, "{}", e.name);
        for a in g.elements() {
            assert_eq!(g.order() % g.element_order(a), 0, "{} {a}", e.name);
            assert_eq!(g.mul(a, g.inv(a)), g.identity());
        }
    }
}

#[test]
fn simple_quotient_projections_have_exact_kernels() {
    for e in catalog().iter().filter(|e| (2..=64).contains(&e.order)) {
        let g = e.build().unwrap();
        for sq in g.normal_subgroups_with_simple_quotient().unwrap() {
            let p = &sq.projection;
            assert!(p.is_homomorphism(&g, &sq.quotient), "{}", e.name);
            assert!(p.is_surjective(), "{}", e.name);
            assert_eq!(p.kernel(&g), sq.normal, "{}", e.name);
            assert_eq!(sq.quotient.order() * sq.normal.order(), g.order());
        }
    }
}

#[test]
fn isomorphism_is_reflexive_and_symmetric() {
    let gs: Vec<&FiniteGroup> = groups_up_to(12).collect();
    for a in &gs {
        assert!(is_isomorphic(a, a), "{}", a.name());
        for b in gs.iter().filter(|b| b.order() == a.order()) {
            assert_eq!(is_isomorphic(a, b), is_isomorphic(b, a));
        }
    }
}

// Automorphism layer.

#[test]
fn disconnection_forces_extra_symmetry() {
    for g in groups_up_to(8).filter(|g| g.order() >= 3) {
        for o in class_outcomes(g, &cfg()).unwrap() {
            let s = ConnectionSet::from_mask(g, o.mask);
            let disconnected = !is_connected_connection(g, &s)
                || !is_connected_connection(g, &bipartite_complement(g, &s));
            if disconnected {
                let c = o.check.unwrap();
                assert!(c.aut0_order > big(g.order()), "{} {:#x}", g.name(), o.mask);
            }
        }
    }
}

#[test]
fn generators_repeat_exactly() {
    let g = lookup("Sym4").unwrap();
    let s = ConnectionSet::from_mask(&g, 0b1000_0110_1011);
    let h = build_haar(&g, &s).unwrap();
    let a = aut(&h, &cfg()).unwrap();
    let b = aut(&h, &cfg()).unwrap();
    assert_eq!(a.generators(), b.generators());
    assert_eq!(a.base(), b.base());
}

/// Stabilisers of `(1,-1)` and `(1,1)` fixing all their neighbours forces
/// the part-preserving group down to the translations.
fn check_stabiliser_rigidity(g: &FiniteGroup, s: &ConnectionSet) {
    let h = build_haar(g, s).unwrap();
    if !h.is_connected() {
        return;
    }
    let n = g.order();
    let a = aut(&h, &cfg()).unwrap();
    let low = point_stabilizer(&a, vertex(n, 0, -1)).unwrap();
    let high = point_stabilizer(&a, vertex(n, 0, 1)).unwrap();
    let fixes_all = |p: &haar_core::PermGroupDescriptor, vs: Vec<usize>| {
        p.generators()
            .iter()
            .all(|x| vs.iter().all(|&v| x.fixes(v)))
    };
    let up: Vec<usize> = s.elements().iter().map(|&x| vertex(n, x, 1)).collect();
    let down: Vec<usize> = s
        .elements()
        .iter()
        .map(|&x| vertex(n, g.inv(x), -1))
        .collect();
    if fixes_all(&low, up) && fixes_all(&high, down) {
        let a0 = aut0(&h, &cfg()).unwrap();
        assert_eq!(a0.order(), &big(n), "{} {:?}", g.name(), s.elements());
    }
}

#[test]
fn stabilisers_fixing_neighbours_imply_rigidity() {
    for g in groups_up_to(10) {
        for c in enumerate_connection_classes(g).unwrap() {
            check_stabiliser_rigidity(g, &c.connection_set(g));
        }
    }
    for cert in certificates() {
        let g = lookup(&cert.group).unwrap();
        check_stabiliser_rigidity(&g, &cert.connection(&g).unwrap());
    }
}

// Construction layer.

fn certificates() -> &'static [HgrCertificate] {
    static CERTS: OnceLock<Vec<HgrCertificate>> = OnceLock::new();
    CERTS.get_or_init(|| {
        catalog()
            .iter()
            .filter(|e| (21..=32).contains(&e.order))
            .map(|e| construct_hgr(&e.build().unwrap(), &ConstructOptions::default()).unwrap())
            .collect()
    })
}

#[test]
fn certificates_recompute_and_repeat() {
    for cert in certificates() {
        let g = lookup(&cert.group).unwrap();
        let check = verify_certificate(&g, cert, &cfg()).unwrap();
        assert!(check.valid, "{}: {:?}", cert.group, check.mismatches);
        let again = construct_hgr(&g, &ConstructOptions::default()).unwrap();
        assert_eq!(&again, cert);
    }
}

#[test]
fn lifted_methods_stay_in_window() {
    for cert in certificates() {
        let windowed = match cert.method {
            Method::Cyclic => cert.order >= 22,
            Method::LiftCyclicS1
            | Method::LiftCyclicS2
            | Method::LiftSimple
            | Method::AbelianIndex2 => true,
            _ => false,
        };
        if windowed {
            assert!(cert.window, "{} via {}", cert.group, cert.method.as_str());
        }
    }
}

#[test]
fn lift_swaps_send_r_to_its_inverse() {
    let cases = [
        ("C44", 2, Variant::S2),
        ("C66", 3, Variant::S1),
        ("D44", 2, Variant::S2),
    ];
    let mut swaps_seen = 0;
    for (name, k, variant) in cases {
        let g = lookup(name).unwrap();
        let n = g.order();
        // N is cyclic of index k; r generates G modulo N.
        let (x, r) = match g.cyclic_generator() {
            Some(c) => (g.pow(c, k as i64), c),
            None => {
                let x = g.elements().find(|&a| g.element_order(a) == n / k).unwrap();
                let sub = g.closure([x]);
                (x, g.elements().find(|&a| !sub.contains(a)).unwrap())
            }
        };
        let sub = g.closure([x]);
        let s_n = cyclic_connection(&g, x).unwrap();
        let s = lift_cyclic_quotient(&g, &sub, &s_n, r, variant).unwrap();
        let h = build_haar(&g, &s).unwrap();
        let a = aut(&h, &cfg()).unwrap();
        let a0 = aut0(&h, &cfg()).unwrap();
        assert_eq!(a0.order(), &big(n), "{name}");
        if a.order() != &big(2 * n) {
            continue;
        }
        swaps_seen += 1;
        let swap = a
            .elements()
            .into_iter()
            .find(|p| p.apply(vertex(n, 0, -1)) == vertex(n, 0, 1))
            .unwrap();
        assert_eq!(
            swap.apply(vertex(n, r, 1)),
            vertex(n, g.inv(r), -1),
            "{name}"
        );
    }
    assert!(swaps_seen > 0);
}

// Classification layer.

#[test]
fn complements_share_part_preserving_groups() {
    for g in groups_up_to(10) {
        for o in class_outcomes(g, &cfg()).unwrap() {
            let s = ConnectionSet::from_mask(g, o.mask);
            let c = check_haar(
                &build_haar(g, &bipartite_complement(g, &s)).unwrap(),
                &cfg(),
            )
            .unwrap();
            assert_eq!(o.check.unwrap().aut0_order, c.aut0_order, "{}", g.name());
        }
    }
}

#[test]
fn abelian_groups_never_reach_regular_automorphisms() {
    for g in groups_up_to(12).filter(|g| g.is_abelian() && g.order() >= 3) {
        for o in class_outcomes(g, &cfg()).unwrap() {
            assert_ne!(o.check.unwrap().aut_order, big(g.order()), "{}", g.name());
        }
    }
}

#[test]
fn witnesses_survive_json() {
    let opts = ClassifyOptions {
        cayley: true,
        ..ClassifyOptions::default()
    };
    let mut seen = 0;
    for name in ["Alt4", "D12", "Dic12", "D10", "Q8"] {
        let g = lookup(name).unwrap();
        let report = classify_group(&g, &opts).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: serde_json::Value = serde_json::from_str(&json).unwrap();
        for (key, want_rigid) in [("rigid_witness", true), ("non_cayley_witness", false)] {
            let Some(w) = back[key].as_array() else {
                continue;
            };
            let elems: Vec<usize> = w.iter().map(|v| v.as_u64().unwrap() as usize).collect();
            let s = witness_set(&g, &elems).unwrap();
            let c = check_haar(&build_haar(&g, &s).unwrap(), &cfg()).unwrap();
            if want_rigid {
                assert!(c.is_rigid(g.order()), "{name}");
            } else {
                assert!(!c.is_rigid(g.order()), "{name}");
            }
            seen += 1;
        }
    }
    assert!(seen >= 3);
}

// Poset layer.

#[test]
fn rigid_certificates_give_semiregular_two_orbit_posets() {
    for cert in certificates().iter().filter(|c| c.is_rigid()) {
        let g = lookup(&cert.group).unwrap();
        let h = build_haar(&g, &cert.connection(&g).unwrap()).unwrap();
        if !h.is_connected() {
            continue;
        }
        let p = haar_to_poset(&h);
        let r = poset_representation_report(&p, &cfg()).unwrap();
        assert!(r.semiregular, "{}", cert.group);
        assert_eq!(r.orbit_count, 2, "{}", cert.group);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn connectivity_matches_search((g, s) in group_and_set(16)) {
        let h = build_haar(g, &s).unwrap();
        prop_assert_eq!(is_connected_connection(g, &s), h.graph().is_connected());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn haar_graphs_are_regular((g, s) in group_and_set(16)) {
        let h = build_haar(g, &s).unwrap();
        let graph = h.graph();
        prop_assert!((0..graph.order()).all(|v| graph.degree(v) == s.len()));
        prop_assert_eq!(graph.edge_count(), g.order() * s.len());
    }

    #[test]
    fn right_translations_are_automorphisms((g, s) in group_and_set(16)) {
        let graph = build_haar(g, &s).unwrap().graph().clone();
        for a in g.elements().take(20) {
            prop_assert!(graph.is_automorphism(&rho(g, a)));
        }
    }

    #[test]
    fn two_sided_translations_are_isomorphisms(
        (g, s) in group_and_set(12),
        a in any::<prop::sample::Index>(),
        b in any::<prop::sample::Index>(),
    ) {
        let (a, b) = (a.index(g.order()), b.index(g.order()));
        let t = s.translate(g, a, b);
        if let Some(m) = s.to_mask() {
            prop_assert_eq!(t.to_mask(), Some(translate_mask(g, m, a, b)));
        }
        let src = build_haar(g, &s).unwrap();
        let dst = build_haar(g, &t).unwrap();
        prop_assert!(src.graph().is_isomorphism_to(dst.graph(), &translation_iso(g, a, b)));
        let (c, d) = (check_haar(&src, &cfg()).unwrap(), check_haar(&dst, &cfg()).unwrap());
        prop_assert_eq!(c, d);
    }

    #[test]
    fn group_automorphisms_are_isomorphisms(
        (g, s) in group_and_set(10),
        pick in any::<prop::sample::Index>(),
    ) {
        let autos = automorphisms(g, 10_000).unwrap();
        let alpha = &autos[pick.index(autos.len())];
        let image: Vec<usize> = g.elements().map(|x| alpha.apply(x)).collect();
        let t = s.map(g, &image);
        let n = g.order();
        let iso = Perm::from_images(
            (0..2 * n).map(|v| if v < n { image[v] } else { n + image[v - n] }).collect(),
        )
        .unwrap();
        let src = build_haar(g, &s).unwrap();
        let dst = build_haar(g, &t).unwrap();
        prop_assert!(src.graph().is_isomorphism_to(dst.graph(), &iso));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn translations_sit_inside_part_preserving_group((g, s) in group_and_set(12)) {
        let h = build_haar(g, &s).unwrap();
        let a = aut(&h, &cfg()).unwrap();
        let a0 = aut0(&h, &cfg()).unwrap();
        for x in g.elements() {
            prop_assert!(a0.contains(&rho(g, x)));
        }
        for p in a0.generators() {
            prop_assert!(a.contains(p));
        }
        prop_assert_eq!(a.order() % a0.order(), BigUint::from(0u8));
        if h.is_connected() {
            let index = a.order() / a0.order();
            prop_assert!(index == big(1) || index == big(2));
        }
    }

    #[test]
    fn orbit_times_stabiliser_is_order(
        (g, s) in group_and_set(12),
        v in any::<prop::sample::Index>(),
    ) {
        let h = build_haar(g, &s).unwrap();
        let a = aut(&h, &cfg()).unwrap();
        let v = v.index(2 * g.order());
        let orbit = a.orbits().into_iter().find(|o| o.contains(&v)).unwrap();
        let stab = point_stabilizer(&a, v).unwrap();
        prop_assert_eq!(a.order(), &(stab.order() * big(orbit.len())));
        if g.order() <= 8 {
            let oracle = common::orbit(h.graph(), &vec![0; 2 * g.order()], &[], v);
            prop_assert_eq!(oracle.len(), orbit.len());
        }
    }

    #[test]
    fn haar_posets_are_partial_orders((g, s) in group_and_set(16)) {
        let p = haar_to_poset(&build_haar(g, &s).unwrap());
        prop_assert!(p.is_partial_order());
        let m = p.size();
        for a in 0..m {
            for b in 0..m {
                if a != b && p.le(a, b) {
                    prop_assert!(!p.le(b, a));
                    for c in 0..m {
                        if p.le(b, c) {
                            prop_assert!(p.le(a, c));
                        }
                    }
                }
            }
        }
    }
}
