//! Fixed inputs shared by the benchmarks.

use haar_core::construct::{construct_hgr, cyclic_connection, ConstructOptions};
use haar_core::group::catalog::lookup;
use haar_core::{build_haar, ConnectionSet, FiniteGroup, HaarGraph};

/// The cyclic rigid set on `C<n>`.
pub fn cyclic_haar(n: usize) -> HaarGraph {
    let g = lookup(&format!("C{n}")).expect("cyclic group");
    let s = cyclic_connection(&g, g.cyclic_generator().unwrap()).expect("order >= 12");
    build_haar(&g, &s).unwrap()
}

/// The group named `name` with the connection set the driver picks for it.
pub fn constructed(name: &str) -> (FiniteGroup, ConnectionSet) {
    let g = lookup(name).expect("catalog group");
    let cert = construct_hgr(&g, &ConstructOptions::default()).unwrap();
    let s = cert.connection(&g).unwrap();
    (g, s)
}
