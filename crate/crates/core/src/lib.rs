pub mod aut;
pub mod bignum;
pub mod classify;
pub mod construct;
pub mod error;
pub mod graph;
pub mod group;
pub mod haar;
pub mod perm;
pub mod poset;

pub use aut::{
    aut, aut0, automorphism_group, cayley_check, find_regular_subgroup, induced_group_automorphism,
    is_hgr, point_stabilizer, refine, CayleyVerdict, HgrCheck, OrderedPartition,
    PermGroupDescriptor, SearchConfig,
};
pub use error::{Error, Reason, Result};
pub use graph::Graph;
pub use group::{FiniteGroup, GroupHom, GroupSpec, Subgroup};
pub use haar::{build_haar, ConnectionSet, HaarGraph};
pub use perm::{Perm, StabChain, VertexPermutation};
pub use poset::{
    count_ideals, haar_to_poset, lattice_bound_check, poset_representation_report, Poset,
};
