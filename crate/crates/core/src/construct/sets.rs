//! Explicit connection sets with small automorphism groups.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Reason, Result};
use crate::group::{Elem, FiniteGroup, Subgroup};
use crate::haar::{in_window, ConnectionSet};

/// Smallest element order accepted by the power-based sets.
pub const MIN_ORDER: usize = 12;

/// Which of the two sets a two-set construction returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    S1,
    S2,
}

fn pre<T>(op: &'static str, reason: Reason) -> Result<T> {
    Err(Error::pre(op, reason))
}

/// `{s^0, ..., s^6, s^8}` as elements.
fn power_set(g: &FiniteGroup, s: Elem) -> Vec<Elem> {
    [0, 1, 2, 3, 4, 5, 6, 8]
        .iter()
        .map(|&i| g.pow(s, i))
        .collect()
}

/// `{s^0, ..., s^6, s^8}`; translations are the only part-preserving
/// automorphisms of its Haar graph over `<s>`.
pub fn cyclic_connection(g: &FiniteGroup, s: Elem) -> Result<ConnectionSet> {
    g.check_elem(s)?;
    let order = g.element_order(s);
    if order < MIN_ORDER {
        return pre(
            "cyclic_connection",
            Reason::ElementOrderTooSmall {
                order,
                min: MIN_ORDER,
            },
        );
    }
    ConnectionSet::new(g, power_set(g, s))
}

/// Whether `g` is dihedral with rotation `s` and reflection `t`.
pub fn is_dihedral_pair(g: &FiniteGroup, s: Elem, t: Elem) -> bool {
    g.order() == 2 * g.element_order(s)
        && g.element_order(t) == 2
        && g.conj(s, t) == g.inv(s)
        && g.generates(&[s, t])
}

/// A rotation and reflection when `g` is dihedral of order at least 6.
pub fn dihedral_pair(g: &FiniteGroup) -> Option<(Elem, Elem)> {
    let n = g.order();
    if n < 6 || n % 2 == 1 || g.is_abelian() {
        return None;
    }
    let s = g.elements().find(|&s| g.element_order(s) == n / 2)?;
    let t = g.elements().find(|&t| is_dihedral_pair(g, s, t))?;
    Some((s, t))
}

/// `S1 = {s^0..s^6, s^8, t, ts}` or `S2 = S1 + {ts^3}`.
pub fn twogen_connection(
    g: &FiniteGroup,
    s: Elem,
    t: Elem,
    variant: Variant,
) -> Result<ConnectionSet> {
    const OP: &str = "twogen_connection";
    g.check_elem(s)?;
    g.check_elem(t)?;
    if !g.generates(&[s, t]) {
        return pre(OP, Reason::NotGenerating);
    }
    let order = g.element_order(s);
    if order < MIN_ORDER {
        return pre(
            OP,
            Reason::ElementOrderTooSmall {
                order,
                min: MIN_ORDER,
            },
        );
    }
    let st = g.conj(s, t);
    if st == s {
        return pre(OP, Reason::Commuting);
    }
    match variant {
        Variant::S1 if st == g.inv(s) => return pre(OP, Reason::Inverting),
        Variant::S2 if !is_dihedral_pair(g, s, t) => return pre(OP, Reason::NotDihedral),
        _ => {}
    }
    let mut elems = power_set(g, s);
    elems.push(t);
    elems.push(g.mul(t, s));
    if variant == Variant::S2 {
        elems.push(g.mul(t, g.pow(s, 3)));
    }
    ConnectionSet::new(g, elems)
}

/// A pair `(s, t)` generating `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GeneratingPair {
    pub s: Elem,
    pub t: Elem,
    /// `s^t = s^-1`.
    pub inverting: bool,
}

/// The first generating pair with `o(s) >= min_order` and `s^t != s`,
/// scanning `s` by decreasing order then index and `t` by index. Pairs with
/// `s^t != s^-1` are preferred; an inverting pair is returned only when no
/// other exists.
pub fn find_generating_pair_high_order(
    g: &FiniteGroup,
    min_order: usize,
) -> Option<GeneratingPair> {
    if g.max_element_order() < min_order || g.is_abelian() {
        return None;
    }
    let mut ss: Vec<Elem> = g
        .elements()
        .filter(|&s| g.element_order(s) >= min_order)
        .collect();
    ss.sort_by_key(|&s| (std::cmp::Reverse(g.element_order(s)), s));
    let mut inverting = None;
    for &s in &ss {
        let cyclic = g.closure([s]);
        for t in g.elements() {
            if cyclic.contains(t) {
                continue;
            }
            let st = g.conj(s, t);
            if st == s {
                continue;
            }
            let inv = st == g.inv(s);
            if inv && inverting.is_some() {
                continue;
            }
            if !g.generates(&[s, t]) {
                continue;
            }
            if !inv {
                return Some(GeneratingPair {
                    s,
                    t,
                    inverting: false,
                });
            }
            inverting = Some(GeneratingPair {
                s,
                t,
                inverting: true,
            });
        }
    }
    inverting
}

fn check_window(op: &'static str, s: &ConnectionSet, sub: &Subgroup) -> Result<()> {
    if !s.elements().iter().all(|&x| sub.contains(x)) {
        return pre(op, Reason::NotInSubgroup);
    }
    if !in_window(s.len(), sub.order()) {
        return pre(
            op,
            Reason::Window {
                size: s.len(),
                order: sub.order(),
            },
        );
    }
    Ok(())
}

/// Lift through a cyclic quotient `G/N = <Nr>`:
/// `S1 = S_N + (Nr - {r})` and `S2 = G - S1`. `s_n` must be a windowed
/// connection set of `N` whose Haar graph has only translations as
/// part-preserving automorphisms; that last condition is the caller's.
pub fn lift_cyclic_quotient(
    g: &FiniteGroup,
    n: &Subgroup,
    s_n: &ConnectionSet,
    r: Elem,
    variant: Variant,
) -> Result<ConnectionSet> {
    const OP: &str = "lift_cyclic_quotient";
    g.check_subgroup(n)?;
    g.check_elem(r)?;
    if s_n.group_order() != g.order() {
        return Err(Error::MismatchedGroup {
            expected: g.order(),
            found: s_n.group_order(),
        });
    }
    if !g.is_normal(n) {
        return pre(OP, Reason::NotNormal);
    }
    if n.contains(r) {
        return pre(OP, Reason::InSubgroup);
    }
    if g.join(n, [r]).order() != g.order() {
        return pre(OP, Reason::NotGenerating);
    }
    check_window(OP, s_n, n)?;
    let index = n.index_in(g);
    match variant {
        Variant::S1 if index < 3 => {
            return pre(
                OP,
                Reason::IndexMismatch {
                    index,
                    expected: ">= 3",
                },
            )
        }
        Variant::S2 if index != 2 => {
            return pre(
                OP,
                Reason::IndexMismatch {
                    index,
                    expected: "= 2",
                },
            )
        }
        _ => {}
    }
    let mut s1 = s_n.clone();
    for x in n.right_coset(g, r) {
        if x != r {
            s1.insert(x);
        }
    }
    Ok(match variant {
        Variant::S1 => s1,
        Variant::S2 => s1.complement(),
    })
}

/// Lift through a nonabelian simple quotient:
/// `S_N + (N r2^-1 - {r2^-1}) + (N r2 - {r2, n1 r2}) + {r1, r2 r1}`.
pub fn lift_simple_quotient(
    g: &FiniteGroup,
    n: &Subgroup,
    s_n: &ConnectionSet,
    r1: Elem,
    r2: Elem,
    n1: Elem,
) -> Result<ConnectionSet> {
    const OP: &str = "lift_simple_quotient";
    g.check_subgroup(n)?;
    for x in [r1, r2, n1] {
        g.check_elem(x)?;
    }
    if s_n.group_order() != g.order() {
        return Err(Error::MismatchedGroup {
            expected: g.order(),
            found: s_n.group_order(),
        });
    }
    if !g.is_normal(n) {
        return pre(OP, Reason::NotNormal);
    }
    let (quotient, proj) = g.quotient(n)?;
    if quotient.is_abelian() {
        return pre(OP, Reason::QuotientAbelian);
    }
    if !quotient.is_simple() {
        return pre(OP, Reason::QuotientNotSimple);
    }
    if g.join(n, [r1, r2]).order() != g.order() {
        return pre(OP, Reason::NotGenerating);
    }
    let order = quotient.element_order(proj.apply(r2));
    if order < 5 {
        return pre(OP, Reason::QuotientOrderTooSmall { order });
    }
    if n1 == g.identity() {
        return pre(OP, Reason::TrivialElement);
    }
    if !n.contains(n1) {
        return pre(OP, Reason::NotInSubgroup);
    }
    check_window(OP, s_n, n)?;
    let r2i = g.inv(r2);
    let r2r1 = g.mul(r2, r1);
    let mut cosets: Vec<Elem> = [g.identity(), r1, r2, r2i, r2r1]
        .iter()
        .map(|&x| proj.apply(x))
        .collect();
    cosets.sort_unstable();
    cosets.dedup();
    if cosets.len() != 5 {
        return pre(OP, Reason::CosetCollision);
    }
    let mut s = s_n.clone();
    for x in n.right_coset(g, r2i) {
        if x != r2i {
            s.insert(x);
        }
    }
    let n1r2 = g.mul(n1, r2);
    for x in n.right_coset(g, r2) {
        if x != r2 && x != n1r2 {
            s.insert(x);
        }
    }
    s.insert(r1);
    s.insert(r2r1);
    Ok(s)
}

/// Outcome of the subgroup search for the abelian index-2 lift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Index2Data {
    Triple {
        n1_sub: Subgroup,
        n1: Elem,
        n2: Elem,
    },
    /// Dihedral of order `2p`, `p` prime.
    DihedralTwoP,
    /// Dihedral or quaternion of order 8.
    Order8,
}

impl Index2Data {
    pub fn tag(&self) -> &'static str {
        match self {
            Index2Data::Triple { .. } => "triple",
            Index2Data::DihedralTwoP => "dihedral-2p",
            Index2Data::Order8 => "order-8-dihedral-or-quaternion",
        }
    }
}

fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// `r n2 r^-1 n2^-1`.
fn twist(g: &FiniteGroup, r: Elem, n2: Elem) -> Elem {
    g.mul(g.mul(g.mul(r, n2), g.inv(r)), g.inv(n2))
}

/// Checks the conditions the abelian index-2 lift needs of `(N1, n1, n2)`.
pub fn check_index2_triple(
    g: &FiniteGroup,
    n: &Subgroup,
    n1_sub: &Subgroup,
    n1: Elem,
    n2: Elem,
    r: Elem,
) -> Result<()> {
    let bad = |what| pre("index2_data", Reason::Index2Invariant(what));
    if !n1_sub.is_subset(n) || n1_sub.order() == n.order() {
        return bad("N1 is not a proper subgroup of N");
    }
    if !n.contains(n2) || n1_sub.contains(n2) {
        return bad("n2 is not in N - N1");
    }
    if n1 == g.identity() || !n1_sub.contains(n1) {
        return bad("n1 is not in N1 - {1}");
    }
    if g.join(n1_sub, [n2]).order() != n.order() {
        return bad("N1 and n2 do not generate N");
    }
    let c = twist(g, r, n2);
    if c == g.identity() || c == n1 {
        return bad("r n2 r^-1 n2^-1 lies in {1, n1}");
    }
    Ok(())
}

/// Data for the abelian index-2 lift. Exceptional groups are reported
/// first; otherwise maximal subgroups `N1` of `N` are tried largest first,
/// with `n2` the first element of `N - N1` not commuting with `r` and `n1`
/// the first element of `N1 - {1}` other than `r n2 r^-1 n2^-1`.
pub fn index2_data(g: &FiniteGroup, n: &Subgroup, r: Elem) -> Result<Index2Data> {
    const OP: &str = "index2_data";
    g.check_subgroup(n)?;
    g.check_elem(r)?;
    if g.is_abelian() {
        return pre(OP, Reason::GroupIsAbelian);
    }
    if !n.is_abelian(g) {
        return pre(OP, Reason::NotAbelian);
    }
    let index = n.index_in(g);
    if index != 2 {
        return pre(
            OP,
            Reason::IndexMismatch {
                index,
                expected: "= 2",
            },
        );
    }
    if n.contains(r) {
        return pre(OP, Reason::InSubgroup);
    }
    if g.order() == 8 {
        return Ok(Index2Data::Order8);
    }
    if is_prime(g.order() / 2) && dihedral_pair(g).is_some() {
        return Ok(Index2Data::DihedralTwoP);
    }
    let (sub, embed) = g.subgroup_as_group(n, "N")?;
    for m in sub.maximal_subgroups(usize::MAX)? {
        let n1_sub = g.subgroup_from_elements(m.elements().into_iter().map(|x| embed[x]))?;
        let Some(n2) = n
            .elements()
            .into_iter()
            .find(|&x| !n1_sub.contains(x) && twist(g, r, x) != g.identity())
        else {
            continue;
        };
        let c = twist(g, r, n2);
        let Some(n1) = n1_sub
            .elements()
            .into_iter()
            .find(|&x| x != g.identity() && x != c)
        else {
            continue;
        };
        check_index2_triple(g, n, &n1_sub, n1, n2, r)?;
        return Ok(Index2Data::Triple { n1_sub, n1, n2 });
    }
    pre(
        OP,
        Reason::Index2Invariant("no maximal subgroup of N gives a valid triple"),
    )
}

/// `S_N1 + (n2 N1 - {n2}) + {r, n2 r, n1 n2 r}` for `G` with an abelian
/// subgroup `N` of index 2.
#[allow(clippy::too_many_arguments)]
pub fn abelian_index2_connection(
    g: &FiniteGroup,
    n: &Subgroup,
    n1_sub: &Subgroup,
    n1: Elem,
    n2: Elem,
    r: Elem,
    s_n1: &ConnectionSet,
) -> Result<ConnectionSet> {
    const OP: &str = "abelian_index2_connection";
    g.check_subgroup(n)?;
    g.check_subgroup(n1_sub)?;
    for x in [n1, n2, r] {
        g.check_elem(x)?;
    }
    if s_n1.group_order() != g.order() {
        return Err(Error::MismatchedGroup {
            expected: g.order(),
            found: s_n1.group_order(),
        });
    }
    match index2_data(g, n, r)? {
        Index2Data::Order8 => {
            return pre(
                OP,
                Reason::ExcludedGroup("dihedral or quaternion of order 8"),
            )
        }
        Index2Data::DihedralTwoP => return pre(OP, Reason::ExcludedGroup("dihedral of order 2p")),
        Index2Data::Triple { .. } => {}
    }
    check_index2_triple(g, n, n1_sub, n1, n2, r)?;
    check_window(OP, s_n1, n1_sub)?;
    let mut s = s_n1.clone();
    for x in n1_sub.left_coset(g, n2) {
        if x != n2 {
            s.insert(x);
        }
    }
    let n2r = g.mul(n2, r);
    for x in [r, n2r, g.mul(n1, n2r)] {
        s.insert(x);
    }
    Ok(s)
}
