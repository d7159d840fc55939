//! Finite groups stored as dense multiplication tables.
//!
//! Element `0` is always the identity. Products are read left to right:
//! `mul(a, b)` is `ab`, and conjugation follows the exponent convention
//! `a^g = g^-1 a g`.

mod build;
pub mod catalog;
mod iso;
mod named;

use std::collections::VecDeque;
use std::fmt;

use fixedbitset::FixedBitSet;
use rand::Rng;

use crate::error::{Error, Reason, Result};

pub use build::{group_from_generators, DEFAULT_CLOSURE_CAP};
pub use iso::{
    automorphism_generators, automorphisms, find_isomorphism, is_isomorphic, Fingerprint,
};
pub use named::GroupSpec;

/// Element index.
pub type Elem = usize;

/// Hard cap on the order of a table-backed group.
pub const MAX_ORDER: usize = 4096;

#[derive(Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    labels: Vec<String>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("order", &self.order)
            .finish()
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mul == other.mul
    }
}

impl FiniteGroup {
    /// Builds a group from a full table, renumbering so the identity is
    /// element 0. Fails if the table is not a group.
    pub fn from_table(
        name: impl Into<String>,
        table: &[Vec<Elem>],
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        if n > MAX_ORDER {
            return Err(Error::OrderTooLarge(n));
        }
        if table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidTable("table is not square".into()));
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(Error::InvalidTable("label count differs from order".into()));
            }
        }
        let id = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| Error::InvalidTable("no identity element".into()))?;
        // Swap the identity into slot 0.
        let relabel: Vec<usize> = (0..n)
            .map(|x| {
                if x == id {
                    0
                } else if x == 0 {
                    id
                } else {
                    x
                }
            })
            .collect();
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let p = table[a][b];
                if p >= n {
                    return Err(Error::InvalidTable(format!("entry {p} out of range")));
                }
                mul[relabel[a] * n + relabel[b]] = relabel[p] as u32;
            }
        }
        let labels = match labels {
            Some(l) => {
                let mut out = vec![String::new(); n];
                for (x, s) in l.into_iter().enumerate() {
                    out[relabel[x]] = s;
                }
                out
            }
            None => (0..n)
                .map(|x| {
                    if x == 0 {
                        "1".to_string()
                    } else {
                        format!("g{x}")
                    }
                })
                .collect(),
        };
        Self::from_raw(name.into(), n, mul, labels)
    }

    /// `mul` is row-major with identity already at index 0.
    pub(crate) fn from_raw(
        name: String,
        order: usize,
        mul: Vec<u32>,
        labels: Vec<String>,
    ) -> Result<Self> {
        if order > MAX_ORDER {
            return Err(Error::OrderTooLarge(order));
        }
        debug_assert_eq!(mul.len(), order * order);
        let mut inv = vec![u32::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if mul[a * order + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
            if inv[a] == u32::MAX {
                return Err(Error::InvalidTable(format!("element {a} has no inverse")));
            }
        }
        let g = FiniteGroup {
            name,
            order,
            mul,
            inv,
            labels,
        };
        g.check_latin()?;
        g.check_identity()?;
        if order <= 64 {
            g.check_associative_exhaustive()?;
        } else {
            g.check_associative_sampled(10 * order * order, 0x5eed)?;
        }
        Ok(g)
    }

    fn check_latin(&self) -> Result<()> {
        let n = self.order;
        let mut seen = FixedBitSet::with_capacity(n);
        for a in 0..n {
            seen.clear();
            for b in 0..n {
                seen.insert(self.mul(a, b));
            }
            if seen.count_ones(..) != n {
                return Err(Error::InvalidTable(format!("row {a} is not a permutation")));
            }
        }
        for b in 0..n {
            seen.clear();
            for a in 0..n {
                seen.insert(self.mul(a, b));
            }
            if seen.count_ones(..) != n {
                return Err(Error::InvalidTable(format!(
                    "column {b} is not a permutation"
                )));
            }
        }
        Ok(())
    }

    fn check_identity(&self) -> Result<()> {
        for g in 0..self.order {
            if self.mul(0, g) != g || self.mul(g, 0) != g {
                return Err(Error::InvalidTable("element 0 is not the identity".into()));
            }
            if self.mul(g, self.inv(g)) != 0 {
                return Err(Error::InvalidTable(format!("bad inverse for {g}")));
            }
        }
        Ok(())
    }

    fn check_associative_exhaustive(&self) -> Result<()> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::InvalidTable(format!(
                            "not associative at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_associative_sampled(&self, samples: usize, seed: u64) -> Result<()> {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = self.order;
        for _ in 0..samples {
            let (a, b, c) = (
                rng.gen_range(0..n),
                rng.gen_range(0..n),
                rng.gen_range(0..n),
            );
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(Error::InvalidTable(format!(
                    "not associative at ({a},{b},{c})"
                )));
            }
        }
        Ok(())
    }

    /// Re-runs every table invariant. Associativity is exhaustive up to
    /// order 64 and sampled above.
    pub fn validate(&self) -> Result<()> {
        self.check_latin()?;
        self.check_identity()?;
        if self.order <= 64 {
            self.check_associative_exhaustive()
        } else {
            self.check_associative_sampled(10 * self.order * self.order, 0x5eed)
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        0
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a] as usize
    }

    pub fn label(&self, a: Elem) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }

    /// Row `a` of the table as element indices.
    pub fn table_row(&self, a: Elem) -> Vec<Elem> {
        (0..self.order).map(|b| self.mul(a, b)).collect()
    }

    pub fn check_elem(&self, a: Elem) -> Result<()> {
        if a < self.order {
            Ok(())
        } else {
            Err(Error::BadElement {
                element: a,
                order: self.order,
            })
        }
    }

    pub fn pow(&self, a: Elem, k: i64) -> Elem {
        let o = self.element_order(a) as i64;
        let e = k.rem_euclid(o);
        let mut r = 0;
        for _ in 0..e {
            r = self.mul(r, a);
        }
        r
    }

    /// Smallest `k >= 1` with `a^k = 1`.
    pub fn element_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn max_element_order(&self) -> usize {
        self.elements()
            .map(|a| self.element_order(a))
            .max()
            .unwrap_or(1)
    }

    /// `a^g = g^-1 a g`.
    pub fn conj(&self, a: Elem, g: Elem) -> Elem {
        self.mul(self.mul(self.inv(g), a), g)
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    pub fn commutes(&self, a: Elem, b: Elem) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.commutes(a, b)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic_generator().is_some()
    }

    /// Lowest-index element generating the whole group, if any.
    pub fn cyclic_generator(&self) -> Option<Elem> {
        self.elements()
            .find(|&a| self.element_order(a) == self.order)
    }

    /// Smallest subgroup containing `seed`.
    pub fn closure(&self, seed: impl IntoIterator<Item = Elem>) -> Subgroup {
        let gens: Vec<Elem> = seed.into_iter().filter(|&g| g != 0).collect();
        let mut members = FixedBitSet::with_capacity(self.order);
        members.insert(0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if !members.contains(y) {
                    members.insert(y);
                    queue.push_back(y);
                }
            }
        }
        Subgroup {
            parent_order: self.order,
            members,
        }
    }

    /// Closure of `sub` together with extra elements.
    pub fn join(&self, sub: &Subgroup, extra: impl IntoIterator<Item = Elem>) -> Subgroup {
        let mut seed = self.small_generating_set(sub);
        seed.extend(extra);
        self.closure(seed)
    }

    pub fn whole(&self) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(self.order);
        members.insert_range(..);
        Subgroup {
            parent_order: self.order,
            members,
        }
    }

    pub fn trivial(&self) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(self.order);
        members.insert(0);
        Subgroup {
            parent_order: self.order,
            members,
        }
    }

    /// Checks closure and returns the subgroup with these members.
    pub fn subgroup_from_elements(
        &self,
        elems: impl IntoIterator<Item = Elem>,
    ) -> Result<Subgroup> {
        let mut members = FixedBitSet::with_capacity(self.order);
        for e in elems {
            self.check_elem(e)?;
            members.insert(e);
        }
        let sub = Subgroup {
            parent_order: self.order,
            members,
        };
        self.check_subgroup(&sub)?;
        Ok(sub)
    }

    pub fn check_subgroup(&self, sub: &Subgroup) -> Result<()> {
        if sub.parent_order != self.order {
            return Err(Error::InvalidSubgroup(
                "subgroup belongs to another group".into(),
            ));
        }
        if !sub.contains(0) {
            return Err(Error::InvalidSubgroup("identity missing".into()));
        }
        let elems = sub.elements();
        for &a in &elems {
            if !sub.contains(self.inv(a)) {
                return Err(Error::InvalidSubgroup(format!(
                    "not closed under inverse at {a}"
                )));
            }
            for &b in &elems {
                if !sub.contains(self.mul(a, b)) {
                    return Err(Error::InvalidSubgroup(format!("not closed at ({a},{b})")));
                }
            }
        }
        Ok(())
    }

    /// A generating set of `sub`, chosen greedily by decreasing element order.
    pub fn small_generating_set(&self, sub: &Subgroup) -> Vec<Elem> {
        let mut elems = sub.elements();
        elems.sort_by_key(|&a| (std::cmp::Reverse(self.element_order(a)), a));
        let mut gens = Vec::new();
        let mut cur = self.trivial();
        for a in elems {
            if cur.order() == sub.order() {
                break;
            }
            if !cur.contains(a) {
                gens.push(a);
                cur = self.closure(gens.iter().copied());
            }
        }
        gens
    }

    pub fn generates(&self, elems: &[Elem]) -> bool {
        self.closure(elems.iter().copied()).order() == self.order
    }

    pub fn center(&self) -> Subgroup {
        let members = self
            .elements()
            .filter(|&z| self.elements().all(|g| self.commutes(z, g)));
        let mut bits = FixedBitSet::with_capacity(self.order);
        bits.extend(members);
        Subgroup {
            parent_order: self.order,
            members: bits,
        }
    }

    /// Subgroup generated by all commutators.
    pub fn derived(&self) -> Subgroup {
        let mut comms = FixedBitSet::with_capacity(self.order);
        for a in self.elements() {
            for b in self.elements() {
                comms.insert(self.commutator(a, b));
            }
        }
        self.closure(comms.ones())
    }

    pub fn structure(&self) -> Structure {
        Structure {
            is_abelian: self.is_abelian(),
            center: self.center(),
            derived: self.derived(),
        }
    }

    /// `{ n in sub : n g = g n }`.
    pub fn centralizer(&self, sub: &Subgroup, g: Elem) -> Subgroup {
        let mut bits = FixedBitSet::with_capacity(self.order);
        bits.extend(sub.members.ones().filter(|&x| self.commutes(x, g)));
        Subgroup {
            parent_order: self.order,
            members: bits,
        }
    }

    pub fn is_normal(&self, sub: &Subgroup) -> bool {
        let gens = self.small_generating_set(&self.whole());
        sub.members
            .ones()
            .all(|x| gens.iter().all(|&g| sub.contains(self.conj(x, g))))
    }

    /// Conjugacy classes ordered by smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<Elem>> {
        let mut seen = FixedBitSet::with_capacity(self.order);
        let mut classes = Vec::new();
        for a in self.elements() {
            if seen.contains(a) {
                continue;
            }
            let mut class = FixedBitSet::with_capacity(self.order);
            for g in self.elements() {
                class.insert(self.conj(a, g));
            }
            seen.union_with(&class);
            classes.push(class.ones().collect());
        }
        classes
    }

    /// Every normal subgroup, built as joins of normal closures of classes.
    /// Sorted by order, then by member list.
    pub fn normal_subgroups(&self) -> Vec<Subgroup> {
        let closures: Vec<Subgroup> = self
            .conjugacy_classes()
            .into_iter()
            .skip(1)
            .map(|c| self.closure(c))
            .collect();
        let mut found: Vec<Subgroup> = vec![self.trivial()];
        let mut seen: std::collections::HashSet<Vec<usize>> = std::collections::HashSet::new();
        seen.insert(found[0].elements());
        let mut i = 0;
        while i < found.len() {
            let base = found[i].clone();
            for k in &closures {
                if k.is_subset(&base) {
                    continue;
                }
                let mut seed = self.small_generating_set(&base);
                seed.extend(self.small_generating_set(k));
                let j = self.closure(seed);
                if seen.insert(j.elements()) {
                    found.push(j);
                }
            }
            i += 1;
        }
        found.sort_by_key(|s| (s.order(), s.elements()));
        found
    }

    /// All subgroups, built as joins of cyclic subgroups. Intended for
    /// small groups; fails past `cap` subgroups.
    pub fn subgroups(&self, cap: usize) -> Result<Vec<Subgroup>> {
        let mut cyclic: Vec<Subgroup> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for a in self.elements().skip(1) {
            let c = self.closure([a]);
            if seen.insert(c.elements()) {
                cyclic.push(c);
            }
        }
        let mut found = vec![self.trivial()];
        let mut all = std::collections::HashSet::new();
        all.insert(found[0].elements());
        let mut i = 0;
        while i < found.len() {
            let base = found[i].clone();
            for c in &cyclic {
                if c.is_subset(&base) {
                    continue;
                }
                let gen = c
                    .elements()
                    .into_iter()
                    .find(|&x| self.element_order(x) == c.order())
                    .unwrap();
                let j = self.join(&base, [gen]);
                if all.insert(j.elements()) {
                    found.push(j);
                    if found.len() > cap {
                        return Err(Error::CapExceeded(format!("more than {cap} subgroups")));
                    }
                }
            }
            i += 1;
        }
        found.sort_by_key(|s| (s.order(), s.elements()));
        Ok(found)
    }

    /// Maximal subgroups of an arbitrary group, largest first.
    pub fn maximal_subgroups(&self, cap: usize) -> Result<Vec<Subgroup>> {
        let subs = self.subgroups(cap)?;
        let proper: Vec<&Subgroup> = subs.iter().filter(|s| s.order() < self.order).collect();
        let mut out: Vec<Subgroup> = proper
            .iter()
            .filter(|s| {
                !proper
                    .iter()
                    .any(|t| t.order() > s.order() && s.is_subset(t))
            })
            .map(|s| (*s).clone())
            .collect();
        out.sort_by_key(|s| (std::cmp::Reverse(s.order()), s.elements()));
        Ok(out)
    }

    /// Maximal normal subgroups `N` together with the simple quotient `G/N`
    /// and its projection, smallest index first.
    pub fn normal_subgroups_with_simple_quotient(&self) -> Result<Vec<SimpleQuotient>> {
        if self.order < 2 {
            return Err(Error::pre(
                "normal_subgroups_with_simple_quotient",
                Reason::Other("trivial group".into()),
            ));
        }
        let normals = self.normal_subgroups();
        let proper: Vec<&Subgroup> = normals.iter().filter(|s| s.order() < self.order).collect();
        let mut out = Vec::new();
        for n in &proper {
            if proper
                .iter()
                .any(|m| m.order() > n.order() && n.is_subset(m))
            {
                continue;
            }
            let (quotient, projection) = self.quotient(n)?;
            let q = quotient.order();
            let simple = is_prime(q) || quotient.is_simple();
            debug_assert!(
                simple,
                "quotient by a maximal normal subgroup must be simple"
            );
            if simple {
                out.push(SimpleQuotient {
                    normal: (*n).clone(),
                    quotient,
                    projection,
                });
            }
        }
        out.sort_by_key(|s| (s.quotient.order(), s.normal.elements()));
        Ok(out)
    }

    /// True when the only normal subgroups are trivial and the whole group.
    pub fn is_simple(&self) -> bool {
        if self.order < 2 {
            return false;
        }
        if is_prime(self.order) {
            return true;
        }
        // Any nontrivial class whose normal closure is proper witnesses a
        // nontrivial normal subgroup.
        self.conjugacy_classes()
            .into_iter()
            .skip(1)
            .all(|c| self.closure(c).order() == self.order)
    }

    /// `G/N` with cosets numbered by their smallest member.
    pub fn quotient(&self, normal: &Subgroup) -> Result<(FiniteGroup, GroupHom)> {
        self.check_subgroup(normal)?;
        if !self.is_normal(normal) {
            return Err(Error::pre("quotient", Reason::NotNormal));
        }
        let n = self.order;
        let mut coset = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for g in self.elements() {
            if coset[g] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(g);
            for h in normal.members.ones() {
                coset[self.mul(h, g)] = idx;
            }
        }
        let q = reps.len();
        let mut mul = vec![0u32; q * q];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                mul[i * q + j] = coset[self.mul(a, b)] as u32;
            }
        }
        let labels = reps
            .iter()
            .map(|&r| format!("N{}", self.label(r)))
            .collect();
        let quotient = FiniteGroup::from_raw(format!("{}/N", self.name), q, mul, labels)?;
        let projection = GroupHom {
            source_order: n,
            target_order: q,
            image: coset,
        };
        Ok((quotient, projection))
    }

    /// The subgroup as a standalone group, with the embedding into `self`.
    /// Members keep their relative order, so the identity stays at 0.
    pub fn subgroup_as_group(
        &self,
        sub: &Subgroup,
        name: impl Into<String>,
    ) -> Result<(FiniteGroup, Vec<Elem>)> {
        self.check_subgroup(sub)?;
        let embed = sub.elements();
        let mut index = vec![usize::MAX; self.order];
        for (i, &x) in embed.iter().enumerate() {
            index[x] = i;
        }
        let m = embed.len();
        let mut mul = vec![0u32; m * m];
        for (i, &a) in embed.iter().enumerate() {
            for (j, &b) in embed.iter().enumerate() {
                mul[i * m + j] = index[self.mul(a, b)] as u32;
            }
        }
        let labels = embed.iter().map(|&x| self.labels[x].clone()).collect();
        Ok((FiniteGroup::from_raw(name.into(), m, mul, labels)?, embed))
    }

    /// Direct product with pairs `(a, b)` numbered `a * |H| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Result<FiniteGroup> {
        let (n, m) = (self.order, other.order);
        let order = n * m;
        if order > MAX_ORDER {
            return Err(Error::OrderTooLarge(order));
        }
        let mut mul = vec![0u32; order * order];
        for a1 in 0..n {
            for b1 in 0..m {
                let x = a1 * m + b1;
                for a2 in 0..n {
                    let a = self.mul(a1, a2) * m;
                    for b2 in 0..m {
                        mul[x * order + a2 * m + b2] = (a + other.mul(b1, b2)) as u32;
                    }
                }
            }
        }
        let labels = (0..order)
            .map(|x| {
                let (a, b) = (x / m, x % m);
                format!("({},{})", self.label(a), other.label(b))
            })
            .collect();
        FiniteGroup::from_raw(format!("{}x{}", self.name, other.name), order, mul, labels)
    }

    /// A uniformly random element.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> Elem {
        rng.gen_range(0..self.order)
    }
}

/// Abelian flag, center and derived subgroup.
#[derive(Debug, Clone)]
pub struct Structure {
    pub is_abelian: bool,
    pub center: Subgroup,
    pub derived: Subgroup,
}

#[derive(Debug, Clone)]
pub struct SimpleQuotient {
    pub normal: Subgroup,
    pub quotient: FiniteGroup,
    pub projection: GroupHom,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    parent_order: usize,
    members: FixedBitSet,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members.ones()).finish()
    }
}

impl Subgroup {
    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn contains(&self, x: Elem) -> bool {
        x < self.parent_order && self.members.contains(x)
    }

    pub fn order(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn elements(&self) -> Vec<Elem> {
        self.members.ones().collect()
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn index_in(&self, parent: &FiniteGroup) -> usize {
        parent.order() / self.order()
    }

    pub fn is_abelian(&self, g: &FiniteGroup) -> bool {
        let e = self.elements();
        e.iter().all(|&a| e.iter().all(|&b| g.commutes(a, b)))
    }

    /// Right coset `N r`, sorted.
    pub fn right_coset(&self, g: &FiniteGroup, r: Elem) -> Vec<Elem> {
        let mut v: Vec<Elem> = self.members.ones().map(|n| g.mul(n, r)).collect();
        v.sort_unstable();
        v
    }

    /// Left coset `r N`, sorted.
    pub fn left_coset(&self, g: &FiniteGroup, r: Elem) -> Vec<Elem> {
        let mut v: Vec<Elem> = self.members.ones().map(|n| g.mul(r, n)).collect();
        v.sort_unstable();
        v
    }
}

/// A map between groups given by its values on every element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    pub source_order: usize,
    pub target_order: usize,
    pub image: Vec<Elem>,
}

impl GroupHom {
    pub fn apply(&self, x: Elem) -> Elem {
        self.image[x]
    }

    /// Exhaustive check of `f(ab) = f(a) f(b)`.
    pub fn is_homomorphism(&self, source: &FiniteGroup, target: &FiniteGroup) -> bool {
        source.order() == self.source_order
            && target.order() == self.target_order
            && self.image.len() == self.source_order
            && self.image.iter().all(|&y| y < self.target_order)
            && source.elements().all(|a| {
                source.elements().all(|b| {
                    self.image[source.mul(a, b)] == target.mul(self.image[a], self.image[b])
                })
            })
    }

    pub fn is_bijective(&self) -> bool {
        if self.source_order != self.target_order {
            return false;
        }
        let mut seen = FixedBitSet::with_capacity(self.target_order);
        seen.extend(self.image.iter().copied());
        seen.count_ones(..) == self.target_order
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = FixedBitSet::with_capacity(self.target_order);
        seen.extend(self.image.iter().copied());
        seen.count_ones(..) == self.target_order
    }

    pub fn kernel(&self, source: &FiniteGroup) -> Subgroup {
        let mut bits = FixedBitSet::with_capacity(source.order());
        bits.extend((0..self.source_order).filter(|&x| self.image[x] == 0));
        Subgroup {
            parent_order: source.order(),
            members: bits,
        }
    }

    pub fn inverse(&self) -> Option<GroupHom> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.source_order];
        for (x, &y) in self.image.iter().enumerate() {
            inv[y] = x;
        }
        Some(GroupHom {
            source_order: self.target_order,
            target_order: self.source_order,
            image: inv,
        })
    }
}

pub(crate) fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}
