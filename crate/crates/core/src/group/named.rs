use std::fmt;

use serde_json::{json, Value};

use super::{group_from_generators, FiniteGroup, MAX_ORDER};
use crate::error::{Error, Result};
use crate::perm::Perm;

/// Descriptor of a group built from a presentation family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupSpec {
    /// `C_n`, elements `s^a`.
    Cyclic(usize),
    /// `C_{n1} x C_{n2} x ...`.
    Abelian(Vec<usize>),
    /// Dihedral group of the given order `2m`: `<s, t | s^m, t^2, s^t = s^-1>`.
    Dihedral(usize),
    /// Dicyclic group of order `4m`: `<x, y | x^2m, y^2 = x^m, x^y = x^-1>`.
    /// Order 8 is the quaternion group.
    Dicyclic(usize),
    Alternating(usize),
    Symmetric(usize),
    /// `C_m : C_k = <x, y | x^m, y^k, x^y = x^e>`.
    Semidirect {
        m: usize,
        k: usize,
        e: usize,
    },
    /// `A : C_2` with the involution inverting the abelian group `A`.
    GeneralizedDihedral(Vec<usize>),
    DirectProduct(Vec<GroupSpec>),
}

fn invalid(family: &str, reason: impl Into<String>) -> Error {
    Error::InvalidParams {
        family: family.to_string(),
        reason: reason.into(),
    }
}

fn check_order(order: usize) -> Result<()> {
    if order > MAX_ORDER {
        Err(Error::OrderTooLarge(order))
    } else {
        Ok(())
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn power_label(sym: &str, a: usize) -> String {
    match a {
        0 => String::new(),
        1 => sym.to_string(),
        _ => format!("{sym}^{a}"),
    }
}

fn join_label(parts: &[String]) -> String {
    let parts: Vec<&str> = parts
        .iter()
        .map(|s| s.as_str())
        .filter(|s| !s.is_empty())
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join(" ")
    }
}

impl GroupSpec {
    /// Reads the `family`/`params` pair of a group file.
    pub fn from_family(family: &str, params: &[Value]) -> Result<GroupSpec> {
        let nums = || -> Result<Vec<usize>> {
            params
                .iter()
                .map(|v| {
                    v.as_u64()
                        .map(|x| x as usize)
                        .ok_or_else(|| invalid(family, format!("expected integers, got {v}")))
                })
                .collect()
        };
        let one = || -> Result<usize> {
            match nums()?.as_slice() {
                [n] => Ok(*n),
                _ => Err(invalid(family, "expected exactly one integer")),
            }
        };
        Ok(match family {
            "cyclic" => GroupSpec::Cyclic(one()?),
            "abelian" => GroupSpec::Abelian(nums()?),
            "dihedral" => GroupSpec::Dihedral(one()?),
            "dicyclic" => GroupSpec::Dicyclic(one()?),
            "quaternion" => match one()? {
                n if n.is_power_of_two() => GroupSpec::Dicyclic(n),
                n => return Err(invalid(family, format!("order {n} is not a power of two"))),
            },
            "alternating" => GroupSpec::Alternating(one()?),
            "symmetric" => GroupSpec::Symmetric(one()?),
            "semidirect" => match nums()?.as_slice() {
                [m, k, e] => GroupSpec::Semidirect {
                    m: *m,
                    k: *k,
                    e: *e,
                },
                _ => return Err(invalid(family, "expected [m, k, e]")),
            },
            "generalized_dihedral" => GroupSpec::GeneralizedDihedral(nums()?),
            "direct_product" => {
                let mut fs = Vec::new();
                for p in params {
                    let name = p
                        .as_str()
                        .ok_or_else(|| invalid(family, "factors must be group names"))?;
                    fs.push(GroupSpec::parse(name)?);
                }
                GroupSpec::DirectProduct(fs)
            }
            other => return Err(Error::UnsupportedFamily(other.to_string())),
        })
    }

    /// Inverse of [`GroupSpec::from_family`].
    pub fn family(&self) -> (&'static str, Vec<Value>) {
        match self {
            GroupSpec::Cyclic(n) => ("cyclic", vec![json!(n)]),
            GroupSpec::Abelian(v) => ("abelian", v.iter().map(|x| json!(x)).collect()),
            GroupSpec::Dihedral(n) => ("dihedral", vec![json!(n)]),
            GroupSpec::Dicyclic(n) => ("dicyclic", vec![json!(n)]),
            GroupSpec::Alternating(n) => ("alternating", vec![json!(n)]),
            GroupSpec::Symmetric(n) => ("symmetric", vec![json!(n)]),
            GroupSpec::Semidirect { m, k, e } => ("semidirect", vec![json!(m), json!(k), json!(e)]),
            GroupSpec::GeneralizedDihedral(v) => {
                ("generalized_dihedral", v.iter().map(|x| json!(x)).collect())
            }
            GroupSpec::DirectProduct(fs) => (
                "direct_product",
                fs.iter().map(|f| json!(f.name())).collect(),
            ),
        }
    }

    pub fn name(&self) -> String {
        match self {
            GroupSpec::Cyclic(n) => format!("C{n}"),
            GroupSpec::Abelian(inv) => abelian_name(inv),
            GroupSpec::Dihedral(n) => format!("D{n}"),
            GroupSpec::Dicyclic(n) if n.is_power_of_two() => format!("Q{n}"),
            GroupSpec::Dicyclic(n) => format!("Dic{n}"),
            GroupSpec::Alternating(n) => format!("Alt{n}"),
            GroupSpec::Symmetric(n) => format!("Sym{n}"),
            GroupSpec::Semidirect { m, k, e } => format!("C{m}:C{k}[{e}]"),
            GroupSpec::GeneralizedDihedral(inv) => format!("Dih({})", abelian_name(inv)),
            GroupSpec::DirectProduct(fs) => {
                fs.iter().map(|f| f.name()).collect::<Vec<_>>().join("x")
            }
        }
    }

    /// Order implied by the parameters, without building the table.
    pub fn order(&self) -> Option<usize> {
        match self {
            GroupSpec::Cyclic(n) | GroupSpec::Dihedral(n) | GroupSpec::Dicyclic(n) => Some(*n),
            GroupSpec::Abelian(inv) => inv.iter().try_fold(1usize, |a, &b| a.checked_mul(b)),
            GroupSpec::Alternating(n) => (1..=*n)
                .try_fold(1usize, |a, b| a.checked_mul(b))
                .map(|f| if *n >= 2 { f / 2 } else { 1 }),
            GroupSpec::Symmetric(n) => (1..=*n).try_fold(1usize, |a, b| a.checked_mul(b)),
            GroupSpec::Semidirect { m, k, .. } => m.checked_mul(*k),
            GroupSpec::GeneralizedDihedral(inv) => {
                inv.iter().try_fold(2usize, |a, &b| a.checked_mul(b))
            }
            GroupSpec::DirectProduct(fs) => fs
                .iter()
                .try_fold(1usize, |a, f| f.order().and_then(|o| a.checked_mul(o))),
        }
    }

    pub fn build(&self) -> Result<FiniteGroup> {
        if let Some(o) = self.order() {
            check_order(o)?;
        } else {
            return Err(Error::OrderTooLarge(usize::MAX));
        }
        let g = match self {
            GroupSpec::Cyclic(n) => {
                if *n == 0 {
                    return Err(invalid("cyclic", "order must be positive"));
                }
                abelian(&[*n])?
            }
            GroupSpec::Abelian(inv) => {
                if inv.contains(&0) {
                    return Err(invalid("abelian", "invariants must be positive"));
                }
                abelian(inv)?
            }
            GroupSpec::Dihedral(n) => {
                if *n < 2 || n % 2 != 0 {
                    return Err(invalid(
                        "dihedral",
                        format!("order {n} must be even and at least 2"),
                    ));
                }
                dihedral(n / 2)?
            }
            GroupSpec::Dicyclic(n) => {
                if *n < 8 || n % 4 != 0 {
                    return Err(invalid(
                        "dicyclic",
                        format!("order {n} must be a multiple of 4 and at least 8"),
                    ));
                }
                dicyclic(n / 4)?
            }
            GroupSpec::Alternating(n) => alternating(*n)?,
            GroupSpec::Symmetric(n) => symmetric(*n)?,
            GroupSpec::Semidirect { m, k, e } => semidirect(*m, *k, *e)?,
            GroupSpec::GeneralizedDihedral(inv) => {
                if inv.is_empty() || inv.contains(&0) {
                    return Err(invalid(
                        "generalized_dihedral",
                        "invariants must be positive",
                    ));
                }
                generalized_dihedral(inv)?
            }
            GroupSpec::DirectProduct(fs) => {
                if fs.is_empty() {
                    return Err(invalid("direct_product", "no factors"));
                }
                let mut acc = fs[0].build()?;
                for f in &fs[1..] {
                    acc = acc.direct_product(&f.build()?)?;
                }
                acc
            }
        };
        Ok(g.with_name(self.name()))
    }

    /// Parses names such as `C12`, `C2^3`, `D8`, `Q8`, `Dic12`, `Alt4`,
    /// `Sym4` and direct products joined with `x` (`Q8xC2`, `C4xC2^2`).
    pub fn parse(name: &str) -> Result<GroupSpec> {
        let factors: Vec<&str> = name.split('x').map(str::trim).collect();
        if factors.iter().any(|f| f.is_empty()) {
            return Err(Error::UnknownGroup(name.to_string()));
        }
        let mut specs = Vec::new();
        for f in &factors {
            specs.push(parse_factor(f).ok_or_else(|| Error::UnknownGroup(name.to_string()))?);
        }
        if specs.len() == 1 {
            return Ok(specs.pop().unwrap());
        }
        // Products of cyclic factors collapse to a single abelian descriptor.
        let mut inv = Vec::new();
        for s in &specs {
            match s {
                GroupSpec::Cyclic(n) => inv.push(*n),
                GroupSpec::Abelian(v) => inv.extend(v),
                _ => return Ok(GroupSpec::DirectProduct(specs)),
            }
        }
        Ok(GroupSpec::Abelian(inv))
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn parse_factor(f: &str) -> Option<GroupSpec> {
    let split = |prefix: &str| f.strip_prefix(prefix).and_then(|r| r.parse::<usize>().ok());
    if let Some(rest) = f.strip_prefix('C') {
        return match rest.split_once('^') {
            Some((b, e)) => {
                let (b, e) = (b.parse().ok()?, e.parse::<usize>().ok()?);
                (e >= 1).then(|| {
                    if e == 1 {
                        GroupSpec::Cyclic(b)
                    } else {
                        GroupSpec::Abelian(vec![b; e])
                    }
                })
            }
            None => rest.parse().ok().map(GroupSpec::Cyclic),
        };
    }
    if let Some(n) = split("Dic") {
        return Some(GroupSpec::Dicyclic(n));
    }
    if let Some(n) = split("D") {
        return Some(GroupSpec::Dihedral(n));
    }
    if let Some(n) = split("Q") {
        return n.is_power_of_two().then_some(GroupSpec::Dicyclic(n));
    }
    if let Some(n) = split("Alt") {
        return Some(GroupSpec::Alternating(n));
    }
    if let Some(n) = split("Sym") {
        return Some(GroupSpec::Symmetric(n));
    }
    None
}

fn abelian_name(inv: &[usize]) -> String {
    if inv.is_empty() {
        return "C1".into();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < inv.len() {
        let mut j = i;
        while j < inv.len() && inv[j] == inv[i] {
            j += 1;
        }
        if j - i == 1 {
            parts.push(format!("C{}", inv[i]));
        } else {
            parts.push(format!("C{}^{}", inv[i], j - i));
        }
        i = j;
    }
    parts.join("x")
}

/// Mixed-radix abelian group; the last coordinate varies fastest.
fn abelian(inv: &[usize]) -> Result<FiniteGroup> {
    let n: usize = inv.iter().product();
    let decode = |mut x: usize| -> Vec<usize> {
        let mut c = vec![0; inv.len()];
        for i in (0..inv.len()).rev() {
            c[i] = x % inv[i];
            x /= inv[i];
        }
        c
    };
    let encode = |c: &[usize]| c.iter().zip(inv).fold(0, |acc, (&a, &m)| acc * m + a);
    let coords: Vec<Vec<usize>> = (0..n).map(decode).collect();
    let mut mul = vec![0u32; n * n];
    let mut buf = vec![0; inv.len()];
    for a in 0..n {
        for b in 0..n {
            for i in 0..inv.len() {
                buf[i] = (coords[a][i] + coords[b][i]) % inv[i];
            }
            mul[a * n + b] = encode(&buf) as u32;
        }
    }
    let syms: Vec<String> = if inv.len() == 1 {
        vec!["s".into()]
    } else {
        (1..=inv.len()).map(|i| format!("e{i}")).collect()
    };
    let labels = coords
        .iter()
        .map(|c| {
            join_label(
                &c.iter()
                    .zip(&syms)
                    .map(|(&a, s)| power_label(s, a))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    FiniteGroup::from_raw(abelian_name(inv), n, mul, labels)
}

/// `t^b s^a` has index `b*m + a`.
fn dihedral(m: usize) -> Result<FiniteGroup> {
    let n = 2 * m;
    let mut mul = vec![0u32; n * n];
    for x in 0..n {
        let (b1, a1) = (x / m, x % m);
        for y in 0..n {
            let (b2, a2) = (y / m, y % m);
            let a1t = if b2 == 1 { (m - a1) % m } else { a1 };
            mul[x * n + y] = (((b1 + b2) % 2) * m + (a1t + a2) % m) as u32;
        }
    }
    let labels = (0..n)
        .map(|x| join_label(&[power_label("t", x / m), power_label("s", x % m)]))
        .collect();
    FiniteGroup::from_raw(format!("D{n}"), n, mul, labels)
}

/// `y^b x^a` has index `b*2m + a`.
fn dicyclic(m: usize) -> Result<FiniteGroup> {
    let h = 2 * m;
    let n = 2 * h;
    let mut mul = vec![0u32; n * n];
    for x in 0..n {
        let (b1, a1) = (x / h, x % h);
        for y in 0..n {
            let (b2, a2) = (y / h, y % h);
            let a1t = if b2 == 1 { (h - a1) % h } else { a1 };
            let mut a = a1t + a2;
            let mut b = b1 + b2;
            if b == 2 {
                b = 0;
                a += m;
            }
            mul[x * n + y] = (b * h + a % h) as u32;
        }
    }
    let labels = (0..n)
        .map(|x| join_label(&[power_label("y", x / h), power_label("x", x % h)]))
        .collect();
    FiniteGroup::from_raw(format!("Dic{n}"), n, mul, labels)
}

/// `y^b x^a` has index `b*m + a`, with `x^y = x^e`.
fn semidirect(m: usize, k: usize, e: usize) -> Result<FiniteGroup> {
    let fam = "semidirect";
    if m == 0 || k == 0 {
        return Err(invalid(fam, "orders must be positive"));
    }
    if gcd(e % m.max(1), m) != 1 && m > 1 {
        return Err(invalid(
            fam,
            format!("exponent {e} is not a unit modulo {m}"),
        ));
    }
    // e^k must be 1 mod m for the relations to be consistent.
    let mut ek = 1 % m;
    for _ in 0..k {
        ek = ek * (e % m) % m;
    }
    if ek != 1 % m {
        return Err(invalid(fam, format!("{e}^{k} is not 1 modulo {m}")));
    }
    let n = m * k;
    let mut epow = vec![1 % m; k];
    for i in 1..k {
        epow[i] = epow[i - 1] * (e % m) % m;
    }
    let mut mul = vec![0u32; n * n];
    for x in 0..n {
        let (b1, a1) = (x / m, x % m);
        for y in 0..n {
            let (b2, a2) = (y / m, y % m);
            mul[x * n + y] = (((b1 + b2) % k) * m + (a1 * epow[b2] + a2) % m) as u32;
        }
    }
    let labels = (0..n)
        .map(|x| join_label(&[power_label("y", x / m), power_label("x", x % m)]))
        .collect();
    FiniteGroup::from_raw(format!("C{m}:C{k}"), n, mul, labels)
}

/// `(b, a)` has index `b*|A| + a`; the involution inverts `A`.
fn generalized_dihedral(inv: &[usize]) -> Result<FiniteGroup> {
    let a = abelian(inv)?;
    let h = a.order();
    let n = 2 * h;
    let mut mul = vec![0u32; n * n];
    for x in 0..n {
        let (b1, a1) = (x / h, x % h);
        for y in 0..n {
            let (b2, a2) = (y / h, y % h);
            let a1t = if b2 == 1 { a.inv(a1) } else { a1 };
            mul[x * n + y] = (((b1 + b2) % 2) * h + a.mul(a1t, a2)) as u32;
        }
    }
    let labels = (0..n)
        .map(|x| {
            let base = if x % h == 0 {
                String::new()
            } else {
                a.label(x % h).to_string()
            };
            join_label(&[power_label("x", x / h), base])
        })
        .collect();
    FiniteGroup::from_raw(format!("Dih({})", abelian_name(inv)), n, mul, labels)
}

fn cycle(degree: usize, pts: impl IntoIterator<Item = usize>) -> Result<Perm> {
    let pts: Vec<usize> = pts.into_iter().collect();
    Perm::from_cycles(degree, &[&pts])
}

fn alternating(n: usize) -> Result<FiniteGroup> {
    if n < 3 {
        return group_from_generators(format!("Alt{n}"), n.max(1), &[]);
    }
    let mut gens = vec![cycle(n, [0, 1, 2])?];
    if n > 3 {
        gens.push(if n % 2 == 1 {
            cycle(n, 0..n)?
        } else {
            cycle(n, 1..n)?
        });
    }
    group_from_generators(format!("Alt{n}"), n, &gens)
}

fn symmetric(n: usize) -> Result<FiniteGroup> {
    if n < 2 {
        return group_from_generators(format!("Sym{n}"), n.max(1), &[]);
    }
    group_from_generators(format!("Sym{n}"), n, &[cycle(n, 0..n)?, cycle(n, [0, 1])?])
}
