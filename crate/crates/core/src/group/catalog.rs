//! The shipped group catalog and the JSON group-file format.

use std::path::Path;
use std::sync::OnceLock;

use serde::Deserialize;
use serde_json::Value;

use super::{find_isomorphism, group_from_generators, FiniteGroup, GroupSpec};
use crate::error::{Error, Result};
use crate::perm::Perm;

const CATALOG_JSON: &str = include_str!("../../data/catalog.json");

/// Exception lists a catalog group can belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table {
    /// No Haar graphical representation.
    NoHgr = 1,
    /// No Haar graph whose part-preserving automorphisms are the translations.
    NoRigid = 2,
    /// Best semiregular poset representation needs three orbits.
    ThreeOrbitPoset = 3,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub aliases: Vec<String>,
    pub spec: GroupSpec,
    pub order: usize,
    tables: Vec<u8>,
    /// Nonabelian, and every Haar graph over it is a Cayley graph.
    pub cayley_only: bool,
}

impl CatalogEntry {
    pub fn in_table(&self, t: Table) -> bool {
        self.tables.contains(&(t as u8))
    }

    pub fn build(&self) -> Result<FiniteGroup> {
        Ok(self.spec.build()?.with_name(self.name.clone()))
    }

    fn matches(&self, name: &str) -> bool {
        self.name.eq_ignore_ascii_case(name)
            || self.aliases.iter().any(|a| a.eq_ignore_ascii_case(name))
    }
}

#[derive(Deserialize)]
struct RawCatalog {
    groups: Vec<GroupFile>,
}

/// A group file: `{"name", "kind": "table" | "permutation" | "presentation", ...}`.
#[derive(Debug, Clone, Deserialize)]
pub struct GroupFile {
    pub name: String,
    pub kind: String,
    #[serde(default)]
    pub order: Option<usize>,
    #[serde(default)]
    pub mul: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub degree: Option<usize>,
    #[serde(default)]
    pub generators: Option<Vec<Vec<usize>>>,
    #[serde(default)]
    pub family: Option<String>,
    #[serde(default)]
    pub params: Option<Vec<Value>>,
    #[serde(default)]
    pub tables: Vec<u8>,
    #[serde(default)]
    pub cayley_only: bool,
    #[serde(default)]
    pub aliases: Vec<String>,
}

fn missing(field: &str, kind: &str) -> Error {
    Error::InvalidParams {
        family: kind.to_string(),
        reason: format!("missing field `{field}`"),
    }
}

impl GroupFile {
    pub fn build(&self) -> Result<FiniteGroup> {
        let g = match self.kind.as_str() {
            "table" => {
                let mul = self.mul.as_ref().ok_or_else(|| missing("mul", "table"))?;
                FiniteGroup::from_table(self.name.clone(), mul, None)?
            }
            "permutation" => {
                let degree = self
                    .degree
                    .ok_or_else(|| missing("degree", "permutation"))?;
                let gens = self
                    .generators
                    .as_ref()
                    .ok_or_else(|| missing("generators", "permutation"))?;
                let gens: Vec<Perm> = gens
                    .iter()
                    .map(|g| Perm::from_images(g.clone()))
                    .collect::<Result<_>>()?;
                group_from_generators(self.name.clone(), degree, &gens)?
            }
            "presentation" => self.spec()?.build()?.with_name(self.name.clone()),
            other => return Err(Error::UnsupportedFamily(format!("group kind `{other}`"))),
        };
        if let Some(o) = self.order {
            if o != g.order() {
                return Err(Error::InvalidParams {
                    family: self.kind.clone(),
                    reason: format!("declared order {o} but the group has order {}", g.order()),
                });
            }
        }
        Ok(g)
    }

    fn spec(&self) -> Result<GroupSpec> {
        let family = self
            .family
            .as_deref()
            .ok_or_else(|| missing("family", "presentation"))?;
        GroupSpec::from_family(family, self.params.as_deref().unwrap_or(&[]))
    }
}

/// Reads a group file from disk.
pub fn load_group_file(path: &Path) -> Result<FiniteGroup> {
    let text = std::fs::read_to_string(path)?;
    let file: GroupFile = serde_json::from_str(&text)?;
    file.build()
}

pub fn catalog() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let raw: RawCatalog = serde_json::from_str(CATALOG_JSON).expect("shipped catalog parses");
        raw.groups
            .into_iter()
            .map(|f| {
                let spec = f.spec().expect("shipped catalog entries are presentations");
                let order = spec.order().expect("catalog orders fit in usize");
                CatalogEntry {
                    name: f.name,
                    aliases: f.aliases,
                    spec,
                    order,
                    tables: f.tables,
                    cayley_only: f.cayley_only,
                }
            })
            .collect()
    })
}

pub fn find_entry(name: &str) -> Option<&'static CatalogEntry> {
    catalog().iter().find(|e| e.matches(name))
}

/// Catalog name first, then the name grammar of [`GroupSpec::parse`].
pub fn lookup(name: &str) -> Result<FiniteGroup> {
    if let Some(e) = find_entry(name) {
        return e.build();
    }
    let spec = GroupSpec::parse(name)?;
    Ok(spec.build()?.with_name(name))
}

/// Catalog groups of order in `lo..=hi`, in catalog order.
pub fn entries_of_order(lo: usize, hi: usize) -> impl Iterator<Item = &'static CatalogEntry> {
    catalog()
        .iter()
        .filter(move |e| e.order >= lo && e.order <= hi)
}

/// The catalog entry isomorphic to `g`, if any.
pub fn identify(g: &FiniteGroup) -> Option<&'static CatalogEntry> {
    entries_of_order(g.order(), g.order()).find(|e| {
        e.build()
            .map(|h| find_isomorphism(g, &h).is_some())
            .unwrap_or(false)
    })
}

/// Whether `g` is isomorphic to a group on the given exception list.
pub fn in_table(g: &FiniteGroup, t: Table) -> bool {
    entries_of_order(g.order(), g.order())
        .filter(|e| e.in_table(t))
        .any(|e| {
            e.build()
                .map(|h| find_isomorphism(g, &h).is_some())
                .unwrap_or(false)
        })
}
