//! Exhaustive classification of Haar graphs over small groups.

mod classes;

use std::fmt::Write;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

pub use classes::{
    enumerate_connection_classes, equivalence_generators, translate_mask, ConnectionClass,
    MAX_EXHAUSTIVE_ORDER,
};

use crate::aut::{cayley_check, check_haar, CayleyVerdict, HgrCheck, SearchConfig};
use crate::error::{Error, Result};
use crate::group::catalog::{entries_of_order, CatalogEntry, Table};
use crate::group::FiniteGroup;
use crate::haar::{build_haar, ConnectionSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    /// `Yes` if any item is positive, else `Unknown` if any is undecided.
    fn from_counts(positive: bool, undecided: bool) -> Verdict {
        if positive {
            Verdict::Yes
        } else if undecided {
            Verdict::Unknown
        } else {
            Verdict::No
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        }
    }
}

/// Automorphism data for one class representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassOutcome {
    pub mask: u64,
    pub size: u64,
    /// `None` when the search ran out of budget.
    pub check: Option<HgrCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub group: String,
    pub order: usize,
    pub admits_hgr: Verdict,
    pub admits_rigid_bipartition: Verdict,
    /// `None` unless requested.
    pub every_haar_is_cayley: Option<Verdict>,
    pub hgr_witness: Option<Vec<usize>>,
    pub rigid_witness: Option<Vec<usize>>,
    pub non_cayley_witness: Option<Vec<usize>>,
    pub class_count: usize,
    pub exhaustive: bool,
    /// Masks of classes left undecided by the budget.
    pub undecided: Vec<u64>,
    #[serde(skip)]
    pub outcomes: Vec<ClassOutcome>,
}

#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    pub search: SearchConfig,
    /// Largest order classified exhaustively.
    pub max_order: usize,
    /// Also decide whether every Haar graph is a Cayley graph.
    pub cayley: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            search: SearchConfig::default(),
            max_order: 12,
            cayley: false,
        }
    }
}

/// Aut and Aut0 orders for every class representative, in mask order.
pub fn class_outcomes(g: &FiniteGroup, cfg: &SearchConfig) -> Result<Vec<ClassOutcome>> {
    let classes = enumerate_connection_classes(g)?;
    classes
        .par_iter()
        .map(|c| {
            let h = build_haar(g, &c.connection_set(g))?;
            let check = match check_haar(&h, cfg) {
                Ok(check) => Some(check),
                Err(e) if e.is_resource_limit() => None,
                Err(e) => return Err(e),
            };
            Ok(ClassOutcome {
                mask: c.mask,
                size: c.size,
                check,
            })
        })
        .collect()
}

fn mask_elements(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

pub fn classify_group(g: &FiniteGroup, opts: &ClassifyOptions) -> Result<ClassificationReport> {
    let n = g.order();
    if n > opts.max_order {
        return Err(Error::CapExceeded(format!(
            "exhaustive classification is limited to order {}",
            opts.max_order
        )));
    }
    let outcomes = class_outcomes(g, &opts.search)?;
    let order = BigUint::from(n);
    let first = |pred: &dyn Fn(&HgrCheck) -> bool| {
        outcomes
            .iter()
            .find(|o| o.check.as_ref().is_some_and(pred))
            .map(|o| mask_elements(o.mask))
    };
    let hgr_witness = first(&|c| c.aut_order == order);
    let rigid_witness = first(&|c| c.aut0_order == order);
    let undecided: Vec<u64> = outcomes
        .iter()
        .filter(|o| o.check.is_none())
        .map(|o| o.mask)
        .collect();
    let mut report = ClassificationReport {
        group: g.name().to_string(),
        order: n,
        admits_hgr: Verdict::from_counts(hgr_witness.is_some(), !undecided.is_empty()),
        admits_rigid_bipartition: Verdict::from_counts(
            rigid_witness.is_some(),
            !undecided.is_empty(),
        ),
        every_haar_is_cayley: None,
        hgr_witness,
        rigid_witness,
        non_cayley_witness: None,
        class_count: outcomes.len(),
        exhaustive: true,
        undecided,
        outcomes,
    };
    if opts.cayley {
        let c = every_haar_is_cayley(g, &opts.search)?;
        report.every_haar_is_cayley = Some(c.verdict);
        report.non_cayley_witness = c.witness;
        report.undecided.extend(c.undecided);
        report.undecided.sort_unstable();
        report.undecided.dedup();
    }
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct CayleyReport {
    pub group: String,
    pub verdict: Verdict,
    /// A connection set whose Haar graph is not a Cayley graph.
    pub witness: Option<Vec<usize>>,
    /// Why the witness is not Cayley.
    pub witness_reason: Option<&'static str>,
    pub class_count: usize,
    pub decided: usize,
    pub undecided: Vec<u64>,
}

impl CayleyReport {
    pub fn decided_fraction(&self) -> f64 {
        if self.class_count == 0 {
            1.0
        } else {
            self.decided as f64 / self.class_count as f64
        }
    }
}

/// Whether every Haar graph over `g` is a Cayley graph, decided class by
/// class. Abelian groups answer yes without search: translations together
/// with inversion act regularly.
pub fn every_haar_is_cayley(g: &FiniteGroup, cfg: &SearchConfig) -> Result<CayleyReport> {
    let mut report = CayleyReport {
        group: g.name().to_string(),
        verdict: Verdict::Yes,
        witness: None,
        witness_reason: None,
        class_count: 0,
        decided: 0,
        undecided: Vec::new(),
    };
    if g.is_abelian() {
        return Ok(report);
    }
    let classes = enumerate_connection_classes(g)?;
    report.class_count = classes.len();
    let results: Vec<(u64, Option<CayleyVerdict>)> = classes
        .par_iter()
        .map(|c| {
            let h = build_haar(g, &c.connection_set(g))?;
            match cayley_check(&h, cfg) {
                Ok(v) => Ok((c.mask, Some(v))),
                Err(e) if e.is_resource_limit() => Ok((c.mask, None)),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    for (mask, v) in results {
        match v {
            None => report.undecided.push(mask),
            Some(v) => {
                report.decided += 1;
                if !v.is_cayley() && report.witness.is_none() {
                    report.witness = Some(mask_elements(mask));
                    report.witness_reason = Some(match v {
                        CayleyVerdict::NotVertexTransitive => {
                            "automorphism group is not vertex-transitive"
                        }
                        _ => "no regular subgroup of the automorphism group",
                    });
                }
            }
        }
    }
    report.verdict = if report.witness.is_some() {
        Verdict::No
    } else if report.undecided.is_empty() {
        Verdict::Yes
    } else {
        Verdict::Unknown
    };
    Ok(report)
}

/// One catalog group compared against the exception tables.
#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub order: usize,
    pub group: String,
    /// Expected to have no HGR: listed as an HGR exception, or abelian.
    pub expected_no_hgr: bool,
    pub admits_hgr: Verdict,
    pub expected_no_rigid: bool,
    pub admits_rigid: Verdict,
    /// Listed among the groups needing three poset orbits.
    pub table3: bool,
    pub class_count: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TablesReport {
    pub max_order: usize,
    pub rows: Vec<TableRow>,
}

impl TablesReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    /// Names of the groups computed to have no HGR.
    pub fn computed_no_hgr(&self) -> Vec<&str> {
        self.rows
            .iter()
            .filter(|r| r.admits_hgr == Verdict::No)
            .map(|r| r.group.as_str())
            .collect()
    }

    pub fn computed_no_rigid(&self) -> Vec<&str> {
        self.rows
            .iter()
            .filter(|r| r.admits_rigid == Verdict::No)
            .map(|r| r.group.as_str())
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "order,group,hgr_expected,hgr_computed,rigid_expected,rigid_computed,match\n",
        );
        let tag = |no: bool| if no { "exceptional" } else { "admits" };
        let computed = |v: Verdict| match v {
            Verdict::Yes => "admits",
            Verdict::No => "exceptional",
            Verdict::Unknown => "unknown",
        };
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                r.order,
                r.group,
                tag(r.expected_no_hgr),
                computed(r.admits_hgr),
                tag(r.expected_no_rigid),
                computed(r.admits_rigid),
                if r.pass { "yes" } else { "no" }
            );
        }
        s
    }
}

pub fn table_row(entry: &CatalogEntry, opts: &ClassifyOptions) -> Result<TableRow> {
    let g = entry.build()?;
    let report = classify_group(&g, opts)?;
    let expected_no_hgr = entry.in_table(Table::NoHgr) || g.is_abelian();
    let expected_no_rigid = entry.in_table(Table::NoRigid);
    let agrees =
        |expected_no: bool, v: Verdict| (v == Verdict::No) == expected_no && v != Verdict::Unknown;
    Ok(TableRow {
        order: entry.order,
        group: entry.name.clone(),
        expected_no_hgr,
        admits_hgr: report.admits_hgr,
        expected_no_rigid,
        admits_rigid: report.admits_rigid_bipartition,
        table3: entry.in_table(Table::ThreeOrbitPoset),
        class_count: report.class_count,
        pass: agrees(expected_no_hgr, report.admits_hgr)
            && agrees(expected_no_rigid, report.admits_rigid_bipartition),
    })
}

/// Classifies every catalog group of order `3..=max_order` and compares with
/// the exception tables.
pub fn reproduce_tables(max_order: usize, opts: &ClassifyOptions) -> Result<TablesReport> {
    reproduce_tables_range(3, max_order, opts)
}

pub fn reproduce_tables_range(
    lo: usize,
    hi: usize,
    opts: &ClassifyOptions,
) -> Result<TablesReport> {
    let opts = ClassifyOptions {
        max_order: opts.max_order.max(hi),
        ..*opts
    };
    let entries: Vec<&CatalogEntry> = entries_of_order(lo.max(3), hi).collect();
    let rows = entries
        .iter()
        .map(|e| table_row(e, &opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(TablesReport {
        max_order: hi,
        rows,
    })
}

/// Connection set from a witness list.
pub fn witness_set(g: &FiniteGroup, elems: &[usize]) -> Result<ConnectionSet> {
    ConnectionSet::new(g, elems.iter().copied())
}
