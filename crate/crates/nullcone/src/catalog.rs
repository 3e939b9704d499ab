//! Null-frame realizations and verdicts for Lie algebras of dimension at most 6.
//!
//! Entries are stored as JSON in `catalog/`, one file per table. Each entry
//! carries one or more sample tensors written in the canonical null frame of
//! every listed signature. Families with a free parameter keep an interior
//! and a boundary sample; families given only as a recipe keep one
//! representative with generic rational values.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{jacobi_check, StructureTensor};
use crate::classifier::{search_frame, SearchOptions, Verdict as SearchVerdict};
use crate::curvature::{invariant_suite, killing_operator};
use crate::error::{Error, Result};
use crate::frame::{certify_class, ClassVector, FrameLayout};
use crate::linalg::nilpotent_operator_check;

const SOURCES: [(Table, &str); 4] = [
    (Table::Dim3, include_str!("../catalog/dim3.json")),
    (Table::Dim4, include_str!("../catalog/dim4.json")),
    (Table::Dim5, include_str!("../catalog/dim5.json")),
    (Table::Dim6, include_str!("../catalog/dim6.json")),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Table {
    Dim3,
    Dim4,
    Dim5,
    Dim6,
}

impl Table {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "dim3" => Ok(Table::Dim3),
            "dim4" => Ok(Table::Dim4),
            "dim5" => Ok(Table::Dim5),
            "dim6" => Ok(Table::Dim6),
            _ => Err(Error::UnknownName(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatalogVerdict {
    InNullCone,
    NotInNullCone,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    CompletelySolvable,
    Nilpotent,
    LeviDecomposable,
    Semisimple,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sample {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
    pub algebra: StructureTensor,
}

impl Sample {
    pub fn label(&self) -> &str {
        self.label.as_deref().unwrap_or("")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub dim: usize,
    /// `(p, k)` signatures; realized entries certify on the canonical layout of each.
    pub signatures: Vec<(usize, usize)>,
    pub verdict: CatalogVerdict,
    /// One class per signature, present for realized entries only.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub classes: Vec<ClassVector>,
    #[serde(default)]
    pub flags: Vec<Flag>,
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameters: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub samples: Vec<Sample>,
    #[serde(skip_deserializing, default = "default_table")]
    pub table: Table,
}

fn default_table() -> Table {
    Table::Dim3
}

impl CatalogEntry {
    pub fn expected_class(&self) -> Option<&ClassVector> {
        self.classes.first()
    }

    pub fn has_flag(&self, f: Flag) -> bool {
        self.flags.contains(&f)
    }

    pub fn layouts(&self) -> Vec<FrameLayout> {
        self.signatures.iter().map(|&(p, k)| FrameLayout::canonical(p, k)).collect()
    }
}

#[derive(Deserialize)]
struct TableFile {
    table: Table,
    entries: Vec<CatalogEntry>,
}

fn parse_all() -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for (table, src) in SOURCES {
        let file: TableFile = serde_json::from_str(src)?;
        if file.table != table {
            return Err(Error::Parse(format!("catalog file for {table:?} is labelled {:?}", file.table)));
        }
        for mut e in file.entries {
            e.table = table;
            validate(&e)?;
            out.push(e);
        }
    }
    Ok(out)
}

fn validate(e: &CatalogEntry) -> Result<()> {
    let bad = |msg: &str| Err(Error::Parse(format!("{}: {msg}", e.name)));
    if e.samples.is_empty() || e.signatures.is_empty() {
        return bad("needs samples and signatures");
    }
    if e.samples.iter().any(|s| s.algebra.dim() != e.dim) {
        return bad("sample dimension differs from entry");
    }
    if e.signatures.iter().any(|&(p, k)| 2 * p + k != e.dim || p == 0) {
        return bad("signature does not match dimension");
    }
    let realized = e.verdict == CatalogVerdict::InNullCone;
    if realized != !e.classes.is_empty() {
        return bad("classes must be given exactly for realized entries");
    }
    if realized
        && (e.classes.len() != e.signatures.len() || e.classes.iter().zip(&e.signatures).any(|(c, s)| c.len() != s.0))
    {
        return bad("one class of length p per signature");
    }
    Ok(())
}

/// Every entry, in table order then paper order.
pub fn entries() -> &'static [CatalogEntry] {
    static ALL: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    ALL.get_or_init(|| parse_all().expect("bundled catalog is well-formed"))
}

pub fn load(name: &str) -> Result<&'static CatalogEntry> {
    entries().iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownName(name.to_string()))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Filter {
    pub dim: Option<usize>,
    pub max_dim: Option<usize>,
    pub table: Option<Table>,
    pub flag: Option<Flag>,
    pub verdict: Option<CatalogVerdict>,
}

impl Filter {
    pub fn matches(&self, e: &CatalogEntry) -> bool {
        self.dim.is_none_or(|d| e.dim == d)
            && self.max_dim.is_none_or(|d| e.dim <= d)
            && self.table.is_none_or(|t| e.table == t)
            && self.flag.is_none_or(|f| e.has_flag(f))
            && self.verdict.is_none_or(|v| e.verdict == v)
    }
}

pub fn enumerate(filter: &Filter) -> Vec<&'static CatalogEntry> {
    entries().iter().filter(|e| filter.matches(e)).collect()
}

/// Outcome for one sample at one signature.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleCheck {
    pub sample: String,
    pub signature: (usize, usize),
    pub jacobi: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_margin: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants_zero: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub killing_nilpotent: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frames_searched: Option<u64>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub table: Table,
    pub verdict: CatalogVerdict,
    pub checks: Vec<SampleCheck>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogReport {
    pub entries: Vec<EntryReport>,
    pub passed: bool,
}

impl CatalogReport {
    pub fn failures(&self) -> impl Iterator<Item = &EntryReport> {
        self.entries.iter().filter(|e| !e.passed)
    }
}

fn check_realized(s: &Sample, sig: (usize, usize), class: &ClassVector) -> Result<SampleCheck> {
    let l = FrameLayout::canonical(sig.0, sig.1);
    let t = &s.algebra;
    let jacobi = jacobi_check(t).is_empty();
    let cert = certify_class(&l, t, class)?;
    let invariants_zero = invariant_suite(&l, t)?.is_all_zero();
    let killing_nilpotent = nilpotent_operator_check(&killing_operator(&l, t)?)?.nilpotent;
    Ok(SampleCheck {
        sample: s.label().to_string(),
        signature: sig,
        jacobi,
        certified: Some(cert.certified),
        worst_margin: Some(cert.worst_margin.map_or_else(|| "-inf".into(), |m| m.to_string())),
        invariants_zero: Some(invariants_zero),
        killing_nilpotent: Some(killing_nilpotent),
        search: None,
        frames_searched: None,
        passed: jacobi && cert.certified && invariants_zero && killing_nilpotent,
    })
}

fn check_searched(s: &Sample, sig: (usize, usize), expect_negative: bool, opts: &SearchOptions) -> Result<SampleCheck> {
    let jacobi = jacobi_check(&s.algebra).is_empty();
    let report = search_frame(&s.algebra, sig, opts)?;
    let negative = report.verdict == SearchVerdict::InfeasibleForAllSearchedFrames;
    Ok(SampleCheck {
        sample: s.label().to_string(),
        signature: sig,
        jacobi,
        certified: None,
        worst_margin: None,
        invariants_zero: None,
        killing_nilpotent: None,
        search: Some(report.verdict),
        frames_searched: Some(report.frames_searched),
        passed: jacobi && (negative || !expect_negative),
    })
}

/// Realized entries: Jacobi, certification of the stored class, vanishing
/// invariants and a nilpotent Killing operator. Negative entries: exhaustive
/// frame search is infeasible. Inconclusive entries are searched and only
/// need to satisfy Jacobi.
pub fn verify_entry(e: &CatalogEntry, opts: &SearchOptions) -> Result<EntryReport> {
    let mut checks = Vec::new();
    for (i, &sig) in e.signatures.iter().enumerate() {
        for s in &e.samples {
            checks.push(match e.verdict {
                CatalogVerdict::InNullCone => check_realized(s, sig, &e.classes[i])?,
                CatalogVerdict::NotInNullCone => check_searched(s, sig, true, opts)?,
                CatalogVerdict::Inconclusive => check_searched(s, sig, false, opts)?,
            });
        }
    }
    Ok(EntryReport {
        name: e.name.clone(),
        table: e.table,
        verdict: e.verdict,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

pub fn verify(filter: &Filter) -> Result<CatalogReport> {
    let opts = SearchOptions::default();
    let entries = enumerate(filter).into_par_iter().map(|e| verify_entry(e, &opts)).collect::<Result<Vec<_>>>()?;
    let passed = entries.iter().all(|e| e.passed);
    Ok(CatalogReport { entries, passed })
}

pub fn verify_all() -> Result<CatalogReport> {
    verify(&Filter::default())
}
