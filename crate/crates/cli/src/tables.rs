//! Table regeneration. Every cell is computed from root systems, the pairing
//! construction, the appendix formulas or a fresh catalog verification.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use nullcone::catalog::{self, CatalogEntry, CatalogVerdict, EntryReport, Filter, Table};
use nullcone::classifier::SearchOptions;
use nullcone::constructor::{
    appendix_families, complexified_class, format_class, pairing_plan, realform_bookkeeping, AppendixTable,
};
use nullcone::rootsystems::{chevalley_split_form, CartanMatrix};
use nullcone::{Error, Result};

const EXCEPTIONAL: [&str; 5] = ["G2", "F4", "E6", "E7", "E8"];

#[derive(Clone, Debug, Serialize)]
pub struct RenderedTable {
    pub table: String,
    pub title: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::Bool(b) => if *b { "yes" } else { "no" }.into(),
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(cell).collect::<Vec<_>>().join(",")),
        other => other.to_string(),
    }
}

impl RenderedTable {
    /// Columns padded to their widest cell, with a title line and header rule.
    pub fn to_text(&self) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|c| {
                cells.iter().map(|r| r[c].chars().count()).chain([self.columns[c].chars().count()]).max().unwrap_or(0)
            })
            .collect();
        let line = |row: Vec<&str>| {
            let padded: Vec<String> =
                row.iter().zip(&widths).map(|(s, &w)| format!("{s}{}", " ".repeat(w - s.chars().count()))).collect();
            padded.join("  ").trim_end().to_string()
        };
        let mut out = vec![self.title.clone(), line(self.columns.clone())];
        out.push(widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("  "));
        out.extend(cells.iter().map(|r| line(r.iter().map(String::as_str).collect())));
        out.join("\n")
    }
}

fn lower(name: &str) -> String {
    name.to_lowercase()
}

fn split_lcs() -> Result<RenderedTable> {
    let rows = EXCEPTIONAL
        .iter()
        .map(|name| {
            let g = chevalley_split_form(&CartanMatrix::parse(name)?);
            Ok(vec![
                json!(format!("split {name}")),
                json!(g.dim_a),
                json!(g.dim_n()),
                json!(g.lcs_dims()),
                json!(g.dim()),
            ])
        })
        .collect::<Result<_>>()?;
    Ok(RenderedTable {
        table: "splitlcs".into(),
        title: "Split exceptional algebras: Cartan and nilpotent dimensions, lower central series of n".into(),
        columns: vec!["G", "dim a", "dim n", "LCS", "dim G"],
        rows,
    })
}

fn split_classes() -> Result<RenderedTable> {
    let mut rows = Vec::new();
    for name in EXCEPTIONAL {
        let g = chevalley_split_form(&CartanMatrix::parse(name)?);
        let plan = pairing_plan(&g)?;
        rows.push(vec![
            json!(format!("split {}+R^{}", lower(name), plan.m)),
            json!(g.dims),
            json!(format_class(&plan.class_multiset())),
            json!(plan.total_dim()),
            json!(format!("O({0},{0})", plan.p)),
        ]);
    }
    for name in EXCEPTIONAL {
        let g = chevalley_split_form(&CartanMatrix::parse(name)?);
        let plan = complexified_class(&g)?;
        let dims: Vec<usize> = g.dims.iter().map(|d| 2 * d).collect();
        rows.push(vec![
            json!(format!("{}^C+R^{}", lower(name), plan.m)),
            json!(dims),
            json!(format_class(&plan.class_multiset())),
            json!(plan.total_dim()),
            json!(format!("O({0},{0})", plan.p)),
        ]);
    }
    Ok(RenderedTable {
        table: "splitclasses".into(),
        title: "Null-cone algebras from split exceptional algebras and their complex forms".into(),
        columns: vec!["algebra", "dim g_λ (λ>0)", "class", "dim", "action"],
        rows,
    })
}

fn appendix(which: AppendixTable, id: &str, title: &str) -> Result<RenderedTable> {
    let mut rows = Vec::new();
    for f in appendix_families().into_iter().filter(|f| f.table == which) {
        let grid: Vec<Vec<i64>> = match f.params.len() {
            0 => vec![vec![]],
            1 => (1..=8).map(|n| vec![n]).collect(),
            _ => (1..=6).flat_map(|p| (1..=6).map(move |q| vec![p, q])).collect(),
        };
        for params in grid {
            let row = match realform_bookkeeping(f.id, &params) {
                Ok(row) => row,
                Err(Error::ParameterOutOfRange(_)) => continue,
                Err(e) => return Err(e),
            };
            let label: Vec<String> = f.params.iter().zip(&params).map(|(n, v)| format!("{n}={v}")).collect();
            rows.push(vec![
                json!(f.id),
                json!(label.join(",")),
                json!(row.dim_m0),
                json!(row.dim_a),
                json!(row.dim_n),
                json!(row.m),
                json!(row.total_dim),
                json!(row.dim_g),
                json!(row.consistent()),
                row.root_check.map_or(Value::Null, Value::Bool),
            ]);
        }
    }
    Ok(RenderedTable {
        table: id.into(),
        title: title.into(),
        columns: vec![
            "g",
            "params",
            "dim m0",
            "dim a",
            "dim n",
            "m",
            "dim g+R^m",
            "dim g",
            "consistent",
            "roots agree",
        ],
        rows,
    })
}

fn verdict_cell(e: &CatalogEntry, report: &EntryReport, sig: (usize, usize)) -> (String, Value) {
    let checks: Vec<_> = report.checks.iter().filter(|c| c.signature == sig).collect();
    let passed = checks.iter().all(|c| c.passed);
    let index = e.signatures.iter().position(|&s| s == sig).expect("signature from entry");
    match (e.verdict, passed) {
        (CatalogVerdict::InNullCone, true) => ("in null cone".into(), json!(e.classes[index].to_string())),
        (CatalogVerdict::NotInNullCone, true) => {
            let frames: u64 = checks.iter().filter_map(|c| c.frames_searched).sum();
            (format!("not in null cone ({frames} frames)"), Value::Null)
        }
        (CatalogVerdict::Inconclusive, _) => ("inconclusive".into(), Value::Null),
        (_, false) => ("verification failed".into(), Value::Null),
    }
}

fn low_dim(table: Table, id: &str) -> Result<RenderedTable> {
    let entries = catalog::enumerate(&Filter { table: Some(table), ..Filter::default() });
    let opts = SearchOptions::default();
    let reports = entries.par_iter().map(|e| catalog::verify_entry(e, &opts)).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for (e, report) in entries.iter().zip(&reports) {
        for &(p, k) in &e.signatures {
            let (verdict, class) = verdict_cell(e, report, (p, k));
            let flags: Vec<Value> = e.flags.iter().map(|f| json!(f)).collect();
            rows.push(vec![json!(e.name), json!(format!("O({p},{})", p + k)), json!(verdict), class, json!(flags)]);
        }
    }
    Ok(RenderedTable {
        table: id.into(),
        title: format!("Lie algebras of dimension {}: null-cone verdicts from fresh verification", &id[3..]),
        columns: vec!["algebra", "action", "verdict", "class", "flags"],
        rows,
    })
}

pub fn reproduce(which: &str) -> Result<RenderedTable> {
    match which {
        "splitlcs" => split_lcs(),
        "splitclasses" => split_classes(),
        "appendixA1" => appendix(
            AppendixTable::ClassicalSplitCompactComplex,
            which,
            "Classical algebras, split, compact and complex: g+R^m in the null cone",
        ),
        "appendixA2" => {
            appendix(AppendixTable::ClassicalOtherRealForms, which, "Classical algebras, other real forms: g+R^m")
        }
        "appendixA3" => appendix(AppendixTable::Exceptional, which, "Exceptional algebras: g+R^m"),
        "dim3" | "dim4" | "dim5" | "dim6" => low_dim(Table::parse(which)?, which),
        _ => Err(Error::UnknownName(format!("table {which}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_rendering_aligns_columns() {
        let t = RenderedTable {
            table: "t".into(),
            title: "demo".into(),
            columns: vec!["a", "bb"],
            rows: vec![vec![json!("3×2"), json!([1, 2])], vec![json!(10), Value::Null]],
        };
        assert_eq!(t.to_text(), "demo\na    bb\n---  -----\n3×2  [1,2]\n10   -");
    }

    #[test]
    fn unknown_table_is_rejected() {
        assert!(matches!(reproduce("dim9"), Err(Error::UnknownName(_))));
    }
}
