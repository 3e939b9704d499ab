//! The pairing construction `g ⊕ R^m` for graded semisimple `g`, plus the
//! closed-form bookkeeping for the real simple algebras.
//!
//! Column `λ` (from `Δ` down to `0`) pairs `g_{-λ}` in `N-` with
//! `g_{λ+1} ⊕ R^{m_{λ+1}}` in `N+` and carries class value `2λ+1`, where
//! `m_λ = dim g_{λ-1} - dim g_λ`. The top column pairs `g_{-Δ}` with padding
//! only. Every basis element of degree `μ` then pairs with `x` to `2μ - 1`,
//! so each nonzero bracket has weight pairing exactly `-1`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{compose, StructureTensor};
use crate::error::{Error, Result};
use crate::frame::{certify_class, ClassVector, FrameLayout};
use crate::rational::Rational;
use crate::rootsystems::{
    chevalley_split_form, classical_positive_root_count, positive_roots, CartanMatrix, CartanType, GradedAlgebra,
    Origin,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingColumn {
    /// `2λ + 1`.
    pub class_value: u64,
    /// Grading label `-λ` of the `N-` side.
    pub nminus_piece: i64,
    /// Grading label `λ + 1` of the `N+` side, absent for the top column.
    pub nplus_piece: Option<i64>,
    /// Central directions added on the `N+` side.
    pub padding: usize,
    /// Number of slots in this column.
    pub width: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingPlan {
    pub columns: Vec<PairingColumn>,
    /// Total padding, equal to `dim g_0`.
    pub m: usize,
    pub p: usize,
}

impl PairingPlan {
    /// `(value, multiplicity)` in decreasing value order.
    pub fn class_multiset(&self) -> Vec<(u64, usize)> {
        let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
        for c in &self.columns {
            if c.width > 0 {
                *counts.entry(c.class_value).or_default() += c.width;
            }
        }
        counts.into_iter().rev().collect()
    }

    pub fn class_vector(&self) -> ClassVector {
        let values: Vec<Rational> = self
            .columns
            .iter()
            .flat_map(|c| std::iter::repeat_n(Rational::from(c.class_value as i64), c.width))
            .collect();
        ClassVector::new(values).expect("positive class values")
    }

    pub fn total_dim(&self) -> usize {
        2 * self.p
    }
}

/// Renders `[9×3,7×4,...]` with bare values for multiplicity one.
pub fn format_class(multiset: &[(u64, usize)]) -> String {
    let parts: Vec<String> =
        multiset.iter().map(|&(v, k)| if k == 1 { v.to_string() } else { format!("{v}×{k}") }).collect();
    format!("[{}]", parts.join(","))
}

pub fn pairing_plan(g: &GradedAlgebra) -> Result<PairingPlan> {
    let delta = g.delta();
    let mut prev = g.dim_zero();
    for &d in &g.dims {
        if d > prev {
            let mut seq = vec![g.dim_zero()];
            seq.extend(&g.dims);
            return Err(Error::NonMonotoneGrading(seq));
        }
        prev = d;
    }
    let mut columns = Vec::with_capacity(delta + 1);
    for lambda in (0..=delta).rev() {
        let width = g.piece_dim(-(lambda as i64));
        let (nplus_piece, padding) = if lambda == delta {
            (None, width)
        } else {
            let above = g.piece_dim(lambda as i64 + 1);
            (Some(lambda as i64 + 1), width - above)
        };
        columns.push(PairingColumn {
            class_value: 2 * lambda as u64 + 1,
            nminus_piece: -(lambda as i64),
            nplus_piece,
            padding,
            width,
        });
    }
    let m = columns.iter().map(|c| c.padding).sum();
    let p = columns.iter().map(|c| c.width).sum();
    debug_assert_eq!(m, g.dim_zero());
    Ok(PairingPlan { columns, m, p })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub origin: Origin,
    pub construction: String,
    pub class: String,
    /// Whether the result rests on tabulated data rather than a computed bracket.
    pub conditional: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NullConeRealization {
    pub algebra: StructureTensor,
    pub layout: FrameLayout,
    pub class: ClassVector,
    pub provenance: Provenance,
}

fn finish(algebra: StructureTensor, class: ClassVector, provenance: Provenance) -> Result<NullConeRealization> {
    let layout = FrameLayout::canonical(class.len(), 0);
    let cert = certify_class(&layout, &algebra, &class)?;
    if !cert.certified {
        return Err(Error::PlanMismatch(format!("pairing does not certify (worst margin {:?})", cert.worst_margin)));
    }
    Ok(NullConeRealization { algebra, layout, class, provenance })
}

/// Realizes `g ⊕ R^m` in the canonical `(p, 0)` layout with the plan's class.
pub fn realize(g: &GradedAlgebra, plan: &PairingPlan) -> Result<NullConeRealization> {
    let (Some(t), Some(degrees)) = (&g.bracket, &g.degrees) else {
        return Err(Error::DimsOnly);
    };
    if *plan != pairing_plan(g)? {
        return Err(Error::PlanMismatch("plan was not built from this grading".into()));
    }
    let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (pos, &d) in degrees.iter().enumerate() {
        by_degree.entry(d).or_default().push(pos);
    }
    let mut new_pos = vec![usize::MAX; t.dim()];
    let mut slot = 0;
    for col in &plan.columns {
        let minus = by_degree.get(&col.nminus_piece).map_or(&[][..], Vec::as_slice);
        let plus = col.nplus_piece.and_then(|d| by_degree.get(&d)).map_or(&[][..], Vec::as_slice);
        if minus.len() != col.width || plus.len() + col.padding != col.width {
            return Err(Error::PlanMismatch(format!("column {} has mismatched sides", col.class_value)));
        }
        for j in 0..col.width {
            new_pos[minus[j]] = 2 * (slot + j);
            if let Some(&e) = plus.get(j) {
                new_pos[e] = 2 * (slot + j) + 1;
            }
        }
        slot += col.width;
    }
    if new_pos.contains(&usize::MAX) {
        return Err(Error::PlanMismatch("grading pieces do not cover the basis".into()));
    }
    let algebra = t.relabel(&new_pos, None, plan.total_dim());
    let class = plan.class_vector();
    let provenance = Provenance {
        origin: g.origin.clone(),
        construction: "height-grading pairing".into(),
        class: format_class(&plan.class_multiset()),
        conditional: false,
    };
    finish(algebra, class, provenance)
}

/// Split `g ⊕ R^{rank}` from a Cartan type such as `"E8"`.
pub fn realize_split(cartan: &str) -> Result<NullConeRealization> {
    let g = chevalley_split_form(&CartanMatrix::parse(cartan)?);
    let plan = pairing_plan(&g)?;
    realize(&g, &plan)
}

/// Levelwise direct sum with `Δ = max Δ_i`; brackets are block diagonal.
pub fn semisimple_merge(parts: &[GradedAlgebra]) -> GradedAlgebra {
    let delta = parts.iter().map(GradedAlgebra::delta).max().unwrap_or(0);
    let mut dims = vec![0; delta];
    for part in parts {
        for (l, d) in part.dims.iter().enumerate() {
            dims[l] += d;
        }
    }
    let full = parts.iter().all(|p| p.bracket.is_some() && p.degrees.is_some());
    let (bracket, degrees) = if full {
        let tensors: Vec<StructureTensor> = parts.iter().map(|p| p.bracket.clone().expect("checked")).collect();
        let degrees = parts.iter().flat_map(|p| p.degrees.clone().expect("checked")).collect();
        (Some(compose(&tensors, 0)), Some(degrees))
    } else {
        (None, None)
    };
    let origin = match parts {
        [single] => single.origin.clone(),
        _ => Origin::Merged { parts: parts.iter().map(|p| p.origin.clone()).collect() },
    };
    GradedAlgebra {
        origin,
        dims,
        dim_a: parts.iter().map(|p| p.dim_a).sum(),
        dim_m0: parts.iter().map(|p| p.dim_m0).sum(),
        bracket,
        degrees,
    }
}

/// The complex form viewed as a real algebra: every graded dimension doubles.
pub fn complexify(g: &GradedAlgebra) -> GradedAlgebra {
    GradedAlgebra {
        origin: Origin::Complexified { of: Box::new(g.origin.clone()) },
        dims: g.dims.iter().map(|d| 2 * d).collect(),
        dim_a: 2 * g.dim_a,
        dim_m0: 2 * g.dim_m0,
        bracket: None,
        degrees: None,
    }
}

pub fn complexified_class(g: &GradedAlgebra) -> Result<PairingPlan> {
    pairing_plan(&complexify(g))
}

/// Basis element named in a hand-made pairing table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableElement {
    /// Central padding direction.
    R,
    /// Cartan element `H_i`, 1-based.
    H(usize),
    /// Root vector, coefficients in Bourbaki numbering.
    Root(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DocumentedPairing {
    pub name: &'static str,
    pub cartan: &'static str,
    /// Slot `i` pairs `nminus[i]` with `nplus[i]` at class value `class[i]`.
    pub class: Vec<i64>,
    pub nminus: Vec<TableElement>,
    pub nplus: Vec<TableElement>,
}

fn elements(spec: &[&str]) -> Vec<TableElement> {
    spec.iter()
        .map(|s| match *s {
            "R" => TableElement::R,
            h if h.starts_with('H') => TableElement::H(h[1..].parse().expect("table literal")),
            r => TableElement::Root(r.split(',').map(|c| c.trim().parse().expect("table literal")).collect()),
        })
        .collect()
}

/// Hand-made pairings for `sl(3)`, `sl(4)`, `sl(5)` and `g_2`, found root by root
/// rather than from the height grading.
///
/// The `sl(4)` and `sl(5)` tables are kept as published and do not certify.
/// In `sl(4)` the root `(1,1,1)` sits at class value 3 together with
/// `(1,1,0)` and `(0,0,1)`. In `sl(5)` the bracket of `(-1,-1,-1,0)` with
/// `(0,0,0,-1)` pairs to `+1`. The `sl(4)` class is still reached by [`realize`].
///
/// The `g_2` table is written in the opposite numbering (long root first); it
/// is converted here so that `α_1` is short.
pub fn documented_pairings() -> Vec<DocumentedPairing> {
    let swap_g2 = |v: Vec<TableElement>| -> Vec<TableElement> {
        v.into_iter()
            .map(|e| match e {
                TableElement::Root(c) => TableElement::Root(vec![c[1], c[0]]),
                TableElement::H(i) => TableElement::H(3 - i),
                TableElement::R => TableElement::R,
            })
            .collect()
    };
    vec![
        DocumentedPairing {
            name: "sl(3,R)+R^2",
            cartan: "A2",
            class: vec![5, 3, 3, 1, 1],
            nplus: elements(&["R", "R", "1,1", "1,0", "0,1"]),
            nminus: elements(&["-1,-1", "0,-1", "-1,0", "H1", "H2"]),
        },
        DocumentedPairing {
            name: "sl(4,R)+R^3",
            cartan: "A3",
            class: vec![7, 5, 5, 3, 3, 3, 1, 1, 1],
            nplus: elements(&["R", "R", "R", "1,1,1", "0,1,1", "1,1,0", "1,0,0", "0,1,0", "0,0,1"]),
            nminus: elements(&["-1,-1,-1", "0,-1,-1", "-1,-1,0", "-1,0,0", "0,0,-1", "0,-1,0", "H1", "H2", "H3"]),
        },
        DocumentedPairing {
            name: "sl(5,R)+R^4",
            cartan: "A4",
            class: vec![11, 7, 7, 7, 7, 5, 5, 3, 3, 3, 1, 1, 1, 1],
            nplus: elements(&[
                "R", "R", "R", "R", "1,1,1,1", "0,1,1,1", "1,1,1,0", "0,0,1,1", "1,1,0,0", "0,1,1,0", "1,0,0,0",
                "0,1,0,0", "0,0,1,0", "0,0,0,1",
            ]),
            nminus: elements(&[
                "-1,-1,-1,-1",
                "-1,-1,-1,0",
                "0,-1,-1,-1",
                "-1,-1,0,0",
                "0,0,-1,-1",
                "0,-1,-1,0",
                "-1,0,0,0",
                "0,0,0,-1",
                "0,0,-1,0",
                "0,-1,0,0",
                "H1",
                "H2",
                "H3",
                "H4",
            ]),
        },
        DocumentedPairing {
            name: "g2+R^2",
            cartan: "G2",
            class: vec![15, 11, 9, 7, 5, 3, 1, 1],
            nplus: swap_g2(elements(&["R", "R", "2,3", "1,3", "1,2", "1,1", "1,0", "0,1"])),
            nminus: swap_g2(elements(&["-2,-3", "-1,-3", "-1,-2", "-1,-1", "-1,0", "0,-1", "H1", "H2"])),
        },
    ]
}

/// Builds and certifies the realization described by a hand-made table.
pub fn realize_documented(d: &DocumentedPairing) -> Result<NullConeRealization> {
    let c = CartanMatrix::parse(d.cartan)?;
    let g = chevalley_split_form(&c);
    let t = g.bracket.as_ref().expect("split forms carry a bracket");
    let roots = positive_roots(&c);
    let r = c.rank;
    let locate = |e: &TableElement| -> Result<Option<usize>> {
        Ok(match e {
            TableElement::R => None,
            TableElement::H(i) if (1..=r).contains(i) => Some(i - 1),
            TableElement::Root(v) => {
                let neg = v.iter().all(|&x| x <= 0);
                let abs: Vec<i64> = v.iter().map(|x| x.abs()).collect();
                let idx = roots
                    .iter()
                    .position(|root| root.0 == abs)
                    .ok_or_else(|| Error::PlanMismatch(format!("{v:?} is not a root of {}", d.cartan)))?;
                Some(r + idx + if neg { roots.len() } else { 0 })
            }
            TableElement::H(i) => return Err(Error::PlanMismatch(format!("H{i} out of range"))),
        })
    };
    let p = d.class.len();
    if d.nminus.len() != p || d.nplus.len() != p {
        return Err(Error::PlanMismatch(format!("{} has ragged columns", d.name)));
    }
    let mut new_pos = vec![usize::MAX; t.dim()];
    for s in 0..p {
        for (e, offset) in [(&d.nminus[s], 0), (&d.nplus[s], 1)] {
            if let Some(old) = locate(e)? {
                if new_pos[old] != usize::MAX {
                    return Err(Error::PlanMismatch(format!("{} uses a basis element twice", d.name)));
                }
                new_pos[old] = 2 * s + offset;
            }
        }
    }
    if new_pos.contains(&usize::MAX) {
        return Err(Error::PlanMismatch(format!("{} does not cover the basis", d.name)));
    }
    let algebra = t.relabel(&new_pos, None, 2 * p);
    let class = ClassVector::from_ints(&d.class)?;
    let provenance = Provenance {
        origin: g.origin.clone(),
        construction: format!("documented pairing {}", d.name),
        class: class.to_string(),
        conditional: false,
    };
    finish(algebra, class, provenance)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AppendixTable {
    ClassicalSplitCompactComplex,
    ClassicalOtherRealForms,
    Exceptional,
}

/// One appendix family: identifier, table, parameter names and smallest values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Family {
    pub id: &'static str,
    pub table: AppendixTable,
    pub params: &'static [&'static str],
}

const CLASSICAL: [&str; 12] = [
    "sl(n+1,R)",
    "su(n+1)",
    "sl(n+1,C)",
    "so(n+1,n)",
    "so(2n+1)",
    "so(2n+1,C)",
    "sp(2n,R)",
    "sp(n)",
    "sp(2n,C)",
    "so(n,n)",
    "so(2n)",
    "so(2n,C)",
];
const OTHER: [&str; 5] = ["su*(2n)", "su(p,q)", "so(p+1,q)", "sp(2p,2q)", "so*(2n)"];
const EXCEPTIONAL: [(&str, [i64; 5]); 22] = [
    ("g2 split", [0, 2, 6, 2, 16]),
    ("g2 compact", [14, 0, 0, 14, 28]),
    ("g2^C", [0, 4, 12, 4, 32]),
    ("f4 split", [0, 4, 24, 4, 56]),
    ("f4^{-20}", [21, 1, 15, 22, 74]),
    ("f4 compact", [52, 0, 0, 52, 104]),
    ("f4^C", [0, 8, 48, 8, 112]),
    ("e6 split", [0, 6, 36, 6, 84]),
    ("e6^2", [2, 4, 36, 6, 84]),
    ("e6^{-14}", [16, 2, 30, 18, 96]),
    ("e6^{-26}", [28, 2, 24, 30, 108]),
    ("e6 compact", [78, 0, 0, 78, 156]),
    ("e6^C", [0, 12, 72, 12, 168]),
    ("e7 split", [0, 7, 63, 7, 140]),
    ("e7^{-5}", [9, 4, 60, 13, 146]),
    ("e7^{-25}", [28, 3, 51, 31, 164]),
    ("e7 compact", [133, 0, 0, 133, 266]),
    ("e7^C", [0, 14, 126, 14, 280]),
    ("e8 split", [0, 8, 120, 8, 256]),
    ("e8^{-24}", [28, 4, 108, 32, 280]),
    ("e8 compact", [248, 0, 0, 248, 496]),
    ("e8^C", [0, 16, 240, 16, 512]),
];

pub fn appendix_families() -> Vec<Family> {
    let mut out: Vec<Family> = CLASSICAL
        .iter()
        .map(|&id| Family { id, table: AppendixTable::ClassicalSplitCompactComplex, params: &["n"] })
        .collect();
    for id in OTHER {
        let params: &'static [&'static str] = if id.contains("p,") || id.contains("2p") { &["p", "q"] } else { &["n"] };
        out.push(Family { id, table: AppendixTable::ClassicalOtherRealForms, params });
    }
    for (id, _) in EXCEPTIONAL {
        out.push(Family { id, table: AppendixTable::Exceptional, params: &[] });
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BookkeepingRow {
    pub family: String,
    pub params: Vec<i64>,
    /// Dimension of `g` from its standard formula, independent of the row.
    pub dim_g: i64,
    pub dim_m0: i64,
    pub dim_a: i64,
    pub dim_n: i64,
    pub m: i64,
    pub total_dim: i64,
    /// `dim g = dim m_0 + dim a + 2 dim n`.
    pub dim_identity: bool,
    /// `m = dim m_0 + dim a`.
    pub m_identity: bool,
    /// `total = dim g + m`.
    pub total_identity: bool,
    /// For split and complex rows: `dim a` and `dim n` agree with the root system.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root_check: Option<bool>,
}

impl BookkeepingRow {
    pub fn consistent(&self) -> bool {
        self.dim_identity && self.m_identity && self.total_identity && self.root_check != Some(false)
    }
}

fn out_of_range(family: &str, params: &[i64]) -> Error {
    Error::ParameterOutOfRange(format!("{family} with {params:?}"))
}

fn root_check(kind: CartanType, rank: usize, dim_a: i64, dim_n: i64, factor: i64) -> bool {
    let c = CartanMatrix::new(kind, rank).expect("validated rank");
    let count = positive_roots(&c).len() as i64;
    debug_assert!(classical_positive_root_count(kind, rank).is_none_or(|n| n as i64 == count));
    dim_a == factor * rank as i64 && dim_n == factor * count
}

/// Evaluates an appendix row: `[dim m_0, dim a, dim n, m, total]` as tabulated,
/// plus the three identities and, where applicable, the root-system check.
pub fn realform_bookkeeping(family: &str, params: &[i64]) -> Result<BookkeepingRow> {
    let arity = appendix_families()
        .into_iter()
        .find(|f| f.id == family)
        .ok_or_else(|| Error::UnknownName(family.to_string()))?
        .params
        .len();
    if params.len() != arity {
        return Err(out_of_range(family, params));
    }
    let (row, dim_g, roots): ([i64; 5], i64, Option<(CartanType, usize, i64)>) = if arity == 0 {
        let (_, row) = EXCEPTIONAL.iter().find(|(id, _)| *id == family).expect("listed");
        let (kind, rank, base) = match &family[..2] {
            "g2" => (CartanType::G, 2, 14),
            "f4" => (CartanType::F, 4, 52),
            "e6" => (CartanType::E, 6, 78),
            "e7" => (CartanType::E, 7, 133),
            _ => (CartanType::E, 8, 248),
        };
        let complex = family.ends_with("^C");
        let dim_g = if complex { 2 * base } else { base };
        let roots = if complex {
            Some((kind, rank, 2))
        } else if family.ends_with("split") {
            Some((kind, rank, 1))
        } else {
            None
        };
        (*row, dim_g, roots)
    } else {
        classical_row(family, params)?
    };
    let [dim_m0, dim_a, dim_n, m, total_dim] = row;
    Ok(BookkeepingRow {
        family: family.to_string(),
        params: params.to_vec(),
        dim_g,
        dim_m0,
        dim_a,
        dim_n,
        m,
        total_dim,
        dim_identity: dim_g == dim_m0 + dim_a + 2 * dim_n,
        m_identity: m == dim_m0 + dim_a,
        total_identity: total_dim == dim_g + m,
        root_check: roots.map(|(k, r, f)| root_check(k, r, dim_a, dim_n, f)),
    })
}

type ClassicalRow = ([i64; 5], i64, Option<(CartanType, usize, i64)>);

fn classical_row(family: &str, params: &[i64]) -> Result<ClassicalRow> {
    let bad = || out_of_range(family, params);
    if let [n] = *params {
        let min = match family {
            "sp(2n,R)" | "sp(n)" | "sp(2n,C)" | "su*(2n)" | "so*(2n)" => 2,
            "so(n,n)" | "so(2n)" | "so(2n,C)" => 3,
            _ => 1,
        };
        if n < min {
            return Err(bad());
        }
        let u = n as usize;
        let sl = (n + 1) * (n + 1) - 1;
        let b = n * (2 * n + 1);
        let d = n * (2 * n - 1);
        return Ok(match family {
            "sl(n+1,R)" => ([0, n, n * (n + 1) / 2, n, n * (n + 3)], sl, Some((CartanType::A, u, 1))),
            "su(n+1)" => ([n * (n + 2), 0, 0, n * (n + 2), 2 * n * (n + 2)], sl, None),
            "sl(n+1,C)" => ([0, 2 * n, n * (n + 1), 2 * n, 2 * n * (n + 3)], 2 * sl, Some((CartanType::A, u, 2))),
            "so(n+1,n)" => ([0, n, n * n, n, 2 * n * (n + 1)], b, Some((CartanType::B, u, 1))),
            "so(2n+1)" => ([b, 0, 0, b, 2 * b], b, None),
            "so(2n+1,C)" => ([0, 2 * n, 2 * n * n, 2 * n, 4 * n * (n + 1)], 2 * b, Some((CartanType::B, u, 2))),
            "sp(2n,R)" => ([0, n, n * n, n, 2 * n * (n + 1)], b, Some((CartanType::C, u, 1))),
            "sp(n)" => ([b, 0, 0, b, 2 * b], b, None),
            "sp(2n,C)" => ([0, 2 * n, 2 * n * n, 2 * n, 4 * n * (n + 1)], 2 * b, Some((CartanType::C, u, 2))),
            "so(n,n)" => ([0, n, n * (n - 1), n, 2 * n * n], d, Some((CartanType::D, u, 1))),
            "so(2n)" => ([d, 0, 0, d, 2 * d], d, None),
            "so(2n,C)" => ([0, 2 * n, 2 * n * (n - 1), 2 * n, 4 * n * n], 2 * d, Some((CartanType::D, u, 2))),
            "su*(2n)" => ([3 * n, n - 1, 2 * n * (n - 1), 4 * n - 1, 4 * n * n + 4 * n - 2], 4 * n * n - 1, None),
            "so*(2n)" if n % 2 == 0 => ([2 * n, n / 2, n * (2 * n - 3) / 2, 5 * n / 2, 2 * n * (n + 1)], d, None),
            "so*(2n)" => {
                ([2 * n - 1, (n - 1) / 2, (n - 1) * (2 * n - 1) / 2, (5 * n - 3) / 2, 2 * (n * n + n - 1)], d, None)
            }
            _ => return Err(bad()),
        });
    }
    let [p, q] = *params else { return Err(bad()) };
    let ok = match family {
        "so(p+1,q)" => p > q && q >= 1,
        _ => p >= q && q >= 1,
    };
    if !ok {
        return Err(bad());
    }
    let s = p + q;
    Ok(match family {
        "su(p,q)" => (
            [(p - q).pow(2) + q - 1, q, q * (2 * p - 1), (p - q).pow(2) + 2 * q - 1, 2 * (p * p + q * q) + 2 * q - 2],
            s * s - 1,
            None,
        ),
        "so(p+1,q)" => (
            [(p - q + 1) * (p - q) / 2, q, p * q, ((p - q).pow(2) + p + q) / 2, p * p + q * q + p + q],
            (s + 1) * s / 2,
            None,
        ),
        "sp(2p,2q)" => (
            [
                2 * (p - q).pow(2) + p + 2 * q,
                q,
                (4 * p - 1) * q,
                2 * (p - q).pow(2) + p + 3 * q,
                4 * (p * p + q * q) + 4 * q + 2 * p,
            ],
            s * (2 * s + 1),
            None,
        ),
        _ => return Err(bad()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::jacobi_check;
    use crate::rootsystems::{tabulated_graded_form, TabulatedForm};

    fn split(s: &str) -> GradedAlgebra {
        chevalley_split_form(&CartanMatrix::parse(s).unwrap())
    }

    #[test]
    fn plan_examples() {
        let g2 = pairing_plan(&split("G2")).unwrap();
        assert_eq!(format_class(&g2.class_multiset()), "[11,9,7,5,3×2,1×2]");
        assert_eq!(g2.m, 2);
        assert_eq!(g2.p, 8);
        let f4 = pairing_plan(&split("F4")).unwrap();
        assert_eq!(f4.p, 28);
        assert_eq!(format_class(&f4.class_multiset()), "[23,21,19,17,15×2,13×2,11×3,9×3,7×3,5×3,3×4,1×4]");
        let sp = pairing_plan(&tabulated_graded_form(TabulatedForm::Sp84)).unwrap();
        assert_eq!(format_class(&sp.class_multiset()), "[9×3,7×4,5×7,3×16,1×18]");
        assert_eq!(sp.total_dim(), 96);
    }

    #[test]
    fn tabulated_classes() {
        let cases = [
            (TabulatedForm::F4m20, "[5×7,3×8,1×22]"),
            (TabulatedForm::E7m25, "[11,9×8,7×9,5×16,3×17,1×31]"),
            (TabulatedForm::E8m24, "[23,21,19,17×8,15×9,13×9,11×10,9×17,7×17,5×17,3×18,1×32]"),
            (TabulatedForm::So { p: 5 }, "[7,5×4,3×5,1×8]"),
        ];
        for (form, expected) in cases {
            let plan = pairing_plan(&tabulated_graded_form(form)).unwrap();
            assert_eq!(format_class(&plan.class_multiset()), expected, "{}", form.name());
        }
    }

    #[test]
    fn plan_rejects_growth() {
        let mut g = tabulated_graded_form(TabulatedForm::F4m20);
        g.dims = vec![7, 8];
        assert!(matches!(pairing_plan(&g), Err(Error::NonMonotoneGrading(_))));
    }

    #[test]
    fn realize_sl2() {
        let g = split("A1");
        let r = realize(&g, &pairing_plan(&g).unwrap()).unwrap();
        assert_eq!(r.algebra.dim(), 4);
        assert_eq!(r.class, ClassVector::from_ints(&[3, 1]).unwrap());
        let c = certify_class(&r.layout, &r.algebra, &r.class).unwrap();
        assert!(c.certified && c.saturated);
    }

    #[test]
    fn realize_g2_both_classes() {
        let r = realize_split("G2").unwrap();
        assert_eq!(r.algebra.dim(), 16);
        assert!(jacobi_check(&r.algebra).is_empty());
        let brute = documented_pairings().into_iter().find(|d| d.cartan == "G2").unwrap();
        let b = realize_documented(&brute).unwrap();
        assert_eq!(b.class, ClassVector::from_ints(&[15, 11, 9, 7, 5, 3, 1, 1]).unwrap());
    }

    #[test]
    fn documented_tables_certify() {
        for d in documented_pairings() {
            if d.cartan == "A3" || d.cartan == "A4" {
                assert!(matches!(realize_documented(&d), Err(Error::PlanMismatch(_))));
                continue;
            }
            let r = realize_documented(&d).unwrap();
            assert!(jacobi_check(&r.algebra).is_empty(), "{}", d.name);
        }
    }

    #[test]
    fn dims_only_is_refused() {
        let g = tabulated_graded_form(TabulatedForm::Sp84);
        let plan = pairing_plan(&g).unwrap();
        assert!(matches!(realize(&g, &plan), Err(Error::DimsOnly)));
    }

    #[test]
    fn merges() {
        let aa = semisimple_merge(&[split("A1"), split("A1")]);
        assert_eq!((aa.delta(), aa.dims.clone(), aa.dim_zero()), (1, vec![2], 2));
        let r = realize(&aa, &pairing_plan(&aa).unwrap()).unwrap();
        assert_eq!(r.algebra.dim(), 8);
        assert!(jacobi_check(&r.algebra).is_empty());
        let single = semisimple_merge(&[split("G2")]);
        assert_eq!(single, split("G2"));
        let mixed = semisimple_merge(&[split("A2"), split("A1")]);
        assert_eq!(mixed.dims, vec![3, 1]);
        assert!(realize(&mixed, &pairing_plan(&mixed).unwrap()).is_ok());
    }

    #[test]
    fn complexified() {
        let a2 = complexified_class(&split("A2")).unwrap();
        assert_eq!(format_class(&a2.class_multiset()), "[5×2,3×4,1×4]");
        assert_eq!(a2.total_dim(), 20);
        assert_eq!(complexified_class(&split("G2")).unwrap().total_dim(), 32);
        assert_eq!(complexified_class(&split("A1")).unwrap().total_dim(), 8);
    }

    #[test]
    fn bookkeeping_examples() {
        let r = realform_bookkeeping("su(p,q)", &[3, 2]).unwrap();
        assert_eq!((r.dim_m0, r.dim_a, r.dim_n, r.total_dim, r.dim_g), (2, 2, 10, 28, 24));
        assert!(r.consistent());
        let r = realform_bookkeeping("sl(n+1,R)", &[4]).unwrap();
        assert_eq!((r.m, r.total_dim, r.root_check), (4, 28, Some(true)));
        let r = realform_bookkeeping("su(n+1)", &[2]).unwrap();
        assert_eq!((r.m, r.total_dim), (8, 16));
        assert!(realform_bookkeeping("e8 split", &[]).unwrap().consistent());
        assert!(realform_bookkeeping("so(n,n)", &[2]).is_err());
        assert!(matches!(realform_bookkeeping("so(3,3)", &[]), Err(Error::UnknownName(_))));
    }

    #[test]
    fn so_star_rows_are_inconsistent() {
        for n in 2..=8 {
            assert!(!realform_bookkeeping("so*(2n)", &[n]).unwrap().dim_identity);
        }
    }
}
