//! Exact search for certifying classes and null-frame assignments.
//!
//! A class exists for a weight set `W` iff the polyhedron
//! `{x >= 0 : <x, b> <= -1 for all b in W}` is nonempty. Small problems are
//! solved by Fourier–Motzkin elimination with minimal back-substitution,
//! larger ones by a phase-one simplex with Bland's rule. Both are exact.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{lower_central_series, StructureTensor};
use crate::curvature::killing_operator;
use crate::error::{Error, Result};
use crate::frame::{BoostWeight, ClassVector, FrameLayout, Role};
use crate::linalg::nilpotent_operator_check;
use crate::rational::Rational;

/// Largest `p` handled by Fourier–Motzkin under [`Method::Auto`].
pub const FM_MAX_P: usize = 6;

// Constraint-count ceiling past which elimination hands over to the simplex.
const FM_MAX_CONSTRAINTS: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityProblem {
    p: usize,
    weights: BTreeSet<BoostWeight>,
}

impl FeasibilityProblem {
    pub fn new(p: usize, weights: impl IntoIterator<Item = BoostWeight>) -> Result<Self> {
        let weights: BTreeSet<BoostWeight> = weights.into_iter().collect();
        if let Some(w) = weights.iter().find(|w| w.0.len() != p) {
            return Err(Error::DimensionMismatch { expected: p, got: w.0.len() });
        }
        Ok(FeasibilityProblem { p, weights })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn weights(&self) -> &BTreeSet<BoostWeight> {
        &self.weights
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Auto,
    FourierMotzkin,
    Simplex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoundClass {
    /// Solution in the problem's slot order.
    pub raw: ClassVector,
    pub normalized: ClassVector,
    /// `slot_permutation[i]` is the original 0-based slot at normalized position `i`.
    pub slot_permutation: Vec<usize>,
}

impl FoundClass {
    fn from_raw(raw: Vec<Rational>) -> Self {
        let raw = ClassVector::new(raw).expect("solutions are nonnegative");
        let (normalized, slot_permutation) = raw.normalized();
        FoundClass { raw, normalized, slot_permutation }
    }
}

/// Exact class for the weight set, or `None` when the polyhedron is empty.
pub fn find_class(problem: &FeasibilityProblem) -> Option<FoundClass> {
    find_class_with(problem, Method::Auto)
}

pub fn find_class_with(problem: &FeasibilityProblem, method: Method) -> Option<FoundClass> {
    if problem.weights.is_empty() {
        return Some(FoundClass::from_raw(vec![Rational::one(); problem.p]));
    }
    // A nonnegative weight can never pair below zero.
    if problem.weights.iter().any(|w| w.0.iter().all(|&v| v >= 0)) {
        return None;
    }
    let raw = match method {
        Method::FourierMotzkin => fourier_motzkin(problem).unwrap_or_else(|| simplex(problem)),
        Method::Simplex => simplex(problem),
        Method::Auto if problem.p <= FM_MAX_P => fourier_motzkin(problem).unwrap_or_else(|| simplex(problem)),
        Method::Auto => simplex(problem),
    }?;
    Some(FoundClass::from_raw(raw))
}

/// `Σ coeffs_i x_i <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Constraint {
    coeffs: Vec<Rational>,
    rhs: Rational,
}

impl Constraint {
    /// Positive rescaling so the first nonzero coefficient is ±1.
    fn normalized(mut self) -> Self {
        if let Some(lead) = self.coeffs.iter().find(|c| !c.is_zero()) {
            let scale = lead.abs().recip().expect("nonzero");
            for c in &mut self.coeffs {
                *c *= &scale;
            }
            self.rhs *= &scale;
        }
        self
    }
}

/// Keeps the tightest right-hand side per coefficient vector.
fn tighten(constraints: Vec<Constraint>) -> Option<Vec<Constraint>> {
    let mut best: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
    for c in constraints {
        let c = c.normalized();
        if c.coeffs.iter().all(Rational::is_zero) {
            if c.rhs.is_negative() {
                return None;
            }
            continue;
        }
        best.entry(c.coeffs)
            .and_modify(|r| {
                if c.rhs < *r {
                    *r = c.rhs.clone();
                }
            })
            .or_insert(c.rhs);
    }
    Some(best.into_iter().map(|(coeffs, rhs)| Constraint { coeffs, rhs }).collect())
}

enum Elimination {
    Infeasible,
    TooLarge,
    Systems(Vec<Vec<Constraint>>),
}

fn eliminate(problem: &FeasibilityProblem) -> Elimination {
    let p = problem.p;
    let mut system: Vec<Constraint> = problem
        .weights
        .iter()
        .map(|w| Constraint { coeffs: w.0.iter().map(|&v| Rational::from(v)).collect(), rhs: -Rational::one() })
        .collect();
    for i in 0..p {
        let mut coeffs = vec![Rational::zero(); p];
        coeffs[i] = -Rational::one();
        system.push(Constraint { coeffs, rhs: Rational::zero() });
    }
    let Some(system) = tighten(system) else {
        return Elimination::Infeasible;
    };
    // systems[j] involves only x_0..x_j (j = p-1 is the full system).
    let mut systems = vec![system];
    for j in (1..p).rev() {
        let current = systems.last().expect("nonempty");
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for c in current {
            match c.coeffs[j].signum() {
                1 => pos.push(c),
                -1 => neg.push(c),
                _ => rest.push(c.clone()),
            }
        }
        if pos.len() * neg.len() + rest.len() > FM_MAX_CONSTRAINTS {
            return Elimination::TooLarge;
        }
        for pc in &pos {
            for nc in &neg {
                let (sp, sn) = (nc.coeffs[j].abs(), pc.coeffs[j].clone());
                let coeffs = pc.coeffs.iter().zip(&nc.coeffs).map(|(a, b)| &(a * &sp) + &(b * &sn)).collect();
                rest.push(Constraint { coeffs, rhs: &(&pc.rhs * &sp) + &(&nc.rhs * &sn) });
            }
        }
        match tighten(rest) {
            Some(next) => systems.push(next),
            None => return Elimination::Infeasible,
        }
    }
    systems.reverse();
    Elimination::Systems(systems)
}

/// `None` means the elimination grew too large; `Some(None)` is infeasible.
fn fourier_motzkin(problem: &FeasibilityProblem) -> Option<Option<Vec<Rational>>> {
    let systems = match eliminate(problem) {
        Elimination::Infeasible => return Some(None),
        Elimination::TooLarge => return None,
        Elimination::Systems(s) => s,
    };
    let mut x: Vec<Rational> = Vec::with_capacity(problem.p);
    for (j, system) in systems.iter().enumerate() {
        let mut lower = Rational::zero();
        let mut upper: Option<Rational> = None;
        for c in system {
            let known: Rational = c.coeffs[..j].iter().zip(&x).map(|(a, v)| a * v).sum();
            let slack = &c.rhs - &known;
            let a = &c.coeffs[j];
            if a.is_zero() {
                if slack.is_negative() {
                    return Some(None);
                }
                continue;
            }
            let bound = &slack / a;
            if a.is_positive() {
                upper = Some(upper.map_or(bound.clone(), |u| u.min(bound)));
            } else {
                lower = lower.max(bound);
            }
        }
        if upper.as_ref().is_some_and(|u| *u < lower) {
            return Some(None);
        }
        x.push(lower);
    }
    Some(Some(x))
}

/// Phase-one simplex on `-<b, x> - s + a = 1` with Bland's rule.
fn simplex(problem: &FeasibilityProblem) -> Option<Vec<Rational>> {
    let p = problem.p;
    let m = problem.weights.len();
    let cols = p + 2 * m;
    let mut rows: Vec<Vec<Rational>> = problem
        .weights
        .iter()
        .enumerate()
        .map(|(i, w)| {
            let mut row = vec![Rational::zero(); cols + 1];
            for (j, &v) in w.0.iter().enumerate() {
                row[j] = Rational::from(-v);
            }
            row[p + i] = -Rational::one();
            row[p + m + i] = Rational::one();
            row[cols] = Rational::one();
            row
        })
        .collect();
    let mut basis: Vec<usize> = (0..m).map(|i| p + m + i).collect();
    // Reduced costs of the phase-one objective Σ a_i.
    let mut cost = vec![Rational::zero(); cols + 1];
    for row in &rows {
        for j in 0..p + m {
            cost[j] -= &row[j];
        }
        cost[cols] -= &row[cols];
    }
    while let Some(enter) = (0..cols).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in rows.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[cols] / &row[enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        let (r, _) = leave.expect("phase one is bounded below");
        let inv = rows[r][enter].recip().expect("positive pivot");
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for (v, pv) in cost.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        basis[r] = enter;
    }
    if !cost[cols].is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); p];
    for (i, &b) in basis.iter().enumerate() {
        if b < p {
            x[b] = rows[i][cols].clone();
        }
    }
    Some(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    InfeasibleForAllSearchedFrames,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Skip frames whose `N+ ⊕ H` is not a closed nilpotent subalgebra.
    pub prune: bool,
    /// Evaluate every sign pattern separately instead of sharing the
    /// sign-independent weight support across them.
    pub explicit_signs: bool,
    /// Dimensions above this are reported inconclusive without searching.
    pub max_dim: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { prune: true, explicit_signs: false, max_dim: 10 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub verdict: Verdict,
    pub signature: (usize, usize),
    pub layout: Option<FrameLayout>,
    pub class: Option<ClassVector>,
    /// `permutation[a-1]` is the canonical index that basis element `a` moves to.
    pub permutation: Option<Vec<usize>>,
    pub signs: Option<Vec<i8>>,
    pub frames_searched: u64,
    pub pruned_by_nilpotency: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub killing_nilpotent: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Permutation of `0..n` with lexicographic rank `rank`.
fn unrank(n: usize, mut rank: u64) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let f = factorial(i);
        let idx = (rank / f) as usize;
        rank %= f;
        out.push(pool.remove(idx));
    }
    out
}

struct SearchContext<'a> {
    t: &'a StructureTensor,
    p: usize,
    canonical: Vec<Role>,
    admissible: Option<Vec<bool>>,
}

impl SearchContext<'_> {
    fn upper_mask(&self, perm: &[usize]) -> usize {
        perm.iter()
            .enumerate()
            .filter(|(_, &pos)| !matches!(self.canonical[pos], Role::NMinus(_)))
            .fold(0, |m, (a, _)| m | (1 << a))
    }

    fn is_pruned(&self, perm: &[usize]) -> bool {
        self.admissible.as_ref().is_some_and(|ok| !ok[self.upper_mask(perm)])
    }

    fn weights(&self, t: &StructureTensor, perm: &[usize]) -> BTreeSet<BoostWeight> {
        let lam = |a: usize| match self.canonical[perm[a - 1]] {
            Role::NMinus(s) => Some((s - 1, -1)),
            Role::NPlus(s) => Some((s - 1, 1)),
            Role::Transverse => None,
        };
        t.entries()
            .map(|(a, b, c, _)| {
                let mut w = vec![0i64; self.p];
                for (idx, mult) in [(a, 1), (b, 1), (c, -1)] {
                    if let Some((s, sign)) = lam(idx) {
                        w[s] += mult * sign;
                    }
                }
                BoostWeight(w)
            })
            .collect()
    }

    /// First sign mask admitting a class for this permutation.
    fn evaluate(&self, perm: &[usize], explicit_signs: bool) -> Option<(usize, FoundClass)> {
        if self.is_pruned(perm) {
            return None;
        }
        let n = self.t.dim();
        let masks = if explicit_signs { 1usize << n } else { 1 };
        for mask in 0..masks {
            let weights = if mask == 0 {
                self.weights(self.t, perm)
            } else {
                let signs: Vec<i8> = (0..n).map(|a| if mask >> a & 1 == 1 { -1 } else { 1 }).collect();
                let identity: Vec<usize> = (0..n).collect();
                let flipped = self.t.relabel(&identity, Some(&signs), n);
                self.weights(&flipped, perm)
            };
            let problem = FeasibilityProblem { p: self.p, weights };
            if let Some(found) = find_class(&problem) {
                return Some((mask, found));
            }
        }
        None
    }
}

/// Subsets (as bitmasks) of size `p + k` spanning a closed nilpotent coordinate subalgebra.
fn admissible_upper_sets(t: &StructureTensor, size: usize) -> Vec<bool> {
    let n = t.dim();
    (0..1usize << n)
        .map(|mask| {
            if mask.count_ones() as usize != size {
                return false;
            }
            let positions: Vec<usize> = (0..n).filter(|a| mask >> a & 1 == 1).collect();
            t.coordinate_subalgebra(&positions).is_some_and(|sub| lower_central_series(&sub, true).is_nilpotent)
        })
        .collect()
}

/// Searches index permutations (lexicographic) times sign flips for a null
/// frame of signature `(p, k)` in which the bracket admits a class.
///
/// Sign flips multiply components by ±1 and never change the weight support,
/// so by default one evaluation per permutation covers all `2^n` sign
/// patterns; `explicit_signs` evaluates them one by one instead.
pub fn search_frame(t: &StructureTensor, signature: (usize, usize), opts: &SearchOptions) -> Result<MembershipReport> {
    let (p, k) = signature;
    let n = t.dim();
    if 2 * p + k != n {
        return Err(Error::DimensionMismatch { expected: n, got: 2 * p + k });
    }
    let mut report = MembershipReport {
        verdict: Verdict::Inconclusive,
        signature,
        layout: None,
        class: None,
        permutation: None,
        signs: None,
        frames_searched: 0,
        pruned_by_nilpotency: 0,
        killing_nilpotent: None,
        note: None,
    };
    if n > opts.max_dim {
        report.note = Some(format!("dimension {n} exceeds the search limit {}", opts.max_dim));
        return Ok(report);
    }
    let canonical = FrameLayout::canonical(p, k).roles().to_vec();
    let admissible = opts.prune.then(|| admissible_upper_sets(t, p + k));
    let ctx = SearchContext { t, p, canonical, admissible };
    let total = factorial(n);
    let per_perm = 1u64 << n;

    let hit = (0..total)
        .into_par_iter()
        .map(|r| (r, unrank(n, r)))
        .find_first(|(_, perm)| ctx.evaluate(perm, opts.explicit_signs).is_some());
    let searched_perms = hit.as_ref().map_or(total, |(r, _)| *r);
    let pruned = (0..searched_perms).filter(|&r| ctx.is_pruned(&unrank(n, r))).count() as u64;
    report.pruned_by_nilpotency = pruned * per_perm;

    let Some((_, perm)) = hit else {
        report.verdict = Verdict::InfeasibleForAllSearchedFrames;
        report.frames_searched = total * per_perm;
        return Ok(report);
    };
    let (mask, found) = ctx.evaluate(&perm, opts.explicit_signs).expect("witness re-evaluates");
    report.frames_searched = searched_perms * per_perm + mask as u64 + 1;

    let roles: Vec<Role> = perm.iter().map(|&pos| ctx.canonical[pos]).collect();
    let layout = FrameLayout::from_roles(roles)?.permute_slots(&found.slot_permutation);
    let final_perm: Vec<usize> = layout
        .roles()
        .iter()
        .zip(&perm)
        .map(|(role, &pos)| match role {
            Role::NMinus(s) => 2 * s - 1,
            Role::NPlus(s) => 2 * s,
            Role::Transverse => pos + 1,
        })
        .collect();
    report.verdict = Verdict::Certified;
    report.layout = Some(layout);
    report.class = Some(found.normalized);
    report.permutation = Some(final_perm);
    report.signs = Some((0..n).map(|a| if mask >> a & 1 == 1 { -1 } else { 1 }).collect());
    Ok(report)
}

/// Runs [`search_frame`] per signature and adds Killing-operator nilpotency
/// for every layout found.
pub fn membership_report(
    t: &StructureTensor,
    signatures: &[(usize, usize)],
    opts: &SearchOptions,
) -> Result<Vec<MembershipReport>> {
    signatures
        .iter()
        .map(|&sig| {
            let mut report = search_frame(t, sig, opts)?;
            if let Some(layout) = &report.layout {
                let k = killing_operator(layout, t)?;
                report.killing_nilpotent = Some(nilpotent_operator_check(&k)?.nilpotent);
            }
            Ok(report)
        })
        .collect()
}
