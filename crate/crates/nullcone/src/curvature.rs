//! Curvature of the left-invariant metric defined by a null frame.
//!
//! The frame metric pairs each index with its partner (`g_{ab} = δ_{a b'}`),
//! so raising or lowering an index is the substitution `a -> a'`. Everything
//! is stored sparsely; the Riemann tensor keeps only `a < b` in its last pair.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{killing_form, StructureTensor};
use crate::error::{Error, Result};
use crate::frame::{ClassVector, FrameLayout};
use crate::linalg::{Accumulator, Matrix, SparseMatrix, SparseVec};
use crate::rational::{q, Rational};

fn check_dim(l: &FrameLayout, t: &StructureTensor) -> Result<()> {
    if l.dim() != t.dim() {
        return Err(Error::DimensionMismatch { expected: l.dim(), got: t.dim() });
    }
    Ok(())
}

/// `Γ^c_{ab}` with `∇_{e_a} e_b = Γ^c_{ab} e_c`, keyed `(a, b, c)` 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectionCoefficients {
    pub dim: usize,
    pub entries: BTreeMap<(usize, usize, usize), Rational>,
}

impl ConnectionCoefficients {
    pub fn get(&self, a: usize, b: usize, c: usize) -> Rational {
        self.entries.get(&(a, b, c)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Γ^c_{ab} - Γ^c_{ba} = C^c_{ab}` for every triple.
    pub fn is_torsion_free(&self, t: &StructureTensor) -> bool {
        let n = self.dim;
        (1..=n).all(|a| (1..=n).all(|b| (1..=n).all(|c| &self.get(a, b, c) - &self.get(b, a, c) == t.get(a, b, c))))
    }

    /// `Γ_{abc} + Γ_{acb} = 0` with `Γ_{abc} = Γ^{c'}_{ab}`.
    pub fn is_metric_compatible(&self, l: &FrameLayout) -> bool {
        let n = self.dim;
        (1..=n).all(|a| {
            (1..=n).all(|b| (1..=n).all(|c| (&self.get(a, b, l.partner(c)) + &self.get(a, c, l.partner(b))).is_zero()))
        })
    }

    /// `ops[a][c]` is `∇_{e_a} e_c` as a sparse 0-based vector.
    fn operators(&self) -> Vec<Vec<SparseVec>> {
        let mut ops = vec![vec![Vec::new(); self.dim]; self.dim];
        for (&(a, b, c), v) in &self.entries {
            ops[a - 1][b - 1].push((c - 1, v.clone()));
        }
        ops
    }
}

/// Koszul formula in the left-invariant frame:
/// `Γ^c_{ab} = ½(C^c_{ab} - C^{a'}_{bc'} + C^{b'}_{c'a})`.
pub fn levi_civita(l: &FrameLayout, t: &StructureTensor) -> Result<ConnectionCoefficients> {
    check_dim(l, t)?;
    let half = q(1, 2);
    let pt = |a: usize| l.partner(a);
    let mut acc: BTreeMap<(usize, usize, usize), Rational> = BTreeMap::new();
    let mut add = |key: (usize, usize, usize), v: Rational| {
        *acc.entry(key).or_default() += v;
    };
    for (x, y, z, v) in t.entries() {
        let h = &half * v;
        add((x, y, z), h.clone());
        add((y, x, z), -&h);
        add((pt(z), x, pt(y)), -&h);
        add((pt(z), y, pt(x)), h.clone());
        add((y, pt(z), pt(x)), h.clone());
        add((x, pt(z), pt(y)), -h);
    }
    acc.retain(|_, v| !v.is_zero());
    Ok(ConnectionCoefficients { dim: t.dim(), entries: acc })
}

/// `(a, b, c, d)` index of `R^d_{cab}`.
pub type RiemannIndex = (usize, usize, usize, usize);

/// `R^d_{cab}`, the `e_d` coefficient of `R(e_a, e_b) e_c`, keyed `(a, b, c, d)`
/// 1-based with `a < b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RiemannTensor {
    pub dim: usize,
    pub entries: BTreeMap<RiemannIndex, Rational>,
}

impl RiemannTensor {
    /// `R^d_{cab}` for any `a, b`.
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> Rational {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => self.entries.get(&(a, b, c, d)).cloned().unwrap_or_default(),
            std::cmp::Ordering::Greater => -self.entries.get(&(b, a, c, d)).cloned().unwrap_or_default(),
            std::cmp::Ordering::Equal => Rational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// `R^d_{cab} + R^d_{abc} + R^d_{bca} = 0`.
    pub fn satisfies_bianchi(&self) -> bool {
        let n = self.dim;
        (1..=n).all(|a| {
            (a + 1..=n).all(|b| {
                (b + 1..=n).all(|c| {
                    (1..=n).all(|d| (self.get(a, b, c, d) + self.get(b, c, a, d) + self.get(c, a, b, d)).is_zero())
                })
            })
        })
    }

    /// `R_{dcab} = R_{abdc}` with the first index lowered.
    pub fn has_pair_symmetry(&self, l: &FrameLayout) -> bool {
        let lowered = |d: usize, c: usize, a: usize, b: usize| self.get(a, b, c, l.partner(d));
        let n = self.dim;
        (1..=n).all(|a| (1..=n).all(|b| (1..=n).all(|c| (1..=n).all(|d| lowered(d, c, a, b) == lowered(a, b, d, c)))))
    }
}

/// `R(e_a,e_b) = [∇_a, ∇_b] - C^e_{ab} ∇_e` acting on `e_c`.
pub fn riemann(l: &FrameLayout, t: &StructureTensor, gamma: &ConnectionCoefficients) -> Result<RiemannTensor> {
    check_dim(l, t)?;
    if gamma.dim != t.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), got: gamma.dim });
    }
    let n = t.dim();
    let ops = gamma.operators();
    let rows: Vec<Vec<(RiemannIndex, Rational)>> = (0..n)
        .into_par_iter()
        .map(|a| {
            let mut acc = Accumulator::new(n);
            let mut out = Vec::new();
            for b in a + 1..n {
                let bracket = t.basis_bracket(a, b);
                for c in 0..n {
                    for (e, ge) in &ops[b][c] {
                        for (d, gd) in &ops[a][*e] {
                            acc.add_product(*d, ge, gd);
                        }
                    }
                    for (e, ge) in &ops[a][c] {
                        let ge = -ge;
                        for (d, gd) in &ops[b][*e] {
                            acc.add_product(*d, &ge, gd);
                        }
                    }
                    for (e, cv) in bracket {
                        let cv = -cv;
                        for (d, gd) in &ops[*e][c] {
                            acc.add_product(*d, &cv, gd);
                        }
                    }
                    for (d, v) in acc.take() {
                        out.push(((a + 1, b + 1, c + 1, d + 1), v));
                    }
                }
            }
            out
        })
        .collect();
    Ok(RiemannTensor { dim: n, entries: rows.into_iter().flatten().collect() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ricci {
    /// `Ric_{cb} = Σ_a R^a_{cab}`.
    pub form: Matrix,
    /// `Ric^a_b = g^{ac} Ric_{cb}`.
    pub operator: Matrix,
}

pub fn ricci(riem: &RiemannTensor, l: &FrameLayout) -> Result<Ricci> {
    let n = riem.dim;
    if l.dim() != n {
        return Err(Error::DimensionMismatch { expected: l.dim(), got: n });
    }
    let mut form = Matrix::zeros(n, n);
    for (&(a, b, c, d), v) in &riem.entries {
        if d == a {
            let cur = form.get(c - 1, b - 1) + v;
            form.set(c - 1, b - 1, cur);
        }
        if d == b {
            let cur = form.get(c - 1, a - 1) - v;
            form.set(c - 1, a - 1, cur);
        }
    }
    let operator = raise_first(&form, l);
    Ok(Ricci { form, operator })
}

fn raise_first(m: &Matrix, l: &FrameLayout) -> Matrix {
    let n = m.rows();
    let rows = (0..n).map(|a| m.row(l.partner0(a)).to_vec()).collect();
    Matrix::from_rows(rows).expect("square")
}

/// `K = g^{-1} B`, so that `g(K v, w) = B(v, w)`.
pub fn killing_operator(l: &FrameLayout, t: &StructureTensor) -> Result<Matrix> {
    check_dim(l, t)?;
    Ok(raise_first(killing_form(t).matrix(), l))
}

/// Named scalar invariants. `riem_cubic` is `R_{ab}^{cd} R_{cd}^{ef} R_{ef}^{ab}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantSuite {
    #[serde(rename = "R")]
    pub ricci_scalar: Rational,
    pub ricci_traces: Vec<Rational>,
    pub kretschmann: Rational,
    pub ricci_cubic: Rational,
    pub riem_cubic: Rational,
    #[serde(rename = "dRiem_sq")]
    pub d_riem_sq: Rational,
    pub killing_traces: Vec<Rational>,
}

impl InvariantSuite {
    pub fn is_all_zero(&self) -> bool {
        self.named().iter().all(|(_, v)| v.is_zero())
    }

    /// Flattened `(name, value)` list, traces indexed from 1.
    pub fn named(&self) -> Vec<(String, Rational)> {
        let mut out = vec![
            ("R".to_string(), self.ricci_scalar.clone()),
            ("kretschmann".to_string(), self.kretschmann.clone()),
            ("ricci_cubic".to_string(), self.ricci_cubic.clone()),
            ("riem_cubic".to_string(), self.riem_cubic.clone()),
            ("dRiem_sq".to_string(), self.d_riem_sq.clone()),
        ];
        for (m, v) in self.ricci_traces.iter().enumerate() {
            out.push((format!("ricci_traces[{}]", m + 1), v.clone()));
        }
        for (m, v) in self.killing_traces.iter().enumerate() {
            out.push((format!("killing_traces[{}]", m + 1), v.clone()));
        }
        out
    }
}

pub fn invariant_suite(l: &FrameLayout, t: &StructureTensor) -> Result<InvariantSuite> {
    invariant_suite_graded(l, t, None)
}

/// Same values as [`invariant_suite`]. A class vector grades every frame
/// component by `Σ <x, λ(index)>` over its lowered indices; full contractions
/// only pair degree `δ` with `-δ`, so derivative terms whose degree has no
/// opposite partner are never formed.
pub fn invariant_suite_graded(
    l: &FrameLayout,
    t: &StructureTensor,
    grading: Option<&ClassVector>,
) -> Result<InvariantSuite> {
    check_dim(l, t)?;
    let n = t.dim();
    if let Some(x) = grading {
        if x.len() != l.p() {
            return Err(Error::DimensionMismatch { expected: l.p(), got: x.len() });
        }
    }
    let gamma = levi_civita(l, t)?;
    let riem = riemann(l, t, &gamma)?;
    let ric = ricci(&riem, l)?;

    let ric_op = ric.operator.to_sparse();
    let ricci_scalar = ric_op.trace();
    let ricci_traces = ric_op.power_traces(n);
    let ric2 = ric_op.mul(&ric_op)?;
    let ricci_cubic = ric2.trace_of_product(&ric_op);

    let pt = |a: usize| l.partner(a);
    let kretschmann: Rational =
        riem.entries.par_iter().map(|(&(a, b, c, d), v)| v * &riem.get(pt(a), pt(b), pt(c), pt(d))).sum::<Rational>()
            * q(2, 1);

    let riem_cubic = riem_cubic(&riem, l)?;
    let pairings = match grading {
        Some(x) => l.index_pairings(x),
        None => vec![Rational::zero(); n],
    };
    let d_riem_sq = d_riem_sq(&riem, &gamma, l, &pairings);
    let killing_traces = killing_operator(l, t)?.to_sparse().power_traces(n);

    Ok(InvariantSuite { ricci_scalar, ricci_traces, kretschmann, ricci_cubic, riem_cubic, d_riem_sq, killing_traces })
}

fn pair_index(n: usize, a: usize, b: usize) -> usize {
    // 0-based a < b, rows ordered (0,1), (0,2), ..., (1,2), ...
    a * (2 * n - a - 1) / 2 + (b - a - 1)
}

/// `8 tr(M^3)` with `M_{(ab),(cd)} = R_{ab}^{cd}` over pairs `a < b`.
///
/// Columns come from the stored `x < y` orientation only, while rows receive
/// both orientations of the first pair, so the assembled matrix is `2M` and
/// its cube trace is already `8 tr(M^3)`.
fn riem_cubic(riem: &RiemannTensor, l: &FrameLayout) -> Result<Rational> {
    let n = riem.dim;
    if n < 2 {
        return Ok(Rational::zero());
    }
    let pairs = n * (n - 1) / 2;
    let mut rows: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); pairs];
    // R^w_{zxy} = R_{w'z xy} = R_{w'z}^{x'y'}
    for (&(x, y, z, w), v) in &riem.entries {
        let (r1, r2) = (l.partner0(w - 1), z - 1);
        let (c1, c2) = (l.partner0(x - 1), l.partner0(y - 1));
        if r1 == r2 || c1 == c2 {
            continue;
        }
        let mut val = v.clone();
        let (r1, r2) = if r1 > r2 {
            val = -val;
            (r2, r1)
        } else {
            (r1, r2)
        };
        let (c1, c2) = if c1 > c2 {
            val = -val;
            (c2, c1)
        } else {
            (c1, c2)
        };
        *rows[pair_index(n, r1, r2)].entry(pair_index(n, c1, c2)).or_default() += val;
    }
    let rows: Vec<SparseVec> =
        rows.into_iter().map(|r| r.into_iter().filter(|(_, v)| !v.is_zero()).collect()).collect();
    let m = SparseMatrix::from_rows(rows, pairs);
    let m2 = m.mul(&m)?;
    Ok(m2.trace_of_product(&m))
}

/// `∇_e R_{abcd} ∇^e R^{abcd}` with the first Riemann index lowered.
fn d_riem_sq(riem: &RiemannTensor, gamma: &ConnectionCoefficients, l: &FrameLayout, pi: &[Rational]) -> Rational {
    let n = riem.dim;
    let deg = |idx: &[usize]| -> Rational { idx.iter().map(|&i| &pi[i]).sum() };

    // Q_{wzxy} = R^{w'}_{zxy}, 0-based, all orientations of the last pair.
    let mut q_entries: Vec<([usize; 4], Rational, Rational)> = Vec::with_capacity(2 * riem.nnz());
    for (&(x, y, z, w), v) in &riem.entries {
        let key = [l.partner0(w - 1), z - 1, x - 1, y - 1];
        let d = deg(&key);
        q_entries.push((key, v.clone(), d.clone()));
        q_entries.push(([key[0], key[1], key[3], key[2]], -v, d));
    }
    // Γ^f_{ea} grouped by the upper index, with degree <x,λ(e)+λ(a)-λ(f)>.
    let mut by_upper: Vec<Vec<(usize, usize, Rational, Rational)>> = vec![Vec::new(); n];
    for (&(e, a, f), g) in &gamma.entries {
        let d = &(&pi[e - 1] + &pi[a - 1]) - &pi[f - 1];
        by_upper[f - 1].push((e - 1, a - 1, g.clone(), d));
    }
    let gdeg: BTreeSet<&Rational> = by_upper.iter().flatten().map(|(_, _, _, d)| d).collect();
    let qdeg: BTreeSet<&Rational> = q_entries.iter().map(|(_, _, d)| d).collect();
    let sums: BTreeSet<Rational> = gdeg.iter().flat_map(|g| qdeg.iter().map(move |r| *g + *r)).collect();
    let admissible: BTreeSet<Rational> = sums.iter().filter(|d| sums.contains(&-*d)).cloned().collect();
    if admissible.is_empty() {
        return Rational::zero();
    }

    let partial: Vec<HashMap<[usize; 5], Rational>> = q_entries
        .par_chunks(4096)
        .map(|chunk| {
            let mut acc: HashMap<[usize; 5], Rational> = HashMap::new();
            for (idx, v, r) in chunk {
                for s in 0..4 {
                    for (e, a, g, gd) in &by_upper[idx[s]] {
                        if !admissible.contains(&(gd + r)) {
                            continue;
                        }
                        let mut key = [*e, idx[0], idx[1], idx[2], idx[3]];
                        key[s + 1] = *a;
                        *acc.entry(key).or_default() -= g * v;
                    }
                }
            }
            acc
        })
        .collect();
    let mut dq: HashMap<[usize; 5], Rational> = HashMap::new();
    for part in partial {
        for (k, v) in part {
            *dq.entry(k).or_default() += v;
        }
    }
    dq.retain(|_, v| !v.is_zero());
    dq.par_iter()
        .map(|(k, v)| {
            let dual = k.map(|i| l.partner0(i));
            dq.get(&dual).map_or(Rational::zero(), |w| v * w)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::compose;
    use crate::frame::{apply_frame_map, certify_class, FrameMap};
    use crate::linalg::nilpotent_operator_check;

    fn sl2_semidirect() -> StructureTensor {
        StructureTensor::from_triples(
            5,
            &[(1, 3, 1, 2), (3, 5, 5, 2), (1, 5, 3, 1), (3, 2, 2, 1), (4, 3, 4, 1), (5, 4, 2, 1), (2, 1, 4, 1)],
        )
        .unwrap()
    }

    fn su2_plus_r() -> StructureTensor {
        let su2 = StructureTensor::from_triples(3, &[(1, 2, 3, 1), (2, 3, 1, 1), (3, 1, 2, 1)]).unwrap();
        compose(&[su2], 1)
    }

    #[test]
    fn abelian_is_flat() {
        let l = FrameLayout::canonical(1, 1);
        let t = StructureTensor::abelian(3);
        assert!(levi_civita(&l, &t).unwrap().is_zero());
        assert!(invariant_suite(&l, &t).unwrap().is_all_zero());
    }

    #[test]
    fn connection_identities() {
        for (t, l) in [
            (sl2_semidirect(), FrameLayout::canonical(2, 1)),
            (su2_plus_r(), FrameLayout::canonical(1, 2)),
            (StructureTensor::from_triples(2, &[(1, 2, 2, 1)]).unwrap(), FrameLayout::canonical(1, 0)),
        ] {
            let g = levi_civita(&l, &t).unwrap();
            assert!(g.is_torsion_free(&t));
            assert!(g.is_metric_compatible(&l));
            let r = riemann(&l, &t, &g).unwrap();
            assert!(r.satisfies_bianchi());
            assert!(r.has_pair_symmetry(&l));
        }
    }

    #[test]
    fn sl2_semidirect_ricci_single_component() {
        let l = FrameLayout::canonical(2, 1);
        let t = sl2_semidirect();
        let g = levi_civita(&l, &t).unwrap();
        let ric = ricci(&riemann(&l, &t, &g).unwrap(), &l).unwrap();
        let mut expected = Matrix::zeros(5, 5);
        expected.set(2, 2, q(-6, 1));
        assert_eq!(ric.form, expected);
        let k = nilpotent_operator_check(&killing_operator(&l, &t).unwrap()).unwrap();
        assert!(k.nilpotent);
        assert_eq!(k.rank_sequence, vec![3, 1, 0]);
    }

    #[test]
    fn sl2_plus_r_killing_chain() {
        let t = StructureTensor::from_triples(4, &[(1, 3, 1, 2), (3, 4, 4, 2), (1, 4, 3, 1)]).unwrap();
        let l = FrameLayout::canonical(2, 0);
        let b = killing_form(&t);
        assert_eq!(*b.get(3, 3), q(8, 1));
        assert_eq!(*b.get(1, 4), q(-4, 1));
        let k = nilpotent_operator_check(&killing_operator(&l, &t).unwrap()).unwrap();
        assert!(k.nilpotent);
        assert_eq!(k.index, Some(4));
        assert_eq!(k.rank_sequence, vec![3, 2, 1, 0]);
    }

    #[test]
    fn killing_operator_defining_relation() {
        let t = sl2_semidirect();
        let l = FrameLayout::canonical(2, 1);
        let k = killing_operator(&l, &t).unwrap();
        let b = killing_form(&t);
        for v in 1..=5 {
            for w in 1..=5 {
                // g(K e_v, e_w) = K^{w'}_v
                assert_eq!(k.get(l.partner(w) - 1, v - 1), b.get(v, w));
            }
        }
    }

    #[test]
    fn su2_plus_r_is_not_vsi() {
        let t = su2_plus_r();
        for l in [FrameLayout::canonical(1, 2), FrameLayout::canonical(2, 0)] {
            let s = invariant_suite(&l, &t).unwrap();
            assert!(!s.is_all_zero());
            assert!(!s.killing_traces[1].is_zero());
        }
    }

    #[test]
    fn s545_suite_vanishes() {
        let t = crate::frame::tests::s545();
        let l = FrameLayout::canonical(2, 1);
        let x = ClassVector::from_ints(&[2, 1]).unwrap();
        assert!(certify_class(&l, &t, &x).unwrap().certified);
        assert!(invariant_suite(&l, &t).unwrap().is_all_zero());
        assert!(invariant_suite_graded(&l, &t, Some(&x)).unwrap().is_all_zero());
    }

    #[test]
    fn suite_is_frame_invariant() {
        let t = su2_plus_r();
        let l = FrameLayout::canonical(1, 2);
        let base = invariant_suite(&l, &t).unwrap();
        // swap the null pair, flip a transverse sign, swap the transverse indices
        let map = FrameMap { permutation: vec![2, 1, 4, 3], signs: vec![1, 1, -1, 1] };
        let moved = apply_frame_map(&t, &map, Some(&l)).unwrap();
        assert_eq!(invariant_suite(&l, &moved).unwrap(), base);
    }

    #[test]
    fn grading_does_not_change_values() {
        let t = su2_plus_r();
        let l = FrameLayout::canonical(1, 2);
        let x = ClassVector::from_ints(&[3]).unwrap();
        assert_eq!(invariant_suite_graded(&l, &t, Some(&x)).unwrap(), invariant_suite(&l, &t).unwrap());
    }

    fn rats(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(a, b)| q(a, b)).collect()
    }

    #[test]
    fn reference_values() {
        let s = invariant_suite(&FrameLayout::canonical(1, 2), &su2_plus_r()).unwrap();
        assert_eq!(s.ricci_scalar, q(5, 2));
        assert_eq!(s.kretschmann, q(51, 4));
        assert_eq!(s.ricci_cubic, q(53, 8));
        assert_eq!(s.riem_cubic, q(341, 8));
        assert_eq!(s.d_riem_sq, q(-16, 1));
        assert_eq!(s.ricci_traces, rats(&[(5, 2), (19, 4), (53, 8), (163, 16)]));
        assert_eq!(s.killing_traces, rats(&[(-2, 1), (12, 1), (-8, 1), (48, 1)]));

        let t = StructureTensor::from_triples(3, &[(2, 1, 2, 2), (2, 1, 3, -1), (3, 1, 2, 1), (3, 1, 3, 2)]).unwrap();
        let s = invariant_suite(&FrameLayout::canonical(1, 1), &t).unwrap();
        assert_eq!(s.ricci_scalar, q(1, 2));
        assert_eq!(s.kretschmann, q(11, 4));
        assert_eq!(s.riem_cubic, q(25, 8));
        assert_eq!(s.d_riem_sq, q(-4, 1));
        assert_eq!(s.ricci_traces, rats(&[(1, 2), (3, 4), (1, 8)]));

        let s = invariant_suite(&FrameLayout::canonical(2, 0), &su2_plus_r()).unwrap();
        assert_eq!(s.ricci_traces, rats(&[(0, 1), (0, 1), (0, 1), (4, 1)]));
        assert_eq!(s.killing_traces, rats(&[(0, 1), (8, 1), (0, 1), (32, 1)]));
    }
}
