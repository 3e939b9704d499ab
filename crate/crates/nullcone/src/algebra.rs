//! Structure-constant tensors and the algebraic predicates built on them.
//!
//! Basis indices are 1-based in every public signature that names an index
//! (`a`, `b`, `c`). Coordinate vectors are plain slices where position `i`
//! holds the coefficient of `e_{i+1}`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{dense_from_sparse, sparse_from_dense, Accumulator, Echelon, Matrix, SparseVec};
use crate::rational::Rational;

pub use crate::linalg::{nilpotent_operator_check, NilpotencyReport};

/// Sparse tensor `C^c_{ab}` with entries stored only for `a < b`.
pub struct StructureTensor {
    dim: usize,
    entries: BTreeMap<(usize, usize, usize), Rational>,
    // Dense (a, b) -> [(c, C^c_{ab})] lookup over 0-based positions, both
    // orders, each list sorted by c.
    table: OnceLock<Vec<SparseVec>>,
}

impl Clone for StructureTensor {
    fn clone(&self) -> Self {
        StructureTensor { dim: self.dim, entries: self.entries.clone(), table: OnceLock::new() }
    }
}

impl PartialEq for StructureTensor {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.entries == other.entries
    }
}

impl Eq for StructureTensor {}

impl fmt::Debug for StructureTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StructureTensor(dim={}", self.dim)?;
        for ((a, b, c), v) in &self.entries {
            write!(f, ", C^{c}_{{{a}{b}}}={v}")?;
        }
        write!(f, ")")
    }
}

/// Accumulating builder; `add(a, b, c, v)` with `a > b` stores `-v` at `(b, a, c)`.
#[derive(Clone, Debug)]
pub struct TensorBuilder {
    dim: usize,
    entries: BTreeMap<(usize, usize, usize), Rational>,
}

impl TensorBuilder {
    pub fn add(&mut self, a: usize, b: usize, c: usize, value: impl Into<Rational>) -> Result<&mut Self> {
        let value = value.into();
        for i in [a, b, c] {
            if i == 0 || i > self.dim {
                return Err(Error::IndexOutOfRange { index: i, dim: self.dim });
            }
        }
        if value.is_zero() {
            return Ok(self);
        }
        if a == b {
            return Err(Error::InvalidTensor(format!("nonzero diagonal constant C^{c}_{{{a}{a}}}")));
        }
        let (key, v) = if a < b { ((a, b, c), value) } else { ((b, a, c), -value) };
        *self.entries.entry(key).or_default() += v;
        Ok(self)
    }

    pub fn build(self) -> StructureTensor {
        let entries = self.entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        StructureTensor { dim: self.dim, entries, table: OnceLock::new() }
    }
}

impl StructureTensor {
    pub fn builder(dim: usize) -> TensorBuilder {
        TensorBuilder { dim, entries: BTreeMap::new() }
    }

    /// Abelian algebra of the given dimension.
    pub fn abelian(dim: usize) -> Self {
        Self::builder(dim).build()
    }

    /// Convenience constructor from integer constants `(a, b, c, C^c_{ab})`.
    pub fn from_triples(dim: usize, triples: &[(usize, usize, usize, i64)]) -> Result<Self> {
        let mut b = Self::builder(dim);
        for &(a, bb, c, v) in triples {
            b.add(a, bb, c, v)?;
        }
        Ok(b.build())
    }

    /// Strict constructor: keys must satisfy `a < b` and be unique.
    pub fn from_entries(
        dim: usize,
        entries: impl IntoIterator<Item = ((usize, usize, usize), Rational)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for ((a, b, c), v) in entries {
            for i in [a, b, c] {
                if i == 0 || i > dim {
                    return Err(Error::IndexOutOfRange { index: i, dim });
                }
            }
            if a >= b {
                return Err(Error::InvalidTensor(format!("entry ({a},{b},{c}) must have a < b")));
            }
            if map.insert((a, b, c), v).is_some() {
                return Err(Error::InvalidTensor(format!("duplicate entry ({a},{b},{c})")));
            }
        }
        map.retain(|_, v: &mut Rational| !v.is_zero());
        Ok(StructureTensor { dim, entries: map, table: OnceLock::new() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_abelian(&self) -> bool {
        self.entries.is_empty()
    }

    /// Stored entries `(a, b, c, C^c_{ab})` with `a < b`, 1-based, in key order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Rational)> {
        self.entries.iter().map(|(&(a, b, c), v)| (a, b, c, v))
    }

    /// `C^c_{ab}` for any order of `a, b` (1-based).
    pub fn get(&self, a: usize, b: usize, c: usize) -> Rational {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => self.entries.get(&(a, b, c)).cloned().unwrap_or_default(),
            std::cmp::Ordering::Greater => -self.entries.get(&(b, a, c)).cloned().unwrap_or_default(),
            std::cmp::Ordering::Equal => Rational::zero(),
        }
    }

    fn table(&self) -> &Vec<SparseVec> {
        self.table.get_or_init(|| {
            let n = self.dim;
            let mut t = vec![Vec::new(); n * n];
            for (&(a, b, c), v) in &self.entries {
                t[(a - 1) * n + (b - 1)].push((c - 1, v.clone()));
                t[(b - 1) * n + (a - 1)].push((c - 1, -v));
            }
            t
        })
    }

    /// `[e_{i+1}, e_{j+1}]` as a sparse vector over 0-based positions.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.table()[i * self.dim + j]
    }

    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Result<Vec<Rational>> {
        for w in [u, v] {
            if w.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, got: w.len() });
            }
        }
        let out = self.bracket_sparse(&sparse_from_dense(u), &sparse_from_dense(v));
        Ok(dense_from_sparse(&out, self.dim))
    }

    pub fn bracket_sparse(&self, u: &[(usize, Rational)], v: &[(usize, Rational)]) -> SparseVec {
        let mut acc = Accumulator::new(self.dim);
        self.bracket_into(u, v, &mut acc);
        acc.take()
    }

    fn bracket_into(&self, u: &[(usize, Rational)], v: &[(usize, Rational)], acc: &mut Accumulator) {
        for (i, x) in u {
            for (j, y) in v {
                let terms = self.basis_bracket(*i, *j);
                if terms.is_empty() {
                    continue;
                }
                let xy = x * y;
                for (c, val) in terms {
                    acc.add_product(*c, &xy, val);
                }
            }
        }
    }

    /// Relabels with 0-based `perm` (`e_a -> sign_a e_{perm[a]}`):
    /// `C'^{π(c)}_{π(a)π(b)} = σ_a σ_b σ_c C^c_{ab}` on a tensor of dimension `new_dim`.
    pub(crate) fn relabel(&self, perm: &[usize], signs: Option<&[i8]>, new_dim: usize) -> StructureTensor {
        let mut b = Self::builder(new_dim);
        for (&(a, bb, c), v) in &self.entries {
            let s = signs.map_or(1, |s| s[a - 1] * s[bb - 1] * s[c - 1]);
            let val = if s < 0 { -v } else { v.clone() };
            b.add(perm[a - 1] + 1, perm[bb - 1] + 1, perm[c - 1] + 1, val).expect("valid relabeling");
        }
        b.build()
    }

    /// Restriction to the coordinate subspace spanned by the given 0-based
    /// positions, if it is a subalgebra; basis order follows `positions`.
    pub fn coordinate_subalgebra(&self, positions: &[usize]) -> Option<StructureTensor> {
        let mut local = vec![usize::MAX; self.dim];
        for (k, &p) in positions.iter().enumerate() {
            local[p] = k;
        }
        let mut b = Self::builder(positions.len());
        for (x, &i) in positions.iter().enumerate() {
            for &j in &positions[x + 1..] {
                for (c, v) in self.basis_bracket(i, j) {
                    if local[*c] == usize::MAX {
                        return None;
                    }
                    b.add(local[i] + 1, local[j] + 1, local[*c] + 1, v.clone()).expect("in range");
                }
            }
        }
        Some(b.build())
    }
}

#[derive(Serialize, Deserialize)]
struct ConstantJson {
    a: usize,
    b: usize,
    c: usize,
    value: Rational,
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    dim: usize,
    constants: Vec<ConstantJson>,
}

impl Serialize for StructureTensor {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TensorJson {
            dim: self.dim,
            constants: self.entries().map(|(a, b, c, v)| ConstantJson { a, b, c, value: v.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StructureTensor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = TensorJson::deserialize(d)?;
        if raw.dim == 0 {
            return Err(serde::de::Error::custom("dim must be positive"));
        }
        StructureTensor::from_entries(raw.dim, raw.constants.into_iter().map(|e| ((e.a, e.b, e.c), e.value)))
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobiViolation {
    pub triple: (usize, usize, usize),
    pub index: usize,
    pub residual: Rational,
}

/// All nonzero components of the cyclic Jacobi sum over `a < b < c`.
pub fn jacobi_check(t: &StructureTensor) -> Vec<JacobiViolation> {
    let n = t.dim();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut acc = Accumulator::new(n);
            let mut out = Vec::new();
            for b in a + 1..n {
                for c in b + 1..n {
                    let ab = t.basis_bracket(a, b);
                    let bc = t.basis_bracket(b, c);
                    let ca = t.basis_bracket(c, a);
                    if ab.is_empty() && bc.is_empty() && ca.is_empty() {
                        continue;
                    }
                    for (list, last) in [(ab, c), (bc, a), (ca, b)] {
                        for (d, x) in list {
                            for (e, y) in t.basis_bracket(*d, last) {
                                acc.add_product(*e, x, y);
                            }
                        }
                    }
                    for (e, r) in acc.take() {
                        out.push(JacobiViolation { triple: (a + 1, b + 1, c + 1), index: e + 1, residual: r });
                    }
                }
            }
            out
        })
        .collect()
}

/// Matrix of `ad_v` in the standard basis: column `a` is `[v, e_a]`.
pub fn adjoint_matrix(t: &StructureTensor, v: &[Rational]) -> Result<Matrix> {
    let n = t.dim();
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: v.len() });
    }
    let sv = sparse_from_dense(v);
    let mut m = Matrix::zeros(n, n);
    for a in 0..n {
        for (c, x) in t.bracket_sparse(&sv, &[(a, Rational::one())]) {
            m.set(c, a, x);
        }
    }
    Ok(m)
}

/// Symmetric bilinear form with dense storage; `get` takes 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct BilinearForm(Matrix);

impl BilinearForm {
    pub fn from_matrix(m: Matrix) -> Result<Self> {
        if !m.is_symmetric() {
            return Err(Error::InvalidTensor("bilinear form must be square and symmetric".into()));
        }
        Ok(BilinearForm(m))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn get(&self, a: usize, b: usize) -> &Rational {
        self.0.get(a - 1, b - 1)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Evaluates `B(u, v)` on coordinate vectors.
    pub fn eval(&self, u: &[Rational], v: &[Rational]) -> Result<Rational> {
        let mv = self.0.mul_vec(v)?;
        Ok(u.iter().zip(&mv).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum())
    }
}

/// `B_{ab} = tr(ad_a ad_b) = Σ_{c,d} C^c_{ad} C^d_{bc}`.
pub fn killing_form(t: &StructureTensor) -> BilinearForm {
    let n = t.dim();
    let rows: Vec<Vec<(usize, Rational)>> = (0..n)
        .into_par_iter()
        .map(|a| {
            // (ad_a)^c_d = C^c_{ad}
            let ad_a: Vec<(usize, usize, &Rational)> =
                (0..n).flat_map(|d| t.basis_bracket(a, d).iter().map(move |(c, v)| (*c, d, v))).collect();
            let mut row = Vec::new();
            for b in a..n {
                let mut sum = Rational::zero();
                for &(c, d, v) in &ad_a {
                    let bc = t.basis_bracket(b, c);
                    if let Ok(pos) = bc.binary_search_by_key(&d, |(i, _)| *i) {
                        sum += v * &bc[pos].1;
                    }
                }
                if !sum.is_zero() {
                    row.push((b, sum));
                }
            }
            row
        })
        .collect();
    let mut m = Matrix::zeros(n, n);
    for (a, row) in rows.into_iter().enumerate() {
        for (b, v) in row {
            m.set(b, a, v.clone());
            m.set(a, b, v);
        }
    }
    BilinearForm(m)
}

/// Block direct sum of `parts` followed by `extra_abelian` central indices.
pub fn compose(parts: &[StructureTensor], extra_abelian: usize) -> StructureTensor {
    let total = parts.iter().map(StructureTensor::dim).sum::<usize>() + extra_abelian;
    let mut b = StructureTensor::builder(total);
    let mut offset = 0;
    for part in parts {
        for (a, bb, c, v) in part.entries() {
            b.add(a + offset, bb + offset, c + offset, v.clone()).expect("in range");
        }
        offset += part.dim();
    }
    b.build()
}

/// Linear subspace of `Q^n` with a linearly independent basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<SparseVec>,
}

impl Subspace {
    /// Subspace with exactly the given basis; errors if the vectors are dependent.
    pub fn new(ambient: usize, basis: Vec<Vec<Rational>>) -> Result<Self> {
        let mut ech = Echelon::new();
        let mut sparse = Vec::with_capacity(basis.len());
        for v in basis {
            if v.len() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, got: v.len() });
            }
            let s = sparse_from_dense(&v);
            if !ech.insert(s.clone()) {
                return Err(Error::DependentBasis);
            }
            sparse.push(s);
        }
        Ok(Subspace { ambient, basis: sparse })
    }

    /// Span of arbitrary vectors, with the echelon rows as basis.
    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = SparseVec>) -> Self {
        let mut ech = Echelon::new();
        for v in vectors {
            ech.insert(v);
        }
        Self::from_echelon(ambient, &ech)
    }

    fn from_echelon(ambient: usize, ech: &Echelon) -> Self {
        Subspace { ambient, basis: ech.rows().cloned().collect() }
    }

    /// Span of the basis vectors `e_i` for the given 1-based indices.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Result<Self> {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &i in &sorted {
            if i == 0 || i > ambient {
                return Err(Error::IndexOutOfRange { index: i, dim: ambient });
            }
        }
        Ok(Subspace { ambient, basis: sorted.into_iter().map(|i| vec![(i - 1, Rational::one())]).collect() })
    }

    pub fn whole(ambient: usize) -> Self {
        Subspace { ambient, basis: (0..ambient).map(|i| vec![(i, Rational::one())]).collect() }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis_sparse(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn basis(&self) -> Vec<Vec<Rational>> {
        self.basis.iter().map(|v| dense_from_sparse(v, self.ambient)).collect()
    }

    fn echelon(&self) -> Echelon {
        let mut ech = Echelon::new();
        for v in &self.basis {
            ech.insert(v.clone());
        }
        ech
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        v.len() == self.ambient && self.echelon().contains(sparse_from_dense(v))
    }

    /// Coefficients of `v` in this subspace's basis, if `v` lies in it.
    pub fn coordinates(&self, v: &[(usize, Rational)]) -> Option<Vec<Rational>> {
        CoordinateSolver::new(self).solve(v)
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw {
            ambient_dim: usize,
            basis: Vec<Vec<Rational>>,
        }
        Raw { ambient_dim: self.ambient, basis: self.basis() }.serialize(s)
    }
}

/// Expresses vectors in a fixed subspace basis. Basis vectors are augmented
/// with tag coordinates past the ambient range, so one elimination yields
/// both membership and the coefficients.
struct CoordinateSolver {
    ambient: usize,
    count: usize,
    ech: Echelon,
}

impl CoordinateSolver {
    fn new(s: &Subspace) -> Self {
        let mut ech = Echelon::new();
        for (k, v) in s.basis.iter().enumerate() {
            let mut aug = v.clone();
            aug.push((s.ambient + k, Rational::one()));
            ech.insert(aug);
        }
        CoordinateSolver { ambient: s.ambient, count: s.basis.len(), ech }
    }

    fn solve(&self, v: &[(usize, Rational)]) -> Option<Vec<Rational>> {
        let r = self.ech.reduce(v.to_vec());
        if r.iter().any(|(i, _)| *i < self.ambient) {
            return None;
        }
        let mut out = vec![Rational::zero(); self.count];
        for (i, x) in r {
            out[i - self.ambient] = -x;
        }
        Some(out)
    }
}

/// `[A, B]` as the span of all brackets of basis vectors.
fn bracket_span(t: &StructureTensor, a: &Subspace, b: &Subspace) -> Subspace {
    let mut ech = Echelon::new();
    let mut acc = Accumulator::new(t.dim());
    for u in &a.basis {
        for v in &b.basis {
            t.bracket_into(u, v, &mut acc);
            let w = acc.take();
            if !w.is_empty() {
                ech.insert(w);
            }
        }
    }
    Subspace::from_echelon(t.dim(), &ech)
}

#[derive(Clone, Debug, Serialize)]
pub struct LowerCentralSeries {
    pub terms: Vec<Subspace>,
    pub dims: Vec<usize>,
    pub is_nilpotent: bool,
}

/// Lower central series `n_{k+1} = [g, n_k]`, starting from `[g, g]`, or from
/// the algebra itself when `as_nilradical` is set. Stops at zero or at the
/// first repeated dimension (the repeated term is not listed twice).
pub fn lower_central_series(t: &StructureTensor, as_nilradical: bool) -> LowerCentralSeries {
    let whole = Subspace::whole(t.dim());
    let mut current = if as_nilradical { whole.clone() } else { bracket_span(t, &whole, &whole) };
    let mut terms = vec![current.clone()];
    while current.dim() > 0 {
        let next = bracket_span(t, &whole, &current);
        if next.dim() == current.dim() {
            break;
        }
        terms.push(next.clone());
        current = next;
    }
    let dims: Vec<usize> = terms.iter().map(Subspace::dim).collect();
    let is_nilpotent = dims.last() == Some(&0);
    LowerCentralSeries { terms, dims, is_nilpotent }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivedSeries {
    pub dims: Vec<usize>,
    pub is_solvable: bool,
}

/// Derived series `g^{(k+1)} = [g^{(k)}, g^{(k)}]` starting at `g^{(0)} = g`.
pub fn derived_series(t: &StructureTensor) -> DerivedSeries {
    let mut current = Subspace::whole(t.dim());
    let mut dims = vec![current.dim()];
    while current.dim() > 0 {
        let next = bracket_span(t, &current, &current);
        if next.dim() == current.dim() {
            break;
        }
        dims.push(next.dim());
        current = next;
    }
    let is_solvable = dims.last() == Some(&0);
    DerivedSeries { dims, is_solvable }
}

pub fn is_nilpotent(t: &StructureTensor) -> bool {
    lower_central_series(t, false).is_nilpotent
}

pub fn is_solvable(t: &StructureTensor) -> bool {
    derived_series(t).is_solvable
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureResult {
    pub closed: bool,
    pub restricted: Option<StructureTensor>,
}

/// Whether `[S, S] ⊆ S`; if so, the restricted bracket in `S`'s own basis.
pub fn subalgebra_closure_check(t: &StructureTensor, s: &Subspace) -> Result<ClosureResult> {
    if s.ambient_dim() != t.dim() {
        return Err(Error::DimensionMismatch { expected: t.dim(), got: s.ambient_dim() });
    }
    let solver = CoordinateSolver::new(s);
    let mut b = StructureTensor::builder(s.dim().max(1));
    let mut acc = Accumulator::new(t.dim());
    for i in 0..s.dim() {
        for j in i + 1..s.dim() {
            t.bracket_into(&s.basis[i], &s.basis[j], &mut acc);
            let w = acc.take();
            if w.is_empty() {
                continue;
            }
            let Some(coords) = solver.solve(&w) else {
                return Ok(ClosureResult { closed: false, restricted: None });
            };
            for (k, x) in coords.into_iter().enumerate() {
                b.add(i + 1, j + 1, k + 1, x)?;
            }
        }
    }
    let restricted = if s.dim() == 0 { None } else { Some(b.build()) };
    Ok(ClosureResult { closed: true, restricted })
}
