//! Null frames, boost weights and class certificates.
//!
//! A layout splits the basis into null pairs `(N-(i), N+(i))`, `i = 1..p`,
//! and `k` transverse vectors. The metric pairs each null vector with its
//! partner and is the identity on the transverse block. A diagonal boost
//! with parameters `x` scales `e_a` by `exp(t <x, λ(a)>)`, so the component
//! `C^c_{ab}` of the moved bracket scales by `exp(t <x, λ(a)+λ(b)-λ(c)>)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::{BilinearForm, StructureTensor};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    NMinus(usize),
    NPlus(usize),
    Transverse,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::NMinus(i) => write!(f, "N-{i}"),
            Role::NPlus(i) => write!(f, "N+{i}"),
            Role::Transverse => write!(f, "H"),
        }
    }
}

impl FromStr for Role {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "H" {
            return Ok(Role::Transverse);
        }
        let bad = || Error::InvalidLayout(format!("unknown role {s:?}"));
        let (ctor, rest): (fn(usize) -> Role, &str) = if let Some(r) = s.strip_prefix("N-") {
            (Role::NMinus, r)
        } else if let Some(r) = s.strip_prefix("N+") {
            (Role::NPlus, r)
        } else {
            return Err(bad());
        };
        let slot: usize = rest.parse().map_err(|_| bad())?;
        if slot == 0 {
            return Err(bad());
        }
        Ok(ctor(slot))
    }
}

/// Assignment of basis indices to null-frame roles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameLayout {
    p: usize,
    k: usize,
    roles: Vec<Role>,
    partner: Vec<usize>,
}

impl FrameLayout {
    /// Index `2i-1` is `N-(i)`, `2i` is `N+(i)`, indices past `2p` are transverse.
    pub fn canonical(p: usize, k: usize) -> Self {
        let mut roles = Vec::with_capacity(2 * p + k);
        for i in 1..=p {
            roles.push(Role::NMinus(i));
            roles.push(Role::NPlus(i));
        }
        roles.extend(std::iter::repeat_n(Role::Transverse, k));
        Self::from_roles(roles).expect("canonical layout is valid")
    }

    /// Layout from an explicit role per index (position `i` is index `i+1`).
    pub fn from_roles(roles: Vec<Role>) -> Result<Self> {
        let n = roles.len();
        let p = roles.iter().filter(|r| matches!(r, Role::NMinus(_))).count();
        let k = roles.iter().filter(|r| matches!(r, Role::Transverse)).count();
        if 2 * p + k != n {
            return Err(Error::InvalidLayout("N- and N+ counts differ".into()));
        }
        let mut minus = vec![None; p];
        let mut plus = vec![None; p];
        for (idx, role) in roles.iter().enumerate() {
            let (slots, slot) = match role {
                Role::NMinus(s) => (&mut minus, *s),
                Role::NPlus(s) => (&mut plus, *s),
                Role::Transverse => continue,
            };
            if slot == 0 || slot > p {
                return Err(Error::InvalidLayout(format!("slot {slot} outside 1..={p}")));
            }
            if slots[slot - 1].replace(idx).is_some() {
                return Err(Error::InvalidLayout(format!("slot {slot} assigned twice")));
            }
        }
        let mut partner: Vec<usize> = (0..n).collect();
        for s in 0..p {
            let (m, pl) = (
                minus[s].expect("counted"),
                plus[s].ok_or_else(|| Error::InvalidLayout(format!("slot {} has no N+ index", s + 1)))?,
            );
            partner[m] = pl;
            partner[pl] = m;
        }
        Ok(FrameLayout { p, k, roles, partner })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.roles.len()
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn role(&self, a: usize) -> Role {
        self.roles[a - 1]
    }

    pub fn is_canonical(&self) -> bool {
        *self == FrameLayout::canonical(self.p, self.k)
    }

    /// Metric partner of index `a` (the index itself when transverse), 1-based.
    pub fn partner(&self, a: usize) -> usize {
        self.partner[a - 1] + 1
    }

    pub(crate) fn partner0(&self, a: usize) -> usize {
        self.partner[a]
    }

    /// `(slot, sign)` of the 0-based position, sign `-1` for N-, `+1` for N+.
    pub(crate) fn slot_sign0(&self, a: usize) -> Option<(usize, i64)> {
        match self.roles[a] {
            Role::NMinus(s) => Some((s - 1, -1)),
            Role::NPlus(s) => Some((s - 1, 1)),
            Role::Transverse => None,
        }
    }

    /// `<x, λ(a)>` for every 0-based position.
    pub(crate) fn index_pairings(&self, x: &ClassVector) -> Vec<Rational> {
        (0..self.dim())
            .map(|a| match self.slot_sign0(a) {
                Some((s, 1)) => x.0[s].clone(),
                Some((s, _)) => -&x.0[s],
                None => Rational::zero(),
            })
            .collect()
    }

    /// Same layout with slot `perm[i]` renamed to `i + 1` (0-based `perm`).
    pub fn permute_slots(&self, perm: &[usize]) -> Self {
        let mut new_of_old = vec![0; self.p];
        for (new, &old) in perm.iter().enumerate() {
            new_of_old[old] = new + 1;
        }
        let roles = self
            .roles
            .iter()
            .map(|r| match *r {
                Role::NMinus(s) => Role::NMinus(new_of_old[s - 1]),
                Role::NPlus(s) => Role::NPlus(new_of_old[s - 1]),
                Role::Transverse => Role::Transverse,
            })
            .collect();
        Self::from_roles(roles).expect("slot permutation keeps validity")
    }

    fn check_dim(&self, t: &StructureTensor) -> Result<()> {
        if t.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: t.dim() });
        }
        Ok(())
    }
}

impl Serialize for FrameLayout {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(untagged)]
        enum Roles {
            Canonical(&'static str),
            Explicit(BTreeMap<String, String>),
        }
        #[derive(Serialize)]
        struct Raw {
            p: usize,
            k: usize,
            roles: Roles,
        }
        let roles = if self.is_canonical() {
            Roles::Canonical("canonical")
        } else {
            let mut map = BTreeMap::new();
            for (i, r) in self.roles.iter().enumerate() {
                map.insert(format!("{}", i + 1), r.to_string());
            }
            Roles::Explicit(map)
        };
        Raw { p: self.p, k: self.k, roles }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FrameLayout {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Roles {
            Named(String),
            Explicit(BTreeMap<String, String>),
        }
        #[derive(Deserialize)]
        struct Raw {
            p: Option<usize>,
            k: Option<usize>,
            roles: Roles,
        }
        use serde::de::Error as _;
        let raw = Raw::deserialize(d)?;
        let layout = match raw.roles {
            Roles::Named(name) if name == "canonical" => match (raw.p, raw.k) {
                (Some(p), Some(k)) => FrameLayout::canonical(p, k),
                _ => return Err(D::Error::custom("canonical layout needs p and k")),
            },
            Roles::Named(name) => return Err(D::Error::custom(format!("unknown layout {name:?}"))),
            Roles::Explicit(map) => {
                let n = map.len();
                let mut roles = vec![None; n];
                for (key, val) in map {
                    let idx: usize = key.parse().map_err(|_| D::Error::custom(format!("bad index {key:?}")))?;
                    if idx == 0 || idx > n {
                        return Err(D::Error::custom(format!("index {idx} out of range")));
                    }
                    roles[idx - 1] = Some(val.parse::<Role>().map_err(D::Error::custom)?);
                }
                let roles: Option<Vec<Role>> = roles.into_iter().collect();
                let roles = roles.ok_or_else(|| D::Error::custom("role indices must be 1..=n"))?;
                FrameLayout::from_roles(roles).map_err(D::Error::custom)?
            }
        };
        if raw.p.is_some_and(|p| p != layout.p) || raw.k.is_some_and(|k| k != layout.k) {
            return Err(D::Error::custom("p/k disagree with roles"));
        }
        Ok(layout)
    }
}

/// Integer boost weight `b ∈ Z^p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BoostWeight(pub Vec<i64>);

impl BoostWeight {
    pub fn zero(p: usize) -> Self {
        BoostWeight(vec![0; p])
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&v| v == 0)
    }
}

impl fmt::Display for BoostWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Class vector `x ∈ Q^p` with nonnegative components.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ClassVector(Vec<Rational>);

impl ClassVector {
    pub fn new(components: Vec<Rational>) -> Result<Self> {
        if let Some(bad) = components.iter().find(|v| v.is_negative()) {
            return Err(Error::InvalidClass(format!("negative component {bad}")));
        }
        Ok(ClassVector(components))
    }

    pub fn from_ints(components: &[i64]) -> Result<Self> {
        Self::new(components.iter().map(|&v| Rational::from(v)).collect())
    }

    pub fn ones(p: usize) -> Self {
        ClassVector(vec![Rational::one(); p])
    }

    pub fn components(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn dot(&self, b: &BoostWeight) -> Rational {
        self.0.iter().zip(&b.0).filter(|(_, &w)| w != 0).map(|(x, &w)| x * &Rational::from(w)).sum()
    }

    pub fn is_normalized(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    /// Descending sort; `perm[i]` is the original 0-based slot now at position `i`.
    pub fn normalized(&self) -> (ClassVector, Vec<usize>) {
        let mut perm: Vec<usize> = (0..self.0.len()).collect();
        perm.sort_by(|&a, &b| self.0[b].cmp(&self.0[a]).then(a.cmp(&b)));
        (ClassVector(perm.iter().map(|&i| self.0[i].clone()).collect()), perm)
    }
}

impl fmt::Display for ClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Rational::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for ClassVector {
    type Err = Error;

    /// Comma-separated rationals, e.g. `"2,1"` or `"1/2,0"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('[').trim_end_matches(']');
        if s.trim().is_empty() {
            return Ok(ClassVector(Vec::new()));
        }
        Self::new(s.split(',').map(str::parse).collect::<Result<Vec<Rational>>>()?)
    }
}

impl<'de> Deserialize<'de> for ClassVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Rational>::deserialize(d)?;
        ClassVector::new(v).map_err(serde::de::Error::custom)
    }
}

/// `g_{ab}` of the null frame; the matrix is its own inverse.
pub fn metric_components(l: &FrameLayout) -> BilinearForm {
    let n = l.dim();
    let mut m = Matrix::zeros(n, n);
    for a in 0..n {
        m.set(a, l.partner0(a), Rational::one());
    }
    BilinearForm::from_matrix(m).expect("partner map is an involution")
}

/// `λ(a)`: `-e_i` for `N-(i)`, `+e_i` for `N+(i)`, zero for transverse indices.
pub fn index_weight(l: &FrameLayout, a: usize) -> BoostWeight {
    let mut w = BoostWeight::zero(l.p);
    if let Some((s, sign)) = l.slot_sign0(a - 1) {
        w.0[s] = sign;
    }
    w
}

/// Weight of `C^c_{ab}`: `λ(a) + λ(b) - λ(c)`.
pub fn component_weight(l: &FrameLayout, a: usize, b: usize, c: usize) -> BoostWeight {
    let mut w = BoostWeight::zero(l.p);
    for (idx, mult) in [(a, 1), (b, 1), (c, -1)] {
        if let Some((s, sign)) = l.slot_sign0(idx - 1) {
            w.0[s] += mult * sign;
        }
    }
    w
}

/// Distinct weights of the nonzero components.
pub fn weight_support(l: &FrameLayout, t: &StructureTensor) -> Result<BTreeSet<BoostWeight>> {
    l.check_dim(t)?;
    Ok(t.entries().map(|(a, b, c, _)| component_weight(l, a, b, c)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certification {
    pub certified: bool,
    /// `max <x, b>` over the support; `None` stands for `-∞` (empty support).
    pub worst_margin: Option<Rational>,
    pub violating_weights: Vec<BoostWeight>,
    /// Every nonzero component has `<x, b> = -1` exactly.
    pub saturated: bool,
}

impl Serialize for Certification {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            certified: bool,
            worst_margin: String,
            violating_weights: &'a [BoostWeight],
            saturated: bool,
        }
        Raw {
            certified: self.certified,
            worst_margin: self.worst_margin.as_ref().map_or_else(|| "-inf".to_string(), Rational::to_string),
            violating_weights: &self.violating_weights,
            saturated: self.saturated,
        }
        .serialize(s)
    }
}

/// Checks `<x, b> <= -1` for every weight in the support.
pub fn certify_class(l: &FrameLayout, t: &StructureTensor, x: &ClassVector) -> Result<Certification> {
    l.check_dim(t)?;
    if x.len() != l.p {
        return Err(Error::DimensionMismatch { expected: l.p, got: x.len() });
    }
    let s = l.index_pairings(x);
    let minus_one = -Rational::one();
    let mut worst: Option<Rational> = None;
    let mut violating = BTreeSet::new();
    let mut saturated = true;
    for (a, b, c, _) in t.entries() {
        let margin = &(&s[a - 1] + &s[b - 1]) - &s[c - 1];
        if margin > minus_one {
            violating.insert(component_weight(l, a, b, c));
        }
        if margin != minus_one {
            saturated = false;
        }
        if worst.as_ref().is_none_or(|w| margin > *w) {
            worst = Some(margin);
        }
    }
    Ok(Certification {
        certified: violating.is_empty(),
        worst_margin: worst,
        violating_weights: violating.into_iter().collect(),
        saturated,
    })
}

/// Exact value `coeff * base^exponent` with `0 <= exponent < 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlowedValue {
    pub coeff: Rational,
    pub exponent: Rational,
}

impl FlowedValue {
    /// Multiplies by `base^e`, folding the integer part of the exponent into the coefficient.
    fn times_power(&self, base: &Rational, e: &Rational) -> FlowedValue {
        let total = &self.exponent + e;
        let whole = Rational::from(total.floor());
        let k = whole.to_i64().expect("flow exponent fits in i64");
        FlowedValue { coeff: &self.coeff * &base.pow(k), exponent: total - whole }
    }

    /// Compares `|self|` and `|other|` for the same base.
    pub fn abs_cmp(&self, other: &FlowedValue, base: &Rational) -> std::cmp::Ordering {
        let (c1, c2) = (self.coeff.abs(), other.coeff.abs());
        if self.exponent == other.exponent {
            return c1.cmp(&c2);
        }
        // Raise both sides to the common denominator so every power is integral.
        let d1 = self.exponent.denom();
        let d2 = other.exponent.denom();
        let lcm = num_integer::Integer::lcm(&d1, &d2);
        let d = i64::try_from(lcm).expect("small exponent denominators");
        let e1 = (&self.exponent * &Rational::from(d)).to_i64().expect("integral");
        let e2 = (&other.exponent * &Rational::from(d)).to_i64().expect("integral");
        (c1.pow(d) * base.pow(e1)).cmp(&(c2.pow(d) * base.pow(e2)))
    }
}

/// Structure tensor after a boost flow, with possibly irrational scalings kept symbolic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlowedTensor {
    pub dim: usize,
    pub base: Rational,
    pub entries: BTreeMap<(usize, usize, usize), FlowedValue>,
}

impl FlowedTensor {
    pub fn from_tensor(t: &StructureTensor, base: Rational) -> Result<Self> {
        if base <= Rational::one() {
            return Err(Error::ParameterOutOfRange(format!("flow base must exceed 1, got {base}")));
        }
        let entries = t
            .entries()
            .map(|(a, b, c, v)| ((a, b, c), FlowedValue { coeff: v.clone(), exponent: Rational::zero() }))
            .collect();
        Ok(FlowedTensor { dim: t.dim(), base, entries })
    }

    /// Applies `e^{tX}` with `X` given by the class vector `x`.
    pub fn flow(&self, l: &FrameLayout, x: &ClassVector, t: &Rational) -> Result<Self> {
        if self.dim != l.dim() {
            return Err(Error::DimensionMismatch { expected: l.dim(), got: self.dim });
        }
        if x.len() != l.p {
            return Err(Error::DimensionMismatch { expected: l.p, got: x.len() });
        }
        let s = l.index_pairings(x);
        let entries = self
            .entries
            .iter()
            .map(|(&(a, b, c), v)| {
                let margin = &(&s[a - 1] + &s[b - 1]) - &s[c - 1];
                ((a, b, c), v.times_power(&self.base, &(t * &margin)))
            })
            .collect();
        Ok(FlowedTensor { dim: self.dim, base: self.base.clone(), entries })
    }

    /// Plain tensor when every scaling is rational.
    pub fn to_tensor(&self) -> Option<StructureTensor> {
        if self.entries.values().any(|v| !v.exponent.is_zero()) {
            return None;
        }
        StructureTensor::from_entries(self.dim, self.entries.iter().map(|(&k, v)| (k, v.coeff.clone()))).ok()
    }

    /// Largest component in absolute value.
    pub fn max_abs(&self) -> Option<&FlowedValue> {
        self.entries.values().max_by(|a, b| a.abs_cmp(b, &self.base))
    }

    /// `value * base^e` for comparisons against scaled bounds.
    pub fn scale_value(&self, v: &FlowedValue, e: &Rational) -> FlowedValue {
        v.times_power(&self.base, e)
    }
}

/// `e^{tX} · μ` on the layout `l`.
pub fn boost_flow(
    l: &FrameLayout,
    t: &StructureTensor,
    x: &ClassVector,
    time: &Rational,
    base: &Rational,
) -> Result<FlowedTensor> {
    l.check_dim(t)?;
    FlowedTensor::from_tensor(t, base.clone())?.flow(l, x, time)
}

/// Signed relabeling `e_a -> σ_a e_{π(a)}` with 1-based `π`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameMap {
    pub permutation: Vec<usize>,
    pub signs: Vec<i8>,
}

impl FrameMap {
    pub fn identity(n: usize) -> Self {
        FrameMap { permutation: (1..=n).collect(), signs: vec![1; n] }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.permutation.len() != n || self.signs.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: self.permutation.len() });
        }
        let mut seen = vec![false; n];
        for &p in &self.permutation {
            if p == 0 || p > n || std::mem::replace(&mut seen[p - 1], true) {
                return Err(Error::InvalidLayout(format!("{:?} is not a permutation", self.permutation)));
            }
        }
        if self.signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidLayout("signs must be ±1".into()));
        }
        Ok(())
    }

    /// Whether `g_{π(a)π(b)} σ_a σ_b = g_{ab}` for the layout's metric.
    pub fn preserves_metric(&self, l: &FrameLayout) -> bool {
        (0..l.dim()).all(|a| {
            let b = l.partner0(a);
            let (pa, pb) = (self.permutation[a] - 1, self.permutation[b] - 1);
            l.partner0(pa) == pb && self.signs[a] * self.signs[b] == 1
        })
    }
}

/// `C'^{π(c)}_{π(a)π(b)} = σ_a σ_b σ_c C^c_{ab}`. With `preserve` set, the map
/// must be an isometry of that layout's metric.
pub fn apply_frame_map(t: &StructureTensor, map: &FrameMap, preserve: Option<&FrameLayout>) -> Result<StructureTensor> {
    map.validate(t.dim())?;
    if let Some(l) = preserve {
        l.check_dim(t)?;
        if !map.preserves_metric(l) {
            return Err(Error::NotMetricPreserving(format!("{:?} / {:?}", map.permutation, map.signs)));
        }
    }
    let perm0: Vec<usize> = map.permutation.iter().map(|p| p - 1).collect();
    Ok(t.relabel(&perm0, Some(&map.signs), t.dim()))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::algebra::jacobi_check;
    use crate::rational::q;

    fn s21() -> StructureTensor {
        StructureTensor::from_triples(2, &[(1, 2, 2, 1)]).unwrap()
    }

    pub(crate) fn s545() -> StructureTensor {
        StructureTensor::from_triples(
            5,
            &[(2, 3, 2, 2), (4, 5, 2, -1), (1, 5, 4, -1), (3, 4, 4, -1), (3, 5, 5, -1), (1, 4, 5, 1)],
        )
        .unwrap()
    }

    #[test]
    fn metric_examples() {
        let g = metric_components(&FrameLayout::canonical(1, 0));
        assert_eq!(g.matrix(), &Matrix::from_i64(&[&[0, 1], &[1, 0]]).unwrap());
        assert_eq!(metric_components(&FrameLayout::canonical(0, 3)).matrix(), &Matrix::identity(3));
        let g = metric_components(&FrameLayout::canonical(2, 1));
        for a in 1..=5 {
            for b in 1..=5 {
                let one = matches!((a, b), (1, 2) | (2, 1) | (3, 4) | (4, 3) | (5, 5));
                assert_eq!(g.get(a, b), &Rational::from(one as i64));
            }
        }
        assert_eq!(g.matrix().mul(g.matrix()).unwrap(), Matrix::identity(5));
    }

    #[test]
    fn weight_examples() {
        let l = FrameLayout::canonical(2, 0);
        assert_eq!(index_weight(&l, 1), BoostWeight(vec![-1, 0]));
        assert_eq!(index_weight(&l, 4), BoostWeight(vec![0, 1]));
        assert_eq!(index_weight(&FrameLayout::canonical(2, 1), 5), BoostWeight(vec![0, 0]));
        assert_eq!(component_weight(&FrameLayout::canonical(1, 0), 1, 2, 2), BoostWeight(vec![-1]));
        assert_eq!(component_weight(&l, 2, 1, 4), BoostWeight(vec![0, -1]));
        assert_eq!(component_weight(&FrameLayout::canonical(2, 1), 3, 5, 5), BoostWeight(vec![0, -1]));
    }

    #[test]
    fn support_examples() {
        let l = FrameLayout::canonical(2, 1);
        assert!(weight_support(&l, &StructureTensor::abelian(5)).unwrap().is_empty());
        let sup = weight_support(&l, &s545()).unwrap();
        assert!(!sup.is_empty());
        // C^4_{15} has weight (-1,-1); every other weight saturates 2b_1 + b_2 = -1.
        assert!(sup.iter().all(|b| 2 * b.0[0] + b.0[1] <= -1));
        assert!(sup.contains(&BoostWeight(vec![-1, -1])));
        assert_eq!(sup.iter().filter(|b| 2 * b.0[0] + b.0[1] == -1).count(), sup.len() - 1);
        assert_eq!(
            weight_support(&FrameLayout::canonical(1, 0), &s21()).unwrap().into_iter().collect::<Vec<_>>(),
            vec![BoostWeight(vec![-1])]
        );
        assert!(weight_support(&l, &s21()).is_err());
    }

    #[test]
    fn certify_examples() {
        let l = FrameLayout::canonical(2, 1);
        let c = certify_class(&l, &s545(), &ClassVector::from_ints(&[2, 1]).unwrap()).unwrap();
        assert!(c.certified);
        assert_eq!(c.worst_margin, Some(q(-1, 1)));
        assert!(!c.saturated);
        let l1 = FrameLayout::canonical(1, 0);
        let c = certify_class(&l1, &s21(), &ClassVector::new(vec![q(1, 2)]).unwrap()).unwrap();
        assert!(!c.certified);
        assert_eq!(c.worst_margin, Some(q(-1, 2)));
        let c = certify_class(&l1, &StructureTensor::abelian(2), &ClassVector::ones(1)).unwrap();
        assert!(c.certified);
        assert_eq!(c.worst_margin, None);
    }

    #[test]
    fn transverse_components_are_reported() {
        let l = FrameLayout::canonical(0, 2);
        let t = StructureTensor::from_triples(2, &[(1, 2, 2, 1)]).unwrap();
        let c = certify_class(&l, &t, &ClassVector::new(vec![]).unwrap()).unwrap();
        assert!(!c.certified);
        assert_eq!(c.violating_weights, vec![BoostWeight(vec![])]);
    }

    #[test]
    fn flow_examples() {
        let l = FrameLayout::canonical(1, 0);
        let x = ClassVector::ones(1);
        let f = boost_flow(&l, &s21(), &x, &q(1, 1), &q(2, 1)).unwrap();
        let mut half_bracket = StructureTensor::builder(2);
        half_bracket.add(1, 2, 2, q(1, 2)).unwrap();
        assert_eq!(f.to_tensor().unwrap(), half_bracket.build());
        let f0 = boost_flow(&l, &s21(), &x, &q(0, 1), &q(2, 1)).unwrap();
        assert_eq!(f0.to_tensor().unwrap(), s21());
        let half = boost_flow(&l, &s21(), &x, &q(1, 2), &q(2, 1)).unwrap();
        assert!(half.to_tensor().is_none());
        let v = &half.entries[&(1, 2, 2)];
        assert_eq!((v.coeff.clone(), v.exponent.clone()), (q(1, 2), q(1, 2)));
        assert!(boost_flow(&l, &s21(), &x, &q(1, 1), &q(1, 1)).is_err());
    }

    #[test]
    fn abs_cmp_handles_fractional_exponents() {
        let base = q(2, 1);
        let a = FlowedValue { coeff: q(1, 1), exponent: q(1, 2) }; // sqrt 2
        let b = FlowedValue { coeff: q(3, 2), exponent: q(0, 1) };
        let c = FlowedValue { coeff: q(-7, 5), exponent: q(0, 1) };
        assert_eq!(a.abs_cmp(&b, &base), std::cmp::Ordering::Less);
        assert_eq!(a.abs_cmp(&c, &base), std::cmp::Ordering::Greater);
    }

    #[test]
    fn frame_map_examples() {
        let l = FrameLayout::canonical(1, 0);
        let id = apply_frame_map(&s21(), &FrameMap::identity(2), Some(&l)).unwrap();
        assert_eq!(id, s21());
        let swap = FrameMap { permutation: vec![2, 1], signs: vec![1, 1] };
        let t = apply_frame_map(&s21(), &swap, Some(&l)).unwrap();
        let sup: Vec<_> = weight_support(&l, &t).unwrap().into_iter().collect();
        assert_eq!(sup, vec![BoostWeight(vec![1])]);
        let bad = FrameMap { permutation: vec![1, 2], signs: vec![1, -1] };
        assert!(apply_frame_map(&s21(), &bad, Some(&l)).is_err());
        assert!(apply_frame_map(&s21(), &bad, None).is_ok());

        let l2 = FrameLayout::canonical(2, 0);
        let t = StructureTensor::from_triples(4, &[(1, 2, 2, 1), (1, 4, 4, 2)]).unwrap();
        let slots = FrameMap { permutation: vec![3, 4, 1, 2], signs: vec![1; 4] };
        let moved = apply_frame_map(&t, &slots, Some(&l2)).unwrap();
        let before: BTreeSet<_> = weight_support(&l2, &t).unwrap();
        let after: BTreeSet<_> = weight_support(&l2, &moved).unwrap();
        let swapped: BTreeSet<_> = before.iter().map(|b| BoostWeight(vec![b.0[1], b.0[0]])).collect();
        assert_eq!(after, swapped);
        assert!(jacobi_check(&moved).is_empty());
    }

    #[test]
    fn layout_json_forms() {
        let l: FrameLayout = serde_json::from_str(r#"{"p":2,"k":1,"roles":"canonical"}"#).unwrap();
        assert_eq!(l, FrameLayout::canonical(2, 1));
        assert_eq!(serde_json::to_string(&l).unwrap(), r#"{"p":2,"k":1,"roles":"canonical"}"#);
        let e: FrameLayout = serde_json::from_str(r#"{"roles":{"1":"N+1","2":"N-1","3":"H"}}"#).unwrap();
        assert_eq!(e.roles(), &[Role::NPlus(1), Role::NMinus(1), Role::Transverse]);
        assert_eq!(e.partner(1), 2);
        let back: FrameLayout = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
        assert_eq!(back, e);
        assert!(serde_json::from_str::<FrameLayout>(r#"{"roles":{"1":"N+1","2":"N+1"}}"#).is_err());
    }

    #[test]
    fn class_normalization() {
        let x: ClassVector = "1,3/2,0,2".parse().unwrap();
        let (n, perm) = x.normalized();
        assert_eq!(n.to_string(), "[2,3/2,1,0]");
        assert_eq!(perm, vec![3, 1, 0, 2]);
        assert!("1,-1".parse::<ClassVector>().is_err());
    }
}
