//! Finite subgroups of the affine group `{x -> ax + b : a != 0}` acting on a
//! field, their orbits, and the good polynomials they produce.
//!
//! For a subgroup `H` and a point `alpha`, `g(x) = prod_{f in H} (x - f(alpha))`
//! takes a single value on every orbit of `H`. When `H` acts regularly on the
//! orbit of `alpha`, `g` has degree `|H|` and is a good polynomial for the
//! partition of the field's regular orbits.

use std::collections::{BTreeSet, HashMap, HashSet};

use thiserror::Error;

use crate::field::{Extension, Field, FieldElement, FieldError};
use crate::poly::{annihilator, Polynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AglError {
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("not a subspace: {0}")]
    NotSubspace(String),
    #[error("GF(p^{sub}) is not a subfield of GF(p^{m})")]
    NotSubfield { m: u32, sub: u32 },
    #[error("domain is not closed under the group action (orbit leaves it at {0:?})")]
    DomainNotClosed(Vec<u32>),
    #[error("orbit of the chosen point has size {orbit} but the group has order {order}; the action is not regular")]
    NotRegularOrbit { orbit: usize, order: usize },
    #[error("polynomial is not constant on orbit {0}")]
    NotConstant(usize),
    #[error("affine map needs a nonzero slope")]
    ZeroSlope,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The map `x -> a x + b` on packed values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineMap {
    pub a: u32,
    pub b: u32,
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap { a: 1, b: 0 };

    pub fn new(a: &FieldElement, b: &FieldElement) -> Result<AffineMap, AglError> {
        if a.field() != b.field() {
            return Err(FieldError::FieldMismatch.into());
        }
        if a.is_zero() {
            return Err(AglError::ZeroSlope);
        }
        Ok(AffineMap { a: a.value(), b: b.value() })
    }

    pub fn apply(&self, field: &Field, x: u32) -> u32 {
        field.add(field.mul(self.a, x), self.b)
    }

    /// `self ∘ inner`, i.e. `x -> a1 (a2 x + b2) + b1 = a1 a2 x + a1 b2 + b1`.
    pub fn compose(&self, field: &Field, inner: &AffineMap) -> AffineMap {
        AffineMap { a: field.mul(self.a, inner.a), b: field.add(field.mul(self.a, inner.b), self.b) }
    }

    pub fn inverse(&self, field: &Field) -> AffineMap {
        let ainv = field.inv(self.a).expect("slope is nonzero");
        AffineMap { a: ainv, b: field.neg(field.mul(ainv, self.b)) }
    }

    pub fn as_polynomial(&self, field: &Field) -> Polynomial {
        Polynomial::linear(field, self.a, self.b)
    }
}

/// GF(p^d) inside GF(p^m).
#[derive(Debug, Clone)]
pub struct Subfield {
    degree: u32,
    elements: Vec<u32>,
}

impl Subfield {
    pub fn new(field: &Field, degree: u32) -> Result<Subfield, AglError> {
        let elements = field.subfield_elements(degree).ok_or(AglError::NotSubfield { m: field.m(), sub: degree })?;
        Ok(Subfield { degree, elements })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
}

/// Where a subgroup came from when built as `{ax + b : a in M, b in B}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MbProvenance {
    pub subfield_degree: u32,
    pub m: Vec<u32>,
    pub b: Vec<u32>,
}

/// A finite subgroup of AGL, stored as its sorted list of maps. Closure is
/// checked on construction.
#[derive(Debug, Clone)]
pub struct AglSubgroup {
    field: Field,
    maps: Vec<AffineMap>,
    provenance: Option<MbProvenance>,
}

impl AglSubgroup {
    /// Verifies identity, closure under composition, and inverses.
    pub fn from_maps(field: &Field, maps: Vec<AffineMap>) -> Result<AglSubgroup, AglError> {
        let mut maps = maps;
        maps.sort();
        maps.dedup();
        if maps.iter().any(|m| m.a == 0 || m.a >= field.q() || m.b >= field.q()) {
            return Err(AglError::ZeroSlope);
        }
        let set: HashSet<AffineMap> = maps.iter().copied().collect();
        if !set.contains(&AffineMap::IDENTITY) {
            return Err(AglError::NotSubgroup("identity missing".into()));
        }
        for f in &maps {
            if !set.contains(&f.inverse(field)) {
                return Err(AglError::NotSubgroup(format!("inverse of {f:?} missing")));
            }
            for g in &maps {
                let fg = f.compose(field, g);
                if !set.contains(&fg) {
                    return Err(AglError::NotSubgroup(format!("{f:?} ∘ {g:?} = {fg:?} missing")));
                }
            }
        }
        Ok(AglSubgroup { field: field.clone(), maps, provenance: None })
    }

    pub fn trivial(field: &Field) -> AglSubgroup {
        AglSubgroup { field: field.clone(), maps: vec![AffineMap::IDENTITY], provenance: None }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn maps(&self) -> &[AffineMap] {
        &self.maps
    }

    pub fn order(&self) -> usize {
        self.maps.len()
    }

    pub fn contains(&self, map: &AffineMap) -> bool {
        self.maps.binary_search(map).is_ok()
    }

    pub fn provenance(&self) -> Option<&MbProvenance> {
        self.provenance.as_ref()
    }

    /// `{f(alpha) : f in H}` in increasing order.
    pub fn orbit(&self, alpha: u32) -> Vec<u32> {
        let set: BTreeSet<u32> = self.maps.iter().map(|f| f.apply(&self.field, alpha)).collect();
        set.into_iter().collect()
    }

    /// Orbits of size `|H|` over the whole field, ordered by smallest member.
    pub fn regular_orbits(&self) -> Vec<Vec<u32>> {
        let all: Vec<u32> = (0..self.field.q()).collect();
        orbits(self, &all)
            .expect("the whole field is closed")
            .orbits
            .into_iter()
            .filter(|o| o.len() == self.order())
            .collect()
    }

    /// Image of this subgroup in a quadratic extension of its field.
    pub fn embed(&self, ext: &Extension) -> Result<AglSubgroup, AglError> {
        if ext.base() != &self.field {
            return Err(FieldError::FieldMismatch.into());
        }
        let maps = self.maps.iter().map(|f| AffineMap { a: ext.embed_value(f.a), b: ext.embed_value(f.b) }).collect();
        let mut h = AglSubgroup::from_maps(ext.big(), maps)?;
        h.provenance = self.provenance.as_ref().map(|p| MbProvenance {
            subfield_degree: p.subfield_degree,
            m: p.m.iter().map(|&x| ext.embed_value(x)).collect(),
            b: p.b.iter().map(|&x| ext.embed_value(x)).collect(),
        });
        Ok(h)
    }
}

/// Smallest subgroup containing `generators`, by closing under composition.
pub fn generated_subgroup(field: &Field, generators: &[AffineMap]) -> Result<AglSubgroup, AglError> {
    let mut set: BTreeSet<AffineMap> = BTreeSet::from([AffineMap::IDENTITY]);
    let mut frontier = vec![AffineMap::IDENTITY];
    while let Some(x) = frontier.pop() {
        for g in generators {
            let y = g.compose(field, &x);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    AglSubgroup::from_maps(field, set.into_iter().collect())
}

/// Powers of `generator` (a nonzero element) in increasing order.
pub fn cyclic_group(field: &Field, generator: u32) -> Vec<u32> {
    assert!(generator != 0, "zero generates no multiplicative group");
    let mut out = vec![1u32];
    let mut cur = generator;
    while cur != 1 {
        out.push(cur);
        cur = field.mul(cur, generator);
    }
    out.sort();
    out
}

/// All `K`-linear combinations of `basis`, in increasing order.
pub fn span(field: &Field, subfield: &Subfield, basis: &[u32]) -> Vec<u32> {
    let mut set: BTreeSet<u32> = BTreeSet::from([0]);
    for &v in basis {
        let mut next = BTreeSet::new();
        for &s in &set {
            for &k in subfield.elements() {
                next.insert(field.add(s, field.mul(k, v)));
            }
        }
        set = next;
    }
    set.into_iter().collect()
}

/// `H = {ax + b : a in M, b in B}` for a multiplicative subgroup `M` of `K*`
/// and a `K`-subspace `B`. Both inputs are checked exhaustively, then the
/// product set is checked to be a group.
pub fn subgroup_from_mb(field: &Field, subfield: &Subfield, m: &[u32], b: &[u32]) -> Result<AglSubgroup, AglError> {
    let m_set: BTreeSet<u32> = m.iter().copied().collect();
    let b_set: BTreeSet<u32> = b.iter().copied().collect();
    if !m_set.contains(&1) {
        return Err(AglError::NotSubgroup("M must contain 1".into()));
    }
    if let Some(&x) = m_set.iter().find(|&&x| x == 0 || !subfield.contains(x)) {
        return Err(AglError::NotSubgroup(format!("{x} is not in K*")));
    }
    for &x in &m_set {
        for &y in &m_set {
            if !m_set.contains(&field.mul(x, y)) {
                return Err(AglError::NotSubgroup(format!("M is not closed: {x} * {y}")));
            }
        }
    }
    if !b_set.contains(&0) {
        return Err(AglError::NotSubspace("B must contain 0".into()));
    }
    for &x in &b_set {
        for &y in &b_set {
            if !b_set.contains(&field.add(x, y)) {
                return Err(AglError::NotSubspace(format!("B is not closed under addition: {x} + {y}")));
            }
        }
        for &k in subfield.elements() {
            if !b_set.contains(&field.mul(k, x)) {
                return Err(AglError::NotSubspace(format!("B is not closed under K: {k} * {x}")));
            }
        }
    }
    let maps = m_set.iter().flat_map(|&a| b_set.iter().map(move |&bb| AffineMap { a, b: bb })).collect();
    let mut h = AglSubgroup::from_maps(field, maps)?;
    debug_assert_eq!(h.order(), m_set.len() * b_set.len());
    h.provenance = Some(MbProvenance {
        subfield_degree: subfield.degree(),
        m: m_set.into_iter().collect(),
        b: b_set.into_iter().collect(),
    });
    Ok(h)
}

/// A partition of a domain into orbits, ordered by smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPartition {
    pub orbits: Vec<Vec<u32>>,
    index: HashMap<u32, usize>,
}

impl OrbitPartition {
    pub fn orbit_of(&self, x: u32) -> Option<usize> {
        self.index.get(&x).copied()
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }
}

pub fn orbits(h: &AglSubgroup, domain: &[u32]) -> Result<OrbitPartition, AglError> {
    let mut sorted = domain.to_vec();
    sorted.sort();
    sorted.dedup();
    let members: HashSet<u32> = sorted.iter().copied().collect();
    let mut index = HashMap::new();
    let mut out = Vec::new();
    for &x in &sorted {
        if index.contains_key(&x) {
            continue;
        }
        let orb = h.orbit(x);
        let outside: Vec<u32> = orb.iter().copied().filter(|y| !members.contains(y)).collect();
        if !outside.is_empty() {
            return Err(AglError::DomainNotClosed(outside));
        }
        for &y in &orb {
            index.insert(y, out.len());
        }
        out.push(orb);
    }
    Ok(OrbitPartition { orbits: out, index })
}

/// A polynomial together with the blocks it is constant on.
#[derive(Debug, Clone)]
pub struct GoodPolynomial {
    pub g: Polynomial,
    pub partition: Vec<Vec<u32>>,
    pub values: Vec<u32>,
}

impl GoodPolynomial {
    /// Checks that `g` takes one value per block and returns those values.
    pub fn check(g: &Polynomial, partition: &[Vec<u32>]) -> Result<Vec<u32>, AglError> {
        partition
            .iter()
            .enumerate()
            .map(|(i, block)| {
                let v = g.eval_value(block[0]);
                if block.iter().all(|&x| g.eval_value(x) == v) {
                    Ok(v)
                } else {
                    Err(AglError::NotConstant(i))
                }
            })
            .collect()
    }
}

/// `g(x) = prod_{f in H} (x - f(alpha))`, which needs `H` regular on the
/// orbit of `alpha`. Constancy is verified on every regular orbit.
pub fn good_polynomial(h: &AglSubgroup, alpha: u32) -> Result<GoodPolynomial, AglError> {
    let orbit = h.orbit(alpha);
    if orbit.len() != h.order() {
        return Err(AglError::NotRegularOrbit { orbit: orbit.len(), order: h.order() });
    }
    let g = annihilator(h.field(), &orbit);
    let partition = h.regular_orbits();
    let values = GoodPolynomial::check(&g, &partition)?;
    Ok(GoodPolynomial { g, partition, values })
}

/// `x^{|M|}` for a multiplicative subgroup `M`, constant on the cosets of `M`
/// in the multiplicative group. This is the `alpha = 0` choice, whose orbit
/// `{0}` is not regular, so it gets its own constructor.
pub fn good_polynomial_power(field: &Field, m: &[u32]) -> Result<GoodPolynomial, AglError> {
    let maps = m.iter().map(|&a| AffineMap { a, b: 0 }).collect();
    let h = AglSubgroup::from_maps(field, maps)?;
    let g = Polynomial::monomial(field, 1, h.order());
    let partition = h.regular_orbits();
    let values = GoodPolynomial::check(&g, &partition)?;
    Ok(GoodPolynomial { g, partition, values })
}

/// `{t in H : gamma(t(x)) = gamma(x)}` as polynomials.
pub fn theta_subgroup(h: &AglSubgroup, gamma: &Polynomial) -> Result<AglSubgroup, AglError> {
    let field = h.field();
    let maps = h.maps().iter().copied().filter(|t| &gamma.compose(&t.as_polynomial(field)) == gamma).collect();
    AglSubgroup::from_maps(field, maps)
}

/// One `(K, M, B)` family found by [`search_mb_subgroups`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchEntry {
    pub subfield_degree: u32,
    pub m_order: usize,
    pub b_dimension: u32,
    pub group_order: usize,
    pub regular_orbits: usize,
}

impl SearchEntry {
    pub fn locality(&self) -> usize {
        self.group_order - 1
    }

    pub fn max_length(&self) -> usize {
        self.group_order * self.regular_orbits
    }
}

/// Enumerates subgroups `{ax + b}` with `M` the order-`d` subgroup of `K*`
/// (one for each divisor `d`) and `B` the `K`-span of the first `j` powers of
/// the field's basis element. This lists one `B` per dimension, not every
/// subspace, so the result is a sample of what the construction reaches and
/// not a classification. Subgroups without a regular orbit cannot carry a
/// good polynomial and are skipped.
pub fn search_mb_subgroups(field: &Field) -> Vec<SearchEntry> {
    let mut seen: HashSet<(Vec<u32>, Vec<u32>)> = HashSet::new();
    let mut out = Vec::new();
    for sub_deg in (1..=field.m()).filter(|d| field.m().is_multiple_of(*d)) {
        let subfield = Subfield::new(field, sub_deg).expect("divisor degree");
        let k_star = subfield.elements().len() as u64 - 1;
        let generator =
            subfield.elements().iter().copied().find(|&x| x != 0 && field.order(x) == k_star).expect("K* is cyclic");
        let x_basis: Vec<u32> = (0..field.m()).map(|i| field.p().pow(i)).collect();
        let max_dim = field.m() / sub_deg;
        for d in (1..=k_star).filter(|d| k_star.is_multiple_of(*d)) {
            let m_group = cyclic_group(field, field.pow(generator, k_star / d));
            for dim in 0..=max_dim {
                let b = independent_prefix(field, &subfield, &x_basis, dim as usize);
                let b_set = span(field, &subfield, &b);
                if !seen.insert((m_group.clone(), b_set.clone())) {
                    continue;
                }
                let Ok(h) = subgroup_from_mb(field, &subfield, &m_group, &b_set) else {
                    continue;
                };
                let regular = h.regular_orbits().len();
                if h.order() < 3 || regular == 0 {
                    continue;
                }
                out.push(SearchEntry {
                    subfield_degree: sub_deg,
                    m_order: m_group.len(),
                    b_dimension: dim,
                    group_order: h.order(),
                    regular_orbits: regular,
                });
            }
        }
    }
    out
}

/// First `dim` vectors of `candidates` that are independent over `K`.
fn independent_prefix(field: &Field, subfield: &Subfield, candidates: &[u32], dim: usize) -> Vec<u32> {
    let mut chosen: Vec<u32> = Vec::new();
    for &c in candidates {
        if chosen.len() == dim {
            break;
        }
        if !span(field, subfield, &chosen).contains(&c) {
            chosen.push(c);
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    fn gf(p: u64, m: u32) -> Field {
        Field::new(p, m, None).unwrap()
    }

    fn example_group(f: &Field) -> AglSubgroup {
        let k = Subfield::new(f, 1).unwrap();
        let a = f.primitive_element().value();
        subgroup_from_mb(f, &k, &[1], &[0, 1, a, f.add(1, a)]).unwrap()
    }

    #[test]
    fn trivial_mb_group() {
        let f = gf(2, 5);
        let k = Subfield::new(&f, 1).unwrap();
        let h = subgroup_from_mb(&f, &k, &[1], &[0]).unwrap();
        assert_eq!(h.maps(), &[AffineMap::IDENTITY]);
        let parts = orbits(&h, &(0..32).collect::<Vec<_>>()).unwrap();
        assert!(parts.orbits.iter().all(|o| o.len() == 1));
    }

    #[test]
    fn example_additive_group_and_cosets() {
        let f = gf(2, 5);
        let h = example_group(&f);
        assert_eq!(h.order(), 4);
        let parts = orbits(&h, &(0..32).collect::<Vec<_>>()).unwrap();
        assert_eq!(parts.len(), 8);
        let b = h.orbit(0);
        for orb in &parts.orbits {
            assert_eq!(orb.len(), 4);
            // each orbit is a coset c + B
            let c = orb[0];
            let mut coset: Vec<u32> = b.iter().map(|&x| f.add(x, c)).collect();
            coset.sort();
            assert_eq!(&coset, orb);
        }
    }

    #[test]
    fn multiplicative_group_gf7() {
        let f = gf(7, 1);
        let k = Subfield::new(&f, 1).unwrap();
        assert_eq!(cyclic_group(&f, 2), vec![1, 2, 4]);
        let h = subgroup_from_mb(&f, &k, &[1, 2, 4], &[0]).unwrap();
        assert_eq!(h.order(), 3);
        let parts = orbits(&h, &(0..7).collect::<Vec<_>>()).unwrap();
        assert_eq!(parts.orbits, vec![vec![0], vec![1, 2, 4], vec![3, 5, 6]]);
    }

    #[test]
    fn mb_input_validation() {
        let f = gf(2, 4);
        let k = Subfield::new(&f, 2).unwrap();
        assert!(matches!(Subfield::new(&f, 3), Err(AglError::NotSubfield { .. })));
        // 2 = x is not in GF(4) inside GF(16) under the default modulus
        let not_in_k = (1..16).find(|&x| !k.contains(x)).unwrap();
        assert!(matches!(subgroup_from_mb(&f, &k, &[1, not_in_k], &[0]), Err(AglError::NotSubgroup(_))));
        assert!(matches!(subgroup_from_mb(&f, &k, &[1], &[0, 1]), Err(AglError::NotSubspace(_))));
        let gf4 = k.elements().to_vec();
        assert_eq!(subgroup_from_mb(&f, &k, &[1], &gf4).unwrap().order(), 4);
    }

    #[test]
    fn from_maps_rejects_non_groups() {
        let f = gf(5, 1);
        assert!(AglSubgroup::from_maps(&f, vec![AffineMap { a: 1, b: 1 }]).is_err());
        assert!(AglSubgroup::from_maps(&f, vec![AffineMap::IDENTITY, AffineMap { a: 1, b: 1 }]).is_err());
        let all_shifts = (0..5).map(|b| AffineMap { a: 1, b }).collect();
        assert_eq!(AglSubgroup::from_maps(&f, all_shifts).unwrap().order(), 5);
    }

    #[test]
    fn orbits_reject_open_domain() {
        let f = gf(7, 1);
        let k = Subfield::new(&f, 1).unwrap();
        let h = subgroup_from_mb(&f, &k, &[1, 2, 4], &[0]).unwrap();
        assert!(matches!(orbits(&h, &[1, 2, 3]), Err(AglError::DomainNotClosed(_))));
    }

    #[test]
    fn compose_matches_function_tables() {
        let f = gf(3, 2);
        for a1 in 1..9 {
            for b1 in [0, 4, 8] {
                for a2 in [1, 5, 7] {
                    for b2 in 0..9 {
                        let f1 = AffineMap { a: a1, b: b1 };
                        let f2 = AffineMap { a: a2, b: b2 };
                        let c = f1.compose(&f, &f2);
                        assert_eq!(c.a, f.mul(a1, a2));
                        assert_eq!(c.b, f.add(f.mul(a1, b2), b1));
                        for x in 0..9 {
                            assert_eq!(c.apply(&f, x), f1.apply(&f, f2.apply(&f, x)));
                        }
                        assert_eq!(f1.inverse(&f).compose(&f, &f1), AffineMap::IDENTITY);
                    }
                }
            }
        }
    }

    #[test]
    fn multiplicative_good_polynomial() {
        let f = gf(13, 1);
        let k = Subfield::new(&f, 1).unwrap();
        let m = cyclic_group(&f, f.pow(2, 3)); // order 4
        let h = subgroup_from_mb(&f, &k, &m, &[0]).unwrap();
        let good = good_polynomial(&h, 1).unwrap();
        let expected = &Polynomial::monomial(&f, 1, 4) - &Polynomial::constant(&f, 1);
        assert_eq!(good.g, expected);
        assert_eq!(good.partition.len(), 3);
        assert_eq!(good_polynomial(&h, 0).unwrap_err(), AglError::NotRegularOrbit { orbit: 1, order: 4 });
        let power = good_polynomial_power(&f, &m).unwrap();
        assert_eq!(power.g, Polynomial::monomial(&f, 1, 4));
        assert_eq!(power.partition, good.partition);
    }

    #[test]
    fn example_good_polynomial_is_modulus_independent() {
        // Every irreducible quintic over GF(2) gives the same formula in
        // terms of its own primitive element.
        let mut moduli = Vec::new();
        for low in 0u32..32 {
            let coeffs: Vec<u32> = (0..5).map(|i| (low >> i) & 1).chain([1]).collect();
            if let Ok(f) = Field::new(2, 5, Some(&coeffs)) {
                moduli.push(f);
            }
        }
        assert_eq!(moduli.len(), 6);
        for f in moduli {
            let h = example_group(&f);
            let g = good_polynomial(&h, 0).unwrap();
            let a = f.primitive_element().value();
            let a2 = f.mul(a, a);
            let expected = Polynomial::from_coeffs(&f, vec![0, f.add(a2, a), f.add(f.add(a2, a), 1), 0, 1]);
            assert_eq!(g.g, expected);
            assert_eq!(g.partition.len(), 8);
        }
    }

    #[test]
    fn mixed_group_good_polynomial_matches_double_product() {
        // K = GF(4) in GF(16), M = K*, B = K: H has order 12.
        let f = gf(2, 4);
        let k = Subfield::new(&f, 2).unwrap();
        let m: Vec<u32> = k.elements().iter().copied().filter(|&x| x != 0).collect();
        let b = k.elements().to_vec();
        let h = subgroup_from_mb(&f, &k, &m, &b).unwrap();
        assert_eq!(h.order(), 12);
        // 1 lies in B, so pick the smallest point outside B
        let alpha = (0..16).find(|x| !k.contains(*x)).unwrap();
        let good = good_polynomial(&h, alpha).unwrap();
        let mut expected = Polynomial::constant(&f, 1);
        for &a in &m {
            for &bb in &b {
                let root = f.add(f.mul(a, alpha), bb);
                expected = &expected * &Polynomial::linear(&f, 1, f.neg(root));
            }
        }
        assert_eq!(good.g, expected);
        assert_eq!(good.partition.len(), 1);
    }

    #[test]
    fn mixed_group_alpha_one_product_formula() {
        // K = GF(3), M = {1, 2}, B = span{x} in GF(9): 1 is not in B.
        let f = gf(3, 2);
        let k = Subfield::new(&f, 1).unwrap();
        let b = span(&f, &k, &[3]);
        let h = subgroup_from_mb(&f, &k, &[1, 2], &b).unwrap();
        assert_eq!(h.order(), 6);
        let good = good_polynomial(&h, 1).unwrap();
        let mut expected = Polynomial::constant(&f, 1);
        for &a in &[1u32, 2] {
            for &bb in &b {
                expected = &expected * &Polynomial::linear(&f, 1, f.neg(f.add(a, bb)));
            }
        }
        assert_eq!(good.g, expected);
    }

    #[test]
    fn orbit_size_law_exhaustive() {
        let cases: Vec<(u64, u32, u32, u32, Vec<u32>)> = vec![
            (2, 4, 2, 3, vec![]),
            (2, 4, 2, 1, vec![4]),
            (3, 2, 1, 2, vec![3]),
            (2, 4, 1, 1, vec![1, 2]),
            (3, 3, 1, 2, vec![1]),
        ];
        for (p, m, sub, m_order, basis) in cases {
            let f = gf(p, m);
            let k = Subfield::new(&f, sub).unwrap();
            let kstar = k.elements().len() as u64 - 1;
            let gen = k.elements().iter().copied().find(|&x| x != 0 && f.order(x) == kstar).unwrap();
            let mg = cyclic_group(&f, f.pow(gen, kstar / m_order as u64));
            let b = span(&f, &k, &basis);
            let h = subgroup_from_mb(&f, &k, &mg, &b).unwrap();
            assert_eq!(h.order(), mg.len() * b.len());
            for alpha in 0..f.q() {
                let expected = if b.contains(&alpha) { b.len() } else { h.order() };
                assert_eq!(h.orbit(alpha).len(), expected);
            }
        }
    }

    #[test]
    fn good_polynomials_constant_on_random_regular_orbits() {
        let mut rng = Rng::new(11);
        let fields = [gf(2, 4), gf(3, 2), gf(2, 5), gf(5, 2), gf(3, 3), gf(2, 6)];
        let mut checked = 0;
        while checked < 200 {
            let f = &fields[rng.index(fields.len())];
            let sub_degs: Vec<u32> = (1..=f.m()).filter(|d| f.m().is_multiple_of(*d)).collect();
            let sub = sub_degs[rng.index(sub_degs.len())];
            let k = Subfield::new(f, sub).unwrap();
            let kstar = k.elements().len() as u64 - 1;
            let divisors: Vec<u64> = (1..=kstar).filter(|d| kstar.is_multiple_of(*d)).collect();
            let d = divisors[rng.index(divisors.len())];
            let gen = k.elements().iter().copied().find(|&x| x != 0 && f.order(x) == kstar).unwrap();
            let mg = cyclic_group(f, f.pow(gen, kstar / d));
            let basis: Vec<u32> = (0..rng.index(3)).map(|_| rng.below(f.q() as u64) as u32).collect();
            let b = span(f, &k, &basis);
            if mg.len() * b.len() > 256 {
                continue;
            }
            let Ok(h) = subgroup_from_mb(f, &k, &mg, &b) else { continue };
            let alpha = rng.below(f.q() as u64) as u32;
            if h.orbit(alpha).len() != h.order() {
                continue;
            }
            let good = good_polynomial(&h, alpha).unwrap();
            assert_eq!(good.g.degree(), Some(h.order()));
            for orb in h.regular_orbits() {
                let v = good.g.eval_value(orb[0]);
                assert!(orb.iter().all(|&x| good.g.eval_value(x) == v));
            }
            checked += 1;
        }
    }

    #[test]
    fn theta_examples() {
        let f = gf(7, 1);
        let shifts = AglSubgroup::from_maps(&f, (0..7).map(|b| AffineMap { a: 1, b }).collect()).unwrap();
        let x = Polynomial::x(&f);
        assert_eq!(theta_subgroup(&shifts, &x).unwrap().order(), 1);
        let x2 = Polynomial::monomial(&f, 1, 2);
        assert_eq!(theta_subgroup(&shifts, &x2).unwrap().maps(), &[AffineMap::IDENTITY]);

        let f32 = gf(2, 5);
        let h = example_group(&f32);
        let good = good_polynomial(&h, 0).unwrap();
        assert_eq!(theta_subgroup(&h, &good.g).unwrap().order(), 4);
        // x^2 + x is fixed exactly by x -> x + 1 and the identity
        let gamma = Polynomial::from_coeffs(&f32, vec![0, 1, 1]);
        let theta = theta_subgroup(&h, &gamma).unwrap();
        assert_eq!(theta.maps(), &[AffineMap::IDENTITY, AffineMap { a: 1, b: 1 }]);
    }

    #[test]
    fn theta_polynomial_and_function_equality_coincide() {
        // deg gamma < q, so equality as functions on the field implies
        // equality as polynomials.
        let f = gf(3, 2);
        let k = Subfield::new(&f, 1).unwrap();
        let h = subgroup_from_mb(&f, &k, &[1, 2], &span(&f, &k, &[3])).unwrap();
        let mut rng = Rng::new(5);
        for _ in 0..50 {
            let deg = 1 + rng.index(7);
            let gamma = Polynomial::from_coeffs(&f, (0..=deg).map(|_| rng.below(9) as u32).collect());
            let theta = theta_subgroup(&h, &gamma).unwrap();
            for t in h.maps() {
                let fn_equal = (0..9).all(|x| gamma.eval_value(t.apply(&f, x)) == gamma.eval_value(x));
                assert_eq!(fn_equal, theta.contains(t));
            }
        }
    }

    #[test]
    fn search_lists_example_family() {
        let f = gf(2, 5);
        let found = search_mb_subgroups(&f);
        assert!(found.iter().any(|e| e.group_order == 4 && e.m_order == 1 && e.max_length() == 32));
        assert!(found.iter().any(|e| e.group_order == 31 && e.regular_orbits == 1));
    }

    #[test]
    fn embedding_preserves_group() {
        let f = gf(3, 1);
        let k = Subfield::new(&f, 1).unwrap();
        let h = subgroup_from_mb(&f, &k, &[1, 2], &[0]).unwrap();
        let ext = crate::field::field_extend(&f).unwrap();
        let big = h.embed(&ext).unwrap();
        assert_eq!(big.order(), 2);
        assert!(big.provenance().is_some());
    }

    #[test]
    fn generated_subgroups() {
        let f = gf(2, 5);
        let a = f.primitive_element().value();
        let h = generated_subgroup(&f, &[AffineMap { a: 1, b: 1 }, AffineMap { a: 1, b: a }]).unwrap();
        assert_eq!(h.maps(), example_group(&f).maps());
        let f8 = gf(2, 3);
        let w = f8.primitive_element().value();
        assert_eq!(generated_subgroup(&f8, &[AffineMap { a: w, b: 0 }]).unwrap().order(), 7);
        // x -> w x + 1 and x -> x + 1 generate all of AGL(1, 8)
        let all = generated_subgroup(&f8, &[AffineMap { a: w, b: 1 }, AffineMap { a: 1, b: 1 }]).unwrap();
        assert_eq!(all.order(), 56);
        assert_eq!(generated_subgroup(&f8, &[]).unwrap().order(), 1);
    }
}
