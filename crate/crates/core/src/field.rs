//! Exact arithmetic in GF(p^m).
//!
//! An element is a coefficient vector `(c_0, ..., c_{m-1})` over GF(p) in the
//! polynomial basis of the field's modulus. Internally the vector is packed
//! into a single `u32` as `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`; this packed
//! value is what [`Field`]'s raw arithmetic methods take and return. Ordering
//! elements by packed value is the same as comparing coefficient vectors from
//! the highest-degree coefficient down, and every "lexicographically smallest"
//! choice in this crate uses that order.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field order accepted by [`Field::new`].
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// Fields up to this order answer odd-characteristic square roots from an
/// exhaustive table; larger ones use Tonelli-Shanks.
pub const SQRT_TABLE_LIMIT: u32 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus {modulus:?} is reducible over GF({p})")]
    ReducibleModulus { p: u32, modulus: Vec<u32> },
    #[error("modulus must be a monic polynomial of degree {degree} with coefficients below {p}, got {modulus:?}")]
    BadModulus { p: u32, degree: u32, modulus: Vec<u32> },
    #[error("field order {p}^{m} exceeds the desk-scale cap of 2^20")]
    FieldTooLarge { p: u64, m: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("{coeffs:?} is not an element of GF({p}^{m})")]
    InvalidElement { p: u32, m: u32, coeffs: Vec<u32> },
}

/// JSON shape of a field: `{"p": .., "m": .., "modulus": [..]}` with the
/// modulus in ascending-degree order. A missing modulus selects the default.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

struct FieldData {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    /// `powers[i] = p^i`, length m + 1.
    powers: Vec<u32>,
    /// `exp[i] = w^i` for the primitive element w, length 2(q - 1).
    exp: Vec<u32>,
    /// Discrete log base w; `log[0]` is unused.
    log: Vec<u32>,
    primitive: u32,
    sqrt_table: OnceLock<Vec<u32>>,
}

/// A finite field GF(p^m). Cloning is cheap; clones share their tables.
#[derive(Clone)]
pub struct Field {
    inner: Arc<FieldData>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; modulus {:?})", self.p(), self.m(), self.modulus())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Polynomials over GF(p) as ascending coefficient vectors, used only while
// building a field (before its tables exist).

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn gfp_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = gfp_inv(b[db], p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &bi) in b.iter().enumerate() {
            let sub = (c as u64 * bi as u64 % p as u64) as u32;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        trim(&mut r);
    }
    r
}

fn gfp_inv(a: u32, p: u32) -> u32 {
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    if deg <= 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut divisor = Vec::with_capacity(d + 1);
            let mut x = low;
            for _ in 0..d {
                divisor.push((x % p as u64) as u32);
                x /= p as u64;
            }
            divisor.push(1);
            if gfp_rem(modulus, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Smallest monic irreducible of degree `m` over GF(p), comparing the
/// non-leading coefficients from the highest degree down.
fn default_modulus(p: u32, m: u32) -> Vec<u32> {
    if m == 1 {
        return vec![0, 1];
    }
    let count = (p as u64).pow(m);
    for low in 0..count {
        let mut candidate = Vec::with_capacity(m as usize + 1);
        let mut x = low;
        for _ in 0..m {
            candidate.push((x % p as u64) as u32);
            x /= p as u64;
        }
        candidate.push(1);
        if is_irreducible(&candidate, p) {
            return candidate;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl Field {
    /// Builds GF(p^m). With `modulus == None` the smallest monic irreducible
    /// of degree `m` is used, so equal inputs always give identical fields.
    pub fn new(p: u64, m: u32, modulus: Option<&[u32]>) -> Result<Field, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order = (p as u128).checked_pow(m);
        if order.is_none_or(|q| q > MAX_FIELD_ORDER as u128) {
            return Err(FieldError::FieldTooLarge { p, m });
        }
        let p = p as u32;
        let modulus = match modulus {
            Some(given) => {
                let ok = given.len() == m as usize + 1 && given[m as usize] == 1 && given.iter().all(|&c| c < p);
                if !ok {
                    return Err(FieldError::BadModulus { p, degree: m, modulus: given.to_vec() });
                }
                if !is_irreducible(given, p) {
                    return Err(FieldError::ReducibleModulus { p, modulus: given.to_vec() });
                }
                given.to_vec()
            }
            None => default_modulus(p, m),
        };
        Ok(Field { inner: Arc::new(FieldData::build(p, m, modulus)) })
    }

    pub fn from_descriptor(desc: &FieldDescriptor) -> Result<Field, FieldError> {
        Field::new(desc.p, desc.m, desc.modulus.as_deref())
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor { p: self.p() as u64, m: self.m(), modulus: Some(self.modulus().to_vec()) }
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn m(&self) -> u32 {
        self.inner.m
    }

    /// Field order p^m.
    pub fn q(&self) -> u32 {
        self.inner.q
    }

    /// Ascending-degree coefficients of the monic modulus.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    /// Wraps a packed value. Panics if `value >= q`.
    pub fn element(&self, value: u32) -> FieldElement {
        assert!(value < self.q(), "packed value {value} out of range for GF({})", self.q());
        FieldElement { field: self.clone(), value }
    }

    /// Element from its ascending coefficient vector. Shorter vectors are
    /// zero-padded.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement, FieldError> {
        self.pack(coeffs).map(|v| self.element(v))
    }

    pub fn pack(&self, coeffs: &[u32]) -> Result<u32, FieldError> {
        let invalid = || FieldError::InvalidElement { p: self.p(), m: self.m(), coeffs: coeffs.to_vec() };
        if coeffs.len() > self.m() as usize || coeffs.iter().any(|&c| c >= self.p()) {
            return Err(invalid());
        }
        Ok(coeffs.iter().zip(&self.inner.powers).map(|(&c, &w)| c * w).sum())
    }

    /// Ascending coefficient vector (length m) of a packed value.
    pub fn coeffs(&self, value: u32) -> Vec<u32> {
        let p = self.p();
        let mut v = value;
        (0..self.m())
            .map(|_| {
                let c = v % p;
                v /= p;
                c
            })
            .collect()
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        self.element(n.rem_euclid(self.p() as i64) as u32)
    }

    /// All elements in increasing packed order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q()).map(move |v| self.element(v))
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        let d = &self.inner;
        if d.p == 2 {
            return a ^ b;
        }
        if d.m == 1 {
            return (a + b) % d.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        for &w in &d.powers[..d.m as usize] {
            out += ((a % d.p + b % d.p) % d.p) * w;
            a /= d.p;
            b /= d.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let d = &self.inner;
        if d.p == 2 {
            return a;
        }
        if d.m == 1 {
            return (d.p - a) % d.p;
        }
        let mut a = a;
        let mut out = 0;
        for &w in &d.powers[..d.m as usize] {
            out += ((d.p - a % d.p) % d.p) * w;
            a /= d.p;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let d = &self.inner;
        d.exp[(d.log[a as usize] + d.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32, FieldError> {
        if a == 0 {
            return Err(FieldError::ZeroInverse);
        }
        let d = &self.inner;
        let l = d.log[a as usize];
        Ok(if l == 0 { 1 } else { d.exp[(d.q - 1 - l) as usize] })
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let d = &self.inner;
        let order = (d.q - 1) as u64;
        let l = (d.log[a as usize] as u64 * (e % order)) % order;
        d.exp[l as usize]
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: u32) -> u64 {
        assert!(a != 0, "zero has no multiplicative order");
        let order = (self.q() - 1) as u64;
        let l = self.inner.log[a as usize] as u64;
        order / gcd(order, l)
    }

    /// Smallest element (in packed order) of multiplicative order q - 1.
    pub fn primitive_element(&self) -> FieldElement {
        self.element(self.inner.primitive)
    }

    pub fn is_quadratic_residue(&self, a: u32) -> bool {
        a == 0 || self.p() == 2 || self.inner.log[a as usize].is_multiple_of(2)
    }

    /// A square root of `a`, if one exists. In odd characteristic the root
    /// with the smaller packed value is returned.
    pub fn sqrt(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return Some(0);
        }
        if self.p() == 2 {
            return Some(self.pow(a, (self.q() / 2) as u64));
        }
        if self.q() <= SQRT_TABLE_LIMIT {
            let root = self.sqrt_table()[a as usize];
            (root != u32::MAX).then_some(root)
        } else {
            self.sqrt_tonelli_shanks(a)
        }
    }

    fn sqrt_table(&self) -> &[u32] {
        self.inner.sqrt_table.get_or_init(|| {
            let mut table = vec![u32::MAX; self.q() as usize];
            for x in 0..self.q() {
                let sq = self.mul(x, x) as usize;
                if table[sq] == u32::MAX {
                    table[sq] = x;
                }
            }
            table
        })
    }

    /// Tonelli-Shanks square root, valid in odd characteristic for any field
    /// size. Uses the same tie-break as [`Field::sqrt`].
    pub fn sqrt_tonelli_shanks(&self, a: u32) -> Option<u32> {
        assert!(self.p() != 2, "Tonelli-Shanks needs odd characteristic");
        if a == 0 {
            return Some(0);
        }
        let q1 = (self.q() - 1) as u64;
        if self.pow(a, q1 / 2) != 1 {
            return None;
        }
        let s = q1.trailing_zeros();
        let t = q1 >> s;
        let minus_one = self.neg(1);
        let z = (2..self.q()).find(|&z| self.pow(z, q1 / 2) == minus_one).expect("odd fields have non-residues");
        let mut m = s;
        let mut c = self.pow(z, t);
        let mut tt = self.pow(a, t);
        let mut r = self.pow(a, t.div_ceil(2));
        while tt != 1 {
            let mut i = 0;
            let mut probe = tt;
            while probe != 1 {
                probe = self.mul(probe, probe);
                i += 1;
            }
            let b = self.pow(c, 1u64 << (m - i - 1));
            m = i;
            c = self.mul(b, b);
            tt = self.mul(tt, c);
            r = self.mul(r, b);
        }
        Some(r.min(self.neg(r)))
    }

    /// Frobenius-fixed elements of GF(p^d), for d | m, in packed order.
    pub fn subfield_elements(&self, d: u32) -> Option<Vec<u32>> {
        if d == 0 || !self.m().is_multiple_of(d) {
            return None;
        }
        let order = (self.p() as u64).pow(d);
        Some((0..self.q()).filter(|&x| self.pow(x, order) == x).collect())
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl FieldData {
    fn build(p: u32, m: u32, modulus: Vec<u32>) -> FieldData {
        let q = p.pow(m);
        let powers: Vec<u32> = (0..=m).map(|i| p.pow(i)).collect();
        let unpack = |v: u32| -> Vec<u32> {
            let mut v = v;
            (0..m)
                .map(|_| {
                    let c = v % p;
                    v /= p;
                    c
                })
                .collect()
        };
        let pack = |c: &[u32]| -> u32 { c.iter().zip(&powers).map(|(&c, &w)| c * w).sum() };
        // Slow product of digit vectors modulo the modulus.
        let slow_mul = |a: &[u32], b: &[u32]| -> Vec<u32> {
            let mut prod = vec![0u32; 2 * m as usize];
            for (i, &ai) in a.iter().enumerate() {
                if ai == 0 {
                    continue;
                }
                for (j, &bj) in b.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + ai * bj % p) % p;
                }
            }
            let mut r = gfp_rem(&prod, &modulus, p);
            r.resize(m as usize, 0);
            r
        };
        let slow_pow = |a: &[u32], mut e: u64| -> Vec<u32> {
            let mut result = unpack(1);
            let mut base = a.to_vec();
            while e > 0 {
                if e & 1 == 1 {
                    result = slow_mul(&result, &base);
                }
                base = slow_mul(&base, &base);
                e >>= 1;
            }
            result
        };

        let group = (q - 1) as u64;
        let factors = prime_factors(group);
        let primitive = (1..q)
            .find(|&g| {
                let digits = unpack(g);
                factors.iter().all(|&f| pack(&slow_pow(&digits, group / f)) != 1)
            })
            .expect("the multiplicative group is cyclic");

        let mut exp = vec![0u32; 2 * (q as usize - 1).max(1)];
        let mut log = vec![0u32; q as usize];
        let gen = unpack(primitive);
        let mut cur = unpack(1);
        for (i, slot) in exp.iter_mut().take((q - 1) as usize).enumerate() {
            let v = pack(&cur);
            *slot = v;
            log[v as usize] = i as u32;
            cur = slow_mul(&cur, &gen);
        }
        for i in (q - 1) as usize..exp.len() {
            exp[i] = exp[i - (q - 1) as usize];
        }
        FieldData { p, m, q, modulus, powers, exp, log, primitive, sqrt_table: OnceLock::new() }
    }
}

/// An element bound to its field.
///
/// Operator impls panic when the operands come from different fields; the
/// `try_*` methods report [`FieldError::FieldMismatch`] instead.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    value: u32,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Packed value (see the module docs).
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &FieldElement) -> Result<(), FieldError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    fn with(&self, value: u32) -> FieldElement {
        FieldElement { field: self.field.clone(), value }
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.with(self.field.add(self.value, other.value)))
    }

    pub fn try_sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.with(self.field.sub(self.value, other.value)))
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.with(self.field.mul(self.value, other.value)))
    }

    pub fn try_div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(other)?;
        Ok(self.with(self.field.div(self.value, other.value)?))
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        Ok(self.with(self.field.inv(self.value)?))
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.with(self.field.pow(self.value, e))
    }

    pub fn sqrt(&self) -> Option<FieldElement> {
        self.field.sqrt(self.value).map(|v| self.with(v))
    }

    pub fn is_quadratic_residue(&self) -> bool {
        self.field.is_quadratic_residue(self.value)
    }

    pub fn order(&self) -> u64 {
        self.field.order(self.value)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.field == other.field
    }
}

impl Eq for FieldElement {}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        (self.field == other.field).then(|| self.value.cmp(&other.value))
    }
}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.value.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({:?})", self.coeffs())
    }
}

/// Renders the element as a polynomial in `a`, e.g. `a^2+a+1`; prime field
/// elements print as integers.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.coeffs();
        if self.value == 0 {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "a")?,
                (1, c) => write!(f, "{c}a")?,
                (i, 1) => write!(f, "a^{i}")?,
                (i, c) => write!(f, "{c}a^{i}")?,
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$try(rhs).expect("field mismatch")
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$try(&rhs).expect("field mismatch")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.with(self.field.neg(self.value))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// GF(q^2) together with the embedding of GF(q) into it.
#[derive(Clone, Debug)]
pub struct Extension {
    base: Field,
    big: Field,
    table: Vec<u32>,
}

impl Extension {
    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn big(&self) -> &Field {
        &self.big
    }

    /// Packed image of a packed base-field value.
    pub fn embed_value(&self, a: u32) -> u32 {
        self.table[a as usize]
    }

    pub fn embed(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        if a.field() != &self.base {
            return Err(FieldError::FieldMismatch);
        }
        Ok(self.big.element(self.embed_value(a.value())))
    }
}

/// Builds GF(q^2) with its default modulus and embeds GF(q) by sending the
/// basis element to the smallest root of the base modulus.
pub fn field_extend(base: &Field) -> Result<Extension, FieldError> {
    let big = Field::new(base.p() as u64, 2 * base.m(), None)?;
    let modulus = base.modulus();
    let eval = |y: u32| modulus.iter().rev().fold(0u32, |acc, &c| big.add(big.mul(acc, y), c));
    let root = if base.m() == 1 {
        // The basis element of a prime field is never used; constants embed
        // as themselves.
        0
    } else {
        (0..big.q()).find(|&y| eval(y) == 0).expect("a degree-2 extension splits the base modulus")
    };
    let table = (0..base.q())
        .map(|a| base.coeffs(a).iter().rev().fold(0u32, |acc, &c| big.add(big.mul(acc, root), c)))
        .collect();
    Ok(Extension { base: base.clone(), big, table })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_gf2() {
        let f = Field::new(2, 1, None).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.primitive_element().value(), 1);
        assert_eq!(f.inv(1).unwrap(), 1);
    }

    #[test]
    fn gf32_default_modulus_is_smallest_irreducible_quintic() {
        // Oracle: walk monic quintics in packed order and test each by
        // checking for factors of degree 1 and 2 directly.
        let f = Field::new(2, 5, None).unwrap();
        let mut expected = None;
        'outer: for low in 0u32..32 {
            let poly = low | 32;
            for d in 2u32..8 {
                // carry-less remainder of poly by d
                let mut r = poly;
                let dd = 31 - d.leading_zeros();
                while r != 0 && 31 - r.leading_zeros() >= dd {
                    r ^= d << (31 - r.leading_zeros() - dd);
                }
                if r == 0 {
                    continue 'outer;
                }
            }
            expected = Some(poly);
            break;
        }
        let expected = expected.unwrap();
        let coeffs: Vec<u32> = (0..6).map(|i| (expected >> i) & 1).collect();
        assert_eq!(f.modulus(), &coeffs[..]);
        assert_eq!(f.modulus(), &[1, 0, 1, 0, 0, 1]);
    }

    #[test]
    fn gf9_from_x2_plus_1() {
        let f = Field::new(3, 2, Some(&[1, 0, 1])).unwrap();
        assert_eq!(f.q(), 9);
        // x^2 + 1 has no root in GF(3)
        assert!((0..3u32).all(|x| (x * x + 1) % 3 != 0));
    }

    #[test]
    fn creation_errors() {
        assert_eq!(Field::new(4, 1, None).unwrap_err(), FieldError::NotPrime(4));
        assert!(matches!(Field::new(2, 21, None), Err(FieldError::FieldTooLarge { .. })));
        assert!(matches!(Field::new(2, 2, Some(&[1, 0, 1])), Err(FieldError::ReducibleModulus { .. })));
        assert!(matches!(Field::new(3, 2, Some(&[2, 0, 1])), Err(FieldError::ReducibleModulus { .. })));
        assert!(matches!(Field::new(3, 2, Some(&[1, 1])), Err(FieldError::BadModulus { .. })));
    }

    #[test]
    fn creation_is_deterministic() {
        for (p, m) in [(2, 4), (3, 3), (5, 2), (7, 1)] {
            let a = Field::new(p, m, None).unwrap();
            let b = Field::new(p, m, None).unwrap();
            assert_eq!(a.modulus(), b.modulus());
            assert_eq!(a.primitive_element().value(), b.primitive_element().value());
        }
    }

    #[test]
    fn small_inverses_and_orders() {
        let f3 = Field::new(3, 1, None).unwrap();
        assert_eq!(f3.inv(2).unwrap(), 2);
        assert_eq!(f3.primitive_element().value(), 2);
        assert_eq!(f3.inv(0), Err(FieldError::ZeroInverse));

        let f32 = Field::new(2, 5, None).unwrap();
        let alpha = f32.primitive_element();
        assert_eq!(alpha.pow(31), f32.one());

        // GF(4): the basis element x has order 3 under any quadratic modulus.
        let f4 = Field::new(2, 2, None).unwrap();
        assert_eq!(f4.primitive_element().coeffs(), vec![0, 1]);
    }

    #[test]
    fn exhaustive_field_axioms() {
        for (p, m) in [(2, 3), (3, 2), (5, 1), (2, 4), (7, 1)] {
            let f = Field::new(p, m, None).unwrap();
            let q = f.q();
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                    assert_eq!(f.pow(a, (q - 1) as u64), 1);
                }
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in [0, 1, q - 1] {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn mul_agrees_with_schoolbook_in_gf32() {
        let f = Field::new(2, 5, None).unwrap();
        let modulus = 0b100101u32;
        for a in 0..32u32 {
            for b in 0..32u32 {
                let mut prod = 0u32;
                for i in 0..5 {
                    if (b >> i) & 1 == 1 {
                        prod ^= a << i;
                    }
                }
                for bit in (5..10).rev() {
                    if (prod >> bit) & 1 == 1 {
                        prod ^= modulus << (bit - 5);
                    }
                }
                assert_eq!(f.mul(a, b), prod);
            }
        }
    }

    #[test]
    fn char2_sqrt_is_frobenius_inverse() {
        let f = Field::new(2, 5, None).unwrap();
        let mut seen = [false; 32];
        for a in 0..32 {
            let r = f.sqrt(a).unwrap();
            assert_eq!(r, f.pow(a, 16));
            assert_eq!(f.mul(r, r), a);
            assert!(f.is_quadratic_residue(a));
            seen[r as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn gf7_residues() {
        let f = Field::new(7, 1, None).unwrap();
        let residues: Vec<u32> = (0..7).filter(|&a| f.is_quadratic_residue(a)).collect();
        // oracle: square every element
        let mut squares: Vec<u32> = (0..7u32).map(|x| x * x % 7).collect();
        squares.sort();
        squares.dedup();
        assert_eq!(residues, squares);
        assert_eq!(residues, vec![0, 1, 2, 4]);
        assert_eq!(f.sqrt(3), None);
        assert_eq!(f.sqrt(0), Some(0));
        assert_eq!(f.sqrt(2), Some(3));
    }

    #[test]
    fn residue_count_odd_fields() {
        for (p, m) in [(3, 1), (3, 2), (5, 2), (7, 2), (11, 1), (3, 3)] {
            let f = Field::new(p, m, None).unwrap();
            let count = (0..f.q()).filter(|&a| f.is_quadratic_residue(a)).count() as u32;
            assert_eq!(count, f.q().div_ceil(2));
            for a in 0..f.q() {
                if let Some(r) = f.sqrt(a) {
                    assert_eq!(f.mul(r, r), a);
                    assert!(r <= f.neg(r));
                }
            }
        }
    }

    #[test]
    fn tonelli_shanks_agrees_with_table() {
        for (p, m) in [(3, 2), (5, 2), (7, 2), (13, 1), (3, 4), (17, 1)] {
            let f = Field::new(p, m, None).unwrap();
            for a in 0..f.q() {
                assert_eq!(f.sqrt(a), f.sqrt_tonelli_shanks(a), "GF({p}^{m}) a={a}");
            }
        }
    }

    #[test]
    fn large_odd_field_uses_tonelli_shanks() {
        let f = Field::new(3, 11, None).unwrap();
        assert!(f.q() > SQRT_TABLE_LIMIT);
        for a in (1..f.q()).step_by(997) {
            let sq = f.mul(a, a);
            let r = f.sqrt(sq).unwrap();
            assert_eq!(f.mul(r, r), sq);
        }
    }

    #[test]
    fn extension_embeds_homomorphically() {
        let f3 = Field::new(3, 1, None).unwrap();
        let ext = field_extend(&f3).unwrap();
        assert_eq!(ext.big().q(), 9);
        assert_eq!(ext.embed_value(2), 2);

        let f5 = Field::new(5, 1, None).unwrap();
        let ext5 = field_extend(&f5).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                let big = ext5.big();
                assert_eq!(ext5.embed_value(f5.mul(a, b)), big.mul(ext5.embed_value(a), ext5.embed_value(b)));
                assert_eq!(ext5.embed_value(f5.add(a, b)), big.add(ext5.embed_value(a), ext5.embed_value(b)));
            }
        }

        let f4 = Field::new(2, 2, None).unwrap();
        let ext4 = field_extend(&f4).unwrap();
        let big = ext4.big();
        assert_eq!(big.q(), 16);
        let mut image: Vec<u32> = (1..4).map(|a| ext4.embed_value(a)).collect();
        image.sort();
        let mut order3: Vec<u32> = (1..16).filter(|&x| big.order(x) == 1 || big.order(x) == 3).collect();
        order3.sort();
        assert_eq!(image, order3);
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(ext4.embed_value(f4.mul(a, b)), big.mul(ext4.embed_value(a), ext4.embed_value(b)));
            }
        }
    }

    #[test]
    fn extend_too_large() {
        let f = Field::new(2, 11, None).unwrap();
        assert!(matches!(field_extend(&f), Err(FieldError::FieldTooLarge { .. })));
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let a = Field::new(2, 3, None).unwrap().one();
        let b = Field::new(2, 4, None).unwrap().one();
        assert_eq!(a.try_add(&b), Err(FieldError::FieldMismatch));
        assert_eq!(a.try_mul(&b), Err(FieldError::FieldMismatch));
    }

    #[test]
    fn display_renders_polynomial_basis() {
        let f = Field::new(2, 5, None).unwrap();
        assert_eq!(f.from_coeffs(&[1, 1, 1]).unwrap().to_string(), "a^2+a+1");
        assert_eq!(f.zero().to_string(), "0");
        let f9 = Field::new(3, 2, None).unwrap();
        assert_eq!(f9.from_coeffs(&[2, 2]).unwrap().to_string(), "2a+2");
    }

    #[test]
    fn descriptor_json_shape() {
        let f = Field::new(3, 2, Some(&[1, 0, 1])).unwrap();
        let json = serde_json::to_string(&f.descriptor()).unwrap();
        assert_eq!(json, r#"{"p":3,"m":2,"modulus":[1,0,1]}"#);
        let back: FieldDescriptor = serde_json::from_str(&json).unwrap();
        assert_eq!(Field::from_descriptor(&back).unwrap(), f);
    }
}
