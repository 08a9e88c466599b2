//! Dual-containing locally recoverable codes from a good polynomial.
//!
//! Given an evaluation set `A` split into blocks of size `r + 1`, a good
//! polynomial `g` constant on the blocks, and multipliers `u` with
//! `sum_i u_i^2 a_i^j = 0` for `0 <= j <= n - 2`, the code `C` is spanned by
//! the evaluations `(u_1 f(a_1), ..., u_n f(a_n))` of
//!
//! - `S1`: the `k - n/(r+1)` lowest-degree monomials `x^i g^j`, `1 <= i <= r - 1`,
//! - `S2`: `g^j` for `0 <= j < n/(r+1)`.
//!
//! Its dual is spanned by the same evaluations over `T = T1 ∪ S2`, where `T1`
//! takes the `n - k - n/(r+1)` lowest-degree monomials of the `S1` form.
//! Everything stated here is re-checked when an instance is built.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agl::AglSubgroup;
use crate::field::{field_extend, Extension, Field, FieldElement, FieldError};
use crate::linalg::{self, Matrix};
use crate::poly::{annihilator, interpolate_values, PolyError, Polynomial};
use crate::rng::Rng;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error("evaluation points must be distinct and at least two")]
    DegenerateSet,
    #[error("dimension k = {k} is out of range: need n/2 < k <= n r/(r+1) for n = {n}, r = {r}")]
    BadDimension { n: usize, k: usize, r: usize },
    #[error("locality r = {0} is too small; the x^i g^j monomials need r >= 2")]
    LocalityTooSmall(usize),
    #[error("block size r + 1 = {block} must divide n = {n}")]
    BlockSizeMismatch { n: usize, block: usize },
    #[error("length n = {n} exceeds the field order {q}")]
    TooLong { n: usize, q: u32 },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("good polynomial has degree {found:?}, expected block size {expected}")]
    GoodPolynomialDegree { expected: usize, found: Option<usize> },
    #[error("good polynomial is not constant on block {0}")]
    NotGoodPolynomial(usize),
    #[error("multiplier u_{0} is zero")]
    ZeroMultiplier(usize),
    #[error("multipliers violate sum_i u_i^2 a_i^j = 0 for some 0 <= j <= n-2")]
    MultiplierCondition,
    #[error("generator matrix of {which} has rank {rank}, expected {expected}")]
    RankDeficient { which: &'static str, rank: usize, expected: usize },
    #[error("row {s} of C is not orthogonal to row {t} of its dual")]
    OrthogonalityFailure { s: usize, t: usize },
    #[error("dual code is not contained in the code")]
    NotDualContaining,
    #[error("the ring spanned by powers of g modulo the annihilator of A fails: {0}")]
    RingCheck(String),
    #[error("expected length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("position {0} is out of range")]
    IndexOutOfRange(usize),
    #[error("position {0} is not marked as erased")]
    NotErased(usize),
    #[error("repair group of position {erased} is missing symbol {missing}")]
    BlockIncomplete { erased: usize, missing: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `sum_i u_i^2 a_i^j == 0` for every `0 <= j <= n - 2`.
pub fn multiplier_condition_holds(field: &Field, points: &[u32], u: &[u32]) -> bool {
    let n = points.len();
    if u.len() != n {
        return false;
    }
    let mut terms: Vec<u32> = u.iter().map(|&x| field.mul(x, x)).collect();
    for _ in 0..n.saturating_sub(1) {
        if terms.iter().fold(0, |acc, &t| field.add(acc, t)) != 0 {
            return false;
        }
        for (t, &a) in terms.iter_mut().zip(points) {
            *t = field.mul(*t, a);
        }
    }
    true
}

/// Multipliers for an evaluation set, possibly over GF(q^2).
#[derive(Debug, Clone)]
pub struct Multipliers {
    /// Field the multipliers (and so the code) live in.
    pub field: Field,
    pub u: Vec<u32>,
    /// Set when the multipliers needed the quadratic extension.
    pub extension: Option<Extension>,
}

/// Solves for `u` with `u_i^2 = c v_i`, where `v_i = prod_{j != i} (a_i - a_j)^{-1}`
/// spans the null space of the `(n-1) x n` Vandermonde matrix.
///
/// In characteristic 2 every `v_i` has a root. In odd characteristic, if the
/// `v_i` are all residues `c = 1`; if all are non-residues `c` is the smallest
/// non-residue; otherwise the roots are taken in GF(q^2).
pub fn solve_multipliers(field: &Field, points: &[u32]) -> Result<Multipliers, ConstructError> {
    let n = points.len();
    let distinct: HashSet<u32> = points.iter().copied().collect();
    if n < 2 || distinct.len() != n || points.iter().any(|&a| a >= field.q()) {
        return Err(ConstructError::DegenerateSet);
    }
    let v: Vec<u32> = points
        .iter()
        .enumerate()
        .map(|(i, &ai)| {
            let prod = points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(1, |acc, (_, &aj)| field.mul(acc, field.sub(ai, aj)));
            field.inv(prod)
        })
        .collect::<Result<_, _>>()?;

    let residues = v.iter().filter(|&&x| field.is_quadratic_residue(x)).count();
    let roots = |f: &Field, vals: &[u32]| -> Vec<u32> {
        vals.iter().map(|&x| f.sqrt(x).expect("value is a residue")).collect()
    };
    let result = if residues == n {
        Multipliers { field: field.clone(), u: roots(field, &v), extension: None }
    } else if residues == 0 {
        let c = (1..field.q()).find(|&c| !field.is_quadratic_residue(c)).expect("odd fields have non-residues");
        let scaled: Vec<u32> = v.iter().map(|&x| field.mul(c, x)).collect();
        Multipliers { field: field.clone(), u: roots(field, &scaled), extension: None }
    } else {
        let ext = field_extend(field)?;
        let big = ext.big().clone();
        let lifted: Vec<u32> = v.iter().map(|&x| ext.embed_value(x)).collect();
        Multipliers { u: roots(&big, &lifted), field: big, extension: Some(ext) }
    };

    let pts: Vec<u32> = match &result.extension {
        Some(ext) => points.iter().map(|&a| ext.embed_value(a)).collect(),
        None => points.to_vec(),
    };
    debug_assert!(multiplier_condition_holds(&result.field, &pts, &result.u));
    if !multiplier_condition_holds(&result.field, &pts, &result.u) {
        return Err(ConstructError::MultiplierCondition);
    }
    Ok(result)
}

/// Evaluation set `A`, its blocks, the multipliers and the good polynomial.
#[derive(Debug, Clone)]
pub struct EvaluationSet {
    field: Field,
    points: Vec<u32>,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
    u: Vec<u32>,
    good: Polynomial,
    block_values: Vec<u32>,
    base_field: Option<Field>,
}

impl EvaluationSet {
    /// Checks every invariant: distinct points, `n <= q`, equal-size blocks
    /// that partition the positions, `deg g` equal to the block size, `g`
    /// constant per block, nonzero multipliers, and the multiplier condition.
    pub fn new(
        field: &Field,
        points: Vec<u32>,
        blocks: Vec<Vec<usize>>,
        u: Vec<u32>,
        good: Polynomial,
    ) -> Result<EvaluationSet, ConstructError> {
        let n = points.len();
        let distinct: HashSet<u32> = points.iter().copied().collect();
        if n < 2 || distinct.len() != n || points.iter().any(|&a| a >= field.q()) {
            return Err(ConstructError::DegenerateSet);
        }
        if n > field.q() as usize {
            return Err(ConstructError::TooLong { n, q: field.q() });
        }
        if good.field() != field {
            return Err(FieldError::FieldMismatch.into());
        }
        let Some(size) = blocks.first().map(|b| b.len()).filter(|&s| s > 0) else {
            return Err(ConstructError::InvalidPartition("no blocks".into()));
        };
        if !n.is_multiple_of(size) {
            return Err(ConstructError::BlockSizeMismatch { n, block: size });
        }
        let mut block_of = vec![usize::MAX; n];
        for (bi, block) in blocks.iter().enumerate() {
            if block.len() != size {
                return Err(ConstructError::InvalidPartition(format!(
                    "block {bi} has size {}, expected {size}",
                    block.len()
                )));
            }
            for &pos in block {
                if pos >= n || block_of[pos] != usize::MAX {
                    return Err(ConstructError::InvalidPartition(format!(
                        "position {pos} is out of range or repeated"
                    )));
                }
                block_of[pos] = bi;
            }
        }
        if block_of.contains(&usize::MAX) {
            return Err(ConstructError::InvalidPartition("blocks do not cover every position".into()));
        }
        if good.degree() != Some(size) {
            return Err(ConstructError::GoodPolynomialDegree { expected: size, found: good.degree() });
        }
        let mut block_values = Vec::with_capacity(blocks.len());
        for (bi, block) in blocks.iter().enumerate() {
            let v = good.eval_value(points[block[0]]);
            if block.iter().any(|&pos| good.eval_value(points[pos]) != v) {
                return Err(ConstructError::NotGoodPolynomial(bi));
            }
            block_values.push(v);
        }
        if u.len() != n {
            return Err(ConstructError::LengthMismatch { expected: n, got: u.len() });
        }
        if let Some(i) = u.iter().position(|&x| x == 0) {
            return Err(ConstructError::ZeroMultiplier(i));
        }
        if u.iter().any(|&x| x >= field.q()) {
            return Err(FieldError::InvalidElement { p: field.p(), m: field.m(), coeffs: u.clone() }.into());
        }
        if !multiplier_condition_holds(field, &points, &u) {
            return Err(ConstructError::MultiplierCondition);
        }
        Ok(EvaluationSet { field: field.clone(), points, blocks, block_of, u, good, block_values, base_field: None })
    }

    /// Marks the set as lifted from `base` into its quadratic extension.
    pub fn with_base_field(mut self, base: Field) -> EvaluationSet {
        self.base_field = Some(base);
        self
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn base_field(&self) -> Option<&Field> {
        self.base_field.as_ref()
    }

    pub fn is_extended(&self) -> bool {
        self.base_field.is_some()
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Locality, one less than the block size.
    pub fn r(&self) -> usize {
        self.blocks[0].len() - 1
    }

    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, position: usize) -> usize {
        self.block_of[position]
    }

    pub fn u(&self) -> &[u32] {
        &self.u
    }

    pub fn good_polynomial(&self) -> &Polynomial {
        &self.good
    }

    pub fn block_values(&self) -> &[u32] {
        &self.block_values
    }

    /// Evaluations `u_t a_t^i g(a_t)^j` of the monomial `x^i g^j`.
    pub fn evaluate_monomial(&self, i: usize, j: usize) -> Vec<u32> {
        let f = &self.field;
        (0..self.n())
            .map(|t| {
                let g = self.block_values[self.block_of[t]];
                f.mul(self.u[t], f.mul(f.pow(self.points[t], i as u64), f.pow(g, j as u64)))
            })
            .collect()
    }

    /// Checks that `{1, g, ..., g^{b-1}}` (b = number of blocks) is linearly
    /// independent and that `trials` random products `g^i g^j mod h`, with
    /// `h` the annihilator of `A`, re-express in that basis.
    pub fn ring_check(&self, rng: &mut Rng, trials: usize) -> Result<(), ConstructError> {
        ring_check(&self.field, &self.points, &self.good, self.blocks.len(), rng, trials)
    }
}

/// Ring check on raw data: `{1, g, ..., g^{dim-1}}` is linearly independent
/// modulo the annihilator `h` of `points`, and `trials` random products
/// `g^i g^j mod h` re-express in that basis by a linear solve.
pub fn ring_check(
    f: &Field,
    points: &[u32],
    good: &Polynomial,
    dim: usize,
    rng: &mut Rng,
    trials: usize,
) -> Result<(), ConstructError> {
    let n = points.len();
    let h = annihilator(f, points);
    let mut powers = vec![Polynomial::constant(f, 1)];
    for _ in 1..dim {
        let next = powers.last().unwrap() * good;
        powers.push(next);
    }
    let as_row = |p: &Polynomial| -> Vec<u32> {
        let mut row = p.coeffs().to_vec();
        row.resize(n, 0);
        row
    };
    let basis: Matrix = powers.iter().map(as_row).collect();
    if basis.iter().any(|r| r.len() != n) || linalg::rank(f, &basis) != dim {
        return Err(ConstructError::RingCheck("powers of g are linearly dependent".into()));
    }
    for _ in 0..trials {
        let i = rng.index(dim);
        let j = rng.index(dim);
        let prod = (&powers[i] * &powers[j]).rem(&h)?;
        let row = as_row(&prod);
        let Some(coeffs) = linalg::solve_combination(f, &basis, &row) else {
            return Err(ConstructError::RingCheck(format!("g^{i} * g^{j} mod h is outside the span")));
        };
        if linalg::combine(f, &coeffs, &basis) != row {
            return Err(ConstructError::RingCheck(format!("g^{i} * g^{j} mod h does not re-express")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExponentRole {
    S1,
    S2,
    T1,
}

/// Monomials `x^i g^j`, stored as `(i, j)` pairs in increasing degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentSet {
    pub role: ExponentRole,
    pub pairs: Vec<(usize, usize)>,
}

impl ExponentSet {
    /// Degree of `x^i g^j` is `i + j (r + 1)`.
    pub fn degrees(&self, r: usize) -> Vec<usize> {
        self.pairs.iter().map(|&(i, j)| i + j * (r + 1)).collect()
    }

    pub fn max_degree(&self, r: usize) -> Option<usize> {
        self.degrees(r).into_iter().max()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentSets {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub s1: ExponentSet,
    pub s2: ExponentSet,
    pub t1: ExponentSet,
    /// Largest degree in `S1`; `None` when `S1` is empty.
    pub ell: Option<usize>,
    /// Largest degree in `T1`; `None` when `T1` is empty.
    pub ell_prime: Option<usize>,
}

impl ExponentSets {
    /// `S = S1 ∪ S2`, the basis order used for rows of `C`.
    pub fn s(&self) -> Vec<(usize, usize)> {
        self.s1.pairs.iter().chain(&self.s2.pairs).copied().collect()
    }

    /// `T = T1 ∪ S2`, the basis order used for rows of the dual.
    pub fn t(&self) -> Vec<(usize, usize)> {
        self.t1.pairs.iter().chain(&self.s2.pairs).copied().collect()
    }
}

/// The `count` lowest-degree pairs `(i, j)` with `1 <= i <= r - 1`.
pub fn local_monomials(count: usize, r: usize) -> Vec<(usize, usize)> {
    let step = r + 1;
    (1..).filter(|d| d % step != 0 && d % step != r).take(count).map(|d| (d % step, d / step)).collect()
}

/// Largest degree among the `count` lowest-degree `x^i g^j`, `1 <= i <= r-1`,
/// from its closed form.
pub fn largest_degree_closed_form(count: usize, r: usize) -> Option<usize> {
    if count == 0 || r < 2 {
        return None;
    }
    let w = r - 1;
    Some(if count.is_multiple_of(w) { (r + 1) * (count / w) - 2 } else { (r + 1) * (count / w) + count % w })
}

/// Builds `S1`, `S2`, `T1` and the largest degrees `ell`, `ell'`, computing
/// the latter both by closed form and by enumeration.
pub fn build_exponent_sets(n: usize, k: usize, r: usize) -> Result<ExponentSets, ConstructError> {
    if r < 2 {
        return Err(ConstructError::LocalityTooSmall(r));
    }
    if !n.is_multiple_of(r + 1) {
        return Err(ConstructError::BlockSizeMismatch { n, block: r + 1 });
    }
    if 2 * k <= n || k * (r + 1) > n * r {
        return Err(ConstructError::BadDimension { n, k, r });
    }
    exponent_sets_unchecked(n, k, r)
}

/// Like [`build_exponent_sets`] but only requires `n/(r+1) <= k <= n r/(r+1)`.
/// For `k <= n/2` the dual is not contained in the code; this exists for
/// experimentation.
pub fn build_exponent_sets_relaxed(n: usize, k: usize, r: usize) -> Result<ExponentSets, ConstructError> {
    if r < 2 {
        return Err(ConstructError::LocalityTooSmall(r));
    }
    if !n.is_multiple_of(r + 1) {
        return Err(ConstructError::BlockSizeMismatch { n, block: r + 1 });
    }
    let blocks = n / (r + 1);
    if k < blocks || n - k < blocks || k * (r + 1) > n * r {
        return Err(ConstructError::BadDimension { n, k, r });
    }
    exponent_sets_unchecked(n, k, r)
}

fn exponent_sets_unchecked(n: usize, k: usize, r: usize) -> Result<ExponentSets, ConstructError> {
    let blocks = n / (r + 1);
    let s1 = ExponentSet { role: ExponentRole::S1, pairs: local_monomials(k - blocks, r) };
    let s2 = ExponentSet { role: ExponentRole::S2, pairs: (0..blocks).map(|j| (0, j)).collect() };
    let t1 = ExponentSet { role: ExponentRole::T1, pairs: local_monomials(n - k - blocks, r) };
    let ell = s1.max_degree(r);
    let ell_prime = t1.max_degree(r);
    assert_eq!(ell, largest_degree_closed_form(s1.len(), r), "closed form for ell disagrees with enumeration");
    assert_eq!(ell_prime, largest_degree_closed_form(t1.len(), r), "closed form for ell' disagrees with enumeration");
    Ok(ExponentSets { n, k, r, s1, s2, t1, ell, ell_prime })
}

/// The code `C`, its dual `D`, and how they were built.
#[derive(Debug, Clone)]
pub struct CodeInstance {
    eval: EvaluationSet,
    k: usize,
    exponents: ExponentSets,
    gen_c: Matrix,
    gen_d: Matrix,
    subgroup: Option<AglSubgroup>,
}

/// Builds the code without AGL provenance.
pub fn build_code(eval: EvaluationSet, k: usize) -> Result<CodeInstance, ConstructError> {
    CodeInstance::build(eval, k, None)
}

impl CodeInstance {
    /// Builds generator matrices for `C` (rows over `S`) and `D` (rows over
    /// `T`) and verifies rank, `T ⊆ S`, pairwise orthogonality of every
    /// `S`-row with every `T`-row, and `D ⊆ C`.
    pub fn build(eval: EvaluationSet, k: usize, subgroup: Option<AglSubgroup>) -> Result<CodeInstance, ConstructError> {
        let n = eval.n();
        let r = eval.r();
        let exponents = build_exponent_sets(n, k, r)?;
        let max_deg = exponents.ell.unwrap_or(0).max(n - (r + 1));
        assert!(max_deg <= n - 2, "span(S) reaches degree {max_deg} > n - 2");

        let s = exponents.s();
        let t = exponents.t();
        let s_set: HashSet<(usize, usize)> = s.iter().copied().collect();
        assert!(t.iter().all(|p| s_set.contains(p)), "T is not a subset of S");

        let gen_c: Matrix = s.iter().map(|&(i, j)| eval.evaluate_monomial(i, j)).collect();
        let gen_d: Matrix = t.iter().map(|&(i, j)| eval.evaluate_monomial(i, j)).collect();
        let f = eval.field();
        let rank_c = linalg::rank(f, &gen_c);
        if rank_c != k {
            return Err(ConstructError::RankDeficient { which: "C", rank: rank_c, expected: k });
        }
        let rank_d = linalg::rank(f, &gen_d);
        if rank_d != n - k {
            return Err(ConstructError::RankDeficient { which: "D", rank: rank_d, expected: n - k });
        }
        for (si, row_s) in gen_c.iter().enumerate() {
            for (ti, row_t) in gen_d.iter().enumerate() {
                if linalg::dot(f, row_s, row_t) != 0 {
                    return Err(ConstructError::OrthogonalityFailure { s: si, t: ti });
                }
            }
        }
        let stacked: Matrix = gen_c.iter().chain(&gen_d).cloned().collect();
        if linalg::rank(f, &stacked) != k {
            return Err(ConstructError::NotDualContaining);
        }
        if let Some(h) = &subgroup {
            if h.field() != f {
                return Err(FieldError::FieldMismatch.into());
            }
        }
        Ok(CodeInstance { eval, k, exponents, gen_c, gen_d, subgroup })
    }

    pub fn eval_set(&self) -> &EvaluationSet {
        &self.eval
    }

    pub fn field(&self) -> &Field {
        self.eval.field()
    }

    pub fn n(&self) -> usize {
        self.eval.n()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.eval.r()
    }

    pub fn exponents(&self) -> &ExponentSets {
        &self.exponents
    }

    pub fn ell(&self) -> Option<usize> {
        self.exponents.ell
    }

    pub fn ell_prime(&self) -> Option<usize> {
        self.exponents.ell_prime
    }

    /// Rows of `C`, one per monomial of `S`.
    pub fn generator(&self) -> &Matrix {
        &self.gen_c
    }

    /// Rows of `D = C^perp`, one per monomial of `T`.
    pub fn dual_generator(&self) -> &Matrix {
        &self.gen_d
    }

    pub fn subgroup(&self) -> Option<&AglSubgroup> {
        self.subgroup.as_ref()
    }

    pub fn encode(&self, message: &[FieldElement]) -> Result<Vec<FieldElement>, ConstructError> {
        if message.iter().any(|m| m.field() != self.field()) {
            return Err(FieldError::FieldMismatch.into());
        }
        let values: Vec<u32> = message.iter().map(|m| m.value()).collect();
        Ok(self.encode_values(&values)?.into_iter().map(|v| self.field().element(v)).collect())
    }

    /// `message * G_C` on packed values.
    pub fn encode_values(&self, message: &[u32]) -> Result<Vec<u32>, ConstructError> {
        if message.len() != self.k {
            return Err(ConstructError::LengthMismatch { expected: self.k, got: message.len() });
        }
        Ok(linalg::combine(self.field(), message, &self.gen_c))
    }

    /// Membership in `C^perp`: orthogonal to every row of `G_C`.
    pub fn in_dual(&self, word: &[u32]) -> bool {
        self.gen_c.iter().all(|row| linalg::dot(self.field(), row, word) == 0)
    }

    pub fn random_message(&self, rng: &mut Rng) -> Vec<u32> {
        (0..self.k).map(|_| rng.below(self.field().q() as u64) as u32).collect()
    }

    /// Splits a message into `gamma = sum over S1` and `m = sum over S2` as
    /// polynomials, so the codeword is the evaluation of `gamma + m`.
    pub fn message_polynomials(&self, message: &[u32]) -> (Polynomial, Polynomial) {
        let f = self.field();
        let g = self.eval.good_polynomial();
        let s1 = self.exponents.s1.len();
        let mut gamma = Polynomial::zero(f);
        let mut rest = Polynomial::zero(f);
        for (idx, (&(i, j), &c)) in self.exponents.s().iter().zip(message).enumerate() {
            if c == 0 {
                continue;
            }
            let term = (&Polynomial::monomial(f, c, i) * &g.pow(j)).scale(1);
            if idx < s1 {
                gamma = &gamma + &term;
            } else {
                rest = &rest + &term;
            }
        }
        (gamma, rest)
    }

    /// Recovers the erased symbol at `z` from the `r` other symbols of its
    /// block: interpolate `lambda` through `(a_i, c_i / u_i)` and return
    /// `u_z lambda(a_z)`.
    pub fn repair(&self, received: &[Option<FieldElement>], z: usize) -> Result<Repair, ConstructError> {
        if received.iter().flatten().any(|c| c.field() != self.field()) {
            return Err(FieldError::FieldMismatch.into());
        }
        let values: Vec<Option<u32>> = received.iter().map(|c| c.as_ref().map(|e| e.value())).collect();
        let (value, reads) = self.repair_values(&values, z)?;
        Ok(Repair { value: self.field().element(value), reads })
    }

    /// [`CodeInstance::repair`] on packed values; returns the symbol and the
    /// positions read.
    pub fn repair_values(&self, received: &[Option<u32>], z: usize) -> Result<(u32, Vec<usize>), ConstructError> {
        let n = self.n();
        if received.len() != n {
            return Err(ConstructError::LengthMismatch { expected: n, got: received.len() });
        }
        if z >= n {
            return Err(ConstructError::IndexOutOfRange(z));
        }
        if received[z].is_some() {
            return Err(ConstructError::NotErased(z));
        }
        let block = &self.eval.blocks()[self.eval.block_of(z)];
        repair_symbol(self.field(), self.eval.points(), self.eval.u(), block, received, z)
    }
}

/// Repair on raw data: interpolate `lambda` through `(a_i, c_i / u_i)` for
/// the other positions `i` of `block` and return `u_z lambda(a_z)` together
/// with the positions read.
pub fn repair_symbol(
    f: &Field,
    points: &[u32],
    u: &[u32],
    block: &[usize],
    received: &[Option<u32>],
    z: usize,
) -> Result<(u32, Vec<usize>), ConstructError> {
    let reads: Vec<usize> = block.iter().copied().filter(|&i| i != z).collect();
    let mut xs = Vec::with_capacity(reads.len());
    let mut ys = Vec::with_capacity(reads.len());
    for &i in &reads {
        let c = received[i].ok_or(ConstructError::BlockIncomplete { erased: z, missing: i })?;
        xs.push(points[i]);
        ys.push(f.div(c, u[i])?);
    }
    let lambda = interpolate_values(f, &xs, &ys)?;
    let value = f.mul(u[z], lambda.eval_value(points[z]));
    Ok((value, reads))
}

/// Outcome of a single-symbol repair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Repair {
    pub value: FieldElement,
    /// Positions read, always the `r` other members of the erased block.
    pub reads: Vec<usize>,
}
