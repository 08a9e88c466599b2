//! JSON instance specs, the build pipeline from spec to code, and instance
//! dumps that can be re-verified check by check.
//!
//! Elements are written as ascending-degree coefficient lists, e.g. `[0, 1]`
//! for `a` in GF(p^2). A spec looks like
//!
//! ```json
//! {"field": {"p": 2, "m": 5},
//!  "n": 32, "r": 3, "k": 19,
//!  "subgroup": {"kind": "MB", "K": {"p": 2, "m_sub": 1},
//!               "M_generator": [1], "B_basis": [[1], [0, 1]]},
//!  "alpha": "auto", "evaluation_domain": "full_field"}
//! ```
//!
//! Optional keys: `"multipliers"` (`"auto"`, `"ones"` or a list of
//! elements; default `"auto"`), `"cap"` (brute-force limit) and `"seed"`.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::agl::{
    cyclic_group, good_polynomial, good_polynomial_power, span, subgroup_from_mb, AffineMap, AglError, AglSubgroup,
    GoodPolynomial, Subfield,
};
use crate::construct::{
    build_exponent_sets, multiplier_condition_holds, repair_symbol, ring_check, solve_multipliers, CodeInstance,
    ConstructError, EvaluationSet,
};
use crate::field::{Field, FieldDescriptor, FieldError};
use crate::linalg::{self, Matrix};
use crate::poly::Polynomial;
use crate::rng::Rng;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("invalid instance: {0}")]
    Spec(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Agl(#[from] AglError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

impl InstanceError {
    /// Whether the problem lies in the input rather than in the construction.
    pub fn is_input_error(&self) -> bool {
        match self {
            InstanceError::Construct(e) => matches!(
                e,
                ConstructError::BadDimension { .. }
                    | ConstructError::LocalityTooSmall(_)
                    | ConstructError::BlockSizeMismatch { .. }
                    | ConstructError::TooLong { .. }
                    | ConstructError::DegenerateSet
                    | ConstructError::Field(_)
            ),
            _ => true,
        }
    }
}

/// `{"p": .., "m_sub": ..}`: the subfield GF(p^m_sub).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubfieldSpec {
    pub p: u64,
    pub m_sub: u32,
}

/// `{"a": element, "b": element}` for the map `x -> a x + b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapSpec {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SubgroupSpec {
    /// `{ax + b : a in <M_generator>, b in K-span(B_basis)}`.
    #[serde(rename = "MB")]
    Mb {
        #[serde(rename = "K")]
        subfield: SubfieldSpec,
        #[serde(rename = "M_generator")]
        m_generator: Vec<u32>,
        #[serde(rename = "B_basis")]
        b_basis: Vec<Vec<u32>>,
    },
    #[serde(rename = "explicit")]
    Explicit { maps: Vec<MapSpec> },
}

impl SubgroupSpec {
    pub fn build(&self, field: &Field) -> Result<AglSubgroup, InstanceError> {
        match self {
            SubgroupSpec::Mb { subfield, m_generator, b_basis } => {
                if subfield.p != field.p() as u64 {
                    return Err(InstanceError::Spec(format!(
                        "subfield characteristic {} differs from the field's {}",
                        subfield.p,
                        field.p()
                    )));
                }
                let k = Subfield::new(field, subfield.m_sub)?;
                let gen = field.pack(m_generator)?;
                if gen == 0 {
                    return Err(InstanceError::Spec("M_generator must be nonzero".into()));
                }
                let m = cyclic_group(field, gen);
                let basis: Vec<u32> = b_basis.iter().map(|e| field.pack(e)).collect::<Result<_, _>>()?;
                let b = span(field, &k, &basis);
                Ok(subgroup_from_mb(field, &k, &m, &b)?)
            }
            SubgroupSpec::Explicit { maps } => {
                let maps = maps
                    .iter()
                    .map(|m| Ok(AffineMap { a: field.pack(&m.a)?, b: field.pack(&m.b)? }))
                    .collect::<Result<Vec<_>, FieldError>>()?;
                Ok(AglSubgroup::from_maps(field, maps)?)
            }
        }
    }

    pub fn explicit(h: &AglSubgroup) -> SubgroupSpec {
        let f = h.field();
        SubgroupSpec::Explicit {
            maps: h.maps().iter().map(|m| MapSpec { a: f.coeffs(m.a), b: f.coeffs(m.b) }).collect(),
        }
    }
}

fn keyword(v: &Value) -> Option<&str> {
    v.as_str()
}

fn element_list(v: Value) -> Result<Vec<Vec<u32>>, String> {
    serde_json::from_value(v).map_err(|e| e.to_string())
}

/// `"auto"` or an element.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "Value", into = "Value")]
pub enum AlphaChoice {
    /// Smallest element whose orbit is regular.
    #[default]
    Auto,
    Element(Vec<u32>),
}

impl TryFrom<Value> for AlphaChoice {
    type Error = String;
    fn try_from(v: Value) -> Result<Self, String> {
        match keyword(&v) {
            Some("auto") => Ok(AlphaChoice::Auto),
            Some(other) => Err(format!("unknown alpha keyword {other:?}")),
            None => serde_json::from_value(v).map(AlphaChoice::Element).map_err(|e| e.to_string()),
        }
    }
}

impl From<AlphaChoice> for Value {
    fn from(a: AlphaChoice) -> Value {
        match a {
            AlphaChoice::Auto => Value::from("auto"),
            AlphaChoice::Element(e) => Value::from(e),
        }
    }
}

/// `"full_field"`, `"orbits"` or an explicit list of elements.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "Value", into = "Value")]
pub enum DomainChoice {
    /// Every field element; needs every orbit to be regular.
    #[default]
    FullField,
    /// The first `n / (r + 1)` regular orbits, by smallest member.
    Orbits,
    Explicit(Vec<Vec<u32>>),
}

impl TryFrom<Value> for DomainChoice {
    type Error = String;
    fn try_from(v: Value) -> Result<Self, String> {
        match keyword(&v) {
            Some("full_field") => Ok(DomainChoice::FullField),
            Some("orbits") => Ok(DomainChoice::Orbits),
            Some(other) => Err(format!("unknown evaluation_domain keyword {other:?}")),
            None => element_list(v).map(DomainChoice::Explicit),
        }
    }
}

impl From<DomainChoice> for Value {
    fn from(d: DomainChoice) -> Value {
        match d {
            DomainChoice::FullField => Value::from("full_field"),
            DomainChoice::Orbits => Value::from("orbits"),
            DomainChoice::Explicit(e) => Value::from(e),
        }
    }
}

/// `"auto"`, `"ones"` or an explicit list of elements.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "Value", into = "Value")]
pub enum MultiplierChoice {
    /// Square roots of the Vandermonde null vector, extending the field if needed.
    #[default]
    Auto,
    Ones,
    Explicit(Vec<Vec<u32>>),
}

impl MultiplierChoice {
    fn is_auto(&self) -> bool {
        *self == MultiplierChoice::Auto
    }
}

impl TryFrom<Value> for MultiplierChoice {
    type Error = String;
    fn try_from(v: Value) -> Result<Self, String> {
        match keyword(&v) {
            Some("auto") => Ok(MultiplierChoice::Auto),
            Some("ones") => Ok(MultiplierChoice::Ones),
            Some(other) => Err(format!("unknown multipliers keyword {other:?}")),
            None => element_list(v).map(MultiplierChoice::Explicit),
        }
    }
}

impl From<MultiplierChoice> for Value {
    fn from(m: MultiplierChoice) -> Value {
        match m {
            MultiplierChoice::Auto => Value::from("auto"),
            MultiplierChoice::Ones => Value::from("ones"),
            MultiplierChoice::Explicit(e) => Value::from(e),
        }
    }
}

/// Everything needed to build one code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub field: FieldDescriptor,
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub subgroup: SubgroupSpec,
    #[serde(default)]
    pub alpha: AlphaChoice,
    #[serde(default)]
    pub evaluation_domain: DomainChoice,
    #[serde(default, skip_serializing_if = "MultiplierChoice::is_auto")]
    pub multipliers: MultiplierChoice,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InstanceSpec {
    pub fn from_json(text: &str) -> Result<InstanceSpec, InstanceError> {
        serde_json::from_str(text).map_err(|e| InstanceError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("specs always serialize")
    }

    /// The worked example: GF(32), `H = {x + b : b in span_F2(1, a)}`, all
    /// 32 elements, `k = 19`, all-ones multipliers.
    pub fn worked_example() -> InstanceSpec {
        InstanceSpec {
            field: FieldDescriptor { p: 2, m: 5, modulus: Some(vec![1, 0, 1, 0, 0, 1]) },
            n: 32,
            r: 3,
            k: 19,
            subgroup: SubgroupSpec::Mb {
                subfield: SubfieldSpec { p: 2, m_sub: 1 },
                m_generator: vec![1],
                b_basis: vec![vec![1], vec![0, 1]],
            },
            alpha: AlphaChoice::Element(vec![0]),
            evaluation_domain: DomainChoice::FullField,
            multipliers: MultiplierChoice::Ones,
            cap: None,
            seed: None,
        }
    }

    pub fn build_field(&self) -> Result<Field, InstanceError> {
        Ok(Field::from_descriptor(&self.field)?)
    }

    /// Runs the whole pipeline: field, subgroup, good polynomial, evaluation
    /// set, multipliers (lifting to GF(q^2) if they require it), code.
    pub fn build(&self) -> Result<CodeInstance, InstanceError> {
        let field = self.build_field()?;
        let h = self.subgroup.build(&field)?;
        let s = h.order();
        if self.r + 1 != s {
            return Err(InstanceError::Spec(format!("r + 1 = {} must equal the subgroup order {s}", self.r + 1)));
        }
        let good = self.good_polynomial(&field, &h)?;
        let orbits = self.domain_orbits(&field, &h, &good)?;
        let mut points: Vec<u32> = orbits.iter().flatten().copied().collect();
        points.sort();
        if points.len() != self.n {
            return Err(InstanceError::Spec(format!(
                "evaluation domain has {} points, but n = {}",
                points.len(),
                self.n
            )));
        }
        let blocks: Vec<Vec<usize>> = orbits
            .iter()
            .map(|o| o.iter().map(|x| points.binary_search(x).expect("orbit point in domain")).collect())
            .collect();

        let (code_field, points, g, h, u, base) = match &self.multipliers {
            MultiplierChoice::Auto => {
                let mult = solve_multipliers(&field, &points)?;
                match mult.extension {
                    None => (field, points, good.g, h, mult.u, None),
                    Some(ext) => {
                        let big = ext.big().clone();
                        let pts = points.iter().map(|&a| ext.embed_value(a)).collect();
                        let g = Polynomial::from_coeffs(
                            &big,
                            good.g.coeffs().iter().map(|&c| ext.embed_value(c)).collect(),
                        );
                        let h = h.embed(&ext)?;
                        (big, pts, g, h, mult.u, Some(field))
                    }
                }
            }
            MultiplierChoice::Ones => (field, points, good.g, h, vec![1; self.n], None),
            MultiplierChoice::Explicit(list) => {
                let u = list.iter().map(|e| field.pack(e)).collect::<Result<Vec<_>, _>>()?;
                (field, points, good.g, h, u, None)
            }
        };
        let mut eval = EvaluationSet::new(&code_field, points, blocks, u, g)?;
        if let Some(base) = base {
            eval = eval.with_base_field(base);
        }
        Ok(CodeInstance::build(eval, self.k, Some(h))?)
    }

    fn good_polynomial(&self, field: &Field, h: &AglSubgroup) -> Result<GoodPolynomial, InstanceError> {
        match &self.alpha {
            AlphaChoice::Auto => {
                let alpha = (0..field.q())
                    .find(|&x| h.orbit(x).len() == h.order())
                    .ok_or_else(|| InstanceError::Spec("the subgroup has no regular orbit".into()))?;
                Ok(good_polynomial(h, alpha)?)
            }
            AlphaChoice::Element(e) => {
                let alpha = field.pack(e)?;
                let linear = h.maps().iter().all(|m| m.b == 0);
                if alpha == 0 && linear {
                    let m: Vec<u32> = h.maps().iter().map(|m| m.a).collect();
                    Ok(good_polynomial_power(field, &m)?)
                } else {
                    Ok(good_polynomial(h, alpha)?)
                }
            }
        }
    }

    fn domain_orbits(
        &self,
        field: &Field,
        h: &AglSubgroup,
        good: &GoodPolynomial,
    ) -> Result<Vec<Vec<u32>>, InstanceError> {
        let s = h.order();
        let regular = &good.partition;
        match &self.evaluation_domain {
            DomainChoice::FullField => {
                if regular.len() * s != field.q() as usize {
                    return Err(InstanceError::Spec(
                        "full_field needs every orbit to be regular; use \"orbits\" instead".into(),
                    ));
                }
                Ok(regular.clone())
            }
            DomainChoice::Orbits => {
                let count = self.n / s;
                if !self.n.is_multiple_of(s) || count > regular.len() || count == 0 {
                    return Err(InstanceError::Spec(format!(
                        "n = {} is not a multiple of {s} up to {} regular orbits",
                        self.n,
                        regular.len() * s
                    )));
                }
                Ok(regular[..count].to_vec())
            }
            DomainChoice::Explicit(list) => {
                let pts: BTreeSet<u32> = list.iter().map(|e| field.pack(e)).collect::<Result<_, _>>()?;
                if pts.len() != list.len() {
                    return Err(InstanceError::Spec("evaluation domain repeats an element".into()));
                }
                let mut chosen = Vec::new();
                let mut seen = HashSet::new();
                for &x in &pts {
                    if seen.contains(&x) {
                        continue;
                    }
                    let orbit = h.orbit(x);
                    if orbit.len() != s || orbit.iter().any(|y| !pts.contains(y)) {
                        return Err(InstanceError::Spec(format!(
                            "element {} does not lie in a regular orbit inside the domain",
                            field.element(x)
                        )));
                    }
                    seen.extend(orbit.iter().copied());
                    chosen.push(orbit);
                }
                Ok(chosen)
            }
        }
    }
}

/// A built instance written out in full.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDump {
    /// Field of the code; the quadratic extension when `extended`.
    pub field: FieldDescriptor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_field: Option<FieldDescriptor>,
    pub extended: bool,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub kappa: usize,
    /// The AGL subgroup as explicit maps over the code's field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<SubgroupSpec>,
    #[serde(rename = "A")]
    pub points: Vec<Vec<u32>>,
    /// Blocks as lists of positions into `A`.
    pub partition: Vec<Vec<usize>>,
    pub u: Vec<Vec<u32>>,
    /// Good polynomial, ascending coefficients.
    pub g: Vec<Vec<u32>>,
    #[serde(rename = "S1")]
    pub s1: Vec<(usize, usize)>,
    #[serde(rename = "S2")]
    pub s2: Vec<(usize, usize)>,
    #[serde(rename = "T1")]
    pub t1: Vec<(usize, usize)>,
    pub ell: Option<usize>,
    pub ell_prime: Option<usize>,
    #[serde(rename = "G_C")]
    pub gen_c: Vec<Vec<Vec<u32>>>,
    #[serde(rename = "G_D")]
    pub gen_d: Vec<Vec<Vec<u32>>>,
}

/// Outcome of one named check in [`InstanceDump::verify`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
        Check { name, passed, detail: detail.into() }
    }
}

/// Packed-value view of a dump, after element parsing.
struct RawDump {
    field: Field,
    points: Vec<u32>,
    u: Vec<u32>,
    g: Polynomial,
    gen_c: Matrix,
    gen_d: Matrix,
    subgroup: Option<AglSubgroup>,
}

impl InstanceDump {
    pub fn from_instance(inst: &CodeInstance) -> InstanceDump {
        let f = inst.field();
        let eval = inst.eval_set();
        let elems = |v: &[u32]| -> Vec<Vec<u32>> { v.iter().map(|&x| f.coeffs(x)).collect() };
        let exps = inst.exponents();
        InstanceDump {
            field: f.descriptor(),
            base_field: eval.base_field().map(Field::descriptor),
            extended: eval.is_extended(),
            n: inst.n(),
            k: inst.k(),
            r: inst.r(),
            kappa: 2 * inst.k() - inst.n(),
            subgroup: inst.subgroup().map(SubgroupSpec::explicit),
            points: elems(eval.points()),
            partition: eval.blocks().to_vec(),
            u: elems(eval.u()),
            g: elems(eval.good_polynomial().coeffs()),
            s1: exps.s1.pairs.clone(),
            s2: exps.s2.pairs.clone(),
            t1: exps.t1.pairs.clone(),
            ell: exps.ell,
            ell_prime: exps.ell_prime,
            gen_c: inst.generator().iter().map(|r| elems(r)).collect(),
            gen_d: inst.dual_generator().iter().map(|r| elems(r)).collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<InstanceDump, InstanceError> {
        serde_json::from_str(text).map_err(|e| InstanceError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("dumps always serialize")
    }

    fn raw(&self) -> Result<RawDump, InstanceError> {
        let field = Field::from_descriptor(&self.field)?;
        let pack = |list: &[Vec<u32>]| -> Result<Vec<u32>, InstanceError> {
            Ok(list.iter().map(|e| field.pack(e)).collect::<Result<_, _>>()?)
        };
        let points = pack(&self.points)?;
        let u = pack(&self.u)?;
        let g = Polynomial::from_coeffs(&field, pack(&self.g)?);
        let gen_c = self.gen_c.iter().map(|r| pack(r)).collect::<Result<_, _>>()?;
        let gen_d = self.gen_d.iter().map(|r| pack(r)).collect::<Result<_, _>>()?;
        let subgroup = self.subgroup.as_ref().map(|s| s.build(&field)).transpose()?;
        if points.len() != self.n || u.len() != self.n {
            return Err(InstanceError::Spec(format!("A and u must have n = {} entries", self.n)));
        }
        Ok(RawDump { field, points, u, g, gen_c, gen_d, subgroup })
    }

    /// Rebuilds the code, re-running every check done at construction.
    pub fn to_instance(&self) -> Result<CodeInstance, InstanceError> {
        let raw = self.raw()?;
        let mut eval = EvaluationSet::new(&raw.field, raw.points, self.partition.clone(), raw.u, raw.g)?;
        if let Some(base) = &self.base_field {
            eval = eval.with_base_field(Field::from_descriptor(base)?);
        }
        Ok(CodeInstance::build(eval, self.k, raw.subgroup)?)
    }

    /// Runs each check independently on the stored data, so one failure
    /// does not hide another. Errors are returned only when the dump cannot
    /// be parsed at all.
    pub fn verify(&self, rng: &mut Rng, repair_trials: usize, ring_trials: usize) -> Result<Vec<Check>, InstanceError> {
        let raw = self.raw()?;
        let f = &raw.field;
        let n = self.n;
        let mut checks = Vec::new();

        let tiki = raw.u.iter().all(|&x| x != 0) && multiplier_condition_holds(f, &raw.points, &raw.u);
        checks.push(Check::new(
            "multiplier condition",
            tiki,
            if tiki {
                "sum u_i^2 a_i^j = 0 for j <= n-2, all u_i nonzero"
            } else {
                "sum u_i^2 a_i^j != 0 for some j <= n-2, or some u_i = 0"
            },
        ));

        let partition_ok = partition_is_valid(&self.partition, n);
        let size = self.partition.first().map_or(0, Vec::len);
        let block_points: Vec<Vec<u32>> =
            self.partition.iter().map(|b| b.iter().filter_map(|&i| raw.points.get(i).copied()).collect()).collect();
        let constant =
            partition_ok && raw.g.degree() == Some(size) && GoodPolynomial::check(&raw.g, &block_points).is_ok();
        checks.push(Check::new(
            "good polynomial",
            constant,
            if !partition_ok {
                "partition is not a set of equal blocks covering every position once".to_string()
            } else if constant {
                format!("deg g = {size}, constant on all {} blocks", self.partition.len())
            } else {
                "g is not constant on every block, or deg g differs from the block size".to_string()
            },
        ));

        if let Some(h) = &raw.subgroup {
            let orbits_ok = partition_ok
                && h.order() == size
                && block_points.iter().all(|b| {
                    let mut sorted = b.clone();
                    sorted.sort();
                    h.orbit(b[0]) == sorted
                });
            checks.push(Check::new(
                "subgroup orbits",
                orbits_ok,
                if orbits_ok { "every block is an orbit of H" } else { "some block is not an orbit of H" },
            ));
        }

        let exps = build_exponent_sets(n, self.k, self.r);
        let exps_ok = matches!(&exps, Ok(e) if e.s1.pairs == self.s1 && e.s2.pairs == self.s2
            && e.t1.pairs == self.t1 && e.ell == self.ell && e.ell_prime == self.ell_prime);
        checks.push(Check::new(
            "exponent sets",
            exps_ok,
            match &exps {
                Err(e) => e.to_string(),
                Ok(_) if exps_ok => format!("ell = {:?}, ell' = {:?}", self.ell, self.ell_prime),
                Ok(_) => "stored S1/S2/T1 or ell differ from the recomputed ones".to_string(),
            },
        ));

        let s: Vec<(usize, usize)> = self.s1.iter().chain(&self.s2).copied().collect();
        let t: Vec<(usize, usize)> = self.t1.iter().chain(&self.s2).copied().collect();
        let matrices_ok = partition_ok && {
            let mut block_value = vec![0u32; n];
            for b in &self.partition {
                let v = raw.g.eval_value(raw.points[b[0]]);
                for &i in b {
                    block_value[i] = v;
                }
            }
            let row = |&(i, j): &(usize, usize)| -> Vec<u32> {
                (0..n)
                    .map(|x| f.mul(raw.u[x], f.mul(f.pow(raw.points[x], i as u64), f.pow(block_value[x], j as u64))))
                    .collect()
            };
            s.iter().map(row).collect::<Matrix>() == raw.gen_c && t.iter().map(row).collect::<Matrix>() == raw.gen_d
        };
        checks.push(Check::new(
            "generator matrices",
            matrices_ok,
            if matrices_ok {
                "G_C and G_D match u_t a_t^i g(a_t)^j"
            } else {
                "stored G_C or G_D differ from the evaluations"
            },
        ));

        let rank_c = linalg::rank(f, &raw.gen_c);
        let rank_d = linalg::rank(f, &raw.gen_d);
        let orthogonal = raw.gen_c.iter().all(|a| raw.gen_d.iter().all(|b| linalg::dot(f, a, b) == 0));
        let stacked: Matrix = raw.gen_c.iter().chain(&raw.gen_d).cloned().collect();
        let rank_all = linalg::rank(f, &stacked);
        let dual_ok = rank_c == self.k && rank_d + self.k == n && orthogonal && rank_all == self.k;
        checks.push(Check::new(
            "dual containment",
            dual_ok,
            format!(
                "rank G_C = {rank_c}, rank G_D = {rank_d}, rank [G_C; G_D] = {rank_all}, S x T orthogonal: {orthogonal}"
            ),
        ));

        let ring = if partition_ok {
            ring_check(f, &raw.points, &raw.g, self.partition.len(), rng, ring_trials).map_err(|e| e.to_string())
        } else {
            Err("partition invalid".into())
        };
        checks.push(Check::new(
            "ring property",
            ring.is_ok(),
            match ring {
                Ok(()) => format!("{ring_trials} products re-expressed in the basis 1, g, ..."),
                Err(e) => e,
            },
        ));

        let mut exact = 0;
        if partition_ok && raw.gen_c.len() == self.k && self.k > 0 {
            let mut block_of = vec![0; n];
            for (bi, b) in self.partition.iter().enumerate() {
                for &i in b {
                    block_of[i] = bi;
                }
            }
            for _ in 0..repair_trials {
                let msg: Vec<u32> = (0..self.k).map(|_| rng.below(f.q() as u64) as u32).collect();
                let word = linalg::combine(f, &msg, &raw.gen_c);
                let z = rng.index(n);
                let mut received: Vec<Option<u32>> = word.iter().copied().map(Some).collect();
                received[z] = None;
                let block = &self.partition[block_of[z]];
                if let Ok((v, reads)) = repair_symbol(f, &raw.points, &raw.u, block, &received, z) {
                    if v == word[z] && reads.len() == self.r {
                        exact += 1;
                    }
                }
            }
        }
        checks.push(Check::new(
            "local repair",
            exact == repair_trials,
            format!("{exact}/{repair_trials} repairs exact, {} reads each", self.r),
        ));
        Ok(checks)
    }
}

fn partition_is_valid(partition: &[Vec<usize>], n: usize) -> bool {
    let Some(size) = partition.first().map(Vec::len) else { return false };
    let mut seen = vec![false; n];
    for block in partition {
        if block.len() != size || size == 0 {
            return false;
        }
        for &i in block {
            if i >= n || seen[i] {
                return false;
            }
            seen[i] = true;
        }
    }
    seen.into_iter().all(|x| x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example_builds() {
        let inst = InstanceSpec::worked_example().build().unwrap();
        assert_eq!((inst.n(), inst.k(), inst.r()), (32, 19, 3));
        let f = inst.field();
        let a = f.primitive_element().value();
        let a2 = f.mul(a, a);
        let g = inst.eval_set().good_polynomial();
        assert_eq!(g.coeffs(), &[0, f.add(a2, a), f.add(f.add(a2, a), 1), 0, 1]);
        assert_eq!(inst.ell(), Some(21));
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = InstanceSpec::worked_example();
        let text = spec.to_json();
        let back = InstanceSpec::from_json(&text).unwrap();
        assert_eq!(back, spec);
        assert_eq!(back.to_json(), text);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["subgroup"]["kind"], "MB");
        assert_eq!(v["subgroup"]["K"]["m_sub"], 1);
        assert_eq!(v["evaluation_domain"], "full_field");
        assert_eq!(v["multipliers"], "ones");
    }

    #[test]
    fn spec_defaults_and_keywords() {
        let text = r#"{"field":{"p":3,"m":2},"n":9,"r":2,"k":6,
            "subgroup":{"kind":"explicit","maps":[{"a":[1],"b":[0]},{"a":[1],"b":[1]},{"a":[1],"b":[2]}]}}"#;
        let spec = InstanceSpec::from_json(text).unwrap();
        assert_eq!(spec.alpha, AlphaChoice::Auto);
        assert_eq!(spec.evaluation_domain, DomainChoice::FullField);
        assert_eq!(spec.multipliers, MultiplierChoice::Auto);
        let inst = spec.build().unwrap();
        assert_eq!((inst.n(), inst.k(), inst.r()), (9, 6, 2));
        assert!(InstanceSpec::from_json(r#"{"field":1}"#).is_err());
        let bad = text.replacen("\"n\":9", "\"n\":9,\"alpha\":\"nope\"", 1);
        assert!(matches!(InstanceSpec::from_json(&bad), Err(InstanceError::Json(_))));
    }

    #[test]
    fn multiplicative_subgroup_on_orbits() {
        // GF(16), M of order 5, domain = the three cosets of M in GF(16)*
        let text = r#"{"field":{"p":2,"m":4},"n":15,"r":4,"k":9,
            "subgroup":{"kind":"MB","K":{"p":2,"m_sub":4},"M_generator":[0,0,0,1],"B_basis":[]},
            "alpha":[0],"evaluation_domain":"orbits"}"#;
        let spec = InstanceSpec::from_json(text).unwrap();
        let inst = spec.build().unwrap();
        assert_eq!(inst.eval_set().good_polynomial().degree(), Some(5));
        assert_eq!(inst.n(), 15);
    }

    #[test]
    fn bad_dimension_is_an_input_error() {
        let mut spec = InstanceSpec::worked_example();
        spec.k = 16;
        let err = spec.build().unwrap_err();
        assert!(err.is_input_error());
        assert!(err.to_string().contains("n/2 < k"));
    }

    #[test]
    fn mixed_residues_extend_the_field() {
        // GF(7)*, split by M = {1, 2, 4}: v_i = -a_i^{-1} is a residue exactly
        // when a_i is not, so the multipliers live in GF(49)
        let text = r#"{"field":{"p":7,"m":1},"n":6,"r":2,"k":4,
            "subgroup":{"kind":"MB","K":{"p":7,"m_sub":1},"M_generator":[2],"B_basis":[]},
            "evaluation_domain":"orbits"}"#;
        let spec = InstanceSpec::from_json(text).unwrap();
        let inst = spec.build().unwrap();
        assert!(inst.eval_set().is_extended());
        assert_eq!(inst.field().q(), 49);
        assert_eq!(inst.eval_set().base_field().unwrap().q(), 7);
        let dump = InstanceDump::from_instance(&inst);
        assert!(dump.extended);
        let checks = dump.verify(&mut Rng::new(3), 20, 10).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    }

    #[test]
    fn dump_round_trip_and_verify() {
        let inst = InstanceSpec::worked_example().build().unwrap();
        let dump = InstanceDump::from_instance(&inst);
        let text = dump.to_json();
        let back = InstanceDump::from_json(&text).unwrap();
        assert_eq!(back, dump);
        let rebuilt = back.to_instance().unwrap();
        assert_eq!(rebuilt.generator(), inst.generator());
        let mut rng = Rng::new(1);
        let checks = back.verify(&mut rng, 50, 20).unwrap();
        assert!(checks.iter().all(|c| c.passed), "{checks:?}");
        let v: Value = serde_json::from_str(&text).unwrap();
        for key in ["A", "partition", "u", "g", "S1", "S2", "T1", "G_C", "G_D", "ell", "ell_prime"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["G_C"].as_array().unwrap().len(), 19);
    }

    #[test]
    fn verify_catches_mutations() {
        let inst = InstanceSpec::worked_example().build().unwrap();
        let dump = InstanceDump::from_instance(&inst);
        let mut rng = Rng::new(2);

        let mut bad_u = dump.clone();
        bad_u.u[5] = vec![0, 1];
        let checks = bad_u.verify(&mut rng, 10, 5).unwrap();
        let tiki = checks.iter().find(|c| c.name == "multiplier condition").unwrap();
        assert!(!tiki.passed);
        assert!(bad_u.to_instance().is_err());

        let mut bad_g = dump.clone();
        bad_g.g[1] = vec![1];
        let checks = bad_g.verify(&mut rng, 10, 5).unwrap();
        assert!(!checks.iter().find(|c| c.name == "good polynomial").unwrap().passed);
    }
}
