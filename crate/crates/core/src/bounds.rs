//! CSS parameters, distance lower bounds, the quantum Singleton-like bound,
//! brute-force distance, and Schreier-graph spectra.
//!
//! For a code from an AGL subgroup `H` of order `s = r + 1` and a codeword
//! `f = gamma + m` (`gamma` over `S1`, `m` over `S2`), let `Theta` be the
//! maps of `H` fixing `gamma`. Then
//!
//! ```text
//! wt(f) >= n (1 - θ/(2s) - sqrt(θ²/(4s²) + (1 - θ/s)(ℓ - 1)/n)),   θ = |Theta|
//! ```
//!
//! and since the right side decreases in `θ` and `θ <= s/p` (`p` the smallest
//! prime factor of `s`), substituting `θ = s/p` gives the AGL bound. All
//! ceilings are decided with exact integer arithmetic: with
//! `c = n(2s - θ) - 2 s d`,
//!
//! ```text
//! d >= bound  <=>  c <= 0  or  c² <= n²θ² + 4 s n (s - θ)(ℓ - 1).
//! ```
//!
//! The degree bound is `min(r + 1, n - ℓ)`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::agl::{theta_subgroup, AffineMap, AglError, AglSubgroup};
use crate::construct::{build_exponent_sets, CodeInstance, ConstructError};
use crate::eigen::{symmetric_eigenvalues, EigenError};
use crate::field::Field;
use crate::linalg::{self, Matrix};
use crate::poly::{PolyError, Polynomial};
use crate::rng::Rng;

/// Default limit on the number of codewords brute force may enumerate.
pub const DEFAULT_BRUTE_FORCE_CAP: u64 = 1 << 24;
/// Allowed gap between a computed eigenvalue and its predicted value.
pub const SPECTRAL_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("instance has no AGL subgroup, so the AGL bound does not apply")]
    NotAglProvenance,
    #[error("largest S1 degree must be at least 1 for the AGL bound")]
    EllTooSmall,
    #[error("brute force needs {codewords} codewords, above the cap {cap}; use a smaller q or k")]
    TooLarge { codewords: u128, cap: u64 },
    #[error("subgroup does not act regularly on the vertex set")]
    NotRegular,
    #[error("generating set is not closed under inverses")]
    NotSymmetricGeneratingSet,
    #[error("generating set H minus Theta is empty")]
    EmptyGeneratingSet,
    #[error("Theta is not a subgroup of H")]
    ThetaNotSubgroup,
    #[error("block {0} is not an orbit of the subgroup")]
    OrbitMismatch(usize),
    #[error("no parameters with n/2 < k <= n r/(r+1) for n = {n}, r = {r}, q = {q}")]
    EmptySweep { n: usize, r: usize, q: u64 },
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Agl(#[from] AglError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

/// Parameters `[[n, κ, δ]]_q` of the CSS code with locality `r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QlrcParams {
    pub n: usize,
    pub kappa: usize,
    pub q: u32,
    pub r: usize,
    pub delta_lb_degree: usize,
    /// Present when the instance came from an AGL subgroup.
    pub delta_lb_agl: Option<usize>,
    pub delta_exact: Option<usize>,
}

impl QlrcParams {
    pub fn delta_lower_bound(&self) -> usize {
        self.delta_lb_degree.max(self.delta_lb_agl.unwrap_or(0))
    }
}

/// `κ = 2k - n` together with both lower bounds.
pub fn css_params(inst: &CodeInstance) -> QlrcParams {
    let (n, r) = (inst.n(), inst.r());
    let delta_lb_agl = match (inst.subgroup(), inst.ell()) {
        (Some(_), Some(ell)) if ell >= 1 => agl_bound(n, r, ell).ok().map(|b| b.integer),
        _ => None,
    };
    QlrcParams {
        n,
        kappa: 2 * inst.k() - n,
        q: inst.field().q(),
        r,
        delta_lb_degree: degree_bound(n, r, inst.ell()),
        delta_lb_agl,
        delta_exact: None,
    }
}

/// `min(r + 1, n - ℓ)`; `r + 1` when `S1` is empty.
pub fn degree_bound(n: usize, r: usize, ell: Option<usize>) -> usize {
    match ell {
        Some(ell) => (r + 1).min(n.saturating_sub(ell)),
        None => r + 1,
    }
}

pub fn smallest_prime_factor(m: usize) -> usize {
    assert!(m >= 2, "no prime factor of {m}");
    (2..).take_while(|d| d * d <= m).find(|d| m.is_multiple_of(*d)).unwrap_or(m)
}

/// Whether `d >= n (1 - θ/(2s) - sqrt(θ²/(4s²) + (1 - θ/s)(ℓ-1)/n))`, decided
/// exactly.
pub fn weight_bound_holds(n: usize, s: usize, theta: usize, ell: usize, d: i64) -> bool {
    let (n, s, t, l, d) = (n as i128, s as i128, theta as i128, ell as i128, d as i128);
    let c = n * (2 * s - t) - 2 * s * d;
    c <= 0 || c * c <= n * n * t * t + 4 * s * n * (s - t) * (l - 1)
}

/// Floating-point value of the per-codeword bound.
pub fn weight_bound_value(n: usize, s: usize, theta: usize, ell: usize) -> f64 {
    let (n, s, t, l) = (n as f64, s as f64, theta as f64, ell as f64);
    n * (1.0 - t / (2.0 * s) - (t * t / (4.0 * s * s) + (1.0 - t / s) * (l - 1.0) / n).sqrt())
}

/// Smallest integer `d` satisfying [`weight_bound_holds`]; may be `<= 0`.
pub fn weight_bound_ceiling(n: usize, s: usize, theta: usize, ell: usize) -> i64 {
    let mut d = weight_bound_value(n, s, theta, ell).floor() as i64 - 2;
    while weight_bound_holds(n, s, theta, ell, d) {
        d -= 1;
    }
    while !weight_bound_holds(n, s, theta, ell, d) {
        d += 1;
    }
    d
}

/// The AGL bound: real value, integer bound clamped at 1, and whether the
/// clamp was needed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AglBound {
    pub p: usize,
    pub value: f64,
    /// `max(1, ceil(value))`, with the ceiling decided exactly.
    pub integer: usize,
    /// The raw ceiling was `<= 0`, so the bound says nothing.
    pub vacuous: bool,
}

/// The bound with `θ = (r + 1)/p`, `p` the smallest prime factor of `r + 1`.
pub fn agl_bound(n: usize, r: usize, ell: usize) -> Result<AglBound, BoundsError> {
    if ell < 1 {
        return Err(BoundsError::EllTooSmall);
    }
    let s = r + 1;
    let p = smallest_prime_factor(s);
    let theta = s / p;
    let raw = weight_bound_ceiling(n, s, theta, ell);
    Ok(AglBound { p, value: weight_bound_value(n, s, theta, ell), integer: raw.max(1) as usize, vacuous: raw <= 0 })
}

/// Per-codeword bound values for `θ = 1 ..= s/p` are non-increasing, both
/// as reals and as exact ceilings.
pub fn theta_monotonicity_holds(n: usize, s: usize, ell: usize) -> bool {
    let max_theta = s / smallest_prime_factor(s);
    (1..max_theta).all(|t| {
        weight_bound_value(n, s, t + 1, ell) <= weight_bound_value(n, s, t, ell) + 1e-9
            && weight_bound_ceiling(n, s, t + 1, ell) <= weight_bound_ceiling(n, s, t, ell)
    })
}

/// Right side of the quantum Singleton-like bound
/// `κ <= n - 2(δ-1) - ⌊(n-(δ-1))/(r+1)⌋ - ⌊(n - 2(δ-1) - ⌊(n-(δ-1))/(r+1)⌋)/(r+1)⌋`.
pub fn quantum_singleton_rhs(n: usize, delta: usize, r: usize) -> i64 {
    let (n, d1, b) = (n as i64, delta as i64 - 1, r as i64 + 1);
    let first = (n - d1).div_euclid(b);
    let rest = n - 2 * d1 - first;
    rest - rest.div_euclid(b)
}

/// `2 <= δ <= r + 2 + (n+κ)/2 - ⌈(n+κ)/(2r)⌉(r+1)`: the code meets the
/// quantum Singleton-like bound with equality.
pub fn singleton_optimal(n: usize, kappa: usize, r: usize, delta: usize) -> bool {
    let half = (n + kappa) / 2;
    let blocks = (n + kappa).div_ceil(2 * r);
    delta >= 2 && (delta + blocks * (r + 1)) as i64 <= (r + 2 + half) as i64
}

/// Minimum weight over `C \ C^perp` by enumerating every message.
///
/// Messages are visited in odometer order; each step changes one digit, so
/// the codeword and its inner products with the rows of `G_C` update in
/// `O(n + k)`. The top digit splits the work across threads.
pub fn distance_bruteforce(inst: &CodeInstance, cap: u64) -> Result<usize, BoundsError> {
    let f = inst.field();
    let q = f.q();
    let k = inst.k();
    let codewords = (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if codewords > cap as u128 {
        return Err(BoundsError::TooLarge { codewords, cap });
    }
    let g = inst.generator();
    let gram: Matrix = g.iter().map(|a| g.iter().map(|b| linalg::dot(f, a, b)).collect()).collect();
    let best = (0..q)
        .into_par_iter()
        .filter_map(|top| chunk_min_weight(f, g, &gram, top))
        .min()
        .expect("C \\ C^perp is nonempty when k > n/2");
    Ok(best)
}

fn add_scaled(f: &Field, acc: &mut [u32], c: u32, row: &[u32]) {
    for (a, &v) in acc.iter_mut().zip(row) {
        *a = f.add(*a, f.mul(c, v));
    }
}

fn chunk_min_weight(f: &Field, g: &Matrix, gram: &Matrix, top: u32) -> Option<usize> {
    let k = g.len();
    let q = f.q();
    let mut word = vec![0u32; g[0].len()];
    let mut syndrome = vec![0u32; k];
    add_scaled(f, &mut word, top, &g[k - 1]);
    add_scaled(f, &mut syndrome, top, &gram[k - 1]);
    let mut digits = vec![0u32; k - 1];
    let mut best: Option<usize> = None;
    loop {
        if syndrome.iter().any(|&x| x != 0) {
            let w = word.iter().filter(|&&x| x != 0).count();
            best = Some(best.map_or(w, |b| b.min(w)));
        }
        let mut pos = 0;
        loop {
            if pos == k - 1 {
                return best;
            }
            let old = digits[pos];
            let new = if old + 1 == q { 0 } else { old + 1 };
            let delta = f.sub(new, old);
            add_scaled(f, &mut word, delta, &g[pos]);
            add_scaled(f, &mut syndrome, delta, &gram[pos]);
            digits[pos] = new;
            if new != 0 {
                break;
            }
            pos += 1;
        }
    }
}

/// The Schreier graph of `H \ Theta` on one regular orbit of `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchreierGraph {
    /// The orbit, sorted.
    pub vertices: Vec<u32>,
    /// `H \ Theta`.
    pub generators: Vec<AffineMap>,
    /// 0/1 adjacency; `adjacency[i][j] = 1` iff some generator maps vertex `i` to `j`.
    pub adjacency: Vec<Vec<u8>>,
    pub theta_order: usize,
}

impl SchreierGraph {
    /// Degree `μ = |H| - |Theta|`.
    pub fn degree(&self) -> usize {
        self.generators.len()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn self_loops(&self) -> usize {
        (0..self.len()).filter(|&i| self.adjacency[i][i] == 1).count()
    }

    /// Eigenvalues of the adjacency matrix, decreasing.
    pub fn spectrum(&self) -> Result<Vec<f64>, BoundsError> {
        let m: Vec<Vec<f64>> = self.adjacency.iter().map(|row| row.iter().map(|&v| v as f64).collect()).collect();
        Ok(symmetric_eigenvalues(&m)?)
    }

    /// Second largest absolute eigenvalue.
    pub fn second_eigenvalue(&self) -> Result<f64, BoundsError> {
        let mut abs: Vec<f64> = self.spectrum()?.into_iter().map(f64::abs).collect();
        abs.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
        Ok(abs.get(1).copied().unwrap_or(0.0))
    }

    /// Ordered count of pairs `(x, y)` in `S x T` joined by an edge.
    pub fn edges_between(&self, s: &[usize], t: &[usize]) -> usize {
        s.iter().map(|&i| t.iter().filter(|&&j| self.adjacency[i][j] == 1).count()).sum()
    }
}

/// Builds `Sch(orbit, H \ Theta)` and checks that the action is regular, the
/// generators are symmetric, no edge is produced twice, and the adjacency
/// equals `J - B'` with `B'` the adjacency of `Sch(orbit, Theta)`.
pub fn schreier_graph(orbit: &[u32], h: &AglSubgroup, theta: &AglSubgroup) -> Result<SchreierGraph, BoundsError> {
    let f = h.field();
    let mut vertices = orbit.to_vec();
    vertices.sort();
    vertices.dedup();
    if vertices.len() != h.order() || vertices.len() != orbit.len() {
        return Err(BoundsError::NotRegular);
    }
    if theta.maps().iter().any(|t| !h.contains(t)) {
        return Err(BoundsError::ThetaNotSubgroup);
    }
    let generators: Vec<AffineMap> = h.maps().iter().copied().filter(|t| !theta.contains(t)).collect();
    if generators.is_empty() {
        return Err(BoundsError::EmptyGeneratingSet);
    }
    let gen_set: HashSet<AffineMap> = generators.iter().copied().collect();
    if generators.iter().any(|t| !gen_set.contains(&t.inverse(f))) {
        return Err(BoundsError::NotSymmetricGeneratingSet);
    }
    let index: HashMap<u32, usize> = vertices.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let size = vertices.len();
    let adjacency_of = |maps: &[AffineMap]| -> Result<Vec<Vec<u8>>, BoundsError> {
        let mut adj = vec![vec![0u8; size]; size];
        for (i, &x) in vertices.iter().enumerate() {
            for t in maps {
                let j = *index.get(&t.apply(f, x)).ok_or(BoundsError::NotRegular)?;
                if adj[i][j] == 1 {
                    return Err(BoundsError::NotRegular);
                }
                adj[i][j] = 1;
            }
        }
        Ok(adj)
    };
    let adjacency = adjacency_of(&generators)?;
    let b_prime = adjacency_of(theta.maps())?;
    for i in 0..size {
        for j in 0..size {
            assert_eq!(adjacency[i][j], adjacency[j][i], "symmetric generators give an undirected graph");
            assert_eq!(adjacency[i][j], 1 - b_prime[i][j], "adjacency differs from J - B'");
        }
    }
    Ok(SchreierGraph { vertices, generators, adjacency, theta_order: theta.order() })
}

/// `|e(S,T) - d|S||T|/n| <= λ sqrt(|S||T|(1 - |S|/n)(1 - |T|/n))`, up to
/// [`SPECTRAL_TOLERANCE`].
pub fn expander_mixing_check(gr: &SchreierGraph, s: &[usize], t: &[usize]) -> Result<bool, BoundsError> {
    let n = gr.len() as f64;
    let (a, b) = (s.len() as f64, t.len() as f64);
    let lambda = gr.second_eigenvalue()?;
    let lhs = (gr.edges_between(s, t) as f64 - gr.degree() as f64 * a * b / n).abs();
    let rhs = lambda * (a * b * (1.0 - a / n) * (1.0 - b / n)).max(0.0).sqrt();
    Ok(lhs <= rhs + SPECTRAL_TOLERANCE)
}

/// Spectral facts about one Schreier graph: largest eigenvalue `μ` and
/// second largest absolute value `|Theta|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralCheck {
    pub theta_order: usize,
    pub degree: usize,
    pub largest: f64,
    pub second: f64,
}

impl SpectralCheck {
    pub fn holds(&self) -> bool {
        (self.second - self.theta_order as f64).abs() <= SPECTRAL_TOLERANCE
            && self.largest.round() as i64 == self.degree as i64
            && (self.largest - self.degree as f64).abs() <= SPECTRAL_TOLERANCE
    }
}

pub fn spectral_check(gr: &SchreierGraph) -> Result<SpectralCheck, BoundsError> {
    let spectrum = gr.spectrum()?;
    Ok(SpectralCheck {
        theta_order: gr.theta_order,
        degree: gr.degree(),
        largest: spectrum[0],
        second: gr.second_eigenvalue()?,
    })
}

/// `G(x) = prod_{t in H \ Theta} (gamma(t(x)) - gamma(x)) / (t(x) - x)`.
/// Each quotient is exact: `t(x) - x` is a nonzero constant for a
/// translation and otherwise vanishes only at the fixed point of `t`, where
/// the numerator vanishes too.
pub fn root_polynomial(h: &AglSubgroup, theta: &AglSubgroup, gamma: &Polynomial) -> Result<Polynomial, BoundsError> {
    let f = h.field();
    let x = Polynomial::x(f);
    let mut g = Polynomial::constant(f, 1);
    for t in h.maps().iter().filter(|t| !theta.contains(t)) {
        let tp = t.as_polynomial(f);
        let num = &gamma.compose(&tp) - gamma;
        let den = &tp - &x;
        let (quot, rem) = num.divmod(&den)?;
        assert!(rem.is_zero(), "t(x) - x does not divide gamma(t(x)) - gamma(x)");
        g = &g * &quot;
    }
    Ok(g)
}

/// Number of roots of `p` in `points`, counted with multiplicity.
pub fn roots_with_multiplicity(p: &Polynomial, points: &[u32]) -> usize {
    let f = p.field();
    if p.is_zero() {
        return usize::MAX;
    }
    points
        .iter()
        .map(|&a| {
            let lin = Polynomial::linear(f, 1, f.neg(a));
            let mut cur = p.clone();
            let mut mult = 0;
            while cur.degree().unwrap_or(0) > 0 && cur.eval_value(a) == 0 {
                cur = cur.divmod(&lin).expect("monic divisor").0;
                mult += 1;
            }
            mult
        })
        .sum()
}

/// Results of [`weight_bound_audit`]. `failures` is empty when every
/// sampled codeword satisfied every check.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub trials: usize,
    pub min_weight: usize,
    /// Smallest per-codeword bound encountered (with actual `|Theta|`).
    pub min_bound: i64,
    /// Count of sampled codewords per `|Theta|`.
    pub theta_orders: BTreeMap<usize, usize>,
    /// Largest `deg G` seen, and the ceiling `μ(ℓ - 1)` for the worst `μ`.
    pub max_root_poly_degree: usize,
    /// Trials with `deg G = μ(deg γ - 1)` exactly. This is only an upper
    /// bound in general: the leading terms cancel when, e.g., the
    /// characteristic divides `deg γ` and `t` is a translation.
    pub root_poly_degree_exact: usize,
    pub spectral_checks: usize,
    pub theta_monotone: bool,
    pub failures: Vec<String>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For `trials` random codewords outside `C^perp`: split `f = gamma + m`,
/// compute `Theta`, check `wt >= bound(|Theta|)` exactly, build `G(x)` and
/// check
///
/// ```text
/// #{(a, t): a in A, t in H \ Theta, f(a) = f(t(a)) = 0}
///     <= roots of G in A (with multiplicity) <= deg G <= μ(ℓ - 1),
/// ```
///
/// and verify the Schreier spectrum of `H \ Theta` on the first block.
pub fn weight_bound_audit(inst: &CodeInstance, trials: usize, rng: &mut Rng) -> Result<AuditReport, BoundsError> {
    let mut messages = Vec::with_capacity(trials);
    while messages.len() < trials {
        let msg = inst.random_message(rng);
        if !inst.in_dual(&inst.encode_values(&msg)?) {
            messages.push(msg);
        }
    }
    weight_bound_audit_messages(inst, &messages)
}

/// [`weight_bound_audit`] on chosen messages, each of which must encode to a
/// codeword outside `C^perp`.
pub fn weight_bound_audit_messages(inst: &CodeInstance, messages: &[Vec<u32>]) -> Result<AuditReport, BoundsError> {
    let trials = messages.len();
    let h = inst.subgroup().ok_or(BoundsError::NotAglProvenance)?;
    let ell = inst.ell().ok_or(BoundsError::EllTooSmall)?;
    let eval = inst.eval_set();
    let f = inst.field();
    let (n, s) = (inst.n(), h.order());
    for (bi, block) in eval.blocks().iter().enumerate() {
        let mut pts: Vec<u32> = block.iter().map(|&i| eval.points()[i]).collect();
        pts.sort();
        if s != inst.r() + 1 || h.orbit(pts[0]) != pts {
            return Err(BoundsError::OrbitMismatch(bi));
        }
    }
    let first_orbit: Vec<u32> = eval.blocks()[0].iter().map(|&i| eval.points()[i]).collect();
    let position: HashMap<u32, usize> = eval.points().iter().enumerate().map(|(i, &a)| (a, i)).collect();

    let mut report = AuditReport {
        trials,
        min_weight: usize::MAX,
        min_bound: i64::MAX,
        theta_orders: BTreeMap::new(),
        max_root_poly_degree: 0,
        root_poly_degree_exact: 0,
        spectral_checks: 0,
        theta_monotone: theta_monotonicity_holds(n, s, ell),
        failures: Vec::new(),
    };
    if !report.theta_monotone {
        report.failures.push("per-codeword bound is not non-increasing in |Theta|".into());
    }
    for (trial, msg) in messages.iter().enumerate() {
        let word = inst.encode_values(msg)?;
        if inst.in_dual(&word) {
            report.failures.push(format!("trial {trial}: message encodes into C^perp"));
            continue;
        }
        let (gamma, _) = inst.message_polynomials(msg);
        if gamma.is_zero() {
            report.failures.push(format!("trial {trial}: codeword outside the dual has gamma = 0"));
            continue;
        }
        let theta = theta_subgroup(h, &gamma)?;
        let t = theta.order();
        *report.theta_orders.entry(t).or_default() += 1;
        let weight = word.iter().filter(|&&x| x != 0).count();
        report.min_weight = report.min_weight.min(weight);
        let bound = weight_bound_ceiling(n, s, t, ell);
        report.min_bound = report.min_bound.min(bound);
        if !weight_bound_holds(n, s, t, ell, weight as i64) {
            report.failures.push(format!("trial {trial}: weight {weight} below bound {bound} with |Theta| = {t}"));
        }
        if t == s {
            report.failures.push(format!("trial {trial}: Theta = H although gamma is not a polynomial in g"));
            continue;
        }

        let mu = s - t;
        let g_poly = root_polynomial(h, &theta, &gamma)?;
        let deg = g_poly.degree().expect("product of nonzero factors");
        report.max_root_poly_degree = report.max_root_poly_degree.max(deg);
        let gamma_deg = gamma.degree().expect("gamma is nonzero");
        if deg == mu * (gamma_deg - 1) {
            report.root_poly_degree_exact += 1;
        }
        let zeros: HashSet<u32> = eval.points().iter().zip(&word).filter(|&(_, &c)| c == 0).map(|(&a, _)| a).collect();
        let pairs: usize = zeros
            .iter()
            .map(|&a| {
                h.maps()
                    .iter()
                    .filter(|m| !theta.contains(m))
                    .filter(|m| {
                        let b = m.apply(f, a);
                        position.contains_key(&b) && zeros.contains(&b)
                    })
                    .count()
            })
            .sum();
        let roots = roots_with_multiplicity(&g_poly, eval.points());
        if !(pairs <= roots && roots <= deg && deg <= mu * (ell - 1)) {
            report.failures.push(format!(
                "trial {trial}: orbit pairs {pairs}, roots in A {roots}, deg G {deg}, mu(l-1) {}",
                mu * (ell - 1)
            ));
        }

        let graph = schreier_graph(&first_orbit, h, &theta)?;
        let check = spectral_check(&graph)?;
        report.spectral_checks += 1;
        if !check.holds() {
            report.failures.push(format!("trial {trial}: spectrum {check:?} off prediction"));
        }
    }
    Ok(report)
}

/// One parameter set's bounds, in the JSON shape used by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub kappa: usize,
    pub q: u64,
    pub r: usize,
    pub ell: Option<usize>,
    pub p: usize,
    pub degree_bound: usize,
    pub agl_bound_real: f64,
    pub agl_bound_int: usize,
    pub singleton_rhs_at_agl_bound: i64,
    /// Singleton-like optimality predicate at the best known distance:
    /// `delta_exact` when present, otherwise the larger lower bound.
    pub optimal: bool,
    pub delta_exact: Option<usize>,
    #[serde(skip)]
    pub agl_bound_vacuous: bool,
}

/// Bounds for `[n, k]_q` with locality `r` from parameters alone.
pub fn bound_report_from_params(
    n: usize,
    k: usize,
    r: usize,
    q: u64,
    delta_exact: Option<usize>,
) -> Result<BoundReport, BoundsError> {
    let exps = build_exponent_sets(n, k, r)?;
    let ell = exps.ell.ok_or(BoundsError::EllTooSmall)?;
    let agl = agl_bound(n, r, ell)?;
    let degree = degree_bound(n, r, exps.ell);
    let kappa = 2 * k - n;
    let best = delta_exact.unwrap_or(degree.max(agl.integer));
    Ok(BoundReport {
        n,
        kappa,
        q,
        r,
        ell: exps.ell,
        p: agl.p,
        degree_bound: degree,
        agl_bound_real: agl.value,
        agl_bound_int: agl.integer,
        singleton_rhs_at_agl_bound: quantum_singleton_rhs(n, agl.integer, r),
        optimal: singleton_optimal(n, kappa, r, best),
        delta_exact,
        agl_bound_vacuous: agl.vacuous,
    })
}

/// Bounds for a built instance; needs AGL provenance.
pub fn bound_report(inst: &CodeInstance, delta_exact: Option<usize>) -> Result<BoundReport, BoundsError> {
    if inst.subgroup().is_none() {
        return Err(BoundsError::NotAglProvenance);
    }
    bound_report_from_params(inst.n(), inst.k(), inst.r(), inst.field().q() as u64, delta_exact)
}

/// One row of the κ sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub kappa: usize,
    pub k: usize,
    pub degree_bound: usize,
    pub agl_bound: usize,
    pub agl_bound_real: f64,
}

/// Both bounds for every `n/2 < k <= n r/(r+1)`, by increasing `κ`.
pub fn sweep_kappa(n: usize, r: usize, q: u64) -> Result<Vec<SweepRow>, BoundsError> {
    let rows: Vec<SweepRow> = if n as u64 > q || r < 2 || !n.is_multiple_of(r + 1) {
        Vec::new()
    } else {
        (n / 2 + 1..=n * r / (r + 1))
            .map(|k| {
                let rep = bound_report_from_params(n, k, r, q, None)?;
                Ok(SweepRow {
                    kappa: rep.kappa,
                    k,
                    degree_bound: rep.degree_bound,
                    agl_bound: rep.agl_bound_int,
                    agl_bound_real: rep.agl_bound_real,
                })
            })
            .collect::<Result<_, BoundsError>>()?
    };
    if rows.is_empty() {
        return Err(BoundsError::EmptySweep { n, r, q });
    }
    Ok(rows)
}

/// CSV with header `kappa,degree_bound,agl_bound[,gg_bound]`. The optional
/// column is copied from user data keyed by `κ`; rows without a value are
/// left blank.
pub fn sweep_csv(rows: &[SweepRow], gg: Option<&BTreeMap<usize, String>>) -> String {
    let mut out = String::from("kappa,degree_bound,agl_bound");
    if gg.is_some() {
        out.push_str(",gg_bound");
    }
    out.push('\n');
    for row in rows {
        write!(out, "{},{},{}", row.kappa, row.degree_bound, row.agl_bound).expect("write to String");
        if let Some(gg) = gg {
            write!(out, ",{}", gg.get(&row.kappa).map(String::as_str).unwrap_or("")).expect("write to String");
        }
        out.push('\n');
    }
    out
}
