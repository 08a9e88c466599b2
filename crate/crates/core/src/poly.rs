//! Dense univariate polynomials over a [`Field`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::field::{Field, FieldElement, FieldError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("interpolation nodes must be distinct")]
    DuplicateNode,
    #[error("interpolation needs at least one point")]
    NoPoints,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Ascending-degree coefficients with no trailing zeros; the zero polynomial
/// has no coefficients and degree `None`.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: Field,
    coeffs: Vec<u32>,
}

impl Polynomial {
    pub fn from_coeffs(field: &Field, mut coeffs: Vec<u32>) -> Polynomial {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Polynomial { field: field.clone(), coeffs }
    }

    pub fn from_elements(field: &Field, coeffs: &[FieldElement]) -> Result<Polynomial, PolyError> {
        if coeffs.iter().any(|c| c.field() != field) {
            return Err(FieldError::FieldMismatch.into());
        }
        Ok(Polynomial::from_coeffs(field, coeffs.iter().map(|c| c.value()).collect()))
    }

    pub fn zero(field: &Field) -> Polynomial {
        Polynomial { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn constant(field: &Field, c: u32) -> Polynomial {
        Polynomial::from_coeffs(field, vec![c])
    }

    /// `c x^degree`
    pub fn monomial(field: &Field, c: u32, degree: usize) -> Polynomial {
        let mut coeffs = vec![0; degree + 1];
        coeffs[degree] = c;
        Polynomial::from_coeffs(field, coeffs)
    }

    /// The identity polynomial `x`.
    pub fn x(field: &Field) -> Polynomial {
        Polynomial::monomial(field, 1, 1)
    }

    /// `a x + b`
    pub fn linear(field: &Field, a: u32, b: u32) -> Polynomial {
        Polynomial::from_coeffs(field, vec![b, a])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Packed coefficients, ascending degree.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.field.element(self.coeffs.get(i).copied().unwrap_or(0))
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, a: &FieldElement) -> Result<FieldElement, PolyError> {
        if a.field() != &self.field {
            return Err(FieldError::FieldMismatch.into());
        }
        Ok(self.field.element(self.eval_value(a.value())))
    }

    /// Horner evaluation at a packed value.
    pub fn eval_value(&self, a: u32) -> u32 {
        let f = &self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, a), c))
    }

    fn assert_same(&self, other: &Polynomial) {
        assert!(self.field == other.field, "polynomials over different fields");
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let f = &self.field;
        Polynomial::from_coeffs(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn divmod(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial), PolyError> {
        self.assert_same(divisor);
        let Some(dd) = divisor.degree() else {
            return Err(PolyError::DivisionByZeroPoly);
        };
        let f = &self.field;
        let lead_inv = f.inv(divisor.leading())?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u32; self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = f.mul(rem[top], lead_inv);
            let shift = top - dd;
            quot[shift] = c;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = f.sub(rem[shift + i], f.mul(c, d));
            }
            while rem.last() == Some(&0) {
                rem.pop();
            }
        }
        Ok((Polynomial::from_coeffs(f, quot), Polynomial::from_coeffs(f, rem)))
    }

    pub fn rem(&self, divisor: &Polynomial) -> Result<Polynomial, PolyError> {
        Ok(self.divmod(divisor)?.1)
    }

    pub fn pow(&self, e: usize) -> Polynomial {
        let mut result = Polynomial::constant(&self.field, 1);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// `self(t(x))` by Horner's rule over polynomials.
    pub fn compose(&self, t: &Polynomial) -> Polynomial {
        self.assert_same(t);
        let mut out = Polynomial::zero(&self.field);
        for &c in self.coeffs.iter().rev() {
            out = &(&out * t) + &Polynomial::constant(&self.field, c);
        }
        out
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

/// Renders e.g. `x^4 + (a^2+a+1)x^2 + (a^2+a)x`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let coeff = self.field.element(c).to_string();
            let power = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            if i == 0 {
                write!(f, "{coeff}")?;
            } else if c == 1 {
                write!(f, "{power}")?;
            } else if coeff.contains('+') {
                write!(f, "({coeff}){power}")?;
            } else {
                write!(f, "{coeff}{power}")?;
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.assert_same(rhs);
        let f = &self.field;
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len)
            .map(|i| f.add(self.coeffs.get(i).copied().unwrap_or(0), rhs.coeffs.get(i).copied().unwrap_or(0)))
            .collect();
        Polynomial::from_coeffs(f, coeffs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let f = &self.field;
        Polynomial::from_coeffs(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.assert_same(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(&self.field);
        }
        let f = &self.field;
        let mut coeffs = vec![0u32; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = f.add(coeffs[i + j], f.mul(a, b));
            }
        }
        Polynomial::from_coeffs(f, coeffs)
    }
}

macro_rules! owned_op {
    ($trait:ident, $method:ident) => {
        impl $trait for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_op!(Add, add);
owned_op!(Sub, sub);
owned_op!(Mul, mul);

/// Lagrange interpolation: the unique polynomial of degree < `points.len()`
/// through all points.
pub fn interpolate(points: &[(FieldElement, FieldElement)]) -> Result<Polynomial, PolyError> {
    let Some((first, _)) = points.first() else {
        return Err(PolyError::NoPoints);
    };
    let field = first.field().clone();
    if points.iter().any(|(x, y)| x.field() != &field || y.field() != &field) {
        return Err(FieldError::FieldMismatch.into());
    }
    let xs: Vec<u32> = points.iter().map(|(x, _)| x.value()).collect();
    let ys: Vec<u32> = points.iter().map(|(_, y)| y.value()).collect();
    interpolate_values(&field, &xs, &ys)
}

/// [`interpolate`] over packed values.
pub fn interpolate_values(field: &Field, xs: &[u32], ys: &[u32]) -> Result<Polynomial, PolyError> {
    if xs.is_empty() {
        return Err(PolyError::NoPoints);
    }
    for (i, a) in xs.iter().enumerate() {
        if xs[..i].contains(a) {
            return Err(PolyError::DuplicateNode);
        }
    }
    let mut result = Polynomial::zero(field);
    for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
        if yi == 0 {
            continue;
        }
        let others: Vec<u32> = xs.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &x)| x).collect();
        let basis = annihilator(field, &others);
        let denom = basis.eval_value(xi);
        let scale = field.div(yi, denom)?;
        result = &result + &basis.scale(scale);
    }
    Ok(result)
}

/// Monic `prod_{a in set} (x - a)`; the empty product is 1.
pub fn annihilator(field: &Field, set: &[u32]) -> Polynomial {
    set.iter().fold(Polynomial::constant(field, 1), |acc, &a| &acc * &Polynomial::linear(field, 1, field.neg(a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u64, m: u32) -> Field {
        Field::new(p, m, None).unwrap()
    }

    /// `x^4 + (a^2+a+1)x^2 + (a^2+a)x` with `a` the primitive element.
    fn example_g(f: &Field) -> Polynomial {
        let a = f.primitive_element().value();
        let a2 = f.mul(a, a);
        let c2 = f.add(f.add(a2, a), 1);
        let c1 = f.add(a2, a);
        Polynomial::from_coeffs(f, vec![0, c1, c2, 0, 1])
    }

    #[test]
    fn eval_basics() {
        let f3 = gf(3, 1);
        let zero = Polynomial::zero(&f3);
        assert_eq!(zero.eval_value(2), 0);
        assert_eq!(zero.degree(), None);
        let p = Polynomial::from_coeffs(&f3, vec![1, 0, 1]);
        assert_eq!(p.eval(&f3.one()).unwrap(), f3.element(2));

        let f32 = gf(2, 5);
        assert_eq!(example_g(&f32).eval_value(0), 0);
    }

    #[test]
    fn eval_rejects_foreign_point() {
        let p = Polynomial::x(&gf(2, 3));
        assert!(matches!(p.eval(&gf(2, 4).one()), Err(PolyError::Field(FieldError::FieldMismatch))));
    }

    #[test]
    fn divmod_cases() {
        let f = gf(2, 5);
        let g = example_g(&f);
        let one = Polynomial::constant(&f, 1);
        let (q, r) = g.divmod(&one).unwrap();
        assert_eq!(q, g);
        assert!(r.is_zero());
        assert_eq!(g.divmod(&Polynomial::zero(&f)).unwrap_err(), PolyError::DivisionByZeroPoly);
        assert!((&g * &Polynomial::zero(&f)).is_zero());
    }

    #[test]
    fn char2_factorization_pattern() {
        // (x^2 + x)(x^2 + x + c) = x^4 + (1 + c)x^2 + c x in characteristic 2
        let f = gf(2, 5);
        for c in 0..32 {
            let lhs = &Polynomial::from_coeffs(&f, vec![0, 1, 1]) * &Polynomial::from_coeffs(&f, vec![c, 1, 1]);
            let rhs = Polynomial::from_coeffs(&f, vec![0, c, f.add(1, c), 0, 1]);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn compose_cases() {
        let f2 = gf(2, 1);
        let x = Polynomial::x(&f2);
        let sq = Polynomial::monomial(&f2, 1, 2);
        assert_eq!(sq.compose(&x), sq);
        let shifted = sq.compose(&Polynomial::linear(&f2, 1, 1));
        assert_eq!(shifted, Polynomial::from_coeffs(&f2, vec![1, 0, 1]));
        let c = Polynomial::constant(&f2, 1);
        assert_eq!(c.compose(&sq), c);
    }

    #[test]
    fn interpolation_cases() {
        let f3 = gf(3, 1);
        let single = interpolate(&[(f3.element(2), f3.element(1))]).unwrap();
        assert_eq!(single, Polynomial::constant(&f3, 1));
        let line = interpolate(&[(f3.zero(), f3.zero()), (f3.one(), f3.one())]).unwrap();
        assert_eq!(line, Polynomial::x(&f3));
        assert_eq!(interpolate(&[(f3.one(), f3.zero()), (f3.one(), f3.one())]).unwrap_err(), PolyError::DuplicateNode);
        assert_eq!(interpolate(&[]).unwrap_err(), PolyError::NoPoints);

        let f32 = gf(2, 5);
        let cubic = Polynomial::from_coeffs(&f32, vec![7, 0, 19, 3]);
        let xs = [1u32, 5, 9, 30];
        let ys: Vec<u32> = xs.iter().map(|&x| cubic.eval_value(x)).collect();
        assert_eq!(interpolate_values(&f32, &xs, &ys).unwrap(), cubic);
    }

    #[test]
    fn annihilator_cases() {
        let f = gf(2, 5);
        assert_eq!(annihilator(&f, &[0]), Polynomial::x(&f));

        // S = F_q gives x^q - x
        for (p, m) in [(2, 5), (3, 2), (5, 1)] {
            let f = gf(p, m);
            let all: Vec<u32> = (0..f.q()).collect();
            let h = annihilator(&f, &all);
            let mut expected = Polynomial::monomial(&f, 1, f.q() as usize);
            expected = &expected - &Polynomial::x(&f);
            assert_eq!(h, expected);
        }

        let a = f.primitive_element().value();
        let b = [0, 1, a, f.add(1, a)];
        assert_eq!(annihilator(&f, &b), example_g(&f));
    }

    #[test]
    fn annihilator_roots_are_exactly_the_set() {
        let f = gf(3, 2);
        let set = [0u32, 2, 5, 7];
        let h = annihilator(&f, &set);
        let roots: Vec<u32> = (0..f.q()).filter(|&x| h.eval_value(x) == 0).collect();
        assert_eq!(roots, set.to_vec());
    }

    #[test]
    fn display_matches_doc_style() {
        let f = gf(2, 5);
        assert_eq!(example_g(&f).to_string(), "x^4 + (a^2+a+1)x^2 + (a^2+a)x");
        assert_eq!(Polynomial::zero(&f).to_string(), "0");
        let f7 = gf(7, 1);
        assert_eq!(Polynomial::from_coeffs(&f7, vec![6, 0, 0, 1]).to_string(), "x^3 + 6");
    }

    fn poly_strategy(q: u32, max_len: usize) -> impl Strategy<Value = Vec<u32>> {
        prop::collection::vec(0..q, 0..max_len)
    }

    proptest! {
        #[test]
        fn divmod_round_trip(a in poly_strategy(9, 12), b in poly_strategy(9, 6)) {
            let f = gf(3, 2);
            let a = Polynomial::from_coeffs(&f, a);
            let b = Polynomial::from_coeffs(&f, b);
            prop_assume!(!b.is_zero());
            let (q, r) = a.divmod(&b).unwrap();
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree() < b.degree());
        }

        #[test]
        fn degree_of_product(a in poly_strategy(32, 8), b in poly_strategy(32, 8)) {
            let f = gf(2, 5);
            let a = Polynomial::from_coeffs(&f, a);
            let b = Polynomial::from_coeffs(&f, b);
            prop_assume!(!a.is_zero() && !b.is_zero());
            prop_assert_eq!((&a * &b).degree(), Some(a.degree().unwrap() + b.degree().unwrap()));
        }

        #[test]
        fn interpolate_recovers_samples(coeffs in poly_strategy(32, 20), start in 0u32..32) {
            let f = gf(2, 5);
            let p = Polynomial::from_coeffs(&f, coeffs);
            let n = p.degree().map_or(1, |d| d + 1);
            let xs: Vec<u32> = (0..n as u32).map(|i| (start + i) % 32).collect();
            let ys: Vec<u32> = xs.iter().map(|&x| p.eval_value(x)).collect();
            prop_assert_eq!(interpolate_values(&f, &xs, &ys).unwrap(), p);
        }

        #[test]
        fn compose_degree_multiplies(a in poly_strategy(7, 6), t in poly_strategy(7, 4)) {
            let f = gf(7, 1);
            let a = Polynomial::from_coeffs(&f, a);
            let t = Polynomial::from_coeffs(&f, t);
            prop_assume!(a.degree().unwrap_or(0) >= 1 && t.degree().unwrap_or(0) >= 1);
            let c = a.compose(&t);
            prop_assert_eq!(c.degree(), Some(a.degree().unwrap() * t.degree().unwrap()));
            for x in 0..7 {
                prop_assert_eq!(c.eval_value(x), a.eval_value(t.eval_value(x)));
            }
        }
    }
}
