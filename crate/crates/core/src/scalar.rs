//! Coefficient arithmetic: base fields and finite Novikov sums `Σ aᵢ T^{λᵢ}`.
//!
//! Exponents are exact rationals. The formal variable `T` is the rescaled one
//! for which the disc weights read `T^{⟨u,v⟩-λ}` directly, so specializing to
//! real numbers uses `T = e^{-1}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;

/// Exponent of the formal variable `T`.
pub type Exponent = Ratio<i64>;

/// The ground field a scalar lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BaseField {
    /// Exact rationals.
    Rational,
    /// The prime field with two elements.
    Char2,
    /// Double-precision complex numbers, for evaluation only.
    Complex,
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rational => f.write_str("Q"),
            BaseField::Char2 => f.write_str("F2"),
            BaseField::Complex => f.write_str("C(f64)"),
        }
    }
}

/// An element of one of the supported base fields.
#[derive(Clone, Debug, PartialEq)]
pub enum FieldElement {
    Rational(BigRational),
    Char2(bool),
    Complex(Complex64),
}

impl FieldElement {
    pub fn zero(field: BaseField) -> Self {
        match field {
            BaseField::Rational => FieldElement::Rational(BigRational::zero()),
            BaseField::Char2 => FieldElement::Char2(false),
            BaseField::Complex => FieldElement::Complex(Complex64::new(0.0, 0.0)),
        }
    }

    pub fn one(field: BaseField) -> Self {
        match field {
            BaseField::Rational => FieldElement::Rational(BigRational::one()),
            BaseField::Char2 => FieldElement::Char2(true),
            BaseField::Complex => FieldElement::Complex(Complex64::new(1.0, 0.0)),
        }
    }

    /// Image of an integer in the given field.
    pub fn from_int(field: BaseField, value: i64) -> Self {
        match field {
            BaseField::Rational => FieldElement::Rational(BigRational::from_integer(value.into())),
            BaseField::Char2 => FieldElement::Char2(value.rem_euclid(2) == 1),
            BaseField::Complex => FieldElement::Complex(Complex64::new(value as f64, 0.0)),
        }
    }

    pub fn rational(numer: i64, denom: i64) -> Self {
        FieldElement::Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn field(&self) -> BaseField {
        match self {
            FieldElement::Rational(_) => BaseField::Rational,
            FieldElement::Char2(_) => BaseField::Char2,
            FieldElement::Complex(_) => BaseField::Complex,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(q) => q.is_zero(),
            FieldElement::Char2(b) => !*b,
            FieldElement::Complex(c) => c.re == 0.0 && c.im == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        *self == FieldElement::one(self.field())
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(AlgebraError::FieldMismatch {
                left: self.field(),
                right: other.field(),
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a + b),
            (FieldElement::Char2(a), FieldElement::Char2(b)) => FieldElement::Char2(a ^ b),
            (FieldElement::Complex(a), FieldElement::Complex(b)) => FieldElement::Complex(a + b),
            _ => unreachable!(),
        })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a * b),
            (FieldElement::Char2(a), FieldElement::Char2(b)) => FieldElement::Char2(a & b),
            (FieldElement::Complex(a), FieldElement::Complex(b)) => FieldElement::Complex(a * b),
            _ => unreachable!(),
        })
    }

    pub fn neg(&self) -> Self {
        match self {
            FieldElement::Rational(a) => FieldElement::Rational(-a),
            // -1 = 1 in characteristic two
            FieldElement::Char2(a) => FieldElement::Char2(*a),
            FieldElement::Complex(a) => FieldElement::Complex(-a),
        }
    }

    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(match self {
            FieldElement::Rational(a) => FieldElement::Rational(a.recip()),
            FieldElement::Char2(_) => FieldElement::Char2(true),
            FieldElement::Complex(a) => FieldElement::Complex(a.inv()),
        })
    }

    /// Complex value of the element; `None` over characteristic two.
    pub fn to_complex(&self) -> Option<Complex64> {
        match self {
            FieldElement::Rational(q) => Some(Complex64::new(ratio_to_f64(q), 0.0)),
            FieldElement::Char2(_) => None,
            FieldElement::Complex(c) => Some(*c),
        }
    }

    /// Reduce a rational with odd denominator modulo two.
    pub fn reduce_mod2(&self) -> Option<FieldElement> {
        match self {
            FieldElement::Rational(q) => {
                let two = BigInt::from(2);
                if (q.denom() % &two).is_zero() {
                    None
                } else {
                    Some(FieldElement::Char2(!(q.numer() % &two).is_zero()))
                }
            }
            FieldElement::Char2(b) => Some(FieldElement::Char2(*b)),
            FieldElement::Complex(_) => None,
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(q) => write!(f, "{q}"),
            FieldElement::Char2(b) => write!(f, "{}", u8::from(*b)),
            FieldElement::Complex(c) => write!(f, "({}{:+}i)", c.re, c.im),
        }
    }
}

pub(crate) fn ratio_to_f64(q: &BigRational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => q.to_f64().unwrap_or(f64::NAN),
    }
}

/// Minimal exponent of a Novikov scalar, `+∞` for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(Exponent),
    Infinite,
}

/// A finite sum `Σ aᵢ T^{λᵢ}` with exact rational exponents.
///
/// Canonical form: no zero coefficients, exponents stored in increasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct NovikovScalar {
    field: BaseField,
    terms: BTreeMap<Exponent, FieldElement>,
}

impl NovikovScalar {
    pub fn zero(field: BaseField) -> Self {
        Self {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: BaseField) -> Self {
        Self::constant(FieldElement::one(field))
    }

    pub fn constant(value: FieldElement) -> Self {
        Self::monomial(value, Exponent::zero())
    }

    pub fn from_int(field: BaseField, value: i64) -> Self {
        Self::constant(FieldElement::from_int(field, value))
    }

    /// `T^exponent` over `field`.
    pub fn t_power(field: BaseField, exponent: Exponent) -> Self {
        Self::monomial(FieldElement::one(field), exponent)
    }

    pub fn monomial(coeff: FieldElement, exponent: Exponent) -> Self {
        let field = coeff.field();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exponent, coeff);
        }
        Self { field, terms }
    }

    /// Build from arbitrary `(coefficient, exponent)` pairs, collecting like terms.
    pub fn from_terms(
        field: BaseField,
        pairs: impl IntoIterator<Item = (FieldElement, Exponent)>,
    ) -> Result<Self, AlgebraError> {
        let mut out = Self::zero(field);
        for (c, e) in pairs {
            out.add_term(e, c)?;
        }
        Ok(out)
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(e, c)| e.is_zero() && c.is_one())
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &FieldElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(AlgebraError::FieldMismatch {
                left: self.field,
                right: other.field,
            })
        }
    }

    pub(crate) fn add_term(&mut self, exponent: Exponent, coeff: FieldElement) -> Result<(), AlgebraError> {
        if coeff.field() != self.field {
            return Err(AlgebraError::FieldMismatch {
                left: self.field,
                right: coeff.field(),
            });
        }
        if coeff.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(&exponent) {
            Some(existing) => {
                let sum = existing.try_add(&coeff)?;
                if sum.is_zero() {
                    self.terms.remove(&exponent);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(exponent, coeff);
            }
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone())?;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = Self::zero(self.field);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea + eb, ca.try_mul(cb)?)?;
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        Self {
            field: self.field,
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
        }
    }

    /// Multiply every coefficient by a base-field element.
    pub fn scale(&self, factor: &FieldElement) -> Result<Self, AlgebraError> {
        if factor.field() != self.field {
            return Err(AlgebraError::FieldMismatch {
                left: self.field,
                right: factor.field(),
            });
        }
        let mut out = Self::zero(self.field);
        for (e, c) in &self.terms {
            out.add_term(*e, c.try_mul(factor)?)?;
        }
        Ok(out)
    }

    /// Multiply by `T^shift`.
    pub fn shift(&self, shift: Exponent) -> Self {
        Self {
            field: self.field,
            terms: self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
        }
    }

    /// The minimal exponent, or `Infinite` for zero.
    pub fn valuation(&self) -> Valuation {
        self.terms
            .keys()
            .next()
            .map_or(Valuation::Infinite, |e| Valuation::Finite(*e))
    }

    /// A scalar is a unit in the ring of finite sums iff it is a single term.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        if self.terms.len() != 1 {
            return Err(AlgebraError::NotAUnit(self.to_string()));
        }
        let (e, c) = self.terms.iter().next().expect("one term");
        Ok(Self::monomial(c.inverse()?, -*e))
    }

    /// Integer power of a unit (any power for non-negative exponents).
    pub fn pow(&self, k: i64) -> Result<Self, AlgebraError> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut out = Self::one(self.field);
        for _ in 0..k.unsigned_abs() {
            out = out.try_mul(&base)?;
        }
        Ok(out)
    }

    /// Evaluate `Σ aᵢ t^{λᵢ}` for a positive real `t`.
    pub fn specialize(&self, t_value: f64) -> Result<Complex64, AlgebraError> {
        if self.field == BaseField::Char2 {
            return Err(AlgebraError::NoSpecialization(self.field));
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let weight = t_value.powf(*e.numer() as f64 / *e.denom() as f64);
            acc += c.to_complex().expect("field has a complex embedding") * weight;
        }
        Ok(acc)
    }

    /// Reduce rational coefficients modulo two.
    pub fn reduce_mod2(&self) -> Option<Self> {
        let mut out = Self::zero(BaseField::Char2);
        for (e, c) in &self.terms {
            out.add_term(*e, c.reduce_mod2()?).ok()?;
        }
        Some(out)
    }
}

fn fmt_exponent(e: &Exponent) -> String {
    if e.is_integer() {
        e.numer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

/// `T`, `T^2`, `T^-1/3`; empty string for `T^0`.
pub(crate) fn t_factor(e: &Exponent) -> String {
    if e.is_zero() {
        String::new()
    } else if e.is_one() {
        "T".to_string()
    } else {
        format!("T^{}", fmt_exponent(e))
    }
}

impl fmt::Display for NovikovScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let t = t_factor(e);
            match (c.is_one(), t.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{t}")?,
                (false, true) => write!(f, "{c}")?,
                (false, false) => write!(f, "{c}*{t}")?,
            }
        }
        Ok(())
    }
}

impl Add for &NovikovScalar {
    type Output = NovikovScalar;
    /// Panics on base-field mismatch; use [`NovikovScalar::try_add`] to recover.
    fn add(self, rhs: Self) -> NovikovScalar {
        self.try_add(rhs).expect("Novikov addition")
    }
}

impl Sub for &NovikovScalar {
    type Output = NovikovScalar;
    fn sub(self, rhs: Self) -> NovikovScalar {
        self.try_sub(rhs).expect("Novikov subtraction")
    }
}

impl Mul for &NovikovScalar {
    type Output = NovikovScalar;
    fn mul(self, rhs: Self) -> NovikovScalar {
        self.try_mul(rhs).expect("Novikov multiplication")
    }
}

impl Neg for &NovikovScalar {
    type Output = NovikovScalar;
    fn neg(self) -> NovikovScalar {
        NovikovScalar::neg(self)
    }
}

/// Parse `p/q` or `p` into an exponent.
pub fn parse_exponent(text: &str) -> Option<Exponent> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            (d != 0).then(|| Exponent::new(n, d))
        }
        None => text.parse::<i64>().ok().map(Exponent::from_integer),
    }
}

/// Parse `p/q` or `p` into an exact rational field element.
pub fn parse_big_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => text.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Exponent {
        Exponent::new(n, d)
    }

    #[test]
    fn half_powers_multiply_to_one() {
        let half = NovikovScalar::t_power(BaseField::Rational, q(1, 2));
        assert_eq!(&half * &half, NovikovScalar::t_power(BaseField::Rational, q(1, 1)));
    }

    #[test]
    fn char2_doubling_vanishes() {
        let t = NovikovScalar::t_power(BaseField::Char2, q(3, 1));
        assert!((&t + &t).is_zero());
        assert_eq!(t.neg(), t);
    }

    #[test]
    fn p1_product_at_unit_holonomy() {
        // T^{k/2}·T^{k/2}... with k = 2 the ℙ¹ product at λ = 1 gives 2T^k.
        let k = q(2, 1);
        let a = NovikovScalar::t_power(BaseField::Rational, k / 2);
        let hol = NovikovScalar::from_int(BaseField::Rational, 2); // λ + 1/λ at λ = 1
        let got = &(&a * &a) * &hol;
        assert_eq!(
            got,
            NovikovScalar::monomial(FieldElement::from_int(BaseField::Rational, 2), k)
        );
    }

    #[test]
    fn valuation_examples() {
        let a = NovikovScalar::from_terms(
            BaseField::Rational,
            [
                (FieldElement::from_int(BaseField::Rational, 1), q(2, 1)),
                (FieldElement::from_int(BaseField::Rational, 3), q(5, 1)),
            ],
        )
        .unwrap();
        assert_eq!(a.valuation(), Valuation::Finite(q(2, 1)));
        assert_eq!(NovikovScalar::zero(BaseField::Rational).valuation(), Valuation::Infinite);
        let third = NovikovScalar::t_power(BaseField::Rational, q(1, 3));
        let two_thirds = NovikovScalar::t_power(BaseField::Rational, q(2, 3));
        assert_eq!((&third * &two_thirds).valuation(), Valuation::Finite(q(1, 1)));
    }

    #[test]
    fn specialization_examples() {
        let e = (-1.0f64).exp();
        let t = NovikovScalar::t_power(BaseField::Rational, q(1, 1));
        assert!((t.specialize(e).unwrap().re - e).abs() < 1e-15);
        let two = NovikovScalar::from_int(BaseField::Rational, 2);
        assert_eq!(two.specialize(0.3).unwrap().re, 2.0);
        let t3 = NovikovScalar::t_power(BaseField::Rational, q(3, 1));
        assert!((t3.specialize(e).unwrap().re - 0.049787068367863944).abs() < 1e-15);
        let c2 = NovikovScalar::t_power(BaseField::Char2, q(1, 1));
        assert_eq!(c2.specialize(e), Err(AlgebraError::NoSpecialization(BaseField::Char2)));
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = NovikovScalar::one(BaseField::Rational);
        let b = NovikovScalar::one(BaseField::Char2);
        assert!(matches!(a.try_add(&b), Err(AlgebraError::FieldMismatch { .. })));
        assert!(matches!(a.try_mul(&b), Err(AlgebraError::FieldMismatch { .. })));
    }

    #[test]
    fn canonical_form_has_no_zeros_and_sorted_exponents() {
        let a = NovikovScalar::from_terms(
            BaseField::Rational,
            [
                (FieldElement::from_int(BaseField::Rational, 2), q(3, 1)),
                (FieldElement::from_int(BaseField::Rational, 1), q(-1, 2)),
                (FieldElement::from_int(BaseField::Rational, -2), q(3, 1)),
            ],
        )
        .unwrap();
        assert_eq!(a.num_terms(), 1);
        assert_eq!(a.to_string(), "T^-1/2");
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_exponent("3/6"), Some(q(1, 2)));
        assert_eq!(parse_exponent("-4"), Some(q(-4, 1)));
        assert_eq!(parse_exponent("1/0"), None);
        assert_eq!(parse_big_rational("-2/4").unwrap().to_string(), "-1/2");
    }
}
