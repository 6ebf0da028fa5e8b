//! Sparse Laurent polynomials in the mirror variables `z₁..zₙ` and the fixed
//! holonomy variables `z̲₁..z̲ₙ`, with Novikov coefficients.
//!
//! The canonical text form writes `z̲ᵢ` as `ui`, e.g. `-T^1/2*z1^-1*u2 + 3*z2`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;
use smallvec::SmallVec;

use crate::error::AlgebraError;
use crate::scalar::{parse_big_rational, parse_exponent, t_factor, BaseField, Exponent, FieldElement, NovikovScalar};

/// Number of variable pairs and the coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RingContext {
    pub n: usize,
    pub field: BaseField,
}

impl RingContext {
    pub fn new(n: usize, field: BaseField) -> Self {
        Self { n, field }
    }

    pub fn rational(n: usize) -> Self {
        Self::new(n, BaseField::Rational)
    }

    pub fn with_field(self, field: BaseField) -> Self {
        Self { field, ..self }
    }
}

/// Exponents of `z` followed by exponents of `z̲`; ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(SmallVec<[i32; 12]>);

impl ExponentVector {
    pub fn zero(n: usize) -> Self {
        Self(SmallVec::from_elem(0, 2 * n))
    }

    pub fn new(z: &[i32], zbar: &[i32]) -> Self {
        let mut v = SmallVec::with_capacity(z.len() + zbar.len());
        v.extend_from_slice(z);
        v.extend_from_slice(zbar);
        Self(v)
    }

    pub fn n(&self) -> usize {
        self.0.len() / 2
    }

    pub fn z_part(&self) -> &[i32] {
        &self.0[..self.n()]
    }

    pub fn zbar_part(&self) -> &[i32] {
        &self.0[self.n()..]
    }

    /// Exponent of variable `slot`, where `0..n` are `z` and `n..2n` are `z̲`.
    pub fn get(&self, slot: usize) -> i32 {
        self.0[slot]
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn neg(&self) -> Self {
        Self(self.0.iter().map(|a| -a).collect())
    }

    fn scaled(&self, k: i32) -> Self {
        Self(self.0.iter().map(|a| a * k).collect())
    }
}

/// A sparse Laurent polynomial with canonical (sorted, zero-free) term storage.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly {
    ctx: RingContext,
    terms: BTreeMap<ExponentVector, NovikovScalar>,
}

impl LaurentPoly {
    pub fn zero(ctx: RingContext) -> Self {
        Self {
            ctx,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ctx: RingContext) -> Self {
        Self::constant(ctx, NovikovScalar::one(ctx.field))
    }

    pub fn from_int(ctx: RingContext, value: i64) -> Self {
        Self::constant(ctx, NovikovScalar::from_int(ctx.field, value))
    }

    pub fn constant(ctx: RingContext, coeff: NovikovScalar) -> Self {
        let mut p = Self::zero(ctx);
        p.insert_term(ExponentVector::zero(ctx.n), coeff)
            .expect("constant in its own field");
        p
    }

    /// `coeff · z^v · z̲^vbar`.
    pub fn monomial(ctx: RingContext, coeff: NovikovScalar, v: &[i32], vbar: &[i32]) -> Result<Self, AlgebraError> {
        for len in [v.len(), vbar.len()] {
            if len != ctx.n {
                return Err(AlgebraError::LengthMismatch {
                    expected: ctx.n,
                    got: len,
                });
            }
        }
        let mut p = Self::zero(ctx);
        p.insert_term(ExponentVector::new(v, vbar), coeff)?;
        Ok(p)
    }

    /// `T^e` as a constant polynomial.
    pub fn t_power(ctx: RingContext, e: Exponent) -> Self {
        Self::constant(ctx, NovikovScalar::t_power(ctx.field, e))
    }

    /// The variable `zᵢ` (0-based), raised to `power`.
    pub fn z(ctx: RingContext, i: usize, power: i32) -> Self {
        let mut e = ExponentVector::zero(ctx.n);
        e.0[i] = power;
        let mut p = Self::zero(ctx);
        p.insert_term(e, NovikovScalar::one(ctx.field)).expect("same field");
        p
    }

    /// The variable `z̲ᵢ` (0-based), raised to `power`.
    pub fn zbar(ctx: RingContext, i: usize, power: i32) -> Self {
        let mut e = ExponentVector::zero(ctx.n);
        e.0[ctx.n + i] = power;
        let mut p = Self::zero(ctx);
        p.insert_term(e, NovikovScalar::one(ctx.field)).expect("same field");
        p
    }

    /// `zᵢ - z̲ᵢ`.
    pub fn difference(ctx: RingContext, i: usize) -> Self {
        &Self::z(ctx, i, 1) - &Self::zbar(ctx, i, 1)
    }

    pub fn ctx(&self) -> RingContext {
        self.ctx
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

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &NovikovScalar)> {
        self.terms.iter()
    }

    /// Coefficient of a given exponent vector (zero if absent).
    pub fn coefficient(&self, e: &ExponentVector) -> NovikovScalar {
        self.terms
            .get(e)
            .cloned()
            .unwrap_or_else(|| NovikovScalar::zero(self.ctx.field))
    }

    fn insert_term(&mut self, e: ExponentVector, coeff: NovikovScalar) -> Result<(), AlgebraError> {
        if coeff.field() != self.ctx.field {
            return Err(AlgebraError::FieldMismatch {
                left: self.ctx.field,
                right: coeff.field(),
            });
        }
        if coeff.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let sum = existing.try_add(&coeff)?;
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(e, coeff);
            }
        }
        Ok(())
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(AlgebraError::ContextMismatch(format!("{:?} vs {:?}", self.ctx, other.ctx)))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut out = Self::zero(self.ctx);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.insert_term(ea.add(eb), ca.try_mul(cb)?)?;
            }
        }
        Ok(out)
    }

    /// In-place `self += a * b`.
    pub fn add_product(&mut self, a: &Self, b: &Self) -> Result<(), AlgebraError> {
        self.check(a)?;
        self.check(b)?;
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                self.insert_term(ea.add(eb), ca.try_mul(cb)?)?;
            }
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        Self {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, factor: &NovikovScalar) -> Result<Self, AlgebraError> {
        let mut out = Self::zero(self.ctx);
        for (e, c) in &self.terms {
            out.insert_term(e.clone(), c.try_mul(factor)?)?;
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.ctx);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// A unit of the Laurent ring over a field: a single term with a single `T`-power.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().next().is_some_and(NovikovScalar::is_unit)
    }

    pub fn inverse_unit(&self) -> Result<Self, AlgebraError> {
        if !self.is_unit() {
            return Err(AlgebraError::NotAUnit(self.to_string()));
        }
        let (e, c) = self.terms.iter().next().expect("one term");
        let mut out = Self::zero(self.ctx);
        out.insert_term(e.neg(), c.inverse()?)?;
        Ok(out)
    }

    /// True when no `z` variable occurs (only `z̲` and `T`).
    pub fn is_z_free(&self) -> bool {
        self.terms.keys().all(|e| e.z_part().iter().all(|&a| a == 0))
    }

    /// True when no `z̲` variable occurs.
    pub fn is_zbar_free(&self) -> bool {
        self.terms.keys().all(|e| e.zbar_part().iter().all(|&a| a == 0))
    }

    /// Image under the ring map sending variable slot `s` to `targets[s]`.
    ///
    /// Slots `0..n` are `z₁..zₙ`, slots `n..2n` are `z̲₁..z̲ₙ`. Every target must be
    /// a unit so negative exponents substitute consistently.
    pub fn substitute(&self, targets: &[LaurentPoly]) -> Result<Self, AlgebraError> {
        let slots = 2 * self.ctx.n;
        if targets.len() != slots {
            return Err(AlgebraError::LengthMismatch {
                expected: slots,
                got: targets.len(),
            });
        }
        let target_ctx = targets.first().map_or(self.ctx, |t| t.ctx);
        let mut units = Vec::with_capacity(slots);
        for t in targets {
            if t.ctx != target_ctx {
                return Err(AlgebraError::ContextMismatch("substitution targets disagree".into()));
            }
            if t.ctx.field != self.ctx.field {
                return Err(AlgebraError::FieldMismatch {
                    left: self.ctx.field,
                    right: t.ctx.field,
                });
            }
            if !t.is_unit() {
                return Err(AlgebraError::NotAUnit(t.to_string()));
            }
            let (e, c) = t.terms.iter().next().expect("unit has one term");
            units.push((e.clone(), c.clone()));
        }
        let mut out = Self::zero(target_ctx);
        for (e, c) in &self.terms {
            let mut exp = ExponentVector::zero(target_ctx.n);
            let mut coeff = c.clone();
            for (slot, &k) in e.as_slice().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let (ue, uc) = &units[slot];
                exp = exp.add(&ue.scaled(k));
                coeff = coeff.try_mul(&uc.pow(i64::from(k))?)?;
            }
            out.insert_term(exp, coeff)?;
        }
        Ok(out)
    }

    /// Identity substitution targets, to be edited by callers.
    pub fn identity_targets(ctx: RingContext) -> Vec<LaurentPoly> {
        (0..ctx.n)
            .map(|i| Self::z(ctx, i, 1))
            .chain((0..ctx.n).map(|i| Self::zbar(ctx, i, 1)))
            .collect()
    }

    /// Replace every `zᵢ` by `z̲ᵢ`; requires a `z̲`-free input.
    pub fn z_to_zbar(&self) -> Result<Self, AlgebraError> {
        if !self.is_zbar_free() {
            return Err(AlgebraError::ContextMismatch("polynomial already involves z̲".into()));
        }
        let n = self.ctx.n;
        let mut targets = Self::identity_targets(self.ctx);
        for i in 0..n {
            targets[i] = Self::zbar(self.ctx, i, 1);
        }
        self.substitute(&targets)
    }

    /// Replace every `z̲ᵢ` by `zᵢ`.
    pub fn zbar_to_z(&self) -> Self {
        let n = self.ctx.n;
        let mut targets = Self::identity_targets(self.ctx);
        for i in 0..n {
            targets[n + i] = Self::z(self.ctx, i, 1);
        }
        self.substitute(&targets).expect("variables are units")
    }

    /// Numerical value at `(z, z̲)` with `T = t_value`.
    pub fn eval_numeric(&self, z: &[Complex64], zbar: &[Complex64], t_value: f64) -> Result<Complex64, AlgebraError> {
        let n = self.ctx.n;
        for pt in [z, zbar] {
            if pt.len() != n {
                return Err(AlgebraError::LengthMismatch {
                    expected: n,
                    got: pt.len(),
                });
            }
        }
        for (i, c) in z.iter().chain(zbar).enumerate() {
            if c.is_zero() {
                return Err(AlgebraError::ZeroCoordinate(i % n));
            }
        }
        let mut acc = Complex64::zero();
        for (e, c) in &self.terms {
            let mut m = c.specialize(t_value)?;
            for (slot, &k) in e.as_slice().iter().enumerate() {
                if k != 0 {
                    let base = if slot < n { z[slot] } else { zbar[slot - n] };
                    m *= base.powi(k);
                }
            }
            acc += m;
        }
        Ok(acc)
    }

    /// Substitute numerical values for `z̲` and `T`, leaving a complex polynomial in `z`.
    pub fn specialize_zbar(&self, zbar: &[Complex64], t_value: f64) -> Result<Self, AlgebraError> {
        let n = self.ctx.n;
        if zbar.len() != n {
            return Err(AlgebraError::LengthMismatch {
                expected: n,
                got: zbar.len(),
            });
        }
        if let Some(i) = zbar.iter().position(|c| c.is_zero()) {
            return Err(AlgebraError::ZeroCoordinate(i));
        }
        let ctx = self.ctx.with_field(BaseField::Complex);
        let mut out = Self::zero(ctx);
        for (e, c) in &self.terms {
            let mut m = c.specialize(t_value)?;
            for (i, &k) in e.zbar_part().iter().enumerate() {
                if k != 0 {
                    m *= zbar[i].powi(k);
                }
            }
            let exp = ExponentVector::new(e.z_part(), &vec![0; n]);
            out.insert_term(exp, NovikovScalar::constant(FieldElement::Complex(m)))?;
        }
        Ok(out)
    }

    /// Apply a coefficient map, dropping terms that become zero.
    pub fn map_coefficients(
        &self,
        ctx: RingContext,
        mut f: impl FnMut(&NovikovScalar) -> Option<NovikovScalar>,
    ) -> Option<Self> {
        let mut out = Self::zero(ctx);
        for (e, c) in &self.terms {
            out.insert_term(e.clone(), f(c)?).ok()?;
        }
        Some(out)
    }

    /// Reduce rational coefficients modulo two.
    pub fn reduce_mod2(&self) -> Option<Self> {
        self.map_coefficients(self.ctx.with_field(BaseField::Char2), NovikovScalar::reduce_mod2)
    }

    /// Exact quotient by `zᵢ - z̲ᵢ`, or `None` when the division leaves a remainder.
    pub fn div_by_difference(&self, i: usize) -> Option<Self> {
        let n = self.ctx.n;
        // Group terms by every exponent except (zᵢ, z̲ᵢ) and by total degree in that pair.
        let mut groups: BTreeMap<(ExponentVector, i32), BTreeMap<i32, NovikovScalar>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let p = e.get(i);
            let q = e.get(n + i);
            let mut rest = e.clone();
            rest.0[i] = 0;
            rest.0[n + i] = 0;
            groups.entry((rest, p + q)).or_default().insert(p, c.clone());
        }
        let mut out = Self::zero(self.ctx);
        for ((rest, total), coeffs) in groups {
            // Σ a_p z^p u^{D-p} = (z - u) Σ b_p z^p u^{D-1-p} with b_p = -Σ_{r≤p} a_r.
            let lo = *coeffs.keys().next().expect("nonempty group");
            let hi = *coeffs.keys().next_back().expect("nonempty group");
            let mut running = NovikovScalar::zero(self.ctx.field);
            for p in lo..=hi {
                if let Some(a) = coeffs.get(&p) {
                    running = running.try_add(a).ok()?;
                }
                if p == hi {
                    break;
                }
                if !running.is_zero() {
                    let mut e = rest.clone();
                    e.0[i] = p;
                    e.0[n + i] = total - 1 - p;
                    out.insert_term(e, running.neg()).ok()?;
                }
            }
            if !running.is_zero() {
                return None;
            }
        }
        Some(out)
    }

    /// Canonical text form.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (e, c) in &self.terms {
            let vars = variable_factors(e);
            for (t_exp, coeff) in c.terms() {
                let mut factors: Vec<String> = Vec::new();
                let t = t_factor(t_exp);
                if !t.is_empty() {
                    factors.push(t);
                }
                factors.extend(vars.iter().cloned());
                let (negative, magnitude) = match coeff {
                    FieldElement::Rational(q) if q.is_negative_one() => (true, None),
                    FieldElement::Rational(q) if *q < num_rational::BigRational::zero() => {
                        (true, Some(FieldElement::Rational(-q.clone())))
                    }
                    other if other.is_one() => (false, None),
                    other => (false, Some(other.clone())),
                };
                let mut body = String::new();
                if let Some(m) = magnitude {
                    body.push_str(&m.to_string());
                    if !factors.is_empty() {
                        body.push('*');
                    }
                } else if factors.is_empty() {
                    body.push('1');
                }
                body.push_str(&factors.join("*"));
                if out.is_empty() {
                    if negative {
                        out.push('-');
                    }
                } else {
                    out.push_str(if negative { " - " } else { " + " });
                }
                out.push_str(&body);
            }
        }
        out
    }

    /// Parse the canonical text form (also accepts looser spacing and repeated factors).
    pub fn parse(ctx: RingContext, text: &str) -> Result<Self, AlgebraError> {
        PolyParser::new(ctx, text).parse()
    }

    /// Largest absolute exponent among all variables.
    pub fn max_abs_exponent(&self) -> i32 {
        self.terms
            .keys()
            .flat_map(|e| e.as_slice().iter().map(|a| a.abs()))
            .max()
            .unwrap_or(0)
    }
}

trait NegativeOne {
    fn is_negative_one(&self) -> bool;
}

impl NegativeOne for num_rational::BigRational {
    fn is_negative_one(&self) -> bool {
        *self == -num_rational::BigRational::from_integer(1.into())
    }
}

fn variable_factors(e: &ExponentVector) -> Vec<String> {
    let n = e.n();
    let mut out = Vec::new();
    for (slot, &k) in e.as_slice().iter().enumerate() {
        if k == 0 {
            continue;
        }
        let (name, idx) = if slot < n { ('z', slot + 1) } else { ('u', slot - n + 1) };
        if k == 1 {
            out.push(format!("{name}{idx}"));
        } else {
            out.push(format!("{name}{idx}^{k}"));
        }
    }
    out
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    /// Panics on context mismatch; use [`LaurentPoly::try_add`] to recover.
    fn add(self, rhs: Self) -> LaurentPoly {
        self.try_add(rhs).expect("Laurent addition")
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: Self) -> LaurentPoly {
        self.try_sub(rhs).expect("Laurent subtraction")
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: Self) -> LaurentPoly {
        self.try_mul(rhs).expect("Laurent multiplication")
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::neg(self)
    }
}

struct PolyParser<'a> {
    ctx: RingContext,
    src: &'a str,
    pos: usize,
}

impl<'a> PolyParser<'a> {
    fn new(ctx: RingContext, src: &'a str) -> Self {
        Self { ctx, src, pos: 0 }
    }

    fn err(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse(format!("{msg} at byte {} in `{}`", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> &'a str {
        let start = self.pos;
        while self.peek().is_some_and(&pred) {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    /// Optional sign followed by digits, optionally `/digits`.
    fn signed_ratio_text(&mut self) -> Result<String, AlgebraError> {
        let mut s = String::new();
        if self.peek() == Some('-') {
            self.bump();
            s.push('-');
        }
        let num = self.take_while(|c| c.is_ascii_digit());
        if num.is_empty() {
            return Err(self.err("expected digits"));
        }
        s.push_str(num);
        if self.peek() == Some('/') {
            self.bump();
            let den = self.take_while(|c| c.is_ascii_digit());
            if den.is_empty() {
                return Err(self.err("expected denominator"));
            }
            s.push('/');
            s.push_str(den);
        }
        Ok(s)
    }

    fn parse(mut self) -> Result<LaurentPoly, AlgebraError> {
        let mut acc = LaurentPoly::zero(self.ctx);
        self.skip_ws();
        let mut first = true;
        loop {
            self.skip_ws();
            if self.peek().is_none() {
                if first {
                    return Err(self.err("empty polynomial"));
                }
                break;
            }
            let mut negative = false;
            match self.peek() {
                Some('+') => {
                    self.bump();
                }
                Some('-') => {
                    self.bump();
                    negative = true;
                }
                _ if !first => return Err(self.err("expected `+` or `-`")),
                _ => {}
            }
            self.skip_ws();
            let term = self.term()?;
            acc = acc.try_add(&if negative { term.neg() } else { term })?;
            first = false;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<LaurentPoly, AlgebraError> {
        let mut acc = LaurentPoly::one(self.ctx);
        loop {
            self.skip_ws();
            let factor = self.factor()?;
            acc = acc.try_mul(&factor)?;
            self.skip_ws();
            if self.peek() == Some('*') {
                self.bump();
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentPoly, AlgebraError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let text = self.signed_ratio_text()?;
                let q = parse_big_rational(&text).ok_or_else(|| self.err("bad rational"))?;
                let elem = match self.ctx.field {
                    BaseField::Rational => FieldElement::Rational(q),
                    BaseField::Char2 => FieldElement::Rational(q)
                        .reduce_mod2()
                        .ok_or_else(|| self.err("coefficient has no image mod 2"))?,
                    BaseField::Complex => FieldElement::Complex(Complex64::new(
                        crate::scalar::ratio_to_f64(&q),
                        0.0,
                    )),
                };
                Ok(LaurentPoly::constant(self.ctx, NovikovScalar::constant(elem)))
            }
            Some('T') => {
                self.bump();
                let e = if self.peek() == Some('^') {
                    self.bump();
                    let text = self.signed_ratio_text()?;
                    parse_exponent(&text).ok_or_else(|| self.err("bad T exponent"))?
                } else {
                    Exponent::from_integer(1)
                };
                Ok(LaurentPoly::t_power(self.ctx, e))
            }
            Some(v @ ('z' | 'u')) => {
                self.bump();
                let idx: usize = self
                    .take_while(|c| c.is_ascii_digit())
                    .parse()
                    .map_err(|_| self.err("expected variable index"))?;
                if idx == 0 || idx > self.ctx.n {
                    return Err(self.err("variable index out of range"));
                }
                let k: i32 = if self.peek() == Some('^') {
                    self.bump();
                    let text = self.signed_ratio_text()?;
                    text.parse().map_err(|_| self.err("variable exponents must be integers"))?
                } else {
                    1
                };
                Ok(if v == 'z' {
                    LaurentPoly::z(self.ctx, idx - 1, k)
                } else {
                    LaurentPoly::zbar(self.ctx, idx - 1, k)
                })
            }
            _ => Err(self.err("expected a factor")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx2() -> RingContext {
        RingContext::rational(2)
    }

    fn p(text: &str) -> LaurentPoly {
        LaurentPoly::parse(ctx2(), text).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let a = p("z1 - u1");
        let b = p("z1 + u1");
        assert_eq!(&a * &b, p("z1^2 - u1^2"));
    }

    #[test]
    fn antidiagonal_product() {
        assert_eq!(&p("1 + z1*z2") * &p("z1^-1 + z2^-1"), p("z1 + z2 + z1^-1 + z2^-1"));
    }

    #[test]
    fn times_zero_is_zero() {
        assert!((&p("3*T^1/2*z1 + u2") * &LaurentPoly::zero(ctx2())).is_zero());
    }

    #[test]
    fn monomial_examples() {
        let tk = NovikovScalar::t_power(BaseField::Rational, Exponent::new(5, 1));
        let m = LaurentPoly::monomial(ctx2(), tk, &[-1, -1], &[0, 0]).unwrap();
        assert_eq!(m.to_text(), "T^5*z1^-1*z2^-1");
        let one = LaurentPoly::monomial(ctx2(), NovikovScalar::one(BaseField::Rational), &[0, 0], &[0, 0]).unwrap();
        assert!(one.is_one());
        let half = NovikovScalar::t_power(BaseField::Rational, Exponent::new(1, 2));
        let m = LaurentPoly::monomial(ctx2(), half, &[1, 0], &[0, 0]).unwrap();
        assert_eq!(m.to_text(), "T^1/2*z1");
        assert!(matches!(
            LaurentPoly::monomial(ctx2(), NovikovScalar::one(BaseField::Rational), &[1], &[0, 0]),
            Err(AlgebraError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn hori_vafa_rescaling_of_p1() {
        let ctx = RingContext::rational(1);
        let w = LaurentPoly::parse(ctx, "z1 + z1^-1").unwrap();
        let mut targets = LaurentPoly::identity_targets(ctx);
        targets[0] = LaurentPoly::parse(ctx, "T^-1/2*z1").unwrap();
        let got = w.substitute(&targets).unwrap();
        assert_eq!(got, LaurentPoly::parse(ctx, "T^-1/2*z1 + T^1/2*z1^-1").unwrap());
        assert_eq!(w.substitute(&LaurentPoly::identity_targets(ctx)).unwrap(), w);
    }

    #[test]
    fn non_unit_substitution_is_rejected() {
        let w = p("z1");
        let mut targets = LaurentPoly::identity_targets(ctx2());
        targets[0] = p("z1 + 1");
        assert!(matches!(w.substitute(&targets), Err(AlgebraError::NotAUnit(_))));
    }

    #[test]
    fn numeric_evaluation_examples() {
        let one = Complex64::new(1.0, 0.0);
        let x = p("z1 - u1");
        assert_eq!(x.eval_numeric(&[one, one], &[one, one], 0.5).unwrap(), Complex64::zero());
        let ctx = RingContext::rational(1);
        let w = LaurentPoly::parse(ctx, "T*z1 + T*z1^-1").unwrap();
        let e = (-1.0f64).exp();
        let got = w.eval_numeric(&[one], &[one], e).unwrap();
        assert!((got.re - 2.0 * e).abs() < 1e-15 && got.im == 0.0);
        assert_eq!(LaurentPoly::one(ctx2()).eval_numeric(&[one, one], &[one, one], e).unwrap(), one);
        let zero = Complex64::zero();
        assert_eq!(x.eval_numeric(&[zero, one], &[one, one], e), Err(AlgebraError::ZeroCoordinate(0)));
    }

    #[test]
    fn text_round_trip() {
        for text in [
            "0",
            "1",
            "-1",
            "z1 - u1",
            "-T^1/2*z1^-1*u2 + 3/4*T^-2*z2",
            "2 - T*z1*z2^-1",
        ] {
            let poly = p(text);
            assert_eq!(LaurentPoly::parse(ctx2(), &poly.to_text()).unwrap(), poly, "{text}");
        }
        assert_eq!(p("z1 - u1").to_text(), "-u1 + z1");
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "z3", "z1^1/2", "x", "z1 z2", "T^", "1/0"] {
            assert!(LaurentPoly::parse(ctx2(), bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn division_by_difference() {
        let x = p("z1 - u1");
        let g = p("3*z1^-2*u2 + T*u1 - z2");
        let f = &x * &g;
        assert_eq!(f.div_by_difference(0), Some(g));
        assert_eq!(p("z1").div_by_difference(0), None);
        assert_eq!(p("z1^-1 - u1^-1").div_by_difference(0), Some(p("-z1^-1*u1^-1")));
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = p("z1");
        let b = LaurentPoly::z(RingContext::rational(3), 0, 1);
        assert!(matches!(a.try_add(&b), Err(AlgebraError::ContextMismatch(_))));
        let c = LaurentPoly::z(RingContext::new(2, BaseField::Char2), 0, 1);
        assert!(a.try_mul(&c).is_err());
    }
}
