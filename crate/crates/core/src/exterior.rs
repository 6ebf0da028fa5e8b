//! Exterior algebra `Λ(e₁..e_k)` over the Laurent ring, odd endomorphisms and
//! matrix-factorization verification.
//!
//! A basis vector `e_I` is a bitmask with bit `j-1` standing for `e_j`. Matrices
//! act on columns: entry `(row, col)` is the coefficient of `e_row` in `d(e_col)`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;
use crate::exec::Strategy;
use crate::laurent::{LaurentPoly, RingContext};
use crate::scalar::BaseField;

pub type Mask = u32;

/// `|I| mod 2`.
pub fn mask_parity(mask: Mask) -> u32 {
    mask.count_ones() % 2
}

/// Sign of `e_I ∧ e_J`, or `None` when `I ∩ J ≠ ∅`.
pub fn wedge_sign(i: Mask, j: Mask) -> Option<i32> {
    if i & j != 0 {
        return None;
    }
    // Count pairs (a ∈ I, b ∈ J) with a > b.
    let mut inversions = 0;
    let mut rest = j;
    while rest != 0 {
        let b = rest.trailing_zeros();
        inversions += (i >> (b + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(if inversions % 2 == 0 { 1 } else { -1 })
}

/// Conventional label `1`, `e1`, `e12`, ... (indices above 9 are comma-separated).
pub fn mask_label(mask: Mask) -> String {
    if mask == 0 {
        return "1".to_string();
    }
    let idx: Vec<u32> = (0..32).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect();
    let sep = if idx.iter().any(|&i| i > 9) { "," } else { "" };
    format!("e{}", idx.iter().map(u32::to_string).collect::<Vec<_>>().join(sep))
}

/// An element of the exterior algebra with Laurent coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtElement {
    ctx: RingContext,
    k: usize,
    coeffs: BTreeMap<Mask, LaurentPoly>,
}

impl ExtElement {
    pub fn zero(ctx: RingContext, k: usize) -> Self {
        Self {
            ctx,
            k,
            coeffs: BTreeMap::new(),
        }
    }

    /// `coeff · e_I`.
    pub fn pure(k: usize, mask: Mask, coeff: LaurentPoly) -> Self {
        let mut out = Self::zero(coeff.ctx(), k);
        out.add_at(mask, coeff);
        out
    }

    pub fn basis(ctx: RingContext, k: usize, mask: Mask) -> Self {
        Self::pure(k, mask, LaurentPoly::one(ctx))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, mask: Mask) -> LaurentPoly {
        self.coeffs.get(&mask).cloned().unwrap_or_else(|| LaurentPoly::zero(self.ctx))
    }

    pub fn components(&self) -> impl Iterator<Item = (Mask, &LaurentPoly)> {
        self.coeffs.iter().map(|(m, p)| (*m, p))
    }

    /// The ℤ/2 degree if the element is homogeneous and nonzero.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.coeffs.keys().map(|&m| mask_parity(m));
        let first = it.next()?;
        it.all(|p| p == first).then_some(first)
    }

    fn add_at(&mut self, mask: Mask, coeff: LaurentPoly) {
        if coeff.is_zero() {
            return;
        }
        match self.coeffs.remove(&mask) {
            Some(existing) => {
                let sum = &existing + &coeff;
                if !sum.is_zero() {
                    self.coeffs.insert(mask, sum);
                }
            }
            None => {
                self.coeffs.insert(mask, coeff);
            }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.k != other.k || self.ctx != other.ctx {
            return Err(AlgebraError::ContextMismatch("exterior elements of different shape".into()));
        }
        let mut out = self.clone();
        for (m, p) in &other.coeffs {
            out.add_at(*m, p.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &LaurentPoly) -> Self {
        let mut out = Self::zero(self.ctx, self.k);
        for (m, p) in &self.coeffs {
            out.add_at(*m, p * factor);
        }
        out
    }

    /// `self ∧ other`.
    pub fn wedge(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.k != other.k || self.ctx != other.ctx {
            return Err(AlgebraError::ContextMismatch("exterior elements of different shape".into()));
        }
        let mut out = Self::zero(self.ctx, self.k);
        for (a, pa) in &self.coeffs {
            for (b, pb) in &other.coeffs {
                if let Some(s) = wedge_sign(*a, *b) {
                    let prod = pa * pb;
                    out.add_at(a | b, if s < 0 { prod.neg() } else { prod });
                }
            }
        }
        Ok(out)
    }
}

/// A `2^k × 2^k` matrix of Laurent polynomials indexed by subsets of `{1..k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Endomorphism {
    ctx: RingContext,
    k: usize,
    /// `cols[c]` maps target masks to entries of the image of `e_c`.
    cols: Vec<BTreeMap<Mask, LaurentPoly>>,
}

impl Endomorphism {
    pub fn zero(ctx: RingContext, k: usize) -> Self {
        assert!(k < 16, "exterior rank {k} is too large");
        Self {
            ctx,
            k,
            cols: vec![BTreeMap::new(); 1 << k],
        }
    }

    pub fn scalar(k: usize, value: &LaurentPoly) -> Self {
        let mut out = Self::zero(value.ctx(), k);
        for m in 0..out.size() as Mask {
            out.set(m, m, value.clone());
        }
        out
    }

    pub fn identity(ctx: RingContext, k: usize) -> Self {
        Self::scalar(k, &LaurentPoly::one(ctx))
    }

    /// Build from `(row, col, entry)` triples; repeated positions accumulate.
    pub fn from_entries(
        ctx: RingContext,
        k: usize,
        entries: impl IntoIterator<Item = (Mask, Mask, LaurentPoly)>,
    ) -> Result<Self, AlgebraError> {
        let mut out = Self::zero(ctx, k);
        for (r, c, p) in entries {
            out.check_index(r)?;
            out.check_index(c)?;
            if p.ctx() != ctx {
                return Err(AlgebraError::ContextMismatch(format!("entry ({r},{c}) has {:?}", p.ctx())));
            }
            out.add_entry(r, c, p);
        }
        Ok(out)
    }

    fn check_index(&self, m: Mask) -> Result<(), AlgebraError> {
        if (m as usize) < self.size() {
            Ok(())
        } else {
            Err(AlgebraError::IndexOutOfRange {
                index: m as usize,
                bound: self.size(),
            })
        }
    }

    /// `e_j ∧ (·)` for `1 ≤ j ≤ k`.
    pub fn wedge_op(ctx: RingContext, k: usize, j: usize) -> Self {
        assert!((1..=k).contains(&j), "wedge index {j} outside 1..={k}");
        let bit: Mask = 1 << (j - 1);
        let mut out = Self::zero(ctx, k);
        for i in 0..out.size() as Mask {
            if i & bit == 0 {
                let below = (i & (bit - 1)).count_ones();
                out.set(i | bit, i, LaurentPoly::from_int(ctx, if below % 2 == 0 { 1 } else { -1 }));
            }
        }
        out
    }

    /// Contraction `ι_j` for `1 ≤ j ≤ k`.
    pub fn contract_op(ctx: RingContext, k: usize, j: usize) -> Self {
        assert!((1..=k).contains(&j), "contraction index {j} outside 1..={k}");
        let bit: Mask = 1 << (j - 1);
        let mut out = Self::zero(ctx, k);
        for i in 0..out.size() as Mask {
            if i & bit != 0 {
                let below = (i & (bit - 1)).count_ones();
                out.set(i & !bit, i, LaurentPoly::from_int(ctx, if below % 2 == 0 { 1 } else { -1 }));
            }
        }
        out
    }

    pub fn ctx(&self) -> RingContext {
        self.ctx
    }

    /// Number of exterior generators.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Matrix size `2^k`.
    pub fn size(&self) -> usize {
        self.cols.len()
    }

    pub fn get(&self, row: Mask, col: Mask) -> LaurentPoly {
        self.cols[col as usize]
            .get(&row)
            .cloned()
            .unwrap_or_else(|| LaurentPoly::zero(self.ctx))
    }

    pub fn set(&mut self, row: Mask, col: Mask, p: LaurentPoly) {
        let column = &mut self.cols[col as usize];
        if p.is_zero() {
            column.remove(&row);
        } else {
            column.insert(row, p);
        }
    }

    fn add_entry(&mut self, row: Mask, col: Mask, p: LaurentPoly) {
        let sum = &self.get(row, col) + &p;
        self.set(row, col, sum);
    }

    /// Nonzero entries ordered by `(row, col)`.
    pub fn entries(&self) -> Vec<(Mask, Mask, &LaurentPoly)> {
        let mut out: Vec<_> = self
            .cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, p)| (*r, c as Mask, p)))
            .collect();
        out.sort_by_key(|(r, c, _)| (*r, *c));
        out
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(BTreeMap::is_empty)
    }

    /// Every nonzero entry connects subsets of opposite parity.
    pub fn is_odd(&self) -> bool {
        self.entries().iter().all(|(r, c, _)| mask_parity(*r) != mask_parity(*c))
    }

    pub fn is_even(&self) -> bool {
        self.entries().iter().all(|(r, c, _)| mask_parity(*r) == mask_parity(*c))
    }

    fn check_shape(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.k != other.k || self.ctx != other.ctx {
            return Err(AlgebraError::ContextMismatch(format!(
                "endomorphisms on {} and {} generators over {:?} / {:?}",
                self.k, other.k, self.ctx, other.ctx
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (r, c, p) in other.entries() {
            out.add_entry(r, c, p.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_entries(|p| Ok(p.neg())).expect("negation is total")
    }

    /// Multiply every entry by `factor`.
    pub fn scale(&self, factor: &LaurentPoly) -> Result<Self, AlgebraError> {
        self.map_entries(|p| p.try_mul(factor))
    }

    /// Apply `f` to each nonzero entry; the ring of the result follows `f`.
    pub fn map_entries(
        &self,
        f: impl Fn(&LaurentPoly) -> Result<LaurentPoly, AlgebraError>,
    ) -> Result<Self, AlgebraError> {
        let mut cols = vec![BTreeMap::new(); self.size()];
        let mut ctx = self.ctx;
        for (r, c, p) in self.entries() {
            let q = f(p)?;
            ctx = q.ctx();
            if !q.is_zero() {
                cols[c as usize].insert(r, q);
            }
        }
        Ok(Self { ctx, k: self.k, cols })
    }

    /// `self ∘ other` using the default strategy.
    pub fn compose(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.compose_with(other, Strategy::default())
    }

    /// `self ∘ other`; columns of the product are independent work items.
    pub fn compose_with(&self, other: &Self, strategy: Strategy) -> Result<Self, AlgebraError> {
        self.check_shape(other)?;
        let cols = strategy.map(other.cols.iter().collect(), |bcol| {
            let mut acc: BTreeMap<Mask, LaurentPoly> = BTreeMap::new();
            for (t, b) in bcol {
                for (r, a) in &self.cols[*t as usize] {
                    let entry = acc.entry(*r).or_insert_with(|| LaurentPoly::zero(self.ctx));
                    entry.add_product(a, b)?;
                }
            }
            acc.retain(|_, p| !p.is_zero());
            Ok::<_, AlgebraError>(acc)
        });
        Ok(Self {
            ctx: self.ctx,
            k: self.k,
            cols: cols.into_iter().collect::<Result<_, _>>()?,
        })
    }

    /// `self ∘ self`.
    pub fn square(&self) -> Self {
        self.compose(self).expect("same shape")
    }

    pub fn apply(&self, x: &ExtElement) -> Result<ExtElement, AlgebraError> {
        if x.k != self.k || x.ctx != self.ctx {
            return Err(AlgebraError::ContextMismatch("endomorphism and element differ in shape".into()));
        }
        let mut out = ExtElement::zero(self.ctx, self.k);
        for (c, xc) in &x.coeffs {
            for (r, a) in &self.cols[*c as usize] {
                out.add_at(*r, a * xc);
            }
        }
        Ok(out)
    }

    /// The common diagonal value if this is a scalar matrix.
    pub fn as_scalar(&self) -> Option<LaurentPoly> {
        let value = self.get(0, 0);
        self.first_deviation_from_scalar(&value).is_none().then_some(value)
    }

    /// The first `(row, col)` in row-major order where `self ≠ value·Id`.
    pub fn first_deviation_from_scalar(&self, value: &LaurentPoly) -> Option<(Mask, Mask)> {
        let size = self.size() as Mask;
        let mut bad: Option<(Mask, Mask)> = None;
        for m in 0..size {
            if &self.get(m, m) != value {
                bad = Some((m, m));
                break;
            }
        }
        for (r, c, _) in self.entries() {
            if r != c {
                let candidate = (r, c);
                if bad.is_none_or(|b| candidate < b) {
                    bad = Some(candidate);
                }
                break;
            }
        }
        bad
    }

    /// `U ∘ self ∘ U⁻¹` for the diagonal `U` with `U(e_I) = units[I]·e_I`.
    pub fn conjugate_diagonal(&self, units: &[LaurentPoly]) -> Result<Self, AlgebraError> {
        if units.len() != self.size() {
            return Err(AlgebraError::LengthMismatch {
                expected: self.size(),
                got: units.len(),
            });
        }
        let inverses = units
            .iter()
            .map(LaurentPoly::inverse_unit)
            .collect::<Result<Vec<_>, _>>()?;
        let mut out = Self::zero(self.ctx, self.k);
        for (r, c, p) in self.entries() {
            out.set(r, c, &(&units[r as usize] * p) * &inverses[c as usize]);
        }
        Ok(out)
    }

    /// The same map written in the basis `b_I = units[I]·e_I`.
    pub fn in_rescaled_basis(&self, units: &[LaurentPoly]) -> Result<Self, AlgebraError> {
        let inverses = units
            .iter()
            .map(LaurentPoly::inverse_unit)
            .collect::<Result<Vec<_>, _>>()?;
        self.conjugate_diagonal(&inverses)
    }

    /// Permute basis vectors: `e_I` becomes `e_{perm[I]}`.
    pub fn permute(&self, perm: &[Mask]) -> Result<Self, AlgebraError> {
        if perm.len() != self.size() {
            return Err(AlgebraError::LengthMismatch {
                expected: self.size(),
                got: perm.len(),
            });
        }
        let mut out = Self::zero(self.ctx, self.k);
        for (r, c, p) in self.entries() {
            out.set(perm[r as usize], perm[c as usize], p.clone());
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let doc = MatrixDocument {
            n: self.ctx.n,
            k: Some(self.k),
            field: Some(field_tag(self.ctx.field).to_string()),
            entries: self
                .entries()
                .into_iter()
                .map(|(row, col, p)| EntryDocument {
                    row,
                    col,
                    poly: p.to_text(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("matrix serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, AlgebraError> {
        let doc: MatrixDocument = serde_json::from_str(text).map_err(|e| AlgebraError::Parse(e.to_string()))?;
        let field = match doc.field.as_deref() {
            None | Some("Q") => BaseField::Rational,
            Some("F2") => BaseField::Char2,
            Some(other) => return Err(AlgebraError::Parse(format!("unknown field `{other}`"))),
        };
        let ctx = RingContext::new(doc.n, field);
        let k = doc.k.unwrap_or(doc.n);
        if k >= 16 {
            return Err(AlgebraError::Parse(format!("exterior rank {k} is too large")));
        }
        let entries = doc
            .entries
            .into_iter()
            .map(|e| Ok((e.row, e.col, LaurentPoly::parse(ctx, &e.poly)?)))
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        Self::from_entries(ctx, k, entries)
    }

    /// Grid rendering, even subsets first, each block by increasing mask.
    pub fn pretty(&self) -> String {
        let mut order: Vec<Mask> = (0..self.size() as Mask).filter(|m| mask_parity(*m) == 0).collect();
        order.extend((0..self.size() as Mask).filter(|m| mask_parity(*m) == 1));
        let labels: Vec<String> = order.iter().map(|&m| mask_label(m)).collect();
        self.pretty_with(&order, &labels)
    }

    /// Grid rendering in a chosen basis order with custom labels.
    pub fn pretty_with(&self, order: &[Mask], labels: &[String]) -> String {
        let cells: Vec<Vec<String>> = order
            .iter()
            .map(|&r| order.iter().map(|&c| self.get(r, c).to_text()).collect())
            .collect();
        let label_width = labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
        let widths: Vec<usize> = (0..order.len())
            .map(|c| {
                cells
                    .iter()
                    .map(|row| row[c].chars().count())
                    .chain(std::iter::once(labels[c].chars().count()))
                    .max()
                    .unwrap_or(1)
            })
            .collect();
        let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w.saturating_sub(s.chars().count())));
        let mut out = String::new();
        out.push_str(&pad("", label_width));
        for (c, l) in labels.iter().enumerate() {
            out.push_str(" | ");
            out.push_str(&pad(l, widths[c]));
        }
        out.push('\n');
        for (r, row) in cells.iter().enumerate() {
            out.push_str(&pad(&labels[r], label_width));
            for (c, cell) in row.iter().enumerate() {
                out.push_str(" | ");
                out.push_str(&pad(cell, widths[c]));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

fn field_tag(field: BaseField) -> &'static str {
    match field {
        BaseField::Rational => "Q",
        BaseField::Char2 => "F2",
        BaseField::Complex => "C",
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixDocument {
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    field: Option<String>,
    entries: Vec<EntryDocument>,
}

#[derive(Serialize, Deserialize)]
struct EntryDocument {
    row: Mask,
    col: Mask,
    poly: String,
}

/// An odd endomorphism together with the potential it factorizes.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixFactorization {
    pub endo: Endomorphism,
    pub potential: LaurentPoly,
    /// `λ` with `endo² = (potential - λ)·Id`, established by [`mf_verify`].
    pub lambda: LaurentPoly,
}

impl MatrixFactorization {
    /// Verify and package; fails unless `endo² = (potential - λ)·Id`.
    pub fn verified(endo: Endomorphism, potential: LaurentPoly) -> Result<Self, MfFailure> {
        let lambda = mf_verify(&endo, &potential)?;
        Ok(Self {
            endo,
            potential,
            lambda,
        })
    }
}

/// Why a candidate failed to be a matrix factorization.
#[derive(Clone, Debug, PartialEq)]
pub enum MfFailure {
    /// An entry joins subsets of equal parity.
    NotOdd { row: Mask, col: Mask },
    /// `endo²` is not scalar at `(row, col)`; `expected` is the `(0,0)` value
    /// on the diagonal and zero off it.
    NotScalar {
        row: Mask,
        col: Mask,
        found: LaurentPoly,
        expected: LaurentPoly,
    },
    /// `potential - endo²` still involves `z`.
    LambdaNotZFree { scalar: LaurentPoly, lambda: LaurentPoly },
    /// Shape problem (different rings or sizes).
    Shape(String),
}

impl MfFailure {
    /// The offending entry and the symbolic difference `found - expected`.
    pub fn counterexample(&self) -> Option<(Mask, Mask, LaurentPoly)> {
        match self {
            MfFailure::NotScalar {
                row,
                col,
                found,
                expected,
            } => Some((*row, *col, found - expected)),
            MfFailure::LambdaNotZFree { lambda, .. } => Some((0, 0, lambda.clone())),
            _ => None,
        }
    }
}

impl fmt::Display for MfFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MfFailure::NotOdd { row, col } => {
                write!(f, "entry ({}, {}) joins subsets of equal parity", mask_label(*row), mask_label(*col))
            }
            MfFailure::NotScalar {
                row,
                col,
                found,
                expected,
            } => write!(
                f,
                "square is not scalar at ({}, {}): found `{found}`, expected `{expected}`",
                mask_label(*row),
                mask_label(*col)
            ),
            MfFailure::LambdaNotZFree { scalar, lambda } => {
                write!(f, "square is `{scalar}` but W minus it is `{lambda}`, which involves z")
            }
            MfFailure::Shape(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for MfFailure {}

/// Check `endo² = (potential - λ)·Id` with `λ` free of `z`, and return `λ`.
pub fn mf_verify(endo: &Endomorphism, potential: &LaurentPoly) -> Result<LaurentPoly, MfFailure> {
    mf_verify_with(endo, potential, Strategy::default())
}

pub fn mf_verify_with(endo: &Endomorphism, potential: &LaurentPoly, strategy: Strategy) -> Result<LaurentPoly, MfFailure> {
    if endo.ctx() != potential.ctx() {
        return Err(MfFailure::Shape(format!(
            "endomorphism over {:?}, potential over {:?}",
            endo.ctx(),
            potential.ctx()
        )));
    }
    if let Some((row, col, _)) = endo
        .entries()
        .into_iter()
        .find(|(r, c, _)| mask_parity(*r) == mask_parity(*c))
    {
        return Err(MfFailure::NotOdd { row, col });
    }
    let sq = endo
        .compose_with(endo, strategy)
        .map_err(|e| MfFailure::Shape(e.to_string()))?;
    let scalar = sq.get(0, 0);
    if let Some((row, col)) = sq.first_deviation_from_scalar(&scalar) {
        let expected = if row == col {
            scalar
        } else {
            LaurentPoly::zero(endo.ctx())
        };
        return Err(MfFailure::NotScalar {
            row,
            col,
            found: sq.get(row, col),
            expected,
        });
    }
    let lambda = potential - &scalar;
    if !lambda.is_z_free() {
        return Err(MfFailure::LambdaNotZFree { scalar, lambda });
    }
    Ok(lambda)
}
