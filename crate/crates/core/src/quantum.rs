//! Dimension four: the degree −3 correction `d₋₃` and the basis change
//! `e_top ↦ e_top − g` that puts `d₁ + d₋₁ + d₋₃` back into wedge-contraction form.
//!
//! `g` itself comes from pearl counts that are not computable here, so it is
//! an input. Everything below holds for arbitrary `g`.

use rand::Rng;
use thiserror::Error;

use crate::builder::wedge_contraction;
use crate::error::AlgebraError;
use crate::exterior::{mask_label, mf_verify, Endomorphism, Mask, MfFailure};
use crate::laurent::{LaurentPoly, RingContext};
use crate::scalar::{Exponent, FieldElement, NovikovScalar};

const N: usize = 4;
const TOP: Mask = 0b1111;

fn top_minus(i: usize) -> Mask {
    TOP & !(1 << (i - 1))
}

fn sign(i: usize) -> i64 {
    if i % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum QuantumError {
    #[error("expected a rank-4 map over a 4-variable ring, got rank {k} over n = {n}")]
    WrongShape { k: usize, n: usize },
    #[error("x{0} is not z{0} - u{0}")]
    NonStandardX(usize),
    #[error("entry ({}, {}) lies outside the degree 4->1, 3->0 support", mask_label(*.row), mask_label(*.col))]
    OutOfSupport { row: Mask, col: Mask },
    #[error("d(e_top\\{i}) = `{entry}` is not divisible by x{i}")]
    NotDivisible { i: usize, entry: LaurentPoly },
    #[error("(-1)^{i} f{i}/x{i} = `{found}` differs from `{expected}` obtained at i = 1")]
    Mismatch { i: usize, found: LaurentPoly, expected: LaurentPoly },
    #[error("coefficient of e{j} in d(e_top) is `{found}`, expected g*x{j} = `{expected}`")]
    TopColumn { j: usize, found: LaurentPoly, expected: LaurentPoly },
    #[error("after removing d-3, entry ({}, {}) is not of wedge-contraction type", mask_label(*.row), mask_label(*.col))]
    NotWedgeContraction { row: Mask, col: Mask },
    #[error("lambda changed from `{before}` to `{after}`")]
    LambdaChanged { before: LaurentPoly, after: LaurentPoly },
    #[error(transparent)]
    Verification(#[from] MfFailure),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

fn check_shape(ctx: RingContext, k: usize) -> Result<(), QuantumError> {
    if ctx.n != N || k != N {
        return Err(QuantumError::WrongShape { k, n: ctx.n });
    }
    Ok(())
}

/// `d₋₃(e_top) = g Σ xⱼ eⱼ`, `d₋₃(e_{top∖i}) = (−1)ⁱ xᵢ g`, zero elsewhere.
pub fn synthesize_d_minus3(g: &LaurentPoly) -> Result<Endomorphism, QuantumError> {
    let ctx = g.ctx();
    check_shape(ctx, N)?;
    let mut d = Endomorphism::zero(ctx, N);
    for i in 1..=N {
        let gx = g.try_mul(&LaurentPoly::difference(ctx, i - 1))?;
        d.set(1 << (i - 1), TOP, gx.clone());
        d.set(0, top_minus(i), if sign(i) < 0 { gx.neg() } else { gx });
    }
    Ok(d)
}

/// Recover `g` from a map of the shape produced by [`synthesize_d_minus3`].
pub fn extract_g(d3: &Endomorphism, x: &[LaurentPoly]) -> Result<LaurentPoly, QuantumError> {
    let ctx = d3.ctx();
    check_shape(ctx, d3.k())?;
    if x.len() != N {
        return Err(AlgebraError::LengthMismatch { expected: N, got: x.len() }.into());
    }
    for (i, xi) in x.iter().enumerate() {
        if *xi != LaurentPoly::difference(ctx, i) {
            return Err(QuantumError::NonStandardX(i + 1));
        }
    }
    let allowed = |r: Mask, c: Mask| (c == TOP && r.count_ones() == 1) || (r == 0 && c.count_ones() == 3);
    if let Some((row, col, _)) = d3.entries().into_iter().find(|(r, c, _)| !allowed(*r, *c)) {
        return Err(QuantumError::OutOfSupport { row, col });
    }
    let mut g: Option<LaurentPoly> = None;
    for i in 1..=N {
        let entry = d3.get(0, top_minus(i));
        let gi = entry
            .div_by_difference(i - 1)
            .ok_or_else(|| QuantumError::NotDivisible { i, entry: entry.clone() })?;
        let gi = if sign(i) < 0 { gi.neg() } else { gi };
        match &g {
            None => g = Some(gi),
            Some(expected) if *expected != gi => {
                return Err(QuantumError::Mismatch {
                    i,
                    found: gi,
                    expected: expected.clone(),
                })
            }
            Some(_) => {}
        }
    }
    let g = g.expect("four entries inspected");
    for j in 1..=N {
        let expected = g.try_mul(&x[j - 1])?;
        let found = d3.get(1 << (j - 1), TOP);
        if found != expected {
            return Err(QuantumError::TopColumn { j, found, expected });
        }
    }
    Ok(g)
}

/// The change of basis fixing `e_I` for `I ≠ top` and sending `e_top` to `e_top − g`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumBasisChange {
    pub g: LaurentPoly,
}

impl QuantumBasisChange {
    pub fn new(g: LaurentPoly) -> Result<Self, QuantumError> {
        check_shape(g.ctx(), N)?;
        Ok(Self { g })
    }

    /// Columns are the new basis vectors in old coordinates.
    pub fn matrix(&self) -> Endomorphism {
        let ctx = self.g.ctx();
        let mut p = Endomorphism::identity(ctx, N);
        p.set(0, TOP, self.g.neg());
        p
    }

    pub fn inverse_matrix(&self) -> Endomorphism {
        let ctx = self.g.ctx();
        let mut p = Endomorphism::identity(ctx, N);
        p.set(0, TOP, self.g.clone());
        p
    }

    /// `P⁻¹ d P`.
    pub fn conjugate(&self, d: &Endomorphism) -> Result<Endomorphism, QuantumError> {
        Ok(self.inverse_matrix().compose(&d.compose(&self.matrix())?)?)
    }
}

/// Read `x` and `w` off the degree ±1 part, requiring the map to be exactly
/// `Σ xⱼ eⱼ∧ + Σ wⱼ ιⱼ`.
pub fn split_wedge_contraction(d: &Endomorphism) -> Result<(Vec<LaurentPoly>, Vec<LaurentPoly>), QuantumError> {
    let k = d.k();
    let x: Vec<_> = (0..k).map(|j| d.get(1 << j, 0)).collect();
    let w: Vec<_> = (0..k).map(|j| d.get(0, 1 << j)).collect();
    let rebuilt = wedge_contraction(&x, &w);
    if let Some((row, col)) = d
        .entries()
        .into_iter()
        .map(|(r, c, _)| (r, c))
        .chain(rebuilt.entries().into_iter().map(|(r, c, _)| (r, c)))
        .find(|&(r, c)| d.get(r, c) != rebuilt.get(r, c))
    {
        return Err(QuantumError::NotWedgeContraction { row, col });
    }
    Ok((x, w))
}

/// Output of [`apply_quantum_basis`].
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumOutcome {
    pub new_d: Endomorphism,
    pub x: Vec<LaurentPoly>,
    pub w: Vec<LaurentPoly>,
    pub lambda: LaurentPoly,
}

/// Rewrite `d = d₁ + d₋₁ + d₋₃(g)` in the basis with `e_top^new = e_top − g`,
/// confirm the result is of wedge-contraction type, and that `λ` is unchanged.
pub fn apply_quantum_basis(d: &Endomorphism, g: &LaurentPoly, potential: &LaurentPoly) -> Result<QuantumOutcome, QuantumError> {
    check_shape(d.ctx(), d.k())?;
    let d3 = synthesize_d_minus3(g)?;
    split_wedge_contraction(&d.try_sub(&d3)?)?;
    let before = mf_verify(d, potential)?;
    let new_d = QuantumBasisChange::new(g.clone())?.conjugate(d)?;
    let (x, w) = split_wedge_contraction(&new_d)?;
    let after = mf_verify(&new_d, potential)?;
    if after != before {
        return Err(QuantumError::LambdaChanged { before, after });
    }
    Ok(QuantumOutcome {
        new_d,
        x,
        w,
        lambda: after,
    })
}

/// Every nonzero entry raises or lowers the degree by exactly one.
pub fn only_wedge_contraction_positions(d: &Endomorphism) -> bool {
    d.entries()
        .iter()
        .all(|(r, c, _)| r.count_ones().abs_diff(c.count_ones()) == 1)
}

/// A random rational polynomial in `z` and `z̲` with a few terms.
pub fn random_g<R: Rng + ?Sized>(rng: &mut R, ctx: RingContext, terms: usize, max_exp: i32) -> LaurentPoly {
    let mut g = LaurentPoly::zero(ctx);
    for _ in 0..terms {
        let v: Vec<i32> = (0..ctx.n).map(|_| rng.gen_range(-max_exp..=max_exp)).collect();
        let vbar: Vec<i32> = (0..ctx.n).map(|_| rng.gen_range(-max_exp..=max_exp)).collect();
        let num = rng.gen_range(-5..=5i64);
        let den = rng.gen_range(1..=4i64);
        let t = Exponent::new(rng.gen_range(0..=4), 2);
        let coeff = NovikovScalar::constant(FieldElement::rational(num, den)).shift(t);
        g = &g + &LaurentPoly::monomial(ctx, coeff, &v, &vbar).expect("lengths match");
    }
    g
}
