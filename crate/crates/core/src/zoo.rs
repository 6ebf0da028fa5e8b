//! Explicit matrix factorizations: ℙ¹, ℙ¹×ℙ¹, ℙ², and ℝℙⁿ ⊂ ℂℙⁿ.
//!
//! Generators are placed on exterior masks so the ℤ/2 grading is `|I| mod 2`.
//! Holonomies of the second Lagrangian are either numbers or the `z̲` variables.

use thiserror::Error;

use crate::exterior::{mask_parity, Endomorphism, Mask, MatrixFactorization, MfFailure};
use crate::laurent::{LaurentPoly, RingContext};
use crate::scalar::{BaseField, Exponent, FieldElement, NovikovScalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZooError {
    #[error("holonomy must be nonzero")]
    ZeroHolonomy,
    #[error("areas violate alpha + beta = gamma + delta")]
    AreaRelation,
    #[error("real projective space needs odd n, got {0}")]
    EvenDimension(usize),
    #[error("signed coefficients are only available for n = 3, got {0}")]
    SignedUnavailable(usize),
    #[error("verification failed: {0}")]
    Verification(#[from] MfFailure),
}

/// A holonomy value: a nonzero rational, or the formal variable `z̲` of a slot.
#[derive(Clone, Debug, PartialEq)]
pub enum Holonomy {
    Symbolic,
    Value(FieldElement),
}

impl Holonomy {
    pub fn int(value: i64) -> Self {
        Holonomy::Value(FieldElement::from_int(BaseField::Rational, value))
    }

    /// `λ^{power}` in `ctx`, using `z̲_slot` when symbolic.
    fn power(&self, ctx: RingContext, slot: usize, power: i32) -> Result<LaurentPoly, ZooError> {
        match self {
            Holonomy::Symbolic => Ok(LaurentPoly::zbar(ctx, slot, power)),
            Holonomy::Value(v) => {
                if v.is_zero() {
                    return Err(ZooError::ZeroHolonomy);
                }
                let base = if power < 0 { v.inverse().map_err(|_| ZooError::ZeroHolonomy)? } else { v.clone() };
                let mut acc = FieldElement::one(v.field());
                for _ in 0..power.unsigned_abs() {
                    acc = acc.try_mul(&base).expect("same field");
                }
                Ok(LaurentPoly::constant(ctx, NovikovScalar::constant(acc)))
            }
        }
    }
}

fn tp(ctx: RingContext, e: Exponent) -> LaurentPoly {
    LaurentPoly::t_power(ctx, e)
}

fn z(ctx: RingContext, i: usize, k: i32) -> LaurentPoly {
    LaurentPoly::z(ctx, i, k)
}

fn int(ctx: RingContext, v: i64) -> LaurentPoly {
    LaurentPoly::from_int(ctx, v)
}

fn half(k: Exponent) -> Exponent {
    k / Exponent::from_integer(2)
}

/// `T^{k/2}(z + 1/z)` in one variable.
pub fn p1_potential(ctx: RingContext, k: Exponent) -> LaurentPoly {
    &tp(ctx, half(k)) * &(&z(ctx, 0, 1) + &z(ctx, 0, -1))
}

/// Great-circle pair in ℙ¹: `p` on mask 0 (even), `q` on mask 1 (odd), total area `k = 2(k₁ + k₂)`.
///
/// The Floer differential `δ` squares to `-(W - λ)`; the factorization is
/// `d = (-1)^{deg} δ`, so the odd-to-even entry carries an extra sign.
pub fn p1_pair(k1: Exponent, k2: Exponent, hol: &Holonomy) -> Result<MatrixFactorization, ZooError> {
    let ctx = RingContext::rational(1);
    let lam = hol.power(ctx, 0, 1)?;
    let lam_inv = hol.power(ctx, 0, -1)?;
    let delta_p = &tp(ctx, k1) * &(&z(ctx, 0, 1) - &lam_inv);
    let delta_q = &tp(ctx, k2) * &(&int(ctx, -1) + &(&lam * &z(ctx, 0, -1)));
    let endo = Endomorphism::from_entries(ctx, 1, [(1, 0, delta_p), (0, 1, delta_q.neg())]).expect("in range");
    Ok(MatrixFactorization::verified(endo, p1_potential(ctx, (k1 + k2) * Exponent::from_integer(2)))?)
}

/// Perturbed great circle with four strips; areas satisfy `α + β = γ + δ`.
///
/// Odd generators `p₁, p₂` sit on masks 1, 2 and even `q₁, q₂` on masks 0, 3.
pub fn p1_perturbed(k: Exponent, areas: [Exponent; 4]) -> Result<MatrixFactorization, ZooError> {
    let [a, b, g, d] = areas;
    if a + b != g + d {
        return Err(ZooError::AreaRelation);
    }
    let ctx = RingContext::rational(1);
    let h = half(k);
    let zm1 = &z(ctx, 0, 1) - &int(ctx, 1);
    let one_minus_inv = &int(ctx, 1) - &z(ctx, 0, -1);
    let (p1, p2, q1, q2): (Mask, Mask, Mask, Mask) = (1, 2, 0, 3);
    let entries = [
        (q1, p1, &tp(ctx, h - a) * &zm1),
        (q1, p2, &tp(ctx, h - g) * &one_minus_inv),
        (q2, p1, &tp(ctx, h - a - b + g) * &zm1),
        (q2, p2, &tp(ctx, h - b) * &zm1),
        (p1, q1, tp(ctx, a)),
        (p1, q2, (&tp(ctx, a + b - g) * &z(ctx, 0, -1)).neg()),
        (p2, q1, tp(ctx, g).neg()),
        (p2, q2, tp(ctx, b)),
    ];
    let endo = Endomorphism::from_entries(ctx, 2, entries).expect("in range");
    Ok(MatrixFactorization::verified(endo, p1_potential(ctx, k))?)
}

/// `T^{k/2}(z₁ + 1/z₁ + z₂ + 1/z₂)`.
pub fn p1p1_potential(ctx: RingContext, k: Exponent) -> LaurentPoly {
    let sum = [z(ctx, 0, 1), z(ctx, 0, -1), z(ctx, 1, 1), z(ctx, 1, -1)]
        .iter()
        .fold(LaurentPoly::zero(ctx), |acc, t| &acc + t);
    &tp(ctx, half(k)) * &sum
}

/// Torus fiber against the swapped product of great circles, `d₀ = A`, `d₁ = -B`.
///
/// Intersections `(p,p), (q,q), (p,q), (q,p)` sit on masks 0, 3, 1, 2.
pub fn p1p1_torus(k1: Exponent, k2: Exponent, hol: [&Holonomy; 2]) -> Result<MatrixFactorization, ZooError> {
    let ctx = RingContext::rational(2);
    let (pp, qq, pq, qp): (Mask, Mask, Mask, Mask) = (0, 3, 1, 2);
    let l1 = hol[0].power(ctx, 0, 1)?;
    let l2 = hol[1].power(ctx, 1, 1)?;
    let l1_inv = hol[0].power(ctx, 0, -1)?;
    let l2_inv = hol[1].power(ctx, 1, -1)?;
    let a1 = &tp(ctx, k1) * &(&(&l2 * &z(ctx, 1, 1)) - &int(ctx, 1));
    let a2 = &tp(ctx, k1) * &(&(&l1 * &z(ctx, 0, 1)) - &int(ctx, 1));
    let b1 = &tp(ctx, k2) * &(&z(ctx, 0, -1) - &l1_inv);
    let b2 = &tp(ctx, k2) * &(&z(ctx, 1, -1) - &l2_inv);
    let entries = [
        // A
        (pq, pp, a1.clone()),
        (pq, qq, b1.clone()),
        (qp, pp, a2.clone()),
        (qp, qq, b2.neg()),
        // -B
        (pp, pq, b2.neg()),
        (pp, qp, b1.neg()),
        (qq, pq, a2.neg()),
        (qq, qp, a1),
    ];
    let endo = Endomorphism::from_entries(ctx, 2, entries).expect("in range");
    Ok(MatrixFactorization::verified(endo, p1p1_potential(ctx, (k1 + k2) * Exponent::from_integer(2)))?)
}

/// Rank-one factorization from the anti-diagonal: `(p,p)` on mask 0, `(q,q)` on mask 1.
pub fn p1p1_antidiagonal(k1: Exponent, k2: Exponent) -> Result<MatrixFactorization, ZooError> {
    let ctx = RingContext::rational(2);
    let up = &tp(ctx, k1) * &(&int(ctx, 1) + &(&z(ctx, 0, 1) * &z(ctx, 1, 1)));
    let down = &tp(ctx, k2) * &(&z(ctx, 0, -1) + &z(ctx, 1, -1));
    let endo = Endomorphism::from_entries(ctx, 1, [(1, 0, up), (0, 1, down)]).expect("in range");
    Ok(MatrixFactorization::verified(endo, p1p1_potential(ctx, (k1 + k2) * Exponent::from_integer(2)))?)
}

/// `T^k(z₁ + z₂ + 1/(z₁z₂))`.
pub fn p2_potential(ctx: RingContext, k: Exponent) -> LaurentPoly {
    let sum = &(&z(ctx, 0, 1) + &z(ctx, 1, 1)) + &(&z(ctx, 0, -1) * &z(ctx, 1, -1));
    &tp(ctx, k) * &sum
}

/// The ℙ² Clifford-torus factorization, entry by entry, with `c₁ = c₂ = c₃ = T^k`.
pub fn p2_matrix(k: Exponent) -> Result<MatrixFactorization, ZooError> {
    let ctx = RingContext::rational(2);
    let t = tp(ctx, k);
    let u = |i: usize| LaurentPoly::zbar(ctx, i, -1);
    let w1 = &t - &(&(&t * &u(0)) * &(&z(ctx, 0, -1) * &z(ctx, 1, -1)));
    let w2 = &t - &(&(&t * &u(0)) * &(&u(1) * &z(ctx, 1, -1)));
    let x1 = LaurentPoly::difference(ctx, 0);
    let x2 = LaurentPoly::difference(ctx, 1);
    let (one, e12, e1, e2): (Mask, Mask, Mask, Mask) = (0, 3, 1, 2);
    let entries = [
        (one, e1, w1.clone()),
        (one, e2, w2.clone()),
        (e12, e1, x2.neg()),
        (e12, e2, x1.clone()),
        (e1, one, x1),
        (e1, e12, w2.neg()),
        (e2, one, x2),
        (e2, e12, w1),
    ];
    let endo = Endomorphism::from_entries(ctx, 2, entries).expect("in range");
    Ok(MatrixFactorization::verified(endo, p2_potential(ctx, k))?)
}

/// Basis order and labels of the Chan–Leung presentation: `p₁ = e₂`, `p₂ = -z₁′e₁`,
/// `q₁ = q^{1/3}`, `q₂ = q^{-1/3} z₁′ e₁₂`.
pub const CHAN_LEUNG_ORDER: [(Mask, &str); 4] = [(2, "p1"), (1, "p2"), (0, "q1"), (3, "q2")];

/// Result of rewriting the ℙ² matrix in Chan–Leung coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ChanLeungReport {
    /// The ℙ² matrix at `z̲ = (1,1)` in `z′ = T^k z` and the new basis.
    pub rewritten: Endomorphism,
    /// The target presentation, entered by hand.
    pub target: Endomorphism,
    pub matches: bool,
    /// First differing `(row, col)` when `matches` is false.
    pub first_mismatch: Option<(Mask, Mask)>,
    /// The target with `z₁′ ↔ z₂′`, which must still factorize the (symmetric) potential.
    pub swapped: MatrixFactorization,
    /// `W(z′) = z₁′ + z₂′ + q/(z₁′z₂′)` with `q = T^{3k}`.
    pub potential: LaurentPoly,
}

/// Rewrite the ℙ² factorization with `q = T^{3k}`, `zᵢ′ = q^{1/3}zᵢ`, `z̲′ = q^{1/3}`
/// and compare with the target presentation.
pub fn chan_leung_compare(k: Exponent) -> Result<ChanLeungReport, ZooError> {
    let mf = p2_matrix(k)?;
    let ctx = mf.endo.ctx();
    // z̲ = (1,1), then z = T^{-k} z′ (the z slots now hold z′).
    let mut targets = LaurentPoly::identity_targets(ctx);
    targets[2] = LaurentPoly::one(ctx);
    targets[3] = LaurentPoly::one(ctx);
    targets[0] = &tp(ctx, -k) * &z(ctx, 0, 1);
    targets[1] = &tp(ctx, -k) * &z(ctx, 1, 1);
    let endo = mf.endo.map_entries(|p| p.substitute(&targets)).expect("unit substitution");
    let potential = mf.potential.substitute(&targets).expect("unit substitution");

    let q13 = tp(ctx, k);
    let mut units = vec![LaurentPoly::zero(ctx); 4];
    units[2] = LaurentPoly::one(ctx);
    units[1] = z(ctx, 0, 1).neg();
    units[0] = q13.clone();
    units[3] = &tp(ctx, -k) * &z(ctx, 0, 1);
    let rewritten = endo.in_rescaled_basis(&units).expect("units are invertible");

    let target = chan_leung_target(ctx, k);
    let first_mismatch = rewritten.try_sub(&target).expect("same shape").entries().first().map(|(r, c, _)| (*r, *c));
    let mut swap = LaurentPoly::identity_targets(ctx);
    swap.swap(0, 1);
    let swapped_endo = target.map_entries(|p| p.substitute(&swap)).expect("unit substitution");
    let swapped = MatrixFactorization::verified(swapped_endo, potential.clone())?;
    Ok(ChanLeungReport {
        matches: first_mismatch.is_none(),
        rewritten,
        target,
        first_mismatch,
        swapped,
        potential,
    })
}

fn chan_leung_target(ctx: RingContext, k: Exponent) -> Endomorphism {
    let q13 = tp(ctx, k);
    let q23 = tp(ctx, k * Exponent::from_integer(2));
    let z1 = z(ctx, 0, 1);
    let z2 = z(ctx, 1, 1);
    let one = int(ctx, 1);
    let a = &z2 - &q13; // z₂′ - q^{1/3}
    let b = &z1 - &(&q23 * &z(ctx, 1, -1)); // z₁′ - q^{2/3}/z₂′
    let c = &one - &(&q13 * &z(ctx, 0, -1)); // 1 - q^{1/3}/z₁′
    let d = &one - &(&q13 * &z(ctx, 1, -1)); // 1 - q^{1/3}/z₂′
    let [(p1, _), (p2, _), (q1, _), (q2, _)] = CHAN_LEUNG_ORDER;
    Endomorphism::from_entries(
        ctx,
        2,
        [
            (p1, q1, a.clone()),
            (p1, q2, b.clone()),
            (p2, q1, c.neg()),
            (p2, q2, d.clone()),
            (q1, p1, d),
            (q1, p2, b.neg()),
            (q2, p1, c),
            (q2, p2, a),
        ],
    )
    .expect("in range")
}

/// Coefficient field for the ℝℙⁿ factorization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RpField {
    Char2,
    /// Rational coefficients with explicit signs; available for `n = 3`.
    Signed,
}

/// A generator `[a₀ : ⋯ : aₙ]` normalized to `a₀ = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RpGenerator {
    pub signs: Vec<i8>,
    /// `{j ≥ 1 : aⱼ = -1}` as an exterior mask.
    pub mask: Mask,
}

impl RpGenerator {
    pub fn from_mask(n: usize, mask: Mask) -> Self {
        let mut signs = vec![1i8];
        signs.extend((0..n).map(|j| if mask >> j & 1 == 1 { -1 } else { 1 }));
        Self { signs, mask }
    }

    /// ℤ/2 degree: parity of the number of `-1` entries.
    pub fn parity(&self) -> u32 {
        mask_parity(self.mask)
    }

    pub fn label(&self) -> String {
        let parts: Vec<&str> = self.signs.iter().map(|&s| if s > 0 { "1" } else { "-1" }).collect();
        format!("[{}]", parts.join(":"))
    }
}

/// All `2ⁿ` generators, lexicographic on the sign vector with `-1 < 1`.
pub fn rp_generators(n: usize) -> Vec<RpGenerator> {
    let mut out: Vec<RpGenerator> = (0..1u32 << n).map(|m| RpGenerator::from_mask(n, m)).collect();
    out.sort_by(|a, b| a.signs.cmp(&b.signs));
    out
}

/// Conventional labels for `n = 3`: `p₁..p₄` odd, `q₁..q₄` even.
pub const RP3_LABELS: [(&str, Mask); 8] = [
    ("p1", 0b111),
    ("p2", 0b001),
    ("p3", 0b010),
    ("p4", 0b100),
    ("q1", 0b000),
    ("q2", 0b110),
    ("q3", 0b101),
    ("q4", 0b011),
];

/// `T^k(z₁ + ⋯ + zₙ + 1/(z₁⋯zₙ))`.
pub fn pn_potential(ctx: RingContext, k: Exponent) -> LaurentPoly {
    let mut sum = LaurentPoly::zero(ctx);
    let mut inv = LaurentPoly::one(ctx);
    for i in 0..ctx.n {
        sum = &sum + &z(ctx, i, 1);
        inv = &inv * &z(ctx, i, -1);
    }
    &tp(ctx, k) * &(&sum + &inv)
}

/// Mirror factorization of ℝℙⁿ ⊂ ℂℙⁿ for odd `n`.
pub fn rpn_build(n: usize, k: Exponent, field: RpField) -> Result<MatrixFactorization, ZooError> {
    if n % 2 == 0 {
        return Err(ZooError::EvenDimension(n));
    }
    let endo = match field {
        RpField::Char2 => rp_char2_matrix(n, k),
        RpField::Signed if n == 3 => rp3_signed_matrix(k),
        RpField::Signed => return Err(ZooError::SignedUnavailable(n)),
    };
    let potential = pn_potential(endo.ctx(), k);
    Ok(MatrixFactorization::verified(endo, potential)?)
}

fn rp_char2_matrix(n: usize, k: Exponent) -> Endomorphism {
    let ctx = RingContext::new(n, BaseField::Char2);
    let h = tp(ctx, half(k));
    let full: Mask = (1 << n) - 1;
    let mut entries = Vec::new();
    for p in (0..=full).filter(|&m| mask_parity(m) == 1) {
        // Flip a₀: the representative with a₀ = -1 is -p, and q is its complement.
        let q = full & !p;
        let monomial = |set: Mask| {
            (0..n)
                .filter(|j| set >> j & 1 == 1)
                .fold(h.clone(), |acc, j| &acc * &z(ctx, j, -1))
        };
        entries.push((q, p, monomial(q)));
        entries.push((p, q, monomial(p)));
    }
    // Flip aᵢ for i ≥ 1: with a₀ = 1, the strip carrying zᵢ runs from the class
    // with aᵢ = -1 to the one with aᵢ = 1, whatever their parities.
    for x in 0..=full {
        for i in (0..n).filter(|i| x >> i & 1 == 1) {
            let y = x & !(1 << i);
            entries.push((y, x, &h * &z(ctx, i, 1)));
            entries.push((x, y, h.clone()));
        }
    }
    Endomorphism::from_entries(ctx, n, entries).expect("in range")
}

fn rp3_signed_matrix(k: Exponent) -> Endomorphism {
    let ctx = RingContext::rational(3);
    let mask = |name: &str| RP3_LABELS.iter().find(|(l, _)| *l == name).expect("label").1;
    let term = |sign: i64, zs: &[i32]| {
        let zeros = [0, 0, 0];
        let coeff = NovikovScalar::t_power(BaseField::Rational, half(k))
            .scale(&FieldElement::from_int(BaseField::Rational, sign))
            .expect("rational");
        LaurentPoly::monomial(ctx, coeff, zs, &zeros).expect("length 3")
    };
    // (row, col, sign, z-exponents)
    let table: [(&str, &str, i64, [i32; 3]); 32] = [
        ("p1", "q1", 1, [-1, -1, -1]),
        ("p1", "q2", 1, [0, 0, 0]),
        ("p1", "q3", 1, [0, 0, 0]),
        ("p1", "q4", 1, [0, 0, 0]),
        ("p2", "q1", 1, [0, 0, 0]),
        ("p2", "q2", -1, [-1, 0, 0]),
        ("p2", "q3", -1, [0, 0, 1]),
        ("p2", "q4", 1, [0, 1, 0]),
        ("p3", "q1", 1, [0, 0, 0]),
        ("p3", "q2", 1, [0, 0, 1]),
        ("p3", "q3", -1, [0, -1, 0]),
        ("p3", "q4", -1, [1, 0, 0]),
        ("p4", "q1", 1, [0, 0, 0]),
        ("p4", "q2", -1, [0, 1, 0]),
        ("p4", "q3", 1, [1, 0, 0]),
        ("p4", "q4", -1, [0, 0, -1]),
        ("q1", "p1", 1, [0, 0, 0]),
        ("q1", "p2", 1, [1, 0, 0]),
        ("q1", "p3", 1, [0, 1, 0]),
        ("q1", "p4", 1, [0, 0, 1]),
        ("q2", "p1", 1, [1, 0, 0]),
        ("q2", "p2", -1, [0, -1, -1]),
        ("q2", "p3", 1, [0, 0, 0]),
        ("q2", "p4", -1, [0, 0, 0]),
        ("q3", "p1", 1, [0, 1, 0]),
        ("q3", "p2", -1, [0, 0, 0]),
        ("q3", "p3", -1, [-1, 0, -1]),
        ("q3", "p4", 1, [0, 0, 0]),
        ("q4", "p1", 1, [0, 0, 1]),
        ("q4", "p2", 1, [0, 0, 0]),
        ("q4", "p3", -1, [0, 0, 0]),
        ("q4", "p4", -1, [-1, -1, 0]),
    ];
    Endomorphism::from_entries(
        ctx,
        3,
        table.iter().map(|(r, c, s, e)| (mask(r), mask(c), term(*s, e))),
    )
    .expect("in range")
}

/// Names accepted by [`preset`].
pub const PRESETS: [&str; 9] = [
    "chan_leung",
    "p1_pair",
    "p1_perturbed",
    "p1p1_antidiagonal",
    "p1p1_torus",
    "p2",
    "rp3_char2",
    "rp3_signed",
    "rp5_char2",
];

/// A named example with default parameters (`k = 1`, split areas, symbolic holonomy).
pub fn preset(name: &str) -> Option<Result<MatrixFactorization, ZooError>> {
    let q = |a: i64, b: i64| Exponent::new(a, b);
    Some(match name {
        "p1_pair" => p1_pair(q(1, 4), q(1, 4), &Holonomy::Symbolic),
        "p1_perturbed" => p1_perturbed(q(2, 1), [q(1, 4), q(1, 3), q(1, 5), q(23, 60)]),
        "p1p1_torus" => p1p1_torus(q(1, 4), q(1, 4), [&Holonomy::Symbolic, &Holonomy::Symbolic]),
        "p1p1_antidiagonal" => p1p1_antidiagonal(q(1, 4), q(1, 4)),
        "p2" => p2_matrix(q(1, 1)),
        "chan_leung" => chan_leung_compare(q(1, 1)).map(|r| r.swapped),
        "rp3_signed" => rpn_build(3, q(1, 1), RpField::Signed),
        "rp3_char2" => rpn_build(3, q(1, 1), RpField::Char2),
        "rp5_char2" => rpn_build(5, q(1, 1), RpField::Char2),
        _ => return None,
    })
}

/// Labels and display order for a preset's generators, when they have names.
pub fn preset_labels(name: &str) -> Option<(Vec<Mask>, Vec<String>)> {
    let owned = |v: &[(Mask, &str)]| {
        (
            v.iter().map(|(m, _)| *m).collect(),
            v.iter().map(|(_, l)| l.to_string()).collect(),
        )
    };
    match name {
        "p2" => Some(owned(&[(0, "1"), (3, "e12"), (1, "e1"), (2, "e2")])),
        "chan_leung" => Some(owned(&CHAN_LEUNG_ORDER)),
        "p1_pair" => Some(owned(&[(0, "p"), (1, "q")])),
        "p1_perturbed" => Some(owned(&[(1, "p1"), (2, "p2"), (0, "q1"), (3, "q2")])),
        "p1p1_torus" => Some(owned(&[(0, "(p,p)"), (3, "(q,q)"), (1, "(p,q)"), (2, "(q,p)")])),
        "p1p1_antidiagonal" => Some(owned(&[(0, "(p,p)"), (1, "(q,q)")])),
        "rp3_signed" | "rp3_char2" => Some(owned(&RP3_LABELS.map(|(l, m)| (m, l)))),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Exponent {
        Exponent::new(a, b)
    }

    fn parse(n: usize, text: &str) -> LaurentPoly {
        LaurentPoly::parse(RingContext::rational(n), text).unwrap()
    }

    #[test]
    fn p1_pair_lambdas() {
        let mf = p1_pair(q(1, 4), q(1, 4), &Holonomy::int(1)).unwrap();
        assert_eq!(mf.lambda, parse(1, "2*T^1/2"));
        let mf = p1_pair(q(1, 4), q(1, 4), &Holonomy::int(-1)).unwrap();
        assert_eq!(mf.lambda, parse(1, "-2*T^1/2"));
        let mf = p1_pair(q(1, 3), q(1, 6), &Holonomy::Symbolic).unwrap();
        assert_eq!(mf.lambda, parse(1, "T^1/2*u1 + T^1/2*u1^-1"));
        assert_eq!(p1_pair(q(1, 4), q(1, 4), &Holonomy::int(0)), Err(ZooError::ZeroHolonomy));
    }

    #[test]
    fn p1_perturbed_products() {
        let mf = p1_perturbed(q(2, 1), [q(1, 4), q(1, 3), q(1, 5), q(23, 60)]).unwrap();
        assert_eq!(mf.lambda, parse(1, "2*T"));
        assert_eq!(
            p1_perturbed(q(2, 1), [q(1, 4), q(1, 3), q(1, 5), q(1, 5)]),
            Err(ZooError::AreaRelation)
        );
        // α = γ, β = δ: the mixed exponent k/2 - α - β + γ collapses to k/2 - β.
        let mf = p1_perturbed(q(2, 1), [q(1, 4), q(1, 3), q(1, 4), q(1, 3)]).unwrap();
        assert_eq!(mf.endo.get(3, 1), parse(1, "T^2/3*z1 - T^2/3"));
    }

    #[test]
    fn p1p1_examples() {
        let mf = p1p1_torus(q(1, 4), q(1, 4), [&Holonomy::Symbolic, &Holonomy::Symbolic]).unwrap();
        assert_eq!(mf.lambda, parse(2, "T^1/2*u1 + T^1/2*u1^-1 + T^1/2*u2 + T^1/2*u2^-1"));
        let mf = p1p1_torus(q(1, 4), q(1, 4), [&Holonomy::int(1), &Holonomy::int(-1)]).unwrap();
        assert!(mf.lambda.is_zero());
        let mf = p1p1_torus(q(1, 8), q(3, 8), [&Holonomy::int(1), &Holonomy::int(1)]).unwrap();
        assert_eq!(mf.lambda, parse(2, "4*T^1/2"));

        let anti = p1p1_antidiagonal(q(1, 8), q(3, 8)).unwrap();
        assert!(anti.lambda.is_zero());
        let one = num_complex::Complex64::new(1.0, 0.0);
        let up = anti.endo.get(1, 0).eval_numeric(&[one, one], &[one, one], 0.5).unwrap();
        let down = anti.endo.get(0, 1).eval_numeric(&[one, one], &[one, one], 0.5).unwrap();
        assert!((up * down - 4.0 * 0.5f64.sqrt()).norm() < 1e-14);
    }

    #[test]
    fn p2_entries() {
        let mf = p2_matrix(q(1, 1)).unwrap();
        assert_eq!(mf.endo.get(1, 0), parse(2, "z1 - u1"));
        assert_eq!(mf.endo.get(0, 1), parse(2, "T - T*z1^-1*z2^-1*u1^-1"));
        assert_eq!(mf.lambda, parse(2, "T*u1 + T*u2 + T*u1^-1*u2^-1"));
    }

    #[test]
    fn chan_leung() {
        let report = chan_leung_compare(q(1, 1)).unwrap();
        assert!(report.matches, "{:?}", report.first_mismatch);
        assert_eq!(report.rewritten.get(3, 2), parse(2, "1 - T*z1^-1"));
        assert_eq!(report.potential, parse(2, "z1 + z2 + T^3*z1^-1*z2^-1"));
        assert_eq!(report.swapped.lambda, parse(2, "3*T"));
        let report = chan_leung_compare(q(2, 3)).unwrap();
        assert!(report.matches);
    }

    #[test]
    fn rp3_signed_entries_and_square() {
        let mf = rpn_build(3, q(1, 1), RpField::Signed).unwrap();
        assert!(mf.lambda.is_zero());
        assert_eq!(mf.endo.get(0b110, 0b111), parse(3, "T^1/2*z1"));
        assert_eq!(mf.endo.get(0b111, 0b000), parse(3, "T^1/2*z1^-1*z2^-1*z3^-1"));
    }

    #[test]
    fn rp_char2_matches_signed_mod_two() {
        let char2 = rpn_build(3, q(1, 1), RpField::Char2).unwrap();
        let signed = rpn_build(3, q(1, 1), RpField::Signed).unwrap();
        let reduced = signed.endo.map_entries(|p| Ok(p.reduce_mod2().expect("integral"))).unwrap();
        assert_eq!(reduced, char2.endo);
        let rp5 = rpn_build(5, q(1, 1), RpField::Char2).unwrap();
        assert_eq!(rp5.endo.size(), 32);
        assert!(rp5.lambda.is_zero());
        for (r, c, _) in rp5.endo.entries() {
            assert!(!rp5.endo.get(c, r).is_zero(), "strips come in pairs");
        }
        assert_eq!(rpn_build(4, q(1, 1), RpField::Char2), Err(ZooError::EvenDimension(4)));
        assert_eq!(rpn_build(5, q(1, 1), RpField::Signed), Err(ZooError::SignedUnavailable(5)));
    }

    #[test]
    fn generators_and_presets() {
        let gens = rp_generators(3);
        assert_eq!(gens.len(), 8);
        assert_eq!(gens.iter().filter(|g| g.parity() == 1).count(), 4);
        assert_eq!(RpGenerator::from_mask(3, 0b111).label(), "[1:-1:-1:-1]");
        for name in PRESETS {
            let mf = preset(name).unwrap().unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(mf.endo.is_odd());
        }
        assert!(preset("nope").is_none());
    }
}
