//! The wedge-contraction factorization `d̃ = Σ (zⱼ - z̲ⱼ) eⱼ∧ + Σⱼ wⱼ ιⱼ` with
//! `wⱼ = Σᵢ cᵢ α^i_j`, and the oracles that check the `α` coefficients.
//!
//! Every `α^i_j` is a signed sum of monomials in `z` and `z̲`. Two independent
//! routes produce it: the closed form, and a walk over the entry points of the
//! pearl trajectories that tallies crossings of the gauge hypertori.
//!
//! At integral ratios `p|v_l| / |v_j|` the floor is lowered by one exactly when
//! `l > j` and `v_l`, `v_j` have the same sign. Plain floor breaks the
//! telescoping identity at such collisions (e.g. `v = (2, 2)`).

use rand::Rng;

use crate::exec::Strategy;
use crate::exterior::{Endomorphism, Mask, MatrixFactorization, MfFailure};
use crate::laurent::{LaurentPoly, RingContext};
use crate::scalar::NovikovScalar;
use crate::toric::{PotentialW, ToricFanoData};

/// `α^i_j` for every ray `i` and basis direction `j` (0-based storage).
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaTable {
    pub n: usize,
    pub m: usize,
    /// `entries[i][j] = α^{i+1}_{j+1}`.
    pub entries: Vec<Vec<LaurentPoly>>,
    pub signs: Vec<Vec<i32>>,
}

impl AlphaTable {
    pub fn compute(fan: &ToricFanoData, ctx: RingContext, strategy: Strategy) -> Self {
        let (n, m) = (fan.n(), fan.m());
        let entries = strategy.map((0..m).collect(), |i| {
            (0..n).map(|j| alpha_for_vector(ctx, fan.ray(i), j)).collect()
        });
        let signs = (0..m).map(|i| (0..n).map(|j| fan.sign(i, j)).collect()).collect();
        Self { n, m, entries, signs }
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i][j]
    }
}

/// Accumulates `±z^a z̲^b` terms.
struct TermSink {
    ctx: RingContext,
    acc: LaurentPoly,
}

impl TermSink {
    fn new(ctx: RingContext) -> Self {
        Self {
            ctx,
            acc: LaurentPoly::zero(ctx),
        }
    }

    fn push(&mut self, sign: i32, z: &[i32], zbar: &[i32]) {
        let coeff = NovikovScalar::from_int(self.ctx.field, i64::from(sign));
        let term = LaurentPoly::monomial(self.ctx, coeff, z, zbar).expect("lengths match the ring");
        self.acc = &self.acc + &term;
    }
}

fn sign(x: i32) -> i32 {
    x.signum()
}

/// The number of `v_l` crossings before the `p`-th entry point along `v_j`:
/// `⌊p|v_l| / |v_j|⌋`, lowered by one at exact ties when `l > j` and the signs agree.
pub fn floor_count(v: &[i32], p: i32, l: usize, j: usize) -> i32 {
    let (a, b) = (p * v[l].abs(), v[j].abs());
    let tie = a % b == 0 && l > j && sign(v[l]) == sign(v[j]);
    a / b - i32::from(tie)
}

/// `α_j` for the monomial `z^v`, closed form (0-based `j`).
pub fn alpha_for_vector(ctx: RingContext, v: &[i32], j: usize) -> LaurentPoly {
    let n = v.len();
    assert_eq!(n, ctx.n, "vector length must match the ring");
    if v[j] == 0 {
        return LaurentPoly::zero(ctx);
    }
    let s: Vec<i32> = v.iter().map(|&x| sign(x)).collect();
    let sj = s[j];
    let ind = |a: i32, b: i32| i32::from(a == b);

    // Leading factor, shared by every term of the bracket.
    let mut lead_z = vec![0; n];
    let mut lead_u = vec![0; n];
    if sj == 1 {
        lead_z.copy_from_slice(v);
    } else {
        lead_u.copy_from_slice(v);
    }
    lead_z[j] -= 1;
    for l in (0..n).filter(|&l| l != j) {
        if sj == 1 {
            lead_u[l] -= ind(s[l], -1);
            lead_z[l] -= ind(s[l], 1);
        } else {
            lead_z[l] -= ind(s[l], -1);
            lead_u[l] -= ind(s[l], 1);
        }
    }

    let mut sink = TermSink::new(ctx);

    // First bracket term.
    let (mut z, mut u) = (lead_z.clone(), lead_u.clone());
    for l in 0..n {
        if l > j {
            u[l] += s[l].abs();
        } else if l < j {
            if sj == 1 {
                u[l] += ind(s[l], -1);
                z[l] += ind(s[l], 1);
            } else {
                u[l] += ind(s[l], 1);
                z[l] += ind(s[l], -1);
            }
        }
    }
    sink.push(sj, &z, &u);

    // Sum over the interior entry points.
    for p in 1..v[j].abs() {
        let (mut z, mut u) = (lead_z.clone(), lead_u.clone());
        u[j] += p;
        z[j] -= p;
        for l in (0..n).filter(|&l| l != j) {
            u[l] += s[l].abs();
            let f = s[l] * floor_count(v, p, l, j);
            if sj == 1 {
                u[l] += f;
                z[l] -= f;
            } else {
                z[l] += f;
                u[l] -= f;
            }
        }
        sink.push(sj, &z, &u);
    }
    sink.acc
}

/// `α_j` for `z^v` assembled entry point by entry point (0-based `j`).
///
/// For the `p`-th entry point, each direction `l` contributes the holonomy of
/// the arc from `1` to the entry position (crossings of the `l`-th hypertorus,
/// marked `z_l` or `z̲_l` depending on which side of the crossing the arc
/// passes), and for `l ≠ j` the flow segment picks up a single `z̲_l`, or `z_l`
/// at the first entry point when `l < j` runs parallel to `j`.
pub fn alpha_by_entry_enumeration(ctx: RingContext, v: &[i32], j: usize) -> LaurentPoly {
    let n = v.len();
    assert_eq!(n, ctx.n, "vector length must match the ring");
    if v[j] == 0 {
        return LaurentPoly::zero(ctx);
    }
    let s: Vec<i32> = v.iter().map(|&x| sign(x)).collect();
    let sj = s[j];
    let vj = v[j].abs();
    let mut sink = TermSink::new(ctx);
    for p in 0..vj {
        let mut z = vec![0; n];
        let mut u = vec![0; n];
        for l in (0..n).filter(|&l| s[l] != 0) {
            let vl = v[l].abs();
            // Crossings of the l-th hypertorus strictly before the entry point.
            let before = if l == j {
                p
            } else {
                (1..=vl)
                    .filter(|&b| {
                        let (lhs, rhs) = (b * vj, p * vl);
                        lhs < rhs || (lhs == rhs && !(s[l] == sj && l > j))
                    })
                    .count() as i32
            };
            let (first, second) = if sj == 1 {
                (1 + before, before)
            } else {
                (vl - before, vl - 1 - before)
            };
            let (marked_z, marked_u) = if s[l] == 1 { (first, second) } else { (second, first) };
            u[l] += s[l] * marked_u;
            z[l] += s[l] * (vl - marked_z);
            if l != j {
                if p == 0 && s[l] == sj && l < j {
                    z[l] += 1;
                } else {
                    u[l] += 1;
                }
            }
        }
        sink.push(sj, &z, &u);
    }
    sink.acc
}

/// `α^i_j` for a fan ray (0-based indices), closed form.
pub fn alpha_closed_form(fan: &ToricFanoData, ctx: RingContext, i: usize, j: usize) -> LaurentPoly {
    alpha_for_vector(ctx, fan.ray(i), j)
}

/// Which construction of `α` to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphaMethod {
    ClosedForm,
    EntryEnumeration,
}

/// A vector for which `Σⱼ αⱼ (zⱼ - z̲ⱼ) ≠ z^v - z̲^v`.
#[derive(Clone, Debug, PartialEq)]
pub struct TelescopeFailure {
    pub v: Vec<i32>,
    pub lhs: LaurentPoly,
    pub rhs: LaurentPoly,
}

/// `z^v - z̲^v`.
pub fn monomial_difference(ctx: RingContext, v: &[i32]) -> LaurentPoly {
    let zeros = vec![0; v.len()];
    let one = NovikovScalar::one(ctx.field);
    let a = LaurentPoly::monomial(ctx, one.clone(), v, &zeros).expect("length");
    let b = LaurentPoly::monomial(ctx, one, &zeros, v).expect("length");
    &a - &b
}

/// Expand `Σⱼ αⱼ (zⱼ - z̲ⱼ)` and compare with `z^v - z̲^v` exactly.
pub fn telescoping_check(v: &[i32]) -> Result<(), TelescopeFailure> {
    telescoping_check_with(v, AlphaMethod::ClosedForm)
}

pub fn telescoping_check_with(v: &[i32], method: AlphaMethod) -> Result<(), TelescopeFailure> {
    let ctx = RingContext::rational(v.len());
    let mut lhs = LaurentPoly::zero(ctx);
    for j in 0..v.len() {
        let a = match method {
            AlphaMethod::ClosedForm => alpha_for_vector(ctx, v, j),
            AlphaMethod::EntryEnumeration => alpha_by_entry_enumeration(ctx, v, j),
        };
        lhs.add_product(&a, &LaurentPoly::difference(ctx, j)).expect("same ring");
    }
    let rhs = monomial_difference(ctx, v);
    if lhs == rhs {
        Ok(())
    } else {
        Err(TelescopeFailure {
            v: v.to_vec(),
            lhs,
            rhs,
        })
    }
}

/// Every nonzero vector in `[-max, max]^n`, in lexicographic order.
pub fn all_vectors(n: usize, max: i32) -> Vec<Vec<i32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (-max..=max).map(move |a| {
                    let mut p = prefix.clone();
                    p.push(a);
                    p
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().any(|&a| a != 0));
    out
}

/// A uniformly random nonzero vector in `[-max, max]^n`.
pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize, max: i32) -> Vec<i32> {
    loop {
        let v: Vec<i32> = (0..n).map(|_| rng.gen_range(-max..=max)).collect();
        if v.iter().any(|&a| a != 0) {
            return v;
        }
    }
}

/// Outcome of a batch of oracle checks on one vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleOutcome {
    pub v: Vec<i32>,
    pub telescopes: bool,
    /// Closed form and entry enumeration agree for every `j`.
    pub methods_agree: bool,
}

impl OracleOutcome {
    pub fn passed(&self) -> bool {
        self.telescopes && self.methods_agree
    }
}

/// Run both oracles on each vector.
pub fn oracle_sweep(vectors: Vec<Vec<i32>>, strategy: Strategy) -> Vec<OracleOutcome> {
    strategy.map(vectors, |v| {
        let ctx = RingContext::rational(v.len());
        let methods_agree =
            (0..v.len()).all(|j| alpha_for_vector(ctx, &v, j) == alpha_by_entry_enumeration(ctx, &v, j));
        OracleOutcome {
            telescopes: telescoping_check(&v).is_ok(),
            methods_agree,
            v,
        }
    })
}

/// The wedge-contraction map `Σ xⱼ eⱼ∧ + Σ wⱼ ιⱼ` written directly as a matrix.
pub fn wedge_contraction(x: &[LaurentPoly], w: &[LaurentPoly]) -> Endomorphism {
    assert_eq!(x.len(), w.len(), "one x and one w per generator");
    let k = x.len();
    let ctx = x.first().map(LaurentPoly::ctx).expect("at least one generator");
    let mut entries = Vec::new();
    for i in 0..(1u32 << k) as Mask {
        for j in 0..k {
            let bit = 1 << j;
            let negative = (i & (bit - 1)).count_ones() % 2 == 1;
            let (target, coeff) = if i & bit == 0 { (i | bit, &x[j]) } else { (i & !bit, &w[j]) };
            if !coeff.is_zero() {
                entries.push((target, i, if negative { coeff.neg() } else { coeff.clone() }));
            }
        }
    }
    Endomorphism::from_entries(ctx, k, entries).expect("entries built in range")
}

/// `xⱼ = zⱼ - z̲ⱼ` and `wⱼ = Σᵢ cᵢ α^i_j`.
pub fn tilde_d_coefficients(
    fan: &ToricFanoData,
    pot: &PotentialW,
    strategy: Strategy,
) -> (Vec<LaurentPoly>, Vec<LaurentPoly>) {
    let ctx = pot.ctx();
    let table = AlphaTable::compute(fan, ctx, strategy);
    let x = (0..fan.n()).map(|j| LaurentPoly::difference(ctx, j)).collect();
    let w = (0..fan.n())
        .map(|j| {
            let mut acc = LaurentPoly::zero(ctx);
            for i in 0..fan.m() {
                let a = table.get(i, j);
                if !a.is_zero() {
                    acc = &acc + &a.scale(&pot.c[i]).expect("same field");
                }
            }
            acc
        })
        .collect();
    (x, w)
}

/// Build `d̃` and verify `d̃² = (W(z) - W(z̲))·Id`.
pub fn build_tilde_d(fan: &ToricFanoData, pot: &PotentialW) -> Result<MatrixFactorization, MfFailure> {
    build_tilde_d_with(fan, pot, Strategy::default())
}

pub fn build_tilde_d_with(
    fan: &ToricFanoData,
    pot: &PotentialW,
    strategy: Strategy,
) -> Result<MatrixFactorization, MfFailure> {
    let (x, w) = tilde_d_coefficients(fan, pot, strategy);
    let endo = wedge_contraction(&x, &w);
    let lambda = crate::exterior::mf_verify_with(&endo, &pot.w, strategy)?;
    let expected = pot.w_at_zbar();
    if lambda != expected {
        return Err(MfFailure::LambdaNotZFree {
            scalar: &pot.w - &lambda,
            lambda,
        });
    }
    Ok(MatrixFactorization {
        endo,
        potential: pot.w.clone(),
        lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::build_potential;

    fn parse(n: usize, text: &str) -> LaurentPoly {
        LaurentPoly::parse(RingContext::rational(n), text).unwrap()
    }

    #[test]
    fn p2_alphas() {
        let ctx = RingContext::rational(2);
        assert_eq!(alpha_for_vector(ctx, &[-1, -1], 0), parse(2, "-z1^-1*z2^-1*u1^-1"));
        assert_eq!(alpha_for_vector(ctx, &[-1, -1], 1), parse(2, "-z2^-1*u1^-1*u2^-1"));
        for method in [AlphaMethod::ClosedForm, AlphaMethod::EntryEnumeration] {
            assert!(telescoping_check_with(&[-1, -1], method).is_ok());
        }
    }

    #[test]
    fn basis_rows_are_kronecker_deltas() {
        for n in 1..=5 {
            let ctx = RingContext::rational(n);
            for i in 0..n {
                let mut v = vec![0; n];
                v[i] = 1;
                for j in 0..n {
                    let expected = if i == j { LaurentPoly::one(ctx) } else { LaurentPoly::zero(ctx) };
                    assert_eq!(alpha_for_vector(ctx, &v, j), expected);
                    assert_eq!(alpha_by_entry_enumeration(ctx, &v, j), expected);
                }
            }
        }
    }

    #[test]
    fn floor_branch_examples() {
        assert!(telescoping_check(&[2, -1]).is_ok());
        let ctx = RingContext::rational(2);
        for j in 0..2 {
            assert_eq!(alpha_for_vector(ctx, &[2, 1], j), alpha_by_entry_enumeration(ctx, &[2, 1], j));
        }
        assert_eq!(alpha_by_entry_enumeration(ctx, &[2, 1], 0).num_terms(), 2);
    }

    #[test]
    fn plain_floor_would_fail_on_equal_ratios() {
        // v = (2, 2) lands both hypertori on the same entry point; the tie-break decides.
        assert!(telescoping_check(&[2, 2]).is_ok());
        assert_eq!(floor_count(&[2, 2], 1, 1, 0), 0);
        assert_eq!(floor_count(&[2, 2], 1, 0, 1), 1);
        assert_eq!(floor_count(&[2, -2], 1, 1, 0), 1);
    }

    #[test]
    fn exhaustive_small_sweep() {
        for n in 1..=2 {
            let outcomes = oracle_sweep(all_vectors(n, 3), Strategy::Sequential);
            assert_eq!(outcomes.len(), 7usize.pow(n as u32) - 1);
            assert!(outcomes.iter().all(OracleOutcome::passed));
        }
    }

    #[test]
    fn projective_space_contraction_coefficients() {
        for n in 1..=4 {
            let fan = ToricFanoData::projective(n);
            let pot = build_potential(&fan);
            let (_, w) = tilde_d_coefficients(&fan, &pot, Strategy::Sequential);
            for (i, wi) in w.iter().enumerate() {
                let denom: Vec<String> = (0..=i)
                    .map(|l| format!("u{}^-1", l + 1))
                    .chain((i..n).map(|l| format!("z{}^-1", l + 1)))
                    .collect();
                let expected = parse(n, &format!("T - T*{}", denom.join("*")));
                assert_eq!(wi, &expected, "n={n} i={i}");
            }
            let mf = build_tilde_d(&fan, &pot).unwrap();
            assert_eq!(mf.lambda, pot.w_at_zbar());
        }
    }

    #[test]
    fn presets_verify() {
        for name in ["p1", "p2", "p3", "p1p1", "hirzebruch_f1"] {
            let fan = ToricFanoData::preset(name).unwrap();
            let pot = build_potential(&fan);
            let mf = build_tilde_d(&fan, &pot).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(mf.endo.is_odd());
        }
    }

    #[test]
    fn setting_zbar_to_z_squares_to_zero() {
        let fan = ToricFanoData::preset("hirzebruch_f1").unwrap();
        let pot = build_potential(&fan);
        let mf = build_tilde_d(&fan, &pot).unwrap();
        let collapsed = mf.endo.map_entries(|p| Ok(p.zbar_to_z())).unwrap();
        assert!(collapsed.square().is_zero());
    }

    #[test]
    fn wedge_contraction_matches_operator_sum() {
        let ctx = RingContext::rational(2);
        let x = vec![parse(2, "z1 - u1"), parse(2, "3*z2")];
        let w = vec![parse(2, "T"), parse(2, "u2^-1")];
        let mut sum = Endomorphism::zero(ctx, 2);
        for j in 0..2 {
            sum = sum
                .try_add(&Endomorphism::wedge_op(ctx, 2, j + 1).scale(&x[j]).unwrap())
                .unwrap()
                .try_add(&Endomorphism::contract_op(ctx, 2, j + 1).scale(&w[j]).unwrap())
                .unwrap();
        }
        assert_eq!(wedge_contraction(&x, &w), sum);
    }
}
