//! Fan data and the toric potential `W = Σ cᵢ z^{vᵢ}` with `cᵢ = T^{⟨u,vᵢ⟩ - λᵢ}`.
//!
//! `T` is the rescaled Novikov variable: exponents are stored as `⟨u,vᵢ⟩ - λᵢ`
//! without a `2π` factor, and numerical work uses `T = e^{-1}`.

use std::path::Path;

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::FanError;
use crate::laurent::{LaurentPoly, RingContext};
use crate::scalar::{parse_exponent, BaseField, Exponent, NovikovScalar};

/// One ray `vᵢ` of the fan with its support constant `λᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ray {
    pub v: Vec<i32>,
    pub lambda: Exponent,
}

/// Validated fan data. The first `n` rays are the standard basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricFanoData {
    n: usize,
    rays: Vec<Ray>,
    basepoint: Vec<Exponent>,
    /// `original_index[i]` is the position of ray `i` in the input document.
    original_index: Vec<usize>,
    basis_changed: bool,
}

#[derive(Serialize, Deserialize)]
struct FanDocument {
    n: usize,
    rays: Vec<RayDocument>,
    basepoint: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct RayDocument {
    v: Vec<i32>,
    lambda: String,
}

fn parse_rational(text: &str) -> Result<Exponent, FanError> {
    parse_exponent(text).ok_or_else(|| FanError::Malformed(format!("`{text}` is not a rational")))
}

impl ToricFanoData {
    /// Validate raw data, relabeling and changing lattice basis so that the
    /// first `n` rays become `e₁..eₙ`.
    pub fn new(n: usize, rays: Vec<Ray>, basepoint: Vec<Exponent>) -> Result<Self, FanError> {
        if n == 0 {
            return Err(FanError::Malformed("dimension must be positive".into()));
        }
        if rays.len() < n {
            return Err(FanError::TooFewRays { n, m: rays.len() });
        }
        if basepoint.len() != n {
            return Err(FanError::Malformed(format!(
                "basepoint has length {}, expected {n}",
                basepoint.len()
            )));
        }
        for (index, r) in rays.iter().enumerate() {
            if r.v.len() != n {
                return Err(FanError::RayLength {
                    index: index + 1,
                    expected: n,
                    got: r.v.len(),
                });
            }
            if r.v.iter().all(|&a| a == 0) {
                return Err(FanError::Malformed(format!("ray {} is zero", index + 1)));
            }
        }
        for a in 0..rays.len() {
            for b in a + 1..rays.len() {
                if rays[a].v == rays[b].v {
                    return Err(FanError::DuplicateRay {
                        first: a + 1,
                        second: b + 1,
                    });
                }
            }
        }
        let first_det = det(&rays[..n].iter().map(|r| r.v.clone()).collect::<Vec<_>>());
        let order = if first_det.abs() == 1 {
            (0..rays.len()).collect::<Vec<_>>()
        } else {
            find_unimodular_basis(&rays, n).ok_or(FanError::NotIntegralBasis { n, det: first_det })?
        };
        let relabeled: Vec<Ray> = order.iter().map(|&i| rays[i].clone()).collect();
        // B has columns v₁..vₙ; new coordinates are v' = B⁻¹v, u' = Bᵀu.
        let b: Vec<Vec<i64>> = (0..n)
            .map(|row| (0..n).map(|col| i64::from(relabeled[col].v[row])).collect())
            .collect();
        let basis_changed = (0..n).any(|r| (0..n).any(|c| b[r][c] != i64::from(r == c)));
        let (rays, basepoint) = if basis_changed {
            let inv = unimodular_inverse(&b);
            let rays = relabeled
                .iter()
                .map(|r| Ray {
                    v: (0..n)
                        .map(|row| {
                            let s: i64 = (0..n).map(|k| inv[row][k] * i64::from(r.v[k])).sum();
                            i32::try_from(s).expect("lattice coordinates fit in i32")
                        })
                        .collect(),
                    lambda: r.lambda,
                })
                .collect();
            let u = (0..n)
                .map(|col| {
                    (0..n).fold(Exponent::zero(), |acc, k| {
                        acc + basepoint[k] * Exponent::from_integer(b[k][col])
                    })
                })
                .collect();
            (rays, u)
        } else {
            (relabeled, basepoint)
        };
        let fan = Self {
            n,
            rays,
            basepoint,
            original_index: order,
            basis_changed,
        };
        for i in 0..fan.m() {
            let slack = fan.exponent(i);
            if slack <= Exponent::zero() {
                return Err(FanError::NotInterior {
                    index: fan.original_index[i] + 1,
                    slack: slack.to_string(),
                });
            }
        }
        Ok(fan)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.rays.len()
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i32] {
        &self.rays[i].v
    }

    pub fn basepoint(&self) -> &[Exponent] {
        &self.basepoint
    }

    pub fn original_index(&self) -> &[usize] {
        &self.original_index
    }

    /// Whether a relabeling or lattice change was applied on construction.
    pub fn was_normalized(&self) -> bool {
        self.basis_changed || self.original_index.iter().enumerate().any(|(i, &o)| i != o)
    }

    /// `⟨u, vᵢ⟩ - λᵢ`, the `T`-exponent of `cᵢ` (0-based `i`).
    pub fn exponent(&self, i: usize) -> Exponent {
        let r = &self.rays[i];
        let pairing = r
            .v
            .iter()
            .zip(&self.basepoint)
            .fold(Exponent::zero(), |acc, (&a, u)| acc + *u * Exponent::from_integer(i64::from(a)));
        pairing - r.lambda
    }

    /// `s_{i,j} = sign(v_{i,j})`, 0-based indices.
    pub fn sign(&self, i: usize, j: usize) -> i32 {
        self.rays[i].v[j].signum()
    }

    pub fn ring(&self, field: BaseField) -> RingContext {
        RingContext::new(self.n, field)
    }

    pub fn from_json(text: &str) -> Result<Self, FanError> {
        let doc: FanDocument = serde_json::from_str(text).map_err(|e| FanError::Malformed(e.to_string()))?;
        Self::from_document(doc)
    }

    pub fn from_toml(text: &str) -> Result<Self, FanError> {
        let doc: FanDocument = toml::from_str(text).map_err(|e| FanError::Malformed(e.to_string()))?;
        Self::from_document(doc)
    }

    /// Read a fan file; `.toml` selects TOML, anything else is parsed as JSON.
    pub fn from_path(path: &Path) -> Result<Self, FanError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| FanError::Malformed(format!("{}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e == "toml") {
            Self::from_toml(&text)
        } else {
            Self::from_json(&text)
        }
    }

    fn from_document(doc: FanDocument) -> Result<Self, FanError> {
        let rays = doc
            .rays
            .into_iter()
            .map(|r| {
                Ok(Ray {
                    v: r.v,
                    lambda: parse_rational(&r.lambda)?,
                })
            })
            .collect::<Result<Vec<_>, FanError>>()?;
        let basepoint = doc
            .basepoint
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(doc.n, rays, basepoint)
    }

    fn to_document(&self) -> FanDocument {
        FanDocument {
            n: self.n,
            rays: self
                .rays
                .iter()
                .map(|r| RayDocument {
                    v: r.v.clone(),
                    lambda: r.lambda.to_string(),
                })
                .collect(),
            basepoint: self.basepoint.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("fan serializes")
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.to_document()).expect("fan serializes")
    }

    /// Named example fans with the monotone (equal-area) base point, `k = 1`.
    pub fn preset(name: &str) -> Result<Self, FanError> {
        let int = |k: i64| Exponent::from_integer(k);
        let ray = |v: &[i32], lambda: i64| Ray {
            v: v.to_vec(),
            lambda: int(lambda),
        };
        match name {
            "p1" | "p2" | "p3" | "p4" => {
                let n: usize = name[1..].parse().expect("digit");
                Ok(Self::projective(n))
            }
            "p1p1" => Self::new(
                2,
                vec![ray(&[1, 0], 0), ray(&[0, 1], 0), ray(&[-1, 0], -2), ray(&[0, -1], -2)],
                vec![int(1), int(1)],
            ),
            "p1_x4" => {
                let mut rays = Vec::new();
                for sign in [1, -1] {
                    for i in 0..4 {
                        let mut v = vec![0; 4];
                        v[i] = sign;
                        rays.push(ray(&v, if sign > 0 { 0 } else { -2 }));
                    }
                }
                Self::new(4, rays, vec![int(1); 4])
            }
            "hirzebruch_f1" => Self::new(
                2,
                vec![ray(&[1, 0], 0), ray(&[0, 1], 0), ray(&[-1, 1], -1), ray(&[0, -1], -3)],
                vec![int(1), int(1)],
            ),
            other => Err(FanError::UnknownPreset(other.to_string())),
        }
    }

    pub const PRESETS: [&'static str; 7] = ["p1", "p2", "p3", "p4", "p1p1", "p1_x4", "hirzebruch_f1"];

    /// `ℂℙⁿ` with rays `e₁..eₙ, -Σeᵢ` and every `cᵢ = T`.
    pub fn projective(n: usize) -> Self {
        let mut rays: Vec<Ray> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                Ray {
                    v,
                    lambda: Exponent::zero(),
                }
            })
            .collect();
        rays.push(Ray {
            v: vec![-1; n],
            lambda: -Exponent::from_integer(n as i64 + 1),
        });
        Self::new(n, rays, vec![Exponent::one(); n]).expect("projective space fan is valid")
    }

    /// A random fan: standard basis followed by `extra` distinct nonzero rays
    /// with entries in `[-max_entry, max_entry]`, and `T`-exponents in `{1/2, 1, 3/2, 2}`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, extra: usize, max_entry: i32) -> Self {
        let mut rays: Vec<Ray> = (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                Ray {
                    v,
                    lambda: Exponent::zero(),
                }
            })
            .collect();
        while rays.len() < n + extra {
            let v: Vec<i32> = (0..n).map(|_| rng.gen_range(-max_entry..=max_entry)).collect();
            if v.iter().all(|&a| a == 0) || rays.iter().any(|r| r.v == v) {
                continue;
            }
            rays.push(Ray {
                v,
                lambda: Exponent::zero(),
            });
        }
        for r in &mut rays {
            r.lambda = -Exponent::new(rng.gen_range(1..=4), 2);
        }
        Self::new(n, rays, vec![Exponent::zero(); n]).expect("random fan is valid")
    }
}

/// The potential and its bookkeeping.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialW {
    pub w: LaurentPoly,
    pub c: Vec<NovikovScalar>,
    pub signs: Vec<Vec<i32>>,
}

impl PotentialW {
    pub fn ctx(&self) -> RingContext {
        self.w.ctx()
    }

    /// `W(z̲)`.
    pub fn w_at_zbar(&self) -> LaurentPoly {
        self.w.z_to_zbar().expect("W involves only z")
    }
}

/// `W = Σ cᵢ z^{vᵢ}` over the rationals.
pub fn build_potential(fan: &ToricFanoData) -> PotentialW {
    build_potential_in(fan, BaseField::Rational)
}

/// `W` over a chosen coefficient field.
pub fn build_potential_in(fan: &ToricFanoData, field: BaseField) -> PotentialW {
    let ctx = fan.ring(field);
    let zeros = vec![0; fan.n()];
    let mut w = LaurentPoly::zero(ctx);
    let mut c = Vec::with_capacity(fan.m());
    for i in 0..fan.m() {
        let ci = NovikovScalar::t_power(field, fan.exponent(i));
        let term = LaurentPoly::monomial(ctx, ci.clone(), fan.ray(i), &zeros).expect("ray length checked");
        w = &w + &term;
        c.push(ci);
    }
    let signs = fan
        .rays()
        .iter()
        .map(|r| r.v.iter().map(|a| a.signum()).collect())
        .collect();
    PotentialW { w, c, signs }
}

fn coordinate_rescaling(fan: &ToricFanoData, ctx: RingContext, sign: i64) -> Vec<LaurentPoly> {
    let mut targets = LaurentPoly::identity_targets(ctx);
    for (i, u) in fan.basepoint().iter().enumerate() {
        let scale = LaurentPoly::t_power(ctx, *u * Exponent::from_integer(sign));
        targets[i] = &scale * &LaurentPoly::z(ctx, i, 1);
    }
    targets
}

/// Rewrite `W` in the coordinates `tᵢ = T^{uᵢ} zᵢ`, giving `Σ T^{-λᵢ} t^{vᵢ}`.
/// The result reuses the `z` slots for `t`.
pub fn hori_vafa_substitute(pot: &PotentialW, fan: &ToricFanoData) -> LaurentPoly {
    pot.w
        .substitute(&coordinate_rescaling(fan, pot.ctx(), -1))
        .expect("monomial substitution")
}

/// Inverse of [`hori_vafa_substitute`].
pub fn hori_vafa_inverse(w_t: &LaurentPoly, fan: &ToricFanoData) -> LaurentPoly {
    w_t.substitute(&coordinate_rescaling(fan, w_t.ctx(), 1))
        .expect("monomial substitution")
}

/// Outcome of the genericity check on entry-point offsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OffsetReport {
    Ok,
    /// `|v_{i,k}| a_j - |v_{i,j}| a_k ≤ 0` for same-sign `j < k` (1-based indices).
    Violation { i: usize, j: usize, k: usize },
    /// `a_j / a_k` equals a ratio of entries of ray `i`, so entry points collide.
    Collision { i: usize, j: usize, k: usize },
}

/// Check the offset genericity condition; exact rationals stand in for the
/// irrationality requirement by excluding every ratio that occurs in the fan.
pub fn validate_offsets(fan: &ToricFanoData, a: &[Exponent]) -> Result<OffsetReport, FanError> {
    if a.len() != fan.n() {
        return Err(FanError::Malformed(format!("expected {} offsets, got {}", fan.n(), a.len())));
    }
    for (index, value) in a.iter().enumerate() {
        if *value <= Exponent::zero() || *value >= Exponent::one() {
            return Err(FanError::OffsetOutOfRange {
                index: index + 1,
                value: value.to_string(),
            });
        }
    }
    for i in 0..fan.m() {
        let v = fan.ray(i);
        for j in 0..fan.n() {
            for k in j + 1..fan.n() {
                if v[j] == 0 || v[k] == 0 {
                    continue;
                }
                let lhs = a[j] * Exponent::from_integer(i64::from(v[k].abs()));
                let rhs = a[k] * Exponent::from_integer(i64::from(v[j].abs()));
                let (i1, j1, k1) = (i + 1, j + 1, k + 1);
                if v[j].signum() == v[k].signum() && lhs <= rhs {
                    return Ok(OffsetReport::Violation { i: i1, j: j1, k: k1 });
                }
                if lhs == rhs {
                    return Ok(OffsetReport::Collision { i: i1, j: j1, k: k1 });
                }
            }
        }
    }
    Ok(OffsetReport::Ok)
}

/// Exact determinant by fraction-free elimination.
fn det(rows: &[Vec<i32>]) -> i64 {
    let n = rows.len();
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| i128::from(x)).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| a[r][k] != 0) else {
            return 0;
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    i64::try_from(sign * a[n - 1][n - 1]).expect("determinant fits in i64")
}

/// Choose `n` rays with determinant ±1, moved to the front in their original order.
fn find_unimodular_basis(rays: &[Ray], n: usize) -> Option<Vec<usize>> {
    let m = rays.len();
    let mut combo: Vec<usize> = (0..n).collect();
    loop {
        let block: Vec<Vec<i32>> = combo.iter().map(|&i| rays[i].v.clone()).collect();
        if det(&block).abs() == 1 {
            let mut order = combo.clone();
            order.extend((0..m).filter(|i| !combo.contains(i)));
            return Some(order);
        }
        // Next combination in lexicographic order.
        let mut pos = n;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            if combo[pos] < m - n + pos {
                break;
            }
        }
        combo[pos] += 1;
        for q in pos + 1..n {
            combo[q] = combo[q - 1] + 1;
        }
    }
}

/// Inverse of an integer matrix with determinant ±1, by rational Gauss–Jordan.
fn unimodular_inverse(b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = b.len();
    let mut a: Vec<Vec<Exponent>> = b
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .map(|&x| Exponent::from_integer(x))
                .chain((0..n).map(|c| Exponent::from_integer(i64::from(r == c))))
                .collect()
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&r| !a[r][k].is_zero()).expect("invertible");
        a.swap(p, k);
        let pivot = a[k][k];
        for x in a[k].iter_mut() {
            *x /= pivot;
        }
        for r in 0..n {
            if r != k && !a[r][k].is_zero() {
                let f = a[r][k];
                for c in 0..2 * n {
                    let delta = f * a[k][c];
                    a[r][c] -= delta;
                }
            }
        }
    }
    a.iter()
        .map(|row| {
            row[n..]
                .iter()
                .map(|x| {
                    debug_assert!(x.is_integer());
                    x.to_integer()
                })
                .collect()
        })
        .collect()
}
