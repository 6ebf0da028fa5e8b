//! Critical points of `W` on the torus and the generators `R` obtained by
//! specializing `z̲` at them.
//!
//! Newton runs in logarithmic coordinates `zᵢ = e^{xᵢ}`, where the system
//! `zᵢ∂ᵢW = Σ c v_i z^v` and its Jacobian `Σ c v_i v_k z^v` are exponential sums.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::builder::{tilde_d_coefficients, wedge_contraction};
use crate::error::AlgebraError;
use crate::exec::Strategy;
use crate::exterior::Endomorphism;
use crate::laurent::{ExponentVector, LaurentPoly};
use crate::scalar::NovikovScalar;
use crate::toric::{PotentialW, ToricFanoData};

/// `(z₁∂₁W, …, zₙ∂ₙW)`, termwise `z∂(c z^v) = v·c z^v`.
pub fn jacobian_system(pot: &PotentialW) -> Vec<LaurentPoly> {
    let ctx = pot.ctx();
    (0..ctx.n)
        .map(|i| {
            let mut out = LaurentPoly::zero(ctx);
            for (e, c) in pot.w.terms() {
                let k = e.get(i);
                if k != 0 {
                    let scaled = c.try_mul(&NovikovScalar::from_int(ctx.field, i64::from(k))).expect("same field");
                    let term = LaurentPoly::monomial(ctx, scaled, e.z_part(), e.zbar_part()).expect("lengths");
                    out = &out + &term;
                }
            }
            out
        })
        .collect()
}

/// A numerically located critical point.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPoint {
    pub point: Vec<Complex64>,
    /// `maxᵢ |zᵢ∂ᵢW|` at the point.
    pub residual: f64,
    /// `W` at the point.
    pub value: Complex64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
    /// Phases per axis; `None` means `2·max|v| + 1`.
    pub phases: Option<usize>,
    /// Second start radius as a multiple of the balanced radius.
    pub radius_factor: f64,
    pub strategy: Strategy,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 60,
            phases: None,
            radius_factor: 0.7,
            strategy: Strategy::default(),
        }
    }
}

/// Solver output with a few diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalSolve {
    pub points: Vec<CriticalPoint>,
    pub starts: usize,
    pub converged_starts: usize,
    /// Starts that hit a numerically singular Jacobian (a degenerate critical point or a bad start).
    pub singular_starts: usize,
}

impl CriticalSolve {
    /// Whether all critical values are pairwise distinct (up to `tol`).
    pub fn values_distinct(&self, tol: f64) -> bool {
        self.points.iter().enumerate().all(|(a, p)| {
            self.points[a + 1..]
                .iter()
                .all(|q| (p.value - q.value).norm() > tol * (1.0 + p.value.norm()))
        })
    }
}

/// `W` specialized at `T = t`, as `(coefficient, exponent)` pairs.
struct NumericPotential {
    n: usize,
    terms: Vec<(Complex64, Vec<f64>)>,
}

impl NumericPotential {
    fn new(pot: &PotentialW, t_value: f64) -> Result<Self, AlgebraError> {
        let terms = pot
            .w
            .terms()
            .map(|(e, c)| Ok((c.specialize(t_value)?, e.z_part().iter().map(|&a| f64::from(a)).collect())))
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        Ok(Self { n: pot.ctx().n, terms })
    }

    fn system(&self, x: &DVector<Complex64>) -> (DVector<Complex64>, DMatrix<Complex64>) {
        let n = self.n;
        let mut f = DVector::zeros(n);
        let mut j = DMatrix::zeros(n, n);
        for (c, v) in &self.terms {
            let dot: Complex64 = v.iter().zip(x.iter()).map(|(a, xi)| xi * a).sum();
            let m = c * dot.exp();
            for i in 0..n {
                f[i] += m * v[i];
                for k in 0..n {
                    j[(i, k)] += m * (v[i] * v[k]);
                }
            }
        }
        (f, j)
    }

    fn residual(&self, x: &DVector<Complex64>) -> f64 {
        self.system(x).0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// False when every term has collapsed relative to its coefficient,
    /// i.e. Newton ran off towards the boundary of the torus.
    fn in_torus(&self, x: &DVector<Complex64>) -> bool {
        let (mut size, mut coeffs) = (0.0, 0.0);
        for (c, v) in &self.terms {
            let dot: f64 = v.iter().zip(x.iter()).map(|(a, xi)| xi.re * a).sum();
            size += c.norm() * dot.exp();
            coeffs += c.norm();
        }
        size > 1e-6 * coeffs
    }

    fn value(&self, x: &DVector<Complex64>) -> Complex64 {
        self.terms
            .iter()
            .map(|(c, v)| {
                let dot: Complex64 = v.iter().zip(x.iter()).map(|(a, xi)| xi * a).sum();
                c * dot.exp()
            })
            .sum()
    }

    /// Log-radius minimizing `Σ |cᵢ| e^{⟨vᵢ, r⟩}`; balances the term sizes.
    fn balanced_log_radius(&self) -> DVector<f64> {
        let n = self.n;
        let mut r = DVector::zeros(n);
        let weights: Vec<(f64, &Vec<f64>)> = self.terms.iter().map(|(c, v)| (c.norm(), v)).collect();
        let objective = |r: &DVector<f64>| -> f64 {
            weights
                .iter()
                .map(|(w, v)| w * v.iter().zip(r.iter()).map(|(a, b)| a * b).sum::<f64>().exp())
                .sum()
        };
        for _ in 0..100 {
            let mut g = DVector::zeros(n);
            let mut h = DMatrix::zeros(n, n);
            for (w, v) in &weights {
                let e = w * v.iter().zip(r.iter()).map(|(a, b)| a * b).sum::<f64>().exp();
                for i in 0..n {
                    g[i] += e * v[i];
                    for k in 0..n {
                        h[(i, k)] += e * v[i] * v[k];
                    }
                }
            }
            if g.norm() < 1e-14 {
                break;
            }
            let Some(step) = h.lu().solve(&g) else { break };
            let f0 = objective(&r);
            let mut s = 1.0;
            while s > 1e-8 && objective(&(&r - &step * s)) > f0 {
                s *= 0.5;
            }
            r -= step * s;
        }
        if r.iter().all(|a| a.is_finite()) {
            r
        } else {
            DVector::zeros(n)
        }
    }
}

enum NewtonOutcome {
    Converged(DVector<Complex64>),
    Singular,
    Diverged,
}

fn newton(sys: &NumericPotential, mut x: DVector<Complex64>, tol: f64, max_iter: usize) -> NewtonOutcome {
    let mut res = sys.residual(&x);
    for _ in 0..max_iter {
        if res < tol {
            if !sys.in_torus(&x) {
                return NewtonOutcome::Diverged;
            }
            // Two polishing steps pin the point down for de-duplication.
            for _ in 0..2 {
                let (f, j) = sys.system(&x);
                if let Some(step) = j.lu().solve(&f) {
                    let candidate = &x - step;
                    if sys.residual(&candidate) <= res {
                        x = candidate;
                        res = sys.residual(&x);
                    }
                }
            }
            return NewtonOutcome::Converged(x);
        }
        let (f, j) = sys.system(&x);
        let Some(step) = j.lu().solve(&f) else {
            return NewtonOutcome::Singular;
        };
        if step.iter().any(|c| !c.is_finite()) {
            return NewtonOutcome::Singular;
        }
        // Damped step: halve until the residual does not grow.
        let mut s = 1.0;
        loop {
            let candidate = &x - &step * Complex64::new(s, 0.0);
            let r = sys.residual(&candidate);
            if r.is_finite() && (r < res || s < 1.0 / 64.0) {
                x = candidate;
                res = r;
                break;
            }
            s *= 0.5;
        }
        if x.iter().any(|c| c.re.abs() > 700.0) {
            return NewtonOutcome::Diverged;
        }
    }
    if res < tol && sys.in_torus(&x) {
        NewtonOutcome::Converged(x)
    } else {
        NewtonOutcome::Diverged
    }
}

/// Multi-start Newton on the specialized system; points are de-duplicated
/// within `10·tol` and sorted by coordinates.
pub fn solve_critical_points(
    pot: &PotentialW,
    t_value: f64,
    config: &SolverConfig,
) -> Result<CriticalSolve, AlgebraError> {
    let sys = NumericPotential::new(pot, t_value)?;
    let n = sys.n;
    let max_v = pot.w.terms().flat_map(|(e, _)| e.z_part().iter().map(|a| a.abs())).max().unwrap_or(1).max(1);
    let phases = config.phases.unwrap_or(2 * max_v as usize + 1);
    let base = sys.balanced_log_radius();
    let mut starts = Vec::new();
    for radius_shift in [0.0, config.radius_factor.ln()] {
        let mut idx = vec![0usize; n];
        loop {
            let x: DVector<Complex64> = DVector::from_iterator(
                n,
                (0..n).map(|i| {
                    // Offset the grid slightly so no start sits on a symmetry axis.
                    let theta = TAU * (idx[i] as f64 + 0.1 + 0.03 * i as f64) / phases as f64;
                    Complex64::new(base[i] + radius_shift, theta)
                }),
            );
            starts.push(x);
            let mut pos = 0;
            while pos < n {
                idx[pos] += 1;
                if idx[pos] < phases {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == n {
                break;
            }
        }
    }
    let n_starts = starts.len();
    let outcomes = config
        .strategy
        .map(starts, |x| newton(&sys, x, config.tol, config.max_iter));

    let mut points: Vec<CriticalPoint> = Vec::new();
    let (mut converged, mut singular) = (0, 0);
    for outcome in outcomes {
        match outcome {
            NewtonOutcome::Converged(x) => {
                converged += 1;
                let z: Vec<Complex64> = x.iter().map(|c| c.exp()).collect();
                let duplicate = points.iter().any(|p| {
                    p.point
                        .iter()
                        .zip(&z)
                        .all(|(a, b)| (a - b).norm() < 10.0 * config.tol * (1.0 + a.norm()))
                });
                if !duplicate {
                    points.push(CriticalPoint {
                        residual: sys.residual(&x),
                        value: sys.value(&x),
                        point: z,
                    });
                }
            }
            NewtonOutcome::Singular => singular += 1,
            NewtonOutcome::Diverged => {}
        }
    }
    points.sort_by(|a, b| {
        a.point
            .iter()
            .zip(&b.point)
            .map(|(p, q)| p.re.total_cmp(&q.re).then(p.im.total_cmp(&q.im)))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(CriticalSolve {
        points,
        starts: n_starts,
        converged_starts: converged,
        singular_starts: singular,
    })
}

/// `R` at a critical point: `d̃` with `z̲` and `T` replaced by numbers.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    /// Complex-coefficient matrix in the `z` variables.
    pub endo: Endomorphism,
    /// `W(z̲)` at the point.
    pub lambda: Complex64,
    /// Worst `‖R(z)² - (W(z) - λ)·Id‖∞` over the random test points.
    pub max_error: f64,
    pub test_points: usize,
}

/// Specialize `d̃` at a critical point and test its square numerically at random `z`.
pub fn generator_at_point(
    fan: &ToricFanoData,
    pot: &PotentialW,
    pt: &CriticalPoint,
    t_value: f64,
    test_points: usize,
    seed: u64,
) -> Result<Generator, AlgebraError> {
    let (x, w) = tilde_d_coefficients(fan, pot, Strategy::Sequential);
    let at_point = |p: &LaurentPoly| p.specialize_zbar(&pt.point, t_value);
    let x = x.iter().map(at_point).collect::<Result<Vec<_>, _>>()?;
    let w = w.iter().map(at_point).collect::<Result<Vec<_>, _>>()?;
    let endo = wedge_contraction(&x, &w);
    let ones = vec![Complex64::new(1.0, 0.0); pot.ctx().n];
    let lambda = pot.w.eval_numeric(&pt.point, &ones, t_value)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_error: f64 = 0.0;
    for _ in 0..test_points {
        let z: Vec<Complex64> = (0..fan.n())
            .map(|_| Complex64::from_polar(rng.gen_range(0.5..1.5), rng.gen_range(0.0..TAU)))
            .collect();
        let m = numeric_matrix(&endo, &z)?;
        let w_z = pot.w.eval_numeric(&z, &ones, t_value)?;
        let target = DMatrix::<Complex64>::identity(m.nrows(), m.ncols()) * (w_z - lambda);
        let err = (&m * &m - target).iter().map(|c| c.norm()).fold(0.0, f64::max);
        max_error = max_error.max(err);
    }
    Ok(Generator {
        endo,
        lambda,
        max_error,
        test_points,
    })
}

/// Evaluate a matrix of polynomials in `z` (no `z̲` dependence) at a point.
pub fn numeric_matrix(endo: &Endomorphism, z: &[Complex64]) -> Result<DMatrix<Complex64>, AlgebraError> {
    let size = endo.size();
    let ones = vec![Complex64::new(1.0, 0.0); z.len()];
    let mut m = DMatrix::zeros(size, size);
    for (r, c, p) in endo.entries() {
        m[(r as usize, c as usize)] = p.eval_numeric(z, &ones, 1.0)?;
    }
    Ok(m)
}

/// Confirms that `d̃` at a point is literally of wedge-contraction type.
#[derive(Clone, Debug, PartialEq)]
pub struct DyckerhoffReport {
    /// `d̃` equals `Σ xᵢ eᵢ∧ + Σ wᵢ ιᵢ` assembled from the exterior operators.
    pub wedge_contraction: bool,
    /// `Σ xᵢ wᵢ = W(z) - W(z̲)` exactly.
    pub sum_matches: bool,
    /// Constant coefficient of each `wᵢ` (contains `cᵢ` from the basis rays).
    pub constant_terms: Vec<NovikovScalar>,
    pub x: Vec<LaurentPoly>,
    pub w: Vec<LaurentPoly>,
}

/// Symbolic wedge-contraction check for `n ≤ 4`.
pub fn dyckerhoff_form_report(fan: &ToricFanoData, pot: &PotentialW) -> Result<DyckerhoffReport, AlgebraError> {
    let n = fan.n();
    if n > 4 {
        return Err(AlgebraError::IndexOutOfRange { index: n, bound: 5 });
    }
    let ctx = pot.ctx();
    let (x, w) = tilde_d_coefficients(fan, pot, Strategy::Sequential);
    let direct = wedge_contraction(&x, &w);
    let mut assembled = Endomorphism::zero(ctx, n);
    for j in 0..n {
        assembled = assembled.try_add(&Endomorphism::wedge_op(ctx, n, j + 1).scale(&x[j])?)?;
        assembled = assembled.try_add(&Endomorphism::contract_op(ctx, n, j + 1).scale(&w[j])?)?;
    }
    let mut sum = LaurentPoly::zero(ctx);
    for j in 0..n {
        sum.add_product(&x[j], &w[j])?;
    }
    let zero = ExponentVector::zero(n);
    Ok(DyckerhoffReport {
        wedge_contraction: assembled == direct,
        sum_matches: sum == &pot.w - &pot.w_at_zbar(),
        constant_terms: w.iter().map(|wi| wi.coefficient(&zero)).collect(),
        x,
        w,
    })
}
