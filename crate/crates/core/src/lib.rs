//! Exact construction and verification of matrix factorizations of toric
//! Landau–Ginzburg potentials.
//!
//! The pipeline runs fan data → potential `W = Σ cᵢ z^{vᵢ}` → the
//! wedge-contraction factorization `d̃ = Σ (zᵢ - z̲ᵢ) eᵢ∧ + Σ wⱼ ιⱼ` on the
//! exterior algebra, and checks `d̃² = (W(z) - W(z̲))·Id` symbolically.

pub mod builder;
pub mod critical;
pub mod error;
pub mod exec;
pub mod exterior;
pub mod laurent;
pub mod quantum;
pub mod report;
pub mod scalar;
pub mod toric;
pub mod zoo;

pub use error::{AlgebraError, FanError};
pub use laurent::{ExponentVector, LaurentPoly, RingContext};
pub use scalar::{BaseField, Exponent, FieldElement, NovikovScalar, Valuation};
pub use toric::{build_potential, build_potential_in, PotentialW, Ray, ToricFanoData};
pub use exterior::{mf_verify, Endomorphism, ExtElement, Mask, MatrixFactorization, MfFailure};
pub use builder::{alpha_by_entry_enumeration, alpha_closed_form, build_tilde_d, telescoping_check, AlphaTable};
pub use critical::{generator_at_point, jacobian_system, solve_critical_points, CriticalPoint, SolverConfig};
pub use exec::Strategy;
pub use quantum::{apply_quantum_basis, extract_g, synthesize_d_minus3, QuantumBasisChange};
pub use report::VerificationReport;
