mod common;

use common::{poly, unit, z_poly};
use lgmf_core::{Exponent, LaurentPoly, Valuation};
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

const SEED: [u8; 32] = [7; 32];

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::from_seed(RngAlgorithm::ChaCha, &SEED),
    )
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= 1e-9 * (1.0 + a.norm().max(b.norm()))
}

fn point() -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((0.5f64..1.5, 0.0f64..std::f64::consts::TAU), 2)
        .prop_map(|v| v.into_iter().map(|(r, t)| Complex64::from_polar(r, t)).collect())
}

#[test]
fn ring_axioms() {
    runner(200)
        .run(&(poly(2, 4), poly(2, 4), poly(2, 4)), |(a, b, c)| {
            let zero = LaurentPoly::zero(a.ctx());
            let one = LaurentPoly::one(a.ctx());
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &zero, a.clone());
            prop_assert_eq!(&a * &one, a.clone());
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!(a.pow(2), &a * &a);
            Ok(())
        })
        .unwrap();
}

#[test]
fn text_round_trip() {
    runner(200)
        .run(&poly(2, 5), |a| {
            prop_assert_eq!(LaurentPoly::parse(a.ctx(), &a.to_text()).unwrap(), a);
            Ok(())
        })
        .unwrap();
}

#[test]
fn evaluation_is_a_homomorphism() {
    runner(200)
        .run(&(poly(2, 4), poly(2, 4), point(), point(), 0.2f64..1.0), |(a, b, z, zb, t)| {
            let ev = |p: &LaurentPoly| p.eval_numeric(&z, &zb, t).unwrap();
            prop_assert!(close(ev(&(&a + &b)), ev(&a) + ev(&b)));
            prop_assert!(close(ev(&(&a * &b)), ev(&a) * ev(&b)));
            Ok(())
        })
        .unwrap();
}

#[test]
fn specialization_is_a_homomorphism() {
    runner(200)
        .run(&(poly(2, 3), poly(2, 3), point(), 0.2f64..1.0), |(a, b, zb, t)| {
            let s = |p: &LaurentPoly| p.specialize_zbar(&zb, t).unwrap();
            let ones = vec![Complex64::new(1.0, 0.0); 2];
            let probe = vec![Complex64::new(0.8, 0.3), Complex64::new(-0.6, 0.9)];
            let ev = |p: &LaurentPoly| p.eval_numeric(&probe, &ones, 1.0).unwrap();
            prop_assert!(close(ev(&s(&(&a * &b))), ev(&s(&a)) * ev(&s(&b))));
            prop_assert!(close(ev(&s(&(&a + &b))), ev(&s(&a)) + ev(&s(&b))));
            Ok(())
        })
        .unwrap();
}

#[test]
fn substitution_by_units_is_invertible() {
    runner(100)
        .run(&(poly(2, 4), prop::collection::vec(unit(2), 4)), |(a, units)| {
            // zᵢ ↦ uᵢ·zᵢ with z-free, z̲-free units uᵢ = ±T^q; the inverse uses uᵢ⁻¹.
            let ctx = a.ctx();
            let scalars: Vec<LaurentPoly> = units
                .iter()
                .map(|u| {
                    let (_, c) = u.terms().next().unwrap();
                    LaurentPoly::constant(ctx, c.clone())
                })
                .collect();
            let ids = LaurentPoly::identity_targets(ctx);
            let fwd: Vec<_> = ids.iter().zip(&scalars).map(|(v, s)| v * s).collect();
            let back: Vec<_> = ids
                .iter()
                .zip(&scalars)
                .map(|(v, s)| v * &s.inverse_unit().unwrap())
                .collect();
            prop_assert_eq!(a.substitute(&fwd).unwrap().substitute(&back).unwrap(), a.clone());
            prop_assert_eq!(a.substitute(&ids).unwrap(), a);
            Ok(())
        })
        .unwrap();
}

#[test]
fn z_and_zbar_swap_round_trip() {
    runner(100)
        .run(&z_poly(3, 4), |a| {
            prop_assert_eq!(a.z_to_zbar().unwrap().zbar_to_z(), a.clone());
            prop_assert!(a.z_to_zbar().unwrap().is_z_free());
            Ok(())
        })
        .unwrap();
}

#[test]
fn valuation_is_additive() {
    runner(200)
        .run(&(poly(1, 3), poly(1, 3)), |(a, b)| {
            let zero = lgmf_core::ExponentVector::zero(1);
            // Constant parts are Novikov scalars; over ℚ there are no zero divisors.
            let ca = a.coefficient(&zero);
            let cb = b.coefficient(&zero);
            let prod = ca.try_mul(&cb).unwrap();
            let expected = match (ca.valuation(), cb.valuation()) {
                (Valuation::Finite(x), Valuation::Finite(y)) => Valuation::Finite(x + y),
                _ => Valuation::Infinite,
            };
            prop_assert_eq!(prod.valuation(), expected);
            let shifted = ca.shift(Exponent::new(1, 3));
            if let Valuation::Finite(x) = ca.valuation() {
                prop_assert_eq!(shifted.valuation(), Valuation::Finite(x + Exponent::new(1, 3)));
            }
            Ok(())
        })
        .unwrap();
}
