use lgmf_core::builder::{alpha_by_entry_enumeration, alpha_for_vector, telescoping_check};
use lgmf_core::toric::{hori_vafa_inverse, hori_vafa_substitute};
use lgmf_core::{build_potential, build_tilde_d, RingContext, ToricFanoData};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::from_seed(RngAlgorithm::ChaCha, &[23; 32]),
    )
}

fn nonzero_vector() -> impl Strategy<Value = Vec<i32>> {
    (1usize..=5)
        .prop_flat_map(|n| prop::collection::vec(-3i32..=3, n))
        .prop_filter("nonzero", |v| v.iter().any(|&a| a != 0))
}

#[test]
fn telescoping_and_oracles_agree() {
    runner(300)
        .run(&nonzero_vector(), |v| {
            prop_assert!(telescoping_check(&v).is_ok());
            let ctx = RingContext::rational(v.len());
            for j in 0..v.len() {
                prop_assert_eq!(alpha_for_vector(ctx, &v, j), alpha_by_entry_enumeration(ctx, &v, j));
            }
            Ok(())
        })
        .unwrap();
}

#[test]
fn random_fans_square_correctly() {
    runner(25)
        .run(&(2usize..=3, 0usize..=2, any::<u64>()), |(n, extra, seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let fan = ToricFanoData::random(&mut rng, n, extra, 2);
            let pot = build_potential(&fan);
            let mf = build_tilde_d(&fan, &pot).unwrap();
            prop_assert_eq!(mf.lambda, pot.w_at_zbar());
            Ok(())
        })
        .unwrap();
}

#[test]
fn fan_serialization_round_trips() {
    runner(50)
        .run(&(2usize..=4, 0usize..=3, any::<u64>()), |(n, extra, seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let fan = ToricFanoData::random(&mut rng, n, extra, 3);
            prop_assert_eq!(ToricFanoData::from_json(&fan.to_json()).unwrap(), fan.clone());
            prop_assert_eq!(ToricFanoData::from_toml(&fan.to_toml()).unwrap(), fan.clone());
            let pot = build_potential(&fan);
            prop_assert_eq!(hori_vafa_inverse(&hori_vafa_substitute(&pot, &fan), &fan), pot.w);
            Ok(())
        })
        .unwrap();
}
