#![allow(dead_code)]

use lgmf_core::{Exponent, FieldElement, LaurentPoly, NovikovScalar, RingContext};
use proptest::prelude::*;

/// `(num, den, twice the T-exponent, z exponents, z̲ exponents)`.
pub type Term = (i64, i64, i64, Vec<i32>, Vec<i32>);

/// One term: `num/den · T^{tn/2} · z^v · z̲^vbar`.
pub fn term(n: usize) -> impl Strategy<Value = Term> {
    (
        -6i64..=6,
        1i64..=4,
        -3i64..=4,
        prop::collection::vec(-2i32..=2, n),
        prop::collection::vec(-2i32..=2, n),
    )
}

pub fn poly(n: usize, max_terms: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(term(n), 0..=max_terms).prop_map(move |terms| build(n, &terms))
}

/// Polynomials without `z̲`.
pub fn z_poly(n: usize, max_terms: usize) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec(term(n), 0..=max_terms).prop_map(move |terms| {
        let terms: Vec<_> = terms
            .into_iter()
            .map(|(a, b, t, v, _)| (a, b, t, v, vec![0; n]))
            .collect();
        build(n, &terms)
    })
}

pub fn build(n: usize, terms: &[Term]) -> LaurentPoly {
    let ctx = RingContext::rational(n);
    let mut out = LaurentPoly::zero(ctx);
    for (num, den, t, v, vbar) in terms {
        let c = NovikovScalar::constant(FieldElement::rational(*num, *den)).shift(Exponent::new(*t, 2));
        out = &out + &LaurentPoly::monomial(ctx, c, v, vbar).unwrap();
    }
    out
}

/// A monomial unit `±T^{t/2} z^v z̲^vbar`.
pub fn unit(n: usize) -> impl Strategy<Value = LaurentPoly> {
    (any::<bool>(), -3i64..=3, prop::collection::vec(-2i32..=2, n), prop::collection::vec(-2i32..=2, n)).prop_map(
        move |(neg, t, v, vbar)| build(n, &[(if neg { -1 } else { 1 }, 1, t, v, vbar)]),
    )
}
