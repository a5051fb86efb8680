//! Algebraic laws of the noncommutative polynomials, checked on random input.

use num_bigint::BigInt;
use posetlab_core::ncpoly::{a, ab_expand, b, c, cd_contract, d, derivation_g, pyr_op, AnyPoly, NcPoly, Word};
use posetlab_core::{AbPoly, AbWord, CdPoly, CdWord};
use proptest::prelude::*;

fn cd_word(max_degree: usize) -> impl Strategy<Value = CdWord> {
    (0..=max_degree).prop_flat_map(|deg| {
        let words = CdWord::all_of_degree(deg);
        (0..words.len()).prop_map(move |i| words[i])
    })
}

fn homogeneous_cd(max_degree: usize) -> impl Strategy<Value = CdPoly> {
    (0..=max_degree).prop_flat_map(|deg| {
        let words = CdWord::all_of_degree(deg);
        prop::collection::vec((0..words.len(), -40i64..=40), 1..6).prop_map(move |terms| {
            NcPoly::from_terms(terms.into_iter().map(|(i, k)| (words[i], BigInt::from(k))))
        })
    })
}

fn any_cd() -> impl Strategy<Value = CdPoly> {
    prop::collection::vec((cd_word(6), -40i64..=40), 0..6)
        .prop_map(|terms| NcPoly::from_terms(terms.into_iter().map(|(w, k)| (w, BigInt::from(k)))))
}

fn any_ab() -> impl Strategy<Value = AbPoly> {
    prop::collection::vec((prop::collection::vec(0u8..2, 0..7), -40i64..=40), 0..6).prop_map(|terms| {
        NcPoly::from_terms(terms.into_iter().map(|(l, k)| (AbWord::from_letters(&l), BigInt::from(k))))
    })
}

/// `c ↦ a + b`, `d ↦ ab + ba`, letter by letter.
fn expand_by_substitution(p: &CdPoly) -> AbPoly {
    let c_ab = &a() + &b();
    let d_ab = &(&a() * &b()) + &(&b() * &a());
    p.map_words(|w| w.letters().fold(AbPoly::one(), |acc, l| &acc * if l == 0 { &c_ab } else { &d_ab }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn contraction_inverts_expansion(p in homogeneous_cd(8)) {
        prop_assert_eq!(cd_contract(&ab_expand(&p)).unwrap(), p);
    }

    #[test]
    fn expansion_is_substitution(p in any_cd()) {
        prop_assert_eq!(ab_expand(&p), expand_by_substitution(&p));
    }

    #[test]
    fn expansion_is_multiplicative(p in any_cd(), q in any_cd()) {
        prop_assert_eq!(ab_expand(&(&p * &q)), &ab_expand(&p) * &ab_expand(&q));
    }

    #[test]
    fn multiplication_is_associative_and_distributive(p in any_ab(), q in any_ab(), r in any_ab()) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&(&p - &p)).is_zero());
    }

    #[test]
    fn g_is_a_derivation(p in any_cd(), q in any_cd()) {
        let lhs = derivation_g(&(&p * &q));
        let rhs = &(&derivation_g(&p) * &q) + &(&p * &derivation_g(&q));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pyr_is_wc_plus_g(p in any_cd()) {
        prop_assert_eq!(pyr_op(&p), &(&p * &c()) + &derivation_g(&p));
    }

    #[test]
    fn text_format_round_trips(p in any_cd(), q in any_ab()) {
        prop_assert_eq!(p.to_string().parse::<CdPoly>().unwrap(), p.clone());
        prop_assert_eq!(q.to_string().parse::<AbPoly>().unwrap(), q.clone());
        if !p.is_zero() {
            prop_assert_eq!(AnyPoly::parse(&p.to_string()).unwrap(), AnyPoly::Cd(p));
        }
    }
}

#[test]
fn g_on_generators() {
    assert_eq!(derivation_g(&c()), d());
    assert_eq!(derivation_g(&d()), &c() * &d());
}

#[test]
fn non_eulerian_words_do_not_contract() {
    assert!(cd_contract(&a()).is_err());
    assert!(cd_contract(&(&a() * &b())).is_err());
    assert!(cd_contract(&(&a() + &(&a() * &b()))).is_err());
}
