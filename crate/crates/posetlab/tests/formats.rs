//! File formats round-trip on random input.

use num_bigint::BigInt;
use posetlab::format::{parse_poly, parse_poset, to_json, MapDoc, PolyDoc, PosetDoc};
use posetlab_core::constructions::{collapse_map, subdivision_target_and_map};
use posetlab_core::corpus::corpus;
use posetlab_core::ncpoly::{AnyPoly, NcPoly, Word};
use posetlab_core::{AbWord, CdWord};
use proptest::prelude::*;

fn any_poly() -> impl Strategy<Value = AnyPoly> {
    let terms = prop::collection::vec((prop::collection::vec(0u8..2, 0..8), -1000i64..=1000), 0..8);
    (any::<bool>(), terms).prop_map(|(ab, terms)| {
        let big = |k: i64| BigInt::from(k) * BigInt::from(10u64).pow(20);
        if ab {
            AnyPoly::Ab(NcPoly::from_terms(terms.into_iter().map(|(l, k)| (AbWord::from_letters(&l), big(k)))))
        } else {
            AnyPoly::Cd(NcPoly::from_terms(terms.into_iter().map(|(l, k)| (CdWord::from_letters(&l), big(k)))))
        }
    })
}

proptest! {
    #[test]
    fn polynomial_documents_round_trip(p in any_poly()) {
        let doc = PolyDoc::from_any(&p);
        let text = to_json(&doc);
        prop_assert_eq!(parse_poly(&text).unwrap(), p.clone());
        prop_assert_eq!(to_json(&PolyDoc::from_any(&parse_poly(&text).unwrap())), text);
        // text without letters reads as a cd-polynomial
        if !matches!(&p, AnyPoly::Ab(q) if q.terms().all(|(w, _)| w.is_empty())) {
            prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
        }
    }

    #[test]
    fn shuffled_poset_documents_parse_the_same(idx in 0usize..20, seed in any::<u64>()) {
        let entries = corpus(3);
        let p = &entries[idx % entries.len()].poset;
        let mut doc = PosetDoc::from_poset(p);
        let mut state = seed;
        for i in (1..doc.elements.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            doc.elements.swap(i, (state >> 33) as usize % (i + 1));
            doc.covers.reverse();
        }
        prop_assert_eq!(&doc.to_poset().unwrap(), p);
    }
}

#[test]
fn corpus_documents_are_byte_stable() {
    for e in corpus(4) {
        let text = to_json(&PosetDoc::from_poset(&e.poset));
        let back = parse_poset(&text).unwrap();
        assert_eq!(back, e.poset, "{}", e.name);
        assert_eq!(to_json(&PosetDoc::from_poset(&back)), text, "{}", e.name);
    }
}

#[test]
fn map_documents_round_trip() {
    for e in corpus(3).into_iter().filter(|e| e.is_lattice) {
        let nu = e.poset.elements().nth(1).unwrap();
        for map in [subdivision_target_and_map(&e.poset, nu).unwrap().1, collapse_map(&e.poset, nu).unwrap()] {
            let text = to_json(&MapDoc::from_map(&map));
            let doc: MapDoc = serde_json::from_str(&text).unwrap();
            assert_eq!(doc.to_map(None, None).unwrap(), map, "{}", e.name);
            // a map document is also read as its target poset
            assert_eq!(&parse_poset(&text).unwrap(), map.target());
        }
    }
}

#[test]
fn incomplete_assignments_are_rejected() {
    let p = corpus(2).remove(0).poset;
    let mut doc = MapDoc::from_map(&posetlab_core::PosetMap::identity(&p));
    doc.assignment.pop();
    assert!(doc.to_map(None, None).is_err());
    doc.assignment.push([0, 0]);
    assert!(doc.to_map(None, None).is_err());
}
