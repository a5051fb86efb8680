//! Library results against brute-force oracles written independently here:
//! flag f-vectors by chain enumeration, Möbius functions by recursion, and
//! Betti numbers by dense elimination modulo a prime.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use posetlab_core::bitset::BitSet;
use posetlab_core::constructions::{boolean_algebra, polygon, pyr_poset, with_top};
use posetlab_core::corpus::corpus;
use posetlab_core::flag::{ab_index, cd_index};
use posetlab_core::homology::{order_complex_simplicial, reduced_homology, HomologyProfile};
use posetlab_core::ncpoly::{ab_expand, AbPoly, AbWord, Word};
use posetlab_core::sheaf::CdExtractor;
use posetlab_core::{CdPoly, CdWord, ElementId, GradedPoset};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `f[S]`: chains `0̂ < x_1 < ... < x_k` with rank set `S` (bit `i−1` for rank `i`).
fn flag_f(p: &GradedPoset) -> Vec<i64> {
    fn go(p: &GradedPoset, x: ElementId, mask: usize, f: &mut [i64]) {
        f[mask] += 1;
        for y in p.elements() {
            if p.lt(x, y) {
                go(p, y, mask | 1 << (p.rank_of(y) - 1), f);
            }
        }
    }
    let mut f = vec![0; 1 << p.rank()];
    go(p, ElementId::BOTTOM, 0, &mut f);
    f
}

/// `Σ_S h_S u_S` with `u_S` having `b` at the positions of `S`, read left to right.
fn brute_ab(p: &GradedPoset) -> AbPoly {
    let n = p.rank();
    let f = flag_f(p);
    let mut out = AbPoly::zero();
    for s in 0..1usize << n {
        let mut h = 0i64;
        let mut t = s;
        loop {
            let sign = if (s ^ t).count_ones() % 2 == 0 { 1 } else { -1 };
            h += sign * f[t];
            if t == 0 {
                break;
            }
            t = (t - 1) & s;
        }
        let letters: Vec<u8> = (0..n).map(|i| ((s >> i) & 1) as u8).collect();
        out.add_term(AbWord::from_letters(&letters), BigInt::from(h));
    }
    out
}

/// Möbius function on `P ∪ {1̂}` by the defining recursion.
fn is_eulerian_by_mobius(p: &GradedPoset) -> bool {
    let q = with_top(p).poset;
    let mut mu: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    let mut order: Vec<ElementId> = q.elements().collect();
    order.sort_by_key(|&x| q.rank_of(x));
    for &x in &order {
        for &y in &order {
            if !q.le(x, y) {
                continue;
            }
            let v = if x == y {
                1
            } else {
                -order.iter().filter(|&&z| q.le(x, z) && q.lt(z, y)).map(|z| mu[&(x.0, z.0)]).sum::<i64>()
            };
            mu.insert((x.0, y.0), v);
            let expected = if (q.rank_of(y) - q.rank_of(x)) % 2 == 0 { 1 } else { -1 };
            if v != expected {
                return false;
            }
        }
    }
    true
}

const PRIME: i64 = 1_000_000_007;

fn rank_mod_p(mut rows: Vec<Vec<i64>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, pivot);
        let inv = pow_mod(rows[rank][c], PRIME - 2);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let factor = rows[r][c] * inv % PRIME;
                for k in 0..cols {
                    rows[r][k] = (rows[r][k] - factor * rows[rank][k]).rem_euclid(PRIME);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: i64, mut e: i64) -> i64 {
    let mut acc = 1;
    b = b.rem_euclid(PRIME);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % PRIME;
        }
        b = b * b % PRIME;
        e >>= 1;
    }
    acc
}

/// Reduced Betti numbers of the order complex of `P∖{0̂}`, from the chains
/// directly, with the empty simplex in degree −1.
fn brute_betti(p: &GradedPoset) -> Vec<usize> {
    let mut by_size: Vec<Vec<Vec<usize>>> = vec![vec![vec![]]];
    fn go(p: &GradedPoset, chain: &mut Vec<usize>, by_size: &mut Vec<Vec<Vec<usize>>>) {
        for y in p.elements().skip(1) {
            if chain.last().map_or(true, |&x| p.lt(ElementId(x), y)) {
                chain.push(y.0);
                if by_size.len() <= chain.len() {
                    by_size.push(Vec::new());
                }
                by_size[chain.len()].push(chain.clone());
                go(p, chain, by_size);
                chain.pop();
            }
        }
    }
    go(p, &mut Vec::new(), &mut by_size);
    let index: Vec<BTreeMap<Vec<usize>, usize>> =
        by_size.iter().map(|s| s.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect()).collect();
    // boundary from size k to size k − 1
    let ranks: Vec<usize> = (0..=by_size.len())
        .map(|k| {
            if k == 0 || k >= by_size.len() {
                return 0;
            }
            let mut rows = vec![vec![0i64; by_size[k].len()]; by_size[k - 1].len()];
            for (j, s) in by_size[k].iter().enumerate() {
                for drop in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(drop);
                    let sign = if drop % 2 == 0 { 1 } else { PRIME - 1 };
                    rows[index[k - 1][&face]][j] = sign;
                }
            }
            rank_mod_p(rows)
        })
        .collect();
    let mut betti: Vec<usize> = (0..by_size.len()).map(|k| by_size[k].len() - ranks[k] - ranks[k + 1]).collect();
    while betti.last() == Some(&0) {
        betti.pop();
    }
    betti
}

/// The face poset of a path on three vertices.
fn path() -> GradedPoset {
    let covers = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (2, 5), (3, 5)];
    GradedPoset::from_covers(2, vec![0, 1, 1, 1, 2, 2], &covers).unwrap()
}

fn minus_a_facet(p: &GradedPoset) -> GradedPoset {
    let mut keep = BitSet::full(p.len());
    keep.remove(p.maximal_elements()[0].0);
    p.ideal(&keep).unwrap().poset
}

fn samples(max_rank: usize) -> Vec<(String, GradedPoset)> {
    let mut out: Vec<(String, GradedPoset)> = corpus(max_rank).into_iter().map(|e| (e.name, e.poset)).collect();
    out.push(("path".into(), path()));
    out.push(("boolean4 minus a facet".into(), minus_a_facet(&boolean_algebra(4))));
    out.push(("cube minus a facet".into(), minus_a_facet(&posetlab_core::corpus::cube())));
    out
}

#[test]
fn ab_index_matches_flag_counts() {
    for (name, p) in samples(4) {
        assert_eq!(ab_index(&p), brute_ab(&p), "{name}");
    }
}

#[test]
fn cd_index_exists_exactly_for_eulerian_posets() {
    for (name, p) in samples(4) {
        let eulerian = is_eulerian_by_mobius(&p);
        assert_eq!(p.is_eulerian(), eulerian, "{name}");
        match cd_index(&p) {
            Ok(cd) => {
                assert!(eulerian, "{name}");
                assert_eq!(ab_expand(&cd), brute_ab(&p), "{name}");
            }
            Err(_) => assert!(!eulerian, "{name}"),
        }
    }
}

#[test]
fn betti_numbers_match_elimination_mod_p() {
    for (name, p) in samples(3) {
        let lib = reduced_homology(&order_complex_simplicial(&p));
        assert_eq!(lib, HomologyProfile::from_betti(brute_betti(&p)), "{name}");
    }
}

#[test]
fn spheres_and_balls_by_hand() {
    // polygon: a circle, so H1 only
    assert_eq!(brute_betti(&polygon(6)), vec![0, 0, 1]);
    // a ball is acyclic
    assert!(brute_betti(&path()).is_empty());
    assert!(brute_betti(&minus_a_facet(&boolean_algebra(4))).is_empty());
    // boundary of the tetrahedron: a 2-sphere
    assert_eq!(brute_betti(&boolean_algebra(4)), vec![0, 0, 0, 1]);
}

#[test]
fn polygon_values_by_hand() {
    // rank 2 with m vertices and m edges: h = (1, m−1, m−1, 1)
    for m in 2..=9usize {
        let mut expected = AbPoly::zero();
        for (w, c) in [("aa", 1), ("ab", m as i64 - 1), ("ba", m as i64 - 1), ("bb", 1)] {
            expected.add_term(posetlab_core::ncpoly::parse_word(w).unwrap(), BigInt::from(c));
        }
        assert_eq!(brute_ab(&polygon(m)), expected);
        assert_eq!(ab_index(&polygon(m)), expected);
    }
}

#[test]
fn sheaf_coefficients_reproduce_flag_counts() {
    let posets = [
        polygon(3),
        polygon(5),
        boolean_algebra(4),
        pyr_poset(&polygon(4)).unwrap().poset,
        posetlab_core::corpus::cube(),
    ];
    for p in posets {
        let mut ex = CdExtractor::new(&p).unwrap();
        let mut cd = CdPoly::zero();
        for w in CdWord::all_of_degree(p.rank()) {
            let k = ex.coefficient(&w, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
            cd.add_term(w, BigInt::from(k));
        }
        assert_eq!(ab_expand(&cd), brute_ab(&p), "{p:?}");
    }
}
