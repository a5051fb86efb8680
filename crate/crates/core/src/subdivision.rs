//! Subdivision certificates and the cd-index inequalities they imply.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::constructions::{boolean_algebra, PosetMap};
use crate::flag::{cd_index, lambda_nu_prime_cd, near_cd_index, FlagError};
use crate::homology::{HomologyError, LinkWitness, NearGorensteinFailure, PosetHomology};
use crate::ncpoly::{pyr_op, word_string, CdPoly, CdWord};
use crate::poset::{ElementId, GradedPoset, PosetError, Upper};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubdivisionError {
    #[error("source has rank {source_rank}, target has rank {target_rank}")]
    RankMismatch { source_rank: usize, target_rank: usize },
    #[error("source is not Gorenstein*: {0}")]
    SourceNotGorenstein(LinkWitness),
    #[error("target is not Gorenstein*: {0}")]
    TargetNotGorenstein(LinkWitness),
    #[error("not a subdivision: {0}")]
    NotASubdivision(SubdivisionFailure),
    #[error("decomposition sums to {assembled}, source cd-index is {expected}")]
    DecompositionMismatch { assembled: CdPoly, expected: CdPoly },
    #[error("poset is not Gorenstein*: {0}")]
    NotGorensteinStar(LinkWitness),
    #[error("poset is not a lattice")]
    NotALattice,
    #[error("element {0} must satisfy 0̂ < ν")]
    BadElement(usize),
    #[error(transparent)]
    Flag(#[from] FlagError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// Why a fiber pair `(φ⁻¹[0̂,σ], φ⁻¹[0̂,σ))` is not near-Gorenstein* of rank `ρ(σ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiberFailure {
    WrongRank { expected: usize, got: usize },
    Boundary(HomologyError),
    NearGorenstein(NearGorensteinFailure),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubdivisionFailure {
    OrderViolation(ElementId, ElementId),
    NotSurjective(ElementId),
    Fiber { sigma: ElementId, reason: FiberFailure },
}

impl fmt::Display for SubdivisionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubdivisionFailure::OrderViolation(x, y) => write!(f, "{x} ≤ {y} but their images are not ordered"),
            SubdivisionFailure::NotSurjective(t) => write!(f, "{t} is not in the image"),
            SubdivisionFailure::Fiber { sigma, reason } => match reason {
                FiberFailure::WrongRank { expected, got } => {
                    write!(f, "fiber over {sigma} has rank {got}, expected {expected}")
                }
                FiberFailure::Boundary(e) => write!(f, "fiber over {sigma}: {e}"),
                FiberFailure::NearGorenstein(w) => write!(f, "fiber over {sigma}: {w}"),
            },
        }
    }
}

/// Outcome of a subdivision check: `None` means certified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubdivisionReport {
    pub failure: Option<SubdivisionFailure>,
}

impl SubdivisionReport {
    pub fn is_subdivision(&self) -> bool {
        self.failure.is_none()
    }
}

fn require_gorenstein(h: &PosetHomology<'_>) -> Result<(), LinkWitness> {
    let p = h.poset();
    match h.gorenstein_failure_in(&BitSet::full(p.len()), p.rank()) {
        None => Ok(()),
        Some(w) => Err(w),
    }
}

/// Checks order preservation, surjectivity and every fiber pair.
pub fn is_subdivision(phi: &PosetMap) -> Result<SubdivisionReport, SubdivisionError> {
    let (src, tgt) = (phi.source(), phi.target());
    if src.rank() != tgt.rank() {
        return Err(SubdivisionError::RankMismatch { source_rank: src.rank(), target_rank: tgt.rank() });
    }
    let hs = PosetHomology::new(src);
    require_gorenstein(&hs).map_err(SubdivisionError::SourceNotGorenstein)?;
    require_gorenstein(&PosetHomology::new(tgt)).map_err(SubdivisionError::TargetNotGorenstein)?;
    let report = |f| Ok(SubdivisionReport { failure: Some(f) });
    if let Some((x, y)) = phi.order_violation() {
        return report(SubdivisionFailure::OrderViolation(x, y));
    }
    if let Some(&t) = phi.missed().first() {
        return report(SubdivisionFailure::NotSurjective(t));
    }
    for sigma in tgt.elements() {
        if let Some(reason) = fiber_failure(&hs, phi, sigma) {
            return report(SubdivisionFailure::Fiber { sigma, reason });
        }
    }
    Ok(SubdivisionReport { failure: None })
}

fn fiber_failure(hs: &PosetHomology<'_>, phi: &PosetMap, sigma: ElementId) -> Option<FiberFailure> {
    let src = phi.source();
    let closed = phi.preimage_below(sigma, true);
    let open = phi.preimage_below(sigma, false);
    let expected = phi.target().rank_of(sigma);
    let got = closed.iter().map(|x| src.ranks()[x]).max().unwrap_or(0);
    if got != expected {
        return Some(FiberFailure::WrongRank { expected, got });
    }
    match hs.near_gorenstein_failure_in(&closed, &open, expected) {
        Ok(None) => None,
        Ok(Some(w)) => Some(FiberFailure::NearGorenstein(w)),
        Err(e) => Some(FiberFailure::Boundary(e)),
    }
}

/// One summand `Φ_σ̂ · Ψ_{[σ,1̂)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionTerm {
    pub sigma: ElementId,
    pub phi: CdPoly,
    pub upper: CdPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub terms: Vec<DecompositionTerm>,
    pub assembled: CdPoly,
}

impl Decomposition {
    /// First summand with a negative `Φ` coefficient.
    pub fn negative_term(&self) -> Option<&DecompositionTerm> {
        self.terms.iter().find(|t| !t.phi.all_nonnegative())
    }
}

/// `Ψ_source = Σ_σ Φ_σ̂ · Ψ_{[σ,1̂)}` over the target's elements, checked exactly.
pub fn decompose(phi: &PosetMap) -> Result<Decomposition, SubdivisionError> {
    if let Some(f) = is_subdivision(phi)?.failure {
        return Err(SubdivisionError::NotASubdivision(f));
    }
    decompose_unchecked(phi)
}

/// [`decompose`] without the homology certificate; the sum is still compared.
pub fn decompose_unchecked(phi: &PosetMap) -> Result<Decomposition, SubdivisionError> {
    let (src, tgt) = (phi.source(), phi.target());
    let mut terms = Vec::with_capacity(tgt.len());
    let mut assembled = CdPoly::zero();
    for sigma in tgt.elements() {
        let fiber = src.ideal(&phi.preimage_below(sigma, true))?;
        let open = phi.preimage_below(sigma, false);
        let boundary = BitSet::from_indices(
            fiber.poset.len(),
            fiber.origin.iter().enumerate().filter(|(_, o)| open.contains(o.unwrap().0)).map(|(i, _)| i),
        );
        let near = near_cd_index(&fiber.poset, &boundary)?;
        let upper = cd_index(&tgt.interval(sigma, Upper::Top, false)?.poset)?;
        assembled += &(&near.phi * &upper);
        terms.push(DecompositionTerm { sigma, phi: near.phi, upper });
    }
    let expected = cd_index(src)?;
    if assembled != expected {
        return Err(SubdivisionError::DecompositionMismatch { assembled, expected });
    }
    Ok(Decomposition { terms, assembled })
}

/// `smaller ≤ larger` coefficientwise, with the first violating word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub smaller: CdPoly,
    pub larger: CdPoly,
    pub witness: Option<(CdWord, BigInt, BigInt)>,
}

impl Comparison {
    pub fn new(smaller: CdPoly, larger: CdPoly) -> Self {
        let witness = smaller.first_excess(&larger);
        Comparison { smaller, larger, witness }
    }

    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", self.smaller, self.larger)?;
        if let Some((w, p, q)) = &self.witness {
            write!(f, " fails at {}: {} > {}", word_string(w), p, q)?;
        }
        Ok(())
    }
}

/// `Ψ_target ≤ Ψ_source` for a certified subdivision.
pub fn verify_subdivision_inequality(phi: &PosetMap) -> Result<Comparison, SubdivisionError> {
    if let Some(f) = is_subdivision(phi)?.failure {
        return Err(SubdivisionError::NotASubdivision(f));
    }
    Ok(Comparison::new(cd_index(phi.target())?, cd_index(phi.source())?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MainInequality {
    /// `Ψ_{[0̂,ν)} · Pyr(Ψ_{[ν,1̂)}) ≤ Ψ_Λ`.
    pub primal: Comparison,
    /// `Pyr(Ψ_{[0̂,ν)}) · Ψ_{[ν,1̂)} ≤ Ψ_Λ`.
    pub dual: Comparison,
    /// The inequality is only claimed for lattices; non-lattices are still
    /// evaluated so counterexamples can be exhibited.
    pub is_lattice: bool,
}

impl MainInequality {
    pub fn holds(&self) -> bool {
        self.primal.holds() && self.dual.holds()
    }
}

fn require_gorenstein_star(l: &GradedPoset) -> Result<(), SubdivisionError> {
    require_gorenstein(&PosetHomology::new(l)).map_err(SubdivisionError::NotGorensteinStar)
}

pub fn verify_main_inequality(l: &GradedPoset, nu: ElementId) -> Result<MainInequality, SubdivisionError> {
    if !l.contains(nu) || nu == ElementId::BOTTOM {
        return Err(SubdivisionError::BadElement(nu.0));
    }
    require_gorenstein_star(l)?;
    let psi = cd_index(l)?;
    let lower = cd_index(&l.interval(ElementId::BOTTOM, Upper::Element(nu), false)?.poset)?;
    let upper = cd_index(&l.interval(nu, Upper::Top, false)?.poset)?;
    Ok(MainInequality {
        primal: Comparison::new(&lower * &pyr_op(&upper), psi.clone()),
        dual: Comparison::new(&pyr_op(&lower) * &upper, psi),
        is_lattice: l.is_lattice(),
    })
}

/// `Ψ_{B_{n+1}} ≤ Ψ_Λ` for `Λ` of rank `n`.
pub fn verify_stanley_minimum(l: &GradedPoset) -> Result<Comparison, SubdivisionError> {
    require_gorenstein_star(l)?;
    Ok(Comparison::new(cd_index(&boolean_algebra(l.rank() + 1))?, cd_index(l)?))
}

/// `Ψ_{Λ′_ν} ≤ Ψ_Λ`.
pub fn verify_corollary_semisusp(l: &GradedPoset, nu: ElementId) -> Result<Comparison, SubdivisionError> {
    let small = lambda_nu_prime_cd(l, nu).map_err(|e| match e {
        FlagError::NotALattice => SubdivisionError::NotALattice,
        other => other.into(),
    })?;
    Ok(Comparison::new(small, cd_index(l)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{collapse_map, polygon, subdivision_target_and_map};
    use crate::ncpoly::{c, d};

    #[test]
    fn polygon_target_is_subdivision() {
        for m in 3..=6 {
            let p = polygon(m);
            let v = p.find_label("v1").unwrap();
            let (_, map, _) = subdivision_target_and_map(&p, v).unwrap();
            assert!(is_subdivision(&map).unwrap().is_subdivision(), "{m}-gon");
            let dec = decompose(&map).unwrap();
            assert_eq!(dec.assembled, cd_index(&p).unwrap());
            assert!(dec.negative_term().is_none());
            let cmp = verify_subdivision_inequality(&map).unwrap();
            assert!(cmp.holds());
            assert_eq!(cmp.smaller, &(&c() * &c()) + &d());
        }
    }

    #[test]
    fn identity_is_subdivision() {
        let p = polygon(4);
        let map = PosetMap::identity(&p);
        assert!(is_subdivision(&map).unwrap().is_subdivision());
        let dec = decompose(&map).unwrap();
        for t in &dec.terms {
            if t.sigma != ElementId::BOTTOM {
                assert!(t.phi.is_zero(), "{:?}", t);
            }
        }
    }

    #[test]
    fn collapse_is_subdivision() {
        let p = polygon(5);
        let map = collapse_map(&p, p.find_label("v1").unwrap()).unwrap();
        assert!(is_subdivision(&map).unwrap().is_subdivision());
        decompose(&map).unwrap();
    }

    #[test]
    fn two_gon_fails_main_inequality() {
        let p = polygon(2);
        let r = verify_main_inequality(&p, p.find_label("v1").unwrap()).unwrap();
        assert!(!r.is_lattice);
        assert!(!r.primal.holds());
        assert_eq!(r.primal.witness.as_ref().unwrap().0, crate::ncpoly::parse_word::<CdWord>("d").unwrap());
    }

    #[test]
    fn bad_map_is_reported() {
        let p = polygon(3);
        let q = polygon(3);
        let bottom_heavy: Vec<ElementId> = p.elements().map(|x| if p.rank_of(x) == 2 { ElementId(4) } else { x }).collect();
        let map = PosetMap::new(p, q, bottom_heavy).unwrap();
        let r = is_subdivision(&map).unwrap();
        assert!(matches!(r.failure, Some(SubdivisionFailure::OrderViolation(..))));
    }
}
