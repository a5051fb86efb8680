//! Poset factories and order-preserving maps.
//!
//! Products, pyramids, order complexes and the posets built around an
//! element `ν` of a lattice: `Λ_ν`, its semisuspension `Λ′_ν`, the
//! complement `Λ∖[ν,1̂)`, and the target `[0̂,ν) * Pyr[ν,1̂)` together with
//! the map onto it.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::bitset::BitSet;
use crate::poset::{add_explicit_top, Derived, ElementId, GradedPoset, PosetError, Upper};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("poset with its top adjoined is not a lattice")]
    NotALattice,
    #[error("element {0} is out of range for this construction")]
    ElementOutOfRange(usize),
    #[error("the added element would not be graded: element {0} is not below it")]
    StarNotGraded(usize),
    #[error("invalid map: {0}")]
    BadMap(String),
}

/// A poset built from two factors. `origin[i]` names the pair of factor
/// elements (in `P ∪ {1̂}` and `Q ∪ {1̂}`) behind element `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Paired {
    pub poset: GradedPoset,
    pub origin: Vec<(Upper, Upper)>,
}

/// The order complex as a poset, with the chain behind each element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainPoset {
    pub poset: GradedPoset,
    pub chains: Vec<Vec<ElementId>>,
}

/// Order-preserving map between two posets, stored as an assignment on ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetMap {
    source: GradedPoset,
    target: GradedPoset,
    assignment: Vec<ElementId>,
}

impl PosetMap {
    pub fn new(source: GradedPoset, target: GradedPoset, assignment: Vec<ElementId>) -> Result<Self, ConstructionError> {
        if assignment.len() != source.len() {
            return Err(ConstructionError::BadMap(format!(
                "assignment has {} entries for {} source elements",
                assignment.len(),
                source.len()
            )));
        }
        if let Some(bad) = assignment.iter().find(|t| !target.contains(**t)) {
            return Err(ConstructionError::BadMap(format!("target element {bad} does not exist")));
        }
        Ok(PosetMap { source, target, assignment })
    }

    pub fn identity(p: &GradedPoset) -> Self {
        PosetMap { source: p.clone(), target: p.clone(), assignment: p.elements().collect() }
    }

    pub fn source(&self) -> &GradedPoset {
        &self.source
    }

    pub fn target(&self) -> &GradedPoset {
        &self.target
    }

    pub fn assignment(&self) -> &[ElementId] {
        &self.assignment
    }

    pub fn apply(&self, x: ElementId) -> ElementId {
        self.assignment[x.0]
    }

    /// First cover `x ⋖ y` with `φ(x) ≰ φ(y)`, if any.
    pub fn order_violation(&self) -> Option<(ElementId, ElementId)> {
        self.source.covers().into_iter().map(|(x, y)| (ElementId(x), ElementId(y))).find(|&(x, y)| {
            !self.target.le(self.apply(x), self.apply(y))
        })
    }

    pub fn is_order_preserving(&self) -> bool {
        self.order_violation().is_none()
    }

    /// Target elements outside the image.
    pub fn missed(&self) -> Vec<ElementId> {
        let hit = BitSet::from_indices(self.target.len(), self.assignment.iter().map(|t| t.0));
        self.target.elements().filter(|t| !hit.contains(t.0)).collect()
    }

    pub fn is_surjective(&self) -> bool {
        self.missed().is_empty()
    }

    pub fn fiber(&self, t: ElementId) -> Vec<ElementId> {
        self.source.elements().filter(|&x| self.apply(x) == t).collect()
    }

    /// `φ⁻¹[0̂,σ]`, or `φ⁻¹[0̂,σ)` when `closed` is false.
    pub fn preimage_below(&self, sigma: ElementId, closed: bool) -> BitSet {
        let down = self.target.below_set(sigma);
        BitSet::from_indices(
            self.source.len(),
            self.source
                .elements()
                .filter(|&x| {
                    let t = self.apply(x);
                    down.contains(t.0) && (closed || t != sigma)
                })
                .map(|x| x.0),
        )
    }
}

fn set_label(p: GradedPoset, labels: Vec<String>) -> Result<GradedPoset, PosetError> {
    p.with_labels(labels.into_iter().map(Some).collect())
}

/// The single-element poset `{0̂}` of rank 0.
pub fn point() -> GradedPoset {
    GradedPoset::from_covers(0, vec![0], &[]).expect("point is valid")
}

/// Proper subsets of a `k`-set ordered by inclusion; rank `k − 1`.
pub fn boolean_algebra(k: usize) -> GradedPoset {
    assert!((1..=16).contains(&k), "boolean_algebra needs 1 <= k <= 16");
    let full = (1usize << k) - 1;
    let mut masks: Vec<usize> = (0..full).collect();
    masks.sort_by_key(|&m| (m.count_ones(), m));
    let index: BTreeMap<usize, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let ranks = masks.iter().map(|m| m.count_ones() as usize).collect();
    let mut covers = Vec::new();
    for (i, &m) in masks.iter().enumerate() {
        for bit in 0..k {
            let up = m | (1 << bit);
            if up != m && up != full {
                covers.push((i, index[&up]));
            }
        }
    }
    let labels = masks
        .iter()
        .map(|&m| {
            let items: Vec<String> = (0..k).filter(|b| m >> b & 1 == 1).map(|b| format!("{}", b + 1)).collect();
            format!("{{{}}}", items.join(","))
        })
        .collect();
    let p = GradedPoset::from_covers(k - 1, ranks, &covers).expect("boolean algebra is graded");
    set_label(p, labels).expect("label count")
}

/// Face poset of an `m`-gon: vertices `v1..vm`, edges `e_i = {v_i, v_{i+1}}`.
/// `m = 2` gives two edges glued along both endpoints.
pub fn polygon(m: usize) -> GradedPoset {
    assert!(m >= 2, "polygon needs m >= 2");
    let mut ranks = vec![0];
    ranks.extend(core::iter::repeat_n(1, m));
    ranks.extend(core::iter::repeat_n(2, m));
    let mut covers = Vec::new();
    for i in 0..m {
        covers.push((0, 1 + i));
        covers.push((1 + i, 1 + m + i));
        covers.push((1 + (i + 1) % m, 1 + m + i));
    }
    let mut labels = vec![String::from("0̂")];
    labels.extend((1..=m).map(|i| format!("v{i}")));
    labels.extend((1..=m).map(|i| format!("e{i}")));
    set_label(GradedPoset::from_covers(2, ranks, &covers).expect("polygon is graded"), labels).expect("label count")
}

fn upper_name(p: &GradedPoset, u: Upper) -> String {
    match u {
        Upper::Element(x) => p.name(x),
        Upper::Top => String::from("1̂"),
    }
}

fn uppers(p: &GradedPoset) -> Vec<Upper> {
    let mut v: Vec<Upper> = p.elements().map(Upper::Element).collect();
    v.push(Upper::Top);
    v
}

fn upper_covers(p: &GradedPoset, u: Upper) -> Vec<Upper> {
    match u {
        Upper::Top => Vec::new(),
        Upper::Element(x) => {
            let ups: Vec<Upper> = p.up_covers(x).map(Upper::Element).collect();
            if ups.is_empty() {
                vec![Upper::Top]
            } else {
                ups
            }
        }
    }
}

/// Builds a poset on `pairs` (first entry must be the bottom) with the
/// product order generated by componentwise covers.
fn pair_poset(
    p: &GradedPoset,
    q: &GradedPoset,
    mut pairs: Vec<(Upper, Upper)>,
    rank: impl Fn(&(Upper, Upper)) -> usize,
    n: usize,
    link_bottom: bool,
) -> Result<Paired, ConstructionError> {
    let bottom = pairs[0];
    pairs.sort_by_key(|e| (e != &bottom, rank(e), *e));
    let index: BTreeMap<(Upper, Upper), usize> = pairs.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let mut covers = Vec::new();
    for (i, &(x, y)) in pairs.iter().enumerate() {
        for x2 in upper_covers(p, x) {
            if let Some(&j) = index.get(&(x2, y)) {
                covers.push((i, j));
            }
        }
        for y2 in upper_covers(q, y) {
            if let Some(&j) = index.get(&(x, y2)) {
                covers.push((i, j));
            }
        }
    }
    let ranks: Vec<usize> = pairs.iter().map(&rank).collect();
    if link_bottom {
        // A separately adjoined 0̂ sits below every rank-one pair.
        covers.extend((1..pairs.len()).filter(|&j| ranks[j] == 1).map(|j| (0, j)));
    }
    let labels = pairs.iter().map(|&(x, y)| format!("({},{})", upper_name(p, x), upper_name(q, y))).collect();
    let poset = set_label(GradedPoset::from_covers(n, ranks, &covers)?, labels)?;
    Ok(Paired { poset, origin: pairs })
}

/// `(P ∪ {1̂}) × (Q ∪ {1̂})` without its top, graded by rank sums; rank `m + n + 1`.
pub fn cartesian_product(p: &GradedPoset, q: &GradedPoset) -> Result<Paired, ConstructionError> {
    let mut pairs = Vec::new();
    for x in uppers(p) {
        for y in uppers(q) {
            if !(x == Upper::Top && y == Upper::Top) {
                pairs.push((x, y));
            }
        }
    }
    let r = |e: &(Upper, Upper)| p.upper_rank(e.0) + q.upper_rank(e.1);
    pair_poset(p, q, pairs, r, p.rank() + q.rank() + 1, false)
}

/// Face poset of the product of two polytopes: pairs of nonempty faces plus
/// a new `0̂`; rank `m + n`.
pub fn polytope_product(p: &GradedPoset, q: &GradedPoset) -> Result<Paired, ConstructionError> {
    let bottom = (Upper::Element(ElementId::BOTTOM), Upper::Element(ElementId::BOTTOM));
    let mut pairs = vec![bottom];
    for x in uppers(p).into_iter().skip(1) {
        for y in uppers(q).into_iter().skip(1) {
            if !(x == Upper::Top && y == Upper::Top) {
                pairs.push((x, y));
            }
        }
    }
    let r = |e: &(Upper, Upper)| {
        if *e == bottom {
            0
        } else {
            p.upper_rank(e.0) + q.upper_rank(e.1) - 1
        }
    };
    pair_poset(p, q, pairs, r, p.rank() + q.rank(), true)
}

/// `Pyr(P) ∪ {1̂} = (P ∪ {1̂}) × B₁`; rank `n + 1`.
pub fn pyr_poset(p: &GradedPoset) -> Result<Paired, ConstructionError> {
    cartesian_product(p, &point())
}

/// `P * Q = P ∪ (Q∖{0̂})` with all of `P` below all of `Q∖{0̂}`; rank `m + n`.
/// Origins: `x ∈ P` maps to `(x, 0̂)`, `y ∈ Q∖{0̂}` to `(1̂, y)`.
pub fn star_product(p: &GradedPoset, q: &GradedPoset) -> Result<Paired, ConstructionError> {
    let m = p.rank();
    let offset = p.len() - 1;
    let mut ranks = p.ranks().to_vec();
    ranks.extend(q.ranks()[1..].iter().map(|r| r + m));
    let mut covers = p.covers();
    for (lo, hi) in q.covers() {
        if lo == 0 {
            for top in p.maximal_elements() {
                covers.push((top.0, hi + offset));
            }
        } else {
            covers.push((lo + offset, hi + offset));
        }
    }
    let mut labels: Vec<Option<String>> = p.labels().to_vec();
    labels.extend(q.labels()[1..].iter().cloned());
    let mut origin: Vec<(Upper, Upper)> =
        p.elements().map(|x| (Upper::Element(x), Upper::Element(ElementId::BOTTOM))).collect();
    origin.extend(q.elements().skip(1).map(|y| (Upper::Top, Upper::Element(y))));
    let poset = GradedPoset::from_covers(m + q.rank(), ranks, &covers)?.with_labels(labels)?;
    Ok(Paired { poset, origin })
}

/// `O(P)`: chains containing `0̂` ordered by inclusion, ranked by length − 1.
pub fn order_complex(p: &GradedPoset) -> ChainPoset {
    let mut chains = p.chains();
    chains.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
    let index: BTreeMap<Vec<ElementId>, usize> = chains.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    let mut covers = Vec::new();
    for (i, ch) in chains.iter().enumerate() {
        for drop in 1..ch.len() {
            let mut sub = ch.clone();
            sub.remove(drop);
            covers.push((index[&sub], i));
        }
    }
    let ranks = chains.iter().map(|c| c.len() - 1).collect();
    let labels = chains
        .iter()
        .map(|c| {
            if c.len() == 1 {
                String::from("{}")
            } else {
                let names: Vec<String> = c[1..].iter().map(|&x| p.name(x)).collect();
                format!("{{{}}}", names.join("<"))
            }
        })
        .collect();
    let poset = GradedPoset::from_covers(p.rank(), ranks, &covers).expect("order complex is graded");
    ChainPoset { poset: set_label(poset, labels).expect("label count"), chains }
}

/// `P ∪ {1̂}` as a poset of rank `n + 1`.
pub fn with_top(p: &GradedPoset) -> Derived {
    let id = Derived { poset: p.clone(), origin: p.elements().map(Some).collect() };
    add_explicit_top(&id).expect("adding a top keeps the poset graded")
}

/// Dual under the virtual-top convention: reverse `P ∪ {1̂}` and drop the
/// old `0̂`, which becomes the new virtual top. `origin` is `None` for the
/// new `0̂` (the old `1̂`).
pub fn polar(p: &GradedPoset) -> Result<Derived, ConstructionError> {
    if p.rank() == 0 {
        return Ok(Derived { poset: p.clone(), origin: vec![None] });
    }
    let full = with_top(p);
    let dual = full.poset.dual()?;
    // dual() swaps ids 0 and top: the old 0̂ now sits at the old top's id.
    let old_bottom = full.poset.len() - 1;
    let members = BitSet::from_indices(dual.len(), (0..dual.len()).filter(|&i| i != old_bottom));
    let ideal = dual.ideal(&members)?;
    let origin = ideal
        .origin
        .iter()
        .map(|o| {
            let i = o.expect("ideal keeps origins").0;
            // Undo the id swap performed by dual().
            let src = if i == 0 { old_bottom } else { i };
            full.origin[src]
        })
        .collect();
    Ok(Derived { poset: ideal.poset, origin })
}

fn require_lattice(l: &GradedPoset, nu: ElementId) -> Result<(), ConstructionError> {
    if !l.contains(nu) {
        return Err(PosetError::UnknownElement(nu.0).into());
    }
    if nu == ElementId::BOTTOM {
        return Err(ConstructionError::ElementOutOfRange(nu.0));
    }
    if !l.is_lattice() {
        return Err(ConstructionError::NotALattice);
    }
    Ok(())
}

/// `{σ : σ ∨ ν < 1̂}` as a bit set of `Λ`.
pub fn lambda_nu_members(l: &GradedPoset, nu: ElementId) -> Result<BitSet, ConstructionError> {
    require_lattice(l, nu)?;
    let mut out = BitSet::new(l.len());
    for s in l.elements() {
        if l.join(s, nu)? != Upper::Top {
            out.insert(s.0);
        }
    }
    Ok(out)
}

/// `Λ_ν = {σ ∈ Λ : σ ∨ ν < 1̂}`.
pub fn lambda_nu_poset(l: &GradedPoset, nu: ElementId) -> Result<Derived, ConstructionError> {
    let members = lambda_nu_members(l, nu)?;
    Ok(l.ideal(&members)?)
}

/// `Λ′_ν = Λ_ν ∪ {*}` with `σ < *` exactly when `ν ≰ σ`; `ρ(*) = n`.
/// The new element is last and has origin `None`.
pub fn semisuspension(l: &GradedPoset, nu: ElementId) -> Result<Derived, ConstructionError> {
    let base = lambda_nu_poset(l, nu)?;
    let under = BitSet::from_indices(
        base.poset.len(),
        base.poset.elements().filter(|&s| !l.le(nu, base.origin[s.0].unwrap())).map(|s| s.0),
    );
    let capped = cap_boundary(&base.poset, &under, l.rank()).map_err(|e| match e {
        ConstructionError::StarNotGraded(s) => ConstructionError::StarNotGraded(base.origin[s].unwrap().0),
        other => other,
    })?;
    let mut origin = base.origin;
    origin.push(None);
    Ok(Derived { poset: capped.poset, origin })
}

/// `P ∪ {*}` with `σ < *` exactly for `σ` in the ideal `boundary`, and
/// `ρ(*) = n`. The new element is last and has origin `None`.
pub fn cap_boundary(p: &GradedPoset, boundary: &BitSet, n: usize) -> Result<Derived, ConstructionError> {
    if !p.is_ideal(boundary) || boundary.is_empty() || n < p.rank() || n == 0 {
        return Err(ConstructionError::BadMap(String::from("boundary must be a nonempty ideal")));
    }
    let star = p.len();
    let mut covers = p.covers();
    covers.extend(boundary.iter().filter(|&s| p.ranks()[s] + 1 == n).map(|s| (s, star)));
    let mut ranks = p.ranks().to_vec();
    ranks.push(n);
    let mut labels = p.labels().to_vec();
    labels.push(Some(String::from("*")));
    let poset = GradedPoset::from_covers(n, ranks, &covers)?.with_labels(labels)?;
    if let Some(s) = boundary.iter().find(|&s| !poset.le(ElementId(s), ElementId(star))) {
        return Err(ConstructionError::StarNotGraded(s));
    }
    let mut origin: Vec<Option<ElementId>> = p.elements().map(Some).collect();
    origin.push(None);
    Ok(Derived { poset, origin })
}

/// `Λ∖[ν,1̂)` with boundary `{τ : τ ∨ ν < 1̂}` (as ids of the result).
pub fn remove_upset(l: &GradedPoset, nu: ElementId) -> Result<(Derived, BitSet), ConstructionError> {
    let lam = lambda_nu_members(l, nu)?;
    let mut keep = BitSet::full(l.len());
    keep.difference_with(l.above_set(nu));
    let d = l.ideal(&keep)?;
    if d.poset.rank() != l.rank() {
        return Err(PosetError::NotPure { element: 0, rank: d.poset.rank(), n: l.rank() }.into());
    }
    let boundary = BitSet::from_indices(
        d.poset.len(),
        d.origin.iter().enumerate().filter(|(_, o)| lam.contains(o.unwrap().0)).map(|(i, _)| i),
    );
    Ok((d, boundary))
}

/// Identifies an element of `[0̂,ν) * Pyr[ν,1̂)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TargetElement {
    /// `τ < ν`.
    Lower(ElementId),
    /// `(τ, 0̂)` for `τ ∈ [ν,1̂]`, excluding `(ν, 0̂)`.
    Base(Upper),
    /// `(τ, 1̂)` for `τ ∈ [ν,1̂)`.
    Apex(ElementId),
}

/// `T = [0̂,ν) * Pyr[ν,1̂)` and `φ: Λ → T` with `τ < ν ↦ τ`,
/// `τ ≥ ν ↦ (τ,1̂)` and otherwise `τ ↦ (τ∨ν, 0̂)`.
pub fn subdivision_target_and_map(
    l: &GradedPoset,
    nu: ElementId,
) -> Result<(GradedPoset, PosetMap, Vec<TargetElement>), ConstructionError> {
    require_lattice(l, nu)?;
    let lower = l.interval(ElementId::BOTTOM, Upper::Element(nu), false)?;
    let upper = l.interval(nu, Upper::Top, false)?;
    let pyr = pyr_poset(&upper.poset)?;
    let star = star_product(&lower.poset, &pyr.poset)?;
    let to_lambda = |d: &Derived, x: ElementId| d.origin[x.0].expect("intervals keep origins");
    let mut kinds = Vec::with_capacity(star.poset.len());
    let mut labels = Vec::with_capacity(star.poset.len());
    for &(left, right) in &star.origin {
        let kind = match (left, right) {
            (Upper::Element(x), _) => TargetElement::Lower(to_lambda(&lower, x)),
            (Upper::Top, Upper::Element(y)) => match pyr.origin[y.0] {
                (Upper::Element(t), Upper::Element(_)) => TargetElement::Base(Upper::Element(to_lambda(&upper, t))),
                (Upper::Top, Upper::Element(_)) => TargetElement::Base(Upper::Top),
                (Upper::Element(t), Upper::Top) => TargetElement::Apex(to_lambda(&upper, t)),
                (Upper::Top, Upper::Top) => unreachable!("product top is removed"),
            },
            (Upper::Top, Upper::Top) => unreachable!("star product has no top"),
        };
        labels.push(Some(match kind {
            TargetElement::Lower(t) => l.name(t),
            TargetElement::Base(u) => format!("({},0̂)", upper_name(l, u)),
            TargetElement::Apex(t) => format!("({},1̂)", l.name(t)),
        }));
        kinds.push(kind);
    }
    let target = star.poset.with_labels(labels)?;
    let index: BTreeMap<TargetElement, usize> = kinds.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let mut assignment = Vec::with_capacity(l.len());
    for t in l.elements() {
        let kind = if l.lt(t, nu) {
            TargetElement::Lower(t)
        } else if l.le(nu, t) {
            TargetElement::Apex(t)
        } else {
            TargetElement::Base(l.join(t, nu)?)
        };
        assignment.push(ElementId(index[&kind]));
    }
    let map = PosetMap::new(l.clone(), target.clone(), assignment)?;
    Ok((target, map, kinds))
}

/// `Λ → Λ′_ν`: identity on `Λ_ν`, everything else to `*`.
pub fn collapse_map(l: &GradedPoset, nu: ElementId) -> Result<PosetMap, ConstructionError> {
    let semi = semisuspension(l, nu)?;
    let star = ElementId(semi.poset.len() - 1);
    let assignment = l.elements().map(|t| semi.image_of(t).unwrap_or(star)).collect();
    PosetMap::new(l.clone(), semi.poset, assignment)
}

/// A rank-preserving cover isomorphism `P → Q`, found by backtracking.
pub fn find_isomorphism(p: &GradedPoset, q: &GradedPoset) -> Option<Vec<ElementId>> {
    if p.len() != q.len() || p.rank() != q.rank() {
        return None;
    }
    let mut rp = p.ranks().to_vec();
    let mut rq = q.ranks().to_vec();
    rp.sort_unstable();
    rq.sort_unstable();
    if rp != rq {
        return None;
    }
    let mut order: Vec<ElementId> = p.elements().collect();
    order.sort_by_key(|&x| p.rank_of(x));
    let mut map = vec![usize::MAX; p.len()];
    let mut used = vec![false; q.len()];
    fn go(
        p: &GradedPoset,
        q: &GradedPoset,
        order: &[ElementId],
        k: usize,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        let Some(&x) = order.get(k) else { return true };
        let mut down: Vec<usize> = p.down_covers(x).map(|d| map[d.0]).collect();
        down.sort_unstable();
        let up_deg = p.up_covers(x).count();
        for y in q.elements() {
            if used[y.0] || q.rank_of(y) != p.rank_of(x) || q.up_covers(y).count() != up_deg {
                continue;
            }
            let qd: Vec<usize> = q.down_covers(y).map(|d| d.0).collect();
            if qd != down {
                continue;
            }
            map[x.0] = y.0;
            used[y.0] = true;
            if go(p, q, order, k + 1, map, used) {
                return true;
            }
            used[y.0] = false;
        }
        map[x.0] = usize::MAX;
        false
    }
    go(p, q, &order, 0, &mut map, &mut used).then(|| map.into_iter().map(ElementId).collect())
}

pub fn is_isomorphic(p: &GradedPoset, q: &GradedPoset) -> bool {
    find_isomorphism(p, q).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::{ab_index, cd_index};

    fn segment() -> GradedPoset {
        boolean_algebra(2)
    }

    #[test]
    fn basic_families() {
        assert_eq!(boolean_algebra(2).len(), 3);
        assert!(is_isomorphic(&boolean_algebra(3), &polygon(3)));
        assert_eq!(cd_index(&boolean_algebra(4)).unwrap(), "c^3 + 2*cd + 2*dc".parse().unwrap());
        assert!(!polygon(2).is_lattice());
        assert!(polygon(5).is_lattice());
        assert!(boolean_algebra(4).is_lattice());
        assert_eq!(polygon(4).find_label("e1"), Some(ElementId(5)));
    }

    #[test]
    fn products_and_pyramids() {
        let seg = segment();
        let sq = polytope_product(&seg, &seg).unwrap();
        assert!(is_isomorphic(&sq.poset, &polygon(4)));
        assert!(is_isomorphic(&cartesian_product(&seg, &seg).unwrap().poset, &boolean_algebra(4)));
        assert!(is_isomorphic(&pyr_poset(&seg).unwrap().poset, &polygon(3)));
        let py = pyr_poset(&polygon(4)).unwrap().poset;
        assert_eq!(py.rank(), 3);
        assert_eq!(
            cd_index(&py).unwrap(),
            crate::ncpoly::pyr_op(&"c^2 + 2*d".parse().unwrap())
        );
        let tri = cartesian_product(&polygon(3), &point()).unwrap().poset;
        assert!(tri.is_eulerian());
    }

    #[test]
    fn star_products() {
        let seg = segment();
        let s = star_product(&seg, &seg).unwrap().poset;
        assert!(is_isomorphic(&s, &polygon(2)));
        assert_eq!(cd_index(&s).unwrap(), "c^2".parse().unwrap());
        assert!(is_isomorphic(&star_product(&polygon(3), &point()).unwrap().poset, &polygon(3)));
        let p = polygon(3);
        let q = polygon(4);
        assert_eq!(ab_index(&star_product(&p, &q).unwrap().poset), &ab_index(&p) * &ab_index(&q));
    }

    #[test]
    fn order_complexes() {
        let o = order_complex(&polygon(3));
        assert!(is_isomorphic(&o.poset, &polygon(6)));
        assert!(o.poset.is_lattice());
        assert!(is_isomorphic(&order_complex(&segment()).poset, &segment()));
        assert!(!polygon(2).is_lattice() && order_complex(&polygon(2)).poset.is_lattice());
    }

    #[test]
    fn polar_duality() {
        let cube = polytope_product(&polytope_product(&segment(), &segment()).unwrap().poset, &segment()).unwrap();
        let cross = polar(&cube.poset).unwrap();
        assert_eq!(cross.poset.len(), 1 + 6 + 12 + 8);
        assert!(is_isomorphic(&polar(&cross.poset).unwrap().poset, &cube.poset));
        assert!(is_isomorphic(&polar(&polygon(5)).unwrap().poset, &polygon(5)));
        assert_eq!(cd_index(&cube.poset).unwrap(), "c^3 + 4*cd + 6*dc".parse().unwrap());
        assert_eq!(cd_index(&cross.poset).unwrap(), "c^3 + 6*cd + 4*dc".parse().unwrap());
    }

    #[test]
    fn lambda_nu_and_friends() {
        let p = polygon(3);
        let v1 = p.find_label("v1").unwrap();
        let lam = lambda_nu_poset(&p, v1).unwrap();
        // e2 = {v2, v3} is opposite v1
        assert_eq!(lam.poset.len(), 6);
        assert!(lam.image_of(p.find_label("e2").unwrap()).is_none());
        let semi = semisuspension(&p, v1).unwrap();
        assert!(semi.poset.is_eulerian());
        assert!(is_isomorphic(&semi.poset, &p));
        let (rest, bd) = remove_upset(&p, v1).unwrap();
        assert_eq!(rest.poset.len(), 4);
        assert_eq!(bd.count(), 3);
        let sq = polygon(4);
        let lam4 = lambda_nu_poset(&sq, sq.find_label("v1").unwrap()).unwrap();
        assert!(lam4.image_of(sq.find_label("v3").unwrap()).is_none());
        assert_eq!(lambda_nu_poset(&polygon(2), ElementId(1)).unwrap_err(), ConstructionError::NotALattice);
    }

    #[test]
    fn subdivision_target() {
        let p = polygon(3);
        let v1 = p.find_label("v1").unwrap();
        let (t, map, _) = subdivision_target_and_map(&p, v1).unwrap();
        assert_eq!(cd_index(&t).unwrap(), "c^2 + d".parse().unwrap());
        assert!(map.is_surjective() && map.is_order_preserving());
        let six = polygon(6);
        let (_, m6, _) = subdivision_target_and_map(&six, ElementId(1)).unwrap();
        assert!(m6.is_surjective() && m6.is_order_preserving());
        let cm = collapse_map(&p, v1).unwrap();
        assert_eq!(cm.fiber(ElementId(cm.target().len() - 1)), vec![p.find_label("e2").unwrap()]);
    }
}
