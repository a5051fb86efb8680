//! Finite graded posets with a minimal element and a virtual top.
//!
//! A [`GradedPoset`] of rank `n` stores its elements, ranks and cover
//! relations. The maximal element `1̂` is never stored: it sits at rank
//! `n + 1` above every element, so `ρ(x, 1̂) = n + 1 − ρ(x)`. The full order
//! relation is materialized as bit sets when the poset is built.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::bitset::BitSet;

/// Handle of an element inside one poset. Id `0` is always `0̂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(pub usize);

impl ElementId {
    pub const BOTTOM: ElementId = ElementId(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of `P ∪ {1̂}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Upper {
    Element(ElementId),
    Top,
}

impl From<ElementId> for Upper {
    fn from(e: ElementId) -> Self {
        Upper::Element(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("cover ({lower}, {upper}) does not raise the rank by exactly one")]
    NotGraded { lower: usize, upper: usize },
    #[error("the poset needs exactly one element of rank 0, and it must have id 0")]
    NoBottom,
    #[error("element {element} has rank {rank}, above the poset rank {n}")]
    RankedTooHigh { element: usize, rank: usize, n: usize },
    #[error("element {0} is not reachable from the minimal element")]
    UnreachableElement(usize),
    #[error("maximal element {element} has rank {rank}, below the poset rank {n}")]
    NotPure { element: usize, rank: usize, n: usize },
    #[error("unknown element {0}")]
    UnknownElement(usize),
    #[error("elements are not comparable")]
    NotComparable,
    #[error("the poset has no unique maximal element")]
    NoUniqueTop,
    #[error("elements {0} and {1} have several minimal upper bounds")]
    NotALattice(ElementId, ElementId),
    #[error("the chosen subset is not an order ideal containing the minimal element")]
    NotAnIdeal,
    #[error("the poset has {expected} elements but {got} labels were given")]
    LabelCount { expected: usize, got: usize },
}

#[derive(Clone, PartialEq, Eq)]
pub struct GradedPoset {
    n: usize,
    ranks: Vec<usize>,
    labels: Vec<Option<String>>,
    up: Vec<Vec<usize>>,
    down: Vec<Vec<usize>>,
    /// `below[y]` holds every `x ≤ y`.
    below: Vec<BitSet>,
    /// `above[x]` holds every `y ≥ x`.
    above: Vec<BitSet>,
}

impl fmt::Debug for GradedPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradedPoset")
            .field("n", &self.n)
            .field("ranks", &self.ranks)
            .field("covers", &self.covers())
            .finish()
    }
}

/// A poset derived from another one, with each element traced back to its
/// source element (`None` for elements that did not exist there, such as a
/// materialized top).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derived {
    pub poset: GradedPoset,
    pub origin: Vec<Option<ElementId>>,
}

/// Intervals `[x, y]`, `[x, y)` and `[x, 1̂)`, ranks renormalized at `x`.
pub type Interval = Derived;

impl Derived {
    /// The derived element that came from `source`, if any.
    pub fn image_of(&self, source: ElementId) -> Option<ElementId> {
        self.origin.iter().position(|o| *o == Some(source)).map(ElementId)
    }
}

impl GradedPoset {
    /// Validates ranks and covers. `ranks[i]` is the rank of element `i`.
    pub fn from_covers(n: usize, ranks: Vec<usize>, covers: &[(usize, usize)]) -> Result<Self, PosetError> {
        let size = ranks.len();
        if size == 0 || ranks[0] != 0 || ranks.iter().filter(|&&r| r == 0).count() != 1 {
            return Err(PosetError::NoBottom);
        }
        if let Some((i, &r)) = ranks.iter().enumerate().find(|(_, &r)| r > n) {
            return Err(PosetError::RankedTooHigh { element: i, rank: r, n });
        }
        let mut up = vec![Vec::new(); size];
        let mut down = vec![Vec::new(); size];
        for &(lo, hi) in covers {
            if lo >= size {
                return Err(PosetError::UnknownElement(lo));
            }
            if hi >= size {
                return Err(PosetError::UnknownElement(hi));
            }
            if ranks[hi] != ranks[lo] + 1 {
                return Err(PosetError::NotGraded { lower: lo, upper: hi });
            }
            if !up[lo].contains(&hi) {
                up[lo].push(hi);
                down[hi].push(lo);
            }
        }
        for i in 1..size {
            if down[i].is_empty() {
                return Err(PosetError::UnreachableElement(i));
            }
        }
        for i in 1..size {
            if up[i].is_empty() && ranks[i] != n {
                return Err(PosetError::NotPure { element: i, rank: ranks[i], n });
            }
        }
        if size == 1 && n != 0 {
            return Err(PosetError::NotPure { element: 0, rank: 0, n });
        }
        for list in up.iter_mut().chain(down.iter_mut()) {
            list.sort_unstable();
        }

        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by_key(|&i| ranks[i]);
        let mut below = vec![BitSet::new(size); size];
        for &y in &order {
            let mut set = BitSet::new(size);
            set.insert(y);
            for &x in &down[y] {
                set.union_with(&below[x]);
            }
            below[y] = set;
        }
        let mut above = vec![BitSet::new(size); size];
        for (y, set) in below.iter().enumerate() {
            for x in set.iter() {
                above[x].insert(y);
            }
        }
        Ok(GradedPoset { n, ranks, labels: vec![None; size], up, down, below, above })
    }

    pub fn with_labels(mut self, labels: Vec<Option<String>>) -> Result<Self, PosetError> {
        if labels.len() != self.len() {
            return Err(PosetError::LabelCount { expected: self.len(), got: labels.len() });
        }
        self.labels = labels;
        Ok(self)
    }

    /// Rank of the poset (the virtual top has rank `n + 1`).
    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bottom(&self) -> ElementId {
        ElementId::BOTTOM
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        (0..self.len()).map(ElementId)
    }

    pub fn contains(&self, x: ElementId) -> bool {
        x.0 < self.len()
    }

    fn check(&self, x: ElementId) -> Result<(), PosetError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(PosetError::UnknownElement(x.0))
        }
    }

    #[inline]
    pub fn rank_of(&self, x: ElementId) -> usize {
        self.ranks[x.0]
    }

    /// Rank of an element of `P ∪ {1̂}`.
    pub fn upper_rank(&self, u: Upper) -> usize {
        match u {
            Upper::Element(x) => self.rank_of(x),
            Upper::Top => self.n + 1,
        }
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn label(&self, x: ElementId) -> Option<&str> {
        self.labels[x.0].as_deref()
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    /// Label if present, otherwise the numeric id.
    pub fn name(&self, x: ElementId) -> String {
        match self.label(x) {
            Some(l) => String::from(l),
            None => format!("{}", x.0),
        }
    }

    pub fn find_label(&self, label: &str) -> Option<ElementId> {
        self.labels.iter().position(|l| l.as_deref() == Some(label)).map(ElementId)
    }

    pub fn up_covers(&self, x: ElementId) -> impl Iterator<Item = ElementId> + '_ {
        self.up[x.0].iter().map(|&i| ElementId(i))
    }

    pub fn down_covers(&self, x: ElementId) -> impl Iterator<Item = ElementId> + '_ {
        self.down[x.0].iter().map(|&i| ElementId(i))
    }

    /// All cover pairs `(lower, upper)`, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> =
            self.up.iter().enumerate().flat_map(|(lo, ups)| ups.iter().map(move |&hi| (lo, hi))).collect();
        out.sort_unstable();
        out
    }

    pub fn elements_of_rank(&self, k: usize) -> impl Iterator<Item = ElementId> + '_ {
        self.elements().filter(move |&x| self.rank_of(x) == k)
    }

    pub fn maximal_elements(&self) -> Vec<ElementId> {
        self.elements().filter(|x| self.up[x.0].is_empty()).collect()
    }

    /// Down-set `{x : x ≤ y}` as a bit set.
    pub fn below_set(&self, y: ElementId) -> &BitSet {
        &self.below[y.0]
    }

    /// Up-set `{y : y ≥ x}` as a bit set.
    pub fn above_set(&self, x: ElementId) -> &BitSet {
        &self.above[x.0]
    }

    pub fn leq(&self, x: ElementId, y: ElementId) -> Result<bool, PosetError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.le(x, y))
    }

    #[inline]
    pub fn le(&self, x: ElementId, y: ElementId) -> bool {
        self.below[y.0].contains(x.0)
    }

    #[inline]
    pub fn lt(&self, x: ElementId, y: ElementId) -> bool {
        x != y && self.le(x, y)
    }

    /// Order test in `P ∪ {1̂}`.
    pub fn le_upper(&self, x: ElementId, u: Upper) -> bool {
        match u {
            Upper::Element(y) => self.le(x, y),
            Upper::Top => true,
        }
    }

    pub fn lt_upper(&self, x: ElementId, u: Upper) -> bool {
        match u {
            Upper::Element(y) => self.lt(x, y),
            Upper::Top => true,
        }
    }

    /// `ρ(x, u)` for `x ≤ u` in `P ∪ {1̂}`.
    pub fn rank_between(&self, x: ElementId, u: Upper) -> usize {
        self.upper_rank(u) - self.rank_of(x)
    }

    /// Members of `[x, u]` (or `[x, u)` when `closed` is false) that lie in `P`.
    pub fn interval_members(&self, x: ElementId, u: Upper, closed: bool) -> Vec<ElementId> {
        let mut out: Vec<ElementId> = match u {
            Upper::Element(y) => {
                let mut s = self.above[x.0].clone();
                s.intersect_with(&self.below[y.0]);
                if !closed {
                    s.remove(y.0);
                }
                s.iter().map(ElementId).collect()
            }
            Upper::Top => self.above[x.0].iter().map(ElementId).collect(),
        };
        out.sort_by_key(|&e| (self.rank_of(e), e));
        out
    }

    /// The interval `[x, upper]` or `[x, upper)`, renormalized so that `x`
    /// has rank 0. `[x, 1̂]` materializes the top as a new element.
    pub fn interval(&self, x: ElementId, upper: Upper, closed_upper: bool) -> Result<Interval, PosetError> {
        self.check(x)?;
        if let Upper::Element(y) = upper {
            self.check(y)?;
        }
        if !self.le_upper(x, upper) || (!closed_upper && upper == Upper::Element(x)) {
            return Err(PosetError::NotComparable);
        }
        let members = self.interval_members(x, upper, closed_upper);
        let shift = self.rank_of(x);
        let n = match (upper, closed_upper) {
            (Upper::Top, false) => self.n - shift,
            (Upper::Top, true) => self.n - shift,
            (Upper::Element(y), true) => self.rank_of(y) - shift,
            (Upper::Element(y), false) => self.rank_of(y) - shift - 1,
        };
        let mut derived = self.convex_subposet(&members, shift, n)?;
        if upper == Upper::Top && closed_upper {
            derived = add_explicit_top(&derived)?;
        }
        Ok(derived)
    }

    /// Induced poset on a convex set whose minimum is `members[0]`. Ranks are
    /// shifted down by `shift`.
    fn convex_subposet(&self, members: &[ElementId], shift: usize, n: usize) -> Result<Derived, PosetError> {
        let mut index = vec![usize::MAX; self.len()];
        for (i, m) in members.iter().enumerate() {
            index[m.0] = i;
        }
        let ranks: Vec<usize> = members.iter().map(|&m| self.rank_of(m) - shift).collect();
        let mut covers = Vec::new();
        for (i, m) in members.iter().enumerate() {
            for &u in &self.up[m.0] {
                if index[u] != usize::MAX {
                    covers.push((i, index[u]));
                }
            }
        }
        let labels = members.iter().map(|&m| self.labels[m.0].clone()).collect();
        let poset = GradedPoset::from_covers(n, ranks, &covers)?.with_labels(labels)?;
        Ok(Derived { poset, origin: members.iter().map(|&m| Some(m)).collect() })
    }

    /// The sub-poset on an order ideal containing `0̂`. Ranks are preserved;
    /// the rank of the result is the largest rank present.
    pub fn ideal(&self, members: &BitSet) -> Result<Derived, PosetError> {
        if !members.contains(0) {
            return Err(PosetError::NotAnIdeal);
        }
        for m in members.iter() {
            if !self.below[m].is_subset(members) {
                return Err(PosetError::NotAnIdeal);
            }
        }
        let mut list: Vec<ElementId> = members.iter().map(ElementId).collect();
        list.sort_by_key(|&e| (self.rank_of(e), e));
        let n = list.iter().map(|&e| self.rank_of(e)).max().unwrap_or(0);
        self.convex_subposet(&list, 0, n)
    }

    /// Elements of rank at most `k`.
    pub fn skeleton(&self, k: usize) -> Result<Derived, PosetError> {
        let members = BitSet::from_indices(self.len(), self.elements().filter(|&x| self.rank_of(x) <= k).map(|x| x.0));
        self.ideal(&members)
    }

    pub fn is_ideal(&self, members: &BitSet) -> bool {
        members.iter().all(|m| self.below[m].is_subset(members))
    }

    /// Order dual. Requires a unique maximal element, which becomes id 0;
    /// the old `0̂` takes its id, so dualizing twice is the identity.
    pub fn dual(&self) -> Result<GradedPoset, PosetError> {
        let maxima = self.maximal_elements();
        if maxima.len() != 1 {
            return Err(PosetError::NoUniqueTop);
        }
        let top = maxima[0].0;
        let relabel = |i: usize| {
            if i == 0 {
                top
            } else if i == top {
                0
            } else {
                i
            }
        };
        let mut ranks = vec![0; self.len()];
        let mut labels = vec![None; self.len()];
        for i in 0..self.len() {
            ranks[relabel(i)] = self.n - self.ranks[i];
            labels[relabel(i)] = self.labels[i].clone();
        }
        let covers: Vec<(usize, usize)> = self.covers().into_iter().map(|(lo, hi)| (relabel(hi), relabel(lo))).collect();
        GradedPoset::from_covers(self.n, ranks, &covers)?.with_labels(labels)
    }

    /// Checks `Σ_{τ≤σ≤π} (−1)^{ρ(τ,σ)} = 0` for all `τ < π` in `P ∪ {1̂}`.
    pub fn is_eulerian(&self) -> bool {
        let size = self.len();
        let even = BitSet::from_indices(size, (0..size).filter(|&i| self.ranks[i] % 2 == 0));
        let odd = BitSet::from_indices(size, (0..size).filter(|&i| self.ranks[i] % 2 == 1));
        for t in 0..size {
            let up = &self.above[t];
            for p in up.iter() {
                if p == t {
                    continue;
                }
                let e = up.triple_count(&self.below[p], &even) as i64;
                let o = up.triple_count(&self.below[p], &odd) as i64;
                if e != o {
                    return false;
                }
            }
            // π = 1̂ contributes its own sign on top of the up-set.
            let e = up.intersection_count(&even) as i64;
            let o = up.intersection_count(&odd) as i64;
            let top = if (self.n + 1) % 2 == 0 { 1 } else { -1 };
            if e - o + top != 0 {
                return false;
            }
        }
        true
    }

    /// Least upper bound in `P ∪ {1̂}`.
    pub fn join(&self, x: ElementId, y: ElementId) -> Result<Upper, PosetError> {
        self.check(x)?;
        self.check(y)?;
        let mut common = self.above[x.0].clone();
        common.intersect_with(&self.above[y.0]);
        let minimal: Vec<usize> =
            common.iter().filter(|&m| self.below[m].intersection_count(&common) == 1).collect();
        match minimal.as_slice() {
            [] => Ok(Upper::Top),
            [m] => Ok(Upper::Element(ElementId(*m))),
            _ => Err(PosetError::NotALattice(x, y)),
        }
    }

    /// Every pair has a join in `P ∪ {1̂}`, which makes `P ∪ {1̂}` a lattice.
    pub fn is_lattice(&self) -> bool {
        self.elements().all(|x| self.elements().filter(|y| *y > x).all(|y| self.join(x, y).is_ok()))
    }

    /// Every chain `0̂ = σ₀ < σ₁ < ⋯ < σ_k`, including `{0̂}` itself.
    pub fn chains(&self) -> Vec<Vec<ElementId>> {
        let mut out = Vec::new();
        let mut stack = vec![ElementId::BOTTOM];
        self.chains_from(&mut stack, &mut out);
        out
    }

    fn chains_from(&self, stack: &mut Vec<ElementId>, out: &mut Vec<Vec<ElementId>>) {
        out.push(stack.clone());
        let last = *stack.last().unwrap();
        for y in self.above[last.0].iter() {
            if y != last.0 {
                stack.push(ElementId(y));
                self.chains_from(stack, out);
                stack.pop();
            }
        }
    }

    /// Maximal chains `0̂ ⋖ σ₁ ⋖ ⋯ ⋖ σ_n`.
    pub fn maximal_chains(&self) -> Vec<Vec<ElementId>> {
        let mut out = Vec::new();
        let mut stack = vec![ElementId::BOTTOM];
        fn go(p: &GradedPoset, stack: &mut Vec<ElementId>, out: &mut Vec<Vec<ElementId>>) {
            let last = *stack.last().unwrap();
            if p.up[last.0].is_empty() {
                out.push(stack.clone());
                return;
            }
            for &u in &p.up[last.0] {
                stack.push(ElementId(u));
                go(p, stack, out);
                stack.pop();
            }
        }
        go(self, &mut stack, &mut out);
        out
    }
}

/// `P ∪ {1̂}` with the top stored as a real element of rank `n + 1`.
pub fn add_explicit_top(d: &Derived) -> Result<Derived, PosetError> {
    let p = &d.poset;
    let top = p.len();
    let mut ranks = p.ranks.clone();
    ranks.push(p.n + 1);
    let mut covers = p.covers();
    covers.extend(p.maximal_elements().into_iter().map(|m| (m.0, top)));
    let mut labels = p.labels.clone();
    labels.push(Some(String::from("1̂")));
    let poset = GradedPoset::from_covers(p.n + 1, ranks, &covers)?.with_labels(labels)?;
    let mut origin = d.origin.clone();
    origin.push(None);
    Ok(Derived { poset, origin })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn two_gon() -> GradedPoset {
        // 0̂; v1=1, v2=2; e1=3, e2=4
        GradedPoset::from_covers(2, vec![0, 1, 1, 2, 2], &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4)]).unwrap()
    }

    fn three_gon() -> GradedPoset {
        // vertices 1,2,3; edges 4={1,2}, 5={2,3}, 6={1,3}
        GradedPoset::from_covers(
            2,
            vec![0, 1, 1, 1, 2, 2, 2],
            &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (2, 5), (3, 5), (1, 6), (3, 6)],
        )
        .unwrap()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            GradedPoset::from_covers(2, vec![0, 2], &[(0, 1)]).unwrap_err(),
            PosetError::NotGraded { lower: 0, upper: 1 }
        );
        assert_eq!(GradedPoset::from_covers(1, vec![0, 0], &[]).unwrap_err(), PosetError::NoBottom);
        assert_eq!(GradedPoset::from_covers(1, vec![1, 0], &[]).unwrap_err(), PosetError::NoBottom);
        assert_eq!(
            GradedPoset::from_covers(1, vec![0, 2], &[]).unwrap_err(),
            PosetError::RankedTooHigh { element: 1, rank: 2, n: 1 }
        );
        assert_eq!(
            GradedPoset::from_covers(2, vec![0, 1, 2], &[(0, 1)]).unwrap_err(),
            PosetError::UnreachableElement(2)
        );
        let atoms = GradedPoset::from_covers(1, vec![0, 1, 1], &[(0, 1), (0, 2)]).unwrap();
        assert_eq!(atoms.rank(), 1);
        assert_eq!(atoms.len(), 3);
    }

    #[test]
    fn order_queries() {
        let p = two_gon();
        assert!(p.leq(ElementId(1), ElementId(4)).unwrap());
        assert!(!p.leq(ElementId(1), ElementId(2)).unwrap());
        for x in p.elements() {
            assert!(p.le(x, x));
            assert!(p.le(ElementId::BOTTOM, x));
        }
        assert_eq!(p.leq(ElementId(9), ElementId(1)), Err(PosetError::UnknownElement(9)));
    }

    #[test]
    fn intervals() {
        let p = three_gon();
        let up = p.interval(ElementId(1), Upper::Top, false).unwrap();
        assert_eq!(up.poset.rank(), 1);
        assert_eq!(up.poset.len(), 3);
        let whole = p.interval(ElementId::BOTTOM, Upper::Top, false).unwrap();
        assert_eq!(whole.poset, p);
        let edge = p.interval(ElementId(1), Upper::Element(ElementId(4)), true).unwrap();
        assert_eq!(edge.poset.rank(), 1);
        assert_eq!(edge.poset.len(), 2);
        assert_eq!(
            p.interval(ElementId(1), Upper::Element(ElementId(5)), true).unwrap_err(),
            PosetError::NotComparable
        );
        let with_top = p.interval(ElementId::BOTTOM, Upper::Top, true).unwrap();
        assert_eq!(with_top.poset.rank(), 3);
        assert_eq!(with_top.origin.last(), Some(&None));
    }

    #[test]
    fn duality() {
        let chain = GradedPoset::from_covers(2, vec![0, 1, 2], &[(0, 1), (1, 2)]).unwrap();
        let d = chain.dual().unwrap();
        assert!(d.le(ElementId(0), ElementId(1)) && d.le(ElementId(1), ElementId(2)));
        assert_eq!(d.rank_of(ElementId(2)), 2);
        assert_eq!(d.dual().unwrap(), chain);
        assert_eq!(two_gon().dual().unwrap_err(), PosetError::NoUniqueTop);
    }

    #[test]
    fn eulerian_examples() {
        assert!(two_gon().is_eulerian());
        assert!(three_gon().is_eulerian());
        let one_edge = GradedPoset::from_covers(2, vec![0, 1, 1, 2], &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        assert!(!one_edge.is_eulerian());
    }

    #[test]
    fn joins() {
        let p = three_gon();
        assert_eq!(p.join(ElementId(1), ElementId(2)).unwrap(), Upper::Element(ElementId(4)));
        assert_eq!(p.join(ElementId(1), ElementId(4)).unwrap(), Upper::Element(ElementId(4)));
        assert_eq!(p.join(ElementId(4), ElementId(5)).unwrap(), Upper::Top);
        assert!(p.is_lattice());
        let q = two_gon();
        assert_eq!(q.join(ElementId(1), ElementId(2)), Err(PosetError::NotALattice(ElementId(1), ElementId(2))));
        assert!(!q.is_lattice());
    }

    #[test]
    fn chain_enumeration() {
        // 3-gon: {0̂}, 6 singletons, 6 vertex<edge pairs
        assert_eq!(three_gon().chains().len(), 13);
        assert_eq!(three_gon().maximal_chains().len(), 6);
    }
}
