//! Exact reduced simplicial homology and the sphere/ball certificates built
//! on it.
//!
//! Betti numbers are ranks of integer boundary matrices, so they are exact
//! over `ℚ` (and hence over `ℝ`). For order complexes the link of a chain
//! `{0̂ < σ₁ < ⋯ < σ_k}` is the join of the open intervals
//! `(0̂,σ₁), …, (σ_k,1̂)`, so its homology is a convolution of interval Betti
//! vectors. The poset-level checks use that instead of building links.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::bitset::BitSet;
use crate::linalg::sparse_rank;
use crate::poset::{ElementId, GradedPoset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("complex is not pure")]
    NotPure,
    #[error("simplex {0:?} is not in the complex")]
    SimplexNotFound(Vec<usize>),
    #[error("boundary is not an ideal containing the minimal element")]
    BoundaryNotIdeal,
    #[error("boundary has rank {got}, expected {expected}")]
    BoundaryWrongRank { expected: isize, got: isize },
    #[error("poset is not near-Gorenstein* for any boundary")]
    NotNearGorenstein,
}

/// Reduced Betti numbers; entry `i` is the dimension of `H̃_{i−1}`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct HomologyProfile {
    betti: Vec<usize>,
}

impl HomologyProfile {
    pub fn from_betti(mut betti: Vec<usize>) -> Self {
        while betti.last() == Some(&0) {
            betti.pop();
        }
        HomologyProfile { betti }
    }

    /// Homology of the complex `{∅}`: one class in degree −1.
    pub fn empty_complex() -> Self {
        HomologyProfile { betti: vec![1] }
    }

    pub fn get(&self, degree: isize) -> usize {
        usize::try_from(degree + 1).ok().and_then(|i| self.betti.get(i).copied()).unwrap_or(0)
    }

    /// `(degree, dimension)` for every nonzero group.
    pub fn nonzero(&self) -> Vec<(isize, usize)> {
        self.betti.iter().enumerate().filter(|(_, &b)| b != 0).map(|(i, &b)| (i as isize - 1, b)).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.betti.is_empty()
    }

    /// `ℝ` in `degree` and zero elsewhere.
    pub fn is_sphere_of(&self, degree: isize) -> bool {
        self.nonzero() == [(degree, 1)]
    }

    pub fn vanishes_below(&self, degree: isize) -> bool {
        self.nonzero().iter().all(|&(d, _)| d >= degree)
    }

    /// `Σ (−1)^i β̃_i`.
    pub fn reduced_euler(&self) -> i64 {
        self.nonzero().iter().map(|&(d, b)| if d.rem_euclid(2) == 0 { b as i64 } else { -(b as i64) }).sum()
    }

    /// Homology of a join: `H̃_m(A*B) = ⊕_{i+j=m−1} H̃_i(A) ⊗ H̃_j(B)`.
    pub fn join(&self, other: &Self) -> Self {
        if self.betti.is_empty() || other.betti.is_empty() {
            return HomologyProfile::default();
        }
        let mut out = vec![0; self.betti.len() + other.betti.len() - 1];
        for (i, x) in self.betti.iter().enumerate() {
            for (j, y) in other.betti.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        HomologyProfile::from_betti(out)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.betti
    }
}

impl fmt::Debug for HomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for HomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.nonzero().iter().map(|(d, b)| format!("H{d}={b}")).collect();
        if parts.is_empty() {
            write!(f, "acyclic")
        } else {
            write!(f, "{}", parts.join(", "))
        }
    }
}

/// A finite simplicial complex, always containing the empty simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    /// `faces[k]`: simplices with `k` vertices, each a sorted vertex list.
    faces: Vec<Vec<Vec<usize>>>,
    index: Vec<BTreeMap<Vec<usize>, usize>>,
}

impl SimplicialComplex {
    /// Closes a list of simplices under taking faces.
    pub fn from_facets(facets: &[Vec<usize>]) -> Self {
        let mut all: BTreeMap<Vec<usize>, ()> = BTreeMap::new();
        all.insert(Vec::new(), ());
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            assert!(f.len() < 24, "facet too large");
            for mask in 1u32..(1 << f.len()) {
                let sub: Vec<usize> = (0..f.len()).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                all.insert(sub, ());
            }
        }
        Self::from_closed(all.into_keys())
    }

    /// Builds from a family already closed under faces.
    fn from_closed(simplices: impl IntoIterator<Item = Vec<usize>>) -> Self {
        let mut faces: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]];
        for s in simplices {
            if s.is_empty() {
                continue;
            }
            while faces.len() <= s.len() {
                faces.push(Vec::new());
            }
            faces[s.len()].push(s);
        }
        for layer in faces.iter_mut() {
            layer.sort();
        }
        let index = faces.iter().map(|layer| layer.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()).collect();
        SimplicialComplex { faces, index }
    }

    /// Dimension; `−1` for `{∅}`.
    pub fn dim(&self) -> isize {
        self.faces.len() as isize - 2
    }

    /// Face counts by vertex count, starting with the empty simplex.
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.faces.iter().flatten()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        let mut s = s.to_vec();
        s.sort_unstable();
        self.index.get(s.len()).is_some_and(|m| m.contains_key(&s))
    }

    /// Alternating face count `Σ (−1)^{k−1} f_k` over all simplices including `∅`.
    pub fn reduced_euler_from_faces(&self) -> i64 {
        self.faces
            .iter()
            .enumerate()
            .map(|(k, l)| if k % 2 == 1 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    pub fn is_pure(&self) -> bool {
        let top = self.faces.len() - 1;
        // every maximal simplex has the top size
        self.faces.iter().enumerate().take(top).all(|(k, layer)| {
            layer.iter().all(|s| {
                self.faces[k + 1].iter().any(|t| s.iter().all(|v| t.binary_search(v).is_ok()))
            })
        })
    }

    /// `{t : t ∩ s = ∅, t ∪ s ∈ K}`.
    pub fn link(&self, s: &[usize]) -> Result<SimplicialComplex, HomologyError> {
        let mut s = s.to_vec();
        s.sort_unstable();
        if !self.contains(&s) {
            return Err(HomologyError::SimplexNotFound(s));
        }
        let rest = self.simplices().filter(|f| s.iter().all(|v| f.binary_search(v).is_ok())).map(|f| {
            f.iter().copied().filter(|v| s.binary_search(v).is_err()).collect::<Vec<usize>>()
        });
        Ok(Self::from_closed(rest))
    }
}

/// Reduced Betti numbers from the augmented chain complex.
pub fn reduced_homology(k: &SimplicialComplex) -> HomologyProfile {
    let layers = &k.faces;
    let mut ranks = vec![0usize; layers.len() + 1];
    for size in 1..layers.len() {
        let rows: Vec<Vec<(usize, i64)>> = layers[size]
            .iter()
            .map(|s| {
                (0..size)
                    .map(|i| {
                        let mut face = s.clone();
                        face.remove(i);
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        (k.index[size - 1][&face], sign)
                    })
                    .collect()
            })
            .collect();
        ranks[size] = sparse_rank(&rows);
    }
    let betti = (0..layers.len()).map(|size| layers[size].len() - ranks[size] - ranks[size + 1]).collect();
    HomologyProfile::from_betti(betti)
}

/// Vertices are the elements of `P∖{0̂}` (by id); simplices are chains.
pub fn order_complex_simplicial(p: &GradedPoset) -> SimplicialComplex {
    subposet_complex(p, &BitSet::full(p.len()))
}

/// Order complex of the subposet on `members`, minus `0̂`.
pub fn subposet_complex(p: &GradedPoset, members: &BitSet) -> SimplicialComplex {
    let mut verts: Vec<usize> = members.iter().filter(|&v| v != 0).collect();
    verts.sort_by_key(|&v| p.ranks()[v]);
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn go(p: &GradedPoset, members: &BitSet, start: Option<usize>, stack: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, verts: &[usize]) {
        for &v in verts {
            let ok = match start {
                None => true,
                Some(s) => v != s && p.above_set(ElementId(s)).contains(v),
            };
            if ok && members.contains(v) {
                stack.push(v);
                let mut s = stack.clone();
                s.sort_unstable();
                out.push(s);
                go(p, members, Some(v), stack, out, verts);
                stack.pop();
            }
        }
    }
    go(p, members, None, &mut stack, &mut out, &verts);
    SimplicialComplex::from_closed(out)
}

/// Homology of the subposet's order complex.
pub fn subposet_homology(p: &GradedPoset, members: &BitSet) -> HomologyProfile {
    reduced_homology(&subposet_complex(p, members))
}

/// Whether `K` is a homology sphere of its dimension, with every link a
/// sphere of the complementary dimension. Returns the first failing simplex.
pub fn gorenstein_complex_failure(k: &SimplicialComplex) -> Result<Option<(Vec<usize>, HomologyProfile)>, HomologyError> {
    if !k.is_pure() {
        return Err(HomologyError::NotPure);
    }
    let dim = k.dim();
    for s in k.simplices() {
        let h = reduced_homology(&k.link(s)?);
        if !h.is_sphere_of(dim - s.len() as isize) {
            return Ok(Some((s.clone(), h)));
        }
    }
    Ok(None)
}

pub fn is_gorenstein_complex(k: &SimplicialComplex) -> Result<bool, HomologyError> {
    Ok(gorenstein_complex_failure(k)?.is_none())
}

/// What a failing link should have looked like.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expectation {
    /// `ℝ` in this degree only.
    Sphere(isize),
    Acyclic,
    /// Zero below this degree.
    VanishingBelow(isize),
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::Sphere(d) => write!(f, "R in degree {d} only"),
            Expectation::Acyclic => write!(f, "zero in all degrees"),
            Expectation::VanishingBelow(d) => write!(f, "zero below degree {d}"),
        }
    }
}

/// A chain whose link in the order complex has the wrong homology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkWitness {
    pub chain: Vec<ElementId>,
    pub betti: HomologyProfile,
    pub expected: Expectation,
}

impl fmt::Display for LinkWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.chain.iter().map(|x| format!("{x}")).collect();
        write!(f, "link of chain [{}] has {}, expected {}", ids.join(" < "), self.betti, self.expected)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NearGorensteinFailure {
    BoundaryNotGorenstein(LinkWitness),
    Link(LinkWitness),
}

impl fmt::Display for NearGorensteinFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NearGorensteinFailure::BoundaryNotGorenstein(w) => write!(f, "boundary is not a sphere: {w}"),
            NearGorensteinFailure::Link(w) => write!(f, "{w}"),
        }
    }
}

/// Betti numbers of every open interval `(σ,τ)` with `σ < τ` in `P`.
/// Intervals between elements of an ideal are the same in the ideal, so
/// one table serves all ideals of `P`.
pub struct PosetHomology<'a> {
    p: &'a GradedPoset,
    table: BTreeMap<(usize, usize), HomologyProfile>,
}

impl<'a> PosetHomology<'a> {
    pub fn new(p: &'a GradedPoset) -> Self {
        let mut table = BTreeMap::new();
        for s in p.elements() {
            for t in p.above_set(s).iter() {
                if t == s.0 {
                    continue;
                }
                let h = if p.ranks()[t] == p.rank_of(s) + 1 {
                    HomologyProfile::empty_complex()
                } else {
                    let mut between = p.above_set(s).clone();
                    between.intersect_with(p.below_set(ElementId(t)));
                    between.remove(s.0);
                    between.remove(t);
                    subposet_homology_rooted(p, &between)
                };
                table.insert((s.0, t), h);
            }
        }
        PosetHomology { p, table }
    }

    pub fn poset(&self) -> &GradedPoset {
        self.p
    }

    /// `(σ,τ)` for `σ < τ` in `P`.
    pub fn interval(&self, s: ElementId, t: ElementId) -> &HomologyProfile {
        &self.table[&(s.0, t.0)]
    }

    /// `(σ, 1̂)` inside the subposet `within`.
    pub fn upper_within(&self, within: &BitSet, s: ElementId) -> HomologyProfile {
        let mut above = self.p.above_set(s).clone();
        above.intersect_with(within);
        above.remove(s.0);
        subposet_homology_rooted(self.p, &above)
    }

    /// Walks every chain `0̂ < σ₁ < ⋯ < σ_k` inside the ideal `within`,
    /// computing the homology of its link in `O(within)`, and returns the
    /// first chain rejected by `accept`.
    pub fn first_bad_link(
        &self,
        within: &BitSet,
        mut accept: impl FnMut(&[ElementId], &HomologyProfile) -> Result<(), Expectation>,
    ) -> Option<LinkWitness> {
        let mut upper: BTreeMap<usize, HomologyProfile> = BTreeMap::new();
        for s in within.iter() {
            upper.insert(s, self.upper_within(within, ElementId(s)));
        }
        let mut chain = vec![ElementId::BOTTOM];
        self.walk(within, &upper, &mut chain, &HomologyProfile::empty_complex(), &mut accept)
    }

    fn walk(
        &self,
        within: &BitSet,
        upper: &BTreeMap<usize, HomologyProfile>,
        chain: &mut Vec<ElementId>,
        lower: &HomologyProfile,
        accept: &mut impl FnMut(&[ElementId], &HomologyProfile) -> Result<(), Expectation>,
    ) -> Option<LinkWitness> {
        let last = *chain.last().unwrap();
        let link = lower.join(&upper[&last.0]);
        if let Err(expected) = accept(chain, &link) {
            return Some(LinkWitness { chain: chain.clone(), betti: link, expected });
        }
        if lower.is_acyclic() {
            // every extension keeps this acyclic factor
            return self.walk_acyclic(within, upper, chain, accept);
        }
        for t in self.p.above_set(last).iter() {
            if t == last.0 || !within.contains(t) {
                continue;
            }
            let next = lower.join(self.interval(last, ElementId(t)));
            chain.push(ElementId(t));
            let found = self.walk(within, upper, chain, &next, accept);
            chain.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn walk_acyclic(
        &self,
        within: &BitSet,
        upper: &BTreeMap<usize, HomologyProfile>,
        chain: &mut Vec<ElementId>,
        accept: &mut impl FnMut(&[ElementId], &HomologyProfile) -> Result<(), Expectation>,
    ) -> Option<LinkWitness> {
        let last = *chain.last().unwrap();
        for t in self.p.above_set(last).iter() {
            if t == last.0 || !within.contains(t) {
                continue;
            }
            chain.push(ElementId(t));
            let zero = HomologyProfile::default();
            let found = match accept(chain, &zero) {
                Err(expected) => Some(LinkWitness { chain: chain.clone(), betti: zero, expected }),
                Ok(()) => self.walk_acyclic(within, upper, chain, accept),
            };
            chain.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// Gorenstein* test for the ideal `within`, of rank `n`.
    pub fn gorenstein_failure_in(&self, within: &BitSet, n: usize) -> Option<LinkWitness> {
        self.first_bad_link(within, |chain, h| {
            let deg = n as isize - chain.len() as isize;
            if h.is_sphere_of(deg) {
                Ok(())
            } else {
                Err(Expectation::Sphere(deg))
            }
        })
    }

    /// Cohen-Macaulay test for the ideal `within`, of rank `n`.
    pub fn cohen_macaulay_failure_in(&self, within: &BitSet, n: usize) -> Option<LinkWitness> {
        self.first_bad_link(within, |chain, h| {
            let deg = n as isize - chain.len() as isize;
            if h.vanishes_below(deg) {
                Ok(())
            } else {
                Err(Expectation::VanishingBelow(deg))
            }
        })
    }

    /// Near-Gorenstein* test for the pair `(within, boundary)` of rank `n`.
    /// A chain lies in `O(∂)` exactly when its top element lies in `∂`.
    pub fn near_gorenstein_failure_in(
        &self,
        within: &BitSet,
        boundary: &BitSet,
        n: usize,
    ) -> Result<Option<NearGorensteinFailure>, HomologyError> {
        check_boundary(self.p, within, boundary, n)?;
        if n >= 1 {
            if let Some(w) = self.gorenstein_failure_in(boundary, n - 1) {
                return Ok(Some(NearGorensteinFailure::BoundaryNotGorenstein(w)));
            }
        }
        let w = self.first_bad_link(within, |chain, h| {
            let top = chain.last().unwrap();
            if boundary.contains(top.0) {
                if h.is_acyclic() {
                    Ok(())
                } else {
                    Err(Expectation::Acyclic)
                }
            } else {
                let deg = n as isize - chain.len() as isize;
                if h.is_sphere_of(deg) {
                    Ok(())
                } else {
                    Err(Expectation::Sphere(deg))
                }
            }
        });
        Ok(w.map(NearGorensteinFailure::Link))
    }
}

/// Homology of the order complex on `members`, which need not contain `0̂`.
fn subposet_homology_rooted(p: &GradedPoset, members: &BitSet) -> HomologyProfile {
    let mut m = members.clone();
    m.remove(0);
    subposet_homology(p, &m)
}

fn check_boundary(p: &GradedPoset, within: &BitSet, boundary: &BitSet, n: usize) -> Result<(), HomologyError> {
    if !boundary.is_subset(within) || !p.is_ideal(boundary) {
        return Err(HomologyError::BoundaryNotIdeal);
    }
    let got = boundary.iter().map(|x| p.ranks()[x] as isize).max().unwrap_or(-1);
    let expected = n as isize - 1;
    if got != expected {
        return Err(HomologyError::BoundaryWrongRank { expected, got });
    }
    Ok(())
}

/// A poset whose order complex has been certified to be a homology sphere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GorensteinStar(GradedPoset);

impl GorensteinStar {
    pub fn certify(p: &GradedPoset) -> Result<Self, LinkWitness> {
        match gorenstein_star_failure(p) {
            None => Ok(GorensteinStar(p.clone())),
            Some(w) => Err(w),
        }
    }

    pub fn poset(&self) -> &GradedPoset {
        &self.0
    }

    pub fn into_inner(self) -> GradedPoset {
        self.0
    }
}

pub fn gorenstein_star_failure(p: &GradedPoset) -> Option<LinkWitness> {
    PosetHomology::new(p).gorenstein_failure_in(&BitSet::full(p.len()), p.rank())
}

pub fn is_gorenstein_star(p: &GradedPoset) -> bool {
    gorenstein_star_failure(p).is_none()
}

pub fn cohen_macaulay_failure(p: &GradedPoset) -> Option<LinkWitness> {
    PosetHomology::new(p).cohen_macaulay_failure_in(&BitSet::full(p.len()), p.rank())
}

pub fn is_cohen_macaulay(p: &GradedPoset) -> bool {
    cohen_macaulay_failure(p).is_none()
}

pub fn near_gorenstein_star_failure(
    p: &GradedPoset,
    boundary: &BitSet,
) -> Result<Option<NearGorensteinFailure>, HomologyError> {
    PosetHomology::new(p).near_gorenstein_failure_in(&BitSet::full(p.len()), boundary, p.rank())
}

pub fn is_near_gorenstein_star(p: &GradedPoset, boundary: &BitSet) -> Result<bool, HomologyError> {
    Ok(near_gorenstein_star_failure(p, boundary)?.is_none())
}

/// The boundary of a near-Gorenstein* poset: the elements `σ` for which the
/// link of `{0̂ < σ}` is acyclic (with `σ = 0̂` meaning the whole complex).
pub fn derive_boundary(p: &GradedPoset) -> Result<BitSet, HomologyError> {
    let h = PosetHomology::new(p);
    let full = BitSet::full(p.len());
    let mut boundary = BitSet::new(p.len());
    for s in p.elements() {
        let lower = if s == ElementId::BOTTOM {
            HomologyProfile::empty_complex()
        } else {
            h.interval(ElementId::BOTTOM, s).clone()
        };
        if lower.join(&h.upper_within(&full, s)).is_acyclic() {
            boundary.insert(s.0);
        }
    }
    match h.near_gorenstein_failure_in(&full, &boundary, p.rank()) {
        Ok(None) => Ok(boundary),
        _ => Err(HomologyError::NotNearGorenstein),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{boolean_algebra, polygon, with_top};

    fn hexagon() -> SimplicialComplex {
        SimplicialComplex::from_facets(&(0..6).map(|i| vec![i, (i + 1) % 6]).collect::<Vec<_>>())
    }

    #[test]
    fn basic_homology() {
        assert_eq!(reduced_homology(&hexagon()).nonzero(), vec![(1, 1)]);
        let s0 = SimplicialComplex::from_facets(&[vec![0], vec![1]]);
        assert_eq!(reduced_homology(&s0).nonzero(), vec![(0, 1)]);
        let tri = SimplicialComplex::from_facets(&[vec![0, 1, 2]]);
        assert!(reduced_homology(&tri).is_acyclic());
        let empty = SimplicialComplex::from_facets(&[]);
        assert_eq!(reduced_homology(&empty).nonzero(), vec![(-1, 1)]);
    }

    #[test]
    fn order_complex_counts() {
        assert_eq!(order_complex_simplicial(&polygon(3)).f_vector(), vec![1, 6, 6]);
        assert_eq!(order_complex_simplicial(&boolean_algebra(2)).f_vector(), vec![1, 2]);
        assert_eq!(order_complex_simplicial(&boolean_algebra(4)).f_vector(), vec![1, 14, 36, 24]);
    }

    #[test]
    fn links() {
        let h = hexagon();
        assert_eq!(reduced_homology(&h.link(&[0]).unwrap()).nonzero(), vec![(0, 1)]);
        assert_eq!(h.link(&[]).unwrap(), h);
        assert!(h.link(&[0, 3]).is_err());
        let k = order_complex_simplicial(&boolean_algebra(4));
        for v in 1..15 {
            assert_eq!(reduced_homology(&k.link(&[v]).unwrap()).nonzero(), vec![(1, 1)]);
        }
    }

    #[test]
    fn sphere_complexes() {
        assert!(is_gorenstein_complex(&hexagon()).unwrap());
        let path = SimplicialComplex::from_facets(&[vec![0, 1], vec![1, 2], vec![2, 3]]);
        assert!(!is_gorenstein_complex(&path).unwrap());
        let two: Vec<Vec<usize>> = (0..6).map(|i| vec![i, (i + 1) % 6]).chain((0..6).map(|i| vec![6 + i, 6 + (i + 1) % 6])).collect();
        assert!(!is_gorenstein_complex(&SimplicialComplex::from_facets(&two)).unwrap());
        let bad = SimplicialComplex::from_facets(&[vec![0, 1], vec![2]]);
        assert_eq!(is_gorenstein_complex(&bad), Err(HomologyError::NotPure));
    }

    #[test]
    fn poset_certificates() {
        assert!(is_gorenstein_star(&polygon(2)));
        for k in 2..=5 {
            assert!(is_gorenstein_star(&boolean_algebra(k)));
        }
        let ball = with_top(&polygon(3)).poset;
        assert!(!is_gorenstein_star(&ball));
        let bd = BitSet::from_indices(ball.len(), 0..ball.len() - 1);
        assert!(is_near_gorenstein_star(&ball, &bd).unwrap());
        assert_eq!(derive_boundary(&ball).unwrap(), bd);
        assert_eq!(derive_boundary(&polygon(2)), Err(HomologyError::NotNearGorenstein));
        let gon = polygon(2);
        let vs = BitSet::from_indices(gon.len(), [0, 1, 2]);
        assert!(!is_near_gorenstein_star(&gon, &vs).unwrap());
    }

    #[test]
    fn poset_level_matches_complex_level() {
        let samples = [polygon(2), polygon(4), boolean_algebra(4), with_top(&polygon(3)).poset];
        for p in &samples {
            let k = order_complex_simplicial(p);
            assert_eq!(is_gorenstein_star(p), is_gorenstein_complex(&k).unwrap());
        }
    }

    #[test]
    fn disconnected_is_not_cm() {
        // two disjoint 2-chains: 0̂ < a < x, 0̂ < b < y
        let p = GradedPoset::from_covers(2, vec![0, 1, 1, 2, 2], &[(0, 1), (0, 2), (1, 3), (2, 4)]).unwrap();
        assert!(!is_cohen_macaulay(&p));
        assert!(is_cohen_macaulay(&polygon(5)));
    }

    #[test]
    fn euler_characteristic_agrees() {
        for p in [polygon(3), boolean_algebra(4), with_top(&polygon(4)).poset] {
            let k = order_complex_simplicial(&p);
            assert_eq!(reduced_homology(&k).reduced_euler(), k.reduced_euler_from_faces());
        }
    }
}
