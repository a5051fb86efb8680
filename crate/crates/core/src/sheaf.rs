//! Sheaves of rational vector spaces on graded posets, their cellular
//! complexes, duality, and the `C`/`D` operations whose iterates read off
//! cd-index coefficients as stalk dimensions.
//!
//! Every cellular computation for a poset base runs on its order complex
//! `O(Π)`, where simplicial orientations exist. A sheaf `F` on `Π` is pulled
//! back along `β`, which sends a chain to its largest element.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::constructions::{order_complex, ChainPoset};
use crate::flag::weight;
use crate::homology::{cohen_macaulay_failure, PosetHomology};
use crate::linalg::{Matrix, Q};
use crate::ncpoly::{split_near, AbPoly, CdWord, NearCdIndex, PolyError, Word};
use crate::poset::{Derived, ElementId, GradedPoset, PosetError};

/// Attempts at a surjective generic combination before giving up.
pub const DEFAULT_RETRIES: usize = 8;
/// Bound on numerators and denominators of the random coefficients.
pub const COEFF_BOUND: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SheafError {
    #[error("restriction {upper}->{lower} has shape {got:?}, expected {expected:?}")]
    BadShape { upper: usize, lower: usize, expected: (usize, usize), got: (usize, usize) },
    #[error("{0} -> {1} is not a cover relation")]
    NotACover(usize, usize),
    #[error("restrictions from {upper} to {lower} depend on the path")]
    NotCommutative { upper: usize, lower: usize },
    #[error("support is not closed under intervals")]
    BadSupport,
    #[error("base is not the face poset of a simplicial complex")]
    NotSimplicial,
    #[error("differentials do not compose to zero after degree {0}")]
    NotAComplex(usize),
    #[error("sheaf is not Cohen-Macaulay: H^{degree} over the star of chain {chain:?} is nonzero")]
    NotCohenMacaulay { chain: Vec<ElementId>, degree: usize },
    #[error("[0̂,{0}) is not Gorenstein*")]
    BadBase(ElementId),
    #[error("no surjective combination at {0} after {1} attempts")]
    SurjectivityFailed(ElementId, usize),
    #[error("word has degree {word}, base has rank {rank}")]
    DegreeMismatch { word: usize, rank: usize },
    #[error("operation needs rank at least {needed}, base has rank {rank}")]
    RankTooSmall { needed: usize, rank: usize },
    #[error(transparent)]
    Poset(#[from] PosetError),
}

/// Stalks and restriction maps `F_σ → F_τ` for `τ ≤ σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sheaf {
    base: GradedPoset,
    stalks: Vec<usize>,
    /// Every comparable pair `(σ, τ)` with `τ ≤ σ`; shape `dim F_τ × dim F_σ`.
    res: BTreeMap<(usize, usize), Matrix>,
}

impl Sheaf {
    /// Builds a sheaf from maps on cover relations `(σ, τ)`, `σ ⋗ τ`.
    /// Missing covers are zero maps. Composites along different cover paths
    /// must agree.
    pub fn new(
        base: GradedPoset,
        stalks: Vec<usize>,
        covers: &BTreeMap<(usize, usize), Matrix>,
    ) -> Result<Self, SheafError> {
        assert_eq!(stalks.len(), base.len(), "one stalk per element");
        for (&(s, t), m) in covers {
            if !base.down_covers(ElementId(s)).any(|x| x.0 == t) {
                return Err(SheafError::NotACover(s, t));
            }
            let expected = (stalks[t], stalks[s]);
            if (m.rows(), m.cols()) != expected {
                return Err(SheafError::BadShape { upper: s, lower: t, expected, got: (m.rows(), m.cols()) });
            }
        }
        let mut order: Vec<ElementId> = base.elements().collect();
        order.sort_by_key(|&x| (base.rank_of(x), x));
        let mut res: BTreeMap<(usize, usize), Matrix> = BTreeMap::new();
        let cover = |s: usize, t: usize| covers.get(&(s, t)).cloned().unwrap_or_else(|| Matrix::zeros(stalks[t], stalks[s]));
        for &s in &order {
            res.insert((s.0, s.0), Matrix::identity(stalks[s.0]));
            let downs: Vec<ElementId> = base.down_covers(s).collect();
            for t in base.below_set(s).iter().filter(|&t| t != s.0) {
                let mut value: Option<Matrix> = None;
                for &c in downs.iter().filter(|c| base.le(ElementId(t), **c)) {
                    let m = res[&(c.0, t)].mul(&cover(s.0, c.0));
                    match &value {
                        None => value = Some(m),
                        Some(v) if *v != m => return Err(SheafError::NotCommutative { upper: s.0, lower: t }),
                        Some(_) => {}
                    }
                }
                res.insert((s.0, t), value.expect("graded posets have a cover path"));
            }
        }
        Ok(Sheaf { base, stalks, res })
    }

    pub fn zero(base: &GradedPoset) -> Self {
        Sheaf::new(base.clone(), vec![0; base.len()], &BTreeMap::new()).expect("zero sheaf is valid")
    }

    pub fn base(&self) -> &GradedPoset {
        &self.base
    }

    pub fn stalk(&self, x: ElementId) -> usize {
        self.stalks[x.0]
    }

    pub fn stalks(&self) -> &[usize] {
        &self.stalks
    }

    /// `res^σ_τ` for `τ ≤ σ`.
    pub fn restriction(&self, sigma: ElementId, tau: ElementId) -> &Matrix {
        self.res.get(&(sigma.0, tau.0)).expect("restriction needs tau <= sigma")
    }

    pub fn is_zero(&self) -> bool {
        self.stalks.iter().all(|&d| d == 0)
    }

    /// The sheaf on an ideal of the base, keeping stalks and maps.
    pub fn restrict_to(&self, ideal: &Derived) -> Sheaf {
        let o = |x: usize| ideal.origin[x].expect("ideal elements have origins").0;
        let stalks = (0..ideal.poset.len()).map(|x| self.stalks[o(x)]).collect();
        let res = ideal
            .poset
            .elements()
            .flat_map(|s| ideal.poset.below_set(s).iter().map(move |t| (s.0, t)).collect::<Vec<_>>())
            .map(|(s, t)| ((s, t), self.res[&(o(s), o(t))].clone()))
            .collect();
        Sheaf { base: ideal.poset.clone(), stalks, res }
    }
}

/// `ℝ_S`: one-dimensional stalks on `support`, identity maps inside it.
pub fn constant_sheaf(base: &GradedPoset, support: &BitSet) -> Result<Sheaf, SheafError> {
    for t in support.iter() {
        for s in support.iter() {
            if t != s && base.lt(ElementId(t), ElementId(s)) {
                let mut between = base.above_set(ElementId(t)).clone();
                between.intersect_with(base.below_set(ElementId(s)));
                if !between.is_subset(support) {
                    return Err(SheafError::BadSupport);
                }
            }
        }
    }
    let stalks: Vec<usize> = base.elements().map(|x| usize::from(support.contains(x.0))).collect();
    let covers = base
        .covers()
        .into_iter()
        .map(|(t, s)| ((s, t), Matrix::identity(1).select_rows(&[0][..stalks[t]]).select_cols(&[0][..stalks[s]])))
        .collect();
    Sheaf::new(base.clone(), stalks, &covers)
}

/// `β*(F)` on `O(Π)`, together with the chains behind its elements.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub complex: ChainPoset,
    pub sheaf: Sheaf,
}

pub fn pullback(f: &Sheaf) -> Pullback {
    let complex = order_complex(f.base());
    let q = &complex.poset;
    let top = |x: usize| *complex.chains[x].last().unwrap();
    let stalks = (0..q.len()).map(|x| f.stalk(top(x))).collect();
    let mut res = BTreeMap::new();
    for x in q.elements() {
        for y in q.below_set(x).iter() {
            res.insert((x.0, y), f.restriction(top(x.0), top(y)).clone());
        }
    }
    Pullback { sheaf: Sheaf { base: q.clone(), stalks, res }, complex }
}

/// Vertex lists of a simplicial face poset, for incidence signs.
#[derive(Clone, Debug)]
pub struct Simplicial {
    vertices: Vec<Vec<usize>>,
}

impl Simplicial {
    /// Requires every lower interval `[0̂,x]` to be Boolean.
    pub fn new(base: &GradedPoset) -> Result<Self, SheafError> {
        let mut vertices = Vec::with_capacity(base.len());
        for x in base.elements() {
            let below = base.below_set(x);
            let v: Vec<usize> = below.iter().filter(|&y| base.ranks()[y] == 1).collect();
            let r = base.rank_of(x);
            if v.len() != r || r >= usize::BITS as usize || below.count() != 1 << r {
                return Err(SheafError::NotSimplicial);
            }
            vertices.push(v);
        }
        Ok(Simplicial { vertices })
    }

    /// Incidence sign of the facet `y ⋖ x`.
    fn sign(&self, x: usize, y: usize) -> bool {
        let vy = &self.vertices[y];
        let pos = self.vertices[x].iter().position(|v| vy.binary_search(v).is_err()).expect("y is a facet of x");
        pos % 2 == 0
    }
}

/// Stalk dimensions and maps, as the cellular complex needs them.
trait Coefficients {
    fn base(&self) -> &GradedPoset;
    fn dim(&self, x: usize) -> usize;
    fn map(&self, x: usize, y: usize) -> Matrix;
}

impl Coefficients for Sheaf {
    fn base(&self) -> &GradedPoset {
        &self.base
    }
    fn dim(&self, x: usize) -> usize {
        self.stalks[x]
    }
    fn map(&self, x: usize, y: usize) -> Matrix {
        self.res[&(x, y)].clone()
    }
}

/// The constant sheaf without materialized restriction tables.
struct ConstantView<'a>(&'a GradedPoset);

impl Coefficients for ConstantView<'_> {
    fn base(&self) -> &GradedPoset {
        self.0
    }
    fn dim(&self, _: usize) -> usize {
        1
    }
    fn map(&self, _: usize, _: usize) -> Matrix {
        Matrix::identity(1)
    }
}

/// `C^k = ⊕_{ρ(x) = n−k} F_x` over a subset of a simplicial base, with
/// differentials summing signed restrictions.
#[derive(Clone, Debug)]
pub struct CellularComplex {
    cells: Vec<Vec<usize>>,
    offsets: Vec<BTreeMap<usize, usize>>,
    dims: Vec<usize>,
    d: Vec<Matrix>,
}

impl CellularComplex {
    /// The full complex of a sheaf on a simplicial base. Checks `d∘d = 0`.
    pub fn new(f: &Sheaf) -> Result<Self, SheafError> {
        let simp = Simplicial::new(f.base())?;
        Self::on_subset(f, &simp, &BitSet::full(f.base().len()))
    }

    /// `C•(F, S)`: only cells in `members` appear.
    pub fn on_subset(f: &Sheaf, simp: &Simplicial, members: &BitSet) -> Result<Self, SheafError> {
        let c = build(f, simp, members, usize::MAX);
        for k in 1..c.d.len() {
            if !c.d[k].mul(&c.d[k - 1]).is_zero() {
                return Err(SheafError::NotAComplex(k - 1));
            }
        }
        Ok(c)
    }

    /// Elements indexing `C^k`.
    pub fn cells(&self, k: usize) -> &[usize] {
        &self.cells[k]
    }

    pub fn term_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn differential(&self, k: usize) -> &Matrix {
        &self.d[k]
    }

    /// `dim H^k` for every `k`.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.d.iter().map(Matrix::rank).collect();
        (0..self.dims.len())
            .map(|k| {
                let out = ranks.get(k).copied().unwrap_or(0);
                let inc = if k == 0 { 0 } else { ranks[k - 1] };
                self.dims[k] - out - inc
            })
            .collect()
    }

    /// Basis of `H⁰ = ker d⁰`, in the coordinates of `C⁰`.
    pub fn h0_basis(&self) -> Matrix {
        match self.d.first() {
            Some(d0) => d0.nullspace(),
            None => Matrix::identity(self.dims.first().copied().unwrap_or(0)),
        }
    }
}

fn build(f: &dyn Coefficients, simp: &Simplicial, members: &BitSet, max_differentials: usize) -> CellularComplex {
    let base = f.base();
    let n = base.rank();
    let mut cells = vec![Vec::new(); n + 1];
    for x in members.iter() {
        cells[n - base.ranks()[x]].push(x);
    }
    let mut offsets = Vec::with_capacity(n + 1);
    let mut dims = Vec::with_capacity(n + 1);
    for layer in &cells {
        let mut off = BTreeMap::new();
        let mut total = 0;
        for &x in layer {
            off.insert(x, total);
            total += f.dim(x);
        }
        offsets.push(off);
        dims.push(total);
    }
    let mut d = Vec::new();
    for k in 0..n.min(max_differentials) {
        let mut m = Matrix::zeros(dims[k + 1], dims[k]);
        for &x in &cells[k] {
            let (cx, dx) = (offsets[k][&x], f.dim(x));
            if dx == 0 {
                continue;
            }
            for y in base.down_covers(ElementId(x)) {
                let Some(&cy) = offsets[k + 1].get(&y.0) else { continue };
                let r = f.map(x, y.0);
                let positive = simp.sign(x, y.0);
                for i in 0..r.rows() {
                    for j in 0..dx {
                        let v = r.get(i, j);
                        if !v.is_zero() {
                            m.add_at(cy + i, cx + j, &if positive { v.clone() } else { -v.clone() });
                        }
                    }
                }
            }
        }
        d.push(m);
    }
    CellularComplex { cells, offsets, dims, d }
}

/// A sheaf certified Cohen-Macaulay: on the order complex every star
/// `[x,1̂)` has cellular cohomology only in degree 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohenMacaulay(Sheaf);

impl CohenMacaulay {
    /// Checks every star of `β*(F)` directly.
    pub fn certify(f: &Sheaf) -> Result<Self, SheafError> {
        let pb = pullback(f);
        let q = &pb.complex.poset;
        let simp = Simplicial::new(q)?;
        for x in q.elements() {
            let c = CellularComplex::on_subset(&pb.sheaf, &simp, q.above_set(x))?;
            if let Some(k) = c.cohomology_dims().iter().skip(1).position(|&h| h != 0) {
                return Err(SheafError::NotCohenMacaulay { chain: pb.complex.chains[x.0].clone(), degree: k + 1 });
            }
        }
        Ok(CohenMacaulay(f.clone()))
    }

    /// `ℝ_Π` is Cohen-Macaulay exactly when `Π` is, which the homology
    /// module decides from interval Betti numbers.
    pub fn constant(p: &GradedPoset) -> Result<Self, SheafError> {
        if let Some(w) = cohen_macaulay_failure(p) {
            // H^i over the star of x is H̃_{n−ρ(x)−1−i} of the link of x
            let low = w.betti.nonzero()[0].0;
            let degree = usize::try_from(p.rank() as isize - w.chain.len() as isize - low).unwrap_or(0);
            return Err(SheafError::NotCohenMacaulay { chain: w.chain, degree });
        }
        Ok(CohenMacaulay(constant_sheaf(p, &BitSet::full(p.len()))?))
    }

    pub fn sheaf(&self) -> &Sheaf {
        &self.0
    }

    pub fn into_inner(self) -> Sheaf {
        self.0
    }
}

pub fn is_cm_sheaf(f: &Sheaf) -> bool {
    CohenMacaulay::certify(f).is_ok()
}

/// Cohen-Macaulay with `dim H⁰` over each star equal to the stalk.
pub fn is_gorenstein_sheaf(f: &Sheaf) -> Result<bool, SheafError> {
    let pb = pullback(f);
    let q = &pb.complex.poset;
    let simp = Simplicial::new(q)?;
    for x in q.elements() {
        let h = CellularComplex::on_subset(&pb.sheaf, &simp, q.above_set(x))?.cohomology_dims();
        if h.iter().skip(1).any(|&v| v != 0) || h[0] != pb.sheaf.stalk(x) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A full-column-rank matrix with a cached left inverse on pivot rows.
#[derive(Clone, Debug)]
struct ColumnBasis {
    k: Matrix,
    rows: Vec<usize>,
    inv: Matrix,
}

impl ColumnBasis {
    fn new(k: Matrix) -> Self {
        let rows = k.independent_rows();
        let inv = k.select_rows(&rows).inverse().expect("pivot rows of a basis are invertible");
        ColumnBasis { k, rows, inv }
    }

    fn dim(&self) -> usize {
        self.k.cols()
    }

    /// `u` with `K u = v`, if `v` lies in the span.
    fn coords(&self, v: &Matrix) -> Option<Matrix> {
        let u = self.inv.mul(&v.select_rows(&self.rows));
        (self.k.mul(&u) == *v).then_some(u)
    }
}

/// `H⁰` over the star of one chain, with the layout of its `C⁰`.
struct StarH0 {
    basis: ColumnBasis,
    offsets: BTreeMap<usize, usize>,
}

impl StarH0 {
    fn new(pulled: &Sheaf, simp: &Simplicial, x: ElementId) -> Self {
        let c = build(pulled, simp, pulled.base().above_set(x), 1);
        StarH0 { basis: ColumnBasis::new(c.h0_basis()), offsets: c.offsets.into_iter().next().unwrap_or_default() }
    }

    /// Matrix of the projection `H⁰(x) → H⁰(y)` for `x ⊆ y`.
    fn projection_to(&self, other: &StarH0, pulled: &Sheaf) -> Matrix {
        let k = &self.basis.k;
        let mut proj = Matrix::zeros(other.basis.k.rows(), k.cols());
        for (&m, &to) in &other.offsets {
            let from = self.offsets[&m];
            for i in 0..pulled.stalk(ElementId(m)) {
                for j in 0..k.cols() {
                    proj.set(to + i, j, k.get(from + i, j).clone());
                }
            }
        }
        other.basis.coords(&proj).expect("projection of a cocycle is a cocycle")
    }
}

/// Everything computed on the way to `F^∨`, reused by `D`.
struct DualParts {
    pulled: Sheaf,
    chains: Vec<Vec<ElementId>>,
    simp: Simplicial,
    stars: Vec<StarH0>,
    dual: Sheaf,
}

fn dual_parts(f: &Sheaf) -> Result<DualParts, SheafError> {
    let base = f.base();
    let Pullback { complex, sheaf: pulled } = pullback(f);
    let simp = Simplicial::new(&complex.poset)?;
    let index: BTreeMap<&[ElementId], usize> = complex.chains.iter().enumerate().map(|(i, c)| (&c[..], i)).collect();
    let chain_id = |c: &[ElementId]| index[c];
    // σ ↦ the element {0̂ < σ} (or {0̂}) of O(Π)
    let chain_of: Vec<usize> = base
        .elements()
        .map(|s| if s == ElementId::BOTTOM { chain_id(&[s]) } else { chain_id(&[ElementId::BOTTOM, s]) })
        .collect();
    let stars: Vec<StarH0> = chain_of.iter().map(|&x| StarH0::new(&pulled, &simp, ElementId(x))).collect();
    let mut covers = BTreeMap::new();
    for (t, s) in base.covers() {
        let sigma = &stars[s];
        let m = if t == 0 {
            stars[0].projection_to(sigma, &pulled).transpose()
        } else {
            let y = StarH0::new(&pulled, &simp, ElementId(chain_id(&[ElementId::BOTTOM, ElementId(t), ElementId(s)])));
            let down = stars[t].projection_to(&y, &pulled).transpose();
            let across = sigma.projection_to(&y, &pulled).transpose();
            down.mul(&across.inverse().expect("dual restriction along a fiber is invertible"))
        };
        covers.insert((s, t), m);
    }
    let dims = stars.iter().map(|s| s.basis.dim()).collect();
    let dual = Sheaf::new(base.clone(), dims, &covers)?;
    Ok(DualParts { pulled, chains: complex.chains, simp, stars, dual })
}

/// `F^∨` with `F^∨_σ = H⁰(C•(β*F, [{0̂<σ},1̂)))^*`.
pub fn dual_sheaf(f: &CohenMacaulay) -> Result<CohenMacaulay, SheafError> {
    Ok(CohenMacaulay(dual_parts(f.sheaf())?.dual))
}

/// `Σ_{π ≥ σ} (−1)^{n−ρ(π)} dim F_π` for each `σ`.
pub fn dual_dimension_formula(f: &Sheaf) -> Vec<i64> {
    let p = f.base();
    let n = p.rank();
    p.elements()
        .map(|s| {
            p.above_set(s)
                .iter()
                .map(|t| {
                    let d = f.stalks[t] as i64;
                    if (n - p.ranks()[t]) % 2 == 0 { d } else { -d }
                })
                .sum()
        })
        .collect()
}

/// Restriction to the `(n−1)`-skeleton.
pub fn op_c(f: &CohenMacaulay) -> Result<CohenMacaulay, SheafError> {
    let base = f.sheaf().base();
    if base.rank() == 0 {
        return Err(SheafError::RankTooSmall { needed: 1, rank: 0 });
    }
    let skel = base.skeleton(base.rank() - 1)?;
    Ok(CohenMacaulay(f.sheaf().restrict_to(&skel)))
}

/// The seed-independent part of `D`: the dual `C(F)^∨` and, for every
/// element `τ` of the skeleton, the rank-one pieces `ℓ·uᵀ` of each `α_f`.
pub struct DPlan {
    dual: Sheaf,
    skeleton: Derived,
    lower: Derived,
    g_dims: Vec<usize>,
    sections: usize,
    /// Per `τ ∈ Π^{≤n−1}`: `(section, ℓ, u)` with `α_f,τ = ℓ uᵀ`.
    pieces: Vec<Vec<(usize, Matrix, Matrix)>>,
}

impl DPlan {
    pub fn prepare(f: &CohenMacaulay) -> Result<Self, SheafError> {
        let f = f.sheaf();
        let base = f.base();
        let n = base.rank();
        if n < 2 {
            return Err(SheafError::RankTooSmall { needed: 2, rank: n });
        }
        let skeleton = base.skeleton(n - 1)?;
        let g = f.restrict_to(&skeleton);
        let parts = dual_parts(&g)?;
        let sk = &skeleton.poset;
        let to_base = |x: usize| skeleton.origin[x].unwrap();
        let q = parts.pulled.base();
        let top_chain = |m: usize| parts.chains[m].last().unwrap().0;
        let mut pieces: Vec<Vec<(usize, Matrix, Matrix)>> = vec![Vec::new(); sk.len()];
        let mut sections = 0;
        for sigma in base.elements_of_rank(n) {
            let below = BitSet::from_indices(
                sk.len(),
                sk.elements().filter(|&t| base.lt(to_base(t.0), sigma)).map(|t| t.0),
            );
            let support = BitSet::from_indices(q.len(), q.elements().filter(|&x| below.contains(top_chain(x.0))).map(|x| x.0));
            let c = build(&ConstantView(q), &parts.simp, &support, 1);
            let g0 = c.h0_basis();
            if g0.cols() != 1 {
                return Err(SheafError::BadBase(sigma));
            }
            let flip = g0.col(0).iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative());
            let g0 = if flip { g0.scale(&-Q::one()) } else { g0 };
            let g0_at: BTreeMap<usize, Q> = c.offsets[0].iter().map(|(&m, &o)| (m, g0.get(o, 0).clone())).collect();
            for j in 0..f.stalk(sigma) {
                for tau in below.iter() {
                    let star = &parts.stars[tau];
                    let mut v = Matrix::zeros(star.basis.k.rows(), 1);
                    for (&m, &off) in &star.offsets {
                        let Some(coef) = g0_at.get(&m) else { continue };
                        let r = f.restriction(sigma, to_base(top_chain(m)));
                        for i in 0..r.rows() {
                            v.set(off + i, 0, coef * r.get(i, j));
                        }
                    }
                    let u = star.basis.coords(&v).ok_or(SheafError::BadBase(sigma))?;
                    let l = f.restriction(sigma, to_base(tau)).select_cols(&[j]);
                    pieces[tau].push((sections, l, u));
                }
                sections += 1;
            }
        }
        let lower = sk.skeleton(n - 2)?;
        Ok(DPlan { g_dims: g.stalks().to_vec(), dual: parts.dual, skeleton, lower, sections, pieces })
    }

    /// `D(F) = ker α` for a random combination, retrying until `α` is
    /// surjective on every rank `n−1` element.
    pub fn apply<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<CohenMacaulay, SheafError> {
        let mut last = ElementId::BOTTOM;
        for _ in 0..DEFAULT_RETRIES {
            let lambda: Vec<Q> = (0..self.sections).map(|_| random_coefficient(rng)).collect();
            match self.apply_with(&lambda) {
                Ok(sheaf) => return Ok(sheaf),
                Err(SheafError::SurjectivityFailed(t, _)) => last = t,
                Err(e) => return Err(e),
            }
        }
        Err(SheafError::SurjectivityFailed(last, DEFAULT_RETRIES))
    }

    /// `D(F)` for the given coefficients, one per section of a top stalk.
    pub fn apply_with(&self, lambda: &[Q]) -> Result<CohenMacaulay, SheafError> {
        assert_eq!(lambda.len(), self.sections, "one coefficient per section");
        let sk = &self.skeleton.poset;
        let n1 = sk.rank();
        let alpha: Vec<Matrix> = sk
            .elements()
            .map(|t| {
                let mut a = Matrix::zeros(self.g_dims[t.0], self.dual.stalk(t));
                for (f, l, u) in &self.pieces[t.0] {
                    a = a.add(&l.mul(&u.transpose()).scale(&lambda[*f]));
                }
                a
            })
            .collect();
        for t in sk.elements_of_rank(n1) {
            let a = &alpha[t.0];
            if a.rows() != a.cols() || a.rank() != a.rows() {
                return Err(SheafError::SurjectivityFailed(self.skeleton.origin[t.0].unwrap(), 1));
            }
        }
        let lower = &self.lower;
        let orig = |x: usize| lower.origin[x].unwrap();
        let kernels: Vec<ColumnBasis> = (0..lower.poset.len()).map(|x| ColumnBasis::new(alpha[orig(x).0].nullspace())).collect();
        let mut covers = BTreeMap::new();
        for (t, s) in lower.poset.covers() {
            let image = self.dual.restriction(orig(s), orig(t)).mul(&kernels[s].k);
            let m = kernels[t].coords(&image).expect("α commutes with restrictions");
            covers.insert((s, t), m);
        }
        let stalks = kernels.iter().map(ColumnBasis::dim).collect();
        Ok(CohenMacaulay(Sheaf::new(lower.poset.clone(), stalks, &covers)?))
    }
}

fn random_coefficient<R: Rng + ?Sized>(rng: &mut R) -> Q {
    let num = rng.gen_range(-COEFF_BOUND..=COEFF_BOUND);
    let den = rng.gen_range(1..=COEFF_BOUND);
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn op_d<R: Rng + ?Sized>(f: &CohenMacaulay, rng: &mut R) -> Result<CohenMacaulay, SheafError> {
    DPlan::prepare(f)?.apply(rng)
}

/// `Ψ_F = Σ_x wt(x) · dim β*(F)_x` over all chains `x`.
pub fn sheaf_ab_index(f: &Sheaf) -> AbPoly {
    let p = f.base();
    let mut out = AbPoly::zero();
    for chain in p.chains() {
        let d = f.stalk(*chain.last().unwrap());
        if d != 0 {
            out += &weight(p, &chain).expect("chains from 0̂ are valid").scale(&BigInt::from(d));
        }
    }
    out
}

/// `Ψ_F = f + g·a` as cd-polynomials.
pub fn sheaf_cd_split(f: &Sheaf) -> Result<NearCdIndex, PolyError> {
    split_near(&sheaf_ab_index(f), f.base().rank())
}

/// The operations of `w`, in the order they are applied: the last letter
/// acts first, because `C` strips the top rank and the last letter of a
/// chain weight records the top of the chain.
pub fn operations(w: &CdWord) -> Vec<u8> {
    let mut ops: Vec<u8> = w.letters().collect();
    ops.reverse();
    ops
}

/// `w(C,D)(F)`, with the stalk dimension at `0̂` as result.
pub fn apply_word<R: Rng + ?Sized>(f: &CohenMacaulay, w: &CdWord, rng: &mut R) -> Result<usize, SheafError> {
    let rank = f.sheaf().base().rank();
    if w.degree() as usize != rank {
        return Err(SheafError::DegreeMismatch { word: w.degree() as usize, rank });
    }
    let mut cur = f.clone();
    for op in operations(w) {
        cur = if op == 0 { op_c(&cur)? } else { op_d(&cur, rng)? };
    }
    Ok(cur.sheaf().stalk(ElementId::BOTTOM))
}

/// Checks that every `[0̂,σ)` is Gorenstein*.
pub fn check_base(p: &GradedPoset) -> Result<(), SheafError> {
    let h = PosetHomology::new(p);
    for s in p.elements().filter(|&s| s != ElementId::BOTTOM) {
        let mut below = p.below_set(s).clone();
        below.remove(s.0);
        if h.gorenstein_failure_in(&below, p.rank_of(s) - 1).is_some() {
            return Err(SheafError::BadBase(s));
        }
    }
    Ok(())
}

/// The coefficient of `w` read off as `dim w(C,D)(ℝ_P)_{0̂}`.
pub fn cd_coefficient_via_cd<R: Rng + ?Sized>(p: &GradedPoset, w: &CdWord, rng: &mut R) -> Result<usize, SheafError> {
    CdExtractor::new(p)?.coefficient(w, rng)
}

/// Repeated coefficient extraction on one sheaf. The sheaves reached by
/// `C` alone and the plans for the first `D` do not depend on the seed and
/// are cached.
pub struct CdExtractor {
    root: CohenMacaulay,
    after_c: BTreeMap<usize, CohenMacaulay>,
    plans: BTreeMap<usize, DPlan>,
}

impl CdExtractor {
    /// For `ℝ_P`; checks the base and the Cohen-Macaulay property.
    pub fn new(p: &GradedPoset) -> Result<Self, SheafError> {
        check_base(p)?;
        Ok(Self::for_sheaf(CohenMacaulay::constant(p)?))
    }

    pub fn for_sheaf(f: CohenMacaulay) -> Self {
        CdExtractor { root: f, after_c: BTreeMap::new(), plans: BTreeMap::new() }
    }

    fn c_power(&mut self, k: usize) -> Result<CohenMacaulay, SheafError> {
        if k == 0 {
            return Ok(self.root.clone());
        }
        if let Some(s) = self.after_c.get(&k) {
            return Ok(s.clone());
        }
        let prev = self.c_power(k - 1)?;
        let s = op_c(&prev)?;
        self.after_c.insert(k, s.clone());
        Ok(s)
    }

    pub fn coefficient<R: Rng + ?Sized>(&mut self, w: &CdWord, rng: &mut R) -> Result<usize, SheafError> {
        let rank = self.root.sheaf().base().rank();
        if w.degree() as usize != rank {
            return Err(SheafError::DegreeMismatch { word: w.degree() as usize, rank });
        }
        let ops = operations(w);
        let lead = ops.iter().take_while(|&&o| o == 0).count();
        let mut cur = self.c_power(lead)?;
        if lead < ops.len() {
            if !self.plans.contains_key(&lead) {
                let plan = DPlan::prepare(&cur)?;
                self.plans.insert(lead, plan);
            }
            cur = self.plans[&lead].apply(rng)?;
            for &op in &ops[lead + 1..] {
                cur = if op == 0 { op_c(&cur)? } else { op_d(&cur, rng)? };
            }
        }
        Ok(cur.sheaf().stalk(ElementId::BOTTOM))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{boolean_algebra, polygon, with_top};
    use crate::homology::{order_complex_simplicial, reduced_homology};
    use crate::ncpoly::parse_word;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn word(s: &str) -> CdWord {
        parse_word(s).unwrap()
    }

    #[test]
    fn constant_sheaf_cohomology_is_homology() {
        let p = polygon(6);
        let pb = pullback(&constant_sheaf(&p, &BitSet::full(p.len())).unwrap());
        let c = CellularComplex::new(&pb.sheaf).unwrap();
        let h = reduced_homology(&order_complex_simplicial(&p));
        let n = pb.sheaf.base().rank() as isize;
        for (i, &dim) in c.cohomology_dims().iter().enumerate() {
            assert_eq!(dim, h.get(n - i as isize - 1));
        }
    }

    #[test]
    fn support_must_be_convex() {
        let p = polygon(3);
        let bad = BitSet::from_indices(p.len(), [0, 4]);
        assert_eq!(constant_sheaf(&p, &bad), Err(SheafError::BadSupport));
        assert!(constant_sheaf(&p, &BitSet::from_indices(p.len(), [4])).is_ok());
    }

    #[test]
    fn cm_and_duals() {
        let p = polygon(3);
        let f = CohenMacaulay::certify(&constant_sheaf(&p, &BitSet::full(p.len())).unwrap()).unwrap();
        assert!(is_gorenstein_sheaf(f.sheaf()).unwrap());
        let d = dual_sheaf(&f).unwrap();
        assert_eq!(d.sheaf().stalks(), f.sheaf().stalks());
        let dims: Vec<i64> = d.sheaf().stalks().iter().map(|&x| x as i64).collect();
        assert_eq!(dims, dual_dimension_formula(f.sheaf()));

        let ball = with_top(&polygon(3)).poset;
        let fb = CohenMacaulay::certify(&constant_sheaf(&ball, &BitSet::full(ball.len())).unwrap()).unwrap();
        let db = dual_sheaf(&fb).unwrap();
        let top = ball.len() - 1;
        let expected: Vec<usize> = (0..ball.len()).map(|x| usize::from(x == top)).collect();
        assert_eq!(db.sheaf().stalks(), &expected[..]);
        let dd = dual_sheaf(&db).unwrap();
        assert_eq!(dd.sheaf().stalks(), fb.sheaf().stalks());
    }

    #[test]
    fn disconnected_is_not_cm() {
        let p = GradedPoset::from_covers(2, vec![0, 1, 1, 2, 2], &[(0, 1), (0, 2), (1, 3), (2, 4)]).unwrap();
        let f = constant_sheaf(&p, &BitSet::full(p.len())).unwrap();
        assert!(!is_cm_sheaf(&f));
        assert!(CohenMacaulay::constant(&p).is_err());
        assert!(is_cm_sheaf(&Sheaf::zero(&p)));
    }

    #[test]
    fn small_coefficients() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p3 = polygon(3);
        assert_eq!(cd_coefficient_via_cd(&p3, &word("cc"), &mut rng).unwrap(), 1);
        assert_eq!(cd_coefficient_via_cd(&p3, &word("d"), &mut rng).unwrap(), 1);
        assert_eq!(cd_coefficient_via_cd(&polygon(2), &word("d"), &mut rng).unwrap(), 0);
        let b4 = boolean_algebra(4);
        let mut ex = CdExtractor::new(&b4).unwrap();
        let got: Vec<usize> = ["ccc", "cd", "dc"].iter().map(|w| ex.coefficient(&word(w), &mut rng).unwrap()).collect();
        assert_eq!(got, vec![1, 2, 2]);
    }

    #[test]
    fn letter_order_on_the_cube() {
        // c^3 + 4cd + 6dc tells the two orders apart
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut ex = CdExtractor::new(&crate::corpus::cube()).unwrap();
        assert_eq!(ex.coefficient(&word("cd"), &mut rng).unwrap(), 4);
        assert_eq!(ex.coefficient(&word("dc"), &mut rng).unwrap(), 6);
    }

    #[test]
    fn sheaf_ab_index_of_constant_is_ab_index() {
        let p = polygon(5);
        let f = constant_sheaf(&p, &BitSet::full(p.len())).unwrap();
        assert_eq!(sheaf_ab_index(&f), crate::flag::ab_index(&p));
        assert!(sheaf_ab_index(&Sheaf::zero(&p)).is_zero());
    }
}

