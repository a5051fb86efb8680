//! Flag enumeration: chain weights, ab- and cd-indices, the near-Eulerian
//! split, and the index formulas for `Λ_ν` and its semisuspension.
//!
//! Chains always start at `0̂`. Indices are computed by dynamic programming
//! over the materialized order rather than by listing chains: `Ψ_{[x,1̂)}`
//! satisfies `U(x) = (a−b)^{ρ(x,1̂)−1} + Σ_{y>x} (a−b)^{ρ(x,y)−1}·b·U(y)`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::ncpoly::{self, a, a_minus_b_pow, alpha, b, cd_contract, pyr_op, AbPoly, CdPoly, NearCdIndex, PolyError};
use crate::poset::{ElementId, GradedPoset, PosetError, Upper};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlagError {
    #[error("not a chain starting at the minimal element")]
    InvalidChain,
    #[error("poset is not Eulerian")]
    NotEulerian,
    #[error("poset with its top adjoined is not a lattice")]
    NotALattice,
    #[error("element must lie strictly above the minimal element")]
    ElementOutOfRange,
    #[error("boundary is not an ideal of rank n - 1")]
    BadBoundary,
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `wt(x) = (a−b)^{ρ(σ₀,σ₁)−1}·b ⋯ b·(a−b)^{ρ(σ_k,1̂)−1}`.
pub fn weight(p: &GradedPoset, chain: &[ElementId]) -> Result<AbPoly, FlagError> {
    if chain.first() != Some(&ElementId::BOTTOM) || chain.iter().any(|x| !p.contains(*x)) {
        return Err(FlagError::InvalidChain);
    }
    let mut out = AbPoly::one();
    for pair in chain.windows(2) {
        if !p.lt(pair[0], pair[1]) {
            return Err(FlagError::InvalidChain);
        }
        let r = p.rank_of(pair[1]) - p.rank_of(pair[0]);
        out = &(&out * &a_minus_b_pow(r as u32 - 1)) * &b();
    }
    let last = *chain.last().unwrap();
    Ok(&out * &a_minus_b_pow(p.rank_between(last, Upper::Top) as u32 - 1))
}

struct Powers(Vec<AbPoly>);

impl Powers {
    fn new(n: usize) -> Self {
        let mut v = vec![AbPoly::one()];
        let amb = &a() - &b();
        for i in 1..=n + 1 {
            let next = &v[i - 1] * &amb;
            v.push(next);
        }
        Powers(v)
    }

    /// `(a−b)^{r−1}·b`.
    fn step(&self, r: usize) -> AbPoly {
        &self.0[r - 1] * &b()
    }
}

/// `Ψ_{[x,1̂)}` for every element `x`, indexed by id.
pub fn upper_ab_indices(p: &GradedPoset) -> Vec<AbPoly> {
    let n = p.rank();
    let pw = Powers::new(n);
    let steps: Vec<AbPoly> = (1..=n + 1).map(|r| pw.step(r)).collect();
    let mut order: Vec<ElementId> = p.elements().collect();
    order.sort_by_key(|&x| core::cmp::Reverse(p.rank_of(x)));
    let mut u: Vec<AbPoly> = vec![AbPoly::zero(); p.len()];
    for x in order {
        let rx = p.rank_of(x);
        let mut by_gap: Vec<AbPoly> = vec![AbPoly::zero(); n + 2 - rx];
        for y in p.above_set(x).iter() {
            if y != x.0 {
                by_gap[p.ranks()[y] - rx] += &u[y];
            }
        }
        let mut total = pw.0[n - rx].clone();
        for (r, s) in by_gap.iter().enumerate().skip(1) {
            if !s.is_zero() {
                total += &(&steps[r - 1] * s);
            }
        }
        u[x.0] = total;
    }
    u
}

/// `Ψ_{[0̂,π)}` for every element `π`, indexed by id. The entry for `0̂`
/// (an empty interval) is zero.
pub fn lower_ab_indices(p: &GradedPoset) -> Vec<AbPoly> {
    let n = p.rank();
    let pw = Powers::new(n);
    let mut order: Vec<ElementId> = p.elements().collect();
    order.sort_by_key(|&x| p.rank_of(x));
    // v[y]: chains 0̂ < ⋯ < y, weighted up to and including the final b.
    let mut v: Vec<AbPoly> = vec![AbPoly::zero(); p.len()];
    let mut lower: Vec<AbPoly> = vec![AbPoly::zero(); p.len()];
    v[0] = AbPoly::one();
    for y in order.into_iter().skip(1) {
        let ry = p.rank_of(y);
        let mut by_gap: Vec<AbPoly> = vec![AbPoly::zero(); ry + 1];
        for x in p.below_set(y).iter() {
            if x != y.0 {
                by_gap[ry - p.ranks()[x]] += &v[x];
            }
        }
        let mut vy = AbPoly::zero();
        let mut ly = AbPoly::zero();
        for (r, s) in by_gap.iter().enumerate().skip(1) {
            if !s.is_zero() {
                let t = s * &pw.0[r - 1];
                vy += &(&t * &b());
                ly += &t;
            }
        }
        v[y.0] = vy;
        lower[y.0] = ly;
    }
    lower
}

/// Sum of `wt(x)` over every chain, including `{0̂}`.
pub fn ab_index(p: &GradedPoset) -> AbPoly {
    upper_ab_indices(p).swap_remove(0)
}

pub fn cd_index(p: &GradedPoset) -> Result<CdPoly, FlagError> {
    if !p.is_eulerian() {
        return Err(FlagError::NotEulerian);
    }
    contract_eulerian(&ab_index(p))
}

fn contract_eulerian(p: &AbPoly) -> Result<CdPoly, FlagError> {
    cd_contract(p).map_err(|e| match e {
        PolyError::NotExpressible(_) => FlagError::NotEulerian,
        other => FlagError::Poly(other),
    })
}

/// `Ψ_P = Φ + Ψ_∂·a`, both parts contracted to cd-polynomials.
pub fn near_cd_index(p: &GradedPoset, boundary: &BitSet) -> Result<NearCdIndex, FlagError> {
    let psi = ab_index(p);
    let psi_bd = if boundary.is_empty() {
        if p.rank() != 0 {
            return Err(FlagError::BadBoundary);
        }
        AbPoly::zero()
    } else {
        let bd = p.ideal(boundary).map_err(|_| FlagError::BadBoundary)?;
        if p.rank() == 0 || bd.poset.rank() != p.rank() - 1 {
            return Err(FlagError::BadBoundary);
        }
        ab_index(&bd.poset)
    };
    let phi = &psi - &(&psi_bd * &a());
    Ok(NearCdIndex { phi: cd_contract(&phi)?, boundary: cd_contract(&psi_bd)? })
}

fn check_nu(l: &GradedPoset, nu: ElementId) -> Result<(), FlagError> {
    if !l.contains(nu) {
        return Err(PosetError::UnknownElement(nu.0).into());
    }
    if nu == ElementId::BOTTOM {
        return Err(FlagError::ElementOutOfRange);
    }
    if !l.is_lattice() {
        return Err(FlagError::NotALattice);
    }
    Ok(())
}

/// `Σ_{ν≤π<1̂} Ψ_{[0̂,π)}·a·(b−a)^{ρ(π,1̂)−1}`.
pub fn lambda_nu_ab_formula(l: &GradedPoset, nu: ElementId) -> Result<AbPoly, FlagError> {
    check_nu(l, nu)?;
    let lower = lower_ab_indices(l);
    let bma = &b() - &a();
    let mut out = AbPoly::zero();
    for pi in l.above_set(nu).iter() {
        let r = l.rank_between(ElementId(pi), Upper::Top) as u32;
        out += &(&(&lower[pi] * &a()) * &bma.pow(r - 1));
    }
    Ok(out)
}

/// `Σ_{ν≤π<1̂} Ψ_{[0̂,π)}·((a−b)^{r−1} − a(a−b)^{r−2}(1+(−1)^r))·b`, with
/// `r = ρ(π,1̂)`. The second summand is dropped for odd `r`, where its
/// factor `1 + (−1)^r` vanishes.
pub fn star_chain_sum(l: &GradedPoset, nu: ElementId) -> Result<AbPoly, FlagError> {
    check_nu(l, nu)?;
    let lower = lower_ab_indices(l);
    let mut out = AbPoly::zero();
    for pi in l.above_set(nu).iter() {
        let r = l.rank_between(ElementId(pi), Upper::Top) as u32;
        let mut bracket = a_minus_b_pow(r - 1);
        if r % 2 == 0 {
            bracket -= &(&a() * &a_minus_b_pow(r - 2)).scale(&BigInt::from(2));
        }
        out += &(&(&lower[pi] * &bracket) * &b());
    }
    Ok(out)
}

/// `Σ_{ν≤π<1̂} Ψ_{[0̂,π)}·α_{ρ(π,1̂)}` as a cd-polynomial.
pub fn lambda_nu_prime_cd(l: &GradedPoset, nu: ElementId) -> Result<CdPoly, FlagError> {
    check_nu(l, nu)?;
    let lower = lower_ab_indices(l);
    let mut out = CdPoly::zero();
    for pi in l.above_set(nu).iter() {
        let r = l.rank_between(ElementId(pi), Upper::Top) as u32;
        out += &(&contract_eulerian(&lower[pi])? * &alpha(r));
    }
    Ok(out)
}

/// Checks `Pyr(Ψ_{[τ,π)}) − α_{ρ(τ,π)} = Σ_{τ<σ<π} α_{ρ(τ,σ)}·Pyr(Ψ_{[σ,π)})`.
pub fn pyr_alpha_recurrence_check(p: &GradedPoset, tau: ElementId, pi: Upper) -> Result<bool, FlagError> {
    let q = p.interval(tau, pi, false)?.poset;
    let upper = upper_ab_indices(&q);
    let rho = q.rank() as u32 + 1;
    let lhs = &pyr_op(&contract_eulerian(&upper[0])?) - &alpha(rho);
    let mut rhs = CdPoly::zero();
    for s in q.elements().skip(1) {
        let pyr = pyr_op(&contract_eulerian(&upper[s.0])?);
        rhs += &(&alpha(q.rank_of(s) as u32) * &pyr);
    }
    Ok(lhs == rhs)
}

/// `Ψ(a+b, b)`: the coefficient of the word with `b` exactly at the positions
/// of a rank set `S` is the number of chains with rank set `S`.
pub fn flag_f_form(psi: &AbPoly) -> AbPoly {
    use crate::ncpoly::Word;
    let sub = [&a() + &b(), b()];
    psi.map_words(|w| w.letters().fold(AbPoly::one(), |acc, l| &acc * &sub[l as usize]))
}

/// Number of maximal chains, read off the ab-index.
pub fn maximal_chains_from_index(psi: &AbPoly, n: usize) -> BigInt {
    use crate::ncpoly::Word;
    flag_f_form(psi).coeff(&ncpoly::AbWord::from_parts((1u64 << n) - 1, n as u32))
}
