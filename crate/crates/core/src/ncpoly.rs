//! Noncommutative polynomials over the alphabets `{a, b}` and `{c, d}`.
//!
//! Words are packed into a `u64` with an explicit letter count, first letter
//! in the highest used bit. Polynomials map words to nonzero [`BigInt`]
//! coefficients in a `BTreeMap`, so iteration follows the canonical
//! degree-lexicographic order used for printing.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::Hash;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::linalg::{Matrix, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("polynomial cannot be written in c and d (offending word {0})")]
    NotExpressible(String),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("word longer than 64 letters")]
    TooLong,
}

/// Common behaviour of the two packed word types.
pub trait Word: Copy + Ord + Hash + fmt::Debug {
    /// The two letters, indexed by bit value.
    const LETTERS: [char; 2];
    /// Degree of each letter, indexed by bit value.
    const LETTER_DEGREE: [usize; 2];

    fn from_parts(bits: u64, len: u32) -> Self;
    fn bits(&self) -> u64;
    fn len(&self) -> u32;

    fn empty() -> Self {
        Self::from_parts(0, 0)
    }

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn letter(i: u8) -> Self {
        Self::from_parts(u64::from(i), 1)
    }

    /// Letter at position `i`, counted from the left.
    fn at(&self, i: u32) -> u8 {
        ((self.bits() >> (self.len() - 1 - i)) & 1) as u8
    }

    fn letters(&self) -> WordLetters<Self> {
        WordLetters { word: *self, pos: 0 }
    }

    fn concat(&self, other: &Self) -> Self {
        assert!(self.len() + other.len() <= 64, "word longer than 64 letters");
        let shifted = if other.len() == 64 { 0 } else { self.bits() << other.len() };
        Self::from_parts(shifted | other.bits(), self.len() + other.len())
    }

    fn push(&self, letter: u8) -> Self {
        self.concat(&Self::letter(letter))
    }

    fn degree(&self) -> usize {
        let ones = self.bits().count_ones() as usize;
        let zeros = self.len() as usize - ones;
        zeros * Self::LETTER_DEGREE[0] + ones * Self::LETTER_DEGREE[1]
    }

    fn from_letters(letters: &[u8]) -> Self {
        letters.iter().fold(Self::empty(), |w, &l| w.push(l))
    }

    /// Subword of letters `[start, end)`.
    fn slice(&self, start: u32, end: u32) -> Self {
        let width = end - start;
        let shifted = self.bits() >> (self.len() - end);
        let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
        Self::from_parts(shifted & mask, width)
    }
}

pub struct WordLetters<W> {
    word: W,
    pos: u32,
}

impl<W: Word> Iterator for WordLetters<W> {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        if self.pos >= self.word.len() {
            return None;
        }
        let l = self.word.at(self.pos);
        self.pos += 1;
        Some(l)
    }
}

fn fmt_word<W: Word>(w: &W, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let letters: Vec<u8> = w.letters().collect();
    let mut i = 0;
    while i < letters.len() {
        let mut j = i;
        while j < letters.len() && letters[j] == letters[i] {
            j += 1;
        }
        let ch = W::LETTERS[letters[i] as usize];
        if j - i == 1 {
            write!(f, "{ch}")?;
        } else {
            write!(f, "{ch}^{}", j - i)?;
        }
        i = j;
    }
    Ok(())
}

/// A word in `a` (bit 0) and `b` (bit 1); both letters have degree one.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct AbWord {
    bits: u64,
    len: u32,
}

impl Word for AbWord {
    const LETTERS: [char; 2] = ['a', 'b'];
    const LETTER_DEGREE: [usize; 2] = [1, 1];

    fn from_parts(bits: u64, len: u32) -> Self {
        AbWord { bits, len }
    }
    fn bits(&self) -> u64 {
        self.bits
    }
    fn len(&self) -> u32 {
        self.len
    }
}

impl Ord for AbWord {
    fn cmp(&self, other: &Self) -> Ordering {
        // Equal lengths compare lexicographically through the packed bits.
        self.len.cmp(&other.len).then(self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for AbWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for AbWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_word(self, f)
    }
}

/// A word in `c` (bit 0, degree one) and `d` (bit 1, degree two).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct CdWord {
    bits: u64,
    len: u32,
}

impl Word for CdWord {
    const LETTERS: [char; 2] = ['c', 'd'];
    const LETTER_DEGREE: [usize; 2] = [1, 2];

    fn from_parts(bits: u64, len: u32) -> Self {
        CdWord { bits, len }
    }
    fn bits(&self) -> u64 {
        self.bits
    }
    fn len(&self) -> u32 {
        self.len
    }
}

impl Ord for CdWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.letters().cmp(other.letters()))
    }
}

impl PartialOrd for CdWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CdWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_word(self, f)
    }
}

impl CdWord {
    /// All cd-words of the given degree, in canonical order.
    pub fn all_of_degree(n: usize) -> Vec<CdWord> {
        fn go(rest: usize, prefix: CdWord, out: &mut Vec<CdWord>) {
            if rest == 0 {
                out.push(prefix);
                return;
            }
            go(rest - 1, prefix.push(0), out);
            if rest >= 2 {
                go(rest - 2, prefix.push(1), out);
            }
        }
        let mut out = Vec::new();
        go(n, CdWord::empty(), &mut out);
        out.sort();
        out
    }
}

impl AbWord {
    /// All ab-words of length `n`.
    pub fn all_of_degree(n: u32) -> Vec<AbWord> {
        assert!(n < 64);
        (0..(1u64 << n)).map(|bits| AbWord::from_parts(bits, n)).collect()
    }
}

/// Integer-coefficient polynomial in noncommuting letters. Zero coefficients
/// are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NcPoly<W: Word> {
    terms: BTreeMap<W, BigInt>,
}

pub type AbPoly = NcPoly<AbWord>;
pub type CdPoly = NcPoly<CdWord>;

impl<W: Word> Default for NcPoly<W> {
    fn default() -> Self {
        NcPoly { terms: BTreeMap::new() }
    }
}

impl<W: Word> NcPoly<W> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(W::empty(), BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(W::empty(), c.into())
    }

    pub fn monomial(w: W, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c.into());
        p
    }

    /// Single letter `0` or `1` of the alphabet.
    pub fn var(letter: u8) -> Self {
        Self::monomial(W::letter(letter), 1)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (W, BigInt)>) -> Self {
        let mut p = Self::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, w: W, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(w).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &W) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&W, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `Some(d)` when every term has degree `d`; `None` for mixed degrees.
    /// The zero polynomial counts as homogeneous of every degree and reports 0.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(Word::degree);
        match degs.next() {
            None => Some(0),
            Some(d) => degs.all(|e| e == d).then_some(d),
        }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        NcPoly { terms: self.terms.iter().map(|(w, c)| (*w, c * s)).collect() }
    }

    /// Divides every coefficient exactly; `None` if some coefficient is not divisible.
    pub fn div_exact(&self, s: &BigInt) -> Option<Self> {
        let mut out = BTreeMap::new();
        for (w, c) in &self.terms {
            let (q, r) = c.div_rem(s);
            if !r.is_zero() {
                return None;
            }
            out.insert(*w, q);
        }
        Some(NcPoly { terms: out })
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Linear map defined on words.
    pub fn map_words<V: Word>(&self, f: impl Fn(&W) -> NcPoly<V>) -> NcPoly<V> {
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            out += &f(w).scale(c);
        }
        out
    }

    /// First word, in canonical order, where `self` exceeds `other`, with both coefficients.
    pub fn first_excess(&self, other: &Self) -> Option<(W, BigInt, BigInt)> {
        let words: BTreeMap<W, ()> = self.terms.keys().chain(other.terms.keys()).map(|w| (*w, ())).collect();
        words.into_keys().find_map(|w| {
            let (p, q) = (self.coeff(&w), other.coeff(&w));
            (p > q).then_some((w, p, q))
        })
    }

    pub fn all_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }
}

/// `p ≤ q` coefficientwise, missing coefficients read as zero.
pub fn coeffwise_leq<W: Word>(p: &NcPoly<W>, q: &NcPoly<W>) -> bool {
    p.first_excess(q).is_none()
}

impl<W: Word> fmt::Display for NcPoly<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if w.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                fmt_word(w, f)?;
            } else {
                write!(f, "{mag}*")?;
                fmt_word(w, f)?;
            }
        }
        Ok(())
    }
}

impl<W: Word> fmt::Debug for NcPoly<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NcPoly({self})")
    }
}

impl<W: Word> AddAssign<&NcPoly<W>> for NcPoly<W> {
    fn add_assign(&mut self, rhs: &NcPoly<W>) {
        for (w, c) in &rhs.terms {
            self.add_term(*w, c.clone());
        }
    }
}

impl<W: Word> SubAssign<&NcPoly<W>> for NcPoly<W> {
    fn sub_assign(&mut self, rhs: &NcPoly<W>) {
        for (w, c) in &rhs.terms {
            self.add_term(*w, -c);
        }
    }
}

impl<W: Word> Add for &NcPoly<W> {
    type Output = NcPoly<W>;
    fn add(self, rhs: &NcPoly<W>) -> NcPoly<W> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<W: Word> Sub for &NcPoly<W> {
    type Output = NcPoly<W>;
    fn sub(self, rhs: &NcPoly<W>) -> NcPoly<W> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<W: Word> Neg for &NcPoly<W> {
    type Output = NcPoly<W>;
    fn neg(self) -> NcPoly<W> {
        NcPoly { terms: self.terms.iter().map(|(w, c)| (*w, -c)).collect() }
    }
}

impl<W: Word> Mul for &NcPoly<W> {
    type Output = NcPoly<W>;
    fn mul(self, rhs: &NcPoly<W>) -> NcPoly<W> {
        let mut out = NcPoly::zero();
        for (u, x) in &self.terms {
            for (v, y) in &rhs.terms {
                out.add_term(u.concat(v), x * y);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident :: $m:ident),*) => {$(
        impl<W: Word> $tr for NcPoly<W> {
            type Output = NcPoly<W>;
            fn $m(self, rhs: NcPoly<W>) -> NcPoly<W> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add::add, Sub::sub, Mul::mul);

impl<W: Word> Neg for NcPoly<W> {
    type Output = NcPoly<W>;
    fn neg(self) -> NcPoly<W> {
        -&self
    }
}

pub fn a() -> AbPoly {
    AbPoly::var(0)
}

pub fn b() -> AbPoly {
    AbPoly::var(1)
}

pub fn c() -> CdPoly {
    CdPoly::var(0)
}

pub fn d() -> CdPoly {
    CdPoly::var(1)
}

/// `(a − b)^k`.
pub fn a_minus_b_pow(k: u32) -> AbPoly {
    (&a() - &b()).pow(k)
}

/// Every ab-word in the expansion of one cd-word (each has coefficient one).
fn expand_word(w: &CdWord) -> Vec<AbWord> {
    let mut out = vec![AbWord::empty()];
    for l in w.letters() {
        let pieces: [AbWord; 2] = if l == 0 {
            [AbWord::letter(0), AbWord::letter(1)]
        } else {
            [AbWord::from_letters(&[0, 1]), AbWord::from_letters(&[1, 0])]
        };
        out = out.iter().flat_map(|u| pieces.iter().map(move |p| u.concat(p))).collect();
    }
    out
}

/// Substitutes `c = a + b` and `d = ab + ba`.
pub fn ab_expand(p: &CdPoly) -> AbPoly {
    let mut out = AbPoly::zero();
    for (w, coeff) in p.terms() {
        for u in expand_word(w) {
            out.add_term(u, coeff.clone());
        }
    }
    out
}

/// Reads an ab-word as a product of `a` and `ab` blocks, returning the
/// cd-word obtained by `a ↦ c`, `ab ↦ d`.
fn leading_cd_word(u: &AbWord) -> Option<CdWord> {
    let mut w = CdWord::empty();
    let mut i = 0;
    while i < u.len() {
        if u.at(i) == 1 {
            return None;
        }
        if i + 1 < u.len() && u.at(i + 1) == 1 {
            w = w.push(1);
            i += 2;
        } else {
            w = w.push(0);
            i += 1;
        }
    }
    Some(w)
}

/// The unique cd-polynomial whose expansion is `p`.
///
/// Order words lexicographically with `a > b`. The largest word in the
/// expansion of a cd-word `w` is `w` with `c ↦ a`, `d ↦ ab`, and distinct
/// cd-words give distinct largest words. Repeatedly cancelling the largest
/// remaining word therefore recovers the coefficients one at a time, with
/// integer arithmetic only.
pub fn cd_contract(p: &AbPoly) -> Result<CdPoly, PolyError> {
    p.homogeneous_degree().ok_or(PolyError::NotHomogeneous)?;
    let mut rest = p.clone();
    let mut out = CdPoly::zero();
    // With a = bit 0, "largest under a > b" is the numerically smallest word.
    while let Some((u, coeff)) = rest.terms.iter().next().map(|(u, c)| (*u, c.clone())) {
        let w = leading_cd_word(&u).ok_or_else(|| PolyError::NotExpressible(alloc::format!("{u}")))?;
        for v in expand_word(&w) {
            rest.add_term(v, -coeff.clone());
        }
        out.add_term(w, coeff);
    }
    Ok(out)
}

/// The derivation with `G(c) = d` and `G(d) = cd`.
pub fn derivation_g(p: &CdPoly) -> CdPoly {
    p.map_words(|w| {
        let mut out = CdPoly::zero();
        for i in 0..w.len() {
            let head = w.slice(0, i);
            let tail = w.slice(i + 1, w.len());
            let mid = if w.at(i) == 0 { CdWord::letter(1) } else { CdWord::from_letters(&[0, 1]) };
            out.add_term(head.concat(&mid).concat(&tail), BigInt::one());
        }
        out
    })
}

/// `Pyr(w) = w·c + G(w)`.
pub fn pyr_op(p: &CdPoly) -> CdPoly {
    &(p * &c()) + &derivation_g(p)
}

/// The cd-polynomials `α_k`: `α_0 = −1`,
/// `α_{2k} = −½[(c²−2d)^k + c(c²−2d)^{k−1}c]`,
/// `α_{2k+1} = ½[(c²−2d)^k c + c(c²−2d)^k]`.
pub fn alpha(k: u32) -> CdPoly {
    if k == 0 {
        return CdPoly::constant(-1);
    }
    let base = &(&c() * &c()) - &d().scale(&BigInt::from(2));
    let m = k / 2;
    let twice = if k % 2 == 0 {
        let inner = &(&c() * &base.pow(m - 1)) * &c();
        -&(&base.pow(m) + &inner)
    } else {
        let bm = base.pow(m);
        &(&bm * &c()) + &(&c() * &bm)
    };
    twice.div_exact(&BigInt::from(2)).expect("alpha_k has integer coefficients")
}

/// `a(b−a)^{k−1} + ((a−b)^{k−1} − a(a−b)^{k−2}(1+(−1)^k))·b` for `k ≥ 1`.
pub fn alpha_ab_form(k: u32) -> AbPoly {
    assert!(k >= 1, "alpha_ab_form needs k >= 1");
    let first = &a() * &(&b() - &a()).pow(k - 1);
    let mut bracket = a_minus_b_pow(k - 1);
    if k % 2 == 0 {
        bracket -= &(&a() * &a_minus_b_pow(k - 2)).scale(&BigInt::from(2));
    }
    &first + &(&bracket * &b())
}

/// `Φ + Ψ_∂·a` split of a near-Eulerian ab-index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NearCdIndex {
    pub phi: CdPoly,
    pub boundary: CdPoly,
}

impl NearCdIndex {
    /// `ab_expand(phi) + ab_expand(boundary)·a`.
    pub fn to_ab(&self) -> AbPoly {
        &ab_expand(&self.phi) + &(&ab_expand(&self.boundary) * &a())
    }
}

/// Finds cd-polynomials `f` of degree `n` and `g` of degree `n − 1` with
/// `p = f + g·a`, by an exact linear solve over all candidate monomials.
/// Intended for small degrees; the system has `2^n` rows.
pub fn split_near(p: &AbPoly, n: usize) -> Result<NearCdIndex, PolyError> {
    if p.terms().any(|(w, _)| w.degree() != n) {
        return Err(PolyError::NotHomogeneous);
    }
    if n == 0 {
        let k = p.coeff(&AbWord::empty());
        return Ok(NearCdIndex { phi: CdPoly::constant(k), boundary: CdPoly::zero() });
    }
    let fw = CdWord::all_of_degree(n);
    let gw = CdWord::all_of_degree(n - 1);
    let rows = 1usize << n;
    let mut m = Matrix::zeros(rows, fw.len() + gw.len());
    let one = Q::one();
    for (j, w) in fw.iter().enumerate() {
        for u in expand_word(w) {
            m.add_at(u.bits() as usize, j, &one);
        }
    }
    for (j, w) in gw.iter().enumerate() {
        for u in expand_word(w) {
            m.add_at(u.push(0).bits() as usize, fw.len() + j, &one);
        }
    }
    let rhs = Matrix::column(
        (0..rows as u64).map(|bits| Q::from_integer(p.coeff(&AbWord::from_parts(bits, n as u32)))).collect(),
    );
    let x = m.solve(&rhs).ok_or_else(|| PolyError::NotExpressible(alloc::format!("{p}")))?;
    let mut phi = CdPoly::zero();
    let mut boundary = CdPoly::zero();
    for (j, w) in fw.iter().chain(gw.iter()).enumerate() {
        let v = x.get(j, 0);
        if !v.is_integer() {
            return Err(PolyError::NotExpressible(alloc::format!("{p}")));
        }
        if j < fw.len() {
            phi.add_term(*w, v.to_integer());
        } else {
            boundary.add_term(*w, v.to_integer());
        }
    }
    Ok(NearCdIndex { phi, boundary })
}

fn parse_terms<W: Word>(s: &str) -> Result<NcPoly<W>, PolyError> {
    let err = |m: &str| PolyError::Parse(alloc::format!("{m} in {s:?}"));
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(err("empty input"));
    }
    let chars: Vec<char> = cleaned.chars().collect();
    let mut out = NcPoly::zero();
    let mut i = 0;
    while i < chars.len() {
        let mut sign = BigInt::one();
        while i < chars.len() && (chars[i] == '+' || chars[i] == '-') {
            if chars[i] == '-' {
                sign = -sign;
            }
            i += 1;
        }
        let start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        let coeff: BigInt = if i > start {
            let digits: String = chars[start..i].iter().collect();
            digits.parse().map_err(|_| err("bad coefficient"))?
        } else {
            BigInt::one()
        };
        let had_number = i > start;
        if i < chars.len() && chars[i] == '*' {
            if !had_number {
                return Err(err("'*' without coefficient"));
            }
            i += 1;
        }
        let mut word = W::empty();
        let mut saw_letter = false;
        while i < chars.len() && chars[i] != '+' && chars[i] != '-' {
            let ch = chars[i];
            let letter = W::LETTERS.iter().position(|&l| l == ch).ok_or_else(|| err("unexpected character"))? as u8;
            i += 1;
            let mut reps = 1u32;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let st = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[st..i].iter().collect();
                reps = digits.parse().map_err(|_| err("bad exponent"))?;
            }
            if i < chars.len() && chars[i] == '*' {
                i += 1;
            }
            for _ in 0..reps {
                if word.len() == 64 {
                    return Err(PolyError::TooLong);
                }
                word = word.push(letter);
            }
            saw_letter = true;
        }
        if !saw_letter && !had_number {
            return Err(err("missing term"));
        }
        out.add_term(word, sign * coeff);
    }
    Ok(out)
}

/// Parses text such as `"c^2 + 4*d"`, `"3*ccd"`, `"-1*ab"` or `"0"`.
impl<W: Word> core::str::FromStr for NcPoly<W> {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, PolyError> {
        parse_terms(s)
    }
}

/// A polynomial in either alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyPoly {
    Ab(AbPoly),
    Cd(CdPoly),
}

impl AnyPoly {
    /// Infers the alphabet from the letters present; constants read as cd.
    pub fn parse(s: &str) -> Result<AnyPoly, PolyError> {
        if s.contains(['a', 'b']) {
            if s.contains(['c', 'd']) {
                return Err(PolyError::Parse(alloc::format!("mixed alphabets in {s:?}")));
            }
            return Ok(AnyPoly::Ab(s.parse()?));
        }
        Ok(AnyPoly::Cd(s.parse()?))
    }

    pub fn alphabet(&self) -> &'static str {
        match self {
            AnyPoly::Ab(_) => "ab",
            AnyPoly::Cd(_) => "cd",
        }
    }
}

impl fmt::Display for AnyPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyPoly::Ab(p) => write!(f, "{p}"),
            AnyPoly::Cd(p) => write!(f, "{p}"),
        }
    }
}

/// Word as a plain letter string, without exponents (`"ccd"`).
pub fn word_string<W: Word>(w: &W) -> String {
    w.letters().map(|l| W::LETTERS[l as usize]).collect()
}

/// Inverse of [`word_string`].
pub fn parse_word<W: Word>(s: &str) -> Result<W, PolyError> {
    let mut w = W::empty();
    for ch in s.chars() {
        let l = W::LETTERS
            .iter()
            .position(|&x| x == ch)
            .ok_or_else(|| PolyError::Parse(alloc::format!("bad letter {ch:?}")))?;
        if w.len() == 64 {
            return Err(PolyError::TooLong);
        }
        w = w.push(l as u8);
    }
    Ok(w)
}

/// Coefficient as `i64` when it fits, for compact reporting.
pub fn small(c: &BigInt) -> Option<i64> {
    c.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn cd(s: &str) -> CdPoly {
        s.parse().unwrap()
    }

    fn ab(s: &str) -> AbPoly {
        s.parse().unwrap()
    }

    #[test]
    fn products() {
        assert_eq!(&c() * &c(), cd("c^2"));
        assert_eq!(&(&a() - &b()) * &b(), ab("ab - b^2"));
        assert_eq!(&cd("c^2 + d") * &c(), cd("c^3 + dc"));
    }

    #[test]
    fn expansion() {
        assert_eq!(ab_expand(&c()), ab("a + b"));
        assert_eq!(ab_expand(&d()), ab("ab + ba"));
        assert_eq!(ab_expand(&cd("c^2")), ab("a^2 + ab + ba + b^2"));
    }

    #[test]
    fn contraction() {
        assert_eq!(cd_contract(&ab("a + b")).unwrap(), c());
        assert_eq!(cd_contract(&ab("aa + ab + ba + bb")).unwrap(), cd("c^2"));
        assert!(matches!(cd_contract(&ab("a")), Err(PolyError::NotExpressible(_))));
        assert!(matches!(cd_contract(&ab("a + b^2")), Err(PolyError::NotHomogeneous)));
        assert_eq!(cd_contract(&AbPoly::zero()).unwrap(), CdPoly::zero());
        assert_eq!(cd_contract(&AbPoly::constant(3)).unwrap(), CdPoly::constant(3));
    }

    #[test]
    fn derivation_and_pyramid() {
        assert_eq!(derivation_g(&c()), d());
        assert_eq!(derivation_g(&d()), cd("cd"));
        assert_eq!(derivation_g(&cd("c^2")), cd("dc + cd"));
        assert_eq!(pyr_op(&CdPoly::one()), c());
        assert_eq!(pyr_op(&c()), cd("c^2 + d"));
        assert_eq!(pyr_op(&cd("c^2 + d")), cd("c^3 + 2*cd + 2*dc"));
    }

    #[test]
    fn alpha_values() {
        assert_eq!(alpha(0), CdPoly::constant(-1));
        assert_eq!(alpha(1), c());
        assert_eq!(alpha(2), cd("-c^2 + d"));
        assert_eq!(alpha(3), cd("c^3 - cd - dc"));
        assert_eq!(alpha_ab_form(1), ab("a + b"));
        assert_eq!(alpha_ab_form(2), ab("-a^2 - b^2"));
        for k in 1..=8 {
            assert_eq!(alpha_ab_form(k), ab_expand(&alpha(k)), "k = {k}");
        }
    }

    #[test]
    fn comparison() {
        assert!(coeffwise_leq(&cd("c^2 + d"), &cd("c^2 + 4*d")));
        assert!(!coeffwise_leq(&cd("c^2 + d"), &cd("c^2")));
        let (w, p, q) = cd("c^2 + d").first_excess(&cd("c^2")).unwrap();
        assert_eq!((w, p, q), (CdWord::letter(1), BigInt::one(), BigInt::zero()));
        let p = cd("c^3 + 2*cd");
        assert!(coeffwise_leq(&p, &p));
    }

    #[test]
    fn printing_and_parsing() {
        assert_eq!(cd("c^2 + 4*d").to_string(), "c^2 + 4*d");
        assert_eq!(cd("4*d+cc").to_string(), "c^2 + 4*d");
        assert_eq!(cd("3*ccd").to_string(), "3*c^2d");
        assert_eq!(cd("c^2d").to_string(), "c^2d");
        assert_eq!(ab("-1*ab").to_string(), "-ab");
        assert_eq!(cd("1").to_string(), "1");
        assert_eq!(cd("0").to_string(), "0");
        assert_eq!(cd("-c^2 + d - 2").to_string(), "-2 - c^2 + d");
        assert!("x + c".parse::<CdPoly>().is_err());
        assert!("".parse::<CdPoly>().is_err());
        assert_eq!(AnyPoly::parse("a+b").unwrap().alphabet(), "ab");
        assert!(AnyPoly::parse("a+c").is_err());
    }

    #[test]
    fn canonical_order() {
        let words: Vec<String> = CdWord::all_of_degree(4).iter().map(word_string).collect();
        assert_eq!(words, ["cccc", "ccd", "cdc", "dcc", "dd"]);
        assert_eq!(parse_word::<CdWord>("cdc").unwrap(), CdWord::from_letters(&[0, 1, 0]));
    }

    #[test]
    fn near_split() {
        let phi = cd("c^3 + cd");
        let bd = cd("c^2 + d");
        let p = &ab_expand(&phi) + &(&ab_expand(&bd) * &a());
        let s = split_near(&p, 3).unwrap();
        assert_eq!((s.phi, s.boundary), (phi, bd));
        assert!(split_near(&ab("ab"), 2).is_err());
        // {0̂, atom} with boundary {0̂}
        assert_eq!(split_near(&a(), 1).unwrap(), NearCdIndex { phi: CdPoly::zero(), boundary: CdPoly::one() });
    }
}
