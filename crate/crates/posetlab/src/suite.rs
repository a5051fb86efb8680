//! The acceptance criteria, run over the corpus. Shared by `corpus run-all`
//! and the `acceptance` test target.

use std::fmt;
use std::thread;
use std::time::{Duration, Instant};

use posetlab_core::bitset::BitSet;
use posetlab_core::constructions::{
    boolean_algebra, cap_boundary, collapse_map, lambda_nu_poset, polygon, pyr_poset, remove_upset, semisuspension,
    star_product, subdivision_target_and_map,
};
use posetlab_core::corpus::{corpus, cube, CorpusEntry};
use posetlab_core::flag::{ab_index, cd_index, lambda_nu_ab_formula, lambda_nu_prime_cd, pyr_alpha_recurrence_check};
use posetlab_core::homology::{derive_boundary, is_gorenstein_star, is_near_gorenstein_star};
use posetlab_core::ncpoly::{ab_expand, alpha, alpha_ab_form, c, cd_contract, d, pyr_op, word_string, Word};
use posetlab_core::sheaf::{dual_dimension_formula, dual_sheaf, op_c, CdExtractor, CohenMacaulay};
use posetlab_core::subdivision::{decompose, verify_main_inequality, verify_stanley_minimum};
use posetlab_core::{CdPoly, CdWord, ElementId, GradedPoset, Upper};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    /// Rank cap for the corpus; criteria with their own cap use the smaller one.
    pub max_rank: usize,
    pub first_seed: u64,
    /// Random seeds per cd-word containing `d`.
    pub seeds: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { max_rank: 4, first_seed: 0, seeds: 100 }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub checks: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
    pub budget: Option<Duration>,
}

impl CriterionReport {
    pub fn within_budget(&self) -> bool {
        self.budget.map_or(true, |b| self.elapsed <= b)
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.checks > 0 && self.within_budget()
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} [{}] {}: {} checks, {} failures, {:.2}s", self.id, self.title, self.checks, self.failures.len(), self.elapsed.as_secs_f64())?;
        if let Some(b) = self.budget {
            write!(f, " (budget {}s)", b.as_secs())?;
        }
        for msg in self.failures.iter().take(5) {
            write!(f, "\n    {msg}")?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(msg());
        }
    }

    fn absorb(&mut self, other: Tally) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }
}

fn timed(id: u8, title: &'static str, budget: Option<u64>, body: impl FnOnce(&mut Tally)) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::default();
    body(&mut t);
    CriterionReport {
        id,
        title,
        checks: t.checks,
        failures: t.failures,
        elapsed: start.elapsed(),
        budget: budget.map(Duration::from_secs),
    }
}

/// The posets of criteria 2 to 5: the corpus lattices of rank `≤ 4`.
pub fn lattice_corpus(max_rank: usize) -> Vec<CorpusEntry> {
    corpus(max_rank.min(4)).into_iter().filter(|e| e.is_lattice).collect()
}

fn nus(p: &GradedPoset) -> impl Iterator<Item = ElementId> + '_ {
    p.elements().skip(1)
}

pub fn polygon_formula() -> CriterionReport {
    timed(1, "polygon cd-index is c^2 + (m-2)d", Some(1), |t| {
        for m in 2..=12usize {
            let expected = &(&c() * &c()) + &d().scale(&(m as i64 - 2).into());
            match cd_index(&polygon(m)) {
                Ok(got) => t.check(got == expected, || format!("{m}-gon: {got}, expected {expected}")),
                Err(e) => t.check(false, || format!("{m}-gon: {e}")),
            }
        }
    })
}

pub fn main_inequality(opts: &SuiteOptions) -> CriterionReport {
    timed(2, "main inequality on every lattice and element; 2-gon fails at d", Some(60), |t| {
        for e in lattice_corpus(opts.max_rank) {
            for nu in nus(&e.poset) {
                match verify_main_inequality(&e.poset, nu) {
                    Ok(r) => t.check(r.holds(), || format!("{} at {}: {} / {}", e.name, e.poset.name(nu), r.primal, r.dual)),
                    Err(err) => t.check(false, || format!("{} at {}: {err}", e.name, e.poset.name(nu))),
                }
            }
        }
        let two = polygon(2);
        let v1 = two.find_label("v1").expect("polygon vertices are labelled");
        match verify_main_inequality(&two, v1) {
            Ok(r) => {
                let w = r.primal.witness.as_ref().map(|(w, _, _)| word_string(w));
                t.check(w.as_deref() == Some("d"), || format!("2-gon witness {w:?}, expected d"));
            }
            Err(err) => t.check(false, || format!("2-gon: {err}")),
        }
    })
}

pub fn decomposition(opts: &SuiteOptions) -> CriterionReport {
    timed(3, "decomposition is exact with nonnegative local terms", Some(120), |t| {
        let entries = lattice_corpus(opts.max_rank);
        let parts = parallel(&entries, |e| {
            let mut t = Tally::default();
            for nu in nus(&e.poset) {
                let at = || format!("{} at {}", e.name, e.poset.name(nu));
                let maps = [
                    ("target", subdivision_target_and_map(&e.poset, nu).map(|(_, m, _)| m)),
                    ("collapse", collapse_map(&e.poset, nu)),
                ];
                for (kind, map) in maps {
                    let map = match map {
                        Ok(m) => m,
                        Err(err) => {
                            t.check(false, || format!("{kind} map {}: {err}", at()));
                            continue;
                        }
                    };
                    match decompose(&map) {
                        Ok(dec) => {
                            t.check(dec.negative_term().is_none(), || {
                                let n = dec.negative_term().unwrap();
                                format!("{kind} map {}: negative local term {} at {}", at(), n.phi, n.sigma)
                            });
                        }
                        Err(err) => t.check(false, || format!("{kind} map {}: {err}", at())),
                    }
                }
            }
            t
        });
        parts.into_iter().for_each(|p| t.absorb(p));
    })
}

pub fn stanley(opts: &SuiteOptions) -> CriterionReport {
    timed(4, "boolean algebra minimizes the cd-index", None, |t| {
        for e in lattice_corpus(opts.max_rank) {
            match verify_stanley_minimum(&e.poset) {
                Ok(r) => t.check(r.holds(), || format!("{}: {r}", e.name)),
                Err(err) => t.check(false, || format!("{}: {err}", e.name)),
            }
        }
    })
}

pub fn flag_formulas(opts: &SuiteOptions) -> CriterionReport {
    timed(5, "chain-sum formulas, alpha in ab form, pyramid recurrence", None, |t| {
        for e in lattice_corpus(opts.max_rank) {
            let l = &e.poset;
            for nu in nus(l) {
                let at = || format!("{} at {}", e.name, l.name(nu));
                let direct = lambda_nu_poset(l, nu).map(|p| ab_index(&p.poset));
                match (lambda_nu_ab_formula(l, nu), direct) {
                    (Ok(f), Ok(g)) => t.check(f == g, || format!("{}: formula {f}, enumeration {g}", at())),
                    (f, g) => t.check(false, || format!("{}: {:?} / {:?}", at(), f.err(), g.err())),
                }
                let built = semisuspension(l, nu).map_err(|e| e.to_string()).and_then(|s| cd_index(&s.poset).map_err(|e| e.to_string()));
                match (lambda_nu_prime_cd(l, nu), built) {
                    (Ok(f), Ok(g)) => t.check(f == g, || format!("{}: formula {f}, built {g}", at())),
                    (f, g) => t.check(false, || format!("{}: {:?} / {:?}", at(), f.err(), g.err())),
                }
            }
        }
        for k in 1..=8 {
            t.check(alpha_ab_form(k) == ab_expand(&alpha(k)), || format!("alpha_{k} differs from its ab form"));
        }
        for e in corpus(opts.max_rank.min(4)) {
            let p = &e.poset;
            for tau in p.elements() {
                let tops = p.above_set(tau).iter().map(|x| Upper::Element(ElementId(x))).chain([Upper::Top]);
                for pi in tops.filter(|&pi| pi != Upper::Element(tau)) {
                    if p.rank_between(tau, pi) > 4 {
                        continue;
                    }
                    let ok = pyr_alpha_recurrence_check(p, tau, pi);
                    t.check(ok == Ok(true), || format!("{}: recurrence on [{tau},{pi:?}): {ok:?}", e.name));
                }
            }
        }
    })
}

/// Face poset of a path on three vertices: a 1-ball.
pub fn path_poset() -> GradedPoset {
    let covers = [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (2, 5), (3, 5)];
    GradedPoset::from_covers(2, vec![0, 1, 1, 1, 2, 2], &covers).expect("path is graded")
}

/// `P` with one top-rank element removed, and that element's boundary.
pub struct Punctured {
    pub poset: GradedPoset,
    pub ridges: BitSet,
    /// Element of `P` behind each element of the result.
    pub origin: Vec<ElementId>,
}

pub fn puncture(p: &GradedPoset, top: ElementId) -> Punctured {
    let mut keep = BitSet::full(p.len());
    keep.remove(top.0);
    let d = p.ideal(&keep).expect("removing a maximal element leaves an ideal");
    let origin: Vec<ElementId> = d.origin.iter().map(|o| o.expect("ideals keep origins")).collect();
    let ridges = BitSet::from_indices(d.poset.len(), (0..d.poset.len()).filter(|&i| p.lt(origin[i], top)));
    Punctured { poset: d.poset, ridges, origin }
}

pub fn homology_certificates(opts: &SuiteOptions) -> CriterionReport {
    timed(6, "Gorenstein* certificates, the capping lemma, complementary balls", None, |t| {
        let all = corpus(opts.max_rank.min(4));
        for e in &all {
            t.check(is_gorenstein_star(&e.poset), || format!("{} should be Gorenstein*", e.name));
        }
        let mut negatives = vec![("path".to_string(), path_poset())];
        for (name, p) in [("boolean4", boolean_algebra(4)), ("cube", cube()), ("polygon5", polygon(5))] {
            let top = p.maximal_elements()[0];
            negatives.push((format!("{name} minus a facet"), puncture(&p, top).poset));
        }
        for (name, p) in &negatives {
            t.check(!is_gorenstein_star(p), || format!("{name} should not be Gorenstein*"));
        }

        let (mut agree_true, mut agree_false) = (0usize, 0usize);
        let mut lemma = |t: &mut Tally, what: String, p: &GradedPoset, boundary: &BitSet| {
            let near = is_near_gorenstein_star(p, boundary);
            let capped = cap_boundary(p, boundary, p.rank()).map(|c| is_gorenstein_star(&c.poset));
            match (near, capped) {
                (Ok(a), Ok(b)) => {
                    t.check(a == b, || format!("{what}: near-Gorenstein* {a}, capped Gorenstein* {b}"));
                    if a == b {
                        if a { agree_true += 1 } else { agree_false += 1 }
                    }
                }
                (a, b) => t.check(false, || format!("{what}: {:?} / {:?}", a.err(), b.err())),
            }
        };
        for e in all.iter().filter(|e| e.poset.rank() >= 2) {
            let tops = e.poset.maximal_elements();
            for (i, &m) in tops.iter().enumerate() {
                let ball = puncture(&e.poset, m);
                lemma(t, format!("{} minus {}", e.name, e.poset.name(m)), &ball.poset, &ball.ridges);
                if let Some(&other) = tops.get((i + 1) % tops.len()).filter(|&&o| o != m) {
                    // the boundary of a facet that is still present
                    let wrong = BitSet::from_indices(
                        ball.poset.len(),
                        (0..ball.poset.len()).filter(|&j| e.poset.lt(ball.origin[j], other)),
                    );
                    let what = format!("{} minus {} capped over {}", e.name, e.poset.name(m), e.poset.name(other));
                    lemma(t, what, &ball.poset, &wrong);
                }
            }
        }
        for e in lattice_corpus(opts.max_rank) {
            let l = &e.poset;
            for nu in nus(l) {
                let at = format!("{} at {}", e.name, l.name(nu));
                let Ok(lam) = lambda_nu_poset(l, nu) else {
                    t.check(false, || format!("{at}: cannot build the ideal"));
                    continue;
                };
                let shared: Vec<usize> =
                    (0..lam.poset.len()).filter(|&i| !l.le(nu, lam.origin[i].unwrap())).collect();
                let boundary = BitSet::from_indices(lam.poset.len(), shared.iter().copied());
                lemma(t, format!("{at}: ideal of elements joining below the top"), &lam.poset, &boundary);
                match remove_upset(l, nu) {
                    Ok((rest, predicted)) => {
                        let derived = derive_boundary(&rest.poset);
                        t.check(derived.as_ref() == Ok(&predicted), || format!("{at}: derived boundary {derived:?}, predicted {predicted:?}"));
                        let near = is_near_gorenstein_star(&rest.poset, &predicted);
                        t.check(near == Ok(true), || format!("{at}: complement is not near-Gorenstein*: {near:?}"));
                        let same: Vec<Option<ElementId>> = predicted.iter().map(|i| rest.origin[i]).collect();
                        let theirs: Vec<Option<ElementId>> = shared.iter().map(|&i| lam.origin[i]).collect();
                        t.check(same == theirs, || format!("{at}: complementary pieces have different boundaries"));
                    }
                    Err(err) => t.check(false, || format!("{at}: {err}")),
                }
            }
        }
        t.check(agree_true + agree_false >= 20, || format!("only {} lemma instances", agree_true + agree_false));
        t.check(agree_false > 0, || "no negative lemma instance".to_string());
    })
}

/// Coefficient of every cd-word read off the sheaf operations, for each
/// seed, against the flag enumeration.
fn sheaf_mismatches(e: &CorpusEntry, seeds: std::ops::Range<u64>) -> Tally {
    let mut t = Tally::default();
    let psi = match cd_index(&e.poset) {
        Ok(p) => p,
        Err(err) => {
            t.check(false, || format!("{}: {err}", e.name));
            return t;
        }
    };
    let mut ex = match CdExtractor::new(&e.poset) {
        Ok(x) => x,
        Err(err) => {
            t.check(false, || format!("{}: {err}", e.name));
            return t;
        }
    };
    for w in CdWord::all_of_degree(e.poset.rank()) {
        let expected = psi.coeff(&w);
        let runs: Vec<u64> = if w.letters().any(|l| l == 1) { seeds.clone().collect() } else { vec![seeds.start] };
        for seed in runs {
            let got = ex.coefficient(&w, &mut ChaCha8Rng::seed_from_u64(seed));
            t.check(got.as_ref().map(|&g| expected == g.into()).unwrap_or(false), || {
                format!("{} word {} seed {seed}: sheaf {got:?}, flags {expected}", e.name, word_string(&w))
            });
        }
    }
    t
}

pub fn sheaf_cross_validation(opts: &SuiteOptions) -> CriterionReport {
    timed(7, "sheaf C/D extraction matches flag enumeration", Some(300), |t| {
        let entries: Vec<CorpusEntry> =
            corpus(opts.max_rank.min(4)).into_iter().filter(|e| is_gorenstein_star(&e.poset)).collect();
        let seeds = opts.first_seed..opts.first_seed + opts.seeds;
        parallel(&entries, |e| sheaf_mismatches(e, seeds.clone())).into_iter().for_each(|p| t.absorb(p));
    })
}

fn random_cd(rng: &mut ChaCha8Rng) -> CdPoly {
    let degree = rng.gen_range(0..=8);
    let words = CdWord::all_of_degree(degree);
    let mut p = CdPoly::zero();
    for _ in 0..rng.gen_range(1..=6) {
        let w = words[rng.gen_range(0..words.len())];
        p.add_term(w, rng.gen_range(-50i64..=50).into());
    }
    p
}

pub fn algebra_properties(opts: &SuiteOptions) -> CriterionReport {
    timed(8, "contraction, star products, pyramids, dual dimensions", None, |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.first_seed);
        for i in 0..500 {
            let p = random_cd(&mut rng);
            let back = cd_contract(&ab_expand(&p));
            t.check(back.as_ref() == Ok(&p), || format!("sample {i}: {p} came back as {back:?}"));
        }
        let all = corpus(opts.max_rank);
        let small: Vec<&CorpusEntry> = all.iter().filter(|e| e.poset.rank() <= 3).collect();
        for x in &small {
            for y in small.iter().filter(|y| x.poset.rank() + y.poset.rank() <= 5) {
                let prod = star_product(&x.poset, &y.poset).map_err(|e| e.to_string());
                let lhs = prod.and_then(|s| cd_index(&s.poset).map_err(|e| e.to_string()));
                let rhs = cd_index(&x.poset).and_then(|a| Ok(&a * &cd_index(&y.poset)?));
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) => t.check(l == r, || format!("{} * {}: {l} vs {r}", x.name, y.name)),
                    (l, r) => t.check(false, || format!("{} * {}: {:?} / {:?}", x.name, y.name, l.err(), r.err())),
                }
            }
        }
        for e in &all {
            let lhs = pyr_poset(&e.poset).map_err(|e| e.to_string()).and_then(|p| cd_index(&p.poset).map_err(|e| e.to_string()));
            let rhs = cd_index(&e.poset).map(|p| pyr_op(&p));
            match (lhs, rhs) {
                (Ok(l), Ok(r)) => t.check(l == r, || format!("pyr({}): {l} vs {r}", e.name)),
                (l, r) => t.check(false, || format!("pyr({}): {:?} / {:?}", e.name, l.err(), r.err())),
            }
        }
        let mut sheaves: Vec<(String, CohenMacaulay)> = Vec::new();
        for e in all.iter().filter(|e| e.poset.rank() <= 3) {
            match CohenMacaulay::constant(&e.poset) {
                Ok(f) => {
                    let mut cur = f.clone();
                    sheaves.push((e.name.clone(), f));
                    for k in 1..e.poset.rank() {
                        match op_c(&cur) {
                            Ok(g) => {
                                sheaves.push((format!("C^{k} of {}", e.name), g.clone()));
                                cur = g;
                            }
                            Err(err) => t.check(false, || format!("C^{k} of {}: {err}", e.name)),
                        }
                    }
                }
                Err(err) => t.check(false, || format!("{}: {err}", e.name)),
            }
            let ball = puncture(&e.poset, e.poset.maximal_elements()[0]).poset;
            match CohenMacaulay::constant(&ball) {
                Ok(f) => sheaves.push((format!("{} minus a facet", e.name), f)),
                Err(err) => t.check(false, || format!("{} minus a facet: {err}", e.name)),
            }
        }
        for (name, f) in &sheaves {
            let formula = dual_dimension_formula(f.sheaf());
            match dual_sheaf(f) {
                Ok(g) => {
                    let got: Vec<i64> = g.sheaf().stalks().iter().map(|&s| s as i64).collect();
                    t.check(got == formula, || format!("{name}: dual stalks {got:?}, formula {formula:?}"));
                }
                Err(err) => t.check(false, || format!("{name}: {err}")),
            }
        }
    })
}

/// Maps `f` over `items` on scoped threads; results keep the input order.
fn parallel<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let f = &f;
    thread::scope(|s| {
        let handles: Vec<_> = items.iter().map(|x| s.spawn(move || f(x))).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    })
}

pub fn run_all(opts: &SuiteOptions) -> Vec<CriterionReport> {
    vec![
        polygon_formula(),
        main_inequality(opts),
        decomposition(opts),
        stanley(opts),
        flag_formulas(opts),
        homology_certificates(opts),
        sheaf_cross_validation(opts),
        algebra_properties(opts),
    ]
}
