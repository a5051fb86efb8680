//! The `posetlab` command line. Exit codes: 0 verified, 1 mathematical
//! failure (with a witness), 2 usage or precondition error.

use std::ffi::OsString;
use std::io::Write;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand};
use posetlab_core::bitset::BitSet;
use posetlab_core::constructions::{
    boolean_algebra, cartesian_product, collapse_map, order_complex, polygon, polytope_product, pyr_poset,
    semisuspension, star_product, subdivision_target_and_map,
};
use posetlab_core::corpus::corpus;
use posetlab_core::flag::{ab_index, cd_index, lambda_nu_ab_formula, lambda_nu_prime_cd, near_cd_index};
use posetlab_core::homology::{
    cohen_macaulay_failure, derive_boundary, gorenstein_star_failure, near_gorenstein_star_failure, LinkWitness,
    NearGorensteinFailure,
};
use posetlab_core::ncpoly::{parse_word, word_string};
use posetlab_core::sheaf::CdExtractor;
use posetlab_core::subdivision::{
    decompose, verify_corollary_semisusp, verify_main_inequality, verify_stanley_minimum, Comparison,
    SubdivisionError,
};
use posetlab_core::{CdWord, ElementId, GradedPoset};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::format::{load_map, load_poset, names, resolve_element, resolve_elements, to_json, MapDoc, PolyDoc, PosetDoc};
use crate::suite::{run_all, SuiteOptions};

#[derive(Parser, Debug)]
#[command(name = "posetlab", version, about = "Build graded posets, compute ab/cd-indices, certify homology and verify cd-index inequalities")]
pub struct Cli {
    /// Print machine-readable JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,

    /// Seed for the random coefficients of the sheaf operations
    #[arg(long, global = true, env = "POSETLAB_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Rank cap for corpus runs
    #[arg(long, global = true, default_value_t = 4)]
    pub max_rank: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Construct a poset (or a poset map) and print it as JSON
    #[command(subcommand)]
    Build(Build),
    /// ab-index of a poset
    AbIndex { poset: String },
    /// cd-index of an Eulerian poset
    CdIndex { poset: String },
    /// Split the ab-index of a near-Eulerian poset as phi + psi_boundary * a
    NearCdIndex {
        poset: String,
        /// Elements generating the boundary ideal, or `auto`
        #[arg(long)]
        boundary: String,
    },
    /// ab-index of the ideal of elements whose join with the element is below the top
    LambdaNu {
        poset: String,
        #[arg(long)]
        element: String,
    },
    /// cd-index of the semisuspension at an element
    LambdaNuPrime {
        poset: String,
        #[arg(long)]
        element: String,
    },
    /// Homology certificates
    #[command(subcommand)]
    Check(Check),
    /// Verify decompositions and inequalities
    #[command(subcommand)]
    Verify(Verify),
    /// Read cd-coefficients off the C/D sheaf operations
    SheafCd {
        poset: String,
        /// Single cd-word; all words of the poset's degree by default
        #[arg(long)]
        word: Option<String>,
        /// Exit with 1 if any coefficient disagrees with the flag enumeration
        #[arg(long)]
        verify: bool,
    },
    /// The built-in family of test posets
    #[command(subcommand)]
    Corpus(CorpusCommand),
}

#[derive(Subcommand, Debug)]
pub enum Build {
    /// Boolean algebra on k atoms
    Boolean { k: usize },
    /// Face poset of the m-gon
    Polygon { m: usize },
    /// Pyramid
    Pyr { poset: String },
    /// Star product: the first poset wholly below the second
    Star { left: String, right: String },
    /// Face poset of the product of two polytopes
    Product {
        left: String,
        right: String,
        /// Product of the posets with their tops adjoined instead
        #[arg(long)]
        cartesian: bool,
    },
    /// Chains containing the minimal element, ordered by inclusion
    OrderComplex { poset: String },
    /// Semisuspension at an element
    Semisusp {
        poset: String,
        #[arg(long)]
        element: String,
    },
    /// Subdivision target and the map onto it, as a map document
    SubdivisionTarget {
        poset: String,
        #[arg(long)]
        element: String,
    },
    /// Map collapsing everything outside the ideal onto the added cell
    Collapse {
        poset: String,
        #[arg(long)]
        element: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum Check {
    /// Order complex is a homology sphere
    GorensteinStar { poset: String },
    /// Order complex is a homology ball with the given boundary
    NearGorensteinStar {
        poset: String,
        /// Elements generating the boundary ideal, `none`, or `auto`
        #[arg(long, default_value = "auto")]
        boundary: String,
    },
    /// Cohen-Macaulay
    Cm { poset: String },
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// Exact decomposition of the source cd-index along a subdivision
    Decomposition {
        #[arg(long)]
        map: String,
        /// Source poset, overriding the one in the map document
        #[arg(long)]
        source: Option<String>,
        /// Target poset, overriding the one in the map document
        #[arg(long)]
        target: Option<String>,
    },
    /// Lower and upper interval bounds at an element
    MainInequality {
        poset: String,
        #[arg(long)]
        element: String,
    },
    /// The Boolean algebra of one rank higher is below the cd-index
    Stanley { poset: String },
    /// The semisuspension is below the cd-index
    Semisusp {
        poset: String,
        #[arg(long)]
        element: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum CorpusCommand {
    /// List the corpus posets up to --max-rank
    List,
    /// Run every acceptance criterion
    RunAll {
        /// Random seeds per cd-word containing d
        #[arg(long, default_value_t = 100)]
        seeds: u64,
    },
}

/// Text for humans, JSON for `--json`, and whether the claim held.
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub ok: bool,
}

impl Outcome {
    fn holds(text: String, json: Value, ok: bool) -> Self {
        Outcome { text, json, ok }
    }

    fn document(v: Value) -> Self {
        Outcome { text: to_json(&v), json: v, ok: true }
    }
}

/// Failures of preconditions rather than of the claim being checked.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct Precondition(String);

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(o) => {
            let body = if cli.json { to_json(&o.json) } else { o.text };
            let _ = writeln!(out, "{}", body.trim_end());
            if o.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn dispatch(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Build(b) => build(b),
        Command::AbIndex { poset } => {
            let p = ab_index(&load_poset(poset)?);
            Ok(Outcome::holds(p.to_string(), to_value(&PolyDoc::from_poly(&p)), true))
        }
        Command::CdIndex { poset } => {
            let p = cd_index(&load_poset(poset)?)?;
            Ok(Outcome::holds(p.to_string(), to_value(&PolyDoc::from_poly(&p)), true))
        }
        Command::NearCdIndex { poset, boundary } => {
            let p = load_poset(poset)?;
            let bd = boundary_ideal(&p, boundary)?;
            let split = near_cd_index(&p, &bd)?;
            let text = format!("phi: {}\nboundary: {}", split.phi, split.boundary);
            let json = json!({
                "phi": to_value(&PolyDoc::from_poly(&split.phi)),
                "boundary": to_value(&PolyDoc::from_poly(&split.boundary)),
                "boundary_elements": bd.iter().collect::<Vec<_>>(),
            });
            Ok(Outcome::holds(text, json, true))
        }
        Command::LambdaNu { poset, element } => {
            let p = load_poset(poset)?;
            let nu = resolve_element(&p, element)?;
            let f = lambda_nu_ab_formula(&p, nu)?;
            Ok(Outcome::holds(f.to_string(), to_value(&PolyDoc::from_poly(&f)), true))
        }
        Command::LambdaNuPrime { poset, element } => {
            let p = load_poset(poset)?;
            let nu = resolve_element(&p, element)?;
            let f = lambda_nu_prime_cd(&p, nu)?;
            Ok(Outcome::holds(f.to_string(), to_value(&PolyDoc::from_poly(&f)), true))
        }
        Command::Check(c) => check(c),
        Command::Verify(v) => verify(v),
        Command::SheafCd { poset, word, verify } => sheaf_cd(&load_poset(poset)?, word.as_deref(), *verify, cli.seed),
        Command::Corpus(CorpusCommand::List) => {
            let entries = corpus(cli.max_rank);
            let text = entries
                .iter()
                .map(|e| format!("{}\trank {}\t{} elements{}", e.name, e.poset.rank(), e.poset.len(), if e.is_lattice { "" } else { "\tnot a lattice" }))
                .collect::<Vec<_>>()
                .join("\n");
            let json = Value::Array(
                entries
                    .iter()
                    .map(|e| json!({"name": e.name, "rank": e.poset.rank(), "elements": e.poset.len(), "lattice": e.is_lattice}))
                    .collect(),
            );
            Ok(Outcome::holds(text, json, true))
        }
        Command::Corpus(CorpusCommand::RunAll { seeds }) => {
            let opts = SuiteOptions { max_rank: cli.max_rank, first_seed: cli.seed, seeds: *seeds };
            let reports = run_all(&opts);
            let ok = reports.iter().all(|r| r.passed());
            let text = reports.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n");
            let json = Value::Array(
                reports
                    .iter()
                    .map(|r| {
                        json!({
                            "criterion": r.id,
                            "title": r.title,
                            "passed": r.passed(),
                            "checks": r.checks,
                            "failures": r.failures,
                            "seconds": r.elapsed.as_secs_f64(),
                            "budget_seconds": r.budget.map(|b| b.as_secs()),
                        })
                    })
                    .collect(),
            );
            Ok(Outcome::holds(text, json, ok))
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn poset_doc(p: &GradedPoset) -> Outcome {
    Outcome::document(to_value(&PosetDoc::from_poset(p)))
}

fn build(b: &Build) -> anyhow::Result<Outcome> {
    match b {
        Build::Boolean { k } => {
            if !(1..=16).contains(k) {
                bail!(Precondition(format!("boolean algebras need 1 <= k <= 16, got {k}")));
            }
            Ok(poset_doc(&boolean_algebra(*k)))
        }
        Build::Polygon { m } => {
            if *m < 2 {
                bail!(Precondition(format!("polygons need at least 2 vertices, got {m}")));
            }
            Ok(poset_doc(&polygon(*m)))
        }
        Build::Pyr { poset } => Ok(poset_doc(&pyr_poset(&load_poset(poset)?)?.poset)),
        Build::Star { left, right } => Ok(poset_doc(&star_product(&load_poset(left)?, &load_poset(right)?)?.poset)),
        Build::Product { left, right, cartesian } => {
            let (l, r) = (load_poset(left)?, load_poset(right)?);
            let p = if *cartesian { cartesian_product(&l, &r)? } else { polytope_product(&l, &r)? };
            Ok(poset_doc(&p.poset))
        }
        Build::OrderComplex { poset } => Ok(poset_doc(&order_complex(&load_poset(poset)?).poset)),
        Build::Semisusp { poset, element } => {
            let p = load_poset(poset)?;
            Ok(poset_doc(&semisuspension(&p, resolve_element(&p, element)?)?.poset))
        }
        Build::SubdivisionTarget { poset, element } => {
            let p = load_poset(poset)?;
            let (_, map, _) = subdivision_target_and_map(&p, resolve_element(&p, element)?)?;
            Ok(Outcome::document(to_value(&MapDoc::from_map(&map))))
        }
        Build::Collapse { poset, element } => {
            let p = load_poset(poset)?;
            let map = collapse_map(&p, resolve_element(&p, element)?)?;
            Ok(Outcome::document(to_value(&MapDoc::from_map(&map))))
        }
    }
}

/// `auto`, `none`, or the ideal generated by the listed elements.
fn boundary_ideal(p: &GradedPoset, given: &str) -> anyhow::Result<BitSet> {
    match given.trim() {
        "auto" => derive_boundary(p).context("no boundary makes this poset near-Gorenstein*"),
        "none" | "" => Ok(BitSet::new(p.len())),
        list => {
            let mut bd = BitSet::new(p.len());
            for x in resolve_elements(p, list)? {
                bd.union_with(p.below_set(x));
            }
            Ok(bd)
        }
    }
}

fn chain_text(p: &GradedPoset, chain: &[ElementId]) -> String {
    format!("[{}]", names(p, chain).join(" < "))
}

fn witness_json(p: &GradedPoset, w: &LinkWitness) -> Value {
    json!({
        "chain": w.chain.iter().map(|x| x.0).collect::<Vec<_>>(),
        "labels": names(p, &w.chain),
        "betti": w.betti.nonzero().into_iter().map(|(deg, dim)| json!({"degree": deg, "dim": dim})).collect::<Vec<_>>(),
        "expected": w.expected.to_string(),
    })
}

fn witness_text(p: &GradedPoset, w: &LinkWitness) -> String {
    format!("link of chain {} has {}, expected {}", chain_text(p, &w.chain), w.betti, w.expected)
}

fn link_report(p: &GradedPoset, property: &str, failure: Option<&LinkWitness>, extra: Value) -> Outcome {
    let text = match failure {
        None => format!("{property}: yes"),
        Some(w) => format!("{property}: no\n{}", witness_text(p, w)),
    };
    let mut json = json!({"property": property, "holds": failure.is_none()});
    if let Some(w) = failure {
        json["witness"] = witness_json(p, w);
    }
    if let (Value::Object(m), Value::Object(e)) = (&mut json, extra) {
        m.extend(e);
    }
    Outcome::holds(text, json, failure.is_none())
}

fn check(c: &Check) -> anyhow::Result<Outcome> {
    match c {
        Check::GorensteinStar { poset } => {
            let p = load_poset(poset)?;
            Ok(link_report(&p, "Gorenstein*", gorenstein_star_failure(&p).as_ref(), json!({})))
        }
        Check::Cm { poset } => {
            let p = load_poset(poset)?;
            Ok(link_report(&p, "Cohen-Macaulay", cohen_macaulay_failure(&p).as_ref(), json!({})))
        }
        Check::NearGorensteinStar { poset, boundary } => {
            let p = load_poset(poset)?;
            let bd = if boundary.trim() == "auto" {
                match derive_boundary(&p) {
                    Ok(bd) => bd,
                    Err(e) => {
                        let text = format!("near-Gorenstein*: no\n{e}");
                        return Ok(Outcome::holds(text, json!({"property": "near-Gorenstein*", "holds": false, "reason": e.to_string()}), false));
                    }
                }
            } else {
                boundary_ideal(&p, boundary)?
            };
            let ids: Vec<ElementId> = bd.iter().map(ElementId).collect();
            let extra = json!({"boundary": bd.iter().collect::<Vec<_>>(), "boundary_labels": names(&p, &ids)});
            let failure = near_gorenstein_star_failure(&p, &bd).map_err(|e| Precondition(e.to_string()))?;
            let mut o = match &failure {
                None => link_report(&p, "near-Gorenstein*", None, extra),
                Some(NearGorensteinFailure::Link(w)) => link_report(&p, "near-Gorenstein*", Some(w), extra),
                Some(NearGorensteinFailure::BoundaryNotGorenstein(w)) => {
                    let mut o = link_report(&p, "near-Gorenstein*", Some(w), extra);
                    o.text = format!("near-Gorenstein*: no\nboundary is not a sphere: {}", witness_text(&p, w));
                    o.json["boundary_is_sphere"] = json!(false);
                    o
                }
            };
            o.text.push_str(&format!("\nboundary: {{{}}}", names(&p, &ids).join(", ")));
            Ok(o)
        }
    }
}

fn comparison_json(c: &Comparison) -> Value {
    let witness = c.witness.as_ref().map(|(w, l, r)| json!({"word": word_string(w), "lhs": l.to_string(), "rhs": r.to_string()}));
    json!({
        "smaller": to_value(&PolyDoc::from_poly(&c.smaller)),
        "larger": to_value(&PolyDoc::from_poly(&c.larger)),
        "holds": c.holds(),
        "witness": witness,
    })
}

fn comparison_outcome(c: &Comparison) -> Outcome {
    let text = if c.holds() { format!("holds: {c}") } else { format!("FAILS: {c}") };
    Outcome::holds(text, comparison_json(c), c.holds())
}

/// Subdivision errors that are preconditions rather than counterexamples.
fn precondition(e: SubdivisionError) -> anyhow::Error {
    match e {
        SubdivisionError::DecompositionMismatch { .. } => anyhow!(e),
        other => anyhow!(Precondition(other.to_string())),
    }
}

fn verify(v: &Verify) -> anyhow::Result<Outcome> {
    match v {
        Verify::Decomposition { map, source, target } => {
            let source = source.as_deref().map(load_poset).transpose()?;
            let target = target.as_deref().map(load_poset).transpose()?;
            let m = load_map(map, source, target)?;
            let dec = match decompose(&m) {
                Ok(d) => d,
                Err(SubdivisionError::DecompositionMismatch { assembled, expected }) => {
                    let text = format!("FAILS: local terms sum to {assembled}, cd-index is {expected}");
                    let json = json!({"holds": false, "assembled": assembled.to_string(), "expected": expected.to_string()});
                    return Ok(Outcome::holds(text, json, false));
                }
                Err(e) => return Err(precondition(e)),
            };
            let tgt = m.target();
            let negative = dec.negative_term().map(|t| t.sigma);
            let mut lines = Vec::new();
            let mut terms = Vec::new();
            for t in dec.terms.iter().filter(|t| !t.phi.is_zero()) {
                lines.push(format!("{}: local {} times {}", tgt.name(t.sigma), t.phi, t.upper));
                terms.push(json!({
                    "sigma": t.sigma.0,
                    "label": tgt.name(t.sigma),
                    "local": to_value(&PolyDoc::from_poly(&t.phi)),
                    "upper": to_value(&PolyDoc::from_poly(&t.upper)),
                }));
            }
            lines.push(format!("sum: {}", dec.assembled));
            if let Some(s) = negative {
                lines.push(format!("FAILS: local term at {} has a negative coefficient", tgt.name(s)));
            }
            let json = json!({
                "holds": negative.is_none(),
                "sum": to_value(&PolyDoc::from_poly(&dec.assembled)),
                "terms": terms,
                "negative_at": negative.map(|s| s.0),
            });
            Ok(Outcome::holds(lines.join("\n"), json, negative.is_none()))
        }
        Verify::MainInequality { poset, element } => {
            let p = load_poset(poset)?;
            let nu = resolve_element(&p, element)?;
            let r = verify_main_inequality(&p, nu).map_err(precondition)?;
            let mut lines = vec![
                format!("lower * pyr(upper): {}", comparison_outcome(&r.primal).text),
                format!("pyr(lower) * upper: {}", comparison_outcome(&r.dual).text),
            ];
            if !r.is_lattice {
                lines.push("note: the poset with its top adjoined is not a lattice".to_string());
            }
            let json = json!({
                "element": nu.0,
                "label": p.name(nu),
                "holds": r.holds(),
                "is_lattice": r.is_lattice,
                "primal": comparison_json(&r.primal),
                "dual": comparison_json(&r.dual),
            });
            Ok(Outcome::holds(lines.join("\n"), json, r.holds()))
        }
        Verify::Stanley { poset } => {
            let p = load_poset(poset)?;
            let mut o = comparison_outcome(&verify_stanley_minimum(&p).map_err(precondition)?);
            if !p.is_lattice() {
                o.text.push_str("\nnote: the poset with its top adjoined is not a lattice");
            }
            o.json["is_lattice"] = json!(p.is_lattice());
            Ok(o)
        }
        Verify::Semisusp { poset, element } => {
            let p = load_poset(poset)?;
            let nu = resolve_element(&p, element)?;
            Ok(comparison_outcome(&verify_corollary_semisusp(&p, nu).map_err(precondition)?))
        }
    }
}

fn sheaf_cd(p: &GradedPoset, word: Option<&str>, verify: bool, seed: u64) -> anyhow::Result<Outcome> {
    let words: Vec<CdWord> = match word {
        Some(w) => vec![parse_word(w)?],
        None => CdWord::all_of_degree(p.rank()),
    };
    let flags = cd_index(p);
    if verify {
        if let Err(e) = &flags {
            bail!(Precondition(format!("no flag enumeration to compare against: {e}")));
        }
    }
    let mut ex = CdExtractor::new(p)?;
    let mut rows = Vec::new();
    let mut lines = vec!["word\tsheaf\tflags".to_string()];
    let mut mismatches = 0;
    for w in &words {
        let got = ex.coefficient(w, &mut ChaCha8Rng::seed_from_u64(seed))?;
        let expected = flags.as_ref().ok().map(|f| f.coeff(w));
        if expected.as_ref().is_some_and(|e| *e != got.into()) {
            mismatches += 1;
        }
        let shown = expected.as_ref().map_or("-".to_string(), |e| e.to_string());
        lines.push(format!("{}\t{got}\t{shown}", word_string(w)));
        rows.push(json!({"word": word_string(w), "sheaf": got, "flags": expected.map(|e| e.to_string())}));
    }
    lines.push(format!("seed {seed}, {mismatches} mismatches"));
    let json = json!({"seed": seed, "rows": rows, "mismatches": mismatches});
    Ok(Outcome::holds(lines.join("\n"), json, !verify || mismatches == 0))
}
