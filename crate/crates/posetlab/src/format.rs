//! JSON and text file formats: posets, maps between posets, polynomials.

use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::Path;

use num_bigint::BigInt;
use posetlab_core::corpus;
use posetlab_core::ncpoly::{parse_word, word_string, AnyPoly, NcPoly, Word};
use posetlab_core::{ElementId, GradedPoset, PosetError, PosetMap};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("element ids must be exactly 0..{0}, each once")]
    BadIds(usize),
    #[error("{0} is neither a readable file nor a corpus poset name")]
    UnknownInput(String),
    #[error("document has neither \"elements\" nor a \"target\" poset")]
    NotAPoset,
    #[error("map needs {0} poset, give it in the file or on the command line")]
    MissingMapPoset(&'static str),
    #[error("assignment must list every source id exactly once")]
    BadAssignment,
    #[error("unknown alphabet {0:?}")]
    BadAlphabet(String),
    #[error("bad coefficient {0:?}")]
    BadCoefficient(String),
    #[error("no element named {0:?}")]
    UnknownElement(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Construction(#[from] posetlab_core::constructions::ConstructionError),
    #[error(transparent)]
    Poly(#[from] posetlab_core::ncpoly::PolyError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementDoc {
    pub id: usize,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// `{"n": 2, "elements": [{"id": 0, "rank": 0}, ...], "covers": [[0, 1], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetDoc {
    pub n: usize,
    pub elements: Vec<ElementDoc>,
    pub covers: Vec<[usize; 2]>,
}

impl PosetDoc {
    pub fn from_poset(p: &GradedPoset) -> Self {
        let elements = p
            .elements()
            .map(|x| ElementDoc { id: x.0, rank: p.rank_of(x), label: p.label(x).map(String::from) })
            .collect();
        let covers = p.covers().into_iter().map(|(lo, hi)| [lo, hi]).collect();
        PosetDoc { n: p.rank(), elements, covers }
    }

    pub fn to_poset(&self) -> Result<GradedPoset, FormatError> {
        let len = self.elements.len();
        let mut slots: Vec<Option<&ElementDoc>> = vec![None; len];
        for e in &self.elements {
            match slots.get_mut(e.id) {
                Some(slot @ None) => *slot = Some(e),
                _ => return Err(FormatError::BadIds(len)),
            }
        }
        let ranks = slots.iter().map(|e| e.map_or(0, |e| e.rank)).collect();
        let labels = slots.iter().map(|e| e.and_then(|e| e.label.clone())).collect();
        let covers: Vec<(usize, usize)> = self.covers.iter().map(|c| (c[0], c[1])).collect();
        Ok(GradedPoset::from_covers(self.n, ranks, &covers)?.with_labels(labels)?)
    }
}

/// `{"source": poset?, "target": poset?, "assignment": [[src, dst], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<PosetDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<PosetDoc>,
    pub assignment: Vec<[usize; 2]>,
}

impl MapDoc {
    pub fn from_map(m: &PosetMap) -> Self {
        MapDoc {
            source: Some(PosetDoc::from_poset(m.source())),
            target: Some(PosetDoc::from_poset(m.target())),
            assignment: m.assignment().iter().enumerate().map(|(s, t)| [s, t.0]).collect(),
        }
    }

    /// Posets given explicitly take precedence over the embedded ones.
    pub fn to_map(&self, source: Option<GradedPoset>, target: Option<GradedPoset>) -> Result<PosetMap, FormatError> {
        let source = match source {
            Some(p) => p,
            None => self.source.as_ref().ok_or(FormatError::MissingMapPoset("a source"))?.to_poset()?,
        };
        let target = match target {
            Some(p) => p,
            None => self.target.as_ref().ok_or(FormatError::MissingMapPoset("a target"))?.to_poset()?,
        };
        let mut image: Vec<Option<ElementId>> = vec![None; source.len()];
        for &[s, t] in &self.assignment {
            match image.get_mut(s) {
                Some(slot @ None) => *slot = Some(ElementId(t)),
                _ => return Err(FormatError::BadAssignment),
            }
        }
        let assignment = image.into_iter().collect::<Option<Vec<_>>>().ok_or(FormatError::BadAssignment)?;
        Ok(PosetMap::new(source, target, assignment)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub word: String,
    pub coeff: String,
}

/// `{"alphabet": "cd", "terms": [{"word": "ccd", "coeff": "3"}]}`, terms in
/// degree-lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDoc {
    pub alphabet: String,
    pub terms: Vec<TermDoc>,
}

impl PolyDoc {
    pub fn from_poly<W: Word>(p: &NcPoly<W>) -> Self {
        let alphabet: String = W::LETTERS.iter().collect();
        let terms = p.terms().map(|(w, c)| TermDoc { word: word_string(w), coeff: c.to_string() }).collect();
        PolyDoc { alphabet, terms }
    }

    pub fn from_any(p: &AnyPoly) -> Self {
        match p {
            AnyPoly::Ab(p) => Self::from_poly(p),
            AnyPoly::Cd(p) => Self::from_poly(p),
        }
    }

    fn terms_of<W: Word>(&self) -> Result<NcPoly<W>, FormatError> {
        let mut out = NcPoly::zero();
        for t in &self.terms {
            let c: BigInt = t.coeff.trim().parse().map_err(|_| FormatError::BadCoefficient(t.coeff.clone()))?;
            out.add_term(parse_word::<W>(&t.word)?, c);
        }
        Ok(out)
    }

    pub fn to_any(&self) -> Result<AnyPoly, FormatError> {
        match self.alphabet.as_str() {
            "ab" => Ok(AnyPoly::Ab(self.terms_of()?)),
            "cd" => Ok(AnyPoly::Cd(self.terms_of()?)),
            other => Err(FormatError::BadAlphabet(other.to_string())),
        }
    }
}

/// Reads a file, or standard input for `-`.
pub fn read_source(arg: &str) -> Result<String, FormatError> {
    let io = |source| FormatError::Io { path: arg.to_string(), source };
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        fs::read_to_string(arg).map_err(io)
    }
}

/// A poset document, or the target of a map document.
pub fn parse_poset(text: &str) -> Result<GradedPoset, FormatError> {
    let v: Value = serde_json::from_str(text)?;
    if v.get("elements").is_some() {
        return serde_json::from_value::<PosetDoc>(v)?.to_poset();
    }
    match v.get("target") {
        Some(t) => serde_json::from_value::<PosetDoc>(t.clone())?.to_poset(),
        None => Err(FormatError::NotAPoset),
    }
}

/// `-`, a path, or a corpus name such as `polygon6` or `pyr(cube)`.
pub fn load_poset(arg: &str) -> Result<GradedPoset, FormatError> {
    if arg == "-" || Path::new(arg).exists() {
        return parse_poset(&read_source(arg)?);
    }
    named_poset(arg).ok_or_else(|| FormatError::UnknownInput(arg.to_string()))
}

/// Corpus entries plus `polygon<m>` and `boolean<k>` for any size.
pub fn named_poset(name: &str) -> Option<GradedPoset> {
    let sized = |prefix: &str| name.strip_prefix(prefix).and_then(|k| k.parse::<usize>().ok());
    if let Some(m) = sized("polygon").filter(|&m| m >= 2) {
        return Some(posetlab_core::constructions::polygon(m));
    }
    if let Some(k) = sized("boolean").filter(|&k| k >= 1) {
        return Some(posetlab_core::constructions::boolean_algebra(k));
    }
    corpus::lookup(name)
}

pub fn load_map(arg: &str, source: Option<GradedPoset>, target: Option<GradedPoset>) -> Result<PosetMap, FormatError> {
    let doc: MapDoc = serde_json::from_str(&read_source(arg)?)?;
    doc.to_map(source, target)
}

/// Polynomial in the text format or as a JSON document.
pub fn parse_poly(text: &str) -> Result<AnyPoly, FormatError> {
    let t = text.trim();
    if t.starts_with('{') {
        return serde_json::from_str::<PolyDoc>(t)?.to_any();
    }
    Ok(AnyPoly::parse(t)?)
}

/// An element given by label or, failing that, by numeric id.
pub fn resolve_element(p: &GradedPoset, given: &str) -> Result<ElementId, FormatError> {
    if let Some(x) = p.find_label(given) {
        return Ok(x);
    }
    match given.parse::<usize>() {
        Ok(i) if i < p.len() => Ok(ElementId(i)),
        _ => Err(FormatError::UnknownElement(given.to_string())),
    }
}

/// Comma-separated labels or ids.
pub fn resolve_elements(p: &GradedPoset, list: &str) -> Result<Vec<ElementId>, FormatError> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| resolve_element(p, s)).collect()
}

/// Display names of elements, by id.
pub fn names(p: &GradedPoset, xs: &[ElementId]) -> Vec<String> {
    xs.iter().map(|&x| p.name(x)).collect()
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

/// Coefficient table keyed by word string.
pub fn coefficient_table<W: Word>(p: &NcPoly<W>) -> BTreeMap<String, String> {
    p.terms().map(|(w, c)| (word_string(w), c.to_string())).collect()
}
