//! The fixed family of posets every verifier runs over.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::constructions::{boolean_algebra, polar, polygon, polytope_product, pyr_poset};
use crate::poset::GradedPoset;

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub poset: GradedPoset,
    pub is_lattice: bool,
}

fn entry(name: String, poset: GradedPoset) -> CorpusEntry {
    let is_lattice = poset.is_lattice();
    CorpusEntry { name, poset, is_lattice }
}

/// Face poset of a line segment.
pub fn segment() -> GradedPoset {
    boolean_algebra(2)
}

pub fn cube() -> GradedPoset {
    let square = polytope_product(&segment(), &segment()).expect("segments are polytopes");
    polytope_product(&square.poset, &segment()).expect("square is a polytope").poset
}

pub fn cross_polytope() -> GradedPoset {
    polar(&cube()).expect("cube is a lattice").poset
}

pub fn prism(m: usize) -> GradedPoset {
    polytope_product(&polygon(m), &segment()).expect("polygon is a polytope").poset
}

/// Polygons `2..=8`, Boolean algebras of rank `1..=4`, the cube, the
/// cross-polytope, triangular and square prisms, and the pyramids over all
/// of these, keeping only ranks `≤ max_rank`.
pub fn corpus(max_rank: usize) -> Vec<CorpusEntry> {
    let mut base: Vec<CorpusEntry> = Vec::new();
    for m in 2..=8 {
        base.push(entry(format!("polygon{m}"), polygon(m)));
    }
    for k in 2..=5 {
        base.push(entry(format!("boolean{k}"), boolean_algebra(k)));
    }
    base.push(entry(String::from("cube"), cube()));
    base.push(entry(String::from("cross"), cross_polytope()));
    for m in [3, 4] {
        base.push(entry(format!("prism{m}"), prism(m)));
    }
    let mut out = Vec::new();
    for e in &base {
        // pyramids over Boolean algebras are Boolean algebras again
        if !e.name.starts_with("boolean") {
            let p = pyr_poset(&e.poset).expect("corpus posets are graded").poset;
            out.push(entry(format!("pyr({})", e.name), p));
        }
    }
    base.extend(out);
    base.retain(|e| e.poset.rank() <= max_rank);
    base
}

pub fn lookup(name: &str) -> Option<GradedPoset> {
    corpus(usize::MAX).into_iter().find(|e| e.name == name).map(|e| e.poset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::cd_index;

    #[test]
    fn corpus_is_eulerian_and_capped() {
        let c = corpus(4);
        assert!(c.iter().all(|e| e.poset.rank() <= 4));
        assert!(c.iter().all(|e| cd_index(&e.poset).is_ok()));
        assert!(!c.iter().find(|e| e.name == "polygon2").unwrap().is_lattice);
        assert!(c.iter().filter(|e| e.name != "polygon2" && e.name != "pyr(polygon2)").all(|e| e.is_lattice));
        assert!(lookup("pyr(cube)").is_some());
    }
}
