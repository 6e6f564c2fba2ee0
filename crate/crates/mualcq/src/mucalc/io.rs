//! Kripke structure files: the model file format with `label` in place of
//! `role`.

use super::KripkeStructure;
use crate::models::io::{parse_sections, Sections};
use crate::models::{ElemSet, ModelError};

/// Parses a Kripke structure from its file format.
pub fn parse_kripke(text: &str) -> Result<KripkeStructure, ModelError> {
    let Sections {
        domain,
        concepts,
        edges,
    } = parse_sections(text, "label")?;
    let mut m = KripkeStructure::new(domain)?;
    for (name, elems) in concepts {
        let mut ext = ElemSet::EMPTY;
        for e in &elems {
            let i = m
                .index_of(e)
                .ok_or_else(|| ModelError::UnknownIndividual { name: e.clone() })?;
            ext.insert(i);
        }
        m.set_atom(name, ext);
    }
    for (name, pairs) in edges {
        let mut indexed = Vec::with_capacity(pairs.len());
        for (a, b) in &pairs {
            let ai = m
                .index_of(a)
                .ok_or_else(|| ModelError::UnknownIndividual { name: a.clone() })?;
            let bi = m
                .index_of(b)
                .ok_or_else(|| ModelError::UnknownIndividual { name: b.clone() })?;
            indexed.push((ai, bi));
        }
        m.set_relation(name, &indexed);
    }
    Ok(m)
}

/// Renders a Kripke structure; domain first, then atoms and labels sorted by
/// name.
pub fn print_kripke(m: &KripkeStructure) -> String {
    let mut out = String::new();
    out.push_str("domain: [");
    out.push_str(&m.states().join(", "));
    out.push_str("]\n");
    for name in m.atom_names() {
        let elems = m.names_of(m.atom_ext(name)).join(", ");
        out.push_str(&format!("concept {name}: [{elems}]\n"));
    }
    let labels: Vec<String> = m.labels().map(str::to_string).collect();
    for name in labels {
        let pairs: Vec<String> = m
            .relation_pairs(&name)
            .into_iter()
            .map(|(a, b)| format!("({},{})", m.name_of(a), m.name_of(b)))
            .collect();
        out.push_str(&format!("label {name}: [{}]\n", pairs.join(", ")));
    }
    out
}
