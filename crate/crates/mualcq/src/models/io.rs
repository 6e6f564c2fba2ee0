//! The model file format: structured text with a stable field order.
//!
//! ```text
//! domain: [n1, n2, e]
//! concept node: [n1, n2]
//! role succ: [(n1,n2), (n2,e)]
//! ```
//!
//! `#` starts a comment. The printer emits the domain first, then concepts
//! and roles sorted by name, so output is byte-stable.

use super::{Interpretation, ModelError};

pub(crate) struct Sections {
    pub domain: Vec<String>,
    pub concepts: Vec<(String, Vec<String>)>,
    pub edges: Vec<(String, Vec<(String, String)>)>,
}

fn format_err(line: usize, message: impl Into<String>) -> ModelError {
    ModelError::Format {
        line,
        message: message.into(),
    }
}

fn bracket_body(line: usize, text: &str) -> Result<&str, ModelError> {
    let text = text.trim();
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| format_err(line, "expected a `[...]` list"))?;
    Ok(inner.trim())
}

fn parse_names(line: usize, body: &str) -> Result<Vec<String>, ModelError> {
    let body = bracket_body(line, body)?;
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|part| {
            let name = part.trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                Err(format_err(line, format!("bad element name `{name}`")))
            } else {
                Ok(name.to_string())
            }
        })
        .collect()
}

fn parse_pairs(line: usize, body: &str) -> Result<Vec<(String, String)>, ModelError> {
    let body = bracket_body(line, body)?;
    if body.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut rest = body;
    loop {
        let rest_trim = rest.trim_start();
        let after_open = rest_trim
            .strip_prefix('(')
            .ok_or_else(|| format_err(line, "expected `(from,to)`"))?;
        let close = after_open
            .find(')')
            .ok_or_else(|| format_err(line, "unclosed `(`"))?;
        let inner = &after_open[..close];
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| format_err(line, "expected `(from,to)`"))?;
        let (a, b) = (a.trim(), b.trim());
        if a.is_empty() || b.is_empty() {
            return Err(format_err(line, "empty pair component"));
        }
        out.push((a.to_string(), b.to_string()));
        let mut tail = after_open[close + 1..].trim_start();
        if tail.is_empty() {
            return Ok(out);
        }
        tail = tail
            .strip_prefix(',')
            .ok_or_else(|| format_err(line, "expected `,` between pairs"))?;
        rest = tail;
    }
}

/// Shared line-oriented reader; `edge_keyword` is `role` for interpretations
/// and `label` for Kripke structures.
pub(crate) fn parse_sections(text: &str, edge_keyword: &str) -> Result<Sections, ModelError> {
    let mut domain: Option<Vec<String>> = None;
    let mut concepts = Vec::new();
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (head, body) = line
            .split_once(':')
            .ok_or_else(|| format_err(line_no, "expected `field: [...]`"))?;
        let head = head.trim();
        if head == "domain" {
            if domain.is_some() {
                return Err(format_err(line_no, "repeated domain line"));
            }
            domain = Some(parse_names(line_no, body)?);
        } else if let Some(name) = head.strip_prefix("concept ") {
            concepts.push((name.trim().to_string(), parse_names(line_no, body)?));
        } else if let Some(name) = head
            .strip_prefix(edge_keyword)
            .and_then(|rest| rest.strip_prefix(' '))
        {
            let name = name.trim();
            if name.is_empty() {
                return Err(format_err(line_no, format!("`{edge_keyword}` needs a name")));
            }
            edges.push((name.to_string(), parse_pairs(line_no, body)?));
        } else {
            return Err(format_err(
                line_no,
                format!("unknown field `{head}` (expected domain, concept or {edge_keyword})"),
            ));
        }
    }
    let domain = domain.ok_or_else(|| format_err(0, "missing domain line"))?;
    Ok(Sections {
        domain,
        concepts,
        edges,
    })
}

/// Parses an interpretation from the model file format.
pub fn parse_model(text: &str) -> Result<Interpretation, ModelError> {
    let sections = parse_sections(text, "role")?;
    let mut interp = Interpretation::new(sections.domain)?;
    for (name, elems) in &sections.concepts {
        let refs: Vec<&str> = elems.iter().map(String::as_str).collect();
        interp.set_concept_named(name.clone(), &refs)?;
    }
    for (name, pairs) in &sections.edges {
        let refs: Vec<(&str, &str)> = pairs
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        interp.set_role_named(name.clone(), &refs)?;
    }
    Ok(interp)
}

/// Renders an interpretation in the model file format.
pub fn print_model(interp: &Interpretation) -> String {
    let mut out = String::new();
    out.push_str("domain: [");
    out.push_str(&interp.domain().join(", "));
    out.push_str("]\n");
    for name in interp.concept_names() {
        let elems = interp.names_of(interp.concept_ext(name)).join(", ");
        out.push_str(&format!("concept {name}: [{elems}]\n"));
    }
    let role_names: Vec<String> = interp.role_names().map(str::to_string).collect();
    for name in role_names {
        let pairs: Vec<String> = interp
            .role_pairs(&name)
            .into_iter()
            .map(|(a, b)| format!("({},{})", interp.name_of(a), interp.name_of(b)))
            .collect();
        out.push_str(&format!("role {name}: [{}]\n", pairs.join(", ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints_round_trip() {
        let text = "\
# the list chain
domain: [n1, n2, n3, e]
concept emptylist: [e]
concept node: [n1, n2, n3]
role succ: [(n1,n2), (n2,n3), (n3,e)]
";
        let model = parse_model(text).unwrap();
        assert_eq!(model.size(), 4);
        assert_eq!(model.names_of(model.concept_ext("node")), vec!["n1", "n2", "n3"]);
        let printed = print_model(&model);
        let reparsed = parse_model(&printed).unwrap();
        assert_eq!(model, reparsed);
        assert_eq!(printed, print_model(&reparsed));
    }

    #[test]
    fn empty_extensions_and_comments() {
        let text = "domain: [a]\nconcept p: []\nrole r: []  # nothing\n";
        let model = parse_model(text).unwrap();
        assert!(model.concept_ext("p").is_empty());
        assert!(model.role_pairs("r").is_empty());
    }

    #[test]
    fn bad_inputs_are_rejected() {
        assert!(matches!(
            parse_model("concept p: [a]"),
            Err(ModelError::Format { .. })
        ));
        assert!(matches!(
            parse_model("domain: [a]\nconcept p: [zzz]"),
            Err(ModelError::UnknownIndividual { .. })
        ));
        assert!(matches!(
            parse_model("domain: [a\n"),
            Err(ModelError::Format { .. })
        ));
        assert!(matches!(
            parse_model("domain: [a]\nrole r: [(a a)]"),
            Err(ModelError::Format { .. })
        ));
    }
}
