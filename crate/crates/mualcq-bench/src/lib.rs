//! Shared fixtures for the benchmarks.

use mualcq::models::Interpretation;
use mualcq::syntax::{parse_concept, Concept};

/// The inductive list concept over emptylist/node/succ.
pub fn list_concept() -> Concept {
    parse_concept("mu X. emptylist or (node and atmost 1 succ. top and exists succ. X)")
        .expect("fixture parses")
}

/// A successor chain of `n` nodes ending in an emptylist element.
pub fn chain(n: usize) -> Interpretation {
    let mut names: Vec<String> = (1..n).map(|i| format!("n{i}")).collect();
    names.push("e".into());
    let mut interp = Interpretation::new(names).expect("valid domain");
    let node_names: Vec<String> = (1..n).map(|i| format!("n{i}")).collect();
    let nodes: Vec<&str> = node_names.iter().map(String::as_str).collect();
    interp.set_concept_named("emptylist", &["e"]).expect("known");
    interp.set_concept_named("node", &nodes).expect("known");
    let pairs: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    interp.set_role("succ", &pairs);
    interp
}
