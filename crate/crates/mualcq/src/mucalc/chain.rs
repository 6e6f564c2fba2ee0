//! The tree-model chaining transform and its inverse collapse.
//!
//! Chaining re-encodes each node's successor list as a first-child edge under
//! the original role plus a sibling chain under the fresh role, making both
//! relations partial functions. `(x, z)` is an R-edge of the source exactly
//! when `z` is reachable from `x` by one R-edge followed by fresh-role edges
//! in the output, which is what the collapse computes.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use super::translate::fresh_role_name;
use super::{KripkeStructure, MucalcError};
use crate::models::{ElemSet, Interpretation};

/// The sibling-chain role chosen for each role of `interp`, the same naming
/// scheme [`super::translate_u`] uses for the roles of a concept; the two
/// maps agree wherever concept and interpretation share a vocabulary.
pub fn chained_role_map(interp: &Interpretation) -> BTreeMap<String, String> {
    let roles: BTreeSet<String> = interp.role_names().map(str::to_string).collect();
    let mut used = roles.clone();
    let mut map = BTreeMap::new();
    for role in roles {
        let fresh = fresh_role_name(&role, &used);
        used.insert(fresh.clone());
        map.insert(role, fresh);
    }
    map
}

/// Re-encodes a tree-shaped interpretation as a deterministic Kripke
/// structure.
///
/// The part of `interp` reachable from `root` (through any role) must be a
/// tree: the root has no incoming role edge and every other reachable element
/// has exactly one, counting edges of all roles. Sibling order follows the
/// domain order, sibling-chain roles follow [`chained_role_map`]. Returns the
/// structure and the element-to-state name map.
pub fn chain_tree_model(
    interp: &Interpretation,
    root: &str,
) -> Result<(KripkeStructure, BTreeMap<String, String>), MucalcError> {
    let root_idx = interp
        .index_of(root)
        .ok_or_else(|| MucalcError::UnknownState {
            name: root.to_string(),
        })?;

    let mut reachable = ElemSet::singleton(root_idx);
    loop {
        let mut next = reachable;
        for i in reachable.iter() {
            next = next.union(interp.any_role_succ(i));
        }
        if next == reachable {
            break;
        }
        reachable = next;
    }

    // Tree check: count incoming edges from reachable elements, with
    // multiplicity across roles. A cycle always shows up here, either as an
    // extra edge into the root or as a doubly-entered node.
    let roles: Vec<String> = interp.role_names().map(str::to_string).collect();
    for t in reachable.iter() {
        let mut incoming = 0usize;
        for s in reachable.iter() {
            for role in &roles {
                if interp.role_succ(role, s).contains(t) {
                    incoming += 1;
                }
            }
        }
        let expected = usize::from(t != root_idx);
        if incoming != expected {
            return Err(MucalcError::NotATree {
                node: interp.name_of(t).to_string(),
                parents: incoming,
            });
        }
    }

    let old_indices: Vec<usize> = reachable.iter().collect();
    let new_index: BTreeMap<usize, usize> = old_indices
        .iter()
        .enumerate()
        .map(|(new, &old)| (old, new))
        .collect();
    let states: Vec<String> = old_indices
        .iter()
        .map(|&i| interp.name_of(i).to_string())
        .collect();
    let mut structure = KripkeStructure::new(states)?;

    for a in interp.concept_names() {
        let ext = interp.concept_ext(a);
        let mut restricted = ElemSet::EMPTY;
        for (&old, &new) in &new_index {
            if ext.contains(old) {
                restricted.insert(new);
            }
        }
        structure.set_atom(a.to_string(), restricted);
    }

    let fresh_map = chained_role_map(interp);
    for role in &roles {
        let fresh = fresh_map[role].clone();
        let mut first_child = Vec::new();
        let mut siblings = Vec::new();
        for &parent in &old_indices {
            let children: Vec<usize> = interp
                .role_succ(role, parent)
                .iter()
                .filter(|c| reachable.contains(*c))
                .collect();
            if let Some(&first) = children.first() {
                first_child.push((new_index[&parent], new_index[&first]));
            }
            for pair in children.windows(2) {
                siblings.push((new_index[&pair[0]], new_index[&pair[1]]));
            }
        }
        structure.set_relation(role.clone(), &first_child);
        structure.set_relation(fresh, &siblings);
    }

    let state_map: BTreeMap<String, String> = old_indices
        .iter()
        .map(|&i| {
            let name = interp.name_of(i).to_string();
            (name.clone(), name)
        })
        .collect();
    Ok((structure, state_map))
}

/// Undoes the chaining: for every source role `R` with fresh role `F`, the
/// collapsed R-edges are `R` composed with `F*`. Atom valuations carry over;
/// labels outside `fresh_roles` and its values are copied unchanged.
pub fn collapse_chained(
    m: &KripkeStructure,
    fresh_roles: &BTreeMap<String, String>,
) -> Result<Interpretation, MucalcError> {
    let mut interp = Interpretation::new(m.states().to_vec())?;
    for a in m.atom_names() {
        interp.set_concept(a.to_string(), m.atom_ext(a));
    }
    let fresh_values: BTreeSet<&String> = fresh_roles.values().collect();
    for label in m.labels() {
        if fresh_values.contains(&label.to_string()) {
            continue;
        }
        let pairs = match fresh_roles.get(label) {
            Some(fresh) => {
                let mut pairs = Vec::new();
                for (x, z1) in m.relation_pairs(label) {
                    // z1 and everything down its sibling chain.
                    let mut chain = ElemSet::singleton(z1);
                    loop {
                        let mut next = chain;
                        for i in chain.iter() {
                            next = next.union(m.successors(fresh, i));
                        }
                        if next == chain {
                            break;
                        }
                        chain = next;
                    }
                    for z in chain.iter() {
                        pairs.push((x, z));
                    }
                }
                pairs
            }
            None => m.relation_pairs(label),
        };
        interp.set_role(label.to_string(), &pairs);
    }
    Ok(interp)
}
