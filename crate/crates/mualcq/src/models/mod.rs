//! Finite interpretations, valuations and the extension function.
//!
//! Domains are capped at 64 elements so that element sets are single machine
//! words ([`ElemSet`]); the bounded searches in this crate never get anywhere
//! near that. Interpretations are immutable once built, evaluation is pure.

pub mod enumerate;
pub mod eval;
pub mod io;

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::syntax::{Assertion, Concept, TBox};

pub use enumerate::{enumerate_interpretations, interpretation_count, InterpretationIter};
pub use eval::{evaluate, fixpoint_approximants, tarski_oracle, EvalError, FixKind};

/// Largest supported domain.
pub const MAX_DOMAIN: usize = 64;

/// A subset of a domain of at most [`MAX_DOMAIN`] elements, by index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElemSet(u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    /// The full set over a domain of `n` elements.
    pub fn full(n: usize) -> ElemSet {
        debug_assert!(n <= MAX_DOMAIN);
        if n == MAX_DOMAIN {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> ElemSet {
        ElemSet(1u64 << i)
    }

    pub fn from_bits(bits: u64) -> ElemSet {
        ElemSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn union(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 | other.0)
    }

    pub fn inter(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & other.0)
    }

    pub fn minus(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & !other.0)
    }

    pub fn complement_in(self, n: usize) -> ElemSet {
        ElemSet::full(n).minus(self)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest element index, if any.
    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("the domain of an interpretation must be non-empty")]
    EmptyDomain,
    #[error("domain of size {size} exceeds the supported maximum {max}")]
    DomainTooLarge { size: usize, max: usize },
    #[error("duplicate domain element `{name}`")]
    DuplicateElement { name: String },
    #[error("unknown individual `{name}`")]
    UnknownIndividual { name: String },
    #[error("`{name}` is used both as a concept and as a role name")]
    SignatureOverlap { name: String },
    #[error("enumeration over {bits} extension bits exceeds the supported cap")]
    CapExceeded { bits: u32 },
    #[error("model file, line {line}: {message}")]
    Format { line: usize, message: String },
}

/// A finite interpretation: an ordered domain plus extensions for atomic
/// concepts and roles. Atomic names that were never assigned an extension
/// denote the empty set.
#[derive(Clone, Debug)]
pub struct Interpretation {
    domain: Vec<String>,
    concepts: BTreeMap<String, ElemSet>,
    /// Successor mask per source element; each vector has `domain.len()` rows.
    roles: BTreeMap<String, Vec<ElemSet>>,
}

impl Interpretation {
    pub fn new(domain: Vec<String>) -> Result<Self, ModelError> {
        if domain.is_empty() {
            return Err(ModelError::EmptyDomain);
        }
        if domain.len() > MAX_DOMAIN {
            return Err(ModelError::DomainTooLarge {
                size: domain.len(),
                max: MAX_DOMAIN,
            });
        }
        let mut seen = BTreeSet::new();
        for name in &domain {
            if !seen.insert(name.clone()) {
                return Err(ModelError::DuplicateElement { name: name.clone() });
            }
        }
        Ok(Interpretation {
            domain,
            concepts: BTreeMap::new(),
            roles: BTreeMap::new(),
        })
    }

    /// Interpretation over the canonical domain `d1 .. dN` with all
    /// extensions empty.
    pub fn canonical(size: usize) -> Result<Self, ModelError> {
        Interpretation::new((1..=size).map(|i| format!("d{i}")).collect())
    }

    pub fn size(&self) -> usize {
        self.domain.len()
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn full(&self) -> ElemSet {
        ElemSet::full(self.domain.len())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.domain.iter().position(|d| d == name)
    }

    pub fn name_of(&self, index: usize) -> &str {
        &self.domain[index]
    }

    /// Names of the elements of `set`, in domain order.
    pub fn names_of(&self, set: ElemSet) -> Vec<&str> {
        set.iter().map(|i| self.name_of(i)).collect()
    }

    pub fn set_concept(&mut self, name: impl Into<String>, ext: ElemSet) {
        debug_assert!(ext.is_subset_of(self.full()));
        self.concepts.insert(name.into(), ext);
    }

    pub fn set_concept_named(
        &mut self,
        name: impl Into<String>,
        elems: &[&str],
    ) -> Result<(), ModelError> {
        let mut ext = ElemSet::EMPTY;
        for e in elems {
            let i = self
                .index_of(e)
                .ok_or_else(|| ModelError::UnknownIndividual { name: e.to_string() })?;
            ext.insert(i);
        }
        self.set_concept(name, ext);
        Ok(())
    }

    pub fn set_role(&mut self, name: impl Into<String>, pairs: &[(usize, usize)]) {
        let mut rows = vec![ElemSet::EMPTY; self.domain.len()];
        for &(from, to) in pairs {
            debug_assert!(from < self.domain.len() && to < self.domain.len());
            rows[from].insert(to);
        }
        self.roles.insert(name.into(), rows);
    }

    pub fn set_role_named(
        &mut self,
        name: impl Into<String>,
        pairs: &[(&str, &str)],
    ) -> Result<(), ModelError> {
        let mut indexed = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            let ai = self
                .index_of(a)
                .ok_or_else(|| ModelError::UnknownIndividual { name: a.to_string() })?;
            let bi = self
                .index_of(b)
                .ok_or_else(|| ModelError::UnknownIndividual { name: b.to_string() })?;
            indexed.push((ai, bi));
        }
        self.set_role(name, &indexed);
        Ok(())
    }

    pub fn concept_names(&self) -> impl Iterator<Item = &str> {
        self.concepts.keys().map(String::as_str)
    }

    pub fn role_names(&self) -> impl Iterator<Item = &str> {
        self.roles.keys().map(String::as_str)
    }

    /// Extension of an atomic concept; empty for unknown names.
    pub fn concept_ext(&self, name: &str) -> ElemSet {
        self.concepts.get(name).copied().unwrap_or(ElemSet::EMPTY)
    }

    /// Successors of element `from` under `role`; empty for unknown roles.
    pub fn role_succ(&self, role: &str, from: usize) -> ElemSet {
        self.roles
            .get(role)
            .map(|rows| rows[from])
            .unwrap_or(ElemSet::EMPTY)
    }

    pub fn role_pairs(&self, role: &str) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        if let Some(rows) = self.roles.get(role) {
            for (from, row) in rows.iter().enumerate() {
                for to in row.iter() {
                    out.push((from, to));
                }
            }
        }
        out
    }

    /// Successors of `from` under the union of all role extensions.
    pub fn any_role_succ(&self, from: usize) -> ElemSet {
        self.roles
            .values()
            .fold(ElemSet::EMPTY, |acc, rows| acc.union(rows[from]))
    }

    pub(crate) fn concepts_mut(&mut self) -> &mut BTreeMap<String, ElemSet> {
        &mut self.concepts
    }

    pub(crate) fn roles_mut(&mut self) -> &mut BTreeMap<String, Vec<ElemSet>> {
        &mut self.roles
    }
}

/// Extensional equality: same domain and the same assigned-or-empty
/// extension for every named atomic concept and role.
impl PartialEq for Interpretation {
    fn eq(&self, other: &Self) -> bool {
        if self.domain != other.domain {
            return false;
        }
        let concept_names: BTreeSet<&str> = self
            .concept_names()
            .chain(other.concept_names())
            .collect();
        if concept_names
            .iter()
            .any(|n| self.concept_ext(n) != other.concept_ext(n))
        {
            return false;
        }
        let role_names: BTreeSet<&str> = self.role_names().chain(other.role_names()).collect();
        role_names.iter().all(|n| {
            (0..self.size()).all(|i| self.role_succ(n, i) == other.role_succ(n, i))
        })
    }
}

impl Eq for Interpretation {}

/// An assignment of domain subsets to concept variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation {
    map: BTreeMap<String, ElemSet>,
}

impl Valuation {
    pub fn empty() -> Self {
        Valuation::default()
    }

    pub fn bind(mut self, var: impl Into<String>, set: ElemSet) -> Self {
        self.map.insert(var.into(), set);
        self
    }

    pub fn set(&mut self, var: impl Into<String>, set: ElemSet) {
        self.map.insert(var.into(), set);
    }

    pub fn get(&self, var: &str) -> Option<ElemSet> {
        self.map.get(var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, ElemSet)> {
        self.map.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// The atomic vocabulary a search ranges over.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    concepts: Vec<String>,
    roles: Vec<String>,
}

impl Signature {
    /// Builds a signature; names are sorted and deduplicated, and a name may
    /// not be both a concept and a role.
    pub fn new(
        mut concepts: Vec<String>,
        mut roles: Vec<String>,
    ) -> Result<Self, ModelError> {
        concepts.sort();
        concepts.dedup();
        roles.sort();
        roles.dedup();
        for c in &concepts {
            if roles.binary_search(c).is_ok() {
                return Err(ModelError::SignatureOverlap { name: c.clone() });
            }
        }
        Ok(Signature { concepts, roles })
    }

    pub fn of_concept(c: &Concept) -> Signature {
        Signature {
            concepts: c.atomic_concepts().into_iter().collect(),
            roles: c.roles().into_iter().collect(),
        }
    }

    pub fn of_tbox(k: &TBox) -> Signature {
        Signature {
            concepts: k.atomic_concepts().into_iter().collect(),
            roles: k.roles().into_iter().collect(),
        }
    }

    /// Symbols of a TBox together with extra concepts, the default search
    /// vocabulary for reasoning problems.
    pub fn of_inputs(k: &TBox, extra: &[&Concept]) -> Signature {
        let mut concepts = k.atomic_concepts();
        let mut roles = k.roles();
        for c in extra {
            concepts.extend(c.atomic_concepts());
            roles.extend(c.roles());
        }
        Signature {
            concepts: concepts.into_iter().collect(),
            roles: roles.into_iter().collect(),
        }
    }

    pub fn union(&self, other: &Signature) -> Signature {
        let mut concepts: BTreeSet<String> = self.concepts.iter().cloned().collect();
        concepts.extend(other.concepts.iter().cloned());
        let mut roles: BTreeSet<String> = self.roles.iter().cloned().collect();
        roles.extend(other.roles.iter().cloned());
        Signature {
            concepts: concepts.into_iter().collect(),
            roles: roles.into_iter().collect(),
        }
    }

    pub fn concepts(&self) -> &[String] {
        &self.concepts
    }

    pub fn roles(&self) -> &[String] {
        &self.roles
    }

    /// Whether every atomic symbol of `c` is in the signature.
    pub fn covers(&self, c: &Concept) -> bool {
        c.atomic_concepts()
            .iter()
            .all(|a| self.concepts.binary_search(a).is_ok())
            && c.roles().iter().all(|r| self.roles.binary_search(r).is_ok())
    }

    /// Extension bits of an interpretation of the given size.
    pub fn extension_bits(&self, size: usize) -> u32 {
        (size * self.concepts.len() + size * size * self.roles.len()) as u32
    }
}

/// A violated assertion, with the offending elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TBoxViolation<'a> {
    /// Index into `TBox::assertions`.
    pub index: usize,
    pub assertion: &'a Assertion,
    /// Elements in the left-hand extension but not the right-hand one.
    pub counterexample: ElemSet,
}

/// Checks every inclusion; reports the first violated assertion. Assertions
/// are checked in order and the scan stops at the first failure, which is the
/// pruning the bounded searches rely on.
pub fn satisfies_tbox<'a>(
    interp: &Interpretation,
    k: &'a TBox,
) -> Result<(), TBoxViolation<'a>> {
    let rho = Valuation::empty();
    for (index, assertion) in k.assertions().iter().enumerate() {
        let lhs = evaluate(&assertion.lhs, interp, &rho).expect("TBox concepts are closed");
        if lhs.is_empty() {
            continue;
        }
        let rhs = evaluate(&assertion.rhs, interp, &rho).expect("TBox concepts are closed");
        let gap = lhs.minus(rhs);
        if !gap.is_empty() {
            return Err(TBoxViolation {
                index,
                assertion,
                counterexample: gap,
            });
        }
    }
    Ok(())
}

/// The sub-interpretation and sub-valuation generated by `s`: the domain is
/// restricted to the elements reachable from `s` through the union of all
/// role extensions (reflexively), and every extension is intersected with it.
pub fn generated_sub(
    interp: &Interpretation,
    rho: &Valuation,
    s: &str,
) -> Result<(Interpretation, Valuation), ModelError> {
    let start = interp
        .index_of(s)
        .ok_or_else(|| ModelError::UnknownIndividual { name: s.to_string() })?;

    let mut reachable = ElemSet::singleton(start);
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

    // Re-index the surviving elements, preserving domain order.
    let old_indices: Vec<usize> = reachable.iter().collect();
    let restrict = |ext: ElemSet| {
        let mut out = ElemSet::EMPTY;
        for (new, &old) in old_indices.iter().enumerate() {
            if ext.contains(old) {
                out.insert(new);
            }
        }
        out
    };

    let mut sub = Interpretation::new(
        old_indices
            .iter()
            .map(|&i| interp.name_of(i).to_string())
            .collect(),
    )?;
    for name in interp.concepts.keys() {
        sub.set_concept(name.clone(), restrict(interp.concept_ext(name)));
    }
    for name in interp.roles.keys() {
        let rows: Vec<ElemSet> = old_indices
            .iter()
            .map(|&old| restrict(interp.role_succ(name, old)))
            .collect();
        sub.roles.insert(name.clone(), rows);
    }
    let mut sub_rho = Valuation::empty();
    for (var, ext) in rho.iter() {
        sub_rho.set(var, restrict(ext));
    }
    Ok((sub, sub_rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_tbox;

    fn chain() -> Interpretation {
        let mut i = Interpretation::new(
            ["n1", "n2", "n3", "e"].map(String::from).to_vec(),
        )
        .unwrap();
        i.set_concept_named("emptylist", &["e"]).unwrap();
        i.set_concept_named("node", &["n1", "n2", "n3"]).unwrap();
        i.set_role_named("succ", &[("n1", "n2"), ("n2", "n3"), ("n3", "e")])
            .unwrap();
        i
    }

    #[test]
    fn elemset_basics() {
        let mut s = ElemSet::EMPTY;
        s.insert(0);
        s.insert(3);
        assert_eq!(s.len(), 2);
        assert!(s.contains(3) && !s.contains(1));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![0, 3]);
        assert_eq!(s.complement_in(4).iter().collect::<Vec<_>>(), vec![1, 2]);
        assert!(s.is_subset_of(ElemSet::full(4)));
        assert_eq!(s.first(), Some(0));
    }

    #[test]
    fn interpretation_invariants() {
        assert_eq!(
            Interpretation::new(vec![]).unwrap_err(),
            ModelError::EmptyDomain
        );
        assert!(matches!(
            Interpretation::new(vec!["a".into(), "a".into()]).unwrap_err(),
            ModelError::DuplicateElement { .. }
        ));
        let i = chain();
        assert_eq!(i.names_of(i.concept_ext("node")), vec!["n1", "n2", "n3"]);
        assert!(i.concept_ext("unknown").is_empty());
        assert!(i.role_succ("unknown", 0).is_empty());
        assert_eq!(i.role_pairs("succ"), vec![(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn satisfies_tbox_reports_first_violation() {
        let i = chain();
        assert!(satisfies_tbox(&i, &TBox::empty()).is_ok());

        let k = parse_tbox("emptylist <= not node").unwrap();
        assert!(satisfies_tbox(&i, &k).is_ok());

        let mut bad = chain();
        bad.set_concept_named("emptylist", &["e", "n1"]).unwrap();
        bad.set_concept_named("node", &["n1", "n2", "n3"]).unwrap();
        let violation = satisfies_tbox(&bad, &k).unwrap_err();
        assert_eq!(violation.index, 0);
        assert_eq!(bad.names_of(violation.counterexample), vec!["n1"]);
    }

    #[test]
    fn generated_sub_basics() {
        let i = chain();
        // e has no outgoing edges: the generated part is just {e}.
        let (sub, _) = generated_sub(&i, &Valuation::empty(), "e").unwrap();
        assert_eq!(sub.domain(), &["e".to_string()]);
        assert_eq!(sub.names_of(sub.concept_ext("emptylist")), vec!["e"]);
        assert!(sub.concept_ext("node").is_empty());

        // From n2 the chain suffix survives, with edges intact.
        let rho = Valuation::empty().bind("X", ElemSet::from_bits(0b1011));
        let (sub, sub_rho) = generated_sub(&i, &rho, "n2").unwrap();
        assert_eq!(
            sub.domain(),
            &["n2".to_string(), "n3".to_string(), "e".to_string()]
        );
        assert_eq!(sub.role_pairs("succ"), vec![(0, 1), (1, 2)]);
        // X = {n1, n2, e} restricted to {n2, n3, e} = {n2, e} at new indices 0 and 2.
        assert_eq!(sub_rho.get("X").unwrap().iter().collect::<Vec<_>>(), vec![0, 2]);

        assert!(matches!(
            generated_sub(&i, &Valuation::empty(), "zz"),
            Err(ModelError::UnknownIndividual { .. })
        ));
    }

    #[test]
    fn generated_sub_disconnected_component() {
        let mut i =
            Interpretation::new(["a", "b", "c", "d"].map(String::from).to_vec()).unwrap();
        i.set_role_named("r", &[("a", "b"), ("b", "a"), ("c", "d")])
            .unwrap();
        let (sub, _) = generated_sub(&i, &Valuation::empty(), "a").unwrap();
        assert_eq!(sub.domain(), &["a".to_string(), "b".to_string()]);
    }

    #[test]
    fn signature_construction() {
        let sig = Signature::new(
            vec!["b".into(), "a".into(), "a".into()],
            vec!["r".into()],
        )
        .unwrap();
        assert_eq!(sig.concepts(), &["a".to_string(), "b".to_string()]);
        assert!(matches!(
            Signature::new(vec!["a".into()], vec!["a".into()]),
            Err(ModelError::SignatureOverlap { .. })
        ));
        let c = crate::syntax::parse_concept("mu X. exists child. X").unwrap();
        let sig = Signature::of_concept(&c);
        assert!(sig.concepts().is_empty());
        assert_eq!(sig.roles(), &["child".to_string()]);
    }
}
