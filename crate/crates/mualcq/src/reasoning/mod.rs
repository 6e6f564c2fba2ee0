//! Bounded-model satisfiability and logical-implication search.
//!
//! Search enumerates interpretations of growing size, so a found witness or
//! counter-model is definitive while exhausting the bound is not: verdicts
//! are `UnknownUpTo`/`HoldsUpTo`, never "unsatisfiable" or "valid".
//! Implication can be decided two ways — directly, by enumerating models of
//! the TBox, or by internalizing the TBox into a single concept and searching
//! for a satisfying element — and the two must agree.

pub mod suite;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::models::enumerate::scan_interpretations;
use crate::models::eval::EvalError;
use crate::models::io::print_model;
use crate::models::{
    evaluate, satisfies_tbox, generated_sub, Interpretation, ModelError, Signature, Valuation,
};
use crate::syntax::{
    check_well_formed, free_variables, fresh_name, Concept, SyntaxError, TBox,
};

pub use suite::{law_suite, theorem_suite, SuiteCfg, SuiteReport};

#[derive(Debug, Error)]
pub enum ReasoningError {
    #[error("concept is not closed: free variable {var}")]
    NotClosed { var: String },
    #[error("signature does not cover the symbol `{name}`")]
    SignatureMismatch { name: String },
    #[error("internal error: a found witness failed its re-check")]
    WitnessRecheckFailed,
    #[error("internal error: strategies disagree (direct: {direct}, internalized: {internalized})")]
    StrategyDisagreement {
        direct: &'static str,
        internalized: &'static str,
    },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Outcome of a bounded satisfiability search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatVerdict {
    /// A model and an element of the concept's extension in it.
    Satisfiable {
        witness: Interpretation,
        element: String,
    },
    /// No witness among the interpretations of size 1..=bound.
    UnknownUpTo { bound: usize },
}

impl SatVerdict {
    /// Stable structured-text rendering: verdict kind, then bound or witness.
    pub fn to_structured_text(&self) -> String {
        match self {
            SatVerdict::Satisfiable { witness, element } => {
                format!("verdict: satisfiable\nelement: {element}\n{}", print_model(witness))
            }
            SatVerdict::UnknownUpTo { bound } => {
                format!("verdict: unknown-up-to\nbound: {bound}\n")
            }
        }
    }
}

impl fmt::Display for SatVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SatVerdict::Satisfiable { witness, element } => write!(
                f,
                "satisfiable: element {element} in a model of size {}",
                witness.size()
            ),
            SatVerdict::UnknownUpTo { bound } => write!(f, "unknown up to size {bound}"),
        }
    }
}

/// Outcome of a bounded logical-implication check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ImplicationVerdict {
    /// A model of the TBox with an element in the left concept but not the
    /// right one.
    Refuted {
        counter_model: Interpretation,
        element: String,
    },
    /// No counter-model among the interpretations of size 1..=bound.
    HoldsUpTo { bound: usize },
}

impl ImplicationVerdict {
    pub fn to_structured_text(&self) -> String {
        match self {
            ImplicationVerdict::Refuted {
                counter_model,
                element,
            } => format!(
                "verdict: refuted\nelement: {element}\n{}",
                print_model(counter_model)
            ),
            ImplicationVerdict::HoldsUpTo { bound } => {
                format!("verdict: holds-up-to\nbound: {bound}\n")
            }
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            ImplicationVerdict::Refuted { .. } => "refuted",
            ImplicationVerdict::HoldsUpTo { .. } => "holds-up-to",
        }
    }
}

impl fmt::Display for ImplicationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImplicationVerdict::Refuted {
                counter_model,
                element,
            } => write!(
                f,
                "refuted: element {element} in a counter-model of size {}",
                counter_model.size()
            ),
            ImplicationVerdict::HoldsUpTo { bound } => write!(f, "holds up to size {bound}"),
        }
    }
}

/// How [`implies_bounded`] decides implication.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Enumerate models of the TBox and test extension inclusion.
    #[default]
    Direct,
    /// Search for a satisfying element of the internalized concept.
    Internalized,
    /// Run both and require agreement; the direct verdict is returned.
    Both,
}

fn require_closed_wf(c: &Concept) -> Result<(), ReasoningError> {
    if let Some(var) = free_variables(c).into_iter().next() {
        return Err(ReasoningError::NotClosed { var });
    }
    check_well_formed(c)?;
    Ok(())
}

/// Reduces TBox implication to concept satisfiability: `K |= C <= D` holds
/// exactly when
///
/// ```text
/// nu X. (forall R1. X and ... and forall Rm. X and C_K) and C and not D
/// ```
///
/// is unsatisfiable, where `C_K` conjoins `not C_i or D_i` over the
/// assertions of `K` (`top` when `K` is empty). The guarded roles `R1..Rm`
/// are all atomic roles of `K`, `C` and `D`, so the guard constrains every
/// edge reachable from a satisfying element.
pub fn internalize(k: &TBox, c: &Concept, d: &Concept) -> Result<Concept, ReasoningError> {
    for side in [c, d] {
        require_closed_wf(side)?;
    }

    let mut roles: BTreeSet<String> = k.roles();
    roles.extend(c.roles());
    roles.extend(d.roles());

    let mut avoid = k.identifiers();
    avoid.extend(c.identifiers());
    avoid.extend(d.identifiers());
    let x = if avoid.contains("X") {
        fresh_name("X", &avoid)
    } else {
        "X".to_string()
    };

    let c_k = Concept::and_all(
        k.assertions()
            .iter()
            .map(|a| Concept::or(Concept::not(a.lhs.clone()), a.rhs.clone()))
            .collect(),
    );
    let mut guard_parts: Vec<Concept> = roles
        .iter()
        .map(|r| Concept::forall(r.clone(), Concept::var(x.clone())))
        .collect();
    guard_parts.push(c_k);
    let guard = Concept::nu(x, Concept::and_all(guard_parts));

    Ok(Concept::and(
        Concept::and(guard, c.clone()),
        Concept::not(d.clone()),
    ))
}

fn first_of(ext: crate::models::ElemSet, interp: &Interpretation) -> String {
    let idx = ext.first().expect("extension checked non-empty");
    interp.name_of(idx).to_string()
}

/// Searches interpretations of sizes 1..=`max_size` over `sig` for one where
/// the extension of `c` is non-empty. The first witness in enumeration order
/// is returned, so results are deterministic; a `Satisfiable` verdict is
/// sound, `UnknownUpTo` is not a proof of unsatisfiability.
pub fn sat_bounded(
    c: &Concept,
    max_size: usize,
    sig: &Signature,
) -> Result<SatVerdict, ReasoningError> {
    require_closed_wf(c)?;
    if !sig.covers(c) {
        let missing = c
            .atomic_concepts()
            .into_iter()
            .chain(c.roles())
            .find(|n| {
                !sig.concepts().contains(n) && !sig.roles().contains(n)
            })
            .unwrap_or_default();
        return Err(ReasoningError::SignatureMismatch { name: missing });
    }
    let rho = Valuation::empty();
    for size in 1..=max_size {
        let mut found: Option<(Interpretation, String)> = None;
        scan_interpretations(sig, size, |interp| {
            let ext = evaluate(c, interp, &rho).expect("closed and well-formed");
            if ext.is_empty() {
                false
            } else {
                found = Some((interp.clone(), first_of(ext, interp)));
                true
            }
        })?;
        if let Some((witness, element)) = found {
            // Re-check before reporting.
            let ext = evaluate(c, &witness, &rho)?;
            match witness.index_of(&element) {
                Some(idx) if ext.contains(idx) => {}
                _ => return Err(ReasoningError::WitnessRecheckFailed),
            }
            return Ok(SatVerdict::Satisfiable { witness, element });
        }
    }
    Ok(SatVerdict::UnknownUpTo { bound: max_size })
}

/// Bounded satisfiability of `c` in TBox `k`: searches for a model of `k`
/// with a non-empty extension of `c`.
pub fn sat_bounded_in(
    k: &TBox,
    c: &Concept,
    max_size: usize,
    sig: &Signature,
) -> Result<SatVerdict, ReasoningError> {
    require_closed_wf(c)?;
    let rho = Valuation::empty();
    for size in 1..=max_size {
        let mut found: Option<(Interpretation, String)> = None;
        scan_interpretations(sig, size, |interp| {
            if satisfies_tbox(interp, k).is_err() {
                return false;
            }
            let ext = evaluate(c, interp, &rho).expect("closed and well-formed");
            if ext.is_empty() {
                false
            } else {
                found = Some((interp.clone(), first_of(ext, interp)));
                true
            }
        })?;
        if let Some((witness, element)) = found {
            let ext = evaluate(c, &witness, &rho)?;
            let ok = satisfies_tbox(&witness, k).is_ok()
                && matches!(witness.index_of(&element), Some(i) if ext.contains(i));
            if !ok {
                return Err(ReasoningError::WitnessRecheckFailed);
            }
            return Ok(SatVerdict::Satisfiable { witness, element });
        }
    }
    Ok(SatVerdict::UnknownUpTo { bound: max_size })
}

fn implies_direct(
    k: &TBox,
    c: &Concept,
    d: &Concept,
    max_size: usize,
    sig: &Signature,
) -> Result<ImplicationVerdict, ReasoningError> {
    let rho = Valuation::empty();
    for size in 1..=max_size {
        let mut found: Option<(Interpretation, String)> = None;
        scan_interpretations(sig, size, |interp| {
            // Models violating K are pruned at their first failing assertion.
            if satisfies_tbox(interp, k).is_err() {
                return false;
            }
            let lhs = evaluate(c, interp, &rho).expect("closed and well-formed");
            if lhs.is_empty() {
                return false;
            }
            let rhs = evaluate(d, interp, &rho).expect("closed and well-formed");
            let gap = lhs.minus(rhs);
            if gap.is_empty() {
                false
            } else {
                found = Some((interp.clone(), first_of(gap, interp)));
                true
            }
        })?;
        if let Some((counter_model, element)) = found {
            check_refutation(k, c, d, &counter_model, &element)?;
            return Ok(ImplicationVerdict::Refuted {
                counter_model,
                element,
            });
        }
    }
    Ok(ImplicationVerdict::HoldsUpTo { bound: max_size })
}

/// Re-validates a counter-model before it is reported.
fn check_refutation(
    k: &TBox,
    c: &Concept,
    d: &Concept,
    m: &Interpretation,
    element: &str,
) -> Result<(), ReasoningError> {
    let rho = Valuation::empty();
    let idx = m
        .index_of(element)
        .ok_or(ReasoningError::WitnessRecheckFailed)?;
    let ok = satisfies_tbox(m, k).is_ok()
        && evaluate(c, m, &rho)?.contains(idx)
        && !evaluate(d, m, &rho)?.contains(idx);
    if ok {
        Ok(())
    } else {
        Err(ReasoningError::WitnessRecheckFailed)
    }
}

fn implies_internalized(
    k: &TBox,
    c: &Concept,
    d: &Concept,
    max_size: usize,
    sig: &Signature,
) -> Result<ImplicationVerdict, ReasoningError> {
    let internalized = internalize(k, c, d)?;
    match sat_bounded(&internalized, max_size, sig)? {
        SatVerdict::UnknownUpTo { bound } => Ok(ImplicationVerdict::HoldsUpTo { bound }),
        SatVerdict::Satisfiable { witness, element } => {
            // The witness satisfies K only on the part reachable from the
            // element; the generated sub-interpretation is a genuine model of
            // K refuting the inclusion.
            let (counter_model, _) = generated_sub(&witness, &Valuation::empty(), &element)?;
            check_refutation(k, c, d, &counter_model, &element)?;
            Ok(ImplicationVerdict::Refuted {
                counter_model,
                element,
            })
        }
    }
}

/// Decides `K |= C <= D` up to `max_size`, over the signature of the inputs.
///
/// A refutation is definitive (the counter-model is re-checked); exhausting
/// the bound only says the implication holds on all models up to that size.
/// Under [`Strategy::Both`] the direct and internalized searches must return
/// the same verdict kind, and the direct counter-model is reported.
pub fn implies_bounded(
    k: &TBox,
    c: &Concept,
    d: &Concept,
    max_size: usize,
    strategy: Strategy,
) -> Result<ImplicationVerdict, ReasoningError> {
    for side in [c, d] {
        require_closed_wf(side)?;
    }
    let sig = Signature::of_inputs(k, &[c, d]);
    match strategy {
        Strategy::Direct => implies_direct(k, c, d, max_size, &sig),
        Strategy::Internalized => implies_internalized(k, c, d, max_size, &sig),
        Strategy::Both => {
            let direct = implies_direct(k, c, d, max_size, &sig)?;
            let internalized = implies_internalized(k, c, d, max_size, &sig)?;
            if direct.kind() != internalized.kind() {
                return Err(ReasoningError::StrategyDisagreement {
                    direct: direct.kind(),
                    internalized: internalized.kind(),
                });
            }
            Ok(direct)
        }
    }
}

/// Advisory size bound: 2 raised to the number of distinct subterms of `c`.
/// Bounded search that exhausts this size would be complete, but the bound is
/// astronomically loose and is never used to claim unsatisfiability.
pub fn closure_bound(c: &Concept) -> u128 {
    let members: std::collections::HashSet<&Concept> = c.subterms().into_iter().collect();
    let k = members.len() as u32;
    if k >= 127 {
        u128::MAX
    } else {
        1u128 << k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_concept, parse_tbox, print_concept};

    #[test]
    fn internalize_shapes() {
        //  Empty TBox: guard body is just top; the bottom conjunct makes the
        //  whole concept unsatisfiable.
        let k = TBox::empty();
        let c = Concept::Bot;
        let d = Concept::atomic("d");
        let got = internalize(&k, &c, &d).unwrap();
        let expected = Concept::and(
            Concept::and(Concept::nu("X", Concept::Top), Concept::Bot),
            Concept::not(Concept::atomic("d")),
        );
        assert_eq!(got, expected);
        let sig = Signature::of_inputs(&k, &[&c, &d]);
        assert!(matches!(
            sat_bounded(&got, 3, &sig).unwrap(),
            SatVerdict::UnknownUpTo { .. }
        ));

        // K = {a <= b}: no roles anywhere, so the guard collapses to C_K.
        let k = parse_tbox("a <= b").unwrap();
        let c = Concept::atomic("a");
        let d = Concept::atomic("b");
        let got = internalize(&k, &c, &d).unwrap();
        let expected = Concept::and(
            Concept::and(
                Concept::nu(
                    "X",
                    Concept::or(Concept::not(Concept::atomic("a")), Concept::atomic("b")),
                ),
                Concept::atomic("a"),
            ),
            Concept::not(Concept::atomic("b")),
        );
        assert_eq!(got, expected);
        let sig = Signature::of_inputs(&k, &[&c, &d]);
        for bound in 1..=3 {
            assert!(matches!(
                sat_bounded(&got, bound, &sig).unwrap(),
                SatVerdict::UnknownUpTo { .. }
            ));
        }
    }

    #[test]
    fn internalize_guards_roles_of_all_inputs() {
        let k = parse_tbox("a <= b").unwrap();
        let c = parse_concept("exists r. a").unwrap();
        let d = parse_concept("forall s. b").unwrap();
        let got = internalize(&k, &c, &d).unwrap();
        let printed = print_concept(&got);
        assert!(printed.contains("forall r. X"));
        assert!(printed.contains("forall s. X"));
    }

    #[test]
    fn internalize_rejects_open_inputs() {
        let k = TBox::empty();
        let open = Concept::var("X");
        assert!(matches!(
            internalize(&k, &open, &Concept::Top),
            Err(ReasoningError::NotClosed { .. })
        ));
    }

    #[test]
    fn sat_examples() {
        // nu X. exists succ. X: the size-1 self loop.
        let c = parse_concept("nu X. exists succ. X").unwrap();
        let sig = Signature::of_concept(&c);
        match sat_bounded(&c, 1, &sig).unwrap() {
            SatVerdict::Satisfiable { witness, element } => {
                assert_eq!(witness.size(), 1);
                assert_eq!(element, "d1");
                assert_eq!(witness.role_pairs("succ"), vec![(0, 0)]);
            }
            other => panic!("expected satisfiable, got {other:?}"),
        }

        // mu X. exists child. X: no finite witness at any bound.
        let c = parse_concept("mu X. exists child. X").unwrap();
        let sig = Signature::of_concept(&c);
        assert_eq!(
            sat_bounded(&c, 3, &sig).unwrap(),
            SatVerdict::UnknownUpTo { bound: 3 }
        );

        // top is satisfied by the unique empty-signature model of size 1.
        let sig = Signature::of_concept(&Concept::Top);
        match sat_bounded(&Concept::Top, 1, &sig).unwrap() {
            SatVerdict::Satisfiable { witness, .. } => assert_eq!(witness.size(), 1),
            other => panic!("expected satisfiable, got {other:?}"),
        }
    }

    #[test]
    fn sat_rejects_uncovered_signature() {
        let c = parse_concept("exists r. a").unwrap();
        let sig = Signature::new(vec![], vec![]).unwrap();
        assert!(matches!(
            sat_bounded(&c, 1, &sig),
            Err(ReasoningError::SignatureMismatch { .. })
        ));
    }

    #[test]
    fn implies_conjunction_elimination() {
        let k = TBox::empty();
        let c = parse_concept("a and b").unwrap();
        let d = parse_concept("a").unwrap();
        assert_eq!(
            implies_bounded(&k, &c, &d, 2, Strategy::Both).unwrap(),
            ImplicationVerdict::HoldsUpTo { bound: 2 }
        );
    }

    #[test]
    fn implies_refutes_with_a_model_of_k() {
        let k = parse_tbox("a <= b").unwrap();
        let c = parse_concept("b").unwrap();
        let d = parse_concept("a").unwrap();
        for strategy in [Strategy::Direct, Strategy::Internalized, Strategy::Both] {
            match implies_bounded(&k, &c, &d, 2, strategy).unwrap() {
                ImplicationVerdict::Refuted {
                    counter_model,
                    element,
                } => {
                    assert!(satisfies_tbox(&counter_model, &k).is_ok());
                    let idx = counter_model.index_of(&element).unwrap();
                    assert!(counter_model.concept_ext("b").contains(idx));
                    assert!(!counter_model.concept_ext("a").contains(idx));
                }
                other => panic!("expected refuted, got {other:?}"),
            }
        }
    }

    #[test]
    fn closure_bound_counts_distinct_subterms() {
        assert_eq!(closure_bound(&Concept::atomic("a")), 2);
        assert_eq!(closure_bound(&Concept::Top), 2);
        // mu X. exists r. X has subterms {mu X. exists r. X, exists r. X, X}.
        let c = parse_concept("mu X. exists r. X").unwrap();
        assert_eq!(closure_bound(&c), 8);
        // Repeated subterms count once.
        let c = parse_concept("a and a").unwrap();
        assert_eq!(closure_bound(&c), 4);
    }
}
