//! The extension function, with fixpoints computed by Kleene iteration from
//! the bottom (`mu`) or the top (`nu`) of the subset lattice.
//!
//! Iteration is naive: the body is re-evaluated each round and nothing is
//! cached across nested fixpoints. On a domain of size m a monotone iteration
//! stabilizes within m+1 steps.

use thiserror::Error;

use super::{ElemSet, Interpretation, Valuation};
use crate::syntax::{free_variables, polarity_of, Concept, Polarity};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("valuation does not bind the free variable {var}")]
    UnboundVariable { var: String },
    #[error("the operator bound by {var} is not monotone ({var} occurs non-positively)")]
    NonMonotoneOperator { var: String },
    #[error("domain of size {size} exceeds the brute-force cap {cap}")]
    DomainTooLarge { size: usize, cap: usize },
}

/// Which fixpoint of the body operator to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixKind {
    /// `mu` — least fixpoint, iterated up from the empty set.
    Least,
    /// `nu` — greatest fixpoint, iterated down from the full domain.
    Greatest,
}

/// Computes the extension of `c` under `interp` and `rho`.
///
/// `c` must be well-formed; `rho` must bind every free variable of `c`.
/// Atomic concepts and roles the interpretation does not mention have empty
/// extensions.
pub fn evaluate(
    c: &Concept,
    interp: &Interpretation,
    rho: &Valuation,
) -> Result<ElemSet, EvalError> {
    for var in free_variables(c) {
        if rho.get(&var).is_none() {
            return Err(EvalError::UnboundVariable { var });
        }
    }
    let mut env: Vec<(&str, ElemSet)> = rho.iter().collect();
    Ok(eval_env(c, interp, &mut env))
}

fn lookup(env: &[(&str, ElemSet)], var: &str) -> ElemSet {
    env.iter()
        .rev()
        .find(|(name, _)| *name == var)
        .map(|(_, set)| *set)
        .expect("free variables are checked before evaluation")
}

pub(crate) fn eval_env<'c>(
    c: &'c Concept,
    m: &Interpretation,
    env: &mut Vec<(&'c str, ElemSet)>,
) -> ElemSet {
    match c {
        Concept::Atomic(a) => m.concept_ext(a),
        Concept::Var(x) => lookup(env, x),
        Concept::Top => m.full(),
        Concept::Bot => ElemSet::EMPTY,
        Concept::Not(b) => eval_env(b, m, env).complement_in(m.size()),
        Concept::And(a, b) => {
            let l = eval_env(a, m, env);
            if l.is_empty() {
                l
            } else {
                l.inter(eval_env(b, m, env))
            }
        }
        Concept::Or(a, b) => {
            let l = eval_env(a, m, env);
            if l == m.full() {
                l
            } else {
                l.union(eval_env(b, m, env))
            }
        }
        Concept::Exists(r, b) => {
            let t = eval_env(b, m, env);
            let mut out = ElemSet::EMPTY;
            for s in 0..m.size() {
                if !m.role_succ(r, s).inter(t).is_empty() {
                    out.insert(s);
                }
            }
            out
        }
        Concept::Forall(r, b) => {
            let t = eval_env(b, m, env);
            let mut out = ElemSet::EMPTY;
            for s in 0..m.size() {
                if m.role_succ(r, s).is_subset_of(t) {
                    out.insert(s);
                }
            }
            out
        }
        Concept::AtMost(n, r, b) => {
            let t = eval_env(b, m, env);
            let mut out = ElemSet::EMPTY;
            for s in 0..m.size() {
                if m.role_succ(r, s).inter(t).len() <= *n as usize {
                    out.insert(s);
                }
            }
            out
        }
        Concept::AtLeast(n, r, b) => {
            let t = eval_env(b, m, env);
            let mut out = ElemSet::EMPTY;
            for s in 0..m.size() {
                if m.role_succ(r, s).inter(t).len() >= *n as usize {
                    out.insert(s);
                }
            }
            out
        }
        Concept::Mu(x, b) => iterate(FixKind::Least, x, b, m, env, &mut None),
        Concept::Nu(x, b) => iterate(FixKind::Greatest, x, b, m, env, &mut None),
    }
}

/// Kleene iteration; when `trace` is given, records every approximant,
/// starting with the seed and ending with the fixpoint.
fn iterate<'c>(
    kind: FixKind,
    var: &'c str,
    body: &'c Concept,
    m: &Interpretation,
    env: &mut Vec<(&'c str, ElemSet)>,
    trace: &mut Option<&mut Vec<ElemSet>>,
) -> ElemSet {
    let mut current = match kind {
        FixKind::Least => ElemSet::EMPTY,
        FixKind::Greatest => m.full(),
    };
    if let Some(t) = trace.as_deref_mut() {
        t.push(current);
    }
    env.push((var, current));
    let mut rounds = 0usize;
    loop {
        env.last_mut().expect("just pushed").1 = current;
        let next = eval_env(body, m, env);
        if next == current {
            break;
        }
        // A monotone operator moves through at most |domain|+1 values; more
        // means the positivity precondition was violated and the iteration
        // would oscillate forever.
        rounds += 1;
        assert!(
            rounds <= m.size() + 1,
            "fixpoint iteration did not stabilize; the operator bound by {var} is not monotone"
        );
        current = next;
        if let Some(t) = trace.as_deref_mut() {
            t.push(current);
        }
    }
    env.pop();
    current
}

fn require_monotone(body: &Concept, var: &str) -> Result<(), EvalError> {
    match polarity_of(body, var) {
        Polarity::Positive | Polarity::Absent => Ok(()),
        _ => Err(EvalError::NonMonotoneOperator {
            var: var.to_string(),
        }),
    }
}

fn env_for<'c>(
    body: &'c Concept,
    var: &str,
    rho: &'c Valuation,
) -> Result<Vec<(&'c str, ElemSet)>, EvalError> {
    for v in free_variables(body) {
        if v != var && rho.get(&v).is_none() {
            return Err(EvalError::UnboundVariable { var: v });
        }
    }
    Ok(rho.iter().collect())
}

/// Runs the fixpoint iteration for `kind X. body` and returns the result
/// together with the chain of approximants.
pub fn fixpoint_approximants(
    kind: FixKind,
    var: &str,
    body: &Concept,
    interp: &Interpretation,
    rho: &Valuation,
) -> Result<(ElemSet, Vec<ElemSet>), EvalError> {
    require_monotone(body, var)?;
    let mut env = env_for(body, var, rho)?;
    let mut approximants = Vec::new();
    let result = iterate(
        kind,
        var,
        body,
        interp,
        &mut env,
        &mut Some(&mut approximants),
    );
    Ok((result, approximants))
}

/// Brute-force fixpoint straight from the defining formula: the intersection
/// of all pre-fixpoints (`mu`) or the union of all post-fixpoints (`nu`),
/// over all 2^|domain| candidate sets. Exists solely as an independent test
/// oracle for [`fixpoint_approximants`]; refuses domains larger than `cap`.
pub fn tarski_oracle(
    kind: FixKind,
    var: &str,
    body: &Concept,
    interp: &Interpretation,
    rho: &Valuation,
    cap: usize,
) -> Result<ElemSet, EvalError> {
    if interp.size() > cap {
        return Err(EvalError::DomainTooLarge {
            size: interp.size(),
            cap,
        });
    }
    require_monotone(body, var)?;
    let mut env = env_for(body, var, rho)?;
    let n = interp.size();
    let mut acc = match kind {
        FixKind::Least => interp.full(),
        FixKind::Greatest => ElemSet::EMPTY,
    };
    env.push((var, ElemSet::EMPTY));
    for bits in 0..(1u128 << n) {
        let candidate = ElemSet::from_bits(bits as u64);
        env.last_mut().expect("just pushed").1 = candidate;
        let image = eval_env(body, interp, &mut env);
        match kind {
            FixKind::Least => {
                if image.is_subset_of(candidate) {
                    acc = acc.inter(candidate);
                }
            }
            FixKind::Greatest => {
                if candidate.is_subset_of(image) {
                    acc = acc.union(candidate);
                }
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_concept;

    fn eval_str(src: &str, i: &Interpretation) -> ElemSet {
        evaluate(&parse_concept(src).unwrap(), i, &Valuation::empty()).unwrap()
    }

    fn list_chain() -> Interpretation {
        let mut i =
            Interpretation::new(["n1", "n2", "n3", "e"].map(String::from).to_vec()).unwrap();
        i.set_concept_named("emptylist", &["e"]).unwrap();
        i.set_concept_named("node", &["n1", "n2", "n3"]).unwrap();
        i.set_role_named("succ", &[("n1", "n2"), ("n2", "n3"), ("n3", "e")])
            .unwrap();
        i
    }

    #[test]
    fn mu_exists_child_is_empty() {
        let mut i = Interpretation::canonical(3).unwrap();
        i.set_role_named("child", &[("d1", "d2"), ("d2", "d3"), ("d3", "d1")])
            .unwrap();
        assert!(eval_str("mu X. exists child. X", &i).is_empty());
    }

    #[test]
    fn nu_exists_succ_on_self_loop() {
        let mut i = Interpretation::new(vec!["s".into()]).unwrap();
        i.set_role_named("succ", &[("s", "s")]).unwrap();
        assert_eq!(eval_str("nu X. exists succ. X", &i), ElemSet::full(1));
    }

    #[test]
    fn counting_successors() {
        let mut i =
            Interpretation::new(["x", "y", "z", "w"].map(String::from).to_vec()).unwrap();
        i.set_role_named("r", &[("x", "y"), ("x", "z"), ("x", "w")])
            .unwrap();
        i.set_concept_named("a", &["y", "z"]).unwrap();
        let got = eval_str("atleast 2 r. a", &i);
        assert_eq!(i.names_of(got), vec!["x"]);
        assert!(eval_str("atleast 3 r. a", &i).is_empty());
        // atmost is satisfied by elements with no successors at all.
        assert_eq!(eval_str("atmost 0 r. a", &i).len(), 3);
    }

    #[test]
    fn unbound_variable_is_an_error() {
        let i = Interpretation::canonical(1).unwrap();
        let c = parse_concept("free X; X and a").unwrap();
        assert!(matches!(
            evaluate(&c, &i, &Valuation::empty()),
            Err(EvalError::UnboundVariable { .. })
        ));
        let rho = Valuation::empty().bind("X", ElemSet::full(1));
        assert_eq!(evaluate(&c, &i, &rho).unwrap(), i.concept_ext("a"));
    }

    #[test]
    fn approximant_traces() {
        let i = Interpretation::canonical(3).unwrap();
        let var_body = Concept::var("X");

        let (r, trace) = fixpoint_approximants(
            FixKind::Least,
            "X",
            &var_body,
            &i,
            &Valuation::empty(),
        )
        .unwrap();
        assert!(r.is_empty());
        assert_eq!(trace, vec![ElemSet::EMPTY]);

        let (r, trace) = fixpoint_approximants(
            FixKind::Greatest,
            "X",
            &var_body,
            &i,
            &Valuation::empty(),
        )
        .unwrap();
        assert_eq!(r, i.full());
        assert_eq!(trace, vec![i.full()]);
    }

    #[test]
    fn list_trace_grows_one_element_per_round() {
        let i = list_chain();
        let c = parse_concept(
            "mu X. emptylist or (node and atmost 1 succ. top and exists succ. X)",
        )
        .unwrap();
        let (var, body) = match &c {
            Concept::Mu(v, b) => (v.clone(), (**b).clone()),
            _ => unreachable!(),
        };
        let (result, trace) =
            fixpoint_approximants(FixKind::Least, &var, &body, &i, &Valuation::empty())
                .unwrap();
        assert_eq!(result, i.full());
        let sizes: Vec<usize> = trace.iter().map(|e| e.len()).collect();
        assert_eq!(sizes, vec![0, 1, 2, 3, 4]);
        assert!(trace.len() <= i.size() + 1);
        // e enters first, then n3, n2, n1.
        assert_eq!(i.names_of(trace[1]), vec!["e"]);
        assert_eq!(i.names_of(trace[2]), vec!["n3", "e"]);
    }

    #[test]
    fn evaluate_rejects_non_monotone_approximants() {
        let i = Interpretation::canonical(2).unwrap();
        let body = Concept::not(Concept::var("X"));
        assert!(matches!(
            fixpoint_approximants(FixKind::Least, "X", &body, &i, &Valuation::empty()),
            Err(EvalError::NonMonotoneOperator { .. })
        ));
    }

    #[test]
    fn tarski_oracle_identity_and_cycle() {
        let i = Interpretation::canonical(2).unwrap();
        let var_body = Concept::var("X");
        let rho = Valuation::empty();
        assert_eq!(
            tarski_oracle(FixKind::Least, "X", &var_body, &i, &rho, 4).unwrap(),
            ElemSet::EMPTY
        );
        assert_eq!(
            tarski_oracle(FixKind::Greatest, "X", &var_body, &i, &rho, 4).unwrap(),
            i.full()
        );

        let mut cyc = Interpretation::new(vec!["a".into(), "b".into()]).unwrap();
        cyc.set_role_named("r", &[("a", "b"), ("b", "a")]).unwrap();
        let body = Concept::exists("r", Concept::var("X"));
        assert_eq!(
            tarski_oracle(FixKind::Least, "X", &body, &cyc, &rho, 4).unwrap(),
            ElemSet::EMPTY
        );
        assert_eq!(
            tarski_oracle(FixKind::Greatest, "X", &body, &cyc, &rho, 4).unwrap(),
            cyc.full()
        );

        let big = Interpretation::canonical(5).unwrap();
        assert!(matches!(
            tarski_oracle(FixKind::Least, "X", &var_body, &big, &rho, 4),
            Err(EvalError::DomainTooLarge { .. })
        ));
    }

    #[test]
    fn dualized_identity_mu_is_bottom() {
        let c = Concept::mu("X", Concept::var("X"));
        let dual = crate::syntax::dual_fixpoint(&c).unwrap();
        for size in 1..=3 {
            let i = Interpretation::canonical(size).unwrap();
            assert!(evaluate(&c, &i, &Valuation::empty()).unwrap().is_empty());
            assert!(evaluate(&dual, &i, &Valuation::empty()).unwrap().is_empty());
        }
    }

    #[test]
    fn atleast_qualifier_is_a_monotone_position() {
        // atleast 2 r. X induces a monotone operator; exhaust a 3-element
        // interpretation and all subset pairs.
        let mut i = Interpretation::canonical(3).unwrap();
        i.set_role_named(
            "r",
            &[("d1", "d1"), ("d1", "d2"), ("d1", "d3"), ("d2", "d3"), ("d3", "d2")],
        )
        .unwrap();
        let body = Concept::at_least(2, "r", Concept::var("X"));
        let f = |e: ElemSet| {
            evaluate(&body, &i, &Valuation::empty().bind("X", e)).unwrap()
        };
        for small in 0..8u64 {
            for large in 0..8u64 {
                let (small, large) = (ElemSet::from_bits(small), ElemSet::from_bits(large));
                if small.is_subset_of(large) {
                    assert!(f(small).is_subset_of(f(large)));
                }
            }
        }
    }

    #[test]
    fn derived_construct_equalities_exhaustive() {
        // top = a or not a, bot = not top, forall r. C = not exists r. not C,
        // atmost n r. C = not atleast n+1 r. C — on every interpretation over
        // {a; r} of size <= 3.
        let sig = crate::models::Signature::new(vec!["a".into()], vec!["r".into()]).unwrap();
        let rho = Valuation::empty();
        let a = || Concept::atomic("a");
        for size in 1..=3 {
            for interp in crate::models::enumerate_interpretations(&sig, size).unwrap() {
                let ev = |c: &Concept| evaluate(c, &interp, &rho).unwrap();
                assert_eq!(
                    ev(&Concept::Top),
                    ev(&Concept::or(a(), Concept::not(a())))
                );
                assert_eq!(ev(&Concept::Bot), ev(&Concept::not(Concept::Top)));
                assert_eq!(
                    ev(&Concept::forall("r", a())),
                    ev(&Concept::not(Concept::exists("r", Concept::not(a()))))
                );
                for n in 0..=2 {
                    assert_eq!(
                        ev(&Concept::at_most(n, "r", a())),
                        ev(&Concept::not(Concept::at_least(n + 1, "r", a())))
                    );
                }
            }
        }
    }

    #[test]
    fn foo_hp_membership() {
        // Satisfying tree: the visible chain r -> c1 is interrupted at the
        // latent c2, whose children are all visible and childless.
        let mut good =
            Interpretation::new(["r", "c1", "c2", "c3", "c4"].map(String::from).to_vec())
                .unwrap();
        good.set_concept_named("visible", &["r", "c1", "c3", "c4"])
            .unwrap();
        good.set_concept_named("latent", &["c2"]).unwrap();
        good.set_role_named(
            "child",
            &[("r", "c1"), ("c1", "c2"), ("c2", "c3"), ("c2", "c4")],
        )
        .unwrap();

        let foo_hp = parse_concept(
            "nu X. mu Y. (visible and (exists child. Y or forall child. bot)) \
             or (latent and forall child. (visible and X))",
        )
        .unwrap();

        let ext = evaluate(&foo_hp, &good, &Valuation::empty()).unwrap();
        assert_eq!(ext, good.full());

        // Violating tree: the latent c1 has a latent child.
        let mut bad =
            Interpretation::new(["r", "c1", "c2", "c3", "c4"].map(String::from).to_vec())
                .unwrap();
        bad.set_concept_named("visible", &["r", "c3", "c4"]).unwrap();
        bad.set_concept_named("latent", &["c1", "c2"]).unwrap();
        bad.set_role_named(
            "child",
            &[("r", "c1"), ("c1", "c2"), ("c2", "c3"), ("c2", "c4")],
        )
        .unwrap();
        let ext = evaluate(&foo_hp, &bad, &Valuation::empty()).unwrap();
        assert_eq!(bad.names_of(ext), vec!["c2", "c3", "c4"]);
    }
}
