//! Acceptance suite: the worked logical claims and the quantitative property
//! suites, one test per criterion, each printing a pass line (visible with
//! `--nocapture`).
//!
//! Bounded-search criteria that exhaust all models of size <= 3 are the
//! expensive ones; they rely on the optimized test profile and first-failure
//! pruning and finish well inside their budget.

use std::fs;
use std::path::PathBuf;

use mualcq::generate::{
    gen_closed, gen_interpretation, gen_tree_interpretation, gen_valuation, gen_with_hole,
    rng_from_seed, GenCfg,
};
use mualcq::models::{
    enumerate_interpretations, evaluate, fixpoint_approximants, generated_sub, satisfies_tbox,
    tarski_oracle, FixKind, Signature, Valuation,
};
use mualcq::mucalc::{
    alpha_eq_mu, chain_tree_model, chained_role_map, check_deterministic, collapse_chained,
    eval_mu, kripke_of_interpretation, translate_q, translate_u, MuFormula,
};
use mualcq::reasoning::{
    implies_bounded, law_suite, sat_bounded, theorem_suite, ImplicationVerdict, SatVerdict,
    Strategy, SuiteCfg,
};
use mualcq::syntax::{parse_concept, parse_tbox, Concept};
use rand::Rng;

fn corpus(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus", name]
        .iter()
        .collect();
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

fn pass(line: &str) {
    println!("[PASS] {line}");
}

#[test]
fn unfounded_recursion_has_no_finite_witness() {
    let c = parse_concept("mu X. exists child. X").unwrap();
    let sig = Signature::of_concept(&c);
    for bound in 1..=4 {
        assert_eq!(
            sat_bounded(&c, bound, &sig).unwrap(),
            SatVerdict::UnknownUpTo { bound }
        );
    }
    // Exhaustively: the extension is empty in every interpretation of size
    // <= 2 over the role child.
    let rho = Valuation::empty();
    let mut scanned = 0usize;
    for size in 1..=2 {
        for interp in enumerate_interpretations(&sig, size).unwrap() {
            assert!(evaluate(&c, &interp, &rho).unwrap().is_empty());
            scanned += 1;
        }
    }
    assert_eq!(scanned, 2 + 16);
    pass("mu X. exists child. X: unknown at every bound, empty on all 18 interpretations of size <= 2");
}

#[test]
fn self_loop_witnesses_the_greatest_fixpoint() {
    let c = parse_concept("nu X. exists succ. X").unwrap();
    let sig = Signature::of_concept(&c);
    match sat_bounded(&c, 1, &sig).unwrap() {
        SatVerdict::Satisfiable { witness, element } => {
            assert_eq!(witness.size(), 1);
            assert_eq!(witness.role_pairs("succ"), vec![(0, 0)]);
            let idx = witness.index_of(&element).unwrap();
            assert!(evaluate(&c, &witness, &Valuation::empty())
                .unwrap()
                .contains(idx));
        }
        other => panic!("expected a witness, got {other:?}"),
    }
    pass("nu X. exists succ. X: satisfiable with the size-1 self loop");
}

#[test]
fn mgm_subsumptions_hold_and_descriptive_reading_refutes() {
    let k = parse_tbox(&corpus("mgm.tbx")).unwrap();
    let human = Concept::atomic("human");
    let horse = Concept::atomic("horse");
    let mgm = Concept::atomic("mgm");

    for lhs in [&human, &horse] {
        assert_eq!(
            implies_bounded(&k, lhs, &mgm, 3, Strategy::Both).unwrap(),
            ImplicationVerdict::HoldsUpTo { bound: 3 },
        );
    }

    // The two descriptive equivalences alone do not make humans horses.
    let k0 = parse_tbox(&corpus("human_horse.tbx")).unwrap();
    match implies_bounded(&k0, &human, &horse, 3, Strategy::Direct).unwrap() {
        ImplicationVerdict::Refuted {
            counter_model,
            element,
        } => {
            assert!(satisfies_tbox(&counter_model, &k0).is_ok());
            let idx = counter_model.index_of(&element).unwrap();
            let rho = Valuation::empty();
            assert!(evaluate(&human, &counter_model, &rho).unwrap().contains(idx));
            assert!(!evaluate(&horse, &counter_model, &rho).unwrap().contains(idx));
        }
        other => panic!("expected a refutation, got {other:?}"),
    }
    pass("mgm: human and horse subsumed up to size 3 under both strategies; human <= horse refuted with a verified counter-model");
}

#[test]
fn dag_subsumption_needs_the_student_person_link() {
    let with_link = parse_tbox(&corpus("dag.tbx")).unwrap();
    let lhs = Concept::atomic("dag_of_student");
    let rhs = Concept::atomic("dag_of_person");
    assert_eq!(
        implies_bounded(&with_link, &lhs, &rhs, 3, Strategy::Direct).unwrap(),
        ImplicationVerdict::HoldsUpTo { bound: 3 },
    );

    let without_link = parse_tbox(&corpus("dag_nosub.tbx")).unwrap();
    match implies_bounded(&without_link, &lhs, &rhs, 3, Strategy::Direct).unwrap() {
        ImplicationVerdict::Refuted {
            counter_model,
            element,
        } => {
            assert!(satisfies_tbox(&counter_model, &without_link).is_ok());
            let idx = counter_model.index_of(&element).unwrap();
            let rho = Valuation::empty();
            assert!(evaluate(&lhs, &counter_model, &rho).unwrap().contains(idx));
            assert!(!evaluate(&rhs, &counter_model, &rho).unwrap().contains(idx));
        }
        other => panic!("expected a refutation, got {other:?}"),
    }
    pass("dag: student DAGs are person DAGs up to size 3 exactly when student <= person is asserted");
}

#[test]
fn algebraic_laws_hold_on_a_thousand_triples() {
    let cfg = SuiteCfg {
        max_depth: 4,
        ..SuiteCfg::default()
    };
    let report = law_suite(1000, &cfg);
    assert!(report.ok(), "{report}");
    assert_eq!(report.samples, 1000);
    pass(&format!(
        "algebraic laws: {} checks over 1000 random triples, zero violations",
        report.checks
    ));
}

#[test]
fn iteration_agrees_with_the_brute_force_oracle() {
    let mut rng = rng_from_seed(0x7A25);
    let cfg = GenCfg::default().with_depth(4);
    let sig = Signature::new(vec!["a".into(), "b".into()], vec!["r".into()]).unwrap();
    for i in 0..500 {
        let body = mualcq::generate::gen_positive_in(&mut rng, &cfg, "X");
        let size = rng.gen_range(1..=4);
        let interp = gen_interpretation(&mut rng, &sig, size);
        let rho = Valuation::empty();
        for kind in [FixKind::Least, FixKind::Greatest] {
            let (result, trace) =
                fixpoint_approximants(kind, "X", &body, &interp, &rho).unwrap();
            let oracle = tarski_oracle(kind, "X", &body, &interp, &rho, 4).unwrap();
            assert_eq!(result, oracle, "instance {i}: {body}");
            assert!(trace.len() <= size + 1, "instance {i}: trace too long");
            for pair in trace.windows(2) {
                match kind {
                    FixKind::Least => assert!(pair[0].is_subset_of(pair[1]), "instance {i}"),
                    FixKind::Greatest => assert!(pair[1].is_subset_of(pair[0]), "instance {i}"),
                }
            }
            assert_eq!(*trace.last().unwrap(), result, "instance {i}");
        }
    }
    pass("fixpoint iteration matches the pre/post-fixpoint oracle on 500 instances; traces are monotone chains of length <= |domain|+1");
}

#[test]
fn generated_subinterpretations_preserve_membership() {
    let mut rng = rng_from_seed(0x1E44);
    let cfg = GenCfg::default().with_depth(3);
    let sig = Signature::new(vec!["a".into(), "b".into()], vec!["r".into(), "s".into()]).unwrap();
    for i in 0..300 {
        let c = if rng.gen_bool(0.5) {
            gen_with_hole(&mut rng, &cfg, "X")
        } else {
            gen_closed(&mut rng, &cfg)
        };
        let size = rng.gen_range(1..=4);
        let interp = gen_interpretation(&mut rng, &sig, size);
        let rho = gen_valuation(&mut rng, &interp, &["X"]);
        let start = interp.name_of(rng.gen_range(0..size)).to_string();

        let (sub, sub_rho) = generated_sub(&interp, &rho, &start).unwrap();
        let full_ext = evaluate(&c, &interp, &rho).unwrap();
        let sub_ext = evaluate(&c, &sub, &sub_rho).unwrap();
        for (sub_idx, name) in sub.domain().iter().enumerate() {
            let orig_idx = interp.index_of(name).unwrap();
            assert_eq!(
                full_ext.contains(orig_idx),
                sub_ext.contains(sub_idx),
                "instance {i}: membership of {name} changed for {c}"
            );
        }
    }
    pass("generated sub-interpretations: membership agrees at every surviving element, 300 instances");
}

#[test]
fn mu_calculus_translation_coincides_pointwise() {
    let mut rng = rng_from_seed(0x6CAF);
    let cfg = GenCfg::default().with_depth(4).mu_alc();
    let sig = Signature::new(vec!["a".into(), "b".into()], vec!["r".into(), "s".into()]).unwrap();
    for i in 0..500 {
        let c = if rng.gen_bool(0.4) {
            gen_with_hole(&mut rng, &cfg, "X")
        } else {
            gen_closed(&mut rng, &cfg)
        };
        let phi = translate_q(&c).unwrap();
        assert_eq!(phi.size(), c.size(), "instance {i}: q must preserve size");

        let size = rng.gen_range(1..=4);
        let interp = gen_interpretation(&mut rng, &sig, size);
        let m = kripke_of_interpretation(&interp);
        let rho = gen_valuation(&mut rng, &interp, &["X"]);
        assert_eq!(
            evaluate(&c, &interp, &rho).unwrap(),
            eval_mu(&phi, &m, &rho).unwrap(),
            "instance {i}: extensions diverge for {c}"
        );
    }
    pass("plain translation: concept and formula extensions coincide on 500 instances; node counts preserved");
}

#[test]
fn deterministic_translation_preserves_tree_evaluation() {
    let mut rng = rng_from_seed(0x79EE);
    let sig = Signature::new(vec!["p".into(), "q".into()], vec!["r".into(), "s".into()]).unwrap();
    let cfg = GenCfg {
        max_depth: 3,
        atomics: vec!["p".into(), "q".into()],
        roles: vec!["r".into(), "s".into()],
        allow_counts: true,
        max_n: 3,
    };
    for i in 0..300 {
        let tree = gen_tree_interpretation(&mut rng, &sig, 3, 3);
        let c = gen_closed(&mut rng, &cfg);
        let tr = translate_u(&c);

        // The formula mentions only source roles and their fresh chains.
        let mut allowed: std::collections::BTreeSet<String> = c.roles();
        allowed.extend(tr.fresh_roles.values().cloned());
        assert!(tr.formula.labels().is_subset(&allowed), "instance {i}");

        let (chained, state_map) = chain_tree_model(&tree, "d1").unwrap();
        check_deterministic(&chained)
            .unwrap_or_else(|v| panic!("instance {i}: nondeterministic output {v:?}"));

        let rho = Valuation::empty();
        let concept_ext = evaluate(&c, &tree, &rho).unwrap();
        let formula_ext = eval_mu(&tr.formula, &chained, &rho).unwrap();
        for (elem, state) in &state_map {
            let e = tree.index_of(elem).unwrap();
            let s = chained.index_of(state).unwrap();
            assert_eq!(
                concept_ext.contains(e),
                formula_ext.contains(s),
                "instance {i}: {elem} classified differently for {c}"
            );
        }

        // Collapsing the chained structure recovers the original tree; the
        // collapse needs the chain roles of every role of the tree, not just
        // those the concept mentions.
        let collapsed = collapse_chained(&chained, &chained_role_map(&tree)).unwrap();
        let restricted_roles: std::collections::BTreeSet<&str> =
            collapsed.role_names().collect();
        for role in restricted_roles {
            let mut original = tree.role_pairs(role);
            original.retain(|(a, b)| {
                state_map.contains_key(tree.name_of(*a)) && state_map.contains_key(tree.name_of(*b))
            });
            assert_eq!(collapsed.role_pairs(role), original, "instance {i}");
        }
    }

    // The displayed three-level shapes, node for node (up to bound-variable
    // names): counting along the chain with box/plus for atmost, diamond/plus
    // for atleast.
    fn dstar(label: &str, f: MuFormula) -> MuFormula {
        MuFormula::mu(
            "V",
            MuFormula::or(f, MuFormula::diamond(label, MuFormula::var("V"))),
        )
    }
    fn bstar(label: &str, f: MuFormula) -> MuFormula {
        MuFormula::nu(
            "V",
            MuFormula::and(f, MuFormula::boxed(label, MuFormula::var("V"))),
        )
    }
    let np = || MuFormula::not(MuFormula::atom("p"));
    let at_most = translate_u(&parse_concept("atmost 3 r. p").unwrap());
    let mut nest = np();
    for _ in 0..3 {
        nest = MuFormula::or(np(), MuFormula::boxed("r_new", bstar("r_new", nest)));
    }
    assert!(alpha_eq_mu(
        &at_most.formula,
        &MuFormula::boxed("r", bstar("r_new", nest))
    ));

    let p = || MuFormula::atom("p");
    let at_least = translate_u(&parse_concept("atleast 3 r. p").unwrap());
    let mut nest = p();
    for _ in 0..2 {
        nest = MuFormula::and(p(), MuFormula::diamond("r_new", dstar("r_new", nest)));
    }
    assert!(alpha_eq_mu(
        &at_least.formula,
        &MuFormula::diamond("r", dstar("r_new", nest))
    ));

    pass("deterministic translation: chained-tree evaluation biconditional on 300 instances, deterministic outputs, collapse inverts, displayed count shapes match");
}

#[test]
fn monotonicity_theorem_harness_is_clean() {
    let report = theorem_suite(200, &SuiteCfg::default());
    assert!(report.ok(), "{report}");
    assert_eq!(report.theorem2.instances, 200);
    assert_eq!(report.theorem3.instances, 200);
    pass(&format!(
        "monotonicity harness: 200 instances per law, {} + {} conclusions checked, zero counterexamples",
        report.theorem2.conclusions_checked, report.theorem3.conclusions_checked
    ));
}

#[test]
fn hereditary_pattern_classifies_the_shipped_trees() {
    let concept = parse_concept(&corpus("foo_hp.con")).unwrap();
    let rho = Valuation::empty();

    let good = mualcq::models::io::parse_model(&corpus("foo_hp_sat.mdl")).unwrap();
    let ext = evaluate(&concept, &good, &rho).unwrap();
    // Hand-derived: every member of the family follows the pattern.
    assert_eq!(good.names_of(ext), vec!["r", "c1", "c2", "c3", "c4"]);
    assert!(ext.contains(good.index_of("r").unwrap()));

    let bad = mualcq::models::io::parse_model(&corpus("foo_hp_unsat.mdl")).unwrap();
    let ext = evaluate(&concept, &bad, &rho).unwrap();
    // Hand-derived: only the subtree below the offending carrier conforms.
    assert_eq!(bad.names_of(ext), vec!["c2", "c3", "c4"]);
    assert!(!ext.contains(bad.index_of("r").unwrap()));

    // Both trees keep the two disease forms disjoint.
    let disjoint = parse_tbox("latent <= not visible").unwrap();
    assert!(satisfies_tbox(&good, &disjoint).is_ok());
    assert!(satisfies_tbox(&bad, &disjoint).is_ok());

    pass("hereditary pattern: shipped satisfying/violating trees classified exactly as hand-derived");
}
