//! Randomized property harnesses.
//!
//! The theorem suite exercises the two monotonicity laws of fixpoint
//! subsumption: whenever the premise `K |= C <= D` holds on every enumerated
//! model up to the bound (under every valuation of the free variable), the
//! conclusion must hold on that same model set — per-model, the laws need the
//! premise only on the model at hand, so a bounded check cannot produce
//! spurious violations. The law suite replays the algebraic identities of the
//! extension function on random (concept, interpretation, valuation) triples.
//! Any violation in either suite is a bug, not flaky input.

use std::fmt;

use rand::Rng;

use crate::generate::{
    gen_closed, gen_interpretation, gen_positive_in, gen_tbox, gen_valuation, gen_with_hole,
    rng_from_seed, GenCfg,
};
use crate::models::enumerate::scan_interpretations;
use crate::models::{
    evaluate, fixpoint_approximants, satisfies_tbox, tarski_oracle, ElemSet, FixKind,
    Signature, Valuation,
};
use crate::syntax::{
    dual_fixpoint, free_variables, polarity_of, print_concept, substitute, Concept, Polarity,
    TBox,
};

/// Configuration shared by the randomized suites.
#[derive(Clone, Debug)]
pub struct SuiteCfg {
    pub seed: u64,
    /// Exhaustive-enumeration bound for premise and conclusion checks.
    pub max_domain: usize,
    /// Depth of generated concepts.
    pub max_depth: usize,
    /// Domain cap for the brute-force fixpoint oracle.
    pub brute_force_cap: usize,
    pub atomics: Vec<String>,
    pub roles: Vec<String>,
    pub max_n: u32,
}

impl Default for SuiteCfg {
    fn default() -> Self {
        SuiteCfg {
            seed: 0xA1C9,
            max_domain: 2,
            max_depth: 3,
            brute_force_cap: 4,
            atomics: vec!["a".into(), "b".into()],
            roles: vec!["r".into()],
            max_n: 2,
        }
    }
}

impl SuiteCfg {
    fn gen_cfg(&self, depth: usize) -> GenCfg {
        GenCfg {
            max_depth: depth,
            atomics: self.atomics.clone(),
            roles: self.roles.clone(),
            allow_counts: true,
            max_n: self.max_n,
        }
    }

    fn signature(&self) -> Signature {
        Signature::new(self.atomics.clone(), self.roles.clone())
            .expect("suite vocabulary is disjoint")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TheoremStats {
    pub instances: usize,
    pub premise_held: usize,
    pub conclusions_checked: usize,
    /// Instances whose context polarity fits neither case of the law.
    pub skipped: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub theorem2: TheoremStats,
    pub theorem3: TheoremStats,
    pub violations: Vec<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "fixpoint-monotonicity: instances {}, premise-held {}, conclusions-checked {}, skipped {}",
            self.theorem2.instances,
            self.theorem2.premise_held,
            self.theorem2.conclusions_checked,
            self.theorem2.skipped
        )?;
        writeln!(
            f,
            "context-monotonicity: instances {}, premise-held {}, conclusions-checked {}, skipped {}",
            self.theorem3.instances,
            self.theorem3.premise_held,
            self.theorem3.conclusions_checked,
            self.theorem3.skipped
        )?;
        for v in &self.violations {
            writeln!(f, "violation: {v}")?;
        }
        write!(f, "violations: {}", self.violations.len())
    }
}

/// All assignments of subsets to `vars` over a domain of `size` elements.
fn valuations_over(vars: &[String], size: usize) -> Vec<Valuation> {
    let mut out = vec![Valuation::empty()];
    for var in vars {
        let mut next = Vec::new();
        for rho in &out {
            for bits in 0..(1u64 << size) {
                let mut extended = rho.clone();
                extended.set(var.clone(), ElemSet::from_bits(bits));
                next.push(extended);
            }
        }
        out = next;
    }
    out
}

/// Whether `lhs <= rhs` holds on every model of `k` of size 1..=`max_domain`,
/// under every valuation of the concepts' free variables.
fn holds_on_bounded_models(
    k: &TBox,
    lhs: &Concept,
    rhs: &Concept,
    sig: &Signature,
    max_domain: usize,
) -> bool {
    let mut vars: Vec<String> = free_variables(lhs).into_iter().collect();
    for v in free_variables(rhs) {
        if !vars.contains(&v) {
            vars.push(v);
        }
    }
    for size in 1..=max_domain {
        let rhos = valuations_over(&vars, size);
        let violated = scan_interpretations(sig, size, |interp| {
            if satisfies_tbox(interp, k).is_err() {
                return false;
            }
            rhos.iter().any(|rho| {
                let l = evaluate(lhs, interp, rho).expect("vars covered");
                let r = evaluate(rhs, interp, rho).expect("vars covered");
                !l.is_subset_of(r)
            })
        })
        .expect("suite sizes are valid");
        if violated {
            return false;
        }
    }
    true
}

/// Runs `samples` random instances of each monotonicity law.
pub fn theorem_suite(samples: usize, cfg: &SuiteCfg) -> SuiteReport {
    let mut rng = rng_from_seed(cfg.seed);
    let sig = cfg.signature();
    let gen = cfg.gen_cfg(cfg.max_depth);
    let small = cfg.gen_cfg(cfg.max_depth.min(2));
    let mut report = SuiteReport::default();

    // Fixpoint monotonicity: K |= C <= D gives K |= sigma X. C <= sigma X. D
    // for C, D positive in X.
    for _ in 0..samples {
        report.theorem2.instances += 1;
        let c = gen_positive_in(&mut rng, &gen, "X");
        let d = if rng.gen_bool(0.5) {
            // Premise true by construction.
            Concept::or(c.clone(), gen_positive_in(&mut rng, &gen, "X"))
        } else {
            gen_positive_in(&mut rng, &gen, "X")
        };
        let k = gen_tbox(&mut rng, &small, 1);
        if !holds_on_bounded_models(&k, &c, &d, &sig, cfg.max_domain) {
            continue;
        }
        report.theorem2.premise_held += 1;
        for make in [Concept::mu, Concept::nu] {
            let lhs = make("X".to_string(), c.clone());
            let rhs = make("X".to_string(), d.clone());
            report.theorem2.conclusions_checked += 1;
            if !holds_on_bounded_models(&k, &lhs, &rhs, &sig, cfg.max_domain) {
                report.violations.push(format!(
                    "fixpoint monotonicity failed: K = {{{}}}, C = {}, D = {}, conclusion {} <= {}",
                    k.to_string().trim_end(),
                    print_concept(&c),
                    print_concept(&d),
                    print_concept(&lhs),
                    print_concept(&rhs),
                ));
            }
        }
    }

    // Context monotonicity: K |= C1 <= C2 propagates through a context D(X)
    // covariantly or contravariantly with the polarity of X.
    for _ in 0..samples {
        report.theorem3.instances += 1;
        let context = gen_with_hole(&mut rng, &gen, "X");
        let c1 = gen_closed(&mut rng, &small);
        let (c2, k) = if rng.gen_bool(0.5) {
            (Concept::or(c1.clone(), gen_closed(&mut rng, &small)), gen_tbox(&mut rng, &small, 1))
        } else {
            // Put the premise itself into K.
            let c2 = gen_closed(&mut rng, &small);
            let k = TBox::new(vec![(c1.clone(), c2.clone())])
                .expect("generated concepts are closed");
            (c2, k)
        };
        if !holds_on_bounded_models(&k, &c1, &c2, &sig, cfg.max_domain) {
            continue;
        }
        report.theorem3.premise_held += 1;
        let (lhs, rhs) = match polarity_of(&context, "X") {
            Polarity::Positive | Polarity::Absent => (
                substitute(&context, "X", &c1),
                substitute(&context, "X", &c2),
            ),
            Polarity::Negative => (
                substitute(&context, "X", &c2),
                substitute(&context, "X", &c1),
            ),
            Polarity::Both => {
                report.theorem3.skipped += 1;
                continue;
            }
        };
        report.theorem3.conclusions_checked += 1;
        if !holds_on_bounded_models(&k, &lhs, &rhs, &sig, cfg.max_domain) {
            report.violations.push(format!(
                "context monotonicity failed: K = {{{}}}, context = {}, C1 = {}, C2 = {}",
                k.to_string().trim_end(),
                print_concept(&context),
                print_concept(&c1),
                print_concept(&c2),
            ));
        }
    }

    report
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LawReport {
    pub samples: usize,
    pub checks: usize,
    pub violations: Vec<String>,
}

impl LawReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "algebraic-laws: samples {}, checks {}", self.samples, self.checks)?;
        for v in &self.violations {
            writeln!(f, "violation: {v}")?;
        }
        write!(f, "violations: {}", self.violations.len())
    }
}

/// Replays the algebraic identities of the extension function on `samples`
/// random (concept, interpretation, valuation) triples: fixpoint unfolding,
/// fixpoint duality, least-within-greatest, vacuous binders, renaming of
/// bound variables, the classical derived-construct equalities, the
/// substitution lemma, closed-concept valuation independence, and agreement
/// of the iterative fixpoint with the brute-force oracle.
pub fn law_suite(samples: usize, cfg: &SuiteCfg) -> LawReport {
    // Distinct stream from the theorem suite under the same configured seed.
    let mut rng = rng_from_seed(cfg.seed ^ 0x5eed_1a35);
    let sig = cfg.signature();
    let gen = cfg.gen_cfg(cfg.max_depth);
    let small = cfg.gen_cfg(cfg.max_depth.min(2));
    let mut report = LawReport::default();

    let check = |report: &mut LawReport, ok: bool, what: &str, detail: String| {
        report.checks += 1;
        if !ok {
            report.violations.push(format!("{what}: {detail}"));
        }
    };

    for _ in 0..samples {
        report.samples += 1;
        let size = rng.gen_range(1..=4);
        let interp = gen_interpretation(&mut rng, &sig, size);
        let rho = Valuation::empty();
        let ev = |c: &Concept| evaluate(c, &interp, &rho).expect("closed");

        // Fixpoint laws on sigma X. B with B positive in X.
        let body = gen_positive_in(&mut rng, &gen, "X");
        for (make, kind) in [
            (Concept::mu as fn(String, Concept) -> Concept, FixKind::Least),
            (Concept::nu as fn(String, Concept) -> Concept, FixKind::Greatest),
        ] {
            let fix = make("X".to_string(), body.clone());
            let unfolded = substitute(&body, "X", &fix);
            check(
                &mut report,
                ev(&fix) == ev(&unfolded),
                "fixpoint unfolding",
                print_concept(&fix),
            );
            let dual = dual_fixpoint(&fix).expect("fix is a binder");
            check(
                &mut report,
                ev(&fix) == ev(&dual),
                "fixpoint duality",
                print_concept(&fix),
            );
            // Iterative fixpoint against the brute-force oracle.
            if size <= cfg.brute_force_cap {
                let (iterated, trace) =
                    fixpoint_approximants(kind, "X", &body, &interp, &rho).expect("positive");
                let oracle = tarski_oracle(kind, "X", &body, &interp, &rho, cfg.brute_force_cap)
                    .expect("within cap");
                check(
                    &mut report,
                    iterated == oracle,
                    "oracle agreement",
                    print_concept(&fix),
                );
                check(
                    &mut report,
                    trace.len() <= size + 1,
                    "trace length",
                    print_concept(&fix),
                );
            }
        }
        let mu = Concept::mu("X", body.clone());
        let nu = Concept::nu("X", body.clone());
        check(
            &mut report,
            ev(&mu).is_subset_of(ev(&nu)),
            "mu within nu",
            print_concept(&mu),
        );
        // Renaming the bound variable changes nothing.
        let renamed = Concept::mu("Y", substitute(&body, "X", &Concept::var("Y")));
        check(
            &mut report,
            ev(&mu) == ev(&renamed),
            "bound renaming",
            print_concept(&mu),
        );

        // Vacuous binders.
        let closed = gen_closed(&mut rng, &small);
        for make in [Concept::mu, Concept::nu] {
            let wrapped = make("X".to_string(), closed.clone());
            check(
                &mut report,
                ev(&wrapped) == ev(&closed),
                "vacuous binder",
                print_concept(&wrapped),
            );
        }

        // Derived-construct equalities.
        let a = Concept::Atomic(cfg.atomics[rng.gen_range(0..cfg.atomics.len())].clone());
        let qualifier = gen_closed(&mut rng, &small);
        let role = cfg.roles[rng.gen_range(0..cfg.roles.len())].clone();
        let n = rng.gen_range(0..=cfg.max_n);
        check(
            &mut report,
            ev(&Concept::Top) == ev(&Concept::or(a.clone(), Concept::not(a.clone()))),
            "top is a or not a",
            print_concept(&a),
        );
        check(
            &mut report,
            ev(&Concept::Bot) == ev(&Concept::not(Concept::Top)),
            "bot is not top",
            String::new(),
        );
        let forall = Concept::forall(role.clone(), qualifier.clone());
        let via_exists = Concept::not(Concept::exists(
            role.clone(),
            Concept::not(qualifier.clone()),
        ));
        check(
            &mut report,
            ev(&forall) == ev(&via_exists),
            "forall as negated exists",
            print_concept(&forall),
        );
        let at_most = Concept::at_most(n, role.clone(), qualifier.clone());
        let via_at_least = Concept::not(Concept::at_least(n + 1, role.clone(), qualifier.clone()));
        check(
            &mut report,
            ev(&at_most) == ev(&via_at_least),
            "atmost as negated atleast",
            print_concept(&at_most),
        );

        // Substitution lemma: evaluating C[X/D] equals evaluating C with X
        // bound to D's extension.
        let context = gen_with_hole(&mut rng, &gen, "X");
        let filler = gen_closed(&mut rng, &small);
        let direct = ev(&substitute(&context, "X", &filler));
        let rho_x = Valuation::empty().bind("X", ev(&filler));
        let via_valuation = evaluate(&context, &interp, &rho_x).expect("X covered");
        check(
            &mut report,
            direct == via_valuation,
            "substitution lemma",
            print_concept(&context),
        );

        // Closed concepts ignore the valuation.
        let rho1 = gen_valuation(&mut rng, &interp, &["X", "Y"]);
        let rho2 = gen_valuation(&mut rng, &interp, &["X", "Y"]);
        let c = gen_closed(&mut rng, &small);
        check(
            &mut report,
            evaluate(&c, &interp, &rho1).expect("closed")
                == evaluate(&c, &interp, &rho2).expect("closed"),
            "valuation independence",
            print_concept(&c),
        );
    }

    report
}
