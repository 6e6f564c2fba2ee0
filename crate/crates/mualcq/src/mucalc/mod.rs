//! The modal mu-calculus target language: formulae, Kripke structures, an
//! explicit-state evaluator, and the translations from concepts.
//!
//! The evaluator is deliberately a second, independent structural recursion
//! rather than a round trip through the concept evaluator; the translation
//! theorems are tested by running both sides.

pub mod chain;
pub mod io;
pub mod translate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::models::eval::EvalError;
use crate::models::{ElemSet, Interpretation, ModelError, Valuation, MAX_DOMAIN};
use crate::syntax::Polarity;

pub use chain::{chain_tree_model, chained_role_map, collapse_chained};
pub use translate::{translate_q, translate_u, TranslationResult};

/// A modal mu-calculus formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MuFormula {
    Atom(String),
    Var(String),
    Top,
    Bot,
    Not(Box<MuFormula>),
    And(Box<MuFormula>, Box<MuFormula>),
    Or(Box<MuFormula>, Box<MuFormula>),
    /// `<a> f` — some a-successor satisfies `f`.
    Diamond(String, Box<MuFormula>),
    /// `[a] f` — every a-successor satisfies `f`.
    Box(String, Box<MuFormula>),
    Mu(String, Box<MuFormula>),
    Nu(String, Box<MuFormula>),
}

impl MuFormula {
    pub fn atom(name: impl Into<String>) -> Self {
        MuFormula::Atom(name.into())
    }

    pub fn var(name: impl Into<String>) -> Self {
        MuFormula::Var(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: MuFormula) -> Self {
        MuFormula::Not(std::boxed::Box::new(f))
    }

    pub fn and(a: MuFormula, b: MuFormula) -> Self {
        MuFormula::And(std::boxed::Box::new(a), std::boxed::Box::new(b))
    }

    pub fn or(a: MuFormula, b: MuFormula) -> Self {
        MuFormula::Or(std::boxed::Box::new(a), std::boxed::Box::new(b))
    }

    pub fn diamond(label: impl Into<String>, f: MuFormula) -> Self {
        MuFormula::Diamond(label.into(), std::boxed::Box::new(f))
    }

    pub fn boxed(label: impl Into<String>, f: MuFormula) -> Self {
        MuFormula::Box(label.into(), std::boxed::Box::new(f))
    }

    pub fn mu(var: impl Into<String>, f: MuFormula) -> Self {
        MuFormula::Mu(var.into(), std::boxed::Box::new(f))
    }

    pub fn nu(var: impl Into<String>, f: MuFormula) -> Self {
        MuFormula::Nu(var.into(), std::boxed::Box::new(f))
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            MuFormula::Atom(_) | MuFormula::Var(_) | MuFormula::Top | MuFormula::Bot => 1,
            MuFormula::Not(f)
            | MuFormula::Diamond(_, f)
            | MuFormula::Box(_, f)
            | MuFormula::Mu(_, f)
            | MuFormula::Nu(_, f) => 1 + f.size(),
            MuFormula::And(a, b) | MuFormula::Or(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Labels appearing under modalities.
    pub fn labels(&self) -> BTreeSet<String> {
        fn walk(f: &MuFormula, out: &mut BTreeSet<String>) {
            match f {
                MuFormula::Atom(_) | MuFormula::Var(_) | MuFormula::Top | MuFormula::Bot => {}
                MuFormula::Not(g) | MuFormula::Mu(_, g) | MuFormula::Nu(_, g) => walk(g, out),
                MuFormula::And(a, b) | MuFormula::Or(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                MuFormula::Diamond(l, g) | MuFormula::Box(l, g) => {
                    out.insert(l.clone());
                    walk(g, out);
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut out);
        out
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        fn walk(f: &MuFormula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                MuFormula::Var(v) => {
                    if !bound.iter().any(|b| b == v) {
                        out.insert(v.clone());
                    }
                }
                MuFormula::Atom(_) | MuFormula::Top | MuFormula::Bot => {}
                MuFormula::Not(g) | MuFormula::Diamond(_, g) | MuFormula::Box(_, g) => {
                    walk(g, bound, out)
                }
                MuFormula::And(a, b) | MuFormula::Or(a, b) => {
                    walk(a, bound, out);
                    walk(b, bound, out);
                }
                MuFormula::Mu(v, g) | MuFormula::Nu(v, g) => {
                    bound.push(v.clone());
                    walk(g, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for MuFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_mu_formula(self))
    }
}

/// Polarity of the free occurrences of `x` in `f`. Only negation flips the
/// sign; there is no number-restriction rule here.
pub fn polarity_of_mu(f: &MuFormula, x: &str) -> Polarity {
    fn walk(f: &MuFormula, x: &str, odd: bool, seen: &mut (bool, bool)) {
        match f {
            MuFormula::Var(v) if v == x => {
                if odd {
                    seen.1 = true;
                } else {
                    seen.0 = true;
                }
            }
            MuFormula::Var(_) | MuFormula::Atom(_) | MuFormula::Top | MuFormula::Bot => {}
            MuFormula::Not(g) => walk(g, x, !odd, seen),
            MuFormula::And(a, b) | MuFormula::Or(a, b) => {
                walk(a, x, odd, seen);
                walk(b, x, odd, seen);
            }
            MuFormula::Diamond(_, g) | MuFormula::Box(_, g) => walk(g, x, odd, seen),
            MuFormula::Mu(v, g) | MuFormula::Nu(v, g) => {
                if v != x {
                    walk(g, x, odd, seen);
                }
            }
        }
    }
    let mut seen = (false, false);
    walk(f, x, false, &mut seen);
    match seen {
        (false, false) => Polarity::Absent,
        (true, false) => Polarity::Positive,
        (false, true) => Polarity::Negative,
        (true, true) => Polarity::Both,
    }
}

/// Every bound variable must occur under an even number of negations in the
/// scope of its binder.
pub fn check_well_formed_mu(f: &MuFormula) -> Result<(), MucalcError> {
    fn walk(f: &MuFormula) -> Result<(), MucalcError> {
        match f {
            MuFormula::Atom(_) | MuFormula::Var(_) | MuFormula::Top | MuFormula::Bot => Ok(()),
            MuFormula::Not(g) | MuFormula::Diamond(_, g) | MuFormula::Box(_, g) => walk(g),
            MuFormula::And(a, b) | MuFormula::Or(a, b) => {
                walk(a)?;
                walk(b)
            }
            MuFormula::Mu(v, g) | MuFormula::Nu(v, g) => {
                match polarity_of_mu(g, v) {
                    Polarity::Positive | Polarity::Absent => {}
                    _ => {
                        return Err(MucalcError::NonPositiveVariable { var: v.clone() });
                    }
                }
                walk(g)
            }
        }
    }
    walk(f)
}

/// Structural equality up to renaming of bound variables.
pub fn alpha_eq_mu(a: &MuFormula, b: &MuFormula) -> bool {
    fn go(a: &MuFormula, b: &MuFormula, env: &mut Vec<(String, String)>) -> bool {
        match (a, b) {
            (MuFormula::Var(x), MuFormula::Var(y)) => {
                let xi = env.iter().rposition(|(l, _)| l == x);
                let yi = env.iter().rposition(|(_, r)| r == y);
                match (xi, yi) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (MuFormula::Atom(x), MuFormula::Atom(y)) => x == y,
            (MuFormula::Top, MuFormula::Top) | (MuFormula::Bot, MuFormula::Bot) => true,
            (MuFormula::Not(x), MuFormula::Not(y)) => go(x, y, env),
            (MuFormula::And(x1, x2), MuFormula::And(y1, y2))
            | (MuFormula::Or(x1, x2), MuFormula::Or(y1, y2)) => {
                go(x1, y1, env) && go(x2, y2, env)
            }
            (MuFormula::Diamond(l, x), MuFormula::Diamond(m, y))
            | (MuFormula::Box(l, x), MuFormula::Box(m, y)) => l == m && go(x, y, env),
            (MuFormula::Mu(v, x), MuFormula::Mu(w, y))
            | (MuFormula::Nu(v, x), MuFormula::Nu(w, y)) => {
                env.push((v.clone(), w.clone()));
                let r = go(x, y, env);
                env.pop();
                r
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new())
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MucalcError {
    #[error("number restriction present; use the deterministic translation instead")]
    NumberRestrictionPresent,
    #[error("bound variable {var} occurs non-positively")]
    NonPositiveVariable { var: String },
    #[error("unknown state `{name}`")]
    UnknownState { name: String },
    #[error("not a tree: `{node}` is reachable through {parents} role edges")]
    NotATree { node: String, parents: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// A Kripke structure: states, one binary relation per label, and an atom
/// valuation.
#[derive(Clone, Debug)]
pub struct KripkeStructure {
    states: Vec<String>,
    relations: BTreeMap<String, Vec<ElemSet>>,
    valuation: BTreeMap<String, ElemSet>,
}

impl KripkeStructure {
    pub fn new(states: Vec<String>) -> Result<Self, ModelError> {
        if states.len() > MAX_DOMAIN {
            return Err(ModelError::DomainTooLarge {
                size: states.len(),
                max: MAX_DOMAIN,
            });
        }
        let mut seen = BTreeSet::new();
        for s in &states {
            if !seen.insert(s.clone()) {
                return Err(ModelError::DuplicateElement { name: s.clone() });
            }
        }
        Ok(KripkeStructure {
            states,
            relations: BTreeMap::new(),
            valuation: BTreeMap::new(),
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn size(&self) -> usize {
        self.states.len()
    }

    pub fn full(&self) -> ElemSet {
        ElemSet::full(self.states.len())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn name_of(&self, index: usize) -> &str {
        &self.states[index]
    }

    pub fn names_of(&self, set: ElemSet) -> Vec<&str> {
        set.iter().map(|i| self.name_of(i)).collect()
    }

    pub fn set_atom(&mut self, name: impl Into<String>, ext: ElemSet) {
        self.valuation.insert(name.into(), ext);
    }

    pub fn set_relation(&mut self, label: impl Into<String>, pairs: &[(usize, usize)]) {
        let mut rows = vec![ElemSet::EMPTY; self.states.len()];
        for &(from, to) in pairs {
            rows[from].insert(to);
        }
        self.relations.insert(label.into(), rows);
    }

    pub fn atom_names(&self) -> impl Iterator<Item = &str> {
        self.valuation.keys().map(String::as_str)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.relations.keys().map(String::as_str)
    }

    pub fn atom_ext(&self, name: &str) -> ElemSet {
        self.valuation.get(name).copied().unwrap_or(ElemSet::EMPTY)
    }

    pub fn successors(&self, label: &str, from: usize) -> ElemSet {
        self.relations
            .get(label)
            .map(|rows| rows[from])
            .unwrap_or(ElemSet::EMPTY)
    }

    pub fn relation_pairs(&self, label: &str) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        if let Some(rows) = self.relations.get(label) {
            for (from, row) in rows.iter().enumerate() {
                for to in row.iter() {
                    out.push((from, to));
                }
            }
        }
        out
    }
}

impl PartialEq for KripkeStructure {
    fn eq(&self, other: &Self) -> bool {
        if self.states != other.states {
            return false;
        }
        let atoms: BTreeSet<&str> = self.atom_names().chain(other.atom_names()).collect();
        if atoms.iter().any(|a| self.atom_ext(a) != other.atom_ext(a)) {
            return false;
        }
        let labels: BTreeSet<&str> = self.labels().chain(other.labels()).collect();
        labels
            .iter()
            .all(|l| (0..self.size()).all(|i| self.successors(l, i) == other.successors(l, i)))
    }
}

impl Eq for KripkeStructure {}

/// The Kripke structure with the same underlying data as an interpretation:
/// elements become states, roles become labeled relations, atomic concepts
/// become the valuation.
pub fn kripke_of_interpretation(interp: &Interpretation) -> KripkeStructure {
    let mut m = KripkeStructure::new(interp.domain().to_vec())
        .expect("interpretation domains are valid state sets");
    for a in interp.concept_names() {
        m.valuation.insert(a.to_string(), interp.concept_ext(a));
    }
    let roles: Vec<String> = interp.role_names().map(str::to_string).collect();
    for r in roles {
        m.set_relation(r.clone(), &interp.role_pairs(&r));
    }
    m
}

/// Inverse of [`kripke_of_interpretation`]; fails only on an empty state set.
pub fn interpretation_of_kripke(m: &KripkeStructure) -> Result<Interpretation, ModelError> {
    let mut interp = Interpretation::new(m.states().to_vec())?;
    for a in m.atom_names() {
        interp.set_concept(a.to_string(), m.atom_ext(a));
    }
    let labels: Vec<String> = m.labels().map(str::to_string).collect();
    for l in labels {
        interp.set_role(l.clone(), &m.relation_pairs(&l));
    }
    Ok(interp)
}

/// Evaluates a formula over a Kripke structure, mirroring the concept
/// evaluator's iteration scheme.
pub fn eval_mu(
    phi: &MuFormula,
    m: &KripkeStructure,
    rho: &Valuation,
) -> Result<ElemSet, EvalError> {
    for var in phi.free_variables() {
        if rho.get(&var).is_none() {
            return Err(EvalError::UnboundVariable { var });
        }
    }
    let mut env: Vec<(&str, ElemSet)> = rho.iter().collect();
    Ok(eval_mu_env(phi, m, &mut env))
}

fn eval_mu_env<'f>(
    phi: &'f MuFormula,
    m: &KripkeStructure,
    env: &mut Vec<(&'f str, ElemSet)>,
) -> ElemSet {
    match phi {
        MuFormula::Atom(a) => m.atom_ext(a),
        MuFormula::Var(x) => env
            .iter()
            .rev()
            .find(|(name, _)| name == x)
            .map(|(_, set)| *set)
            .expect("free variables are checked before evaluation"),
        MuFormula::Top => m.full(),
        MuFormula::Bot => ElemSet::EMPTY,
        MuFormula::Not(f) => eval_mu_env(f, m, env).complement_in(m.size()),
        MuFormula::And(a, b) => eval_mu_env(a, m, env).inter(eval_mu_env(b, m, env)),
        MuFormula::Or(a, b) => eval_mu_env(a, m, env).union(eval_mu_env(b, m, env)),
        MuFormula::Diamond(l, f) => {
            let t = eval_mu_env(f, m, env);
            let mut out = ElemSet::EMPTY;
            for s in 0..m.size() {
                if !m.successors(l, s).inter(t).is_empty() {
                    out.insert(s);
                }
            }
            out
        }
        MuFormula::Box(l, f) => {
            let t = eval_mu_env(f, m, env);
            let mut out = ElemSet::EMPTY;
            for s in 0..m.size() {
                if m.successors(l, s).is_subset_of(t) {
                    out.insert(s);
                }
            }
            out
        }
        MuFormula::Mu(x, f) => fix_mu(true, x, f, m, env),
        MuFormula::Nu(x, f) => fix_mu(false, x, f, m, env),
    }
}

fn fix_mu<'f>(
    least: bool,
    var: &'f str,
    body: &'f MuFormula,
    m: &KripkeStructure,
    env: &mut Vec<(&'f str, ElemSet)>,
) -> ElemSet {
    let mut current = if least { ElemSet::EMPTY } else { m.full() };
    env.push((var, current));
    loop {
        env.last_mut().expect("just pushed").1 = current;
        let next = eval_mu_env(body, m, env);
        if next == current {
            break;
        }
        current = next;
    }
    env.pop();
    current
}

/// A label whose relation fails to be a partial function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterminismViolation {
    pub label: String,
    pub state: String,
    pub successors: Vec<String>,
}

/// Checks that every labeled relation is a partial function: at most one
/// successor per state and label.
pub fn check_deterministic(m: &KripkeStructure) -> Result<(), DeterminismViolation> {
    for label in m.labels() {
        for s in 0..m.size() {
            let succ = m.successors(label, s);
            if succ.len() > 1 {
                return Err(DeterminismViolation {
                    label: label.to_string(),
                    state: m.name_of(s).to_string(),
                    successors: m.names_of(succ).into_iter().map(str::to_string).collect(),
                });
            }
        }
    }
    Ok(())
}

/// Renders a formula in the mu-calculus surface syntax: `~`, `&`, `|`,
/// `<a>`, `[a]`, `mu X.`, `nu X.`, `true`, `false`. Binder bodies extend
/// maximally right; parenthesization is minimal under that convention.
pub fn print_mu_formula(phi: &MuFormula) -> String {
    fn prec(f: &MuFormula) -> u8 {
        match f {
            MuFormula::Or(..) => 1,
            MuFormula::And(..) => 2,
            MuFormula::Not(_)
            | MuFormula::Diamond(..)
            | MuFormula::Box(..)
            | MuFormula::Mu(..)
            | MuFormula::Nu(..) => 3,
            _ => 4,
        }
    }
    fn right_open(f: &MuFormula) -> bool {
        match f {
            MuFormula::Mu(..) | MuFormula::Nu(..) => true,
            MuFormula::Not(g) | MuFormula::Diamond(_, g) | MuFormula::Box(_, g) => right_open(g),
            MuFormula::And(_, g) | MuFormula::Or(_, g) => right_open(g),
            _ => false,
        }
    }
    fn show(f: &MuFormula, out: &mut String, min: u8, delimited: bool) {
        let parens = prec(f) < min || (!delimited && right_open(f));
        if parens {
            out.push('(');
        }
        let delim = delimited || parens;
        match f {
            MuFormula::Atom(a) | MuFormula::Var(a) => out.push_str(a),
            MuFormula::Top => out.push_str("true"),
            MuFormula::Bot => out.push_str("false"),
            MuFormula::Or(a, b) => {
                show(a, out, 1, false);
                out.push_str(" | ");
                show(b, out, 2, delim);
            }
            MuFormula::And(a, b) => {
                show(a, out, 2, false);
                out.push_str(" & ");
                show(b, out, 3, delim);
            }
            MuFormula::Not(g) => {
                out.push('~');
                show(g, out, 3, delim);
            }
            MuFormula::Diamond(l, g) => {
                out.push_str(&format!("<{l}> "));
                show(g, out, 3, delim);
            }
            MuFormula::Box(l, g) => {
                out.push_str(&format!("[{l}] "));
                show(g, out, 3, delim);
            }
            MuFormula::Mu(v, g) => {
                out.push_str(&format!("mu {v}. "));
                show(g, out, 1, delim);
            }
            MuFormula::Nu(v, g) => {
                out.push_str(&format!("nu {v}. "));
                show(g, out, 1, delim);
            }
        }
        if parens {
            out.push(')');
        }
    }
    let mut out = String::new();
    show(phi, &mut out, 1, true);
    out
}
