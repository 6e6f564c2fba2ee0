//! Concept and TBox abstract syntax, well-formedness analysis, substitution
//! and fixpoint duality.
//!
//! A [`Concept`] is the core AST: atomic roles only, with the PDL-style role
//! operators of the extended surface syntax compiled away by
//! [`pdl::desugar_pdl`] before a `Concept` is ever built. All values are
//! immutable after construction and safe to share across threads.

pub mod lexer;
pub mod parser;
pub mod pdl;
pub mod printer;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub use parser::{parse_concept, parse_concept_with_free, parse_tbox};
pub use pdl::{desugar_pdl, ExtConcept, RoleExpr};
pub use printer::print_concept;

/// A mu-ALCQ concept expression.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Concept {
    /// Atomic concept, interpreted directly by the model.
    Atomic(String),
    /// Concept variable, bound by an enclosing `mu`/`nu` or free.
    Var(String),
    Top,
    Bot,
    Not(Box<Concept>),
    And(Box<Concept>, Box<Concept>),
    Or(Box<Concept>, Box<Concept>),
    /// `exists R. C`
    Exists(String, Box<Concept>),
    /// `forall R. C`
    Forall(String, Box<Concept>),
    /// `atmost n R. C` — at most `n` R-successors in `C`.
    AtMost(u32, String, Box<Concept>),
    /// `atleast n R. C` — at least `n` R-successors in `C`.
    AtLeast(u32, String, Box<Concept>),
    /// Least-fixpoint binder `mu X. C`.
    Mu(String, Box<Concept>),
    /// Greatest-fixpoint binder `nu X. C`.
    Nu(String, Box<Concept>),
}

impl Concept {
    pub fn atomic(name: impl Into<String>) -> Self {
        Concept::Atomic(name.into())
    }

    pub fn var(name: impl Into<String>) -> Self {
        Concept::Var(name.into())
    }

    // Constructor, not ops::Not: concepts are negated by wrapping, never in
    // place.
    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Concept) -> Self {
        Concept::Not(Box::new(c))
    }

    pub fn and(a: Concept, b: Concept) -> Self {
        Concept::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Concept, b: Concept) -> Self {
        Concept::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(role: impl Into<String>, c: Concept) -> Self {
        Concept::Exists(role.into(), Box::new(c))
    }

    pub fn forall(role: impl Into<String>, c: Concept) -> Self {
        Concept::Forall(role.into(), Box::new(c))
    }

    pub fn at_most(n: u32, role: impl Into<String>, c: Concept) -> Self {
        Concept::AtMost(n, role.into(), Box::new(c))
    }

    pub fn at_least(n: u32, role: impl Into<String>, c: Concept) -> Self {
        Concept::AtLeast(n, role.into(), Box::new(c))
    }

    pub fn mu(var: impl Into<String>, body: Concept) -> Self {
        Concept::Mu(var.into(), Box::new(body))
    }

    pub fn nu(var: impl Into<String>, body: Concept) -> Self {
        Concept::Nu(var.into(), Box::new(body))
    }

    /// Right-associated conjunction of `parts`; `top` when empty.
    pub fn and_all(parts: Vec<Concept>) -> Concept {
        let mut it = parts.into_iter().rev();
        match it.next() {
            None => Concept::Top,
            Some(last) => it.fold(last, |acc, c| Concept::and(c, acc)),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Concept::Atomic(_) | Concept::Var(_) | Concept::Top | Concept::Bot => 1,
            Concept::Not(b) => 1 + b.size(),
            Concept::And(a, b) | Concept::Or(a, b) => 1 + a.size() + b.size(),
            Concept::Exists(_, b)
            | Concept::Forall(_, b)
            | Concept::AtMost(_, _, b)
            | Concept::AtLeast(_, _, b)
            | Concept::Mu(_, b)
            | Concept::Nu(_, b) => 1 + b.size(),
        }
    }

    /// All subterms, including `self`.
    pub fn subterms(&self) -> Vec<&Concept> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(c) = stack.pop() {
            out.push(c);
            match c {
                Concept::Atomic(_) | Concept::Var(_) | Concept::Top | Concept::Bot => {}
                Concept::Not(b) => stack.push(b),
                Concept::And(a, b) | Concept::Or(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
                Concept::Exists(_, b)
                | Concept::Forall(_, b)
                | Concept::AtMost(_, _, b)
                | Concept::AtLeast(_, _, b)
                | Concept::Mu(_, b)
                | Concept::Nu(_, b) => stack.push(b),
            }
        }
        out
    }

    /// Names of the atomic concepts occurring in `self`.
    pub fn atomic_concepts(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for t in self.subterms() {
            if let Concept::Atomic(a) = t {
                out.insert(a.clone());
            }
        }
        out
    }

    /// Names of the atomic roles occurring in `self`.
    pub fn roles(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for t in self.subterms() {
            match t {
                Concept::Exists(r, _)
                | Concept::Forall(r, _)
                | Concept::AtMost(_, r, _)
                | Concept::AtLeast(_, r, _) => {
                    out.insert(r.clone());
                }
                _ => {}
            }
        }
        out
    }

    /// Every identifier used in `self`: atomic concepts, roles, and variables
    /// both free and bound. Fresh-name generation avoids this set.
    pub fn identifiers(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for t in self.subterms() {
            match t {
                Concept::Atomic(n) | Concept::Var(n) => {
                    out.insert(n.clone());
                }
                Concept::Exists(r, _) | Concept::Forall(r, _) => {
                    out.insert(r.clone());
                }
                Concept::AtMost(_, r, _) | Concept::AtLeast(_, r, _) => {
                    out.insert(r.clone());
                }
                Concept::Mu(v, _) | Concept::Nu(v, _) => {
                    out.insert(v.clone());
                }
                _ => {}
            }
        }
        out
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&printer::print_concept(self))
    }
}

/// Sign of the free occurrences of a variable in a concept.
///
/// The qualifier of an `atmost` restriction counts as one negation; `atleast`,
/// the boolean connectives, the role quantifiers and the fixpoint binders do
/// not flip the sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    /// Every free occurrence is under an even number of negations.
    Positive,
    /// Every free occurrence is under an odd number of negations.
    Negative,
    /// Free occurrences of both signs.
    Both,
    /// No free occurrence at all.
    Absent,
}

/// Computes the polarity of the free occurrences of `x` in `c`.
pub fn polarity_of(c: &Concept, x: &str) -> Polarity {
    fn walk(c: &Concept, x: &str, odd: bool, seen: &mut (bool, bool)) {
        match c {
            Concept::Var(v) if v == x => {
                if odd {
                    seen.1 = true;
                } else {
                    seen.0 = true;
                }
            }
            Concept::Var(_) | Concept::Atomic(_) | Concept::Top | Concept::Bot => {}
            Concept::Not(b) => walk(b, x, !odd, seen),
            Concept::And(a, b) | Concept::Or(a, b) => {
                walk(a, x, odd, seen);
                walk(b, x, odd, seen);
            }
            Concept::Exists(_, b) | Concept::Forall(_, b) | Concept::AtLeast(_, _, b) => {
                walk(b, x, odd, seen)
            }
            Concept::AtMost(_, _, b) => walk(b, x, !odd, seen),
            Concept::Mu(v, b) | Concept::Nu(v, b) => {
                if v != x {
                    walk(b, x, odd, seen);
                }
            }
        }
    }
    let mut seen = (false, false);
    walk(c, x, false, &mut seen);
    match seen {
        (false, false) => Polarity::Absent,
        (true, false) => Polarity::Positive,
        (false, true) => Polarity::Negative,
        (true, true) => Polarity::Both,
    }
}

/// Variables with at least one free occurrence in `c`.
pub fn free_variables(c: &Concept) -> BTreeSet<String> {
    fn walk(c: &Concept, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match c {
            Concept::Var(v) => {
                if !bound.iter().any(|b| b == v) {
                    out.insert(v.clone());
                }
            }
            Concept::Atomic(_) | Concept::Top | Concept::Bot => {}
            Concept::Not(b)
            | Concept::Exists(_, b)
            | Concept::Forall(_, b)
            | Concept::AtMost(_, _, b)
            | Concept::AtLeast(_, _, b) => walk(b, bound, out),
            Concept::And(a, b) | Concept::Or(a, b) => {
                walk(a, bound, out);
                walk(b, bound, out);
            }
            Concept::Mu(v, b) | Concept::Nu(v, b) => {
                bound.push(v.clone());
                walk(b, bound, out);
                bound.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    walk(c, &mut Vec::new(), &mut out);
    out
}

/// First name of the form `base'`, `base''`, ... not contained in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut candidate = format!("{base}'");
    while avoid.contains(&candidate) {
        candidate.push('\'');
    }
    candidate
}

/// Capture-avoiding substitution of `d` for every free occurrence of `x` in
/// `c`. Binders whose bound name occurs free in `d` are renamed first.
pub fn substitute(c: &Concept, x: &str, d: &Concept) -> Concept {
    match c {
        Concept::Var(v) if v == x => d.clone(),
        Concept::Var(_) | Concept::Atomic(_) | Concept::Top | Concept::Bot => c.clone(),
        Concept::Not(b) => Concept::not(substitute(b, x, d)),
        Concept::And(a, b) => Concept::and(substitute(a, x, d), substitute(b, x, d)),
        Concept::Or(a, b) => Concept::or(substitute(a, x, d), substitute(b, x, d)),
        Concept::Exists(r, b) => Concept::exists(r.clone(), substitute(b, x, d)),
        Concept::Forall(r, b) => Concept::forall(r.clone(), substitute(b, x, d)),
        Concept::AtMost(n, r, b) => Concept::at_most(*n, r.clone(), substitute(b, x, d)),
        Concept::AtLeast(n, r, b) => Concept::at_least(*n, r.clone(), substitute(b, x, d)),
        Concept::Mu(v, b) | Concept::Nu(v, b) => {
            let rebuild = |v: String, b: Concept| match c {
                Concept::Mu(..) => Concept::mu(v, b),
                _ => Concept::nu(v, b),
            };
            if v == x {
                // x is shadowed; nothing free below.
                c.clone()
            } else if free_variables(d).contains(v) && free_variables(b).contains(x) {
                let mut avoid = b.identifiers();
                avoid.extend(d.identifiers());
                avoid.insert(x.to_string());
                let v2 = fresh_name(v, &avoid);
                let renamed = substitute(b, v, &Concept::var(v2.clone()));
                rebuild(v2, substitute(&renamed, x, d))
            } else {
                rebuild(v.clone(), substitute(b, x, d))
            }
        }
    }
}

/// Structural equality up to renaming of bound variables.
pub fn alpha_eq(a: &Concept, b: &Concept) -> bool {
    fn go(a: &Concept, b: &Concept, env: &mut Vec<(String, String)>) -> bool {
        match (a, b) {
            (Concept::Var(x), Concept::Var(y)) => {
                let xi = env.iter().rposition(|(l, _)| l == x);
                let yi = env.iter().rposition(|(_, r)| r == y);
                match (xi, yi) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (Concept::Atomic(x), Concept::Atomic(y)) => x == y,
            (Concept::Top, Concept::Top) | (Concept::Bot, Concept::Bot) => true,
            (Concept::Not(x), Concept::Not(y)) => go(x, y, env),
            (Concept::And(x1, x2), Concept::And(y1, y2))
            | (Concept::Or(x1, x2), Concept::Or(y1, y2)) => {
                go(x1, y1, env) && go(x2, y2, env)
            }
            (Concept::Exists(r, x), Concept::Exists(s, y))
            | (Concept::Forall(r, x), Concept::Forall(s, y)) => r == s && go(x, y, env),
            (Concept::AtMost(n, r, x), Concept::AtMost(m, s, y))
            | (Concept::AtLeast(n, r, x), Concept::AtLeast(m, s, y)) => {
                n == m && r == s && go(x, y, env)
            }
            (Concept::Mu(v, x), Concept::Mu(w, y)) | (Concept::Nu(v, x), Concept::Nu(w, y)) => {
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

/// Errors produced while parsing or validating concepts and TBoxes.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("parse error at {line}:{col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("inverse roles are not supported (at {line}:{col})")]
    InverseRole { line: usize, col: usize },
    #[error("variable {var} bound by {binder} occurs non-positively (witness: {path})")]
    WellFormedness {
        binder: String,
        var: String,
        path: String,
    },
    #[error("assertion {index}: {side}-hand side has free variable {var}")]
    Closedness {
        index: usize,
        side: &'static str,
        var: String,
    },
    #[error("number restrictions require an atomic role, found `{role}`")]
    UnsupportedRole { role: String },
    #[error("expected a fixpoint concept, found `{found}`")]
    NotAFixpoint { found: String },
}

/// Checks that in every `mu X. B` / `nu X. B` subterm the bound variable
/// occurs only positively in the body.
pub fn check_well_formed(c: &Concept) -> Result<(), SyntaxError> {
    for t in c.subterms() {
        if let Concept::Mu(v, b) | Concept::Nu(v, b) = t {
            match polarity_of(b, v) {
                Polarity::Positive | Polarity::Absent => {}
                _ => {
                    let binder = if matches!(t, Concept::Mu(..)) { "mu" } else { "nu" };
                    let mut path = Vec::new();
                    negative_path(b, v, false, &mut path);
                    return Err(SyntaxError::WellFormedness {
                        binder: format!("{binder} {v}"),
                        var: v.clone(),
                        path: path.join(" > "),
                    });
                }
            }
        }
    }
    Ok(())
}

/// Records the constructor path to some free occurrence of `x` under an odd
/// number of negations. Returns true when found.
fn negative_path(c: &Concept, x: &str, odd: bool, path: &mut Vec<String>) -> bool {
    let step = |path: &mut Vec<String>, label: &str, b: &Concept, odd: bool| -> bool {
        path.push(label.to_string());
        if negative_path(b, x, odd, path) {
            true
        } else {
            path.pop();
            false
        }
    };
    match c {
        Concept::Var(v) if v == x && odd => {
            path.push(v.clone());
            true
        }
        Concept::Var(_) | Concept::Atomic(_) | Concept::Top | Concept::Bot => false,
        Concept::Not(b) => step(path, "not", b, !odd),
        Concept::And(a, b) => step(path, "and-lhs", a, odd) || step(path, "and-rhs", b, odd),
        Concept::Or(a, b) => step(path, "or-lhs", a, odd) || step(path, "or-rhs", b, odd),
        Concept::Exists(r, b) => step(path, &format!("exists {r}"), b, odd),
        Concept::Forall(r, b) => step(path, &format!("forall {r}"), b, odd),
        Concept::AtMost(n, r, b) => step(path, &format!("atmost {n} {r}"), b, !odd),
        Concept::AtLeast(n, r, b) => step(path, &format!("atleast {n} {r}"), b, odd),
        Concept::Mu(v, b) => v != x && step(path, &format!("mu {v}"), b, odd),
        Concept::Nu(v, b) => v != x && step(path, &format!("nu {v}"), b, odd),
    }
}

/// Rewrites a fixpoint concept into its dual: `nu X. B` becomes
/// `not mu X. not B[X/not X]`, and symmetrically for `mu`.
pub fn dual_fixpoint(c: &Concept) -> Result<Concept, SyntaxError> {
    match c {
        Concept::Mu(v, b) | Concept::Nu(v, b) => {
            let negated_var = Concept::not(Concept::var(v.clone()));
            let body = Concept::not(substitute(b, v, &negated_var));
            let inner = match c {
                Concept::Mu(..) => Concept::nu(v.clone(), body),
                _ => Concept::mu(v.clone(), body),
            };
            Ok(Concept::not(inner))
        }
        other => Err(SyntaxError::NotAFixpoint {
            found: print_concept(other),
        }),
    }
}

/// An inclusion assertion `lhs <= rhs` between closed concepts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assertion {
    pub lhs: Concept,
    pub rhs: Concept,
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} <= {}",
            print_concept(&self.lhs),
            print_concept(&self.rhs)
        )
    }
}

/// A finite set of inclusion assertions between closed concepts. An
/// equivalence assertion is stored as two inclusions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TBox {
    assertions: Vec<Assertion>,
}

impl TBox {
    pub fn empty() -> Self {
        TBox::default()
    }

    /// Builds a TBox, rejecting open or non-well-formed sides.
    pub fn new(pairs: Vec<(Concept, Concept)>) -> Result<Self, SyntaxError> {
        for (index, (lhs, rhs)) in pairs.iter().enumerate() {
            for (side, c) in [("left", lhs), ("right", rhs)] {
                if let Some(var) = free_variables(c).into_iter().next() {
                    return Err(SyntaxError::Closedness { index, side, var });
                }
                check_well_formed(c)?;
            }
        }
        Ok(TBox {
            assertions: pairs
                .into_iter()
                .map(|(lhs, rhs)| Assertion { lhs, rhs })
                .collect(),
        })
    }

    pub fn assertions(&self) -> &[Assertion] {
        &self.assertions
    }

    pub fn len(&self) -> usize {
        self.assertions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assertions.is_empty()
    }

    pub fn atomic_concepts(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for a in &self.assertions {
            out.extend(a.lhs.atomic_concepts());
            out.extend(a.rhs.atomic_concepts());
        }
        out
    }

    pub fn roles(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for a in &self.assertions {
            out.extend(a.lhs.roles());
            out.extend(a.rhs.roles());
        }
        out
    }

    pub fn identifiers(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for a in &self.assertions {
            out.extend(a.lhs.identifiers());
            out.extend(a.rhs.identifiers());
        }
        out
    }
}

impl fmt::Display for TBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.assertions {
            writeln!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Replaces every free variable by an atomic concept of the same name.
///
/// Free variables are interpreted exactly like atomic concepts, so this
/// preserves satisfiability; it lets closed-input operations accept open
/// concepts at the front end.
pub fn free_vars_to_atomics(c: &Concept) -> Concept {
    fn walk(c: &Concept, bound: &mut Vec<String>) -> Concept {
        match c {
            Concept::Var(v) => {
                if bound.iter().any(|b| b == v) {
                    c.clone()
                } else {
                    Concept::Atomic(v.clone())
                }
            }
            Concept::Atomic(_) | Concept::Top | Concept::Bot => c.clone(),
            Concept::Not(b) => Concept::not(walk(b, bound)),
            Concept::And(a, b) => Concept::and(walk(a, bound), walk(b, bound)),
            Concept::Or(a, b) => Concept::or(walk(a, bound), walk(b, bound)),
            Concept::Exists(r, b) => Concept::exists(r.clone(), walk(b, bound)),
            Concept::Forall(r, b) => Concept::forall(r.clone(), walk(b, bound)),
            Concept::AtMost(n, r, b) => Concept::at_most(*n, r.clone(), walk(b, bound)),
            Concept::AtLeast(n, r, b) => Concept::at_least(*n, r.clone(), walk(b, bound)),
            Concept::Mu(v, b) => {
                bound.push(v.clone());
                let w = walk(b, bound);
                bound.pop();
                Concept::mu(v.clone(), w)
            }
            Concept::Nu(v, b) => {
                bound.push(v.clone());
                let w = walk(b, bound);
                bound.pop();
                Concept::nu(v.clone(), w)
            }
        }
    }
    walk(c, &mut Vec::new())
}
