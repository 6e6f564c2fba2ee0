//! Extended surface syntax with PDL-style role operators, and its
//! compilation into plain concepts.
//!
//! Role chaining, union, reflexive-transitive closure and identity tests are
//! convenience notation: under a quantifier they reduce to nesting, branching,
//! an explicit fixpoint, or a boolean, so the semantic core never sees a
//! non-atomic role.

use std::collections::BTreeSet;
use std::fmt;

use super::{Concept, SyntaxError};

/// A role expression of the extended surface syntax. Eliminated by
/// [`desugar_pdl`] before any semantic operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RoleExpr {
    Atomic(String),
    /// `r ; s` — relational composition.
    Chain(Box<RoleExpr>, Box<RoleExpr>),
    /// `r | s` — union.
    Union(Box<RoleExpr>, Box<RoleExpr>),
    /// `r*` — reflexive-transitive closure.
    Star(Box<RoleExpr>),
    /// `id(C)` — identity restricted to `C`.
    IdTest(Box<ExtConcept>),
}

impl fmt::Display for RoleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoleExpr::Atomic(r) => f.write_str(r),
            RoleExpr::Chain(a, b) => write!(f, "({a} ; {b})"),
            RoleExpr::Union(a, b) => write!(f, "({a} | {b})"),
            RoleExpr::Star(r) => write!(f, "({r})*"),
            RoleExpr::IdTest(_) => f.write_str("id(...)"),
        }
    }
}

/// A concept over [`RoleExpr`] roles, plus the `wf(R)` well-foundedness form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtConcept {
    Atomic(String),
    Var(String),
    Top,
    Bot,
    Not(Box<ExtConcept>),
    And(Box<ExtConcept>, Box<ExtConcept>),
    Or(Box<ExtConcept>, Box<ExtConcept>),
    Exists(RoleExpr, Box<ExtConcept>),
    Forall(RoleExpr, Box<ExtConcept>),
    AtMost(u32, RoleExpr, Box<ExtConcept>),
    AtLeast(u32, RoleExpr, Box<ExtConcept>),
    Mu(String, Box<ExtConcept>),
    Nu(String, Box<ExtConcept>),
    /// `wf(R)` — the points from which every R-path is finite.
    Wf(RoleExpr),
}

impl ExtConcept {
    fn collect_identifiers(&self, out: &mut BTreeSet<String>) {
        match self {
            ExtConcept::Atomic(n) | ExtConcept::Var(n) => {
                out.insert(n.clone());
            }
            ExtConcept::Top | ExtConcept::Bot => {}
            ExtConcept::Not(b) => b.collect_identifiers(out),
            ExtConcept::And(a, b) | ExtConcept::Or(a, b) => {
                a.collect_identifiers(out);
                b.collect_identifiers(out);
            }
            ExtConcept::Exists(r, b) | ExtConcept::Forall(r, b) => {
                collect_role_identifiers(r, out);
                b.collect_identifiers(out);
            }
            ExtConcept::AtMost(_, r, b) | ExtConcept::AtLeast(_, r, b) => {
                collect_role_identifiers(r, out);
                b.collect_identifiers(out);
            }
            ExtConcept::Mu(v, b) | ExtConcept::Nu(v, b) => {
                out.insert(v.clone());
                b.collect_identifiers(out);
            }
            ExtConcept::Wf(r) => collect_role_identifiers(r, out),
        }
    }
}

fn collect_role_identifiers(r: &RoleExpr, out: &mut BTreeSet<String>) {
    match r {
        RoleExpr::Atomic(n) => {
            out.insert(n.clone());
        }
        RoleExpr::Chain(a, b) | RoleExpr::Union(a, b) => {
            collect_role_identifiers(a, out);
            collect_role_identifiers(b, out);
        }
        RoleExpr::Star(a) => collect_role_identifiers(a, out),
        RoleExpr::IdTest(c) => c.collect_identifiers(out),
    }
}

struct Desugarer {
    used: BTreeSet<String>,
}

impl Desugarer {
    /// Binder names for star expansions: `X`, `X'`, `X''`, ... skipping
    /// anything that already occurs in the input.
    fn fresh_var(&mut self) -> String {
        let mut candidate = "X".to_string();
        while self.used.contains(&candidate) {
            candidate.push('\'');
        }
        self.used.insert(candidate.clone());
        candidate
    }

    fn concept(&mut self, c: &ExtConcept) -> Result<Concept, SyntaxError> {
        Ok(match c {
            ExtConcept::Atomic(n) => Concept::Atomic(n.clone()),
            ExtConcept::Var(n) => Concept::Var(n.clone()),
            ExtConcept::Top => Concept::Top,
            ExtConcept::Bot => Concept::Bot,
            ExtConcept::Not(b) => Concept::not(self.concept(b)?),
            ExtConcept::And(a, b) => Concept::and(self.concept(a)?, self.concept(b)?),
            ExtConcept::Or(a, b) => Concept::or(self.concept(a)?, self.concept(b)?),
            ExtConcept::Exists(r, b) => {
                let body = self.concept(b)?;
                self.exists(r, body)?
            }
            ExtConcept::Forall(r, b) => {
                let body = self.concept(b)?;
                self.forall(r, body)?
            }
            ExtConcept::AtMost(n, r, b) => match r {
                RoleExpr::Atomic(name) => Concept::at_most(*n, name.clone(), self.concept(b)?),
                other => {
                    return Err(SyntaxError::UnsupportedRole {
                        role: other.to_string(),
                    })
                }
            },
            ExtConcept::AtLeast(n, r, b) => match r {
                RoleExpr::Atomic(name) => Concept::at_least(*n, name.clone(), self.concept(b)?),
                other => {
                    return Err(SyntaxError::UnsupportedRole {
                        role: other.to_string(),
                    })
                }
            },
            ExtConcept::Mu(v, b) => Concept::mu(v.clone(), self.concept(b)?),
            ExtConcept::Nu(v, b) => Concept::nu(v.clone(), self.concept(b)?),
            ExtConcept::Wf(r) => {
                let x = self.fresh_var();
                let body = self.forall(r, Concept::var(x.clone()))?;
                Concept::mu(x, body)
            }
        })
    }

    fn exists(&mut self, role: &RoleExpr, c: Concept) -> Result<Concept, SyntaxError> {
        Ok(match role {
            RoleExpr::Atomic(r) => Concept::exists(r.clone(), c),
            RoleExpr::Chain(r1, r2) => {
                let inner = self.exists(r2, c)?;
                self.exists(r1, inner)?
            }
            RoleExpr::Union(r1, r2) => {
                Concept::or(self.exists(r1, c.clone())?, self.exists(r2, c)?)
            }
            RoleExpr::Star(r) => {
                let x = self.fresh_var();
                let step = self.exists(r, Concept::var(x.clone()))?;
                Concept::mu(x, Concept::or(c, step))
            }
            RoleExpr::IdTest(d) => Concept::and(c, self.concept(d)?),
        })
    }

    fn forall(&mut self, role: &RoleExpr, c: Concept) -> Result<Concept, SyntaxError> {
        Ok(match role {
            RoleExpr::Atomic(r) => Concept::forall(r.clone(), c),
            RoleExpr::Chain(r1, r2) => {
                let inner = self.forall(r2, c)?;
                self.forall(r1, inner)?
            }
            RoleExpr::Union(r1, r2) => {
                Concept::and(self.forall(r1, c.clone())?, self.forall(r2, c)?)
            }
            RoleExpr::Star(r) => {
                let x = self.fresh_var();
                let step = self.forall(r, Concept::var(x.clone()))?;
                Concept::nu(x, Concept::and(c, step))
            }
            // forall id(D). C  =  not exists id(D). not C  =  C or not D
            RoleExpr::IdTest(d) => Concept::or(c, Concept::not(self.concept(d)?)),
        })
    }
}

/// Eliminates all role operators:
///
/// - `exists (r ; s). C` becomes `exists r. exists s. C`,
/// - `exists (r | s). C` becomes `exists r. C or exists s. C`,
/// - `exists r*. C` becomes `mu X. C or exists r. X`,
/// - `exists id(D). C` becomes `C and D`,
/// - the duals for `forall` (`forall r*. C` becomes `nu X. C and forall r. X`),
/// - `wf(R)` becomes `mu X. forall R. X`.
///
/// Number restrictions require an atomic role and are rejected otherwise.
pub fn desugar_pdl(c: &ExtConcept) -> Result<Concept, SyntaxError> {
    let mut used = BTreeSet::new();
    c.collect_identifiers(&mut used);
    let mut d = Desugarer { used };
    d.concept(c)
}

/// Renames binders so that every bound variable name occurs at most once.
/// Role-union desugaring duplicates subtrees, so this restores the
/// unique-binder invariant guaranteed by the parser.
pub(crate) fn uniquify_binders(c: &Concept) -> Concept {
    fn walk(c: &Concept, taken: &mut BTreeSet<String>) -> Concept {
        match c {
            Concept::Atomic(_) | Concept::Var(_) | Concept::Top | Concept::Bot => c.clone(),
            Concept::Not(b) => Concept::not(walk(b, taken)),
            Concept::And(a, b) => Concept::and(walk(a, taken), walk(b, taken)),
            Concept::Or(a, b) => Concept::or(walk(a, taken), walk(b, taken)),
            Concept::Exists(r, b) => Concept::exists(r.clone(), walk(b, taken)),
            Concept::Forall(r, b) => Concept::forall(r.clone(), walk(b, taken)),
            Concept::AtMost(n, r, b) => Concept::at_most(*n, r.clone(), walk(b, taken)),
            Concept::AtLeast(n, r, b) => Concept::at_least(*n, r.clone(), walk(b, taken)),
            Concept::Mu(v, b) | Concept::Nu(v, b) => {
                let name = if taken.contains(v) {
                    super::fresh_name(v, taken)
                } else {
                    v.clone()
                };
                taken.insert(name.clone());
                let body = if name == *v {
                    walk(b, taken)
                } else {
                    walk(&super::substitute(b, v, &Concept::var(name.clone())), taken)
                };
                match c {
                    Concept::Mu(..) => Concept::mu(name, body),
                    _ => Concept::nu(name, body),
                }
            }
        }
    }
    let mut taken = super::free_variables(c);
    walk(c, &mut taken)
}
