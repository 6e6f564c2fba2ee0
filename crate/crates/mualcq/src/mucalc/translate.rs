//! Translations from concepts to mu-calculus formulae.
//!
//! `translate_q` is the one-to-one, size-preserving map for concepts without
//! number restrictions. `translate_u` targets the deterministic mu-calculus:
//! every relation is read as a partial function, each source role `R` gets a
//! fresh sibling-chain role `R_new`, and a quantifier over `R` becomes a
//! quantifier over the chain `R` then `R_new*`. Number restrictions turn into
//! counting constraints along that chain, with `n` coded in unary. The `*`
//! and `+` abbreviations are expanded eagerly, so the output is plain
//! [`MuFormula`] syntax.

use std::collections::{BTreeMap, BTreeSet};

use super::{MuFormula, MucalcError};
use crate::syntax::Concept;

/// Output of [`translate_u`]: the formula plus the fresh sibling-chain role
/// chosen for each source role.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationResult {
    pub formula: MuFormula,
    pub fresh_roles: BTreeMap<String, String>,
}

/// Structural translation of a concept without number restrictions: atomic
/// concepts to atoms, roles to labels, `exists`/`forall` to diamond/box,
/// fixpoints preserved. The output has exactly as many AST nodes as the
/// input.
pub fn translate_q(c: &Concept) -> Result<MuFormula, MucalcError> {
    Ok(match c {
        Concept::Atomic(a) => MuFormula::atom(a.clone()),
        Concept::Var(x) => MuFormula::var(x.clone()),
        Concept::Top => MuFormula::Top,
        Concept::Bot => MuFormula::Bot,
        Concept::Not(b) => MuFormula::not(translate_q(b)?),
        Concept::And(a, b) => MuFormula::and(translate_q(a)?, translate_q(b)?),
        Concept::Or(a, b) => MuFormula::or(translate_q(a)?, translate_q(b)?),
        Concept::Exists(r, b) => MuFormula::diamond(r.clone(), translate_q(b)?),
        Concept::Forall(r, b) => MuFormula::boxed(r.clone(), translate_q(b)?),
        Concept::AtMost(..) | Concept::AtLeast(..) => {
            return Err(MucalcError::NumberRestrictionPresent)
        }
        Concept::Mu(x, b) => MuFormula::mu(x.clone(), translate_q(b)?),
        Concept::Nu(x, b) => MuFormula::nu(x.clone(), translate_q(b)?),
    })
}

/// Deterministic fresh name for the sibling-chain role of `base`: `base_new`,
/// with numeric suffixes on collision with `used`.
pub fn fresh_role_name(base: &str, used: &BTreeSet<String>) -> String {
    let candidate = format!("{base}_new");
    if !used.contains(&candidate) {
        return candidate;
    }
    let mut k = 1usize;
    loop {
        let candidate = format!("{base}_new{k}");
        if !used.contains(&candidate) {
            return candidate;
        }
        k += 1;
    }
}

/// Fresh chain roles for every role of `c`, in sorted role order.
pub fn fresh_role_map(c: &Concept) -> BTreeMap<String, String> {
    let roles = c.roles();
    let mut used: BTreeSet<String> = roles.clone();
    let mut map = BTreeMap::new();
    for role in roles {
        let fresh = fresh_role_name(&role, &used);
        used.insert(fresh.clone());
        map.insert(role, fresh);
    }
    map
}

struct UTranslator {
    fresh_roles: BTreeMap<String, String>,
    var_pool: BTreeSet<String>,
    next_var: usize,
}

impl UTranslator {
    fn fresh_var(&mut self) -> String {
        loop {
            let candidate = if self.next_var == 0 {
                "Z".to_string()
            } else {
                format!("Z{}", self.next_var)
            };
            self.next_var += 1;
            if !self.var_pool.contains(&candidate) {
                self.var_pool.insert(candidate.clone());
                return candidate;
            }
        }
    }

    fn chain_role(&self, r: &str) -> String {
        self.fresh_roles
            .get(r)
            .cloned()
            .expect("fresh roles are preallocated for every role of the input")
    }

    /// `<label*> f` expanded: `mu Z. f | <label> Z`.
    fn diamond_star(&mut self, label: &str, f: MuFormula) -> MuFormula {
        let z = self.fresh_var();
        MuFormula::mu(
            z.clone(),
            MuFormula::or(f, MuFormula::diamond(label, MuFormula::var(z))),
        )
    }

    /// `[label*] f` expanded: `nu Z. f & [label] Z`.
    fn box_star(&mut self, label: &str, f: MuFormula) -> MuFormula {
        let z = self.fresh_var();
        MuFormula::nu(
            z.clone(),
            MuFormula::and(f, MuFormula::boxed(label, MuFormula::var(z))),
        )
    }

    /// `<label+> f` = `<label> <label*> f`.
    fn diamond_plus(&mut self, label: &str, f: MuFormula) -> MuFormula {
        let star = self.diamond_star(label, f);
        MuFormula::diamond(label, star)
    }

    /// `[label+] f` = `[label] [label*] f`.
    fn box_plus(&mut self, label: &str, f: MuFormula) -> MuFormula {
        let star = self.box_star(label, f);
        MuFormula::boxed(label, star)
    }

    fn go(&mut self, c: &Concept) -> MuFormula {
        match c {
            Concept::Atomic(a) => MuFormula::atom(a.clone()),
            Concept::Var(x) => MuFormula::var(x.clone()),
            Concept::Top => MuFormula::Top,
            Concept::Bot => MuFormula::Bot,
            Concept::Not(b) => MuFormula::not(self.go(b)),
            Concept::And(a, b) => MuFormula::and(self.go(a), self.go(b)),
            Concept::Or(a, b) => MuFormula::or(self.go(a), self.go(b)),
            Concept::Exists(r, b) => {
                let body = self.go(b);
                let chain = self.chain_role(r);
                let star = self.diamond_star(&chain, body);
                MuFormula::diamond(r.clone(), star)
            }
            Concept::Forall(r, b) => {
                let body = self.go(b);
                let chain = self.chain_role(r);
                let star = self.box_star(&chain, body);
                MuFormula::boxed(r.clone(), star)
            }
            // atmost n R. C — everywhere along the chain R then R_new* there
            // are at most n states satisfying the qualifier: n nested blocks
            // of the form ~f | [R_new+] _ around a final ~f.
            Concept::AtMost(n, r, b) => {
                let phi = self.go(b);
                let chain = self.chain_role(r);
                let mut nest = MuFormula::not(phi.clone());
                for _ in 0..*n {
                    let plus = self.box_plus(&chain, nest);
                    nest = MuFormula::or(MuFormula::not(phi.clone()), plus);
                }
                let star = self.box_star(&chain, nest);
                MuFormula::boxed(r.clone(), star)
            }
            // atleast n R. C — somewhere along the chain there are at least n
            // states satisfying the qualifier: n-1 nested blocks of the form
            // f & <R_new+> _ around a final f. atleast 0 is trivially true.
            Concept::AtLeast(n, r, b) => {
                if *n == 0 {
                    return MuFormula::Top;
                }
                let phi = self.go(b);
                let chain = self.chain_role(r);
                let mut nest = phi.clone();
                for _ in 0..(*n - 1) {
                    let plus = self.diamond_plus(&chain, nest);
                    nest = MuFormula::and(phi.clone(), plus);
                }
                let star = self.diamond_star(&chain, nest);
                MuFormula::diamond(r.clone(), star)
            }
            Concept::Mu(x, b) => MuFormula::mu(x.clone(), self.go(b)),
            Concept::Nu(x, b) => MuFormula::nu(x.clone(), self.go(b)),
        }
    }
}

/// Translates any well-formed concept to a formula of the deterministic
/// mu-calculus; satisfiability is preserved when both each role and its fresh
/// chain role are read as partial functions.
pub fn translate_u(c: &Concept) -> TranslationResult {
    let fresh_roles = fresh_role_map(c);
    let mut var_pool = c.identifiers();
    var_pool.extend(fresh_roles.values().cloned());
    let mut tr = UTranslator {
        fresh_roles,
        var_pool,
        next_var: 0,
    };
    let formula = tr.go(c);
    TranslationResult {
        formula,
        fresh_roles: tr.fresh_roles,
    }
}
