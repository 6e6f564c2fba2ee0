//! Pretty printer with minimal parenthesization.
//!
//! `parse_concept(print_concept(c))` is alpha-equivalent to `c`. Two things
//! make that work beyond plain precedence handling: binder bodies extend
//! maximally right, so a binder appearing left of an `and`/`or` operand must
//! be parenthesized; and binders whose name collides with an atomic concept
//! or a free variable are renamed before printing, since the reader would
//! otherwise capture those identifiers. Concepts with free variables are
//! printed with a `free X, Y;` header.

use std::collections::BTreeSet;

use super::{free_variables, fresh_name, substitute, Concept};

/// Renders `c` in the surface syntax; see the module docs for the round-trip
/// guarantee.
pub fn print_concept(c: &Concept) -> String {
    let free = free_variables(c);
    let mut reserved: BTreeSet<String> = c.atomic_concepts();
    reserved.extend(free.iter().cloned());
    let safe = rename_clashing_binders(c, &reserved);

    let mut out = String::new();
    if !free.is_empty() {
        let names: Vec<&str> = free.iter().map(String::as_str).collect();
        out.push_str("free ");
        out.push_str(&names.join(", "));
        out.push_str("; ");
    }
    show(&safe, &mut out, Prec::Or, true);
    out
}

/// Binders named like an atomic concept or free variable would be re-read as
/// capturing those occurrences; give them fresh names first.
fn rename_clashing_binders(c: &Concept, reserved: &BTreeSet<String>) -> Concept {
    match c {
        Concept::Atomic(_) | Concept::Var(_) | Concept::Top | Concept::Bot => c.clone(),
        Concept::Not(b) => Concept::not(rename_clashing_binders(b, reserved)),
        Concept::And(a, b) => Concept::and(
            rename_clashing_binders(a, reserved),
            rename_clashing_binders(b, reserved),
        ),
        Concept::Or(a, b) => Concept::or(
            rename_clashing_binders(a, reserved),
            rename_clashing_binders(b, reserved),
        ),
        Concept::Exists(r, b) => Concept::exists(r.clone(), rename_clashing_binders(b, reserved)),
        Concept::Forall(r, b) => Concept::forall(r.clone(), rename_clashing_binders(b, reserved)),
        Concept::AtMost(n, r, b) => {
            Concept::at_most(*n, r.clone(), rename_clashing_binders(b, reserved))
        }
        Concept::AtLeast(n, r, b) => {
            Concept::at_least(*n, r.clone(), rename_clashing_binders(b, reserved))
        }
        Concept::Mu(v, b) | Concept::Nu(v, b) => {
            let (name, body) = if reserved.contains(v) {
                let mut avoid = reserved.clone();
                avoid.extend(b.identifiers());
                let fresh = fresh_name(v, &avoid);
                (
                    fresh.clone(),
                    substitute(b, v, &Concept::var(fresh)),
                )
            } else {
                (v.clone(), (**b).clone())
            };
            let body = rename_clashing_binders(&body, reserved);
            match c {
                Concept::Mu(..) => Concept::mu(name, body),
                _ => Concept::nu(name, body),
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Or = 1,
    And = 2,
    Unary = 3,
    Atom = 4,
}

fn prec(c: &Concept) -> Prec {
    match c {
        Concept::Or(..) => Prec::Or,
        Concept::And(..) => Prec::And,
        Concept::Not(_)
        | Concept::Exists(..)
        | Concept::Forall(..)
        | Concept::AtMost(..)
        | Concept::AtLeast(..)
        | Concept::Mu(..)
        | Concept::Nu(..) => Prec::Unary,
        Concept::Atomic(_) | Concept::Var(_) | Concept::Top | Concept::Bot => Prec::Atom,
    }
}

/// Whether the rightmost spine of `c` ends in a binder, whose body would
/// swallow any following `and`/`or` operand.
fn right_open(c: &Concept) -> bool {
    match c {
        Concept::Mu(..) | Concept::Nu(..) => true,
        Concept::Not(b)
        | Concept::Exists(_, b)
        | Concept::Forall(_, b)
        | Concept::AtMost(_, _, b)
        | Concept::AtLeast(_, _, b) => right_open(b),
        Concept::And(_, b) | Concept::Or(_, b) => right_open(b),
        _ => false,
    }
}

/// `min` is the precedence the context requires; `delimited` says whether the
/// context closes the expression on the right (end of input or `)`).
fn show(c: &Concept, out: &mut String, min: Prec, delimited: bool) {
    let parens = prec(c) < min || (!delimited && right_open(c));
    if parens {
        out.push('(');
    }
    let inner_delim = delimited || parens;
    match c {
        Concept::Atomic(n) | Concept::Var(n) => out.push_str(n),
        Concept::Top => out.push_str("top"),
        Concept::Bot => out.push_str("bot"),
        Concept::Or(a, b) => {
            show(a, out, Prec::Or, false);
            out.push_str(" or ");
            show(b, out, Prec::And, inner_delim);
        }
        Concept::And(a, b) => {
            show(a, out, Prec::And, false);
            out.push_str(" and ");
            show(b, out, Prec::Unary, inner_delim);
        }
        Concept::Not(b) => {
            out.push_str("not ");
            show(b, out, Prec::Unary, inner_delim);
        }
        Concept::Exists(r, b) => {
            out.push_str("exists ");
            out.push_str(r);
            out.push_str(". ");
            show(b, out, Prec::Unary, inner_delim);
        }
        Concept::Forall(r, b) => {
            out.push_str("forall ");
            out.push_str(r);
            out.push_str(". ");
            show(b, out, Prec::Unary, inner_delim);
        }
        Concept::AtMost(n, r, b) => {
            out.push_str(&format!("atmost {n} {r}. "));
            show(b, out, Prec::Unary, inner_delim);
        }
        Concept::AtLeast(n, r, b) => {
            out.push_str(&format!("atleast {n} {r}. "));
            show(b, out, Prec::Unary, inner_delim);
        }
        Concept::Mu(v, b) => {
            out.push_str("mu ");
            out.push_str(v);
            out.push_str(". ");
            show(b, out, Prec::Or, inner_delim);
        }
        Concept::Nu(v, b) => {
            out.push_str("nu ");
            out.push_str(v);
            out.push_str(". ");
            show(b, out, Prec::Or, inner_delim);
        }
    }
    if parens {
        out.push(')');
    }
}
