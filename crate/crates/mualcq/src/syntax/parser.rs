//! Recursive-descent parser for concepts and TBoxes.
//!
//! Precedence is `not` over `and` over `or`; quantifier bodies bind tightly
//! (a single `unary`), while `mu`/`nu` bodies extend maximally to the right.
//! An identifier is a variable iff it is bound by an enclosing binder or
//! declared in a leading `free X, Y;` header, otherwise it is an atomic
//! concept. Shadowed binders are renamed at parse time, so bound variable
//! names are unique in the result.

use std::collections::BTreeSet;

use super::lexer::{lex, Spanned, Tok};
use super::pdl::{desugar_pdl, uniquify_binders, ExtConcept, RoleExpr};
use super::{check_well_formed, Concept, SyntaxError, TBox};

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    /// Every identifier occurring anywhere in the input; fresh binder names
    /// must avoid these so that renaming cannot collide with a later binder.
    all_idents: BTreeSet<String>,
    /// Binder names already assigned, plus declared free variables.
    taken: BTreeSet<String>,
    /// Declared free variables.
    free_decls: BTreeSet<String>,
    /// In-scope binders: surface name paired with the name used in the AST.
    scope: Vec<(String, String)>,
}

impl Parser {
    fn new(toks: Vec<Spanned>) -> Self {
        let mut all_idents = BTreeSet::new();
        for t in &toks {
            if let Tok::Ident(name) = &t.tok {
                all_idents.insert(name.clone());
            }
        }
        Parser {
            toks,
            pos: 0,
            all_idents,
            taken: BTreeSet::new(),
            free_decls: BTreeSet::new(),
            scope: Vec::new(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|s| (s.line, s.col))
            .unwrap_or_else(|| {
                self.toks
                    .last()
                    .map(|s| (s.line, s.col + 1))
                    .unwrap_or((1, 1))
            })
    }

    fn error(&self, message: impl Into<String>) -> SyntaxError {
        let (line, col) = self.here();
        SyntaxError::Parse {
            line,
            col,
            message: message.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> SyntaxError {
        match self.peek() {
            Some(tok) => self.error(format!("expected {wanted}, found {}", tok.describe())),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn advance(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<(), SyntaxError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn expect_ident(&mut self, wanted: &str) -> Result<String, SyntaxError> {
        match self.peek() {
            Some(Tok::Ident(_)) => match self.advance() {
                Some(Tok::Ident(name)) => Ok(name),
                _ => unreachable!(),
            },
            _ => Err(self.unexpected(wanted)),
        }
    }

    /// `free X, Y;` header, if present.
    fn free_header(&mut self) -> Result<(), SyntaxError> {
        if self.peek() != Some(&Tok::Free) {
            return Ok(());
        }
        self.pos += 1;
        loop {
            let name = self.expect_ident("a variable name")?;
            self.free_decls.insert(name.clone());
            self.taken.insert(name);
            match self.peek() {
                Some(Tok::Comma) => {
                    self.pos += 1;
                }
                Some(Tok::Semi) => {
                    self.pos += 1;
                    return Ok(());
                }
                _ => return Err(self.unexpected("`,` or `;` in free declaration")),
            }
        }
    }

    fn fresh_binder_name(&mut self, surface: &str) -> String {
        if !self.taken.contains(surface) {
            self.taken.insert(surface.to_string());
            return surface.to_string();
        }
        let mut candidate = format!("{surface}'");
        while self.taken.contains(&candidate) || self.all_idents.contains(&candidate) {
            candidate.push('\'');
        }
        self.taken.insert(candidate.clone());
        candidate
    }

    fn concept(&mut self) -> Result<ExtConcept, SyntaxError> {
        let mut acc = self.and_expr()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            let rhs = self.and_expr()?;
            acc = ExtConcept::Or(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn and_expr(&mut self) -> Result<ExtConcept, SyntaxError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = ExtConcept::And(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn binder(&mut self, is_mu: bool) -> Result<ExtConcept, SyntaxError> {
        let surface = self.expect_ident("a variable name after the binder")?;
        self.expect(Tok::Dot, "`.` after the bound variable")?;
        let actual = self.fresh_binder_name(&surface);
        self.scope.push((surface, actual.clone()));
        let body = self.concept();
        self.scope.pop();
        let body = body?;
        Ok(if is_mu {
            ExtConcept::Mu(actual, Box::new(body))
        } else {
            ExtConcept::Nu(actual, Box::new(body))
        })
    }

    fn unary(&mut self) -> Result<ExtConcept, SyntaxError> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(ExtConcept::Not(Box::new(self.unary()?)))
            }
            Some(Tok::Exists) => {
                self.pos += 1;
                let role = self.role()?;
                self.expect(Tok::Dot, "`.` after the role")?;
                Ok(ExtConcept::Exists(role, Box::new(self.unary()?)))
            }
            Some(Tok::Forall) => {
                self.pos += 1;
                let role = self.role()?;
                self.expect(Tok::Dot, "`.` after the role")?;
                Ok(ExtConcept::Forall(role, Box::new(self.unary()?)))
            }
            Some(Tok::AtLeast) | Some(Tok::AtMost) => {
                let most = self.peek() == Some(&Tok::AtMost);
                self.pos += 1;
                let n = match self.peek() {
                    Some(Tok::Nat(n)) => {
                        let n = *n;
                        self.pos += 1;
                        n
                    }
                    _ => return Err(self.unexpected("a number")),
                };
                let role = self.role()?;
                self.expect(Tok::Dot, "`.` after the role")?;
                let body = Box::new(self.unary()?);
                Ok(if most {
                    ExtConcept::AtMost(n, role, body)
                } else {
                    ExtConcept::AtLeast(n, role, body)
                })
            }
            Some(Tok::Mu) => {
                self.pos += 1;
                self.binder(true)
            }
            Some(Tok::Nu) => {
                self.pos += 1;
                self.binder(false)
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<ExtConcept, SyntaxError> {
        match self.peek() {
            Some(Tok::Top) => {
                self.pos += 1;
                Ok(ExtConcept::Top)
            }
            Some(Tok::Bot) => {
                self.pos += 1;
                Ok(ExtConcept::Bot)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let c = self.concept()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(c)
            }
            Some(Tok::Wf) => {
                self.pos += 1;
                self.expect(Tok::LParen, "`(` after `wf`")?;
                let role = self.role()?;
                self.expect(Tok::RParen, "`)` after the role")?;
                Ok(ExtConcept::Wf(role))
            }
            Some(Tok::Ident(_)) => {
                let name = self.expect_ident("a concept")?;
                // Innermost binder wins; otherwise a declared free variable;
                // otherwise an atomic concept.
                if let Some((_, actual)) =
                    self.scope.iter().rev().find(|(surface, _)| *surface == name)
                {
                    Ok(ExtConcept::Var(actual.clone()))
                } else if self.free_decls.contains(&name) {
                    Ok(ExtConcept::Var(name))
                } else {
                    Ok(ExtConcept::Atomic(name))
                }
            }
            _ => Err(self.unexpected("a concept")),
        }
    }

    fn role(&mut self) -> Result<RoleExpr, SyntaxError> {
        let mut acc = self.role_chain()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.pos += 1;
            let rhs = self.role_chain()?;
            acc = RoleExpr::Union(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn role_chain(&mut self) -> Result<RoleExpr, SyntaxError> {
        let mut acc = self.role_postfix()?;
        while self.peek() == Some(&Tok::Semi) {
            self.pos += 1;
            let rhs = self.role_postfix()?;
            acc = RoleExpr::Chain(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn role_postfix(&mut self) -> Result<RoleExpr, SyntaxError> {
        let mut acc = self.role_atom()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = RoleExpr::Star(Box::new(acc));
                }
                Some(Tok::Inverse) => {
                    let (line, col) = self.here();
                    return Err(SyntaxError::InverseRole { line, col });
                }
                _ => return Ok(acc),
            }
        }
    }

    fn role_atom(&mut self) -> Result<RoleExpr, SyntaxError> {
        match self.peek() {
            Some(Tok::Ident(_)) => Ok(RoleExpr::Atomic(self.expect_ident("a role")?)),
            Some(Tok::Id) => {
                self.pos += 1;
                self.expect(Tok::LParen, "`(` after `id`")?;
                let c = self.concept()?;
                self.expect(Tok::RParen, "`)` after the test concept")?;
                Ok(RoleExpr::IdTest(Box::new(c)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let r = self.role()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(r)
            }
            _ => Err(self.unexpected("a role")),
        }
    }

    fn finish(&self) -> Result<(), SyntaxError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }
}

fn finalize(ext: &ExtConcept) -> Result<Concept, SyntaxError> {
    let core = desugar_pdl(ext)?;
    let core = uniquify_binders(&core);
    check_well_formed(&core)?;
    Ok(core)
}

/// Parses a concept. The input may start with a `free X, Y;` header declaring
/// free variables; every other identifier not bound by an enclosing `mu`/`nu`
/// denotes an atomic concept.
pub fn parse_concept(text: &str) -> Result<Concept, SyntaxError> {
    parse_concept_with_free(text, &[])
}

/// Like [`parse_concept`], with additional free-variable names declared by
/// the caller (merged with any `free` header in the text).
pub fn parse_concept_with_free(text: &str, declared: &[String]) -> Result<Concept, SyntaxError> {
    let mut p = Parser::new(lex(text)?);
    for name in declared {
        p.free_decls.insert(name.clone());
        p.taken.insert(name.clone());
    }
    p.free_header()?;
    let ext = p.concept()?;
    p.finish()?;
    finalize(&ext)
}

/// Parses a TBox: one `C <= D` or `C == D` per line, `#` comments and blank
/// lines skipped. An equivalence contributes both inclusions.
pub fn parse_tbox(text: &str) -> Result<TBox, SyntaxError> {
    let mut pairs = Vec::new();
    for (offset, raw_line) in text.lines().enumerate() {
        let line_no = offset + 1;
        let toks = lex(raw_line)?.into_iter().map(|mut s| {
            s.line = line_no;
            s
        });
        let toks: Vec<Spanned> = toks.collect();
        if toks.is_empty() {
            continue;
        }
        let mut p = Parser::new(toks);
        let lhs_ext = p.concept()?;
        let op = match p.peek() {
            Some(Tok::SubsumedBy) => Tok::SubsumedBy,
            Some(Tok::Equiv) => Tok::Equiv,
            _ => return Err(p.unexpected("`<=` or `==`")),
        };
        p.pos += 1;
        let rhs_ext = p.concept()?;
        p.finish()?;
        let lhs = finalize(&lhs_ext)?;
        let rhs = finalize(&rhs_ext)?;
        pairs.push((lhs.clone(), rhs.clone()));
        if op == Tok::Equiv {
            pairs.push((rhs, lhs));
        }
    }
    TBox::new(pairs)
}
