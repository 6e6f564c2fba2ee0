//! Tokenizer for the concept, TBox and model surface syntaxes.

use super::SyntaxError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Nat(u32),
    Top,
    Bot,
    Not,
    And,
    Or,
    Exists,
    Forall,
    AtLeast,
    AtMost,
    Mu,
    Nu,
    Wf,
    Id,
    Free,
    Dot,
    Comma,
    Semi,
    LParen,
    RParen,
    Star,
    Pipe,
    /// PDL converse marker `^-`; recognized so it can be rejected with a
    /// dedicated diagnostic.
    Inverse,
    /// `<=`
    SubsumedBy,
    /// `==`
    Equiv,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Nat(n) => format!("number `{n}`"),
            Tok::Top => "`top`".into(),
            Tok::Bot => "`bot`".into(),
            Tok::Not => "`not`".into(),
            Tok::And => "`and`".into(),
            Tok::Or => "`or`".into(),
            Tok::Exists => "`exists`".into(),
            Tok::Forall => "`forall`".into(),
            Tok::AtLeast => "`atleast`".into(),
            Tok::AtMost => "`atmost`".into(),
            Tok::Mu => "`mu`".into(),
            Tok::Nu => "`nu`".into(),
            Tok::Wf => "`wf`".into(),
            Tok::Id => "`id`".into(),
            Tok::Free => "`free`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Star => "`*`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Inverse => "`^-`".into(),
            Tok::SubsumedBy => "`<=`".into(),
            Tok::Equiv => "`==`".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "top" => Tok::Top,
        "bot" => Tok::Bot,
        "not" => Tok::Not,
        "and" => Tok::And,
        "or" => Tok::Or,
        "exists" => Tok::Exists,
        "forall" => Tok::Forall,
        "atleast" => Tok::AtLeast,
        "atmost" => Tok::AtMost,
        "mu" => Tok::Mu,
        "nu" => Tok::Nu,
        "wf" => Tok::Wf,
        "id" => Tok::Id,
        "free" => Tok::Free,
        _ => return None,
    })
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Tokenizes `text`, with 1-based line/column positions. `#` starts a comment
/// running to end of line.
pub fn lex(text: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else if c.is_some() {
                col += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump!();
            }
            continue;
        }
        if is_ident_start(c) {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if is_ident_continue(c) {
                    word.push(c);
                    bump!();
                } else {
                    break;
                }
            }
            let tok = keyword(&word).unwrap_or(Tok::Ident(word));
            out.push(Spanned { tok, line: tl, col: tc });
            continue;
        }
        if c.is_ascii_digit() {
            let mut num = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_digit() {
                    num.push(c);
                    bump!();
                } else {
                    break;
                }
            }
            let n: u32 = num.parse().map_err(|_| SyntaxError::Parse {
                line: tl,
                col: tc,
                message: format!("number `{num}` out of range"),
            })?;
            out.push(Spanned { tok: Tok::Nat(n), line: tl, col: tc });
            continue;
        }
        let single = match c {
            '.' => Some(Tok::Dot),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '*' => Some(Tok::Star),
            '|' => Some(Tok::Pipe),
            _ => None,
        };
        if let Some(tok) = single {
            bump!();
            out.push(Spanned { tok, line: tl, col: tc });
            continue;
        }
        match c {
            '<' => {
                bump!();
                if chars.peek() == Some(&'=') {
                    bump!();
                    out.push(Spanned { tok: Tok::SubsumedBy, line: tl, col: tc });
                } else {
                    return Err(SyntaxError::Parse {
                        line: tl,
                        col: tc,
                        message: "expected `<=`".into(),
                    });
                }
            }
            '=' => {
                bump!();
                if chars.peek() == Some(&'=') {
                    bump!();
                    out.push(Spanned { tok: Tok::Equiv, line: tl, col: tc });
                } else {
                    return Err(SyntaxError::Parse {
                        line: tl,
                        col: tc,
                        message: "expected `==`".into(),
                    });
                }
            }
            '^' => {
                bump!();
                if chars.peek() == Some(&'-') {
                    bump!();
                    out.push(Spanned { tok: Tok::Inverse, line: tl, col: tc });
                } else {
                    return Err(SyntaxError::Parse {
                        line: tl,
                        col: tc,
                        message: "stray `^`".into(),
                    });
                }
            }
            other => {
                return Err(SyntaxError::Parse {
                    line: tl,
                    col: tc,
                    message: format!("unexpected character `{other}`"),
                });
            }
        }
    }
    Ok(out)
}
