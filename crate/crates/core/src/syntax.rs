//! Concrete syntax for Boolean formulas over named atoms.
//!
//! ```text
//! expr  := term ('|' term)*
//! term  := unary ('&' unary)*
//! unary := '!' unary | '(' expr ')' | 'true' | 'false' | IDENT
//! ```
//!
//! `!` binds tightest, then `&`, then `|`. Identifiers are runs of
//! ASCII letters, digits and `_ . ' -`. The words `true` and `false` are
//! reserved.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoolExpr {
    Const(bool),
    Atom(String),
    Not(Box<BoolExpr>),
    And(Vec<BoolExpr>),
    Or(Vec<BoolExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at column {column}: {reason}")]
pub struct SyntaxError {
    pub column: usize,
    pub reason: String,
}

pub fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '\'' | '-')
}

/// True when `name` can be written as an atom in this syntax.
pub fn is_valid_ident(name: &str) -> bool {
    !name.is_empty() && name.chars().all(is_ident_char) && name != "true" && name != "false"
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Not,
    And,
    Or,
    Open,
    Close,
}

fn tokenize(input: &str) -> Result<Vec<(usize, Token)>, SyntaxError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = input.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '!' => Token::Not,
            '&' => Token::And,
            '|' => Token::Or,
            '(' => Token::Open,
            ')' => Token::Close,
            c if is_ident_char(c) => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i].1) {
                    i += 1;
                }
                let word: String = chars[start..i].iter().map(|&(_, c)| c).collect();
                out.push((pos + 1, Token::Ident(word)));
                continue;
            }
            other => {
                return Err(SyntaxError {
                    column: pos + 1,
                    reason: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((pos + 1, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(c, _)| *c)
    }

    fn error<T>(&self, reason: &str) -> Result<T, SyntaxError> {
        Err(SyntaxError {
            column: self.column(),
            reason: reason.to_string(),
        })
    }

    fn expr(&mut self) -> Result<BoolExpr, SyntaxError> {
        let mut parts = vec![self.term()?];
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            parts.push(self.term()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            BoolExpr::Or(parts)
        })
    }

    fn term(&mut self) -> Result<BoolExpr, SyntaxError> {
        let mut parts = vec![self.unary()?];
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            BoolExpr::And(parts)
        })
    }

    fn unary(&mut self) -> Result<BoolExpr, SyntaxError> {
        match self.peek().cloned() {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(BoolExpr::Not(Box::new(self.unary()?)))
            }
            Some(Token::Open) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::Close) {
                    return self.error("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Token::Ident(word)) => {
                self.pos += 1;
                Ok(match word.as_str() {
                    "true" => BoolExpr::Const(true),
                    "false" => BoolExpr::Const(false),
                    _ => BoolExpr::Atom(word),
                })
            }
            Some(_) => self.error("expected an atom, `!` or `(`"),
            None => self.error("unexpected end of input"),
        }
    }
}

pub fn parse(input: &str) -> Result<BoolExpr, SyntaxError> {
    let tokens = tokenize(input)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: input.len() + 1,
    };
    let expr = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return parser.error("trailing input");
    }
    Ok(expr)
}

impl BoolExpr {
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        // prec: 0 = top / inside `|`, 1 = inside `&`, 2 = under `!`
        match self {
            BoolExpr::Const(b) => write!(f, "{b}"),
            BoolExpr::Atom(a) => write!(f, "{a}"),
            BoolExpr::Not(x) => {
                write!(f, "!")?;
                x.fmt_prec(f, 2)
            }
            BoolExpr::And(xs) if xs.is_empty() => write!(f, "true"),
            BoolExpr::Or(xs) if xs.is_empty() => write!(f, "false"),
            BoolExpr::And(xs) => join(f, xs, " & ", prec, 1),
            BoolExpr::Or(xs) => join(f, xs, " | ", prec, 0),
        }
    }
}

fn join(f: &mut fmt::Formatter<'_>, xs: &[BoolExpr], sep: &str, prec: u8, level: u8) -> fmt::Result {
    if xs.len() == 1 {
        return xs[0].fmt_prec(f, prec);
    }
    let paren = prec > level;
    if paren {
        write!(f, "(")?;
    }
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            write!(f, "{sep}")?;
        }
        x.fmt_prec(f, level + 1)?;
    }
    if paren {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
