//! Recursive-descent parser for the concrete formula syntax.
//!
//! ```text
//! formula := impl
//! impl    := or ("->" impl)?
//! or      := and (("||" | "or") and)*
//! and     := since (("&&" | "and") since)*
//! since   := unary ("since" bound? unary)?
//! unary   := ("!" | "not" | "pre" | "once" bound? | "historically" bound?) unary | atom
//! atom    := "true" | "false" | ident | "(" formula ")"
//! bound   := "[" number ":" (number | "inf") "]"
//! ```
//!
//! `since` does not associate: `a since b since c` is rejected and must be
//! parenthesized.

use thiserror::Error;

use super::{Formula, TimeBound, TimeModel};
use crate::time::Time;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty formula")]
    Empty,
    #[error("at {position}: expected {expected}, found {found}")]
    Syntax {
        position: usize,
        expected: String,
        found: String,
    },
    #[error("at {position}: bound `{value}` must be a non-negative integer in discrete mode")]
    NonIntegerBound { position: usize, value: String },
    #[error("at {position}: lower bound {lower} exceeds upper bound {upper}")]
    InvertedBound {
        position: usize,
        lower: String,
        upper: String,
    },
    #[error("at {position}: invalid number `{value}`")]
    BadNumber { position: usize, value: String },
}

impl ParseError {
    pub fn position(&self) -> Option<usize> {
        match self {
            ParseError::Empty => None,
            ParseError::Syntax { position, .. }
            | ParseError::NonIntegerBound { position, .. }
            | ParseError::InvertedBound { position, .. }
            | ParseError::BadNumber { position, .. } => Some(*position),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(String),
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Colon,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::Not => "`!`".into(),
            Tok::And => "`&&`".into(),
            Tok::Or => "`||`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

const KEYWORDS: &[&str] = &[
    "true",
    "false",
    "not",
    "and",
    "or",
    "pre",
    "since",
    "once",
    "historically",
    "inf",
];

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let two = bytes.get(i..i + 2);
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'!' => {
                i += 1;
                Tok::Not
            }
            b'(' => {
                i += 1;
                Tok::LParen
            }
            b')' => {
                i += 1;
                Tok::RParen
            }
            b'[' => {
                i += 1;
                Tok::LBracket
            }
            b']' => {
                i += 1;
                Tok::RBracket
            }
            b':' => {
                i += 1;
                Tok::Colon
            }
            b'&' if two == Some(b"&&") => {
                i += 2;
                Tok::And
            }
            b'|' if two == Some(b"||") => {
                i += 2;
                Tok::Or
            }
            b'-' if two == Some(b"->") => {
                i += 2;
                Tok::Arrow
            }
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                Tok::Number(text[start..i].to_string())
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..i].to_string())
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    position: i,
                    expected: "a formula token".into(),
                    found: format!("`{ch}`"),
                });
            }
        };
        out.push((start, tok));
    }
    out.push((text.len(), Tok::Eof));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    model: TimeModel,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError::Syntax {
            position: self.offset(),
            expected: expected.to_string(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(expected))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or || self.is_kw("or") {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.since()?;
        while *self.peek() == Tok::And || self.is_kw("and") {
            self.bump();
            let rhs = self.since()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn since(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if !self.is_kw("since") {
            return Ok(lhs);
        }
        self.bump();
        let bound = self.opt_bound()?;
        let rhs = self.unary()?;
        if self.is_kw("since") {
            return Err(self.error("a binary connective or `)` (`since` needs parentheses to nest)"));
        }
        Ok(Formula::since(lhs, rhs, bound))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Ident(kw) => match kw.as_str() {
                "not" => {
                    self.bump();
                    Ok(Formula::not(self.unary()?))
                }
                "pre" => {
                    self.bump();
                    Ok(Formula::pre(self.unary()?))
                }
                "once" => {
                    self.bump();
                    let bound = self.opt_bound()?;
                    Ok(Formula::once(self.unary()?, bound))
                }
                "historically" => {
                    self.bump();
                    let bound = self.opt_bound()?;
                    Ok(Formula::historically(self.unary()?, bound))
                }
                _ => self.atom(),
            },
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(name) => match name.as_str() {
                "true" => {
                    self.bump();
                    Ok(Formula::True)
                }
                "false" => {
                    self.bump();
                    Ok(Formula::False)
                }
                kw if KEYWORDS.contains(&kw) => Err(self.error("a proposition or `(`")),
                _ => {
                    self.bump();
                    Ok(Formula::Prop(name))
                }
            },
            _ => Err(self.error("a proposition, `true`, `false`, a unary operator or `(`")),
        }
    }

    fn opt_bound(&mut self) -> Result<Option<TimeBound>, ParseError> {
        if *self.peek() != Tok::LBracket {
            return Ok(None);
        }
        let open = self.offset();
        self.bump();
        let lower = self.number()?;
        self.expect(Tok::Colon, "`:`")?;
        let upper = if self.is_kw("inf") {
            self.bump();
            None
        } else {
            Some(self.number()?)
        };
        self.expect(Tok::RBracket, "`]`")?;
        if let Some(u) = upper {
            if lower > u {
                return Err(ParseError::InvertedBound {
                    position: open,
                    lower: lower.to_string(),
                    upper: u.to_string(),
                });
            }
        }
        Ok(Some(TimeBound::new(lower, upper)))
    }

    fn number(&mut self) -> Result<Time, ParseError> {
        let position = self.offset();
        let Tok::Number(text) = self.peek().clone() else {
            return Err(self.error("a number"));
        };
        self.bump();
        let value: Time = text.parse().map_err(|_| ParseError::BadNumber {
            position,
            value: text.clone(),
        })?;
        if self.model == TimeModel::Discrete && !value.is_integer() {
            return Err(ParseError::NonIntegerBound { position, value: text });
        }
        Ok(value)
    }
}

/// Parses `text` for the given time model. Discrete mode only accepts
/// integral bounds; `pre` is accepted in both modes and rejected later by
/// the dense compiler.
pub fn parse(text: &str, model: TimeModel) -> Result<Formula, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        model,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error("end of input"));
    }
    Ok(f)
}
