//! Recursive-descent parser.
//!
//! ```text
//! formula := equiv ; equiv := impl ("<->" impl)* ; impl := or ("->" impl)? ;
//! or := and ("|" and)* ; and := unary ("&" unary)* ;
//! unary := ("~" | "#" | "[]") unary | atom ;
//! atom := "0" | "1" | "rho" | "sigma" | ident | "(" formula ")"
//! ```
//!
//! `[]A` and `A <-> B` are expanded while parsing.

use thiserror::Error;

use super::Formula;
use crate::algebra::Element;

const RESERVED: [&str; 2] = ["rho", "sigma"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character `{ch}` at {pos}")]
    Lexical { pos: usize, ch: char },
    #[error("bad numeral `{text}` at {pos} (only 0 and 1 are constants)")]
    Numeral { pos: usize, text: String },
    #[error("unclosed `(` opened at {pos}")]
    Unclosed { pos: usize },
    #[error("unmatched `)` at {pos}")]
    Unmatched { pos: usize },
    #[error("expected {expected} at {pos}, found {found}")]
    Unexpected {
        pos: usize,
        expected: &'static str,
        found: String,
    },
    #[error("`{word}` at {pos} is reserved and cannot be used as a variable")]
    Reserved { pos: usize, word: String },
}

/// Whether `name` is usable as a variable.
pub fn is_valid_var_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !RESERVED.contains(&name)
}

/// Checks a variable name, reporting reserved words.
pub fn check_var_name(name: &str, pos: usize) -> Result<(), ParseError> {
    if RESERVED.contains(&name) {
        return Err(ParseError::Reserved {
            pos,
            word: name.to_string(),
        });
    }
    if !is_valid_var_name(name) {
        return Err(ParseError::Unexpected {
            pos,
            expected: "a variable name",
            found: format!("`{name}`"),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Const(Element),
    Not,
    Delta,
    Box,
    And,
    Or,
    Imp,
    Iff,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Const(c) => format!("`{}`", c.formula_name()),
            Tok::Not => "`~`".into(),
            Tok::Delta => "`#`".into(),
            Tok::Box => "`[]`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Imp => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let expect = |i: usize, want: &str| -> bool {
        want.chars()
            .enumerate()
            .all(|(k, c)| chars.get(i + k).map(|&(_, d)| d) == Some(c))
    };
    while i < chars.len() {
        let (pos, c) = chars[i];
        let (tok, width) = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '~' => (Tok::Not, 1),
            '#' => (Tok::Delta, 1),
            '&' => (Tok::And, 1),
            '|' => (Tok::Or, 1),
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '[' if expect(i, "[]") => (Tok::Box, 2),
            '-' if expect(i, "->") => (Tok::Imp, 2),
            '<' if expect(i, "<->") => (Tok::Iff, 3),
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].1.is_ascii_alphanumeric() {
                    j += 1;
                }
                let text: String = chars[i..j].iter().map(|&(_, c)| c).collect();
                let tok = match text.as_str() {
                    "0" => Tok::Const(Element::Zero),
                    "1" => Tok::Const(Element::One),
                    _ => return Err(ParseError::Numeral { pos, text }),
                };
                (tok, j - i)
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < chars.len() && (chars[j].1.is_ascii_alphanumeric() || chars[j].1 == '_') {
                    j += 1;
                }
                let text: String = chars[i..j].iter().map(|&(_, c)| c).collect();
                let tok = match text.as_str() {
                    "rho" => Tok::Const(Element::Rho),
                    "sigma" => Tok::Const(Element::Sigma),
                    _ => Tok::Ident(text),
                };
                (tok, j - i)
            }
            ch => return Err(ParseError::Lexical { pos, ch }),
        };
        out.push((pos, tok));
        i += width;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    open: Vec<usize>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |&(p, _)| p)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match self.peek() {
            None => match self.open.last() {
                Some(&pos) => ParseError::Unclosed { pos },
                None => ParseError::Unexpected {
                    pos: self.end,
                    expected,
                    found: "end of input".into(),
                },
            },
            Some(Tok::RParen) if self.open.is_empty() => ParseError::Unmatched { pos: self.pos() },
            Some(t) => ParseError::Unexpected {
                pos: self.pos(),
                expected,
                found: t.describe(),
            },
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.implication()?;
            lhs = lhs.equiv(rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Imp) {
            let rhs = self.implication()?;
            return Ok(lhs.imp(rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.eat(&Tok::Or) {
            lhs = lhs.or(self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat(&Tok::And) {
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Tok::Not) {
            return Ok(self.unary()?.not());
        }
        if self.eat(&Tok::Delta) {
            return Ok(self.unary()?.delta());
        }
        if self.eat(&Tok::Box) {
            return Ok(self.unary()?.boxed());
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Const(c)) => {
                self.at += 1;
                Ok(Formula::constant(c))
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                Ok(Formula::var(&name))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                self.open.push(pos);
                let inner = self.formula()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.unexpected("`)`"));
                }
                self.open.pop();
                Ok(inner)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

/// Parses a formula.
pub fn parse(src: &str) -> Result<Formula, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: src.len(),
        open: Vec::new(),
    };
    let f = p.formula()?;
    if p.peek().is_some() {
        return Err(p.unexpected("an operator or end of input"));
    }
    Ok(f)
}
