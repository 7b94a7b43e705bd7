//! Tokenizer and term parser for the script language.
//!
//! ```text
//! expr  := expr ('+'|'-') mul | mul
//! mul   := mul '*' unary | unary
//! unary := '-' unary | atom
//! atom  := NUMBER | IDENT | '(' expr ')'
//!        | 'max(' expr ',' expr ')' | 'min(' expr ',' expr ')' | 'abs(' expr ')'
//! ```
//!
//! A `-` directly followed by a number literal reads as a negative literal,
//! which is how negative constants print.

use std::fmt;

use thiserror::Error;

use crate::term::Term;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("syntax error at line {line}, column {column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Number(f64),
    Flag(String),
    Arrow,
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(v) => write!(f, "number {v:?}"),
            Tok::Flag(s) => write!(f, "flag `--{s}`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

/// A token stream over one source text with on-demand lexing, so callers
/// can take the raw remainder of a line (file paths).
pub struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    peeked: Option<(Tok, usize, usize)>,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Self::at_line(src, 1)
    }

    /// A cursor whose positions report `line` for the first line of `src`.
    pub fn at_line(src: &'a str, line: usize) -> Self {
        Cursor {
            src,
            pos: 0,
            line,
            peeked: None,
        }
    }

    fn location(&self, offset: usize) -> (usize, usize) {
        let before = &self.src[..offset];
        let line = self.line + before.matches('\n').count();
        let column = before.rfind('\n').map_or(before.chars().count(), |i| before[i + 1..].chars().count()) + 1;
        (line, column)
    }

    pub fn error_at(&self, offset: usize, message: impl Into<String>) -> SyntaxError {
        let (line, column) = self.location(offset);
        SyntaxError {
            line,
            column,
            message: message.into(),
        }
    }

    fn skip_space(&mut self) {
        let rest = &self.src[self.pos..];
        let trimmed = rest.trim_start();
        self.pos += rest.len() - trimmed.len();
        if trimmed.starts_with('#') {
            self.pos = self.src.len();
        }
    }

    fn lex(&mut self) -> Result<(Tok, usize, usize), SyntaxError> {
        self.skip_space();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::End, start, start));
        };
        let take = |n: usize| start + n;
        let (tok, end) = if is_ident_start(c) {
            let n = rest.find(|ch: char| !is_ident_char(ch)).unwrap_or(rest.len());
            (Tok::Ident(rest[..n].to_string()), take(n))
        } else if c.is_ascii_digit() || (c == '.' && rest[1..].starts_with(|d: char| d.is_ascii_digit())) {
            let n = number_len(rest);
            let text = &rest[..n];
            let v: f64 = text
                .parse()
                .map_err(|_| self.error_at(start, format!("malformed number `{text}`")))?;
            if !v.is_finite() {
                return Err(self.error_at(start, format!("number `{text}` is out of range")));
            }
            (Tok::Number(v), take(n))
        } else if rest.starts_with("->") {
            (Tok::Arrow, take(2))
        } else if rest.starts_with("--")
            && rest[2..].starts_with(is_ident_start)
            && self.src[..start].ends_with(char::is_whitespace)
        {
            // `--name` is a flag only after whitespace, so `x--y` stays an expression
            let n = 2 + rest[2..].find(|ch: char| !is_ident_char(ch) && ch != '-').unwrap_or(rest.len() - 2);
            (Tok::Flag(rest[2..n].to_string()), take(n))
        } else if "+-*(),{}:=.[]".contains(c) {
            (Tok::Sym(c), take(1))
        } else {
            return Err(self.error_at(start, format!("unexpected character `{c}`")));
        };
        Ok((tok, start, end))
    }

    pub fn peek(&mut self) -> Result<&Tok, SyntaxError> {
        if self.peeked.is_none() {
            let save = self.pos;
            let t = self.lex()?;
            self.pos = save;
            self.peeked = Some(t);
        }
        Ok(&self.peeked.as_ref().expect("just filled").0)
    }

    /// Offset where the next token starts.
    pub fn peek_offset(&mut self) -> Result<usize, SyntaxError> {
        self.peek()?;
        Ok(self.peeked.as_ref().expect("just filled").1)
    }

    pub fn next(&mut self) -> Result<(Tok, usize), SyntaxError> {
        let (tok, start, end) = match self.peeked.take() {
            Some(t) => t,
            None => self.lex()?,
        };
        self.pos = end;
        Ok((tok, start))
    }

    /// Raw, trimmed text from the current position to the end of input
    /// (comments excluded only if the text starts with one).
    pub fn rest(&mut self) -> &'a str {
        self.peeked = None;
        let r = self.src[self.pos..].trim();
        self.pos = self.src.len();
        r
    }

    pub fn eat(&mut self, sym: char) -> Result<bool, SyntaxError> {
        if self.peek()? == &Tok::Sym(sym) {
            self.next()?;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    pub fn expect_sym(&mut self, sym: char) -> Result<(), SyntaxError> {
        let (tok, at) = self.next()?;
        if tok == Tok::Sym(sym) {
            Ok(())
        } else {
            Err(self.error_at(at, format!("expected `{sym}`, found {tok}")))
        }
    }

    pub fn expect_arrow(&mut self) -> Result<(), SyntaxError> {
        let (tok, at) = self.next()?;
        if tok == Tok::Arrow {
            Ok(())
        } else {
            Err(self.error_at(at, format!("expected `->`, found {tok}")))
        }
    }

    pub fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.next()? {
            (Tok::Ident(s), _) => Ok(s),
            (tok, at) => Err(self.error_at(at, format!("expected a name, found {tok}"))),
        }
    }

    /// A number literal, optionally preceded by `-`.
    pub fn signed_number(&mut self) -> Result<f64, SyntaxError> {
        let negative = self.eat('-')?;
        match self.next()? {
            (Tok::Number(v), _) => Ok(if negative { -v } else { v }),
            (tok, at) => Err(self.error_at(at, format!("expected a number, found {tok}"))),
        }
    }

    pub fn expect_end(&mut self) -> Result<(), SyntaxError> {
        match self.next()? {
            (Tok::End, _) => Ok(()),
            (tok, at) => Err(self.error_at(at, format!("unexpected {tok}"))),
        }
    }

    /// Parses one expression, stopping at the first token that cannot extend it.
    pub fn expr(&mut self) -> Result<Term, SyntaxError> {
        let mut lhs = self.mul()?;
        loop {
            if self.eat('+')? {
                lhs = Term::add(lhs, self.mul()?);
            } else if self.eat('-')? {
                lhs = Term::sub(lhs, self.mul()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn mul(&mut self) -> Result<Term, SyntaxError> {
        let mut lhs = self.unary()?;
        while self.eat('*')? {
            lhs = Term::mul(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Term, SyntaxError> {
        if self.eat('-')? {
            if let Tok::Number(v) = *self.peek()? {
                self.next()?;
                return Ok(Term::Const(-v));
            }
            return Ok(Term::neg(self.unary()?));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Term, SyntaxError> {
        let (tok, at) = self.next()?;
        match tok {
            Tok::Number(v) => Ok(Term::Const(v)),
            Tok::Sym('(') => {
                let inner = self.expr()?;
                self.expect_sym(')')?;
                Ok(inner)
            }
            Tok::Ident(name) if matches!(name.as_str(), "max" | "min" | "abs") && self.peek()? == &Tok::Sym('(') => {
                self.next()?;
                let first = self.expr()?;
                let out = if name == "abs" {
                    Term::abs(first)
                } else {
                    self.expect_sym(',')?;
                    let second = self.expr()?;
                    if name == "max" {
                        Term::join(first, second)
                    } else {
                        Term::meet(first, second)
                    }
                };
                self.expect_sym(')')?;
                Ok(out)
            }
            Tok::Ident(name) => Ok(Term::Gen(name)),
            other => Err(self.error_at(at, format!("expected an expression, found {other}"))),
        }
    }
}

fn number_len(s: &str) -> usize {
    let b = s.as_bytes();
    let digits = |mut i: usize| {
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        i
    };
    let mut i = digits(0);
    if i < b.len() && b[i] == b'.' && b.get(i + 1).is_some_and(u8::is_ascii_digit) {
        i = digits(i + 1);
    } else if i < b.len() && b[i] == b'.' && !b.get(i + 1).is_some_and(|&c| c == b'.') {
        // trailing dot as in `2.`
        i += 1;
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            j += 1;
        }
        let k = digits(j);
        if k > j {
            i = k;
        }
    }
    i
}

/// Parses a complete term.
pub fn parse_term(text: &str) -> Result<Term, SyntaxError> {
    let mut cur = Cursor::new(text);
    let t = cur.expr()?;
    cur.expect_end()?;
    Ok(t)
}
