//! Recursive-descent parser for the concrete formula syntax.

use std::fmt;

use crate::timeset::Interval;

use super::Formula;

/// Parse failure with the byte offset where it occurred and the set of
/// tokens that would have been accepted there.
#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.offset, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

pub(super) fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let formula = p.disj()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("trailing input", vec!["end of input", "'&'", "'|'"]));
    }
    Ok(formula)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, message: impl Into<String>, expected: Vec<&'static str>) -> ParseError {
        ParseError {
            offset: self.pos,
            expected,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    /// Reads an identifier without consuming it; returns `(word, end_pos)`.
    fn peek_word(&self) -> Option<(&'a str, usize)> {
        let rest = &self.src[self.pos..];
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_alphabetic() || c == '_' => {}
            _ => return None,
        }
        let end = chars
            .find(|&(_, c)| !(c.is_alphanumeric() || c == '_'))
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        Some((&rest[..end], self.pos + end))
    }

    fn disj(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conj()?;
        loop {
            self.skip_ws();
            if self.eat('|') {
                let rhs = self.conj()?;
                lhs = Formula::or(lhs, rhs);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn conj(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            self.skip_ws();
            if self.eat('&') {
                let rhs = self.unary()?;
                lhs = Formula::and(lhs, rhs);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        self.skip_ws();
        if self.eat('!') {
            return Ok(Formula::not(self.unary()?));
        }
        if let Some((word, end)) = self.peek_word() {
            match word {
                "F" => {
                    self.pos = end;
                    let window = self.window()?;
                    return Ok(Formula::eventually(window, self.unary()?));
                }
                "G" => {
                    self.pos = end;
                    let window = self.window()?;
                    return Ok(Formula::always(window, self.unary()?));
                }
                _ => {}
            }
        }
        let lhs = self.atom_or_paren()?;
        self.until_suffix(lhs)
    }

    fn until_suffix(&mut self, lhs: Formula) -> Result<Formula, ParseError> {
        self.skip_ws();
        if let Some(("U", end)) = self.peek_word() {
            self.pos = end;
            let window = self.window()?;
            let rhs = self.unary()?;
            return Ok(Formula::until(window, lhs, rhs));
        }
        Ok(lhs)
    }

    fn atom_or_paren(&mut self) -> Result<Formula, ParseError> {
        self.skip_ws();
        if self.eat('(') {
            let inner = self.disj()?;
            self.skip_ws();
            if !self.eat(')') {
                return Err(self.err("unclosed group", vec!["')'"]));
            }
            return Ok(inner);
        }
        match self.peek_word() {
            Some(("true", end)) => {
                self.pos = end;
                Ok(Formula::Top)
            }
            Some(("false", end)) => {
                self.pos = end;
                Ok(Formula::Bot)
            }
            Some((w @ ("F" | "G" | "U"), _)) => Err(self.err(
                format!("`{w}` is a reserved operator, not an atom"),
                vec!["atom", "'('"],
            )),
            Some((word, end)) => {
                self.pos = end;
                Ok(Formula::atom(word))
            }
            None => Err(self.err(
                "expected a formula",
                vec!["atom", "'true'", "'false'", "'!'", "'F'", "'G'", "'('"],
            )),
        }
    }

    fn window(&mut self) -> Result<Interval, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let lo_closed = if self.eat('[') {
            true
        } else if self.eat('(') {
            false
        } else {
            return Err(self.err("expected a window", vec!["'['", "'('"]));
        };
        let lo = self.number()?;
        self.skip_ws();
        if !self.eat(',') {
            return Err(self.err("expected ','", vec!["','"]));
        }
        self.skip_ws();
        let hi = if let Some(("inf", end)) = self.peek_word() {
            self.pos = end;
            f64::INFINITY
        } else {
            self.number()?
        };
        self.skip_ws();
        let hi_closed = if self.eat(']') {
            true
        } else if self.eat(')') {
            false
        } else {
            return Err(self.err("expected window close", vec!["']'", "')'"]));
        };
        Interval::new(lo, lo_closed, hi, hi_closed).map_err(|e| ParseError {
            offset: start,
            expected: vec![],
            message: e.to_string(),
        })
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let mut end = start;
        while end < bytes.len() && bytes[end].is_ascii_digit() {
            end += 1;
        }
        if end == start {
            return Err(self.err("expected a number", vec!["number"]));
        }
        if end < bytes.len() && bytes[end] == b'.' {
            end += 1;
            while end < bytes.len() && bytes[end].is_ascii_digit() {
                end += 1;
            }
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut exp = end + 1;
            if exp < bytes.len() && (bytes[exp] == b'+' || bytes[exp] == b'-') {
                exp += 1;
            }
            let digits_start = exp;
            while exp < bytes.len() && bytes[exp].is_ascii_digit() {
                exp += 1;
            }
            if exp > digits_start {
                end = exp;
            }
        }
        let text = &self.src[start..end];
        self.pos = end;
        text.parse::<f64>().map_err(|_| ParseError {
            offset: start,
            expected: vec!["number"],
            message: format!("bad number literal `{text}`"),
        })
    }
}
