//! Text input: polynomial expressions and ring description files.
//!
//! Polynomial grammar (whitespace is ignored between tokens):
//!
//! ```text
//! expr   := sign? term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' integer)?
//! atom   := integer ('/' integer)? | variable | '(' expr ')'
//! ```
//!
//! Ring files are line oriented; `#` starts a comment:
//!
//! ```text
//! field prime 32003        # or: field rational
//! vars x,y,z
//! gen x^2
//! gen y^2+z^2
//! ```

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Monomial, Polynomial};

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    vars: &'a [String],
    field: Field,
}

impl<'a> Parser<'a> {
    fn col(&self) -> usize {
        self.pos + 1
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn syntax(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { line: None, col: self.col(), msg: msg.into() }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let n = self.vars.len();
        let mut acc = Polynomial::zero(n);
        let mut negate = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            acc = if negate { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some('+') => negate = false,
                Some('-') => negate = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let e = self.integer()?;
        let e: u32 = e.try_into().map_err(|_| self.syntax("exponent too large"))?;
        let mut out = Polynomial::constant(self.vars.len(), self.field.one());
        for _ in 0..e {
            out = out.mul(&base);
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let n = self.vars.len();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.syntax("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let col = self.col();
                let num = self.integer()?;
                let den = if self.peek() == Some('/') {
                    self.pos += 1;
                    self.integer()?
                } else {
                    BigInt::from(1)
                };
                let c = self
                    .field
                    .from_ratio(&num, &den)
                    .ok_or(Error::ZeroDenominator { line: None, col })?;
                Ok(Polynomial::constant(n, c))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let col = self.col();
                let start = self.pos;
                while self.pos < self.chars.len() {
                    let c = self.chars[self.pos];
                    if c.is_alphanumeric() || c == '_' {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match self.vars.iter().position(|v| *v == name) {
                    Some(i) => Ok(Polynomial::term(Monomial::var(n, i), self.field.one())),
                    None => Err(Error::UnknownVariable { line: None, col, name }),
                }
            }
            Some(c) => Err(self.syntax(format!("unexpected `{c}`"))),
            None => Err(self.syntax("unexpected end of input")),
        }
    }
}

/// Parses a polynomial over `field` in the variables `vars`.
pub fn parse_polynomial(text: &str, vars: &[String], field: Field) -> Result<Polynomial> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0, vars, field };
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(p.syntax("trailing input"));
    }
    Ok(out)
}

/// Raw contents of a ring file, before any validation of the ideal.
#[derive(Clone, Debug)]
pub struct RingFile {
    pub field: Field,
    pub vars: Vec<String>,
    pub generators: Vec<Polynomial>,
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

fn line_syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { line: Some(line), col: 1, msg: msg.into() }
}

pub fn parse_ring_file(text: &str) -> Result<RingFile> {
    let mut field = None;
    let mut vars: Option<Vec<String>> = None;
    let mut generators = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match key {
            "field" => {
                let mut words = rest.split_whitespace();
                field = Some(match (words.next(), words.next(), words.next()) {
                    (Some("rational"), None, None) => Field::Rational,
                    (Some("prime"), Some(p), None) => {
                        let p: u32 = p
                            .parse()
                            .map_err(|_| line_syntax(lineno, format!("bad prime `{p}`")))?;
                        Field::prime(p).ok_or_else(|| {
                            line_syntax(lineno, format!("{p} is not a prime below 2^31"))
                        })?
                    }
                    _ => return Err(line_syntax(lineno, "expected `field rational` or `field prime <p>`")),
                });
            }
            "vars" => {
                if vars.is_some() {
                    return Err(line_syntax(lineno, "duplicate `vars` line"));
                }
                let names: Vec<String> = rest.split(',').map(|s| s.trim().to_string()).collect();
                for name in &names {
                    let ok = name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                        && name.chars().all(|c| c.is_alphanumeric() || c == '_');
                    if !ok {
                        return Err(line_syntax(lineno, format!("bad variable name `{name}`")));
                    }
                }
                for (i, a) in names.iter().enumerate() {
                    if names[..i].contains(a) {
                        return Err(line_syntax(lineno, format!("variable `{a}` listed twice")));
                    }
                }
                vars = Some(names);
            }
            "gen" => {
                let names = vars
                    .as_ref()
                    .ok_or_else(|| line_syntax(lineno, "`gen` before `vars`"))?;
                let f = field.unwrap_or_default();
                let offset = raw.find(rest).unwrap_or(0);
                let p = parse_polynomial(rest, names, f).map_err(|e| shift_col(e, offset).at_line(lineno))?;
                generators.push(p);
            }
            other => return Err(line_syntax(lineno, format!("unknown directive `{other}`"))),
        }
    }
    let vars = vars.ok_or_else(|| line_syntax(1, "missing `vars` line"))?;
    Ok(RingFile { field: field.unwrap_or_default(), vars, generators })
}

fn shift_col(e: Error, offset: usize) -> Error {
    match e {
        Error::Syntax { line, col, msg } => Error::Syntax { line, col: col + offset, msg },
        Error::UnknownVariable { line, col, name } => Error::UnknownVariable { line, col: col + offset, name },
        Error::ZeroDenominator { line, col } => Error::ZeroDenominator { line, col: col + offset },
        other => other,
    }
}

/// Parses cycle coordinates: each non-comment line is `z p1, p2, ..., pn`.
pub fn parse_cycle_file(text: &str, vars: &[String], field: Field) -> Result<Vec<Vec<Polynomial>>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let rest = line
            .strip_prefix('z')
            .filter(|r| r.starts_with(char::is_whitespace))
            .ok_or_else(|| line_syntax(lineno, "expected `z <coordinates>`"))?;
        let coords = rest
            .split(',')
            .map(|s| parse_polynomial(s, vars, field).map_err(|e| e.at_line(lineno)))
            .collect::<Result<Vec<_>>>()?;
        if coords.len() != vars.len() {
            return Err(line_syntax(
                lineno,
                format!("expected {} coordinates, found {}", vars.len(), coords.len()),
            ));
        }
        out.push(coords);
    }
    Ok(out)
}
