//! Parser for the polynomial text form written by `MultiPoly`'s `Display`.
//!
//! Also accepts hand-written input: `-`, parentheses and bare integers, e.g.
//! `x0^2*y + z^2 - 3/2*(t + 1)`.

use num_bigint::BigInt;

use super::multipoly::{MultiPoly, Vars};
use super::{Rational, UniPoly};
use crate::error::{Error, Result};

pub fn parse_poly(text: &str, vars: &Vars) -> Result<MultiPoly> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, vars };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

/// Parses a list of rational coefficients (low degree first) into a `UniPoly`.
pub fn parse_unipoly(coeffs: &[String]) -> Result<UniPoly> {
    Ok(UniPoly::new(coeffs.iter().map(|c| c.parse()).collect::<Result<Vec<Rational>>>()?))
}

pub fn unipoly_to_strings(p: &UniPoly) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    vars: &'a Vars,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::parse(format!("{what} at byte {} of {:?}", self.pos, String::from_utf8_lossy(self.s)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut negate = false;
        while let Some(c @ (b'-' | b'+')) = self.peek() {
            self.pos += 1;
            if c == b'-' {
                negate = !negate;
            }
        }
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(if negate { -acc } else { acc })
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().map_err(|_| self.err("bad integer"))
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        let base = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                e
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut den = BigInt::from(1);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    den = self.integer()?;
                }
                MultiPoly::constant_in(Rational::from_bigints(num, den)?, self.vars)
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                let i = self
                    .vars
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| Error::parse(format!("unknown variable {name:?} (ring has {:?})", self.vars)))?;
                MultiPoly::var(i, self.vars)
            }
            _ => return Err(self.err("expected number, variable or '('")),
        };
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e: u32 = self.integer()?.try_into().map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }
}
