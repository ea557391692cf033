//! Parser for the canonical polynomial text form, e.g.
//! `-4*x0^6 - 308*x0^5*x1 + 3/2*x2^6`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::hom::HomPoly;

/// Parses a homogeneous form in three variables `<letter>0..<letter>2`.
///
/// Returns the polynomial and the variable letter. Column numbers in
/// errors are 1-based and relative to `text`; `line` is passed through.
pub fn parse_hompoly(text: &str, line: usize) -> Result<(HomPoly<BigRational>, char)> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        line,
        letter: None,
    };
    let terms = p.parse_terms()?;
    let letter = p.letter.unwrap_or('x');
    let degree = match terms.iter().find(|(c, _)| !c.is_zero()) {
        Some((_, e)) => e.iter().sum(),
        None => terms.first().map(|(_, e)| e.iter().sum()).unwrap_or(0),
    };
    for (_, e) in &terms {
        let d: u32 = e.iter().sum();
        if d != degree {
            return Err(Error::parse(
                line,
                1,
                format!("polynomial is not homogeneous (degrees {} and {})", degree, d),
            ));
        }
    }
    let poly = HomPoly::from_terms(degree, terms).map_err(|m| Error::parse(line, 1, m))?;
    Ok((poly, letter))
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    letter: Option<char>,
}

impl Parser {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn parse_terms(&mut self) -> Result<Vec<(BigRational, [u32; 3])>> {
        let mut out = Vec::new();
        self.skip_ws();
        if self.peek().is_none() {
            return Err(self.err("empty polynomial"));
        }
        let mut first = true;
        loop {
            self.skip_ws();
            let mut sign = BigRational::one();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                }
                Some('-') => {
                    self.pos += 1;
                    sign = -sign;
                }
                Some(_) if first => {}
                Some(c) => return Err(self.err(format!("expected '+' or '-', found '{}'", c))),
                None => break,
            }
            first = false;
            self.skip_ws();
            let (c, e) = self.parse_term()?;
            out.push((sign * c, e));
            self.skip_ws();
            if self.peek().is_none() {
                break;
            }
        }
        Ok(out)
    }

    fn parse_term(&mut self) -> Result<(BigRational, [u32; 3])> {
        let mut coeff = BigRational::one();
        let mut exps = [0u32; 3];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    coeff *= self.parse_number()?;
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let (i, e) = self.parse_var()?;
                    exps[i] += e;
                }
                Some(c) => return Err(self.err(format!("unexpected character '{}'", c))),
                None => return Err(self.err("unexpected end of input")),
            }
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
                continue;
            }
            break;
        }
        Ok((coeff, exps))
    }

    fn parse_uint(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse::<BigInt>().expect("digits parse"))
    }

    fn parse_number(&mut self) -> Result<BigRational> {
        let num = self.parse_uint()?;
        if self.peek() == Some('/') {
            self.pos += 1;
            let den = self.parse_uint()?;
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            return Ok(BigRational::new(num, den));
        }
        Ok(BigRational::from_integer(num))
    }

    fn parse_var(&mut self) -> Result<(usize, u32)> {
        let letter = self.chars[self.pos];
        match self.letter {
            None => self.letter = Some(letter),
            Some(l) if l != letter => return Err(self.err(format!("mixed variable names '{}' and '{}'", l, letter))),
            _ => {}
        }
        self.pos += 1;
        let idx = match self.peek() {
            Some(c @ '0'..='2') => c as usize - '0' as usize,
            _ => return Err(self.err("expected variable index 0, 1 or 2")),
        };
        self.pos += 1;
        let mut e = 1u32;
        self.skip_ws();
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let n = self.parse_uint()?;
            e = u32::try_from(n).map_err(|_| self.err("exponent too large"))?;
        }
        Ok((idx, e))
    }
}

/// Integers separated by whitespace, commas or parentheses.
pub fn parse_integer_list(text: &str, line: usize) -> Result<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut start = None;
    let bytes: Vec<char> = text.chars().collect();
    for k in 0..=bytes.len() {
        let sep = k == bytes.len() || matches!(bytes[k], ' ' | '\t' | ',' | '(' | ')' | '[' | ']');
        match (sep, start) {
            (false, None) => start = Some(k),
            (true, Some(s)) => {
                let tok: String = bytes[s..k].iter().collect();
                let n = tok
                    .parse::<BigInt>()
                    .map_err(|_| Error::parse(line, s + 1, format!("expected an integer, got '{}'", tok)))?;
                out.push(n);
                start = None;
            }
            _ => {}
        }
    }
    Ok(out)
}
