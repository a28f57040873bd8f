//! Recursive-descent parser for the polynomial grammar.
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' natural)?
//! base   := identifier | natural | '(' expr ')'
//! ```

use super::monomial::Monomial;
use super::poly::Poly;
use super::ring::{Ring, RingRef};
use crate::error::{Error, Result};

struct Parser<'a> {
    src: Vec<(usize, char)>,
    pos: usize,
    ring: &'a RingRef,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src.get(self.pos).map(|c| c.1)
    }

    fn offset(&self) -> usize {
        self.src.get(self.pos).map(|c| c.0).unwrap_or_else(|| self.src.last().map(|c| c.0 + 1).unwrap_or(0))
    }

    fn err(&self, expected: &str) -> Error {
        Error::Syntax { position: self.offset(), expected: expected.to_string() }
    }

    fn expr(&mut self) -> Result<Poly> {
        let neg = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                Some('-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let b = self.base()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.natural_u64()?;
            return Ok(b.pow(e));
        }
        Ok(b)
    }

    fn natural_u64(&mut self) -> Result<u64> {
        let start = self.pos;
        let mut v: u64 = 0;
        while let Some(&(_, c)) = self.src.get(self.pos) {
            if let Some(d) = c.to_digit(10) {
                v = v.checked_mul(10).and_then(|v| v.checked_add(d as u64)).ok_or_else(|| self.err("smaller exponent"))?;
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start {
            return Err(self.err("natural number"));
        }
        Ok(v)
    }

    fn base(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let p = self.ring.p() as u64;
                let mut v: u64 = 0;
                while let Some(&(_, c)) = self.src.get(self.pos) {
                    if let Some(d) = c.to_digit(10) {
                        v = (v * 10 + d as u64) % p;
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                Ok(Poly::constant(self.ring, v as i64))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                let begin = self.offset();
                while let Some(&(_, c)) = self.src.get(self.pos) {
                    if c.is_alphanumeric() || c == '_' {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let name: String = self.src[start..self.pos].iter().map(|c| c.1).collect();
                let _ = begin;
                match self.ring.var_index(&name) {
                    Some(k) => Ok(Poly::monomial(self.ring, Monomial::var(k, 1), 1)),
                    None => Err(Error::UnknownVariable(name)),
                }
            }
            _ => Err(self.err("identifier, natural number or '('")),
        }
    }
}

/// Parse `text` in an existing session.
pub fn parse_in(text: &str, ring: &RingRef) -> Result<Poly> {
    let mut ps = Parser { src: text.char_indices().collect(), pos: 0, ring };
    let e = ps.expr()?;
    if ps.peek().is_some() {
        return Err(ps.err("operator or end of input"));
    }
    Ok(e)
}

/// Parse `text` over `𝔽_p[vars]` with the default session settings.
pub fn parse_poly(text: &str, vars: &[&str], p: u64) -> Result<Poly> {
    let ring = Ring::new(p, vars)?;
    parse_in(text, &ring)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        let f = parse_poly("x*y - z*w", &["x", "y", "z", "w"], 5).unwrap();
        assert_eq!(f.len(), 2);
        let mut cs: Vec<u32> = f.terms().iter().map(|t| t.1).collect();
        cs.sort();
        assert_eq!(cs, vec![1, 4]);
        let g = parse_poly("(x+y)^2", &["x", "y"], 2).unwrap();
        assert_eq!(g.to_text(), "x^2 + y^2");
        let h = parse_poly("x^3+y^3+z^3", &["x", "y", "z"], 7).unwrap();
        assert_eq!(h.len(), 3);
        assert!(h.terms().iter().all(|t| t.1 == 1));
    }

    #[test]
    fn errors() {
        let v = ["x", "y"];
        assert_eq!(parse_poly("x + q", &v, 3), Err(Error::UnknownVariable("q".into())));
        assert!(matches!(parse_poly("x + ", &v, 3), Err(Error::Syntax { position: 4, .. })));
        assert!(matches!(parse_poly("(x", &v, 3), Err(Error::Syntax { .. })));
        assert!(matches!(parse_poly("x y", &v, 3), Err(Error::Syntax { position: 2, .. })));
        assert_eq!(parse_poly("x", &v, 33), Err(Error::BadPrime(33)));
    }

    #[test]
    fn whitespace_and_unary() {
        let a = parse_poly(" - x ^ 2 * y + 7", &["x", "y"], 5).unwrap();
        let b = parse_poly("4*x^2*y+2", &["x", "y"], 5).unwrap();
        assert_eq!(a, b);
    }
}
