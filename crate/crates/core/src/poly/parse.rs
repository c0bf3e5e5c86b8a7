//! Expression parser for rational functions: `+ - * / ^`, parentheses,
//! integer literals, ring variables and named field constants.

use std::sync::Arc;

use super::ratfunc::RatFunc;
use super::sparse::PolyRing;
use crate::error::{Error, Result};
use crate::ring::CoeffRing;

struct Parser<'a, R: CoeffRing> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Arc<PolyRing<R>>,
}

impl<R: CoeffRing> Parser<'_, R> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFunc<R>> {
        let mut acc = if self.eat(b'-') {
            self.term()?.neg()
        } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc<R>> {
        let mut acc = self.power()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.power()?;
                if d.is_zero() {
                    self.pos = at;
                    return self.err("division by zero");
                }
                acc = acc.div(&d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<RatFunc<R>> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let neg = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        let e = self.integer()?;
        let e = i64::try_from(e).or_else(|_| {
            self.pos = start;
            self.err("exponent too large")
        })?;
        let e = if neg { -e } else { e };
        if e < 0 && base.is_zero() {
            return self.err("negative power of zero");
        }
        base.pow(e)
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse().or_else(|_| {
            self.pos = start;
            self.err("integer literal too large")
        })
    }

    fn atom(&mut self) -> Result<RatFunc<R>> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(self.power()?.neg())
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let n = i64::try_from(n).or_else(|_| self.err("integer literal too large"))?;
                Ok(RatFunc::from_int(self.ring, n))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if let Some(i) = self.ring.var_index(name) {
                    Ok(RatFunc::var(self.ring, i))
                } else if let Some(c) = self.ring.coeffs().named_constant(name) {
                    Ok(RatFunc::constant(self.ring, c))
                } else {
                    self.pos = start;
                    self.err(format!("unknown variable '{name}'"))
                }
            }
            Some(c) => self.err(format!("unexpected '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse an expression such as `(1 - b)/(1 - a)` in the given ring.
pub fn parse_ratfunc<R: CoeffRing>(ring: &Arc<PolyRing<R>>, text: &str) -> Result<RatFunc<R>> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        ring,
    };
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(out)
}
