//! Text parser for the deterministic expression form.
//!
//! The grammar accepts sums of products with `^` powers, parentheses,
//! integer and `p/q` coefficients, variables `x1..x{2n}`, `t`, and atoms
//! `E1..E{n-1}`. Division is general (evaluated in the fraction field);
//! [`Expr::parse`] additionally requires the denominator to reduce to a
//! constant. Any mathematically equal input parses to the same canonical
//! form, so hand-written text need not be term-sorted.

use alloc::string::String;
use alloc::string::ToString;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{Expr, ExprError, RationalExpr};

/// Parse failure with a byte offset into the input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl core::fmt::Display for ParseError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.message)
    }
}

impl core::error::Error for ParseError {}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
    n: usize,
}

impl<'a> Parser<'a> {
    fn new(n: usize, input: &'a str) -> Self {
        Parser {
            input: input.as_bytes(),
            pos: 0,
            n,
        }
    }

    fn err<T>(&self, message: &str) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos,
            message: message.to_string(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.input.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<usize, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a number");
        }
        let s = core::str::from_utf8(&self.input[start..self.pos]).expect("ascii digits");
        s.parse::<usize>().map_err(|_| ParseError {
            pos: start,
            message: "number too large".to_string(),
        })
    }

    fn bigint(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected a number");
        }
        let s = core::str::from_utf8(&self.input[start..self.pos]).expect("ascii digits");
        s.parse::<BigInt>().map_err(|_| ParseError {
            pos: start,
            message: "invalid integer".to_string(),
        })
    }

    fn expr(&mut self) -> Result<RationalExpr, ParseError> {
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            let _ = self.eat(b'+');
        }
        let mut acc = self.term()?;
        if negate {
            acc = -acc;
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc + t;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc - t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalExpr, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = acc * f;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    let inv = f.inverse().map_err(|_| ParseError {
                        pos: self.pos,
                        message: "division by zero".to_string(),
                    })?;
                    acc = acc * inv;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RationalExpr, ParseError> {
        let base = self.primary()?;
        if self.eat(b'^') {
            let k = self.uint()?;
            if k > 64 {
                return self.err("exponent too large");
            }
            return Ok(base.pow(k as u32));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<RationalExpr, ParseError> {
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
                let f = self.factor()?;
                Ok(-f)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.bigint()?;
                Ok(RationalExpr::from(Expr::constant(
                    self.n,
                    BigRational::from_integer(v),
                )))
            }
            Some(b'x') => {
                self.pos += 1;
                let a = self.uint()?;
                let e = Expr::x(self.n, a).map_err(|e| self.expr_err(e))?;
                Ok(RationalExpr::from(e))
            }
            Some(b't') => {
                self.pos += 1;
                Ok(RationalExpr::from(Expr::time(self.n)))
            }
            Some(b'E') => {
                self.pos += 1;
                let j = self.uint()?;
                let e = Expr::e_atom(self.n, j).map_err(|e| self.expr_err(e))?;
                Ok(RationalExpr::from(e))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }

    fn expr_err(&self, e: ExprError) -> ParseError {
        ParseError {
            pos: self.pos,
            message: e.to_string(),
        }
    }
}

pub(crate) fn parse_rational(n: usize, input: &str) -> Result<RationalExpr, ParseError> {
    let mut p = Parser::new(n, input);
    let r = p.expr()?;
    p.skip_ws();
    if p.pos != p.input.len() {
        return p.err("trailing input");
    }
    Ok(r)
}

impl RationalExpr {
    /// Parse an expression in the fraction field.
    pub fn parse(n: usize, input: &str) -> Result<Self, ParseError> {
        parse_rational(n, input)
    }
}

impl Expr {
    /// Parse a polynomial expression. Division is allowed in the input as
    /// long as the result reduces to a constant denominator.
    pub fn parse(n: usize, input: &str) -> Result<Self, ParseError> {
        let r = parse_rational(n, input)?;
        match r.den().constant_value() {
            Some(c) if !num_traits::Zero::is_zero(&c) => {
                if c.is_one() {
                    Ok(r.num().clone())
                } else {
                    Ok(r.num().scale(&c.recip()))
                }
            }
            _ => Err(ParseError {
                pos: 0,
                message: "expression is not polynomial".to_string(),
            }),
        }
    }
}
