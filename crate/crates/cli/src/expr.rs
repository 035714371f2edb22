//! The data grammar of problem files: sums and products of real constants,
//! powers of one variable, and sin(kπx).
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*'? factor)*
//! factor := unary ('^' integer)?
//! unary  := '-' unary | primary
//! primary:= number | var | 'pi' | 'π' | 'sin' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Juxtaposition multiplies, so `3x^2`, `2pi x` and `sin(2πx)` all parse.
//! The argument of `sin` must reduce to kπ·var for an integer k.

use std::f64::consts::PI;
use std::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    /// sin(kπ·var)
    Sin(i64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at character {}: {}", self.pos + 1, self.msg)
    }
}

impl std::error::Error for ParseError {}

impl Expr {
    pub fn parse(src: &str, var: &str) -> Result<Expr, ParseError> {
        let mut p = Parser { chars: src.chars().collect(), pos: 0, var };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.err(format!("unexpected '{}'", p.chars[p.pos])));
        }
        Ok(e)
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Var => x,
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Neg(a) => -a.eval(x),
            Expr::Pow(a, n) => a.eval(x).powi(*n as i32),
            Expr::Sin(k) => sin_k_pi(*k, x),
        }
    }

    /// Polynomial coefficients (constant term first) if the expression has
    /// no sine factor.
    fn as_poly(&self) -> Option<Vec<f64>> {
        Some(match self {
            Expr::Const(c) => vec![*c],
            Expr::Var => vec![0.0, 1.0],
            Expr::Add(a, b) => zip_add(&a.as_poly()?, &b.as_poly()?, 1.0),
            Expr::Sub(a, b) => zip_add(&a.as_poly()?, &b.as_poly()?, -1.0),
            Expr::Neg(a) => a.as_poly()?.iter().map(|c| -c).collect(),
            Expr::Mul(a, b) => poly_mul(&a.as_poly()?, &b.as_poly()?),
            Expr::Pow(a, n) => {
                let base = a.as_poly()?;
                (0..*n).fold(vec![1.0], |acc, _| poly_mul(&acc, &base))
            }
            Expr::Sin(_) => return None,
        })
    }
}

/// sin(kπx), exact at the integers
fn sin_k_pi(k: i64, x: f64) -> f64 {
    let y = k as f64 * x;
    let r = y - 2.0 * (y / 2.0).round();
    if r == r.trunc() {
        0.0
    } else {
        (PI * r).sin()
    }
}

fn zip_add(a: &[f64], b: &[f64], sign: f64) -> Vec<f64> {
    (0..a.len().max(b.len())).map(|i| a.get(i).copied().unwrap_or(0.0) + sign * b.get(i).copied().unwrap_or(0.0)).collect()
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    var: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError { pos: self.pos, msg: msg.into() }
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

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.term()?;
        loop {
            if self.eat('+') {
                e = Expr::Add(Box::new(e), Box::new(self.term()?));
            } else if self.eat('-') {
                e = Expr::Sub(Box::new(e), Box::new(self.term()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.factor()?;
        loop {
            if self.eat('*') || matches!(self.peek(), Some(c) if c.is_alphanumeric() || c == '(' || c == '.' || c == 'π') {
                e = Expr::Mul(Box::new(e), Box::new(self.factor()?));
            } else {
                return Ok(e);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.unary()?;
        if self.eat('^') {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits: String = self.chars[start..self.pos].iter().collect();
            let n = digits.parse::<u32>().map_err(|_| ParseError { pos: start, msg: "exponent must be a nonnegative integer".into() })?;
            if n > 64 {
                return Err(ParseError { pos: start, msg: "exponent larger than 64".into() });
            }
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let c = self.peek().ok_or_else(|| self.err("unexpected end of expression"))?;
        if c == '(' {
            self.pos += 1;
            let e = self.expr()?;
            if !self.eat(')') {
                return Err(self.err("expected ')'"));
            }
            return Ok(e);
        }
        if c == 'π' {
            self.pos += 1;
            return Ok(Expr::Const(PI));
        }
        if c.is_ascii_digit() || c == '.' {
            return self.number();
        }
        if c.is_alphabetic() {
            let start = self.pos;
            // names are matched as prefixes so that `pix` reads as pi·x
            for name in ["sin", "pi", self.var] {
                if self.chars[self.pos..].starts_with(&name.chars().collect::<Vec<_>>()) {
                    self.pos += name.chars().count();
                    return match name {
                        "sin" => self.sine(start),
                        "pi" => Ok(Expr::Const(PI)),
                        _ => Ok(Expr::Var),
                    };
                }
            }
            let word: String = self.chars[start..].iter().take_while(|c| c.is_alphabetic()).collect();
            return Err(ParseError { pos: start, msg: format!("unknown name '{word}' (the variable is '{}')", self.var) });
        }
        Err(self.err(format!("unexpected '{c}'")))
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.chars.len() && (self.chars[self.pos].is_ascii_digit() || self.chars[self.pos] == '.') {
            self.pos += 1;
        }
        // exponent part, only when followed by a digit or sign+digit
        if self.pos < self.chars.len() && matches!(self.chars[self.pos], 'e' | 'E') {
            let mut k = self.pos + 1;
            if matches!(self.chars.get(k), Some('+' | '-')) {
                k += 1;
            }
            if matches!(self.chars.get(k), Some(c) if c.is_ascii_digit()) {
                self.pos = k;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<f64>().map(Expr::Const).map_err(|_| ParseError { pos: start, msg: format!("bad number '{s}'") })
    }

    fn sine(&mut self, start: usize) -> Result<Expr, ParseError> {
        if !self.eat('(') {
            return Err(self.err("expected '(' after sin"));
        }
        let arg = self.expr()?;
        if !self.eat(')') {
            return Err(self.err("expected ')'"));
        }
        let bad = || ParseError { pos: start, msg: "sin argument must be kπ times the variable for an integer k".into() };
        let s = arg.eval(1.0) / PI;
        let k = s.round();
        let linear = arg.eval(0.0).abs() <= 1e-12 && (arg.eval(0.5) - 0.5 * arg.eval(1.0)).abs() <= 1e-12 * (1.0 + s.abs());
        if !linear || (s - k).abs() > 1e-9 || !arg.as_poly().is_some_and(|p| p.iter().skip(2).all(|c| c.abs() <= 1e-12)) {
            return Err(bad());
        }
        Ok(Expr::Sin(k as i64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, x: f64) -> f64 {
        Expr::parse(s, "x").unwrap().eval(x)
    }

    #[test]
    fn polynomials_and_juxtaposition() {
        assert_eq!(ev("1 + (3x^2 - 1)", 0.5), 0.75);
        assert_eq!(ev("x(1-x)", 0.25), 0.1875);
        assert_eq!(ev("-2*x^3 + 0.5", 1.0), -1.5);
        assert_eq!(ev("2.5e-1x", 2.0), 0.5);
    }

    #[test]
    fn sines() {
        assert_eq!(ev("sin(pi x)", 1.0), 0.0);
        assert!((ev("sin(2πx)", 0.125) - (PI / 4.0).sin()).abs() < 1e-15);
        assert!((ev("sin(pi*x)*(1 - x^2)", 0.5) - 0.75).abs() < 1e-15);
        assert!(Expr::parse("sin(x)", "x").is_err());
        assert!(Expr::parse("sin(pi x + 1)", "x").is_err());
        assert!(Expr::parse("sin(pi x^2)", "x").is_err());
    }

    #[test]
    fn errors_point_at_input() {
        let e = Expr::parse("1 + y", "x").unwrap_err();
        assert_eq!(e.pos, 4);
        assert!(Expr::parse("(1 + x", "x").is_err());
        assert!(Expr::parse("x^-1", "x").is_err());
        assert!(Expr::parse("", "x").is_err());
    }

    #[test]
    fn other_variable_names() {
        assert_eq!(Expr::parse("t^2 + 1", "t").unwrap().eval(3.0), 10.0);
        assert!(Expr::parse("x", "t").is_err());
    }
}
