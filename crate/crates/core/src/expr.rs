//! Micro-parser for function literals.
//!
//! Grammar, loosely:
//!
//! ```text
//! value  := expr | '[' entry, ... ']' | '[[' expr, ... '], ...]' | 'diag(' expr, ... ')'
//!         | '{' expr, ... '}'
//! entry  := expr | 'lacunary(' int ')'
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' ['-'] int)?
//! atom   := number ['i'] | 'i' | 'z' | 'zbar' | '(' expr ')' | 'conj(' expr ')' | 'b(' expr ')'
//! ```
//!
//! `b(a)` is the Blaschke factor `(z - a) / (1 - conj(a) z)` and `{a, ...}`
//! is the Blaschke product with those zeros.

use num_complex::Complex64;

use crate::boundary::{AnalyticFn, SampledFunction};
use crate::error::{Error, Result};
use crate::hardy::FiniteBlaschke;
use crate::rational::{Polynomial, RationalFn};

/// A coordinate of a parsed vector.
#[derive(Clone, Debug, PartialEq)]
pub enum Entry {
    Rational(RationalFn),
    /// `sum_{j<terms} 2^{-j} z^{2^j}`, declared cyclic.
    Lacunary(u32),
}

impl Entry {
    pub fn to_analytic(&self, grid: usize) -> Result<AnalyticFn> {
        match self {
            Entry::Rational(f) => Ok(AnalyticFn::Rational(f.clone())),
            Entry::Lacunary(t) => Ok(AnalyticFn::Sampled(SampledFunction::lacunary(grid, *t)?)),
        }
    }

    pub fn as_rational(&self) -> Option<&RationalFn> {
        match self {
            Entry::Rational(f) => Some(f),
            Entry::Lacunary(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Function(RationalFn),
    Lacunary(u32),
    Vector(Vec<Entry>),
    Matrix(Vec<Vec<RationalFn>>),
    Blaschke(FiniteBlaschke),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    i = j;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text = &s[start..i];
            let v = text
                .parse::<f64>()
                .map_err(|_| Error::Parse { pos: start, msg: format!("bad number '{text}'") })?;
            out.push((start, Tok::Num(v)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(s[start..i].to_string())));
        } else if "+-*/^()[]{},".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse { pos: i, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    len: usize,
}

impl Parser {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.at + k).map(|t| &t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn is_ident(&self, name: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == name)
    }

    fn value(&mut self) -> Result<Value> {
        let v = match self.peek() {
            Some(Tok::Sym('[')) if self.peek_at(1) == Some(&Tok::Sym('[')) => Value::Matrix(self.matrix()?),
            Some(Tok::Sym('[')) => Value::Vector(self.vector()?),
            Some(Tok::Sym('{')) => Value::Blaschke(self.blaschke_set()?),
            _ if self.is_ident("diag") && self.peek_at(1) == Some(&Tok::Sym('(')) => {
                self.at += 2;
                let items = self.list(')')?;
                let n = items.len();
                Value::Matrix(
                    (0..n)
                        .map(|i| (0..n).map(|j| if i == j { items[i].clone() } else { RationalFn::zero() }).collect())
                        .collect(),
                )
            }
            _ => match self.entry()? {
                Entry::Rational(f) => Value::Function(f),
                Entry::Lacunary(t) => Value::Lacunary(t),
            },
        };
        if self.at < self.toks.len() {
            return self.err("trailing input");
        }
        Ok(v)
    }

    fn list(&mut self, close: char) -> Result<Vec<RationalFn>> {
        let mut items = vec![self.expr()?];
        while self.eat(',') {
            items.push(self.expr()?);
        }
        self.expect(close)?;
        Ok(items)
    }

    fn entry(&mut self) -> Result<Entry> {
        if self.is_ident("lacunary") {
            self.at += 1;
            self.expect('(')?;
            let t = match self.peek() {
                Some(Tok::Num(v)) if v.fract() == 0.0 && *v >= 1.0 && *v <= 30.0 => *v as u32,
                _ => return self.err("lacunary needs a term count between 1 and 30"),
            };
            self.at += 1;
            self.expect(')')?;
            return Ok(Entry::Lacunary(t));
        }
        Ok(Entry::Rational(self.expr()?))
    }

    fn vector(&mut self) -> Result<Vec<Entry>> {
        self.expect('[')?;
        let mut items = vec![self.entry()?];
        while self.eat(',') {
            items.push(self.entry()?);
        }
        self.expect(']')?;
        Ok(items)
    }

    fn matrix(&mut self) -> Result<Vec<Vec<RationalFn>>> {
        self.expect('[')?;
        let mut rows = Vec::new();
        loop {
            self.expect('[')?;
            rows.push(self.list(']')?);
            if !self.eat(',') {
                break;
            }
        }
        self.expect(']')?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return self.err("matrix must be square");
        }
        Ok(rows)
    }

    fn blaschke_set(&mut self) -> Result<FiniteBlaschke> {
        self.expect('{')?;
        let mut zeros = Vec::new();
        if !self.eat('}') {
            loop {
                let pos = self.pos();
                zeros.push(constant_of(&self.expr()?, pos)?);
                if !self.eat(',') {
                    break;
                }
            }
            self.expect('}')?;
        }
        FiniteBlaschke::from_zeros(zeros)
    }

    fn expr(&mut self) -> Result<RationalFn> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalFn> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let pos = self.pos();
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(Error::Parse { pos, msg: "division by zero".into() });
                }
                acc = &acc / &d;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFn> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFn> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        let k = match self.peek() {
            Some(Tok::Num(v)) if v.fract() == 0.0 && *v <= 64.0 => *v as u32,
            _ => return self.err("exponent must be an integer up to 64"),
        };
        self.at += 1;
        let p = base.powi(k);
        if negative {
            p.recip().map_err(|_| Error::Parse { pos: self.pos(), msg: "zero to a negative power".into() })
        } else {
            Ok(p)
        }
    }

    fn atom(&mut self) -> Result<RationalFn> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return self.err("unexpected end of input");
        };
        self.at += 1;
        match tok {
            Tok::Num(v) => {
                if self.is_ident("i") {
                    self.at += 1;
                    Ok(RationalFn::constant(Complex64::new(0.0, v)))
                } else {
                    Ok(RationalFn::constant(Complex64::new(v, 0.0)))
                }
            }
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "z" => Ok(RationalFn::z()),
                "zbar" => Ok(RationalFn::z_pow(-1)),
                "i" => Ok(RationalFn::constant(Complex64::new(0.0, 1.0))),
                "conj" | "b" => {
                    self.expect('(')?;
                    let inner_pos = self.pos();
                    let e = self.expr()?;
                    self.expect(')')?;
                    if name == "conj" {
                        Ok(e.reflect())
                    } else {
                        let a = constant_of(&e, inner_pos)?;
                        if a.norm() >= 1.0 {
                            return Err(Error::Parse { pos: inner_pos, msg: "Blaschke zero must lie in the open disc".into() });
                        }
                        Ok(FiniteBlaschke::from_zeros(vec![a])?.to_rational())
                    }
                }
                other => Err(Error::Parse { pos, msg: format!("unknown name '{other}'") }),
            },
            Tok::Sym(c) => Err(Error::Parse { pos, msg: format!("unexpected '{c}'") }),
        }
    }
}

fn constant_of(f: &RationalFn, pos: usize) -> Result<Complex64> {
    if f.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if f.num().degree() == Some(0) && f.den().degree() == Some(0) {
        Ok(f.num().coeff(0) / f.den().coeff(0))
    } else {
        Err(Error::Parse { pos, msg: "expected a constant".into() })
    }
}

pub fn parse(input: &str) -> Result<Value> {
    let toks = tokenize(input)?;
    if toks.is_empty() {
        return Err(Error::Parse { pos: 0, msg: "empty expression".into() });
    }
    Parser { toks, at: 0, len: input.len() }.value()
}

pub fn parse_function(input: &str) -> Result<RationalFn> {
    match parse(input)? {
        Value::Function(f) => Ok(f),
        Value::Blaschke(b) => Ok(b.to_rational()),
        _ => Err(Error::Parse { pos: 0, msg: "expected a scalar function".into() }),
    }
}

/// A scalar entry; `lacunary(t)` is accepted.
pub fn parse_entry(input: &str) -> Result<Entry> {
    match parse(input)? {
        Value::Function(f) => Ok(Entry::Rational(f)),
        Value::Blaschke(b) => Ok(Entry::Rational(b.to_rational())),
        Value::Lacunary(t) => Ok(Entry::Lacunary(t)),
        _ => Err(Error::Parse { pos: 0, msg: "expected a scalar function".into() }),
    }
}

/// A vector; a bare scalar is a vector of length one.
pub fn parse_vector(input: &str) -> Result<Vec<Entry>> {
    match parse(input)? {
        Value::Vector(v) => Ok(v),
        Value::Function(f) => Ok(vec![Entry::Rational(f)]),
        Value::Lacunary(t) => Ok(vec![Entry::Lacunary(t)]),
        _ => Err(Error::Parse { pos: 0, msg: "expected a vector".into() }),
    }
}

/// A square matrix of rational functions; a bare scalar is `1 x 1`.
pub fn parse_matrix(input: &str) -> Result<Vec<Vec<RationalFn>>> {
    match parse(input)? {
        Value::Matrix(m) => Ok(m),
        Value::Function(f) => Ok(vec![vec![f]]),
        _ => Err(Error::Parse { pos: 0, msg: "expected a matrix".into() }),
    }
}

/// A finite Blaschke product: `{a, ...}` or a product of `b(a)` factors and `z`.
pub fn parse_blaschke(input: &str) -> Result<FiniteBlaschke> {
    match parse(input)? {
        Value::Blaschke(b) => Ok(b),
        Value::Function(f) => {
            let zeros = f.zeros();
            let b = FiniteBlaschke::from_zeros(zeros)?;
            let ratio = &f / &b.to_rational();
            let c = constant_of(&ratio, 0)
                .map_err(|_| Error::Parse { pos: 0, msg: "not a finite Blaschke product".into() })?;
            if (c.norm() - 1.0).abs() > 1e-10 {
                return Err(Error::Parse { pos: 0, msg: "not a finite Blaschke product".into() });
            }
            FiniteBlaschke::new(b.zeros().to_vec(), c)
        }
        _ => Err(Error::Parse { pos: 0, msg: "expected a Blaschke product".into() }),
    }
}

/// Matrix rows given as a scalar, `[[..], ..]` or `diag(..)`; a vector
/// `[a, b]` is read as a column.
pub fn parse_column_or_matrix(input: &str) -> Result<Vec<Vec<RationalFn>>> {
    match parse(input)? {
        Value::Matrix(m) => Ok(m),
        Value::Function(f) => Ok(vec![vec![f]]),
        Value::Vector(v) => v
            .into_iter()
            .map(|e| match e {
                Entry::Rational(f) => Ok(vec![f]),
                Entry::Lacunary(_) => Err(Error::Parse { pos: 0, msg: "expected rational entries".into() }),
            })
            .collect(),
        _ => Err(Error::Parse { pos: 0, msg: "expected a matrix or column".into() }),
    }
}

impl Polynomial {
    fn is_constant_one(&self) -> bool {
        self.degree() == Some(0) && (self.coeff(0) - 1.0).norm() == 0.0
    }
}

/// Human-readable form of a polynomial-over-polynomial, for reports.
pub fn display(f: &RationalFn) -> String {
    fn poly(p: &Polynomial) -> String {
        let mut parts = Vec::new();
        for (k, c) in p.coeffs().iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            let coef = if c.im == 0.0 { format!("{}", c.re) } else { format!("({}{:+}i)", c.re, c.im) };
            parts.push(match k {
                0 => coef,
                1 => format!("{coef}*z"),
                _ => format!("{coef}*z^{k}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
    if f.den().is_constant_one() {
        poly(f.num())
    } else {
        format!("({}) / ({})", poly(f.num()), poly(f.den()))
    }
}
