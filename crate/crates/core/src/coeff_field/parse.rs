//! Text grammars: field specifications and arithmetic expressions.
//!
//! Expressions use `+ - * / ^`, parentheses, integer literals (reduced mod p),
//! the extension generator `a`, and named variables. What a name means is up
//! to the [`Target`] the expression is evaluated into.

use super::gf::{BaseField, BaseScalar};
use super::mpoly::MPoly;
use super::{CoeffField, FieldElement, Ring};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(i64),
    Name(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Name(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = chars[start..i].iter().collect();
            out.push(Tok::Int(t.parse().map_err(|_| Error::Parse(format!("bad integer {t}")))?));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Name(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }
    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }
    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }
    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }
    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    Ok(Expr::Pow(Box::new(base), if neg { -n } else { n }))
                }
                other => Err(Error::Parse(format!("expected integer exponent, found {other:?}"))),
            }
        } else {
            Ok(base)
        }
    }
    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Name(s)) => {
                self.pos += 1;
                Ok(Expr::Name(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in {s:?}")));
    }
    Ok(e)
}

/// Something an [`Expr`] can be evaluated into.
pub trait Target {
    type V: Clone;
    fn int(&self, n: i64) -> Result<Self::V>;
    fn name(&self, s: &str) -> Result<Self::V>;
    fn add(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;
    fn sub(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;
    fn div(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;
    fn neg(&self, a: &Self::V) -> Result<Self::V>;
    fn one(&self) -> Result<Self::V> {
        self.int(1)
    }
    fn pow(&self, a: &Self::V, n: i64) -> Result<Self::V> {
        let mut base = if n < 0 { self.div(&self.one()?, a)? } else { a.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = self.one()?;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }
}

pub fn eval<T: Target>(e: &Expr, t: &T) -> Result<T::V> {
    Ok(match e {
        Expr::Int(n) => t.int(*n)?,
        Expr::Name(s) => t.name(s)?,
        Expr::Neg(a) => t.neg(&eval(a, t)?)?,
        Expr::Add(a, b) => t.add(&eval(a, t)?, &eval(b, t)?)?,
        Expr::Sub(a, b) => t.sub(&eval(a, t)?, &eval(b, t)?)?,
        Expr::Mul(a, b) => t.mul(&eval(a, t)?, &eval(b, t)?)?,
        Expr::Div(a, b) => t.div(&eval(a, t)?, &eval(b, t)?)?,
        Expr::Pow(a, n) => t.pow(&eval(a, t)?, *n)?,
    })
}

/// The generator `a` of F_{p^e} as an element (for e = 1 the name is rejected).
pub fn base_generator(f: &BaseField) -> Result<BaseScalar> {
    f.generator().ok_or_else(|| Error::Parse("`a` is only defined for extension fields".into()))
}

/// Evaluates expressions into K.
struct ElemTarget<'a>(&'a CoeffField);

impl Target for ElemTarget<'_> {
    type V = FieldElement;
    fn int(&self, n: i64) -> Result<FieldElement> {
        Ok(self.0.from_int(n))
    }
    fn name(&self, s: &str) -> Result<FieldElement> {
        if s == "a" {
            return Ok(self.0.from_base(base_generator(self.0.base())?));
        }
        match self.0.var_names().iter().position(|v| v == s) {
            Some(i) => Ok(self.0.var(i)),
            None => Err(Error::Parse(format!("unknown symbol {s:?}"))),
        }
    }
    fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(Ring::add(self.0, a, b))
    }
    fn sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(Ring::sub(self.0, a, b))
    }
    fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(Ring::mul(self.0, a, b))
    }
    fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        self.0.div_elem(a, b)
    }
    fn neg(&self, a: &FieldElement) -> Result<FieldElement> {
        Ok(Ring::neg(self.0, a))
    }
    fn pow(&self, a: &FieldElement, n: i64) -> Result<FieldElement> {
        self.0.pow_elem(a, n)
    }
}

/// Parses an element of K.
pub fn parse_element(k: &CoeffField, s: &str) -> Result<FieldElement> {
    eval(&parse_expr(s)?, &ElemTarget(k))
}

/// Parses `GF(p)`, `GF(p^e)`, `GF(p^e; modulus=<poly in a>)`, optionally
/// followed by `(u1,...,ur)`.
pub fn parse_field(s: &str) -> Result<CoeffField> {
    let s = s.trim();
    let rest = s.strip_prefix("GF(").ok_or_else(|| Error::Parse(format!("field spec must start with GF(: {s:?}")))?;
    let close = rest.find(')').ok_or_else(|| Error::Parse("unterminated GF(".into()))?;
    let inner = &rest[..close];
    let tail = rest[close + 1..].trim();
    let (order, modulus) = match inner.split_once(';') {
        Some((o, m)) => {
            let m = m.trim();
            let m = m
                .strip_prefix("modulus")
                .map(|x| x.trim_start())
                .and_then(|x| x.strip_prefix('='))
                .ok_or_else(|| Error::Parse(format!("expected modulus=... in {inner:?}")))?;
            (o.trim(), Some(m.trim()))
        }
        None => (inner.trim(), None),
    };
    let (p, e) = match order.split_once('^') {
        Some((p, e)) => (
            p.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad prime {p:?}")))?,
            e.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad exponent {e:?}")))?,
        ),
        None => (order.parse::<u32>().map_err(|_| Error::Parse(format!("bad field order {order:?}")))?, 1),
    };
    let modulus = match modulus {
        Some(m) => Some(parse_fp_univariate(m, p)?),
        None => None,
    };
    let base = BaseField::new(p, e, modulus)?;
    let vars = if tail.is_empty() {
        Vec::new()
    } else {
        let t = tail
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected (u1,...,ur) after GF(...): {tail:?}")))?;
        t.split(',').map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect()
    };
    CoeffField::new(base, vars)
}

struct FpUni {
    p: u32,
}

impl Target for FpUni {
    type V = Vec<u32>;
    fn int(&self, n: i64) -> Result<Vec<u32>> {
        Ok(vec![n.rem_euclid(self.p as i64) as u32])
    }
    fn name(&self, s: &str) -> Result<Vec<u32>> {
        if s == "a" || s == "x" {
            Ok(vec![0, 1])
        } else {
            Err(Error::Parse(format!("modulus must be a polynomial in a, found {s:?}")))
        }
    }
    fn add(&self, a: &Vec<u32>, b: &Vec<u32>) -> Result<Vec<u32>> {
        let mut r = vec![0; a.len().max(b.len())];
        for (i, x) in a.iter().enumerate() {
            r[i] = (r[i] + x) % self.p;
        }
        for (i, x) in b.iter().enumerate() {
            r[i] = (r[i] + x) % self.p;
        }
        Ok(r)
    }
    fn neg(&self, a: &Vec<u32>) -> Result<Vec<u32>> {
        Ok(a.iter().map(|x| (self.p - x % self.p) % self.p).collect())
    }
    fn sub(&self, a: &Vec<u32>, b: &Vec<u32>) -> Result<Vec<u32>> {
        self.add(a, &self.neg(b)?)
    }
    fn mul(&self, a: &Vec<u32>, b: &Vec<u32>) -> Result<Vec<u32>> {
        let mut r = vec![0; a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + x * y) % self.p;
            }
        }
        Ok(r)
    }
    fn div(&self, _: &Vec<u32>, _: &Vec<u32>) -> Result<Vec<u32>> {
        Err(Error::Parse("division not allowed in a modulus".into()))
    }
}

fn parse_fp_univariate(s: &str, p: u32) -> Result<Vec<u32>> {
    let mut v = eval(&parse_expr(s)?, &FpUni { p })?;
    while v.last() == Some(&0) {
        v.pop();
    }
    Ok(v)
}

/// Formats a polynomial over F_q with the given variable names.
pub fn format_mpoly(a: &MPoly, names: &[&str], f: &BaseField) -> String {
    if a.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (m, c) in a.terms() {
        let mut factors = Vec::new();
        for (i, &e) in m.exps().iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(names[i].to_string()),
                _ => factors.push(format!("{}^{}", names[i], e)),
            }
        }
        let coeff = f.format(*c);
        let term = if factors.is_empty() {
            coeff
        } else if *c == BaseScalar::ONE {
            factors.join("*")
        } else {
            format!("{}*{}", coeff, factors.join("*"))
        };
        parts.push(term);
    }
    parts.join(" + ")
}
