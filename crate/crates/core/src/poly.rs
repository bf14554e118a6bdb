//! Sparse multivariate polynomials over Q(ζₙ) and a small expression parser.
//!
//! The expression grammar accepts sums and products with implicit
//! multiplication (`2ae2e8^2`, `-a(w+1)e8`), integer powers, parentheses and
//! division by nonzero constants. Identifiers are either `e` followed by
//! digits or a single letter; `w` denotes ζₙ unless rebound.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::cyclo::{Cyclo, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error in {text:?} at byte {pos}: {msg}")]
    Syntax { text: String, pos: usize, msg: String },
    #[error("unbound identifier {0:?}")]
    Unbound(String),
    #[error("division by a non-constant or zero expression")]
    BadDivision,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Rational),
    Ident(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        if ch.is_ascii_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Num(text[start..i].parse().expect("digits"))));
        } else if ch.is_ascii_alphabetic() {
            let start = i;
            i += 1;
            if ch == 'e' || ch == 'x' {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if "+-*/^()".contains(ch) {
            out.push((i, Tok::Sym(ch)));
            i += 1;
        } else {
            return Err(ExprError::Syntax {
                text: text.to_string(),
                pos: i,
                msg: format!("unexpected character {ch:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ExprError {
        let pos = self.toks.get(self.pos).map_or(self.text.len(), |t| t.0);
        ExprError::Syntax { text: self.text.to_string(), pos, msg: msg.to_string() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.product()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::Sym('(')))
    }

    fn product(&mut self) -> Result<Expr, ExprError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.product()?)));
        }
        let mut lhs = self.power()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.power()?));
            } else if self.starts_atom() {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(k)) => {
                    self.pos += 1;
                    let k: u32 = k.try_into().map_err(|_| self.err("exponent too large"))?;
                    Ok(Expr::Pow(Box::new(base), k))
                }
                _ => Err(self.err("expected integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Expr::Num(Rational::from_integer(v)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Ok(Expr::Ident(name))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            _ => Err(self.err("expected a number, identifier or '('")),
        }
    }
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr, ExprError> {
        let toks = tokenize(text)?;
        let mut p = Parser { text, toks, pos: 0 };
        if p.toks.is_empty() {
            return Err(p.err("empty expression"));
        }
        let e = p.sum()?;
        if p.pos != p.toks.len() {
            return Err(p.err("trailing input"));
        }
        Ok(e)
    }

    /// All identifiers in order of first appearance.
    pub fn identifiers(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_idents(&mut out);
        out
    }

    fn collect_idents(&self, out: &mut Vec<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Ident(s) => {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_idents(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_idents(out);
                b.collect_idents(out);
            }
        }
    }

    /// Evaluates to a polynomial. Identifiers found in `vars` become the
    /// corresponding polynomial variables; those in `values` are substituted;
    /// `w` defaults to ζₙ.
    pub fn to_poly(
        &self,
        n: u32,
        vars: &HashMap<String, usize>,
        nvars: usize,
        values: &HashMap<String, Cyclo>,
    ) -> Result<Poly, ExprError> {
        let rec = |e: &Expr| e.to_poly(n, vars, nvars, values);
        Ok(match self {
            Expr::Num(q) => Poly::constant(nvars, Cyclo::from_rational(n, q.clone())),
            Expr::Ident(s) => {
                if let Some(&i) = vars.get(s) {
                    Poly::var(n, nvars, i)
                } else if let Some(v) = values.get(s) {
                    Poly::constant(nvars, v.clone())
                } else if s == "w" {
                    Poly::constant(nvars, Cyclo::omega(n))
                } else {
                    return Err(ExprError::Unbound(s.clone()));
                }
            }
            Expr::Neg(a) => rec(a)?.neg(),
            Expr::Add(a, b) => rec(a)?.add(&rec(b)?),
            Expr::Sub(a, b) => rec(a)?.sub(&rec(b)?),
            Expr::Mul(a, b) => rec(a)?.mul(&rec(b)?),
            Expr::Div(a, b) => {
                let d = rec(b)?;
                let c = d.as_constant().filter(|c| !c.is_zero()).ok_or(ExprError::BadDivision)?;
                rec(a)?.scale(&c.inv().expect("nonzero"))
            }
            Expr::Pow(_, 0) => Poly::constant(nvars, Cyclo::one(n)),
            Expr::Pow(a, k) => rec(a)?.pow(*k),
        })
    }

    /// Evaluates to a field element with every identifier bound.
    pub fn eval(&self, n: u32, values: &HashMap<String, Cyclo>) -> Result<Cyclo, ExprError> {
        let p = self.to_poly(n, &HashMap::new(), 0, values)?;
        Ok(p.as_constant().unwrap_or_else(|| Cyclo::zero(n)))
    }
}

pub type Monomial = Vec<u32>;

/// A polynomial in `nvars` variables with Q(ζₙ) coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Cyclo>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Cyclo) -> Poly {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(n: u32, nvars: usize, i: usize) -> Poly {
        let mut m = vec![0; nvars];
        m[i] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(m, Cyclo::one(n));
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Cyclo> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    pub fn as_constant(&self) -> Option<Cyclo> {
        match self.terms.len() {
            0 => None,
            1 => {
                let (m, c) = self.terms.iter().next().expect("one term");
                m.iter().all(|&e| e == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn insert(&mut self, m: Monomial, c: Cyclo) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                *slot += &c;
                if slot.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Cyclo) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.insert(m.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.insert(m, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = match self.terms.values().next() {
            Some(c) => Poly::constant(self.nvars, Cyclo::one(c.order())),
            None => {
                assert!(k > 0, "0^0 is undefined");
                return self.clone();
            }
        };
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[i] -= 1;
            let k = Rational::from_integer(BigInt::from(m[i]));
            out.insert(m2, c.scale(&k));
        }
        out
    }

    pub fn eval(&self, point: &[Cyclo]) -> Option<Cyclo> {
        let mut acc: Option<Cyclo> = None;
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    t = &t * x;
                }
            }
            acc = Some(match acc {
                Some(a) => a + t,
                None => t,
            });
        }
        acc
    }

    /// Coefficients of a polynomial of degree at most one, or None otherwise.
    /// Returns (constant term, linear coefficients).
    pub fn linear_parts(&self, n: u32) -> Option<(Cyclo, Vec<Cyclo>)> {
        let mut constant = Cyclo::zero(n);
        let mut lin = vec![Cyclo::zero(n); self.nvars];
        for (m, c) in &self.terms {
            let deg: u32 = m.iter().sum();
            match deg {
                0 => constant = c.clone(),
                1 => {
                    let i = m.iter().position(|&e| e == 1).expect("linear monomial");
                    lin[i] = c.clone();
                }
                _ => return None,
            }
        }
        Some((constant, lin))
    }

    /// Renders with variable names `names[i]`.
    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        // Highest total degree first, then lexicographic on exponents.
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (k, (m, c)) in items.into_iter().enumerate() {
            let mono: String = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { names[i].clone() } else { format!("{}^{}", names[i], e) })
                .collect::<Vec<_>>()
                .join("*");
            let (neg, body) = coefficient_text(c, mono.is_empty());
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (body.is_empty(), mono.is_empty()) {
                (true, _) => out.push_str(&mono),
                (false, true) => out.push_str(&body),
                (false, false) => {
                    out.push_str(&body);
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        out
    }
}

/// Splits a coefficient into a sign and a body suitable for a product.
/// An empty body means a unit coefficient on a nonconstant monomial.
pub fn coefficient_text(c: &Cyclo, standalone: bool) -> (bool, String) {
    if let Some(q) = c.as_rational() {
        let neg = q < &Rational::from_integer(0.into());
        let a = if neg { -q.clone() } else { q.clone() };
        let one = a == Rational::from_integer(1.into());
        if one && !standalone {
            return (neg, String::new());
        }
        let s = if a.is_integer() { a.numer().to_string() } else { format!("({}/{})", a.numer(), a.denom()) };
        return (neg, s);
    }
    let neg_c = -c;
    let s = c.to_string();
    let t = neg_c.to_string();
    // Prefer pulling a leading minus out when every term is negative.
    if !t.contains('-') {
        (true, format!("({t})"))
    } else {
        (false, format!("({s})"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        f.write_str(&self.render(&names))
    }
}

/// Parses a polynomial in `e1..e{dim}` (also accepting `x1..`), with other
/// identifiers bound through `values`.
pub fn parse_basis_poly(
    n: u32,
    dim: usize,
    text: &str,
    values: &HashMap<String, Cyclo>,
) -> Result<Poly, ExprError> {
    let mut vars = HashMap::new();
    for i in 0..dim {
        vars.insert(format!("e{}", i + 1), i);
        vars.insert(format!("x{}", i + 1), i);
    }
    Expr::parse(text)?.to_poly(n, &vars, dim, values)
}
