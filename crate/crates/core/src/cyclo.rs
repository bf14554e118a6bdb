//! Exact arithmetic in the cyclotomic field Q(ζₙ) for prime n.
//!
//! An element is stored as the residue of a rational polynomial modulo the
//! cyclotomic polynomial Φₙ(x) = 1 + x + ... + x^{n-1}, so it carries exactly
//! n - 1 coefficients. The text form writes ζₙ as `w`, e.g. `1-2w` or
//! `(1/3)w^2`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("cyclotomic order {0} is not supported (must be prime)")]
    UnsupportedOrder(u32),
    #[error("operands live in different fields: Q(zeta_{0}) and Q(zeta_{1})")]
    OrderMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse field element {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

/// An element of Q(ζₙ).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclo {
    n: u32,
    coeffs: Vec<Rational>,
}

pub fn is_supported_order(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn check_order(n: u32) -> Result<(), FieldError> {
    if is_supported_order(n) {
        Ok(())
    } else {
        Err(FieldError::UnsupportedOrder(n))
    }
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

impl Cyclo {
    /// Builds an element from its coefficient list in the power basis
    /// 1, ζ, ..., ζ^{n-2}. Longer lists are reduced modulo Φₙ.
    pub fn new(n: u32, coeffs: Vec<Rational>) -> Result<Cyclo, FieldError> {
        check_order(n)?;
        let mut full = vec![Rational::zero(); n as usize];
        for (k, c) in coeffs.into_iter().enumerate() {
            full[k % n as usize] += c;
        }
        Ok(Cyclo::reduce(n, full))
    }

    /// Collapses a length-n vector indexed by exponents mod n using ζ^{n-1} = -(1 + ... + ζ^{n-2}).
    fn reduce(n: u32, mut full: Vec<Rational>) -> Cyclo {
        let top = full.pop().unwrap_or_else(Rational::zero);
        if !top.is_zero() {
            for c in full.iter_mut() {
                *c -= &top;
            }
        }
        Cyclo { n, coeffs: full }
    }

    pub fn zero(n: u32) -> Cyclo {
        assert!(is_supported_order(n), "unsupported cyclotomic order {n}");
        Cyclo { n, coeffs: vec![Rational::zero(); n as usize - 1] }
    }

    pub fn one(n: u32) -> Cyclo {
        Cyclo::from_rational(n, Rational::one())
    }

    pub fn from_int(n: u32, v: i64) -> Cyclo {
        Cyclo::from_rational(n, Rational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(n: u32, q: Rational) -> Cyclo {
        let mut z = Cyclo::zero(n);
        z.coeffs[0] = q;
        z
    }

    /// ζₙ^k for any integer k.
    pub fn root_power(n: u32, k: i64) -> Result<Cyclo, FieldError> {
        check_order(n)?;
        let e = k.rem_euclid(n as i64) as usize;
        let mut full = vec![Rational::zero(); n as usize];
        full[e] = Rational::one();
        Ok(Cyclo::reduce(n, full))
    }

    /// The primitive root ζₙ itself.
    pub fn omega(n: u32) -> Cyclo {
        Cyclo::root_power(n, 1).expect("supported order")
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Returns the rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn arith(&self, other: &Cyclo, op: Op) -> Result<Cyclo, FieldError> {
        if self.n != other.n {
            return Err(FieldError::OrderMismatch(self.n, other.n));
        }
        match op {
            Op::Add => Ok(self.add_same(other)),
            Op::Sub => Ok(self.sub_same(other)),
            Op::Mul => Ok(self.mul_same(other)),
            Op::Div => Ok(self.mul_same(&other.inv()?)),
        }
    }

    fn add_same(&self, other: &Cyclo) -> Cyclo {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Cyclo { n: self.n, coeffs }
    }

    fn sub_same(&self, other: &Cyclo) -> Cyclo {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Cyclo { n: self.n, coeffs }
    }

    fn mul_same(&self, other: &Cyclo) -> Cyclo {
        let n = self.n as usize;
        let mut full = vec![Rational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    full[(i + j) % n] += a * b;
                }
            }
        }
        Cyclo::reduce(self.n, full)
    }

    pub fn scale(&self, q: &Rational) -> Cyclo {
        Cyclo { n: self.n, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φₙ.
    pub fn inv(&self) -> Result<Cyclo, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Cyclo::from_rational(self.n, q.recip()));
        }
        let phi = vec![Rational::one(); self.n as usize];
        let a = trim(self.coeffs.clone());
        // Invariant: s * a ≡ r (mod Φₙ).
        let (mut r0, mut r1) = (phi, a);
        let (mut s0, mut s1) = (Vec::new(), vec![Rational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // Φₙ is irreducible, so the last remainder is a nonzero constant.
        let c = r1[0].recip();
        let coeffs: Vec<Rational> = s1.into_iter().map(|x| x * &c).collect();
        Cyclo::new(self.n, coeffs)
    }

    /// Raises to an integer power; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Cyclo, FieldError> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Cyclo::one(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_same(&base);
            }
            base = base.mul_same(&base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// The Galois conjugate ζ ↦ ζ^k for k coprime to n.
    pub fn galois(&self, k: i64) -> Cyclo {
        let n = self.n as usize;
        let mut full = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = (i as i64 * k).rem_euclid(n as i64) as usize;
            full[e] += c;
        }
        Cyclo::reduce(self.n, full)
    }

    /// Complex conjugation, i.e. ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Cyclo {
        self.galois(-1)
    }

    /// The field norm down to Q.
    pub fn norm(&self) -> Rational {
        let mut acc = self.clone();
        for k in 2..self.n as i64 {
            acc = acc.mul_same(&self.galois(k));
        }
        acc.as_rational().cloned().expect("norm is rational")
    }

    pub fn parse(n: u32, text: &str) -> Result<Cyclo, FieldError> {
        check_order(n)?;
        let err = || FieldError::Parse(text.to_string());
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err());
        }
        let bytes = s.as_bytes();
        let mut full = vec![Rational::zero(); n as usize];
        let mut pos = 0;
        let mut first = true;
        while pos < bytes.len() {
            let mut sign = Rational::one();
            match bytes[pos] {
                b'+' if !first => pos += 1,
                b'-' => {
                    sign = -sign;
                    pos += 1;
                }
                _ if first => {}
                _ => return Err(err()),
            }
            first = false;
            let (coef, next) = parse_coef(&s, pos).ok_or_else(err)?;
            pos = next;
            let mut exp = 0usize;
            if pos < bytes.len() && bytes[pos] == b'w' {
                pos += 1;
                exp = 1;
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    let start = pos;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    exp = s[start..pos].parse().map_err(|_| err())?;
                }
            } else if coef.is_none() {
                return Err(err());
            }
            let c = coef.unwrap_or_else(Rational::one) * sign;
            full[exp % n as usize] += c;
        }
        Ok(Cyclo::reduce(n, full))
    }
}

/// Reads an optional integer or parenthesised fraction starting at `pos`.
fn parse_coef(s: &str, pos: usize) -> Option<(Option<Rational>, usize)> {
    let bytes = s.as_bytes();
    if pos >= bytes.len() {
        return None;
    }
    if bytes[pos] == b'(' {
        let close = s[pos..].find(')')? + pos;
        let inner = &s[pos + 1..close];
        let q = parse_rational(inner)?;
        return Some((Some(q), close + 1));
    }
    let mut end = pos;
    while end < bytes.len() && bytes[end].is_ascii_digit() {
        end += 1;
    }
    if end == pos {
        return Some((None, pos));
    }
    let v: BigInt = s[pos..end].parse().ok()?;
    Some((Some(Rational::from_integer(v)), end))
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let len = a.len().max(b.len());
    let z = Rational::zero();
    let out = (0..len).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect();
    trim(out)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = trim(a.to_vec());
    let lead = b.last().expect("nonzero divisor").clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Rational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lead;
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= &f * c;
        }
        q[shift] = f;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

fn write_magnitude(f: &mut fmt::Formatter<'_>, m: &Rational, bare_one: bool) -> fmt::Result {
    if m.is_integer() {
        if !(bare_one && m.is_one()) {
            write!(f, "{}", m.numer())?;
        }
        Ok(())
    } else {
        write!(f, "({}/{})", m.numer(), m.denom())
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c.is_negative() {
                f.write_str("-")?;
            } else if wrote {
                f.write_str("+")?;
            }
            write_magnitude(f, &c.abs(), k > 0)?;
            match k {
                0 => {}
                1 => f.write_str("w")?,
                _ => write!(f, "w^{k}")?,
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclo<{}>({})", self.n, self)
    }
}

/// Parses with the order fixed to 3, the only field needed for sl(3).
impl FromStr for Cyclo {
    type Err = FieldError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Cyclo::parse(3, s)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:expr) => {
        impl $tr<&Cyclo> for &Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: &Cyclo) -> Cyclo {
                self.arith(rhs, $op).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: Cyclo) -> Cyclo {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: &Cyclo) -> Cyclo {
                (&self).$method(rhs)
            }
        }
        impl $tr<Cyclo> for &Cyclo {
            type Output = Cyclo;
            fn $method(self, rhs: Cyclo) -> Cyclo {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, Op::Add);
binop!(Sub, sub, Op::Sub);
binop!(Mul, mul, Op::Mul);
binop!(Div, div, Op::Div);

impl AddAssign<&Cyclo> for Cyclo {
    fn add_assign(&mut self, rhs: &Cyclo) {
        assert_eq!(self.n, rhs.n, "{}", FieldError::OrderMismatch(self.n, rhs.n));
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&Cyclo> for Cyclo {
    fn sub_assign(&mut self, rhs: &Cyclo) {
        assert_eq!(self.n, rhs.n, "{}", FieldError::OrderMismatch(self.n, rhs.n));
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl MulAssign<&Cyclo> for Cyclo {
    fn mul_assign(&mut self, rhs: &Cyclo) {
        *self = &*self * rhs;
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(mut self) -> Cyclo {
        for c in self.coeffs.iter_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -self.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3(s: &str) -> Cyclo {
        Cyclo::parse(3, s).unwrap()
    }

    #[test]
    fn omega_cubed_is_one() {
        let w = Cyclo::omega(3);
        assert!(w.pow(3).unwrap().is_one());
        assert_eq!(w.pow(2).unwrap(), c3("-1-w"));
    }

    #[test]
    fn display_forms() {
        assert_eq!(c3("1-2w").to_string(), "1-2w");
        assert_eq!(c3("(1/3)w").to_string(), "(1/3)w");
        assert_eq!(Cyclo::zero(3).to_string(), "0");
        assert_eq!(Cyclo::root_power(5, 3).unwrap().to_string(), "w^3");
        assert_eq!(c3("-(1/2)-w").to_string(), "-(1/2)-w");
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "w^", "1++w", "x", "(1/0)", "1w2"] {
            assert!(Cyclo::parse(3, bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn unsupported_orders() {
        assert_eq!(Cyclo::root_power(4, 1), Err(FieldError::UnsupportedOrder(4)));
        assert!(Cyclo::new(1, vec![]).is_err());
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = Cyclo::one(3);
        let b = Cyclo::one(5);
        assert_eq!(a.arith(&b, Op::Add), Err(FieldError::OrderMismatch(3, 5)));
    }
}
