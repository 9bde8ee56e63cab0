//! Exact arithmetic in real quadratic fields.
//!
//! A [`QuadIrr`] is an element (p + q*sqrt(d))/r of Q(sqrt(d)) with
//! unbounded integers p, q, positive denominator r and squarefree field
//! label d > 1. Values are kept in the canonical form gcd(p, q, r) = 1,
//! r > 0, so equality and hashing are structural. The first embedding
//! sends sqrt(d) to the positive square root, the second to the negative
//! one; signs at either embedding are decided by integer comparisons
//! alone.
//!
//! A [`SurdValue`] is a rational multiple c*sqrt(n) of a single square
//! root with n squarefree; module volumes live here.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{CuspError, Result};
use crate::quadfield::squarefree_decompose;

/// Exact rational number with unbounded integer parts.
pub type Rational = num_rational::BigRational;

/// The two real embeddings of a real quadratic field. `First` fixes
/// sqrt(d) > 0, `Second` sends sqrt(d) to -sqrt(d).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Embedding {
    First,
    Second,
}

/// Arithmetic operations accepted by [`qi_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// An element (p + q*sqrt(d))/r of the real quadratic field Q(sqrt(d)).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadIrr {
    p: BigInt,
    q: BigInt,
    r: BigInt,
    d: BigInt,
}

impl QuadIrr {
    /// Builds (p + q*sqrt(d))/r, validating that d is squarefree and > 1.
    pub fn new(p: BigInt, q: BigInt, r: BigInt, d: BigInt) -> Result<Self> {
        if r.is_zero() {
            return Err(CuspError::DivisionByZero);
        }
        if d < BigInt::from(2) {
            return Err(CuspError::InvalidFieldLabel(d));
        }
        let (sf, f) = squarefree_decompose(&d);
        if !f.is_one() {
            return Err(CuspError::InvalidFieldLabel(d));
        }
        Ok(Self::make(p, q, r, sf))
    }

    /// Internal constructor: d is already known to be squarefree > 1.
    pub(crate) fn make(p: BigInt, q: BigInt, r: BigInt, d: BigInt) -> Self {
        debug_assert!(!r.is_zero());
        let (mut p, mut q, mut r) = (p, q, r);
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        Self { p, q, r, d }
    }

    /// The rational integer n viewed inside Q(sqrt(d)).
    pub fn integer(n: impl Into<BigInt>, d: &BigInt) -> Self {
        Self::make(n.into(), BigInt::zero(), BigInt::one(), d.clone())
    }

    /// The rational num/den viewed inside Q(sqrt(d)).
    pub fn rational(num: impl Into<BigInt>, den: impl Into<BigInt>, d: &BigInt) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(CuspError::DivisionByZero);
        }
        Ok(Self::make(num.into(), BigInt::zero(), den, d.clone()))
    }

    pub fn from_rational(x: &Rational, d: &BigInt) -> Self {
        Self::make(
            x.numer().clone(),
            BigInt::zero(),
            x.denom().clone(),
            d.clone(),
        )
    }

    /// sqrt(d) itself.
    pub fn sqrt_d(d: &BigInt) -> Self {
        Self::make(BigInt::zero(), BigInt::one(), BigInt::one(), d.clone())
    }

    pub fn zero(d: &BigInt) -> Self {
        Self::integer(0, d)
    }

    pub fn one(d: &BigInt) -> Self {
        Self::integer(1, d)
    }

    pub fn numer_rat(&self) -> &BigInt {
        &self.p
    }

    pub fn numer_surd(&self) -> &BigInt {
        &self.q
    }

    pub fn denom(&self) -> &BigInt {
        &self.r
    }

    pub fn field(&self) -> &BigInt {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.q.is_zero() && self.r.is_one() && self.p.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    /// True when the value is a rational integer.
    pub fn is_integer(&self) -> bool {
        self.q.is_zero() && self.r.is_one()
    }

    fn check_same_field(&self, other: &Self) -> Result<()> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(CuspError::IncompatibleFields(
                self.d.clone(),
                other.d.clone(),
            ))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        Ok(Self::make(
            &self.p * &other.r + &other.p * &self.r,
            &self.q * &other.r + &other.q * &self.r,
            &self.r * &other.r,
            self.d.clone(),
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        Ok(Self::make(
            &self.p * &other.r - &other.p * &self.r,
            &self.q * &other.r - &other.q * &self.r,
            &self.r * &other.r,
            self.d.clone(),
        ))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        Ok(Self::make(
            &self.p * &other.p + &self.q * &other.q * &self.d,
            &self.p * &other.q + &self.q * &other.p,
            &self.r * &other.r,
            self.d.clone(),
        ))
    }

    /// Division rationalizes by the conjugate of the divisor.
    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        let inv = other.inverse()?;
        self.checked_mul(&inv)
    }

    /// 1/x, exact. x = (p + q*sqrt(d))/r gives r*(p - q*sqrt(d))/(p^2 - q^2 d).
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(CuspError::DivisionByZero);
        }
        let denom = &self.p * &self.p - &self.q * &self.q * &self.d;
        debug_assert!(!denom.is_zero());
        Ok(Self::make(
            &self.r * &self.p,
            -(&self.r * &self.q),
            denom,
            self.d.clone(),
        ))
    }

    pub fn neg(&self) -> Self {
        Self::make(-&self.p, -&self.q, self.r.clone(), self.d.clone())
    }

    /// Image under the second embedding, re-expressed over the first.
    pub fn conj(&self) -> Self {
        Self::make(self.p.clone(), -&self.q, self.r.clone(), self.d.clone())
    }

    /// Scales by a rational number.
    pub fn scale(&self, s: &Rational) -> Self {
        Self::make(
            &self.p * s.numer(),
            &self.q * s.numer(),
            &self.r * s.denom(),
            self.d.clone(),
        )
    }

    /// x^e for integer e; negative exponents invert (error on zero base).
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one(&self.d);
        let mut sq = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.checked_mul(&sq)?;
            }
            n >>= 1;
            if n > 0 {
                sq = sq.checked_mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Exact sign (-1, 0, +1) of the value under the chosen embedding,
    /// decided by comparing p^2 against q^2 d.
    pub fn sign(&self, emb: Embedding) -> i32 {
        let q = match emb {
            Embedding::First => self.q.clone(),
            Embedding::Second => -&self.q,
        };
        let sp = sign_of(&self.p);
        let sq = sign_of(&q);
        match (sp, sq) {
            (0, 0) => 0,
            (s, 0) => s,
            (0, s) => s,
            (1, 1) => 1,
            (-1, -1) => -1,
            _ => {
                // opposite signs: |p| vs |q| sqrt(d) decides
                let p2 = &self.p * &self.p;
                let q2d = &q * &q * &self.d;
                match p2.cmp(&q2d) {
                    std::cmp::Ordering::Greater => sp,
                    std::cmp::Ordering::Less => sq,
                    // p^2 = q^2 d is impossible for squarefree d > 1, q != 0
                    std::cmp::Ordering::Equal => unreachable!("d is squarefree"),
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign(Embedding::First) > 0
    }

    /// Both embeddings positive.
    pub fn is_totally_positive(&self) -> bool {
        self.sign(Embedding::First) > 0 && self.sign(Embedding::Second) > 0
    }

    /// Exact comparison of the values under the first embedding.
    pub fn cmp_real(&self, other: &Self) -> Result<std::cmp::Ordering> {
        let diff = self.checked_sub(other)?;
        Ok(match diff.sign(Embedding::First) {
            1 => std::cmp::Ordering::Greater,
            -1 => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Equal,
        })
    }

    /// Field norm (product over embeddings) as an exact rational.
    pub fn norm(&self) -> Rational {
        Rational::new(
            &self.p * &self.p - &self.q * &self.q * &self.d,
            &self.r * &self.r,
        )
    }

    /// Field trace (sum over embeddings) as an exact rational.
    pub fn trace(&self) -> Rational {
        Rational::new(BigInt::from(2) * &self.p, self.r.clone())
    }

    /// Exact floor and ceiling of the value under the first embedding.
    ///
    /// floor(q*sqrt(d)) is bracketed with an integer square root, and
    /// floor(x/r) = floor(floor(x)/r) finishes the job for r > 0.
    pub fn floor_ceil(&self) -> (BigInt, BigInt) {
        let fq = if self.q.is_zero() {
            BigInt::zero()
        } else {
            let s = (&self.q * &self.q * &self.d).sqrt();
            if self.q.is_positive() {
                s
            } else {
                // q*sqrt(d) is irrational, so the floor is -isqrt - 1
                -s - 1
            }
        };
        let floor = (&self.p + fq).div_floor(&self.r);
        let ceil = if self.is_integer() {
            floor.clone()
        } else {
            &floor + 1
        };
        (floor, ceil)
    }

    pub fn floor(&self) -> BigInt {
        self.floor_ceil().0
    }

    /// Coordinates (x, y) with self = x + y*omega over the integral basis
    /// (1, omega) of O_k, omega = (1+sqrt(d))/2 when d = 1 mod 4, else sqrt(d).
    pub fn omega_coords(&self) -> (Rational, Rational) {
        if is_one_mod_four(&self.d) {
            (
                Rational::new(&self.p - &self.q, self.r.clone()),
                Rational::new(BigInt::from(2) * &self.q, self.r.clone()),
            )
        } else {
            (
                Rational::new(self.p.clone(), self.r.clone()),
                Rational::new(self.q.clone(), self.r.clone()),
            )
        }
    }

    /// Inverse of [`omega_coords`].
    pub fn from_omega_coords(x: &Rational, y: &Rational, d: &BigInt) -> Self {
        if is_one_mod_four(d) {
            // x + y(1+sqrt(d))/2 = (2x + y + y sqrt(d))/2
            let den = x.denom().lcm(y.denom());
            let xn = x.numer() * (&den / x.denom());
            let yn = y.numer() * (&den / y.denom());
            Self::make(
                BigInt::from(2) * xn + &yn,
                yn,
                BigInt::from(2) * den,
                d.clone(),
            )
        } else {
            let den = x.denom().lcm(y.denom());
            let xn = x.numer() * (&den / x.denom());
            let yn = y.numer() * (&den / y.denom());
            Self::make(xn, yn, den, d.clone())
        }
    }

    /// True when the value lies in the ring of integers O_k.
    pub fn is_algebraic_integer(&self) -> bool {
        let (x, y) = self.omega_coords();
        x.is_integer() && y.is_integer()
    }

    /// Floating approximation for display only.
    pub fn to_f64(&self) -> f64 {
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        let r = self.r.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        (p + q * d.sqrt()) / r
    }

    /// Parses the serialized forms produced by `Display`, plus the obvious
    /// human variants: "5", "-3/2", "sqrt(5)", "2*sqrt(3)", "1+sqrt(5)",
    /// "(1+1*sqrt(5))/2". Square factors of radicands are pulled out, so
    /// "sqrt(12)" lands in Q(sqrt(3)). `ambient` supplies the field label
    /// for purely rational strings and is checked against any radicand.
    pub fn parse(input: &str, ambient: Option<&BigInt>) -> Result<Self> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(CuspError::ParseValue("empty string".into()));
        }
        let bytes = s.as_bytes();
        let (body, outer_den) = if bytes[0] == b'(' {
            let close = matching_paren(bytes)
                .ok_or_else(|| CuspError::ParseValue(format!("unbalanced parens in {input:?}")))?;
            let den = if close + 1 == bytes.len() {
                BigInt::one()
            } else if bytes[close + 1] == b'/' {
                parse_uint(&s[close + 2..])?
            } else {
                return Err(CuspError::ParseValue(format!(
                    "unexpected trailing text in {input:?}"
                )));
            };
            (&s[1..close], den)
        } else {
            (&s[..], BigInt::one())
        };

        let (mut a, mut b, mut dlab): (Rational, Rational, Option<BigInt>) =
            (Rational::zero(), Rational::zero(), None);
        for (sign, term) in split_terms(body)? {
            let (ta, tb, td) = parse_term(term)?;
            let sgn = Rational::from_integer(BigInt::from(sign));
            a += &sgn * ta;
            if let Some(td) = td {
                match &dlab {
                    None => dlab = Some(td),
                    Some(existing) if *existing == td => {}
                    Some(existing) => {
                        return Err(CuspError::IncompatibleFields(existing.clone(), td))
                    }
                }
                b += &sgn * tb;
            }
        }
        let d = match (dlab, ambient) {
            (Some(d), Some(amb)) => {
                if &d != amb {
                    return Err(CuspError::IncompatibleFields(d, amb.clone()));
                }
                d
            }
            (Some(d), None) => d,
            (None, Some(amb)) => amb.clone(),
            (None, None) => {
                return Err(CuspError::ParseValue(format!(
                    "no field label available for rational value {input:?}"
                )));
            }
        };
        let den = a.denom().lcm(b.denom()) * &outer_den;
        let p = a.numer() * (&den / (a.denom() * &outer_den));
        let q = b.numer() * (&den / (b.denom() * &outer_den));
        QuadIrr::new(p, q, den, d)
    }
}

fn sign_of(x: &BigInt) -> i32 {
    match x.sign() {
        num_bigint::Sign::Plus => 1,
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
    }
}

pub(crate) fn is_one_mod_four(d: &BigInt) -> bool {
    d.mod_floor(&BigInt::from(4)).is_one()
}

fn matching_paren(bytes: &[u8]) -> Option<usize> {
    let mut depth = 0usize;
    for (i, &c) in bytes.iter().enumerate() {
        if c == b'(' {
            depth += 1;
        } else if c == b')' {
            depth -= 1;
            if depth == 0 {
                return Some(i);
            }
        }
    }
    None
}

/// Splits "a+b-c" into signed top-level terms, keeping sqrt(..) intact.
fn split_terms(s: &str) -> Result<Vec<(i32, &str)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    let mut sign = 1i32;
    let mut i = 0usize;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => {
                if depth == 0 {
                    return Err(CuspError::ParseValue(format!("unbalanced parens in {s:?}")));
                }
                depth -= 1;
            }
            b'+' | b'-' if depth == 0 && i > start => {
                out.push((sign, &s[start..i]));
                sign = if bytes[i] == b'+' { 1 } else { -1 };
                start = i + 1;
            }
            b'-' if depth == 0 && i == start => {
                sign = -sign;
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    if start >= bytes.len() {
        return Err(CuspError::ParseValue(format!("dangling sign in {s:?}")));
    }
    out.push((sign, &s[start..]));
    Ok(out)
}

/// One additive term: rational and sqrt coefficients plus the reduced radicand.
fn parse_term(term: &str) -> Result<(Rational, Rational, Option<BigInt>)> {
    let (coeff_str, sqrt_str, den_str) = {
        let (head, den) = match term.rfind('/') {
            // a '/' inside sqrt(...) never occurs; radicands are integers
            Some(pos) if !term[pos..].contains(')') || !term[..pos].contains('(') => {
                (&term[..pos], Some(&term[pos + 1..]))
            }
            Some(pos) if term[..pos].matches('(').count() == term[..pos].matches(')').count() => {
                (&term[..pos], Some(&term[pos + 1..]))
            }
            _ => (term, None),
        };
        match head.find("sqrt(") {
            Some(0) => ("", head, den),
            Some(pos) => {
                let coeff = &head[..pos];
                let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
                (coeff, &head[pos..], den)
            }
            None => (head, "", den),
        }
    };

    let den = match den_str {
        Some(ds) => parse_uint(ds)?,
        None => BigInt::one(),
    };
    if sqrt_str.is_empty() {
        let num = parse_int(coeff_str)?;
        return Ok((Rational::new(num, den), Rational::zero(), None));
    }
    let inner = sqrt_str
        .strip_prefix("sqrt(")
        .and_then(|rest| rest.strip_suffix(')'))
        .ok_or_else(|| CuspError::ParseValue(format!("malformed sqrt in {term:?}")))?;
    let radicand = parse_uint(inner)?;
    let coeff = if coeff_str.is_empty() {
        BigInt::one()
    } else {
        parse_int(coeff_str)?
    };
    if radicand.is_zero() {
        return Ok((Rational::zero(), Rational::zero(), None));
    }
    let (d, f) = squarefree_decompose(&radicand);
    if d.is_one() {
        // perfect square radicand: the term is rational
        return Ok((Rational::new(coeff * f, den), Rational::zero(), None));
    }
    Ok((Rational::zero(), Rational::new(coeff * f, den), Some(d)))
}

fn parse_int(s: &str) -> Result<BigInt> {
    BigInt::from_str(s).map_err(|_| CuspError::ParseValue(format!("bad integer {s:?}")))
}

fn parse_uint(s: &str) -> Result<BigInt> {
    let n = parse_int(s)?;
    if n.is_positive() {
        Ok(n)
    } else {
        Err(CuspError::ParseValue(format!(
            "expected positive integer, got {s:?}"
        )))
    }
}

impl fmt::Display for QuadIrr {
    /// Canonical serialization "(p+q*sqrt(d))/r" with the sign of q folded
    /// into the separator.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (sep, qa) = if self.q.is_negative() {
            ("-", -&self.q)
        } else {
            ("+", self.q.clone())
        };
        write!(f, "({}{}{}*sqrt({}))/{}", self.p, sep, qa, self.d, self.r)
    }
}

impl Serialize for QuadIrr {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Dispatcher over the four field operations.
pub fn qi_arith(x: &QuadIrr, y: &QuadIrr, op: ArithOp) -> Result<QuadIrr> {
    match op {
        ArithOp::Add => x.checked_add(y),
        ArithOp::Sub => x.checked_sub(y),
        ArithOp::Mul => x.checked_mul(y),
        ArithOp::Div => x.checked_div(y),
    }
}

/// Exact sign of x under embedding 1 or 2. See [`QuadIrr::sign`].
pub fn qi_sign(x: &QuadIrr, embedding: u8) -> i32 {
    match embedding {
        1 => x.sign(Embedding::First),
        2 => x.sign(Embedding::Second),
        _ => panic!("embedding must be 1 or 2"),
    }
}

/// (norm, trace, conjugate) of x, all exact.
pub fn norm_trace_conj(x: &QuadIrr) -> (Rational, Rational, QuadIrr) {
    (x.norm(), x.trace(), x.conj())
}

/// Exact integer floor and ceiling of x under the first embedding.
pub fn qi_floor_ceil(x: &QuadIrr) -> (BigInt, BigInt) {
    x.floor_ceil()
}

/// A rational multiple c*sqrt(n) of a single square root, n squarefree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurdValue {
    c: Rational,
    n: BigInt,
}

impl SurdValue {
    /// Builds c*sqrt(n), pulling square factors of n into c.
    pub fn new(c: Rational, n: impl Into<BigInt>) -> Result<Self> {
        let n = n.into();
        if !n.is_positive() {
            return Err(CuspError::NonPositiveArgument);
        }
        if c.is_zero() {
            return Ok(Self {
                c,
                n: BigInt::one(),
            });
        }
        let (sf, f) = squarefree_decompose(&n);
        Ok(Self {
            c: c * Rational::from_integer(f),
            n: sf,
        })
    }

    pub fn from_rational(c: Rational) -> Self {
        Self {
            c,
            n: BigInt::one(),
        }
    }

    pub fn zero() -> Self {
        Self {
            c: Rational::zero(),
            n: BigInt::one(),
        }
    }

    pub fn coefficient(&self) -> &Rational {
        &self.c
    }

    pub fn radicand(&self) -> &BigInt {
        &self.n
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.n.is_one()
    }

    pub fn scale(&self, s: &Rational) -> Self {
        let c = &self.c * s;
        if c.is_zero() {
            Self::zero()
        } else {
            Self {
                c,
                n: self.n.clone(),
            }
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            c: self.c.abs(),
            n: self.n.clone(),
        }
    }

    /// 1/(c*sqrt(n)) = (1/(c n)) * sqrt(n).
    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(CuspError::DivisionByZero);
        }
        let cn = &self.c * Rational::from_integer(self.n.clone());
        Ok(Self {
            c: cn.recip(),
            n: self.n.clone(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Self::new(&self.c * &other.c, &self.n * &other.n)
    }

    pub fn to_f64(&self) -> f64 {
        let c = self.c.numer().to_f64().unwrap_or(f64::NAN)
            / self.c.denom().to_f64().unwrap_or(f64::NAN);
        c * self.n.to_f64().unwrap_or(f64::NAN).sqrt()
    }
}

impl fmt::Display for SurdValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*sqrt({})", self.c, self.n)
    }
}

impl Serialize for SurdValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(p: i64, q: i64, r: i64, d: i64) -> QuadIrr {
        QuadIrr::new(p.into(), q.into(), r.into(), d.into()).unwrap()
    }

    #[test]
    fn conjugate_sum_and_unit_norm() {
        let x = qi(1, 1, 1, 3);
        let y = qi(1, -1, 1, 3);
        assert_eq!(qi_arith(&x, &y, ArithOp::Add).unwrap(), qi(2, 0, 1, 3));
        let u = qi(2, 1, 1, 3);
        let v = qi(2, -1, 1, 3);
        assert_eq!(qi_arith(&u, &v, ArithOp::Mul).unwrap(), qi(1, 0, 1, 3));
    }

    #[test]
    fn division_rationalizes() {
        let one = QuadIrr::one(&BigInt::from(3));
        let u = qi(2, 1, 1, 3);
        let inv = qi_arith(&one, &u, ArithOp::Div).unwrap();
        assert_eq!(inv, qi(2, -1, 1, 3));
        assert_eq!(inv.checked_mul(&u).unwrap(), one);
    }

    #[test]
    fn mismatched_fields_and_zero_division_error() {
        let x = qi(1, 1, 1, 3);
        let y = qi(1, 1, 1, 6);
        assert!(matches!(
            qi_arith(&x, &y, ArithOp::Add),
            Err(CuspError::IncompatibleFields(_, _))
        ));
        let z = QuadIrr::zero(&BigInt::from(3));
        assert_eq!(
            qi_arith(&x, &z, ArithOp::Div),
            Err(CuspError::DivisionByZero)
        );
    }

    #[test]
    fn signs_at_both_embeddings() {
        assert_eq!(qi_sign(&qi(2, -1, 1, 3), 1), 1);
        assert_eq!(qi_sign(&qi(0, 1, 1, 3), 2), -1);
        assert_eq!(qi_sign(&QuadIrr::zero(&BigInt::from(3)), 1), 0);
        // close calls decided by the p^2 vs q^2 d comparison
        assert_eq!(qi_sign(&qi(-7, 4, 1, 3), 1), -1); // 4 sqrt(3) = 6.93 < 7
        assert_eq!(qi_sign(&qi(-7, 5, 2, 2), 1), 1); // 5 sqrt(2) = 7.07 > 7
    }

    #[test]
    fn norm_trace_conj_examples() {
        let (n, t, c) = norm_trace_conj(&qi(2, 1, 1, 3));
        assert_eq!(n, Rational::from_integer(1.into()));
        assert_eq!(t, Rational::from_integer(4.into()));
        assert_eq!(c, qi(2, -1, 1, 3));

        let (n, t, c) = norm_trace_conj(&qi(0, 1, 1, 3));
        assert_eq!(n, Rational::from_integer((-3).into()));
        assert_eq!(t, Rational::zero());
        assert_eq!(c, qi(0, -1, 1, 3));

        let golden = qi(1, 1, 2, 5);
        let (n, t, c) = norm_trace_conj(&golden);
        assert_eq!(n, Rational::from_integer((-1).into()));
        assert_eq!(t, Rational::from_integer(1.into()));
        assert_eq!(c, qi(1, -1, 2, 5));
    }

    #[test]
    fn floor_ceil_examples() {
        assert_eq!(qi_floor_ceil(&qi(2, 1, 1, 3)), (3.into(), 4.into()));
        assert_eq!(qi_floor_ceil(&qi(0, 1, 1, 3)), (1.into(), 2.into()));
        assert_eq!(qi_floor_ceil(&qi(5, 0, 1, 3)), (5.into(), 5.into()));
        // negative surd part
        assert_eq!(qi_floor_ceil(&qi(0, -1, 1, 3)), ((-2).into(), (-1).into()));
        assert_eq!(qi_floor_ceil(&qi(-7, 0, 2, 3)), ((-4).into(), (-3).into()));
    }

    #[test]
    fn floor_brackets_value() {
        // floor(x) <= x < floor(x)+1, certified by exact sign tests
        for (p, q, r) in [(3, 2, 5), (-3, 2, 5), (3, -2, 5), (-17, -9, 4), (22, 7, 3)] {
            let x = qi(p, q, r, 7);
            let (fl, _) = x.floor_ceil();
            let lo = QuadIrr::integer(fl.clone(), &BigInt::from(7));
            let hi = QuadIrr::integer(fl + 1, &BigInt::from(7));
            assert!(x.checked_sub(&lo).unwrap().sign(Embedding::First) >= 0);
            assert!(hi.checked_sub(&x).unwrap().sign(Embedding::First) > 0);
        }
    }

    #[test]
    fn normalization_is_canonical() {
        assert_eq!(qi(2, 4, 6, 5), qi(1, 2, 3, 5));
        assert_eq!(qi(1, 1, -1, 5), qi(-1, -1, 1, 5));
        assert_eq!(
            QuadIrr::new(0.into(), 0.into(), 7.into(), 5.into())
                .unwrap()
                .denom(),
            &BigInt::one()
        );
    }

    #[test]
    fn rejects_bad_field_labels() {
        assert!(QuadIrr::new(1.into(), 1.into(), 1.into(), 12.into()).is_err());
        assert!(QuadIrr::new(1.into(), 1.into(), 1.into(), 1.into()).is_err());
        assert!(QuadIrr::new(1.into(), 1.into(), 0.into(), 5.into()).is_err());
    }

    #[test]
    fn display_round_trip() {
        let d5 = BigInt::from(5);
        let x = qi(3, 1, 2, 5);
        assert_eq!(x.to_string(), "(3+1*sqrt(5))/2");
        assert_eq!(QuadIrr::parse(&x.to_string(), Some(&d5)).unwrap(), x);

        let y = qi(-1, -2, 3, 5);
        assert_eq!(y.to_string(), "(-1-2*sqrt(5))/3");
        assert_eq!(QuadIrr::parse(&y.to_string(), Some(&d5)).unwrap(), y);
    }

    #[test]
    fn parse_variants() {
        let d3 = BigInt::from(3);
        assert_eq!(QuadIrr::parse("5", Some(&d3)).unwrap(), qi(5, 0, 1, 3));
        assert_eq!(QuadIrr::parse("-3/2", Some(&d3)).unwrap(), qi(-3, 0, 2, 3));
        assert_eq!(QuadIrr::parse("sqrt(3)", None).unwrap(), qi(0, 1, 1, 3));
        assert_eq!(
            QuadIrr::parse("2*sqrt(3)", Some(&d3)).unwrap(),
            qi(0, 2, 1, 3)
        );
        assert_eq!(QuadIrr::parse("1+sqrt(3)", None).unwrap(), qi(1, 1, 1, 3));
        assert_eq!(
            QuadIrr::parse("2 - 1*sqrt(3)", None).unwrap(),
            qi(2, -1, 1, 3)
        );
        assert_eq!(
            QuadIrr::parse("(1+sqrt(5))/2", None).unwrap(),
            qi(1, 1, 2, 5)
        );
        assert_eq!(
            QuadIrr::parse("sqrt(12)", Some(&d3)).unwrap(),
            qi(0, 2, 1, 3)
        );
        assert_eq!(
            QuadIrr::parse("sqrt(4)", Some(&d3)).unwrap(),
            qi(2, 0, 1, 3)
        );
        assert_eq!(
            QuadIrr::parse("-sqrt(3)/2", Some(&d3)).unwrap(),
            qi(0, -1, 2, 3)
        );
        assert!(QuadIrr::parse("sqrt(2)", Some(&d3)).is_err());
        assert!(QuadIrr::parse("7", None).is_err());
        assert!(QuadIrr::parse("sqrt(", None).is_err());
        assert!(QuadIrr::parse("1+", None).is_err());
    }

    #[test]
    fn omega_coords_round_trip() {
        for d in [2i64, 3, 5, 13] {
            let d = BigInt::from(d);
            for (p, q, r) in [(1, 0, 1), (0, 1, 1), (3, -5, 7), (1, 1, 2)] {
                let x = QuadIrr::make(p.into(), q.into(), r.into(), d.clone());
                let (a, b) = x.omega_coords();
                assert_eq!(QuadIrr::from_omega_coords(&a, &b, &d), x);
            }
        }
    }

    #[test]
    fn algebraic_integer_detection() {
        assert!(qi(1, 1, 2, 5).is_algebraic_integer()); // golden ratio
        assert!(!qi(1, 1, 2, 3).is_algebraic_integer());
        assert!(qi(7, -3, 1, 3).is_algebraic_integer());
        assert!(!qi(1, 0, 2, 5).is_algebraic_integer());
    }

    #[test]
    fn surd_value_normalizes() {
        let v = SurdValue::new(Rational::new(1.into(), 3.into()), 12).unwrap();
        assert_eq!(v.coefficient(), &Rational::new(2.into(), 3.into()));
        assert_eq!(v.radicand(), &BigInt::from(3));
        assert_eq!(v.to_string(), "2/3*sqrt(3)");

        let z = SurdValue::new(Rational::zero(), 7).unwrap();
        assert_eq!(z, SurdValue::zero());
        assert_eq!(z.to_string(), "0*sqrt(1)");

        let r = SurdValue::new(Rational::from_integer(2.into()), 3).unwrap();
        let rr = r.recip().unwrap();
        assert_eq!(rr.coefficient(), &Rational::new(1.into(), 6.into()));
        assert_eq!(rr.radicand(), &BigInt::from(3));
        assert_eq!(
            r.mul(&rr).unwrap(),
            SurdValue::from_rational(Rational::one())
        );
    }

    #[test]
    fn pow_and_inverse() {
        let u = qi(2, 1, 1, 3);
        assert_eq!(u.pow(2).unwrap(), qi(7, 4, 1, 3));
        assert_eq!(u.pow(0).unwrap(), QuadIrr::one(&BigInt::from(3)));
        assert_eq!(u.pow(-1).unwrap(), qi(2, -1, 1, 3));
        assert_eq!(
            u.pow(3).unwrap().checked_mul(&u.pow(-3).unwrap()).unwrap(),
            QuadIrr::one(&BigInt::from(3))
        );
    }
}
