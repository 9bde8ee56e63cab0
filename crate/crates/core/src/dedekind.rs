//! Dedekind sums and the Rademacher function on SL(2, Z).
//!
//! s(a, c) is the classical sawtooth sum sum_{k=1}^{c-1} ((k/c))((ka/c)),
//! evaluated here by the reciprocity recursion in O(log c) exact steps.
//! Phi is the Rademacher function
//!
//!   Phi(A) = (a + d)/c - 12 sign(c) s(d, |c|)   for c != 0,
//!   Phi(A) = b/d                                 for c = 0,
//!
//! integer-valued on SL(2, Z), and psi(A) = Phi(A) - 3 sign(c (a + d)) is
//! its hyperbolic correction: a conjugation-invariant class function that
//! is homogeneous under powers and antisymmetric under inversion. These
//! sign conventions make -psi/3 reproduce the known signature defects of
//! the standard one-cusped examples.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{CuspError, Result};
use crate::exactnum::Rational;

/// An element of SL(2, Z): row-major [[a, b], [c, d]] with ad - bc = 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monodromy {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl Monodromy {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        let det = &a * &d - &b * &c;
        if !det.is_one() {
            return Err(CuspError::NotUnimodular(det));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Self::from_i64(1, 0, 0, 1).unwrap()
    }

    pub fn entries(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    pub fn is_minus_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == BigInt::from(-1)
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > BigInt::from(2)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            a: &self.a * &other.a + &self.b * &other.c,
            b: &self.a * &other.b + &self.b * &other.d,
            c: &self.c * &other.a + &self.d * &other.c,
            d: &self.c * &other.b + &self.d * &other.d,
        }
    }

    /// Inverse in SL(2, Z): [[d, -b], [-c, a]].
    pub fn inverse(&self) -> Self {
        Self {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl std::fmt::Display for Monodromy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

/// Dedekind sum s(a, c) for c > 0, gcd(a, c) = 1, by the reciprocity
/// recursion. s is periodic in a mod c; s(a, 1) = 0.
pub fn dedekind_sum(a: &BigInt, c: &BigInt) -> Result<Rational> {
    if !c.is_positive() || !a.gcd(c).is_one() {
        return Err(CuspError::NotCoprime {
            a: a.clone(),
            c: c.clone(),
        });
    }
    let mut x = a.mod_floor(c);
    let mut y = c.clone();
    let mut sign = BigInt::one();
    let mut acc = BigRational::zero();
    // s(x, y) = -1/4 + (x^2 + y^2 + 1)/(12xy) - s(y mod x, x)
    while !x.is_zero() {
        let num = &x * &x + &y * &y + BigInt::one();
        let den = BigInt::from(12) * &x * &y;
        let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
        acc += BigRational::from_integer(sign.clone()) * (BigRational::new(num, den) - quarter);
        sign = -sign;
        let next = y.mod_floor(&x);
        y = x;
        x = next;
    }
    Ok(acc)
}

/// Rademacher Phi, exact rational (integral on SL(2, Z)).
pub fn rademacher_phi(m: &Monodromy) -> Rational {
    let (a, b, c, d) = m.entries();
    if c.is_zero() {
        return BigRational::new(b.clone(), d.clone());
    }
    let s = dedekind_sum(d, &c.abs()).expect("ad - bc = 1 forces gcd(d, c) = 1");
    let lin = BigRational::new(a + d, c.clone());
    lin - BigRational::from_integer(BigInt::from(12) * c.signum()) * s
}

/// psi(A) = Phi(A) - 3 sign(c (a + d)) for hyperbolic A. Integer valued,
/// conjugation invariant, with psi(A^m) = m psi(A) and psi(A^-1) = -psi(A).
pub fn rademacher_psi(m: &Monodromy) -> Result<BigInt> {
    if !m.is_hyperbolic() {
        return Err(CuspError::NotHyperbolic(m.trace()));
    }
    let (_, _, c, _) = m.entries();
    debug_assert!(!c.is_zero(), "|trace| > 2 forces c != 0 in SL(2, Z)");
    let corr = BigInt::from(3 * (c * m.trace()).signum().to_i32());
    let phi = rademacher_phi(m) - BigRational::from_integer(corr);
    debug_assert!(phi.is_integer(), "Phi takes integer values on SL(2, Z)");
    Ok(phi.to_integer())
}

trait SignumExt {
    fn to_i32(&self) -> i32;
}

impl SignumExt for BigInt {
    fn to_i32(&self) -> i32 {
        match self.sign() {
            num_bigint::Sign::Plus => 1,
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// O(c) sawtooth oracle: s(a,c) = sum ((k/c)) ((ka/c)).
    pub(crate) fn dedekind_sum_direct(a: i64, c: i64) -> Rational {
        let mut num = BigInt::zero(); // accumulates 4 c^2 s(a, c)
        for k in 1..c {
            let rk = (k * a).rem_euclid(c);
            if rk == 0 {
                continue;
            }
            num += BigInt::from(2 * k - c) * BigInt::from(2 * rk - c);
        }
        BigRational::new(num, BigInt::from(4 * c * c))
    }

    fn m(a: i64, b: i64, c: i64, d: i64) -> Monodromy {
        Monodromy::from_i64(a, b, c, d).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn dedekind_sum_examples() {
        assert_eq!(dedekind_sum(&1.into(), &3.into()).unwrap(), rat(1, 18));
        assert_eq!(dedekind_sum(&3.into(), &8.into()).unwrap(), rat(1, 16));
        assert_eq!(
            dedekind_sum(&7.into(), &1.into()).unwrap(),
            Rational::zero()
        );
        assert_eq!(
            dedekind_sum(&0.into(), &1.into()).unwrap(),
            Rational::zero()
        );
    }

    #[test]
    fn matches_direct_sum_small() {
        for c in 1..=40i64 {
            for a in 0..c.max(1) {
                if a.gcd(&c) != 1 {
                    continue;
                }
                assert_eq!(
                    dedekind_sum(&a.into(), &c.into()).unwrap(),
                    dedekind_sum_direct(a, c),
                    "s({a}, {c})"
                );
            }
        }
    }

    #[test]
    fn periodic_and_odd() {
        // s(a + c, c) = s(a, c) and s(-a, c) = -s(a, c)
        let s = |a: i64, c: i64| dedekind_sum(&a.into(), &c.into()).unwrap();
        assert_eq!(s(3, 8), s(11, 8));
        assert_eq!(s(-3, 8), -s(3, 8));
    }

    #[test]
    fn coprimality_enforced() {
        assert!(dedekind_sum(&2.into(), &8.into()).is_err());
        assert!(dedekind_sum(&1.into(), &0.into()).is_err());
        assert!(dedekind_sum(&1.into(), &(-3).into()).is_err());
    }

    #[test]
    fn phi_examples() {
        assert_eq!(rademacher_phi(&m(2, 3, 1, 2)), rat(4, 1));
        assert_eq!(rademacher_phi(&m(1, 1, 0, 1)), rat(1, 1));
        assert_eq!(rademacher_phi(&m(5, 12, 2, 5)), rat(5, 1));
    }

    #[test]
    fn psi_examples() {
        assert_eq!(rademacher_psi(&m(2, 3, 1, 2)).unwrap(), BigInt::from(1));
        let inv = m(2, 3, 1, 2).inverse();
        assert_eq!(rademacher_psi(&inv).unwrap(), BigInt::from(-1));
        assert_eq!(rademacher_psi(&m(19, 64, 8, 27)).unwrap(), BigInt::from(2));
    }

    #[test]
    fn psi_rejects_non_hyperbolic() {
        assert!(matches!(
            rademacher_psi(&m(1, 1, 0, 1)),
            Err(CuspError::NotHyperbolic(_))
        ));
        assert!(rademacher_psi(&Monodromy::identity()).is_err());
    }

    #[test]
    fn monodromy_rejects_wrong_determinant() {
        assert!(matches!(
            Monodromy::from_i64(2, 1, 1, 2),
            Err(CuspError::NotUnimodular(_))
        ));
    }

    #[test]
    fn psi_conjugation_invariance_smoke() {
        let a = m(2, 3, 1, 2);
        for u in [m(1, 1, 0, 1), m(1, 0, 1, 1), m(0, -1, 1, 0), m(2, 1, 1, 1)] {
            let conj = u.mul(&a).mul(&u.inverse());
            assert_eq!(
                rademacher_psi(&conj).unwrap(),
                rademacher_psi(&a).unwrap(),
                "conjugation by {u}"
            );
        }
    }

    #[test]
    fn psi_homogeneity_smoke() {
        let a = m(2, 3, 1, 2);
        let base = rademacher_psi(&a).unwrap();
        for e in 1..=4u32 {
            assert_eq!(rademacher_psi(&a.pow(e)).unwrap(), &base * BigInt::from(e));
        }
    }
}
