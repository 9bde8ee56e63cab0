//! Field-level invariants of real quadratic fields Q(sqrt(d)).
//!
//! The fundamental unit comes from the continued fraction of the integral
//! generator omega: the partial quotients of one primitive period multiply
//! to a matrix fixing omega's purely periodic tail, and the corresponding
//! eigenvalue is the smallest unit > 1. The narrow class number counts
//! cycles of reduced indefinite binary quadratic forms of the field
//! discriminant; the wide class number follows from the norm of the
//! fundamental unit. Everything is integer arithmetic.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};

use crate::error::{CuspError, Result};
use crate::exactnum::{is_one_mod_four, Embedding, QuadIrr};

/// Splits n >= 1 as d * f^2 with d squarefree, by trial division.
pub(crate) fn squarefree_decompose(n: &BigInt) -> (BigInt, BigInt) {
    debug_assert!(n.is_positive());
    let mut m = n.clone();
    let mut d = BigInt::one();
    let mut f = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        if (&m % &p).is_zero() {
            let mut e = 0u32;
            while (&m % &p).is_zero() {
                m /= &p;
                e += 1;
            }
            for _ in 0..e / 2 {
                f *= &p;
            }
            if e % 2 == 1 {
                d *= &p;
            }
        }
        p += if p == BigInt::from(2) {
            BigInt::one()
        } else {
            BigInt::from(2)
        };
    }
    if m > BigInt::one() {
        d *= m;
    }
    (d, f)
}

/// Writes n = d * f^2 with d squarefree. Errors unless n >= 1.
pub fn squarefree_part(n: &BigInt) -> Result<(BigInt, BigInt)> {
    if !n.is_positive() {
        return Err(CuspError::NonPositiveArgument);
    }
    Ok(squarefree_decompose(n))
}

/// All squarefree d with 2 <= d <= n, ascending.
pub fn squarefree_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut free = vec![true; n + 1];
    let mut p = 2usize;
    while p * p <= n {
        let mut k = p * p;
        while k <= n {
            free[k] = false;
            k += p * p;
        }
        p += 1;
    }
    (2..=n).filter(|&i| free[i]).map(|i| i as u64).collect()
}

/// Invariants of Q(sqrt(d)): discriminant, integral generator, fundamental
/// unit, totally positive unit generator, class numbers.
#[derive(Debug)]
pub struct FieldData {
    d: BigInt,
    disc: BigInt,
    omega: QuadIrr,
    eps0: QuadIrr,
    eps0_norm: i32,
    eps_plus: QuadIrr,
    class_numbers: OnceLock<(u64, u64)>,
}

impl FieldData {
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    /// Field discriminant: d when d = 1 mod 4, else 4d.
    pub fn disc(&self) -> &BigInt {
        &self.disc
    }

    /// Integral generator: (1+sqrt(d))/2 when d = 1 mod 4, else sqrt(d).
    pub fn omega(&self) -> &QuadIrr {
        &self.omega
    }

    /// Fundamental unit: smallest unit of O_k exceeding 1.
    pub fn eps0(&self) -> &QuadIrr {
        &self.eps0
    }

    pub fn eps0_norm(&self) -> i32 {
        self.eps0_norm
    }

    /// Generator of the totally positive units modulo torsion: eps0 when
    /// its norm is +1, else eps0^2.
    pub fn eps_plus(&self) -> &QuadIrr {
        &self.eps_plus
    }

    /// (wide, narrow) class numbers; computed on first use and cached.
    pub fn class_numbers(&self) -> (u64, u64) {
        *self.class_numbers.get_or_init(|| {
            let h_plus = narrow_class_number_by_forms(&self.disc);
            let h = if self.eps0_norm == 1 {
                debug_assert!(h_plus.is_multiple_of(2));
                h_plus / 2
            } else {
                h_plus
            };
            (h, h_plus)
        })
    }

    pub fn h(&self) -> u64 {
        self.class_numbers().0
    }

    pub fn h_plus(&self) -> u64 {
        self.class_numbers().1
    }
}

/// Builds the full [`FieldData`] record for squarefree d > 1.
pub fn field_data(d: &BigInt) -> Result<FieldData> {
    if d < &BigInt::from(2) {
        return Err(CuspError::InvalidFieldLabel(d.clone()));
    }
    let (sf, f) = squarefree_decompose(d);
    if !f.is_one() {
        return Err(CuspError::InvalidFieldLabel(d.clone()));
    }
    let d = sf;
    let disc = if is_one_mod_four(&d) {
        d.clone()
    } else {
        BigInt::from(4) * &d
    };
    let omega = if is_one_mod_four(&d) {
        QuadIrr::make(BigInt::one(), BigInt::one(), BigInt::from(2), d.clone())
    } else {
        QuadIrr::sqrt_d(&d)
    };
    let (eps0, eps0_norm) = fundamental_unit_by_cf(&omega);
    let eps_plus = if eps0_norm == 1 {
        eps0.clone()
    } else {
        eps0.checked_mul(&eps0).expect("same field")
    };
    debug_assert!(eps_plus.is_totally_positive());
    Ok(FieldData {
        d,
        disc,
        omega,
        eps0,
        eps0_norm,
        eps_plus,
        class_numbers: OnceLock::new(),
    })
}

/// Returns the totally positive unit generator eps_plus.
pub fn tp_unit_generator(fd: &FieldData) -> QuadIrr {
    fd.eps_plus.clone()
}

/// (wide, narrow) class numbers of the field.
pub fn class_number(fd: &FieldData) -> (u64, u64) {
    fd.class_numbers()
}

/// Runs the continued fraction of omega until its state recurs, then reads
/// the fundamental unit off the cycle matrix. The partial quotients a_k of
/// the primitive period multiply to T = prod [[a_k,1],[1,0]] fixing the
/// periodic tail x, and eps = T_21 * x + T_22 is the smallest unit > 1;
/// its norm is det T = (-1)^period.
fn fundamental_unit_by_cf(omega: &QuadIrr) -> (QuadIrr, i32) {
    let d = omega.field().clone();
    let mut x = omega.clone();
    let mut seen: HashMap<QuadIrr, usize> = HashMap::new();
    let mut quotients: Vec<BigInt> = Vec::new();
    loop {
        if let Some(&j) = seen.get(&x) {
            let cycle = &quotients[j..];
            let (mut t11, mut t12, mut t21, mut t22) =
                (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
            for a in cycle {
                // right-multiply by [[a, 1], [1, 0]]
                let n11 = &t11 * a + &t12;
                let n21 = &t21 * a + &t22;
                t12 = t11;
                t22 = t21;
                t11 = n11;
                t21 = n21;
            }
            let det = &t11 * &t22 - &t12 * &t21;
            let eps = x
                .scale(&crate::exactnum::Rational::from_integer(t21))
                .checked_add(&QuadIrr::integer(t22, &d))
                .expect("same field");
            let norm = if det.is_one() { 1 } else { -1 };
            debug_assert!(eps.sign(Embedding::First) > 0);
            return (eps, norm);
        }
        seen.insert(x.clone(), quotients.len());
        let a = x.floor();
        let frac = x
            .checked_sub(&QuadIrr::integer(a.clone(), &d))
            .expect("same field");
        quotients.push(a);
        x = frac
            .inverse()
            .expect("continued fraction iterate is irrational");
    }
}

/// Number of cycles of reduced primitive indefinite forms (a, b, c) of the
/// given positive non-square discriminant under the rho neighbor step.
/// This equals the narrow class number for a fundamental discriminant.
pub fn narrow_class_number_by_forms(disc: &BigInt) -> u64 {
    let disc = disc
        .to_string()
        .parse::<i64>()
        .expect("class number search needs a desk-scale discriminant");
    let forms = reduced_forms(disc);
    let index: HashMap<(i64, i64, i64), usize> =
        forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let mut visited = vec![false; forms.len()];
    let mut cycles = 0u64;
    for start in 0..forms.len() {
        if visited[start] {
            continue;
        }
        cycles += 1;
        let mut f = forms[start];
        loop {
            let i = *index.get(&f).expect("rho preserves the reduced set");
            if visited[i] {
                break;
            }
            visited[i] = true;
            f = rho_step(f, disc);
        }
    }
    cycles
}

fn isqrt64(n: i64) -> i64 {
    (n as u64).sqrt() as i64
}

/// Reduced: 0 < b < sqrt(D) and |sqrt(D) - 2|a|| < b, with 4ac = b^2 - D.
fn is_reduced(a: i64, b: i64, disc: i64) -> bool {
    if b <= 0 || b * b >= disc {
        return false;
    }
    let lo = 2 * a.abs() - b;
    let hi = 2 * a.abs() + b;
    hi * hi > disc && (lo < 0 || lo * lo < disc)
}

fn reduced_forms(disc: i64) -> Vec<(i64, i64, i64)> {
    assert!(disc > 0);
    let s = isqrt64(disc);
    assert!(s * s != disc, "discriminant must not be a square");
    let mut out = Vec::new();
    for b in 1..=s {
        if (disc - b * b) % 4 != 0 {
            continue;
        }
        let k = (disc - b * b) / 4; // k = -ac > 0
        let mut u = 1;
        while u * u <= k {
            if k % u == 0 {
                for a in [u, -u, k / u, -(k / u)] {
                    let c = -(k / a);
                    if is_reduced(a, b, disc) && !out.contains(&(a, b, c)) {
                        debug_assert_eq!(b * b - 4 * a * c, disc);
                        debug_assert_eq!(
                            gcd3(a, b, c),
                            1,
                            "fundamental discriminants give primitive forms"
                        );
                        out.push((a, b, c));
                    }
                }
            }
            u += 1;
        }
    }
    out.sort_unstable();
    out
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    a.abs().gcd(&b.abs()).gcd(&c.abs())
}

/// rho(a, b, c) = (c, r, (r^2 - D)/(4c)) where r = -b mod 2|c| is placed in
/// the window (sqrt(D) - 2|c|, sqrt(D)).
fn rho_step((_, b, c): (i64, i64, i64), disc: i64) -> (i64, i64, i64) {
    let s = isqrt64(disc);
    let m = 2 * c.abs();
    let mut r = (-b).rem_euclid(m);
    r += ((s - r).div_euclid(m)) * m; // largest representative <= s
    let c2 = (r * r - disc) / (4 * c);
    (c, r, c2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Rational;

    fn fd(d: i64) -> FieldData {
        field_data(&BigInt::from(d)).unwrap()
    }

    fn qi(p: i64, q: i64, r: i64, d: i64) -> QuadIrr {
        QuadIrr::new(p.into(), q.into(), r.into(), d.into()).unwrap()
    }

    #[test]
    fn squarefree_part_examples() {
        let sp = |n: i64| squarefree_part(&BigInt::from(n)).unwrap();
        assert_eq!(sp(12), (3.into(), 2.into()));
        assert_eq!(sp(5), (5.into(), 1.into()));
        assert_eq!(sp(45), (5.into(), 3.into()));
        assert_eq!(sp(1), (1.into(), 1.into()));
        assert_eq!(sp(720), (5.into(), 12.into()));
        assert!(squarefree_part(&BigInt::zero()).is_err());
        assert!(squarefree_part(&BigInt::from(-4)).is_err());
    }

    #[test]
    fn squarefree_sieve() {
        assert_eq!(squarefree_up_to(12), vec![2, 3, 5, 6, 7, 10, 11]);
    }

    #[test]
    fn field_data_d3() {
        let f = fd(3);
        assert_eq!(f.disc(), &BigInt::from(12));
        assert_eq!(f.omega(), &qi(0, 1, 1, 3));
        assert_eq!(f.eps0(), &qi(2, 1, 1, 3));
        assert_eq!(f.eps0_norm(), 1);
        assert_eq!(f.eps_plus(), &qi(2, 1, 1, 3));
        assert_eq!(f.class_numbers(), (1, 2));
    }

    #[test]
    fn field_data_d5() {
        let f = fd(5);
        assert_eq!(f.disc(), &BigInt::from(5));
        assert_eq!(f.omega(), &qi(1, 1, 2, 5));
        assert_eq!(f.eps0(), &qi(1, 1, 2, 5));
        assert_eq!(f.eps0_norm(), -1);
        assert_eq!(f.eps_plus(), &qi(3, 1, 2, 5));
        assert_eq!(f.class_numbers(), (1, 1));
    }

    #[test]
    fn field_data_d10() {
        let f = fd(10);
        assert_eq!(f.eps0(), &qi(3, 1, 1, 10));
        assert_eq!(f.eps0_norm(), -1);
        assert_eq!(f.eps_plus(), &qi(19, 6, 1, 10));
        assert_eq!(f.h(), 2);
    }

    #[test]
    fn tp_generator_examples() {
        assert_eq!(tp_unit_generator(&fd(2)), qi(3, 2, 1, 2));
        assert_eq!(tp_unit_generator(&fd(3)), qi(2, 1, 1, 3));
        assert_eq!(tp_unit_generator(&fd(6)), qi(5, 2, 1, 6));
    }

    #[test]
    fn tp_generator_is_totally_positive_norm_one() {
        for d in squarefree_up_to(60) {
            let f = fd(d as i64);
            let eps = f.eps_plus();
            assert!(eps.is_totally_positive(), "d = {d}");
            assert_eq!(eps.norm(), Rational::one(), "d = {d}");
            assert_eq!(
                f.h_plus(),
                f.h() * if f.eps0_norm() == 1 { 2 } else { 1 },
                "d = {d}"
            );
        }
    }

    #[test]
    fn one_cusped_fields() {
        for d in [3i64, 6, 21, 33] {
            assert_eq!(fd(d).h(), 1, "d = {d}");
        }
        assert_eq!(fd(21).eps0(), &qi(5, 1, 2, 21));
        assert_eq!(fd(33).eps0(), &qi(23, 4, 1, 33));
    }

    #[test]
    fn rejects_non_squarefree() {
        assert!(field_data(&BigInt::from(12)).is_err());
        assert!(field_data(&BigInt::from(1)).is_err());
        assert!(field_data(&BigInt::from(0)).is_err());
    }

    #[test]
    fn reduced_form_cycles_disc_40() {
        let forms = reduced_forms(40);
        assert_eq!(forms.len(), 8);
        assert_eq!(narrow_class_number_by_forms(&BigInt::from(40)), 2);
        // rho permutes the reduced set
        for &f in &forms {
            let g = rho_step(f, 40);
            assert!(forms.contains(&g), "rho({f:?}) = {g:?} not reduced");
        }
    }
}
