//! Cusp invariants of peripheral data (M, V).
//!
//! A cusp datum is a rank-2 module M < k together with a totally positive
//! unit eps_V stabilizing it, normalized so its first embedding exceeds 1.
//! The signature defect delta is computed by two independent exact routes
//! and both are reported:
//!
//! - Rademacher route: delta = -psi(T)/3 where T is the multiplication
//!   matrix of eps_V on the ordered basis of M;
//! - cycle route: delta = (m/3) sum (3 - b_k) over the primitive minus
//!   continued fraction cycle of the basis ratio, where eps_V is the m-th
//!   power of the full stabilizer generator.
//!
//! delta equals the signature of a compact 4-manifold bounding the Sol
//! 3-manifold whenever one exists with a single cusp, so a non-integral
//! delta obstructs such bounding. The implied L-value at 1 and partial
//! Shimizu sums in the absolute convergence region complete the picture.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::dedekind::{rademacher_psi, Monodromy};
use crate::error::{CuspError, Result};
use crate::exactnum::{Embedding, QuadIrr, Rational, SurdValue};
use crate::quadfield::FieldData;
use crate::solbundle::{eigen_data, stabilizer_unit, LatticeModule};

/// Exact covolume |det [sigma_j(mu_i)]| of R^2 / M, a positive rational
/// multiple of sqrt(d). Unimodular basis changes leave it fixed.
pub fn volume(module: &LatticeModule) -> SurdValue {
    let [mu1, mu2] = module.basis();
    let det = mu1
        .checked_mul(&mu2.conj())
        .and_then(|a| {
            let b = mu2.checked_mul(&mu1.conj())?;
            a.checked_sub(&b)
        })
        .expect("same field");
    // the determinant is conjugate-antisymmetric, so purely a surd
    debug_assert!(det.numer_rat().is_zero());
    let c = Rational::new(det.numer_surd().clone(), det.denom().clone()).abs();
    SurdValue::new(c, module.d().clone()).expect("field label is squarefree")
}

/// Trace-pairing dual M* = { x : Tr(x mu) in Z for all mu in M }, via the
/// exact dual basis (Tr(mu_i* mu_j) = delta_ij) returned in the order
/// (mu_2*, mu_1*). That order keeps the multiplication matrix of any
/// stabilizing unit SL(2,Z)-conjugate to its matrix on M (the raw order
/// would transpose it and flip the orientation), and it makes duality an
/// involution on bases.
pub fn dual_module(module: &LatticeModule) -> LatticeModule {
    let [mu1, mu2] = module.basis();
    let d = module.d();
    // Tr((x + y sqrt(d)) mu_j) = 2 (x p_j + y q_j d)/r_j over basis (1, sqrt(d))
    let row = |mu: &QuadIrr| {
        (
            Rational::new(BigInt::from(2) * mu.numer_rat(), mu.denom().clone()),
            Rational::new(BigInt::from(2) * mu.numer_surd() * d, mu.denom().clone()),
        )
    };
    let (a11, a12) = row(mu1);
    let (a21, a22) = row(mu2);
    let det = &a11 * &a22 - &a12 * &a21;
    debug_assert!(!det.is_zero());
    let solve = |rhs1: Rational, rhs2: Rational| {
        let x = (&rhs1 * &a22 - &rhs2 * &a12) / &det;
        let y = (&a11 * &rhs2 - &a21 * &rhs1) / &det;
        let den = x.denom().lcm(y.denom());
        QuadIrr::make(
            x.numer() * (&den / x.denom()),
            y.numer() * (&den / y.denom()),
            den,
            d.clone(),
        )
    };
    use num_integer::Integer;
    let dual1 = solve(Rational::one(), Rational::zero());
    let dual2 = solve(Rational::zero(), Rational::one());
    LatticeModule::new(dual2, dual1).expect("dual basis is independent")
}

/// Minus continued fraction b_k = ceil(w_k), w_{k+1} = 1/(b_k - w_k),
/// iterated until a reduced value (w > 1, 0 < sigma_2(w) < 1) recurs.
/// Returns the primitive cycle; every b_k in it is >= 2.
pub fn minus_cf_cycle(w: &QuadIrr) -> Result<Vec<BigInt>> {
    if w.is_rational() {
        return Err(CuspError::RationalInput);
    }
    let d = w.field().clone();
    let one = QuadIrr::one(&d);
    let mut x = w.clone();
    let mut seen: HashMap<QuadIrr, usize> = HashMap::new();
    let mut bs: Vec<BigInt> = Vec::new();
    loop {
        let above_one = x
            .checked_sub(&one)
            .expect("same field")
            .sign(Embedding::First)
            > 0;
        let conj_in_unit_interval = x.sign(Embedding::Second) > 0
            && one
                .checked_sub(&x)
                .expect("same field")
                .sign(Embedding::Second)
                > 0;
        if above_one && conj_in_unit_interval {
            if let Some(&j) = seen.get(&x) {
                let cycle = bs[j..].to_vec();
                debug_assert!(cycle.iter().all(|b| b >= &BigInt::from(2)));
                return Ok(cycle);
            }
            seen.insert(x.clone(), bs.len());
        }
        let (_, b) = x.floor_ceil();
        let step = QuadIrr::integer(b.clone(), &d)
            .checked_sub(&x)
            .expect("same field");
        bs.push(b);
        x = step.inverse().expect("iterate is irrational");
    }
}

/// Peripheral datum: module M, stabilizing totally positive unit eps_V with
/// first embedding > 1, and the exponent m with eps_V = eps_M^m.
#[derive(Debug, Clone)]
pub struct CuspDatum {
    module: LatticeModule,
    eps_v: QuadIrr,
    eps_m: QuadIrr,
    power: u32,
}

impl CuspDatum {
    /// Validates and normalizes a datum. The unit must be totally positive
    /// of norm +1 and must stabilize M; generators below 1 are inverted.
    pub fn new(module: LatticeModule, eps_v: QuadIrr) -> Result<Self> {
        if eps_v.field() != module.d() {
            return Err(CuspError::IncompatibleFields(
                eps_v.field().clone(),
                module.d().clone(),
            ));
        }
        if eps_v.norm() != Rational::one() || !eps_v.is_algebraic_integer() {
            return Err(CuspError::NotAUnit);
        }
        if !eps_v.is_totally_positive() {
            return Err(CuspError::NotTotallyPositive);
        }
        let one = QuadIrr::one(module.d());
        if eps_v == one {
            return Err(CuspError::NotAUnit);
        }
        let eps_v = if eps_v.cmp_real(&one).expect("same field").is_lt() {
            eps_v.inverse()?
        } else {
            eps_v
        };
        // must act integrally on M
        module.multiplication_monodromy(&eps_v)?;
        let (eps_m, _) = stabilizer_unit(&module)?;
        let mut power = 1u32;
        let mut acc = eps_m.clone();
        while acc.cmp_real(&eps_v).expect("same field").is_lt() {
            acc = acc.checked_mul(&eps_m)?;
            power += 1;
        }
        if acc != eps_v {
            return Err(CuspError::NotAStabilizer);
        }
        Ok(Self {
            module,
            eps_v,
            eps_m,
            power,
        })
    }

    /// The standard cusp of the field: M = O_k with its full totally
    /// positive stabilizer.
    pub fn standard(fd: &FieldData) -> Self {
        Self::new(LatticeModule::ring_of_integers(fd), fd.eps_plus().clone())
            .expect("the standard datum is valid")
    }

    /// Datum of a Sol monodromy: the eigenlattice with the eigenvalue unit
    /// (negated when the trace is negative, then normalized above 1).
    pub fn from_monodromy(m: &Monodromy) -> Result<Self> {
        let (_, beta, module) = eigen_data(m)?;
        let unit = if beta.is_totally_positive() {
            beta
        } else {
            beta.neg()
        };
        Self::new(module, unit)
    }

    pub fn module(&self) -> &LatticeModule {
        &self.module
    }

    pub fn eps_v(&self) -> &QuadIrr {
        &self.eps_v
    }

    /// Generator of the full totally positive stabilizer of M.
    pub fn stabilizer_generator(&self) -> &QuadIrr {
        &self.eps_m
    }

    /// Exponent m with eps_V = eps_M^m.
    pub fn power(&self) -> u32 {
        self.power
    }

    /// Same module, eps_V replaced by eps_V^e.
    pub fn with_power(&self, e: u32) -> Result<Self> {
        Self::new(self.module.clone(), self.eps_v.pow(e as i64)?)
    }
}

/// The signature defect and everything computed alongside it.
#[derive(Debug, Clone, Serialize)]
pub struct DeltaResult {
    /// delta = -psi/3 (Rademacher route).
    #[serde(serialize_with = "serialize_rational")]
    pub delta: Rational,
    /// psi of the multiplication matrix of eps_V on M.
    #[serde(serialize_with = "serialize_bigint")]
    pub psi: BigInt,
    /// Primitive minus-continued-fraction cycle of the basis ratio.
    #[serde(serialize_with = "serialize_bigint_vec")]
    pub cycle: Vec<BigInt>,
    /// Exact equality of the two routes.
    pub route_agreement: bool,
    /// Signature of a one-cusped bounding manifold, when one exists.
    #[serde(serialize_with = "serialize_rational")]
    pub implied_signature: Rational,
    /// Exact coefficient of pi^2 in the L-value at 1.
    pub l_at_1: SurdValue,
    pub l_at_1_approx: f64,
    /// delta in Z.
    pub integral: bool,
}

fn serialize_rational<S: serde::Serializer>(
    x: &Rational,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

fn serialize_bigint<S: serde::Serializer>(
    x: &BigInt,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

fn serialize_bigint_vec<S: serde::Serializer>(
    xs: &[BigInt],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

/// Computes the signature defect of a cusp datum by both routes.
pub fn delta(cd: &CuspDatum) -> Result<DeltaResult> {
    let action = cd.module.multiplication_monodromy(&cd.eps_v)?;
    let psi = rademacher_psi(&action)?;
    let delta_rademacher = Rational::new(-&psi, BigInt::from(3));

    let [mu1, mu2] = cd.module.basis();
    let w = mu2.checked_div(mu1)?;
    let cycle = minus_cf_cycle(&w)?;
    let cycle_sum: BigInt = cycle.iter().map(|b| BigInt::from(3) - b).sum();
    let delta_cycle = Rational::new(BigInt::from(cd.power) * cycle_sum, BigInt::from(3));

    let route_agreement = delta_rademacher == delta_cycle;
    let (l_at_1, l_at_1_approx) = l_value_from_delta(&delta_rademacher, cd.module());
    let integral = delta_rademacher.is_integer();
    Ok(DeltaResult {
        implied_signature: delta_rademacher.clone(),
        delta: delta_rademacher,
        psi,
        cycle,
        route_agreement,
        l_at_1,
        l_at_1_approx,
        integral,
    })
}

fn l_value_from_delta(delta: &Rational, module: &LatticeModule) -> (SurdValue, f64) {
    let vol = volume(module);
    let coeff = vol
        .recip()
        .expect("module volume is positive")
        .scale(&-delta.clone());
    let approx = coeff.to_f64() * std::f64::consts::PI * std::f64::consts::PI;
    (coeff, approx)
}

/// L(M, V, 1) = -pi^2 delta / vol(M), via the exact defect rather than the
/// conditionally convergent series. Returns the exact coefficient of pi^2
/// and a floating approximation of the value.
pub fn l_value_at_1(cd: &CuspDatum) -> Result<(SurdValue, f64)> {
    let result = delta(cd)?;
    Ok((result.l_at_1, result.l_at_1_approx))
}

/// Partial Shimizu sum sum sign(N(beta)) / |N(beta)|^s over V-orbit
/// representatives of M \ {0} with |N(beta)| <= norm_bound, for s >= 2.
///
/// Orbit representatives are the lattice points of the fundamental cone
/// 1 <= |sigma_1(beta)| / |sigma_2(beta)| < sigma_1(eps_V)^2; every point
/// of a generous bounding box is placed by exact sign tests.
pub fn l_series_partial(cd: &CuspDatum, s: i64, norm_bound: u64) -> Result<Rational> {
    if s < 2 {
        return Err(CuspError::UnsupportedSeriesExponent(s));
    }
    if norm_bound == 0 {
        return Ok(Rational::zero());
    }
    let eps4 = cd.eps_v.pow(4)?;
    let bound_rat = Rational::from_integer(BigInt::from(norm_bound));

    // conservative coordinate box from floating bounds; membership is exact
    let [mu1, mu2] = cd.module.basis();
    let (a1, a2) = (mu1.to_f64(), mu1.conj().to_f64());
    let (b1, b2) = (mu2.to_f64(), mu2.conj().to_f64());
    let det = (a1 * b2 - b1 * a2).abs();
    let s1_max = cd.eps_v.to_f64() * (norm_bound as f64).sqrt() * 1.000001;
    let s2_max = (norm_bound as f64).sqrt() * 1.000001;
    let u_max = ((b2.abs() * s1_max + b1.abs() * s2_max) / det * 1.01 + 2.0) as i64;
    let v_max = ((a2.abs() * s1_max + a1.abs() * s2_max) / det * 1.01 + 2.0) as i64;

    let mut acc = Rational::zero();
    for u in -u_max..=u_max {
        let u_part = mu1.scale(&Rational::from_integer(BigInt::from(u)));
        for v in -v_max..=v_max {
            if u == 0 && v == 0 {
                continue;
            }
            let beta = u_part.checked_add(&mu2.scale(&Rational::from_integer(BigInt::from(v))))?;
            let norm = beta.norm();
            if norm.abs() > bound_rat {
                continue;
            }
            // cone floor |sigma_1| >= |sigma_2|: the sign of p*q decides
            if beta.numer_rat().sign() == num_bigint::Sign::Minus
                && beta.numer_surd().sign() == num_bigint::Sign::Plus
                || beta.numer_rat().sign() == num_bigint::Sign::Plus
                    && beta.numer_surd().sign() == num_bigint::Sign::Minus
            {
                continue;
            }
            // cone ceiling: sigma_1(beta)^2 < eps^4 sigma_2(beta)^2, strict
            let beta_sq = beta.checked_mul(&beta)?;
            let conj_sq = beta.conj().checked_mul(&beta.conj())?;
            let gap = beta_sq.checked_sub(&eps4.checked_mul(&conj_sq)?)?;
            if gap.sign(Embedding::First) >= 0 {
                continue;
            }
            let sign = if norm.is_negative() { -1 } else { 1 };
            let power = abs_pow(&norm, s as u32);
            acc += Rational::from_integer(BigInt::from(sign)) / power;
        }
    }
    Ok(acc)
}

fn abs_pow(x: &Rational, e: u32) -> Rational {
    let mut acc = Rational::one();
    let ax = x.abs();
    for _ in 0..e {
        acc *= &ax;
    }
    acc
}

/// Outcome of the geometric-bounding test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ObstructionVerdict {
    /// delta is not an integer: the Sol manifold bounds no one-cusped
    /// Hilbert modular manifold.
    Obstructed,
    /// delta is an integer; the test says nothing either way.
    Inconclusive,
}

impl std::fmt::Display for ObstructionVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ObstructionVerdict::Obstructed => "OBSTRUCTED",
            ObstructionVerdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// Verdict record of the bounding obstruction, with both orientations.
#[derive(Debug, Clone, Serialize)]
pub struct ObstructionReport {
    pub verdict: ObstructionVerdict,
    #[serde(serialize_with = "serialize_rational")]
    pub delta: Rational,
    /// The reversed orientation negates delta.
    #[serde(serialize_with = "serialize_rational")]
    pub delta_reversed: Rational,
    pub integral: bool,
    /// Caveat attached to negative-trace monodromies.
    pub scope_note: Option<String>,
}

/// Obstruction verdict of a cusp datum: OBSTRUCTED iff delta is not an
/// integer (the test is one-directional).
pub fn bounding_obstruction(cd: &CuspDatum) -> Result<ObstructionReport> {
    let result = delta(cd)?;
    Ok(report_from(result, None))
}

/// Obstruction verdict of a Sol monodromy. Negative-trace inputs are
/// evaluated too but flagged: the integrality theorem is stated for the
/// standard (totally positive) case only.
pub fn bounding_obstruction_of_monodromy(m: &Monodromy) -> Result<ObstructionReport> {
    let cd = CuspDatum::from_monodromy(m)?;
    let result = delta(&cd)?;
    let note = if m.trace().is_negative() {
        Some("standard-case theorem only".to_string())
    } else {
        None
    };
    Ok(report_from(result, note))
}

fn report_from(result: DeltaResult, scope_note: Option<String>) -> ObstructionReport {
    let verdict = if result.integral {
        ObstructionVerdict::Inconclusive
    } else {
        ObstructionVerdict::Obstructed
    };
    ObstructionReport {
        verdict,
        delta_reversed: -result.delta.clone(),
        delta: result.delta,
        integral: result.integral,
        scope_note,
    }
}
