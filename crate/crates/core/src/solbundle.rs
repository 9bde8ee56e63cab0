//! Geometry classification of (2,1)-torus bundles and their arithmetic.
//!
//! A monodromy A in SL(2, Z) gives a Euclidean, Nil or Sol bundle by the
//! trace rule. In the Sol case the eigenvalue beta = (tr + sqrt(tr^2-4))/2
//! is a unit of the real quadratic field labeled by the squarefree part of
//! tr^2 - 4, and the lattice M with ordered basis (c, beta - a) makes the
//! multiplication-by-beta matrix literally equal to A. Representations of
//! the bundle group land in O_k x| O_{k,+}^x (or O_k x| O_k^x when the
//! trace is negative) under the affine law (a, b)(a', b') = (a + b a', b b').

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::dedekind::Monodromy;
use crate::error::{CuspError, Result};
use crate::exactnum::{Embedding, QuadIrr, Rational};
use crate::intlinalg::{hnf, IntMatrix};
use crate::quadfield::{field_data, squarefree_decompose, FieldData};

/// Geometry type of an orientable (2,1)-torus bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GeometryClass {
    Euclidean,
    Nil,
    Sol,
}

impl fmt::Display for GeometryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeometryClass::Euclidean => "Euclidean",
            GeometryClass::Nil => "Nil",
            GeometryClass::Sol => "Sol",
        })
    }
}

/// Trace rule: |tr| < 2 or A = +-I is Euclidean, |tr| = 2 otherwise is Nil,
/// |tr| > 2 is Sol.
pub fn classify_geometry(m: &Monodromy) -> GeometryClass {
    let t = m.trace().abs();
    if m.is_identity() || m.is_minus_identity() || t < BigInt::from(2) {
        GeometryClass::Euclidean
    } else if t == BigInt::from(2) {
        GeometryClass::Nil
    } else {
        GeometryClass::Sol
    }
}

/// A rank-2 additive subgroup of Q(sqrt(d)) with an ordered basis.
///
/// The basis order carries orientation data (the minus-continued-fraction
/// cycle of mu2/mu1 and the sign of the defect depend on it), so no
/// reordering happens behind the caller's back. Equality compares the
/// underlying lattices, not the bases.
#[derive(Debug, Clone)]
pub struct LatticeModule {
    d: BigInt,
    basis: [QuadIrr; 2],
}

impl LatticeModule {
    pub fn new(mu1: QuadIrr, mu2: QuadIrr) -> Result<Self> {
        if mu1.field() != mu2.field() {
            return Err(CuspError::IncompatibleFields(
                mu1.field().clone(),
                mu2.field().clone(),
            ));
        }
        // rank 2 over Z means independence over Q of (rational, surd) parts
        let cross = mu1.numer_rat() * mu2.numer_surd() - mu1.numer_surd() * mu2.numer_rat();
        if cross.is_zero() {
            return Err(CuspError::DegenerateModule);
        }
        let d = mu1.field().clone();
        Ok(Self {
            d,
            basis: [mu1, mu2],
        })
    }

    /// O_k itself with ordered basis (1, omega).
    pub fn ring_of_integers(fd: &FieldData) -> Self {
        Self::new(QuadIrr::one(fd.d()), fd.omega().clone()).expect("integral basis")
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn basis(&self) -> &[QuadIrr; 2] {
        &self.basis
    }

    /// Rational coordinates of the basis over (1, omega); row i describes
    /// basis element i.
    fn coord_rows(&self) -> [[Rational; 2]; 2] {
        let (a0, b0) = self.basis[0].omega_coords();
        let (a1, b1) = self.basis[1].omega_coords();
        [[a0, b0], [a1, b1]]
    }

    /// Scales by the positive rational that lands both basis entries in O_k
    /// with coordinate content 1. The multiplication matrix of any field
    /// element is unchanged.
    pub fn canonical_scaled(&self) -> Self {
        let rows = self.coord_rows();
        let mut den = BigInt::one();
        for row in &rows {
            for x in row {
                den = den.lcm(x.denom());
            }
        }
        let mut content = BigInt::zero();
        for row in &rows {
            for x in row {
                content = content.gcd(&(x.numer() * (&den / x.denom())));
            }
        }
        let factor = Rational::new(den, content);
        Self {
            d: self.d.clone(),
            basis: [self.basis[0].scale(&factor), self.basis[1].scale(&factor)],
        }
    }

    /// M -> c M for nonzero c in the same field.
    pub fn scaled_by(&self, c: &QuadIrr) -> Result<Self> {
        if c.is_zero() {
            return Err(CuspError::DegenerateModule);
        }
        Self::new(self.basis[0].checked_mul(c)?, self.basis[1].checked_mul(c)?)
    }

    /// Canonical lattice invariant: the column Hermite form of the integer
    /// coordinate matrix over a common denominator, fully reduced. Two
    /// modules are equal as subgroups of k iff their keys agree.
    fn lattice_key(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        let rows = self.coord_rows();
        let mut den = BigInt::one();
        for row in &rows {
            for x in row {
                den = den.lcm(x.denom());
            }
        }
        // columns of n are the basis vectors in coordinate space
        let n = IntMatrix::new(
            2,
            2,
            vec![
                rows[0][0].numer() * (&den / rows[0][0].denom()),
                rows[1][0].numer() * (&den / rows[1][0].denom()),
                rows[0][1].numer() * (&den / rows[0][1].denom()),
                rows[1][1].numer() * (&den / rows[1][1].denom()),
            ],
        );
        let h = hnf(&n);
        let g = den.gcd(h.get(0, 0)).gcd(h.get(1, 0)).gcd(h.get(1, 1));
        (
            den / &g,
            h.get(0, 0) / &g,
            h.get(1, 0) / &g,
            h.get(1, 1) / &g,
        )
    }

    /// True when x lies in the module.
    pub fn contains(&self, x: &QuadIrr) -> bool {
        match self.coords_of(x) {
            Ok((u, v)) => u.is_integer() && v.is_integer(),
            Err(_) => false,
        }
    }

    /// Rational coordinates of x over the module basis.
    pub fn coords_of(&self, x: &QuadIrr) -> Result<(Rational, Rational)> {
        if x.field() != &self.d {
            return Err(CuspError::IncompatibleFields(
                x.field().clone(),
                self.d.clone(),
            ));
        }
        let rows = self.coord_rows();
        let (xa, xb) = x.omega_coords();
        // solve u * row0 + v * row1 = (xa, xb)
        let det = &rows[0][0] * &rows[1][1] - &rows[0][1] * &rows[1][0];
        debug_assert!(!det.is_zero());
        let u = (&xa * &rows[1][1] - &xb * &rows[1][0]) / &det;
        let v = (&rows[0][0] * &xb - &rows[0][1] * &xa) / &det;
        Ok((u, v))
    }

    /// [O_k : M] for an integral module (canonical scaling first makes the
    /// coordinates integral).
    pub fn index_in_ok(&self) -> BigInt {
        let (den, h00, _, h11) = self.lattice_key();
        debug_assert!(den.is_one(), "index_in_ok needs an integral module");
        (h00 * h11).abs()
    }

    /// Matrix T of multiplication by lambda in the ordered basis:
    /// lambda * mu_j = sum_i T[i][j] mu_i, exact rational entries.
    pub fn multiplication_matrix(&self, lambda: &QuadIrr) -> Result<[[Rational; 2]; 2]> {
        let im0 = self.basis[0].checked_mul(lambda)?;
        let im1 = self.basis[1].checked_mul(lambda)?;
        let (t00, t10) = self.coords_of(&im0)?;
        let (t01, t11) = self.coords_of(&im1)?;
        Ok([[t00, t01], [t10, t11]])
    }

    /// Integral multiplication matrix as a monodromy; errors when lambda
    /// does not stabilize the module or is not a norm +1 unit.
    pub fn multiplication_monodromy(&self, lambda: &QuadIrr) -> Result<Monodromy> {
        let t = self.multiplication_matrix(lambda)?;
        if t.iter().flatten().any(|x| !x.is_integer()) {
            return Err(CuspError::NotAStabilizer);
        }
        Monodromy::new(
            t[0][0].to_integer(),
            t[0][1].to_integer(),
            t[1][0].to_integer(),
            t[1][1].to_integer(),
        )
        .map_err(|_| CuspError::NotAUnit)
    }
}

impl PartialEq for LatticeModule {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.lattice_key() == other.lattice_key()
    }
}

impl Eq for LatticeModule {}

impl Serialize for LatticeModule {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(2))?;
        seq.serialize_element(&self.basis[0])?;
        seq.serialize_element(&self.basis[1])?;
        seq.end()
    }
}

/// Eigen data of a Sol monodromy: the field label d (squarefree part of
/// tr^2 - 4), the eigenvalue unit beta = (tr + f sqrt(d))/2, and the
/// eigenlattice with ordered basis (c, beta - a) scaled canonically. In
/// that basis the multiplication-by-beta matrix is exactly A.
pub fn eigen_data(m: &Monodromy) -> Result<(BigInt, QuadIrr, LatticeModule)> {
    let class = classify_geometry(m);
    if class != GeometryClass::Sol {
        return Err(CuspError::NotSol(class));
    }
    let tr = m.trace();
    let (d, f) = squarefree_decompose(&(&tr * &tr - BigInt::from(4)));
    let beta = QuadIrr::make(tr, f, BigInt::from(2), d.clone());
    let (a, _, c, _) = m.entries();
    let mu1 = QuadIrr::integer(c.clone(), &d);
    let mu2 = beta.checked_sub(&QuadIrr::integer(a.clone(), &d))?;
    let module = LatticeModule::new(mu1, mu2)?.canonical_scaled();
    debug_assert_eq!(module.multiplication_monodromy(&beta)?, m.clone());
    Ok((d, beta, module))
}

/// The generator eps_M of the full totally positive stabilizer of M, with
/// the exponent m such that eps_M = eps_plus^m.
pub fn stabilizer_unit(module: &LatticeModule) -> Result<(QuadIrr, u32)> {
    let fd = field_data(module.d())?;
    stabilizer_unit_with(module, &fd)
}

/// As [`stabilizer_unit`] with a precomputed [`FieldData`].
pub fn stabilizer_unit_with(module: &LatticeModule, fd: &FieldData) -> Result<(QuadIrr, u32)> {
    let eps = fd.eps_plus();
    let t = module.multiplication_matrix(eps)?;
    let integral = |m: &[[Rational; 2]; 2]| m.iter().flatten().all(|x| x.is_integer());
    let mut power = t.clone();
    let mut m = 1u32;
    // eps acts invertibly on O_k / n O_k for the module index n, so some
    // power fixes the sublattice; the loop terminates
    while !integral(&power) {
        let mut next = [
            [Rational::zero(), Rational::zero()],
            [Rational::zero(), Rational::zero()],
        ];
        for (i, row) in next.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = &power[i][0] * &t[0][j] + &power[i][1] * &t[1][j];
            }
        }
        power = next;
        m += 1;
    }
    Ok((eps.pow(m as i64)?, m))
}

/// Standard targets take the character into the totally positive units;
/// negative-trace monodromies land in the full unit group instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VarietyType {
    Standard,
    Generalized,
}

impl fmt::Display for VarietyType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VarietyType::Standard => "standard",
            VarietyType::Generalized => "generalized",
        })
    }
}

fn serialize_bigint<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

fn serialize_opt_bigint<S: Serializer>(
    x: &Option<BigInt>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

/// Everything the classification decides about one monodromy.
#[derive(Debug, Clone, Serialize)]
pub struct ArithmeticityReport {
    pub geometry: GeometryClass,
    #[serde(serialize_with = "serialize_bigint")]
    pub trace: BigInt,
    /// None means not applicable (Euclidean or Nil geometry).
    pub variety_type: Option<VarietyType>,
    #[serde(serialize_with = "serialize_opt_bigint")]
    pub d: Option<BigInt>,
    pub beta: Option<QuadIrr>,
    pub totally_positive: Option<bool>,
    pub module: Option<LatticeModule>,
    #[serde(rename = "module_index_in_Ok", serialize_with = "serialize_opt_bigint")]
    pub module_index_in_ok: Option<BigInt>,
    pub unit_exponent: Option<u32>,
}

/// Classifies A and, in the Sol case, reports the field, character value,
/// variety type and index data of the eigenlattice.
pub fn arithmeticity_report(m: &Monodromy) -> Result<ArithmeticityReport> {
    let geometry = classify_geometry(m);
    if geometry != GeometryClass::Sol {
        return Ok(ArithmeticityReport {
            geometry,
            trace: m.trace(),
            variety_type: None,
            d: None,
            beta: None,
            totally_positive: None,
            module: None,
            module_index_in_ok: None,
            unit_exponent: None,
        });
    }
    let (d, beta, module) = eigen_data(m)?;
    let totally_positive = beta.is_totally_positive();
    let variety_type = if totally_positive {
        VarietyType::Standard
    } else {
        VarietyType::Generalized
    };
    let fd = field_data(&d)?;
    let (eps_m, _) = stabilizer_unit_with(&module, &fd)?;
    // index of <|beta|> inside the full stabilizer <eps_M>
    let mut unit = if totally_positive {
        beta.clone()
    } else {
        beta.neg()
    };
    if unit.sign(Embedding::First) > 0
        && unit
            .cmp_real(&QuadIrr::one(&d))
            .expect("same field")
            .is_lt()
    {
        unit = unit.inverse()?;
    }
    let mut power = eps_m.clone();
    let mut exponent = 1u32;
    while power.cmp_real(&unit).expect("same field").is_lt() {
        power = power.checked_mul(&eps_m)?;
        exponent += 1;
    }
    debug_assert_eq!(power, unit, "beta generates a subgroup of the stabilizer");
    Ok(ArithmeticityReport {
        geometry,
        trace: m.trace(),
        variety_type: Some(variety_type),
        d: Some(d),
        beta: Some(beta),
        totally_positive: Some(totally_positive),
        module_index_in_ok: Some(module.index_in_ok()),
        module: Some(module),
        unit_exponent: Some(exponent),
    })
}

/// One relator record: conjugating x_{fiber} by y_{base} multiplies out to
/// the word x_1^{e_1} ... x_n^{e_n}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelatorRecord {
    pub fiber_index: usize,
    pub base_index: usize,
    pub exponents: Vec<BigInt>,
}

/// Parsed presentation of a torus-bundle group.
#[derive(Debug, Clone)]
pub struct PresentationData {
    pub fiber_rank: usize,
    pub base_rank: usize,
    pub holonomy: Vec<IntMatrix>,
    pub relators: Vec<RelatorRecord>,
}

impl PresentationData {
    /// Exponent vector of x_j under y_k: the explicit relator when present,
    /// else column j of the holonomy matrix.
    pub fn exponents(&self, j: usize, k: usize) -> Vec<BigInt> {
        self.relators
            .iter()
            .find(|r| r.fiber_index == j && r.base_index == k)
            .map(|r| r.exponents.clone())
            .unwrap_or_else(|| {
                let h = &self.holonomy[k];
                (0..self.fiber_rank).map(|i| h.get(i, j).clone()).collect()
            })
    }
}

/// Parses the line-based presentation grammar:
///
/// ```text
/// # comment
/// fiber_rank 2
/// base_rank 1
/// holonomy y1 2 1 1 1
/// rel x1 y1 2 1
/// ```
///
/// Holonomy entries are row-major. Missing rel lines default to the
/// holonomy action; explicit ones must match it.
pub fn parse_presentation(text: &str) -> Result<PresentationData> {
    let mut fiber_rank: Option<usize> = None;
    let mut base_rank: Option<usize> = None;
    let mut holonomy: Vec<Option<(usize, Vec<BigInt>)>> = Vec::new();
    let mut pending_holonomy: Vec<(usize, usize, Vec<BigInt>)> = Vec::new();
    let mut relators: Vec<RelatorRecord> = Vec::new();

    let syntax = |line: usize, msg: &str| CuspError::PresentationSyntax {
        line,
        msg: msg.to_string(),
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "fiber_rank" => {
                if fiber_rank.is_some() {
                    return Err(syntax(line_no, "duplicate fiber_rank"));
                }
                let n: usize = tokens
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .filter(|&n| n >= 1)
                    .ok_or_else(|| syntax(line_no, "fiber_rank needs a positive integer"))?;
                if tokens.len() != 2 {
                    return Err(syntax(line_no, "fiber_rank takes one argument"));
                }
                fiber_rank = Some(n);
            }
            "base_rank" => {
                if base_rank.is_some() {
                    return Err(syntax(line_no, "duplicate base_rank"));
                }
                let m: usize = tokens
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .filter(|&m| m >= 1)
                    .ok_or_else(|| syntax(line_no, "base_rank needs a positive integer"))?;
                if tokens.len() != 2 {
                    return Err(syntax(line_no, "base_rank takes one argument"));
                }
                base_rank = Some(m);
            }
            "holonomy" => {
                let n = fiber_rank.ok_or_else(|| syntax(line_no, "holonomy before fiber_rank"))?;
                let k = parse_generator(tokens.get(1).copied(), 'y')
                    .ok_or_else(|| syntax(line_no, "expected a base generator like y1"))?;
                if tokens.len() != 2 + n * n {
                    return Err(syntax(
                        line_no,
                        &format!("holonomy needs {} row-major entries", n * n),
                    ));
                }
                let mut entries = Vec::with_capacity(n * n);
                for t in &tokens[2..] {
                    entries.push(
                        t.parse::<BigInt>()
                            .map_err(|_| syntax(line_no, &format!("bad integer {t:?}")))?,
                    );
                }
                pending_holonomy.push((line_no, k, entries));
            }
            "rel" => {
                let n = fiber_rank.ok_or_else(|| syntax(line_no, "rel before fiber_rank"))?;
                let j = parse_generator(tokens.get(1).copied(), 'x')
                    .ok_or_else(|| syntax(line_no, "expected a fiber generator like x1"))?;
                let k = parse_generator(tokens.get(2).copied(), 'y')
                    .ok_or_else(|| syntax(line_no, "expected a base generator like y1"))?;
                if tokens.len() != 3 + n {
                    return Err(syntax(line_no, &format!("rel needs {n} exponents")));
                }
                let mut exponents = Vec::with_capacity(n);
                for t in &tokens[3..] {
                    exponents.push(
                        t.parse::<BigInt>()
                            .map_err(|_| syntax(line_no, &format!("bad integer {t:?}")))?,
                    );
                }
                relators.push(RelatorRecord {
                    fiber_index: j - 1,
                    base_index: k - 1,
                    exponents,
                });
            }
            other => {
                return Err(syntax(line_no, &format!("unknown directive {other:?}")));
            }
        }
    }

    let n = fiber_rank.ok_or_else(|| syntax(0, "missing fiber_rank"))?;
    let m = base_rank.ok_or_else(|| syntax(0, "missing base_rank"))?;
    holonomy.resize(m, None);
    for (line_no, k, entries) in pending_holonomy {
        if k == 0 || k > m {
            return Err(syntax(
                line_no,
                &format!("base generator y{k} out of range"),
            ));
        }
        if holonomy[k - 1].is_some() {
            return Err(syntax(line_no, &format!("duplicate holonomy for y{k}")));
        }
        holonomy[k - 1] = Some((line_no, entries));
    }
    let mut matrices = Vec::with_capacity(m);
    for (k, slot) in holonomy.into_iter().enumerate() {
        let (_, entries) =
            slot.ok_or_else(|| syntax(0, &format!("missing holonomy for y{}", k + 1)))?;
        let mat = IntMatrix::new(n, n, entries);
        let det = mat.det();
        if !det.is_one() {
            return Err(CuspError::NotUnimodular(det));
        }
        matrices.push(mat);
    }
    for r in &relators {
        if r.fiber_index >= n {
            return Err(syntax(
                0,
                &format!("fiber generator x{} out of range", r.fiber_index + 1),
            ));
        }
        if r.base_index >= m {
            return Err(syntax(
                0,
                &format!("base generator y{} out of range", r.base_index + 1),
            ));
        }
        let h = &matrices[r.base_index];
        let column: Vec<BigInt> = (0..n).map(|i| h.get(i, r.fiber_index).clone()).collect();
        if column != r.exponents {
            return Err(CuspError::InconsistentRelators {
                fiber: r.fiber_index + 1,
                base: r.base_index + 1,
            });
        }
    }
    Ok(PresentationData {
        fiber_rank: n,
        base_rank: m,
        holonomy: matrices,
        relators,
    })
}

fn parse_generator(token: Option<&str>, prefix: char) -> Option<usize> {
    let t = token?;
    let rest = t.strip_prefix(prefix)?;
    rest.parse::<usize>().ok().filter(|&i| i >= 1)
}

/// Element (translation, scaling) of k x| k^x under the affine group law
/// (a, b)(a', b') = (a + b a', b b').
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffElement {
    pub translation: QuadIrr,
    pub scaling: QuadIrr,
}

impl AffElement {
    pub fn new(translation: QuadIrr, scaling: QuadIrr) -> Self {
        Self {
            translation,
            scaling,
        }
    }

    pub fn identity(d: &BigInt) -> Self {
        Self::new(QuadIrr::zero(d), QuadIrr::one(d))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            translation: self
                .translation
                .checked_add(&self.scaling.checked_mul(&other.translation)?)?,
            scaling: self.scaling.checked_mul(&other.scaling)?,
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        let si = self.scaling.inverse()?;
        Ok(Self {
            translation: si.checked_mul(&self.translation)?.neg(),
            scaling: si,
        })
    }
}

/// A faithful affine representation of a (2,1)-bundle group.
#[derive(Debug, Clone, Serialize)]
pub struct Representation {
    #[serde(serialize_with = "serialize_bigint")]
    pub d: BigInt,
    /// Images of the fiber generators: translations (alpha_j, 1).
    pub alpha: Vec<QuadIrr>,
    /// Translation parts of the base generator images.
    pub gamma: Vec<QuadIrr>,
    /// Unit parts of the base generator images.
    pub beta: Vec<QuadIrr>,
    pub target: VarietyType,
    #[serde(serialize_with = "serialize_bigint")]
    pub fiber_index: BigInt,
}

impl Representation {
    /// Conjugation by the pure scaling (0, lambda): every translation is
    /// multiplied by lambda while the unit parts stay fixed.
    pub fn conjugated_by_scaling(&self, lambda: &QuadIrr) -> Result<Self> {
        Ok(Self {
            d: self.d.clone(),
            alpha: self
                .alpha
                .iter()
                .map(|a| a.checked_mul(lambda))
                .collect::<Result<_>>()?,
            gamma: self
                .gamma
                .iter()
                .map(|g| g.checked_mul(lambda))
                .collect::<Result<_>>()?,
            beta: self.beta.clone(),
            target: self.target,
            fiber_index: self.fiber_index.clone(),
        })
    }

    /// True when every image lies in O_k x| O_k^x.
    pub fn is_integral(&self) -> bool {
        self.alpha
            .iter()
            .chain(&self.gamma)
            .all(QuadIrr::is_algebraic_integer)
            && self.beta.iter().all(QuadIrr::is_algebraic_integer)
    }

    /// Clears denominators by conjugating with a rational integer scaling,
    /// returning the cleared representation and the scalar used. The unit
    /// parts are untouched.
    pub fn cleared(&self) -> Result<(Self, QuadIrr)> {
        let mut l = BigInt::one();
        for value in self.alpha.iter().chain(&self.gamma) {
            let (x, y) = value.omega_coords();
            l = l.lcm(x.denom()).lcm(y.denom());
        }
        let lambda = QuadIrr::integer(l, &self.d);
        Ok((self.conjugated_by_scaling(&lambda)?, lambda))
    }

    /// Exact verification of every relator under the affine group law:
    /// y_k x_j y_k^{-1} must equal x_1^{e_1} ... x_n^{e_n}.
    pub fn verify_relations(&self, pres: &PresentationData) -> Result<bool> {
        for k in 0..pres.base_rank {
            let y = AffElement::new(self.gamma[k].clone(), self.beta[k].clone());
            let y_inv = y.inverse()?;
            for j in 0..pres.fiber_rank {
                let x = AffElement::new(self.alpha[j].clone(), QuadIrr::one(&self.d));
                let lhs = y.mul(&x)?.mul(&y_inv)?;
                let exps = pres.exponents(j, k);
                let mut translation = QuadIrr::zero(&self.d);
                for (i, e) in exps.iter().enumerate() {
                    let term = self.alpha[i].scale(&Rational::from_integer(e.clone()));
                    translation = translation.checked_add(&term)?;
                }
                let rhs = AffElement::new(translation, QuadIrr::one(&self.d));
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Builds the affine representation of a (2,1)-bundle group: fiber
/// generators map to the eigenlattice basis translations, the base
/// generator to (0, beta). Relators are re-verified exactly.
pub fn build_representation(pres: &PresentationData) -> Result<Representation> {
    if pres.fiber_rank != 2 || pres.base_rank != 1 {
        return Err(CuspError::UnsupportedRank {
            n: pres.fiber_rank,
            m: pres.base_rank,
        });
    }
    let h = &pres.holonomy[0];
    let monodromy = Monodromy::new(
        h.get(0, 0).clone(),
        h.get(0, 1).clone(),
        h.get(1, 0).clone(),
        h.get(1, 1).clone(),
    )?;
    let (d, beta, module) = eigen_data(&monodromy)?;
    let target = if beta.is_totally_positive() {
        VarietyType::Standard
    } else {
        VarietyType::Generalized
    };
    let rep = Representation {
        fiber_index: module.index_in_ok(),
        alpha: module.basis().to_vec(),
        gamma: vec![QuadIrr::zero(&d)],
        beta: vec![beta],
        target,
        d,
    };
    if !rep.verify_relations(pres)? {
        return Err(CuspError::InconsistentRelators { fiber: 0, base: 0 });
    }
    Ok(rep)
}
