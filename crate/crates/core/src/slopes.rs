//! Slopes, named classes on `M̄_g`, test-curve pairings and general-type
//! certificates on `M̄_g`.

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome};
use crate::picard::{AnnotatedClass, BoundaryIndex, DivisorClass, ModuliSignature};
use crate::rational::{int, rat, Rational};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;

/// Brill-Noether number `g - (r+1)(g-d+r)`.
pub fn rho(g: i64, r: i64, d: i64) -> i64 {
    g - (r + 1) * (g - d + r)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SlopeValue {
    Finite(Rational),
    Infinite,
}

impl SlopeValue {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            SlopeValue::Finite(q) => Some(q),
            SlopeValue::Infinite => None,
        }
    }
}

impl fmt::Display for SlopeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlopeValue::Finite(q) => write!(f, "{q}"),
            SlopeValue::Infinite => write!(f, "inf"),
        }
    }
}

/// `a / min b_i` for `D = a λ - Σ b_i δ_i`, infinite unless `a >= 0` and every
/// `b_i > 0`.
///
/// For `g <= 2` this is the value on the given coefficient vector; other
/// representatives of the same class in `Pic` may give other values.
pub fn slope(d: &DivisorClass) -> Result<SlopeValue> {
    let (a, b) = d.mg_coefficients()?;
    let min = b.iter().min().cloned().unwrap_or_else(Rational::zero);
    if a.is_negative() || !min.is_positive() {
        return Ok(SlopeValue::Infinite);
    }
    Ok(SlopeValue::Finite(a / min))
}

/// `6 + 12/(g+1)`.
pub fn slope_bound(g: u32) -> Rational {
    int(6) + rat(12, g as i64 + 1)
}

/// The Brill-Noether divisor class with its leading constant set to 1.
pub fn brill_noether_class(g: u32, r: u32, d: u32) -> Result<DivisorClass> {
    let rh = rho(g as i64, r as i64, d as i64);
    if rh != -1 {
        return Err(Error::Precondition(format!(
            "the Brill-Noether divisor needs rho(g,r,d) = -1, but rho({g},{r},{d}) = {rh}"
        )));
    }
    let gi = g as i64;
    let mut b = vec![rat(gi + 1, 6)];
    b.extend((1..=gi / 2).map(|i| int(i * (gi - i))));
    DivisorClass::from_mg(g, int(gi + 3), &b)
}

/// All `(r, d)` with `1 <= r` and `rho(g, r, d) = -1`.
pub fn brill_noether_triples(g: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for r in 1..=g {
        for d in 1..=2 * g {
            if rho(g as i64, r as i64, d as i64) == -1 {
                out.push((r, d));
            }
        }
    }
    out
}

/// `13λ - 2δ_0 - 3δ_1 - 2δ_2 - ... - 2δ_{⌊g/2⌋}`.
pub fn canonical_class_mg(g: u32) -> Result<DivisorClass> {
    if g < 2 {
        return Err(Error::Precondition(format!("canonical class on M̄_g needs g >= 2, got {g}")));
    }
    let mut b = vec![int(2); g as usize / 2 + 1];
    b[1] = int(3);
    DivisorClass::from_mg(g, int(13), &b)
}

pub const NAMED_CLASSES: &[&str] = &["k10", "hyperelliptic3", "nef3a", "nef3b", "d22"];

pub fn named_class(name: &str) -> Result<AnnotatedClass> {
    let ints = |v: &[i64]| v.iter().map(|&x| int(x)).collect::<Vec<_>>();
    let plain = |g, a, b: &[i64]| Ok(AnnotatedClass::plain(DivisorClass::from_mg(g, int(a), &ints(b))?));
    match name {
        "k10" => plain(10, 7, &[1, 5, 9, 12, 14, 15]),
        "hyperelliptic3" => plain(3, 9, &[1, 3]),
        "nef3a" => plain(3, 12, &[1]),
        "nef3b" => plain(3, 10, &[1, 2]),
        "d22" => {
            let mut b = vec![int(1), rat(14511, 2636)];
            b.extend((2..=11).map(|_| int(1)));
            let class = DivisorClass::from_mg(22, rat(17121, 2636), &b)?;
            let lower_bounds: BTreeSet<BoundaryIndex> =
                (2..=11).map(|i| BoundaryIndex::separating(i, [])).collect();
            Ok(AnnotatedClass { class, lower_bounds, complete: true })
        }
        other => Err(Error::UnknownName(other.to_string())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TestCurve {
    /// Lefschetz pencil on a K3 surface.
    B,
    /// Pencil of plane cubics glued along a section.
    R,
    C0,
    C1,
}

impl TestCurve {
    pub const ALL: [TestCurve; 4] = [TestCurve::B, TestCurve::R, TestCurve::C0, TestCurve::C1];

    pub fn parse(name: &str) -> Result<TestCurve> {
        match name {
            "B" | "b" => Ok(TestCurve::B),
            "R" | "r" => Ok(TestCurve::R),
            "C0" | "c0" => Ok(TestCurve::C0),
            "C1" | "c1" => Ok(TestCurve::C1),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }
}

impl fmt::Display for TestCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TestCurve::B => "B",
            TestCurve::R => "R",
            TestCurve::C0 => "C0",
            TestCurve::C1 => "C1",
        };
        f.write_str(s)
    }
}

/// Intersection numbers of a curve in `M̄_g` with `λ`, `δ_0` and `δ_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveProfile {
    pub name: String,
    pub g: u32,
    pub lambda: Rational,
    pub delta0: Rational,
    /// Entry `i - 1` is the degree of `δ_i`, `1 <= i <= ⌊g/2⌋`.
    pub deltas: Vec<Rational>,
}

impl CurveProfile {
    pub fn new(curve: TestCurve, g: u32) -> Result<CurveProfile> {
        ModuliSignature::curves(g)?;
        let gi = g as i64;
        let mut deltas = vec![Rational::zero(); g as usize / 2];
        let (lambda, delta0) = match curve {
            TestCurve::B => (int(gi + 1), int(6 * gi + 18)),
            TestCurve::R => {
                set_first(&mut deltas, int(-1));
                (int(1), int(12))
            }
            TestCurve::C0 => {
                set_first(&mut deltas, int(1));
                (int(0), int(-(2 * gi - 2)))
            }
            TestCurve::C1 => {
                set_first(&mut deltas, int(-(2 * gi - 4)));
                (int(0), int(0))
            }
        };
        Ok(CurveProfile { name: curve.to_string(), g, lambda, delta0, deltas })
    }
}

fn set_first(v: &mut [Rational], x: Rational) {
    if let Some(first) = v.first_mut() {
        *first = x;
    }
}

/// Degree of `D` on the curve.
pub fn pair(d: &DivisorClass, profile: &CurveProfile) -> Result<Rational> {
    let sig = d.signature();
    if sig.n != 0 || sig.g != profile.g {
        return Err(Error::SignatureMismatch { expected_g: profile.g, expected_n: 0, found_g: sig.g, found_n: sig.n });
    }
    let mut acc = &d.lambda * &profile.lambda + &d.delta0 * &profile.delta0;
    for (i, c) in profile.deltas.iter().enumerate() {
        acc += d.mg_delta(i as u32 + 1) * c;
    }
    Ok(acc)
}

/// Degree of `base + t·direction` on the curve as `(constant, slope)` in `t`.
pub fn pair_affine(base: &DivisorClass, direction: &DivisorClass, profile: &CurveProfile) -> Result<(Rational, Rational)> {
    let c = pair(base, profile)?;
    let s = pair(direction, profile)?;
    Ok((c, s))
}

/// `Σ_{i=0}^{⌊g/2⌋} δ_i`.
pub fn total_boundary(g: u32) -> Result<DivisorClass> {
    DivisorClass::from_mg(g, int(0), &vec![int(-1); g as usize / 2 + 1])
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K3Verdict {
    pub slope: SlopeValue,
    pub bound: Rational,
    /// `s(D) < 6 + 12/(g+1)`.
    pub below_bound: bool,
    pub b_pairing: Rational,
    pub b_negative: bool,
}

/// Compares the slope with `6 + 12/(g+1)` and reports the degree on the
/// K3 pencil `B`; the two agree for classes with `b_i >= b_0 > 0`.
pub fn k3_slope_test(d: &DivisorClass) -> Result<K3Verdict> {
    let g = d.signature().g;
    let s = slope(d)?;
    let bound = slope_bound(g);
    let below_bound = matches!(&s, SlopeValue::Finite(q) if *q < bound);
    let b_pairing = pair(d, &CurveProfile::new(TestCurve::B, g)?)?;
    let b_negative = b_pairing.is_negative();
    Ok(K3Verdict { slope: s, bound, below_bound, b_pairing, b_negative })
}

/// `K = α D + β λ + Σ c_i δ_i` with `α, β > 0` and `c_i >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MgCertificate {
    pub alpha: Rational,
    pub beta: Rational,
    /// `c_0, .., c_{⌊g/2⌋}`.
    pub boundary: Vec<Rational>,
    /// True when some coefficient of `D` was a bound rather than a value.
    pub uses_bounds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GtOutcome {
    Certified(MgCertificate),
    Infeasible,
}

/// Searches for a decomposition of the canonical class through `D`,
/// minimizing `α`. Coefficients flagged as bounds are used at their stored
/// value; since the true `b_i` is at least that value, the matching `c_i`
/// only grows, so a certificate found this way stays valid.
pub fn general_type_certificate_mg(doc: &AnnotatedClass) -> Result<GtOutcome> {
    if !doc.complete {
        return Err(Error::Precondition("class has unknown coefficients".into()));
    }
    let d = &doc.class;
    let g = d.signature().g;
    let k = canonical_class_mg(g)?;
    let (a, b) = d.mg_coefficients()?;
    let (ka, kb) = k.mg_coefficients()?;
    let h = b.len();
    // variables: α, β, c_0..c_h
    let mut lp = LinearProgram::new(2 + h);
    let mut row = vec![Rational::zero(); 2 + h];
    row[0] = a.clone();
    row[1] = Rational::one();
    lp.add_row(row, ka.clone());
    for i in 0..h {
        // δ_i coefficient: -kb_i = -α b_i + c_i
        let mut row = vec![Rational::zero(); 2 + h];
        row[0] = -b[i].clone();
        row[2 + i] = Rational::one();
        lp.add_row(row, -kb[i].clone());
    }
    lp.set_strict(0);
    lp.set_strict(1);
    match lp.solve(&[])? {
        LpOutcome::Infeasible { .. } => Ok(GtOutcome::Infeasible),
        LpOutcome::Feasible(x) => {
            let cert = MgCertificate {
                alpha: x[0].clone(),
                beta: x[1].clone(),
                boundary: x[2..].to_vec(),
                uses_bounds: !doc.lower_bounds.is_empty(),
            };
            verify_mg_certificate(d, &cert)?;
            Ok(GtOutcome::Certified(cert))
        }
    }
}

/// Exact recombination check `α D + β λ - Σ c_i (-δ_i) = K`.
pub fn verify_mg_certificate(d: &DivisorClass, cert: &MgCertificate) -> Result<()> {
    let g = d.signature().g;
    let mut rebuilt = d.scaled(&cert.alpha);
    rebuilt.lambda += &cert.beta;
    for (i, c) in cert.boundary.iter().enumerate() {
        if c.is_negative() {
            return Err(Error::Inconsistent(format!("negative boundary multiplier at δ_{i}")));
        }
        let idx = if i == 0 { BoundaryIndex::Irreducible } else { BoundaryIndex::separating(i as u32, []) };
        rebuilt.add_to(&idx, c)?;
    }
    if !cert.alpha.is_positive() || !cert.beta.is_positive() {
        return Err(Error::Inconsistent("α and β must be positive".into()));
    }
    if rebuilt != canonical_class_mg(g)? {
        return Err(Error::Inconsistent(format!("certificate recombines to {rebuilt}")));
    }
    Ok(())
}
