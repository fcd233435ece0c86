//! Classes on `M̄_{g,n}`: the canonical class, pointed Brill–Noether type
//! divisors and a general-type certificate search over symmetric classes.

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome};
use crate::picard::{
    separating_divisors, symmetric_keys, AnnotatedClass, AnnotatedSymmetricClass, BoundaryIndex, DivisorClass,
    ModuliSignature, SymmetricDivisorClass, SymmetricKey,
};
use crate::rational::{binomial, from_bigint, int, Rational};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

fn boundary_weight(sig: &ModuliSignature, genus: u32) -> Rational {
    if genus == 1 || sig.g - genus == 1 {
        int(-3)
    } else {
        int(-2)
    }
}

/// `13λ - 2δ_0 + Σψ_i - 2Σδ_{i:S} - Σ_S δ_{1:S}`. Every divisor with a
/// genus-1 side, including `S = ∅`, gets `-3`.
pub fn canonical_class_gn(g: u32, n: u32) -> Result<DivisorClass> {
    let sig = ModuliSignature::new(g, n)?;
    let mut k = DivisorClass::zero(sig);
    k.lambda = int(13);
    k.psi = vec![int(1); n as usize];
    k.delta0 = int(-2);
    for idx in separating_divisors(&sig)? {
        let w = boundary_weight(&sig, idx.genus);
        k.set(&BoundaryIndex::Separating(idx), w)?;
    }
    Ok(k)
}

/// The same class in symmetric form; works for any `n`.
pub fn canonical_class_gn_symmetric(g: u32, n: u32) -> Result<SymmetricDivisorClass> {
    let sig = ModuliSignature::new(g, n)?;
    let mut k = SymmetricDivisorClass::zero(sig);
    k.lambda = int(13);
    k.psi = if n > 0 { int(1) } else { Rational::zero() };
    k.delta0 = int(-2);
    for key in symmetric_keys(&sig) {
        k.set(&key, boundary_weight(&sig, key.genus))?;
    }
    Ok(k)
}

/// `D_{g:a_1..a_n}`, the closure of the locus where `h^0(Σ a_i x_i) >= 2`.
///
/// Only `λ`, `ψ_i`, `δ_0` and the `δ_{0:{i,j}}` are known in general, so the
/// result is marked incomplete. For `n = 1` this is the Weierstrass divisor,
/// whose class is known in full.
pub fn logan_class(g: u32, a: &[u32]) -> Result<AnnotatedClass> {
    let sum: u64 = a.iter().map(|&x| x as u64).sum();
    if sum != g as u64 {
        return Err(Error::Precondition(format!("the a_i sum to {sum}, expected g = {g}")));
    }
    let n = a.len() as u32;
    if n == 0 {
        return Err(Error::Precondition("at least one marked point is required".into()));
    }
    let sig = ModuliSignature::new(g, n)?;
    let c2 = |m: i64| from_bigint(binomial(m, 2));
    let mut d = DivisorClass::zero(sig);
    d.lambda = int(-1);
    for (i, &ai) in a.iter().enumerate() {
        d.psi[i] = c2(ai as i64 + 1);
    }
    if n == 1 {
        for i in 1..g {
            d.set(&BoundaryIndex::separating(i, [1]), -c2((g - i) as i64 + 1))?;
        }
        return Ok(AnnotatedClass { class: d, lower_bounds: BTreeSet::new(), complete: true });
    }
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let v = -c2(a[i] as i64 + a[j] as i64 + 1);
            d.set(&BoundaryIndex::separating(0, [i as u32 + 1, j as u32 + 1]), v)?;
        }
    }
    Ok(AnnotatedClass { class: d, lower_bounds: BTreeSet::new(), complete: false })
}

/// Parameters of the divisor of pointed curves with a failing resonance
/// condition; `n = (2r+1)(g-1) - 2i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MrcParams {
    pub g: u32,
    pub r: u32,
    pub i: u32,
    pub n: u32,
}

impl MrcParams {
    pub fn new(g: u32, r: u32, i: u32) -> Result<MrcParams> {
        if g <= 2 {
            return Err(Error::Precondition(format!("g must be at least 3, got {g}")));
        }
        if r < 1 {
            return Err(Error::Precondition("r must be at least 1".into()));
        }
        if i > g {
            return Err(Error::Precondition(format!("i = {i} exceeds g = {g}")));
        }
        let n = (2 * r as i64 + 1) * (g as i64 - 1) - 2 * i as i64;
        if n <= 0 {
            return Err(Error::Precondition(format!("n = {n} is not positive")));
        }
        Ok(MrcParams { g, r, i, n: n as u32 })
    }

    pub fn prefactor(&self) -> Rational {
        from_bigint(binomial(self.g as i64 - 1, self.i as i64)) / int(self.g as i64 - 1)
    }

    pub fn c(&self) -> Rational {
        let (g, r, i) = self.gri();
        int(r * g + g - i - r - 1)
    }

    pub fn b0(&self) -> Rational {
        let (g, r, i) = self.gri();
        let num = from_bigint(binomial(r + 1, 2)) * int((g - 1) * (g - 2)) + int(i * (i + 1 + 2 * r - r * g - g));
        -num / int(g - 2)
    }

    pub fn a(&self) -> Rational {
        let (g, r, i) = self.gri();
        let num = (g - 1) * (g - 2) * (6 * r * r + 6 * r + 1) + i * (24 * r + 10 * i + 10 - 10 * g - 12 * r * g);
        -int(num) / int(g - 2)
    }

    /// `b_{0:s}`.
    pub fn b0s(&self, s: u32) -> Rational {
        let (g, r, i) = self.gri();
        let s = s as i64;
        from_bigint(binomial(s + 1, 2)) * int(g - 1) + int(s * (r * g - r) - s * i)
    }

    fn gri(&self) -> (i64, i64, i64) {
        (self.g as i64, self.r as i64, self.i as i64)
    }
}

/// The symmetric class `prefactor · (aλ + cΣψ - b_0δ_0 - Σ b_{j:s}δ_{j:S})`.
///
/// `a` and `b_0` are kept exactly as the closed forms give them, even where
/// they come out negative. For `j >= 1` only `b_{j:s} >= b_{0:s}` is known;
/// the stored value is `min(b_{0:s}, b_{0:n-s})`, which bounds the true
/// coefficient from below whichever side of the node is read as `S`, and the
/// key is listed in `lower_bounds`.
pub fn mrc_class(g: u32, r: u32, i: u32) -> Result<AnnotatedSymmetricClass> {
    let p = MrcParams::new(g, r, i)?;
    let sig = ModuliSignature::new(g, p.n)?;
    let f = p.prefactor();
    let mut d = SymmetricDivisorClass::zero(sig);
    d.lambda = &f * p.a();
    d.psi = &f * p.c();
    d.delta0 = -(&f * p.b0());
    let mut lower_bounds = BTreeSet::new();
    for key in symmetric_keys(&sig) {
        let b = if key.genus == 0 {
            p.b0s(key.size)
        } else {
            lower_bounds.insert(key);
            std::cmp::min(p.b0s(key.size), p.b0s(p.n - key.size))
        };
        d.set(&key, -(&f * b))?;
    }
    Ok(AnnotatedSymmetricClass { class: d, lower_bounds, complete: true })
}

/// Compresses a full annotated class for use as a certificate candidate.
/// A bound on any divisor of an orbit marks the whole orbit as bounded.
pub fn symmetric_candidate(doc: &AnnotatedClass) -> Result<AnnotatedSymmetricClass> {
    if !doc.complete {
        return Err(Error::Precondition("class has unknown coefficients".into()));
    }
    let sig = doc.class.signature();
    let class = SymmetricDivisorClass::symmetrize(&doc.class)?;
    let mut lower_bounds = BTreeSet::new();
    for idx in &doc.lower_bounds {
        if let BoundaryIndex::Separating(s) = idx {
            lower_bounds.insert(SymmetricKey::of(s, &sig)?);
        }
    }
    Ok(AnnotatedSymmetricClass { class, lower_bounds, complete: true })
}

/// `K = Σ α_k D_k + t·(a_ψ Σψ + b λ - δ_0 - Σ δ_{j:S}) + E` with `b > 11`,
/// `a_ψ > 0` and `E` effective boundary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GnCertificate {
    pub multipliers: Vec<Rational>,
    pub scale: Rational,
    pub ample_lambda: Rational,
    /// Zero when `n = 0`.
    pub ample_psi: Rational,
    pub delta0: Rational,
    pub boundary: Vec<(SymmetricKey, Rational)>,
    pub uses_bounds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GnOutcome {
    Certified(GnCertificate),
    Inconclusive,
}

/// Looks for an expression of the canonical class of `M̄_{g,n}` through the
/// candidates, an ample class and boundary.
///
/// Coefficients flagged as bounds are used at their stored value. The
/// boundary multiplier for such a key is `α·b + t - w` with `w` the
/// canonical weight, which only grows with the true `b`, so a certificate
/// found with the bound stays valid.
pub fn general_type_certificate_gn(g: u32, n: u32, candidates: &[AnnotatedSymmetricClass]) -> Result<GnOutcome> {
    let sig = ModuliSignature::new(g, n)?;
    for c in candidates {
        let found = c.class.signature();
        if found != sig {
            return Err(Error::SignatureMismatch { expected_g: g, expected_n: n, found_g: found.g, found_n: found.n });
        }
        if !c.complete {
            return Err(Error::Precondition("candidate has unknown coefficients".into()));
        }
    }
    let k = canonical_class_gn_symmetric(g, n)?;
    let keys = symmetric_keys(&sig);
    let m = candidates.len();
    let has_psi = n > 0;
    // variables: α_0..α_{m-1}, t, u = t(b - 11), [p = t·a_ψ], e_0, e_key..
    let it = m;
    let iu = m + 1;
    let ip = m + 2;
    let ie0 = if has_psi { m + 3 } else { m + 2 };
    let nvars = ie0 + 1 + keys.len();
    let mut lp = LinearProgram::new(nvars);
    let row_with = |f: &dyn Fn(&SymmetricDivisorClass) -> Rational| -> Vec<Rational> {
        let mut row = vec![Rational::zero(); nvars];
        for (j, c) in candidates.iter().enumerate() {
            row[j] = f(&c.class);
        }
        row
    };

    let mut row = row_with(&|d| d.lambda.clone());
    row[it] = int(11);
    row[iu] = Rational::one();
    lp.add_row(row, k.lambda.clone());
    if has_psi {
        let mut row = row_with(&|d| d.psi.clone());
        row[ip] = Rational::one();
        lp.add_row(row, k.psi.clone());
    }
    let mut row = row_with(&|d| d.delta0.clone());
    row[it] = int(-1);
    row[ie0] = Rational::one();
    lp.add_row(row, k.delta0.clone());
    for (q, key) in keys.iter().enumerate() {
        let mut row = row_with(&|d| d.get(key).unwrap_or_else(|_| Rational::zero()));
        row[it] = int(-1);
        row[ie0 + 1 + q] = Rational::one();
        lp.add_row(row, k.get(key)?);
    }
    lp.set_strict(it);
    lp.set_strict(iu);
    if has_psi {
        lp.set_strict(ip);
    }
    match lp.solve(&[])? {
        LpOutcome::Infeasible { .. } => Ok(GnOutcome::Inconclusive),
        LpOutcome::Feasible(x) => {
            let t = x[it].clone();
            let cert = GnCertificate {
                multipliers: x[..m].to_vec(),
                ample_lambda: int(11) + &x[iu] / &t,
                ample_psi: if has_psi { &x[ip] / &t } else { Rational::zero() },
                scale: t,
                delta0: x[ie0].clone(),
                boundary: keys.iter().zip(&x[ie0 + 1..]).map(|(k, v)| (*k, v.clone())).collect(),
                uses_bounds: candidates.iter().any(|c| !c.lower_bounds.is_empty()),
            };
            verify_gn_certificate(g, n, candidates, &cert)?;
            Ok(GnOutcome::Certified(cert))
        }
    }
}

/// Checks signs and recombines the certificate to `K` exactly, using the
/// stored coefficients of the candidates.
pub fn verify_gn_certificate(
    g: u32,
    n: u32,
    candidates: &[AnnotatedSymmetricClass],
    cert: &GnCertificate,
) -> Result<()> {
    let sig = ModuliSignature::new(g, n)?;
    if cert.multipliers.len() != candidates.len() {
        return Err(Error::Inconsistent("one multiplier per candidate expected".into()));
    }
    if cert.multipliers.iter().chain([&cert.delta0]).chain(cert.boundary.iter().map(|(_, v)| v)).any(|v| v.is_negative())
    {
        return Err(Error::Inconsistent("negative multiplier".into()));
    }
    if !cert.scale.is_positive() || cert.ample_lambda <= int(11) || (n > 0 && !cert.ample_psi.is_positive()) {
        return Err(Error::Inconsistent("ample part violates b > 11, a_ψ > 0 or t > 0".into()));
    }
    let t = &cert.scale;
    let mut rebuilt = SymmetricDivisorClass::zero(sig);
    rebuilt.lambda = t * &cert.ample_lambda;
    rebuilt.psi = if n > 0 { t * &cert.ample_psi } else { Rational::zero() };
    rebuilt.delta0 = &cert.delta0 - t;
    for key in symmetric_keys(&sig) {
        rebuilt.set(&key, -t.clone())?;
    }
    for (key, v) in &cert.boundary {
        let cur = rebuilt.get(key)?;
        rebuilt.set(key, cur + v)?;
    }
    for (alpha, c) in cert.multipliers.iter().zip(candidates) {
        let d = &c.class;
        rebuilt.lambda += alpha * &d.lambda;
        rebuilt.psi += alpha * &d.psi;
        rebuilt.delta0 += alpha * &d.delta0;
        for (key, v) in d.separating() {
            let cur = rebuilt.get(key)?;
            rebuilt.set(key, cur + alpha * v)?;
        }
    }
    if rebuilt != canonical_class_gn_symmetric(g, n)? {
        return Err(Error::Inconsistent("certificate does not recombine to the canonical class".into()));
    }
    Ok(())
}

/// Label attached to [`mgn_table`] wherever it is printed.
pub const MGN_TABLE_LABEL: &str = "reported values; full re-derivation out of scope";

/// Reported thresholds `f(g)`: `M̄_{g,n}` is of general type for `n >= f(g)`.
pub fn mgn_table() -> Vec<(u32, u32)> {
    const F: [u32; 18] = [16, 15, 16, 15, 14, 13, 11, 12, 13, 11, 10, 10, 9, 9, 9, 7, 6, 4];
    (4..=21).zip(F).collect()
}

/// Parity of `n` for valid Mrc parameters agrees with that of `g - 1`.
pub fn mrc_parity_holds(p: &MrcParams) -> bool {
    p.n % 2 == (p.g - 1) % 2
}
