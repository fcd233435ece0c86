//! Divisor classes on `M̄_{g,n}` over the basis `λ, ψ_1..ψ_n, δ_0, δ_{i:S}`.
//!
//! Coefficients are exact rationals and storage is sparse: a boundary key that
//! is absent has coefficient zero. Every separating key is kept in canonical
//! form under the identification `δ_{i:S} = δ_{g-i:S^c}`.
//!
//! For `g <= 2` the generators satisfy relations in `Pic`, so two coefficient
//! vectors may differ while the classes agree; equality here is always
//! coefficient-wise.

use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};
use num_traits::{One, Signed, Zero};
use serde_json::{Map, Value};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Largest `n` for which the full list of separating boundary divisors is
/// enumerated.
pub const MAX_ENUMERATED_POINTS: u32 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModuliSignature {
    pub g: u32,
    pub n: u32,
}

impl ModuliSignature {
    pub fn new(g: u32, n: u32) -> Result<Self> {
        if 2 * g as i64 - 2 + n as i64 <= 0 {
            return Err(Error::Unstable { g, n });
        }
        Ok(ModuliSignature { g, n })
    }

    /// `M̄_g`, i.e. `n = 0`.
    pub fn curves(g: u32) -> Result<Self> {
        Self::new(g, 0)
    }

    pub fn half_genus(&self) -> u32 {
        self.g / 2
    }

    fn check_same(&self, other: &ModuliSignature) -> Result<()> {
        if self != other {
            return Err(Error::SignatureMismatch {
                expected_g: self.g,
                expected_n: self.n,
                found_g: other.g,
                found_n: other.n,
            });
        }
        Ok(())
    }
}

/// `δ_{i:S}`: genus `i` on the side carrying the marked points in `S`.
/// Labels are 1-based and sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeparatingIndex {
    pub genus: u32,
    pub labels: Vec<u32>,
}

impl SeparatingIndex {
    pub fn new(genus: u32, labels: impl IntoIterator<Item = u32>) -> Self {
        let mut labels: Vec<u32> = labels.into_iter().collect();
        labels.sort_unstable();
        SeparatingIndex { genus, labels }
    }

    /// `δ_i` on `M̄_g`.
    pub fn unpointed(genus: u32) -> Self {
        SeparatingIndex { genus, labels: Vec::new() }
    }

    fn complement_labels(&self, n: u32) -> Vec<u32> {
        (1..=n).filter(|l| self.labels.binary_search(l).is_err()).collect()
    }

    /// Canonical representative of the divisor, or an error if the index is
    /// not a separating boundary divisor of `sig`.
    pub fn canonical(&self, sig: &ModuliSignature) -> Result<SeparatingIndex> {
        let g = sig.g;
        let n = sig.n;
        if self.genus > g {
            return Err(Error::InvalidBoundary(format!(
                "genus part {} exceeds g = {}",
                self.genus, g
            )));
        }
        for w in self.labels.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidBoundary(format!(
                    "labels {:?} are not strictly increasing",
                    self.labels
                )));
            }
        }
        if let Some(&bad) = self.labels.iter().find(|&&l| l == 0 || l > n) {
            return Err(Error::InvalidBoundary(format!("label {bad} outside 1..={n}")));
        }
        let size = self.labels.len() as u32;
        if self.genus == 0 && size < 2 {
            return Err(Error::InvalidBoundary(format!(
                "genus-0 side needs at least two marked points, got {size}"
            )));
        }
        let other = g - self.genus;
        if other == 0 && n - size < 2 {
            return Err(Error::InvalidBoundary(format!(
                "genus-0 complement needs at least two marked points, got {}",
                n - size
            )));
        }
        let flip = if self.genus != other {
            self.genus > other
        } else {
            // Equal genera: keep the side holding label 1.
            n > 0 && self.labels.first() != Some(&1)
        };
        if flip {
            Ok(SeparatingIndex { genus: other, labels: self.complement_labels(n) })
        } else {
            Ok(self.clone())
        }
    }

    fn render_key(&self, sig: &ModuliSignature) -> String {
        if sig.n == 0 {
            self.genus.to_string()
        } else {
            let labels: Vec<String> = self.labels.iter().map(|l| l.to_string()).collect();
            format!("{}:{{{}}}", self.genus, labels.join(","))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryIndex {
    Irreducible,
    Separating(SeparatingIndex),
}

impl BoundaryIndex {
    pub fn separating(genus: u32, labels: impl IntoIterator<Item = u32>) -> Self {
        BoundaryIndex::Separating(SeparatingIndex::new(genus, labels))
    }

    pub fn render_key(&self, sig: &ModuliSignature) -> String {
        match self {
            BoundaryIndex::Irreducible => "0".to_string(),
            BoundaryIndex::Separating(s) => s.render_key(sig),
        }
    }

    /// Parses a JSON key; only canonical spellings are accepted.
    pub fn parse_key(key: &str, sig: &ModuliSignature) -> Result<BoundaryIndex> {
        let bad = |reason: &str| Error::BadKey { key: key.to_string(), reason: reason.to_string() };
        if key == "0" {
            return Ok(BoundaryIndex::Irreducible);
        }
        let idx = if sig.n == 0 {
            let genus: u32 = key
                .parse()
                .map_err(|_| bad("expected a genus index for n = 0"))?;
            SeparatingIndex::unpointed(genus)
        } else {
            let (genus, rest) = key.split_once(':').ok_or_else(|| bad("expected \"i:{labels}\""))?;
            let genus: u32 = genus.parse().map_err(|_| bad("genus part is not an integer"))?;
            let inner = rest
                .strip_prefix('{')
                .and_then(|r| r.strip_suffix('}'))
                .ok_or_else(|| bad("labels must be enclosed in braces"))?;
            let labels: Vec<u32> = if inner.is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|l| l.parse::<u32>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| bad("labels must be integers"))?
            };
            SeparatingIndex { genus, labels }
        };
        let canon = idx.canonical(sig).map_err(|e| bad(&e.to_string()))?;
        if canon != idx {
            return Err(bad(&format!(
                "not canonical; canonical form is {:?}",
                canon.render_key(sig)
            )));
        }
        Ok(BoundaryIndex::Separating(canon))
    }
}

pub fn canonicalize(idx: &BoundaryIndex, sig: &ModuliSignature) -> Result<BoundaryIndex> {
    match idx {
        BoundaryIndex::Irreducible => Ok(BoundaryIndex::Irreducible),
        BoundaryIndex::Separating(s) => Ok(BoundaryIndex::Separating(s.canonical(sig)?)),
    }
}

/// All separating boundary divisors of `sig`, canonical and sorted.
pub fn separating_divisors(sig: &ModuliSignature) -> Result<Vec<SeparatingIndex>> {
    if sig.n > MAX_ENUMERATED_POINTS {
        return Err(Error::Precondition(format!(
            "enumerating boundary divisors needs n <= {MAX_ENUMERATED_POINTS}, got {}",
            sig.n
        )));
    }
    let mut out = BTreeSet::new();
    for genus in 0..=sig.g {
        for mask in 0u64..(1u64 << sig.n) {
            let labels = (1..=sig.n).filter(|l| mask & (1 << (l - 1)) != 0);
            if let Ok(c) = SeparatingIndex::new(genus, labels).canonical(sig) {
                out.insert(c);
            }
        }
    }
    Ok(out.into_iter().collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClass {
    sig: ModuliSignature,
    pub lambda: Rational,
    pub psi: Vec<Rational>,
    pub delta0: Rational,
    deltas: BTreeMap<SeparatingIndex, Rational>,
}

impl DivisorClass {
    pub fn zero(sig: ModuliSignature) -> Self {
        DivisorClass {
            sig,
            lambda: Rational::zero(),
            psi: vec![Rational::zero(); sig.n as usize],
            delta0: Rational::zero(),
            deltas: BTreeMap::new(),
        }
    }

    pub fn lambda_class(sig: ModuliSignature) -> Self {
        let mut d = Self::zero(sig);
        d.lambda = Rational::one();
        d
    }

    /// `a λ - Σ_{i=0}^{⌊g/2⌋} b_i δ_i` on `M̄_g`; missing `b_i` are zero.
    pub fn from_mg(g: u32, a: Rational, b: &[Rational]) -> Result<Self> {
        let sig = ModuliSignature::curves(g)?;
        if b.len() > sig.half_genus() as usize + 1 {
            return Err(Error::Precondition(format!(
                "{} boundary coefficients given but M̄_{g} has {}",
                b.len(),
                sig.half_genus() + 1
            )));
        }
        let mut d = Self::zero(sig);
        d.lambda = a;
        for (i, bi) in b.iter().enumerate() {
            if i == 0 {
                d.delta0 = -bi.clone();
            } else {
                d.set(&BoundaryIndex::separating(i as u32, []), -bi.clone())?;
            }
        }
        Ok(d)
    }

    pub fn signature(&self) -> ModuliSignature {
        self.sig
    }

    pub fn coefficient(&self, idx: &BoundaryIndex) -> Result<Rational> {
        match canonicalize(idx, &self.sig)? {
            BoundaryIndex::Irreducible => Ok(self.delta0.clone()),
            BoundaryIndex::Separating(s) => Ok(self.deltas.get(&s).cloned().unwrap_or_else(Rational::zero)),
        }
    }

    pub fn set(&mut self, idx: &BoundaryIndex, value: Rational) -> Result<()> {
        match canonicalize(idx, &self.sig)? {
            BoundaryIndex::Irreducible => self.delta0 = value,
            BoundaryIndex::Separating(s) => {
                if value.is_zero() {
                    self.deltas.remove(&s);
                } else {
                    self.deltas.insert(s, value);
                }
            }
        }
        Ok(())
    }

    pub fn add_to(&mut self, idx: &BoundaryIndex, value: &Rational) -> Result<()> {
        let cur = self.coefficient(idx)?;
        self.set(idx, cur + value)
    }

    /// Nonzero separating coefficients in canonical order.
    pub fn separating(&self) -> impl Iterator<Item = (&SeparatingIndex, &Rational)> {
        self.deltas.iter()
    }

    /// Coefficient of `δ_i` on `M̄_g` (`i = 0` is `δ_0`).
    pub fn mg_delta(&self, i: u32) -> Rational {
        if i == 0 {
            self.delta0.clone()
        } else {
            self.deltas.get(&SeparatingIndex::unpointed(i)).cloned().unwrap_or_else(Rational::zero)
        }
    }

    /// `(a, [b_0, .., b_{⌊g/2⌋}])` for a class `a λ - Σ b_i δ_i` on `M̄_g`.
    pub fn mg_coefficients(&self) -> Result<(Rational, Vec<Rational>)> {
        if self.sig.n != 0 {
            return Err(Error::Precondition(format!(
                "expected a class on M̄_g, got n = {}",
                self.sig.n
            )));
        }
        let b = (0..=self.sig.half_genus()).map(|i| -self.mg_delta(i)).collect();
        Ok((self.lambda.clone(), b))
    }

    pub fn is_zero(&self) -> bool {
        self.lambda.is_zero()
            && self.psi.iter().all(Zero::is_zero)
            && self.delta0.is_zero()
            && self.deltas.is_empty()
    }

    pub fn scaled(&self, c: &Rational) -> DivisorClass {
        if c.is_zero() {
            return DivisorClass::zero(self.sig);
        }
        DivisorClass {
            sig: self.sig,
            lambda: &self.lambda * c,
            psi: self.psi.iter().map(|p| p * c).collect(),
            delta0: &self.delta0 * c,
            deltas: self.deltas.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    fn add_scaled(&mut self, c: &Rational, other: &DivisorClass) -> Result<()> {
        self.sig.check_same(&other.sig)?;
        self.lambda += c * &other.lambda;
        for (p, q) in self.psi.iter_mut().zip(&other.psi) {
            *p += c * q;
        }
        self.delta0 += c * &other.delta0;
        for (k, v) in &other.deltas {
            let e = self.deltas.entry(k.clone()).or_insert_with(Rational::zero);
            *e += c * v;
            if e.is_zero() {
                self.deltas.remove(k);
            }
        }
        Ok(())
    }

    /// Keys of every basis element that may carry a nonzero coefficient:
    /// `λ`, `ψ_i`, `δ_0` and the stored separating keys.
    pub fn coordinates(&self) -> Vec<(Coordinate, Rational)> {
        let mut out = vec![(Coordinate::Lambda, self.lambda.clone())];
        for (i, p) in self.psi.iter().enumerate() {
            out.push((Coordinate::Psi(i as u32 + 1), p.clone()));
        }
        out.push((Coordinate::Delta(BoundaryIndex::Irreducible), self.delta0.clone()));
        for (k, v) in &self.deltas {
            out.push((Coordinate::Delta(BoundaryIndex::Separating(k.clone())), v.clone()));
        }
        out
    }

    pub fn coordinate(&self, c: &Coordinate) -> Rational {
        match c {
            Coordinate::Lambda => self.lambda.clone(),
            Coordinate::Psi(i) => self.psi.get(*i as usize - 1).cloned().unwrap_or_else(Rational::zero),
            Coordinate::Delta(b) => self.coefficient(b).unwrap_or_else(|_| Rational::zero()),
        }
    }

    pub fn to_json_value(&self) -> Value {
        ClassDocument::Full(AnnotatedClass::plain(self.clone())).to_json_value()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("class documents serialize")
    }

    /// Parses a plain class document; annotations (bounds, completeness) are
    /// rejected here and accepted by [`ClassDocument::from_json`].
    pub fn from_json(text: &str) -> Result<DivisorClass> {
        match ClassDocument::from_json(text)? {
            ClassDocument::Full(a) => Ok(a.class),
            ClassDocument::Symmetric(s) => Ok(s.class.expand()?),
        }
    }
}

/// One basis element of `Pic(M̄_{g,n})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coordinate {
    Lambda,
    Psi(u32),
    Delta(BoundaryIndex),
}

/// Exact linear combination `Σ c_k D_k`. An empty list is an error since
/// the signature would be unknown.
pub fn lincomb(terms: &[(Rational, &DivisorClass)]) -> Result<DivisorClass> {
    let (_, first) = terms
        .first()
        .ok_or_else(|| Error::Precondition("lincomb needs at least one term".into()))?;
    let mut acc = DivisorClass::zero(first.sig);
    for (c, d) in terms {
        acc.add_scaled(c, d)?;
    }
    Ok(acc)
}

fn term(out: &mut String, coef: &Rational, symbol: &str) {
    if coef.is_zero() {
        return;
    }
    let neg = coef.is_negative();
    let abs = coef.abs();
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if !abs.is_one() {
        if rational::is_integer(&abs) {
            out.push_str(&abs.to_string());
        } else {
            out.push_str(&format!("({abs})"));
        }
    }
    out.push_str(symbol);
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        term(&mut s, &self.lambda, "λ");
        for (i, p) in self.psi.iter().enumerate() {
            term(&mut s, p, &format!("ψ{}", i + 1));
        }
        term(&mut s, &self.delta0, "δ0");
        for (k, v) in &self.deltas {
            let sym = if self.sig.n == 0 {
                format!("δ{}", k.genus)
            } else {
                format!("δ[{}]", k.render_key(&self.sig))
            };
            term(&mut s, v, &sym);
        }
        if s.is_empty() {
            s.push('0');
        }
        f.write_str(&s)
    }
}

/// Key of `Σ_{|S|=s} δ_{j:S}` in a symmetric class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymmetricKey {
    pub genus: u32,
    pub size: u32,
}

impl SymmetricKey {
    pub fn new(genus: u32, size: u32) -> Self {
        SymmetricKey { genus, size }
    }

    /// Canonical key: the smaller of `(j, s)` and `(g-j, n-s)`.
    pub fn canonical(&self, sig: &ModuliSignature) -> Result<SymmetricKey> {
        if self.genus > sig.g || self.size > sig.n {
            return Err(Error::InvalidBoundary(format!(
                "symmetric key ({}, {}) out of range for (g={}, n={})",
                self.genus, self.size, sig.g, sig.n
            )));
        }
        let other = SymmetricKey { genus: sig.g - self.genus, size: sig.n - self.size };
        for side in [self, &other] {
            if side.genus == 0 && side.size < 2 {
                return Err(Error::InvalidBoundary(format!(
                    "symmetric key ({}, {}) has an unstable genus-0 side",
                    self.genus, self.size
                )));
            }
        }
        Ok(std::cmp::min(*self, other))
    }

    pub fn of(idx: &SeparatingIndex, sig: &ModuliSignature) -> Result<SymmetricKey> {
        SymmetricKey::new(idx.genus, idx.labels.len() as u32).canonical(sig)
    }

    fn render_key(&self, sig: &ModuliSignature) -> String {
        if sig.n == 0 {
            self.genus.to_string()
        } else {
            format!("{}:{}", self.genus, self.size)
        }
    }

    fn parse_key(key: &str, sig: &ModuliSignature) -> Result<SymmetricKey> {
        let bad = |reason: &str| Error::BadKey { key: key.to_string(), reason: reason.to_string() };
        let k = if sig.n == 0 {
            SymmetricKey::new(key.parse().map_err(|_| bad("expected a genus index for n = 0"))?, 0)
        } else {
            let (j, s) = key.split_once(':').ok_or_else(|| bad("expected \"j:s\""))?;
            SymmetricKey::new(
                j.parse().map_err(|_| bad("genus part is not an integer"))?,
                s.parse().map_err(|_| bad("size part is not an integer"))?,
            )
        };
        let canon = k.canonical(sig).map_err(|e| bad(&e.to_string()))?;
        if canon != k {
            return Err(bad(&format!(
                "not canonical; canonical form is {:?}",
                canon.render_key(sig)
            )));
        }
        Ok(canon)
    }
}

/// All canonical symmetric keys of `sig`, sorted.
pub fn symmetric_keys(sig: &ModuliSignature) -> Vec<SymmetricKey> {
    let mut out = BTreeSet::new();
    for j in 0..=sig.g {
        for s in 0..=sig.n {
            if let Ok(k) = SymmetricKey::new(j, s).canonical(sig) {
                out.insert(k);
            }
        }
    }
    out.into_iter().collect()
}

/// An `S_n`-invariant class. `deltas[(j, s)]` is the common coefficient of
/// every `δ_{j:S}` with `|S| = s` (one coefficient per divisor, so the
/// identification `δ_{j:S} = δ_{g-j:S^c}` never double counts).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricDivisorClass {
    sig: ModuliSignature,
    pub lambda: Rational,
    pub psi: Rational,
    pub delta0: Rational,
    deltas: BTreeMap<SymmetricKey, Rational>,
}

impl SymmetricDivisorClass {
    pub fn zero(sig: ModuliSignature) -> Self {
        SymmetricDivisorClass {
            sig,
            lambda: Rational::zero(),
            psi: Rational::zero(),
            delta0: Rational::zero(),
            deltas: BTreeMap::new(),
        }
    }

    pub fn signature(&self) -> ModuliSignature {
        self.sig
    }

    pub fn get(&self, key: &SymmetricKey) -> Result<Rational> {
        let k = key.canonical(&self.sig)?;
        Ok(self.deltas.get(&k).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn set(&mut self, key: &SymmetricKey, value: Rational) -> Result<()> {
        let k = key.canonical(&self.sig)?;
        if value.is_zero() {
            self.deltas.remove(&k);
        } else {
            self.deltas.insert(k, value);
        }
        Ok(())
    }

    pub fn separating(&self) -> impl Iterator<Item = (&SymmetricKey, &Rational)> {
        self.deltas.iter()
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.sig);
        out.lambda = &self.lambda * c;
        out.psi = &self.psi * c;
        out.delta0 = &self.delta0 * c;
        for (k, v) in &self.deltas {
            let w = v * c;
            if !w.is_zero() {
                out.deltas.insert(*k, w);
            }
        }
        out
    }

    pub fn expand(&self) -> Result<DivisorClass> {
        let mut d = DivisorClass::zero(self.sig);
        d.lambda = self.lambda.clone();
        d.psi = vec![self.psi.clone(); self.sig.n as usize];
        d.delta0 = self.delta0.clone();
        if self.deltas.is_empty() {
            return Ok(d);
        }
        for idx in separating_divisors(&self.sig)? {
            let key = SymmetricKey::of(&idx, &self.sig)?;
            if let Some(v) = self.deltas.get(&key) {
                d.deltas.insert(idx, v.clone());
            }
        }
        Ok(d)
    }

    /// Compresses an `S_n`-invariant class; errors if the class is not
    /// invariant.
    pub fn symmetrize(d: &DivisorClass) -> Result<SymmetricDivisorClass> {
        let sig = d.sig;
        let mut out = SymmetricDivisorClass::zero(sig);
        out.lambda = d.lambda.clone();
        out.delta0 = d.delta0.clone();
        if let Some(first) = d.psi.first() {
            if d.psi.iter().any(|p| p != first) {
                return Err(Error::Precondition("ψ coefficients are not all equal".into()));
            }
            out.psi = first.clone();
        }
        let mut seen: BTreeMap<SymmetricKey, Rational> = BTreeMap::new();
        for idx in separating_divisors(&sig)? {
            let key = SymmetricKey::of(&idx, &sig)?;
            let v = d.deltas.get(&idx).cloned().unwrap_or_else(Rational::zero);
            match seen.get(&key) {
                Some(prev) if *prev != v => {
                    return Err(Error::Precondition(format!(
                        "class is not S_n-invariant: coefficients differ within orbit {}",
                        key.render_key(&sig)
                    )))
                }
                Some(_) => {}
                None => {
                    seen.insert(key, v);
                }
            }
        }
        out.deltas = seen.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        Ok(out)
    }
}

/// A full class plus the metadata carried by fixtures: `lower_bounds` lists
/// boundary keys whose stored coefficient is only an upper bound for the true
/// coefficient (the true `b = -coefficient` is at least the stored one), and
/// `complete = false` marks classes with unknown coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedClass {
    pub class: DivisorClass,
    pub lower_bounds: BTreeSet<BoundaryIndex>,
    pub complete: bool,
}

impl AnnotatedClass {
    pub fn plain(class: DivisorClass) -> Self {
        AnnotatedClass { class, lower_bounds: BTreeSet::new(), complete: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedSymmetricClass {
    pub class: SymmetricDivisorClass,
    pub lower_bounds: BTreeSet<SymmetricKey>,
    pub complete: bool,
}

impl AnnotatedSymmetricClass {
    pub fn plain(class: SymmetricDivisorClass) -> Self {
        AnnotatedSymmetricClass { class, lower_bounds: BTreeSet::new(), complete: true }
    }
}

/// Any class document accepted on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassDocument {
    Full(AnnotatedClass),
    Symmetric(AnnotatedSymmetricClass),
}

fn get_rational(v: &Value, what: &str) -> Result<Rational> {
    let s = v
        .as_str()
        .ok_or_else(|| Error::Json(format!("{what} must be a string \"p/q\"")))?;
    rational::parse(s).ok_or_else(|| Error::Json(format!("{what}: {s:?} is not a rational")))
}

fn get_u32(obj: &Map<String, Value>, field: &str) -> Result<u32> {
    obj.get(field)
        .and_then(Value::as_u64)
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| Error::Json(format!("missing or invalid integer field {field:?}")))
}

const KNOWN_FIELDS: &[&str] = &["g", "n", "symmetric", "lambda", "psi", "delta", "lower_bounds", "complete"];

impl ClassDocument {
    pub fn signature(&self) -> ModuliSignature {
        match self {
            ClassDocument::Full(a) => a.class.sig,
            ClassDocument::Symmetric(s) => s.class.sig,
        }
    }

    pub fn to_json_value(&self) -> Value {
        let mut obj = Map::new();
        let sig = self.signature();
        obj.insert("g".into(), Value::from(sig.g));
        obj.insert("n".into(), Value::from(sig.n));
        let (complete, bounds) = match self {
            ClassDocument::Full(a) => {
                let c = &a.class;
                obj.insert("lambda".into(), Value::from(rational::render(&c.lambda)));
                obj.insert(
                    "psi".into(),
                    Value::Array(c.psi.iter().map(|p| Value::from(rational::render(p))).collect()),
                );
                let mut delta = Map::new();
                delta.insert("0".into(), Value::from(rational::render(&c.delta0)));
                for (k, v) in &c.deltas {
                    delta.insert(k.render_key(&sig), Value::from(rational::render(v)));
                }
                obj.insert("delta".into(), Value::Object(delta));
                let bounds: Vec<Value> =
                    a.lower_bounds.iter().map(|b| Value::from(b.render_key(&sig))).collect();
                (a.complete, bounds)
            }
            ClassDocument::Symmetric(a) => {
                let c = &a.class;
                obj.insert("symmetric".into(), Value::Bool(true));
                obj.insert("lambda".into(), Value::from(rational::render(&c.lambda)));
                obj.insert("psi".into(), Value::from(rational::render(&c.psi)));
                let mut delta = Map::new();
                delta.insert("0".into(), Value::from(rational::render(&c.delta0)));
                for (k, v) in &c.deltas {
                    delta.insert(k.render_key(&sig), Value::from(rational::render(v)));
                }
                obj.insert("delta".into(), Value::Object(delta));
                let bounds: Vec<Value> =
                    a.lower_bounds.iter().map(|b| Value::from(b.render_key(&sig))).collect();
                (a.complete, bounds)
            }
        };
        if !bounds.is_empty() {
            obj.insert("lower_bounds".into(), Value::Array(bounds));
        }
        if !complete {
            obj.insert("complete".into(), Value::Bool(false));
        }
        Value::Object(obj)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("class documents serialize")
    }

    pub fn from_json(text: &str) -> Result<ClassDocument> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        Self::from_json_value(&v)
    }

    pub fn from_json_value(v: &Value) -> Result<ClassDocument> {
        let obj = v.as_object().ok_or_else(|| Error::Json("top level must be an object".into()))?;
        if let Some(extra) = obj.keys().find(|k| !KNOWN_FIELDS.contains(&k.as_str())) {
            return Err(Error::Json(format!("unknown field {extra:?}")));
        }
        let sig = ModuliSignature::new(get_u32(obj, "g")?, get_u32(obj, "n")?)?;
        let symmetric = match obj.get("symmetric") {
            None => false,
            Some(b) => b.as_bool().ok_or_else(|| Error::Json("\"symmetric\" must be a boolean".into()))?,
        };
        let complete = match obj.get("complete") {
            None => true,
            Some(b) => b.as_bool().ok_or_else(|| Error::Json("\"complete\" must be a boolean".into()))?,
        };
        let lambda = get_rational(obj.get("lambda").unwrap_or(&Value::Null), "lambda")?;
        let delta = match obj.get("delta") {
            None => Map::new(),
            Some(Value::Object(m)) => m.clone(),
            Some(_) => return Err(Error::Json("\"delta\" must be an object".into())),
        };
        let bound_keys: Vec<String> = match obj.get("lower_bounds") {
            None => Vec::new(),
            Some(Value::Array(a)) => a
                .iter()
                .map(|x| x.as_str().map(str::to_string))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Json("\"lower_bounds\" must list key strings".into()))?,
            Some(_) => return Err(Error::Json("\"lower_bounds\" must be an array".into())),
        };

        if symmetric {
            let mut c = SymmetricDivisorClass::zero(sig);
            c.lambda = lambda;
            c.psi = match obj.get("psi") {
                None if sig.n == 0 => Rational::zero(),
                Some(p) => get_rational(p, "psi")?,
                None => return Err(Error::Json("missing \"psi\"".into())),
            };
            for (k, val) in &delta {
                let q = get_rational(val, &format!("delta[{k}]"))?;
                if k == "0" {
                    c.delta0 = q;
                } else {
                    let key = SymmetricKey::parse_key(k, &sig)?;
                    c.set(&key, q)?;
                }
            }
            let mut lower_bounds = BTreeSet::new();
            for k in &bound_keys {
                if k == "0" {
                    return Err(Error::BadKey {
                        key: k.clone(),
                        reason: "bounds are only supported on separating keys".into(),
                    });
                }
                lower_bounds.insert(SymmetricKey::parse_key(k, &sig)?);
            }
            Ok(ClassDocument::Symmetric(AnnotatedSymmetricClass { class: c, lower_bounds, complete }))
        } else {
            let mut c = DivisorClass::zero(sig);
            c.lambda = lambda;
            match obj.get("psi") {
                None if sig.n == 0 => {}
                Some(Value::Array(a)) => {
                    if a.len() != sig.n as usize {
                        return Err(Error::Json(format!(
                            "\"psi\" has {} entries, expected n = {}",
                            a.len(),
                            sig.n
                        )));
                    }
                    for (i, p) in a.iter().enumerate() {
                        c.psi[i] = get_rational(p, &format!("psi[{i}]"))?;
                    }
                }
                _ => return Err(Error::Json("\"psi\" must be an array of n rationals".into())),
            }
            for (k, val) in &delta {
                let q = get_rational(val, &format!("delta[{k}]"))?;
                let idx = BoundaryIndex::parse_key(k, &sig)?;
                c.set(&idx, q)?;
            }
            let mut lower_bounds = BTreeSet::new();
            for k in &bound_keys {
                lower_bounds.insert(BoundaryIndex::parse_key(k, &sig)?);
            }
            Ok(ClassDocument::Full(AnnotatedClass { class: c, lower_bounds, complete }))
        }
    }
}

/// Convenience: integer-coefficient class on `M̄_g`.
pub fn mg_class(g: u32, a: i64, b: &[i64]) -> Result<DivisorClass> {
    let b: Vec<Rational> = b.iter().map(|&x| int(x)).collect();
    DivisorClass::from_mg(g, int(a), &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn sig(g: u32, n: u32) -> ModuliSignature {
        ModuliSignature::new(g, n).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let c = canonicalize(&BoundaryIndex::separating(7, []), &sig(10, 0)).unwrap();
        assert_eq!(c, BoundaryIndex::separating(3, []));
        let c = canonicalize(&BoundaryIndex::separating(1, []), &sig(3, 0)).unwrap();
        assert_eq!(c, BoundaryIndex::separating(1, []));
        let c = canonicalize(&BoundaryIndex::separating(3, [1]), &sig(4, 2)).unwrap();
        assert_eq!(c, BoundaryIndex::separating(1, [2]));
    }

    #[test]
    fn canonicalize_equal_genera_keeps_label_one() {
        let s = sig(4, 3);
        let c = canonicalize(&BoundaryIndex::separating(2, [2, 3]), &s).unwrap();
        assert_eq!(c, BoundaryIndex::separating(2, [1]));
        let c = canonicalize(&BoundaryIndex::separating(2, [1, 3]), &s).unwrap();
        assert_eq!(c, BoundaryIndex::separating(2, [1, 3]));
    }

    #[test]
    fn canonicalize_errors() {
        assert!(canonicalize(&BoundaryIndex::separating(0, [1]), &sig(3, 2)).is_err());
        assert!(canonicalize(&BoundaryIndex::separating(4, []), &sig(3, 0)).is_err());
        assert!(canonicalize(&BoundaryIndex::separating(0, []), &sig(3, 0)).is_err());
        // i = g with a one-point complement is δ_{0:{x}} in disguise
        assert!(canonicalize(&BoundaryIndex::separating(3, [1]), &sig(3, 2)).is_err());
        assert!(canonicalize(&BoundaryIndex::separating(1, [3]), &sig(3, 2)).is_err());
    }

    #[test]
    fn unstable_signatures() {
        assert!(ModuliSignature::new(0, 2).is_err());
        assert!(ModuliSignature::new(1, 0).is_err());
        assert!(ModuliSignature::new(0, 3).is_ok());
    }

    #[test]
    fn separating_counts() {
        assert_eq!(separating_divisors(&sig(10, 0)).unwrap().len(), 5);
        assert_eq!(separating_divisors(&sig(3, 0)).unwrap().len(), 1);
        // M̄_{0,5}: the ten δ_{0:{i,j}}
        assert_eq!(separating_divisors(&sig(0, 5)).unwrap().len(), 10);
        // M̄_{1,2}: δ_{0:{1,2}} and δ_{1:∅}... plus nothing else
        assert_eq!(separating_divisors(&sig(1, 2)).unwrap().len(), 1);
    }

    #[test]
    fn lincomb_examples() {
        let k = mg_class(4, 13, &[2, 3, 2]).unwrap();
        let z = lincomb(&[(int(1), &k), (int(-1), &k)]).unwrap();
        assert!(z.is_zero());
        let two = lincomb(&[(int(2), &k)]).unwrap();
        assert_eq!(two.lambda, int(26));

        let bn = DivisorClass::from_mg(3, int(6), &[rat(2, 3), int(2)]).unwrap();
        let h = lincomb(&[(rat(3, 2), &bn)]).unwrap();
        assert_eq!(h, mg_class(3, 9, &[1, 3]).unwrap());
    }

    #[test]
    fn lincomb_signature_mismatch() {
        let a = mg_class(3, 1, &[]).unwrap();
        let b = mg_class(4, 1, &[]).unwrap();
        assert!(matches!(
            lincomb(&[(int(1), &a), (int(1), &b)]),
            Err(Error::SignatureMismatch { .. })
        ));
    }

    #[test]
    fn k10_serialization() {
        let k10 = mg_class(10, 7, &[1, 5, 9, 12, 14, 15]).unwrap();
        let v = k10.to_json_value();
        assert_eq!(v["lambda"], "7");
        assert_eq!(
            v["delta"],
            serde_json::json!({"0":"-1","1":"-5","2":"-9","3":"-12","4":"-14","5":"-15"})
        );
        assert_eq!(DivisorClass::from_json(&k10.to_json()).unwrap(), k10);
    }

    #[test]
    fn zero_document() {
        let z = DivisorClass::zero(sig(2, 2));
        let v = z.to_json_value();
        assert_eq!(v["lambda"], "0");
        assert_eq!(v["psi"], serde_json::json!(["0", "0"]));
        assert_eq!(v["delta"], serde_json::json!({"0": "0"}));
    }

    #[test]
    fn rejects_bad_documents() {
        let e = DivisorClass::from_json(r#"{"g":10,"n":0,"lambda":"7","delta":{"7":"-1"}}"#).unwrap_err();
        assert!(e.to_string().contains("\"7\""), "{e}");
        let e = DivisorClass::from_json(r#"{"g":4,"n":2,"lambda":"1","psi":["0","0"],"delta":{"3:{1}":"1"}}"#)
            .unwrap_err();
        assert!(e.to_string().contains("3:{1}"), "{e}");
        assert!(DivisorClass::from_json("{").is_err());
        assert!(DivisorClass::from_json(r#"{"g":3,"n":0,"lambda":"x"}"#).is_err());
        assert!(DivisorClass::from_json(r#"{"g":3,"n":1,"lambda":"1","psi":[]}"#).is_err());
        assert!(DivisorClass::from_json(r#"{"g":3,"n":0,"lambda":"1","extra":1}"#).is_err());
    }

    #[test]
    fn pointed_document_roundtrip() {
        let s = sig(2, 3);
        let mut d = DivisorClass::zero(s);
        d.lambda = int(13);
        d.psi = vec![int(1), rat(1, 2), int(0)];
        d.set(&BoundaryIndex::separating(0, [1, 3]), int(-2)).unwrap();
        d.set(&BoundaryIndex::separating(1, []), int(-3)).unwrap();
        let text = d.to_json();
        assert!(text.contains("\"0:{1,3}\""));
        assert!(text.contains("\"1:{1,2,3}\""), "{text}");
        assert_eq!(DivisorClass::from_json(&text).unwrap(), d);
    }

    #[test]
    fn symmetric_expand_and_back() {
        let s = sig(3, 3);
        let mut c = SymmetricDivisorClass::zero(s);
        c.lambda = int(13);
        c.psi = int(1);
        c.delta0 = int(-2);
        for k in symmetric_keys(&s) {
            c.set(&k, int(-(k.genus as i64) - 2 * k.size as i64 - 1)).unwrap();
        }
        let full = c.expand().unwrap();
        assert_eq!(SymmetricDivisorClass::symmetrize(&full).unwrap(), c);

        let mut broken = full.clone();
        broken.set(&BoundaryIndex::separating(0, [1, 2]), int(5)).unwrap();
        assert!(SymmetricDivisorClass::symmetrize(&broken).is_err());
    }

    #[test]
    fn symmetric_key_canonical() {
        let s = sig(4, 5);
        assert_eq!(SymmetricKey::new(3, 1).canonical(&s).unwrap(), SymmetricKey::new(1, 4));
        assert_eq!(SymmetricKey::new(2, 4).canonical(&s).unwrap(), SymmetricKey::new(2, 1));
        assert_eq!(SymmetricKey::new(4, 3).canonical(&s).unwrap(), SymmetricKey::new(0, 2));
        assert!(SymmetricKey::new(0, 1).canonical(&s).is_err());
    }

    fn arb_class() -> impl Strategy<Value = DivisorClass> {
        (2u32..7, 0u32..4).prop_flat_map(|(g, n)| {
            let s = sig(g, n);
            let keys = separating_divisors(&s).unwrap();
            let nk = keys.len();
            (
                Just(s),
                Just(keys),
                (-50i64..50, 1i64..20),
                proptest::collection::vec((-50i64..50, 1i64..20), n as usize),
                (-50i64..50, 1i64..20),
                proptest::collection::vec(proptest::option::of((-50i64..50, 1i64..20)), nk),
            )
                .prop_map(|(s, keys, l, psi, d0, ds)| {
                    let mut d = DivisorClass::zero(s);
                    d.lambda = rat(l.0, l.1);
                    d.psi = psi.iter().map(|p| rat(p.0, p.1)).collect();
                    d.delta0 = rat(d0.0, d0.1);
                    for (k, v) in keys.into_iter().zip(ds) {
                        if let Some((p, q)) = v {
                            d.set(&BoundaryIndex::Separating(k), rat(p, q)).unwrap();
                        }
                    }
                    d
                })
        })
    }

    proptest! {
        #[test]
        fn serialization_roundtrip(d in arb_class()) {
            prop_assert_eq!(DivisorClass::from_json(&d.to_json()).unwrap(), d);
        }

        #[test]
        fn canonicalize_idempotent(g in 0u32..8, n in 0u32..6, genus in 0u32..8, mask in 0u32..64) {
            prop_assume!(2 * g as i64 - 2 + n as i64 > 0);
            let s = sig(g, n);
            let labels = (1..=n).filter(|l| mask & (1 << (l - 1)) != 0);
            let idx = BoundaryIndex::separating(genus, labels);
            if let Ok(c) = canonicalize(&idx, &s) {
                prop_assert_eq!(canonicalize(&c, &s).unwrap(), c);
            }
        }

        #[test]
        fn lincomb_commutes(a in arb_class(), p in -9i64..9, q in -9i64..9) {
            let b = a.scaled(&rat(3, 7));
            let l = lincomb(&[(int(p), &a), (int(q), &b)]).unwrap();
            let r = lincomb(&[(int(q), &b), (int(p), &a)]).unwrap();
            prop_assert_eq!(&l, &r);
            prop_assert!(lincomb(&[(int(0), &a)]).unwrap().is_zero());
        }
    }
}
