use crate::rational::{int, Rational};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// The part of a class coming from `C`: `1`, the point class `η`, or the
/// mixed class `γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    One,
    Eta,
    Gamma,
}

/// `sector · θ^theta · Π c_k`, with `chern` sorted and free of `c_0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Basis {
    pub sector: Sector,
    pub theta: u32,
    pub chern: Vec<u32>,
}

impl Basis {
    pub fn new(sector: Sector, theta: u32, chern: impl IntoIterator<Item = u32>) -> Basis {
        let mut chern: Vec<u32> = chern.into_iter().filter(|&k| k != 0).collect();
        chern.sort_unstable();
        Basis { sector, theta, chern }
    }

    /// Product of two basis elements as `(coefficient, basis)`, or `None`
    /// when it vanishes.
    fn mul(&self, other: &Basis) -> Option<(Rational, Basis)> {
        let (coef, sector, extra_theta) = match (self.sector, other.sector) {
            (Sector::One, s) | (s, Sector::One) => (int(1), s, 0),
            (Sector::Eta, _) | (_, Sector::Eta) => return None,
            // γ² = -2ηθ
            (Sector::Gamma, Sector::Gamma) => (int(-2), Sector::Eta, 1),
        };
        let chern = self.chern.iter().chain(&other.chern).copied();
        Some((coef, Basis::new(sector, self.theta + other.theta + extra_theta, chern)))
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.sector {
            Sector::One => {}
            Sector::Eta => parts.push("η".to_string()),
            Sector::Gamma => parts.push("γ".to_string()),
        }
        match self.theta {
            0 => {}
            1 => parts.push("θ".into()),
            t => parts.push(format!("θ^{t}")),
        }
        parts.extend(self.chern.iter().map(|k| format!("c{k}")));
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("·"))
        }
    }
}

/// Element of the cohomology ring of `C × Pic^d(C)` in normal form with
/// respect to `η² = 0`, `γη = 0`, `γ² = -2ηθ` (hence `γ³ = 0`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct JacobianElement {
    terms: BTreeMap<Basis, Rational>,
}

impl JacobianElement {
    pub fn zero() -> Self {
        JacobianElement::default()
    }

    pub fn monomial(coef: Rational, basis: Basis) -> Self {
        let mut e = JacobianElement::zero();
        e.add_term(basis, coef);
        e
    }

    pub fn scalar(c: Rational) -> Self {
        Self::monomial(c, Basis::new(Sector::One, 0, []))
    }

    pub fn one() -> Self {
        Self::scalar(Rational::one())
    }

    pub fn eta() -> Self {
        Self::monomial(Rational::one(), Basis::new(Sector::Eta, 0, []))
    }

    pub fn gamma() -> Self {
        Self::monomial(Rational::one(), Basis::new(Sector::Gamma, 0, []))
    }

    pub fn theta() -> Self {
        Self::monomial(Rational::one(), Basis::new(Sector::One, 1, []))
    }

    /// `c_k(E^∨)`; `c_0 = 1`.
    pub fn chern(k: u32) -> Self {
        Self::monomial(Rational::one(), Basis::new(Sector::One, 0, [k]))
    }

    /// First Chern class `dη + γ` of the Poincaré bundle.
    pub fn poincare_c1(d: i64) -> Self {
        &Self::eta().scale(&int(d)) + &Self::gamma()
    }

    fn add_term(&mut self, basis: Basis, coef: Rational) {
        if coef.is_zero() {
            return;
        }
        let e = self.terms.entry(basis.clone()).or_insert_with(Rational::zero);
        *e += coef;
        if e.is_zero() {
            self.terms.remove(&basis);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = JacobianElement::zero();
        for (b, v) in &self.terms {
            out.add_term(b.clone(), v * c);
        }
        out
    }

    pub fn coefficient(&self, basis: &Basis) -> Rational {
        self.terms.get(basis).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Basis, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Only the terms of one sector.
    pub fn sector_part(&self, sector: Sector) -> Self {
        JacobianElement {
            terms: self.terms.iter().filter(|(b, _)| b.sector == sector).map(|(b, v)| (b.clone(), v.clone())).collect(),
        }
    }
}

impl Add for &JacobianElement {
    type Output = JacobianElement;
    fn add(self, rhs: &JacobianElement) -> JacobianElement {
        let mut out = self.clone();
        for (b, v) in &rhs.terms {
            out.add_term(b.clone(), v.clone());
        }
        out
    }
}

impl Sub for &JacobianElement {
    type Output = JacobianElement;
    fn sub(self, rhs: &JacobianElement) -> JacobianElement {
        let mut out = self.clone();
        for (b, v) in &rhs.terms {
            out.add_term(b.clone(), -v.clone());
        }
        out
    }
}

impl Neg for &JacobianElement {
    type Output = JacobianElement;
    fn neg(self) -> JacobianElement {
        self.scale(&int(-1))
    }
}

impl Mul for &JacobianElement {
    type Output = JacobianElement;
    fn mul(self, rhs: &JacobianElement) -> JacobianElement {
        let mut out = JacobianElement::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                if let Some((c, basis)) = a.mul(b) {
                    out.add_term(basis, c * x * y);
                }
            }
        }
        out
    }
}

impl fmt::Display for JacobianElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(b, v)| format!("({v})·{b}")).collect();
        f.write_str(&parts.join(" + "))
    }
}
