//! The two-parameter family of syzygy divisors: parameters, bundle ranks and
//! the closed-form virtual slope.

use crate::error::{Error, Result};
use crate::rational::{binomial, from_bigint, int, rat, Rational};
use crate::slopes::{rho, slope_bound};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SyzygyFamily {
    pub s: i64,
    pub i: i64,
    pub r: i64,
    pub g: i64,
    pub d: i64,
}

/// `r = 2s + si + i`, `g = rs + s`, `d = rs + r`.
pub fn family(s: i64, i: i64) -> Result<SyzygyFamily> {
    if s < 1 || i < 0 {
        return Err(Error::Precondition(format!("family needs s >= 1 and i >= 0, got (s={s}, i={i})")));
    }
    let r = 2 * s + s * i + i;
    let fam = SyzygyFamily { s, i, r, g: r * s + s, d: r * s + r };
    if fam.g != s * (2 * s + s * i + i + 1) || rho(fam.g, fam.r, fam.d) != 0 || (i * fam.d) % r != 0 {
        return Err(Error::Inconsistent(format!("family invariants fail at (s={s}, i={i})")));
    }
    Ok(fam)
}

impl SyzygyFamily {
    /// `i·d/r`, which equals `i(s+1)`.
    pub fn twist(&self) -> i64 {
        self.i * self.d / self.r
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ranks {
    pub a: BigInt,
    pub b: BigInt,
}

/// `rank A = (i+1)·C(r+2, i+2)` and `rank B = C(r, i)·(2d + 1 - g - i·d/r)`.
pub fn ranks(fam: &SyzygyFamily) -> Ranks {
    let a = BigInt::from(fam.i + 1) * binomial(fam.r + 2, fam.i + 2);
    let b = binomial(fam.r, fam.i) * BigInt::from(2 * fam.d + 1 - fam.g - fam.twist());
    Ranks { a, b }
}

/// Coefficients in `i` (constant term first) of each power of `s`, highest
/// power first.
const F_TABLE: [[i64; 5]; 8] = [
    [16, 32, 24, 8, 1],
    [-16, -16, 0, 4, 1],
    [12, 0, -13, -7, -1],
    [-24, -14, -1, -2, -1],
    [-4, -6, 2, 2, 0],
    [41, 50, 17, 1, 0],
    [9, 18, 7, 0, 0],
    [2, 2, 0, 0, 0],
];

const G_TABLE: [[i64; 4]; 7] = [
    [8, 12, 6, 1],
    [-8, -4, 2, 1],
    [-2, -11, -7, -1],
    [0, 5, 0, -1],
    [1, 5, 4, 0],
    [11, 7, 1, 0],
    [2, 4, 0, 0],
];

fn eval_table<const K: usize>(table: &[[i64; K]], s: i64, i: i64) -> BigInt {
    let s = BigInt::from(s);
    let i = BigInt::from(i);
    let mut acc = BigInt::zero();
    for row in table {
        let mut c = BigInt::zero();
        for coef in row.iter().rev() {
            c = c * &i + BigInt::from(*coef);
        }
        acc = acc * &s + c;
    }
    acc
}

pub fn poly_f(s: i64, i: i64) -> BigInt {
    eval_table(&F_TABLE, s, i)
}

pub fn poly_g(s: i64, i: i64) -> BigInt {
    eval_table(&G_TABLE, s, i)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualSlope {
    pub f: BigInt,
    pub g: BigInt,
    pub slope: Rational,
}

/// `6 f(s,i) / ((i+2) s g(s,i))`.
pub fn virtual_slope(s: i64, i: i64) -> Result<VirtualSlope> {
    family(s, i)?;
    let f = poly_f(s, i);
    let g = poly_g(s, i);
    if g.is_zero() {
        return Err(Error::Singular(format!("g(s,i) vanishes at (s={s}, i={i})")));
    }
    let slope = from_bigint(BigInt::from(6) * &f) / from_bigint(BigInt::from((i + 2) * s) * &g);
    Ok(VirtualSlope { f, g, slope })
}

/// Closed form for `i = 0`.
pub fn khosla_closed_form(s: i64) -> Rational {
    let p = |cs: &[i64]| cs.iter().fold(BigInt::zero(), |acc, c| acc * s + c);
    let num = p(&[16, -16, 12, -24, -4, 41, 9, 2]) * 3;
    let den = p(&[8, -8, -2, 0, 1, 11, 2]) * s;
    Rational::new(num, den)
}

/// Closed form for `s = 2`.
pub fn s2_closed_form(i: i64) -> Rational {
    rat(3 * (4 * i + 7) * (6 * i * i + 19 * i + 12), (12 * i * i + 31 * i + 18) * (i + 2))
}

/// Closed form for `s = 1`.
pub fn s1_closed_form(i: i64) -> Rational {
    rat(6 * (i + 3), i + 2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializationReport {
    pub khosla: Vec<(i64, Rational)>,
    pub s2: Vec<(i64, Rational)>,
    pub s1: Vec<(i64, Rational)>,
}

/// Compares the general formula with its three specializations for
/// `s <= smax` and `i <= imax`. The first mismatch is returned as an error.
pub fn specialization_checks(smax: i64, imax: i64) -> Result<SpecializationReport> {
    let mut rep = SpecializationReport { khosla: Vec::new(), s2: Vec::new(), s1: Vec::new() };
    let mismatch = |s: i64, i: i64, a: &Rational, b: &Rational| {
        Error::Inconsistent(format!("specialization mismatch at (s={s}, i={i}): {a} vs {b}"))
    };
    for s in 1..=smax {
        let v = virtual_slope(s, 0)?.slope;
        let k = khosla_closed_form(s);
        if v != k {
            return Err(mismatch(s, 0, &v, &k));
        }
        rep.khosla.push((s, v));
    }
    for i in 0..=imax {
        if smax >= 2 {
            let v = virtual_slope(2, i)?.slope;
            let c = s2_closed_form(i);
            if v != c {
                return Err(mismatch(2, i, &v, &c));
            }
            rep.s2.push((i, v));
        }
        if smax >= 1 {
            let fam = family(1, i)?;
            let v = virtual_slope(1, i)?.slope;
            let c = slope_bound(fam.g as u32);
            if v != c || v != s1_closed_form(i) {
                return Err(mismatch(1, i, &v, &c));
            }
            rep.s1.push((i, v));
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub slope: Rational,
    pub upper: Rational,
    pub pass: bool,
}

/// `6 < slope < 6 + 12/(g+1)`, for `s >= 2`.
pub fn bound_check(s: i64, i: i64) -> Result<BoundCheck> {
    if s < 2 {
        return Err(Error::Precondition(format!("bound check needs s >= 2, got s={s}")));
    }
    let fam = family(s, i)?;
    let slope = virtual_slope(s, i)?.slope;
    let upper = slope_bound(fam.g as u32);
    let pass = slope > int(6) && slope < upper;
    Ok(BoundCheck { slope, upper, pass })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedSlope {
    pub label: &'static str,
    pub g: u32,
    pub value: Rational,
}

/// Published slope values kept verbatim for comparison with computed ones.
pub fn fixed_slopes() -> Vec<FixedSlope> {
    vec![
        FixedSlope { label: "M22 quadric divisor", g: 22, value: rat(17121, 2636) },
        FixedSlope { label: "M23 virtual", g: 23, value: rat(470749, 72725) },
        FixedSlope { label: "K10", g: 10, value: int(7) },
    ]
}

/// Published value of the `(2,2)` virtual slope.
pub fn published_2_2() -> Rational {
    rat(1665, 256)
}

pub fn is_below_canonical(q: &Rational) -> bool {
    (q - rat(13, 2)).is_negative()
}
