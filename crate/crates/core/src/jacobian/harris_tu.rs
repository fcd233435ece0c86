use super::EvalContext;
use crate::error::{Error, Result};
use crate::rational::{factorial, from_bigint, int, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};

/// How a product of Chern classes is turned into Chern-root monomials before
/// the determinantal evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// Every exponent tuple of the expanded product, in root order.
    FullExpansion,
    /// One ascending representative per orbit, weighted by the
    /// monomial-symmetric coefficient.
    SortedAscendingOnce,
    /// As above with descending representatives.
    SortedDescendingOnce,
}

impl Convention {
    pub const ALL: [Convention; 3] =
        [Convention::FullExpansion, Convention::SortedAscendingOnce, Convention::SortedDescendingOnce];
}

/// The convention that reproduces the five reference identities; see
/// [`calibrate`].
pub const CALIBRATED: Convention = Convention::FullExpansion;

/// `x_1^{i_1} ⋯ x_{r+1}^{i_{r+1}} · θ^m` in the Chern roots of `E^∨`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChernMonomial {
    pub exponents: Vec<u32>,
    pub theta: u32,
}

fn inv_factorial(n: i64) -> Rational {
    if n < 0 {
        Rational::zero()
    } else {
        Rational::new(BigInt::one(), factorial(n as u64))
    }
}

/// Exact determinant by fraction-field Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det *= &pivot;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &pivot;
            for k in c..n {
                let sub = &f * &m[c][k];
                m[r][k] -= sub;
            }
        }
    }
    det
}

/// Degree on `W^r_d(C)` of a Chern-root monomial: `h! · det(1/(h+r-d+i_j-j+l)!)`
/// when the total degree is `r`, and zero otherwise.
pub fn harris_tu(mono: &ChernMonomial, ctx: &EvalContext) -> Result<Rational> {
    let n = (ctx.r + 1) as usize;
    if mono.exponents.len() != n {
        return Err(Error::Precondition(format!(
            "expected {n} root exponents, got {}",
            mono.exponents.len()
        )));
    }
    let total: i64 = mono.exponents.iter().map(|&e| e as i64).sum::<i64>() + mono.theta as i64;
    if total != ctx.r {
        return Ok(Rational::zero());
    }
    Ok(harris_tu_unchecked(&mono.exponents, ctx))
}

fn harris_tu_unchecked(exponents: &[u32], ctx: &EvalContext) -> Rational {
    let base = ctx.shift();
    let m: Vec<Vec<Rational>> = exponents
        .iter()
        .enumerate()
        .map(|(j, &e)| (0..exponents.len()).map(|l| inv_factorial(base + e as i64 - j as i64 + l as i64)).collect())
        .collect();
    from_bigint(factorial(ctx.h as u64)) * determinant(m)
}

/// `det(1/(a_j + l - 1)!)_{1 <= j,l <= n}` evaluated directly.
pub fn vandermonde_direct(a: &[i64]) -> Rational {
    let m = a.iter().map(|&aj| (1..=a.len() as i64).map(|l| inv_factorial(aj + l - 1)).collect()).collect();
    determinant(m)
}

/// `Π_{j>l}(a_l - a_j) / Π_j (a_j + n - 1)!`, valid when every `a_j >= 1 - n`.
pub fn vandermonde_closed_form(a: &[i64]) -> Result<Rational> {
    let r = a.len() as i64 - 1;
    if let Some(bad) = a.iter().find(|&&x| x + r < 0) {
        return Err(Error::Precondition(format!("closed form needs a_j >= {}, got {bad}", -r)));
    }
    let mut num = BigInt::one();
    for j in 0..a.len() {
        for l in 0..j {
            num *= BigInt::from(a[l] - a[j]);
        }
    }
    let den = a.iter().fold(BigInt::one(), |acc, &x| acc * factorial((x + r) as u64));
    Ok(Rational::new(num, den))
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Expands `e_{k_1} ⋯ e_{k_m}` in `n` variables into monomials.
pub fn elementary_product_expansion(factors: &[u32], n: usize) -> BTreeMap<Vec<u32>, BigInt> {
    let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    acc.insert(vec![0; n], BigInt::one());
    for &k in factors {
        let subsets = k_subsets(n, k as usize);
        let mut next: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (mono, c) in &acc {
            for sub in &subsets {
                let mut m = mono.clone();
                for &j in sub {
                    m[j] += 1;
                }
                *next.entry(m).or_insert_with(BigInt::zero) += c;
            }
        }
        acc = next;
    }
    acc
}

/// Degree on `W^r_d(C)` of `c_{k_1} ⋯ c_{k_m} · θ^theta`, for at most three
/// Chern factors.
pub fn eval_chern_product(factors: &[u32], theta: u32, ctx: &EvalContext, conv: Convention) -> Result<Rational> {
    let factors: Vec<u32> = factors.iter().copied().filter(|&k| k != 0).collect();
    if factors.len() > 3 {
        return Err(Error::Precondition(format!("at most three Chern factors are supported, got {}", factors.len())));
    }
    let n = (ctx.r + 1) as usize;
    if factors.iter().any(|&k| k as usize > n) {
        return Ok(Rational::zero());
    }
    let total: i64 = factors.iter().map(|&k| k as i64).sum::<i64>() + theta as i64;
    if total != ctx.r {
        return Ok(Rational::zero());
    }
    let expansion = elementary_product_expansion(&factors, n);
    let mut cache: HashMap<Vec<u32>, Rational> = HashMap::new();
    // θ^m only raises the θ-degree of the determinant to h, so it does not
    // change the numerical factor once the total degree is r.
    let mut eval = |exps: Vec<u32>| -> Rational {
        cache.entry(exps).or_insert_with_key(|e| harris_tu_unchecked(e, ctx)).clone()
    };
    let mut sum = Rational::zero();
    match conv {
        Convention::FullExpansion => {
            for (mono, c) in expansion {
                sum += from_bigint(c) * eval(mono);
            }
        }
        Convention::SortedAscendingOnce | Convention::SortedDescendingOnce => {
            let mut orbits: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
            for (mono, c) in expansion {
                let mut key = mono.clone();
                key.sort_unstable();
                if conv == Convention::SortedDescendingOnce {
                    key.reverse();
                }
                orbits.entry(key).or_insert(c);
            }
            for (mono, c) in orbits {
                sum += from_bigint(c) * eval(mono);
            }
        }
    }
    Ok(sum)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub label: &'static str,
    /// Evaluated ratio to `c_r` for the first four identities, and the
    /// value of `c_r` for the last.
    pub value: Rational,
    pub expected: Rational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaCheck {
    pub convention: Convention,
    pub c_r: Rational,
    pub identities: Vec<IdentityCheck>,
}

impl LemmaCheck {
    pub fn all_hold(&self) -> bool {
        self.identities.iter().all(|c| c.holds)
    }
}

/// Evaluates the five reference identities relating `c_{r-1}θ`, `c_{r-2}θ²`,
/// `c_{r-2}c_1θ`, `c_{r-1}c_1` and `c_r` on `W^r_d(C)`.
pub fn lemma_check(ctx: &EvalContext, conv: Convention) -> Result<LemmaCheck> {
    let (r, s) = (ctx.r, ctx.s);
    if r < 2 {
        return Err(Error::Precondition(format!("identities need r >= 2, got r = {r}")));
    }
    let ru = r as u32;
    let c_r = eval_chern_product(&[ru], 0, ctx, conv)?;
    let q = |p: i64, d: i64| Rational::new(BigInt::from(p), BigInt::from(d));
    let e1 = q(r * (s + 1), 2);
    let e2 = q(r * (r - 1) * (s + 1) * (s + 2), 6);
    let e3 = q(r * (s + 1), 2) * (int(1) + q((r - 2) * (r + 2) * (s + 2), 3 * (s + r + 1)));
    let e4 = int(1) + q((r - 1) * (r + 2) * (s + 1), 2 * (s + r + 1));
    let mut num = factorial(r as u64 + 1);
    for k in 1..r {
        num *= factorial(k as u64);
    }
    let mut den = factorial(s as u64 - 1);
    for k in s + 1..=s + r {
        den *= factorial(k as u64);
    }
    let e5 = Rational::new(num, den) * from_bigint(factorial(ctx.h as u64));

    let ratio = |v: Rational| if c_r.is_zero() { None } else { Some(v / &c_r) };
    let lhs = [
        ("c_{r-1}·θ", eval_chern_product(&[ru - 1], 1, ctx, conv)?, e1),
        ("c_{r-2}·θ²", eval_chern_product(&[ru - 2], 2, ctx, conv)?, e2),
        ("c_{r-2}·c_1·θ", eval_chern_product(&[ru - 2, 1], 1, ctx, conv)?, e3),
        ("c_{r-1}·c_1", eval_chern_product(&[ru - 1, 1], 0, ctx, conv)?, e4),
    ];
    let mut identities = Vec::new();
    for (label, v, expected) in lhs {
        let (value, holds) = match ratio(v) {
            Some(x) => {
                let ok = x == expected;
                (x, ok)
            }
            None => (Rational::zero(), false),
        };
        identities.push(IdentityCheck { label, value, expected, holds });
    }
    identities.push(IdentityCheck { label: "c_r", value: c_r.clone(), holds: c_r == e5, expected: e5 });
    Ok(LemmaCheck { convention: conv, c_r, identities })
}

/// The first convention under which all five identities hold.
pub fn calibrate(ctx: &EvalContext) -> Result<Option<Convention>> {
    for conv in Convention::ALL {
        if lemma_check(ctx, conv)?.all_hold() {
            return Ok(Some(conv));
        }
    }
    Ok(None)
}
