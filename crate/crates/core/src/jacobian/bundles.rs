use super::{EvalContext, JacobianElement};
use crate::rational::{binomial, from_bigint, int};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

/// The two curves in `C × W^r_d(C)` used as test loci: `X` (a cusp at the
/// moving point) and `Y` (the moving point glued to a fixed one).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TestLocus {
    X,
    Y,
}

/// `c_r + c_{r-1}(2γ + (2d+2g-4)η) - 6 c_{r-2} ηθ`.
pub fn class_x(ctx: &EvalContext) -> JacobianElement {
    locus_class(ctx, 2, 2 * ctx.d + 2 * ctx.g - 4, 6)
}

/// `c_r + c_{r-1}(γ + (d-1)η) - 2 c_{r-2} ηθ`.
pub fn class_y(ctx: &EvalContext) -> JacobianElement {
    locus_class(ctx, 1, ctx.d - 1, 2)
}

fn locus_class(ctx: &EvalContext, kg: i64, ke: i64, kt: i64) -> JacobianElement {
    let r = ctx.r as u32;
    let c = JacobianElement::chern;
    let lin = &JacobianElement::gamma().scale(&int(kg)) + &JacobianElement::eta().scale(&int(ke));
    let eta_theta = &JacobianElement::eta() * &JacobianElement::theta();
    let a = c(r);
    let b = &c(r - 1) * &lin;
    let t = (&c(r - 2) * &eta_theta).scale(&int(kt));
    &(&a + &b) - &t
}

/// `c_1(G_{0,j})` restricted to a test locus. For `j >= 2` these are
/// `-j²θ - (2g-4)η - j(dη + γ)` on `X` and `-j²θ + η` on `Y`; for `j = 1`
/// the bundle has fibre `H^0(L)` and its first Chern class is `-c_1`.
pub fn c1_g0j_restricted(locus: TestLocus, j: u32, ctx: &EvalContext) -> JacobianElement {
    if j == 1 {
        return -&JacobianElement::chern(1);
    }
    let jj = j as i64;
    let theta = JacobianElement::theta().scale(&int(-jj * jj));
    match locus {
        TestLocus::X => {
            let eta = JacobianElement::eta().scale(&int(-(2 * ctx.g - 4)));
            let l = JacobianElement::poincare_c1(ctx.d).scale(&int(-jj));
            &(&theta + &eta) + &l
        }
        TestLocus::Y => &theta + &JacobianElement::eta(),
    }
}

/// A formal combination `Σ_b coef_b · c_1(G_{0,b})`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct C1Expansion {
    pub terms: BTreeMap<u32, BigInt>,
}

impl C1Expansion {
    fn add(&mut self, b: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(b).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&b);
        }
    }

    fn add_scaled(&mut self, other: &C1Expansion, c: &BigInt) {
        for (b, v) in &other.terms {
            self.add(*b, v * c);
        }
    }

    pub fn coefficient(&self, b: u32) -> BigInt {
        self.terms.get(&b).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Substitutes the restrictions of `c_1(G_{0,b})` to a test locus.
    pub fn restrict(&self, locus: TestLocus, ctx: &EvalContext) -> JacobianElement {
        let mut out = JacobianElement::zero();
        for (b, c) in &self.terms {
            out = &out + &c1_g0j_restricted(locus, *b, ctx).scale(&from_bigint(c.clone()));
        }
        out
    }
}

fn sign(l: i64) -> BigInt {
    if l % 2 == 0 {
        BigInt::from(1)
    } else {
        BigInt::from(-1)
    }
}

/// The alternating binomial sums for `c_1(G_{i,2})` and `c_1(H_{i,2})`.
pub fn c1_expansions(ctx: &EvalContext) -> (C1Expansion, C1Expansion) {
    let (r, i, d, g) = (ctx.r, ctx.i, ctx.d, ctx.g);
    let mut gexp = C1Expansion::default();
    let mut hexp = C1Expansion::default();
    for l in 0..=i {
        let sg = sign(l);
        gexp.add(l as u32 + 2, &sg * binomial(r + 1, i - l));
        gexp.add(1, &sg * BigInt::from((l + 2) * d + 1 - g) * binomial(r, i - l - 1));
        let h = binomial(r, i - l - 1) * binomial(r + l + 2, l + 2) + binomial(r + 1, i - l) * binomial(r + l + 2, r + 1);
        hexp.add(1, &sg * h);
    }
    (gexp, hexp)
}

/// Same expansions obtained by unwinding the defining exact sequences
/// `0 → G_{a,b} → ∧^a G_{0,1} ⊗ G_{0,b} → G_{a-1,b+1} → 0` and its `H`
/// analogue with `H_{0,b} = Sym^b G_{0,1}`, using
/// `c_1(∧^a V ⊗ W) = rk W · C(n-1, a-1) c_1 V + C(n, a) c_1 W` and
/// `c_1(Sym^b V) = C(n+b-1, n) c_1 V` for `rk V = n`.
pub fn recursion_expansions(ctx: &EvalContext) -> (C1Expansion, C1Expansion) {
    let n = ctx.r + 1;
    let rank_g0 = |b: i64| if b == 1 { n } else { b * ctx.d + 1 - ctx.g };
    let rank_sym = |b: i64| binomial(n + b - 1, b);
    let c1_sym = |b: i64| binomial(n + b - 1, n);

    fn g_rec(a: i64, b: i64, n: i64, rank_g0: &dyn Fn(i64) -> i64) -> C1Expansion {
        let mut e = C1Expansion::default();
        if a == 0 {
            e.add(b as u32, BigInt::from(1));
            return e;
        }
        e.add(1, BigInt::from(rank_g0(b)) * binomial(n - 1, a - 1));
        e.add(b as u32, binomial(n, a));
        let rest = g_rec(a - 1, b + 1, n, rank_g0);
        e.add_scaled(&rest, &BigInt::from(-1));
        e
    }
    fn h_rec(a: i64, b: i64, n: i64, rank_sym: &dyn Fn(i64) -> BigInt, c1_sym: &dyn Fn(i64) -> BigInt) -> C1Expansion {
        let mut e = C1Expansion::default();
        if a == 0 {
            e.add(1, c1_sym(b));
            return e;
        }
        e.add(1, rank_sym(b) * binomial(n - 1, a - 1) + binomial(n, a) * c1_sym(b));
        let rest = h_rec(a - 1, b + 1, n, rank_sym, c1_sym);
        e.add_scaled(&rest, &BigInt::from(-1));
        e
    }
    (g_rec(ctx.i, 2, n, &rank_g0), h_rec(ctx.i, 2, n, &rank_sym, &c1_sym))
}
