//! F-curve inequalities on `M̄_g`, F-curves of `M̄_{0,n}`, and exact cone
//! membership.

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome};
use crate::picard::{lincomb, Coordinate, DivisorClass};
use crate::rational::{int, Rational};
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FCurveFamily {
    /// `a - 12 b_0 + b_1`
    EllipticTail,
    /// `2 b_0 - b_i`
    Middle(u32),
    /// `b_i`
    Positive(u32),
    /// `b_i + b_j - b_{i+j}`
    Pair(u32, u32),
    /// `b_i + b_j + b_k + b_l - b_{i+j} - b_{i+k} - b_{i+l}`
    Quadruple(u32, u32, u32, u32),
}

impl fmt::Display for FCurveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FCurveFamily::EllipticTail => write!(f, "EllipticTail"),
            FCurveFamily::Middle(i) => write!(f, "Middle({i})"),
            FCurveFamily::Positive(i) => write!(f, "Positive({i})"),
            FCurveFamily::Pair(i, j) => write!(f, "Pair({i},{j})"),
            FCurveFamily::Quadruple(i, j, k, l) => write!(f, "Quadruple({i},{j},{k},{l})"),
        }
    }
}

/// A linear functional on `M̄_g` classes `a λ - Σ b_i δ_i`, stored as integer
/// coefficients of `(a, b_0, .., b_{⌊g/2⌋})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FCurveFunctional {
    pub g: u32,
    pub family: FCurveFamily,
    pub coeffs: Vec<i64>,
}

impl FCurveFunctional {
    fn build(g: u32, family: FCurveFamily) -> Self {
        let half = g / 2;
        let mut coeffs = vec![0i64; half as usize + 2];
        // b_i sits at position 1 + min(i, g - i)
        let mut b = |i: u32, c: i64| {
            let k = i.min(g - i);
            coeffs[1 + k as usize] += c;
        };
        match family {
            FCurveFamily::EllipticTail => {
                b(0, -12);
                b(1, 1);
            }
            FCurveFamily::Middle(i) => {
                b(0, 2);
                b(i, -1);
            }
            FCurveFamily::Positive(i) => b(i, 1),
            FCurveFamily::Pair(i, j) => {
                b(i, 1);
                b(j, 1);
                b(i + j, -1);
            }
            FCurveFamily::Quadruple(i, j, k, l) => {
                for x in [i, j, k, l] {
                    b(x, 1);
                }
                for x in [j, k, l] {
                    b(i + x, -1);
                }
            }
        }
        if family == FCurveFamily::EllipticTail {
            coeffs[0] = 1;
        }
        FCurveFunctional { g, family, coeffs }
    }

    pub fn evaluate(&self, a: &Rational, b: &[Rational]) -> Rational {
        let mut acc = a * int(self.coeffs[0]);
        for (c, bi) in self.coeffs[1..].iter().zip(b) {
            if *c != 0 {
                acc += bi * int(*c);
            }
        }
        acc
    }

    pub fn evaluate_class(&self, d: &DivisorClass) -> Result<Rational> {
        let (a, b) = mg_coefficients_for(d, self.g)?;
        Ok(self.evaluate(&a, &b))
    }

    /// Human-readable form such as `a - 12b0 + b1`.
    pub fn formula(&self) -> String {
        let mut out = String::new();
        let names = std::iter::once("a".to_string()).chain((0..).map(|i| format!("b{i}")));
        for (c, name) in self.coeffs.iter().zip(names) {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 { "-" } else { "+" };
            if out.is_empty() {
                if *c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            if c.abs() != 1 {
                out.push_str(&c.abs().to_string());
            }
            out.push_str(&name);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn mg_coefficients_for(d: &DivisorClass, g: u32) -> Result<(Rational, Vec<Rational>)> {
    let sig = d.signature();
    if sig.g != g || sig.n != 0 {
        return Err(Error::SignatureMismatch { expected_g: g, expected_n: 0, found_g: sig.g, found_n: sig.n });
    }
    d.mg_coefficients()
}

/// All distinct F-curve functionals on `M̄_g`, in generation order:
/// elliptic tail, middle, positivity, pairs, then quadruples. Instances that
/// induce an already listed coefficient vector are skipped.
pub fn enumerate_fcurve_functionals(g: u32) -> Result<Vec<FCurveFunctional>> {
    if g < 2 {
        return Err(Error::Precondition(format!("F-curve functionals need g >= 2, got {g}")));
    }
    let mut families = vec![FCurveFamily::EllipticTail];
    families.extend((1..g).map(FCurveFamily::Middle));
    families.extend((1..g).map(FCurveFamily::Positive));
    for i in 1..g {
        for j in 1..g {
            if i + j < g {
                families.push(FCurveFamily::Pair(i, j));
            }
        }
    }
    for i in 1..g {
        for j in 1..g {
            for k in 1..g {
                if i + j + k < g {
                    families.push(FCurveFamily::Quadruple(i, j, k, g - i - j - k));
                }
            }
        }
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for fam in families {
        let f = FCurveFunctional::build(g, fam);
        if f.coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        if seen.insert(f.coeffs.clone()) {
            out.push(f);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FCheck {
    pub pass: bool,
    /// Every failing functional with its value on the class.
    pub violations: Vec<(FCurveFunctional, Rational)>,
}

fn fcheck(d: &DivisorClass, strict: bool) -> Result<FCheck> {
    let sig = d.signature();
    if sig.n != 0 {
        return Err(Error::Precondition(format!("F-curve checks expect a class on M̄_g, got n = {}", sig.n)));
    }
    let (a, b) = d.mg_coefficients()?;
    let mut violations = Vec::new();
    for f in enumerate_fcurve_functionals(sig.g)? {
        let v = f.evaluate(&a, &b);
        let ok = if strict { v.is_positive() } else { !v.is_negative() };
        if !ok {
            violations.push((f, v));
        }
    }
    Ok(FCheck { pass: violations.is_empty(), violations })
}

/// Non-strict check: every F-curve functional is `>= 0`.
pub fn f_nef_check(d: &DivisorClass) -> Result<FCheck> {
    fcheck(d, false)
}

/// Strict check: every F-curve functional is `> 0`.
pub fn f_ample_check(d: &DivisorClass) -> Result<FCheck> {
    fcheck(d, true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NefVerdict {
    ProvedNef,
    Inconclusive,
}

/// Sufficient nefness criterion: F-nef and `b_i >= b_0` for every `i >= 1`.
pub fn nef_sufficient(d: &DivisorClass) -> Result<NefVerdict> {
    let check = f_nef_check(d)?;
    let (_, b) = d.mg_coefficients()?;
    let dominated = b[1..].iter().all(|bi| *bi >= b[0]);
    Ok(if check.pass && dominated { NefVerdict::ProvedNef } else { NefVerdict::Inconclusive })
}

/// A partition of `{1..n}` into four nonempty blocks, sorted by least
/// element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FCurvePartition0n {
    pub blocks: [Vec<u32>; 4],
}

impl fmt::Display for FCurvePartition0n {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(u32::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{}", parts.join(" | "))
    }
}

/// All F-curves of `M̄_{0,n}`, via restricted growth strings.
pub fn enumerate_fcurves_0n(n: u32) -> Result<Vec<FCurvePartition0n>> {
    if n < 4 {
        return Err(Error::Precondition(format!("F-curves on M̄_(0,n) need n >= 4, got {n}")));
    }
    let mut out = Vec::new();
    let mut assign = vec![0usize; n as usize];
    fn rec(pos: usize, used: usize, assign: &mut Vec<usize>, out: &mut Vec<FCurvePartition0n>) {
        let n = assign.len();
        // remaining points must be able to open the missing blocks
        if 4 - used > n - pos {
            return;
        }
        if pos == n {
            let mut blocks: [Vec<u32>; 4] = Default::default();
            for (p, &b) in assign.iter().enumerate() {
                blocks[b].push(p as u32 + 1);
            }
            out.push(FCurvePartition0n { blocks });
            return;
        }
        for b in 0..used.min(4) {
            assign[pos] = b;
            rec(pos + 1, used, assign, out);
        }
        if used < 4 {
            assign[pos] = used;
            rec(pos + 1, used + 1, assign, out);
        }
    }
    rec(0, 0, &mut assign, &mut out);
    Ok(out)
}

/// Nonnegative multipliers writing a target as a combination of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub multipliers: Vec<Rational>,
    /// `target - Σ multipliers[k] · generators[k]`; zero for a valid certificate.
    pub residual: DivisorClass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Member(Certificate),
    /// A functional `y` on the listed coordinates with `y(g_k) <= 0` for every
    /// generator and `y(target) > 0`.
    NotInCone { separator: Vec<(Coordinate, Rational)> },
}

/// Exact cone membership. The returned multipliers are the lexicographically
/// smallest nonnegative solution.
pub fn cone_member(target: &DivisorClass, generators: &[DivisorClass]) -> Result<Membership> {
    let sig = target.signature();
    for g in generators {
        if g.signature() != sig {
            let o = g.signature();
            return Err(Error::SignatureMismatch { expected_g: sig.g, expected_n: sig.n, found_g: o.g, found_n: o.n });
        }
    }
    if generators.is_empty() {
        if target.is_zero() {
            return Ok(Membership::Member(Certificate { multipliers: Vec::new(), residual: target.clone() }));
        }
        return Err(Error::Precondition("empty generator list with a nonzero target".into()));
    }
    let coords: BTreeSet<Coordinate> = std::iter::once(target)
        .chain(generators)
        .flat_map(|d| d.coordinates().into_iter().map(|(c, _)| c))
        .collect();
    let mut lp = LinearProgram::new(generators.len());
    for c in &coords {
        lp.add_row(generators.iter().map(|g| g.coordinate(c)).collect(), target.coordinate(c));
    }
    match lp.solve(&[])? {
        LpOutcome::Feasible(x) => {
            let cert = certificate(target, generators, x)?;
            Ok(Membership::Member(cert))
        }
        LpOutcome::Infeasible { farkas } => {
            let y = farkas.ok_or_else(|| Error::Inconsistent("missing infeasibility proof".into()))?;
            Ok(Membership::NotInCone {
                separator: coords.into_iter().zip(y).filter(|(_, v)| !v.is_zero()).collect(),
            })
        }
    }
}

fn certificate(target: &DivisorClass, generators: &[DivisorClass], x: Vec<Rational>) -> Result<Certificate> {
    let mut terms: Vec<(Rational, &DivisorClass)> = vec![(int(1), target)];
    for (c, g) in x.iter().zip(generators) {
        terms.push((-c.clone(), g));
    }
    let residual = lincomb(&terms)?;
    if !residual.is_zero() {
        return Err(Error::Inconsistent(format!("certificate does not recombine: residual {residual}")));
    }
    Ok(Certificate { multipliers: x, residual })
}

/// Evaluates a separating functional on a class.
pub fn apply_separator(separator: &[(Coordinate, Rational)], d: &DivisorClass) -> Rational {
    separator.iter().map(|(c, y)| y * d.coordinate(c)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::picard::mg_class;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn all_ones(g: u32, a: Rational) -> DivisorClass {
        let b = vec![int(1); g as usize / 2 + 1];
        DivisorClass::from_mg(g, a, &b).unwrap()
    }

    #[test]
    fn genus_three_list() {
        let fs = enumerate_fcurve_functionals(3).unwrap();
        let formulas: Vec<String> = fs.iter().map(|f| f.formula()).collect();
        assert_eq!(formulas, vec!["a - 12b0 + b1", "2b0 - b1", "b1"]);
    }

    #[test]
    fn genus_four_quadruple() {
        let fs = enumerate_fcurve_functionals(4).unwrap();
        let q = fs.iter().find(|f| f.family == FCurveFamily::Quadruple(1, 1, 1, 1)).unwrap();
        assert_eq!(q.coeffs, vec![0, 0, 4, -3]);
    }

    /// Builds each functional by evaluating the written inequality on basis
    /// vectors, independently of the coefficient bookkeeping above.
    fn oracle_count(g: u32) -> usize {
        let half = g as usize / 2;
        let dim = half + 2;
        let eval = |ineq: &dyn Fn(&dyn Fn(u32) -> i64, i64) -> i64| -> Vec<i64> {
            (0..dim)
                .map(|k| {
                    let a = if k == 0 { 1 } else { 0 };
                    let b = move |i: u32| -> i64 {
                        let i = if (i as usize) > half { g - i } else { i };
                        if k >= 1 && i as usize == k - 1 {
                            1
                        } else {
                            0
                        }
                    };
                    ineq(&b, a)
                })
                .collect()
        };
        let mut set = std::collections::HashSet::new();
        set.insert(eval(&|b, a| a - 12 * b(0) + b(1)));
        for i in 1..g {
            set.insert(eval(&|b, _| 2 * b(0) - b(i)));
            set.insert(eval(&|b, _| b(i)));
        }
        for i in 1..g {
            for j in 1..g {
                if i + j < g {
                    set.insert(eval(&|b, _| b(i) + b(j) - b(i + j)));
                }
            }
        }
        for i in 1..=g {
            for j in 1..=g {
                for k in 1..=g {
                    for l in 1..=g {
                        if i + j + k + l == g {
                            set.insert(eval(&|b, _| b(i) + b(j) + b(k) + b(l) - b(i + j) - b(i + k) - b(i + l)));
                        }
                    }
                }
            }
        }
        set.remove(&vec![0; dim]);
        set.len()
    }

    #[test]
    fn counts_match_oracle() {
        for g in 2..=24 {
            assert_eq!(enumerate_fcurve_functionals(g).unwrap().len(), oracle_count(g), "g = {g}");
        }
        assert_eq!(enumerate_fcurve_functionals(24).unwrap().len(), N24);
    }

    /// Regression value for the genus-24 list.
    const N24: usize = 254;

    #[test]
    fn nef_examples() {
        let d = mg_class(4, 10, &[1, 2]).unwrap();
        let c = f_nef_check(&d).unwrap();
        assert!(c.pass);
        let et = FCurveFunctional::build(4, FCurveFamily::EllipticTail);
        assert_eq!(et.evaluate_class(&d).unwrap(), int(0));

        let k = mg_class(6, 13, &[2, 3, 2, 2]).unwrap();
        let c = f_nef_check(&k).unwrap();
        assert!(!c.pass);
        let v = c.violations.iter().find(|(f, _)| f.family == FCurveFamily::EllipticTail).unwrap();
        assert_eq!(v.1, int(-8));

        assert!(f_nef_check(&DivisorClass::lambda_class(crate::picard::ModuliSignature::curves(5).unwrap()))
            .unwrap()
            .pass);
    }

    #[test]
    fn nef_class_fails_in_genus_five() {
        // b_4 = b_1 for g = 5, so Pair(2,2) reads 2 b_2 - b_1 = -2
        let d = mg_class(5, 10, &[1, 2]).unwrap();
        let c = f_nef_check(&d).unwrap();
        assert!(!c.pass);
        assert!(c.violations.iter().any(|(f, v)| f.family == FCurveFamily::Pair(2, 2) && *v == int(-2)));
    }

    #[test]
    fn cornalba_harris_sweep() {
        for g in [3u32, 6, 11] {
            for (a, ample, nef) in [(int(10), false, false), (int(11), false, true), (rat(23, 2), true, true), (int(12), true, true)] {
                let d = all_ones(g, a.clone());
                assert_eq!(f_ample_check(&d).unwrap().pass, ample, "g={g} a={a}");
                assert_eq!(f_nef_check(&d).unwrap().pass, nef, "g={g} a={a}");
            }
        }
        let lam = DivisorClass::lambda_class(crate::picard::ModuliSignature::curves(4).unwrap());
        assert!(!f_ample_check(&lam).unwrap().pass);
    }

    #[test]
    fn nef_sufficient_examples() {
        assert_eq!(nef_sufficient(&all_ones(7, int(12))).unwrap(), NefVerdict::ProvedNef);
        assert_eq!(nef_sufficient(&mg_class(4, 10, &[1, 2]).unwrap()).unwrap(), NefVerdict::Inconclusive);
        let lam = DivisorClass::lambda_class(crate::picard::ModuliSignature::curves(4).unwrap());
        assert_eq!(nef_sufficient(&lam).unwrap(), NefVerdict::ProvedNef);
    }

    fn stirling2(n: u32, k: u32) -> u64 {
        if n == 0 && k == 0 {
            return 1;
        }
        if n == 0 || k == 0 {
            return 0;
        }
        k as u64 * stirling2(n - 1, k) + stirling2(n - 1, k - 1)
    }

    /// Brute force over all labelings `{1..n} -> {0..3}`, keeping those that
    /// hit all four labels and dividing by relabelings.
    fn brute_partitions(n: u32) -> usize {
        let mut set = BTreeSet::new();
        for code in 0..4u64.pow(n) {
            let mut blocks: Vec<Vec<u32>> = vec![Vec::new(); 4];
            let mut c = code;
            for p in 1..=n {
                blocks[(c % 4) as usize].push(p);
                c /= 4;
            }
            if blocks.iter().any(Vec::is_empty) {
                continue;
            }
            blocks.sort();
            set.insert(blocks);
        }
        set.len()
    }

    #[test]
    fn partition_counts() {
        assert!(enumerate_fcurves_0n(3).is_err());
        for n in 4..=8 {
            let ps = enumerate_fcurves_0n(n).unwrap();
            assert_eq!(ps.len(), brute_partitions(n), "n = {n}");
            assert_eq!(ps.len() as u64, stirling2(n, 4));
            for p in &ps {
                let mut all: Vec<u32> = p.blocks.iter().flatten().copied().collect();
                all.sort();
                assert_eq!(all, (1..=n).collect::<Vec<_>>());
                let mins: Vec<u32> = p.blocks.iter().map(|b| b[0]).collect();
                assert!(mins.windows(2).all(|w| w[0] < w[1]));
            }
        }
        assert_eq!(enumerate_fcurves_0n(4).unwrap().len(), 1);
        assert_eq!(enumerate_fcurves_0n(5).unwrap().len(), 10);
        assert_eq!(enumerate_fcurves_0n(6).unwrap().len(), 65);
    }

    #[test]
    fn membership_examples() {
        let d0 = mg_class(3, 0, &[-1]).unwrap();
        let d1 = mg_class(3, 0, &[0, -1]).unwrap();
        let h = mg_class(3, 9, &[1, 3]).unwrap();
        let Membership::Member(c) = cone_member(&h, &[d0, d1, h.clone()]).unwrap() else { panic!() };
        assert_eq!(c.multipliers, vec![int(0), int(0), int(1)]);

        let lam = mg_class(3, 1, &[]).unwrap();
        let gens = vec![lam.clone(), mg_class(3, 12, &[1]).unwrap(), mg_class(3, 10, &[1, 2]).unwrap()];
        let Membership::Member(c) = cone_member(&lam, &gens).unwrap() else { panic!() };
        assert_eq!(c.multipliers, vec![int(1), int(0), int(0)]);

        let neg = mg_class(3, -1, &[]).unwrap();
        let Membership::NotInCone { separator } = cone_member(&neg, &gens).unwrap() else { panic!() };
        for g in &gens {
            assert!(!apply_separator(&separator, g).is_positive());
        }
        assert!(apply_separator(&separator, &neg).is_positive());

        assert!(cone_member(&neg, &[]).is_err());
    }

    proptest! {
        #[test]
        fn fchecks_scale_invariant(a in -30i64..30, b in proptest::collection::vec(-5i64..6, 4), p in 1i64..9, q in 1i64..9) {
            let d = mg_class(7, a, &b).unwrap();
            let e = d.scaled(&rat(p, q));
            prop_assert_eq!(f_nef_check(&d).unwrap().pass, f_nef_check(&e).unwrap().pass);
            let ample = f_ample_check(&d).unwrap().pass;
            prop_assert_eq!(ample, f_ample_check(&e).unwrap().pass);
            if ample {
                prop_assert!(f_nef_check(&d).unwrap().pass);
            }
        }
    }
}
