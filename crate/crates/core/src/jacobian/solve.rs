use super::bundles::{c1_expansions, class_x, class_y, TestLocus};
use super::harris_tu::{determinant, eval_chern_product, Convention, CALIBRATED};
use super::{EvalContext, JacobianElement, Sector};
use crate::error::{Error, Result};
use crate::rational::{int, Rational};
use crate::slopes::{CurveProfile, TestCurve};
use crate::syzygy::virtual_slope;
use num_traits::{Signed, Zero};
use std::collections::HashMap;

/// Integrates an element over `C × W^r_d(C)`: only `η θ^c c_I` terms with
/// `c + Σ I = r` contribute, each with the degree of `θ^c c_I` on `W`.
pub fn integrate(e: &JacobianElement, ctx: &EvalContext, conv: Convention) -> Result<Rational> {
    let mut cache: HashMap<(Vec<u32>, u32), Rational> = HashMap::new();
    let mut total = Rational::zero();
    for (basis, coef) in e.terms() {
        if basis.sector != Sector::Eta {
            continue;
        }
        let key = (basis.chern.clone(), basis.theta);
        let v = match cache.get(&key) {
            Some(v) => v.clone(),
            None => {
                let v = eval_chern_product(&basis.chern, basis.theta, ctx, conv)?;
                cache.insert(key, v.clone());
                v
            }
        };
        total += coef * v;
    }
    Ok(total)
}

/// `A λ - B_0 δ_0 - B_1 δ_1 - ...` up to a positive scalar, with `B_0 > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvedClass {
    pub s: i64,
    pub i: i64,
    pub a: Rational,
    pub b0: Rational,
    pub b1: Rational,
    pub slope: Rational,
    /// Degree of `c_1(G_{i,2} - H_{i,2})` on `X` and on `Y`.
    pub deg_x: Rational,
    pub deg_y: Rational,
    pub virtual_slope: Rational,
}

/// Solves for `A, B_0, B_1` from the three test curves and checks the
/// result against the closed-form virtual slope.
pub fn solve_coefficients(s: i64, i: i64) -> Result<SolvedClass> {
    let ctx = EvalContext::new(s, i)?;
    let (gexp, hexp) = c1_expansions(&ctx);
    let degree = |locus: TestLocus, class: JacobianElement| -> Result<Rational> {
        let c1 = &gexp.restrict(locus, &ctx) - &hexp.restrict(locus, &ctx);
        integrate(&(&c1 * &class), &ctx, CALIBRATED)
    };
    let deg_x = degree(TestLocus::X, class_x(&ctx))?;
    let deg_y = degree(TestLocus::Y, class_y(&ctx))?;

    // Unknowns (A, B_0, B_1); the class pairs with a curve as
    // A·(λ·C) - B_0·(δ_0·C) - B_1·(δ_1·C).
    let g = ctx.g as u32;
    let rows: Vec<(CurveProfile, Rational)> = vec![
        (CurveProfile::new(TestCurve::C0, g)?, deg_y.clone()),
        (CurveProfile::new(TestCurve::C1, g)?, deg_x.clone()),
        (CurveProfile::new(TestCurve::R, g)?, Rational::zero()),
    ];
    let matrix: Vec<Vec<Rational>> = rows
        .iter()
        .map(|(p, _)| vec![p.lambda.clone(), -p.delta0.clone(), -p.deltas[0].clone()])
        .collect();
    let rhs: Vec<Rational> = rows.iter().map(|(_, v)| v.clone()).collect();
    let x = cramer(&matrix, &rhs)?;

    // overdetermination: each test curve must reproduce its degree, and
    // B_1 = 12 B_0 - A
    for ((p, v), row) in rows.iter().zip(&matrix) {
        let got: Rational = row.iter().zip(&x).map(|(m, u)| m * u).sum();
        if got != *v {
            return Err(Error::Inconsistent(format!("curve {} gives {got}, expected {v}", p.name)));
        }
    }
    if x[2] != int(12) * &x[1] - &x[0] {
        return Err(Error::Inconsistent("B_1 differs from 12 B_0 - A".into()));
    }
    if x[1].is_zero() {
        return Err(Error::Singular(format!("B_0 vanishes at (s={s}, i={i})")));
    }
    let sign = if x[1].is_negative() { int(-1) } else { int(1) };
    let (a, b0, b1) = (&x[0] * &sign, &x[1] * &sign, &x[2] * &sign);

    let slope = &a / &b0;
    let vs = virtual_slope(s, i)?.slope;
    if slope != vs {
        return Err(Error::Inconsistent(format!(
            "solved slope {slope} differs from the closed form {vs} at (s={s}, i={i})"
        )));
    }
    Ok(SolvedClass { s, i, a, b0, b1, slope, deg_x, deg_y, virtual_slope: vs })
}

/// Solves a small square system exactly by Cramer's rule.
fn cramer(m: &[Vec<Rational>], rhs: &[Rational]) -> Result<Vec<Rational>> {
    let det = determinant(m.to_vec());
    if det.is_zero() {
        return Err(Error::Singular("test-curve system".into()));
    }
    Ok((0..m.len())
        .map(|k| {
            let mk: Vec<Vec<Rational>> = m
                .iter()
                .zip(rhs)
                .map(|(row, b)| {
                    let mut row = row.clone();
                    row[k] = b.clone();
                    row
                })
                .collect();
            determinant(mk) / &det
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn solved_examples() {
        let c = solve_coefficients(2, 0).unwrap();
        assert_eq!((c.a.clone(), c.b0.clone(), c.b1.clone()), (int(294), int(42), int(210)));
        assert_eq!(c.slope, int(7));
        assert_eq!(solve_coefficients(1, 1).unwrap().slope, int(8));
        assert_eq!(solve_coefficients(1, 0).unwrap().slope, int(9));
        let c = solve_coefficients(2, 1).unwrap();
        assert_eq!(c.slope, crate::syzygy::s2_closed_form(1));
        assert_eq!(c.slope, rat(407, 61));
        assert_eq!(solve_coefficients(3, 0).unwrap().slope, rat(2459, 377));
    }

    #[test]
    fn integration_ignores_other_sectors() {
        let ctx = EvalContext::new(2, 0).unwrap();
        let e = &JacobianElement::chern(4) + &(&JacobianElement::gamma() * &JacobianElement::chern(3));
        assert_eq!(integrate(&e, &ctx, CALIBRATED).unwrap(), int(0));
        let e = &JacobianElement::eta() * &JacobianElement::chern(4);
        assert_eq!(integrate(&e, &ctx, CALIBRATED).unwrap(), int(42));
        // too many W-degrees
        let e = &(&JacobianElement::eta() * &JacobianElement::chern(4)) * &JacobianElement::theta();
        assert_eq!(integrate(&e, &ctx, CALIBRATED).unwrap(), int(0));
    }
}
