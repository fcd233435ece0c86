//! Exact linear programming over the rationals.
//!
//! Problems have the form `A x = b, x >= 0`, where some variables may be
//! required to be strictly positive. The solver is a dense two-phase tableau
//! simplex with Bland's rule, so it never cycles and its output depends only
//! on the input. Among all feasible points it returns the one that
//! lexicographically minimizes the supplied objectives and then the variables
//! `x_0, x_1, ...` in order.

use crate::error::{Error, Result};
use crate::rational::{rat, Rational};
use num_traits::{One, Signed, Zero};

/// Gap used for strict variables when the problem leaves room for it.
pub fn default_gap() -> Rational {
    rat(1, 1_000_000)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible(Vec<Rational>),
    /// `farkas` is a vector `y` with `y·A_j <= 0` for every column and
    /// `y·b > 0`. It is absent when the closed problem is feasible but no
    /// point satisfies the strict constraints.
    Infeasible { farkas: Option<Vec<Rational>> },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible(_))
    }
}

#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    num_vars: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    strict: Vec<bool>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram { num_vars, rows: Vec::new(), rhs: Vec::new(), strict: vec![false; num_vars] }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Adds the equation `coeffs · x = rhs`.
    pub fn add_row(&mut self, coeffs: Vec<Rational>, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars, "row length must match the number of variables");
        self.rows.push(coeffs);
        self.rhs.push(rhs);
    }

    /// Requires `x_var > 0` instead of `x_var >= 0`.
    pub fn set_strict(&mut self, var: usize) {
        self.strict[var] = true;
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[Rational], &Rational)> {
        self.rows.iter().map(Vec::as_slice).zip(self.rhs.iter())
    }

    /// Checks a candidate point exactly.
    pub fn is_solution(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && x.iter().zip(&self.strict).all(|(v, &s)| if s { v.is_positive() } else { !v.is_negative() })
            && self.rows.iter().zip(&self.rhs).all(|(row, b)| dot(row, x) == *b)
    }

    /// Solves the problem, minimizing `objectives` lexicographically and
    /// breaking remaining ties by the lexicographically smallest `x`.
    ///
    /// Strict variables are handled in two steps: first the largest `t <= 1`
    /// with `x_j >= t` on all strict variables is found; then the strict
    /// variables are shifted by a gap `ε` (the default gap, or `t/2` if `t`
    /// is smaller) and the shifted closed problem is optimized.
    pub fn solve(&self, objectives: &[Vec<Rational>]) -> Result<LpOutcome> {
        for o in objectives {
            assert_eq!(o.len(), self.num_vars, "objective length must match the number of variables");
        }
        if !self.strict.iter().any(|&s| s) {
            return Ok(match simplex(&self.rows, &self.rhs, self.num_vars, objectives, true)? {
                Phase::Optimal(x) => LpOutcome::Feasible(x),
                Phase::Infeasible(y) => LpOutcome::Infeasible { farkas: Some(y) },
            });
        }

        if let Phase::Infeasible(y) = simplex(&self.rows, &self.rhs, self.num_vars, &[], false)? {
            return Ok(LpOutcome::Infeasible { farkas: Some(y) });
        }

        // max t subject to x_j = t + x'_j on strict j, t + w = 1
        let n = self.num_vars;
        let t = n;
        let mut rows: Vec<Vec<Rational>> = self
            .rows
            .iter()
            .map(|row| {
                let mut r = row.clone();
                let shift: Rational = (0..n).filter(|&j| self.strict[j]).map(|j| row[j].clone()).sum();
                r.push(shift);
                r.push(Rational::zero());
                r
            })
            .collect();
        let mut cap = vec![Rational::zero(); n + 2];
        cap[t] = Rational::one();
        cap[t + 1] = Rational::one();
        rows.push(cap);
        let mut rhs = self.rhs.clone();
        rhs.push(Rational::one());
        let mut obj = vec![Rational::zero(); n + 2];
        obj[t] = -Rational::one();
        let best = match simplex(&rows, &rhs, n + 2, &[obj], false)? {
            Phase::Optimal(x) => x[t].clone(),
            Phase::Infeasible(_) => {
                return Err(Error::Inconsistent("auxiliary LP infeasible after feasible relaxation".into()))
            }
        };
        if best.is_zero() {
            return Ok(LpOutcome::Infeasible { farkas: None });
        }
        let gap = std::cmp::min(default_gap(), best / Rational::from_integer(2.into()));

        let shifted_rhs: Vec<Rational> = self
            .rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| {
                let used: Rational = (0..n).filter(|&j| self.strict[j]).map(|j| &row[j] * &gap).sum();
                b - used
            })
            .collect();
        match simplex(&self.rows, &shifted_rhs, n, objectives, true)? {
            Phase::Optimal(mut x) => {
                for (v, &s) in x.iter_mut().zip(&self.strict) {
                    if s {
                        *v += &gap;
                    }
                }
                debug_assert!(self.is_solution(&x));
                Ok(LpOutcome::Feasible(x))
            }
            Phase::Infeasible(_) => Err(Error::Inconsistent("shifted LP infeasible despite positive margin".into())),
        }
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).map(|(x, y)| x * y).sum()
}

enum Phase {
    Optimal(Vec<Rational>),
    Infeasible(Vec<Rational>),
}

struct Tableau {
    /// Each row has `cols + 1` entries; the last is the right-hand side.
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    active: Vec<bool>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        if !p.is_one() {
            for v in self.t[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
        }
        let prow = self.t[r].clone();
        for (k, row) in self.t.iter_mut().enumerate() {
            if k == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    fn reduced_costs(&self, cost: &[Rational]) -> Vec<Rational> {
        (0..self.cols)
            .map(|j| {
                let mut rc = cost[j].clone();
                for (row, &b) in self.t.iter().zip(&self.basis) {
                    if !cost[b].is_zero() && !row[j].is_zero() {
                        rc -= &cost[b] * &row[j];
                    }
                }
                rc
            })
            .collect()
    }

    /// Minimizes `cost` with Bland's rule over the active columns.
    fn optimize(&mut self, cost: &[Rational]) -> Result<()> {
        loop {
            let rc = self.reduced_costs(cost);
            let entering = (0..self.cols).find(|&j| self.active[j] && !self.basis.contains(&j) && rc[j].is_negative());
            let Some(c) = entering else { return Ok(()) };
            let rhs = self.cols;
            let mut best: Option<(usize, Rational)> = None;
            for (r, row) in self.t.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[c];
                let better = match &best {
                    None => true,
                    Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            let Some((r, _)) = best else { return Err(Error::Unbounded) };
            self.pivot(r, c);
        }
    }

    fn solution(&self, n: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); n];
        for (row, &b) in self.t.iter().zip(&self.basis) {
            if b < n {
                x[b] = row[self.cols].clone();
            }
        }
        x
    }

    /// Fixes every nonbasic column whose reduced cost is positive; these are
    /// zero in every optimal solution.
    fn restrict_to_optimal_face(&mut self, cost: &[Rational]) {
        let rc = self.reduced_costs(cost);
        for j in 0..self.cols {
            if self.active[j] && !self.basis.contains(&j) && rc[j].is_positive() {
                self.active[j] = false;
            }
        }
    }
}

fn simplex(
    a: &[Vec<Rational>],
    b: &[Rational],
    n: usize,
    objectives: &[Vec<Rational>],
    lexmin_vars: bool,
) -> Result<Phase> {
    let m = a.len();
    let cols = n + m;
    let mut signs = Vec::with_capacity(m);
    let mut t = Vec::with_capacity(m);
    for (k, (row, bk)) in a.iter().zip(b).enumerate() {
        let neg = bk.is_negative();
        signs.push(if neg { -Rational::one() } else { Rational::one() });
        let mut r: Vec<Rational> = row.iter().map(|v| if neg { -v } else { v.clone() }).collect();
        r.extend((0..m).map(|j| if j == k { Rational::one() } else { Rational::zero() }));
        r.push(if neg { -bk } else { bk.clone() });
        t.push(r);
    }
    let mut tab = Tableau { t, basis: (n..n + m).collect(), active: vec![true; cols], cols };

    let mut phase1 = vec![Rational::zero(); cols];
    for c in phase1.iter_mut().skip(n) {
        *c = Rational::one();
    }
    tab.optimize(&phase1)?;
    let infeas: Rational = tab
        .t
        .iter()
        .zip(&tab.basis)
        .filter(|(_, &bv)| bv >= n)
        .map(|(row, _)| row[cols].clone())
        .sum();
    if infeas.is_positive() {
        // y_k = 1 - (reduced cost of artificial k), undoing the row sign flips
        let rc = tab.reduced_costs(&phase1);
        let y = (0..m).map(|k| (Rational::one() - &rc[n + k]) * &signs[k]).collect();
        return Ok(Phase::Infeasible(y));
    }

    // Drive artificials out of the basis; rows where that is impossible are
    // redundant and dropped.
    let mut r = 0;
    while r < tab.t.len() {
        if tab.basis[r] >= n {
            if let Some(c) = (0..n).find(|&j| !tab.t[r][j].is_zero()) {
                tab.pivot(r, c);
                r += 1;
            } else {
                tab.t.remove(r);
                tab.basis.remove(r);
            }
        } else {
            r += 1;
        }
    }
    for j in n..cols {
        tab.active[j] = false;
    }

    let pad = |o: &[Rational]| {
        let mut c = o.to_vec();
        c.resize(cols, Rational::zero());
        c
    };
    for o in objectives {
        let c = pad(o);
        tab.optimize(&c)?;
        tab.restrict_to_optimal_face(&c);
    }
    if lexmin_vars {
        for k in 0..n {
            let mut c = vec![Rational::zero(); cols];
            c[k] = Rational::one();
            tab.optimize(&c)?;
            tab.restrict_to_optimal_face(&c);
        }
    }
    Ok(Phase::Optimal(tab.solution(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn simple_feasible() {
        // x0 + x1 = 2, x1 - x2 = 1
        let mut lp = LinearProgram::new(3);
        lp.add_row(ints(&[1, 1, 0]), int(2));
        lp.add_row(ints(&[0, 1, -1]), int(1));
        let LpOutcome::Feasible(x) = lp.solve(&[]).unwrap() else { panic!() };
        assert_eq!(x, ints(&[0, 2, 1]));
        assert!(lp.is_solution(&x));
    }

    #[test]
    fn objective_then_lexmin() {
        let mut lp = LinearProgram::new(3);
        lp.add_row(ints(&[1, 1, 1]), int(3));
        // maximize x0 first
        let LpOutcome::Feasible(x) = lp.solve(&[ints(&[-1, 0, 0])]).unwrap() else { panic!() };
        assert_eq!(x, ints(&[3, 0, 0]));
        let LpOutcome::Feasible(x) = lp.solve(&[]).unwrap() else { panic!() };
        assert_eq!(x, ints(&[0, 0, 3]));
    }

    #[test]
    fn farkas_certificate() {
        // x0 + x1 = -1 has no nonnegative solution
        let mut lp = LinearProgram::new(2);
        lp.add_row(ints(&[1, 1]), int(-1));
        lp.add_row(ints(&[1, -1]), int(0));
        let LpOutcome::Infeasible { farkas: Some(y) } = lp.solve(&[]).unwrap() else { panic!() };
        for j in 0..2 {
            let col: Vec<Rational> = lp.rows.iter().map(|r| r[j].clone()).collect();
            assert!(!dot(&y, &col).is_positive());
        }
        assert!(dot(&y, &lp.rhs).is_positive());
    }

    #[test]
    fn strict_variables() {
        // x0 + x1 = 1 with x0 > 0: lexmin pushes x0 down to the gap
        let mut lp = LinearProgram::new(2);
        lp.add_row(ints(&[1, 1]), int(1));
        lp.set_strict(0);
        let LpOutcome::Feasible(x) = lp.solve(&[]).unwrap() else { panic!() };
        assert_eq!(x[0], default_gap());
        assert!(lp.is_solution(&x));

        // x0 = 0 with x0 > 0 is closed-feasible but strictly infeasible
        let mut lp = LinearProgram::new(1);
        lp.add_row(ints(&[1]), int(0));
        lp.set_strict(0);
        assert_eq!(lp.solve(&[]).unwrap(), LpOutcome::Infeasible { farkas: None });

        // tiny margin: x0 + 10^7 x1 = 1 with both strict
        let mut lp = LinearProgram::new(2);
        lp.add_row(vec![int(10_000_000), int(10_000_000)], int(1));
        lp.set_strict(0);
        lp.set_strict(1);
        let LpOutcome::Feasible(x) = lp.solve(&[]).unwrap() else { panic!() };
        assert!(lp.is_solution(&x));
    }

    #[test]
    fn redundant_rows() {
        let mut lp = LinearProgram::new(2);
        lp.add_row(ints(&[1, 1]), int(2));
        lp.add_row(ints(&[2, 2]), int(4));
        let LpOutcome::Feasible(x) = lp.solve(&[]).unwrap() else { panic!() };
        assert_eq!(x, ints(&[0, 2]));
    }

    #[test]
    fn unbounded_objective() {
        let mut lp = LinearProgram::new(2);
        lp.add_row(ints(&[1, -1]), int(0));
        assert_eq!(lp.solve(&[ints(&[-1, 0])]), Err(Error::Unbounded));
    }
}
