//! The `(s, i)` sweep report. Closed-form columns are computed for every
//! cell; the test-curve solver runs on a thread pool under a wall-clock
//! budget and cells it does not reach are reported as `SKIPPED`.

use crate::commands::{CliResult, Outcome};
use crate::output::{Cell, Doc, Table};
use crate::{GlobalOpts, ReportArgs};
use modcone_core::jacobian::{solve_coefficients, SolvedClass};
use modcone_core::slopes::slope_bound;
use modcone_core::syzygy::{bound_check, family, published_2_2, ranks, virtual_slope};
use modcone_core::Result;
use std::sync::mpsc;
use std::time::{Duration, Instant};

type Solved = Option<Result<SolvedClass>>;

fn run_solver(cells: &[(i64, i64)], budget: Duration) -> Vec<Solved> {
    let deadline = Instant::now() + budget;
    let mut order: Vec<usize> = (0..cells.len()).collect();
    // cheapest first: the cost grows with the genus
    order.sort_by_key(|&k| family(cells[k].0, cells[k].1).map(|f| f.g).unwrap_or(i64::MAX));
    let (tx, rx) = mpsc::channel();
    for k in order {
        let tx = tx.clone();
        let (s, i) = cells[k];
        rayon::spawn(move || {
            if Instant::now() >= deadline {
                let _ = tx.send((k, None));
                return;
            }
            let _ = tx.send((k, Some(solve_coefficients(s, i))));
        });
    }
    drop(tx);
    let mut out: Vec<Solved> = vec![None; cells.len()];
    let mut received = 0;
    while received < cells.len() {
        let left = deadline.saturating_duration_since(Instant::now());
        match rx.recv_timeout(left) {
            Ok((k, r)) => {
                out[k] = r;
                received += 1;
            }
            Err(_) => break,
        }
    }
    out
}

pub fn run(args: &ReportArgs, global: &GlobalOpts) -> CliResult<Outcome> {
    let mut cells = Vec::new();
    for s in args.smin..=args.smax {
        for i in args.imin..=args.imax {
            family(s, i)?;
            cells.push((s, i));
        }
    }
    let budget = Duration::from_secs_f64(global.budget_seconds.max(0.0));
    let solved = if args.no_solve { vec![None; cells.len()] } else { run_solver(&cells, budget) };

    let mut t = Table::new(&["s", "i", "g", "virtual_slope", "upper", "bound_pass", "ranks_equal", "solver_slope", "solver_match"]);
    let mut pass = true;
    for ((s, i), sol) in cells.iter().zip(&solved) {
        let (s, i) = (*s, *i);
        let fam = family(s, i)?;
        let v = virtual_slope(s, i)?.slope;
        let (upper, bound_pass): (Cell, Cell) = if s >= 2 {
            let b = bound_check(s, i)?;
            pass &= b.pass;
            (b.upper.into(), b.pass.into())
        } else {
            (slope_bound(fam.g as u32).into(), "n/a".into())
        };
        let rk = ranks(&fam);
        pass &= rk.a == rk.b;
        let (solver, matched): (Cell, Cell) = match sol {
            None if args.no_solve => ("not run".into(), "n/a".into()),
            None => ("SKIPPED".into(), "n/a".into()),
            Some(Ok(c)) => {
                pass &= c.slope == v;
                ((&c.slope).into(), (c.slope == v).into())
            }
            Some(Err(e)) => {
                pass = false;
                (format!("error: {e}").into(), false.into())
            }
        };
        t.push(vec![s.into(), i.into(), fam.g.into(), v.into(), upper, bound_pass, (rk.a == rk.b).into(), solver, matched]);
    }

    let formula = virtual_slope(2, 2)?.slope;
    let published = published_2_2();
    let mark = if formula == published { "✓" } else { "✗" };
    pass &= formula == published;
    let doc = Doc::new()
        .with_table(t)
        .note(format!("(2,2): formula {formula} = published {published} {mark}"));
    Ok(Outcome { text: doc.render(global.format), pass })
}
