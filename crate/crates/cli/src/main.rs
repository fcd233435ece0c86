mod commands;
mod output;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use output::Format;
use std::path::PathBuf;
use std::process::ExitCode;

/// Exact divisor-class, cone and slope computations on moduli spaces of
/// curves.
#[derive(Debug, Parser)]
#[command(name = "modcone", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Markdown)]
    pub format: Format,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Wall-clock budget for the solver part of a report.
    #[arg(long, global = true, default_value_t = 60.0)]
    pub budget_seconds: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// F-curve checks and cone membership.
    #[command(subcommand)]
    Cone(ConeCmd),
    /// List F-curve inequalities or F-curves.
    #[command(subcommand)]
    Fcurve(FcurveCmd),
    /// Slope of a class on M̄_g.
    Slope {
        #[arg(long)]
        class: PathBuf,
    },
    /// Emit a class document.
    #[command(subcommand)]
    Class(ClassCmd),
    /// Degree of a class on a test curve.
    Pair {
        #[arg(long)]
        class: PathBuf,
        #[arg(long)]
        curve: String,
    },
    /// General-type certificates.
    #[command(subcommand)]
    Certify(CertifyCmd),
    /// The (s, i) family of syzygy divisors.
    #[command(subcommand)]
    Syzygy(SyzygyCmd),
    /// Intersection numbers on W^r_d(C) and the test-curve solve.
    #[command(subcommand)]
    Jacobian(JacobianCmd),
    /// Fixed reference tables.
    #[command(subcommand)]
    Table(TableCmd),
    /// Sweep report over an (s, i) grid.
    Report(ReportArgs),
}

#[derive(Debug, Subcommand)]
pub enum ConeCmd {
    /// Check every F-curve inequality (F-nef).
    Fnef {
        #[arg(long)]
        class: PathBuf,
    },
    /// Check every F-curve inequality strictly (F-ample).
    Fample {
        #[arg(long)]
        class: PathBuf,
    },
    /// Decide whether the target lies in the cone spanned by the generators.
    Member {
        #[arg(long)]
        target: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        gens: Vec<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum FcurveCmd {
    List {
        /// Inequalities on M̄_g.
        #[arg(long, conflicts_with = "zero_n", required_unless_present = "zero_n")]
        g: Option<u32>,
        /// F-curves of M̄_{0,n}.
        #[arg(long)]
        zero_n: Option<u32>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ClassCmd {
    /// Brill-Noether divisor class.
    Bn {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        d: u32,
    },
    /// Canonical class of M̄_g.
    Canonical {
        #[arg(long)]
        g: u32,
    },
    /// Canonical class of M̄_{g,n}.
    Kgn {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
    },
    /// Symmetric class of the Mrc divisor.
    Mrc {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        i: u32,
    },
    /// Pointed divisor D_{g:a_1..a_n} (known part only when n >= 2).
    Logan {
        #[arg(long)]
        g: u32,
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        a: Vec<u32>,
    },
    /// A built-in class.
    Named {
        #[arg(long)]
        name: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum CertifyCmd {
    /// Certificate on M̄_g through one effective class.
    Mg {
        #[arg(long)]
        class: PathBuf,
    },
    /// Certificate on M̄_{g,n} through any number of candidate classes.
    Mgn {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, num_args = 0..)]
        candidates: Vec<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct SiArgs {
    #[arg(long)]
    pub s: i64,
    #[arg(long)]
    pub i: i64,
}

#[derive(Debug, Subcommand)]
pub enum SyzygyCmd {
    Params(SiArgs),
    Ranks(SiArgs),
    Slope(SiArgs),
    /// Virtual slopes and bound checks for s = s..smax, i = i..imax.
    Sweep {
        #[arg(long, default_value_t = 1)]
        s: i64,
        #[arg(long, default_value_t = 0)]
        i: i64,
        #[arg(long)]
        smax: i64,
        #[arg(long)]
        imax: i64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Full,
    Ascending,
    Descending,
}

#[derive(Debug, Subcommand)]
pub enum JacobianCmd {
    /// Evaluate the five reference identities on W^r_d(C).
    LemmaCheck {
        #[command(flatten)]
        si: SiArgs,
        /// Defaults to the calibrated convention.
        #[arg(long, value_enum)]
        convention: Option<ConventionArg>,
    },
    /// Solve for the class coefficients from the test curves.
    Solve {
        #[command(flatten)]
        si: SiArgs,
        /// Shorthand for --format json.
        #[arg(long)]
        json: bool,
    },
    /// Degree of one Chern-root monomial times a power of θ.
    Ht {
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        exponents: Vec<u32>,
        #[arg(long, default_value_t = 0)]
        theta: u32,
        #[command(flatten)]
        si: SiArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum TableCmd {
    Mgn,
    Slopes,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    #[arg(long, default_value_t = 1)]
    pub smin: i64,
    #[arg(long, default_value_t = 3)]
    pub smax: i64,
    #[arg(long, default_value_t = 0)]
    pub imin: i64,
    #[arg(long, default_value_t = 2)]
    pub imax: i64,
    /// Skip the test-curve solver entirely.
    #[arg(long)]
    pub no_solve: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.jobs {
        if n == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::dispatch(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            ExitCode::from(if outcome.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
