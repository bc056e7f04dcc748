use clap::{Args, Parser, Subcommand, ValueEnum};
use rootloci::general_solver::GeneralOptions;
use rootloci::{Basis, BinaryForm, Partition};
use rootloci_cli::{self as render, Format};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "rootloci", version, about = "Distance optimization over multiple root loci of binary forms")]
struct Cli {
    /// Output format. JSON keeps full precision, the others print 6 significant digits.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    /// Worker threads for multi-start solves (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Monomial,
    Scaled,
}

impl From<BasisArg> for Basis {
    fn from(b: BasisArg) -> Self {
        match b {
            BasisArg::Monomial => Basis::Monomial,
            BasisArg::Scaled => Basis::Scaled,
        }
    }
}

#[derive(Args)]
struct FormArgs {
    /// Coefficients of x^0 y^n, x^1 y^(n-1), ..., x^n y^0 (commas or spaces; `p/q` allowed).
    #[arg(long, allow_hyphen_values = true)]
    coeffs: String,
    /// Basis the coefficients are written in.
    #[arg(long, value_enum, default_value_t = BasisArg::Monomial)]
    basis: BasisArg,
}

impl FormArgs {
    fn form(&self) -> rootloci::Result<BinaryForm> {
        BinaryForm::parse(&self.coeffs, self.basis.into())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Degree, dual degree, ED degrees and polar classes of a partition.
    Degrees {
        /// Partition, e.g. `3,2` or `1^3 4`.
        partition: String,
    },
    /// Real critical points of the distance from h to a multiple root locus.
    Solve {
        #[command(flatten)]
        form: FormArgs,
        /// Partition of the locus.
        #[arg(long, conflicts_with = "hook", required_unless_present = "hook")]
        partition: Option<String>,
        /// Hook locus: one root of multiplicity A, the others simple.
        #[arg(long, value_name = "A")]
        hook: Option<usize>,
        /// Starts for the general (non-hook) solver.
        #[arg(long, default_value_t = 200)]
        starts: usize,
        /// Seed for the general solver.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compares the real rank of h with the generic complex rank.
    Realrank {
        #[command(flatten)]
        form: FormArgs,
        /// Relative tolerance of the advisory boundary test.
        #[arg(long, default_value_t = rootloci::realrank::BOUNDARY_TOL)]
        tol: f64,
    },
    /// Audits the embedded degree table against closed-form formulas.
    VerifyTable {
        /// Restrict to forms of degree N (2 to 7).
        n: Option<usize>,
    },
    /// Applies the operator L^(k) exactly and prints the result.
    Lop {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        k: usize,
    },
}

/// Output text and whether the command succeeded.
fn run(cli: Cli) -> rootloci::Result<(String, bool)> {
    let fmt = cli.format;
    match cli.command {
        Command::Degrees { partition } => Ok((render::degrees(&partition.parse()?, fmt), true)),
        Command::Solve { form, partition, hook, starts, seed } => {
            let h = form.form()?;
            let lambda = match (partition, hook) {
                (Some(p), _) => p.parse()?,
                (None, Some(a)) => Partition::hook(h.degree(), a)?,
                (None, None) => unreachable!("clap requires --partition or --hook"),
            };
            let opts = GeneralOptions { starts, seed, ..Default::default() };
            Ok((render::solve(&h, &lambda, &opts, fmt)?, true))
        }
        Command::Realrank { form, tol } => Ok((render::realrank(&form.form()?, tol, fmt)?, true)),
        Command::VerifyTable { n } => render::table_audit(n, fmt),
        Command::Lop { form, k } => Ok((render::lop(&form.form()?, k, form.basis.into(), fmt)?, true)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot configure {t} threads: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(cli) {
        Ok((out, ok)) => {
            print!("{out}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
