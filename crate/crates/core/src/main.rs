//! Command-line front end: `check`, `sweep` and `verify`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use frobcheck::cli::{run_check, run_sweep, run_verify, Job, Outcome, Suite, EXIT_ERROR};
use frobcheck::Error;

#[derive(Parser)]
#[command(name = "frobcheck", version, about = "Frobenius and Cartier checks for graded hypersurfaces over 𝔽_p")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// k-F-injectivity verdict at one prime.
    Check(Flags),
    /// Verdicts over several primes.
    Sweep(Flags),
    /// Run a verification suite.
    Verify(Flags),
}

#[derive(Args, Clone)]
struct Flags {
    /// JSON job file; flags override its fields.
    #[arg(long)]
    job: Option<PathBuf>,
    /// Polynomial, e.g. "x*y - z*w".
    #[arg(long)]
    f: Option<String>,
    /// Comma-separated variable names.
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
    /// A single prime.
    #[arg(long, conflicts_with = "primes")]
    p: Option<u64>,
    /// Comma-separated primes.
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    #[arg(long)]
    k: Option<usize>,
    /// Truncation degree for degree-wise checks.
    #[arg(long = "D")]
    degree: Option<i64>,
    /// Iteration levels.
    #[arg(long)]
    nmax: Option<u32>,
    /// cartier, snc, duality, hara or residue.
    #[arg(long)]
    suite: Option<String>,
    /// Number of variables for a suite.
    #[arg(long)]
    n: Option<usize>,
    /// Log divisor for a suite, e.g. "xy".
    #[arg(long = "E")]
    log: Option<String>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print wall-clock timings to stderr.
    #[arg(long)]
    timings: bool,
}

impl Flags {
    fn job(&self) -> Result<Job, Error> {
        let base = match &self.job {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
                Job::from_json(&text)?
            }
            None => Job::default(),
        };
        let suite = self.suite.as_deref().map(str::parse::<Suite>).transpose()?;
        let primes = self.p.map(|p| vec![p]).or_else(|| self.primes.clone());
        Ok(base.overridden_by(Job {
            f: self.f.clone(),
            vars: self.vars.clone(),
            primes,
            k: self.k,
            degree: self.degree,
            n_max: self.nmax,
            suite,
            n: self.n,
            log: self.log.clone(),
        }))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (flags, run): (&Flags, fn(&Job) -> Outcome) = match &cli.command {
        Command::Check(f) => (f, run_check),
        Command::Sweep(f) => (f, run_sweep),
        Command::Verify(f) => (f, run_verify),
    };
    let job = match flags.job() {
        Ok(j) => j,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = flags.jobs {
        pool = pool.num_threads(n.max(1));
    }
    let outcome = match pool.build() {
        Ok(pool) => pool.install(|| run(&job)),
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    let json = outcome.report.to_json();
    match &flags.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(EXIT_ERROR as u8);
            }
        }
        None => print!("{json}"),
    }
    if flags.timings {
        for (k, secs) in &outcome.timings {
            eprintln!("{k}: {secs:.3}s");
        }
    }
    ExitCode::from(outcome.exit_code as u8)
}
