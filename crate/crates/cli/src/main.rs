use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use isolocal_cli::{commands, Exit, Options};

/// Local invariants of p-isogenous elliptic curves over Q.
#[derive(Parser)]
#[command(name = "isolocal", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tate's algorithm and the global minimal model for each input curve.
    Analyze {
        #[command(flatten)]
        common: Common,
    },
    /// Compare predicted and computed local invariants for every pair in a corpus.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Skip the period lattice checks.
        #[arg(long)]
        no_periods: bool,
    },
    /// Period lattices, period ratios, and the Delta and eta-quotient identities.
    Periods {
        #[command(flatten)]
        common: Common,
    },
    /// Print a seeded corpus from the 2- or 3-isogeny family.
    Families {
        /// 2 or 3.
        p: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Bound on |a| and |b|.
        #[arg(long, default_value_t = 100)]
        bound: i64,
    },
}

#[derive(Args)]
struct Common {
    /// Input file with one JSON object per line; stdin when absent or "-".
    input: Option<PathBuf>,
    /// Working precision in bits for the analytic checks.
    #[arg(long, default_value_t = 256)]
    precision: u32,
    /// Number of q-product factors in the eta and Delta checks.
    #[arg(long, default_value_t = 100)]
    terms: usize,
    /// Only report these primes (comma separated).
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    jobs: Option<usize>,
}

impl Common {
    fn options(&self, skip_periods: bool) -> Options {
        Options {
            precision: self.precision,
            terms: self.terms,
            primes: self.primes.clone(),
            jobs: self.jobs,
            skip_periods,
        }
    }

    fn open(&self) -> io::Result<Box<dyn BufRead>> {
        Ok(match &self.input {
            Some(p) if p.as_os_str() != "-" => Box::new(BufReader::new(File::open(p)?)),
            _ => Box::new(io::stdin().lock()),
        })
    }
}

fn run(cli: Cli) -> Exit {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let mut err = io::stderr();
    let opened = |c: &Common, err: &mut io::Stderr| match c.open() {
        Ok(r) => Some(r),
        Err(e) => {
            let _ = writeln!(err, "isolocal: cannot open {}: {e}", c.input.as_ref().map_or("-".into(), |p| p.display().to_string()));
            None
        }
    };
    let exit = match &cli.command {
        Command::Analyze { common } => match opened(common, &mut err) {
            Some(r) => commands::analyze(r, &common.options(true), &mut out, &mut err),
            None => Exit::Input,
        },
        Command::Verify { common, no_periods } => match opened(common, &mut err) {
            Some(r) => commands::verify(r, &common.options(*no_periods), &mut out, &mut err),
            None => Exit::Input,
        },
        Command::Periods { common } => match opened(common, &mut err) {
            Some(r) => commands::periods(r, &common.options(false), &mut out, &mut err),
            None => Exit::Input,
        },
        Command::Families { p, count, seed, bound } => commands::families(*p, *count, *seed, *bound, &mut out, &mut err),
    };
    let _ = out.flush();
    exit
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    ExitCode::from(run(cli).code() as u8)
}
