//! Command-line front end.
//!
//! Results go to stdout as `key=value` lines; diagnostics and progress go to
//! stderr. Exit codes: 0 when the checked claim holds, 1 when it is refuted,
//! 2 when nothing could be decided (bad input, budget exhausted).

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use crate::bounds::bounds_for;
use crate::certificate::{
    check_certificate, find_multipliers, format_rationals, parse_multipliers, CertificateCheck,
};
use crate::format::{parse_scheme, serialize_scheme};
use crate::generators::{
    generate_binary, generate_helper, generate_particular_coin, generate_refined_with_stats,
    generate_trivial,
};
use crate::model::Scheme;
use crate::search::{compute_omni_with_progress, SearchBudget, SearchError};
use crate::verifier::{
    count_consistent_with, identifies_coin_with, VerifyOptions, DEFAULT_NODE_CAP,
};

/// Largest `n` that `gen` verifies exhaustively by default.
const SELF_VERIFY_LIMIT: u32 = 14;

#[derive(Debug, Parser)]
#[command(
    name = "coin-weighing",
    version,
    about = "Balance-scale proofs for coins weighing 1..n grams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a scheme proves every coin, or one coin with --coin.
    Verify {
        /// Scheme file, or `-` for stdin.
        file: PathBuf,
        #[arg(long)]
        coin: Option<u32>,
        /// Stop counting consistent assignments at this many.
        #[arg(long, default_value_t = 2)]
        limit: u64,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        node_cap: u64,
    },
    /// Construct a scheme.
    Gen {
        #[arg(long, value_enum)]
        strategy: Strategy,
        #[arg(long)]
        n: u32,
        /// Target coin for `--strategy coin`.
        #[arg(long)]
        t: Option<u32>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        no_verify: bool,
    },
    /// Compute the least number of weighings by exhaustive search.
    Omni {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        max_k: Option<usize>,
        #[arg(long)]
        max_designs: Option<u64>,
        /// Wall-clock limit in seconds.
        #[arg(long)]
        time_limit: Option<u64>,
        #[arg(long)]
        allow_one_sided: bool,
    },
    /// Rearrangement certificates for all-balanced schemes.
    Cert {
        #[command(subcommand)]
        action: CertAction,
    },
    /// Print lower and upper bounds.
    Bounds {
        #[arg(long)]
        n: u64,
    },
}

#[derive(Debug, Subcommand)]
enum CertAction {
    Check {
        file: PathBuf,
        /// Comma-separated positive integers or `p/q` fractions.
        #[arg(long)]
        multipliers: String,
    },
    Find {
        file: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Strategy {
    Trivial,
    Helper,
    Binary,
    Refined,
    Coin,
}

/// A failure that leaves the claim undecided.
struct Undecided(String);

impl<E: std::fmt::Display> From<E> for Undecided {
    fn from(e: E) -> Self {
        Undecided(e.to_string())
    }
}

type Outcome = Result<bool, Undecided>;

fn read_scheme(path: &PathBuf) -> Result<Scheme, Undecided> {
    let bytes = if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        buf
    } else {
        fs::read(path).map_err(|e| Undecided(format!("{}: {e}", path.display())))?
    };
    parse_scheme(&bytes).map_err(|e| Undecided(format!("{}: {e}", path.display())))
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = write!(err, "{}", e.render());
            return 2;
        }
        Err(e) => {
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    let outcome = match cli.command {
        Command::Verify {
            file,
            coin,
            limit,
            node_cap,
        } => verify(out, &file, coin, limit, node_cap),
        Command::Gen {
            strategy,
            n,
            t,
            output,
            no_verify,
        } => gen(out, err, strategy, n, t, output, no_verify),
        Command::Omni {
            n,
            jobs,
            max_k,
            max_designs,
            time_limit,
            allow_one_sided,
        } => {
            let budget = SearchBudget {
                max_k,
                max_designs,
                time_limit: time_limit.map(Duration::from_secs),
                jobs,
                allow_one_sided,
            };
            omni(out, err, n, &budget)
        }
        Command::Cert { action } => match action {
            CertAction::Check { file, multipliers } => cert_check(out, &file, &multipliers),
            CertAction::Find { file } => cert_find(out, &file),
        },
        Command::Bounds { n } => bounds(out, n),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Undecided(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn verify(
    out: &mut dyn Write,
    file: &PathBuf,
    coin: Option<u32>,
    limit: u64,
    node_cap: u64,
) -> Outcome {
    let scheme = read_scheme(file)?;
    writeln!(out, "n={}", scheme.n())?;
    writeln!(out, "weighings={}", scheme.len())?;
    if let Some(t) = coin {
        let r = identifies_coin_with(&scheme, t, node_cap)?;
        writeln!(out, "coin={t}")?;
        writeln!(out, "pinned={}", r.pinned)?;
        if let Some(c) = &r.counterexample {
            writeln!(out, "counterexample={c}")?;
        }
        writeln!(out, "nodes={}", r.nodes_explored)?;
        return Ok(r.pinned);
    }
    let r = count_consistent_with(&scheme, &VerifyOptions { limit, node_cap })?;
    writeln!(out, "consistent_count={}", r.consistent_count)?;
    writeln!(out, "unique={}", r.unique)?;
    writeln!(out, "identity_consistent={}", r.identity_consistent)?;
    writeln!(out, "identifies_all={}", r.identifies_all())?;
    if let Some(w) = &r.second_witness {
        writeln!(out, "witness={w}")?;
    }
    writeln!(out, "nodes={}", r.nodes_explored)?;
    Ok(r.identifies_all())
}

fn gen(
    out: &mut dyn Write,
    err: &mut dyn Write,
    strategy: Strategy,
    n: u32,
    t: Option<u32>,
    output: Option<PathBuf>,
    no_verify: bool,
) -> Outcome {
    let scheme = match strategy {
        Strategy::Trivial => generate_trivial(n)?,
        Strategy::Helper => generate_helper(n)?.0,
        Strategy::Binary => generate_binary(n)?,
        Strategy::Refined => {
            let (scheme, stats) = generate_refined_with_stats(n)?;
            writeln!(
                err,
                "refined: helper_weighings={} rounds={} extra_weighings={}",
                stats.helper_weighings, stats.rounds, stats.extra_weighings
            )?;
            scheme
        }
        Strategy::Coin => {
            let t = t.ok_or_else(|| Undecided("--strategy coin needs --t".into()))?;
            generate_particular_coin(n, t)?
        }
    };
    let text = serialize_scheme(&scheme);
    match &output {
        Some(path) => {
            fs::write(path, &text).map_err(|e| Undecided(format!("{}: {e}", path.display())))?
        }
        None => out.write_all(&text)?,
    }

    if no_verify || n > SELF_VERIFY_LIMIT {
        return Ok(true);
    }
    let ok = match (strategy, t) {
        (Strategy::Coin, Some(t)) => identifies_coin_with(&scheme, t, DEFAULT_NODE_CAP)?.pinned,
        (Strategy::Helper, _) => {
            let (_, set) = generate_helper(n)?;
            let mut all = true;
            for &c in &set.coins {
                all &= identifies_coin_with(&scheme, c, DEFAULT_NODE_CAP)?.pinned;
            }
            all
        }
        _ => count_consistent_with(&scheme, &VerifyOptions::default())?.identifies_all(),
    };
    writeln!(
        err,
        "self-check: {}",
        if ok { "verified" } else { "FAILED" }
    )?;
    Ok(ok)
}

fn omni(out: &mut dyn Write, err: &mut dyn Write, n: u32, budget: &SearchBudget) -> Outcome {
    let result = compute_omni_with_progress(n, budget, |level| {
        let _ = writeln!(
            err,
            "level k={} designs={} found={} elapsed_ms={}",
            level.k,
            level.designs_examined,
            level.found,
            level.elapsed.as_millis()
        );
    });
    match result {
        Ok(outcome) => {
            writeln!(out, "a({})={}", n, outcome.a_of_n)?;
            writeln!(out, "designs_examined={}", outcome.designs_examined)?;
            for w in outcome.witness.weighings() {
                writeln!(out, "witness={w}")?;
            }
            Ok(true)
        }
        Err(SearchError::BudgetExhausted {
            n,
            proven_greater_than,
        }) => {
            writeln!(out, "a({n})>{proven_greater_than}")?;
            Err(Undecided(format!("search budget exhausted for n = {n}")))
        }
        Err(e) => Err(e.into()),
    }
}

fn cert_check(out: &mut dyn Write, file: &PathBuf, multipliers: &str) -> Outcome {
    let scheme = read_scheme(file)?;
    let lambda: Vec<BigRational> = parse_multipliers(multipliers)?;
    let check = check_certificate(&scheme, &lambda)?;
    let cert = check.certificate();
    writeln!(out, "accepted={}", check.is_accepted())?;
    writeln!(out, "multipliers={}", format_rationals(&cert.multipliers))?;
    writeln!(out, "coefficients={}", format_rationals(&cert.coefficients))?;
    if let CertificateCheck::Rejected { reason, .. } = &check {
        writeln!(out, "reason={reason}")?;
    }
    Ok(check.is_accepted())
}

fn cert_find(out: &mut dyn Write, file: &PathBuf) -> Outcome {
    let scheme = read_scheme(file)?;
    match find_multipliers(&scheme)? {
        Some(found) => {
            let lambda: Vec<BigRational> =
                found.into_iter().map(BigRational::from_integer).collect();
            let check = check_certificate(&scheme, &lambda)?;
            writeln!(out, "found=true")?;
            writeln!(out, "multipliers={}", format_rationals(&lambda))?;
            writeln!(
                out,
                "coefficients={}",
                format_rationals(&check.certificate().coefficients)
            )?;
            writeln!(out, "accepted={}", check.is_accepted())?;
            Ok(check.is_accepted())
        }
        None => {
            writeln!(out, "found=false")?;
            Ok(false)
        }
    }
}

fn bounds(out: &mut dyn Write, n: u64) -> Outcome {
    if n == 0 {
        return Err(Undecided("n must be at least 1".into()));
    }
    let b = bounds_for(n);
    writeln!(out, "n={}", b.n)?;
    writeln!(out, "natural_lower={}", b.natural_lower)?;
    writeln!(out, "conditional_lower={}", b.conditional_lower)?;
    writeln!(out, "trivial_upper={}", b.trivial_upper)?;
    writeln!(out, "binary_upper={}", b.binary_upper)?;
    writeln!(out, "refined_upper={}", b.refined_upper)?;
    match b.known_exact {
        Some(a) => writeln!(out, "known_exact={a}")?,
        None => writeln!(out, "known_exact=unknown")?,
    }
    Ok(true)
}
