//! Command-line front end: build the invariant function for a root system,
//! expand coefficient tables, run the verification battery, inspect the
//! p-part polynomial, and export global Dirichlet-series coefficients.
//!
//! Exit status: 0 success / all checks pass, 1 check failure, 2 usage error,
//! 3 budget or cap exceeded.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wmds::checks::{self, BatteryOptions, Budget, CheckReport};
use wmds::error::Error;
use wmds::invariant::{BuildOptions, InvariantFunction};
use wmds::io::{self, LoadedInvariant};
use wmds::qcoeffs::HContext;
use wmds::ratfunc::RatFunc;
use wmds::rootsys::Family;

#[derive(Parser)]
#[command(name = "wmds", version, about = "quadratic Weyl group multiple Dirichlet series, exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SystemArgs {
    /// Root system family
    #[arg(long = "type", value_parser = parse_family)]
    family: Family,
    /// Rank
    #[arg(long)]
    rank: usize,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.chars()
        .next()
        .and_then(Family::from_letter)
        .filter(|_| s.len() == 1)
        .ok_or_else(|| format!("unknown family '{s}', expected A, D, or E"))
}

#[derive(Args)]
struct BudgetArgs {
    /// Wall-clock budget in seconds; exact checks degrade to series checks
    /// once it is spent
    #[arg(long)]
    budget: Option<u64>,
    /// Weyl group enumeration cap
    #[arg(long, default_value_t = 1_000_000)]
    weyl_cap: u64,
    /// Term budget for the exact sum over the Weyl group
    #[arg(long, default_value_t = 1_500_000)]
    term_budget: usize,
}

impl BudgetArgs {
    fn build_options(&self) -> BuildOptions {
        BuildOptions {
            weyl_cap: self.weyl_cap,
            term_budget: self.term_budget,
            force_series: false,
            wall_budget_secs: self.budget,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the invariant rational function and write it to a file
    Build {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Series depth stored when the build degrades to series mode
        #[arg(long, default_value_t = 8)]
        max_deg: u32,
        /// Output path
        #[arg(long)]
        out: PathBuf,
    },
    /// Expand a built function into a coefficient table CSV
    Expand {
        /// Built-function file (from `build`)
        #[arg(long = "in")]
        input: PathBuf,
        /// Total degree of the table
        #[arg(long, default_value_t = 8)]
        max_deg: u32,
        /// Evaluate coefficients at this integer q instead of symbolically
        #[arg(long)]
        q: Option<i64>,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification battery for a built function
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma-separated check-name prefixes to run (default: all)
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write the machine-readable report here as well
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the p-part polynomial and its stable form
    Ppart {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export global coefficients H(m_1, ..., m_r) over odd tuples
    Coeffs {
        #[command(flatten)]
        system: SystemArgs,
        /// Upper bound for each m_i
        #[arg(long, default_value_t = 9)]
        bound: u64,
        /// Table depth for prime-power blocks
        #[arg(long, default_value_t = 12)]
        max_deg: u32,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let args = match expand_config_args(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// `--config FILE` splices whitespace-separated tokens from FILE into the
/// argument list at the position of the flag; `#` starts a comment. The file
/// mirrors the flags one-to-one, so a stored invocation round-trips.
fn expand_config_args(args: Vec<String>) -> std::io::Result<Vec<String>> {
    let mut out = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(arg) = it.next() {
        if arg == "--config" {
            let path = it.next().ok_or_else(|| {
                std::io::Error::new(std::io::ErrorKind::InvalidInput, "--config needs a path")
            })?;
            let body = std::fs::read_to_string(&path)?;
            for line in body.lines() {
                let line = line.split('#').next().unwrap_or("");
                out.extend(line.split_whitespace().map(|s| s.to_string()));
            }
        } else {
            out.push(arg);
        }
    }
    Ok(out)
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::WeylCapExceeded { .. }
        | Error::TermBudgetExceeded { .. }
        | Error::WallBudgetExceeded { .. } => 3,
        Error::InvalidRootSystem { .. } | Error::Parse(_) | Error::Io(_) => 2,
        _ => 2,
    }
}

fn out_writer(path: &Option<PathBuf>) -> wmds::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn run(cli: Cli) -> wmds::Result<ExitCode> {
    match cli.command {
        Command::Build { system, budget, max_deg, out } => {
            let inv = InvariantFunction::build(system.family, system.rank, &budget.build_options())?;
            let mut w = BufWriter::new(File::create(&out)?);
            io::write_invariant(&mut w, &inv, max_deg)?;
            w.flush()?;
            let mode = if inv.is_exact() { "exact" } else { "series" };
            eprintln!(
                "built {} ({} Weyl elements, {} mode) -> {}",
                inv.label(),
                inv.weyl.len(),
                mode,
                out.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Expand { input, max_deg, q, out } => {
            let loaded = io::read_invariant(BufReader::new(File::open(&input)?))?;
            let table = match &loaded {
                LoadedInvariant::Exact { f, rs, .. } => {
                    let series = wmds::series::series_expand(f, max_deg)?;
                    wmds::series::CoeffTable::from_series(rs.rank, &series)?
                }
                LoadedInvariant::Series { table, .. } => {
                    if table.max_deg < max_deg {
                        return Err(Error::DegreeShortfall {
                            needed: max_deg,
                            have: table.max_deg,
                        });
                    }
                    let mut shallow = table.clone();
                    shallow.max_deg = max_deg;
                    shallow.entries.retain(|k, _| k.iter().sum::<u32>() <= max_deg);
                    shallow
                }
            };
            let qv = q.map(num_bigint::BigInt::from);
            let mut w = out_writer(&out)?;
            table.write_csv(&mut w, qv.as_ref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { input, checks: selection, budget, out } => {
            let loaded = io::read_invariant(BufReader::new(File::open(&input)?))?;
            let inv = io::rebuild(&loaded, &budget.build_options())?;
            let opts = BatteryOptions { budget: Budget::new(budget.budget), ..Default::default() };
            let mut reports = checks::system_battery(&inv, &opts);
            reports.push(match_loaded_against_build(&loaded, &inv));
            if inv.ctx.rs.family == Family::A && inv.rank() == 3 {
                let a2 = InvariantFunction::build(Family::A, 2, &budget.build_options())?;
                reports.push(checks::check_convolution(&inv, &a2, opts.series_deg));
            }
            if let Some(sel) = &selection {
                reports.retain(|r| sel.iter().any(|s| r.name.starts_with(s.as_str())));
            }
            reports.sort_by(|a, b| (&a.name, &a.params).cmp(&(&b.name, &b.params)));
            let mut failures = 0usize;
            for r in &reports {
                println!("{}", r.line());
                if !r.pass {
                    failures += 1;
                }
            }
            println!("{} checks, {} failures", reports.len(), failures);
            if let Some(path) = out {
                let mut w = BufWriter::new(File::create(path)?);
                write_report(&mut w, &reports)?;
            }
            Ok(if failures == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Ppart { input, out } => {
            let loaded = io::read_invariant(BufReader::new(File::open(&input)?))?;
            match loaded {
                LoadedInvariant::Exact { rs, ppart, .. } => {
                    let stable = wmds::invariant::stable_form_of(&ppart);
                    let mut w = out_writer(&out)?;
                    writeln!(w, "# p-part polynomial f*D for {}", rs.label())?;
                    io::write_poly(&mut w, "ppart", &ppart)?;
                    writeln!(w, "# after x_i -> x_i sqrt(q)")?;
                    io::write_poly(&mut w, "stable", &stable)?;
                    writeln!(w, "# terms {}", ppart.num_terms())?;
                    Ok(ExitCode::SUCCESS)
                }
                LoadedInvariant::Series { .. } => Err(Error::Certification(
                    "p-part requires an exact build (series-mode file)",
                )),
            }
        }
        Command::Coeffs { system, bound, max_deg, budget, out } => {
            let inv = InvariantFunction::build(system.family, system.rank, &budget.build_options())?;
            let hctx = HContext::new(&inv, max_deg)?;
            let mut w = out_writer(&out)?;
            hctx.write_csv(bound, &mut w)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// The file's function must agree with a fresh construction: a tampered or
/// stale file fails here with a witness.
fn match_loaded_against_build(loaded: &LoadedInvariant, inv: &InvariantFunction) -> CheckReport {
    let sys = inv.label();
    match (loaded, &inv.exact) {
        (LoadedInvariant::Exact { f, .. }, Some(exact)) => {
            if f.eq_cross(&exact.f) {
                ok_report("construction-match", &sys, "file agrees with a fresh build")
            } else {
                fail_report(
                    "construction-match",
                    &sys,
                    witness_for(f, &exact.f),
                )
            }
        }
        (LoadedInvariant::Series { table, .. }, _) => match inv.coeff_table(table.max_deg) {
            Ok(fresh) => {
                let same = fresh.entries == table.entries;
                if same {
                    ok_report("construction-match", &sys, "stored table agrees with a fresh build")
                } else {
                    fail_report("construction-match", &sys, "stored table differs".into())
                }
            }
            Err(e) => fail_report("construction-match", &sys, e.to_string()),
        },
        (LoadedInvariant::Exact { .. }, None) => fail_report(
            "construction-match",
            &sys,
            "file is exact but the rebuild degraded to series mode".into(),
        ),
    }
}

fn witness_for(lhs: &RatFunc, rhs: &RatFunc) -> String {
    let diff = lhs.num().mul(rhs.den()).sub(&rhs.num().mul(lhs.den()));
    format!("cross-multiplied difference has {} terms", diff.num_terms())
}

fn ok_report(name: &str, system: &str, params: &str) -> CheckReport {
    CheckReport {
        name: name.into(),
        system: system.into(),
        params: params.into(),
        pass: true,
        degraded: false,
        witness: None,
        note: None,
    }
}

fn fail_report(name: &str, system: &str, witness: String) -> CheckReport {
    CheckReport {
        name: name.into(),
        system: system.into(),
        params: String::new(),
        pass: false,
        degraded: false,
        witness: Some(witness),
        note: None,
    }
}

fn write_report<W: Write>(w: &mut W, reports: &[CheckReport]) -> wmds::Result<()> {
    for r in reports {
        writeln!(w, "check {}", r.name)?;
        writeln!(w, "system {}", r.system)?;
        if !r.params.is_empty() {
            writeln!(w, "params {}", r.params)?;
        }
        writeln!(w, "verdict {}", if r.pass { "pass" } else { "fail" })?;
        if r.degraded {
            writeln!(w, "degraded true")?;
        }
        if let Some(wit) = &r.witness {
            writeln!(w, "witness {}", wit.replace('\n', " | "))?;
        }
        if let Some(note) = &r.note {
            writeln!(w, "note {note}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}
