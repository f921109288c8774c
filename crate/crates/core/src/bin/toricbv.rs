use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use toricbv::bv::existence;
use toricbv::fanfile::{corpus, corpus_fan, parse_fan};
use toricbv::linalg::parse_rat;
use toricbv::oracles::DEFAULT_SEED;
use toricbv::report::{full_check, BracketSummary, BvSummary, PolytopeSummary, Report, Timer};
use toricbv::{schouten, wedge_fields, CharacterVector, Error, Fan, PolyvectorSpace, Variant, WeightedPolyvector};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Human,
    Machine,
}

/// Polyvector fields and BV operators on smooth complete toric varieties.
///
/// FAN is a path to a JSON fan document, `-` or nothing for standard input,
/// or `@NAME` for a bundled fan (P1, P2, P3, P1xP1, F0..F3, dP6, blowup16).
#[derive(Debug, Parser)]
#[command(name = "toricbv", version)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "human")]
    format: Format,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Append wall-clock timings (outside the stable report fields).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Primitivity, smoothness and completeness.
    Validate { fan: Option<PathBuf> },
    /// Lattice points, strata and lattice vertices of the weight polytope.
    Polytope { fan: Option<PathBuf> },
    /// Dimension of the space of k-vector fields for each k.
    Dims { fan: Option<PathBuf> },
    /// The weight-block basis of every degree.
    Basis { fan: Option<PathBuf> },
    /// Product and bracket of two elements such as `2*chi(1,0)*e1 - chi(0,0)*e1^e2`.
    Bracket {
        a: String,
        b: String,
        fan: Option<PathBuf>,
        /// Work in the torus algebra (no holomorphicity constraint).
        #[arg(long)]
        torus: bool,
    },
    /// Existence, solution space and operator matrices.
    Bv {
        fan: Option<PathBuf>,
        /// Use this delta (comma-separated rationals) instead of the sampled ones.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        delta: Option<Vec<String>>,
    },
    /// Full oracle and identity suite.
    Check { fan: Option<PathBuf> },
    /// Full suite over every bundled fan.
    Corpus,
}

enum Failure {
    Input(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

fn load(path: &Option<PathBuf>) -> Result<Fan, Error> {
    let text = match path.as_ref().and_then(|p| p.to_str()) {
        Some(name) if name.starts_with('@') => {
            return corpus_fan(&name[1..]).ok_or_else(|| Error::Input(format!("no bundled fan named {}", &name[1..])));
        }
        Some(p) if p != "-" => std::fs::read_to_string(p).map_err(|e| Error::Input(format!("{p}: {e}")))?,
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Input(format!("stdin: {e}")))?;
            s
        }
    };
    parse_fan(&text)
}

fn space_of(fan: &Fan, report: &mut Report) -> Result<Option<PolyvectorSpace>, Error> {
    let validation = fan.validate()?;
    let ok = validation.is_valid();
    report.validation = Some(validation);
    if ok { PolyvectorSpace::new(fan).map(Some) } else { Ok(None) }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    let mut timer = Timer::new(cli.timings);
    let mut report = match &cli.command {
        Command::Validate { fan } => {
            let fan = load(fan)?;
            let mut r = Report::for_fan(&fan);
            r.validation = Some(timer.time("validate", || fan.validate())?);
            r
        }
        Command::Polytope { fan } | Command::Dims { fan } | Command::Basis { fan } => {
            let fan = load(fan)?;
            let mut r = Report::for_fan(&fan);
            if let Some(space) = timer.time("algebra", || space_of(&fan, &mut r))? {
                match &cli.command {
                    Command::Polytope { .. } => r.polytope = Some(PolytopeSummary::of(&space)),
                    Command::Dims { .. } => r.dimensions = Some(space.dims()),
                    _ => {
                        r.dimensions = Some(space.dims());
                        r.basis = Some(
                            space
                                .graded_basis()
                                .degrees
                                .iter()
                                .map(|d| d.iter().map(|(w, a)| format!("chi{w} * {a}")).collect())
                                .collect(),
                        );
                    }
                }
            }
            r
        }
        Command::Bracket { a, b, fan, torus } => {
            let fan = load(fan)?;
            let mut r = Report::for_fan(&fan);
            let variant = if *torus { Variant::Torus } else { Variant::Toric };
            let x = WeightedPolyvector::parse(a, fan.dim(), variant)?;
            let y = WeightedPolyvector::parse(b, fan.dim(), variant)?;
            if !*torus {
                let Some(space) = space_of(&fan, &mut r)? else {
                    return Ok(r);
                };
                for (label, e) in [("first", &x), ("second", &y)] {
                    if !space.contains(e) {
                        return Err(Error::NotHolomorphic(format!("{label} operand {e}")).into());
                    }
                }
            }
            r.bracket = Some(BracketSummary {
                a: x.to_string(),
                b: y.to_string(),
                product: wedge_fields(&x, &y)?.to_string(),
                bracket: schouten(&x, &y)?.to_string(),
            });
            r
        }
        Command::Bv { fan, delta } => {
            let fan = load(fan)?;
            let mut r = Report::for_fan(&fan);
            if let Some(space) = space_of(&fan, &mut r)? {
                let sol = existence(space.polytope(), space.points())?;
                let deltas = match delta {
                    Some(parts) => {
                        let coords = parts
                            .iter()
                            .map(|p| parse_rat(p.trim()).ok_or_else(|| Error::Input(format!("bad rational `{p}` in --delta"))))
                            .collect::<Result<Vec<_>, _>>()?;
                        if coords.len() != fan.dim() {
                            return Err(Error::DimensionMismatch { expected: fan.dim(), actual: coords.len() }.into());
                        }
                        vec![CharacterVector(coords)]
                    }
                    None => sol.sample_deltas(),
                };
                r.dimensions = Some(space.dims());
                r.bv = Some(timer.time("operators", || BvSummary::of(&space, &sol, &deltas, cli.seed))?);
            }
            r
        }
        Command::Check { fan } => full_check(&load(fan)?, cli.seed, cli.timings)?,
        Command::Corpus => {
            let fans = corpus();
            let reports = fans
                .par_iter()
                .map(|f| full_check(f, cli.seed, cli.timings))
                .collect::<Result<Vec<_>, _>>()?;
            Report { corpus: reports, ..Report::default() }
        }
    };
    if report.timings.is_none() {
        report.timings = timer.finish();
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.format {
                Format::Human => print!("{}", report.render_human()),
                Format::Machine => println!("{}", report.to_json()),
            }
            if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) }
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
