//! Command line for network configuration inequalities.
//!
//! Exit codes: 0 success / satisfied / not refuted; 1 usage error;
//! 2 input or validation error; 3 a violation, incompatibility, or
//! entanglement was found (a signal result, not a failure).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use netcfg::dist::{parse_distribution, serialize_distribution};
use netcfg::error::Error;
use netcfg::experiments::{self, Experiment, InequalityId};
use netcfg::fis::{
    facet_weights, fis_decomposed, fis_family, fis_greedy, fis_optimal, parse_rational,
    FacetVariant, FamilyVariant, FractionalWeights,
};
use netcfg::inequality::{check_config, DEFAULT_TOL};
use netcfg::quantum::{born_distribution, parse_bases, parse_state};
use netcfg::topology::{parse_network, BuiltinKind, NetworkTopology};
use netcfg::witness::{
    compatibility_check, witness_entanglement, Compatibility, Overall, Strategy,
};

#[derive(Parser)]
#[command(
    name = "netcfg",
    version,
    about = "Configuration inequalities for networks of independent sources",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize fractional-independent-set weights for a network
    Fis(FisArgs),
    /// Compute the exact Born distribution of a network state
    Simulate(SimulateArgs),
    /// Check a distribution against a configuration inequality
    Check(CheckArgs),
    /// Witness multipartite entanglement of a pure network state
    Witness(WitnessArgs),
    /// Test whether a distribution is compatible with a candidate topology
    Compat(CompatArgs),
    /// Scan (theta, v) achievable regions for the noisy examples
    Scan(ScanArgs),
}

#[derive(Args)]
struct FisArgs {
    /// Network document (JSON)
    #[arg(long)]
    network: PathBuf,
    /// greedy | decompose | optimal | family | facet
    #[arg(long, default_value = "greedy")]
    algorithm: String,
    /// Family parameter m (family algorithm)
    #[arg(long)]
    m: Option<u64>,
    /// Family parameter k (family algorithm)
    #[arg(long)]
    k: Option<u64>,
    /// a | b (family), odd | even | hub | leaves (facet)
    #[arg(long)]
    variant: Option<String>,
    /// Per-source assignment document (decompose algorithm)
    #[arg(long)]
    assignments: Option<PathBuf>,
    /// Comma-separated rational objective (optimal algorithm)
    #[arg(long)]
    objective: Option<String>,
}

#[derive(Args)]
struct SimulateArgs {
    /// State document (JSON)
    #[arg(long)]
    state: PathBuf,
    /// Basis document (JSON); computational bases when omitted
    #[arg(long)]
    basis: Option<PathBuf>,
    /// Output distribution document
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct CheckArgs {
    /// Distribution document (JSON)
    #[arg(long)]
    dist: PathBuf,
    /// Candidate network whose weights to synthesize
    #[arg(long)]
    network: Option<PathBuf>,
    /// Weight-synthesis algorithm when --network is given
    #[arg(long, default_value = "greedy")]
    algorithm: String,
    /// Explicit weights "s1,s2,..." (rationals or decimals)
    #[arg(long)]
    weights: Option<String>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    assignments: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args)]
struct WitnessArgs {
    /// State document (JSON); must be pure
    #[arg(long)]
    state: PathBuf,
    /// Basis document; computational bases when omitted
    #[arg(long)]
    basis: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args)]
struct CompatArgs {
    #[arg(long)]
    dist: PathBuf,
    #[arg(long)]
    network: PathBuf,
    /// greedy | optimal | family | facet
    #[arg(long, default_value = "greedy")]
    strategy: String,
    #[arg(long, default_value_t = 1000)]
    m: u64,
    #[arg(long, default_value_t = 1)]
    k: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args)]
struct ScanArgs {
    /// noisy_ghz | noisy_w | noisy_triangle | noisy_star
    #[arg(long)]
    experiment: String,
    /// Star size (noisy_star only)
    #[arg(long, default_value_t = 4)]
    star_n: usize,
    /// Points per axis
    #[arg(long, default_value_t = 200)]
    grid: usize,
    #[arg(long, default_value_t = 1000)]
    m: u64,
    /// fin1 | fin3
    #[arg(long, default_value = "fin3")]
    inequality: String,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Output CSV path
    #[arg(short, long)]
    output: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprintln!("ERROR:usage:{}", e.kind());
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("ERROR:{}:{e}", e.category());
            ExitCode::from(2)
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Error> {
    Ok(std::fs::read_to_string(path)?)
}

fn parse_weight_list(s: &str) -> Result<FractionalWeights, Error> {
    let weights = s
        .split(',')
        .map(parse_rational)
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(FractionalWeights::user(weights))
}

fn parse_family_variant(v: Option<&str>) -> Result<FamilyVariant, Error> {
    match v.unwrap_or("a") {
        "a" => Ok(FamilyVariant::A),
        "b" => Ok(FamilyVariant::B),
        other => Err(Error::Bounds(format!("unknown family variant `{other}`"))),
    }
}

fn parse_facet_variant(v: Option<&str>, kind: BuiltinKind) -> Result<FacetVariant, Error> {
    match v {
        None => Ok(match kind {
            BuiltinKind::Star => FacetVariant::Hub,
            _ => FacetVariant::OddParties,
        }),
        Some("odd") => Ok(FacetVariant::OddParties),
        Some("even") => Ok(FacetVariant::EvenParties),
        Some("hub") => Ok(FacetVariant::Hub),
        Some("leaves") => Ok(FacetVariant::Leaves),
        Some(other) => Err(Error::Bounds(format!("unknown facet variant `{other}`"))),
    }
}

fn synthesize(
    network: &NetworkTopology,
    algorithm: &str,
    m: Option<u64>,
    k: Option<u64>,
    variant: Option<&str>,
    assignments: Option<&PathBuf>,
    objective: Option<&str>,
) -> Result<FractionalWeights, Error> {
    match algorithm {
        "greedy" => Ok(fis_greedy(network)),
        "optimal" => {
            let obj = objective
                .map(|s| {
                    s.split(',')
                        .map(parse_rational)
                        .collect::<Result<Vec<_>, Error>>()
                })
                .transpose()?;
            fis_optimal(network, obj.as_deref())
        }
        "decompose" => {
            let path = assignments.ok_or_else(|| {
                Error::Bounds("the decompose algorithm needs --assignments".into())
            })?;
            let doc: serde_json::Value =
                serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(e.to_string()))?;
            let per_source = doc
                .get("per_source")
                .and_then(|v| v.as_array())
                .ok_or_else(|| Error::Parse("assignments document needs `per_source`".into()))?
                .iter()
                .map(|entry| {
                    entry
                        .as_array()
                        .ok_or_else(|| Error::Parse("per_source entries must be arrays".into()))?
                        .iter()
                        .map(|w| match w {
                            serde_json::Value::String(s) => parse_rational(s),
                            serde_json::Value::Number(x) => {
                                parse_rational(&format!("{:.12}", x.as_f64().unwrap_or(f64::NAN)))
                            }
                            other => Err(Error::Parse(format!("bad weight {other}"))),
                        })
                        .collect::<Result<Vec<_>, Error>>()
                })
                .collect::<Result<Vec<_>, Error>>()?;
            fis_decomposed(network, &per_source)
        }
        "family" => {
            let (kind, n, arity) = network
                .classify()
                .ok_or_else(|| Error::Bounds("family weights need a recognized layout".into()))?;
            let m = m.unwrap_or(1000);
            let k = k.unwrap_or(1);
            match kind {
                BuiltinKind::Complete => {
                    fis_family(BuiltinKind::Complete, n, arity as u64, 1, FamilyVariant::A)
                }
                BuiltinKind::SingleSource => Err(Error::Bounds(
                    "single-source networks take uniform weights; use --weights".into(),
                )),
                _ => fis_family(kind, n, m, k, parse_family_variant(variant)?),
            }
        }
        "facet" => {
            let (kind, n, _) = network
                .classify()
                .ok_or_else(|| Error::Bounds("facet weights need a recognized layout".into()))?;
            facet_weights(kind, n, parse_facet_variant(variant, kind)?)
        }
        other => Err(Error::Bounds(format!("unknown algorithm `{other}`"))),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Fis(args) => {
            let network = parse_network(&read(&args.network)?)?;
            let weights = synthesize(
                &network,
                &args.algorithm,
                args.m,
                args.k,
                args.variant.as_deref(),
                args.assignments.as_ref(),
                args.objective.as_deref(),
            )?;
            println!("{}", weights.render());
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate(args) => {
            let state = parse_state(&read(&args.state)?)?;
            let bases = match &args.basis {
                Some(path) => parse_bases(&read(path)?, &state)?,
                None => state.computational_bases()?,
            };
            let d = born_distribution(&state, &bases)?;
            std::fs::write(&args.output, serialize_distribution(&d))?;
            println!("wrote {} outcomes to {}", d.len(), args.output.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Check(args) => {
            let d = parse_distribution(&read(&args.dist)?)?;
            let weights = match (&args.weights, &args.network) {
                (Some(w), None) => parse_weight_list(w)?,
                (None, Some(path)) => {
                    let network = parse_network(&read(path)?)?;
                    synthesize(
                        &network,
                        &args.algorithm,
                        args.m,
                        args.k,
                        args.variant.as_deref(),
                        args.assignments.as_ref(),
                        None,
                    )?
                }
                _ => {
                    return Err(Error::Bounds(
                        "check needs exactly one of --weights or --network".into(),
                    ))
                }
            };
            let report = check_config(&d, &weights, args.tol)?;
            print!("{}", report.render());
            println!();
            Ok(if report.violated {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Witness(args) => {
            let state = parse_state(&read(&args.state)?)?;
            let bases = match &args.basis {
                Some(path) => Some(parse_bases(&read(path)?, &state)?),
                None => None,
            };
            let verdict = witness_entanglement(&state, bases.as_deref(), args.tol)?;
            println!("{}", verdict.render());
            Ok(match verdict.overall {
                Overall::Entangled => ExitCode::from(3),
                Overall::Inconclusive => ExitCode::SUCCESS,
            })
        }
        Command::Compat(args) => {
            let d = parse_distribution(&read(&args.dist)?)?;
            let network = parse_network(&read(&args.network)?)?;
            let strategy = match args.strategy.as_str() {
                "greedy" => Strategy::Greedy,
                "optimal" => Strategy::Optimal,
                "family" => Strategy::Family {
                    m: args.m,
                    k: args.k,
                },
                "facet" => Strategy::Facet,
                other => return Err(Error::Bounds(format!("unknown strategy `{other}`"))),
            };
            let verdict = compatibility_check(&d, &network, strategy, args.tol)?;
            println!("weights: {}", verdict.weights.render());
            println!("{}", verdict.render());
            Ok(match verdict.conclusion {
                Compatibility::Incompatible => ExitCode::from(3),
                Compatibility::NotRefuted => ExitCode::SUCCESS,
            })
        }
        Command::Scan(args) => {
            let experiment = match args.experiment.as_str() {
                "noisy_ghz" => Experiment::NoisyGhz,
                "noisy_w" => Experiment::NoisyW,
                "noisy_triangle" => Experiment::NoisyTriangle,
                "noisy_star" => Experiment::NoisyStar { n: args.star_n },
                other => return Err(Error::Bounds(format!("unknown experiment `{other}`"))),
            };
            let inequality = match args.inequality.as_str() {
                "fin1" => InequalityId::Fin1,
                "fin3" => InequalityId::Fin3,
                other => return Err(Error::Bounds(format!("unknown inequality `{other}`"))),
            };
            let table = experiments::region_scan(
                experiment,
                (args.grid, args.grid),
                args.m,
                inequality,
                args.tol,
            )?;
            experiments::emit_csv(&table, &args.output)?;
            println!(
                "wrote {} rows to {}",
                table.rows.len(),
                args.output.display()
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}
