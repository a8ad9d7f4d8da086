//! `umflow`: command-line driver for the verification suites, witness
//! constructors and the dual Ramsey engine.
//!
//! Every verb prints its report as JSON and writes `report.json`, any
//! certificates and `timing.json` to the output directory. Exit status is 0
//! when all checks pass, 1 when a check fails and 2 for usage errors.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use umflow::cantor::{ClopenSet, OrderedPartition, PrefixMap, Word};
use umflow::chains::ChainApprox;
use umflow::partitions::SetPartition;
use umflow::symbolic::Table;

use report::RunReport;

#[derive(Parser)]
#[command(name = "umflow", version, about = "Finite certificates for the dynamics of the Cantor set's homeomorphism group")]
struct Cli {
    /// Directory for report.json, timing.json and certificates.
    #[arg(long, global = true, default_value = "umflow-out")]
    out: PathBuf,
    /// Do not echo the report.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Set partitions of {1,…,n}.
    #[command(subcommand)]
    Partitions(PartitionsCmd),
    /// Clopen sets, prefix maps and partition homogeneity.
    #[command(subcommand)]
    Cantor(CantorCmd),
    /// Chains and induced orders.
    #[command(subcommand)]
    Chains(ChainsCmd),
    /// Sign configurations, tables and the permutation cocycle.
    #[command(subcommand)]
    Symbolic(SymbolicCmd),
    /// Certified witnesses for minimality and proximality.
    #[command(subcommand)]
    Dynamics(DynamicsCmd),
    /// Dual Ramsey search with certificates.
    #[command(subcommand)]
    Ramsey(RamseyCmd),
    /// Table extraction from sign configurations.
    #[command(subcommand)]
    Factor(FactorCmd),
    /// Run the property suites.
    VerifySuite(SuiteArgs),
}

fn rgs(s: &str) -> Result<SetPartition, umflow::Error> {
    SetPartition::from_rgs(s)
}

#[derive(Subcommand)]
enum PartitionsCmd {
    /// List Π(n,k) as restricted-growth strings.
    Enumerate {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
    },
    /// The Stirling number S(n,k).
    Count {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
    },
    /// γ_β: merge the blocks of GAMMA according to BETA.
    Amalgamate {
        #[arg(value_parser = rgs)]
        gamma: SetPartition,
        #[arg(value_parser = rgs)]
        beta: SetPartition,
    },
    /// All k-block coarsenings of ETA.
    Coarsenings {
        #[arg(value_parser = rgs)]
        eta: SetPartition,
        #[arg(short)]
        k: usize,
    },
}

#[derive(Subcommand)]
enum CantorCmd {
    /// Image of a clopen set under a prefix map.
    Apply {
        #[arg(long)]
        map: PrefixMap,
        #[arg(long)]
        set: ClopenSet,
    },
    /// F∘G.
    Compose { f: PrefixMap, g: PrefixMap },
    Inverse { f: PrefixMap },
    /// A prefix map carrying each part of FROM onto the matching part of TO.
    Witness {
        #[arg(long)]
        from: OrderedPartition,
        #[arg(long)]
        to: OrderedPartition,
    },
}

#[derive(Args)]
struct ChainPartition {
    /// Chain leaves in order, e.g. `10,00,11,01`.
    #[arg(long)]
    chain: ChainApprox,
    /// Parts separated by `|`, cylinders by `,`, e.g. `00,1|01`.
    #[arg(long)]
    partition: OrderedPartition,
}

#[derive(Subcommand)]
enum ChainsCmd {
    /// The induced order t*, computed by both rules.
    Order(ChainPartition),
    /// θ_β(c).
    Theta(ChainPartition),
    /// Whether the chain lies in U_α.
    Neighborhood(ChainPartition),
    /// g·c.
    Act {
        #[arg(long)]
        map: PrefixMap,
        #[arg(long)]
        chain: ChainApprox,
    },
}

#[derive(Subcommand)]
enum SymbolicCmd {
    /// Normalize a table and print it as JSON.
    Table {
        #[arg(short)]
        k: usize,
        #[arg(long)]
        table: Table,
    },
    /// φ_T(c)(β).
    Phi {
        #[arg(long)]
        table: Table,
        #[command(flatten)]
        at: ChainPartition,
    },
    /// ρ_c(g, β̃).
    Rho {
        #[arg(long)]
        map: PrefixMap,
        #[command(flatten)]
        at: ChainPartition,
    },
    /// Check ρ_c(gh,β̃) = ρ_c(g,β̃)∘ρ_c(h,g⁻¹β̃).
    Cocycle {
        #[arg(long)]
        g: PrefixMap,
        #[arg(long)]
        h: PrefixMap,
        #[command(flatten)]
        at: ChainPartition,
    },
}

#[derive(Subcommand)]
enum DynamicsCmd {
    /// g with g·x ∈ U.
    Minimality {
        #[arg(long)]
        point: Word,
        #[arg(long)]
        open: ClopenSet,
    },
    /// g with g·F ⊆ U.
    ExtremeProximality {
        #[arg(long)]
        closed: ClopenSet,
        #[arg(long)]
        open: ClopenSet,
    },
    /// g moving the chain into U_α.
    PhiMinimality(ChainPartition),
    /// g moving both chains into U_α.
    Proximality {
        #[arg(long)]
        chain2: ChainApprox,
        #[command(flatten)]
        at: ChainPartition,
    },
    /// g with gF and F incomparable.
    Incomparability {
        #[arg(long)]
        chain: ChainApprox,
        #[arg(long)]
        element: ClopenSet,
    },
    /// Re-check a stored witness certificate.
    Check { file: PathBuf },
}

/// Accepts plain integers and float notation such as `1e8`.
fn budget(s: &str) -> Result<u64, String> {
    if let Ok(b) = s.parse::<u64>() {
        return Ok(b);
    }
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() && x >= 0.0 && x.fract() == 0.0 && x < u64::MAX as f64 => Ok(x as u64),
        _ => Err(format!("{s:?} is not a non-negative whole number")),
    }
}

#[derive(Args)]
struct SearchArgs {
    /// Maximum number of colour assignments explored per query.
    #[arg(long, env = "UMFLOW_RAMSEY_BUDGET", default_value = "1e8", value_parser = budget)]
    budget: u64,
    /// Explore every colouring instead of one per colour relabelling.
    #[arg(long)]
    no_prune: bool,
}

#[derive(Args)]
struct Query {
    #[arg(short)]
    n: usize,
    #[arg(short)]
    k: usize,
    #[arg(short)]
    m: usize,
    #[arg(short)]
    r: u32,
}

#[derive(Subcommand)]
enum RamseyCmd {
    /// Decide whether every r-colouring of Π̃(n,k) has a monochromatic η ∈ Π(n,m).
    Verify {
        #[command(flatten)]
        query: Query,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Search for a colouring without monochromatic η.
    Lower {
        #[command(flatten)]
        query: Query,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// DR(k,m,r) by increasing N.
    Number {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        m: usize,
        #[arg(short)]
        r: u32,
        #[arg(long)]
        n_max: usize,
        /// Line-delimited JSON log of verdicts; existing entries are replayed.
        #[arg(long)]
        transcript: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Re-check a stored certificate.
    Check { file: PathBuf },
}

#[derive(Subcommand)]
enum FactorCmd {
    /// Extract the table back from φ_T on random (c0, α).
    Roundtrip {
        #[arg(short)]
        k: usize,
        #[arg(long)]
        table: Table,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        cases: usize,
    },
    /// A configuration with no monochromatic η must yield nothing.
    Adversarial {
        #[arg(short)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        cases: usize,
    },
}

#[derive(Args)]
struct SuiteArgs {
    /// Exhaustive checks cover codes with up to this many leaves.
    #[arg(long, default_value_t = 5)]
    max_leaves: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Samples for the randomized parts.
    #[arg(long, default_value_t = 10_000)]
    cases: usize,
    /// Run only these suites (comma-separated).
    #[arg(long, value_delimiter = ',')]
    only: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = std::iter::once("umflow".to_string())
        .chain(std::env::args().skip(1))
        .collect::<Vec<_>>()
        .join(" ");
    let start = Instant::now();
    let outcome = match commands::run(cli.verb) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            // Bad inputs are usage errors; anything else is a failed run.
            return if e.downcast_ref::<umflow::Error>().is_some() { ExitCode::from(2) } else { ExitCode::from(1) };
        }
    };
    let report = RunReport::new(command, &outcome);
    let seconds = start.elapsed().as_secs_f64();
    match report::write_all(&cli.out, &report, &outcome, seconds) {
        Ok(path) => {
            if !cli.quiet {
                println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
                eprintln!("wrote {} in {seconds:.2}s", path.display());
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    }
    if outcome.ok() {
        ExitCode::SUCCESS
    } else {
        for f in &report.failures {
            eprintln!("FAILED {f}");
        }
        ExitCode::from(1)
    }
}
