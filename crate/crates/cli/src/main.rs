//! Command-line surface: dataset ingestion, mapping precomputation,
//! discovery, independence testing, simulation, and evaluation sweeps.
//!
//! Exit codes: 0 ok, 2 input error, 3 capacity, 4 internal invariant
//! violation.

mod commands;
mod manifest;

use bccd::BccdError;
use clap::{Parser, Subcommand};
use std::path::PathBuf;

fn version_string() -> &'static str {
    static VERSION: std::sync::OnceLock<String> = std::sync::OnceLock::new();
    VERSION.get_or_init(|| {
        format!(
            "{} (mapping format {:#010x})",
            env!("CARGO_PKG_VERSION"),
            bccd::statements::MAPPING_VERSION
        )
    })
}

#[derive(Parser)]
#[command(name = "bccd", version = version_string(), about = "Bayesian constraint-based causal discovery")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Precompute the structure-to-statement mapping cache.
    BuildMapping {
        /// largest structure size to map (2..=5)
        #[arg(long, default_value_t = 5)]
        kmax: usize,
        /// output cache path
        #[arg(long)]
        out: PathBuf,
        /// also write a text dump next to the cache
        #[arg(long)]
        dump: bool,
    },
    /// Run discovery on a dataset and write the PAG and decision log.
    Discover {
        /// input CSV (header row with variable names)
        #[arg(long)]
        data: PathBuf,
        /// optional sidecar schema pinning category sets
        #[arg(long)]
        schema: Option<PathBuf>,
        /// decision threshold
        #[arg(long, default_value_t = 0.5)]
        theta: f64,
        /// mapping cache (rebuilt here when missing or version-mismatched)
        #[arg(long)]
        mapping: PathBuf,
        #[arg(long)]
        out_pag: PathBuf,
        #[arg(long)]
        out_log: PathBuf,
        /// optional causal-matrix CSV
        #[arg(long)]
        out_mc: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        kmax: usize,
        /// structure prior: uniform | multilevel
        #[arg(long, default_value = "uniform")]
        prior: String,
        /// parameter prior: k2 | bdeu
        #[arg(long, default_value = "k2")]
        dirichlet: String,
        /// BDeu equivalent sample size
        #[arg(long, default_value_t = 1.0)]
        bdeu_ess: f64,
        /// worker cap for stage 1
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Posterior probability of a conditional independence.
    TestIndependence {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        schema: Option<PathBuf>,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        /// comma-separated conditioning variables
        #[arg(long, default_value = "")]
        given: String,
        /// switch to the minimal-dependence mode with this breaker variable
        #[arg(long)]
        minimal_dep: Option<String>,
        #[arg(long, default_value = "uniform")]
        prior: String,
        #[arg(long, default_value = "k2")]
        dirichlet: String,
        #[arg(long, default_value_t = 1.0)]
        bdeu_ess: f64,
    },
    /// Generate ground-truth models and datasets from a manifest.
    Simulate {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score predicted PAGs/causal matrices against simulated truth.
    Evaluate {
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-run discovery across decision thresholds and score each run.
    Sweep {
        #[arg(long)]
        manifest: PathBuf,
        /// comma-separated thresholds, e.g. 0.5,0.7,0.9
        #[arg(long)]
        thetas: String,
        #[arg(long)]
        out: PathBuf,
        /// reuse the stage-1 skeleton/ledger from the manifest theta
        /// instead of a full re-run per threshold (approximation)
        #[arg(long)]
        fix_skeleton: bool,
        /// optional mapping cache to load/persist
        #[arg(long)]
        mapping: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::BuildMapping { kmax, out, dump } => commands::build_mapping(kmax, &out, dump),
        Command::Discover {
            data,
            schema,
            theta,
            mapping,
            out_pag,
            out_log,
            out_mc,
            kmax,
            prior,
            dirichlet,
            bdeu_ess,
            jobs,
        } => commands::discover(commands::DiscoverArgs {
            data,
            schema,
            theta,
            mapping,
            out_pag,
            out_log,
            out_mc,
            kmax,
            prior,
            dirichlet,
            bdeu_ess,
            jobs,
        }),
        Command::TestIndependence {
            data,
            schema,
            x,
            y,
            given,
            minimal_dep,
            prior,
            dirichlet,
            bdeu_ess,
        } => commands::test_independence(commands::TestIndependenceArgs {
            data,
            schema,
            x,
            y,
            given,
            minimal_dep,
            prior,
            dirichlet,
            bdeu_ess,
        }),
        Command::Simulate { manifest, out } => commands::simulate(&manifest, &out),
        Command::Evaluate { truth, pred, out } => commands::evaluate(&truth, &pred, &out),
        Command::Sweep { manifest, thetas, out, fix_skeleton, mapping, jobs } => {
            commands::sweep(&manifest, &thetas, &out, fix_skeleton, mapping.as_deref(), jobs)
        }
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}

fn exit_code(e: &BccdError) -> i32 {
    match e {
        BccdError::Capacity(_) => 3,
        BccdError::Invariant(_) => 4,
        BccdError::InvalidArgument(_)
        | BccdError::Parse { .. }
        | BccdError::Io(_)
        | BccdError::Generation(_)
        | BccdError::VersionMismatch { .. } => 2,
    }
}
