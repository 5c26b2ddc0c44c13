mod entropy;
mod experiment;
mod inputs;
mod output;
mod sample;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ugw_core::Error;

use crate::output::Sink;

#[derive(Parser)]
#[command(name = "ugw-ldp", version, about = "Sparse random graphs, UGW trees and their large-deviation rates")]
struct Cli {
    /// Base seed; every sample draws from its own sub-stream of it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for experiment fan-out (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one multigraph from the configuration model CM(D).
    SampleCm(sample::CmArgs),
    /// Draw one graph uniformly from G(D, girth - 1) by rejection.
    SampleGdh(sample::GdhArgs),
    /// Draw depth-k trees from UGW_h(P).
    SampleUgw(sample::UgwArgs),
    /// Draw depth-k trees from the bipartite UGW built on (P1, P2).
    SampleBipartite(sample::BipartiteArgs),
    /// Evaluate J_h, the Δ_k and the rate functions.
    #[command(subcommand)]
    Entropy(entropy::EntropyCommand),
    /// Monte Carlo experiments; CSV by default.
    #[command(subcommand)]
    Experiment(experiment::ExperimentCommand),
    /// Cross-check closed forms against the brute-force oracles.
    Verify(verify::VerifyArgs),
}

/// Exit status for an error: 2 when a sampler gave up, 3 when a law or
/// degree distribution is unusable, 1 otherwise.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::RejectionExhausted { .. }) => 2,
        Some(
            Error::InvalidLaw(_)
            | Error::NotAdmissible(_)
            | Error::ZeroEdgeType(..)
            | Error::NotATree(_)
            | Error::InvalidSupport(_)
            | Error::ZeroMean
            | Error::SupportExplosion { .. },
        ) => 3,
        _ => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let sink = Sink::new(cli.out, cli.format);
    match cli.command {
        Command::SampleCm(a) => sample::cm(&a, cli.seed, &sink)?,
        Command::SampleGdh(a) => sample::gdh(&a, cli.seed, &sink)?,
        Command::SampleUgw(a) => sample::ugw(&a, cli.seed, &sink)?,
        Command::SampleBipartite(a) => sample::bipartite(&a, cli.seed, &sink)?,
        Command::Entropy(c) => entropy::run(c, &sink)?,
        Command::Experiment(c) => experiment::run(c, cli.seed, &sink)?,
        Command::Verify(a) => return verify::run(&a, &sink),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
