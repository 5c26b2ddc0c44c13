use clap::{Args, Subcommand};
use serde_json::json;
use ugw_core::experiments::{
    concentration_experiment, converge_experiment, cycle_experiment, degree_sequence_for,
};
use ugw_core::SCHEMA;

use crate::inputs;
use crate::output::Sink;
use crate::Format;

#[derive(Args, Debug)]
pub struct Grid {
    /// Comma-separated graph sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

#[derive(Subcommand, Debug)]
pub enum ExperimentCommand {
    /// Mean ℓ-cycle counts of CM(D_n) against the limiting intensities.
    Cycles {
        #[command(flatten)]
        grid: Grid,
        /// Degree law `k:p,...`; D_n has n P(k) vertices of degree k.
        #[arg(long, default_value = "3:1")]
        p: String,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// TV distance between U(G_n) at depth k and the UGW marginal.
    Converge {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value = "3:1")]
        p: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Samples are drawn from G(D_n, girth - 1).
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        girth: u64,
    },
    /// Tail of a class frequency in a random regular CM against 2exp(-δnt²).
    Concentrate {
        #[command(flatten)]
        grid: Grid,
        #[arg(long, default_value_t = 3)]
        degree: u32,
    },
}

fn f(x: f64) -> String {
    format!("{x:.6e}")
}

pub fn run(cmd: ExperimentCommand, seed: u64, sink: &Sink) -> anyhow::Result<()> {
    let format = sink.format_or(Format::Csv);
    match cmd {
        ExperimentCommand::Cycles { grid, p, max_len } => {
            let p = inputs::exact(&p)?;
            let mut reports = Vec::new();
            for &n in &grid.n_list {
                let d = degree_sequence_for(&p, n)?;
                reports.push(cycle_experiment(&d, max_len, grid.samples, seed)?);
            }
            if format == Format::Json {
                return sink.json(&json!({"schema": SCHEMA, "command": "cycles", "seed": seed, "reports": reports}));
            }
            let mut rows = Vec::new();
            for r in &reports {
                for c in &r.rows {
                    rows.push(vec![r.n.to_string(), format!("cycles_{}", c.len), f(c.mean), f(c.stderr), f(c.expected)]);
                }
                rows.push(vec![r.n.to_string(), "simple".into(), f(r.simple_rate), f(r.simple_stderr), f(r.expected_simple)]);
            }
            sink.csv(&["n", "statistic", "mean", "stderr", "expected"], &rows)
        }
        ExperimentCommand::Converge { grid, p, depth, girth } => {
            let p = inputs::exact(&p)?;
            let rows = converge_experiment(&p, &grid.n_list, grid.samples, depth, (girth - 1) as usize, seed)?;
            if format == Format::Json {
                return sink.json(&json!({"schema": SCHEMA, "command": "converge", "seed": seed, "rows": rows}));
            }
            let rows: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![r.n.to_string(), r.samples.to_string(), f(r.tv), r.attempts.to_string(), r.accepts.to_string()])
                .collect();
            sink.csv(&["n", "samples", "tv", "attempts", "accepts"], &rows)
        }
        ExperimentCommand::Concentrate { grid, degree } => {
            let r = concentration_experiment(degree, &grid.n_list, grid.samples, seed)?;
            if format == Format::Json {
                return sink.json(&json!({"schema": SCHEMA, "command": "concentrate", "seed": seed, "report": r}));
            }
            let mut rows = Vec::new();
            for row in &r.rows {
                for t in &row.tail {
                    rows.push(vec![
                        row.n.to_string(),
                        f(row.sd),
                        f(row.delta),
                        f(t.t),
                        f(t.empirical),
                        f(t.bound),
                    ]);
                }
            }
            sink.csv(&["n", "sd", "delta", "t", "empirical", "bound"], &rows)
        }
    }
}
