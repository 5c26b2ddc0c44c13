use std::path::PathBuf;

use clap::Args;
use serde_json::{json, Value};
use ugw_core::config_model::{sample_configuration, ColoredMultigraph, DegreeSequence, GdhSampler};
use ugw_core::experiments::sub_rng;
use ugw_core::io::{tree_to_json, write_colored_graph, AnyLaw};
use ugw_core::ugw::{BipartiteSampler, UgwSampler};
use ugw_core::{LabeledRootedGraph, SCHEMA};

use crate::inputs;
use crate::output::{print_json, Sink};
use crate::Format;

#[derive(Args, Debug)]
pub struct CmArgs {
    /// Degree-sequence file (header `L n`, then one row of L² entries per vertex).
    #[arg(long)]
    degrees: PathBuf,
}

#[derive(Args, Debug)]
pub struct GdhArgs {
    #[arg(long)]
    degrees: PathBuf,
    /// Shortest cycle allowed; loops count as length 1, double edges as 2.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    girth: u64,
    /// Give up after this many configurations (default: adaptive).
    #[arg(long)]
    max_attempts: Option<u64>,
}

#[derive(Args, Debug)]
pub struct UgwArgs {
    /// Law file (JSON) for the depth-h neighborhood law P.
    #[arg(long)]
    law: PathBuf,
    /// Depth of the sampled trees; must be at least the law's depth.
    #[arg(long)]
    depth: usize,
    #[arg(long, default_value_t = 1)]
    count: u32,
}

#[derive(Args, Debug)]
pub struct BipartiteArgs {
    /// Degree law of type-1 vertices, `k:p,...`.
    #[arg(long)]
    p1: String,
    /// Degree law of type-2 vertices, `k:p,...`.
    #[arg(long)]
    p2: String,
    #[arg(long)]
    depth: usize,
    #[arg(long, default_value_t = 1)]
    count: u32,
}

fn edge_rows(g: &ColoredMultigraph) -> Vec<Vec<String>> {
    let l = g.colors().l();
    g.edge_list()
        .into_iter()
        .map(|(c, u, v, k)| vec![u.to_string(), v.to_string(), (c / l).to_string(), (c % l).to_string(), k.to_string()])
        .collect()
}

fn emit_graph(sink: &Sink, g: &ColoredMultigraph, mut meta: Value) -> anyhow::Result<()> {
    if sink.format_or(Format::Json) == Format::Csv {
        return sink.csv(&["u", "v", "i", "j", "mult"], &edge_rows(g));
    }
    match sink.out() {
        Some(path) => {
            sink.write(&write_colored_graph(g))?;
            meta["graph_file"] = json!(path.display().to_string());
            print_json(&meta)
        }
        None => {
            let edges: Vec<Value> = g
                .edge_list()
                .into_iter()
                .map(|(c, u, v, k)| json!([u, v, c / g.colors().l(), c % g.colors().l(), k]))
                .collect();
            meta["graph"] = json!({"L": g.colors().l(), "n": g.n(), "edges": edges});
            sink.json(&meta)
        }
    }
}

fn degree_meta(d: &DegreeSequence) -> Value {
    json!({"L": d.colors().l(), "n": d.n(), "edges": d.edge_count()})
}

pub fn cm(a: &CmArgs, seed: u64, sink: &Sink) -> anyhow::Result<()> {
    let d = inputs::degree_sequence(&a.degrees)?;
    let g = sample_configuration(&d, &mut sub_rng(seed, 0, 0))?.graph();
    let meta = json!({
        "schema": SCHEMA,
        "command": "sample-cm",
        "seed": seed,
        "parameters": {"degrees": degree_meta(&d)},
    });
    emit_graph(sink, &g, meta)
}

pub fn gdh(a: &GdhArgs, seed: u64, sink: &Sink) -> anyhow::Result<()> {
    let d = inputs::degree_sequence(&a.degrees)?;
    let h = (a.girth - 1) as usize;
    let mut sampler = GdhSampler::new(d.clone(), h)?;
    if let Some(cap) = a.max_attempts {
        sampler = sampler.with_max_attempts(cap);
    }
    let g = sampler.sample(&mut sub_rng(seed, 0, 0))?;
    let meta = json!({
        "schema": SCHEMA,
        "command": "sample-gdh",
        "seed": seed,
        "parameters": {"degrees": degree_meta(&d), "girth": a.girth, "h": h},
        "acceptance": {
            "attempts": sampler.attempts(),
            "accepts": sampler.accepts(),
            "rate": sampler.acceptance_rate(),
        },
    });
    emit_graph(sink, &g, meta)
}

fn emit_trees(sink: &Sink, trees: &[(LabeledRootedGraph, Option<Vec<u8>>)], mut meta: Value) -> anyhow::Result<()> {
    if sink.format_or(Format::Json) == Format::Csv {
        let mut rows = Vec::new();
        for (i, (t, _)) in trees.iter().enumerate() {
            for (u, v) in t.graph.edges() {
                rows.push(vec![i.to_string(), u.to_string(), v.to_string()]);
            }
        }
        return sink.csv(&["tree", "u", "v"], &rows);
    }
    let docs: Vec<Value> = trees
        .iter()
        .map(|(t, types)| {
            let mut v = tree_to_json(t);
            if let Some(types) = types {
                v["types"] = json!(types.iter().map(|&x| x + 1).collect::<Vec<_>>());
            }
            v
        })
        .collect();
    match sink.out() {
        Some(path) => {
            sink.write(&(serde_json::to_string_pretty(&docs)? + "\n"))?;
            meta["tree_file"] = json!(path.display().to_string());
            print_json(&meta)
        }
        None => {
            meta["trees"] = json!(docs);
            sink.json(&meta)
        }
    }
}

pub fn ugw(a: &UgwArgs, seed: u64, sink: &Sink) -> anyhow::Result<()> {
    let law = inputs::law_file(&a.law)?;
    let sampler = match &law {
        AnyLaw::Rational(p) => UgwSampler::new(p)?,
        AnyLaw::Float(p) => UgwSampler::new(p)?,
    };
    let trees = (0..a.count)
        .map(|i| Ok((sampler.sample(a.depth, &mut sub_rng(seed, 0, i))?, None)))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let meta = json!({
        "schema": SCHEMA,
        "command": "sample-ugw",
        "seed": seed,
        "parameters": {"law_depth": law.depth(), "depth": a.depth, "count": a.count},
    });
    emit_trees(sink, &trees, meta)
}

pub fn bipartite(a: &BipartiteArgs, seed: u64, sink: &Sink) -> anyhow::Result<()> {
    let sampler = BipartiteSampler::new(&inputs::exact(&a.p1)?, &inputs::exact(&a.p2)?)?;
    let trees: Vec<_> = (0..a.count)
        .map(|i| {
            let (t, types) = sampler.sample(a.depth, &mut sub_rng(seed, 0, i));
            (t, Some(types))
        })
        .collect();
    let meta = json!({
        "schema": SCHEMA,
        "command": "sample-bipartite",
        "seed": seed,
        "parameters": {"p1": a.p1, "p2": a.p2, "depth": a.depth, "count": a.count},
    });
    emit_trees(sink, &trees, meta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::output::csv_text;

    #[test]
    fn rows_split_colors() {
        let mut g = ColoredMultigraph::new(2, 2);
        g.add_edge(1, 0, 1);
        let rows = edge_rows(&g);
        assert_eq!(rows, vec![vec!["0", "1", "0", "1", "1"]]);
        assert_eq!(csv_text(&["a"], &[]), "a\n");
    }
}
