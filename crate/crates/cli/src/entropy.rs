use clap::{Args, Subcommand};
use serde_json::{json, Value};
use ugw_core::entropy::{
    deltas, discontinuity_bound, j_h_terms, j_sequence, rate_binomial, rate_degree_er, rate_degree_fixed,
    rate_fixed_degrees, rate_fixed_edges, sigma_ugw1, EntropyReport, ExtendedReal,
};
use ugw_core::ugw::DegreeLaw;
use ugw_core::weight::parse_ratio;
use ugw_core::{BigRational, NeighborhoodLaw, Weight, SCHEMA};

use crate::inputs::{self, DegreeInput, Degrees, Law, LawInput};
use crate::output::Sink;
use crate::Format;

#[derive(Subcommand, Debug)]
pub enum EntropyCommand {
    /// J_h(Q) with its four terms.
    Jh(LawInput),
    /// Σ(UGW_1(P)) = J_1 of the degree law P.
    SigmaUgw1(DegreeInput),
    /// Δ_1..Δ_h along the truncations of Q, and J_1..J_h.
    Delta(LawInput),
    /// I(Q) for the graph with fixed degree law P.
    RateDegrees(RateDegreesArgs),
    /// I(Q) for the uniform graph with n d/2 edges.
    RateEdges(WithD<LawInput>),
    /// I(Q) for Erdős–Rényi G(n, λ/n).
    RateBinomial(WithLambda<LawInput>),
    /// Rate of the empirical degree law P in G(n, λ/n).
    RateDegreeEr(WithLambda<DegreeInput>),
    /// Rate of the empirical degree law P with n d/2 fixed edges.
    RateDegreeFixed(WithD<DegreeInput>),
    /// Σ(UGW_1(P)) upper bound on the bipartite limit of (P1, P2).
    DiscBound(DiscArgs),
}

#[derive(Args, Debug)]
pub struct RateDegreesArgs {
    #[command(flatten)]
    q: LawInput,
    #[command(flatten)]
    p: DegreeInput,
}

#[derive(Args, Debug)]
pub struct WithD<T: Args> {
    #[command(flatten)]
    law: T,
    /// Mean degree d, as a rational or decimal.
    #[arg(long)]
    d: String,
}

#[derive(Args, Debug)]
pub struct WithLambda<T: Args> {
    #[command(flatten)]
    law: T,
    #[arg(long)]
    lambda: f64,
}

#[derive(Args, Debug)]
pub struct DiscArgs {
    #[arg(long)]
    p1: String,
    #[arg(long)]
    p2: String,
}

fn mean_degree<W: Weight>(s: &str, parse: impl Fn(&str) -> Option<W>) -> anyhow::Result<W> {
    parse(s).ok_or_else(|| anyhow::anyhow!("--d: expected a number, got {s:?}"))
}

fn exact_d(s: &str) -> anyhow::Result<BigRational> {
    mean_degree(s, parse_ratio)
}

fn float_d(s: &str) -> anyhow::Result<f64> {
    mean_degree(s, |x| x.parse::<f64>().ok().or_else(|| parse_ratio(x).map(|r| r.to_f64())))
}

fn rate_degrees<W: Weight>(q: &NeighborhoodLaw<W>, p: &DegreeLaw<W>) -> anyhow::Result<EntropyReport> {
    Ok(EntropyReport::new(rate_fixed_degrees(q, p)?))
}

fn emit(sink: &Sink, command: &str, report: &EntropyReport, extra: Option<Value>) -> anyhow::Result<()> {
    if sink.format_or(Format::Json) == Format::Csv {
        let mut rows = vec![vec!["value".to_string(), report.value.to_string()]];
        if let Some(t) = &report.terms {
            rows.push(vec!["s_d".into(), t.s_d.to_string()]);
            rows.push(vec!["h_p".into(), t.h_p.to_string()]);
            rows.push(vec!["h_pi".into(), t.h_pi.to_string()]);
            rows.push(vec!["log_factorials".into(), t.log_factorials.to_string()]);
        }
        return sink.csv(&["quantity", "value"], &rows);
    }
    let mut v = serde_json::to_value(report)?;
    v["schema"] = json!(SCHEMA);
    v["command"] = json!(command);
    if let Some(Value::Object(extra)) = extra {
        for (k, x) in extra {
            v[k] = x;
        }
    }
    sink.json(&v)
}

pub fn run(cmd: EntropyCommand, sink: &Sink) -> anyhow::Result<()> {
    match cmd {
        EntropyCommand::Jh(q) => {
            let terms = match Law::read(&q)? {
                Law::Exact(p) => j_h_terms(&p)?,
                Law::Float(p) => j_h_terms(&p)?,
            };
            emit(sink, "jh", &EntropyReport::from_terms(terms), None)
        }
        EntropyCommand::SigmaUgw1(p) => {
            let value = match Degrees::read(&p)? {
                Degrees::Exact(p) => sigma_ugw1(&p)?,
                Degrees::Float(p) => sigma_ugw1(&p)?,
            };
            emit(sink, "sigma-ugw1", &EntropyReport::new(ExtendedReal::Finite(value)), None)
        }
        EntropyCommand::Delta(q) => {
            let (ds, js) = match Law::read(&q)? {
                Law::Exact(p) => tower_stats(&p)?,
                Law::Float(p) => tower_stats(&p)?,
            };
            if sink.format_or(Format::Json) == Format::Csv {
                let rows: Vec<Vec<String>> = (0..ds.len())
                    .map(|i| vec![(i + 1).to_string(), ds[i].to_string(), js[i].to_string()])
                    .collect();
                return sink.csv(&["k", "delta", "j"], &rows);
            }
            let last = ds[ds.len() - 1];
            let extra = json!({"deltas": ds, "j": js});
            emit(sink, "delta", &EntropyReport::new(last), Some(extra))
        }
        EntropyCommand::RateDegrees(a) => {
            let report = match (Law::read(&a.q)?, Degrees::read(&a.p)?) {
                (Law::Exact(q), Degrees::Exact(p)) => rate_degrees(&q, &p)?,
                (q, p) => rate_degrees(&q.to_f64(), &p.to_f64())?,
            };
            emit(sink, "rate-degrees", &report, None)
        }
        EntropyCommand::RateEdges(a) => {
            let value = match Law::read(&a.law)? {
                Law::Exact(q) => rate_fixed_edges(&q, &exact_d(&a.d)?)?,
                Law::Float(q) => rate_fixed_edges(&q, &float_d(&a.d)?)?,
            };
            emit(sink, "rate-edges", &EntropyReport::new(value), None)
        }
        EntropyCommand::RateBinomial(a) => {
            let value = match Law::read(&a.law)? {
                Law::Exact(q) => rate_binomial(&q, a.lambda)?,
                Law::Float(q) => rate_binomial(&q, a.lambda)?,
            };
            emit(sink, "rate-binomial", &EntropyReport::new(value), None)
        }
        EntropyCommand::RateDegreeEr(a) => {
            let value = match Degrees::read(&a.law)? {
                Degrees::Exact(p) => rate_degree_er(&p, a.lambda)?,
                Degrees::Float(p) => rate_degree_er(&p, a.lambda)?,
            };
            emit(sink, "rate-degree-er", &EntropyReport::new(value), None)
        }
        EntropyCommand::RateDegreeFixed(a) => {
            let value = match Degrees::read(&a.law)? {
                Degrees::Exact(p) => rate_degree_fixed(&p, &exact_d(&a.d)?)?,
                Degrees::Float(p) => rate_degree_fixed(&p, &float_d(&a.d)?)?,
            };
            emit(sink, "rate-degree-fixed", &EntropyReport::new(value), None)
        }
        EntropyCommand::DiscBound(a) => {
            let value = discontinuity_bound(&inputs::exact(&a.p1)?, &inputs::exact(&a.p2)?)?;
            emit(sink, "disc-bound", &EntropyReport::new(ExtendedReal::Finite(value)), None)
        }
    }
}

/// `Δ_k` and `J_k` for `k = 1..=h` along the truncations of `p`.
fn tower_stats<W: Weight>(p: &NeighborhoodLaw<W>) -> anyhow::Result<(Vec<ExtendedReal>, Vec<ExtendedReal>)> {
    if p.depth() == 0 {
        anyhow::bail!("delta needs a law of depth at least 1");
    }
    let tower = (1..=p.depth()).map(|k| p.truncate(k)).collect::<ugw_core::Result<Vec<_>>>()?;
    Ok((deltas(&tower)?, j_sequence(&tower)))
}
