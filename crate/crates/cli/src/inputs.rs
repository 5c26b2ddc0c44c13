use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Args;
use ugw_core::config_model::DegreeSequence;
use ugw_core::io::{parse_degree_law, read_degree_sequence, read_law, AnyLaw};
use ugw_core::ugw::DegreeLaw;
use ugw_core::NeighborhoodLaw;

/// Poisson laws are truncated once the remaining mass drops below this.
pub const TAIL_TOL: f64 = 1e-15;

pub fn read_text(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn degree_sequence(path: &Path) -> anyhow::Result<DegreeSequence> {
    let d = read_degree_sequence(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))?;
    d.validate()?;
    Ok(d)
}

pub fn law_file(path: &Path) -> anyhow::Result<AnyLaw> {
    read_law(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
}

/// A neighborhood law `Q`: a law file, or a degree law read as a depth-1 law.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct LawInput {
    /// Law file (JSON).
    #[arg(long)]
    pub law: Option<PathBuf>,
    /// Degree law `k:p,...`, taken as the depth-1 law of stars.
    #[arg(long)]
    pub q: Option<String>,
    /// Poisson(λ) degree law, taken as a depth-1 law.
    #[arg(long)]
    pub q_poisson: Option<f64>,
}

/// A degree law `P`.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct DegreeInput {
    /// Degree law `k:p,...` with rational or decimal weights.
    #[arg(long)]
    pub p: Option<String>,
    /// Poisson(λ) degree law.
    #[arg(long)]
    pub poisson: Option<f64>,
}

pub enum Law {
    Exact(NeighborhoodLaw),
    Float(NeighborhoodLaw<f64>),
}

pub enum Degrees {
    Exact(DegreeLaw),
    Float(DegreeLaw<f64>),
}

impl Law {
    pub fn read(input: &LawInput) -> anyhow::Result<Law> {
        if let Some(path) = &input.law {
            return Ok(match law_file(path)? {
                AnyLaw::Rational(p) => Law::Exact(p),
                AnyLaw::Float(p) => Law::Float(p),
            });
        }
        if let Some(s) = &input.q {
            return Ok(Law::Exact(parse_degree_law(s)?.to_law()));
        }
        let lambda = input.q_poisson.expect("clap enforces one source");
        Ok(Law::Float(DegreeLaw::poisson(lambda, TAIL_TOL)?.to_law()))
    }

    pub fn to_f64(&self) -> NeighborhoodLaw<f64> {
        match self {
            Law::Exact(p) => p.to_f64(),
            Law::Float(p) => p.clone(),
        }
    }
}

impl Degrees {
    pub fn read(input: &DegreeInput) -> anyhow::Result<Degrees> {
        match (&input.p, input.poisson) {
            (Some(s), _) => parse(s),
            (None, Some(lambda)) => Ok(Degrees::Float(DegreeLaw::poisson(lambda, TAIL_TOL)?)),
            (None, None) => unreachable!("clap enforces one source"),
        }
    }

    pub fn to_f64(&self) -> DegreeLaw<f64> {
        match self {
            Degrees::Exact(p) => p.to_f64(),
            Degrees::Float(p) => p.clone(),
        }
    }
}

pub fn parse(s: &str) -> anyhow::Result<Degrees> {
    Ok(Degrees::Exact(parse_degree_law(s)?))
}

pub fn exact(s: &str) -> anyhow::Result<DegreeLaw> {
    Ok(parse_degree_law(s)?)
}
