use std::process::ExitCode;

use clap::Args;
use serde_json::json;
use ugw_core::config_model::{fiber_size, ColoredMultigraph, DegreeSequence};
use ugw_core::entropy::{deltas, j_h, relative_entropy_poisson, s, sigma_ugw1, ExtendedReal};
use ugw_core::neighborhood::empirical_distribution;
use ugw_core::oracle::{
    check_alpha_grid, check_cm_grid, check_marginal_grid, check_nh_grid, marginal_grid_laws, GridCheck,
};
use ugw_core::ugw::{marginal_ugw, DegreeLaw};
use ugw_core::{BigRational, Graph, Weight, SCHEMA};

use crate::output::Sink;
use crate::Format;

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Run the reduced grid.
    #[arg(long)]
    quick: bool,
    /// Swap in a fiber formula that is off by one (self-test of the harness).
    #[arg(long, hide = true)]
    inject_fault: bool,
}

/// Exit status when some identity fails.
const VERIFY_FAILED: u8 = 4;

fn faulty_fiber(d: &DegreeSequence, g: &ColoredMultigraph) -> ugw_core::Result<ugw_core::BigUint> {
    Ok(fiber_size(d, g)? + 1u32)
}

const ENTROPY: &str = "entropy identities";

fn fail(cases: usize, detail: impl Into<String>) -> GridCheck {
    GridCheck { name: ENTROPY, cases, passed: false, detail: detail.into() }
}

/// `J_1` closed form at the 3-star, the first-level identity, flat UGW
/// towers, and telescoping on empirical laws of trees.
fn entropy_checks(quick: bool) -> GridCheck {
    let closed = 1.5 * 3f64.ln() - 1.5 - 6f64.ln();
    let star = sigma_ugw1(&DegreeLaw::<BigRational>::point_mass(3)).map(|x| (x - closed).abs());
    let mut cases = 1;
    let mut worst: f64 = match star {
        Ok(e) => e,
        Err(e) => return fail(cases, e.to_string()),
    };
    let degree_laws = ["2:1/2,3:1/2", "1:1/3,3:2/3", "0:1/4,2:3/4", "1:1/3,2:1/3,3:1/3"];
    let laws = if quick { &degree_laws[..2] } else { &degree_laws[..] };
    for p in laws {
        cases += 1;
        let p = ugw_core::io::parse_degree_law(p).expect("fixed law");
        let d = p.mean().to_f64();
        let via_poisson = relative_entropy_poisson(&p, d).map(|x| s(d).unwrap_or(f64::NAN) - x.value);
        let tower: Vec<_> = (1..=3).map(|k| marginal_ugw(&p.to_law(), k)).collect();
        match (via_poisson, sigma_ugw1(&p), tower.into_iter().collect::<ugw_core::Result<Vec<_>>>()) {
            (Ok(a), Ok(b), Ok(tower)) => {
                worst = worst.max((a - b).abs());
                match deltas(&tower) {
                    Ok(ds) => {
                        for d in &ds[1..] {
                            if *d != ExtendedReal::ZERO {
                                return fail(cases, "UGW tower not flat");
                            }
                        }
                    }
                    Err(e) => return fail(cases, e.to_string()),
                }
            }
            _ => return fail(cases, "evaluation failed"),
        }
    }
    for g in [Graph::path(6), Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (1, 4), (2, 5), (2, 6)])] {
        cases += 1;
        let tower: Vec<_> = (1..=3).map(|h| empirical_distribution(&g, h).expect("nonempty")).collect();
        let sd = s(tower[0].mean_degree().to_f64()).unwrap_or(f64::NAN);
        let sum: f64 = match deltas(&tower) {
            Ok(ds) => ds.iter().map(|x| x.to_f64()).sum(),
            Err(e) => return fail(cases, e.to_string()),
        };
        match j_h(&tower[2]) {
            Ok(j) => worst = worst.max((sd - sum - j).abs()),
            Err(e) => return fail(cases, e.to_string()),
        }
    }
    GridCheck {
        name: ENTROPY,
        cases,
        passed: worst <= 1e-9,
        detail: format!("max error {worst:.1e}"),
    }
}

pub fn run(a: &VerifyArgs, sink: &Sink) -> anyhow::Result<ExitCode> {
    let fiber = if a.inject_fault { faulty_fiber } else { fiber_size };
    let checks = if a.quick {
        let laws = marginal_grid_laws();
        vec![
            check_cm_grid(2, 2, 2, fiber),
            check_nh_grid(5, 10, &[1, 2]),
            check_marginal_grid(&[laws[0].clone(), laws[2].clone(), laws[8].clone()]),
            check_alpha_grid(3, 2, &[1, 2, 3]),
            entropy_checks(true),
        ]
    } else {
        vec![
            check_cm_grid(2, 3, 2, fiber),
            check_nh_grid(6, 15, &[1, 2]),
            check_marginal_grid(&marginal_grid_laws()),
            check_alpha_grid(4, 2, &[1, 2, 3]),
            entropy_checks(false),
        ]
    };
    let all = checks.iter().all(|c| c.passed);
    if sink.format_or(Format::Csv) == Format::Json {
        sink.json(&json!({"schema": SCHEMA, "command": "verify", "passed": all, "checks": checks}))?;
    } else {
        let mut text = String::new();
        for c in &checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            text.push_str(&format!("{tag} {}: {}\n", c.name, c.detail));
        }
        sink.write(&text)?;
    }
    Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(VERIFY_FAILED) })
}
