//! Three entry points for the static page in `www/`. Each has a plain Rust
//! version returning `Result<String, String>` (tested natively) and a thin
//! `#[wasm_bindgen]` wrapper.

use serde_json::json;
use ugw_core::entropy::rate_degree_er;
use ugw_core::experiments::sub_rng;
use ugw_core::io::parse_degree_law;
use ugw_core::ugw::{marginal_ugw_capped, UgwSampler};
use ugw_core::weight::format_ratio;
use ugw_core::Weight;
use wasm_bindgen::prelude::*;

pub const MAX_TREE_DEPTH: usize = 8;
pub const MAX_TREE_VERTICES: usize = 4000;
pub const MAX_MARGINAL_DEPTH: usize = 3;
pub const MARGINAL_CAP: usize = 500;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// A depth-`depth` tree of `UGW_1(P)` as `{parent, level}` arrays, vertex 0
/// being the root.
pub fn tree_json(law: &str, depth: usize, seed: u32) -> Result<String, String> {
    if depth > MAX_TREE_DEPTH {
        return Err(format!("depth is capped at {MAX_TREE_DEPTH}"));
    }
    let p = parse_degree_law(law).map_err(err)?;
    let sampler = UgwSampler::new(&p.to_law()).map_err(err)?;
    let t = sampler.sample(depth, &mut sub_rng(seed as u64, 0, 0)).map_err(err)?;
    let n = t.vertex_count();
    if n > MAX_TREE_VERTICES {
        return Err(format!("tree has {n} vertices; try a smaller depth"));
    }
    let dist = t.graph.distances(t.root, None);
    let mut parent = vec![None; n];
    for (u, v) in t.graph.edges() {
        let (a, b) = if dist[u] < dist[v] { (u, v) } else { (v, u) };
        parent[b] = Some(a);
    }
    let level: Vec<usize> = dist.iter().map(|d| d.unwrap_or(0)).collect();
    Ok(json!({"n": n, "parent": parent, "level": level}).to_string())
}

/// `λ ↦` rate of the degree law `P` in `G(n, λ/n)`, on `points` evenly
/// spaced values in `[lo, hi]`.
pub fn rate_curve_json(law: &str, lo: f64, hi: f64, points: usize) -> Result<String, String> {
    if !(lo > 0.0 && hi > lo && (2..=1000).contains(&points)) {
        return Err("need 0 < lo < hi and 2..=1000 points".into());
    }
    let p = parse_degree_law(law).map_err(err)?;
    let mut xs = Vec::with_capacity(points);
    for i in 0..points {
        let lambda = lo + (hi - lo) * i as f64 / (points - 1) as f64;
        let r = rate_degree_er(&p, lambda).map_err(err)?;
        xs.push(json!({"lambda": lambda, "rate": r.finite()}));
    }
    Ok(json!({"mean": p.mean().to_f64(), "points": xs}).to_string())
}

/// The exact depth-`depth` marginal of `UGW_1(P)`, sorted by probability.
pub fn marginal_json(law: &str, depth: usize) -> Result<String, String> {
    if depth == 0 || depth > MAX_MARGINAL_DEPTH {
        return Err(format!("depth must be in 1..={MAX_MARGINAL_DEPTH}"));
    }
    let p = parse_degree_law(law).map_err(err)?;
    let q = marginal_ugw_capped(&p.to_law(), depth, MARGINAL_CAP).map_err(err)?;
    let mut rows: Vec<_> = q.iter().map(|(c, w)| (c.encoding(), format_ratio(w), w.to_f64())).collect();
    rows.sort_by(|a, b| b.2.total_cmp(&a.2).then_with(|| a.0.cmp(b.0)));
    let rows: Vec<_> = rows
        .into_iter()
        .map(|(class, exact, p)| json!({"class": class, "exact": exact, "p": p}))
        .collect();
    Ok(json!({"depth": depth, "rows": rows}).to_string())
}

#[wasm_bindgen]
pub fn sample_ugw_tree(law: &str, depth: usize, seed: u32) -> Result<String, JsError> {
    tree_json(law, depth, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn degree_rate_curve(law: &str, lo: f64, hi: f64, points: usize) -> Result<String, JsError> {
    rate_curve_json(law, lo, hi, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn ugw_marginal(law: &str, depth: usize) -> Result<String, JsError> {
    marginal_json(law, depth).map_err(|e| JsError::new(&e))
}
