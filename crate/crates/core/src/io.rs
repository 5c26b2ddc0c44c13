//! File formats.
//!
//! * Law file (JSON): `{"depth": h, "mode": "rational"|"float", "support":
//!   [{"class": "<encoding>", "p": "num/den" | float}]}`.
//! * Degree-sequence file: header `L n`, then one line per vertex with the
//!   `L²` entries of `D(i)` row-major.
//! * Colored-graph file: header `L n`, then lines `u v i j mult`, one per
//!   undirected colored edge (loops counted once).
//! * Edge list: lines `u v mult`, with an optional `# n <count>` line.

use std::fmt::Write as _;

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::config_model::{ColoredMultigraph, DegreeSequence};
use crate::error::{Error, Result};
use crate::neighborhood::NeighborhoodLaw;
use crate::rooted_graphs::{canonicalize, CanonicalClass, Graph, LabeledRootedGraph};
use crate::ugw::DegreeLaw;
use crate::weight::{format_ratio, parse_ratio};
use crate::SCHEMA;

/// A law read from disk, in whichever arithmetic the file asked for.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyLaw {
    Rational(NeighborhoodLaw),
    Float(NeighborhoodLaw<f64>),
}

impl AnyLaw {
    pub fn depth(&self) -> usize {
        match self {
            AnyLaw::Rational(p) => p.depth(),
            AnyLaw::Float(p) => p.depth(),
        }
    }

    pub fn to_f64(&self) -> NeighborhoodLaw<f64> {
        match self {
            AnyLaw::Rational(p) => p.to_f64(),
            AnyLaw::Float(p) => p.clone(),
        }
    }
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn law_to_json(p: &NeighborhoodLaw) -> Value {
    let support: Vec<Value> = p
        .iter()
        .map(|(c, w)| json!({"class": c.encoding(), "p": format_ratio(w)}))
        .collect();
    json!({"schema": SCHEMA, "depth": p.depth(), "mode": "rational", "support": support})
}

pub fn float_law_to_json(p: &NeighborhoodLaw<f64>) -> Value {
    let support: Vec<Value> = p
        .iter()
        .map(|(c, w)| json!({"class": c.encoding(), "p": w}))
        .collect();
    json!({"schema": SCHEMA, "depth": p.depth(), "mode": "float", "support": support})
}

pub fn read_law(text: &str) -> Result<AnyLaw> {
    let v: Value = serde_json::from_str(text)?;
    let depth = v["depth"]
        .as_u64()
        .ok_or_else(|| parse_err("law file needs an integer \"depth\""))? as usize;
    let mode = v["mode"].as_str().unwrap_or("rational");
    let support = v["support"]
        .as_array()
        .ok_or_else(|| parse_err("law file needs a \"support\" array"))?;
    let mut classes = Vec::with_capacity(support.len());
    for atom in support {
        let enc = atom["class"]
            .as_str()
            .ok_or_else(|| parse_err("atom without \"class\""))?;
        classes.push((CanonicalClass::from_encoding(enc)?, &atom["p"]));
    }
    match mode {
        "rational" => {
            let mut atoms = Vec::new();
            for (c, p) in classes {
                let r = match p {
                    Value::String(s) => parse_ratio(s),
                    Value::Number(n) => n.as_u64().map(|k| BigRational::from_integer(k.into())),
                    _ => None,
                }
                .ok_or_else(|| parse_err(format!("bad rational weight {p}")))?;
                atoms.push((c, r));
            }
            Ok(AnyLaw::Rational(NeighborhoodLaw::new(depth, atoms)?))
        }
        "float" => {
            let mut atoms = Vec::new();
            for (c, p) in classes {
                let x = match p {
                    Value::Number(n) => n.as_f64(),
                    Value::String(s) => parse_ratio(s).map(|r| crate::weight::ratio_to_f64(&r)),
                    _ => None,
                }
                .ok_or_else(|| parse_err(format!("bad float weight {p}")))?;
                atoms.push((c, x));
            }
            Ok(AnyLaw::Float(NeighborhoodLaw::new(depth, atoms)?))
        }
        other => Err(parse_err(format!("unknown mode {other:?}"))),
    }
}

/// Degree law written as `k:p,k:p,...`, e.g. `2:1/2,3:1/2`.
pub fn parse_degree_law(s: &str) -> Result<DegreeLaw> {
    let mut pmf: Vec<BigRational> = Vec::new();
    for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (k, p) = item
            .split_once(':')
            .ok_or_else(|| parse_err(format!("expected k:p, got {item:?}")))?;
        let k: usize = k.trim().parse().map_err(|_| parse_err(format!("bad degree {k:?}")))?;
        let p = parse_ratio(p).ok_or_else(|| parse_err(format!("bad probability {p:?}")))?;
        if pmf.len() <= k {
            pmf.resize(k + 1, BigRational::from_integer(0.into()));
        }
        pmf[k] += p;
    }
    DegreeLaw::new(pmf)
}

fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn numbers<T: std::str::FromStr>(line: &str) -> Result<Vec<T>> {
    line.split_whitespace()
        .map(|x| x.parse().map_err(|_| parse_err(format!("bad number {x:?} in {line:?}"))))
        .collect()
}

fn header(lines: &mut dyn Iterator<Item = &str>) -> Result<(usize, usize)> {
    let h: Vec<usize> = numbers(lines.next().ok_or_else(|| parse_err("empty file"))?)?;
    match h[..] {
        [l, n] if l > 0 => Ok((l, n)),
        _ => Err(parse_err("header must be \"L n\" with L >= 1")),
    }
}

pub fn read_degree_sequence(text: &str) -> Result<DegreeSequence> {
    let mut lines = data_lines(text);
    let (l, n) = header(&mut lines)?;
    let rows: Vec<Vec<u32>> = lines.map(numbers).collect::<Result<_>>()?;
    if rows.len() != n {
        return Err(parse_err(format!("header says {n} rows, found {}", rows.len())));
    }
    DegreeSequence::from_dense(l, &rows)
}

pub fn write_degree_sequence(d: &DegreeSequence) -> String {
    let mut out = format!("{} {}\n", d.colors().l(), d.n());
    for u in 0..d.n() {
        let row: Vec<String> = d.dense_row(u).iter().map(u32::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_colored_graph(text: &str) -> Result<ColoredMultigraph> {
    let mut lines = data_lines(text);
    let (l, n) = header(&mut lines)?;
    let mut g = ColoredMultigraph::new(l, n);
    for line in lines {
        let f: Vec<usize> = numbers(line)?;
        let [u, v, i, j, k] = f[..] else {
            return Err(parse_err(format!("expected \"u v i j mult\", got {line:?}")));
        };
        if u >= n || v >= n || i >= l || j >= l {
            return Err(parse_err(format!("out of range: {line:?}")));
        }
        g.add_edges(i * l + j, u, v, k as u32);
    }
    Ok(g)
}

pub fn write_colored_graph(g: &ColoredMultigraph) -> String {
    let l = g.colors().l();
    let mut out = format!("{l} {}\n", g.n());
    for (c, u, v, k) in g.edge_list() {
        let _ = writeln!(out, "{u} {v} {} {} {k}", c / l, c % l);
    }
    out
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("# n {}\n", g.vertex_count());
    let mut edges = g.edges();
    edges.sort();
    let mut i = 0;
    while i < edges.len() {
        let e = edges[i];
        let k = edges[i..].iter().take_while(|&&x| x == e).count();
        let _ = writeln!(out, "{} {} {k}", e.0, e.1);
        i += k;
    }
    out
}

pub fn read_edge_list(text: &str) -> Result<Graph> {
    let mut n = 0usize;
    let mut edges = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(count) = rest.trim().strip_prefix('n') {
                n = n.max(count.trim().parse().map_err(|_| parse_err(format!("bad header {line:?}")))?);
            }
            continue;
        }
        let f: Vec<usize> = numbers(line)?;
        let (u, v, k) = match f[..] {
            [u, v] => (u, v, 1),
            [u, v, k] => (u, v, k),
            _ => return Err(parse_err(format!("expected \"u v [mult]\", got {line:?}"))),
        };
        n = n.max(u + 1).max(v + 1);
        edges.extend(std::iter::repeat_n((u, v), k));
    }
    Ok(Graph::from_edges(n, &edges))
}

/// A sampled tree as its canonical encoding and a parent-child edge list.
pub fn tree_to_json(t: &LabeledRootedGraph) -> Value {
    let h = t.height();
    json!({
        "root": t.root,
        "vertices": t.vertex_count(),
        "encoding": canonicalize(t, h).encoding(),
        "edges": t.graph.edges(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::rational;

    #[test]
    fn law_round_trip() {
        let p = NeighborhoodLaw::from_fractions(2, &[("((()))", 1, 3), ("(()())", 2, 3)]).unwrap();
        let text = law_to_json(&p).to_string();
        assert_eq!(read_law(&text).unwrap(), AnyLaw::Rational(p.clone()));
        let f = p.to_f64();
        let text = float_law_to_json(&f).to_string();
        assert_eq!(read_law(&text).unwrap(), AnyLaw::Float(f));
        assert!(read_law(r#"{"depth": 1, "support": [{"class": "(())", "p": "1/2"}]}"#).is_err());
        assert!(read_law(r#"{"depth": 1, "mode": "x", "support": []}"#).is_err());
    }

    #[test]
    fn degree_law_parsing() {
        let p = parse_degree_law("2:1/2, 3:1/2").unwrap();
        assert_eq!(p.prob(2), rational(1, 2));
        assert!(parse_degree_law("2:1/2").is_err());
    }

    #[test]
    fn degree_file_round_trip() {
        let d = DegreeSequence::from_dense(2, &[vec![1, 1, 1, 1], vec![1, 1, 1, 1]]).unwrap();
        let text = write_degree_sequence(&d);
        assert!(text.starts_with("2 2\n1 1 1 1\n"));
        assert_eq!(read_degree_sequence(&text).unwrap(), d);
        assert!(read_degree_sequence("1 3\n1\n1\n").is_err());
    }

    #[test]
    fn colored_graph_round_trip() {
        let mut g = ColoredMultigraph::new(2, 3);
        g.add_edge(0, 0, 0);
        g.add_edges(1, 0, 1, 2);
        g.add_edge(3, 1, 2);
        let text = write_colored_graph(&g);
        assert_eq!(read_colored_graph(&text).unwrap(), g);
        // a C_< edge may be written from either end
        let mut h = ColoredMultigraph::new(2, 2);
        h.add_edge(2, 1, 0);
        assert_eq!(read_colored_graph("2 2\n0 1 0 1 1\n").unwrap(), h);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 1), (1, 2), (3, 3)]);
        let back = read_edge_list(&write_edge_list(&g)).unwrap();
        assert_eq!(back.vertex_count(), 5);
        let (mut a, mut b) = (back.edges(), g.edges());
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
}
