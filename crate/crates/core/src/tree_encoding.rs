//! Encoding of `h`-tree-like graphs as colored multigraphs and the count
//! `N_h(G) = n(D) |𝒢(D, 2h+1)|`.
//!
//! Every edge `{u, v}` of `G` becomes a directed edge `(u, v)` of color
//! `(G(u,v)_{h-1}, G(v,u)_{h-1})` plus its conjugate, where `G(u,v)` is `G`
//! without the edge, rooted at `v`. Any colored multigraph with the same
//! degree sequence and no cycle of length `<= 2h+1` has the same multiset of
//! depth-`h` neighborhoods as `G`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use rand::Rng;
use serde::Serialize;

use crate::combinatorics::{factorial, ln_factorial};
use crate::config_model::{
    for_each_configuration, has_cycle_leq, ColoredMultigraph, DegreeSequence, GdhSampler,
};
use crate::error::{Error, Result};
use crate::neighborhood::vertex_classes;
use crate::rooted_graphs::{CanonicalClass, Graph};

/// `ψ_h(G)`: the depth-`h` class of every vertex.
pub fn psi_h(g: &Graph, h: usize) -> Vec<CanonicalClass> {
    vertex_classes(g, h)
}

/// No cycle of length `<= 2h+1`.
pub fn is_h_treelike(g: &Graph, h: usize) -> bool {
    !has_cycle_leq(g, 2 * h + 1)
}

/// The split classes `𝓕` of a graph, sorted by encoding, and the color
/// index of each ordered pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodingContext {
    pub h: usize,
    pub types: Vec<CanonicalClass>,
    index: HashMap<CanonicalClass, usize>,
}

#[derive(Serialize)]
struct ContextJson<'a> {
    schema: &'a str,
    h: usize,
    types: Vec<&'a str>,
    colors: Vec<(usize, &'a str, &'a str)>,
}

impl EncodingContext {
    fn new(h: usize, mut types: Vec<CanonicalClass>) -> Self {
        types.sort();
        types.dedup();
        let index = types.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        EncodingContext { h, types, index }
    }

    pub fn l(&self) -> usize {
        self.types.len()
    }

    pub fn color(&self, t: CanonicalClass, t_prime: CanonicalClass) -> Option<usize> {
        Some(self.index.get(&t)? * self.l() + self.index.get(&t_prime)?)
    }

    /// The pair of split classes behind a color.
    pub fn pair(&self, c: usize) -> (CanonicalClass, CanonicalClass) {
        (self.types[c / self.l()], self.types[c % self.l()])
    }

    pub fn to_json(&self) -> serde_json::Value {
        let l = self.l();
        let doc = ContextJson {
            schema: crate::SCHEMA,
            h: self.h,
            types: self.types.iter().map(|t| t.encoding()).collect(),
            colors: (0..l * l)
                .map(|c| {
                    let (a, b) = self.pair(c);
                    (c, a.encoding(), b.encoding())
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("serializable")
    }
}

/// `split[(u, v)] = G(u,v)_{h-1}`, the depth-`(h-1)` tree hanging at `v` away
/// from `u`. Only meaningful when `G` is `h`-tree-like, where the
/// non-backtracking view from `v` is the ball itself.
fn split_classes(g: &Graph, h: usize) -> BTreeMap<(usize, usize), CanonicalClass> {
    let directed: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .flat_map(|(u, v)| [(u, v), (v, u)])
        .collect();
    let mut current: BTreeMap<(usize, usize), CanonicalClass> =
        directed.iter().map(|&e| (e, CanonicalClass::isolated())).collect();
    for _ in 1..h {
        let next = directed
            .iter()
            .map(|&(u, v)| {
                let children = g
                    .neighbors(v)
                    .iter()
                    .filter(|&&w| w != u)
                    .map(|&w| current[&(v, w)])
                    .collect();
                ((u, v), CanonicalClass::tree(children))
            })
            .collect();
        current = next;
    }
    current
}

/// `G -> G̃`, with the context and the degree sequence `D(G̃)`.
pub fn encode(g: &Graph, h: usize) -> Result<(ColoredMultigraph, EncodingContext, DegreeSequence)> {
    if h == 0 || !is_h_treelike(g, h) {
        return Err(Error::NotTreeLike(h));
    }
    let split = split_classes(g, h);
    let ctx = EncodingContext::new(h, split.values().copied().collect());
    let mut out = ColoredMultigraph::new(ctx.l().max(1), g.vertex_count());
    for (u, v) in g.edges() {
        let c = ctx.color(split[&(u, v)], split[&(v, u)]).expect("known split");
        out.add_edge(c, u, v);
    }
    let d = out.degree_sequence();
    Ok((out, ctx, d))
}

fn sorted(mut v: Vec<CanonicalClass>) -> Vec<CanonicalClass> {
    v.sort();
    v
}

/// Samples `samples` graphs uniformly from `𝒢(D(G̃), 2h+1)` and checks that
/// each has the same multiset of depth-`h` classes as `G`.
pub fn verify_treelike_lemma<R: Rng + ?Sized>(
    g: &Graph,
    h: usize,
    samples: usize,
    rng: &mut R,
) -> Result<bool> {
    let (_, _, d) = encode(g, h)?;
    let want = sorted(psi_h(g, h));
    let mut sampler = GdhSampler::new(d, 2 * h + 1)?;
    for _ in 0..samples {
        let gamma = sampler.sample(rng)?;
        if sorted(psi_h(&gamma.colorblind(), h)) != want {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Number of distinct orderings of the rows of `D`: `n! / ∏ (multiplicity)!`.
pub fn n_of_d(d: &DegreeSequence) -> BigUint {
    let mut counts: BTreeMap<&[(usize, u32)], u64> = BTreeMap::new();
    for row in d.rows() {
        *counts.entry(row.as_slice()).or_default() += 1;
    }
    counts
        .values()
        .fold(factorial(d.n() as u64), |acc, &k| acc / factorial(k))
}

/// `|𝒢(D, h)|` by enumerating `Σ`: a simple colored graph has fiber
/// `∏_c ∏_u D_c(u)!`, so it is `#{σ : Γ(σ) ∈ 𝒢(D,h)} / ∏ D_c(u)!`.
pub fn count_g_dh(d: &DegreeSequence, h: usize) -> Result<BigUint> {
    let mut hits = 0u64;
    for_each_configuration(d, |s| {
        if !has_cycle_leq(&s.graph().colorblind(), h) {
            hits += 1;
        }
    })?;
    let fiber = d
        .rows()
        .iter()
        .flatten()
        .fold(BigUint::from(1u32), |acc, &(_, k)| acc * factorial(k as u64));
    Ok(BigUint::from(hits) / fiber)
}

/// `N_h(G) = n(D) |𝒢(D, 2h+1)|`, exact; configuration enumeration bounds the
/// size.
pub fn count_nh_exact(g: &Graph, h: usize) -> Result<BigUint> {
    let (_, _, d) = encode(g, h)?;
    Ok(n_of_d(&d) * count_g_dh(&d, 2 * h + 1)?)
}

/// Per-vertex log-count estimate
/// `(1/n) log(n(D) ∏_{C_<} S_c! ∏_{C_=} (S_c-1)!! / ∏ D_c(u)!) - (m/n) log n`,
/// leaving out the `log α` term, which is `o(n)`.
pub fn count_nh_log_asymptotic(g: &Graph, h: usize) -> Result<f64> {
    let (_, _, d) = encode(g, h)?;
    let n = d.n() as f64;
    let cs = d.colors();
    let mut log = 0.0;
    let mut counts: BTreeMap<&[(usize, u32)], u64> = BTreeMap::new();
    for row in d.rows() {
        *counts.entry(row.as_slice()).or_default() += 1;
    }
    log += ln_factorial(d.n() as u64) - counts.values().map(|&k| ln_factorial(k)).sum::<f64>();
    for (c, s) in d.totals() {
        if cs.is_less(c) {
            log += ln_factorial(s);
        } else if cs.is_diagonal(c) {
            // (S-1)!! = S! / ((S/2)! 2^{S/2})
            log += ln_factorial(s) - ln_factorial(s / 2) - (s / 2) as f64 * std::f64::consts::LN_2;
        }
    }
    log -= d.rows().iter().flatten().map(|&(_, k)| ln_factorial(k as u64)).sum::<f64>();
    let m = g.edge_count() as f64;
    Ok(log / n - m / n * n.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// A 9-vertex tree with vertices of degree 1 to 4.
    fn nine_vertex_tree() -> Graph {
        Graph::from_edges(
            9,
            &[(0, 1), (0, 2), (0, 3), (0, 6), (1, 4), (2, 5), (3, 7), (3, 8)],
        )
    }

    #[test]
    fn psi_examples() {
        let p = psi_h(&Graph::path(3), 1);
        let enc: Vec<_> = p.iter().map(|c| c.encoding()).collect();
        assert_eq!(enc, vec!["(())", "(()())", "(())"]);
        assert!(psi_h(&Graph::new(3), 2).iter().all(|c| *c == CanonicalClass::isolated()));
        let petersen = Graph::from_edges(
            10,
            &[
                (0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
                (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
            ],
        );
        let classes = psi_h(&petersen, 2);
        assert!(classes.iter().all(|&c| c == classes[0]));
    }

    #[test]
    fn tree_likeness() {
        assert!(is_h_treelike(&nine_vertex_tree(), 5));
        assert!(is_h_treelike(&Graph::cycle(6), 2));
        assert!(!is_h_treelike(&Graph::cycle(6), 3));
        assert!(!is_h_treelike(&Graph::cycle(3), 1));
        assert!(encode(&Graph::cycle(3), 1).is_err());
    }

    #[test]
    fn encoding_examples() {
        let edge = Graph::path(2);
        let (g, ctx, d) = encode(&edge, 1).unwrap();
        assert_eq!(ctx.l(), 1);
        assert_eq!(g.omega(0, 0, 1), 1);
        assert_eq!(d.row(0), &[(0, 1)]);

        // path 0-1-2 at h = 1: every split is a single vertex
        let (_, ctx, _) = encode(&Graph::path(3), 1).unwrap();
        assert_eq!(ctx.l(), 1);
        // at h = 2 the splits are "()" (leaf seen from the middle) and "(())"
        let (g, ctx, d) = encode(&Graph::path(3), 2).unwrap();
        assert_eq!(ctx.types.iter().map(|t| t.encoding()).collect::<Vec<_>>(), vec!["(())", "()"]);
        let leaf = ctx.color(CanonicalClass::isolated(), CanonicalClass::star(1)).unwrap();
        assert_eq!(g.omega(leaf, 1, 0), 1);
        assert_eq!(d.row(1), &[(leaf, 2)]);

    }

    /// Split classes straight from the definition: delete the edge, take the
    /// ball of radius `h-1` around the head.
    fn split_oracle(g: &Graph, h: usize) -> Vec<CanonicalClass> {
        let mut out = Vec::new();
        for (u, v) in g.edges() {
            for (a, b) in [(u, v), (v, u)] {
                let mut cut = g.clone();
                cut.remove_edge(a, b);
                out.push(crate::rooted_graphs::canonicalize(&cut.ball(b, h - 1).0, h - 1));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn splits_match_definition() {
        for (g, h) in [
            (nine_vertex_tree(), 1),
            (nine_vertex_tree(), 2),
            (nine_vertex_tree(), 3),
            (Graph::cycle(8), 3),
            (Graph::path(6), 4),
        ] {
            let (_, ctx, _) = encode(&g, h).unwrap();
            assert_eq!(ctx.types, split_oracle(&g, h), "h = {h}");
        }
    }

    #[test]
    fn round_trip_and_girth() {
        for (g, h) in [(nine_vertex_tree(), 3), (Graph::cycle(6), 2), (Graph::cycle(9), 3)] {
            let (enc, _, d) = encode(&g, h).unwrap();
            let mut got = enc.colorblind().edges();
            let mut want = g.edges();
            got.sort();
            want.sort();
            assert_eq!(got, want);
            assert!(!has_cycle_leq(&enc.colorblind(), 2 * h + 1));
            assert!(d.validate().is_ok());
        }
    }

    #[test]
    fn treelike_lemma() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(verify_treelike_lemma(&nine_vertex_tree(), 3, 100, &mut rng).unwrap());
        assert!(verify_treelike_lemma(&Graph::cycle(6), 2, 100, &mut rng).unwrap());
    }

    #[test]
    fn n_of_d_examples() {
        assert_eq!(n_of_d(&DegreeSequence::scalar(&[1, 1, 2])), BigUint::from(3u32));
        assert_eq!(n_of_d(&DegreeSequence::scalar(&[3, 3, 3, 3])), BigUint::from(1u32));
        assert_eq!(n_of_d(&DegreeSequence::scalar(&[0, 1, 2, 3])), BigUint::from(24u32));
    }

    #[test]
    fn exact_counts() {
        assert_eq!(count_nh_exact(&Graph::path(3), 1).unwrap(), BigUint::from(3u32));
        let two_edges = Graph::from_edges(4, &[(0, 1), (2, 3)]);
        assert_eq!(count_nh_exact(&two_edges, 1).unwrap(), BigUint::from(3u32));
    }

    #[test]
    fn context_json() {
        let (_, ctx, _) = encode(&Graph::path(3), 2).unwrap();
        let v = ctx.to_json();
        assert_eq!(v["schema"], crate::SCHEMA);
        assert_eq!(v["types"].as_array().unwrap().len(), 2);
        assert_eq!(v["colors"].as_array().unwrap().len(), 4);
    }
}
