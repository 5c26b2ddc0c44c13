use rand::Rng;

use crate::error::{Error, Result};
use crate::rooted_graphs::{Graph, LabeledRootedGraph};
use crate::weight::Weight;

use super::degree::{DegreeLaw, DegreeSampler};

/// Two-type unimodular Galton-Watson tree `UGW(P₁, P₂)`.
#[derive(Clone, Debug)]
pub struct BipartiteSampler {
    p1: f64,
    root: [DegreeSampler; 2],
    deeper: [DegreeSampler; 2],
}

/// Probability that the root has type 1: `d₂ / (d₁ + d₂)`.
pub fn root_type_probability<W: Weight>(p1: &DegreeLaw<W>, p2: &DegreeLaw<W>) -> Result<W> {
    let (d1, d2) = (p1.mean(), p2.mean());
    if !d1.is_positive() || !d2.is_positive() {
        return Err(Error::ZeroMean);
    }
    Ok(d2.clone() / (d1 + d2))
}

impl BipartiteSampler {
    pub fn new<W: Weight>(p1: &DegreeLaw<W>, p2: &DegreeLaw<W>) -> Result<Self> {
        let prob = root_type_probability(p1, p2)?.to_f64();
        let f = |p: &DegreeLaw<W>| DegreeSampler::new(p.to_f64().pmf());
        let g = |p: &DegreeLaw<W>| -> Result<DegreeSampler> { Ok(f(&p.size_biased()?)) };
        Ok(BipartiteSampler {
            p1: prob,
            root: [f(p1), f(p2)],
            deeper: [g(p1)?, g(p2)?],
        })
    }

    /// Returns the depth-`k` tree and the type (0 or 1) of every vertex.
    pub fn sample<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> (LabeledRootedGraph, Vec<u8>) {
        let root_type = if rng.random::<f64>() < self.p1 { 0u8 } else { 1 };
        let mut g = Graph::new(1);
        let mut types = vec![root_type];
        let mut frontier = vec![(0usize, self.root[root_type as usize].sample(rng))];
        for _ in 0..k {
            let mut next = Vec::new();
            for (x, children) in frontier {
                let t = 1 - types[x];
                for _ in 0..children {
                    let y = g.add_vertex();
                    g.add_edge(x, y);
                    types.push(t);
                    next.push((y, self.deeper[t as usize].sample(rng)));
                }
            }
            frontier = next;
        }
        (LabeledRootedGraph::new(g, 0), types)
    }
}

pub fn sample_ugw_bipartite<W: Weight, R: Rng + ?Sized>(
    p1: &DegreeLaw<W>,
    p2: &DegreeLaw<W>,
    k: usize,
    rng: &mut R,
) -> Result<LabeledRootedGraph> {
    Ok(BipartiteSampler::new(p1, p2)?.sample(k, rng).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rooted_graphs::canonicalize;
    use crate::weight::rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn root_probability() {
        let (a, b): (DegreeLaw, DegreeLaw) = (DegreeLaw::point_mass(2), DegreeLaw::point_mass(3));
        assert_eq!(root_type_probability(&a, &b).unwrap(), rational(3, 5));
        assert!(root_type_probability(&a, &DegreeLaw::point_mass(0)).is_err());
    }

    #[test]
    fn biregular_tree_alternates() {
        let (a, b): (DegreeLaw, DegreeLaw) = (DegreeLaw::point_mass(2), DegreeLaw::point_mass(3));
        let s = BipartiteSampler::new(&a, &b).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let (t, types) = s.sample(3, &mut rng);
            for v in 0..t.vertex_count() {
                let want = if types[v] == 0 { 2 } else { 3 };
                let deg = t.graph.degree(v);
                let dist = t.graph.distances(0, None)[v].unwrap();
                if dist < 3 {
                    assert_eq!(deg, want);
                }
            }
            for (u, v) in t.graph.edges() {
                assert_ne!(types[u], types[v]);
            }
        }
        let (t, types) = s.sample(2, &mut rng);
        let expect = if types[0] == 0 { "((()())(()()))" } else { "((())(())(()))" };
        assert_eq!(canonicalize(&t, 2).encoding(), expect);
    }
}
