use std::collections::BTreeMap;

use num_rational::BigRational;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::error::{Error, Result};
use crate::neighborhood::NeighborhoodLaw;
use crate::rooted_graphs::{CanonicalClass, Graph, LabeledRootedGraph};
use crate::weight::Weight;

use super::typed::TypedBranchingLaw;

#[derive(Clone, Debug)]
struct Categorical {
    atoms: Vec<CanonicalClass>,
    index: WeightedIndex<f64>,
}

impl Categorical {
    fn new<W: Weight>(law: &NeighborhoodLaw<W>) -> Result<Self> {
        let atoms: Vec<_> = law.support().keys().copied().collect();
        let weights: Vec<f64> = law.support().values().map(Weight::to_f64).collect();
        let index = WeightedIndex::new(weights)
            .map_err(|e| Error::InvalidLaw(format!("cannot sample: {e}")))?;
        Ok(Categorical { atoms, index })
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> CanonicalClass {
        self.atoms[self.index.sample(rng)]
    }
}

/// Sampler for `UGW_h(P)` truncated at any depth `k`.
#[derive(Clone, Debug)]
pub struct UgwSampler {
    h: usize,
    root: Categorical,
    table: BTreeMap<(CanonicalClass, CanonicalClass), Categorical>,
}

impl UgwSampler {
    pub fn new<W: Weight>(p: &NeighborhoodLaw<W>) -> Result<Self> {
        let typed = TypedBranchingLaw::new(p)?;
        let table = typed
            .table
            .iter()
            .map(|(k, law)| Ok((*k, Categorical::new(law)?)))
            .collect::<Result<_>>()?;
        Ok(UgwSampler {
            h: p.depth(),
            root: Categorical::new(p)?,
            table,
        })
    }

    /// Depth-`k` truncation of one sample. The root block comes from `P`;
    /// then, generation by generation, every vertex `v` with parent `u` gets
    /// its depth-`h` subtree from `P̂_{t,t'}` where
    /// `(t, t') = (T(u,v)_{h-1}, T(v,u)_{h-1})` is read off the tree built
    /// so far.
    pub fn sample<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> Result<LabeledRootedGraph> {
        let h = self.h;
        let mut tree = Arena::default();
        tree.add_node(None);
        tree.realize(0, self.root.sample(rng));
        for generation in 1..=k.saturating_sub(h) {
            let layer: Vec<usize> = (0..tree.len()).filter(|&x| tree.generation[x] == generation).collect();
            for v in layer {
                let u = tree.parent[v].expect("non-root");
                let t = tree.view(v, Some(u), h - 1);
                let t_prime = tree.view(u, Some(v), h - 1);
                let law = self.table.get(&(t, t_prime)).ok_or_else(|| {
                    Error::NotAdmissible(format!("no branching law for type ({t}, {t_prime})"))
                })?;
                let tau = law.sample(rng);
                tree.graft(v, tau, h - 1);
            }
        }
        Ok(tree.to_graph(k))
    }
}

/// Convenience wrapper building a fresh sampler.
pub fn sample_ugw_h<W: Weight, R: Rng + ?Sized>(
    p: &NeighborhoodLaw<W>,
    k: usize,
    rng: &mut R,
) -> Result<LabeledRootedGraph> {
    UgwSampler::new(p)?.sample(k, rng)
}

/// Empirical depth-`k` law of `samples` independent draws.
pub fn empirical_ugw_law<R: Rng + ?Sized>(
    sampler: &UgwSampler,
    k: usize,
    samples: usize,
    rng: &mut R,
) -> Result<NeighborhoodLaw> {
    let mut counts: BTreeMap<CanonicalClass, u64> = BTreeMap::new();
    for _ in 0..samples {
        let t = sampler.sample(k, rng)?;
        *counts.entry(crate::rooted_graphs::canonicalize(&t, k)).or_default() += 1;
    }
    NeighborhoodLaw::new(
        k,
        counts
            .into_iter()
            .map(|(c, n)| (c, BigRational::from_ratio(n, samples as u64))),
    )
}

#[derive(Default, Debug)]
struct Arena {
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    generation: Vec<usize>,
}

impl Arena {
    fn len(&self) -> usize {
        self.parent.len()
    }

    fn add_node(&mut self, parent: Option<usize>) -> usize {
        let id = self.parent.len();
        self.parent.push(parent);
        self.children.push(Vec::new());
        self.generation.push(parent.map_or(0, |p| self.generation[p] + 1));
        if let Some(p) = parent {
            self.children[p].push(id);
        }
        id
    }

    /// Adds fresh descendants below a childless node `x` realizing `class`.
    fn realize(&mut self, x: usize, class: CanonicalClass) {
        let mut stack = vec![(x, class)];
        while let Some((y, c)) = stack.pop() {
            for &child in c.children() {
                let z = self.add_node(Some(y));
                stack.push((z, child));
            }
        }
    }

    /// Class of the component of `x` away from `from`, truncated at `depth`.
    fn view(&self, x: usize, from: Option<usize>, depth: usize) -> CanonicalClass {
        if depth == 0 {
            return CanonicalClass::isolated();
        }
        let nbrs = self.parent[x].into_iter().chain(self.children[x].iter().copied());
        CanonicalClass::tree(
            nbrs.filter(|&y| Some(y) != from)
                .map(|y| self.view(y, Some(x), depth - 1))
                .collect(),
        )
    }

    /// Extends the subtree below `x`, currently known to depth `known`, so
    /// that it becomes `class`. Existing children are matched to child
    /// patterns of `class` by their truncations; any matching is equivalent
    /// because nothing below the known depth exists yet.
    fn graft(&mut self, x: usize, class: CanonicalClass, known: usize) {
        if known == 0 {
            debug_assert!(self.children[x].is_empty());
            self.realize(x, class);
            return;
        }
        let mut free = self.children[x].clone();
        debug_assert_eq!(free.len(), class.root_degree());
        for &cc in class.children() {
            let want = cc.truncate(known - 1);
            let pos = free
                .iter()
                .position(|&y| self.view(y, Some(x), known - 1) == want)
                .expect("sampled block extends the known subtree");
            let y = free.swap_remove(pos);
            self.graft(y, cc, known - 1);
        }
    }

    fn to_graph(&self, k: usize) -> LabeledRootedGraph {
        let keep: Vec<usize> = (0..self.len()).filter(|&x| self.generation[x] <= k).collect();
        let mut index = vec![usize::MAX; self.len()];
        for (i, &x) in keep.iter().enumerate() {
            index[x] = i;
        }
        let mut g = Graph::new(keep.len());
        for &x in &keep {
            if let Some(p) = self.parent[x] {
                g.add_edge(index[p], index[x]);
            }
        }
        LabeledRootedGraph::new(g, 0)
    }
}
