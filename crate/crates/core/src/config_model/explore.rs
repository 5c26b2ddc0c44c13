use std::collections::{BTreeMap, HashMap, VecDeque};

use rand::Rng;

use crate::error::{Error, Result};

use super::{ColoredMultigraph, DegreeSequence};

/// The depth-`k` ball around a vertex revealed by the exploration process.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExploredBall {
    /// Ball on local vertices; the root is vertex 0.
    pub graph: ColoredMultigraph,
    /// Original label of each local vertex.
    pub vertices: Vec<usize>,
    /// Whether the colorblind ball is a tree.
    pub is_tree: bool,
}

struct Pool {
    /// `offsets[u]..offsets[u + 1]` are the half-edges of `u`.
    offsets: Vec<usize>,
    free: Vec<usize>,
    pos: Vec<usize>,
}

impl Pool {
    fn new(d: &DegreeSequence, c: usize) -> Self {
        let mut offsets = Vec::with_capacity(d.n() + 1);
        offsets.push(0);
        for u in 0..d.n() {
            offsets.push(offsets[u] + d.get(u, c) as usize);
        }
        let s = offsets[d.n()];
        Pool {
            offsets,
            free: (0..s).collect(),
            pos: (0..s).collect(),
        }
    }

    fn is_free(&self, e: usize) -> bool {
        self.pos[e] != usize::MAX
    }

    fn remove(&mut self, e: usize) {
        let i = self.pos[e];
        let last = *self.free.last().expect("nonempty");
        self.free.swap_remove(i);
        if last != e {
            self.pos[last] = i;
        }
        self.pos[e] = usize::MAX;
    }

    fn owner(&self, e: usize) -> usize {
        self.offsets.partition_point(|&o| o <= e) - 1
    }
}

/// Reveals the depth-`k` neighborhood of `v` in `Γ(σ)`, `σ` uniform, one
/// half-edge at a time. Vertices are processed in discovery order and each
/// vertex's half-edges by color then index; an unmatched half-edge of color
/// `c` is paired with a uniform unmatched half-edge of color `c̄`. Half-edges
/// of vertices at distance `k` are paired too, but only edges that stay in
/// the ball are kept.
pub fn explore_neighborhood<R: Rng + ?Sized>(
    d: &DegreeSequence,
    v: usize,
    k: usize,
    rng: &mut R,
) -> Result<ExploredBall> {
    d.validate()?;
    if v >= d.n() {
        return Err(Error::InvalidDegreeSequence(format!("vertex {v} out of range")));
    }
    let cs = d.colors();
    let mut pools: BTreeMap<usize, Pool> = BTreeMap::new();
    for c in d.totals().into_keys() {
        pools.insert(c, Pool::new(d, c));
    }
    let mut local: HashMap<usize, usize> = HashMap::from([(v, 0)]);
    let mut vertices = vec![v];
    let mut dist = vec![0usize];
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut queue = VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        let lx = local[&x];
        for &(c, _) in d.row(x) {
            let cb = cs.conj(c);
            let (start, end) = {
                let p = &pools[&c];
                (p.offsets[x], p.offsets[x + 1])
            };
            for e in start..end {
                if !pools[&c].is_free(e) {
                    continue;
                }
                pools.get_mut(&c).expect("pool").remove(e);
                let partner = pools.get_mut(&cb).expect("conjugate pool");
                let y = partner.free[rng.random_range(0..partner.free.len())];
                partner.remove(y);
                let z = partner.owner(y);
                let lz = match local.get(&z) {
                    Some(&lz) => lz,
                    None if dist[lx] < k => {
                        let lz = vertices.len();
                        local.insert(z, lz);
                        vertices.push(z);
                        dist.push(dist[lx] + 1);
                        queue.push_back(z);
                        lz
                    }
                    None => continue,
                };
                edges.push((c, lx, lz));
            }
        }
    }
    let mut graph = ColoredMultigraph::new(cs.l(), vertices.len());
    for (c, a, b) in edges {
        graph.add_edge(c, a, b);
    }
    let is_tree = graph.colorblind().is_tree();
    Ok(ExploredBall {
        graph,
        vertices,
        is_tree,
    })
}
