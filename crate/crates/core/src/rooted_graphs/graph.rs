use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

/// Undirected multigraph on `0..n` stored as adjacency lists. A neighbor
/// appears once per parallel edge; a loop at `u` appears twice in `adj[u]`,
/// so `degree` counts a loop twice.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u].push(v);
        self.adj[v].push(u);
    }

    /// Removes one copy of the edge `{u, v}`; returns false if absent.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u == v {
            let count = self.adj[u].iter().filter(|&&x| x == u).count();
            if count < 2 {
                return false;
            }
            for _ in 0..2 {
                let pos = self.adj[u].iter().position(|&x| x == u).unwrap();
                self.adj[u].swap_remove(pos);
            }
            return true;
        }
        let Some(pu) = self.adj[u].iter().position(|&x| x == v) else {
            return false;
        };
        self.adj[u].swap_remove(pu);
        let pv = self.adj[v].iter().position(|&x| x == u).unwrap();
        self.adj[v].swap_remove(pv);
        true
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> usize {
        let c = self.adj[u].iter().filter(|&&x| x == v).count();
        if u == v {
            c / 2
        } else {
            c
        }
    }

    pub fn loop_count(&self, u: usize) -> usize {
        self.multiplicity(u, u)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// All edges as `(u, v)` with `u <= v`, one entry per parallel copy.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nbrs) in self.adj.iter().enumerate() {
            let mut loops = 0;
            for &v in nbrs {
                if u < v {
                    out.push((u, v));
                } else if u == v {
                    loops += 1;
                }
            }
            out.extend(std::iter::repeat_n((u, u), loops / 2));
        }
        out.sort_unstable();
        out
    }

    pub fn is_simple(&self) -> bool {
        self.adj.iter().enumerate().all(|(u, nbrs)| {
            let mut seen = nbrs.clone();
            seen.sort_unstable();
            !seen.contains(&u) && seen.windows(2).all(|w| w[0] != w[1])
        })
    }

    /// Breadth-first distances from `root`, stopping at `limit` if given.
    pub fn distances(&self, root: usize, limit: Option<usize>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[root] = Some(0);
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x].unwrap();
            if limit.is_some_and(|l| dx >= l) {
                continue;
            }
            for &y in &self.adj[x] {
                if dist[y].is_none() {
                    dist[y] = Some(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Induced rooted subgraph on the vertices within distance `h` of `root`.
    /// Local ids follow BFS order (root is 0); the second component maps
    /// local ids back to ids in `self`.
    pub fn ball(&self, root: usize, h: usize) -> (LabeledRootedGraph, Vec<usize>) {
        let mut order = vec![root];
        let mut local: HashMap<usize, usize> = HashMap::from([(root, 0)]);
        let mut depth = vec![0usize];
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            let dx = depth[head];
            head += 1;
            if dx == h {
                continue;
            }
            for &y in &self.adj[x] {
                if let std::collections::hash_map::Entry::Vacant(e) = local.entry(y) {
                    e.insert(order.len());
                    order.push(y);
                    depth.push(dx + 1);
                }
            }
        }
        let mut g = Graph::new(order.len());
        for (lx, &x) in order.iter().enumerate() {
            let mut loops = 0;
            for &y in &self.adj[x] {
                match local.get(&y) {
                    Some(&ly) if lx < ly => g.add_edge(lx, ly),
                    Some(&ly) if lx == ly => loops += 1,
                    _ => {}
                }
            }
            for _ in 0..loops / 2 {
                g.add_edge(lx, lx);
            }
        }
        (LabeledRootedGraph { graph: g, root: 0 }, order)
    }

    pub fn component(&self, root: usize) -> (LabeledRootedGraph, Vec<usize>) {
        self.ball(root, usize::MAX)
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.distances(0, None).iter().all(Option::is_some)
    }

    /// True iff connected, loop-free, without parallel edges and with
    /// `|E| = |V| - 1`.
    pub fn is_tree(&self) -> bool {
        self.vertex_count() > 0
            && self.edge_count() + 1 == self.vertex_count()
            && self.is_simple()
            && self.is_connected()
    }

    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::new(self.vertex_count());
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }
}

/// A graph with a distinguished root vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledRootedGraph {
    pub graph: Graph,
    pub root: usize,
}

impl LabeledRootedGraph {
    pub fn new(graph: Graph, root: usize) -> Self {
        assert!(root < graph.vertex_count(), "root outside the vertex set");
        LabeledRootedGraph { graph, root }
    }

    pub fn isolated() -> Self {
        LabeledRootedGraph::new(Graph::new(1), 0)
    }

    /// `G(u, v)`: the component of `v` once one copy of `{u, v}` is removed,
    /// rooted at `v`.
    pub fn split_at_edge(&self, u: usize, v: usize) -> Result<LabeledRootedGraph> {
        let mut g = self.graph.clone();
        if !g.remove_edge(u, v) {
            return Err(Error::EdgeAbsent(u, v));
        }
        Ok(g.component(v).0)
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Largest distance from the root to a vertex in its component.
    pub fn height(&self) -> usize {
        self.graph
            .distances(self.root, None)
            .into_iter()
            .flatten()
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loops_and_multiplicities() {
        let mut g = Graph::new(2);
        g.add_edge(0, 0);
        g.add_edge(0, 1);
        g.add_edge(0, 1);
        assert_eq!(g.degree(0), 4);
        assert_eq!(g.loop_count(0), 1);
        assert_eq!(g.multiplicity(1, 0), 2);
        assert_eq!(g.edges(), vec![(0, 0), (0, 1), (0, 1)]);
        assert!(!g.is_simple());
        assert!(g.remove_edge(0, 0));
        assert!(!g.remove_edge(0, 0));
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn ball_is_induced() {
        // Triangle with a pendant: the depth-1 ball of 0 keeps the edge 1-2.
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]);
        let (b, map) = g.ball(0, 1);
        assert_eq!(b.vertex_count(), 3);
        assert_eq!(b.graph.edge_count(), 3);
        assert_eq!(map[0], 0);
    }

    #[test]
    fn split_examples() {
        let single = LabeledRootedGraph::new(Graph::path(2), 0);
        let s = single.split_at_edge(0, 1).unwrap();
        assert_eq!(s.vertex_count(), 1);

        let path = LabeledRootedGraph::new(Graph::path(3), 0);
        assert_eq!(path.split_at_edge(1, 2).unwrap().vertex_count(), 1);
        assert!(matches!(path.split_at_edge(0, 2), Err(Error::EdgeAbsent(0, 2))));

        // Triangle a=0, b=1, c=2 split at (a, b): path b-c-a rooted at b.
        let tri = LabeledRootedGraph::new(Graph::cycle(3), 0);
        let s = tri.split_at_edge(0, 1).unwrap();
        assert_eq!(s.vertex_count(), 3);
        assert_eq!(s.graph.edge_count(), 2);
        assert_eq!(s.graph.degree(s.root), 1);
    }
}
