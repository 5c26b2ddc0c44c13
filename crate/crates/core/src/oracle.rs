//! Brute-force enumerators for checking the closed forms. Everything here is
//! exponential on purpose and shares nothing with the formulas it checks
//! beyond the canonical class module.

use std::collections::{BTreeMap, VecDeque};

use itertools::Itertools;
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;
#[cfg(test)]
use num_traits::One;

pub use crate::config_model::enumerate_configurations;
use serde::Serialize;

use crate::config_model::{
    cm_probability, config_space_size, for_each_configuration, ColoredMultigraph, DegreeSequence,
};
use crate::error::{Error, Result};
use crate::neighborhood::NeighborhoodLaw;
use crate::rooted_graphs::{canonicalize, CanonicalClass, Graph};
use crate::weight::Weight;

pub const MAX_GRAPH_VERTICES: usize = 8;
pub const MAX_NH_VERTICES: usize = 7;
/// Cap on intermediate states in [`brute_ugw_marginal`].
pub const MAX_BRUTE_STATES: usize = 1_000_000;

/// Every simple graph on `0..n` with `m` edges, each exactly once.
pub fn enumerate_graphs(n: usize, m: usize) -> Result<impl Iterator<Item = Graph>> {
    if n > MAX_GRAPH_VERTICES {
        return Err(Error::TooLarge(format!("{n} vertices (max {MAX_GRAPH_VERTICES})")));
    }
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    Ok(pairs
        .into_iter()
        .combinations(m)
        .map(move |edges| Graph::from_edges(n, &edges)))
}

/// Exact law of `Γ(σ)` for uniform `σ`, by enumerating every configuration.
pub fn exact_cm_law(d: &DegreeSequence) -> Result<BTreeMap<ColoredMultigraph, BigRational>> {
    let mut counts: BTreeMap<ColoredMultigraph, u64> = BTreeMap::new();
    let mut total = 0u64;
    for_each_configuration(d, |s| {
        *counts.entry(s.graph()).or_default() += 1;
        total += 1;
    })?;
    Ok(counts
        .into_iter()
        .map(|(g, k)| (g, BigRational::from_ratio(k, total)))
        .collect())
}

fn sorted_classes(g: &Graph, h: usize) -> Vec<CanonicalClass> {
    let mut v: Vec<_> = (0..g.vertex_count())
        .map(|u| canonicalize(&g.ball(u, h).0, h))
        .collect();
    v.sort();
    v
}

/// `N_h(G) = |{G' on [n] with m edges : U(G')_h = U(G)_h}|` by scanning all
/// graphs with the same vertex and edge counts.
pub fn exact_nh(g: &Graph, h: usize) -> Result<BigUint> {
    let n = g.vertex_count();
    if n > MAX_NH_VERTICES {
        return Err(Error::TooLarge(format!("{n} vertices (max {MAX_NH_VERTICES})")));
    }
    let want = sorted_classes(g, h);
    let hits = enumerate_graphs(n, g.edge_count())?
        .filter(|other| sorted_classes(other, h) == want)
        .count();
    Ok(BigUint::from(hits))
}

/// Shortest cycle through an edge `{u, v}`: loops are 1, parallel edges 2,
/// otherwise one plus the distance from `u` to `v` once the edge is gone.
fn has_short_cycle(g: &Graph, h: usize) -> bool {
    for (u, v) in g.edges() {
        if u == v {
            if h >= 1 {
                return true;
            }
            continue;
        }
        if g.multiplicity(u, v) > 1 {
            if h >= 2 {
                return true;
            }
            continue;
        }
        let mut dist = vec![usize::MAX; g.vertex_count()];
        dist[u] = 0;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for &y in g.neighbors(x) {
                if (x == u && y == v) || (x == v && y == u) || dist[y] != usize::MAX {
                    continue;
                }
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
        if dist[v] != usize::MAX && dist[v] < h {
            return true;
        }
    }
    false
}

/// Fraction of configurations whose colorblind graph has no cycle of length
/// `<= h`.
pub fn exact_alpha(d: &DegreeSequence, h: usize) -> Result<BigRational> {
    let (mut good, mut total) = (0u64, 0u64);
    for_each_configuration(d, |s| {
        total += 1;
        if !has_short_cycle(&s.graph().colorblind(), h) {
            good += 1;
        }
    })?;
    if total == 0 {
        return Err(Error::InvalidDegreeSequence("no configurations".into()));
    }
    Ok(BigRational::from_ratio(good, total))
}

/// Plain rooted tree, children in arbitrary order.
#[derive(Clone, Debug)]
struct Node {
    children: Vec<Node>,
}

impl Node {
    fn of_class(c: CanonicalClass) -> Node {
        Node {
            children: c.children().iter().map(|&x| Node::of_class(x)).collect(),
        }
    }

    fn class(&self, depth: usize) -> CanonicalClass {
        if depth == 0 {
            return CanonicalClass::isolated();
        }
        CanonicalClass::tree(self.children.iter().map(|c| c.class(depth - 1)).collect())
    }

    fn at(&self, path: &[usize]) -> &Node {
        path.iter().fold(self, |n, &i| &n.children[i])
    }

    fn at_mut(&mut self, path: &[usize]) -> &mut Node {
        path.iter().fold(self, |n, &i| &mut n.children[i])
    }

    fn paths_at(&self, depth: usize) -> Vec<Vec<usize>> {
        if depth == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for (i, c) in self.children.iter().enumerate() {
            for mut p in c.paths_at(depth - 1) {
                p.insert(0, i);
                out.push(p);
            }
        }
        out
    }

    /// Class of the tree seen from the parent of `path`'s endpoint with that
    /// endpoint's branch removed, to `depth`.
    fn upward(&self, path: &[usize], depth: usize) -> CanonicalClass {
        if depth == 0 {
            return CanonicalClass::isolated();
        }
        let (&last, parent_path) = path.split_last().expect("non-root vertex");
        let parent = self.at(parent_path);
        let mut children: Vec<CanonicalClass> = parent
            .children
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != last)
            .map(|(_, c)| c.class(depth - 1))
            .collect();
        if !parent_path.is_empty() {
            children.push(self.upward(parent_path, depth - 1));
        }
        CanonicalClass::tree(children)
    }
}

/// `P̂_{t,t'}` straight from its defining display: for every `s` in the
/// support and every root child equal to `t'`, the remainder `τ` gets weight
/// `P(s)`; normalize over remainders with `τ_{h-1} = t`.
fn hat_by_definition(
    p: &NeighborhoodLaw,
    t: CanonicalClass,
    t_prime: CanonicalClass,
) -> Result<Vec<(CanonicalClass, BigRational)>> {
    let h = p.depth();
    let mut acc: BTreeMap<CanonicalClass, BigRational> = BTreeMap::new();
    for (s, w) in p.iter() {
        let kids = s.children();
        for i in 0..kids.len() {
            if kids[i] != t_prime {
                continue;
            }
            let rest: Vec<_> = kids.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &c)| c).collect();
            let tau = CanonicalClass::tree(rest);
            if tau.truncate(h - 1) == t {
                *acc.entry(tau).or_insert_with(BigRational::zero) += w.clone();
            }
        }
    }
    let total: BigRational = acc.values().sum();
    if total.is_zero() {
        return Err(Error::InvalidLaw(format!("no mass for edge type ({t}, {t_prime})")));
    }
    Ok(acc.into_iter().map(|(k, v)| (k, v / total.clone())).collect())
}

/// Depth-`k` marginal of `UGW_h(P)` by running the generative description
/// level by level and summing over every choice.
pub fn brute_ugw_marginal(p: &NeighborhoodLaw, k: usize) -> Result<NeighborhoodLaw> {
    let h = p.depth();
    if k < h {
        return Err(Error::DepthMismatch(k, h));
    }
    if let Some((c, _)) = p.iter().find(|(c, _)| !c.is_tree()) {
        return Err(Error::NotATree(c.to_string()));
    }
    if k == h {
        return Ok(p.clone());
    }
    if h == 0 {
        return p.clone().with_depth(k);
    }
    let mut states: BTreeMap<CanonicalClass, BigRational> =
        p.iter().map(|(c, w)| (c, w.clone())).collect();
    let mut hats: BTreeMap<(CanonicalClass, CanonicalClass), Vec<(CanonicalClass, BigRational)>> =
        BTreeMap::new();
    for stage in 1..=k - h {
        let mut next: BTreeMap<CanonicalClass, BigRational> = BTreeMap::new();
        for (class, w) in &states {
            let mut partial = vec![(Node::of_class(*class), w.clone())];
            for path in Node::of_class(*class).paths_at(stage) {
                let mut grown = Vec::new();
                for (tree, pw) in partial {
                    let t = tree.at(&path).class(h - 1);
                    let t_prime = tree.upward(&path, h - 1);
                    if let std::collections::btree_map::Entry::Vacant(e) = hats.entry((t, t_prime)) {
                        e.insert(hat_by_definition(p, t, t_prime)?);
                    }
                    for (tau, q) in &hats[&(t, t_prime)] {
                        let mut copy = tree.clone();
                        *copy.at_mut(&path) = Node::of_class(*tau);
                        grown.push((copy, pw.clone() * q.clone()));
                    }
                }
                if grown.len() > MAX_BRUTE_STATES {
                    return Err(Error::TooLarge(format!("{} partial trees", grown.len())));
                }
                partial = grown;
            }
            for (tree, pw) in partial {
                *next.entry(tree.class(h + stage)).or_insert_with(BigRational::zero) += pw;
            }
        }
        states = next;
    }
    NeighborhoodLaw::new(k, states)
}

/// Outcome of one cross-check over a grid of tiny instances.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridCheck {
    pub name: &'static str,
    pub cases: usize,
    pub passed: bool,
    pub detail: String,
}

impl GridCheck {
    fn pass(name: &'static str, cases: usize, detail: String) -> Self {
        GridCheck { name, cases, passed: true, detail }
    }

    fn fail(name: &'static str, cases: usize, detail: String) -> Self {
        GridCheck { name, cases, passed: false, detail }
    }
}

/// Signature of the fiber-size formula under test.
pub type FiberFn = fn(&DegreeSequence, &ColoredMultigraph) -> Result<BigUint>;

/// Every valid degree sequence on `n` vertices with `L` color types and
/// entries in `0..=max`.
pub fn all_degree_sequences(l: usize, n: usize, max: u32) -> Vec<DegreeSequence> {
    let width = l * l * n;
    let mut out = Vec::new();
    let mut digits = vec![0u32; width];
    loop {
        let rows: Vec<Vec<u32>> = digits.chunks(l * l).map(<[u32]>::to_vec).collect();
        if let Ok(d) = DegreeSequence::from_dense(l, &rows) {
            if d.validate().is_ok() {
                out.push(d);
            }
        }
        let mut i = 0;
        while i < width && digits[i] == max {
            digits[i] = 0;
            i += 1;
        }
        if i == width {
            return out;
        }
        digits[i] += 1;
    }
}

/// Configuration-space size, fiber sizes and `CM(D)` probabilities against
/// full enumeration, for all `D` with `L <= l_max`, `n <= n_max` and entries
/// `<= entry_max`.
pub fn check_cm_grid(l_max: usize, n_max: usize, entry_max: u32, fiber: FiberFn) -> GridCheck {
    const NAME: &str = "cm fiber/probability";
    let (mut cases, mut graphs) = (0, 0);
    for l in 1..=l_max {
        for n in 1..=n_max {
            for d in all_degree_sequences(l, n, entry_max) {
                cases += 1;
                let mut fibers: BTreeMap<ColoredMultigraph, u64> = BTreeMap::new();
                let mut total = 0u64;
                if let Err(e) = for_each_configuration(&d, |s| {
                    *fibers.entry(s.graph()).or_default() += 1;
                    total += 1;
                }) {
                    return GridCheck::fail(NAME, cases, format!("enumeration failed: {e}"));
                }
                if BigUint::from(total) != config_space_size(&d) {
                    return GridCheck::fail(NAME, cases, format!("|Σ| mismatch for {d:?}"));
                }
                for (g, k) in fibers {
                    graphs += 1;
                    if !matches!(fiber(&d, &g), Ok(f) if f == BigUint::from(k)) {
                        return GridCheck::fail(NAME, cases, format!("fiber mismatch for {d:?}"));
                    }
                    if !matches!(cm_probability(&d, &g), Ok(p) if p == BigRational::from_ratio(k, total)) {
                        return GridCheck::fail(NAME, cases, format!("probability mismatch for {d:?}"));
                    }
                }
            }
        }
    }
    GridCheck::pass(NAME, cases, format!("{cases} degree sequences, {graphs} outcome graphs"))
}

/// `count_nh_exact` against [`exact_nh`] for every `h`-tree-like graph with
/// `n <= n_max` vertices and `m <= m_max` edges, one per isomorphism class.
/// Instances whose configuration space is too large to enumerate are skipped.
pub fn check_nh_grid(n_max: usize, m_max: usize, hs: &[usize]) -> GridCheck {
    const NAME: &str = "N_h counting";
    let mut seen: std::collections::BTreeSet<(usize, Vec<CanonicalClass>)> = Default::default();
    let mut cases = 0;
    for n in 2..=n_max.min(MAX_NH_VERTICES) {
        for m in 1..=m_max.min(n * (n - 1) / 2) {
            let graphs = match enumerate_graphs(n, m) {
                Ok(g) => g,
                Err(e) => return GridCheck::fail(NAME, cases, e.to_string()),
            };
            for g in graphs {
                for &h in hs {
                    if !crate::tree_encoding::is_h_treelike(&g, h) {
                        continue;
                    }
                    let mut key: Vec<_> = (0..n).map(|v| canonicalize(&g.ball(v, n).0, n)).collect();
                    key.sort();
                    if !seen.insert((h, key)) {
                        continue;
                    }
                    let fast = match crate::tree_encoding::count_nh_exact(&g, h) {
                        Ok(x) => x,
                        Err(Error::TooLarge(_)) => continue,
                        Err(e) => return GridCheck::fail(NAME, cases, e.to_string()),
                    };
                    let slow = match exact_nh(&g, h) {
                        Ok(x) => x,
                        Err(e) => return GridCheck::fail(NAME, cases, e.to_string()),
                    };
                    cases += 1;
                    if fast != slow {
                        return GridCheck::fail(NAME, cases, format!("n={n} m={m} h={h}: {fast} vs {slow}"));
                    }
                }
            }
        }
    }
    GridCheck::pass(NAME, cases, format!("{cases} tree-like graphs up to isomorphism"))
}

/// Small admissible laws for the marginal checks, each with the depths to
/// extend it to: eight degree laws (to depths 2 and 3) and four depth-2
/// empirical laws of trees (to depth 3).
pub fn marginal_grid_laws() -> Vec<(NeighborhoodLaw, Vec<usize>)> {
    let atoms: &[&[(usize, u64, u64)]] = &[
        &[(3, 1, 1)],
        &[(2, 1, 1)],
        &[(1, 1, 2), (2, 1, 2)],
        &[(1, 1, 3), (3, 2, 3)],
        &[(0, 1, 4), (2, 3, 4)],
        &[(1, 1, 3), (2, 1, 3), (3, 1, 3)],
        &[(2, 1, 2), (3, 1, 2)],
        &[(1, 2, 5), (2, 3, 5)],
    ];
    let mut out: Vec<(NeighborhoodLaw, Vec<usize>)> = atoms
        .iter()
        .map(|a| (crate::ugw::DegreeLaw::from_fractions(a).expect("valid law").to_law(), vec![2, 3]))
        .collect();
    let mut spider = Graph::new(1);
    for _ in 0..3 {
        let a = spider.add_vertex();
        spider.add_edge(0, a);
        let b = spider.add_vertex();
        spider.add_edge(a, b);
    }
    let caterpillar = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (1, 4), (2, 5), (2, 6)]);
    for g in [Graph::path(4), Graph::path(5), spider, caterpillar] {
        let law = crate::neighborhood::empirical_distribution(&g, 2).expect("nonempty graph");
        out.push((law, vec![3]));
    }
    out
}

/// `marginal_ugw` against [`brute_ugw_marginal`], plus the consistency and
/// edge-law checks, on the given laws.
pub fn check_marginal_grid(laws: &[(NeighborhoodLaw, Vec<usize>)]) -> GridCheck {
    const NAME: &str = "UGW marginals";
    let mut cases = 0;
    for (p, ks) in laws {
        for &k in ks {
            cases += 1;
            let fast = crate::ugw::marginal_ugw(p, k);
            let slow = brute_ugw_marginal(p, k);
            match (fast, slow) {
                (Ok(a), Ok(b)) if a == b => {}
                (Ok(_), Ok(_)) => return GridCheck::fail(NAME, cases, format!("depth {} -> {k} differs", p.depth())),
                (Err(e), _) | (_, Err(e)) => return GridCheck::fail(NAME, cases, e.to_string()),
            }
        }
        let ok = crate::ugw::consistency_check(p, p.depth() + 1).unwrap_or(false)
            && crate::ugw::edge_law_identity(p).unwrap_or(false);
        if !ok {
            return GridCheck::fail(NAME, cases, "consistency or edge-law identity failed".into());
        }
    }
    GridCheck::pass(NAME, cases, format!("{} laws, {cases} marginals", laws.len()))
}

/// `exact_alpha` against the fraction of configurations counted by
/// `count_g_dh` times the fiber, for every `D` in the grid.
pub fn check_alpha_grid(n_max: usize, entry_max: u32, hs: &[usize]) -> GridCheck {
    const NAME: &str = "α at finite n";
    let mut cases = 0;
    for n in 1..=n_max {
        for d in all_degree_sequences(1, n, entry_max) {
            for &h in hs {
                cases += 1;
                let oracle = match exact_alpha(&d, h) {
                    Ok(x) => x,
                    Err(e) => return GridCheck::fail(NAME, cases, e.to_string()),
                };
                let mut hits = 0u64;
                let mut total = 0u64;
                let _ = for_each_configuration(&d, |s| {
                    total += 1;
                    if !crate::config_model::has_cycle_leq(&s.graph().colorblind(), h) {
                        hits += 1;
                    }
                });
                if oracle != BigRational::from_ratio(hits, total) {
                    return GridCheck::fail(NAME, cases, format!("h={h}, {d:?}"));
                }
            }
        }
    }
    GridCheck::pass(NAME, cases, format!("{cases} (D, h) pairs"))
}

/// Sum of a rational law's weights; used by callers checking normalization.
pub fn total_mass<W: Weight>(law: &NeighborhoodLaw<W>) -> W {
    law.iter().fold(W::zero(), |a, (_, w)| a + w.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config_model::fiber_size;
    use crate::ugw::marginal_ugw;
    use crate::weight::rational;

    #[test]
    fn graph_counts() {
        assert_eq!(enumerate_graphs(3, 2).unwrap().count(), 3);
        let tri: Vec<_> = enumerate_graphs(3, 3).unwrap().collect();
        assert_eq!(tri.len(), 1);
        assert_eq!(tri[0].edge_count(), 3);
        assert_eq!(enumerate_graphs(4, 3).unwrap().count(), 20);
        assert!(enumerate_graphs(9, 1).is_err());
    }

    #[test]
    fn configuration_counts() {
        let d = DegreeSequence::scalar(&[4]);
        assert_eq!(enumerate_configurations(&d).unwrap().len(), 3);
        let mixed = DegreeSequence::from_dense(2, &[vec![1, 1, 1, 1], vec![1, 1, 1, 1]]).unwrap();
        assert_eq!(
            BigUint::from(enumerate_configurations(&mixed).unwrap().len()),
            config_space_size(&mixed)
        );
    }

    #[test]
    fn cm_laws() {
        let law = exact_cm_law(&DegreeSequence::scalar(&[1, 1])).unwrap();
        assert_eq!(law.len(), 1);
        assert_eq!(law.values().next().unwrap(), &BigRational::one());
        let law = exact_cm_law(&DegreeSequence::scalar(&[2, 2])).unwrap();
        let mut probs: Vec<_> = law.values().cloned().collect();
        probs.sort();
        assert_eq!(probs, vec![rational(1, 3), rational(2, 3)]);
        let double = law.iter().find(|(g, _)| g.omega(0, 0, 1) == 2).unwrap();
        assert_eq!(double.1, &rational(2, 3));
    }

    #[test]
    fn nh_examples() {
        assert_eq!(exact_nh(&Graph::path(3), 1).unwrap(), BigUint::from(3u32));
        assert_eq!(exact_nh(&Graph::cycle(3), 1).unwrap(), BigUint::from(1u32));
        let two = Graph::from_edges(4, &[(0, 1), (2, 3)]);
        assert_eq!(exact_nh(&two, 1).unwrap(), BigUint::from(3u32));
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(exact_alpha(&DegreeSequence::scalar(&[1, 1]), 2).unwrap(), BigRational::one());
        assert!(exact_alpha(&DegreeSequence::scalar(&[2, 2]), 2).unwrap().is_zero());
        // K4 is the only simple outcome for (3,3,3,3) and it has triangles
        let d = DegreeSequence::scalar(&[3, 3, 3, 3]);
        assert!(exact_alpha(&d, 3).unwrap().is_zero());
        assert!(exact_alpha(&d, 2).unwrap().is_positive());
    }

    #[test]
    fn brute_marginal_examples() {
        let star: NeighborhoodLaw = NeighborhoodLaw::point_mass(1, CanonicalClass::star(3)).unwrap();
        for k in 1..=3 {
            assert_eq!(brute_ugw_marginal(&star, k).unwrap(), marginal_ugw(&star, k).unwrap());
        }
        let u = NeighborhoodLaw::from_fractions(1, &[("(())", 1, 2), ("(()())", 1, 2)]).unwrap();
        let b = brute_ugw_marginal(&u, 2).unwrap();
        let want = NeighborhoodLaw::from_fractions(
            2,
            &[
                ("(())", 1, 6),
                ("((()))", 1, 3),
                ("(()())", 1, 18),
                ("(()(()))", 2, 9),
                ("((())(()))", 2, 9),
            ],
        )
        .unwrap();
        assert_eq!(b, want);
        assert_eq!(total_mass(&brute_ugw_marginal(&u, 3).unwrap()), BigRational::one());
    }

    fn off_by_one(d: &DegreeSequence, g: &ColoredMultigraph) -> Result<BigUint> {
        Ok(fiber_size(d, g)? + 1u32)
    }

    #[test]
    fn small_grids() {
        assert!(check_cm_grid(2, 2, 2, fiber_size).passed);
        assert!(!check_cm_grid(1, 2, 2, off_by_one).passed);
        assert!(check_nh_grid(4, 4, &[1]).passed);
        assert!(check_alpha_grid(3, 2, &[1, 2, 3]).passed);
        let laws = marginal_grid_laws();
        assert_eq!(laws.len(), 12);
        assert!(check_marginal_grid(&laws[..3]).passed);
    }
}
