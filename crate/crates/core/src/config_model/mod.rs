//! The colored configuration model.
//!
//! Colors are pairs `(i, j)` with `0 <= i, j < L`, indexed as `c = i * L + j`.
//! A [`ColoredMultigraph`] stores every weight `ω_c(u, v)` together with its
//! conjugate `ω_{c̄}(v, u)`; a loop of a diagonal color contributes 2 to
//! `ω_c(u, u)`, a loop of an off-diagonal color contributes 1 to both
//! `ω_c(u, u)` and `ω_{c̄}(u, u)`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rooted_graphs::Graph;

mod configuration;
mod counting;
mod cycles;
mod enumerate;
mod explore;
#[cfg(test)]
mod tests;

pub use configuration::{graph_of, sample_configuration, Configuration};
pub use counting::{
    automorphism_count, b_factor, cm_probability, config_space_size, excess, fiber_size,
    lambda_h_estimate, subgraph_count_expectation, subgraph_count_limit,
};
pub use cycles::{count_cycles, has_cycle_leq, sample_g_dh, GdhSampler, DEFAULT_MAX_ATTEMPTS};
pub use enumerate::{enumerate_configurations, for_each_configuration, MAX_CONFIGURATIONS};
pub use explore::{explore_neighborhood, ExploredBall};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorSet {
    l: usize,
}

impl ColorSet {
    pub fn new(l: usize) -> Self {
        assert!(l > 0, "at least one color type");
        ColorSet { l }
    }

    pub fn l(self) -> usize {
        self.l
    }

    pub fn count(self) -> usize {
        self.l * self.l
    }

    pub fn color(self, i: usize, j: usize) -> usize {
        i * self.l + j
    }

    pub fn pair(self, c: usize) -> (usize, usize) {
        (c / self.l, c % self.l)
    }

    pub fn conj(self, c: usize) -> usize {
        let (i, j) = self.pair(c);
        self.color(j, i)
    }

    pub fn is_less(self, c: usize) -> bool {
        let (i, j) = self.pair(c);
        i < j
    }

    pub fn is_diagonal(self, c: usize) -> bool {
        let (i, j) = self.pair(c);
        i == j
    }

    /// Colors in `C_<` and `C_=`, ascending.
    pub fn less_eq(self) -> impl Iterator<Item = usize> {
        (0..self.count()).filter(move |&c| !self.is_less(self.conj(c)))
    }
}

/// A vector of `n` degree matrices, stored sparsely as sorted `(color, D_c(u))`
/// rows with positive entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegreeSequence {
    colors: ColorSet,
    rows: Vec<Vec<(usize, u32)>>,
}

impl DegreeSequence {
    /// Checks shape only; see [`validate`](Self::validate) for membership in `𝒟_n`.
    pub fn new(l: usize, rows: Vec<Vec<(usize, u32)>>) -> Result<Self> {
        let colors = ColorSet::new(l);
        let mut out = Vec::with_capacity(rows.len());
        for row in rows {
            let mut merged: BTreeMap<usize, u32> = BTreeMap::new();
            for (c, k) in row {
                if c >= colors.count() {
                    return Err(Error::InvalidDegreeSequence(format!("color {c} out of range")));
                }
                *merged.entry(c).or_default() += k;
            }
            out.push(merged.into_iter().filter(|&(_, k)| k > 0).collect());
        }
        Ok(DegreeSequence { colors, rows: out })
    }

    /// Row-major dense `L x L` matrices.
    pub fn from_dense(l: usize, rows: &[Vec<u32>]) -> Result<Self> {
        if rows.iter().any(|r| r.len() != l * l) {
            return Err(Error::InvalidDegreeSequence("rows must have L² entries".into()));
        }
        Self::new(
            l,
            rows.iter()
                .map(|r| r.iter().copied().enumerate().collect())
                .collect(),
        )
    }

    /// Single color.
    pub fn scalar(degrees: &[u32]) -> Self {
        let rows = degrees.iter().map(|&d| vec![(0, d)]).collect();
        Self::new(1, rows).expect("one color")
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn colors(&self) -> ColorSet {
        self.colors
    }

    pub fn row(&self, u: usize) -> &[(usize, u32)] {
        &self.rows[u]
    }

    pub fn rows(&self) -> &[Vec<(usize, u32)>] {
        &self.rows
    }

    pub fn get(&self, u: usize, c: usize) -> u32 {
        self.rows[u]
            .binary_search_by_key(&c, |&(x, _)| x)
            .map_or(0, |i| self.rows[u][i].1)
    }

    pub fn dense_row(&self, u: usize) -> Vec<u32> {
        let mut out = vec![0; self.colors.count()];
        for &(c, k) in &self.rows[u] {
            out[c] = k;
        }
        out
    }

    /// `S_c = Σ_u D_c(u)` over colors with `S_c > 0`.
    pub fn totals(&self) -> BTreeMap<usize, u64> {
        let mut s = BTreeMap::new();
        for row in &self.rows {
            for &(c, k) in row {
                *s.entry(c).or_default() += k as u64;
            }
        }
        s
    }

    pub fn total(&self, c: usize) -> u64 {
        self.totals().get(&c).copied().unwrap_or(0)
    }

    /// Colorblind degree `Σ_c D_c(u)`.
    pub fn degree(&self, u: usize) -> u32 {
        self.rows[u].iter().map(|&(_, k)| k).sum()
    }

    pub fn edge_count(&self) -> u64 {
        (0..self.n()).map(|u| self.degree(u) as u64).sum::<u64>() / 2
    }

    /// `S` symmetric with even diagonal.
    pub fn validate(&self) -> Result<()> {
        let s = self.totals();
        for (&c, &k) in &s {
            let cb = self.colors.conj(c);
            if self.colors.is_diagonal(c) && k % 2 == 1 {
                return Err(Error::InvalidDegreeSequence(format!("S_{c} = {k} is odd")));
            }
            if s.get(&cb).copied().unwrap_or(0) != k {
                return Err(Error::InvalidDegreeSequence(format!(
                    "S_{c} = {k} differs from its conjugate"
                )));
            }
        }
        Ok(())
    }
}

pub fn validate_degree_sequence(d: &DegreeSequence) -> bool {
    d.validate().is_ok()
}

/// Erdős–Gallai test for a simple graph with the given degrees.
pub fn graphical_check(degrees: &[u32]) -> bool {
    let mut d: Vec<u64> = degrees.iter().map(|&x| x as u64).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    if d.iter().sum::<u64>() % 2 == 1 {
        return false;
    }
    let n = d.len();
    let mut prefix = 0;
    for k in 1..=n {
        prefix += d[k - 1];
        let k64 = k as u64;
        let rest: u64 = d[k..].iter().map(|&x| x.min(k64)).sum();
        if prefix > k64 * (k64 - 1) + rest {
            return false;
        }
    }
    true
}

/// Directed colored multigraph on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoredMultigraph {
    colors: ColorSet,
    n: usize,
    w: BTreeMap<(usize, usize, usize), u32>,
}

impl ColoredMultigraph {
    pub fn new(l: usize, n: usize) -> Self {
        ColoredMultigraph {
            colors: ColorSet::new(l),
            n,
            w: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn colors(&self) -> ColorSet {
        self.colors
    }

    /// One edge of color `c` from `u` to `v`, together with its conjugate.
    /// For a diagonal color the direction is immaterial.
    pub fn add_edge(&mut self, c: usize, u: usize, v: usize) {
        self.add_edges(c, u, v, 1);
    }

    pub fn add_edges(&mut self, c: usize, u: usize, v: usize, k: u32) {
        assert!(u < self.n && v < self.n && c < self.colors.count());
        if k == 0 {
            return;
        }
        *self.w.entry((c, u, v)).or_default() += k;
        *self.w.entry((self.colors.conj(c), v, u)).or_default() += k;
    }

    pub fn omega(&self, c: usize, u: usize, v: usize) -> u32 {
        self.w.get(&(c, u, v)).copied().unwrap_or(0)
    }

    /// All positive weights `((c, u, v), ω_c(u, v))`.
    pub fn weights(&self) -> impl Iterator<Item = ((usize, usize, usize), u32)> + '_ {
        self.w.iter().map(|(&k, &v)| (k, v))
    }

    /// Each undirected colored edge once: `(c, u, v, multiplicity)` with
    /// `c ∈ C_<` or `c ∈ C_=` and `u <= v`; loops counted as loops.
    pub fn edge_list(&self) -> Vec<(usize, usize, usize, u32)> {
        let cs = self.colors;
        let mut out = Vec::new();
        for (&(c, u, v), &k) in &self.w {
            if cs.is_diagonal(c) {
                if u < v {
                    out.push((c, u, v, k));
                } else if u == v {
                    out.push((c, u, v, k / 2));
                }
            } else if cs.is_less(c) {
                out.push((c, u, v, k));
            }
        }
        out
    }

    pub fn degree_sequence(&self) -> DegreeSequence {
        let mut rows: Vec<Vec<(usize, u32)>> = vec![Vec::new(); self.n];
        for (&(c, u, _), &k) in &self.w {
            rows[u].push((c, k));
        }
        DegreeSequence::new(self.colors.l, rows).expect("colors in range")
    }

    /// `ω̄(u, v) = Σ_c ω_c(u, v)` as an undirected multigraph.
    pub fn colorblind(&self) -> Graph {
        let mut total: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for (&(_, u, v), &k) in &self.w {
            if u <= v {
                *total.entry((u, v)).or_default() += k;
            }
        }
        let mut g = Graph::new(self.n);
        for ((u, v), k) in total {
            let copies = if u == v { k / 2 } else { k };
            for _ in 0..copies {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Same graph on relabelled vertices: vertex `u` becomes `perm[u]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        ColoredMultigraph {
            colors: self.colors,
            n: self.n,
            w: self.w.iter().map(|(&(c, u, v), &k)| ((c, perm[u], perm[v]), k)).collect(),
        }
    }
}

pub fn colorblind(g: &ColoredMultigraph) -> Graph {
    g.colorblind()
}

pub fn degree_sequence_of(g: &ColoredMultigraph) -> DegreeSequence {
    g.degree_sequence()
}
