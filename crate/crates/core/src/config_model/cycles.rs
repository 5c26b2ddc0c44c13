use std::collections::VecDeque;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rooted_graphs::Graph;

use super::{sample_configuration, ColoredMultigraph, DegreeSequence};

/// Attempt cap for a single rejection run before any acceptance is seen.
pub const DEFAULT_MAX_ATTEMPTS: u64 = 100_000;

/// Whether `g` has a cycle of length at most `h`; a loop has length 1 and a
/// double edge length 2.
pub fn has_cycle_leq(g: &Graph, h: usize) -> bool {
    if h == 0 {
        return false;
    }
    let n = g.vertex_count();
    if (0..n).any(|u| g.loop_count(u) > 0) {
        return true;
    }
    if h == 1 {
        return false;
    }
    if !g.is_simple() {
        return true;
    }
    // In a simple graph a non-tree edge (x, y) met during a BFS from any root
    // closes a walk of length dist(x) + dist(y) + 1 containing a cycle, and
    // a BFS from a vertex on a shortest cycle finds it exactly.
    let radius = h.div_ceil(2);
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut touched = Vec::new();
    for root in 0..n {
        for &x in &touched {
            dist[x] = usize::MAX;
            parent[x] = usize::MAX;
        }
        touched.clear();
        dist[root] = 0;
        touched.push(root);
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            if dist[x] >= radius {
                continue;
            }
            for &y in g.neighbors(x) {
                if y == parent[x] {
                    continue;
                }
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    touched.push(y);
                    queue.push_back(y);
                } else if dist[x] + dist[y] < h {
                    return true;
                }
            }
        }
    }
    false
}

/// `X(C_ℓ, G)` for `ℓ = 1..=max_len`: the number of subgraphs of the
/// multigraph `g` that are cycles of length `ℓ`. Index 0 is unused.
pub fn count_cycles(g: &Graph, max_len: usize) -> Vec<u64> {
    let n = g.vertex_count();
    let mut out = vec![0u64; max_len + 1];
    // distinct neighbors with multiplicities, loops excluded
    let nbrs: Vec<Vec<(usize, u64)>> = (0..n)
        .map(|u| {
            let mut v: Vec<usize> = g.neighbors(u).iter().copied().filter(|&x| x != u).collect();
            v.sort_unstable();
            let mut out: Vec<(usize, u64)> = Vec::new();
            for x in v {
                match out.last_mut() {
                    Some((y, k)) if *y == x => *k += 1,
                    _ => out.push((x, 1)),
                }
            }
            out
        })
        .collect();
    if max_len >= 1 {
        out[1] = (0..n).map(|u| g.loop_count(u) as u64).sum();
    }
    if max_len >= 2 {
        out[2] = (0..n)
            .flat_map(|u| nbrs[u].iter().filter(move |&&(v, _)| u < v))
            .map(|&(_, k)| k * (k - 1) / 2)
            .sum();
    }
    if max_len >= 3 {
        let mut path = Vec::with_capacity(max_len);
        for s in 0..n {
            path.push(s);
            walk(&nbrs, s, 1, max_len, &mut path, &mut out);
            path.pop();
        }
        for x in out.iter_mut().skip(3) {
            *x /= 2;
        }
    }
    out
}

/// Extends simple paths starting at `s` through vertices larger than `s`;
/// every closing edge back to `s` from length `ℓ >= 3` adds the product of
/// multiplicities. Each cycle is found once per direction.
fn walk(
    nbrs: &[Vec<(usize, u64)>],
    s: usize,
    weight: u64,
    max_len: usize,
    path: &mut Vec<usize>,
    out: &mut [u64],
) {
    let x = *path.last().expect("nonempty path");
    for &(y, k) in &nbrs[x] {
        if y == s && path.len() >= 3 {
            out[path.len()] += weight * k;
        } else if y > s && path.len() < max_len && !path.contains(&y) {
            path.push(y);
            walk(nbrs, s, weight * k, max_len, path, out);
            path.pop();
        }
    }
}

/// Rejection sampler for the uniform law on `𝒢(D, h)`, keeping acceptance
/// statistics across calls. Without an explicit cap, a run gives up after
/// `1000 / α̂` attempts, where `α̂` is the acceptance rate seen so far.
#[derive(Clone, Debug)]
pub struct GdhSampler {
    d: DegreeSequence,
    h: usize,
    attempts: u64,
    accepts: u64,
    max_attempts: Option<u64>,
}

impl GdhSampler {
    pub fn new(d: DegreeSequence, h: usize) -> Result<Self> {
        d.validate()?;
        Ok(GdhSampler {
            d,
            h,
            attempts: 0,
            accepts: 0,
            max_attempts: None,
        })
    }

    pub fn with_max_attempts(mut self, cap: u64) -> Self {
        self.max_attempts = Some(cap);
        self
    }

    pub fn attempts(&self) -> u64 {
        self.attempts
    }

    pub fn accepts(&self) -> u64 {
        self.accepts
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.attempts == 0 {
            f64::NAN
        } else {
            self.accepts as f64 / self.attempts as f64
        }
    }

    fn cap(&self) -> u64 {
        self.max_attempts.unwrap_or(if self.accepts == 0 {
            DEFAULT_MAX_ATTEMPTS
        } else {
            (1000 * self.attempts / self.accepts).max(1000)
        })
    }

    /// One configuration, accepted or not.
    pub fn attempt<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Option<ColoredMultigraph>> {
        let g = sample_configuration(&self.d, rng)?.graph();
        self.attempts += 1;
        if has_cycle_leq(&g.colorblind(), self.h) {
            return Ok(None);
        }
        self.accepts += 1;
        Ok(Some(g))
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<ColoredMultigraph> {
        let cap = self.cap();
        for _ in 0..cap {
            if let Some(g) = self.attempt(rng)? {
                return Ok(g);
            }
        }
        Err(Error::RejectionExhausted {
            attempts: self.attempts,
            acceptance: self.accepts as f64 / self.attempts.max(1) as f64,
        })
    }
}

/// Uniform sample from `𝒢(D, h)` with at most `max_attempts` configurations.
pub fn sample_g_dh<R: Rng + ?Sized>(
    d: &DegreeSequence,
    h: usize,
    rng: &mut R,
    max_attempts: u64,
) -> Result<ColoredMultigraph> {
    GdhSampler::new(d.clone(), h)?.with_max_attempts(max_attempts).sample(rng)
}
