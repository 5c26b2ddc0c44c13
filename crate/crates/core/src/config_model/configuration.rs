use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

use super::{ColoredMultigraph, DegreeSequence};

/// A point of `Σ = ∏ Σ_c`: a perfect matching of `W_c` for each diagonal
/// color and a bijection `W_c -> W_{c̄}` for each color in `C_<`.
///
/// Half-edges of `W_c` are numbered vertex by vertex: the `D_c(0)` half-edges
/// of vertex 0 come first, then those of vertex 1, and so on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    degrees: DegreeSequence,
    sigma: BTreeMap<usize, Vec<usize>>,
}

/// Owner vertex of each half-edge of `W_c`.
pub(crate) fn owners(d: &DegreeSequence, c: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for u in 0..d.n() {
        out.extend(std::iter::repeat_n(u, d.get(u, c) as usize));
    }
    out
}

impl Configuration {
    /// Checks that `sigma[c]` is a fixed-point-free involution of `W_c`
    /// (diagonal `c`) or a bijection onto `W_{c̄}` (`c ∈ C_<`), for every
    /// color with `S_c > 0`.
    pub fn new(degrees: DegreeSequence, sigma: BTreeMap<usize, Vec<usize>>) -> Result<Self> {
        degrees.validate()?;
        let cs = degrees.colors();
        let totals = degrees.totals();
        for c in cs.less_eq() {
            let s = totals.get(&c).copied().unwrap_or(0) as usize;
            let map = sigma.get(&c).map_or(&[][..], |v| v.as_slice());
            if map.len() != s {
                return Err(Error::InvalidDegreeSequence(format!("σ_{c} has the wrong size")));
            }
            let mut seen = vec![false; s];
            for (x, &y) in map.iter().enumerate() {
                let bad = y >= s
                    || std::mem::replace(&mut seen[y], true)
                    || (cs.is_diagonal(c) && (y == x || map[y] != x));
                if bad {
                    return Err(Error::InvalidDegreeSequence(format!("σ_{c} is not valid")));
                }
            }
        }
        if sigma.keys().any(|&c| cs.is_less(cs.conj(c))) {
            return Err(Error::InvalidDegreeSequence("σ given for a color in C_>".into()));
        }
        Ok(Configuration { degrees, sigma })
    }

    pub fn degrees(&self) -> &DegreeSequence {
        &self.degrees
    }

    pub fn sigma(&self, c: usize) -> &[usize] {
        self.sigma.get(&c).map_or(&[], |v| v.as_slice())
    }

    /// `Γ(σ)`.
    pub fn graph(&self) -> ColoredMultigraph {
        let d = &self.degrees;
        let cs = d.colors();
        let mut g = ColoredMultigraph::new(cs.l(), d.n());
        for (&c, map) in &self.sigma {
            let own = owners(d, c);
            if cs.is_diagonal(c) {
                for (x, &y) in map.iter().enumerate() {
                    if x < y {
                        g.add_edge(c, own[x], own[y]);
                    }
                }
            } else {
                let other = owners(d, cs.conj(c));
                for (x, &y) in map.iter().enumerate() {
                    g.add_edge(c, own[x], other[y]);
                }
            }
        }
        g
    }
}

pub fn graph_of(sigma: &Configuration) -> ColoredMultigraph {
    sigma.graph()
}

/// Uniform element of `Σ`. Matchings pair the least unmatched half-edge with
/// a uniform remaining one; bijections are uniform permutations.
pub fn sample_configuration<R: Rng + ?Sized>(d: &DegreeSequence, rng: &mut R) -> Result<Configuration> {
    d.validate()?;
    let cs = d.colors();
    let mut sigma = BTreeMap::new();
    for (c, s) in d.totals() {
        let s = s as usize;
        if cs.is_diagonal(c) {
            let mut map = vec![usize::MAX; s];
            let mut pool: Vec<usize> = (0..s).collect();
            let mut pos: Vec<usize> = (0..s).collect();
            let take = |pool: &mut Vec<usize>, pos: &mut Vec<usize>, x: usize| {
                let i = pos[x];
                let last = *pool.last().expect("nonempty pool");
                pool.swap_remove(i);
                if last != x {
                    pos[last] = i;
                }
            };
            for x in 0..s {
                if map[x] != usize::MAX {
                    continue;
                }
                take(&mut pool, &mut pos, x);
                let y = pool[rng.random_range(0..pool.len())];
                take(&mut pool, &mut pos, y);
                map[x] = y;
                map[y] = x;
            }
            sigma.insert(c, map);
        } else if cs.is_less(c) {
            let mut map: Vec<usize> = (0..s).collect();
            map.shuffle(rng);
            sigma.insert(c, map);
        }
    }
    Ok(Configuration {
        degrees: d.clone(),
        sigma,
    })
}
