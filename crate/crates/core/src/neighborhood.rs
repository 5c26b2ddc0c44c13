//! Neighborhood laws on rooted classes: empirical distributions `U(G)_h`,
//! edge-type intensities `e_P` and `π_P`, and admissibility.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rooted_graphs::{canonicalize, CanonicalClass, Graph};
use crate::weight::Weight;

/// Tolerance for the total mass of a float-mode law.
pub const FLOAT_MASS_TOL: f64 = 1e-12;
/// Relative tolerance for `e_P` symmetry in float mode.
pub const FLOAT_SYMMETRY_TOL: f64 = 1e-9;

/// Finite-support probability measure on rooted classes of depth `<= h`.
#[derive(Clone, Debug, PartialEq)]
pub struct NeighborhoodLaw<W = BigRational> {
    depth: usize,
    support: BTreeMap<CanonicalClass, W>,
}

impl<W: Weight> NeighborhoodLaw<W> {
    /// Builds a law, merging repeated classes and dropping zero weights.
    pub fn new(depth: usize, atoms: impl IntoIterator<Item = (CanonicalClass, W)>) -> Result<Self> {
        let support = Self::collect(depth, atoms)?;
        let total = support.values().fold(W::zero(), |a, w| a + w.clone());
        if !total.approx_eq(&W::one(), FLOAT_MASS_TOL, 1.0) {
            return Err(Error::InvalidLaw(format!(
                "total mass {} differs from 1",
                total.to_f64()
            )));
        }
        Ok(NeighborhoodLaw { depth, support })
    }

    /// Like [`new`](Self::new) but rescales the weights to total mass one.
    pub fn normalized(depth: usize, atoms: impl IntoIterator<Item = (CanonicalClass, W)>) -> Result<Self> {
        let mut support = Self::collect(depth, atoms)?;
        let total = support.values().fold(W::zero(), |a, w| a + w.clone());
        if !total.is_positive() {
            return Err(Error::InvalidLaw("zero total mass".into()));
        }
        for w in support.values_mut() {
            *w = w.clone() / total.clone();
        }
        Ok(NeighborhoodLaw { depth, support })
    }

    fn collect(
        depth: usize,
        atoms: impl IntoIterator<Item = (CanonicalClass, W)>,
    ) -> Result<BTreeMap<CanonicalClass, W>> {
        let mut support: BTreeMap<CanonicalClass, W> = BTreeMap::new();
        for (c, w) in atoms {
            if w < W::zero() {
                return Err(Error::InvalidLaw(format!("negative weight on {c}")));
            }
            if c.depth() > depth {
                return Err(Error::DepthExceeded {
                    class: c.encoding().to_string(),
                    depth: c.depth(),
                    limit: depth,
                });
            }
            let slot = support.entry(c).or_insert_with(W::zero);
            *slot = slot.clone() + w;
        }
        support.retain(|_, w| !w.is_zero());
        Ok(support)
    }

    pub fn point_mass(depth: usize, class: CanonicalClass) -> Result<Self> {
        Self::new(depth, [(class, W::one())])
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn support(&self) -> &BTreeMap<CanonicalClass, W> {
        &self.support
    }

    pub fn iter(&self) -> impl Iterator<Item = (CanonicalClass, &W)> {
        self.support.iter().map(|(c, w)| (*c, w))
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn prob(&self, c: CanonicalClass) -> W {
        self.support.get(&c).cloned().unwrap_or_else(W::zero)
    }

    /// Expected root degree.
    pub fn mean_degree(&self) -> W {
        self.iter()
            .fold(W::zero(), |acc, (c, w)| acc + w.clone() * W::from_u64(c.root_degree() as u64))
    }

    pub fn is_tree_supported(&self) -> bool {
        self.support.keys().all(|c| c.is_tree())
    }

    /// Pushes the law forward through truncation at depth `k <= depth()`.
    pub fn truncate(&self, k: usize) -> Result<Self> {
        if k > self.depth {
            return Err(Error::DepthMismatch(k, self.depth));
        }
        Self::new(k, self.iter().map(|(c, w)| (c.truncate(k), w.clone())))
    }

    /// Relabels the depth without touching the atoms (`depth` must bound
    /// every class).
    pub fn with_depth(&self, depth: usize) -> Result<Self> {
        Self::new(depth, self.iter().map(|(c, w)| (c, w.clone())))
    }

    pub fn to_f64(&self) -> NeighborhoodLaw<f64> {
        NeighborhoodLaw {
            depth: self.depth,
            support: self.iter().map(|(c, w)| (c, w.to_f64())).collect(),
        }
    }

    /// Convex combination `(1 - lambda) self + lambda other`.
    pub fn mix(&self, other: &Self, lambda: W) -> Result<Self> {
        if self.depth != other.depth {
            return Err(Error::DepthMismatch(self.depth, other.depth));
        }
        let keep = W::one() - lambda.clone();
        Self::new(
            self.depth,
            self.iter()
                .map(|(c, w)| (c, w.clone() * keep.clone()))
                .chain(other.iter().map(|(c, w)| (c, w.clone() * lambda.clone()))),
        )
    }

    /// Total variation distance (half the L1 distance).
    pub fn tv_distance(&self, other: &Self) -> Result<f64> {
        if self.depth != other.depth {
            return Err(Error::DepthMismatch(self.depth, other.depth));
        }
        let keys: BTreeSet<_> = self.support.keys().chain(other.support.keys()).collect();
        Ok(keys
            .into_iter()
            .map(|&c| (self.prob(c).to_f64() - other.prob(c).to_f64()).abs())
            .sum::<f64>()
            / 2.0)
    }
}

/// `U(G)_h`: law of the depth-`h` class of a uniformly chosen vertex, with
/// exact weights `k/|V|`.
pub fn empirical_distribution(g: &Graph, h: usize) -> Result<NeighborhoodLaw> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut counts: HashMap<CanonicalClass, u64> = HashMap::new();
    for v in 0..n {
        let (ball, _) = g.ball(v, h);
        *counts.entry(canonicalize(&ball, h)).or_default() += 1;
    }
    let depth = if h == usize::MAX {
        counts.keys().map(|c| c.depth()).max().unwrap_or(0)
    } else {
        h
    };
    NeighborhoodLaw::new(
        depth,
        counts.into_iter().map(|(c, k)| (c, BigRational::from_ratio(k, n as u64))),
    )
}

/// Per-vertex depth-`h` classes.
pub fn vertex_classes(g: &Graph, h: usize) -> Vec<CanonicalClass> {
    (0..g.vertex_count())
        .map(|v| canonicalize(&g.ball(v, h).0, h))
        .collect()
}

/// Edge-type intensities `e_P(t, t')` (unnormalized) or `π_P` (normalized),
/// keyed by ordered pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeTypeLaw<W = BigRational> {
    pub weights: BTreeMap<(CanonicalClass, CanonicalClass), W>,
    pub total: W,
}

impl<W: Weight> EdgeTypeLaw<W> {
    pub fn get(&self, t: CanonicalClass, t_prime: CanonicalClass) -> W {
        self.weights
            .get(&(t, t_prime))
            .cloned()
            .unwrap_or_else(W::zero)
    }

    /// Every class appearing in either coordinate.
    pub fn types(&self) -> BTreeSet<CanonicalClass> {
        self.weights.keys().flat_map(|&(a, b)| [a, b]).collect()
    }
}

/// All nonzero `e_P(t, t') = E_P E_h(t, t')` at once.
pub fn edge_type_law<W: Weight>(p: &NeighborhoodLaw<W>) -> Result<EdgeTypeLaw<W>> {
    let h = p.depth();
    if h == 0 {
        return Err(Error::DepthMismatch(0, 1));
    }
    let mut weights: BTreeMap<(CanonicalClass, CanonicalClass), W> = BTreeMap::new();
    for (g, w) in p.iter() {
        for (key, count) in g.edge_types(h)? {
            let slot = weights.entry(key).or_insert_with(W::zero);
            *slot = slot.clone() + w.clone() * W::from_u64(count as u64);
        }
    }
    let total = weights.values().fold(W::zero(), |a, w| a + w.clone());
    Ok(EdgeTypeLaw { weights, total })
}

pub fn e_p<W: Weight>(p: &NeighborhoodLaw<W>, t: CanonicalClass, t_prime: CanonicalClass) -> Result<W> {
    let h = p.depth();
    if h == 0 {
        return Err(Error::DepthMismatch(0, 1));
    }
    let mut acc = W::zero();
    for (g, w) in p.iter() {
        let k = g.count_eh(h, t, t_prime)?;
        if k > 0 {
            acc = acc + w.clone() * W::from_u64(k as u64);
        }
    }
    Ok(acc)
}

/// `π_P = e_P / d`, a probability on ordered pairs of depth-`(h-1)` classes.
pub fn pi_p<W: Weight>(p: &NeighborhoodLaw<W>) -> Result<EdgeTypeLaw<W>> {
    let e = edge_type_law(p)?;
    if !e.total.is_positive() {
        return Err(Error::ZeroMean);
    }
    let d = e.total.clone();
    Ok(EdgeTypeLaw {
        weights: e.weights.into_iter().map(|(k, w)| (k, w / d.clone())).collect(),
        total: W::one(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub mean_degree: f64,
    /// Ordered pairs `(t, t')` with `e_P(t,t') != e_P(t',t)`, with both values.
    pub asymmetric: Vec<(CanonicalClass, CanonicalClass, f64, f64)>,
}

/// Checks the symmetry `e_P(t,t') = e_P(t',t)` (exact for rationals, within
/// `1e-9 max(1, d)` for floats). Depth-0 laws are trivially admissible.
pub fn admissibility<W: Weight>(p: &NeighborhoodLaw<W>) -> Result<AdmissibilityReport> {
    let d = p.mean_degree().to_f64();
    if p.depth() == 0 {
        return Ok(AdmissibilityReport {
            admissible: true,
            mean_degree: d,
            asymmetric: Vec::new(),
        });
    }
    let e = edge_type_law(p)?;
    let mut asymmetric = Vec::new();
    for (&(a, b), w) in &e.weights {
        if a > b {
            continue;
        }
        let other = e.get(b, a);
        if !w.approx_eq(&other, FLOAT_SYMMETRY_TOL, d) {
            asymmetric.push((a, b, w.to_f64(), other.to_f64()));
        }
    }
    for (&(a, b), w) in &e.weights {
        if a > b && !e.weights.contains_key(&(b, a)) {
            asymmetric.push((b, a, 0.0, w.to_f64()));
        }
    }
    Ok(AdmissibilityReport {
        admissible: asymmetric.is_empty(),
        mean_degree: d,
        asymmetric,
    })
}

pub fn is_admissible<W: Weight>(p: &NeighborhoodLaw<W>) -> bool {
    admissibility(p).is_ok_and(|r| r.admissible)
}

pub(crate) fn require_admissible<W: Weight>(p: &NeighborhoodLaw<W>) -> Result<()> {
    let report = admissibility(p)?;
    if report.admissible {
        Ok(())
    } else {
        let (a, b, x, y) = &report.asymmetric[0];
        Err(Error::NotAdmissible(format!(
            "e_P({a}, {b}) = {x} but e_P({b}, {a}) = {y}"
        )))
    }
}

impl NeighborhoodLaw<BigRational> {
    /// Exact law from `(encoding, num, den)` triples; handy in tests.
    pub fn from_fractions(depth: usize, atoms: &[(&str, u64, u64)]) -> Result<Self> {
        let atoms: Result<Vec<_>> = atoms
            .iter()
            .map(|&(e, n, d)| Ok((CanonicalClass::from_encoding(e)?, BigRational::from_ratio(n, d))))
            .collect();
        Self::new(depth, atoms?)
    }

    pub fn is_probability(&self) -> bool {
        self.support.values().fold(BigRational::zero(), |a, w| a + w) == BigRational::one()
    }
}
