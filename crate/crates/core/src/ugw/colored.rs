use num_rational::BigRational;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::error::{Error, Result};
use crate::neighborhood::FLOAT_MASS_TOL;
use crate::rooted_graphs::{Graph, LabeledRootedGraph};
use crate::weight::Weight;

/// A law on `L x L` matrices of nonnegative integers (row-major, color
/// `c = (i, j)` at index `i * L + j`) together with the per-color offspring
/// laws `P̂^c`.
#[derive(Clone, Debug)]
pub struct ColoredOffspringLaw<W = BigRational> {
    l: usize,
    atoms: Vec<(Vec<u32>, W)>,
    hats: Vec<Vec<(Vec<u32>, W)>>,
}

/// A colored rooted tree: `edges[i] = (parent, child, c)` where `c` is the
/// color of the directed edge from parent to child.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredTree {
    pub tree: LabeledRootedGraph,
    pub edges: Vec<(usize, usize, usize)>,
}

pub fn conj(l: usize, c: usize) -> usize {
    (c % l) * l + c / l
}

impl<W: Weight> ColoredOffspringLaw<W> {
    /// Requires total mass one and `E D_c = E D_{c̄}` for every color.
    pub fn new(l: usize, atoms: Vec<(Vec<u32>, W)>) -> Result<Self> {
        if l == 0 || atoms.iter().any(|(m, _)| m.len() != l * l) {
            return Err(Error::InvalidLaw("matrices must be L x L".into()));
        }
        let total = atoms.iter().fold(W::zero(), |a, (_, w)| a + w.clone());
        if !total.approx_eq(&W::one(), FLOAT_MASS_TOL, 1.0) {
            return Err(Error::InvalidLaw("colored law does not sum to 1".into()));
        }
        let mut law = ColoredOffspringLaw {
            l,
            atoms,
            hats: Vec::new(),
        };
        for c in 0..l * l {
            let (a, b) = (law.mean(c), law.mean(conj(l, c)));
            if !a.approx_eq(&b, 1e-9, a.to_f64()) {
                return Err(Error::NotAdmissible(format!(
                    "E D_c = {} but E D_c̄ = {} for color {c}",
                    a.to_f64(),
                    b.to_f64()
                )));
            }
        }
        law.hats = (0..l * l).map(|c| law.compute_hat(c)).collect();
        Ok(law)
    }

    pub fn colors(&self) -> usize {
        self.l
    }

    pub fn atoms(&self) -> &[(Vec<u32>, W)] {
        &self.atoms
    }

    pub fn mean(&self, c: usize) -> W {
        self.atoms
            .iter()
            .fold(W::zero(), |a, (m, w)| a + w.clone() * W::from_u64(m[c] as u64))
    }

    /// `P̂^c(M) = (M_{c̄} + 1) P(M + E^{c̄}) / E D_c`, or `δ_0` when
    /// `E D_c = 0`.
    pub fn colored_hat(&self, c: usize) -> &[(Vec<u32>, W)] {
        &self.hats[c]
    }

    fn compute_hat(&self, c: usize) -> Vec<(Vec<u32>, W)> {
        let d = self.mean(c);
        if !d.is_positive() {
            return vec![(vec![0; self.l * self.l], W::one())];
        }
        let cb = conj(self.l, c);
        let mut out: Vec<(Vec<u32>, W)> = Vec::new();
        for (m, w) in &self.atoms {
            if m[cb] == 0 {
                continue;
            }
            let mut reduced = m.clone();
            reduced[cb] -= 1;
            let weight = W::from_u64(m[cb] as u64) * w.clone() / d.clone();
            match out.iter_mut().find(|(x, _)| *x == reduced) {
                Some((_, acc)) => *acc = acc.clone() + weight,
                None => out.push((reduced, weight)),
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Multi-type Galton-Watson tree to depth `k`: the root draws its
    /// offspring matrix from `P`; a vertex reached by an edge of color `c`
    /// draws from `P̂^c`. A matrix `M` gives `M_c` children along edges of
    /// color `c`.
    pub fn sample<R: Rng + ?Sized>(&self, k: usize, rng: &mut R) -> ColoredTree {
        let pick = |law: &[(Vec<u32>, W)], rng: &mut R| -> Vec<u32> {
            let ix = WeightedIndex::new(law.iter().map(|(_, w)| w.to_f64()))
                .expect("positive mass");
            law[ix.sample(rng)].0.clone()
        };
        let mut g = Graph::new(1);
        let mut edges = Vec::new();
        let mut frontier = vec![(0usize, pick(&self.atoms, rng))];
        for _ in 0..k {
            let mut next = Vec::new();
            for (x, m) in frontier {
                for c in 0..self.l * self.l {
                    for _ in 0..m[c] {
                        let y = g.add_vertex();
                        g.add_edge(x, y);
                        edges.push((x, y, c));
                        next.push((y, pick(&self.hats[c], rng)));
                    }
                }
            }
            frontier = next;
        }
        ColoredTree {
            tree: LabeledRootedGraph::new(g, 0),
            edges,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::rational;

    #[test]
    fn single_color_reduces_to_size_biasing() {
        let law = ColoredOffspringLaw::new(
            1,
            vec![(vec![1], rational(1, 2)), (vec![3], rational(1, 2))],
        )
        .unwrap();
        assert_eq!(
            law.colored_hat(0),
            &[(vec![0], rational(1, 4)), (vec![2], rational(3, 4))]
        );
    }

    #[test]
    fn zero_mean_color_gets_a_point_mass() {
        // Only colors (0,0) is used; (0,1) and (1,0) have zero mean.
        let law = ColoredOffspringLaw::new(2, vec![(vec![2, 0, 0, 0], rational(1, 1))]).unwrap();
        assert_eq!(law.colored_hat(1), &[(vec![0, 0, 0, 0], rational(1, 1))]);
    }

    #[test]
    fn two_color_table() {
        let law = ColoredOffspringLaw::new(
            2,
            vec![
                (vec![1, 1, 0, 0], rational(1, 2)),
                (vec![0, 0, 1, 2], rational(1, 2)),
            ],
        )
        .unwrap();
        assert_eq!(law.mean(1), rational(1, 2));
        assert_eq!(law.mean(3), rational(1, 1));
        assert_eq!(law.colored_hat(1), &[(vec![0, 0, 0, 2], rational(1, 1))]);
        assert_eq!(law.colored_hat(2), &[(vec![1, 0, 0, 0], rational(1, 1))]);
        assert_eq!(law.colored_hat(3), &[(vec![0, 0, 1, 1], rational(1, 1))]);
    }

    #[test]
    fn unbalanced_colors_are_rejected() {
        let bad = ColoredOffspringLaw::new(2, vec![(vec![0, 1, 0, 0], rational(1, 1))]);
        assert!(bad.is_err());
    }
}
