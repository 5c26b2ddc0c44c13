use num_rational::BigRational;
use num_traits::Zero;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::combinatorics::ln_factorial;
use crate::error::{Error, Result};
use crate::neighborhood::{NeighborhoodLaw, FLOAT_MASS_TOL};
use crate::rooted_graphs::CanonicalClass;
use crate::weight::Weight;

/// Where a Poisson law was cut off.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoissonTail {
    pub lambda: f64,
    /// Largest degree kept.
    pub cutoff: usize,
    /// Mass beyond `cutoff` before renormalization.
    pub tail_mass: f64,
}

/// Law on the nonnegative integers with finite support, indexed by degree.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeLaw<W = BigRational> {
    pmf: Vec<W>,
    tail: Option<PoissonTail>,
}

impl<W: Weight> DegreeLaw<W> {
    pub fn new(mut pmf: Vec<W>) -> Result<Self> {
        while pmf.last().is_some_and(|w| w.is_zero()) {
            pmf.pop();
        }
        if pmf.iter().any(|w| *w < W::zero()) {
            return Err(Error::InvalidLaw("negative degree probability".into()));
        }
        let total = pmf.iter().fold(W::zero(), |a, w| a + w.clone());
        if !total.approx_eq(&W::one(), FLOAT_MASS_TOL, 1.0) {
            return Err(Error::InvalidLaw(format!("degree law sums to {}", total.to_f64())));
        }
        Ok(DegreeLaw { pmf, tail: None })
    }

    pub fn point_mass(d: usize) -> Self {
        let mut pmf = vec![W::zero(); d + 1];
        pmf[d] = W::one();
        DegreeLaw { pmf, tail: None }
    }

    /// Uniform law on the listed degrees (repeats add weight).
    pub fn uniform(degrees: &[usize]) -> Result<Self> {
        let max = degrees.iter().copied().max().ok_or(Error::InvalidLaw("empty support".into()))?;
        let mut pmf = vec![W::zero(); max + 1];
        for &k in degrees {
            pmf[k] = pmf[k].clone() + W::from_ratio(1, degrees.len() as u64);
        }
        Self::new(pmf)
    }

    pub fn pmf(&self) -> &[W] {
        &self.pmf
    }

    pub fn prob(&self, k: usize) -> W {
        self.pmf.get(k).cloned().unwrap_or_else(W::zero)
    }

    pub fn max_degree(&self) -> usize {
        self.pmf.len().saturating_sub(1)
    }

    pub fn tail(&self) -> Option<PoissonTail> {
        self.tail
    }

    /// Support points with positive mass.
    pub fn support(&self) -> impl Iterator<Item = (usize, &W)> {
        self.pmf.iter().enumerate().filter(|(_, w)| w.is_positive())
    }

    pub fn mean(&self) -> W {
        self.support()
            .fold(W::zero(), |a, (k, w)| a + w.clone() * W::from_u64(k as u64))
    }

    /// `P̂(k) = (k+1) P(k+1) / Σ ℓ P(ℓ)`.
    pub fn size_biased(&self) -> Result<Self> {
        let d = self.mean();
        if !d.is_positive() {
            return Err(Error::ZeroMean);
        }
        let pmf = (1..self.pmf.len())
            .map(|k| W::from_u64(k as u64) * self.pmf[k].clone() / d.clone())
            .collect();
        Ok(DegreeLaw { pmf, tail: self.tail })
    }

    /// As a depth-1 neighborhood law on stars.
    pub fn to_law(&self) -> NeighborhoodLaw<W> {
        NeighborhoodLaw::new(
            1,
            self.support().map(|(k, w)| (CanonicalClass::star(k), w.clone())),
        )
        .expect("a degree law is a valid depth-1 law")
    }

    /// Root-degree marginal of any neighborhood law.
    pub fn from_law(p: &NeighborhoodLaw<W>) -> Self {
        let max = p.iter().map(|(c, _)| c.root_degree()).max().unwrap_or(0);
        let mut pmf = vec![W::zero(); max + 1];
        for (c, w) in p.iter() {
            let k = c.root_degree();
            pmf[k] = pmf[k].clone() + w.clone();
        }
        DegreeLaw { pmf, tail: None }
    }

    pub fn to_f64(&self) -> DegreeLaw<f64> {
        DegreeLaw {
            pmf: self.pmf.iter().map(Weight::to_f64).collect(),
            tail: self.tail,
        }
    }

    pub fn sampler(&self) -> DegreeSampler {
        DegreeSampler::new(&self.pmf.iter().map(Weight::to_f64).collect::<Vec<_>>())
    }
}

impl DegreeLaw<f64> {
    /// Poisson(λ) cut where the remaining tail mass drops below `tail_tol`,
    /// then renormalized.
    pub fn poisson(lambda: f64, tail_tol: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidLaw(format!("Poisson mean {lambda}")));
        }
        let mut pmf = Vec::new();
        let mut cumulative = 0.0;
        let mut k = 0usize;
        loop {
            let p = poisson_pmf(lambda, k);
            pmf.push(p);
            cumulative += p;
            if 1.0 - cumulative < tail_tol && (k as f64) >= lambda {
                break;
            }
            k += 1;
        }
        let tail_mass = (1.0 - cumulative).max(0.0);
        for w in &mut pmf {
            *w /= cumulative;
        }
        let cutoff = pmf.len() - 1;
        Ok(DegreeLaw {
            pmf,
            tail: Some(PoissonTail {
                lambda,
                cutoff,
                tail_mass,
            }),
        })
    }
}

impl DegreeLaw<BigRational> {
    /// Exact law from `(degree, num, den)` triples.
    pub fn from_fractions(atoms: &[(usize, u64, u64)]) -> Result<Self> {
        let max = atoms.iter().map(|a| a.0).max().unwrap_or(0);
        let mut pmf = vec![BigRational::zero(); max + 1];
        for &(k, n, d) in atoms {
            pmf[k] += BigRational::from_ratio(n, d);
        }
        Self::new(pmf)
    }
}

pub fn poisson_pmf(lambda: f64, k: usize) -> f64 {
    if lambda == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    (-lambda + k as f64 * lambda.ln() - ln_factorial(k as u64)).exp()
}

/// Draws degrees from a finite pmf.
#[derive(Clone, Debug)]
pub struct DegreeSampler {
    index: Option<WeightedIndex<f64>>,
}

impl DegreeSampler {
    pub fn new(pmf: &[f64]) -> Self {
        DegreeSampler {
            index: WeightedIndex::new(pmf.iter().map(|w| w.max(0.0))).ok(),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.index.as_ref().map_or(0, |ix| ix.sample(rng))
    }
}
