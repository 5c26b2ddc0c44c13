//! Unimodular Galton-Watson trees.

mod bipartite;
mod colored;
mod degree;
mod marginal;
mod sampler;
mod typed;

#[cfg(test)]
mod tests;

pub use bipartite::{root_type_probability, sample_ugw_bipartite, BipartiteSampler};
pub use colored::{conj, ColoredOffspringLaw, ColoredTree};
pub use degree::{poisson_pmf, DegreeLaw, DegreeSampler, PoissonTail};
pub use marginal::{
    consistency_check, edge_law_identity, marginal_ugw, marginal_ugw_capped, DEFAULT_SUPPORT_CAP,
};
pub use sampler::{empirical_ugw_law, sample_ugw_h, UgwSampler};
pub use typed::{hat_p_tt, TypedBranchingLaw};

pub fn size_biased<W: crate::weight::Weight>(p: &DegreeLaw<W>) -> crate::Result<DegreeLaw<W>> {
    p.size_biased()
}

pub fn colored_hat<W: crate::weight::Weight>(
    p: &ColoredOffspringLaw<W>,
    c: usize,
) -> &[(Vec<u32>, W)] {
    p.colored_hat(c)
}

pub fn sample_ugw_colored<W: crate::weight::Weight, R: rand::Rng + ?Sized>(
    p: &ColoredOffspringLaw<W>,
    k: usize,
    rng: &mut R,
) -> ColoredTree {
    p.sample(k, rng)
}
