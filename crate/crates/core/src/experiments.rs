//! Monte Carlo experiments: cycle statistics of the configuration model,
//! local convergence of `𝒢(D, h)` samples, and concentration of class
//! frequencies. Every sample draws from its own ChaCha8 stream derived from
//! `(seed, stream)`, and results are reduced in sample order, so output is
//! independent of the thread count.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config_model::{
    count_cycles, has_cycle_leq, lambda_h_estimate, sample_configuration, DegreeSequence,
    GdhSampler,
};
use crate::error::{Error, Result};
use crate::neighborhood::vertex_classes;
use crate::rooted_graphs::CanonicalClass;
use crate::ugw::{marginal_ugw, ColoredOffspringLaw, DegreeLaw};
use crate::weight::Weight;

/// RNG for sample `index` of experiment `block` under `seed`.
pub fn sub_rng(seed: u64, block: u32, index: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((block as u64) << 32) | index as u64);
    rng
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

/// Empirical colored offspring law of `D`: each row with mass `1/n`.
pub fn offspring_law_of(d: &DegreeSequence) -> Result<ColoredOffspringLaw<f64>> {
    let mut counts: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    for u in 0..d.n() {
        *counts.entry(d.dense_row(u)).or_default() += 1;
    }
    let n = d.n() as f64;
    ColoredOffspringLaw::new(
        d.colors().l(),
        counts.into_iter().map(|(r, k)| (r, k as f64 / n)).collect(),
    )
}

/// Limiting mean number of `ℓ`-cycles in `CM(D)` for `ℓ = 1..=max_len`
/// (index 0 unused).
pub fn cycle_intensities(d: &DegreeSequence, max_len: usize) -> Result<Vec<f64>> {
    let p = offspring_law_of(d)?;
    let mut out = vec![0.0; max_len + 1];
    let mut prev = 0.0;
    for (ell, slot) in out.iter_mut().enumerate().skip(1) {
        let cur = lambda_h_estimate(&p, ell);
        *slot = cur - prev;
        prev = cur;
    }
    Ok(out)
}

/// Degree sequence with exactly `n P(k)` vertices of degree `k`.
pub fn degree_sequence_for<W: Weight>(p: &DegreeLaw<W>, n: usize) -> Result<DegreeSequence> {
    let mut degrees = Vec::with_capacity(n);
    for (k, w) in p.support() {
        let count = w.to_f64() * n as f64;
        let rounded = count.round();
        if (count - rounded).abs() > 1e-9 {
            return Err(Error::InvalidDegreeSequence(format!(
                "n = {n} gives {count} vertices of degree {k}"
            )));
        }
        degrees.extend(std::iter::repeat_n(k as u32, rounded as usize));
    }
    if degrees.len() != n {
        return Err(Error::InvalidDegreeSequence(format!("{} vertices instead of {n}", degrees.len())));
    }
    let d = DegreeSequence::scalar(&degrees);
    d.validate()?;
    Ok(d)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleRow {
    pub len: usize,
    pub mean: f64,
    pub stderr: f64,
    pub expected: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleReport {
    pub n: usize,
    pub samples: usize,
    pub rows: Vec<CycleRow>,
    /// Fraction of samples with no loop or multi-edge.
    pub simple_rate: f64,
    pub simple_stderr: f64,
    /// `exp(-λ(2))`.
    pub expected_simple: f64,
}

/// Cycle counts of `samples` draws from `CM(D)`.
pub fn cycle_experiment(d: &DegreeSequence, max_len: usize, samples: usize, seed: u64) -> Result<CycleReport> {
    if samples == 0 {
        return Err(Error::Domain("need at least one sample".into()));
    }
    let draws: Vec<Result<(Vec<u64>, bool)>> = (0..samples as u32)
        .into_par_iter()
        .map(|i| {
            let mut rng = sub_rng(seed, 0, i);
            let g = sample_configuration(d, &mut rng)?.graph().colorblind();
            Ok((count_cycles(&g, max_len), !has_cycle_leq(&g, 2)))
        })
        .collect();
    let draws: Vec<(Vec<u64>, bool)> = draws.into_iter().collect::<Result<_>>()?;
    let expected = cycle_intensities(d, max_len)?;
    let rows = (1..=max_len)
        .map(|ell| {
            let xs: Vec<f64> = draws.iter().map(|(c, _)| c[ell] as f64).collect();
            let (mean, sd) = mean_sd(&xs);
            CycleRow {
                len: ell,
                mean,
                stderr: sd / (samples as f64).sqrt(),
                expected: expected[ell],
            }
        })
        .collect();
    let simple = draws.iter().filter(|(_, s)| *s).count() as f64 / samples as f64;
    let lambda2 = expected.iter().take(3).sum::<f64>();
    Ok(CycleReport {
        n: d.n(),
        samples,
        rows,
        simple_rate: simple,
        simple_stderr: (simple * (1.0 - simple) / samples as f64).sqrt(),
        expected_simple: (-lambda2).exp(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergeRow {
    pub n: usize,
    pub samples: usize,
    /// TV between the mean of `U(G)_depth` over samples and the UGW marginal.
    pub tv: f64,
    pub attempts: u64,
    pub accepts: u64,
}

/// Samples `𝒢(D_n, h)` for each `n`, where `D_n` has exactly `n P(k)`
/// vertices of degree `k`, and compares the averaged depth-`depth` empirical
/// law with `[UGW_1(P)]_depth`.
pub fn converge_experiment(
    p: &DegreeLaw,
    n_list: &[usize],
    samples: usize,
    depth: usize,
    h: usize,
    seed: u64,
) -> Result<Vec<ConvergeRow>> {
    if samples == 0 {
        return Err(Error::Domain("need at least one sample".into()));
    }
    let target = marginal_ugw(&p.to_law(), depth)?.to_f64();
    let mut out = Vec::with_capacity(n_list.len());
    for (block, &n) in n_list.iter().enumerate() {
        let d = degree_sequence_for(p, n)?;
        let draws: Vec<Result<(Vec<CanonicalClass>, u64)>> = (0..samples as u32)
            .into_par_iter()
            .map(|i| {
                let mut rng = sub_rng(seed, block as u32 + 1, i);
                let mut sampler = GdhSampler::new(d.clone(), h)?;
                let g = sampler.sample(&mut rng)?;
                Ok((vertex_classes(&g.colorblind(), depth), sampler.attempts()))
            })
            .collect();
        let mut counts: BTreeMap<CanonicalClass, u64> = BTreeMap::new();
        let mut attempts = 0;
        for draw in draws {
            let (classes, a) = draw?;
            attempts += a;
            for c in classes {
                *counts.entry(c).or_default() += 1;
            }
        }
        let total = (samples * n) as f64;
        let mut tv = 0.0;
        for (c, &k) in &counts {
            tv += (k as f64 / total - target.prob(*c)).abs();
        }
        for (c, w) in target.iter() {
            if !counts.contains_key(&c) {
                tv += w;
            }
        }
        out.push(ConvergeRow {
            n,
            samples,
            tv: tv / 2.0,
            attempts,
            accepts: samples as u64,
        });
    }
    Ok(out)
}

/// `δ = n / ((4κ)² N)` with `κ = 2 Σ_{s<k} (θ L²)^s`: the constant in
/// `P(|U(G)(A) - E U(G)(A)| >= t) <= 2 exp(-δ n t²)` for a depth-`k` class
/// frequency on `CM(D)` with maximum entry `θ` and `N = Σ_c S_c`.
pub fn concentration_delta(d: &DegreeSequence, k: usize) -> f64 {
    let theta = d.rows().iter().flatten().map(|&(_, x)| x).max().unwrap_or(0) as f64;
    let l2 = (d.colors().l() * d.colors().l()) as f64;
    let kappa = 2.0 * (0..k).map(|s| (theta * l2).powi(s as i32)).sum::<f64>();
    let big_n: u64 = d.totals().values().sum();
    d.n() as f64 / ((4.0 * kappa).powi(2) * big_n as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailPoint {
    pub t: f64,
    pub empirical: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcentrationRow {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
    /// `sd √n`.
    pub scaled_sd: f64,
    pub delta: f64,
    pub tail: Vec<TailPoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub degree: u32,
    pub rows: Vec<ConcentrationRow>,
    /// Geometric mean of `sd √n` over the rows.
    pub fitted_c: f64,
    /// Every `sd √n` lies in `[C/2, 2C]`.
    pub stable: bool,
    /// No empirical tail point exceeds its envelope.
    pub below_envelope: bool,
}

/// Frequency of the depth-1 class of a simple `degree`-star in `CM(D)` for a
/// `degree`-regular `D`, over `samples` draws for each `n`; tails are read
/// at `t = j sd` for `j = 1..=5`.
pub fn concentration_experiment(degree: u32, n_list: &[usize], samples: usize, seed: u64) -> Result<ConcentrationReport> {
    if samples < 2 {
        return Err(Error::Domain("need at least two samples".into()));
    }
    let star = CanonicalClass::star(degree as usize);
    let mut rows = Vec::with_capacity(n_list.len());
    for (block, &n) in n_list.iter().enumerate() {
        let d = DegreeSequence::scalar(&vec![degree; n]);
        d.validate()?;
        let freqs: Vec<Result<f64>> = (0..samples as u32)
            .into_par_iter()
            .map(|i| {
                let mut rng = sub_rng(seed, block as u32 + 1, i);
                let g = sample_configuration(&d, &mut rng)?.graph().colorblind();
                let hits = vertex_classes(&g, 1).iter().filter(|&&c| c == star).count();
                Ok(hits as f64 / n as f64)
            })
            .collect();
        let freqs: Vec<f64> = freqs.into_iter().collect::<Result<_>>()?;
        let (mean, sd) = mean_sd(&freqs);
        let delta = concentration_delta(&d, 1);
        let tail = (1..=5)
            .map(|j| {
                let t = j as f64 * sd;
                let hits = freqs.iter().filter(|&&x| (x - mean).abs() >= t).count();
                TailPoint {
                    t,
                    empirical: hits as f64 / samples as f64,
                    bound: (2.0 * (-delta * n as f64 * t * t).exp()).min(1.0),
                }
            })
            .collect();
        rows.push(ConcentrationRow {
            n,
            mean,
            sd,
            scaled_sd: sd * (n as f64).sqrt(),
            delta,
            tail,
        });
    }
    let logs: Vec<f64> = rows.iter().map(|r| r.scaled_sd.ln()).collect();
    let fitted_c = (logs.iter().sum::<f64>() / logs.len().max(1) as f64).exp();
    let stable = rows
        .iter()
        .all(|r| r.scaled_sd >= fitted_c / 2.0 && r.scaled_sd <= 2.0 * fitted_c);
    let below_envelope = rows
        .iter()
        .flat_map(|r| &r.tail)
        .all(|p| p.empirical <= p.bound);
    Ok(ConcentrationReport {
        degree,
        rows,
        fitted_c,
        stable,
        below_envelope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn sub_streams_differ_and_repeat() {
        let a: u64 = sub_rng(1, 0, 0).random();
        let b: u64 = sub_rng(1, 0, 1).random();
        let c: u64 = sub_rng(1, 1, 0).random();
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, sub_rng(1, 0, 0).random::<u64>());
    }

    #[test]
    fn regular_intensities() {
        let d = DegreeSequence::scalar(&[3; 10]);
        let lam = cycle_intensities(&d, 4).unwrap();
        for (ell, want) in [(1, 1.0), (2, 1.0), (3, 4.0 / 3.0), (4, 2.0)] {
            assert!((lam[ell] - want).abs() < 1e-12, "{ell}: {}", lam[ell]);
        }
    }

    #[test]
    fn deterministic_sequences() {
        let p = DegreeLaw::from_fractions(&[(2, 1, 2), (3, 1, 2)]).unwrap();
        let d = degree_sequence_for(&p, 8).unwrap();
        assert_eq!(d.total(0), 20);
        assert!(degree_sequence_for(&p, 6).is_err());
        assert!(degree_sequence_for(&p, 7).is_err());
    }

    #[test]
    fn regular_delta() {
        let d = DegreeSequence::scalar(&[3; 20]);
        assert!((concentration_delta(&d, 1) - 1.0 / 192.0).abs() < 1e-15);
    }

    #[test]
    fn small_runs_are_reproducible() {
        let d = DegreeSequence::scalar(&[3; 30]);
        let a = cycle_experiment(&d, 4, 50, 9).unwrap();
        let b = cycle_experiment(&d, 4, 50, 9).unwrap();
        assert_eq!(a, b);
        let p = DegreeLaw::point_mass(3);
        let r = converge_experiment(&p, &[20], 5, 2, 2, 4).unwrap();
        assert_eq!(r, converge_experiment(&p, &[20], 5, 2, 2, 4).unwrap());
        assert!(r[0].tv >= 0.0 && r[0].tv <= 1.0);
        let c = concentration_experiment(3, &[40], 20, 1).unwrap();
        assert_eq!(c.rows.len(), 1);
        assert!(c.rows[0].tail.iter().all(|t| t.bound <= 1.0));
    }
}
