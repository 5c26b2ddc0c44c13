use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::{double_falling, factorial, falling, matchings};
use crate::error::{Error, Result};
use crate::ugw::ColoredOffspringLaw;

use super::{ColoredMultigraph, DegreeSequence};

/// Largest motif accepted by the brute-force automorphism count.
pub const MAX_MOTIF: usize = 8;

/// `b(H) = ∏_{C_<} ∏_{i,j} ω_c(i,j)! · ∏_{C_=} ∏_i (ω_c(i,i)/2)! 2^{ω_c(i,i)/2} ∏_{i<j} ω_c(i,j)!`.
pub fn b_factor(h: &ColoredMultigraph) -> BigUint {
    let cs = h.colors();
    let mut b = BigUint::one();
    for ((c, u, v), k) in h.weights() {
        if cs.is_less(c) {
            b *= factorial(k as u64);
        } else if cs.is_diagonal(c) {
            if u < v {
                b *= factorial(k as u64);
            } else if u == v {
                let loops = (k / 2) as u64;
                b *= factorial(loops) << loops as usize;
            }
        }
    }
    b
}

fn check_degrees(d: &DegreeSequence, h: &ColoredMultigraph) -> Result<()> {
    if h.colors() != d.colors() || h.degree_sequence() != *d {
        return Err(Error::DegreeMismatch);
    }
    Ok(())
}

fn product_of_degree_factorials(d: &DegreeSequence) -> BigUint {
    d.rows()
        .iter()
        .flatten()
        .fold(BigUint::one(), |acc, &(_, k)| acc * factorial(k as u64))
}

/// `|Σ| = ∏_{C_<} S_c! ∏_{C_=} (S_c - 1)!!`.
pub fn config_space_size(d: &DegreeSequence) -> BigUint {
    let cs = d.colors();
    let mut size = BigUint::one();
    for (c, s) in d.totals() {
        if cs.is_less(c) {
            size *= factorial(s);
        } else if cs.is_diagonal(c) {
            size *= matchings(s);
        }
    }
    size
}

/// `#{σ : Γ(σ) = H} = ∏_{c ∈ C_≤} n_c(H)`, one color class at a time.
pub fn fiber_size(d: &DegreeSequence, h: &ColoredMultigraph) -> Result<BigUint> {
    check_degrees(d, h)?;
    let cs = d.colors();
    let mut total = BigUint::one();
    for c in cs.less_eq() {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for u in 0..d.n() {
            num *= factorial(d.get(u, c) as u64);
            if cs.is_less(c) {
                num *= factorial(d.get(u, cs.conj(c)) as u64);
            }
        }
        for ((c2, u, v), k) in h.weights() {
            if c2 != c {
                continue;
            }
            if cs.is_less(c) || u < v {
                den *= factorial(k as u64);
            } else if u == v {
                let loops = (k / 2) as u64;
                den *= factorial(loops) << loops as usize;
            }
        }
        total *= num / den;
    }
    Ok(total)
}

/// `ℙ(Γ(σ) = H)` for uniform `σ`:
/// `∏_c ∏_i D_c(i)! / (b(H) ∏_{C_<} S_c! ∏_{C_=} (S_c - 1)!!)`.
pub fn cm_probability(d: &DegreeSequence, h: &ColoredMultigraph) -> Result<BigRational> {
    check_degrees(d, h)?;
    let num = product_of_degree_factorials(d);
    let den = b_factor(h) * config_space_size(d);
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// `exc(H) = (1/2) Σ_c Σ_i d_c(i) - k`.
pub fn excess(h: &ColoredMultigraph) -> i64 {
    let half_degrees: u64 = h.weights().map(|(_, k)| k as u64).sum();
    (half_degrees / 2) as i64 - h.n() as i64
}

/// Vertex permutations preserving every `ω_c`, by backtracking.
pub fn automorphism_count(h: &ColoredMultigraph) -> Result<u64> {
    let k = h.n();
    if k > MAX_MOTIF {
        return Err(Error::TooLarge(format!("automorphisms of a {k}-vertex motif")));
    }
    let rows: Vec<Vec<u32>> = {
        let d = h.degree_sequence();
        (0..k).map(|u| d.dense_row(u)).collect()
    };
    let cs = h.colors();
    fn extend(
        h: &ColoredMultigraph,
        rows: &[Vec<u32>],
        colors: usize,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> u64 {
        let u = image.len();
        if u == rows.len() {
            return 1;
        }
        let mut count = 0;
        for x in 0..rows.len() {
            if used[x] || rows[x] != rows[u] {
                continue;
            }
            let ok = (0..=u).all(|v| {
                let y = if v == u { x } else { image[v] };
                (0..colors).all(|c| h.omega(c, u, v) == h.omega(c, x, y) && h.omega(c, v, u) == h.omega(c, y, x))
            });
            if ok {
                used[x] = true;
                image.push(x);
                count += extend(h, rows, colors, image, used);
                image.pop();
                used[x] = false;
            }
        }
        count
    }
    Ok(extend(h, &rows, cs.count(), &mut Vec::new(), &mut vec![false; k]))
}

/// Per motif vertex, the `c`-degrees `d_c^H(i)`.
fn motif_degrees(h: &ColoredMultigraph) -> Vec<Vec<(usize, u32)>> {
    let d = h.degree_sequence();
    (0..h.n()).map(|u| d.row(u).to_vec()).collect()
}

/// Exact `𝔼 X(H, Γ)` under `CM(D)`:
/// `(n)_k 𝔼 ∏_c ∏_i (M_c(i))_{d_c^H(i)} / (a(H) b(H) ∏_{C_<} (S_c)_{s_c} ∏_{C_=} ((S_c))_{s_c})`
/// with `M` drawn without replacement from the rows of `D`.
pub fn subgraph_count_expectation(d: &DegreeSequence, h: &ColoredMultigraph) -> Result<BigRational> {
    if h.colors() != d.colors() {
        return Err(Error::DegreeMismatch);
    }
    let a = automorphism_count(h)?;
    let degs = motif_degrees(h);
    let mut types: BTreeMap<&[(usize, u32)], u64> = BTreeMap::new();
    for u in 0..d.n() {
        *types.entry(d.row(u)).or_default() += 1;
    }
    let types: Vec<(&[(usize, u32)], u64)> = types.into_iter().collect();
    // f[i][t] = ∏_c (D_c)_{d_c(i)} for row type t
    let f: Vec<Vec<BigUint>> = degs
        .iter()
        .map(|want| {
            types
                .iter()
                .map(|(row, _)| {
                    want.iter().fold(BigUint::one(), |acc, &(c, k)| {
                        let have = row.binary_search_by_key(&c, |&(x, _)| x).map_or(0, |j| row[j].1);
                        acc * falling(have as u64, k as u64)
                    })
                })
                .collect()
        })
        .collect();
    fn assign(f: &[Vec<BigUint>], counts: &mut [u64], i: usize, acc: BigUint) -> BigUint {
        if acc.is_zero() {
            return acc;
        }
        if i == f.len() {
            return acc;
        }
        let mut total = BigUint::zero();
        for t in 0..counts.len() {
            if counts[t] == 0 || f[i][t].is_zero() {
                continue;
            }
            let factor = &f[i][t] * counts[t];
            counts[t] -= 1;
            total += assign(f, counts, i + 1, &acc * factor);
            counts[t] += 1;
        }
        total
    }
    let mut counts: Vec<u64> = types.iter().map(|&(_, n)| n).collect();
    let num = assign(&f, &mut counts, 0, BigUint::one());

    let cs = d.colors();
    let totals = d.totals();
    let mut s_h: BTreeMap<usize, u64> = BTreeMap::new();
    for row in &degs {
        for &(c, k) in row {
            *s_h.entry(c).or_default() += k as u64;
        }
    }
    let mut den = BigUint::from(a) * b_factor(h);
    for (&c, &s) in &s_h {
        let big_s = totals.get(&c).copied().unwrap_or(0);
        if cs.is_less(c) {
            den *= falling(big_s, s);
        } else if cs.is_diagonal(c) {
            den *= double_falling(big_s, s);
        }
    }
    if den.is_zero() {
        return Ok(BigRational::zero());
    }
    Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// Limit `λ_H n^{-exc(H)}` with
/// `λ_H = ∏_i 𝔼 ∏_c (D_c)_{d_c(i)} / (a(H) b(H) ∏_c (𝔼 D_c)^{s_c/2})`.
pub fn subgraph_count_limit(p: &ColoredOffspringLaw<f64>, h: &ColoredMultigraph, n: f64) -> Result<f64> {
    if h.colors().l() != p.colors() {
        return Err(Error::DegreeMismatch);
    }
    let a = automorphism_count(h)? as f64;
    let b = crate::weight::ratio_to_f64(&BigRational::from_integer(BigInt::from(b_factor(h))));
    let mut value = 1.0 / (a * b);
    let mut s_h: BTreeMap<usize, u64> = BTreeMap::new();
    for row in motif_degrees(h) {
        let moment: f64 = p
            .atoms()
            .iter()
            .map(|(m, w)| {
                w * row
                    .iter()
                    .map(|&(c, k)| falling_f64(m[c] as f64, k))
                    .product::<f64>()
            })
            .sum();
        value *= moment;
        for (c, k) in row {
            *s_h.entry(c).or_default() += k as u64;
        }
    }
    for (c, s) in s_h {
        value /= p.mean(c).powf(s as f64 / 2.0);
    }
    Ok(value * n.powf(-(excess(h) as f64)))
}

fn falling_f64(x: f64, k: u32) -> f64 {
    (0..k).map(|j| x - j as f64).product()
}

/// `λ(h) = Σ_{ℓ ≤ h} tr(K^ℓ) / (2ℓ)`, summing `λ_H` over all colored motifs
/// whose colorblind graph is a cycle of length at most `h`, where
/// `K_{c,c'} = 𝔼[D_{c̄} (D_{c'} - 1{c' = c̄})] / 𝔼 D_c`. Then `α_h = e^{-λ(h)}`.
/// For one color this is `Σ ν^ℓ / (2ℓ)` with `ν = 𝔼 D(D-1) / 𝔼 D`.
pub fn lambda_h_estimate(p: &ColoredOffspringLaw<f64>, h: usize) -> f64 {
    let l = p.colors();
    let m = l * l;
    let mut k = vec![vec![0.0; m]; m];
    for c in 0..m {
        let mean = p.mean(c);
        if mean <= 0.0 {
            continue;
        }
        let cb = crate::ugw::conj(l, c);
        for (c2, row) in k[c].iter_mut().enumerate() {
            let moment: f64 = p
                .atoms()
                .iter()
                .map(|(x, w)| {
                    let a = x[cb] as f64;
                    let b = x[c2] as f64 - if c2 == cb { 1.0 } else { 0.0 };
                    w * a * b
                })
                .sum();
            *row = moment / mean;
        }
    }
    let mut power = k.clone();
    let mut lambda = 0.0;
    for ell in 1..=h {
        if ell > 1 {
            power = (0..m)
                .map(|i| {
                    (0..m)
                        .map(|j| (0..m).map(|t| power[i][t] * k[t][j]).sum())
                        .collect()
                })
                .collect();
        }
        let trace: f64 = (0..m).map(|i| power[i][i]).sum();
        lambda += trace / (2.0 * ell as f64);
    }
    lambda
}
