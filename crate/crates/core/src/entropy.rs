//! Entropy functionals and rate functions, in nats.
//!
//! `J_h(P) = -s(d) + H(P) - (d/2) H(π_P) - Σ_{(s,s')} E_P log E_h(s,s')!`
//! is the entropy of `UGW_h(P)`; `J̄_h` extends it by `-∞` off the set of
//! admissible tree laws. The rate functions of the three graph ensembles are
//! all expressed through `J̄_h`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::combinatorics::ln_factorial;
use crate::error::{Error, Result};
use crate::neighborhood::{is_admissible, pi_p, require_admissible, NeighborhoodLaw};
use crate::rooted_graphs::CanonicalClass;
use crate::ugw::{marginal_ugw, DegreeLaw};
use crate::weight::Weight;

/// Relative tolerance for mean-degree constraints in float mode.
pub const MEAN_TOL: f64 = 1e-9;

/// A real number or `±∞`. Addition treats `-∞` as absorbing, so
/// `x + (-∞) = -∞` for every `x`, including `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub enum ExtendedReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtendedReal {
    pub const ZERO: ExtendedReal = ExtendedReal::Finite(0.0);

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::NegInf => f64::NEG_INFINITY,
            ExtendedReal::Finite(x) => x,
            ExtendedReal::PosInf => f64::INFINITY,
        }
    }
}

impl From<f64> for ExtendedReal {
    fn from(x: f64) -> Self {
        if x == f64::INFINITY {
            ExtendedReal::PosInf
        } else if x == f64::NEG_INFINITY {
            ExtendedReal::NegInf
        } else {
            ExtendedReal::Finite(x)
        }
    }
}

impl Add for ExtendedReal {
    type Output = ExtendedReal;
    fn add(self, rhs: ExtendedReal) -> ExtendedReal {
        use ExtendedReal::*;
        match (self, rhs) {
            (NegInf, _) | (_, NegInf) => NegInf,
            (PosInf, _) | (_, PosInf) => PosInf,
            (Finite(a), Finite(b)) => Finite(a + b),
        }
    }
}

impl Neg for ExtendedReal {
    type Output = ExtendedReal;
    fn neg(self) -> ExtendedReal {
        match self {
            ExtendedReal::NegInf => ExtendedReal::PosInf,
            ExtendedReal::Finite(x) => ExtendedReal::Finite(-x),
            ExtendedReal::PosInf => ExtendedReal::NegInf,
        }
    }
}

impl Sub for ExtendedReal {
    type Output = ExtendedReal;
    fn sub(self, rhs: ExtendedReal) -> ExtendedReal {
        self + (-rhs)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::NegInf => f.write_str("-inf"),
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::PosInf => f.write_str("+inf"),
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::Finite(x) => s.serialize_f64(*x),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

/// `s(d) = d/2 - (d/2) log d`, with `s(0) = 0`.
pub fn s(d: f64) -> Result<f64> {
    if !(d >= 0.0 && d.is_finite()) {
        return Err(Error::Domain(format!("s(d) needs d >= 0, got {d}")));
    }
    Ok(if d == 0.0 { 0.0 } else { d / 2.0 - d / 2.0 * d.ln() })
}

fn plogp_sum(weights: impl IntoIterator<Item = f64>) -> f64 {
    let s: f64 = weights.into_iter().filter(|&p| p > 0.0).map(|p| p * p.ln()).sum();
    // `0.0 - s` rather than `-s` so a point mass gives +0.
    0.0 - s
}

fn kl_sum<K: Ord>(p: &BTreeMap<K, f64>, q: &BTreeMap<K, f64>) -> ExtendedReal {
    let mut acc = 0.0;
    for (k, &pk) in p {
        if pk <= 0.0 {
            continue;
        }
        match q.get(k) {
            Some(&qk) if qk > 0.0 => acc += pk * (pk / qk).ln(),
            _ => return ExtendedReal::PosInf,
        }
    }
    ExtendedReal::Finite(acc)
}

fn as_f64_map<K: Ord + Clone, W: Weight>(m: &BTreeMap<K, W>) -> BTreeMap<K, f64> {
    m.iter().map(|(k, w)| (k.clone(), w.to_f64())).collect()
}

/// Shannon entropy `H(P)`.
pub fn shannon<W: Weight>(p: &NeighborhoodLaw<W>) -> f64 {
    plogp_sum(p.iter().map(|(_, w)| w.to_f64()))
}

/// `H(P | Q)`, `+∞` unless `P << Q`.
pub fn relative_entropy<W: Weight>(p: &NeighborhoodLaw<W>, q: &NeighborhoodLaw<W>) -> ExtendedReal {
    kl_sum(&as_f64_map(p.support()), &as_f64_map(q.support()))
}

/// `H(P | Poi(d))` together with an upper bound on the error coming from a
/// Poisson cutoff in `P` (zero for laws given exactly).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PoissonDivergence {
    pub value: f64,
    pub tail_bound: f64,
}

/// `H(P | Poi(d))` for a finitely supported `P`; the sum runs over the
/// support of `P`, so no truncation of the reference is needed. If `P` is a
/// renormalized Poisson cutoff with tail mass `τ`, the reported bound is
/// `-log(1 - τ)`.
pub fn relative_entropy_poisson<W: Weight>(p: &DegreeLaw<W>, d: f64) -> Result<PoissonDivergence> {
    if !(d >= 0.0 && d.is_finite()) {
        return Err(Error::Domain(format!("Poisson mean {d}")));
    }
    let mut value = 0.0;
    for (k, w) in p.support() {
        let pk = w.to_f64();
        if pk <= 0.0 {
            continue;
        }
        if d == 0.0 {
            if k > 0 {
                return Ok(PoissonDivergence { value: f64::INFINITY, tail_bound: 0.0 });
            }
            continue;
        }
        let log_poi = -d + k as f64 * d.ln() - ln_factorial(k as u64);
        value += pk * (pk.ln() - log_poi);
    }
    let tail_bound = p.tail().map_or(0.0, |t| -(-t.tail_mass).ln_1p());
    Ok(PoissonDivergence { value, tail_bound })
}

/// The four summands of `J_h(P)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JTerms {
    pub h: usize,
    pub d: f64,
    pub s_d: f64,
    pub h_p: f64,
    pub h_pi: f64,
    /// `Σ_{(s,s')} E_P log E_h(s,s')!`
    pub log_factorials: f64,
}

impl JTerms {
    pub fn value(&self) -> f64 {
        -self.s_d + self.h_p - self.d / 2.0 * self.h_pi - self.log_factorials
    }
}

/// Evaluates every term of `J_h(P)`; `P` must be admissible and supported on
/// trees.
pub fn j_h_terms<W: Weight>(p: &NeighborhoodLaw<W>) -> Result<JTerms> {
    let h = p.depth();
    if h == 0 {
        return Err(Error::DepthMismatch(0, 1));
    }
    if let Some((c, _)) = p.iter().find(|(c, _)| !c.is_tree()) {
        return Err(Error::NotATree(c.encoding().to_string()));
    }
    require_admissible(p)?;
    let d = p.mean_degree().to_f64();
    let h_pi = if d > 0.0 {
        plogp_sum(pi_p(p)?.weights.values().map(|w| w.to_f64()))
    } else {
        0.0
    };
    let mut log_factorials = 0.0;
    for (t, w) in p.iter() {
        let per: f64 = t
            .edge_types(h)?
            .iter()
            .map(|&(_, k)| ln_factorial(k as u64))
            .sum();
        log_factorials += w.to_f64() * per;
    }
    Ok(JTerms {
        h,
        d,
        s_d: s(d)?,
        h_p: shannon(p),
        h_pi,
        log_factorials,
    })
}

/// `J_h(P)`, with `h = P.depth()` and `d` the mean root degree of `P`.
pub fn j_h<W: Weight>(p: &NeighborhoodLaw<W>) -> Result<f64> {
    Ok(j_h_terms(p)?.value())
}

/// `J̄_h(P)`: `J_h(P)` on admissible tree laws, `-∞` otherwise.
pub fn j_bar<W: Weight>(p: &NeighborhoodLaw<W>) -> ExtendedReal {
    if p.depth() == 0 || !is_admissible(p) {
        return ExtendedReal::NegInf;
    }
    j_h(p).map_or(ExtendedReal::NegInf, ExtendedReal::Finite)
}

/// `Σ(UGW_1(P)) = J_1(P)` for a degree law.
pub fn sigma_ugw1<W: Weight>(p: &DegreeLaw<W>) -> Result<f64> {
    j_h(&p.to_law())
}

/// `J_1, ..., J_h` along a tower of marginals `ρ_1, ..., ρ_h`. The limit
/// `Σ(ρ)` is not claimed from finitely many terms.
pub fn j_sequence<W: Weight>(tower: &[NeighborhoodLaw<W>]) -> Vec<ExtendedReal> {
    tower.iter().map(j_bar).collect()
}

fn same_law<W: Weight>(a: &NeighborhoodLaw<W>, b: &NeighborhoodLaw<W>) -> bool {
    let keys: std::collections::BTreeSet<CanonicalClass> =
        a.support().keys().chain(b.support().keys()).copied().collect();
    keys.iter()
        .all(|&c| a.prob(c).approx_eq(&b.prob(c), MEAN_TOL, 1.0))
}

/// `Δ_k(ρ)` from `ρ_{k-1}` and `ρ_k`. `Δ_1 = H(ρ_1 | Poi(d))`; for `k >= 2`
/// it is `H(ρ_k | ρ_k*) - (d/2) H(π_{ρ_k} | π_{ρ_k*})` with
/// `ρ_k* = [UGW_{k-1}(ρ_{k-1})]_k`. Exactly zero when `ρ_k = ρ_k*` in exact
/// arithmetic.
pub fn delta_k<W: Weight>(prev: &NeighborhoodLaw<W>, cur: &NeighborhoodLaw<W>) -> Result<ExtendedReal> {
    let k = cur.depth();
    if k == 0 || prev.depth() + 1 != k {
        return Err(Error::DepthMismatch(prev.depth(), k));
    }
    if !same_law(&cur.truncate(k - 1)?, prev) {
        return Err(Error::InvalidLaw("ρ_k does not truncate to ρ_(k-1)".into()));
    }
    require_admissible(cur)?;
    let d = cur.mean_degree().to_f64();
    if k == 1 {
        let rho1 = DegreeLaw::from_law(cur);
        return Ok(ExtendedReal::Finite(relative_entropy_poisson(&rho1, d)?.value));
    }
    let star = marginal_ugw(prev, k)?;
    if W::EXACT && star == *cur {
        return Ok(ExtendedReal::ZERO);
    }
    let h_law = relative_entropy(cur, &star);
    if d == 0.0 {
        return Ok(h_law);
    }
    let h_pi = kl_sum(&as_f64_map(&pi_p(cur)?.weights), &as_f64_map(&pi_p(&star)?.weights));
    Ok(match (h_law, h_pi) {
        (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => ExtendedReal::Finite(a - d / 2.0 * b),
        (a, _) => a,
    })
}

/// `Δ_1, ..., Δ_h` along a tower `ρ_1, ..., ρ_h`.
pub fn deltas<W: Weight>(tower: &[NeighborhoodLaw<W>]) -> Result<Vec<ExtendedReal>> {
    let mut out = Vec::with_capacity(tower.len());
    let mut prev = NeighborhoodLaw::point_mass(0, CanonicalClass::isolated())?;
    for cur in tower {
        out.push(delta_k(&prev, cur)?);
        prev = cur.clone();
    }
    Ok(out)
}

fn degree_laws_match<W: Weight>(a: &DegreeLaw<W>, b: &DegreeLaw<W>) -> bool {
    let n = a.pmf().len().max(b.pmf().len());
    (0..n).all(|k| a.prob(k).approx_eq(&b.prob(k), MEAN_TOL, 1.0))
}

fn means_match<W: Weight>(mean: &W, d: &W) -> bool {
    mean.approx_eq(d, MEAN_TOL, d.to_f64())
}

/// Fixed degree sequence with empirical law `P`: `J_1(P) - J̄_h(Q)` when
/// `Q_1 = P`, `+∞` otherwise.
pub fn rate_fixed_degrees<W: Weight>(q: &NeighborhoodLaw<W>, p: &DegreeLaw<W>) -> Result<ExtendedReal> {
    if q.depth() == 0 {
        return Err(Error::DepthMismatch(0, 1));
    }
    if !degree_laws_match(&DegreeLaw::from_law(q), p) {
        return Ok(ExtendedReal::PosInf);
    }
    Ok(ExtendedReal::Finite(sigma_ugw1(p)?) - j_bar(q))
}

/// Uniform graph with `m ~ nd/2` edges: `s(d) - J̄_h(Q)` when the mean degree
/// of `Q` is `d`, `+∞` otherwise.
pub fn rate_fixed_edges<W: Weight>(q: &NeighborhoodLaw<W>, d: &W) -> Result<ExtendedReal> {
    if !means_match(&q.mean_degree(), d) {
        return Ok(ExtendedReal::PosInf);
    }
    Ok(ExtendedReal::Finite(s(d.to_f64())?) - j_bar(q))
}

/// Erdős–Rényi `G(n, λ/n)`: `λ/2 - (d/2) log λ - J̄_h(Q)` with `d` the mean
/// degree of `Q`; `λ/2` when `d = 0`.
pub fn rate_binomial<W: Weight>(q: &NeighborhoodLaw<W>, lambda: f64) -> Result<ExtendedReal> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("λ must be positive, got {lambda}")));
    }
    let d = q.mean_degree().to_f64();
    if d == 0.0 {
        return Ok(ExtendedReal::Finite(lambda / 2.0));
    }
    Ok(ExtendedReal::Finite(lambda / 2.0 - d / 2.0 * lambda.ln()) - j_bar(q))
}

/// Degree law of `G(n, λ/n)`: `(λ-d)/2 - (d/2) log(λ/d) + H(P | Poi(d))`.
pub fn rate_degree_er<W: Weight>(p: &DegreeLaw<W>, lambda: f64) -> Result<ExtendedReal> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("λ must be positive, got {lambda}")));
    }
    let d = p.mean().to_f64();
    let shift = if d == 0.0 { 0.0 } else { d / 2.0 * (lambda / d).ln() };
    let h = relative_entropy_poisson(p, d)?.value;
    Ok(ExtendedReal::from((lambda - d) / 2.0 - shift + h))
}

/// Degree law of the uniform graph with `m ~ nd/2` edges: `H(P | Poi(d))` if
/// the mean of `P` is `d`, `+∞` otherwise.
pub fn rate_degree_fixed<W: Weight>(p: &DegreeLaw<W>, d: &W) -> Result<ExtendedReal> {
    if !means_match(&p.mean(), d) {
        return Ok(ExtendedReal::PosInf);
    }
    Ok(ExtendedReal::from(relative_entropy_poisson(p, d.to_f64())?.value))
}

/// Upper bound on `Σ(UGW(P_1, P_2))` for laws supported away from `{0, 1}`:
/// `H(p_1,p_2) + Σ p_i H(P_i) + (d/2) log(d/2) - d/2 - Σ p_i E_{P_i} log D!`
/// with `p_i = d_ī/(d_1+d_2)` and `d = 2 d_1 d_2/(d_1+d_2)`.
pub fn discontinuity_bound<W: Weight>(p1: &DegreeLaw<W>, p2: &DegreeLaw<W>) -> Result<f64> {
    for p in [p1, p2] {
        if p.support().any(|(k, w)| k < 2 && w.is_positive()) {
            return Err(Error::InvalidSupport("degrees 0 and 1 are excluded".into()));
        }
    }
    let (d1, d2) = (p1.mean().to_f64(), p2.mean().to_f64());
    if d1 <= 0.0 || d2 <= 0.0 {
        return Err(Error::ZeroMean);
    }
    let w = [d2 / (d1 + d2), d1 / (d1 + d2)];
    let d = 2.0 * d1 * d2 / (d1 + d2);
    let mut total = plogp_sum(w) + d / 2.0 * (d / 2.0).ln() - d / 2.0;
    for (pi, law) in w.iter().zip([p1, p2]) {
        let h = plogp_sum(law.support().map(|(_, x)| x.to_f64()));
        let lf: f64 = law
            .support()
            .map(|(k, x)| x.to_f64() * ln_factorial(k as u64))
            .sum();
        total += pi * (h - lf);
    }
    Ok(total)
}

/// A scalar result with its provenance: the value, an exact rational form
/// when one exists, and the `J_h` breakdown when relevant.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyReport {
    pub value: ExtendedReal,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<JTerms>,
}

impl EntropyReport {
    pub fn new(value: ExtendedReal) -> Self {
        EntropyReport { value, exact: None, terms: None }
    }

    pub fn from_terms(terms: JTerms) -> Self {
        EntropyReport {
            value: ExtendedReal::Finite(terms.value()),
            exact: None,
            terms: Some(terms),
        }
    }
}
