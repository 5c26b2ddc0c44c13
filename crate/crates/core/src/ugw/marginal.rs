use std::collections::HashMap;

use crate::combinatorics::multinomial;
use crate::error::{Error, Result};
use crate::neighborhood::{edge_type_law, is_admissible, require_admissible, NeighborhoodLaw};
use crate::rooted_graphs::CanonicalClass;
use crate::weight::Weight;

use super::typed::{remove_child, TypedBranchingLaw};

/// Default cap on the support size of an exact marginal.
pub const DEFAULT_SUPPORT_CAP: usize = 1_000_000;

/// `(UGW_h(P))_k` for `k >= h`, exact in rational mode.
pub fn marginal_ugw<W: Weight>(p: &NeighborhoodLaw<W>, k: usize) -> Result<NeighborhoodLaw<W>> {
    marginal_ugw_capped(p, k, DEFAULT_SUPPORT_CAP)
}

pub fn marginal_ugw_capped<W: Weight>(
    p: &NeighborhoodLaw<W>,
    k: usize,
    cap: usize,
) -> Result<NeighborhoodLaw<W>> {
    if k < p.depth() {
        return Err(Error::DepthMismatch(k, p.depth()));
    }
    require_admissible(p)?;
    let mut q = p.clone();
    while q.depth() < k {
        q = extend_one(&q, cap)?;
    }
    Ok(q)
}

/// One step `P -> (UGW_h(P))_{h+1}`: each group of `n_a` root children with
/// pattern `s^a` is extended by an i.i.d. sample of size `n_a` from
/// `P̂_{s^a, s^{-a}}`, which contributes a multinomial term per multiset.
fn extend_one<W: Weight>(p: &NeighborhoodLaw<W>, cap: usize) -> Result<NeighborhoodLaw<W>> {
    let h = p.depth();
    let table = TypedBranchingLaw::new(p)?;
    let mut out: HashMap<CanonicalClass, W> = HashMap::new();
    for (g, w) in p.iter() {
        let children = g.children();
        // Partial products: (children chosen so far, weight).
        let mut partial: Vec<(Vec<CanonicalClass>, W)> = vec![(Vec::new(), w.clone())];
        let mut i = 0;
        while i < children.len() {
            let s = children[i];
            let n = children[i..].iter().take_while(|&&x| x == s).count();
            i += n;
            let s_minus = remove_child(g, s).truncate(h - 1);
            let hat = table.get(s, s_minus)?;
            let atoms: Vec<(CanonicalClass, W)> = hat.iter().map(|(c, w)| (c, w.clone())).collect();
            let groups = multisets(&atoms, n);
            let mut next = Vec::with_capacity(partial.len() * groups.len());
            for (chosen, pw) in &partial {
                for (extra, gw) in &groups {
                    let mut c = chosen.clone();
                    c.extend_from_slice(extra);
                    next.push((c, pw.clone() * gw.clone()));
                }
            }
            if next.len() > cap {
                return Err(Error::SupportExplosion { size: next.len(), cap });
            }
            partial = next;
        }
        for (chosen, pw) in partial {
            let slot = out.entry(CanonicalClass::tree(chosen)).or_insert_with(W::zero);
            *slot = slot.clone() + pw;
        }
        if out.len() > cap {
            return Err(Error::SupportExplosion { size: out.len(), cap });
        }
    }
    NeighborhoodLaw::new(h + 1, out)
}

/// All multisets of size `n` from `atoms`, weighted by
/// `multinomial(n; counts) ∏ p^count`.
fn multisets<W: Weight>(atoms: &[(CanonicalClass, W)], n: usize) -> Vec<(Vec<CanonicalClass>, W)> {
    fn rec<W: Weight>(
        atoms: &[(CanonicalClass, W)],
        left: usize,
        counts: &mut Vec<u64>,
        out: &mut Vec<(Vec<CanonicalClass>, W)>,
        total: usize,
    ) {
        let i = counts.len();
        if i + 1 == atoms.len() || left == 0 {
            let mut counts = counts.clone();
            counts.resize(atoms.len(), 0);
            counts[i.min(atoms.len() - 1)] += left as u64;
            let mut w = W::from_biguint(&multinomial(&counts));
            let mut chosen = Vec::with_capacity(total);
            for (j, &k) in counts.iter().enumerate() {
                for _ in 0..k {
                    w = w * atoms[j].1.clone();
                    chosen.push(atoms[j].0);
                }
            }
            out.push((chosen, w));
            return;
        }
        for take in (0..=left).rev() {
            counts.push(take as u64);
            rec(atoms, left - take, counts, out, total);
            counts.pop();
        }
    }
    let mut out = Vec::new();
    if atoms.is_empty() {
        return out;
    }
    rec(atoms, n, &mut Vec::new(), &mut out, n);
    out
}

fn laws_match<W: Weight>(a: &NeighborhoodLaw<W>, b: &NeighborhoodLaw<W>) -> bool {
    if W::EXACT {
        a == b
    } else {
        a.tv_distance(b).is_ok_and(|d| d <= 1e-12)
    }
}

/// Tower consistency around depth `k`: with `Q = (UGW_h(P))_k`, checks that
/// `Q` is admissible, that `(UGW_k(Q))_{k+1} = (UGW_h(P))_{k+1}` and that
/// truncating the latter back to `k` returns `Q`.
pub fn consistency_check<W: Weight>(p: &NeighborhoodLaw<W>, k: usize) -> Result<bool> {
    require_admissible(p)?;
    let q = marginal_ugw(p, k)?;
    if !is_admissible(&q) {
        return Ok(false);
    }
    let from_q = marginal_ugw(&q, k + 1)?;
    let from_p = marginal_ugw(p, k + 1)?;
    Ok(laws_match(&from_q, &from_p) && laws_match(&from_p.truncate(k)?, &q))
}

/// With `Q = (UGW_h(P))_{h+1}`, checks
/// `e_Q(t,t') = e_P(s,s') P̂_{s,s'}(t) P̂_{s',s}(t')` for all pairs of
/// depth-`h` types, where `s = t_{h-1}` and `s' = t'_{h-1}`.
pub fn edge_law_identity<W: Weight>(p: &NeighborhoodLaw<W>) -> Result<bool> {
    require_admissible(p)?;
    let h = p.depth();
    let q = marginal_ugw(p, h + 1)?;
    let e_q = edge_type_law(&q)?;
    let e_p = edge_type_law(p)?;
    let table = TypedBranchingLaw::new(p)?;
    let mut types = e_q.types();
    for law in table.table.values() {
        types.extend(law.support().keys().copied());
    }
    let scale = p.mean_degree().to_f64();
    for &t in &types {
        for &t_prime in &types {
            let (s, s_prime) = (t.truncate(h - 1), t_prime.truncate(h - 1));
            let rhs = match (table.get(s, s_prime), table.get(s_prime, s)) {
                (Ok(a), Ok(b)) => e_p.get(s, s_prime) * a.prob(t) * b.prob(t_prime),
                _ => W::zero(),
            };
            if !e_q.get(t, t_prime).approx_eq(&rhs, 1e-12, scale) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
