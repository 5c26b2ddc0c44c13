use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::neighborhood::{edge_type_law, require_admissible, NeighborhoodLaw};
use crate::rooted_graphs::CanonicalClass;
use crate::weight::Weight;

/// `P̂_{t,t'}` for one ordered type pair: the law of `T(o,v)_h` for a child
/// `v` with `T(o,v)_{h-1} = t` and `T(v,o)_{h-1} = t'`.
pub fn hat_p_tt<W: Weight>(
    p: &NeighborhoodLaw<W>,
    t: CanonicalClass,
    t_prime: CanonicalClass,
) -> Result<NeighborhoodLaw<W>> {
    require_admissible(p)?;
    let e = crate::neighborhood::e_p(p, t, t_prime)?;
    if !e.is_positive() {
        return Err(Error::ZeroEdgeType(t.to_string(), t_prime.to_string()));
    }
    let h = p.depth();
    let mut atoms = Vec::new();
    for (g, w) in p.iter() {
        if !g.is_tree() {
            return Err(Error::NotATree(g.to_string()));
        }
        let mult = g.children().iter().filter(|&&c| c == t_prime).count();
        if mult == 0 {
            continue;
        }
        let tau = remove_child(g, t_prime);
        if tau.truncate(h - 1) == t {
            atoms.push((tau, w.clone() * W::from_u64(mult as u64) / e.clone()));
        }
    }
    NeighborhoodLaw::new(h, atoms)
}

/// Tree class `g` with one root child equal to `c` removed.
pub(crate) fn remove_child(g: CanonicalClass, c: CanonicalClass) -> CanonicalClass {
    let mut children = g.children().to_vec();
    let pos = children.iter().position(|&x| x == c).expect("child present");
    children.remove(pos);
    CanonicalClass::tree(children)
}

/// The full table `(t, t') -> P̂_{t,t'}` over pairs with `e_P(t,t') > 0`.
#[derive(Clone, Debug)]
pub struct TypedBranchingLaw<W = BigRational> {
    pub h: usize,
    pub base: NeighborhoodLaw<W>,
    pub table: BTreeMap<(CanonicalClass, CanonicalClass), NeighborhoodLaw<W>>,
}

impl<W: Weight> TypedBranchingLaw<W> {
    pub fn new(p: &NeighborhoodLaw<W>) -> Result<Self> {
        require_admissible(p)?;
        let h = p.depth();
        if h == 0 {
            return Err(Error::DepthMismatch(0, 1));
        }
        let e = edge_type_law(p)?;
        let mut raw: BTreeMap<(CanonicalClass, CanonicalClass), Vec<(CanonicalClass, W)>> =
            BTreeMap::new();
        for (g, w) in p.iter() {
            if !g.is_tree() {
                return Err(Error::NotATree(g.to_string()));
            }
            let children = g.children();
            let mut i = 0;
            while i < children.len() {
                let c = children[i];
                let mult = children[i..].iter().take_while(|&&x| x == c).count();
                let tau = remove_child(g, c);
                raw.entry((tau.truncate(h - 1), c))
                    .or_default()
                    .push((tau, w.clone() * W::from_u64(mult as u64)));
                i += mult;
            }
        }
        let mut table = BTreeMap::new();
        for (key, atoms) in raw {
            let norm = e.get(key.0, key.1);
            if !norm.is_positive() {
                return Err(Error::ZeroEdgeType(key.0.to_string(), key.1.to_string()));
            }
            let law = NeighborhoodLaw::new(
                h,
                atoms.into_iter().map(|(c, w)| (c, w / norm.clone())),
            )?;
            table.insert(key, law);
        }
        Ok(TypedBranchingLaw {
            h,
            base: p.clone(),
            table,
        })
    }

    pub fn get(&self, t: CanonicalClass, t_prime: CanonicalClass) -> Result<&NeighborhoodLaw<W>> {
        self.table
            .get(&(t, t_prime))
            .ok_or_else(|| Error::ZeroEdgeType(t.to_string(), t_prime.to_string()))
    }
}
