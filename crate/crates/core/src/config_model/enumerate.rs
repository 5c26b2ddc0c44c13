use std::collections::BTreeMap;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};

use super::{config_space_size, Configuration, DegreeSequence};

/// Largest `|Σ|` accepted by [`for_each_configuration`].
pub const MAX_CONFIGURATIONS: u64 = 1_000_000;

/// Calls `f` once for every `σ ∈ Σ`.
pub fn for_each_configuration(d: &DegreeSequence, mut f: impl FnMut(&Configuration)) -> Result<()> {
    d.validate()?;
    let size = config_space_size(d).to_u64().unwrap_or(u64::MAX);
    if size > MAX_CONFIGURATIONS {
        return Err(Error::TooLarge(format!("{size} configurations")));
    }
    let cs = d.colors();
    let colors: Vec<(usize, usize, bool)> = d
        .totals()
        .into_iter()
        .filter(|&(c, _)| !cs.is_less(cs.conj(c)))
        .map(|(c, s)| (c, s as usize, cs.is_diagonal(c)))
        .collect();
    let mut sigma = BTreeMap::new();
    rec(d, &colors, &mut sigma, &mut f);
    Ok(())
}

fn rec(
    d: &DegreeSequence,
    colors: &[(usize, usize, bool)],
    sigma: &mut BTreeMap<usize, Vec<usize>>,
    f: &mut impl FnMut(&Configuration),
) {
    let Some((&(c, s, diagonal), rest)) = colors.split_first() else {
        let conf = Configuration::new(d.clone(), sigma.clone()).expect("enumerated σ is valid");
        f(&conf);
        return;
    };
    let mut each = |map: &[usize]| {
        sigma.insert(c, map.to_vec());
        rec(d, rest, sigma, f);
        sigma.remove(&c);
    };
    if diagonal {
        each_matching(&mut vec![usize::MAX; s], &mut each);
    } else {
        each_permutation(&mut (0..s).collect(), 0, &mut each);
    }
}

fn each_matching(map: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    let Some(x) = map.iter().position(|&y| y == usize::MAX) else {
        f(map);
        return;
    };
    for y in x + 1..map.len() {
        if map[y] == usize::MAX {
            map[x] = y;
            map[y] = x;
            each_matching(map, f);
            map[x] = usize::MAX;
            map[y] = usize::MAX;
        }
    }
}

fn each_permutation(p: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
    if i == p.len() {
        f(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        each_permutation(p, i + 1, f);
        p.swap(i, j);
    }
}

pub fn enumerate_configurations(d: &DegreeSequence) -> Result<Vec<Configuration>> {
    let mut out = Vec::new();
    for_each_configuration(d, |s| out.push(s.clone()))?;
    Ok(out)
}
