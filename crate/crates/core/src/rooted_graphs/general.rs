//! Canonical form for rooted graphs that are not trees.
//!
//! Pendant trees are stripped first and recorded as vertex labels, so only
//! the core (cycles plus the paths joining them to the root) goes through the
//! permutation search. The search is individualization-refinement: colors
//! start from (distance, loops, label, core degree), are refined until
//! stable, and ties are broken by branching on each member of the first
//! non-singleton cell. Twins (vertices with identical rows) are branched on
//! only once. The certificate is the lexicographically least byte string over
//! all leaves.

use std::collections::VecDeque;

use super::class::{attach_tree, CanonicalClass, GENERAL_PREFIX};
use super::graph::{Graph, LabeledRootedGraph};
use crate::error::{Error, Result};

struct Core {
    mult: Vec<Vec<u8>>,
    loops: Vec<u8>,
    labels: Vec<String>,
}

pub(crate) fn canonical(g: &LabeledRootedGraph) -> CanonicalClass {
    let core = strip_pendants(g);
    let k = core.loops.len();
    let dist = core_distances(&core);
    let degree: Vec<usize> = (0..k)
        .map(|x| core.mult[x].iter().map(|&m| m as usize).sum())
        .collect();
    let keys: Vec<_> = (0..k)
        .map(|x| (dist[x], core.loops[x], core.labels[x].clone(), degree[x]))
        .collect();
    let colors = refine(&core, rank(&keys));
    let mut best: Option<Vec<u8>> = None;
    search(&core, colors, &mut best);
    let bytes = best.expect("search visits at least one leaf");
    let hex: String = bytes.iter().map(|b| format!("{b:02x}")).collect();
    CanonicalClass::general(format!("{GENERAL_PREFIX}{hex}"), g.clone())
}

fn strip_pendants(g: &LabeledRootedGraph) -> Core {
    let n = g.vertex_count();
    let mut deg: Vec<usize> = (0..n).map(|x| g.graph.degree(x)).collect();
    let mut removed = vec![false; n];
    let mut labels: Vec<Vec<CanonicalClass>> = vec![Vec::new(); n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&x| x != g.root && deg[x] == 1).collect();
    while let Some(x) = queue.pop_front() {
        if removed[x] || deg[x] != 1 {
            continue;
        }
        removed[x] = true;
        let p = *g
            .graph
            .neighbors(x)
            .iter()
            .find(|&&y| !removed[y])
            .expect("pendant vertex has a live neighbor");
        let c = CanonicalClass::tree(std::mem::take(&mut labels[x]));
        labels[p].push(c);
        deg[p] -= 1;
        if p != g.root && deg[p] == 1 {
            queue.push_back(p);
        }
    }
    let mut index = vec![usize::MAX; n];
    let mut order = vec![g.root];
    order.extend((0..n).filter(|&x| x != g.root && !removed[x]));
    for (i, &x) in order.iter().enumerate() {
        index[x] = i;
    }
    let k = order.len();
    let mut mult = vec![vec![0u8; k]; k];
    let mut loops = vec![0u8; k];
    for (i, &x) in order.iter().enumerate() {
        for &y in g.graph.neighbors(x) {
            if removed[y] {
                continue;
            }
            if y == x {
                loops[i] += 1;
            } else {
                mult[i][index[y]] += 1;
            }
        }
        loops[i] /= 2;
    }
    let labels = order
        .iter()
        .map(|&x| {
            let mut l = labels[x].clone();
            l.sort();
            l.iter().map(|c| c.encoding()).collect::<String>()
        })
        .collect();
    Core { mult, loops, labels }
}

fn core_distances(core: &Core) -> Vec<usize> {
    let k = core.loops.len();
    let mut dist = vec![usize::MAX; k];
    dist[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for y in 0..k {
            if core.mult[x][y] > 0 && dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    dist
}

fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).unwrap())
        .collect()
}

fn cell_count(colors: &[usize]) -> usize {
    colors.iter().copied().max().map_or(0, |m| m + 1)
}

fn refine(core: &Core, mut colors: Vec<usize>) -> Vec<usize> {
    let k = colors.len();
    loop {
        let keys: Vec<(usize, Vec<(usize, u8)>)> = (0..k)
            .map(|x| {
                let mut sig: Vec<(usize, u8)> = (0..k)
                    .filter(|&y| y != x && core.mult[x][y] > 0)
                    .map(|y| (colors[y], core.mult[x][y]))
                    .collect();
                sig.sort_unstable();
                (colors[x], sig)
            })
            .collect();
        let next = rank(&keys);
        if cell_count(&next) == cell_count(&colors) {
            return next;
        }
        colors = next;
    }
}

fn twins(core: &Core, x: usize, y: usize) -> bool {
    core.loops[x] == core.loops[y]
        && core.labels[x] == core.labels[y]
        && (0..core.loops.len())
            .all(|z| z == x || z == y || core.mult[x][z] == core.mult[y][z])
}

fn search(core: &Core, colors: Vec<usize>, best: &mut Option<Vec<u8>>) {
    let k = colors.len();
    if cell_count(&colors) == k {
        let mut perm: Vec<usize> = (0..k).collect();
        perm.sort_by_key(|&x| colors[x]);
        let cert = certificate(core, &perm);
        if best.as_ref().is_none_or(|b| cert < *b) {
            *best = Some(cert);
        }
        return;
    }
    let mut sizes = vec![0usize; k];
    for &c in &colors {
        sizes[c] += 1;
    }
    let target = (0..k).find(|&c| sizes[c] > 1).unwrap();
    let cell: Vec<usize> = (0..k).filter(|&x| colors[x] == target).collect();
    let mut tried: Vec<usize> = Vec::new();
    for &x in &cell {
        if tried.iter().any(|&y| twins(core, x, y)) {
            continue;
        }
        tried.push(x);
        let keys: Vec<(usize, bool)> = (0..k).map(|v| (colors[v], v != x)).collect();
        search(core, refine(core, rank(&keys)), best);
    }
}

fn certificate(core: &Core, perm: &[usize]) -> Vec<u8> {
    let k = perm.len();
    let mut out = Vec::new();
    out.extend_from_slice(&(k as u16).to_be_bytes());
    for &x in perm {
        out.push(core.loops[x]);
        let label = core.labels[x].as_bytes();
        out.extend_from_slice(&(label.len() as u32).to_be_bytes());
        out.extend_from_slice(label);
    }
    for i in 0..k {
        for j in i + 1..k {
            out.push(core.mult[perm[i]][perm[j]]);
        }
    }
    out
}

/// Rebuilds a representative rooted graph from the hex part of an encoding.
pub(crate) fn decode(hex: &str) -> Result<LabeledRootedGraph> {
    let bad = || Error::Parse(format!("malformed general encoding {hex:?}"));
    if hex.len() % 2 != 0 {
        return Err(bad());
    }
    let bytes: Vec<u8> = (0..hex.len())
        .step_by(2)
        .map(|i| u8::from_str_radix(&hex[i..i + 2], 16))
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad())?;
    let mut pos = 0;
    let mut take = |n: usize| -> Result<&[u8]> {
        let s = bytes.get(pos..pos + n).ok_or_else(bad)?;
        pos += n;
        Ok(s)
    };
    let k = u16::from_be_bytes(take(2)?.try_into().unwrap()) as usize;
    if k == 0 {
        return Err(bad());
    }
    let mut g = Graph::new(k);
    let mut hanging = Vec::new();
    for x in 0..k {
        let loops = take(1)?[0];
        for _ in 0..loops {
            g.add_edge(x, x);
        }
        let len = u32::from_be_bytes(take(4)?.try_into().unwrap()) as usize;
        let label = std::str::from_utf8(take(len)?).map_err(|_| bad())?.to_string();
        hanging.push(label);
    }
    for i in 0..k {
        for j in i + 1..k {
            for _ in 0..take(1)?[0] {
                g.add_edge(i, j);
            }
        }
    }
    for (x, label) in hanging.iter().enumerate() {
        for tree in split_trees(label).ok_or_else(bad)? {
            let c = CanonicalClass::from_encoding(tree)?;
            let y = g.add_vertex();
            g.add_edge(x, y);
            attach_tree(&mut g, y, c);
        }
    }
    Ok(LabeledRootedGraph::new(g, 0))
}

/// Splits a concatenation of balanced parenthesis strings.
fn split_trees(s: &str) -> Option<Vec<&str>> {
    let mut out = Vec::new();
    let mut depth = 0i64;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => return None,
        }
        if depth < 0 {
            return None;
        }
        if depth == 0 {
            out.push(&s[start..=i]);
            start = i + 1;
        }
    }
    (depth == 0).then_some(out)
}
