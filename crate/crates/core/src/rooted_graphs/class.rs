use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::LazyLock;

use parking_lot::RwLock;

use super::general;
use super::graph::{Graph, LabeledRootedGraph};
use crate::error::{Error, Result};

/// Prefix of the wire form of non-tree classes.
pub const GENERAL_PREFIX: &str = "Gh:";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassKind {
    Tree,
    General,
}

/// Interned isomorphism class of a finite rooted graph.
///
/// Equality and hashing use the process-local id; ordering uses the encoding,
/// so sorted output is stable across runs and thread schedules.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CanonicalClass(u32);

struct ClassData {
    encoding: Box<str>,
    kind: ClassKind,
    depth: usize,
    root_degree: usize,
    children: Box<[CanonicalClass]>,
    representative: Option<LabeledRootedGraph>,
}

#[derive(Default)]
struct Table {
    by_encoding: HashMap<&'static str, CanonicalClass>,
    by_children: HashMap<Box<[CanonicalClass]>, CanonicalClass>,
    data: Vec<&'static ClassData>,
    truncations: HashMap<(CanonicalClass, usize), CanonicalClass>,
}

static TABLE: LazyLock<RwLock<Table>> = LazyLock::new(|| RwLock::new(Table::default()));

impl Table {
    fn insert(&mut self, data: ClassData) -> CanonicalClass {
        if let Some(&c) = self.by_encoding.get(&*data.encoding) {
            return c;
        }
        let id = CanonicalClass(self.data.len() as u32);
        let data: &'static ClassData = Box::leak(Box::new(data));
        self.by_encoding.insert(&data.encoding, id);
        if data.kind == ClassKind::Tree {
            self.by_children.insert(data.children.clone(), id);
        }
        self.data.push(data);
        id
    }
}

impl CanonicalClass {
    fn data(self) -> &'static ClassData {
        TABLE.read().data[self.0 as usize]
    }

    /// The class of a single vertex, `"()"`.
    pub fn isolated() -> CanonicalClass {
        CanonicalClass::tree(Vec::new())
    }

    /// Tree class whose root children carry the given subtrees.
    pub fn tree(mut children: Vec<CanonicalClass>) -> CanonicalClass {
        children.sort();
        if let Some(&c) = TABLE.read().by_children.get(children.as_slice()) {
            return c;
        }
        let mut encoding = String::from("(");
        let mut depth = 0;
        for c in &children {
            let d = c.data();
            assert_eq!(d.kind, ClassKind::Tree, "tree children must be trees");
            encoding.push_str(&d.encoding);
            depth = depth.max(d.depth + 1);
        }
        encoding.push(')');
        let data = ClassData {
            encoding: encoding.into_boxed_str(),
            kind: ClassKind::Tree,
            depth,
            root_degree: children.len(),
            children: children.into_boxed_slice(),
            representative: None,
        };
        TABLE.write().insert(data)
    }

    /// A star: root with `d` leaf children.
    pub fn star(d: usize) -> CanonicalClass {
        CanonicalClass::tree(vec![CanonicalClass::isolated(); d])
    }

    pub(crate) fn general(encoding: String, representative: LabeledRootedGraph) -> CanonicalClass {
        if let Some(&c) = TABLE.read().by_encoding.get(encoding.as_str()) {
            return c;
        }
        let depth = representative.height();
        let data = ClassData {
            encoding: encoding.into_boxed_str(),
            kind: ClassKind::General,
            depth,
            root_degree: representative.graph.degree(representative.root),
            children: Box::new([]),
            representative: Some(representative),
        };
        TABLE.write().insert(data)
    }

    /// Parses a wire encoding: a parenthesis tree string or `"Gh:"` + hex.
    pub fn from_encoding(s: &str) -> Result<CanonicalClass> {
        let s = s.trim();
        if let Some(c) = TABLE.read().by_encoding.get(s) {
            return Ok(*c);
        }
        if let Some(hex) = s.strip_prefix(GENERAL_PREFIX) {
            let g = general::decode(hex)?;
            return Ok(canonicalize(&g, usize::MAX));
        }
        parse_tree(s)
    }

    pub fn encoding(self) -> &'static str {
        &self.data().encoding
    }

    pub fn kind(self) -> ClassKind {
        self.data().kind
    }

    pub fn is_tree(self) -> bool {
        self.kind() == ClassKind::Tree
    }

    /// Largest distance from the root; truncating at `h >= depth()` is the
    /// identity.
    pub fn depth(self) -> usize {
        self.data().depth
    }

    pub fn root_degree(self) -> usize {
        self.data().root_degree
    }

    /// Sorted root subtrees of a tree class (empty for general classes).
    pub fn children(self) -> &'static [CanonicalClass] {
        &self.data().children
    }

    /// A labeled rooted graph in this class (root is vertex 0).
    pub fn representative(self) -> LabeledRootedGraph {
        let d = self.data();
        if let Some(g) = &d.representative {
            return g.clone();
        }
        let mut g = Graph::new(1);
        attach_tree(&mut g, 0, self);
        LabeledRootedGraph::new(g, 0)
    }

    /// The class of the induced subgraph on vertices within distance `h`.
    pub fn truncate(self, h: usize) -> CanonicalClass {
        if self.depth() <= h {
            return self;
        }
        if let Some(&c) = TABLE.read().truncations.get(&(self, h)) {
            return c;
        }
        let out = match self.kind() {
            ClassKind::Tree if h == 0 => CanonicalClass::isolated(),
            ClassKind::Tree => {
                CanonicalClass::tree(self.children().iter().map(|c| c.truncate(h - 1)).collect())
            }
            ClassKind::General => canonicalize(&self.representative(), h),
        };
        TABLE.write().truncations.insert((self, h), out);
        out
    }

    /// `tau ∪ t'_+`: adds a new root child carrying `t_prime`.
    pub fn join_at_root(self, t_prime: CanonicalClass) -> Result<CanonicalClass> {
        for c in [self, t_prime] {
            if !c.is_tree() {
                return Err(Error::NotATree(c.encoding().to_string()));
            }
        }
        let mut children = self.children().to_vec();
        children.push(t_prime);
        Ok(CanonicalClass::tree(children))
    }

    /// Edge-type counts at depth `h`: for every root neighbor `v`, the pair
    /// `(G(o,v)_{h-1}, G(v,o)_{h-1})`, aggregated with multiplicities and
    /// sorted. The counts add up to the root degree.
    pub fn edge_types(self, h: usize) -> Result<Vec<((CanonicalClass, CanonicalClass), usize)>> {
        if h == 0 {
            return Err(Error::DepthMismatch(0, 1));
        }
        if self.depth() > h {
            return Err(Error::DepthExceeded {
                class: self.encoding().to_string(),
                depth: self.depth(),
                limit: h,
            });
        }
        let mut counts: HashMap<(CanonicalClass, CanonicalClass), usize> = HashMap::new();
        match self.kind() {
            ClassKind::Tree => {
                let children = self.children();
                let mut i = 0;
                while i < children.len() {
                    let c = children[i];
                    let mult = children[i..].iter().take_while(|&&x| x == c).count();
                    let mut rest = children.to_vec();
                    rest.remove(i);
                    let key = (c.truncate(h - 1), CanonicalClass::tree(rest).truncate(h - 1));
                    *counts.entry(key).or_default() += mult;
                    i += mult;
                }
            }
            ClassKind::General => {
                let g = self.representative();
                for &v in g.graph.neighbors(g.root) {
                    let a = g.split_at_edge(g.root, v)?;
                    let b = g.split_at_edge(v, g.root)?;
                    let key = (canonicalize(&a, h - 1), canonicalize(&b, h - 1));
                    *counts.entry(key).or_default() += 1;
                }
            }
        }
        let mut out: Vec<_> = counts.into_iter().collect();
        out.sort();
        Ok(out)
    }

    /// `E_h(t, t')`: number of root neighbors `v` with `G(o,v)_{h-1} ≃ t` and
    /// `G(v,o)_{h-1} ≃ t'`.
    pub fn count_eh(self, h: usize, t: CanonicalClass, t_prime: CanonicalClass) -> Result<usize> {
        for c in [t, t_prime] {
            if h > 0 && c.depth() > h - 1 {
                return Err(Error::DepthExceeded {
                    class: c.encoding().to_string(),
                    depth: c.depth(),
                    limit: h - 1,
                });
            }
        }
        Ok(self
            .edge_types(h)?
            .into_iter()
            .find(|(k, _)| *k == (t, t_prime))
            .map_or(0, |(_, n)| n))
    }
}

impl PartialOrd for CanonicalClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalClass {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            Ordering::Equal
        } else {
            self.encoding().cmp(other.encoding())
        }
    }
}

impl fmt::Debug for CanonicalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.encoding())
    }
}

impl fmt::Display for CanonicalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.encoding())
    }
}

impl serde::Serialize for CanonicalClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.encoding())
    }
}

impl<'de> serde::Deserialize<'de> for CanonicalClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CanonicalClass::from_encoding(&s).map_err(serde::de::Error::custom)
    }
}

/// Adds the children of tree class `c` below vertex `at` of `g`.
pub(crate) fn attach_tree(g: &mut Graph, at: usize, c: CanonicalClass) {
    let mut stack = vec![(at, c)];
    while let Some((x, c)) = stack.pop() {
        for &child in c.children() {
            let y = g.add_vertex();
            g.add_edge(x, y);
            stack.push((y, child));
        }
    }
}

fn parse_tree(s: &str) -> Result<CanonicalClass> {
    let bad = || Error::Parse(format!("malformed tree encoding {s:?}"));
    let mut stack: Vec<Vec<CanonicalClass>> = Vec::new();
    let mut result = None;
    for ch in s.chars() {
        if result.is_some() {
            return Err(bad());
        }
        match ch {
            '(' => stack.push(Vec::new()),
            ')' => {
                let children = stack.pop().ok_or_else(bad)?;
                let c = CanonicalClass::tree(children);
                match stack.last_mut() {
                    Some(parent) => parent.push(c),
                    None => result = Some(c),
                }
            }
            _ => return Err(bad()),
        }
    }
    result.ok_or_else(bad)
}

/// The class of `(G, o)_h`, invariant under relabeling.
pub fn canonicalize(g: &LabeledRootedGraph, h: usize) -> CanonicalClass {
    let (ball, _) = g.graph.ball(g.root, h);
    if ball.graph.is_tree() {
        tree_class(&ball.graph, ball.root)
    } else {
        general::canonical(&ball)
    }
}

/// Class of a tree rooted at `root` (the graph must be a tree).
fn tree_class(g: &Graph, root: usize) -> CanonicalClass {
    let n = g.vertex_count();
    let mut parent = vec![usize::MAX; n];
    let mut order = vec![root];
    parent[root] = root;
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        for &y in g.neighbors(x) {
            if parent[y] == usize::MAX {
                parent[y] = x;
                order.push(y);
            }
        }
    }
    let mut kids: Vec<Vec<CanonicalClass>> = vec![Vec::new(); n];
    let mut out = CanonicalClass::isolated();
    for &x in order.iter().rev() {
        let c = CanonicalClass::tree(std::mem::take(&mut kids[x]));
        if x == root {
            out = c;
        } else {
            kids[parent[x]].push(c);
        }
    }
    out
}
