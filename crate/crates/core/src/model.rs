//! Graphs as colorings of `V x V`, ordered vertex partitions, permutations,
//! and the lattice join of partitions.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fingerprint::{combine, hash_seq, mix};

pub type VertexId = usize;
pub type ColorId = u32;
pub type ClassId = usize;

/// A total coloring of ordered vertex pairs, stored as a dense row-major
/// `n x n` matrix. Diagonal entries are vertex colors.
///
/// Entries lie in `[0, color_count)`. The palette may contain colors that
/// do not occur (a graph6 complete graph has no non-edge color), so that
/// graphs read in one format share color meanings. [`compacted`] renumbers
/// to the occurring colors.
///
/// [`compacted`]: EdgeColoredGraph::compacted
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeColoredGraph {
    n: usize,
    colors: Vec<ColorId>,
    color_count: u32,
}

/// Color of the diagonal in simple undirected graphs.
pub const SIMPLE_VERTEX: ColorId = 0;
/// Color of an edge in simple undirected graphs.
pub const SIMPLE_EDGE: ColorId = 1;
/// Color of a non-edge in simple undirected graphs.
pub const SIMPLE_NON_EDGE: ColorId = 2;

impl EdgeColoredGraph {
    pub fn new(n: usize, colors: Vec<ColorId>, color_count: u32) -> Result<Self> {
        if colors.len() != n * n {
            return Err(Error::SizeMismatch {
                expected: n * n,
                found: colors.len(),
            });
        }
        if let Some(pos) = colors.iter().position(|&c| c >= color_count) {
            return Err(Error::ColorOutOfRange {
                row: pos / n,
                col: pos % n,
                color: colors[pos],
                color_count,
            });
        }
        Ok(Self {
            n,
            colors,
            color_count,
        })
    }

    /// Builds a graph from rows; the palette is `0..=max entry`.
    pub fn from_rows(rows: &[Vec<ColorId>]) -> Result<Self> {
        let n = rows.len();
        let mut colors = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::SizeMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            colors.extend_from_slice(row);
        }
        let color_count = colors.iter().max().map_or(0, |&c| c + 1);
        Self::new(n, colors, color_count)
    }

    /// Simple undirected graph over the fixed three-color palette.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut colors = vec![SIMPLE_NON_EDGE; n * n];
        for v in 0..n {
            colors[v * n + v] = SIMPLE_VERTEX;
        }
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(Error::InconsistentPartition(format!(
                    "self-loop at {u} in a simple graph"
                )));
            }
            colors[u * n + v] = SIMPLE_EDGE;
            colors[v * n + u] = SIMPLE_EDGE;
        }
        Self::new(n, colors, 3)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn color_count(&self) -> u32 {
        self.color_count
    }

    #[inline]
    pub fn color(&self, u: VertexId, v: VertexId) -> ColorId {
        self.colors[u * self.n + v]
    }

    pub fn vertex_color(&self, v: VertexId) -> ColorId {
        self.color(v, v)
    }

    pub fn row(&self, u: VertexId) -> &[ColorId] {
        &self.colors[u * self.n..(u + 1) * self.n]
    }

    pub fn matrix(&self) -> &[ColorId] {
        &self.colors
    }

    /// True for symmetric three-color graphs with the simple palette.
    pub fn is_simple(&self) -> bool {
        self.color_count <= 3
            && (0..self.n).all(|u| {
                self.color(u, u) == SIMPLE_VERTEX
                    && (0..self.n).all(|v| {
                        u == v
                            || (self.color(u, v) == self.color(v, u)
                                && self.color(u, v) != SIMPLE_VERTEX)
                    })
            })
    }

    /// Colors that actually occur, renumbered to `[0, c)` keeping their order.
    pub fn compacted(&self) -> Self {
        let mut used: Vec<ColorId> = self.colors.clone();
        used.sort_unstable();
        used.dedup();
        let remap: BTreeMap<ColorId, ColorId> = used
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, i as ColorId))
            .collect();
        Self {
            n: self.n,
            colors: self.colors.iter().map(|c| remap[c]).collect(),
            color_count: used.len() as u32,
        }
    }

    pub(crate) fn set_vertex_color(&mut self, v: VertexId, color: ColorId) {
        self.colors[v * self.n + v] = color;
        self.color_count = self.color_count.max(color + 1);
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n,
            })
        }
    }
}

/// A bijection on `[0, n)`, stored as its image sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<VertexId>,
}

impl Permutation {
    pub fn new(image: Vec<VertexId>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &x in &image {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return Err(Error::NotAPermutation(format!("{image:?}")));
            }
        }
        Ok(Self { image })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            image: (0..n).collect(),
        }
    }

    /// Builds a permutation from disjoint cycles on `[0, n)`.
    pub fn from_cycles(n: usize, cycles: &[&[VertexId]]) -> Result<Self> {
        let mut image: Vec<VertexId> = (0..n).collect();
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
                image[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Self::new(image)
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    #[inline]
    pub fn apply(&self, v: VertexId) -> VertexId {
        self.image[v]
    }

    pub fn image(&self) -> &[VertexId] {
        &self.image
    }

    pub fn into_image(self) -> Vec<VertexId> {
        self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self` first, then `other`: `v -> other(self(v))`.
    pub fn then(&self, other: &Permutation) -> Result<Permutation> {
        check_len(self.len(), other.len())?;
        Ok(Permutation {
            image: self.image.iter().map(|&x| other.image[x]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.len()];
        for (i, &x) in self.image.iter().enumerate() {
            image[x] = i;
        }
        Permutation { image }
    }

    /// Non-trivial cycles, each starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] || self.image[start] == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.image[x];
            }
            out.push(cycle);
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::SizeMismatch { expected, found })
    }
}

/// A vertex partition whose class indices carry an order.
///
/// Members of each class are kept ascending. Derived equality compares
/// class order too; use [`OrderedPartition::same_blocks`] to compare as
/// plain set partitions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderedPartition {
    class_of: Vec<ClassId>,
    classes: Vec<Vec<VertexId>>,
}

impl OrderedPartition {
    /// Classes ordered by label value; vertices with equal labels share a class.
    pub fn from_labels<L: Ord + Clone>(labels: &[L]) -> Self {
        let mut distinct: Vec<L> = labels.to_vec();
        distinct.sort();
        distinct.dedup();
        let class_of: Vec<ClassId> = labels
            .iter()
            .map(|l| distinct.binary_search(l).expect("label present"))
            .collect();
        Self::from_class_of_unchecked(class_of, distinct.len())
    }

    fn from_class_of_unchecked(class_of: Vec<ClassId>, count: usize) -> Self {
        let mut classes = vec![Vec::new(); count];
        for (v, &c) in class_of.iter().enumerate() {
            classes[c].push(v);
        }
        Self { class_of, classes }
    }

    /// Keeps the given class order; each class is sorted.
    pub fn from_classes(n: usize, classes: Vec<Vec<VertexId>>) -> Result<Self> {
        let mut class_of = vec![usize::MAX; n];
        let mut classes = classes;
        for (id, class) in classes.iter_mut().enumerate() {
            if class.is_empty() {
                return Err(Error::InconsistentPartition(format!("class {id} is empty")));
            }
            class.sort_unstable();
            for &v in class.iter() {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                if class_of[v] != usize::MAX {
                    return Err(Error::InconsistentPartition(format!(
                        "vertex {v} appears in two classes"
                    )));
                }
                class_of[v] = id;
            }
        }
        if let Some(v) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InconsistentPartition(format!(
                "vertex {v} is not covered"
            )));
        }
        Ok(Self { class_of, classes })
    }

    pub fn discrete(n: usize) -> Self {
        Self {
            class_of: (0..n).collect(),
            classes: (0..n).map(|v| vec![v]).collect(),
        }
    }

    pub fn unit(n: usize) -> Self {
        if n == 0 {
            return Self::discrete(0);
        }
        Self {
            class_of: vec![0; n],
            classes: vec![(0..n).collect()],
        }
    }

    /// Orbits of the group generated by `generators`, ordered by minimum.
    pub fn from_generators(n: usize, generators: &[Permutation]) -> Result<Self> {
        let mut uf = UnionFind::new(n);
        for g in generators {
            check_len(n, g.len())?;
            for v in 0..n {
                uf.union(v, g.apply(v));
            }
        }
        Ok(uf.into_partition())
    }

    pub fn n(&self) -> usize {
        self.class_of.len()
    }

    /// Number of classes.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class(&self, id: ClassId) -> &[VertexId] {
        &self.classes[id]
    }

    pub fn class_of(&self, v: VertexId) -> ClassId {
        self.class_of[v]
    }

    pub fn classes(&self) -> &[Vec<VertexId>] {
        &self.classes
    }

    pub fn class_of_slice(&self) -> &[ClassId] {
        &self.class_of
    }

    pub fn is_discrete(&self) -> bool {
        self.classes.len() == self.class_of.len()
    }

    /// Same partition with classes reordered by their smallest member.
    pub fn sorted_by_min(&self) -> Self {
        let mut classes = self.classes.clone();
        classes.sort_unstable_by_key(|c| c[0]);
        let mut class_of = vec![0; self.n()];
        for (id, c) in classes.iter().enumerate() {
            for &v in c {
                class_of[v] = id;
            }
        }
        Self { class_of, classes }
    }

    /// Equality as set partitions, ignoring class order.
    pub fn same_blocks(&self, other: &Self) -> bool {
        self.n() == other.n()
            && self.len() == other.len()
            && self.is_finer_or_equal(other).unwrap_or(false)
    }

    pub fn is_finer_or_equal(&self, other: &Self) -> Result<bool> {
        check_len(self.n(), other.n())?;
        Ok(self.classes.iter().all(|class| {
            let target = other.class_of[class[0]];
            class.iter().all(|&v| other.class_of[v] == target)
        }))
    }

    /// Lattice join: the finest partition coarser than both inputs.
    pub fn join(&self, other: &Self) -> Result<Self> {
        check_len(self.n(), other.n())?;
        let mut uf = UnionFind::new(self.n());
        for class in self.classes.iter().chain(other.classes.iter()) {
            for &v in &class[1..] {
                uf.union(class[0], v);
            }
        }
        Ok(uf.into_partition())
    }

    fn check_for(&self, g: &EdgeColoredGraph) -> Result<()> {
        if self.n() != g.n() {
            return Err(Error::InconsistentPartition(format!(
                "partition on {} vertices, graph has {}",
                self.n(),
                g.n()
            )));
        }
        Ok(())
    }
}

pub fn is_discrete(p: &OrderedPartition) -> bool {
    p.is_discrete()
}

pub fn is_finer_or_equal(p: &OrderedPartition, q: &OrderedPartition) -> Result<bool> {
    p.is_finer_or_equal(q)
}

pub fn partition_join(p: &OrderedPartition, q: &OrderedPartition) -> Result<OrderedPartition> {
    p.join(q)
}

/// Reassigns class ids in an order that depends only on the isomorphism
/// type of `(g, p)`.
///
/// Each class gets a fingerprint that starts from its size and the
/// multiset of its members' arc-color profiles, and is then iterated
/// against the fingerprints of the classes its members see. Classes are
/// sorted by fingerprint. Classes that a symmetry of `(g, p)` swaps cannot
/// be told apart by any such invariant; those ties fall back to the
/// smallest member, and only there is the order label-dependent.
pub fn normalize_colors(g: &EdgeColoredGraph, p: &OrderedPartition) -> Result<OrderedPartition> {
    p.check_for(g)?;
    let sigs = class_fingerprints(g, p);
    let mut order: Vec<ClassId> = (0..p.len()).collect();
    order.sort_by_key(|&c| (sigs[c], p.classes[c][0]));
    let classes = order.iter().map(|&c| p.classes[c].clone()).collect();
    OrderedPartition::from_classes(p.n(), classes)
}

/// Label-independent fingerprints of the classes of `p` over `g`.
pub fn class_fingerprints(g: &EdgeColoredGraph, p: &OrderedPartition) -> Vec<u64> {
    let n = g.n();
    let mut sig: Vec<u64> = p
        .classes
        .iter()
        .map(|class| {
            let members = class.iter().fold(0u64, |acc, &v| {
                let profile = (0..n).filter(|&w| w != v).fold(0u64, |s, w| {
                    s.wrapping_add(mix(((g.color(v, w) as u64) << 32) | g.color(w, v) as u64))
                });
                acc.wrapping_add(mix(combine(g.vertex_color(v) as u64, profile)))
            });
            hash_seq(class.len() as u64, [members])
        })
        .collect();
    let distinct = |s: &[u64]| {
        let mut d = s.to_vec();
        d.sort_unstable();
        d.dedup();
        d.len()
    };
    let mut count = distinct(&sig);
    loop {
        let next: Vec<u64> = p
            .classes
            .iter()
            .enumerate()
            .map(|(id, class)| {
                let members = class.iter().fold(0u64, |acc, &v| {
                    let profile = (0..n).filter(|&w| w != v).fold(0u64, |s, w| {
                        let e = hash_seq(
                            g.color(v, w) as u64,
                            [g.color(w, v) as u64, sig[p.class_of[w]]],
                        );
                        s.wrapping_add(e)
                    });
                    acc.wrapping_add(mix(profile))
                });
                combine(sig[id], members)
            })
            .collect();
        let next_count = distinct(&next);
        sig = next;
        if next_count == count {
            break;
        }
        count = next_count;
    }
    sig
}

pub fn apply_permutation(g: &EdgeColoredGraph, perm: &Permutation) -> Result<EdgeColoredGraph> {
    check_len(g.n(), perm.len())?;
    let n = g.n();
    let mut colors = vec![0; n * n];
    for u in 0..n {
        let pu = perm.apply(u);
        for v in 0..n {
            colors[pu * n + perm.apply(v)] = g.color(u, v);
        }
    }
    Ok(EdgeColoredGraph {
        n,
        colors,
        color_count: g.color_count(),
    })
}

/// True iff `perm` maps `g1` onto `g2`: `g2[perm(u)][perm(v)] == g1[u][v]`.
pub fn is_isomorphism(g1: &EdgeColoredGraph, g2: &EdgeColoredGraph, perm: &Permutation) -> bool {
    let n = g1.n();
    if g2.n() != n || perm.len() != n {
        return false;
    }
    (0..n).all(|u| {
        let pu = perm.apply(u);
        (0..n).all(|v| g2.color(pu, perm.apply(v)) == g1.color(u, v))
    })
}

pub fn is_automorphism(g: &EdgeColoredGraph, perm: &Permutation) -> Result<bool> {
    check_len(g.n(), perm.len())?;
    Ok(is_isomorphism(g, g, perm))
}

/// Disjoint-set forest with path halving and union by size.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }

    /// Classes ordered by their smallest member.
    pub(crate) fn into_partition(mut self) -> OrderedPartition {
        let n = self.parent.len();
        let mut id_of_root = vec![usize::MAX; n];
        let mut class_of = vec![0; n];
        let mut count = 0;
        for (v, slot) in class_of.iter_mut().enumerate() {
            let r = self.find(v);
            if id_of_root[r] == usize::MAX {
                id_of_root[r] = count;
                count += 1;
            }
            *slot = id_of_root[r];
        }
        OrderedPartition::from_class_of_unchecked(class_of, count)
    }
}
