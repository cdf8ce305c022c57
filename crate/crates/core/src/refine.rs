//! Weisfeiler-Leman stabilization on vertices, pairs, and (behind the `k3`
//! feature) triples, plus vertex individualization.
//!
//! Every round replaces each cell color by the pair (old color, multiset
//! fingerprint of what the cell sees) and renumbers colors by sorting
//! those pairs. Since the old color leads the sort key, class order only
//! ever refines, and because nothing in the key depends on vertex labels
//! the resulting order is canonical.

use crate::error::{Error, Result};
use crate::fingerprint::{combine, hash_seq, mix};
use crate::model::{ColorId, EdgeColoredGraph, OrderedPartition, VertexId};

/// Refinement dimension: the `k` of `k`-dimensional Weisfeiler-Leman.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dim {
    /// Color refinement on vertices.
    One,
    /// Refinement on ordered pairs.
    Two,
    /// Refinement on ordered triples.
    Three,
}

impl Dim {
    pub fn from_k(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Dim::One),
            2 => Ok(Dim::Two),
            3 if cfg!(feature = "k3") => Ok(Dim::Three),
            other => Err(Error::UnsupportedDimension(other)),
        }
    }

    pub fn k(self) -> u8 {
        match self {
            Dim::One => 1,
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RefinementConfig {
    pub dim: Dim,
    /// Round cap; `None` uses the dimension's natural bound.
    pub max_rounds: Option<usize>,
}

impl Default for RefinementConfig {
    fn default() -> Self {
        Self {
            dim: Dim::Two,
            max_rounds: None,
        }
    }
}

impl RefinementConfig {
    pub fn new(k: u8) -> Result<Self> {
        Ok(Self {
            dim: Dim::from_k(k)?,
            max_rounds: None,
        })
    }

    pub fn with_max_rounds(mut self, rounds: usize) -> Self {
        self.max_rounds = Some(rounds.max(1));
        self
    }

    fn round_cap(&self, g: &EdgeColoredGraph) -> usize {
        let cc = g.color_count().max(1) as usize;
        let n = g.n().max(1);
        self.max_rounds.unwrap_or(
            match self.dim {
                Dim::One => n * cc,
                Dim::Two => n * n * cc,
                Dim::Three => n * n * n * cc,
            } + 1,
        )
    }
}

/// Output of [`refine`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableColoring {
    /// Vertex classes in canonical order.
    pub vertex_partition: OrderedPartition,
    /// Row-major `n x n` pair colors, for dimension two and up.
    pub pair_coloring: Option<Vec<ColorId>>,
    /// Refinement rounds run, counting the final round that split nothing.
    pub rounds_used: usize,
    /// Per vertex class, the fingerprint of the refinement history that
    /// produced the class color. Same indexing as `vertex_partition`.
    pub signatures: Vec<u64>,
    /// Fingerprint of the whole refinement run: the sorted color
    /// histograms of every round. Equal for isomorphic inputs.
    pub trace: u64,
}

impl StableColoring {
    pub fn is_discrete(&self) -> bool {
        self.vertex_partition.is_discrete()
    }

    /// Necessary condition for an isomorphism between the two colored
    /// inputs that respects class order.
    pub fn compatible(&self, other: &StableColoring) -> bool {
        self.trace == other.trace
            && self.signatures == other.signatures
            && self.vertex_partition.len() == other.vertex_partition.len()
            && self
                .vertex_partition
                .classes()
                .iter()
                .zip(other.vertex_partition.classes())
                .all(|(a, b)| a.len() == b.len())
    }

    /// Vertices listed class by class in canonical order.
    pub fn vertex_order(&self) -> Vec<VertexId> {
        self.vertex_partition.classes().concat()
    }
}

/// Runs the stabilization selected by `cfg`.
pub fn refine(g: &EdgeColoredGraph, cfg: &RefinementConfig) -> Result<StableColoring> {
    let cap = cfg.round_cap(g);
    match cfg.dim {
        Dim::One => refine_vertices(g, cap),
        Dim::Two => refine_pairs(g, cap),
        Dim::Three => refine_triples(g, cap),
    }
}

/// Gives `v` a color no other entry uses; the fresh color is the current
/// palette size.
pub fn individualize(g: &EdgeColoredGraph, v: VertexId) -> Result<EdgeColoredGraph> {
    g.check_vertex(v)?;
    let mut out = g.clone();
    out.set_vertex_color(v, g.color_count());
    Ok(out)
}

/// Individualizes `fixes` in order, each with its own fresh color, then
/// refines.
pub fn refine_with_fixes(
    g: &EdgeColoredGraph,
    fixes: &[VertexId],
    cfg: &RefinementConfig,
) -> Result<StableColoring> {
    refine(&individualize_all(g, fixes)?, cfg)
}

pub(crate) fn individualize_all(
    g: &EdgeColoredGraph,
    fixes: &[VertexId],
) -> Result<EdgeColoredGraph> {
    let mut seen = vec![false; g.n()];
    let mut out = g.clone();
    let base = g.color_count();
    for (i, &v) in fixes.iter().enumerate() {
        g.check_vertex(v)?;
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::DuplicateFix(v));
        }
        out.set_vertex_color(v, base + i as ColorId);
    }
    Ok(out)
}

/// Cell colors with per-color history fingerprints.
struct Cells {
    color: Vec<u32>,
    fp: Vec<u64>,
    classes: usize,
    trace: u64,
}

impl Cells {
    fn initial(keys: Vec<u64>, seed: u64) -> Self {
        let mut cells = Cells {
            color: vec![0; keys.len()],
            fp: vec![0],
            classes: 1,
            trace: mix(seed),
        };
        let pairs: Vec<(u32, u64)> = keys.into_iter().map(|k| (0, k)).collect();
        cells.advance(&pairs);
        cells
    }

    /// Renumbers by sorted `(old color, key)`; returns whether any class split.
    fn advance(&mut self, keys: &[(u32, u64)]) -> bool {
        let mut idx: Vec<u32> = (0..keys.len() as u32).collect();
        idx.sort_unstable_by_key(|&i| keys[i as usize]);
        let mut fp = Vec::new();
        let mut round = 0u64;
        let mut prev: Option<(u32, u64)> = None;
        let mut run = 0u64;
        for &i in &idx {
            let key = keys[i as usize];
            if prev != Some(key) {
                if let Some(p) = prev {
                    round = hash_seq(round, [p.0 as u64, p.1, run]);
                }
                fp.push(combine(self.fp[key.0 as usize], key.1));
                prev = Some(key);
                run = 0;
            }
            run += 1;
            self.color[i as usize] = (fp.len() - 1) as u32;
        }
        if let Some(p) = prev {
            round = hash_seq(round, [p.0 as u64, p.1, run]);
        }
        let split = fp.len() != self.classes;
        self.classes = fp.len();
        self.fp = fp;
        self.trace = combine(self.trace, round);
        split
    }
}

fn finish(
    cells: &Cells,
    diagonal: impl Fn(VertexId) -> usize,
    n: usize,
    pair_coloring: Option<Vec<ColorId>>,
    rounds_used: usize,
) -> StableColoring {
    let labels: Vec<u32> = (0..n).map(|v| cells.color[diagonal(v)]).collect();
    let vertex_partition = OrderedPartition::from_labels(&labels);
    let signatures = vertex_partition
        .classes()
        .iter()
        .map(|c| cells.fp[labels[c[0]] as usize])
        .collect();
    StableColoring {
        vertex_partition,
        pair_coloring,
        rounds_used,
        signatures,
        trace: cells.trace,
    }
}

fn refine_vertices(g: &EdgeColoredGraph, cap: usize) -> Result<StableColoring> {
    let n = g.n();
    let mut cells = Cells::initial(
        (0..n).map(|v| g.vertex_color(v) as u64).collect(),
        hash_seq(1, [n as u64]),
    );
    // arc profile of each ordered pair, fixed across rounds
    let arc: Vec<u64> = (0..n * n)
        .map(|i| {
            let (v, w) = (i / n, i % n);
            mix(((g.color(v, w) as u64) << 32) | g.color(w, v) as u64)
        })
        .collect();
    let mut keys = vec![(0u32, 0u64); n];
    let mut rounds = 0;
    loop {
        rounds += 1;
        if rounds > cap {
            return Err(Error::RoundCapExceeded(cap));
        }
        for v in 0..n {
            let mut s = 0u64;
            for w in 0..n {
                if w != v {
                    s = s.wrapping_add(mix(arc[v * n + w] ^ cells.color[w] as u64));
                }
            }
            keys[v] = (cells.color[v], s);
        }
        if !cells.advance(&keys) {
            break;
        }
    }
    Ok(finish(&cells, |v| v, n, None, rounds))
}

fn refine_pairs(g: &EdgeColoredGraph, cap: usize) -> Result<StableColoring> {
    let n = g.n();
    let initial = (0..n * n)
        .map(|i| {
            let (u, v) = (i / n, i % n);
            hash_seq(
                g.color(u, v) as u64,
                [g.color(v, u) as u64, (u == v) as u64],
            )
        })
        .collect();
    let mut cells = Cells::initial(initial, hash_seq(2, [n as u64]));
    let mut keys = vec![(0u32, 0u64); n * n];
    let mut transposed = vec![0u32; n * n];
    let mut rounds = 0;
    loop {
        rounds += 1;
        if rounds > cap {
            return Err(Error::RoundCapExceeded(cap));
        }
        let c = &cells.color;
        for u in 0..n {
            for v in 0..n {
                transposed[v * n + u] = c[u * n + v];
            }
        }
        for u in 0..n {
            let row = &c[u * n..(u + 1) * n];
            for v in 0..n {
                let col = &transposed[v * n..(v + 1) * n];
                let mut s = 0u64;
                for (&a, &b) in row.iter().zip(col) {
                    s = s.wrapping_add(mix(((a as u64) << 32) | b as u64));
                }
                keys[u * n + v] = (c[u * n + v], s);
            }
        }
        if !cells.advance(&keys) {
            break;
        }
    }
    let pairs = cells.color.clone();
    Ok(finish(&cells, |v| v * n + v, n, Some(pairs), rounds))
}

#[cfg(feature = "k3")]
fn refine_triples(g: &EdgeColoredGraph, cap: usize) -> Result<StableColoring> {
    let n = g.n();
    let at = |u: usize, v: usize, x: usize| (u * n + v) * n + x;
    let initial = (0..n * n * n)
        .map(|i| {
            let t = [i / (n * n), (i / n) % n, i % n];
            let mut items = Vec::with_capacity(12);
            for &a in &t {
                for &b in &t {
                    items.push(g.color(a, b) as u64);
                }
            }
            items.push((t[0] == t[1]) as u64);
            items.push((t[0] == t[2]) as u64);
            items.push((t[1] == t[2]) as u64);
            hash_seq(3, items)
        })
        .collect();
    let mut cells = Cells::initial(initial, hash_seq(3, [n as u64]));
    let mut keys = vec![(0u32, 0u64); n * n * n];
    let mut rounds = 0;
    loop {
        rounds += 1;
        if rounds > cap {
            return Err(Error::RoundCapExceeded(cap));
        }
        let c = &cells.color;
        for u in 0..n {
            for v in 0..n {
                for x in 0..n {
                    let mut s = 0u64;
                    for w in 0..n {
                        let a = c[at(w, v, x)] as u64;
                        let b = c[at(u, w, x)] as u64;
                        let d = c[at(u, v, w)] as u64;
                        s = s.wrapping_add(mix(combine(combine(a, b), d)));
                    }
                    keys[at(u, v, x)] = (c[at(u, v, x)], s);
                }
            }
        }
        if !cells.advance(&keys) {
            break;
        }
    }
    let pair_labels: Vec<u32> = (0..n * n)
        .map(|i| cells.color[at(i / n, i % n, i % n)])
        .collect();
    let pairs = OrderedPartition::from_labels(&pair_labels)
        .class_of_slice()
        .iter()
        .map(|&c| c as ColorId)
        .collect();
    Ok(finish(&cells, |v| at(v, v, v), n, Some(pairs), rounds))
}

#[cfg(not(feature = "k3"))]
fn refine_triples(_g: &EdgeColoredGraph, _cap: usize) -> Result<StableColoring> {
    Err(Error::UnsupportedDimension(3))
}
