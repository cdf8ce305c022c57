//! Named graph families used by tests, benchmarks, and examples.

use crate::model::{EdgeColoredGraph, SIMPLE_NON_EDGE};

fn simple(n: usize, edges: &[(usize, usize)]) -> EdgeColoredGraph {
    EdgeColoredGraph::from_edges(n, edges).expect("family edges are in range")
}

pub fn complete(n: usize) -> EdgeColoredGraph {
    let edges: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    simple(n, &edges)
}

pub fn empty(n: usize) -> EdgeColoredGraph {
    simple(n, &[])
}

pub fn path(n: usize) -> EdgeColoredGraph {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    simple(n, &edges)
}

pub fn cycle(n: usize) -> EdgeColoredGraph {
    let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    simple(n, &edges)
}

/// Outer 5-cycle on 0..5, inner pentagram on 5..10, spokes `i -- i+5`.
pub fn petersen() -> EdgeColoredGraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, i + 5));
    }
    simple(10, &edges)
}

/// Line graph of `K_{4,4}`: cells of a 4x4 board, adjacent when they
/// share a row or a column. Strongly regular with parameters (16, 6, 2, 2).
pub fn rook_4x4() -> EdgeColoredGraph {
    let mut edges = Vec::new();
    for a in 0..16 {
        for b in a + 1..16 {
            if a / 4 == b / 4 || a % 4 == b % 4 {
                edges.push((a, b));
            }
        }
    }
    simple(16, &edges)
}

/// Cayley graph of `Z4 x Z4` with connection set `±(1,0), ±(0,1), ±(1,1)`.
/// Strongly regular with the same parameters as [`rook_4x4`] but not
/// isomorphic to it.
pub fn shrikhande() -> EdgeColoredGraph {
    let id = |x: usize, y: usize| (x % 4) * 4 + (y % 4);
    let mut edges = Vec::new();
    for x in 0..4 {
        for y in 0..4 {
            for (dx, dy) in [(1, 0), (0, 1), (1, 1)] {
                edges.push((id(x, y), id(x + dx, y + dy)));
            }
        }
    }
    simple(16, &edges)
}

/// Disjoint union of two simple graphs; pairs across the parts are non-edges.
pub fn disjoint_union(a: &EdgeColoredGraph, b: &EdgeColoredGraph) -> EdgeColoredGraph {
    let n = a.n() + b.n();
    let mut colors = vec![SIMPLE_NON_EDGE; n * n];
    for u in 0..a.n() {
        for v in 0..a.n() {
            colors[u * n + v] = a.color(u, v);
        }
    }
    for u in 0..b.n() {
        for v in 0..b.n() {
            colors[(a.n() + u) * n + a.n() + v] = b.color(u, v);
        }
    }
    let cc = a
        .color_count()
        .max(b.color_count())
        .max(SIMPLE_NON_EDGE + 1);
    EdgeColoredGraph::new(n, colors, cc).expect("colors within the joint palette")
}

/// Simple graph from an upper-triangle bitmask, bit `i` for the `i`-th pair
/// `(u, v)`, `u < v`, in lexicographic order.
pub fn from_mask(n: usize, mask: u64) -> EdgeColoredGraph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((u, v));
            }
            bit += 1;
        }
    }
    simple(n, &edges)
}
