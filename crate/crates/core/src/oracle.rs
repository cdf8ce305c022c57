//! Brute-force ground truth for small graphs.
//!
//! Everything here enumerates all `n!` vertex permutations in lexicographic
//! order. Nothing is shared with the engine beyond the graph type.

use crate::error::{Error, Result};
use crate::model::{EdgeColoredGraph, OrderedPartition, Permutation, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimit {
    pub max_n: usize,
}

impl Default for OracleLimit {
    fn default() -> Self {
        Self { max_n: 8 }
    }
}

impl OracleLimit {
    pub fn new(max_n: usize) -> Self {
        Self { max_n }
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.max_n {
            Err(Error::OracleLimit {
                n,
                max_n: self.max_n,
            })
        } else {
            Ok(())
        }
    }
}

/// Advances `p` to its lexicographic successor; false after the last one.
fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn maps_onto(g1: &EdgeColoredGraph, g2: &EdgeColoredGraph, image: &[usize]) -> bool {
    let n = g1.n();
    (0..n).all(|u| (0..n).all(|v| g2.color(image[u], image[v]) == g1.color(u, v)))
}

fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize]) -> bool) {
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        if !f(&p) {
            return;
        }
        if !next_permutation(&mut p) {
            return;
        }
    }
}

/// All automorphisms, in lexicographic order of image sequences.
pub fn brute_aut(g: &EdgeColoredGraph, limit: OracleLimit) -> Result<Vec<Permutation>> {
    limit.check(g.n())?;
    let mut out = Vec::new();
    for_each_permutation(g.n(), |p| {
        if maps_onto(g, g, p) {
            out.push(Permutation::new(p.to_vec()).expect("enumerated permutation"));
        }
        true
    });
    Ok(out)
}

pub fn brute_orbits(g: &EdgeColoredGraph, limit: OracleLimit) -> Result<OrderedPartition> {
    let auts = brute_aut(g, limit)?;
    closure_orbits(g.n(), &auts)
}

/// First permutation in lexicographic order carrying `g1` onto `g2`.
pub fn brute_iso(
    g1: &EdgeColoredGraph,
    g2: &EdgeColoredGraph,
    limit: OracleLimit,
) -> Result<Option<Permutation>> {
    limit.check(g1.n())?;
    if g1.n() != g2.n() {
        return Ok(None);
    }
    let mut found = None;
    for_each_permutation(g1.n(), |p| {
        if maps_onto(g1, g2, p) {
            found = Some(Permutation::new(p.to_vec()).expect("enumerated permutation"));
            false
        } else {
            true
        }
    });
    Ok(found)
}

/// Orbits of `<gens>` by breadth-first search over generator images.
/// Classes are ordered by their smallest member.
pub fn closure_orbits(n: usize, gens: &[Permutation]) -> Result<OrderedPartition> {
    if let Some(g) = gens.iter().find(|g| g.len() != n) {
        return Err(Error::SizeMismatch {
            expected: n,
            found: g.len(),
        });
    }
    let mut seen = vec![false; n];
    let mut classes: Vec<Vec<VertexId>> = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for g in gens {
                let y = g.apply(x);
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                }
            }
        }
        classes.push(orbit);
    }
    OrderedPartition::from_classes(n, classes)
}
