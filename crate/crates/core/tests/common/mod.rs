#![allow(dead_code)]

use orbitfix_core::{EdgeColoredGraph, Permutation};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_simple(rng: &mut impl Rng, n: usize, p: f64) -> EdgeColoredGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    EdgeColoredGraph::from_edges(n, &edges).unwrap()
}

/// Directed, arc-colored, with a few vertex colors.
pub fn random_colored(rng: &mut impl Rng, n: usize, colors: u32) -> EdgeColoredGraph {
    let mut m = vec![0; n * n];
    for u in 0..n {
        for v in 0..n {
            m[u * n + v] = if u == v {
                rng.gen_range(0..2)
            } else {
                rng.gen_range(2..2 + colors)
            };
        }
    }
    EdgeColoredGraph::new(n, m, 2 + colors).unwrap()
}

pub fn random_perm(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut img: Vec<usize> = (0..n).collect();
    img.shuffle(rng);
    Permutation::new(img).unwrap()
}

/// All set partitions of `[0, n)` as label vectors (restricted growth strings).
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let next = prefix.iter().max().map_or(0, |m| m + 1);
        for label in 0..=next {
            prefix.push(label);
            go(prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

/// The mixed test corpus on `n` vertices: simple graphs over three densities
/// plus small colored digraphs.
pub fn corpus(seed: u64, n: usize, count: usize) -> Vec<EdgeColoredGraph> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| match i % 4 {
            3 => random_colored(&mut r, n, 2),
            d => random_simple(&mut r, n, [0.2, 0.5, 0.8][d]),
        })
        .collect()
}
