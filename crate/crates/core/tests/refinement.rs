mod common;

use common::{corpus, random_colored, random_perm, random_simple, rng};
use orbitfix_core::oracle::{brute_aut, brute_orbits, OracleLimit};
use orbitfix_core::{
    apply_permutation, refine, refine_with_fixes, Dim, EdgeColoredGraph, Permutation,
    RefinementConfig, StableColoring,
};
use rand::Rng;

fn dims() -> Vec<u8> {
    if cfg!(feature = "k3") {
        vec![1, 2, 3]
    } else {
        vec![1, 2]
    }
}

fn stable(g: &EdgeColoredGraph, k: u8) -> StableColoring {
    refine(g, &RefinementConfig::new(k).unwrap()).unwrap()
}

fn assert_relabeled(a: &StableColoring, b: &StableColoring, perm: &Permutation, n: usize) {
    assert_eq!(a.trace, b.trace);
    assert_eq!(a.signatures, b.signatures);
    assert_eq!(a.vertex_partition.len(), b.vertex_partition.len());
    for (ca, cb) in a
        .vertex_partition
        .classes()
        .iter()
        .zip(b.vertex_partition.classes())
    {
        let mut mapped: Vec<usize> = ca.iter().map(|&v| perm.apply(v)).collect();
        mapped.sort_unstable();
        let mut cb = cb.clone();
        cb.sort_unstable();
        assert_eq!(mapped, cb);
    }
    if let (Some(pa), Some(pb)) = (&a.pair_coloring, &b.pair_coloring) {
        for u in 0..n {
            for v in 0..n {
                assert_eq!(pa[u * n + v], pb[perm.apply(u) * n + perm.apply(v)]);
            }
        }
    }
}

#[test]
fn refinement_is_equivariant() {
    let mut r = rng(10);
    for k in dims() {
        let (cases, max_n) = if k == 3 { (200, 7) } else { (200, 12) };
        for case in 0..cases {
            let n = r.gen_range(2..=max_n);
            let g = if case % 2 == 0 {
                random_simple(&mut r, n, [0.2, 0.5, 0.8][case % 3])
            } else {
                random_colored(&mut r, n, 2)
            };
            let perm = random_perm(&mut r, n);
            let h = apply_permutation(&g, &perm).unwrap();
            assert_relabeled(&stable(&g, k), &stable(&h, k), &perm, n);
        }
    }
}

#[test]
fn higher_dimension_is_finer() {
    let mut graphs: Vec<EdgeColoredGraph> =
        (5..=8).flat_map(|n| corpus(20 + n as u64, n, 40)).collect();
    graphs.push(orbitfix_core::families::disjoint_union(
        &orbitfix_core::families::cycle(3),
        &orbitfix_core::families::cycle(4),
    ));
    for g in &graphs {
        let ks = dims();
        for w in ks.windows(2) {
            let (lo, hi) = (stable(g, w[0]), stable(g, w[1]));
            assert!(hi
                .vertex_partition
                .is_finer_or_equal(&lo.vertex_partition)
                .unwrap());
        }
    }
}

#[test]
fn orbits_sit_inside_stable_classes() {
    for n in 2..=8 {
        for g in corpus(30 + n as u64, n, 60) {
            let orbits = brute_orbits(&g, OracleLimit::default()).unwrap();
            for k in dims() {
                let s = stable(&g, k);
                assert!(orbits.is_finer_or_equal(&s.vertex_partition).unwrap());
                if s.is_discrete() {
                    assert_eq!(brute_aut(&g, OracleLimit::default()).unwrap().len(), 1);
                }
            }
        }
    }
}

#[test]
fn individualizing_refines_and_isolates() {
    let mut r = rng(40);
    let cfg = RefinementConfig::default();
    assert_eq!(cfg.dim, Dim::Two);
    for _ in 0..150 {
        let n = r.gen_range(3..=10);
        let g = random_simple(&mut r, n, 0.5);
        let mut fixes = Vec::new();
        let mut before = refine_with_fixes(&g, &fixes, &cfg).unwrap();
        while fixes.len() < 3 {
            let v = r.gen_range(0..n);
            if fixes.contains(&v) {
                continue;
            }
            fixes.push(v);
            let after = refine_with_fixes(&g, &fixes, &cfg).unwrap();
            assert!(after
                .vertex_partition
                .is_finer_or_equal(&before.vertex_partition)
                .unwrap());
            let class = after.vertex_partition.class_of(v);
            assert_eq!(after.vertex_partition.class(class), &[v]);
            before = after;
        }
    }
}
