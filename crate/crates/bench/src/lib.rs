//! Shared inputs for the benchmarks in `benches/`.

use orbitfix_core::{families, EdgeColoredGraph};

/// Named graphs: complete graphs of growing size and the strongly regular pair.
pub fn graphs() -> Vec<(String, EdgeColoredGraph)> {
    let mut out: Vec<(String, EdgeColoredGraph)> = [8, 16, 32]
        .iter()
        .map(|&n| (format!("K{n}"), families::complete(n)))
        .collect();
    out.push(("petersen".into(), families::petersen()));
    out.push(("rook4x4".into(), families::rook_4x4()));
    out.push(("shrikhande".into(), families::shrikhande()));
    out
}
