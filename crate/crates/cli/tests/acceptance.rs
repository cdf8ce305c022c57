//! Acceptance criteria, one line each. Runs the real binary wherever a
//! criterion names a command, and the library everywhere else.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use orbitfix_core::assembly::{cyclic_windows, is_assembled, Window, WindowSet};
use orbitfix_core::formats::write_cdg;
use orbitfix_core::oracle::{brute_orbits, closure_orbits, OracleLimit};
use orbitfix_core::{
    apply_permutation, compute_orbits, families, is_automorphism, is_isomorphism, iso_test,
    partition_join, EdgeColoredGraph, EngineConfig, IsoVerdict, OrderedPartition, Permutation,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const REPEATS: usize = 3;

/// Raw stdout of the repeated runs of one command, for the determinism check.
type Transcript = (String, Vec<String>);

struct Run {
    code: i32,
    stdout: String,
    elapsed: Duration,
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_orbitfix")
}

fn run_once(args: &[String]) -> Run {
    let start = Instant::now();
    let out = Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 output"),
        elapsed: start.elapsed(),
    }
}

/// Runs every job `REPEATS` times across threads; results keep job order.
fn run_all(jobs: &[Vec<String>]) -> Vec<Vec<Run>> {
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Vec<Run>>> = jobs.iter().map(|_| Mutex::new(Vec::new())).collect();
    let threads = std::thread::available_parallelism().map_or(4, |n| n.get());
    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let runs = (0..REPEATS).map(|_| run_once(&jobs[i])).collect();
                *slots[i].lock().unwrap() = runs;
            });
        }
    });
    slots.into_iter().map(|m| m.into_inner().unwrap()).collect()
}

fn args(parts: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = parts.iter().map(|s| s.to_string()).collect();
    v.push("--json".into());
    v
}

fn write_graph(dir: &Path, name: &str, g: &EdgeColoredGraph) -> String {
    let path = dir.join(name);
    std::fs::write(&path, write_cdg(g)).unwrap();
    path.to_string_lossy().into_owned()
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn parse(run: &Run) -> Value {
    serde_json::from_str(&run.stdout).unwrap_or_else(|e| panic!("bad JSON {e}: {}", run.stdout))
}

fn classes(v: &Value) -> Vec<Vec<usize>> {
    serde_json::from_value(v.clone()).expect("class list")
}

fn partition(n: usize, v: &Value) -> OrderedPartition {
    OrderedPartition::from_classes(n, classes(v)).expect("valid partition")
}

fn generators(v: &Value) -> Vec<Permutation> {
    classes(v)
        .into_iter()
        .map(|img| Permutation::new(img).expect("image array"))
        .collect()
}

fn random_simple(rng: &mut impl Rng, n: usize, p: f64) -> EdgeColoredGraph {
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

fn random_perm(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut img: Vec<usize> = (0..n).collect();
    img.shuffle(rng);
    Permutation::new(img).unwrap()
}

fn ceil_log2(n: usize) -> u64 {
    (usize::BITS - (n.max(1) - 1).leading_zeros()) as u64
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Everything later criteria reuse.
#[derive(Default)]
struct Shared {
    transcripts: Vec<Transcript>,
    /// (graph, reported partition, generators) for every engine run.
    engine_runs: Vec<(EdgeColoredGraph, OrderedPartition, Vec<Permutation>)>,
    /// (n, verify_tree_depth_max) over the orbit corpus.
    depths: Vec<(usize, u64)>,
    /// Isomorphism witnesses that failed entrywise checking.
    bad_witnesses: usize,
}

fn keep(shared: &mut Shared, label: String, runs: &[Run]) {
    shared
        .transcripts
        .push((label, runs.iter().map(|r| r.stdout.clone()).collect()));
}

fn orbit_corpus() -> Vec<EdgeColoredGraph> {
    let mut graphs: Vec<EdgeColoredGraph> = (0..1024).map(|m| families::from_mask(5, m)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0c0f_fee1);
    for n in 6..=8 {
        for _ in 0..500 {
            let p = *[0.2, 0.5, 0.8].choose(&mut rng).unwrap();
            graphs.push(random_simple(&mut rng, n, p));
        }
    }
    graphs
}

fn oracle_equivalence(shared: &mut Shared, dir: &Path) -> Result<String, String> {
    let start = Instant::now();
    let graphs = orbit_corpus();
    let jobs: Vec<Vec<String>> = graphs
        .iter()
        .enumerate()
        .map(|(i, g)| args(&["orbits", &write_graph(dir, &format!("c{i}.cdg"), g)]))
        .collect();
    let results = run_all(&jobs);
    let (mut finer, mut certified, mut exact_when_certified) = (0, 0, 0);
    for (i, (g, runs)) in graphs.iter().zip(&results).enumerate() {
        ensure(runs[0].code == 0, || {
            format!("graph {i}: exit {}", runs[0].code)
        })?;
        let v = parse(&runs[0]);
        let reported = partition(g.n(), &v["orbits"]);
        let truth = brute_orbits(g, OracleLimit::default()).map_err(|e| e.to_string())?;
        if reported.is_finer_or_equal(&truth).unwrap() {
            finer += 1;
        }
        if v["status"] == "certified" {
            certified += 1;
            if reported.same_blocks(&truth) {
                exact_when_certified += 1;
            }
        }
        shared
            .depths
            .push((g.n(), v["stats"]["verify_tree_depth_max"].as_u64().unwrap()));
        shared
            .engine_runs
            .push((g.clone(), reported, generators(&v["generators"])));
        keep(shared, format!("orbits corpus #{i}"), runs);
    }
    let total = graphs.len();
    let elapsed = start.elapsed();
    let rate = certified as f64 / total as f64;
    let detail = format!(
        "{total} graphs, finer-or-equal {finer}/{total}, certified {certified} ({:.2}%), \
         exact when certified {exact_when_certified}/{certified}, {:.1}s",
        rate * 100.0,
        elapsed.as_secs_f64()
    );
    ensure(finer == total, || detail.clone())?;
    ensure(exact_when_certified == certified, || detail.clone())?;
    ensure(rate >= 0.99, || detail.clone())?;
    ensure(elapsed < Duration::from_secs(120), || detail.clone())?;
    Ok(detail)
}

fn join_matches_closure() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e44a);
    let mut agree = 0;
    for _ in 0..500 {
        let n = rng.gen_range(5..=8);
        let mut gens = || -> Vec<Permutation> {
            let k = rng.gen_range(1..=3);
            (0..k).map(|_| random_perm(&mut rng, n)).collect()
        };
        let (a, b) = (gens(), gens());
        let joined = partition_join(
            &closure_orbits(n, &a).unwrap(),
            &closure_orbits(n, &b).unwrap(),
        )
        .unwrap();
        let both: Vec<Permutation> = a.into_iter().chain(b).collect();
        if joined.same_blocks(&closure_orbits(n, &both).unwrap()) {
            agree += 1;
        }
    }
    let detail = format!("join of orbit partitions equals orbits of the union {agree}/500");
    ensure(agree == 500, || detail.clone())?;
    Ok(detail)
}

fn isomorphism(shared: &mut Shared) -> Result<String, String> {
    let cfg = EngineConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x150);
    let mut found = 0;
    for _ in 0..200 {
        let n = rng.gen_range(6..=16);
        let p = *[0.2, 0.5, 0.8].choose(&mut rng).unwrap();
        let g = random_simple(&mut rng, n, p);
        let h = apply_permutation(&g, &random_perm(&mut rng, n)).unwrap();
        match iso_test(&g, &h, &cfg).map_err(|e| e.to_string())?.verdict {
            IsoVerdict::Isomorphic(w) if is_isomorphism(&g, &h, &w) => found += 1,
            IsoVerdict::Isomorphic(_) => shared.bad_witnesses += 1,
            _ => {}
        }
        let sys = compute_orbits(&g, &cfg).map_err(|e| e.to_string())?;
        shared.engine_runs.push((g, sys.partition, sys.generators));
    }
    let (mut rejected, mut false_positive) = (0, 0);
    let mut pairs = 0;
    while pairs < 200 {
        let n = rng.gen_range(6..=16);
        let g = random_simple(&mut rng, n, 0.5);
        let h = if pairs % 2 == 0 {
            let m = n + rng.gen_range(1..=3);
            random_simple(&mut rng, m, 0.5)
        } else {
            random_simple(&mut rng, n, 0.5)
        };
        let degrees = |x: &EdgeColoredGraph| {
            let mut d: Vec<usize> = (0..x.n())
                .map(|u| x.row(u).iter().filter(|&&c| c == 1).count())
                .collect();
            d.sort_unstable();
            d
        };
        if degrees(&g) == degrees(&h) {
            continue;
        }
        pairs += 1;
        match iso_test(&g, &h, &cfg).map_err(|e| e.to_string())?.verdict {
            IsoVerdict::NonIsomorphic => rejected += 1,
            IsoVerdict::Isomorphic(_) => false_positive += 1,
            IsoVerdict::Inconclusive => {}
        }
    }
    let detail = format!(
        "relabelings verified {found}/200, non-isomorphic pairs rejected {rejected}/200, \
         false positives {false_positive}"
    );
    ensure(
        found == 200 && rejected == 200 && false_positive == 0,
        || detail.clone(),
    )?;
    Ok(detail)
}

fn soundness(shared: &Shared) -> Result<String, String> {
    let mut gens = 0;
    for (g, reported, generators) in &shared.engine_runs {
        for p in generators {
            gens += 1;
            ensure(is_automorphism(g, p).unwrap_or(false), || {
                format!("generator {p} is not an automorphism")
            })?;
        }
        let closure = closure_orbits(g.n(), generators).map_err(|e| e.to_string())?;
        ensure(closure.same_blocks(reported), || {
            format!(
                "closure of generators differs from reported orbits on n={}",
                g.n()
            )
        })?;
    }
    ensure(shared.bad_witnesses == 0, || {
        format!("{} isomorphism witnesses failed", shared.bad_witnesses)
    })?;
    Ok(format!(
        "{gens} generators over {} runs are automorphisms and close to the reported orbits",
        shared.engine_runs.len()
    ))
}

fn hard_instance(shared: &mut Shared) -> Result<String, String> {
    let (rook, shrikhande) = (data("rook4x4.g6"), data("shrikhande.g6"));
    let jobs = vec![
        args(&["iso", &rook, &shrikhande, "--k", "2"]),
        args(&["iso", &rook, &shrikhande, "--k", "1"]),
    ];
    let results = run_all(&jobs);
    let k2 = parse(&results[0][0]);
    let k1 = parse(&results[1][0]);
    let slowest = results[0].iter().map(|r| r.elapsed).max().unwrap();
    keep(shared, "iso rook/shrikhande k=2".into(), &results[0]);
    keep(shared, "iso rook/shrikhande k=1".into(), &results[1]);
    let detail = format!(
        "k=2 {} (exit {}, {:.2}s), k=1 {}",
        k2["status"].as_str().unwrap_or("?"),
        results[0][0].code,
        slowest.as_secs_f64(),
        k1["status"].as_str().unwrap_or("?")
    );
    ensure(
        k2["status"] == "non_isomorphic" && results[0][0].code == 1,
        || detail.clone(),
    )?;
    ensure(slowest < Duration::from_secs(10), || detail.clone())?;
    ensure(
        k1["status"] != "isomorphic" && k1["isomorphism"].is_null(),
        || detail.clone(),
    )?;
    Ok(detail)
}

fn complexity(shared: &mut Shared, dir: &Path) -> Result<String, String> {
    let sizes = [8usize, 16, 32, 64];
    let start = Instant::now();
    let jobs: Vec<Vec<String>> = sizes
        .iter()
        .map(|&n| {
            args(&[
                "orbits",
                &write_graph(dir, &format!("k{n}.cdg"), &families::complete(n)),
            ])
        })
        .collect();
    // One pass, timed on its own, then the repeats for determinism.
    let first: Vec<Run> = jobs.iter().map(|j| run_once(j)).collect();
    let elapsed = start.elapsed();
    let results = run_all(&jobs);
    let mut ratios = Vec::new();
    let mut parts = Vec::new();
    for ((&n, run), repeats) in sizes.iter().zip(&first).zip(&results) {
        let v = parse(run);
        ensure(v["orbits"].as_array().map(|a| a.len()) == Some(1), || {
            format!("K{n} not a single orbit")
        })?;
        let calls = v["stats"]["refine_calls"].as_u64().unwrap();
        ensure(calls <= 4 * (n * n) as u64, || {
            format!("K{n}: {calls} refine calls exceed 4n^2 = {}", 4 * n * n)
        })?;
        ratios.push(calls as f64 / (n * n) as f64);
        parts.push(format!("K{n} {calls}"));
        let mut all: Vec<&Run> = vec![run];
        all.extend(repeats.iter());
        shared.transcripts.push((
            format!("orbits K{n}"),
            all.iter().map(|r| r.stdout.clone()).collect(),
        ));
    }
    let drifting = ratios
        .iter()
        .enumerate()
        .any(|(i, &a)| ratios[i + 1..].iter().any(|&b| b > 2.0 * a));
    let detail = format!(
        "refine calls {}, ratios {:?}, {:.1}s",
        parts.join(", "),
        ratios
            .iter()
            .map(|r| (r * 1000.0).round() / 1000.0)
            .collect::<Vec<_>>(),
        elapsed.as_secs_f64()
    );
    ensure(!drifting, || detail.clone())?;
    ensure(elapsed < Duration::from_secs(30), || detail.clone())?;
    Ok(detail)
}

fn depth(shared: &Shared) -> Result<String, String> {
    let over: Vec<&(usize, u64)> = shared
        .depths
        .iter()
        .filter(|&&(n, d)| d > ceil_log2(n) + 1)
        .collect();
    let deepest = shared.depths.iter().map(|&(_, d)| d).max().unwrap_or(0);
    let detail = format!(
        "{} instances, deepest verification tree {deepest}, violations {}",
        shared.depths.len(),
        over.len()
    );
    ensure(!shared.depths.is_empty() && over.is_empty(), || {
        detail.clone()
    })?;
    Ok(detail)
}

fn assembly(shared: &mut Shared) -> Result<String, String> {
    let jobs = vec![
        args(&["assembly", &data("assembled.ws")]),
        args(&["assembly", &data("not_assembled.ws")]),
    ];
    let results = run_all(&jobs);
    let yes = parse(&results[0][0]);
    let no = parse(&results[1][0]);
    keep(shared, "assembly assembled".into(), &results[0]);
    keep(shared, "assembly not assembled".into(), &results[1]);
    ensure(
        yes["status"] == "assembled" && yes["witness"] == serde_json::json!([[1, 2, 3], [4, 5, 6]]),
        || format!("assembled example gave {yes}"),
    )?;
    ensure(no["status"] == "not_assembled", || {
        format!("non-assembled example gave {no}")
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(0xa55e);
    let mut ok = 0;
    for trial in 0..200 {
        let k = 1 + trial % 3;
        let pool: Vec<usize> = (0..3 * (k + 1)).collect();
        let m = Window::new(
            pool.choose_multiple(&mut rng, k + 1).copied().collect(),
            pool.choose_multiple(&mut rng, k + 1).copied().collect(),
        )
        .unwrap();
        let ws = WindowSet::new(k, cyclic_windows(&m).unwrap()).unwrap();
        let out = is_assembled(&ws);
        if out.assembled
            && out
                .witness
                .is_some_and(|w| cyclic_windows(&w).unwrap() == *ws.elements())
        {
            ok += 1;
        }
    }
    let detail = format!("both displayed cases match, round-trip {ok}/200");
    ensure(ok == 200, || detail.clone())?;
    Ok(detail)
}

fn determinism(shared: &Shared) -> Result<String, String> {
    let differing: Vec<&str> = shared
        .transcripts
        .iter()
        .filter(|(_, outs)| outs.len() < REPEATS || outs.iter().any(|o| o != &outs[0]))
        .map(|(label, _)| label.as_str())
        .collect();
    let detail = format!(
        "{} commands run {REPEATS}+ times, {} with differing output",
        shared.transcripts.len(),
        differing.len()
    );
    ensure(differing.is_empty(), || {
        format!("{detail}: {:?}", &differing[..differing.len().min(5)])
    })?;
    Ok(detail)
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let mut shared = Shared::default();
    let mut lines: Vec<(u8, String)> = Vec::new();
    let mut report = |id: u8, name: &str, result: std::thread::Result<Result<String, String>>| {
        let (pass, detail) = match result {
            Ok(Ok(d)) => (true, d),
            Ok(Err(d)) => (false, d),
            Err(panic) => (
                false,
                panic
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panicked".into()),
            ),
        };
        let mark = if pass { "PASS" } else { "FAIL" };
        lines.push((id, format!("[{mark}] {id}. {name}: {detail}")));
    };
    macro_rules! criterion {
        ($id:expr, $name:expr, $body:expr) => {
            report($id, $name, catch_unwind(AssertUnwindSafe(|| $body)))
        };
    }
    criterion!(
        1,
        "oracle orbit equivalence",
        oracle_equivalence(&mut shared, dir.path())
    );
    criterion!(2, "join of generated orbits", join_matches_closure());
    criterion!(4, "isomorphism on relabelings", isomorphism(&mut shared));
    criterion!(3, "generator soundness", soundness(&shared));
    criterion!(5, "rook's graph vs Shrikhande", hard_instance(&mut shared));
    criterion!(
        6,
        "refine calls on complete graphs",
        complexity(&mut shared, dir.path())
    );
    criterion!(7, "verification tree depth", depth(&shared));
    criterion!(8, "window assembly", assembly(&mut shared));
    criterion!(9, "deterministic JSON", determinism(&shared));
    lines.sort_by_key(|(id, _)| *id);
    let failed = lines
        .iter()
        .filter(|(_, l)| l.starts_with("[FAIL]"))
        .count();
    for (_, line) in &lines {
        println!("{line}");
    }
    println!("acceptance: {failed} of {} criteria failed", lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
