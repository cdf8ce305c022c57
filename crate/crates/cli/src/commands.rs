use std::path::Path;
use std::time::Instant;

use orbitfix_core::assembly::{is_assembled, project_to_vertices, unordered_projection};
use orbitfix_core::formats::{parse_graph, parse_window_set, InputDocument};
use orbitfix_core::oracle::{brute_aut, brute_orbits, OracleLimit};
use orbitfix_core::{
    compute_orbits, iso_test, refine, EdgeColoredGraph, EngineConfig, Error, IsoVerdict,
    RefinementConfig, Status,
};
use serde_json::{json, Value};

use crate::exit;
use crate::report::{images, sorted_classes, Report};
use crate::{Cli, Command, Options};

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::ColorOutOfRange { .. } | Error::MalformedWindow(_) => {
                exit::PARSE
            }
            Error::Invariant(_) => exit::INVARIANT,
            _ => exit::USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: String) -> Failure {
    Failure {
        code: exit::USAGE,
        message,
    }
}

fn read(path: &Path, opts: &Options) -> Result<InputDocument, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(InputDocument::new(text, opts.format))
}

fn graph(path: &Path, opts: &Options) -> Result<EdgeColoredGraph, Failure> {
    let doc = read(path, opts)?;
    parse_graph(&doc).map_err(|e| {
        let mut f = Failure::from(e);
        f.code = exit::PARSE;
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn engine_config(opts: &Options) -> Result<EngineConfig, Failure> {
    let mut cfg = EngineConfig::with_refinement(RefinementConfig::new(opts.k)?);
    cfg.strategy = opts.strategy;
    cfg.budget = opts.budget;
    Ok(cfg)
}

fn oracle_limit(opts: &Options) -> OracleLimit {
    if opts.max_n > OracleLimit::default().max_n {
        eprintln!(
            "orbitfix: warning: exhaustive search above {} vertices may take very long",
            OracleLimit::default().max_n
        );
    }
    OracleLimit::new(opts.max_n)
}

/// Runs one command, returning the rendered output and its exit code.
pub fn run(cli: &Cli) -> Result<(String, u8), Failure> {
    let opts = &cli.opts;
    let start = Instant::now();
    let (mut report, code) = match &cli.command {
        Command::Orbits { file } => orbits("orbits", &graph(file, opts)?, opts)?,
        Command::Auts { file } => orbits("auts", &graph(file, opts)?, opts)?,
        Command::Iso { file1, file2 } => iso(&graph(file1, opts)?, &graph(file2, opts)?, opts)?,
        Command::Refine { file } => refine_cmd(&graph(file, opts)?, opts)?,
        Command::OracleOrbits { file } => oracle_orbits(&graph(file, opts)?, opts)?,
        Command::OracleAut { file } => oracle_aut(&graph(file, opts)?, opts)?,
        Command::Verify { file } => verify(&graph(file, opts)?, opts)?,
        Command::Assembly { file } => assembly(file, opts)?,
    };
    if opts.timing {
        report.runtime_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok((report.render(opts.json), code))
}

fn certified_code(status: Status, opts: &Options) -> u8 {
    if opts.certify && status == Status::LowerBound {
        exit::INCONCLUSIVE
    } else {
        exit::OK
    }
}

fn orbits(command: &str, g: &EdgeColoredGraph, opts: &Options) -> Result<(Report, u8), Failure> {
    let sys = compute_orbits(g, &engine_config(opts)?)?;
    let mut report = Report::new(command, g.n(), sys.status.name());
    report.orbits = Some(sorted_classes(&sys.partition));
    report.generators = images(&sys.generators);
    report.stats = (&sys.stats).into();
    Ok((report, certified_code(sys.status, opts)))
}

fn iso(
    g1: &EdgeColoredGraph,
    g2: &EdgeColoredGraph,
    opts: &Options,
) -> Result<(Report, u8), Failure> {
    let out = iso_test(g1, g2, &engine_config(opts)?)?;
    let (witness, code) = match &out.verdict {
        IsoVerdict::Isomorphic(p) => (json!(p.image()), exit::OK),
        IsoVerdict::NonIsomorphic => (Value::Null, exit::NON_ISOMORPHIC),
        IsoVerdict::Inconclusive => (Value::Null, exit::INCONCLUSIVE),
    };
    let mut report = Report::new("iso", g1.n(), out.verdict.name())
        .with("n2", g2.n())
        .with("isomorphism", witness);
    report.stats = (&out.stats).into();
    Ok((report, code))
}

fn refine_cmd(g: &EdgeColoredGraph, opts: &Options) -> Result<(Report, u8), Failure> {
    let s = refine(g, &RefinementConfig::new(opts.k)?)?;
    let status = if s.is_discrete() {
        "discrete"
    } else {
        "stable"
    };
    let mut report = Report::new("refine", g.n(), status)
        .with("k", opts.k)
        .with("rounds", s.rounds_used)
        .with("classes", s.vertex_partition.len());
    report.orbits = Some(sorted_classes(&s.vertex_partition));
    report.stats.refine_calls = 1;
    Ok((report, exit::OK))
}

fn oracle_orbits(g: &EdgeColoredGraph, opts: &Options) -> Result<(Report, u8), Failure> {
    let orbits = brute_orbits(g, oracle_limit(opts))?;
    let mut report = Report::new("oracle-orbits", g.n(), "exact");
    report.orbits = Some(sorted_classes(&orbits));
    Ok((report, exit::OK))
}

fn oracle_aut(g: &EdgeColoredGraph, opts: &Options) -> Result<(Report, u8), Failure> {
    let auts = brute_aut(g, oracle_limit(opts))?;
    let orbits = orbitfix_core::oracle::closure_orbits(g.n(), &auts)?;
    let mut report = Report::new("oracle-aut", g.n(), "exact").with("group_order", auts.len());
    report.orbits = Some(sorted_classes(&orbits));
    report.generators = images(&auts);
    Ok((report, exit::OK))
}

fn verify(g: &EdgeColoredGraph, opts: &Options) -> Result<(Report, u8), Failure> {
    let sys = compute_orbits(g, &engine_config(opts)?)?;
    let truth = brute_orbits(g, oracle_limit(opts))?;
    let sound = sys.partition.is_finer_or_equal(&truth)?;
    let exact = sys.partition.same_blocks(&truth);
    let agrees = sound && (exact || sys.status == Status::LowerBound);
    let mut report = Report::new("verify", g.n(), sys.status.name())
        .with("oracle_orbits", json!(sorted_classes(&truth)))
        .with("exact", exact)
        .with("agrees", agrees);
    report.orbits = Some(sorted_classes(&sys.partition));
    report.generators = images(&sys.generators);
    report.stats = (&sys.stats).into();
    let code = if agrees {
        certified_code(sys.status, opts)
    } else {
        exit::INVARIANT
    };
    Ok((report, code))
}

fn assembly(path: &Path, opts: &Options) -> Result<(Report, u8), Failure> {
    let doc = read(path, opts)?;
    let ws = parse_window_set(&doc.payload).map_err(|e| Failure {
        code: exit::PARSE,
        message: format!("{}: {e}", path.display()),
    })?;
    let result = is_assembled(&ws);
    let projection = project_to_vertices(&ws);
    let vertices: std::collections::BTreeSet<usize> =
        projection.iter().flat_map(|&(a, b)| [a, b]).collect();
    let status = if result.assembled {
        "assembled"
    } else {
        "not_assembled"
    };
    let witness = result
        .witness
        .map_or(Value::Null, |w| json!([w.top, w.bottom]));
    let report = Report::new("assembly", vertices.len(), status)
        .with("k", ws.k())
        .with("witness", witness)
        .with(
            "diagnostic",
            result.diagnostic.map_or(Value::Null, Value::from),
        )
        .with("projection", json!(projection))
        .with("unordered_projection", json!(unordered_projection(&ws)));
    Ok((report, exit::OK))
}
