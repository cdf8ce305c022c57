use std::fmt::Write as _;

use orbitfix_core::{OrderedPartition, Permutation, RunStats};
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Serialize, Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StatsReport {
    pub refine_calls: u64,
    pub canonical_form_calls: u64,
    pub verify_tree_nodes: u64,
    pub verify_tree_depth_max: u64,
}

impl From<&RunStats> for StatsReport {
    fn from(s: &RunStats) -> Self {
        Self {
            refine_calls: s.refine_calls,
            canonical_form_calls: s.canonical_form_calls,
            verify_tree_nodes: s.verify_tree_nodes,
            verify_tree_depth_max: s.verify_tree_depth_max,
        }
    }
}

/// One command's result. The common keys always appear; `extra` holds
/// command-specific fields, serialized after them in key order.
#[derive(Serialize, Debug, Clone)]
pub struct Report {
    pub command: String,
    pub n: usize,
    pub orbits: Option<Vec<Vec<usize>>>,
    pub generators: Vec<Vec<usize>>,
    pub status: String,
    pub stats: StatsReport,
    pub runtime_ms: Option<u64>,
    #[serde(flatten)]
    pub extra: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str, n: usize, status: &str) -> Self {
        Self {
            command: command.to_string(),
            n,
            orbits: None,
            generators: Vec::new(),
            status: status.to_string(),
            stats: StatsReport::default(),
            runtime_ms: None,
            extra: Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.extra.insert(key.to_string(), value.into());
        self
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string(self).expect("report serializes");
            s.push('\n');
            s
        } else {
            self.text()
        }
    }

    fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}: {} (n = {})", self.command, self.status, self.n);
        if let Some(orbits) = &self.orbits {
            let _ = writeln!(out, "orbits ({}):", orbits.len());
            for class in orbits {
                let items: Vec<String> = class.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "  {{{}}}", items.join(", "));
            }
        }
        if !self.generators.is_empty() {
            let _ = writeln!(out, "generators ({}):", self.generators.len());
            for g in &self.generators {
                let p = Permutation::new(g.clone()).expect("generator is a permutation");
                let _ = writeln!(out, "  {p}");
            }
        }
        for (key, value) in &self.extra {
            let _ = writeln!(out, "{}: {}", key.replace('_', " "), plain(value));
        }
        let s = &self.stats;
        let _ = writeln!(
            out,
            "refine calls {}, canonical forms {}, verify nodes {}, verify depth {}",
            s.refine_calls, s.canonical_form_calls, s.verify_tree_nodes, s.verify_tree_depth_max
        );
        if let Some(ms) = self.runtime_ms {
            let _ = writeln!(out, "runtime {ms} ms");
        }
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".to_string(),
        other => other.to_string(),
    }
}

/// Classes sorted by minimum, members ascending.
pub fn sorted_classes(p: &OrderedPartition) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = p
        .classes()
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort_unstable();
            c
        })
        .collect();
    classes.sort_by_key(|c| c[0]);
    classes
}

pub fn images(gens: &[Permutation]) -> Vec<Vec<usize>> {
    gens.iter().map(|g| g.image().to_vec()).collect()
}
