//! Orbit computation by individualization to the regular stage.
//!
//! A run fixes vertices one at a time until the stable coloring is not
//! discrete but becomes discrete after any single further fixation. The
//! discrete children of that stage are grouped by canonical form; equal
//! forms yield verified automorphisms, whose orbits are joined into the
//! accumulated partition `Q`. Repeating from different seeds grows `Q`.
//! When seeds stop producing merges, pairs of `Q` classes that share a
//! stable class are handed to [`verify_merge`], which searches for a
//! connecting automorphism directly.
//!
//! `Q` is always the orbit partition of the verified generators, so it is
//! finer than or equal to the true orbit partition; the stable coloring is
//! coarser than or equal to it. When the two meet the run is certified.

use std::collections::{BTreeMap, HashSet};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{
    is_automorphism, is_isomorphism, ClassId, EdgeColoredGraph, OrderedPartition, Permutation,
    VertexId,
};
use crate::refine::{individualize_all, refine_with_fixes, RefinementConfig, StableColoring};

/// Order in which fix vertices are chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Fewest previous fixations, then smallest class, class id, vertex id.
    #[default]
    LeastFixed,
    /// Smallest class, then class id, vertex id.
    MinClass,
    /// First non-singleton class, smallest vertex.
    First,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::LeastFixed => "least_fixed",
            Strategy::MinClass => "min_class",
            Strategy::First => "first",
        }
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "least_fixed" => Ok(Strategy::LeastFixed),
            "min_class" => Ok(Strategy::MinClass),
            "first" => Ok(Strategy::First),
            other => Err(format!(
                "unknown strategy `{other}` (expected least_fixed, min_class or first)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub refinement: RefinementConfig,
    pub strategy: Strategy,
    /// Consecutive seeds allowed without a merge. `None` allows `|Q| - 1`,
    /// re-evaluated as `Q` coarsens.
    pub budget: Option<usize>,
    /// Nesting cap for verification trees. `None` uses `ceil(log2 n) + 1`.
    pub depth_budget: Option<usize>,
    /// Node cap for a single pairwise isomorphism search.
    pub search_node_limit: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            refinement: RefinementConfig::default(),
            strategy: Strategy::default(),
            budget: None,
            depth_budget: None,
            search_node_limit: 20_000,
        }
    }
}

impl EngineConfig {
    pub fn with_refinement(refinement: RefinementConfig) -> Self {
        Self {
            refinement,
            ..Self::default()
        }
    }

    pub fn default_depth_budget(n: usize) -> usize {
        ceil_log2(n) + 1
    }
}

pub(crate) fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Counters collected during a run, nested verification included.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunStats {
    pub refine_calls: u64,
    pub canonical_form_calls: u64,
    /// Graphs examined inside verification trees.
    pub verify_tree_nodes: u64,
    /// Deepest nesting of verification reached.
    pub verify_tree_depth_max: u64,
    pub iterations: u64,
    pub verify_merge_calls: u64,
    /// Verifications refused because the depth budget was spent.
    pub depth_budget_hits: u64,
    /// Pairwise searches abandoned at the node limit.
    pub search_limit_hits: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    /// The partition equals the stable coloring, hence the orbit partition.
    Certified,
    /// The partition is an automorphic partition, possibly finer than the
    /// orbits.
    LowerBound,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Certified => "certified",
            Status::LowerBound => "lower_bound",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSystem {
    /// Orbits of the group generated by `generators`, ordered by minimum.
    pub partition: OrderedPartition,
    pub generators: Vec<Permutation>,
    pub status: Status,
    pub stats: RunStats,
}

/// A refined graph with an individualized fix sequence.
#[derive(Clone, Debug)]
pub struct StageGraph<'g> {
    pub base: &'g EdgeColoredGraph,
    pub fixes: Vec<VertexId>,
    pub coloring: StableColoring,
}

impl<'g> StageGraph<'g> {
    pub fn new(
        base: &'g EdgeColoredGraph,
        fixes: Vec<VertexId>,
        cfg: &RefinementConfig,
    ) -> Result<Self> {
        let coloring = refine_with_fixes(base, &fixes, cfg)?;
        Ok(Self {
            base,
            fixes,
            coloring,
        })
    }

    pub fn is_discrete(&self) -> bool {
        self.coloring.is_discrete()
    }

    pub fn partition(&self) -> &OrderedPartition {
        &self.coloring.vertex_partition
    }

    /// Vertices of non-singleton classes, class by class.
    fn open_vertices(&self) -> Vec<VertexId> {
        self.partition()
            .classes()
            .iter()
            .filter(|c| c.len() > 1)
            .flatten()
            .copied()
            .collect()
    }
}

/// How often each vertex has been fixed so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixHistory {
    counts: Vec<u32>,
}

impl FixHistory {
    pub fn new(n: usize) -> Self {
        Self { counts: vec![0; n] }
    }

    pub fn record(&mut self, v: VertexId) {
        self.counts[v] += 1;
    }

    pub fn count(&self, v: VertexId) -> u32 {
        self.counts.get(v).copied().unwrap_or(0)
    }
}

/// Chooses the next vertex to individualize.
pub fn pick_fix_vertex(
    stage: &StageGraph<'_>,
    history: &FixHistory,
    strategy: Strategy,
) -> Result<VertexId> {
    ordered_candidates(stage.partition(), history, strategy)
        .into_iter()
        .next()
        .ok_or(Error::NoCandidate)
}

fn ordered_candidates(
    p: &OrderedPartition,
    history: &FixHistory,
    strategy: Strategy,
) -> Vec<VertexId> {
    let mut keyed: Vec<((u32, usize, ClassId), VertexId)> = Vec::new();
    for (id, class) in p.classes().iter().enumerate() {
        if class.len() < 2 {
            continue;
        }
        for &v in class {
            let key = match strategy {
                Strategy::LeastFixed => (history.count(v), class.len(), id),
                Strategy::MinClass => (0, class.len(), id),
                Strategy::First => (0, 0, id),
            };
            keyed.push((key, v));
        }
    }
    keyed.sort_unstable();
    keyed.into_iter().map(|(_, v)| v).collect()
}

/// Color matrix of the base graph in canonical vertex order, preceded by
/// the refinement trace and the sorted class signatures.
pub fn canonical_form_discrete(s: &StageGraph<'_>) -> Result<Vec<u8>> {
    if !s.is_discrete() {
        return Err(Error::NotDiscrete);
    }
    let order = s.coloring.vertex_order();
    let n = order.len();
    let mut sigs = s.coloring.signatures.clone();
    sigs.sort_unstable();
    let mut out = Vec::with_capacity(16 + 8 * n + 4 * n * n);
    out.extend_from_slice(&s.coloring.trace.to_le_bytes());
    out.extend_from_slice(&(n as u64).to_le_bytes());
    for sig in sigs {
        out.extend_from_slice(&sig.to_le_bytes());
    }
    for &u in &order {
        for &v in &order {
            out.extend_from_slice(&s.base.color(u, v).to_le_bytes());
        }
    }
    Ok(out)
}

/// Maps the `i`-th class of `s1` onto the `i`-th class of `s2` when their
/// canonical forms agree, and returns the map only if it carries the base
/// of `s1` onto the base of `s2`.
pub fn extract_isomorphism(
    s1: &StageGraph<'_>,
    s2: &StageGraph<'_>,
) -> Result<Option<Permutation>> {
    if canonical_form_discrete(s1)? != canonical_form_discrete(s2)? {
        return Ok(None);
    }
    Ok(class_order_map(s1, s2))
}

fn class_order_map(s1: &StageGraph<'_>, s2: &StageGraph<'_>) -> Option<Permutation> {
    let n = s1.base.n();
    if s2.base.n() != n {
        return None;
    }
    let mut image = vec![0; n];
    for (&a, &b) in s1
        .coloring
        .vertex_order()
        .iter()
        .zip(&s2.coloring.vertex_order())
    {
        image[a] = b;
    }
    let perm = Permutation::new(image).ok()?;
    is_isomorphism(s1.base, s2.base, &perm).then_some(perm)
}

/// Extends the fix sequence until the stable coloring is one
/// individualization away from discrete.
pub fn find_regular_stage<'g>(
    g: &'g EdgeColoredGraph,
    cfg: &EngineConfig,
) -> Result<StageGraph<'g>> {
    let mut engine = Engine::new(g, *cfg);
    Ok(engine.regular_stage(Vec::new())?.0)
}

/// Automorphic partition of a regular stage and the automorphisms that
/// witness its merges.
pub fn stage_orbits(
    g: &EdgeColoredGraph,
    stage: &StageGraph<'_>,
    cfg: &EngineConfig,
) -> Result<(OrderedPartition, Vec<Permutation>)> {
    if stage.base != g {
        return Err(Error::Invariant(
            "stage was built on a different graph".into(),
        ));
    }
    let mut engine = Engine::new(g, *cfg);
    let mut children = Vec::new();
    for y in stage.open_vertices() {
        let mut fixes = stage.fixes.clone();
        fixes.push(y);
        children.push(engine.stage(fixes)?);
    }
    engine.stage_orbits(&children)
}

/// Orbit partition and generators of `Aut(g)`, with a certificate status.
pub fn compute_orbits(g: &EdgeColoredGraph, cfg: &EngineConfig) -> Result<OrbitSystem> {
    Engine::new(g, *cfg).run()
}

/// Looks for an automorphism of `g` joining classes `o1` and `o2` of `q`.
///
/// `None` means no witness was found; it does not prove the classes lie
/// in different orbits.
pub fn verify_merge(
    g: &EdgeColoredGraph,
    q: &OrderedPartition,
    o1: ClassId,
    o2: ClassId,
    cfg: &EngineConfig,
    depth_budget: usize,
) -> Result<(Option<Permutation>, RunStats)> {
    if q.n() != g.n() {
        return Err(Error::SizeMismatch {
            expected: g.n(),
            found: q.n(),
        });
    }
    if o1 == o2 || o1 >= q.len() || o2 >= q.len() {
        return Err(Error::InconsistentPartition(format!(
            "classes {o1} and {o2} must be distinct classes of a {}-class partition",
            q.len()
        )));
    }
    let mut engine = Engine::new(g, *cfg);
    let witness = engine.verify_merge(q, o1, o2, depth_budget)?;
    Ok((witness, engine.stats))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoVerdict {
    /// A verified map carrying the first graph onto the second.
    Isomorphic(Permutation),
    NonIsomorphic,
    Inconclusive,
}

impl IsoVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            IsoVerdict::Isomorphic(_) => "isomorphic",
            IsoVerdict::NonIsomorphic => "non_isomorphic",
            IsoVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoOutcome {
    pub verdict: IsoVerdict,
    pub stats: RunStats,
}

/// Isomorphism test through the orbits of the disjoint union.
///
/// Pairs across the two sides get a color outside both palettes, so an
/// automorphism of the union either keeps both sides or swaps them; a
/// swapping one restricts to an isomorphism.
pub fn iso_test(
    g1: &EdgeColoredGraph,
    g2: &EdgeColoredGraph,
    cfg: &EngineConfig,
) -> Result<IsoOutcome> {
    let n = g1.n();
    if g2.n() != n {
        return Ok(IsoOutcome {
            verdict: IsoVerdict::NonIsomorphic,
            stats: RunStats::default(),
        });
    }
    if n == 0 {
        return Ok(IsoOutcome {
            verdict: IsoVerdict::Isomorphic(Permutation::identity(0)),
            stats: RunStats::default(),
        });
    }
    let union = tagged_union(g1, g2)?;
    let mut engine = Engine::new(&union, *cfg);
    let verdict = engine.union_verdict(g1, g2)?;
    if let IsoVerdict::Isomorphic(p) = &verdict {
        if !is_isomorphism(g1, g2, p) {
            return Err(Error::Invariant("unverified isomorphism escaped".into()));
        }
    }
    Ok(IsoOutcome {
        verdict,
        stats: engine.stats,
    })
}

fn tagged_union(g1: &EdgeColoredGraph, g2: &EdgeColoredGraph) -> Result<EdgeColoredGraph> {
    let n = g1.n();
    let m = 2 * n;
    let tag = g1.color_count().max(g2.color_count());
    let mut colors = vec![tag; m * m];
    for u in 0..n {
        for v in 0..n {
            colors[u * m + v] = g1.color(u, v);
            colors[(n + u) * m + n + v] = g2.color(u, v);
        }
    }
    EdgeColoredGraph::new(m, colors, tag + 1)
}

struct Engine<'g> {
    g: &'g EdgeColoredGraph,
    cfg: EngineConfig,
    stats: RunStats,
    history: FixHistory,
    level: u64,
    depth_budget: usize,
}

enum Search {
    Found(Permutation),
    Exhausted,
    LimitHit,
}

impl<'g> Engine<'g> {
    fn new(g: &'g EdgeColoredGraph, cfg: EngineConfig) -> Self {
        let depth_budget = cfg
            .depth_budget
            .unwrap_or_else(|| EngineConfig::default_depth_budget(g.n()));
        Self {
            g,
            cfg,
            stats: RunStats::default(),
            history: FixHistory::new(g.n()),
            level: 0,
            depth_budget,
        }
    }

    fn refine_fixes(&mut self, fixes: &[VertexId]) -> Result<StableColoring> {
        self.stats.refine_calls += 1;
        refine_with_fixes(self.g, fixes, &self.cfg.refinement)
    }

    fn stage(&mut self, fixes: Vec<VertexId>) -> Result<StageGraph<'g>> {
        let coloring = self.refine_fixes(&fixes)?;
        Ok(StageGraph {
            base: self.g,
            fixes,
            coloring,
        })
    }

    fn canonical_form(&mut self, s: &StageGraph<'_>) -> Result<Vec<u8>> {
        self.stats.canonical_form_calls += 1;
        canonical_form_discrete(s)
    }

    /// Returns the regular stage reached from `prefix` and its discrete
    /// children, one per vertex of a non-singleton class.
    fn regular_stage(
        &mut self,
        prefix: Vec<VertexId>,
    ) -> Result<(StageGraph<'g>, Vec<StageGraph<'g>>)> {
        let mut stage = self.stage(prefix)?;
        if stage.is_discrete() {
            return Ok((stage, Vec::new()));
        }
        'extend: loop {
            let first = pick_fix_vertex(&stage, &self.history, self.cfg.strategy)?;
            let mut children = Vec::new();
            let mut candidates = stage.open_vertices();
            candidates.retain(|&v| v != first);
            candidates.insert(0, first);
            for y in candidates {
                let mut fixes = stage.fixes.clone();
                fixes.push(y);
                let child = self.stage(fixes)?;
                if !child.is_discrete() {
                    self.history.record(y);
                    stage = child;
                    continue 'extend;
                }
                children.push(child);
            }
            children.sort_by_key(|c| *c.fixes.last().expect("child has a fix"));
            return Ok((stage, children));
        }
    }

    fn stage_orbits(
        &mut self,
        children: &[StageGraph<'g>],
    ) -> Result<(OrderedPartition, Vec<Permutation>)> {
        let mut reps: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
        let mut witnesses = Vec::new();
        for (i, child) in children.iter().enumerate() {
            let form = self.canonical_form(child)?;
            match reps.get(&form) {
                Some(&r) => {
                    if let Some(p) = class_order_map(&children[r], child) {
                        witnesses.push(p);
                    }
                }
                None => {
                    reps.insert(form, i);
                }
            }
        }
        let partition = OrderedPartition::from_generators(self.g.n(), &witnesses)?;
        Ok((partition, witnesses))
    }

    fn run(&mut self) -> Result<OrbitSystem> {
        let n = self.g.n();
        let stable = self.refine_fixes(&[])?;
        let target = stable.vertex_partition;
        let mut q = OrderedPartition::discrete(n);
        let mut generators = Vec::new();
        let mut tried = HashSet::new();
        let mut stall = 0usize;
        let mut iteration = 0usize;
        let status = loop {
            if q.same_blocks(&target) {
                break Status::Certified;
            }
            let budget = self.cfg.budget.unwrap_or(q.len() - 1).max(1);
            if stall >= budget {
                break Status::LowerBound;
            }
            let seeds: Vec<VertexId> = q
                .classes()
                .iter()
                .filter(|c| target.class(target.class_of(c[0])).len() > 1)
                .map(|c| c[0])
                .collect();
            let seed = seeds[iteration % seeds.len()];
            iteration += 1;
            self.stats.iterations += 1;
            self.history.record(seed);

            let (_, children) = self.regular_stage(vec![seed])?;
            let (_, witnesses) = self.stage_orbits(&children)?;
            let mut progress = false;
            for w in witnesses {
                progress |= absorb(&mut q, &mut generators, w)?;
            }
            if !progress {
                progress = self.verify_pass(&mut q, &mut generators, &target, &mut tried)?;
            }
            stall = if progress { 0 } else { stall + 1 };
        };
        for gen in &generators {
            if !is_automorphism(self.g, gen)? {
                return Err(Error::Invariant(format!(
                    "generator {gen} is not an automorphism"
                )));
            }
        }
        Ok(OrbitSystem {
            partition: q,
            generators,
            status,
            stats: std::mem::take(&mut self.stats),
        })
    }

    /// Tries to join `Q` classes that share a stable class; returns whether
    /// anything merged.
    fn verify_pass(
        &mut self,
        q: &mut OrderedPartition,
        generators: &mut Vec<Permutation>,
        target: &OrderedPartition,
        tried: &mut HashSet<(VertexId, VertexId)>,
    ) -> Result<bool> {
        let mut any = false;
        'rescan: loop {
            for stable_class in target.classes() {
                let mut inside: Vec<ClassId> =
                    stable_class.iter().map(|&v| q.class_of(v)).collect();
                inside.sort_unstable();
                inside.dedup();
                for (i, &first) in inside.iter().enumerate() {
                    for &other in &inside[i + 1..] {
                        let key = (q.class(first)[0], q.class(other)[0]);
                        if !tried.insert(key) {
                            continue;
                        }
                        let depth = self.depth_budget;
                        if let Some(p) = self.verify_merge(q, first, other, depth)? {
                            absorb(q, generators, p)?;
                            any = true;
                            continue 'rescan;
                        }
                    }
                }
            }
            return Ok(any);
        }
    }

    fn verify_merge(
        &mut self,
        q: &OrderedPartition,
        c1: ClassId,
        c2: ClassId,
        depth_budget: usize,
    ) -> Result<Option<Permutation>> {
        self.stats.verify_merge_calls += 1;
        let level = self.level + 1;
        self.stats.verify_tree_depth_max = self.stats.verify_tree_depth_max.max(level);
        if depth_budget == 0 {
            self.stats.depth_budget_hits += 1;
            return Ok(None);
        }
        let (o1, o2) = (q.class(c1)[0], q.class(c2)[0]);

        // Fix further vertices while o1 and o2 stay in one class.
        let mut fixes: Vec<VertexId> = Vec::new();
        let mut current = self.refine_fixes(&fixes)?;
        let together =
            |c: &StableColoring| c.vertex_partition.class_of(o1) == c.vertex_partition.class_of(o2);
        if !together(&current) {
            return Ok(None);
        }
        loop {
            let candidates: Vec<VertexId> =
                ordered_candidates(&current.vertex_partition, &self.history, self.cfg.strategy)
                    .into_iter()
                    .filter(|&x| x != o1 && x != o2)
                    .collect();
            let mut advanced = false;
            for x in candidates {
                let mut next = fixes.clone();
                next.push(x);
                let c = self.refine_fixes(&next)?;
                if together(&c) {
                    fixes = next;
                    current = c;
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }

        let mut t1 = fixes.clone();
        t1.push(o1);
        let mut t2 = fixes;
        t2.push(o2);
        self.match_stages(t1, t2, depth_budget)
    }

    /// Searches for an automorphism carrying fix sequence `f1` onto `f2`,
    /// pruning the first branching with the orbits of the `f2` graph.
    fn match_stages(
        &mut self,
        f1: Vec<VertexId>,
        f2: Vec<VertexId>,
        depth_budget: usize,
    ) -> Result<Option<Permutation>> {
        let c1 = self.refine_fixes(&f1)?;
        let c2 = self.refine_fixes(&f2)?;
        self.stats.verify_tree_nodes += 2;
        if !c1.compatible(&c2) {
            return Ok(None);
        }
        let prune = if c1.is_discrete() {
            None
        } else {
            let g2 = individualize_all(self.g, &f2)?;
            let mut sub = Engine::new(&g2, self.cfg);
            sub.level = self.level + 1;
            sub.depth_budget = depth_budget - 1;
            sub.stats = std::mem::take(&mut self.stats);
            // The nested run hands the shared counters back in its result.
            let orbits = sub.run()?;
            self.stats = orbits.stats;
            Some(orbits.partition)
        };
        let mut nodes = 0usize;
        match self.search(&f1, &f2, &c1, &c2, prune.as_ref(), &mut nodes)? {
            Search::Found(p) => Ok(Some(p)),
            Search::Exhausted => Ok(None),
            Search::LimitHit => {
                self.stats.search_limit_hits += 1;
                Ok(None)
            }
        }
    }

    /// Individualization-refinement backtracking over two fix sequences
    /// whose colorings are already known to be compatible.
    fn search(
        &mut self,
        f1: &[VertexId],
        f2: &[VertexId],
        c1: &StableColoring,
        c2: &StableColoring,
        prune: Option<&OrderedPartition>,
        nodes: &mut usize,
    ) -> Result<Search> {
        if c1.is_discrete() {
            let s1 = StageGraph {
                base: self.g,
                fixes: f1.to_vec(),
                coloring: c1.clone(),
            };
            let s2 = StageGraph {
                base: self.g,
                fixes: f2.to_vec(),
                coloring: c2.clone(),
            };
            return Ok(match class_order_map(&s1, &s2) {
                Some(p) => Search::Found(p),
                None => Search::Exhausted,
            });
        }
        let p1 = &c1.vertex_partition;
        let target = (0..p1.len())
            .filter(|&c| p1.class(c).len() > 1)
            .min_by_key(|&c| (p1.class(c).len(), c))
            .expect("non-discrete coloring has an open class");
        let a = p1.class(target)[0];
        let mut seen_orbits = HashSet::new();
        let candidates: Vec<VertexId> = c2
            .vertex_partition
            .class(target)
            .iter()
            .copied()
            .filter(|&b| prune.is_none_or(|o| seen_orbits.insert(o.class_of(b))))
            .collect();

        let mut g1 = f1.to_vec();
        g1.push(a);
        let d1 = self.refine_fixes(&g1)?;
        self.stats.verify_tree_nodes += 1;
        let mut limited = false;
        for b in candidates {
            if *nodes >= self.cfg.search_node_limit {
                return Ok(Search::LimitHit);
            }
            *nodes += 1;
            let mut g2 = f2.to_vec();
            g2.push(b);
            let d2 = self.refine_fixes(&g2)?;
            self.stats.verify_tree_nodes += 1;
            if !d1.compatible(&d2) {
                continue;
            }
            match self.search(&g1, &g2, &d1, &d2, None, nodes)? {
                Search::Found(p) => return Ok(Search::Found(p)),
                Search::LimitHit => limited = true,
                Search::Exhausted => {}
            }
            if limited {
                return Ok(Search::LimitHit);
            }
        }
        Ok(Search::Exhausted)
    }

    fn union_verdict(
        &mut self,
        g1: &EdgeColoredGraph,
        g2: &EdgeColoredGraph,
    ) -> Result<IsoVerdict> {
        let n = g1.n();
        let stable = self.refine_fixes(&[])?.vertex_partition;
        let balanced = stable.classes().iter().all(|c| {
            let left = c.iter().filter(|&&v| v < n).count();
            2 * left == c.len()
        });
        if !balanced {
            return Ok(IsoVerdict::NonIsomorphic);
        }
        let system = self.run()?;
        self.stats = system.stats.clone();
        let restrict = |p: &Permutation| -> Option<Permutation> {
            if p.apply(0) < n {
                return None;
            }
            let perm = Permutation::new((0..n).map(|v| p.apply(v) - n).collect()).ok()?;
            is_isomorphism(g1, g2, &perm).then_some(perm)
        };
        if let Some(p) = system.generators.iter().find_map(restrict) {
            return Ok(IsoVerdict::Isomorphic(p));
        }
        if system.status == Status::Certified {
            return Ok(IsoVerdict::NonIsomorphic);
        }

        // Exhaustive search from one left vertex to every right candidate,
        // one per known orbit.
        let class = stable
            .classes()
            .iter()
            .min_by_key(|c| c.len())
            .expect("nonempty union");
        let a = class[0];
        let mut seen = HashSet::new();
        let candidates: Vec<VertexId> = class
            .iter()
            .copied()
            .filter(|&b| b >= n && seen.insert(system.partition.class_of(b)))
            .collect();
        let c1 = self.refine_fixes(&[a])?;
        let mut limited = false;
        for b in candidates {
            let c2 = self.refine_fixes(&[b])?;
            self.stats.verify_tree_nodes += 2;
            if !c1.compatible(&c2) {
                continue;
            }
            let mut nodes = 0;
            match self.search(&[a], &[b], &c1, &c2, None, &mut nodes)? {
                Search::Found(p) => {
                    if let Some(iso) = restrict(&p) {
                        return Ok(IsoVerdict::Isomorphic(iso));
                    }
                }
                Search::LimitHit => {
                    self.stats.search_limit_hits += 1;
                    limited = true;
                }
                Search::Exhausted => {}
            }
        }
        Ok(if limited {
            IsoVerdict::Inconclusive
        } else {
            IsoVerdict::NonIsomorphic
        })
    }
}

/// Adds `w` to the generators if it joins classes of `q`.
fn absorb(
    q: &mut OrderedPartition,
    generators: &mut Vec<Permutation>,
    w: Permutation,
) -> Result<bool> {
    let moves_across = (0..w.len()).any(|v| q.class_of(v) != q.class_of(w.apply(v)));
    if !moves_across {
        return Ok(false);
    }
    let orbits = OrderedPartition::from_generators(q.n(), std::slice::from_ref(&w))?;
    *q = q.join(&orbits)?;
    generators.push(w);
    Ok(true)
}
