//! Stage 2: coloring the leftover graph `L` with a fresh palette by
//! Moser–Tardos resampling.
//!
//! Three event families are avoided:
//!
//! * adjacent: two L-edges sharing a vertex get the same color;
//! * cycle: a 4-cycle inside `L` is properly colored with two colors;
//! * crossing: two disjoint L-edges `e, f` whose cross edges carry the same
//!   stage-1 color get the same color.
//!
//! Since the fresh palette is disjoint from the stage-1 palette, these are
//! exactly the ways stage 2 can complete a 4-cycle with at most two colors.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ColorId, EdgeColoring, HostGraph};

/// The leftover graph together with the frozen stage-1 coloring.
#[derive(Clone, Debug)]
pub struct LllInstance {
    stage1: EdgeColoring,
    edges: Vec<(u32, u32)>,
    /// `edge_id[u * nv + v]`, symmetric, `u32::MAX` when not in `L`.
    edge_id: Vec<u32>,
    adj: Vec<Vec<(u32, u32)>>,
}

impl LllInstance {
    /// `L` = every host edge that is uncolored or carries a color above `k1`.
    pub fn from_coloring(coloring: &EdgeColoring) -> Self {
        let host = coloring.host();
        let edges: Vec<(u32, u32)> = host
            .edges()
            .filter(|&(u, v)| coloring.get(u, v).map_or(true, |c| !coloring.is_stage1(c)))
            .collect();
        Self::from_edges(&coloring.stage1_part(), edges).expect("leftover edges are uncolored in stage 1")
    }

    /// Explicit leftover edges; they must be host edges left uncolored by `stage1`.
    pub fn from_edges(stage1: &EdgeColoring, mut edges: Vec<(u32, u32)>) -> Result<Self> {
        let host = stage1.host();
        let nv = host.num_vertices();
        for e in edges.iter_mut() {
            *e = (e.0.min(e.1), e.0.max(e.1));
            if !host.is_edge(e.0, e.1) {
                return Err(Error::NotAnEdge(e.0, e.1));
            }
            if let Some(c) = stage1.get(e.0, e.1) {
                if stage1.is_stage1(c) {
                    return Err(Error::InvalidParameter(format!(
                        "leftover edge ({}, {}) already has stage-1 color {c}",
                        e.0, e.1
                    )));
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let mut edge_id = vec![u32::MAX; nv * nv];
        let mut adj = vec![Vec::new(); nv];
        for (i, &(u, v)) in edges.iter().enumerate() {
            edge_id[u as usize * nv + v as usize] = i as u32;
            edge_id[v as usize * nv + u as usize] = i as u32;
            adj[u as usize].push((v, i as u32));
            adj[v as usize].push((u, i as u32));
        }
        let mut s1 = EdgeColoring::new(host, stage1.k1(), 0);
        for (u, v, c) in stage1.colored_edges() {
            if stage1.is_stage1(c) {
                s1.set(u, v, c)?;
            }
        }
        Ok(LllInstance { stage1: s1, edges, edge_id, adj })
    }

    pub fn host(&self) -> HostGraph {
        self.stage1.host()
    }

    pub fn stage1(&self) -> &EdgeColoring {
        &self.stage1
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn max_degree(&self) -> u32 {
        self.adj.iter().map(|a| a.len() as u32).max().unwrap_or(0)
    }

    fn nv(&self) -> usize {
        self.adj.len()
    }

    /// Index of `{u, v}` in `L`.
    pub fn edge_index(&self, u: u32, v: u32) -> Option<u32> {
        let id = self.edge_id[u as usize * self.nv() + v as usize];
        (id != u32::MAX).then_some(id)
    }

    /// Stage-1 color shared by the two edges, if both have the same one.
    fn same_old_color(&self, a: (u32, u32), b: (u32, u32)) -> bool {
        let s = &self.stage1;
        match (s.get(a.0, a.1), s.get(b.0, b.1)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        }
    }

    /// Writes `assignment` (colors `0..k2`) into a copy of the stage-1
    /// coloring as colors `k1 + 1 ..= k1 + k2`.
    pub fn apply(&self, assignment: &[u32], k2: u32) -> Result<EdgeColoring> {
        let k1 = self.stage1.k1();
        let mut out = EdgeColoring::new(self.host(), k1, k2);
        for (u, v, c) in self.stage1.colored_edges() {
            out.set(u, v, c)?;
        }
        for (&(u, v), &c) in self.edges.iter().zip(assignment) {
            out.set(u, v, k1 + 1 + c)?;
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BadEvent {
    /// Two L-edges sharing a vertex; violated when their colors agree.
    Adjacent { e: u32, f: u32 },
    /// A 4-cycle of L-edges in cyclic order; violated when opposite edges
    /// agree and adjacent edges differ.
    Cycle { edges: [u32; 4] },
    /// Disjoint L-edges closing a 4-cycle with two stage-1 edges of one
    /// color; violated when their colors agree.
    Crossing { e: u32, f: u32 },
}

impl BadEvent {
    #[inline]
    pub fn holds(&self, colors: &[u32]) -> bool {
        match *self {
            BadEvent::Adjacent { e, f } | BadEvent::Crossing { e, f } => colors[e as usize] == colors[f as usize],
            BadEvent::Cycle { edges: [a, b, c, d] } => {
                let col = |i: u32| colors[i as usize];
                col(a) == col(c) && col(b) == col(d) && col(a) != col(b)
            }
        }
    }

    pub fn kind(&self) -> EventKind {
        match self {
            BadEvent::Adjacent { .. } => EventKind::Adjacent,
            BadEvent::Cycle { .. } => EventKind::Cycle,
            BadEvent::Crossing { .. } => EventKind::Crossing,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Adjacent,
    Cycle,
    Crossing,
}

/// All bad events, with per-variable incidence lists.
#[derive(Clone, Debug)]
pub struct EventIndex {
    pub events: Vec<BadEvent>,
    offsets: Vec<u32>,
    incidence: Vec<u32>,
}

impl EventIndex {
    pub fn events_of(&self, edge: u32) -> &[u32] {
        &self.incidence[self.offsets[edge as usize] as usize..self.offsets[edge as usize + 1] as usize]
    }

    pub fn count(&self, kind: EventKind) -> usize {
        self.events.iter().filter(|e| e.kind() == kind).count()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Full rescan: indices of all events that hold under `colors`.
    pub fn violated(&self, colors: &[u32]) -> Vec<u32> {
        (0..self.events.len() as u32)
            .filter(|&i| self.events[i as usize].holds(colors))
            .collect()
    }
}

fn vars(ev: &BadEvent) -> ([u32; 4], usize) {
    match *ev {
        BadEvent::Adjacent { e, f } | BadEvent::Crossing { e, f } => ([e, f, 0, 0], 2),
        BadEvent::Cycle { edges } => (edges, 4),
    }
}

/// Enumerates the three event families. Events are ordered adjacent, then
/// cycle, then crossing, each family sorted.
pub fn build_events(inst: &LllInstance) -> EventIndex {
    let mut events = Vec::new();

    // adjacent pairs
    let mut adjacent = Vec::new();
    for list in &inst.adj {
        for (a, &(_, e)) in list.iter().enumerate() {
            for &(_, f) in &list[a + 1..] {
                adjacent.push(BadEvent::Adjacent { e: e.min(f), f: e.max(f) });
            }
        }
    }
    adjacent.sort_unstable();
    events.extend(adjacent);

    // 4-cycles inside L, each once: least vertex a, neighbors b < d of a.
    let mut cycles = Vec::new();
    let nv = inst.nv() as u32;
    for a in 0..nv {
        // two-step walks a - b - c with b, c > a
        let mut via: Vec<(u32, u32)> = Vec::new();
        for &(b, _) in &inst.adj[a as usize] {
            if b < a {
                continue;
            }
            for &(c, _) in &inst.adj[b as usize] {
                if c > a {
                    via.push((c, b));
                }
            }
        }
        via.sort_unstable();
        let mut i = 0;
        while i < via.len() {
            let c = via[i].0;
            let j = via[i..].iter().take_while(|w| w.0 == c).count() + i;
            for x in i..j {
                for y in x + 1..j {
                    let (b, d) = (via[x].1, via[y].1);
                    let id = |u: u32, v: u32| inst.edge_index(u, v).unwrap();
                    cycles.push(BadEvent::Cycle {
                        edges: [id(a, b), id(b, c), id(c, d), id(d, a)],
                    });
                }
            }
            i = j;
        }
    }
    cycles.sort_unstable();
    events.extend(cycles);

    // crossing pairs: e = {a, b}, f = {c, d} disjoint with c1(ac) = c1(bd) or
    // c1(ad) = c1(bc).
    let s1 = &inst.stage1;
    let mut by_color: Vec<Vec<(ColorId, u32)>> = vec![Vec::new(); nv as usize];
    for (u, v, c) in s1.colored_edges() {
        by_color[u as usize].push((c, v));
        by_color[v as usize].push((c, u));
    }
    for l in by_color.iter_mut() {
        l.sort_unstable();
    }
    let mut crossing = Vec::new();
    for (e, &(a, b)) in inst.edges.iter().enumerate() {
        for (x, y) in [(a, b), (b, a)] {
            for &(c1, p) in &by_color[x as usize] {
                for &(c2, q) in &by_color[y as usize] {
                    if c1 != c2 || p == q || p == y || q == x {
                        continue;
                    }
                    // L-edge {p, q}: x-p and y-q share the stage-1 color
                    if let Some(f) = inst.edge_index(p, q) {
                        if (f as usize) > e {
                            debug_assert!(inst.same_old_color((x.min(p), x.max(p)), (y.min(q), y.max(q))));
                            crossing.push(BadEvent::Crossing { e: e as u32, f });
                        }
                    }
                }
            }
        }
    }
    crossing.sort_unstable();
    crossing.dedup();
    events.extend(crossing);

    // incidence lists
    let m = inst.edges.len();
    let mut counts = vec![0u32; m + 1];
    for ev in &events {
        let (vs, k) = vars(ev);
        for &v in &vs[..k] {
            counts[v as usize + 1] += 1;
        }
    }
    for i in 0..m {
        counts[i + 1] += counts[i];
    }
    let offsets = counts.clone();
    let mut fill = counts;
    let mut incidence = vec![0u32; *offsets.last().unwrap() as usize];
    for (idx, ev) in events.iter().enumerate() {
        let (vs, k) = vars(ev);
        for &v in &vs[..k] {
            incidence[fill[v as usize] as usize] = idx as u32;
            fill[v as usize] += 1;
        }
    }
    EventIndex { events, offsets, incidence }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ResampleLog {
    pub k2: u32,
    pub success: bool,
    pub resamples: u64,
    pub max_resamples: u64,
    /// Resamples by event kind.
    pub by_kind: BTreeMap<EventKind, u64>,
    /// Events holding when the run stopped.
    pub remaining_violations: usize,
    pub events: BTreeMap<EventKind, usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum MtOutcome {
    /// One color in `0..k2` per L-edge.
    Success { assignment: Vec<u32>, log: ResampleLog },
    Failure(ResampleLog),
}

impl MtOutcome {
    pub fn log(&self) -> &ResampleLog {
        match self {
            MtOutcome::Success { log, .. } | MtOutcome::Failure(log) => log,
        }
    }

    pub fn is_success(&self) -> bool {
        matches!(self, MtOutcome::Success { .. })
    }
}

/// `100 * |E(L)| * k2`.
pub fn default_max_resamples(inst: &LllInstance, k2: u32) -> u64 {
    100 * inst.num_edges() as u64 * k2 as u64
}

/// Holding events, kept as flags plus an ordered set for lowest-index lookup.
struct Holding {
    flags: Vec<bool>,
    set: BTreeSet<u32>,
}

impl Holding {
    fn new(index: &EventIndex, colors: &[u32]) -> Self {
        let set: BTreeSet<u32> = index.violated(colors).into_iter().collect();
        let mut flags = vec![false; index.len()];
        for &e in &set {
            flags[e as usize] = true;
        }
        Holding { flags, set }
    }

    fn refresh(&mut self, index: &EventIndex, colors: &[u32], var: u32) {
        for &ev in index.events_of(var) {
            let now = index.events[ev as usize].holds(colors);
            if now != self.flags[ev as usize] {
                self.flags[ev as usize] = now;
                if now {
                    self.set.insert(ev);
                } else {
                    self.set.remove(&ev);
                }
            }
        }
    }
}

fn new_log(index: &EventIndex, k2: u32, max_resamples: u64) -> ResampleLog {
    ResampleLog {
        k2,
        max_resamples,
        events: [EventKind::Adjacent, EventKind::Cycle, EventKind::Crossing]
            .into_iter()
            .map(|k| (k, index.count(k)))
            .collect(),
        ..ResampleLog::default()
    }
}

fn finish(colors: Vec<u32>, holding: &Holding, mut log: ResampleLog) -> MtOutcome {
    log.remaining_violations = holding.set.len();
    log.success = holding.set.is_empty();
    if log.success {
        MtOutcome::Success { assignment: colors, log }
    } else {
        MtOutcome::Failure(log)
    }
}

fn check_palette(k2: u32) -> Result<()> {
    if k2 < 2 {
        return Err(Error::InvalidParameter(format!("palette size must be at least 2, got {k2}")));
    }
    Ok(())
}

/// Moser–Tardos: start from a uniform assignment and, while some event
/// holds, resample all variables of the lowest-index holding event.
pub fn moser_tardos(
    inst: &LllInstance,
    index: &EventIndex,
    k2: u32,
    seed: u64,
    max_resamples: u64,
) -> Result<MtOutcome> {
    check_palette(k2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut colors: Vec<u32> = (0..inst.num_edges()).map(|_| rng.gen_range(0..k2)).collect();
    let mut holding = Holding::new(index, &colors);
    let mut log = new_log(index, k2, max_resamples);

    while let Some(&ev) = holding.set.first() {
        if log.resamples >= max_resamples {
            break;
        }
        let event = index.events[ev as usize];
        log.resamples += 1;
        *log.by_kind.entry(event.kind()).or_default() += 1;
        let (vs, k) = vars(&event);
        for &v in &vs[..k] {
            colors[v as usize] = rng.gen_range(0..k2);
        }
        for &v in &vs[..k] {
            holding.refresh(index, &colors, v);
        }
    }
    Ok(finish(colors, &holding, log))
}

/// The color that would make `ev` hold if assigned to `var`, if any.
#[inline]
fn blocking_color(ev: &BadEvent, var: u32, colors: &[u32]) -> Option<u32> {
    let col = |i: u32| colors[i as usize];
    match *ev {
        BadEvent::Adjacent { e, f } | BadEvent::Crossing { e, f } => Some(if e == var { col(f) } else { col(e) }),
        BadEvent::Cycle { edges } => {
            let pos = edges.iter().position(|&x| x == var)?;
            let opposite = col(edges[(pos + 2) % 4]);
            let (s, t) = (col(edges[(pos + 1) % 4]), col(edges[(pos + 3) % 4]));
            (s == t && s != opposite).then_some(opposite)
        }
    }
}

/// Focused variant: for the lowest-index holding event, recolor one of its
/// variables, chosen uniformly, with a color that makes the fewest incident
/// events hold (ties broken uniformly). With probability `noise` the color
/// is uniform instead.
pub fn focused_search(
    inst: &LllInstance,
    index: &EventIndex,
    k2: u32,
    seed: u64,
    max_steps: u64,
    noise: f64,
) -> Result<MtOutcome> {
    check_palette(k2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut colors: Vec<u32> = (0..inst.num_edges()).map(|_| rng.gen_range(0..k2)).collect();
    let mut holding = Holding::new(index, &colors);
    let mut log = new_log(index, k2, max_steps);
    let mut cost = vec![0u32; k2 as usize];
    let mut ties = Vec::with_capacity(k2 as usize);

    while let Some(&ev) = holding.set.first() {
        if log.resamples >= max_steps {
            break;
        }
        let event = index.events[ev as usize];
        log.resamples += 1;
        *log.by_kind.entry(event.kind()).or_default() += 1;
        let (vs, k) = vars(&event);
        let var = vs[rng.gen_range(0..k)];
        let new = if rng.gen::<f64>() < noise {
            rng.gen_range(0..k2)
        } else {
            cost.iter_mut().for_each(|c| *c = 0);
            for &other in index.events_of(var) {
                if let Some(c) = blocking_color(&index.events[other as usize], var, &colors) {
                    cost[c as usize] += 1;
                }
            }
            let best = *cost.iter().min().unwrap();
            ties.clear();
            ties.extend((0..k2).filter(|&c| cost[c as usize] == best));
            ties[rng.gen_range(0..ties.len())]
        };
        colors[var as usize] = new;
        holding.refresh(index, &colors, var);
    }
    Ok(finish(colors, &holding, log))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    /// Dependency-degree estimate `8 Δ k + 4 Δ² + 4 X k`, `X` = crossing bound.
    pub dependency_bound: f64,
    /// Per-event probability bound `2 / k²`.
    pub event_probability: f64,
    /// `1 - e p (D + 1)`; nonnegative when the symmetric condition holds.
    pub margin: f64,
    pub satisfied: bool,
}

/// Symmetric local-lemma check `e p (D + 1) <= 1` from measured statistics.
pub fn check_condition(max_deg_l: u32, k2: u32, crossing_bound: u32) -> ConditionReport {
    let (d, k, x) = (max_deg_l as f64, k2 as f64, crossing_bound as f64);
    let dep = 8.0 * d * k + 4.0 * d * d + 4.0 * x * k;
    let p = 2.0 / (k * k);
    let margin = 1.0 - std::f64::consts::E * p * (dep + 1.0);
    ConditionReport {
        dependency_bound: dep,
        event_probability: p,
        margin,
        // with no leftover edge there are no events at all
        satisfied: max_deg_l == 0 || margin >= 0.0,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PaletteAttempt {
    pub k2: u32,
    pub seed: u64,
    pub success: bool,
    pub resamples: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PaletteResult {
    pub k2: u32,
    pub assignment: Vec<u32>,
    pub log: ResampleLog,
    pub attempts: Vec<PaletteAttempt>,
}

/// Options for [`adaptive_palette`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PaletteSearch {
    pub k2_min: u32,
    pub k2_max: u32,
    pub attempts_per: u32,
    /// Resample budget per attempt as a multiple of `|E(L)| * k2`.
    pub budget_factor: u64,
    pub strategy: Strategy,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Strategy {
    /// Plain Moser–Tardos resampling.
    MoserTardos,
    /// [`focused_search`] with the given noise probability.
    Focused { noise: f64 },
}

impl Default for PaletteSearch {
    fn default() -> Self {
        PaletteSearch {
            k2_min: 2,
            k2_max: u32::MAX,
            attempts_per: 2,
            budget_factor: 100,
            strategy: Strategy::MoserTardos,
        }
    }
}

fn attempt_seed(seed: u64, k2: u32, attempt: u32) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ ((k2 as u64) << 32)
        ^ attempt as u64
}

/// Smallest palette (within the search range) for which Moser–Tardos
/// succeeds. Starts at `max(k2_min, Δ(L))`, grows geometrically until a
/// success, then bisects between the last failure and the success.
pub fn adaptive_palette(inst: &LllInstance, search: PaletteSearch, seed: u64) -> Result<PaletteResult> {
    if search.k2_min < 2 || search.k2_max < search.k2_min {
        return Err(Error::InvalidParameter(format!(
            "bad palette range {}..={}",
            search.k2_min, search.k2_max
        )));
    }
    let index = build_events(inst);
    let mut attempts = Vec::new();
    let try_k = |k2: u32, attempts: &mut Vec<PaletteAttempt>| -> Result<Option<(Vec<u32>, ResampleLog)>> {
        for a in 0..search.attempts_per.max(1) {
            let s = attempt_seed(seed, k2, a);
            let budget = search.budget_factor * inst.num_edges() as u64 * k2 as u64;
            let out = match search.strategy {
                Strategy::MoserTardos => moser_tardos(inst, &index, k2, s, budget)?,
                Strategy::Focused { noise } => focused_search(inst, &index, k2, s, budget, noise)?,
            };
            attempts.push(PaletteAttempt {
                k2,
                seed: s,
                success: out.is_success(),
                resamples: out.log().resamples,
            });
            if let MtOutcome::Success { assignment, log } = out {
                return Ok(Some((assignment, log)));
            }
        }
        Ok(None)
    };

    if index.is_empty() {
        let k2 = search.k2_min;
        let (assignment, log) = try_k(k2, &mut attempts)?.expect("no events always succeeds");
        return Ok(PaletteResult { k2, assignment, log, attempts });
    }

    let start = search.k2_min.max(inst.max_degree()).min(search.k2_max);
    let mut lo = start - 1; // largest known failure (or below range)
    let mut k = start;
    let mut step = 1u32;
    let mut best = loop {
        if let Some(found) = try_k(k, &mut attempts)? {
            break (k, found);
        }
        lo = k;
        if k == search.k2_max {
            return Err(Error::InvalidParameter(format!(
                "no palette up to {} colors avoided every bad event ({} attempts)",
                search.k2_max,
                attempts.len()
            )));
        }
        k = k.saturating_add(step).min(search.k2_max);
        step = step.saturating_mul(2);
    };
    let mut hi = best.0;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if mid < search.k2_min {
            break;
        }
        match try_k(mid, &mut attempts)? {
            Some(found) => {
                hi = mid;
                best = (mid, found);
            }
            None => lo = mid,
        }
    }
    let (k2, (assignment, log)) = best;
    Ok(PaletteResult { k2, assignment, log, attempts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn empty_stage1(n: u32) -> EdgeColoring {
        EdgeColoring::new(HostGraph::complete(n).unwrap(), 1, 0)
    }

    #[test]
    fn single_edge_has_no_events() {
        let inst = LllInstance::from_edges(&empty_stage1(5), vec![(0, 1)]).unwrap();
        let idx = build_events(&inst);
        assert!(idx.is_empty());
        let out = moser_tardos(&inst, &idx, 2, 0, 100).unwrap();
        assert!(out.is_success());
        assert_eq!(out.log().resamples, 0);
    }

    #[test]
    fn path_and_four_cycle_events() {
        let inst = LllInstance::from_edges(&empty_stage1(5), vec![(0, 1), (1, 2)]).unwrap();
        let idx = build_events(&inst);
        assert_eq!(idx.count(EventKind::Adjacent), 1);
        assert_eq!(idx.len(), 1);

        let c4 = LllInstance::from_edges(&empty_stage1(5), vec![(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let idx = build_events(&c4);
        assert_eq!(idx.count(EventKind::Cycle), 1);
        assert_eq!(idx.count(EventKind::Adjacent), 4);
        assert_eq!(idx.count(EventKind::Crossing), 0);
    }

    #[test]
    fn triangle_with_three_colors() {
        let inst = LllInstance::from_edges(&empty_stage1(5), vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let idx = build_events(&inst);
        let out = moser_tardos(&inst, &idx, 3, 11, default_max_resamples(&inst, 3)).unwrap();
        let MtOutcome::Success { assignment, .. } = out else { panic!("triangle must be colorable") };
        let mut a = assignment.clone();
        a.sort_unstable();
        assert_eq!(a, vec![0, 1, 2]);
    }

    #[test]
    fn four_cycle_with_two_colors_fails() {
        let c4 = LllInstance::from_edges(&empty_stage1(5), vec![(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let idx = build_events(&c4);
        for mask in 0..16u32 {
            let colors: Vec<u32> = (0..4).map(|b| (mask >> b) & 1).collect();
            assert!(!idx.violated(&colors).is_empty());
        }
        let out = moser_tardos(&c4, &idx, 2, 0, default_max_resamples(&c4, 2)).unwrap();
        assert!(!out.is_success());
    }

    #[test]
    fn crossing_events_follow_stage1_colors() {
        // stage-1: 0-2 and 1-3 both color 1; L-edges 01 and 23 close 0-1-3-2.
        let mut s1 = EdgeColoring::new(HostGraph::complete(6).unwrap(), 2, 0);
        s1.set(0, 2, 1).unwrap();
        s1.set(1, 3, 1).unwrap();
        let inst = LllInstance::from_edges(&s1, vec![(0, 1), (2, 3), (4, 5)]).unwrap();
        let idx = build_events(&inst);
        assert_eq!(idx.count(EventKind::Crossing), 1);
        assert_eq!(idx.events, vec![BadEvent::Crossing { e: 0, f: 1 }]);
    }

    #[test]
    fn star_needs_as_many_colors_as_leaves() {
        let edges = (1..=5).map(|l| (0, l)).collect();
        let inst = LllInstance::from_edges(&empty_stage1(7), edges).unwrap();
        let res = adaptive_palette(&inst, PaletteSearch { k2_min: 2, k2_max: 20, ..Default::default() }, 3).unwrap();
        assert_eq!(res.k2, 5);
    }

    #[test]
    fn empty_leftover_uses_minimum_palette() {
        let inst = LllInstance::from_edges(&empty_stage1(5), vec![]).unwrap();
        let res = adaptive_palette(&inst, PaletteSearch { k2_min: 3, k2_max: 9, ..Default::default() }, 0).unwrap();
        assert_eq!(res.k2, 3);
        assert!(res.assignment.is_empty());
    }

    #[test]
    fn condition_check() {
        assert!(check_condition(0, 2, 0).satisfied);
        assert!(!check_condition(100, 2, 0).satisfied);
        assert!(check_condition(1, 1000, 1).satisfied);
    }
}
