//! Random-greedy conflict-free matching over implicitly represented
//! hypergraphs.
//!
//! Every construction in this crate is an auxiliary hypergraph whose vertices
//! are host pairs (`{u, v}`) and `(vertex, color)` slots, and whose edges are
//! colored pieces (stars, cherry-plus-edge triangles, triangles). A matching
//! is a set of pairwise disjoint pieces, so it induces a partial edge
//! coloring. Conflicts are sets of four pieces that together would close a
//! 4-cycle colored `a, b, a, b`.
//!
//! The hypergraph is never built at full scale. An encoder implements
//! [`MatchingInstance`]: it samples candidates uniformly from its structured
//! space, and [`run_random_greedy`] accepts a sample iff it is still disjoint
//! from the current matching and does not close a conflict.

pub mod audit;
pub mod explicit;

use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::time::{Duration, Instant};

use arrayvec::ArrayVec;
use fixedbitset::FixedBitSet;
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{ColorId, EdgeColoring, HostGraph};

// ============================================================================
// Pieces and hypergraph vertices
// ============================================================================

/// Vertex of the auxiliary hypergraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum HVertex {
    /// Unordered pair `{u, v}` of host vertices, stored with `u < v`.
    Pair(u32, u32),
    /// Copy of host vertex `v` in the color-`c` layer.
    Slot(u32, ColorId),
}

impl HVertex {
    pub fn pair(u: u32, v: u32) -> Self {
        if u < v {
            HVertex::Pair(u, v)
        } else {
            HVertex::Pair(v, u)
        }
    }
}

/// The hyperedge behind a candidate together with the colored host edges it
/// stands for.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Piece {
    pub pairs: ArrayVec<(u32, u32), 6>,
    pub slots: ArrayVec<(u32, ColorId), 5>,
    pub edges: ArrayVec<(u32, u32, ColorId), 3>,
}

impl Piece {
    pub fn hyperedge(&self) -> Vec<HVertex> {
        let mut out: Vec<HVertex> = self
            .pairs
            .iter()
            .map(|&(u, v)| HVertex::pair(u, v))
            .chain(self.slots.iter().map(|&(v, c)| HVertex::Slot(v, c)))
            .collect();
        out.sort_unstable();
        out
    }
}

// ============================================================================
// MatchState
// ============================================================================

/// The matching together with its occupancy tables and induced coloring.
#[derive(Clone, Debug)]
pub struct MatchState<C> {
    nv: usize,
    k1: u32,
    used_pairs: FixedBitSet,
    used_slots: FixedBitSet,
    edge_color: Vec<ColorId>,
    class_edges: Vec<Vec<(u32, u32)>>,
    accepted: Vec<C>,
}

impl<C: Copy> MatchState<C> {
    pub fn new(num_vertices: usize, k1: u32) -> Self {
        MatchState {
            nv: num_vertices,
            k1,
            used_pairs: FixedBitSet::with_capacity(num_vertices * num_vertices),
            used_slots: FixedBitSet::with_capacity(num_vertices * (k1 as usize + 1)),
            edge_color: vec![0; num_vertices * num_vertices],
            class_edges: vec![Vec::new(); k1 as usize + 1],
            accepted: Vec::new(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.nv
    }

    pub fn k1(&self) -> u32 {
        self.k1
    }

    #[inline(always)]
    fn pair_bit(&self, u: u32, v: u32) -> usize {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        a as usize * self.nv + b as usize
    }

    #[inline(always)]
    fn slot_bit(&self, v: u32, c: ColorId) -> usize {
        c as usize * self.nv + v as usize
    }

    #[inline(always)]
    pub fn pair_used(&self, u: u32, v: u32) -> bool {
        self.used_pairs.contains(self.pair_bit(u, v))
    }

    #[inline(always)]
    pub fn slot_used(&self, v: u32, c: ColorId) -> bool {
        self.used_slots.contains(self.slot_bit(v, c))
    }

    /// Color of host pair `{u, v}` in the induced coloring, `0` if none.
    #[inline(always)]
    pub fn color(&self, u: u32, v: u32) -> ColorId {
        self.edge_color[u as usize * self.nv + v as usize]
    }

    /// Edges of color class `c`.
    pub fn class(&self, c: ColorId) -> &[(u32, u32)] {
        &self.class_edges[c as usize]
    }

    pub fn accepted(&self) -> &[C] {
        &self.accepted
    }

    pub fn len(&self) -> usize {
        self.accepted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.accepted.is_empty()
    }

    /// All pairs and slots of `piece` are unused.
    pub fn piece_is_free(&self, piece: &Piece) -> bool {
        piece.pairs.iter().all(|&(u, v)| !self.pair_used(u, v))
            && piece.slots.iter().all(|&(v, c)| !self.slot_used(v, c))
    }

    /// Whether coloring `new_edges` in order closes a 4-cycle whose two
    /// perfect matchings are monochromatic in two different colors.
    ///
    /// Each new edge is tested against the current coloring plus the new
    /// edges that precede it.
    pub fn closes_two_colored_c4(&self, new_edges: &[(u32, u32, ColorId)]) -> bool {
        for (k, &(a, b, c)) in new_edges.iter().enumerate() {
            let earlier = &new_edges[..k];
            let color_of = |u: u32, v: u32| -> ColorId {
                let col = self.color(u, v);
                if col != 0 {
                    return col;
                }
                earlier
                    .iter()
                    .find(|&&(s, t, _)| (s == u && t == v) || (s == v && t == u))
                    .map_or(0, |e| e.2)
            };
            let partners = self.class_edges[c as usize].iter().copied().chain(
                earlier
                    .iter()
                    .filter(|e| e.2 == c)
                    .map(|&(s, t, _)| (s, t)),
            );
            for (s, t) in partners {
                if s == a || s == b || t == a || t == b {
                    continue;
                }
                let x = color_of(a, s);
                if x != 0 && x != c && x == color_of(b, t) {
                    return true;
                }
                let y = color_of(a, t);
                if y != 0 && y != c && y == color_of(b, s) {
                    return true;
                }
            }
        }
        false
    }

    /// Records `piece` as part of the matching.
    pub fn insert(&mut self, candidate: C, piece: &Piece) {
        for &(u, v) in &piece.pairs {
            let bit = self.pair_bit(u, v);
            debug_assert!(!self.used_pairs.contains(bit));
            self.used_pairs.insert(bit);
        }
        for &(v, c) in &piece.slots {
            let bit = self.slot_bit(v, c);
            debug_assert!(!self.used_slots.contains(bit));
            self.used_slots.insert(bit);
        }
        for &(u, v, c) in &piece.edges {
            self.edge_color[u as usize * self.nv + v as usize] = c;
            self.edge_color[v as usize * self.nv + u as usize] = c;
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            self.class_edges[c as usize].push((a, b));
        }
        self.accepted.push(candidate);
    }

    /// The induced partial coloring of `host` (stage-1 palette only).
    pub fn coloring(&self, host: HostGraph) -> EdgeColoring {
        let mut out = EdgeColoring::new(host, self.k1, 0);
        for (c, class) in self.class_edges.iter().enumerate() {
            for &(u, v) in class {
                out.set(u, v, c as ColorId)
                    .expect("matching colors only host edges");
            }
        }
        out
    }
}

// ============================================================================
// MatchingInstance
// ============================================================================

/// An auxiliary hypergraph given implicitly by its candidate space.
pub trait MatchingInstance: Sync {
    type Candidate: Copy + fmt::Debug + Eq + Ord + Hash + Send + Sync;

    fn host(&self) -> HostGraph;

    /// Number of stage-1 colors `k1`.
    fn stage1_colors(&self) -> u32;

    /// Size of the candidate space sampled by [`MatchingInstance::sample_candidate`].
    fn candidate_space_size(&self) -> u64;

    /// Nominal vertex degree `d` of the hypergraph.
    fn nominal_degree(&self) -> f64;

    /// Draws a candidate uniformly from the full candidate space.
    fn sample_candidate<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Candidate;

    /// The hyperedge and colored host edges encoded by `c`.
    fn piece(&self, c: &Self::Candidate) -> Piece;

    /// Every vertex of the hypergraph, including isolated ones.
    fn hypergraph_vertices(&self) -> Vec<HVertex>;

    /// Visits every candidate of the space in a fixed order.
    fn for_each_candidate(&self, f: &mut dyn FnMut(Self::Candidate));

    /// Visits every candidate that is available in `state`, in a fixed order.
    fn for_each_available(
        &self,
        state: &MatchState<Self::Candidate>,
        f: &mut dyn FnMut(Self::Candidate),
    ) {
        self.for_each_candidate(&mut |c| {
            if self.is_available(&c, state) {
                f(c)
            }
        });
    }

    fn new_state(&self) -> MatchState<Self::Candidate> {
        MatchState::new(self.host().num_vertices(), self.stage1_colors())
    }

    /// Disjointness from every accepted hyperedge.
    fn is_available(&self, c: &Self::Candidate, state: &MatchState<Self::Candidate>) -> bool {
        state.piece_is_free(&self.piece(c))
    }

    fn creates_conflict(&self, c: &Self::Candidate, state: &MatchState<Self::Candidate>) -> bool {
        state.closes_two_colored_c4(&self.piece(c).edges)
    }

    fn apply(&self, c: Self::Candidate, state: &mut MatchState<Self::Candidate>) {
        let piece = self.piece(&c);
        state.insert(c, &piece);
    }

    /// The colored host edges of `c`.
    fn describe(&self, c: &Self::Candidate) -> Vec<(u32, u32, ColorId)> {
        self.piece(c).edges.to_vec()
    }
}

// ============================================================================
// Test functions
// ============================================================================

/// A `j`-uniform weight on sets of candidates. Implementations may assume the
/// set they are given is a matching; [`TrackedFunctional`] enforces that.
pub trait TestFunction<C>: Send + Sync {
    fn name(&self) -> String;
    fn uniformity(&self) -> usize;
    fn weight(&self, set: &[C]) -> u64;
    /// `false` when `c` belongs to no set of positive weight. Lets audits
    /// skip most of the candidate space.
    fn supports(&self, _c: &C) -> bool {
        true
    }
}

/// A test function with its running value on the current matching.
pub struct TrackedFunctional<C> {
    inner: Box<dyn TestFunction<C>>,
    value: u64,
}

impl<C: Copy> TrackedFunctional<C> {
    pub fn new(inner: Box<dyn TestFunction<C>>) -> Self {
        TrackedFunctional { inner, value: 0 }
    }

    pub fn name(&self) -> String {
        self.inner.name()
    }

    pub fn uniformity(&self) -> usize {
        self.inner.uniformity()
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn function(&self) -> &dyn TestFunction<C> {
        self.inner.as_ref()
    }

    /// Weight of `set`, or `0` when the pieces are not pairwise disjoint.
    pub fn evaluate<I>(&self, inst: &I, set: &[C]) -> u64
    where
        I: MatchingInstance<Candidate = C>,
    {
        let edges: Vec<Vec<HVertex>> = set.iter().map(|c| inst.piece(c).hyperedge()).collect();
        for (a, b) in edges.iter().tuple_combinations() {
            if sorted_intersect(a, b) {
                return 0;
            }
        }
        self.inner.weight(set)
    }

    fn on_accept(&mut self, matching_before: &[C], added: C) {
        let j = self.inner.uniformity();
        if j == 0 {
            return;
        }
        let mut buf = Vec::with_capacity(j);
        for combo in matching_before.iter().copied().combinations(j - 1) {
            buf.clear();
            buf.extend(combo);
            buf.push(added);
            self.value += self.inner.weight(&buf);
        }
    }

    /// Recomputes the value on `matching` from scratch.
    pub fn recompute(&self, matching: &[C]) -> u64 {
        let j = self.inner.uniformity();
        matching
            .iter()
            .copied()
            .combinations(j)
            .map(|set| self.inner.weight(&set))
            .sum()
    }
}

pub(crate) fn sorted_intersect<T: Ord>(a: &[T], b: &[T]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

// ============================================================================
// Engine
// ============================================================================

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StopPolicy {
    /// Stop sampling after this many consecutive rejections. `None` means
    /// `50 * candidate_space_size / d`.
    pub max_consecutive_rejections: Option<u64>,
    /// Optional wall-clock cap on the sampling phase. Runs that hit it are
    /// not reproducible.
    pub wall_clock: Option<Duration>,
    /// After the sampling phase, visit every remaining available candidate
    /// in uniformly random order, leaving a maximal conflict-free matching.
    pub saturate: bool,
}

impl Default for StopPolicy {
    fn default() -> Self {
        StopPolicy {
            max_consecutive_rejections: None,
            wall_clock: None,
            saturate: true,
        }
    }
}

impl StopPolicy {
    pub fn streak_limit<I: MatchingInstance>(&self, inst: &I) -> u64 {
        self.max_consecutive_rejections.unwrap_or_else(|| {
            let t = 50.0 * inst.candidate_space_size() as f64 / inst.nominal_degree();
            t.ceil().max(1.0) as u64
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub seed: u64,
    pub accepted: u64,
    pub rejected_unavailable: u64,
    pub rejected_conflict: u64,
    pub samples: u64,
    /// Accepted during the saturation sweep (included in `accepted`).
    pub accepted_in_sweep: u64,
    /// Size of the available list visited by the saturation sweep.
    pub sweep_candidates: u64,
    pub streak_limit: u64,
    pub hit_wall_clock: bool,
    pub trackers: BTreeMap<String, u64>,
    pub wall_time_secs: f64,
}

/// Runs the random greedy process on `inst`.
///
/// The returned state is always a conflict-free matching; its size is
/// whatever the process reaches before the stop policy fires.
pub fn run_random_greedy<I: MatchingInstance>(
    inst: &I,
    seed: u64,
    stop: &StopPolicy,
    trackers: &mut [TrackedFunctional<I::Candidate>],
) -> (MatchState<I::Candidate>, RunStats) {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = inst.new_state();
    let limit = stop.streak_limit(inst);
    let mut stats = RunStats {
        seed,
        streak_limit: limit,
        ..RunStats::default()
    };

    let mut accept = |c: I::Candidate, state: &mut MatchState<I::Candidate>, stats: &mut RunStats| {
        for t in trackers.iter_mut() {
            t.on_accept(state.accepted(), c);
        }
        inst.apply(c, state);
        stats.accepted += 1;
    };

    let mut streak = 0u64;
    if inst.candidate_space_size() == 0 {
        stats.wall_time_secs = started.elapsed().as_secs_f64();
        return (state, stats);
    }
    while streak < limit {
        if stats.samples % 4096 == 0 {
            if let Some(cap) = stop.wall_clock {
                if started.elapsed() >= cap {
                    stats.hit_wall_clock = true;
                    break;
                }
            }
        }
        stats.samples += 1;
        let c = inst.sample_candidate(&mut rng);
        let piece = inst.piece(&c);
        if !state.piece_is_free(&piece) {
            stats.rejected_unavailable += 1;
            streak += 1;
        } else if state.closes_two_colored_c4(&piece.edges) {
            stats.rejected_conflict += 1;
            streak += 1;
        } else {
            accept(c, &mut state, &mut stats);
            streak = 0;
        }
    }

    if stop.saturate {
        let mut pool = Vec::new();
        inst.for_each_available(&state, &mut |c| pool.push(c));
        pool.shuffle(&mut rng);
        stats.sweep_candidates = pool.len() as u64;
        for c in pool {
            let piece = inst.piece(&c);
            if !state.piece_is_free(&piece) {
                stats.rejected_unavailable += 1;
            } else if state.closes_two_colored_c4(&piece.edges) {
                stats.rejected_conflict += 1;
            } else {
                accept(c, &mut state, &mut stats);
                stats.accepted_in_sweep += 1;
            }
        }
    }

    for t in trackers.iter() {
        stats.trackers.insert(t.name(), t.value());
    }
    stats.wall_time_secs = started.elapsed().as_secs_f64();
    (state, stats)
}

/// Re-derives occupancy from the accepted candidates and checks that they are
/// pairwise disjoint hyperedges whose colored edges agree with the state.
pub fn occupancy_is_consistent<I: MatchingInstance>(inst: &I, state: &MatchState<I::Candidate>) -> bool {
    let mut rebuilt = inst.new_state();
    for c in state.accepted() {
        let piece = inst.piece(c);
        if !rebuilt.piece_is_free(&piece) {
            return false;
        }
        rebuilt.insert(*c, &piece);
    }
    rebuilt.used_pairs == state.used_pairs
        && rebuilt.used_slots == state.used_slots
        && rebuilt.edge_color == state.edge_color
}
