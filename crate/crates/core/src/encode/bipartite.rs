//! Star packings of `K_{n,n}`.
//!
//! A candidate is a 4-set `K` of `X ∪ Y` with exactly one or three vertices in
//! `X`, together with a color `i ∈ [k1]`, `k1 = ceil(2n/3)`. The minority
//! vertex of `K` is the center of a 3-edge star whose leaves are the other
//! three vertices. The hyperedge consists of the six pairs of `K` and the
//! four `(v, i)` slots, so the hypergraph is 10-uniform and a matching is a
//! coloring in which every class is a forest of vertex-disjoint 3-edge stars
//! and any two stars share at most one vertex.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{ColorId, HostGraph};
use crate::matching::{HVertex, MatchState, MatchingInstance, Piece, TestFunction};
use crate::verify::{measure_properties, PropertyReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StarCandidate {
    pub center: u32,
    /// Sorted, all on the side opposite to `center`.
    pub leaves: [u32; 3],
    pub color: ColorId,
}

impl StarCandidate {
    pub fn vertices(&self) -> [u32; 4] {
        let mut v = [self.center, self.leaves[0], self.leaves[1], self.leaves[2]];
        v.sort_unstable();
        v
    }

    pub fn contains(&self, v: u32) -> bool {
        self.center == v || self.leaves.contains(&v)
    }
}

#[derive(Clone, Debug)]
pub struct BipartiteStars {
    host: HostGraph,
    k1: u32,
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Three distinct values of `0..n`, sorted; uniform over 3-subsets.
pub(crate) fn sample_triple<R: Rng + ?Sized>(rng: &mut R, n: u32) -> [u32; 3] {
    let a = rng.gen_range(0..n);
    let mut b = rng.gen_range(0..n);
    while b == a {
        b = rng.gen_range(0..n);
    }
    let mut c = rng.gen_range(0..n);
    while c == a || c == b {
        c = rng.gen_range(0..n);
    }
    let mut t = [a, b, c];
    t.sort_unstable();
    t
}

impl BipartiteStars {
    pub const MIN_N: u32 = 6;

    /// The seed is accepted for interface symmetry; the hypergraph itself is
    /// deterministic.
    pub fn build(n: u32, _seed: u64) -> Result<Self> {
        if n < Self::MIN_N {
            return Err(Error::InvalidParameter(format!(
                "bipartite star construction needs n >= {}, got {n}",
                Self::MIN_N
            )));
        }
        Ok(BipartiteStars {
            host: HostGraph::bipartite(n)?,
            k1: (2 * n).div_ceil(3),
        })
    }

    pub fn n(&self) -> u32 {
        self.host.n()
    }

    /// `|T| = 2 * C(n,3) * n` four-sets with one or three vertices in `X`.
    pub fn num_four_sets(&self) -> u64 {
        let n = self.n() as u64;
        2 * binom(n, 3) * n
    }

    /// Closed-form degree of a hypergraph vertex.
    pub fn degree_formula(&self, v: HVertex) -> u64 {
        let n = self.n() as u64;
        let k1 = self.k1 as u64;
        match v {
            HVertex::Pair(a, b) if self.host.is_edge(a, b) => 2 * binom(n - 1, 2) * k1,
            HVertex::Pair(_, _) => (n - 2) * n * k1,
            HVertex::Slot(_, _) => binom(n - 1, 2) * n + binom(n, 3),
        }
    }

    /// Leftover graph and crossing counts of the induced coloring.
    pub fn measure_structural_stats(&self, state: &MatchState<StarCandidate>) -> PropertyReport {
        measure_properties(&state.coloring(self.host))
    }

    fn opposite_range(&self, center: u32) -> std::ops::Range<u32> {
        let n = self.n();
        if center < n {
            n..2 * n
        } else {
            0..n
        }
    }
}

impl MatchingInstance for BipartiteStars {
    type Candidate = StarCandidate;

    fn host(&self) -> HostGraph {
        self.host
    }

    fn stage1_colors(&self) -> u32 {
        self.k1
    }

    fn candidate_space_size(&self) -> u64 {
        self.num_four_sets() * self.k1 as u64
    }

    fn nominal_degree(&self) -> f64 {
        let n = self.n() as f64;
        2.0 * n * n * n / 3.0
    }

    fn sample_candidate<R: Rng + ?Sized>(&self, rng: &mut R) -> StarCandidate {
        let n = self.n();
        let center = rng.gen_range(0..2 * n);
        let offset = if center < n { n } else { 0 };
        let t = sample_triple(rng, n);
        StarCandidate {
            center,
            leaves: [t[0] + offset, t[1] + offset, t[2] + offset],
            color: rng.gen_range(1..=self.k1),
        }
    }

    #[inline]
    fn piece(&self, c: &StarCandidate) -> Piece {
        let [a, b, d] = c.leaves;
        let mut p = Piece::default();
        for l in c.leaves {
            p.pairs.push((c.center.min(l), c.center.max(l)));
        }
        p.pairs.push((a, b));
        p.pairs.push((a, d));
        p.pairs.push((b, d));
        p.slots.push((c.center, c.color));
        for l in c.leaves {
            p.slots.push((l, c.color));
        }
        for l in c.leaves {
            p.edges.push((c.center.min(l), c.center.max(l), c.color));
        }
        p
    }

    fn hypergraph_vertices(&self) -> Vec<HVertex> {
        let nv = self.host.num_vertices() as u32;
        let mut out = Vec::new();
        for u in 0..nv {
            for v in u + 1..nv {
                out.push(HVertex::Pair(u, v));
            }
        }
        for v in 0..nv {
            for c in 1..=self.k1 {
                out.push(HVertex::Slot(v, c));
            }
        }
        out
    }

    fn for_each_candidate(&self, f: &mut dyn FnMut(StarCandidate)) {
        let nv = self.host.num_vertices() as u32;
        for center in 0..nv {
            let side = self.opposite_range(center);
            for a in side.clone() {
                for b in a + 1..side.end {
                    for d in b + 1..side.end {
                        for color in 1..=self.k1 {
                            f(StarCandidate {
                                center,
                                leaves: [a, b, d],
                                color,
                            });
                        }
                    }
                }
            }
        }
    }

    fn for_each_available(&self, state: &MatchState<StarCandidate>, f: &mut dyn FnMut(StarCandidate)) {
        let nv = self.host.num_vertices() as u32;
        let mut leaves = Vec::new();
        for color in 1..=self.k1 {
            for center in 0..nv {
                if state.slot_used(center, color) {
                    continue;
                }
                leaves.clear();
                leaves.extend(
                    self.opposite_range(center)
                        .filter(|&l| !state.slot_used(l, color) && !state.pair_used(center, l)),
                );
                for (ia, &a) in leaves.iter().enumerate() {
                    for (ib, &b) in leaves.iter().enumerate().skip(ia + 1) {
                        if state.pair_used(a, b) {
                            continue;
                        }
                        for &d in &leaves[ib + 1..] {
                            if state.pair_used(a, d) || state.pair_used(b, d) {
                                continue;
                            }
                            f(StarCandidate {
                                center,
                                leaves: [a, b, d],
                                color,
                            });
                        }
                    }
                }
            }
        }
    }

    #[inline]
    fn is_available(&self, c: &StarCandidate, state: &MatchState<StarCandidate>) -> bool {
        state.piece_is_free(&self.piece(c))
    }
}

// ============================================================================
// Test functions
// ============================================================================

/// Number of star edges of the candidate incident to `v`.
pub struct StarVertexCoverage {
    pub v: u32,
}

impl TestFunction<StarCandidate> for StarVertexCoverage {
    fn name(&self) -> String {
        format!("coverage[{}]", self.v)
    }

    fn uniformity(&self) -> usize {
        1
    }

    fn weight(&self, set: &[StarCandidate]) -> u64 {
        let c = &set[0];
        if c.center == self.v {
            3
        } else if c.leaves.contains(&self.v) {
            1
        } else {
            0
        }
    }

    fn supports(&self, c: &StarCandidate) -> bool {
        c.contains(self.v)
    }
}

/// Indicator on pairs of vertex-disjoint stars of the same color, one
/// containing `x` and meeting `X` in `x_hits` vertices, the other containing
/// `y` and meeting `Y` in `y_hits` vertices.
pub struct SameColorPairIndicator {
    pub n: u32,
    pub x: u32,
    pub y: u32,
    pub x_hits: u32,
    pub y_hits: u32,
}

impl SameColorPairIndicator {
    fn side_count(&self, c: &StarCandidate, in_x: bool) -> u32 {
        c.vertices().iter().filter(|&&v| (v < self.n) == in_x).count() as u32
    }

    fn ordered(&self, kx: &StarCandidate, ky: &StarCandidate) -> bool {
        kx.contains(self.x)
            && self.side_count(kx, true) == self.x_hits
            && ky.contains(self.y)
            && self.side_count(ky, false) == self.y_hits
    }
}

impl TestFunction<StarCandidate> for SameColorPairIndicator {
    fn name(&self) -> String {
        format!("same_color_pair[{},{}]({},{})", self.x_hits, self.y_hits, self.x, self.y)
    }

    fn uniformity(&self) -> usize {
        2
    }

    fn weight(&self, set: &[StarCandidate]) -> u64 {
        let (a, b) = (&set[0], &set[1]);
        if a.color != b.color || a.vertices().iter().any(|v| b.contains(*v)) {
            return 0;
        }
        u64::from(self.ordered(a, b) || self.ordered(b, a))
    }

    fn supports(&self, c: &StarCandidate) -> bool {
        c.contains(self.x) || c.contains(self.y)
    }
}
