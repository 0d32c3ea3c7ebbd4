//! Cherry-plus-edge triangles in `K_n` with a random hole table.
//!
//! A candidate `(u, {v, w}, i, j)` colors `uv, uw` with `i` and `vw` with `j`.
//! Its hyperedge is the three host edges plus the slots `u_i, v_i, w_i, v_j,
//! w_j`; it exists only if those five slots are present and `u_j` is a hole.
//! Because `u_j` is never usable, no `j`-colored edge ever touches the apex.

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ColorId, EdgeColoring, HostGraph};
use crate::matching::{HVertex, MatchState, MatchingInstance, Piece};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct K4Params {
    pub n: u32,
    pub rho: f64,
    /// Seeds the hole table.
    pub seed: u64,
}

impl K4Params {
    pub fn new(n: u32, rho: f64, seed: u64) -> Self {
        K4Params { n, rho, seed }
    }

    /// `round((1 + rho) * 5n / 6)`.
    pub fn k1(&self) -> u32 {
        ((1.0 + self.rho) * 5.0 * self.n as f64 / 6.0).round() as u32
    }

    /// Hole probability `rho / (1 + rho)`.
    pub fn p(&self) -> f64 {
        self.rho / (1.0 + self.rho)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriangleCandidate {
    pub apex: u32,
    /// Sorted.
    pub base: [u32; 2],
    /// Color of the two apex edges.
    pub i: ColorId,
    /// Color of the base edge.
    pub j: ColorId,
}

impl TriangleCandidate {
    pub fn vertices(&self) -> [u32; 3] {
        let mut v = [self.apex, self.base[0], self.base[1]];
        v.sort_unstable();
        v
    }
}

/// Bit set = the `(vertex, color)` copy is deleted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoleTable {
    bits: FixedBitSet,
    k1: u32,
}

impl HoleTable {
    /// Independent Bernoulli(`p`) draws, a pure function of `(seed, n, k1, p)`.
    pub fn generate(seed: u64, n: u32, k1: u32, p: f64) -> Self {
        let mix = seed
            ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
            ^ (k1 as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F)
            ^ p.to_bits().rotate_left(17);
        let mut rng = ChaCha8Rng::seed_from_u64(mix);
        let mut bits = FixedBitSet::with_capacity(n as usize * (k1 as usize + 1));
        for v in 0..n {
            for c in 1..=k1 {
                if rng.gen::<f64>() < p {
                    bits.insert(v as usize * (k1 as usize + 1) + c as usize);
                }
            }
        }
        HoleTable { bits, k1 }
    }

    /// A table with no holes.
    pub fn empty(n: u32, k1: u32) -> Self {
        HoleTable {
            bits: FixedBitSet::with_capacity(n as usize * (k1 as usize + 1)),
            k1,
        }
    }

    #[inline]
    pub fn is_hole(&self, v: u32, c: ColorId) -> bool {
        self.bits.contains(v as usize * (self.k1 as usize + 1) + c as usize)
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones(..)
    }
}

#[derive(Clone, Debug)]
pub struct CherryTriangles {
    params: K4Params,
    host: HostGraph,
    k1: u32,
    holes: HoleTable,
    space: u64,
}

impl CherryTriangles {
    pub const MIN_N: u32 = 8;

    pub fn build(params: K4Params) -> Result<Self> {
        if params.n < Self::MIN_N {
            return Err(Error::InvalidParameter(format!(
                "cherry construction needs n >= {}, got {}",
                Self::MIN_N,
                params.n
            )));
        }
        let p = params.p();
        if !(params.rho.is_finite() && p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "hole probability must lie strictly between 0 and 1 (rho = {})",
                params.rho
            )));
        }
        let k1 = params.k1();
        if k1 < 2 {
            return Err(Error::InvalidParameter("need at least two stage-1 colors".into()));
        }
        let holes = HoleTable::generate(params.seed, params.n, k1, p);
        Ok(Self::with_holes(params, holes))
    }

    /// Uses an explicit hole table.
    pub fn with_holes(params: K4Params, holes: HoleTable) -> Self {
        let k1 = params.k1();
        let host = HostGraph::complete(params.n).expect("n checked by caller");
        let mut inst = CherryTriangles { params, host, k1, holes, space: 0 };
        inst.space = inst.count_space();
        inst
    }

    pub fn params(&self) -> &K4Params {
        &self.params
    }

    pub fn holes(&self) -> &HoleTable {
        &self.holes
    }

    pub fn n(&self) -> u32 {
        self.params.n
    }

    /// Size of the unconstrained space `n * C(n-1, 2) * k1 * (k1 - 1)`.
    pub fn raw_space_size(&self) -> u64 {
        let n = self.n() as u64;
        let k = self.k1 as u64;
        n * (n - 1) * (n - 2) / 2 * k * (k - 1)
    }

    #[inline]
    pub fn satisfies_hole_condition(&self, c: &TriangleCandidate) -> bool {
        let h = &self.holes;
        let [v, w] = c.base;
        h.is_hole(c.apex, c.j)
            && !h.is_hole(c.apex, c.i)
            && !h.is_hole(v, c.i)
            && !h.is_hole(w, c.i)
            && !h.is_hole(v, c.j)
            && !h.is_hole(w, c.j)
    }

    fn present_both(&self, i: ColorId, j: ColorId) -> Vec<u32> {
        (0..self.n())
            .filter(|&v| !self.holes.is_hole(v, i) && !self.holes.is_hole(v, j))
            .collect()
    }

    fn count_space(&self) -> u64 {
        let mut total = 0u64;
        for i in 1..=self.k1 {
            for j in 1..=self.k1 {
                if i == j {
                    continue;
                }
                let m = self.present_both(i, j).len() as u64;
                let apexes = (0..self.n())
                    .filter(|&u| self.holes.is_hole(u, j) && !self.holes.is_hole(u, i))
                    .count() as u64;
                total += apexes * (m * m.saturating_sub(1) / 2);
            }
        }
        total
    }

    /// `(5/2) n^2 k (1-p)^4 p`, the expected degree of a host edge.
    pub fn expected_degree(&self) -> f64 {
        let n = self.n() as f64;
        let p = self.params.p();
        2.5 * n * n * self.k1 as f64 * (1.0 - p).powi(4) * p
    }

    /// Exact degree of a hypergraph vertex by enumeration of the candidates
    /// containing it.
    pub fn degree(&self, hv: HVertex) -> u64 {
        let n = self.n();
        let k = self.k1;
        let mut count = 0u64;
        let mut check = |c: TriangleCandidate| {
            if self.satisfies_hole_condition(&c) {
                count += 1;
            }
        };
        let base = |a: u32, b: u32| [a.min(b), a.max(b)];
        match hv {
            HVertex::Pair(a, b) => {
                for i in 1..=k {
                    for j in (1..=k).filter(|&j| j != i) {
                        for x in (0..n).filter(|&x| x != a && x != b) {
                            check(TriangleCandidate { apex: x, base: base(a, b), i, j });
                            check(TriangleCandidate { apex: a, base: base(b, x), i, j });
                            check(TriangleCandidate { apex: b, base: base(a, x), i, j });
                        }
                    }
                }
            }
            HVertex::Slot(v, c) => {
                for other in (1..=k).filter(|&o| o != c) {
                    for a in (0..n).filter(|&a| a != v) {
                        for b in (a + 1..n).filter(|&b| b != v) {
                            // v as apex with color c on its two edges
                            check(TriangleCandidate { apex: v, base: [a, b], i: c, j: other });
                        }
                        for b in (0..n).filter(|&b| b != v && b != a) {
                            // v in the base, apex a, partner b
                            let bs = base(v, b);
                            check(TriangleCandidate { apex: a, base: bs, i: c, j: other });
                            check(TriangleCandidate { apex: a, base: bs, i: other, j: c });
                        }
                    }
                }
            }
        }
        count
    }

    /// Degrees of `samples` host edges and slots drawn with `seed`, compared
    /// with [`Self::expected_degree`].
    pub fn empirical_degree_check(&self, samples: usize, seed: u64) -> DegreeCheck {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.n();
        let expected = self.expected_degree();
        let mut edge_degrees = Vec::with_capacity(samples);
        let mut slot_degrees = Vec::with_capacity(samples);
        for _ in 0..samples {
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n);
            while b == a {
                b = rng.gen_range(0..n);
            }
            let (a, b) = (a.min(b), a.max(b));
            edge_degrees.push(((a, b), self.degree(HVertex::Pair(a, b))));
            let v = rng.gen_range(0..n);
            let c = rng.gen_range(1..=self.k1);
            slot_degrees.push(((v, c), self.degree(HVertex::Slot(v, c))));
        }
        let dev = |d: u64| (d as f64 - expected).abs();
        let max_edge_deviation = edge_degrees.iter().map(|e| dev(e.1)).fold(0.0, f64::max);
        DegreeCheck {
            expected,
            max_edge_deviation,
            relative_edge_deviation: if expected > 0.0 { max_edge_deviation / expected } else { 0.0 },
            edge_degrees,
            slot_degrees,
        }
    }

    /// Counts pairs of disjoint matched triangles of one color, the first
    /// containing `x` with `x_hits` of its edges at `x`, the second containing
    /// `y` with `y_hits` edges at `y`. Returns the largest ratio of that count
    /// to `4 (1-p)^2 k / (25 x_hits y_hits)` over `x != y` and hits in `{1, 2}`.
    pub fn matched_pair_statistic(&self, state: &MatchState<TriangleCandidate>) -> PairStatistic {
        let n = self.n() as usize;
        let k = self.k1 as usize;
        // at[z][c] = (accepted index, multiplicity of c at z)
        let mut at = vec![vec![(u32::MAX, 0u8); k + 1]; n];
        for (idx, c) in state.accepted().iter().enumerate() {
            at[c.apex as usize][c.i as usize] = (idx as u32, 2);
            for v in c.base {
                at[v as usize][c.i as usize] = (idx as u32, 1);
                at[v as usize][c.j as usize] = (idx as u32, 1);
            }
        }
        let acc = state.accepted();
        let disjoint = |a: u32, b: u32| {
            let (va, vb) = (acc[a as usize].vertices(), acc[b as usize].vertices());
            !va.iter().any(|v| vb.contains(v))
        };
        let p = self.params.p();
        let mut best = PairStatistic::default();
        for x in 0..n {
            for y in 0..n {
                if x == y {
                    continue;
                }
                let mut counts = [[0u64; 2]; 2];
                for c in 1..=k {
                    let (ex, mx) = at[x][c];
                    let (ey, my) = at[y][c];
                    if ex != u32::MAX && ey != u32::MAX && ex != ey && disjoint(ex, ey) {
                        counts[mx as usize - 1][my as usize - 1] += 1;
                    }
                }
                for x_hits in 1..=2 {
                    for y_hits in 1..=2 {
                        let bound = 4.0 * (1.0 - p).powi(2) * k as f64 / (25.0 * (x_hits * y_hits) as f64);
                        let got = counts[x_hits - 1][y_hits - 1];
                        let ratio = got as f64 / bound;
                        if ratio > best.max_ratio {
                            best = PairStatistic {
                                max_ratio: ratio,
                                max_count: got,
                                argmax: (x as u32, y as u32, x_hits as u32, y_hits as u32),
                            };
                        }
                    }
                }
            }
        }
        best
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DegreeCheck {
    pub expected: f64,
    pub max_edge_deviation: f64,
    pub relative_edge_deviation: f64,
    pub edge_degrees: Vec<((u32, u32), u64)>,
    pub slot_degrees: Vec<((u32, ColorId), u64)>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PairStatistic {
    pub max_ratio: f64,
    pub max_count: u64,
    /// `(x, y, x_hits, y_hits)`.
    pub argmax: (u32, u32, u32, u32),
}

impl MatchingInstance for CherryTriangles {
    type Candidate = TriangleCandidate;

    fn host(&self) -> HostGraph {
        self.host
    }

    fn stage1_colors(&self) -> u32 {
        self.k1
    }

    fn candidate_space_size(&self) -> u64 {
        self.space
    }

    fn nominal_degree(&self) -> f64 {
        self.expected_degree().max(1.0)
    }

    fn sample_candidate<R: Rng + ?Sized>(&self, rng: &mut R) -> TriangleCandidate {
        assert!(self.space > 0, "sampling from an empty candidate space");
        let n = self.n();
        loop {
            let t = super::bipartite::sample_triple(rng, n);
            let apex_pos = rng.gen_range(0..3);
            let apex = t[apex_pos];
            let mut base = [0u32; 2];
            let mut k = 0;
            for (pos, &v) in t.iter().enumerate() {
                if pos != apex_pos {
                    base[k] = v;
                    k += 1;
                }
            }
            let i = rng.gen_range(1..=self.k1);
            let mut j = rng.gen_range(1..self.k1);
            if j >= i {
                j += 1;
            }
            let c = TriangleCandidate { apex, base, i, j };
            if self.satisfies_hole_condition(&c) {
                return c;
            }
        }
    }

    #[inline]
    fn piece(&self, c: &TriangleCandidate) -> Piece {
        let [v, w] = c.base;
        let u = c.apex;
        let mut p = Piece::default();
        p.pairs.push((u.min(v), u.max(v)));
        p.pairs.push((u.min(w), u.max(w)));
        p.pairs.push((v, w));
        p.slots.push((u, c.i));
        p.slots.push((v, c.i));
        p.slots.push((w, c.i));
        p.slots.push((v, c.j));
        p.slots.push((w, c.j));
        p.edges.push((u.min(v), u.max(v), c.i));
        p.edges.push((u.min(w), u.max(w), c.i));
        p.edges.push((v, w, c.j));
        p
    }

    fn hypergraph_vertices(&self) -> Vec<HVertex> {
        let n = self.n();
        let mut out: Vec<HVertex> = self.host.edges().map(|(u, v)| HVertex::Pair(u, v)).collect();
        for v in 0..n {
            for c in 1..=self.k1 {
                if !self.holes.is_hole(v, c) {
                    out.push(HVertex::Slot(v, c));
                }
            }
        }
        out
    }

    fn for_each_candidate(&self, f: &mut dyn FnMut(TriangleCandidate)) {
        let n = self.n();
        for apex in 0..n {
            for v in (0..n).filter(|&v| v != apex) {
                for w in (v + 1..n).filter(|&w| w != apex) {
                    for i in 1..=self.k1 {
                        for j in (1..=self.k1).filter(|&j| j != i) {
                            let c = TriangleCandidate { apex, base: [v, w], i, j };
                            if self.satisfies_hole_condition(&c) {
                                f(c);
                            }
                        }
                    }
                }
            }
        }
    }

    fn for_each_available(
        &self,
        state: &MatchState<TriangleCandidate>,
        f: &mut dyn FnMut(TriangleCandidate),
    ) {
        let n = self.n();
        let mut shared = Vec::new();
        let mut base = Vec::new();
        for i in 1..=self.k1 {
            for j in (1..=self.k1).filter(|&j| j != i) {
                shared.clear();
                shared.extend((0..n).filter(|&v| {
                    !self.holes.is_hole(v, i)
                        && !self.holes.is_hole(v, j)
                        && !state.slot_used(v, i)
                        && !state.slot_used(v, j)
                }));
                if shared.len() < 2 {
                    continue;
                }
                for u in 0..n {
                    if !self.holes.is_hole(u, j) || self.holes.is_hole(u, i) || state.slot_used(u, i) {
                        continue;
                    }
                    base.clear();
                    base.extend(shared.iter().copied().filter(|&v| v != u && !state.pair_used(u, v)));
                    for (a, &v) in base.iter().enumerate() {
                        for &w in &base[a + 1..] {
                            if !state.pair_used(v, w) {
                                f(TriangleCandidate { apex: u, base: [v, w], i, j });
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Stage-1 part of a coloring as candidates: each cherry `x-y-z` of color `i`
/// with `xz` colored `j` becomes `(y, {x, z}, i, j)`.
pub fn candidates_of(coloring: &EdgeColoring) -> Vec<TriangleCandidate> {
    let comps = crate::verify::class_components(coloring);
    let mut out = Vec::new();
    for class in comps.iter().skip(1) {
        for comp in class.iter().filter(|c| c.edges.len() == 2) {
            let (a, b) = (comp.edges[0], comp.edges[1]);
            let apex = if a.0 == b.0 || a.0 == b.1 { a.0 } else { a.1 };
            let mut ends: Vec<u32> = comp.vertices.iter().copied().filter(|&v| v != apex).collect();
            ends.sort_unstable();
            if let Some(j) = coloring.get(ends[0], ends[1]) {
                out.push(TriangleCandidate { apex, base: [ends[0], ends[1]], i: comp.color, j });
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameters() {
        assert_eq!(K4Params::new(60, 0.1, 0).k1(), 55);
        assert_eq!(K4Params::new(60, 1.0, 0).p(), 0.5);
        assert!(CherryTriangles::build(K4Params::new(7, 0.5, 0)).is_err());
        assert!(CherryTriangles::build(K4Params::new(10, 0.0, 0)).is_err());
    }

    #[test]
    fn space_count_matches_enumeration() {
        let inst = CherryTriangles::build(K4Params::new(10, 0.5, 3)).unwrap();
        let mut count = 0u64;
        inst.for_each_candidate(&mut |_| count += 1);
        assert_eq!(count, inst.candidate_space_size());
        assert!(count > 0);
    }

    #[test]
    fn hole_table_is_a_function_of_its_inputs() {
        let a = HoleTable::generate(1, 20, 10, 0.3);
        assert_eq!(a, HoleTable::generate(1, 20, 10, 0.3));
        assert_ne!(a, HoleTable::generate(2, 20, 10, 0.3));
    }

    #[test]
    fn no_holes_means_no_candidates() {
        let params = K4Params::new(10, 0.5, 0);
        let inst = CherryTriangles::with_holes(params, HoleTable::empty(10, params.k1()));
        assert_eq!(inst.candidate_space_size(), 0);
        assert_eq!(inst.degree(HVertex::Pair(0, 1)), 0);
    }

    #[test]
    fn sampled_candidates_satisfy_holes() {
        let inst = CherryTriangles::build(K4Params::new(12, 0.3, 9)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let c = inst.sample_candidate(&mut rng);
            assert!(inst.satisfies_hole_condition(&c));
            assert!(c.base[0] < c.base[1] && c.i != c.j);
        }
    }

    #[test]
    fn degree_of_edges_sums_to_three_per_candidate() {
        let inst = CherryTriangles::build(K4Params::new(9, 0.5, 4)).unwrap();
        let total: u64 = inst.host().edges().map(|(a, b)| inst.degree(HVertex::Pair(a, b))).sum();
        assert_eq!(total, 3 * inst.candidate_space_size());
        let slots: u64 = inst
            .hypergraph_vertices()
            .into_iter()
            .filter(|v| matches!(v, HVertex::Slot(..)))
            .map(|v| inst.degree(v))
            .sum();
        assert_eq!(slots, 5 * inst.candidate_space_size());
    }

    #[test]
    fn planted_conflict_is_detected() {
        // a-edge 01, b-edges 02 and 13; adding a-edge 23 closes 0-1-3-2.
        let params = K4Params::new(10, 0.5, 0);
        let inst = CherryTriangles::with_holes(params, HoleTable::empty(10, params.k1()));
        let mut state = inst.new_state();
        let place = |edges: &[(u32, u32, ColorId)], state: &mut MatchState<TriangleCandidate>| {
            let mut p = Piece::default();
            for &(u, v, c) in edges {
                p.pairs.push((u, v));
                p.edges.push((u, v, c));
            }
            state.insert(TriangleCandidate { apex: edges[0].0, base: [edges[0].1, 9], i: 1, j: 2 }, &p);
        };
        place(&[(0, 1, 1)], &mut state);
        place(&[(0, 2, 2), (1, 3, 2)], &mut state);
        assert!(state.closes_two_colored_c4(&[(2, 3, 1)]));
        assert!(!state.closes_two_colored_c4(&[(2, 4, 1)]));
        assert!(!inst.new_state().closes_two_colored_c4(&[(2, 3, 1)]));
    }
}
