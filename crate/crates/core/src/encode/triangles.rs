//! Triangle packings of `K_n` with `ceil(n/2)` colors.
//!
//! A candidate is a triangle `{u, v, w}` with a color `i`; its hyperedge is
//! the three host edges and the slots `u_i, v_i, w_i` (6-uniform).

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{ColorId, HostGraph};
use crate::matching::{HVertex, MatchingInstance, Piece};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TriCandidate {
    /// Sorted.
    pub vertices: [u32; 3],
    pub color: ColorId,
}

#[derive(Clone, Debug)]
pub struct Triangles {
    host: HostGraph,
    k1: u32,
}

impl Triangles {
    pub const MIN_N: u32 = 6;

    pub fn build(n: u32, _seed: u64) -> Result<Self> {
        if n < Self::MIN_N {
            return Err(Error::InvalidParameter(format!(
                "triangle construction needs n >= {}, got {n}",
                Self::MIN_N
            )));
        }
        Ok(Triangles {
            host: HostGraph::complete(n)?,
            k1: n.div_ceil(2),
        })
    }

    pub fn n(&self) -> u32 {
        self.host.n()
    }

    pub fn degree_formula(&self, v: HVertex) -> u64 {
        let n = self.n() as u64;
        match v {
            HVertex::Pair(..) => (n - 2) * self.k1 as u64,
            HVertex::Slot(..) => (n - 1) * (n - 2) / 2,
        }
    }
}

impl MatchingInstance for Triangles {
    type Candidate = TriCandidate;

    fn host(&self) -> HostGraph {
        self.host
    }

    fn stage1_colors(&self) -> u32 {
        self.k1
    }

    fn candidate_space_size(&self) -> u64 {
        let n = self.n() as u64;
        n * (n - 1) * (n - 2) / 6 * self.k1 as u64
    }

    fn nominal_degree(&self) -> f64 {
        let n = self.n() as f64;
        (n - 1.0) * (n - 2.0) / 2.0
    }

    fn sample_candidate<R: Rng + ?Sized>(&self, rng: &mut R) -> TriCandidate {
        TriCandidate {
            vertices: super::bipartite::sample_triple(rng, self.n()),
            color: rng.gen_range(1..=self.k1),
        }
    }

    #[inline]
    fn piece(&self, c: &TriCandidate) -> Piece {
        let [a, b, d] = c.vertices;
        let mut p = Piece::default();
        for (u, v) in [(a, b), (a, d), (b, d)] {
            p.pairs.push((u, v));
            p.edges.push((u, v, c.color));
        }
        for v in c.vertices {
            p.slots.push((v, c.color));
        }
        p
    }

    fn hypergraph_vertices(&self) -> Vec<HVertex> {
        let mut out: Vec<HVertex> = self.host.edges().map(|(u, v)| HVertex::Pair(u, v)).collect();
        for v in 0..self.n() {
            for c in 1..=self.k1 {
                out.push(HVertex::Slot(v, c));
            }
        }
        out
    }

    fn for_each_candidate(&self, f: &mut dyn FnMut(TriCandidate)) {
        let n = self.n();
        for a in 0..n {
            for b in a + 1..n {
                for d in b + 1..n {
                    for color in 1..=self.k1 {
                        f(TriCandidate { vertices: [a, b, d], color });
                    }
                }
            }
        }
    }

    fn for_each_available(
        &self,
        state: &crate::matching::MatchState<TriCandidate>,
        f: &mut dyn FnMut(TriCandidate),
    ) {
        let n = self.n();
        let mut free = Vec::new();
        for color in 1..=self.k1 {
            free.clear();
            free.extend((0..n).filter(|&v| !state.slot_used(v, color)));
            for (ia, &a) in free.iter().enumerate() {
                for (ib, &b) in free.iter().enumerate().skip(ia + 1) {
                    if state.pair_used(a, b) {
                        continue;
                    }
                    for &d in &free[ib + 1..] {
                        if !state.pair_used(a, d) && !state.pair_used(b, d) {
                            f(TriCandidate { vertices: [a, b, d], color });
                        }
                    }
                }
            }
        }
    }
}
