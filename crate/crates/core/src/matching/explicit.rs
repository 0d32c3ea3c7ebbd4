//! Explicit materialization of small instances for oracle audits.

use std::collections::HashMap;

use rayon::prelude::*;

use super::{HVertex, MatchingInstance};
use crate::error::{Error, Result};
use crate::graph::{enumerate_four_cycles, ColorId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitHypergraph {
    pub vertices: Vec<HVertex>,
    /// Sorted vertex ids per edge.
    pub edges: Vec<Vec<u32>>,
    pub uniformity: usize,
}

impl ExplicitHypergraph {
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Degree of every vertex, indexed like `vertices`.
    pub fn degrees(&self) -> Vec<u64> {
        let mut deg = vec![0u64; self.vertices.len()];
        for e in &self.edges {
            for &v in e {
                deg[v as usize] += 1;
            }
        }
        deg
    }

    pub fn min_degree(&self) -> u64 {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> u64 {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// `Δ₂`: the largest number of edges containing a fixed vertex pair.
    pub fn max_codegree(&self) -> u64 {
        let mut counts: HashMap<(u32, u32), u64> = HashMap::new();
        for e in &self.edges {
            for (i, &a) in e.iter().enumerate() {
                for &b in &e[i + 1..] {
                    *counts.entry((a, b)).or_default() += 1;
                }
            }
        }
        counts.into_values().max().unwrap_or(0)
    }

    /// All edges share the uniformity and none repeats.
    pub fn is_well_formed(&self) -> bool {
        let mut sorted = self.edges.clone();
        sorted.sort();
        sorted.dedup();
        sorted.len() == self.edges.len() && self.edges.iter().all(|e| e.len() == self.uniformity)
    }

    pub fn disjoint(&self, a: u32, b: u32) -> bool {
        !super::sorted_intersect(&self.edges[a as usize], &self.edges[b as usize])
    }

    /// Pairwise disjointness of the given edges.
    pub fn is_matching(&self, set: &[u32]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &a)| set[i + 1..].iter().all(|&b| a != b && self.disjoint(a, b)))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExplicitConflictSystem {
    /// Sorted edge ids per conflict, sorted and deduplicated overall.
    pub conflicts: Vec<Vec<u32>>,
}

impl ExplicitConflictSystem {
    pub fn len(&self) -> usize {
        self.conflicts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conflicts.is_empty()
    }
}

/// An explicit hypergraph with the candidate behind every edge.
#[derive(Clone, Debug)]
pub struct Materialized<C> {
    pub hypergraph: ExplicitHypergraph,
    /// `candidates[e]` is the candidate of edge `e`, sorted.
    pub candidates: Vec<C>,
    vertex_index: HashMap<HVertex, u32>,
}

impl<C: Copy + Ord> Materialized<C> {
    pub fn vertex_id(&self, v: HVertex) -> Option<u32> {
        self.vertex_index.get(&v).copied()
    }

    pub fn edge_id(&self, c: &C) -> Option<u32> {
        self.candidates.binary_search(c).ok().map(|i| i as u32)
    }

    pub fn degree(&self, v: HVertex) -> u64 {
        let Some(id) = self.vertex_id(v) else { return 0 };
        self.hypergraph.edges.iter().filter(|e| e.binary_search(&id).is_ok()).count() as u64
    }
}

/// Lists every candidate as an explicit edge. Refuses when the candidate
/// space exceeds `limit`.
pub fn materialize_hypergraph<I: MatchingInstance>(inst: &I, limit: u64) -> Result<Materialized<I::Candidate>> {
    let size = inst.candidate_space_size();
    if size > limit {
        return Err(Error::TooLarge { size, limit });
    }
    let vertices = inst.hypergraph_vertices();
    let vertex_index: HashMap<HVertex, u32> = vertices.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
    let mut candidates = Vec::with_capacity(size as usize);
    inst.for_each_candidate(&mut |c| candidates.push(c));
    candidates.sort_unstable();
    let mut uniformity = 0;
    let edges = candidates
        .iter()
        .map(|c| {
            let mut e: Vec<u32> = inst
                .piece(c)
                .hyperedge()
                .into_iter()
                .map(|v| *vertex_index.get(&v).expect("piece vertex is a hypergraph vertex"))
                .collect();
            e.sort_unstable();
            uniformity = e.len();
            e
        })
        .collect();
    Ok(Materialized {
        hypergraph: ExplicitHypergraph { vertices, edges, uniformity },
        candidates,
        vertex_index,
    })
}

/// Every set of four pairwise disjoint candidates whose colored edges form a
/// 4-cycle colored `a, b, a, b` with `a != b`.
pub fn enumerate_conflicts<I: MatchingInstance>(inst: &I, mat: &Materialized<I::Candidate>) -> ExplicitConflictSystem {
    let h = &mat.hypergraph;
    let words = h.vertices.len().div_ceil(64);
    let bits: Vec<Vec<u64>> = h
        .edges
        .iter()
        .map(|e| {
            let mut b = vec![0u64; words];
            for &v in e {
                b[v as usize / 64] |= 1 << (v % 64);
            }
            b
        })
        .collect();
    let disjoint = |a: u32, b: u32| {
        bits[a as usize]
            .iter()
            .zip(&bits[b as usize])
            .all(|(x, y)| x & y == 0)
    };

    let mut by_edge: HashMap<(u32, u32, ColorId), Vec<u32>> = HashMap::new();
    for (id, c) in mat.candidates.iter().enumerate() {
        for &(u, v, col) in &inst.piece(c).edges {
            by_edge.entry((u.min(v), u.max(v), col)).or_default().push(id as u32);
        }
    }
    let k1 = inst.stage1_colors();
    let empty: Vec<u32> = Vec::new();
    let lookup = |(u, v): (u32, u32), c: ColorId| by_edge.get(&(u.min(v), u.max(v), c)).unwrap_or(&empty);

    let cycles: Vec<_> = enumerate_four_cycles(&inst.host()).collect();
    let mut conflicts: Vec<Vec<u32>> = cycles
        .par_iter()
        .flat_map_iter(|cy| {
            let e = cy.edges();
            let mut out = Vec::new();
            for a in 1..=k1 {
                let (l0, l2) = (lookup(e[0], a), lookup(e[2], a));
                if l0.is_empty() || l2.is_empty() {
                    continue;
                }
                for b in (1..=k1).filter(|&b| b != a) {
                    let (l1, l3) = (lookup(e[1], b), lookup(e[3], b));
                    if l1.is_empty() || l3.is_empty() {
                        continue;
                    }
                    for &p0 in l0 {
                        for &p2 in l2.iter().filter(|&&p| disjoint(p0, p)) {
                            for &p1 in l1.iter().filter(|&&p| disjoint(p0, p) && disjoint(p2, p)) {
                                for &p3 in l3 {
                                    if disjoint(p0, p3) && disjoint(p2, p3) && disjoint(p1, p3) {
                                        let mut c = vec![p0, p1, p2, p3];
                                        c.sort_unstable();
                                        out.push(c);
                                    }
                                }
                            }
                        }
                    }
                }
            }
            out
        })
        .collect();
    conflicts.sort_unstable();
    conflicts.dedup();
    ExplicitConflictSystem { conflicts }
}

/// Hypergraph and conflict system together.
pub fn materialize<I: MatchingInstance>(
    inst: &I,
    limit: u64,
) -> Result<(Materialized<I::Candidate>, ExplicitConflictSystem)> {
    let mat = materialize_hypergraph(inst, limit)?;
    let conflicts = enumerate_conflicts(inst, &mat);
    Ok((mat, conflicts))
}
