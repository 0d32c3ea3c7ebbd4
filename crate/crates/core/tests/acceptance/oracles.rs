use std::collections::HashMap;

use gramsey_core::encode::bipartite::{SameColorPairIndicator, StarVertexCoverage};
use gramsey_core::encode::{BipartiteStars, CherryTriangles, K4Params, Triangles};
use gramsey_core::graph::{enumerate_cliques, enumerate_four_cycles, ColorId, EdgeColoring, HostGraph};
use gramsey_core::matching::audit::total_weight;
use gramsey_core::matching::explicit::{materialize, materialize_hypergraph};
use gramsey_core::matching::{run_random_greedy, MatchingInstance, StopPolicy, TrackedFunctional};
use gramsey_core::verify::{verify_hq, verify_union_girth, BlockKind, Mode, Pattern, Verdict};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Colors of a symmetric table; `0` is uncolored.
pub(crate) fn table(nv: usize, edges: impl IntoIterator<Item = (u32, u32, ColorId)>) -> Vec<Vec<ColorId>> {
    let mut t = vec![vec![0; nv]; nv];
    for (u, v, c) in edges {
        t[u as usize][v as usize] = c;
        t[v as usize][u as usize] = c;
    }
    t
}

/// Any cycle `a b c d` with `ab, cd` of one color and `bc, da` of another,
/// found by scanning all ordered 4-tuples of distinct vertices.
pub(crate) fn has_alternating_c4(t: &[Vec<ColorId>]) -> bool {
    let nv = t.len();
    for a in 0..nv {
        for b in 0..nv {
            let x = t[a][b];
            if b == a || x == 0 {
                continue;
            }
            for c in 0..nv {
                let y = t[b][c];
                if c == a || c == b || y == 0 || y == x {
                    continue;
                }
                for d in 0..nv {
                    if d != a && d != b && d != c && t[c][d] == x && t[d][a] == y {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Drives random incremental states and compares `creates_conflict` with the
/// brute-force oracle on every probe. Returns (probes, positives).
pub(crate) fn conflict_equivalence<I: MatchingInstance>(inst: &I, states: u64, probes_per_state: usize) -> (u64, u64) {
    let nv = inst.host().num_vertices();
    let (mut probes, mut positives) = (0u64, 0u64);
    for seed in 0..states {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state = inst.new_state();
        let steps = rng.gen_range(1..40);
        for _ in 0..steps {
            let c = inst.sample_candidate(&mut rng);
            if inst.is_available(&c, &state) && !inst.creates_conflict(&c, &state) {
                inst.apply(c, &mut state);
            }
        }
        let base: Vec<_> = state.coloring(inst.host()).colored_edges().collect();
        let mut seen = 0;
        while seen < probes_per_state {
            let c = inst.sample_candidate(&mut rng);
            if !inst.is_available(&c, &state) {
                continue;
            }
            seen += 1;
            let t = table(nv, base.iter().copied().chain(inst.describe(&c)));
            let oracle = has_alternating_c4(&t);
            assert_eq!(inst.creates_conflict(&c, &state), oracle, "seed {seed}, candidate {c:?}");
            probes += 1;
            positives += oracle as u64;
        }
    }
    (probes, positives)
}

#[test]
fn triangle_and_cherry_degrees_match_enumeration() {
    for n in [6, 8] {
        let inst = Triangles::build(n, 0).unwrap();
        let mat = materialize_hypergraph(&inst, 1 << 20).unwrap();
        for (v, d) in mat.hypergraph.vertices.iter().zip(mat.hypergraph.degrees()) {
            assert_eq!(d, inst.degree_formula(*v));
        }
    }
    let inst = CherryTriangles::build(K4Params::new(9, 0.5, 1)).unwrap();
    let mat = materialize_hypergraph(&inst, 1 << 20).unwrap();
    assert_eq!(mat.candidates.len() as u64, inst.candidate_space_size());
    for (v, d) in mat.hypergraph.vertices.iter().zip(mat.hypergraph.degrees()) {
        assert_eq!(d, inst.degree(*v));
    }
}

#[test]
fn same_color_pair_count() {
    // n = 8: 6 colors, C(7,3)^2 ordered star pairs per color.
    let inst = BipartiteStars::build(8, 0).unwrap();
    let mat = materialize_hypergraph(&inst, 1 << 20).unwrap();
    let w = TrackedFunctional::new(Box::new(SameColorPairIndicator { n: 8, x: 0, y: 8, x_hits: 1, y_hits: 1 }));
    assert_eq!(total_weight(&mat, &w), 7350);
    let cover = TrackedFunctional::new(Box::new(StarVertexCoverage { v: 3 }));
    // 3 per star centered at 3, 1 per star with leaf 3.
    assert_eq!(total_weight(&mat, &cover), 6 * (3 * 56 + 8 * 21));
}

fn accepted_ids<I: MatchingInstance>(
    inst: &I,
    limit: u64,
    seed: u64,
) -> (Vec<u32>, gramsey_core::matching::explicit::ExplicitConflictSystem) {
    let (mat, conflicts) = materialize(inst, limit).unwrap();
    let (state, _) = run_random_greedy(inst, seed, &StopPolicy::default(), &mut []);
    let mut ids: Vec<u32> = state.accepted().iter().map(|c| mat.edge_id(c).unwrap()).collect();
    ids.sort_unstable();
    assert!(mat.hypergraph.is_matching(&ids));
    (ids, conflicts)
}

#[test]
fn greedy_output_contains_no_materialized_conflict() {
    for seed in 0..3 {
        let (ids, conflicts) = accepted_ids(&BipartiteStars::build(6, 0).unwrap(), 1 << 20, seed);
        for c in &conflicts.conflicts {
            assert!(!c.iter().all(|e| ids.binary_search(e).is_ok()));
        }
        let (ids, conflicts) = accepted_ids(&Triangles::build(8, 0).unwrap(), 1 << 20, seed);
        for c in &conflicts.conflicts {
            assert!(!c.iter().all(|e| ids.binary_search(e).is_ok()));
        }
    }
}

#[test]
fn four_cycle_and_clique_counts() {
    let choose2 = |n: usize| n * (n - 1) / 2;
    for n in 4..9u32 {
        let bip = HostGraph::bipartite(n).unwrap();
        assert_eq!(enumerate_four_cycles(&bip).count(), choose2(n as usize).pow(2));
        let k = HostGraph::complete(n).unwrap();
        let c4 = (n * (n - 1) * (n - 2) * (n - 3) / 24) as usize;
        assert_eq!(enumerate_four_cycles(&k).count(), 3 * c4);
        assert_eq!(enumerate_cliques(n).count(), c4);
    }
}

fn random_coloring(host: HostGraph, colors: u32, density: f64, rng: &mut ChaCha8Rng) -> EdgeColoring {
    let mut c = EdgeColoring::new(host, colors, 0);
    let edges: Vec<_> = host.edges().collect();
    for (u, v) in edges {
        if rng.gen_bool(density) {
            c.set(u, v, rng.gen_range(1..=colors)).unwrap();
        }
    }
    c
}

fn violates(v: &Verdict) -> bool {
    !v.is_ok()
}

/// Every 4-cycle has at least 3 colors, by direct definition.
fn brute_c4_ok(c: &EdgeColoring) -> bool {
    let host = c.host();
    enumerate_four_cycles(&host).all(|cy| gramsey_core::graph::colors_on_cycle(c, &cy) >= 3)
}

#[test]
fn brute_and_signature_agree_on_random_colorings() {
    let host = HostGraph::bipartite(8).unwrap();
    let mut bad = 0;
    for seed in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let density = [1.0, 0.9, 0.6][seed as usize % 3];
        let c = random_coloring(host, 3 + (seed % 20) as u32, density, &mut rng);
        let b = verify_hq(&c, Pattern::C4Q3, Mode::Brute).unwrap();
        let s = verify_hq(&c, Pattern::C4Q3, Mode::Signature).unwrap();
        assert_eq!(b, s, "seed {seed}");
        assert_eq!(b.is_ok(), brute_c4_ok(&c), "seed {seed}");
        bad += violates(&b) as u32;
    }
    assert!(bad > 0 && bad < 100, "{bad}");
}

#[test]
fn k4_verdict_matches_definition() {
    let host = HostGraph::complete(7).unwrap();
    for seed in 0..30 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_coloring(host, 6 + seed as u32 % 6, 1.0, &mut rng);
        let v = verify_hq(&c, Pattern::K4Q5, Mode::Brute).unwrap();
        let direct = enumerate_cliques(7).all(|q| {
            let cols: Vec<_> = q.edges().iter().map(|&(a, b)| c.get(a, b)).collect();
            gramsey_core::graph::distinct_with_sentinels(&cols) >= 5
        });
        assert_eq!(v.is_ok(), direct);
    }
}

/// Random triangle packing with no conflict check, each color class a set of
/// vertex-disjoint triangles.
fn unchecked_triangles(n: u32, seed: u64) -> EdgeColoring {
    let inst = Triangles::build(n, 0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = inst.new_state();
    for _ in 0..200 {
        let c = inst.sample_candidate(&mut rng);
        if inst.is_available(&c, &state) {
            inst.apply(c, &mut state);
        }
    }
    state.coloring(inst.host())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verdict_is_invariant_under_renaming(seed in any::<u64>(), colors in 3u32..8) {
        let host = HostGraph::bipartite(6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_coloring(host, colors, 0.9, &mut rng);
        let mut xs: Vec<u32> = (0..6).collect();
        let mut ys: Vec<u32> = (6..12).collect();
        let mut palette: Vec<u32> = (1..=colors).collect();
        xs.shuffle(&mut rng);
        ys.shuffle(&mut rng);
        palette.shuffle(&mut rng);
        let map = |v: u32| if v < 6 { xs[v as usize] } else { ys[v as usize - 6] };
        // swapping sides as well
        let flip = rng.gen_bool(0.5);
        let side = |v: u32| if flip { (v + 6) % 12 } else { v };
        let mut r = EdgeColoring::new(host, colors, 0);
        for (u, v, col) in c.colored_edges() {
            r.set(side(map(u)), side(map(v)), palette[col as usize - 1]).unwrap();
        }
        let a = verify_hq(&c, Pattern::C4Q3, Mode::Brute).unwrap();
        let b = verify_hq(&r, Pattern::C4Q3, Mode::Signature).unwrap();
        prop_assert_eq!(a.is_ok(), b.is_ok());
    }

    #[test]
    fn triangle_girth_iff_no_alternating_cycle(seed in any::<u64>(), n in 6u32..11) {
        let c = unchecked_triangles(n, seed);
        let nv = c.host().num_vertices();
        let girth = verify_union_girth(&c, BlockKind::Triangles3);
        prop_assert_eq!(girth.nonlinear_pairs, 0);
        prop_assert_eq!(girth.pass, !has_alternating_c4(&table(nv, c.colored_edges())));
    }

    #[test]
    fn coloring_file_round_trips(seed in any::<u64>(), n in 4u32..9, bip in any::<bool>(), k2 in 0u32..4) {
        let host = if bip { HostGraph::bipartite(n).unwrap() } else { HostGraph::complete(n).unwrap() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut c = random_coloring(host, 4, 0.7, &mut rng);
        c.set_k2(k2);
        let text = c.to_file_string();
        let back = EdgeColoring::from_file_str(&text).unwrap();
        prop_assert_eq!(back.to_file_string(), text);
        prop_assert_eq!(back.k2(), k2);
    }

    #[test]
    fn engine_state_is_consistent_matching(seed in any::<u64>(), n in 6u32..10) {
        let inst = BipartiteStars::build(n, 0).unwrap();
        let (state, stats) = run_random_greedy(&inst, seed, &StopPolicy::default(), &mut []);
        prop_assert!(gramsey_core::matching::occupancy_is_consistent(&inst, &state));
        prop_assert_eq!(stats.accepted as usize, state.len());
        let c = state.coloring(inst.host());
        prop_assert!(!has_alternating_c4(&table(c.host().num_vertices(), c.colored_edges())));
        prop_assert!(verify_union_girth(&c, BlockKind::Stars4).pass);
        // no two same-colored stars share a vertex
        let mut owner: HashMap<(u32, ColorId), usize> = HashMap::new();
        for (i, cand) in state.accepted().iter().enumerate() {
            for v in cand.vertices() {
                prop_assert!(owner.insert((v, cand.color), i).is_none());
            }
        }
    }
}
