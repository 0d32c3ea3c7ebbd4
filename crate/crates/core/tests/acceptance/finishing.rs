use gramsey_core::encode::{BipartiteStars, Triangles};
use gramsey_core::lll::{build_events, focused_search, moser_tardos, LllInstance, MtOutcome};
use gramsey_core::matching::{run_random_greedy, MatchingInstance, StopPolicy};
use gramsey_core::verify::{verify_hq, Mode, Pattern};
use gramsey_core::EdgeColoring;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub(crate) fn stage1(bip: bool, n: u32, seed: u64) -> EdgeColoring {
    if bip {
        let inst = BipartiteStars::build(n, 0).unwrap();
        run_random_greedy(&inst, seed, &StopPolicy::default(), &mut []).0.coloring(inst.host())
    } else {
        let inst = Triangles::build(n, 0).unwrap();
        run_random_greedy(&inst, seed, &StopPolicy::default(), &mut []).0.coloring(inst.host())
    }
}

fn is_proper(edges: &[(u32, u32)], colors: &[u32]) -> bool {
    for (i, &(a, b)) in edges.iter().enumerate() {
        for (j, &(c, d)) in edges.iter().enumerate().skip(i + 1) {
            if colors[i] == colors[j] && (a == c || a == d || b == c || b == d) {
                return false;
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Over a conflict-free first stage, a leftover assignment violates no
    /// event exactly when it is proper and every 4-cycle of the full coloring
    /// has 3 colors.
    #[test]
    fn events_capture_every_bad_cycle(seed in any::<u64>(), n in 6u32..10, bip in any::<bool>(), k2 in 2u32..6) {
        let s1 = stage1(bip, n, seed);
        let inst = LllInstance::from_coloring(&s1);
        let index = build_events(&inst);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let colors: Vec<u32> = (0..inst.num_edges()).map(|_| rng.gen_range(0..k2)).collect();
        let full = inst.apply(&colors, k2).unwrap();
        let ok = verify_hq(&full, Pattern::C4Q3, Mode::Brute).unwrap().is_ok();
        prop_assert_eq!(index.violated(&colors).is_empty(), ok && is_proper(inst.edges(), &colors));
    }

    #[test]
    fn successful_finish_rescans_clean(seed in any::<u64>(), n in 6u32..10, bip in any::<bool>()) {
        let s1 = stage1(bip, n, seed);
        let inst = LllInstance::from_coloring(&s1);
        let index = build_events(&inst);
        let k2 = 3 * inst.max_degree().max(1);
        for outcome in [
            moser_tardos(&inst, &index, k2, seed, 1_000_000).unwrap(),
            focused_search(&inst, &index, k2, seed, 1_000_000, 0.05).unwrap(),
        ] {
            match outcome {
                MtOutcome::Success { assignment, log } => {
                    prop_assert!(log.success);
                    prop_assert!(index.violated(&assignment).is_empty());
                    let full = inst.apply(&assignment, k2).unwrap();
                    prop_assert!(full.is_complete());
                    prop_assert!(verify_hq(&full, Pattern::C4Q3, Mode::Brute).unwrap().is_ok());
                }
                MtOutcome::Failure(log) => prop_assert!(false, "no success at k2 = {}: {:?}", k2, log.remaining_violations),
            }
        }
    }
}

#[test]
fn event_oracle_sees_both_outcomes() {
    let (mut clean, mut dirty) = (0, 0);
    for seed in 0..200u64 {
        let s1 = stage1(seed % 2 == 0, 6 + (seed % 3) as u32, seed);
        let inst = LllInstance::from_coloring(&s1);
        let index = build_events(&inst);
        let k2 = 2 + (seed % 8) as u32;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let colors: Vec<u32> = (0..inst.num_edges()).map(|_| rng.gen_range(0..k2)).collect();
        let ok = verify_hq(&inst.apply(&colors, k2).unwrap(), Pattern::C4Q3, Mode::Brute).unwrap().is_ok()
            && is_proper(inst.edges(), &colors);
        assert_eq!(index.violated(&colors).is_empty(), ok, "seed {seed}");
        if ok {
            clean += 1;
        } else {
            dirty += 1;
        }
    }
    assert!(clean > 0 && dirty > 0, "{clean} {dirty}");
}

