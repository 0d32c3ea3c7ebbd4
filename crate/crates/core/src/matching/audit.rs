//! Boundedness and trackability audits on materialized instances.
//!
//! Only conflict sizes and the matching property are absolute checks. The
//! degree, codegree and weight conditions are asymptotic, so at small `n`
//! they are reported with measured values, bounds and margins.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::explicit::{ExplicitConflictSystem, ExplicitHypergraph, Materialized};
use super::TrackedFunctional;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditParams {
    pub d: f64,
    pub ell: usize,
    pub eps: f64,
}

impl AuditParams {
    pub fn new(d: f64, ell: usize) -> Self {
        AuditParams { d, ell, eps: 0.2 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    /// The condition quantifies over an empty set.
    Vacuous,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub bound: f64,
    pub outcome: Outcome,
    /// Failing an absolute check invalidates the instance; other checks are
    /// asymptotic and reported only.
    pub absolute: bool,
}

impl Check {
    fn upper(name: impl Into<String>, measured: f64, bound: f64, absolute: bool) -> Self {
        Check {
            name: name.into(),
            measured,
            bound,
            outcome: if measured <= bound { Outcome::Pass } else { Outcome::Fail },
            absolute,
        }
    }

    fn lower(name: impl Into<String>, measured: f64, bound: f64, absolute: bool) -> Self {
        Check {
            name: name.into(),
            measured,
            bound,
            outcome: if measured >= bound { Outcome::Pass } else { Outcome::Fail },
            absolute,
        }
    }

    fn vacuous(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            measured: 0.0,
            bound: 0.0,
            outcome: Outcome::Vacuous,
            absolute: false,
        }
    }

    pub fn passed(&self) -> bool {
        self.outcome != Outcome::Fail
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub checks: Vec<Check>,
}

impl AuditReport {
    /// All absolute checks pass.
    pub fn absolute_pass(&self) -> bool {
        self.checks.iter().filter(|c| c.absolute).all(Check::passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Maximum, over `j'`-subsets of `j`-conflicts, of the number of conflicts
/// containing the subset.
fn max_subset_degree(conflicts: &[&Vec<u32>], jp: usize) -> u64 {
    let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
    for c in conflicts {
        for sub in c.iter().copied().combinations(jp) {
            *counts.entry(sub).or_default() += 1;
        }
    }
    counts.into_values().max().unwrap_or(0)
}

/// Regularity window, conflict sizes, matching property and the degree and
/// codegree conditions of the conflict system.
pub fn audit_boundedness(h: &ExplicitHypergraph, c: &ExplicitConflictSystem, p: &AuditParams) -> AuditReport {
    let mut checks = Vec::new();
    let d = p.d;
    let deg = h.degrees();
    let (min_deg, max_deg) = (
        deg.iter().copied().min().unwrap_or(0) as f64,
        deg.iter().copied().max().unwrap_or(0) as f64,
    );
    checks.push(Check::lower("min_degree", min_deg, (1.0 - d.powf(-p.eps)) * d, false));
    checks.push(Check::upper("max_degree", max_deg, d, false));
    checks.push(Check::upper("max_codegree", h.max_codegree() as f64, d.powf(1.0 - p.eps), false));

    let sizes_ok = c.conflicts.iter().all(|x| (3..=p.ell).contains(&x.len()));
    let worst = c
        .conflicts
        .iter()
        .map(|x| x.len())
        .find(|l| !(3..=p.ell).contains(l))
        .unwrap_or(p.ell);
    checks.push(Check {
        name: "conflict_sizes".into(),
        measured: worst as f64,
        bound: p.ell as f64,
        outcome: if sizes_ok { Outcome::Pass } else { Outcome::Fail },
        absolute: true,
    });
    let non_matchings = c.conflicts.iter().filter(|x| !h.is_matching(x)).count();
    checks.push(Check::upper("conflicts_are_matchings", non_matchings as f64, 0.0, true));

    for j in 3..=p.ell {
        let of_size: Vec<&Vec<u32>> = c.conflicts.iter().filter(|x| x.len() == j).collect();
        let name = format!("conflict_degree_{j}");
        if of_size.is_empty() {
            checks.push(Check::vacuous(name));
            continue;
        }
        checks.push(Check::upper(
            name,
            max_subset_degree(&of_size, 1) as f64,
            p.ell as f64 * d.powi(j as i32 - 1),
            false,
        ));
        for jp in 2..j {
            checks.push(Check::upper(
                format!("conflict_codegree_{j}_{jp}"),
                max_subset_degree(&of_size, jp) as f64,
                d.powf((j - jp) as f64 - p.eps),
                false,
            ));
        }
    }
    AuditReport { checks }
}

/// The four trackability conditions for a test function of uniformity at
/// most 2.
pub fn audit_trackability<C: Copy + Ord>(
    mat: &Materialized<C>,
    c: &ExplicitConflictSystem,
    w: &TrackedFunctional<C>,
    p: &AuditParams,
) -> AuditReport {
    let h = &mat.hypergraph;
    let f = w.function();
    let j = w.uniformity();
    assert!((1..=2).contains(&j), "trackability audits support uniformity 1 and 2");
    let d = p.d;
    let support: Vec<u32> = (0..mat.candidates.len() as u32)
        .filter(|&e| f.supports(&mat.candidates[e as usize]))
        .collect();

    // positive-weight sets
    let mut weighted: Vec<(Vec<u32>, u64)> = Vec::new();
    if j == 1 {
        for &e in &support {
            let wt = f.weight(&[mat.candidates[e as usize]]);
            if wt > 0 {
                weighted.push((vec![e], wt));
            }
        }
    } else {
        for (i, &a) in support.iter().enumerate() {
            for &b in &support[i + 1..] {
                if !h.disjoint(a, b) {
                    continue;
                }
                let wt = f.weight(&[mat.candidates[a as usize], mat.candidates[b as usize]]);
                if wt > 0 {
                    weighted.push((vec![a, b], wt));
                }
            }
        }
    }
    let total: u64 = weighted.iter().map(|x| x.1).sum();
    let mut checks = vec![Check::lower(
        format!("{}:w1_size", w.name()),
        total as f64,
        d.powf(j as f64 + p.eps),
        false,
    )];

    if j == 1 {
        for name in ["w2_degrees", "w3_neighborhood", "w4_conflict_free"] {
            checks.push(Check::vacuous(format!("{}:{name}", w.name())));
        }
        return AuditReport { checks };
    }

    // W2 with j' = 1
    let mut by_edge: HashMap<u32, u64> = HashMap::new();
    for (set, wt) in &weighted {
        for &e in set {
            *by_edge.entry(e).or_default() += wt;
        }
    }
    checks.push(Check::upper(
        format!("{}:w2_degrees", w.name()),
        by_edge.values().copied().max().unwrap_or(0) as f64,
        total as f64 / d.powf(1.0 + p.eps),
        false,
    ));

    // W3 over pairs of positive weight, for every link size present
    let mut links: HashMap<u32, HashSet<Vec<u32>>> = HashMap::new();
    let members: HashSet<u32> = weighted.iter().flat_map(|x| x.0.iter().copied()).collect();
    for conflict in &c.conflicts {
        for &e in conflict.iter().filter(|e| members.contains(e)) {
            let rest: Vec<u32> = conflict.iter().copied().filter(|&x| x != e).collect();
            links.entry(e).or_default().insert(rest);
        }
    }
    let mut worst: HashMap<usize, u64> = HashMap::new();
    for (set, _) in &weighted {
        let (Some(la), Some(lb)) = (links.get(&set[0]), links.get(&set[1])) else { continue };
        let mut common: HashMap<usize, u64> = HashMap::new();
        for l in la.intersection(lb) {
            *common.entry(l.len()).or_default() += 1;
        }
        for (len, cnt) in common {
            let e = worst.entry(len).or_default();
            *e = (*e).max(cnt);
        }
    }
    if c.conflicts.is_empty() {
        checks.push(Check::vacuous(format!("{}:w3_neighborhood", w.name())));
    } else {
        for jp in 1..p.ell {
            checks.push(Check::upper(
                format!("{}:w3_neighborhood_{jp}", w.name()),
                worst.get(&jp).copied().unwrap_or(0) as f64,
                d.powf(jp as f64 - p.eps),
                false,
            ));
        }
    }

    // W4: a j-set with j < 3 contains no conflict
    let smallest = c.conflicts.iter().map(|x| x.len()).min().unwrap_or(usize::MAX);
    if j < smallest {
        checks.push(Check::vacuous(format!("{}:w4_conflict_free", w.name())));
    } else {
        let bad = weighted
            .iter()
            .filter(|(set, _)| c.conflicts.binary_search(set).is_ok())
            .count();
        checks.push(Check::upper(format!("{}:w4_conflict_free", w.name()), bad as f64, 0.0, true));
    }
    AuditReport { checks }
}

/// Total weight `w(H)` over all `j`-sets of the materialized hypergraph.
pub fn total_weight<C: Copy + Ord>(mat: &Materialized<C>, w: &TrackedFunctional<C>) -> u64 {
    let report = audit_trackability(mat, &ExplicitConflictSystem::default(), w, &AuditParams::new(1.0, 4));
    report.checks[0].measured as u64
}
