//! Certification of colorings: the `(C_4, 3)` and `(K_4, 5)` conditions,
//! color-class shapes, girth of two-color unions, and the leftover-graph
//! statistics.
//!
//! Everything here reads the coloring only. Scans are split across the first
//! vertex with rayon and merged by taking the lexicographically least
//! violation, so results do not depend on the thread count.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ColorId, ColorMatrix, EdgeColoring, FourCycle, HostGraph, HostKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pattern {
    /// Every 4-cycle receives at least 3 colors.
    C4Q3,
    /// Every `K_4` receives at least 5 colors.
    K4Q5,
}

impl Pattern {
    pub fn required_colors(self) -> usize {
        match self {
            Pattern::C4Q3 => 3,
            Pattern::K4Q5 => 5,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Brute,
    /// Pair-signature bucketing for 4-cycles, `O(n^3)`.
    Signature,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Ok,
    Violation {
        /// Cyclic order for 4-cycles, sorted for cliques.
        vertices: Vec<u32>,
        /// Edge colors in the order of [`FourCycle::edges`] / [`crate::graph::CliqueCopy::edges`];
        /// `null` for uncolored edges.
        colors: Vec<Option<ColorId>>,
        distinct: usize,
    },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

#[inline(always)]
fn distinct4(c: [ColorId; 4]) -> usize {
    let mut count = 0;
    for i in 0..4 {
        if c[i] == 0 || !c[..i].contains(&c[i]) {
            count += 1;
        }
    }
    count
}

#[inline(always)]
fn distinct6(c: [ColorId; 6]) -> usize {
    let mut count = 0;
    for i in 0..6 {
        if c[i] == 0 || !c[..i].contains(&c[i]) {
            count += 1;
        }
    }
    count
}

fn opt(c: ColorId) -> Option<ColorId> {
    (c != 0).then_some(c)
}

fn cycle_violation(m: &ColorMatrix, cycle: FourCycle) -> Verdict {
    let colors: Vec<_> = cycle.edges().iter().map(|&(u, v)| opt(m.get(u, v))).collect();
    Verdict::Violation {
        vertices: cycle.vertices().to_vec(),
        distinct: crate::graph::distinct_with_sentinels(&colors),
        colors,
    }
}

/// Checks that every copy of the pattern receives enough colors.
///
/// Uncolored edges count as distinct fresh colors, so partial colorings can
/// be checked too. Returns the lexicographically least violating copy.
pub fn verify_hq(coloring: &EdgeColoring, pattern: Pattern, mode: Mode) -> Result<Verdict> {
    let host = coloring.host();
    let m = coloring.matrix();
    match (pattern, mode) {
        (Pattern::C4Q3, Mode::Brute) => Ok(c4_brute(&host, &m)
            .map(|cy| cycle_violation(&m, cy))
            .unwrap_or(Verdict::Ok)),
        (Pattern::C4Q3, Mode::Signature) => Ok(c4_signature(&host, &m)
            .map(|cy| cycle_violation(&m, cy))
            .unwrap_or(Verdict::Ok)),
        (Pattern::K4Q5, Mode::Brute) => {
            if host.kind() != HostKind::Complete {
                return Err(Error::Unsupported("K4 pattern needs a complete host".into()));
            }
            Ok(k4_brute(&host, &m)
                .map(|q| {
                    let colors: Vec<_> = q.edges().iter().map(|&(u, v)| opt(m.get(u, v))).collect();
                    Verdict::Violation {
                        vertices: q.0.to_vec(),
                        distinct: crate::graph::distinct_with_sentinels(&colors),
                        colors,
                    }
                })
                .unwrap_or(Verdict::Ok))
        }
        (Pattern::K4Q5, Mode::Signature) => Err(Error::Unsupported(
            "signature mode is defined for 4-cycles only".into(),
        )),
    }
}

/// Least 4-cycle with at most two colors, by exhaustive enumeration.
fn c4_brute(host: &HostGraph, m: &ColorMatrix) -> Option<FourCycle> {
    let n = host.n();
    match host.kind() {
        HostKind::CompleteBipartite => (0..n).into_par_iter().find_map_first(|x| {
            for y in n..2 * n {
                let a = m.get(x, y);
                for x2 in x + 1..n {
                    let b = m.get(y, x2);
                    for y2 in y + 1..2 * n {
                        if distinct4([a, b, m.get(x2, y2), m.get(y2, x)]) < 3 {
                            return Some(FourCycle::from_cyclic([x, y, x2, y2]));
                        }
                    }
                }
            }
            None
        }),
        HostKind::Complete => (0..n).into_par_iter().find_map_first(|a| {
            for b in a + 1..n {
                let ab = m.get(a, b);
                for c in a + 1..n {
                    if c == b {
                        continue;
                    }
                    let bc = m.get(b, c);
                    for d in b + 1..n {
                        if d == c {
                            continue;
                        }
                        if distinct4([ab, bc, m.get(c, d), m.get(d, a)]) < 3 {
                            return Some(FourCycle::from_cyclic([a, b, c, d]));
                        }
                    }
                }
            }
            None
        }),
    }
}

/// Pair-signature scan. For each diagonal pair `{x, x'}` every common
/// neighbor `w` contributes the color pair `{c(xw), c(x'w)}`; two neighbors
/// whose pairs span at most two colors form a bad cycle.
fn c4_signature(host: &HostGraph, m: &ColorMatrix) -> Option<FourCycle> {
    let n = host.n();
    let nv = host.num_vertices() as u32;
    let (diag_hi, bip) = match host.kind() {
        HostKind::CompleteBipartite => (n, true),
        HostKind::Complete => (n, false),
    };
    (0..diag_hi)
        .into_par_iter()
        .filter_map(|x| {
            let mut best: Option<FourCycle> = None;
            for x2 in x + 1..diag_hi {
                let common: Box<dyn Iterator<Item = u32>> = if bip {
                    Box::new(n..nv)
                } else {
                    Box::new((0..n).filter(move |&w| w != x && w != x2))
                };
                if !pair_has_bad_cycle(m, x, x2, common) {
                    continue;
                }
                // Flagged: locate the least bad cycle through this diagonal.
                let ws: Vec<u32> = if bip {
                    (n..nv).collect()
                } else {
                    (0..n).filter(|&w| w != x && w != x2).collect()
                };
                for (i, &w) in ws.iter().enumerate() {
                    for &w2 in &ws[i + 1..] {
                        let cols = [m.get(x, w), m.get(w, x2), m.get(x2, w2), m.get(w2, x)];
                        if distinct4(cols) < 3 {
                            let cy = FourCycle::from_cyclic([x, w, x2, w2]);
                            if best.map_or(true, |b| cy < b) {
                                best = Some(cy);
                            }
                        }
                    }
                }
            }
            best
        })
        .min()
}

fn pair_has_bad_cycle(m: &ColorMatrix, x: u32, x2: u32, common: impl Iterator<Item = u32>) -> bool {
    // mono: color seen as (a, a); half: (a, uncolored); full: {a, b} with a != b.
    let mut mono: Option<ColorId> = None;
    let mut half: Vec<ColorId> = Vec::new();
    let mut full: HashMap<(ColorId, ColorId), ()> = HashMap::new();
    for w in common {
        let (a, b) = (m.get(x, w), m.get(x2, w));
        match (a, b) {
            (0, 0) => {}
            (a, 0) | (0, a) => half.push(a),
            (a, b) if a == b => {
                if mono.is_some() {
                    return true;
                }
                mono = Some(a);
            }
            (a, b) => {
                let key = (a.min(b), a.max(b));
                if full.insert(key, ()).is_some() {
                    return true;
                }
            }
        }
    }
    if let Some(a) = mono {
        if half.contains(&a) || full.keys().any(|&(p, q)| p == a || q == a) {
            return true;
        }
    }
    false
}

fn k4_brute(host: &HostGraph, m: &ColorMatrix) -> Option<crate::graph::CliqueCopy> {
    let n = host.n();
    (0..n).into_par_iter().find_map_first(|a| {
        for b in a + 1..n {
            let ab = m.get(a, b);
            for c in b + 1..n {
                let (ac, bc) = (m.get(a, c), m.get(b, c));
                for d in c + 1..n {
                    let cols = [ab, ac, m.get(a, d), bc, m.get(b, d), m.get(c, d)];
                    if distinct6(cols) < 5 {
                        return Some(crate::graph::CliqueCopy([a, b, c, d]));
                    }
                }
            }
        }
        None
    })
}

// ============================================================================
// Color-class components
// ============================================================================

/// A connected component of one stage-1 color class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub color: ColorId,
    /// Sorted vertex set.
    pub vertices: Vec<u32>,
    pub edges: Vec<(u32, u32)>,
}

impl Component {
    fn degree(&self, v: u32) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    fn joins(&self, u: u32, v: u32) -> bool {
        self.edges
            .iter()
            .any(|&(a, b)| (a == u && b == v) || (a == v && b == u))
    }
}

/// Components of every stage-1 color class, grouped by color (index 0 unused).
pub fn class_components(coloring: &EdgeColoring) -> Vec<Vec<Component>> {
    let k1 = coloring.k1() as usize;
    let mut by_color: Vec<Vec<(u32, u32)>> = vec![Vec::new(); k1 + 1];
    for (u, v, c) in coloring.colored_edges() {
        if coloring.is_stage1(c) {
            by_color[c as usize].push((u, v));
        }
    }
    by_color
        .into_iter()
        .enumerate()
        .map(|(c, edges)| components_of(c as ColorId, edges))
        .collect()
}

fn components_of(color: ColorId, edges: Vec<(u32, u32)>) -> Vec<Component> {
    let mut verts: Vec<u32> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    verts.sort_unstable();
    verts.dedup();
    let idx = |v: u32| verts.binary_search(&v).unwrap();
    let mut parent: Vec<usize> = (0..verts.len()).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for &(a, b) in &edges {
        let (ra, rb) = (find(&mut parent, idx(a)), find(&mut parent, idx(b)));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: HashMap<usize, Component> = HashMap::new();
    for &v in &verts {
        let r = find(&mut parent, idx(v));
        groups
            .entry(r)
            .or_insert_with(|| Component { color, vertices: Vec::new(), edges: Vec::new() })
            .vertices
            .push(v);
    }
    for &(a, b) in &edges {
        let r = find(&mut parent, idx(a));
        groups.get_mut(&r).unwrap().edges.push((a, b));
    }
    let mut out: Vec<Component> = groups.into_values().collect();
    out.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShapeKind {
    /// Vertex-disjoint 3-edge stars.
    BipStars,
    /// Vertex-disjoint edges and 2-edge paths, with the cherry isolation rule.
    K4Cherries,
    /// Vertex-disjoint triangles.
    Triangles,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ShapeReport {
    pub pass: bool,
    pub classes: usize,
    pub components: usize,
    pub cherries_checked: usize,
    /// Number of edges in each stage-1 color class, colors `1..=k1`.
    pub class_sizes: Vec<usize>,
    pub violations: Vec<String>,
}

const MAX_LISTED: usize = 20;

/// Checks the declared component shape of every stage-1 color class.
pub fn verify_class_shapes(coloring: &EdgeColoring, kind: ShapeKind) -> ShapeReport {
    let comps = class_components(coloring);
    let mut report = ShapeReport {
        classes: coloring.k1() as usize,
        ..ShapeReport::default()
    };
    let mut violations = Vec::new();
    for class in comps.iter().skip(1) {
        report.class_sizes.push(class.iter().map(|c| c.edges.len()).sum());
        for comp in class {
            report.components += 1;
            let (nv, ne) = (comp.vertices.len(), comp.edges.len());
            let ok = match kind {
                ShapeKind::BipStars => {
                    ne == 3 && nv == 4 && comp.vertices.iter().any(|&v| comp.degree(v) == 3)
                }
                ShapeKind::K4Cherries => (ne == 1 && nv == 2) || (ne == 2 && nv == 3),
                ShapeKind::Triangles => ne == 3 && nv == 3,
            };
            if !ok {
                violations.push(format!(
                    "color {}: component {:?} with {} edges has the wrong shape",
                    comp.color, comp.vertices, ne
                ));
            }
        }
    }

    if kind == ShapeKind::K4Cherries {
        let m = coloring.matrix();
        let nv = coloring.host().num_vertices() as u32;
        let find_comp = |color: ColorId, v: u32| -> Option<&Component> {
            comps[color as usize]
                .iter()
                .find(|c| c.vertices.binary_search(&v).is_ok())
        };
        for class in comps.iter().skip(1) {
            for comp in class.iter().filter(|c| c.edges.len() == 2 && c.vertices.len() == 3) {
                let mid = *comp.vertices.iter().find(|&&v| comp.degree(v) == 2).unwrap();
                let ends: Vec<u32> = comp.vertices.iter().copied().filter(|&v| v != mid).collect();
                let (x, z) = (ends[0], ends[1]);
                let j = m.get(x, z);
                if !coloring.is_stage1(j) {
                    continue;
                }
                report.cherries_checked += 1;
                if j == comp.color {
                    violations.push(format!("cherry {x}-{mid}-{z} closes a monochromatic triangle"));
                    continue;
                }
                if (0..nv).any(|w| w != mid && m.get(mid, w) == j) {
                    violations.push(format!(
                        "cherry {x}-{mid}-{z} of color {}: middle vertex touches color {j}",
                        comp.color
                    ));
                }
                match find_comp(j, x) {
                    Some(c) if c.edges.len() == 1 => {}
                    _ => violations.push(format!(
                        "cherry {x}-{mid}-{z} of color {}: edge {x}{z} is not an isolated edge of color {j}",
                        comp.color
                    )),
                }
            }
        }
    }

    report.pass = violations.is_empty();
    violations.truncate(MAX_LISTED);
    report.violations = violations;
    report
}

// ============================================================================
// Girth of two-color unions
// ============================================================================

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockKind {
    /// 4-sets spanned by 3-edge stars.
    Stars4,
    /// 3-sets spanned by triangles.
    Triangles3,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GirthReport {
    pub pass: bool,
    pub color_pairs: usize,
    /// Pairs of blocks sharing two or more vertices.
    pub nonlinear_pairs: u64,
    /// Cycles of length 3 or 4 whose consecutive cycle vertices are joined
    /// by an edge of the block they share.
    pub short_cycles: u64,
    /// Block 4-cycles where some block's two cycle vertices are not joined
    /// by one of its edges (two leaves of a star). Reported, not failed.
    pub unwitnessed_four_cycles: u64,
    pub first_violation: Option<String>,
}

struct Block<'a> {
    comp: &'a Component,
}

impl Block<'_> {
    fn contains(&self, v: u32) -> bool {
        self.comp.vertices.binary_search(&v).is_ok()
    }
}

/// Checks, for every pair of stage-1 colors, that the union of their blocks is
/// linear and free of short cycles (lengths 2, 3 and 4).
///
/// A block cycle counts as a violation when each block's two cycle vertices
/// are adjacent inside that block's component, so that the block cycle is a
/// cycle of the coloring itself. For triangle blocks this is every block
/// cycle. For star blocks, cycles through two leaves of a star are counted
/// separately in `unwitnessed_four_cycles`.
pub fn verify_union_girth(coloring: &EdgeColoring, kind: BlockKind) -> GirthReport {
    let comps = class_components(coloring);
    let k1 = coloring.k1();
    let nv = coloring.host().num_vertices();
    let block_size = match kind {
        BlockKind::Stars4 => 4,
        BlockKind::Triangles3 => 3,
    };
    // owner[c][v] = index of the component of color c containing v.
    let owner: Vec<Vec<u32>> = comps
        .iter()
        .map(|class| {
            let mut o = vec![u32::MAX; nv];
            for (i, comp) in class.iter().enumerate() {
                for &v in &comp.vertices {
                    o[v as usize] = i as u32;
                }
            }
            o
        })
        .collect();

    let pairs: Vec<(ColorId, ColorId)> = (1..=k1)
        .flat_map(|i| (i + 1..=k1).map(move |j| (i, j)))
        .collect();

    let partial: Vec<(u64, u64, u64, Option<String>)> = pairs
        .par_iter()
        .map(|&(ci, cj)| {
            let mut nonlinear = 0u64;
            let mut witnessed = 0u64;
            let mut unwitnessed = 0u64;
            let mut first: Option<String> = None;
            let classes = [ci, cj];
            let other = |color_slot: usize, v: u32| -> Option<&Component> {
                let c = classes[1 - color_slot];
                let o = owner[c as usize][v as usize];
                (o != u32::MAX).then(|| &comps[c as usize][o as usize])
            };
            for (slot, &c) in classes.iter().enumerate() {
                for a in &comps[c as usize] {
                    if a.vertices.len() != block_size {
                        continue;
                    }
                    let blk = Block { comp: a };
                    // linearity, counted once from the color-i side
                    if slot == 0 {
                        let mut seen: Vec<*const Component> = Vec::new();
                        for &v in &a.vertices {
                            if let Some(b) = other(0, v) {
                                let p = b as *const Component;
                                if seen.contains(&p) {
                                    continue;
                                }
                                seen.push(p);
                                let shared = b.vertices.iter().filter(|&&w| blk.contains(w)).count();
                                if shared >= 2 {
                                    nonlinear += 1;
                                    first.get_or_insert_with(|| {
                                        format!(
                                            "colors {ci},{cj}: blocks {:?} and {:?} share {shared} vertices",
                                            a.vertices, b.vertices
                                        )
                                    });
                                }
                            }
                        }
                    }
                    // 4-cycles e1(c) e2 e3(c) e4 starting at a with entry v4, exit v1
                    for &v4 in &a.vertices {
                        for &v1 in &a.vertices {
                            if v1 == v4 {
                                continue;
                            }
                            let Some(e2) = other(slot, v1) else { continue };
                            for &v2 in &e2.vertices {
                                if v2 == v1 || v2 == v4 {
                                    continue;
                                }
                                let Some(e3) = comps[c as usize]
                                    .get(owner[c as usize][v2 as usize] as usize)
                                    .filter(|_| owner[c as usize][v2 as usize] != u32::MAX)
                                else {
                                    continue;
                                };
                                if std::ptr::eq(e3, a) {
                                    continue;
                                }
                                for &v3 in &e3.vertices {
                                    if v3 == v2 || v3 == v1 || v3 == v4 {
                                        continue;
                                    }
                                    let Some(e4) = other(slot, v3) else { continue };
                                    if std::ptr::eq(e4, e2) || e4.vertices.binary_search(&v4).is_err() {
                                        continue;
                                    }
                                    let w = a.joins(v4, v1)
                                        && e2.joins(v1, v2)
                                        && e3.joins(v2, v3)
                                        && e4.joins(v3, v4);
                                    if w {
                                        witnessed += 1;
                                        first.get_or_insert_with(|| {
                                            format!(
                                                "colors {ci},{cj}: 4-cycle of blocks {:?} {:?} {:?} {:?} through {v1},{v2},{v3},{v4}",
                                                a.vertices, e2.vertices, e3.vertices, e4.vertices
                                            )
                                        });
                                    } else {
                                        unwitnessed += 1;
                                    }
                                }
                            }
                        }
                    }
                }
            }
            // Each 4-cycle is found from both of its color-ci blocks and both of
            // its color-cj blocks, in both directions.
            (nonlinear, witnessed / 8, unwitnessed / 8, first)
        })
        .collect();

    let mut report = GirthReport {
        color_pairs: pairs.len(),
        ..GirthReport::default()
    };
    for (nl, w, u, f) in partial {
        report.nonlinear_pairs += nl;
        report.short_cycles += w;
        report.unwitnessed_four_cycles += u;
        if report.first_violation.is_none() {
            report.first_violation = f;
        }
    }
    // Within one color blocks are disjoint components, so a cycle of the union
    // alternates colors and has even length: 3-cycles cannot occur.
    report.pass = report.nonlinear_pairs == 0 && report.short_cycles == 0;
    report
}

// ============================================================================
// Leftover-graph statistics
// ============================================================================

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    /// Edges of the leftover graph `L` (uncolored or carrying a stage-2 color).
    pub leftover_edges: usize,
    pub max_deg_l: u32,
    /// Maximum over host edges `xy` of the number of `x'y' ∈ L`, disjoint from
    /// `xy`, with `c(xy') = c(yx')` (bipartite) or `c(xx') = c(yy')`
    /// (complete) a common stage-1 color.
    pub max_crossing: u32,
    pub colors_used: usize,
    pub stage1_colors_used: usize,
    pub stage2_colors_used: usize,
    /// Indexed like [`HostGraph::edge_index`].
    #[serde(skip)]
    pub crossing: Vec<u32>,
    #[serde(skip)]
    pub degrees_l: Vec<u32>,
}

/// Exact leftover and crossing statistics of a (partial or complete) coloring.
pub fn measure_properties(coloring: &EdgeColoring) -> PropertyReport {
    let host = coloring.host();
    let nv = host.num_vertices();
    let in_l = |u: u32, v: u32| match coloring.get(u, v) {
        None => true,
        Some(c) => !coloring.is_stage1(c),
    };

    let mut degrees_l = vec![0u32; nv];
    let mut leftover = 0;
    for (u, v) in host.edges() {
        if in_l(u, v) {
            leftover += 1;
            degrees_l[u as usize] += 1;
            degrees_l[v as usize] += 1;
        }
    }

    // stage-1 neighbors of each vertex, sorted by color
    let mut by_color: Vec<Vec<(ColorId, u32)>> = vec![Vec::new(); nv];
    for (u, v, c) in coloring.colored_edges() {
        if coloring.is_stage1(c) {
            by_color[u as usize].push((c, v));
            by_color[v as usize].push((c, u));
        }
    }
    for l in by_color.iter_mut() {
        l.sort_unstable();
    }

    let edges: Vec<(u32, u32)> = host.edges().collect();
    let bip = host.is_bipartite();
    let crossing: Vec<u32> = edges
        .par_iter()
        .map(|&(x, y)| {
            let mut hits: Vec<(u32, u32)> = Vec::new();
            let (lx, ly) = (&by_color[x as usize], &by_color[y as usize]);
            let (mut i, mut j) = (0, 0);
            while i < lx.len() && j < ly.len() {
                let (ci, cj) = (lx[i].0, ly[j].0);
                if ci < cj {
                    i += 1;
                } else if cj < ci {
                    j += 1;
                } else {
                    let ie = lx[i..].iter().take_while(|e| e.0 == ci).count();
                    let je = ly[j..].iter().take_while(|e| e.0 == ci).count();
                    for &(_, a) in &lx[i..i + ie] {
                        for &(_, b) in &ly[j..j + je] {
                            // x–a and y–b share a color; candidate L-edge is a–b,
                            // with a playing y' and b playing x' in the bipartite case.
                            if a == b || a == y || b == x || a == x || b == y {
                                continue;
                            }
                            if host.is_edge(a, b) && in_l(a, b) {
                                hits.push((a.min(b), a.max(b)));
                            }
                        }
                    }
                    i += ie;
                    j += je;
                }
            }
            if !bip {
                hits.sort_unstable();
                hits.dedup();
            }
            hits.len() as u32
        })
        .collect();

    let stage1: std::collections::BTreeSet<ColorId> = coloring
        .colored_edges()
        .map(|e| e.2)
        .filter(|&c| coloring.is_stage1(c))
        .collect();
    let colors_used = coloring.distinct_colors();
    PropertyReport {
        leftover_edges: leftover,
        max_deg_l: degrees_l.iter().copied().max().unwrap_or(0),
        max_crossing: crossing.iter().copied().max().unwrap_or(0),
        colors_used,
        stage1_colors_used: stage1.len(),
        stage2_colors_used: colors_used - stage1.len(),
        crossing,
        degrees_l,
    }
}
