//! Host graphs (`K_{n,n}` and `K_n`), partial edge colorings, 4-cycle and
//! 4-clique enumeration, and the plain-text coloring file format.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Color identifier. Stage-1 colors are `1..=k1`, stage-2 colors are
/// `k1+1..=k1+k2`. `0` is never a valid color.
pub type ColorId = u32;

// ============================================================================
// HostGraph
// ============================================================================

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HostKind {
    /// `K_{n,n}` with `X = 0..n` and `Y = n..2n`.
    CompleteBipartite,
    /// `K_n` on `0..n`.
    Complete,
}

impl HostKind {
    pub fn tag(self) -> &'static str {
        match self {
            HostKind::CompleteBipartite => "bip",
            HostKind::Complete => "complete",
        }
    }
}

impl FromStr for HostKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bip" => Ok(HostKind::CompleteBipartite),
            "complete" => Ok(HostKind::Complete),
            other => Err(Error::InvalidHost(format!("unknown host kind `{other}`"))),
        }
    }
}

/// Target graph. `n` is the part size for the bipartite host and the vertex
/// count for the complete host.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HostGraph {
    kind: HostKind,
    n: u32,
}

impl HostGraph {
    pub const MIN_N: u32 = 4;

    pub fn new(kind: HostKind, n: u32) -> Result<Self> {
        if n < Self::MIN_N {
            return Err(Error::InvalidHost(format!(
                "n = {n} is below the minimum of {}",
                Self::MIN_N
            )));
        }
        Ok(HostGraph { kind, n })
    }

    pub fn bipartite(n: u32) -> Result<Self> {
        Self::new(HostKind::CompleteBipartite, n)
    }

    pub fn complete(n: u32) -> Result<Self> {
        Self::new(HostKind::Complete, n)
    }

    pub fn kind(&self) -> HostKind {
        self.kind
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_bipartite(&self) -> bool {
        self.kind == HostKind::CompleteBipartite
    }

    pub fn num_vertices(&self) -> usize {
        match self.kind {
            HostKind::CompleteBipartite => 2 * self.n as usize,
            HostKind::Complete => self.n as usize,
        }
    }

    pub fn num_edges(&self) -> usize {
        let n = self.n as usize;
        match self.kind {
            HostKind::CompleteBipartite => n * n,
            HostKind::Complete => n * (n - 1) / 2,
        }
    }

    /// `true` for vertices of the part `X` (always `false` for `K_n`).
    #[inline]
    pub fn in_x(&self, v: u32) -> bool {
        self.is_bipartite() && v < self.n
    }

    #[inline]
    pub fn is_edge(&self, u: u32, v: u32) -> bool {
        let nv = self.num_vertices() as u32;
        if u == v || u >= nv || v >= nv {
            return false;
        }
        match self.kind {
            HostKind::CompleteBipartite => (u < self.n) != (v < self.n),
            HostKind::Complete => true,
        }
    }

    /// Dense index of the canonical edge `{u, v}`, in `(u, v)`-sorted order.
    #[inline]
    pub fn edge_index(&self, u: u32, v: u32) -> Option<usize> {
        if !self.is_edge(u, v) {
            return None;
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        let n = self.n as usize;
        let (a, b) = (a as usize, b as usize);
        Some(match self.kind {
            HostKind::CompleteBipartite => a * n + (b - n),
            HostKind::Complete => a * (2 * n - a - 1) / 2 + (b - a - 1),
        })
    }

    /// Inverse of [`HostGraph::edge_index`].
    pub fn edge_at(&self, idx: usize) -> (u32, u32) {
        let n = self.n as usize;
        match self.kind {
            HostKind::CompleteBipartite => ((idx / n) as u32, (n + idx % n) as u32),
            HostKind::Complete => {
                let mut a = 0usize;
                let mut start = 0usize;
                loop {
                    let row = n - a - 1;
                    if idx < start + row {
                        return (a as u32, (a + 1 + idx - start) as u32);
                    }
                    start += row;
                    a += 1;
                }
            }
        }
    }

    /// All edges as canonical `(u, v)` pairs with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let nv = self.num_vertices() as u32;
        (0..nv).flat_map(move |u| {
            (u + 1..nv)
                .filter(move |&v| self.is_edge(u, v))
                .map(move |v| (u, v))
        })
    }

    /// Vertices adjacent to `v`.
    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = u32> + '_ {
        let nv = self.num_vertices() as u32;
        (0..nv).filter(move |&u| self.is_edge(u, v))
    }
}

impl fmt::Display for HostGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            HostKind::CompleteBipartite => write!(f, "K_{{{},{}}}", self.n, self.n),
            HostKind::Complete => write!(f, "K_{}", self.n),
        }
    }
}

// ============================================================================
// EdgeColoring
// ============================================================================

/// Partial edge coloring of a host graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    host: HostGraph,
    colors: Vec<ColorId>,
    k1: u32,
    k2: u32,
}

impl EdgeColoring {
    pub fn new(host: HostGraph, k1: u32, k2: u32) -> Self {
        EdgeColoring {
            host,
            colors: vec![0; host.num_edges()],
            k1,
            k2,
        }
    }

    pub fn host(&self) -> HostGraph {
        self.host
    }

    pub fn k1(&self) -> u32 {
        self.k1
    }

    pub fn k2(&self) -> u32 {
        self.k2
    }

    pub fn palette_size(&self) -> u32 {
        self.k1 + self.k2
    }

    pub fn set_k2(&mut self, k2: u32) {
        self.k2 = k2;
    }

    #[inline]
    pub fn get(&self, u: u32, v: u32) -> Option<ColorId> {
        let idx = self.host.edge_index(u, v)?;
        match self.colors[idx] {
            0 => None,
            c => Some(c),
        }
    }

    pub fn set(&mut self, u: u32, v: u32, color: ColorId) -> Result<()> {
        let idx = self.host.edge_index(u, v).ok_or(Error::NotAnEdge(u, v))?;
        if color == 0 || color > self.palette_size() {
            return Err(Error::InvalidParameter(format!(
                "color {color} outside palette 1..={}",
                self.palette_size()
            )));
        }
        self.colors[idx] = color;
        Ok(())
    }

    pub fn clear(&mut self, u: u32, v: u32) -> Result<()> {
        let idx = self.host.edge_index(u, v).ok_or(Error::NotAnEdge(u, v))?;
        self.colors[idx] = 0;
        Ok(())
    }

    pub fn is_stage1(&self, c: ColorId) -> bool {
        c >= 1 && c <= self.k1
    }

    pub fn is_complete(&self) -> bool {
        self.colors.iter().all(|&c| c != 0)
    }

    pub fn num_colored(&self) -> usize {
        self.colors.iter().filter(|&&c| c != 0).count()
    }

    /// Colored edges `(u, v, c)` sorted by `(u, v)`.
    pub fn colored_edges(&self) -> impl Iterator<Item = (u32, u32, ColorId)> + '_ {
        self.colors
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(idx, &c)| {
                let (u, v) = self.host.edge_at(idx);
                (u, v, c)
            })
    }

    /// Uncolored host edges, sorted.
    pub fn uncolored_edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.colors
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 0)
            .map(|(idx, _)| self.host.edge_at(idx))
    }

    /// Number of distinct colors actually used.
    pub fn distinct_colors(&self) -> usize {
        self.colors
            .iter()
            .filter(|&&c| c != 0)
            .collect::<BTreeSet<_>>()
            .len()
    }

    /// Restriction to the stage-1 palette (stage-2 edges become uncolored).
    pub fn stage1_part(&self) -> EdgeColoring {
        let mut out = self.clone();
        for c in out.colors.iter_mut() {
            if *c > self.k1 {
                *c = 0;
            }
        }
        out
    }

    /// Dense `|V| x |V|` lookup table.
    pub fn matrix(&self) -> ColorMatrix {
        let nv = self.host.num_vertices();
        let mut data = vec![0; nv * nv];
        for (u, v, c) in self.colored_edges() {
            data[u as usize * nv + v as usize] = c;
            data[v as usize * nv + u as usize] = c;
        }
        ColorMatrix { nv, data }
    }

    /// Serializes to the line-oriented coloring file format.
    pub fn to_file_string(&self) -> String {
        let mut out = format!(
            "host={} n={} k1={} k2={}\n",
            self.host.kind().tag(),
            self.host.n(),
            self.k1,
            self.k2
        );
        for (u, v, c) in self.colored_edges() {
            out.push_str(&format!("{u} {v} {c}\n"));
        }
        out
    }

    pub fn from_file_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty file".into(),
        })?;
        let mut kind = None;
        let mut n = None;
        let mut k1 = None;
        let mut k2 = None;
        for tok in header.split_whitespace() {
            let (key, val) = tok.split_once('=').ok_or_else(|| Error::Parse {
                line: 1,
                msg: format!("expected key=value, got `{tok}`"),
            })?;
            let num = || {
                val.parse::<u32>().map_err(|_| Error::Parse {
                    line: 1,
                    msg: format!("bad value for `{key}`: `{val}`"),
                })
            };
            match key {
                "host" => {
                    kind = Some(val.parse::<HostKind>().map_err(|e| Error::Parse {
                        line: 1,
                        msg: e.to_string(),
                    })?)
                }
                "n" => n = Some(num()?),
                "k1" => k1 = Some(num()?),
                "k2" => k2 = Some(num()?),
                other => {
                    return Err(Error::Parse {
                        line: 1,
                        msg: format!("unknown header key `{other}`"),
                    })
                }
            }
        }
        let missing = |what: &str| Error::Parse {
            line: 1,
            msg: format!("header is missing `{what}`"),
        };
        let kind = kind.ok_or_else(|| missing("host"))?;
        let n = n.ok_or_else(|| missing("n"))?;
        let k1 = k1.ok_or_else(|| missing("k1"))?;
        let k2 = k2.ok_or_else(|| missing("k2"))?;
        let host = HostGraph::new(kind, n).map_err(|e| Error::Parse {
            line: 1,
            msg: e.to_string(),
        })?;
        let mut coloring = EdgeColoring::new(host, k1, k2);

        for (i, line) in lines {
            let lineno = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected `u v c`, got `{line}`"),
                });
            }
            let mut vals = [0u32; 3];
            for (slot, f) in vals.iter_mut().zip(&fields) {
                *slot = f.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("not an integer: `{f}`"),
                })?;
            }
            let [u, v, c] = vals;
            if coloring.get(u, v).is_some() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("edge ({u}, {v}) listed twice"),
                });
            }
            coloring.set(u, v, c).map_err(|e| Error::Parse {
                line: lineno,
                msg: e.to_string(),
            })?;
        }
        Ok(coloring)
    }
}

/// Symmetric `|V| x |V|` color table; `0` means uncolored or non-edge.
#[derive(Clone, Debug)]
pub struct ColorMatrix {
    nv: usize,
    data: Vec<ColorId>,
}

impl ColorMatrix {
    #[inline(always)]
    pub fn get(&self, u: u32, v: u32) -> ColorId {
        self.data[u as usize * self.nv + v as usize]
    }

    pub fn num_vertices(&self) -> usize {
        self.nv
    }
}

// ============================================================================
// 4-cycles and 4-cliques
// ============================================================================

/// A 4-cycle stored as its cyclic vertex sequence in canonical form: the
/// least vertex first, and its smaller neighbor second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FourCycle([u32; 4]);

impl FourCycle {
    /// Canonicalizes any cyclic ordering (rotation or reflection).
    pub fn from_cyclic(seq: [u32; 4]) -> Self {
        let start = (0..4).min_by_key(|&i| seq[i]).unwrap();
        let rot = [
            seq[start],
            seq[(start + 1) % 4],
            seq[(start + 2) % 4],
            seq[(start + 3) % 4],
        ];
        if rot[1] < rot[3] {
            FourCycle(rot)
        } else {
            FourCycle([rot[0], rot[3], rot[2], rot[1]])
        }
    }

    pub fn vertices(&self) -> [u32; 4] {
        self.0
    }

    /// The four edges in cyclic order, each as stored (not sorted).
    pub fn edges(&self) -> [(u32, u32); 4] {
        let v = self.0;
        [(v[0], v[1]), (v[1], v[2]), (v[2], v[3]), (v[3], v[0])]
    }

    /// The 8 cyclic sequences (4 rotations x 2 directions) describing this cycle.
    pub fn representations(&self) -> [[u32; 4]; 8] {
        let v = self.0;
        let mut out = [[0; 4]; 8];
        for r in 0..4 {
            out[r] = [v[r], v[(r + 1) % 4], v[(r + 2) % 4], v[(r + 3) % 4]];
            out[4 + r] = [v[r], v[(r + 3) % 4], v[(r + 2) % 4], v[(r + 1) % 4]];
        }
        out
    }
}

/// Streams every 4-cycle of the host once, in lexicographic order of the
/// canonical vertex sequence.
pub fn enumerate_four_cycles(host: &HostGraph) -> impl Iterator<Item = FourCycle> {
    four_cycles(host.kind(), host.n())
}

/// Same as [`enumerate_four_cycles`] but without the `n >= 4` host check.
pub fn four_cycles(kind: HostKind, n: u32) -> Box<dyn Iterator<Item = FourCycle>> {
    match kind {
        HostKind::CompleteBipartite => Box::new((0..n).flat_map(move |x| {
            (0..n).flat_map(move |y| {
                (x + 1..n).flat_map(move |x2| {
                    (y + 1..n).map(move |y2| FourCycle([x, n + y, x2, n + y2]))
                })
            })
        })),
        HostKind::Complete => Box::new((0..n).flat_map(move |a| {
            (a + 1..n).flat_map(move |b| {
                (a + 1..n).filter(move |&c| c != b).flat_map(move |c| {
                    (b + 1..n)
                        .filter(move |&d| d != c)
                        .map(move |d| FourCycle([a, b, c, d]))
                })
            })
        })),
    }
}

/// Sorted vertex set of a `K_4` in `K_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CliqueCopy(pub [u32; 4]);

impl CliqueCopy {
    pub fn edges(&self) -> [(u32, u32); 6] {
        let [a, b, c, d] = self.0;
        [(a, b), (a, c), (a, d), (b, c), (b, d), (c, d)]
    }
}

pub fn enumerate_cliques(n: u32) -> impl Iterator<Item = CliqueCopy> {
    (0..n).flat_map(move |a| {
        (a + 1..n).flat_map(move |b| {
            (b + 1..n).flat_map(move |c| (c + 1..n).map(move |d| CliqueCopy([a, b, c, d])))
        })
    })
}

/// Counts distinct values, every `None` counting as its own fresh color.
pub fn distinct_with_sentinels(colors: &[Option<ColorId>]) -> usize {
    let mut seen: [ColorId; 8] = [0; 8];
    let mut len = 0;
    let mut fresh = 0;
    for c in colors {
        match c {
            None => fresh += 1,
            Some(c) => {
                if !seen[..len].contains(c) {
                    seen[len] = *c;
                    len += 1;
                }
            }
        }
    }
    len + fresh
}

/// Number of distinct colors on the cycle; uncolored edges are distinct sentinels.
pub fn colors_on_cycle(coloring: &EdgeColoring, cycle: &FourCycle) -> usize {
    let cols = cycle.edges().map(|(u, v)| coloring.get(u, v));
    distinct_with_sentinels(&cols)
}

// ============================================================================
// Counting lower bound
// ============================================================================

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LowerBoundPattern {
    /// `(C_4, 3)`-colorings of `K_n`.
    C4Q3Complete,
}

/// Every color class of a `(C_4, 3)`-coloring of `K_n` has at most `n`
/// edges, so at least `ceil(C(n,2) / n)` colors are needed.
pub fn counting_lower_bound(host: &HostGraph, pattern: LowerBoundPattern) -> Result<u32> {
    match (pattern, host.kind()) {
        (LowerBoundPattern::C4Q3Complete, HostKind::Complete) => {
            let n = host.n() as u64;
            let pairs = n * (n - 1) / 2;
            Ok(pairs.div_ceil(n) as u32)
        }
        (LowerBoundPattern::C4Q3Complete, HostKind::CompleteBipartite) => Err(Error::Unsupported(
            "the counting bound applies to complete hosts; the bipartite bound 2n/3 is cited, not derived"
                .into(),
        )),
    }
}

/// Lower bound `r(K_{n,n}, C_4, 3) >= 2n/3` from the literature, carried as metadata.
pub fn cited_bipartite_lower_bound(n: u32) -> f64 {
    2.0 * n as f64 / 3.0
}
