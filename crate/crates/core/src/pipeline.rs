//! End-to-end construction: stage-1 matching with retries, stage-2 palette
//! search, and certification.

use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::encode::{BipartiteStars, CherryTriangles, K4Params, Triangles};
use crate::error::{Error, Result};
use crate::graph::{counting_lower_bound, EdgeColoring, HostGraph, LowerBoundPattern};
use crate::lll::{self, ConditionReport, LllInstance, PaletteAttempt, PaletteSearch, ResampleLog, Strategy};
use crate::matching::{run_random_greedy, MatchingInstance, RunStats, StopPolicy};
use crate::verify::{self, BlockKind, GirthReport, Mode, Pattern, PropertyReport, ShapeKind, ShapeReport, Verdict};

pub const STATS_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Construction {
    #[serde(rename = "bip-c4")]
    BipC4,
    #[serde(rename = "k4")]
    K4,
    #[serde(rename = "tri-c4")]
    TriC4,
}

impl Construction {
    pub fn tag(self) -> &'static str {
        match self {
            Construction::BipC4 => "bip-c4",
            Construction::K4 => "k4",
            Construction::TriC4 => "tri-c4",
        }
    }

    pub fn pattern(self) -> Pattern {
        match self {
            Construction::K4 => Pattern::K4Q5,
            _ => Pattern::C4Q3,
        }
    }
}

impl FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bip-c4" => Ok(Construction::BipC4),
            "k4" => Ok(Construction::K4),
            "tri-c4" => Ok(Construction::TriC4),
            other => Err(Error::InvalidParameter(format!(
                "unknown construction '{other}' (expected bip-c4, k4 or tri-c4)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyMode {
    Brute,
    Signature,
    Both,
}

/// Pipeline configuration. Optional fields fall back to size-dependent
/// defaults, see the accessor methods.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub construction: Construction,
    pub n: u32,
    pub seed: u64,
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default = "default_retries")]
    pub retries: u32,
    #[serde(default = "default_k2_min")]
    pub k2_min: u32,
    #[serde(default)]
    pub k2_max: Option<u32>,
    #[serde(default)]
    pub max_deg_l: Option<u32>,
    #[serde(default)]
    pub max_crossing: Option<u32>,
    #[serde(default = "default_strategy")]
    pub stage2: Strategy,
    #[serde(default = "default_attempts")]
    pub palette_attempts: u32,
    #[serde(default = "default_budget")]
    pub budget_factor: u64,
    #[serde(default)]
    pub max_consecutive_rejections: Option<u64>,
    #[serde(default = "default_true")]
    pub saturate: bool,
    #[serde(default = "default_verify")]
    pub verify: VerifyMode,
}

fn default_rho() -> f64 {
    0.15
}
fn default_retries() -> u32 {
    5
}
fn default_k2_min() -> u32 {
    2
}
fn default_strategy() -> Strategy {
    Strategy::Focused { noise: 0.05 }
}
fn default_attempts() -> u32 {
    2
}
fn default_budget() -> u64 {
    100
}
fn default_true() -> bool {
    true
}
fn default_verify() -> VerifyMode {
    VerifyMode::Both
}

impl Config {
    pub fn new(construction: Construction, n: u32, seed: u64) -> Self {
        Config {
            construction,
            n,
            seed,
            rho: default_rho(),
            retries: default_retries(),
            k2_min: default_k2_min(),
            k2_max: None,
            max_deg_l: None,
            max_crossing: None,
            stage2: default_strategy(),
            palette_attempts: default_attempts(),
            budget_factor: default_budget(),
            max_consecutive_rejections: None,
            saturate: true,
            verify: default_verify(),
        }
    }

    /// Parses either a JSON object or `key = value` lines (`#` comments).
    pub fn parse(text: &str) -> Result<Self> {
        let map = parse_config_map(text)?;
        Ok(serde_json::from_value(Value::Object(map))?)
    }

    /// `ceil(n^0.9)` unless configured.
    pub fn k2_cap(&self) -> u32 {
        self.k2_max
            .unwrap_or_else(|| (self.n as f64).powf(0.9).ceil() as u32)
            .max(self.k2_min)
    }

    /// `n / 4` for the bipartite construction at `n >= 100`, otherwise none.
    pub fn deg_threshold(&self) -> Option<u32> {
        self.max_deg_l.or_else(|| self.default_threshold())
    }

    pub fn crossing_threshold(&self) -> Option<u32> {
        self.max_crossing.or_else(|| self.default_threshold())
    }

    fn default_threshold(&self) -> Option<u32> {
        (self.construction == Construction::BipC4 && self.n >= 100).then_some(self.n / 4)
    }

    pub fn stop_policy(&self) -> StopPolicy {
        StopPolicy {
            max_consecutive_rejections: self.max_consecutive_rejections,
            wall_clock: None,
            saturate: self.saturate,
        }
    }
}

/// Reads a config file into a JSON object. `key = value` values become
/// numbers or booleans when they parse as such, JSON when they start with
/// `{`, and strings otherwise.
pub fn parse_config_map(text: &str) -> Result<Map<String, Value>> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        return match serde_json::from_str(text)? {
            Value::Object(m) => Ok(m),
            _ => Err(Error::Parse { line: 1, msg: "expected a JSON object".into() }),
        };
    }
    let mut map = Map::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            msg: format!("expected key = value, got '{line}'"),
        })?;
        let key = k.trim().replace('-', "_");
        let v = v.trim();
        let value = if let Ok(x) = v.parse::<u64>() {
            Value::from(x)
        } else if let Ok(x) = v.parse::<f64>() {
            Value::from(x)
        } else if let Ok(b) = v.parse::<bool>() {
            Value::from(b)
        } else if v.starts_with('{') {
            serde_json::from_str(v).map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?
        } else {
            Value::from(v.trim_matches('"'))
        };
        map.insert(key, value);
    }
    Ok(map)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttemptSummary {
    pub seed: u64,
    pub accepted: u64,
    pub leftover_edges: usize,
    pub max_deg_l: u32,
    pub max_crossing: u32,
    pub within_thresholds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stage1Report {
    pub k1: u32,
    pub attempt_used: usize,
    pub attempts: Vec<AttemptSummary>,
    pub deg_threshold: Option<u32>,
    pub crossing_threshold: Option<u32>,
    pub engine: RunStats,
    pub properties: PropertyReport,
    /// Cherry construction only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair_statistic: Option<crate::encode::k4::PairStatistic>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stage2Report {
    pub leftover_edges: usize,
    pub max_deg_l: u32,
    pub strategy: Strategy,
    pub k2_search: (u32, u32),
    pub k2: Option<u32>,
    pub log: Option<ResampleLog>,
    pub attempts: Vec<PaletteAttempt>,
    pub condition: Option<ConditionReport>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub pattern: Pattern,
    pub brute: Option<Verdict>,
    pub signature: Option<Verdict>,
    pub shapes: ShapeReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub girth: Option<GirthReport>,
    pub complete_coloring: bool,
    /// Complete hosts only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counting_lower_bound: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColorBounds {
    pub total_colors: usize,
    pub hard_bound: u32,
    pub within_hard_bound: bool,
    pub target: u32,
    pub within_target: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub stage1_secs: f64,
    pub stage2_secs: f64,
    pub verify_secs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub config: Config,
    pub host: String,
    pub stage1: Stage1Report,
    pub stage2: Stage2Report,
    pub verification: Option<VerifyReport>,
    pub bounds: Option<ColorBounds>,
    pub success: bool,
    pub timings: Timings,
}

pub struct RunOutput {
    /// Final coloring, absent when stage 2 found no palette.
    pub coloring: Option<EdgeColoring>,
    pub report: RunReport,
}

fn attempt_seed(seed: u64, attempt: u32) -> u64 {
    if attempt == 0 {
        seed
    } else {
        seed.wrapping_add((attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
    }
}

struct Stage1Result {
    coloring: EdgeColoring,
    stats: RunStats,
    holes: Option<usize>,
    pair_statistic: Option<crate::encode::k4::PairStatistic>,
}

fn stage1_once(cfg: &Config, seed: u64) -> Result<Stage1Result> {
    let stop = cfg.stop_policy();
    fn go<I: MatchingInstance>(inst: &I, seed: u64, stop: &StopPolicy) -> (EdgeColoring, RunStats) {
        let (state, stats) = run_random_greedy(inst, seed, stop, &mut []);
        (state.coloring(inst.host()), stats)
    }
    Ok(match cfg.construction {
        Construction::BipC4 => {
            let inst = BipartiteStars::build(cfg.n, seed)?;
            let (coloring, stats) = go(&inst, seed, &stop);
            Stage1Result { coloring, stats, holes: None, pair_statistic: None }
        }
        Construction::TriC4 => {
            let inst = Triangles::build(cfg.n, seed)?;
            let (coloring, stats) = go(&inst, seed, &stop);
            Stage1Result { coloring, stats, holes: None, pair_statistic: None }
        }
        Construction::K4 => {
            let inst = CherryTriangles::build(K4Params::new(cfg.n, cfg.rho, seed))?;
            if inst.candidate_space_size() == 0 {
                return Err(Error::InvalidParameter("hole table admits no candidate".into()));
            }
            let (state, stats) = run_random_greedy(&inst, seed, &stop, &mut []);
            Stage1Result {
                coloring: state.coloring(inst.host()),
                stats,
                holes: Some(inst.holes().count()),
                pair_statistic: Some(inst.matched_pair_statistic(&state)),
            }
        }
    })
}

/// Certifies a coloring for the construction's pattern and class structure.
pub fn certify(coloring: &EdgeColoring, construction: Construction, mode: VerifyMode) -> Result<VerifyReport> {
    let pattern = construction.pattern();
    let (brute, signature) = match (pattern, mode) {
        (Pattern::K4Q5, _) => (Some(verify::verify_hq(coloring, pattern, Mode::Brute)?), None),
        (_, VerifyMode::Brute) => (Some(verify::verify_hq(coloring, pattern, Mode::Brute)?), None),
        (_, VerifyMode::Signature) => (None, Some(verify::verify_hq(coloring, pattern, Mode::Signature)?)),
        (_, VerifyMode::Both) => (
            Some(verify::verify_hq(coloring, pattern, Mode::Brute)?),
            Some(verify::verify_hq(coloring, pattern, Mode::Signature)?),
        ),
    };
    let (shape, block) = match construction {
        Construction::BipC4 => (ShapeKind::BipStars, Some(BlockKind::Stars4)),
        Construction::K4 => (ShapeKind::K4Cherries, None),
        Construction::TriC4 => (ShapeKind::Triangles, Some(BlockKind::Triangles3)),
    };
    let shapes = verify::verify_class_shapes(coloring, shape);
    let girth = block.map(|b| verify::verify_union_girth(coloring, b));
    let host = coloring.host();
    let lower = (!host.is_bipartite())
        .then(|| counting_lower_bound(&host, LowerBoundPattern::C4Q3Complete))
        .transpose()?;
    let complete = coloring.is_complete();
    let verdicts_ok = brute.as_ref().map_or(true, Verdict::is_ok) && signature.as_ref().map_or(true, Verdict::is_ok);
    let passed = complete
        && verdicts_ok
        && shapes.pass
        && girth.as_ref().map_or(true, |g| g.pass)
        && lower.map_or(true, |lb| coloring.distinct_colors() >= lb as usize);
    Ok(VerifyReport {
        passed,
        pattern,
        brute,
        signature,
        shapes,
        girth,
        complete_coloring: complete,
        counting_lower_bound: lower,
    })
}

/// Hard bound `n` and the desk-scale target for the construction.
pub fn color_bounds(cfg: &Config, total: usize) -> ColorBounds {
    let n = cfg.n;
    let slack = (n as f64).powf(0.9).ceil() as u32;
    let target = match cfg.construction {
        Construction::BipC4 => (2 * n).div_ceil(3) + slack,
        Construction::K4 => ((1.0 + cfg.rho) * 5.0 * n as f64 / 6.0).ceil() as u32 + slack,
        Construction::TriC4 => n.div_ceil(2) + slack,
    };
    ColorBounds {
        total_colors: total,
        hard_bound: n,
        within_hard_bound: total <= n as usize,
        target,
        within_target: total <= target as usize,
    }
}

/// Runs the full pipeline. Errors are configuration errors; construction
/// failures are reported through `report.success`.
pub fn run(cfg: &Config) -> Result<RunOutput> {
    let host = match cfg.construction {
        Construction::BipC4 => HostGraph::bipartite(cfg.n)?,
        _ => HostGraph::complete(cfg.n)?,
    };

    // Stage 1 with retries.
    let t1 = Instant::now();
    let (deg_cap, cross_cap) = (cfg.deg_threshold(), cfg.crossing_threshold());
    let mut attempts = Vec::new();
    let mut best: Option<(usize, Stage1Result, PropertyReport)> = None;
    for a in 0..=cfg.retries {
        let seed = attempt_seed(cfg.seed, a);
        let res = stage1_once(cfg, seed)?;
        let props = verify::measure_properties(&res.coloring);
        let ok = deg_cap.map_or(true, |c| props.max_deg_l <= c)
            && cross_cap.map_or(true, |c| props.max_crossing <= c);
        attempts.push(AttemptSummary {
            seed,
            accepted: res.stats.accepted,
            leftover_edges: props.leftover_edges,
            max_deg_l: props.max_deg_l,
            max_crossing: props.max_crossing,
            within_thresholds: ok,
        });
        let key = |p: &PropertyReport| (p.max_deg_l, p.max_crossing);
        if best.as_ref().map_or(true, |(_, _, bp)| key(&props) < key(bp)) {
            best = Some((attempts.len() - 1, res, props));
        }
        if ok {
            break;
        }
    }
    let (used, s1, props) = best.expect("at least one attempt");
    let stage1_secs = t1.elapsed().as_secs_f64();

    // Stage 2.
    let t2 = Instant::now();
    let inst = LllInstance::from_coloring(&s1.coloring);
    let search = PaletteSearch {
        k2_min: cfg.k2_min,
        k2_max: cfg.k2_cap(),
        attempts_per: cfg.palette_attempts,
        budget_factor: cfg.budget_factor,
        strategy: cfg.stage2,
    };
    let mut stage2 = Stage2Report {
        leftover_edges: inst.num_edges(),
        max_deg_l: inst.max_degree(),
        strategy: cfg.stage2,
        k2_search: (search.k2_min, search.k2_max),
        k2: None,
        log: None,
        attempts: Vec::new(),
        condition: None,
        error: None,
    };
    let mut coloring = None;
    match lll::adaptive_palette(&inst, search, attempt_seed(cfg.seed, used as u32)) {
        Ok(res) => {
            stage2.condition = Some(lll::check_condition(inst.max_degree(), res.k2, props.max_crossing));
            let used_colors = res.assignment.iter().collect::<std::collections::BTreeSet<_>>().len() as u32;
            // compact the palette to the colors actually used
            let mut remap = vec![u32::MAX; res.k2 as usize];
            let mut next = 0;
            for &c in &res.assignment {
                if remap[c as usize] == u32::MAX {
                    remap[c as usize] = next;
                    next += 1;
                }
            }
            let compact: Vec<u32> = res.assignment.iter().map(|&c| remap[c as usize]).collect();
            coloring = Some(inst.apply(&compact, used_colors)?);
            stage2.k2 = Some(used_colors);
            stage2.log = Some(res.log);
            stage2.attempts = res.attempts;
        }
        Err(e) => stage2.error = Some(e.to_string()),
    }
    let stage2_secs = t2.elapsed().as_secs_f64();

    // Verification.
    let t3 = Instant::now();
    let verification = coloring
        .as_ref()
        .map(|c| certify(c, cfg.construction, cfg.verify))
        .transpose()?;
    let bounds = coloring.as_ref().map(|c| color_bounds(cfg, c.distinct_colors()));
    let verify_secs = t3.elapsed().as_secs_f64();

    let report = RunReport {
        schema: STATS_SCHEMA,
        config: cfg.clone(),
        host: host.to_string(),
        stage1: Stage1Report {
            k1: s1.coloring.k1(),
            attempt_used: used,
            attempts,
            deg_threshold: deg_cap,
            crossing_threshold: cross_cap,
            engine: s1.stats,
            properties: props,
            holes: s1.holes,
            pair_statistic: s1.pair_statistic,
        },
        stage2,
        success: verification.as_ref().is_some_and(|v| v.passed),
        verification,
        bounds,
        timings: Timings { stage1_secs, stage2_secs, verify_secs },
    };
    Ok(RunOutput { coloring, report })
}
