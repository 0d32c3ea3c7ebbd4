use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use gramsey_core::encode::bipartite::{SameColorPairIndicator, StarVertexCoverage};
use gramsey_core::encode::{BipartiteStars, CherryTriangles, K4Params, Triangles};
use gramsey_core::matching::audit::{audit_boundedness, audit_trackability, AuditParams, AuditReport};
use gramsey_core::matching::explicit::{materialize, Materialized};
use gramsey_core::matching::{HVertex, MatchingInstance, TrackedFunctional};
use gramsey_core::pipeline::{self, parse_config_map, Config, Construction, VerifyMode};
use gramsey_core::verify::{self, measure_properties, Mode, Pattern, Verdict};
use gramsey_core::EdgeColoring;

#[derive(Parser)]
#[command(name = "gramsey", version, about = "Generalized Ramsey colorings of K_{n,n} and K_n")]
struct Cli {
    /// Worker threads for verification (defaults to all cores).
    #[arg(long, global = true, env = "GRAMSEY_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a coloring, verify it and write the coloring and stats files.
    Run(RunArgs),
    /// Re-certify a coloring file.
    Verify(VerifyArgs),
    /// Materialize a small instance and audit degrees and conflicts.
    Audit(AuditArgs),
    /// Recompute leftover and color statistics of a coloring file.
    Stats(StatsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructionArg {
    #[value(name = "bip-c4")]
    BipC4,
    K4,
    #[value(name = "tri-c4")]
    TriC4,
}

impl From<ConstructionArg> for Construction {
    fn from(c: ConstructionArg) -> Self {
        match c {
            ConstructionArg::BipC4 => Construction::BipC4,
            ConstructionArg::K4 => Construction::K4,
            ConstructionArg::TriC4 => Construction::TriC4,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Stage2Arg {
    Focused,
    MoserTardos,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyArg {
    Brute,
    Signature,
    Both,
}

impl From<VerifyArg> for VerifyMode {
    fn from(v: VerifyArg) -> Self {
        match v {
            VerifyArg::Brute => VerifyMode::Brute,
            VerifyArg::Signature => VerifyMode::Signature,
            VerifyArg::Both => VerifyMode::Both,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PatternArg {
    C4q3,
    K4q5,
}

#[derive(Args)]
struct RunArgs {
    /// Construction (alternatively `--construction`).
    #[arg(value_enum)]
    target: Option<ConstructionArg>,
    #[arg(long, value_enum, env = "GRAMSEY_CONSTRUCTION")]
    construction: Option<ConstructionArg>,
    #[arg(long, env = "GRAMSEY_N")]
    n: Option<u32>,
    #[arg(long, env = "GRAMSEY_SEED")]
    seed: Option<u64>,
    #[arg(long, env = "GRAMSEY_RHO")]
    rho: Option<f64>,
    #[arg(long, env = "GRAMSEY_RETRIES")]
    retries: Option<u32>,
    #[arg(long, env = "GRAMSEY_K2_MAX")]
    k2_max: Option<u32>,
    #[arg(long, env = "GRAMSEY_MAX_DEG_L")]
    max_deg_l: Option<u32>,
    #[arg(long, env = "GRAMSEY_MAX_CROSSING")]
    max_crossing: Option<u32>,
    #[arg(long, value_enum, env = "GRAMSEY_STAGE2")]
    stage2: Option<Stage2Arg>,
    #[arg(long, value_enum, env = "GRAMSEY_VERIFY")]
    verify: Option<VerifyArg>,
    /// Config file, JSON or `key = value` lines. Flags override it.
    #[arg(long, env = "GRAMSEY_CONFIG")]
    config: Option<PathBuf>,
    /// Coloring file (default `<construction>_n<n>_s<seed>.coloring`).
    #[arg(long, env = "GRAMSEY_OUT")]
    out: Option<PathBuf>,
    /// Stats JSON (default: the coloring path with extension `json`).
    #[arg(long, env = "GRAMSEY_STATS_OUT")]
    stats_out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
    /// Defaults to `c4q3`.
    #[arg(long, value_enum)]
    pattern: Option<PatternArg>,
    #[arg(long, value_enum, default_value = "both")]
    mode: VerifyArg,
    /// Also check the stage-1 class shapes of this construction.
    #[arg(long, value_enum)]
    construction: Option<ConstructionArg>,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(value_enum)]
    construction: ConstructionArg,
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.5)]
    rho: f64,
    /// Largest candidate space to materialize.
    #[arg(long, default_value_t = 200_000)]
    limit: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct StatsArgs {
    file: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.cmd {
        Command::Run(a) => cmd_run(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Audit(a) => cmd_audit(a),
        Command::Stats(a) => cmd_stats(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn usage_error(msg: &str) -> ! {
    Cli::command().error(ErrorKind::MissingRequiredArgument, msg).exit()
}

fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating temp file in {}", dir.display()))?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn build_config(a: &RunArgs) -> Result<Config> {
    let mut map = match &a.config {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            parse_config_map(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => Map::new(),
    };
    if a.target.is_some() && a.construction.is_some() {
        usage_error("give the construction either positionally or with --construction, not both");
    }
    if let Some(c) = a.target.or(a.construction) {
        map.insert("construction".into(), json!(Construction::from(c).tag()));
    }
    let mut set = |k: &str, v: Option<Value>| {
        if let Some(v) = v {
            map.insert(k.into(), v);
        }
    };
    set("n", a.n.map(Value::from));
    set("seed", a.seed.map(Value::from));
    set("rho", a.rho.map(Value::from));
    set("retries", a.retries.map(Value::from));
    set("k2_max", a.k2_max.map(Value::from));
    set("max_deg_l", a.max_deg_l.map(Value::from));
    set("max_crossing", a.max_crossing.map(Value::from));
    set(
        "stage2",
        a.stage2.map(|s| match s {
            Stage2Arg::Focused => json!({"kind": "focused", "noise": 0.05}),
            Stage2Arg::MoserTardos => json!({"kind": "moser_tardos"}),
        }),
    );
    set("verify", a.verify.map(|v| serde_json::to_value(VerifyMode::from(v)).unwrap()));
    for (key, flag) in [("construction", "<CONSTRUCTION>"), ("n", "--n"), ("seed", "--seed")] {
        if !map.contains_key(key) {
            usage_error(&format!("missing required argument {flag}"));
        }
    }
    Ok(serde_json::from_value(Value::Object(map)).context("invalid configuration")?)
}

fn cmd_run(a: RunArgs) -> Result<bool> {
    let cfg = build_config(&a)?;
    let out_path = a
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}_n{}_s{}.coloring", cfg.construction.tag(), cfg.n, cfg.seed)));
    let stats_path = a.stats_out.clone().unwrap_or_else(|| out_path.with_extension("json"));

    let output = pipeline::run(&cfg)?;
    let report = &output.report;
    if let Some(c) = &output.coloring {
        write_atomic(&out_path, c.to_file_string().as_bytes())?;
    }
    write_atomic(&stats_path, to_json(report)?.as_bytes())?;

    let total = report.bounds.as_ref().map(|b| b.total_colors);
    eprintln!(
        "{} n={} seed={}: k1={} leftover={} k2={} total={} verified={}",
        cfg.construction.tag(),
        cfg.n,
        cfg.seed,
        report.stage1.k1,
        report.stage2.leftover_edges,
        report.stage2.k2.map_or("-".into(), |k| k.to_string()),
        total.map_or("-".into(), |t| t.to_string()),
        report.success
    );
    if let Some(b) = &report.bounds {
        if !b.within_hard_bound {
            eprintln!("note: {} colors exceed the hard bound {}", b.total_colors, b.hard_bound);
        }
        if !b.within_target {
            eprintln!("note: {} colors exceed the target {}", b.total_colors, b.target);
        }
    }
    if !report.success {
        if let Some(e) = &report.stage2.error {
            eprintln!("stage 2 failed: {e}");
        }
        if let Some(v) = &report.verification {
            for verdict in [&v.brute, &v.signature].into_iter().flatten() {
                if let Verdict::Violation { vertices, distinct, .. } = verdict {
                    eprintln!("violation on {vertices:?} with {distinct} colors");
                }
            }
            for s in &v.shapes.violations {
                eprintln!("shape violation: {s}");
            }
        }
    }
    Ok(report.success)
}

fn read_coloring(path: &Path) -> Result<EdgeColoring> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    EdgeColoring::from_file_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn cmd_verify(a: VerifyArgs) -> Result<bool> {
    let coloring = read_coloring(&a.file)?;
    let pattern = match a.pattern {
        Some(PatternArg::K4q5) => Pattern::K4Q5,
        _ => Pattern::C4Q3,
    };
    let modes: &[Mode] = match (pattern, a.mode) {
        (Pattern::K4Q5, _) | (_, VerifyArg::Brute) => &[Mode::Brute],
        (_, VerifyArg::Signature) => &[Mode::Signature],
        (_, VerifyArg::Both) => &[Mode::Brute, Mode::Signature],
    };
    let mut ok = true;
    let mut verdicts = Map::new();
    for &m in modes {
        let v = verify::verify_hq(&coloring, pattern, m)?;
        if let Verdict::Violation { vertices, colors, distinct } = &v {
            ok = false;
            eprintln!("{m:?}: copy {vertices:?} has colors {colors:?} ({distinct} distinct)");
        }
        verdicts.insert(format!("{m:?}").to_lowercase(), serde_json::to_value(&v)?);
    }
    let mut doc = json!({ "pattern": pattern, "verdicts": verdicts });
    if let Some(c) = a.construction {
        let r = pipeline::certify(&coloring, c.into(), VerifyMode::from(a.mode))?;
        for s in &r.shapes.violations {
            eprintln!("shape violation: {s}");
        }
        ok &= r.passed;
        doc["certification"] = serde_json::to_value(&r)?;
    }
    doc["passed"] = json!(ok);
    print!("{}", to_json(&doc)?);
    Ok(ok)
}

fn cmd_stats(a: StatsArgs) -> Result<bool> {
    let coloring = read_coloring(&a.file)?;
    let props = measure_properties(&coloring);
    let doc = json!({
        "host": coloring.host().to_string(),
        "k1": coloring.k1(),
        "k2": coloring.k2(),
        "complete": coloring.is_complete(),
        "distinct_colors": coloring.distinct_colors(),
        "properties": props,
    });
    print!("{}", to_json(&doc)?);
    Ok(true)
}

struct DegreeRow {
    class: &'static str,
    vertices: usize,
    min: u64,
    max: u64,
    formula_mismatches: usize,
}

fn degree_table<C: Copy + Ord>(
    mat: &Materialized<C>,
    class_of: impl Fn(HVertex) -> &'static str,
    formula: impl Fn(HVertex) -> u64,
) -> Vec<DegreeRow> {
    let deg = mat.hypergraph.degrees();
    let mut rows: Vec<DegreeRow> = Vec::new();
    for (i, &v) in mat.hypergraph.vertices.iter().enumerate() {
        let class = class_of(v);
        let idx = match rows.iter().position(|r| r.class == class) {
            Some(i) => i,
            None => {
                rows.push(DegreeRow { class, vertices: 0, min: u64::MAX, max: 0, formula_mismatches: 0 });
                rows.len() - 1
            }
        };
        let r = &mut rows[idx];
        r.vertices += 1;
        r.min = r.min.min(deg[i]);
        r.max = r.max.max(deg[i]);
        if formula(v) != deg[i] {
            r.formula_mismatches += 1;
        }
    }
    rows
}

fn cmd_audit(a: AuditArgs) -> Result<bool> {
    let (rows, h_report, track, summary) = match Construction::from(a.construction) {
        Construction::BipC4 => {
            let inst = BipartiteStars::build(a.n, a.seed)?;
            let (mat, conflicts) = materialize(&inst, a.limit)?;
            let n = a.n;
            let rows = degree_table(
                &mat,
                |v| match v {
                    HVertex::Pair(x, y) if (x < n) != (y < n) => "cross pair",
                    HVertex::Pair(x, _) if x < n => "same-side pair in X",
                    HVertex::Pair(..) => "same-side pair in Y",
                    HVertex::Slot(..) => "slot",
                },
                |v| inst.degree_formula(v),
            );
            let p = AuditParams::new(inst.nominal_degree(), 4);
            let b = audit_boundedness(&mat.hypergraph, &conflicts, &p);
            let mut t = AuditReport::default();
            let coverage = TrackedFunctional::new(Box::new(StarVertexCoverage { v: 0 }));
            t.checks.extend(audit_trackability(&mat, &conflicts, &coverage, &p).checks);
            let pairs = TrackedFunctional::new(Box::new(SameColorPairIndicator { n, x: 0, y: n, x_hits: 1, y_hits: 1 }));
            t.checks.extend(audit_trackability(&mat, &conflicts, &pairs, &p).checks);
            (rows, b, t, summary(&mat, conflicts.len(), n))
        }
        Construction::TriC4 => {
            let inst = Triangles::build(a.n, a.seed)?;
            let (mat, conflicts) = materialize(&inst, a.limit)?;
            let rows = degree_table(
                &mat,
                |v| if matches!(v, HVertex::Pair(..)) { "pair" } else { "slot" },
                |v| inst.degree_formula(v),
            );
            let b = audit_boundedness(&mat.hypergraph, &conflicts, &AuditParams::new(inst.nominal_degree(), 4));
            (rows, b, AuditReport::default(), summary(&mat, conflicts.len(), a.n))
        }
        Construction::K4 => {
            let inst = CherryTriangles::build(K4Params::new(a.n, a.rho, a.seed))?;
            let (mat, conflicts) = materialize(&inst, a.limit)?;
            let rows = degree_table(
                &mat,
                |v| if matches!(v, HVertex::Pair(..)) { "pair" } else { "slot" },
                |v| inst.degree(v),
            );
            let b = audit_boundedness(&mat.hypergraph, &conflicts, &AuditParams::new(inst.nominal_degree(), 4));
            (rows, b, AuditReport::default(), summary(&mat, conflicts.len(), a.n))
        }
    };

    let degrees_ok = rows.iter().all(|r| r.formula_mismatches == 0);
    let ok = degrees_ok && h_report.absolute_pass() && track.absolute_pass();
    if a.json {
        let table: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({"class": r.class, "vertices": r.vertices, "min": r.min, "max": r.max,
                       "formula_mismatches": r.formula_mismatches})
            })
            .collect();
        let doc = json!({
            "summary": summary,
            "degrees": table,
            "boundedness": h_report.checks,
            "trackability": track.checks,
            "passed": ok,
        });
        print!("{}", to_json(&doc)?);
    } else {
        println!(
            "{} n={}: {} edges, {} vertices, {} conflicts, max codegree {}",
            Construction::from(a.construction).tag(),
            a.n,
            summary["edges"],
            summary["vertices"],
            summary["conflicts"],
            summary["max_codegree"]
        );
        println!("{:<22} {:>9} {:>8} {:>8} {:>10}", "class", "vertices", "min", "max", "mismatch");
        for r in &rows {
            println!("{:<22} {:>9} {:>8} {:>8} {:>10}", r.class, r.vertices, r.min, r.max, r.formula_mismatches);
        }
        for c in h_report.checks.iter().chain(&track.checks) {
            println!(
                "{:<34} {:>14.3} {:>14.3} {:?}{}",
                c.name,
                c.measured,
                c.bound,
                c.outcome,
                if c.absolute { " (absolute)" } else { "" }
            );
        }
        println!("passed: {ok}");
    }
    Ok(ok)
}

fn summary<C: Copy + Ord>(mat: &Materialized<C>, conflicts: usize, n: u32) -> Value {
    let h = &mat.hypergraph;
    json!({
        "n": n,
        "edges": h.num_edges(),
        "vertices": h.vertices.len(),
        "uniformity": h.uniformity,
        "conflicts": conflicts,
        "max_codegree": h.max_codegree(),
    })
}
