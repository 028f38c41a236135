//! Pipeline driver behind the `qsd` binary: stage orchestration, artifact
//! writing and the reference-value matrix.

pub mod anchors;
pub mod stages;

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use serde_json::json;

use qsd_core::analysis::block_graph;
use qsd_core::formats::{classification_from_json, classification_to_json, histogram_pairs, to_sorted_json, CliqueJson};
use qsd_core::geometry::Geometry;
use qsd_core::Universe;

use anchors::Anchor;
use stages::*;

/// Flip `bit` of block `block` in clique `clique` after the universe is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fault {
    pub clique: usize,
    pub block: usize,
    pub bit: u32,
}

impl FromStr for Fault {
    type Err = anyhow::Error;

    /// `CLIQUE:BLOCK:BIT`, e.g. `5:3:0`.
    fn from_str(s: &str) -> Result<Fault> {
        let parts: Vec<&str> = s.split(':').collect();
        let [c, b, bit] = parts[..] else {
            bail!("expected CLIQUE:BLOCK:BIT, got {s:?}");
        };
        let f = Fault { clique: c.parse()?, block: b.parse()?, bit: bit.parse()? };
        if f.clique >= 63 || f.block >= 16 || f.bit >= 64 {
            bail!("fault {s:?} out of range (clique < 63, block < 16, bit < 64)");
        }
        Ok(f)
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub out: PathBuf,
    pub threads: Option<usize>,
    /// `None` means report only: mismatches do not affect the exit code.
    pub verify: Option<VerifyLevel>,
    pub json: bool,
    pub dimacs: bool,
    /// Record indices (into classification.json) to export as DIMACS.
    pub records: Vec<usize>,
    pub fault: Option<Fault>,
    /// Print per-stage wall time to stderr.
    pub timings: bool,
}

impl RunConfig {
    pub fn new(out: impl Into<PathBuf>) -> RunConfig {
        RunConfig { out: out.into(), ..RunConfig::default() }
    }
}

/// What a command printed and checked.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub lines: Vec<String>,
    pub anchors: Vec<Anchor>,
    /// Whether mismatching anchors count towards the exit code.
    pub enforce: bool,
    pub timings: Vec<(&'static str, Duration)>,
}

impl Outcome {
    pub fn failed(&self) -> usize {
        self.anchors.iter().filter(|a| !a.passed).count()
    }

    pub fn first_failed(&self) -> Option<&Anchor> {
        self.anchors.iter().find(|a| !a.passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.enforce {
            self.failed().min(255) as i32
        } else {
            0
        }
    }

    fn say(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }
}

pub fn build_universe(fault: Option<Fault>) -> Result<Universe> {
    let u = Universe::build()?;
    let Some(f) = fault else {
        return Ok(u);
    };
    let mut cliques = u.cliques.clone();
    let b = &mut cliques[f.clique].blocks[f.block];
    b.0 ^= 1 << f.bit;
    Ok(Universe::from_parts(u.geometry.clone(), u.line_code.clone(), u.dual_code.clone(), cliques))
}

/// Runs `f` on a pool of `threads` workers, or on the global pool.
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build()?;
            Ok(pool.install(f))
        }
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

fn group(n: u64) -> String {
    let s = n.to_string();
    let mut out = String::new();
    for (i, ch) in s.chars().enumerate() {
        if i > 0 && (s.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

fn code_artifact(s: &CodeStage) -> serde_json::Value {
    let weights: Vec<[u64; 2]> = s.weight_distribution.iter().map(|(&w, &c)| [w as u64, c]).collect();
    json!({ "dual_dimension": s.dual_dimension, "line_rank": s.line_rank, "weights": weights })
}

fn code_lines(out: &mut Outcome, s: &CodeStage) {
    out.say(format!("rank of the 336 line vectors: {}", s.line_rank));
    out.say(format!("dual code dimension: {}", s.dual_dimension));
    let terms: Vec<String> = s.weight_distribution.iter().map(|(w, c)| format!("{w}:{c}")).collect();
    out.say(format!("weight distribution: {{{}}}", terms.join(", ")));
}

pub fn cmd_code(cfg: &RunConfig) -> Result<Outcome> {
    let geometry = Geometry::new();
    let s = with_threads(cfg.threads, || run_code(&geometry))??;
    let mut out = Outcome { enforce: cfg.verify.is_some(), ..Outcome::default() };
    code_lines(&mut out, &s);
    if cfg.json {
        write(&cfg.out, "weight_enumerator.json", &to_sorted_json(&code_artifact(&s))?)?;
    }
    out.timings.push(("code", s.elapsed));
    out.anchors = anchors::code_anchors(Ok(&s));
    Ok(out)
}

fn clique_lines(out: &mut Outcome, s: &CliqueStage) {
    let unions_ok = s.unions_per_class.iter().all(|&n| n == 48);
    out.say(format!(
        "even 6-line unions per class: {}",
        if unions_ok { "48".to_string() } else { format!("{:?}", s.unions_per_class) }
    ));
    out.say(format!(
        "{} classes x 3 cliques x 16 blocks = {}",
        s.clique_count / 3,
        s.block_count
    ));
    out.say(format!("cross-class adjacency: {}", if s.cross_class_adjacent { "universal" } else { "VIOLATED" }));
    out.say(format!("number of BH-designs: {}", group(s.total_designs)));
}

fn write_cliques(cfg: &RunConfig, u: &Universe) -> Result<()> {
    let catalog: Vec<CliqueJson> = u.cliques.iter().map(CliqueJson::from).collect();
    write(&cfg.out, "cliques.json", &to_sorted_json(&catalog)?)
}

pub fn cmd_cliques(cfg: &RunConfig) -> Result<Outcome> {
    let u = build_universe(cfg.fault)?;
    let s = with_threads(cfg.threads, || run_cliques(&u))?;
    let mut out = Outcome { enforce: true, ..Outcome::default() };
    clique_lines(&mut out, &s);
    if cfg.json {
        write_cliques(cfg, &u)?;
    }
    out.timings.push(("cliques", s.elapsed));
    out.anchors = anchors::clique_anchors(Ok(&s));
    Ok(out)
}

#[derive(Serialize)]
struct FamiliesJson<'a> {
    classification: &'a [qsd_core::classify::FamilyResult],
    orbits: Option<&'a [FamilyOrbits]>,
}

fn write_classification(cfg: &RunConfig, s: &ClassifyStage, orbits: Option<&OrbitStage>) -> Result<()> {
    write(&cfg.out, "classification.json", &classification_to_json(&s.classification.records)?)?;
    let tables = json!({
        "mass_formula": s.mass,
        "burnside": s.burnside,
        "table1": histogram_pairs(&s.tables.table1),
        "table2": histogram_pairs(&s.tables.table2),
        "table3": histogram_pairs(&s.tables.table3),
    });
    write(&cfg.out, "tables.json", &to_sorted_json(&tables)?)?;
    write(&cfg.out, "tables.txt", &s.tables.to_text())?;
    let families = FamiliesJson {
        classification: &s.classification.families,
        orbits: orbits.map(|o| o.families.as_slice()),
    };
    write(&cfg.out, "families.json", &to_sorted_json(&families)?)
}

fn classify_lines(out: &mut Outcome, s: &ClassifyStage) {
    for f in &s.classification.families {
        out.say(format!(
            "{}: {} fixed designs, {} centralizer orbits, {} isomorphism classes",
            f.name,
            group(f.fixed_count),
            f.centralizer_orbits,
            f.classes.len()
        ));
    }
    out.say(format!(
        "designs with an automorphism group of order 128: {} (overlap {})",
        s.classification.records.len(),
        s.classification.overlap()
    ));
    out.say(format!("mass sum: {}", group(s.mass.sum)));
    out.say(format!("N64 = {}, N = {}", group(s.mass.n64), group(s.mass.n)));
    out.say(format!("Burnside count: {}", group(s.burnside)));
    out.say(format!(
        "verified {} designs, {} failures",
        s.verified_designs,
        s.verification_failures.len()
    ));
}

pub fn cmd_classify(cfg: &RunConfig) -> Result<Outcome> {
    let u = build_universe(cfg.fault)?;
    let level = cfg.verify.unwrap_or_default();
    let (g, s) = with_threads(cfg.threads, || -> Result<_> {
        let (g, q, classes) = run_group(&u)?;
        let s = run_classify(&u, &q, &classes, level)?;
        Ok((g, s))
    })??;
    let mut out = Outcome { enforce: cfg.verify.is_some(), ..Outcome::default() };
    classify_lines(&mut out, &s);
    write_classification(cfg, &s, None)?;
    out.timings.push(("group", g.elapsed));
    out.timings.push(("classify", s.elapsed));
    out.anchors.extend(anchors::group_anchors(Ok(&g)));
    out.anchors.extend(anchors::classify_anchors(Ok(&s)));
    Ok(out)
}

fn write_analysis(cfg: &RunConfig, s: &AnalysisStage) -> Result<()> {
    let summary = json!({
        "coclique_partition_failures": s.coclique_failures(),
        "distinct_fingerprints": s.distinct_fingerprints(),
        "rank12_aut_orders": s.rank12_orders(),
        "records": s.records.len(),
        "srg": qsd_core::analysis::SRG_PARAMS.to_string(),
        "srg_failures": s.srg_failures(),
        "two_rank_histogram": s.rank_histogram().into_iter().map(|(k, v)| [k as u64, v]).collect::<Vec<_>>(),
    });
    write(&cfg.out, "analysis.json", &to_sorted_json(&summary)?)?;
    write(&cfg.out, "fingerprints.json", &to_sorted_json(&s.fingerprint_table())?)
}

fn write_dimacs(cfg: &RunConfig, u: &Universe, records: &[qsd_core::classify::ClassificationRecord]) -> Result<()> {
    let wanted = if cfg.records.is_empty() { vec![0] } else { cfg.records.clone() };
    for i in wanted {
        let r = records.get(i).ok_or_else(|| anyhow!("record {i} out of range (have {})", records.len()))?;
        let bg = block_graph(&u.assemble_design(r.canonical_choice))?;
        let comment = format!("block graph of design {} (|Aut| = {})", r.canonical_choice, r.aut_order);
        write(&cfg.out, &format!("block_graph_{i:04}.dimacs"), &bg.graph.to_dimacs(&comment))?;
    }
    Ok(())
}

fn analysis_lines(out: &mut Outcome, s: &AnalysisStage) {
    let h: Vec<String> = s.rank_histogram().iter().map(|(k, v)| format!("{k}:{v}")).collect();
    out.say(format!("2-rank histogram: {{{}}}", h.join(", ")));
    out.say(format!("automorphism orders at 2-rank 12: {:?}", s.rank12_orders()));
    out.say(format!(
        "SRG{} verified on {} of {} block graphs",
        qsd_core::analysis::SRG_PARAMS,
        s.records.len() - s.srg_failures(),
        s.records.len()
    ));
    out.say(format!("distinct fingerprints: {}", s.distinct_fingerprints()));
}

/// Analyzes the records in `<out>/classification.json` (or `input`).
pub fn cmd_analyze(cfg: &RunConfig, input: Option<&Path>) -> Result<Outcome> {
    let path = input.map(Path::to_path_buf).unwrap_or_else(|| cfg.out.join("classification.json"));
    let text = fs::read_to_string(&path)
        .with_context(|| format!("reading {} (run `qsd classify` first)", path.display()))?;
    let records = classification_from_json(&text)?;
    let u = build_universe(cfg.fault)?;
    let s = with_threads(cfg.threads, || run_analysis(&u, &records))??;
    let mut out = Outcome { enforce: true, ..Outcome::default() };
    analysis_lines(&mut out, &s);
    write_analysis(cfg, &s)?;
    if cfg.dimacs {
        write_dimacs(cfg, &u, &records)?;
    }
    out.timings.push(("analysis", s.elapsed));
    let all = anchors::analysis_anchors(Ok(&s));
    // SRG and coclique structure always count; distribution checks only under --verify
    out.anchors = if cfg.verify.is_some() {
        all
    } else {
        all.into_iter().filter(|a| matches!(a.id.as_str(), "analysis.srg" | "analysis.cocliques")).collect()
    };
    Ok(out)
}

#[derive(Serialize)]
struct ReportJson<'a> {
    anchors: &'a [Anchor],
    failed: usize,
    first_failed: Option<&'a str>,
    total: usize,
}

/// Every stage in one pass, with the full reference matrix.
pub fn cmd_reproduce(cfg: &RunConfig) -> Result<Outcome> {
    let level = cfg.verify.unwrap_or_default();
    let mut out = Outcome { enforce: true, ..Outcome::default() };
    let geometry = Geometry::new();

    with_threads(cfg.threads, || -> Result<()> {
        let code = run_code(&geometry);
        match &code {
            Ok(s) => {
                code_lines(&mut out, s);
                write(&cfg.out, "weight_enumerator.json", &to_sorted_json(&code_artifact(s))?)?;
                out.timings.push(("code", s.elapsed));
            }
            Err(e) => out.say(format!("code stage failed: {e}")),
        }
        let code_err = code.as_ref().err().map(|e| e.to_string());
        out.anchors.extend(anchors::code_anchors(code.as_ref().map_err(|_| code_err.as_deref().unwrap())));

        let u = build_universe(cfg.fault)?;
        let cl = run_cliques(&u);
        clique_lines(&mut out, &cl);
        write_cliques(cfg, &u)?;
        out.timings.push(("cliques", cl.elapsed));
        out.anchors.extend(anchors::clique_anchors(Ok(&cl)));

        let grp = run_group(&u);
        let grp_err = grp.as_ref().err().map(|e| e.to_string());
        let grp_view = grp.as_ref().map(|(g, _, _)| g).map_err(|_| grp_err.as_deref().unwrap());
        out.anchors.extend(anchors::group_anchors(grp_view));
        if let Ok((g, _, _)) = &grp {
            out.timings.push(("group", g.elapsed));
            for c in &g.involution_classes {
                out.say(format!(
                    "involution class: {} members, centralizer {}, normalizer {}",
                    c.class_size,
                    c.centralizer_order,
                    group(c.normalizer_order)
                ));
            }
        }

        let skip_msg = |what: &str| format!("{what} stage did not run");
        let orbit_stage = grp.as_ref().ok().map(|(_, q, classes)| run_orbits(&u, q, classes));
        let orbit_err = grp_err.clone().unwrap_or_else(|| skip_msg("group"));
        out.anchors.extend(anchors::orbit_anchors(orbit_stage.as_ref().ok_or(orbit_err.as_str())));
        if let Some(o) = &orbit_stage {
            out.timings.push(("orbits", o.elapsed));
        }

        let cls = match &grp {
            Ok((_, q, classes)) => run_classify(&u, q, classes, level),
            Err(_) => Err(anyhow!(orbit_err.clone())),
        };
        let cls_err = cls.as_ref().err().map(|e| e.to_string());
        out.anchors.extend(anchors::classify_anchors(cls.as_ref().map_err(|_| cls_err.as_deref().unwrap())));
        if let Ok(s) = &cls {
            classify_lines(&mut out, s);
            write_classification(cfg, s, orbit_stage.as_ref())?;
            out.timings.push(("classify", s.elapsed));
        }

        let ana = match &cls {
            Ok(s) => run_analysis(&u, &s.classification.records),
            Err(e) => Err(anyhow!("classification stage failed: {e}")),
        };
        let ana_err = ana.as_ref().err().map(|e| e.to_string());
        out.anchors.extend(anchors::analysis_anchors(ana.as_ref().map_err(|_| ana_err.as_deref().unwrap())));
        if let (Ok(a), Ok(s)) = (&ana, &cls) {
            analysis_lines(&mut out, a);
            write_analysis(cfg, a)?;
            if cfg.dimacs {
                write_dimacs(cfg, &u, &s.classification.records)?;
            }
            out.timings.push(("analysis", a.elapsed));
        }
        Ok(())
    })??;

    let failed = out.failed();
    out.say(format!("{} of {} anchors passed", out.anchors.len() - failed, out.anchors.len()));
    if let Some(a) = out.first_failed() {
        let msg = format!("first failed anchor: {}", a.id);
        out.say(msg);
    }
    let report = ReportJson {
        anchors: &out.anchors,
        failed,
        first_failed: out.first_failed().map(|a| a.id.as_str()),
        total: out.anchors.len(),
    };
    write(&cfg.out, "report.json", &to_sorted_json(&report)?)?;
    let mut txt: String = out.anchors.iter().map(|a| a.line() + "\n").collect();
    txt.push_str(&format!("{} of {} anchors passed\n", out.anchors.len() - failed, out.anchors.len()));
    write(&cfg.out, "report.txt", &txt)?;
    Ok(out)
}
