//! Benchmark plans, per-phase timing and CSV output.
//!
//! Each plan entry generates its edge file once, then runs one untimed warmup
//! followed by `repeats` timed runs of ReadData (parse the edge file), the
//! engine's evaluation phases and WriteRes (serialize the paths). Times are
//! averaged over the repeats; counters come from the last run.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::engines::{evaluate, EngineKind, Phase};
use crate::graph_gen::generate;
use crate::io_formats::{read_edges, write_edges, write_paths, FactFormat};
use crate::model::{Family, GraphSpec, Instrumentation, RecursionVariant, SpecViolation};

pub const CSV_HEADER: &str = "family,n,k,h,variant,engine,phase,time_ms,time_sd,rec_firings,base_firings,probes,iterations,tables_created,paths";
pub const CSV_NOTE: &str =
    "# LoadRules is always 0: the rules are compiled into the engines, not loaded at run time";

pub const DEFAULT_REPEATS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PlanEntry {
    pub spec: GraphSpec,
    pub variant: RecursionVariant,
    pub engine: EngineKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchPlan {
    pub entries: Vec<PlanEntry>,
    pub repeats: usize,
    pub format: FactFormat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub entry: PlanEntry,
    pub phase: Phase,
    /// Mean over repeats, in milliseconds.
    pub time_ms: f64,
    /// Population standard deviation over repeats, in milliseconds.
    pub time_sd: f64,
    pub instr: Instrumentation,
    pub paths: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BenchRow {
    Record(BenchRecord),
    /// The entry was aborted; no phase records were produced for it.
    Failure {
        entry: PlanEntry,
        message: String,
    },
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("plan has no entries")]
    EmptyPlan,
    #[error("repeats must be at least 1")]
    ZeroRepeats,
    #[error("invalid spec in plan entry {index}: {violation}")]
    InvalidSpec {
        index: usize,
        violation: SpecViolation,
    },
    #[error("plan line {line}: {message}")]
    PlanSyntax { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl BenchPlan {
    pub fn validate(&self) -> Result<(), BenchError> {
        if self.entries.is_empty() {
            return Err(BenchError::EmptyPlan);
        }
        if self.repeats == 0 {
            return Err(BenchError::ZeroRepeats);
        }
        for (index, entry) in self.entries.iter().enumerate() {
            entry
                .spec
                .validate()
                .map_err(|violation| BenchError::InvalidSpec { index, violation })?;
        }
        Ok(())
    }
}

/// Values of `k` for a two-parameter family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KRange {
    Values(Vec<u64>),
    /// `k` follows `n`.
    EqualsN,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParamRanges {
    pub n: Vec<u64>,
    pub k: Option<KRange>,
    pub h: Vec<u64>,
}

/// Cartesian-product plan over one family's parameters, the variants and the
/// engines, in that nesting order.
pub fn sweep(
    family: Family,
    ranges: &ParamRanges,
    variants: &[RecursionVariant],
    engines: &[EngineKind],
    repeats: usize,
    format: FactFormat,
) -> Result<BenchPlan, BenchError> {
    let mut specs = Vec::new();
    let invalid = |violation| BenchError::InvalidSpec {
        index: 0,
        violation,
    };
    if family.takes_h() {
        for &h in &ranges.h {
            specs.push(GraphSpec::from_parts(family, None, None, Some(h)).map_err(invalid)?);
        }
    } else {
        for &n in &ranges.n {
            let ks: Vec<Option<u64>> = match (&ranges.k, family.takes_k()) {
                (Some(KRange::Values(ks)), true) => ks.iter().copied().map(Some).collect(),
                (Some(KRange::EqualsN), true) => vec![Some(n)],
                (None, false) => vec![None],
                (None, true) => vec![None],
                (Some(_), false) => vec![Some(0)],
            };
            for k in ks {
                specs.push(GraphSpec::from_parts(family, Some(n), k, None).map_err(invalid)?);
            }
        }
    }
    let mut entries = Vec::new();
    for spec in specs {
        for &variant in variants {
            for &engine in engines {
                entries.push(PlanEntry {
                    spec,
                    variant,
                    engine,
                });
            }
        }
    }
    let plan = BenchPlan {
        entries,
        repeats,
        format,
    };
    plan.validate()?;
    Ok(plan)
}

/// Runs every entry sequentially. Edge and result files live in a temporary
/// directory removed on return.
pub fn run_plan(plan: &BenchPlan) -> Result<Vec<BenchRow>, BenchError> {
    plan.validate()?;
    let dir = tempfile::tempdir()?;
    let mut edge_files: HashMap<GraphSpec, PathBuf> = HashMap::new();
    let mut rows = Vec::new();

    for entry in &plan.entries {
        let edge_path = match edge_files.get(&entry.spec) {
            Some(p) => p.clone(),
            None => {
                let edges = generate(&entry.spec).expect("plan was validated");
                let path = dir.path().join(format!(
                    "edges{}.{}",
                    edge_files.len(),
                    plan.format.extension()
                ));
                let mut out = BufWriter::new(File::create(&path)?);
                write_edges(&mut out, &edges, plan.format)?;
                out.flush()?;
                edge_files.insert(entry.spec, path.clone());
                path
            }
        };
        let result_path = dir
            .path()
            .join(format!("paths.{}", plan.format.extension()));

        let mut samples: BTreeMap<Phase, Vec<Duration>> = BTreeMap::new();
        let mut last = None;
        let mut failure = None;
        for run in 0..=plan.repeats {
            match run_once(entry, &edge_path, &result_path, plan.format) {
                Ok((times, instr, paths)) => {
                    if run > 0 {
                        for (phase, d) in times {
                            samples.entry(phase).or_default().push(d);
                        }
                    }
                    last = Some((instr, paths));
                }
                Err(message) => {
                    failure = Some(message);
                    break;
                }
            }
        }
        if let Some(message) = failure {
            rows.push(BenchRow::Failure {
                entry: *entry,
                message,
            });
            continue;
        }
        let (instr, paths) = last.expect("at least one run");
        for phase in phases_for(entry.engine) {
            let (time_ms, time_sd) = match phase {
                Phase::LoadRules => (0.0, 0.0),
                _ => mean_sd(&samples[&phase]),
            };
            rows.push(BenchRow::Record(BenchRecord {
                entry: *entry,
                phase,
                time_ms,
                time_sd,
                instr,
                paths,
            }));
        }
    }
    Ok(rows)
}

/// Phases recorded for an engine, in CSV order.
pub fn phases_for(engine: EngineKind) -> Vec<Phase> {
    let mut phases = vec![Phase::LoadRules, Phase::ReadData];
    phases.extend_from_slice(engine.eval_phases());
    phases.push(Phase::WriteRes);
    phases
}

type RunOutput = (BTreeMap<Phase, Duration>, Instrumentation, u64);

fn run_once(
    entry: &PlanEntry,
    edge_path: &Path,
    result_path: &Path,
    format: FactFormat,
) -> Result<RunOutput, String> {
    let mut times = BTreeMap::new();

    let start = Instant::now();
    let file = File::open(edge_path).map_err(|e| e.to_string())?;
    let edges = read_edges(BufReader::new(file), format).map_err(|e| e.to_string())?;
    times.insert(Phase::ReadData, start.elapsed());

    let result = evaluate(entry.engine, &edges, entry.variant).map_err(|e| e.to_string())?;
    times.extend(result.phase_times.iter().map(|(&p, &d)| (p, d)));

    let start = Instant::now();
    let file = File::create(result_path).map_err(|e| e.to_string())?;
    let mut out = BufWriter::new(file);
    write_paths(&mut out, &result.paths, format)
        .and_then(|_| out.flush())
        .map_err(|e| e.to_string())?;
    drop(out);
    times.insert(Phase::WriteRes, start.elapsed());

    Ok((times, result.instr, result.paths.len() as u64))
}

fn mean_sd(samples: &[Duration]) -> (f64, f64) {
    let ms: Vec<f64> = samples.iter().map(|d| d.as_secs_f64() * 1e3).collect();
    let n = ms.len() as f64;
    let mean = ms.iter().sum::<f64>() / n;
    let var = ms.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Writes the note line, the header and one line per row.
pub fn write_csv<W: Write>(out: &mut W, rows: &[BenchRow]) -> io::Result<()> {
    writeln!(out, "{CSV_NOTE}")?;
    writeln!(out, "{CSV_HEADER}")?;
    let cell = |v: Option<u64>| v.map(|v| v.to_string()).unwrap_or_default();
    for row in rows {
        match row {
            BenchRow::Record(r) => {
                let spec = &r.entry.spec;
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{:.6},{:.6},{},{},{},{},{},{}",
                    spec.family(),
                    cell(spec.n()),
                    cell(spec.k()),
                    cell(spec.h()),
                    r.entry.variant,
                    r.entry.engine,
                    r.phase,
                    r.time_ms,
                    r.time_sd,
                    r.instr.rec_firings,
                    r.instr.base_firings,
                    r.instr.probes,
                    r.instr.iterations,
                    r.instr.tables_created,
                    r.paths
                )?;
            }
            BenchRow::Failure { entry, message } => {
                writeln!(
                    out,
                    "# FAILED {} {} {}: {}",
                    entry.spec, entry.variant, entry.engine, message
                )?;
            }
        }
    }
    Ok(())
}

/// Parses a plan file.
///
/// ```text
/// # comment
/// repeats=5
/// format=tsv
/// path n=10 left minincrement
/// w n=8 k=n double topdown
/// bintree h=4 right ground
/// ```
pub fn parse_plan<R: BufRead>(input: R) -> Result<BenchPlan, BenchError> {
    let mut repeats = DEFAULT_REPEATS;
    let mut format = FactFormat::Tsv;
    let mut entries = Vec::new();

    for (i, line) in input.lines().enumerate() {
        let line_no = i + 1;
        let syntax = |message: String| BenchError::PlanSyntax {
            line: line_no,
            message,
        };
        let line = line?;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(v) = line.strip_prefix("repeats=") {
            repeats = v
                .trim()
                .parse()
                .map_err(|_| syntax(format!("bad repeats value `{v}`")))?;
            if repeats == 0 {
                return Err(syntax("repeats must be at least 1".into()));
            }
            continue;
        }
        if let Some(v) = line.strip_prefix("format=") {
            format = v.trim().parse().map_err(|e| syntax(format!("{e}")))?;
            continue;
        }

        let mut tokens = line.split_whitespace();
        let family: Family = tokens
            .next()
            .expect("line is not empty")
            .parse()
            .map_err(|e| syntax(format!("{e}")))?;
        let (mut n, mut k, mut h) = (None, None, None);
        let mut k_equals_n = false;
        let mut positional = Vec::new();
        for tok in tokens {
            match tok.split_once('=') {
                Some(("k", "n")) => k_equals_n = true,
                Some((key, value)) => {
                    let v: u64 = value
                        .parse()
                        .map_err(|_| syntax(format!("bad value in `{tok}`")))?;
                    match key {
                        "n" => n = Some(v),
                        "k" => k = Some(v),
                        "h" => h = Some(v),
                        _ => return Err(syntax(format!("unknown parameter `{key}`"))),
                    }
                }
                None => positional.push(tok),
            }
        }
        if k_equals_n {
            k = Some(n.ok_or_else(|| syntax("k=n requires n".into()))?);
        }
        let [variant, engine] = positional[..] else {
            return Err(syntax(format!(
                "expected `<family> <params> <variant> <engine>`, got {} positional fields",
                positional.len()
            )));
        };
        let variant: RecursionVariant = variant.parse().map_err(|e| syntax(format!("{e}")))?;
        let engine: EngineKind = engine.parse().map_err(|e| syntax(format!("{e}")))?;
        let spec = GraphSpec::from_parts(family, n, k, h).map_err(|e| syntax(e.to_string()))?;
        spec.validate().map_err(|e| syntax(e.to_string()))?;
        entries.push(PlanEntry {
            spec,
            variant,
            engine,
        });
    }

    let plan = BenchPlan {
        entries,
        repeats,
        format,
    };
    plan.validate()?;
    Ok(plan)
}
