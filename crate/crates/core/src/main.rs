use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use tclab::bench_harness::{parse_plan, run_plan, write_csv, BenchRow};
use tclab::closed_form::{csv_row, predict, CSV_HEADER};
use tclab::engines::{evaluate, EngineKind};
use tclab::graph_gen::generate;
use tclab::io_formats::{read_edges, write_edges, write_paths, FactFormat};
use tclab::model::{Family, GraphSpec, RecursionVariant};
use tclab::verify::{verify_random, verify_spec, VerifyError};

#[derive(Parser)]
#[command(name = "tclab", version, about = "Transitive-closure inference lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the edge facts of a graph family instance.
    Gen {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value = "tsv")]
        format: FactFormat,
        /// Output file; facts go to standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the closure of an edge file with one engine.
    Run {
        #[arg(long)]
        engine: EngineKind,
        #[arg(long)]
        variant: RecursionVariant,
        #[arg(long, default_value = "tsv")]
        format: FactFormat,
        edges: PathBuf,
        /// Output file for the path facts; discarded when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the closed-form counts of a family instance as CSV.
    Predict {
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Cross-check engines, oracles and closed forms.
    Verify {
        family: Option<Family>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        h: Option<u64>,
        /// Check this many random digraphs instead of a family instance.
        #[arg(long, conflicts_with = "family")]
        random: Option<usize>,
        #[arg(long, default_value_t = 30)]
        max_n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a benchmark plan and write the timing CSV.
    Bench {
        plan: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SpecArgs {
    family: Family,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    h: Option<u64>,
}

impl SpecArgs {
    fn spec(&self) -> Result<GraphSpec> {
        let spec = GraphSpec::from_parts(self.family, self.n, self.k, self.h)?;
        spec.validate()?;
        Ok(spec)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Gen { spec, format, out } => cmd_gen(&spec.spec()?, format, out.as_deref()),
        Command::Run {
            engine,
            variant,
            format,
            edges,
            out,
        } => cmd_run(engine, variant, format, &edges, out.as_deref()),
        Command::Predict { spec } => {
            let spec = spec.spec()?;
            let p = predict(&spec)?;
            println!("{CSV_HEADER}");
            println!("{}", csv_row(&spec, &p));
            Ok(())
        }
        Command::Verify {
            family,
            n,
            k,
            h,
            random,
            max_n,
            seed,
        } => cmd_verify(family, n, k, h, random, max_n, seed),
        Command::Bench { plan, out } => cmd_bench(&plan, &out),
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn cmd_gen(spec: &GraphSpec, format: FactFormat, out: Option<&Path>) -> Result<()> {
    let edges = generate(spec)?;
    match out {
        Some(path) => {
            let mut w = create(path)?;
            write_edges(&mut w, &edges, format)?;
            w.flush()?;
            println!("{} edges", edges.len());
        }
        None => {
            let mut w = BufWriter::new(io::stdout().lock());
            write_edges(&mut w, &edges, format)?;
            w.flush()?;
            eprintln!("{} edges", edges.len());
        }
    }
    Ok(())
}

fn cmd_run(
    engine: EngineKind,
    variant: RecursionVariant,
    format: FactFormat,
    edges_path: &Path,
    out: Option<&Path>,
) -> Result<()> {
    let file =
        File::open(edges_path).with_context(|| format!("cannot open {}", edges_path.display()))?;
    let edges = read_edges(BufReader::new(file), format)
        .with_context(|| format!("cannot read {}", edges_path.display()))?;
    let result = evaluate(engine, &edges, variant)?;
    if let Some(path) = out {
        let mut w = create(path)?;
        write_paths(&mut w, &result.paths, format)?;
        w.flush()?;
    }
    let times: Vec<String> = result
        .phase_times
        .iter()
        .map(|(phase, d)| format!("{phase}_ms={:.3}", d.as_secs_f64() * 1e3))
        .collect();
    println!(
        "engine={engine} variant={variant} paths={} {} {}",
        result.paths.len(),
        result.instr,
        times.join(" ")
    );
    Ok(())
}

fn cmd_verify(
    family: Option<Family>,
    n: Option<u64>,
    k: Option<u64>,
    h: Option<u64>,
    random: Option<usize>,
    max_n: u32,
    seed: u64,
) -> Result<()> {
    let outcome = match (family, random) {
        (Some(family), None) => {
            let spec = GraphSpec::from_parts(family, n, k, h)?;
            verify_spec(&spec)
        }
        (None, Some(count)) => {
            if max_n == 0 {
                bail!("--max-n must be at least 1");
            }
            verify_random(count, max_n, seed)
        }
        _ => bail!("give either a family or --random <count>"),
    };
    match outcome {
        Ok(report) => {
            println!("PASS {} ({} checks)", report.summary, report.checks);
            Ok(())
        }
        Err(VerifyError::Mismatch(m)) => bail!("FAIL {m}"),
        Err(e) => Err(e.into()),
    }
}

fn cmd_bench(plan_path: &Path, out: &Path) -> Result<()> {
    let file =
        File::open(plan_path).with_context(|| format!("cannot open {}", plan_path.display()))?;
    let plan =
        parse_plan(BufReader::new(file)).with_context(|| format!("in {}", plan_path.display()))?;
    let rows = run_plan(&plan)?;
    let mut w = create(out)?;
    write_csv(&mut w, &rows)?;
    w.flush()?;
    let failures = rows
        .iter()
        .filter(|r| matches!(r, BenchRow::Failure { .. }))
        .count();
    for row in &rows {
        if let BenchRow::Failure { entry, message } = row {
            eprintln!(
                "failed: {} {} {}: {message}",
                entry.spec, entry.variant, entry.engine
            );
        }
    }
    println!(
        "{} rows written to {}",
        rows.len() - failures,
        out.display()
    );
    if failures > 0 {
        bail!("{failures} plan entries failed");
    }
    Ok(())
}
