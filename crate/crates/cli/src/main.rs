use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use facekit::face::{self, RelOpenCell};
use facekit::harness::{self, Counterexample, Law, Mutation, PolytopeRequest, RunOptions, Shape, SuiteReport};
use facekit::measure::{self, AtomicMeasure};
use facekit::pmf::{self, PmfFamily};
use facekit::rational::{fmt_rat, parse_rat, Rat};
use facekit::{ConvexBody, Execution, Vector};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "facekit", version, about = "Exact face calculus for convex sets")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Pretty)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Face generated by a point: descriptor and relative-interior cell.
    FaceOfPoint(SetPoint),
    /// Whether a point lies in the relative algebraic interior of the set.
    RaiTest(SetPoint),
    /// Partition of a V-polytope into relative interiors of its faces.
    Partition {
        #[arg(long)]
        set: PathBuf,
        /// Random points to locate in the partition.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, env = "FACEKIT_SEED", default_value_t = 42)]
        seed: u64,
    },
    /// Face lattice of a V-polytope.
    Faces {
        #[arg(long)]
        set: PathBuf,
    },
    /// Runs one law suite and prints its summary.
    Laws(SuiteArgs),
    /// Law suites with JSON-lines reports.
    #[command(subcommand)]
    Suite(SuiteCommand),
    /// Re-checks a stored counterexample.
    Replay {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Seeded random polytope.
    Gen {
        #[arg(long, env = "FACEKIT_SEED", default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        dim: usize,
        #[arg(long, conflicts_with = "rows")]
        vertices: Option<usize>,
        #[arg(long)]
        rows: Option<usize>,
        /// Force (true) or forbid (false) a lower-dimensional instance.
        #[arg(long)]
        degenerate: Option<bool>,
    },
    /// Faces of the probability simplex on the positive integers.
    #[command(subcommand)]
    Pmf(PmfCommand),
    /// Convex-core membership of a probe for an atomic measure.
    Cc {
        #[arg(long)]
        measure: PathBuf,
        #[arg(long)]
        probe: String,
    },
}

#[derive(Args)]
struct SetPoint {
    /// JSON file with an H-polyhedron (`rows`) or a V-polytope (`vertices`).
    #[arg(long)]
    set: PathBuf,
    /// Point such as `[1/2, 0]`.
    #[arg(long)]
    point: String,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long)]
    law: String,
    #[arg(long, env = "FACEKIT_SEED", default_value_t = 42)]
    seed: u64,
    /// Instances; defaults to the law's own count.
    #[arg(long)]
    count: Option<u64>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Run on the calling thread only.
    #[arg(long)]
    sequential: bool,
    /// Inject a defect to exercise failure reports.
    #[arg(long)]
    mutation: Option<String>,
}

#[derive(Subcommand)]
enum SuiteCommand {
    /// Runs a suite; exit status 1 if any instance fails.
    Run {
        #[command(flatten)]
        args: SuiteArgs,
        /// JSON-lines report destination.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Registered law ids.
    List,
}

/// A pmf is given inline as JSON or as `@path` to a JSON file.
#[derive(Subcommand)]
enum PmfCommand {
    /// Whether `q` lies in the face generated by `p`.
    FaceTest {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// Whether `q` lies in the relative interior of the face of `p`.
    RaiTest {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// Whether `q` lies in the union of faces of the power family above `t`.
    Chain {
        #[arg(long)]
        t: String,
        #[arg(long)]
        q: String,
    },
    /// Support set describing the norm closure of the face of `p`.
    Closure {
        #[arg(long)]
        p: String,
    },
    /// Total-variation distance between `p` and `q`.
    Tv {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
}

/// Parses `[a, b, …]` with rational entries, quoted or not.
fn parse_point(s: &str) -> Result<Vector> {
    let inner = s.trim().strip_prefix('[').and_then(|t| t.strip_suffix(']')).context("point must look like [1/2, 0]")?;
    if inner.trim().is_empty() {
        return Ok(Vector(Vec::new()));
    }
    let coords = inner
        .split(',')
        .map(|c| parse_rat(c.trim().trim_matches('"')))
        .collect::<facekit::Result<Vec<Rat>>>()?;
    Ok(Vector(coords))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn parse_pmf(arg: &str) -> Result<PmfFamily> {
    match arg.strip_prefix('@') {
        Some(path) => read_json(Path::new(path)),
        None => serde_json::from_str(arg).context("parsing pmf JSON"),
    }
}

fn vpolytope(body: ConvexBody) -> Result<facekit::VPolytope> {
    match body {
        ConvexBody::V(v) => Ok(v),
        ConvexBody::H(_) => bail!("this command needs a V-polytope (`vertices`)"),
    }
}

struct Out {
    format: Format,
}

impl Out {
    fn emit(&self, value: &impl Serialize, pretty: impl FnOnce() -> String) -> Result<()> {
        match self.format {
            Format::Json => println!("{}", serde_json::to_string(value)?),
            Format::Pretty => println!("{}", pretty()),
        }
        Ok(())
    }
}

fn indices(cell: &RelOpenCell) -> String {
    format!("{:?}", cell.face.indices())
}

fn suite_options(args: &SuiteArgs) -> Result<(Law, u64, RunOptions)> {
    let law: Law = args.law.parse()?;
    let mutation = args.mutation.as_deref().map(str::parse::<Mutation>).transpose()?;
    let exec = if args.sequential { Execution::Sequential } else { Execution::Parallel };
    let count = args.count.unwrap_or_else(|| law.default_count());
    Ok((law, count, RunOptions { exec, jobs: args.jobs, mutation }))
}

fn summary_line(r: &SuiteReport) -> String {
    let s = &r.summary;
    format!(
        "{}: {}/{} passed (seed {}, {} checks, {} ms)",
        s.law, s.passed, s.count, s.seed, s.checks, s.wall_ms
    )
}

fn run(cli: Cli) -> Result<ExitCode> {
    let out = Out { format: cli.format };
    match cli.command {
        Command::FaceOfPoint(sp) => {
            let body: ConvexBody = read_json(&sp.set)?;
            let x = parse_point(&sp.point)?;
            let cell = face::d_face_of_point(&body, &x)?;
            let rai = face::rai_contains(&body, &x)?;
            out.emit(&json!({ "cell": cell, "rai": rai }), || {
                format!("face {}\nstrict {:?}\nin relative interior of K: {rai}", indices(&cell), cell.strict)
            })?;
        }
        Command::RaiTest(sp) => {
            let body: ConvexBody = read_json(&sp.set)?;
            let x = parse_point(&sp.point)?;
            let rai = face::rai_contains(&body, &x)?;
            out.emit(&json!({ "rai": rai }), || format!("{rai}"))?;
        }
        Command::Partition { set, samples, seed } => {
            let v = vpolytope(read_json(&set)?)?;
            let body = ConvexBody::V(v.clone());
            let cells = face::partition_cells(&v)?;
            let mut rng = harness::generate::rng_for(seed);
            let mut located = Vec::with_capacity(samples);
            for _ in 0..samples {
                let y = facekit::sample::in_polytope_v(&v, &mut rng)?;
                let hits: Vec<usize> = cells
                    .iter()
                    .enumerate()
                    .filter_map(|(i, c)| face::cell_contains(&body, c, &y).ok().filter(|b| *b).map(|_| i))
                    .collect();
                located.push(hits);
            }
            let covered = located.iter().all(|h| h.len() == 1);
            out.emit(&json!({ "count": cells.len(), "cells": cells, "samples": samples, "covered": covered }), || {
                let mut s = format!("{} cells", cells.len());
                for c in &cells {
                    s.push_str(&format!("\n  {}", indices(c)));
                }
                if samples > 0 {
                    s.push_str(&format!("\n{samples} samples, each in exactly one cell: {covered}"));
                }
                s
            })?;
        }
        Command::Faces { set } => {
            let v = vpolytope(read_json(&set)?)?;
            let faces = face::enumerate_faces(&v)?;
            out.emit(&json!({ "count": faces.len(), "faces": faces }), || {
                let mut s = format!("{} faces", faces.len());
                for f in &faces {
                    s.push_str(&format!("\n  {:?}", f.indices()));
                }
                s
            })?;
        }
        Command::Laws(args) => {
            let (law, count, opts) = suite_options(&args)?;
            let report = harness::run_suite(law, args.seed, count, opts)?;
            let failures: Vec<&Counterexample> = report.counterexamples().collect();
            out.emit(&json!({ "summary": report.summary, "counterexamples": failures }), || {
                let mut s = summary_line(&report);
                for r in report.records.iter().filter(|r| !r.passed) {
                    s.push_str(&format!("\n  #{}: {}", r.index, r.failure.as_deref().unwrap_or("failed")));
                }
                s
            })?;
            return Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
        Command::Suite(SuiteCommand::List) => {
            let laws: Vec<Value> = Law::ALL
                .iter()
                .map(|l| json!({ "law": l, "default_count": l.default_count(), "description": l.description() }))
                .collect();
            out.emit(&laws, || {
                Law::ALL
                    .iter()
                    .map(|l| format!("{:<22}{:>6}  {}", l.id(), l.default_count(), l.description()))
                    .collect::<Vec<_>>()
                    .join("\n")
            })?;
        }
        Command::Suite(SuiteCommand::Run { args, out: path }) => {
            let (law, count, opts) = suite_options(&args)?;
            let report = harness::run_suite(law, args.seed, count, opts)?;
            match &path {
                Some(p) => {
                    let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
                    let mut w = BufWriter::new(f);
                    report.write_jsonl(&mut w)?;
                    w.flush()?;
                    out.emit(&json!({ "summary": report.summary }), || summary_line(&report))?;
                }
                None if out.format == Format::Json => report.write_jsonl(std::io::stdout().lock())?,
                None => println!("{}", summary_line(&report)),
            }
            return Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
        Command::Replay { input } => {
            let value: Value = read_json(&input)?;
            // accept a bare counterexample or a report line carrying one
            let cx: Counterexample = match value.get("counterexample") {
                Some(inner) => serde_json::from_value(inner.clone())?,
                None => serde_json::from_value(value)?,
            };
            let rep = harness::replay(&cx)?;
            out.emit(&rep, || {
                format!(
                    "{} #{}: passed {}, reproduced {}, regenerated instance matches {}{}",
                    cx.law,
                    cx.index,
                    rep.outcome.passed,
                    rep.reproduced,
                    rep.regenerated_matches,
                    rep.outcome.failure.as_ref().map(|f| format!("\n  {f}")).unwrap_or_default()
                )
            })?;
            return Ok(if rep.reproduced { ExitCode::SUCCESS } else { ExitCode::FAILURE });
        }
        Command::Gen { seed, dim, vertices, rows, degenerate } => {
            let shape = match (vertices, rows) {
                (Some(n_vertices), None) => Shape::V { n_vertices },
                (None, Some(n_rows)) => Shape::H { n_rows },
                _ => bail!("give exactly one of --vertices or --rows"),
            };
            let body = harness::gen_polytope(seed, &PolytopeRequest { dim, shape, degenerate })?;
            println!("{}", serde_json::to_string_pretty(&body)?);
        }
        Command::Pmf(cmd) => pmf_command(cmd, &out)?,
        Command::Cc { measure: path, probe } => {
            let mu: AtomicMeasure = read_json(&path)?;
            let a = parse_point(&probe)?;
            let verdict = measure::cc_contains(&mu, &a)?;
            let (density, via_face) = measure::rai_routes(&mu, &a)?;
            out.emit(&json!({ "cc": verdict, "rai": density, "rai_face_route": via_face }), || {
                format!(
                    "in convex core: {}\nin its relative interior: {density} (polytope route agrees: {})",
                    verdict.is_inside(),
                    density == via_face
                )
            })?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn pmf_command(cmd: PmfCommand, out: &Out) -> Result<()> {
    match cmd {
        PmfCommand::FaceTest { p, q } => {
            let (p, q) = (parse_pmf(&p)?, parse_pmf(&q)?);
            let t = pmf::pmf_face_contains(&p, &q)?;
            out.emit(&t, || format!("{} in F({}): {}", q.label(), p.label(), t.member))?;
        }
        PmfCommand::RaiTest { p, q } => {
            let (p, q) = (parse_pmf(&p)?, parse_pmf(&q)?);
            let r = pmf::pmf_rai_contains(&p, &q)?;
            out.emit(&json!({ "rai": r }), || format!("{} in rai F({}): {r}", q.label(), p.label()))?;
        }
        PmfCommand::Chain { t, q } => {
            let t = parse_rat(&t)?;
            let q = parse_pmf(&q)?;
            let member = pmf::chain_face_contains(&t, &q)?;
            out.emit(&json!({ "t": fmt_rat(&t), "member": member }), || {
                format!("{} in the union of F(p_s), s > {}: {member}", q.label(), fmt_rat(&t))
            })?;
        }
        PmfCommand::Closure { p } => {
            let p = parse_pmf(&p)?;
            let s = pmf::face_closure(&p);
            out.emit(&s, || format!("closure of F({}) is the simplex on {s}", p.label()))?;
        }
        PmfCommand::Tv { p, q } => {
            let (p, q) = (parse_pmf(&p)?, parse_pmf(&q)?);
            let d = pmf::tv_distance(&p, &q)?;
            out.emit(&d, || match d.exact() {
                Some(v) => fmt_rat(v).to_string(),
                None => format!("[{}, {}]", fmt_rat(&d.value.lo), fmt_rat(&d.value.hi)),
            })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
