//! `brickbox` command-line front end.
//!
//! Exit status: 0 success, 1 negative answer (untileable, no split, failed
//! verification) with a JSON body, 2 invalid input, 3 search budget or grid
//! cap exhausted.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use brickbox::counterexample::{make_instance, pinwheel_tiling, verify_no_proper_split, NoSplitReport, Verdict};
use brickbox::exact_cover::{exact_cover_tileable, SolverConfig, TileOutcome, DEFAULT_GRID_CAP, DEFAULT_NODE_BUDGET};
use brickbox::geometry::{verify_tiling_geometric, BoxSpec, Brick, Tiling};
use brickbox::spectral::spectral_check;
use brickbox::svg::render_svg;
use brickbox::theorem::{certificate_to_tiling, decide_two_brick, find_split, single_brick_tiling};

#[derive(Parser, Debug)]
#[command(name = "brickbox", version, about = "Box tilings by translates of rectangular bricks")]
struct Cli {
    /// Largest grid (total cells) the exact-cover tiler may build.
    #[arg(long, global = true, default_value_t = DEFAULT_GRID_CAP)]
    grid_cap: u64,

    /// Search-node budget for the exact-cover tiler.
    #[arg(long, global = true, env = "BRICKBOX_NODE_BUDGET", default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,

    /// Write the main output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide two-brick tileability and print the certificate or obstruction.
    Decide(InstanceArgs),
    /// Print a hyperplane split certificate, or `none`.
    Split(InstanceArgs),
    /// Construct an explicit tiling.
    Tile {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Use the exact-cover search even for one or two bricks.
        #[arg(long)]
        oracle: bool,
    },
    /// Check a tiling geometrically (overlap, volume, coverage).
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Sample the residual of the Fourier-side tiling identity.
    Spectral {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Build the three-brick pinwheel instance and check that it admits no proper split.
    Counterexample {
        #[arg(long = "R", short = 'R')]
        r: u64,
        /// Directory for instance.json, tiling.json, tiling.svg and nosplit.json.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Render a planar tiling as SVG.
    Render {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Args, Debug)]
struct InstanceArgs {
    /// Box extents, e.g. `1,1` or `3/2,2`.
    #[arg(long = "box", conflicts_with = "input")]
    box_dims: Option<String>,
    /// Brick extents; repeat for each brick type (order fixes the indices).
    #[arg(long = "brick", conflicts_with = "input")]
    bricks: Vec<String>,
    /// Instance JSON `{"box": [...], "bricks": [[...], ...]}`.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
struct Instance {
    #[serde(rename = "box")]
    box_spec: BoxSpec,
    bricks: Vec<Brick>,
}

impl InstanceArgs {
    fn load(&self) -> anyhow::Result<Instance> {
        if let Some(path) = &self.input {
            return read_json(path);
        }
        let Some(box_dims) = &self.box_dims else { bail!("either --input or --box/--brick is required") };
        let box_spec = BoxSpec::parse(box_dims).with_context(|| format!("--box {box_dims}"))?;
        let bricks = self
            .bricks
            .iter()
            .map(|s| Brick::parse(s).with_context(|| format!("--brick {s}")))
            .collect::<anyhow::Result<Vec<_>>>()?;
        if bricks.is_empty() {
            bail!("at least one --brick is required");
        }
        Ok(Instance { box_spec, bricks })
    }

    fn load_pair(&self) -> anyhow::Result<(BoxSpec, Brick, Brick)> {
        let inst = self.load()?;
        match <[Brick; 2]>::try_from(inst.bricks) {
            Ok([a, b]) => Ok((inst.box_spec, a, b)),
            Err(v) => bail!("exactly two brick types are required, got {}", v.len()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Success,
    Negative,
    Budget,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::Negative => 1,
            Status::Budget => 3,
        }
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

struct Sink {
    output: Option<PathBuf>,
}

impl Sink {
    fn emit(&self, text: &str) -> anyhow::Result<()> {
        match &self.output {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                std::io::stdout().write_all(text.as_bytes())?;
                Ok(())
            }
        }
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> anyhow::Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))
}

fn tile_outcome(outcome: TileOutcome, sink: &Sink) -> anyhow::Result<Status> {
    match outcome {
        TileOutcome::Tiling(t) => {
            sink.emit(&to_json(&t))?;
            Ok(Status::Success)
        }
        TileOutcome::Unsat => {
            sink.emit(&to_json(&serde_json::json!({ "status": "unsat" })))?;
            Ok(Status::Negative)
        }
        TileOutcome::Timeout { nodes } => {
            sink.emit(&to_json(&serde_json::json!({ "status": "timeout", "nodes": nodes })))?;
            Ok(Status::Budget)
        }
    }
}

fn summary_table(report: &NoSplitReport) -> String {
    let mut rows: Vec<(usize, String, usize, usize, usize)> = Vec::new();
    for e in &report.entries {
        let alpha = e.alpha.to_string();
        match rows.last_mut() {
            Some(row) if row.0 == e.axis && row.1 == alpha => {}
            _ => rows.push((e.axis, alpha, 0, 0, 0)),
        }
        let row = rows.last_mut().unwrap();
        row.2 += 1;
        row.3 += usize::from(e.is_split());
        row.4 += usize::from(e.has_timeout());
    }
    let mut out = format!("{:>4}  {:>8}  {:>7}  {:>9}  {:>8}\n", "axis", "alpha", "entries", "both-SAT", "timeouts");
    for (axis, alpha, n, split, timeouts) in rows {
        out.push_str(&format!("{:>4}  {:>8}  {:>7}  {:>9}  {:>8}\n", axis + 1, alpha, n, split, timeouts));
    }
    out
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    let config = SolverConfig { grid_cap: cli.grid_cap, node_budget: cli.node_budget };
    let sink = Sink { output: cli.output };
    match cli.command {
        Command::Decide(args) => {
            let (box_spec, a, b) = args.load_pair()?;
            let outcome = decide_two_brick(&box_spec, &a, &b)?;
            sink.emit(&to_json(&outcome))?;
            Ok(if outcome.tileable { Status::Success } else { Status::Negative })
        }
        Command::Split(args) => {
            let (box_spec, a, b) = args.load_pair()?;
            match find_split(&box_spec, &a, &b)? {
                Some(cert) => {
                    sink.emit(&to_json(&cert))?;
                    Ok(Status::Success)
                }
                None => {
                    sink.emit("none\n")?;
                    Ok(Status::Negative)
                }
            }
        }
        Command::Tile { instance, oracle } => {
            let inst = instance.load()?;
            if oracle || inst.bricks.len() >= 3 {
                return tile_outcome(exact_cover_tileable(&inst.box_spec, &inst.bricks, &config)?, &sink);
            }
            let tiling = match inst.bricks.as_slice() {
                [a] => single_brick_tiling(&inst.box_spec, a)?,
                [a, b] => match find_split(&inst.box_spec, a, b)? {
                    Some(cert) => Some(certificate_to_tiling(&cert, &inst.box_spec, a, b)?),
                    None => None,
                },
                _ => unreachable!("brick count checked when loading"),
            };
            tile_outcome(tiling.map_or(TileOutcome::Unsat, TileOutcome::Tiling), &sink)
        }
        Command::Verify { input } => {
            let t: Tiling = read_json(&input)?;
            let outcome = verify_tiling_geometric(&t);
            sink.emit(&to_json(&outcome))?;
            Ok(if outcome.is_ok() { Status::Success } else { Status::Negative })
        }
        Command::Spectral { input, samples, seed } => {
            let t: Tiling = read_json(&input)?;
            let report = spectral_check(&t, samples, seed)?;
            sink.emit(&to_json(&report))?;
            Ok(if report.passes() { Status::Success } else { Status::Negative })
        }
        Command::Counterexample { r, out_dir } => {
            let inst = make_instance(r)?;
            let tiling = pinwheel_tiling(&inst);
            let geometric = verify_tiling_geometric(&tiling);
            let spectral = spectral_check(&tiling, 1000, 42)?;
            let report = verify_no_proper_split(&inst, &config)?;

            fs::create_dir_all(&out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
            write_file(&out_dir, "instance.json", &to_json(&inst))?;
            write_file(&out_dir, "tiling.json", &to_json(&tiling))?;
            write_file(&out_dir, "tiling.svg", &render_svg(&tiling)?)?;
            write_file(&out_dir, "nosplit.json", &to_json(&report))?;

            let verdict = report.verdict();
            let mut summary = format!(
                "R = {r}: box {}x{}, pinwheel geometric {:?}, spectral max residual {:.3e}\n",
                r + 1,
                r + 1,
                geometric,
                spectral.max_abs_residual
            );
            summary.push_str(&format!("cuts: {}\n", report.cut_lemma()));
            summary.push_str(&summary_table(&report));
            summary.push_str(&format!("verdict: {verdict:?} ({} entries)\n", report.entries.len()));
            sink.emit(&summary)?;

            Ok(match verdict {
                Verdict::NoSplit if geometric.is_ok() && spectral.passes() => Status::Success,
                Verdict::NoSplit | Verdict::SplitFound(_) => Status::Negative,
                Verdict::Undecided { .. } => Status::Budget,
            })
        }
        Command::Render { input } => {
            let t: Tiling = read_json(&input)?;
            sink.emit(&render_svg(&t)?)?;
            Ok(Status::Success)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(status) => ExitCode::from(status.code()),
        Err(err) => {
            eprintln!("error: {err:#}");
            let budget = err
                .downcast_ref::<brickbox::Error>()
                .is_some_and(|e| matches!(e, brickbox::Error::GridTooLarge { .. }));
            ExitCode::from(if budget { Status::Budget.code() } else { 2 })
        }
    }
}
