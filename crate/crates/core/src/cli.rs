//! Command-line interface. The `gromov-walk` binary only calls [`main`].
//!
//! Exit codes: 0 success, 1 invariant failure, 2 configuration or usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::boundary::{BoundaryPoint, End};
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::experiment;
use crate::horo::{classify, classify_by_probing, horo_eval, local_min_map, pointwise_limit_check, Horofunction, LocalMinResult};
use crate::output::{cell, fcell, write_atomic, Table};
use crate::space::{parse_q, Model, ModelSpace};
use crate::strips::{enumerate_bg_in_ball, enumerate_naive, strip_trial, BGParams, BoundaryPair};
use crate::verify::{self, Fault, Level};
use crate::walk::{default_margin, sample_trial, StepDistribution, StepSpec};
use crate::word::Word;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "gromov-walk", version, about = "Random walks, shadows and horofunctions on hyperbolic models")]
pub struct Cli {
    /// Master seed; overrides the seed of a config file.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate and classify horofunctions.
    #[command(subcommand)]
    Horo(HoroCommand),
    /// Print one sample path as CSV.
    Walk(WalkArgs),
    /// Run one estimator from a config file.
    Estimate {
        name: String,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounded-geometry strips.
    #[command(subcommand)]
    Strips(StripsCommand),
    /// Run the invariant suites.
    Verify {
        #[arg(value_parser = ["quick", "full"])]
        level: String,
        /// Deliberately break an inequality to check that the suites notice.
        #[arg(long, value_parser = ["flip-shadow"])]
        inject_fault: Option<String>,
    },
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct HoroArgs {
    /// F<rank>, wedge, line, ZxZ/2 or F2xZ/2.
    #[arg(long)]
    pub model: String,
    /// `orbit:<point>` or `busemann:<boundary point>`.
    #[arg(long)]
    pub horo: String,
    #[arg(long)]
    pub basepoint: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum HoroCommand {
    Eval {
        #[command(flatten)]
        h: HoroArgs,
        /// Evaluation points.
        #[arg(long = "at", required = true, allow_hyphen_values = true)]
        at: Vec<String>,
    },
    Classify {
        #[command(flatten)]
        h: HoroArgs,
        /// Use greedy descent with this budget instead of the structural answer.
        #[arg(long)]
        probe_budget: Option<usize>,
    },
    /// Largest deviation of the last of a sequence from a candidate limit.
    LimitCheck {
        #[arg(long)]
        model: String,
        #[arg(long = "sequence", required = true)]
        sequence: Vec<String>,
        #[arg(long)]
        candidate: String,
        #[arg(long = "at", required = true, allow_hyphen_values = true)]
        at: Vec<String>,
    },
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    #[arg(long, default_value = "F2")]
    pub model: String,
    /// Step distribution as inline JSON or a file; simple walk when absent.
    #[arg(long)]
    pub step: Option<String>,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub trial: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BgArgs {
    #[arg(long, default_value = "1")]
    pub k: String,
    #[arg(long, default_value = "3")]
    pub r: String,
    #[arg(long, default_value = "aba")]
    pub v: String,
}

#[derive(Debug, Subcommand)]
pub enum StripsCommand {
    /// CSV `r,count` of bounded-geometry elements in balls.
    Enumerate {
        #[arg(long, default_value_t = 2)]
        rank: u8,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        beta: String,
        #[command(flatten)]
        bg: BgArgs,
        #[arg(long)]
        max_radius: usize,
        /// Test every word instead of the line neighbourhood.
        #[arg(long)]
        naive: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV `n,log_card_over_n` along one bi-infinite walk.
    Series {
        #[arg(long, default_value = "F2")]
        model: String,
        #[arg(long)]
        step: Option<String>,
        #[command(flatten)]
        bg: BgArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        trial: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `args` and runs the command, writing to stdout and stderr.
pub fn main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match dispatch(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invariant(_) => EXIT_INVARIANT,
        _ => EXIT_CONFIG,
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    let seed = cli.seed;
    match cli.command {
        Command::Horo(cmd) => horo(cmd, out),
        Command::Walk(args) => walk(args, seed.unwrap_or(0), out),
        Command::Estimate { name, config, out: path } => {
            let cfg = load(&config, seed)?;
            if cfg.estimator != name {
                return Err(Error::Config(format!(
                    "config {} is for estimator {:?}, not {name:?}",
                    config.display(),
                    cfg.estimator
                )));
            }
            run_config(&cfg, &config, path, out)
        }
        Command::Run { config, out: path } => {
            let cfg = load(&config, seed)?;
            run_config(&cfg, &config, path, out)
        }
        Command::Strips(cmd) => strips(cmd, seed.unwrap_or(0), out),
        Command::Verify { level, inject_fault } => {
            let level: Level = level.parse()?;
            let fault = if inject_fault.is_some() { Fault::FlipShadowInequality } else { Fault::None };
            let report = verify::run(level, fault);
            writeln!(out, "{report}")?;
            Ok(if report.passed() { EXIT_OK } else { EXIT_INVARIANT })
        }
    }
}

fn load(path: &Path, seed: Option<u64>) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn run_config(cfg: &ExperimentConfig, config_path: &Path, path: Option<PathBuf>, out: &mut dyn Write) -> Result<i32> {
    let result = experiment::run(cfg)?;
    let csv = path.or_else(|| {
        cfg.output.as_ref().map(|o| {
            let o = PathBuf::from(o);
            if o.is_relative() {
                config_path.parent().unwrap_or(Path::new(".")).join(o)
            } else {
                o
            }
        })
    });
    match csv {
        Some(p) => {
            let rec = result.write(&p)?;
            writeln!(out, "wrote {} and {}", p.display(), rec.display())?;
        }
        None => out.write_all(&result.table.to_csv()?)?,
    }
    let summary = serde_json::to_string(&result.record.payload).expect("payload serializes");
    writeln!(out, "# {} {summary}", result.record.estimator)?;
    for f in &result.failures {
        eprintln!("invariant failure: {f}");
    }
    Ok(if result.failures.is_empty() { EXIT_OK } else { EXIT_INVARIANT })
}

fn emit_table(table: &Table, path: Option<PathBuf>, out: &mut dyn Write) -> Result<i32> {
    let bytes = table.to_csv()?;
    match path {
        Some(p) => {
            write_atomic(&p, &bytes)?;
            writeln!(out, "wrote {}", p.display())?;
        }
        None => out.write_all(&bytes)?,
    }
    Ok(EXIT_OK)
}

fn parse_model(s: &str) -> Result<ModelSpace> {
    let model: Model = s.parse().map_err(|e: Error| Error::Config(e.to_string()))?;
    Ok(ModelSpace::new(model))
}

pub fn parse_horofunction(space: &ModelSpace, s: &str) -> Result<Horofunction> {
    let (kind, arg) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("horofunction must be orbit:<point> or busemann:<end>, got {s:?}")))?;
    match kind {
        "orbit" => Ok(Horofunction::orbit(space, space.parse_point(arg)?)),
        "busemann" => Ok(Horofunction::busemann(space, BoundaryPoint::parse(&space.model, arg)?)),
        _ => Err(Error::Parse(format!("unknown horofunction kind {kind:?}"))),
    }
}

fn horo_from(args: &HoroArgs) -> Result<(ModelSpace, Horofunction)> {
    let space = parse_model(&args.model)?;
    let mut h = parse_horofunction(&space, &args.horo)?;
    if let Some(b) = &args.basepoint {
        h = h.with_basepoint(space.parse_point(b)?);
    }
    Ok((space, h))
}

fn print_json(out: &mut dyn Write, v: &Value) -> Result<i32> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("json"))?;
    Ok(EXIT_OK)
}

fn horo(cmd: HoroCommand, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        HoroCommand::Eval { h, at } => {
            let (space, f) = horo_from(&h)?;
            let mut results = Vec::new();
            for p in &at {
                let z = space.parse_point(p)?;
                results.push(json!({"point": z.to_string(), "value": horo_eval(&space, &f, &z)?.to_string()}));
            }
            print_json(out, &json!({
                "type": "horo_eval",
                "params": {"model": space.model.name(), "horofunction": h.horo, "basepoint": h.basepoint},
                "results": results,
            }))
        }
        HoroCommand::Classify { h, probe_budget } => {
            let (space, f) = horo_from(&h)?;
            let class = match probe_budget {
                Some(b) => classify_by_probing(&space, &f, b)?,
                None => classify(&space, &f)?,
            };
            let local_min = match local_min_map(&space, &f) {
                Ok(LocalMinResult::PointSet(s)) => json!(s.iter().map(|p| p.to_string()).collect::<Vec<_>>()),
                Ok(LocalMinResult::Boundary(b)) => json!(b.to_string()),
                Err(Error::Unsupported { .. }) => Value::Null,
                Err(e) => return Err(e),
            };
            print_json(out, &json!({
                "type": "horo_classify",
                "params": {"model": space.model.name(), "horofunction": h.horo, "probe_budget": probe_budget},
                "results": {"class": format!("{class:?}").to_lowercase(), "local_min": local_min},
            }))
        }
        HoroCommand::LimitCheck {
            model,
            sequence,
            candidate,
            at,
        } => {
            let space = parse_model(&model)?;
            let seq = sequence
                .iter()
                .map(|s| parse_horofunction(&space, s))
                .collect::<Result<Vec<_>>>()?;
            let cand = parse_horofunction(&space, &candidate)?;
            let pts = at.iter().map(|p| space.parse_point(p)).collect::<Result<Vec<_>>>()?;
            let dev = pointwise_limit_check(&space, &seq, &cand, &pts)?;
            print_json(out, &json!({
                "type": "horo_limit_check",
                "params": {"model": space.model.name(), "sequence": sequence, "candidate": candidate, "at": at},
                "results": {"deviation": dev.to_string()},
            }))
        }
    }
}

fn step_distribution(space: &ModelSpace, step: Option<&str>) -> Result<StepDistribution> {
    let alphabet = space
        .model
        .alphabet()
        .ok_or_else(|| Error::Config(format!("no random walk on the {} model", space.model.name())))?;
    match step {
        None => match space.model {
            Model::Free { rank } => Ok(StepDistribution::uniform_generators(rank)),
            _ => Err(Error::Config("--step is required for this model".into())),
        },
        Some(s) => {
            let text = if s.trim_start().starts_with('{') {
                s.to_string()
            } else {
                std::fs::read_to_string(s).map_err(|e| Error::Config(format!("cannot read {s}: {e}")))?
            };
            let spec: StepSpec = serde_json::from_str(&text).map_err(|e| Error::Config(format!("step: {e}")))?;
            StepDistribution::from_spec(alphabet, &spec).map_err(|e| Error::Config(e.to_string()))
        }
    }
}

fn walk(args: WalkArgs, seed: u64, out: &mut dyn Write) -> Result<i32> {
    let space = parse_model(&args.model)?;
    let mu = step_distribution(&space, args.step.as_deref())?;
    let path = sample_trial(&mu, args.n, seed, args.trial);
    let mut t = Table::new(&["k", "location", "length"]);
    for k in 0..=args.n {
        let w = path.location(k);
        t.push(vec![cell(k), cell(&w), cell(w.len())]);
    }
    emit_table(&t, args.out, out)
}

fn bg_params(bg: &BgArgs) -> Result<BGParams> {
    let v: Word = bg.v.parse()?;
    BGParams::new(parse_q(&bg.k)?, parse_q(&bg.r)?, v)
}

fn strips(cmd: StripsCommand, seed: u64, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        StripsCommand::Enumerate {
            rank,
            alpha,
            beta,
            bg,
            max_radius,
            naive,
            out: path,
        } => {
            let space = ModelSpace::new(Model::Free { rank });
            let params = bg_params(&bg)?;
            let pair = BoundaryPair::new(End::parse(&alpha)?, End::parse(&beta)?)?;
            let mut t = Table::new(&["r", "count"]);
            for r in 0..=max_radius {
                let found = if naive {
                    enumerate_naive(&space, &pair, &params, r, 1 << 24)?
                } else {
                    enumerate_bg_in_ball(&space, &pair, &params, r, 1 << 24)?
                };
                t.push(vec![cell(r), cell(found.len())]);
            }
            emit_table(&t, path, out)
        }
        StripsCommand::Series {
            model,
            step,
            bg,
            ns,
            trial,
            out: path,
        } => {
            let space = parse_model(&model)?;
            let mu = step_distribution(&space, step.as_deref())?;
            let params = bg_params(&bg)?;
            let s = strip_trial(&space, &mu, &params, &ns, default_margin(&mu), seed, trial)?;
            let mut t = Table::new(&["n", "log_card_over_n"]);
            for (n, v) in &s.points {
                t.push(vec![cell(n), fcell(*v)]);
            }
            let code = emit_table(&t, path, out)?;
            writeln!(
                out,
                "# strip_time_density {} identity_in_strip {}",
                fcell(s.strip_time_density),
                s.identity_in_strip
            )?;
            Ok(code)
        }
    }
}
