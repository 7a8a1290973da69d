//! The `hyperfuse` command line: evaluate, fuse and benchmark pipelines
//! under a chosen hyperfunction model.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::fusion::core::desugar;
use crate::fusion::eval::{eval_core, Ctx};
use crate::fusion::expr::PipelineExpr;
use crate::fusion::naive::evaluate_naive;
use crate::fusion::value::{AllocCounter, AllocStats, Output, Value};
use crate::fusion::{fuse, Fusion, Outcome};
use crate::lazy::{HyperError, StepBudget};
use crate::model::{ClosureModel, MachineModel, Model, StreamModel};
use crate::parse::parse_expr;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_FUEL: i32 = 2;
pub const EXIT_SOUNDNESS: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hyperfuse", version, about = "Fuse list pipelines through hyperfunctions")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a pipeline with every intermediate list built.
    Eval(Options),
    /// Fuse a pipeline, check it against the unfused value, and report.
    Fuse(Options),
    /// Time unfused and fused evaluation.
    Bench(Options),
}

#[derive(Debug, clap::Args)]
pub struct Options {
    /// Pipeline expression, e.g. "sum(zipW(mul, upto(2,10), down(6)))".
    pub expression: String,
    /// Hyperfunction model: h (closures), l (streams), a (state machines).
    #[arg(long, default_value = "a", value_parser = ["h", "l", "a"])]
    pub model: String,
    /// Maximum number of evaluation steps.
    #[arg(long, default_value_t = StepBudget::DEFAULT, value_parser = clap::value_parser!(u64).range(1..))]
    pub fuel: u64,
    /// Print the derivation trace.
    #[arg(long)]
    pub trace: bool,
    /// Number of timed runs per mode.
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Structured,
}

/// An evaluation strategy selectable with `--model`.
pub trait Backend {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    /// Evaluates the source pipeline through its fold form, without fusion.
    fn evaluate_unfused(&self, e: &PipelineExpr, ctx: &Ctx) -> crate::lazy::Result<Value>;

    /// Evaluates the outcome of fusion.
    fn evaluate_fused(&self, f: &Fusion, ctx: &Ctx) -> crate::lazy::Result<Value>;
}

/// Backends that run core terms in hyperfunction model `M`.
struct ModelBackend<M> {
    name: &'static str,
    description: &'static str,
    _model: std::marker::PhantomData<M>,
}

impl<M: Model> Backend for ModelBackend<M> {
    fn name(&self) -> &'static str {
        self.name
    }

    fn description(&self) -> &'static str {
        self.description
    }

    fn evaluate_unfused(&self, e: &PipelineExpr, ctx: &Ctx) -> crate::lazy::Result<Value> {
        eval_core::<M>(&desugar(e), ctx)
    }

    fn evaluate_fused(&self, f: &Fusion, ctx: &Ctx) -> crate::lazy::Result<Value> {
        eval_core::<M>(&f.staged, ctx)
    }
}

/// The state-machine backend runs the fully fused machine when there is one.
struct MachineBackend;

impl Backend for MachineBackend {
    fn name(&self) -> &'static str {
        "a"
    }

    fn description(&self) -> &'static str {
        "hidden-state step machines"
    }

    fn evaluate_unfused(&self, e: &PipelineExpr, ctx: &Ctx) -> crate::lazy::Result<Value> {
        eval_core::<MachineModel>(&desugar(e), ctx)
    }

    fn evaluate_fused(&self, f: &Fusion, ctx: &Ctx) -> crate::lazy::Result<Value> {
        match &f.outcome {
            Outcome::Fused(m) => m.evaluate(&ctx.counter, &ctx.budget),
            Outcome::Partial(core) => eval_core::<MachineModel>(core, ctx),
        }
    }
}

pub fn backends() -> Vec<Box<dyn Backend>> {
    vec![
        Box::new(ModelBackend::<ClosureModel> {
            name: "h",
            description: "recursive closures",
            _model: std::marker::PhantomData,
        }),
        Box::new(ModelBackend::<StreamModel> {
            name: "l",
            description: "lazy streams of element functions",
            _model: std::marker::PhantomData,
        }),
        Box::new(MachineBackend),
    ]
}

pub fn backend(name: &str) -> Option<Box<dyn Backend>> {
    backends().into_iter().find(|b| b.name() == name)
}

/// What the binary prints and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExitReport {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl ExitReport {
    fn failure(code: i32, message: impl Into<String>) -> Self {
        ExitReport { code, stdout: String::new(), stderr: message.into() }
    }
}

#[derive(Debug, Serialize)]
struct Run {
    mode: &'static str,
    value: Output,
    list_cells: u64,
    protocol_cells: u64,
    median_ns: Option<u128>,
}

#[derive(Debug, Serialize)]
struct Document<'a> {
    command: &'static str,
    expression: String,
    model: &'a str,
    runs: Vec<Run>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fused: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<serde_json::Value>,
}

pub fn run_cli<I, T>(args: I) -> ExitReport
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match CliConfig::try_parse_from(args) {
        Ok(cfg) => execute(&cfg),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                ExitReport::failure(code, text)
            } else {
                ExitReport { code, stdout: text, stderr: String::new() }
            }
        }
    }
}

pub fn execute(cfg: &CliConfig) -> ExitReport {
    let (name, opts) = match &cfg.command {
        Command::Eval(o) => ("eval", o),
        Command::Fuse(o) => ("fuse", o),
        Command::Bench(o) => ("bench", o),
    };
    match Session::start(name, opts) {
        Ok(session) => session.finish(),
        Err(report) => report,
    }
}

struct Session<'a> {
    command: &'static str,
    opts: &'a Options,
    expr: PipelineExpr,
    backend: Box<dyn Backend>,
    runs: Vec<Run>,
    notes: Vec<String>,
    fusion: Option<Fusion>,
}

fn runtime_failure(context: &str, err: HyperError) -> ExitReport {
    let code = if err.is_fuel() { EXIT_FUEL } else { EXIT_SOUNDNESS };
    ExitReport::failure(code, format!("{context}: {err}\n"))
}

impl<'a> Session<'a> {
    fn start(command: &'static str, opts: &'a Options) -> Result<Self, ExitReport> {
        let expr = parse_expr(&opts.expression)
            .map_err(|e| ExitReport::failure(EXIT_PARSE, format!("parse error: {e}\n")))?;
        expr.type_check()
            .map_err(|e| ExitReport::failure(EXIT_PARSE, format!("type error: {e}\n")))?;
        let backend = backend(&opts.model).expect("clap restricts the model names");
        let mut session = Session { command, opts, expr, backend, runs: Vec::new(), notes: Vec::new(), fusion: None };
        match command {
            "eval" => session.eval()?,
            "fuse" => session.fuse()?,
            _ => session.bench()?,
        }
        Ok(session)
    }

    fn ctx(&self) -> Ctx {
        Ctx::new(AllocCounter::new(), StepBudget::new(self.opts.fuel))
    }

    fn naive(&self) -> Result<(Output, AllocStats), ExitReport> {
        let counter = AllocCounter::new();
        let value = evaluate_naive(&self.expr, &counter).map_err(|e| runtime_failure("naive evaluation", e))?;
        Ok((value, counter.stats()))
    }

    fn timed(&self, f: impl Fn(&Ctx) -> crate::lazy::Result<Output>) -> Result<(Output, AllocStats, u128), ExitReport> {
        let mut samples = Vec::new();
        let mut last = None;
        for _ in 0..self.opts.trials {
            let ctx = self.ctx();
            let start = Instant::now();
            let out = f(&ctx).map_err(|e| runtime_failure("evaluation", e))?;
            samples.push(start.elapsed().as_nanos());
            last = Some((out, ctx.counter.stats()));
        }
        samples.sort_unstable();
        let (out, stats) = last.expect("trials are positive");
        Ok((out, stats, samples[samples.len() / 2]))
    }

    fn push(&mut self, mode: &'static str, value: Output, stats: AllocStats, median_ns: Option<u128>) {
        self.runs.push(Run {
            mode,
            value,
            list_cells: stats.list_cells,
            protocol_cells: stats.protocol_cells,
            median_ns,
        });
    }

    fn check(&self, naive: &Output, other: &Output, what: &str) -> Result<(), ExitReport> {
        if naive == other {
            Ok(())
        } else {
            Err(ExitReport::failure(
                EXIT_SOUNDNESS,
                format!("soundness violation: naive value {naive} but {what} value {other}\n"),
            ))
        }
    }

    fn eval(&mut self) -> Result<(), ExitReport> {
        let (value, stats) = self.naive()?;
        let ctx = self.ctx();
        let through_model = self
            .backend
            .evaluate_unfused(&self.expr, &ctx)
            .and_then(|v| v.to_output())
            .map_err(|e| runtime_failure("evaluation", e))?;
        self.check(&value, &through_model, "model")?;
        self.push("naive", value, stats, None);
        Ok(())
    }

    fn fuse(&mut self) -> Result<(), ExitReport> {
        let (value, stats) = self.naive()?;
        let fusion = fuse(&self.expr).map_err(|e| ExitReport::failure(EXIT_PARSE, format!("{e}\n")))?;
        let ctx = self.ctx();
        let fused = self
            .backend
            .evaluate_fused(&fusion, &ctx)
            .and_then(|v| v.to_output())
            .map_err(|e| runtime_failure("fused evaluation", e))?;
        self.check(&value, &fused, "fused")?;
        if let Outcome::Partial(_) = fusion.outcome {
            self.notes.push("fusion stopped before the machine stage; a reversed zip branch is materialized".into());
        }
        self.push("naive", value, stats, None);
        self.push("fused", fused, ctx.counter.stats(), None);
        self.fusion = Some(fusion);
        Ok(())
    }

    fn bench(&mut self) -> Result<(), ExitReport> {
        let fusion = fuse(&self.expr).map_err(|e| ExitReport::failure(EXIT_PARSE, format!("{e}\n")))?;
        let expr = self.expr.clone();
        let (naive, naive_stats, naive_ns) = self.timed(|ctx| evaluate_naive(&expr, &ctx.counter))?;
        let (fused, fused_stats, fused_ns) =
            self.timed(|ctx| self.backend.evaluate_fused(&fusion, ctx).and_then(|v| v.to_output()))?;
        self.check(&naive, &fused, "fused")?;
        self.push("naive", naive, naive_stats, Some(naive_ns));
        self.push("fused", fused, fused_stats, Some(fused_ns));
        self.fusion = Some(fusion);
        Ok(())
    }

    fn finish(self) -> ExitReport {
        let trace = self.fusion.as_ref().filter(|_| self.opts.trace).map(|f| &f.trace);
        let stdout = match self.opts.format {
            Format::Structured => {
                let doc = Document {
                    command: self.command,
                    expression: self.expr.to_string(),
                    model: &self.opts.model,
                    fused: self.fusion.as_ref().map(|f| f.machine().is_some()),
                    trace: trace.map(|t| t.to_json()),
                    runs: self.runs,
                };
                serde_json::to_string_pretty(&doc).expect("documents are plain data") + "\n"
            }
            Format::Text => {
                let mut out = String::new();
                if let Some(first) = self.runs.first() {
                    let _ = writeln!(out, "value: {}", first.value);
                }
                for run in &self.runs {
                    let _ = write!(
                        out,
                        "{}: list cells {}, protocol cells {}",
                        run.mode, run.list_cells, run.protocol_cells
                    );
                    if let Some(ns) = run.median_ns {
                        let _ = write!(out, ", median {ns} ns over {} trials", self.opts.trials);
                    }
                    out.push('\n');
                }
                let _ = writeln!(out, "model: {} ({})", self.backend.name(), self.backend.description());
                for note in &self.notes {
                    let _ = writeln!(out, "note: {note}");
                }
                if let Some(t) = trace {
                    out.push('\n');
                    out.push_str(&t.to_text());
                }
                out
            }
        };
        ExitReport { code: EXIT_OK, stdout, stderr: String::new() }
    }
}
