//! Fold/build fusion for list pipelines, including pipelines that zip two
//! branches together.
//!
//! [`fuse`] rewrites a [`PipelineExpr`] step by step. Zip-free pipelines
//! take the `foldr`/`build` route. Pipelines with a zip take the
//! hyperfunction `fold` route, where each branch becomes a coroutine and
//! the branches are joined with `#`. Both routes end in step machines and
//! then a first-order loop. Every step is recorded in a
//! [`DerivationTrace`] that [`DerivationTrace::replay`] can re-check.

pub mod core;
pub mod eval;
pub mod expr;
pub mod naive;
pub mod rules;
pub mod sym;
pub mod value;

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use self::core::{desugar, Core, Route};
use self::eval::{eval_core, Ctx};
use self::expr::{PipelineExpr, TypeError};
use self::rules::Rule;
use self::value::{AllocCounter, Value};
use crate::lazy::{Result, StepBudget};
use crate::model::{ClosureModel, MachineModel};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FuseError {
    #[error("ill-typed pipeline: {0}")]
    Type(#[from] TypeError),
    #[error("the pipeline still consumes a materialized list and has no machine form")]
    NotMachineBacked,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReplayError {
    #[error("step 1 is not the desugaring of the source")]
    BadDesugar,
    #[error("step {index}: rule {rule} does not produce the recorded expression")]
    Mismatch { index: usize, rule: Rule },
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub rule: Rule,
    pub core: Core,
}

/// Every rewrite from the source pipeline to its final form, in order.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivationTrace {
    pub source: PipelineExpr,
    pub steps: Vec<TraceStep>,
}

#[derive(Serialize)]
struct TraceJson<'a> {
    source: String,
    source_haskell: String,
    steps: Vec<StepJson<'a>>,
}

#[derive(Serialize)]
struct StepJson<'a> {
    index: usize,
    rule: &'a str,
    expression: String,
}

impl DerivationTrace {
    pub fn last(&self) -> &Core {
        &self.steps.last().expect("a trace starts with its desugaring").core
    }

    pub fn rules(&self) -> Vec<Rule> {
        self.steps.iter().map(|s| s.rule).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.source.haskell());
        for (i, step) in self.steps.iter().enumerate() {
            let _ = write!(out, "\n{}. {}\n", i + 1, step.rule);
            for line in step.core.render().lines() {
                let _ = writeln!(out, "   {line}");
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = TraceJson {
            source: self.source.to_string(),
            source_haskell: self.source.haskell(),
            steps: self
                .steps
                .iter()
                .enumerate()
                .map(|(i, s)| StepJson { index: i + 1, rule: s.rule.name(), expression: s.core.render() })
                .collect(),
        };
        serde_json::to_value(doc).expect("trace documents are plain data")
    }

    /// Re-derives every step from its predecessor with the named rule.
    pub fn replay(&self) -> std::result::Result<(), ReplayError> {
        let mut steps = self.steps.iter();
        match steps.next() {
            Some(first) if first.rule == Rule::Desugar && first.core == desugar(&self.source) => {}
            _ => return Err(ReplayError::BadDesugar),
        }
        let mut prev = &self.steps[0].core;
        for (i, step) in steps.enumerate() {
            if rules::apply(step.rule, prev).as_ref() != Some(&step.core) {
                return Err(ReplayError::Mismatch { index: i + 2, rule: step.rule });
            }
            prev = &step.core;
        }
        Ok(())
    }
}

/// A pipeline fused down to a step machine and a loop program.
#[derive(Clone, Debug, PartialEq)]
pub struct FusedMachine {
    /// The last form that is still a hyperfunction: a composed machine,
    /// or a generator fold on the zip-free route.
    pub machine: Core,
    /// The final first-order loop.
    pub program: Core,
}

impl FusedMachine {
    /// Runs the machine form as a hidden-state hyperfunction.
    pub fn evaluate(&self, counter: &AllocCounter, budget: &StepBudget) -> Result<Value> {
        eval_core::<MachineModel>(&self.machine, &Ctx::new(counter.clone(), budget.clone()))
    }

    /// Runs the loop program.
    pub fn evaluate_program(&self, counter: &AllocCounter, budget: &StepBudget) -> Result<Value> {
        eval_core::<ClosureModel>(&self.program, &Ctx::new(counter.clone(), budget.clone()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Fused(FusedMachine),
    /// Fusion stopped before the machine stage; the core is still sound.
    Partial(Core),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fusion {
    pub route: Route,
    pub trace: DerivationTrace,
    /// The result of the list-level rewrites, before any machine appears.
    pub staged: Core,
    pub outcome: Outcome,
}

impl Fusion {
    pub fn machine(&self) -> Option<&FusedMachine> {
        match &self.outcome {
            Outcome::Fused(m) => Some(m),
            Outcome::Partial(_) => None,
        }
    }
}

struct Recorder {
    steps: Vec<TraceStep>,
}

impl Recorder {
    fn current(&self) -> &Core {
        &self.steps.last().expect("recording starts with the desugaring").core
    }

    fn once(&mut self, rule: Rule) -> bool {
        match rules::apply(rule, self.current()) {
            Some(core) => {
                self.steps.push(TraceStep { rule, core });
                true
            }
            None => false,
        }
    }

    fn exhaust(&mut self, rule: Rule) {
        while self.once(rule) {}
    }
}

pub fn fuse(e: &PipelineExpr) -> std::result::Result<Fusion, FuseError> {
    e.type_check()?;
    let route = Route::of(e);
    let mut rec = Recorder { steps: vec![TraceStep { rule: Rule::Desugar, core: desugar(e) }] };
    match route {
        Route::Baseline => rec.exhaust(Rule::FoldrBuild),
        Route::Hyper => {
            while rec.once(Rule::Materialize) || rec.once(Rule::FoldBuild) {}
            rec.once(Rule::ComposeCons);
            rec.once(Rule::FoldrLiteral);
        }
    }
    let staged = rec.current().clone();
    let outcome = match fuse_machines(&mut rec, route) {
        Ok(m) => Outcome::Fused(m),
        Err(_) => Outcome::Partial(staged.clone()),
    };
    Ok(Fusion {
        route,
        trace: DerivationTrace { source: e.clone(), steps: rec.steps },
        staged,
        outcome,
    })
}

fn fuse_machines(rec: &mut Recorder, route: Route) -> std::result::Result<FusedMachine, FuseError> {
    if rec.current().has_materialized() {
        return Err(FuseError::NotMachineBacked);
    }
    if route == Route::Hyper {
        rec.once(Rule::InlineMachines);
        rec.exhaust(Rule::ComposeMachines);
        rec.once(Rule::Simplify);
    }
    let machine = rec.current().clone();
    if !rec.once(Rule::Loop) {
        return Err(FuseError::NotMachineBacked);
    }
    rec.exhaust(Rule::EtaExpand);
    Ok(FusedMachine { machine, program: rec.current().clone() })
}
