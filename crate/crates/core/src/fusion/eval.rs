//! Evaluation of core terms in any hyperfunction model, and of loop
//! programs directly.

use std::rc::Rc;

use num_bigint::BigInt;

use super::core::{Cons, Core, Gen, Hyp, LeafGen, ListTerm, Nil};
use super::expr::ScalarFn;
use super::sym::{BinOp, Cond, EmitFn, LBody, LoopProgram, MBody, MachineSym, Prim, Sym};
use super::value::{mismatch, AllocCounter, Value};
use crate::lazy::{deep, Deferred, HyperError, LazyFn, Result, StepBudget};
use crate::model::{Model, Step, StepFn};

type ConsValue = Rc<dyn Fn(Value, Deferred<Value>) -> Result<Value>>;

/// Shared evaluation state: allocation counts and the step budget.
#[derive(Clone)]
pub struct Ctx {
    pub counter: AllocCounter,
    pub budget: StepBudget,
}

impl Ctx {
    pub fn new(counter: AllocCounter, budget: StepBudget) -> Self {
        Ctx { counter, budget }
    }
}

pub fn eval_core<M: Model>(core: &Core, ctx: &Ctx) -> Result<Value> {
    match core {
        Core::Foldr { cons, nil, list } => {
            let h = fold_list::<M>(list, cons, nil, ctx)?;
            M::run(&h, &ctx.budget)
        }
        Core::Run(h) => {
            let h = hyp::<M>(h, ctx)?;
            M::run(&h, &ctx.budget)
        }
        Core::Apply(c, arg) => eval_core::<M>(c, ctx)?.apply(Deferred::ready(nil_value(arg))),
        Core::Loop(p) => eval_loop(p, ctx),
    }
}

pub fn nil_value(n: &Nil) -> Value {
    match n {
        Nil::Int(k) => Value::int(*k),
        Nil::Empty => Value::Nil,
        Nil::Nothing => Value::Nothing,
        Nil::Id => Value::Fun(LazyFn::identity()),
    }
}

fn scalar(f: &ScalarFn, x: &Value) -> Result<Value> {
    Ok(Value::Int(f.eval(x.as_int()?)))
}

/// Runtime meaning of a cons-function.
pub fn cons_value(c: &Cons, ctx: &Ctx) -> ConsValue {
    match c {
        Cons::Add => Rc::new(|x, r| Ok(Value::Int(x.as_int()? + r.force()?.as_int()?))),
        Cons::ListCons => {
            let counter = ctx.counter.clone();
            Rc::new(move |x, r| Ok(counter.cons(x, r)))
        }
        Cons::Compose(c, f) => {
            let (c, f) = (cons_value(c, ctx), f.clone());
            Rc::new(move |x, r| c(scalar(&f, &x)?, r))
        }
        Cons::Rev(c) => {
            let c = cons_value(c, ctx);
            Rc::new(move |x, r| {
                let c = Rc::clone(&c);
                Ok(Value::Fun(LazyFn::new(move |p: Deferred<Value>| {
                    let (c, x) = (Rc::clone(&c), x.clone());
                    r.force()?.apply(Deferred::new(move || c(x, p)))
                })))
            })
        }
        Cons::FoldlStep(g) => {
            let g = *g;
            Rc::new(move |x, r| {
                Ok(Value::Fun(LazyFn::new(move |w: Deferred<Value>| {
                    let acc = g.eval(w.force()?.as_int()?, x.as_int()?);
                    r.force()?.apply(Deferred::ready(Value::Int(acc)))
                })))
            })
        }
        Cons::First(z) => {
            let inner = cons_value(&z.cons, ctx);
            let (pre, with, nil) = (z.pre.clone(), z.with, nil_value(&z.nil));
            Rc::new(move |x, r| match r.force()? {
                Value::Nothing => Ok(nil.clone()),
                Value::Just(y, rest) => {
                    let x = scalar(&pre, &x)?;
                    let paired = match with {
                        Some(g) => Value::Int(g.eval(x.as_int()?, y.as_int()?)),
                        None => Value::pair(x, (*y).clone()),
                    };
                    inner(paired, rest)
                }
                other => Err(mismatch("zip handshake", &other)),
            })
        }
        Cons::Second { pre, .. } => {
            let (pre, counter) = (pre.clone(), ctx.counter.clone());
            Rc::new(move |y, r| Ok(counter.just(scalar(&pre, &y)?, r)))
        }
    }
}

fn partial(c: &ConsValue, x: Value) -> LazyFn<Value, Value> {
    let c = Rc::clone(c);
    LazyFn::new(move |r| c(x.clone(), r))
}

/// `fold xs c n` over an element vector.
fn fold_values<M: Model>(xs: Rc<[Value]>, c: ConsValue, n: Value) -> M::Hyper<Value, Value> {
    let step: StepFn<Value, Value, usize> = Rc::new(move |&i| {
        Ok(match xs.get(i) {
            None => Step::Done(n.clone()),
            Some(x) => Step::Emit(partial(&c, x.clone()), i + 1),
        })
    });
    M::unfold(0usize, step)
}

fn fold_leaf<M: Model>(gen: &LeafGen, c: ConsValue, n: Value) -> M::Hyper<Value, Value> {
    match gen {
        LeafGen::Down(k) => {
            let step: StepFn<Value, Value, i64> = Rc::new(move |&z| {
                Ok(if z <= 0 {
                    Step::Done(n.clone())
                } else {
                    Step::Emit(partial(&c, Value::int(z)), z - 1)
                })
            });
            M::unfold(*k, step)
        }
        LeafGen::Upto(a, b) => {
            let b = *b;
            let step: StepFn<Value, Value, i64> = Rc::new(move |&i| {
                Ok(if i > b {
                    Step::Done(n.clone())
                } else {
                    Step::Emit(partial(&c, Value::int(i)), i + 1)
                })
            });
            M::unfold(*a, step)
        }
        LeafGen::Literal(xs) => {
            let xs: Rc<[Value]> = xs.iter().map(|&x| Value::int(x)).collect();
            fold_values::<M>(xs, c, n)
        }
    }
}

/// The elements of a list term not yet fused into its consumer. Every
/// produced intermediate list is counted.
fn list_elements<M: Model>(l: &ListTerm, ctx: &Ctx) -> Result<Vec<Value>> {
    let whole = match l {
        ListTerm::Literal(xs) => return Ok(xs.iter().map(|&x| Value::int(x)).collect()),
        ListTerm::Materialized(core) => return eval_core::<M>(core, ctx)?.to_elements(),
        ListTerm::Build(g) => match g {
            Gen::Down(k) => (1..=*k).rev().map(Value::int).collect::<Vec<_>>(),
            Gen::Upto(a, b) => (*a..=*b).map(Value::int).collect(),
            Gen::Map(f, l) => list_elements::<M>(l, ctx)?
                .iter()
                .map(|x| scalar(f, x))
                .collect::<Result<_>>()?,
            Gen::Reverse(l) => {
                let mut xs = list_elements::<M>(l, ctx)?;
                xs.reverse();
                xs
            }
            Gen::ZipW(g, a, b) => {
                let (xs, ys) = (list_elements::<M>(a, ctx)?, list_elements::<M>(b, ctx)?);
                xs.iter()
                    .zip(&ys)
                    .map(|(x, y)| Ok(Value::Int(g.eval(x.as_int()?, y.as_int()?))))
                    .collect::<Result<_>>()?
            }
            Gen::Zip(a, b) => {
                let (xs, ys) = (list_elements::<M>(a, ctx)?, list_elements::<M>(b, ctx)?);
                xs.into_iter().zip(ys).map(|(x, y)| Value::pair(x, y)).collect()
            }
        },
    };
    ctx.counter.list_cells(whole.len() as u64);
    Ok(whole)
}

fn fold_list<M: Model>(list: &ListTerm, cons: &Cons, nil: &Nil, ctx: &Ctx) -> Result<M::Hyper<Value, Value>> {
    let (c, n) = (cons_value(cons, ctx), nil_value(nil));
    let leaf = match list {
        ListTerm::Build(Gen::Down(k)) => Some(LeafGen::Down(*k)),
        ListTerm::Build(Gen::Upto(a, b)) => Some(LeafGen::Upto(*a, *b)),
        ListTerm::Literal(xs) => Some(LeafGen::Literal(xs.clone())),
        _ => None,
    };
    Ok(match leaf {
        Some(gen) => fold_leaf::<M>(&gen, c, n),
        None => fold_values::<M>(list_elements::<M>(list, ctx)?.into(), c, n),
    })
}

pub fn hyp<M: Model>(h: &Hyp, ctx: &Ctx) -> Result<M::Hyper<Value, Value>> {
    match h {
        Hyp::Fold { list, cons, nil } => fold_list::<M>(list, cons, nil, ctx),
        Hyp::Leaf { gen, cons, nil } => Ok(fold_leaf::<M>(gen, cons_value(cons, ctx), nil_value(nil))),
        Hyp::Compose(a, b) => Ok(M::compose(&hyp::<M>(a, ctx)?, &hyp::<M>(b, ctx)?)),
        Hyp::Hide(m) => Ok(machine::<M>(m, ctx)),
    }
}

/// A symbolic step machine as a hyperfunction of model `M`.
pub fn machine<M: Model>(m: &MachineSym, ctx: &Ctx) -> M::Hyper<Value, Value> {
    let (m, ctx) = (Rc::new(m.clone()), ctx.clone());
    let seed = match eval(&m.seed, &Env::default(), &ctx) {
        Ok(v) => v,
        Err(e) => return M::unfold((), Rc::new(move |_| Err(e.clone()))),
    };
    let step: StepFn<Value, Value, Value> = Rc::new(move |state| {
        let env = Env::default().bind_pattern(&m.pattern, Deferred::ready(state.clone()))?;
        machine_step(&m.body, &env, &ctx)
    });
    M::unfold(seed, step)
}

fn machine_step(body: &MBody, env: &Env, ctx: &Ctx) -> Result<Step<Value, Value, Value>> {
    match body {
        MBody::If(c, a, b) => {
            if cond(c, env, ctx)? {
                machine_step(a, env, ctx)
            } else {
                machine_step(b, env, ctx)
            }
        }
        MBody::Left(s) => Ok(Step::Done(eval(s, env, ctx)?)),
        MBody::Right(f, st) => Ok(Step::Emit(emit_value(f, env, ctx), eval(st, env, ctx)?)),
        MBody::Compose(l, r) => match machine_step(l, env, ctx)? {
            Step::Done(n) => Ok(Step::Done(n)),
            Step::Emit(f, x) => match machine_step(r, env, ctx)? {
                Step::Done(m) => Ok(Step::Done(f.call(m)?)),
                Step::Emit(g, y) => Ok(Step::Emit(f.after(&g), Value::pair(x, y))),
            },
        },
    }
}

fn emit_value(f: &EmitFn, env: &Env, ctx: &Ctx) -> LazyFn<Value, Value> {
    match f {
        EmitFn::Partial(c, x) => {
            let c = cons_value(c, ctx);
            let x = lazy(x, env, ctx);
            LazyFn::new(move |r| c(x.force()?, r))
        }
        EmitFn::Chain(f, g) => emit_value(f, env, ctx).after(&emit_value(g, env, ctx)),
        EmitFn::Lam(w, body) => {
            let (w, body, env, ctx) = (w.clone(), body.clone(), env.clone(), ctx.clone());
            LazyFn::new(move |arg| eval(&body, &env.bind(&w, arg), &ctx))
        }
    }
}

// ---------------------------------------------------------------------------
// symbolic terms at run time

/// Variable bindings, plus the loop program that `loop` calls refer to.
#[derive(Clone, Default)]
struct Env {
    binds: Option<Rc<(String, Deferred<Value>, Env)>>,
    program: Option<Rc<LoopProgram>>,
}

impl Env {
    fn within(program: &Rc<LoopProgram>) -> Env {
        Env { binds: None, program: Some(Rc::clone(program)) }
    }

    fn bind(&self, name: &str, v: Deferred<Value>) -> Env {
        Env {
            binds: Some(Rc::new((name.to_string(), v, self.clone()))),
            program: self.program.clone(),
        }
    }

    fn lookup(&self, name: &str) -> Result<Deferred<Value>> {
        let mut cur = self;
        while let Some(b) = &cur.binds {
            if b.0 == name {
                return Ok(b.1.clone());
            }
            cur = &b.2;
        }
        Err(HyperError::TypeMismatch(format!("unbound variable {name}")))
    }

    fn bind_pattern(&self, pattern: &Sym, v: Deferred<Value>) -> Result<Env> {
        match pattern {
            Sym::Var(name) => Ok(self.bind(name, v)),
            Sym::Tuple(parts) => match v.force()? {
                Value::Tuple(items) if items.len() == parts.len() => {
                    let mut env = self.clone();
                    for (p, item) in parts.iter().zip(items.iter()) {
                        env = env.bind_pattern(p, Deferred::ready(item.clone()))?;
                    }
                    Ok(env)
                }
                other => Err(mismatch("state tuple", &other)),
            },
            _ => Err(HyperError::TypeMismatch("unsupported state pattern".into())),
        }
    }
}

fn lazy(s: &Sym, env: &Env, ctx: &Ctx) -> Deferred<Value> {
    match s {
        Sym::Var(v) => env.lookup(v).unwrap_or_else(Deferred::failing),
        Sym::Int(k) => Deferred::ready(Value::int(*k)),
        _ => {
            let (s, env, ctx) = (s.clone(), env.clone(), ctx.clone());
            Deferred::new(move || eval(&s, &env, &ctx))
        }
    }
}

fn cond(c: &Cond, env: &Env, ctx: &Ctx) -> Result<bool> {
    let (Cond::Le(a, b) | Cond::Gt(a, b) | Cond::Ge(a, b)) = c;
    let a = eval(a, env, ctx)?;
    let b = eval(b, env, ctx)?;
    let (a, b) = (a.as_int()?, b.as_int()?);
    Ok(match c {
        Cond::Le(..) => a <= b,
        Cond::Gt(..) => a > b,
        Cond::Ge(..) => a >= b,
    })
}

fn eval(s: &Sym, env: &Env, ctx: &Ctx) -> Result<Value> {
    match s {
        Sym::Int(k) => Ok(Value::int(*k)),
        Sym::Var(v) => env.lookup(v)?.force(),
        Sym::Prim(p, a) => {
            let a = eval(a, env, ctx)?;
            let n = a.as_int()?;
            Ok(Value::Int(match p {
                Prim::Sqr => n * n,
                Prim::Inc => n + 1,
            }))
        }
        Sym::Bin(op, a, b) => {
            let (a, b) = (eval(a, env, ctx)?, eval(b, env, ctx)?);
            let (a, b) = (a.as_int()?, b.as_int()?);
            Ok(Value::Int(match op {
                BinOp::Add => a + b,
                BinOp::Mul => a * b,
                BinOp::Sub => a - b,
            }))
        }
        Sym::Tuple(items) => Ok(Value::Tuple(
            items.iter().map(|i| eval(i, env, ctx)).collect::<Result<Vec<_>>>()?.into(),
        )),
        Sym::Nothing => Ok(Value::Nothing),
        Sym::Just(y, rest) => Ok(ctx.counter.just(eval(y, env, ctx)?, lazy(rest, env, ctx))),
        Sym::Nil => Ok(Value::Nil),
        Sym::Cons(x, rest) => Ok(ctx.counter.cons(eval(x, env, ctx)?, lazy(rest, env, ctx))),
        Sym::Lam(v, body) => {
            let (v, body, env, ctx) = (v.clone(), body.clone(), env.clone(), ctx.clone());
            Ok(Value::Fun(LazyFn::new(move |arg| eval(&body, &env.bind(&v, arg), &ctx))))
        }
        Sym::App(f, a) => eval(f, env, ctx)?.apply(lazy(a, env, ctx)),
        Sym::ConsApp(c, x, r) => cons_value(c, ctx)(eval(x, env, ctx)?, lazy(r, env, ctx)),
        Sym::Index(xs, i) => {
            let i = eval(i, env, ctx)?.as_i64()?;
            usize::try_from(i)
                .ok()
                .and_then(|i| xs.get(i))
                .map(|&x| Value::int(x))
                .ok_or_else(|| HyperError::Raised(format!("index {i} out of range")))
        }
        Sym::Call(st, args) => {
            let program = env.program.clone().ok_or_else(|| {
                HyperError::TypeMismatch("loop call outside a loop program".into())
            })?;
            let st = lazy(st, env, ctx);
            let args: Vec<_> = args.iter().map(|a| lazy(a, env, ctx)).collect();
            call(&program, st, args, ctx)
        }
    }
}

/// `loop state args`; short of the declared parameters it is a partial
/// application, beyond them the surplus is applied to the result.
fn call(p: &Rc<LoopProgram>, state: Deferred<Value>, mut args: Vec<Deferred<Value>>, ctx: &Ctx) -> Result<Value> {
    if args.len() < p.params.len() {
        let (p, ctx) = (Rc::clone(p), ctx.clone());
        return Ok(Value::Fun(LazyFn::new(move |a| {
            let mut more = args.clone();
            more.push(a);
            call(&p, state.clone(), more, &ctx)
        })));
    }
    let surplus = args.split_off(p.params.len());
    ctx.budget.tick()?;
    let mut env = Env::within(p).bind_pattern(&p.pattern, state)?;
    for (name, a) in p.params.iter().zip(args) {
        env = env.bind(name, a);
    }
    let mut out = deep(|| loop_body(&p.body, &env, ctx))?;
    for a in surplus {
        out = out.apply(a)?;
    }
    Ok(out)
}

fn loop_body(b: &LBody, env: &Env, ctx: &Ctx) -> Result<Value> {
    match b {
        LBody::If(c, x, y) => {
            if cond(c, env, ctx)? {
                loop_body(x, env, ctx)
            } else {
                loop_body(y, env, ctx)
            }
        }
        LBody::Ret(s) => eval(s, env, ctx),
    }
}

pub fn eval_loop(p: &LoopProgram, ctx: &Ctx) -> Result<Value> {
    let p = Rc::new(p.clone());
    let top = Env::within(&p);
    let seed = lazy(&p.seed, &top, ctx);
    let args = p.args.iter().map(|a| lazy(a, &top, ctx)).collect();
    call(&p, seed, args, ctx)
}

/// Integer result of a loop or core, for callers that know the type.
pub fn expect_int(v: Value) -> Result<BigInt> {
    v.as_int().cloned()
}
