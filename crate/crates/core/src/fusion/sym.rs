//! Symbolic terms for fused machines and loops, with the small
//! partial evaluator that turns composed machines into straight-line
//! conditionals.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::rc::Rc;

use super::core::{Cons, Nil, ZipFirst};
use super::expr::{show_list, ScalarFn, ScalarFn2};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Mul,
    Sub,
}

impl From<ScalarFn2> for BinOp {
    fn from(g: ScalarFn2) -> Self {
        match g {
            ScalarFn2::Add => BinOp::Add,
            ScalarFn2::Mul => BinOp::Mul,
        }
    }
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Mul => "*",
            BinOp::Sub => "-",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prim {
    Sqr,
    Inc,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Sym {
    Int(i64),
    Var(String),
    Prim(Prim, Box<Sym>),
    Bin(BinOp, Box<Sym>, Box<Sym>),
    Tuple(Vec<Sym>),
    Nothing,
    Just(Box<Sym>, Box<Sym>),
    Nil,
    Cons(Box<Sym>, Box<Sym>),
    Lam(String, Box<Sym>),
    App(Box<Sym>, Box<Sym>),
    /// A cons-function application that could not be reduced yet.
    ConsApp(Box<Cons>, Box<Sym>, Box<Sym>),
    /// `xs!!i` into a literal input list.
    Index(Rc<[i64]>, Box<Sym>),
    /// `loop state args..`
    Call(Box<Sym>, Vec<Sym>),
}

pub fn var(name: &str) -> Sym {
    Sym::Var(name.to_string())
}

pub fn bin(op: BinOp, a: Sym, b: Sym) -> Sym {
    Sym::Bin(op, Box::new(a), Box::new(b))
}

pub fn app(f: Sym, a: Sym) -> Sym {
    Sym::App(Box::new(f), Box::new(a))
}

pub fn lam(v: &str, body: Sym) -> Sym {
    Sym::Lam(v.to_string(), Box::new(body))
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cond {
    Le(Sym, Sym),
    Gt(Sym, Sym),
    Ge(Sym, Sym),
}

/// The element function emitted by a machine step.
#[derive(Clone, Debug, PartialEq)]
pub enum EmitFn {
    /// `c x`
    Partial(Cons, Sym),
    /// `f . f'`
    Chain(Box<EmitFn>, Box<EmitFn>),
    Lam(String, Sym),
}

/// Body of a machine's step function, `u -> Either b (a -> b, u)`.
#[derive(Clone, Debug, PartialEq)]
pub enum MBody {
    If(Cond, Box<MBody>, Box<MBody>),
    Left(Sym),
    Right(EmitFn, Sym),
    /// The case analysis of composing two machines, not yet merged.
    Compose(Box<MBody>, Box<MBody>),
}

/// `Hide (\pattern -> body) seed`
#[derive(Clone, Debug, PartialEq)]
pub struct MachineSym {
    pub pattern: Sym,
    pub seed: Sym,
    pub body: MBody,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LBody {
    If(Cond, Box<LBody>, Box<LBody>),
    Ret(Sym),
}

/// `let loop pattern params = body in loop seed args`
#[derive(Clone, Debug, PartialEq)]
pub struct LoopProgram {
    pub pattern: Sym,
    pub params: Vec<String>,
    pub body: LBody,
    pub seed: Sym,
    pub args: Vec<Sym>,
}

// ---------------------------------------------------------------------------
// names

pub fn free_vars(s: &Sym, out: &mut BTreeSet<String>) {
    match s {
        Sym::Var(v) => {
            out.insert(v.clone());
        }
        Sym::Int(_) | Sym::Nothing | Sym::Nil => {}
        Sym::Prim(_, a) | Sym::Index(_, a) => free_vars(a, out),
        Sym::Bin(_, a, b) | Sym::Just(a, b) | Sym::Cons(a, b) | Sym::App(a, b) => {
            free_vars(a, out);
            free_vars(b, out);
        }
        Sym::ConsApp(_, a, b) => {
            free_vars(a, out);
            free_vars(b, out);
        }
        Sym::Tuple(items) => items.iter().for_each(|i| free_vars(i, out)),
        Sym::Call(s, args) => {
            free_vars(s, out);
            args.iter().for_each(|a| free_vars(a, out));
        }
        Sym::Lam(v, b) => {
            let mut inner = BTreeSet::new();
            free_vars(b, &mut inner);
            inner.remove(v);
            out.extend(inner);
        }
    }
}

/// Every variable name occurring in `s`, bound or free.
pub fn all_vars(s: &Sym, out: &mut BTreeSet<String>) {
    match s {
        Sym::Lam(v, b) => {
            out.insert(v.clone());
            all_vars(b, out);
        }
        Sym::Var(v) => {
            out.insert(v.clone());
        }
        Sym::Int(_) | Sym::Nothing | Sym::Nil => {}
        Sym::Prim(_, a) | Sym::Index(_, a) => all_vars(a, out),
        Sym::Bin(_, a, b) | Sym::Just(a, b) | Sym::Cons(a, b) | Sym::App(a, b) => {
            all_vars(a, out);
            all_vars(b, out);
        }
        Sym::ConsApp(_, a, b) => {
            all_vars(a, out);
            all_vars(b, out);
        }
        Sym::Tuple(items) => items.iter().for_each(|i| all_vars(i, out)),
        Sym::Call(s, args) => {
            all_vars(s, out);
            args.iter().for_each(|a| all_vars(a, out));
        }
    }
}

pub fn fresh(base: &str, avoid: &BTreeSet<String>) -> String {
    if !avoid.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded supply")
}

/// Capture-avoiding `s[v := arg]`.
pub fn subst(s: &Sym, v: &str, arg: &Sym) -> Sym {
    let go = |t: &Sym| Box::new(subst(t, v, arg));
    match s {
        Sym::Var(x) if x == v => arg.clone(),
        Sym::Var(_) | Sym::Int(_) | Sym::Nothing | Sym::Nil => s.clone(),
        Sym::Prim(p, a) => Sym::Prim(*p, go(a)),
        Sym::Index(xs, a) => Sym::Index(Rc::clone(xs), go(a)),
        Sym::Bin(op, a, b) => Sym::Bin(*op, go(a), go(b)),
        Sym::Just(a, b) => Sym::Just(go(a), go(b)),
        Sym::Cons(a, b) => Sym::Cons(go(a), go(b)),
        Sym::App(a, b) => Sym::App(go(a), go(b)),
        Sym::ConsApp(c, a, b) => Sym::ConsApp(c.clone(), go(a), go(b)),
        Sym::Tuple(items) => Sym::Tuple(items.iter().map(|i| subst(i, v, arg)).collect()),
        Sym::Call(st, args) => Sym::Call(go(st), args.iter().map(|a| subst(a, v, arg)).collect()),
        Sym::Lam(x, _) if x == v => s.clone(),
        Sym::Lam(x, body) => {
            let mut arg_fv = BTreeSet::new();
            free_vars(arg, &mut arg_fv);
            if arg_fv.contains(x) {
                let mut avoid = arg_fv;
                all_vars(body, &mut avoid);
                avoid.insert(v.to_string());
                let renamed = fresh(x, &avoid);
                let body = subst(body, x, &Sym::Var(renamed.clone()));
                Sym::Lam(renamed, Box::new(subst(&body, v, arg)))
            } else {
                Sym::Lam(x.clone(), go(body))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// symbolic semantics of the cons-function language

pub fn apply_fn(f: &ScalarFn, x: Sym) -> Sym {
    match f {
        ScalarFn::Sqr => Sym::Prim(Prim::Sqr, Box::new(x)),
        ScalarFn::Inc => Sym::Prim(Prim::Inc, Box::new(x)),
        ScalarFn::Id => x,
        ScalarFn::Const(k) => Sym::Int(*k),
        ScalarFn::Compose(f, g) => apply_fn(f, apply_fn(g, x)),
        ScalarFn::Partial(g, k) => bin((*g).into(), Sym::Int(*k), x),
    }
}

pub fn nil_sym(n: &Nil) -> Sym {
    match n {
        Nil::Int(k) => Sym::Int(*k),
        Nil::Empty => Sym::Nil,
        Nil::Nothing => Sym::Nothing,
        Nil::Id => lam("p", var("p")),
    }
}

fn zipped(first: &ZipFirst, x: Sym, y: Sym) -> Sym {
    let x = apply_fn(&first.pre, x);
    match first.with {
        Some(g) => bin(g.into(), x, y),
        None => Sym::Tuple(vec![x, y]),
    }
}

fn avoiding(terms: &[&Sym]) -> BTreeSet<String> {
    let mut avoid = BTreeSet::new();
    for t in terms {
        all_vars(t, &mut avoid);
    }
    avoid
}

/// `c x r`, reduced as far as the shape of `r` allows.
pub fn apply_cons(c: &Cons, x: Sym, r: Sym) -> Sym {
    match c {
        Cons::Add => bin(BinOp::Add, x, r),
        Cons::ListCons => Sym::Cons(Box::new(x), Box::new(r)),
        Cons::Compose(c, f) => apply_cons(c, apply_fn(f, x), r),
        Cons::Rev(c) => {
            let p = fresh("p", &avoiding(&[&x, &r]));
            let inner = apply_cons(c, x, Sym::Var(p.clone()));
            Sym::Lam(p, Box::new(normalize(&app(r, inner))))
        }
        Cons::FoldlStep(g) => {
            let w = fresh("w", &avoiding(&[&x, &r]));
            let acc = bin((*g).into(), Sym::Var(w.clone()), x);
            Sym::Lam(w, Box::new(normalize(&app(r, acc))))
        }
        Cons::First(first) => match r {
            Sym::Just(y, rest) => apply_cons(&first.cons, zipped(first, x, *y), *rest),
            Sym::Nothing => nil_sym(&first.nil),
            r => Sym::ConsApp(Box::new(c.clone()), Box::new(x), Box::new(r)),
        },
        Cons::Second { pre, .. } => Sym::Just(Box::new(apply_fn(pre, x)), Box::new(r)),
    }
}

/// Beta-reduces and re-applies stuck cons-functions, bottom-up.
pub fn normalize(s: &Sym) -> Sym {
    let go = |t: &Sym| Box::new(normalize(t));
    match s {
        Sym::App(f, a) => {
            let (f, a) = (normalize(f), normalize(a));
            match f {
                Sym::Lam(v, body) => normalize(&subst(&body, &v, &a)),
                Sym::Call(st, mut args) => {
                    args.push(a);
                    Sym::Call(st, args)
                }
                f => app(f, a),
            }
        }
        Sym::ConsApp(c, x, r) => apply_cons(c, normalize(x), normalize(r)),
        Sym::Var(_) | Sym::Int(_) | Sym::Nothing | Sym::Nil => s.clone(),
        Sym::Prim(p, a) => Sym::Prim(*p, go(a)),
        Sym::Index(xs, a) => Sym::Index(Rc::clone(xs), go(a)),
        Sym::Bin(op, a, b) => Sym::Bin(*op, go(a), go(b)),
        Sym::Just(a, b) => Sym::Just(go(a), go(b)),
        Sym::Cons(a, b) => Sym::Cons(go(a), go(b)),
        Sym::Tuple(items) => Sym::Tuple(items.iter().map(normalize).collect()),
        Sym::Call(st, args) => Sym::Call(go(st), args.iter().map(normalize).collect()),
        Sym::Lam(v, b) => Sym::Lam(v.clone(), go(b)),
    }
}

pub fn apply_emit(f: &EmitFn, arg: Sym) -> Sym {
    match f {
        EmitFn::Partial(c, x) => apply_cons(c, x.clone(), arg),
        EmitFn::Chain(f, g) => apply_emit(f, apply_emit(g, arg)),
        EmitFn::Lam(w, body) => normalize(&subst(body, w, &arg)),
    }
}

// ---------------------------------------------------------------------------
// machine simplification

impl MBody {
    pub fn is_simplified(&self) -> bool {
        match self {
            MBody::If(_, a, b) => a.is_simplified() && b.is_simplified(),
            MBody::Left(_) => true,
            MBody::Right(f, _) => matches!(f, EmitFn::Lam(..)),
            MBody::Compose(..) => false,
        }
    }

    fn map_leaves(&self, f: &mut dyn FnMut(&MBody) -> MBody) -> MBody {
        match self {
            MBody::If(c, a, b) => MBody::If(c.clone(), Box::new(a.map_leaves(f)), Box::new(b.map_leaves(f))),
            leaf => f(leaf),
        }
    }

    fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            MBody::If(c, a, b) => {
                c.vars(out);
                a.vars(out);
                b.vars(out);
            }
            MBody::Left(s) => all_vars(s, out),
            MBody::Right(f, s) => {
                f.vars(out);
                all_vars(s, out);
            }
            MBody::Compose(a, b) => {
                a.vars(out);
                b.vars(out);
            }
        }
    }
}

impl EmitFn {
    fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            EmitFn::Partial(_, x) => all_vars(x, out),
            EmitFn::Chain(f, g) => {
                f.vars(out);
                g.vars(out);
            }
            EmitFn::Lam(w, body) => {
                out.insert(w.clone());
                all_vars(body, out);
            }
        }
    }
}

impl Cond {
    fn vars(&self, out: &mut BTreeSet<String>) {
        let (Cond::Le(a, b) | Cond::Gt(a, b) | Cond::Ge(a, b)) = self;
        all_vars(a, out);
        all_vars(b, out);
    }
}

impl MachineSym {
    /// `Hide g x # Hide g' x'`, as the unmerged case analysis over the
    /// paired state.
    pub fn compose(left: &MachineSym, right: &MachineSym) -> MachineSym {
        MachineSym {
            pattern: Sym::Tuple(vec![left.pattern.clone(), right.pattern.clone()]),
            seed: Sym::Tuple(vec![left.seed.clone(), right.seed.clone()]),
            body: MBody::Compose(Box::new(left.body.clone()), Box::new(right.body.clone())),
        }
    }

    /// Merges composed case analyses into sequential conditionals and
    /// reduces each emitted function to a lambda.
    pub fn simplify(&self) -> MachineSym {
        let mut names = BTreeSet::new();
        all_vars(&self.pattern, &mut names);
        self.body.vars(&mut names);
        let w = fresh("w", &names);
        MachineSym {
            pattern: self.pattern.clone(),
            seed: self.seed.clone(),
            body: simplify_body(&self.body, &w),
        }
    }

    /// `run (Hide f v)` unrolled into its recursive loop.
    pub fn to_loop(&self) -> LoopProgram {
        let simplified = if self.body.is_simplified() {
            self.clone()
        } else {
            self.simplify()
        };
        LoopProgram {
            pattern: simplified.pattern.clone(),
            params: Vec::new(),
            body: loop_body(&simplified.body),
            seed: simplified.seed.clone(),
            args: Vec::new(),
        }
    }
}

fn simplify_body(b: &MBody, w: &str) -> MBody {
    match b {
        MBody::If(c, x, y) => MBody::If(c.clone(), Box::new(simplify_body(x, w)), Box::new(simplify_body(y, w))),
        MBody::Left(s) => MBody::Left(normalize(s)),
        MBody::Right(f, st) => MBody::Right(EmitFn::Lam(w.into(), apply_emit(f, var(w))), st.clone()),
        MBody::Compose(l, r) => {
            let (l, r) = (simplify_body(l, w), simplify_body(r, w));
            l.map_leaves(&mut |leaf| match leaf {
                MBody::Right(f, y) => r.map_leaves(&mut |rleaf| match rleaf {
                    MBody::Left(m) => MBody::Left(apply_emit(f, m.clone())),
                    MBody::Right(f2, y2) => MBody::Right(
                        EmitFn::Lam(w.into(), apply_emit(f, apply_emit(f2, var(w)))),
                        Sym::Tuple(vec![y.clone(), y2.clone()]),
                    ),
                    other => other.clone(),
                }),
                other => other.clone(),
            })
        }
    }
}

fn loop_body(b: &MBody) -> LBody {
    match b {
        MBody::If(c, x, y) => LBody::If(c.clone(), Box::new(loop_body(x)), Box::new(loop_body(y))),
        MBody::Left(s) => LBody::Ret(s.clone()),
        MBody::Right(f, st) => LBody::Ret(apply_emit(f, Sym::Call(Box::new(st.clone()), Vec::new()))),
        MBody::Compose(..) => unreachable!("simplified bodies have no composition nodes"),
    }
}

impl LBody {
    fn map_leaves(&self, f: &mut dyn FnMut(&Sym) -> Sym) -> LBody {
        match self {
            LBody::If(c, a, b) => LBody::If(c.clone(), Box::new(a.map_leaves(f)), Box::new(b.map_leaves(f))),
            LBody::Ret(s) => LBody::Ret(f(s)),
        }
    }

    fn vars(&self, out: &mut BTreeSet<String>) {
        match self {
            LBody::If(c, a, b) => {
                c.vars(out);
                a.vars(out);
                b.vars(out);
            }
            LBody::Ret(s) => free_vars(s, out),
        }
    }
}

impl LoopProgram {
    /// `(let loop ps = b in loop s as) n` becomes `let loop ps p = b p in loop s as n`.
    pub fn eta_expand(&self, arg: Sym) -> LoopProgram {
        let mut names = BTreeSet::new();
        all_vars(&self.pattern, &mut names);
        names.extend(self.params.iter().cloned());
        self.body.vars(&mut names);
        let p = fresh("p", &names);
        let mut params = self.params.clone();
        params.push(p.clone());
        let mut args = self.args.clone();
        args.push(arg);
        LoopProgram {
            pattern: self.pattern.clone(),
            params,
            body: self.body.map_leaves(&mut |s| normalize(&app(s.clone(), var(&p)))),
            seed: self.seed.clone(),
            args,
        }
    }
}

// ---------------------------------------------------------------------------
// printing

const ATOM: u8 = 0;
const APP: u8 = 1;
const OP: u8 = 2;
const LAM: u8 = 3;

fn level(s: &Sym) -> u8 {
    match s {
        Sym::Int(k) if *k < 0 => APP,
        Sym::Int(_) | Sym::Var(_) | Sym::Tuple(_) | Sym::Nil | Sym::Nothing => ATOM,
        Sym::Prim(..) | Sym::App(..) | Sym::Just(..) | Sym::ConsApp(..) => APP,
        Sym::Call(..) => APP,
        Sym::Bin(..) | Sym::Cons(..) | Sym::Index(..) => OP,
        Sym::Lam(..) => LAM,
    }
}

pub fn show_at(s: &Sym, max: u8) -> String {
    let text = show(s);
    if level(s) > max {
        format!("({text})")
    } else {
        text
    }
}

pub fn show(s: &Sym) -> String {
    match s {
        Sym::Int(k) => k.to_string(),
        Sym::Var(v) => v.clone(),
        Sym::Prim(p, a) => {
            let name = match p {
                Prim::Sqr => "sqr",
                Prim::Inc => "inc",
            };
            format!("{name} {}", show_at(a, ATOM))
        }
        Sym::Bin(op, a, b) => {
            let tight = matches!(op, BinOp::Add | BinOp::Sub) && matches!(**b, Sym::Int(k) if k >= 0);
            if tight {
                format!("{}{}{}", show_at(a, ATOM), op.symbol(), show(b))
            } else {
                format!("{} {} {}", show_at(a, APP), op.symbol(), show_at(b, APP))
            }
        }
        Sym::Tuple(items) => {
            let parts: Vec<String> = items.iter().map(|i| show_at(i, LAM)).collect();
            format!("({})", parts.join(","))
        }
        Sym::Nothing => "Nothing".into(),
        Sym::Just(a, b) => format!("Just ({},{})", show_at(a, LAM), show_at(b, LAM)),
        Sym::Nil => "[]".into(),
        Sym::Cons(a, b) => format!("{} : {}", show_at(a, APP), show_at(b, OP)),
        Sym::Lam(v, b) => format!("\\{v} -> {}", show_at(b, LAM)),
        Sym::App(f, a) => format!("{} {}", show_at(f, APP), show_at(a, ATOM)),
        Sym::ConsApp(c, x, r) => format!("{} {} {}", c.haskell_arg(), show_at(x, ATOM), show_at(r, ATOM)),
        Sym::Index(xs, i) => format!("{}!!{}", show_list(xs), show_at(i, ATOM)),
        Sym::Call(st, args) => {
            let mut out = format!("loop {}", show_at(st, ATOM));
            for a in args {
                let _ = write!(out, " {}", show_at(a, ATOM));
            }
            out
        }
    }
}

pub fn show_cond(c: &Cond) -> String {
    let (a, op, b) = match c {
        Cond::Le(a, b) => (a, "<=", b),
        Cond::Gt(a, b) => (a, ">", b),
        Cond::Ge(a, b) => (a, ">=", b),
    };
    format!("{}{op}{}", show_at(a, APP), show_at(b, APP))
}

pub fn show_emit(f: &EmitFn) -> String {
    match f {
        EmitFn::Partial(c, x) => format!("{} {}", c.haskell_arg(), show_at(x, ATOM)),
        EmitFn::Chain(f, g) => format!("{} . {}", show_emit(f), show_emit(g)),
        EmitFn::Lam(w, body) => format!("\\{w} -> {}", show_at(body, LAM)),
    }
}

pub fn show_mbody(b: &MBody) -> String {
    match b {
        MBody::If(c, x, y) => format!("if {} then {} else {}", show_cond(c), show_mbody(x), show_mbody(y)),
        MBody::Left(s) => format!("Left {}", show_at(s, ATOM)),
        MBody::Right(f, st) => format!("Right ({},{})", show_emit(f), show_at(st, LAM)),
        MBody::Compose(l, r) => format!(
            "case ({}) of {{Left n -> Left n; Right (f,y) -> case ({}) of {{Left m -> Left (f m); Right (f',y') -> Right (f . f',(y,y'))}}}}",
            show_mbody(l),
            show_mbody(r)
        ),
    }
}

pub fn show_machine(m: &MachineSym) -> String {
    format!(
        "Hide (\\{} -> {}) {}",
        show_at(&m.pattern, ATOM),
        show_mbody(&m.body),
        show_at(&m.seed, ATOM)
    )
}

fn show_lbody(b: &LBody) -> String {
    match b {
        LBody::If(c, x, y) => format!("if {} then {} else {}", show_cond(c), show_lbody(x), show_lbody(y)),
        LBody::Ret(s) => show_at(s, OP),
    }
}

pub fn show_loop(p: &LoopProgram) -> String {
    let mut head = format!("loop {}", show_at(&p.pattern, ATOM));
    for param in &p.params {
        let _ = write!(head, " {param}");
    }
    let mut call = format!("loop {}", show_at(&p.seed, ATOM));
    for a in &p.args {
        let _ = write!(call, " {}", show_at(a, ATOM));
    }
    format!("let {head} = {} in {call}", show_lbody(&p.body))
}
