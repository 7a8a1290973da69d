//! The core language the fusion rules rewrite, and its Haskell-style
//! printer.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::expr::{atom_int, show_list, PipelineExpr, ScalarFn, ScalarFn2};
use super::sym::{self, apply_cons, apply_fn, nil_sym, var, LoopProgram, MBody, EmitFn, MachineSym, Sym};

/// The `n` argument of a fold.
#[derive(Clone, Debug, PartialEq)]
pub enum Nil {
    Int(i64),
    Empty,
    Nothing,
    Id,
}

/// `first` of a zip: consumes an element of the left branch together with
/// the handshake offered by the right branch.
#[derive(Clone, Debug, PartialEq)]
pub struct ZipFirst {
    pub id: usize,
    /// Applied to the left element before pairing.
    pub pre: ScalarFn,
    /// `None` pairs the elements, `Some(g)` combines them with `g`.
    pub with: Option<ScalarFn2>,
    pub cons: Cons,
    pub nil: Nil,
}

/// The `c` argument of a fold.
#[derive(Clone, Debug, PartialEq)]
pub enum Cons {
    Add,
    ListCons,
    /// `c . f`
    Compose(Box<Cons>, ScalarFn),
    /// `\x k p -> k (c x p)`
    Rev(Box<Cons>),
    /// `\x k w -> k (g w x)`
    FoldlStep(ScalarFn2),
    First(Box<ZipFirst>),
    /// `\y xys -> Just (pre y, xys)`
    Second { id: usize, pre: ScalarFn },
}

impl Cons {
    /// `c . f`, pushing `f` under a reversal so the step stays readable.
    pub fn then_after(self, f: ScalarFn) -> Cons {
        match self {
            Cons::Compose(c, g) => Cons::Compose(c, ScalarFn::compose(g, f)),
            Cons::Rev(c) => Cons::Rev(Box::new(c.then_after(f))),
            c => Cons::Compose(Box::new(c), f),
        }
    }

    pub fn is_protocol(&self) -> bool {
        match self {
            Cons::First(_) | Cons::Second { .. } => true,
            Cons::Compose(c, _) | Cons::Rev(c) => c.is_protocol(),
            _ => false,
        }
    }

    /// The name used in argument position: `(+)`, `((+) . sqr)`, `first'`.
    pub fn haskell_arg(&self) -> String {
        match self {
            Cons::Add => "(+)".into(),
            Cons::ListCons => "(:)".into(),
            Cons::Compose(c, f) => format!("({} . {})", c.haskell_arg(), f.haskell_atom()),
            Cons::Rev(_) | Cons::FoldlStep(_) => match apply_cons(self, var("x"), var("k")) {
                Sym::Lam(v, body) => format!("(\\x k {v} -> {})", sym::show(&body)),
                other => format!("(\\x k -> {})", sym::show(&other)),
            },
            Cons::First(f) => protocol_name("first", f.id, &f.pre),
            Cons::Second { id, pre } => protocol_name("second", *id, pre),
        }
    }
}

fn protocol_name(base: &str, id: usize, pre: &ScalarFn) -> String {
    let mut name = base.to_string();
    if id > 0 {
        name.push_str(&id.to_string());
    }
    if !pre.is_id() {
        name.push('\'');
    }
    name
}

impl Nil {
    fn haskell_atom(&self) -> String {
        match self {
            Nil::Int(k) => atom_int(*k),
            Nil::Empty => "[]".into(),
            Nil::Nothing => "Nothing".into(),
            Nil::Id => "id".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gen {
    Down(i64),
    Upto(i64, i64),
    Map(ScalarFn, Box<ListTerm>),
    ZipW(ScalarFn2, Box<ListTerm>, Box<ListTerm>),
    Zip(Box<ListTerm>, Box<ListTerm>),
    Reverse(Box<ListTerm>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ListTerm {
    Build(Gen),
    Literal(Vec<i64>),
    /// A list computed in full before being consumed.
    Materialized(Box<Core>),
}

/// Generators with a specialized, machine-backed fold.
#[derive(Clone, Debug, PartialEq)]
pub enum LeafGen {
    Down(i64),
    Upto(i64, i64),
    Literal(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Hyp {
    Fold { list: ListTerm, cons: Cons, nil: Nil },
    Compose(Box<Hyp>, Box<Hyp>),
    Leaf { gen: LeafGen, cons: Cons, nil: Nil },
    Hide(MachineSym),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Core {
    Foldr { cons: Cons, nil: Nil, list: ListTerm },
    Run(Box<Hyp>),
    /// A function-valued fold applied to its accumulator.
    Apply(Box<Core>, Nil),
    Loop(LoopProgram),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// `foldr`/`build`, for pipelines without a zip.
    Baseline,
    /// Hyperfunction `fold`, for pipelines with at least one zip.
    Hyper,
}

impl Route {
    pub fn of(e: &PipelineExpr) -> Route {
        if e.contains_zip() {
            Route::Hyper
        } else {
            Route::Baseline
        }
    }
}

pub fn list_term(e: &PipelineExpr) -> ListTerm {
    use PipelineExpr as P;
    let boxed = |e: &PipelineExpr| Box::new(list_term(e));
    match e {
        P::Lit(xs) => ListTerm::Literal(xs.clone()),
        P::Down(n) => ListTerm::Build(Gen::Down(*n)),
        P::Upto(a, b) => ListTerm::Build(Gen::Upto(*a, *b)),
        P::Map(f, e) => ListTerm::Build(Gen::Map(f.clone(), boxed(e))),
        P::Reverse(e) => ListTerm::Build(Gen::Reverse(boxed(e))),
        P::Zip(a, b) => ListTerm::Build(Gen::Zip(boxed(a), boxed(b))),
        P::ZipW(g, a, b) => ListTerm::Build(Gen::ZipW(*g, boxed(a), boxed(b))),
        P::Sum(_) | P::Foldl(..) => unreachable!("type checking keeps scalars at the root"),
    }
}

/// Rewrites the consumer at the root into an explicit fold over the
/// producer.
pub fn desugar(e: &PipelineExpr) -> Core {
    let route = Route::of(e);
    let fold = |list: ListTerm, cons: Cons, nil: Nil| match route {
        Route::Baseline => Core::Foldr { cons, nil, list },
        Route::Hyper => Core::Run(Box::new(Hyp::Fold { list, cons, nil })),
    };
    match e {
        PipelineExpr::Sum(inner) => fold(list_term(inner), Cons::Add, Nil::Int(0)),
        PipelineExpr::Foldl(g, z, inner) => {
            Core::Apply(Box::new(fold(list_term(inner), Cons::FoldlStep(*g), Nil::Id)), Nil::Int(*z))
        }
        list => fold(list_term(list), Cons::ListCons, Nil::Empty),
    }
}

// ---------------------------------------------------------------------------
// traversal helpers

impl Core {
    pub fn visit_cons(&self, f: &mut dyn FnMut(&Cons)) {
        match self {
            Core::Foldr { cons, list, .. } => {
                visit_cons_tree(cons, f);
                list.visit_cons(f);
            }
            Core::Run(h) => h.visit_cons(f),
            Core::Apply(c, _) => c.visit_cons(f),
            Core::Loop(p) => {
                let mut leaves = Vec::new();
                collect_lbody(&p.body, &mut leaves);
                for s in leaves {
                    visit_sym_cons(s, f);
                }
            }
        }
    }

    pub fn has_materialized(&self) -> bool {
        let mut found = false;
        self.visit_lists(&mut |l| found |= matches!(l, ListTerm::Materialized(_)));
        found
    }

    fn visit_lists(&self, f: &mut dyn FnMut(&ListTerm)) {
        match self {
            Core::Foldr { list, .. } => list.visit(f),
            Core::Run(h) => h.visit_lists(f),
            Core::Apply(c, _) => c.visit_lists(f),
            Core::Loop(_) => {}
        }
    }

    /// One more than the largest zip identifier in use.
    pub fn next_zip_id(&self) -> usize {
        let mut next = 0;
        self.visit_cons(&mut |c| match c {
            Cons::First(z) => next = next.max(z.id + 1),
            Cons::Second { id, .. } => next = next.max(id + 1),
            _ => {}
        });
        next
    }

    pub fn contains_hide_or_loop(&self) -> bool {
        match self {
            Core::Loop(_) => true,
            Core::Run(h) => h.contains_hide(),
            Core::Apply(c, _) => c.contains_hide_or_loop(),
            Core::Foldr { .. } => false,
        }
    }
}

impl Hyp {
    fn visit_cons(&self, f: &mut dyn FnMut(&Cons)) {
        match self {
            Hyp::Fold { list, cons, .. } => {
                visit_cons_tree(cons, f);
                list.visit_cons(f);
            }
            Hyp::Leaf { cons, .. } => visit_cons_tree(cons, f),
            Hyp::Compose(a, b) => {
                a.visit_cons(f);
                b.visit_cons(f);
            }
            Hyp::Hide(m) => visit_mbody_cons(&m.body, f),
        }
    }

    fn visit_lists(&self, f: &mut dyn FnMut(&ListTerm)) {
        match self {
            Hyp::Fold { list, .. } => list.visit(f),
            Hyp::Compose(a, b) => {
                a.visit_lists(f);
                b.visit_lists(f);
            }
            Hyp::Leaf { .. } | Hyp::Hide(_) => {}
        }
    }

    fn contains_hide(&self) -> bool {
        match self {
            Hyp::Hide(_) => true,
            Hyp::Compose(a, b) => a.contains_hide() || b.contains_hide(),
            _ => false,
        }
    }
}

impl ListTerm {
    fn visit(&self, f: &mut dyn FnMut(&ListTerm)) {
        f(self);
        match self {
            ListTerm::Build(g) => match g {
                Gen::Down(_) | Gen::Upto(..) => {}
                Gen::Map(_, l) | Gen::Reverse(l) => l.visit(f),
                Gen::ZipW(_, a, b) | Gen::Zip(a, b) => {
                    a.visit(f);
                    b.visit(f);
                }
            },
            ListTerm::Literal(_) => {}
            ListTerm::Materialized(c) => c.visit_lists(f),
        }
    }

    fn visit_cons(&self, f: &mut dyn FnMut(&Cons)) {
        if let ListTerm::Materialized(c) = self {
            c.visit_cons(f);
            return;
        }
        if let ListTerm::Build(g) = self {
            match g {
                Gen::Down(_) | Gen::Upto(..) => {}
                Gen::Map(_, l) | Gen::Reverse(l) => l.visit_cons(f),
                Gen::ZipW(_, a, b) | Gen::Zip(a, b) => {
                    a.visit_cons(f);
                    b.visit_cons(f);
                }
            }
        }
    }
}

fn visit_cons_tree(c: &Cons, f: &mut dyn FnMut(&Cons)) {
    f(c);
    match c {
        Cons::Compose(inner, _) | Cons::Rev(inner) => visit_cons_tree(inner, f),
        Cons::First(z) => visit_cons_tree(&z.cons, f),
        _ => {}
    }
}

fn visit_mbody_cons(b: &MBody, f: &mut dyn FnMut(&Cons)) {
    match b {
        MBody::If(_, x, y) | MBody::Compose(x, y) => {
            visit_mbody_cons(x, f);
            visit_mbody_cons(y, f);
        }
        MBody::Left(s) => visit_sym_cons(s, f),
        MBody::Right(e, s) => {
            visit_emit_cons(e, f);
            visit_sym_cons(s, f);
        }
    }
}

fn visit_emit_cons(e: &EmitFn, f: &mut dyn FnMut(&Cons)) {
    match e {
        EmitFn::Partial(c, x) => {
            visit_cons_tree(c, f);
            visit_sym_cons(x, f);
        }
        EmitFn::Chain(a, b) => {
            visit_emit_cons(a, f);
            visit_emit_cons(b, f);
        }
        EmitFn::Lam(_, s) => visit_sym_cons(s, f),
    }
}

fn visit_sym_cons(s: &Sym, f: &mut dyn FnMut(&Cons)) {
    match s {
        Sym::ConsApp(c, x, r) => {
            visit_cons_tree(c, f);
            visit_sym_cons(x, f);
            visit_sym_cons(r, f);
        }
        Sym::Int(_) | Sym::Var(_) | Sym::Nothing | Sym::Nil => {}
        Sym::Prim(_, a) | Sym::Index(_, a) | Sym::Lam(_, a) => visit_sym_cons(a, f),
        Sym::Bin(_, a, b) | Sym::Just(a, b) | Sym::Cons(a, b) | Sym::App(a, b) => {
            visit_sym_cons(a, f);
            visit_sym_cons(b, f);
        }
        Sym::Tuple(items) => items.iter().for_each(|i| visit_sym_cons(i, f)),
        Sym::Call(st, args) => {
            visit_sym_cons(st, f);
            args.iter().for_each(|a| visit_sym_cons(a, f));
        }
    }
}

fn collect_lbody<'a>(b: &'a sym::LBody, out: &mut Vec<&'a Sym>) {
    match b {
        sym::LBody::If(_, x, y) => {
            collect_lbody(x, out);
            collect_lbody(y, out);
        }
        sym::LBody::Ret(s) => out.push(s),
    }
}

// ---------------------------------------------------------------------------
// printing

impl ListTerm {
    /// Rendering in the baseline route, where `build` stays visible.
    fn show_baseline(&self) -> String {
        match self {
            ListTerm::Build(Gen::Map(f, l)) => {
                format!("build (\\c n -> foldr (c . {}) n {})", f.haskell_atom(), l.atom(Route::Baseline))
            }
            ListTerm::Build(Gen::Reverse(l)) => format!(
                "build (\\c n -> foldr (\\x k p -> k (c x p)) id {} n)",
                l.atom(Route::Baseline)
            ),
            other => other.show_named(Route::Baseline),
        }
    }

    fn show_named(&self, route: Route) -> String {
        match self {
            ListTerm::Literal(xs) => show_list(xs),
            ListTerm::Materialized(c) => format!("materialize ({})", c.show_expr()),
            ListTerm::Build(g) => match g {
                Gen::Down(n) => format!("down {}", atom_int(*n)),
                Gen::Upto(a, b) => format!("upto {} {}", atom_int(*a), atom_int(*b)),
                Gen::Map(f, l) => format!("map {} {}", f.haskell_atom(), l.atom(route)),
                Gen::Reverse(l) => format!("reverse {}", l.atom(route)),
                Gen::Zip(a, b) => format!("zip {} {}", a.atom(route), b.atom(route)),
                Gen::ZipW(g, a, b) => format!("zipW ({}) {} {}", g.symbol(), a.atom(route), b.atom(route)),
            },
        }
    }

    fn atom(&self, route: Route) -> String {
        match self {
            ListTerm::Literal(xs) => show_list(xs),
            _ => {
                let text = match route {
                    Route::Baseline => self.show_baseline(),
                    Route::Hyper => self.show_named(route),
                };
                format!("({text})")
            }
        }
    }
}

impl Hyp {
    fn show(&self) -> String {
        match self {
            Hyp::Fold { list, cons, nil } => format!(
                "fold {} {} {}",
                list.atom(Route::Hyper),
                cons.haskell_arg(),
                nil.haskell_atom()
            ),
            Hyp::Compose(a, b) => {
                let left = match **a {
                    Hyp::Compose(..) => format!("({})", a.show()),
                    _ => a.show(),
                };
                format!("{left} # {}", b.show())
            }
            Hyp::Leaf { gen, cons, nil } => {
                let head = match gen {
                    LeafGen::Down(n) => format!("down' {}", atom_int(*n)),
                    LeafGen::Upto(a, b) => format!("upto' {} {}", atom_int(*a), atom_int(*b)),
                    LeafGen::Literal(xs) => format!("fold' {}", show_list(xs)),
                };
                format!("{head} {} {}", cons.haskell_arg(), nil.haskell_atom())
            }
            Hyp::Hide(m) => sym::show_machine(m),
        }
    }
}

impl Core {
    /// The expression alone, without the `where` block.
    pub fn show_expr(&self) -> String {
        match self {
            Core::Foldr { cons, nil, list } => format!(
                "foldr {} {} {}",
                cons.haskell_arg(),
                nil.haskell_atom(),
                list.atom(Route::Baseline)
            ),
            Core::Run(h) => format!("run ({})", h.show()),
            Core::Apply(c, arg) => match **c {
                Core::Loop(_) => format!("({}) {}", c.show_expr(), arg.haskell_atom()),
                _ => format!("{} {}", c.show_expr(), arg.haskell_atom()),
            },
            Core::Loop(p) => sym::show_loop(p),
        }
    }

    /// Definitions of the zip handshake functions the expression mentions.
    pub fn where_clauses(&self) -> Vec<String> {
        let mut defs: BTreeMap<(usize, u8, String), Vec<String>> = BTreeMap::new();
        self.visit_cons(&mut |c| match c {
            Cons::First(z) => {
                let name = c.haskell_arg();
                let matched = apply_cons(
                    &z.cons,
                    zipped_sym(z, var("x"), var("y")),
                    var("xys"),
                );
                defs.entry((z.id, 0, name.clone())).or_insert_with(|| {
                    vec![
                        format!("{name} x Nothing = {}", sym::show(&nil_sym(&z.nil))),
                        format!("{name} x (Just (y,xys)) = {}", sym::show(&matched)),
                    ]
                });
            }
            Cons::Second { id, pre } => {
                let name = c.haskell_arg();
                let body = Sym::Just(Box::new(apply_fn(pre, var("y"))), Box::new(var("xys")));
                defs.entry((*id, 1, name.clone()))
                    .or_insert_with(|| vec![format!("{name} y xys = {}", sym::show(&body))]);
            }
            _ => {}
        });
        defs.into_values().flatten().collect()
    }

    /// Multi-line rendering with a trailing `where` block when needed.
    pub fn render(&self) -> String {
        let mut out = self.show_expr();
        let defs = self.where_clauses();
        if !defs.is_empty() {
            out.push_str("\n  where");
            for d in defs {
                let _ = write!(out, "\n    {d}");
            }
        }
        out
    }
}

fn zipped_sym(z: &ZipFirst, x: Sym, y: Sym) -> Sym {
    let x = apply_fn(&z.pre, x);
    match z.with {
        Some(g) => sym::bin(g.into(), x, y),
        None => Sym::Tuple(vec![x, y]),
    }
}
