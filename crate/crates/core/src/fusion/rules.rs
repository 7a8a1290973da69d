//! The rewrite rules of the fusion engine. Each rule rewrites every redex
//! it can see in one parallel pass and reports whether anything changed.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::core::{Cons, Core, Gen, Hyp, LeafGen, ListTerm, Nil, ZipFirst};
use super::expr::ScalarFn;
use super::sym::{self, bin, fresh, nil_sym, var, BinOp, Cond, EmitFn, MBody, MachineSym, Sym};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Desugar,
    /// `foldr c n (build g) = g c n`
    FoldrBuild,
    /// `fold (build g) c n = g c n` for the hyperfunction fold.
    FoldBuild,
    /// Computes a reversed zip branch eagerly.
    Materialize,
    /// Absorbs an element function into `first`/`second`.
    ComposeCons,
    /// A fold over a literal list becomes an indexed generator.
    FoldrLiteral,
    InlineMachines,
    ComposeMachines,
    Simplify,
    Loop,
    EtaExpand,
}

impl Rule {
    pub const ALL: [Rule; 11] = [
        Rule::Desugar,
        Rule::FoldrBuild,
        Rule::FoldBuild,
        Rule::Materialize,
        Rule::ComposeCons,
        Rule::FoldrLiteral,
        Rule::InlineMachines,
        Rule::ComposeMachines,
        Rule::Simplify,
        Rule::Loop,
        Rule::EtaExpand,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Desugar => "desugar",
            Rule::FoldrBuild => "foldr-build",
            Rule::FoldBuild => "fold-build",
            Rule::Materialize => "materialize",
            Rule::ComposeCons => "compose-cons",
            Rule::FoldrLiteral => "foldr-literal",
            Rule::InlineMachines => "inline-machines",
            Rule::ComposeMachines => "compose-machines",
            Rule::Simplify => "simplify",
            Rule::Loop => "loop",
            Rule::EtaExpand => "eta-expand",
        }
    }

    pub fn from_name(name: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.name() == name)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One pass of `rule` over `core`, or `None` when it has no redex.
/// `Desugar` starts from source syntax and is not handled here.
pub fn apply(rule: Rule, core: &Core) -> Option<Core> {
    let mut changed = false;
    let out = match rule {
        Rule::Desugar => return None,
        Rule::FoldrBuild => foldr_build(core, &mut changed),
        Rule::FoldBuild => {
            let mut ids = core.next_zip_id();
            on_core(core, &mut |c| fold_build_core(c, &mut ids), &mut changed)
        }
        Rule::Materialize => on_core(core, &mut materialize_core, &mut changed),
        Rule::ComposeCons => on_core(core, &mut compose_cons_core, &mut changed),
        Rule::FoldrLiteral => on_hyps(core, &mut foldr_literal, &mut changed),
        Rule::InlineMachines => {
            let mut names = BTreeSet::new();
            on_hyps(core, &mut |h, ch| inline(h, &mut names, ch), &mut changed)
        }
        Rule::ComposeMachines => on_hyps(core, &mut compose_machines, &mut changed),
        Rule::Simplify => on_hyps(core, &mut simplify, &mut changed),
        Rule::Loop => to_loop(core, &mut changed),
        Rule::EtaExpand => eta_expand(core, &mut changed),
    };
    changed.then_some(out)
}

/// Applies `f` to every core reachable from the root, including the
/// cores of materialized lists, outermost first.
fn on_core(
    core: &Core,
    f: &mut dyn FnMut(&Core) -> Option<Core>,
    changed: &mut bool,
) -> Core {
    if let Some(out) = f(core) {
        *changed = true;
        return out;
    }
    match core {
        Core::Run(h) => Core::Run(Box::new(hyp_cores(h, f, changed))),
        Core::Apply(c, n) => Core::Apply(Box::new(on_core(c, f, changed)), n.clone()),
        Core::Foldr { cons, nil, list } => Core::Foldr {
            cons: cons.clone(),
            nil: nil.clone(),
            list: list_cores(list, f, changed),
        },
        Core::Loop(_) => core.clone(),
    }
}

fn hyp_cores(h: &Hyp, f: &mut dyn FnMut(&Core) -> Option<Core>, changed: &mut bool) -> Hyp {
    match h {
        Hyp::Fold { list, cons, nil } => Hyp::Fold {
            list: list_cores(list, f, changed),
            cons: cons.clone(),
            nil: nil.clone(),
        },
        Hyp::Compose(a, b) => Hyp::Compose(
            Box::new(hyp_cores(a, f, changed)),
            Box::new(hyp_cores(b, f, changed)),
        ),
        other => other.clone(),
    }
}

fn list_cores(l: &ListTerm, f: &mut dyn FnMut(&Core) -> Option<Core>, changed: &mut bool) -> ListTerm {
    match l {
        ListTerm::Materialized(c) => ListTerm::Materialized(Box::new(on_core(c, f, changed))),
        other => other.clone(),
    }
}

/// Applies a hyperfunction-level rewrite throughout the top-level core.
fn on_hyps(core: &Core, f: &mut dyn FnMut(&Hyp, &mut bool) -> Hyp, changed: &mut bool) -> Core {
    match core {
        Core::Run(h) => Core::Run(Box::new(f(h, changed))),
        Core::Apply(c, n) => Core::Apply(Box::new(on_hyps(c, f, changed)), n.clone()),
        other => other.clone(),
    }
}

// ---------------------------------------------------------------------------
// the baseline route

fn foldr_build(core: &Core, changed: &mut bool) -> Core {
    match core {
        Core::Foldr { cons, nil, list: ListTerm::Build(Gen::Map(f, l)) } => {
            *changed = true;
            Core::Foldr {
                cons: cons.clone().then_after(f.clone()),
                nil: nil.clone(),
                list: (**l).clone(),
            }
        }
        Core::Foldr { cons, nil, list: ListTerm::Build(Gen::Reverse(l)) } => {
            *changed = true;
            Core::Apply(
                Box::new(Core::Foldr {
                    cons: Cons::Rev(Box::new(cons.clone())),
                    nil: Nil::Id,
                    list: (**l).clone(),
                }),
                nil.clone(),
            )
        }
        Core::Apply(c, n) => Core::Apply(Box::new(foldr_build(c, changed)), n.clone()),
        other => other.clone(),
    }
}

// ---------------------------------------------------------------------------
// the hyperfunction route

fn fold_build_core(core: &Core, ids: &mut usize) -> Option<Core> {
    match core {
        // A reversal consumed at the root turns into an accumulating fold.
        Core::Run(h) => match &**h {
            Hyp::Fold { list: ListTerm::Build(Gen::Reverse(l)), cons, nil } if !cons.is_protocol() => {
                Some(Core::Apply(
                    Box::new(Core::Run(Box::new(Hyp::Fold {
                        list: (**l).clone(),
                        cons: Cons::Rev(Box::new(cons.clone())),
                        nil: Nil::Id,
                    }))),
                    nil.clone(),
                ))
            }
            h => {
                let mut changed = false;
                let out = fold_build_hyp(h, ids, &mut changed);
                changed.then(|| Core::Run(Box::new(out)))
            }
        },
        _ => None,
    }
}

fn fold_build_hyp(h: &Hyp, ids: &mut usize, changed: &mut bool) -> Hyp {
    match h {
        Hyp::Fold { list: ListTerm::Build(g), cons, nil } => {
            let rewritten = match g {
                Gen::Down(k) => Hyp::Leaf { gen: LeafGen::Down(*k), cons: cons.clone(), nil: nil.clone() },
                Gen::Upto(a, b) => Hyp::Leaf { gen: LeafGen::Upto(*a, *b), cons: cons.clone(), nil: nil.clone() },
                Gen::Map(f, l) => Hyp::Fold {
                    list: (**l).clone(),
                    cons: cons.clone().then_after(f.clone()),
                    nil: nil.clone(),
                },
                Gen::ZipW(g, a, b) => zip_folds(Some(*g), a, b, cons, nil, ids),
                Gen::Zip(a, b) => zip_folds(None, a, b, cons, nil, ids),
                // left to the materialize rule
                Gen::Reverse(_) => return h.clone(),
            };
            *changed = true;
            rewritten
        }
        Hyp::Compose(a, b) => Hyp::Compose(
            Box::new(fold_build_hyp(a, ids, changed)),
            Box::new(fold_build_hyp(b, ids, changed)),
        ),
        other => other.clone(),
    }
}

fn zip_folds(
    with: Option<super::expr::ScalarFn2>,
    a: &ListTerm,
    b: &ListTerm,
    cons: &Cons,
    nil: &Nil,
    ids: &mut usize,
) -> Hyp {
    let id = *ids;
    *ids += 1;
    let first = ZipFirst { id, pre: ScalarFn::Id, with, cons: cons.clone(), nil: nil.clone() };
    Hyp::Compose(
        Box::new(Hyp::Fold { list: a.clone(), cons: Cons::First(Box::new(first)), nil: nil.clone() }),
        Box::new(Hyp::Fold {
            list: b.clone(),
            cons: Cons::Second { id, pre: ScalarFn::Id },
            nil: Nil::Nothing,
        }),
    )
}

fn materialize_core(core: &Core) -> Option<Core> {
    fn go(h: &Hyp, changed: &mut bool) -> Hyp {
        match h {
            Hyp::Fold { list: ListTerm::Build(Gen::Reverse(l)), cons, nil } if cons.is_protocol() => {
                *changed = true;
                let whole = Core::Run(Box::new(Hyp::Fold {
                    list: ListTerm::Build(Gen::Reverse(l.clone())),
                    cons: Cons::ListCons,
                    nil: Nil::Empty,
                }));
                Hyp::Fold { list: ListTerm::Materialized(Box::new(whole)), cons: cons.clone(), nil: nil.clone() }
            }
            Hyp::Compose(a, b) => Hyp::Compose(Box::new(go(a, changed)), Box::new(go(b, changed))),
            other => other.clone(),
        }
    }
    match core {
        Core::Run(h) => {
            let mut changed = false;
            let out = go(h, &mut changed);
            changed.then(|| Core::Run(Box::new(out)))
        }
        _ => None,
    }
}

fn absorb(c: &Cons) -> Option<Cons> {
    match c {
        Cons::Compose(inner, f) => match &**inner {
            Cons::First(z) => {
                let mut z = (**z).clone();
                z.pre = ScalarFn::compose(z.pre, f.clone());
                z.cons = absorb(&z.cons).unwrap_or(z.cons);
                Some(Cons::First(Box::new(z)))
            }
            Cons::Second { id, pre } => {
                Some(Cons::Second { id: *id, pre: ScalarFn::compose(pre.clone(), f.clone()) })
            }
            _ => None,
        },
        Cons::First(z) => absorb(&z.cons).map(|inner| {
            let mut z = (**z).clone();
            z.cons = inner;
            Cons::First(Box::new(z))
        }),
        _ => None,
    }
}

fn compose_cons_core(core: &Core) -> Option<Core> {
    fn go(h: &Hyp, changed: &mut bool) -> Hyp {
        match h {
            Hyp::Fold { list, cons, nil } => match absorb(cons) {
                Some(cons) => {
                    *changed = true;
                    Hyp::Fold { list: list.clone(), cons, nil: nil.clone() }
                }
                None => h.clone(),
            },
            Hyp::Leaf { gen, cons, nil } => match absorb(cons) {
                Some(cons) => {
                    *changed = true;
                    Hyp::Leaf { gen: gen.clone(), cons, nil: nil.clone() }
                }
                None => h.clone(),
            },
            Hyp::Compose(a, b) => Hyp::Compose(Box::new(go(a, changed)), Box::new(go(b, changed))),
            Hyp::Hide(_) => h.clone(),
        }
    }
    match core {
        Core::Run(h) => {
            let mut changed = false;
            let out = go(h, &mut changed);
            changed.then(|| Core::Run(Box::new(out)))
        }
        _ => None,
    }
}

fn foldr_literal(h: &Hyp, changed: &mut bool) -> Hyp {
    match h {
        Hyp::Fold { list: ListTerm::Literal(xs), cons, nil } => {
            *changed = true;
            Hyp::Leaf { gen: LeafGen::Literal(xs.clone()), cons: cons.clone(), nil: nil.clone() }
        }
        Hyp::Compose(a, b) => Hyp::Compose(Box::new(foldr_literal(a, changed)), Box::new(foldr_literal(b, changed))),
        other => other.clone(),
    }
}

// ---------------------------------------------------------------------------
// the machine stage

/// The step machine of a specialized generator fold. State variables are
/// drawn fresh from `names`.
pub fn leaf_machine(gen: &LeafGen, cons: &Cons, nil: &Nil, down_var: &str, names: &mut BTreeSet<String>) -> MachineSym {
    let mut take = |base: &str| {
        let v = fresh(base, names);
        names.insert(v.clone());
        v
    };
    let stop = MBody::Left(nil_sym(nil));
    let emit = |x: Sym, next: Sym| MBody::Right(EmitFn::Partial(cons.clone(), x), next);
    match gen {
        LeafGen::Down(k) => {
            let z = take(down_var);
            MachineSym {
                pattern: var(&z),
                seed: Sym::Int(*k),
                body: MBody::If(
                    Cond::Le(var(&z), Sym::Int(0)),
                    Box::new(stop),
                    Box::new(emit(var(&z), bin(BinOp::Sub, var(&z), Sym::Int(1)))),
                ),
            }
        }
        LeafGen::Upto(a, b) => {
            let (i, j) = (take("i"), take("j"));
            MachineSym {
                pattern: Sym::Tuple(vec![var(&i), var(&j)]),
                seed: Sym::Tuple(vec![Sym::Int(*a), Sym::Int(*b)]),
                body: MBody::If(
                    Cond::Gt(var(&i), var(&j)),
                    Box::new(stop),
                    Box::new(emit(var(&i), Sym::Tuple(vec![bin(BinOp::Add, var(&i), Sym::Int(1)), var(&j)]))),
                ),
            }
        }
        LeafGen::Literal(xs) => {
            let ix = take("ix");
            MachineSym {
                pattern: var(&ix),
                seed: Sym::Int(0),
                body: MBody::If(
                    Cond::Ge(var(&ix), Sym::Int(xs.len() as i64)),
                    Box::new(stop),
                    Box::new(emit(
                        Sym::Index(xs.as_slice().into(), Box::new(var(&ix))),
                        bin(BinOp::Add, var(&ix), Sym::Int(1)),
                    )),
                ),
            }
        }
    }
}

fn inline(h: &Hyp, names: &mut BTreeSet<String>, changed: &mut bool) -> Hyp {
    match h {
        Hyp::Leaf { gen, cons, nil } => {
            *changed = true;
            Hyp::Hide(leaf_machine(gen, cons, nil, "z", names))
        }
        Hyp::Compose(a, b) => {
            let a = inline(a, names, changed);
            Hyp::Compose(Box::new(a), Box::new(inline(b, names, changed)))
        }
        other => other.clone(),
    }
}

fn compose_machines(h: &Hyp, changed: &mut bool) -> Hyp {
    match h {
        Hyp::Compose(a, b) => match (&**a, &**b) {
            (Hyp::Hide(x), Hyp::Hide(y)) => {
                *changed = true;
                Hyp::Hide(MachineSym::compose(x, y))
            }
            _ => Hyp::Compose(Box::new(compose_machines(a, changed)), Box::new(compose_machines(b, changed))),
        },
        other => other.clone(),
    }
}

fn simplify(h: &Hyp, changed: &mut bool) -> Hyp {
    match h {
        Hyp::Hide(m) if !m.body.is_simplified() => {
            *changed = true;
            Hyp::Hide(m.simplify())
        }
        Hyp::Compose(a, b) => Hyp::Compose(Box::new(simplify(a, changed)), Box::new(simplify(b, changed))),
        other => other.clone(),
    }
}

fn to_loop(core: &Core, changed: &mut bool) -> Core {
    match core {
        Core::Run(h) => match &**h {
            Hyp::Hide(m) => {
                *changed = true;
                Core::Loop(m.to_loop())
            }
            _ => core.clone(),
        },
        Core::Foldr { cons, nil, list } => {
            let gen = match list {
                ListTerm::Build(Gen::Down(k)) => LeafGen::Down(*k),
                ListTerm::Build(Gen::Upto(a, b)) => LeafGen::Upto(*a, *b),
                ListTerm::Literal(xs) => LeafGen::Literal(xs.clone()),
                _ => return core.clone(),
            };
            *changed = true;
            Core::Loop(leaf_machine(&gen, cons, nil, "x", &mut BTreeSet::new()).to_loop())
        }
        Core::Apply(c, n) => Core::Apply(Box::new(to_loop(c, changed)), n.clone()),
        Core::Loop(_) => core.clone(),
    }
}

fn eta_expand(core: &Core, changed: &mut bool) -> Core {
    match core {
        Core::Apply(c, n) => match &**c {
            Core::Loop(p) => {
                *changed = true;
                Core::Loop(p.eta_expand(sym::nil_sym(n)))
            }
            _ => Core::Apply(Box::new(eta_expand(c, changed)), n.clone()),
        },
        other => other.clone(),
    }
}
