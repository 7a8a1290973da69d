//! The acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::*;
use hyperfuse::folds::{build, fold, zip_h, zipw_h, ConsFn, ListGen};
use hyperfuse::fusion::eval::{eval_core, Ctx};
use hyperfuse::fusion::expr::PipelineExpr;
use hyperfuse::fusion::naive::evaluate_naive;
use hyperfuse::fusion::value::{AllocCounter, Output};
use hyperfuse::fusion::{fuse, Outcome};
use hyperfuse::lazy::{Deferred, HyperError, LazyFn, Result, StepBudget};
use hyperfuse::model::{ClosureModel, MachineModel, Model, StreamModel};
use hyperfuse::observe::first_difference;
use hyperfuse::parse::parse_expr;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Pinned sizes and tolerances. Every comparison below is exact.
const AXIOM_CASES: usize = 200;
const PROBES_PER_CASE: usize = 8;
const OBSERVATION_FUEL: u64 = 5_000;
const EXHAUSTIVE_PROBE_NODES: usize = 4;
const FAITHFUL_FUNCTIONS: usize = 100;
const FAITHFUL_DOMAIN: std::ops::RangeInclusive<i64> = 0..=1000;
const FOLD_LISTS: usize = 500;
const ZIP_CASES: usize = 500;
const PIPELINES: usize = 1000;
const PIPELINE_DEPTH: usize = 5;
const GENERATOR_BACKED: usize = 200;
const DIVERGENCE_FUEL: u64 = 10_000;
const DIVERGENCE_DEADLINE: Duration = Duration::from_secs(10);
const CROSS_MODEL_CASES: usize = 300;

type Verdict = std::result::Result<String, String>;

fn rng(stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + stream)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn in_all_models(check: &dyn Fn(&str) -> std::result::Result<(), String>) -> std::result::Result<(), String> {
    for m in ["H", "L", "A"] {
        check(m).map_err(|e| format!("{m} model: {e}"))?;
    }
    Ok(())
}

// 1 -------------------------------------------------------------------------

fn tracer(name: &'static str) -> ConsFn<i64, String, String> {
    ConsFn::strict(move |x: i64, r: String| {
        if r.contains(' ') {
            format!("{name} {x} ({r})")
        } else {
            format!("{name} {x} {r}")
        }
    })
}

fn coroutine_trace<M: Model>() -> Result<String> {
    let f = fold::<M, _, _, _>(&[1, 2, 3], &tracer("c"), "n".to_string());
    let k = fold::<M, _, _, _>(&[7, 8], &tracer("d"), "m".to_string());
    M::invoke(&f, &k, &StepBudget::default())
}

fn criterion_1() -> Verdict {
    const EXPECTED: &str = "c 1 (d 7 (c 2 (d 8 (c 3 m))))";
    let got = [
        coroutine_trace::<ClosureModel>(),
        coroutine_trace::<StreamModel>(),
        coroutine_trace::<MachineModel>(),
    ];
    for (m, g) in ["H", "L", "A"].iter().zip(&got) {
        ensure(g.as_deref() == Ok(EXPECTED), || format!("{m} model gave {g:?}"))?;
    }
    Ok(format!("\"{EXPECTED}\" in H, L and A"))
}

// 2 -------------------------------------------------------------------------

fn three_way<M: Model>() -> Result<String> {
    let a = fold::<M, _, _, _>(&[25], &tracer("c"), "n".to_string());
    let b = fold::<M, _, _, _>(&[1, 2, 3], &tracer("d"), "m".to_string());
    let c = fold::<M, _, _, _>(&[7, 8], &tracer("f"), "p".to_string());
    M::run(&M::compose(&a, &M::compose(&b, &c)), &StepBudget::default())
}

fn criterion_2() -> Verdict {
    const EXPECTED: &str = "c 25 (d 1 (f 7 n))";
    let got = [three_way::<ClosureModel>(), three_way::<StreamModel>(), three_way::<MachineModel>()];
    for (m, g) in ["H", "L", "A"].iter().zip(&got) {
        ensure(g.as_deref() == Ok(EXPECTED), || format!("{m} model gave {g:?}"))?;
    }
    Ok(format!("\"{EXPECTED}\" in H, L and A"))
}

// 3 -------------------------------------------------------------------------

/// `fix f` for the integer functions used here: only constants have a
/// fixed point, every other function is strict and diverges.
fn fix_oracle(f: IntFn) -> Option<i64> {
    match f {
        IntFn::Const(k) => Some(k),
        _ => None,
    }
}

fn same(a: &Result<i64>, b: &Result<i64>) -> bool {
    match (a, b) {
        (Ok(x), Ok(y)) => x == y,
        (Err(e1), Err(e2)) => e1.is_fuel() && e2.is_fuel(),
        _ => false,
    }
}

fn obs<M: Model>(
    axiom: &str,
    x: &M::Hyper<i64, i64>,
    y: &M::Hyper<i64, i64>,
    probes: &[M::Hyper<i64, i64>],
) -> std::result::Result<(), String> {
    match first_difference::<M>(x, y, probes, OBSERVATION_FUEL) {
        None => Ok(()),
        Some((i, a, b)) => Err(format!("{axiom}: probe {i} gives {a:?} vs {b:?}")),
    }
}

struct Operands {
    f: HyperSpec,
    g: HyperSpec,
    h: HyperSpec,
    e1: IntFn,
    e2: IntFn,
}

fn check_axioms<M: Model>(ops: &Operands, probes: &[M::Hyper<i64, i64>]) -> std::result::Result<(), String> {
    let (f, g, h) = (ops.f.build::<M>(), ops.g.build::<M>(), ops.h.build::<M>());
    let id = M::identity::<i64>();
    obs::<M>(
        "axiom 1",
        &M::compose(&M::compose(&f, &g), &h),
        &M::compose(&f, &M::compose(&g, &h)),
        probes,
    )?;
    obs::<M>("axiom 2 (right unit)", &M::compose(&f, &id), &f, probes)?;
    obs::<M>("axiom 2 (left unit)", &M::compose(&id, &f), &f, probes)?;
    let (e1, e2) = (ops.e1, ops.e2);
    // lift (e1 . e2) = lift e1 # lift e2
    obs::<M>(
        "axiom 3",
        &M::lift(e2.then(e1)),
        &M::compose(&M::lift(e1.lazy()), &M::lift(e2.lazy())),
        probes,
    )?;
    let ran = M::run(&M::lift(e1.lazy()), &StepBudget::new(OBSERVATION_FUEL));
    match (fix_oracle(e1), &ran) {
        (Some(k), Ok(v)) if *v == k => {}
        (None, Err(e)) if e.is_fuel() => {}
        (want, got) => return Err(format!("axiom 4: fix gives {want:?}, run(lift f) gives {got:?}")),
    }
    // (e1 << g) # (e2 << h) = (e1 . e2) << (g # h)
    obs::<M>(
        "axiom 5",
        &M::compose(&M::push(e1.lazy(), g.clone()), &M::push(e2.lazy(), h.clone())),
        &M::push(e2.then(e1), M::compose(&g, &h)),
        probes,
    )?;
    obs::<M>("axiom 6", &M::lift(e1.lazy()), &M::push(e1.lazy(), M::lift(e1.lazy())), probes)?;
    let lhs = M::run(&M::compose(&M::push(e1.lazy(), g.clone()), &h), &StepBudget::new(OBSERVATION_FUEL));
    // A constant function never demands its argument.
    let rhs = match e1 {
        IntFn::Const(k) => Ok(k),
        _ => M::run(&M::compose(&h, &g), &StepBudget::new(OBSERVATION_FUEL)).map(|v| e1.apply(v)),
    };
    ensure(same(&lhs, &rhs), || format!("axiom 7: {lhs:?} vs {rhs:?}"))
}

fn random_axioms<M: Model>(stream: u64) -> std::result::Result<(), String> {
    let mut rng = rng(stream);
    for case in 0..AXIOM_CASES {
        let ops = Operands {
            f: HyperSpec::random(&mut rng),
            g: HyperSpec::random(&mut rng),
            h: HyperSpec::random(&mut rng),
            e1: IntFn::random(&mut rng),
            e2: IntFn::random(&mut rng),
        };
        let probes = random_probes::<M>(&mut rng, PROBES_PER_CASE);
        check_axioms::<M>(&ops, &probes).map_err(|e| format!("case {case}: {e}"))?;
    }
    Ok(())
}

fn exhaustive_stream_axioms() -> std::result::Result<usize, String> {
    let probes: Vec<_> = exhaustive_probe_specs(EXHAUSTIVE_PROBE_NODES)
        .iter()
        .map(|s| s.build::<StreamModel>())
        .collect();
    let operands = [
        HyperSpec::Chain(vec![], 0),
        HyperSpec::Chain(vec![IntFn::Affine(1, 1)], 1),
        HyperSpec::Chain(vec![IntFn::Affine(2, 0), IntFn::Const(3)], 0),
        HyperSpec::Lift(IntFn::Affine(1, 1)),
    ];
    let fns = [IntFn::Affine(1, 1), IntFn::Const(3)];
    let mut checked = 0;
    for f in &operands {
        for g in &operands {
            for h in &operands {
                for &e1 in &fns {
                    for &e2 in &fns {
                        let ops = Operands { f: f.clone(), g: g.clone(), h: h.clone(), e1, e2 };
                        check_axioms::<StreamModel>(&ops, &probes)?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(checked * probes.len())
}

fn criterion_3() -> Verdict {
    random_axioms::<ClosureModel>(31).map_err(|e| format!("H model: {e}"))?;
    random_axioms::<StreamModel>(32).map_err(|e| format!("L model: {e}"))?;
    random_axioms::<MachineModel>(33).map_err(|e| format!("A model: {e}"))?;
    let exhaustive = exhaustive_stream_axioms().map_err(|e| format!("L exhaustive: {e}"))?;
    Ok(format!(
        "axioms 1-7, {AXIOM_CASES} random cases each in H, L and A; L exhaustive over <= {EXHAUSTIVE_PROBE_NODES}-node probes ({exhaustive} operand/probe pairs)"
    ))
}

// 4 -------------------------------------------------------------------------

fn faithful<M: Model>(fns: &[IntFn]) -> std::result::Result<(), String> {
    for f in fns {
        let h = M::lift(f.lazy());
        for x in FAITHFUL_DOMAIN {
            let got = M::project(&h, x, &StepBudget::default());
            ensure(got == Ok(f.apply(x)), || format!("project(lift {f:?}) {x} = {got:?}"))?;
        }
    }
    Ok(())
}

fn criterion_4() -> Verdict {
    let mut rng = rng(4);
    let fns: Vec<IntFn> = (0..FAITHFUL_FUNCTIONS).map(|_| IntFn::random(&mut rng)).collect();
    in_all_models(&|m| match m {
        "H" => faithful::<ClosureModel>(&fns),
        "L" => faithful::<StreamModel>(&fns),
        _ => faithful::<MachineModel>(&fns),
    })?;
    Ok(format!("{FAITHFUL_FUNCTIONS} functions over {FAITHFUL_DOMAIN:?} in H, L and A"))
}

// 5 -------------------------------------------------------------------------

fn fold_inverses<M: Model>(stream: u64) -> std::result::Result<(), String> {
    let mut rng = rng(stream);
    for _ in 0..FOLD_LISTS {
        let xs = random_list(&mut rng, 12);
        let c = Cons2::random(&mut rng);
        let n = rng.gen_range(0..MODULUS);
        let ran = M::run(&c.hyper::<M>(&xs, n), &StepBudget::default());
        ensure(ran == Ok(c.foldr(n, &xs)), || format!("run(fold {xs:?}) = {ran:?}"))?;
        let rebuilt = build::<M, _, _>(&ListGen(xs.clone()), &StepBudget::default());
        ensure(rebuilt.as_ref() == Ok(&xs), || format!("build(fold-of {xs:?}) = {rebuilt:?}"))?;
    }
    Ok(())
}

fn criterion_5() -> Verdict {
    in_all_models(&|m| match m {
        "H" => fold_inverses::<ClosureModel>(51),
        "L" => fold_inverses::<StreamModel>(52),
        _ => fold_inverses::<MachineModel>(53),
    })?;
    Ok(format!("{FOLD_LISTS} random lists per model"))
}

// 6 -------------------------------------------------------------------------

fn zips<M: Model>(stream: u64) -> std::result::Result<(), String> {
    let mut rng = rng(stream);
    for _ in 0..ZIP_CASES {
        let (xs, ys) = (random_list(&mut rng, 10), random_list(&mut rng, 10));
        let want: Vec<(i64, i64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
        let got = zip_h::<M, _, _>(&xs, &ys, &StepBudget::default());
        ensure(got.as_ref() == Ok(&want), || format!("zip {xs:?} {ys:?} = {got:?}"))?;
        let want_w: Vec<i64> = xs.iter().zip(&ys).map(|(x, y)| x * y - x).collect();
        let got_w = zipw_h::<M, _, _, _>(|x: i64, y: i64| x * y - x, &xs, &ys, &StepBudget::default());
        ensure(got_w.as_ref() == Ok(&want_w), || format!("zipW {xs:?} {ys:?} = {got_w:?}"))?;
    }
    // Payloads past the shorter length raise if forced.
    let xs = [1i64, 2, 3];
    let sentinel = HyperError::Raised("sentinel".into());
    let ys: Vec<Deferred<i64>> = (0..6)
        .map(|i| if i < xs.len() { Deferred::ready(10 * i as i64) } else { Deferred::failing(sentinel.clone()) })
        .collect();
    let pairs = zip_h::<M, _, _>(&xs, &ys, &StepBudget::default()).map_err(|e| format!("sentinel zip failed: {e}"))?;
    let forced: Result<Vec<i64>> = pairs.iter().map(|(_, y)| y.force()).collect();
    ensure(forced == Ok(vec![0, 10, 20]), || format!("sentinel zip payloads {forced:?}"))?;
    ensure(ys[3..].iter().all(|d| !d.is_forced() || d.force().is_err()), || "payload beyond length".into())
}

fn criterion_6() -> Verdict {
    in_all_models(&|m| match m {
        "H" => zips::<ClosureModel>(61),
        "L" => zips::<StreamModel>(62),
        _ => zips::<MachineModel>(63),
    })?;
    Ok(format!("{ZIP_CASES} random zip/zipW cases per model, sentinel payload untouched"))
}

// 7 -------------------------------------------------------------------------

fn output(v: Result<hyperfuse::fusion::value::Value>) -> Result<Output> {
    v.and_then(|v| v.to_output())
}

fn fused_agrees(e: &PipelineExpr) -> std::result::Result<bool, String> {
    let want = evaluate_naive(e, &AllocCounter::new()).map_err(|err| format!("naive {e}: {err}"))?;
    let f = fuse(e).map_err(|err| format!("fuse {e}: {err}"))?;
    let fresh = || Ctx::new(AllocCounter::new(), StepBudget::default());
    let mut results = vec![
        ("H staged", output(eval_core::<ClosureModel>(&f.staged, &fresh()))),
        ("L staged", output(eval_core::<StreamModel>(&f.staged, &fresh()))),
        ("A staged", output(eval_core::<MachineModel>(&f.staged, &fresh()))),
    ];
    let fused = matches!(f.outcome, Outcome::Fused(_));
    if let Outcome::Fused(m) = &f.outcome {
        results.push(("machine", output(m.evaluate(&AllocCounter::new(), &StepBudget::default()))));
        results.push(("loop", output(m.evaluate_program(&AllocCounter::new(), &StepBudget::default()))));
    }
    for (what, got) in results {
        ensure(got.as_ref() == Ok(&want), || format!("{e}: {what} gives {got:?}, naive {want}"))?;
    }
    f.trace.replay().map_err(|err| format!("{e}: {err}"))?;
    Ok(fused)
}

fn criterion_7() -> Verdict {
    let mut rng = rng(7);
    let mut fused = 0;
    for _ in 0..PIPELINES {
        let e = random_pipeline(&mut rng, PIPELINE_DEPTH);
        ensure(e.depth() <= PIPELINE_DEPTH, || format!("generator exceeded depth: {e}"))?;
        fused += usize::from(fused_agrees(&e)?);
    }
    Ok(format!(
        "{PIPELINES} random pipelines (depth <= {PIPELINE_DEPTH}), {fused} fully fused, rest partially; all traces replay"
    ))
}

// 8 -------------------------------------------------------------------------

const CORPUS: &[&str] = &[
    "sum(zipW(mul, upto(2,10), down(6)))",
    "sum(map(sqr, down(3)))",
    "sum(map(sqr, down(100)))",
    "sum(down(0))",
    "sum(upto(5,4))",
    "sum(zipW(add, map(inc, upto(1,20)), zipW(mul, down(7), map(sqr.inc, upto(-3,9)))))",
];

fn fused_cells(e: &PipelineExpr) -> std::result::Result<(Output, u64), String> {
    let f = fuse(e).map_err(|err| err.to_string())?;
    let m = f.machine().ok_or_else(|| format!("{e} did not fuse to a machine"))?;
    let (c1, c2) = (AllocCounter::new(), AllocCounter::new());
    let v = output(m.evaluate(&c1, &StepBudget::default())).map_err(|err| err.to_string())?;
    let p = output(m.evaluate_program(&c2, &StepBudget::default())).map_err(|err| err.to_string())?;
    ensure(v == p, || format!("{e}: machine {v} vs loop {p}"))?;
    Ok((v, c1.stats().list_cells + c2.stats().list_cells))
}

fn criterion_8() -> Verdict {
    let mut rng = rng(8);
    let mut corpus: Vec<PipelineExpr> = CORPUS.iter().map(|s| parse_expr(s).expect("corpus parses")).collect();
    corpus.extend((0..GENERATOR_BACKED).map(|_| random_generator_backed(&mut rng, PIPELINE_DEPTH)));
    for e in &corpus {
        ensure(e.is_generator_backed(), || format!("{e} is not generator-backed"))?;
        let want = evaluate_naive(e, &AllocCounter::new()).map_err(|err| err.to_string())?;
        let (got, cells) = fused_cells(e)?;
        ensure(got == want, || format!("{e}: fused {got}, naive {want}"))?;
        ensure(cells == 0, || format!("{e}: fused execution allocated {cells} list cells"))?;
    }
    let e = parse_expr(CORPUS[0]).unwrap();
    let counter = AllocCounter::new();
    let naive = evaluate_naive(&e, &counter).map_err(|err| err.to_string())?;
    let cells = counter.stats().list_cells;
    ensure(naive == Output::int(77) && cells >= 15, || format!("naive gave {naive} with {cells} cells"))?;
    let (fused, _) = fused_cells(&e)?;
    ensure(fused == Output::int(77), || format!("fused gave {fused}"))?;
    Ok(format!("{} generator-backed pipelines fuse to 0 list cells; naive zipW example allocates {cells}, both give 77", corpus.len()))
}

// 9 -------------------------------------------------------------------------

const GOLDEN: &[(&str, &str, &[&str])] = &[
    ("sum-map-down.txt", "sum(map(sqr, down(3)))", &["foldr ((+) . sqr) 0 (down 3)", "loop x = if x<=0 then 0 else sqr x + loop (x-1)"]),
    (
        "sum-reverse-map-down.txt",
        "sum(reverse(map(sqr, down(3))))",
        &["foldr (\\x k p -> k (sqr x + p)) id (down 3) 0", "let loop x p = if x<=0 then p else loop (x-1) (sqr x + p) in loop 3 0"],
    ),
    (
        "sum-zipw-map-sqr-inc.txt",
        "sum(zipW(mul, map(sqr, [1,2,3]), map(inc, [4,5])))",
        &["fold [1,2,3] (first . sqr) 0 # fold [4,5] (second . inc) Nothing", "run (fold [1,2,3] first' 0 # fold [4,5] second' Nothing)"],
    ),
    (
        "sum-zipw-upto-down.txt",
        "sum(zipW(mul, upto(2,10), down(6)))",
        &["run (upto' 2 10 first 0 # down' 6 second Nothing)", "(i * z) + loop ((i+1,j),z-1) in loop ((2,10),6)"],
    ),
];

fn criterion_9() -> Verdict {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/derivations");
    for (file, src, landmarks) in GOLDEN {
        let golden = std::fs::read_to_string(dir.join(file)).map_err(|e| format!("{file}: {e}"))?;
        let f = fuse(&parse_expr(src).unwrap()).map_err(|e| e.to_string())?;
        let text = f.trace.to_text();
        if text != golden {
            let step = text.lines().zip(golden.lines()).position(|(a, b)| a != b);
            return Err(format!("{file}: trace differs from golden file at line {step:?}"));
        }
        for mark in *landmarks {
            ensure(text.contains(mark), || format!("{file}: missing \"{mark}\""))?;
        }
        f.trace.replay().map_err(|e| format!("{file}: {e}"))?;
    }
    Ok(format!("{} golden derivations reproduced step for step", GOLDEN.len()))
}

// 10 ------------------------------------------------------------------------

fn diverges<M: Model>() -> std::result::Result<(), String> {
    let start = Instant::now();
    let got = M::run(&M::lift(LazyFn::strict(|x: i64| x + 1)), &StepBudget::new(DIVERGENCE_FUEL));
    ensure(matches!(got, Err(HyperError::FuelExhausted { .. })), || format!("run(lift inc) = {got:?}"))?;
    ensure(start.elapsed() < DIVERGENCE_DEADLINE, || format!("took {:?}", start.elapsed()))
}

fn criterion_10() -> Verdict {
    in_all_models(&|m| match m {
        "H" => diverges::<ClosureModel>(),
        "L" => diverges::<StreamModel>(),
        _ => diverges::<MachineModel>(),
    })?;
    Ok(format!("run(lift inc) exhausts {DIVERGENCE_FUEL} steps in H, L and A"))
}

// 11 ------------------------------------------------------------------------

fn invoke_in<M: Model>(c: Cons2, xs: &[i64], n: i64, d: Cons2, ys: &[i64], m: i64) -> Result<i64> {
    M::invoke(&c.hyper::<M>(xs, n), &d.hyper::<M>(ys, m), &StepBudget::default())
}

fn criterion_11() -> Verdict {
    let mut rng = rng(11);
    for _ in 0..CROSS_MODEL_CASES {
        let (c, d) = (Cons2::random(&mut rng), Cons2::random(&mut rng));
        let (xs, ys) = (random_list(&mut rng, 8), random_list(&mut rng, 8));
        let (n, m) = (rng.gen_range(0..MODULUS), rng.gen_range(0..MODULUS));
        let h = invoke_in::<ClosureModel>(c, &xs, n, d, &ys, m);
        let l = invoke_in::<StreamModel>(c, &xs, n, d, &ys, m);
        let a = invoke_in::<MachineModel>(c, &xs, n, d, &ys, m);
        let oracle = interleave_oracle(c, &xs, n, d, &ys, m);
        ensure(h == Ok(oracle) && l == h && a == h, || {
            format!("{xs:?} vs {ys:?}: H {h:?}, L {l:?}, A {a:?}, oracle {oracle}")
        })?;
    }
    Ok(format!("{CROSS_MODEL_CASES} fold-built pairs agree in H, L, A and with the interleaving oracle"))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 11] = [
        ("coroutine trace", criterion_1),
        ("three-way interleave", criterion_2),
        ("axiom suite", criterion_3),
        ("faithfulness of lift", criterion_4),
        ("fold/build inter-definability", criterion_5),
        ("zip correctness and non-strictness", criterion_6),
        ("fusion soundness", criterion_7),
        ("deforestation", criterion_8),
        ("golden derivations", criterion_9),
        ("divergence handling", criterion_10),
        ("cross-model agreement", criterion_11),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
