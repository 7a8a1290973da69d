//! Shared generators for the integration tests: integer functions with a
//! known meaning, finite hyperfunctions and probes, and random pipelines.
#![allow(dead_code)]

use hyperfuse::folds::{fold, ConsFn};
use hyperfuse::fusion::expr::{PipelineExpr, ScalarFn, ScalarFn2};
use hyperfuse::lazy::LazyFn;
use hyperfuse::model::Model;
use rand::seq::SliceRandom;
use rand::Rng;

pub const MODULUS: i64 = 1009;

/// A total integer function that can be both applied directly (the
/// oracle) and wrapped as an element function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntFn {
    Affine(i64, i64),
    Const(i64),
    Square,
}

impl IntFn {
    pub fn random(rng: &mut impl Rng) -> IntFn {
        match rng.gen_range(0..4) {
            0 => IntFn::Const(rng.gen_range(0..MODULUS)),
            1 => IntFn::Square,
            _ => IntFn::Affine(rng.gen_range(1..MODULUS), rng.gen_range(0..MODULUS)),
        }
    }

    pub fn apply(self, x: i64) -> i64 {
        match self {
            IntFn::Affine(a, b) => (a * x + b).rem_euclid(MODULUS),
            IntFn::Const(k) => k,
            IntFn::Square => (x * x).rem_euclid(MODULUS),
        }
    }

    pub fn lazy(self) -> LazyFn<i64, i64> {
        match self {
            IntFn::Const(k) => LazyFn::constant(k),
            f => LazyFn::strict(move |x| f.apply(x)),
        }
    }

    pub fn then(self, g: IntFn) -> LazyFn<i64, i64> {
        LazyFn::strict(move |x| g.apply(self.apply(x)))
    }
}

/// A finite or self-similar hyperfunction over `i64`, described as data
/// so it can be instantiated in every model.
#[derive(Clone, Debug)]
pub enum HyperSpec {
    /// `f1 << f2 << .. << base end`
    Chain(Vec<IntFn>, i64),
    Lift(IntFn),
}

impl HyperSpec {
    pub fn random(rng: &mut impl Rng) -> HyperSpec {
        if rng.gen_bool(0.2) {
            HyperSpec::Lift(IntFn::random(rng))
        } else {
            let len = rng.gen_range(0..5);
            HyperSpec::Chain((0..len).map(|_| IntFn::random(rng)).collect(), rng.gen_range(0..MODULUS))
        }
    }

    pub fn random_chain(rng: &mut impl Rng) -> HyperSpec {
        let len = rng.gen_range(0..5);
        HyperSpec::Chain((0..len).map(|_| IntFn::random(rng)).collect(), rng.gen_range(0..MODULUS))
    }

    pub fn build<M: Model>(&self) -> M::Hyper<i64, i64> {
        match self {
            HyperSpec::Chain(fs, end) => fs
                .iter()
                .rev()
                .fold(M::base(*end), |q, f| M::push(f.lazy(), q)),
            HyperSpec::Lift(f) => M::lift(f.lazy()),
        }
    }
}

/// Random finite probes.
pub fn random_probes<M: Model>(rng: &mut impl Rng, count: usize) -> Vec<M::Hyper<i64, i64>> {
    (0..count).map(|_| HyperSpec::random_chain(rng).build::<M>()).collect()
}

/// Every probe with at most `max_nodes` pushes over the functions
/// `inc`, `double`, `const 3`, ending in `base 0` or `base 1`.
pub fn exhaustive_probe_specs(max_nodes: usize) -> Vec<HyperSpec> {
    let alphabet = [IntFn::Affine(1, 1), IntFn::Affine(2, 0), IntFn::Const(3)];
    let mut chains: Vec<Vec<IntFn>> = vec![vec![]];
    let mut frontier: Vec<Vec<IntFn>> = vec![vec![]];
    for _ in 0..max_nodes {
        frontier = frontier
            .iter()
            .flat_map(|c| {
                alphabet.iter().map(move |f| {
                    let mut next = c.clone();
                    next.push(*f);
                    next
                })
            })
            .collect();
        chains.extend(frontier.iter().cloned());
    }
    chains
        .into_iter()
        .flat_map(|c| [0, 1].map(|end| HyperSpec::Chain(c.clone(), end)))
        .collect()
}

/// `c x r = (a*x + b*r) mod m`, a strict cons-function with an oracle.
#[derive(Clone, Copy, Debug)]
pub struct Cons2(pub i64, pub i64);

impl Cons2 {
    pub fn random(rng: &mut impl Rng) -> Cons2 {
        Cons2(rng.gen_range(0..MODULUS), rng.gen_range(0..MODULUS))
    }

    pub fn apply(self, x: i64, r: i64) -> i64 {
        (self.0 * x + self.1 * r).rem_euclid(MODULUS)
    }

    pub fn cons(self) -> ConsFn<i64, i64, i64> {
        ConsFn::strict(move |x, r| self.apply(x, r))
    }

    pub fn foldr(self, n: i64, xs: &[i64]) -> i64 {
        xs.iter().rev().fold(n, |r, &x| self.apply(x, r))
    }

    pub fn hyper<M: Model>(self, xs: &[i64], n: i64) -> M::Hyper<i64, i64> {
        fold::<M, _, _, _>(xs, &self.cons(), n)
    }
}

pub fn random_list(rng: &mut impl Rng, max_len: usize) -> Vec<i64> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| rng.gen_range(-50..50)).collect()
}

/// The naive meaning of interleaving two folds: the first list's cons
/// consumes an element, then hands over to the other side.
pub fn interleave_oracle(c: Cons2, xs: &[i64], n: i64, d: Cons2, ys: &[i64], m: i64) -> i64 {
    match xs.split_first() {
        None => n,
        Some((&x, rest)) => c.apply(x, interleave_oracle(d, ys, m, c, rest, n)),
    }
}

// ---------------------------------------------------------------------------
// pipelines

fn seed(rng: &mut impl Rng) -> i64 {
    rng.gen_range(-5..=20)
}

pub fn random_fn(rng: &mut impl Rng, depth: usize) -> ScalarFn {
    match rng.gen_range(0..if depth > 0 { 6 } else { 5 }) {
        0 => ScalarFn::Sqr,
        1 => ScalarFn::Inc,
        2 => ScalarFn::Id,
        3 => ScalarFn::Const(seed(rng)),
        4 => ScalarFn::Partial(*[ScalarFn2::Add, ScalarFn2::Mul].choose(rng).unwrap(), seed(rng)),
        _ => ScalarFn::compose(random_fn(rng, depth - 1), random_fn(rng, depth - 1)),
    }
}

pub fn random_fn2(rng: &mut impl Rng) -> ScalarFn2 {
    *[ScalarFn2::Add, ScalarFn2::Mul].choose(rng).unwrap()
}

/// A list of integers with at most `depth` levels.
pub fn random_int_list(rng: &mut impl Rng, depth: usize) -> PipelineExpr {
    let leaf = depth <= 1 || rng.gen_bool(0.25);
    if leaf {
        return match rng.gen_range(0..3) {
            0 => PipelineExpr::Down(seed(rng)),
            1 => PipelineExpr::Upto(seed(rng), seed(rng)),
            _ => {
                let len = rng.gen_range(0..6);
                PipelineExpr::Lit((0..len).map(|_| seed(rng)).collect())
            }
        };
    }
    match rng.gen_range(0..4) {
        0 => PipelineExpr::map(random_fn(rng, 1), random_int_list(rng, depth - 1)),
        1 => PipelineExpr::reverse(random_int_list(rng, depth - 1)),
        _ => PipelineExpr::zip_w(random_fn2(rng), random_int_list(rng, depth - 1), random_int_list(rng, depth - 1)),
    }
}

/// A well-typed pipeline of depth at most `depth` (at least 2).
pub fn random_pipeline(rng: &mut impl Rng, depth: usize) -> PipelineExpr {
    match rng.gen_range(0..8) {
        0..=3 => PipelineExpr::sum(random_int_list(rng, depth - 1)),
        4 => PipelineExpr::foldl(random_fn2(rng), seed(rng), random_int_list(rng, depth - 1)),
        5 => PipelineExpr::zip(random_int_list(rng, depth - 1), random_int_list(rng, depth - 1)),
        6 => PipelineExpr::reverse(PipelineExpr::zip(random_int_list(rng, depth - 2), random_int_list(rng, depth - 2))),
        _ => random_int_list(rng, depth),
    }
}

/// Pipelines made only of generators, `map` and `zipW` under a `sum`.
pub fn random_generator_backed(rng: &mut impl Rng, depth: usize) -> PipelineExpr {
    fn list(rng: &mut impl Rng, depth: usize) -> PipelineExpr {
        if depth <= 1 || rng.gen_bool(0.3) {
            return if rng.gen_bool(0.5) {
                PipelineExpr::Down(seed(rng))
            } else {
                PipelineExpr::Upto(seed(rng), seed(rng))
            };
        }
        if rng.gen_bool(0.5) {
            PipelineExpr::map(random_fn(rng, 1), list(rng, depth - 1))
        } else {
            PipelineExpr::zip_w(random_fn2(rng), list(rng, depth - 1), list(rng, depth - 1))
        }
    }
    PipelineExpr::sum(list(rng, depth - 1))
}
