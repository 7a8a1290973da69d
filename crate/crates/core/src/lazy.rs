//! Explicit call-by-need for a strict host.
//!
//! Every element function stored inside a hyperfunction receives its
//! argument as a [`Deferred`] so that it may ignore it. `base` and the
//! `second` half of the zip protocol are only correct under that
//! discipline.

use std::cell::{Cell, OnceCell, RefCell};
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

/// Stack headroom kept free before growing onto a fresh segment.
const RED_ZONE: usize = 128 * 1024;
/// Size of each additional stack segment.
const STACK_SEGMENT: usize = 4 * 1024 * 1024;

pub type Result<T> = std::result::Result<T, HyperError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HyperError {
    #[error("step budget of {budget} hand-offs exhausted")]
    FuelExhausted { budget: u64 },
    #[error("deferred value demanded itself while being forced")]
    BlackHole,
    #[error("raised: {0}")]
    Raised(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
}

impl HyperError {
    pub fn is_fuel(&self) -> bool {
        matches!(self, HyperError::FuelExhausted { .. })
    }
}

/// Runs `f` on a stack that grows on demand. Coroutine hand-offs nest
/// one host frame per hand-off.
pub fn deep<R>(f: impl FnOnce() -> R) -> R {
    stacker::maybe_grow(RED_ZONE, STACK_SEGMENT, f)
}

/// Counts coroutine hand-offs; every evaluator ticks it and stops with
/// [`HyperError::FuelExhausted`] once it reaches zero.
///
/// Clones share the same counter.
#[derive(Clone)]
pub struct StepBudget {
    initial: u64,
    remaining: Rc<Cell<u64>>,
}

impl StepBudget {
    pub const DEFAULT: u64 = 1_000_000;

    pub fn new(hand_offs: u64) -> Self {
        StepBudget {
            initial: hand_offs,
            remaining: Rc::new(Cell::new(hand_offs)),
        }
    }

    pub fn tick(&self) -> Result<()> {
        match self.remaining.get() {
            0 => Err(HyperError::FuelExhausted {
                budget: self.initial,
            }),
            n => {
                self.remaining.set(n - 1);
                Ok(())
            }
        }
    }

    pub fn remaining(&self) -> u64 {
        self.remaining.get()
    }

    pub fn used(&self) -> u64 {
        self.initial - self.remaining.get()
    }
}

impl Default for StepBudget {
    fn default() -> Self {
        StepBudget::new(Self::DEFAULT)
    }
}

impl fmt::Debug for StepBudget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StepBudget({}/{})", self.remaining(), self.initial)
    }
}

type Producer<T> = Box<dyn FnOnce() -> Result<T>>;

struct Cache<T> {
    memo: OnceCell<Result<T>>,
    producer: RefCell<Option<Producer<T>>>,
}

/// A suspended computation, forced at most once and memoized.
///
/// Values are confined to the thread that created them (`Rc`), which is
/// what makes the unsynchronized memo write sound.
pub struct Deferred<T>(Rc<Cache<T>>);

impl<T> Clone for Deferred<T> {
    fn clone(&self) -> Self {
        Deferred(Rc::clone(&self.0))
    }
}

impl<T: Clone + 'static> Deferred<T> {
    pub fn new(producer: impl FnOnce() -> Result<T> + 'static) -> Self {
        Deferred(Rc::new(Cache {
            memo: OnceCell::new(),
            producer: RefCell::new(Some(Box::new(producer))),
        }))
    }

    /// An already evaluated value; forcing it never runs a producer.
    pub fn ready(value: T) -> Self {
        Self::settled(Ok(value))
    }

    /// A payload that raises `err` when (and only when) it is forced.
    pub fn failing(err: HyperError) -> Self {
        Deferred::new(move || Err(err))
    }

    fn settled(result: Result<T>) -> Self {
        let memo = OnceCell::new();
        let _ = memo.set(result);
        Deferred(Rc::new(Cache {
            memo,
            producer: RefCell::new(None),
        }))
    }

    pub fn force(&self) -> Result<T> {
        if let Some(done) = self.0.memo.get() {
            return done.clone();
        }
        let producer = self
            .0
            .producer
            .borrow_mut()
            .take()
            .ok_or(HyperError::BlackHole)?;
        let result = deep(producer);
        // a re-entrant force may have settled it first; keep that value
        let _ = self.0.memo.set(result);
        self.0.memo.get().expect("memo set above").clone()
    }

    pub fn is_forced(&self) -> bool {
        self.0.memo.get().is_some()
    }

    pub fn map<U: Clone + 'static>(&self, f: impl FnOnce(T) -> Result<U> + 'static) -> Deferred<U> {
        let this = self.clone();
        Deferred::new(move || f(this.force()?))
    }
}

impl<T: fmt::Debug> fmt::Debug for Deferred<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.memo.get() {
            Some(Ok(v)) => write!(f, "Deferred({v:?})"),
            Some(Err(e)) => write!(f, "Deferred(<{e}>)"),
            None => f.write_str("Deferred(<unforced>)"),
        }
    }
}

/// An element function `a -> b` whose argument arrives unevaluated.
pub struct LazyFn<A, B>(Rc<dyn Fn(Deferred<A>) -> Result<B>>);

impl<A, B> Clone for LazyFn<A, B> {
    fn clone(&self) -> Self {
        LazyFn(Rc::clone(&self.0))
    }
}

impl<A: Clone + 'static, B: Clone + 'static> LazyFn<A, B> {
    pub fn new(f: impl Fn(Deferred<A>) -> Result<B> + 'static) -> Self {
        LazyFn(Rc::new(f))
    }

    /// Wraps an ordinary function; the argument is forced exactly once per call.
    pub fn strict(f: impl Fn(A) -> B + 'static) -> Self {
        LazyFn::new(move |a: Deferred<A>| Ok(f(a.force()?)))
    }

    pub fn strict_try(f: impl Fn(A) -> Result<B> + 'static) -> Self {
        LazyFn::new(move |a: Deferred<A>| f(a.force()?))
    }

    /// `const k`: never touches its argument.
    pub fn constant(k: B) -> Self {
        LazyFn::new(move |_| Ok(k.clone()))
    }

    pub fn apply(&self, arg: Deferred<A>) -> Result<B> {
        (self.0)(arg)
    }

    pub fn call(&self, arg: A) -> Result<B> {
        self.apply(Deferred::ready(arg))
    }

    /// `self . inner`, preserving laziness: `inner` runs only if `self`
    /// forces its argument.
    pub fn after<Z: Clone + 'static>(&self, inner: &LazyFn<Z, A>) -> LazyFn<Z, B> {
        let outer = self.clone();
        let inner = inner.clone();
        LazyFn::new(move |z: Deferred<Z>| {
            let inner = inner.clone();
            outer.apply(Deferred::new(move || inner.apply(z)))
        })
    }
}

impl<A: Clone + 'static> LazyFn<A, A> {
    pub fn identity() -> Self {
        LazyFn::new(|a: Deferred<A>| a.force())
    }
}

impl<A, B> fmt::Debug for LazyFn<A, B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("LazyFn")
    }
}
