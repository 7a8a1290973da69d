use std::rc::Rc;

use super::{Model, Step, StepFn, Val};
use crate::lazy::{Deferred, HyperError, LazyFn, Result, StepBudget};

struct Node<A, B> {
    head: LazyFn<A, B>,
    tail: Deferred<StreamHyper<A, B>>,
}

/// `f :<<: fs` is an infinite stream of element functions. Heads are
/// strict, tails deferred; infinite tails regenerate on demand.
pub struct StreamHyper<A, B>(Rc<Node<A, B>>);

impl<A, B> Clone for StreamHyper<A, B> {
    fn clone(&self) -> Self {
        StreamHyper(Rc::clone(&self.0))
    }
}

impl<A: Val, B: Val> StreamHyper<A, B> {
    pub fn cons(head: LazyFn<A, B>, tail: Deferred<StreamHyper<A, B>>) -> Self {
        StreamHyper(Rc::new(Node { head, tail }))
    }

    pub fn head(&self) -> &LazyFn<A, B> {
        &self.0.head
    }

    pub fn tail(&self) -> Result<StreamHyper<A, B>> {
        self.0.tail.force()
    }

    /// Whether the tail node has been produced yet.
    pub fn tail_forced(&self) -> bool {
        self.0.tail.is_forced()
    }

    /// The first `n` heads.
    pub fn heads(&self, n: usize) -> Result<Vec<LazyFn<A, B>>> {
        let mut out = Vec::with_capacity(n);
        let mut node = self.clone();
        for _ in 0..n {
            out.push(node.head().clone());
            node = node.tail()?;
        }
        Ok(out)
    }

    fn erroring(err: HyperError) -> Self {
        let e = err.clone();
        StreamHyper::cons(
            LazyFn::new(move |_| Err(e.clone())),
            Deferred::new(move || Ok(StreamHyper::erroring(err))),
        )
    }
}

/// The stream model: `run` is primitive, `invoke fs gs = run (fs # gs)`.
pub struct StreamModel;

impl Model for StreamModel {
    const NAME: &'static str = "l";

    type Hyper<A: Val, B: Val> = StreamHyper<A, B>;

    fn compose<A: Val, B: Val, C: Val>(
        f: &StreamHyper<B, C>,
        g: &StreamHyper<A, B>,
    ) -> StreamHyper<A, C> {
        let (f, g) = (f.clone(), g.clone());
        let head = f.head().after(g.head());
        StreamHyper::cons(
            head,
            Deferred::new(move || Ok(Self::compose(&f.tail()?, &g.tail()?))),
        )
    }

    fn push<A: Val, B: Val>(f: LazyFn<A, B>, q: StreamHyper<A, B>) -> StreamHyper<A, B> {
        StreamHyper::cons(f, Deferred::ready(q))
    }

    fn lift<A: Val, B: Val>(f: LazyFn<A, B>) -> StreamHyper<A, B> {
        let g = f.clone();
        StreamHyper::cons(f, Deferred::new(move || Ok(Self::lift(g))))
    }

    fn run<A: Val>(h: &StreamHyper<A, A>, budget: &StepBudget) -> Result<A> {
        budget.tick()?;
        let node = h.clone();
        let b = budget.clone();
        h.head()
            .apply(Deferred::new(move || Self::run(&node.tail()?, &b)))
    }

    fn unfold<A: Val, B: Val, S: Val>(seed: S, step: StepFn<A, B, S>) -> StreamHyper<A, B> {
        match step(&seed) {
            Ok(Step::Done(v)) => Self::base(v),
            Ok(Step::Emit(f, next)) => StreamHyper::cons(
                f,
                Deferred::new(move || Ok(Self::unfold(next, step))),
            ),
            Err(e) => StreamHyper::erroring(e),
        }
    }
}
