//! The abstract hyperfunction interface and its three models.
//!
//! * [`ClosureModel`]: `H a b = H b a -> b` as a recursive closure wrapper.
//! * [`StreamModel`]: infinite streams of element functions.
//! * [`MachineModel`]: hidden-state step machines (anamorphisms).
//!
//! All three satisfy the same laws; callers pick one through the type
//! parameter `M: Model`.

mod closure;
mod machine;
mod stream;

pub use closure::{ClosureHyper, ClosureModel};
pub use machine::{down_machine, upto_machine, MachineHyper, MachineModel};
pub use stream::{StreamHyper, StreamModel};

use std::rc::Rc;

use crate::lazy::{LazyFn, Result, StepBudget};

/// Values that may flow through hyperfunctions.
pub trait Val: Clone + 'static {}
impl<T: Clone + 'static> Val for T {}

/// One step of an anamorphism: stop with a result, or emit the next
/// element function together with the successor state.
pub enum Step<A, B, S> {
    Done(B),
    Emit(LazyFn<A, B>, S),
}

pub type StepFn<A, B, S> = Rc<dyn Fn(&S) -> Result<Step<A, B, S>>>;

pub trait Model: 'static {
    const NAME: &'static str;

    type Hyper<A: Val, B: Val>: Clone + 'static;

    /// `f # g`: when invoked with `k`, behaves as `f` invoked with `g # k`.
    fn compose<A: Val, B: Val, C: Val>(
        f: &Self::Hyper<B, C>,
        g: &Self::Hyper<A, B>,
    ) -> Self::Hyper<A, C>;

    /// `f << q`
    fn push<A: Val, B: Val>(f: LazyFn<A, B>, q: Self::Hyper<A, B>) -> Self::Hyper<A, B>;

    /// `lift f = f << lift f`
    fn lift<A: Val, B: Val>(f: LazyFn<A, B>) -> Self::Hyper<A, B>;

    fn base<A: Val, B: Val>(value: B) -> Self::Hyper<A, B> {
        Self::lift(LazyFn::constant(value))
    }

    fn run<A: Val>(h: &Self::Hyper<A, A>, budget: &StepBudget) -> Result<A>;

    fn invoke<A: Val, B: Val>(
        f: &Self::Hyper<A, B>,
        k: &Self::Hyper<B, A>,
        budget: &StepBudget,
    ) -> Result<B> {
        Self::run(&Self::compose(f, k), budget)
    }

    /// Corecursive construction from a seed. Equivalent to the chain of
    /// `<<` ending in `base` that the step function describes, built lazily.
    fn unfold<A: Val, B: Val, S: Val>(seed: S, step: StepFn<A, B, S>) -> Self::Hyper<A, B>;

    /// `self = lift id`
    fn identity<A: Val>() -> Self::Hyper<A, A> {
        Self::lift(LazyFn::identity())
    }

    /// `project q x = invoke q (base x)`
    fn project<A: Val, B: Val>(q: &Self::Hyper<A, B>, x: A, budget: &StepBudget) -> Result<B> {
        Self::invoke(q, &Self::base(x), budget)
    }

    /// `mapH r s f = lift s # f # lift r`
    fn map_hyper<A: Val, A2: Val, B: Val, B2: Val>(
        r: LazyFn<A2, A>,
        s: LazyFn<B, B2>,
        h: &Self::Hyper<A, B>,
    ) -> Self::Hyper<A2, B2> {
        Self::compose(&Self::lift(s), &Self::compose(h, &Self::lift(r)))
    }
}
