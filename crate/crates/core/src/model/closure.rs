use std::rc::Rc;

use super::{Model, Step, StepFn, Val};
use crate::lazy::{deep, Deferred, LazyFn, Result, StepBudget};

/// A hyperfunction as a function from its dual: `invoke :: H b a -> b`.
pub struct ClosureHyper<A, B>(Rc<dyn Fn(&ClosureHyper<B, A>, &StepBudget) -> Result<B>>);

impl<A, B> Clone for ClosureHyper<A, B> {
    fn clone(&self) -> Self {
        ClosureHyper(Rc::clone(&self.0))
    }
}

impl<A: Val, B: Val> ClosureHyper<A, B> {
    pub fn from_fn(f: impl Fn(&ClosureHyper<B, A>, &StepBudget) -> Result<B> + 'static) -> Self {
        ClosureHyper(Rc::new(f))
    }

    /// Hands control to `self` with continuation `k`; one hand-off.
    pub fn invoke(&self, k: &ClosureHyper<B, A>, budget: &StepBudget) -> Result<B> {
        budget.tick()?;
        deep(|| (self.0)(k, budget))
    }
}

/// The function-space model: `invoke` is primitive, `run f = invoke f self`.
pub struct ClosureModel;

/// `f` applied to the deferred result of handing `rest` to `k`.
fn hand_off<A: Val, B: Val>(
    f: &LazyFn<A, B>,
    k: &ClosureHyper<B, A>,
    rest: ClosureHyper<A, B>,
    budget: &StepBudget,
) -> Result<B> {
    let k = k.clone();
    let budget = budget.clone();
    f.apply(Deferred::new(move || k.invoke(&rest, &budget)))
}

impl Model for ClosureModel {
    const NAME: &'static str = "h";

    type Hyper<A: Val, B: Val> = ClosureHyper<A, B>;

    fn compose<A: Val, B: Val, C: Val>(
        f: &ClosureHyper<B, C>,
        g: &ClosureHyper<A, B>,
    ) -> ClosureHyper<A, C> {
        let (f, g) = (f.clone(), g.clone());
        ClosureHyper::from_fn(move |k: &ClosureHyper<C, A>, budget| {
            f.invoke(&Self::compose(&g, k), budget)
        })
    }

    fn push<A: Val, B: Val>(f: LazyFn<A, B>, q: ClosureHyper<A, B>) -> ClosureHyper<A, B> {
        ClosureHyper::from_fn(move |k, budget| hand_off(&f, k, q.clone(), budget))
    }

    fn lift<A: Val, B: Val>(f: LazyFn<A, B>) -> ClosureHyper<A, B> {
        ClosureHyper::from_fn(move |k, budget| hand_off(&f, k, Self::lift(f.clone()), budget))
    }

    fn base<A: Val, B: Val>(value: B) -> ClosureHyper<A, B> {
        ClosureHyper::from_fn(move |_, _| Ok(value.clone()))
    }

    fn run<A: Val>(h: &ClosureHyper<A, A>, budget: &StepBudget) -> Result<A> {
        h.invoke(&Self::identity(), budget)
    }

    fn invoke<A: Val, B: Val>(
        f: &ClosureHyper<A, B>,
        k: &ClosureHyper<B, A>,
        budget: &StepBudget,
    ) -> Result<B> {
        f.invoke(k, budget)
    }

    fn unfold<A: Val, B: Val, S: Val>(seed: S, step: StepFn<A, B, S>) -> ClosureHyper<A, B> {
        ClosureHyper::from_fn(move |k, budget| match step(&seed)? {
            Step::Done(v) => Ok(v),
            Step::Emit(f, next) => hand_off(&f, k, Self::unfold(next, step.clone()), budget),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lazy::HyperError;

    type H = ClosureModel;

    #[test]
    fn base_never_evaluates_continuation() {
        let k: ClosureHyper<i64, i64> =
            ClosureHyper::from_fn(|_, _| Err(HyperError::Raised("sentinel".into())));
        let b = StepBudget::new(10);
        assert_eq!(H::invoke(&H::base::<i64, i64>(7), &k, &b), Ok(7));
    }

    #[test]
    fn push_then_base() {
        let b = StepBudget::default();
        let h = H::compose(
            &H::push(LazyFn::strict(|x: i64| x + 1), H::base(3)),
            &H::base(10),
        );
        assert_eq!(H::run(&h, &b), Ok(11));
    }

    #[test]
    fn run_lift_successor_exhausts() {
        let b = StepBudget::new(1000);
        let r = H::run(&H::lift(LazyFn::strict(|x: i64| x + 1)), &b);
        assert!(matches!(r, Err(HyperError::FuelExhausted { budget: 1000 })));
    }
}
