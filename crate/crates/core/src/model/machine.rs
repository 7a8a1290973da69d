use std::rc::Rc;

use super::{Model, Step, StepFn, Val};
use crate::lazy::{Deferred, LazyFn, Result, StepBudget};

trait Cursor<A, B> {
    fn step(&self) -> Result<Step<A, B, MachineHyper<A, B>>>;
}

struct Hidden<A, B, U> {
    step: StepFn<A, B, U>,
    state: U,
}

impl<A: Val, B: Val, U: Val> Cursor<A, B> for Hidden<A, B, U> {
    fn step(&self) -> Result<Step<A, B, MachineHyper<A, B>>> {
        Ok(match (self.step)(&self.state)? {
            Step::Done(b) => Step::Done(b),
            Step::Emit(f, next) => Step::Emit(f, MachineHyper::hide_rc(Rc::clone(&self.step), next)),
        })
    }
}

/// `Hide step seed`: a step machine whose state type is erased at
/// construction. Observers only ever see the next step, packaged with a
/// machine for the remainder.
pub struct MachineHyper<A, B>(Rc<dyn Cursor<A, B>>);

impl<A, B> Clone for MachineHyper<A, B> {
    fn clone(&self) -> Self {
        MachineHyper(Rc::clone(&self.0))
    }
}

impl<A: Val, B: Val> MachineHyper<A, B> {
    pub fn hide<U: Val>(step: impl Fn(&U) -> Result<Step<A, B, U>> + 'static, seed: U) -> Self {
        Self::hide_rc(Rc::new(step), seed)
    }

    fn hide_rc<U: Val>(step: StepFn<A, B, U>, seed: U) -> Self {
        MachineHyper(Rc::new(Hidden { step, state: seed }))
    }

    pub fn step(&self) -> Result<Step<A, B, MachineHyper<A, B>>> {
        self.0.step()
    }
}

/// The anamorphism model. Composition pairs the hidden states.
pub struct MachineModel;

impl Model for MachineModel {
    const NAME: &'static str = "a";

    type Hyper<A: Val, B: Val> = MachineHyper<A, B>;

    fn compose<A: Val, B: Val, C: Val>(
        f: &MachineHyper<B, C>,
        g: &MachineHyper<A, B>,
    ) -> MachineHyper<A, C> {
        type Pair<A, B, C> = (MachineHyper<B, C>, MachineHyper<A, B>);
        MachineHyper::hide(
            |(left, right): &Pair<A, B, C>| {
                Ok(match left.step()? {
                    Step::Done(n) => Step::Done(n),
                    Step::Emit(f, y) => match right.step()? {
                        Step::Done(m) => Step::Done(f.call(m)?),
                        Step::Emit(f2, y2) => Step::Emit(f.after(&f2), (y, y2)),
                    },
                })
            },
            (f.clone(), g.clone()),
        )
    }

    fn push<A: Val, B: Val>(p: LazyFn<A, B>, m: MachineHyper<A, B>) -> MachineHyper<A, B> {
        MachineHyper::hide(
            move |state: &Option<MachineHyper<A, B>>| {
                Ok(match state {
                    None => Step::Emit(p.clone(), Some(m.clone())),
                    Some(w) => match w.step()? {
                        Step::Done(n) => Step::Done(n),
                        Step::Emit(h, y) => Step::Emit(h, Some(y)),
                    },
                })
            },
            None,
        )
    }

    /// Emits `f` forever from a unit state; the state is never inspected.
    fn lift<A: Val, B: Val>(f: LazyFn<A, B>) -> MachineHyper<A, B> {
        MachineHyper::hide(move |_: &()| Ok(Step::Emit(f.clone(), ())), ())
    }

    fn run<A: Val>(h: &MachineHyper<A, A>, budget: &StepBudget) -> Result<A> {
        budget.tick()?;
        match h.step()? {
            Step::Done(n) => Ok(n),
            Step::Emit(f, rest) => {
                let b = budget.clone();
                f.apply(Deferred::new(move || Self::run(&rest, &b)))
            }
        }
    }

    fn unfold<A: Val, B: Val, S: Val>(seed: S, step: StepFn<A, B, S>) -> MachineHyper<A, B> {
        MachineHyper::hide_rc(step, seed)
    }
}

/// `down' w c n`: counts down from `w`, emitting `c z` while `z > 0`.
pub fn down_machine<A: Val, B: Val>(
    w: i64,
    cons: Rc<dyn Fn(i64) -> LazyFn<A, B>>,
    nil: B,
) -> MachineHyper<A, B> {
    MachineHyper::hide(
        move |z: &i64| {
            Ok(if *z <= 0 {
                Step::Done(nil.clone())
            } else {
                Step::Emit(cons(*z), z - 1)
            })
        },
        w,
    )
}

/// `upto' a b c n`: counts up from `a` to `b` inclusive.
pub fn upto_machine<A: Val, B: Val>(
    a: i64,
    b: i64,
    cons: Rc<dyn Fn(i64) -> LazyFn<A, B>>,
    nil: B,
) -> MachineHyper<A, B> {
    MachineHyper::hide(
        move |&(i, j): &(i64, i64)| {
            Ok(if i > j {
                Step::Done(nil.clone())
            } else {
                Step::Emit(cons(i), (i + 1, j))
            })
        },
        (a, b),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lazy::HyperError;

    type A = MachineModel;

    #[test]
    fn base_machine_runs_in_one_step() {
        let b = StepBudget::new(10);
        assert_eq!(A::run(&A::base::<i64, i64>(7), &b), Ok(7));
        assert_eq!(b.used(), 1);
    }

    #[test]
    fn lift_of_successor_exhausts() {
        let b = StepBudget::new(100);
        let r = A::run(&A::lift(LazyFn::strict(|x: i64| x + 1)), &b);
        assert!(matches!(r, Err(HyperError::FuelExhausted { .. })));
    }

    #[test]
    fn composed_lifts_emit_composition() {
        let h = A::compose(
            &A::lift(LazyFn::strict(|x: i64| x + 1)),
            &A::lift(LazyFn::strict(|x: i64| x * x)),
        );
        let mut m = h;
        for _ in 0..3 {
            match m.step().unwrap() {
                Step::Emit(f, rest) => {
                    assert_eq!(f.call(3), Ok(10));
                    m = rest;
                }
                Step::Done(_) => panic!("lift never stops"),
            }
        }
    }

    #[test]
    fn push_emits_then_simulates() {
        let m = A::push(LazyFn::strict(|x: i64| x + 1), A::base(3));
        let b = StepBudget::default();
        assert_eq!(A::run(&A::compose(&m, &A::base(10)), &b), Ok(11));
    }

    #[test]
    fn down_sums_via_run() {
        let plus: Rc<dyn Fn(i64) -> LazyFn<i64, i64>> =
            Rc::new(|x| LazyFn::strict(move |r: i64| x * x + r));
        let b = StepBudget::default();
        assert_eq!(A::run(&down_machine(3, plus, 0), &b), Ok(14));
    }
}
