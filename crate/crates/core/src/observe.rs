//! Observational equality of hyperfunctions.
//!
//! Hyperfunctions are compared only by what they return when invoked
//! against finite probes: chains of `<<` ending in `base`, which always
//! terminate on the probe side.

use crate::lazy::{HyperError, LazyFn, Result, StepBudget};
use crate::model::Model;

/// Builds the probe `f1 << f2 << ... << base end`.
pub fn probe_chain<M: Model>(fns: &[LazyFn<i64, i64>], end: i64) -> M::Hyper<i64, i64> {
    fns.iter()
        .rev()
        .fold(M::base(end), |q, f| M::push(f.clone(), q))
}

/// Fuel exhaustion is one observable outcome among others: two sides
/// agree on a probe when both return the same value or both run out.
fn same_outcome(a: &Result<i64>, b: &Result<i64>) -> bool {
    match (a, b) {
        (Ok(x), Ok(y)) => x == y,
        (Err(e1), Err(e2)) if e1.is_fuel() && e2.is_fuel() => true,
        (Err(HyperError::Raised(m1)), Err(HyperError::Raised(m2))) => m1 == m2,
        _ => false,
    }
}

/// Each probe gets a fresh budget of `fuel` hand-offs per side.
pub fn observationally_equal<M: Model>(
    x: &M::Hyper<i64, i64>,
    y: &M::Hyper<i64, i64>,
    probes: &[M::Hyper<i64, i64>],
    fuel: u64,
) -> bool {
    first_difference::<M>(x, y, probes, fuel).is_none()
}

/// Index of the first distinguishing probe and both outcomes.
pub fn first_difference<M: Model>(
    x: &M::Hyper<i64, i64>,
    y: &M::Hyper<i64, i64>,
    probes: &[M::Hyper<i64, i64>],
    fuel: u64,
) -> Option<(usize, Result<i64>, Result<i64>)> {
    probes.iter().enumerate().find_map(|(i, k)| {
        let a = M::invoke(x, k, &StepBudget::new(fuel));
        let b = M::invoke(y, k, &StepBudget::new(fuel));
        (!same_outcome(&a, &b)).then_some((i, a, b))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ClosureModel, MachineModel, StreamModel};

    fn probes<M: Model>() -> Vec<M::Hyper<i64, i64>> {
        let inc = LazyFn::strict(|x: i64| x + 1);
        let dbl = LazyFn::strict(|x: i64| 2 * x);
        let k = LazyFn::constant(4);
        vec![
            probe_chain::<M>(&[], 0),
            probe_chain::<M>(std::slice::from_ref(&inc), 3),
            probe_chain::<M>(&[dbl.clone(), inc.clone()], 5),
            probe_chain::<M>(&[k, dbl, inc], 1),
        ]
    }

    fn axiom6<M: Model>() {
        let inc = LazyFn::strict(|x: i64| x + 1);
        let lhs = M::lift(inc.clone());
        let rhs = M::push(inc.clone(), M::lift(inc));
        assert!(observationally_equal::<M>(&lhs, &rhs, &probes::<M>(), 10_000));
        assert!(!observationally_equal::<M>(
            &M::base(1),
            &M::base(2),
            &probes::<M>(),
            10_000
        ));
    }

    #[test]
    fn lift_unrolls_in_every_model() {
        axiom6::<ClosureModel>();
        axiom6::<StreamModel>();
        axiom6::<MachineModel>();
    }
}
