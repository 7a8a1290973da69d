//! Coroutining folds, `build`, and the list combinators written against
//! them. Every function is generic in the hyperfunction model.

use std::fmt;
use std::rc::Rc;

use crate::lazy::{Deferred, LazyFn, Result, StepBudget};
use crate::model::{Model, Step, Val};

/// A cons-function `a -> b -> c` whose second argument is deferred, so
/// that nil-like behaviour (ignoring the rest) is expressible.
pub struct ConsFn<A, B, C>(Rc<dyn Fn(A, Deferred<B>) -> Result<C>>);

impl<A, B, C> Clone for ConsFn<A, B, C> {
    fn clone(&self) -> Self {
        ConsFn(Rc::clone(&self.0))
    }
}

impl<A: Val, B: Val, C: Val> ConsFn<A, B, C> {
    pub fn new(f: impl Fn(A, Deferred<B>) -> Result<C> + 'static) -> Self {
        ConsFn(Rc::new(f))
    }

    /// Forces the rest before applying `f`.
    pub fn strict(f: impl Fn(A, B) -> C + 'static) -> Self {
        ConsFn::new(move |x, rest: Deferred<B>| Ok(f(x, rest.force()?)))
    }

    pub fn apply(&self, x: A, rest: Deferred<B>) -> Result<C> {
        (self.0)(x, rest)
    }

    /// `c x`, as an element function.
    pub fn partial(&self, x: A) -> LazyFn<B, C> {
        let c = self.clone();
        LazyFn::new(move |rest| c.apply(x.clone(), rest))
    }

    /// `c . f`
    pub fn before<Z: Val>(&self, f: impl Fn(Z) -> A + 'static) -> ConsFn<Z, B, C> {
        let c = self.clone();
        ConsFn::new(move |z, rest| c.apply(f(z), rest))
    }
}

/// `fold (x:xs) c n = c x << fold xs c n`, `fold [] c n = base n`.
pub fn fold<M: Model, A: Val, B: Val, C: Val>(
    xs: &[A],
    c: &ConsFn<A, B, C>,
    n: C,
) -> M::Hyper<B, C> {
    xs.iter()
        .rev()
        .fold(M::base(n), |rest, x| M::push(c.partial(x.clone()), rest))
}

/// `foldr c n xs = run (fold xs c n)`
pub fn foldr_via_hyper<M: Model, A: Val, B: Val>(
    c: &ConsFn<A, B, B>,
    n: B,
    xs: &[A],
    budget: &StepBudget,
) -> Result<B> {
    M::run(&fold::<M, _, _, _>(xs, c, n), budget)
}

/// An immutable singly linked list with O(1) clone; the representation
/// `build` materializes at.
pub struct ConsList<T>(Option<Rc<(T, ConsList<T>)>>);

impl<T> Clone for ConsList<T> {
    fn clone(&self) -> Self {
        ConsList(self.0.clone())
    }
}

impl<T: Clone> ConsList<T> {
    pub fn nil() -> Self {
        ConsList(None)
    }

    pub fn cons(head: T, tail: ConsList<T>) -> Self {
        ConsList(Some(Rc::new((head, tail))))
    }

    pub fn to_vec(&self) -> Vec<T> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Some(cell) = &cur.0 {
            out.push(cell.0.clone());
            cur = &cell.1;
        }
        out
    }
}

impl<T: Clone + fmt::Debug> fmt::Debug for ConsList<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_vec()).finish()
    }
}

/// An abstracted list producer: given any cons and nil it yields a
/// hyperfunction. Implementors only reach the hyperfunction through the
/// model's constructors, which is what makes `fold . build = id` usable.
pub trait Generator<T: Val> {
    fn produce<M: Model, R1: Val, R2: Val>(&self, cons: &ConsFn<T, R1, R2>, nil: R2) -> M::Hyper<R1, R2>;
}

/// `build g = run (g (:) [])`
pub fn build<M: Model, T: Val, G: Generator<T>>(g: &G, budget: &StepBudget) -> Result<Vec<T>> {
    let cons = ConsFn::strict(|x: T, rest: ConsList<T>| ConsList::cons(x, rest));
    let list = M::run(&g.produce::<M, _, _>(&cons, ConsList::nil()), budget)?;
    Ok(list.to_vec())
}

/// `\c n -> fold xs c n`: a concrete list as its own generator.
#[derive(Clone, Debug)]
pub struct ListGen<T>(pub Vec<T>);

impl<T: Val> Generator<T> for ListGen<T> {
    fn produce<M: Model, R1: Val, R2: Val>(&self, cons: &ConsFn<T, R1, R2>, nil: R2) -> M::Hyper<R1, R2> {
        fold::<M, _, _, _>(&self.0, cons, nil)
    }
}

/// `n, n-1, .., 1`; empty for `n <= 0`.
#[derive(Clone, Copy, Debug)]
pub struct DownGen(pub i64);

impl Generator<i64> for DownGen {
    fn produce<M: Model, R1: Val, R2: Val>(&self, cons: &ConsFn<i64, R1, R2>, nil: R2) -> M::Hyper<R1, R2> {
        let cons = cons.clone();
        M::unfold(
            self.0,
            Rc::new(move |&z: &i64| {
                Ok(if z <= 0 {
                    Step::Done(nil.clone())
                } else {
                    Step::Emit(cons.partial(z), z - 1)
                })
            }),
        )
    }
}

/// `i, i+1, .., j`; empty for `i > j`.
#[derive(Clone, Copy, Debug)]
pub struct UptoGen(pub i64, pub i64);

impl Generator<i64> for UptoGen {
    fn produce<M: Model, R1: Val, R2: Val>(&self, cons: &ConsFn<i64, R1, R2>, nil: R2) -> M::Hyper<R1, R2> {
        let cons = cons.clone();
        M::unfold(
            (self.0, self.1),
            Rc::new(move |&(i, j): &(i64, i64)| {
                Ok(if i > j {
                    Step::Done(nil.clone())
                } else {
                    Step::Emit(cons.partial(i), (i + 1, j))
                })
            }),
        )
    }
}

/// `\c n -> fold xs (c . f) n` with `xs` itself abstracted, i.e. the
/// already-fused form of `map f (build g)`.
pub struct MapGen<A, B, G> {
    f: Rc<dyn Fn(A) -> B>,
    source: G,
}

impl<A: Val, B: Val, G: Generator<A>> MapGen<A, B, G> {
    pub fn new(f: impl Fn(A) -> B + 'static, source: G) -> Self {
        MapGen { f: Rc::new(f), source }
    }
}

impl<A: Val, B: Val, G: Generator<A>> Generator<B> for MapGen<A, B, G> {
    fn produce<M: Model, R1: Val, R2: Val>(&self, cons: &ConsFn<B, R1, R2>, nil: R2) -> M::Hyper<R1, R2> {
        let f = Rc::clone(&self.f);
        self.source.produce::<M, _, _>(&cons.before(move |a| f(a)), nil)
    }
}

/// The handshake passed from the right branch of a zip to the left:
/// `Nothing` or `Just (y, rest)`.
pub enum ZipProtocol<B, R> {
    Absent,
    Present(B, Deferred<R>),
}

impl<B: Clone, R> Clone for ZipProtocol<B, R> {
    fn clone(&self) -> Self {
        match self {
            ZipProtocol::Absent => ZipProtocol::Absent,
            ZipProtocol::Present(y, rest) => ZipProtocol::Present(y.clone(), rest.clone()),
        }
    }
}

/// `zipW' f xs ys c n = fold xs first n # fold ys second Nothing`
pub struct ZipWithGen<A, B, C, GA, GB> {
    f: Rc<dyn Fn(A, B) -> C>,
    left: GA,
    right: GB,
}

impl<A: Val, B: Val, C: Val, GA: Generator<A>, GB: Generator<B>> ZipWithGen<A, B, C, GA, GB> {
    pub fn new(f: impl Fn(A, B) -> C + 'static, left: GA, right: GB) -> Self {
        ZipWithGen {
            f: Rc::new(f),
            left,
            right,
        }
    }
}

impl<A: Val, B: Val, C: Val, GA: Generator<A>, GB: Generator<B>> Generator<C>
    for ZipWithGen<A, B, C, GA, GB>
{
    fn produce<M: Model, R1: Val, R2: Val>(&self, cons: &ConsFn<C, R1, R2>, nil: R2) -> M::Hyper<R1, R2> {
        let (f, c) = (Rc::clone(&self.f), cons.clone());
        let first_nil = nil.clone();
        // strict in the protocol value: it decides whether an element exists
        let first = ConsFn::new(move |x: A, m: Deferred<ZipProtocol<B, R1>>| match m.force()? {
            ZipProtocol::Absent => Ok(first_nil.clone()),
            ZipProtocol::Present(y, rest) => c.apply(f(x, y), rest),
        });
        // never forces `y` or the rest
        let second = ConsFn::new(|y: B, rest: Deferred<R1>| Ok(ZipProtocol::Present(y, rest)));
        M::compose(
            &self.left.produce::<M, _, _>(&first, nil),
            &self.right.produce::<M, _, _>(&second, ZipProtocol::Absent),
        )
    }
}

pub fn down<M: Model>(n: i64, budget: &StepBudget) -> Result<Vec<i64>> {
    build::<M, _, _>(&DownGen(n), budget)
}

pub fn upto<M: Model>(i: i64, j: i64, budget: &StepBudget) -> Result<Vec<i64>> {
    build::<M, _, _>(&UptoGen(i, j), budget)
}

/// `map f xs = build (\c n -> fold xs (c . f) n)`
pub fn map_c<M: Model, A: Val, B: Val>(
    f: impl Fn(A) -> B + 'static,
    xs: &[A],
    budget: &StepBudget,
) -> Result<Vec<B>> {
    build::<M, _, _>(&MapGen::new(f, ListGen(xs.to_vec())), budget)
}

/// `sum xs = run (fold xs (+) 0)`
pub fn sum_c<M: Model>(xs: &[i64], budget: &StepBudget) -> Result<i64> {
    foldr_via_hyper::<M, _, _>(&ConsFn::strict(|x: i64, r: i64| x + r), 0, xs, budget)
}

pub fn zipw_h<M: Model, A: Val, B: Val, C: Val>(
    f: impl Fn(A, B) -> C + 'static,
    xs: &[A],
    ys: &[B],
    budget: &StepBudget,
) -> Result<Vec<C>> {
    build::<M, _, _>(
        &ZipWithGen::new(f, ListGen(xs.to_vec()), ListGen(ys.to_vec())),
        budget,
    )
}

/// `zip xs ys = run (fold xs first [] # fold ys second Nothing)`
pub fn zip_h<M: Model, A: Val, B: Val>(xs: &[A], ys: &[B], budget: &StepBudget) -> Result<Vec<(A, B)>> {
    zipw_h::<M, _, _, _>(|x, y| (x, y), xs, ys, budget)
}

/// `reverse xs = (foldr (\x k p -> k (x : p)) id xs) []`, run as a
/// higher-order hyperfunction fold.
pub fn reverse_c<M: Model, A: Val>(xs: &[A], budget: &StepBudget) -> Result<Vec<A>> {
    type K<A> = LazyFn<ConsList<A>, ConsList<A>>;
    let step = ConsFn::new(|x: A, k: Deferred<K<A>>| {
        Ok(LazyFn::new(move |p: Deferred<ConsList<A>>| {
            let x = x.clone();
            k.force()?
                .apply(Deferred::new(move || Ok(ConsList::cons(x, p.force()?))))
        }))
    });
    let f: K<A> = foldr_via_hyper::<M, _, _>(&step, LazyFn::identity(), xs, budget)?;
    Ok(f.call(ConsList::nil())?.to_vec())
}

/// `foldl g z xs = (foldr (\x k w -> k (g w x)) id xs) z`
pub fn foldl_c<M: Model, A: Val, B: Val>(
    g: impl Fn(A, B) -> A + 'static,
    z: A,
    xs: &[B],
    budget: &StepBudget,
) -> Result<A> {
    let g = Rc::new(g);
    let step = ConsFn::new(move |x: B, k: Deferred<LazyFn<A, A>>| {
        let g = Rc::clone(&g);
        Ok(LazyFn::new(move |w: Deferred<A>| {
            let (g, x) = (Rc::clone(&g), x.clone());
            k.force()?.apply(Deferred::new(move || Ok(g(w.force()?, x))))
        }))
    });
    foldr_via_hyper::<M, _, _>(&step, LazyFn::identity(), xs, budget)?.call(z)
}
