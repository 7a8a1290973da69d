//! The list-pipeline language fed to the fusion engine.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

/// Symbolic unary functions on integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ScalarFn {
    Sqr,
    Inc,
    Id,
    Const(i64),
    /// `f . g`: `g` first, then `f`.
    Compose(Box<ScalarFn>, Box<ScalarFn>),
    /// `g k`, i.e. `\x -> g k x`.
    Partial(ScalarFn2, i64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ScalarFn2 {
    Add,
    Mul,
}

impl ScalarFn {
    /// `f . g`, kept right-nested so that printing and parsing agree.
    pub fn compose(f: ScalarFn, g: ScalarFn) -> ScalarFn {
        match f {
            ScalarFn::Compose(a, b) => ScalarFn::compose(*a, ScalarFn::compose(*b, g)),
            f => ScalarFn::Compose(Box::new(f), Box::new(g)),
        }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        match self {
            ScalarFn::Sqr => x * x,
            ScalarFn::Inc => x + 1,
            ScalarFn::Id => x.clone(),
            ScalarFn::Const(k) => BigInt::from(*k),
            ScalarFn::Compose(f, g) => f.eval(&g.eval(x)),
            ScalarFn::Partial(g, k) => g.eval(&BigInt::from(*k), x),
        }
    }

    pub fn is_id(&self) -> bool {
        matches!(self, ScalarFn::Id)
    }

    /// Haskell-style rendering used in derivations: `sqr`, `const 3`, `sqr . inc`.
    pub fn haskell(&self) -> String {
        match self {
            ScalarFn::Sqr => "sqr".into(),
            ScalarFn::Inc => "inc".into(),
            ScalarFn::Id => "id".into(),
            ScalarFn::Const(k) => format!("const {}", atom_int(*k)),
            ScalarFn::Compose(f, g) => format!("{} . {}", f.haskell_atom(), g.haskell_atom()),
            ScalarFn::Partial(g, k) => format!("({} {})", atom_int(*k), g.symbol()),
        }
    }

    pub fn haskell_atom(&self) -> String {
        match self {
            ScalarFn::Const(_) | ScalarFn::Compose(..) => format!("({})", self.haskell()),
            _ => self.haskell(),
        }
    }
}

impl ScalarFn2 {
    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        match self {
            ScalarFn2::Add => x + y,
            ScalarFn2::Mul => x * y,
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            ScalarFn2::Add => "+",
            ScalarFn2::Mul => "*",
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ScalarFn2::Add => "add",
            ScalarFn2::Mul => "mul",
        }
    }
}

pub(crate) fn atom_int(k: i64) -> String {
    if k < 0 {
        format!("({k})")
    } else {
        k.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PipelineExpr {
    Lit(Vec<i64>),
    Down(i64),
    Upto(i64, i64),
    Map(ScalarFn, Box<PipelineExpr>),
    Reverse(Box<PipelineExpr>),
    Foldl(ScalarFn2, i64, Box<PipelineExpr>),
    Sum(Box<PipelineExpr>),
    Zip(Box<PipelineExpr>, Box<PipelineExpr>),
    ZipW(ScalarFn2, Box<PipelineExpr>, Box<PipelineExpr>),
}

/// Element type of a list-valued pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElemType {
    Int,
    Pair(Box<ElemType>, Box<ElemType>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PipelineType {
    Scalar,
    List(ElemType),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("{0} may only appear at the root of a pipeline")]
    ScalarNotAtRoot(&'static str),
    #[error("{0} needs a list of integers, got a list of pairs")]
    NeedsIntegers(&'static str),
}

impl PipelineExpr {
    pub fn sum(e: PipelineExpr) -> Self {
        PipelineExpr::Sum(Box::new(e))
    }
    pub fn map(f: ScalarFn, e: PipelineExpr) -> Self {
        PipelineExpr::Map(f, Box::new(e))
    }
    pub fn reverse(e: PipelineExpr) -> Self {
        PipelineExpr::Reverse(Box::new(e))
    }
    pub fn foldl(g: ScalarFn2, z: i64, e: PipelineExpr) -> Self {
        PipelineExpr::Foldl(g, z, Box::new(e))
    }
    pub fn zip(a: PipelineExpr, b: PipelineExpr) -> Self {
        PipelineExpr::Zip(Box::new(a), Box::new(b))
    }
    pub fn zip_w(g: ScalarFn2, a: PipelineExpr, b: PipelineExpr) -> Self {
        PipelineExpr::ZipW(g, Box::new(a), Box::new(b))
    }

    pub fn type_check(&self) -> Result<PipelineType, TypeError> {
        match self {
            PipelineExpr::Sum(e) => {
                e.int_list("sum")?;
                Ok(PipelineType::Scalar)
            }
            PipelineExpr::Foldl(_, _, e) => {
                e.int_list("foldl")?;
                Ok(PipelineType::Scalar)
            }
            e => e.list_type().map(PipelineType::List),
        }
    }

    fn int_list(&self, ctx: &'static str) -> Result<(), TypeError> {
        match self.list_type()? {
            ElemType::Int => Ok(()),
            ElemType::Pair(..) => Err(TypeError::NeedsIntegers(ctx)),
        }
    }

    fn list_type(&self) -> Result<ElemType, TypeError> {
        use PipelineExpr::*;
        match self {
            Lit(_) | Down(_) | Upto(..) => Ok(ElemType::Int),
            Map(_, e) => e.int_list("map").map(|_| ElemType::Int),
            ZipW(_, a, b) => {
                a.int_list("zipW")?;
                b.int_list("zipW")?;
                Ok(ElemType::Int)
            }
            Reverse(e) => e.list_type(),
            Zip(a, b) => Ok(ElemType::Pair(Box::new(a.list_type()?), Box::new(b.list_type()?))),
            Sum(_) => Err(TypeError::ScalarNotAtRoot("sum")),
            Foldl(..) => Err(TypeError::ScalarNotAtRoot("foldl")),
        }
    }

    pub fn contains_zip(&self) -> bool {
        use PipelineExpr::*;
        match self {
            Zip(..) | ZipW(..) => true,
            Lit(_) | Down(_) | Upto(..) => false,
            Map(_, e) | Reverse(e) | Foldl(_, _, e) | Sum(e) => e.contains_zip(),
        }
    }

    /// Built only from `down`, `upto`, `map`, `zipW` under a `sum`: the
    /// fragment whose fused form must allocate no list cells.
    pub fn is_generator_backed(&self) -> bool {
        fn branch(e: &PipelineExpr) -> bool {
            use PipelineExpr::*;
            match e {
                Down(_) | Upto(..) => true,
                Map(_, e) => branch(e),
                ZipW(_, a, b) => branch(a) && branch(b),
                _ => false,
            }
        }
        matches!(self, PipelineExpr::Sum(e) if branch(e))
    }

    pub fn depth(&self) -> usize {
        use PipelineExpr::*;
        match self {
            Lit(_) | Down(_) | Upto(..) => 1,
            Map(_, e) | Reverse(e) | Foldl(_, _, e) | Sum(e) => 1 + e.depth(),
            Zip(a, b) | ZipW(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Haskell-style rendering: `sum (zipW (*) (upto 2 10) (down 6))`.
    pub fn haskell(&self) -> String {
        use PipelineExpr::*;
        let arg = |e: &PipelineExpr| match e {
            Lit(_) => e.haskell(),
            _ => format!("({})", e.haskell()),
        };
        match self {
            Lit(xs) => show_list(xs),
            Down(n) => format!("down {}", atom_int(*n)),
            Upto(a, b) => format!("upto {} {}", atom_int(*a), atom_int(*b)),
            Map(f, e) => format!("map {} {}", f.haskell_atom(), arg(e)),
            Reverse(e) => format!("reverse {}", arg(e)),
            Foldl(g, z, e) => format!("foldl ({}) {} {}", g.symbol(), atom_int(*z), arg(e)),
            Sum(e) => format!("sum {}", arg(e)),
            Zip(a, b) => format!("zip {} {}", arg(a), arg(b)),
            ZipW(g, a, b) => format!("zipW ({}) {} {}", g.symbol(), arg(a), arg(b)),
        }
    }
}

pub(crate) fn show_list(xs: &[i64]) -> String {
    let items: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(","))
}

impl fmt::Display for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarFn::Sqr => f.write_str("sqr"),
            ScalarFn::Inc => f.write_str("inc"),
            ScalarFn::Id => f.write_str("id"),
            ScalarFn::Const(k) => write!(f, "const {k}"),
            ScalarFn::Compose(a, b) => write!(f, "{a}.{b}"),
            ScalarFn::Partial(g, k) => write!(f, "{} {k}", g.name()),
        }
    }
}

impl fmt::Display for ScalarFn2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The concrete DSL syntax accepted by the parser.
impl fmt::Display for PipelineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use PipelineExpr::*;
        match self {
            Lit(xs) => {
                let items: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                write!(f, "[{}]", items.join(", "))
            }
            Down(n) => write!(f, "down({n})"),
            Upto(a, b) => write!(f, "upto({a}, {b})"),
            Map(g, e) => write!(f, "map({g}, {e})"),
            Reverse(e) => write!(f, "reverse({e})"),
            Foldl(g, z, e) => write!(f, "foldl({g}, {z}, {e})"),
            Sum(e) => write!(f, "sum({e})"),
            Zip(a, b) => write!(f, "zip({a}, {b})"),
            ZipW(g, a, b) => write!(f, "zipW({g}, {a}, {b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use PipelineExpr::*;

    #[test]
    fn typing() {
        let ok = PipelineExpr::sum(PipelineExpr::zip_w(ScalarFn2::Mul, Upto(2, 10), Down(6)));
        assert_eq!(ok.type_check(), Ok(PipelineType::Scalar));
        let nested = PipelineExpr::map(ScalarFn::Sqr, PipelineExpr::sum(Down(3)));
        assert_eq!(nested.type_check(), Err(TypeError::ScalarNotAtRoot("sum")));
        let pairs = PipelineExpr::sum(PipelineExpr::zip(Down(1), Down(2)));
        assert_eq!(pairs.type_check(), Err(TypeError::NeedsIntegers("sum")));
        let list = PipelineExpr::reverse(PipelineExpr::zip(Down(1), Down(2)));
        assert!(matches!(list.type_check(), Ok(PipelineType::List(ElemType::Pair(..)))));
    }

    #[test]
    fn compose_evaluates_right_first() {
        let f = ScalarFn::compose(ScalarFn::Sqr, ScalarFn::Inc);
        assert_eq!(f.eval(&BigInt::from(3)), BigInt::from(16));
        let nested = ScalarFn::compose(f, ScalarFn::Const(2));
        assert_eq!(nested.eval(&BigInt::from(100)), BigInt::from(9));
        assert!(matches!(nested, ScalarFn::Compose(ref a, _) if **a == ScalarFn::Sqr));
    }

    #[test]
    fn haskell_rendering() {
        let e = PipelineExpr::sum(PipelineExpr::zip_w(ScalarFn2::Mul, Upto(2, 10), Down(6)));
        assert_eq!(e.haskell(), "sum (zipW (*) (upto 2 10) (down 6))");
        assert_eq!(e.to_string(), "sum(zipW(mul, upto(2, 10), down(6)))");
    }
}
