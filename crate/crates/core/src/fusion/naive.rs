//! Direct list semantics with every intermediate list materialized: the
//! reference the fused forms are checked against.

use num_bigint::BigInt;

use super::expr::PipelineExpr;
use super::value::{AllocCounter, Output};
use crate::lazy::{HyperError, Result};

pub fn evaluate_naive(e: &PipelineExpr, counter: &AllocCounter) -> Result<Output> {
    match e {
        PipelineExpr::Sum(inner) => {
            let xs = list(inner, counter)?;
            let mut total = BigInt::from(0);
            for x in &xs {
                total += int(x)?;
            }
            Ok(Output::Int(total))
        }
        PipelineExpr::Foldl(g, z, inner) => {
            let xs = list(inner, counter)?;
            let mut acc = BigInt::from(*z);
            for x in &xs {
                acc = g.eval(&acc, int(x)?);
            }
            Ok(Output::Int(acc))
        }
        other => list(other, counter).map(Output::List),
    }
}

fn int(v: &Output) -> Result<&BigInt> {
    match v {
        Output::Int(n) => Ok(n),
        _ => Err(HyperError::TypeMismatch("expected an integer element".into())),
    }
}

fn produced(xs: Vec<Output>, counter: &AllocCounter) -> Vec<Output> {
    counter.list_cells(xs.len() as u64);
    xs
}

fn list(e: &PipelineExpr, counter: &AllocCounter) -> Result<Vec<Output>> {
    use PipelineExpr::*;
    Ok(match e {
        // inputs, not intermediates
        Lit(xs) => xs.iter().map(|&x| Output::int(x)).collect(),
        Down(n) => produced((1..=*n).rev().map(Output::int).collect(), counter),
        Upto(a, b) => produced((*a..=*b).map(Output::int).collect(), counter),
        Map(f, inner) => {
            let xs = list(inner, counter)?;
            let ys = xs
                .iter()
                .map(|x| int(x).map(|n| Output::Int(f.eval(n))))
                .collect::<Result<_>>()?;
            produced(ys, counter)
        }
        Reverse(inner) => {
            let mut xs = list(inner, counter)?;
            xs.reverse();
            produced(xs, counter)
        }
        Zip(a, b) => {
            let (xs, ys) = (list(a, counter)?, list(b, counter)?);
            let zs = xs
                .into_iter()
                .zip(ys)
                .map(|(x, y)| Output::Tuple(vec![x, y]))
                .collect();
            produced(zs, counter)
        }
        ZipW(g, a, b) => {
            let (xs, ys) = (list(a, counter)?, list(b, counter)?);
            let zs = xs
                .iter()
                .zip(&ys)
                .map(|(x, y)| Ok(Output::Int(g.eval(int(x)?, int(y)?))))
                .collect::<Result<_>>()?;
            produced(zs, counter)
        }
        Sum(_) | Foldl(..) => {
            return Err(HyperError::TypeMismatch(
                "scalar-valued combinator used as a list".into(),
            ))
        }
    })
}
