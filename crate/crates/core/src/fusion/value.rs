//! Runtime values of pipeline evaluation and allocation accounting.

use std::cell::Cell;
use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::lazy::{Deferred, HyperError, LazyFn, Result};

/// Dynamically typed values flowing through fused and unfused pipelines.
#[derive(Clone)]
pub enum Value {
    Int(BigInt),
    Tuple(Rc<[Value]>),
    /// `Nothing` of the zip handshake.
    Nothing,
    /// `Just (y, rest)`; the rest stays unevaluated.
    Just(Rc<Value>, Deferred<Value>),
    Nil,
    Cons(Rc<Value>, Deferred<Value>),
    Fun(LazyFn<Value, Value>),
}

impl Value {
    pub fn int(k: impl Into<BigInt>) -> Value {
        Value::Int(k.into())
    }

    pub fn pair(a: Value, b: Value) -> Value {
        Value::Tuple(Rc::from(vec![a, b]))
    }

    pub fn as_int(&self) -> Result<&BigInt> {
        match self {
            Value::Int(n) => Ok(n),
            other => Err(mismatch("integer", other)),
        }
    }

    pub fn as_i64(&self) -> Result<i64> {
        i64::try_from(self.as_int()?)
            .map_err(|_| HyperError::TypeMismatch("state counter out of range".into()))
    }

    pub fn apply(&self, arg: Deferred<Value>) -> Result<Value> {
        match self {
            Value::Fun(f) => f.apply(arg),
            other => Err(mismatch("function", other)),
        }
    }

    /// Forces every list cell and converts to a comparable form.
    pub fn to_output(&self) -> Result<Output> {
        match self {
            Value::Int(n) => Ok(Output::Int(n.clone())),
            Value::Tuple(items) => Ok(Output::Tuple(
                items.iter().map(Value::to_output).collect::<Result<_>>()?,
            )),
            Value::Nil | Value::Cons(..) => {
                let mut out = Vec::new();
                let mut cur = self.clone();
                loop {
                    match cur {
                        Value::Nil => break,
                        Value::Cons(head, tail) => {
                            out.push(head.to_output()?);
                            cur = tail.force()?;
                        }
                        other => return Err(mismatch("list", &other)),
                    }
                }
                Ok(Output::List(out))
            }
            other => Err(mismatch("first-order value", other)),
        }
    }

    /// Forces a list value into its elements.
    pub fn to_elements(&self) -> Result<Vec<Value>> {
        let mut out = Vec::new();
        let mut cur = self.clone();
        loop {
            match cur {
                Value::Nil => return Ok(out),
                Value::Cons(head, tail) => {
                    out.push((*head).clone());
                    cur = tail.force()?;
                }
                other => return Err(mismatch("list", &other)),
            }
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Value::Int(_) => "integer",
            Value::Tuple(_) => "tuple",
            Value::Nothing | Value::Just(..) => "protocol value",
            Value::Nil | Value::Cons(..) => "list",
            Value::Fun(_) => "function",
        }
    }
}

pub(crate) fn mismatch(expected: &str, got: &Value) -> HyperError {
    HyperError::TypeMismatch(format!("expected {expected}, found {}", got.kind()))
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Tuple(items) => f.debug_tuple("").field(&items).finish(),
            Value::Nothing => f.write_str("Nothing"),
            Value::Just(y, _) => write!(f, "Just({y:?}, ..)"),
            Value::Nil => f.write_str("[]"),
            Value::Cons(h, _) => write!(f, "{h:?} : .."),
            Value::Fun(_) => f.write_str("<fun>"),
        }
    }
}

/// A fully evaluated, first-order result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Output {
    #[serde(serialize_with = "ser_bigint")]
    Int(BigInt),
    Tuple(Vec<Output>),
    List(Vec<Output>),
}

fn ser_bigint<S: serde::Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match i64::try_from(n) {
        Ok(k) => s.serialize_i64(k),
        Err(_) => s.serialize_str(&n.to_string()),
    }
}

impl Output {
    pub fn int(k: impl Into<BigInt>) -> Output {
        Output::Int(k.into())
    }

    pub fn ints(xs: &[i64]) -> Output {
        Output::List(xs.iter().map(|&x| Output::int(x)).collect())
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |items: &[Output]| items.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(",");
        match self {
            Output::Int(n) => write!(f, "{n}"),
            Output::Tuple(items) => write!(f, "({})", join(items)),
            Output::List(items) => write!(f, "[{}]", join(items)),
        }
    }
}

#[derive(Default)]
struct Counts {
    list_cells: Cell<u64>,
    protocol_cells: Cell<u64>,
}

/// Per-execution allocation counter. Clones share the same counts.
#[derive(Clone, Default)]
pub struct AllocCounter(Rc<Counts>);

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AllocStats {
    pub list_cells: u64,
    pub protocol_cells: u64,
}

impl AllocCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn list_cells(&self, n: u64) {
        self.0.list_cells.set(self.0.list_cells.get() + n);
    }

    pub fn protocol_cell(&self) {
        self.0.protocol_cells.set(self.0.protocol_cells.get() + 1);
    }

    pub fn stats(&self) -> AllocStats {
        AllocStats {
            list_cells: self.0.list_cells.get(),
            protocol_cells: self.0.protocol_cells.get(),
        }
    }

    pub(crate) fn cons(&self, head: Value, tail: Deferred<Value>) -> Value {
        self.list_cells(1);
        Value::Cons(Rc::new(head), tail)
    }

    pub(crate) fn just(&self, y: Value, rest: Deferred<Value>) -> Value {
        self.protocol_cell();
        Value::Just(Rc::new(y), rest)
    }
}

impl fmt::Debug for AllocCounter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.stats().fmt(f)
    }
}
