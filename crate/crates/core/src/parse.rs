//! Recursive-descent parser for the pipeline language.
//!
//! ```text
//! expr := "sum(" expr ")" | "map(" fn "," expr ")" | "reverse(" expr ")"
//!       | "foldl(" fn2 "," int "," expr ")" | "zip(" expr "," expr ")"
//!       | "zipW(" fn2 "," expr "," expr ")" | "down(" int ")"
//!       | "upto(" int "," int ")" | "[" ints "]"
//! fn   := "sqr" | "inc" | "id" | "const" int | fn2 int | fn "." fn
//! fn2  := "add" | "mul"
//! ```
//!
//! Whitespace is insignificant between tokens.

use thiserror::Error;

use crate::fusion::expr::{PipelineExpr, ScalarFn, ScalarFn2};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

pub fn parse_expr(src: &str) -> Result<PipelineExpr, ParseError> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map_or(0, |i| i + 1);
        ParseError {
            line,
            column: before[line_start..].chars().count() + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(found) if found == c => {
                self.pos += c.len_utf8();
                Ok(())
            }
            Some(found) => Err(self.error(format!("expected '{c}', found '{found}'"))),
            None => Err(self.error(format!("expected '{c}', found end of input"))),
        }
    }

    fn word(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let len = rest.find(|c: char| !c.is_ascii_alphanumeric()).unwrap_or(rest.len());
        if len == 0 || !rest.starts_with(|c: char| c.is_ascii_alphabetic()) {
            return Err(self.error("expected a name"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let sign = usize::from(rest.starts_with('-'));
        let digits = rest[sign..].find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len() - sign);
        if digits == 0 {
            return Err(self.error("expected an integer"));
        }
        let text = &rest[..sign + digits];
        let value = text.parse().map_err(|_| self.error(format!("integer {text} out of range")))?;
        self.pos += text.len();
        Ok(value)
    }

    fn expr(&mut self) -> Result<PipelineExpr, ParseError> {
        if self.peek() == Some('[') {
            return self.literal();
        }
        let start = self.pos;
        let name = self.word()?;
        self.expect('(')?;
        let e = match name {
            "sum" => PipelineExpr::sum(self.expr()?),
            "reverse" => PipelineExpr::reverse(self.expr()?),
            "map" => {
                let f = self.func()?;
                self.expect(',')?;
                PipelineExpr::map(f, self.expr()?)
            }
            "foldl" => {
                let g = self.func2()?;
                self.expect(',')?;
                let z = self.int()?;
                self.expect(',')?;
                PipelineExpr::foldl(g, z, self.expr()?)
            }
            "zip" => {
                let a = self.expr()?;
                self.expect(',')?;
                PipelineExpr::zip(a, self.expr()?)
            }
            "zipW" => {
                let g = self.func2()?;
                self.expect(',')?;
                let a = self.expr()?;
                self.expect(',')?;
                PipelineExpr::zip_w(g, a, self.expr()?)
            }
            "down" => PipelineExpr::Down(self.int()?),
            "upto" => {
                let a = self.int()?;
                self.expect(',')?;
                PipelineExpr::Upto(a, self.int()?)
            }
            other => {
                self.pos = start;
                self.skip_ws();
                return Err(self.error(format!("unknown combinator '{other}'")));
            }
        };
        self.expect(')')?;
        Ok(e)
    }

    fn literal(&mut self) -> Result<PipelineExpr, ParseError> {
        self.expect('[')?;
        let mut xs = Vec::new();
        if self.peek() == Some(']') {
            self.pos += 1;
            return Ok(PipelineExpr::Lit(xs));
        }
        loop {
            xs.push(self.int()?);
            match self.peek() {
                Some(',') => self.pos += 1,
                _ => break,
            }
        }
        self.expect(']')?;
        Ok(PipelineExpr::Lit(xs))
    }

    fn func(&mut self) -> Result<ScalarFn, ParseError> {
        let start = self.pos;
        let f = match self.word()? {
            "sqr" => ScalarFn::Sqr,
            "inc" => ScalarFn::Inc,
            "id" => ScalarFn::Id,
            "const" => ScalarFn::Const(self.int()?),
            "add" => ScalarFn::Partial(ScalarFn2::Add, self.int()?),
            "mul" => ScalarFn::Partial(ScalarFn2::Mul, self.int()?),
            other => {
                self.pos = start;
                self.skip_ws();
                return Err(self.error(format!("unknown function '{other}'")));
            }
        };
        if self.peek() == Some('.') {
            self.pos += 1;
            return Ok(ScalarFn::compose(f, self.func()?));
        }
        Ok(f)
    }

    fn func2(&mut self) -> Result<ScalarFn2, ParseError> {
        let start = self.pos;
        match self.word()? {
            "add" => Ok(ScalarFn2::Add),
            "mul" => Ok(ScalarFn2::Mul),
            other => {
                self.pos = start;
                self.skip_ws();
                Err(self.error(format!("unknown binary function '{other}'")))
            }
        }
    }
}
