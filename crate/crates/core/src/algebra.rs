//! Finite algebras and the `.alg` text format.
//!
//! ```text
//! # two-element Boolean algebra
//! algebra boolean2
//! size 2
//! op zero 0
//! 0
//! op meet 2
//! 0 0 0 1
//! ```
//!
//! Each `op <name> <arity>` line is followed by `n^arity` integers in tuple-index
//! order, separated by any whitespace; `#` starts a comment.

use std::fmt::Write as _;

use serde::Serialize;

use crate::codec;
use crate::error::{Error, Result};
use crate::table::{FunctionTable, MAX_SIZE};

/// A basic operation: a name plus its table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Operation {
    pub name: String,
    pub table: FunctionTable,
}

impl Operation {
    pub fn arity(&self) -> usize {
        self.table.arity()
    }
}

/// Ordered list of `(name, arity)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Signature(pub Vec<(String, usize)>);

impl Signature {
    pub fn arity_of(&self, name: &str) -> Option<usize> {
        self.0.iter().find(|(n, _)| n == name).map(|(_, a)| *a)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.0.iter().map(|(n, a)| (n.as_str(), *a))
    }

    /// Same symbols with the same arities, in any order.
    pub fn same_symbols(&self, other: &Signature) -> bool {
        self.0.len() == other.0.len() && self.iter().all(|(n, a)| other.arity_of(n) == Some(a))
    }
}

/// A finite algebra on `{0, ..., size-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteAlgebra {
    name: String,
    size: usize,
    ops: Vec<Operation>,
}

impl FiniteAlgebra {
    pub fn new(name: impl Into<String>, size: usize, ops: Vec<Operation>) -> Result<Self> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(Error::Domain(format!("invalid algebra name {name:?}")));
        }
        if size == 0 || size > MAX_SIZE {
            return Err(Error::Domain(format!("size {size} not in 1..={MAX_SIZE}")));
        }
        for (i, op) in ops.iter().enumerate() {
            if !is_identifier(&op.name) {
                return Err(Error::Domain(format!("invalid operation name {:?}", op.name)));
            }
            if op.table.size() != size {
                return Err(Error::Shape(format!(
                    "operation {} is over {} elements, algebra has {size}",
                    op.name,
                    op.table.size()
                )));
            }
            if ops[..i].iter().any(|o| o.name == op.name) {
                return Err(Error::Domain(format!("duplicate operation name {}", op.name)));
            }
        }
        Ok(FiniteAlgebra { name, size, ops })
    }

    /// Builds an algebra from `(name, arity, entries)` triples.
    pub fn from_tables<S: Into<String>>(
        name: impl Into<String>,
        size: usize,
        tables: impl IntoIterator<Item = (S, usize, Vec<u8>)>,
    ) -> Result<Self> {
        let ops = tables
            .into_iter()
            .map(|(n, arity, entries)| {
                Ok(Operation {
                    name: n.into(),
                    table: FunctionTable::new(size, arity, entries)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(name, size, ops)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn op(&self, name: &str) -> Option<&Operation> {
        self.ops.iter().find(|o| o.name == name)
    }

    pub fn op_index(&self, name: &str) -> Option<usize> {
        self.ops.iter().position(|o| o.name == name)
    }

    pub fn signature(&self) -> Signature {
        Signature(self.ops.iter().map(|o| (o.name.clone(), o.arity())).collect())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if !is_identifier(&name) {
            return Err(Error::Domain(format!("invalid algebra name {name:?}")));
        }
        self.name = name;
        Ok(self)
    }

    /// The same algebra with one more operation.
    pub fn with_op(&self, name: impl Into<String>, table: FunctionTable) -> Result<Self> {
        let mut ops = self.ops.clone();
        ops.push(Operation { name: name.into(), table });
        Self::new(self.name.clone(), self.size, ops)
    }

    /// Keeps only the named operations (a reduct).
    pub fn reduct(&self, keep: &[&str]) -> Result<Self> {
        for k in keep {
            if self.op(k).is_none() {
                return Err(Error::Signature(format!("no operation {k} in {}", self.name)));
            }
        }
        let ops = self.ops.iter().filter(|o| keep.contains(&o.name.as_str())).cloned().collect();
        Self::new(format!("{}_reduct", self.name), self.size, ops)
    }

    /// Whether `self` has exactly one element.
    pub fn is_trivial(&self) -> bool {
        self.size == 1
    }

    /// Text in `.alg` format; [`parse_algebra`] reads it back unchanged.
    pub fn to_alg(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "algebra {}", self.name);
        let _ = writeln!(out, "size {}", self.size);
        for op in &self.ops {
            let _ = writeln!(out, "op {} {}", op.name, op.arity());
            let row = if op.arity() == 0 { 1 } else { self.size };
            for chunk in op.table.entries().chunks(row) {
                let line: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "{}", line.join(" "));
            }
        }
        out
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '.' || c == '^')
}

/// Whitespace tokens with their 1-based line numbers, comments removed.
pub(crate) fn tokens(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .flat_map(|(i, line)| {
            let line = line.split('#').next().unwrap_or("");
            line.split_whitespace().map(move |t| (i + 1, t))
        })
        .collect()
}

/// Parses an algebra in `.alg` format.
pub fn parse_algebra(text: &str) -> Result<FiniteAlgebra> {
    let toks = tokens(text);
    let mut pos = 0;
    let last_line = toks.last().map(|t| t.0).unwrap_or(1);
    let next = |pos: &mut usize, what: &str| -> Result<(usize, &str)> {
        let t = toks
            .get(*pos)
            .copied()
            .ok_or_else(|| Error::parse(last_line, format!("unexpected end of input, expected {what}")))?;
        *pos += 1;
        Ok(t)
    };

    let (line, kw) = next(&mut pos, "`algebra`")?;
    if kw != "algebra" {
        return Err(Error::parse(line, format!("expected `algebra`, found {kw:?}")));
    }
    let (line, name) = next(&mut pos, "algebra name")?;
    if !is_identifier(name) {
        return Err(Error::parse(line, format!("invalid algebra name {name:?}")));
    }
    let (line, kw) = next(&mut pos, "`size`")?;
    if kw != "size" {
        return Err(Error::parse(line, format!("expected `size`, found {kw:?}")));
    }
    let (line, size_tok) = next(&mut pos, "universe size")?;
    let size: usize = size_tok
        .parse()
        .map_err(|_| Error::parse(line, format!("invalid size {size_tok:?}")))?;
    if size == 0 || size > MAX_SIZE {
        return Err(Error::parse(line, format!("size {size} not in 1..={MAX_SIZE}")));
    }

    let mut ops: Vec<Operation> = Vec::new();
    while pos < toks.len() {
        let (line, kw) = next(&mut pos, "`op`")?;
        if kw != "op" {
            return Err(Error::parse(line, format!("expected `op`, found {kw:?}")));
        }
        let (line, op_name) = next(&mut pos, "operation name")?;
        if !is_identifier(op_name) {
            return Err(Error::parse(line, format!("invalid operation name {op_name:?}")));
        }
        if ops.iter().any(|o| o.name == op_name) {
            return Err(Error::parse(line, format!("duplicate op name {op_name}")));
        }
        let (line, arity_tok) = next(&mut pos, "arity")?;
        let arity: usize = arity_tok
            .parse()
            .map_err(|_| Error::parse(line, format!("invalid arity {arity_tok:?}")))?;
        let count = codec::checked_points(size, arity)
            .filter(|&c| c <= 1 << 24)
            .ok_or_else(|| Error::parse(line, format!("table for arity {arity} is too large")))?;
        let mut entries = Vec::with_capacity(count);
        for i in 0..count {
            let (eline, tok) = toks.get(pos).copied().ok_or_else(|| {
                Error::parse(
                    last_line,
                    format!("table length mismatch: op {op_name} expects {count} entries, got {i}"),
                )
            })?;
            let v: usize = match tok.parse() {
                Ok(v) => v,
                Err(_) => {
                    return Err(Error::parse(
                        eline,
                        format!("table length mismatch: op {op_name} expects {count} entries, got {i} before {tok:?}"),
                    ))
                }
            };
            if v >= size {
                return Err(Error::parse(
                    eline,
                    format!("entry out of range: {v} in op {op_name} with size {size}"),
                ));
            }
            entries.push(v as u8);
            pos += 1;
        }
        ops.push(Operation {
            name: op_name.to_string(),
            table: FunctionTable::from_raw(size, arity, entries),
        });
    }
    FiniteAlgebra::new(name, size, ops)
}
