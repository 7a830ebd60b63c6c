use std::fmt;

use serde::{Deserialize, Serialize};

use crate::codec;
use crate::error::{Error, Result};

/// Largest universe supported; elements are stored as `u8`.
pub const MAX_SIZE: usize = 256;

/// A `k`-ary function on `{0, ..., n-1}` stored as its `n^k` values in
/// tuple-index order.
///
/// Ordering is lexicographic on `(size, arity, entries)`, so tables of one
/// shape sort lexicographically by entries.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FunctionTable {
    size: usize,
    arity: usize,
    entries: Vec<u8>,
}

impl FunctionTable {
    pub fn new(size: usize, arity: usize, entries: Vec<u8>) -> Result<Self> {
        if size == 0 || size > MAX_SIZE {
            return Err(Error::Domain(format!("universe size {size} not in 1..={MAX_SIZE}")));
        }
        let expected = codec::points(size, arity)?;
        if entries.len() != expected {
            return Err(Error::Shape(format!(
                "table of arity {arity} over {size} elements needs {expected} entries, got {}",
                entries.len()
            )));
        }
        if let Some((i, &v)) = entries.iter().enumerate().find(|(_, &v)| v as usize >= size) {
            return Err(Error::Domain(format!("entry out of range: entry {i} is {v}, size is {size}")));
        }
        Ok(FunctionTable { size, arity, entries })
    }

    /// Caller guarantees the invariants.
    pub(crate) fn from_raw(size: usize, arity: usize, entries: Vec<u8>) -> Self {
        debug_assert_eq!(entries.len(), codec::checked_points(size, arity).unwrap());
        FunctionTable { size, arity, entries }
    }

    /// Tabulates `f` over `A^arity`.
    pub fn from_fn(size: usize, arity: usize, mut f: impl FnMut(&[usize]) -> usize) -> Result<Self> {
        let total = codec::points(size, arity)?;
        let mut entries = Vec::with_capacity(total);
        let mut tuple = vec![0usize; arity];
        for _ in 0..total {
            let v = f(&tuple);
            if v >= size {
                return Err(Error::Domain(format!("entry out of range: {v} with size {size}")));
            }
            entries.push(v as u8);
            codec::increment(&mut tuple, size);
        }
        Ok(FunctionTable { size, arity, entries })
    }

    /// The `i`-th `arity`-ary projection.
    pub fn projection(size: usize, arity: usize, i: usize) -> Result<Self> {
        if i >= arity {
            return Err(Error::Domain(format!("projection {i} of arity {arity}")));
        }
        Self::from_fn(size, arity, |t| t[i])
    }

    pub fn constant(size: usize, arity: usize, value: usize) -> Result<Self> {
        Self::from_fn(size, arity, |_| value)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    #[inline]
    pub fn at(&self, index: usize) -> usize {
        self.entries[index] as usize
    }

    pub fn get(&self, tuple: &[usize]) -> Result<usize> {
        if tuple.len() != self.arity {
            return Err(Error::Shape(format!(
                "expected {} arguments, got {}",
                self.arity,
                tuple.len()
            )));
        }
        Ok(self.at(codec::tuple_index(tuple, self.size)?))
    }

    /// `f(x, ..., x) = x` for every `x`.
    pub fn is_idempotent(&self) -> bool {
        (0..self.size).all(|x| self.at(diagonal_index(x, self.arity, self.size)) == x)
    }

    /// Pointwise composition `self(args[0], ..., args[m-1])`.
    pub fn compose(&self, args: &[&FunctionTable]) -> Result<FunctionTable> {
        if args.len() != self.arity {
            return Err(Error::Shape(format!(
                "composition needs {} arguments, got {}",
                self.arity,
                args.len()
            )));
        }
        let Some(first) = args.first() else {
            return Err(Error::Shape("cannot compose a nullary table; use constant()".into()));
        };
        let (size, arity) = (first.size, first.arity);
        if size != self.size || args.iter().any(|g| g.size != size || g.arity != arity) {
            return Err(Error::Shape("composition arguments disagree in shape".into()));
        }
        let entries = (0..first.len())
            .map(|p| {
                let idx = args.iter().fold(0usize, |acc, g| acc * size + g.at(p));
                self.entries[idx]
            })
            .collect();
        Ok(FunctionTable::from_raw(size, arity, entries))
    }
}

/// Index of the diagonal tuple `(x, ..., x)`.
pub(crate) fn diagonal_index(x: usize, arity: usize, size: usize) -> usize {
    (0..arity).fold(0, |acc, _| acc * size + x)
}

impl fmt::Debug for FunctionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FunctionTable(n={}, k={}, {})", self.size, self.arity, self)
    }
}

/// Entries as digits, e.g. `0001`; comma separated when `n > 10`.
impl fmt::Display for FunctionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.size <= 10 {
            for e in &self.entries {
                write!(f, "{e}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}
