//! Membership of two-element operations in the five maximal Boolean clones.

use std::fmt;

use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::table::FunctionTable;

/// One of the five maximal clones on `{0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PostClass {
    PreservesZero,
    PreservesOne,
    Monotone,
    SelfDual,
    Affine,
}

impl PostClass {
    pub const ALL: [PostClass; 5] = [
        PostClass::PreservesZero,
        PostClass::PreservesOne,
        PostClass::Monotone,
        PostClass::SelfDual,
        PostClass::Affine,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            PostClass::PreservesZero => "P0",
            PostClass::PreservesOne => "P1",
            PostClass::Monotone => "M",
            PostClass::SelfDual => "D",
            PostClass::Affine => "A",
        }
    }

    /// Whether the Boolean table `f` lies in this class.
    ///
    /// A nullary constant `c` preserves `c` only, is monotone and affine, and is
    /// never self-dual.
    pub fn contains(self, f: &FunctionTable) -> bool {
        debug_assert_eq!(f.size(), 2);
        let m = f.arity();
        let len = f.len();
        let all_ones = len - 1;
        match self {
            PostClass::PreservesZero => f.at(0) == 0,
            PostClass::PreservesOne => f.at(all_ones) == 1,
            PostClass::Monotone => (0..len).all(|a| {
                // raising one coordinate at a time suffices
                (0..m).all(|bit| a >> bit & 1 == 1 || f.at(a) <= f.at(a | 1 << bit))
            }),
            PostClass::SelfDual => m > 0 && (0..len).all(|a| f.at(a ^ all_ones) != f.at(a)),
            PostClass::Affine => (0..len).all(|a| {
                (0..len).all(|b| (0..len).all(|c| f.at(a) ^ f.at(b) ^ f.at(c) == f.at(a ^ b ^ c)))
            }),
        }
    }
}

impl fmt::Display for PostClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// The maximal clones containing every basic operation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PostClasses(pub Vec<PostClass>);

impl PostClasses {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, c: PostClass) -> bool {
        self.0.contains(&c)
    }
}

impl fmt::Display for PostClasses {
    /// Symbols joined by `|`, or `-` when there are none.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("-");
        }
        let parts: Vec<&str> = self.0.iter().map(|c| c.symbol()).collect();
        f.write_str(&parts.join("|"))
    }
}

/// The five-class test for a two-element algebra.
pub fn post_classes(algebra: &FiniteAlgebra) -> Result<PostClasses> {
    if algebra.size() != 2 {
        return Err(Error::Domain(format!(
            "the five-class test needs a two-element algebra, {} has {}",
            algebra.name(),
            algebra.size()
        )));
    }
    Ok(PostClasses(
        PostClass::ALL
            .into_iter()
            .filter(|c| algebra.ops().iter().all(|op| c.contains(&op.table)))
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin;

    fn table(entries: &[u8]) -> FunctionTable {
        let k = entries.len().trailing_zeros() as usize;
        FunctionTable::new(2, k, entries.to_vec()).unwrap()
    }

    #[test]
    fn single_functions() {
        let and = table(&[0, 0, 0, 1]);
        let xor = table(&[0, 1, 1, 0]);
        let neg = table(&[1, 0]);
        let maj = table(&[0, 0, 0, 1, 0, 1, 1, 1]);
        assert!(PostClass::Monotone.contains(&and));
        assert!(!PostClass::Affine.contains(&and));
        assert!(PostClass::Affine.contains(&xor));
        assert!(!PostClass::Monotone.contains(&xor));
        assert!(PostClass::SelfDual.contains(&neg));
        assert!(PostClass::SelfDual.contains(&maj));
        assert!(!PostClass::PreservesZero.contains(&neg));
    }

    #[test]
    fn nand_escapes_all() {
        assert!(post_classes(&builtin("nand").unwrap()).unwrap().is_empty());
        assert!(post_classes(&builtin("boolean2").unwrap()).unwrap().is_empty());
        let lat = post_classes(&builtin("bool_lattice").unwrap()).unwrap();
        assert_eq!(lat.to_string(), "P0|P1|M");
        assert!(post_classes(&builtin("zp:3").unwrap()).is_err());
    }

    #[test]
    fn affine_matches_degree_one() {
        // affine ternary functions are exactly c ^ (a.x) for 16 choices
        let count = (0..256u32)
            .filter(|bits| {
                let e: Vec<u8> = (0..8).map(|i| (bits >> (7 - i) & 1) as u8).collect();
                PostClass::Affine.contains(&table(&e))
            })
            .count();
        assert_eq!(count, 16);
    }
}
