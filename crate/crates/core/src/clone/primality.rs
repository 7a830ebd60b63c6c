//! Primality and idemprimality decisions.
//!
//! An algebra of order `n >= 2` is primal exactly when its binary term
//! functions are all `n^(n^2)` binary functions, since every finitary function
//! is a composition of binary ones. For `n = 2` the five-class test decides the
//! same question without any closure.

use num_bigint::BigUint;
use serde::Serialize;

use super::post::{post_classes, PostClasses};
use super::{function_count, generate_clone, CloneSet, DEFAULT_CLONE_BUDGET};
use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::packed::Layout;
use crate::table::FunctionTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PrimalityStatus {
    Primal,
    NotPrimal,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PrimalityMethod {
    /// Five maximal clones on `{0, 1}`.
    PostTest,
    /// `|Clo_2(A)|` against `n^(n^2)`.
    Cardinality,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PrimalityWitness {
    /// Maximal clones containing every basic operation.
    PostClasses(PostClasses),
    /// The least binary function that is not a term function.
    Missing(FunctionTable),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimalityVerdict {
    pub status: PrimalityStatus,
    /// Present exactly when the status is `NotPrimal`.
    pub witness: Option<PrimalityWitness>,
    pub method: PrimalityMethod,
}

impl PrimalityVerdict {
    pub fn is_primal(&self) -> bool {
        self.status == PrimalityStatus::Primal
    }
}

/// Five-class test for `n = 2`, cardinality test otherwise.
pub fn is_primal(algebra: &FiniteAlgebra, budget: usize) -> Result<PrimalityVerdict> {
    if algebra.size() == 2 {
        primal_by_post_test(algebra)
    } else {
        primal_by_cardinality(algebra, budget)
    }
}

pub fn primal_by_post_test(algebra: &FiniteAlgebra) -> Result<PrimalityVerdict> {
    let classes = post_classes(algebra)?;
    Ok(if classes.is_empty() {
        PrimalityVerdict {
            status: PrimalityStatus::Primal,
            witness: None,
            method: PrimalityMethod::PostTest,
        }
    } else {
        PrimalityVerdict {
            status: PrimalityStatus::NotPrimal,
            witness: Some(PrimalityWitness::PostClasses(classes)),
            method: PrimalityMethod::PostTest,
        }
    })
}

/// Least table of the full function space absent from a canonically sorted clone.
fn first_missing(clone: &CloneSet) -> Option<FunctionTable> {
    let layout = Layout::new(clone.size(), clone.arity()).ok()?;
    let total = clone.function_count()?;
    let mut i: u128 = 0;
    for t in clone.tables() {
        let candidate = layout.unpack(&layout.from_index(i));
        if &candidate != t {
            return Some(candidate);
        }
        i += 1;
    }
    (i < total).then(|| layout.unpack(&layout.from_index(i)))
}

pub fn primal_by_cardinality(algebra: &FiniteAlgebra, budget: usize) -> Result<PrimalityVerdict> {
    let n = algebra.size();
    let verdict = |status, witness| PrimalityVerdict {
        status,
        witness,
        method: PrimalityMethod::Cardinality,
    };
    let total = match function_count(n, 2) {
        Some(t) if t <= budget as u128 => t as usize,
        _ => return Ok(verdict(PrimalityStatus::Unknown, None)),
    };
    let clone = generate_clone(algebra, 2, budget)?;
    if !clone.is_complete() {
        return Ok(verdict(PrimalityStatus::Unknown, None));
    }
    if clone.len() == total {
        Ok(verdict(PrimalityStatus::Primal, None))
    } else {
        let missing = first_missing(&clone).expect("clone is smaller than the function space");
        Ok(verdict(PrimalityStatus::NotPrimal, Some(PrimalityWitness::Missing(missing))))
    }
}

/// Whether every idempotent `k`-ary function is a term function.
///
/// Fails with a budget error when the `n^(n^k - n)` idempotent functions exceed
/// `budget`, or when the clone closure does not finish.
pub fn is_idemprimal_at(algebra: &FiniteAlgebra, k: usize, budget: usize) -> Result<bool> {
    let n = algebra.size();
    let points = crate::codec::points(n, k)?;
    let idempotent = BigUint::from(n).pow((points - n) as u32);
    if idempotent > BigUint::from(budget) {
        return Err(Error::budget("idempotent functions", idempotent, budget));
    }
    let clone = generate_clone(algebra, k, budget.max(DEFAULT_CLONE_BUDGET))?;
    if !clone.is_complete() {
        return Err(Error::budget("clone closure", format!("more than {} tables", clone.budget()), clone.budget()));
    }
    let found = clone.tables().iter().filter(|t| t.is_idempotent()).count();
    Ok(BigUint::from(found) == idempotent)
}
