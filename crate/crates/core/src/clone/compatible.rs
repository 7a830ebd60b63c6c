//! Functions that commute with every automorphism.
//!
//! Two constructions are provided. The orbit construction picks a value at the
//! representative `r` of every orbit of `A^k`, restricted to the points fixed
//! by the stabiliser of `r`, and spreads it over the orbit equivariantly. The
//! brute-force construction filters all `n^(n^k)` tables.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use super::{function_count, CloneSet};
use crate::algebra::FiniteAlgebra;
use crate::codec;
use crate::error::{Error, Result};
use crate::symmetry::{orbit_partition, AutomorphismGroup, OrbitPartition};
use crate::table::FunctionTable;

/// The `Aut(A)`-equivariant `k`-ary functions.
#[derive(Debug, Clone, Serialize)]
pub struct CompatibleSet {
    pub size: usize,
    pub arity: usize,
    /// Canonically ordered.
    pub tables: Vec<FunctionTable>,
}

impl CompatibleSet {
    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    /// Whether every compatible function is in the clone. `None` when the
    /// clone is incomplete and some function was not found.
    pub fn is_automorphism_primal(&self, clone: &CloneSet) -> Option<bool> {
        let all_found = self.tables.iter().all(|t| clone.contains(t));
        if all_found {
            Some(true)
        } else if clone.is_complete() {
            Some(false)
        } else {
            None
        }
    }
}

/// Allowed values at each orbit representative.
fn choices(group: &AutomorphismGroup, partition: &OrbitPartition) -> Vec<Vec<usize>> {
    let n = group.size();
    let k = partition.arity;
    let mut digits = vec![0usize; k];
    partition
        .orbits
        .iter()
        .map(|orbit| {
            codec::decode_into(orbit.representative, n, &mut digits);
            let stabiliser: Vec<&Vec<usize>> = group
                .elements()
                .iter()
                .filter(|p| digits.iter().all(|&d| p[d] == d))
                .collect();
            (0..n).filter(|&v| stabiliser.iter().all(|p| p[v] == v)).collect()
        })
        .collect()
}

/// `|{f : A^k → A equivariant}|`, as a product over orbits.
pub fn count_compatible(group: &AutomorphismGroup, k: usize) -> Result<BigUint> {
    let partition = orbit_partition(group, k)?;
    Ok(choices(group, &partition)
        .iter()
        .fold(BigUint::one(), |acc, c| acc * BigUint::from(c.len())))
}

/// Orbit construction; fails if the count exceeds `budget`.
pub fn compatible_functions_orbit(group: &AutomorphismGroup, k: usize, budget: usize) -> Result<CompatibleSet> {
    let n = group.size();
    let partition = orbit_partition(group, k)?;
    let choices = choices(group, &partition);
    let count = choices.iter().fold(BigUint::one(), |acc, c| acc * BigUint::from(c.len()));
    if count > BigUint::from(budget) {
        return Err(Error::budget("compatible functions", count, budget));
    }
    let mut tables = Vec::new();
    let mut pick = vec![0usize; choices.len()];
    if choices.iter().all(|c| !c.is_empty()) {
        loop {
            let entries = (0..partition.total)
                .map(|x| {
                    let o = partition.orbit_of(x);
                    let at_rep = choices[o][pick[o]];
                    group.elements()[partition.carrier(x)][at_rep] as u8
                })
                .collect();
            tables.push(FunctionTable::new(n, k, entries)?);
            // odometer over the choices
            let mut i = pick.len();
            loop {
                if i == 0 {
                    tables.sort_unstable();
                    return Ok(CompatibleSet { size: n, arity: k, tables });
                }
                i -= 1;
                pick[i] += 1;
                if pick[i] < choices[i].len() {
                    break;
                }
                pick[i] = 0;
            }
        }
    }
    Ok(CompatibleSet { size: n, arity: k, tables })
}

/// Filters all `n^(n^k)` tables; fails if that exceeds `budget`.
pub fn compatible_functions_brute(group: &AutomorphismGroup, k: usize, budget: usize) -> Result<CompatibleSet> {
    let n = group.size();
    let total = function_count(n, k)
        .filter(|&t| t <= budget as u128)
        .ok_or_else(|| Error::budget("enumerating every function", format!("{n}^({n}^{k})"), budget))?;
    let points = codec::points(n, k)?;
    let mut entries = vec![0u8; points];
    let mut tables = Vec::new();
    let mut images = vec![0usize; points * group.order()];
    let mut digits = vec![0usize; k];
    for x in 0..points {
        codec::decode_into(x, n, &mut digits);
        for (g, p) in group.elements().iter().enumerate() {
            images[g * points + x] = digits.iter().fold(0usize, |acc, &d| acc * n + p[d]);
        }
    }
    for _ in 0..total {
        let ok = group.elements().iter().enumerate().all(|(g, p)| {
            (0..points).all(|x| p[entries[x] as usize] == entries[images[g * points + x]] as usize)
        });
        if ok {
            tables.push(FunctionTable::new(n, k, entries.clone())?);
        }
        for slot in entries.iter_mut().rev() {
            *slot += 1;
            if (*slot as usize) < n {
                break;
            }
            *slot = 0;
        }
    }
    Ok(CompatibleSet { size: n, arity: k, tables })
}

/// Brute force when `n^(n^k) <= budget`, otherwise the orbit construction.
pub fn compatible_functions(algebra: &FiniteAlgebra, k: usize, group: &AutomorphismGroup, budget: usize) -> Result<CompatibleSet> {
    if group.size() != algebra.size() {
        return Err(Error::Shape("group and algebra act on different sets".into()));
    }
    match function_count(algebra.size(), k) {
        Some(t) if t <= budget as u128 => compatible_functions_brute(group, k, budget),
        _ => compatible_functions_orbit(group, k, budget),
    }
}
