//! Equation probabilities and arity-truncated probabilistic spectra.
//!
//! `Pr(t ≈ t')` is the coincidence ratio of the two term functions, so the
//! arity-`k` slice of the spectrum is the set of coincidence ratios between
//! pairs of `k`-ary term functions. The pair loop stops as soon as every
//! possible value `d / n^k` has been seen.

use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::clone::compatible::count_compatible;
use crate::clone::primality::is_primal;
use crate::clone::{function_count, generate_clone, CloneSet};
use crate::codec;
use crate::error::{Error, Result};
use crate::packed::Layout;
use crate::rational::ExactRational;
use crate::symmetry::{automorphism_group, orbit_partition, sigma_subset_sums};
use crate::term::{compile_term, Equation};

/// Rows of the pair triangle per parallel task.
const ROW_CHUNK: usize = 64;

/// `Pr(lhs ≈ rhs | A)` over `A^k`, `k` the equation's variable count.
pub fn equation_probability(algebra: &FiniteAlgebra, equation: &Equation) -> Result<ExactRational> {
    equation.check(&algebra.signature())?;
    let k = equation.vars();
    let lhs = compile_term(algebra, &equation.lhs, k)?;
    let rhs = compile_term(algebra, &equation.rhs, k)?;
    let layout = Layout::new(algebra.size(), k)?;
    let points = codec::points(algebra.size(), k)?;
    let d = layout.mismatches(&layout.pack(&lhs), &layout.pack(&rhs));
    Ok(ExactRational::from_counts((points - d) as u64, points as u64))
}

/// The arity-`k` slice of the spectrum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    pub algebra: String,
    pub arity: usize,
    pub complete: bool,
    /// Ascending.
    pub values: Vec<ExactRational>,
    #[serde(rename = "pairCount")]
    pub pair_count: u64,
}

impl SpectrumReport {
    pub fn contains(&self, value: &ExactRational) -> bool {
        self.values.binary_search(value).is_ok()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_subset_of(&self, other: &[ExactRational]) -> bool {
        self.values.iter().all(|v| other.binary_search(v).is_ok())
    }
}

/// Agreement counts seen among pairs of clone tables, as a bitset over `0..=points`.
fn agreement_counts(clone: &CloneSet) -> Vec<bool> {
    let packed = clone.packed();
    let layout = *packed.layout();
    if layout.words == 1 && layout.bits <= 4 {
        return agreement_counts_single_word(packed.words(), layout);
    }
    let points = layout.points;
    let len = packed.len();
    let done = AtomicBool::new(false);
    let rows: Vec<usize> = (0..len).step_by(ROW_CHUNK).collect();
    let merged = rows
        .par_iter()
        .map(|&start| {
            let mut seen = vec![false; points + 1];
            let mut missing = points + 1;
            for i in start..(start + ROW_CHUNK).min(len) {
                if done.load(Ordering::Relaxed) {
                    break;
                }
                let a = packed.get(i);
                for j in i..len {
                    let agree = points - layout.mismatches(a, packed.get(j));
                    if !seen[agree] {
                        seen[agree] = true;
                        missing -= 1;
                        if missing == 0 {
                            done.store(true, Ordering::Relaxed);
                            return seen;
                        }
                    }
                }
            }
            seen
        })
        .reduce(
            || vec![false; points + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x |= y);
                a
            },
        );
    // once every value is seen the early exit cannot change the answer
    if done.load(Ordering::Relaxed) {
        vec![true; points + 1]
    } else {
        merged
    }
}

/// [`agreement_counts`] for tables that fit one word, with a `u128` bitset of seen counts.
fn agreement_counts_single_word(words: &[u64], layout: Layout) -> Vec<bool> {
    match layout.bits {
        1 => single_word_scan::<1>(words, layout),
        2 => single_word_scan::<2>(words, layout),
        3 => single_word_scan::<3>(words, layout),
        _ => single_word_scan::<4>(words, layout),
    }
}

fn single_word_scan<const BITS: u32>(words: &[u64], layout: Layout) -> Vec<bool> {
    let points = layout.points;
    let low = layout.low_mask();
    let fold = |d: u64| -> u32 {
        let mut acc = d;
        for s in 1..BITS {
            acc |= d >> s;
        }
        (acc & low).count_ones()
    };
    let all: u128 = if points + 1 == 128 { u128::MAX } else { (1u128 << (points + 1)) - 1 };
    let done = AtomicBool::new(false);
    let len = words.len();
    let rows: Vec<usize> = (0..len).step_by(ROW_CHUNK).collect();
    let mismatched = rows
        .par_iter()
        .map(|&start| {
            // bit d of `mismatched` records a pair at distance d
            let mut mismatched = 0u128;
            for i in start..(start + ROW_CHUNK).min(len) {
                if done.load(Ordering::Relaxed) {
                    break;
                }
                let a = words[i];
                for &b in &words[i..] {
                    mismatched |= 1u128 << fold(a ^ b);
                }
                if mismatched == all {
                    done.store(true, Ordering::Relaxed);
                    break;
                }
            }
            mismatched
        })
        .reduce(|| 0, |a, b| a | b);
    let mismatched = if done.load(Ordering::Relaxed) { all } else { mismatched };
    (0..=points).map(|agree| mismatched >> (points - agree) & 1 == 1).collect()
}

/// Spectrum slice from an already generated clone.
pub fn spectrum_of_clone(name: &str, clone: &CloneSet) -> SpectrumReport {
    let points = codec::points(clone.size(), clone.arity()).expect("clone shape");
    let seen = agreement_counts(clone);
    let values = seen
        .iter()
        .enumerate()
        .filter(|(_, &s)| s)
        .map(|(d, _)| ExactRational::from_counts(d as u64, points as u64))
        .collect();
    let c = clone.len() as u64;
    SpectrumReport {
        algebra: name.to_string(),
        arity: clone.arity(),
        complete: clone.is_complete(),
        values,
        pair_count: c * (c + 1) / 2,
    }
}

/// `{ μ(s, t) : s, t ∈ Clo_k(A) }`. When the closure hits the budget the
/// values are a subset of the true slice and `complete` is false.
///
/// A primal algebra whose clone does not fit the budget gets the full slice
/// `{d / n^k}` with `pair_count = 0`.
pub fn pspec_at(algebra: &FiniteAlgebra, k: usize, budget: usize) -> Result<SpectrumReport> {
    let clone = generate_clone(algebra, k, budget)?;
    if !clone.is_complete() && known_primal(algebra, budget) {
        return full_slice(algebra, k);
    }
    Ok(spectrum_of_clone(algebra.name(), &clone))
}

fn known_primal(algebra: &FiniteAlgebra, budget: usize) -> bool {
    let n = algebra.size();
    if n < 2 {
        return false;
    }
    // a primal algebra has every unary function as a term, and Clo_1 is cheap
    let unary_total = function_count(n, 1).unwrap_or(u128::MAX);
    let unary_full = generate_clone(algebra, 1, budget).is_ok_and(|c| c.len() as u128 == unary_total && c.is_complete());
    unary_full && is_primal(algebra, budget).is_ok_and(|v| v.is_primal())
}

/// Every `d / n^k`, the slice of a primal algebra.
fn full_slice(algebra: &FiniteAlgebra, k: usize) -> Result<SpectrumReport> {
    let points = codec::points(algebra.size(), k)? as u64;
    Ok(SpectrumReport {
        algebra: algebra.name().to_string(),
        arity: k,
        complete: true,
        values: (0..=points).map(|d| ExactRational::from_counts(d, points)).collect(),
        pair_count: 0,
    })
}

/// Union of the slices for arities `1..=max_k`.
pub fn spectrum_prefix(algebra: &FiniteAlgebra, max_k: usize, budget: usize) -> Result<SpectrumReport> {
    if max_k == 0 {
        return Err(Error::Domain("spectrum prefix needs max arity >= 1".into()));
    }
    let mut values: Vec<ExactRational> = Vec::new();
    let mut complete = true;
    let mut pair_count = 0;
    for k in 1..=max_k {
        let r = pspec_at(algebra, k, budget)?;
        complete &= r.complete;
        pair_count += r.pair_count;
        values.extend(r.values);
    }
    values.sort();
    values.dedup();
    Ok(SpectrumReport {
        algebra: algebra.name().to_string(),
        arity: max_k,
        complete,
        values,
        pair_count,
    })
}

/// `A × B` on pairs encoded as `a * |B| + b`.
pub fn direct_product(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    if !a.signature().same_symbols(&b.signature()) {
        return Err(Error::Signature(format!(
            "{} and {} have different signatures",
            a.name(),
            b.name()
        )));
    }
    let (na, nb) = (a.size(), b.size());
    let n = na * nb;
    if n > crate::table::MAX_SIZE {
        return Err(Error::Domain(format!("product has {n} elements, above the supported maximum")));
    }
    let mut tables = Vec::new();
    for op in a.ops() {
        let ta = &op.table;
        let tb = &b.op(&op.name).expect("same symbols").table;
        let m = op.arity();
        let mut tuple = vec![0usize; m];
        let len = codec::points(n, m)?;
        let mut entries = Vec::with_capacity(len);
        for _ in 0..len {
            let ia = tuple.iter().fold(0, |acc, &x| acc * na + x / nb);
            let ib = tuple.iter().fold(0, |acc, &x| acc * nb + x % nb);
            entries.push((ta.at(ia) * nb + tb.at(ib)) as u8);
            codec::increment(&mut tuple, n);
        }
        tables.push((op.name.clone(), m, entries));
    }
    FiniteAlgebra::from_tables(format!("{}_x_{}", a.name(), b.name()), n, tables)
}

/// `A^m` for `m >= 1`.
pub fn power(a: &FiniteAlgebra, m: usize) -> Result<FiniteAlgebra> {
    if m == 0 {
        return Err(Error::Domain("power needs m >= 1".into()));
    }
    let mut out = a.clone();
    for _ in 1..m {
        out = direct_product(&out, a)?;
    }
    out.with_name(format!("{}^{m}", a.name()))
}

/// Result of comparing the spectrum slice with the orbit bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitInclusion {
    pub arity: usize,
    /// Spectrum slice inside the bound.
    pub holds: bool,
    /// The inclusion is proper.
    pub strict: bool,
    /// A spectrum value outside the bound when `holds` fails, else a bound
    /// value missing from the spectrum when `strict`.
    pub witness: Option<ExactRational>,
    /// The clone closure finished.
    pub complete: bool,
    pub fixed_points: usize,
    /// `Some` when the clone is complete.
    pub automorphism_primal: Option<bool>,
    /// Automorphism-primal at this arity with at least two fixed points.
    pub equality_expected: bool,
    pub spectrum: Vec<ExactRational>,
    pub bound: Vec<ExactRational>,
}

impl OrbitInclusion {
    /// The inclusion holds, and is an equality whenever that is expected.
    pub fn consistent(&self) -> bool {
        self.holds && (!self.equality_expected || !self.strict)
    }
}

/// Checks `pspec_at(A, k) ⊆ Σ°(ℓ) / n^k` and, when applicable, equality.
pub fn check_orbit_inclusion(algebra: &FiniteAlgebra, k: usize, budget: usize) -> Result<OrbitInclusion> {
    let group = automorphism_group(algebra)?;
    let partition = orbit_partition(&group, k)?;
    let bound = sigma_subset_sums(&partition.sizes(), partition.total)?;
    let clone = generate_clone(algebra, k, budget)?;
    // a primal algebra has every function as a term, so its clone is the whole compatible set
    let primal = !clone.is_complete() && known_primal(algebra, budget);
    let spectrum = if primal {
        full_slice(algebra, k)?
    } else {
        spectrum_of_clone(algebra.name(), &clone)
    };
    let outside = spectrum.values.iter().find(|v| bound.binary_search(v).is_err()).cloned();
    let missing = bound.iter().find(|v| !spectrum.contains(v)).cloned();
    let automorphism_primal = if primal {
        Some(true)
    } else if clone.is_complete() {
        Some(count_compatible(&group, k)? == num_bigint::BigUint::from(clone.len()))
    } else {
        None
    };
    let fixed_points = group.fixed_points().len();
    Ok(OrbitInclusion {
        arity: k,
        holds: outside.is_none(),
        strict: missing.is_some(),
        witness: outside.or(missing),
        complete: spectrum.complete,
        fixed_points,
        automorphism_primal,
        equality_expected: automorphism_primal == Some(true) && fixed_points >= 2,
        spectrum: spectrum.values,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin;
    use crate::term::parse_equation;

    fn prob(key: &str, eq: &str) -> String {
        let a = builtin(key).unwrap();
        let e = parse_equation(eq, &a.signature(), None).unwrap();
        equation_probability(&a, &e).unwrap().to_string()
    }

    fn values(r: &SpectrumReport) -> Vec<String> {
        r.values.iter().map(|v| v.to_string()).collect()
    }

    #[test]
    fn probabilities() {
        assert_eq!(prob("boolean2", "(= (meet x0 x1) (zero))"), "3/4");
        assert_eq!(prob("zp:3", "(= (add x0 x1) (e))"), "1/3");
        assert_eq!(prob("s3", "(= (mul x0 x0) (e))"), "2/3");
        assert_eq!(prob("pentagon", "(= (meet x0 x1) (zero))"), "13/25");
    }

    #[test]
    fn dummy_variables_do_not_change_probability() {
        let a = builtin("pentagon").unwrap();
        let e = parse_equation("(= (meet x0 x1) (zero))", &a.signature(), None).unwrap();
        assert_eq!(equation_probability(&a, &e).unwrap(), equation_probability(&a, &e.padded()).unwrap());
    }

    #[test]
    fn spectra() {
        let b = pspec_at(&builtin("boolean2").unwrap(), 2, 1 << 20).unwrap();
        assert_eq!(values(&b), ["0/1", "1/4", "1/2", "3/4", "1/1"]);
        assert!(b.complete);
        let z = pspec_at(&builtin("zp:3").unwrap(), 2, 1 << 20).unwrap();
        assert_eq!(values(&z), ["1/3", "1/1"]);
        let p = pspec_at(&builtin("proj:2").unwrap(), 3, 1 << 20).unwrap();
        assert_eq!(values(&p), ["1/2", "1/1"]);
        assert_eq!(p.pair_count, 6);
    }

    #[test]
    fn products() {
        let b = builtin("boolean2").unwrap();
        let b2 = power(&b, 2).unwrap();
        assert_eq!(b2.size(), 4);
        let e = parse_equation("(= (meet x0 x1) (zero))", &b.signature(), None).unwrap();
        assert_eq!(equation_probability(&b2, &e).unwrap().to_string(), "9/16");
        let s = pspec_at(&b2, 2, 1 << 20).unwrap();
        let base = pspec_at(&b, 2, 1 << 20).unwrap();
        let mut squared: Vec<ExactRational> = base.values.iter().map(|v| v.pow(2)).collect();
        squared.sort();
        assert_eq!(s.values, squared);
        assert!(direct_product(&b, &builtin("zp:2").unwrap()).is_err());
    }

    #[test]
    fn orbit_inclusion_examples() {
        let b = check_orbit_inclusion(&builtin("boolean2").unwrap(), 2, 1 << 20).unwrap();
        assert!(b.holds && !b.strict && b.equality_expected && b.consistent());
        let z = check_orbit_inclusion(&builtin("zp:3").unwrap(), 1, 1 << 20).unwrap();
        assert!(z.holds && z.strict);
        let m = check_orbit_inclusion(&builtin("m_n:3").unwrap(), 2, 1 << 20).unwrap();
        assert!(m.holds);
        assert_eq!(m.bound.len(), 26);
    }

    #[test]
    fn early_exit_is_thread_independent() {
        let g = builtin("nand").unwrap();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let three = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let a = one.install(|| pspec_at(&g, 3, 1 << 20).unwrap());
        let b = three.install(|| pspec_at(&g, 3, 1 << 20).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.len(), 9);
    }
}
