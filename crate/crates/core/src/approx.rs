//! Coincidence ratios, best clone approximations, covering radii and `Prim_k`.
//!
//! `Prim_k(A) = 1 - R / n^k` where `R` is the covering radius of `Clo_k(A)`
//! viewed as a code of length `n^k`. Two routes compute `R`: a sweep over every
//! `k`-ary function, and for the Boolean affine clone the Walsh–Hadamard
//! transform, which gives each function's distance to the code directly.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::clone::{function_count, generate_clone, CloneSet, PostClass, DEFAULT_CLONE_BUDGET};
use crate::error::{Error, Result};
use crate::packed::{Layout, PackedKey};
use crate::rational::ExactRational;
use crate::table::FunctionTable;

/// Default cap on the number of functions swept by the exhaustive route.
pub const DEFAULT_FUNCTION_BUDGET: usize = 1 << 24;

/// Functions per parallel task in the exhaustive sweep.
const SWEEP_CHUNK: u128 = 1 << 12;

fn check_pair(f: &FunctionTable, g: &FunctionTable) -> Result<()> {
    if f.size() != g.size() || f.arity() != g.arity() {
        return Err(Error::Shape(format!(
            "cannot compare a {}-ary table over {} elements with a {}-ary table over {}",
            f.arity(),
            f.size(),
            g.arity(),
            g.size()
        )));
    }
    if f.arity() == 0 {
        return Err(Error::Domain("coincidence is not defined for nullary functions".into()));
    }
    Ok(())
}

/// Number of points where `f` and `g` differ.
pub fn hamming_distance(f: &FunctionTable, g: &FunctionTable) -> Result<usize> {
    check_pair(f, g)?;
    let layout = Layout::new(f.size(), f.arity())?;
    Ok(layout.mismatches(&layout.pack(f), &layout.pack(g)))
}

/// `μ(f, g)`, the fraction of points where `f` and `g` agree.
pub fn coincidence_mu(f: &FunctionTable, g: &FunctionTable) -> Result<ExactRational> {
    let d = hamming_distance(f, g)?;
    let points = f.len();
    Ok(ExactRational::from_counts((points - d) as u64, points as u64))
}

/// The clone table closest to `f`; ties go to the canonically least table.
pub fn best_approximation(clone: &CloneSet, f: &FunctionTable) -> Result<(FunctionTable, ExactRational)> {
    if f.size() != clone.size() || f.arity() != clone.arity() {
        return Err(Error::Shape("function and clone differ in shape".into()));
    }
    let packed = clone.packed();
    let key = packed.layout().pack(f);
    let (best, d) = (0..packed.len())
        .map(|i| (i, packed.layout().mismatches(packed.get(i), &key)))
        .min_by_key(|&(i, d)| (d, i))
        .ok_or_else(|| Error::Domain("empty clone".into()))?;
    let points = f.len();
    Ok((
        clone.tables()[best].clone(),
        ExactRational::from_counts((points - d) as u64, points as u64),
    ))
}

/// Largest distance from any function to the clone, with the least function attaining it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoveringRadius {
    pub radius: usize,
    pub witness: FunctionTable,
}

/// Adds one to the base-`n` number spelled by the packed fields (last point least significant).
fn increment_packed(layout: &Layout, words: &mut [u64]) {
    for p in (0..layout.points).rev() {
        let v = layout.get(words, p);
        let w = p / layout.per_word;
        let shift = 64 - ((p % layout.per_word) as u32 + 1) * layout.bits;
        let field = if layout.bits == 64 { u64::MAX } else { ((1u64 << layout.bits) - 1) << shift };
        words[w] &= !field;
        if v + 1 < layout.size {
            words[w] |= ((v + 1) as u64) << shift;
            return;
        }
    }
}

/// Covering radius by sweeping all `n^(n^k)` functions.
pub fn covering_radius(clone: &CloneSet, budget: usize) -> Result<CoveringRadius> {
    let n = clone.size();
    let k = clone.arity();
    let layout = Layout::new(n, k)?;
    if clone.is_everything() {
        return Ok(CoveringRadius {
            radius: 0,
            witness: layout.unpack(&layout.from_index(0)),
        });
    }
    let total = function_count(n, k)
        .filter(|&t| t <= budget as u128)
        .ok_or_else(|| Error::budget("exhaustive sweep over every function", format!("{n}^({n}^{k})"), budget))?;
    if !clone.is_complete() {
        return Err(Error::Precondition("covering radius needs a complete clone".into()));
    }
    let packed = clone.packed();
    let global = AtomicUsize::new(0);
    let chunks: Vec<u128> = (0..total.div_ceil(SWEEP_CHUNK)).collect();
    let per_chunk: Vec<Option<(usize, u128)>> = chunks
        .par_iter()
        .map(|&c| {
            let start = c * SWEEP_CHUNK;
            let end = (start + SWEEP_CHUNK).min(total);
            let mut key: PackedKey = layout.from_index(start);
            let mut best: Option<(usize, u128)> = None;
            for i in start..end {
                let local = best.map(|b| b.0);
                let floor = global.load(Ordering::Relaxed);
                let mut min = usize::MAX;
                for t in 0..packed.len() {
                    let d = layout.mismatches(packed.get(t), &key);
                    if d < min {
                        min = d;
                        // cannot beat this chunk's best, nor strictly beat another chunk's
                        if local.is_some_and(|b| min <= b) || min < floor {
                            break;
                        }
                    }
                }
                let beaten = local.is_some_and(|b| min <= b) || min < floor;
                if !beaten {
                    best = Some((min, i));
                    global.fetch_max(min, Ordering::Relaxed);
                }
                if i + 1 < end {
                    increment_packed(&layout, &mut key);
                }
            }
            best
        })
        .collect();
    // max distance, least index among ties
    let (radius, index) = per_chunk
        .into_iter()
        .flatten()
        .fold((0usize, u128::MAX), |acc, (d, i)| {
            if d > acc.0 || (d == acc.0 && i < acc.1) {
                (d, i)
            } else {
                acc
            }
        });
    Ok(CoveringRadius {
        radius,
        witness: layout.unpack(&layout.from_index(index)),
    })
}

/// Walsh–Hadamard spectrum of a Boolean function: `W(a) = Σ_x (-1)^(f(x) ⊕ a·x)`.
pub fn walsh_spectrum(f: &FunctionTable) -> Result<Vec<i64>> {
    if f.size() != 2 {
        return Err(Error::Domain(format!("Walsh spectrum needs a Boolean function, got size {}", f.size())));
    }
    let mut w: Vec<i64> = f.entries().iter().map(|&e| if e == 0 { 1 } else { -1 }).collect();
    let mut h = 1;
    while h < w.len() {
        for i in (0..w.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (w[j], w[j + h]);
                w[j] = a + b;
                w[j + h] = a - b;
            }
        }
        h *= 2;
    }
    Ok(w)
}

/// Distance from `f` to the affine Boolean functions: `2^(k-1) - max|W| / 2`.
pub fn walsh_nonlinearity(f: &FunctionTable) -> Result<usize> {
    if f.arity() == 0 {
        return Err(Error::Domain("nonlinearity needs arity at least 1".into()));
    }
    let w = walsh_spectrum(f)?;
    let max = w.iter().map(|v| v.unsigned_abs() as usize).max().unwrap_or(0);
    Ok(f.len() / 2 - max / 2)
}

/// Whether the clone is exactly the `2^(k+1)` affine Boolean functions.
pub fn is_affine_clone(clone: &CloneSet) -> bool {
    clone.size() == 2
        && clone.is_complete()
        && clone.len() == 1 << (clone.arity() + 1)
        && clone.tables().iter().all(|t| PostClass::Affine.contains(t))
}

/// Covering radius of the affine clone via the Walsh–Hadamard transform of every function.
pub fn covering_radius_walsh(k: usize, budget: usize) -> Result<CoveringRadius> {
    let layout = Layout::new(2, k)?;
    let total = function_count(2, k)
        .filter(|&t| t <= budget as u128)
        .ok_or_else(|| Error::budget("Walsh sweep over every Boolean function", format!("2^(2^{k})"), budget))?;
    let chunks: Vec<u128> = (0..total.div_ceil(SWEEP_CHUNK)).collect();
    let best = chunks
        .par_iter()
        .map(|&c| {
            let start = c * SWEEP_CHUNK;
            let end = (start + SWEEP_CHUNK).min(total);
            let mut best = (0usize, u128::MAX);
            for i in start..end {
                let f = layout.unpack(&layout.from_index(i));
                let nl = walsh_nonlinearity(&f).expect("Boolean table");
                if nl > best.0 || best.1 == u128::MAX {
                    best = (nl, i);
                }
            }
            best
        })
        .reduce(
            || (0, u128::MAX),
            |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        );
    Ok(CoveringRadius {
        radius: best.0,
        witness: layout.unpack(&layout.from_index(best.1)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PrimMethod {
    Exhaustive,
    WalshHadamard,
}

/// Budgets for the closure and for the sweep over functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimBudget {
    pub clone_tables: usize,
    pub functions: usize,
}

impl Default for PrimBudget {
    fn default() -> Self {
        PrimBudget {
            clone_tables: DEFAULT_CLONE_BUDGET,
            functions: DEFAULT_FUNCTION_BUDGET,
        }
    }
}

/// `Prim_k(A)` with its covering radius and hardest function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimReport {
    pub algebra: String,
    pub arity: usize,
    #[serde(rename = "primK")]
    pub prim: ExactRational,
    #[serde(rename = "coveringRadius")]
    pub covering_radius: usize,
    #[serde(rename = "hardestFunction")]
    pub hardest_function: FunctionTable,
    pub method: PrimMethod,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn report(algebra: &FiniteAlgebra, k: usize, cr: CoveringRadius, method: PrimMethod, note: Option<String>) -> PrimReport {
    let points = cr.witness.len();
    PrimReport {
        algebra: algebra.name().to_string(),
        arity: k,
        prim: ExactRational::from_counts((points - cr.radius) as u64, points as u64),
        covering_radius: cr.radius,
        hardest_function: cr.witness,
        method,
        complete: true,
        note,
    }
}

/// `Prim_k(A)`, by the Walsh route when the clone is the Boolean affine clone,
/// exhaustively otherwise.
pub fn prim_at(algebra: &FiniteAlgebra, k: usize, budget: PrimBudget) -> Result<PrimReport> {
    prim_at_with(algebra, k, budget, None)
}

/// Like [`prim_at`], optionally forcing a method.
pub fn prim_at_with(algebra: &FiniteAlgebra, k: usize, budget: PrimBudget, method: Option<PrimMethod>) -> Result<PrimReport> {
    if k == 0 {
        return Err(Error::Domain("Prim_k needs k >= 1".into()));
    }
    let clone = generate_clone(algebra, k, budget.clone_tables)?;
    if !clone.is_complete() {
        return Err(Error::budget(
            format!("arity-{k} clone of {} (exhaustive and Walsh routes both need it)", algebra.name()),
            format!("more than {} tables", budget.clone_tables),
            budget.clone_tables,
        ));
    }
    let note = algebra.is_trivial().then(|| "trivial algebra".to_string());
    let affine = is_affine_clone(&clone);
    let chosen = match method {
        Some(PrimMethod::WalshHadamard) if !affine => {
            return Err(Error::Precondition(format!(
                "the Walsh route needs the Boolean affine clone; {} has {} tables at arity {k}",
                algebra.name(),
                clone.len()
            )))
        }
        Some(m) => m,
        None if affine => PrimMethod::WalshHadamard,
        None => PrimMethod::Exhaustive,
    };
    let cr = match chosen {
        PrimMethod::WalshHadamard => covering_radius_walsh(k, budget.functions)?,
        PrimMethod::Exhaustive => covering_radius(&clone, budget.functions).map_err(|e| match e {
            Error::Budget { needed, budget, .. } => Error::Budget {
                what: format!(
                    "Prim_{k} of {}: exhaustive sweep (the Walsh route applies only to the Boolean affine clone)",
                    algebra.name()
                ),
                needed,
                budget,
            },
            other => other,
        })?,
    };
    Ok(report(algebra, k, cr, chosen, note))
}

/// `min_k Prim_k` over the computed arities: an upper bound for `Prim(A)`, never its value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimUpperBound {
    pub value: ExactRational,
    pub arities: Vec<usize>,
    pub label: &'static str,
}

pub fn prim_upper_bound(reports: &[PrimReport]) -> Option<PrimUpperBound> {
    let value = reports.iter().map(|r| r.prim.clone()).min()?;
    Some(PrimUpperBound {
        value,
        arities: reports.iter().map(|r| r.arity).collect(),
        label: "upper bound",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin;
    use proptest::prelude::*;

    fn t(n: usize, k: usize, e: &[u8]) -> FunctionTable {
        FunctionTable::new(n, k, e.to_vec()).unwrap()
    }

    #[test]
    fn mu_examples() {
        let x = t(2, 1, &[0, 1]);
        let nx = t(2, 1, &[1, 0]);
        assert!(coincidence_mu(&x, &nx).unwrap().is_zero());
        let and = t(2, 2, &[0, 0, 0, 1]);
        let zero = t(2, 2, &[0, 0, 0, 0]);
        assert_eq!(coincidence_mu(&and, &zero).unwrap().to_string(), "3/4");
        assert!(coincidence_mu(&and, &and).unwrap().is_one());
        assert!(coincidence_mu(&t(2, 0, &[0]), &t(2, 0, &[0])).is_err());
        assert!(coincidence_mu(&and, &x).is_err());
    }

    #[test]
    fn best_approximations() {
        let lat = generate_clone(&builtin("bool_lattice").unwrap(), 1, 64).unwrap();
        let (_, mu) = best_approximation(&lat, &t(2, 1, &[1, 0])).unwrap();
        assert!(mu.is_zero());
        let z2 = builtin("z2plus").unwrap();
        let c1 = generate_clone(&z2, 1, 64).unwrap();
        assert!(best_approximation(&c1, &t(2, 1, &[1, 0])).unwrap().1.is_one());
        let c2 = generate_clone(&z2, 2, 64).unwrap();
        assert_eq!(best_approximation(&c2, &t(2, 2, &[0, 0, 0, 1])).unwrap().1.to_string(), "3/4");
    }

    #[test]
    fn covering_radius_examples() {
        let z2 = builtin("z2plus").unwrap();
        let c2 = generate_clone(&z2, 2, 64).unwrap();
        assert_eq!(covering_radius(&c2, 1 << 20).unwrap().radius, 1);
        let nand = generate_clone(&builtin("nand").unwrap(), 2, 64).unwrap();
        assert_eq!(covering_radius(&nand, 1 << 20).unwrap().radius, 0);
        let lat = generate_clone(&builtin("bool_lattice").unwrap(), 1, 64).unwrap();
        let cr = covering_radius(&lat, 1 << 20).unwrap();
        assert_eq!(cr.radius, 2);
        assert_eq!(cr.witness.entries(), &[1, 0]);
        assert!(covering_radius(&c2, 4).is_err());
    }

    #[test]
    fn nonlinearity_examples() {
        assert_eq!(walsh_nonlinearity(&t(2, 2, &[0, 0, 0, 1])).unwrap(), 1);
        assert_eq!(walsh_nonlinearity(&t(2, 2, &[0, 1, 1, 0])).unwrap(), 0);
        let bent = FunctionTable::from_fn(2, 4, |x| (x[0] & x[1]) ^ (x[2] & x[3])).unwrap();
        assert_eq!(walsh_nonlinearity(&bent).unwrap(), 6);
        assert!(walsh_nonlinearity(&t(3, 1, &[0, 1, 2])).is_err());
    }

    #[test]
    fn walsh_route_matches_sweep() {
        let z2 = builtin("z2plus").unwrap();
        for k in 1..=3 {
            let clone = generate_clone(&z2, k, 1 << 10).unwrap();
            assert!(is_affine_clone(&clone));
            let layout = Layout::new(2, k).unwrap();
            for i in 0..function_count(2, k).unwrap() {
                let f = layout.unpack(&layout.from_index(i));
                let d = clone.tables().iter().map(|c| hamming_distance(&f, c).unwrap()).min().unwrap();
                assert_eq!(walsh_nonlinearity(&f).unwrap(), d);
            }
            assert_eq!(covering_radius_walsh(k, 1 << 20).unwrap(), covering_radius(&clone, 1 << 20).unwrap());
        }
    }

    #[test]
    fn prim_examples() {
        let z2 = builtin("z2plus").unwrap();
        let r = prim_at(&z2, 2, PrimBudget::default()).unwrap();
        assert_eq!(r.prim.to_string(), "3/4");
        assert_eq!(r.method, PrimMethod::WalshHadamard);
        let v4 = prim_at(&builtin("v4").unwrap(), 1, PrimBudget::default()).unwrap();
        assert!(v4.prim.is_zero());
        let lat = prim_at(&builtin("bool_lattice").unwrap(), 1, PrimBudget::default()).unwrap();
        assert!(lat.prim.is_zero());
        let trivial = prim_at(&builtin("zn:1").unwrap(), 2, PrimBudget::default()).unwrap();
        assert!(trivial.prim.is_one());
        assert_eq!(trivial.note.as_deref(), Some("trivial algebra"));
        assert!(prim_at_with(&builtin("bool_lattice").unwrap(), 1, PrimBudget::default(), Some(PrimMethod::WalshHadamard)).is_err());
        let tight = PrimBudget { clone_tables: 1 << 10, functions: 8 };
        let err = prim_at(&builtin("bool_lattice").unwrap(), 2, tight).unwrap_err().to_string();
        assert!(err.contains("exhaustive") && err.contains("Walsh"), "{err}");
    }

    #[test]
    fn upper_bound_is_minimum() {
        let z2 = builtin("z2plus").unwrap();
        let reports: Vec<PrimReport> = (1..=3).map(|k| prim_at(&z2, k, PrimBudget::default()).unwrap()).collect();
        let ub = prim_upper_bound(&reports).unwrap();
        assert_eq!(ub.value, reports.iter().map(|r| r.prim.clone()).min().unwrap());
        assert_eq!(ub.label, "upper bound");
    }

    fn pair_strategy() -> impl Strategy<Value = (usize, usize, Vec<u8>, Vec<u8>, Vec<u8>)> {
        (2usize..=3, 1usize..=2).prop_flat_map(|(n, k)| {
            let len = n.pow(k as u32);
            let v = proptest::collection::vec(0..n as u8, len);
            (Just(n), Just(k), v.clone(), v.clone(), v)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig { cases: 256, rng_algorithm: proptest::test_runner::RngAlgorithm::ChaCha, ..ProptestConfig::default() })]
        #[test]
        fn distance_is_a_metric((n, k, a, b, c) in pair_strategy()) {
            let (f, g, h) = (t(n, k, &a), t(n, k, &b), t(n, k, &c));
            let d = |x: &FunctionTable, y: &FunctionTable| hamming_distance(x, y).unwrap();
            prop_assert_eq!(d(&f, &g) == 0, f == g);
            prop_assert_eq!(d(&f, &g), d(&g, &f));
            prop_assert!(d(&f, &h) <= d(&f, &g) + d(&g, &h));
            let mu = coincidence_mu(&f, &g).unwrap();
            prop_assert_eq!(mu, ExactRational::from_counts((f.len() - d(&f, &g)) as u64, f.len() as u64));
        }
    }
}
