//! Term functions of fixed arity by semi-naive composition closure.
//!
//! Starting from the projections and the constants named by nullary symbols,
//! every basic operation is applied to every tuple of known tables that uses
//! at least one table from the latest frontier. The loop ends at a fixed point
//! or once the set outgrows the budget.
//!
//! For `k >= 3` the binary clone is computed first: if it already holds every
//! binary function the algebra is primal, and the `k`-ary clone is the whole
//! function space, which is listed directly when it fits the budget.
//!
//! Work inside a round is split into fixed-size chunks whose results are merged
//! in chunk order, so the output does not depend on the number of threads even
//! when the budget cuts the closure short.

pub mod compatible;
pub mod post;
pub mod primality;

use std::hash::Hash;

use rayon::prelude::*;
use rustc_hash::FxHashSet;
use smallvec::SmallVec;
use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::codec;
use crate::error::{Error, Result};
use crate::packed::{Layout, PackedTables};
use crate::table::FunctionTable;

pub use compatible::{compatible_functions, count_compatible, CompatibleSet};
pub use post::{post_classes, PostClass, PostClasses};
pub use primality::{is_idemprimal_at, is_primal, PrimalityMethod, PrimalityStatus, PrimalityVerdict, PrimalityWitness};

/// Default cap on the number of tables in one clone.
pub const DEFAULT_CLONE_BUDGET: usize = 1 << 20;

/// Compositions evaluated per parallel task.
const CHUNK: usize = 1 << 14;
/// Tasks evaluated between two merges.
const TASKS_PER_BATCH: usize = 64;

/// The `k`-ary term functions found by [`generate_clone`].
#[derive(Debug, Clone, Serialize)]
pub struct CloneSet {
    size: usize,
    arity: usize,
    tables: Vec<FunctionTable>,
    complete: bool,
    rounds: usize,
    budget: usize,
    #[serde(skip)]
    packed: PackedTables,
}

impl CloneSet {
    fn from_parts(size: usize, arity: usize, mut tables: Vec<FunctionTable>, complete: bool, rounds: usize, budget: usize) -> Result<Self> {
        tables.sort_unstable();
        let layout = Layout::new(size, arity)?;
        let packed = PackedTables::from_tables(layout, &tables);
        Ok(CloneSet {
            size,
            arity,
            tables,
            complete,
            rounds,
            budget,
            packed,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Tables in canonical (lexicographic) order.
    pub fn tables(&self) -> &[FunctionTable] {
        &self.tables
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    /// Whether the closure reached its fixed point.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Tables in canonical order, bit-packed.
    pub fn packed(&self) -> &PackedTables {
        &self.packed
    }

    /// `n^(n^k)`, the number of `k`-ary functions, if it fits a `u128`.
    pub fn function_count(&self) -> Option<u128> {
        function_count(self.size, self.arity)
    }

    /// Complete and equal to every `k`-ary function.
    pub fn is_everything(&self) -> bool {
        self.complete && self.function_count() == Some(self.tables.len() as u128)
    }

    pub fn contains(&self, table: &FunctionTable) -> bool {
        self.tables.binary_search(table).is_ok()
    }
}

/// `n^(n^k)` when it fits a `u128`.
pub fn function_count(size: usize, arity: usize) -> Option<u128> {
    let points = codec::checked_points(size, arity)?;
    let mut acc: u128 = 1;
    for _ in 0..points {
        acc = acc.checked_mul(size as u128)?;
    }
    Some(acc)
}

/// Answer of [`clone_contains`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Membership {
    Found,
    NotFound,
    /// Absent from a clone whose closure stopped early.
    NotFoundIncomplete,
}

impl Membership {
    pub fn is_found(self) -> bool {
        self == Membership::Found
    }
}

/// Entrywise membership test.
pub fn clone_contains(clone: &CloneSet, table: &FunctionTable) -> Result<Membership> {
    if table.size() != clone.size || table.arity() != clone.arity {
        return Err(Error::Shape(format!(
            "table is {}-ary over {} elements, clone is {}-ary over {}",
            table.arity(),
            table.size(),
            clone.arity,
            clone.size
        )));
    }
    Ok(if clone.contains(table) {
        Membership::Found
    } else if clone.complete {
        Membership::NotFound
    } else {
        Membership::NotFoundIncomplete
    })
}

/// `Clo_k(A)`, closed up to `budget` tables.
pub fn generate_clone(algebra: &FiniteAlgebra, k: usize, budget: usize) -> Result<CloneSet> {
    if k == 0 {
        return Err(Error::Domain("clone arity must be at least 1".into()));
    }
    let n = algebra.size();
    let mut seeds = Vec::new();
    for i in 0..k {
        seeds.push(FunctionTable::projection(n, k, i)?);
    }
    for op in algebra.ops().iter().filter(|o| o.arity() == 0) {
        seeds.push(FunctionTable::constant(n, k, op.table.at(0))?);
    }
    let ops: Vec<&FunctionTable> = algebra.ops().iter().filter(|o| o.arity() > 0).map(|o| &o.table).collect();
    if k >= 3 && n >= 2 {
        let fits = |arity| function_count(n, arity).is_some_and(|c| c <= budget as u128);
        if fits(k) && fits(2) && generate_clone(algebra, 2, budget)?.is_everything() {
            return all_functions(n, k, budget);
        }
    }
    close_tables(n, k, &ops, seeds, budget)
}

/// Every `k`-ary function, as a complete clone.
fn all_functions(n: usize, k: usize, budget: usize) -> Result<CloneSet> {
    let layout = Layout::new(n, k)?;
    let total = function_count(n, k).expect("checked by caller");
    let tables = (0..total).map(|i| layout.unpack(&layout.from_index(i))).collect();
    CloneSet::from_parts(n, k, tables, true, 0, budget)
}

/// Closure of `seeds` under the operations `ops`.
pub fn close_tables(size: usize, k: usize, ops: &[&FunctionTable], seeds: Vec<FunctionTable>, budget: usize) -> Result<CloneSet> {
    let points = codec::points(size, k)?;
    for s in &seeds {
        if s.size() != size || s.arity() != k {
            return Err(Error::Shape("seed table has the wrong shape".into()));
        }
    }
    if ops.iter().any(|o| o.size() != size || o.arity() == 0) {
        return Err(Error::Shape("closure operations must be over the universe and have positive arity".into()));
    }
    let full = function_count(size, k);
    if size == 2 && points <= 64 {
        let repr = BitRepr::new(points, ops);
        let seeds = seeds.iter().map(|s| repr.encode(s)).collect();
        let (found, complete, rounds) = run_closure(&repr, seeds, budget, full);
        let tables = found.into_iter().map(|w| repr.decode(w, k)).collect();
        CloneSet::from_parts(size, k, tables, complete, rounds, budget)
    } else if size <= 4 && points <= 64 {
        close_planes::<2>(size, k, points, ops, &seeds, budget, full)
    } else if size <= 8 && points <= 64 {
        close_planes::<3>(size, k, points, ops, &seeds, budget, full)
    } else {
        let repr = ByteRepr::new(size, points, ops);
        let seeds = seeds.iter().map(|s| s.entries().to_vec().into_boxed_slice()).collect();
        let (found, complete, rounds) = run_closure(&repr, seeds, budget, full);
        let tables = found
            .into_iter()
            .map(|e| FunctionTable::new(size, k, e.into_vec()))
            .collect::<Result<Vec<_>>>()?;
        CloneSet::from_parts(size, k, tables, complete, rounds, budget)
    }
}

trait Repr: Sync {
    type T: Clone + Eq + Hash + Send + Sync;
    /// Per-table data precomputed once so that composition is cheap.
    type P: Send + Sync;
    fn op_arities(&self) -> Vec<usize>;
    fn prepare(&self, t: &Self::T) -> Self::P;
    fn compose(&self, op: usize, args: &[&Self::P]) -> Self::T;
}

/// Boolean tables with at most 64 points as bit masks (bit `p` is the value at point `p`).
struct BitRepr {
    mask: u64,
    /// Per operation: arity and the argument patterns where it returns 1.
    ops: Vec<(usize, Vec<usize>)>,
}

impl BitRepr {
    fn new(points: usize, ops: &[&FunctionTable]) -> Self {
        let mask = if points == 64 { u64::MAX } else { (1u64 << points) - 1 };
        let ops = ops
            .iter()
            .map(|t| (t.arity(), (0..t.len()).filter(|&i| t.at(i) == 1).collect()))
            .collect();
        BitRepr { mask, ops }
    }

    fn encode(&self, t: &FunctionTable) -> u64 {
        t.entries().iter().enumerate().fold(0u64, |acc, (p, &e)| acc | ((e as u64) << p))
    }

    fn decode(&self, w: u64, k: usize) -> FunctionTable {
        let points = 1usize << k;
        FunctionTable::from_raw(2, k, (0..points).map(|p| (w >> p & 1) as u8).collect())
    }
}

impl Repr for BitRepr {
    type T = u64;
    type P = u64;

    fn op_arities(&self) -> Vec<usize> {
        self.ops.iter().map(|(a, _)| *a).collect()
    }

    fn prepare(&self, t: &u64) -> u64 {
        *t
    }

    fn compose(&self, op: usize, args: &[&u64]) -> u64 {
        let (m, ones) = &self.ops[op];
        let mut out = 0u64;
        for &pattern in ones {
            let mut term = self.mask;
            for (i, g) in args.iter().enumerate() {
                let bit = pattern >> (m - 1 - i) & 1;
                term &= if bit == 1 { **g } else { !**g };
            }
            out |= term;
        }
        out & self.mask
    }
}

fn close_planes<const B: usize>(
    size: usize,
    k: usize,
    points: usize,
    ops: &[&FunctionTable],
    seeds: &[FunctionTable],
    budget: usize,
    full: Option<u128>,
) -> Result<CloneSet> {
    let repr = PlaneRepr::<B>::new(size, points, ops);
    let seeds = seeds.iter().map(|s| repr.encode(s)).collect();
    let (found, complete, rounds) = run_closure(&repr, seeds, budget, full);
    let tables = found.into_iter().map(|w| repr.decode(&w, k)).collect();
    CloneSet::from_parts(size, k, tables, complete, rounds, budget)
}

/// Tables with at most 64 points over at most `2^B` elements as `B` bit planes:
/// bit `p` of plane `b` is bit `b` of the value at point `p`.
struct PlaneRepr<const B: usize> {
    size: usize,
    points: usize,
    mask: u64,
    ops: Vec<(usize, Vec<u8>)>,
}

impl<const B: usize> PlaneRepr<B> {
    fn new(size: usize, points: usize, ops: &[&FunctionTable]) -> Self {
        debug_assert!(size <= 1 << B && points <= 64);
        let mask = if points == 64 { u64::MAX } else { (1u64 << points) - 1 };
        let ops = ops.iter().map(|t| (t.arity(), t.entries().to_vec())).collect();
        PlaneRepr { size, points, mask, ops }
    }

    fn encode(&self, t: &FunctionTable) -> [u64; B] {
        let mut planes = [0u64; B];
        for (p, &e) in t.entries().iter().enumerate() {
            for (b, plane) in planes.iter_mut().enumerate() {
                *plane |= ((e as u64 >> b) & 1) << p;
            }
        }
        planes
    }

    fn decode(&self, planes: &[u64; B], k: usize) -> FunctionTable {
        let entries = (0..self.points)
            .map(|p| (0..B).fold(0u8, |acc, b| acc | (((planes[b] >> p) & 1) as u8) << b))
            .collect();
        FunctionTable::from_raw(self.size, k, entries)
    }

    /// Points where the table takes each value.
    fn level_sets(&self, planes: &[u64; B]) -> [u64; 8] {
        let mut out = [0u64; 8];
        for (a, slot) in out.iter_mut().enumerate().take(self.size) {
            *slot = (0..B).fold(self.mask, |acc, b| {
                acc & if (a >> b) & 1 == 1 { planes[b] } else { !planes[b] }
            });
        }
        out
    }

    fn spread(&self, table: &[u8], levels: &[&[u64; 8]], partial: u64, index: usize, out: &mut [u64; B]) {
        let depth = levels.len();
        if depth == 0 {
            let v = table[index];
            for (b, plane) in out.iter_mut().enumerate() {
                if (v >> b) & 1 == 1 {
                    *plane |= partial;
                }
            }
            return;
        }
        for a in 0..self.size {
            let t = partial & levels[0][a];
            if t != 0 {
                self.spread(table, &levels[1..], t, index * self.size + a, out);
            }
        }
    }
}

impl<const B: usize> Repr for PlaneRepr<B> {
    type T = [u64; B];
    type P = [u64; 8];

    fn op_arities(&self) -> Vec<usize> {
        self.ops.iter().map(|(a, _)| *a).collect()
    }

    fn prepare(&self, t: &[u64; B]) -> [u64; 8] {
        self.level_sets(t)
    }

    fn compose(&self, op: usize, args: &[&[u64; 8]]) -> [u64; B] {
        let table = &self.ops[op].1;
        let mut out = [0u64; B];
        if let [g, h] = args {
            let n = self.size;
            for a in 0..n {
                if g[a] == 0 {
                    continue;
                }
                for b in 0..n {
                    let t = g[a] & h[b];
                    let v = table[a * n + b];
                    for (bit, plane) in out.iter_mut().enumerate() {
                        if (v >> bit) & 1 == 1 {
                            *plane |= t;
                        }
                    }
                }
            }
        } else {
            self.spread(table, args, self.mask, 0, &mut out);
        }
        out
    }
}

/// General tables as byte vectors.
struct ByteRepr {
    size: usize,
    points: usize,
    ops: Vec<(usize, Vec<u8>)>,
}

impl ByteRepr {
    fn new(size: usize, points: usize, ops: &[&FunctionTable]) -> Self {
        ByteRepr {
            size,
            points,
            ops: ops.iter().map(|t| (t.arity(), t.entries().to_vec())).collect(),
        }
    }
}

impl Repr for ByteRepr {
    type T = Box<[u8]>;
    type P = Box<[u8]>;

    fn op_arities(&self) -> Vec<usize> {
        self.ops.iter().map(|(a, _)| *a).collect()
    }

    fn prepare(&self, t: &Box<[u8]>) -> Box<[u8]> {
        t.clone()
    }

    fn compose(&self, op: usize, args: &[&Box<[u8]>]) -> Box<[u8]> {
        let table = &self.ops[op].1;
        let n = self.size;
        (0..self.points)
            .map(|p| {
                let idx = args.iter().fold(0usize, |acc, g| acc * n + g[p] as usize);
                table[idx]
            })
            .collect()
    }
}

/// One block of the tuple space of a round: coordinates before `pos` range
/// over the old tables, coordinate `pos` over the frontier, the rest over all
/// tables known when the round began.
struct Block {
    op: usize,
    radices: Vec<usize>,
    offsets: Vec<usize>,
    total: usize,
}

fn run_closure<R: Repr>(repr: &R, seeds: Vec<R::T>, budget: usize, full: Option<u128>) -> (Vec<R::T>, bool, usize) {
    let mut known: Vec<R::T> = Vec::new();
    let mut index: FxHashSet<R::T> = FxHashSet::default();
    for s in seeds {
        if index.insert(s.clone()) {
            known.push(s);
        }
    }
    let saturated = |len: usize| full == Some(len as u128);
    if known.len() > budget {
        known.truncate(budget + 1);
        return (known, false, 0);
    }
    let arities = repr.op_arities();
    if arities.is_empty() || saturated(known.len()) {
        return (known, true, 0);
    }
    let mut prepared: Vec<R::P> = Vec::new();
    let mut old_end = 0usize;
    let mut rounds = 0usize;
    loop {
        let round_end = known.len();
        if old_end == round_end {
            return (known, true, rounds);
        }
        rounds += 1;
        let frontier = round_end - old_end;
        let mut blocks = Vec::new();
        for (op, &m) in arities.iter().enumerate() {
            for pos in 0..m {
                let radices: Vec<usize> = (0..m)
                    .map(|j| match j.cmp(&pos) {
                        std::cmp::Ordering::Less => old_end,
                        std::cmp::Ordering::Equal => frontier,
                        std::cmp::Ordering::Greater => round_end,
                    })
                    .collect();
                let offsets: Vec<usize> = (0..m).map(|j| if j == pos { old_end } else { 0 }).collect();
                let total = radices.iter().try_fold(1usize, |acc, &r| acc.checked_mul(r)).unwrap_or(usize::MAX);
                if total > 0 {
                    blocks.push(Block { op, radices, offsets, total });
                }
            }
        }
        // tasks: (block, start, end)
        let mut tasks: Vec<(usize, usize, usize)> = Vec::new();
        for (b, block) in blocks.iter().enumerate() {
            let mut start = 0;
            while start < block.total {
                let end = (start + CHUNK).min(block.total);
                tasks.push((b, start, end));
                start = end;
            }
        }
        prepared.extend(known[prepared.len()..round_end].iter().map(|t| repr.prepare(t)));
        for batch in tasks.chunks(TASKS_PER_BATCH) {
            let snapshot = &prepared[..round_end];
            let found: Vec<Vec<R::T>> = batch
                .par_iter()
                .map(|&(b, start, end)| {
                    let block = &blocks[b];
                    let m = block.radices.len();
                    let mut digits = vec![0usize; m];
                    let mut rest = start;
                    for j in (0..m).rev() {
                        digits[j] = rest % block.radices[j];
                        rest /= block.radices[j];
                    }
                    let mut local: FxHashSet<R::T> = FxHashSet::default();
                    let mut out = Vec::new();
                    let mut args: SmallVec<[&R::P; 4]> = SmallVec::with_capacity(m);
                    for _ in start..end {
                        args.clear();
                        args.extend((0..m).map(|j| &snapshot[digits[j] + block.offsets[j]]));
                        let t = repr.compose(block.op, &args);
                        if !index.contains(&t) && local.insert(t.clone()) {
                            out.push(t);
                        }
                        for j in (0..m).rev() {
                            digits[j] += 1;
                            if digits[j] < block.radices[j] {
                                break;
                            }
                            digits[j] = 0;
                        }
                    }
                    out
                })
                .collect();
            for t in found.into_iter().flatten() {
                if index.insert(t.clone()) {
                    known.push(t);
                }
            }
            if known.len() > budget {
                // keep downstream pair loops bounded by about budget^2
                known.truncate(budget + 1);
                return (known, false, rounds);
            }
            if saturated(known.len()) {
                return (known, true, rounds);
            }
        }
        old_end = round_end;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtin;

    fn entries(c: &CloneSet) -> Vec<Vec<u8>> {
        c.tables().iter().map(|t| t.entries().to_vec()).collect()
    }

    #[test]
    fn xor_binary_clone() {
        let c = generate_clone(&builtin("xor").unwrap(), 2, 1 << 10).unwrap();
        assert!(c.is_complete());
        assert_eq!(entries(&c), vec![vec![0, 0, 0, 0], vec![0, 0, 1, 1], vec![0, 1, 0, 1], vec![0, 1, 1, 0]]);
    }

    #[test]
    fn projection_groupoid_clone() {
        let c = generate_clone(&builtin("proj:3").unwrap(), 2, 1 << 10).unwrap();
        assert!(c.is_complete());
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn nand_reaches_everything() {
        let c = generate_clone(&builtin("nand").unwrap(), 2, 1 << 10).unwrap();
        assert!(c.is_everything());
        assert_eq!(c.len(), 16);
        let c4 = generate_clone(&builtin("nand").unwrap(), 4, 1 << 20).unwrap();
        assert_eq!(c4.len(), 65536);
        assert!(c4.is_complete());
    }

    #[test]
    fn budget_stops_early() {
        let c = generate_clone(&builtin("nand").unwrap(), 3, 20).unwrap();
        assert!(!c.is_complete());
        assert!(c.len() > 20);
        assert_eq!(
            clone_contains(&c, &FunctionTable::constant(2, 3, 0).unwrap()).unwrap(),
            if c.contains(&FunctionTable::constant(2, 3, 0).unwrap()) {
                Membership::Found
            } else {
                Membership::NotFoundIncomplete
            }
        );
    }

    #[test]
    fn membership_examples() {
        let lat = builtin("bool_lattice").unwrap();
        let c = generate_clone(&lat, 2, 1 << 10).unwrap();
        let not_x = FunctionTable::new(2, 2, vec![1, 1, 0, 0]).unwrap();
        assert_eq!(clone_contains(&c, &not_x).unwrap(), Membership::NotFound);

        let z2 = builtin("z2plus").unwrap();
        let c = generate_clone(&z2, 2, 1 << 10).unwrap();
        let xor = FunctionTable::new(2, 2, vec![0, 1, 1, 0]).unwrap();
        assert!(clone_contains(&c, &xor).unwrap().is_found());

        let c = generate_clone(&builtin("xor").unwrap(), 2, 1 << 10).unwrap();
        assert!(clone_contains(&c, &FunctionTable::constant(2, 2, 0).unwrap()).unwrap().is_found());
        assert!(clone_contains(&c, &FunctionTable::constant(3, 2, 0).unwrap()).is_err());
    }

    #[test]
    fn bit_and_byte_paths_agree() {
        for i in 0..16 {
            let g = builtin(&format!("groupoid2:{i}")).unwrap();
            for k in 1..=3 {
                let fast = generate_clone(&g, k, 1 << 12).unwrap();
                let points = 1 << k;
                let ops: Vec<&FunctionTable> = g.ops().iter().map(|o| &o.table).collect();
                let repr = ByteRepr::new(2, points, &ops);
                let seeds = (0..k)
                    .map(|j| FunctionTable::projection(2, k, j).unwrap().entries().to_vec().into_boxed_slice())
                    .collect();
                let (slow, complete, _) = run_closure(&repr, seeds, 1 << 12, None);
                assert!(complete);
                let mut slow: Vec<Vec<u8>> = slow.into_iter().map(|b| b.into_vec()).collect();
                slow.sort();
                assert_eq!(entries(&fast), slow, "groupoid {i} k={k}");
            }
        }
    }

    #[test]
    fn plane_and_byte_paths_agree() {
        for g in crate::corpus::seeded_groupoids(3, 6, 11).unwrap() {
            for (k, budget) in [(1, 1 << 12), (2, 1 << 12), (3, 200)] {
                let fast = generate_clone(&g, k, budget).unwrap();
                let points = 3usize.pow(k as u32);
                let ops: Vec<&FunctionTable> = g.ops().iter().map(|o| &o.table).collect();
                let repr = ByteRepr::new(3, points, &ops);
                let seeds = (0..k)
                    .map(|j| FunctionTable::projection(3, k, j).unwrap().entries().to_vec().into_boxed_slice())
                    .collect();
                let (slow, complete, _) = run_closure(&repr, seeds, budget, function_count(3, k));
                assert_eq!(complete, fast.is_complete());
                let mut slow: Vec<Vec<u8>> = slow.into_iter().map(|b| b.into_vec()).collect();
                slow.sort();
                assert_eq!(entries(&fast), slow, "{} k={k}", g.name());
            }
        }
    }

    #[test]
    fn reclosure_adds_nothing() {
        let b = builtin("boolean2").unwrap();
        let c = generate_clone(&b, 2, 1 << 10).unwrap();
        let ops: Vec<&FunctionTable> = b.ops().iter().filter(|o| o.arity() > 0).map(|o| &o.table).collect();
        let again = close_tables(2, 2, &ops, c.tables().to_vec(), 1 << 10).unwrap();
        assert_eq!(again.tables(), c.tables());
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let g = builtin("groupoid2:13").unwrap();
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let two = rayon::ThreadPoolBuilder::new().num_threads(2).build().unwrap();
        let a = one.install(|| generate_clone(&g, 3, 40).unwrap());
        let b = two.install(|| generate_clone(&g, 3, 40).unwrap());
        assert_eq!(a.tables(), b.tables());
    }
}
