//! Small finite lattices: construction from an order, enumeration up to
//! isomorphism, and the `x ∧ y = 0` count used by the six-element search.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::rational::ExactRational;

/// Largest size [`enumerate_lattices`] accepts (the order matrix fits a `u64`).
pub const MAX_ENUMERATION_SIZE: usize = 8;

/// A finite lattice with join and meet tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    size: usize,
    leq: Vec<bool>,
    join: Vec<u8>,
    meet: Vec<u8>,
}

/// Reflexive-transitive closure of `covers` as an `n x n` matrix.
pub fn order_from_covers(size: usize, covers: &[(usize, usize)]) -> Vec<bool> {
    let mut leq = vec![false; size * size];
    for x in 0..size {
        leq[x * size + x] = true;
    }
    for &(a, b) in covers {
        leq[a * size + b] = true;
    }
    for k in 0..size {
        for i in 0..size {
            if leq[i * size + k] {
                for j in 0..size {
                    if leq[k * size + j] {
                        leq[i * size + j] = true;
                    }
                }
            }
        }
    }
    leq
}

fn is_partial_order(size: usize, leq: &[bool]) -> bool {
    for x in 0..size {
        if !leq[x * size + x] {
            return false;
        }
        for y in 0..size {
            if x != y && leq[x * size + y] && leq[y * size + x] {
                return false;
            }
            if leq[x * size + y] && (0..size).any(|z| leq[y * size + z] && !leq[x * size + z]) {
                return false;
            }
        }
    }
    true
}

impl Lattice {
    /// `None` if `leq` is not a partial order in which every pair has a join and a meet.
    pub fn from_order(leq: Vec<bool>) -> Option<Self> {
        let size = (leq.len() as f64).sqrt() as usize;
        if size == 0 || size * size != leq.len() || !is_partial_order(size, &leq) {
            return None;
        }
        let le = |a: usize, b: usize| leq[a * size + b];
        let mut join = vec![0u8; size * size];
        let mut meet = vec![0u8; size * size];
        for x in 0..size {
            for y in 0..size {
                let ub: Vec<usize> = (0..size).filter(|&u| le(x, u) && le(y, u)).collect();
                let j = ub.iter().copied().find(|&u| ub.iter().all(|&v| le(u, v)))?;
                let lb: Vec<usize> = (0..size).filter(|&l| le(l, x) && le(l, y)).collect();
                let m = lb.iter().copied().find(|&l| lb.iter().all(|&v| le(v, l)))?;
                join[x * size + y] = j as u8;
                meet[x * size + y] = m as u8;
            }
        }
        Some(Lattice { size, leq, join, meet })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size + b] as usize
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size + b] as usize
    }

    pub fn bottom(&self) -> usize {
        (0..self.size).find(|&b| (0..self.size).all(|x| self.leq(b, x))).expect("finite lattice")
    }

    pub fn top(&self) -> usize {
        (0..self.size).find(|&t| (0..self.size).all(|x| self.leq(x, t))).expect("finite lattice")
    }

    /// Pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.size;
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b
                    && self.leq(a, b)
                    && !(0..n).any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b))
                {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Hasse diagram as `a<b` cover pairs.
    pub fn hasse(&self) -> String {
        let mut s = String::new();
        for (i, (a, b)) in self.covers().into_iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{a}<{b}");
        }
        s
    }

    /// Whether the lattice is distributive.
    pub fn is_distributive(&self) -> bool {
        let n = self.size;
        (0..n).all(|x| {
            (0..n).all(|y| (0..n).all(|z| self.meet(x, self.join(y, z)) == self.join(self.meet(x, y), self.meet(x, z))))
        })
    }

    /// Number of pairs `(x, y)` with `x ∧ y` equal to the bottom.
    pub fn meet_zero_count(&self) -> usize {
        let b = self.bottom();
        self.meet.iter().filter(|&&m| m as usize == b).count()
    }

    /// `Pr(x ∧ y ≈ 0)`.
    pub fn meet_zero_probability(&self) -> ExactRational {
        ExactRational::from_counts(self.meet_zero_count() as u64, (self.size * self.size) as u64)
    }

    /// The lattice as an algebra with `join meet zero one`.
    pub fn to_algebra(&self, name: &str) -> Result<FiniteAlgebra> {
        FiniteAlgebra::from_tables(
            name,
            self.size,
            [
                ("join", 2, self.join.clone()),
                ("meet", 2, self.meet.clone()),
                ("zero", 0, vec![self.bottom() as u8]),
                ("one", 0, vec![self.top() as u8]),
            ],
        )
    }

    /// The order matrix relabelled by `perm` (`perm[old] = new`).
    fn relabel(&self, perm: &[usize]) -> Vec<bool> {
        let n = self.size;
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[perm[a] * n + perm[b]] = self.leq(a, b);
            }
        }
        leq
    }
}

fn order_code(leq: &[bool]) -> u64 {
    leq.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
}

fn is_natural(size: usize, leq: &[bool]) -> bool {
    (0..size).all(|a| (0..a).all(|b| !leq[a * size + b]))
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let first = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, first);
            out.push(p);
        }
    }
    out
}

/// All lattices with `size` elements up to isomorphism.
///
/// Each representative is labelled by a linear extension (so `a ≤ b` implies
/// `a <= b` numerically, bottom `0`, top `size - 1`), chosen to minimise the
/// order matrix read as a bit string. The list is sorted by that code, which
/// makes indices stable.
pub fn enumerate_lattices(size: usize) -> Vec<Lattice> {
    assert!(
        (1..=MAX_ENUMERATION_SIZE).contains(&size),
        "lattice enumeration supports sizes 1..={MAX_ENUMERATION_SIZE}"
    );
    if size == 1 {
        return vec![Lattice::from_order(vec![true]).expect("one point")];
    }
    let top = size - 1;
    let inner: Vec<usize> = (1..top).collect();
    let pairs: Vec<(usize, usize)> = inner
        .iter()
        .flat_map(|&i| inner.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
        .collect();
    let perms = permutations(&inner);
    let mut found: BTreeMap<u64, Lattice> = BTreeMap::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let mut leq = vec![false; size * size];
        for x in 0..size {
            leq[x * size + x] = true;
            leq[x] = true;
            leq[x * size + top] = true;
        }
        for (bit, &(i, j)) in pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                leq[i * size + j] = true;
            }
        }
        let Some(l) = Lattice::from_order(leq) else { continue };
        let mut best: Option<Vec<bool>> = None;
        for p in &perms {
            let mut full = vec![0usize; size];
            full[top] = top;
            for (old, &new) in inner.iter().zip(p) {
                full[*old] = new;
            }
            let relabelled = l.relabel(&full);
            if !is_natural(size, &relabelled) {
                continue;
            }
            if best.as_ref().is_none_or(|b| order_code(&relabelled) < order_code(b)) {
                best = Some(relabelled);
            }
        }
        let best = best.expect("identity labelling is natural");
        let code = order_code(&best);
        found
            .entry(code)
            .or_insert_with(|| Lattice::from_order(best).expect("isomorphic to a lattice"));
    }
    found.into_values().collect()
}

/// One lattice in a search result.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct LatticeHit {
    pub index: usize,
    pub hasse: String,
    pub distributive: bool,
    pub meet_zero: ExactRational,
}

/// Every lattice of `size` elements with its `Pr(x ∧ y ≈ 0)`.
pub fn meet_zero_table(size: usize) -> Result<Vec<LatticeHit>> {
    if !(1..=MAX_ENUMERATION_SIZE).contains(&size) {
        return Err(Error::Domain(format!(
            "lattice search supports sizes 1..={MAX_ENUMERATION_SIZE}, got {size}"
        )));
    }
    Ok(enumerate_lattices(size)
        .iter()
        .enumerate()
        .map(|(index, l)| LatticeHit {
            index,
            hasse: l.hasse(),
            distributive: l.is_distributive(),
            meet_zero: l.meet_zero_probability(),
        })
        .collect())
}

/// The lattices of `size` elements whose `Pr(x ∧ y ≈ 0)` equals `target`.
pub fn search_meet_zero(size: usize, target: &ExactRational) -> Result<Vec<LatticeHit>> {
    Ok(meet_zero_table(size)?
        .into_iter()
        .filter(|h| &h.meet_zero == target)
        .collect())
}
