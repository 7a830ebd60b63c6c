//! Automorphisms, fixed points, orbits of `A^k` under the componentwise action,
//! and subset sums of orbit sizes.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::codec;
use crate::error::{Error, Result};
use crate::rational::ExactRational;

/// Largest universe searched by [`automorphism_group`] (`9! = 362880` candidates).
pub const MAX_AUTOMORPHISM_SIZE: usize = 9;

/// Largest `n^k` accepted by [`orbit_partition`].
pub const MAX_ORBIT_POINTS: usize = 1 << 24;

/// Every automorphism, listed in lexicographic order (identity first).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AutomorphismGroup {
    size: usize,
    elements: Vec<Vec<usize>>,
    fixed_points: Vec<usize>,
}

impl AutomorphismGroup {
    /// Builds the group from a full list of permutations. The list is sorted;
    /// closure is not checked here, see [`AutomorphismGroup::is_group`].
    pub fn from_elements(size: usize, mut elements: Vec<Vec<usize>>) -> Result<Self> {
        for p in &elements {
            let mut seen = vec![false; size];
            if p.len() != size || p.iter().any(|&x| x >= size || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::Domain(format!("{p:?} is not a permutation of {size} points")));
            }
        }
        elements.sort();
        elements.dedup();
        let fixed_points = (0..size).filter(|&x| elements.iter().all(|p| p[x] == x)).collect();
        Ok(AutomorphismGroup {
            size,
            elements,
            fixed_points,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    /// `Fix(A)`: points fixed by every automorphism.
    pub fn fixed_points(&self) -> &[usize] {
        &self.fixed_points
    }

    /// Contains the identity and is closed under composition and inverses.
    pub fn is_group(&self) -> bool {
        let n = self.size;
        let id: Vec<usize> = (0..n).collect();
        let has = |p: &Vec<usize>| self.elements.binary_search(p).is_ok();
        has(&id)
            && self.elements.iter().all(|g| {
                let mut inv = vec![0; n];
                for (x, &y) in g.iter().enumerate() {
                    inv[y] = x;
                }
                has(&inv) && self.elements.iter().all(|h| has(&(0..n).map(|x| g[h[x]]).collect()))
            })
    }

    /// Index of `g` applied componentwise to the tuple at `index`.
    #[inline]
    fn act(&self, g: usize, index: usize, k: usize, digits: &mut [usize]) -> usize {
        let n = self.size;
        codec::decode_into(index, n, &mut digits[..k]);
        let p = &self.elements[g];
        digits[..k].iter().fold(0usize, |acc, &d| acc * n + p[d])
    }
}

/// Whether the permutation `p` commutes with every basic operation.
pub fn is_automorphism(algebra: &FiniteAlgebra, p: &[usize]) -> bool {
    let n = algebra.size();
    algebra.ops().iter().all(|op| {
        let m = op.arity();
        let mut tuple = vec![0usize; m];
        for i in 0..op.table.len() {
            let image = tuple.iter().fold(0usize, |acc, &x| acc * n + p[x]);
            if p[op.table.at(i)] != op.table.at(image) {
                return false;
            }
            codec::increment(&mut tuple, n);
        }
        true
    })
}

/// Lexicographic successor of a permutation; `false` after the last one.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// `Aut(A)` by testing all `n!` permutations.
pub fn automorphism_group(algebra: &FiniteAlgebra) -> Result<AutomorphismGroup> {
    let n = algebra.size();
    if n > MAX_AUTOMORPHISM_SIZE {
        return Err(Error::budget(
            format!("automorphism search over {n} elements"),
            format!("{n}! permutations"),
            format!("{MAX_AUTOMORPHISM_SIZE}! permutations"),
        ));
    }
    let pinned: Vec<usize> = algebra
        .ops()
        .iter()
        .filter(|o| o.arity() == 0)
        .map(|o| o.table.at(0))
        .collect();
    let elements: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut rest: Vec<usize> = (0..n).filter(|&x| x != first).collect();
            let mut found = Vec::new();
            loop {
                let mut p = Vec::with_capacity(n);
                p.push(first);
                p.extend_from_slice(&rest);
                if pinned.iter().all(|&c| p[c] == c) && is_automorphism(algebra, &p) {
                    found.push(p);
                }
                if !next_permutation(&mut rest) {
                    break;
                }
            }
            found
        })
        .collect();
    let group = AutomorphismGroup::from_elements(n, elements)?;
    debug_assert!(group.is_group());
    Ok(group)
}

/// One orbit of `A^k`, keyed by its least tuple index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub representative: usize,
    pub size: usize,
}

/// Orbits of the componentwise action of `Aut(A)` on `A^k`.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitPartition {
    pub arity: usize,
    pub orbits: Vec<Orbit>,
    pub total: usize,
    /// Orbit number of every point.
    #[serde(skip)]
    orbit_of: Vec<u32>,
    /// For every point, a group element carrying its orbit's representative to it.
    #[serde(skip)]
    carrier: Vec<u32>,
}

impl OrbitPartition {
    /// Orbit sizes in representative order.
    pub fn sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o.size).collect()
    }

    /// Orbit sizes in ascending order (the vector `ℓ`).
    pub fn sorted_sizes(&self) -> Vec<usize> {
        let mut s = self.sizes();
        s.sort_unstable();
        s
    }

    pub fn orbit_of(&self, point: usize) -> usize {
        self.orbit_of[point] as usize
    }

    /// Index into the group's element list of an element mapping the
    /// representative of `point`'s orbit onto `point`.
    pub fn carrier(&self, point: usize) -> usize {
        self.carrier[point] as usize
    }
}

/// Orbits of `A^k`; representatives are least indices, listed ascending.
pub fn orbit_partition(group: &AutomorphismGroup, k: usize) -> Result<OrbitPartition> {
    let total = codec::points(group.size(), k)?;
    if total > MAX_ORBIT_POINTS {
        return Err(Error::budget("orbit partition", format!("{total} points"), format!("{MAX_ORBIT_POINTS} points")));
    }
    let mut orbit_of = vec![u32::MAX; total];
    let mut carrier = vec![0u32; total];
    let mut orbits = Vec::new();
    let mut digits = vec![0usize; k];
    for start in 0..total {
        if orbit_of[start] != u32::MAX {
            continue;
        }
        let id = orbits.len() as u32;
        let mut size = 0;
        for g in 0..group.order() {
            let image = group.act(g, start, k, &mut digits);
            if orbit_of[image] == u32::MAX {
                orbit_of[image] = id;
                carrier[image] = g as u32;
                size += 1;
            }
        }
        orbits.push(Orbit {
            representative: start,
            size,
        });
    }
    Ok(OrbitPartition {
        arity: k,
        orbits,
        total,
        orbit_of,
        carrier,
    })
}

/// All subset sums of `sizes` divided by `denominator`, ascending.
pub fn sigma_subset_sums(sizes: &[usize], denominator: usize) -> Result<Vec<ExactRational>> {
    let sum: usize = sizes.iter().sum();
    if sum != denominator || denominator == 0 {
        return Err(Error::Shape(format!(
            "orbit sizes sum to {sum}, expected a positive denominator {denominator}"
        )));
    }
    let words = denominator / 64 + 1;
    let mut reach = vec![0u64; words];
    reach[0] = 1;
    for &s in sizes {
        let (ws, bs) = (s / 64, (s % 64) as u32);
        for w in (0..words).rev() {
            let mut shifted = 0u64;
            if w >= ws {
                shifted = reach[w - ws] << bs;
                if bs > 0 && w > ws {
                    shifted |= reach[w - ws - 1] >> (64 - bs);
                }
            }
            reach[w] |= shifted;
        }
    }
    Ok((0..=denominator)
        .filter(|&d| reach[d / 64] >> (d % 64) & 1 == 1)
        .map(|d| ExactRational::from_counts(d as u64, denominator as u64))
        .collect())
}

/// `Σ°(ℓ(A^k / Aut(A))) / n^k`.
pub fn orbit_bound_at(algebra: &FiniteAlgebra, k: usize) -> Result<Vec<ExactRational>> {
    let group = automorphism_group(algebra)?;
    let partition = orbit_partition(&group, k)?;
    sigma_subset_sums(&partition.sizes(), partition.total)
}
