//! Bit-packed function tables.
//!
//! Each entry takes `ceil(log2 n)` bits (at least one). Entries are laid out
//! most-significant-first inside `u64` words and never straddle a word, so the
//! numeric order of the word sequence equals the lexicographic order of the
//! entries. Disagreements between two tables are counted by XOR-ing words,
//! folding every field onto its lowest bit and taking a popcount.

use smallvec::SmallVec;

use crate::codec;
use crate::error::Result;
use crate::table::FunctionTable;

/// Packed words of one table. Two inline words cover every shape up to 128 bits
/// (for instance `n = 3, k = 3` or `n = 2, k <= 7`).
pub type PackedKey = SmallVec<[u64; 2]>;

/// Geometry of the packed form of `k`-ary tables over `n` elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub size: usize,
    pub arity: usize,
    pub points: usize,
    pub bits: u32,
    pub per_word: usize,
    pub words: usize,
    field_mask: u64,
    low_mask: u64,
}

impl Layout {
    pub fn new(size: usize, arity: usize) -> Result<Self> {
        let points = codec::points(size, arity)?;
        let bits = bits_for(size);
        let per_word = (64 / bits) as usize;
        let words = points.div_ceil(per_word).max(1);
        let field_mask = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
        let mut low_mask = 0u64;
        for j in 0..per_word {
            low_mask |= 1u64 << (64 - (j as u32 + 1) * bits);
        }
        Ok(Layout {
            size,
            arity,
            points,
            bits,
            per_word,
            words,
            field_mask,
            low_mask,
        })
    }

    #[inline]
    fn shift(&self, slot: usize) -> u32 {
        64 - (slot as u32 + 1) * self.bits
    }

    #[inline]
    pub fn get(&self, words: &[u64], point: usize) -> usize {
        let w = words[point / self.per_word];
        ((w >> self.shift(point % self.per_word)) & self.field_mask) as usize
    }

    /// ORs `value` into the field of `point`; the field must be zero.
    #[inline]
    pub fn set(&self, words: &mut [u64], point: usize, value: usize) {
        words[point / self.per_word] |= (value as u64) << self.shift(point % self.per_word);
    }

    pub fn pack_entries(&self, entries: &[u8]) -> PackedKey {
        let mut out: PackedKey = SmallVec::from_elem(0, self.words);
        for (p, &e) in entries.iter().enumerate() {
            self.set(&mut out, p, e as usize);
        }
        out
    }

    pub fn pack(&self, table: &FunctionTable) -> PackedKey {
        debug_assert_eq!(table.size(), self.size);
        debug_assert_eq!(table.arity(), self.arity);
        self.pack_entries(table.entries())
    }

    pub fn unpack(&self, words: &[u64]) -> FunctionTable {
        let entries = (0..self.points).map(|p| self.get(words, p) as u8).collect();
        FunctionTable::from_raw(self.size, self.arity, entries)
    }

    /// Packed form of the table whose entries are the base-`n` digits of
    /// `index` (entry 0 most significant). Index order is canonical order.
    pub fn from_index(&self, mut index: u128) -> PackedKey {
        let mut out: PackedKey = SmallVec::from_elem(0, self.words);
        let n = self.size as u128;
        for p in (0..self.points).rev() {
            self.set(&mut out, p, (index % n) as usize);
            index /= n;
        }
        out
    }

    /// Number of points where `a` and `b` disagree (Hamming distance).
    #[inline]
    pub fn mismatches(&self, a: &[u64], b: &[u64]) -> usize {
        if self.bits == 1 {
            a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones() as usize).sum()
        } else {
            a.iter()
                .zip(b)
                .map(|(x, y)| {
                    let d = x ^ y;
                    let mut acc = d;
                    for s in 1..self.bits {
                        acc |= d >> s;
                    }
                    (acc & self.low_mask).count_ones() as usize
                })
                .sum()
        }
    }

    /// The lowest bit of every field.
    pub fn low_mask(&self) -> u64 {
        self.low_mask
    }

    /// Mask of the valid bits of word `w` (the last word may be partial).
    pub fn valid_mask(&self, w: usize) -> u64 {
        let used = if w + 1 == self.words {
            self.points - w * self.per_word
        } else {
            self.per_word
        };
        let bits = used as u32 * self.bits;
        if bits >= 64 {
            u64::MAX
        } else {
            !(u64::MAX >> bits)
        }
    }
}

/// Bits per entry for a universe of `n` elements.
pub fn bits_for(n: usize) -> u32 {
    if n <= 2 {
        1
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// Many tables of one shape packed contiguously.
#[derive(Debug, Clone)]
pub struct PackedTables {
    layout: Layout,
    data: Vec<u64>,
}

impl PackedTables {
    pub fn new(layout: Layout) -> Self {
        PackedTables { layout, data: Vec::new() }
    }

    pub fn from_tables<'a>(layout: Layout, tables: impl IntoIterator<Item = &'a FunctionTable>) -> Self {
        let mut out = Self::new(layout);
        for t in tables {
            out.push(&layout.pack(t));
        }
        out
    }

    pub fn push(&mut self, words: &[u64]) {
        debug_assert_eq!(words.len(), self.layout.words);
        self.data.extend_from_slice(words);
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.layout.words
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// All words, table after table.
    pub fn words(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize) -> &[u64] {
        let w = self.layout.words;
        &self.data[i * w..(i + 1) * w]
    }

    #[inline]
    pub fn mismatches(&self, i: usize, j: usize) -> usize {
        self.layout.mismatches(self.get(i), self.get(j))
    }
}
