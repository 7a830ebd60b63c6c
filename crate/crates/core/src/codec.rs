//! Mixed-radix tuple codec.
//!
//! A tuple `(x_0, ..., x_{k-1})` over `{0, ..., n-1}` is stored at index
//! `sum x_i * n^(k-1-i)`; the leftmost component is the most significant
//! digit. Every table in the crate and on disk uses this order.

use crate::error::{Error, Result};

/// `n^k`, or `None` on overflow.
pub fn checked_points(n: usize, k: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..k {
        acc = acc.checked_mul(n)?;
    }
    Some(acc)
}

pub fn points(n: usize, k: usize) -> Result<usize> {
    checked_points(n, k).ok_or_else(|| Error::Domain(format!("{n}^{k} overflows")))
}

/// Index of `tuple` in `A^k` with `|A| = n`.
pub fn tuple_index(tuple: &[usize], n: usize) -> Result<usize> {
    let mut index: usize = 0;
    for (i, &x) in tuple.iter().enumerate() {
        if x >= n {
            return Err(Error::Domain(format!(
                "component {i} of tuple is {x}, not below {n}"
            )));
        }
        index = index
            .checked_mul(n)
            .and_then(|v| v.checked_add(x))
            .ok_or_else(|| Error::Domain("tuple index overflows".into()))?;
    }
    Ok(index)
}

/// Inverse of [`tuple_index`].
pub fn index_tuple(index: usize, k: usize, n: usize) -> Result<Vec<usize>> {
    let total = points(n, k)?;
    if index >= total {
        return Err(Error::Domain(format!("index {index} not below {n}^{k} = {total}")));
    }
    let mut tuple = vec![0; k];
    decode_into(index, n, &mut tuple);
    Ok(tuple)
}

/// Writes the digits of `index` into `out` without range checks.
#[inline]
pub(crate) fn decode_into(mut index: usize, n: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
}

/// Advances `tuple` to its successor in index order. Returns `false` after the last tuple.
#[inline]
pub(crate) fn increment(tuple: &mut [usize], n: usize) -> bool {
    for slot in tuple.iter_mut().rev() {
        *slot += 1;
        if *slot < n {
            return true;
        }
        *slot = 0;
    }
    false
}
