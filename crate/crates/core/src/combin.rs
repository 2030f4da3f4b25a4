//! Small combinatorics helpers shared by slice expansion and the oracles.

use crate::error::{FbasError, Result};

/// `n choose k` without overflow for the sizes used here (saturates).
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// All `k`-element subsets of `items`, in lexicographic order of positions.
pub fn k_subsets<T: Clone>(items: &[T], k: usize) -> Result<Vec<Vec<T>>> {
    if k > items.len() {
        return Err(FbasError::KTooLarge { k, len: items.len() });
    }
    let mut out = Vec::with_capacity(binomial(items.len(), k).min(1 << 20) as usize);
    for_each_combination(items.len(), k, |idx| {
        out.push(idx.iter().map(|&i| items[i].clone()).collect());
    });
    Ok(out)
}

/// Calls `f` with every increasing index vector of length `k` over `0..n`.
pub fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        // advance the rightmost index that still has room
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
