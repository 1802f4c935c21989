//! Definition-level maximum of occurring levels, by enumerating every
//! antichain of `2^[n]`. Only for tiny ground sets; used as a test oracle.

use crate::error::{Error, Result};

pub const ORACLE_MAX_N: u32 = 5;
pub const ORACLE_MAX_R: usize = 3;

/// Exact `g(n, r)` by enumerating all antichains. No pruning beyond the
/// definition.
pub fn brute_force_oracle(n: u32, r: usize) -> Result<usize> {
    if n == 0 || n > ORACLE_MAX_N || r == 0 || r > ORACLE_MAX_R {
        return Err(Error::InstanceTooLarge(format!(
            "n = {n}, r = {r}; the oracle takes 1 <= n <= {ORACLE_MAX_N}, 1 <= r <= {ORACLE_MAX_R}"
        )));
    }
    // subsets by nondecreasing size, so a later subset never lies inside an
    // earlier one unless they are equal
    let mut subsets: Vec<u64> = (0..1u64 << n).collect();
    subsets.sort_by_key(|s| (s.count_ones(), *s));
    let mut chosen = Vec::new();
    let mut counts = vec![0usize; n as usize + 1];
    let mut best = 0;
    enumerate(&subsets, 0, &mut chosen, &mut counts, r, &mut best);
    Ok(best)
}

fn enumerate(
    subsets: &[u64],
    i: usize,
    chosen: &mut Vec<u64>,
    counts: &mut [usize],
    r: usize,
    best: &mut usize,
) {
    if i == subsets.len() {
        if counts.iter().all(|&c| c == 0 || c >= r) {
            *best = (*best).max(counts.iter().filter(|&&c| c > 0).count());
        }
        return;
    }
    enumerate(subsets, i + 1, chosen, counts, r, best);
    let s = subsets[i];
    if chosen.iter().all(|&c| c & !s != 0) {
        chosen.push(s);
        counts[s.count_ones() as usize] += 1;
        enumerate(subsets, i + 1, chosen, counts, r, best);
        counts[s.count_ones() as usize] -= 1;
        chosen.pop();
    }
}
