//! Oracles written straight from the definitions, sharing no code with the
//! library.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

/// For every antichain of `2^[n]`, keyed by its set of occurring levels (bit
/// `t` for level `t`), the largest smallest-level count seen. An exact
/// profile `(n, r, T)` is feasible iff `best[T] >= r`, since dropping
/// members never breaks the antichain property.
pub fn best_min_count_by_profile(n: u32) -> HashMap<u64, usize> {
    assert!(n <= 6, "2^[n] must fit in one word of subset indices");
    let total = 1usize << n;
    // comparable[s] has bit c set when c ⊆ s or s ⊆ c
    let comparable: Vec<u64> = (0..total)
        .map(|s| {
            (0..total)
                .filter(|&c| c & s == c || c & s == s)
                .fold(0u64, |acc, c| acc | 1u64 << c)
        })
        .collect();
    let mut best = HashMap::new();
    let mut counts = vec![0usize; n as usize + 1];
    let all = if total == 64 {
        u64::MAX
    } else {
        (1u64 << total) - 1
    };
    walk(&comparable, all, &mut counts, &mut best);
    best
}

fn walk(comparable: &[u64], allowed: u64, counts: &mut [usize], best: &mut HashMap<u64, usize>) {
    let mut mask = 0u64;
    let mut min = usize::MAX;
    for (t, &c) in counts.iter().enumerate() {
        if c > 0 {
            mask |= 1 << t;
            min = min.min(c);
        }
    }
    if mask != 0 {
        let e = best.entry(mask).or_insert(0);
        *e = (*e).max(min);
    }
    let mut rest = allowed;
    while rest != 0 {
        let s = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let size = (s as u64).count_ones() as usize;
        counts[size] += 1;
        walk(comparable, rest & !comparable[s], counts, best);
        counts[size] -= 1;
    }
}

/// Largest number of levels over antichains whose levels all hold at least
/// `r` members.
pub fn g_from_profiles(best: &HashMap<u64, usize>, r: usize) -> usize {
    best.iter()
        .filter(|&(_, &m)| m >= r)
        .map(|(&mask, _)| mask.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    heap(n, &mut p, &mut out);
    out
}

fn heap(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(p.clone());
        return;
    }
    for i in 0..k {
        heap(k - 1, p, out);
        if k.is_multiple_of(2) {
            p.swap(i, k - 1);
        } else {
            p.swap(0, k - 1);
        }
    }
}

fn apply(p: &[usize], s: u64) -> u64 {
    (0..p.len())
        .filter(|&i| s >> i & 1 == 1)
        .fold(0u64, |acc, i| acc | 1 << p[i])
}

/// Number of isomorphism classes of families of `r` distinct `t`-subsets of
/// `[n]` under all `n!` relabelings.
pub fn isomorphism_classes(n: usize, t: u32, r: usize) -> usize {
    let perms = permutations(n);
    let pool: Vec<u64> = (0..1u64 << n).filter(|s| s.count_ones() == t).collect();
    let mut classes: HashSet<Vec<u64>> = HashSet::new();
    let mut pick = Vec::new();
    choose(&pool, 0, r, &mut pick, &mut |fam| {
        let canon = perms
            .iter()
            .map(|p| {
                let mut img: Vec<u64> = fam.iter().map(|&s| apply(p, s)).collect();
                img.sort_unstable();
                img
            })
            .min()
            .unwrap();
        classes.insert(canon);
    });
    classes.len()
}

fn choose(pool: &[u64], from: usize, left: usize, pick: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
    if left == 0 {
        f(pick);
        return;
    }
    for i in from..pool.len() {
        pick.push(pool[i]);
        choose(pool, i + 1, left - 1, pick, f);
        pick.pop();
    }
}
