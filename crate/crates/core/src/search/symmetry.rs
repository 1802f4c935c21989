//! Orbit representatives of `r`-families of `t`-sets under permutations of the
//! ground set.
//!
//! A family `E_1..E_r` is summarised, for an ordering of its members, by the
//! ascending list of per-element signatures (bit `j` set iff the element lies
//! in the `j`-th member). Two families are isomorphic exactly when the minimum
//! of this list over all member orderings agrees, so that minimum is used as
//! the canonical code. Orderings are restricted to those that sort members by
//! an isomorphism-invariant key, which keeps the code exact while cutting the
//! number of orderings tried.

use std::collections::{BTreeMap, HashSet};

use crate::colex::ColexSubsets;

pub type CanonicalCode = Vec<u32>;

/// Default cap on member orderings examined while building representatives.
pub const DEFAULT_WORK_CAP: u64 = 50_000_000;

fn degrees(sets: &[u64]) -> [u8; 64] {
    let mut deg = [0u8; 64];
    for &s in sets {
        let mut rest = s;
        while rest != 0 {
            deg[rest.trailing_zeros() as usize] += 1;
            rest &= rest - 1;
        }
    }
    deg
}

/// Invariant of a member inside its family: the sorted degrees of its elements
/// followed by the sorted sizes of its intersections with the other members.
fn member_key(sets: &[u64], i: usize, deg: &[u8; 64]) -> Vec<u32> {
    let mut d: Vec<u32> = Vec::new();
    let mut rest = sets[i];
    while rest != 0 {
        d.push(deg[rest.trailing_zeros() as usize] as u32);
        rest &= rest - 1;
    }
    d.sort_unstable();
    let mut meets: Vec<u32> = sets
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &o)| (o & sets[i]).count_ones())
        .collect();
    meets.sort_unstable();
    d.push(u32::MAX);
    d.extend(meets);
    d
}

fn code_for(sets: &[u64], order: &[usize]) -> CanonicalCode {
    let support = sets.iter().fold(0u64, |a, &s| a | s);
    let mut sig = Vec::with_capacity(support.count_ones() as usize);
    let mut rest = support;
    while rest != 0 {
        let e = rest.trailing_zeros();
        rest &= rest - 1;
        let mut s = 0u32;
        for (pos, &i) in order.iter().enumerate() {
            if sets[i] >> e & 1 == 1 {
                s |= 1 << pos;
            }
        }
        sig.push(s);
    }
    sig.sort_unstable();
    sig
}

/// Visits every permutation of `items` (Heap's algorithm).
fn for_each_permutation(items: &mut [usize], f: &mut impl FnMut(&[usize])) {
    let n = items.len();
    let mut c = vec![0usize; n];
    f(items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            f(items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

fn factorial_capped(k: usize, cap: u64) -> u64 {
    (1..=k as u64)
        .try_fold(1u64, |acc, x| acc.checked_mul(x).filter(|v| *v <= cap))
        .unwrap_or(u64::MAX)
}

/// Canonical code of a family of distinct sets, or `None` when more than
/// `cap` member orderings would be needed. `work` accumulates orderings tried.
pub fn canonical_code(sets: &[u64], cap: u64, work: &mut u64) -> Option<CanonicalCode> {
    assert!(sets.len() <= 32, "signatures hold at most 32 members");
    let deg = degrees(sets);
    let mut groups: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
    for i in 0..sets.len() {
        groups.entry(member_key(sets, i, &deg)).or_default().push(i);
    }
    let mut groups: Vec<Vec<usize>> = groups.into_values().collect();
    let mut orderings = 1u64;
    for g in &groups {
        orderings = orderings.saturating_mul(factorial_capped(g.len(), cap));
        if orderings > cap {
            return None;
        }
    }
    *work += orderings;

    let mut best: Option<CanonicalCode> = None;
    let mut order = Vec::with_capacity(sets.len());
    permute_groups(&mut groups, 0, &mut order, &mut |order| {
        let code = code_for(sets, order);
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
    });
    best
}

fn permute_groups(
    groups: &mut [Vec<usize>],
    gi: usize,
    order: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if gi == groups.len() {
        f(order);
        return;
    }
    let mut g = groups[gi].clone();
    for_each_permutation(&mut g, &mut |perm| {
        let base = order.len();
        order.extend_from_slice(perm);
        permute_groups(groups, gi + 1, order, f);
        order.truncate(base);
    });
}

/// The family whose code is `code`, placed on elements `1..=support`.
pub fn realize(code: &[u32], members: usize) -> Vec<u64> {
    let mut sets = vec![0u64; members];
    for (e, &sig) in code.iter().enumerate() {
        for (j, s) in sets.iter_mut().enumerate() {
            if sig >> j & 1 == 1 {
                *s |= 1u64 << e;
            }
        }
    }
    sets.sort_unstable();
    sets
}

/// One family per isomorphism class of `r`-families of distinct `t`-subsets
/// of `[n]`, each placed on the lowest elements. `None` when the work cap is
/// exceeded.
pub fn orbit_representatives(n: u32, t: u32, r: usize, cap: u64) -> Option<Vec<Vec<u64>>> {
    if r == 0 || r > 32 || t > n {
        return None;
    }
    let pool: Vec<u64> = ColexSubsets::new(n, t).collect();
    if pool.len() < r {
        return Some(Vec::new());
    }
    let mut work = 0u64;
    let mut reps: Vec<Vec<u64>> = vec![vec![pool[0]]];
    for size in 2..=r {
        let mut seen: HashSet<CanonicalCode> = HashSet::new();
        let mut next = Vec::new();
        for rep in &reps {
            for &c in &pool {
                if rep.contains(&c) {
                    continue;
                }
                let mut fam = rep.clone();
                fam.push(c);
                let code = canonical_code(&fam, cap, &mut work)?;
                if work > cap {
                    return None;
                }
                if seen.insert(code.clone()) {
                    next.push(code);
                }
            }
        }
        next.sort_unstable();
        reps = next.iter().map(|code| realize(code, size)).collect();
    }
    Some(reps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(sets: &[u64]) -> CanonicalCode {
        canonical_code(sets, u64::MAX, &mut 0).unwrap()
    }

    #[test]
    fn isomorphic_families_share_codes() {
        // path 1-2-3 vs path 4-1-3
        assert_eq!(code(&[0b011, 0b110]), code(&[0b1001, 0b0101]));
        // star vs triangle
        assert_ne!(
            code(&[0b0011, 0b0101, 0b1001]),
            code(&[0b011, 0b101, 0b110])
        );
    }

    #[test]
    fn realize_round_trips() {
        let fam = [0b0011_0000u64, 0b0101_0000, 0b0000_0011];
        let c = code(&fam);
        let r = realize(&c, fam.len());
        assert_eq!(code(&r), c);
        assert!(r.iter().all(|s| s.count_ones() == 2));
    }

    #[test]
    fn single_sets_form_one_orbit() {
        assert_eq!(
            orbit_representatives(7, 3, 1, DEFAULT_WORK_CAP)
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn two_edge_graphs() {
        // two edges: sharing a vertex or disjoint
        assert_eq!(
            orbit_representatives(6, 2, 2, DEFAULT_WORK_CAP)
                .unwrap()
                .len(),
            2
        );
        // on 3 vertices disjoint edges do not fit
        assert_eq!(
            orbit_representatives(3, 2, 2, DEFAULT_WORK_CAP)
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn cap_is_honoured() {
        assert!(orbit_representatives(24, 2, 12, 1000).is_none());
    }
}
