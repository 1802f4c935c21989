use std::time::Instant;

use crate::bounds::level_cap;
use crate::colex::ColexSubsets;
use crate::family::{Family, GroundSize};

use super::{
    feasible_exact_profile_with, Outcome, ProfileInstance, SearchBudget, SearchConfig, SearchStats,
};

/// Result of maximising the number of occurring levels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GmaxOutcome {
    /// Every larger level count was refuted.
    Exact { value: usize, witness: Family },
    /// Found `value`, but some larger count in `value+1..=upper` is unresolved.
    LowerBound {
        value: usize,
        witness: Family,
        upper: usize,
    },
    /// Budget ran out before any witness; the true value lies in `lo..=hi`.
    Interval { lo: usize, hi: usize },
}

impl GmaxOutcome {
    pub fn witness(&self) -> Option<&Family> {
        match self {
            GmaxOutcome::Exact { witness, .. } | GmaxOutcome::LowerBound { witness, .. } => {
                Some(witness)
            }
            GmaxOutcome::Interval { .. } => None,
        }
    }

    /// `(lo, hi)` bounds on the true maximum.
    pub fn range(&self) -> (usize, usize) {
        match *self {
            GmaxOutcome::Exact { value, .. } => (value, value),
            GmaxOutcome::LowerBound { value, upper, .. } => (value, upper),
            GmaxOutcome::Interval { lo, hi } => (lo, hi),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GmaxReport {
    pub outcome: GmaxOutcome,
    pub stats: SearchStats,
    /// Exact-profile instances decided along the way.
    pub instances: u64,
}

/// Sizes worth considering. Levels `0` and `n` hold a single set, which is
/// comparable with every other subset, so they only matter for `n = 1`.
fn candidate_levels(n: u32, r: usize) -> Vec<usize> {
    match (n, r) {
        (1, 1) => vec![0, 1],
        _ => (1..n as usize).collect(),
    }
}

pub fn g_exact(n: u32, r: usize, budget: &SearchBudget) -> GmaxReport {
    g_exact_with(n, r, budget, &SearchConfig::default())
}

/// Maximum number of occurring levels over `r`-multiplicity antichains on
/// `[n]`, by deciding exact-profile instances from the largest admissible
/// level count downwards. Level sets need not be contiguous.
pub fn g_exact_with(n: u32, r: usize, budget: &SearchBudget, config: &SearchConfig) -> GmaxReport {
    let ground = GroundSize::new(n).expect("g_exact needs 1 <= n <= 64");
    assert!(r >= 1, "g_exact needs r >= 1");
    let start = Instant::now();
    let deadline = budget.deadline_from(start);
    let candidates = candidate_levels(n, r);
    let hi = (level_cap(n, r as u32) as usize).min(candidates.len());

    let mut stats = SearchStats::default();
    let mut instances = 0u64;
    let mut unresolved_top: Option<usize> = None;

    let finish = |outcome, mut stats: SearchStats, instances| {
        stats.elapsed_ms = start.elapsed().as_millis() as u64;
        stats.threads = budget.threads;
        GmaxReport {
            outcome,
            stats,
            instances,
        }
    };

    for s in (1..=hi).rev() {
        let mut all_refuted = true;
        for mask in ColexSubsets::new(candidates.len() as u32, s as u32) {
            let levels = (0..candidates.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| candidates[i]);
            let inst = ProfileInstance::new(n, r, levels).expect("levels lie in 0..=n");

            let remaining_time = match deadline {
                Some(d) => match d.checked_duration_since(Instant::now()) {
                    Some(left) if !left.is_zero() => Some(left),
                    _ => {
                        let top = unresolved_top.unwrap_or(s);
                        return finish(GmaxOutcome::Interval { lo: 0, hi: top }, stats, instances);
                    }
                },
                None => None,
            };
            let remaining_nodes = match budget.max_nodes {
                Some(m) if stats.nodes >= m => {
                    let top = unresolved_top.unwrap_or(s);
                    return finish(GmaxOutcome::Interval { lo: 0, hi: top }, stats, instances);
                }
                Some(m) => Some(m - stats.nodes),
                None => None,
            };
            let sub = SearchBudget {
                max_nodes: remaining_nodes,
                wall_time: remaining_time,
                threads: budget.threads,
            };
            let out = feasible_exact_profile_with(&inst, &sub, config);
            instances += 1;
            let mut sub_stats = out.stats;
            sub_stats.elapsed_ms = 0;
            stats.absorb(&sub_stats);
            match out.outcome {
                Outcome::Feasible(witness) => {
                    let outcome = match unresolved_top {
                        None => GmaxOutcome::Exact { value: s, witness },
                        Some(upper) => GmaxOutcome::LowerBound {
                            value: s,
                            witness,
                            upper,
                        },
                    };
                    return finish(outcome, stats, instances);
                }
                Outcome::Infeasible => {}
                Outcome::Unknown => all_refuted = false,
            }
        }
        if !all_refuted && unresolved_top.is_none() {
            unresolved_top = Some(s);
        }
    }
    let outcome = match unresolved_top {
        None => GmaxOutcome::Exact {
            value: 0,
            witness: Family::empty(ground),
        },
        Some(hi) => GmaxOutcome::Interval { lo: 0, hi },
    };
    finish(outcome, stats, instances)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(n: u32, r: usize) -> usize {
        match g_exact(n, r, &SearchBudget::unlimited()).outcome {
            GmaxOutcome::Exact { value, witness } => {
                assert!(witness.is_r_multiplicity_antichain(r));
                assert_eq!(witness.level_profile().num_levels(), value);
                value
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn small_values() {
        assert_eq!(value(3, 2), 1);
        assert_eq!(value(4, 2), 1);
        assert_eq!(value(5, 2), 2);
        assert_eq!(value(1, 1), 1);
        assert_eq!(value(1, 2), 0);
        assert_eq!(value(2, 2), 1);
        assert_eq!(value(4, 1), 2);
    }

    #[test]
    fn node_budget_gives_interval() {
        let rep = g_exact(8, 3, &SearchBudget::nodes(10));
        match rep.outcome {
            GmaxOutcome::Interval { lo, hi } => assert!(lo == 0 && hi == 5),
            GmaxOutcome::LowerBound { upper, .. } => assert_eq!(upper, 5),
            other => panic!("unexpected {other:?}"),
        }
    }
}
