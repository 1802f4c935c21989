//! Exhaustive decision procedures over exact level profiles.
//!
//! The core question is: given `n`, `r` and a set of target sizes `T`, is
//! there an antichain on `[n]` with exactly `r` members on every level of `T`
//! and nothing elsewhere? [`feasible_exact_profile`] answers it by
//! backtracking; [`g_exact`] and [`certify_threshold_range`] are built on top.

mod certify;
mod engine;
mod gmax;
mod oracle;
pub mod symmetry;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{Family, GroundSize};

pub use certify::{
    certify_threshold_range, certify_threshold_range_with, CertifyEntry, CertifyStatus,
};
pub use gmax::{g_exact, g_exact_with, GmaxOutcome, GmaxReport};
pub use oracle::{brute_force_oracle, ORACLE_MAX_N, ORACLE_MAX_R};

/// Target: exactly `r` sets on each level in `levels`, none elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileInstance {
    pub n: GroundSize,
    pub r: usize,
    pub levels: Vec<usize>,
}

impl ProfileInstance {
    pub fn new(n: u32, r: usize, levels: impl IntoIterator<Item = usize>) -> Result<Self> {
        let ground = GroundSize::new(n).map_err(|e| Error::InvalidInstance(e.to_string()))?;
        if r == 0 {
            return Err(Error::InvalidInstance("r must be positive".into()));
        }
        let mut levels: Vec<usize> = levels.into_iter().collect();
        levels.sort_unstable();
        levels.dedup();
        if let Some(&t) = levels.iter().find(|&&t| t > n as usize) {
            return Err(Error::InvalidInstance(format!("level {t} exceeds n = {n}")));
        }
        Ok(ProfileInstance {
            n: ground,
            r,
            levels,
        })
    }

    /// The instance on the reflected levels `{n - t}`.
    pub fn reflected(&self) -> ProfileInstance {
        let n = self.n.get() as usize;
        let mut levels: Vec<usize> = self.levels.iter().map(|&t| n - t).collect();
        levels.sort_unstable();
        ProfileInstance {
            n: self.n,
            r: self.r,
            levels,
        }
    }
}

/// Resource limits for one search. `None` means unlimited.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: Option<u64>,
    pub wall_time: Option<Duration>,
    pub threads: usize,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget {
            max_nodes: None,
            wall_time: None,
            threads: 1,
        }
    }

    pub fn seconds(secs: u64) -> Self {
        SearchBudget {
            wall_time: Some(Duration::from_secs(secs)),
            ..Self::unlimited()
        }
    }

    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes: Some(max_nodes),
            ..Self::unlimited()
        }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub(crate) fn deadline_from(&self, start: Instant) -> Option<Instant> {
        self.wall_time.map(|d| start + d)
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self::unlimited()
    }
}

/// Switches for the pruning rules. Turning any of them off never changes a
/// verdict, only the work done.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    /// Restrict the first processed level to orbit representatives.
    pub symmetry: bool,
    /// Backtrack as soon as some unfilled level has too few compatible
    /// candidates left.
    pub forward_check: bool,
    /// Store levels above `n/2` by their complements.
    pub complement_encoding: bool,
    /// Abandon instances whose candidate pools together exceed this many sets.
    pub max_pool_total: usize,
    /// Cap on member orderings examined when computing orbit representatives;
    /// beyond it only the first member of the first level is fixed.
    pub symmetry_work_cap: u64,
}

pub const DEFAULT_MAX_POOL_TOTAL: usize = 1 << 24;

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            symmetry: true,
            forward_check: true,
            complement_encoding: true,
            max_pool_total: DEFAULT_MAX_POOL_TOTAL,
            symmetry_work_cap: symmetry::DEFAULT_WORK_CAP,
        }
    }
}

pub fn symmetry_prune_config(enable: bool) -> SearchConfig {
    SearchConfig {
        symmetry: enable,
        ..SearchConfig::default()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Feasible,
    Infeasible,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Feasible(Family),
    /// The search space was exhausted.
    Infeasible,
    /// The budget ran out first.
    Unknown,
}

impl Outcome {
    pub fn verdict(&self) -> Verdict {
        match self {
            Outcome::Feasible(_) => Verdict::Feasible,
            Outcome::Infeasible => Verdict::Infeasible,
            Outcome::Unknown => Verdict::Unknown,
        }
    }

    pub fn witness(&self) -> Option<&Family> {
        match self {
            Outcome::Feasible(f) => Some(f),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Attempted set placements.
    pub nodes: u64,
    pub max_depth: usize,
    pub prunes: BTreeMap<String, u64>,
    pub first_level_branches: u64,
    pub elapsed_ms: u64,
    pub threads: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SearchStats {
    pub(crate) fn absorb(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.max_depth = self.max_depth.max(other.max_depth);
        for (k, v) in &other.prunes {
            *self.prunes.entry(k.clone()).or_insert(0) += v;
        }
        self.first_level_branches += other.first_level_branches;
        self.elapsed_ms += other.elapsed_ms;
        self.threads = self.threads.max(other.threads);
        if other.note.is_some() {
            self.note.clone_from(&other.note);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub outcome: Outcome,
    pub stats: SearchStats,
}

impl SearchOutcome {
    pub fn verdict(&self) -> Verdict {
        self.outcome.verdict()
    }
}

/// Decides an exact-profile instance with the default configuration.
pub fn feasible_exact_profile(inst: &ProfileInstance, budget: &SearchBudget) -> SearchOutcome {
    feasible_exact_profile_with(inst, budget, &SearchConfig::default())
}

pub fn feasible_exact_profile_with(
    inst: &ProfileInstance,
    budget: &SearchBudget,
    config: &SearchConfig,
) -> SearchOutcome {
    let out = engine::run(inst, budget, config);
    if let Outcome::Feasible(w) = &out.outcome {
        assert!(
            witness_matches(inst, w),
            "search produced an invalid witness {w} for {inst:?}"
        );
    }
    out
}

/// Antichain with exactly `r` members on each target level and no others.
pub fn witness_matches(inst: &ProfileInstance, w: &Family) -> bool {
    let p = w.level_profile();
    w.ground() == inst.n
        && p.occurring() == inst.levels
        && p.counts().values().all(|&c| c == inst.r)
        && w.is_antichain()
}

/// Parses level lists such as `2..6,8`: comma-separated sizes or inclusive
/// ranges. The result is sorted and deduplicated.
pub fn parse_level_spec(spec: &str) -> Result<Vec<usize>> {
    let err = |reason: String| Error::Parse { line: 1, reason };
    let num = |s: &str| -> Result<usize> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || s.len() > 6 {
            return Err(err(format!("bad level {s:?}")));
        }
        s.parse().map_err(|_| err(format!("bad level {s:?}")))
    };
    let mut out = Vec::new();
    for item in spec.split(',') {
        match item.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(err(format!("empty range {a}..{b}")));
                }
                if b - a > 64 {
                    return Err(err(format!("range {a}..{b} too long")));
                }
                out.extend(a..=b);
            }
            None => out.push(num(item)?),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_spec_parsing() {
        assert_eq!(parse_level_spec("2..6").unwrap(), vec![2, 3, 4, 5, 6]);
        assert_eq!(parse_level_spec("2..4,8").unwrap(), vec![2, 3, 4, 8]);
        assert_eq!(parse_level_spec("5,1,5").unwrap(), vec![1, 5]);
        for bad in ["", "a", "3..", "..3", "4..2", "1,,2", "-1", "1..2..3", " 1"] {
            assert!(parse_level_spec(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn instance_validation() {
        assert!(ProfileInstance::new(8, 3, [2, 9]).is_err());
        assert!(ProfileInstance::new(8, 0, [2]).is_err());
        assert!(ProfileInstance::new(0, 1, [0]).is_err());
        let i = ProfileInstance::new(8, 3, [6, 2, 2]).unwrap();
        assert_eq!(i.levels, vec![2, 6]);
        assert_eq!(i.reflected().levels, vec![2, 6]);
    }
}
