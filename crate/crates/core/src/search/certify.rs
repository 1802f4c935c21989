use crate::error::{Error, Result};
use crate::family::Family;

use super::gmax::{g_exact_with, GmaxOutcome};
use super::{
    feasible_exact_profile_with, Outcome, ProfileInstance, SearchBudget, SearchConfig, SearchStats,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertifyStatus {
    /// A verified family with `n - 3` occurring levels.
    Achieved(Family),
    /// `n - 3` levels are impossible; `best` is what the fallback found.
    Refuted {
        best: GmaxOutcome,
    },
    Unknown {
        best: Option<GmaxOutcome>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifyEntry {
    pub n: u32,
    pub status: CertifyStatus,
    pub stats: SearchStats,
}

/// For each `n` in `n_from..=n_to`, tries the contiguous profile `{2..n-2}`
/// first and falls back to the full maximisation when it is refuted.
pub fn certify_threshold_range(
    r: usize,
    n_from: u32,
    n_to: u32,
    budget: &SearchBudget,
) -> Result<Vec<CertifyEntry>> {
    certify_threshold_range_with(r, n_from, n_to, budget, &SearchConfig::default())
}

pub fn certify_threshold_range_with(
    r: usize,
    n_from: u32,
    n_to: u32,
    budget: &SearchBudget,
    config: &SearchConfig,
) -> Result<Vec<CertifyEntry>> {
    if r < 2 || n_from < 4 || n_from > n_to || n_to > 64 {
        return Err(Error::Domain(format!(
            "certification needs r >= 2 and 4 <= from <= to <= 64, got r = {r}, {n_from}..={n_to}"
        )));
    }
    Ok((n_from..=n_to)
        .map(|n| certify_one(r, n, budget, config))
        .collect())
}

fn certify_one(r: usize, n: u32, budget: &SearchBudget, config: &SearchConfig) -> CertifyEntry {
    let target = n as usize - 3;
    let verified =
        |w: &Family| w.is_r_multiplicity_antichain(r) && w.level_profile().num_levels() == target;
    let inst = ProfileInstance::new(n, r, 2..=n as usize - 2).expect("levels lie in 2..=n-2");
    let out = feasible_exact_profile_with(&inst, budget, config);
    let mut stats = out.stats;
    let status = match out.outcome {
        Outcome::Feasible(w) => {
            assert!(verified(&w), "contiguous witness failed verification");
            CertifyStatus::Achieved(w)
        }
        Outcome::Unknown => CertifyStatus::Unknown { best: None },
        Outcome::Infeasible => {
            let rep = g_exact_with(n, r, budget, config);
            stats.absorb(&rep.stats);
            let (lo, hi) = rep.outcome.range();
            match rep.outcome {
                GmaxOutcome::Exact { witness, .. } | GmaxOutcome::LowerBound { witness, .. }
                    if lo == target =>
                {
                    assert!(verified(&witness), "fallback witness failed verification");
                    CertifyStatus::Achieved(witness)
                }
                best if hi < target => CertifyStatus::Refuted { best },
                best => CertifyStatus::Unknown { best: Some(best) },
            }
        }
    };
    CertifyEntry { n, status, stats }
}
