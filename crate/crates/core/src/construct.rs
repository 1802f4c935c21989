//! Explicit families attaining `n - 3` occurring levels.
//!
//! The ground set is cut into consecutive blocks
//! `{a} ∪ P ∪ {u} ∪ V0 ∪ {b} ∪ R ∪ W`, in that order starting at element 1.
//! The half family lives on levels `2..=k` and every member contains the apex
//! `a`; adding all complements fills levels `n-k..=n-2`.
//!
//! Every free choice is the colexicographically first one, so equal inputs
//! always produce identical families.

use serde::Serialize;

use crate::bounds::{binomial, construction_applicability, Applicability, LayoutParams};
use crate::colex::ColexSubsets;
use crate::error::{Error, Result};
use crate::family::{Family, GroundSize, SubsetCode};

fn mask_of(elements: &[u32]) -> u64 {
    elements.iter().fold(0u64, |acc, &e| acc | 1u64 << (e - 1))
}

/// Picks the elements of `pool` selected by the bits of `index_mask`.
fn select(pool: &[u32], index_mask: u64) -> u64 {
    let mut out = 0u64;
    let mut rest = index_mask;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        out |= 1u64 << (pool[i] - 1);
    }
    out
}

/// Antichain of labels `L_t`, `4 <= t <= k`, over `V0 ∪ {b}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelGadget {
    pub m: u32,
    pub ell: u32,
    pub k: u32,
    pub v0: Vec<u32>,
    pub b: u32,
    /// `labels[i]` is `L_{4+i}` as a bit pattern of one-based elements.
    labels: Vec<u64>,
}

impl LabelGadget {
    pub fn label(&self, t: u32) -> Option<u64> {
        if t < 4 {
            return None;
        }
        self.labels.get((t - 4) as usize).copied()
    }

    /// `(t, L_t)` pairs in increasing `t`.
    pub fn labels(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.labels
            .iter()
            .enumerate()
            .map(|(i, &l)| (i as u32 + 4, l))
    }
}

/// Labels for `t = 4..=k`: 2-sets `{b, v_{t-3}}` up to `ell + 1`, then the
/// colex-first `ell`-subsets of `V0`.
pub fn build_label_gadget(m: u32, k: u32, v0: &[u32], b: u32) -> Result<LabelGadget> {
    let fail = |msg: String| Err(Error::GadgetPreconditionViolated(msg));
    if m < 4 {
        return fail(format!("m = {m} < 4"));
    }
    let ell = m / 2;
    if v0.len() != m as usize {
        return fail(format!("|V0| = {} differs from m = {m}", v0.len()));
    }
    if k < ell + 1 {
        return fail(format!("K = {k} < ell + 1 = {}", ell + 1));
    }
    let capacity = binomial(m, ell as i64);
    if (k - (ell + 1)) as u128 > capacity {
        return fail(format!(
            "K - (ell + 1) = {} > C(m, ell) = {capacity}",
            k - (ell + 1)
        ));
    }
    let mut v0_sorted = v0.to_vec();
    v0_sorted.sort_unstable();
    v0_sorted.dedup();
    if v0_sorted.len() != v0.len() {
        return fail("V0 has repeated elements".into());
    }
    if v0_sorted.contains(&b) {
        return fail(format!("b = {b} lies in V0"));
    }
    if v0_sorted.iter().chain(Some(&b)).any(|&e| e == 0 || e > 64) {
        return fail("gadget elements must lie in 1..=64".into());
    }

    let mut labels = Vec::with_capacity(k.saturating_sub(3) as usize);
    for t in 4..=(ell + 1).min(k) {
        labels.push(mask_of(&[b, v0_sorted[(t - 4) as usize]]));
    }
    let wanted = (k - (ell + 1)) as usize;
    labels.extend(
        ColexSubsets::new(m, ell)
            .take(wanted)
            .map(|idx| select(&v0_sorted, idx)),
    );
    Ok(LabelGadget {
        m,
        ell,
        k,
        v0: v0_sorted,
        b,
        labels,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tier {
    Strict,
    Relaxed,
}

/// Block partition of `[n]` for the construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionLayout {
    pub params: LayoutParams,
    pub tier: Tier,
    pub apex: u32,
    pub p: Vec<u32>,
    pub u: u32,
    pub v0: Vec<u32>,
    pub b: u32,
    pub r: Vec<u32>,
    pub w: Vec<u32>,
}

impl ConstructionLayout {
    /// `R ∪ W`, ascending.
    pub fn r_prime(&self) -> Vec<u32> {
        self.r.iter().chain(&self.w).copied().collect()
    }

    pub fn ground(&self) -> GroundSize {
        GroundSize::new(self.params.n).expect("layout ground size validated on build")
    }
}

pub fn build_layout(n: u32, r: u32) -> Result<ConstructionLayout> {
    if r < 2 {
        return Err(Error::LayoutInfeasible(format!("r = {r} < 2")));
    }
    GroundSize::new(n).map_err(|e| Error::LayoutInfeasible(e.to_string()))?;
    let (params, tier) = match construction_applicability(n, r) {
        Applicability::Strict(p) => (p, Tier::Strict),
        Applicability::Relaxed(p) => (p, Tier::Relaxed),
        Applicability::Inapplicable(v) => return Err(Error::LayoutInfeasible(v.to_string())),
    };
    let needed = r + params.m + params.k + 1;
    if needed > n {
        return Err(Error::LayoutInfeasible(format!(
            "blocks need {needed} elements but n = {n}"
        )));
    }
    let mut next = 1u32;
    let mut take = |count: u32| -> Vec<u32> {
        let block: Vec<u32> = (next..next + count).collect();
        next += count;
        block
    };
    let apex = take(1)[0];
    let p = take(r);
    let u = take(1)[0];
    let v0 = take(params.m);
    let b = take(1)[0];
    let rr = take(params.k - 2);
    let w = take(n - needed);
    let layout = ConstructionLayout {
        params,
        tier,
        apex,
        p,
        u,
        v0,
        b,
        r: rr,
        w,
    };
    if (layout.r_prime().len() as u32) < r {
        return Err(Error::LayoutInfeasible(format!(
            "|R'| = {} < r = {r}",
            layout.r_prime().len()
        )));
    }
    Ok(layout)
}

/// Levels `2..=k`, `r` members each, every member containing the apex.
pub fn build_half_family(layout: &ConstructionLayout) -> Result<Family> {
    let LayoutParams { r, k, m, .. } = layout.params;
    let apex = 1u64 << (layout.apex - 1);
    let u = 1u64 << (layout.u - 1);
    let r_prime = layout.r_prime();
    let gadget = build_label_gadget(m, k, &layout.v0, layout.b)?;

    let mut members = Vec::with_capacity((r * (k - 1)) as usize);
    for &p in &layout.p {
        members.push(SubsetCode::from_raw(apex | 1u64 << (p - 1)));
    }
    for &x in r_prime.iter().take(r as usize) {
        members.push(SubsetCode::from_raw(apex | u | 1u64 << (x - 1)));
    }
    for (t, label) in gadget.labels() {
        let s = t - 1 - label.count_ones();
        if s < 1 || s as usize > r_prime.len() - 1 {
            return Err(Error::ConstructionPostconditionFailed(format!(
                "s({t}) = {s} outside 1..=|R'|-1 = {}",
                r_prime.len() - 1
            )));
        }
        let before = members.len();
        members.extend(
            ColexSubsets::new(r_prime.len() as u32, s)
                .take(r as usize)
                .map(|idx| SubsetCode::from_raw(apex | label | select(&r_prime, idx))),
        );
        if members.len() - before != r as usize {
            return Err(Error::ConstructionPostconditionFailed(format!(
                "fewer than {r} subsets of size {s} in R'"
            )));
        }
    }
    Family::new(layout.ground(), members)
}

/// A verified family on levels `{2..=n-2}` together with its layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub layout: ConstructionLayout,
    pub family: Family,
}

impl Construction {
    pub fn tier(&self) -> Tier {
        self.layout.tier
    }
}

pub fn build_construction(n: u32, r: u32) -> Result<Construction> {
    let layout = build_layout(n, r)?;
    let half = build_half_family(&layout)?;
    let (family, shared) = half.union(&half.complement())?;
    if shared != 0 {
        return Err(Error::ConstructionPostconditionFailed(format!(
            "{shared} members shared between the half family and its complements"
        )));
    }
    if !family.is_r_multiplicity_antichain(r as usize) {
        return Err(Error::ConstructionPostconditionFailed(
            "result is not an r-multiplicity antichain".into(),
        ));
    }
    let occurring = family.level_profile().occurring();
    if occurring != (2..=n as usize - 2).collect::<Vec<_>>() {
        return Err(Error::ConstructionPostconditionFailed(format!(
            "occurring levels {occurring:?} differ from 2..={}",
            n - 2
        )));
    }
    Ok(Construction { layout, family })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets(bits: impl IntoIterator<Item = u64>) -> Vec<Vec<u32>> {
        bits.into_iter()
            .map(|b| SubsetCode::from_raw(b).elements().collect())
            .collect()
    }

    #[test]
    fn gadget_m4() {
        let g = build_label_gadget(4, 6, &[1, 2, 3, 4], 5).unwrap();
        assert_eq!(g.ell, 2);
        assert_eq!(
            sets(g.labels().map(|(_, l)| l)),
            vec![vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(g.labels().map(|(t, _)| t).collect::<Vec<_>>(), [4, 5, 6]);
    }

    #[test]
    fn gadget_m6() {
        let g = build_label_gadget(6, 8, &[1, 2, 3, 4, 5, 6], 7).unwrap();
        assert_eq!(g.ell, 3);
        assert_eq!(
            sets(g.labels().map(|(_, l)| l)),
            vec![
                vec![1, 7],
                vec![1, 2, 3],
                vec![1, 2, 4],
                vec![1, 3, 4],
                vec![2, 3, 4]
            ]
        );
    }

    #[test]
    fn gadget_preconditions() {
        let v0 = [1, 2, 3, 4];
        assert!(matches!(
            build_label_gadget(4, 10, &v0, 5),
            Err(Error::GadgetPreconditionViolated(_))
        ));
        // K - 3 = 6 = C(4,2) is the boundary and still fine
        assert!(build_label_gadget(4, 9, &v0, 5).is_ok());
        assert!(build_label_gadget(3, 4, &[1, 2, 3], 5).is_err());
        assert!(build_label_gadget(4, 2, &v0, 5).is_err());
        assert!(build_label_gadget(4, 5, &v0, 4).is_err());
        assert!(build_label_gadget(4, 5, &[1, 2, 3], 5).is_err());
    }

    #[test]
    fn layout_21_2() {
        let l = build_layout(21, 2).unwrap();
        assert_eq!(l.tier, Tier::Strict);
        assert_eq!((l.params.k, l.params.m), (10, 5));
        assert_eq!(l.apex, 1);
        assert_eq!(l.p, [2, 3]);
        assert_eq!(l.u, 4);
        assert_eq!(l.v0, (5..=9).collect::<Vec<_>>());
        assert_eq!(l.b, 10);
        assert_eq!(l.r, (11..=18).collect::<Vec<_>>());
        assert_eq!(l.w, [19, 20, 21]);
    }

    #[test]
    fn layout_25_3() {
        let l = build_layout(25, 3).unwrap();
        // C(5,2) = 10 < 12 <= C(6,3) = 20
        assert_eq!((l.params.k, l.params.m), (12, 6));
        let sizes = [1, l.p.len(), 1, l.v0.len() + 1, l.r.len(), l.w.len()];
        assert_eq!(sizes, [1, 3, 1, 7, 10, 3]);
    }

    #[test]
    fn layout_infeasible() {
        assert!(matches!(
            build_layout(8, 3),
            Err(Error::LayoutInfeasible(_))
        ));
        assert!(matches!(
            build_layout(13, 4),
            Err(Error::LayoutInfeasible(_))
        ));
        assert!(matches!(
            build_layout(21, 1),
            Err(Error::LayoutInfeasible(_))
        ));
    }

    #[test]
    fn layout_partitions_ground() {
        for r in 2..=8 {
            for n in 8..=40 {
                let Ok(l) = build_layout(n, r) else { continue };
                let mut all: Vec<u32> = [l.apex, l.u, l.b]
                    .into_iter()
                    .chain(l.p.iter().copied())
                    .chain(l.v0.iter().copied())
                    .chain(l.r_prime())
                    .collect();
                all.sort_unstable();
                assert_eq!(all, (1..=n).collect::<Vec<_>>(), "n = {n}, r = {r}");
                assert_eq!(l.r.len() as u32, l.params.k - 2);
                assert!(l.r_prime().len() as u32 >= r);
            }
        }
    }

    #[test]
    fn half_family_21_2() {
        let h = build_half_family(&build_layout(21, 2).unwrap()).unwrap();
        assert_eq!(h.len(), 18);
        let p = h.level_profile();
        assert_eq!(p.occurring(), (2..=10).collect::<Vec<_>>());
        assert!(p.counts().values().all(|&c| c == 2));
        assert!(h.members().iter().all(|m| m.contains(1)));
        assert!(h.is_antichain());
        // p_j only appears at level 2
        for m in h.members().iter().filter(|m| m.size() >= 3) {
            assert!(!m.contains(2) && !m.contains(3));
        }
    }

    #[test]
    fn half_family_25_3() {
        let h = build_half_family(&build_layout(25, 3).unwrap()).unwrap();
        assert_eq!(h.len(), 33);
        let p = h.level_profile();
        assert_eq!(p.occurring(), (2..=12).collect::<Vec<_>>());
        assert!(p.counts().values().all(|&c| c == 3));
        assert!(h.is_antichain());
    }

    #[test]
    fn construction_examples() {
        for (n, r) in [(21, 2), (25, 3), (28, 4), (31, 5)] {
            let c = build_construction(n, r).unwrap();
            let p = c.family.level_profile();
            assert_eq!(p.num_levels() as u32, n - 3);
            assert_eq!(p.occurring(), (2..=n as usize - 2).collect::<Vec<_>>());
            assert!(c.family.is_r_multiplicity_antichain(r as usize));
        }
        assert!(build_construction(8, 3).is_err());
    }
}
