//! Subsets of a small ground set as machine words, and finite families of them.
//!
//! Elements are one-based: element `i` of `[n]` is bit `i - 1`. Families keep
//! their members sorted by `(size, bits)`, so each level is a contiguous slice
//! and two families compare equal regardless of the order they were built in.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub const MAX_GROUND: u32 = 64;

/// Number of ground elements, `1..=64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct GroundSize(u32);

impl GroundSize {
    pub fn new(n: u32) -> Result<Self> {
        if (1..=MAX_GROUND).contains(&n) {
            Ok(GroundSize(n))
        } else {
            Err(Error::GroundSize(n))
        }
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Bit pattern of the whole ground set.
    #[inline]
    pub fn full_mask(self) -> u64 {
        if self.0 == 64 {
            u64::MAX
        } else {
            (1u64 << self.0) - 1
        }
    }
}

impl fmt::Display for GroundSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A subset of `[n]`. Ordering is by size first, then by the bit pattern as
/// an integer; this is the canonical member order used everywhere.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetCode {
    size: u32,
    bits: u64,
}

impl SubsetCode {
    pub const EMPTY: SubsetCode = SubsetCode { size: 0, bits: 0 };

    /// Callers guarantee the bits fit whatever ground set the code is used with.
    #[inline]
    pub fn from_raw(bits: u64) -> Self {
        SubsetCode {
            size: bits.count_ones(),
            bits,
        }
    }

    pub fn from_bits(ground: GroundSize, bits: u64) -> Result<Self> {
        if bits & !ground.full_mask() != 0 {
            return Err(Error::BitsOutOfRange {
                bits,
                n: ground.get(),
            });
        }
        Ok(Self::from_raw(bits))
    }

    /// Builds a subset from one-based element labels. Repeated labels collapse.
    pub fn from_elements(ground: GroundSize, elements: &[u32]) -> Result<Self> {
        let mut bits = 0u64;
        for &e in elements {
            if e == 0 || e > ground.get() {
                return Err(Error::ElementOutOfRange {
                    element: e,
                    n: ground.get(),
                });
            }
            bits |= 1u64 << (e - 1);
        }
        Ok(Self::from_raw(bits))
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn size(self) -> usize {
        self.size as usize
    }

    #[inline]
    pub fn contains(self, element: u32) -> bool {
        (1..=64).contains(&element) && self.bits >> (element - 1) & 1 == 1
    }

    #[inline]
    pub fn is_subset_of(self, other: SubsetCode) -> bool {
        self.bits & !other.bits == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: SubsetCode) -> bool {
        self.bits & other.bits == 0
    }

    #[inline]
    pub fn complement(self, ground: GroundSize) -> SubsetCode {
        Self::from_raw(!self.bits & ground.full_mask())
    }

    /// One-based elements in ascending order.
    pub fn elements(self) -> Elements {
        Elements(self.bits)
    }
}

impl fmt::Debug for SubsetCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SubsetCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

pub struct Elements(u64);

impl Iterator for Elements {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let tz = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(tz + 1)
    }
}

/// Per-size member counts of a family. Only sizes that occur are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LevelProfile {
    counts: BTreeMap<usize, usize>,
}

impl LevelProfile {
    fn from_sorted(members: &[SubsetCode]) -> Self {
        let mut counts = BTreeMap::new();
        for m in members {
            *counts.entry(m.size()).or_insert(0) += 1;
        }
        LevelProfile { counts }
    }

    pub fn count(&self, t: usize) -> usize {
        self.counts.get(&t).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    /// The occurring sizes, ascending.
    pub fn occurring(&self) -> Vec<usize> {
        self.counts.keys().copied().collect()
    }

    pub fn num_levels(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn min_count(&self) -> Option<usize> {
        self.counts.values().copied().min()
    }
}

/// A set of distinct subsets of one ground set, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Family {
    ground: GroundSize,
    members: Vec<SubsetCode>,
}

impl Family {
    /// Fails on members outside the ground set or on repeated members.
    pub fn new(ground: GroundSize, members: impl IntoIterator<Item = SubsetCode>) -> Result<Self> {
        let mut members: Vec<SubsetCode> = members.into_iter().collect();
        let mask = ground.full_mask();
        if let Some(bad) = members.iter().find(|m| m.bits & !mask != 0) {
            return Err(Error::BitsOutOfRange {
                bits: bad.bits,
                n: ground.get(),
            });
        }
        members.sort_unstable();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateMember(w[0].to_string()));
        }
        Ok(Family { ground, members })
    }

    pub fn empty(ground: GroundSize) -> Self {
        Family {
            ground,
            members: Vec::new(),
        }
    }

    /// Convenience constructor from one-based element lists.
    pub fn from_sets<S: AsRef<[u32]>>(n: u32, sets: &[S]) -> Result<Self> {
        let ground = GroundSize::new(n)?;
        let codes = sets
            .iter()
            .map(|s| SubsetCode::from_elements(ground, s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Family::new(ground, codes)
    }

    pub fn from_bits(ground: GroundSize, bits: impl IntoIterator<Item = u64>) -> Result<Self> {
        Family::new(ground, bits.into_iter().map(SubsetCode::from_raw))
    }

    #[inline]
    pub fn ground(&self) -> GroundSize {
        self.ground
    }

    #[inline]
    pub fn members(&self) -> &[SubsetCode] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn level_profile(&self) -> LevelProfile {
        LevelProfile::from_sorted(&self.members)
    }

    /// Members of size `t`, as a contiguous slice of the canonical order.
    pub fn level(&self, t: usize) -> &[SubsetCode] {
        let lo = self.members.partition_point(|m| m.size() < t);
        let hi = self.members.partition_point(|m| m.size() <= t);
        &self.members[lo..hi]
    }

    fn level_slices(&self) -> Vec<&[SubsetCode]> {
        let mut out = Vec::new();
        let mut rest = &self.members[..];
        while let Some(first) = rest.first() {
            let end = rest.partition_point(|m| m.size() == first.size());
            out.push(&rest[..end]);
            rest = &rest[end..];
        }
        out
    }

    /// True iff no member is contained in another. Only pairs from a strictly
    /// smaller level to a strictly larger one are compared.
    pub fn is_antichain(&self) -> bool {
        let levels = self.level_slices();
        for (i, low) in levels.iter().enumerate() {
            for high in &levels[i + 1..] {
                for a in low.iter() {
                    if high.iter().any(|b| a.is_subset_of(*b)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Antichain in which every occurring level has at least `r` members.
    pub fn is_r_multiplicity_antichain(&self, r: usize) -> bool {
        self.level_slices().iter().all(|l| l.len() >= r) && self.is_antichain()
    }

    /// `{[n] \ A : A in self}`.
    pub fn complement(&self) -> Family {
        let mut members: Vec<SubsetCode> = self
            .members
            .iter()
            .map(|m| m.complement(self.ground))
            .collect();
        members.sort_unstable();
        Family {
            ground: self.ground,
            members,
        }
    }

    /// Keeps the `r` canonically-first members of every occurring level.
    pub fn trim_to_exact(&self, r: usize) -> Result<Family> {
        let mut members = Vec::with_capacity(self.members.len());
        for level in self.level_slices() {
            if level.len() < r {
                return Err(Error::MultiplicityDeficit {
                    level: level[0].size(),
                    count: level.len(),
                    r,
                });
            }
            members.extend_from_slice(&level[..r]);
        }
        Ok(Family {
            ground: self.ground,
            members,
        })
    }

    /// Union of two families over the same ground set. Shared members are
    /// reported through the second tuple field.
    pub fn union(&self, other: &Family) -> Result<(Family, usize)> {
        if self.ground != other.ground {
            return Err(Error::GroundMismatch {
                expected: self.ground.get(),
                found: other.ground.get(),
            });
        }
        let mut members: Vec<SubsetCode> =
            self.members.iter().chain(&other.members).copied().collect();
        members.sort_unstable();
        let before = members.len();
        members.dedup();
        let shared = before - members.len();
        Ok((
            Family {
                ground: self.ground,
                members,
            },
            shared,
        ))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

/// Shape of a family of 2-sets with respect to pairwise intersection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwoSetShape {
    Empty,
    /// Every member contains `center`.
    Star {
        center: u32,
    },
    /// Exactly `{a,b}, {a,c}, {b,c}` with `a < b < c`.
    Triangle {
        a: u32,
        b: u32,
        c: u32,
    },
    /// Two disjoint members, the canonically-first such pair.
    NotIntersecting(SubsetCode, SubsetCode),
}

/// Classifies a family of 2-sets as a star, a triangle, or not pairwise
/// intersecting. A pairwise-intersecting family with no common element is
/// always a triangle.
pub fn classify_two_sets(e: &Family) -> Result<TwoSetShape> {
    if let Some(bad) = e.members().iter().find(|m| m.size() != 2) {
        return Err(Error::SizeViolation(bad.to_string()));
    }
    let members = e.members();
    if members.is_empty() {
        return Ok(TwoSetShape::Empty);
    }
    for (i, &x) in members.iter().enumerate() {
        if let Some(&y) = members[i + 1..].iter().find(|y| x.is_disjoint(**y)) {
            return Ok(TwoSetShape::NotIntersecting(x, y));
        }
    }
    let common = members.iter().fold(u64::MAX, |acc, m| acc & m.bits());
    if common != 0 {
        return Ok(TwoSetShape::Star {
            center: common.trailing_zeros() + 1,
        });
    }
    let union = members.iter().fold(0u64, |acc, m| acc | m.bits());
    debug_assert!(members.len() == 3 && union.count_ones() == 3);
    let mut it = Elements(union);
    let (a, b, c) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
    Ok(TwoSetShape::Triangle { a, b, c })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(n: u32, sets: &[&[u32]]) -> Family {
        Family::from_sets(n, sets).unwrap()
    }

    #[test]
    fn ground_size_bounds() {
        assert!(GroundSize::new(0).is_err());
        assert!(GroundSize::new(65).is_err());
        assert_eq!(GroundSize::new(64).unwrap().full_mask(), u64::MAX);
        assert_eq!(GroundSize::new(3).unwrap().full_mask(), 0b111);
    }

    #[test]
    fn subset_code_rejects_out_of_range() {
        let g = GroundSize::new(3).unwrap();
        assert!(SubsetCode::from_elements(g, &[0]).is_err());
        assert!(SubsetCode::from_elements(g, &[4]).is_err());
        assert!(SubsetCode::from_bits(g, 0b1000).is_err());
        let s = SubsetCode::from_elements(g, &[3, 1]).unwrap();
        assert_eq!(s.bits(), 0b101);
        assert_eq!(s.size(), 2);
        assert_eq!(s.elements().collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(s.to_string(), "{1,3}");
    }

    #[test]
    fn canonical_order_is_size_then_bits() {
        let f = fam(4, &[&[1, 2], &[4], &[1]]);
        let m: Vec<String> = f.members().iter().map(|m| m.to_string()).collect();
        assert_eq!(m, ["{1}", "{4}", "{1,2}"]);
        assert_eq!(f, fam(4, &[&[1], &[1, 2], &[4]]));
    }

    #[test]
    fn duplicates_rejected() {
        assert!(matches!(
            Family::from_sets(3, &[&[1u32, 2][..], &[2, 1]]),
            Err(Error::DuplicateMember(_))
        ));
    }

    #[test]
    fn antichain_examples() {
        assert!(fam(3, &[&[1], &[2]]).is_antichain());
        assert!(!fam(3, &[&[1], &[1, 2]]).is_antichain());
        assert!(fam(3, &[&[1, 2], &[1, 3], &[2, 3]]).is_antichain());
        assert!(Family::empty(GroundSize::new(5).unwrap()).is_antichain());
    }

    #[test]
    fn multiplicity_examples() {
        assert!(fam(3, &[&[1], &[2]]).is_r_multiplicity_antichain(2));
        assert!(!fam(3, &[&[1], &[2], &[1, 2]]).is_r_multiplicity_antichain(2));
        assert!(fam(3, &[&[1], &[2], &[3]]).is_r_multiplicity_antichain(3));
        // multiplicity holds but containment breaks it
        assert!(!fam(4, &[&[1], &[2], &[1, 3], &[3, 4]]).is_r_multiplicity_antichain(2));
    }

    #[test]
    fn complement_examples() {
        let f = fam(3, &[&[1], &[2]]);
        assert_eq!(f.complement(), fam(3, &[&[2, 3], &[1, 3]]));
        assert_eq!(f.complement().complement(), f);

        let g = fam(8, &[&[1, 2], &[3, 4], &[1, 5, 6]]);
        assert_eq!(g.level_profile().occurring(), vec![2, 3]);
        assert_eq!(g.complement().level_profile().occurring(), vec![5, 6]);
    }

    #[test]
    fn trim_examples() {
        let f = fam(3, &[&[1], &[2], &[3]]);
        assert_eq!(f.trim_to_exact(2).unwrap(), fam(3, &[&[1], &[2]]));
        assert_eq!(f.trim_to_exact(3).unwrap(), f);

        // counts {2:5, 4:3}
        let g = fam(
            8,
            &[
                &[1, 2],
                &[1, 3],
                &[2, 3],
                &[1, 4],
                &[2, 4],
                &[5, 6, 7, 8],
                &[3, 5, 6, 7],
                &[3, 5, 6, 8],
            ],
        );
        assert!(g.is_r_multiplicity_antichain(3));
        let t = g.trim_to_exact(3).unwrap();
        let p = t.level_profile();
        assert_eq!(p.count(2), 3);
        assert_eq!(p.count(4), 3);
        assert_eq!(p.occurring(), g.level_profile().occurring());
        assert!(t.is_r_multiplicity_antichain(3));

        assert!(matches!(
            fam(3, &[&[1], &[2], &[1, 3]]).trim_to_exact(2),
            Err(Error::MultiplicityDeficit {
                level: 2,
                count: 1,
                r: 2
            })
        ));
    }

    #[test]
    fn profile_examples() {
        let p = fam(3, &[&[1], &[2], &[1, 2]]).level_profile();
        assert_eq!(p.count(1), 2);
        assert_eq!(p.count(2), 1);
        assert_eq!(p.occurring(), vec![1, 2]);
        assert_eq!(p.total(), 3);
        let e = Family::empty(GroundSize::new(4).unwrap()).level_profile();
        assert_eq!(e.num_levels(), 0);
        assert_eq!(e.min_count(), None);
    }

    #[test]
    fn level_slices_are_contiguous() {
        let f = fam(5, &[&[1], &[1, 2], &[3], &[2, 3], &[4, 5], &[1, 2, 3]]);
        assert_eq!(f.level(1).len(), 2);
        assert_eq!(f.level(2).len(), 3);
        assert_eq!(f.level(3).len(), 1);
        assert!(f.level(4).is_empty());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_two_sets(&fam(5, &[&[1, 2], &[1, 3], &[1, 4]])).unwrap(),
            TwoSetShape::Star { center: 1 }
        );
        assert_eq!(
            classify_two_sets(&fam(5, &[&[1, 2], &[1, 3], &[2, 3]])).unwrap(),
            TwoSetShape::Triangle { a: 1, b: 2, c: 3 }
        );
        let f = fam(5, &[&[1, 2], &[3, 4]]);
        assert_eq!(
            classify_two_sets(&f).unwrap(),
            TwoSetShape::NotIntersecting(f.members()[0], f.members()[1])
        );
        assert_eq!(
            classify_two_sets(&Family::empty(GroundSize::new(4).unwrap())).unwrap(),
            TwoSetShape::Empty
        );
        // one member: smallest element is the center
        assert_eq!(
            classify_two_sets(&fam(5, &[&[2, 4]])).unwrap(),
            TwoSetShape::Star { center: 2 }
        );
        assert!(matches!(
            classify_two_sets(&fam(5, &[&[1, 2], &[1, 2, 3]])),
            Err(Error::SizeViolation(_))
        ));
    }

    #[test]
    fn union_reports_shared_members() {
        let a = fam(4, &[&[1], &[2]]);
        let b = fam(4, &[&[2], &[3]]);
        let (u, shared) = a.union(&b).unwrap();
        assert_eq!(shared, 1);
        assert_eq!(u.len(), 3);
    }
}
