//! Closed-form bounds on the number of occurring levels and on the threshold
//! beyond which `n - 3` levels are always attainable.
//!
//! Everything that can be decided in integers is. The only real-valued
//! quantities are the logarithmic thresholds; their floors are computed with an
//! exact treatment of the cases where the real value is itself an integer.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};

/// `C(m, k)`, zero outside `0..=m`. Exact for `m <= 64`.
pub fn binomial(m: u32, k: i64) -> u128 {
    if k < 0 || k > m as i64 {
        return 0;
    }
    let k = (k as u32).min(m - k as u32);
    let mut c: u128 = 1;
    for i in 0..k {
        // c * (m - i) is divisible by (i + 1)
        c = c * (m - i) as u128 / (i + 1) as u128;
    }
    c
}

fn big_binomial(m: u32, k: u32) -> BigUint {
    let k = k.min(m - k);
    let mut c = BigUint::from(1u32);
    for i in 0..k {
        c = c * (m - i) / (i + 1);
    }
    c
}

/// Decides `C(m, floor(m/2)) >= 2^m / (2 sqrt m)` through the equivalent
/// integer inequality `(2 C)^2 m >= 4^m`.
pub fn central_binomial_inequality_holds(m: u32) -> bool {
    assert!(m >= 1, "central binomial inequality needs m >= 1");
    let c = big_binomial(m, m / 2);
    let lhs = (c << 1usize).pow(2) * m;
    let rhs = BigUint::from(1u32) << (2 * m as usize);
    lhs >= rhs
}

/// Least `m >= 1` with `C(m, floor(m/2)) >= k`.
pub fn min_m_for(k: u64) -> u32 {
    assert!(k >= 1, "min_m_for needs K >= 1");
    let mut m = 1u32;
    while binomial(m, (m / 2) as i64) < k as u128 {
        m += 1;
    }
    m
}

/// `ceil(log2 K + log2(log2 K)/2 + 2)`, the cap on [`min_m_for`] for `K >= 4`.
pub fn min_m_cap(k: u64) -> u32 {
    assert!(k >= 4, "the cap is stated for K >= 4");
    let lk = (k as f64).log2();
    (lk + 0.5 * lk.log2() + 2.0).ceil() as u32
}

/// `2r + 2 log2 r + log2 log2 r + 15` as a real number.
fn construction_threshold_real(r: u32) -> f64 {
    let lr = (r as f64).log2();
    2.0 * r as f64 + 2.0 * lr + lr.log2() + 15.0
}

/// `Some(v)` when the threshold is exactly the integer `v`.
///
/// `2 log2 r + log2 log2 r` is rational only for `r = 2^a` with `a` a power of
/// two, where it equals `2a + log2 a`.
fn construction_threshold_exact(r: u32) -> Option<u64> {
    if !r.is_power_of_two() {
        return None;
    }
    let a = r.trailing_zeros();
    if a == 0 || !a.is_power_of_two() {
        return None;
    }
    Some(2 * r as u64 + 2 * a as u64 + a.trailing_zeros() as u64 + 15)
}

/// Floor and ceiling of the construction threshold, with a flag telling
/// whether the floating-point guard had to be relied on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Threshold {
    pub floor: u64,
    pub ceil: u64,
    pub near_integer: bool,
}

pub const FLOOR_GUARD: f64 = 1e-6;

pub fn construction_threshold(r: u32) -> Threshold {
    assert!(r >= 2, "threshold needs r >= 2");
    if let Some(v) = construction_threshold_exact(r) {
        return Threshold {
            floor: v,
            ceil: v,
            near_integer: false,
        };
    }
    let x = construction_threshold_real(r);
    let near_integer = (x - x.round()).abs() < FLOOR_GUARD;
    let floor = x.floor() as u64;
    Threshold {
        floor,
        ceil: floor + 1,
        near_integer,
    }
}

/// Best closed-form upper bound on the number of occurring levels.
///
/// `n - 4` inside the window `r + 3 <= n <= 2r + 2` for `r >= 4`, otherwise
/// `n - 3`.
pub fn g_upper_bound(n: u32, r: u32) -> Result<u32> {
    if n < 4 || r < 2 {
        return Err(Error::Domain(format!(
            "g_upper_bound needs n >= 4 and r >= 2, got n = {n}, r = {r}"
        )));
    }
    if r >= 4 && r + 3 <= n && n <= 2 * r + 2 {
        Ok(n - 4)
    } else {
        Ok(n - 3)
    }
}

/// Upper bound on the occurring levels of any `r`-multiplicity antichain on
/// `[n]`, including the small cases [`g_upper_bound`] does not cover.
pub fn level_cap(n: u32, r: u32) -> u32 {
    if r >= 2 && n >= 4 {
        g_upper_bound(n, r).unwrap()
    } else if r >= 2 {
        // levels 0 and n hold a single set each
        n.saturating_sub(1)
    } else {
        n + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub n: Option<u32>,
    pub r: u32,
    pub g_upper: Option<u32>,
    pub n0_lower: u64,
    pub n0_upper: u64,
    pub n0_exact: Option<u64>,
    pub notes: BTreeMap<String, String>,
}

/// Threshold bounds for `r`, plus the level bound at `n` when given.
pub fn bounds_report(r: u32, n: Option<u32>) -> Result<BoundsReport> {
    if r < 2 {
        return Err(Error::Domain(format!(
            "threshold bounds need r >= 2, got {r}"
        )));
    }
    let mut notes = BTreeMap::new();
    let (n0_lower, n0_exact) = match r {
        2 => (3, Some(3)),
        3 => (8, Some(8)),
        _ => (2 * r as u64 + 2, None),
    };
    notes.insert(
        "n0_lower".into(),
        match r {
            2 => "g(3,2) = 1 by exhaustion of the two-level case".into(),
            3 => "g(8,3) <= 4 by exhaustive search of levels {2..6}".into(),
            _ => "2r + 2 lower bound for r >= 4".to_string(),
        },
    );
    let th = construction_threshold(r);
    notes.insert(
        "n0_upper".into(),
        format!(
            "floor(2r + 2 log2 r + log2 log2 r + 15) = {} (real value {:.4})",
            th.floor,
            construction_threshold_real(r)
        ),
    );
    if n0_exact.is_some() {
        notes.insert(
            "n0_exact".into(),
            "lower bound matched by certified constructions up to n0_upper".into(),
        );
    }
    let g_upper = match n {
        Some(n) => {
            let g = g_upper_bound(n, r)?;
            notes.insert(
                "g_upper".into(),
                if g + 4 == n {
                    "n - 4 inside the window r + 3 <= n <= 2r + 2".into()
                } else {
                    "n - 3 universal bound for r >= 2, n >= 4".into()
                },
            );
            Some(g)
        }
        None => None,
    };
    Ok(BoundsReport {
        n,
        r,
        g_upper,
        n0_lower,
        n0_upper: th.floor,
        n0_exact,
        notes,
    })
}

pub fn n0_bounds(r: u32) -> Result<BoundsReport> {
    bounds_report(r, None)
}

/// Derived sizes shared by the applicability check and the layout builder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LayoutParams {
    pub n: u32,
    pub r: u32,
    pub k: u32,
    pub m: u32,
    pub ell: u32,
    /// `|R ∪ W|`
    pub r_prime: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// `k >= r + m + 1` fails.
    NoRoom { k: u32, needed: u32 },
    /// `k - (ell + 1) <= C(m, ell)` fails.
    GadgetCapacity { k: u32, capacity: u128 },
    /// `k >= ell + 1` fails.
    GadgetTooShort { k: u32, ell: u32 },
    /// `|R ∪ W| >= max(r, k - 2)` fails.
    RPrimeTooSmall { r_prime: i64, needed: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoRoom { k, needed } => {
                write!(f, "k = {k} < r + m + 1 = {needed}")
            }
            Violation::GadgetCapacity { k, capacity } => {
                write!(f, "k - (ell + 1) exceeds C(m, ell) = {capacity} at k = {k}")
            }
            Violation::GadgetTooShort { k, ell } => write!(f, "k = {k} < ell + 1 = {}", ell + 1),
            Violation::RPrimeTooSmall { r_prime, needed } => {
                write!(f, "|R'| = {r_prime} < {needed}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Applicability {
    /// `n` meets the logarithmic threshold.
    Strict(LayoutParams),
    /// The threshold fails but every fact the construction uses holds.
    Relaxed(LayoutParams),
    Inapplicable(Violation),
}

impl Applicability {
    pub fn params(&self) -> Option<&LayoutParams> {
        match self {
            Applicability::Strict(p) | Applicability::Relaxed(p) => Some(p),
            Applicability::Inapplicable(_) => None,
        }
    }
}

/// Whether the explicit construction runs at `(n, r)`, and under which tier.
pub fn construction_applicability(n: u32, r: u32) -> Applicability {
    assert!(r >= 2, "construction needs r >= 2");
    let k = n / 2;
    let m = min_m_for(k.max(1) as u64).max(4);
    let ell = m / 2;
    // [n] minus a, P, u and V
    let r_prime = n as i64 - r as i64 - m as i64 - 3;
    let params = LayoutParams {
        n,
        r,
        k,
        m,
        ell,
        r_prime: r_prime.max(0) as u32,
    };
    let strict = n as u64 >= construction_threshold(r).ceil;

    let violation = if k < r + m + 1 {
        Some(Violation::NoRoom {
            k,
            needed: r + m + 1,
        })
    } else if k < ell + 1 {
        Some(Violation::GadgetTooShort { k, ell })
    } else if (k - (ell + 1)) as u128 > binomial(m, ell as i64) {
        Some(Violation::GadgetCapacity {
            k,
            capacity: binomial(m, ell as i64),
        })
    } else if r_prime < r.max(k.saturating_sub(2)) as i64 {
        Some(Violation::RPrimeTooSmall {
            r_prime,
            needed: r.max(k - 2),
        })
    } else {
        None
    };

    match violation {
        Some(v) => Applicability::Inapplicable(v),
        None if strict => Applicability::Strict(params),
        None => Applicability::Relaxed(params),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(8, 4), 70);
        for m in 0..=64 {
            assert_eq!(binomial(m, 0), 1);
            assert_eq!(binomial(m, m as i64), 1);
            assert_eq!(binomial(m, -1), 0);
            assert_eq!(binomial(m, m as i64 + 1), 0);
        }
        assert_eq!(binomial(64, 32), 1_832_624_140_942_590_534);
    }

    #[test]
    fn binomial_matches_pascal() {
        let mut row = vec![1u128];
        for m in 1..=64u32 {
            let mut next = vec![1u128; m as usize + 1];
            for k in 1..m as usize {
                next[k] = row[k - 1] + row[k];
            }
            for (k, v) in next.iter().enumerate() {
                assert_eq!(binomial(m, k as i64), *v, "C({m},{k})");
            }
            row = next;
        }
    }

    #[test]
    fn central_binomial_examples() {
        assert!(central_binomial_inequality_holds(1));
        assert!(central_binomial_inequality_holds(4));
        assert!(central_binomial_inequality_holds(10));
    }

    #[test]
    fn min_m_examples() {
        assert_eq!(min_m_for(4), 4);
        assert_eq!(min_m_for(10), 5);
        assert_eq!(min_m_for(70), 8);
        assert_eq!(min_m_for(1), 1);
        assert_eq!(min_m_for(2), 2);
    }

    #[test]
    fn g_upper_examples() {
        assert_eq!(g_upper_bound(4, 2).unwrap(), 1);
        assert_eq!(g_upper_bound(10, 4).unwrap(), 6);
        assert_eq!(g_upper_bound(8, 3).unwrap(), 5);
        assert_eq!(g_upper_bound(7, 4).unwrap(), 3);
        assert_eq!(g_upper_bound(11, 4).unwrap(), 8);
        assert!(g_upper_bound(3, 2).is_err());
        assert!(g_upper_bound(5, 1).is_err());
    }

    #[test]
    fn n0_examples() {
        let r2 = n0_bounds(2).unwrap();
        assert_eq!((r2.n0_exact, r2.n0_upper, r2.n0_lower), (Some(3), 21, 3));
        let r3 = n0_bounds(3).unwrap();
        assert_eq!((r3.n0_exact, r3.n0_upper, r3.n0_lower), (Some(8), 24, 8));
        let r4 = n0_bounds(4).unwrap();
        assert_eq!((r4.n0_exact, r4.n0_upper, r4.n0_lower), (None, 28, 10));
        assert!(n0_bounds(1).is_err());
    }

    #[test]
    fn threshold_exact_cases() {
        // r = 2, 4, 16 hit integers exactly
        assert_eq!(construction_threshold(2).floor, 21);
        assert_eq!(construction_threshold(4).floor, 28);
        assert_eq!(construction_threshold(16).floor, 32 + 8 + 2 + 15);
        assert_eq!(construction_threshold(16).ceil, 57);
        let t3 = construction_threshold(3);
        assert_eq!((t3.floor, t3.ceil), (24, 25));
    }

    #[test]
    fn threshold_guard_never_ambiguous() {
        for r in 2..200_000u32 {
            assert!(!construction_threshold(r).near_integer, "r = {r}");
        }
    }

    #[test]
    fn applicability_examples() {
        assert!(matches!(
            construction_applicability(21, 2),
            Applicability::Strict(_)
        ));
        assert_eq!(
            construction_applicability(13, 4),
            Applicability::Inapplicable(Violation::NoRoom { k: 6, needed: 9 })
        );
        assert_eq!(
            construction_applicability(8, 3),
            Applicability::Inapplicable(Violation::NoRoom { k: 4, needed: 8 })
        );
        // r = 2 becomes constructible at n = 16 under the relaxed tier
        assert!(matches!(
            construction_applicability(15, 2),
            Applicability::Inapplicable(_)
        ));
        assert!(matches!(
            construction_applicability(16, 2),
            Applicability::Relaxed(_)
        ));
        assert!(matches!(
            construction_applicability(20, 2),
            Applicability::Relaxed(_)
        ));
        assert!(matches!(
            construction_applicability(25, 3),
            Applicability::Strict(_)
        ));
        assert!(matches!(
            construction_applicability(24, 3),
            Applicability::Relaxed(_)
        ));
    }

    #[test]
    fn strict_implies_prerequisites() {
        for r in 2..=40 {
            let th = construction_threshold(r).ceil as u32;
            for n in th..th + 40 {
                assert!(
                    matches!(construction_applicability(n, r), Applicability::Strict(_)),
                    "n = {n}, r = {r}"
                );
            }
            assert!(!matches!(
                construction_applicability(th - 1, r),
                Applicability::Strict(_)
            ));
        }
    }
}
