/// `k`-subsets of `{0, .., n-1}` as bit masks in colexicographic order, which
/// for fixed `k` is ascending order of the masks as integers.
#[derive(Clone, Debug)]
pub struct ColexSubsets {
    current: Option<u128>,
    limit: u128,
}

impl ColexSubsets {
    pub fn new(n: u32, k: u32) -> Self {
        assert!(n <= 64, "at most 64 positions");
        let limit = 1u128 << n;
        let current = if k > n { None } else { Some((1u128 << k) - 1) };
        ColexSubsets { current, limit }
    }
}

impl Iterator for ColexSubsets {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let x = self.current?;
        if x >= self.limit {
            self.current = None;
            return None;
        }
        self.current = if x == 0 {
            None
        } else {
            // Gosper's hack
            let low = x & x.wrapping_neg();
            let ripple = x + low;
            Some((((ripple ^ x) >> 2) / low) | ripple)
        };
        Some(x as u64)
    }
}
