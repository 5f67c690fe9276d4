//! Exact integer helpers: binomial coefficients, rationals and k-subset
//! enumeration in lexicographic order.

use num_rational::Ratio;

/// Exact rational used for every formula evaluation in the crate.
pub type Rational = Ratio<i128>;

/// `C(n, k)` over the integers with the zero-outside-range convention:
/// returns 0 when `k < 0`, `n < 0` or `k > n`.
///
/// Returns `None` on `i128` overflow.
pub fn checked_binomial(n: i64, k: i64) -> Option<i128> {
    if n < 0 || k < 0 || k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        // acc * (n - i) is always divisible by (i + 1) at this step.
        acc = acc.checked_mul((n - i) as i128)? / (i as i128 + 1);
    }
    Some(acc)
}

/// Like [`checked_binomial`] but panics on overflow. Only used where the
/// arguments are bounded by a point or block count.
pub fn binomial(n: i64, k: i64) -> i128 {
    checked_binomial(n, k).expect("binomial coefficient overflows i128")
}

/// Table of `C(i, j)` for `i <= n`, `j <= k`, used for combinadic ranks.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    k: usize,
    table: Vec<u64>,
}

impl BinomialTable {
    pub fn new(n: usize, k: usize) -> Self {
        let mut table = vec![0u64; (n + 1) * (k + 1)];
        for i in 0..=n {
            table[i * (k + 1)] = 1;
            for j in 1..=k.min(i) {
                let above = if j < i { table[(i - 1) * (k + 1) + j] } else { 0 };
                table[i * (k + 1) + j] = table[(i - 1) * (k + 1) + j - 1].saturating_add(above);
            }
        }
        BinomialTable { k, table }
    }

    #[inline]
    pub fn get(&self, n: usize, k: usize) -> u64 {
        if k > self.k || k > n {
            return 0;
        }
        self.table[n * (self.k + 1) + k]
    }

    /// Colexicographic rank of a strictly increasing subset.
    #[inline]
    pub fn colex_rank(&self, subset: &[usize]) -> usize {
        subset
            .iter()
            .enumerate()
            .map(|(i, &x)| self.get(x, i + 1) as usize)
            .sum()
    }
}

/// Iterator-like cursor over the `k`-subsets of `0..n` in lexicographic order.
///
/// It hands out borrowed slices, so it is driven with `while let`.
#[derive(Debug, Clone)]
pub struct Subsets {
    n: usize,
    current: Vec<usize>,
    started: bool,
    done: bool,
}

impl Subsets {
    pub fn new(n: usize, k: usize) -> Self {
        Subsets {
            n,
            current: (0..k).collect(),
            started: false,
            done: k > n,
        }
    }

    pub fn next_subset(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.current);
        }
        let k = self.current.len();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.current[i] < self.n - k + i {
                self.current[i] += 1;
                for j in i + 1..k {
                    self.current[j] = self.current[j - 1] + 1;
                }
                return Some(&self.current);
            }
        }
        self.done = true;
        None
    }
}

/// Collects all `k`-subsets of `0..n` in lexicographic order.
pub fn all_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut it = Subsets::new(n, k);
    while let Some(s) = it.next_subset() {
        out.push(s.to_vec());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(-1, 0), 0);
        assert_eq!(binomial(4, -1), 0);
        assert_eq!(binomial(32, 16), 601_080_390);
        assert!(checked_binomial(400, 200).is_none());
    }

    #[test]
    fn table_matches_direct() {
        let t = BinomialTable::new(20, 4);
        for n in 0..=20 {
            for k in 0..=4 {
                assert_eq!(t.get(n, k) as i128, binomial(n as i64, k as i64));
            }
        }
    }

    #[test]
    fn subsets_lexicographic_and_ranked() {
        let subs = all_subsets(6, 3);
        assert_eq!(subs.len(), 20);
        assert_eq!(subs[0], vec![0, 1, 2]);
        assert_eq!(subs[19], vec![3, 4, 5]);
        assert!(subs.windows(2).all(|w| w[0] < w[1]));
        let t = BinomialTable::new(6, 3);
        let mut ranks: Vec<usize> = subs.iter().map(|s| t.colex_rank(s)).collect();
        ranks.sort_unstable();
        assert_eq!(ranks, (0..20).collect::<Vec<_>>());
    }

    #[test]
    fn degenerate_subsets() {
        assert_eq!(all_subsets(3, 0), vec![Vec::<usize>::new()]);
        assert!(all_subsets(2, 3).is_empty());
        assert_eq!(all_subsets(3, 3), vec![vec![0, 1, 2]]);
    }
}
