//! Distribution of right-branch segment counts over all trees of one size.
//!
//! Four routes produce the same table:
//!
//! | route | source |
//! |---|---|
//! | [`dist_exhaustive`] | counts over [`enumerate`](crate::trees::enumerate) |
//! | [`dist_recurrence`] | level-to-level recurrence from the insertion step |
//! | [`dist_series`] | coefficients of `z^(k+1) N(z)^k` |
//! | [`dist_closed`] | ballot numbers `k / (2n - k) * binomial(2n - k, n - k)` |

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ratio::ExactRatio;
use crate::series::{binomial, catalan, spine_gfs};
use crate::trees::{enumerate_with_cap, DEFAULT_CAP};
use crate::Count;

/// Tree counts by segment count for one size `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpineDistribution {
    n: usize,
    counts: Vec<Count>,
    total: Count,
}

impl SpineDistribution {
    /// `counts[i]` is the number of trees with `i + 1` segments.
    pub fn from_counts(n: usize, counts: Vec<Count>) -> Self {
        let total = if n == 0 {
            Count::one()
        } else {
            counts.iter().sum()
        };
        SpineDistribution { n, counts, total }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn total(&self) -> &Count {
        &self.total
    }

    /// Counts for `k = 1..=n`, in order.
    pub fn counts(&self) -> &[Count] {
        &self.counts
    }

    /// Number of size-`n` trees with exactly `k` segments.
    pub fn count(&self, k: usize) -> Count {
        match k {
            0 if self.n == 0 => Count::one(),
            0 => Count::zero(),
            k => self.counts.get(k - 1).cloned().unwrap_or_default(),
        }
    }

    /// `(k, count)` pairs for `k = 1..=n`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Count)> {
        (1..).zip(self.counts.iter())
    }

    /// Sum of `k * count(k)`.
    pub fn weighted_sum(&self) -> Count {
        self.iter().map(|(k, c)| c * k).sum()
    }

    pub fn fraction(&self, k: usize) -> ExactRatio {
        ExactRatio::from_counts(&self.count(k), &self.total)
    }
}

pub fn dist_exhaustive(n: usize) -> Result<SpineDistribution> {
    dist_exhaustive_with_cap(n, DEFAULT_CAP)
}

pub fn dist_exhaustive_with_cap(n: usize, cap: usize) -> Result<SpineDistribution> {
    let trees = enumerate_with_cap(n, cap)?;
    let mut tally = vec![0u64; n + 1];
    for t in &trees {
        tally[t.spine_segments()] += 1;
    }
    let counts = tally.into_iter().skip(1).map(Count::from).collect();
    Ok(SpineDistribution::from_counts(n, counts))
}

/// Successive levels of the insertion-step recurrence.
///
/// A tree with `k` segments produces one successor with each segment count
/// `1..=k+1`, so `S(n+1, j) = sum over k >= j-1 of S(n, k)`. Level `n` is
/// stored with index `k = 0..=n`, where only the size-0 level has a nonzero
/// entry at `k = 0`.
#[derive(Clone, Debug)]
pub struct RecurrenceLevels {
    n: usize,
    level: Vec<Count>,
}

impl RecurrenceLevels {
    pub fn new() -> Self {
        RecurrenceLevels {
            n: 0,
            level: vec![Count::one()],
        }
    }

    pub fn current(&self) -> SpineDistribution {
        SpineDistribution::from_counts(self.n, self.level[1..].to_vec())
    }

    pub fn advance(&mut self) {
        let mut next = vec![Count::zero(); self.n + 2];
        let mut suffix = Count::zero();
        for j in (1..=self.n + 1).rev() {
            suffix += &self.level[j - 1];
            next[j] = suffix.clone();
        }
        self.level = next;
        self.n += 1;
    }
}

impl Default for RecurrenceLevels {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for RecurrenceLevels {
    type Item = SpineDistribution;

    /// Yields the current level, then advances.
    fn next(&mut self) -> Option<SpineDistribution> {
        let out = self.current();
        self.advance();
        Some(out)
    }
}

pub fn dist_recurrence(n: usize) -> SpineDistribution {
    let mut levels = RecurrenceLevels::new();
    for _ in 0..n {
        levels.advance();
    }
    levels.current()
}

pub fn dist_series(n: usize) -> SpineDistribution {
    dist_series_upto(n).pop().expect("size 0 always present")
}

/// `dist_series(m)` for every `m` in `0..=max_n`, from one set of series.
pub fn dist_series_upto(max_n: usize) -> Vec<SpineDistribution> {
    let degree = 2 * max_n + 1;
    let mut columns: Vec<Vec<Count>> = vec![Vec::new(); max_n + 1];
    for (k, series) in (1..=max_n).zip(spine_gfs(degree)) {
        for (m, column) in columns.iter_mut().enumerate().skip(k) {
            let c = series.coeff(2 * m + 1);
            column.push(c.to_biguint().expect("tree counts are nonnegative"));
        }
    }
    columns
        .into_iter()
        .enumerate()
        .map(|(m, counts)| SpineDistribution::from_counts(m, counts))
        .collect()
}

/// Ballot-number count of size-`n` trees with `k` segments.
pub fn dist_closed(n: usize, k: usize) -> Result<Count> {
    if k < 1 || k > n {
        return Err(Error::DomainError { n, k });
    }
    let m = 2 * n - k;
    let scaled = binomial(m, n - k) * k;
    let (q, r) = scaled.div_rem(&BigUint::from(m));
    debug_assert!(r.is_zero());
    Ok(q)
}

pub fn dist_closed_all(n: usize) -> SpineDistribution {
    let counts = (1..=n)
        .map(|k| dist_closed(n, k).expect("k in range"))
        .collect();
    SpineDistribution::from_counts(n, counts)
}

/// `c_(n+1) - c_n`: the total number of segments over all size-`n` trees.
pub fn weighted_sum(n: usize) -> Count {
    catalan(n + 1) - catalan(n)
}

/// Average segment count before reduction: `(c_(n+1) - c_n, c_n)`.
///
/// Panics if `n` is zero.
pub fn average_parts(n: usize) -> (Count, Count) {
    assert!(n >= 1, "average is defined for n >= 1");
    (weighted_sum(n), catalan(n))
}

/// Average segment count over all size-`n` trees, reduced.
pub fn average(n: usize) -> ExactRatio {
    let (num, den) = average_parts(n);
    ExactRatio::from_counts(&num, &den)
}

/// Hand-tabulated distributions for `n = 1..=10`.
pub const REFERENCE_TABLES: [&[u64]; 10] = [
    &[1],
    &[1, 1],
    &[2, 2, 1],
    &[5, 5, 3, 1],
    &[14, 14, 9, 4, 1],
    &[42, 42, 28, 14, 5, 1],
    &[132, 132, 90, 48, 20, 6, 1],
    &[429, 429, 297, 165, 75, 27, 7, 1],
    &[1430, 1430, 1001, 572, 275, 110, 35, 8, 1],
    &[4862, 4862, 3432, 2002, 1001, 429, 154, 44, 9, 1],
];

/// Unreduced averages for `n = 1..=10`, as `(numerator, denominator)`.
pub const REFERENCE_AVERAGES: [(u64, u64); 10] = [
    (1, 1),
    (3, 2),
    (9, 5),
    (28, 14),
    (90, 42),
    (297, 132),
    (1001, 429),
    (3432, 1430),
    (11934, 4862),
    (41990, 16796),
];

pub fn reference_table(n: usize) -> Option<SpineDistribution> {
    let row = REFERENCE_TABLES.get(n.checked_sub(1)?)?;
    Some(SpineDistribution::from_counts(
        n,
        row.iter().map(|&c| Count::from(c)).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(d: &SpineDistribution) -> Vec<u64> {
        d.counts()
            .iter()
            .map(|c| u64::try_from(c).unwrap())
            .collect()
    }

    #[test]
    fn exhaustive_examples() {
        assert_eq!(counts(&dist_exhaustive(1).unwrap()), [1]);
        assert_eq!(counts(&dist_exhaustive(6).unwrap()), [42, 42, 28, 14, 5, 1]);
        assert_eq!(
            counts(&dist_exhaustive(10).unwrap()),
            [4862, 4862, 3432, 2002, 1001, 429, 154, 44, 9, 1]
        );
        assert_eq!(
            dist_exhaustive(15).unwrap_err(),
            Error::CapExceeded { n: 15, cap: 14 }
        );
    }

    #[test]
    fn recurrence_examples() {
        assert_eq!(counts(&dist_recurrence(5)), [14, 14, 9, 4, 1]);
        assert_eq!(counts(&dist_recurrence(2)), [1, 1]);
        assert_eq!(dist_recurrence(12).count(1), Count::from(58786u32));
        assert_eq!(dist_recurrence(12).count(1), catalan(11));
    }

    #[test]
    fn series_examples() {
        assert_eq!(counts(&dist_series(7)), [132, 132, 90, 48, 20, 6, 1]);
        assert_eq!(counts(&dist_series(1)), [1]);
        assert_eq!(dist_series(9).count(6), Count::from(110u32));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(dist_closed(7, 4).unwrap(), Count::from(48u32));
        assert_eq!(dist_closed(8, 6).unwrap(), Count::from(27u32));
        for n in 1..40 {
            assert_eq!(dist_closed(n, n).unwrap(), Count::one());
        }
        assert_eq!(dist_closed(5, 0), Err(Error::DomainError { n: 5, k: 0 }));
        assert_eq!(dist_closed(5, 6), Err(Error::DomainError { n: 5, k: 6 }));
        assert_eq!(dist_closed(0, 0), Err(Error::DomainError { n: 0, k: 0 }));
    }

    #[test]
    fn size_zero_is_degenerate() {
        for d in [
            dist_exhaustive(0).unwrap(),
            dist_recurrence(0),
            dist_series(0),
            dist_closed_all(0),
        ] {
            assert!(d.counts().is_empty());
            assert_eq!(d.total(), &Count::one());
            assert_eq!(d.count(0), Count::one());
        }
    }

    #[test]
    fn closed_form_admitted_against_enumeration() {
        for n in 1..=9 {
            assert_eq!(dist_closed_all(n), dist_exhaustive(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn routes_agree_up_to_eleven() {
        let series = dist_series_upto(11);
        for (n, rec) in RecurrenceLevels::new().take(12).enumerate() {
            let ex = dist_exhaustive(n).unwrap();
            assert_eq!(rec, ex, "n = {n}");
            assert_eq!(series[n], ex, "n = {n}");
            assert_eq!(dist_closed_all(n), ex, "n = {n}");
        }
    }

    #[test]
    fn reference_tables_reproduced() {
        for n in 1..=10 {
            assert_eq!(dist_recurrence(n), reference_table(n).unwrap());
        }
        assert!(reference_table(0).is_none());
        assert!(reference_table(11).is_none());
    }

    #[test]
    fn averages() {
        assert_eq!(average(4), ExactRatio::integer(2));
        assert_eq!(average(5), ExactRatio::new(90, 42));
        assert_eq!(average(10), ExactRatio::new(5, 2));
        assert_eq!(weighted_sum(1), Count::one());
        assert_eq!(weighted_sum(9), Count::from(11934u32));
        assert_eq!(weighted_sum(12), Count::from(534888u32));
        for (n, &(num, den)) in (1..).zip(REFERENCE_AVERAGES.iter()) {
            assert_eq!(average_parts(n), (Count::from(num), Count::from(den)));
            assert_eq!(dist_recurrence(n).weighted_sum(), Count::from(num));
        }
    }

    #[test]
    fn average_closed_form() {
        for n in 1..=400 {
            assert_eq!(
                average(n),
                ExactRatio::new(3 * n as u64, n as u64 + 2),
                "n = {n}"
            );
        }
    }

    #[test]
    fn monotone_counts() {
        for d in RecurrenceLevels::new().take(60).skip(2) {
            let c = d.counts();
            assert_eq!(c[0], c[1]);
            assert!(c.windows(2).all(|w| w[0] >= w[1]));
            assert_eq!(c.last(), Some(&Count::one()));
        }
    }
}
