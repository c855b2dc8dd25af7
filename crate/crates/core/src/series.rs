//! Truncated formal power series with exact integer coefficients.
//!
//! Series here are indexed by total node count: the coefficient of `z^i`
//! in [`node_gf`] is the number of binary trees with `i` nodes. A tree of
//! size `n` has `2n + 1` nodes, so every even coefficient is zero.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::Count;

/// Dense series `c_0 + c_1 z + ... + c_d z^d`, truncated at degree `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PowerSeries {
    coeffs: Vec<BigInt>,
}

impl PowerSeries {
    pub fn zero(degree: usize) -> Self {
        PowerSeries {
            coeffs: vec![BigInt::zero(); degree + 1],
        }
    }

    pub fn one(degree: usize) -> Self {
        Self::monomial(0, degree)
    }

    /// `z^power`, or zero when the power lies past the truncation degree.
    pub fn monomial(power: usize, degree: usize) -> Self {
        let mut s = Self::zero(degree);
        if power <= degree {
            s.coeffs[power] = BigInt::one();
        }
        s
    }

    /// Pads or truncates `coeffs` to `degree`.
    pub fn from_coeffs<I, T>(coeffs: I, degree: usize) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut s = Self::zero(degree);
        for (slot, c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = c.into();
        }
        s
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `z^i`; zero beyond the truncation degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn truncate(&self, degree: usize) -> Self {
        Self::from_coeffs(self.coeffs.iter().cloned(), degree)
    }

    /// Multiplies by `z^shift`, keeping the truncation degree.
    pub fn shift(&self, shift: usize) -> Self {
        let degree = self.degree();
        let mut out = Self::zero(degree);
        for (i, c) in self.coeffs.iter().enumerate() {
            if i + shift > degree {
                break;
            }
            out.coeffs[i + shift] = c.clone();
        }
        out
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let degree = self.degree().min(other.degree());
        let mut out = Self::zero(degree);
        for (i, slot) in out.coeffs.iter_mut().enumerate() {
            *slot = &self.coeffs[i] + &other.coeffs[i];
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}z")?,
                _ => write!(f, "{c}z^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(z^{})", self.degree() + 1)
    }
}

/// Cauchy product of `a` and `b`, truncated at `degree`.
pub fn ps_mul(a: &PowerSeries, b: &PowerSeries, degree: usize) -> PowerSeries {
    let mut out = PowerSeries::zero(degree);
    for (i, ai) in a.coeffs.iter().enumerate().take(degree + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.coeffs.iter().enumerate().take(degree + 1 - i) {
            if bj.is_zero() {
                continue;
            }
            out.coeffs[i + j] += ai * bj;
        }
    }
    out
}

/// `base^exp` truncated at `degree`, by square-and-multiply.
pub fn ps_pow(base: &PowerSeries, exp: usize, degree: usize) -> PowerSeries {
    let mut result = PowerSeries::one(degree);
    let mut square = base.truncate(degree);
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = ps_mul(&result, &square, degree);
        }
        e >>= 1;
        if e > 0 {
            square = ps_mul(&square, &square, degree);
        }
    }
    result
}

/// The Catalan number `binomial(2n, n) / (n + 1)`.
pub fn catalan(n: usize) -> Count {
    let central = binomial(2 * n, n);
    let (q, r) = central.div_rem(&BigUint::from(n + 1));
    debug_assert!(r.is_zero());
    q
}

/// `binomial(n, k)` by the multiplicative formula; every partial product is
/// itself a binomial coefficient, so each division is exact.
pub fn binomial(n: usize, k: usize) -> Count {
    if k > n {
        return Count::zero();
    }
    let k = k.min(n - k);
    let mut acc = Count::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// The tree-counting series `N(z)`, truncated at `degree`.
///
/// Solved from `N = z + z N^2` by fixed-point iteration from `N = 0`. Each
/// round fixes at least two more low-order coefficients, so
/// `ceil(degree / 2) + 1` rounds are enough.
pub fn node_gf(degree: usize) -> PowerSeries {
    let z = PowerSeries::monomial(1, degree);
    let mut n = PowerSeries::zero(degree);
    for _ in 0..degree.div_ceil(2) + 1 {
        let squared = ps_mul(&n, &n, degree);
        n = z.add(&squared.shift(1));
    }
    n
}

/// `S^k(z) = z^(k+1) N(z)^k`, truncated at `degree`.
///
/// Panics if `k` is zero.
pub fn spine_gf(k: usize, degree: usize) -> PowerSeries {
    assert!(k >= 1, "spine_gf needs k >= 1");
    if k + 1 > degree {
        return PowerSeries::zero(degree);
    }
    let inner = degree - (k + 1);
    let n = node_gf(inner);
    ps_pow(&n, k, inner).truncate(degree).shift(k + 1)
}

/// The series `S^1, S^2, ...` up to `degree`, sharing one power chain.
///
/// Item `k` equals `spine_gf(k, degree)`.
pub fn spine_gfs(degree: usize) -> impl Iterator<Item = PowerSeries> {
    let n = node_gf(degree);
    let mut power = PowerSeries::one(degree);
    (1..degree).map(move |k| {
        power = ps_mul(&power, &n, degree - (k + 1));
        power.truncate(degree).shift(k + 1)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &PowerSeries) -> Vec<i64> {
        s.coeffs()
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect()
    }

    #[test]
    fn catalan_values() {
        assert_eq!(catalan(0), Count::from(1u32));
        assert_eq!(catalan(4), Count::from(14u32));
        assert_eq!(catalan(10), Count::from(16796u32));
        assert_eq!(catalan(11), Count::from(58786u32));
        // c_{m+1} (m + 2) = 2 (2m + 1) c_m
        for m in 0..200 {
            assert_eq!(catalan(m + 1) * (m + 2), catalan(m) * (2 * (2 * m + 1)));
        }
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(5, 7), Count::zero());
        assert_eq!(binomial(0, 0), Count::one());
        assert_eq!(
            binomial(100, 49).to_string(),
            "98913082887808032681188722800"
        );
    }

    #[test]
    fn multiplication() {
        let one_plus_z = PowerSeries::from_coeffs([1, 1], 2);
        assert_eq!(ints(&ps_mul(&one_plus_z, &one_plus_z, 2)), [1, 2, 1]);
        assert_eq!(ints(&ps_mul(&one_plus_z, &one_plus_z, 1)), [1, 2]);

        let a = PowerSeries::from_coeffs([3, -1, 4, 1, -5], 4);
        assert_eq!(ps_mul(&a, &PowerSeries::one(4), 4), a);

        let n = node_gf(6);
        let sq = ps_mul(&n, &n, 6);
        assert_eq!(ints(&sq), [0, 0, 1, 0, 2, 0, 5]);
    }

    #[test]
    fn power_matches_repeated_products() {
        let n = node_gf(15);
        let mut direct = PowerSeries::one(15);
        for e in 0..6 {
            assert_eq!(ps_pow(&n, e, 15), direct);
            direct = ps_mul(&direct, &n, 15);
        }
    }

    #[test]
    fn node_series_small_degrees() {
        assert_eq!(ints(&node_gf(0)), [0]);
        assert_eq!(ints(&node_gf(1)), [0, 1]);
        assert_eq!(ints(&node_gf(9)), [0, 1, 0, 1, 0, 2, 0, 5, 0, 14]);
        assert_eq!(node_gf(21).coeff(21), BigInt::from(16796));
    }

    #[test]
    fn node_series_is_a_fixed_point() {
        for degree in [0, 1, 2, 7, 30, 61] {
            let n = node_gf(degree);
            let z = PowerSeries::monomial(1, degree);
            let rhs = z.add(&ps_mul(&n, &n, degree).shift(1));
            assert_eq!(rhs, n, "degree {degree}");
            for m in 0..=degree / 2 {
                if 2 * m < degree {
                    assert_eq!(n.coeff(2 * m + 1), BigInt::from(catalan(m)));
                }
                assert!(n.coeff(2 * m).is_zero());
            }
        }
    }

    #[test]
    fn spine_series_small_entries() {
        assert_eq!(spine_gf(4, 9).coeff(9), BigInt::from(1));
        assert_eq!(spine_gf(2, 9).coeff(9), BigInt::from(5));
        assert_eq!(spine_gf(5, 15).coeff(15), BigInt::from(20));
        assert!(spine_gf(7, 5).is_zero());
    }

    #[test]
    fn shared_power_chain_matches_direct() {
        let degree = 25;
        for (k, s) in (1..).zip(spine_gfs(degree)) {
            assert_eq!(s, spine_gf(k, degree), "k = {k}");
        }
    }

    #[test]
    fn spine_series_sum_to_catalan() {
        let max_n = 30;
        let degree = 2 * max_n + 1;
        let all: Vec<PowerSeries> = spine_gfs(degree).collect();
        for n in 1..=max_n {
            let total: BigInt = all.iter().take(n).map(|s| s.coeff(2 * n + 1)).sum();
            assert_eq!(total, BigInt::from(catalan(n)), "n = {n}");
            assert_eq!(all[0].coeff(2 * n + 1), BigInt::from(catalan(n - 1)));
            if n >= 2 {
                assert_eq!(all[1].coeff(2 * n + 1), BigInt::from(catalan(n - 1)));
            }
        }
        for s in &all {
            assert!(s.coeffs().iter().step_by(2).all(Zero::is_zero));
        }
    }

    #[test]
    fn display() {
        let s = PowerSeries::from_coeffs([1, 0, -2], 3);
        assert_eq!(s.to_string(), "1 + -2z^2 + O(z^4)");
        assert_eq!(PowerSeries::zero(1).to_string(), "0 + O(z^2)");
    }
}
