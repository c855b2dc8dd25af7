//! Limits of the segment-count fractions.
//!
//! For a tree family with `N = z * phi(N)`, the characteristic root `tau` is
//! the smallest positive solution of `phi(x) = x * phi'(x)`. Substituting
//! `z = N / phi(N)` turns `S^k(z) = z^(k+1) N^k` into the rational function
//! `N^(2k+1) / phi(N)^(k+1)`, and the limiting fraction of trees with `k`
//! segments is its derivative at `N = tau`. Binary trees have `phi = 1 + x^2`,
//! `tau = 1`, and the limit `k / 2^(k+1)`.
//!
//! Everything here is exact. Floating point appears only in
//! [`RationalFn::eval_f64`], which exists for finite-difference sanity checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ratio::ExactRatio;
use crate::series::{ps_mul, spine_gf, PowerSeries};
use crate::stats::dist_recurrence;

/// Univariate polynomial with rational coefficients; `coeffs[i]` multiplies `x^i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigRational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints<I: IntoIterator<Item = i64>>(coeffs: I) -> Self {
        Self::new(
            coeffs
                .into_iter()
                .map(|c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_ints([1])
    }

    /// `x^power`.
    pub fn monomial(power: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); power + 1];
        coeffs[power] = BigRational::one();
        Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..len).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..len).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, exp: usize) -> Poly {
        let mut result = Poly::one();
        let mut square = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&square);
            }
            e >>= 1;
            if e > 0 {
                square = square.mul(&square);
            }
        }
        result
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(i.into()))
                .collect(),
        )
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// `phi(x) - x * phi'(x)` for `phi = self`.
    pub fn characteristic(&self) -> Poly {
        self.sub(&Poly::monomial(1).mul(&self.derivative()))
    }
}

/// `num / den` with polynomial numerator and denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    /// Panics if `den` is the zero polynomial.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        RationalFn { num, den }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// Quotient rule: `(num' * den - num * den') / den^2`.
    pub fn derivative(&self) -> RationalFn {
        let num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        RationalFn::new(num, self.den.mul(&self.den))
    }

    /// The quotient rule evaluated at `x` without expanding `den^2`.
    pub fn derivative_at(&self, x: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole(x.to_string()));
        }
        let n = self.num.eval(x);
        let dn = self.num.derivative().eval(x);
        let dd = self.den.derivative().eval(x);
        Ok((dn * &d - n * dd) / (&d * &d))
    }

    pub fn eval(&self, x: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole(x.to_string()));
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }
}

/// `phi(x) = 1 + x^2` for binary trees.
pub fn binary_phi() -> Poly {
    Poly::from_ints([1, 0, 1])
}

/// Largest bracket [`tau`] searches before giving up.
const BRACKET_LIMIT_BITS: u32 = 64;

/// Bisection stops once the bracket is narrower than this (`10^-12`).
fn tau_tolerance() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u64).pow(12))
}

/// Smallest positive root of `phi(x) = x * phi'(x)`.
///
/// For nonnegative coefficients with `phi(0) > 0` the left side minus the
/// right side is `a0 - sum (j - 1) a_j x^j`, which strictly decreases on
/// `x > 0`, so the positive root is unique when it exists. Quadratics with a
/// rational root are solved exactly; anything else is bracketed by doubling
/// and narrowed by exact bisection to within `10^-12`, returning the midpoint.
pub fn tau(phi: &Poly) -> Result<ExactRatio> {
    if phi.coeffs().iter().any(Signed::is_negative) {
        return Err(Error::InvalidPolynomial(
            "coefficients must be nonnegative".into(),
        ));
    }
    if !phi.coeff(0).is_positive() {
        return Err(Error::InvalidPolynomial("phi(0) must be positive".into()));
    }
    let g = phi.characteristic();

    if phi.degree() == Some(2) {
        // g = a0 - a2 x^2
        let ratio = phi.coeff(0) / phi.coeff(2);
        if let Some(root) = rational_sqrt(&ratio) {
            return Ok(root.into());
        }
    }

    let mut hi = BigRational::one();
    let mut bits = 0;
    while g.eval(&hi).is_positive() {
        if bits == BRACKET_LIMIT_BITS {
            return Err(Error::NoRoot {
                bound: hi.to_string(),
            });
        }
        hi *= BigRational::from_integer(2.into());
        bits += 1;
    }
    if g.eval(&hi).is_zero() {
        return Ok(hi.into());
    }

    let mut lo = BigRational::zero();
    let tol = tau_tolerance();
    let two = BigRational::from_integer(2.into());
    while &hi - &lo >= tol {
        let mid = (&lo + &hi) / &two;
        let v = g.eval(&mid);
        if v.is_zero() {
            return Ok(mid.into());
        }
        if v.is_positive() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(((lo + hi) / two).into())
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let square_root = |v: &BigInt| {
        let s = v.sqrt();
        (&s * &s == *v).then_some(s)
    };
    let n = square_root(r.numer())?;
    let d = square_root(r.denom())?;
    Some(BigRational::new(n, d))
}

/// `N^(2k+1) / phi(N)^(k+1)`: `S^k` after substituting `z = N / phi(N)`.
pub fn spine_rational_for(phi: &Poly, k: usize) -> RationalFn {
    RationalFn::new(Poly::monomial(2 * k + 1), phi.pow(k + 1))
}

/// `N^(2k+1) / (1 + N^2)^(k+1)`.
///
/// Panics if `k` is zero.
pub fn spine_rational(k: usize) -> RationalFn {
    assert!(k >= 1, "spine_rational needs k >= 1");
    spine_rational_for(&binary_phi(), k)
}

/// Limiting fraction of trees with `k` segments: the derivative of
/// [`spine_rational`] at the characteristic root.
///
/// Panics if `k` is zero.
pub fn limit_fraction(k: usize) -> ExactRatio {
    assert!(k >= 1, "limit_fraction needs k >= 1");
    let phi = binary_phi();
    let root = tau(&phi).expect("1 + x^2 has characteristic root 1");
    spine_rational_for(&phi, k)
        .derivative_at(root.as_rational())
        .expect("1 + x^2 has no real zeros")
        .into()
}

/// `k / 2^(k+1)` written out directly.
pub fn limit_formula(k: usize) -> ExactRatio {
    ExactRatio::new(BigInt::from(k), BigInt::one() << (k + 1))
}

/// Both sides of `S^k(N / (1 + N^2)) = N^(2k+1) (1 + N^2)^-(k+1)` as series in `N`.
pub fn substitution_sides(k: usize, degree: usize) -> (PowerSeries, PowerSeries) {
    assert!(k >= 1, "substitution needs k >= 1");

    // 1 / (1 + N^2) = 1 - N^2 + N^4 - ...
    let geometric = PowerSeries::from_coeffs(
        (0..=degree).map(|i| match i % 4 {
            0 => 1,
            2 => -1,
            _ => 0,
        }),
        degree,
    );
    let z_of_n = geometric.shift(1);

    // Horner: sum_i s_i z^i with z = z_of_n.
    let s = spine_gf(k, degree);
    let mut lhs = PowerSeries::zero(degree);
    for c in s.coeffs().iter().rev() {
        lhs = ps_mul(&lhs, &z_of_n, degree);
        lhs = lhs.add(&PowerSeries::from_coeffs([c.clone()], degree));
    }

    let mut rhs = PowerSeries::one(degree);
    for _ in 0..=k {
        rhs = ps_mul(&rhs, &geometric, degree);
    }
    let rhs = rhs.shift(2 * k + 1);
    (lhs, rhs)
}

pub fn substitution_check(k: usize, degree: usize) -> bool {
    let (lhs, rhs) = substitution_sides(k, degree);
    lhs == rhs
}

/// Partial sums `sum_{k<=K} k / 2^(k+1)` and `sum_{k<=K} k^2 / 2^(k+1)`.
pub fn moment_sums(terms: usize) -> (ExactRatio, ExactRatio) {
    let mut first = BigRational::zero();
    let mut second = BigRational::zero();
    for k in 1..=terms {
        let weight = BigRational::new(BigInt::one(), BigInt::one() << (k + 1));
        let kk = BigRational::from_integer(k.into());
        first += &kk * &weight;
        second += &kk * &kk * &weight;
    }
    (first.into(), second.into())
}

/// One line of a finite-size versus limit comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceRow {
    pub k: usize,
    pub observed: ExactRatio,
    pub limit: ExactRatio,
}

/// `S_n^k / c_n` next to `k / 2^(k+1)` for `k = 1..=k_max`.
pub fn empirical_convergence(n: usize, k_max: usize) -> Vec<ConvergenceRow> {
    assert!(k_max <= n, "k_max must not exceed n");
    let dist = dist_recurrence(n);
    (1..=k_max)
        .map(|k| ConvergenceRow {
            k,
            observed: dist.fraction(k),
            limit: limit_formula(k),
        })
        .collect()
}
