//! Truncated Taylor series over exact rationals or complex floats, and coefficient
//! extraction for Barnes-type generating functions.
//!
//! Coefficients are stored in Taylor form: `coeffs[k]` multiplies `t^k`. The `t^n / n!`
//! normalisation used for Bernoulli-type numbers is applied only at extraction.

use crate::error::{Error, Result};
use crate::numkernel::C64;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Largest series order the crate's extraction routines accept.
pub const ORDER_CAP: usize = 64;

/// Coefficient ring for [`TruncatedSeries`].
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
}

impl Coeff for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Coeff for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    fn from_i64(n: i64) -> Self {
        C64::new(n as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}

/// `c_0 + c_1 t + ... + c_N t^N + O(t^{N+1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Coeff> TruncatedSeries<T> {
    /// Series of order `coeffs.len() - 1`. An empty vector is read as the order-0 zero series.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![T::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = T::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &T {
        &self.coeffs[k]
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        TruncatedSeries {
            coeffs: (0..=n)
                .map(|k| self.coeffs[k].clone() + other.coeffs[k].clone())
                .collect(),
        }
    }

    /// Coefficients multiplied by `k!`: the `t^k / k!` normalisation.
    pub fn egf_coeffs(&self) -> Vec<T> {
        let mut fact = T::one();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if k > 0 {
                    fact = fact.clone() * T::from_i64(k as i64);
                }
                c.clone() * fact.clone()
            })
            .collect()
    }
}

/// Cauchy product truncated at the smaller order.
pub fn ts_mul<T: Coeff>(a: &TruncatedSeries<T>, b: &TruncatedSeries<T>) -> TruncatedSeries<T> {
    let n = a.order().min(b.order());
    let coeffs = (0..=n)
        .map(|k| {
            (0..=k).fold(T::zero(), |acc, i| {
                acc + a.coeffs[i].clone() * b.coeffs[k - i].clone()
            })
        })
        .collect();
    TruncatedSeries { coeffs }
}

/// Multiplicative inverse modulo `t^{N+1}`.
pub fn ts_reciprocal<T: Coeff>(a: &TruncatedSeries<T>) -> Result<TruncatedSeries<T>> {
    let c0 = a.coeffs[0].clone();
    if c0.is_zero() {
        return Err(Error::SingularSeries);
    }
    let inv0 = T::one() / c0;
    let mut b: Vec<T> = Vec::with_capacity(a.coeffs.len());
    b.push(inv0.clone());
    for k in 1..=a.order() {
        let s = (1..=k).fold(T::zero(), |acc, i| {
            acc + a.coeffs[i].clone() * b[k - i].clone()
        });
        b.push(-(s * inv0.clone()));
    }
    Ok(TruncatedSeries { coeffs: b })
}

/// `e^{a t}` to order `n`: coefficients `a^k / k!`.
pub fn ts_exp_linear<T: Coeff>(a: T, n: usize) -> TruncatedSeries<T> {
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut c = T::one();
    coeffs.push(c.clone());
    for k in 1..=n {
        c = c * a.clone() / T::from_i64(k as i64);
        coeffs.push(c.clone());
    }
    TruncatedSeries { coeffs }
}

/// `(e^{a t} - 1)/t` to order `n`: coefficients `a^{k+1}/(k+1)!`.
pub fn ts_expm1_over_t<T: Coeff>(a: T, n: usize) -> TruncatedSeries<T> {
    let e = ts_exp_linear(a, n + 1);
    TruncatedSeries {
        coeffs: e.coeffs[1..].to_vec(),
    }
}

/// Barnes multiple Bernoulli polynomials `B_k(x, r | a_1..a_r)`, `k = 0..=n`, read off
/// `t^r e^{xt} / prod (e^{a_j t} - 1) = sum B_k t^k / k!`.
pub fn barnes_gf_coeffs<T: Coeff>(x: T, a: &[T], n: usize) -> Result<Vec<T>> {
    if a.is_empty() {
        return Err(Error::Domain("Barnes parameters must be non-empty".into()));
    }
    if n > ORDER_CAP {
        return Err(Error::Config(format!("order {n} exceeds cap {ORDER_CAP}")));
    }
    if a.iter().any(Coeff::is_zero) {
        return Err(Error::SingularSeries);
    }
    // invert factor by factor: the reciprocal of the full product cancels badly in floating point
    let mut series = ts_exp_linear(x, n);
    for aj in a {
        series = ts_mul(&series, &ts_reciprocal(&ts_expm1_over_t(aj.clone(), n))?);
    }
    Ok(series.egf_coeffs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn products_of_small_series() {
        let a = TruncatedSeries::new(vec![c(1.0), c(1.0), c(0.0)]);
        let b = TruncatedSeries::new(vec![c(1.0), c(-1.0), c(0.0)]);
        assert_eq!(ts_mul(&a, &b).coeffs(), &[c(1.0), c(0.0), c(-1.0)]);
        let one = TruncatedSeries::one(2);
        assert_eq!(ts_mul(&a, &one), a);
        // the result carries the smaller order
        assert_eq!(ts_mul(&a, &TruncatedSeries::one(1)).order(), 1);
    }

    #[test]
    fn exp_series_multiply() {
        let (x, y) = (0.7, -1.9);
        let p = ts_mul(&ts_exp_linear(c(x), 12), &ts_exp_linear(c(y), 12));
        let q = ts_exp_linear(c(x + y), 12);
        for k in 0..=12 {
            assert!((p.coeff(k) - q.coeff(k)).norm() < 1e-13);
        }
    }

    #[test]
    fn reciprocal_examples() {
        assert_eq!(
            ts_reciprocal(&TruncatedSeries::<BigRational>::one(4)).unwrap(),
            TruncatedSeries::one(4)
        );
        let r = ts_reciprocal(&TruncatedSeries::new(vec![rat(1, 1), rat(1, 1), rat(0, 1), rat(0, 1)])).unwrap();
        assert_eq!(r.coeffs(), &[rat(1, 1), rat(-1, 1), rat(1, 1), rat(-1, 1)]);
        let z = TruncatedSeries::new(vec![c(0.0), c(1.0)]);
        assert_eq!(ts_reciprocal(&z), Err(Error::SingularSeries));
    }

    #[test]
    fn exp_linear_coefficients_and_derivative() {
        assert_eq!(ts_exp_linear(rat(0, 1), 3).coeffs(), &[rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)]);
        assert_eq!(ts_exp_linear(rat(1, 1), 3).coeffs(), &[rat(1, 1), rat(1, 1), rat(1, 2), rat(1, 6)]);
        // d/dt e^{at}: (k+1) c_{k+1} = a c_k
        let a = 1.37;
        let s = ts_exp_linear(c(a), 15);
        for k in 0..15 {
            let d = s.coeff(k + 1) * (k as f64 + 1.0);
            assert!((d - s.coeff(k) * a).norm() < 1e-14);
        }
    }

    /// Classical Bernoulli numbers by the recurrence sum_{k<=n} C(n+1,k) B_k = 0.
    fn bernoulli_by_recurrence(n: usize) -> Vec<BigRational> {
        let mut b = vec![rat(1, 1)];
        for m in 1..=n {
            let mut s = rat(0, 1);
            let mut binom = BigInt::from(1);
            for k in 0..m {
                s += BigRational::from_integer(binom.clone()) * b[k].clone();
                binom = binom * BigInt::from((m + 1 - k) as i64) / BigInt::from((k + 1) as i64);
            }
            b.push(-s / BigRational::from_integer(BigInt::from((m + 1) as i64)));
        }
        b
    }

    #[test]
    fn barnes_single_unit_parameter_is_classical() {
        let exact = barnes_gf_coeffs(rat(0, 1), &[rat(1, 1)], 20).unwrap();
        assert_eq!(exact, bernoulli_by_recurrence(20));
        assert_eq!(exact[1], rat(-1, 2));
        for k in 1..10 {
            assert!(Coeff::is_zero(&exact[2 * k + 1]));
        }
        assert_eq!(barnes_gf_coeffs(rat(0, 1), &[rat(1, 1)], 0).unwrap(), vec![rat(1, 1)]);
    }

    #[test]
    fn barnes_polynomial_matches_binomial_expansion() {
        let b = bernoulli_by_recurrence(12);
        let x = 0.37;
        let poly = barnes_gf_coeffs(c(x), &[c(1.0)], 12).unwrap();
        for n in 0..=12 {
            let mut binom = 1.0;
            let mut expect = 0.0;
            for k in 0..=n {
                let bk: f64 = num_traits::ToPrimitive::to_f64(&b[k]).unwrap();
                expect += binom * bk * x.powi((n - k) as i32);
                binom = binom * (n - k) as f64 / (k + 1) as f64;
            }
            assert!((poly[n] - c(expect)).norm() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn barnes_leading_coefficient() {
        // t^2 e^{xt}/(e^t - 1)^2 -> 1 at t = 0
        let v = barnes_gf_coeffs(c(0.4), &[c(1.0), c(1.0)], 3).unwrap();
        assert!((v[0] - c(1.0)).norm() < 1e-15);
        let w = barnes_gf_coeffs(rat(1, 3), &[rat(2, 1), rat(1, 2), rat(3, 1)], 2).unwrap();
        assert_eq!(w[0], rat(1, 3));
    }

    #[test]
    fn barnes_rejects_zero_parameter() {
        assert_eq!(barnes_gf_coeffs(c(0.0), &[c(1.0), c(0.0)], 4), Err(Error::SingularSeries));
        assert!(barnes_gf_coeffs(c(0.0), &[c(1.0)], ORDER_CAP + 1).is_err());
    }

    fn series_strategy() -> impl Strategy<Value = TruncatedSeries<C64>> {
        prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 9)
            .prop_map(|v| TruncatedSeries::new(v.into_iter().map(|(a, b)| C64::new(a, b)).collect()))
    }

    proptest! {
        #[test]
        fn reciprocal_inverts(mut s in series_strategy(), lead in 0.5f64..2.0, sign in prop::bool::ANY) {
            let mut v = s.clone().into_coeffs();
            v[0] = c(if sign { lead } else { -lead });
            s = TruncatedSeries::new(v);
            let p = ts_mul(&s, &ts_reciprocal(&s).unwrap());
            for k in 0..=p.order() {
                let target = if k == 0 { c(1.0) } else { c(0.0) };
                prop_assert!((p.coeff(k) - target).norm() < 1e-13 * 10f64.powi(k as i32 / 2));
            }
        }

        #[test]
        fn mul_is_associative_and_commutative(a in series_strategy(), b in series_strategy(), d in series_strategy()) {
            let ab = ts_mul(&a, &b);
            let ba = ts_mul(&b, &a);
            let l = ts_mul(&ab, &d);
            let r = ts_mul(&a, &ts_mul(&b, &d));
            for k in 0..=8 {
                prop_assert!((ab.coeff(k) - ba.coeff(k)).norm() < 1e-14 * 100.0);
                prop_assert!((l.coeff(k) - r.coeff(k)).norm() < 1e-12);
            }
        }

        #[test]
        fn barnes_is_symmetric(x in -1.0f64..2.0, a1 in 0.3f64..3.0, a2 in 0.3f64..3.0, a3 in 0.3f64..3.0) {
            let p = barnes_gf_coeffs(c(x), &[c(a1), c(a2), c(a3)], 10).unwrap();
            let q = barnes_gf_coeffs(c(x), &[c(a3), c(a1), c(a2)], 10).unwrap();
            // rounding scales with the binomial expansion in x, not with the result
            let spread = x.abs() + a1.max(a2).max(a3);
            for k in 0..=10 {
                let scale = 1.0 + p[0].norm() * spread.powi(k as i32);
                prop_assert!((p[k] - q[k]).norm() <= 1e-13 * scale);
            }
        }
    }
}
