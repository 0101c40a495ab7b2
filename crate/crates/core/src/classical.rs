//! The q = 1 objects: Bernoulli numbers and polynomials (plain, character-twisted and Barnes
//! multiple), Hurwitz and Riemann zeta, Dirichlet L-functions and the Barnes multiple zeta
//! series.
//!
//! Index conventions are the standard ones: `zeta(s) = sum_{n>=1} n^-s`,
//! `zeta(s, x) = sum_{n>=0} (n + x)^-s`, `L(s, chi) = sum_{n>=1} chi(n) n^-s` and
//! `L(s, x | chi) = sum_{n>=0} chi(n) (n + x)^-s`.

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::numkernel::{re, Evaluation, C64};
use crate::powerseries::{barnes_gf_coeffs, ts_exp_linear, ts_expm1_over_t, ts_mul, ts_reciprocal, Coeff, TruncatedSeries};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::sync::{LazyLock, RwLock};

static BERNOULLI: LazyLock<RwLock<Vec<BigRational>>> =
    LazyLock::new(|| RwLock::new(vec![BigRational::from_integer(BigInt::from(1))]));

fn binomial_big(n: usize, k: usize) -> BigInt {
    let mut c = BigInt::from(1);
    for i in 0..k {
        c = c * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    c
}

/// `C(n, k)` as a float; exact for the orders used here.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |c, i| c * (n - i) as f64 / (i + 1) as f64)
}

/// Exact `B_0 ..= B_n`, extending the shared table with `sum_{k<=m} C(m+1, k) B_k = 0`.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    {
        let table = BERNOULLI.read().expect("bernoulli table poisoned");
        if table.len() > n {
            return table[..=n].to_vec();
        }
    }
    let mut table = BERNOULLI.write().expect("bernoulli table poisoned");
    while table.len() <= n {
        let m = table.len();
        let s = (0..m).fold(<BigRational as Zero>::zero(), |acc, k| {
            acc + BigRational::from_integer(binomial_big(m + 1, k)) * &table[k]
        });
        table.push(-s / BigRational::from_integer(BigInt::from(m as i64 + 1)));
    }
    table[..=n].to_vec()
}

/// Exact `B_n`, with `B_1 = -1/2`.
pub fn bernoulli_number(n: usize) -> BigRational {
    bernoulli_numbers(n).pop().expect("non-empty")
}

fn bernoulli_f64(n: usize) -> Vec<f64> {
    bernoulli_numbers(n)
        .iter()
        .map(|b| b.to_f64().expect("finite rational"))
        .collect()
}

/// `B_n(x) = sum_k C(n,k) B_k x^{n-k}`, exactly.
pub fn bernoulli_poly_exact(n: usize, x: &BigRational) -> BigRational {
    let b = bernoulli_numbers(n);
    // Horner in x over the reversed binomial expansion
    (0..=n).fold(<BigRational as Zero>::zero(), |acc, j| {
        acc * x + BigRational::from_integer(binomial_big(n, j)) * &b[j]
    })
}

/// `B_n(x)` in floating point.
pub fn bernoulli_poly(n: usize, x: C64) -> C64 {
    let b = bernoulli_f64(n);
    (0..=n).fold(re(0.0), |acc, j| acc * x + binomial(n, j) * b[j])
}

/// Generalized Bernoulli polynomial `B_{n,chi}(x)`, from
/// `sum_{a=0}^{f-1} chi(a) t e^{(a+x)t} / (e^{ft} - 1)`.
///
/// Computed by series extraction and by `f^{n-1} sum_a chi(a) B_n((a+x)/f)`; the two are
/// compared at a tolerance scaled by the size of the summands.
pub fn gen_bernoulli_poly(chi: &DirichletCharacter, n: usize, x: C64) -> Result<C64> {
    let f = chi.modulus();
    let ff = f as f64;
    // route (i): power series
    let kernel = ts_reciprocal(&ts_expm1_over_t(re(ff), n))?;
    let mut numer = TruncatedSeries::<C64>::zero(n);
    for a in 0..f {
        let c = chi.eval(a as i64);
        if c != re(0.0) {
            numer = numer.add(&ts_exp_linear(x + a as f64, n).scale(&c));
        }
    }
    let by_series = ts_mul(&numer, &kernel).egf_coeffs()[n];
    // route (ii): distribution form
    let b = bernoulli_f64(n);
    let mut by_distribution = re(0.0);
    let mut scale = 0.0;
    for a in 0..f {
        let c = chi.eval(a as i64);
        if c == re(0.0) {
            continue;
        }
        let y = (x + a as f64) / ff;
        by_distribution += c * bernoulli_poly(n, y);
        scale += (0..=n)
            .map(|k| binomial(n, k) * b[k].abs() * y.norm().powi((n - k) as i32))
            .sum::<f64>();
    }
    let fac = ff.powi(n as i32 - 1);
    by_distribution *= fac;
    scale *= fac;
    let residual = (by_series - by_distribution).norm();
    let tol = 1e-12 * (1.0 + scale.max(by_distribution.norm()));
    if residual > tol {
        return Err(Error::Consistency {
            what: format!("B_{{{n},chi}}({x}) mod {f}"),
            residual,
            tol,
        });
    }
    Ok(by_distribution)
}

/// `B_{n,chi} = B_{n,chi}(0)`.
pub fn gen_bernoulli_number(chi: &DirichletCharacter, n: usize) -> Result<C64> {
    gen_bernoulli_poly(chi, n, re(0.0))
}

/// Barnes multiple Bernoulli polynomial `B_n(x, r | a)` with `r = a.len()`, the
/// coefficient of `t^n/n!` in `t^r e^{xt} / prod (e^{a_j t} - 1)`.
pub fn barnes_bernoulli<T: Coeff>(n: usize, x: T, a: &[T]) -> Result<T> {
    Ok(barnes_gf_coeffs(x, a, n)?.swap_remove(n))
}

fn nonpositive_integer(s: C64) -> Option<u32> {
    (s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round() && s.re > -1e6).then(|| (-s.re) as u32)
}

/// Rising factorial `(s)_j`.
fn rising(s: C64, j: usize) -> C64 {
    (0..j).fold(re(1.0), |acc, i| acc * (s + i as f64))
}

const EM_TERMS: usize = 12;

/// Euler-Maclaurin tail `sum_{n>=0} (n + y)^-s` with `k_terms` correction terms and
/// integer-power arithmetic when `s` is a non-positive integer. Returns the value and the
/// first omitted correction.
fn em_tail(s: C64, y: C64, k_terms: usize) -> (C64, C64) {
    let b = bernoulli_f64(2 * k_terms + 2);
    let pow = |e: C64| -> C64 {
        match nonpositive_integer(-e) {
            Some(m) => y.powi(m as i32),
            None if e.im == 0.0 && e.re == e.re.round() && e.re.abs() < 1e6 => y.powi(e.re as i32),
            None => (e * y.ln()).exp(),
        }
    };
    let mut v = pow(re(1.0) - s) / (s - 1.0) + pow(-s) * 0.5;
    let mut fact = 1.0;
    let mut omitted = re(0.0);
    for k in 1..=k_terms + 1 {
        fact *= ((2 * k - 1) * (2 * k)) as f64;
        let coef = rising(s, 2 * k - 1);
        let t = if coef == re(0.0) {
            re(0.0)
        } else {
            b[2 * k] / fact * coef * pow(-s - (2 * k - 1) as f64)
        };
        if k <= k_terms {
            v += t;
        } else {
            omitted = t;
        }
    }
    (v, omitted)
}

/// Hurwitz zeta `sum_{n>=0} (n + x)^-s`, continued to all `s != 1` by Euler-Maclaurin.
///
/// For non-positive integer `s` the formula terminates and is used with no direct terms,
/// which makes it valid for every `x`. Otherwise `Re(x) > 0` is required.
pub fn hurwitz_zeta_eval(s: C64, x: C64) -> Result<Evaluation> {
    if s == re(1.0) {
        return Err(Error::Pole("1 of the Hurwitz zeta function".into()));
    }
    if !(s.re.is_finite() && s.im.is_finite() && x.re.is_finite() && x.im.is_finite()) {
        return Err(Error::Domain("non-finite argument".into()));
    }
    if let Some(m) = nonpositive_integer(s) {
        let (v, _) = em_tail(s, x, m as usize / 2 + 1);
        return Ok(Evaluation::exact(v));
    }
    if x.re <= 0.0 {
        return Err(Error::Domain(format!(
            "zeta(s, x) needs Re(x) > 0 unless s is a non-positive integer, got x = {x}"
        )));
    }
    let floor = 10f64.max(s.norm());
    let mut m = (floor - x.re).ceil().max(0.0) as usize;
    loop {
        let direct: C64 = (0..m).map(|n| (-s * (x + n as f64).ln()).exp()).sum();
        let (tail, omitted) = em_tail(s, x + m as f64, EM_TERMS);
        let value = direct + tail;
        let bound = 2.0 * omitted.norm();
        if bound <= 1e-14_f64.max(1e-14 * value.norm()) || m > 1 << 20 {
            if bound > 1e-10 * (1.0 + value.norm()) {
                return Err(Error::Truncation {
                    terms: m,
                    tail_bound: bound,
                });
            }
            return Ok(Evaluation {
                value,
                terms_used: m + EM_TERMS,
                tail_bound: bound,
            });
        }
        m = (2 * m).max(16);
    }
}

pub fn hurwitz_zeta(s: C64, x: C64) -> Result<C64> {
    hurwitz_zeta_eval(s, x).map(|e| e.value)
}

/// Riemann zeta as `zeta(s, 1)`.
pub fn riemann_zeta(s: C64) -> Result<C64> {
    hurwitz_zeta(s, re(1.0))
}

/// Two-variable L-function `L(s, x | chi) = f^-s sum_{a=0}^{f-1} chi(a) zeta(s, (a+x)/f)`.
pub fn two_variable_l(s: C64, x: C64, chi: &DirichletCharacter) -> Result<C64> {
    if s == re(1.0) {
        return Err(Error::Pole("1 of L(s, x | chi)".into()));
    }
    let f = chi.modulus() as f64;
    let mut total = re(0.0);
    for a in 0..chi.modulus() {
        let c = chi.eval(a as i64);
        if c != re(0.0) {
            total += c * hurwitz_zeta(s, (x + a as f64) / f)?;
        }
    }
    Ok(total * (-s * f.ln()).exp())
}

/// Dirichlet L-function `L(s, chi) = f^-s sum_{a=1}^{f} chi(a) zeta(s, a/f)`.
pub fn dirichlet_l(s: C64, chi: &DirichletCharacter) -> Result<C64> {
    if s == re(1.0) {
        return Err(Error::Pole("1 of L(s, chi)".into()));
    }
    let f = chi.modulus();
    let mut total = re(0.0);
    for a in 1..=f {
        let c = chi.eval(a as i64);
        if c != re(0.0) {
            total += c * hurwitz_zeta(s, re(a as f64 / f as f64))?;
        }
    }
    Ok(total * (-s * (f as f64).ln()).exp())
}

/// Majorant `sum c_i y^(-p_i)` of `|zeta_k(s, y | a_1..a_k)|` for real `y > 0`, built from
/// `sum_{m>=0} U(y + m a) <= U(y) + (1/a) int_y^inf U`.
fn barnes_majorant(sigma: f64, a: &[f64], y: f64) -> f64 {
    let mut terms = vec![(1.0, sigma)];
    for &aj in a {
        let extra: Vec<(f64, f64)> = terms.iter().map(|&(c, p)| (c / (aj * (p - 1.0)), p - 1.0)).collect();
        terms.extend(extra);
    }
    terms.iter().map(|&(c, p)| c * y.powf(-p)).sum()
}

/// Rank-one Barnes zeta `zeta_1(s, w | a) = a^-s zeta(s, w/a)`, continued to all `s != 1`.
pub fn barnes_zeta_rank_one(s: C64, w: C64, a: C64) -> Result<C64> {
    if a == re(0.0) {
        return Err(Error::Domain("Barnes parameter must be non-zero".into()));
    }
    Ok((-s * a.ln()).exp() * hurwitz_zeta(s, w / a)?)
}

/// Default absolute accuracy of [`barnes_zeta_series`].
pub const BARNES_TOL: f64 = 1e-10;
const BARNES_EM_TERMS: usize = 4;
const BARNES_MAX_DIRECT: usize = 1 << 16;

/// `zeta_k(s, y | a_1..a_k)` with absolute error about `tol`.
///
/// The outermost index is summed directly up to `M` and the rest by Euler-Maclaurin, using
/// `d/dy zeta_k(s, y) = -s zeta_k(s+1, y)` and `int_Y^inf zeta_k(s, y) dy = zeta_k(s-1, Y)/(s-1)`.
/// Both hold termwise on the series domain, which `Re(s) > k` keeps for every call made.
fn barnes_level(s: C64, y: f64, a: &[f64], tol: f64) -> Result<C64> {
    let k = a.len();
    let ak = a[k - 1];
    if k == 1 {
        return Ok((-s * ak.ln()).exp() * hurwitz_zeta(s, re(y / ak))?);
    }
    let inner = &a[..k - 1];
    let kk = BARNES_EM_TERMS;
    let b = bernoulli_f64(2 * kk + 2);
    let mut fact = 1.0;
    let mut coefs = Vec::with_capacity(kk + 1);
    for j in 1..=kk + 1 {
        fact *= ((2 * j - 1) * (2 * j)) as f64;
        coefs.push(b[2 * j] / fact * rising(s, 2 * j - 1) * ak.powi(2 * j as i32 - 1));
    }
    let floor = ak * 10f64.max(s.norm() + 2.0 * kk as f64);
    let mut m = ((floor - y) / ak).ceil().max(0.0) as usize;
    let remainder = |ym: f64| {
        2.0 * coefs[kk].norm() * barnes_majorant(s.re + (2 * kk + 1) as f64, inner, ym)
    };
    while remainder(y + m as f64 * ak) > 0.5 * tol {
        m = (2 * m).max(16);
        if m > BARNES_MAX_DIRECT {
            return Err(Error::Truncation {
                terms: m,
                tail_bound: remainder(y + m as f64 * ak),
            });
        }
    }
    let ym = y + m as f64 * ak;
    let weight = m as f64 + 1.0 / (ak * (s - 1.0).norm()) + 0.5 + coefs[..kk].iter().map(|c| c.norm()).sum::<f64>();
    let tol_in = 0.5 * tol / weight;
    let mut sum = re(0.0);
    for j in 0..m {
        sum += barnes_level(s, y + j as f64 * ak, inner, tol_in)?;
    }
    sum += barnes_level(s - 1.0, ym, inner, tol_in)? / ((s - 1.0) * ak);
    sum += barnes_level(s, ym, inner, tol_in)? * 0.5;
    for (j, c) in coefs[..kk].iter().enumerate() {
        sum += c * barnes_level(s + (2 * j + 1) as f64, ym, inner, tol_in)?;
    }
    Ok(sum)
}

/// Barnes multiple zeta `sum_{m in N^r} (w + m . a)^-s` on its series domain `Re(s) > r`,
/// for real `w > 0` and real `a_j > 0`, to absolute accuracy about `tol`.
pub fn barnes_zeta_series(s: C64, w: f64, a: &[f64], tol: f64) -> Result<C64> {
    let r = a.len();
    if r == 0 {
        return Err(Error::Domain("Barnes zeta needs at least one parameter".into()));
    }
    if !(s.re > r as f64) {
        return Err(Error::Domain(format!(
            "Barnes zeta series needs Re(s) > r = {r}, got s = {s}"
        )));
    }
    if !(w > 0.0) || a.iter().any(|&aj| !(aj > 0.0 && aj.is_finite())) {
        return Err(Error::Domain("Barnes zeta series needs w > 0 and a_j > 0".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Config("tolerance must be positive".into()));
    }
    barnes_level(s, w, a, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::characters_mod;
    use proptest::prelude::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn first_bernoulli_numbers() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[0], rat(1, 1));
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[12], rat(-691, 2730));
        for k in 1..6 {
            assert!(Zero::is_zero(&b[2 * k + 1]));
        }
    }

    #[test]
    fn recurrence_holds_exactly() {
        let b = bernoulli_numbers(40);
        for n in 1..40 {
            let s = (0..=n).fold(<BigRational as Zero>::zero(), |acc, k| {
                acc + BigRational::from_integer(binomial_big(n + 1, k)) * &b[k]
            });
            assert!(Zero::is_zero(&s), "n={n}");
        }
        assert_eq!(bernoulli_number(12), rat(-691, 2730));
    }

    #[test]
    fn bernoulli_polynomials() {
        assert_eq!(bernoulli_poly_exact(2, &rat(1, 2)), rat(-1, 12));
        assert_eq!(bernoulli_poly_exact(1, &rat(3, 7)), rat(3, 7) - rat(1, 2));
        for n in 0..8 {
            assert_eq!(bernoulli_poly_exact(n, &rat(0, 1)), bernoulli_number(n));
        }
        assert!(close(bernoulli_poly(2, re(0.5)), re(-1.0 / 12.0), 1e-16));
        // B_n(x + 1) - B_n(x) = n x^{n-1}
        let x = C64::new(0.3, -0.7);
        for n in 1..10 {
            let d = bernoulli_poly(n, x + 1.0) - bernoulli_poly(n, x);
            assert!(close(d, x.powi(n as i32 - 1) * n as f64, 1e-12));
        }
    }

    #[test]
    fn generalized_bernoulli_reduces_for_modulus_one() {
        let chi = &characters_mod(1).unwrap()[0];
        for n in 0..8 {
            let v = gen_bernoulli_poly(chi, n, re(0.4)).unwrap();
            assert!(close(v, bernoulli_poly(n, re(0.4)), 1e-13));
        }
    }

    #[test]
    fn generalized_bernoulli_mod_four() {
        let chi = &characters_mod(4).unwrap()[1];
        // B_{1,chi} = sum chi(a) a / f = (1 - 3)/4
        assert!(close(gen_bernoulli_number(chi, 1).unwrap(), re(-0.5), 1e-14));
        // odd character: even-index numbers vanish
        assert!(close(gen_bernoulli_number(chi, 2).unwrap(), re(0.0), 1e-14));
        // B_{3,chi} = 3/2 for the character mod 4
        assert!(close(gen_bernoulli_number(chi, 3).unwrap(), re(1.5), 1e-13));
    }

    #[test]
    fn generalized_bernoulli_binomial_form() {
        for f in [3u64, 4, 5] {
            for chi in characters_mod(f).unwrap() {
                let x = re(0.7);
                for n in 0..7 {
                    let lhs = gen_bernoulli_poly(&chi, n, x).unwrap();
                    let rhs: C64 = (0..=n)
                        .map(|k| gen_bernoulli_number(&chi, k).unwrap() * binomial(n, k) * x.powi((n - k) as i32))
                        .sum();
                    assert!(close(lhs, rhs, 1e-11 * (1.0 + lhs.norm())), "f={f} n={n}");
                }
            }
        }
    }

    #[test]
    fn barnes_collapses_to_classical() {
        for n in 0..10 {
            let v = barnes_bernoulli(n, rat(2, 5), &[rat(1, 1)]).unwrap();
            assert_eq!(v, bernoulli_poly_exact(n, &rat(2, 5)));
        }
        let b0 = barnes_bernoulli(0, re(0.3), &[re(1.0), re(1.0)]).unwrap();
        assert!(close(b0, re(1.0), 1e-15));
    }

    #[test]
    fn hurwitz_and_riemann_values() {
        let z2 = riemann_zeta(re(2.0)).unwrap();
        assert!(close(z2, re(1.644_934_066_848_226_4), 1e-13));
        assert!(close(riemann_zeta(re(0.0)).unwrap(), re(-0.5), 1e-15));
        assert!(close(riemann_zeta(re(-1.0)).unwrap(), re(-1.0 / 12.0), 1e-15));
        assert!(close(hurwitz_zeta(re(0.0), re(0.3)).unwrap(), re(0.2), 1e-15));
        // zeta(3) and zeta(1/2)
        assert!(close(riemann_zeta(re(3.0)).unwrap(), re(1.202_056_903_159_594_3), 1e-13));
        assert!(close(riemann_zeta(re(0.5)).unwrap(), re(-1.460_354_508_809_586_8), 1e-13));
        // zeta(s, 1/2) = (2^s - 1) zeta(s)
        let s = C64::new(0.5, 14.0);
        let lhs = hurwitz_zeta(s, re(0.5)).unwrap();
        let rhs = ((s * 2f64.ln()).exp() - 1.0) * riemann_zeta(s).unwrap();
        assert!(close(lhs, rhs, 1e-12));
    }

    #[test]
    fn hurwitz_special_values() {
        for &x in &[0.1, 0.25, 0.5, 1.0, 1.5, 2.0] {
            for n in 1..=10 {
                let z = hurwitz_zeta(re(1.0 - n as f64), re(x)).unwrap();
                let target = -bernoulli_poly(n, re(x)) / n as f64;
                assert!(close(z, target, 1e-12), "x={x} n={n}");
            }
        }
    }

    #[test]
    fn hurwitz_errors() {
        assert!(matches!(hurwitz_zeta(re(1.0), re(0.5)), Err(Error::Pole(_))));
        assert!(matches!(hurwitz_zeta(re(2.0), re(-0.5)), Err(Error::Domain(_))));
        assert!(hurwitz_zeta(re(-2.0), re(-0.5)).is_ok());
    }

    #[test]
    fn dirichlet_forms_agree_with_direct_series() {
        for f in [3u64, 4, 5] {
            for chi in characters_mod(f).unwrap() {
                let s = C64::new(3.0, 0.5);
                let direct: C64 = (1..200_000)
                    .map(|n| chi.eval(n) * (-s * (n as f64).ln()).exp())
                    .sum();
                assert!(close(dirichlet_l(s, &chi).unwrap(), direct, 1e-10));
                let x = 0.35;
                let direct2: C64 = (0..200_000)
                    .map(|n| chi.eval(n) * (-s * (n as f64 + x).ln()).exp())
                    .sum();
                assert!(close(two_variable_l(s, re(x), &chi).unwrap(), direct2, 1e-10));
            }
        }
    }

    #[test]
    fn l_special_values() {
        for f in [3u64, 4, 5] {
            for chi in characters_mod(f).unwrap() {
                for n in 1..=6 {
                    let s = re(1.0 - n as f64);
                    let x = re(0.6);
                    let lhs = two_variable_l(s, x, &chi).unwrap();
                    let rhs = -gen_bernoulli_poly(&chi, n, x).unwrap() / n as f64;
                    assert!(close(lhs, rhs, 1e-10 * (1.0 + rhs.norm())));
                    let lhs = dirichlet_l(s, &chi).unwrap();
                    let rhs = -gen_bernoulli_number(&chi, n).unwrap() / n as f64;
                    assert!(close(lhs, rhs, 1e-10 * (1.0 + rhs.norm())));
                }
            }
        }
    }

    #[test]
    fn modulus_one_l_is_hurwitz() {
        let chi = &characters_mod(1).unwrap()[0];
        let s = C64::new(-1.5, 2.0);
        let x = re(0.8);
        assert!(close(two_variable_l(s, x, chi).unwrap(), hurwitz_zeta(s, x).unwrap(), 1e-14));
    }

    #[test]
    fn barnes_series_single_parameter() {
        let z3 = barnes_zeta_series(re(3.0), 1.0, &[1.0], 1e-10).unwrap();
        assert!(close(z3, re(1.202_056_903_159_594_3), 1e-9));
        for &w in &[0.3, 1.0, 2.5] {
            let v = barnes_zeta_series(re(4.0), w, &[1.0], 1e-10).unwrap();
            assert!(close(v, hurwitz_zeta(re(4.0), re(w)).unwrap(), 1e-9));
        }
        let v = barnes_zeta_series(C64::new(2.5, 1.0), 0.7, &[2.0], 1e-10).unwrap();
        let h = hurwitz_zeta(C64::new(2.5, 1.0), re(0.35)).unwrap() * (-C64::new(2.5, 1.0) * 2f64.ln()).exp();
        assert!(close(v, h, 1e-9));
    }

    #[test]
    fn barnes_series_ladder() {
        let s = re(4.0);
        let z2 = |w: f64| barnes_zeta_series(s, w, &[1.0, 1.0], 1e-10).unwrap();
        let z1 = barnes_zeta_series(s, 1.0, &[1.0], 1e-10).unwrap();
        assert!(close(z2(1.0) - z2(2.0), z1, 1e-8));
        // a = [1, 1]: the number of (m1, m2) with m1 + m2 = k is k + 1
        let direct: f64 = (0..100_000).map(|k| (k as f64 + 1.0) * (k as f64 + 1.0).powi(-4)).sum();
        assert!(close(z2(1.0), re(direct), 1e-8));
        let s3 = C64::new(5.0, 0.5);
        let a = [0.5, 1.0, 2.0];
        let lhs = barnes_zeta_series(s3, 0.8, &a, 1e-10).unwrap() - barnes_zeta_series(s3, 2.8, &a, 1e-10).unwrap();
        let rhs = barnes_zeta_series(s3, 0.8, &a[..2], 1e-10).unwrap();
        assert!(close(lhs, rhs, 1e-8));
    }

    #[test]
    fn barnes_series_domain() {
        assert!(matches!(barnes_zeta_series(re(2.0), 1.0, &[1.0, 1.0], 1e-10), Err(Error::Domain(_))));
        assert!(barnes_zeta_series(re(3.0), -1.0, &[1.0], 1e-10).is_err());
    }

    #[test]
    fn barnes_special_values_at_rank_one() {
        for &a in &[0.5f64, 1.0, 2.0] {
            for &w in &[0.5, 1.0, 2.0] {
                for m in 0..=6usize {
                    // zeta_1(s, w | a) = a^-s zeta(s, w/a)
                    let s = re(-(m as f64));
                    let z = barnes_zeta_rank_one(s, re(w), re(a)).unwrap();
                    let b = barnes_bernoulli(m + 1, re(w), &[re(a)]).unwrap();
                    let fact = (1..=m).product::<usize>() as f64 / (1..=m + 1).product::<usize>() as f64;
                    assert!(close(z, -b * fact, 1e-9 * (1.0 + z.norm())), "a={a} w={w} m={m}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn hurwitz_shift(x in 0.1f64..3.0, sr in -4.0f64..6.0, si in -5.0f64..5.0) {
            let s = C64::new(sr, si);
            prop_assume!((s - 1.0).norm() > 0.1);
            let lhs = hurwitz_zeta(s, re(x)).unwrap() - hurwitz_zeta(s, re(x + 1.0)).unwrap();
            let rhs = (-s * x.ln()).exp();
            prop_assert!((lhs - rhs).norm() <= 1e-11 * (1.0 + rhs.norm()));
        }
    }
}
