//! q-deformed Bernoulli numbers and polynomials, Changhee q-zeta functions and the
//! two-variable Dirichlet q-L-series, single and multiple.
//!
//! Closed forms with alternating binomial sums are evaluated in double-double arithmetic
//! whenever `q` and the arguments are real, since they cancel like `(1 - q)^-n`. All
//! infinite q-series go through one nested, tail-certified summation engine.

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::numkernel::{
    geometric_tail_sum_with, qbracket, qpow, qseries_envelope, re, Dd, Evaluation, QBase, QField, QParams,
    SumConfig, TailSum, Term, C64,
};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// Where the q-power of each summand sits relative to its bracket.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExponentConvention {
    /// `q^(x + sum w_m n_m)`: the q-power carries the whole bracket argument.
    #[default]
    Homogeneous,
    /// `q^(sum w_m n_m)`: no `q^x` factor.
    Printed,
}

impl ExponentConvention {
    pub const ALL: [ExponentConvention; 2] = [ExponentConvention::Homogeneous, ExponentConvention::Printed];

    pub fn name(self) -> &'static str {
        match self {
            ExponentConvention::Homogeneous => "homogeneous",
            ExponentConvention::Printed => "printed",
        }
    }

    /// Factor turning a homogeneous summand at shift `x` into this convention's summand.
    fn factor(self, x: C64, qp: &QParams) -> C64 {
        match self {
            ExponentConvention::Homogeneous => re(1.0),
            ExponentConvention::Printed => qpow(-x, qp),
        }
    }
}

impl fmt::Display for ExponentConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExponentConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "homogeneous" => Ok(ExponentConvention::Homogeneous),
            "printed" => Ok(ExponentConvention::Printed),
            _ => Err(Error::Config(format!("unknown convention '{s}' (homogeneous|printed)"))),
        }
    }
}

/// Weights `w_1..w_r` of a multiple q-series, each with positive real part.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector(Vec<C64>);

impl WeightVector {
    pub fn new(w: Vec<C64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::Domain("weight vector must be non-empty".into()));
        }
        if let Some(bad) = w.iter().find(|wj| !(wj.re > 0.0) || !wj.im.is_finite()) {
            return Err(Error::Domain(format!("weights need Re(w_j) > 0, got {bad}")));
        }
        Ok(WeightVector(w))
    }

    pub fn real(w: &[f64]) -> Result<Self> {
        WeightVector::new(w.iter().map(|&x| re(x)).collect())
    }

    pub fn r(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.0
    }

    pub fn product(&self) -> C64 {
        self.0.iter().product()
    }
}

fn is_real(z: C64) -> bool {
    z.im == 0.0
}

/// Extended-precision base when `q` and every listed argument are real.
fn extended_base(qp: &QParams, args: &[C64]) -> Option<QBase<Dd>> {
    if args.iter().all(|&z| is_real(z)) {
        QBase::extended(qp)
    } else {
        None
    }
}

/// `C(n, k)` in the scalar type, built by the multiplicative recurrence.
fn binomials<T: QField>(n: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(n + 1);
    let mut c = T::from_f64(1.0);
    out.push(c);
    for i in 0..n {
        c = c * T::from_f64((n - i) as f64) / T::from_f64((i + 1) as f64);
        out.push(c);
    }
    out
}

fn factorial_ratio(n: usize, m: usize) -> f64 {
    // n! / m! for m <= n
    (m + 1..=n).fold(1.0, |acc, k| acc * k as f64)
}

// ---------------------------------------------------------------------------------------
// Carlitz numbers and polynomials

fn carlitz_numbers_in<T: QField>(n: usize, q: T) -> Result<Vec<T>> {
    let mut beta = vec![T::from_f64(1.0)];
    for m in 1..=n {
        let denom = q.powi(m as i32 + 1) - T::from_f64(1.0);
        if !(denom.norm() > 1e-13) {
            return Err(Error::SingularRecurrence(m));
        }
        let c = binomials::<T>(m);
        let mut s = T::from_f64(0.0);
        for k in 0..m {
            s = s + c[k] * q.powi(k as i32) * beta[k];
        }
        let delta = T::from_f64(if m == 1 { 1.0 } else { 0.0 });
        beta.push((delta - q * s) / denom);
    }
    Ok(beta)
}

/// Carlitz q-Bernoulli numbers `beta_0..=beta_n` from
/// `q (q beta + 1)^m - beta_m = [m = 1]`, `beta_0 = 1`.
pub fn carlitz_beta_numbers(n: usize, qp: &QParams) -> Result<Vec<C64>> {
    match qp.real_unit() {
        Some(q) => Ok(carlitz_numbers_in(n, Dd::new(q))?.into_iter().map(|b| b.to_c64()).collect()),
        None => carlitz_numbers_in(n, qp.q()),
    }
}

pub fn carlitz_beta_number(n: usize, qp: &QParams) -> Result<C64> {
    Ok(carlitz_beta_numbers(n, qp)?[n])
}

fn carlitz_poly_in<T: QField>(n: usize, x: T, base: &QBase<T>, beta: &[T]) -> T {
    let c = binomials::<T>(n);
    let bx = base.bracket(x);
    let mut s = T::from_f64(0.0);
    for k in 0..=n {
        s = s + c[k] * beta[k] * base.pow(x * T::from_f64(k as f64)) * bx.powi((n - k) as i32);
    }
    s
}

/// Carlitz q-Bernoulli polynomial `sum_k C(n,k) beta_k q^{kx} [x]^{n-k}`.
pub fn carlitz_beta_poly(n: usize, x: C64, qp: &QParams) -> Result<C64> {
    match extended_base(qp, &[x]) {
        Some(base) => {
            let beta = carlitz_numbers_in(n, base.q)?;
            Ok(carlitz_poly_in(n, Dd::new(x.re), &base, &beta).to_c64())
        }
        None => {
            let beta = carlitz_numbers_in(n, qp.q())?;
            Ok(carlitz_poly_in(n, x, &QBase::complex(qp), &beta))
        }
    }
}

// ---------------------------------------------------------------------------------------
// The nested q-series engine

#[derive(Clone, Copy, Debug)]
enum BracketPower {
    Int(i32),
    Complex(C64),
}

impl BracketPower {
    /// `[y]^(-s)`, with an integer fast path.
    fn negated(s: C64) -> BracketPower {
        if s.im == 0.0 && s.re == s.re.round() && s.re.abs() < 1e6 {
            BracketPower::Int(-s.re as i32)
        } else {
            BracketPower::Complex(-s)
        }
    }

    fn norm(self) -> f64 {
        match self {
            BracketPower::Int(k) => k.unsigned_abs() as f64,
            BracketPower::Complex(p) => p.norm(),
        }
    }

    fn apply(self, b: C64) -> C64 {
        match self {
            BracketPower::Int(k) => b.powi(k),
            BracketPower::Complex(p) => (p * b.ln()).exp(),
        }
    }
}

/// `sum_{n_1..n_r >= start} [prod chi(n_k)] q^(y + sum w n) [y + sum w n]^p` (homogeneous form).
struct QSeries<'a> {
    qp: &'a QParams,
    weights: &'a [C64],
    start: usize,
    chi: Option<&'a DirichletCharacter>,
    power: BracketPower,
    cfg: &'a SumConfig,
}

struct Level {
    sum: TailSum,
    leaves: usize,
    inner_bound: f64,
}

impl QSeries<'_> {
    fn leaf(&self, y: C64) -> Result<(C64, f64)> {
        let b = qbracket(y, self.qp);
        let bn = b.norm();
        if bn == 0.0 {
            return match self.power {
                BracketPower::Int(0) => Ok((qpow(y, self.qp), qpow(y, self.qp).norm())),
                BracketPower::Int(k) if k > 0 => Ok((re(0.0), 0.0)),
                _ => Err(Error::Domain(format!("vanishing q-bracket at argument {y}"))),
            };
        }
        if bn < 1e-8 {
            log::warn!("q-bracket [{y}] has modulus {bn:e}; result is ill-conditioned");
        }
        let t = qpow(y, self.qp) * self.power.apply(b);
        Ok((t, t.norm()))
    }

    fn weight(&self, n: usize) -> C64 {
        self.chi.map_or(re(1.0), |c| c.eval(n as i64))
    }

    fn level(&self, k: usize, y: C64) -> Result<Level> {
        let w = self.weights[k - 1];
        let first = y + w * self.start as f64;
        let env = qseries_envelope(self.qp, first, w, self.power.norm())?;
        let mut leaves = 0usize;
        let mut inner_bound = 0.0;
        let mut prev_env: Option<f64> = None;
        let sum = geometric_tail_sum_with(
            |j| {
                let n = self.start + j;
                let c = self.weight(n);
                let yn = first + w * j as f64;
                let term = if k == 1 {
                    leaves += 1;
                    let (t, e) = self.leaf(yn)?;
                    Term { value: c * t, envelope: e }
                } else if c == re(0.0) && j > env.burn_in && prev_env.is_some() {
                    // past burn-in the envelope sums shrink by the ratio; no need to sum the zero term
                    Term {
                        value: re(0.0),
                        envelope: prev_env.unwrap_or(0.0) * env.ratio,
                    }
                } else {
                    let inner = self.level(k - 1, yn)?;
                    leaves += inner.leaves;
                    inner_bound += c.norm() * (inner.sum.tail_bound + inner.inner_bound);
                    Term {
                        value: c * inner.sum.sum,
                        envelope: inner.sum.abs_mass + inner.sum.tail_bound,
                    }
                };
                prev_env = Some(term.envelope);
                Ok(term)
            },
            env.ratio,
            env.burn_in,
            self.cfg,
        )?;
        Ok(Level { sum, leaves, inner_bound })
    }

    fn run(&self, y: C64) -> Result<Evaluation> {
        self.qp.require_series()?;
        let lv = self.level(self.weights.len(), y)?;
        Ok(Evaluation {
            value: lv.sum.sum,
            terms_used: lv.leaves,
            tail_bound: lv.sum.tail_bound + lv.inner_bound,
        })
    }

    /// `offset + scale * S`, with the stopping rule relative to that total rather than to
    /// `S`, which matters when the two cancel.
    fn run_shifted(&self, y: C64, scale: C64, offset: C64) -> Result<Evaluation> {
        let e = self.run(y)?;
        let total = offset + scale * e.value;
        let want = self.cfg.threshold(total.norm());
        let sn = scale.norm();
        if sn * e.tail_bound <= want || !(want > 0.0) || sn == 0.0 {
            return Ok(Evaluation {
                value: total,
                terms_used: e.terms_used,
                tail_bound: sn * e.tail_bound,
            });
        }
        let tight = SumConfig {
            abs_tol: want / sn,
            rel_tol: 0.0,
            ..*self.cfg
        };
        let e = QSeries { cfg: &tight, ..*self }.run(y)?;
        Ok(Evaluation {
            value: offset + scale * e.value,
            terms_used: e.terms_used,
            tail_bound: sn * e.tail_bound,
        })
    }
}

fn scaled(e: Evaluation, c: C64) -> Evaluation {
    Evaluation {
        value: e.value * c,
        terms_used: e.terms_used,
        tail_bound: e.tail_bound * c.norm(),
    }
}

// ---------------------------------------------------------------------------------------
// Changhee q-Bernoulli polynomials

fn changhee_explicit_in<T: QField>(n: usize, w: T, w1: T, base: &QBase<T>) -> T {
    let one = T::from_f64(1.0);
    let c = binomials::<T>(n);
    let mut s = (base.q - one) / base.log_q;
    for l in 1..=n {
        let lw1 = w1 * T::from_f64(l as f64);
        let t = c[l] * base.pow(w * T::from_f64(l as f64)) * lw1 / base.bracket(lw1);
        s = if l % 2 == 1 { s - t } else { s + t };
    }
    s / (one - base.q).powi(n as i32)
}

/// Closed form `(1-q)^-n sum_l C(n,l) q^{lw} (-1)^l l w_1 / [l w_1]` with the `l = 0` term
/// `(q - 1)/log q`.
pub fn changhee_beta_explicit(n: usize, w: C64, qp: &QParams, w1: C64) -> Result<C64> {
    if n > 0 && (0..=n).any(|l| l > 0 && qbracket(w1 * l as f64, qp).norm() == 0.0) {
        return Err(Error::Domain("vanishing bracket [l w_1]".into()));
    }
    Ok(match extended_base(qp, &[w, w1]) {
        Some(base) => changhee_explicit_in(n, Dd::new(w.re), Dd::new(w1.re), &base).to_c64(),
        None => changhee_explicit_in(n, w, w1, &QBase::complex(qp)),
    })
}

/// `((q - 1)/log q) (1 - q)^-n`, the contribution of the exponential correction term.
fn changhee_correction(n: usize, qp: &QParams) -> C64 {
    let q = qp.q();
    (q - 1.0) / qp.log_q() / (re(1.0) - q).powi(n as i32)
}

/// Series form `((q-1)/log q)(1-q)^-n - n w_1 sum_{k>=0} q^{w_1 k + w} [w_1 k + w]^{n-1}`.
pub fn changhee_beta_series(n: usize, w: C64, qp: &QParams, w1: C64, cfg: &SumConfig) -> Result<Evaluation> {
    let corr = changhee_correction(n, qp);
    if n == 0 {
        return Ok(Evaluation::exact(corr));
    }
    let weights = [w1];
    QSeries {
        qp,
        weights: &weights,
        start: 0,
        chi: None,
        power: BracketPower::Int(n as i32 - 1),
        cfg,
    }
    .run_shifted(w, -w1 * n as f64, corr)
}

/// Barnes-type Changhee q-Bernoulli polynomial `beta_n(w : q | w_1)`.
///
/// Returns the closed form, after checking it against the series form. The comparison
/// tolerance includes the rounding of the series form, which cancels on the scale of
/// `(1 - q)^-n`.
pub fn changhee_beta_poly(n: usize, w: C64, qp: &QParams, w1: C64, cfg: &SumConfig) -> Result<Evaluation> {
    qp.require_series()?;
    let explicit = changhee_beta_explicit(n, w, qp, w1)?;
    let series = match changhee_beta_series(n, w, qp, w1, cfg) {
        Ok(e) => e,
        Err(Error::Truncation { terms, .. }) => {
            log::debug!("series check for beta_{n} skipped: no convergence in {terms} terms");
            return Ok(Evaluation::exact(explicit));
        }
        Err(e) => return Err(e),
    };
    let cancel = changhee_correction(n, qp).norm();
    // rounding of the series form: the partial sums reach the size of the correction term
    let rounding = 2.0 * f64::EPSILON * (series.terms_used as f64 + 8.0) * cancel;
    let tol = 1e-11 * (1.0 + explicit.norm()) + rounding + series.tail_bound;
    let residual = (explicit - series.value).norm();
    if residual > tol {
        return Err(Error::Consistency {
            what: format!("beta_{n}({w} : q | {w1}) closed form vs series"),
            residual,
            tol,
        });
    }
    Ok(Evaluation {
        value: explicit,
        terms_used: series.terms_used,
        tail_bound: 0.0,
    })
}

/// `beta_n(q | w_1) = beta_n(0 : q | w_1)`.
pub fn changhee_beta_number(n: usize, qp: &QParams, w1: C64, cfg: &SumConfig) -> Result<Evaluation> {
    changhee_beta_poly(n, re(0.0), qp, w1, cfg)
}

/// q-Bernoulli number `beta_n(q)`: the Changhee number with `w_1 = 1`.
pub fn unit_beta_number(n: usize, qp: &QParams, cfg: &SumConfig) -> Result<Evaluation> {
    changhee_beta_poly(n, re(0.0), qp, re(1.0), cfg)
}

/// q-Bernoulli polynomial `beta_n(x : q)`, again with `w_1 = 1`.
pub fn unit_beta_poly(n: usize, x: C64, qp: &QParams, cfg: &SumConfig) -> Result<Evaluation> {
    changhee_beta_poly(n, x, qp, re(1.0), cfg)
}

/// Generalized q-Bernoulli polynomial `beta_{n,chi}(x : q)`, i.e. `w_1 = 1`, homogeneous.
pub fn unit_gen_beta_poly(n: usize, x: C64, chi: &DirichletCharacter, qp: &QParams, cfg: &SumConfig) -> Result<Evaluation> {
    gen_changhee_beta_poly(n, x, chi, qp, re(1.0), ExponentConvention::Homogeneous, cfg)
}

/// Generalized q-Bernoulli number `beta_{n,chi}(q)`.
pub fn unit_gen_beta_number(n: usize, chi: &DirichletCharacter, qp: &QParams, cfg: &SumConfig) -> Result<Evaluation> {
    unit_gen_beta_poly(n, re(0.0), chi, qp, cfg)
}

/// Generalized Changhee polynomial
/// `beta_{n,chi}(x : q | w_1) = -n w_1 sum_{m>=0} chi(m) q^E [x + w_1 m]^{n-1}`.
///
/// The `m = 0` term only matters for modulus 1; with it the generating function matches the
/// L-series summed from `n = 0`.
pub fn gen_changhee_beta_poly(
    n: usize,
    x: C64,
    chi: &DirichletCharacter,
    qp: &QParams,
    w1: C64,
    conv: ExponentConvention,
    cfg: &SumConfig,
) -> Result<Evaluation> {
    qp.require_series()?;
    if n == 0 {
        return Ok(Evaluation::exact(re(0.0)));
    }
    let weights = [w1];
    let e = QSeries {
        qp,
        weights: &weights,
        start: 0,
        chi: Some(chi),
        power: BracketPower::Int(n as i32 - 1),
        cfg,
    }
    .run(x)?;
    Ok(scaled(e, -w1 * n as f64 * conv.factor(x, qp)))
}

/// Distribution form `[f]^{n-1} sum_{a=0}^{f-1} chi(a) beta_n((x + a w_1)/f : q^f | w_1)`.
pub fn gen_changhee_beta_distribution(
    n: usize,
    x: C64,
    chi: &DirichletCharacter,
    qp: &QParams,
    w1: C64,
    cfg: &SumConfig,
) -> Result<Evaluation> {
    let f = chi.modulus() as u32;
    let qf = qp.power(f)?;
    let mut total = Evaluation::exact(re(0.0));
    for a in 0..f {
        let c = chi.eval(a as i64);
        if c == re(0.0) {
            continue;
        }
        let e = changhee_beta_poly(n, (x + w1 * a as f64) / f as f64, &qf, w1, cfg)?;
        total.value += c * e.value;
        total.terms_used += e.terms_used;
        total.tail_bound += e.tail_bound;
    }
    let bf = qbracket(re(f as f64), qp).powi(n as i32 - 1);
    Ok(scaled(total, bf))
}

/// Barnes-type multiple Changhee q-Bernoulli polynomial with optional character:
/// `(-1)^r (prod w) n!/(n-r)! sum [prod chi(n_k)] q^E [x + sum w n]^{n-r}`, indices from 1
/// when a character is given and from 0 otherwise. Zero for `n < r`.
pub fn multiple_changhee_beta(
    n: usize,
    x: C64,
    qp: &QParams,
    wv: &WeightVector,
    chi: Option<&DirichletCharacter>,
    conv: ExponentConvention,
    cfg: &SumConfig,
) -> Result<Evaluation> {
    qp.require_series()?;
    let r = wv.r();
    if n < r {
        log::debug!("multiple Changhee beta with n = {n} < r = {r} vanishes identically");
        return Ok(Evaluation::exact(re(0.0)));
    }
    let e = QSeries {
        qp,
        weights: wv.as_slice(),
        start: usize::from(chi.is_some()),
        chi,
        power: BracketPower::Int((n - r) as i32),
        cfg,
    }
    .run(x)?;
    let sign = if r.is_multiple_of(2) { 1.0 } else { -1.0 };
    let pref = wv.product() * sign * factorial_ratio(n, n - r) * conv.factor(x, qp);
    Ok(scaled(e, pref))
}

// ---------------------------------------------------------------------------------------
// q-zeta and q-L functions

/// `-(1 - q)^s / ((s - 1) log q)`.
pub fn zeta_q_correction(s: C64, qp: &QParams) -> Result<C64> {
    if s == re(1.0) {
        return Err(Error::Pole("1 of the Changhee q-zeta function".into()));
    }
    let lp = (re(1.0) - qp.q()).ln();
    Ok(-(s * lp).exp() / ((s - 1.0) * qp.log_q()))
}

/// Changhee q-zeta `-(1-q)^s/((s-1) log q) + w_1 sum_{n>=0} q^{w_1 n + w} / [w_1 n + w]^s`.
pub fn zeta_q(s: C64, w: C64, qp: &QParams, w1: C64, cfg: &SumConfig) -> Result<Evaluation> {
    let corr = zeta_q_correction(s, qp)?;
    let wv = WeightVector::new(vec![w1])?;
    QSeries {
        qp,
        weights: wv.as_slice(),
        start: 0,
        chi: None,
        power: BracketPower::negated(s),
        cfg,
    }
    .run_shifted(w, w1, corr)
}

/// Multiple Changhee q-zeta `sum_{n_j >= 0} q^{w + sum n_j w_j} / [w + sum n_j w_j]^s`.
pub fn zeta_q_multiple(s: C64, w: C64, qp: &QParams, wv: &WeightVector, cfg: &SumConfig) -> Result<Evaluation> {
    QSeries {
        qp,
        weights: wv.as_slice(),
        start: 0,
        chi: None,
        power: BracketPower::negated(s),
        cfg,
    }
    .run(w)
}

/// Two-variable Dirichlet q-L-series `w_1 sum_{n>=0} chi(n) q^E / [x + w_1 n]^s`.
pub fn l_q(
    s: C64,
    x: C64,
    chi: &DirichletCharacter,
    qp: &QParams,
    w1: C64,
    conv: ExponentConvention,
    cfg: &SumConfig,
) -> Result<Evaluation> {
    WeightVector::new(vec![w1])?;
    let weights = [w1];
    let e = QSeries {
        qp,
        weights: &weights,
        start: 0,
        chi: Some(chi),
        power: BracketPower::negated(s),
        cfg,
    }
    .run(x)?;
    Ok(scaled(e, w1 * conv.factor(x, qp)))
}

/// Multiple two-variable q-L-series
/// `(prod w) sum_{n_j >= 1} [prod chi(n_k)] q^E / [x + sum w_m n_m]^s`.
pub fn l_q_multiple(
    s: C64,
    x: C64,
    chi: &DirichletCharacter,
    qp: &QParams,
    wv: &WeightVector,
    conv: ExponentConvention,
    cfg: &SumConfig,
) -> Result<Evaluation> {
    let e = QSeries {
        qp,
        weights: wv.as_slice(),
        start: 1,
        chi: Some(chi),
        power: BracketPower::negated(s),
        cfg,
    }
    .run(x)?;
    Ok(scaled(e, wv.product() * conv.factor(x, qp)))
}

// ---------------------------------------------------------------------------------------
// The explicit multiple formula, evaluated as typeset

fn eq15_line1_in<T: QField>(n: usize, w: T, a: &[T], base: &QBase<T>) -> T {
    let one = T::from_f64(1.0);
    let c = binomials::<T>(n);
    let mut s = T::from_f64(0.0);
    for l in 0..=n {
        let lf = T::from_f64(l as f64);
        let mut p = one;
        for &aj in a {
            p = p * (lf + one / aj) / base.bracket(lf * aj + one);
        }
        let t = c[l] * base.pow(w * lf) * p;
        s = if l % 2 == 1 { s - t } else { s + t };
    }
    s / (one - base.q).powi(n as i32)
}

fn eq15_line2_in<T: QField>(n: usize, w: T, a: &[T], base: &QBase<T>) -> T {
    let c = binomials::<T>(n);
    let bw = base.bracket(w);
    let mut s = T::from_f64(0.0);
    for l in 0..=n {
        let bl = eq15_line1_in(l, T::from_f64(0.0), a, base);
        s = s + c[l] * bw.powi((n - l) as i32) * base.pow(w * T::from_f64(l as f64)) * bl;
    }
    s
}

fn eq15_check(qp: &QParams, a: &[C64]) -> Result<()> {
    if a.is_empty() || a.iter().any(|&aj| aj == re(0.0)) {
        return Err(Error::Domain("parameters a_j must be non-zero".into()));
    }
    let _ = qp;
    Ok(())
}

/// `(1-q)^-n sum_l C(n,l) (-1)^l q^{wl} prod_j (l + 1/a_j)/[l a_j + 1]`, exactly as written.
pub fn eq15_as_printed(n: usize, w: C64, qp: &QParams, a: &[C64]) -> Result<C64> {
    eq15_check(qp, a)?;
    let mut args = vec![w];
    args.extend_from_slice(a);
    Ok(match extended_base(qp, &args) {
        Some(base) => {
            let ad: Vec<Dd> = a.iter().map(|z| Dd::new(z.re)).collect();
            eq15_line1_in(n, Dd::new(w.re), &ad, &base).to_c64()
        }
        None => eq15_line1_in(n, w, a, &QBase::complex(qp)),
    })
}

/// The binomial re-expansion `sum_l C(n,l) [w]^{n-l} q^{wl} beta_l^{(r)}(q | a)` with the
/// numbers taken from [`eq15_as_printed`] at `w = 0`.
pub fn eq15_second_line(n: usize, w: C64, qp: &QParams, a: &[C64]) -> Result<C64> {
    eq15_check(qp, a)?;
    let mut args = vec![w];
    args.extend_from_slice(a);
    Ok(match extended_base(qp, &args) {
        Some(base) => {
            let ad: Vec<Dd> = a.iter().map(|z| Dd::new(z.re)).collect();
            eq15_line2_in(n, Dd::new(w.re), &ad, &base).to_c64()
        }
        None => eq15_line2_in(n, w, a, &QBase::complex(qp)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::characters_mod;
    use crate::classical::{bernoulli_poly, binomial};
    use proptest::prelude::*;

    fn q(v: f64) -> QParams {
        QParams::real(v).unwrap()
    }

    fn cfg() -> SumConfig {
        SumConfig::default()
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
    }

    #[test]
    fn carlitz_small_values() {
        let b = carlitz_beta_numbers(3, &q(0.5)).unwrap();
        assert_eq!(b[0], re(1.0));
        assert!(close(b[1], re(-2.0 / 3.0), 1e-15));
        // limit q -> 1
        let b = carlitz_beta_numbers(4, &q(1.0 - 1e-4)).unwrap();
        assert!((b[2].re - 1.0 / 6.0).abs() < 1e-3);
        assert!((b[4].re + 1.0 / 30.0).abs() < 1e-3);
        let p = carlitz_beta_poly(3, re(0.7), &q(1.0 - 1e-4)).unwrap();
        assert!((p - bernoulli_poly(3, re(0.7))).norm() < 1e-3);
        assert!(close(carlitz_beta_poly(0, re(0.7), &q(0.3)).unwrap(), re(1.0), 1e-15));
        assert!(close(carlitz_beta_poly(4, re(0.0), &q(0.3)).unwrap(), carlitz_beta_number(4, &q(0.3)).unwrap(), 1e-14));
    }

    #[test]
    fn carlitz_first_number_closed_form() {
        for &v in &[0.1, 0.5, 0.9] {
            let b1 = carlitz_beta_number(1, &q(v)).unwrap();
            assert!(close(b1, re(-1.0 / (1.0 + v)), 1e-15));
        }
        let qc = QParams::new(C64::new(0.3, 0.4)).unwrap();
        let b1 = carlitz_beta_number(1, &qc).unwrap();
        assert!(close(b1, -1.0 / (qc.q() + 1.0), 1e-14));
    }

    #[test]
    fn carlitz_root_of_unity_is_singular() {
        let qp = QParams::new(C64::new(-1.0, 0.0)).unwrap();
        assert_eq!(carlitz_beta_numbers(2, &qp), Err(Error::SingularRecurrence(1)));
    }

    #[test]
    fn changhee_zeroth_and_limits() {
        let qp = q(0.5);
        let b0 = changhee_beta_poly(0, re(1.3), &qp, re(2.0), &cfg()).unwrap();
        assert!(close(b0.value, re(-0.5 / 0.5f64.ln()), 1e-15));
        let near = q(1.0 - 1e-4);
        let b1 = changhee_beta_poly(1, re(0.8), &near, re(0.5), &cfg()).unwrap();
        assert!((b1.value.re - (0.8 - 0.25)).abs() < 1e-3);
    }

    #[test]
    fn changhee_closed_form_matches_series() {
        for &qv in &[0.2, 0.5, 0.8] {
            for &w in &[0.3, 1.0, 2.5] {
                for &w1 in &[0.5, 1.0, 3.0] {
                    for n in 0..=8 {
                        changhee_beta_poly(n, re(w), &q(qv), re(w1), &cfg()).unwrap();
                    }
                }
            }
        }
        // complex q goes through the plain complex path
        let qc = QParams::new(C64::new(0.4, 0.3)).unwrap();
        for n in 0..6 {
            changhee_beta_poly(n, re(0.7), &qc, re(1.0), &cfg()).unwrap();
        }
    }

    #[test]
    fn changhee_number_is_value_at_zero() {
        let qp = q(0.37);
        for n in 0..6 {
            let a = changhee_beta_number(n, &qp, re(1.5), &cfg()).unwrap().value;
            let b = changhee_beta_poly(n, re(0.0), &qp, re(1.5), &cfg()).unwrap().value;
            assert_eq!(a, b);
        }
    }

    #[test]
    fn bb1_interpolation() {
        for &qv in &[0.2, 0.5, 0.8] {
            for &w in &[0.3, 1.0, 2.5] {
                for &w1 in &[0.5, 1.0, 3.0] {
                    for n in 1..=8usize {
                        let z = zeta_q(re(1.0 - n as f64), re(w), &q(qv), re(w1), &cfg()).unwrap().value;
                        let b = changhee_beta_poly(n, re(w), &q(qv), re(w1), &cfg()).unwrap().value;
                        let r = (z * n as f64 + b).norm() / (1.0 + b.norm());
                        assert!(r <= 1e-9, "q={qv} w={w} w1={w1} n={n} r={r:e}");
                    }
                }
            }
        }
    }

    #[test]
    fn zeta_q_brute_force() {
        let qp = q(0.5);
        let s = re(2.0);
        let mut brute = zeta_q_correction(s, &qp).unwrap();
        for n in 0..200 {
            let y = re(1.0 + n as f64);
            brute += qpow(y, &qp) / qbracket(y, &qp).powi(2);
        }
        let v = zeta_q(s, re(1.0), &qp, re(1.0), &cfg()).unwrap().value;
        assert!((v - brute).norm() <= 1e-12);
        assert!(matches!(zeta_q(re(1.0), re(1.0), &qp, re(1.0), &cfg()), Err(Error::Pole(_))));
    }

    #[test]
    fn zeta_q_reduction() {
        let qp = q(0.8);
        for s in [re(-3.0), re(0.5), re(2.5), C64::new(1.5, 2.0)] {
            let z = zeta_q(s, re(0.3), &qp, re(3.0), &cfg()).unwrap().value;
            let corr = zeta_q_correction(s, &qp).unwrap();
            let m = zeta_q_multiple(s, re(0.3), &qp, &WeightVector::real(&[3.0]).unwrap(), &cfg()).unwrap().value;
            assert!(close(z - corr, m * 3.0, 1e-12));
        }
    }

    #[test]
    fn zeta_q_multiple_brute_force() {
        let qp = q(0.5);
        let s = re(3.0);
        let mut brute = re(0.0);
        for n1 in 0..200 {
            for n2 in 0..200 {
                let y = re(1.0 + n1 as f64 + n2 as f64);
                brute += qpow(y, &qp) / qbracket(y, &qp).powi(3);
            }
        }
        let v = zeta_q_multiple(s, re(1.0), &qp, &WeightVector::real(&[1.0, 1.0]).unwrap(), &cfg()).unwrap();
        assert!((v.value - brute).norm() <= 1e-10);
        assert!(v.terms_used < 20_000);
    }

    #[test]
    fn zeta_q_multiple_resums_over_last_index() {
        let qp = q(0.6);
        let s = C64::new(-1.5, 0.5);
        let w = [0.7, 1.3];
        let full = zeta_q_multiple(s, re(0.4), &qp, &WeightVector::real(&w).unwrap(), &cfg()).unwrap().value;
        let inner = WeightVector::real(&w[..1]).unwrap();
        let mut resum = re(0.0);
        for n2 in 0..400 {
            let y = re(0.4 + 1.3 * n2 as f64);
            resum += zeta_q_multiple(s, y, &qp, &inner, &cfg()).unwrap().value;
        }
        assert!(close(full, resum, 1e-10));
    }

    #[test]
    fn l_q_brute_force() {
        let chi = &characters_mod(3).unwrap()[1];
        let qp = q(0.5);
        let s = re(2.5);
        let mut brute = re(0.0);
        for n in 0..500 {
            let y = re(0.25 + n as f64);
            brute += chi.eval(n) * qpow(y, &qp) * (-s * qbracket(y, &qp).ln()).exp();
        }
        let v = l_q(s, re(0.25), chi, &qp, re(1.0), ExponentConvention::Homogeneous, &cfg()).unwrap();
        assert!((v.value - brute).norm() <= 1e-12);
    }

    #[test]
    fn l_q_multiple_brute_force() {
        let chi = &characters_mod(5).unwrap()[1];
        let qp = q(0.6);
        let s = re(3.0);
        let (w1, w2, x) = (1.0, 2.0, 0.4);
        let mut brute = re(0.0);
        for n1 in 1..300i64 {
            for n2 in 1..300i64 {
                let y = re(x + w1 * n1 as f64 + w2 * n2 as f64);
                brute += chi.eval(n1) * chi.eval(n2) * qpow(y, &qp) * (-s * qbracket(y, &qp).ln()).exp();
            }
        }
        brute *= w1 * w2;
        let wv = WeightVector::real(&[w1, w2]).unwrap();
        let v = l_q_multiple(s, re(x), chi, &qp, &wv, ExponentConvention::Homogeneous, &cfg()).unwrap();
        assert!((v.value - brute).norm() <= 1e-9, "{} vs {brute}", v.value);
    }

    #[test]
    fn l_q_modulus_one_is_zeta_series() {
        let chi = &characters_mod(1).unwrap()[0];
        let qp = q(0.5);
        let s = C64::new(0.5, 1.0);
        let l = l_q(s, re(0.7), chi, &qp, re(2.0), ExponentConvention::Homogeneous, &cfg()).unwrap().value;
        let z = zeta_q_multiple(s, re(0.7), &qp, &WeightVector::real(&[2.0]).unwrap(), &cfg()).unwrap().value;
        assert!(close(l, z * 2.0, 1e-13));
    }

    #[test]
    fn theorem2_both_conventions() {
        let qp = q(0.5);
        for f in [3u64, 4, 5] {
            for chi in characters_mod(f).unwrap() {
                for conv in ExponentConvention::ALL {
                    for n in 1..=6usize {
                        let x = re(0.25);
                        let l = l_q(re(1.0 - n as f64), x, &chi, &qp, re(2.0), conv, &cfg()).unwrap().value;
                        let b = gen_changhee_beta_poly(n, x, &chi, &qp, re(2.0), conv, &cfg()).unwrap().value;
                        assert!((l * n as f64 + b).norm() / (1.0 + b.norm()) <= 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn bb2_nonprincipal() {
        let chi = &characters_mod(4).unwrap()[1];
        let qp = q(0.5);
        let a = gen_changhee_beta_poly(3, re(0.5), chi, &qp, re(1.0), ExponentConvention::Homogeneous, &cfg()).unwrap();
        let b = gen_changhee_beta_distribution(3, re(0.5), chi, &qp, re(1.0), &cfg()).unwrap();
        assert!(close(a.value, b.value, 1e-10));
    }

    #[test]
    fn bb2_principal_offset_is_the_correction() {
        let chi = &characters_mod(3).unwrap()[0];
        let qp = q(0.5);
        let n = 3;
        let a = gen_changhee_beta_poly(n, re(0.5), chi, &qp, re(1.0), ExponentConvention::Homogeneous, &cfg()).unwrap();
        let b = gen_changhee_beta_distribution(n, re(0.5), chi, &qp, re(1.0), &cfg()).unwrap();
        let qf = qp.power(3).unwrap();
        let offset = qbracket(re(3.0), &qp).powi(n as i32 - 1) * 2.0 * changhee_correction(n, &qf);
        assert!(close(b.value - a.value, offset, 1e-10));
    }

    #[test]
    fn unit_weight_families() {
        let qp = q(0.5);
        let chi = &characters_mod(4).unwrap()[1];
        // the explicit Changhee form at w_1 = 1 against the series
        for n in 1..6 {
            let g = unit_gen_beta_poly(n, re(0.3), chi, &qp, &cfg()).unwrap().value;
            let mut brute = re(0.0);
            for m in 0..300 {
                let y = re(0.3 + m as f64);
                brute += chi.eval(m) * qpow(y, &qp) * qbracket(y, &qp).powi(n as i32 - 1);
            }
            assert!(close(g, -brute * n as f64, 1e-12));
        }
        let b = unit_beta_number(2, &qp, &cfg()).unwrap().value;
        assert!(close(b, changhee_beta_explicit(2, re(0.0), &qp, re(1.0)).unwrap(), 1e-15));
    }

    #[test]
    fn multiple_beta_brute_force() {
        let qp = q(0.5);
        let wv = WeightVector::real(&[1.0, 1.0]).unwrap();
        let v = multiple_changhee_beta(2, re(0.5), &qp, &wv, None, ExponentConvention::Homogeneous, &cfg()).unwrap();
        let mut brute = re(0.0);
        for n1 in 0..200 {
            for n2 in 0..200 {
                brute += qpow(re(0.5 + (n1 + n2) as f64), &qp);
            }
        }
        assert!(close(v.value, brute * 2.0, 1e-10));
        let zero = multiple_changhee_beta(1, re(0.5), &qp, &wv, None, ExponentConvention::Homogeneous, &cfg()).unwrap();
        assert_eq!(zero.value, re(0.0));
    }

    #[test]
    fn multiple_rank_one_collapses() {
        let qp = q(0.8);
        let wv = WeightVector::real(&[2.0]).unwrap();
        for n in 1..6 {
            let m = multiple_changhee_beta(n, re(0.4), &qp, &wv, None, ExponentConvention::Homogeneous, &cfg()).unwrap().value;
            let series = changhee_beta_series(n, re(0.4), &qp, re(2.0), &cfg()).unwrap().value - changhee_correction(n, &qp);
            assert!(close(m, series, 1e-11));
        }
    }

    #[test]
    fn theorem4_corrected_index() {
        let qp = q(0.5);
        let chi = &characters_mod(3).unwrap()[1];
        for (r, w) in [(1usize, vec![1.0]), (2, vec![1.0, 2.0])] {
            let wv = WeightVector::real(&w).unwrap();
            for m in 0..=3usize {
                let l = l_q_multiple(re(-(m as f64)), re(0.25), chi, &qp, &wv, ExponentConvention::Homogeneous, &cfg()).unwrap().value;
                let b = multiple_changhee_beta(m + r, re(0.25), &qp, &wv, Some(chi), ExponentConvention::Homogeneous, &cfg()).unwrap().value;
                let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                let rhs = b * sign / factorial_ratio(m + r, m);
                assert!(close(l, rhs, 1e-10), "r={r} m={m}");
            }
        }
    }

    #[test]
    fn theorem1_nonprincipal() {
        let qp = q(0.5);
        let chi = &characters_mod(3).unwrap()[1];
        let qf = qp.power(3).unwrap();
        let x = re(0.25);
        let w1 = re(1.0);
        for s in [re(-3.0), re(2.5), C64::new(1.5, 2.0)] {
            let l = l_q(s, x, chi, &qp, w1, ExponentConvention::Homogeneous, &cfg()).unwrap().value;
            let mut rhs = re(0.0);
            for a in 1..=3u64 {
                let y = (x + w1 * a as f64) / 3.0;
                rhs += chi.eval(a as i64) * zeta_q(s, y, &qf, w1, &cfg()).unwrap().value;
            }
            rhs *= (-s * qbracket(re(3.0), &qp).ln()).exp();
            assert!(close(l, rhs, 1e-9), "s={s}");
        }
    }

    #[test]
    fn eq15_lines_agree() {
        let qp = q(0.5);
        for a in [vec![re(1.0)], vec![re(1.0), re(2.0)], vec![re(0.5), re(1.0), re(3.0)]] {
            for n in 0..=8 {
                let l1 = eq15_as_printed(n, re(0.7), &qp, &a).unwrap();
                let l2 = eq15_second_line(n, re(0.7), &qp, &a).unwrap();
                assert!(close(l1, l2, 1e-12), "n={n}");
            }
        }
        // n = 0 picks the single l = 0 term
        let v = eq15_as_printed(0, re(0.7), &qp, &[re(2.0), re(4.0)]).unwrap();
        assert!(close(v, re(1.0 / 8.0), 1e-15));
    }

    #[test]
    fn divergent_weight_is_a_domain_error() {
        let qp = QParams::new(C64::new(0.5, 0.5)).unwrap();
        let r = zeta_q(re(2.0), re(1.0), &qp, C64::new(1.0, -3.0), &cfg());
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn weight_vector_validation() {
        assert!(WeightVector::real(&[]).is_err());
        assert!(WeightVector::real(&[1.0, -0.5]).is_err());
        assert_eq!(WeightVector::real(&[2.0, 3.0]).unwrap().product(), re(6.0));
    }

    #[test]
    fn convention_parsing() {
        assert_eq!("printed".parse::<ExponentConvention>().unwrap(), ExponentConvention::Printed);
        assert!("other".parse::<ExponentConvention>().is_err());
    }

    proptest! {
        #[test]
        fn entire_in_s(sr in -10.0f64..10.0, si in -7.0f64..7.0, qv in 0.1f64..0.9, w in 0.5f64..3.0) {
            let s = C64::new(sr, si);
            prop_assume!((s - 1.0).norm() > 1e-3 && s.norm() <= 10.0);
            let e = zeta_q(s, re(w), &q(qv), re(w), &cfg()).unwrap();
            prop_assert!(e.terms_used <= 10_000);
            prop_assert!(e.value.re.is_finite());
        }

        #[test]
        fn carlitz_poly_binomial_consistency(n in 0usize..8, x in 0.0f64..2.0, qv in 0.2f64..0.9) {
            let qp = q(qv);
            let beta = carlitz_beta_numbers(n, &qp).unwrap();
            let direct: C64 = (0..=n)
                .map(|k| beta[k] * binomial(n, k) * qpow(re(k as f64 * x), &qp) * qbracket(re(x), &qp).powi((n - k) as i32))
                .sum();
            let v = carlitz_beta_poly(n, re(x), &qp).unwrap();
            prop_assert!(close(v, direct, 1e-9));
        }
    }
}
