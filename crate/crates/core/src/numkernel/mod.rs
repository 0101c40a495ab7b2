//! Numeric kernel: the deformation parameter, q-powers and q-brackets, certified geometric
//! tail summation, the complex gamma function and adaptive quadrature.

mod dd;
mod gamma;
mod quad;
mod sum;

pub use dd::Dd;
pub use gamma::complex_gamma;
pub use quad::{integrate_adaptive, Quadrature};
pub use sum::{geometric_tail_sum, geometric_tail_sum_with, qseries_envelope, Envelope, TailSum, Term};

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub type C64 = Complex64;

/// Shorthand for a real number lifted to `C64`.
#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// The deformation parameter `q` together with the logarithm branch every `q^x` uses.
///
/// The principal branch of `log q` is fixed at construction. Derived parameters such as
/// `q^f` keep the branch by storing `f * log q` rather than recomputing a logarithm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QParams {
    q: C64,
    log_q: C64,
}

impl QParams {
    pub fn new(q: C64) -> Result<QParams> {
        if !(q.re.is_finite() && q.im.is_finite()) {
            return Err(Error::InvalidQ(format!("q = {q} is not finite")));
        }
        if q == C64::new(0.0, 0.0) {
            return Err(Error::InvalidQ("q = 0".into()));
        }
        if q == C64::new(1.0, 0.0) {
            return Err(Error::InvalidQ("q = 1 makes [x] = (1 - q^x)/(1 - q) singular".into()));
        }
        Ok(QParams { q, log_q: q.ln() })
    }

    pub fn real(q: f64) -> Result<QParams> {
        QParams::new(re(q))
    }

    pub fn q(&self) -> C64 {
        self.q
    }

    pub fn log_q(&self) -> C64 {
        self.log_q
    }

    /// `Some(q)` when q is a real number in (0, 1); this is the regime where the
    /// double-double closed forms and real fast paths apply.
    pub fn real_unit(&self) -> Option<f64> {
        (self.q.im == 0.0 && self.q.re > 0.0 && self.q.re < 1.0).then_some(self.q.re)
    }

    /// `q^f` sharing this parameter's branch of the logarithm.
    pub fn power(&self, f: u32) -> Result<QParams> {
        let log_q = self.log_q * f as f64;
        let q = match self.real_unit() {
            Some(q) => re(q.powi(f as i32)),
            None => log_q.exp(),
        };
        if q == C64::new(1.0, 0.0) {
            return Err(Error::InvalidQ(format!("q^{f} = 1")));
        }
        Ok(QParams { q, log_q })
    }

    /// Series evaluators need |q| < 1.
    pub fn require_series(&self) -> Result<()> {
        if self.q.norm() < 1.0 {
            Ok(())
        } else {
            Err(Error::InvalidQ(format!(
                "q-series require |q| < 1, got |q| = {}",
                self.q.norm()
            )))
        }
    }

    /// `|q^x| = exp(Re(x log q))`, without forming `q^x`.
    pub fn pow_norm(&self, x: C64) -> f64 {
        (x * self.log_q).re.exp()
    }
}

/// `q^x = exp(x log q)` on the fixed branch.
pub fn qpow(x: C64, qp: &QParams) -> C64 {
    match qp.real_unit() {
        Some(q) if x.im == 0.0 => re(q.powf(x.re)),
        _ => (x * qp.log_q).exp(),
    }
}

/// The q-bracket `[x] = (1 - q^x)/(1 - q)`.
pub fn qbracket(x: C64, qp: &QParams) -> C64 {
    (C64::new(1.0, 0.0) - qpow(x, qp)) / (C64::new(1.0, 0.0) - qp.q)
}

/// Scalar operations the closed-form q-evaluators are written against; implemented for
/// `C64` (general complex parameters) and [`Dd`] (real parameters, extended precision).
pub trait QField:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(x: f64) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn powi(self, n: i32) -> Self;
    fn to_c64(self) -> C64;
    fn norm(self) -> f64;
}

impl QField for C64 {
    fn from_f64(x: f64) -> Self {
        re(x)
    }
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    fn ln(self) -> Self {
        Complex64::ln(self)
    }
    fn powi(self, n: i32) -> Self {
        Complex64::powi(&self, n)
    }
    fn to_c64(self) -> C64 {
        self
    }
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
}

impl QField for Dd {
    fn from_f64(x: f64) -> Self {
        Dd::new(x)
    }
    fn exp(self) -> Self {
        Dd::exp(self)
    }
    fn ln(self) -> Self {
        Dd::ln(self)
    }
    fn powi(self, n: i32) -> Self {
        Dd::powi(self, n)
    }
    fn to_c64(self) -> C64 {
        re(self.to_f64())
    }
    fn norm(self) -> f64 {
        self.to_f64().abs()
    }
}

/// `q` with its logarithm in a chosen scalar type; the q-power and bracket in that type.
#[derive(Clone, Copy, Debug)]
pub struct QBase<T> {
    pub q: T,
    pub log_q: T,
}

impl<T: QField> QBase<T> {
    pub fn pow(&self, x: T) -> T {
        (x * self.log_q).exp()
    }

    pub fn bracket(&self, x: T) -> T {
        (T::from_f64(1.0) - self.pow(x)) / (T::from_f64(1.0) - self.q)
    }
}

impl QBase<C64> {
    pub fn complex(qp: &QParams) -> Self {
        QBase {
            q: qp.q,
            log_q: qp.log_q,
        }
    }
}

impl QBase<Dd> {
    /// Extended-precision base for real q in (0,1); `None` otherwise.
    pub fn extended(qp: &QParams) -> Option<Self> {
        let q = qp.real_unit()?;
        let qd = Dd::new(q);
        Some(QBase { q: qd, log_q: qd.ln() })
    }

    /// `q^f` in extended precision, keeping `log(q^f) = f log q`.
    pub fn power(&self, f: u32) -> Self {
        let log_q = self.log_q * f as f64;
        QBase { q: log_q.exp(), log_q }
    }
}

/// Truncation and tolerance policy for every infinite-series evaluator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SumConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_terms: usize,
    /// Safety multiplier (> 1) applied to geometric tail bounds.
    pub tail_factor: f64,
}

impl Default for SumConfig {
    fn default() -> Self {
        SumConfig {
            abs_tol: 1e-14,
            rel_tol: 1e-13,
            max_terms: 200_000,
            tail_factor: 2.0,
        }
    }
}

impl SumConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_terms: usize, tail_factor: f64) -> Result<Self> {
        let cfg = SumConfig {
            abs_tol,
            rel_tol,
            max_terms,
            tail_factor,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= 0.0 && self.rel_tol >= 0.0) {
            return Err(Error::Config("tolerances must be non-negative".into()));
        }
        if self.abs_tol == 0.0 && self.rel_tol == 0.0 {
            return Err(Error::Config(
                "at least one of abs_tol, rel_tol must be positive".into(),
            ));
        }
        if self.max_terms == 0 {
            return Err(Error::Config("max_terms must be positive".into()));
        }
        if !(self.tail_factor > 1.0) {
            return Err(Error::Config("tail_factor must exceed 1".into()));
        }
        Ok(())
    }

    /// Stopping threshold for a partial sum of the given magnitude.
    pub fn threshold(&self, partial: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * partial)
    }
}

/// Value of a series evaluation with its truncation diagnostics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: C64,
    pub terms_used: usize,
    pub tail_bound: f64,
}

impl Evaluation {
    pub fn exact(value: C64) -> Self {
        Evaluation {
            value,
            terms_used: 0,
            tail_bound: 0.0,
        }
    }
}
