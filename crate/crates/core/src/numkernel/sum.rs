use super::{QParams, SumConfig, C64};
use crate::error::{Error, Result};

/// One series term with a majorant.
///
/// `envelope >= |value|` and, past the burn-in index, consecutive envelopes shrink by at
/// least the ratio bound. Character-weighted sums use the unweighted magnitude so that the
/// zeros of a character do not break the ratio test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub value: C64,
    pub envelope: f64,
}

impl Term {
    pub fn exact(value: C64) -> Term {
        Term {
            value,
            envelope: value.norm(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailSum {
    pub sum: C64,
    pub terms_used: usize,
    /// Certified bound on `|S - S_N|`.
    pub tail_bound: f64,
    /// Sum of the envelopes of the terms actually added.
    pub abs_mass: f64,
}

/// Sums `term(0) + term(1) + ...` until the geometric tail bound
/// `tail_factor * |term(N)| * r / (1 - r)` drops below the tolerance.
///
/// `ratio_bound` must bound `|term(n+1)/term(n)|` for every `n >= burn_in`.
pub fn geometric_tail_sum(
    mut term: impl FnMut(usize) -> C64,
    ratio_bound: f64,
    burn_in: usize,
    cfg: &SumConfig,
) -> Result<TailSum> {
    geometric_tail_sum_with(|n| Ok(Term::exact(term(n))), ratio_bound, burn_in, cfg)
}

/// As [`geometric_tail_sum`], with per-term envelopes and fallible terms.
pub fn geometric_tail_sum_with(
    mut term: impl FnMut(usize) -> Result<Term>,
    ratio_bound: f64,
    burn_in: usize,
    cfg: &SumConfig,
) -> Result<TailSum> {
    if !(0.0..1.0).contains(&ratio_bound) {
        return Err(Error::Config(format!(
            "ratio bound {ratio_bound} outside [0, 1)"
        )));
    }
    let tail_scale = cfg.tail_factor * ratio_bound / (1.0 - ratio_bound);
    let mut sum = C64::new(0.0, 0.0);
    let mut mass = 0.0;
    let mut last_bound = f64::INFINITY;
    for n in 0..cfg.max_terms {
        let t = term(n)?;
        sum += t.value;
        mass += t.envelope;
        if n >= burn_in {
            last_bound = tail_scale * t.envelope;
            if last_bound <= cfg.threshold(sum.norm()) {
                return Ok(TailSum {
                    sum,
                    terms_used: n + 1,
                    tail_bound: last_bound,
                    abs_mass: mass,
                });
            }
        }
    }
    Err(Error::Truncation {
        terms: cfg.max_terms,
        tail_bound: last_bound,
    })
}

/// Ratio bound and burn-in index for a q-series index.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Envelope {
    pub ratio: f64,
    pub burn_in: usize,
}

/// Geometric majorant for terms `q^(x + w n) * [x + w n]^p` in the index `n`.
///
/// Once `|q^(x + w n)| <= d`, the bracket satisfies `|(1-q)[x + w n] - 1| <= d`, so
/// consecutive bracket powers change by at most `(1 - d)^(-2|p|)`. This picks `d` so the
/// full ratio is `(1 + |q^w|)/2`. Other summation indices only multiply by factors of
/// modulus <= 1, so the bound holds uniformly in them.
pub fn qseries_envelope(qp: &QParams, shift: C64, step: C64, exponent_norm: f64) -> Result<Envelope> {
    let qw = qp.pow_norm(step);
    if !(qw < 1.0) {
        return Err(Error::Domain(format!(
            "|q^w| = {qw} >= 1 for weight w = {step}: the q-series does not converge"
        )));
    }
    if exponent_norm == 0.0 {
        return Ok(Envelope {
            ratio: qw,
            burn_in: 0,
        });
    }
    let ratio = 0.5 * (1.0 + qw);
    let delta = 1.0 - (qw / ratio).powf(0.5 / exponent_norm);
    let shift_norm = qp.pow_norm(shift);
    let need = (delta.ln() - shift_norm.ln()) / qw.ln();
    let burn_in = if need.is_finite() && need > 0.0 {
        need.ceil() as usize
    } else {
        0
    };
    Ok(Envelope { ratio, burn_in })
}
