use super::C64;
use crate::error::{Error, Result};
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for complex argument (Lanczos approximation, g = 7, with the
/// reflection formula for `Re(s) < 1/2`).
pub fn complex_gamma(s: C64) -> Result<C64> {
    if s.im == 0.0 && s.re <= 0.0 && s.re.fract() == 0.0 {
        return Err(Error::Domain(format!("Gamma has a pole at s = {}", s.re)));
    }
    if !(s.re.is_finite() && s.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {s}")));
    }
    Ok(gamma_unchecked(s))
}

fn gamma_unchecked(s: C64) -> C64 {
    if s.re < 0.5 {
        let pi = C64::new(PI, 0.0);
        return pi / ((pi * s).sin() * gamma_unchecked(C64::new(1.0, 0.0) - s));
    }
    let z = s - 1.0;
    let mut a = C64::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let log_part = (z + 0.5) * t.ln() - t;
    (2.0 * PI).sqrt() * log_part.exp() * a
}
