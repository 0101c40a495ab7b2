use qzeta::numkernel::{complex_gamma, integrate_adaptive, re, C64, QParams, SumConfig};
use qzeta::qfamily::zeta_q;

// zeta_q(s, x | 1) = Gamma(s)^-1 int_0^inf t^(s-1) sum_n q^(x+n) exp(-[x+n] t) dt
fn main() {
    let (s, x) = (3.0, 0.5);
    let qp = QParams::real(0.5).unwrap();
    let integrand = |t: f64| {
        if t == 0.0 {
            return re(0.0);
        }
        let mut acc = re(0.0);
        for n in 0..200 {
            let y = x + n as f64;
            let bracket = (1.0 - 0.5f64.powf(y)) / 0.5;
            acc += re(0.5f64.powf(y) * (-bracket * t).exp());
        }
        acc * t.powf(s - 1.0)
    };
    let quad = integrate_adaptive(integrand, 0.0, 120.0, 1e-12, 0.0, 4000);
    let g = complex_gamma(re(s)).unwrap();
    let series = zeta_q(re(s), re(x), &qp, re(1.0), &SumConfig::default()).unwrap();
    // the series carries an extra correction term; subtract it for the comparison
    let corr = qzeta::qfamily::zeta_q_correction(re(s), &qp).unwrap();
    println!("quadrature      = {:.12} ({} evaluations)", (quad.value / g).re, quad.evaluations);
    println!("series - corr   = {:.12}", (series.value - corr).re);
    println!("Gamma(2.5+i)    = {}", complex_gamma(C64::new(2.5, 1.0)).unwrap());
}
