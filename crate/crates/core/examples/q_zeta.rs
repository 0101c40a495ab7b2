use qzeta::numkernel::{re, QParams, SumConfig, C64};
use qzeta::qfamily::{changhee_beta_poly, zeta_q, zeta_q_multiple, WeightVector};

fn main() {
    let cfg = SumConfig::default();
    let qp = QParams::real(0.8).unwrap();
    let z = zeta_q(C64::new(1.5, 2.0), re(0.3), &qp, re(3.0), &cfg).unwrap();
    println!("zeta_q(1.5+2i, 0.3 | 3) at q=0.8: {} (tail <= {:.1e})", z.value, z.tail_bound);

    // at s = 1 - n the q-zeta function interpolates the polynomials: zeta = -beta_n / n
    let qp = QParams::real(0.5).unwrap();
    for n in 1..=5 {
        let z = zeta_q(re(1.0 - n as f64), re(0.7), &qp, re(2.0), &cfg).unwrap().value.re;
        let b = changhee_beta_poly(n, re(0.7), &qp, re(2.0), &cfg).unwrap().value.re;
        println!("n={n}  zeta_q(1-n) = {z:+.12}  -beta_n/n = {:+.12}", -b / n as f64);
    }

    let wv = WeightVector::real(&[1.0, 2.0]).unwrap();
    let m = zeta_q_multiple(re(3.0), re(0.5), &qp, &wv, &cfg).unwrap();
    println!("rank-2 zeta_q(3, 0.5 | 1, 2) = {:.15}", m.value.re);
}
