use qzeta::numkernel::{re, QParams, SumConfig};
use qzeta::qfamily::{carlitz_beta_numbers, changhee_beta_explicit, changhee_beta_series, unit_beta_number};

fn main() {
    let cfg = SumConfig::default();
    for q in [0.5, 0.9, 0.99, 0.999] {
        let qp = QParams::real(q).unwrap();
        let c = carlitz_beta_numbers(4, &qp).unwrap();
        let k = unit_beta_number(2, &qp, &cfg).unwrap();
        println!("q = {q:<6} carlitz beta_2 = {:.8}  unit-weight beta_2 = {:.8}", c[2].re, k.value.re);
    }
    println!("both tend to B_2 = 1/6");

    // closed form vs tail-certified series
    let qp = QParams::real(0.5).unwrap();
    for n in 1..=6 {
        let a = changhee_beta_explicit(n, re(0.7), &qp, re(2.0)).unwrap();
        let s = changhee_beta_series(n, re(0.7), &qp, re(2.0), &cfg).unwrap();
        println!("beta_{n}(0.7 : 0.5 | 2) = {:+.15}  series {:+.15} ({} terms)", a.re, s.value.re, s.terms_used);
    }
}
