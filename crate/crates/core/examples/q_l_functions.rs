use qzeta::characters::characters_mod;
use qzeta::numkernel::{re, QParams, SumConfig};
use qzeta::qfamily::{gen_changhee_beta_distribution, gen_changhee_beta_poly, l_q, ExponentConvention};

fn main() {
    let cfg = SumConfig::default();
    let qp = QParams::real(0.5).unwrap();
    let chi = &characters_mod(5).unwrap()[2];
    let (x, w1) = (0.25, 1.0);

    for conv in ExponentConvention::ALL {
        println!("convention {conv}");
        for n in 1..=4 {
            let l = l_q(re(1.0 - n as f64), re(x), chi, &qp, re(w1), conv, &cfg).unwrap().value.re;
            let b = gen_changhee_beta_poly(n, re(x), chi, &qp, re(w1), conv, &cfg).unwrap().value.re;
            println!("  n={n}  L_q(1-n) = {l:+.12}  -beta_(n,chi)/n = {:+.12}", -b / n as f64);
        }
    }

    // distribution over residues mod the conductor
    for n in 1..=4 {
        let d = gen_changhee_beta_poly(n, re(x), chi, &qp, re(w1), ExponentConvention::Homogeneous, &cfg).unwrap().value.re;
        let s = gen_changhee_beta_distribution(n, re(x), chi, &qp, re(w1), &cfg).unwrap().value.re;
        println!("n={n}  direct {d:+.14}  via residues {s:+.14}");
    }
}
