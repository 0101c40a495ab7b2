use qzeta::characters::characters_mod;
use qzeta::classical::{dirichlet_l, hurwitz_zeta, riemann_zeta};
use qzeta::numkernel::{re, C64};

fn main() {
    println!("zeta(2)        = {}", riemann_zeta(re(2.0)).unwrap().re);
    println!("zeta(-1)       = {}", riemann_zeta(re(-1.0)).unwrap().re);
    println!("zeta(0.5, 0.3) = {}", hurwitz_zeta(re(0.5), re(0.3)).unwrap().re);
    println!("zeta(1.5+2i, 0.7) = {}", hurwitz_zeta(C64::new(1.5, 2.0), re(0.7)).unwrap());

    let chi4 = &characters_mod(4).unwrap()[1];
    let l3 = dirichlet_l(re(3.0), chi4).unwrap().re;
    println!("L(3, chi4) = {l3}  (pi^3/32 = {})", std::f64::consts::PI.powi(3) / 32.0);
    for n in 1..=4 {
        println!("L({}, chi4) = {:.10}", 1 - n, dirichlet_l(re(1.0 - n as f64), chi4).unwrap().re);
    }
}
