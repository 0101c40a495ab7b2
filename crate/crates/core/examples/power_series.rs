use num_rational::BigRational;
use qzeta::powerseries::{barnes_gf_coeffs, ts_expm1_over_t, ts_mul, ts_reciprocal};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

fn main() {
    // t / (e^t - 1) as a truncated series: its coefficients are B_n / n!
    let e = ts_expm1_over_t(rat(1, 1), 10);
    let inv = ts_reciprocal(&e).unwrap();
    println!("t/(e^t-1): {:?}", inv.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>());
    println!("check product = {:?}", ts_mul(&e, &inv).coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>());

    // Barnes generating function with weights (1, 2) at x = 1/2, coefficients in t^n/n! form
    let b = barnes_gf_coeffs(rat(1, 2), &[rat(1, 1), rat(2, 1)], 6).unwrap();
    for (n, c) in b.iter().enumerate() {
        println!("B_{n}(1/2 | 1, 2) = {c}");
    }
}
