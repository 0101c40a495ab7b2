use num_rational::BigRational;
use qzeta::characters::characters_mod;
use qzeta::classical::{bernoulli_numbers, bernoulli_poly_exact, gen_bernoulli_number};

fn main() {
    for (n, b) in bernoulli_numbers(20).iter().enumerate() {
        println!("B_{n:<2} = {b}");
    }
    let x = BigRational::new(1.into(), 3.into());
    println!("B_4(1/3) = {}", bernoulli_poly_exact(4, &x));

    // generalized numbers for the odd character mod 4
    let chi = &characters_mod(4).unwrap()[1];
    for n in 1..=5 {
        println!("B_{{{n},chi4}} = {:.6}", gen_bernoulli_number(chi, n).unwrap().re);
    }
}
