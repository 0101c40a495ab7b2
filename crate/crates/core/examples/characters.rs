use qzeta::characters::{build_group, characters_mod};

// cargo run --example characters -- 24
fn main() {
    let f: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(12);
    let g = build_group(f).unwrap();
    println!("(Z/{f})^* has order {}, factorization {:?}", g.total_order(), g.factorization());
    for chi in characters_mod(f).unwrap() {
        let c = chi.conductor();
        let vals: Vec<String> = (0..f.min(12) as i64).map(|n| {
                let v = chi.eval(n);
                if v.im.abs() < 1e-12 { format!("{:+.0}", v.re) } else { format!("{:.2}", v) }
            }).collect();
        println!(
            "chi{:<3} order {:<3} conductor {:<4} primitive {:<5} | {}",
            chi.index(),
            chi.order(),
            c.conductor,
            c.is_primitive,
            vals.join(" ")
        );
    }
}
