use qzeta::verify::{run_suite, Suite, VerifyConfig};

// cargo run --example verification_report -- theorem2
fn main() {
    let name = std::env::args().nth(1).unwrap_or_else(|| "bb1".into());
    let suite: Suite = name.parse().expect("unknown suite");
    let rep = run_suite(suite, &VerifyConfig::default()).unwrap();
    for r in rep.results.iter().take(10) {
        println!("{:<60} rel {:.2e} ok {}", r.check_id, r.rel_err, r.ok());
    }
    println!("... {} results", rep.results.len());
    println!("{:?}", rep.summary);
    let csv = rep.to_csv().unwrap();
    println!("csv: {} lines", csv.lines().count());
}
