// The `qzeta` binary, driven in-process.
fn main() {
    let runs: &[&[&str]] = &[
        &["eval", "--fn", "zeta_q", "--s", "1.5+2i", "--w", "0.3", "--w1", "3", "--q", "0.8"],
        &["--format", "json", "eval", "--fn", "l_q", "--s", "2.5", "--x", "0.25", "--f", "3", "--chi", "1", "--q", "0.5", "--w1", "1"],
        &["--format", "csv", "table", "--fn", "carlitz_beta_number", "--sweep", "q", "--start", "0.5", "--stop", "0.95", "--count", "4", "--n", "2"],
        &["chars", "--f", "8"],
    ];
    for args in runs {
        let argv = std::iter::once("qzeta").chain(args.iter().copied());
        let code = qzeta::cli::run(argv, &mut std::io::stdout(), &mut std::io::stderr());
        println!("-> exit {code}\n");
    }
}
