use gq_sieve::cases::{load_cases, run_case};

fn main() {
    let cases = load_cases().unwrap();
    let total = std::time::Instant::now();
    for case in &cases {
        let t = std::time::Instant::now();
        match run_case(case, None, 1) {
            Ok(report) => println!(
                "{:12} verdict={:16} survivors={} match={} ({:?})",
                report.case,
                report.verdict,
                report.survivors.len(),
                report.verdict_matches(),
                t.elapsed()
            ),
            Err(e) => println!("{:12} ERROR: {e}", case.name),
        }
    }
    println!("total {:?}", total.elapsed());
}
