//! Run every check for one instance and print the report as JSON and CSV.
//!
//! ```bash
//! cargo run --release --example verify_instance            # q = 7, m = 27
//! cargo run --release --example verify_instance -- 13 64 5 # q, m, b
//! ```

use binomial_order::oracle::{verify_instance, VerifyOptions};

fn arg(n: usize, default: u64) -> u64 {
    std::env::args()
        .nth(n)
        .map_or(default, |s| s.parse().expect("integer argument"))
}

fn main() -> binomial_order::Result<()> {
    let report = verify_instance(
        arg(1, 7),
        arg(2, 27) as usize,
        arg(3, 1),
        &VerifyOptions::default(),
    )?;
    println!("{}", report.to_json());
    for reason in &report.skipped {
        println!("skipped {reason}");
    }
    for (name, took) in &report.timings {
        println!("{name:<22} {took:.2?}");
    }
    let mut csv = csv::Writer::from_writer(std::io::stdout());
    csv.serialize(report.to_csv_row()).expect("csv row");
    csv.flush().expect("flush stdout");
    println!("all checks pass: {}", report.all_checks_pass());
    Ok(())
}
