//! Verify every valid instance on a grid of `(q, m)` and summarize.
//!
//! ```bash
//! cargo run --release --example scan_grid                 # q in {5,7,11,13}, m <= 64
//! cargo run --release --example scan_grid -- 5,7 27 all   # q list, m_max, b rule
//! ```

use binomial_order::oracle::{scan, BRule, ScanOptions};

fn main() -> binomial_order::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let q_set = args.get(1).map_or(vec![5, 7, 11, 13], |s| {
        s.split(',').map(|q| q.parse().expect("q")).collect()
    });
    let options = ScanOptions {
        q_set,
        m_max: args.get(2).map_or(64, |s| s.parse().expect("m_max")),
        b_rule: if args.get(3).map(String::as_str) == Some("all") {
            BRule::All
        } else {
            BRule::One
        },
        ..ScanOptions::default()
    };

    let rows = scan(&options)?;
    println!(
        "{:>3} {:>3} {:>3} {:>3} {:>3}  {:>5}  {:>10}  {:>8}  pass",
        "q", "m", "b", "k", "l", "case", "|S|", "bound"
    );
    let mut passed = 0;
    for row in &rows {
        match &row.outcome {
            Ok(r) => {
                passed += usize::from(r.all_checks_pass());
                println!(
                    "{:>3} {:>3} {:>3} {:>3} {:>3}  {:>5}  {:>10}  {:>8}  {}",
                    row.q,
                    row.m,
                    row.b,
                    r.bound.k,
                    r.bound.l,
                    r.bound.case_id,
                    r.bound.s_count,
                    r.bound.theorem1_bound,
                    r.all_checks_pass()
                );
            }
            Err(err) => println!("{:>3} {:>3} {:>3}  error: {err}", row.q, row.m, row.b),
        }
    }
    println!("{passed}/{} instances pass", rows.len());
    Ok(())
}
