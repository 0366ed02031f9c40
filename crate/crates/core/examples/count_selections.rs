//! Counting the selection set `S` of 0/1 matrices with weighted sum below
//! `m`, and the two-case lower bound built from it.
//!
//! ```bash
//! cargo run --example count_selections            # k = 3, l = 9, m = 27
//! cargo run --example count_selections -- 4 8     # k, l (m = k·l)
//! ```

use binomial_order::counting::{count_s_dp, enumerate_s, lemma8_constructive, theorem1_bound};
use num_bigint::BigUint;

fn arg(n: usize, default: usize) -> usize {
    std::env::args()
        .nth(n)
        .map_or(default, |s| s.parse().expect("integer argument"))
}

fn main() -> binomial_order::Result<()> {
    let (k, l) = (arg(1, 3), arg(2, 9));
    let m = k * l;
    let bound = BigUint::from(m);

    let s = count_s_dp(k, l, &bound);
    println!("|S| for k={k}, l={l}, m={m}: {s}");
    if k * l <= 24 {
        let listed = enumerate_s(k, l, &bound, 1 << 24)?.count();
        println!("enumerated members: {listed}");
        for sel in enumerate_s(k, l, &bound, 1 << 24)?.skip(listed / 2).take(3) {
            println!("  {sel}  weight {}", sel.weight());
        }
    }

    match lemma8_constructive(k, l) {
        Ok(sol) => println!(
            "constructive subset: w = {}, size {} (within hypothesis: {})",
            sol.w, sol.count, sol.within_hypothesis
        ),
        Err(err) => println!("constructive subset: {err}"),
    }

    let report = theorem1_bound(k, l, m);
    println!(
        "case {}: bound {} (floor (29/5)^k = {})",
        report.case_id, report.theorem1_bound, report.lemma5_floor
    );
    for flag in &report.flags {
        println!("  flag: {flag}");
    }
    Ok(())
}
