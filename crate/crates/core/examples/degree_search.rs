//! Exhaustive search for degree sums `Σ u_d (dk + 1) = u0 (d0 k + 1)` that
//! would let a product of larger conjugates cancel against a smaller one.
//! None exist for `u0 <= k`.
//!
//! ```bash
//! cargo run --example degree_search               # k = 3, l = 9
//! cargo run --example degree_search -- 4 8 6      # k, l, cap on u0
//! ```

use binomial_order::construction::{check_lemma6, DEFAULT_LEMMA6_BUDGET};

fn arg(n: usize, default: usize) -> usize {
    std::env::args()
        .nth(n)
        .map_or(default, |s| s.parse().expect("integer argument"))
}

fn main() -> binomial_order::Result<()> {
    let (k, l) = (arg(1, 3), arg(2, 9));
    let cap = arg(3, k);
    match check_lemma6(k, l, cap, DEFAULT_LEMMA6_BUDGET)? {
        None => println!("k={k} l={l}: no solution with u0 <= {cap}"),
        Some(found) => println!(
            "k={k} l={l}: u0={} at d0={} (v0={}) from terms {:?}",
            found.u0, found.d0, found.v0, found.terms
        ),
    }
    Ok(())
}
