//! Every selection in `S` gives a product of conjugate binomials; all of
//! them are pairwise distinct powers of `θ + b`.
//!
//! ```bash
//! cargo run --release --example distinct_products            # q = 7, m = 27
//! cargo run --release --example distinct_products -- 13 48   # q, m
//! ```

use std::time::Instant;

use binomial_order::construction::{
    product_for_vector, theorem7_distinct_count, DEFAULT_ENUMERATION_BUDGET,
};
use binomial_order::counting::enumerate_s;
use binomial_order::parameters::build_spec;
use num_bigint::BigUint;

fn arg(n: usize, default: u64) -> u64 {
    std::env::args()
        .nth(n)
        .map_or(default, |s| s.parse().expect("integer argument"))
}

fn main() -> binomial_order::Result<()> {
    let spec = build_spec(arg(1, 7), arg(2, 27) as usize, 1, None)?;
    let bound = BigUint::from(spec.m());
    for sel in enumerate_s(spec.k(), spec.l(), &bound, u64::MAX)?
        .skip(1)
        .take(3)
    {
        println!("{sel} -> {}", product_for_vector(&spec, &sel)?.sparse());
    }

    let start = Instant::now();
    let count = theorem7_distinct_count(&spec, DEFAULT_ENUMERATION_BUDGET)?;
    println!(
        "|S| = {}, distinct products = {}, all distinct: {} ({:.2?})",
        count.s_count,
        count.distinct,
        count.all_distinct(),
        start.elapsed()
    );
    Ok(())
}
