//! Exact `⌈2^sqrt(n)⌉` from certified fixed-point intervals, next to the
//! floating-point estimate.
//!
//! ```bash
//! cargo run --example certified_bound
//! cargo run --example certified_bound -- 128      # a single n = 2m
//! ```

use binomial_order::counting::ceil_pow2_sqrt;

fn main() {
    let ns: Vec<u64> = match std::env::args().nth(1) {
        Some(n) => vec![n.parse().expect("integer argument")],
        None => vec![16, 18, 32, 50, 54, 64, 96, 108, 128],
    };
    println!("{:>5}  {:>12}  {:>16}", "n", "exact", "f64 estimate");
    for n in ns {
        let estimate = 2f64.powf((n as f64).sqrt());
        println!("{n:>5}  {:>12}  {estimate:>16.6}", ceil_pow2_sqrt(n));
    }
}
