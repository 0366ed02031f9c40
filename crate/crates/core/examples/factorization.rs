//! Primality and factorization: trial division, Miller-Rabin and Brent's
//! variant of Pollard rho, plus `q^m - 1` through its cyclotomic pieces.
//!
//! ```bash
//! cargo run --example factorization
//! cargo run --example factorization -- 13 64      # factor q^m - 1
//! ```

use binomial_order::integers::{factorize, is_prime, Factorizer};
use num_bigint::BigUint;

fn main() -> binomial_order::Result<()> {
    let mut args = std::env::args().skip(1);
    if let (Some(q), Some(m)) = (args.next(), args.next()) {
        let (q, m): (u64, u64) = (q.parse().expect("q"), m.parse().expect("m"));
        let f = Factorizer::default().factorize_power_minus_one(q, m)?;
        println!("{q}^{m} - 1 = {f}");
        return Ok(());
    }

    for n in [
        390_624u64,
        3_215_031_751,
        1_000_000_016_000_000_063,
        u64::MAX,
    ] {
        let n = BigUint::from(n);
        println!("{n} prime? {:<5}  = {}", is_prime(&n), factorize(&n)?);
    }
    let f = Factorizer::default().factorize_power_minus_one(5, 32)?;
    println!("5^32 - 1 = {f}");
    println!(
        "7^27 - 1 = {}",
        Factorizer::default().factorize_power_minus_one(7, 27)?
    );
    Ok(())
}
