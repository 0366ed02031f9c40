//! The `k·l` conjugates of `θ + b` as explicit binomials `c·θ^(ik+1) + b`,
//! checked against the Frobenius orbit computed by exponentiation.
//!
//! ```bash
//! cargo run --example conjugate_family            # q = 5, m = 8
//! cargo run --example conjugate_family -- 7 27 2  # q, m, b
//! ```

use std::collections::HashSet;

use binomial_order::construction::{binomial_family, linear_binomials};
use binomial_order::parameters::build_spec;
use num_bigint::BigUint;

fn arg(n: usize, default: u64) -> u64 {
    std::env::args()
        .nth(n)
        .map_or(default, |s| s.parse().expect("integer argument"))
}

fn main() -> binomial_order::Result<()> {
    let spec = build_spec(arg(1, 5), arg(2, 8) as usize, arg(3, 1), None)?;
    let family = binomial_family(&spec);
    for binom in &family {
        println!(
            "i={} j={}  {}·θ^{} + {}   (= (θ+b)^(q^{}))",
            binom.i,
            binom.j,
            binom.coefficient.value(),
            binom.degree,
            binom.constant.value(),
            binom.frobenius_exponent(&spec)
        );
    }

    let linear = linear_binomials(&spec)?;
    println!(
        "linear members from iterated q^l-th powers agree: {}",
        linear.as_slice() == &family[..spec.k()]
    );

    let q = BigUint::from(spec.q());
    let x = spec.theta_plus_b();
    let orbit: HashSet<_> = (0..spec.m() as u32).map(|s| x.pow(&q.pow(s))).collect();
    let members: HashSet<_> = family.iter().map(|b| b.to_element(&spec)).collect();
    println!(
        "{} distinct members; equal to the Frobenius orbit: {}",
        members.len(),
        orbit == members
    );
    Ok(())
}
