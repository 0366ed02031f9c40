//! Build an instance `F_q[x]/(x^m - a)` and print its parameters.
//!
//! Shows the irreducibility check, the choice of `a`, the split `m = k·l`,
//! the integer `t` and the exponent table `(α_i, r_i)`.
//!
//! ```bash
//! cargo run --example instance_parameters            # q = 5, m = 32
//! cargo run --example instance_parameters -- 13 48 3 # q, m, b
//! ```

use binomial_order::parameters::{binomial_exists, build_spec, check_binomial_irreducible};
use binomial_order::prime_field::PrimeFieldElement;

fn arg(n: usize, default: u64) -> u64 {
    std::env::args()
        .nth(n)
        .map_or(default, |s| s.parse().expect("integer argument"))
}

fn main() -> binomial_order::Result<()> {
    let (q, m, b) = (arg(1, 5), arg(2, 32) as usize, arg(3, 1));
    println!(
        "an irreducible x^{m} - a exists over F_{q}: {}",
        binomial_exists(q, m)
    );

    let irreducible: Vec<u64> = (1..q)
        .filter(|&a| {
            check_binomial_irreducible(q, m, PrimeFieldElement::new(a, q)).unwrap_or(false)
        })
        .collect();
    println!("irreducible choices of a: {irreducible:?}");

    let spec = build_spec(q, m, b, None)?;
    println!(
        "a = {} (e = {}), b = {}",
        spec.a().value(),
        spec.e(),
        spec.b().value()
    );
    println!(
        "m = k·l = {}·{}, t = {} (t mod q-1 = {})",
        spec.k(),
        spec.l(),
        spec.t(),
        spec.t_reduced()
    );
    for (i, entry) in spec.exponent_table().iter().enumerate() {
        println!(
            "  row {i}: degree {:>3}  alpha = {:>2}  r = {}",
            i * spec.k() + 1,
            entry.alpha,
            entry.r
        );
    }
    if !spec.warnings().is_empty() {
        println!("warnings: {:?}", spec.warnings());
    }
    println!("{}", spec.to_json());
    Ok(())
}
