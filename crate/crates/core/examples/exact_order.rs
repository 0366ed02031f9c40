//! Exact multiplicative order of `θ + b`, and of any element given in text
//! form, with an independent certificate.
//!
//! ```bash
//! cargo run --example exact_order                         # q = 5, m = 32
//! cargo run --example exact_order -- 7 27 "2*t^3 + t + 5" # q, m, element
//! ```

use binomial_order::extension_field::ExtElement;
use binomial_order::integers::Factorizer;
use binomial_order::oracle::{certify_order, exact_element_order, group_order_factorization};
use binomial_order::parameters::build_spec;
use num_bigint::BigUint;

fn main() -> binomial_order::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let q = args.get(1).map_or(5, |s| s.parse().expect("q"));
    let m = args.get(2).map_or(32, |s| s.parse().expect("m"));
    let spec = build_spec(q, m, 1, None)?;
    let x = match args.get(3) {
        Some(text) => ExtElement::parse(spec.ring(), text)?,
        None => spec.theta_plus_b(),
    };

    let group = group_order_factorization(&spec, &Factorizer::default())?;
    println!("|F*| = {q}^{m} - 1 = {group}");
    let order = exact_element_order(&spec, &x)?;
    println!("ord({}) = {order}", x.sparse());
    println!("index in F* = {}", spec.group_order() / &order);

    let primes: Vec<BigUint> = group.primes().cloned().collect();
    let cert = certify_order(&x, &order, &primes);
    println!(
        "certificate: order = {}, valid = {}",
        cert.factorization, cert.valid
    );
    Ok(())
}
