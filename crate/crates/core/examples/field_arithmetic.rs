//! Arithmetic in `F_q[θ]`, `θ^m = a`: sums, products, powers, Frobenius and
//! the canonical text form.
//!
//! ```bash
//! cargo run --example field_arithmetic
//! ```

use binomial_order::extension_field::{BinomialRing, ExtElement};
use num_bigint::BigUint;

fn main() -> binomial_order::Result<()> {
    let ring = BinomialRing::new(5, 8, 2)?;
    let theta = ExtElement::theta(&ring);
    let x = ExtElement::parse(&ring, "3*t^2 + 4*t + 1")?;
    let y = ExtElement::parse(&ring, "t^7 + 2")?;

    println!("x        = {}", x.sparse());
    println!("  dense canonical form: {x}");
    println!("y        = {}", y.sparse());
    println!("x + y    = {}", (&x + &y).sparse());
    println!("x · y    = {}", (&x * &y).sparse());
    let theta8 = theta.pow(&BigUint::from(8u32));
    println!("θ^8      = {}  (reduces to a)", theta8.sparse());
    println!("x^q      = {}", x.pow(&BigUint::from(5u32)).sparse());
    println!("frob(x)  = {}", x.frobenius().sparse());
    println!("frob^8(x) == x: {}", x.frobenius_power(8) == x);

    // The text form parses back to the same element.
    let round_trip = ExtElement::parse(&ring, &x.to_string())?;
    assert_eq!(ExtElement::parse(&ring, &x.sparse().to_string())?, x);
    println!("round trip ok: {}", round_trip == x);
    println!("support of y: {:?}", y.support().collect::<Vec<_>>());
    Ok(())
}
