//! High multiplicative order elements in finite fields given by binomials.
//!
//! For a prime `q >= 5` and an irreducible binomial `x^m - a` over `F_q`, the
//! coset `θ` of `x` in `F_q[x]/(x^m - a)` satisfies `θ^m = a`, and for every
//! nonzero `b` the element `θ + b` has multiplicative order at least
//! `2^sqrt(2m)`. This crate builds the instance parameters, the family of
//! Frobenius conjugates of `θ + b` that the lower bound rests on, counts the
//! selection set that bounds the order, and checks every step against exact
//! order computations.
//!
//! ```
//! use binomial_order::{parameters::build_spec, oracle::exact_element_order};
//!
//! let spec = build_spec(5, 8, 1, None).unwrap();
//! assert_eq!((spec.k(), spec.l()), (4, 2));
//! let order = exact_element_order(&spec, &spec.theta_plus_b()).unwrap();
//! assert!(order >= 1131u32.into());
//! ```

pub mod cli;
pub mod construction;
pub mod counting;
pub mod error;
pub mod extension_field;
pub mod integers;
pub mod oracle;
pub mod parameters;
pub mod prime_field;

pub use error::{Error, Result};
