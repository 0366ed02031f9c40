//! Arithmetic in prime fields `F_q`, `5 <= q < 2^32`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::integers::{factor_u64, is_prime_u64, order_from_multiple, Factorization};

/// Largest supported base field size (exclusive).
pub const MAX_MODULUS: u64 = 1 << 32;

/// Validates that `q` is a supported base field size.
pub fn check_modulus(q: u64) -> Result<()> {
    if q < 5 || !is_prime_u64(q) {
        return Err(Error::InvalidField(format!("{q} is not a prime >= 5")));
    }
    if q >= MAX_MODULUS {
        return Err(Error::InvalidField(format!("{q} is not below 2^32")));
    }
    Ok(())
}

/// An element of `F_q`, carrying its modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeFieldElement {
    value: u64,
    modulus: u64,
}

impl PrimeFieldElement {
    /// `value mod q`. The modulus is trusted to be prime; see [`check_modulus`].
    pub fn new(value: u64, modulus: u64) -> Self {
        Self {
            value: value % modulus,
            modulus,
        }
    }

    pub fn zero(modulus: u64) -> Self {
        Self::new(0, modulus)
    }

    pub fn one(modulus: u64) -> Self {
        Self::new(1, modulus)
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn same_field(self, other: Self) -> Result<()> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(Error::ModulusMismatch {
                left: self.modulus,
                right: other.modulus,
            })
        }
    }

    pub fn checked_add(self, other: Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self::new(self.value + other.value, self.modulus))
    }

    pub fn checked_sub(self, other: Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self::new(
            self.value + self.modulus - other.value,
            self.modulus,
        ))
    }

    pub fn checked_mul(self, other: Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self::new(self.value * other.value, self.modulus))
    }

    /// `self^exp` for an unbounded exponent.
    pub fn pow(self, exp: &BigUint) -> Self {
        // Fermat: reduce exponents of nonzero elements mod q - 1.
        if self.is_zero() {
            return if exp.bits() == 0 {
                Self::one(self.modulus)
            } else {
                self
            };
        }
        let reduced = (exp % (self.modulus - 1)).to_u64().unwrap_or(0);
        self.pow_u64(reduced)
    }

    pub fn pow_u64(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one(self.modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    pub fn inverse(self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.pow_u64(self.modulus - 2))
    }
}

impl fmt::Display for PrimeFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// The operator forms panic on a modulus mismatch; use the `checked_*`
// methods where the operands come from untrusted input.
impl Add for PrimeFieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs).expect("modulus mismatch")
    }
}

impl Sub for PrimeFieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(rhs).expect("modulus mismatch")
    }
}

impl Mul for PrimeFieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs).expect("modulus mismatch")
    }
}

impl Neg for PrimeFieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(self.modulus - self.value, self.modulus)
    }
}

fn group_order_factorization(q: u64) -> Factorization {
    Factorization::from_pairs(
        factor_u64(q - 1)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e)),
    )
}

/// Multiplicative order of a nonzero element; divides `q - 1`.
pub fn element_order(x: PrimeFieldElement) -> Result<u64> {
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let multiple = group_order_factorization(x.modulus());
    let order = order_from_multiple(&multiple, |d| x.pow(d).value() == 1);
    Ok(order.to_u64().expect("order divides q - 1"))
}

/// The smallest `g >= 2` generating `F_q^*`.
pub fn find_primitive_element(q: u64) -> Result<PrimeFieldElement> {
    check_modulus(q)?;
    let primes: Vec<u64> = factor_u64(q - 1).into_iter().map(|(p, _)| p).collect();
    (2..q)
        .map(|g| PrimeFieldElement::new(g, q))
        .find(|g| primes.iter().all(|p| g.pow_u64((q - 1) / p).value() != 1))
        .ok_or_else(|| Error::InvalidField(format!("no generator found mod {q}")))
}
