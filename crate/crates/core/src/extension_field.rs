//! Arithmetic in the quotient ring `F_q[x]/(x^m - a)`.
//!
//! When `x^m - a` is irreducible the quotient is the field `F_{q^m}`; the
//! arithmetic here does not assume it, so the same types serve the
//! brute-force irreducibility checks on reducible binomials.
//!
//! Elements are dense coefficient vectors; index `d` holds the coefficient
//! of `θ^d`. Products are reduced with the single rule `θ^{m+d} = a·θ^d`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::prime_field::{check_modulus, PrimeFieldElement};

/// The ring `F_q[x]/(x^m - a)`.
#[derive(Debug)]
pub struct BinomialRing {
    q: u64,
    m: usize,
    a: u64,
    /// Image of `θ^d` under `x -> x^q`: `a^{c_d}·θ^{(dq) mod m}` with the
    /// coefficient pre-reduced.
    frobenius_table: Vec<(usize, u64)>,
}

impl PartialEq for BinomialRing {
    fn eq(&self, other: &Self) -> bool {
        (self.q, self.m, self.a) == (other.q, other.m, other.a)
    }
}

impl Eq for BinomialRing {}

impl BinomialRing {
    /// Builds `F_q[x]/(x^m - a)` for prime `q >= 5`, `m >= 1`, `a != 0`.
    pub fn new(q: u64, m: usize, a: u64) -> Result<Arc<Self>> {
        check_modulus(q)?;
        if m == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        let a = a % q;
        if a == 0 {
            return Err(Error::ZeroElement);
        }
        let a_elem = PrimeFieldElement::new(a, q);
        let frobenius_table = (0..m)
            .map(|d| {
                let shifted = d as u128 * q as u128;
                let wraps = (shifted / m as u128) as u64;
                let target = (shifted % m as u128) as usize;
                (target, a_elem.pow_u64(wraps).value())
            })
            .collect();
        Ok(Arc::new(Self {
            q,
            m,
            a,
            frobenius_table,
        }))
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn a(&self) -> PrimeFieldElement {
        PrimeFieldElement::new(self.a, self.q)
    }
}

/// An element of a [`BinomialRing`].
#[derive(Clone)]
pub struct ExtElement {
    ring: Arc<BinomialRing>,
    coeffs: Vec<u64>,
}

impl PartialEq for ExtElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
            && (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring)
    }
}

impl Eq for ExtElement {}

impl Hash for ExtElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.ring.q, self.ring.m, self.ring.a).hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtElement({self})")
    }
}

impl ExtElement {
    pub fn zero(ring: &Arc<BinomialRing>) -> Self {
        Self {
            ring: Arc::clone(ring),
            coeffs: vec![0; ring.m],
        }
    }

    pub fn one(ring: &Arc<BinomialRing>) -> Self {
        Self::constant(ring, 1)
    }

    /// The embedding of `c mod q`.
    pub fn constant(ring: &Arc<BinomialRing>, c: u64) -> Self {
        Self::monomial(ring, c, 0)
    }

    /// `c·θ^d`, with `d` reduced through `θ^m = a`.
    pub fn monomial(ring: &Arc<BinomialRing>, c: u64, d: usize) -> Self {
        let mut out = Self::zero(ring);
        let wraps = (d / ring.m) as u64;
        let coeff = PrimeFieldElement::new(c, ring.q) * ring.a().pow_u64(wraps);
        out.coeffs[d % ring.m] = coeff.value();
        out
    }

    /// The class `θ` of `x`.
    pub fn theta(ring: &Arc<BinomialRing>) -> Self {
        Self::monomial(ring, 1, 1)
    }

    /// From a coefficient vector of length exactly `m`; entries are reduced mod q.
    pub fn from_coeffs(ring: &Arc<BinomialRing>, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.len() != ring.m {
            return Err(Error::LengthMismatch {
                expected: ring.m,
                got: coeffs.len(),
            });
        }
        let q = ring.q;
        Ok(Self {
            ring: Arc::clone(ring),
            coeffs: coeffs.into_iter().map(|c| c % q).collect(),
        })
    }

    pub fn ring(&self) -> &Arc<BinomialRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coefficient(&self, d: usize) -> PrimeFieldElement {
        PrimeFieldElement::new(self.coeffs[d], self.ring.q)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 % self.ring.q && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// Nonzero terms as `(degree, coefficient)`, ascending by degree.
    pub fn support(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(d, &c)| (d, c))
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let q = self.ring.q;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| (x + y) % q)
            .collect();
        Ok(Self {
            ring: Arc::clone(&self.ring),
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let q = self.ring.q;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| (x + q - y) % q)
            .collect();
        Ok(Self {
            ring: Arc::clone(&self.ring),
            coeffs,
        })
    }

    /// Schoolbook product followed by one reduction pass.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let m = self.ring.m;
        let q = self.ring.q as u128;
        let mut acc = vec![0u128; 2 * m - 1];
        for (i, &x) in self.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in other.coeffs.iter().enumerate() {
                acc[i + j] += x as u128 * y as u128;
            }
        }
        let a = self.ring.a as u128;
        let mut coeffs = vec![0u64; m];
        for d in 0..m {
            let high = acc.get(d + m).map_or(0, |h| h % q);
            coeffs[d] = ((acc[d] + high * a) % q) as u64;
        }
        Ok(Self {
            ring: Arc::clone(&self.ring),
            coeffs,
        })
    }

    /// `self·(c·θ^d + b)` for `d < m` in O(m).
    pub fn mul_binomial(&self, c: u64, d: usize, b: u64) -> Self {
        let m = self.ring.m;
        let q = self.ring.q;
        debug_assert!(d < m);
        let mut coeffs: Vec<u64> = self.coeffs.iter().map(|&x| x * b % q).collect();
        for (i, &x) in self.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let mut term = x * c % q;
            let mut target = i + d;
            if target >= m {
                target -= m;
                term = term * self.ring.a % q;
            }
            coeffs[target] = (coeffs[target] + term) % q;
        }
        Self {
            ring: Arc::clone(&self.ring),
            coeffs,
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    /// `self^n` by left-to-right square-and-multiply; `self^0 = 1`.
    pub fn pow(&self, n: &BigUint) -> Self {
        let mut acc = Self::one(&self.ring);
        for bit in (0..n.bits()).rev() {
            acc = acc.square();
            if n.bit(bit) {
                acc = &acc * self;
            }
        }
        acc
    }

    /// `self^q`, computed coefficient-wise: `c^q = c` in `F_q`, and each
    /// `θ^d` maps to a fixed monomial.
    pub fn frobenius(&self) -> Self {
        let q = self.ring.q;
        let mut coeffs = vec![0u64; self.ring.m];
        for (d, c) in self.support() {
            let (target, factor) = self.ring.frobenius_table[d];
            coeffs[target] = (coeffs[target] + c * factor) % q;
        }
        Self {
            ring: Arc::clone(&self.ring),
            coeffs,
        }
    }

    /// `self^{q^s}`.
    pub fn frobenius_power(&self, s: usize) -> Self {
        (0..s).fold(self.clone(), |x, _| x.frobenius())
    }

    /// Exact byte encoding of the coefficient vector, suitable as a set key.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let width = ((64 - self.ring.q.leading_zeros()) as usize).div_ceil(8);
        let mut out = Vec::with_capacity(width * self.ring.m);
        for &c in &self.coeffs {
            out.extend_from_slice(&c.to_le_bytes()[..width]);
        }
        out
    }

    /// Parses the canonical text form `c_{m-1}*t^{m-1}+...+c_1*t+c_0`.
    ///
    /// Terms may appear in any order, omitted terms are zero and a missing
    /// coefficient is 1, so the parser also accepts sparse forms such as
    /// `3*t+1` and `t^7+2`.
    pub fn parse(ring: &Arc<BinomialRing>, text: &str) -> Result<Self> {
        let mut coeffs = vec![0u64; ring.m];
        let mut seen = vec![false; ring.m];
        let bad = |msg: &str| Error::Parse(format!("{msg} in {text:?}"));
        for term in text.trim().split('+') {
            let term = term.trim();
            let (coeff, degree) = match term.split_once('*') {
                Some((c, power)) => {
                    let degree = match power.trim() {
                        "t" => 1,
                        p => p
                            .strip_prefix("t^")
                            .and_then(|d| d.parse::<usize>().ok())
                            .ok_or_else(|| bad("bad power"))?,
                    };
                    (c.trim(), degree)
                }
                None if term == "t" => ("1", 1),
                None => match term.strip_prefix("t^") {
                    Some(d) => ("1", d.parse().map_err(|_| bad("bad power"))?),
                    None => (term, 0),
                },
            };
            let coeff: u64 = coeff.parse().map_err(|_| bad("bad coefficient"))?;
            if degree >= ring.m {
                return Err(bad("degree out of range"));
            }
            if seen[degree] {
                return Err(bad("repeated degree"));
            }
            if coeff >= ring.q {
                return Err(bad("coefficient not reduced"));
            }
            seen[degree] = true;
            coeffs[degree] = coeff;
        }
        Self::from_coeffs(ring, coeffs)
    }
}

impl ExtElement {
    /// Compact rendering that lists only the nonzero terms, highest degree
    /// first, e.g. `3*t^2+4*t+1`. Accepted by [`ExtElement::parse`].
    pub fn sparse(&self) -> Sparse<'_> {
        Sparse(self)
    }
}

/// Display adapter returned by [`ExtElement::sparse`].
pub struct Sparse<'a>(&'a ExtElement);

impl fmt::Display for Sparse<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for d in (0..self.0.ring.m).rev() {
            let c = self.0.coeffs[d];
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match d {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{d}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Display for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in (0..self.ring.m).rev() {
            let c = self.coeffs[d];
            match d {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t+")?,
                _ => write!(f, "{c}*t^{d}+")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a ExtElement> for &'a ExtElement {
    type Output = ExtElement;
    fn add(self, rhs: &ExtElement) -> ExtElement {
        self.checked_add(rhs)
            .expect("elements from different rings")
    }
}

impl<'a> Sub<&'a ExtElement> for &'a ExtElement {
    type Output = ExtElement;
    fn sub(self, rhs: &ExtElement) -> ExtElement {
        self.checked_sub(rhs)
            .expect("elements from different rings")
    }
}

impl<'a> Mul<&'a ExtElement> for &'a ExtElement {
    type Output = ExtElement;
    fn mul(self, rhs: &ExtElement) -> ExtElement {
        self.checked_mul(rhs)
            .expect("elements from different rings")
    }
}

impl Neg for &ExtElement {
    type Output = ExtElement;
    fn neg(self) -> ExtElement {
        &ExtElement::zero(&self.ring) - self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring_5_8() -> Arc<BinomialRing> {
        BinomialRing::new(5, 8, 2).unwrap()
    }

    fn elem(ring: &Arc<BinomialRing>, coeffs: &[u64]) -> ExtElement {
        let mut v = coeffs.to_vec();
        v.resize(ring.m(), 0);
        ExtElement::from_coeffs(ring, v).unwrap()
    }

    #[test]
    fn sparse_form_round_trips() {
        let ring = ring_5_8();
        let x = elem(&ring, &[1, 4, 3]);
        assert_eq!(x.sparse().to_string(), "3*t^2+4*t+1");
        assert_eq!(ExtElement::zero(&ring).sparse().to_string(), "0");
        assert_eq!(
            ExtElement::parse(&ring, &x.sparse().to_string()).unwrap(),
            x
        );
        let y = ExtElement::parse(&ring, "t^7 + 2").unwrap();
        assert_eq!(y, elem(&ring, &[2, 0, 0, 0, 0, 0, 0, 1]));
        assert!(ExtElement::parse(&ring, "t^x").is_err());
    }

    #[test]
    fn theta_times_theta_to_m_minus_one_is_a() {
        let ring = ring_5_8();
        let theta = ExtElement::theta(&ring);
        let top = ExtElement::monomial(&ring, 1, 7);
        assert_eq!(&theta * &top, ExtElement::constant(&ring, 2));
    }

    #[test]
    fn multiplicative_identity() {
        let ring = ring_5_8();
        let x = elem(&ring, &[1, 2, 3, 4, 0, 1, 2, 3]);
        assert_eq!(&x * &ExtElement::one(&ring), x);
    }

    #[test]
    fn square_of_theta_plus_one() {
        let ring = ring_5_8();
        let x = elem(&ring, &[1, 1]);
        assert_eq!(&x * &x, elem(&ring, &[1, 2, 1]));
    }

    #[test]
    fn pow_examples() {
        let ring = ring_5_8();
        let x = elem(&ring, &[1, 1]);
        assert!(x.pow(&BigUint::from(0u32)).is_one());
        assert_eq!(
            ExtElement::theta(&ring).pow(&BigUint::from(8u32)),
            ExtElement::constant(&ring, 2)
        );
        // (θ+1)^25 = a^3·θ + 1 with a^3 = 8 = 3 mod 5.
        assert_eq!(x.pow(&BigUint::from(25u32)), elem(&ring, &[1, 3]));
        let mut repeated = ExtElement::one(&ring);
        for _ in 0..25 {
            repeated = &repeated * &x;
        }
        assert_eq!(repeated, elem(&ring, &[1, 3]));
    }

    #[test]
    fn frobenius_examples() {
        let ring = ring_5_8();
        let c = ExtElement::constant(&ring, 3);
        assert_eq!(c.frobenius(), c);
        assert_eq!(
            ExtElement::theta(&ring).frobenius(),
            ExtElement::monomial(&ring, 1, 5)
        );
        let x = elem(&ring, &[4, 1, 0, 2, 0, 0, 3, 1]);
        assert_eq!(x.frobenius(), x.pow(&BigUint::from(5u32)));
    }

    #[test]
    fn frobenius_when_q_divides_m() {
        // Not a field, but x -> x^q is still computed exactly.
        let ring = BinomialRing::new(5, 10, 3).unwrap();
        let x = elem(&ring, &[1, 2, 3, 4, 0, 1, 2, 3, 4, 1]);
        assert_eq!(x.frobenius(), x.pow(&BigUint::from(5u32)));
    }

    #[test]
    fn mul_binomial_matches_general_product() {
        let ring = BinomialRing::new(13, 9, 3).unwrap();
        let x = elem(&ring, &[1, 2, 3, 4, 5, 6, 7, 8, 9]);
        for d in 0..9 {
            let mut binom = ExtElement::monomial(&ring, 7, d);
            binom = &binom + &ExtElement::constant(&ring, 11);
            assert_eq!(x.mul_binomial(7, d, 11), &x * &binom);
        }
    }

    #[test]
    fn ring_mismatch_is_reported() {
        let x = ExtElement::one(&ring_5_8());
        let y = ExtElement::one(&BinomialRing::new(5, 8, 3).unwrap());
        assert_eq!(x.checked_mul(&y), Err(Error::SpecMismatch));
        // Structurally equal rings built separately are compatible.
        let z = ExtElement::one(&ring_5_8());
        assert!(x.checked_add(&z).is_ok());
    }

    #[test]
    fn canonical_text() {
        let ring = BinomialRing::new(5, 4, 2).unwrap();
        let x = elem(&ring, &[1, 3, 0, 4]);
        assert_eq!(x.to_string(), "4*t^3+0*t^2+3*t+1");
        assert_eq!(ExtElement::parse(&ring, &x.to_string()).unwrap(), x);
        assert_eq!(
            ExtElement::parse(&ring, "3*t+1").unwrap(),
            elem(&ring, &[1, 3])
        );
        assert!(ExtElement::parse(&ring, "1*t^4").is_err());
        assert!(ExtElement::parse(&ring, "7").is_err());
        assert!(ExtElement::parse(&ring, "1*t+2*t").is_err());
        let one_dim = BinomialRing::new(7, 1, 3).unwrap();
        assert_eq!(ExtElement::constant(&one_dim, 4).to_string(), "4");
    }

    #[test]
    fn from_coeffs_checks_length() {
        let ring = ring_5_8();
        assert_eq!(
            ExtElement::from_coeffs(&ring, vec![1, 2]).unwrap_err(),
            Error::LengthMismatch {
                expected: 8,
                got: 2
            }
        );
    }

    #[test]
    fn canonical_bytes_are_injective_on_small_ring() {
        let ring = BinomialRing::new(5, 2, 2).unwrap();
        let mut seen = std::collections::HashSet::new();
        for c0 in 0..5 {
            for c1 in 0..5 {
                assert!(seen.insert(elem(&ring, &[c0, c1]).canonical_bytes()));
            }
        }
    }
}
