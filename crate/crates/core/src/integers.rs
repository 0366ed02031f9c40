//! Exact integer number theory on unbounded integers: primality,
//! factorization and multiplicative orders.
//!
//! Factorization strips primes below [`TRIAL_DIVISION_LIMIT`] by trial
//! division and splits whatever remains with Pollard's rho in Brent's
//! formulation. The rho polynomial `x^2 + c` and its starting point are drawn
//! from a SplitMix64 stream seeded with the low 64 bits of the composite, so
//! every run factors the same number along the same path.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};

/// Primes below this bound are removed by trial division before rho runs.
pub const TRIAL_DIVISION_LIMIT: u32 = 1_000_000;

/// Default size cap for [`Factorizer`], in bits.
pub const DEFAULT_CAP_BITS: u64 = 128;

/// Miller-Rabin bases that are a deterministic test for every n < 2^64.
const DETERMINISTIC_BASES_64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Number of Miller-Rabin rounds for n >= 2^64. The bases are the first
/// `PROBABILISTIC_ROUNDS` primes, so the schedule is fixed and the error
/// bound is 4^-64 = 2^-128.
const PROBABILISTIC_ROUNDS: usize = 64;

/// Rho iterations per attempt before a new polynomial is drawn.
const RHO_ITERATION_LIMIT: u64 = 1 << 26;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_DIVISION_LIMIT as usize;
        let mut composite = vec![false; n];
        let mut primes = Vec::new();
        for i in 2..n {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j < n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

/// A complete prime factorization, primes strictly increasing.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Factorization {
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    /// The empty factorization of 1.
    pub fn one() -> Self {
        Self::default()
    }

    /// Builds a factorization from `(prime, exponent)` pairs in any order.
    /// Repeated primes are merged; zero exponents are dropped. Primality is
    /// not checked here.
    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (BigUint, u32)>,
    {
        let mut map: BTreeMap<BigUint, u32> = BTreeMap::new();
        for (p, e) in pairs {
            if e > 0 {
                *map.entry(p).or_insert(0) += e;
            }
        }
        Self {
            factors: map.into_iter().collect(),
        }
    }

    pub fn pairs(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    /// Exponent of `p`, zero when absent.
    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors
            .binary_search_by(|(q, _)| q.cmp(p))
            .map(|idx| self.factors[idx].1)
            .unwrap_or(0)
    }

    /// The product of `prime^exponent`.
    pub fn value(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    /// Factorization of the product of `self` and `other`.
    pub fn merge(&self, other: &Factorization) -> Factorization {
        Factorization::from_pairs(self.factors.iter().chain(other.factors.iter()).cloned())
    }

    /// Euler's totient of the factored value.
    pub fn totient(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, (p, e)| {
            acc * p.pow(e - 1) * (p - 1u32)
        })
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (idx, (p, e)) in self.factors.iter().enumerate() {
            if idx > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

fn mul_mod_u64(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, n);
        }
        base = mul_mod_u64(base, base, n);
        exp >>= 1;
    }
    acc
}

fn miller_rabin_u64(n: u64, base: u64) -> bool {
    let d_shift = (n - 1).trailing_zeros();
    let d = (n - 1) >> d_shift;
    let mut x = pow_mod_u64(base % n, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..d_shift {
        x = mul_mod_u64(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

fn miller_rabin_big(n: &BigUint, base: &BigUint) -> bool {
    let n_minus_one = n - 1u32;
    let shift = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> shift;
    let mut x = base.modpow(&d, n);
    if x.is_one() || x == n_minus_one {
        return true;
    }
    for _ in 1..shift {
        x = (&x * &x) % n;
        if x == n_minus_one {
            return true;
        }
    }
    false
}

/// Primality test for a `u64`; deterministic.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &DETERMINISTIC_BASES_64 {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    DETERMINISTIC_BASES_64
        .iter()
        .all(|&base| miller_rabin_u64(n, base))
}

/// Primality test. Deterministic below 2^64; above that, 64 Miller-Rabin
/// rounds with the first 64 primes as bases.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let primes = small_primes();
    for &p in primes.iter().take(PROBABILISTIC_ROUNDS) {
        if (n % p).is_zero() {
            return false;
        }
    }
    primes
        .iter()
        .take(PROBABILISTIC_ROUNDS)
        .all(|&p| miller_rabin_big(n, &BigUint::from(p)))
}

/// Factors integers up to a configurable size cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorizer {
    cap_bits: u64,
}

impl Default for Factorizer {
    fn default() -> Self {
        Self::with_cap_bits(DEFAULT_CAP_BITS)
    }
}

impl Factorizer {
    /// A factorizer accepting inputs `n < 2^cap_bits`.
    pub fn with_cap_bits(cap_bits: u64) -> Self {
        Self { cap_bits }
    }

    pub fn cap_bits(&self) -> u64 {
        self.cap_bits
    }

    /// Complete prime factorization of `n >= 1`.
    pub fn factorize(&self, n: &BigUint) -> Result<Factorization> {
        if n.is_zero() {
            return Err(Error::InvalidField("cannot factor zero".into()));
        }
        if n.bits() > self.cap_bits {
            return Err(Error::SizeCapExceeded {
                value: n.clone(),
                cap_bits: self.cap_bits,
            });
        }
        let mut found: Vec<(BigUint, u32)> = Vec::new();
        let mut rest = n.clone();
        for &p in small_primes() {
            let p_big = BigUint::from(p);
            if &p_big * &p_big > rest {
                break;
            }
            let mut e = 0;
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            if e > 0 {
                found.push((p_big, e));
            }
        }
        if !rest.is_one() {
            split_composite(&rest, &mut found);
        }
        Ok(Factorization::from_pairs(found))
    }

    /// Factorization of `base^exp - 1`, computed one cyclotomic value
    /// `Phi_d(base)` at a time (`d | exp`). The size cap applies to each
    /// cyclotomic value, not to `base^exp - 1` itself.
    pub fn factorize_power_minus_one(&self, base: u64, exp: u64) -> Result<Factorization> {
        if base < 2 || exp == 0 {
            return Err(Error::InvalidField(format!(
                "{base}^{exp} - 1 is not a positive integer"
            )));
        }
        let mut total = Factorization::one();
        for d in divisors(exp) {
            let phi = cyclotomic_value(d, base);
            total = total.merge(&self.factorize(&phi)?);
        }
        Ok(total)
    }
}

/// Factorization with the default 2^128 cap.
pub fn factorize(n: &BigUint) -> Result<Factorization> {
    Factorizer::default().factorize(n)
}

fn split_composite(n: &BigUint, out: &mut Vec<(BigUint, u32)>) {
    if n.is_one() {
        return;
    }
    if is_prime(n) {
        out.push((n.clone(), 1));
        return;
    }
    let d = find_divisor(n);
    let other = n / &d;
    split_composite(&d, out);
    split_composite(&other, out);
}

/// A nontrivial divisor of the composite `n`.
fn find_divisor(n: &BigUint) -> BigUint {
    if let Some(root) = exact_sqrt(n) {
        return root;
    }
    let mut rng = SplitMix64::seed_from_u64(n.iter_u64_digits().next().unwrap_or(0));
    loop {
        let found = match n.to_u64() {
            Some(small) => {
                let c = 1 + rng.next_u64() % (small - 1);
                let x0 = rng.next_u64() % small;
                brent_u64(small, c, x0).map(BigUint::from)
            }
            None => {
                let c = BigUint::from(rng.next_u64()) % n;
                let x0 = BigUint::from(rng.next_u64()) % n;
                brent_big(n, &c, &x0)
            }
        };
        if let Some(d) = found {
            return d;
        }
    }
}

fn exact_sqrt(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn brent_u64(n: u64, c: u64, x0: u64) -> Option<u64> {
    const BATCH: u64 = 128;
    let f = |y: u64| ((y as u128 * y as u128 + c as u128) % n as u128) as u64;
    let (mut y, mut r, mut acc, mut g) = (x0, 1u64, 1u64, 1u64);
    let (mut x, mut ys) = (x0, x0);
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..BATCH.min(r - k) {
                y = f(y);
                acc = mul_mod_u64(acc, x.abs_diff(y), n);
            }
            g = gcd_u64(acc, n);
            k += BATCH;
        }
        r *= 2;
        if r > RHO_ITERATION_LIMIT {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn brent_big(n: &BigUint, c: &BigUint, x0: &BigUint) -> Option<BigUint> {
    const BATCH: u64 = 128;
    let f = |y: &BigUint| (y * y + c) % n;
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let mut y = x0.clone();
    let mut x = x0.clone();
    let mut ys = x0.clone();
    let mut acc = BigUint::one();
    let mut g = BigUint::one();
    let mut r = 1u64;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..BATCH.min(r - k) {
                y = f(&y);
                acc = (acc * diff(&x, &y)) % n;
            }
            g = acc.gcd(n);
            k += BATCH;
        }
        r *= 2;
        if r > RHO_ITERATION_LIMIT {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

/// Positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Factorization of a machine-sized integer by trial division.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Exponent of the prime `p` in `n` (`n > 0`).
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

fn mobius(n: u64) -> i8 {
    let factors = factor_u64(n);
    if factors.iter().any(|&(_, e)| e > 1) {
        0
    } else if factors.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The value of the `d`-th cyclotomic polynomial at `x`,
/// `prod_{e | d} (x^e - 1)^mu(d/e)`.
pub fn cyclotomic_value(d: u64, x: u64) -> BigUint {
    let x = BigUint::from(x);
    let mut numerator = BigUint::one();
    let mut denominator = BigUint::one();
    for e in divisors(d) {
        let term = x.pow(e as u32) - 1u32;
        match mobius(d / e) {
            1 => numerator *= term,
            -1 => denominator *= term,
            _ => {}
        }
    }
    numerator / denominator
}

/// Reduces a known multiple of an element's order to the exact order.
///
/// `multiple` is a factorization of some `N` with `x^N = 1`; `is_identity(n)`
/// must report whether `x^n = 1`. For each prime `p | N` the candidate is
/// divided by `p` while the quotient still annihilates `x`.
pub fn order_from_multiple<F>(multiple: &Factorization, mut is_identity: F) -> BigUint
where
    F: FnMut(&BigUint) -> bool,
{
    let mut order = multiple.value();
    for (p, e) in multiple.pairs() {
        for _ in 0..*e {
            let candidate = &order / p;
            if is_identity(&candidate) {
                order = candidate;
            } else {
                break;
            }
        }
    }
    order
}

/// Factorization of the Carmichael function `lambda(n)` given that of `n`.
fn carmichael(n: &Factorization, factorizer: &Factorizer) -> Result<Factorization> {
    let two = BigUint::from(2u32);
    let mut lcm: BTreeMap<BigUint, u32> = BTreeMap::new();
    for (p, e) in n.pairs() {
        let local = if *p == two {
            let exp = match e {
                1 => 0,
                2 => 1,
                _ => e - 2,
            };
            Factorization::from_pairs([(two.clone(), exp)])
        } else {
            factorizer
                .factorize(&(p - 1u32))?
                .merge(&Factorization::from_pairs([(p.clone(), e - 1)]))
        };
        for (q, f) in local.pairs() {
            let slot = lcm.entry(q.clone()).or_insert(0);
            *slot = (*slot).max(*f);
        }
    }
    Ok(Factorization::from_pairs(lcm))
}

/// Smallest `d >= 1` with `g^d = 1 (mod n)`.
pub fn multiplicative_order_mod(g: &BigUint, n: &BigUint) -> Result<BigUint> {
    multiplicative_order_mod_with(g, n, &Factorizer::default())
}

/// [`multiplicative_order_mod`] with an explicit factorizer.
pub fn multiplicative_order_mod_with(
    g: &BigUint,
    n: &BigUint,
    factorizer: &Factorizer,
) -> Result<BigUint> {
    if n < &BigUint::from(2u32) {
        return Err(Error::InvalidField(format!(
            "modulus {n} must be at least 2"
        )));
    }
    let g = g % n;
    if !g.gcd(n).is_one() {
        return Err(Error::NotCoprime {
            value: g,
            modulus: n.clone(),
        });
    }
    let lambda = carmichael(&factorizer.factorize(n)?, factorizer)?;
    Ok(order_from_multiple(&lambda, |d| g.modpow(d, n).is_one()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    fn brute_is_prime(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(&big(7)));
        assert!(!is_prime(&big(1)));
        assert!(!is_prime(&big(341)));
        assert!(!is_prime(&big(0)));
        assert!(is_prime(&big(2)));
    }

    #[test]
    fn primality_matches_trial_division_below_ten_thousand() {
        for n in 0..10_000 {
            assert_eq!(is_prime(&big(n)), brute_is_prime(n), "n = {n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        // Strong pseudoprimes to every base up to 7 and up to 23 respectively.
        assert!(!is_prime_u64(3_215_031_751));
        assert!(!is_prime_u64(3_825_123_056_546_413_051));
        // 2^89 - 1 is a Mersenne prime; 2^91 - 1 = 7 * ...
        assert!(is_prime(&((BigUint::one() << 89u32) - 1u32)));
        assert!(!is_prime(&((BigUint::one() << 91u32) - 1u32)));
    }

    #[test]
    fn factorize_examples() {
        let f = factorize(&big(8)).unwrap();
        assert_eq!(f.pairs(), &[(big(2), 3)]);
        let f = factorize(&big(390_624)).unwrap();
        assert_eq!(
            f.pairs(),
            &[(big(2), 5), (big(3), 1), (big(13), 1), (big(313), 1)]
        );
        assert!(factorize(&big(1)).unwrap().is_empty());
    }

    #[test]
    fn factorize_large_semiprime_needs_rho() {
        let p = big(1_000_000_007);
        let q = big(998_244_353);
        let r = BigUint::from(4_294_967_311u64);
        let n = &p * &q * &r;
        let f = factorize(&n).unwrap();
        assert_eq!(f.pairs(), &[(q.clone(), 1), (p.clone(), 1), (r.clone(), 1)]);
        let square = &p * &p * &r;
        let f = factorize(&square).unwrap();
        assert_eq!(f.pairs(), &[(p, 2), (r, 1)]);
    }

    #[test]
    fn factorize_rejects_above_cap() {
        let n = BigUint::one() << 130u32;
        assert!(matches!(
            factorize(&n),
            Err(Error::SizeCapExceeded { cap_bits: 128, .. })
        ));
        let f = Factorizer::with_cap_bits(140).factorize(&n).unwrap();
        assert_eq!(f.pairs(), &[(big(2), 130)]);
    }

    #[test]
    fn power_minus_one_matches_direct_factorization() {
        let factorizer = Factorizer::default();
        for (base, exp) in [(5u64, 8u64), (7, 9), (13, 16), (5, 32)] {
            let via_cyclotomic = factorizer.factorize_power_minus_one(base, exp).unwrap();
            let n = BigUint::from(base).pow(exp as u32) - 1u32;
            assert_eq!(via_cyclotomic.value(), n);
            assert_eq!(via_cyclotomic, factorizer.factorize(&n).unwrap());
        }
    }

    #[test]
    fn power_minus_one_beyond_cap() {
        // 13^64 - 1 has 237 bits, every cyclotomic piece fits under 2^128.
        let f = Factorizer::default()
            .factorize_power_minus_one(13, 64)
            .unwrap();
        assert_eq!(f.value(), BigUint::from(13u32).pow(64) - 1u32);
        assert!(f.primes().all(is_prime));
    }

    #[test]
    fn cyclotomic_values() {
        assert_eq!(cyclotomic_value(1, 5), big(4));
        assert_eq!(cyclotomic_value(2, 5), big(6));
        assert_eq!(cyclotomic_value(4, 5), big(26));
        assert_eq!(cyclotomic_value(6, 7), big(43));
        assert_eq!(cyclotomic_value(12, 2), big(13));
    }

    #[test]
    fn order_examples() {
        assert_eq!(multiplicative_order_mod(&big(5), &big(8)).unwrap(), big(2));
        assert_eq!(multiplicative_order_mod(&big(1), &big(17)).unwrap(), big(1));
        assert_eq!(multiplicative_order_mod(&big(5), &big(32)).unwrap(), big(8));
        assert!(matches!(
            multiplicative_order_mod(&big(4), &big(8)),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn order_matches_linear_search() {
        for n in 2u64..200 {
            for g in 1..n {
                if gcd_u64(g, n) != 1 {
                    continue;
                }
                let mut d = 1;
                let mut x = g % n;
                while x != 1 % n {
                    x = x * g % n;
                    d += 1;
                }
                assert_eq!(
                    multiplicative_order_mod(&big(g), &big(n)).unwrap(),
                    big(d),
                    "g={g} n={n}"
                );
            }
        }
    }

    #[test]
    fn divisors_and_valuation() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(valuation(48, 2), 4);
        assert_eq!(valuation(6, 5), 0);
    }
}
