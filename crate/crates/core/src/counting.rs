//! Counting the selection set `S` and the order bounds built on it.
//!
//! `S` is the set of 0/1 matrices `e[i][j]`, `i < l`, `j < k`, whose weighted
//! sum `Σ (ik + 1)·e[i][j]` stays below `m`. Its size is a lower bound for the
//! order of `θ + b`. Bounds are kept exact: `5.8` is the rational `29/5`, and
//! `⌈2^sqrt(n)⌉` is evaluated in fixed-point interval arithmetic until both
//! interval endpoints round up to the same integer.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A 0/1 matrix indexed by `(i, j)`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SelectionVector {
    k: usize,
    l: usize,
    bits: Vec<bool>,
}

impl SelectionVector {
    pub fn zeros(k: usize, l: usize) -> Self {
        Self {
            k,
            l,
            bits: vec![false; k * l],
        }
    }

    /// From a row-major bit vector of length `k·l`.
    pub fn from_bits(k: usize, l: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != k * l {
            return Err(Error::LengthMismatch {
                expected: k * l,
                got: bits.len(),
            });
        }
        Ok(Self { k, l, bits })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.k + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.bits[i * self.k + j] = value;
    }

    /// Selected positions `(i, j)` in row-major order.
    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(idx, _)| (idx / self.k, idx % self.k))
    }

    /// `Σ (ik + 1)·e[i][j]`.
    pub fn weight(&self) -> u128 {
        self.ones().map(|(i, _)| (i * self.k + 1) as u128).sum()
    }

    pub fn is_member(&self, bound: u128) -> bool {
        self.weight() < bound
    }
}

impl fmt::Display for SelectionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", u8::from(b))?;
        }
        Ok(())
    }
}

fn binomials(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for c in 1..=n {
        let next = &row[c - 1] * BigUint::from(n + 1 - c) / BigUint::from(c);
        row.push(next);
    }
    row
}

/// `|S|`: the number of 0/1 matrices with weighted sum below `bound`.
///
/// Dynamic programming over partial sums; row `i` contributes `c·(ik + 1)`
/// in `C(k, c)` ways.
pub fn count_s_dp(k: usize, l: usize, bound: &BigUint) -> BigUint {
    if bound.is_zero() {
        return BigUint::zero();
    }
    let max_sum: u128 = (0..l).map(|i| (k * (i * k + 1)) as u128).sum();
    let reachable = bound
        .to_u128()
        .filter(|&b| b <= max_sum)
        .map(|b| b as usize);
    let Some(limit) = reachable else {
        return BigUint::one() << (k * l);
    };
    let choose = binomials(k);
    let mut counts = vec![BigUint::zero(); limit];
    counts[0] = BigUint::one();
    for i in 0..l {
        let w = i * k + 1;
        let mut next = vec![BigUint::zero(); limit];
        for (s, ways) in counts.iter().enumerate() {
            if ways.is_zero() {
                continue;
            }
            for (c, mult) in choose.iter().enumerate() {
                let target = s + c * w;
                if target >= limit {
                    break;
                }
                next[target] += ways * mult;
            }
        }
        counts = next;
    }
    counts.into_iter().sum()
}

/// Members of `S` in lexicographic bit order, zero vector first.
#[derive(Debug, Clone)]
pub struct SelectionIter {
    current: SelectionVector,
    weights: Vec<u128>,
    sum: u128,
    bound: u128,
    started: bool,
    done: bool,
}

impl Iterator for SelectionIter {
    type Item = SelectionVector;

    fn next(&mut self) -> Option<SelectionVector> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.current.clone());
        }
        // Lexicographic successor: clear the trailing run of ones, then set
        // the last zero whose weight still fits.
        for p in (0..self.weights.len()).rev() {
            if self.current.bits[p] {
                self.current.bits[p] = false;
                self.sum -= self.weights[p];
            } else if self.sum + self.weights[p] < self.bound {
                self.current.bits[p] = true;
                self.sum += self.weights[p];
                return Some(self.current.clone());
            }
        }
        self.done = true;
        None
    }
}

/// Streams `S`, refusing when `|S|` exceeds `budget`.
pub fn enumerate_s(k: usize, l: usize, bound: &BigUint, budget: u64) -> Result<SelectionIter> {
    let size = count_s_dp(k, l, bound);
    if size > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            needed: size,
            budget,
        });
    }
    let weights = (0..l)
        .flat_map(|i| std::iter::repeat_n((i * k + 1) as u128, k))
        .collect();
    Ok(SelectionIter {
        current: SelectionVector::zeros(k, l),
        weights,
        sum: 0,
        bound: bound.to_u128().unwrap_or(u128::MAX),
        started: false,
        done: size.is_zero(),
    })
}

/// The constructive solution family: `w` is the largest integer with
/// `Σ_{i <= w} (ik + 1) = (wk + 2)(w + 1)/2 < l`, and `count = 2^{(w+1)k}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma8Solution {
    pub w: usize,
    #[serde(with = "decimal")]
    pub count: BigUint,
    /// `l > k`; otherwise the value is diagnostic only.
    pub within_hypothesis: bool,
}

pub fn lemma8_constructive(k: usize, l: usize) -> Result<Lemma8Solution> {
    let column_sum = |w: usize| (w * k + 2) * (w + 1) / 2;
    if column_sum(0) >= l {
        return Err(Error::NoSolution(format!(
            "no column solution for l = {l}: the weight-1 entry alone needs l >= 2"
        )));
    }
    let mut w = 0;
    while (w + 1) < l && column_sum(w + 1) < l {
        w += 1;
    }
    Ok(Lemma8Solution {
        w,
        count: BigUint::one() << ((w + 1) * k),
        within_hypothesis: l > k,
    })
}

fn isqrt_exact(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt() as u64;
    (r.saturating_sub(1)..=r + 1).find(|x| x * x == n)
}

/// Bounds on `ln 2` in units of `2^-prec`, from `Σ 1/(j·2^j)`.
fn ln2_interval(prec: u32) -> (BigUint, BigUint) {
    let scale = BigUint::one() << prec;
    let mut lo = BigUint::zero();
    let mut hi = BigUint::zero();
    let terms = prec as usize + 1;
    for j in 1..=terms {
        let denom = BigUint::from(j) << j;
        let (quot, rem) = scale.div_rem(&denom);
        if !rem.is_zero() {
            hi += 1u32;
        }
        lo += &quot;
        hi += quot;
    }
    // Tail Σ_{j > terms} 2^prec/(j·2^j) < 1.
    hi += 1u32;
    (lo, hi)
}

/// Lower bound of `exp(y / 2^prec)` for `0 <= y < 2^prec`, same units.
fn exp_lower(y: &BigUint, prec: u32) -> BigUint {
    let scale = BigUint::one() << prec;
    let mut term = scale.clone();
    let mut sum = scale;
    let mut n = 1u32;
    loop {
        term = ((&term * y) >> prec) / n;
        if term.is_zero() {
            return sum;
        }
        sum += &term;
        n += 1;
    }
}

/// Upper bound of `exp(y / 2^prec)` for `0 <= y < 2^prec`, same units.
fn exp_upper(y: &BigUint, prec: u32) -> BigUint {
    let scale = BigUint::one() << prec;
    let mut term = scale.clone();
    let mut sum = scale;
    let mut n = 1u32;
    loop {
        let num = &term * y;
        let denom = BigUint::from(n) << prec;
        term = num.div_ceil(&denom);
        sum += &term;
        n += 1;
        // Each later term shrinks by at least half since y < 1 and n >= 2,
        // so the tail is at most the last term.
        if n > 2 && term <= BigUint::one() {
            return sum + term + 1u32;
        }
        if term.is_zero() {
            return sum;
        }
    }
}

/// Interval `[lo, hi]` containing `2^{x / 2^prec}`, in units of `2^-prec`.
fn pow2_interval(x_lo: &BigUint, x_hi: &BigUint, prec: u32) -> (BigUint, BigUint) {
    let (ln2_lo, ln2_hi) = ln2_interval(prec);
    let mask = (BigUint::one() << prec) - 1u32;
    let split = |x: &BigUint| {
        let whole = (x >> prec).to_usize().expect("exponent fits usize");
        (whole, x & &mask)
    };
    let (whole_lo, frac_lo) = split(x_lo);
    let (whole_hi, frac_hi) = split(x_hi);
    let y_lo = (&frac_lo * &ln2_lo) >> prec;
    let y_hi = (&frac_hi * &ln2_hi).div_ceil(&(BigUint::one() << prec));
    (
        exp_lower(&y_lo, prec) << whole_lo,
        exp_upper(&y_hi, prec) << whole_hi,
    )
}

/// `⌈2^sqrt(n)⌉`, certified.
///
/// Starts from a 128-bit mantissa and doubles the working precision until
/// the enclosing interval has a single integer ceiling. For non-square `n`
/// the value is irrational, so the loop terminates.
pub fn ceil_pow2_sqrt(n: u64) -> BigUint {
    if let Some(root) = isqrt_exact(n) {
        return BigUint::one() << root;
    }
    let whole_bits = (n as f64).sqrt().ceil() as u32 + 1;
    let mut prec = 128 + whole_bits;
    loop {
        let scaled = BigUint::from(n) << (2 * prec);
        let root_lo = scaled.sqrt();
        let root_hi = &root_lo + 1u32;
        let (lo, hi) = pow2_interval(&root_lo, &root_hi, prec);
        let unit = BigUint::one() << prec;
        let ceil_lo = lo.div_ceil(&unit);
        let ceil_hi = hi.div_ceil(&unit);
        if ceil_lo == ceil_hi {
            return ceil_lo;
        }
        prec *= 2;
    }
}

/// Named findings attached to a [`BoundReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundFlag {
    /// `|S| < ⌈2^sqrt(2m)⌉` in case 2.
    SCountBelowTheorem1Bound,
    /// The integer-`w` constructive count falls short of `⌈2^sqrt(2m)⌉`.
    ConstructiveBelowTheorem1Bound,
    /// The case-1 chain `(29/5)^k > 4^k >= 2^{2 sqrt m}` failed.
    Case1ChainFails,
}

impl fmt::Display for BoundFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            BoundFlag::SCountBelowTheorem1Bound => "s_count < theorem bound",
            BoundFlag::ConstructiveBelowTheorem1Bound => "constructive < theorem bound",
            BoundFlag::Case1ChainFails => "case 1 bound chain fails",
        };
        f.write_str(text)
    }
}

/// The two-case lower bound for one `(k, l, m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    /// 1 when `k >= l`, 2 otherwise.
    pub case_id: u8,
    pub k: usize,
    pub l: usize,
    pub m: usize,
    /// `(29/5)^k`.
    pub lemma5_bound: BigRational,
    pub lemma5_floor: BigUint,
    /// `⌈2^sqrt(2m)⌉`.
    pub theorem1_bound: BigUint,
    pub s_count: BigUint,
    /// Present in case 2.
    pub lemma8: Option<Lemma8Solution>,
    pub flags: Vec<BoundFlag>,
}

impl BoundReport {
    /// The bound the proof establishes in this case: `⌊(29/5)^k⌋` in case 1,
    /// `⌈2^sqrt(2m)⌉` in case 2.
    pub fn case_bound(&self) -> &BigUint {
        if self.case_id == 1 {
            &self.lemma5_floor
        } else {
            &self.theorem1_bound
        }
    }
}

/// Evaluates both cases of the main bound for `m = k·l`.
pub fn theorem1_bound(k: usize, l: usize, m: usize) -> BoundReport {
    assert_eq!(k * l, m, "m must equal k·l");
    let lemma5_bound = BigRational::new(BigInt::from(29u32), BigInt::from(5u32)).pow(k as i32);
    let lemma5_floor = lemma5_bound
        .floor()
        .to_integer()
        .to_biguint()
        .expect("positive");
    let theorem1_bound = ceil_pow2_sqrt(2 * m as u64);
    let s_count = count_s_dp(k, l, &BigUint::from(m));
    let mut flags = Vec::new();
    let case_id = if k >= l { 1 } else { 2 };
    let lemma8 = if case_id == 2 {
        let solution = lemma8_constructive(k, l).ok();
        if s_count < theorem1_bound {
            flags.push(BoundFlag::SCountBelowTheorem1Bound);
        }
        if solution.as_ref().is_some_and(|s| s.count < theorem1_bound) {
            flags.push(BoundFlag::ConstructiveBelowTheorem1Bound);
        }
        solution
    } else {
        let four_pow = BigRational::from_integer(BigInt::from(4u32).pow(k as u32));
        if k * k < m || lemma5_bound <= four_pow {
            flags.push(BoundFlag::Case1ChainFails);
        }
        None
    };
    BoundReport {
        case_id,
        k,
        l,
        m,
        lemma5_bound,
        lemma5_floor,
        theorem1_bound,
        s_count,
        lemma8,
        flags,
    }
}

/// Serde adapter writing unbounded integers as decimal strings.
pub mod decimal {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
