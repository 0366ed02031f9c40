//! Ground truth: exact multiplicative orders in `F_{q^m}^*`, order
//! certificates, brute-force irreducibility, per-instance verification and
//! grid scans.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construction::{
    binomial_family, check_lemma6, linear_binomials, theorem7_distinct_count, DistinctCount,
    Lemma6Counterexample, DEFAULT_ENUMERATION_BUDGET, DEFAULT_LEMMA6_BUDGET,
};
use crate::counting::{theorem1_bound, BoundFlag, BoundReport};
use crate::error::{Error, Result};
use crate::extension_field::{BinomialRing, ExtElement};
use crate::integers::{
    factor_u64, is_prime, order_from_multiple, Factorization, Factorizer, DEFAULT_CAP_BITS,
};
use crate::parameters::{binomial_exists, build_spec, verify_lemma3, ExtensionSpec, SpecWarning};
use crate::prime_field::check_modulus;

/// Factorization of `q^m - 1` for the instance's field.
pub fn group_order_factorization(
    spec: &ExtensionSpec,
    factorizer: &Factorizer,
) -> Result<Factorization> {
    factorizer.factorize_power_minus_one(spec.q(), spec.m() as u64)
}

/// Exact multiplicative order of a nonzero element, default factorization cap.
pub fn exact_element_order(spec: &ExtensionSpec, x: &ExtElement) -> Result<BigUint> {
    exact_element_order_with(spec, x, &Factorizer::default())
}

/// Exact multiplicative order of a nonzero element.
///
/// Starts from `N = q^m - 1` and strips each prime `p | N` while
/// `x^{candidate/p} = 1`. Requires the full factorization of `N`.
pub fn exact_element_order_with(
    spec: &ExtensionSpec,
    x: &ExtElement,
    factorizer: &Factorizer,
) -> Result<BigUint> {
    if x.ring().as_ref() != spec.ring().as_ref() {
        return Err(Error::SpecMismatch);
    }
    if x.is_zero() {
        return Err(Error::ZeroElement);
    }
    let n = group_order_factorization(spec, factorizer)?;
    Ok(order_from_multiple(&n, |d| x.pow(d).is_one()))
}

/// `x^n` from the base-`q` digits of `n`: `x^n = Π (x^{q^i})^{n_i}`.
///
/// A second exponentiation route, sharing only ring multiplication with
/// [`ExtElement::pow`].
pub fn pow_via_frobenius(x: &ExtElement, n: &BigUint) -> ExtElement {
    let q = x.ring().q();
    let mut acc = ExtElement::one(x.ring());
    let mut conjugate = x.clone();
    let mut rest = n.clone();
    while !rest.is_zero() {
        let digit = (&rest % q).to_u64().expect("digit below q");
        rest /= q;
        for _ in 0..digit {
            acc = &acc * &conjugate;
        }
        conjugate = conjugate.frobenius();
    }
    acc
}

/// Outcome of checking a claimed order `d` for `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderCertificate {
    pub order: BigUint,
    pub factorization: Factorization,
    pub valid: bool,
}

/// Checks that `d` is the exact order of `x`: `x^d = 1` and `x^{d/p} != 1`
/// for every prime `p | d`.
///
/// `primes` must contain every prime factor of `d` (extra entries are
/// ignored); each is re-tested for primality and `d` must split completely
/// over them. Powers are taken with [`pow_via_frobenius`].
pub fn certify_order(x: &ExtElement, d: &BigUint, primes: &[BigUint]) -> OrderCertificate {
    let mut rest = d.clone();
    let mut pairs = Vec::new();
    let mut sound = !d.is_zero() && primes.iter().all(is_prime);
    for p in primes {
        let mut e = 0;
        while !rest.is_zero() && (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((p.clone(), e));
        }
    }
    sound &= rest.is_one();
    let factorization = Factorization::from_pairs(pairs);
    let valid = sound
        && pow_via_frobenius(x, d).is_one()
        && factorization
            .primes()
            .all(|p| !pow_via_frobenius(x, &(d / p)).is_one());
    OrderCertificate {
        order: d.clone(),
        factorization,
        valid,
    }
}

type Poly = Vec<u64>;

fn poly_trim(mut p: Poly) -> Poly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn poly_rem(mut num: Poly, den: &Poly, q: u64) -> Poly {
    let lead_inv = crate::prime_field::PrimeFieldElement::new(*den.last().unwrap(), q)
        .inverse()
        .expect("nonzero leading coefficient")
        .value();
    while num.len() >= den.len() {
        let shift = num.len() - den.len();
        let factor = num.last().unwrap() * lead_inv % q;
        for (i, &c) in den.iter().enumerate() {
            num[shift + i] = (num[shift + i] + q - factor * c % q) % q;
        }
        num = poly_trim(num);
    }
    num
}

fn poly_gcd(mut a: Poly, mut b: Poly, q: u64) -> Poly {
    a = poly_trim(a);
    b = poly_trim(b);
    while !b.is_empty() {
        let r = poly_rem(a, &b, q);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test for `x^m - a` over `F_q`: irreducible iff
/// `x^{q^m} = x mod (x^m - a)` and `gcd(x^{q^{m/p}} - x, x^m - a) = 1` for
/// every prime `p | m`.
pub fn brute_force_irreducible(q: u64, m: usize, a: u64) -> Result<bool> {
    check_modulus(q)?;
    let ring = BinomialRing::new(q, m, a)?;
    let theta = ExtElement::theta(&ring);
    if theta.frobenius_power(m) != theta {
        return Ok(false);
    }
    let mut modulus = vec![0u64; m + 1];
    modulus[0] = (q - a % q) % q;
    modulus[m] = 1;
    for (p, _) in factor_u64(m as u64) {
        let image = &theta.frobenius_power(m / p as usize) - &theta;
        let g = poly_gcd(modulus.clone(), image.coeffs().to_vec(), q);
        if g.len() != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Budgets and overrides for [`verify_instance`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    pub a_override: Option<u64>,
    pub enumeration_budget: u64,
    pub lemma6_budget: u64,
    pub factor_cap_bits: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            a_override: None,
            enumeration_budget: DEFAULT_ENUMERATION_BUDGET,
            lemma6_budget: DEFAULT_LEMMA6_BUDGET,
            factor_cap_bits: DEFAULT_CAP_BITS,
        }
    }
}

/// Named check results. `None` marks a check that did not run; the reason
/// is recorded in [`VerificationReport::skipped`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub lemma2_subgroup: bool,
    pub lemma3_order: bool,
    pub theorem4_distinct: bool,
    pub theorem4_orbit: bool,
    pub lemma6_no_counterexample: Option<bool>,
    pub theorem7_distinct: Option<bool>,
    pub lemma5_holds: bool,
    pub theorem7_bound: bool,
    pub theorem1_holds: bool,
    pub order_certificate: bool,
}

impl Checks {
    pub fn all_pass(&self) -> bool {
        self.lemma2_subgroup
            && self.lemma3_order
            && self.theorem4_distinct
            && self.theorem4_orbit
            && self.lemma6_no_counterexample != Some(false)
            && self.theorem7_distinct != Some(false)
            && self.lemma5_holds
            && self.theorem7_bound
            && self.theorem1_holds
            && self.order_certificate
    }
}

/// Everything verified for one `(q, m, b)`.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub spec: ExtensionSpec,
    pub exact_order: BigUint,
    pub group_order: Factorization,
    pub bound: BoundReport,
    pub checks: Checks,
    pub skipped: Vec<String>,
    pub lemma6_counterexample: Option<Lemma6Counterexample>,
    pub theorem7: Option<DistinctCount>,
    pub timings: Vec<(&'static str, Duration)>,
}

impl VerificationReport {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.all_pass()
    }

    pub fn to_record(&self) -> ReportRecord {
        let spec = &self.spec;
        let lemma8 = self.bound.lemma8.as_ref();
        ReportRecord {
            q: spec.q(),
            m: spec.m(),
            a: spec.a().value(),
            b: spec.b().value(),
            e: spec.e(),
            k: spec.k(),
            l: spec.l(),
            t: spec.t().to_string(),
            case: self.bound.case_id,
            exact_order: self.exact_order.to_string(),
            group_order: self.group_order.value().to_string(),
            lemma5_bound: self.bound.lemma5_bound.to_string(),
            lemma5_floor: self.bound.lemma5_floor.to_string(),
            theorem1_bound: self.bound.theorem1_bound.to_string(),
            s_count: self.bound.s_count.to_string(),
            theorem7_distinct_count: self.theorem7.as_ref().map(|d| d.distinct.to_string()),
            lemma8_w: lemma8.map(|s| s.w),
            lemma8_count: lemma8.map(|s| s.count.to_string()),
            flags: self.bound.flags.clone(),
            warnings: spec.warnings().to_vec(),
            checks: self.checks.clone(),
            skipped: self.skipped.clone(),
            all_checks_pass: self.all_checks_pass(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("record serializes")
    }

    pub fn to_csv_row(&self) -> CsvRow {
        CsvRow {
            q: self.spec.q(),
            m: self.spec.m(),
            a: self.spec.a().value(),
            b: self.spec.b().value(),
            k: self.spec.k(),
            l: self.spec.l(),
            case: self.bound.case_id,
            s_count: self.bound.s_count.to_string(),
            theorem1_bound: self.bound.theorem1_bound.to_string(),
            exact_order: self.exact_order.to_string(),
            all_checks_pass: self.all_checks_pass(),
        }
    }
}

/// Serialized form of a [`VerificationReport`]; field order is the JSON key
/// order. Timings are deliberately absent so output is reproducible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportRecord {
    pub q: u64,
    pub m: usize,
    pub a: u64,
    pub b: u64,
    pub e: u64,
    pub k: usize,
    pub l: usize,
    pub t: String,
    pub case: u8,
    pub exact_order: String,
    pub group_order: String,
    pub lemma5_bound: String,
    pub lemma5_floor: String,
    pub theorem1_bound: String,
    pub s_count: String,
    pub theorem7_distinct_count: Option<String>,
    pub lemma8_w: Option<usize>,
    pub lemma8_count: Option<String>,
    pub flags: Vec<BoundFlag>,
    pub warnings: Vec<SpecWarning>,
    pub checks: Checks,
    pub skipped: Vec<String>,
    pub all_checks_pass: bool,
}

/// One CSV line; column order is fixed by field order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvRow {
    pub q: u64,
    pub m: usize,
    pub a: u64,
    pub b: u64,
    pub k: usize,
    pub l: usize,
    pub case: u8,
    pub s_count: String,
    pub theorem1_bound: String,
    pub exact_order: String,
    pub all_checks_pass: bool,
}

fn timed<T>(
    timings: &mut Vec<(&'static str, Duration)>,
    name: &'static str,
    f: impl FnOnce() -> T,
) -> T {
    let start = Instant::now();
    let out = f();
    timings.push((name, start.elapsed()));
    out
}

/// Runs every check for one instance.
pub fn verify_instance(
    q: u64,
    m: usize,
    b: u64,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    let spec = build_spec(q, m, b, options.a_override)?;
    verify_spec(spec, options)
}

/// [`verify_instance`] for an already built spec.
pub fn verify_spec(spec: ExtensionSpec, options: &VerifyOptions) -> Result<VerificationReport> {
    let mut timings = Vec::new();
    let mut skipped = Vec::new();
    let factorizer = Factorizer::with_cap_bits(options.factor_cap_bits);
    let (k, l, m) = (spec.k(), spec.l(), spec.m());

    let lemma2_subgroup = timed(&mut timings, "lemma2_subgroup", || spec.lemma2_holds());
    let lemma3_order = timed(&mut timings, "lemma3_order", || verify_lemma3(&spec));

    let family = binomial_family(&spec);
    let elements: Vec<ExtElement> = family.iter().map(|b| b.to_element(&spec)).collect();
    let theorem4_distinct = timed(&mut timings, "theorem4_distinct", || {
        elements.iter().collect::<HashSet<_>>().len() == k * l
    });
    let theorem4_orbit = timed(&mut timings, "theorem4_orbit", || {
        frobenius_orbit_matches(&spec, &family, &elements)
    });

    let mut lemma6_counterexample = None;
    let lemma6_no_counterexample = timed(&mut timings, "lemma6", || {
        if k < 2 || l < 2 {
            skipped.push("lemma6_no_counterexample: not applicable (needs k >= 2, l >= 2)".into());
            return Ok(None);
        }
        match check_lemma6(k, l, k, options.lemma6_budget) {
            Ok(found) => {
                let ok = found.is_none();
                lemma6_counterexample = found;
                Ok(Some(ok))
            }
            Err(err) if err.is_budget() => {
                skipped.push(format!("lemma6_no_counterexample: budget ({err})"));
                Ok(None)
            }
            Err(err) => Err(err),
        }
    })?;

    let theorem7 = timed(
        &mut timings,
        "theorem7_distinct",
        || match theorem7_distinct_count(&spec, options.enumeration_budget) {
            Ok(count) => Ok(Some(count)),
            Err(err) if err.is_budget() => {
                skipped.push(format!("theorem7_distinct: budget ({err})"));
                Ok(None)
            }
            Err(err) => Err(err),
        },
    )?;

    let bound = timed(&mut timings, "bounds", || theorem1_bound(k, l, m));

    let group_order = timed(&mut timings, "factor_group_order", || {
        group_order_factorization(&spec, &factorizer)
    })?;
    let x = spec.theta_plus_b();
    let exact_order = timed(&mut timings, "exact_order", || {
        order_from_multiple(&group_order, |d| x.pow(d).is_one())
    });
    let primes: Vec<BigUint> = group_order.primes().cloned().collect();
    let order_certificate = timed(&mut timings, "order_certificate", || {
        certify_order(&x, &exact_order, &primes).valid
    });

    let checks = Checks {
        lemma2_subgroup,
        lemma3_order,
        theorem4_distinct,
        theorem4_orbit,
        lemma6_no_counterexample,
        theorem7_distinct: theorem7.as_ref().map(DistinctCount::all_distinct),
        lemma5_holds: exact_order >= bound.lemma5_floor,
        theorem7_bound: exact_order >= bound.s_count,
        theorem1_holds: exact_order >= bound.theorem1_bound && &exact_order >= bound.case_bound(),
        order_certificate,
    };
    Ok(VerificationReport {
        spec,
        exact_order,
        group_order,
        bound,
        checks,
        skipped,
        lemma6_counterexample,
        theorem7,
        timings,
    })
}

/// The family, computed from the closed form, equals the set
/// `{(θ + b)^{q^s} : 0 <= s < m}` computed by square-and-multiply, entry by
/// entry at `s = j·l + α_i`; the `k` linear members also match the iterated
/// `q^l`-th powers.
fn frobenius_orbit_matches(
    spec: &ExtensionSpec,
    family: &[crate::construction::ConjugateBinomial],
    elements: &[ExtElement],
) -> bool {
    let base = spec.theta_plus_b();
    let q = BigUint::from(spec.q());
    let orbit: Vec<ExtElement> = (0..spec.m()).map(|s| base.pow(&q.pow(s as u32))).collect();
    let per_entry = family
        .iter()
        .zip(elements)
        .all(|(binom, elem)| orbit[binom.frobenius_exponent(spec)] == *elem);
    let as_sets = orbit.iter().collect::<HashSet<_>>() == elements.iter().collect::<HashSet<_>>();
    let linear_ok = linear_binomials(spec)
        .map(|linear| linear.as_slice() == &family[..spec.k()])
        .unwrap_or(false);
    per_entry && as_sets && linear_ok
}

/// Which `b` values a scan covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BRule {
    /// `b = 1`.
    One,
    /// Every nonzero `b` in `F_q`.
    All,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOptions {
    pub q_set: Vec<u64>,
    pub m_max: usize,
    pub b_rule: BRule,
    pub include_degenerate: bool,
    pub verify: VerifyOptions,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            q_set: Vec::new(),
            m_max: 2,
            b_rule: BRule::One,
            include_degenerate: false,
            verify: VerifyOptions::default(),
        }
    }
}

/// One scanned instance and its outcome.
#[derive(Debug, Clone)]
pub struct ScanRow {
    pub q: u64,
    pub m: usize,
    pub b: u64,
    pub outcome: Result<VerificationReport>,
}

/// The `(q, m, b)` triples a scan visits, in output order.
pub fn scan_instances(options: &ScanOptions) -> Result<Vec<(u64, usize, u64)>> {
    let mut out = Vec::new();
    for &q in &options.q_set {
        check_modulus(q).map_err(|_| {
            Error::UnsupportedField(format!("q = {q}; scans need primes 5 <= q < 2^32"))
        })?;
        for m in 2..=options.m_max {
            if !binomial_exists(q, m) {
                continue;
            }
            if !options.include_degenerate && (q - 1) % m as u64 == 0 {
                continue;
            }
            match options.b_rule {
                BRule::One => out.push((q, m, 1)),
                BRule::All => out.extend((1..q).map(|b| (q, m, b))),
            }
        }
    }
    Ok(out)
}

/// Verifies every instance of the grid. Instances run concurrently; rows
/// come back in [`scan_instances`] order, and per-instance errors are kept
/// in the row.
pub fn scan(options: &ScanOptions) -> Result<Vec<ScanRow>> {
    let instances = scan_instances(options)?;
    Ok(instances
        .into_par_iter()
        .map(|(q, m, b)| ScanRow {
            q,
            m,
            b,
            outcome: verify_instance(q, m, b, &options.verify),
        })
        .collect())
}
