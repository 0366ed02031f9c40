//! Instance setup for `F_q[x]/(x^m - a)`.
//!
//! Writing `m = prod p_i^{s_i}` and `q - 1 = prod p_i^{t_i}`, the default
//! constant is `a = α^{(q-1)/e}` with `α` the smallest primitive element and
//! `e = prod_{p_i | m} p_i^{t_i}`. The degree splits as `m = k·l` with
//! `l = ord_m(q) = prod τ(p_i^{s_i - t_i})` and `k = prod p_i^{min(s_i, t_i)}`.
//! From `q^l = 1 + t·m` the element `a^t` has order exactly `k`, and each
//! residue `ik + 1` is a power `q^{α_i} = (ik + 1) + r_i·m`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extension_field::{BinomialRing, ExtElement};
use crate::integers::{factor_u64, multiplicative_order_mod, valuation};
use crate::prime_field::{check_modulus, element_order, find_primitive_element, PrimeFieldElement};

/// Conditions under which a built spec is usable but outside the regime the
/// order bound is stated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecWarning {
    /// `m | q - 1`, so `l = 1` and the family has only the linear binomials.
    MDividesQMinusOne,
    /// Not all of `l >= 2`, `k >= 3`, `m >= 8` hold.
    OutsideStandingRange,
}

impl fmt::Display for SpecWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecWarning::MDividesQMinusOne => write!(f, "m divides q-1"),
            SpecWarning::OutsideStandingRange => {
                write!(f, "outside l >= 2, k >= 3, m >= 8")
            }
        }
    }
}

/// One row `(α_i, r_i)` of the exponent table: `q^{α_i} = (ik + 1) + r_i·m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExponentEntry {
    pub alpha: usize,
    pub r: BigUint,
}

/// A fully derived instance `(q, m, a, b)`.
#[derive(Debug, Clone)]
pub struct ExtensionSpec {
    q: u64,
    m: usize,
    a: PrimeFieldElement,
    b: PrimeFieldElement,
    e: u64,
    k: usize,
    l: usize,
    t: BigUint,
    t_reduced: u64,
    exponent_table: Vec<ExponentEntry>,
    ring: Arc<BinomialRing>,
    warnings: Vec<SpecWarning>,
}

impl PartialEq for ExtensionSpec {
    fn eq(&self, other: &Self) -> bool {
        self.to_record() == other.to_record()
    }
}

impl Eq for ExtensionSpec {}

impl ExtensionSpec {
    pub fn q(&self) -> u64 {
        self.q
    }
    pub fn m(&self) -> usize {
        self.m
    }
    pub fn a(&self) -> PrimeFieldElement {
        self.a
    }
    pub fn b(&self) -> PrimeFieldElement {
        self.b
    }
    /// Order of `a` in `F_q^*`.
    pub fn e(&self) -> u64 {
        self.e
    }
    pub fn k(&self) -> usize {
        self.k
    }
    pub fn l(&self) -> usize {
        self.l
    }
    /// `(q^l - 1)/m`, exact.
    pub fn t(&self) -> &BigUint {
        &self.t
    }
    /// `t mod (q - 1)`, the exponent actually applied to `a`.
    pub fn t_reduced(&self) -> u64 {
        self.t_reduced
    }
    pub fn exponent_table(&self) -> &[ExponentEntry] {
        &self.exponent_table
    }
    pub fn ring(&self) -> &Arc<BinomialRing> {
        &self.ring
    }
    pub fn warnings(&self) -> &[SpecWarning] {
        &self.warnings
    }

    /// `m | q - 1`.
    pub fn is_degenerate(&self) -> bool {
        self.l == 1
    }

    pub fn theta(&self) -> ExtElement {
        ExtElement::theta(&self.ring)
    }

    /// The element `θ + b` whose order is bounded.
    pub fn theta_plus_b(&self) -> ExtElement {
        &self.theta() + &ExtElement::constant(&self.ring, self.b.value())
    }

    /// `q^m - 1`, the order of the multiplicative group.
    pub fn group_order(&self) -> BigUint {
        BigUint::from(self.q).pow(self.m as u32) - 1u32
    }

    /// The subgroup of `Z_m^*` generated by `q` equals `{ik + 1 mod m}`, and
    /// `k | e`, `k | q - 1`, `gcd((q-1)/k, l) = 1`.
    pub fn lemma2_holds(&self) -> bool {
        let (q, m, k, l) = (self.q, self.m as u64, self.k as u64, self.l as u64);
        let powers: BTreeSet<u64> = std::iter::successors(Some(1 % m), |x| Some(x * (q % m) % m))
            .take(l as usize)
            .collect();
        let residues: BTreeSet<u64> = (0..l).map(|i| (i * k + 1) % m).collect();
        powers == residues
            && powers.len() == l as usize
            && (q - 1) % k == 0
            && self.e.is_multiple_of(k)
            && ((q - 1) / k).gcd(&l) == 1
            && k * l == m
    }

    /// The canonical JSON record.
    pub fn to_record(&self) -> SpecRecord {
        SpecRecord {
            q: self.q,
            m: self.m,
            a: self.a.value(),
            b: self.b.value(),
            e: self.e,
            k: self.k,
            l: self.l,
            t: self.t.to_string(),
            alpha: self.exponent_table.iter().map(|row| row.alpha).collect(),
            r: self
                .exponent_table
                .iter()
                .map(|row| row.r.to_string())
                .collect(),
        }
    }

    /// Rebuilds a spec from its record; every derived field must match.
    pub fn from_record(record: &SpecRecord) -> Result<Self> {
        let spec = build_spec(record.q, record.m, record.b, Some(record.a))?;
        if &spec.to_record() != record {
            return Err(Error::Parse(
                "derived fields do not match the record".into(),
            ));
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("record serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: SpecRecord =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_record(&record)
    }
}

/// Serialized form of an [`ExtensionSpec`]. Field order is the key order of
/// the JSON object; unbounded integers are decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecRecord {
    pub q: u64,
    pub m: usize,
    pub a: u64,
    pub b: u64,
    pub e: u64,
    pub k: usize,
    pub l: usize,
    pub t: String,
    pub alpha: Vec<usize>,
    pub r: Vec<String>,
}

fn prime_divisors(n: u64) -> Vec<u64> {
    factor_u64(n).into_iter().map(|(p, _)| p).collect()
}

/// Some `a` makes `x^m - a` irreducible: every prime factor of `m` divides
/// `q - 1`, and `4 | q - 1` whenever `4 | m`.
pub fn binomial_exists(q: u64, m: usize) -> bool {
    let m = m as u64;
    prime_divisors(m).iter().all(|p| (q - 1).is_multiple_of(*p))
        && (!m.is_multiple_of(4) || (q - 1).is_multiple_of(4))
}

/// Irreducibility of `x^m - a` over `F_q`: every prime factor of `m` divides
/// `e = ord(a)` but not `(q-1)/e`, and `4 | q - 1` whenever `4 | m`.
pub fn check_binomial_irreducible(q: u64, m: usize, a: PrimeFieldElement) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    let e = element_order(a)?;
    let cofactor = (q - 1) / e;
    let m = m as u64;
    let primes_ok = prime_divisors(m)
        .into_iter()
        .all(|p| e % p == 0 && !cofactor.is_multiple_of(p));
    Ok(primes_ok && (!m.is_multiple_of(4) || (q - 1).is_multiple_of(4)))
}

/// The default constant `a = α^{(q-1)/e}` and its order `e`.
pub fn construct_a(q: u64, m: usize) -> Result<(PrimeFieldElement, u64)> {
    check_modulus(q)?;
    if !binomial_exists(q, m) {
        return Err(Error::NoBinomialExists { q, m });
    }
    let e: u64 = prime_divisors(m as u64)
        .into_iter()
        .map(|p| p.pow(valuation(q - 1, p)))
        .product();
    let alpha = find_primitive_element(q)?;
    Ok((alpha.pow_u64((q - 1) / e), e))
}

/// The split `m = k·l`. `l` is computed both as `ord_m(q)` and as the
/// product of `τ(p^{s-t})`; disagreement is a [`Error::FormulaMismatch`].
pub fn decompose(q: u64, m: usize) -> Result<(usize, usize)> {
    if !binomial_exists(q, m) {
        return Err(Error::NoBinomialExists { q, m });
    }
    let m64 = m as u64;
    let l_direct = if m64 < 2 {
        1
    } else {
        multiplicative_order_mod(&BigUint::from(q), &BigUint::from(m64))?
            .to_u64()
            .expect("order below m")
    };
    let (mut l_formula, mut k_formula) = (1u64, 1u64);
    for (p, s) in factor_u64(m64) {
        let t = valuation(q - 1, p);
        if s > t {
            l_formula *= p.pow(s - t);
        }
        k_formula *= p.pow(s.min(t));
    }
    if l_direct != l_formula {
        return Err(Error::FormulaMismatch(format!(
            "ord_{m}({q}) = {l_direct} but the tau product gives {l_formula}"
        )));
    }
    if k_formula * l_formula != m64 {
        return Err(Error::FormulaMismatch(format!(
            "k·l = {k_formula}·{l_formula} != {m}"
        )));
    }
    Ok((k_formula as usize, l_formula as usize))
}

/// Builds the full instance for `(q, m, b)` with the default `a` or an
/// irreducible override.
pub fn build_spec(q: u64, m: usize, b: u64, a_override: Option<u64>) -> Result<ExtensionSpec> {
    if q.is_multiple_of(2) || q < 5 || check_modulus(q).is_err() {
        return Err(Error::UnsupportedField(format!(
            "q = {q}; only primes 5 <= q < 2^32 are supported"
        )));
    }
    if m < 2 {
        return Err(Error::UnsupportedField(format!("m = {m}; need m >= 2")));
    }
    let b = PrimeFieldElement::new(b, q);
    if b.is_zero() {
        return Err(Error::ZeroElement);
    }
    if !binomial_exists(q, m) {
        return Err(Error::NoBinomialExists { q, m });
    }
    let a = match a_override {
        Some(raw) => {
            let a = PrimeFieldElement::new(raw, q);
            if a.is_zero() || !check_binomial_irreducible(q, m, a)? {
                return Err(Error::IrreducibilityFailure { q, m, a: a.value() });
            }
            a
        }
        None => construct_a(q, m)?.0,
    };
    let e = element_order(a)?;
    let (k, l) = decompose(q, m)?;

    let q_big = BigUint::from(q);
    let m_big = BigUint::from(m);
    let (t, rem) = (q_big.pow(l as u32) - 1u32).div_rem(&m_big);
    if !rem.is_zero() {
        return Err(Error::FormulaMismatch(format!(
            "m = {m} does not divide q^l - 1"
        )));
    }
    let t_reduced = (&t % (q - 1)).to_u64().expect("reduced below q - 1");

    let residues: Vec<usize> =
        std::iter::successors(Some(1 % m), |x| Some(x * (q as usize % m) % m))
            .take(l)
            .collect();
    let exponent_table = (0..l)
        .map(|i| {
            let target = (i * k + 1) % m;
            let alpha = residues.iter().position(|&x| x == target).ok_or_else(|| {
                Error::FormulaMismatch(format!("{target} is not a power of {q} mod {m}"))
            })?;
            let power = q_big.pow(alpha as u32);
            let r = (power - BigUint::from(i * k + 1)) / &m_big;
            Ok(ExponentEntry { alpha, r })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut warnings = Vec::new();
    if (q - 1).is_multiple_of(m as u64) {
        warnings.push(SpecWarning::MDividesQMinusOne);
    }
    if l < 2 || k < 3 || m < 8 {
        warnings.push(SpecWarning::OutsideStandingRange);
    }

    Ok(ExtensionSpec {
        q,
        m,
        a,
        b,
        e,
        k,
        l,
        t,
        t_reduced,
        exponent_table,
        ring: BinomialRing::new(q, m, a.value())?,
        warnings,
    })
}

/// `a^{t mod (q-1)}` has order exactly `k` in `F_q^*`.
pub fn verify_lemma3(spec: &ExtensionSpec) -> bool {
    element_order(spec.a().pow_u64(spec.t_reduced())).ok() == Some(spec.k() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(v: u64, q: u64) -> PrimeFieldElement {
        PrimeFieldElement::new(v, q)
    }

    #[test]
    fn irreducibility_examples() {
        assert!(check_binomial_irreducible(5, 8, fe(2, 5)).unwrap());
        assert!(!check_binomial_irreducible(5, 2, fe(4, 5)).unwrap());
        assert!(check_binomial_irreducible(7, 9, fe(2, 7)).unwrap());
        assert_eq!(
            check_binomial_irreducible(7, 9, fe(0, 7)),
            Err(Error::ZeroElement)
        );
    }

    #[test]
    fn construct_a_examples() {
        assert_eq!(construct_a(5, 8).unwrap(), (fe(2, 5), 4));
        assert_eq!(construct_a(7, 27).unwrap(), (fe(2, 7), 3));
        assert_eq!(
            construct_a(5, 3),
            Err(Error::NoBinomialExists { q: 5, m: 3 })
        );
        // 4 | m needs 4 | q - 1.
        assert!(construct_a(7, 4).is_err());
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(decompose(5, 8).unwrap(), (4, 2));
        assert_eq!(decompose(5, 32).unwrap(), (4, 8));
        assert_eq!(decompose(7, 27).unwrap(), (3, 9));
        assert_eq!(decompose(5, 4).unwrap(), (4, 1));
    }

    #[test]
    fn build_spec_q5_m8() {
        let spec = build_spec(5, 8, 1, None).unwrap();
        assert_eq!(spec.a().value(), 2);
        assert_eq!((spec.e(), spec.k(), spec.l()), (4, 4, 2));
        assert_eq!(spec.t(), &BigUint::from(3u32));
        let table: Vec<(usize, BigUint)> = spec
            .exponent_table()
            .iter()
            .map(|row| (row.alpha, row.r.clone()))
            .collect();
        assert_eq!(table, vec![(0, 0u32.into()), (1, 0u32.into())]);
        assert!(spec.warnings().is_empty());
    }

    #[test]
    fn build_spec_q5_m32() {
        let spec = build_spec(5, 32, 1, None).unwrap();
        assert_eq!(spec.t(), &BigUint::from(12207u32));
        assert_eq!(spec.t_reduced(), 12207 % 4);
        assert_eq!(spec.exponent_table()[2].alpha, 6);
        assert_eq!(spec.exponent_table()[2].r, BigUint::from(488u32));
    }

    #[test]
    fn build_spec_degenerate() {
        let spec = build_spec(5, 4, 1, None).unwrap();
        assert_eq!((spec.k(), spec.l()), (4, 1));
        assert_eq!(spec.t(), &BigUint::from(1u32));
        assert!(spec.warnings().contains(&SpecWarning::MDividesQMinusOne));
        assert!(spec.warnings().contains(&SpecWarning::OutsideStandingRange));
        assert!(verify_lemma3(&spec));
    }

    #[test]
    fn build_spec_errors() {
        assert!(matches!(
            build_spec(4, 8, 1, None),
            Err(Error::UnsupportedField(_))
        ));
        assert!(matches!(
            build_spec(3, 2, 1, None),
            Err(Error::UnsupportedField(_))
        ));
        assert!(matches!(
            build_spec(9, 2, 1, None),
            Err(Error::UnsupportedField(_))
        ));
        assert_eq!(build_spec(5, 8, 5, None).unwrap_err(), Error::ZeroElement);
        assert_eq!(
            build_spec(5, 3, 1, None).unwrap_err(),
            Error::NoBinomialExists { q: 5, m: 3 }
        );
        // 4 is a square mod 5.
        assert_eq!(
            build_spec(5, 8, 1, Some(4)).unwrap_err(),
            Error::IrreducibilityFailure { q: 5, m: 8, a: 4 }
        );
    }

    #[test]
    fn a_override_accepted_when_irreducible() {
        let spec = build_spec(5, 8, 2, Some(3)).unwrap();
        assert_eq!(spec.a().value(), 3);
        assert!(verify_lemma3(&spec));
        assert!(spec.lemma2_holds());
    }

    #[test]
    fn lemma3_examples() {
        assert!(verify_lemma3(&build_spec(5, 8, 1, None).unwrap()));
        assert!(verify_lemma3(&build_spec(7, 27, 1, None).unwrap()));
    }

    #[test]
    fn json_record_round_trip() {
        let spec = build_spec(5, 32, 1, None).unwrap();
        let json = spec.to_json();
        assert!(json
            .starts_with(r#"{"q":5,"m":32,"a":2,"b":1,"e":4,"k":4,"l":8,"t":"12207","alpha":[0,"#));
        assert_eq!(ExtensionSpec::from_json(&json).unwrap(), spec);
        let tampered = json.replace("\"12207\"", "\"12208\"");
        assert!(ExtensionSpec::from_json(&tampered).is_err());
    }

    #[test]
    fn exponent_table_is_permutation_and_exact() {
        for (q, m) in [(5, 8), (5, 32), (7, 27), (13, 36), (11, 25)] {
            let spec = build_spec(q, m, 1, None).unwrap();
            let alphas: BTreeSet<usize> = spec.exponent_table().iter().map(|r| r.alpha).collect();
            assert_eq!(alphas, (0..spec.l()).collect());
            for (i, row) in spec.exponent_table().iter().enumerate() {
                let lhs = BigUint::from(q).pow(row.alpha as u32);
                let rhs = BigUint::from(i * spec.k() + 1) + &row.r * BigUint::from(m);
                assert_eq!(lhs, rhs);
            }
            assert!(spec.lemma2_holds());
        }
    }
}
