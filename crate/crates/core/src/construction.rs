//! The family of Frobenius conjugates of `θ + b`.
//!
//! Raising `θ + b` to the power `q^l` multiplies the `θ` coefficient by
//! `a^t`, which has order `k`; this yields the `k` linear binomials
//! `a^{jt}·θ + b`. Raising those to `q^{α_i}` sends `θ` to `a^{r_i}·θ^{ik+1}`,
//! giving the `k·l` binomials
//!
//! ```text
//! a^{(j·t + r_i) mod (q-1)} · θ^{ik+1} + b,    0 <= i < l, 0 <= j < k.
//! ```
//!
//! Products of these over the members of `S` are pairwise distinct, which is
//! what [`theorem7_distinct_count`] checks exhaustively.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::counting::{count_s_dp, SelectionVector};
use crate::error::{Error, Result};
use crate::extension_field::{BinomialRing, ExtElement};
use crate::parameters::ExtensionSpec;
use crate::prime_field::PrimeFieldElement;

/// Default cap on `|S|` for exhaustive product enumeration.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 22;

/// Default cap on tuples visited by [`check_lemma6`].
pub const DEFAULT_LEMMA6_BUDGET: u64 = 10_000_000;

/// One member `coefficient·θ^degree + constant` of the conjugate family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConjugateBinomial {
    pub i: usize,
    pub j: usize,
    /// `i·k + 1`.
    pub degree: usize,
    pub coefficient: PrimeFieldElement,
    pub constant: PrimeFieldElement,
}

impl ConjugateBinomial {
    pub fn to_element(&self, spec: &ExtensionSpec) -> ExtElement {
        let ring = spec.ring();
        &ExtElement::monomial(ring, self.coefficient.value(), self.degree)
            + &ExtElement::constant(ring, self.constant.value())
    }

    /// The exponent `s = j·l + α_i` with `self = (θ + b)^{q^s}`.
    pub fn frobenius_exponent(&self, spec: &ExtensionSpec) -> usize {
        self.j * spec.l() + spec.exponent_table()[self.i].alpha
    }
}

/// The `k` linear binomials, each the `q^l`-th power of the previous one,
/// starting from `θ + b`.
pub fn linear_binomials(spec: &ExtensionSpec) -> Result<Vec<ConjugateBinomial>> {
    let mut current = spec.theta_plus_b();
    let mut out = Vec::with_capacity(spec.k());
    for j in 0..spec.k() {
        let support: Vec<(usize, u64)> = current.support().collect();
        let coefficient = match support.as_slice() {
            [(0, b), (1, c)] if *b == spec.b().value() => *c,
            _ => {
                return Err(Error::FormulaMismatch(format!(
                    "conjugate {j} of θ + b is not linear: {current}"
                )))
            }
        };
        out.push(ConjugateBinomial {
            i: 0,
            j,
            degree: 1,
            coefficient: PrimeFieldElement::new(coefficient, spec.q()),
            constant: spec.b(),
        });
        current = current.frobenius_power(spec.l());
    }
    Ok(out)
}

/// All `k·l` conjugates in row-major `(i, j)` order, from the closed form.
pub fn binomial_family(spec: &ExtensionSpec) -> Vec<ConjugateBinomial> {
    let group = spec.q() - 1;
    let (k, l) = (spec.k(), spec.l());
    let mut out = Vec::with_capacity(k * l);
    for (i, row) in spec.exponent_table().iter().enumerate() {
        let r = (&row.r % group).to_u64().expect("reduced mod q - 1");
        for j in 0..k {
            let exponent =
                ((j as u128 * spec.t_reduced() as u128 + r as u128) % group as u128) as u64;
            out.push(ConjugateBinomial {
                i,
                j,
                degree: i * k + 1,
                coefficient: spec.a().pow_u64(exponent),
                constant: spec.b(),
            });
        }
    }
    out
}

/// A solution of `u_0·d_0 = v_0·d_0 + Σ u_s·d_s` with larger degrees `d_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma6Counterexample {
    pub d0: usize,
    pub u0: usize,
    pub v0: usize,
    /// `(d_s, u_s)` with `d_s > d_0`, `u_s >= 1`.
    pub terms: Vec<(usize, usize)>,
}

/// The leftover multiplicity `v0` of `d0` and the `(degree, count)` terms used.
type DegreeSolution = (usize, Vec<(usize, usize)>);

struct Lemma6Search<'a> {
    larger: &'a [usize],
    d0: usize,
    u_cap: usize,
    visited: u64,
    budget: u64,
    chosen: Vec<(usize, usize)>,
}

impl Lemma6Search<'_> {
    fn run(&mut self, idx: usize, remaining: usize) -> Result<Option<DegreeSolution>> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::BoundsTooLarge {
                needed: self.visited,
                budget: self.budget,
            });
        }
        if idx == self.larger.len() {
            if !self.chosen.is_empty() && remaining.is_multiple_of(self.d0) {
                let v0 = remaining / self.d0;
                if v0 <= self.u_cap {
                    return Ok(Some((v0, self.chosen.clone())));
                }
            }
            return Ok(None);
        }
        let d = self.larger[idx];
        let most = (remaining / d).min(self.u_cap);
        for u in 0..=most {
            if u > 0 {
                self.chosen.push((d, u));
            }
            let found = self.run(idx + 1, remaining - u * d)?;
            if u > 0 {
                self.chosen.pop();
            }
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

/// Exhaustive search for a representation of `u_0·d_0` (`1 <= u_0 <= k`) by
/// `d_0` and strictly larger degrees from `{ik + 1}` that uses at least one
/// larger degree. Multiplicities are bounded by `u_cap`; the target itself
/// bounds them more tightly, so the search is complete.
pub fn check_lemma6(
    k: usize,
    l: usize,
    u_cap: usize,
    budget: u64,
) -> Result<Option<Lemma6Counterexample>> {
    if k < 2 || l < 2 || u_cap < k {
        return Err(Error::InvalidArgument(format!(
            "need k >= 2, l >= 2, u_cap >= k; got k={k}, l={l}, u_cap={u_cap}"
        )));
    }
    let degrees: Vec<usize> = (0..l).map(|i| i * k + 1).collect();
    let mut visited = 0;
    for (i0, &d0) in degrees.iter().enumerate() {
        for u0 in 1..=k {
            let target = u0 * d0;
            let larger: Vec<usize> = degrees[i0 + 1..]
                .iter()
                .copied()
                .filter(|&d| d <= target)
                .collect();
            let mut search = Lemma6Search {
                larger: &larger,
                d0,
                u_cap,
                visited,
                budget,
                chosen: Vec::new(),
            };
            let found = search.run(0, target)?;
            visited = search.visited;
            if let Some((v0, terms)) = found {
                return Ok(Some(Lemma6Counterexample { d0, u0, v0, terms }));
            }
        }
    }
    Ok(None)
}

/// Product of the family members selected by `sel`; the empty product is 1.
pub fn product_for_vector(spec: &ExtensionSpec, sel: &SelectionVector) -> Result<ExtElement> {
    if sel.k() != spec.k() || sel.l() != spec.l() {
        return Err(Error::LengthMismatch {
            expected: spec.k() * spec.l(),
            got: sel.len(),
        });
    }
    let family = binomial_family(spec);
    Ok(sel.ones().map(|(i, j)| &family[i * spec.k() + j]).fold(
        ExtElement::one(spec.ring()),
        |acc, binom| {
            acc.mul_binomial(
                binom.coefficient.value(),
                binom.degree,
                binom.constant.value(),
            )
        },
    ))
}

/// Result of enumerating all products over `S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinctCount {
    /// `|S|` from the counting recursion.
    pub s_count: BigUint,
    /// Number of distinct products.
    pub distinct: BigUint,
}

impl DistinctCount {
    /// Every member of `S` gave a different product.
    pub fn all_distinct(&self) -> bool {
        self.s_count == self.distinct
    }
}

struct ProductWalk<'a> {
    ring: &'a Arc<BinomialRing>,
    family: &'a [ConjugateBinomial],
    weights: Vec<usize>,
    bound: usize,
}

struct Frontier {
    pos: usize,
    sum: usize,
    product: ExtElement,
}

impl ProductWalk<'_> {
    fn step(&self, pos: usize, product: &ExtElement) -> ExtElement {
        let binom = &self.family[pos];
        product.mul_binomial(
            binom.coefficient.value(),
            binom.degree,
            binom.constant.value(),
        )
    }

    /// Depth-first over members of `S` extending the prefix up to `pos`.
    /// Weights are non-decreasing, so once the next weight overflows every
    /// remaining entry is zero.
    fn walk(&self, pos: usize, sum: usize, product: &ExtElement, out: &mut HashSet<Box<[u8]>>) {
        if pos == self.weights.len() || sum + self.weights[pos] >= self.bound {
            out.insert(product.canonical_bytes().into_boxed_slice());
            return;
        }
        self.walk(pos + 1, sum, product, out);
        let next = self.step(pos, product);
        self.walk(pos + 1, sum + self.weights[pos], &next, out);
    }

    /// Prefix states at depth `depth`, or shallower leaves, to fan out over.
    fn frontier(&self, depth: usize) -> Vec<Frontier> {
        let mut out = Vec::new();
        let mut stack = vec![Frontier {
            pos: 0,
            sum: 0,
            product: ExtElement::one(self.ring),
        }];
        while let Some(node) = stack.pop() {
            let leaf =
                node.pos == self.weights.len() || node.sum + self.weights[node.pos] >= self.bound;
            if leaf || node.pos == depth {
                out.push(node);
                continue;
            }
            stack.push(Frontier {
                pos: node.pos + 1,
                sum: node.sum + self.weights[node.pos],
                product: self.step(node.pos, &node.product),
            });
            stack.push(Frontier {
                pos: node.pos + 1,
                ..node
            });
        }
        out
    }
}

/// Enumerates every member of `S`, multiplies out its selected conjugates
/// and counts distinct products with exact byte keys.
///
/// Work is split over prefixes and run in parallel; the union of the partial
/// sets does not depend on the split.
pub fn theorem7_distinct_count(spec: &ExtensionSpec, budget: u64) -> Result<DistinctCount> {
    let (k, l, m) = (spec.k(), spec.l(), spec.m());
    let s_count = count_s_dp(k, l, &BigUint::from(m));
    if s_count > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            needed: s_count,
            budget,
        });
    }
    let family = binomial_family(spec);
    let walk = ProductWalk {
        ring: spec.ring(),
        family: &family,
        weights: family.iter().map(|b| b.degree).collect(),
        bound: m,
    };
    let roots = walk.frontier(12.min(k * l));
    let distinct = roots
        .into_par_iter()
        .fold(HashSet::new, |mut set, node| {
            walk.walk(node.pos, node.sum, &node.product, &mut set);
            set
        })
        .reduce(HashSet::new, |a, b| {
            let (mut big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
            big.extend(small);
            big
        })
        .len();
    Ok(DistinctCount {
        s_count,
        distinct: BigUint::from(distinct),
    })
}
