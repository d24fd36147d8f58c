//! Elementary-equivalence and isomorphism invariants of specs.
//!
//! For a prime `p` the three dimension invariants are
//!
//! * `α(p,k) = dim (p^{k-1}G)[p] / (p^k G)[p]`, the number of `ℤ/p^k` summands;
//! * `β(p) = lim_n dim p^n G / p^{n+1} G`;
//! * `γ(p) = lim_n dim (p^n G)[p]`;
//!
//! all capped at `ℵ₀`. Together with boundedness (and the exponent when
//! bounded) they decide elementary equivalence.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::cardinal::Cardinal;
use crate::group_spec::{Entry, GroupSpec, SummandFamily};
use crate::prime::Prime;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SzInvariants {
    /// Cyclic entries with capped multiplicities; `α(p,k)` is the multiplicity
    /// of `ℤ/p^k` in this spec.
    pub alpha: GroupSpec,
    /// `β` as a spec of p-adic entries.
    pub beta: GroupSpec,
    /// `γ` as a spec of Prüfer entries.
    pub gamma: GroupSpec,
    pub bounded: bool,
    #[serde(with = "crate::decimal::biguint_opt")]
    pub exponent: Option<BigUint>,
    pub nontrivial: bool,
}

impl SzInvariants {
    pub fn alpha(&self, p: Prime, k: u32) -> Cardinal {
        self.alpha.cyclic_multiplicity(p, k)
    }

    pub fn beta(&self, p: Prime) -> Cardinal {
        self.beta.padic_multiplicity(p)
    }

    pub fn gamma(&self, p: Prime) -> Cardinal {
        self.gamma.prufer_multiplicity(p)
    }
}

pub fn sz_invariants(spec: &GroupSpec) -> SzInvariants {
    let cap = |c: Cardinal| c.cap_aleph0();
    let alpha = spec
        .filter(SummandFamily::is_cyclic_like)
        .map_multiplicities(cap);

    // Unbounded exponents at a fixed prime push both limits to ℵ₀.
    let unbounded_at: Vec<Prime> = spec
        .entries()
        .iter()
        .filter_map(|e| match &e.family {
            SummandFamily::CyclicExponentFamily { p, exponents } if exponents.is_infinite() => {
                Some(*p)
            }
            _ => None,
        })
        .collect();
    let limit_entries = |mk: fn(Prime) -> SummandFamily| {
        unbounded_at
            .iter()
            .map(move |&p| Entry::new(mk(p), Cardinal::ALEPH_0))
    };
    let beta = GroupSpec::normalize(
        spec.filter(SummandFamily::is_padic)
            .entries()
            .iter()
            .cloned()
            .chain(limit_entries(|p| SummandFamily::PAdicComplete { p })),
    )
    .map_multiplicities(cap);
    let gamma = GroupSpec::normalize(
        spec.filter(|f| matches!(f, SummandFamily::Prufer { .. }))
            .entries()
            .iter()
            .cloned()
            .chain(limit_entries(|p| SummandFamily::Prufer { p })),
    )
    .map_multiplicities(cap);

    let bounded = spec
        .entries()
        .iter()
        .all(|e| matches!(e.family, SummandFamily::Cyclic { .. }));
    let exponent = bounded.then(|| exponent_of_cyclics(spec));
    SzInvariants {
        alpha,
        beta,
        gamma,
        bounded,
        exponent,
        nontrivial: !spec.is_trivial(),
    }
}

/// `∏ p^{max k}` over the cyclic singleton entries.
fn exponent_of_cyclics(spec: &GroupSpec) -> BigUint {
    let mut top: BTreeMap<Prime, u32> = BTreeMap::new();
    for e in spec.entries() {
        if let SummandFamily::Cyclic { p, k } = e.family {
            let slot = top.entry(p).or_default();
            *slot = (*slot).max(k);
        }
    }
    top.into_iter()
        .fold(BigUint::one(), |acc, (p, k)| acc * arith::big_pow(p.get(), k))
}

pub fn elem_equivalent(a: &GroupSpec, b: &GroupSpec) -> bool {
    sz_invariants(a) == sz_invariants(b)
}

/// Equality of normal forms. Divisible parts are classified by their Prüfer
/// and rational ranks, cyclic parts by Ulm invariants, and p-adic parts by
/// `dim K/pK`; the normal form lists exactly these cardinals.
pub fn iso_standard(a: &GroupSpec, b: &GroupSpec) -> bool {
    a == b
}

/// Number of `ℤ/p^{i+1}` summands.
pub fn ulm_symbolic(spec: &GroupSpec, p: Prime, i: u32) -> Cardinal {
    spec.cyclic_multiplicity(p, i + 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UlmEntry {
    pub p: Prime,
    pub i: u32,
    pub value: Cardinal,
}

/// Ulm invariants listed at every explicit cyclic entry, plus the families
/// that contribute at infinitely many `(p, i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UlmTable {
    pub entries: Vec<UlmEntry>,
    pub families: Vec<Entry>,
}

pub fn ulm_table(spec: &GroupSpec) -> UlmTable {
    let mut entries = Vec::new();
    let mut families = Vec::new();
    for e in spec.entries() {
        match &e.family {
            SummandFamily::Cyclic { p, k } => entries.push(UlmEntry {
                p: *p,
                i: k - 1,
                value: ulm_symbolic(spec, *p, k - 1),
            }),
            f if f.is_cyclic_like() => families.push(e.clone()),
            _ => {}
        }
    }
    UlmTable { entries, families }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibleInvariants {
    pub prufer_count: BTreeMap<Prime, Cardinal>,
    pub rational_rank: Cardinal,
}

pub fn divisible_invariants(spec: &GroupSpec) -> DivisibleInvariants {
    let prufer_count = spec
        .entries()
        .iter()
        .filter_map(|e| match e.family {
            SummandFamily::Prufer { p } => Some((p, e.mult)),
            _ => None,
        })
        .collect();
    DivisibleInvariants {
        prufer_count,
        rational_rank: spec.rational_rank(),
    }
}

/// Primes at which `spec` has a nonzero p-adic summand, listing at most
/// `limit` of them for a family.
pub fn padic_primes(spec: &GroupSpec, limit: usize) -> Vec<Prime> {
    let mut out: Vec<Prime> = Vec::new();
    for e in spec.entries() {
        match &e.family {
            SummandFamily::PAdicComplete { p } => out.push(*p),
            SummandFamily::PAdicPrimeFamily { primes } => out.extend(primes.first(limit)),
            _ => {}
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> GroupSpec {
        GroupSpec::parse(s).unwrap()
    }

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn ulm_symbolic_examples() {
        let g = spec("Z/2 + Z/8^2");
        assert_eq!(ulm_symbolic(&g, p(2), 2), Cardinal::Finite(2));
        assert_eq!(ulm_symbolic(&g, p(2), 0), Cardinal::ONE);
        assert_eq!(ulm_symbolic(&spec("Q^aleph(1)"), p(3), 0), Cardinal::ZERO);
        assert_eq!(ulm_symbolic(&spec("sumK(3; all)^2"), p(3), 40), Cardinal::Finite(2));
    }

    #[test]
    fn divisible_examples() {
        let d = divisible_invariants(&spec("Prufer(2)^w + Q^3"));
        assert_eq!(d.prufer_count[&p(2)], Cardinal::ALEPH_0);
        assert_eq!(d.rational_rank, Cardinal::Finite(3));
        let d = divisible_invariants(&spec("Z/2 + Prufer(2)"));
        assert_eq!(d.prufer_count[&p(2)], Cardinal::ONE);
        assert_eq!(d.rational_rank, Cardinal::ZERO);
        let d = divisible_invariants(&GroupSpec::trivial());
        assert!(d.prufer_count.is_empty());
    }

    #[test]
    fn per_summand_values() {
        let z = sz_invariants(&spec("Zhat(2)"));
        assert_eq!(z.beta(p(2)), Cardinal::ONE);
        assert_eq!(z.beta(p(3)), Cardinal::ZERO);
        assert!(z.alpha.is_trivial() && z.gamma.is_trivial() && !z.bounded);

        let c = sz_invariants(&spec("Z/4^w"));
        assert_eq!(c.alpha(p(2), 2), Cardinal::ALEPH_0);
        assert!(c.bounded);
        assert_eq!(c.exponent, Some(BigUint::from(4u32)));
        assert!(c.beta.is_trivial() && c.gamma.is_trivial());

        let r = sz_invariants(&spec("Prufer(3)"));
        assert_eq!(r.gamma(p(3)), Cardinal::ONE);
        assert!(!r.bounded);
    }

    #[test]
    fn unbounded_exponents_saturate_limits() {
        let g = sz_invariants(&spec("sumK(2; all)"));
        assert_eq!(g.beta(p(2)), Cardinal::ALEPH_0);
        assert_eq!(g.gamma(p(2)), Cardinal::ALEPH_0);
        assert!(elem_equivalent(&spec("sumK(2; all)"), &spec("sumK(2; all) + Prufer(2)")));
        assert!(elem_equivalent(&spec("sumK(2; all)"), &spec("sumK(2; all) + Zhat(2)^3")));
        assert!(!elem_equivalent(&spec("sumK(2; all)"), &spec("sumK(2; all) + Prufer(3)")));
    }

    #[test]
    fn equivalence_examples() {
        assert!(!elem_equivalent(&spec("Z/4"), &spec("Z/2^2")));
        assert!(!elem_equivalent(&spec("Zhat(2)"), &spec("Zhat(2)^2")));
        assert!(elem_equivalent(&spec("Q"), &spec("Q^w")));
        assert!(!elem_equivalent(&spec("Q"), &GroupSpec::trivial()));
        assert!(elem_equivalent(&spec("Prufer(2)^w"), &spec("Prufer(2)^aleph(1)")));
        assert!(elem_equivalent(&spec("Zhat(2) + Q"), &spec("Zhat(2)")));
    }

    #[test]
    fn isomorphism_examples() {
        assert!(iso_standard(&spec("Prufer(2)^w + Q"), &spec("Q + Prufer(2)^w")));
        assert!(!iso_standard(&spec("Prufer(2)^w"), &spec("Prufer(2)^aleph(1)")));
        assert!(!iso_standard(&spec("Zhat(2)^2"), &spec("Zhat(2)^3")));
    }

    #[test]
    fn ulm_table_lists_entries() {
        let t = ulm_table(&spec("Z/2 + Z/8^2 + sumP(all\\{2}; Z/p^1) + Q"));
        // Z/2 is absorbed into the prime family.
        assert_eq!(t.entries.len(), 1);
        assert_eq!(t.families.len(), 1);
        assert_eq!(t.entries[0].value, Cardinal::Finite(2));
        let t = ulm_table(&spec("Z/2^2 + Z/8^2 + sumP(all; Z/p^1) + Q"));
        assert_eq!(t.entries.len(), 2);
    }

    #[test]
    fn json_shape() {
        let inv = sz_invariants(&spec("Z/8^3"));
        let v = serde_json::to_value(&inv).unwrap();
        assert_eq!(v["exponent"], "8");
        let back: SzInvariants = serde_json::from_value(v).unwrap();
        assert_eq!(back, inv);
    }
}
