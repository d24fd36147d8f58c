//! Stability class, Schröder–Bernstein verdict and `G°` data of a spec.
//!
//! The four equivalent conditions are:
//!
//! 1. the theory has the SB property;
//! 2. the theory is ω-stable;
//! 3. every model is a divisible group plus a torsion group of bounded exponent;
//! 4. the theory is superstable and automorphisms of `G/G°` in a saturated
//!    model are unipotent.
//!
//! Each is coded from its own reading of the normal form, so agreement
//! between them is a real check.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::cardinal::Cardinal;
use crate::group_spec::{GroupSpec, SummandFamily};
use crate::invariants;
use crate::prime::{Prime, PrimeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StabilityClass {
    OmegaStable,
    SuperstableNotOmegaStable,
    NotSuperstable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SbRoute {
    None,
    ExternalNonSuperstable,
    PAdicWitness,
    SocleWitness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SbVerdict {
    pub has_sb: bool,
    pub route: SbRoute,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasicPredicates {
    pub divisible: bool,
    pub reduced: bool,
    #[serde(with = "crate::decimal::biguint_opt")]
    pub bounded: Option<BigUint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GZeroIndex {
    Finite(#[serde(with = "crate::decimal::biguint")] BigUint),
    Continuum,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum UnipotenceWitness {
    /// Multiplication by a non-algebraic unit on a `\hat ℤ_(p)` factor.
    PAdicScalar { p: Prime },
    /// Scalars of multiplicative order `p − 1` on each `ℤ/p^k` of a prime
    /// family; their orders are unbounded.
    PerPrimeScalars {
        primes: PrimeSet,
        k: u32,
        /// Checked bound: every `n ≤ order_escape_n` has a family prime among
        /// the first `order_escape_primes` with `(p − 1) ∤ n`.
        order_escape_n: u64,
        order_escape_primes: usize,
        order_escape_holds: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GZeroReport {
    pub index: GZeroIndex,
    pub unipotent_all: bool,
    pub witness: Option<UnipotenceWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("the theory is not superstable, so the unipotence condition does not apply")]
    NotApplicable,
}

pub fn basic_predicates(spec: &GroupSpec) -> BasicPredicates {
    let entries = spec.entries();
    BasicPredicates {
        divisible: entries.iter().all(|e| e.family.is_divisible()),
        reduced: !entries.iter().any(|e| e.family.is_divisible()),
        bounded: invariants::sz_invariants(spec).exponent,
    }
}

/// Reasons the theory fails superstability, if any.
fn superstability_obstruction(spec: &GroupSpec) -> Option<String> {
    for e in spec.entries() {
        match &e.family {
            SummandFamily::CyclicExponentFamily { p, exponents } if exponents.is_infinite() => {
                return Some(format!(
                    "Z/{p}^k occurs for infinitely many k, so each p^(k+1)G has infinite index in p^kG"
                ));
            }
            SummandFamily::CyclicPrimeFamily { primes, .. }
            | SummandFamily::PAdicPrimeFamily { primes }
                if primes.is_infinite() && e.mult.is_infinite() =>
            {
                return Some(
                    "infinitely many primes carry a reduced summand of infinite multiplicity, \
                     giving a descending chain p1G ⊇ p1p2G ⊇ ... of infinite indices"
                        .to_string(),
                );
            }
            SummandFamily::PAdicComplete { p } if e.mult.is_infinite() => {
                return Some(format!(
                    "Zhat({p}) has infinite multiplicity, so each p^(k+1)G has infinite index in p^kG"
                ));
            }
            _ => {}
        }
    }
    None
}

/// True when the normal form uses only finite cyclics, Prüfer groups and `ℚ`.
pub fn is_form_star(spec: &GroupSpec) -> bool {
    spec.entries().iter().all(|e| {
        matches!(
            e.family,
            SummandFamily::Cyclic { .. } | SummandFamily::Prufer { .. } | SummandFamily::Rationals
        )
    })
}

pub fn stability_class(spec: &GroupSpec) -> StabilityClass {
    if superstability_obstruction(spec).is_some() {
        StabilityClass::NotSuperstable
    } else if is_form_star(spec) {
        StabilityClass::OmegaStable
    } else {
        StabilityClass::SuperstableNotOmegaStable
    }
}

/// Condition 3: no p-adic part and a cyclic part of bounded exponent.
pub fn condition3(spec: &GroupSpec) -> bool {
    let split = spec.split_reduced_divisible();
    split.k.is_trivial()
        && split
            .c
            .entries()
            .iter()
            .all(|e| !e.family.is_infinite_family())
}

pub fn has_sb(spec: &GroupSpec) -> SbVerdict {
    let class = stability_class(spec);
    if class == StabilityClass::NotSuperstable {
        let why = superstability_obstruction(spec).expect("obstruction present");
        return SbVerdict {
            has_sb: false,
            route: SbRoute::ExternalNonSuperstable,
            reason: format!(
                "not superstable ({why}); non-superstable theories lack the SB property"
            ),
        };
    }
    if class == StabilityClass::OmegaStable {
        return SbVerdict {
            has_sb: true,
            route: SbRoute::None,
            reason: "every model is a divisible group plus a torsion group of bounded exponent, \
                     hence a sum of indecomposable pure-injectives"
                .to_string(),
        };
    }
    let padic = spec.entries().iter().any(|e| e.family.is_padic());
    if padic {
        return SbVerdict {
            has_sb: false,
            route: SbRoute::PAdicWitness,
            reason: "a p-adic summand yields bi-embeddable non-isomorphic pure subgroups of Zhat(p)^k"
                .to_string(),
        };
    }
    SbVerdict {
        has_sb: false,
        route: SbRoute::SocleWitness,
        reason: "cyclic summands of unbounded order over infinitely many primes yield a \
                 bi-embeddable non-isomorphic pair inside a product of Z/p"
            .to_string(),
    }
}

/// `[G : G°]`, with `G°` the intersection of the finite-index subgroups `nG`.
///
/// For a normal form of shape (*), `nG` has finite index exactly when no
/// prime dividing `n` carries a cyclic summand of infinite multiplicity, and
/// `[G : nG] = ∏ p^{min(v_p(n), k)·m}`; the intersection is reached at
/// `n = ∏ p^{max k}` over the remaining primes.
pub fn g_zero_index(spec: &GroupSpec) -> GZeroIndex {
    if !is_form_star(spec) {
        return GZeroIndex::Continuum;
    }
    let mut index = BigUint::one();
    let mut infinite_at: Vec<Prime> = Vec::new();
    for e in spec.entries() {
        if let SummandFamily::Cyclic { p, .. } = e.family {
            if e.mult.is_infinite() {
                infinite_at.push(p);
            }
        }
    }
    for e in spec.entries() {
        if let SummandFamily::Cyclic { p, k } = e.family {
            if let (false, Cardinal::Finite(m)) = (infinite_at.contains(&p), e.mult) {
                let e = u32::try_from(k as u64 * m).expect("exponent fits");
                index *= arith::big_pow(p.get(), e);
            }
        }
    }
    GZeroIndex::Finite(index)
}

const ORDER_ESCAPE_N: u64 = 1000;
const ORDER_ESCAPE_PRIMES: usize = 1000;

/// For each `n ≤ n_max`, some listed prime has `(p − 1) ∤ n`.
pub fn order_escape_holds(primes: &[Prime], n_max: u64) -> bool {
    (1..=n_max).all(|n| primes.iter().any(|p| n % (p.get() - 1) != 0))
}

pub fn unipotence_report(spec: &GroupSpec) -> Result<GZeroReport, ClassifyError> {
    let class = stability_class(spec);
    if class == StabilityClass::NotSuperstable {
        return Err(ClassifyError::NotApplicable);
    }
    let index = g_zero_index(spec);
    if class == StabilityClass::OmegaStable {
        return Ok(GZeroReport {
            index,
            unipotent_all: true,
            witness: None,
        });
    }
    let padic = invariants::padic_primes(spec, 1);
    let witness = if let Some(&p) = padic.first() {
        UnipotenceWitness::PAdicScalar { p }
    } else {
        let (primes, k) = spec
            .entries()
            .iter()
            .find_map(|e| match &e.family {
                SummandFamily::CyclicPrimeFamily { primes, k } => Some((primes.clone(), *k)),
                _ => None,
            })
            .expect("superstable, not of shape (*), no p-adic part: a prime family exists");
        let window = primes.first(ORDER_ESCAPE_PRIMES);
        UnipotenceWitness::PerPrimeScalars {
            order_escape_holds: order_escape_holds(&window, ORDER_ESCAPE_N),
            primes,
            k,
            order_escape_n: ORDER_ESCAPE_N,
            order_escape_primes: ORDER_ESCAPE_PRIMES,
        }
    };
    Ok(GZeroReport {
        index,
        unipotent_all: false,
        witness: Some(witness),
    })
}

/// All four conditions side by side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub stability: StabilityClass,
    pub omega_stable: bool,
    pub superstable: bool,
    pub sb: bool,
    pub condition3: bool,
    /// `None` when the theory is not superstable.
    pub unipotent_all: Option<bool>,
    pub condition4: bool,
    pub route: SbRoute,
    pub reason: String,
    pub g_zero_index: GZeroIndex,
    pub predicates: BasicPredicates,
    pub conditions_agree: bool,
}

pub fn classify(spec: &GroupSpec) -> Classification {
    let stability = stability_class(spec);
    let verdict = has_sb(spec);
    let omega_stable = stability == StabilityClass::OmegaStable;
    let superstable = stability != StabilityClass::NotSuperstable;
    let c3 = condition3(spec);
    let unipotent_all = unipotence_report(spec).ok().map(|r| r.unipotent_all);
    let condition4 = superstable && unipotent_all == Some(true);
    let conditions_agree = verdict.has_sb == is_form_star(spec) && verdict.has_sb == c3
        && verdict.has_sb == condition4
        && verdict.has_sb == omega_stable;
    Classification {
        stability,
        omega_stable,
        superstable,
        sb: verdict.has_sb,
        condition3: c3,
        unipotent_all,
        condition4,
        route: verdict.route,
        reason: verdict.reason,
        g_zero_index: g_zero_index(spec),
        predicates: basic_predicates(spec),
        conditions_agree,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> GroupSpec {
        GroupSpec::parse(s).unwrap()
    }

    #[test]
    fn predicate_examples() {
        let b = basic_predicates(&spec("Q + Prufer(5)^2"));
        assert!(b.divisible && !b.reduced && b.bounded.is_none());
        let b = basic_predicates(&spec("Z/2^aleph(1)"));
        assert!(b.reduced && !b.divisible);
        assert_eq!(b.bounded, Some(BigUint::from(2u32)));
        let b = basic_predicates(&spec("Zhat(3)"));
        assert!(b.reduced && b.bounded.is_none());
    }

    #[test]
    fn stability_examples() {
        assert_eq!(stability_class(&spec("sumK(2; all)")), StabilityClass::NotSuperstable);
        assert_eq!(
            stability_class(&spec("sumP(all; Z/p^1)")),
            StabilityClass::SuperstableNotOmegaStable
        );
        assert_eq!(stability_class(&spec("Z/2^w + Q")), StabilityClass::OmegaStable);
        assert_eq!(
            stability_class(&spec("sumP(all; Z/p^1)^w")),
            StabilityClass::NotSuperstable
        );
        assert_eq!(
            stability_class(&spec("sumP(all; Zhat)^w")),
            StabilityClass::NotSuperstable
        );
        assert_eq!(stability_class(&spec("Zhat(2)^w")), StabilityClass::NotSuperstable);
        assert_eq!(
            stability_class(&spec("Zhat(2)^3 + sumP(all; Zhat)")),
            StabilityClass::SuperstableNotOmegaStable
        );
    }

    #[test]
    fn sb_examples() {
        let v = has_sb(&spec("Zhat(5)"));
        assert!(!v.has_sb);
        assert_eq!(v.route, SbRoute::PAdicWitness);
        let v = has_sb(&spec("sumP(all\\{2}; Z/p^1)"));
        assert!(!v.has_sb);
        assert_eq!(v.route, SbRoute::SocleWitness);
        let v = has_sb(&spec("Z/2^w + Prufer(3)^w"));
        assert!(v.has_sb);
        assert_eq!(v.route, SbRoute::None);
        assert_eq!(
            has_sb(&spec("sumK(2; all)")).route,
            SbRoute::ExternalNonSuperstable
        );
    }

    #[test]
    fn g_zero_examples() {
        assert_eq!(
            g_zero_index(&spec("Z/2^3 + Q")),
            GZeroIndex::Finite(BigUint::from(8u32))
        );
        assert_eq!(g_zero_index(&spec("Zhat(2)")), GZeroIndex::Continuum);
        assert_eq!(g_zero_index(&spec("Q^5")), GZeroIndex::Finite(BigUint::one()));
        assert_eq!(
            g_zero_index(&spec("Z/2 + Z/4^w")),
            GZeroIndex::Finite(BigUint::one())
        );
        assert_eq!(
            g_zero_index(&spec("Z/2 + Z/4^w + Z/9^2")),
            GZeroIndex::Finite(BigUint::from(81u32))
        );
    }

    #[test]
    fn unipotence_examples() {
        let r = unipotence_report(&spec("Zhat(2) + Q")).unwrap();
        assert!(!r.unipotent_all);
        assert_eq!(
            r.witness,
            Some(UnipotenceWitness::PAdicScalar {
                p: Prime::new(2).unwrap()
            })
        );
        let r = unipotence_report(&spec("sumP(all; Z/p^1)")).unwrap();
        assert!(!r.unipotent_all);
        match r.witness {
            Some(UnipotenceWitness::PerPrimeScalars {
                order_escape_holds, ..
            }) => assert!(order_escape_holds),
            other => panic!("{other:?}"),
        }
        let r = unipotence_report(&spec("Z/3^w")).unwrap();
        assert!(r.unipotent_all && r.witness.is_none());
        assert_eq!(
            unipotence_report(&spec("sumK(3; all)")),
            Err(ClassifyError::NotApplicable)
        );
    }

    #[test]
    fn order_escape_fails_on_tiny_window() {
        let tiny: Vec<Prime> = [2, 3].iter().map(|&p| Prime::new(p).unwrap()).collect();
        assert!(!order_escape_holds(&tiny, 2));
    }

    #[test]
    fn classification_agrees() {
        for s in [
            "Zhat(5)",
            "sumP(all\\{2}; Z/p^1)",
            "Z/2^w + Prufer(3)^w + Q",
            "sumK(2; all)",
            "0",
            "Q",
            "sumP(all; Zhat)",
        ] {
            assert!(classify(&spec(s)).conditions_agree, "{s}");
        }
        let c = classify(&spec("Zhat(5)"));
        assert!(!c.omega_stable && c.superstable && !c.sb && !c.condition3);
        assert_eq!(c.route, SbRoute::PAdicWitness);
    }
}
