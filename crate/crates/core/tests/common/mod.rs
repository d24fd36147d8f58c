//! Shared generators and reference predicates for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use abelian_sb::classify::StabilityClass;
use abelian_sb::{Cardinal, Entry, ExponentSet, GroupSpec, Prime, PrimeSet, SummandFamily};
use proptest::prelude::*;
use rand::Rng;

pub const SMALL_PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

pub fn p(n: u64) -> Prime {
    Prime::new(n).unwrap()
}

fn small_prime<R: Rng>(rng: &mut R) -> Prime {
    p(SMALL_PRIMES[rng.random_range(0..SMALL_PRIMES.len())])
}

fn prime_subset<R: Rng>(rng: &mut R, max: usize) -> BTreeSet<Prime> {
    (0..rng.random_range(0..=max)).map(|_| small_prime(rng)).collect()
}

fn random_mult<R: Rng>(rng: &mut R) -> Cardinal {
    match rng.random_range(0..6) {
        0 => Cardinal::Aleph(0),
        1 => Cardinal::Aleph(1),
        n => Cardinal::Finite(n as u64 - 1),
    }
}

fn random_family<R: Rng>(rng: &mut R) -> SummandFamily {
    match rng.random_range(0..9) {
        0..=2 => SummandFamily::Cyclic {
            p: small_prime(rng),
            k: rng.random_range(1..=4),
        },
        3 => SummandFamily::Prufer { p: small_prime(rng) },
        4 => SummandFamily::Rationals,
        5 => SummandFamily::PAdicComplete { p: small_prime(rng) },
        6 => SummandFamily::CyclicPrimeFamily {
            primes: if rng.random_bool(0.5) {
                PrimeSet::Cofinite(prime_subset(rng, 2))
            } else {
                PrimeSet::Explicit(prime_subset(rng, 3))
            },
            k: rng.random_range(1..=3),
        },
        7 => SummandFamily::PAdicPrimeFamily {
            primes: if rng.random_bool(0.5) {
                PrimeSet::Cofinite(prime_subset(rng, 2))
            } else {
                PrimeSet::Explicit(prime_subset(rng, 3))
            },
        },
        _ => {
            let ks: BTreeSet<u32> = (0..rng.random_range(0..3)).map(|_| rng.random_range(1..=4)).collect();
            SummandFamily::CyclicExponentFamily {
                p: small_prime(rng),
                exponents: if rng.random_bool(0.5) {
                    ExponentSet::Cofinite(ks)
                } else {
                    ExponentSet::Explicit(ks)
                },
            }
        }
    }
}

/// A spec with up to five random entries, normalized.
pub fn random_spec<R: Rng>(rng: &mut R) -> GroupSpec {
    let n = rng.random_range(0..=5);
    GroupSpec::normalize((0..n).map(|_| Entry::new(random_family(rng), random_mult(rng))))
}

/// A finite spec of order at most `bound`.
pub fn random_finite_spec<R: Rng>(rng: &mut R, bound: u64) -> GroupSpec {
    let mut entries = Vec::new();
    let mut order = 1u64;
    for _ in 0..rng.random_range(0..=4) {
        let q = small_prime(rng);
        let k = rng.random_range(1..=3);
        let size = q.get().pow(k);
        if order * size <= bound {
            order *= size;
            entries.push(Entry::new(SummandFamily::Cyclic { p: q, k }, 1u64));
        }
    }
    GroupSpec::normalize(entries)
}

pub fn arb_spec() -> impl Strategy<Value = GroupSpec> {
    any::<u64>().prop_map(|seed| {
        use rand::SeedableRng;
        random_spec(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed))
    })
}

pub fn arb_finite_spec(bound: u64) -> impl Strategy<Value = GroupSpec> {
    any::<u64>().prop_map(move |seed| {
        use rand::SeedableRng;
        random_finite_spec(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed), bound)
    })
}

/// Stability class straight from the entry list, without the library.
pub fn reference_stability(spec: &GroupSpec) -> StabilityClass {
    let mut not_superstable = false;
    let mut omega = true;
    for e in spec.entries() {
        if e.mult == Cardinal::ZERO {
            continue;
        }
        match &e.family {
            SummandFamily::Cyclic { .. } | SummandFamily::Prufer { .. } | SummandFamily::Rationals => {}
            SummandFamily::PAdicComplete { .. } => {
                omega = false;
                not_superstable |= e.mult.is_infinite();
            }
            SummandFamily::CyclicPrimeFamily { primes, .. } | SummandFamily::PAdicPrimeFamily { primes } => {
                omega = false;
                // Normal forms keep only cofinite families, but read the set anyway.
                not_superstable |= e.mult.is_infinite()
                    && (primes.is_infinite() || matches!(e.family, SummandFamily::PAdicPrimeFamily { .. }));
            }
            SummandFamily::CyclicExponentFamily { exponents, .. } => {
                omega = false;
                not_superstable |= exponents.is_infinite();
            }
        }
    }
    if not_superstable {
        StabilityClass::NotSuperstable
    } else if omega {
        StabilityClass::OmegaStable
    } else {
        StabilityClass::SuperstableNotOmegaStable
    }
}

/// Divisible plus bounded torsion: every entry is `Q`, `Prufer` or a cyclic
/// group of fixed order.
pub fn reference_condition3(spec: &GroupSpec) -> bool {
    spec.entries().iter().all(|e| {
        matches!(
            e.family,
            SummandFamily::Rationals | SummandFamily::Prufer { .. } | SummandFamily::Cyclic { .. }
        )
    })
}
