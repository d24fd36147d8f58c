use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0} is not prime")]
pub struct NotPrime(pub u64);

/// A rational prime, checked on construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(value: u64) -> Result<Prime, NotPrime> {
        if arith::is_prime(value) {
            Ok(Prime(value))
        } else {
            Err(NotPrime(value))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// The `n`-th prime, zero-based.
    pub fn nth(n: usize) -> Prime {
        Prime(arith::primes().nth(n).expect("primes are infinite"))
    }
}

impl TryFrom<u64> for Prime {
    type Error = NotPrime;

    fn try_from(value: u64) -> Result<Self, Self::Error> {
        Prime::new(value)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of primes that is either finite or cofinite.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeSet {
    Explicit(BTreeSet<Prime>),
    Cofinite(BTreeSet<Prime>),
}

impl PrimeSet {
    pub fn all() -> PrimeSet {
        PrimeSet::Cofinite(BTreeSet::new())
    }

    pub fn all_except<I: IntoIterator<Item = Prime>>(excluded: I) -> PrimeSet {
        PrimeSet::Cofinite(excluded.into_iter().collect())
    }

    pub fn contains(&self, p: Prime) -> bool {
        match self {
            PrimeSet::Explicit(s) => s.contains(&p),
            PrimeSet::Cofinite(ex) => !ex.contains(&p),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, PrimeSet::Cofinite(_))
    }

    /// Members in ascending order (infinite for cofinite sets).
    pub fn iter(&self) -> Box<dyn Iterator<Item = Prime> + '_> {
        match self {
            PrimeSet::Explicit(s) => Box::new(s.iter().copied()),
            PrimeSet::Cofinite(ex) => Box::new(
                arith::primes()
                    .map(Prime)
                    .filter(move |p| !ex.contains(p)),
            ),
        }
    }

    /// The first `n` members (fewer if the set is finite and small).
    pub fn first(&self, n: usize) -> Vec<Prime> {
        self.iter().take(n).collect()
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &BTreeSet<Prime>| {
            s.iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            PrimeSet::Explicit(s) => write!(f, "{{{}}}", join(s)),
            PrimeSet::Cofinite(ex) if ex.is_empty() => write!(f, "all"),
            PrimeSet::Cofinite(ex) => write!(f, "all\\{{{}}}", join(ex)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_checks_primality() {
        assert!(Prime::new(7).is_ok());
        assert_eq!(Prime::new(4), Err(NotPrime(4)));
        assert_eq!(Prime::new(1), Err(NotPrime(1)));
        assert_eq!(Prime::nth(0).get(), 2);
        assert_eq!(Prime::nth(4).get(), 11);
    }

    #[test]
    fn cofinite_membership_and_listing() {
        let odd = PrimeSet::all_except([Prime::new(2).unwrap()]);
        assert!(!odd.contains(Prime::new(2).unwrap()));
        assert!(odd.contains(Prime::new(101).unwrap()));
        let firsts: Vec<u64> = odd.first(4).into_iter().map(Prime::get).collect();
        assert_eq!(firsts, vec![3, 5, 7, 11]);
        assert_eq!(odd.to_string(), "all\\{2}");
    }

    #[test]
    fn serde_rejects_composites() {
        assert!(serde_json::from_str::<Prime>("6").is_err());
        assert_eq!(serde_json::from_str::<Prime>("5").unwrap().get(), 5);
    }
}
