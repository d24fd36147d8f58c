//! Symbolic direct-sum presentations of abelian groups.
//!
//! A [`GroupSpec`] is a finite list of summand families, each with a cardinal
//! multiplicity. Every constructor funnels through [`GroupSpec::normalize`],
//! so two specs denote isomorphic groups exactly when their entry lists are
//! equal.

mod parse;
mod render;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::cardinal::Cardinal;
use crate::prime::{Prime, PrimeSet};

pub use parse::{ParseError, ParseErrorKind};

/// Exponents `k ≥ 1` of a cyclic family `⊕_k ℤ/p^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentSet {
    Explicit(BTreeSet<u32>),
    /// All exponents `k ≥ 1` except the listed ones.
    Cofinite(BTreeSet<u32>),
}

impl ExponentSet {
    pub fn all() -> ExponentSet {
        ExponentSet::Cofinite(BTreeSet::new())
    }

    pub fn contains(&self, k: u32) -> bool {
        k >= 1
            && match self {
                ExponentSet::Explicit(s) => s.contains(&k),
                ExponentSet::Cofinite(ex) => !ex.contains(&k),
            }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExponentSet::Cofinite(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SummandFamily {
    /// `ℤ/p^kℤ`
    Cyclic { p: Prime, k: u32 },
    /// `ℤ_{p^∞}`
    Prufer { p: Prime },
    Rationals,
    /// The p-adic integers as an additive group.
    PAdicComplete { p: Prime },
    /// `⊕_{p ∈ primes} ℤ/p^kℤ`
    CyclicPrimeFamily { primes: PrimeSet, k: u32 },
    /// `⊕_{p ∈ primes} \hat ℤ_(p)`
    PAdicPrimeFamily { primes: PrimeSet },
    /// `⊕_{k ∈ exponents} ℤ/p^kℤ`
    CyclicExponentFamily { p: Prime, exponents: ExponentSet },
}

impl SummandFamily {
    pub fn cyclic(p: Prime, k: u32) -> SummandFamily {
        SummandFamily::Cyclic { p, k }
    }

    pub fn is_cyclic_like(&self) -> bool {
        matches!(
            self,
            SummandFamily::Cyclic { .. }
                | SummandFamily::CyclicPrimeFamily { .. }
                | SummandFamily::CyclicExponentFamily { .. }
        )
    }

    pub fn is_divisible(&self) -> bool {
        matches!(self, SummandFamily::Prufer { .. } | SummandFamily::Rationals)
    }

    pub fn is_padic(&self) -> bool {
        matches!(
            self,
            SummandFamily::PAdicComplete { .. } | SummandFamily::PAdicPrimeFamily { .. }
        )
    }

    /// True for the constructors that stand for infinitely many summand types.
    pub fn is_infinite_family(&self) -> bool {
        match self {
            SummandFamily::CyclicPrimeFamily { primes, .. }
            | SummandFamily::PAdicPrimeFamily { primes } => primes.is_infinite(),
            SummandFamily::CyclicExponentFamily { exponents, .. } => exponents.is_infinite(),
            _ => false,
        }
    }

    /// `(constructor rank, prime, exponent, prime-set fingerprint)`.
    fn sort_key(&self) -> (u8, u64, u32, Vec<u64>) {
        use SummandFamily::*;
        let fingerprint_p = |s: &PrimeSet| match s {
            PrimeSet::Explicit(v) => std::iter::once(0)
                .chain(v.iter().map(|p| p.get()))
                .collect(),
            PrimeSet::Cofinite(v) => std::iter::once(1)
                .chain(v.iter().map(|p| p.get()))
                .collect(),
        };
        let fingerprint_e = |s: &ExponentSet| match s {
            ExponentSet::Explicit(v) => std::iter::once(0)
                .chain(v.iter().map(|&k| k as u64))
                .collect(),
            ExponentSet::Cofinite(v) => std::iter::once(1)
                .chain(v.iter().map(|&k| k as u64))
                .collect(),
        };
        match self {
            Cyclic { p, k } => (0, p.get(), *k, vec![]),
            CyclicExponentFamily { p, exponents } => (1, p.get(), 0, fingerprint_e(exponents)),
            CyclicPrimeFamily { primes, k } => (2, 0, *k, fingerprint_p(primes)),
            Prufer { p } => (3, p.get(), 0, vec![]),
            PAdicComplete { p } => (4, p.get(), 0, vec![]),
            PAdicPrimeFamily { primes } => (5, 0, 0, fingerprint_p(primes)),
            Rationals => (6, 0, 0, vec![]),
        }
    }
}

impl Ord for SummandFamily {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for SummandFamily {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Entry {
    pub family: SummandFamily,
    pub mult: Cardinal,
}

impl Entry {
    pub fn new(family: SummandFamily, mult: impl Into<Cardinal>) -> Entry {
        Entry {
            family,
            mult: mult.into(),
        }
    }
}

/// A normalized direct-sum presentation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(from = "RawSpec", into = "RawSpec")]
pub struct GroupSpec {
    entries: Vec<Entry>,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    entries: Vec<Entry>,
}

impl From<RawSpec> for GroupSpec {
    fn from(raw: RawSpec) -> Self {
        GroupSpec::normalize(raw.entries)
    }
}

impl From<GroupSpec> for RawSpec {
    fn from(spec: GroupSpec) -> Self {
        RawSpec {
            entries: spec.entries,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("modulus {modulus} does not annihilate the {p}-primary summand Z/{p}^{k}")]
    PreconditionViolated { p: Prime, k: u32, modulus: u64 },
    #[error("modulus must be at least 1")]
    ZeroModulus,
}

/// Result of splitting `G = G[M] ⊕ MG`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MSplit {
    pub modulus: u64,
    /// The `M`-torsion coming from cyclic summands.
    pub cyclic_torsion: GroupSpec,
    /// The `M`-torsion of Prüfer summands at primes dividing `M`. Those Prüfer
    /// summands also stay in `complement`; this part is an overlap, not a summand.
    pub prufer_torsion: GroupSpec,
    pub complement: GroupSpec,
}

impl MSplit {
    /// `G[M]`, Prüfer torsion included.
    pub fn torsion_part(&self) -> GroupSpec {
        self.cyclic_torsion.direct_sum(&self.prufer_torsion)
    }

    pub fn has_prufer_overlap(&self) -> bool {
        !self.prufer_torsion.is_trivial()
    }
}

/// `G = K ⊕ C ⊕ D`: p-adic part, cyclic part, divisible part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KcdSplit {
    pub k: GroupSpec,
    pub c: GroupSpec,
    pub d: GroupSpec,
}

impl GroupSpec {
    pub fn trivial() -> GroupSpec {
        GroupSpec::default()
    }

    pub fn parse(text: &str) -> Result<GroupSpec, ParseError> {
        parse::parse(text)
    }

    /// Canonical form: CRT-free prime-power cyclics, finite families expanded,
    /// duplicates merged, families carved so that every explicitly listed
    /// multiplicity sits in a singleton entry, entries sorted.
    pub fn normalize<I: IntoIterator<Item = Entry>>(entries: I) -> GroupSpec {
        let mut acc = Accumulator::default();
        for e in entries {
            acc.add(e);
        }
        acc.finish()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn is_trivial(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn direct_sum(&self, other: &GroupSpec) -> GroupSpec {
        GroupSpec::normalize(self.entries.iter().chain(other.entries.iter()).cloned())
    }

    /// Apply `f` to every multiplicity and renormalize.
    pub fn map_multiplicities(&self, f: impl Fn(Cardinal) -> Cardinal) -> GroupSpec {
        GroupSpec::normalize(self.entries.iter().map(|e| Entry {
            family: e.family.clone(),
            mult: f(e.mult),
        }))
    }

    pub fn filter(&self, keep: impl Fn(&SummandFamily) -> bool) -> GroupSpec {
        GroupSpec {
            entries: self
                .entries
                .iter()
                .filter(|e| keep(&e.family))
                .cloned()
                .collect(),
        }
    }

    /// Number of `ℤ/p^k` summands, family contributions included.
    pub fn cyclic_multiplicity(&self, p: Prime, k: u32) -> Cardinal {
        self.entries
            .iter()
            .map(|e| match &e.family {
                SummandFamily::Cyclic { p: q, k: j } if *q == p && *j == k => e.mult,
                SummandFamily::CyclicPrimeFamily { primes, k: j } if *j == k && primes.contains(p) => {
                    e.mult
                }
                SummandFamily::CyclicExponentFamily { p: q, exponents }
                    if *q == p && exponents.contains(k) =>
                {
                    e.mult
                }
                _ => Cardinal::ZERO,
            })
            .sum()
    }

    pub fn prufer_multiplicity(&self, p: Prime) -> Cardinal {
        self.entries
            .iter()
            .filter(|e| e.family == SummandFamily::Prufer { p })
            .map(|e| e.mult)
            .sum()
    }

    pub fn padic_multiplicity(&self, p: Prime) -> Cardinal {
        self.entries
            .iter()
            .map(|e| match &e.family {
                SummandFamily::PAdicComplete { p: q } if *q == p => e.mult,
                SummandFamily::PAdicPrimeFamily { primes } if primes.contains(p) => e.mult,
                _ => Cardinal::ZERO,
            })
            .sum()
    }

    pub fn rational_rank(&self) -> Cardinal {
        self.entries
            .iter()
            .filter(|e| e.family == SummandFamily::Rationals)
            .map(|e| e.mult)
            .sum()
    }

    /// True when the spec is a finite direct sum of finite cyclic groups.
    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|e| {
            matches!(e.family, SummandFamily::Cyclic { .. }) && !e.mult.is_infinite()
        })
    }

    /// The list of cyclic prime-power orders (with repetition) of a finite spec.
    pub fn finite_prime_powers(&self) -> Option<Vec<u64>> {
        let mut out = Vec::new();
        for e in &self.entries {
            let SummandFamily::Cyclic { p, k } = e.family else {
                return None;
            };
            let m = e.mult.finite()?;
            let q = arith::checked_prime_power(p.get(), k)?;
            for _ in 0..m {
                out.push(q);
            }
        }
        Some(out)
    }

    /// The direct sum of all minimal subgroups.
    pub fn socle(&self) -> GroupSpec {
        GroupSpec::normalize(self.entries.iter().filter_map(|e| {
            let family = match &e.family {
                SummandFamily::Cyclic { p, .. } | SummandFamily::Prufer { p } => {
                    SummandFamily::Cyclic { p: *p, k: 1 }
                }
                SummandFamily::CyclicPrimeFamily { primes, .. } => SummandFamily::CyclicPrimeFamily {
                    primes: primes.clone(),
                    k: 1,
                },
                SummandFamily::CyclicExponentFamily { p, exponents } => {
                    let copies = match exponents {
                        ExponentSet::Explicit(s) => Cardinal::Finite(s.len() as u64),
                        ExponentSet::Cofinite(_) => Cardinal::ALEPH_0,
                    };
                    return Some(Entry::new(
                        SummandFamily::Cyclic { p: *p, k: 1 },
                        copies.mul(e.mult),
                    ));
                }
                SummandFamily::Rationals
                | SummandFamily::PAdicComplete { .. }
                | SummandFamily::PAdicPrimeFamily { .. } => return None,
            };
            Some(Entry::new(family, e.mult))
        }))
    }

    /// Split `G = G[M] ⊕ MG` when `M` annihilates the reduced p-primary torsion
    /// at every prime dividing `M`.
    pub fn m_split(&self, modulus: u64) -> Result<MSplit, SpecError> {
        if modulus == 0 {
            return Err(SpecError::ZeroModulus);
        }
        let valuations: BTreeMap<Prime, u32> = arith::factorize(modulus)
            .into_iter()
            .map(|(p, e)| (Prime::new(p).expect("factor is prime"), e))
            .collect();
        let violated = |p: Prime, k: u32| SpecError::PreconditionViolated { p, k, modulus };

        let mut cyclic_torsion = Vec::new();
        let mut prufer_torsion = Vec::new();
        let mut complement = Vec::new();
        for e in &self.entries {
            match &e.family {
                SummandFamily::Cyclic { p, k } => match valuations.get(p) {
                    Some(&v) if *k <= v => cyclic_torsion.push(e.clone()),
                    Some(_) => return Err(violated(*p, *k)),
                    None => complement.push(e.clone()),
                },
                SummandFamily::CyclicPrimeFamily { primes, k } => {
                    let mut carved = Vec::new();
                    for (&p, &v) in &valuations {
                        if primes.contains(p) {
                            if *k > v {
                                return Err(violated(p, *k));
                            }
                            cyclic_torsion.push(Entry::new(SummandFamily::Cyclic { p, k: *k }, e.mult));
                            carved.push(p);
                        }
                    }
                    complement.push(Entry::new(
                        SummandFamily::CyclicPrimeFamily {
                            primes: remove_primes(primes, &carved),
                            k: *k,
                        },
                        e.mult,
                    ));
                }
                SummandFamily::CyclicExponentFamily { p, exponents } => match valuations.get(p) {
                    Some(&v) => {
                        let bad = (v + 1..)
                            .find(|&k| exponents.contains(k))
                            .unwrap_or(v + 1);
                        return Err(violated(*p, bad));
                    }
                    None => complement.push(e.clone()),
                },
                SummandFamily::Prufer { p } => {
                    if let Some(&v) = valuations.get(p) {
                        prufer_torsion.push(Entry::new(SummandFamily::Cyclic { p: *p, k: v }, e.mult));
                    }
                    complement.push(e.clone());
                }
                SummandFamily::Rationals
                | SummandFamily::PAdicComplete { .. }
                | SummandFamily::PAdicPrimeFamily { .. } => complement.push(e.clone()),
            }
        }
        Ok(MSplit {
            modulus,
            cyclic_torsion: GroupSpec::normalize(cyclic_torsion),
            prufer_torsion: GroupSpec::normalize(prufer_torsion),
            complement: GroupSpec::normalize(complement),
        })
    }

    pub fn split_reduced_divisible(&self) -> KcdSplit {
        KcdSplit {
            k: self.filter(SummandFamily::is_padic),
            c: self.filter(SummandFamily::is_cyclic_like),
            d: self.filter(SummandFamily::is_divisible),
        }
    }
}

impl std::str::FromStr for GroupSpec {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GroupSpec::parse(s)
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        render::render(self, f)
    }
}

fn remove_primes(set: &PrimeSet, remove: &[Prime]) -> PrimeSet {
    match set {
        PrimeSet::Explicit(s) => {
            PrimeSet::Explicit(s.iter().copied().filter(|p| !remove.contains(p)).collect())
        }
        PrimeSet::Cofinite(ex) => {
            PrimeSet::Cofinite(ex.iter().copied().chain(remove.iter().copied()).collect())
        }
    }
}

/// Multiplicity functions collected from raw entries.
///
/// Cyclic summands form a function `m(p, k)` that is a sum of point masses,
/// per-exponent prime families (constant over a cofinite prime set) and
/// per-prime exponent families (constant over a cofinite exponent set).
/// `finish` re-reads that function in a canonical way.
#[derive(Default)]
struct Accumulator {
    cyclic_points: BTreeMap<(Prime, u32), Cardinal>,
    prime_families: BTreeMap<u32, Vec<(BTreeSet<Prime>, Cardinal)>>,
    exponent_families: BTreeMap<Prime, Vec<(BTreeSet<u32>, Cardinal)>>,
    prufer: BTreeMap<Prime, Cardinal>,
    rationals: Cardinal,
    padic_points: BTreeMap<Prime, Cardinal>,
    padic_families: Vec<(BTreeSet<Prime>, Cardinal)>,
}

impl Accumulator {
    fn add(&mut self, entry: Entry) {
        let m = entry.mult;
        if m.is_zero() {
            return;
        }
        match entry.family {
            SummandFamily::Cyclic { k: 0, .. } => {}
            SummandFamily::Cyclic { p, k } => add_to(&mut self.cyclic_points, (p, k), m),
            SummandFamily::Prufer { p } => add_to(&mut self.prufer, p, m),
            SummandFamily::Rationals => self.rationals = self.rationals + m,
            SummandFamily::PAdicComplete { p } => add_to(&mut self.padic_points, p, m),
            SummandFamily::CyclicPrimeFamily { k: 0, .. } => {}
            SummandFamily::CyclicPrimeFamily { primes, k } => match primes {
                PrimeSet::Explicit(s) => {
                    for p in s {
                        add_to(&mut self.cyclic_points, (p, k), m);
                    }
                }
                PrimeSet::Cofinite(ex) => self.prime_families.entry(k).or_default().push((ex, m)),
            },
            SummandFamily::PAdicPrimeFamily { primes } => match primes {
                PrimeSet::Explicit(s) => {
                    for p in s {
                        add_to(&mut self.padic_points, p, m);
                    }
                }
                PrimeSet::Cofinite(ex) => self.padic_families.push((ex, m)),
            },
            SummandFamily::CyclicExponentFamily { p, exponents } => match exponents {
                ExponentSet::Explicit(s) => {
                    for k in s.into_iter().filter(|&k| k >= 1) {
                        add_to(&mut self.cyclic_points, (p, k), m);
                    }
                }
                ExponentSet::Cofinite(ex) => self.exponent_families.entry(p).or_default().push((
                    ex.into_iter().filter(|&k| k >= 1).collect(),
                    m,
                )),
            },
        }
    }

    fn cyclic_at(&self, p: Prime, k: u32) -> Cardinal {
        let point = self.cyclic_points.get(&(p, k)).copied().unwrap_or_default();
        let fam: Cardinal = self
            .prime_families
            .get(&k)
            .into_iter()
            .flatten()
            .filter(|(ex, _)| !ex.contains(&p))
            .map(|&(_, m)| m)
            .sum();
        let exp: Cardinal = self
            .exponent_families
            .get(&p)
            .into_iter()
            .flatten()
            .filter(|(ex, _)| !ex.contains(&k))
            .map(|&(_, m)| m)
            .sum();
        point + fam + exp
    }

    fn padic_at(&self, p: Prime) -> Cardinal {
        let point = self.padic_points.get(&p).copied().unwrap_or_default();
        let fam: Cardinal = self
            .padic_families
            .iter()
            .filter(|(ex, _)| !ex.contains(&p))
            .map(|&(_, m)| m)
            .sum();
        point + fam
    }

    fn finish(self) -> GroupSpec {
        let mut out: Vec<Entry> = Vec::new();
        let mut points: BTreeMap<(Prime, u32), Cardinal> = BTreeMap::new();
        let exp_primes: BTreeSet<Prime> = self.exponent_families.keys().copied().collect();

        // Exponent-family primes are owned by their exponent family; prime
        // families always exclude them.
        for (&k, fams) in &self.prime_families {
            let generic: Cardinal = fams.iter().map(|&(_, m)| m).sum();
            let relevant: BTreeSet<Prime> = fams
                .iter()
                .flat_map(|(ex, _)| ex.iter().copied())
                .chain(self.cyclic_points.keys().filter(|(_, j)| *j == k).map(|&(p, _)| p))
                .chain(exp_primes.iter().copied())
                .collect();
            let mut excluded = BTreeSet::new();
            for p in relevant {
                if exp_primes.contains(&p) {
                    excluded.insert(p);
                    continue;
                }
                let m = self.cyclic_at(p, k);
                if m != generic {
                    excluded.insert(p);
                    if !m.is_zero() {
                        points.insert((p, k), m);
                    }
                }
            }
            out.push(Entry::new(
                SummandFamily::CyclicPrimeFamily {
                    primes: PrimeSet::Cofinite(excluded),
                    k,
                },
                generic,
            ));
        }

        for (&p, fams) in &self.exponent_families {
            let generic: Cardinal = fams.iter().map(|&(_, m)| m).sum();
            let relevant: BTreeSet<u32> = fams
                .iter()
                .flat_map(|(ex, _)| ex.iter().copied())
                .chain(self.cyclic_points.keys().filter(|(q, _)| *q == p).map(|&(_, k)| k))
                .chain(self.prime_families.keys().copied())
                .collect();
            let mut excluded = BTreeSet::new();
            for k in relevant {
                let m = self.cyclic_at(p, k);
                if m != generic {
                    excluded.insert(k);
                    if !m.is_zero() {
                        points.insert((p, k), m);
                    }
                }
            }
            out.push(Entry::new(
                SummandFamily::CyclicExponentFamily {
                    p,
                    exponents: ExponentSet::Cofinite(excluded),
                },
                generic,
            ));
        }

        for (&(p, k), &m) in &self.cyclic_points {
            if exp_primes.contains(&p) || self.prime_families.contains_key(&k) {
                continue;
            }
            points.insert((p, k), m);
        }
        out.extend(
            points
                .into_iter()
                .map(|((p, k), m)| Entry::new(SummandFamily::Cyclic { p, k }, m)),
        );

        let mut padic_points: BTreeMap<Prime, Cardinal> = BTreeMap::new();
        if !self.padic_families.is_empty() {
            let generic: Cardinal = self.padic_families.iter().map(|&(_, m)| m).sum();
            let relevant: BTreeSet<Prime> = self
                .padic_families
                .iter()
                .flat_map(|(ex, _)| ex.iter().copied())
                .chain(self.padic_points.keys().copied())
                .collect();
            let mut excluded = BTreeSet::new();
            for p in relevant {
                let m = self.padic_at(p);
                if m != generic {
                    excluded.insert(p);
                    if !m.is_zero() {
                        padic_points.insert(p, m);
                    }
                }
            }
            out.push(Entry::new(
                SummandFamily::PAdicPrimeFamily {
                    primes: PrimeSet::Cofinite(excluded),
                },
                generic,
            ));
        } else {
            padic_points = self.padic_points.clone();
        }
        out.extend(
            padic_points
                .into_iter()
                .map(|(p, m)| Entry::new(SummandFamily::PAdicComplete { p }, m)),
        );

        out.extend(
            self.prufer
                .iter()
                .map(|(&p, &m)| Entry::new(SummandFamily::Prufer { p }, m)),
        );
        if !self.rationals.is_zero() {
            out.push(Entry::new(SummandFamily::Rationals, self.rationals));
        }

        out.sort_by(|a, b| a.family.cmp(&b.family));
        GroupSpec { entries: out }
    }
}

fn add_to<K: Ord>(map: &mut BTreeMap<K, Cardinal>, key: K, m: Cardinal) {
    let slot = map.entry(key).or_default();
    *slot = *slot + m;
}
