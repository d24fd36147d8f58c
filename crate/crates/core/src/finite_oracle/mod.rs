//! Exhaustive ground truth on explicit finite abelian groups.
//!
//! Everything here enumerates elements. Inputs above the configured order
//! bound are refused rather than sampled.

mod snf;

use std::collections::{HashSet, VecDeque};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::group_spec::{Entry, GroupSpec, SummandFamily};
use crate::prime::Prime;

pub use snf::{determinant, smith_normal_form, IntMatrix, SmithForm};

pub const DEFAULT_ORDER_BOUND: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("group order {order} exceeds the bound {bound}")]
    OrderTooLarge { order: u128, bound: u64 },
    #[error("cyclic factor must be at least 2, got {0}")]
    InvalidFactor(u64),
    #[error("group is not a {0}-group")]
    NotAPGroup(Prime),
    #[error("spec is not a finite group")]
    NotFinite,
    #[error("matrix has no entries")]
    EmptyMatrix,
    #[error("element {0:?} does not lie in the group")]
    BadElement(Vec<u64>),
}

/// `⊕_j ℤ/factors[j]`, elements encoded as mixed-radix indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Factors", into = "Factors")]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
    strides: Vec<usize>,
    order: usize,
}

pub type Element = usize;

#[derive(Serialize, Deserialize)]
struct Factors {
    factors: Vec<u64>,
}

impl TryFrom<Factors> for FiniteAbelianGroup {
    type Error = OracleError;

    fn try_from(f: Factors) -> Result<Self, OracleError> {
        FiniteAbelianGroup::new(f.factors)
    }
}

impl From<FiniteAbelianGroup> for Factors {
    fn from(g: FiniteAbelianGroup) -> Self {
        Factors { factors: g.factors }
    }
}

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self, OracleError> {
        Self::with_bound(factors, DEFAULT_ORDER_BOUND)
    }

    pub fn with_bound(factors: Vec<u64>, bound: u64) -> Result<Self, OracleError> {
        if let Some(&bad) = factors.iter().find(|&&f| f < 2) {
            return Err(OracleError::InvalidFactor(bad));
        }
        let order: u128 = factors.iter().map(|&f| f as u128).product();
        if order > bound as u128 {
            return Err(OracleError::OrderTooLarge { order, bound });
        }
        let mut strides = Vec::with_capacity(factors.len());
        let mut s = 1usize;
        for &f in &factors {
            strides.push(s);
            s *= f as usize;
        }
        Ok(FiniteAbelianGroup {
            factors,
            strides,
            order: order as usize,
        })
    }

    pub fn trivial() -> Self {
        Self::new(vec![]).expect("trivial group")
    }

    /// Realizes a finite spec as a direct sum of its prime-power cyclics.
    pub fn realize(spec: &GroupSpec, bound: u64) -> Result<Self, OracleError> {
        let factors = spec.finite_prime_powers().ok_or(OracleError::NotFinite)?;
        Self::with_bound(factors, bound)
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.factors.iter().fold(1, |a, &f| a.lcm(&f))
    }

    pub fn zero(&self) -> Element {
        0
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.order
    }

    pub fn encode(&self, coords: &[u64]) -> Result<Element, OracleError> {
        if coords.len() != self.factors.len()
            || coords.iter().zip(&self.factors).any(|(x, f)| x >= f)
        {
            return Err(OracleError::BadElement(coords.to_vec()));
        }
        Ok(coords
            .iter()
            .zip(&self.strides)
            .map(|(&x, &s)| x as usize * s)
            .sum())
    }

    pub fn decode(&self, e: Element) -> Vec<u64> {
        self.factors
            .iter()
            .zip(&self.strides)
            .map(|(&f, &s)| ((e / s) as u64) % f)
            .collect()
    }

    pub fn add(&self, a: Element, b: Element) -> Element {
        let mut out = 0;
        for (&f, &s) in self.factors.iter().zip(&self.strides) {
            let f = f as usize;
            let x = (a / s) % f + (b / s) % f;
            out += if x >= f { x - f } else { x } * s;
        }
        out
    }

    pub fn scale(&self, n: u64, a: Element) -> Element {
        let mut out = 0;
        for (&f, &s) in self.factors.iter().zip(&self.strides) {
            let x = ((a / s) as u64 % f) as u128 * (n as u128 % f as u128) % f as u128;
            out += x as usize * s;
        }
        out
    }

    pub fn element_order(&self, a: Element) -> u64 {
        self.decode(a)
            .iter()
            .zip(&self.factors)
            .fold(1, |acc, (&x, &f)| acc.lcm(&(f / x.gcd(&f))))
    }

    /// Image of multiplication by `n`.
    pub fn multiples(&self, n: u64) -> Subgroup {
        let mut s = Subgroup::empty(self.order);
        for g in self.elements() {
            s.insert(self.scale(n, g));
        }
        s
    }

    /// Kernel of multiplication by `n`.
    pub fn torsion(&self, n: u64) -> Subgroup {
        let mut s = Subgroup::empty(self.order);
        for g in self.elements() {
            if self.scale(n, g) == 0 {
                s.insert(g);
            }
        }
        s
    }

    pub fn whole(&self) -> Subgroup {
        let mut s = Subgroup::empty(self.order);
        for g in self.elements() {
            s.insert(g);
        }
        s
    }

    pub fn zero_subgroup(&self) -> Subgroup {
        let mut s = Subgroup::empty(self.order);
        s.insert(0);
        s
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[Element]) -> Subgroup {
        let mut s = self.zero_subgroup();
        for &g in gens {
            s = self.join_element(&s, g);
        }
        s
    }

    /// `H + ⟨g⟩`.
    pub fn join_element(&self, h: &Subgroup, g: Element) -> Subgroup {
        if h.contains(g) {
            return h.clone();
        }
        let members: Vec<Element> = h.iter().collect();
        let mut out = h.clone();
        let mut shift = g;
        while !h.contains(shift) {
            for &m in &members {
                out.insert(self.add(m, shift));
            }
            shift = self.add(shift, g);
        }
        out
    }

    /// Every subgroup, each exactly once.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut cyclic_gens: Vec<Element> = Vec::new();
        let mut seen_cyclic: HashSet<Subgroup> = HashSet::new();
        for g in self.elements() {
            let c = self.closure(&[g]);
            if seen_cyclic.insert(c) {
                cyclic_gens.push(g);
            }
        }
        let start = self.zero_subgroup();
        let mut seen: HashSet<Subgroup> = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start.clone()]);
        let mut out = vec![start];
        while let Some(h) = queue.pop_front() {
            for &g in &cyclic_gens {
                if h.contains(g) {
                    continue;
                }
                let j = self.join_element(&h, g);
                if seen.insert(j.clone()) {
                    out.push(j.clone());
                    queue.push_back(j);
                }
            }
        }
        out
    }

    /// Elementary-divisor decomposition read off from Smith normal form.
    pub fn to_spec(&self) -> GroupSpec {
        if self.factors.is_empty() {
            return GroupSpec::trivial();
        }
        let s = smith_normal_form(&IntMatrix::diagonal(&self.factors)).expect("nonempty");
        GroupSpec::normalize(s.invariant_factors.iter().flat_map(|d| {
            let d: u64 = d.try_into().expect("bounded order");
            arith::factorize(d).into_iter().map(|(p, k)| {
                Entry::new(
                    SummandFamily::Cyclic {
                        p: Prime::new(p).expect("prime factor"),
                        k,
                    },
                    1,
                )
            })
        }))
    }

    /// Invariant factors `d_1 | d_2 | ...` of the group.
    pub fn invariant_factors(&self) -> Vec<u64> {
        if self.factors.is_empty() {
            return vec![];
        }
        smith_normal_form(&IntMatrix::diagonal(&self.factors))
            .expect("nonempty")
            .invariant_factors
            .iter()
            .map(|d| d.try_into().expect("bounded order"))
            .collect()
    }
}

/// A subset of a finite group, stored as a bitset over element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    bits: Vec<u64>,
}

impl Subgroup {
    fn empty(order: usize) -> Subgroup {
        Subgroup {
            bits: vec![0; order.div_ceil(64)],
        }
    }

    fn insert(&mut self, e: Element) {
        self.bits[e / 64] |= 1 << (e % 64);
    }

    pub fn contains(&self, e: Element) -> bool {
        self.bits[e / 64] >> (e % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| i * 64 + b)
        })
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }

    /// `{n·h : h ∈ H}`.
    pub fn multiples(&self, g: &FiniteAbelianGroup, n: u64) -> Subgroup {
        let mut s = Subgroup::empty(g.order());
        for h in self.iter() {
            s.insert(g.scale(n, h));
        }
        s
    }

    /// Isomorphism type from the counts `|H[p^j]|`, independent of any
    /// decomposition of the ambient group.
    pub fn to_spec(&self, g: &FiniteAbelianGroup) -> GroupSpec {
        let mut entries = Vec::new();
        for (p, e) in arith::factorize(self.len() as u64) {
            let prime = Prime::new(p).expect("prime factor");
            let log = |n: usize| -> u32 {
                let mut n = n as u64;
                let mut l = 0;
                while n % p == 0 && n > 1 {
                    n /= p;
                    l += 1;
                }
                l
            };
            // c[j] = log_p |H[p^j]|
            let mut c = vec![0u32];
            let mut pj = 1u64;
            while *c.last().unwrap() < e {
                pj *= p;
                let count = self.iter().filter(|&h| g.scale(pj, h) == 0).count();
                c.push(log(count));
            }
            c.push(e);
            for j in 1..c.len() - 1 {
                let at_least_j = c[j] - c[j - 1];
                let at_least_next = c[j + 1] - c[j];
                let exactly = at_least_j - at_least_next;
                if exactly > 0 {
                    entries.push(Entry::new(
                        SummandFamily::Cyclic { p: prime, k: j as u32 },
                        exactly as u64,
                    ));
                }
            }
        }
        GroupSpec::normalize(entries)
    }
}

/// Purity tests against one ambient group, with `nG` cached for every `n`
/// up to the exponent.
pub struct PurityOracle<'a> {
    group: &'a FiniteAbelianGroup,
    multiples: Vec<Subgroup>,
}

impl<'a> PurityOracle<'a> {
    pub fn new(group: &'a FiniteAbelianGroup) -> Self {
        let exp = group.exponent();
        let multiples = (1..=exp).map(|n| group.multiples(n)).collect();
        PurityOracle { group, multiples }
    }

    /// `H ∩ nG = nH` for all `1 ≤ n ≤ exp(G)`.
    pub fn is_pure(&self, h: &Subgroup) -> bool {
        self.multiples.iter().enumerate().all(|(i, ng)| {
            let nh = h.multiples(self.group, i as u64 + 1);
            h.intersection(ng) == nh
        })
    }
}

/// Purity of the subgroup generated by `gens`, by exhaustive search.
pub fn is_pure_subgroup_bruteforce(g: &FiniteAbelianGroup, gens: &[Element]) -> bool {
    PurityOracle::new(g).is_pure(&g.closure(gens))
}

/// True when some subgroup `K` has `H ∩ K = 0` and `|H||K| = |G|`.
pub fn is_direct_summand(g: &FiniteAbelianGroup, h: &Subgroup, subgroups: &[Subgroup]) -> bool {
    let zero = g.zero_subgroup();
    let want = g.order() / h.len();
    subgroups
        .iter()
        .any(|k| k.len() == want && h.intersection(k) == zero)
}

/// `dim_{F_p} P(G,i)/P(G,i+1)` with `P(G,i) = G[p] ∩ p^i G`.
pub fn ulm_bruteforce(g: &FiniteAbelianGroup, p: Prime, i: u32) -> Result<u64, OracleError> {
    let mut n = g.order() as u64;
    while n % p.get() == 0 {
        n /= p.get();
    }
    if n != 1 {
        return Err(OracleError::NotAPGroup(p));
    }
    let socle = g.torsion(p.get());
    let layer = |i: u32| -> usize {
        let pi = p.get().checked_pow(i);
        match pi {
            Some(pi) => socle.intersection(&g.multiples(pi)).len(),
            None => 1,
        }
    };
    let ratio = layer(i) / layer(i + 1);
    let mut dim = 0;
    let mut r = ratio as u64;
    while r > 1 {
        r /= p.get();
        dim += 1;
    }
    Ok(dim)
}

/// Isomorphism by comparing invariant factors.
pub fn iso_finite_bruteforce(g: &FiniteAbelianGroup, h: &FiniteAbelianGroup) -> bool {
    g.order() == h.order() && g.invariant_factors() == h.invariant_factors()
}

/// All partitions of `n` as non-increasing part lists.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=max.min(n)).rev() {
            prefix.push(part);
            go(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// One spec per isomorphism class of abelian groups of order exactly `n`.
pub fn abelian_groups_of_order(n: u64) -> Vec<GroupSpec> {
    let mut acc: Vec<Vec<Entry>> = vec![vec![]];
    for (p, e) in arith::factorize(n) {
        let prime = Prime::new(p).expect("prime factor");
        let mut next = Vec::new();
        for base in &acc {
            for part in partitions(e) {
                let mut entries = base.clone();
                entries.extend(
                    part.iter()
                        .map(|&k| Entry::new(SummandFamily::Cyclic { p: prime, k }, 1)),
                );
                next.push(entries);
            }
        }
        acc = next;
    }
    acc.into_iter().map(GroupSpec::normalize).collect()
}

/// Every abelian group of order at most `n`, trivial group included.
pub fn abelian_groups_up_to(n: u64) -> Vec<GroupSpec> {
    (1..=n).flat_map(abelian_groups_of_order).collect()
}
