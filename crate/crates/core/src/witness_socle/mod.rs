//! Bi-embeddable, non-isomorphic pure subgroups of `∏_{p∈S} (ℤ/p)^{r_p}`
//! containing `⊕_{p∈S} (ℤ/p)^{r_p}`, for an infinite prime set `S`.
//!
//! Elements are finite data: a finitely supported part plus a tail
//! `Σ α_{1/n}(c·σ₁^iσ₂^j(a))`, evaluated at any prime on demand. Membership
//! in `H₁`, `H₂` reads the tail's monomials, which is sound only while no
//! bounded polynomial in `σ₁, σ₂` is finitely supported; the avoidance
//! certificate checks that on the window primes.

mod avoidance;
mod reduce;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::prime::{Prime, PrimeSet};
use crate::relation_search;
use crate::witness_padic::Side;

pub use avoidance::{AvoidanceCertificate, AvoidanceMode, BlockSummary, QCount};
pub use reduce::{reduce_unbounded, ReductionTranscript, TranscriptStep};

/// Seeds tried by [`choose_sigmas`] before it gives up.
pub const MAX_SIGMA_ATTEMPTS: u64 = 32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SocleError {
    #[error("no sigma pair passed after {attempts} seeds: {reason}")]
    SearchFailed { attempts: u64, reason: String },
    #[error("search space {space} exceeds the budget {budget}")]
    BudgetExceeded { space: f64, budget: f64 },
    #[error("base point has zero projection at p = {0}")]
    ZeroProjection(Prime),
    #[error("element is not in canonical form")]
    NonCanonical,
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("exception at p = {0} has the wrong length or p is outside S")]
    InvalidException(Prime),
    #[error("not superstable: {0}")]
    NotSuperstable(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

/// An infinite prime set `S`, its first `W` primes, and the ranks `r_p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeWindow {
    pub set: PrimeSet,
    pub window: Vec<Prime>,
    pub rank: u32,
    pub rank_overrides: BTreeMap<Prime, u32>,
}

impl PrimeWindow {
    pub fn new(set: PrimeSet, size: usize, rank: u32) -> Result<Self, SocleError> {
        if !set.is_infinite() {
            return Err(SocleError::InvalidWindow("the prime set must be infinite".into()));
        }
        if size == 0 || rank == 0 {
            return Err(SocleError::InvalidWindow("window size and rank must be positive".into()));
        }
        Ok(PrimeWindow {
            window: set.first(size),
            set,
            rank,
            rank_overrides: BTreeMap::new(),
        })
    }

    pub fn with_rank(mut self, p: Prime, r: u32) -> Result<Self, SocleError> {
        if r == 0 || !self.set.contains(p) {
            return Err(SocleError::InvalidWindow(format!("cannot set r_{p} = {r}")));
        }
        if r == self.rank {
            self.rank_overrides.remove(&p);
        } else {
            self.rank_overrides.insert(p, r);
        }
        Ok(self)
    }

    pub fn rank_at(&self, p: Prime) -> u32 {
        self.rank_overrides.get(&p).copied().unwrap_or(self.rank)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchSpace {
    Free,
    /// `σ₁ = σ₂` at every prime.
    Diagonal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeScalars {
    pub p: Prime,
    pub sigma: u64,
    pub tau: u64,
}

/// Per-prime unit scalars `(σ_p, τ_p)`, drawn from a seeded stream for each
/// prime; the window values are listed, the rest follow the same rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaPair {
    pub seed: u64,
    pub space: SearchSpace,
    pub window: Vec<PrimeScalars>,
}

fn seeded_unit(seed: u64, p: Prime, which: u64) -> u64 {
    let pv = p.get();
    if pv == 2 {
        return 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(pv.wrapping_mul(2).wrapping_add(which));
    rng.random_range(1..pv)
}

impl SigmaPair {
    pub fn seeded(seed: u64, space: SearchSpace, window: &[Prime]) -> Self {
        let mut pair = SigmaPair {
            seed,
            space,
            window: Vec::new(),
        };
        pair.window = window
            .iter()
            .map(|&p| PrimeScalars {
                p,
                sigma: pair.sigma_at(p),
                tau: pair.tau_at(p),
            })
            .collect();
        pair
    }

    fn listed(&self, p: Prime) -> Option<&PrimeScalars> {
        self.window.iter().find(|s| s.p == p)
    }

    pub fn sigma_at(&self, p: Prime) -> u64 {
        match self.listed(p) {
            Some(s) => s.sigma,
            None => seeded_unit(self.seed, p, 0),
        }
    }

    pub fn tau_at(&self, p: Prime) -> u64 {
        match (self.listed(p), self.space) {
            (Some(s), _) => s.tau,
            (None, SearchSpace::Diagonal) => seeded_unit(self.seed, p, 0),
            (None, SearchSpace::Free) => seeded_unit(self.seed, p, 1),
        }
    }

    /// `σ₁` or `σ₂` at `p`.
    pub fn scalar(&self, which: Generator, p: Prime) -> u64 {
        match which {
            Generator::Sigma1 => self.sigma_at(p),
            Generator::Sigma2 => self.tau_at(p),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Generator {
    Sigma1,
    Sigma2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SocleBounds {
    pub degree: u32,
    pub height: u32,
    pub threshold: usize,
}

fn square_monomials(d: u32) -> Vec<(u32, u32)> {
    (0..=d).flat_map(|i| (0..=d).map(move |j| (i, j))).collect()
}

/// Draws seeded pairs until one passes the avoidance certificate.
pub fn choose_sigmas(
    pw: &PrimeWindow,
    bounds: SocleBounds,
    seed: u64,
    space: SearchSpace,
) -> Result<(SigmaPair, AvoidanceCertificate), SocleError> {
    if bounds.threshold == 0 || bounds.threshold > pw.window.len() {
        return Err(SocleError::SearchFailed {
            attempts: 0,
            reason: format!(
                "threshold {} needs a window of at least that many primes, have {}",
                bounds.threshold,
                pw.window.len()
            ),
        });
    }
    let monos = square_monomials(bounds.degree);
    let mut reason = String::new();
    for attempt in 0..MAX_SIGMA_ATTEMPTS {
        let pair = SigmaPair::seeded(seed.wrapping_add(attempt), space, &pw.window);
        let cert = avoidance::certify(
            &pw.window,
            &pair,
            &monos,
            bounds.degree,
            bounds.height,
            bounds.threshold,
            false,
        )?;
        if cert.passed {
            return Ok((pair, cert));
        }
        if let Some(c) = &cert.counterexample {
            reason = format!("{} is nonzero at only {} window primes", c.q, c.nonzero_at);
        }
    }
    Err(SocleError::SearchFailed {
        attempts: MAX_SIGMA_ATTEMPTS,
        reason,
    })
}

/// The base point `a`: all ones unless overridden.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasePoint {
    pub overrides: BTreeMap<Prime, Vec<u64>>,
}

impl BasePoint {
    pub fn at(&self, p: Prime, rank: u32) -> Vec<u64> {
        match self.overrides.get(&p) {
            Some(v) => v.iter().map(|x| x % p.get()).collect(),
            None => vec![1; rank as usize],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Exception {
    pub p: Prime,
    pub value: Vec<u64>,
}

/// `c·α_{1/n}(σ₁^iσ₂^j(a))`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TailTerm {
    pub n: u64,
    pub i: u32,
    pub j: u32,
    #[serde(with = "crate::decimal::bigint")]
    pub coeff: BigInt,
}

/// A finitely supported part plus a tail of `α_{1/n}`-scaled monomials in
/// `σ₁, σ₂` applied to the base point.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductElement {
    pub exceptions: Vec<Exception>,
    pub tail: Vec<TailTerm>,
}

impl ProductElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(i: u32, j: u32) -> Self {
        ProductElement {
            exceptions: Vec::new(),
            tail: vec![TailTerm {
                n: 1,
                i,
                j,
                coeff: BigInt::one(),
            }],
        }
    }

    /// The base point `a`.
    pub fn base() -> Self {
        Self::monomial(0, 0)
    }

    pub fn finite(exceptions: Vec<Exception>) -> Self {
        ProductElement {
            exceptions,
            tail: Vec::new(),
        }
    }

    /// Merges duplicates, reduces residues and drops zero parts.
    pub fn canonical(&self, pw: &PrimeWindow) -> Result<Self, SocleError> {
        let mut ex: BTreeMap<Prime, Vec<u64>> = BTreeMap::new();
        for e in &self.exceptions {
            if !pw.set.contains(e.p) || e.value.len() != pw.rank_at(e.p) as usize {
                return Err(SocleError::InvalidException(e.p));
            }
            let slot = ex.entry(e.p).or_insert_with(|| vec![0; e.value.len()]);
            for (s, v) in slot.iter_mut().zip(&e.value) {
                *s = (*s + v % e.p.get()) % e.p.get();
            }
        }
        let mut tail: BTreeMap<(u64, u32, u32), BigInt> = BTreeMap::new();
        for t in &self.tail {
            if t.n == 0 {
                return Err(SocleError::NonCanonical);
            }
            *tail.entry((t.n, t.i, t.j)).or_default() += &t.coeff;
        }
        Ok(ProductElement {
            exceptions: ex
                .into_iter()
                .filter(|(_, v)| v.iter().any(|&x| x != 0))
                .map(|(p, value)| Exception { p, value })
                .collect(),
            tail: tail
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((n, i, j), coeff)| TailTerm { n, i, j, coeff })
                .collect(),
        })
    }

    pub fn add(&self, other: &Self, pw: &PrimeWindow) -> Result<Self, SocleError> {
        ProductElement {
            exceptions: self.exceptions.iter().chain(&other.exceptions).cloned().collect(),
            tail: self.tail.iter().chain(&other.tail).cloned().collect(),
        }
        .canonical(pw)
    }

    pub fn scale(&self, c: i64, pw: &PrimeWindow) -> Result<Self, SocleError> {
        ProductElement {
            exceptions: self
                .exceptions
                .iter()
                .map(|e| Exception {
                    p: e.p,
                    value: e
                        .value
                        .iter()
                        .map(|&v| (v as i128 * c as i128).rem_euclid(e.p.get() as i128) as u64)
                        .collect(),
                })
                .collect(),
            tail: self
                .tail
                .iter()
                .map(|t| TailTerm {
                    coeff: &t.coeff * c,
                    ..t.clone()
                })
                .collect(),
        }
        .canonical(pw)
    }

    /// `Σ c/n` per monomial: the tail up to a finitely supported difference.
    pub fn effective_tail(&self) -> BTreeMap<(u32, u32), BigRational> {
        let mut out: BTreeMap<(u32, u32), BigRational> = BTreeMap::new();
        for t in &self.tail {
            *out.entry((t.i, t.j)).or_insert_with(BigRational::zero) +=
                BigRational::new(t.coeff.clone(), BigInt::from(t.n));
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// True when only finitely many coordinates are nonzero.
    pub fn is_finitely_supported(&self) -> bool {
        self.effective_tail().is_empty()
    }
}

/// `α_{1/n}`: zero at primes dividing `n`, multiplication by `n⁻¹` elsewhere.
pub fn alpha_inv(x: &ProductElement, n: u64, pw: &PrimeWindow) -> Result<ProductElement, SocleError> {
    assert!(n >= 1, "alpha_inv needs n >= 1");
    let exceptions = x
        .exceptions
        .iter()
        .filter(|e| n % e.p.get() != 0)
        .map(|e| {
            let pv = e.p.get();
            let inv = arith::mod_inverse(n % pv, pv).expect("p does not divide n");
            Exception {
                p: e.p,
                value: e.value.iter().map(|&v| (v as u128 * inv as u128 % pv as u128) as u64).collect(),
            }
        })
        .collect();
    let tail = x
        .tail
        .iter()
        .map(|t| TailTerm {
            n: t.n.checked_mul(n).expect("denominator overflow"),
            ..t.clone()
        })
        .collect();
    ProductElement { exceptions, tail }.canonical(pw)
}

/// Applies `σ₁` or `σ₂`; both commute with every `α_{1/n}`.
pub fn apply_sigma(
    x: &ProductElement,
    which: Generator,
    pair: &SigmaPair,
    pw: &PrimeWindow,
) -> Result<ProductElement, SocleError> {
    let exceptions = x
        .exceptions
        .iter()
        .map(|e| {
            let (pv, s) = (e.p.get(), pair.scalar(which, e.p));
            Exception {
                p: e.p,
                value: e.value.iter().map(|&v| (v as u128 * s as u128 % pv as u128) as u64).collect(),
            }
        })
        .collect();
    let tail = x
        .tail
        .iter()
        .map(|t| match which {
            Generator::Sigma1 => TailTerm { i: t.i + 1, ..t.clone() },
            Generator::Sigma2 => TailTerm { j: t.j + 1, ..t.clone() },
        })
        .collect();
    ProductElement { exceptions, tail }.canonical(pw)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SocleGrid {
    pub side: Side,
    pub generators: String,
}

/// The pair `H₁, H₂` with everything needed to evaluate its elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SocleWitness {
    pub window: PrimeWindow,
    pub base: BasePoint,
    pub pair: SigmaPair,
    pub bounds: SocleBounds,
    pub certificate: AvoidanceCertificate,
    pub h1_grid: SocleGrid,
    pub h2_grid: SocleGrid,
    pub reduced: String,
}

pub fn socle_witness_build(
    pw: &PrimeWindow,
    seed: u64,
    bounds: SocleBounds,
    base: BasePoint,
    space: SearchSpace,
) -> Result<SocleWitness, SocleError> {
    for &p in &pw.window {
        let a = base.at(p, pw.rank_at(p));
        if a.len() != pw.rank_at(p) as usize || a.iter().any(|&x| x == 0) {
            return Err(SocleError::ZeroProjection(p));
        }
    }
    let (pair, certificate) = choose_sigmas(pw, bounds, seed, space)?;
    Ok(SocleWitness {
        window: pw.clone(),
        base,
        pair,
        bounds,
        certificate,
        h1_grid: SocleGrid {
            side: Side::H1,
            generators: "sigma1^i sigma2^j (a) for all i, j >= 0".into(),
        },
        h2_grid: SocleGrid {
            side: Side::H2,
            generators: "a, and sigma1^i sigma2^j (a) for i >= 1, j >= 0".into(),
        },
        reduced: "both groups lie in the reduced product of the Z/p, so both are reduced".into(),
    })
}

impl SocleWitness {
    /// The coordinate of `x` at `p ∈ S`.
    pub fn evaluate(&self, x: &ProductElement, p: Prime) -> Vec<u64> {
        let pv = p.get();
        let r = self.window.rank_at(p) as usize;
        let mut out = vec![0u64; r];
        if let Some(e) = x.exceptions.iter().find(|e| e.p == p) {
            out.clone_from(&e.value);
        }
        let (s, t) = (self.pair.sigma_at(p), self.pair.tau_at(p));
        let a = self.base.at(p, r as u32);
        for term in x.tail.iter().filter(|t| t.n % pv != 0) {
            let inv = arith::mod_inverse(term.n % pv, pv).expect("p does not divide n");
            let c = reduce_big(&term.coeff, pv);
            let scalar = [
                c,
                inv,
                arith::mod_pow(s, term.i as u64, pv),
                arith::mod_pow(t, term.j as u64, pv),
            ]
            .iter()
            .fold(1u128, |acc, &v| acc * v as u128 % pv as u128);
            for (o, &ai) in out.iter_mut().zip(&a) {
                *o = ((*o as u128 + scalar * ai as u128) % pv as u128) as u64;
            }
        }
        out
    }

    pub fn evaluate_window(&self, x: &ProductElement) -> Vec<Vec<u64>> {
        self.window.window.iter().map(|&p| self.evaluate(x, p)).collect()
    }
}

fn reduce_big(c: &BigInt, p: u64) -> u64 {
    let r = c % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    r.to_u64().expect("reduced below p")
}

/// Membership in `H₁` or `H₂`: the tail, up to a finitely supported
/// difference, must use only grid monomials. Relative to the avoidance
/// certificate.
pub fn product_membership(
    x: &ProductElement,
    side: Side,
    w: &SocleWitness,
) -> Result<bool, SocleError> {
    if *x != x.canonical(&w.window)? {
        return Err(SocleError::NonCanonical);
    }
    Ok(x.effective_tail().keys().all(|&(i, j)| side.grid_contains(i, j)))
}

/// A random member of `H_ℓ`: grid monomials under random `α_{1/n}`, plus a
/// random finitely supported part on the window.
pub fn sample_member<R: Rng>(w: &SocleWitness, side: Side, rng: &mut R) -> ProductElement {
    let mut x = ProductElement::zero();
    for _ in 0..rng.random_range(1..=4) {
        let (i, j) = loop {
            let (i, j) = (rng.random_range(0..=3), rng.random_range(0..=3));
            if side.grid_contains(i, j) {
                break (i, j);
            }
        };
        x.tail.push(TailTerm {
            n: rng.random_range(1..=30),
            i,
            j,
            coeff: BigInt::from(rng.random_range(-4..=4i64)),
        });
    }
    for _ in 0..rng.random_range(0..=2) {
        let p = w.window.window[rng.random_range(0..w.window.window.len())];
        let value = (0..w.window.rank_at(p)).map(|_| rng.random_range(0..p.get())).collect();
        x.exceptions.push(Exception { p, value });
    }
    x.canonical(&w.window).expect("valid by construction")
}

fn random_window_element<R: Rng>(w: &SocleWitness, rng: &mut R) -> ProductElement {
    let side = if rng.random_bool(0.5) { Side::H1 } else { Side::H2 };
    sample_member(w, side, rng)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub samples: usize,
    pub holds: bool,
    pub failures: Vec<String>,
}

impl ProbeResult {
    fn collect(samples: usize, mut failures: Vec<String>) -> Self {
        failures.truncate(10);
        ProbeResult {
            samples,
            holds: failures.is_empty(),
            failures,
        }
    }
}

/// `α_{1/ab} = α_{1/a} ∘ α_{1/b}` on representations and window values, and
/// `n·α_{1/n}(x)` agrees with `x` off the primes dividing `n` and is zero on them.
pub fn alpha_law_probe(w: &SocleWitness, samples: usize, max: u64, seed: u64) -> Result<ProbeResult, SocleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pw = &w.window;
    let mut failures = Vec::new();
    for n in 0..samples {
        let x = random_window_element(w, &mut rng);
        let (a, b) = (rng.random_range(1..=max), rng.random_range(1..=max));
        let lhs = alpha_inv(&x, a * b, pw)?;
        let rhs = alpha_inv(&alpha_inv(&x, b, pw)?, a, pw)?;
        if lhs != rhs || w.evaluate_window(&lhs) != w.evaluate_window(&rhs) {
            failures.push(format!("sample {n}: composition fails for a = {a}, b = {b}"));
        }
        let back = alpha_inv(&x, a, pw)?.scale(a as i64, pw)?;
        for &p in &pw.window {
            let expect = if a % p.get() == 0 {
                vec![0; pw.rank_at(p) as usize]
            } else {
                w.evaluate(&x, p)
            };
            if w.evaluate(&back, p) != expect {
                failures.push(format!("sample {n}: n*alpha(1/n) wrong at p = {p}, n = {a}"));
            }
        }
    }
    Ok(ProbeResult::collect(samples, failures))
}

/// Each window scalar is a unit and undoing it restores the window values.
pub fn sigma_unit_probe(w: &SocleWitness, samples: usize, seed: u64) -> Result<ProbeResult, SocleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for s in &w.pair.window {
        let pv = s.p.get();
        if arith::mod_inverse(s.sigma % pv, pv).is_none() || arith::mod_inverse(s.tau % pv, pv).is_none() {
            failures.push(format!("non-unit scalar at p = {}", s.p));
        }
    }
    for n in 0..samples {
        let x = random_window_element(w, &mut rng);
        for which in [Generator::Sigma1, Generator::Sigma2] {
            let y = apply_sigma(&x, which, &w.pair, &w.window)?;
            for &p in &w.window.window {
                let pv = p.get();
                let inv = arith::mod_inverse(w.pair.scalar(which, p), pv).expect("unit");
                let undone: Vec<u64> = w
                    .evaluate(&y, p)
                    .iter()
                    .map(|&v| (v as u128 * inv as u128 % pv as u128) as u64)
                    .collect();
                if undone != w.evaluate(&x, p) {
                    failures.push(format!("sample {n}: {which:?} not undone at p = {p}"));
                }
            }
        }
    }
    Ok(ProbeResult::collect(samples, failures))
}

/// `σ₁` maps sampled members of `H₁` into `H₂`, and `α_{1/m}` keeps members
/// inside `H₁`.
pub fn embedding_probe(w: &SocleWitness, samples: usize, seed: u64) -> Result<ProbeResult, SocleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for n in 0..samples {
        let x = sample_member(w, Side::H1, &mut rng);
        if !product_membership(&x, Side::H1, w)? {
            failures.push(format!("sample {n} is not in H1"));
        }
        let y = apply_sigma(&x, Generator::Sigma1, &w.pair, &w.window)?;
        if !product_membership(&y, Side::H2, w)? {
            failures.push(format!("sample {n}: sigma1(x) is not in H2"));
        }
        let m = rng.random_range(1..=60);
        if !product_membership(&alpha_inv(&x, m, &w.window)?, Side::H1, w)? {
            failures.push(format!("sample {n}: alpha(1/{m}) leaves H1"));
        }
        let z = sample_member(w, Side::H2, &mut rng);
        if !product_membership(&z, Side::H1, w)? {
            failures.push(format!("sample {n}: H2 member is not in H1"));
        }
    }
    Ok(ProbeResult::collect(samples, failures))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerCheck {
    pub m: u32,
    pub monomials: usize,
    pub holds: bool,
    pub counterexample: Option<QCount>,
}

/// For each `m ≤ m_max`: every bounded combination of `σ₁σ₂^{m+1}` and
/// products of at most `d` of `σ₁, σ₁σ₂, …, σ₁σ₂^m` with a nonzero
/// coefficient on `σ₁σ₂^{m+1}` is nonzero at `threshold` or more window primes.
pub fn tower_check(w: &SocleWitness, m_max: u32) -> Result<Vec<TowerCheck>, SocleError> {
    (0..=m_max)
        .map(|m| {
            let monos = relation_search::tower_monomials(w.bounds.degree, m);
            let cert = avoidance::certify(
                &w.window.window,
                &w.pair,
                &monos,
                w.bounds.degree,
                w.bounds.height,
                w.bounds.threshold,
                true,
            )?;
            Ok(TowerCheck {
                m,
                monomials: monos.len(),
                holds: cert.passed,
                counterexample: cert.counterexample,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SocleProbeReport {
    pub certificate_passed: bool,
    pub alpha_laws: ProbeResult,
    pub sigma_units: ProbeResult,
    pub embedding: ProbeResult,
    pub base_in_h1: bool,
    /// `σ₂(a) ∉ H₂`, relative to the certificate.
    pub sigma2_a_outside_h2: bool,
    pub finite_support_in_h2: bool,
    pub tower: Vec<TowerCheck>,
    pub note: String,
}

impl SocleProbeReport {
    pub fn all_hold(&self) -> bool {
        self.certificate_passed
            && self.alpha_laws.holds
            && self.sigma_units.holds
            && self.embedding.holds
            && self.base_in_h1
            && self.sigma2_a_outside_h2
            && self.finite_support_in_h2
            && self.tower.iter().all(|t| t.holds)
    }
}

pub fn probe_socle_witness(
    w: &SocleWitness,
    samples: usize,
    seed: u64,
    m_max: u32,
) -> Result<SocleProbeReport, SocleError> {
    let a = ProductElement::base();
    let s2a = apply_sigma(&a, Generator::Sigma2, &w.pair, &w.window)?;
    let p0 = w.window.window[0];
    let finite = ProductElement::finite(vec![Exception {
        p: p0,
        value: vec![1; w.window.rank_at(p0) as usize],
    }]);
    Ok(SocleProbeReport {
        certificate_passed: w.certificate.passed,
        alpha_laws: alpha_law_probe(w, samples, 20, seed)?,
        sigma_units: sigma_unit_probe(w, samples.min(100), seed.wrapping_add(1))?,
        embedding: embedding_probe(w, samples.min(100), seed.wrapping_add(2))?,
        base_in_h1: product_membership(&a, Side::H1, w)?,
        sigma2_a_outside_h2: w.certificate.passed && !product_membership(&s2a, Side::H2, w)?,
        finite_support_in_h2: product_membership(&finite, Side::H2, w)?,
        tower: tower_check(w, m_max)?,
        note: "non-membership and the tower check hold relative to the window certificate; \
               non-isomorphism of H1 and H2 is not verified"
            .to_string(),
    })
}
