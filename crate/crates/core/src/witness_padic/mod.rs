//! Bi-embeddable, non-isomorphic pure subgroups `H₁, H₂` of `\hat ℤ_(p)^k`.
//!
//! `H_ℓ` is the envelope (smallest pure subgroup) of the span of a grid of
//! monomials `γ₁^i γ₂^j e_s`. Envelope elements are kept exactly as
//! `p^{-t}·Σ a_m·m` with `a_m ∈ ℤ_(p)`. Truncating them mod `p^N` would lose
//! the grid, since the integers are dense in `ℤ/p^N`.
//!
//! Grid membership relies on the monomials being independent; that is only
//! known up to the degree and height of the independence certificate, so
//! every negative membership answer is relative to it.

mod sums;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::padic::{
    independence_certificate, matrix_limit_inverse, CertificateParams, IndependenceCertificate,
    IntPolynomial2, MatrixModPk, PAdicApprox, PAdicError, PAdicLazy, DEFAULT_SEARCH_BUDGET,
};
use crate::prime::Prime;
use crate::relation_search;

pub use sums::{assemble_padic_sum, assemble_mixed, SumComponent, PAdicSumWitness, MixedWitness, HeightProbe};

/// Fresh seeds tried before giving up on a certificate.
pub const MAX_SEED_ATTEMPTS: u64 = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WitnessError {
    #[error("rank k must be at least 1")]
    ZeroRank,
    #[error("no independence certificate passed after {attempts} seeds")]
    CertificateFailed { attempts: u64 },
    #[error(transparent)]
    PAdic(#[from] PAdicError),
    #[error("denominator p^{t} needs precision above {t}, have {precision}")]
    PrecisionInsufficient { t: u32, precision: u32 },
    #[error("element is over p = {found}, witness is over p = {expected}")]
    WrongPrime { expected: Prime, found: Prime },
    #[error("coordinate {s} outside 1..={k}")]
    CoordinateOutOfRange { s: u32, k: u32 },
    #[error("scalar is not a p-adic unit")]
    NonUnit,
    #[error("prime {0} occurs twice")]
    DuplicatePrime(Prime),
    #[error("no components given")]
    Empty,
    #[error("the spec has no p-adic summand")]
    NoKPart,
    #[error("p-adic summand {0} has infinite multiplicity")]
    InfiniteRank(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    H1,
    H2,
}

impl Side {
    /// `K₁` uses every `(i, j)`; `K₂` drops the first column below `(0, 0)`.
    pub fn grid_contains(self, i: u32, j: u32) -> bool {
        match self {
            Side::H1 => true,
            Side::H2 => i >= 1 || (i == 0 && j == 0),
        }
    }

    fn generators(self) -> &'static str {
        match self {
            Side::H1 => "gamma1^i gamma2^j e_s for all i, j >= 0",
            Side::H2 => "e_s, and gamma1^i gamma2^j e_s for i >= 1, j >= 0",
        }
    }
}

/// `γ₁^i γ₂^j e_s`, with `s` counted from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridMonomial {
    pub i: u32,
    pub j: u32,
    pub s: u32,
}

impl GridMonomial {
    pub fn new(i: u32, j: u32, s: u32) -> Self {
        GridMonomial { i, j, s }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridTerm {
    #[serde(flatten)]
    pub monomial: GridMonomial,
    #[serde(with = "crate::decimal::rational")]
    pub coeff: BigRational,
}

/// `p^{-t}·Σ a_m·m` with every `a_m ∈ ℤ_(p)` and, when `t > 0`, some `a_m` a
/// p-adic unit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGridElement")]
pub struct GridElement {
    p: Prime,
    t: u32,
    terms: Vec<GridTerm>,
}

#[derive(Deserialize)]
struct RawGridElement {
    p: Prime,
    t: u32,
    terms: Vec<GridTerm>,
}

impl TryFrom<RawGridElement> for GridElement {
    type Error = std::convert::Infallible;

    fn try_from(raw: RawGridElement) -> Result<Self, Self::Error> {
        Ok(GridElement::new(
            raw.p,
            raw.t,
            raw.terms.into_iter().map(|t| (t.monomial, t.coeff)),
        ))
    }
}

fn rational_valuation(c: &BigRational, p: Prime) -> i64 {
    let v = |n: &BigInt| arith::valuation_big(n, p.get()).unwrap_or(0) as i64;
    v(c.numer()) - v(c.denom())
}

fn p_power(p: Prime, e: i64) -> BigRational {
    let m = BigRational::from_integer(arith::big_pow(p.get(), e.unsigned_abs() as u32).into());
    if e >= 0 {
        m
    } else {
        m.recip()
    }
}

impl GridElement {
    /// The canonical form of `p^{-t}·Σ c_m·m` for arbitrary rational `c_m`;
    /// powers of `p` in the coefficients move into `t`.
    pub fn new<I>(p: Prime, t: u32, coeffs: I) -> Self
    where
        I: IntoIterator<Item = (GridMonomial, BigRational)>,
    {
        let mut merged: BTreeMap<GridMonomial, BigRational> = BTreeMap::new();
        for (m, c) in coeffs {
            *merged.entry(m).or_insert_with(BigRational::zero) += c;
        }
        merged.retain(|_, c| !c.is_zero());
        let Some(min_v) = merged.values().map(|c| rational_valuation(c, p)).min() else {
            return GridElement::zero(p);
        };
        let shift = min_v.min(t as i64);
        let factor = p_power(p, -shift);
        let terms = merged
            .into_iter()
            .map(|(monomial, c)| GridTerm {
                monomial,
                coeff: c * &factor,
            })
            .collect();
        GridElement {
            p,
            t: (t as i64 - shift) as u32,
            terms,
        }
    }

    pub fn zero(p: Prime) -> Self {
        GridElement {
            p,
            t: 0,
            terms: Vec::new(),
        }
    }

    pub fn monomial(p: Prime, i: u32, j: u32, s: u32) -> Self {
        Self::new(p, 0, [(GridMonomial::new(i, j, s), BigRational::one())])
    }

    /// The unit vector `e_s`.
    pub fn basis(p: Prime, s: u32) -> Self {
        Self::monomial(p, 0, 0, s)
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn terms(&self) -> &[GridTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn coeff_map(&self) -> impl Iterator<Item = (GridMonomial, BigRational)> + '_ {
        self.terms.iter().map(|t| (t.monomial, t.coeff.clone()))
    }

    pub fn add(&self, other: &Self) -> Result<Self, WitnessError> {
        if self.p != other.p {
            return Err(WitnessError::WrongPrime {
                expected: self.p,
                found: other.p,
            });
        }
        let t = self.t.max(other.t);
        let lift = |x: &GridElement| {
            let f = p_power(x.p, (t - x.t) as i64);
            x.coeff_map().map(move |(m, c)| (m, c * &f)).collect::<Vec<_>>()
        };
        Ok(Self::new(self.p, t, lift(self).into_iter().chain(lift(other))))
    }

    /// `p^{-e}·x`, the unique solution of `p^e·y = x` in the torsion-free group.
    pub fn divide_by_p_power(&self, e: u32) -> Self {
        Self::new(self.p, self.t + e, self.coeff_map())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.p, self.t, self.coeff_map().map(|(m, a)| (m, a * c)))
    }

    pub fn supported_on(&self, side: Side) -> bool {
        self.terms
            .iter()
            .all(|t| side.grid_contains(t.monomial.i, t.monomial.j))
    }
}

/// Scalars whose multiplication maps are applied to grid elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Scalar {
    /// `γ₁^i γ₂^j`.
    Monomial { i: u32, j: u32 },
    /// A rational p-adic unit.
    Rational {
        #[serde(with = "crate::decimal::rational")]
        value: BigRational,
    },
}

impl Scalar {
    pub fn gamma1() -> Self {
        Scalar::Monomial { i: 1, j: 0 }
    }

    pub fn gamma2() -> Self {
        Scalar::Monomial { i: 0, j: 1 }
    }

    pub fn one() -> Self {
        Scalar::Monomial { i: 0, j: 0 }
    }
}

/// `σ_α(x) = α·x`.
pub fn apply_scalar_sigma(alpha: &Scalar, x: &GridElement) -> Result<GridElement, WitnessError> {
    match alpha {
        Scalar::Monomial { i, j } => Ok(GridElement::new(
            x.p,
            x.t,
            x.coeff_map()
                .map(|(m, c)| (GridMonomial::new(m.i + i, m.j + j, m.s), c)),
        )),
        Scalar::Rational { value } => {
            if value.is_zero() || rational_valuation(value, x.p) != 0 {
                return Err(WitnessError::NonUnit);
            }
            Ok(x.scale(value))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridShape {
    pub side: Side,
    pub generators: String,
}

impl From<Side> for GridShape {
    fn from(side: Side) -> Self {
        GridShape {
            side,
            generators: side.generators().to_string(),
        }
    }
}

/// A seed whose pair was rejected, with the relation that sank it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectedSeed {
    pub seed: u64,
    pub relation: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessPairDescriptor {
    pub p: Prime,
    pub k: u32,
    /// Seed of the accepted pair.
    pub seed: u64,
    pub rejected_seeds: Vec<RejectedSeed>,
    pub gamma1: PAdicLazy,
    pub gamma2: PAdicLazy,
    pub precision: u32,
    pub certificate: IndependenceCertificate,
    pub h1_grid: GridShape,
    pub h2_grid: GridShape,
}

/// Picks seeded units `γ₁, γ₂` that pass the independence certificate,
/// moving to the next seed when a relation turns up.
pub fn build_padic_witness(
    p: Prime,
    k: u32,
    seed: u64,
    params: CertificateParams,
) -> Result<WitnessPairDescriptor, WitnessError> {
    if k == 0 {
        return Err(WitnessError::ZeroRank);
    }
    let mut rejected_seeds = Vec::new();
    for attempt in 0..MAX_SEED_ATTEMPTS {
        let s = seed.wrapping_add(attempt);
        let gamma1 = PAdicLazy::seeded(p, s, 1);
        let gamma2 = PAdicLazy::seeded(p, s, 2);
        let certificate = independence_certificate(&gamma1, &gamma2, params)?;
        if let Some(q) = certificate.relation() {
            rejected_seeds.push(RejectedSeed {
                seed: s,
                relation: q.to_string(),
            });
            continue;
        }
        return Ok(WitnessPairDescriptor {
            p,
            k,
            seed: s,
            rejected_seeds,
            gamma1,
            gamma2,
            precision: params.precision,
            certificate,
            h1_grid: Side::H1.into(),
            h2_grid: Side::H2.into(),
        });
    }
    Err(WitnessError::CertificateFailed {
        attempts: MAX_SEED_ATTEMPTS,
    })
}

impl WitnessPairDescriptor {
    fn check(&self, x: &GridElement) -> Result<(), WitnessError> {
        if x.p != self.p {
            return Err(WitnessError::WrongPrime {
                expected: self.p,
                found: x.p,
            });
        }
        for t in &x.terms {
            if t.monomial.s == 0 || t.monomial.s > self.k {
                return Err(WitnessError::CoordinateOutOfRange {
                    s: t.monomial.s,
                    k: self.k,
                });
            }
        }
        Ok(())
    }

    /// `p^t·x_s mod p^N` for each coordinate `s`; these are p-adic integers.
    pub fn scaled_coordinates(&self, x: &GridElement) -> Result<Vec<BigUint>, WitnessError> {
        self.check(x)?;
        let n = self.precision;
        let modulus = arith::big_pow(self.p.get(), n);
        let (g1, g2) = (self.gamma1.truncate(n), self.gamma2.truncate(n));
        let mut out = vec![BigUint::zero(); self.k as usize];
        for t in &x.terms {
            let m = t.monomial;
            let a = PAdicApprox::from_rational(
                self.p,
                n,
                t.coeff.numer(),
                &t.coeff.denom().magnitude().clone(),
            )?;
            let mono = g1.modpow(&m.i.into(), &modulus) * g2.modpow(&m.j.into(), &modulus);
            let slot = &mut out[(m.s - 1) as usize];
            *slot = (&*slot + a.residue * mono) % &modulus;
        }
        Ok(out)
    }

    /// Least p-adic valuation of the coordinates of `x`, or `None` when every
    /// coordinate vanishes at the working precision.
    pub fn min_valuation(&self, x: &GridElement) -> Result<Option<i64>, WitnessError> {
        let coords = self.scaled_coordinates(x)?;
        Ok(coords
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| {
                arith::valuation_big(&BigInt::from(c.clone()), self.p.get()).expect("nonzero") as i64
                    - x.t as i64
            })
            .min())
    }

    /// Whether `x` is an element of `\hat ℤ_(p)^k` at all.
    pub fn in_ambient(&self, x: &GridElement) -> Result<bool, WitnessError> {
        if x.t >= self.precision {
            return Err(WitnessError::PrecisionInsufficient {
                t: x.t,
                precision: self.precision,
            });
        }
        let pt = arith::big_pow(self.p.get(), x.t);
        Ok(self
            .scaled_coordinates(x)?
            .iter()
            .all(|c| (c % &pt).is_zero()))
    }

    fn certificate_params(&self) -> CertificateParams {
        CertificateParams::new(self.certificate.degree, self.certificate.height, self.precision)
    }
}

/// Membership of `x` in `H₁` or `H₂`, read at the descriptor's precision.
pub fn grid_membership(
    x: &GridElement,
    side: Side,
    w: &WitnessPairDescriptor,
) -> Result<bool, WitnessError> {
    w.check(x)?;
    let inside = w.in_ambient(x)?;
    Ok(inside && x.supported_on(side))
}

/// A random member of `H_ℓ`: a small grid combination over `p^t`, with the
/// constant terms adjusted so that each coordinate is divisible by `p^t`.
pub fn sample_member<R: Rng>(w: &WitnessPairDescriptor, side: Side, rng: &mut R) -> GridElement {
    let p = w.p;
    let t = rng.random_range(0..=3u32.min(w.precision.saturating_sub(1)));
    let dens: Vec<i64> = (1..=4).filter(|d| d % p.get() as i64 != 0).collect();
    let mut coeffs = Vec::new();
    for s in 1..=w.k {
        for _ in 0..rng.random_range(1..=4) {
            let (i, j) = loop {
                let (i, j) = (rng.random_range(0..=3), rng.random_range(0..=3));
                if side.grid_contains(i, j) {
                    break (i, j);
                }
            };
            let num = rng.random_range(-5..=5i64);
            let den = dens[rng.random_range(0..dens.len())];
            coeffs.push((GridMonomial::new(i, j, s), BigRational::new(num.into(), den.into())));
        }
    }
    let draft = GridElement::new(p, 0, coeffs.clone());
    let coords = w.scaled_coordinates(&draft).expect("coordinates in range");
    let pt = arith::big_pow(p.get(), t);
    for (idx, c) in coords.iter().enumerate() {
        let r = c % &pt;
        if !r.is_zero() {
            let fix = BigInt::from(&pt - r);
            coeffs.push((GridMonomial::new(0, 0, idx as u32 + 1), BigRational::from_integer(fix)));
        }
    }
    GridElement::new(p, t, coeffs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeResult {
    pub samples: usize,
    pub holds: bool,
    pub failures: Vec<String>,
}

impl ProbeResult {
    fn collect(samples: usize, failures: Vec<String>) -> Self {
        ProbeResult {
            samples,
            holds: failures.is_empty(),
            failures,
        }
    }
}

/// `σ_{γ₁}` maps sampled members of `H₁` into `H₂`.
pub fn sigma_inclusion_probe(
    w: &WitnessPairDescriptor,
    samples: usize,
    seed: u64,
) -> Result<ProbeResult, WitnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for n in 0..samples {
        let x = sample_member(w, Side::H1, &mut rng);
        if !grid_membership(&x, Side::H1, w)? {
            failures.push(format!("sample {n} is not in H1"));
            continue;
        }
        let y = apply_scalar_sigma(&Scalar::gamma1(), &x)?;
        if !grid_membership(&y, Side::H2, w)? {
            failures.push(format!("sample {n}: sigma(x) is not in H2"));
        }
    }
    Ok(ProbeResult::collect(samples, failures))
}

/// Sampled members of `H₂` lie in `H₁`.
pub fn reverse_inclusion_probe(
    w: &WitnessPairDescriptor,
    samples: usize,
    seed: u64,
) -> Result<ProbeResult, WitnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for n in 0..samples {
        let x = sample_member(w, Side::H2, &mut rng);
        if !grid_membership(&x, Side::H2, w)? || !grid_membership(&x, Side::H1, w)? {
            failures.push(format!("sample {n} is not in both H2 and H1"));
        }
    }
    Ok(ProbeResult::collect(samples, failures))
}

/// For sampled members `x` and the largest `e` with `p^e` dividing every
/// coordinate, `p^{-e}x` is again a member and `p^{-e-1}x` is not in the
/// ambient group.
pub fn purity_probe(
    w: &WitnessPairDescriptor,
    side: Side,
    samples: usize,
    seed: u64,
) -> Result<ProbeResult, WitnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for n in 0..samples {
        let x = sample_member(w, side, &mut rng);
        let room = (w.precision - 1 - x.t) as i64;
        let (e, exact) = match w.min_valuation(&x)? {
            Some(v) if v < room => (v, true),
            _ => (room, false),
        };
        if e < 0 {
            failures.push(format!("sample {n} is not in the ambient group"));
            continue;
        }
        let y = x.divide_by_p_power(e as u32);
        if !grid_membership(&y, side, w)? {
            failures.push(format!("sample {n}: p^-{e} x is not a member"));
        }
        if exact && y.t + 1 < w.precision && w.in_ambient(&y.divide_by_p_power(1))? {
            failures.push(format!("sample {n}: p^-{} x is in the ambient group", e + 1));
        }
    }
    Ok(ProbeResult::collect(samples, failures))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixProbe {
    pub k: u32,
    pub levels: u32,
    pub inverse_at_every_level: bool,
}

/// Builds the map `γ₁·(I + e₁₂)` (just `γ₁` when `k = 1`) level by level and
/// checks `A_n·B_n = I` for the limit inverse at every `n ≤ N`.
pub fn matrix_probe(w: &WitnessPairDescriptor) -> Result<MatrixProbe, WitnessError> {
    let k = w.k as usize;
    let seq: Vec<MatrixModPk> = (1..=w.precision)
        .map(|n| {
            let g = w.gamma1.truncate(n);
            let mut entries = vec![BigUint::zero(); k * k];
            for i in 0..k {
                entries[i * k + i] = g.clone();
            }
            if k >= 2 {
                entries[1] = g.clone();
            }
            MatrixModPk::new(w.p, n, k, entries)
        })
        .collect::<Result<_, _>>()?;
    let inv = matrix_limit_inverse(&seq)?;
    let ok = seq
        .iter()
        .zip(&inv)
        .all(|(a, b)| a.mul(b).map(|m| m.is_identity()).unwrap_or(false));
    Ok(MatrixProbe {
        k: w.k,
        levels: w.precision,
        inverse_at_every_level: ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerCheck {
    pub m: u32,
    pub monomials: usize,
    pub holds: bool,
    pub relation: Option<String>,
}

/// For each `m ≤ m_max`, searches for a relation that writes `γ₁γ₂^{m+1}`
/// through products of at most `d` of `γ₁, γ₁γ₂, …, γ₁γ₂^m`, with
/// coefficients bounded by the certificate height.
pub fn tower_check(w: &WitnessPairDescriptor, m_max: u32) -> Result<Vec<TowerCheck>, WitnessError> {
    let params = w.certificate_params();
    let p = w.p.get();
    let n = w.precision;
    let search_n = n.min(arith::max_power_below(p, 1u128 << 126));
    let small = arith::big_pow(p, search_n);
    let small_u = small.to_u128().expect("below 2^126");
    let full = arith::big_pow(p, n);
    let (x_full, y_full) = (w.gamma1.truncate(n), w.gamma2.truncate(n));
    let (x, y) = (&x_full % &small, &y_full % &small);
    let mut out = Vec::new();
    for m in 0..=m_max {
        let monos = relation_search::tower_monomials(params.degree, m);
        let space = (2.0 * params.height as f64 + 1.0).powi(monos.len() as i32);
        if space > DEFAULT_SEARCH_BUDGET {
            return Err(PAdicError::BudgetExceeded {
                space,
                budget: DEFAULT_SEARCH_BUDGET,
            }
            .into());
        }
        let values: Vec<u128> = monos
            .iter()
            .map(|&(i, j)| {
                (x.modpow(&i.into(), &small) * y.modpow(&j.into(), &small) % &small)
                    .to_u128()
                    .expect("reduced")
            })
            .collect();
        let relation = relation_search::solve_box(&values, small_u, params.height as i64, 10_000)
            .into_iter()
            .filter(|c| c[0] != 0)
            .map(|c| IntPolynomial2::from_terms(monos.iter().copied().zip(c)).normalized_sign())
            .filter(|q| q.eval_mod(&x_full, &y_full, &full).is_zero())
            .min_by(|a, b| a.simplicity_cmp(b));
        out.push(TowerCheck {
            m,
            monomials: monos.len(),
            holds: relation.is_none(),
            relation: relation.map(|q| q.to_string()),
        });
    }
    Ok(out)
}

/// Every probe on one descriptor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PAdicProbeReport {
    pub certificate_passed: bool,
    pub sigma_inclusion: ProbeResult,
    pub reverse_inclusion: ProbeResult,
    /// `γ₂e₁ ∉ H₂`, relative to the certificate.
    pub gamma2_e1_outside_h2: bool,
    pub purity_h1: ProbeResult,
    pub purity_h2: ProbeResult,
    pub matrix: MatrixProbe,
    pub tower: Vec<TowerCheck>,
    pub note: String,
}

impl PAdicProbeReport {
    pub fn all_hold(&self) -> bool {
        self.certificate_passed
            && self.sigma_inclusion.holds
            && self.reverse_inclusion.holds
            && self.gamma2_e1_outside_h2
            && self.purity_h1.holds
            && self.purity_h2.holds
            && self.matrix.inverse_at_every_level
            && self.tower.iter().all(|t| t.holds)
    }
}

pub fn probe_padic_witness(
    w: &WitnessPairDescriptor,
    samples: usize,
    seed: u64,
    m_max: u32,
) -> Result<PAdicProbeReport, WitnessError> {
    let g2e1 = GridElement::monomial(w.p, 0, 1, 1);
    Ok(PAdicProbeReport {
        certificate_passed: w.certificate.passed(),
        sigma_inclusion: sigma_inclusion_probe(w, samples, seed)?,
        reverse_inclusion: reverse_inclusion_probe(w, samples, seed.wrapping_add(1))?,
        gamma2_e1_outside_h2: w.certificate.passed() && !grid_membership(&g2e1, Side::H2, w)?,
        purity_h1: purity_probe(w, Side::H1, samples, seed.wrapping_add(2))?,
        purity_h2: purity_probe(w, Side::H2, samples, seed.wrapping_add(3))?,
        matrix: matrix_probe(w)?,
        tower: tower_check(w, m_max)?,
        note: "non-membership and the tower check hold relative to the bounded certificate; \
               non-isomorphism of H1 and H2 is not verified"
            .to_string(),
    })
}
