//! Bounded stand-in for choosing `(σ₁, σ₂)` outside every nowhere-dense set
//! `{q(σ, τ) ∈ F}`: each bounded nonzero `q` must be nonzero at no fewer than
//! `threshold` window primes.
//!
//! Small boxes are enumerated. Larger ones are split by pigeonhole: with
//! `threshold` disjoint blocks of primes, a `q` that is nonzero at fewer
//! than `threshold` primes vanishes on a whole block, hence is a relation
//! modulo that block's product and turns up in a meet-in-the-middle search.

use serde::{Deserialize, Serialize};

use super::{SigmaPair, SocleError};
use crate::arith;
use crate::padic::{IntPolynomial2, DEFAULT_SEARCH_BUDGET};
use crate::prime::Prime;
use crate::relation_search;

/// Boxes up to this size are enumerated outright.
const EXHAUSTIVE_BOX: f64 = 20_000.0;
/// Per-q counts are recorded only for this many polynomials.
const RECORDED_COUNTS: usize = 500;
/// Candidates per block before the block is declared inconclusive.
const BLOCK_LIMIT: usize = 100_000;
/// Cap on a block modulus, leaving headroom below `2^127`.
const BLOCK_MODULUS_CAP: u128 = 1 << 125;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QCount {
    pub q: String,
    pub nonzero_at: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSummary {
    pub primes: Vec<Prime>,
    /// Block relations found, each re-counted over the whole window.
    pub candidates: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum AvoidanceMode {
    Exhaustive {
        polynomials: usize,
        min_count: usize,
        /// Present when the box is small enough to list.
        counts: Option<Vec<QCount>>,
    },
    Blocks { blocks: Vec<BlockSummary> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvoidanceCertificate {
    pub degree: u32,
    pub height: u32,
    pub threshold: usize,
    pub window_size: usize,
    pub monomials: Vec<(u32, u32)>,
    pub passed: bool,
    pub mode: AvoidanceMode,
    /// The first polynomial found with too few nonzero primes.
    pub counterexample: Option<QCount>,
    pub tail_note: String,
}

/// `σ_p^i τ_p^j mod p` for every window prime and monomial.
fn value_table(window: &[Prime], pair: &SigmaPair, monos: &[(u32, u32)]) -> Vec<Vec<u64>> {
    window
        .iter()
        .map(|&p| {
            let (s, t) = (pair.sigma_at(p), pair.tau_at(p));
            monos
                .iter()
                .map(|&(i, j)| {
                    let pv = p.get();
                    arith::mod_pow(s, i as u64, pv) * arith::mod_pow(t, j as u64, pv) % pv
                })
                .collect()
        })
        .collect()
}

fn nonzero_count(window: &[Prime], table: &[Vec<u64>], c: &[i64]) -> usize {
    window
        .iter()
        .zip(table)
        .filter(|(p, row)| {
            let pv = p.get() as i128;
            let sum: i128 = row.iter().zip(c).map(|(&v, &ci)| v as i128 * ci as i128).sum();
            sum.rem_euclid(pv) != 0
        })
        .count()
}

fn describe(monos: &[(u32, u32)], c: &[i64], nonzero_at: usize) -> QCount {
    QCount {
        q: IntPolynomial2::from_terms(monos.iter().copied().zip(c.iter().copied()))
            .normalized_sign()
            .to_string(),
        nonzero_at,
    }
}

fn crt(residues: &[u64], primes: &[Prime]) -> u128 {
    let mut x: u128 = 0;
    let mut m: u128 = 1;
    for (&r, &p) in residues.iter().zip(primes) {
        let pv = p.get();
        // x + m·t ≡ r (mod p)
        let cur = (x % pv as u128) as u64;
        let diff = (r + pv - cur) % pv;
        let inv = arith::mod_inverse((m % pv as u128) as u64, pv).expect("coprime moduli");
        let t = diff as u128 * inv as u128 % pv as u128;
        x += m * t;
        m *= pv as u128;
    }
    x
}

/// Splits the window into `count` disjoint blocks, round robin, keeping each
/// product below the cap.
fn blocks(window: &[Prime], count: usize) -> Vec<Vec<Prime>> {
    let mut out: Vec<(Vec<Prime>, u128)> = vec![(Vec::new(), 1); count];
    for (n, &p) in window.iter().enumerate() {
        for shift in 0..count {
            let (primes, prod) = &mut out[(n + shift) % count];
            if let Some(next) = prod.checked_mul(p.get() as u128).filter(|&v| v < BLOCK_MODULUS_CAP) {
                primes.push(p);
                *prod = next;
                break;
            }
        }
    }
    out.into_iter().map(|(p, _)| p).collect()
}

/// Every nonzero `Σ c_m·m(σ, τ)` with `|c_m| ≤ height` (and `c_0 ≠ 0` when
/// `pin_first`) is nonzero at `threshold` or more window primes.
#[allow(clippy::too_many_arguments)]
pub(crate) fn certify(
    window: &[Prime],
    pair: &SigmaPair,
    monos: &[(u32, u32)],
    degree: u32,
    height: u32,
    threshold: usize,
    pin_first: bool,
) -> Result<AvoidanceCertificate, SocleError> {
    let space = (2.0 * height as f64 + 1.0).powi(monos.len() as i32);
    if space > DEFAULT_SEARCH_BUDGET {
        return Err(SocleError::BudgetExceeded {
            space,
            budget: DEFAULT_SEARCH_BUDGET,
        });
    }
    let table = value_table(window, pair, monos);
    let bound = height as i64;
    let mut counterexample = None;
    let mode = if space <= EXHAUSTIVE_BOX {
        let mut counts = Vec::new();
        let mut min_count = usize::MAX;
        let mut c = vec![-bound; monos.len()];
        loop {
            // One representative per ± pair: first nonzero coefficient positive.
            let lead = c.iter().find(|&&v| v != 0).copied();
            if lead.is_some_and(|l| l > 0) && (!pin_first || c[0] != 0) {
                let k = nonzero_count(window, &table, &c);
                min_count = min_count.min(k);
                if k < threshold && counterexample.is_none() {
                    counterexample = Some(describe(monos, &c, k));
                }
                counts.push(describe(monos, &c, k));
            }
            let mut i = 0;
            while i < c.len() && c[i] == bound {
                c[i] = -bound;
                i += 1;
            }
            if i == c.len() {
                break;
            }
            c[i] += 1;
        }
        let polynomials = counts.len();
        AvoidanceMode::Exhaustive {
            polynomials,
            min_count: if polynomials == 0 { 0 } else { min_count },
            counts: (polynomials <= RECORDED_COUNTS).then_some(counts),
        }
    } else {
        let mut summaries = Vec::new();
        for block in blocks(window, threshold) {
            let idx: Vec<usize> = block
                .iter()
                .map(|p| window.iter().position(|w| w == p).expect("block from window"))
                .collect();
            let modulus: u128 = block.iter().map(|p| p.get() as u128).product();
            let values: Vec<u128> = (0..monos.len())
                .map(|m| {
                    let res: Vec<u64> = idx.iter().map(|&r| table[r][m]).collect();
                    crt(&res, &block)
                })
                .collect();
            let found = relation_search::solve_box(&values, modulus, bound, BLOCK_LIMIT);
            if found.len() >= BLOCK_LIMIT && counterexample.is_none() {
                counterexample = Some(QCount {
                    q: format!("block {block:?} inconclusive after {BLOCK_LIMIT} relations"),
                    nonzero_at: 0,
                });
            }
            let mut candidates = 0;
            for c in found.iter().filter(|c| !pin_first || c[0] != 0) {
                candidates += 1;
                let k = nonzero_count(window, &table, c);
                if k < threshold && counterexample.is_none() {
                    counterexample = Some(describe(monos, c, k));
                }
            }
            summaries.push(BlockSummary {
                primes: block,
                candidates,
            });
        }
        AvoidanceMode::Blocks { blocks: summaries }
    };
    Ok(AvoidanceCertificate {
        degree,
        height,
        threshold,
        window_size: window.len(),
        monomials: monos.to_vec(),
        passed: counterexample.is_none(),
        mode,
        counterexample,
        tail_note: "primes beyond the window use the seeded rule and carry no guarantee".to_string(),
    })
}
