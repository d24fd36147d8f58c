use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{IntPolynomial2, LazySource, PAdicError, PAdicLazy};
use crate::arith;
use crate::prime::Prime;
use crate::relation_search;

/// Largest search space `(2B+1)^{(d+1)^2}` accepted by default.
pub const DEFAULT_SEARCH_BUDGET: f64 = 1e13;

/// Solutions collected per search stage before the simplest one is chosen.
const STAGE_LIMIT: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateParams {
    /// Bound on the degree in each variable.
    pub degree: u32,
    /// Bound on the absolute value of every coefficient.
    pub height: u32,
    pub precision: u32,
    pub budget: f64,
}

impl CertificateParams {
    pub fn new(degree: u32, height: u32, precision: u32) -> Self {
        CertificateParams {
            degree,
            height,
            precision,
            budget: DEFAULT_SEARCH_BUDGET,
        }
    }

    pub fn search_space(&self) -> f64 {
        let monomials = ((self.degree + 1) * (self.degree + 1)) as f64;
        (2.0 * self.height as f64 + 1.0).powf(monomials)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum Verdict {
    Pass,
    Fail {
        relation: IntPolynomial2,
        relation_text: String,
    },
}

/// Outcome of searching for a polynomial relation between two p-adic units.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndependenceCertificate {
    pub p: Prime,
    pub gamma1: LazySource,
    pub gamma2: LazySource,
    pub degree: u32,
    pub height: u32,
    pub precision: u32,
    /// Precision of the word-sized search before candidates are re-checked
    /// at full precision.
    pub search_precision: u32,
    pub search_space: f64,
    pub verdict: Verdict,
}

impl IndependenceCertificate {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn relation(&self) -> Option<&IntPolynomial2> {
        match &self.verdict {
            Verdict::Pass => None,
            Verdict::Fail { relation, .. } => Some(relation),
        }
    }
}

/// Searches for a nonzero `q` with per-variable degree `≤ d`, coefficients in
/// `[−B, B]` and `v_p(q(γ₁, γ₂)) ≥ N`. The search runs in stages of growing
/// degree and height and reports the simplest relation of the first stage
/// that has one.
pub fn independence_certificate(
    g1: &PAdicLazy,
    g2: &PAdicLazy,
    params: CertificateParams,
) -> Result<IndependenceCertificate, PAdicError> {
    if g1.p != g2.p {
        return Err(PAdicError::PrecisionMismatch);
    }
    if params.precision == 0 {
        return Err(PAdicError::ZeroPrecision);
    }
    let space = params.search_space();
    if space > params.budget {
        return Err(PAdicError::BudgetExceeded {
            space,
            budget: params.budget,
        });
    }
    if !g1.is_unit() || !g2.is_unit() {
        return Err(PAdicError::NonUnit);
    }
    let p = g1.p;
    let n = params.precision;
    let search_precision = n.min(arith::max_power_below(p.get(), 1u128 << 126));
    let small_mod = arith::big_pow(p.get(), search_precision);
    let small_mod_u = small_mod.to_u128().expect("below 2^126");
    let full_mod = arith::big_pow(p.get(), n);
    let (x_full, y_full) = (g1.truncate(n), g2.truncate(n));
    let (x, y) = (&x_full % &small_mod, &y_full % &small_mod);

    let mut verdict = Verdict::Pass;
    'stages: for d in 0..=params.degree {
        let monomials: Vec<(u32, u32)> = (0..=d).flat_map(|i| (0..=d).map(move |j| (i, j))).collect();
        let values: Vec<u128> = monomials
            .iter()
            .map(|&(i, j)| {
                let v = x.modpow(&i.into(), &small_mod) * y.modpow(&j.into(), &small_mod) % &small_mod;
                v.to_u128().expect("reduced")
            })
            .collect();
        for b in 1..=params.height {
            let candidates =
                relation_search::solve_box(&values, small_mod_u, b as i64, STAGE_LIMIT);
            let best = candidates
                .into_iter()
                .map(|c| {
                    IntPolynomial2::from_terms(monomials.iter().copied().zip(c)).normalized_sign()
                })
                .filter(|q| !q.is_zero())
                .filter(|q| num_traits::Zero::is_zero(&q.eval_mod(&x_full, &y_full, &full_mod)))
                .min_by(|a, b| a.simplicity_cmp(b));
            if let Some(q) = best {
                verdict = Verdict::Fail {
                    relation_text: q.to_string(),
                    relation: q,
                };
                break 'stages;
            }
        }
    }
    Ok(IndependenceCertificate {
        p,
        gamma1: g1.source.clone(),
        gamma2: g2.source.clone(),
        degree: params.degree,
        height: params.height,
        precision: n,
        search_precision,
        search_space: space,
        verdict,
    })
}
