//! From a reduced torsion group with unbounded cyclic orders to a socle
//! witness, one recorded step at a time.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{socle_witness_build, BasePoint, PrimeWindow, SearchSpace, SocleBounds, SocleError, SocleWitness};
use crate::arith;
use crate::classify::{self, StabilityClass};
use crate::group_spec::{GroupSpec, SummandFamily};
use crate::prime::{Prime, PrimeSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptStep {
    pub index: u32,
    pub name: String,
    pub detail: String,
    pub spec: Option<GroupSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTranscript {
    pub input: GroupSpec,
    pub steps: Vec<TranscriptStep>,
    pub modulus: u64,
    pub bounded_part: GroupSpec,
    pub socle: GroupSpec,
    pub divisible_part: GroupSpec,
    pub witness: SocleWitness,
    pub notes: Vec<String>,
}

/// `M = ∏ p^{k'}` over primes carrying a cyclic type of infinite
/// multiplicity, `k'` the largest exponent at `p`.
fn split_modulus(c: &GroupSpec) -> Result<u64, SocleError> {
    let heavy: BTreeSet<Prime> = c
        .entries()
        .iter()
        .filter_map(|e| match e.family {
            SummandFamily::Cyclic { p, .. } if e.mult.is_infinite() => Some(p),
            _ => None,
        })
        .collect();
    let mut m: u64 = 1;
    for p in heavy {
        let k = c
            .entries()
            .iter()
            .filter_map(|e| match &e.family {
                SummandFamily::Cyclic { p: q, k } if *q == p => Some(*k),
                SummandFamily::CyclicPrimeFamily { primes, k } if primes.contains(p) => Some(*k),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        m = arith::checked_prime_power(p.get(), k)
            .and_then(|pk| m.checked_mul(pk))
            .ok_or_else(|| SocleError::NotApplicable("the modulus M does not fit in 64 bits".into()))?;
    }
    Ok(m)
}

/// `S` and the ranks `r_p` of a socle `⊕_{p∈S} (ℤ/p)^{r_p}`.
fn socle_window(socle: &GroupSpec, size: usize) -> Result<PrimeWindow, SocleError> {
    let mut family: Option<(BTreeSet<Prime>, u32)> = None;
    let mut singles: Vec<(Prime, u32)> = Vec::new();
    let finite = |e: &crate::group_spec::Entry| {
        e.mult
            .finite()
            .and_then(|m| u32::try_from(m).ok())
            .ok_or_else(|| SocleError::NotSuperstable(format!("{} has infinite multiplicity", e.family)))
    };
    for e in socle.entries() {
        match &e.family {
            SummandFamily::CyclicPrimeFamily { primes: PrimeSet::Cofinite(ex), .. } => {
                family = Some((ex.clone(), finite(e)?));
            }
            SummandFamily::Cyclic { p, .. } => singles.push((*p, finite(e)?)),
            _ => return Err(SocleError::NotApplicable(format!("unexpected socle entry {}", e.family))),
        }
    }
    let (excluded, rank) =
        family.ok_or_else(|| SocleError::NotApplicable("the socle has finitely many primes".into()))?;
    let set = PrimeSet::all_except(excluded.into_iter().filter(|p| !singles.iter().any(|(q, _)| q == p)));
    let mut pw = PrimeWindow::new(set, size, rank)?;
    for (p, r) in singles {
        pw = pw.with_rank(p, r)?;
    }
    Ok(pw)
}

/// Reduces to `⊕_{p∈S} (ℤ/p)^{r_p}` and builds the socle witness there.
pub fn reduce_unbounded(
    spec: &GroupSpec,
    seed: u64,
    bounds: SocleBounds,
    window: usize,
) -> Result<ReductionTranscript, SocleError> {
    if classify::stability_class(spec) == StabilityClass::NotSuperstable {
        return Err(SocleError::NotSuperstable(classify::has_sb(spec).reason));
    }
    let split = spec.split_reduced_divisible();
    if !split.k.is_trivial() {
        return Err(SocleError::NotApplicable(
            "p-adic summands are handled by the p-adic witness".into(),
        ));
    }
    if !split.c.entries().iter().any(|e| e.family.is_infinite_family()) {
        return Err(SocleError::NotApplicable(
            "the torsion part has bounded exponent".into(),
        ));
    }
    let mut steps = vec![TranscriptStep {
        index: 1,
        name: "bounded exponents per prime".into(),
        detail: "no prime carries cyclic summands of unbounded order, so the group is superstable \
                 and the reduction applies"
            .into(),
        spec: Some(split.c.clone()),
    }];

    let modulus = split_modulus(&split.c)?;
    let ms = split
        .c
        .m_split(modulus)
        .map_err(|e| SocleError::NotApplicable(e.to_string()))?;
    steps.push(TranscriptStep {
        index: 2,
        name: "M-split".into(),
        detail: if modulus == 1 {
            "every cyclic type has finite multiplicity; M = 1 and nothing is split off".into()
        } else {
            format!(
                "M = {modulus}: G = G[M] + MG with G[M] = {}; witnesses for MG extend by G[M]",
                ms.cyclic_torsion
            )
        },
        spec: Some(ms.complement.clone()),
    });

    let socle = ms.complement.socle();
    steps.push(TranscriptStep {
        index: 3,
        name: "socle".into(),
        detail: if socle == ms.complement {
            "the group is already its own socle".into()
        } else {
            format!("socle of {} is {}", ms.complement, socle)
        },
        spec: Some(socle.clone()),
    });

    let pw = socle_window(&socle, window)?;
    let witness = socle_witness_build(&pw, seed, bounds, BasePoint::default(), SearchSpace::Free)?;
    steps.push(TranscriptStep {
        index: 4,
        name: "socle witness".into(),
        detail: format!(
            "H1, H2 inside the product over S = {} with a {}-prime window",
            pw.set,
            pw.window.len()
        ),
        spec: None,
    });
    steps.push(TranscriptStep {
        index: 5,
        name: "lift".into(),
        detail: "each H_l is the socle of a unique least pure subgroup K_l of the product of the \
                 cyclic summands containing G; K_1, K_2 are purely bi-embeddable and not \
                 isomorphic since their socles are not (recorded, not constructed)"
            .into(),
        spec: None,
    });
    let mut notes = Vec::new();
    if !split.d.is_trivial() {
        notes.push(format!(
            "divisible part {} is added unchanged to both sides",
            split.d
        ));
    }
    notes.push(
        "the torsion-recovery set C_l is read as: g outside the divisible part such that for \
         every n there are torsion a_i with g - a_i divisible by n"
            .into(),
    );
    Ok(ReductionTranscript {
        input: spec.clone(),
        steps,
        modulus,
        bounded_part: ms.cyclic_torsion,
        socle,
        divisible_part: split.d,
        witness,
        notes,
    })
}
