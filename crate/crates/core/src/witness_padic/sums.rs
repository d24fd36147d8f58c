//! Direct sums of p-adic witnesses over distinct primes, and their extension
//! by a cyclic part `C` and a divisible part `D`.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{build_padic_witness, sample_member, Side, WitnessError, WitnessPairDescriptor};
use crate::group_spec::{GroupSpec, SummandFamily};
use crate::padic::CertificateParams;
use crate::prime::Prime;

/// Components built for a p-adic prime family before the rest is elided.
pub const FAMILY_COMPONENTS: usize = 2;

const HEIGHT_SAMPLES: usize = 20;

/// Sampled nonzero members of `H₂` all have finite p-height, read as a
/// least coordinate valuation below the working precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightProbe {
    pub samples: usize,
    pub max_height: u32,
    pub bound: u32,
    pub finite: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumComponent {
    pub descriptor: WitnessPairDescriptor,
    pub height_probe: HeightProbe,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PAdicSumWitness {
    pub components: Vec<SumComponent>,
    pub rationale: String,
}

fn height_probe(w: &WitnessPairDescriptor, seed: u64) -> Result<HeightProbe, WitnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_height = 0u32;
    let mut finite = true;
    let mut taken = 0;
    while taken < HEIGHT_SAMPLES {
        let x = sample_member(w, Side::H2, &mut rng);
        if x.is_zero() {
            continue;
        }
        taken += 1;
        match w.min_valuation(&x)? {
            Some(v) if v >= 0 && (v as u32) + x.t() < w.precision => {
                max_height = max_height.max(v as u32)
            }
            _ => finite = false,
        }
    }
    Ok(HeightProbe {
        samples: HEIGHT_SAMPLES,
        max_height,
        bound: w.precision,
        finite,
    })
}

/// One witness pair per `(p_i, k_i)`; the sums `⊕ H_{i,1}` and `⊕ H_{i,2}`
/// form the counterexample.
pub fn assemble_padic_sum(
    pairs: &[(Prime, u32)],
    seed: u64,
    params: CertificateParams,
) -> Result<PAdicSumWitness, WitnessError> {
    if pairs.is_empty() {
        return Err(WitnessError::Empty);
    }
    let mut seen = BTreeSet::new();
    for &(p, _) in pairs {
        if !seen.insert(p) {
            return Err(WitnessError::DuplicatePrime(p));
        }
    }
    let components = pairs
        .iter()
        .map(|&(p, k)| {
            let descriptor = build_padic_witness(p, k, seed, params)?;
            let height_probe = height_probe(&descriptor, seed)?;
            Ok(SumComponent {
                descriptor,
                height_probe,
            })
        })
        .collect::<Result<Vec<_>, WitnessError>>()?;
    Ok(PAdicSumWitness {
        components,
        rationale: "a homomorphism between the sums sends each H_{i,1} into H_{i,2}: a nonzero \
                    projection onto another component would have infinite p_j-height, and every \
                    component is reduced"
            .to_string(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedWitness {
    pub k_part: GroupSpec,
    pub c_part: GroupSpec,
    pub d_part: GroupSpec,
    pub g0: String,
    pub g1: String,
    pub padic_sum: PAdicSumWitness,
    /// Family components not built explicitly.
    pub omitted: Vec<String>,
    pub rationale: String,
}

/// Witnesses `K₀ ⊕ C ⊕ D` and `K₁ ⊕ C ⊕ D`, with `K₀, K₁` from the p-adic
/// part of `spec`.
pub fn assemble_mixed(
    spec: &GroupSpec,
    seed: u64,
    params: CertificateParams,
) -> Result<MixedWitness, WitnessError> {
    let split = spec.split_reduced_divisible();
    if split.k.is_trivial() {
        return Err(WitnessError::NoKPart);
    }
    let mut pairs = Vec::new();
    let mut omitted = Vec::new();
    for e in split.k.entries() {
        let k = e
            .mult
            .finite()
            .and_then(|m| u32::try_from(m).ok())
            .ok_or_else(|| WitnessError::InfiniteRank(e.family.to_string()))?;
        match &e.family {
            SummandFamily::PAdicComplete { p } => pairs.push((*p, k)),
            SummandFamily::PAdicPrimeFamily { primes } => {
                let built = primes.first(FAMILY_COMPONENTS);
                pairs.extend(built.iter().map(|&p| (p, k)));
                omitted.push(format!(
                    "Zhat(p)^{k} for p in {primes} beyond {}",
                    built.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
                ));
            }
            _ => unreachable!("k part holds p-adic entries only"),
        }
    }
    let padic_sum = assemble_padic_sum(&pairs, seed, params)?;
    let with_rest = |name: &str| {
        let mut parts = vec![name.to_string()];
        for s in [&split.c, &split.d] {
            if !s.is_trivial() {
                parts.push(s.to_string());
            }
        }
        parts.join(" + ")
    };
    Ok(MixedWitness {
        g0: with_rest("K0"),
        g1: with_rest("K1"),
        k_part: split.k,
        c_part: split.c,
        d_part: split.d,
        padic_sum,
        omitted,
        rationale: "an isomorphism G0 -> G1 maps D onto D, and as K0, K1 are torsion-free it \
                    induces K0 ~= K1, which the component witnesses rule out"
            .to_string(),
    })
}
