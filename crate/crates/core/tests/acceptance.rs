//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints one PASS/FAIL line; exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use abelian_sb::classify::{self, SbRoute, StabilityClass};
use abelian_sb::finite_oracle::{self, FiniteAbelianGroup, PurityOracle};
use abelian_sb::invariants;
use abelian_sb::padic::{self, CertificateParams, PAdicApprox};
use abelian_sb::witness_padic;
use abelian_sb::witness_socle::{self, BasePoint, PrimeWindow, SearchSpace, SocleBounds};
use abelian_sb::{Cardinal, GroupSpec, PrimeSet};
use common::*;
use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ulm_agreement() -> Outcome {
    let mut groups = 0;
    let mut checks = 0;
    for q in abelian_sb::arith::primes().take_while(|&q| q <= 1024) {
        let q = p(q);
        let mut n = 1;
        while q.get().pow(n) <= 1024 {
            for spec in finite_oracle::abelian_groups_of_order(q.get().pow(n)) {
                let g = FiniteAbelianGroup::realize(&spec, 1024).map_err(|e| e.to_string())?;
                groups += 1;
                for i in 0..=n {
                    let brute = finite_oracle::ulm_bruteforce(&g, q, i).map_err(|e| e.to_string())?;
                    let symbolic = invariants::ulm_symbolic(&spec, q, i);
                    ensure(symbolic == Cardinal::Finite(brute), || {
                        format!("{spec} at i = {i}: symbolic {symbolic}, brute force {brute}")
                    })?;
                    checks += 1;
                }
            }
            n += 1;
        }
    }
    Ok(format!("{groups} p-groups, {checks} invariants"))
}

fn finite_collapse() -> Outcome {
    let specs = finite_oracle::abelian_groups_up_to(512);
    let groups: Vec<_> = specs
        .iter()
        .map(|s| FiniteAbelianGroup::realize(s, 512))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let mut pairs = 0u64;
    let mut equivalent = 0u64;
    for (i, a) in specs.iter().enumerate() {
        for (j, b) in specs.iter().enumerate() {
            let eq = invariants::elem_equivalent(a, b);
            let iso = finite_oracle::iso_finite_bruteforce(&groups[i], &groups[j]);
            ensure(eq == iso, || format!("{a} vs {b}: equivalent {eq}, isomorphic {iso}"))?;
            pairs += 1;
            equivalent += eq as u64;
        }
    }
    Ok(format!("{} specs, {pairs} pairs, {equivalent} equivalent", specs.len()))
}

fn sb_condition_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut by_class = [0usize; 3];
    for _ in 0..1000 {
        let spec = random_spec(&mut rng);
        let sb = classify::has_sb(&spec).has_sb;
        let omega = reference_stability(&spec) == StabilityClass::OmegaStable;
        let c3 = reference_condition3(&spec);
        ensure(sb == omega && omega == c3, || {
            format!("{spec}: has_sb {sb}, omega-stable {omega}, condition 3 {c3}")
        })?;
        ensure(classify::condition3(&spec) == c3 && classify::is_form_star(&spec) == omega, || {
            format!("{spec}: library predicates disagree with the reference")
        })?;
        let class = classify::stability_class(&spec);
        ensure(class == reference_stability(&spec), || format!("{spec}: class {class:?}"))?;
        by_class[class as usize] += 1;
    }
    ensure(by_class.iter().all(|&n| n > 0), || format!("class coverage {by_class:?}"))?;
    Ok(format!(
        "1000 specs, 0 disagreements (omega-stable {}, superstable only {}, not superstable {})",
        by_class[0], by_class[1], by_class[2]
    ))
}

fn purity_oracle() -> Outcome {
    let mut subgroups = 0usize;
    let mut summands = 0usize;
    for spec in finite_oracle::abelian_groups_up_to(128) {
        let g = FiniteAbelianGroup::realize(&spec, 128).map_err(|e| e.to_string())?;
        let oracle = PurityOracle::new(&g);
        let all = g.all_subgroups();
        ensure(oracle.is_pure(&g.whole()) && oracle.is_pure(&g.zero_subgroup()), || {
            format!("{spec}: G or 0 reported impure")
        })?;
        for h in &all {
            let summand = finite_oracle::is_direct_summand(&g, h, &all);
            let pure = oracle.is_pure(h);
            // In a finite group, pure subgroups are exactly the summands.
            ensure(pure == summand, || {
                format!("{spec}: subgroup {} pure {pure}, summand {summand}", h.to_spec(&g))
            })?;
            summands += summand as usize;
        }
        subgroups += all.len();
    }
    let z4 = FiniteAbelianGroup::new(vec![4]).map_err(|e| e.to_string())?;
    ensure(!finite_oracle::is_pure_subgroup_bruteforce(&z4, &[2]), || "{0,2} in Z/4 reported pure".into())?;
    Ok(format!("{subgroups} subgroups, {summands} summands, {{0,2}} in Z/4 impure"))
}

fn padic_probes() -> Outcome {
    let w = witness_padic::build_padic_witness(p(5), 2, 0, CertificateParams::new(2, 2, 40))
        .map_err(|e| e.to_string())?;
    let r = witness_padic::probe_padic_witness(&w, 100, 0, 5).map_err(|e| e.to_string())?;
    ensure(r.certificate_passed, || "independence certificate failed".into())?;
    ensure(r.sigma_inclusion.holds && r.sigma_inclusion.samples >= 100, || {
        format!("sigma inclusion: {:?}", r.sigma_inclusion)
    })?;
    ensure(r.gamma2_e1_outside_h2, || "gamma2 e1 lies in H2".into())?;
    ensure(r.purity_h1.holds && r.purity_h2.holds, || "purity probe failed".into())?;
    ensure(r.matrix.inverse_at_every_level && r.matrix.levels == 40, || format!("matrix: {:?}", r.matrix))?;
    ensure(r.all_hold(), || format!("report: {r:?}"))?;
    Ok(format!(
        "seed {} ({} rejected), search space {:.0}, 100 samples per probe, A_n B_n = I for n <= 40",
        w.seed,
        w.rejected_seeds.len(),
        w.certificate.search_space
    ))
}

fn socle_probes() -> Outcome {
    let window = PrimeWindow::new(PrimeSet::all_except([p(2)]), 50, 1).map_err(|e| e.to_string())?;
    let bounds = SocleBounds {
        degree: 2,
        height: 2,
        threshold: 5,
    };
    let w = witness_socle::socle_witness_build(&window, 0, bounds, BasePoint::default(), SearchSpace::Free)
        .map_err(|e| e.to_string())?;
    let r = witness_socle::probe_socle_witness(&w, 1000, 0, 5).map_err(|e| e.to_string())?;
    ensure(w.certificate.passed, || format!("certificate: {:?}", w.certificate.counterexample))?;
    ensure(r.alpha_laws.holds && r.alpha_laws.samples >= 1000, || format!("alpha laws: {:?}", r.alpha_laws))?;
    ensure(r.base_in_h1 && r.sigma2_a_outside_h2, || "membership of a or sigma2(a) wrong".into())?;
    ensure(r.tower.len() == 6 && r.tower.iter().all(|t| t.holds), || format!("tower: {:?}", r.tower))?;
    ensure(r.all_hold(), || format!("report: {r:?}"))?;
    Ok(format!("seed {}, window {}..{}, tower m <= 5", w.pair.seed, w.window.window[0], w.window.window[49]))
}

fn completion_divisibility() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checks = 0;
    for q in [2u64, 3, 5] {
        let prime = p(q);
        for _ in 0..1000 {
            let v = rng.random_range(0..45u32);
            let unit: i64 = loop {
                let u = rng.random_range(-1_000_000i64..=1_000_000);
                if u % q as i64 != 0 {
                    break u;
                }
            };
            let num = BigInt::from(unit) * BigInt::from(q).pow(v);
            let den: u64 = loop {
                let d = rng.random_range(1..100_000u64);
                if d % q != 0 {
                    break d;
                }
            };
            let x = PAdicApprox::from_rational(prime, 40, &num, &BigUint::from(den)).map_err(|e| e.to_string())?;
            for k in 0..=39 {
                let exact = padic::rational_divisible(&num, prime, k);
                ensure(exact == (v >= k), || format!("exact divisibility of {num}/{den} by {q}^{k}"))?;
                ensure(padic::truncation_divisible(&x, k) == exact, || {
                    format!("{num}/{den} at p = {q}, k = {k}")
                })?;
                checks += 1;
            }
        }
    }
    Ok(format!("3000 elements, {checks} verdicts"))
}

fn spot_checks() -> Outcome {
    let spec = |s: &str| GroupSpec::parse(s).map_err(|e| format!("{s}: {e}"));
    for q in [2, 3, 5, 7] {
        let v = classify::has_sb(&spec(&format!("Zhat({q})"))?);
        ensure(!v.has_sb && v.route == SbRoute::PAdicWitness, || format!("Zhat({q}): {v:?}"))?;
    }
    let odd = classify::has_sb(&spec("sumP(all\\{2}; Z/p^1)")?);
    ensure(!odd.has_sb && odd.route == SbRoute::SocleWitness, || format!("odd primes: {odd:?}"))?;
    let star = classify::has_sb(&spec("Z/2^w + Prufer(3)^w + Q")?);
    ensure(star.has_sb && star.route == SbRoute::None, || format!("form (*): {star:?}"))?;
    let k = classify::stability_class(&spec("sumK(2; all)")?);
    ensure(k == StabilityClass::NotSuperstable, || format!("sumK(2; all): {k:?}"))?;
    ensure(!classify::has_sb(&spec("sumK(2; all)")?).has_sb, || "sumK(2; all) has SB".into())?;
    Ok("Zhat(p), odd-prime socle, form (*), sumK(2; all)".into())
}

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            name: "Ulm invariants of p-groups of order <= 2^10",
            budget: Duration::from_secs(60),
            run: ulm_agreement,
        },
        Criterion {
            name: "finite equivalence is isomorphism up to order 512",
            budget: Duration::from_secs(120),
            run: finite_collapse,
        },
        Criterion {
            name: "SB, omega-stability and condition 3 agree",
            budget: Duration::from_secs(10),
            run: sb_condition_consistency,
        },
        Criterion {
            name: "purity oracle up to order 128",
            budget: Duration::from_secs(60),
            run: purity_oracle,
        },
        Criterion {
            name: "p-adic witness probes at p = 5, k = 2",
            budget: Duration::from_secs(60),
            run: padic_probes,
        },
        Criterion {
            name: "socle witness probes over the odd primes",
            budget: Duration::from_secs(120),
            run: socle_probes,
        },
        Criterion {
            name: "completion keeps p^k-divisibility",
            budget: Duration::from_secs(10),
            run: completion_divisibility,
        },
        Criterion {
            name: "classifier spot checks",
            budget: Duration::from_secs(1),
            run: spot_checks,
        },
    ];
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let (status, detail) = match result {
            Ok(d) if elapsed <= c.budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the {:?} budget", c.budget)),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} [{}] {} ({:.2}s): {detail}", i + 1, c.name, elapsed.as_secs_f64());
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
