use abelian_sb::finite_oracle::{self, FiniteAbelianGroup, IntMatrix};
use abelian_sb::invariants;
use abelian_sb::{GroupSpec, SummandFamily};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn composite_moduli_split_by_crt() {
    for n in 2..=256u64 {
        let spec = GroupSpec::parse(&format!("Z/{n}")).unwrap();
        let direct = FiniteAbelianGroup::new(vec![n]).unwrap();
        let split = FiniteAbelianGroup::realize(&spec, 1 << 16).unwrap();
        assert!(finite_oracle::iso_finite_bruteforce(&direct, &split), "n = {n}");
        assert!(spec.entries().iter().all(|e| matches!(e.family, SummandFamily::Cyclic { .. })));
    }
}

/// Valid moduli for `m_split`: products of `p^{k_max(p)}` over a subset of
/// the primes of `spec`, times nothing else.
fn valid_moduli(spec: &GroupSpec) -> Vec<u64> {
    let mut tops: Vec<(u64, u32)> = Vec::new();
    for e in spec.entries() {
        if let SummandFamily::Cyclic { p, k } = e.family {
            match tops.iter_mut().find(|(q, _)| *q == p.get()) {
                Some(t) => t.1 = t.1.max(k),
                None => tops.push((p.get(), k)),
            }
        }
    }
    let mut out = vec![1u64];
    for (p, k) in tops {
        let pk = p.pow(k);
        out = out.iter().flat_map(|&m| [m, m * pk]).collect();
    }
    out
}

#[test]
fn m_split_roundtrip_and_socle() {
    let specs = finite_oracle::abelian_groups_up_to(512);
    assert!(specs.len() > 500);
    for spec in &specs {
        let g = FiniteAbelianGroup::realize(spec, 512).unwrap();
        for m in valid_moduli(spec) {
            let s = spec.m_split(m).unwrap();
            assert!(!s.has_prufer_overlap());
            let sum = s.torsion_part().direct_sum(&s.complement);
            let back = FiniteAbelianGroup::realize(&sum, 512).unwrap();
            assert!(finite_oracle::iso_finite_bruteforce(&g, &back), "{spec} with M = {m}");
            // M kills the torsion part and nothing in the complement.
            let t = FiniteAbelianGroup::realize(&s.torsion_part(), 512).unwrap();
            assert_eq!(m % t.exponent(), 0);
            let c = FiniteAbelianGroup::realize(&s.complement, 512).unwrap();
            assert_eq!((c.order() as u64).gcd(&m), 1);
        }
        // Socle against the subgroup generated by elements of prime order.
        let gens: Vec<_> = g
            .elements()
            .filter(|&e| abelian_sb::arith::is_prime(g.element_order(e)))
            .collect();
        let brute = g.closure(&gens).to_spec(&g);
        assert_eq!(spec.socle(), brute, "{spec}");
    }
}

#[test]
fn finite_equivalence_equals_normal_form_equality() {
    let specs = finite_oracle::abelian_groups_up_to(256);
    let groups: Vec<_> = specs
        .iter()
        .map(|s| FiniteAbelianGroup::realize(s, 256).unwrap())
        .collect();
    for (i, a) in specs.iter().enumerate() {
        for (j, b) in specs.iter().enumerate() {
            let iso = finite_oracle::iso_finite_bruteforce(&groups[i], &groups[j]);
            assert_eq!(iso, a == b);
            assert_eq!(invariants::iso_standard(a, b), iso);
        }
    }
}

fn random_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
    let rows = rng.random_range(1..=5);
    let cols = rng.random_range(1..=5);
    let data: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.random_range(-20..=20)).collect())
        .collect();
    IntMatrix::from_rows(&data).unwrap()
}

#[test]
fn smith_form_chain_and_reconstruction() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..500 {
        let a = random_matrix(&mut rng);
        let s = finite_oracle::smith_normal_form(&a).unwrap();
        assert_eq!(s.u.mul(&a).mul(&s.v), s.d);
        assert!(s.d.is_diagonal());
        for w in s.invariant_factors.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        // Unimodular transforms: |det| = 1.
        for m in [&s.u, &s.v] {
            let d = finite_oracle::determinant(m);
            assert!(d == BigInt::from(1) || d == BigInt::from(-1));
        }
        // A nonsingular square matrix has invariant factors multiplying to |det|.
        if a.rows == a.cols {
            let det = finite_oracle::determinant(&a);
            if !det.is_zero() {
                let prod = s
                    .invariant_factors
                    .iter()
                    .fold(BigInt::from(1), |acc, d| acc * BigInt::from(d.clone()));
                assert_eq!(prod, det.abs());
            }
        }
    }
}

#[test]
fn purity_of_trivial_subgroups() {
    for spec in finite_oracle::abelian_groups_up_to(256) {
        let g = FiniteAbelianGroup::realize(&spec, 256).unwrap();
        let all: Vec<_> = g.elements().collect();
        assert!(finite_oracle::is_pure_subgroup_bruteforce(&g, &all), "{spec}");
        assert!(finite_oracle::is_pure_subgroup_bruteforce(&g, &[]), "{spec}");
    }
}
