use super::*;

fn p(n: u64) -> Prime {
    Prime::new(n).unwrap()
}

fn z(prime: u64, n: u32, r: u64) -> PAdicApprox {
    PAdicApprox::new(p(prime), n, r).unwrap()
}

#[test]
fn arithmetic_examples() {
    assert_eq!(z(5, 3, 2).inv().unwrap(), z(5, 3, 63));
    assert_eq!(z(5, 3, 50).valuation(), Valuation::Exact(2));
    assert_eq!(z(5, 3, 124).add(&z(5, 3, 1)).unwrap(), z(5, 3, 0));
    assert_eq!(z(5, 3, 0).valuation(), Valuation::AtLeast(3));
    assert_eq!(z(5, 3, 10).inv(), Err(PAdicError::NonUnit));
    assert_eq!(z(5, 3, 1).add(&z(5, 4, 1)), Err(PAdicError::PrecisionMismatch));
    assert_eq!(z(5, 3, 1).add(&z(7, 3, 1)), Err(PAdicError::PrecisionMismatch));
    assert_eq!(z(5, 3, 7).neg().add(&z(5, 3, 7)).unwrap(), z(5, 3, 0));
}

#[test]
fn rational_embedding() {
    let third = PAdicApprox::from_rational(p(5), 4, &BigInt::from(1), &BigUint::from(3u32)).unwrap();
    assert_eq!(third.mul(&z(5, 4, 3)).unwrap(), z(5, 4, 1));
    assert_eq!(
        PAdicApprox::from_rational(p(5), 4, &BigInt::from(1), &BigUint::from(10u32)),
        Err(PAdicError::NotIntegral)
    );
    let minus = PAdicApprox::from_signed(p(2), 5, &BigInt::from(-1)).unwrap();
    assert_eq!(minus.residue, BigUint::from(31u32));
}

#[test]
fn lazy_truncation_is_coherent() {
    let g = PAdicLazy::seeded(p(5), 7, 1);
    let long = g.truncate(60);
    for n in [1, 5, 17, 40, 59] {
        assert_eq!(g.truncate(n), &long % arith::big_pow(5, n));
    }
    // A fresh handle with the same seed agrees with the cached one.
    let h = PAdicLazy::seeded(p(5), 7, 1);
    assert_eq!(h.truncate(33), g.truncate(33));
    assert!(g.is_unit());
    assert_ne!(g.truncate(40), PAdicLazy::seeded(p(5), 7, 2).truncate(40));
    let ds = g.digits(10);
    assert!(ds[0] != 0 && ds.iter().all(|&d| d < 5));
}

#[test]
fn lazy_combinations() {
    let g = PAdicLazy::seeded(p(3), 2, 0);
    let sq = PAdicLazy::product(&g, &g).unwrap();
    let m = arith::big_pow(3, 20);
    assert_eq!(sq.truncate(20), g.truncate(20).pow(2) % &m);
    let r = PAdicLazy::rational(p(3), -2, 5u32).unwrap();
    let s = PAdicLazy::sum(&r, &PAdicLazy::integer(p(3), 1)).unwrap();
    // -2/5 + 1 = 3/5
    let expect = PAdicApprox::from_rational(p(3), 20, &BigInt::from(3), &BigUint::from(5u32)).unwrap();
    assert_eq!(s.truncate(20), expect.residue);
    assert!(PAdicLazy::rational(p(3), 1, 6u32).is_err());
}

#[test]
fn lazy_json_roundtrip() {
    let g = PAdicLazy::product(&PAdicLazy::seeded(p(5), 1, 0), &PAdicLazy::integer(p(5), 3)).unwrap();
    let text = serde_json::to_string(&g).unwrap();
    let back: PAdicLazy = serde_json::from_str(&text).unwrap();
    assert_eq!(back, g);
    assert_eq!(back.truncate(30), g.truncate(30));
}

#[test]
fn matrix_limit_examples() {
    let seq: Vec<MatrixModPk> = (1..=2)
        .map(|n| MatrixModPk::from_u64(p(5), n, 1, &[2]).unwrap())
        .collect();
    let inv = matrix_limit_inverse(&seq).unwrap();
    assert_eq!(inv[0].entries, vec![BigUint::from(3u32)]);
    assert_eq!(inv[1].entries, vec![BigUint::from(13u32)]);

    let ids: Vec<_> = (1..=4).map(|n| MatrixModPk::identity(p(7), n, 3)).collect();
    assert!(matrix_limit_inverse(&ids).unwrap().iter().all(MatrixModPk::is_identity));

    let five: Vec<_> = (1..=3)
        .map(|n| MatrixModPk::from_u64(p(5), n, 1, &[5]).unwrap())
        .collect();
    assert_eq!(
        matrix_limit_inverse(&five),
        Err(PAdicError::SingularModP { level: 1 })
    );

    let bad = vec![
        MatrixModPk::from_u64(p(5), 1, 1, &[2]).unwrap(),
        MatrixModPk::from_u64(p(5), 2, 1, &[3]).unwrap(),
    ];
    assert_eq!(
        matrix_limit_inverse(&bad),
        Err(PAdicError::IncompatibleSequence { level: 2 })
    );
}

#[test]
fn matrix_inverse_at_every_level() {
    let a = MatrixModPk::from_u64(p(5), 12, 2, &[3, 10, 7, 1]).unwrap();
    let seq = truncation_sequence(&a);
    let inv = matrix_limit_inverse(&seq).unwrap();
    for (an, bn) in seq.iter().zip(&inv) {
        assert!(an.mul(bn).unwrap().is_identity());
        assert!(bn.mul(an).unwrap().is_identity());
    }
    for w in inv.windows(2) {
        assert_eq!(w[1].reduce(w[0].precision).unwrap(), w[0]);
    }
}

#[test]
fn certificate_finds_planted_relations() {
    let g = PAdicLazy::seeded(p(5), 3, 0);
    let c = independence_certificate(&g, &g, CertificateParams::new(1, 1, 20)).unwrap();
    assert_eq!(c.relation().unwrap().to_string(), "x - y");

    let g2 = PAdicLazy::product(&g, &g).unwrap();
    let c = independence_certificate(&g, &g2, CertificateParams::new(2, 1, 20)).unwrap();
    assert_eq!(c.relation().unwrap().to_string(), "y - x^2");
    // Degree 1 cannot see the quadratic relation.
    assert!(independence_certificate(&g, &g2, CertificateParams::new(1, 1, 20))
        .unwrap()
        .passed());
}

#[test]
fn certificate_passes_on_generic_pair() {
    let g1 = PAdicLazy::seeded(p(5), 1, 0);
    let g2 = PAdicLazy::seeded(p(5), 1, 1);
    let c = independence_certificate(&g1, &g2, CertificateParams::new(1, 1, 10)).unwrap();
    assert!(c.passed());
    assert_eq!(c.search_precision, 10);
}

#[test]
fn certificate_budget_and_units() {
    let g1 = PAdicLazy::seeded(p(5), 1, 0);
    let g2 = PAdicLazy::seeded(p(5), 1, 1);
    let mut params = CertificateParams::new(4, 3, 10);
    params.budget = 1e6;
    assert!(matches!(
        independence_certificate(&g1, &g2, params),
        Err(PAdicError::BudgetExceeded { .. })
    ));
    let five = PAdicLazy::integer(p(5), 5);
    assert_eq!(
        independence_certificate(&five, &g2, CertificateParams::new(1, 1, 10)),
        Err(PAdicError::NonUnit)
    );
}

#[test]
fn divisibility_read_from_truncation() {
    let num = BigInt::from(250);
    let x = PAdicApprox::from_rational(p(5), 10, &num, &BigUint::from(7u32)).unwrap();
    for k in 0..10 {
        assert_eq!(truncation_divisible(&x, k), rational_divisible(&num, p(5), k), "{k}");
    }
}
