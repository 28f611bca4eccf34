use biquad_core::sos::{
    check_certificate, decompose_sos, decompose_sos_observed, enumerate_dominated_squares, SearchConfig,
};
use biquad_core::{make_field, Field, FieldElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_small(k: &Field, rng: &mut ChaCha8Rng) -> FieldElement {
    loop {
        let basis = k.integral_basis();
        let mut c = [0i64; 4];
        for b in basis {
            let t = rng.gen_range(-2..=2);
            for i in 0..4 {
                c[i] += t * b[i];
            }
        }
        let e = FieldElement::new(k, c);
        if !e.is_zero() {
            return e;
        }
    }
}

fn random_sum(k: &Field, rng: &mut ChaCha8Rng) -> FieldElement {
    let terms = rng.gen_range(1..=6);
    (0..terms).fold(FieldElement::zero(k), |acc, _| &acc + &random_small(k, rng).square())
}

#[test]
fn completeness_on_random_sums() {
    let ks = [make_field(2, 3).unwrap(), make_field(2, 5).unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..100 {
        let k = &ks[i % 2];
        let beta = random_sum(k, &mut rng);
        let out = decompose_sos(&beta, SearchConfig::uncapped()).unwrap();
        let cert = out.certificate().unwrap_or_else(|| panic!("{beta} not decomposed"));
        assert_eq!(check_certificate(cert), Ok(()));
        let dominated = enumerate_dominated_squares(&beta).unwrap();
        for p in &cert.parts {
            assert!(dominated.contains(p), "{p} not dominated by {beta}");
        }
    }
}

#[test]
fn remainders_stay_nonnegative() {
    let k = make_field(2, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10 {
        let beta = random_sum(&k, &mut rng);
        let mut seen = 0usize;
        let mut bad = Vec::new();
        let mut obs = |rem: &FieldElement| {
            seen += 1;
            if !rem.is_totally_nonnegative() {
                bad.push(rem.to_string());
            }
        };
        decompose_sos_observed(&beta, SearchConfig::capped(7), Some(&mut obs)).unwrap();
        assert!(seen > 0 && bad.is_empty(), "{beta}: {bad:?}");
    }
    let no = FieldElement::parse(&k, "2 + sqrt(2)").unwrap();
    let mut count = 0;
    let mut obs = |rem: &FieldElement| {
        assert!(rem.is_totally_nonnegative());
        count += 1;
    };
    let out = decompose_sos_observed(&no, SearchConfig::uncapped(), Some(&mut obs)).unwrap();
    assert!(!out.is_representation());
}

#[test]
fn searches_are_deterministic() {
    let k = make_field(2, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..10 {
        let beta = random_sum(&k, &mut rng);
        let a = decompose_sos(&beta, SearchConfig::uncapped()).unwrap();
        let b = decompose_sos(&beta, SearchConfig::uncapped()).unwrap();
        assert_eq!(a, b);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
