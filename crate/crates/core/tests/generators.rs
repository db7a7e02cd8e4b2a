use elemop::constructions::{isometry_pair, verify_isometry_certificate};
use elemop::generators::{
    gen_algebraic_isometry, gen_commuting_family, gen_commuting_member, gen_isometry_pair, gen_jordan_operator,
    gen_nilpotent, paper_fixture, Certificate, Ex22, FixtureName, GeneratorConfig,
};
use elemop::{classify, defect, GaussianRational, Kind, QMatrix};
use proptest::prelude::*;

fn cfg(seed: u64, dim: usize) -> GeneratorConfig {
    GeneratorConfig::new(seed, dim, 4).unwrap()
}

#[test]
fn nilpotent_indices() {
    let n = gen_nilpotent(&cfg(7, 2), 2).unwrap();
    assert!(!n.is_zero());
    assert!(n.pow(2).is_zero());
    let n = gen_nilpotent(&cfg(7, 4), 3).unwrap();
    assert!(!n.pow(2).is_zero());
    assert!(n.pow(3).is_zero());
    assert_eq!(n.nilpotency_index(), Some(3));
    assert!(gen_nilpotent(&cfg(7, 2), 3).is_err());
}

#[test]
fn invalid_configs_are_rejected() {
    assert!(GeneratorConfig::new(0, 0, 3).is_err());
    assert!(GeneratorConfig::new(0, 2, 0).is_err());
}

#[test]
fn same_seed_same_output() {
    let a = gen_commuting_member(&cfg(11, 3), Kind::Delta, 3).unwrap();
    let b = gen_commuting_member(&cfg(11, 3), Kind::Delta, 3).unwrap();
    assert_eq!(a.pair, b.pair);
    let c = gen_commuting_member(&cfg(12, 3), Kind::Delta, 3).unwrap();
    assert_ne!(a.pair, c.pair);
}

#[test]
fn strict_delta_cube_member() {
    let g = gen_commuting_member(&cfg(3, 3), Kind::Delta, 3).unwrap();
    assert_eq!(g.certified_order, 3);
    assert!(!defect(&g.pair, 2).is_zero());
    for m in 3..6 {
        assert!(defect(&g.pair, m).is_zero());
    }
    let seq: Vec<QMatrix> = (0..3).map(|r| defect(&g.pair, r)).collect();
    assert_eq!(elemop::linalg::family_rank(&seq), 3);
}

#[test]
fn algebraic_isometry_orders() {
    for (m, dim) in [(1, 2), (3, 2), (5, 3), (7, 4)] {
        let (b, cert) = gen_algebraic_isometry(&cfg(5, dim), m).unwrap();
        assert_eq!(classify(&isometry_pair(&b), 12).minimal_order, Some(m), "m = {m}");
        assert_eq!(2 * cert.nil_index - 1, m);
        verify_isometry_certificate(&b, &cert, m).unwrap();
    }
    assert!(gen_algebraic_isometry(&cfg(5, 2), 4).is_err());
}

#[test]
fn jordan_operators_have_odd_order() {
    for n in 1..=3 {
        let g = gen_jordan_operator(&cfg(9, 3), n).unwrap();
        assert_eq!(classify(&g.pair, 12).minimal_order, Some(2 * n - 1));
        assert!(matches!(g.certificate, Certificate::Jordan { .. }));
    }
}

#[test]
fn ex22_fixture_shape() {
    let ex = Ex22::default();
    assert!(ex.a.pow(3).is_zero());
    assert_eq!(ex.d.apply(&ex.a).unwrap(), ex.a);
    assert_eq!(ex.a.get(0, 1), &GaussianRational::from_int(1));
    assert_eq!(ex.a.get(1, 2), &GaussianRational::from_int(2));
    assert_eq!(classify(&ex.pair, 12).minimal_order, Some(5));
    for name in FixtureName::ALL {
        let parsed: FixtureName = name.name().parse().unwrap();
        assert_eq!(parsed, name);
        let _ = paper_fixture(name);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn commuting_members_have_certified_order(seed in any::<u64>(), dim in 1usize..=3, m in 1usize..=3, delta in any::<bool>()) {
        prop_assume!(m <= dim);
        let kind = if delta { Kind::Delta } else { Kind::DeltaC };
        let g = gen_commuting_member(&cfg(seed, dim), kind, m).unwrap();
        prop_assert_eq!(classify(&g.pair, 12).minimal_order, Some(g.certified_order));
        prop_assert!(g.pair.a().commutes_with(g.pair.b()).unwrap());
    }

    #[test]
    fn families_commute_pairwise(seed in any::<u64>(), delta in any::<bool>()) {
        let kind = if delta { Kind::Delta } else { Kind::DeltaC };
        let fam = gen_commuting_family(&cfg(seed, 3), kind, 2).unwrap();
        for x in &fam {
            prop_assert_eq!(classify(&x.pair, 12).minimal_order, Some(x.certified_order));
            for y in &fam {
                prop_assert!(x.pair.a().commutes_with(y.pair.a()).unwrap());
                prop_assert!(x.pair.b().commutes_with(y.pair.b()).unwrap());
            }
        }
    }

    #[test]
    fn isometry_pairs_are_certified(seed in any::<u64>(), k in 0usize..3) {
        let m = 2 * k + 1;
        let g = gen_isometry_pair(&cfg(seed, 3), m).unwrap();
        prop_assert_eq!(classify(&g.pair, 12).minimal_order, Some(m));
    }
}
