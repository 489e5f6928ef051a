use std::cmp::Ordering;

use hecke_core::catalog::bs_pair;
use hecke_core::perfect::perfectize;
use hecke_core::rank::tower::MAX_TOWER_LEVEL;
use hecke_core::rank::{
    apply_rule, build_gn_tower, check_certificate, facts_from_metadata, render_certificate, tower_local_product, Certificate, FactKind,
    Ordinal, RankFact, Rule, TowerSeed,
};
use hecke_core::Error;
use proptest::prelude::*;

fn o(s: &str) -> Ordinal {
    s.parse().unwrap()
}

/// ω²·a + ω·b + c as a triple, with the textbook case analysis for addition.
type Triple = (u64, u64, u64);

fn oracle_add(x: Triple, y: Triple) -> Triple {
    match y {
        (d, e, f) if d > 0 => (x.0 + d, e, f),
        (_, e, f) if e > 0 => (x.0, x.1 + e, f),
        (_, _, f) => (x.0, x.1, x.2 + f),
    }
}

fn to_ordinal(t: Triple) -> Ordinal {
    Ordinal::from_terms(&[(2, t.0), (1, t.1), (0, t.2)])
}

fn small_triples() -> Vec<Triple> {
    let mut out = Vec::new();
    for a in 0..=5 {
        for b in 0..=5 {
            for c in 0..=5 {
                out.push((a, b, c));
            }
        }
    }
    out
}

#[test]
fn ordinal_arithmetic_matches_triple_oracle() {
    let all = small_triples();
    for &x in &all {
        for &y in &all {
            assert_eq!(to_ordinal(x).add(&to_ordinal(y)), to_ordinal(oracle_add(x, y)), "{x:?} + {y:?}");
            assert_eq!(to_ordinal(x).cmp(&to_ordinal(y)), x.cmp(&y), "{x:?} vs {y:?}");
        }
    }
    let sample: Vec<Triple> = all.iter().copied().step_by(7).collect();
    for &x in &sample {
        for &y in &sample {
            for &z in &sample {
                let (ox, oy, oz) = (to_ordinal(x), to_ordinal(y), to_ordinal(z));
                assert_eq!(ox.add(&oy).add(&oz), ox.add(&oy.add(&oz)));
                if ox <= oy && oy <= oz {
                    assert!(ox <= oz);
                }
            }
        }
    }
}

#[test]
fn ordinal_identities() {
    assert_eq!(o("w*2 + 2").add(&o("w + 2")), o("w*3 + 2"));
    assert_eq!(Ordinal::zero().add(&o("w + 5")), o("w + 5"));
    assert_eq!(o("2").add(&o("w")), o("w"));
    assert_eq!(o("w + 1").add(&o("w")), o("w*2"));
    assert_eq!(o("w + 2").mul_nat(3), o("w*3 + 2"));
    assert_eq!(o("w").cmp(&o("5")), Ordering::Greater);
}

fn declared(subject: &str, kind: FactKind) -> Certificate {
    Certificate::declared(RankFact::flag(subject, kind), "test")
}

fn lower(subject: &str, v: &str) -> Certificate {
    Certificate::declared(RankFact::lower(subject, o(v)), "test")
}

fn upper(subject: &str, v: &str) -> Certificate {
    Certificate::declared(RankFact::upper(subject, o(v)), "test")
}

#[test]
fn rule_examples() {
    let mut seed = vec![lower("S", "1")];
    for k in [FactKind::FinitelyGenerated, FactKind::Transitive, FactKind::Elementary, FactKind::Perfect] {
        seed.push(declared("S", k));
    }
    let out = apply_rule(&Rule::WreathHnn { base: "S".into() }, "G", &seed).unwrap();
    assert_eq!(out[0].fact, RankFact::lower("G", o("w + 2")));
    assert!(out.iter().any(|c| c.fact == RankFact::flag("G", FactKind::LzDecomposition)));

    let ext = Rule::Extension { normal: "N".into(), quotient: "Q".into() };
    let out = apply_rule(&ext, "G", &[upper("N", "1"), upper("Q", "1")]).unwrap();
    assert_eq!(out[0].fact, RankFact::upper("G", o("2")));

    let out = apply_rule(&Rule::CompletionUpper { pair: "P".into() }, "H", &[upper("P", "w + 2")]).unwrap();
    assert_eq!(out[0].fact, RankFact::upper("H", o("w + 2")));

    let out = apply_rule(&Rule::ResiduallyDiscrete, "D", &[declared("D", FactKind::ResiduallyDiscrete)]).unwrap();
    assert_eq!(out[0].fact, RankFact::upper("D", o("2")));

    let sup = Rule::SupExhaustion { parts: vec!["O1".into(), "O2".into()] };
    let out = apply_rule(&sup, "G", &[lower("O1", "w"), lower("O2", "3")]).unwrap();
    assert_eq!(out[0].fact, RankFact::lower("G", o("w + 1")));

    let mut wreath = vec![lower("B", "w + 2"), declared("B", FactKind::FinitelyGenerated), declared("B", FactKind::Perfect)];
    wreath.extend([declared("T", FactKind::Transitive), declared("T", FactKind::InfiniteU)]);
    let out = apply_rule(&Rule::WreathIncrease { bottom: "B".into(), top: "T".into() }, "W", &wreath).unwrap();
    assert_eq!(out[0].fact, RankFact::lower("W", o("w + 3")));

    let mut inf = vec![lower("A", "2")];
    for k in [FactKind::FinitelyGenerated, FactKind::Transitive, FactKind::Centerless, FactKind::Perfect] {
        inf.push(declared("A", k));
    }
    let out = apply_rule(&Rule::InfiniteWreath { base: "A".into() }, "J", &inf).unwrap();
    assert_eq!(out[0].fact, RankFact::lower("J", o("w + 1")));
}

#[test]
fn missing_hypotheses_are_named() {
    let premises = vec![lower("S", "1"), declared("S", FactKind::FinitelyGenerated), declared("S", FactKind::Transitive)];
    match apply_rule(&Rule::WreathHnn { base: "S".into() }, "G", &premises) {
        Err(Error::HypothesisMissing { rule, hypothesis }) => {
            assert_eq!(rule, "rule_wreath_hnn");
            assert_eq!(hypothesis, "elementary of S");
        }
        other => panic!("{other:?}"),
    }
    let mut seed = TowerSeed::declared("seed", "1");
    seed.facts.retain(|c| c.fact.kind != FactKind::Perfect);
    assert!(matches!(build_gn_tower(1, &seed), Err(Error::HypothesisMissing { .. })));
}

#[test]
fn bounds_are_monotone_in_premises() {
    let ext = Rule::Extension { normal: "N".into(), quotient: "Q".into() };
    let weak = apply_rule(&ext, "G", &[upper("N", "w"), upper("Q", "1")]).unwrap();
    let strong = apply_rule(&ext, "G", &[upper("N", "w"), upper("N", "3"), upper("Q", "1")]).unwrap();
    assert!(strong[0].fact.value <= weak[0].fact.value);
    let sup = Rule::SupExhaustion { parts: vec!["O".into()] };
    let a = apply_rule(&sup, "G", &[lower("O", "2")]).unwrap();
    let b = apply_rule(&sup, "G", &[lower("O", "2"), lower("O", "w")]).unwrap();
    assert!(b[0].fact.value >= a[0].fact.value);
}

#[test]
fn tower_bounds() {
    let seed = TowerSeed::declared("seed", "1");
    for n in 1..=5u32 {
        let t = build_gn_tower(n, &seed).unwrap();
        assert_eq!(t.bound, Ordinal::omega().mul_nat(n as u64).add(&Ordinal::nat(2)), "n = {n}");
        check_certificate(&t.certificate).unwrap();
    }
    assert_eq!(build_gn_tower(1, &seed).unwrap().bound, o("w + 2"));
    assert_eq!(build_gn_tower(3, &seed).unwrap().bound, o("w*3 + 2"));
    assert!(matches!(build_gn_tower(MAX_TOWER_LEVEL + 1, &seed), Err(Error::ResourceCap(_))));
}

#[test]
fn tower_steps_differ_by_one_round() {
    let seed = TowerSeed::declared("seed", "1");
    for n in 1..5u32 {
        let a = build_gn_tower(n, &seed).unwrap();
        let b = build_gn_tower(n + 1, &seed).unwrap();
        let (sa, sb) = (a.certificate.spine(), b.certificate.spine());
        assert_eq!(sb.len(), sa.len() + 2);
        assert_eq!(&sb[..2], ["rule_wreath_hnn", "rule_perfectize"]);
        assert_eq!(&sb[2..], &sa[..]);
        assert_eq!(b.expressions.len(), a.expressions.len() + 2);
    }
    let t = build_gn_tower(2, &seed).unwrap();
    assert_eq!(t.expressions["G_1"], "hnn(iterwreath(seed, 2), contraction(1))");
    assert_eq!(t.expressions["E_1"], "perfectize(hnn(iterwreath(seed, 2), contraction(1)))");
}

#[test]
fn local_product_of_the_tower() {
    let cert = tower_local_product(&TowerSeed::declared("seed", "1")).unwrap();
    assert_eq!(cert.fact.value, Some(o("w^2 + 1")));
    check_certificate(&cert).unwrap();
}

#[test]
fn certificates_round_trip_and_render() {
    let t = build_gn_tower(2, &TowerSeed::declared("seed", "1")).unwrap();
    let json = serde_json::to_string(&t.certificate).unwrap();
    let back: Certificate = serde_json::from_str(&json).unwrap();
    assert_eq!(back, t.certificate);
    let text = render_certificate(&t.certificate);
    assert!(text.starts_with("xi(G_2) >= w*2 + 2    [rule_wreath_hnn]\n"));
    assert!(text.contains("\n  xi(E_1) >= w + 2    [rule_perfectize]\n"));
}

#[test]
fn tampered_certificates_fail() {
    let t = build_gn_tower(2, &TowerSeed::declared("seed", "1")).unwrap();
    let mut bad = t.certificate.clone();
    bad.fact.value = Some(o("w*3"));
    assert!(check_certificate(&bad).is_err());
    let mut bad = t.certificate.clone();
    bad.premises.retain(|p| p.fact.kind != FactKind::Perfect);
    assert!(matches!(check_certificate(&bad), Err(Error::HypothesisMissing { .. })));
    let mut bad = t.certificate;
    bad.rule = "rule_unknown".into();
    assert!(check_certificate(&bad).is_err());
}

#[test]
fn metadata_facts() {
    let e = perfectize(&bs_pair(2).unwrap()).unwrap();
    let facts = facts_from_metadata("E", &e.metadata);
    for k in [FactKind::Perfect, FactKind::FinitelyGenerated, FactKind::Transitive] {
        assert!(facts.iter().any(|c| c.fact.kind == k), "{k:?}");
    }
    assert!(facts.iter().all(|c| c.rule == "declared"));
}

fn ordinal_strategy() -> impl Strategy<Value = Ordinal> {
    prop::collection::vec((0u32..4, 0u64..6), 0..4).prop_map(|terms| Ordinal::from_terms(&terms))
}

proptest! {
    #[test]
    fn addition_is_associative(a in ordinal_strategy(), b in ordinal_strategy(), c in ordinal_strategy()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn left_subtraction_inverts_addition(a in ordinal_strategy(), b in ordinal_strategy()) {
        let sum = a.add(&b);
        let d = sum.sub_left(&a).unwrap();
        prop_assert_eq!(a.add(&d), sum);
    }

    #[test]
    fn display_parses_back(a in ordinal_strategy()) {
        prop_assert_eq!(a.to_string().parse::<Ordinal>().unwrap(), a);
    }
}

#[test]
fn deep_towers_stay_small() {
    let t = build_gn_tower(MAX_TOWER_LEVEL, &TowerSeed::declared("seed", "1")).unwrap();
    assert_eq!(t.bound, Ordinal::omega().mul_nat(MAX_TOWER_LEVEL as u64).add(&Ordinal::nat(2)));
    assert!(t.certificate.size() < 20_000, "{}", t.certificate.size());
    check_certificate(&t.certificate).unwrap();
}
