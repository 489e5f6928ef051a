use std::collections::BTreeSet;

use hecke_core::catalog::{bs_pair, dihedral_pair, free2_pair, lamplighter_pair, translation_pair, trivial_u_pair};
use hecke_core::hecke::{check_hecke_axioms, commensuration_index, is_compactly_generated, left_index, Status};
use hecke_core::schreier::{act, enumerate_ball, export_schreier_dot, id_of, orbit, point_of, u_orbit_ids};
use hecke_core::{CosetId, Error, GroupWord, Point, Space, Tri};
use proptest::prelude::*;

/// Cosets of ⟨a⟩ in BS(1,p), computed with plain fractions: x ↦ p^k·x + num/den.
/// Two elements lie in the same coset iff their k agree and (b2 - b1)/p^k is an integer.
fn bs_oracle_orbit_size(p: i128, n: u32) -> usize {
    let pk = p.pow(n);
    let mut classes: Vec<i128> = Vec::new();
    for j in 0..(3 * pk) {
        // a^j t^n : x ↦ p^n x + j
        let key = j.rem_euclid(pk);
        if !classes.contains(&key) {
            classes.push(key);
        }
    }
    classes.len()
}

/// Lamplighter cosets via explicit lamp vectors: u·tⁿ for u supported on [0, n+2).
fn lamplighter_oracle_orbit_size(q: u32, n: i64) -> usize {
    let width = (n + 2) as u32;
    let mut seen = BTreeSet::new();
    for code in 0..q.pow(width) {
        let mut c = code;
        let mut lamps = Vec::new();
        for pos in 0..width as i64 {
            let v = c % q;
            c /= q;
            if v != 0 && pos < n {
                lamps.push((pos, v));
            }
        }
        seen.insert(lamps);
    }
    seen.len()
}

#[test]
fn translation_and_dihedral_actions() {
    let tr = translation_pair().unwrap();
    let five = id_of(&tr, Space::Coset, &Point::Int(5)).unwrap();
    let t = tr.parse_word("t").unwrap();
    let six = act(&tr, &t, five).unwrap();
    assert_eq!(point_of(&tr, Space::Coset, six).unwrap(), Point::Int(6));
    assert_eq!(act(&tr, &GroupWord::identity(), five).unwrap(), five);

    let d = dihedral_pair().unwrap();
    let three = id_of(&d, Space::Coset, &Point::Int(3)).unwrap();
    let image = act(&d, &d.parse_word("r").unwrap(), three).unwrap();
    assert_eq!(point_of(&d, Space::Coset, image).unwrap(), Point::Int(-3));
}

#[test]
fn ball_examples() {
    let bs = bs_pair(2).unwrap();
    let b1 = enumerate_ball(&bs, 1).unwrap();
    assert_eq!(b1.len(), 3);
    let tr = translation_pair().unwrap();
    let b3 = enumerate_ball(&tr, 3).unwrap();
    let pts: BTreeSet<i128> = b3.points.iter().map(|p| p.as_int().unwrap()).collect();
    assert_eq!(pts, (-3..=3).collect());
    assert_eq!(enumerate_ball(&bs, 0).unwrap().members, vec![CosetId(0)]);
}

#[test]
fn dot_examples() {
    let bs = bs_pair(2).unwrap();
    let dot = export_schreier_dot(&enumerate_ball(&bs, 0).unwrap());
    assert_eq!(dot, "digraph schreier {\n  0;\n  0 -> 0 [label=\"a\"];\n}\n");

    let tr = translation_pair().unwrap();
    let dot = export_schreier_dot(&enumerate_ball(&tr, 1).unwrap());
    assert_eq!(dot, "digraph schreier {\n  0;\n  1;\n  2;\n  0 -> 1 [label=\"t\"];\n  2 -> 0 [label=\"t\"];\n}\n");

    let dot = export_schreier_dot(&enumerate_ball(&bs, 1).unwrap());
    assert!(dot.contains("0 -> 0 [label=\"a\"]"));
    assert_eq!(dot.matches(';').count() - dot.matches("->").count(), 3);
}

#[test]
fn orbit_examples() {
    let bs = bs_pair(2).unwrap();
    let tu = act(&bs, &bs.parse_word("t").unwrap(), CosetId(0)).unwrap();
    let a = vec![bs.parse_word("a").unwrap()];
    assert_eq!(orbit(&bs, &a, tu, 100).unwrap().len(), 2);
    assert_eq!(orbit(&bs, &a, CosetId(0), 100).unwrap(), BTreeSet::from([CosetId(0)]));

    let f2 = free2_pair().unwrap();
    let bu = act(&f2, &f2.parse_word("b").unwrap(), CosetId(0)).unwrap();
    let a = vec![f2.parse_word("a").unwrap()];
    assert_eq!(orbit(&f2, &a, bu, 500), Err(Error::OrbitCapExceeded { cap: 500 }));
}

#[test]
fn commensuration_examples() {
    let bs = bs_pair(2).unwrap();
    let r = commensuration_index(&bs, &bs.parse_word("t").unwrap(), 4).unwrap();
    assert_eq!((r.idx_left, r.idx_right), (2, 1));
    let r = commensuration_index(&bs, &GroupWord::identity(), 4).unwrap();
    assert_eq!((r.idx_left, r.idx_right), (1, 1));
    let ll = lamplighter_pair(2).unwrap();
    let r = commensuration_index(&ll, &ll.parse_word("t").unwrap(), 4).unwrap();
    assert_eq!((r.idx_left, r.idx_right), (2, 1));
}

#[test]
fn index_matches_brute_force_oracles() {
    for p in [2i64, 3] {
        let bs = bs_pair(p).unwrap();
        for n in 0..=6u32 {
            let w = bs.parse_word("t").unwrap().pow(i64::from(n));
            let expected = bs_oracle_orbit_size(i128::from(p), n) as u64;
            assert_eq!(left_index(&bs, &w).unwrap(), expected);
            assert_eq!(expected, (p as u64).pow(n));
        }
    }
    let ll = lamplighter_pair(2).unwrap();
    for n in 0..=6i64 {
        let w = ll.parse_word("t").unwrap().pow(n);
        let expected = lamplighter_oracle_orbit_size(2, n) as u64;
        assert_eq!(left_index(&ll, &w).unwrap(), expected);
        assert_eq!(expected, 1 << n);
    }
}

#[test]
fn hecke_axioms_on_catalog() {
    let bs = bs_pair(2).unwrap();
    let report = check_hecke_axioms(&bs, 3, 20).unwrap();
    assert_eq!(report.status, Status::Pass);
    let idx: Vec<(String, Option<u64>, Option<u64>)> =
        report.commensuration.iter().map(|e| (e.element.clone(), e.idx_left, e.idx_right)).collect();
    assert!(idx.contains(&("a".into(), Some(1), Some(1))));
    assert!(idx.contains(&("t".into(), Some(2), Some(1))));
    assert!(idx.contains(&("t^-1".into(), Some(1), Some(2))));

    for pair in [bs_pair(3).unwrap(), lamplighter_pair(2).unwrap(), dihedral_pair().unwrap(), translation_pair().unwrap()] {
        assert_eq!(check_hecke_axioms(&pair, 4, 20).unwrap().status, Status::Pass, "{}", pair.name());
    }

    let f2 = free2_pair().unwrap().with_caps(hecke_core::Caps { coset: 100_000, orbit: 2_000 });
    let report = check_hecke_axioms(&f2, 4, 20).unwrap();
    assert_eq!(report.status, Status::Fail);
    let b = report.commensuration.iter().find(|e| e.element == "b").unwrap();
    assert_eq!(b.status, Status::Fail);
}

#[test]
fn compact_generation_flags() {
    let bs = bs_pair(2).unwrap();
    let cg = is_compactly_generated(&bs);
    assert_eq!(cg.value, Tri::True);
    assert_eq!(cg.witness, Some(vec!["t".to_string()]));
    let mut declared = bs_pair(2).unwrap();
    declared.metadata.finitely_generated = hecke_core::Flag::unknown();
    declared.metadata.fg_witness = None;
    assert_eq!(is_compactly_generated(&declared).value, Tri::Unknown);
}

#[test]
fn trivial_u_is_regular() {
    let g = trivial_u_pair(&bs_pair(2).unwrap()).unwrap();
    assert_eq!(enumerate_ball(&g, 1).unwrap().len(), 5);
    let r = commensuration_index(&g, &g.parse_word("t*a").unwrap(), 2).unwrap();
    assert_eq!((r.idx_left, r.idx_right), (1, 1));
}

#[test]
fn ids_are_reproducible() {
    let a = enumerate_ball(&lamplighter_pair(2).unwrap(), 3).unwrap();
    let b = enumerate_ball(&lamplighter_pair(2).unwrap(), 3).unwrap();
    assert_eq!(a, b);
}

fn word_strategy(ngens: usize, max_len: usize) -> impl Strategy<Value = GroupWord> {
    prop::collection::vec((0..ngens, any::<bool>()), 0..max_len)
        .prop_map(|ls| GroupWord::from_letters(ls.into_iter().map(|(g, inv)| hecke_core::Letter { gen: g, inv })))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_axioms(w1 in word_strategy(2, 6), w2 in word_strategy(2, 6), start in 0usize..7) {
        for pair in [bs_pair(2).unwrap(), lamplighter_pair(2).unwrap(), dihedral_pair().unwrap()] {
            let ball = enumerate_ball(&pair, 2).unwrap();
            let c = ball.members[start % ball.len()];
            let lhs = act(&pair, &w1.mul(&w2), c).unwrap();
            let rhs = act(&pair, &w1, act(&pair, &w2, c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(act(&pair, &w1.inverse(), act(&pair, &w1, c).unwrap()).unwrap(), c);
        }
    }

    #[test]
    fn index_invariants(g in word_strategy(2, 5), k in -3i64..=3) {
        let bs = bs_pair(2).unwrap();
        let u = bs.parse_word("a").unwrap().pow(k);
        prop_assert_eq!(left_index(&bs, &u.conjugate(&g)).unwrap(), left_index(&bs, &g).unwrap());
        let fwd = commensuration_index(&bs, &g, 4).unwrap();
        let back = commensuration_index(&bs, &g.inverse(), 4).unwrap();
        prop_assert_eq!(fwd.idx_left, back.idx_right);
        let orbit = u_orbit_ids(&bs, act(&bs, &g, CosetId(0)).unwrap(), 10_000).unwrap();
        prop_assert_eq!(orbit.len() as u64, fwd.idx_left);
    }

    #[test]
    fn balls_are_nested(r in 0usize..4) {
        let pair = lamplighter_pair(2).unwrap();
        let small = enumerate_ball(&pair, r).unwrap().member_set();
        let big = enumerate_ball(&pair, r + 1).unwrap().member_set();
        prop_assert!(small.is_subset(&big));
    }
}
