use hecke_core::catalog::{bs_pair, dihedral_pair, lamplighter_pair};
use hecke_core::hecke::{check_hecke_axioms, commensuration_index, Status};
use hecke_core::perfect::{perfectize, C3, C5};
use hecke_core::schreier::subgroup_orbit;
use hecke_core::{Error, GroupWord, Letter, Point, Space};
use proptest::prelude::*;

#[test]
fn alphabet_and_flags() {
    let e = perfectize(&bs_pair(2).unwrap()).unwrap();
    let names: Vec<&str> = e.generators().iter().map(|g| g.name.as_str()).collect();
    assert_eq!(names, ["c5", "c3", "r", "f_a"]);
    assert!(e.metadata.perfect.is_true());
    assert!(e.metadata.finitely_generated.is_true());
    assert_eq!(e.name(), "perfectize(bs(2))");
}

#[test]
fn missing_witness() {
    assert!(matches!(perfectize(&dihedral_pair().unwrap()), Err(Error::MissingWitness(_))));
}

#[test]
fn cycles_generate_a5() {
    let e = perfectize(&bs_pair(2).unwrap()).unwrap();
    let gens = [GroupWord::gen(C5), GroupWord::gen(C3)];
    let orbit = subgroup_orbit(&e, Space::Coset, &gens, &e.base(Space::Coset), 1000).unwrap();
    assert_eq!(orbit.len(), 60);
}

#[test]
fn balancing_element_index() {
    let e = perfectize(&bs_pair(2).unwrap()).unwrap();
    let r = commensuration_index(&e, &e.parse_word("r").unwrap(), 3).unwrap();
    assert_eq!((r.idx_left, r.idx_right), (2, 2));
    let f = commensuration_index(&e, &e.parse_word("f_a").unwrap(), 3).unwrap();
    assert_eq!((f.idx_left, f.idx_right), (1, 1));
    let e = perfectize(&lamplighter_pair(2).unwrap()).unwrap();
    let r = commensuration_index(&e, &e.parse_word("r^2").unwrap(), 3).unwrap();
    assert_eq!((r.idx_left, r.idx_right), (4, 4));
}

#[test]
fn hecke_axioms_hold() {
    let e = perfectize(&bs_pair(2).unwrap()).unwrap();
    assert_eq!(check_hecke_axioms(&e, 3, 10).unwrap().status, Status::Pass);
}

/// The element of E with `value` in slot 0 and identity elsewhere, built directly.
fn slot0(inner_nf: Point, identity: &Point) -> Point {
    let mut parts = identity.as_tuple().unwrap().to_vec();
    parts[0] = inner_nf;
    Point::Tuple(parts)
}

#[test]
fn balancing_conjugation() {
    let p = bs_pair(2).unwrap();
    let e = perfectize(&p).unwrap();
    let id = e.model().element_identity().unwrap();
    for n in -3i64..=3 {
        let lhs = e.parse_word("r").unwrap().pow(n).conjugate(&e.parse_word("f_a").unwrap());
        let inner = p.parse_word("t").unwrap().pow(n).conjugate(&p.parse_word("a").unwrap());
        let expected = slot0(p.normal_form(&inner).unwrap().unwrap(), &id);
        assert_eq!(e.normal_form(&lhs).unwrap().unwrap(), expected, "n = {n}");
    }
    assert!(e.is_identity(&GroupWord::identity()).unwrap().unwrap());
}

fn word_strategy(max_len: usize) -> impl Strategy<Value = GroupWord> {
    prop::collection::vec((0..2usize, any::<bool>()), 0..max_len)
        .prop_map(|ls| GroupWord::from_letters(ls.into_iter().map(|(gen, inv)| Letter { gen, inv })))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phi_is_injective_and_tracks_slot_zero(w in word_strategy(8)) {
        let p = bs_pair(2).unwrap();
        let e = perfectize(&p).unwrap();
        let phi_w = w.substitute(|g| if g == 1 { GroupWord::gen(2) } else { GroupWord::gen(3) });
        let trivial_in_p = p.is_identity(&w).unwrap().unwrap();
        prop_assert_eq!(e.is_identity(&phi_w).unwrap().unwrap(), trivial_in_p);
        let on_base = e.act_point(Space::Coset, &phi_w, &e.base(Space::Coset)).unwrap();
        let slot = on_base.as_tuple().unwrap()[0].clone();
        prop_assert_eq!(slot, p.act_point(Space::Coset, &w, &p.base(Space::Coset)).unwrap());
    }
}
