use std::collections::BTreeMap;

use hecke_core::catalog::{bs_pair, dihedral_pair, trivial_u_pair};
use hecke_core::hecke::Status;
use hecke_core::hnn::{check_hnn_compatible, hnn, BaseElem, Embedding, HnnElement, HnnExtension, InfiniteWreath};
use hecke_core::{GroupWord, Letter, Point, Space};
use proptest::prelude::*;

fn dihedral_ext() -> HnnExtension {
    HnnExtension::new(&dihedral_pair().unwrap(), Point::Int(1), 2).unwrap()
}

#[test]
fn contraction_is_compatible_for_dihedral() {
    let d = dihedral_pair().unwrap();
    for k in 0..=3 {
        let report = check_hnn_compatible(&d, &Embedding::Contraction(Point::Int(1)), None, k).unwrap();
        assert_eq!(report.status, Status::Pass, "depth {k}");
        assert_eq!(report.commensuration.idx_left, Some(2));
        assert_eq!(report.commensuration.idx_right, Some(1));
        assert_eq!(report.centralizing.checked > 0, k > 0);
    }
}

#[test]
fn contraction_on_trivial_u_has_index_one() {
    let g = trivial_u_pair(&dihedral_pair().unwrap()).unwrap();
    let x = g.base(Space::Domain);
    let report = check_hnn_compatible(&g, &Embedding::Contraction(x), None, 2).unwrap();
    assert_eq!(report.status, Status::Pass);
    assert_eq!(report.commensuration.idx_left, Some(1));
}

#[test]
fn identity_embedding_fails_on_bs() {
    let bs = bs_pair(2).unwrap();
    let report = check_hnn_compatible(&bs, &Embedding::Identity, None, 1).unwrap();
    assert_eq!(report.status, Status::Fail);
    assert_eq!(report.trivial_intersection.status, Status::Fail);
    assert_eq!(report.trivial_intersection.witness.as_deref(), Some("a"));
}

#[test]
fn t_index_for_dihedral_contraction() {
    let pair = hnn(&dihedral_pair().unwrap(), Point::Int(1), 2).unwrap();
    let names: Vec<&str> = pair.generators().iter().map(|g| g.name.as_str()).collect();
    assert_eq!(names, ["t", "r", "s"]);
    let r = pair.t_commensuration().unwrap();
    assert_eq!((r.idx_left, r.idx_right), (2, 1));
    assert_eq!(pair.name(), "hnn(iterwreath(dihedral(), 2), contraction(1))");
    assert!(pair.metadata.finitely_generated.is_true());
    assert_eq!(pair.metadata.fg_witness.as_ref().unwrap().last(), Some(&GroupWord::gen(2)));
}

#[test]
fn psi_tilde_transcription() {
    let ext = dihedral_ext();
    let j = ext.wreath();
    let g = j.letter(Letter::pos(0));
    let k = j.place(&Point::Int(-1), j.letter(Letter::pos(1))).unwrap();
    let b = BaseElem { g: g.clone(), alpha: BTreeMap::from([(0, k.clone()), (2, k.clone())]) };
    let image = ext.psi_tilde(&b).unwrap();
    let expected_g = j.mul(&j.contract(&Point::Int(1), &g).unwrap(), &k).unwrap();
    assert!(j.equal(&image.g, &expected_g).unwrap());
    assert_eq!(image.alpha.keys().copied().collect::<Vec<_>>(), vec![1]);
    assert_eq!(ext.preimage(&image).unwrap().map(|p| ext.base_key(&p).unwrap()), Some(ext.base_key(&b).unwrap()));
}

#[test]
fn reduction_lowers_level() {
    let ext = dihedral_ext();
    let j = ext.wreath();
    let inner = BaseElem { g: j.letter(Letter::pos(0)), alpha: BTreeMap::new() };
    let raised = HnnElement { level: 2, base: ext.psi_tilde(&inner).unwrap(), shift: 0 };
    let reduced = ext.normalize(&raised).unwrap();
    assert_eq!(reduced.level, 1);
    assert_eq!(ext.base_key(&reduced.base).unwrap(), ext.base_key(&inner).unwrap());
    let stuck = HnnElement { level: 2, base: inner, shift: 0 };
    assert_eq!(ext.normalize(&stuck).unwrap().level, 2);
}

#[test]
fn stable_letter_conjugates_by_psi_tilde() {
    let pair = hnn(&dihedral_pair().unwrap(), Point::Int(1), 2).unwrap();
    let j: &InfiniteWreath = pair.ext.wreath();
    for text in ["t", "r", "t*r*t"] {
        let g = pair.parse_word(text).unwrap();
        let lhs = pair.element(&GroupWord::gen(2).mul(&g).mul(&GroupWord::gen(2).inverse())).unwrap();
        let jg = j.from_word(&g).unwrap();
        let rhs = pair.ext.from_j(j.contract(&Point::Int(1), &jg).unwrap());
        assert!(pair.ext.equal(&lhs, &rhs).unwrap(), "{text}");
    }
    let conj = pair.element(&pair.parse_word("s^-1*t*s").unwrap()).unwrap();
    assert_eq!(conj.level, 1);
}

fn word_strategy(max_len: usize) -> impl Strategy<Value = GroupWord> {
    prop::collection::vec((0..3usize, any::<bool>()), 0..max_len)
        .prop_map(|ls| GroupWord::from_letters(ls.into_iter().map(|(gen, inv)| Letter { gen, inv })))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_laws(a in word_strategy(6), b in word_strategy(6), c in word_strategy(6)) {
        let pair = hnn(&dihedral_pair().unwrap(), Point::Int(1), 1).unwrap();
        let ext = &pair.ext;
        let (ea, eb, ec) = (pair.element(&a).unwrap(), pair.element(&b).unwrap(), pair.element(&c).unwrap());
        let left = ext.mul(&ext.mul(&ea, &eb).unwrap(), &ec).unwrap();
        let right = ext.mul(&ea, &ext.mul(&eb, &ec).unwrap()).unwrap();
        prop_assert!(ext.equal(&left, &right).unwrap());
        let whole = pair.element(&a.mul(&b).mul(&c)).unwrap();
        prop_assert!(ext.equal(&left, &whole).unwrap());
        let inv = ext.inverse(&ea).unwrap();
        prop_assert!(ext.equal(&ext.mul(&ea, &inv).unwrap(), &ext.identity()).unwrap());
        prop_assert!(ext.equal(&inv, &pair.element(&a.inverse()).unwrap()).unwrap());
    }

    #[test]
    fn confluence(a in word_strategy(8), b in word_strategy(8), lift_a in 0u32..3, lift_b in 0u32..3) {
        let pair = hnn(&dihedral_pair().unwrap(), Point::Int(1), 1).unwrap();
        let ext = &pair.ext;
        let raise = |e: HnnElement, n: u32| {
            let mut base = e.base.clone();
            for _ in 0..n {
                base = ext.psi_tilde(&base).unwrap();
            }
            HnnElement { level: e.level + n, base, shift: e.shift }
        };
        let ra = raise(pair.element(&a).unwrap(), lift_a);
        let rb = raise(pair.element(&b).unwrap(), lift_b);
        let direct = ext.normalize(&ext.mul_raw(&ra, &rb).unwrap()).unwrap();
        let staged = ext.normalize(&ext.mul_raw(&ext.normalize(&ra).unwrap(), &ext.normalize(&rb).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(ext.key(&direct).unwrap(), ext.key(&staged).unwrap());
        prop_assert_eq!(direct.level, staged.level);
    }
}
