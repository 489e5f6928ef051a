//! Concrete seed pairs with exact-arithmetic oracles and by-construction metadata.

pub mod bs;
pub mod dihedral;
pub mod free2;
pub mod lamplighter;
pub mod translation;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{PairModel, Space};
use crate::pair::{Construction, Flag, LzWitness, PairMetadata, PermutationHeckePair};
use crate::point::Point;
use crate::words::{Generator, GroupWord, Letter};

fn builtin(name: &str, params: Vec<i64>) -> Construction {
    Construction::Builtin { name: name.into(), params }
}

fn catalog_metadata(construction: Construction, fg: GroupWord, infinite_u: bool) -> PairMetadata {
    let mut m = PairMetadata::unknown(construction);
    m.finitely_generated = Flag::by(true, "catalog");
    m.fg_witness = Some(vec![fg]);
    m.transitive = Flag::by(true, "catalog: coset action");
    m.proper = Flag::by(true, "catalog: trivial core");
    m.elementary = Flag::by(true, "catalog");
    m.infinite_u = Flag::by(infinite_u, "catalog");
    m.infinite_domain = Flag::by(true, "catalog");
    m
}

/// (Z, {1}) acting on Z.
pub fn translation_pair() -> Result<PermutationHeckePair> {
    let mut m = catalog_metadata(builtin("translation", vec![]), GroupWord::gen(0), false);
    m.perfect = Flag::by(false, "catalog: abelian");
    m.centerless = Flag::by(false, "catalog: abelian");
    m.lz = Some(LzWitness { t: 0 });
    PermutationHeckePair::new(Arc::new(translation::TranslationModel::new()), m)
}

/// (D∞, ⟨r⟩) acting on Z.
pub fn dihedral_pair() -> Result<PermutationHeckePair> {
    let mut m = catalog_metadata(builtin("dihedral", vec![]), GroupWord::gen(dihedral::T), false);
    m.perfect = Flag::by(false, "catalog: abelianization Z/2 x Z/2");
    m.centerless = Flag::by(true, "catalog");
    PermutationHeckePair::new(Arc::new(dihedral::DihedralModel::new()), m)
}

/// (BS(1,p), ⟨a⟩) acting on BS(1,p)/⟨a⟩.
pub fn bs_pair(p: i64) -> Result<PermutationHeckePair> {
    let model = bs::BsModel::new(i128::from(p))?;
    let mut m = catalog_metadata(builtin("bs", vec![p]), GroupWord::gen(bs::T), true);
    m.perfect = Flag::by(false, "catalog: abelianization surjects onto Z");
    m.centerless = Flag::by(true, "catalog");
    m.lz = Some(LzWitness { t: bs::T });
    PermutationHeckePair::new(Arc::new(model), m)
}

/// (Z/q ≀ Z, configurations supported on [0, ∞)).
pub fn lamplighter_pair(q: i64) -> Result<PermutationHeckePair> {
    let model = lamplighter::LamplighterModel::new(i128::from(q))?;
    let mut m = catalog_metadata(builtin("lamplighter", vec![q]), GroupWord::gen(lamplighter::T), true);
    m.perfect = Flag::by(false, "catalog: abelianization surjects onto Z");
    m.centerless = Flag::by(true, "catalog");
    m.lz = Some(LzWitness { t: lamplighter::T });
    PermutationHeckePair::new(Arc::new(model), m)
}

/// (F₂, ⟨a⟩): a pair whose subgroup is not commensurated.
pub fn free2_pair() -> Result<PermutationHeckePair> {
    let mut m = catalog_metadata(builtin("free2", vec![]), GroupWord::gen(free2::B), true);
    m.elementary = Flag::unknown();
    m.perfect = Flag::by(false, "catalog: abelianization Z^2");
    m.centerless = Flag::by(true, "catalog");
    PermutationHeckePair::new(Arc::new(free2::Free2Model::new()), m)
}

/// G acting on itself by left multiplication, U trivial. Needs exact element arithmetic.
#[derive(Debug)]
pub struct TrivialUModel {
    inner: Arc<dyn PairModel>,
    identity: Point,
}

impl PairModel for TrivialUModel {
    fn generators(&self) -> &[Generator] {
        self.inner.generators()
    }

    fn base(&self, _space: Space) -> Point {
        self.identity.clone()
    }

    fn act(&self, _space: Space, l: Letter, p: &Point) -> Result<Point> {
        self.inner.element_left_mul(l, p)
    }

    fn u_generators(&self, _points: &[(Space, Point)]) -> Result<Vec<GroupWord>> {
        Ok(Vec::new())
    }

    fn element_identity(&self) -> Option<Point> {
        Some(self.identity.clone())
    }

    fn element_left_mul(&self, l: Letter, e: &Point) -> Result<Point> {
        self.inner.element_left_mul(l, e)
    }
}

/// (G, {1}) for the group G of an existing pair.
pub fn trivial_u_pair(group: &PermutationHeckePair) -> Result<PermutationHeckePair> {
    let inner = group.model().clone();
    let identity = inner
        .element_identity()
        .ok_or_else(|| Error::InvalidParameter("trivial_u needs a group with exact element arithmetic".into()))?;
    let construction = Construction::TrivialU { group: Box::new(group.metadata.construction.clone()) };
    let gens = (0..inner.generators().len()).map(GroupWord::gen).collect::<Vec<_>>();
    let mut m = PairMetadata::unknown(construction);
    m.finitely_generated = Flag::by(true, "catalog: all generators");
    m.fg_witness = Some(gens);
    m.transitive = Flag::by(true, "catalog: regular action");
    m.proper = Flag::by(true, "catalog: trivial U");
    m.elementary = Flag::by(true, "catalog: discrete completion");
    m.perfect = group.metadata.perfect.clone();
    m.centerless = group.metadata.centerless.clone();
    m.infinite_u = Flag::by(false, "catalog: trivial U");
    m.infinite_domain = group.metadata.infinite_domain.clone();
    m.lz = group.metadata.lz.clone();
    PermutationHeckePair::new(Arc::new(TrivialUModel { inner, identity }), m).map(|p| p.with_caps(group.caps()))
}

/// Builds a catalog pair by DSL name.
pub fn by_name(name: &str, params: &[i64]) -> Result<PermutationHeckePair> {
    let arity = |n: usize| -> Result<()> {
        if params.len() == n {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("{name} takes {n} parameter(s), got {}", params.len())))
        }
    };
    match name {
        "bs" => {
            arity(1)?;
            bs_pair(params[0])
        }
        "lamplighter" => {
            arity(1)?;
            lamplighter_pair(params[0])
        }
        "dihedral" => {
            arity(0)?;
            dihedral_pair()
        }
        "translation" => {
            arity(0)?;
            translation_pair()
        }
        "free2" => {
            arity(0)?;
            free2_pair()
        }
        other => Err(Error::InvalidParameter(format!("unknown builtin pair `{other}`"))),
    }
}

pub const BUILTIN_NAMES: &[&str] = &["bs", "lamplighter", "dihedral", "translation", "free2"];
