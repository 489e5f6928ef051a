//! Action oracles: the pair-specific point encodings behind every computation.

use std::fmt;

use crate::error::{Error, Result};
use crate::point::Point;
use crate::words::{Generator, GroupWord, Letter};

/// Which of a pair's two actions is meant.
///
/// `Coset` is left multiplication on G/U. `Domain` is the permutation domain X of a
/// permutation Hecke pair; for catalog pairs the two coincide, for wreath products X
/// is the imprimitive product X1 × X0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Space {
    Coset,
    Domain,
}

/// The action oracle of a pair.
pub trait PairModel: Send + Sync + fmt::Debug {
    fn generators(&self) -> &[Generator];

    fn base(&self, space: Space) -> Point;

    fn act(&self, space: Space, letter: Letter, p: &Point) -> Result<Point>;

    /// Finitely many words in U whose generated subgroup induces the same permutation
    /// group as U on the union of the U-orbits of `points`. For finitely generated U
    /// this is a fixed generating set.
    fn u_generators(&self, points: &[(Space, Point)]) -> Result<Vec<GroupWord>>;

    /// Normal form of the identity element, when the model has exact element arithmetic.
    fn element_identity(&self) -> Option<Point> {
        None
    }

    /// `letter * e` on element normal forms.
    fn element_left_mul(&self, _letter: Letter, _e: &Point) -> Result<Point> {
        Err(Error::InvalidParameter("pair has no element normal form".into()))
    }
}

/// Left action of a word: the rightmost letter acts first.
pub fn act_word(model: &dyn PairModel, space: Space, w: &GroupWord, p: &Point) -> Result<Point> {
    let mut q = p.clone();
    for &l in w.letters().iter().rev() {
        q = model.act(space, l, &q)?;
    }
    Ok(q)
}

/// Exact normal form of the element a word denotes, when the model has one.
pub fn normal_form(model: &dyn PairModel, w: &GroupWord) -> Option<Result<Point>> {
    let mut e = model.element_identity()?;
    for &l in w.letters().iter().rev() {
        match model.element_left_mul(l, &e) {
            Ok(next) => e = next,
            Err(err) => return Some(Err(err)),
        }
    }
    Some(Ok(e))
}

/// Decides whether a word is the identity: exactly via normal forms when available.
pub fn is_identity(model: &dyn PairModel, w: &GroupWord) -> Option<Result<bool>> {
    if w.is_empty() {
        return Some(Ok(true));
    }
    let id = model.element_identity()?;
    Some(normal_form(model, w)?.map(|nf| nf == id))
}
