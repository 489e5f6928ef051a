use crate::error::{Error, Result};
use crate::model::{PairModel, Space};
use crate::point::Point;
use crate::words::{Generator, GroupWord, Letter};

/// Z acting on itself by translation; generator `t` is +1 and U is trivial.
#[derive(Debug)]
pub struct TranslationModel {
    gens: Vec<Generator>,
}

impl TranslationModel {
    pub fn new() -> Self {
        TranslationModel { gens: vec![Generator::new("t")] }
    }
}

impl Default for TranslationModel {
    fn default() -> Self {
        Self::new()
    }
}

fn shift(l: Letter, p: &Point) -> Result<Point> {
    let x = p.as_int()?;
    let d = if l.inv { -1 } else { 1 };
    x.checked_add(d).map(Point::Int).ok_or(Error::Overflow("translation"))
}

impl PairModel for TranslationModel {
    fn generators(&self) -> &[Generator] {
        &self.gens
    }

    fn base(&self, _space: Space) -> Point {
        Point::Int(0)
    }

    fn act(&self, _space: Space, l: Letter, p: &Point) -> Result<Point> {
        shift(l, p)
    }

    fn u_generators(&self, _points: &[(Space, Point)]) -> Result<Vec<GroupWord>> {
        Ok(Vec::new())
    }

    fn element_identity(&self) -> Option<Point> {
        Some(Point::Int(0))
    }

    fn element_left_mul(&self, l: Letter, e: &Point) -> Result<Point> {
        shift(l, e)
    }
}
