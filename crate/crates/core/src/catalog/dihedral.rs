use crate::error::{Error, Result};
use crate::model::{PairModel, Space};
use crate::point::Point;
use crate::words::{Generator, GroupWord, Letter};

/// D∞ acting on Z: `t` is x ↦ x+1, `r` is x ↦ −x, and U = ⟨r⟩ is the stabilizer of 0.
///
/// Elements are the affine maps x ↦ sign·x + shift, encoded as `(sign, shift)`.
#[derive(Debug)]
pub struct DihedralModel {
    gens: Vec<Generator>,
}

pub const T: usize = 0;
pub const R: usize = 1;

impl DihedralModel {
    pub fn new() -> Self {
        DihedralModel { gens: vec![Generator::new("t"), Generator::new("r")] }
    }
}

impl Default for DihedralModel {
    fn default() -> Self {
        Self::new()
    }
}

fn apply(l: Letter, x: i128) -> Result<i128> {
    match (l.gen, l.inv) {
        (T, false) => x.checked_add(1),
        (T, true) => x.checked_sub(1),
        _ => x.checked_neg(),
    }
    .ok_or(Error::Overflow("dihedral"))
}

impl PairModel for DihedralModel {
    fn generators(&self) -> &[Generator] {
        &self.gens
    }

    fn base(&self, _space: Space) -> Point {
        Point::Int(0)
    }

    fn act(&self, _space: Space, l: Letter, p: &Point) -> Result<Point> {
        apply(l, p.as_int()?).map(Point::Int)
    }

    fn u_generators(&self, _points: &[(Space, Point)]) -> Result<Vec<GroupWord>> {
        Ok(vec![GroupWord::gen(R)])
    }

    fn element_identity(&self) -> Option<Point> {
        Some(Point::Tuple(vec![Point::Int(1), Point::Int(0)]))
    }

    fn element_left_mul(&self, l: Letter, e: &Point) -> Result<Point> {
        let parts = e.as_tuple()?;
        let (sign, shift) = (parts[0].as_int()?, parts[1].as_int()?);
        let (sign, shift) = if l.gen == R { (-sign, -shift) } else { (sign, apply(l, shift)?) };
        Ok(Point::Tuple(vec![Point::Int(sign), Point::Int(shift)]))
    }
}
