use crate::error::{Error, Result};
use crate::model::{PairModel, Space};
use crate::point::Point;
use crate::words::{Generator, GroupWord, Letter};

/// The free group on `a`, `b` with U = ⟨a⟩. Not a Hecke pair: ⟨a⟩ is not commensurated.
///
/// Elements are reduced words stored run-length encoded as `(gen, exp, gen, exp, ...)`
/// with nonzero exponents and alternating generators. A coset is the reduced word with
/// its trailing power of `a` removed.
#[derive(Debug)]
pub struct Free2Model {
    gens: Vec<Generator>,
}

pub const A: usize = 0;
pub const B: usize = 1;

impl Free2Model {
    pub fn new() -> Self {
        Free2Model { gens: vec![Generator::new("a"), Generator::new("b")] }
    }
}

impl Default for Free2Model {
    fn default() -> Self {
        Self::new()
    }
}

fn runs(p: &Point) -> Result<Vec<(i128, i128)>> {
    let parts = p.as_tuple()?;
    if parts.len() % 2 != 0 {
        return Err(Error::InvalidParameter(format!("bad free-group point {p}")));
    }
    parts.chunks(2).map(|c| Ok((c[0].as_int()?, c[1].as_int()?))).collect()
}

fn encode(runs: &[(i128, i128)]) -> Point {
    Point::Tuple(runs.iter().flat_map(|&(g, e)| [Point::Int(g), Point::Int(e)]).collect())
}

fn prepend(l: Letter, p: &Point) -> Result<Vec<(i128, i128)>> {
    let mut word = runs(p)?;
    let gen = l.gen as i128;
    let step = if l.inv { -1 } else { 1 };
    match word.first_mut() {
        Some((g, e)) if *g == gen => {
            *e = e.checked_add(step).ok_or(Error::Overflow("free group exponent"))?;
            if *e == 0 {
                word.remove(0);
            }
        }
        _ => word.insert(0, (gen, step)),
    }
    Ok(word)
}

impl PairModel for Free2Model {
    fn generators(&self) -> &[Generator] {
        &self.gens
    }

    fn base(&self, _space: Space) -> Point {
        Point::unit()
    }

    fn act(&self, _space: Space, l: Letter, p: &Point) -> Result<Point> {
        let mut word = prepend(l, p)?;
        if word.last().map_or(false, |&(g, _)| g == A as i128) {
            word.pop();
        }
        Ok(encode(&word))
    }

    fn u_generators(&self, _points: &[(Space, Point)]) -> Result<Vec<GroupWord>> {
        Ok(vec![GroupWord::gen(A)])
    }

    fn element_identity(&self) -> Option<Point> {
        Some(Point::unit())
    }

    fn element_left_mul(&self, l: Letter, e: &Point) -> Result<Point> {
        prepend(l, e).map(|w| encode(&w))
    }
}
