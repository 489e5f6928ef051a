use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{PairModel, Space};
use crate::point::Point;
use crate::words::{Generator, GroupWord, Letter};

/// Z/q ≀ Z: `a` increments the lamp at 0, `t` shifts the configuration by +1.
/// U is the group of configurations supported on positions ≥ 0.
///
/// Elements are `(m, lamps)`; the coset of `(m, f)` keeps only the lamps at positions < m.
/// Both are encoded as `(m, pos_1, val_1, pos_2, val_2, ...)` with positions ascending.
#[derive(Debug)]
pub struct LamplighterModel {
    q: i128,
    gens: Vec<Generator>,
}

pub const A: usize = 0;
pub const T: usize = 1;

type Lamps = BTreeMap<i128, i128>;

fn decode(p: &Point) -> Result<(i128, Lamps)> {
    let parts = p.as_tuple()?;
    if parts.is_empty() || parts.len() % 2 == 0 {
        return Err(Error::InvalidParameter(format!("bad lamplighter point {p}")));
    }
    let m = parts[0].as_int()?;
    let mut lamps = Lamps::new();
    for pair in parts[1..].chunks(2) {
        lamps.insert(pair[0].as_int()?, pair[1].as_int()?);
    }
    Ok((m, lamps))
}

fn encode(m: i128, lamps: &Lamps) -> Point {
    let mut parts = vec![Point::Int(m)];
    for (&pos, &val) in lamps {
        parts.push(Point::Int(pos));
        parts.push(Point::Int(val));
    }
    Point::Tuple(parts)
}

impl LamplighterModel {
    pub fn new(q: i128) -> Result<Self> {
        if !(2..=1 << 20).contains(&q) {
            return Err(Error::InvalidParameter(format!("lamplighter(q) needs 2 <= q <= 2^20, got {q}")));
        }
        Ok(LamplighterModel { q, gens: vec![Generator::new("a"), Generator::new("t")] })
    }

    pub fn q(&self) -> i128 {
        self.q
    }

    /// `letter * (m, lamps)`; with `coset` set, lamps at positions ≥ m are discarded.
    fn left_mul(&self, l: Letter, p: &Point, coset: bool) -> Result<Point> {
        let (m, lamps) = decode(p)?;
        let (m, lamps) = match (l.gen, l.inv) {
            (A, inv) => {
                let mut lamps = lamps;
                if !coset || 0 < m {
                    let step = if inv { self.q - 1 } else { 1 };
                    let v = (lamps.get(&0).copied().unwrap_or(0) + step) % self.q;
                    if v == 0 {
                        lamps.remove(&0);
                    } else {
                        lamps.insert(0, v);
                    }
                }
                (m, lamps)
            }
            (_, inv) => {
                let d = if inv { -1 } else { 1 };
                let m = m.checked_add(d).ok_or(Error::Overflow("lamplighter shift"))?;
                let lamps = lamps
                    .into_iter()
                    .map(|(pos, v)| (pos + d, v))
                    .filter(|&(pos, _)| !coset || pos < m)
                    .collect();
                (m, lamps)
            }
        };
        Ok(encode(m, &lamps))
    }

    /// The word `t^n a t^-n`: the lamp at position n.
    pub fn lamp_at(n: i64) -> GroupWord {
        GroupWord::power_of(T, n).mul(&GroupWord::gen(A)).mul(&GroupWord::power_of(T, -n))
    }
}

impl PairModel for LamplighterModel {
    fn generators(&self) -> &[Generator] {
        &self.gens
    }

    fn base(&self, _space: Space) -> Point {
        encode(0, &Lamps::new())
    }

    fn act(&self, _space: Space, l: Letter, p: &Point) -> Result<Point> {
        self.left_mul(l, p, true)
    }

    fn u_generators(&self, points: &[(Space, Point)]) -> Result<Vec<GroupWord>> {
        let mut top = 0i128;
        for (_, p) in points {
            top = top.max(decode(p)?.0);
        }
        let top = i64::try_from(top).map_err(|_| Error::Overflow("lamplighter level"))?;
        Ok((0..top).map(Self::lamp_at).collect())
    }

    fn element_identity(&self) -> Option<Point> {
        Some(encode(0, &Lamps::new()))
    }

    fn element_left_mul(&self, l: Letter, e: &Point) -> Result<Point> {
        self.left_mul(l, e, false)
    }
}
