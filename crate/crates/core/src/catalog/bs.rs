use crate::error::{Error, Result};
use crate::model::{PairModel, Space};
use crate::point::{checked_pow, Point};
use crate::words::{Generator, GroupWord, Letter};

/// BS(1,p) in its affine model on Z[1/p]: `a` is x ↦ x+1, `t` is x ↦ p·x, U = ⟨a⟩.
///
/// An element x ↦ p^k·x + b is encoded as `(k, num, e)` with b = num / p^e. The coset
/// of that element is `(k, b mod p^k Z)` in the same encoding.
#[derive(Debug)]
pub struct BsModel {
    p: i128,
    gens: Vec<Generator>,
}

pub const A: usize = 0;
pub const T: usize = 1;

/// x ↦ p^k·x + num/p^e
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Affine {
    pub k: i128,
    pub num: i128,
    pub e: u32,
}

impl Affine {
    fn decode(p: &Point) -> Result<Affine> {
        let parts = p.as_tuple()?;
        if parts.len() != 3 {
            return Err(Error::InvalidParameter(format!("bad affine point {p}")));
        }
        let e = u32::try_from(parts[2].as_int()?).map_err(|_| Error::InvalidParameter(format!("bad exponent in {p}")))?;
        Ok(Affine { k: parts[0].as_int()?, num: parts[1].as_int()?, e })
    }

    fn encode(self) -> Point {
        Point::Tuple(vec![Point::Int(self.k), Point::Int(self.num), Point::Int(i128::from(self.e))])
    }
}

impl BsModel {
    pub fn new(p: i128) -> Result<Self> {
        if !(2..=1 << 20).contains(&p) {
            return Err(Error::InvalidParameter(format!("bs(p) needs 2 <= p <= 2^20, got {p}")));
        }
        Ok(BsModel { p, gens: vec![Generator::new("a"), Generator::new("t")] })
    }

    pub fn p(&self) -> i128 {
        self.p
    }

    fn normalize(&self, mut x: Affine) -> Affine {
        if x.num == 0 {
            x.e = 0;
        }
        while x.e > 0 && x.num % self.p == 0 {
            x.num /= self.p;
            x.e -= 1;
        }
        x
    }

    /// Reduces the translation part modulo p^k Z.
    fn reduce(&self, x: Affine) -> Result<Affine> {
        let x = self.normalize(x);
        let total = x.k + i128::from(x.e);
        if total <= 0 {
            return Ok(Affine { k: x.k, num: 0, e: 0 });
        }
        let exp = u32::try_from(total).map_err(|_| Error::Overflow("bs modulus"))?;
        let modulus = checked_pow(self.p, exp)?;
        Ok(self.normalize(Affine { k: x.k, num: x.num.rem_euclid(modulus), e: x.e }))
    }

    fn left_mul_affine(&self, l: Letter, x: Affine) -> Result<Affine> {
        let ovf = || Error::Overflow("bs arithmetic");
        let y = match (l.gen, l.inv) {
            (A, inv) => {
                let unit = checked_pow(self.p, x.e)?;
                let num = if inv { x.num.checked_sub(unit) } else { x.num.checked_add(unit) }.ok_or_else(ovf)?;
                Affine { num, ..x }
            }
            (_, false) => Affine { k: x.k + 1, num: x.num.checked_mul(self.p).ok_or_else(ovf)?, e: x.e },
            (_, true) => Affine { k: x.k - 1, num: x.num, e: x.e + 1 },
        };
        Ok(self.normalize(y))
    }

    /// The affine map a word denotes.
    pub fn evaluate(&self, w: &GroupWord) -> Result<Affine> {
        let mut x = Affine { k: 0, num: 0, e: 0 };
        for &l in w.letters().iter().rev() {
            x = self.left_mul_affine(l, x)?;
        }
        Ok(x)
    }
}

impl PairModel for BsModel {
    fn generators(&self) -> &[Generator] {
        &self.gens
    }

    fn base(&self, _space: Space) -> Point {
        Affine { k: 0, num: 0, e: 0 }.encode()
    }

    fn act(&self, _space: Space, l: Letter, p: &Point) -> Result<Point> {
        let x = self.left_mul_affine(l, Affine::decode(p)?)?;
        Ok(self.reduce(x)?.encode())
    }

    fn u_generators(&self, _points: &[(Space, Point)]) -> Result<Vec<GroupWord>> {
        Ok(vec![GroupWord::gen(A)])
    }

    fn element_identity(&self) -> Option<Point> {
        Some(self.base(Space::Coset))
    }

    fn element_left_mul(&self, l: Letter, e: &Point) -> Result<Point> {
        Ok(self.left_mul_affine(l, Affine::decode(e)?)?.encode())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relation_holds() {
        let m = BsModel::new(2).unwrap();
        let g = m.generators().to_vec();
        let lhs = m.evaluate(&GroupWord::parse("t*a*t^-1", &g).unwrap()).unwrap();
        let rhs = m.evaluate(&GroupWord::parse("a^2", &g).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn cosets_collapse_under_a() {
        let m = BsModel::new(2).unwrap();
        let base = m.base(Space::Coset);
        assert_eq!(m.act(Space::Coset, Letter::pos(A), &base).unwrap(), base);
        let tu = m.act(Space::Coset, Letter::pos(T), &base).unwrap();
        let atu = m.act(Space::Coset, Letter::pos(A), &tu).unwrap();
        assert_ne!(atu, tu);
        assert_eq!(m.act(Space::Coset, Letter::pos(A), &atu).unwrap(), tu);
    }
}
