//! Perfectization: from (L ⋊ ⟨t⟩, U) to the perfect pair (E, W) inside (L ⋊ Z) ≀ (A5, [5]).
//!
//! E is generated by the 5-cycle c5 = (0 1 2 3 4), the 3-cycle c3 = (0 1 2), the balancing
//! element r (t at 0, t⁻¹ at 1) and f_g (g at 0) for every generator g other than t.
//! W = U^{[5]}. A point of E/W is the tuple of five P-cosets together with the A5 part,
//! stored as the images of 0..4.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{PairModel, Space};
use crate::pair::{Construction, Flag, PairMetadata, PermutationHeckePair, Tri};
use crate::point::Point;
use crate::words::{Generator, GroupWord, Letter};

pub const C5: usize = 0;
pub const C3: usize = 1;
pub const R: usize = 2;
const SLOTS: usize = 5;

type Perm = [usize; SLOTS];

const ID_PERM: Perm = [0, 1, 2, 3, 4];
const CYCLE5: Perm = [1, 2, 3, 4, 0];
const CYCLE3: Perm = [1, 2, 0, 3, 4];

fn compose(a: &Perm, b: &Perm) -> Perm {
    let mut out = [0; SLOTS];
    for i in 0..SLOTS {
        out[i] = a[b[i]];
    }
    out
}

fn invert(a: &Perm) -> Perm {
    let mut out = [0; SLOTS];
    for i in 0..SLOTS {
        out[a[i]] = i;
    }
    out
}

#[derive(Debug)]
pub struct PerfectModel {
    inner: Arc<dyn PairModel>,
    gens: Vec<Generator>,
    t: usize,
    /// Inner generator behind each f-generator, in alphabet order after r.
    f_of: Vec<usize>,
}

/// What one letter does: permute the slots, then multiply slot values on the left.
enum Move {
    Permute(Perm),
    Slots(Vec<(usize, Letter)>),
}

impl PerfectModel {
    fn new(inner: Arc<dyn PairModel>, t: usize) -> Self {
        let mut gens = vec![Generator::new("c5"), Generator::new("c3"), Generator::new("r")];
        let mut f_of = Vec::new();
        for (i, g) in inner.generators().iter().enumerate() {
            if i != t {
                gens.push(Generator::new(format!("f_{}", g.name)));
                f_of.push(i);
            }
        }
        PerfectModel { inner, gens, t, f_of }
    }

    /// The inner generator index and its f-generator, if it has one.
    fn f_gen(&self, inner_gen: usize) -> Option<usize> {
        self.f_of.iter().position(|&g| g == inner_gen).map(|k| R + 1 + k)
    }

    fn moves(&self, l: Letter) -> Move {
        match l.gen {
            C5 => Move::Permute(if l.inv { invert(&CYCLE5) } else { CYCLE5 }),
            C3 => Move::Permute(if l.inv { invert(&CYCLE3) } else { CYCLE3 }),
            R => {
                let t = Letter { gen: self.t, inv: l.inv };
                Move::Slots(vec![(0, t), (1, t.inverse())])
            }
            g => Move::Slots(vec![(0, Letter { gen: self.f_of[g - R - 1], inv: l.inv })]),
        }
    }

    fn split(p: &Point) -> Result<(Vec<Point>, Perm)> {
        let parts = p.as_tuple()?;
        if parts.len() != SLOTS + 1 {
            return Err(Error::InvalidParameter(format!("bad perfectized point {p}")));
        }
        let perm_parts = parts[SLOTS].as_tuple()?;
        if perm_parts.len() != SLOTS {
            return Err(Error::InvalidParameter(format!("bad permutation in {p}")));
        }
        let mut perm = [0; SLOTS];
        for (i, q) in perm_parts.iter().enumerate() {
            perm[i] = usize::try_from(q.as_int()?).map_err(|_| Error::InvalidParameter(format!("bad permutation in {p}")))?;
        }
        Ok((parts[..SLOTS].to_vec(), perm))
    }

    fn join(slots: Vec<Point>, perm: Perm) -> Point {
        let mut parts = slots;
        parts.push(Point::Tuple(perm.iter().map(|&i| Point::Int(i as i128)).collect()));
        Point::Tuple(parts)
    }

    /// (f, τ)·(c, σ) = (f · τ(c), τσ) with τ(c)(i) = c(τ⁻¹ i).
    fn apply(&self, l: Letter, p: &Point, step: impl Fn(Letter, &Point) -> Result<Point>) -> Result<Point> {
        let (mut slots, perm) = Self::split(p)?;
        match self.moves(l) {
            Move::Permute(tau) => {
                let inv = invert(&tau);
                let moved: Vec<Point> = (0..SLOTS).map(|i| slots[inv[i]].clone()).collect();
                Ok(Self::join(moved, compose(&tau, &perm)))
            }
            Move::Slots(changes) => {
                for (i, letter) in changes {
                    slots[i] = step(letter, &slots[i])?;
                }
                Ok(Self::join(slots, perm))
            }
        }
    }

    /// φ: t ↦ r and g ↦ f_g, extended to words.
    pub fn phi(&self, w: &GroupWord) -> GroupWord {
        w.substitute(|g| if g == self.t { GroupWord::gen(R) } else { GroupWord::gen(self.f_gen(g).expect("f-generator")) })
    }

    /// c5^i · φ(w) · c5^{−i}: places a word of L at slot i.
    pub fn place(&self, i: usize, w: &GroupWord) -> GroupWord {
        GroupWord::power_of(C5, i as i64).conjugate(&self.phi(w))
    }
}

impl PairModel for PerfectModel {
    fn generators(&self) -> &[Generator] {
        &self.gens
    }

    fn base(&self, space: Space) -> Point {
        let slot = self.inner.base(space);
        Self::join(vec![slot; SLOTS], ID_PERM)
    }

    fn act(&self, _space: Space, l: Letter, p: &Point) -> Result<Point> {
        self.apply(l, p, |letter, q| self.inner.act(Space::Coset, letter, q))
    }

    fn u_generators(&self, points: &[(Space, Point)]) -> Result<Vec<GroupWord>> {
        let mut request = Vec::new();
        for (_, p) in points {
            let (slots, _) = Self::split(p)?;
            request.extend(slots.into_iter().map(|q| (Space::Coset, q)));
        }
        let inner_gens = self.inner.u_generators(&request)?;
        let mut out = Vec::new();
        for i in 0..SLOTS {
            for u in &inner_gens {
                out.push(self.place(i, u));
            }
        }
        Ok(out)
    }

    fn element_identity(&self) -> Option<Point> {
        let id = self.inner.element_identity()?;
        Some(Self::join(vec![id; SLOTS], ID_PERM))
    }

    fn element_left_mul(&self, l: Letter, e: &Point) -> Result<Point> {
        self.apply(l, e, |letter, q| self.inner.element_left_mul(letter, q))
    }
}

/// perfectize(P) for a pair carrying an L ⋊ ⟨t⟩ witness.
pub fn perfectize(pair: &PermutationHeckePair) -> Result<PermutationHeckePair> {
    let lz = pair
        .metadata
        .lz
        .clone()
        .ok_or_else(|| Error::MissingWitness(format!("L x Z decomposition of {}", pair.name())))?;
    if lz.t >= pair.generators().len() {
        return Err(Error::InvalidParameter(format!("witness generator {} out of range", lz.t)));
    }
    let model = Arc::new(PerfectModel::new(pair.model().clone(), lz.t));
    let pm = &pair.metadata;
    let mut m = PairMetadata::unknown(Construction::Perfectize { pair: Box::new(pm.construction.clone()) });
    let all: Vec<GroupWord> = (0..model.generators().len()).map(GroupWord::gen).collect();
    m.fg_witness = Some(all);
    m.finitely_generated = Flag::by(true, "generated by c5, c3, r and the f-generators");
    m.perfect = Flag::by(true, "generated by the perfect subgroups H and L^0");
    m.transitive = Flag::by(true, "left multiplication on E/W");
    m.proper = match pm.proper.value {
        Tri::True => Flag::by(true, "U^[5] has trivial normal core in L^[5]"),
        _ => Flag::unknown(),
    };
    m.elementary = match pm.elementary.value {
        Tri::True => Flag::by(true, "subgroup of an elementary wreath with A5"),
        _ => Flag::unknown(),
    };
    m.infinite_u = pm.infinite_u.clone();
    m.infinite_domain = pm.infinite_domain.clone();
    m.rank_bound = pm.rank_bound.clone();
    Ok(PermutationHeckePair::new(model, m)?.with_caps(pair.caps()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations() {
        assert_eq!(compose(&CYCLE5, &invert(&CYCLE5)), ID_PERM);
        let mut p = ID_PERM;
        for _ in 0..5 {
            p = compose(&CYCLE5, &p);
        }
        assert_eq!(p, ID_PERM);
        assert_eq!(compose(&CYCLE3, &compose(&CYCLE3, &CYCLE3)), ID_PERM);
    }
}
