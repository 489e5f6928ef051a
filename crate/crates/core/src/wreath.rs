//! Wreath products H0 ≀ (H1, X1) with the imprimitive action on X1 × X0.
//!
//! The subgroup is L = A0^{<X1} ⋊ A1. A coset of L is recorded as the A1-coset of the
//! top part together with the finitely many positions x ∈ X1 whose bottom value is not
//! in A0, each paired with its H0/A0 coset.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{act_word, PairModel, Space};
use crate::pair::{Construction, Flag, PairMetadata, PermutationHeckePair, Tri};
use crate::point::Point;
use crate::words::{Generator, GroupWord, Letter};

pub const MAX_ITERATED_DEPTH: u32 = 6;
const TRANSVERSAL_CAP: usize = 200_000;

/// Incremental BFS over the top domain, recording a word h_x with h_x · base = x.
#[derive(Debug, Default)]
struct Transversal {
    words: HashMap<Point, GroupWord>,
    queue: VecDeque<Point>,
}

enum Part {
    Top(Letter),
    Bottom(Letter),
}

#[derive(Debug)]
pub struct WreathModel {
    bottom: Arc<dyn PairModel>,
    top: Arc<dyn PairModel>,
    gens: Vec<Generator>,
    n_top: usize,
    transversal: RwLock<Transversal>,
}

/// Bottom generator names get primes appended until they are unique.
fn wreath_alphabet(top: &[Generator], bottom: &[Generator]) -> Vec<Generator> {
    let mut names: Vec<Generator> = top.to_vec();
    for g in bottom {
        let mut name = format!("{}'", g.name);
        while names.iter().any(|h| h.name == name) {
            name.push('\'');
        }
        names.push(Generator::new(name));
    }
    names
}

fn entries(p: &Point) -> Result<(Point, BTreeMap<Point, Point>)> {
    let parts = p.as_tuple()?;
    if parts.len() != 2 {
        return Err(Error::InvalidParameter(format!("bad wreath point {p}")));
    }
    let mut map = BTreeMap::new();
    for e in parts[1].as_tuple()? {
        let kv = e.as_tuple()?;
        if kv.len() != 2 {
            return Err(Error::InvalidParameter(format!("bad wreath entry {e}")));
        }
        map.insert(kv[0].clone(), kv[1].clone());
    }
    Ok((parts[0].clone(), map))
}

fn pack(head: Point, map: BTreeMap<Point, Point>) -> Point {
    let list = map.into_iter().map(|(k, v)| Point::Tuple(vec![k, v])).collect();
    Point::Tuple(vec![head, Point::Tuple(list)])
}

impl WreathModel {
    pub fn new(bottom: Arc<dyn PairModel>, top: Arc<dyn PairModel>) -> Self {
        let gens = wreath_alphabet(top.generators(), bottom.generators());
        let n_top = top.generators().len();
        let mut transversal = Transversal::default();
        let b1 = top.base(Space::Domain);
        transversal.words.insert(b1.clone(), GroupWord::identity());
        transversal.queue.push_back(b1);
        WreathModel { bottom, top, gens, n_top, transversal: RwLock::new(transversal) }
    }

    pub fn top(&self) -> &Arc<dyn PairModel> {
        &self.top
    }

    pub fn bottom(&self) -> &Arc<dyn PairModel> {
        &self.bottom
    }

    pub fn n_top(&self) -> usize {
        self.n_top
    }

    fn split(&self, l: Letter) -> Part {
        if l.gen < self.n_top {
            Part::Top(l)
        } else {
            Part::Bottom(Letter { gen: l.gen - self.n_top, inv: l.inv })
        }
    }

    /// A word in the top alphabet, viewed in the wreath.
    pub fn lift_top(&self, w: &GroupWord) -> GroupWord {
        w.clone()
    }

    /// A bottom word placed at the top domain's base point.
    pub fn place(&self, w: &GroupWord) -> GroupWord {
        w.map_gens(|g| g + self.n_top)
    }

    /// A top word h with h · base = x in the top domain.
    pub fn transversal(&self, x: &Point) -> Result<GroupWord> {
        if let Some(w) = self.transversal.read().expect("transversal poisoned").words.get(x) {
            return Ok(w.clone());
        }
        let mut tr = self.transversal.write().expect("transversal poisoned");
        while let Some(p) = tr.queue.pop_front() {
            let w = tr.words[&p].clone();
            for g in 0..self.n_top {
                for l in [Letter::pos(g), Letter::neg(g)] {
                    let q = self.top.act(Space::Domain, l, &p)?;
                    if tr.words.contains_key(&q) {
                        continue;
                    }
                    if tr.words.len() >= TRANSVERSAL_CAP {
                        return Err(Error::OrbitCapExceeded { cap: TRANSVERSAL_CAP });
                    }
                    tr.words.insert(q.clone(), GroupWord::from_letters([l]).mul(&w));
                    tr.queue.push_back(q);
                }
            }
            if let Some(found) = tr.words.get(x) {
                return Ok(found.clone());
            }
        }
        tr.words.get(x).cloned().ok_or_else(|| Error::Unreachable(format!("{x} in the top domain")))
    }

    /// The bottom word `w` placed at position x: h_x · place(w) · h_x⁻¹.
    pub fn place_at(&self, x: &Point, w: &GroupWord) -> Result<GroupWord> {
        Ok(self.transversal(x)?.conjugate(&self.place(w)))
    }

    /// Splits a wreath word into its finitely supported bottom part and its top word.
    pub fn decompose(&self, w: &GroupWord) -> Result<WreathElement> {
        let b1 = self.top.base(Space::Domain);
        let mut prefix = GroupWord::identity();
        let mut pos = b1.clone();
        let mut base_part: BTreeMap<Point, GroupWord> = BTreeMap::new();
        for &l in w.letters() {
            match self.split(l) {
                Part::Top(t) => {
                    prefix.push(t);
                    pos = act_word(self.top.as_ref(), Space::Domain, &prefix, &b1)?;
                }
                Part::Bottom(b) => {
                    let entry = base_part.entry(pos.clone()).or_default();
                    entry.push(b);
                }
            }
        }
        base_part.retain(|_, v| !v.is_empty());
        Ok(WreathElement { base_part, top: prefix })
    }
}

impl PairModel for WreathModel {
    fn generators(&self) -> &[Generator] {
        &self.gens
    }

    fn base(&self, space: Space) -> Point {
        match space {
            Space::Coset => pack(self.top.base(Space::Coset), BTreeMap::new()),
            Space::Domain => Point::Tuple(vec![self.top.base(Space::Domain), self.bottom.base(Space::Domain)]),
        }
    }

    fn act(&self, space: Space, l: Letter, p: &Point) -> Result<Point> {
        match space {
            Space::Domain => {
                let parts = p.as_tuple()?;
                if parts.len() != 2 {
                    return Err(Error::InvalidParameter(format!("bad wreath domain point {p}")));
                }
                let (x, y) = (&parts[0], &parts[1]);
                match self.split(l) {
                    Part::Top(t) => Ok(Point::Tuple(vec![self.top.act(Space::Domain, t, x)?, y.clone()])),
                    Part::Bottom(b) => {
                        if *x == self.top.base(Space::Domain) {
                            Ok(Point::Tuple(vec![x.clone(), self.bottom.act(Space::Domain, b, y)?]))
                        } else {
                            Ok(p.clone())
                        }
                    }
                }
            }
            Space::Coset => {
                let (c1, phi) = entries(p)?;
                match self.split(l) {
                    Part::Top(t) => {
                        let c1 = self.top.act(Space::Coset, t, &c1)?;
                        let mut moved = BTreeMap::new();
                        for (x, v) in phi {
                            moved.insert(self.top.act(Space::Domain, t, &x)?, v);
                        }
                        Ok(pack(c1, moved))
                    }
                    Part::Bottom(b) => {
                        let b1 = self.top.base(Space::Domain);
                        let base0 = self.bottom.base(Space::Coset);
                        let mut phi = phi;
                        let v = phi.remove(&b1).unwrap_or_else(|| base0.clone());
                        let v = self.bottom.act(Space::Coset, b, &v)?;
                        if v != base0 {
                            phi.insert(b1, v);
                        }
                        Ok(pack(c1, phi))
                    }
                }
            }
        }
    }

    fn u_generators(&self, points: &[(Space, Point)]) -> Result<Vec<GroupWord>> {
        let mut top_req: Vec<(Space, Point)> = Vec::new();
        let mut bottom_req: Vec<(Space, Point)> = Vec::new();
        let mut positions: BTreeSet<Point> = BTreeSet::new();
        for (space, p) in points {
            match space {
                Space::Coset => {
                    let (c1, phi) = entries(p)?;
                    top_req.push((Space::Coset, c1));
                    for (x, v) in phi {
                        top_req.push((Space::Domain, x.clone()));
                        bottom_req.push((Space::Coset, v));
                        positions.insert(x);
                    }
                }
                Space::Domain => {
                    let parts = p.as_tuple()?;
                    top_req.push((Space::Domain, parts[0].clone()));
                    bottom_req.push((Space::Domain, parts[1].clone()));
                    positions.insert(parts[0].clone());
                }
            }
        }
        let top_gens = self.top.u_generators(&top_req)?;
        let mut out: Vec<GroupWord> = top_gens.iter().map(|w| self.lift_top(w)).collect();
        if bottom_req.is_empty() {
            return Ok(out);
        }
        let bottom_gens = self.bottom.u_generators(&bottom_req)?;
        if bottom_gens.is_empty() {
            return Ok(out);
        }
        // Close the positions of interest under the top generators of U.
        let signed: Vec<GroupWord> = top_gens.iter().flat_map(|g| [g.clone(), g.inverse()]).collect();
        let mut seen: HashSet<Point> = positions.iter().cloned().collect();
        let mut queue: VecDeque<Point> = positions.into_iter().collect();
        let mut orbit = Vec::new();
        while let Some(x) = queue.pop_front() {
            for s in &signed {
                let y = act_word(self.top.as_ref(), Space::Domain, s, &x)?;
                if seen.insert(y.clone()) {
                    if seen.len() > TRANSVERSAL_CAP {
                        return Err(Error::OrbitCapExceeded { cap: TRANSVERSAL_CAP });
                    }
                    queue.push_back(y);
                }
            }
            orbit.push(x);
        }
        orbit.sort();
        for x in &orbit {
            for s in &bottom_gens {
                out.push(self.place_at(x, s)?);
            }
        }
        Ok(out)
    }

    fn element_identity(&self) -> Option<Point> {
        let top = self.top.element_identity()?;
        self.bottom.element_identity()?;
        Some(pack(top, BTreeMap::new()))
    }

    fn element_left_mul(&self, l: Letter, e: &Point) -> Result<Point> {
        let (g, alpha) = entries(e)?;
        let missing = || Error::InvalidParameter("wreath factor has no element normal form".into());
        match self.split(l) {
            Part::Top(t) => {
                let g = self.top.element_left_mul(t, &g)?;
                let mut moved = BTreeMap::new();
                for (x, v) in alpha {
                    moved.insert(self.top.act(Space::Domain, t, &x)?, v);
                }
                Ok(pack(g, moved))
            }
            Part::Bottom(b) => {
                let id0 = self.bottom.element_identity().ok_or_else(missing)?;
                let b1 = self.top.base(Space::Domain);
                let mut alpha = alpha;
                let v = alpha.remove(&b1).unwrap_or_else(|| id0.clone());
                let v = self.bottom.element_left_mul(b, &v)?;
                if v != id0 {
                    alpha.insert(b1, v);
                }
                Ok(pack(g, alpha))
            }
        }
    }
}

/// An element (α, g) of H0 ≀ (H1, X1) with α finitely supported.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WreathElement {
    pub base_part: BTreeMap<Point, GroupWord>,
    pub top: GroupWord,
}

impl WreathElement {
    pub fn identity() -> Self {
        WreathElement::default()
    }

    /// (α, g)·(x, y) = (g·x, α(g·x)·y).
    pub fn act(&self, model: &WreathModel, p: &Point) -> Result<Point> {
        let parts = p.as_tuple()?;
        if parts.len() != 2 {
            return Err(Error::InvalidParameter(format!("bad wreath domain point {p}")));
        }
        let x = act_word(model.top.as_ref(), Space::Domain, &self.top, &parts[0])?;
        let y = match self.base_part.get(&x) {
            Some(w) => act_word(model.bottom.as_ref(), Space::Domain, w, &parts[1])?,
            None => parts[1].clone(),
        };
        Ok(Point::Tuple(vec![x, y]))
    }

    /// A word in the wreath alphabet denoting this element.
    pub fn to_word(&self, model: &WreathModel) -> Result<GroupWord> {
        let mut w = GroupWord::identity();
        for (x, v) in &self.base_part {
            w = w.mul(&model.place_at(x, v)?);
        }
        Ok(w.mul(&model.lift_top(&self.top)))
    }
}

fn both(a: &Flag, b: &Flag, rule: &str) -> Flag {
    match (a.value, b.value) {
        (Tri::True, Tri::True) => Flag::by(true, rule),
        _ => Flag::unknown(),
    }
}

/// The wreath pair (H0 ≀ (H1, X1), A0^{<X1} ⋊ A1, X1 × X0).
pub fn wreath(bottom: &PermutationHeckePair, top: &PermutationHeckePair) -> Result<PermutationHeckePair> {
    let model = Arc::new(WreathModel::new(bottom.model().clone(), top.model().clone()));
    let (mb, mt) = (&bottom.metadata, &top.metadata);
    let mut m = PairMetadata::unknown(Construction::Wreath {
        bottom: Box::new(mb.construction.clone()),
        top: Box::new(mt.construction.clone()),
    });
    m.transitive = both(&mb.transitive, &mt.transitive, "wreath of transitive pairs");
    if mb.finitely_generated.is_true() && mt.finitely_generated.is_true() && mt.transitive.is_true() {
        if let (Some(f0), Some(f1)) = (&mb.fg_witness, &mt.fg_witness) {
            let mut f: Vec<GroupWord> = f1.iter().map(|w| model.lift_top(w)).collect();
            f.extend(f0.iter().map(|w| model.place(w)));
            m.fg_witness = Some(f);
            m.finitely_generated = Flag::by(true, "wreath of finitely generated pairs over a transitive top");
        }
    }
    m.elementary = both(&mb.elementary, &mt.elementary, "wreath of elementary pairs");
    m.proper = both(&mb.proper, &mt.proper, "wreath of proper pairs");
    m.perfect = match (mb.perfect.value, mt.perfect.value, mt.transitive.value) {
        (Tri::True, Tri::True, _) => Flag::by(true, "wreath of perfect groups"),
        (Tri::False, _, Tri::True) | (_, Tri::False, Tri::True) => {
            Flag::by(false, "abelianization of a wreath surjects onto both factors")
        }
        _ => Flag::unknown(),
    };
    m.infinite_u = if mt.infinite_u.is_true() { Flag::by(true, "top U embeds in U") } else { Flag::unknown() };
    m.infinite_domain = match (mb.infinite_domain.value, mt.infinite_domain.value) {
        (Tri::True, _) | (_, Tri::True) => Flag::by(true, "product of domains"),
        (Tri::False, Tri::False) => Flag::by(false, "product of finite domains"),
        _ => Flag::unknown(),
    };
    Ok(PermutationHeckePair::new(model, m)?.with_caps(top.caps()))
}

/// Rebuilds a pair from the same model and metadata, with its own fresh caches.
pub fn fresh_copy(pair: &PermutationHeckePair) -> Result<PermutationHeckePair> {
    Ok(PermutationHeckePair::new(pair.model().clone(), pair.metadata.clone())?.with_caps(pair.caps()))
}

/// Left-associated k-fold wreath J_k = J_{k-1} ≀ (P, X), J_0 = P.
pub fn iterated_wreath(pair: &PermutationHeckePair, k: u32) -> Result<PermutationHeckePair> {
    if k > MAX_ITERATED_DEPTH {
        return Err(Error::ResourceCap(format!("iterated wreath depth {k} exceeds {MAX_ITERATED_DEPTH}")));
    }
    let mut j = fresh_copy(pair)?;
    for _ in 0..k {
        j = wreath(&j, pair)?;
    }
    j.metadata.construction = Construction::IterWreath { pair: Box::new(pair.metadata.construction.clone()), k };
    Ok(j)
}
